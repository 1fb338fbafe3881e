//! `classify`: order estimation at the puncture for a catalog entry.

use serde_json::json;

use super::CliError;
use crate::args::Cli;
use crate::report::emit;
use gcurv::asymptotics::{dyadic_radii, estimate_order, raw_order_ratio};
use gcurv::families::Branch;

pub fn run(cli: &Cli, id: &str, alpha: Option<f64>) -> Result<(), CliError> {
    let sol = gcurv::families::resolve::<f64>(id, alpha)?;
    let radii: Vec<f64> = dyadic_radii(8, 26);
    let u = sol.u_fn();
    let (alpha_hat, stderr) = estimate_order({ let u = u.clone(); move |z| u(z) }, &radii)?;
    let raw = raw_order_ratio(move |z| u(z), &radii);
    let branch = if (alpha_hat - 1.0).abs() <= 1e-2 {
        Branch::Critical
    } else {
        Branch::Subcritical
    };
    let declared = sol.alpha();
    let matches_declared = (alpha_hat - declared).abs() <= 1e-2;
    let text = vec![
        format!("id            {}", sol.id()),
        format!("alpha_hat     {}", alpha_hat),
        format!("stderr        {:e}", stderr),
        format!("raw_ratio     {}", raw),
        format!("branch        {:?}", branch),
        format!("declared      {}", declared),
        format!("matches       {}", matches_declared),
    ];
    let report = json!({
        "id": sol.id(),
        "alpha_hat": alpha_hat,
        "alpha_stderr": stderr,
        "raw_order_ratio": raw,
        "branch": branch,
        "declared_alpha": declared,
        "matches_declared": matches_declared,
    });
    emit(cli, "classify", report, &text, vec![])
}
