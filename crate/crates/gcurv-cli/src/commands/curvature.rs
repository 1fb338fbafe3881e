//! `curvature`: Gaussian curvature of a catalog metric at a point.

use serde_json::json;

use super::{parse_point, CliError};
use crate::args::Cli;
use crate::report::emit;

pub fn run(cli: &Cli, id: &str, alpha: Option<f64>, z: &str) -> Result<(), CliError> {
    let z = parse_point(z)?;
    let sol = gcurv::families::resolve::<f64>(id, alpha)?;
    if z.norm() <= 0.0 || z.norm() >= 1.0 {
        return Err(CliError::Usage(format!(
            "evaluation point must satisfy 0 < |z| < 1, got |z| = {}",
            z.norm()
        )));
    }
    let m = sol.metric();
    let computed = gcurv::metrics::curvature(&m, z)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let declared = sol.kappa(z);
    let deviation = (computed - declared).abs();
    let text = vec![
        format!("id        {}", sol.id()),
        format!("z         {} + {}i", z.re, z.im),
        format!("lambda    {}", m.lambda(z)),
        format!("curvature {}", computed),
        format!("declared  {}", declared),
        format!("deviation {:e}", deviation),
    ];
    let report = json!({
        "id": sol.id(),
        "z": [z.re, z.im],
        "lambda": m.lambda(z),
        "curvature": computed,
        "declared_kappa": declared,
        "deviation": deviation,
    });
    emit(cli, "curvature", report, &text, vec![])
}
