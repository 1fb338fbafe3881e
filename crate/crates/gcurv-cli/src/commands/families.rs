//! `families list` and `families eval`.

use serde_json::json;

use super::{parse_point, CliError};
use crate::args::{Cli, FamiliesAction};
use crate::report::emit;

pub fn run(cli: &Cli, action: &FamiliesAction) -> Result<(), CliError> {
    match action {
        FamiliesAction::List => list(cli),
        FamiliesAction::Eval { id, alpha, z } => eval(cli, id, *alpha, z),
    }
}

fn list(cli: &Cli) -> Result<(), CliError> {
    let entries: Vec<_> = gcurv::families::catalog::<f64>()
        .iter()
        .map(|s| s.info())
        .collect();
    let mut text = vec![format!("{:<28} {:>7}  {:<6}  citation", "id", "alpha", "closed")];
    for e in &entries {
        text.push(format!(
            "{:<28} {:>7}  {:<6}  {}",
            e.id,
            e.alpha,
            if e.has_closed_derivatives { "yes" } else { "no" },
            e.citation
        ));
    }
    text.push(format!("{} entries", entries.len()));
    let report = json!({ "entries": entries, "count": entries.len() });
    emit(cli, "families-list", report, &text, vec![])
}

fn eval(cli: &Cli, id: &str, alpha: Option<f64>, z: &str) -> Result<(), CliError> {
    let z = parse_point(z)?;
    let sol = gcurv::families::resolve::<f64>(id, alpha)?;
    if z.norm() <= 0.0 || z.norm() >= 1.0 {
        return Err(CliError::Usage(format!(
            "evaluation point must satisfy 0 < |z| < 1, got |z| = {}",
            z.norm()
        )));
    }
    let u = sol.u(z);
    let residual = sol.residual_at(z);
    let remainder = sol.remainder_closed(z);
    let d1 = sol.d1_closed(z);
    let d2 = sol.d2_closed(z);

    let mut text = vec![
        format!("id        {}", sol.id()),
        format!("alpha     {}", sol.alpha()),
        format!("z         {} + {}i", z.re, z.im),
        format!("u         {}", u),
        format!("kappa     {}", sol.kappa(z)),
        format!("residual  {:e}", residual),
    ];
    if let Some(w) = remainder {
        text.push(format!("remainder {w}"));
    }
    if let Some(d) = d1 {
        text.push(format!("d1        {} + {}i", d.re, d.im));
    }
    if let Some(d) = d2 {
        text.push(format!("d2        {} + {}i", d.re, d.im));
    }
    let report = json!({
        "id": sol.id(),
        "alpha": sol.alpha(),
        "z": [z.re, z.im],
        "u": u,
        "kappa": sol.kappa(z),
        "residual": residual,
        "remainder": remainder,
        "remainder_d1": d1.map(|d| [d.re, d.im]),
        "remainder_d2": d2.map(|d| [d.re, d.im]),
        "angle_admissible": sol.angle_admissible(z.arg()),
    });
    emit(cli, "families-eval", report, &text, vec![])
}
