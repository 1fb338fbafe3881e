//! `verify`: theorem-level claims with pass/fail exit semantics.

use serde_json::json;

use super::{claim_outcome, CliError};
use crate::args::{Cli, VerifyClaim};
use crate::report::emit;
use gcurv::asymptotics::{
    critical_continuity_check, verify_geometric_limits, verify_main_theorem, verify_yau_ratios,
    wachstum_check,
};
use gcurv::families::ClosedFormSolution;
use gcurv::solver::check_max_principle;
use gcurv::Complex64;

pub fn run(cli: &Cli, claim: &VerifyClaim) -> Result<(), CliError> {
    match claim {
        VerifyClaim::MainTheorem { id, alpha } => main_theorem(cli, id, *alpha),
        VerifyClaim::Geometric { id, alpha } => geometric(cli, id, *alpha),
        VerifyClaim::Yau { id, alpha } => yau(cli, id, *alpha),
        VerifyClaim::Wachstum { id, alpha } => wachstum(cli, id, *alpha),
        VerifyClaim::Continuity { id, alpha, tol } => continuity(cli, id, *alpha, *tol),
        VerifyClaim::MaxPrinciple { pair } => max_principle(cli, pair),
    }
}

/// Deep dyadic ladder for entries with closed derivatives, shallower for
/// numeric-stencil metrics (the derivative step has an absolute floor).
fn metric_radii(sol: &ClosedFormSolution<f64>) -> Vec<f64> {
    let range = if sol.has_closed_derivatives() { 14..=24 } else { 6..=16 };
    range.step_by(2).map(|k| 2.0f64.powi(-k)).collect()
}

fn main_theorem(cli: &Cli, id: &str, alpha: Option<f64>) -> Result<(), CliError> {
    let sol = gcurv::families::resolve::<f64>(id, alpha)?;
    let rep = verify_main_theorem(&sol)?;
    let pass = rep.all_pass();
    let text = vec![
        format!("id         {}", sol.id()),
        format!("alpha_hat  {}", rep.alpha_hat),
        format!("verdicts   {:?}", rep.rate_verdicts.iter().map(|v| &v.verdict).collect::<Vec<_>>()),
        format!("pass       {pass}"),
    ];
    let fail = format!("main-theorem rates failed for {}", sol.id());
    emit(cli, "verify-main-theorem", json!({ "claim": "main-theorem", "pass": pass, "detail": rep }), &text, vec![])?;
    claim_outcome(cli, pass, fail)
}

fn geometric(cli: &Cli, id: &str, alpha: Option<f64>) -> Result<(), CliError> {
    let sol = gcurv::families::resolve::<f64>(id, alpha)?;
    let radii = metric_radii(&sol);
    let theta = 0.7;
    let kappa0 = sol.kappa(Complex64::from_polar(1e-9, theta));
    let gl = verify_geometric_limits(&sol.metric(), kappa0, sol.alpha(), &radii);
    let text = vec![
        format!("id          {}", sol.id()),
        format!("density     {}  (target {})", gl.limit_density, gl.target_density),
        format!("connection  {}  (target {})", gl.limit_connection, gl.target_connection),
        format!("schwarzian  {}  (target {})", gl.limit_schwarzian, gl.target_schwarzian),
        format!("pass        {}", gl.pass),
    ];
    let pass = gl.pass;
    let fail = format!("geometric limits failed for {}", sol.id());
    emit(cli, "verify-geometric", json!({ "claim": "geometric", "pass": pass, "detail": gl }), &text, vec![])?;
    claim_outcome(cli, pass, fail)
}

fn yau(cli: &Cli, id: &str, alpha: Option<f64>) -> Result<(), CliError> {
    let sol = gcurv::families::resolve::<f64>(id, alpha)?;
    let radii = metric_radii(&sol);
    let yr = verify_yau_ratios(&sol.metric(), &radii);
    let text = vec![
        format!("id            {}", sol.id()),
        format!("density       {}", yr.limit_density),
        format!("connection    {}", yr.limit_connection),
        format!("schwarzian    {}", yr.limit_schwarzian),
        format!("precondition  {}", yr.precondition_ok),
        format!("pass          {}", yr.pass),
    ];
    let pass = yr.pass;
    let fail = if yr.precondition_ok {
        format!("Yau ratios failed for {}", sol.id())
    } else {
        format!("completeness precondition failed for {}", sol.id())
    };
    emit(cli, "verify-yau", json!({ "claim": "yau", "pass": pass, "detail": yr }), &text, vec![])?;
    claim_outcome(cli, pass, fail)
}

fn wachstum(cli: &Cli, id: &str, alpha: Option<f64>) -> Result<(), CliError> {
    let sol = gcurv::families::resolve::<f64>(id, alpha)?;
    if sol.branch() != gcurv::families::Branch::Critical {
        return Err(CliError::Usage(format!(
            "wachstum applies to critical-order entries; {} has alpha = {}",
            sol.id(),
            sol.alpha()
        )));
    }
    let radii: Vec<f64> = (7..=26).map(|k| 2.0f64.powi(-k)).collect();
    let u = sol.u_fn();
    let kap = sol.kappa_field().kappa_fn();
    let w = wachstum_check(move |z| u(z), move |z| kap(z), &radii);
    let text = vec![
        format!("id        {}", sol.id()),
        format!("bounded   {}", w.bounded),
        format!("limit     {}", w.extrapolated_limit),
        format!("residual  {:e}", w.fit_residual),
    ];
    let pass = w.bounded;
    let fail = format!("growth bound unbounded for {}", sol.id());
    emit(cli, "verify-wachstum", json!({ "claim": "wachstum", "pass": pass, "detail": w }), &text, vec![])?;
    claim_outcome(cli, pass, fail)
}

fn continuity(cli: &Cli, id: &str, alpha: Option<f64>, tol: f64) -> Result<(), CliError> {
    let sol = gcurv::families::resolve::<f64>(id, alpha)?;
    if sol.branch() != gcurv::families::Branch::Critical {
        return Err(CliError::Usage(format!(
            "continuity applies to critical-order entries; {} has alpha = {}",
            sol.id(),
            sol.alpha()
        )));
    }
    let radii: Vec<f64> = (8..=26).map(|k| 2.0f64.powi(-k)).collect();
    let u = sol.u_fn();
    let kap = sol.kappa_field().kappa_fn();
    let rep = critical_continuity_check(move |z| u(z), move |z| kap(z), &radii, tol);
    let text = vec![
        format!("id           {}", sol.id()),
        format!("w_limit      {}", rep.w_limit),
        format!("target       {}", rep.target),
        format!("oscillation  decays: {}", rep.oscillation_decays),
        format!("pass         {}", rep.pass),
    ];
    let pass = rep.pass;
    let fail = format!("critical continuity failed for {}", sol.id());
    emit(cli, "verify-continuity", json!({ "claim": "continuity", "pass": pass, "detail": rep }), &text, vec![])?;
    claim_outcome(cli, pass, fail)
}

/// The claim here is the maximum-principle *theorem*: whenever all four
/// hypotheses hold, the conclusion `u₁ ≤ u₂` must hold. A counterexample
/// pair that fails a hypothesis and violates the conclusion is a consistent
/// verdict (exit 0) — the report names the failing hypothesis.
fn max_principle(cli: &Cli, pair_id: &str) -> Result<(), CliError> {
    let grid = gcurv::grid::build_grid(1e-3, 0.999, 25, 64)?;
    let (u1, u2, kappa, label) = if pair_id == "genuine" {
        let sub = gcurv::families::subsolution_family(0.5, 4.0, 2.0)?;
        let sup = gcurv::families::supersolution_family(0.5, 4.0)?;
        (
            sub.u_fn(),
            sup.u_fn(),
            gcurv::metrics::CurvatureField::constant(-4.0),
            "genuine".to_string(),
        )
    } else {
        let sol = gcurv::families::counterexample::<f64>(pair_id)?;
        let pair = sol.pair().ok_or_else(|| {
            CliError::Usage(format!("{pair_id} carries no comparison pair"))
        })?;
        (
            pair.u1.clone(),
            pair.u2.clone(),
            sol.kappa_field().clone(),
            sol.id().to_string(),
        )
    };
    let rep = check_max_principle(&u1, &u2, &kappa, &grid);
    // theorem violated only if every hypothesis holds yet the gap is negative
    let pass = !rep.failing.is_empty() || rep.conclusion_holds;
    let text = vec![
        format!("pair         {label}"),
        format!("failing      {:?}", rep.failing),
        format!("min_gap      {}", rep.conclusion_min_gap),
        format!("conclusion   {}", rep.conclusion_holds),
        format!("consistent   {pass}"),
    ];
    let fail = format!("maximum principle violated for pair {label}");
    emit(cli, "verify-max-principle", json!({ "claim": "max-principle", "pass": pass, "detail": rep }), &text, vec![])?;
    claim_outcome(cli, pass, fail)
}
