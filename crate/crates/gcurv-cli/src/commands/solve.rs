//! `solve radial` and `solve annulus`.

use serde_json::json;
use std::path::PathBuf;

use super::CliError;
use crate::args::{Cli, SolveMode};
use crate::report::{atomic_write, emit, fmt_f64};
use gcurv::metrics::CurvatureField;
use gcurv::solver::{solve_dirichlet_annulus, solve_radial, SolveConfig};
use gcurv::Complex64;

pub fn run(cli: &Cli, mode: &SolveMode) -> Result<(), CliError> {
    match mode {
        SolveMode::Radial {
            kappa,
            r_in,
            r_out,
            n,
            oracle,
            alpha,
            u_in,
            u_out,
            tol,
            max_iters,
        } => radial(
            cli, *kappa, *r_in, *r_out, *n, oracle.as_deref(), *alpha, *u_in, *u_out, *tol,
            *max_iters,
        ),
        SolveMode::Annulus {
            kappa,
            r_in,
            r_out,
            grid,
            oracle,
            alpha,
            bc_const,
            tol,
            max_iters,
        } => annulus(
            cli, *kappa, *r_in, *r_out, grid, oracle.as_deref(), *alpha, *bc_const, *tol,
            *max_iters,
        ),
    }
}

fn check_common(kappa: f64, tol: f64) -> Result<(), CliError> {
    if kappa >= 0.0 {
        return Err(CliError::Usage(format!(
            "curvature must be strictly negative, got {kappa}"
        )));
    }
    if !(tol > 0.0) {
        return Err(CliError::Usage(format!("tolerance must be positive, got {tol}")));
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn radial(
    cli: &Cli,
    kappa: f64,
    r_in: f64,
    r_out: f64,
    n: usize,
    oracle: Option<&str>,
    alpha: Option<f64>,
    u_in: Option<f64>,
    u_out: Option<f64>,
    tol: f64,
    max_iters: usize,
) -> Result<(), CliError> {
    check_common(kappa, tol)?;
    let oracle_sol = oracle
        .map(|id| gcurv::families::resolve::<f64>(id, alpha))
        .transpose()?;
    let (bc_in, bc_out) = match (&oracle_sol, u_in, u_out) {
        (Some(sol), _, _) => (
            sol.u(Complex64::new(r_in, 0.0)),
            sol.u(Complex64::new(r_out, 0.0)),
        ),
        (None, Some(a), Some(b)) => (a, b),
        _ => {
            return Err(CliError::Usage(
                "either --oracle or both --u-in and --u-out are required".into(),
            ))
        }
    };
    let cfg = SolveConfig { max_iters, tol };
    let (u, trace) = solve_radial(|_r| kappa, r_in, r_out, bc_in, bc_out, n, &cfg)?;

    let h = (r_out.ln() - r_in.ln()) / (n - 1) as f64;
    let mut sup_error: Option<f64> = None;
    let mut csv = String::from("r,u\n");
    for (i, &ui) in u.iter().enumerate() {
        let r = (r_in.ln() + h * i as f64).exp();
        csv.push_str(&format!("{},{}\n", fmt_f64(r), fmt_f64(ui)));
        if let Some(sol) = &oracle_sol {
            let e = (ui - sol.u(Complex64::new(r, 0.0))).abs();
            sup_error = Some(sup_error.unwrap_or(0.0).max(e));
        }
    }
    let mut extra: Vec<PathBuf> = vec![];
    if let Some(dir) = &cli.out {
        let path = dir.join("profile.csv");
        atomic_write(&path, csv.as_bytes())?;
        extra.push(path);
    }
    let mut text = vec![
        format!("converged   {}", trace.converged),
        format!("iterations  {}", trace.iterations),
        format!("residual    {:e}", trace.final_residual),
    ];
    if let Some(e) = sup_error {
        text.push(format!("sup_error   {e:e}"));
    }
    let report = json!({
        "mode": "radial",
        "kappa": kappa,
        "n": n,
        "oracle": oracle,
        "trace": trace,
        "sup_error": sup_error,
    });
    emit(cli, "solve-radial", report, &text, extra)
}

fn parse_grid(s: &str) -> Result<(usize, usize), CliError> {
    let err = || CliError::Usage(format!("expected grid as `NRxNT`, got `{s}`"));
    let (a, b) = s.split_once('x').ok_or_else(err)?;
    Ok((
        a.trim().parse().map_err(|_| err())?,
        b.trim().parse().map_err(|_| err())?,
    ))
}

#[allow(clippy::too_many_arguments)]
fn annulus(
    cli: &Cli,
    kappa: f64,
    r_in: f64,
    r_out: f64,
    grid_str: &str,
    oracle: Option<&str>,
    alpha: Option<f64>,
    bc_const: Option<f64>,
    tol: f64,
    max_iters: usize,
) -> Result<(), CliError> {
    check_common(kappa, tol)?;
    let (nr, nt) = parse_grid(grid_str)?;
    let grid = gcurv::grid::build_grid(r_in, r_out, nr, nt)?;
    let oracle_sol = oracle
        .map(|id| gcurv::families::resolve::<f64>(id, alpha))
        .transpose()?;
    let bc = |ring: usize| -> Result<Vec<f64>, CliError> {
        match (&oracle_sol, bc_const) {
            (Some(sol), _) => Ok((0..nt).map(|j| sol.u(grid.z(ring, j))).collect()),
            (None, Some(c)) => Ok(vec![c; nt]),
            _ => Err(CliError::Usage(
                "either --oracle or --bc-const is required".into(),
            )),
        }
    };
    let inner = bc(0)?;
    let outer = bc(nr - 1)?;
    let field = CurvatureField::constant(kappa);
    let cfg = SolveConfig { max_iters, tol };
    let (u, trace) = solve_dirichlet_annulus(&field, &grid, &inner, &outer, &cfg)?;

    let mut sup_error: Option<f64> = None;
    let mut csv = String::from("r,theta,u\n");
    for i in 0..nr {
        for j in 0..nt {
            let z = grid.z(i, j);
            csv.push_str(&format!(
                "{},{},{}\n",
                fmt_f64(z.norm()),
                fmt_f64(z.arg()),
                fmt_f64(u.at(i, j))
            ));
            if let Some(sol) = &oracle_sol {
                let e = (u.at(i, j) - sol.u(z)).abs();
                sup_error = Some(sup_error.unwrap_or(0.0).max(e));
            }
        }
    }
    let mut extra: Vec<PathBuf> = vec![];
    if let Some(dir) = &cli.out {
        let path = dir.join("field.csv");
        atomic_write(&path, csv.as_bytes())?;
        extra.push(path);
    }
    let mut text = vec![
        format!("converged   {}", trace.converged),
        format!("iterations  {}", trace.iterations),
        format!("residual    {:e}", trace.final_residual),
        format!("bracketed   {}", trace.bracketed),
        format!("ahlfors_ok  {}", trace.ahlfors_ok()),
    ];
    if let Some(e) = sup_error {
        text.push(format!("sup_error   {e:e}"));
    }
    let report = json!({
        "mode": "annulus",
        "kappa": kappa,
        "grid": [nr, nt],
        "oracle": oracle,
        "trace": trace,
        "sup_error": sup_error,
    });
    emit(cli, "solve-annulus", report, &text, extra)
}
