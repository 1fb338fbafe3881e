//! Command implementations and the exit-code contract.

mod classify;
mod curvature;
mod families;
mod potential;
mod solve;
mod verify;

use thiserror::Error;

use crate::args::{Cli, Command};

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad input: unknown id, malformed point, violated precondition.
    #[error("{0}")]
    Usage(String),
    /// An iterative solve or adaptive quadrature did not converge.
    #[error("{0}")]
    NonConvergence(String),
    /// A verified claim failed (or, under `--expect-fail`, passed).
    #[error("{0}")]
    FailedClaim(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => 2,
            CliError::NonConvergence(_) => 3,
            CliError::FailedClaim(_) => 4,
        }
    }
}

impl From<gcurv::families::FamilyError> for CliError {
    fn from(e: gcurv::families::FamilyError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<gcurv::grid::GridError> for CliError {
    fn from(e: gcurv::grid::GridError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<gcurv::solver::SolverError> for CliError {
    fn from(e: gcurv::solver::SolverError) -> Self {
        use gcurv::solver::SolverError::*;
        match e {
            Precondition(msg) => CliError::Usage(msg),
            other => CliError::NonConvergence(other.to_string()),
        }
    }
}

impl From<gcurv::potential::PotentialError> for CliError {
    fn from(e: gcurv::potential::PotentialError) -> Self {
        use gcurv::potential::PotentialError::*;
        match e {
            NodeCapExceeded { .. } => CliError::NonConvergence(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<gcurv::asymptotics::AsymptoticsError> for CliError {
    fn from(e: gcurv::asymptotics::AsymptoticsError) -> Self {
        CliError::Usage(e.to_string())
    }
}

/// Parse an `x,y` point.
pub fn parse_point(s: &str) -> Result<gcurv::Complex64, CliError> {
    let err = || CliError::Usage(format!("expected a point as `x,y`, got `{s}`"));
    let (x, y) = s.split_once(',').ok_or_else(err)?;
    let x: f64 = x.trim().parse().map_err(|_| err())?;
    let y: f64 = y.trim().parse().map_err(|_| err())?;
    Ok(gcurv::Complex64::new(x, y))
}

/// Fold a claim verdict through `--expect-fail`: a failure is the expected
/// outcome for negative-control targets.
pub fn claim_outcome(cli: &Cli, pass: bool, fail_msg: String) -> Result<(), CliError> {
    match (pass, cli.expect_fail) {
        (true, false) | (false, true) => Ok(()),
        (false, false) => Err(CliError::FailedClaim(fail_msg)),
        (true, true) => Err(CliError::FailedClaim(
            "claim passed but --expect-fail was given".into(),
        )),
    }
}

pub fn dispatch(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Families { action } => families::run(cli, action),
        Command::Curvature { id, alpha, z } => curvature::run(cli, id, *alpha, z),
        Command::Solve { mode } => solve::run(cli, mode),
        Command::Classify { id, alpha } => classify::run(cli, id, *alpha),
        Command::Verify { claim } => verify::run(cli, claim),
        Command::Potential {
            weight,
            alpha,
            radius,
            q_const,
            z,
            deriv,
            gamma,
            tol,
        } => potential::run(cli, *weight, *alpha, *radius, *q_const, z, *deriv, *gamma, *tol),
    }
}
