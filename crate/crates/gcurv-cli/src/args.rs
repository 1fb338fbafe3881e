//! Command-line grammar (clap derive).

use clap::{Parser, Subcommand, ValueEnum};
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(name = "gcurv", version, about = "Numerical laboratory for Δu = −κ(z)e^{2u} near an isolated boundary point", max_term_width = 100)]
pub struct Cli {
    /// Directory for report files (written atomically; stdout is unaffected)
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,

    /// Emit the full JSON report (with manifest) on stdout instead of text
    #[arg(long, global = true)]
    pub json: bool,

    /// Invert the verdict exit code: a failed claim exits 0, a passed claim
    /// exits 4 (for negative-control targets that are expected to fail)
    #[arg(long, global = true)]
    pub expect_fail: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Catalog of closed-form solutions and counterexamples
    Families {
        #[command(subcommand)]
        action: FamiliesAction,
    },
    /// Gaussian curvature of a catalog metric at a point
    Curvature {
        #[arg(long)]
        id: String,
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<f64>,
        /// Evaluation point as `x,y`
        #[arg(long, allow_hyphen_values = true)]
        z: String,
    },
    /// Dirichlet solves for Δu = −κ e^{2u}
    Solve {
        #[command(subcommand)]
        mode: SolveMode,
    },
    /// Order classification of a catalog solution at the puncture
    Classify {
        #[arg(long)]
        id: String,
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<f64>,
    },
    /// Verify a theorem-level claim (exit 4 when the claim fails)
    Verify {
        #[command(subcommand)]
        claim: VerifyClaim,
    },
    /// Newton potential with weighted density q(ξ)·w(|ξ|)
    Potential {
        /// Radial weight: |ξ|^{−2α} or the critical 1/log(1/|ξ|)
        #[arg(long, value_enum, default_value_t = WeightKind::Power)]
        weight: WeightKind,
        /// Order parameter α < 1 (power weight only)
        #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
        alpha: f64,
        /// Disk radius r (0 < r ≤ 1; strictly < 1 for the critical weight)
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
        /// Constant factor q ≡ c of the density
        #[arg(long, allow_hyphen_values = true, default_value_t = 1.0)]
        q_const: f64,
        /// Evaluation point as `x,y`
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        /// What to evaluate: the potential, its gradient (with a
        /// finite-difference cross-check), or its Hessian
        #[arg(long, value_enum, default_value_t = DerivKind::Value)]
        deriv: DerivKind,
        /// Hölder exponent used by the Hessian quadrature
        #[arg(long, default_value_t = 1.0)]
        gamma: f64,
        /// Quadrature tolerance
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
}

#[derive(Debug, Subcommand)]
pub enum FamiliesAction {
    /// List all catalog entries
    List,
    /// Evaluate one entry at a point (value, residual, remainder data)
    Eval {
        #[arg(long)]
        id: String,
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<f64>,
        /// Evaluation point as `x,y`
        #[arg(long, allow_hyphen_values = true)]
        z: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum SolveMode {
    /// Radial two-point problem on [r_in, r_out] (Numerov + damped Newton)
    Radial {
        /// Constant curvature κ < 0
        #[arg(long, allow_hyphen_values = true)]
        kappa: f64,
        #[arg(long, default_value_t = 1e-3)]
        r_in: f64,
        #[arg(long, default_value_t = 0.9)]
        r_out: f64,
        /// Number of radial nodes
        #[arg(long, default_value_t = 513)]
        n: usize,
        /// Catalog id supplying boundary data and the error oracle
        #[arg(long)]
        oracle: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<f64>,
        /// Inner/outer boundary values when no oracle is given
        #[arg(long, allow_hyphen_values = true)]
        u_in: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        u_out: Option<f64>,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, default_value_t = 200)]
        max_iters: usize,
    },
    /// Full annulus Dirichlet problem (compact scheme, monotone iteration)
    Annulus {
        /// Constant curvature κ < 0
        #[arg(long, allow_hyphen_values = true)]
        kappa: f64,
        #[arg(long, default_value_t = 1e-3)]
        r_in: f64,
        #[arg(long, default_value_t = 0.9)]
        r_out: f64,
        /// Radial × angular grid as `NRxNT`, e.g. 129x128
        #[arg(long, default_value = "65x64")]
        grid: String,
        /// Catalog id supplying boundary data and the error oracle
        #[arg(long)]
        oracle: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<f64>,
        /// Constant boundary value when no oracle is given
        #[arg(long, allow_hyphen_values = true)]
        bc_const: Option<f64>,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, default_value_t = 200)]
        max_iters: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum VerifyClaim {
    /// Full derivative rate-table verification
    MainTheorem {
        #[arg(long)]
        id: String,
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<f64>,
    },
    /// Geometric limits of density, connection, and Schwarzian
    Geometric {
        #[arg(long)]
        id: String,
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<f64>,
    },
    /// Higher-order Yau ratios against the punctured-disk metric
    Yau {
        #[arg(long)]
        id: String,
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<f64>,
    },
    /// Boundedness of B(r) = |−κe^{2w} − 1| log(1/r)
    Wachstum {
        #[arg(long)]
        id: String,
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<f64>,
    },
    /// Continuity of the critical remainder at the puncture
    Continuity {
        #[arg(long)]
        id: String,
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<f64>,
        #[arg(long, default_value_t = 6e-2)]
        tol: f64,
    },
    /// Four-hypothesis maximum-principle check for a comparison pair
    MaxPrinciple {
        /// `genuine` or a counterexample pair id
        #[arg(long)]
        pair: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WeightKind {
    Power,
    CriticalLog,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DerivKind {
    Value,
    Grad,
    Hess,
}
