//! A numerical laboratory for the Gaussian curvature equation
//! `Δu = −κ(z) e^{2u}` near an isolated boundary point.
//!
//! The crate evaluates a catalog of closed-form metric families, solves the
//! equation on annuli by monotone sub/supersolution iteration, classifies the
//! singularity order `α` of a solution at the puncture, extracts the remainder
//! functions `v` and `w`, and verifies the asymptotic laws (derivative growth
//! rates, geometric limits, higher-order Yau–Ahlfors–Schwarz ratios, the
//! curvature–remainder bound) at desk scale.
//!
//! Module map:
//! - [`grid`] — log-polar annular grids, discrete Laplacian, numerical
//!   Wirtinger derivatives;
//! - [`metrics`] — conformal-metric calculus (curvature, connection,
//!   Schwarzian, pullback, Liouville generation, completeness probe);
//! - [`families`] — the executable catalog of closed-form solutions,
//!   sub/supersolutions and counterexamples;
//! - [`solver`] — monotone iteration on annuli and the radial Newton solver,
//!   plus the maximum-principle verification harness;
//! - [`asymptotics`] — order estimation, remainder extraction, growth-rate
//!   fitting and the theorem verdicts;
//! - [`potential`] — singular Newton potentials (evaluation, gradient,
//!   Hessian with its boundary term, Poisson–Jensen split).
//!
//! The numerical core is generic over the scalar type via [`scalar::Real`];
//! the aliases below pin the default `f64` instantiation.

pub mod asymptotics;
pub mod families;
pub mod grid;
pub mod metrics;
pub mod potential;
pub mod scalar;
pub mod solver;

pub use scalar::Real;

/// Default complex number type.
pub type Complex64 = num_complex::Complex<f64>;
/// Default annular grid.
pub type AnnularGrid = grid::AnnularGrid<f64>;
/// Default grid field.
pub type GridField = grid::GridField<f64>;
/// Default metric density.
pub type MetricDensity = metrics::MetricDensity<f64>;
/// Default curvature field.
pub type CurvatureField = metrics::CurvatureField<f64>;
/// Default catalog entry.
pub type ClosedFormSolution = families::ClosedFormSolution<f64>;
/// Default solver configuration.
pub type SolveConfig = solver::SolveConfig<f64>;
/// Default iteration trace.
pub type IterationTrace = solver::IterationTrace<f64>;
/// Default singularity report.
pub type SingularityReport = asymptotics::SingularityReport<f64>;
/// Default potential specification.
pub type PotentialSpec = potential::PotentialSpec<f64>;
