//! `potential`: weighted Newton potential values, gradients (with a
//! finite-difference cross-check), and Hessians.

use serde_json::json;

use super::{parse_point, CliError};
use crate::args::{Cli, DerivKind, WeightKind};
use crate::report::emit;
use gcurv::potential::{
    newton_potential, potential_gradient, potential_hessian, PotentialSpec, PotentialWeight,
};
use gcurv::Complex64;

#[allow(clippy::too_many_arguments)]
pub fn run(
    cli: &Cli,
    weight: WeightKind,
    alpha: f64,
    radius: f64,
    q_const: f64,
    z: &str,
    deriv: DerivKind,
    gamma: f64,
    tol: f64,
) -> Result<(), CliError> {
    let z = parse_point(z)?;
    if !(tol > 0.0) {
        return Err(CliError::Usage(format!("tolerance must be positive, got {tol}")));
    }
    let w = match weight {
        WeightKind::Power => PotentialWeight::Power { alpha },
        WeightKind::CriticalLog => PotentialWeight::CriticalLog,
    };
    let spec = PotentialSpec::new(move |_: Complex64| q_const, w, radius)?
        .with_tolerance(tol);

    match deriv {
        DerivKind::Value => {
            let omega = newton_potential(&spec, z)?;
            let text = vec![
                format!("z      {} + {}i", z.re, z.im),
                format!("omega  {}", omega),
            ];
            let report = json!({
                "weight": w,
                "radius": radius,
                "q_const": q_const,
                "z": [z.re, z.im],
                "omega": omega,
            });
            emit(cli, "potential", report, &text, vec![])
        }
        DerivKind::Grad => {
            let g = potential_gradient(&spec, z)?;
            let (gx, gy) = (2.0 * g.re, -2.0 * g.im);
            // central-difference cross-check of the kernel integral
            let h = 1e-4 * z.norm().max(0.1);
            let om = |p: Complex64| newton_potential(&spec, p);
            let fd_x = (om(z + Complex64::new(h, 0.0))? - om(z - Complex64::new(h, 0.0))?)
                / (2.0 * h);
            let fd_y = (om(z + Complex64::new(0.0, h))? - om(z - Complex64::new(0.0, h))?)
                / (2.0 * h);
            let text = vec![
                format!("z         {} + {}i", z.re, z.im),
                format!("gradient  ({}, {})", gx, gy),
                format!("fd_check  ({}, {})  (step {:e})", fd_x, fd_y, h),
                format!(
                    "agreement {:e}",
                    (gx - fd_x).abs().max((gy - fd_y).abs())
                ),
            ];
            let report = json!({
                "weight": w,
                "radius": radius,
                "q_const": q_const,
                "z": [z.re, z.im],
                "gradient": [gx, gy],
                "wirtinger": [g.re, g.im],
                "finite_difference": [fd_x, fd_y],
                "fd_step": h,
                "agreement": (gx - fd_x).abs().max((gy - fd_y).abs()),
            });
            emit(cli, "potential-grad", report, &text, vec![])
        }
        DerivKind::Hess => {
            if !(gamma > 0.0 && gamma <= 1.0) {
                return Err(CliError::Usage(format!(
                    "Hölder exponent must lie in (0, 1], got {gamma}"
                )));
            }
            let hess = potential_hessian(&spec, z, gamma)?;
            let rho = spec.density(z);
            let text = vec![
                format!("z        {} + {}i", z.re, z.im),
                format!("hessian  [[{}, {}], [{}, {}]]", hess.xx, hess.xy, hess.xy, hess.yy),
                format!("trace    {}", hess.trace()),
                format!("density  {}", rho),
            ];
            let report = json!({
                "weight": w,
                "radius": radius,
                "q_const": q_const,
                "z": [z.re, z.im],
                "hessian": hess,
                "trace": hess.trace(),
                "density": rho,
            });
            emit(cli, "potential-hess", report, &text, vec![])
        }
    }
}
