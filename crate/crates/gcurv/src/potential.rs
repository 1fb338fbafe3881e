//! Singular Newton potentials
//! `ω(z) = (1/2π) ∬_{K_r} log|z−ξ| ρ(ξ) dσ_ξ` with the weighted densities
//! `ρ(ξ) = q(ξ)/|ξ|^{2α}` (subcritical) or `ρ(ξ) = q(ξ)/(|ξ|² log²(1/|ξ|))`
//! (critical), their gradients and Hessians, and the Poisson–Jensen split.
//!
//! Evaluation splits the density into the radial reference part
//! `q(0)·w(|ξ|)` — whose potential, gradient and Hessian have closed forms
//! (the radial mass `m(ρ) = ∫₀^ρ w(t) t dt` integrates exactly for both
//! weights) — plus the fluctuation `(q(ξ)−q(0))·w(|ξ|)`, integrated by
//! adaptive quadrature in polar coordinates centered at the evaluation
//! point: Simpson in `τ = log t` along each ray (the substitution flattens
//! both the kernel singularity at `ξ = z` and the weight singularity at
//! `ξ = 0`) and periodic trapezoid in the ray angle. Levels double both node
//! counts until two consecutive levels agree to the target tolerance;
//! otherwise the evaluation fails with the achieved error estimate.
//!
//! The Hessian is the two-term representation
//! `∂²_{lj}ω(z) = (1/2π)∬_{K_3} ∂²_{lj}log|z−ξ|·(ρ(ξ)−ρ(z)) dσ
//!  − (1/2π)ρ(z)∮_{∂K_3} ∂_j log|z−ξ|·n_l(ξ) |dξ|`,
//! with the density extended by zero outside `K_r` (the compensation
//! `ρ(ξ)−ρ(z)` makes the strong kernel singularity integrable at a Hölder
//! point, and the second-kernel angular factors have zero circle mean, so
//! the principal value cancels exactly on the uniform angular grid). The
//! annular region `K_3 ∖ K_r`, where the extended density vanishes,
//! integrates in closed form along each ray.

use crate::metrics::RealFn;
use crate::scalar::{log_recip, Real, C};
use serde::Serialize;
use std::sync::Arc;
use thiserror::Error;

/// Errors from potential evaluation.
#[derive(Debug, Error)]
pub enum PotentialError {
    #[error("invalid potential specification: {0}")]
    Parameter(String),
    #[error("evaluation point ({re}, {im}) outside the open disk K_r")]
    OutsideDomain { re: f64, im: f64 },
    #[error("evaluation undefined at the puncture z = 0")]
    AtPuncture,
    #[error("quadrature did not reach the target {target:e} (achieved {achieved:e})")]
    NodeCapExceeded { achieved: f64, target: f64 },
}

/// Weight of the density `ρ(ξ) = q(ξ)·w(|ξ|)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PotentialWeight<F> {
    /// `w(t) = t^{−2α}`, `α < 1`.
    Power { alpha: F },
    /// `w(t) = 1/(t² log²(1/t))` (the critical branch).
    CriticalLog,
}

/// A weighted Newton potential on the disk `K_r`.
#[derive(Clone)]
pub struct PotentialSpec<F: Real> {
    q: RealFn<F>,
    weight: PotentialWeight<F>,
    radius: F,
    tol: F,
    q0: F,
}

/// Symmetric 2×2 Hessian of `ω` in Cartesian coordinates.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Hessian<F> {
    pub xx: F,
    pub xy: F,
    pub yy: F,
}

impl<F: Real> Hessian<F> {
    pub fn trace(&self) -> F {
        self.xx + self.yy
    }
}

impl<F: Real> PotentialSpec<F> {
    /// Build a potential specification; `q` must be bounded on `K_r` and is
    /// sampled near 0 for the radial reference value `q(0)`.
    pub fn new(
        q: impl Fn(C<F>) -> F + Send + Sync + 'static,
        weight: PotentialWeight<F>,
        radius: F,
    ) -> Result<Self, PotentialError> {
        match weight {
            PotentialWeight::Power { alpha } => {
                if alpha >= F::one() {
                    return Err(PotentialError::Parameter(format!(
                        "power weight requires alpha < 1, got {alpha}"
                    )));
                }
                if !(radius > F::zero() && radius <= F::one()) {
                    return Err(PotentialError::Parameter(
                        "power weight requires 0 < r <= 1".into(),
                    ));
                }
            }
            PotentialWeight::CriticalLog => {
                if !(radius > F::zero() && radius < F::one()) {
                    return Err(PotentialError::Parameter(
                        "critical weight requires 0 < r < 1".into(),
                    ));
                }
            }
        }
        let q = Arc::new(q);
        let mut q0 = q(C::new(F::zero(), F::zero()));
        if !q0.is_finite() {
            q0 = q(C::from_polar(F::of(1e-12), F::of(0.3)));
        }
        if !q0.is_finite() {
            return Err(PotentialError::Parameter(
                "q must be finite near the origin".into(),
            ));
        }
        Ok(Self {
            q,
            weight,
            radius,
            tol: F::of(1e-6),
            q0,
        })
    }

    /// Override the quadrature tolerance (default `1e-6`).
    pub fn with_tolerance(mut self, tol: F) -> Self {
        assert!(tol > F::zero(), "tolerance must be positive");
        self.tol = tol;
        self
    }

    pub fn radius(&self) -> F {
        self.radius
    }
    pub fn weight(&self) -> PotentialWeight<F> {
        self.weight
    }

    /// Weight `w(t)` of the density.
    fn w(&self, t: F) -> F {
        match self.weight {
            PotentialWeight::Power { alpha } => t.powf(-F::of(2.0) * alpha),
            PotentialWeight::CriticalLog => {
                let l = log_recip(t);
                F::one() / (t * t * l * l)
            }
        }
    }

    /// Full density `ρ(ξ)`, zero outside `K_r`.
    pub fn density(&self, xi: C<F>) -> F {
        let t = xi.norm();
        if t >= self.radius || t == F::zero() {
            return F::zero();
        }
        (self.q)(xi) * self.w(t)
    }

    /// Fluctuation density `(q(ξ)−q(0))·w(|ξ|)`, zero outside `K_r`.
    fn fluct(&self, xi: C<F>) -> F {
        let t = xi.norm();
        if t >= self.radius || t == F::zero() {
            return F::zero();
        }
        ((self.q)(xi) - self.q0) * self.w(t)
    }

    /// Radial mass `m(ρ) = q(0)·∫₀^ρ w(t) t dt` (closed form).
    fn mass(&self, rho: F) -> F {
        match self.weight {
            PotentialWeight::Power { alpha } => {
                let beta = F::of(2.0) - F::of(2.0) * alpha;
                self.q0 * rho.powf(beta) / beta
            }
            PotentialWeight::CriticalLog => self.q0 / log_recip(rho),
        }
    }

    /// Whether the fluctuation is numerically zero (constant `q`); lets the
    /// closed-form radial path short-circuit the quadrature.
    fn fluct_negligible(&self) -> bool {
        for k in 0..4 {
            for j in 0..4 {
                let t = self.radius * F::of(0.9) * F::of(0.3).powi(k);
                let xi = C::from_polar(t, F::TAU() * F::from_usize(j).unwrap() / F::of(4.0));
                if ((self.q)(xi) - self.q0).abs() > F::of(1e-14) * (F::one() + self.q0.abs()) {
                    return false;
                }
            }
        }
        true
    }

    fn check_inside(&self, z: C<F>) -> Result<(), PotentialError> {
        if z.norm() >= self.radius {
            return Err(PotentialError::OutsideDomain {
                re: z.re.to_f64_lossy(),
                im: z.im.to_f64_lossy(),
            });
        }
        Ok(())
    }
}

/// Distance from `z` along direction `e^{iψ}` to the circle `|ξ| = rad`.
fn ray_exit<F: Real>(z: C<F>, psi: F, rad: F) -> F {
    let e = C::from_polar(F::one(), psi);
    let b = (z.conj() * e).re;
    -b + (b * b + rad * rad - z.norm_sqr()).sqrt()
}

/// Composite Simpson weights over `n+1` equispaced nodes (`n` even).
fn simpson_weight<F: Real>(k: usize, n: usize) -> F {
    if k == 0 || k == n {
        F::one()
    } else if k % 2 == 1 {
        F::of(4.0)
    } else {
        F::of(2.0)
    }
}

/// Adaptive two-level driver: evaluate at doubling quadrature levels until
/// two consecutive values agree componentwise within `tol`.
fn adapt<F: Real, const N: usize>(
    tol: F,
    eval: impl Fn(usize) -> [F; N],
) -> Result<[F; N], PotentialError> {
    let mut prev = eval(0);
    for level in 1..=3 {
        let cur = eval(level);
        let mut diff = F::zero();
        for i in 0..N {
            diff = diff.max((cur[i] - prev[i]).abs());
        }
        if diff <= tol {
            return Ok(cur);
        }
        prev = cur;
    }
    let cur = eval(4);
    let mut diff = F::zero();
    for i in 0..N {
        diff = diff.max((cur[i] - prev[i]).abs());
    }
    if diff <= tol {
        Ok(cur)
    } else {
        Err(PotentialError::NodeCapExceeded {
            achieved: diff.to_f64_lossy(),
            target: tol.to_f64_lossy(),
        })
    }
}

/// Fluctuation quadrature core: integrates
/// `(1/2π) ∬_{K_r} kernel(t, ψ) · ρ_fluct(z + t e^{iψ}) dσ` in `z`-centered
/// polar coordinates (`dσ = t dt dψ`), Simpson in `τ = log t`, trapezoid in
/// `ψ`. `kernel_tau(t, psi)` must be the full integrand factor multiplying
/// the fluctuation density after the `τ`-substitution (i.e. including the
/// Jacobian `t·t = t²` for an order-0 kernel).
fn fluct_integral<F: Real, const N: usize>(
    spec: &PotentialSpec<F>,
    z: C<F>,
    level: usize,
    decay: F,
    kernel_tau: impl Fn(F, F) -> [F; N],
) -> [F; N] {
    let n_psi = 64usize << level;
    let n_tau = 128usize << level; // even
    let h_psi = F::TAU() / F::from_usize(n_psi).unwrap();
    let mut acc = [F::zero(); N];
    for jp in 0..n_psi {
        let psi = h_psi * F::from_usize(jp).unwrap();
        let e = C::from_polar(F::one(), psi);
        let t_max = ray_exit(z, psi, spec.radius);
        if !(t_max > F::zero()) {
            continue;
        }
        // truncation: the integrand decays like t^decay toward the ray tip
        let t_min = t_max * F::of(1e-9).min(spec.tol * F::of(1e-3)).powf(F::one() / decay);
        let tau0 = t_min.ln();
        let tau1 = t_max.ln();
        let h_tau = (tau1 - tau0) / F::from_usize(n_tau).unwrap();
        let mut ray = [F::zero(); N];
        for k in 0..=n_tau {
            // the final node sits exactly on |ξ| = r; nudge it inside so the
            // endpoint samples the one-sided limit of the density rather
            // than rounding onto the zero extension
            let t = if k == n_tau {
                t_max * (F::one() - F::of(1e-12))
            } else {
                (tau0 + h_tau * F::from_usize(k).unwrap()).exp()
            };
            let rho_f = spec.fluct(z + e * t);
            if rho_f == F::zero() {
                continue;
            }
            let kv = kernel_tau(t, psi);
            let wgt = simpson_weight::<F>(k, n_tau);
            for i in 0..N {
                ray[i] += wgt * kv[i] * rho_f;
            }
        }
        for i in 0..N {
            acc[i] += ray[i] * h_tau / F::of(3.0);
        }
    }
    let scale = h_psi / F::TAU();
    for a in &mut acc {
        *a *= scale;
    }
    acc
}

/// Evaluate `ω(z)`. Defined on the open disk `K_r`; the origin is allowed
/// for power weights (`ω(0)` is finite for `α < 1`) but not for the critical
/// weight, whose potential diverges at the puncture.
pub fn newton_potential<F: Real>(spec: &PotentialSpec<F>, z: C<F>) -> Result<F, PotentialError> {
    spec.check_inside(z)?;
    let rho = z.norm();
    if rho == F::zero() && spec.weight == PotentialWeight::CriticalLog {
        return Err(PotentialError::AtPuncture);
    }
    // radial reference part: ω_rad = log ρ · m(ρ) + q0 ∫_ρ^r log t · w t dt
    let r = spec.radius;
    let omega_rad = match spec.weight {
        PotentialWeight::Power { alpha } => {
            let beta = F::of(2.0) - F::of(2.0) * alpha;
            // antiderivative of t^{1-2α} log t
            let g = |t: F| -> F {
                if t == F::zero() {
                    F::zero()
                } else {
                    t.powf(beta) * (beta * t.ln() - F::one()) / (beta * beta)
                }
            };
            let head = if rho == F::zero() {
                F::zero()
            } else {
                rho.ln() * spec.mass(rho)
            };
            head + spec.q0 * (g(r) - g(rho))
        }
        PotentialWeight::CriticalLog => {
            // log ρ · m = −q0, and ∫_ρ^r log t · w t dt = q0 log(L(r)/L(ρ))
            spec.q0 * (-F::one() + (log_recip(r) / log_recip(rho)).ln())
        }
    };
    if spec.fluct_negligible() {
        return Ok(omega_rad);
    }
    let val = adapt::<F, 1>(spec.tol, |level| {
        fluct_integral(spec, z, level, F::of(2.0), |t, _psi| [t.ln() * t * t])
    })?;
    Ok(omega_rad + val[0])
}

/// Evaluate the Wirtinger gradient `ω_z(z)` (requires `z ≠ 0`; the Cartesian
/// gradient is `∂_x ω = 2 Re ω_z`, `∂_y ω = −2 Im ω_z`).
pub fn potential_gradient<F: Real>(
    spec: &PotentialSpec<F>,
    z: C<F>,
) -> Result<C<F>, PotentialError> {
    spec.check_inside(z)?;
    let rho = z.norm();
    if rho == F::zero() {
        return Err(PotentialError::AtPuncture);
    }
    // radial part: ω_z = m(ρ)/(2z)
    let grad_rad = C::new(spec.mass(rho), F::zero()) / (z * F::of(2.0));
    if spec.fluct_negligible() {
        return Ok(grad_rad);
    }
    // kernel 1/(2(z−ξ)) = −e^{−iψ}/(2t); after dσ = t dt dψ and dτ = dt/t
    // the τ-integrand is −e^{−iψ} t/2 per component
    let val = adapt::<F, 2>(spec.tol, |level| {
        fluct_integral(spec, z, level, F::of(1.0), |t, psi| {
            let half_t = t / F::of(2.0);
            [-psi.cos() * half_t, psi.sin() * half_t]
        })
    })?;
    Ok(grad_rad + C::new(val[0], val[1]))
}

/// Evaluate the Hessian of `ω` at `z ≠ 0` by the two-term representation
/// over `K_3` (density extended by zero) with the `∂K_3` line-integral
/// correction. `holder_gamma ∈ (0, 1]` is the Hölder exponent of the
/// density at `z`, used to grade the quadrature truncation near the
/// kernel singularity.
pub fn potential_hessian<F: Real>(
    spec: &PotentialSpec<F>,
    z: C<F>,
    holder_gamma: F,
) -> Result<Hessian<F>, PotentialError> {
    spec.check_inside(z)?;
    if z.norm() == F::zero() {
        return Err(PotentialError::AtPuncture);
    }
    if !(holder_gamma > F::zero() && holder_gamma <= F::one()) {
        return Err(PotentialError::Parameter(
            "holder_gamma must lie in (0, 1]".into(),
        ));
    }
    // radial reference part from ω′ = m/ρ, ω″ = q0 w(ρ) − m/ρ²
    let rho = z.norm();
    let m = spec.mass(rho);
    let d1 = m / rho;
    let d2 = spec.q0 * spec.w(rho) - m / (rho * rho);
    let (x, y) = (z.re, z.im);
    let r2 = rho * rho;
    let rad = Hessian {
        xx: d2 * x * x / r2 + d1 * y * y / (r2 * rho),
        xy: (d2 - d1 / rho) * x * y / r2,
        yy: d2 * y * y / r2 + d1 * x * x / (r2 * rho),
    };

    // fluctuation density value at z for the compensation
    let fluct_z = spec.fluct(z);

    // second kernel in z-centered polar: ∂²_{lj} log|w| at w = t e^{iψ} is
    // c_{lj}(ψ)/t² with c_xx = −cos 2ψ, c_xy = −sin 2ψ, c_yy = +cos 2ψ;
    // after dσ = t dt dψ and dτ = dt/t the τ-integrand is c_{lj}(ψ)
    let area = adapt::<F, 3>(spec.tol, |level| {
        // compensated part over K_r: kernel × (ρ_f(ξ) − ρ_f(z))
        let n_psi = 64usize << level;
        let n_tau = 128usize << level;
        let h_psi = F::TAU() / F::from_usize(n_psi).unwrap();
        let mut acc = [F::zero(); 3];
        for jp in 0..n_psi {
            let psi = h_psi * F::from_usize(jp).unwrap();
            let two_psi = psi + psi;
            let c = [-two_psi.cos(), -two_psi.sin(), two_psi.cos()];
            let e = C::from_polar(F::one(), psi);
            let t_r = ray_exit(z, psi, spec.radius);
            let t_3 = ray_exit(z, psi, F::of(3.0));
            // graded truncation: the compensated integrand decays like
            // t^holder_gamma toward the singularity
            let t_min = t_r
                * F::of(1e-9)
                    .min(spec.tol * F::of(1e-3))
                    .powf(F::one() / holder_gamma);
            let tau0 = t_min.ln();
            let tau1 = t_r.ln();
            let h_tau = (tau1 - tau0) / F::from_usize(n_tau).unwrap();
            let mut ray = [F::zero(); 3];
            for k in 0..=n_tau {
                // same endpoint nudge as in `fluct_integral`
                let t = if k == n_tau {
                    t_r * (F::one() - F::of(1e-12))
                } else {
                    (tau0 + h_tau * F::from_usize(k).unwrap()).exp()
                };
                let diff = spec.fluct(z + e * t) - fluct_z;
                let wgt = simpson_weight::<F>(k, n_tau);
                for i in 0..3 {
                    ray[i] += wgt * c[i] * diff;
                }
            }
            for i in 0..3 {
                acc[i] += ray[i] * h_tau / F::of(3.0);
            }
            // annulus K_3 ∖ K_r: density zero, so the compensated integrand
            // is −ρ_f(z)·c(ψ)/t²; in closed form per ray
            let ann = -fluct_z * (t_3 / t_r).ln();
            for i in 0..3 {
                acc[i] += c[i] * ann;
            }
        }
        let scale = h_psi / F::TAU();
        for a in &mut acc {
            *a *= scale;
        }
        acc
    })?;

    // line integral over ∂K_3: −(1/2π) ρ_f(z) ∮ ∂_j log|z−ξ| n_l(ξ) |dξ|
    // (smooth periodic integrand; the trapezoid rule is spectrally accurate)
    let n_line = 256usize;
    let h_line = F::TAU() / F::from_usize(n_line).unwrap();
    let mut line = [F::zero(); 3];
    for k in 0..n_line {
        let psi = h_line * F::from_usize(k).unwrap();
        let n = C::from_polar(F::one(), psi);
        let xi = n * F::of(3.0);
        let w = z - xi;
        let w2 = w.norm_sqr();
        let k1 = [w.re / w2, w.im / w2];
        // (l, j) components: xx → K1_x n_x, xy → K1_y n_x, yy → K1_y n_y
        line[0] += k1[0] * n.re;
        line[1] += k1[1] * n.re;
        line[2] += k1[1] * n.im;
    }
    let lscale = -fluct_z * F::of(3.0) * h_line / F::TAU();
    for l in &mut line {
        *l *= lscale;
    }

    Ok(Hessian {
        xx: rad.xx + area[0] + line[0],
        xy: rad.xy + area[1] + line[1],
        yy: rad.yy + area[2] + line[2],
    })
}

/// The Poisson–Jensen split of a function `v` with `Δv = ρ` on `K_r`:
/// `v = h + ω` with `h` harmonic. Returns the two parts at `z` together
/// with the mean-value defect of `h` on the probe circle of radius `delta`
/// around `z` (near zero exactly when the split is consistent, i.e. when
/// `Δv` really equals the spec's density).
#[derive(Debug, Clone, Serialize)]
pub struct PoissonJensenSplit<F> {
    pub harmonic_part: F,
    pub potential_part: F,
    pub mean_value_defect: F,
}

pub fn poisson_jensen_split<F: Real>(
    spec: &PotentialSpec<F>,
    v: &RealFn<F>,
    z: C<F>,
    delta: F,
) -> Result<PoissonJensenSplit<F>, PotentialError> {
    spec.check_inside(z)?;
    let rho = z.norm();
    if !(delta > F::zero() && delta < (spec.radius - rho).min(rho.max(F::of(1e-3)))) {
        return Err(PotentialError::Parameter(
            "probe radius must fit inside K_r around z".into(),
        ));
    }
    let omega = newton_potential(spec, z)?;
    let h_center = v(z) - omega;
    let n = 64usize;
    let h_ang = F::TAU() / F::from_usize(n).unwrap();
    let mut mean = F::zero();
    for k in 0..n {
        let p = z + C::from_polar(delta, h_ang * F::from_usize(k).unwrap());
        let om = newton_potential(spec, p)?;
        mean += (v(p) - om) / F::from_usize(n).unwrap();
    }
    Ok(PoissonJensenSplit {
        harmonic_part: h_center,
        potential_part: omega,
        mean_value_defect: (mean - h_center).abs(),
    })
}
