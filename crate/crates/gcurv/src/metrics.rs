//! Conformal-metric calculus: curvature, connection, Schwarzian, pullback,
//! Liouville generation, and a local-completeness probe.
//!
//! A conformal metric `λ(z)|dz|` is carried as its log-density `u = log λ`
//! together with optional closed-form Wirtinger derivatives of `u`. The
//! Gaussian curvature is `κ_λ = −(Δ log λ)/λ²`, the connection
//! `Γ_λ = 2 ∂_z log λ`, and the Schwarzian `S_λ = ∂_z Γ_λ − Γ_λ²/2`.
//! When closed-form derivatives are attached they are used directly;
//! otherwise the callable stencils of [`crate::grid`] evaluate them, with a
//! step ratio of 10 between nested derivative layers to decorrelate
//! truncation errors.

use crate::grid::{self, apply_laplacian, default_step, GridField};
use crate::scalar::{Real, C};
use serde::Serialize;
use std::sync::Arc;
use thiserror::Error;

/// Shared real-valued callable on the plane.
pub type RealFn<F> = Arc<dyn Fn(C<F>) -> F + Send + Sync>;
/// Shared complex-valued callable on the plane.
pub type ComplexFn<F> = Arc<dyn Fn(C<F>) -> C<F> + Send + Sync>;

/// Errors from metric evaluation and construction.
#[derive(Debug, Error)]
pub enum MetricError {
    #[error("map leaves the metric domain at z=({re}, {im})")]
    Range { re: f64, im: f64 },
    #[error("critical point of the map at z=({re}, {im}) (f' = 0)")]
    CriticalPoint { re: f64, im: f64 },
    #[error("density underflows to zero at z=({re}, {im})")]
    Underflow { re: f64, im: f64 },
    #[error("Liouville generator requires |f| < 1, got |f|={norm} at z=({re}, {im})")]
    NotIntoDisk { norm: f64, re: f64, im: f64 },
}

/// Which evaluation path produced a result (accuracy differs between them).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Smoothness {
    ClosedForm,
    Grid,
}

/// A positive density `λ` on a punctured disk or annulus, held as
/// `u = log λ` plus optional closed-form derivatives.
#[derive(Clone)]
pub struct MetricDensity<F: Real> {
    u: RealFn<F>,
    u_z: Option<ComplexFn<F>>,
    u_zz: Option<ComplexFn<F>>,
    /// Annulus descriptor `(r_min, r_max)`; `r_min = 0` means punctured disk.
    domain: (F, F),
    tag: Smoothness,
    grid_field: Option<GridField<F>>,
}

impl<F: Real> MetricDensity<F> {
    /// Metric from a closed-form log-density.
    pub fn from_u(u: impl Fn(C<F>) -> F + Send + Sync + 'static, domain: (F, F)) -> Self {
        Self {
            u: Arc::new(u),
            u_z: None,
            u_zz: None,
            domain,
            tag: Smoothness::ClosedForm,
            grid_field: None,
        }
    }

    /// Metric from a closed-form density `λ`.
    pub fn from_lambda(
        lambda: impl Fn(C<F>) -> F + Send + Sync + 'static,
        domain: (F, F),
    ) -> Self {
        Self::from_u(move |z| lambda(z).ln(), domain)
    }

    /// Metric from grid samples of `u = log λ`.
    pub fn from_grid_u(field: GridField<F>) -> Self {
        let g = field.grid().clone();
        let domain = (g.r_min(), g.r_max());
        let f = field.clone();
        Self {
            u: Arc::new(move |z| interp(&f, z)),
            u_z: None,
            u_zz: None,
            domain,
            tag: Smoothness::Grid,
            grid_field: Some(field),
        }
    }

    /// Attach closed-form first and second `∂_z` derivatives of `u`.
    pub fn with_derivatives(
        mut self,
        u_z: impl Fn(C<F>) -> C<F> + Send + Sync + 'static,
        u_zz: Option<ComplexFn<F>>,
    ) -> Self {
        self.u_z = Some(Arc::new(u_z));
        self.u_zz = u_zz;
        self
    }

    pub fn u(&self, z: C<F>) -> F {
        (self.u)(z)
    }
    pub fn lambda(&self, z: C<F>) -> F {
        self.u(z).exp()
    }
    pub fn domain(&self) -> (F, F) {
        self.domain
    }
    pub fn tag(&self) -> Smoothness {
        self.tag
    }
    pub fn u_fn(&self) -> RealFn<F> {
        self.u.clone()
    }
}

/// Bilinear interpolation of a grid field in `(s, θ)`.
fn interp<F: Real>(field: &GridField<F>, z: C<F>) -> F {
    let g = field.grid();
    let s = z.norm().ln();
    let mut t = z.arg();
    if t < F::zero() {
        t += F::TAU();
    }
    let fs = ((s - g.r_min().ln()) / g.h_s())
        .max(F::zero())
        .min(F::from_usize(g.n_radial() - 1).unwrap());
    let ft = t / g.h_theta();
    let i0 = fs.floor().to_f64_lossy() as usize;
    let j0 = ft.floor().to_f64_lossy() as usize % g.n_angular();
    let i0 = i0.min(g.n_radial() - 2);
    let ws = fs - F::from_usize(i0).unwrap();
    let wt = ft - ft.floor();
    let j1 = (j0 + 1) % g.n_angular();
    let one = F::one();
    field.at(i0, j0) * (one - ws) * (one - wt)
        + field.at(i0 + 1, j0) * ws * (one - wt)
        + field.at(i0, j1) * (one - ws) * wt
        + field.at(i0 + 1, j1) * ws * wt
}

/// A curvature function with optional strict-negativity bounds
/// `−a ≤ κ ≤ −A < 0`.
#[derive(Clone)]
pub struct CurvatureField<F: Real> {
    kappa: RealFn<F>,
    bounds: Option<(F, F)>,
}

impl<F: Real> CurvatureField<F> {
    pub fn new(kappa: impl Fn(C<F>) -> F + Send + Sync + 'static) -> Self {
        Self {
            kappa: Arc::new(kappa),
            bounds: None,
        }
    }

    /// Constant curvature `κ ≡ c`.
    pub fn constant(c: F) -> Self {
        let field = Self::new(move |_| c);
        if c < F::zero() {
            field.with_bounds(-c, -c)
        } else {
            field
        }
    }

    /// Declare strict-negativity bounds `−a ≤ κ ≤ −A < 0`.
    pub fn with_bounds(mut self, a: F, upper_a: F) -> Self {
        assert!(upper_a > F::zero() && a >= upper_a, "need a >= A > 0");
        self.bounds = Some((a, upper_a));
        self
    }

    pub fn kappa(&self, z: C<F>) -> F {
        (self.kappa)(z)
    }
    /// Declared bounds `(a, A)` of `−a ≤ κ ≤ −A`, if any.
    pub fn bounds(&self) -> Option<(F, F)> {
        self.bounds
    }
    pub fn kappa_fn(&self) -> RealFn<F> {
        self.kappa.clone()
    }

    /// Check the declared bounds at a sample point.
    pub fn bounds_hold_at(&self, z: C<F>) -> bool {
        match self.bounds {
            None => true,
            Some((a, big_a)) => {
                let k = self.kappa(z);
                -a <= k && k <= -big_a
            }
        }
    }
}

/// Gaussian curvature `κ_λ(z) = −(Δ log λ)(z)/λ(z)²`.
///
/// Closed-form metrics use the log-polar 5-point stencil with Richardson
/// extrapolation ([`grid::laplacian_at`]); grid metrics use the discrete
/// Laplacian of the sampled `u` interpolated at `z`.
pub fn curvature<F: Real>(m: &MetricDensity<F>, z: C<F>) -> Result<F, MetricError> {
    let lam = m.lambda(z);
    if lam <= F::zero() || !lam.is_finite() {
        return Err(MetricError::Underflow {
            re: z.re.to_f64_lossy(),
            im: z.im.to_f64_lossy(),
        });
    }
    let lap = match (&m.grid_field, m.tag) {
        (Some(field), Smoothness::Grid) => interp(&apply_laplacian(field), z),
        _ => {
            let u = m.u.clone();
            grid::laplacian_at(move |w| u(w), z)
        }
    };
    Ok(-lap / (lam * lam))
}

/// Connection (pre-Schwarzian) `Γ_λ(z) = 2 ∂_z log λ(z)`.
pub fn connection<F: Real>(m: &MetricDensity<F>, z: C<F>) -> C<F> {
    let two = F::of(2.0);
    match &m.u_z {
        Some(uz) => uz(z) * two,
        None => {
            let u = m.u.clone();
            grid::dz(move |w| u(w), z, default_step(z)).expect("step < |z|/2 by construction")
                * two
        }
    }
}

/// Schwarzian `S_λ(z) = ∂_z Γ_λ(z) − Γ_λ(z)²/2`.
///
/// With closed-form `u_zz` this is `2u_zz − 2u_z²` exactly; otherwise the
/// outer derivative is a numerical `∂_z` of the (complex-valued) connection
/// with a step 10× the inner stencil's.
pub fn schwarzian<F: Real>(m: &MetricDensity<F>, z: C<F>) -> C<F> {
    let two = F::of(2.0);
    let gamma = connection(m, z);
    let dgamma = match (&m.u_z, &m.u_zz) {
        (_, Some(uzz)) => uzz(z) * two,
        (Some(uz), None) => {
            let uz = uz.clone();
            dz_complex(move |w| uz(w) * two, z, default_step(z))
        }
        (None, None) => {
            let u = m.u.clone();
            let inner = default_step(z) / F::of(10.0);
            dz_complex(
                move |w| {
                    grid::dz(|p| u(p), w, inner).expect("inner step valid") * two
                },
                z,
                default_step(z),
            )
        }
    };
    dgamma - gamma * gamma / two
}

/// `∂_z` of a complex-valued callable (componentwise central differences with
/// one Richardson level).
pub fn dz_complex<F: Real>(g: impl Fn(C<F>) -> C<F>, z: C<F>, h: F) -> C<F> {
    let d = |h: F| {
        let two = F::of(2.0);
        let ex = C::new(h, F::zero());
        let ey = C::new(F::zero(), h);
        let gx = (g(z + ex) - g(z - ex)) / (C::new(two * h, F::zero()));
        let gy = (g(z + ey) - g(z - ey)) / (C::new(two * h, F::zero()));
        (gx - gy * C::i()) / C::new(two, F::zero())
    };
    let c1 = d(h);
    let c2 = d(h / F::of(2.0));
    (c2 * F::of(4.0) - c1) / F::of(3.0)
}

/// Pullback `f*λ` of a metric under a holomorphic map: density
/// `z ↦ λ(f(z))·|f′(z)|`. Curvature is conformally invariant:
/// `κ_{f*λ}(z) = κ_λ(f(z))`.
///
/// `domain` is the annulus descriptor of the pulled-back metric; `f` must map
/// it into `m`'s domain and `fprime` must be the exact derivative, nonzero
/// there (both are spot-checked on a probe circle).
pub fn pullback<F: Real>(
    m: &MetricDensity<F>,
    f: impl Fn(C<F>) -> C<F> + Send + Sync + 'static,
    fprime: impl Fn(C<F>) -> C<F> + Send + Sync + 'static,
    domain: (F, F),
) -> Result<MetricDensity<F>, MetricError> {
    let (rin, rout) = m.domain;
    let probe_r = (domain.0.max(domain.1 * F::of(1e-3)) * domain.1).sqrt();
    for k in 0..16 {
        let t = F::TAU() * F::from_usize(k).unwrap() / F::of(16.0);
        let z = C::from_polar(probe_r, t);
        let w = f(z);
        let wn = w.norm();
        if wn < rin || wn > rout {
            return Err(MetricError::Range {
                re: z.re.to_f64_lossy(),
                im: z.im.to_f64_lossy(),
            });
        }
        if fprime(z).norm() == F::zero() {
            return Err(MetricError::CriticalPoint {
                re: z.re.to_f64_lossy(),
                im: z.im.to_f64_lossy(),
            });
        }
    }
    let u = m.u.clone();
    Ok(MetricDensity::from_u(
        move |z| u(f(z)) + fprime(z).norm().ln(),
        domain,
    ))
}

/// Liouville generation: for holomorphic `f` into the unit disk with
/// `f′ ≠ 0`, the density `|f′(z)|/(1−|f(z)|²)` has constant curvature −4.
pub fn liouville_metric<F: Real>(
    f: impl Fn(C<F>) -> C<F> + Send + Sync + 'static,
    fprime: impl Fn(C<F>) -> C<F> + Send + Sync + 'static,
    domain: (F, F),
) -> Result<MetricDensity<F>, MetricError> {
    let probe_r = (domain.0.max(domain.1 * F::of(1e-3)) * domain.1).sqrt();
    for k in 0..16 {
        let t = F::TAU() * F::from_usize(k).unwrap() / F::of(16.0);
        let z = C::from_polar(probe_r, t);
        let w = f(z);
        if w.norm() >= F::one() {
            return Err(MetricError::NotIntoDisk {
                norm: w.norm().to_f64_lossy(),
                re: z.re.to_f64_lossy(),
                im: z.im.to_f64_lossy(),
            });
        }
        if fprime(z).norm() == F::zero() {
            return Err(MetricError::CriticalPoint {
                re: z.re.to_f64_lossy(),
                im: z.im.to_f64_lossy(),
            });
        }
    }
    Ok(MetricDensity::from_u(
        move |z| fprime(z).norm().ln() - (F::one() - f(z).norm_sqr()).ln(),
        domain,
    ))
}

/// Cumulative radial path lengths `∫ λ ds` from `|z0|` inward to each radius
/// (an upper bound on the metric distance `d_λ`; the paper's `d_λ` is an
/// infimum over all paths, but for the radially dominated densities in scope
/// the ray is within a bounded factor).
///
/// `radii` must be decreasing and inside the domain; the output is monotone
/// nondecreasing, and divergence (resp. boundedness) of the metric distance
/// to the puncture shows in the growth of the last entries.
pub fn completeness_probe<F: Real>(m: &MetricDensity<F>, z0: C<F>, radii: &[F]) -> Vec<F> {
    let theta = z0.arg();
    let mut out = Vec::with_capacity(radii.len());
    let mut acc = F::zero();
    let mut upper = z0.norm();
    for &r in radii {
        assert!(r < upper, "radii must decrease strictly from |z0|");
        // ∫_r^upper λ(ρ e^{iθ}) dρ = ∫ λ e^s ds on s ∈ [log r, log upper],
        // composite Simpson in s (the natural coordinate of the densities).
        let n = 128usize;
        let s0 = r.ln();
        let s1 = upper.ln();
        let h = (s1 - s0) / F::from_usize(n).unwrap();
        let g = |s: F| {
            let rho = s.exp();
            m.lambda(C::from_polar(rho, theta)) * rho
        };
        let mut sum = g(s0) + g(s1);
        for k in 1..n {
            let w = if k % 2 == 1 { F::of(4.0) } else { F::of(2.0) };
            sum += w * g(s0 + h * F::from_usize(k).unwrap());
        }
        acc += sum * h / F::of(3.0);
        out.push(acc);
        upper = r;
    }
    out
}

/// One metric evaluation, serialized for the CLI surface.
#[derive(Debug, Serialize)]
pub struct MetricRecord {
    pub z_re: f64,
    pub z_im: f64,
    pub lambda: f64,
    pub kappa: f64,
    pub gamma_re: f64,
    pub gamma_im: f64,
    pub s_re: f64,
    pub s_im: f64,
    pub method: Smoothness,
}

/// Evaluate density, curvature, connection and Schwarzian at one point.
pub fn eval_record<F: Real>(m: &MetricDensity<F>, z: C<F>) -> Result<MetricRecord, MetricError> {
    let gamma = connection(m, z);
    let s = schwarzian(m, z);
    Ok(MetricRecord {
        z_re: z.re.to_f64_lossy(),
        z_im: z.im.to_f64_lossy(),
        lambda: m.lambda(z).to_f64_lossy(),
        kappa: curvature(m, z)?.to_f64_lossy(),
        gamma_re: gamma.re.to_f64_lossy(),
        gamma_im: gamma.im.to_f64_lossy(),
        s_re: s.re.to_f64_lossy(),
        s_im: s.im.to_f64_lossy(),
        method: m.tag,
    })
}
