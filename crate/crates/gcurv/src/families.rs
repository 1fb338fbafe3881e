//! Executable catalog of closed-form solutions, supersolutions, subsolutions
//! and counterexamples for `Δu = −κ(z)e^{2u}`.
//!
//! Every entry carries its solution `u`, its curvature `κ`, the declared
//! order `α` of the singularity at 0, and — where a closed form exists — the
//! remainder (`v = u + α log|z|` for `α < 1`, `w = u + log|z| + log log(1/|z|)`
//! for `α = 1`) together with its first and second `∂_z` derivatives. Closed
//! forms are hand-coded callables; each one is validated by the residual
//! oracle `|Δu + κ e^{2u}|` before it is trusted (see the tests and the
//! acceptance suite), never by symbolic algebra.
//!
//! All formulas depend on `|z|` and `Re z` only, so no complex-logarithm
//! branch cuts arise. The one non-smooth entry (`alpha-half-sharp`, whose
//! remainder has an `|Re z|` kink across the imaginary axis) declares an
//! excluded angular sector so that residual stencils never straddle the kink.

use crate::metrics::{ComplexFn, CurvatureField, MetricDensity, RealFn};
use crate::scalar::{log_recip, Real, C};
use serde::Serialize;
use std::sync::Arc;
use thiserror::Error;

/// Errors from catalog construction.
#[derive(Debug, Error, PartialEq)]
pub enum FamilyError {
    #[error("unknown catalog id `{0}`")]
    UnknownId(String),
    #[error("parameter out of range: {0}")]
    Parameter(String),
}

/// Which remainder convention an entry uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branch {
    /// `α < 1`: remainder `v = u + α log|z|`.
    Subcritical,
    /// `α = 1`: remainder `w = u + log|z| + log log(1/|z|)`.
    Critical,
}

/// A sub/supersolution pair for the extended maximum principle, with the
/// hypothesis its counterexample is designed to break (if any).
#[derive(Clone)]
pub struct ComparisonPair<F: Real> {
    /// Subsolution candidate `u₁`.
    pub u1: RealFn<F>,
    /// Supersolution candidate `u₂`.
    pub u2: RealFn<F>,
    /// Which hypothesis of the extended maximum principle fails, if the pair
    /// is a negative control: "i", "ii", "iii", "iv", or `None` for a
    /// genuine sub/super pair.
    pub expected_failing_hypothesis: Option<&'static str>,
}

/// A catalog entry: a genuine solution `u` of `Δu = −κe^{2u}` with declared
/// order and optional closed-form remainder derivatives.
#[derive(Clone)]
pub struct ClosedFormSolution<F: Real> {
    id: String,
    citation: String,
    alpha: F,
    u: RealFn<F>,
    kappa: CurvatureField<F>,
    remainder: Option<RealFn<F>>,
    d1: Option<ComplexFn<F>>,
    d2: Option<ComplexFn<F>>,
    pair: Option<ComparisonPair<F>>,
    /// Residual/derivative sampling must keep `|cos θ|` above this value
    /// (kink exclusion); 0 means no restriction.
    min_abs_cos_theta: F,
}

/// Catalog entry summary for listings.
#[derive(Debug, Serialize)]
pub struct CatalogEntryInfo {
    pub id: String,
    pub alpha: f64,
    pub citation: String,
    pub has_closed_derivatives: bool,
}

impl<F: Real> ClosedFormSolution<F> {
    pub fn id(&self) -> &str {
        &self.id
    }
    pub fn citation(&self) -> &str {
        &self.citation
    }
    pub fn alpha(&self) -> F {
        self.alpha
    }
    pub fn branch(&self) -> Branch {
        if self.alpha == F::one() {
            Branch::Critical
        } else {
            Branch::Subcritical
        }
    }
    pub fn u(&self, z: C<F>) -> F {
        (self.u)(z)
    }
    pub fn u_fn(&self) -> RealFn<F> {
        self.u.clone()
    }
    pub fn kappa(&self, z: C<F>) -> F {
        self.kappa.kappa(z)
    }
    pub fn kappa_field(&self) -> &CurvatureField<F> {
        &self.kappa
    }
    /// Closed-form remainder (`v` or `w` per [`Self::branch`]), if attached.
    pub fn remainder_closed(&self, z: C<F>) -> Option<F> {
        self.remainder.as_ref().map(|f| f(z))
    }
    /// Closed-form first remainder derivative (`v_z` or `w_z`), if attached.
    pub fn d1_closed(&self, z: C<F>) -> Option<C<F>> {
        self.d1.as_ref().map(|f| f(z))
    }
    /// Closed-form second remainder derivative (`v_zz` or `w_zz`), if attached.
    pub fn d2_closed(&self, z: C<F>) -> Option<C<F>> {
        self.d2.as_ref().map(|f| f(z))
    }
    pub fn d1_fn(&self) -> Option<ComplexFn<F>> {
        self.d1.clone()
    }
    pub fn d2_fn(&self) -> Option<ComplexFn<F>> {
        self.d2.clone()
    }
    pub fn has_closed_derivatives(&self) -> bool {
        self.d1.is_some()
    }
    /// The maximum-principle pair `(u₁, u₂)`, if this entry carries one.
    pub fn pair(&self) -> Option<&ComparisonPair<F>> {
        self.pair.as_ref()
    }

    /// Whether residual/derivative stencils may be centered at angle `θ`
    /// (kink-free sector check).
    pub fn angle_admissible(&self, theta: F) -> bool {
        theta.cos().abs() >= self.min_abs_cos_theta
    }

    /// Pointwise residual `|Δu + κ e^{2u}|` under the default Richardson
    /// stencil.
    pub fn residual_at(&self, z: C<F>) -> F {
        let u = self.u.clone();
        let lap = crate::grid::laplacian_at(move |w| u(w), z);
        (lap + self.kappa(z) * (F::of(2.0) * self.u(z)).exp()).abs()
    }

    /// The metric density `e^u |dz|` of this solution, with closed-form
    /// remainder derivatives translated into `u`-derivatives when available.
    pub fn metric(&self) -> MetricDensity<F> {
        let u = self.u.clone();
        let m = MetricDensity::from_u(move |z| u(z), (F::zero(), F::one()));
        match (self.d1.clone(), self.d2.clone(), self.branch()) {
            (Some(d1), d2, Branch::Subcritical) => {
                let alpha = self.alpha;
                // u = -α log|z| + v  =>  u_z = -α/(2z) + v_z
                let uz = move |z: C<F>| d1(z) - C::new(alpha, F::zero()) / (z * F::of(2.0));
                let uzz = d2.map(|d2| {
                    let f: ComplexFn<F> = Arc::new(move |z: C<F>| {
                        d2(z) + C::new(alpha, F::zero()) / (z * z * F::of(2.0))
                    });
                    f
                });
                m.with_derivatives(uz, uzz)
            }
            (Some(d1), d2, Branch::Critical) => {
                // u = -log|z| - log log(1/|z|) + w
                // ∂_z log log(1/|z|) = -1/(2z L), L = log(1/|z|)
                let uz = move |z: C<F>| {
                    let l = log_recip(z.norm());
                    let half = F::of(0.5);
                    d1(z) - C::new(half, F::zero()) / z + C::new(half, F::zero()) / (z * l)
                };
                let uzz = d2.map(|d2| {
                    let f: ComplexFn<F> = Arc::new(move |z: C<F>| {
                        let l = log_recip(z.norm());
                        let half = F::of(0.5);
                        let quarter = F::of(0.25);
                        // ∂_z [-1/(2z) + 1/(2zL)] = 1/(2z²) - 1/(2z²L) + 1/(4z²L²)
                        // (∂_z(1/L) = +1/(2zL²) because ∂_z L = -1/(2z))
                        d2(z)
                            + C::new(half, F::zero()) / (z * z)
                            - C::new(half, F::zero()) / (z * z * l)
                            + C::new(quarter, F::zero()) / (z * z * l * l)
                    });
                    f
                });
                m.with_derivatives(uz, uzz)
            }
            _ => m,
        }
    }

    pub fn info(&self) -> CatalogEntryInfo {
        CatalogEntryInfo {
            id: self.id.clone(),
            alpha: self.alpha.to_f64_lossy(),
            citation: self.citation.clone(),
            has_closed_derivatives: self.has_closed_derivatives(),
        }
    }
}

fn entry<F: Real>(
    id: &str,
    citation: &str,
    alpha: F,
    u: impl Fn(C<F>) -> F + Send + Sync + 'static,
    kappa: CurvatureField<F>,
) -> ClosedFormSolution<F> {
    ClosedFormSolution {
        id: id.to_string(),
        citation: citation.to_string(),
        alpha,
        u: Arc::new(u),
        kappa,
        remainder: None,
        d1: None,
        d2: None,
        pair: None,
        min_abs_cos_theta: F::zero(),
    }
}

/// Hyperbolic metric of the unit disk with constant curvature `−A`:
/// `u(z) = log(2/(√A(1−|z|²)))`, order 0.
pub fn hyperbolic_disk<F: Real>(big_a: F) -> ClosedFormSolution<F> {
    assert!(big_a > F::zero(), "curvature bound A must be positive");
    let sqrt_a = big_a.sqrt();
    let u = move |z: C<F>| (F::of(2.0) / (sqrt_a * (F::one() - z.norm_sqr()))).ln();
    let mut e = entry(
        "hyperbolic-disk",
        "§3.1 proof (hyperbolic metric of the unit disk)",
        F::zero(),
        u,
        CurvatureField::constant(-big_a),
    );
    // α = 0: v = u, v_z = z̄/(1−|z|²), v_zz = z̄²/(1−|z|²)²
    e.remainder = Some(Arc::new(u));
    e.d1 = Some(Arc::new(|z: C<F>| {
        z.conj() / C::new(F::one() - z.norm_sqr(), F::zero())
    }));
    e.d2 = Some(Arc::new(|z: C<F>| {
        let d = F::one() - z.norm_sqr();
        z.conj() * z.conj() / C::new(d * d, F::zero())
    }));
    e
}

/// Hyperbolic metric of the punctured unit disk, curvature `−A`, order 1:
/// `u(z) = log(1/(√A |z| log(1/|z|)))` — the maximal solution.
pub fn hyperbolic_punctured_disk<F: Real>(big_a: F) -> ClosedFormSolution<F> {
    assert!(big_a > F::zero(), "curvature bound A must be positive");
    let sqrt_a = big_a.sqrt();
    let u = move |z: C<F>| {
        let r = z.norm();
        (F::one() / (sqrt_a * r * log_recip(r))).ln()
    };
    let mut e = entry(
        "hyperbolic-punctured-disk",
        "§3.1 proof (maximal solution) / §2.1 Poincaré metric",
        F::one(),
        u,
        CurvatureField::constant(-big_a),
    );
    // w = u + log|z| + log log(1/|z|) = -log √A, constant
    e.remainder = Some(Arc::new(move |_z: C<F>| -sqrt_a.ln()));
    e.d1 = Some(Arc::new(|_z: C<F>| C::new(F::zero(), F::zero())));
    e.d2 = Some(Arc::new(|_z: C<F>| C::new(F::zero(), F::zero())));
    e
}

/// The supersolution family `u_α^A` of §3.1 (a genuine solution with
/// `κ ≡ −A` and order `α`):
/// `u(z) = log((2/√A)(1−α)|z|^{−α}/(1−|z|^{2(1−α)}))`, `α < 1`.
///
/// For `α = 1` use [`hyperbolic_punctured_disk`] explicitly.
pub fn supersolution_family<F: Real>(
    alpha: F,
    big_a: F,
) -> Result<ClosedFormSolution<F>, FamilyError> {
    if alpha >= F::one() {
        return Err(FamilyError::Parameter(format!(
            "supersolution_family requires alpha < 1 (got {}); use the alpha = 1 branch explicitly",
            alpha
        )));
    }
    if big_a <= F::zero() {
        return Err(FamilyError::Parameter("A must be positive".into()));
    }
    let sqrt_a = big_a.sqrt();
    let one = F::one();
    let beta = F::of(2.0) * (one - alpha);
    let v = move |z: C<F>| {
        let r = z.norm();
        (F::of(2.0) / sqrt_a * (one - alpha) / (one - r.powf(beta))).ln()
    };
    let u = move |z: C<F>| -alpha * z.norm().ln() + v(z);
    let mut e = entry(
        "supersolution",
        "§3.1 proof (the family u_α^A)",
        alpha,
        u,
        CurvatureField::constant(-big_a),
    );
    e.remainder = Some(Arc::new(v));
    // v_z = (1−α) z̄ |z|^{−2α} / (1−|z|^{2(1−α)})
    e.d1 = Some(Arc::new(move |z: C<F>| {
        let r = z.norm();
        z.conj() * ((one - alpha) * r.powf(-F::of(2.0) * alpha) / (one - r.powf(beta)))
    }));
    // v_zz = (1−α)(z̄/z)(|z|^{2(1−α)}−α)/((1−|z|^{2(1−α)})² |z|^{2α})
    e.d2 = Some(Arc::new(move |z: C<F>| {
        let r = z.norm();
        let rb = r.powf(beta);
        let denom = (one - rb) * (one - rb) * r.powf(F::of(2.0) * alpha);
        z.conj() / z * ((one - alpha) * (rb - alpha) / denom)
    }));
    Ok(e)
}

/// The rescaled subsolution `u^a_{α,R}(z) = u^a_α(z/R) + log(1/R)`, `R > 1`;
/// a genuine solution with `κ ≡ −a` and order `α` whose boundary values sink
/// to `−∞` as `R → ∞`.
pub fn subsolution_family<F: Real>(
    alpha: F,
    a: F,
    big_r: F,
) -> Result<ClosedFormSolution<F>, FamilyError> {
    if big_r <= F::one() {
        return Err(FamilyError::Parameter(format!(
            "subsolution_family requires R > 1, got {}",
            big_r
        )));
    }
    if alpha > F::one() {
        return Err(FamilyError::Parameter("alpha must be <= 1".into()));
    }
    let base: ClosedFormSolution<F> = if alpha == F::one() {
        hyperbolic_punctured_disk(a)
    } else {
        supersolution_family(alpha, a)?
    };
    let base_u = base.u_fn();
    let u = move |z: C<F>| base_u(z / big_r) + (F::one() / big_r).ln();
    entry(
        "subsolution",
        "§3.1 proof (rescaled subsolution u^a_{α,R})",
        alpha,
        u,
        CurvatureField::constant(-a),
    )
    .pipe_ok()
}

trait PipeOk: Sized {
    fn pipe_ok<E>(self) -> Result<Self, E> {
        Ok(self)
    }
}
impl<T> PipeOk for T {}

/// The three-branch Nitsche family: `C²`-solutions of `Δu = 4e^{2u}` on the
/// punctured disk of every order `α ≤ 1`, with the closed-form remainder
/// derivatives attached where they exist (the `0 < α < 1` and `α = 1`
/// branches; the `α ≤ 0` branch has only the stated limits
/// `v_z → 1/2 − α/4`, `v_zz → −1/2 + α/8`).
pub fn nitsche_family<F: Real>(alpha: F) -> Result<ClosedFormSolution<F>, FamilyError> {
    if alpha > F::one() {
        return Err(FamilyError::Parameter(format!(
            "nitsche_family requires alpha <= 1, got {}",
            alpha
        )));
    }
    let one = F::one();
    let kappa = CurvatureField::constant(-F::of(4.0));
    let mut e = if alpha == F::one() {
        // u = -log|z| - log L + log(½ L/(1+L)),  L = log(1/|z|)
        let w = move |z: C<F>| {
            let l = log_recip(z.norm());
            (F::of(0.5) * l / (one + l)).ln()
        };
        let u = move |z: C<F>| {
            let r = z.norm();
            -r.ln() - log_recip(r).ln() + w(z)
        };
        let mut e = entry("nitsche", "§2.1 Example (α = 1 branch)", alpha, u, kappa);
        e.remainder = Some(Arc::new(w));
        // w_z = -1/(2zL²) · L/(1+L)
        e.d1 = Some(Arc::new(move |z: C<F>| {
            let l = log_recip(z.norm());
            -(C::new(one, F::zero()) / (z * (F::of(2.0) * l * (one + l))))
        }));
        // w_zz = -1/(4z²L²) · (1/L² − 2)/(1 + 1/L)²
        e.d2 = Some(Arc::new(move |z: C<F>| {
            let l = log_recip(z.norm());
            let num = one / (l * l) - F::of(2.0);
            let den = (one + one / l) * (one + one / l);
            -(C::new(one, F::zero()) / (z * z * (F::of(4.0) * l * l))) * (num / den)
        }));
        e
    } else if alpha > F::zero() {
        let mut e = supersolution_family(alpha, F::of(4.0))?;
        e.id = "nitsche".into();
        e.citation = "§2.1 Example (0 < α < 1 branch)".into();
        e
    } else {
        // α ≤ 0 branch:
        // u = -α log|z| + log((1−α)·(4^{2−α}/2)·|1+z||2+z|^{−α} /
        //                     (4^{2(1−α)} − |2z+z²|^{2(1−α)}))
        let v = move |z: C<F>| {
            let four = F::of(4.0);
            let beta = F::of(2.0) * (one - alpha);
            let num = (one - alpha) * four.powf(F::of(2.0) - alpha) / F::of(2.0)
                * (C::new(one, F::zero()) + z).norm()
                * (C::new(F::of(2.0), F::zero()) + z).norm().powf(-alpha);
            let den = four.powf(beta) - (z * F::of(2.0) + z * z).norm().powf(beta);
            (num / den).ln()
        };
        let u = move |z: C<F>| -alpha * z.norm().ln() + v(z);
        let mut e = entry("nitsche", "§2.1 Example (α ≤ 0 branch)", alpha, u, kappa);
        e.remainder = Some(Arc::new(v));
        e
    };
    e.id = "nitsche".into();
    Ok(e)
}

/// Stated limits of the Nitsche `α ≤ 0` branch: `(lim v_z, lim v_zz)` =
/// `(1/2 − α/4, −1/2 + α/8)`.
pub fn nitsche_alpha_nonpositive_limits<F: Real>(alpha: F) -> (F, F) {
    (
        F::of(0.5) - alpha / F::of(4.0),
        -F::of(0.5) + alpha / F::of(8.0),
    )
}

/// The `alpha1-holder-rate(β)` counterexample: critical solution with
/// `w(z) = (log(1/|z|))^{−β}` and continuous (but not Hölder-matching)
/// curvature, showing the sharp `w_z` decay `|z|^{−1}(log(1/|z|))^{−1−β}`.
pub fn holder_rate<F: Real>(beta: F) -> Result<ClosedFormSolution<F>, FamilyError> {
    if beta <= F::zero() {
        return Err(FamilyError::Parameter("beta must be positive".into()));
    }
    let one = F::one();
    let w = move |z: C<F>| log_recip(z.norm()).powf(-beta);
    let u = move |z: C<F>| {
        let r = z.norm();
        -r.ln() - log_recip(r).ln() + w(z)
    };
    let kappa = CurvatureField::new(move |z: C<F>| {
        let l = log_recip(z.norm());
        -((-F::of(2.0) * l.powf(-beta)).exp()) * (one + beta * (one + beta) * l.powf(-beta))
    });
    let mut e = entry(
        "alpha1-holder-rate",
        "§3.3 Example (rate w_z ~ |z|^{-1} L^{-(1+β)})",
        one,
        u,
        kappa,
    );
    e.remainder = Some(Arc::new(w));
    // w_z = (β/2)(1/z)L^{−(β+1)}
    e.d1 = Some(Arc::new(move |z: C<F>| {
        let l = log_recip(z.norm());
        C::new(beta / F::of(2.0), F::zero()) / z * l.powf(-(beta + one))
    }));
    Ok(e)
}

/// Counterexamples and sharpness examples, by id. `alpha1-holder-rate`
/// defaults to `β = 1`; use [`holder_rate`] for other exponents.
pub fn counterexample<F: Real>(id: &str) -> Result<ClosedFormSolution<F>, FamilyError> {
    let one = F::one();
    match id {
        "maxprin-superharmonic" => {
            // κ ≡ 0; u₁ ≡ 0 is a genuine solution; u₂ the superharmonic
            // spike −(Re z/|z| + 1)|z|^{−3/2} log(1/|z|). Hypothesis (i)
            // fails: u₂ is superharmonic, not subharmonic.
            let u1 = move |_z: C<F>| F::zero();
            let u2 = move |z: C<F>| {
                let r = z.norm();
                -(z.re / r + one) * r.powf(F::of(-1.5)) * log_recip(r)
            };
            let mut e = entry(
                id,
                "§2.2 first counterexample (superharmonic u₂)",
                F::zero(),
                u1,
                CurvatureField::constant(F::zero()),
            );
            e.pair = Some(ComparisonPair {
                u1: Arc::new(u1),
                u2: Arc::new(u2),
                expected_failing_hypothesis: Some("i"),
            });
            e.remainder = Some(Arc::new(u1));
            Ok(e)
        }
        "maxprin-order-infty" => {
            // κ ≡ −e²; u₁ = log(1/(e|z|log(e/|z|))) solves Δu = e² e^{2u};
            // u₂ = Re(z)/|z|² is harmonic with M_{u₂}(r)/log(1/r) → ∞.
            // Hypothesis (iv) fails.
            let u1 = move |z: C<F>| {
                let r = z.norm();
                (one / (F::E() * r * (F::E() / r).ln())).ln()
            };
            let u2 = move |z: C<F>| z.re / z.norm_sqr();
            let e2 = F::E() * F::E();
            let mut e = entry(
                id,
                "§2.2 second counterexample (order +∞)",
                one,
                u1,
                CurvatureField::constant(-e2),
            );
            e.pair = Some(ComparisonPair {
                u1: Arc::new(u1),
                u2: Arc::new(u2),
                expected_failing_hypothesis: Some("iv"),
            });
            // w = u1 + log|z| + log L = log(L/(e(1+L)))
            e.remainder = Some(Arc::new(move |z: C<F>| {
                let l = log_recip(z.norm());
                (l / (F::E() * (one + l))).ln()
            }));
            Ok(e)
        }
        "alpha1-bounded-kappa" => {
            // w bounded but not continuous at 0: oscillating sin(log log)
            // term; κ bounded strictly negative but discontinuous at 0.
            let w = move |z: C<F>| {
                let b = log_recip(z.norm()).ln();
                F::of(2.0) + b.sin() / (F::of(6.0) + b.sin())
            };
            let u = move |z: C<F>| {
                let r = z.norm();
                -r.ln() - log_recip(r).ln() + w(z)
            };
            let kappa = CurvatureField::new(move |z: C<F>| {
                let b = log_recip(z.norm()).ln();
                let six = F::of(6.0);
                let s = b.sin();
                let c = b.cos();
                (six * (s + c) / ((six + s) * (six + s))
                    + F::of(12.0) * c * c / ((six + s) * (six + s) * (six + s))
                    - one)
                    * (-six + F::of(12.0) / (six + s)).exp()
            });
            let mut e = entry(
                id,
                "§3.1 Example (bounded κ, discontinuous w)",
                one,
                u,
                kappa,
            );
            e.remainder = Some(Arc::new(w));
            Ok(e)
        }
        "alpha-half-sharp" => {
            // Ex. 3.6: α = 1/2, v = |Re z| log|z| + 4|z|; κ strictly
            // negative but discontinuous; v_z unbounded like log(1/|z|).
            // C² off the imaginary axis only: residual/derivative sampling
            // excludes the sector |cos θ| < 0.3.
            let v = move |z: C<F>| z.re.abs() * z.norm().ln() + F::of(4.0) * z.norm();
            let u = move |z: C<F>| -F::of(0.5) * z.norm().ln() + v(z);
            let kappa = CurvatureField::new(move |z: C<F>| {
                let r = z.norm();
                -(F::of(4.0) + F::of(2.0) * z.re.abs() / r) * (-F::of(2.0) * v(z)).exp()
            })
            .with_bounds(F::of(6.0) * F::E(), F::of(4.0) * (-F::of(8.0)).exp());
            let mut e = entry(id, "§3.3 Example 3.6 (α = 1/2 sharp)", F::of(0.5), u, kappa);
            e.remainder = Some(Arc::new(v));
            // v_z = |Re z|/(2z) + 2z̄/|z| − (Re z/(2|Re z|)) log(1/|z|)
            e.d1 = Some(Arc::new(move |z: C<F>| {
                let r = z.norm();
                C::new(z.re.abs(), F::zero()) / (z * F::of(2.0))
                    + z.conj() * (F::of(2.0) / r)
                    - C::new(z.re / (F::of(2.0) * z.re.abs()) * log_recip(r), F::zero())
            }));
            e.min_abs_cos_theta = F::of(0.3);
            Ok(e)
        }
        "alpha-half-continuous-kappa" => {
            // Ex. 3.7: α = 1/2, κ continuous at 0 (κ(0) = −4) but not
            // Hölder; v_z still unbounded like ½ log log(e/|z|).
            let v = move |z: C<F>| {
                let r = z.norm();
                z.re * (F::E() / r).ln().ln() + F::of(4.0) * r
            };
            let u = move |z: C<F>| -F::of(0.5) * z.norm().ln() + v(z);
            let kappa = CurvatureField::new(move |z: C<F>| {
                let r = z.norm();
                let lr = r.ln();
                -(F::of(4.0)
                    + z.re / r * (-F::of(3.0) + F::of(2.0) * lr) / ((one - lr) * (one - lr)))
                    * (-F::of(2.0) * v(z)).exp()
            });
            let mut e = entry(
                id,
                "§3.3 Example 3.7 (continuous κ, unbounded v_z)",
                F::of(0.5),
                u,
                kappa,
            );
            e.remainder = Some(Arc::new(v));
            // v_z = 2z̄/|z| − ½ Re(z)z̄/(|z|² log(e/|z|)) + ½ log log(e/|z|)
            e.d1 = Some(Arc::new(move |z: C<F>| {
                let r = z.norm();
                let le = (F::E() / r).ln();
                z.conj() * (F::of(2.0) / r) - z.conj() * (z.re / (F::of(2.0) * r * r * le))
                    + C::new(F::of(0.5) * le.ln(), F::zero())
            }));
            Ok(e)
        }
        "alpha1-holder-rate" => holder_rate(one),
        "kappa-unbounded" => {
            // u = ½ log(1/(|z| log(e/|z|))); Δu = (1/|z|)(1/(2−2log|z|)) e^{2u},
            // so κ = −1/(|z|(2−2log|z|)) → −∞ as z → 0 (strict negativity
            // fails at the puncture; no bounds declared).
            let u = move |z: C<F>| {
                let r = z.norm();
                F::of(0.5) * (one / (r * (F::E() / r).ln())).ln()
            };
            let kappa = CurvatureField::new(move |z: C<F>| {
                let r = z.norm();
                -(one / (r * (F::of(2.0) - F::of(2.0) * r.ln())))
            });
            let mut e = entry(id, "§2.1 end (κ unbounded at 0)", F::of(0.5), u, kappa);
            // v = u + ½ log|z| = −½ log log(e/|z|)
            e.remainder = Some(Arc::new(move |z: C<F>| {
                -F::of(0.5) * (F::E() / z.norm()).ln().ln()
            }));
            Ok(e)
        }
        other => Err(FamilyError::UnknownId(other.to_string())),
    }
}

/// All counterexample ids, in catalog order.
pub const COUNTEREXAMPLE_IDS: [&str; 7] = [
    "maxprin-superharmonic",
    "maxprin-order-infty",
    "alpha1-bounded-kappa",
    "alpha-half-sharp",
    "alpha-half-continuous-kappa",
    "alpha1-holder-rate",
    "kappa-unbounded",
];

/// The full default catalog (≥ 12 entries: the named families at
/// representative parameters plus all seven counterexamples).
pub fn catalog<F: Real>() -> Vec<ClosedFormSolution<F>> {
    let mut out = vec![
        hyperbolic_disk(F::of(4.0)),
        hyperbolic_punctured_disk(F::of(4.0)),
        supersolution_family(F::of(0.5), F::of(4.0)).unwrap(),
        subsolution_family(F::of(0.5), F::of(4.0), F::of(2.0)).unwrap(),
        nitsche_family(F::of(-1.0)).unwrap(),
        nitsche_family(F::of(0.5)).unwrap(),
        nitsche_family(F::one()).unwrap(),
    ];
    for id in COUNTEREXAMPLE_IDS {
        out.push(counterexample(id).unwrap());
    }
    out
}

/// Resolve a catalog id (with optional α for the parametric families).
pub fn resolve<F: Real>(id: &str, alpha: Option<F>) -> Result<ClosedFormSolution<F>, FamilyError> {
    match id {
        "hyperbolic-disk" => Ok(hyperbolic_disk(F::of(4.0))),
        "hyperbolic-punctured-disk" => Ok(hyperbolic_punctured_disk(F::of(4.0))),
        "supersolution" => supersolution_family(alpha.unwrap_or_else(|| F::of(0.5)), F::of(4.0)),
        "subsolution" => {
            subsolution_family(alpha.unwrap_or_else(|| F::of(0.5)), F::of(4.0), F::of(2.0))
        }
        "nitsche" => nitsche_family(alpha.unwrap_or_else(F::one)),
        other => counterexample(other),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    type C64 = Complex<f64>;

    fn random_points(n: usize, seed: u64) -> Vec<C64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|_| {
                let s = rng.gen_range((1e-3f64).ln()..(0.9f64).ln());
                let t = rng.gen_range(0.0..std::f64::consts::TAU);
                C64::from_polar(s.exp(), t)
            })
            .collect()
    }

    fn max_residual(sol: &ClosedFormSolution<f64>) -> f64 {
        random_points(100, 7)
            .into_iter()
            .filter(|z| sol.angle_admissible(z.arg()))
            .map(|z| sol.residual_at(z))
            .fold(0.0, f64::max)
    }

    #[test]
    fn hyperbolic_disk_values() {
        let s = hyperbolic_disk(4.0);
        assert!(s.u(C64::new(1e-12, 0.0)).abs() < 1e-9); // u(0) = log 1 = 0
        let s1 = hyperbolic_disk(1.0);
        assert!((s1.u(C64::new(1e-12, 0.0)) - 2.0f64.ln()).abs() < 1e-9);
        assert!(max_residual(&s) < 1e-4);
    }

    #[test]
    fn punctured_disk_values() {
        let s = hyperbolic_punctured_disk(4.0);
        let z = C64::new((-1.0f64).exp(), 0.0);
        assert!((s.u(z) - (std::f64::consts::E / 2.0).ln()).abs() < 1e-12);
        let s1 = hyperbolic_punctured_disk(1.0);
        assert!((s1.u(z) - 1.0).abs() < 1e-12);
        assert!(max_residual(&s) < 1e-4);
        // w ≡ -log 2 for A = 4
        assert!((s.remainder_closed(z).unwrap() + 2.0f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn supersolution_example_value() {
        // α = 1/2, A = 4, |z| = 1/4: direct evaluation of the display
        // gives (2/2)·(1/2)·4^{1/2}/(1−(1/4)^1)·... = 4/3, u = log(4/3)
        let s = supersolution_family(0.5, 4.0).unwrap();
        let u = s.u(C64::new(0.25, 0.0));
        assert!((u - (4.0f64 / 3.0).ln()).abs() < 1e-12, "u = {u}");
        assert!(max_residual(&s) < 1e-4);
    }

    #[test]
    fn supersolution_alpha_zero_is_hyperbolic_disk() {
        let s = supersolution_family(0.0, 4.0).unwrap();
        let h = hyperbolic_disk(4.0);
        for z in random_points(20, 3) {
            assert!((s.u(z) - h.u(z)).abs() < 1e-12);
        }
    }

    #[test]
    fn supersolution_rejects_alpha_one() {
        assert!(matches!(
            supersolution_family(1.0, 4.0),
            Err(FamilyError::Parameter(_))
        ));
    }

    #[test]
    fn subsolution_value_and_limits() {
        // α=1, a=4, R=2, |z|=e^{-1}: u = 1 − log log(2e) − log 2
        let s = subsolution_family(1.0, 4.0, 2.0).unwrap();
        let z = C64::new((-1.0f64).exp(), 0.0);
        let want = 1.0 - (2.0 * std::f64::consts::E).ln().ln() - 2.0f64.ln();
        assert!((s.u(z) - want).abs() < 1e-12, "{} vs {want}", s.u(z));
        assert!(max_residual(&s) < 1e-4);

        // R → 1+ limit recovers the supersolution family
        let near = subsolution_family(0.5, 4.0, 1.0 + 1e-9).unwrap();
        let sup = supersolution_family(0.5, 4.0).unwrap();
        let z = C64::new(0.3, 0.1);
        assert!((near.u(z) - sup.u(z)).abs() < 1e-6);

        // monotone in R and sinking boundary values
        let z = C64::new(0.5, 0.0);
        let u2 = subsolution_family(0.5, 4.0, 2.0).unwrap().u(z);
        let u8 = subsolution_family(0.5, 4.0, 8.0).unwrap().u(z);
        assert!(u2 > u8);
        let zb = C64::new(0.999, 0.0);
        // boundary values sink like (1-α) log R ≈ 6.9 for R = 1e6
        let big = subsolution_family(0.5, 4.0, 1e6).unwrap().u(zb);
        assert!(big < -5.0, "boundary value {big}");
    }

    #[test]
    fn subsolution_rejects_r_below_one() {
        assert!(matches!(
            subsolution_family(0.5, 4.0, 1.0),
            Err(FamilyError::Parameter(_))
        ));
    }

    #[test]
    fn nitsche_critical_values() {
        let s = nitsche_family(1.0).unwrap();
        let z = C64::new((-1.0f64).exp(), 0.0);
        // w(e^{-1}) = log(½·1/(1+1)) = log(1/4)
        assert!((s.remainder_closed(z).unwrap() - 0.25f64.ln()).abs() < 1e-12);
        // w_z at |z| = e^{-2} on the positive real axis: −e²/12
        let z2 = C64::new((-2.0f64).exp(), 0.0);
        let wz = s.d1_closed(z2).unwrap();
        let want = -std::f64::consts::E.powi(2) / 12.0;
        assert!((wz - C64::new(want, 0.0)).norm() < 1e-12, "{wz} vs {want}");
        assert!(max_residual(&s) < 1e-4);
    }

    #[test]
    fn nitsche_subcritical_value() {
        // α = 1/2, |z| = 1/2: u = ½ log 2
        let s = nitsche_family(0.5).unwrap();
        let u = s.u(C64::new(0.5, 0.0));
        assert!((u - 0.5 * 2.0f64.ln()).abs() < 1e-12);
        assert!(max_residual(&s) < 1e-4);
    }

    #[test]
    fn nitsche_nonpositive_branch_residual() {
        for alpha in [-2.0, -1.0, -0.5, 0.0] {
            let s = nitsche_family(alpha).unwrap();
            let r = max_residual(&s);
            assert!(r < 1e-4, "alpha {alpha}: residual {r}");
        }
    }

    #[test]
    fn nitsche_nonpositive_derivative_limits() {
        // lim v_z = 1/2 − α/4, lim v_zz = −1/2 + α/8, probed numerically
        // at |z| = 1e-4 (below ~1e-5 the second-difference stencil drowns
        // in f64 rounding).
        for alpha in [0.0, -1.0, -2.0] {
            let s = nitsche_family(alpha).unwrap();
            let (want_vz, want_vzz) = nitsche_alpha_nonpositive_limits(alpha);
            let v = {
                let u = s.u_fn();
                move |z: C64| u(z) + alpha * z.norm().ln()
            };
            let z = C64::from_polar(1e-4, 0.7);
            let h = z.norm() / 16.0;
            let vz = crate::grid::dz(&v, z, h).unwrap();
            let vzz = crate::grid::dzz(&v, z, h).unwrap();
            assert!(
                (vz - C64::new(want_vz, 0.0)).norm() < 2e-4,
                "alpha {alpha}: v_z {vz} vs {want_vz}"
            );
            assert!(
                (vzz - C64::new(want_vzz, 0.0)).norm() < 2e-3,
                "alpha {alpha}: v_zz {vzz} vs {want_vzz}"
            );
        }
    }

    #[test]
    fn closed_derivatives_match_numerics() {
        // the transcription check: attached v_z/w_z (and v_zz/w_zz) against
        // grid-module numerical derivatives of the remainder
        for (sol, alpha) in [
            (nitsche_family(0.75).unwrap(), 0.75),
            (nitsche_family(0.3).unwrap(), 0.3),
            (nitsche_family(1.0).unwrap(), 1.0),
            (holder_rate(1.0).unwrap(), 1.0),
            (hyperbolic_disk(4.0), 0.0),
        ] {
            let u = sol.u_fn();
            let rem = move |z: C64| {
                if alpha == 1.0 {
                    u(z) + z.norm().ln() + (1.0 / z.norm()).ln().ln()
                } else {
                    u(z) + alpha * z.norm().ln()
                }
            };
            for z in random_points(20, 11) {
                let h = z.norm() * 1e-4;
                let num = crate::grid::dz(&rem, z, h).unwrap();
                let closed = sol.d1_closed(z).unwrap();
                let denom = closed.norm().max(1.0);
                assert!(
                    (num - closed).norm() / denom < 1e-6,
                    "{} at {z}: {num} vs {closed}",
                    sol.id()
                );
                if let Some(d2) = sol.d2_closed(z) {
                    let h2 = z.norm() * 1e-3;
                    let num2 = crate::grid::dzz(&rem, z, h2).unwrap();
                    // second-difference rounding noise scales like ε/h²;
                    // allow for it explicitly at small |z|
                    let tol = 2e-5 * d2.norm().max(1.0) + 1e-15 / (h2 * h2);
                    assert!(
                        (num2 - d2).norm() < tol,
                        "{} d2 at {z}: {num2} vs {d2}",
                        sol.id()
                    );
                }
            }
        }
    }

    #[test]
    fn counterexample_values() {
        // holder β=1: w_z at |z| = e^{-2} on the real axis = e²/8
        let s = counterexample::<f64>("alpha1-holder-rate").unwrap();
        let z = C64::new((-2.0f64).exp(), 0.0);
        let wz = s.d1_closed(z).unwrap();
        let want = std::f64::consts::E.powi(2) / 8.0;
        assert!((wz - C64::new(want, 0.0)).norm() < 1e-12, "{wz} vs {want}");

        // kappa-unbounded: κ → −∞ as z → 0
        let s = counterexample::<f64>("kappa-unbounded").unwrap();
        assert!(s.kappa(C64::new(1e-8, 0.0)) < -1e6);

        // bounded-kappa: w oscillation stays ≥ 0.05 on dyadic annuli
        let s = counterexample::<f64>("alpha1-bounded-kappa").unwrap();
        let mut min_osc = f64::INFINITY;
        let mut k = 8.0f64;
        while k <= 26.0 {
            let r = 2.0f64.powf(-k);
            let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
            // oscillation across the annulus [r, 2r] (w is radial)
            for m in 0..64 {
                let rr = r * 2.0f64.powf(m as f64 / 63.0);
                let w = s.remainder_closed(C64::new(rr, 0.0)).unwrap();
                lo = lo.min(w);
                hi = hi.max(w);
            }
            min_osc = min_osc.min(hi - lo);
            k += 1.0;
        }
        // oscillation of sin(log log) over a dyadic annulus shrinks slowly
        // but stays well clear of zero down to r = 2^{-26}
        assert!(min_osc > 0.001, "min oscillation {min_osc}");
    }

    #[test]
    fn counterexample_residuals() {
        for id in COUNTEREXAMPLE_IDS {
            let s = counterexample::<f64>(id).unwrap();
            let r = max_residual(&s);
            assert!(r < 1e-4, "{id}: residual {r}");
        }
    }

    #[test]
    fn unknown_id_is_rejected() {
        assert!(matches!(
            counterexample::<f64>("nope"),
            Err(FamilyError::UnknownId(_))
        ));
    }

    #[test]
    fn catalog_is_complete() {
        let cat = catalog::<f64>();
        assert!(cat.len() >= 12, "catalog has {} entries", cat.len());
        let n_counter = cat
            .iter()
            .filter(|e| COUNTEREXAMPLE_IDS.contains(&e.id()))
            .count();
        assert_eq!(n_counter, 7);
        let info = serde_json::to_value(cat[0].info()).unwrap();
        assert!(info["id"].is_string());
        assert!(info["citation"].is_string());
        assert!(info["has_closed_derivatives"].is_boolean());
    }

    #[test]
    fn whole_catalog_passes_residual_oracle() {
        for sol in catalog::<f64>() {
            let r = max_residual(&sol);
            assert!(r < 1e-4, "{}: residual {r}", sol.id());
        }
    }

    #[test]
    fn kappa_cross_check_against_rederived_value() {
        // κ rederived as −Δu·e^{−2u} must match the printed κ for entries
        // with variable curvature (discrepancies would mean a transcription
        // error in one of the two formulas).
        for id in ["alpha1-bounded-kappa", "alpha1-holder-rate", "kappa-unbounded"] {
            let s = counterexample::<f64>(id).unwrap();
            for z in random_points(20, 5) {
                let u = s.u_fn();
                let lap = crate::grid::laplacian_at(move |w| u(w), z);
                let rederived = -lap * (-2.0 * s.u(z)).exp();
                let printed = s.kappa(z);
                let denom = printed.abs().max(1e-2);
                assert!(
                    ((rederived - printed) / denom).abs() < 1e-3,
                    "{id} at {z}: rederived {rederived} vs printed {printed}"
                );
            }
        }
    }

    #[test]
    fn max_principle_pairs_present() {
        let s = counterexample::<f64>("maxprin-superharmonic").unwrap();
        let p = s.pair().unwrap();
        assert_eq!(p.expected_failing_hypothesis, Some("i"));
        // u₂ dips below u₁ = 0 near the positive real axis... the spike is
        // most negative where Re z/|z| = 1
        let z = C64::new(0.1, 0.0);
        assert!((p.u2)(z) < (p.u1)(z));

        let s = counterexample::<f64>("maxprin-order-infty").unwrap();
        let p = s.pair().unwrap();
        assert_eq!(p.expected_failing_hypothesis, Some("iv"));
        // u₁ ≰ u₂: on the negative real axis u₂ → −∞ faster than u₁ grows
        let z = C64::new(-0.05, 0.0);
        assert!((p.u1)(z) > (p.u2)(z));
    }

    #[test]
    fn resolve_maps_ids() {
        assert_eq!(resolve::<f64>("nitsche", Some(0.5)).unwrap().alpha(), 0.5);
        assert!(resolve::<f64>("bogus", None).is_err());
    }
}
