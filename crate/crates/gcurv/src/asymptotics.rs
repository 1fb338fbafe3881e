//! Singularity classification and verification of the asymptotic laws.
//!
//! The order of a solution at the puncture is `α = lim M_u(r)/log(1/r)`,
//! where `M_u(r)` is the circle maximum. The raw ratio converges only like
//! `1/log(1/r)`, so the estimator works with difference quotients of `M_u`
//! against `log r` (the `r·M_u′(r)` characterization kills additive
//! constants), plus a critical-corrected variant — slopes of
//! `M_u + log log(1/r)` — that removes the slowly-varying `log log` term of
//! the critical branch; see [`estimate_order`].
//!
//! Growth exponents of remainder derivatives are fitted on a dyadic radius
//! ladder by least squares of `log max|g|` against `log r`, `log log(1/r)`,
//! a constant, and a `1/log(1/r)` nuisance regressor that absorbs the
//! `O(1/log(1/r))` corrections every closed form in the catalog carries
//! (without it, the critical-branch exponent `q` is biased by ≈ 0.17).
//!
//! Measured limits (geometric limits, Yau ratios, the curvature–remainder
//! bound) are Richardson-extrapolated in `x = 1/log(1/r)` to `x = 0`; the
//! raw sequences converge only at rate `x` and would need absurdly small
//! radii otherwise.

use crate::families::{Branch, ClosedFormSolution};
use crate::metrics::{connection, schwarzian, MetricDensity};
use crate::scalar::{log_recip, Real, C};
use serde::Serialize;
use std::sync::Arc;
use thiserror::Error;

/// Errors from the asymptotic analyses.
#[derive(Debug, Error, PartialEq)]
pub enum AsymptoticsError {
    #[error("need at least {need} radii spanning at least {decades} decades")]
    InsufficientRadii { need: usize, decades: usize },
    #[error("radius ladder spans too few decades for an exponent fit")]
    SpanTooSmall,
    #[error("branch {branch:?} inconsistent with alpha_hat = {alpha_hat}")]
    BranchMismatch { branch: Branch, alpha_hat: f64 },
}

/// Per-claim verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    Indeterminate,
    /// Pass/fail computed from a solved grid field that cannot reach the
    /// asymptotic radii; treat as advisory.
    LowConfidence,
}

/// One fitted growth rate compared against a theorem row.
#[derive(Debug, Clone, Serialize)]
pub struct RateVerdict {
    pub claim: String,
    pub verdict: Verdict,
    pub p_hat: f64,
    pub q_hat: f64,
    pub expected_p: Option<f64>,
    pub expected_q: Option<f64>,
}

/// Result of a growth-exponent fit: `|g| ≈ e^c · |z|^p (log(1/|z|))^q`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct GrowthFit {
    pub p_hat: f64,
    pub q_hat: f64,
    pub c_hat: f64,
    pub residual_rms: f64,
    pub indeterminate: bool,
}

/// Classification report for one solution.
#[derive(Debug, Clone, Serialize)]
pub struct SingularityReport<F: Real + Serialize> {
    pub alpha_hat: F,
    pub alpha_stderr: F,
    pub alpha_declared: Option<F>,
    pub branch: Branch,
    /// `(r, remainder circle-max)` samples over the radius ladder.
    pub remainder_samples: Vec<(f64, f64)>,
    pub first_derivative_fit: Option<GrowthFit>,
    pub second_derivative_fit: Option<GrowthFit>,
    pub rate_verdicts: Vec<RateVerdict>,
    /// Measured geometric limits `(|z|L·λ, Re zΓ, Re z²S)`, when computed.
    pub limit_values: Option<[f64; 3]>,
}

impl<F: Real + Serialize> SingularityReport<F> {
    pub fn all_pass(&self) -> bool {
        self.rate_verdicts
            .iter()
            .all(|v| v.verdict == Verdict::Pass || v.verdict == Verdict::Indeterminate)
    }
}

/// `M_u(r) = max_{|z|=r} u(z)` over `n_theta` equispaced angles, refined by
/// one golden-section pass around the discrete argmax.
pub fn max_on_circle<F: Real>(u: impl Fn(C<F>) -> F, r: F, n_theta: usize) -> F {
    assert!(n_theta >= 64, "max_on_circle needs n_theta >= 64");
    let ht = F::TAU() / F::from_usize(n_theta).unwrap();
    let eval = |t: F| u(C::from_polar(r, t));
    let mut best_j = 0usize;
    let mut best = F::neg_infinity();
    for j in 0..n_theta {
        let v = eval(ht * F::from_usize(j).unwrap());
        if v > best {
            best = v;
            best_j = j;
        }
    }
    // golden-section maximization on the bracket around the argmax
    let gold = F::of(0.618_033_988_749_894_9);
    let mut a = ht * (F::from_usize(best_j).unwrap() - F::one());
    let mut b = ht * (F::from_usize(best_j).unwrap() + F::one());
    let mut c = b - gold * (b - a);
    let mut d = a + gold * (b - a);
    let mut fc = eval(c);
    let mut fd = eval(d);
    for _ in 0..48 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - gold * (b - a);
            fc = eval(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gold * (b - a);
            fd = eval(d);
        }
    }
    best.max(fc).max(fd)
}

/// The dyadic radius ladder `r_k = 2^{−k}`, `k = k0..=k1`.
pub fn dyadic_radii<F: Real>(k0: u32, k1: u32) -> Vec<F> {
    (k0..=k1)
        .map(|k| F::of(2.0).powi(-(k as i32)))
        .collect()
}

fn check_ladder<F: Real>(radii: &[F], need: usize, decades: usize) -> Result<(), AsymptoticsError> {
    let err = AsymptoticsError::InsufficientRadii { need, decades };
    if radii.len() < need {
        return Err(err);
    }
    let span = (radii[0] / radii[radii.len() - 1]).log10();
    if span < F::from_usize(decades).unwrap() {
        return Err(err);
    }
    Ok(())
}

/// Estimate the order `α` of `u` at the puncture from a decreasing geometric
/// radius ladder (≥ 6 radii over ≥ 4 decades).
///
/// Returns `(alpha_hat, alpha_stderr)`. The plain estimate is the negated
/// mean slope of `M_u` against `log r` over the three innermost pairs; the
/// critical-corrected estimate uses slopes of `M_u + log log(1/r)` and is
/// preferred when it lands within 0.02 of 1 (the `log log` term of the
/// critical branch decays like `1/log(1/r)` and would otherwise bias the
/// plain slope by ~5% even at `r = 2^{−26}`). The stderr is the spread of
/// the slope quotients, widened by half the plain/corrected discrepancy on
/// the critical path.
pub fn estimate_order<F: Real>(
    u: impl Fn(C<F>) -> F,
    radii: &[F],
) -> Result<(F, F), AsymptoticsError> {
    check_ladder(radii, 6, 4)?;
    let n = radii.len();
    let mvals: Vec<F> = radii.iter().map(|&r| max_on_circle(&u, r, 256)).collect();
    let svals: Vec<F> = radii.iter().map(|&r| r.ln()).collect();
    let slope = |vals: &[F], i: usize| (vals[i + 1] - vals[i]) / (svals[i + 1] - svals[i]);
    let plain_slopes: Vec<F> = (n - 4..n - 1).map(|i| slope(&mvals, i)).collect();
    let plain = -(plain_slopes.iter().copied().sum::<F>() / F::of(3.0));
    let spread = plain_slopes
        .iter()
        .fold(F::neg_infinity(), |m, &x| m.max(x))
        - plain_slopes.iter().fold(F::infinity(), |m, &x| m.min(x));
    let corrected_vals: Vec<F> = mvals
        .iter()
        .zip(radii)
        .map(|(&m, &r)| m + log_recip(r).ln())
        .collect();
    let corr_slopes: Vec<F> = (n - 4..n - 1).map(|i| slope(&corrected_vals, i)).collect();
    let corrected = -(corr_slopes.iter().copied().sum::<F>() / F::of(3.0));
    if (corrected - F::one()).abs() <= F::of(0.02) {
        let shift = (corrected - plain).abs();
        Ok((corrected, spread.max(shift / F::of(2.0))))
    } else {
        Ok((plain, spread.max(F::of(1e-9))))
    }
}

/// The raw ratio `M_u(r)/log(1/r)` at the innermost radius (reported as a
/// cross-check of the slope-based estimator).
pub fn raw_order_ratio<F: Real>(u: impl Fn(C<F>) -> F, radii: &[F]) -> F {
    let r = radii[radii.len() - 1];
    max_on_circle(u, r, 256) / log_recip(r)
}

/// Remainder extraction: `v(z) = u(z) + α̂ log|z|` on the subcritical branch,
/// `w(z) = u(z) + log|z| + log log(1/|z|)` on the critical branch.
pub fn remainder<F: Real>(
    u: impl Fn(C<F>) -> F + Send + Sync + 'static,
    alpha_hat: F,
    branch: Branch,
) -> Result<Arc<dyn Fn(C<F>) -> F + Send + Sync>, AsymptoticsError> {
    if branch == Branch::Critical && (alpha_hat - F::one()).abs() > F::of(0.1) {
        return Err(AsymptoticsError::BranchMismatch {
            branch,
            alpha_hat: alpha_hat.to_f64_lossy(),
        });
    }
    Ok(match branch {
        Branch::Subcritical => Arc::new(move |z: C<F>| u(z) + alpha_hat * z.norm().ln()),
        Branch::Critical => Arc::new(move |z: C<F>| {
            let r = z.norm();
            u(z) + r.ln() + log_recip(r).ln()
        }),
    })
}

/// Solve a small symmetric linear system by Gaussian elimination with
/// partial pivoting (used for the 4×4 normal equations of [`fit_growth`]).
fn solve_dense<F: Real>(mut a: Vec<Vec<F>>, mut b: Vec<F>) -> Option<Vec<F>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| {
            a[i][col]
                .abs()
                .partial_cmp(&a[j][col].abs())
                .unwrap_or(std::cmp::Ordering::Equal)
        })?;
        if a[piv][col].abs() < F::of(1e-300) {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            for k in col..n {
                let v = a[col][k];
                a[row][k] -= f * v;
            }
            let v = b[col];
            b[row] -= f * v;
        }
    }
    let mut x = vec![F::zero(); n];
    for row in (0..n).rev() {
        let mut s = b[row];
        for k in row + 1..n {
            s -= a[row][k] * x[k];
        }
        x[row] = s / a[row][row];
    }
    Some(x)
}

/// Fit `log max_{|z|=r} |g|` against `(log r, log log(1/r), 1, 1/log(1/r))`
/// over a decreasing radius ladder (≥ 8 radii over ≥ 5 decades), returning
/// the `|z|`-exponent `p̂`, the `log(1/|z|)`-exponent `q̂`, and the constant.
///
/// The fit is flagged indeterminate when the (normalized) design matrix is
/// ill-conditioned — `log r` and `log log(1/r)` are nearly collinear over
/// short ladders — or when the fit residual is large.
pub fn fit_growth<F: Real>(
    g: impl Fn(C<F>) -> F,
    radii: &[F],
) -> Result<GrowthFit, AsymptoticsError> {
    fit_growth_masked(g, radii, |_| true)
}

/// [`fit_growth`] with an admissible-angle filter for entries whose formulas
/// have an angular kink.
pub fn fit_growth_masked<F: Real>(
    g: impl Fn(C<F>) -> F,
    radii: &[F],
    angle_ok: impl Fn(F) -> bool,
) -> Result<GrowthFit, AsymptoticsError> {
    check_ladder(radii, 8, 5).map_err(|_| AsymptoticsError::SpanTooSmall)?;
    let n_theta = 64usize;
    let ht = F::TAU() / F::from_usize(n_theta).unwrap();
    let mut rows: Vec<[F; 4]> = Vec::new();
    let mut ys: Vec<F> = Vec::new();
    for &r in radii {
        let mut m = F::zero();
        for j in 0..n_theta {
            let t = ht * F::from_usize(j).unwrap();
            if !angle_ok(t) {
                continue;
            }
            m = m.max(g(C::from_polar(r, t)).abs());
        }
        if m <= F::zero() || !m.is_finite() {
            continue;
        }
        let l = log_recip(r);
        rows.push([r.ln(), l.ln(), F::one(), F::one() / l]);
        ys.push(m.ln());
    }
    if rows.len() < 8 {
        return Err(AsymptoticsError::SpanTooSmall);
    }
    // normal equations
    let mut ata = vec![vec![F::zero(); 4]; 4];
    let mut aty = vec![F::zero(); 4];
    for (row, &y) in rows.iter().zip(&ys) {
        for i in 0..4 {
            for j in 0..4 {
                ata[i][j] += row[i] * row[j];
            }
            aty[i] += row[i] * y;
        }
    }
    // collinearity gate on the centered, scaled regressors (excluding the
    // intercept): determinant of the correlation matrix
    let nf = F::from_usize(rows.len()).unwrap();
    let mut means = [F::zero(); 4];
    for row in &rows {
        for i in 0..4 {
            means[i] += row[i] / nf;
        }
    }
    let idx = [0usize, 1, 3];
    let mut cov = vec![vec![F::zero(); 3]; 3];
    for row in &rows {
        for (a, &ia) in idx.iter().enumerate() {
            for (b, &ib) in idx.iter().enumerate() {
                cov[a][b] += (row[ia] - means[ia]) * (row[ib] - means[ib]) / nf;
            }
        }
    }
    let corr_det = {
        let mut m = cov.clone();
        for a in 0..3 {
            for b in 0..3 {
                m[a][b] = cov[a][b] / (cov[a][a] * cov[b][b]).sqrt();
            }
        }
        // 3x3 determinant
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let coef = solve_dense(ata, aty).ok_or(AsymptoticsError::SpanTooSmall)?;
    let mut rss = F::zero();
    for (row, &y) in rows.iter().zip(&ys) {
        let pred = (0..4).map(|i| row[i] * coef[i]).sum::<F>();
        rss += (pred - y) * (pred - y);
    }
    let rms = (rss / nf).sqrt();
    let indeterminate = corr_det.abs() < F::of(1e-6) || rms > F::of(0.5);
    Ok(GrowthFit {
        p_hat: coef[0].to_f64_lossy(),
        q_hat: coef[1].to_f64_lossy(),
        c_hat: coef[2].to_f64_lossy(),
        residual_rms: rms.to_f64_lossy(),
        indeterminate,
    })
}

/// Power-only growth fit (`log max|g|` against `log r` and a constant) for
/// numerical-derivative ladders: rounding error caps those at ~3 decades,
/// too short to resolve the `log(1/|z|)` power on top of the `|z|` power, so
/// `q_hat` is reported as 0 and only `p_hat` is meaningful.
fn fit_power_only<F: Real>(
    g: impl Fn(C<F>) -> F,
    radii: &[F],
    angle_ok: impl Fn(F) -> bool,
) -> Option<GrowthFit> {
    let n_theta = 64usize;
    let ht = F::TAU() / F::from_usize(n_theta).unwrap();
    let mut xs: Vec<F> = Vec::new();
    let mut ys: Vec<F> = Vec::new();
    for &r in radii {
        let mut m = F::zero();
        for j in 0..n_theta {
            let t = ht * F::from_usize(j).unwrap();
            if !angle_ok(t) {
                continue;
            }
            m = m.max(g(C::from_polar(r, t)).abs());
        }
        if m > F::zero() && m.is_finite() {
            xs.push(r.ln());
            ys.push(m.ln());
        }
    }
    if xs.len() < 5 {
        return None;
    }
    let (slope, intercept, rms) = affine_fit(&xs, &ys);
    Some(GrowthFit {
        p_hat: slope.to_f64_lossy(),
        q_hat: 0.0,
        c_hat: intercept.to_f64_lossy(),
        residual_rms: rms.to_f64_lossy(),
        indeterminate: rms > F::of(0.5),
    })
}

/// Least-squares line `y ≈ a·x + b`; returns `(a, b, rms residual)`.
fn affine_fit<F: Real>(xs: &[F], ys: &[F]) -> (F, F, F) {
    let nf = F::from_usize(xs.len()).unwrap();
    let mx = xs.iter().copied().sum::<F>() / nf;
    let my = ys.iter().copied().sum::<F>() / nf;
    let sxx = xs.iter().map(|&x| (x - mx) * (x - mx)).sum::<F>();
    let sxy = xs
        .iter()
        .zip(ys)
        .map(|(&x, &y)| (x - mx) * (y - my))
        .sum::<F>();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rms = (xs
        .iter()
        .zip(ys)
        .map(|(&x, &y)| {
            let e = y - (intercept + slope * x);
            e * e
        })
        .sum::<F>()
        / nf)
        .sqrt();
    (slope, intercept, rms)
}

/// Polynomial extrapolation of a sequence `y(x)` to `x = 0` (Neville's
/// scheme), used with `x = 1/log(1/r)`.
pub fn extrapolate_to_zero<F: Real>(xs: &[F], ys: &[F]) -> F {
    let n = xs.len();
    let mut t: Vec<F> = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            let num = xs[i] * t[i - 1] - xs[i - j] * t[i];
            t[i] = num / (xs[i] - xs[i - j]);
        }
    }
    t[n - 1]
}

/// Measured geometric limits at the puncture.
#[derive(Debug, Clone, Serialize)]
pub struct GeometricLimits {
    /// `(r, |z|log(1/|z|)·λ, Re zΓ, Re z²S)` per radius.
    pub sequences: Vec<(f64, f64, f64, f64)>,
    pub limit_density: f64,
    pub limit_connection: f64,
    pub limit_schwarzian: f64,
    pub target_density: f64,
    pub target_connection: f64,
    pub target_schwarzian: f64,
    pub pass: bool,
}

/// Verify the geometric-limits theorem: as `z → 0`,
/// `|z|log(1/|z|)·λ(z) → 0` (subcritical) or `1/√(−κ(0))` (critical),
/// `zΓ_λ(z) → −α`, and `z²S_λ(z) → α(2−α)/2`.
///
/// The measured limits extrapolate the sequences in `1/log(1/r)` over the
/// four innermost radii.
pub fn verify_geometric_limits<F: Real>(
    m: &MetricDensity<F>,
    kappa0: F,
    alpha: F,
    radii: &[F],
) -> GeometricLimits {
    assert!(kappa0 < F::zero(), "kappa(0) must be negative");
    let theta = F::of(0.7);
    let mut seq = Vec::new();
    let mut xs = Vec::new();
    let mut xs_a = Vec::new();
    let mut a_s = Vec::new();
    let mut b_s = Vec::new();
    let mut c_s = Vec::new();
    for &r in radii {
        let z = C::from_polar(r, theta);
        let l = log_recip(r);
        let a = r * l * m.lambda(z);
        let b = (z * connection(m, z)).re;
        let c = (z * z * schwarzian(m, z)).re;
        seq.push((
            r.to_f64_lossy(),
            a.to_f64_lossy(),
            b.to_f64_lossy(),
            c.to_f64_lossy(),
        ));
        xs.push(F::one() / l);
        // the subcritical density sequence decays like r^{1−α}·log(1/r), so
        // extrapolate it in that variable instead of 1/log(1/r)
        xs_a.push(if alpha == F::one() {
            F::one() / l
        } else {
            r.powf(F::one() - alpha) * l
        });
        a_s.push(a);
        b_s.push(b);
        c_s.push(c);
    }
    let k = xs.len().saturating_sub(4);
    let lim_a = extrapolate_to_zero(&xs_a[k..], &a_s[k..]);
    let lim_b = extrapolate_to_zero(&xs[k..], &b_s[k..]);
    let lim_c = extrapolate_to_zero(&xs[k..], &c_s[k..]);
    let target_a = if alpha == F::one() {
        F::one() / (-kappa0).sqrt()
    } else {
        F::zero()
    };
    let target_b = -alpha;
    let target_c = alpha * (F::of(2.0) - alpha) / F::of(2.0);
    let tol = F::of(1e-2);
    let pass = (lim_a - target_a).abs() <= tol
        && (lim_b - target_b).abs() <= tol
        && (lim_c - target_c).abs() <= tol;
    GeometricLimits {
        sequences: seq,
        limit_density: lim_a.to_f64_lossy(),
        limit_connection: lim_b.to_f64_lossy(),
        limit_schwarzian: lim_c.to_f64_lossy(),
        target_density: target_a.to_f64_lossy(),
        target_connection: target_b.to_f64_lossy(),
        target_schwarzian: target_c.to_f64_lossy(),
        pass,
    }
}

/// Measured higher-order Yau–Ahlfors–Schwarz ratios.
#[derive(Debug, Clone, Serialize)]
pub struct YauRatios {
    /// `(r, λ/λ_Ω, Re Γ/Γ_Ω, Re S/S_Ω)` per radius.
    pub sequences: Vec<(f64, f64, f64, f64)>,
    pub limit_density: f64,
    pub limit_connection: f64,
    pub limit_schwarzian: f64,
    pub precondition_ok: bool,
    pub pass: bool,
}

/// Verify the higher-order Yau–Ahlfors–Schwarz theorem against the
/// hyperbolic metric `λ_Ω` of the punctured disk (`κ ≡ −4`):
/// `λ/λ_Ω → 1`, `Γ_λ/Γ_{λ_Ω} → 1`, `S_λ/S_{λ_Ω} → 1`.
///
/// Precondition: the metric is locally complete at 0 (checked with
/// [`crate::metrics::completeness_probe`]); a bounded probe yields a
/// precondition-failure verdict, not a pass/fail.
pub fn verify_yau_ratios<F: Real>(m: &MetricDensity<F>, radii: &[F]) -> YauRatios {
    // completeness probe down 8 decades from 0.5
    let probe_radii: Vec<F> = (1..=8).map(|k| F::of(0.5) * F::of(10.0).powi(-k)).collect();
    let lens =
        crate::metrics::completeness_probe(m, C::from_polar(F::of(0.5), F::zero()), &probe_radii);
    let tail_growth = lens[lens.len() - 1] - lens[lens.len() / 2];
    let precondition_ok = tail_growth > F::of(0.05);

    let theta = F::of(0.7);
    let half = F::of(0.5);
    let mut seq = Vec::new();
    let mut xs = Vec::new();
    let mut a_s = Vec::new();
    let mut b_s = Vec::new();
    let mut c_s = Vec::new();
    for &r in radii {
        let z = C::from_polar(r, theta);
        let l = log_recip(r);
        // λ_Ω = 1/(2|z|log(1/|z|)); Γ_Ω = −(1/z)(1−1/L); S_Ω = 1/(2z²)
        let lam_om = F::one() / (F::of(2.0) * r * l);
        let gam_om = -(C::new(F::one(), F::zero()) / z) * (F::one() - F::one() / l);
        let s_om = C::new(half, F::zero()) / (z * z);
        let ra = m.lambda(z) / lam_om;
        let rb = (connection(m, z) / gam_om).re;
        let rc = (schwarzian(m, z) / s_om).re;
        seq.push((
            r.to_f64_lossy(),
            ra.to_f64_lossy(),
            rb.to_f64_lossy(),
            rc.to_f64_lossy(),
        ));
        xs.push(F::one() / l);
        a_s.push(ra);
        b_s.push(rb);
        c_s.push(rc);
    }
    let k = xs.len().saturating_sub(4);
    let lim_a = extrapolate_to_zero(&xs[k..], &a_s[k..]);
    let lim_b = extrapolate_to_zero(&xs[k..], &b_s[k..]);
    let lim_c = extrapolate_to_zero(&xs[k..], &c_s[k..]);
    let tol = F::of(1e-2);
    let pass = precondition_ok
        && (lim_a - F::one()).abs() <= tol
        && (lim_b - F::one()).abs() <= tol
        && (lim_c - F::one()).abs() <= tol;
    YauRatios {
        sequences: seq,
        limit_density: lim_a.to_f64_lossy(),
        limit_connection: lim_b.to_f64_lossy(),
        limit_schwarzian: lim_c.to_f64_lossy(),
        precondition_ok,
        pass,
    }
}

/// Profile of the curvature–remainder bound
/// `B(r) = max_{|z|=r} |−κ(z)e^{2w(z)} − 1| · log(1/r)`.
#[derive(Debug, Clone, Serialize)]
pub struct WachstumProfile {
    pub profile: Vec<(f64, f64)>,
    pub bounded: bool,
    pub extrapolated_limit: f64,
    pub fit_residual: f64,
}

/// Check the curvature–remainder bound on the critical branch:
/// `|−κe^{2w} − 1| ≤ C/log(1/|z|)`, i.e. `B(r)` stays bounded as `r → 0`.
///
/// Boundedness is adjudicated by an affine fit `B ≈ B_∞ + c/log(1/r)` over
/// the innermost radii: a small fit residual means `B` flattens to the
/// finite limit `B_∞`; an unbounded profile (e.g. `B ~ log(1/r)`) leaves a
/// large residual.
pub fn wachstum_check<F: Real>(
    u: impl Fn(C<F>) -> F,
    kappa: impl Fn(C<F>) -> F,
    radii: &[F],
) -> WachstumProfile {
    let n_theta = 64usize;
    let ht = F::TAU() / F::from_usize(n_theta).unwrap();
    let mut profile = Vec::new();
    let mut xs = Vec::new();
    let mut bs = Vec::new();
    for &r in radii {
        let l = log_recip(r);
        let mut m = F::zero();
        for j in 0..n_theta {
            let z = C::from_polar(r, ht * F::from_usize(j).unwrap());
            let w = u(z) + r.ln() + l.ln();
            let val = (-kappa(z) * (F::of(2.0) * w).exp() - F::one()).abs();
            m = m.max(val);
        }
        let b = m * l;
        profile.push((r.to_f64_lossy(), b.to_f64_lossy()));
        xs.push(F::one() / l);
        bs.push(b);
    }
    // affine fit on the innermost 6 points
    let k = xs.len().saturating_sub(6);
    let (_slope, b_inf, rms) = affine_fit(&xs[k..], &bs[k..]);
    let bounded = rms < F::of(0.05) && b_inf.is_finite();
    WachstumProfile {
        profile,
        bounded,
        extrapolated_limit: b_inf.to_f64_lossy(),
        fit_residual: rms.to_f64_lossy(),
    }
}

/// Continuity report for the critical remainder.
#[derive(Debug, Clone, Serialize)]
pub struct ContinuityReport {
    /// `(r, circle oscillation of w, circle mean of w)` per radius.
    pub profile: Vec<(f64, f64, f64)>,
    pub w_limit: f64,
    pub target: f64,
    pub oscillation_decays: bool,
    pub pass: bool,
}

/// Check continuity of the critical remainder at the puncture:
/// `w(0) = −log √(−κ(0))`. Reports circle oscillation (max − min of `w`)
/// and the extrapolated drift of the circle mean toward the target.
pub fn critical_continuity_check<F: Real>(
    u: impl Fn(C<F>) -> F,
    kappa: impl Fn(C<F>) -> F,
    radii: &[F],
    tol: F,
) -> ContinuityReport {
    let n_theta = 64usize;
    let ht = F::TAU() / F::from_usize(n_theta).unwrap();
    let mut profile = Vec::new();
    let mut xs = Vec::new();
    let mut means = Vec::new();
    let mut oscs = Vec::new();
    for &r in radii {
        let l = log_recip(r);
        let mut lo = F::infinity();
        let mut hi = F::neg_infinity();
        let mut mean = F::zero();
        for j in 0..n_theta {
            let z = C::from_polar(r, ht * F::from_usize(j).unwrap());
            let w = u(z) + r.ln() + l.ln();
            lo = lo.min(w);
            hi = hi.max(w);
            mean += w / F::from_usize(n_theta).unwrap();
        }
        profile.push((
            r.to_f64_lossy(),
            (hi - lo).to_f64_lossy(),
            mean.to_f64_lossy(),
        ));
        xs.push(F::one() / l);
        means.push(mean);
        oscs.push(hi - lo);
    }
    let kappa0 = kappa(C::from_polar(radii[radii.len() - 1], F::of(0.3)));
    let target = -(-kappa0).sqrt().ln();
    // affine extrapolation of the circle mean in 1/L over the innermost 4
    // radii (a line is the right model for every converging `w` in scope —
    // the correction is `O(1/L)` — and, unlike higher-order extrapolation,
    // it does not amplify the drift of a non-converging mean unpredictably)
    let k = xs.len().saturating_sub(4);
    let (_slope, w_limit, _rms) = affine_fit(&xs[k..], &means[k..]);
    // oscillation must not grow over the inner half of the ladder (log
    // scale): compare each value against the value three positions earlier
    let mut osc_decays = true;
    let s_mid = (radii[0].ln() + radii[radii.len() - 1].ln()) / F::of(2.0);
    for (i, &r) in radii.iter().enumerate() {
        if r.ln() <= s_mid && i >= 3 && oscs[i] > oscs[i - 3] + F::of(1e-9) {
            osc_decays = false;
        }
    }
    let innermost_osc = oscs[oscs.len() - 1];
    let pass = osc_decays && innermost_osc < F::of(1e-2) && (w_limit - target).abs() <= tol;
    ContinuityReport {
        profile,
        w_limit: w_limit.to_f64_lossy(),
        target: target.to_f64_lossy(),
        oscillation_decays: osc_decays,
        pass,
    }
}

/// Expected rate row of the main theorem for a declared order.
fn expected_rates<F: Real>(alpha: F) -> ((Option<f64>, Option<f64>), (Option<f64>, Option<f64>)) {
    let a = alpha.to_f64_lossy();
    let first = if a == 1.0 {
        (Some(-1.0), Some(-2.0))
    } else if a > 0.5 {
        (Some(1.0 - 2.0 * a), None)
    } else if a == 0.5 {
        // O(1): bounded, i.e. |z|-exponent 0 (the log power stays free —
        // the sharpness examples realize log growth at exponent 0)
        (Some(0.0), None)
    } else {
        // continuous (α < 1/2): no negative |z|-power
        (None, None)
    };
    let second = if a == 1.0 {
        (Some(-2.0), Some(-2.0))
    } else if a > 0.0 {
        (Some(-2.0 * a), None)
    } else {
        (None, None)
    };
    (first, second)
}

/// Run the full main-theorem verification on a catalog entry: order
/// estimation, remainder extraction, derivative growth fits, and verdicts
/// against the theorem's rate table (tolerance ±0.05 on exponents).
///
/// Remainders use the entry's declared `α` (the fitted `α̂` is separately
/// checked against it within 1e−2; using `α̂` in the remainder would leak a
/// spurious `(α−α̂)log|z|` term into the derivative fits). Derivatives use
/// the attached closed forms when present; otherwise numerical Wirtinger
/// stencils on a rounding-safe shortened ladder, with verdicts downgraded
/// to low-confidence for second derivatives.
pub fn verify_main_theorem<F: Real + Serialize>(
    sol: &ClosedFormSolution<F>,
) -> Result<SingularityReport<F>, AsymptoticsError> {
    let radii: Vec<F> = dyadic_radii(8, 26);
    let u = sol.u_fn();
    let (alpha_hat, alpha_stderr) = estimate_order(|z| u(z), &radii)?;
    let alpha = sol.alpha();
    let branch = sol.branch();
    let rem = remainder({ let u = sol.u_fn(); move |z| u(z) }, alpha, branch)?;

    let mut remainder_samples = Vec::new();
    for &r in &radii {
        remainder_samples.push((
            r.to_f64_lossy(),
            max_on_circle(|z| rem(z), r, 64).to_f64_lossy(),
        ));
    }

    let angle_ok = {
        let sol = sol.clone();
        move |t: F| sol.angle_admissible(t)
    };

    // first derivative: full 4-regressor fit with closed forms; power-only
    // fit on a rounding-safe shortened ladder with numeric stencils
    let d1_fit = match sol.d1_fn() {
        Some(d1) => fit_growth_masked(move |z| d1(z).norm(), &radii, &angle_ok).ok(),
        None => {
            let rem = rem.clone();
            let short: Vec<F> = dyadic_radii(8, 18);
            fit_power_only(
                move |z| {
                    let h = z.norm() / F::of(16.0);
                    crate::grid::dz(|w| rem(w), z, h)
                        .map(|c| c.norm())
                        .unwrap_or(F::nan())
                },
                &short,
                &angle_ok,
            )
        }
    };
    let d1_numeric = sol.d1_fn().is_none();

    // second derivative
    let d2_fit = match sol.d2_fn() {
        Some(d2) => fit_growth_masked(move |z| d2(z).norm(), &radii, {
            let sol = sol.clone();
            move |t: F| sol.angle_admissible(t)
        })
        .ok(),
        None => {
            let rem = rem.clone();
            let short: Vec<F> = dyadic_radii(8, 16);
            fit_power_only(
                move |z| {
                    let h = z.norm() / F::of(16.0);
                    crate::grid::dzz(|w| rem(w), z, h)
                        .map(|c| c.norm())
                        .unwrap_or(F::nan())
                },
                &short,
                {
                    let sol = sol.clone();
                    move |t: F| sol.angle_admissible(t)
                },
            )
        }
    };
    let d2_numeric = sol.d2_fn().is_none();

    let ((e1p, e1q), (e2p, e2q)) = expected_rates(alpha);
    let tol = 0.05;
    let mut rate_verdicts = Vec::new();

    let judge = |fit: &Option<GrowthFit>,
                 ep: Option<f64>,
                 eq: Option<f64>,
                 continuous_claim: bool,
                 numeric: bool,
                 claim: String| {
        let (verdict, p, q) = match fit {
            None => (Verdict::Indeterminate, f64::NAN, f64::NAN),
            Some(f) if f.indeterminate => (Verdict::Indeterminate, f.p_hat, f.q_hat),
            Some(f) => {
                let ok = if continuous_claim {
                    // "continuous at 0" proxy: no negative |z|-power
                    f.p_hat >= -tol
                } else {
                    let p_ok = ep.map_or(true, |e| (f.p_hat - e).abs() <= tol);
                    let q_ok = eq.map_or(true, |e| (f.q_hat - e).abs() <= tol);
                    p_ok && q_ok
                };
                let v = match (ok, numeric) {
                    (true, false) => Verdict::Pass,
                    (true, true) => Verdict::Pass,
                    (false, true) => Verdict::LowConfidence,
                    (false, false) => Verdict::Fail,
                };
                (v, f.p_hat, f.q_hat)
            }
        };
        RateVerdict {
            claim,
            verdict,
            p_hat: p,
            q_hat: q,
            expected_p: ep,
            expected_q: eq,
        }
    };

    let a = alpha.to_f64_lossy();
    let first_claim = if a == 1.0 {
        "w_z = O(|z|^{-1} (log(1/|z|))^{-2})".to_string()
    } else if a > 0.5 {
        format!("v_z = O(|z|^{{1-2α}}) with 1-2α = {}", 1.0 - 2.0 * a)
    } else if a == 0.5 {
        "v_z = O(1)".to_string()
    } else {
        "v_z continuous at 0".to_string()
    };
    let first_continuous = a < 0.5;
    rate_verdicts.push(judge(&d1_fit, e1p, e1q, first_continuous, d1_numeric, first_claim));

    let second_claim = if a == 1.0 {
        "w_zz = O(|z|^{-2} (log(1/|z|))^{-2})".to_string()
    } else if a > 0.0 {
        format!("v_zz = O(|z|^{{-2α}}) with -2α = {}", -2.0 * a)
    } else {
        "v_zz continuous at 0".to_string()
    };
    let second_continuous = a <= 0.0;
    // α < 0 rates are only observed, never adjudicated (the theorem gives
    // continuity, and the sharpness examples show the naive power rate
    // fails there)
    rate_verdicts.push(judge(
        &d2_fit,
        e2p,
        e2q,
        second_continuous,
        d2_numeric,
        second_claim,
    ));

    // order agreement as its own verdict
    rate_verdicts.push(RateVerdict {
        claim: "declared α matches estimated order within 1e-2".into(),
        verdict: if (alpha_hat - alpha).abs().to_f64_lossy() <= 1e-2 {
            Verdict::Pass
        } else {
            Verdict::Fail
        },
        p_hat: alpha_hat.to_f64_lossy(),
        q_hat: f64::NAN,
        expected_p: Some(alpha.to_f64_lossy()),
        expected_q: None,
    });

    // report branch per the estimator's own invariant
    let est_branch = if (alpha_hat - F::one()).abs() <= F::of(3.0) * alpha_stderr {
        Branch::Critical
    } else {
        Branch::Subcritical
    };

    Ok(SingularityReport {
        alpha_hat,
        alpha_stderr,
        alpha_declared: Some(alpha),
        branch: est_branch,
        remainder_samples,
        first_derivative_fit: d1_fit,
        second_derivative_fit: d2_fit,
        rate_verdicts,
        limit_values: None,
    })
}
