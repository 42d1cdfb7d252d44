//! Lopatinskiĭ determinant of a Lax 1-shock in its three equivalent forms.
//!
//! Frequencies are `(λ, ξ̃)` with `Re λ ≥ 0`, `ξ̃ = (ξ₂, …, ξ_d)`. The map
//! `γ = (κ₂⁺ − s²)^{−1/2} (λ√κ₂⁺ + i s h''η/√κ₂⁺)` sends `Re λ > 0` onto
//! `Re γ > 0`, where the determinant takes the compact form `Δ̃(γ, ξ̃)`.
//!
//! All square roots `√(γ² + ζ)` are the principal branch, which is analytic
//! on `Re γ > 0`; on `Re γ = 0` the continuous extension from the right is
//! used, i.e. `√(ζ − t²) = i sgn(t) √(t² − ζ)` for `|t| > √ζ`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{sqrt_principal, C64};
use crate::shock::{freq_coeffs, geometry, rho, tau, FreqCoeffs, ShockError, ShockFront};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LopatinskiiError {
    #[error(transparent)]
    Shock(#[from] ShockError),
    #[error("frequency (lambda, xi) must be nonzero")]
    ZeroFrequency,
    #[error("Re lambda = {0:e} is negative")]
    LeftHalfPlane(f64),
    #[error("rho = {0:e} is not negative; the factored form does not apply")]
    RhoNotNegative(f64),
    #[error("contour passes through a zero of the function (|H| = {0:e})")]
    ContourThroughZero(f64),
    #[error("accumulated phase {0} is not a multiple of 2 pi")]
    NonIntegerWinding(f64),
    #[error("contour radius must be positive and finite")]
    BadRadius,
}

/// A frequency `(λ, ξ̃)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FreqPoint {
    pub lambda: C64,
    pub xi_t: Vec<f64>,
}

impl FreqPoint {
    pub fn new(lambda: C64, xi_t: Vec<f64>) -> Self {
        Self { lambda, xi_t }
    }
}

const I: C64 = C64::new(0.0, 1.0);

/// `√(γ² + ζ)` on the closed right half plane.
pub fn sqrt_branch(gamma: C64, zeta: f64) -> C64 {
    let z = gamma * gamma + zeta;
    if gamma.re == 0.0 && z.re < 0.0 {
        let sgn = if gamma.im < 0.0 { -1.0 } else { 1.0 };
        return C64::new(0.0, sgn * (-z.re).sqrt());
    }
    sqrt_principal(z)
}

fn check_lambda(lambda: C64) -> Result<(), LopatinskiiError> {
    if lambda.re < 0.0 {
        return Err(LopatinskiiError::LeftHalfPlane(lambda.re));
    }
    Ok(())
}

fn coeffs(sf: &ShockFront, xi_t: &[f64]) -> Result<FreqCoeffs, LopatinskiiError> {
    Ok(freq_coeffs(sf, xi_t)?)
}

/// `Ψ(λ, ξ̃) = (γ, ξ̃)`.
pub fn freq_map(sf: &ShockFront, fp: &FreqPoint) -> Result<C64, LopatinskiiError> {
    let fc = coeffs(sf, &fp.xi_t)?;
    Ok(gamma_of(sf, &fc, fp.lambda))
}

fn gamma_of(sf: &ShockFront, fc: &FreqCoeffs, lambda: C64) -> C64 {
    let k2 = sf.kappa2_plus();
    let s = sf.s();
    let a = (k2 - s * s).sqrt();
    (lambda * k2.sqrt() + I * (s * sf.h2_plus() * fc.eta / k2.sqrt())) / a
}

/// Inverse of [`freq_map`].
pub fn freq_unmap(sf: &ShockFront, gamma: C64, xi_t: &[f64]) -> Result<FreqPoint, LopatinskiiError> {
    let fc = coeffs(sf, xi_t)?;
    let k2 = sf.kappa2_plus();
    let s = sf.s();
    let a = (k2 - s * s).sqrt();
    let lambda = (gamma * a - I * (s * sf.h2_plus() * fc.eta / k2.sqrt())) / k2.sqrt();
    Ok(FreqPoint::new(lambda, xi_t.to_vec()))
}

/// The root `β` with `Re β < 0` of
/// `(κ₂⁺ − s²)β² − 2(λs + i h''η)β − (λ² + ω) = 0`.
pub fn stable_beta(sf: &ShockFront, fp: &FreqPoint) -> Result<C64, LopatinskiiError> {
    check_lambda(fp.lambda)?;
    let fc = coeffs(sf, &fp.xi_t)?;
    if fp.lambda == C64::new(0.0, 0.0) && fc.xi2 == 0.0 {
        return Err(LopatinskiiError::ZeroFrequency);
    }
    Ok(beta_from(sf, &fc, fp.lambda))
}

fn beta_from(sf: &ShockFront, fc: &FreqCoeffs, lambda: C64) -> C64 {
    let k2 = sf.kappa2_plus();
    let s = sf.s();
    let c = k2 - s * s;
    let gamma = gamma_of(sf, fc, lambda);
    let xi_sqrt = c.sqrt() * sqrt_branch(gamma, fc.zeta);
    (lambda * s + I * (sf.h2_plus() * fc.eta) - xi_sqrt) / c
}

/// `(i/α) Δ̂(λ, ξ̃)` in expanded form.
pub fn delta_v1(sf: &ShockFront, fp: &FreqPoint) -> Result<C64, LopatinskiiError> {
    let beta = stable_beta(sf, fp)?;
    let g = geometry(sf);
    let s2 = sf.s() * sf.s();
    let c = sf.kappa2_plus() - s2;
    let fc = coeffs(sf, &fp.xi_t)?;
    let mut quad = 0.0;
    let d = sf.dim();
    for i in 1..d {
        for j in 1..d {
            let w = c * g.theta[(i, j)]
                + sf.alpha() * (s2 - sf.mu()) * g.big_theta[(i, j)] / sf.j_plus();
            quad += fp.xi_t[i - 1] * fp.xi_t[j - 1] * w;
        }
    }
    Ok(beta * beta * (c * sf.theta11()) - 2.0 * I * beta * (c * fc.eta) - quad)
}

/// `(i/α) Δ̂` as a completed square, `(κ₂⁺ − s²)θ₁₁(β − iη/θ₁₁)² + ρP`.
pub fn delta_v1_completed(sf: &ShockFront, fp: &FreqPoint) -> Result<C64, LopatinskiiError> {
    let beta = stable_beta(sf, fp)?;
    let fc = coeffs(sf, &fp.xi_t)?;
    let t11 = sf.theta11();
    let c = sf.kappa2_plus() - sf.s() * sf.s();
    let w = beta - I * (fc.eta / t11);
    Ok(w * w * (c * t11) + rho(sf) * fc.p)
}

/// The determinant itself, `Δ̂ = −iα · delta_v1`.
pub fn delta_hat(sf: &ShockFront, fp: &FreqPoint) -> Result<C64, LopatinskiiError> {
    Ok(-I * sf.alpha() * delta_v1(sf, fp)?)
}

/// `Δ̃(γ, ξ̃) = (γ − (√κ₂⁺/s)√(γ² + ζ) + iτη)² + ρκ₂⁺P/(s²θ₁₁)`.
pub fn delta_v2(sf: &ShockFront, gamma: C64, xi_t: &[f64]) -> Result<C64, LopatinskiiError> {
    if gamma.re < 0.0 {
        return Err(LopatinskiiError::LeftHalfPlane(gamma.re));
    }
    let fc = coeffs(sf, xi_t)?;
    Ok(delta_v2_with(sf, &fc, rho(sf), tau(sf), gamma))
}

fn delta_v2_with(sf: &ShockFront, fc: &FreqCoeffs, rho: f64, tau: f64, gamma: C64) -> C64 {
    let k2 = sf.kappa2_plus();
    let s = sf.s();
    let w = gamma - sqrt_branch(gamma, fc.zeta) * (k2.sqrt() / s) + I * (tau * fc.eta);
    w * w + rho * k2 * fc.p / (s * s * sf.theta11())
}

/// `(s²θ₁₁/κ₂⁺)`, the factor with `(i/α)Δ̂ = (s²θ₁₁/κ₂⁺) Δ̃ ∘ Ψ`.
pub fn v2_prefactor(sf: &ShockFront) -> f64 {
    sf.s() * sf.s() * sf.theta11() / sf.kappa2_plus()
}

/// Factored form for `ρ < 0`:
/// `(κ₂⁺ − s²)θ₁₁(β − δ − iη/θ₁₁)(β + δ − iη/θ₁₁)`, with
/// `δ = √(−ρP/(θ₁₁(κ₂⁺ − s²)))`.
pub fn delta_v3(sf: &ShockFront, fp: &FreqPoint) -> Result<C64, LopatinskiiError> {
    let r = rho(sf);
    if !(r < 0.0) {
        return Err(LopatinskiiError::RhoNotNegative(r));
    }
    let beta = stable_beta(sf, fp)?;
    let fc = coeffs(sf, &fp.xi_t)?;
    let t11 = sf.theta11();
    let c = sf.kappa2_plus() - sf.s() * sf.s();
    let delta = (-r * fc.p / (t11 * c)).sqrt();
    let shift = I * (fc.eta / t11);
    Ok((beta - delta - shift) * (beta + delta - shift) * (c * t11))
}

/// `Δ₁(γ, ξ̃) = γ − (√κ₂⁺/s)√(γ² + ζ) + iτη + (√κ₂⁺/s)√(−ρP/θ₁₁)`, the
/// only factor of the determinant that can vanish when `ρ < 0`.
pub fn delta_one(sf: &ShockFront, gamma: C64, xi_t: &[f64]) -> Result<C64, LopatinskiiError> {
    let r = rho(sf);
    if !(r < 0.0) {
        return Err(LopatinskiiError::RhoNotNegative(r));
    }
    let fc = coeffs(sf, xi_t)?;
    Ok(delta_one_with(sf, &fc, r, tau(sf), gamma))
}

fn delta_one_with(sf: &ShockFront, fc: &FreqCoeffs, rho: f64, tau: f64, gamma: C64) -> C64 {
    let c = sf.kappa2_plus().sqrt() / sf.s();
    gamma - sqrt_branch(gamma, fc.zeta) * c
        + I * (tau * fc.eta)
        + c * (-rho * fc.p / sf.theta11()).sqrt()
}

/// Zeros of `Y(t) = Δ̃(it, ξ̃)` on the imaginary axis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImagScan {
    /// `(√ζ + τη)² − ρκ₂⁺P/(s²θ₁₁)`; nonpositive exactly when a zero
    /// exists with `t ≥ √ζ`.
    pub boundary_value: f64,
    /// Same quantity for `−ξ̃`, governing zeros with `t ≤ −√ζ`.
    pub boundary_value_reflected: f64,
    pub sqrt_zeta: f64,
    /// Roots `t*` in ascending order.
    pub roots: Vec<f64>,
}

/// Stopping tolerance on `|Y|` in the bisection.
pub const IMAG_SCAN_TOL: f64 = 1e-10;

/// Locate the zeros of `Δ̃` on `Re γ = 0` with `|t| ≥ √ζ`.
///
/// For `|t| < √ζ` and `ρ ≥ 0` there are none; the routine does not search
/// that interval.
pub fn imag_scan(sf: &ShockFront, xi_t: &[f64]) -> Result<ImagScan, LopatinskiiError> {
    let fc = coeffs(sf, xi_t)?;
    if !(fc.zeta > 0.0) {
        return Err(LopatinskiiError::ZeroFrequency);
    }
    let r = rho(sf);
    let ta = tau(sf);
    let k2 = sf.kappa2_plus();
    let s = sf.s();
    let sz = fc.zeta.sqrt();
    let cst = r * k2 * fc.p / (s * s * sf.theta11());
    let c = -k2.sqrt() / s;

    let mut roots = Vec::new();
    for (sign, eta) in [(1.0, fc.eta), (-1.0, -fc.eta)] {
        // Y(t) = cst − f(t)², f(t) = t + c√(t² − ζ) + τη increasing
        let f = |t: f64| t + c * (t * t - fc.zeta).max(0.0).sqrt() + ta * eta;
        let y = |t: f64| cst - f(t).powi(2);
        if cst < 0.0 {
            continue;
        }
        let target = [cst.sqrt(), -cst.sqrt()];
        for (k, &tgt) in target.iter().enumerate() {
            if k == 1 && tgt == target[0] {
                continue;
            }
            if f(sz) > tgt {
                continue;
            }
            let mut lo = sz;
            let mut hi = 4.0 * sz;
            while f(hi) < tgt {
                hi *= 2.0;
            }
            let mut t = lo;
            for _ in 0..400 {
                t = 0.5 * (lo + hi);
                if y(t).abs() <= IMAG_SCAN_TOL * cst.max(1.0) * 1e-2 || hi - lo <= 4.0 * f64::EPSILON * hi {
                    break;
                }
                if f(t) < tgt {
                    lo = t;
                } else {
                    hi = t;
                }
            }
            roots.push(sign * t);
        }
    }
    roots.sort_by(f64::total_cmp);
    roots.dedup_by(|a, b| (*a - *b).abs() <= 1e-14 * a.abs().max(1.0));
    Ok(ImagScan {
        boundary_value: (sz + ta * fc.eta).powi(2) - cst,
        boundary_value_reflected: (sz - ta * fc.eta).powi(2) - cst,
        sqrt_zeta: sz,
        roots,
    })
}

/// D-shaped contour: the right half of the circle of radius `R` centred at
/// `center` on the real axis, closed by the vertical segment `Re γ = center`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DContour {
    pub radius: f64,
    pub center: f64,
    pub nodes: usize,
}

impl DContour {
    pub fn new(radius: f64) -> Self {
        Self {
            radius,
            center: 0.0,
            nodes: 4096,
        }
    }

    pub fn shifted(radius: f64, center: f64) -> Self {
        Self {
            radius,
            center,
            nodes: 4096,
        }
    }

    /// Point at parameter `p ∈ [0, 1)`; the first half is the arc
    /// (counter-clockwise from `−iR`), the second the segment from `iR`
    /// down to `−iR`.
    fn point(&self, p: f64) -> C64 {
        let r = self.radius;
        if p < 0.5 {
            let th = -std::f64::consts::FRAC_PI_2 + std::f64::consts::PI * (2.0 * p);
            C64::new(self.center + r * th.cos(), r * th.sin())
        } else {
            C64::new(self.center, r * (1.0 - 2.0 * (2.0 * p - 1.0)))
        }
    }
}

/// Maximum phase change accepted between neighbouring nodes.
const MAX_PHASE_STEP: f64 = std::f64::consts::PI / 8.0;

/// Winding number of `h` around the origin along `contour`.
pub fn winding_number(
    h: impl Fn(C64) -> C64,
    contour: &DContour,
) -> Result<i64, LopatinskiiError> {
    if !(contour.radius > 0.0 && contour.radius.is_finite()) {
        return Err(LopatinskiiError::BadRadius);
    }
    let n = contour.nodes.max(16);
    let vals: Vec<C64> = (0..=n).map(|k| h(contour.point(k as f64 / n as f64 % 1.0))).collect();
    let scale = vals.iter().fold(0.0f64, |m, v| m.max(v.norm())).max(f64::MIN_POSITIVE);
    let tiny = 1e-12 * scale;

    let mut total = 0.0;
    for k in 0..n {
        let (pa, pb) = (k as f64 / n as f64, (k + 1) as f64 / n as f64);
        total += phase_increment(&h, contour, pa, pb, vals[k], vals[k + 1], tiny, 0)?;
    }
    let w = total / std::f64::consts::TAU;
    let rounded = w.round();
    if (w - rounded).abs() > 0.25 {
        return Err(LopatinskiiError::NonIntegerWinding(total));
    }
    Ok(rounded as i64)
}

#[allow(clippy::too_many_arguments)]
fn phase_increment(
    h: &impl Fn(C64) -> C64,
    contour: &DContour,
    pa: f64,
    pb: f64,
    ha: C64,
    hb: C64,
    tiny: f64,
    depth: u32,
) -> Result<f64, LopatinskiiError> {
    for v in [ha, hb] {
        if v.norm() < tiny {
            return Err(LopatinskiiError::ContourThroughZero(v.norm()));
        }
    }
    let step = (hb / ha).arg();
    if step.abs() <= MAX_PHASE_STEP || depth >= 40 {
        return Ok(step);
    }
    let pm = 0.5 * (pa + pb);
    let hm = h(contour.point(pm % 1.0));
    Ok(phase_increment(h, contour, pa, pm, ha, hm, tiny, depth + 1)?
        + phase_increment(h, contour, pm, pb, hm, hb, tiny, depth + 1)?)
}

/// Winding number of `Δ₁(·, ξ̃)` along the D-contour of radius `R`
/// (requires `ρ < 0`). Zero means `Δ₁` has no zeros in the right half disc.
pub fn winding(sf: &ShockFront, xi_t: &[f64], radius: f64) -> Result<i64, LopatinskiiError> {
    let r = rho(sf);
    if !(r < 0.0) {
        return Err(LopatinskiiError::RhoNotNegative(r));
    }
    let fc = coeffs(sf, xi_t)?;
    let ta = tau(sf);
    winding_number(|g| delta_one_with(sf, &fc, r, ta, g), &DContour::new(radius))
}

/// Winding number of `Δ̃(·, ξ̃)` along a contour shifted to `Re γ = center`.
pub fn winding_v2(
    sf: &ShockFront,
    xi_t: &[f64],
    contour: &DContour,
) -> Result<i64, LopatinskiiError> {
    let fc = coeffs(sf, xi_t)?;
    let (r, ta) = (rho(sf), tau(sf));
    winding_number(|g| delta_v2_with(sf, &fc, r, ta, g), contour)
}

/// Which quantity the grid axes represent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GridVar {
    Gamma,
    Lambda,
}

/// Rectangular evaluation grid for `Δ̃`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub variable: GridVar,
    pub re_range: (f64, f64),
    pub im_range: (f64, f64),
    pub n_re: usize,
    pub n_im: usize,
    pub xi_t: Vec<f64>,
    /// Rescale `ξ̃` (keeping its direction) so that `(γ, ξ̃)` lies on the
    /// normalised set `|√((κ₂⁺ − s²)/κ₂⁺) γ − i s h''η/κ₂⁺|² + |ξ̃|² = 1`.
    pub restrict_gamma_tilde: bool,
}

/// One grid node; `value` is `None` where the node is outside the domain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridNode {
    pub re: f64,
    pub im: f64,
    pub value: Option<C64>,
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n <= 1 {
        return vec![a];
    }
    (0..n).map(|k| a + (b - a) * k as f64 / (n - 1) as f64).collect()
}

/// Magnitude `r` of `ξ̃ = r ξ̂` placing `(γ, ξ̃)` on the normalised set.
pub fn restricted_xi_scale(sf: &ShockFront, gamma: C64, xi_dir: &[f64]) -> Option<f64> {
    let fc = freq_coeffs(sf, xi_dir).ok()?;
    let n = fc.xi2.sqrt();
    let k2 = sf.kappa2_plus();
    let s = sf.s();
    let z = gamma * ((k2 - s * s) / k2).sqrt();
    if n == 0.0 {
        return ((z.norm_sqr() - 1.0).abs() <= 1e-12).then_some(0.0);
    }
    // |z − i b r|² + r² = 1 with η = r η̂ along the unit direction
    let b = s * sf.h2_plus() * (fc.eta / n) / k2;
    let qa = 1.0 + b * b;
    let qb = -2.0 * b * z.im;
    let qc = z.norm_sqr() - 1.0;
    let disc = qb * qb - 4.0 * qa * qc;
    if disc < 0.0 {
        return None;
    }
    let r = (-qb + disc.sqrt()) / (2.0 * qa);
    (r >= 0.0).then_some(r / n)
}

/// Evaluate `Δ̃` over the grid, row-major in `(re, im)` with `re` slowest.
pub fn evaluate_grid(sf: &ShockFront, spec: &GridSpec) -> Result<Vec<GridNode>, LopatinskiiError> {
    coeffs(sf, &spec.xi_t)?;
    let res = linspace(spec.re_range.0, spec.re_range.1, spec.n_re);
    let ims = linspace(spec.im_range.0, spec.im_range.1, spec.n_im);
    let mut out = Vec::with_capacity(res.len() * ims.len());
    for &re in &res {
        for &im in &ims {
            let z = C64::new(re, im);
            let value = match spec.variable {
                GridVar::Gamma => {
                    let xi: Option<Vec<f64>> = if spec.restrict_gamma_tilde {
                        restricted_xi_scale(sf, z, &spec.xi_t)
                            .map(|r| spec.xi_t.iter().map(|x| x * r).collect())
                    } else {
                        Some(spec.xi_t.clone())
                    };
                    match xi {
                        Some(x) if re >= 0.0 => Some(delta_v2(sf, z, &x)?),
                        _ => None,
                    }
                }
                GridVar::Lambda => {
                    if re < 0.0 {
                        None
                    } else {
                        let g = freq_map(sf, &FreqPoint::new(z, spec.xi_t.clone()))?;
                        Some(delta_v2(sf, g, &spec.xi_t)?)
                    }
                }
            };
            out.push(GridNode { re, im, value });
        }
    }
    Ok(out)
}
