//! Uniform / weak stability verdicts for Lax 1-shocks.
//!
//! With `ρ ≤ 0` the shock is uniformly stable outright. With `ρ > 0` the
//! verdict hinges on the sign of
//! `G(ξ̃) = (√ζ + τη)² − ρκ₂⁺P/(s²θ₁₁)` over the unit sphere of tangential
//! frequencies: positive everywhere means uniform stability, a nonpositive
//! value means a zero of the determinant on the imaginary axis (weak
//! stability). The determinant never vanishes in the open right half
//! plane, so strong instability is not a possible outcome.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{sqrt_principal, Mat, C64};
use crate::lopatinskii::{delta_v2, imag_scan, LopatinskiiError};
use crate::materials::MaterialModel;
use crate::shock::{build, freq_coeffs, lax_check, rho, tau, LaxMargins, ShockError, ShockFront};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ClassifierError {
    #[error(transparent)]
    Shock(#[from] ShockError),
    #[error(transparent)]
    Lopatinskii(#[from] LopatinskiiError),
    #[error("moduli are degenerate: {0}")]
    DegenerateModuli(String),
    #[error("invalid amplitude bracket: {0}")]
    InvalidBracket(String),
    #[error("bad reference parameters: {0}")]
    BadParams(String),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}

/// Threshold below which `|min G|` is reported as marginal.
pub const MARGINAL_TOL: f64 = 1e-10;

/// Default number of sphere samples for `d ≥ 3`.
pub const DEFAULT_SPHERE_RESOLUTION: usize = 8192;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StabilityKind {
    Uniform,
    Weak,
}

/// A frequency at which the determinant vanishes on `Re γ = 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    /// `γ = i t`.
    pub t: f64,
    pub xi_t: Vec<f64>,
    /// `|Δ̃(it, ξ̃)|` at the reported root.
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub lax_margins: LaxMargins,
    pub alpha_max: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub kind: StabilityKind,
    pub rho: f64,
    /// Minimum of `G` over the unit sphere; `None` when `ρ ≤ 0` (no search).
    pub min_criterion: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub marginal: Option<bool>,
    pub diagnostics: Diagnostics,
}

/// `G(ξ̃)`.
pub fn criterion(sf: &ShockFront, xi_t: &[f64]) -> Result<f64, ClassifierError> {
    let fc = freq_coeffs(sf, xi_t)?;
    let s = sf.s();
    Ok((fc.zeta.max(0.0).sqrt() + tau(sf) * fc.eta).powi(2)
        - rho(sf) * sf.kappa2_plus() * fc.p / (s * s * sf.theta11()))
}

/// Deterministic sample of unit vectors in `ℝ^m`.
pub fn sphere_points(m: usize, n: usize) -> Vec<Vec<f64>> {
    match m {
        0 => vec![],
        1 => vec![vec![1.0], vec![-1.0]],
        2 => (0..n)
            .map(|k| {
                let th = std::f64::consts::TAU * k as f64 / n as f64;
                vec![th.cos(), th.sin()]
            })
            .collect(),
        3 => {
            // Fibonacci lattice
            let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
            (0..n)
                .map(|k| {
                    let z = 1.0 - 2.0 * (k as f64 + 0.5) / n as f64;
                    let r = (1.0 - z * z).sqrt();
                    let ph = golden * k as f64;
                    vec![r * ph.cos(), r * ph.sin(), z]
                })
                .collect()
        }
        _ => {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
            (0..n)
                .map(|_| loop {
                    let v: Vec<f64> = (0..m).map(|_| rng.gen_range(-1.0..1.0)).collect();
                    let r = v.iter().map(|x| x * x).sum::<f64>().sqrt();
                    if r > 1e-3 && r <= 1.0 {
                        break v.iter().map(|x| x / r).collect();
                    }
                })
                .collect()
        }
    }
}

fn normalize(x: &[f64]) -> Vec<f64> {
    let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    x.iter().map(|v| v / r).collect()
}

/// Nelder–Mead on `f(x/|x|)` starting from `x0` with simplex size `step`.
fn nelder_mead(f: &impl Fn(&[f64]) -> f64, x0: &[f64], step: f64, iters: usize) -> (Vec<f64>, f64) {
    let m = x0.len();
    let g = |x: &[f64]| f(&normalize(x));
    let mut simplex: Vec<(Vec<f64>, f64)> = vec![(x0.to_vec(), g(x0))];
    for k in 0..m {
        let mut x = x0.to_vec();
        x[k] += step;
        let v = g(&x);
        simplex.push((x, v));
    }
    for _ in 0..iters {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let best = simplex[0].1;
        let worst = simplex[m].1;
        if (worst - best).abs() <= 1e-15 * best.abs().max(1e-300) {
            break;
        }
        let centroid: Vec<f64> = (0..m)
            .map(|k| simplex[..m].iter().map(|p| p.0[k]).sum::<f64>() / m as f64)
            .collect();
        let along = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&simplex[m].0)
                .map(|(c, w)| c + t * (w - c))
                .collect()
        };
        let xr = along(-1.0);
        let fr = g(&xr);
        if fr < simplex[0].1 {
            let xe = along(-2.0);
            let fe = g(&xe);
            simplex[m] = if fe < fr { (xe, fe) } else { (xr, fr) };
        } else if fr < simplex[m - 1].1 {
            simplex[m] = (xr, fr);
        } else {
            let xc = along(0.5);
            let fc = g(&xc);
            if fc < worst {
                simplex[m] = (xc, fc);
            } else {
                let x0 = simplex[0].0.clone();
                for p in simplex.iter_mut().skip(1) {
                    let x: Vec<f64> = p.0.iter().zip(&x0).map(|(a, b)| b + 0.5 * (a - b)).collect();
                    let v = g(&x);
                    *p = (x, v);
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (x, v) = simplex.swap_remove(0);
    (normalize(&x), v)
}

/// Minimum of `G` over the unit sphere and its location.
pub fn min_criterion(
    sf: &ShockFront,
    sphere_resolution: usize,
) -> Result<(f64, Vec<f64>), ClassifierError> {
    let m = sf.dim() - 1;
    let pts = sphere_points(m, sphere_resolution.max(8));
    let mut vals: Vec<(f64, usize)> = Vec::with_capacity(pts.len());
    for (k, p) in pts.iter().enumerate() {
        vals.push((criterion(sf, p)?, k));
    }
    vals.sort_by(|a, b| a.0.total_cmp(&b.0));
    let (mut best, mut arg) = (vals[0].0, pts[vals[0].1].clone());
    if m >= 2 {
        let f = |x: &[f64]| criterion(sf, x).unwrap_or(f64::INFINITY);
        let spacing = (std::f64::consts::TAU / pts.len() as f64).powf(1.0 / (m - 1) as f64);
        for &(_, k) in vals.iter().take(4) {
            let (x, v) = nelder_mead(&f, &pts[k], spacing, 400 * m);
            if v < best {
                best = v;
                arg = x;
            }
        }
    }
    Ok((best, arg))
}

/// Classify the shock.
pub fn classify(sf: &ShockFront, sphere_resolution: Option<usize>) -> Result<Verdict, ClassifierError> {
    let r = rho(sf);
    let mut warnings = Vec::new();
    if sf.alpha() > 0.0 {
        warnings.push(
            "alpha > 0 regime: the stability criterion was derived for alpha < 0; verdict is not certified"
                .to_string(),
        );
    }
    let diagnostics = Diagnostics {
        lax_margins: lax_check(sf),
        alpha_max: sf.alpha_max(),
        warnings,
    };
    if r <= 0.0 {
        return Ok(Verdict {
            kind: StabilityKind::Uniform,
            rho: r,
            min_criterion: None,
            witness: None,
            marginal: None,
            diagnostics,
        });
    }
    let (g, xi) = min_criterion(sf, sphere_resolution.unwrap_or(DEFAULT_SPHERE_RESOLUTION))?;
    if g > MARGINAL_TOL {
        return Ok(Verdict {
            kind: StabilityKind::Uniform,
            rho: r,
            min_criterion: Some(g),
            witness: None,
            marginal: Some(false),
            diagnostics,
        });
    }
    let marginal = g > -MARGINAL_TOL;
    let witness = if marginal {
        None
    } else {
        let sc = imag_scan(sf, &xi)?;
        let t = sc
            .roots
            .iter()
            .copied()
            .filter(|t| *t > 0.0)
            .chain(sc.roots.iter().copied())
            .next()
            .ok_or_else(|| {
                ClassifierError::Inconsistent(format!(
                    "criterion {g:e} < 0 but no imaginary-axis root at xi = {xi:?}"
                ))
            })?;
        let residual = delta_v2(sf, C64::new(0.0, t), &xi)?.norm();
        if !(residual <= 1e-8 * sf.kappa2_plus().max(1.0) * (1.0 + t * t)) {
            return Err(ClassifierError::Inconsistent(format!(
                "witness t = {t} has residual {residual:e}"
            )));
        }
        Some(Witness {
            t,
            xi_t: xi,
            residual,
        })
    };
    Ok(Verdict {
        kind: StabilityKind::Weak,
        rho: r,
        min_criterion: Some(g),
        witness,
        marginal: Some(marginal),
        diagnostics,
    })
}

/// Closed-form switch amplitude for the 2-D Ciarlet–Geymonat model at
/// `U⁺ = I`: the negative root of `(κ − μ)α² + μα − (κ + μ) = 0`.
pub fn cg_alpha_star(mu: f64, kappa: f64) -> Result<f64, ClassifierError> {
    if !(mu > 0.0 && kappa > mu && kappa.is_finite()) {
        return Err(ClassifierError::DegenerateModuli(format!(
            "need kappa > mu > 0 (mu = {mu}, kappa = {kappa})"
        )));
    }
    let a = kappa - mu;
    Ok(-(mu + (mu * mu + 4.0 * (kappa * kappa - mu * mu)).sqrt()) / (2.0 * a))
}

/// Bisection tolerance in `α` for [`transition_alpha`].
pub const TRANSITION_TOL: f64 = 1e-6;

/// Amplitude in `[lo, hi]` where the verdict switches, or `None` when the
/// verdict is the same at both ends.
pub fn transition_alpha(
    material: &MaterialModel,
    u_plus: &Mat,
    v_plus: &[f64],
    bracket: (f64, f64),
    sphere_resolution: Option<usize>,
) -> Result<Option<f64>, ClassifierError> {
    let (mut lo, mut hi) = bracket;
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(ClassifierError::InvalidBracket(format!("[{lo}, {hi}]")));
    }
    let weak = |a: f64| -> Result<bool, ClassifierError> {
        let sf = build(material, u_plus, v_plus, a)
            .map_err(|e| ClassifierError::InvalidBracket(format!("alpha = {a}: {e}")))?;
        Ok(classify(&sf, sphere_resolution)?.kind == StabilityKind::Weak)
    };
    let (wl, wh) = (weak(lo)?, weak(hi)?);
    if wl == wh {
        return Ok(None);
    }
    // stop well inside the tolerance so the midpoint is accurate
    while hi - lo > 0.1 * TRANSITION_TOL {
        let mid = 0.5 * (lo + hi);
        if weak(mid)? == wl {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Some(0.5 * (lo + hi)))
}

/// Closed-form determinants for the two worked examples with `U⁺ = I`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "example")]
pub enum ReferenceExample {
    /// 2-D Ciarlet–Geymonat, frequency `ξ₂`.
    #[serde(rename = "CG2D")]
    Cg2d { mu: f64, kappa: f64, alpha: f64 },
    /// 3-D Blatz on the normalised set, `|ξ̃|²` eliminated via `γ`.
    #[serde(rename = "Blatz3D")]
    Blatz3d { mu: f64, kappa: f64, alpha: f64 },
}

fn boundary_sqrt(gamma: C64, z: C64) -> C64 {
    if gamma.re == 0.0 && z.im == 0.0 && z.re < 0.0 {
        let sgn = if gamma.im < 0.0 { -1.0 } else { 1.0 };
        C64::new(0.0, sgn * (-z.re).sqrt())
    } else {
        sqrt_principal(z)
    }
}

/// Closed-form `Δ̃` for the reference examples. For `Blatz3d` the
/// tangential frequency is fixed by `γ` and `xi_t` is ignored.
pub fn reference_delta(
    example: ReferenceExample,
    gamma: C64,
    xi_t: &[f64],
) -> Result<C64, ClassifierError> {
    match example {
        ReferenceExample::Cg2d { mu, kappa, alpha } => {
            if !(mu > 0.0 && kappa > mu && alpha < 0.0) {
                return Err(ClassifierError::BadParams(format!(
                    "CG2D needs kappa > mu > 0 and alpha < 0 (mu = {mu}, kappa = {kappa}, alpha = {alpha})"
                )));
            }
            let &[x2] = xi_t else {
                return Err(ClassifierError::BadParams("CG2D takes one tangential frequency".into()));
            };
            let s2 = kappa + mu / (1.0 - alpha);
            let c = ((mu + kappa) / s2).sqrt();
            let z = gamma * gamma + (mu + kappa) * x2 * x2;
            let w = gamma + boundary_sqrt(gamma, z) * c;
            Ok(w * w - alpha * (kappa * kappa - mu * mu) * x2 * x2 / s2)
        }
        ReferenceExample::Blatz3d { mu, kappa, alpha } => {
            if !(mu > 0.0 && kappa > 2.0 * mu / 3.0 && alpha < 0.0) {
                return Err(ClassifierError::BadParams(format!(
                    "Blatz3D needs kappa > 2 mu / 3, mu > 0 and alpha < 0 (mu = {mu}, kappa = {kappa}, alpha = {alpha})"
                )));
            }
            let k2 = kappa + 4.0 * mu / 3.0;
            let s2 = mu + (kappa + mu / 3.0) / (1.0 - alpha);
            let c1 = (k2 / s2).sqrt();
            let z = gamma * gamma
                + k2
                + alpha * (kappa + mu / 3.0) / (1.0 - alpha) * gamma.norm_sqr();
            let w = gamma + boundary_sqrt(gamma, z) * c1;
            Ok(w * w)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::materials::catalog;
    use std::collections::BTreeMap;

    #[test]
    fn alpha_star_value() {
        let a = cg_alpha_star(1.0, 2.0).unwrap();
        assert!((a + 2.302776).abs() < 1e-6);
        assert!(cg_alpha_star(1.0, 1.0).is_err());
    }

    #[test]
    fn cg_verdicts() {
        let m = catalog("ciarlet-geymonat", 2, 1.0, Some(2.0), &BTreeMap::new()).unwrap();
        let sf = build(&m, &Mat::identity(2), &[0.0; 2], -0.3).unwrap();
        let v = classify(&sf, None).unwrap();
        assert_eq!(v.kind, StabilityKind::Uniform);
        assert!((v.min_criterion.unwrap() - 3.0 * (1.0 - 0.39 / 3.6)).abs() < 1e-12);
        let sf = build(&m, &Mat::identity(2), &[0.0; 2], -8.0).unwrap();
        let v = classify(&sf, None).unwrap();
        assert_eq!(v.kind, StabilityKind::Weak);
        assert!((v.min_criterion.unwrap() + 8.368).abs() < 1e-3);
        assert!(v.witness.is_some());
    }

    #[test]
    fn sphere_points_are_unit() {
        for m in 1..=4 {
            for p in sphere_points(m, 64) {
                let r: f64 = p.iter().map(|x| x * x).sum();
                assert!((r - 1.0).abs() < 1e-14);
            }
        }
    }
}
