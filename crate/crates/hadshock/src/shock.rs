//! Planar Lax 1-shocks with normal `e₁`.
//!
//! Given the upstream state `(U⁺, v⁺)` and the amplitude `α`, the
//! downstream state is `U⁻ = U⁺ − α V₁ e₁ᵀ` with `V = Cof U⁺`, the speed is
//! `s = −√(μ + (h'(J⁺) − h'(J⁻))/α)` and `v⁻ = v⁺ + sαV₁`. Jumps follow the
//! convention `⟦g⟧ = g(u⁺) − g(u⁻)`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{cofactor, dot, Mat};
use crate::materials::{piola_kirchhoff, MaterialConfig, MaterialError, MaterialModel};

/// Number of interior samples used when checking the sign of `h'''`.
pub const HTRIPLE_SAMPLES: usize = 256;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ShockError {
    #[error(transparent)]
    Material(#[from] MaterialError),
    #[error("amplitude alpha = {alpha} outside the admissible range (alpha != 0, alpha < {alpha_max})")]
    AlphaOutOfRange { alpha: f64, alpha_max: f64 },
    #[error("alpha = {alpha} has the wrong sign for this material (h''' is {sign} on the shock interval)")]
    WrongSignForMaterial { alpha: f64, sign: &'static str },
    #[error("h''' changes sign on [{lo}, {hi}]")]
    HtripleSignChange { lo: f64, hi: f64 },
    #[error("h''' vanishes on [{lo}, {hi}]: the field is linearly degenerate there")]
    DegenerateHtriple { lo: f64, hi: f64 },
    #[error("Lax inequalities fail: margins {0:?}")]
    LaxViolation([f64; 3]),
    #[error("shape error: {0}")]
    Shape(String),
}

/// An admissible Lax 1-shock. Immutable once built.
#[derive(Debug, Clone)]
pub struct ShockFront {
    material: MaterialModel,
    u_plus: Mat,
    v_plus: Vec<f64>,
    alpha: f64,
    u_minus: Mat,
    v_minus: Vec<f64>,
    cof_plus: Mat,
    j_plus: f64,
    j_minus: f64,
    theta11: f64,
    s: f64,
    kappa2_plus: f64,
    kappa2_minus: f64,
}

/// `α_max = J⁺ / |V₁|²`, the amplitude at which `J⁻` reaches zero.
pub fn alpha_max(u_plus: &Mat) -> Result<f64, ShockError> {
    if !u_plus.is_square() {
        return Err(ShockError::Shape("U+ must be square".into()));
    }
    let j = u_plus.det();
    if !(j > 0.0) {
        return Err(MaterialError::NonPositiveJacobian(j).into());
    }
    let v1 = cofactor(u_plus).col(0);
    Ok(j / dot(&v1, &v1))
}

/// Sign of `h'''` strictly inside `[lo, hi]`; endpoints may vanish.
fn htriple_sign(m: &MaterialModel, lo: f64, hi: f64) -> Result<f64, ShockError> {
    let n = HTRIPLE_SAMPLES;
    let interior: Vec<f64> = (1..=n)
        .map(|k| m.h3(lo + (hi - lo) * k as f64 / (n + 1) as f64))
        .collect();
    if interior.iter().all(|&x| x == 0.0) {
        return Err(ShockError::DegenerateHtriple { lo, hi });
    }
    let sign = if interior.iter().all(|&x| x < 0.0) {
        -1.0
    } else if interior.iter().all(|&x| x > 0.0) {
        1.0
    } else {
        return Err(ShockError::HtripleSignChange { lo, hi });
    };
    for end in [m.h3(lo), m.h3(hi)] {
        if end * sign < 0.0 {
            return Err(ShockError::HtripleSignChange { lo, hi });
        }
    }
    Ok(sign)
}

/// Build the shock with upstream state `(U⁺, v⁺)` and amplitude `α`.
pub fn build(
    material: &MaterialModel,
    u_plus: &Mat,
    v_plus: &[f64],
    alpha: f64,
) -> Result<ShockFront, ShockError> {
    let d = material.dim();
    if u_plus.rows() != d || u_plus.cols() != d || v_plus.len() != d {
        return Err(ShockError::Shape(format!(
            "need a {d}x{d} U+ and a length-{d} v+"
        )));
    }
    let amax = alpha_max(u_plus)?;
    if alpha == 0.0 || !alpha.is_finite() || alpha >= amax {
        return Err(ShockError::AlphaOutOfRange {
            alpha,
            alpha_max: amax,
        });
    }
    let cof_plus = cofactor(u_plus);
    let v1 = cof_plus.col(0);
    let theta11 = dot(&v1, &v1);
    let j_plus = u_plus.det();
    let j_minus = j_plus - alpha * theta11;

    let (lo, hi) = if j_plus < j_minus {
        (j_plus, j_minus)
    } else {
        (j_minus, j_plus)
    };
    let sign = htriple_sign(material, lo, hi)?;
    if alpha < 0.0 && sign > 0.0 {
        return Err(ShockError::WrongSignForMaterial {
            alpha,
            sign: "positive",
        });
    }
    if alpha > 0.0 && sign < 0.0 {
        return Err(ShockError::WrongSignForMaterial {
            alpha,
            sign: "negative",
        });
    }

    let mu = material.mu();
    let s2 = mu + (material.h1(j_plus) - material.h1(j_minus)) / alpha;
    if !(s2 > 0.0) {
        return Err(ShockError::LaxViolation([f64::NAN; 3]));
    }
    let s = -s2.sqrt();

    let mut u_minus = u_plus.clone();
    for (p, &x) in v1.iter().enumerate() {
        u_minus[(p, 0)] -= alpha * x;
    }
    let v_minus: Vec<f64> = v_plus
        .iter()
        .zip(&v1)
        .map(|(&v, &w)| v + s * alpha * w)
        .collect();

    let sf = ShockFront {
        material: material.clone(),
        u_plus: u_plus.clone(),
        v_plus: v_plus.to_vec(),
        alpha,
        u_minus,
        v_minus,
        cof_plus,
        j_plus,
        j_minus,
        theta11,
        s,
        kappa2_plus: mu + material.h2(j_plus) * theta11,
        kappa2_minus: mu + material.h2(j_minus) * theta11,
    };
    let lax = lax_check(&sf);
    if !lax.ok {
        return Err(ShockError::LaxViolation([lax.m1, lax.m2, lax.m3]));
    }
    Ok(sf)
}

impl ShockFront {
    pub fn material(&self) -> &MaterialModel {
        &self.material
    }
    pub fn dim(&self) -> usize {
        self.material.dim()
    }
    pub fn mu(&self) -> f64 {
        self.material.mu()
    }
    pub fn u_plus(&self) -> &Mat {
        &self.u_plus
    }
    pub fn u_minus(&self) -> &Mat {
        &self.u_minus
    }
    pub fn v_plus(&self) -> &[f64] {
        &self.v_plus
    }
    pub fn v_minus(&self) -> &[f64] {
        &self.v_minus
    }
    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    /// Shock speed (negative).
    pub fn s(&self) -> f64 {
        self.s
    }
    pub fn j_plus(&self) -> f64 {
        self.j_plus
    }
    pub fn j_minus(&self) -> f64 {
        self.j_minus
    }
    /// `V = Cof U⁺`.
    pub fn cof_plus(&self) -> &Mat {
        &self.cof_plus
    }
    /// `V₁`, first column of `Cof U⁺`.
    pub fn v1(&self) -> Vec<f64> {
        self.cof_plus.col(0)
    }
    pub fn theta11(&self) -> f64 {
        self.theta11
    }
    pub fn kappa2_plus(&self) -> f64 {
        self.kappa2_plus
    }
    pub fn kappa2_minus(&self) -> f64 {
        self.kappa2_minus
    }
    /// `h''(J⁺)`.
    pub fn h2_plus(&self) -> f64 {
        self.material.h2(self.j_plus)
    }
    pub fn alpha_max(&self) -> f64 {
        self.j_plus / self.theta11
    }

    /// Scale used for the jump residual tolerances,
    /// `max(1, ‖U⁺‖, |s| ‖V₁‖)`.
    pub fn scale(&self) -> f64 {
        1f64.max(self.u_plus.frobenius())
            .max(self.s.abs() * self.theta11.sqrt())
    }

    /// Residual of `s⟦u⟧ = ⟦f¹(u)⟧` with stresses evaluated from scratch at
    /// both states. Returns `(kinematic, momentum)` residual norms.
    pub fn rh_residual(&self) -> (f64, f64) {
        let d = self.dim();
        let sig_p = piola_kirchhoff(&self.material, &self.u_plus).expect("validated state");
        let sig_m = piola_kirchhoff(&self.material, &self.u_minus).expect("validated state");
        // first block: s⟦U₁⟧ + ⟦v⟧ = 0; other U-blocks have no jump
        let mut kin = 0.0f64;
        for p in 0..d {
            let ju = self.u_plus[(p, 0)] - self.u_minus[(p, 0)];
            let jv = self.v_plus[p] - self.v_minus[p];
            kin += (self.s * ju + jv).powi(2);
            for q in 1..d {
                kin += (self.u_plus[(p, q)] - self.u_minus[(p, q)]).powi(2);
            }
        }
        // last block: s⟦v⟧ + ⟦σ₁⟧ = 0
        let mut mom = 0.0f64;
        for p in 0..d {
            let jv = self.v_plus[p] - self.v_minus[p];
            let js = sig_p[(p, 0)] - sig_m[(p, 0)];
            mom += (self.s * jv + js).powi(2);
        }
        (kin.sqrt(), mom.sqrt())
    }
}

/// Lax margins; all three positive for an admissible 1-shock.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LaxMargins {
    /// `−√κ₂⁻ − s`
    pub m1: f64,
    /// `s + √κ₂⁺`
    pub m2: f64,
    /// `−√μ − s`
    pub m3: f64,
    pub ok: bool,
}

pub fn lax_check(sf: &ShockFront) -> LaxMargins {
    let m1 = -sf.kappa2_minus.sqrt() - sf.s;
    let m2 = sf.s + sf.kappa2_plus.sqrt();
    let m3 = -sf.mu().sqrt() - sf.s;
    LaxMargins {
        m1,
        m2,
        m3,
        ok: m1 > 0.0 && m2 > 0.0 && m3 > 0.0,
    }
}

/// `(D_u a₁)·r` for the slowest field at `U`, in closed form
/// `−|V₁|⁴ h''' / (2 a₁²)` with `a₁² = μ + h''|V₁|²`.
pub fn genuine_nonlinearity(m: &MaterialModel, u: &Mat) -> Result<f64, ShockError> {
    let j = u.det();
    if !(j > 0.0) {
        return Err(MaterialError::NonPositiveJacobian(j).into());
    }
    let v1 = cofactor(u).col(0);
    let t = dot(&v1, &v1);
    let a2 = m.mu() + m.h2(j) * t;
    Ok(-t * t * m.h3(j) / (2.0 * a2))
}

/// Gram matrices and the jump of the cofactor.
#[derive(Debug, Clone)]
pub struct ShockGeometry {
    /// `θ = VᵀV`.
    pub theta: Mat,
    /// `Θ_ij = θ₁₁θ_ij − θ_1jθ_i1`.
    pub big_theta: Mat,
    /// `M` with `Cof U⁻ = Cof U⁺ − αM`; first column zero.
    pub m: Mat,
}

pub fn geometry(sf: &ShockFront) -> ShockGeometry {
    let d = sf.dim();
    let v = sf.cof_plus();
    let theta = v.transpose().matmul(v);
    let big_theta = Mat::from_fn(d, d, |i, j| {
        theta[(0, 0)] * theta[(i, j)] - theta[(0, j)] * theta[(i, 0)]
    });
    let mut w = sf.u_plus().clone();
    w.set_col(0, &sf.v1());
    let mut m = cofactor(&w);
    for p in 0..d {
        m[(p, 0)] = 0.0;
    }
    ShockGeometry {
        theta,
        big_theta,
        m,
    }
}

/// Tangential-frequency coefficients, with `ξ̃ = (ξ₂, …, ξ_d)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FreqCoeffs {
    pub eta: f64,
    pub n2: f64,
    pub omega: f64,
    pub p: f64,
    pub zeta: f64,
    /// `|ξ̃|²`
    pub xi2: f64,
}

pub fn freq_coeffs(sf: &ShockFront, xi_t: &[f64]) -> Result<FreqCoeffs, ShockError> {
    let d = sf.dim();
    if xi_t.len() != d - 1 {
        return Err(ShockError::Shape(format!(
            "tangential frequency must have {} entries",
            d - 1
        )));
    }
    let v = sf.cof_plus();
    let v1 = sf.v1();
    // Σ_j ξ_j V_j over tangential columns
    let mut w = vec![0.0; d];
    for (k, &x) in xi_t.iter().enumerate() {
        for (p, wp) in w.iter_mut().enumerate() {
            *wp += x * v[(p, k + 1)];
        }
    }
    let eta = dot(&v1, &w);
    let n2 = dot(&w, &w);
    let xi2 = dot(xi_t, xi_t);
    let h2 = sf.h2_plus();
    let omega = sf.mu() * xi2 + h2 * n2;
    let p = (sf.theta11 * n2 - eta * eta).max(0.0);
    let zeta = omega - h2 * h2 * eta * eta / sf.kappa2_plus;
    Ok(FreqCoeffs {
        eta,
        n2,
        omega,
        p,
        zeta,
        xi2,
    })
}

/// `ρ = (s² − μ)(1/θ₁₁ − α/J⁺) − h''(J⁺)`.
pub fn rho(sf: &ShockFront) -> f64 {
    let s2mu = sf.s * sf.s - sf.mu();
    s2mu * (1.0 / sf.theta11 - sf.alpha / sf.j_plus) - sf.h2_plus()
}

/// `τ = −μ √(κ₂⁺ − s²) / (s √κ₂⁺ θ₁₁)`.
pub fn tau(sf: &ShockFront) -> f64 {
    let k2 = sf.kappa2_plus;
    -sf.mu() * (k2 - sf.s * sf.s).sqrt() / (sf.s * k2.sqrt() * sf.theta11)
}

/// Upstream matrix given either as row-major rows or the word `"identity"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MatrixSpec {
    Named(String),
    Rows(Vec<Vec<f64>>),
    Flat(Vec<f64>),
}

impl MatrixSpec {
    pub fn resolve(&self, d: usize) -> Result<Mat, ShockError> {
        match self {
            MatrixSpec::Named(n) if n == "identity" => Ok(Mat::identity(d)),
            MatrixSpec::Named(n) => Err(ShockError::Shape(format!("unknown matrix `{n}`"))),
            MatrixSpec::Rows(r) => {
                let m = Mat::from_rows(r).map_err(|e| ShockError::Shape(e.to_string()))?;
                if m.rows() != d || m.cols() != d {
                    return Err(ShockError::Shape(format!("U+ must be {d}x{d}")));
                }
                Ok(m)
            }
            MatrixSpec::Flat(v) => {
                Mat::from_row_major(d, d, v.clone()).map_err(|e| ShockError::Shape(e.to_string()))
            }
        }
    }
}

/// On-disk shock scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShockScenario {
    pub material: MaterialConfig,
    #[serde(rename = "U_plus")]
    pub u_plus: MatrixSpec,
    #[serde(default)]
    pub v_plus: Option<Vec<f64>>,
    pub alpha: f64,
}

impl ShockScenario {
    pub fn build(&self) -> Result<ShockFront, ShockError> {
        let m = MaterialModel::from_config(&self.material)?;
        let d = m.dim();
        let u = self.u_plus.resolve(d)?;
        let v = self.v_plus.clone().unwrap_or_else(|| vec![0.0; d]);
        build(&m, &u, &v, self.alpha)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::materials::catalog;
    use std::collections::BTreeMap;

    fn cg2() -> MaterialModel {
        catalog("ciarlet-geymonat", 2, 1.0, Some(2.0), &BTreeMap::new()).unwrap()
    }

    #[test]
    fn reference_shock() {
        let sf = build(&cg2(), &Mat::identity(2), &[0.0, 0.0], -0.3).unwrap();
        assert!((sf.j_minus() - 1.3).abs() < 1e-15);
        assert!((sf.s() * sf.s() - (2.0 + 1.0 / 1.3)).abs() < 1e-14);
        assert!((rho(&sf) - 0.3).abs() < 1e-14);
        let lax = lax_check(&sf);
        assert!((lax.m1 - 0.05422).abs() < 1e-5);
        assert!((lax.m2 - 0.06795).abs() < 1e-5);
        assert!((lax.m3 - 0.664101).abs() < 1e-6);
    }

    #[test]
    fn amplitude_bounds() {
        assert_eq!(alpha_max(&Mat::diag(&[2.0, 1.0])).unwrap(), 2.0);
        let m = cg2();
        assert!(matches!(
            build(&m, &Mat::identity(2), &[0.0; 2], 0.0),
            Err(ShockError::AlphaOutOfRange { .. })
        ));
        assert!(matches!(
            build(&m, &Mat::identity(2), &[0.0; 2], 0.5),
            Err(ShockError::WrongSignForMaterial { .. })
        ));
    }

    #[test]
    fn gnl_cg_identity() {
        let g = genuine_nonlinearity(&cg2(), &Mat::identity(2)).unwrap();
        assert!((g - 1.0 / 3.0).abs() < 1e-15);
    }
}
