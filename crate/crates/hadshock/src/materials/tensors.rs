//! Stress, elasticity and acoustic tensors of a Hadamard material.

use serde::{Deserialize, Serialize};

use super::{MaterialError, MaterialModel};
use crate::linalg::{cofactor, dot, norm, Mat};

fn check_shape(m: &MaterialModel, u: &Mat) -> Result<(), MaterialError> {
    let d = m.dim();
    if u.rows() != d || u.cols() != d {
        return Err(MaterialError::Shape(format!(
            "expected a {d}x{d} deformation gradient, got {}x{}",
            u.rows(),
            u.cols()
        )));
    }
    Ok(())
}

/// `(J, Cof U)` after validating shape and orientation.
fn jac_cof(m: &MaterialModel, u: &Mat) -> Result<(f64, Mat), MaterialError> {
    check_shape(m, u)?;
    let j = u.det();
    if !(j > 0.0) {
        return Err(MaterialError::NonPositiveJacobian(j));
    }
    Ok((j, cofactor(u)))
}

/// Stored energy `W(U)`.
pub fn energy(m: &MaterialModel, u: &Mat) -> Result<f64, MaterialError> {
    let (j, _) = jac_cof(m, u)?;
    let tr: f64 = u.as_slice().iter().map(|x| x * x).sum();
    Ok(0.5 * m.mu() * tr + m.h(j))
}

/// First Piola–Kirchhoff stress `σ = μU + h'(J) Cof U`.
pub fn piola_kirchhoff(m: &MaterialModel, u: &Mat) -> Result<Mat, MaterialError> {
    let (j, v) = jac_cof(m, u)?;
    Ok(&u.scale(m.mu()) + &v.scale(m.h1(j)))
}

/// Cauchy stress `T = (μ/J) U Uᵀ + h'(J) I`.
pub fn cauchy_stress(m: &MaterialModel, u: &Mat) -> Result<Mat, MaterialError> {
    let (j, _) = jac_cof(m, u)?;
    let uut = u.matmul(&u.transpose());
    Ok(&uut.scale(m.mu() / j) + &Mat::identity(m.dim()).scale(m.h1(j)))
}

/// Elasticity block `B_i^j`, with `(B_i^j)_{pq} = ∂σ_{pj}/∂U_{qi}`
/// (indices zero-based).
pub fn b_tensor(m: &MaterialModel, u: &Mat, i: usize, j: usize) -> Result<Mat, MaterialError> {
    let (jac, v) = jac_cof(m, u)?;
    let d = m.dim();
    if i >= d || j >= d {
        return Err(MaterialError::Shape(format!("block index ({i}, {j}) out of range")));
    }
    Ok(b_block(m.mu(), m.h1(jac) / jac, m.h2(jac), &v, i, j))
}

fn b_block(mu: f64, h1_over_j: f64, h2: f64, v: &Mat, i: usize, j: usize) -> Mat {
    let d = v.rows();
    let (vi, vj) = (v.col(i), v.col(j));
    Mat::from_fn(d, d, |p, q| {
        let delta = if i == j && p == q { mu } else { 0.0 };
        let ji = vj[p] * vi[q];
        delta + h2 * ji + h1_over_j * (ji - vi[p] * vj[q])
    })
}

/// Acoustic tensor `Q(ξ) = μ|ξ|² I + h''(J) (Vξ)(Vξ)ᵀ`.
///
/// Accepts complex-free real `ξ` only; the frequency analysis works with
/// the spectrum directly.
pub fn acoustic_tensor(m: &MaterialModel, u: &Mat, xi: &[f64]) -> Result<Mat, MaterialError> {
    let (jac, v) = jac_cof(m, u)?;
    if xi.len() != m.dim() {
        return Err(MaterialError::Shape("frequency has wrong length".into()));
    }
    let vxi = v.matvec(xi);
    let id = Mat::identity(m.dim()).scale(m.mu() * dot(xi, xi));
    Ok(&id + &Mat::outer(&vxi, &vxi).scale(m.h2(jac)))
}

/// Closed-form spectrum of the acoustic tensor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AcousticSpectrum {
    /// `μ|ξ|²`, multiplicity `d − 1`.
    pub kappa1: f64,
    /// `μ|ξ|² + h''|Vξ|²`, simple, eigenvector `Vξ`.
    pub kappa2: f64,
    pub mult1: usize,
    /// Unit eigenvector for `kappa2`.
    pub eigvec: Vec<f64>,
}

pub fn acoustic_spectrum(
    m: &MaterialModel,
    u: &Mat,
    xi: &[f64],
) -> Result<AcousticSpectrum, MaterialError> {
    let (jac, v) = jac_cof(m, u)?;
    if xi.len() != m.dim() {
        return Err(MaterialError::Shape("frequency has wrong length".into()));
    }
    let n2 = dot(xi, xi);
    if n2 == 0.0 {
        return Err(MaterialError::ZeroFrequency);
    }
    let vxi = v.matvec(xi);
    let nv = norm(&vxi);
    let kappa1 = m.mu() * n2;
    Ok(AcousticSpectrum {
        kappa1,
        kappa2: kappa1 + m.h2(jac) * nv * nv,
        mult1: m.dim() - 1,
        eigvec: vxi.iter().map(|x| x / nv).collect(),
    })
}

/// A characteristic speed of `A¹(u)` with its multiplicity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CharSpeed {
    pub speed: f64,
    pub multiplicity: usize,
}

/// Characteristic speeds in the normal direction `e₁`, ascending.
pub fn char_speeds(m: &MaterialModel, u: &Mat) -> Result<Vec<CharSpeed>, MaterialError> {
    let d = m.dim();
    let mut e1 = vec![0.0; d];
    e1[0] = 1.0;
    let sp = acoustic_spectrum(m, u, &e1)?;
    if !(sp.kappa2 > 0.0) {
        return Err(MaterialError::NotHyperbolic(sp.kappa2));
    }
    let (a1, a2) = (sp.kappa1.sqrt(), sp.kappa2.sqrt());
    let cs = |speed, multiplicity| CharSpeed { speed, multiplicity };
    let mut out = vec![cs(-a2, 1), cs(-a1, d - 1), cs(0.0, d * d - d), cs(a1, d - 1), cs(a2, 1)];
    out.sort_by(|a, b| a.speed.total_cmp(&b.speed));
    Ok(out)
}

/// `I⁽¹⁾ = tr(UᵀU) ≥ d J^{2/d}`: the admissible invariant domain.
pub fn domain_check(u: &Mat) -> bool {
    let d = u.rows() as f64;
    let j = u.det();
    if j <= 0.0 {
        return false;
    }
    let i1: f64 = u.as_slice().iter().map(|x| x * x).sum();
    i1 >= d * j.powf(2.0 / d) * (1.0 - 1e-14)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::materials::catalog;
    use std::collections::BTreeMap;

    #[test]
    fn piola_diag() {
        let m = catalog("ciarlet-geymonat", 2, 1.0, Some(2.0), &BTreeMap::new()).unwrap();
        let u = Mat::diag(&[2.0, 1.0]);
        let s = piola_kirchhoff(&m, &u).unwrap();
        let want = &Mat::diag(&[2.0, 1.0]) + &Mat::diag(&[1.0, 2.0]).scale(0.5);
        assert!((&s - &want).max_abs() < 1e-15);
        let bad = Mat::diag(&[-1.0, 1.0]);
        assert!(matches!(
            piola_kirchhoff(&m, &bad),
            Err(MaterialError::NonPositiveJacobian(_))
        ));
    }

    #[test]
    fn speeds_at_identity() {
        let m = catalog("ciarlet-geymonat", 2, 1.0, Some(2.0), &BTreeMap::new()).unwrap();
        let s = char_speeds(&m, &Mat::identity(2)).unwrap();
        let total: usize = s.iter().map(|c| c.multiplicity).sum();
        assert_eq!(total, 6);
        assert!((s[0].speed + 3f64.sqrt()).abs() < 1e-15);
        assert!(acoustic_spectrum(&m, &Mat::identity(2), &[0.0, 0.0]).is_err());
    }
}
