//! Brute-force assembly of the full first-order system.
//!
//! The state is `u = (U₁, …, U_d, v) ∈ ℝ^{d²+d}` (columns of `U`, then the
//! velocity); component `p` of block `j` sits at index `j·d + p`.

use super::OracleError;
use crate::linalg::{CMat, Mat, C64};
use crate::lopatinskii::{stable_beta, FreqPoint};
use crate::materials::{piola_kirchhoff, MaterialModel};
use crate::shock::ShockFront;

/// `u = (U₁, …, U_d, v)`.
pub fn state_vector(u: &Mat, v: &[f64]) -> Vec<f64> {
    let d = u.rows();
    let mut out = Vec::with_capacity(d * d + d);
    for j in 0..d {
        out.extend(u.col(j));
    }
    out.extend_from_slice(v);
    out
}

/// Flux `f^j(u) = −(0, …, v, …, 0, σ_j)` with `v` in block `j`.
pub fn flux(m: &MaterialModel, u: &Mat, v: &[f64], j: usize) -> Result<Vec<f64>, OracleError> {
    let d = m.dim();
    let sigma = piola_kirchhoff(m, u)?;
    let mut f = vec![0.0; d * d + d];
    for p in 0..d {
        f[j * d + p] = -v[p];
        f[d * d + p] = -sigma[(p, j)];
    }
    Ok(f)
}

/// Flux Jacobian `A^j(U)` (zero-based `j`).
pub fn assemble_aj(m: &MaterialModel, u: &Mat, j: usize) -> Result<Mat, OracleError> {
    let d = m.dim();
    if j >= d {
        return Err(OracleError::Shape(format!("direction {j} out of range")));
    }
    let n = d * d + d;
    let mut a = Mat::zeros(n, n);
    for p in 0..d {
        a[(j * d + p, d * d + p)] = -1.0;
    }
    for k in 0..d {
        let b = crate::materials::b_tensor(m, u, k, j)?;
        for p in 0..d {
            for q in 0..d {
                a[(d * d + p, k * d + q)] = -b[(p, q)];
            }
        }
    }
    Ok(a)
}

/// `𝒜⁺(λ, ξ̃) = (λI + iΣ_{j≠1} ξ_j A^j)(A¹ − sI)^{−1}` at the upstream state.
pub fn assemble_cal_a(sf: &ShockFront, fp: &FreqPoint) -> Result<CMat, OracleError> {
    let m = sf.material();
    let d = m.dim();
    let n = d * d + d;
    let a1 = assemble_aj(m, sf.u_plus(), 0)?;
    let s = sf.s();
    let speeds = crate::materials::char_speeds(m, sf.u_plus())?;
    let gap = speeds
        .iter()
        .map(|c| (c.speed - s).abs())
        .fold(f64::INFINITY, f64::min);
    if gap <= 1e-12 * s.abs().max(1.0) {
        return Err(OracleError::CharacteristicSpeed(s));
    }
    let shifted = &a1 - &Mat::identity(n).scale(s);
    let inv = shifted
        .to_complex()
        .inverse()
        .map_err(|_| OracleError::CharacteristicSpeed(s))?;
    let mut left = CMat::identity(n).scale(fp.lambda);
    for (k, &x) in fp.xi_t.iter().enumerate() {
        let aj = assemble_aj(m, sf.u_plus(), k + 1)?.to_complex();
        left = &left + &aj.scale(C64::new(0.0, x));
    }
    Ok(left.matmul(&inv))
}

/// `𝒦 = λ⟦u⟧ + iΣ_{j≠1} ξ_j⟦f^j(u)⟧` from the raw upstream and downstream
/// states.
pub fn jump_vector(sf: &ShockFront, fp: &FreqPoint) -> Result<Vec<C64>, OracleError> {
    let m = sf.material();
    let up = state_vector(sf.u_plus(), sf.v_plus());
    let um = state_vector(sf.u_minus(), sf.v_minus());
    let mut k: Vec<C64> = up
        .iter()
        .zip(&um)
        .map(|(a, b)| fp.lambda * (a - b))
        .collect();
    for (j, &x) in fp.xi_t.iter().enumerate() {
        let fp_ = flux(m, sf.u_plus(), sf.v_plus(), j + 1)?;
        let fm = flux(m, sf.u_minus(), sf.v_minus(), j + 1)?;
        for (kk, (a, b)) in k.iter_mut().zip(fp_.iter().zip(&fm)) {
            *kk += C64::new(0.0, x * (a - b));
        }
    }
    Ok(k)
}

/// Closed-form left eigenvector of `𝒜⁺` for the stable root `β`:
/// `l = (qᵀG₁, …, qᵀG_d, (λ + βs)qᵀ)` with `q = V(iβ, ξ̃)ᵀ` and
/// `G_k = −βB_k^1 + iΣ_{j≠1} ξ_j B_k^j`.
pub fn left_eigenvector(sf: &ShockFront, fp: &FreqPoint) -> Result<(C64, Vec<C64>), OracleError> {
    let m = sf.material();
    let d = m.dim();
    let beta = stable_beta(sf, fp)?;
    let i = C64::new(0.0, 1.0);
    let mut w = vec![i * beta];
    w.extend(fp.xi_t.iter().map(|&x| C64::new(x, 0.0)));
    let q = sf.cof_plus().to_complex().matvec(&w);
    let mut l = Vec::with_capacity(d * d + d);
    for k in 0..d {
        let mut g = crate::materials::b_tensor(m, sf.u_plus(), k, 0)?
            .to_complex()
            .scale(-beta);
        for (jj, &x) in fp.xi_t.iter().enumerate() {
            let b = crate::materials::b_tensor(m, sf.u_plus(), k, jj + 1)?.to_complex();
            g = &g + &b.scale(i * x);
        }
        l.extend(g.vecmat(&q));
    }
    let c = fp.lambda + beta * sf.s();
    l.extend(q.iter().map(|z| c * z));
    Ok((beta, l))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::materials::catalog;
    use crate::shock::build;
    use std::collections::BTreeMap;

    #[test]
    fn a1_spectrum_matches_speeds() {
        let m = catalog("ciarlet-geymonat", 2, 1.0, Some(2.0), &BTreeMap::new()).unwrap();
        let a = assemble_aj(&m, &Mat::identity(2), 0).unwrap();
        let e = super::super::dense_eig(&a.to_complex(), false).unwrap();
        assert!((e.values[0].re + 3f64.sqrt()).abs() < 1e-12);
        assert!((e.values[5].re - 3f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn left_vector_of_reference_shock() {
        let m = catalog("ciarlet-geymonat", 2, 1.0, Some(2.0), &BTreeMap::new()).unwrap();
        let sf = build(&m, &Mat::identity(2), &[0.0; 2], -0.3).unwrap();
        let fp = FreqPoint::new(C64::new(0.4, 0.7), vec![0.6]);
        let (beta, l) = left_eigenvector(&sf, &fp).unwrap();
        let a = assemble_cal_a(&sf, &fp).unwrap();
        let la = a.vecmat(&l);
        let res: f64 = la.iter().zip(&l).map(|(x, y)| (x - beta * y).norm_sqr()).sum();
        let ln: f64 = l.iter().map(|z| z.norm_sqr()).sum();
        assert!(res.sqrt() <= 1e-10 * ln.sqrt(), "{} vs {}", res.sqrt(), ln.sqrt());
    }
}
