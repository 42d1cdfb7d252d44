//! Dense complex eigensolver: Householder reduction to Hessenberg form,
//! Wilkinson-shifted QR sweeps with Givens rotations, and inverse iteration
//! for eigenvectors.

use super::OracleError;
use crate::linalg::{cnorm, CMat, C64};

/// Largest matrix accepted by [`dense_eig`].
pub const MAX_DIM: usize = 30;

#[derive(Debug, Clone)]
pub struct EigResult {
    pub values: Vec<C64>,
    /// Unit right eigenvectors, one per value, when requested.
    pub vectors: Option<Vec<Vec<C64>>>,
}

/// All eigenvalues of a square complex matrix, optionally with
/// eigenvectors. Eigenvalues are sorted by real part, then imaginary part.
pub fn dense_eig(a: &CMat, want_vectors: bool) -> Result<EigResult, OracleError> {
    let n = a.rows();
    if !a.is_square() || n == 0 || n > MAX_DIM {
        return Err(OracleError::Shape(format!(
            "dense_eig needs a square matrix of size 1..={MAX_DIM}, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    if a.as_slice().iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(OracleError::Shape("matrix has non-finite entries".into()));
    }
    let mut values = qr_eigenvalues(hessenberg(a))?;
    values.sort_by(|x, y| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)));
    let vectors = if want_vectors {
        Some(values.iter().map(|&l| inverse_iteration(a, l)).collect())
    } else {
        None
    };
    Ok(EigResult { values, vectors })
}

fn hessenberg(a: &CMat) -> CMat {
    let n = a.rows();
    let mut h = a.clone();
    for k in 0..n.saturating_sub(2) {
        let x: Vec<C64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        let xn = cnorm(&x);
        if xn == 0.0 {
            continue;
        }
        let phase = if x[0].norm() == 0.0 {
            C64::new(1.0, 0.0)
        } else {
            x[0] / x[0].norm()
        };
        let mut v = x.clone();
        v[0] += phase * xn;
        let vn = cnorm(&v);
        if vn == 0.0 {
            continue;
        }
        v.iter_mut().for_each(|z| *z /= vn);
        // left: H ← (I − 2vv*) H on rows k+1..n
        for j in 0..n {
            let mut dotp = C64::new(0.0, 0.0);
            for (t, i) in (k + 1..n).enumerate() {
                dotp += v[t].conj() * h[(i, j)];
            }
            for (t, i) in (k + 1..n).enumerate() {
                h[(i, j)] -= 2.0 * v[t] * dotp;
            }
        }
        // right: H ← H (I − 2vv*) on columns k+1..n
        for i in 0..n {
            let mut dotp = C64::new(0.0, 0.0);
            for (t, j) in (k + 1..n).enumerate() {
                dotp += h[(i, j)] * v[t];
            }
            for (t, j) in (k + 1..n).enumerate() {
                h[(i, j)] -= 2.0 * dotp * v[t].conj();
            }
        }
        for i in k + 2..n {
            h[(i, k)] = C64::new(0.0, 0.0);
        }
    }
    h
}

fn wilkinson(a: C64, b: C64, c: C64, d: C64) -> C64 {
    let half = 0.5 * (a - d);
    let disc = (half * half + b * c).sqrt();
    let (r1, r2) = (0.5 * (a + d) + disc, 0.5 * (a + d) - disc);
    if (r1 - d).norm() < (r2 - d).norm() {
        r1
    } else {
        r2
    }
}

fn qr_eigenvalues(mut h: CMat) -> Result<Vec<C64>, OracleError> {
    let n = h.rows();
    let norm = h.max_abs().max(f64::MIN_POSITIVE);
    let eps = f64::EPSILON;
    let max_iter = 60 * n.max(10);
    let mut hi = n - 1;
    let mut iter = 0usize;
    let mut total = 0usize;
    while hi > 0 {
        let mut l = hi;
        while l > 0 {
            let off = h[(l, l - 1)].norm();
            let mut nb = h[(l, l)].norm() + h[(l - 1, l - 1)].norm();
            if nb == 0.0 {
                nb = norm;
            }
            if off <= eps * nb || off <= 1e-300 * norm {
                h[(l, l - 1)] = C64::new(0.0, 0.0);
                break;
            }
            l -= 1;
        }
        if l == hi {
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        total += 1;
        if total > max_iter {
            return Err(OracleError::NoConvergence(total));
        }
        let shift = if iter.is_multiple_of(10) {
            // exceptional shift to break cycles
            h[(hi, hi)] + C64::new(h[(hi, hi - 1)].norm() * 0.75, h[(hi, hi - 1)].norm() * 0.25)
        } else {
            wilkinson(
                h[(hi - 1, hi - 1)],
                h[(hi - 1, hi)],
                h[(hi, hi - 1)],
                h[(hi, hi)],
            )
        };
        qr_sweep(&mut h, l, hi, shift);
    }
    Ok((0..n).map(|i| h[(i, i)]).collect())
}

/// One explicit shifted QR step `H − σI = QR`, `H ← RQ + σI` on the window.
fn qr_sweep(h: &mut CMat, lo: usize, hi: usize, shift: C64) {
    for i in lo..=hi {
        h[(i, i)] -= shift;
    }
    let mut rots = Vec::with_capacity(hi - lo);
    for k in lo..hi {
        let (a, b) = (h[(k, k)], h[(k + 1, k)]);
        let r = (a.norm_sqr() + b.norm_sqr()).sqrt();
        let (c, s) = if r == 0.0 {
            (1.0, C64::new(0.0, 0.0))
        } else if a.norm() == 0.0 {
            (0.0, b.conj() / b.norm())
        } else {
            (a.norm() / r, (a / a.norm()) * b.conj() / r)
        };
        for j in k..=hi {
            let (x, y) = (h[(k, j)], h[(k + 1, j)]);
            h[(k, j)] = c * x + s * y;
            h[(k + 1, j)] = -s.conj() * x + c * y;
        }
        rots.push((c, s));
    }
    for (t, k) in (lo..hi).enumerate() {
        let (c, s) = rots[t];
        for i in lo..=(k + 2).min(hi) {
            let (x, y) = (h[(i, k)], h[(i, k + 1)]);
            h[(i, k)] = c * x + s.conj() * y;
            h[(i, k + 1)] = -s * x + c * y;
        }
    }
    for i in lo..=hi {
        h[(i, i)] += shift;
    }
}

fn inverse_iteration(a: &CMat, lambda: C64) -> Vec<C64> {
    let n = a.rows();
    let norm = a.max_abs().max(1.0);
    let pert = lambda + C64::new(1e-10 * norm, 1e-10 * norm);
    let shifted = CMat::from_fn(n, n, |i, j| {
        if i == j {
            a[(i, j)] - pert
        } else {
            a[(i, j)]
        }
    });
    let lu = shifted.lu();
    let mut x: Vec<C64> = (0..n)
        .map(|k| C64::new(1.0 + 0.1 * k as f64, 0.3 - 0.05 * k as f64))
        .collect();
    for _ in 0..4 {
        let y = lu.solve(&x);
        let yn = cnorm(&y);
        if !(yn.is_finite() && yn > 0.0) {
            break;
        }
        x = y.into_iter().map(|z| z / yn).collect();
    }
    let xn = cnorm(&x);
    x.into_iter().map(|z| z / xn).collect()
}

/// Group eigenvalues closer than `tol` into clusters `(mean, multiplicity)`.
pub fn cluster(values: &[C64], tol: f64) -> Vec<(C64, usize)> {
    let mut out: Vec<(C64, Vec<C64>)> = Vec::new();
    for &v in values {
        match out.iter_mut().find(|(c, _)| (*c - v).norm() <= tol) {
            Some((c, members)) => {
                members.push(v);
                *c = members.iter().sum::<C64>() / members.len() as f64;
            }
            None => out.push((v, vec![v])),
        }
    }
    out.into_iter().map(|(c, m)| (c, m.len())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn companion_roots() {
        // x³ − 6x² + 11x − 6 = (x−1)(x−2)(x−3)
        let r = |x: f64| C64::new(x, 0.0);
        let a = CMat::from_rows(&[
            vec![r(6.0), r(-11.0), r(6.0)],
            vec![r(1.0), r(0.0), r(0.0)],
            vec![r(0.0), r(1.0), r(0.0)],
        ])
        .unwrap();
        let e = dense_eig(&a, true).unwrap();
        for (k, want) in [1.0, 2.0, 3.0].iter().enumerate() {
            assert!((e.values[k] - r(*want)).norm() < 1e-12);
        }
        for (v, &l) in e.vectors.unwrap().iter().zip(&e.values) {
            let av = a.matvec(v);
            let res: f64 = av.iter().zip(v).map(|(x, y)| (x - l * y).norm_sqr()).sum();
            assert!(res.sqrt() < 1e-10);
        }
    }

    #[test]
    fn rotation_complex_pair() {
        let r = |x: f64| C64::new(x, 0.0);
        let a = CMat::from_rows(&[vec![r(0.0), r(-1.0)], vec![r(1.0), r(0.0)]]).unwrap();
        let e = dense_eig(&a, false).unwrap();
        assert!((e.values[0].im.abs() - 1.0).abs() < 1e-14);
        assert!(e.values.iter().all(|z| z.re.abs() < 1e-14));
    }

    #[test]
    fn rejects_oversize() {
        assert!(dense_eig(&CMat::identity(31), false).is_err());
    }
}
