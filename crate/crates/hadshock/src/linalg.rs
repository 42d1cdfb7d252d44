//! Small dense real/complex matrix kernel.
//!
//! Everything here is sized for the problems this crate deals with
//! (`d ≤ 5`, system size `d² + d ≤ 30`), so the routines favour clarity and
//! exactness over blocking or cache tricks. Matrices are stored row-major.

use std::fmt;
use std::ops::{Add, Div, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;
use thiserror::Error;

/// Complex scalar used throughout the crate.
pub type C64 = Complex64;

/// Errors raised by the dense kernel.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("leading coefficient of quadratic vanishes (|a| = {0:e})")]
    DegenerateQuadratic(f64),
    #[error("matrix is singular to working precision")]
    Singular,
    #[error("dimension mismatch: {0}")]
    Shape(String),
}

/// Scalar field the kernel is generic over (`f64` and [`C64`]).
pub trait Scalar:
    Copy
    + fmt::Debug
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_f64(x: f64) -> Self;
    /// Modulus `|x|`.
    fn modulus(self) -> f64;
    fn conj(self) -> Self;
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_f64(x: f64) -> Self {
        x
    }
    fn modulus(self) -> f64 {
        self.abs()
    }
    fn conj(self) -> Self {
        self
    }
}

impl Scalar for C64 {
    fn zero() -> Self {
        C64::new(0.0, 0.0)
    }
    fn one() -> Self {
        C64::new(1.0, 0.0)
    }
    fn from_f64(x: f64) -> Self {
        C64::new(x, 0.0)
    }
    fn modulus(self) -> f64 {
        self.norm()
    }
    fn conj(self) -> Self {
        Complex64::conj(&self)
    }
}

/// Dense row-major matrix.
#[derive(Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

/// Real matrix.
pub type Mat = Matrix<f64>;
/// Complex matrix.
pub type CMat = Matrix<C64>;

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Build from row-major data.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<T>) -> Result<Self, LinalgError> {
        if data.len() != rows * cols {
            return Err(LinalgError::Shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self, LinalgError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(LinalgError::Shape("ragged rows".into()));
        }
        Ok(Self {
            rows: r,
            cols: c,
            data: rows.iter().flatten().copied().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn row(&self, i: usize) -> Vec<T> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn set_col(&mut self, j: usize, v: &[T]) {
        for (i, &x) in v.iter().enumerate() {
            self[(i, j)] = x;
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| f(x)).collect(),
        }
    }

    pub fn scale(&self, a: T) -> Self {
        self.map(|x| a * x)
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matmul shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == T::zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] = out[(i, j)] + a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len(), "matvec shape mismatch");
        (0..self.rows)
            .map(|i| {
                (0..self.cols).fold(T::zero(), |acc, j| acc + self[(i, j)] * v[j])
            })
            .collect()
    }

    /// Row vector times matrix: `vᵀ A`.
    pub fn vecmat(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.rows, v.len(), "vecmat shape mismatch");
        (0..self.cols)
            .map(|j| {
                (0..self.rows).fold(T::zero(), |acc, i| acc + v[i] * self[(i, j)])
            })
            .collect()
    }

    pub fn frobenius(&self) -> f64 {
        self.data
            .iter()
            .map(|x| x.modulus().powi(2))
            .sum::<f64>()
            .sqrt()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.modulus()))
    }

    /// Copy with the `(r, c)` row and column removed.
    pub fn minor_matrix(&self, r: usize, c: usize) -> Self {
        let mut data = Vec::with_capacity((self.rows - 1) * (self.cols - 1));
        for i in (0..self.rows).filter(|&i| i != r) {
            for j in (0..self.cols).filter(|&j| j != c) {
                data.push(self[(i, j)]);
            }
        }
        Self {
            rows: self.rows - 1,
            cols: self.cols - 1,
            data,
        }
    }

    /// LU factorisation with partial pivoting.
    pub fn lu(&self) -> Lu<T> {
        assert!(self.is_square(), "LU of non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = T::one();
        let mut singular = false;
        for k in 0..n {
            let (p, pmax) = (k..n)
                .map(|i| (i, a[(i, k)].modulus()))
                .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if pmax == 0.0 {
                singular = true;
                continue;
            }
            if p != k {
                for j in 0..n {
                    a.data.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
                sign = -sign;
            }
            let piv = a[(k, k)];
            for i in k + 1..n {
                let f = a[(i, k)] / piv;
                a[(i, k)] = f;
                for j in k + 1..n {
                    let akj = a[(k, j)];
                    a[(i, j)] = a[(i, j)] - f * akj;
                }
            }
        }
        Lu {
            lu: a,
            perm,
            sign,
            singular,
        }
    }

    pub fn det(&self) -> T {
        let n = self.rows;
        match n {
            0 => T::one(),
            1 => self[(0, 0)],
            2 => self[(0, 0)] * self[(1, 1)] - self[(0, 1)] * self[(1, 0)],
            3 => {
                let m = |i, j| self[(i, j)];
                m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1))
                    - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0))
                    + m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0))
            }
            _ => self.lu().det(),
        }
    }

    pub fn inverse(&self) -> Result<Self, LinalgError> {
        let lu = self.lu();
        if lu.singular {
            return Err(LinalgError::Singular);
        }
        let n = self.rows;
        let mut inv = Self::zeros(n, n);
        let mut e = vec![T::zero(); n];
        for j in 0..n {
            e.iter_mut().for_each(|x| *x = T::zero());
            e[j] = T::one();
            let x = lu.solve(&e);
            inv.set_col(j, &x);
        }
        Ok(inv)
    }
}

impl<T: Scalar> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T: Scalar> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Scalar> Add for &Matrix<T> {
    type Output = Matrix<T>;
    fn add(self, rhs: Self) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| a + b).collect(),
        }
    }
}

impl<T: Scalar> Sub for &Matrix<T> {
    type Output = Matrix<T>;
    fn sub(self, rhs: Self) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| a - b).collect(),
        }
    }
}

impl<T: Scalar> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", &self.data[i * self.cols..(i + 1) * self.cols])?;
        }
        write!(f, "]")
    }
}

impl Mat {
    pub fn to_complex(&self) -> CMat {
        self.map(|x| C64::new(x, 0.0))
    }

    pub fn diag(v: &[f64]) -> Mat {
        let mut m = Mat::zeros(v.len(), v.len());
        for (i, &x) in v.iter().enumerate() {
            m[(i, i)] = x;
        }
        m
    }

    pub fn trace(&self) -> f64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// `a bᵀ`.
    pub fn outer(a: &[f64], b: &[f64]) -> Mat {
        Mat::from_fn(a.len(), b.len(), |i, j| a[i] * b[j])
    }
}

/// Result of [`Matrix::lu`].
#[derive(Debug, Clone)]
pub struct Lu<T: Scalar> {
    lu: Matrix<T>,
    perm: Vec<usize>,
    sign: T,
    singular: bool,
}

impl<T: Scalar> Lu<T> {
    pub fn is_singular(&self) -> bool {
        self.singular
    }

    pub fn det(&self) -> T {
        if self.singular {
            return T::zero();
        }
        (0..self.lu.rows).fold(self.sign, |acc, i| acc * self.lu[(i, i)])
    }

    pub fn solve(&self, b: &[T]) -> Vec<T> {
        let n = self.lu.rows;
        let mut x: Vec<T> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for k in 0..i {
                x[i] = x[i] - self.lu[(i, k)] * x[k];
            }
        }
        for i in (0..n).rev() {
            for k in i + 1..n {
                x[i] = x[i] - self.lu[(i, k)] * x[k];
            }
            x[i] = x[i] / self.lu[(i, i)];
        }
        x
    }
}

/// Cofactor matrix, `Cof(A)_ij = (-1)^{i+j} det(minor_ij(A))`.
///
/// Uses direct signed-minor expansion for `d ≤ 4`. Larger matrices go through
/// `det(A) A^{-T}` when that is well conditioned, falling back to minor
/// expansion otherwise so singular input still gets an exact-ish answer.
pub fn cofactor(a: &Mat) -> Mat {
    assert!(a.is_square(), "cofactor of non-square matrix");
    let n = a.rows();
    match n {
        0 => Mat::zeros(0, 0),
        1 => Mat::identity(1),
        2..=4 => minor_expansion(a),
        _ => {
            let lu = a.lu();
            let det = lu.det();
            let scale = a.max_abs().powi(n as i32);
            if !lu.is_singular() && det.abs() > 1e-8 * scale {
                match a.inverse() {
                    Ok(inv) => inv.transpose().scale(det),
                    Err(_) => minor_expansion(a),
                }
            } else {
                minor_expansion(a)
            }
        }
    }
}

fn minor_expansion(a: &Mat) -> Mat {
    let n = a.rows();
    Mat::from_fn(n, n, |i, j| {
        let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
        sign * a.minor_matrix(i, j).det()
    })
}

/// Principal square root with the branch cut mapped onto the upper half
/// plane: `sqrt_principal(-t²) = i|t|` regardless of the sign of the zero
/// imaginary part.
pub fn sqrt_principal(z: C64) -> C64 {
    if z.im == 0.0 {
        if z.re >= 0.0 {
            C64::new(z.re.sqrt(), 0.0)
        } else {
            C64::new(0.0, (-z.re).sqrt())
        }
    } else {
        z.sqrt()
    }
}

/// Roots of `a x² + b x + c = 0`, computed with the cancellation-free form.
pub fn quad_roots(a: C64, b: C64, c: C64) -> Result<[C64; 2], LinalgError> {
    let scale = a.norm().max(b.norm()).max(c.norm());
    if a.norm() <= f64::EPSILON * scale || a.norm() == 0.0 {
        return Err(LinalgError::DegenerateQuadratic(a.norm()));
    }
    let disc = (b * b - 4.0 * a * c).sqrt();
    // pick the sign that avoids cancellation in b + disc
    let q = if (b.conj() * disc).re >= 0.0 {
        -0.5 * (b + disc)
    } else {
        -0.5 * (b - disc)
    };
    if q.norm() == 0.0 {
        return Ok([C64::zero(), C64::zero()]);
    }
    Ok([q / a, c / q])
}

/// Euclidean norm of a real vector.
pub fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Euclidean norm of a complex vector.
pub fn cnorm(v: &[C64]) -> f64 {
    v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Bilinear (non-conjugating) complex dot product.
pub fn cdot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Cross product in three dimensions.
pub fn cross(a: &[f64], b: &[f64]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cofactor_2x2() {
        let a = Mat::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        let c = cofactor(&a);
        assert_eq!(c.as_slice(), &[4.0, -3.0, -2.0, 1.0]);
    }

    #[test]
    fn cofactor_singular_matches_minors() {
        let a = Mat::from_rows(&[
            vec![1.0, 2.0, 3.0, 4.0, 5.0],
            vec![2.0, 4.0, 6.0, 8.0, 10.0],
            vec![0.0, 1.0, 0.0, 2.0, 1.0],
            vec![1.0, 0.0, 1.0, 0.0, 3.0],
            vec![0.5, 0.5, 2.0, 1.0, 0.0],
        ])
        .unwrap();
        let c = cofactor(&a);
        let m = minor_expansion(&a);
        assert!((&c - &m).max_abs() < 1e-12);
    }

    #[test]
    fn sqrt_cut() {
        assert_eq!(sqrt_principal(C64::new(-9.0, 0.0)), C64::new(0.0, 3.0));
        assert_eq!(sqrt_principal(C64::new(-9.0, -0.0)), C64::new(0.0, 3.0));
        assert_eq!(sqrt_principal(C64::new(4.0, 0.0)), C64::new(2.0, 0.0));
    }

    #[test]
    fn quadratic() {
        let one = C64::new(1.0, 0.0);
        let r = quad_roots(one, C64::new(-3.0, 0.0), C64::new(2.0, 0.0)).unwrap();
        let mut re: Vec<f64> = r.iter().map(|z| z.re).collect();
        re.sort_by(f64::total_cmp);
        assert!((re[0] - 1.0).abs() < 1e-15 && (re[1] - 2.0).abs() < 1e-15);
        assert!(matches!(
            quad_roots(C64::zero(), one, one),
            Err(LinalgError::DegenerateQuadratic(_))
        ));
    }

    #[test]
    fn inverse_roundtrip() {
        let a = Mat::from_rows(&[vec![4.0, 1.0, 0.0], vec![1.0, 3.0, 1.0], vec![0.0, 1.0, 2.0]])
            .unwrap();
        let p = a.matmul(&a.inverse().unwrap());
        assert!((&p - &Mat::identity(3)).max_abs() < 1e-14);
        assert!(Mat::zeros(2, 2).inverse().is_err());
    }
}
