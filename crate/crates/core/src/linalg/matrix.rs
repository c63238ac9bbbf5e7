use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Largest side length any constructor in this crate will produce.
pub const MAX_SIDE: usize = 4096;

/// Shorthand for building a complex number.
#[inline]
pub const fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub(crate) const ZERO: Complex64 = c64(0.0, 0.0);
pub(crate) const ONE: Complex64 = c64(1.0, 0.0);

/// Dense complex matrix stored row-major. Serializes as
/// `{"rows", "cols", "re", "im"}` with row-major part arrays.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixRepr", into = "MatrixRepr")]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    rows: usize,
    cols: usize,
    re: Vec<f64>,
    im: Vec<f64>,
}

impl TryFrom<MatrixRepr> for ComplexMatrix {
    type Error = Error;

    fn try_from(r: MatrixRepr) -> Result<Self> {
        ComplexMatrix::from_parts(r.rows, r.cols, &r.re, &r.im)
    }
}

impl From<ComplexMatrix> for MatrixRepr {
    fn from(m: ComplexMatrix) -> Self {
        MatrixRepr { rows: m.rows, cols: m.cols, re: m.re_parts(), im: m.im_parts() }
    }
}

pub(crate) fn check_side(side: usize) -> Result<()> {
    if side > MAX_SIDE {
        Err(Error::SizeCap { side, max: MAX_SIDE })
    } else {
        Ok(())
    }
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = ONE;
        }
        m
    }

    /// Builds a matrix from row-major entries, rejecting wrong lengths and
    /// non-finite values.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from separate real and imaginary parts.
    pub fn from_parts(rows: usize, cols: usize, re: &[f64], im: &[f64]) -> Result<Self> {
        if re.len() != im.len() {
            return Err(Error::DimensionMismatch(format!(
                "re has {} entries, im has {}",
                re.len(),
                im.len()
            )));
        }
        Self::from_vec(rows, cols, re.iter().zip(im).map(|(&a, &b)| c64(a, b)).collect())
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * n + i] = c64(d, 0.0);
        }
        m
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[Vec<Complex64>]) -> Result<Self> {
        let cols = columns.len();
        let rows = columns.first().map_or(0, Vec::len);
        if columns.iter().any(|c| c.len() != rows) {
            return Err(Error::DimensionMismatch("columns of unequal length".into()));
        }
        Ok(Self::from_fn(rows, cols, |i, j| columns[j][i]))
    }

    /// Outer product `|u><v|`.
    pub fn outer(u: &[Complex64], v: &[Complex64]) -> Self {
        Self::from_fn(u.len(), v.len(), |i, j| u[i] * v[j].conj())
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    #[inline]
    pub fn as_mut_slice(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<Complex64> {
        self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self.data[i * self.cols + j]).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Complex64>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn require_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::NotSquare { rows: self.rows, cols: self.cols })
        }
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z.conj()).collect() }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z * s).collect() }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z * s).collect() }
    }

    /// Matrix product. Panics on incompatible shapes; use [`Self::try_matmul`]
    /// for caller-supplied data.
    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matmul shape mismatch");
        let (n, k, m) = (self.rows, self.cols, other.cols);
        let mut out = vec![ZERO; n * m];
        for i in 0..n {
            let out_row = &mut out[i * m..(i + 1) * m];
            for l in 0..k {
                let a = self.data[i * k + l];
                if a == ZERO {
                    continue;
                }
                let b_row = &other.data[l * m..(l + 1) * m];
                for (o, b) in out_row.iter_mut().zip(b_row) {
                    *o += a * b;
                }
            }
        }
        Self { rows: n, cols: m, data: out }
    }

    pub fn try_matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(self.matmul(other))
    }

    /// `self† · other` without forming the adjoint.
    pub fn adjoint_mul(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows, "adjoint_mul shape mismatch");
        let (k, n, m) = (self.rows, self.cols, other.cols);
        let mut out = vec![ZERO; n * m];
        for l in 0..k {
            let a_row = &self.data[l * n..(l + 1) * n];
            let b_row = &other.data[l * m..(l + 1) * m];
            for (i, a) in a_row.iter().enumerate() {
                let a = a.conj();
                if a == ZERO {
                    continue;
                }
                let out_row = &mut out[i * m..(i + 1) * m];
                for (o, b) in out_row.iter_mut().zip(b_row) {
                    *o += a * b;
                }
            }
        }
        Self { rows: n, cols: m, data: out }
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, v.len(), "apply shape mismatch");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entry modulus together with its position.
    pub fn argmax_abs(&self) -> (f64, usize, usize) {
        let mut best = (0.0, 0, 0);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let v = self[(i, j)].norm();
                if v > best.0 || (i, j) == (0, 0) {
                    best = (v, i, j);
                }
            }
        }
        best
    }

    /// `max |(H - H†)_ij|`.
    pub fn hermiticity_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows;
        let mut d = 0.0f64;
        for i in 0..n {
            for j in i..n {
                d = d.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        d
    }

    /// `(H + H†)/2`.
    pub fn hermitian_part(&self) -> Self {
        let n = self.rows;
        Self::from_fn(n, n, |i, j| (self[(i, j)] + self[(j, i)].conj()) * 0.5)
    }

    /// `max |(U†U - I)_ij|`, with the position of the worst entry.
    pub fn unitarity_defect_at(&self) -> (f64, usize, usize) {
        if !self.is_square() {
            return (f64::INFINITY, 0, 0);
        }
        let g = self.adjoint_mul(self);
        let (v, i, j) = (&g - &Self::identity(self.rows)).argmax_abs();
        (v, i, j)
    }

    pub fn unitarity_defect(&self) -> f64 {
        self.unitarity_defect_at().0
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn re_parts(&self) -> Vec<f64> {
        self.data.iter().map(|z| z.re).collect()
    }

    pub fn im_parts(&self) -> Vec<f64> {
        self.data.iter().map(|z| z.im).collect()
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "add shape mismatch");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "sub shape mismatch");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs)
    }
}

/// Kronecker product `A ⊗ B`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    let rows = a.rows.checked_mul(b.rows).ok_or(Error::SizeCap { side: usize::MAX, max: MAX_SIDE })?;
    let cols = a.cols.checked_mul(b.cols).ok_or(Error::SizeCap { side: usize::MAX, max: MAX_SIDE })?;
    check_side(rows)?;
    check_side(cols)?;
    let mut out = ComplexMatrix::zeros(rows, cols);
    for i in 0..a.rows {
        for j in 0..a.cols {
            let x = a[(i, j)];
            if x == ZERO {
                continue;
            }
            for k in 0..b.rows {
                let dst = (i * b.rows + k) * cols + j * b.cols;
                for (o, y) in out.data[dst..dst + b.cols].iter_mut().zip(b.row(k)) {
                    *o = x * y;
                }
            }
        }
    }
    Ok(out)
}

/// Kronecker product of two vectors.
pub fn kron_vec(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a {
        for y in b {
            out.push(x * y);
        }
    }
    out
}

/// `<u|v>`, antilinear in the first argument.
pub fn inner(u: &[Complex64], v: &[Complex64]) -> Complex64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

pub fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sigma_x() -> ComplexMatrix {
        ComplexMatrix::from_vec(2, 2, vec![ZERO, ONE, ONE, ZERO]).unwrap()
    }

    #[test]
    fn kron_of_identities_is_identity() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(kron(&i2, &i2).unwrap(), ComplexMatrix::identity(4));
    }

    #[test]
    fn kron_sigma_x_flips_first_qubit() {
        let op = kron(&sigma_x(), &ComplexMatrix::identity(2)).unwrap();
        let ket00 = vec![ONE, ZERO, ZERO, ZERO];
        let out = op.apply(&ket00);
        assert_eq!(out, vec![ZERO, ZERO, ONE, ZERO]);
    }

    #[test]
    fn kron_respects_size_cap() {
        let big = ComplexMatrix::identity(65);
        assert!(matches!(kron(&big, &big), Err(Error::SizeCap { .. })));
    }

    #[test]
    fn from_vec_rejects_bad_input() {
        assert!(ComplexMatrix::from_vec(2, 2, vec![ONE; 3]).is_err());
        assert_eq!(
            ComplexMatrix::from_vec(1, 1, vec![c64(f64::NAN, 0.0)]),
            Err(Error::NonFinite)
        );
    }

    #[test]
    fn adjoint_mul_matches_explicit_adjoint() {
        let a = ComplexMatrix::from_fn(3, 2, |i, j| c64(i as f64 - 0.5, j as f64 + 0.25));
        let b = ComplexMatrix::from_fn(3, 4, |i, j| c64((i * j) as f64, 1.0 - i as f64));
        assert!(a.adjoint_mul(&b).max_abs_diff(&a.adjoint().matmul(&b)) < 1e-15);
    }

    #[test]
    fn json_roundtrip_is_exact() {
        let m = ComplexMatrix::from_fn(2, 3, |i, j| c64(0.1 * i as f64 + 1.0 / 3.0, -(j as f64) / 7.0));
        let text = serde_json::to_string(&m).unwrap();
        assert!(text.starts_with(r#"{"rows":2,"cols":3,"re":["#));
        assert_eq!(serde_json::from_str::<ComplexMatrix>(&text).unwrap(), m);
        assert!(serde_json::from_str::<ComplexMatrix>(r#"{"rows":2,"cols":2,"re":[1,2,3],"im":[0,0,0]}"#).is_err());
    }
}
