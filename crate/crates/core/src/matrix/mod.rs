//! Dense matrices over real or complex scalars.
//!
//! [`Matrix`] is a plain row-major grid. [`SkewMatrix`] wraps a square matrix
//! whose antisymmetry is enforced when it is built, so Pfaffian kernels never
//! see an asymmetric input. Index sets and permutations are 0-based.

mod kernels;
mod text;

pub use kernels::{determinant, log_abs_determinant, log_abs_pfaffian, pfaffian};
pub use text::{read_matrix_text, write_matrix_text, TextMatrix};

use std::fmt::Debug;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Tolerance on the correction made when antisymmetrizing input.
pub const SKEW_TOLERANCE: f64 = 1e-12;

/// Field scalar usable by the kernels: `f64` or `Complex64`.
pub trait Scalar:
    Copy
    + Debug
    + PartialEq
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + 'static
{
    const IS_COMPLEX: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_real(x: f64) -> Self;
    fn modulus(self) -> f64;
    fn conj(self) -> Self;
    fn re(self) -> f64;
    fn im(self) -> f64;
}

impl Scalar for f64 {
    const IS_COMPLEX: bool = false;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_real(x: f64) -> Self {
        x
    }
    fn modulus(self) -> f64 {
        self.abs()
    }
    fn conj(self) -> Self {
        self
    }
    fn re(self) -> f64 {
        self
    }
    fn im(self) -> f64 {
        0.0
    }
}

impl Scalar for Complex64 {
    const IS_COMPLEX: bool = true;

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn from_real(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
    fn modulus(self) -> f64 {
        self.norm()
    }
    fn conj(self) -> Self {
        Complex64::conj(&self)
    }
    fn re(self) -> f64 {
        self.re
    }
    fn im(self) -> f64 {
        self.im
    }
}

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<T = f64> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries supplied for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != n_cols) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Ok(Self { rows: n_rows, cols: n_cols, data: rows.concat() })
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

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&x| f(x)).collect() }
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                let out_row = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (o, &b) in out_row.iter_mut().zip(other.row(k)) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    /// Entrywise max-norm of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dimension(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| (a - b).modulus())
            .fold(0.0, f64::max))
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|x| x.modulus()).fold(0.0, f64::max)
    }

    fn require_square(&self, what: &str) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::Dimension(format!("{what} needs a square matrix, got {}x{}", self.rows, self.cols)))
        }
    }
}

impl Matrix<f64> {
    pub fn to_complex(&self) -> Matrix<Complex64> {
        self.map(Complex64::from)
    }
}

impl Matrix<Complex64> {
    /// Real part, failing if any imaginary part exceeds `tol`.
    pub fn to_real(&self, tol: f64) -> Result<Matrix<f64>> {
        let worst = self.data.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
        if worst > tol {
            return Err(Error::Domain(format!("matrix has imaginary parts up to {worst:e}")));
        }
        Ok(self.map(|z| z.re))
    }
}

impl<T> std::ops::Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

/// Antisymmetric square matrix, `A[i][j] = -A[j][i]` with an exactly zero diagonal.
#[derive(Clone, Debug, PartialEq)]
pub struct SkewMatrix<T = f64> {
    inner: Matrix<T>,
}

impl<T: Scalar> SkewMatrix<T> {
    /// Antisymmetrizes `m` as `(m - mᵀ)/2`, rejecting inputs that move by more
    /// than [`SKEW_TOLERANCE`] in max-norm.
    pub fn new(m: Matrix<T>) -> Result<Self> {
        m.require_square("SkewMatrix")?;
        let n = m.rows;
        let half = T::from_real(0.5);
        let mut out = Matrix::zeros(n, n);
        let mut correction: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let v = if i == j { T::zero() } else { (m[(i, j)] - m[(j, i)]) * half };
                correction = correction.max((v - m[(i, j)]).modulus());
                out[(i, j)] = v;
            }
        }
        if correction > SKEW_TOLERANCE {
            return Err(Error::NotSkew(correction));
        }
        Ok(Self { inner: out })
    }

    /// Builds from the strict upper triangle; `upper(i, j)` is called for `i < j`.
    pub fn from_upper(n: usize, mut upper: impl FnMut(usize, usize) -> T) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            for j in i + 1..n {
                let v = upper(i, j);
                m[(i, j)] = v;
                m[(j, i)] = -v;
            }
        }
        Self { inner: m }
    }

    pub fn zeros(n: usize) -> Self {
        Self { inner: Matrix::zeros(n, n) }
    }

    pub fn dim(&self) -> usize {
        self.inner.rows
    }

    pub fn as_matrix(&self) -> &Matrix<T> {
        &self.inner
    }

    pub fn into_matrix(self) -> Matrix<T> {
        self.inner
    }

    /// Principal submatrix on `set`; stays skew.
    pub fn principal(&self, set: &IndexSet) -> Result<Self> {
        Ok(Self { inner: submatrix(&self.inner, set, set)? })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::Dimension(format!("{} vs {}", self.dim(), other.dim())));
        }
        let data = self.inner.data.iter().zip(&other.inner.data).map(|(&a, &b)| a + b).collect();
        Ok(Self { inner: Matrix { rows: self.dim(), cols: self.dim(), data } })
    }
}

impl<T> std::ops::Index<(usize, usize)> for SkewMatrix<T> {
    type Output = T;
    fn index(&self, idx: (usize, usize)) -> &T {
        &self.inner[idx]
    }
}

/// Strictly increasing list of 0-based indices below `bound`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IndexSet {
    indices: Vec<usize>,
}

impl IndexSet {
    pub fn new(indices: Vec<usize>, bound: usize) -> Result<Self> {
        if let Some(&bad) = indices.iter().find(|&&i| i >= bound) {
            return Err(Error::Range { index: bad, dim: bound });
        }
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Domain(format!("index set {indices:?} is not strictly increasing")));
        }
        Ok(Self { indices })
    }

    pub fn empty() -> Self {
        Self { indices: Vec::new() }
    }

    /// Members of the bitmask `mask`, in increasing order.
    pub fn from_mask(mask: u64) -> Self {
        let mut indices = Vec::with_capacity(mask.count_ones() as usize);
        let mut m = mask;
        while m != 0 {
            indices.push(m.trailing_zeros() as usize);
            m &= m - 1;
        }
        Self { indices }
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.indices
    }
}

/// Bijection on `0..n`. `image[a]` is the original index placed at position `a`,
/// so conjugating `M` gives `(PᵀMP)[a][b] = M[image[a]][image[b]]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Permutation {
    image: Vec<usize>,
}

impl Permutation {
    pub fn new(image: Vec<usize>) -> Result<Self> {
        let n = image.len();
        let mut seen = vec![false; n];
        for &i in &image {
            if i >= n || std::mem::replace(&mut seen[i], true) {
                return Err(Error::Domain(format!("{image:?} is not a permutation of 0..{n}")));
            }
        }
        Ok(Self { image })
    }

    pub fn identity(n: usize) -> Self {
        Self { image: (0..n).collect() }
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.image.len()];
        for (a, &i) in self.image.iter().enumerate() {
            inv[i] = a;
        }
        Self { image: inv }
    }
}

/// Selection `M[rows, cols]`, order preserved.
pub fn submatrix<T: Scalar>(m: &Matrix<T>, rows: &IndexSet, cols: &IndexSet) -> Result<Matrix<T>> {
    for (set, bound) in [(rows, m.rows), (cols, m.cols)] {
        if let Some(&bad) = set.as_slice().iter().find(|&&i| i >= bound) {
            return Err(Error::Range { index: bad, dim: bound });
        }
    }
    Ok(Matrix::from_fn(rows.len(), cols.len(), |a, b| m[(rows.as_slice()[a], cols.as_slice()[b])]))
}

/// `Pᵀ M P`.
pub fn permute<T: Scalar>(m: &Matrix<T>, p: &Permutation) -> Result<Matrix<T>> {
    m.require_square("permute")?;
    if p.len() != m.rows {
        return Err(Error::Dimension(format!("permutation of {} on a {}x{} matrix", p.len(), m.rows, m.cols)));
    }
    let img = p.image();
    Ok(Matrix::from_fn(m.rows, m.cols, |a, b| m[(img[a], img[b])]))
}

/// `D Pᵀ M P D*` for a unit-modulus diagonal `d`.
pub fn conjugate<T: Scalar>(m: &Matrix<T>, p: &Permutation, d: &[T]) -> Result<Matrix<T>> {
    let pm = permute(m, p)?;
    if d.len() != m.rows {
        return Err(Error::Dimension(format!("diagonal of {} on a {}x{} matrix", d.len(), m.rows, m.cols)));
    }
    if let Some(bad) = d.iter().find(|x| (x.modulus() - 1.0).abs() > 1e-12) {
        return Err(Error::Domain(format!("diagonal entry {bad:?} is not unit modulus")));
    }
    Ok(Matrix::from_fn(m.rows, m.cols, |a, b| d[a] * pm[(a, b)] * d[b].conj()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn submatrix_selects_in_order() {
        let m = Matrix::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        let rows = IndexSet::new(vec![1], 2).unwrap();
        let cols = IndexSet::new(vec![0], 2).unwrap();
        assert_eq!(submatrix(&m, &rows, &cols).unwrap(), Matrix::from_rows(&[vec![3.0]]).unwrap());

        let e = submatrix(&m, &IndexSet::empty(), &IndexSet::empty()).unwrap();
        assert_eq!((e.rows(), e.cols()), (0, 0));
    }

    #[test]
    fn submatrix_out_of_range() {
        let m = Matrix::<f64>::identity(2);
        let bad = IndexSet { indices: vec![2] };
        assert!(matches!(submatrix(&m, &bad, &bad), Err(Error::Range { index: 2, dim: 2 })));
        assert!(IndexSet::new(vec![0, 3], 3).is_err());
        assert!(IndexSet::new(vec![1, 1], 3).is_err());
    }

    #[test]
    fn principal_submatrix_stays_skew() {
        let a = SkewMatrix::from_upper(4, |i, j| (i * 4 + j) as f64);
        let s = a.principal(&IndexSet::new(vec![0, 2, 3], 4).unwrap()).unwrap();
        assert_eq!(s.dim(), 3);
        for i in 0..3 {
            assert_eq!(s[(i, i)], 0.0);
            for j in 0..3 {
                assert_eq!(s[(i, j)], -s[(j, i)]);
            }
        }
    }

    #[test]
    fn skew_constructor_antisymmetrizes_within_tolerance() {
        let m = Matrix::from_rows(&[vec![0.0, 1.0 + 1e-13], vec![-1.0, 0.0]]).unwrap();
        let s = SkewMatrix::new(m).unwrap();
        assert_eq!(s[(0, 1)], -s[(1, 0)]);

        let bad = Matrix::from_rows(&[vec![0.0, 1.0], vec![-0.9, 0.0]]).unwrap();
        assert!(matches!(SkewMatrix::new(bad), Err(Error::NotSkew(_))));

        let diag = Matrix::from_rows(&[vec![1e-3, 1.0], vec![-1.0, 0.0]]).unwrap();
        assert!(SkewMatrix::new(diag).is_err());
    }

    #[test]
    fn conjugate_identity_and_swap() {
        let m = Matrix::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        let id = conjugate(&m, &Permutation::identity(2), &[1.0, 1.0]).unwrap();
        assert_eq!(id, m);

        let swap = Permutation::new(vec![1, 0]).unwrap();
        let s = conjugate(&m, &swap, &[1.0, 1.0]).unwrap();
        assert_eq!(s, Matrix::from_rows(&[vec![4.0, 3.0], vec![2.0, 1.0]]).unwrap());

        assert!(conjugate(&m, &Permutation::identity(3), &[1.0; 3]).is_err());
        assert!(conjugate(&m, &swap, &[1.0, 0.5]).is_err());
    }

    #[test]
    fn permutation_validation() {
        assert!(Permutation::new(vec![0, 0]).is_err());
        assert!(Permutation::new(vec![0, 2]).is_err());
        let p = Permutation::new(vec![2, 0, 1]).unwrap();
        assert_eq!(p.inverse().image(), &[1, 2, 0]);
    }
}
