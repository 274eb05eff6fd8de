use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::{cone, cx, czero, Cx, Real};

/// Dense complex matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T: Real> {
    rows: usize,
    cols: usize,
    data: Vec<Cx<T>>,
}

impl<T: Real> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![czero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = cone();
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<Cx<T>>) -> Result<Self> {
        if rows * cols != data.len() {
            return Err(Error::DimensionMismatch(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Cx<T>) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Rank-one operator |u⟩⟨v|.
    pub fn outer(u: &[Cx<T>], v: &[Cx<T>]) -> Self {
        Self::from_fn(u.len(), v.len(), |i, j| u[i] * v[j].conj())
    }

    pub fn diagonal(values: &[T]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, &x) in values.iter().enumerate() {
            m[(i, i)] = cx(x, T::zero());
        }
        m
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

    pub fn entries(&self) -> &[Cx<T>] {
        &self.data
    }

    pub fn entries_mut(&mut self) -> &mut [Cx<T>] {
        &mut self.data
    }

    pub fn row(&self, i: usize) -> &[Cx<T>] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Cx<T>> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, s: T) -> Self {
        self.map(|z| z * s)
    }

    pub fn scale_cx(&self, s: Cx<T>) -> Self {
        self.map(|z| z * s)
    }

    pub fn map(&self, f: impl Fn(Cx<T>) -> Cx<T>) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    pub fn trace(&self) -> Cx<T> {
        (0..self.rows.min(self.cols)).fold(czero(), |acc, i| acc + self[(i, i)])
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[Cx<T>]) -> Vec<Cx<T>> {
        assert_eq!(v.len(), self.cols, "vector length must match column count");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(czero(), |acc, (&a, &b)| acc + a * b)
            })
            .collect()
    }

    /// ⟨u|M|v⟩ with the bra conjugated.
    pub fn sandwich(&self, u: &[Cx<T>], v: &[Cx<T>]) -> Cx<T> {
        let mv = self.apply(v);
        u.iter()
            .zip(&mv)
            .fold(czero(), |acc, (&a, &b)| acc + a.conj() * b)
    }

    pub fn max_abs(&self) -> T {
        self.data
            .iter()
            .fold(T::zero(), |m, z| m.max(z.norm()))
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .fold(T::zero(), |m, (a, b)| m.max((*a - *b).norm()))
    }

    pub fn frobenius_norm(&self) -> T {
        self.data
            .iter()
            .fold(T::zero(), |acc, z| acc + z.norm_sqr())
            .sqrt()
    }

    /// Largest entrywise deviation from `self == self†`.
    pub fn hermitian_deviation(&self) -> T {
        if !self.is_square() {
            return T::infinity();
        }
        let mut dev = T::zero();
        for i in 0..self.rows {
            for j in i..self.cols {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    /// Largest imaginary part over all entries.
    pub fn max_imag(&self) -> T {
        self.data.iter().fold(T::zero(), |m, z| m.max(z.im.abs()))
    }

    pub fn real_part(&self) -> RealMatrix<T> {
        RealMatrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)].re)
    }

    /// Copy of `self` with `other` placed at block offset `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, other: &Self) {
        for i in 0..other.rows {
            for j in 0..other.cols {
                self[(r0 + i, c0 + j)] = other[(i, j)];
            }
        }
    }
}

impl<T: Real> Index<(usize, usize)> for Matrix<T> {
    type Output = Cx<T>;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Cx<T> {
        &self.data[i * self.cols + j]
    }
}

impl<T: Real> IndexMut<(usize, usize)> for Matrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Cx<T> {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Real> Add for &Matrix<T> {
    type Output = Matrix<T>;

    fn add(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<T: Real> Sub for &Matrix<T> {
    type Output = Matrix<T>;

    fn sub(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl<T: Real> Neg for &Matrix<T> {
    type Output = Matrix<T>;

    fn neg(self) -> Matrix<T> {
        self.map(|z| -z)
    }
}

impl<T: Real> Mul for &Matrix<T> {
    type Output = Matrix<T>;

    fn mul(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.cols, rhs.rows, "inner dimensions must agree");
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.re == T::zero() && a.im == T::zero() {
                    continue;
                }
                let rrow = rhs.row(k);
                let orow = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (o, &b) in orow.iter_mut().zip(rrow) {
                    *o += a * b;
                }
            }
        }
        out
    }
}

/// Kronecker product `a ⊗ b`; entry `(i·rb+k, j·cb+l) = a(i,j)·b(k,l)`.
pub fn kron<T: Real>(a: &Matrix<T>, b: &Matrix<T>) -> Matrix<T> {
    let (ra, ca, rb, cb) = (a.rows, a.cols, b.rows, b.cols);
    let mut out = Matrix::zeros(ra * rb, ca * cb);
    for i in 0..ra {
        for j in 0..ca {
            let aij = a[(i, j)];
            if aij.re == T::zero() && aij.im == T::zero() {
                continue;
            }
            for k in 0..rb {
                for l in 0..cb {
                    out[(i * rb + k, j * cb + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

/// Kronecker product of two vectors.
pub fn kron_vec<T: Real>(a: &[Cx<T>], b: &[Cx<T>]) -> Vec<Cx<T>> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for &x in a {
        for &y in b {
            out.push(x * y);
        }
    }
    out
}

/// Dense real matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct RealMatrix<T: Real> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Real> RealMatrix<T> {
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

    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if rows * cols != data.len() {
            return Err(Error::DimensionMismatch(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(Self {
            rows: r,
            cols: c,
            data: rows.iter().flatten().copied().collect(),
        })
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

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn set_column(&mut self, j: usize, v: &[T]) {
        for (i, &x) in v.iter().enumerate() {
            self[(i, j)] = x;
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn apply(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                (0..self.cols).fold(T::zero(), |acc, j| acc + self[(i, j)] * v[j])
            })
            .collect()
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, x| m.max(x.abs()))
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .fold(T::zero(), |m, (a, b)| m.max((*a - *b).abs()))
    }

    pub fn to_complex(&self) -> Matrix<T> {
        Matrix::from_fn(self.rows, self.cols, |i, j| cx(self[(i, j)], T::zero()))
    }

    /// Largest deviation of `self·selfᵀ` from the identity.
    pub fn orthogonality_deviation(&self) -> T {
        if !self.is_square() {
            return T::infinity();
        }
        (self * &self.transpose()).max_abs_diff(&Self::identity(self.rows))
    }
}

impl<T: Real> Index<(usize, usize)> for RealMatrix<T> {
    type Output = T;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T: Real> IndexMut<(usize, usize)> for RealMatrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Real> Mul for &RealMatrix<T> {
    type Output = RealMatrix<T>;

    fn mul(self, rhs: &RealMatrix<T>) -> RealMatrix<T> {
        assert_eq!(self.cols, rhs.rows, "inner dimensions must agree");
        RealMatrix::from_fn(self.rows, rhs.cols, |i, j| {
            (0..self.cols).fold(T::zero(), |acc, k| acc + self[(i, k)] * rhs[(k, j)])
        })
    }
}

impl<T: Real> Sub for &RealMatrix<T> {
    type Output = RealMatrix<T>;

    fn sub(self, rhs: &RealMatrix<T>) -> RealMatrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        RealMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| *a - *b).collect(),
        }
    }
}

impl<T: Real> Add for &RealMatrix<T> {
    type Output = RealMatrix<T>;

    fn add(self, rhs: &RealMatrix<T>) -> RealMatrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        RealMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| *a + *b).collect(),
        }
    }
}
