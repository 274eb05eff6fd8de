use serde::{Deserialize, Serialize};

use crate::densemat::eigen::{hermitian_eigen, hermitian_eigenvalues, HermitianEigen};
use crate::densemat::matrix::Matrix;
use crate::error::{Error, Result};
use crate::scalar::{czero, Real};

/// Which tensor factor a partial transpose acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Subsystem {
    A,
    B,
}

/// Square operator on `C^d1 ⊗ C^d2`, basis `|i,j⟩ ↦ i·d2 + j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(
    try_from = "BipartiteRepr<T>",
    into = "BipartiteRepr<T>",
    bound(serialize = "T: Serialize", deserialize = "T: Deserialize<'de>")
)]
pub struct BipartiteOperator<T: Real> {
    d1: usize,
    d2: usize,
    matrix: Matrix<T>,
}

#[derive(Serialize, Deserialize)]
struct BipartiteRepr<T: Real> {
    d1: usize,
    d2: usize,
    #[serde(flatten, bound(serialize = "T: Serialize", deserialize = "T: Deserialize<'de>"))]
    matrix: Matrix<T>,
}

impl<T: Real> TryFrom<BipartiteRepr<T>> for BipartiteOperator<T> {
    type Error = Error;

    fn try_from(r: BipartiteRepr<T>) -> Result<Self> {
        Self::new(r.d1, r.d2, r.matrix)
    }
}

impl<T: Real> From<BipartiteOperator<T>> for BipartiteRepr<T> {
    fn from(op: BipartiteOperator<T>) -> Self {
        Self {
            d1: op.d1,
            d2: op.d2,
            matrix: op.matrix,
        }
    }
}

impl<T: Real> BipartiteOperator<T> {
    pub fn new(d1: usize, d2: usize, matrix: Matrix<T>) -> Result<Self> {
        let m = d1 * d2;
        if d1 == 0 || d2 == 0 {
            return Err(Error::DimensionMismatch("factor dimensions must be positive".into()));
        }
        if matrix.rows() != m || matrix.cols() != m {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix cannot act on {d1}⊗{d2}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        Ok(Self { d1, d2, matrix })
    }

    pub fn zeros(d1: usize, d2: usize) -> Self {
        Self {
            d1,
            d2,
            matrix: Matrix::zeros(d1 * d2, d1 * d2),
        }
    }

    pub fn identity(d1: usize, d2: usize) -> Self {
        Self {
            d1,
            d2,
            matrix: Matrix::identity(d1 * d2),
        }
    }

    pub fn d1(&self) -> usize {
        self.d1
    }

    pub fn d2(&self) -> usize {
        self.d2
    }

    pub fn dim(&self) -> usize {
        self.d1 * self.d2
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.matrix
    }

    pub fn matrix_mut(&mut self) -> &mut Matrix<T> {
        &mut self.matrix
    }

    pub fn into_matrix(self) -> Matrix<T> {
        self.matrix
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.d2 + j
    }

    /// Entry ⟨i,j|op|k,l⟩.
    pub fn get(&self, (i, j): (usize, usize), (k, l): (usize, usize)) -> crate::Cx<T> {
        self.matrix[(self.index(i, j), self.index(k, l))]
    }

    /// Adds `v` to ⟨i,j|op|k,l⟩.
    pub fn add_to(&mut self, (i, j): (usize, usize), (k, l): (usize, usize), v: T) {
        let (r, c) = (self.index(i, j), self.index(k, l));
        self.matrix[(r, c)].re += v;
    }

    pub fn same_shape(&self, other: &Self) -> bool {
        self.d1 == other.d1 && self.d2 == other.d2
    }

    fn check_shape(&self, other: &Self) -> Result<()> {
        if self.same_shape(other) {
            Ok(())
        } else {
            Err(Error::DimensionMismatch(format!(
                "{}⊗{} vs {}⊗{}",
                self.d1, self.d2, other.d1, other.d2
            )))
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        Ok(Self {
            d1: self.d1,
            d2: self.d2,
            matrix: &self.matrix + &other.matrix,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        Ok(Self {
            d1: self.d1,
            d2: self.d2,
            matrix: &self.matrix - &other.matrix,
        })
    }

    pub fn scale(&self, s: T) -> Self {
        Self {
            d1: self.d1,
            d2: self.d2,
            matrix: self.matrix.scale(s),
        }
    }

    pub fn trace(&self) -> T {
        self.matrix.trace().re
    }

    pub fn hermitian_deviation(&self) -> T {
        self.matrix.hermitian_deviation()
    }

    pub fn is_hermitian(&self, tol: T) -> bool {
        self.hermitian_deviation() <= tol
    }

    pub fn ensure_hermitian(&self, tol: T) -> Result<()> {
        let dev = self.hermitian_deviation();
        if dev <= tol {
            Ok(())
        } else {
            Err(Error::NotHermitian {
                deviation: dev.to_f64().unwrap_or(f64::INFINITY),
            })
        }
    }

    pub fn partial_transpose(&self, sub: Subsystem) -> Self {
        let (d1, d2) = (self.d1, self.d2);
        let mut out = Matrix::zeros(d1 * d2, d1 * d2);
        for i in 0..d1 {
            for k in 0..d2 {
                for j in 0..d1 {
                    for l in 0..d2 {
                        let v = self.matrix[(i * d2 + k, j * d2 + l)];
                        match sub {
                            Subsystem::A => out[(j * d2 + k, i * d2 + l)] = v,
                            Subsystem::B => out[(i * d2 + l, j * d2 + k)] = v,
                        }
                    }
                }
            }
        }
        Self { d1, d2, matrix: out }
    }

    pub fn eigenvalues(&self) -> Result<Vec<T>> {
        self.ensure_hermitian(T::structure_tol())?;
        Ok(hermitian_eigenvalues(&self.matrix))
    }

    pub fn eigen(&self) -> Result<HermitianEigen<T>> {
        self.ensure_hermitian(T::structure_tol())?;
        Ok(hermitian_eigen(&self.matrix))
    }

    pub fn min_eigenvalue(&self) -> Result<T> {
        min_eigenvalue(self)
    }
}

/// Smallest eigenvalue of a Hermitian bipartite operator.
pub fn min_eigenvalue<T: Real>(op: &BipartiteOperator<T>) -> Result<T> {
    Ok(op.eigenvalues()?.first().copied().unwrap_or_else(T::zero))
}

/// Partial transpose on the chosen factor.
pub fn partial_transpose<T: Real>(op: &BipartiteOperator<T>, sub: Subsystem) -> BipartiteOperator<T> {
    op.partial_transpose(sub)
}

/// `Tr(w·rho)` with no normalization requirement on `rho`.
pub fn trace_product<T: Real>(w: &BipartiteOperator<T>, rho: &BipartiteOperator<T>) -> Result<T> {
    w.check_shape(rho)?;
    let m = w.dim();
    let mut acc: crate::Cx<T> = czero();
    for i in 0..m {
        let row = w.matrix.row(i);
        for (j, &a) in row.iter().enumerate() {
            acc += a * rho.matrix[(j, i)];
        }
    }
    let imag_tol = T::from_f64_lossy(1e-10);
    let scale = T::one().max(w.matrix.max_abs() * rho.matrix.max_abs());
    if acc.im.abs() > imag_tol * scale {
        return Err(Error::ComplexExpectation {
            imag: acc.im.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(acc.re)
}

/// `Tr(w·rho)` for a unit-trace Hermitian `rho`.
pub fn expectation<T: Real>(w: &BipartiteOperator<T>, rho: &BipartiteOperator<T>) -> Result<T> {
    w.check_shape(rho)?;
    w.ensure_hermitian(T::structure_tol())?;
    rho.ensure_hermitian(T::structure_tol())?;
    let tr = rho.trace();
    if (tr - T::one()).abs() > T::structure_tol() {
        return Err(Error::NotAState(format!("trace {tr} differs from 1")));
    }
    trace_product(w, rho)
}
