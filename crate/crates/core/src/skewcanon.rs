//! Real skew-symmetric generators and their block canonical form.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::densemat::{hermitian_eigen, Matrix, RealMatrix};
use crate::error::{Error, Result};
use crate::scalar::{cx, Cx, Real};

/// Real antisymmetric `d×d` matrix with an exactly zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct SkewMatrix<T: Real> {
    m: RealMatrix<T>,
}

impl<T: Real> SkewMatrix<T> {
    pub fn zeros(d: usize) -> Self {
        Self {
            m: RealMatrix::zeros(d, d),
        }
    }

    /// Builds from the strict upper triangle in row-major order.
    pub fn from_upper(d: usize, upper: &[T]) -> Result<Self> {
        let need = d * d.saturating_sub(1) / 2;
        if upper.len() != need {
            return Err(Error::DimensionMismatch(format!(
                "skew matrix of size {d} needs {need} upper entries, got {}",
                upper.len()
            )));
        }
        let mut m = RealMatrix::zeros(d, d);
        let mut k = 0;
        for i in 0..d {
            for j in (i + 1)..d {
                m[(i, j)] = upper[k];
                m[(j, i)] = -upper[k];
                k += 1;
            }
        }
        Ok(Self { m })
    }

    pub fn upper(&self) -> Vec<T> {
        let d = self.d();
        let mut out = Vec::with_capacity(d * d.saturating_sub(1) / 2);
        for i in 0..d {
            for j in (i + 1)..d {
                out.push(self.m[(i, j)]);
            }
        }
        out
    }

    pub fn d(&self) -> usize {
        self.m.rows()
    }

    pub fn matrix(&self) -> &RealMatrix<T> {
        &self.m
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.m[(i, j)]
    }

    pub fn to_complex(&self) -> Matrix<T> {
        self.m.to_complex()
    }

    pub fn apply(&self, v: &[T]) -> Vec<T> {
        self.m.apply(v)
    }

    /// Spectral norm, i.e. the largest invariant factor.
    pub fn spectral_norm(&self) -> T {
        let s = &self.m.transpose() * &self.m;
        hermitian_eigen(&s.to_complex()).max().max(T::zero()).sqrt()
    }

    /// `R·U·Rᵀ` for an orthogonal `R`.
    pub fn conjugate(&self, r: &RealMatrix<T>) -> Result<Self> {
        if r.rows() != self.d() || !r.is_square() {
            return Err(Error::DimensionMismatch("conjugating matrix has the wrong size".into()));
        }
        let m = &(r * &self.m) * &r.transpose();
        Ok(antisymmetrize(&m))
    }
}

impl<T: Real + Serialize> Serialize for SkewMatrix<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<T> {
            d: usize,
            upper: Vec<T>,
        }
        Repr {
            d: self.d(),
            upper: self.upper(),
        }
        .serialize(s)
    }
}

impl<'de, T: Real + Deserialize<'de>> Deserialize<'de> for SkewMatrix<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr<T> {
            d: usize,
            upper: Vec<T>,
        }
        let r = Repr::<T>::deserialize(d)?;
        SkewMatrix::from_upper(r.d, &r.upper).map_err(D::Error::custom)
    }
}

fn antisymmetrize<T: Real>(m: &RealMatrix<T>) -> SkewMatrix<T> {
    let half = T::from_f64_lossy(0.5);
    let n = m.rows();
    let out = RealMatrix::from_fn(n, n, |i, j| {
        if i == j {
            T::zero()
        } else {
            (m[(i, j)] - m[(j, i)]) * half
        }
    });
    SkewMatrix { m: out }
}

/// Accepts `m` when it is antisymmetric within the structure tolerance and
/// returns its exact antisymmetric part.
pub fn validate_skew<T: Real>(m: &RealMatrix<T>) -> Result<SkewMatrix<T>> {
    validate_skew_with(m, T::structure_tol())
}

pub fn validate_skew_with<T: Real>(m: &RealMatrix<T>, tol: T) -> Result<SkewMatrix<T>> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "skew matrix must be square, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let dev = (m + &m.transpose()).max_abs();
    if !(dev <= tol) {
        return Err(Error::NotSkewSymmetric {
            deviation: dev.to_f64().unwrap_or(f64::INFINITY),
        });
    }
    Ok(antisymmetrize(m))
}

/// `|⟨α*|U|α⟩| = |Σ α_i U_ij α_j|`, which vanishes for every skew `U`.
pub fn orthogonality_identity_check<T: Real>(u: &SkewMatrix<T>, alpha: &[Cx<T>]) -> Result<T> {
    let d = u.d();
    if alpha.len() != d {
        return Err(Error::DimensionMismatch(format!(
            "vector of length {} against {d}x{d} generator",
            alpha.len()
        )));
    }
    let mut acc = cx(T::zero(), T::zero());
    for i in 0..d {
        for j in 0..d {
            acc += alpha[i] * alpha[j] * u.get(i, j);
        }
    }
    Ok(acc.norm())
}

/// `U = Q·J·Qᵀ` with `Q` orthogonal and `J` block diagonal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Serialize", deserialize = "T: Deserialize<'de>"))]
pub struct CanonicalForm<T: Real> {
    pub q: RealMatrix<T>,
    pub lambdas: Vec<T>,
    pub rank: usize,
}

impl<T: Real> CanonicalForm<T> {
    pub fn d(&self) -> usize {
        self.q.rows()
    }

    pub fn j(&self) -> SkewMatrix<T> {
        build_j(self.d(), &self.lambdas).expect("canonical form carries at most d/2 blocks")
    }

    /// `Q·J·Qᵀ`.
    pub fn reassemble(&self) -> RealMatrix<T> {
        &(&self.q * self.j().matrix()) * &self.q.transpose()
    }
}

/// Block canonical form of a skew matrix via the eigenvectors of `UᵀU`.
pub fn canonical_decompose<T: Real>(u: &SkewMatrix<T>) -> CanonicalForm<T> {
    let d = u.d();
    let um = u.matrix();
    let ut = um.transpose();
    let s = &ut * um;
    let eig = hermitian_eigen(&s.to_complex());
    let norm = eig.max().max(T::zero()).sqrt();
    let thresh = T::rank_tol() * norm;
    let half = T::from_f64_lossy(0.5);

    let evec = |k: usize| -> Vec<T> { eig.vector(k).iter().map(|z| z.re).collect() };
    let mut cols: Vec<Vec<T>> = Vec::with_capacity(d);
    let mut lambdas = Vec::new();

    if norm > T::zero() {
        for k in (0..d).rev() {
            if eig.values[k].max(T::zero()).sqrt() <= thresh || cols.len() + 2 > d {
                break;
            }
            let mut a = evec(k);
            orthogonalize(&mut a, &cols);
            let r2 = dot(&a, &a);
            if r2 <= half {
                continue;
            }
            scale_in_place(&mut a, T::one() / r2.sqrt());
            let mut b = ut.apply(&a);
            let lam = dot(&b, &b).sqrt();
            if lam <= thresh {
                continue;
            }
            scale_in_place(&mut b, T::one() / lam);
            orthogonalize(&mut b, &cols);
            let ab = dot(&a, &b);
            for (x, y) in b.iter_mut().zip(&a) {
                *x -= ab * *y;
            }
            let nb = dot(&b, &b).sqrt();
            scale_in_place(&mut b, T::one() / nb);
            cols.push(a);
            cols.push(b);
            lambdas.push(lam);
        }
    }

    complete_basis(&mut cols, d, |k| evec(d - 1 - k));

    let mut q = RealMatrix::zeros(d, d);
    for (j, c) in cols.iter().enumerate() {
        q.set_column(j, c);
    }
    let inner = &(&q.transpose() * um) * &q;
    for (i, lam) in lambdas.iter_mut().enumerate() {
        *lam = inner[(2 * i, 2 * i + 1)];
    }
    let rank = 2 * lambdas.len();
    CanonicalForm { q, lambdas, rank }
}

fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |s, (&x, &y)| s + x * y)
}

fn scale_in_place<T: Real>(v: &mut [T], s: T) {
    for x in v {
        *x *= s;
    }
}

/// Two passes of modified Gram–Schmidt against orthonormal `basis`.
fn orthogonalize<T: Real>(v: &mut [T], basis: &[Vec<T>]) {
    for _ in 0..2 {
        for c in basis {
            let p = dot(v, c);
            for (x, y) in v.iter_mut().zip(c) {
                *x -= p * *y;
            }
        }
    }
}

/// Extends `cols` to an orthonormal basis of `R^d`, drawing candidates from
/// `candidate(k)` for `k < d` and then from the standard basis.
fn complete_basis<T: Real>(cols: &mut Vec<Vec<T>>, d: usize, candidate: impl Fn(usize) -> Vec<T>) {
    let mut pool: Vec<Vec<T>> = (0..d).map(&candidate).collect();
    pool.extend((0..d).map(|k| {
        let mut e = vec![T::zero(); d];
        e[k] = T::one();
        e
    }));
    while cols.len() < d {
        let mut best: Option<(T, Vec<T>)> = None;
        for p in &pool {
            let mut v = p.clone();
            orthogonalize(&mut v, cols);
            let r = dot(&v, &v);
            if best.as_ref().is_none_or(|(br, _)| r > *br) {
                best = Some((r, v));
            }
        }
        let (r, mut v) = best.expect("candidate pool is never empty");
        scale_in_place(&mut v, T::one() / r.sqrt());
        cols.push(v);
    }
}

/// Block-diagonal `J` with `[[0,λ],[−λ,0]]` on coordinates `(2i, 2i+1)`.
pub fn build_j<T: Real>(d: usize, lambdas: &[T]) -> Result<SkewMatrix<T>> {
    if 2 * lambdas.len() > d {
        return Err(Error::TooManyBlocks {
            blocks: lambdas.len(),
            dim: d,
        });
    }
    if let Some(bad) = lambdas.iter().find(|l| !(**l >= T::zero()) || !l.is_finite()) {
        return Err(Error::InvalidParams(format!("invariant factor {bad} must be a nonnegative number")));
    }
    let mut m = RealMatrix::zeros(d, d);
    for (i, &l) in lambdas.iter().enumerate() {
        m[(2 * i, 2 * i + 1)] = l;
        m[(2 * i + 1, 2 * i)] = -l;
    }
    Ok(SkewMatrix { m })
}

/// Three mutually anticommuting skew generators built from 4×4 blocks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Serialize", deserialize = "T: Deserialize<'de>"))]
pub struct JTriple<T: Real> {
    pub d: usize,
    pub j: SkewMatrix<T>,
    pub jp: SkewMatrix<T>,
    pub jpp: SkewMatrix<T>,
}

impl<T: Real> JTriple<T> {
    pub fn all(&self) -> [&SkewMatrix<T>; 3] {
        [&self.j, &self.jp, &self.jpp]
    }

    /// Number of complete 4×4 blocks.
    pub fn blocks(&self) -> usize {
        self.d / 4
    }
}

const J_BLOCK: [[i8; 4]; 4] = [[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]];
const JP_BLOCK: [[i8; 4]; 4] = [[0, 0, 0, 1], [0, 0, 1, 0], [0, -1, 0, 0], [-1, 0, 0, 0]];
const JPP_BLOCK: [[i8; 4]; 4] = [[0, 0, 1, 0], [0, 0, 0, -1], [-1, 0, 0, 0], [0, 1, 0, 0]];

fn block_sum<T: Real>(d: usize, block: &[[i8; 4]; 4]) -> SkewMatrix<T> {
    let mut m = RealMatrix::zeros(d, d);
    for k in 0..d / 4 {
        for (r, row) in block.iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                m[(4 * k + r, 4 * k + c)] = T::from_f64_lossy(f64::from(v));
            }
        }
    }
    SkewMatrix { m }
}

pub fn build_j_triple<T: Real>(d: usize) -> Result<JTriple<T>> {
    if d < 4 {
        return Err(Error::InvalidDimension(format!("the J triple needs d >= 4, got {d}")));
    }
    Ok(JTriple {
        d,
        j: block_sum(d, &J_BLOCK),
        jp: block_sum(d, &JP_BLOCK),
        jpp: block_sum(d, &JPP_BLOCK),
    })
}

/// Haar-distributed orthogonal matrix (QR of a Gaussian matrix with sign fix).
pub fn random_orthogonal<R: Rng + ?Sized>(d: usize, rng: &mut R) -> RealMatrix<f64> {
    let mut cols: Vec<Vec<f64>> = Vec::with_capacity(d);
    while cols.len() < d {
        let mut v: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
        orthogonalize(&mut v, &cols);
        let n = dot(&v, &v).sqrt();
        if n > 1e-8 {
            scale_in_place(&mut v, 1.0 / n);
            cols.push(v);
        }
    }
    let mut q = RealMatrix::zeros(d, d);
    for (j, c) in cols.iter().enumerate() {
        q.set_column(j, c);
    }
    q
}

/// Skew matrix with independent standard normal upper entries.
pub fn random_skew<R: Rng + ?Sized>(d: usize, rng: &mut R) -> SkewMatrix<f64> {
    let upper: Vec<f64> = (0..d * d.saturating_sub(1) / 2)
        .map(|_| rng.sample(StandardNormal))
        .collect();
    SkewMatrix::from_upper(d, &upper).expect("length matches by construction")
}

/// Canonical form of `U = Q·J·Qᵀ` assembled from explicit pieces.
pub fn assemble<T: Real>(q: &RealMatrix<T>, lambdas: &[T]) -> Result<SkewMatrix<T>> {
    let j = build_j(q.rows(), lambdas)?;
    j.conjugate(q)
}
