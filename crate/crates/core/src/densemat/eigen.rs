use crate::densemat::matrix::Matrix;
use crate::scalar::{cx, Cx, Real};

const MAX_SWEEPS: usize = 100;

/// Spectrum of a Hermitian matrix with eigenvalues ascending and
/// eigenvectors stored as the columns of `vectors`.
#[derive(Debug, Clone)]
pub struct HermitianEigen<T: Real> {
    pub values: Vec<T>,
    pub vectors: Matrix<T>,
}

impl<T: Real> HermitianEigen<T> {
    pub fn vector(&self, k: usize) -> Vec<Cx<T>> {
        self.vectors.column(k)
    }

    pub fn min(&self) -> T {
        self.values.first().copied().unwrap_or_else(T::zero)
    }

    pub fn max(&self) -> T {
        self.values.last().copied().unwrap_or_else(T::zero)
    }
}

/// Cyclic complex Jacobi diagonalization. Only the Hermitian part
/// `(m + m†)/2` is used; callers validate hermiticity beforehand.
pub fn hermitian_eigen<T: Real>(m: &Matrix<T>) -> HermitianEigen<T> {
    jacobi(m, true)
}

/// Eigenvalues only, ascending.
pub fn hermitian_eigenvalues<T: Real>(m: &Matrix<T>) -> Vec<T> {
    jacobi(m, false).values
}

fn jacobi<T: Real>(m: &Matrix<T>, want_vectors: bool) -> HermitianEigen<T> {
    assert!(m.is_square(), "eigen-decomposition needs a square matrix");
    let n = m.rows();
    let half = T::from_f64_lossy(0.5);
    let mut a: Vec<Cx<T>> = vec![Cx::new(T::zero(), T::zero()); n * n];
    for i in 0..n {
        for j in 0..n {
            a[i * n + j] = (m[(i, j)] + m[(j, i)].conj()) * half;
        }
        a[i * n + i].im = T::zero();
    }
    let mut v = if want_vectors {
        Matrix::identity(n).entries().to_vec()
    } else {
        Vec::new()
    };

    let eps = T::epsilon();
    let norm = a.iter().fold(T::zero(), |s, z| s + z.norm_sqr()).sqrt();
    if norm > T::zero() {
        for sweep in 0..MAX_SWEEPS {
            let mut off = T::zero();
            for p in 0..n {
                for q in (p + 1)..n {
                    off += a[p * n + q].norm_sqr();
                }
            }
            if off.sqrt() <= eps * norm * half {
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    rotate(&mut a, &mut v, n, p, q, sweep, want_vectors);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<T> = (0..n).map(|i| a[i * n + i].re).collect();
    order.sort_by(|&x, &y| diag[x].partial_cmp(&diag[y]).unwrap_or(std::cmp::Ordering::Equal));
    let values = order.iter().map(|&k| diag[k]).collect();
    let vectors = if want_vectors {
        Matrix::from_fn(n, n, |i, k| v[i * n + order[k]])
    } else {
        Matrix::zeros(0, 0)
    };
    HermitianEigen { values, vectors }
}

#[inline]
fn rotate<T: Real>(
    a: &mut [Cx<T>],
    v: &mut [Cx<T>],
    n: usize,
    p: usize,
    q: usize,
    sweep: usize,
    want_vectors: bool,
) {
    let apq = a[p * n + q];
    let g = apq.norm();
    if g == T::zero() {
        return;
    }
    let app = a[p * n + p].re;
    let aqq = a[q * n + q].re;
    let hundred = T::from_f64_lossy(100.0);
    if sweep > 3 && app.abs() + hundred * g == app.abs() && aqq.abs() + hundred * g == aqq.abs() {
        a[p * n + q] = cx(T::zero(), T::zero());
        a[q * n + p] = cx(T::zero(), T::zero());
        return;
    }
    let e = apq / g;
    let ec = e.conj();
    let two = T::one() + T::one();
    let theta = (aqq - app) / (two * g);
    let t = if theta.abs() > T::from_f64_lossy(1e150) {
        T::one() / (two * theta)
    } else {
        let s = if theta >= T::zero() { T::one() } else { -T::one() };
        s / (theta.abs() + (theta * theta + T::one()).sqrt())
    };
    let c = T::one() / (t * t + T::one()).sqrt();
    let s = t * c;

    // G = diag(1, ē)·[[c, s], [−s, c]]; A ← G†·A·G, V ← V·G.
    for k in 0..n {
        let x = a[k * n + p];
        let y = a[k * n + q];
        a[k * n + p] = x * c - y * ec * s;
        a[k * n + q] = x * s + y * ec * c;
    }
    for k in 0..n {
        let x = a[p * n + k];
        let y = a[q * n + k];
        a[p * n + k] = x * c - y * e * s;
        a[q * n + k] = x * s + y * e * c;
    }
    a[p * n + q] = cx(T::zero(), T::zero());
    a[q * n + p] = cx(T::zero(), T::zero());
    a[p * n + p].im = T::zero();
    a[q * n + q].im = T::zero();
    if want_vectors {
        for k in 0..n {
            let x = v[k * n + p];
            let y = v[k * n + q];
            v[k * n + p] = x * c - y * ec * s;
            v[k * n + q] = x * s + y * ec * c;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::czero;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_hermitian(n: usize, seed: u64) -> Matrix<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = cx(rng.random_range(-1.0..1.0), 0.0);
            for j in (i + 1)..n {
                let z = cx(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                m[(i, j)] = z;
                m[(j, i)] = z.conj();
            }
        }
        m
    }

    #[test]
    fn diagonal_input() {
        let m = Matrix::diagonal(&[3.0, -2.0, 0.0, 1.0]);
        assert_eq!(hermitian_eigenvalues(&m), vec![-2.0, 0.0, 1.0, 3.0]);
    }

    #[test]
    fn reconstructs_random_hermitian() {
        for (n, seed) in [(1, 1), (2, 2), (5, 3), (16, 4), (25, 5)] {
            let m = random_hermitian(n, seed);
            let eig = hermitian_eigen(&m);
            let d = Matrix::diagonal(&eig.values);
            let r = &(&eig.vectors * &d) * &eig.vectors.adjoint();
            assert!(r.max_abs_diff(&m) < 1e-12, "n={n}");
            let u = &eig.vectors.adjoint() * &eig.vectors;
            assert!(u.max_abs_diff(&Matrix::identity(n)) < 1e-12);
            assert!(eig.values.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn pauli_y_spectrum() {
        let m = Matrix::<f64>::from_vec(2, 2, vec![czero(), cx(0.0, -1.0), cx(0.0, 1.0), czero()]).unwrap();
        let ev = hermitian_eigenvalues(&m);
        assert!((ev[0] + 1.0).abs() < 1e-15 && (ev[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn works_in_single_precision() {
        let m = random_hermitian(6, 9);
        let m32 = Matrix::<f32>::from_fn(6, 6, |i, j| cx(m[(i, j)].re as f32, m[(i, j)].im as f32));
        let ev64 = hermitian_eigenvalues(&m);
        let ev32 = hermitian_eigenvalues(&m32);
        for (a, b) in ev64.iter().zip(&ev32) {
            assert!((a - *b as f64).abs() < 1e-5);
        }
    }
}
