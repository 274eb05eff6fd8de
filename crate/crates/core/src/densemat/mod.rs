//! Dense complex operator algebra on bipartite spaces.

mod bipartite;
mod eigen;
mod matrix;

pub use bipartite::{expectation, min_eigenvalue, partial_transpose, trace_product, BipartiteOperator, Subsystem};
pub use eigen::{hermitian_eigen, hermitian_eigenvalues, HermitianEigen};
pub use matrix::{kron, kron_vec, Matrix, RealMatrix};

mod serde_impl {
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use super::{Matrix, RealMatrix};
    use crate::scalar::{cx, Real};

    #[derive(Serialize, Deserialize)]
    struct MatrixRepr<T> {
        rows: usize,
        cols: usize,
        re: Vec<T>,
        im: Vec<T>,
    }

    impl<T: Real + Serialize> Serialize for Matrix<T> {
        fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
            MatrixRepr {
                rows: self.rows(),
                cols: self.cols(),
                re: self.entries().iter().map(|z| z.re).collect(),
                im: self.entries().iter().map(|z| z.im).collect(),
            }
            .serialize(s)
        }
    }

    impl<'de, T: Real + Deserialize<'de>> Deserialize<'de> for Matrix<T> {
        fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
            let r = MatrixRepr::<T>::deserialize(d)?;
            if r.re.len() != r.im.len() {
                return Err(D::Error::custom("re and im arrays differ in length"));
            }
            let data = r.re.iter().zip(&r.im).map(|(&a, &b)| cx(a, b)).collect();
            Matrix::from_vec(r.rows, r.cols, data).map_err(D::Error::custom)
        }
    }

    #[derive(Serialize, Deserialize)]
    struct RealRepr<T> {
        rows: usize,
        cols: usize,
        data: Vec<T>,
    }

    impl<T: Real + Serialize> Serialize for RealMatrix<T> {
        fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
            RealRepr {
                rows: self.rows(),
                cols: self.cols(),
                data: self.entries().to_vec(),
            }
            .serialize(s)
        }
    }

    impl<'de, T: Real + Deserialize<'de>> Deserialize<'de> for RealMatrix<T> {
        fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
            let r = RealRepr::<T>::deserialize(d)?;
            RealMatrix::from_vec(r.rows, r.cols, r.data).map_err(D::Error::custom)
        }
    }
}
