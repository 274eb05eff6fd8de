//! Entanglement witnesses generated by real skew-symmetric matrices, the
//! PPT state families they detect, and numerical certification of both.
//!
//! The dense algebra (`densemat`) and skew-symmetric canonical forms
//! (`skewcanon`) are generic over [`Real`]; everything built on top uses
//! `f64`, exposed through the aliases below.

pub mod combinatorics;
pub mod config;
pub mod densemat;
pub mod error;
pub mod pptstates;
pub mod scalar;
pub mod skewcanon;
pub mod verify;
pub mod witnesses;

pub use config::Tolerances;
pub use error::{Error, Result};
pub use scalar::{Cx, Real};

/// Double-precision complex scalar.
pub type C64 = Cx<f64>;
pub type ComplexMatrix = densemat::Matrix<f64>;
pub type RealMatrix = densemat::RealMatrix<f64>;
pub type BipartiteOperator = densemat::BipartiteOperator<f64>;
pub type SkewMatrix = skewcanon::SkewMatrix<f64>;
pub type CanonicalForm = skewcanon::CanonicalForm<f64>;
pub type JTriple = skewcanon::JTriple<f64>;

/// Crate version embedded in reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
