//! Witness constructions generated by skew-symmetric matrices.

mod canonical;
mod embedded;
mod extended;
mod map;
pub(crate) mod partition;

use serde::{Deserialize, Serialize};

use crate::densemat::{Matrix, RealMatrix};
use crate::error::{Error, Result};
use crate::{BipartiteOperator, ComplexMatrix};

pub use canonical::{
    canonical_witness, canonical_witness_expanded, canonical_witness_unit, conjugated_witness,
    max_entangled, opc_witness, reduction_witness, split_canonical, witness_from_u, ConjugationMode,
    WitnessSplit,
};
pub use embedded::embedded_witness;
pub use extended::{extended_split, extended_witness, ExtendedSplit};
pub use map::{jamiolkowski_apply, jamiolkowski_closed_form};
pub use partition::{partition_witness, partition_witness_blocks};

/// How a witness was built; enough to rebuild it and to pick its bounds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    /// Generated by an arbitrary skew matrix `U`.
    FromU {
        d: usize,
        u: crate::skewcanon::SkewMatrix<f64>,
        lambdas: Vec<f64>,
    },
    /// Canonical witness with invariant factors `lambdas` (empty = reduction witness).
    Canonical { d: usize, lambdas: Vec<f64> },
    /// Orthogonally conjugated canonical witness.
    Conjugated {
        d: usize,
        lambdas: Vec<f64>,
        q: RealMatrix<f64>,
        mode: ConjugationMode,
    },
    /// Witness attached to a partition of `d/2`.
    Partition {
        d: usize,
        mu: crate::combinatorics::Partition,
    },
    /// Canonical `d1⊗d1` witness placed on a subspace of the second factor.
    Embedded {
        d1: usize,
        d2: usize,
        combo: Vec<usize>,
        lambdas: Vec<f64>,
    },
    /// Witness with three anticommuting generators.
    Extended { d: usize },
    /// Optimal core supported on the `2n⊗2n` corner.
    Opc { d: usize, n: usize },
    /// `base − epsilon·I`.
    Shifted { base: Box<Provenance>, epsilon: f64 },
}

impl Provenance {
    pub fn label(&self) -> &'static str {
        match self {
            Self::FromU { .. } => "from_u",
            Self::Canonical { .. } => "canonical",
            Self::Conjugated { .. } => "conjugated",
            Self::Partition { .. } => "partition",
            Self::Embedded { .. } => "embedded",
            Self::Extended { .. } => "extended",
            Self::Opc { .. } => "opc",
            Self::Shifted { .. } => "shifted",
        }
    }
}

/// Hermitian operator together with its construction record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    #[serde(flatten)]
    op: BipartiteOperator,
    provenance: Provenance,
    #[serde(skip)]
    certified: bool,
}

impl Witness {
    pub(crate) fn new(op: BipartiteOperator, provenance: Provenance) -> Self {
        Self {
            op,
            provenance,
            certified: false,
        }
    }

    /// Wraps an arbitrary Hermitian operator, e.g. one read back from disk.
    pub fn from_parts(op: BipartiteOperator, provenance: Provenance) -> Result<Self> {
        op.ensure_hermitian(1e-12)?;
        Ok(Self::new(op, provenance))
    }

    pub fn op(&self) -> &BipartiteOperator {
        &self.op
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn is_certified(&self) -> bool {
        self.certified
    }

    pub(crate) fn set_certified(&mut self, v: bool) {
        self.certified = v;
    }

    pub fn d1(&self) -> usize {
        self.op.d1()
    }

    pub fn d2(&self) -> usize {
        self.op.d2()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        self.op.matrix()
    }

    /// `W − ε·I`, used as a negative control for certification.
    pub fn shifted(&self, epsilon: f64) -> Self {
        let id = BipartiteOperator::identity(self.d1(), self.d2());
        let op = self.op.sub(&id.scale(epsilon)).expect("same shape");
        Self::new(
            op,
            Provenance::Shifted {
                base: Box::new(self.provenance.clone()),
                epsilon,
            },
        )
    }
}

pub(crate) fn check_lambdas(lambdas: &[f64], d: usize) -> Result<()> {
    if 2 * lambdas.len() > d {
        return Err(Error::TooManyBlocks {
            blocks: lambdas.len(),
            dim: d,
        });
    }
    match lambdas.iter().find(|l| !(0.0..=1.0).contains(*l)) {
        Some(&value) => Err(Error::LambdaOutOfRange { value }),
        None => Ok(()),
    }
}

/// `Σ_{ij}|ii⟩⟨jj|`, i.e. `d·|ψ⟩⟨ψ|` without rounding.
pub(crate) fn unnormalized_bell(d: usize) -> ComplexMatrix {
    let mut m = Matrix::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            m[(i * d + i, j * d + j)] = crate::scalar::cone();
        }
    }
    m
}

/// `I − Φ − Σ_G (Gᵀ⊗I)·Φ^{T_A}·(G⊗I)` assembled with explicit Kronecker
/// products and a partial transpose.
pub(crate) fn generator_operator(d: usize, gens: &[&RealMatrix<f64>]) -> BipartiteOperator {
    use crate::densemat::{kron, Subsystem};
    let phi = BipartiteOperator::new(d, d, unnormalized_bell(d)).expect("square");
    let phi_ta = phi.partial_transpose(Subsystem::A);
    let id = ComplexMatrix::identity(d);
    let mut w = &ComplexMatrix::identity(d * d) - phi.matrix();
    for g in gens {
        let gc = g.to_complex();
        let left = kron(&gc.transpose(), &id);
        let right = kron(&gc, &id);
        let term = &(&left * phi_ta.matrix()) * &right;
        w = &w - &term;
    }
    BipartiteOperator::new(d, d, w).expect("square")
}
