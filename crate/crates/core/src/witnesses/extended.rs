use super::{canonical_witness, generator_operator, unnormalized_bell, Provenance, Witness};
use crate::densemat::{kron, Subsystem};
use crate::error::Result;
use crate::skewcanon::{build_j_triple, SkewMatrix};
use crate::{BipartiteOperator, ComplexMatrix};

/// Witness with the three anticommuting generators `J`, `J′`, `J″`.
pub fn extended_witness(d: usize) -> Result<Witness> {
    let t = build_j_triple::<f64>(d)?;
    let op = generator_operator(d, &[t.j.matrix(), t.jp.matrix(), t.jpp.matrix()]);
    Ok(Witness::new(op, Provenance::Extended { d }))
}

/// Relation between the extended witness and the canonical witness of `J`:
/// `w_c = w + d1_ta + d2_ta`.
#[derive(Debug, Clone)]
pub struct ExtendedSplit {
    pub w: Witness,
    pub w_c: Witness,
    pub d1_ta: BipartiteOperator,
    pub d2_ta: BipartiteOperator,
}

impl ExtendedSplit {
    /// Largest entrywise deviation of `w + d1_ta + d2_ta` from `w_c`.
    pub fn reconstruction_error(&self) -> f64 {
        let sum = self
            .w
            .op()
            .add(&self.d1_ta)
            .and_then(|s| s.add(&self.d2_ta))
            .expect("same shape");
        sum.matrix().max_abs_diff(self.w_c.matrix())
    }
}

/// `(Kᵀ⊗I)·d|ψ⟩⟨ψ|^{T_A}·(K⊗I)`.
fn generator_term(d: usize, k: &SkewMatrix<f64>) -> BipartiteOperator {
    let id = ComplexMatrix::identity(d);
    let phi = BipartiteOperator::new(d, d, unnormalized_bell(d)).expect("square");
    let swap = phi.partial_transpose(Subsystem::A);
    let kc = k.to_complex();
    let m = &(&kron(&kc.transpose(), &id) * swap.matrix()) * &kron(&kc, &id);
    BipartiteOperator::new(d, d, m).expect("square")
}

pub fn extended_split(d: usize) -> Result<ExtendedSplit> {
    let t = build_j_triple::<f64>(d)?;
    let w = extended_witness(d)?;
    let w_c = canonical_witness(d, &vec![1.0; 2 * (d / 4)])?;
    Ok(ExtendedSplit {
        w,
        w_c,
        d1_ta: generator_term(d, &t.jp),
        d2_ta: generator_term(d, &t.jpp),
    })
}
