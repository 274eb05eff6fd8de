use super::{canonical_witness, Provenance, Witness};
use crate::combinatorics::Combination;
use crate::densemat::Matrix;
use crate::error::{Error, Result};
use crate::BipartiteOperator;

/// Canonical `d1⊗d1` witness placed on the combination-selected subspace
/// of the second factor; rows and columns touching the rest are zero.
pub fn embedded_witness(d1: usize, d2: usize, combo: &[usize], lambdas: &[f64]) -> Result<Witness> {
    if d1 > d2 {
        return Err(Error::InvalidCombination(format!("need d1 <= d2, got {d1} > {d2}")));
    }
    let c = Combination::new(d2, combo.to_vec())?;
    if c.d1() != d1 {
        return Err(Error::InvalidCombination(format!(
            "combination has {} indices, expected {d1}",
            c.d1()
        )));
    }
    let base = canonical_witness(d1, lambdas)?;
    let m = d1 * d2;
    let mut out = Matrix::zeros(m, m);
    for i in 0..d1 {
        for j in 0..d1 {
            for k in 0..d1 {
                for l in 0..d1 {
                    out[(i * d2 + c.label(j), k * d2 + c.label(l))] = base.op().get((i, j), (k, l));
                }
            }
        }
    }
    Ok(Witness::new(
        BipartiteOperator::new(d1, d2, out)?,
        Provenance::Embedded {
            d1,
            d2,
            combo: combo.to_vec(),
            lambdas: lambdas.to_vec(),
        },
    ))
}
