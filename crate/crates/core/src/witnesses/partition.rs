use super::canonical::{add_cross, add_opc_block};
use super::{generator_operator, Provenance, Witness};
use crate::combinatorics::Partition;
use crate::densemat::RealMatrix;
use crate::error::{Error, Result};
use crate::BipartiteOperator;

pub(crate) fn check_partition(d: usize, mu: &Partition) -> Result<()> {
    if d == 0 || !d.is_multiple_of(2) {
        return Err(Error::InvalidPartition(format!("dimension {d} must be even and positive")));
    }
    if mu.total() != d / 2 {
        return Err(Error::InvalidPartition(format!("{mu} does not sum to d/2 = {}", d / 2)));
    }
    Ok(())
}

/// One full-rank unit generator per part, supported on its own 2μ-dimensional block.
fn part_generators(d: usize, mu: &Partition) -> Vec<RealMatrix<f64>> {
    mu.block_ranges()
        .into_iter()
        .map(|r| {
            let mut u = RealMatrix::zeros(d, d);
            for i in r {
                u[(2 * i, 2 * i + 1)] = 1.0;
                u[(2 * i + 1, 2 * i)] = -1.0;
            }
            u
        })
        .collect()
}

/// Witness for a partition of `d/2`: one generator term per part.
pub fn partition_witness(d: usize, mu: &Partition) -> Result<Witness> {
    check_partition(d, mu)?;
    let gens = part_generators(d, mu);
    let refs: Vec<&RealMatrix<f64>> = gens.iter().collect();
    let op = generator_operator(d, &refs);
    Ok(Witness::new(op, Provenance::Partition { d, mu: mu.clone() }))
}

/// Same operator assembled as a direct sum of per-part cores plus the
/// decomposable cross terms between each part and all later ones.
pub fn partition_witness_blocks(d: usize, mu: &Partition) -> Result<BipartiteOperator> {
    check_partition(d, mu)?;
    let mut op = BipartiteOperator::zeros(d, d);
    let ranges = mu.block_ranges();
    for r in &ranges {
        add_opc_block(&mut op, r.clone(), |_| 1.0);
    }
    for r in &ranges {
        for i in r.clone() {
            for j in r.end..d / 2 {
                for x in [2 * i, 2 * i + 1] {
                    for y in [2 * j, 2 * j + 1] {
                        add_cross(&mut op, x, y);
                    }
                }
            }
        }
    }
    Ok(op)
}
