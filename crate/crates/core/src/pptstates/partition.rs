use serde::{Deserialize, Serialize};

use super::layout::CycleLayout;
use super::{ConditionReport, PairMap};
use crate::combinatorics::Partition;
use crate::error::{Error, Result};
use crate::witnesses::partition::check_partition;
use crate::BipartiteOperator;

/// Coefficients of the PPT family attached to a partition of `d/2`.
/// `c` has one entry per index pair; entries of single-pair parts must be 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartitionParams {
    pub d: usize,
    pub mu: Partition,
    pub a0: f64,
    pub a: PairMap,
    pub c: Vec<f64>,
}

pub(crate) fn partition_layout(d: usize, mu: &Partition) -> Result<CycleLayout> {
    check_partition(d, mu)?;
    Ok(CycleLayout { d, blocks: mu.block_ranges() })
}

impl PartitionParams {
    pub fn validate(&self) -> Result<()> {
        partition_layout(self.d, &self.mu)?.validate("partition", self.a0, &self.a, &self.c)
    }
}

/// Unit-trace member of the partition family.
pub fn build_partition_state(p: &PartitionParams) -> Result<BipartiteOperator> {
    p.validate()?;
    partition_layout(p.d, &p.mu)?.normalized(p.a0, &p.a, &p.c)
}

/// Positivity (nonnegativity and the in-block `C` cycle) and PPT
/// (within-block, `C` cycle, cross-block) inequalities.
pub fn check_partition_conditions(p: &PartitionParams) -> Result<ConditionReport> {
    let layout = partition_layout(p.d, &p.mu)?;
    if p.c.len() != layout.npairs() {
        return Err(Error::InvalidParams(format!("expected {} C coefficients", layout.npairs())));
    }
    let names = layout.clone();
    Ok(layout.check(p.a0, &p.a, &p.c, move |x, y| names.block_name(x, y)))
}

pub fn partition_boundary_params(d: usize, mu: &Partition, a0: f64) -> Result<PartitionParams> {
    if !(a0 > 0.0) || !a0.is_finite() {
        return Err(Error::InvalidParams(format!("a0 must be positive, got {a0}")));
    }
    let (a, c) = partition_layout(d, mu)?.boundary(a0);
    Ok(PartitionParams { d, mu: mu.clone(), a0, a, c })
}
