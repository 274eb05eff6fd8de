use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};
use witnesskit::combinatorics::{Combination, Partition};
use witnesskit::pptstates::sampling::{draw_rng, sample_embedded, sample_extended, sample_family, sample_partition, SampleMode};
use witnesskit::pptstates::{
    boundary_params, build_embedded_state, build_extended_state, build_family_state, build_partition_state,
    check_conditions, check_embedded_conditions, check_extended_conditions, check_partition_conditions,
    embedded_boundary_params, extended_boundary_params, partition_boundary_params, ConditionReport, EmbeddedParams,
    ExtendedParams, PartitionParams, PptFamilyParams,
};
use witnesskit::witnesses::{canonical_witness_unit, embedded_witness, extended_witness, partition_witness, Witness};
use witnesskit::BipartiteOperator;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Canonical,
    Partition,
    Embedded,
    Extended,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Valid,
    Boundary,
    NptViolating,
}

impl From<Mode> for SampleMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Valid => SampleMode::Valid,
            Mode::Boundary => SampleMode::Boundary,
            Mode::NptViolating => SampleMode::NptViolating,
        }
    }
}


/// Dimensions selecting one member of a family.
#[derive(Debug, Clone, Args)]
pub struct FamilySpec {
    #[arg(long, value_enum)]
    pub family: Family,
    /// Local dimension (canonical, partition, extended).
    #[arg(long)]
    pub d: Option<usize>,
    /// Number of 2x2 blocks (canonical, embedded).
    #[arg(long)]
    pub n: Option<usize>,
    /// Partition of d/2, e.g. 2,1,1.
    #[arg(long, value_delimiter = ',')]
    pub mu: Option<Vec<usize>>,
    #[arg(long)]
    pub d2: Option<usize>,
    /// Selected indices of the second factor, e.g. 0,1,2,4.
    #[arg(long, value_delimiter = ',')]
    pub combo: Option<Vec<usize>>,
}

fn need<T: Copy>(v: Option<T>, flag: &str, family: Family) -> Result<T> {
    v.with_context(|| format!("--{flag} is required for the {family:?} family"))
}

impl FamilySpec {
    fn partition(&self) -> Result<Partition> {
        let mu = self.mu.clone().context("--mu is required for the partition family")?;
        Ok(Partition::new(mu)?)
    }

    fn combination(&self) -> Result<Combination> {
        let combo = self.combo.clone().context("--combo is required for the embedded family")?;
        let d2 = need(self.d2, "d2", self.family)?;
        Ok(Combination::new(d2, combo)?)
    }

    /// Draw `index` of the stream seeded by `seed`.
    pub fn sample(&self, mode: Mode, seed: u64, index: u64) -> Result<Params> {
        let m = mode.into();
        let rng = &mut draw_rng(seed, index);
        Ok(match self.family {
            Family::Canonical => {
                Params::Canonical(sample_family(need(self.d, "d", self.family)?, need(self.n, "n", self.family)?, m, rng)?)
            }
            Family::Partition => Params::Partition(sample_partition(need(self.d, "d", self.family)?, &self.partition()?, m, rng)?),
            Family::Embedded => Params::Embedded(sample_embedded(&self.combination()?, need(self.n, "n", self.family)?, m, rng)?),
            Family::Extended => Params::Extended(sample_extended(need(self.d, "d", self.family)?, m, rng)?),
        })
    }

    /// Saturating member with every coefficient equal to `a0`.
    pub fn boundary(&self, a0: f64) -> Result<Params> {
        Ok(match self.family {
            Family::Canonical => {
                Params::Canonical(boundary_params(need(self.d, "d", self.family)?, need(self.n, "n", self.family)?, a0)?)
            }
            Family::Partition => Params::Partition(partition_boundary_params(need(self.d, "d", self.family)?, &self.partition()?, a0)?),
            Family::Embedded => {
                let c = self.combination()?;
                Params::Embedded(embedded_boundary_params(c.d1(), c.d2(), need(self.n, "n", self.family)?, c.indices(), a0, a0)?)
            }
            Family::Extended => Params::Extended(extended_boundary_params(need(self.d, "d", self.family)?, a0)?),
        })
    }

    /// Reads explicit coefficients for this family.
    pub fn parse_params(&self, text: &str) -> Result<Params> {
        Ok(match self.family {
            Family::Canonical => Params::Canonical(serde_json::from_str(text)?),
            Family::Partition => Params::Partition(serde_json::from_str(text)?),
            Family::Embedded => Params::Embedded(serde_json::from_str(text)?),
            Family::Extended => Params::Extended(serde_json::from_str(text)?),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", content = "params", rename_all = "snake_case")]
pub enum Params {
    Canonical(PptFamilyParams),
    Partition(PartitionParams),
    Embedded(EmbeddedParams),
    Extended(ExtendedParams),
}

impl Params {
    pub fn build(&self, normalize: bool) -> Result<BipartiteOperator> {
        if !normalize && !matches!(self, Params::Extended(_)) {
            bail!("only the extended family can be emitted unnormalized");
        }
        Ok(match self {
            Params::Canonical(p) => build_family_state(p)?,
            Params::Partition(p) => build_partition_state(p)?,
            Params::Embedded(p) => build_embedded_state(p)?,
            Params::Extended(p) => build_extended_state(p, normalize)?,
        })
    }

    pub fn conditions(&self) -> Result<ConditionReport> {
        Ok(match self {
            Params::Canonical(p) => check_conditions(p),
            Params::Partition(p) => check_partition_conditions(p)?,
            Params::Embedded(p) => check_embedded_conditions(p),
            Params::Extended(p) => check_extended_conditions(p),
        })
    }

    /// The witness the family is designed against.
    pub fn witness(&self) -> Result<Witness> {
        Ok(match self {
            Params::Canonical(p) => canonical_witness_unit(p.d, p.n)?,
            Params::Partition(p) => partition_witness(p.d, &p.mu)?,
            Params::Embedded(p) => embedded_witness(p.d1(), p.d2, &p.combo, &vec![1.0; p.inner.n])?,
            Params::Extended(p) => extended_witness(p.d)?,
        })
    }
}

/// `Some(true)` when every inequality holds, `Some(false)` when only the
/// positivity ones do, `None` otherwise.
pub fn conditions_held(r: &ConditionReport) -> Option<bool> {
    if r.is_valid() {
        Some(true)
    } else if r.is_npt_only() {
        Some(false)
    } else {
        None
    }
}
