//! Parametric PPT state families, their positivity and PPT conditions, the
//! saturating boundary members and the lower bounds they imply.

mod embedded;
mod extended;
mod family;
mod layout;
mod partition;
pub mod sampling;

pub use embedded::{
    build_embedded_state, check_embedded_conditions, embedded_boundary_params, EmbeddedParams,
};
pub use extended::{
    build_extended_state, check_extended_conditions, extended_boundary_params, ExtendedParams,
};
pub use family::{boundary_params, boundary_state, build_family_state, check_conditions, PptFamilyParams};
pub use partition::{
    build_partition_state, check_partition_conditions, partition_boundary_params, PartitionParams,
};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::combinatorics::Partition;
use crate::error::{Error, Result};

/// Sparse nonnegative coefficients indexed by an ordered pair `(x, y)`.
/// Absent pairs read as zero. Serialized as `{"x,y": value}`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BTreeMap<String, f64>", into = "BTreeMap<String, f64>")]
pub struct PairMap(BTreeMap<(usize, usize), f64>);

impl PairMap {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.0.get(&(x, y)).copied().unwrap_or(0.0)
    }

    pub fn set(&mut self, x: usize, y: usize, v: f64) {
        self.0.insert((x, y), v);
    }

    pub fn iter(&self) -> impl Iterator<Item = ((usize, usize), f64)> + '_ {
        self.0.iter().map(|(&k, &v)| (k, v))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sum(&self) -> f64 {
        self.0.values().sum()
    }

    /// Every ordered off-diagonal pair of `0..d` set to `v`.
    pub fn off_diagonal(d: usize, v: f64) -> Self {
        let mut m = Self::new();
        for x in 0..d {
            for y in 0..d {
                if x != y {
                    m.set(x, y, v);
                }
            }
        }
        m
    }

    /// Checks that every key passes `allowed` and every value is finite and nonnegative.
    pub(crate) fn validate(&self, what: &str, allowed: impl Fn(usize, usize) -> bool) -> Result<()> {
        for ((x, y), v) in self.iter() {
            if !allowed(x, y) {
                return Err(Error::InvalidParams(format!("{what}: index pair ({x},{y}) is not part of the family")));
            }
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidParams(format!("{what}: coefficient ({x},{y}) = {v} must be finite and nonnegative")));
            }
        }
        Ok(())
    }
}

impl TryFrom<BTreeMap<String, f64>> for PairMap {
    type Error = String;

    fn try_from(raw: BTreeMap<String, f64>) -> std::result::Result<Self, String> {
        let mut out = PairMap::new();
        for (k, v) in raw {
            let (x, y) = k
                .split_once(',')
                .ok_or_else(|| format!("key {k:?} is not of the form \"i,j\""))?;
            let parse = |s: &str| s.trim().parse::<usize>().map_err(|e| format!("key {k:?}: {e}"));
            out.set(parse(x)?, parse(y)?, v);
        }
        Ok(out)
    }
}

impl From<PairMap> for BTreeMap<String, f64> {
    fn from(m: PairMap) -> Self {
        m.0.into_iter().map(|((x, y), v)| (format!("{x},{y}"), v)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConditionKind {
    Positivity,
    Ppt,
}

/// One evaluated inequality `lhs ≥ rhs`, with `margin = lhs − rhs`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Inequality {
    pub kind: ConditionKind,
    pub name: String,
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub positivity_ok: bool,
    pub ppt_ok: bool,
    /// Inequalities whose margin is below the slack.
    pub violated: Vec<Inequality>,
    /// Smallest margin over every evaluated inequality (`+∞` if none).
    pub min_margin: f64,
    pub evaluated: usize,
}

impl ConditionReport {
    /// Margins below `-SLACK·max(1, |rhs|)` count as violations, so exact
    /// saturation survives rounding in `δ·t · δ/t`.
    pub(crate) const SLACK: f64 = 1e-12;

    pub(crate) fn from_checks(checks: Vec<(Inequality, f64)>) -> Self {
        let evaluated = checks.len();
        let min_margin = checks.iter().map(|(q, _)| q.margin).fold(f64::INFINITY, f64::min);
        let violated: Vec<Inequality> = checks
            .into_iter()
            .filter(|(q, rhs)| q.margin < -Self::SLACK * rhs.abs().max(1.0))
            .map(|(q, _)| q)
            .collect();
        Self {
            positivity_ok: !violated.iter().any(|q| q.kind == ConditionKind::Positivity),
            ppt_ok: !violated.iter().any(|q| q.kind == ConditionKind::Ppt),
            violated,
            min_margin,
            evaluated,
        }
    }

    pub fn is_valid(&self) -> bool {
        self.positivity_ok && self.ppt_ok
    }

    /// Positivity holds but at least one PPT inequality fails.
    pub fn is_npt_only(&self) -> bool {
        self.positivity_ok && !self.ppt_ok
    }
}

pub(crate) fn check_a0(a0: f64) -> Result<()> {
    if !a0.is_finite() || a0 < 0.0 {
        return Err(Error::InvalidParams(format!("a0 = {a0} must be finite and nonnegative")));
    }
    Ok(())
}

/// Lower bound on `Tr(W_C ρ)` over the canonical PPT family with `n` blocks.
pub fn canonical_bound(d: usize, n: usize) -> f64 {
    let (d, n) = (d as f64, n as f64);
    -2.0 * n / (d + 4.0 * n * n + (d - 2.0 * n) * (d + 2.0 * n - 1.0))
}

/// Floor on `Tr(W_C ρ)` for positive family members violating a PPT inequality.
pub fn canonical_npt_floor(d: usize, n: usize) -> f64 {
    let (d, n) = (d as f64, n as f64);
    -(4.0 * n * (n - 1.0) + (d - 2.0 * n) * (d + 2.0 * n - 1.0)) / (d + 2.0 * n)
}

/// `Σ_ε 2μ(2μ+1) + 4μ(d − 2S_ε)`, `S_ε` the running part sum.
pub fn partition_denominator(d: usize, mu: &Partition) -> usize {
    let mut s = 0;
    mu.parts()
        .iter()
        .map(|&m| {
            s += m;
            2 * m * (2 * m + 1) + 4 * m * (d - 2 * s)
        })
        .sum()
}

pub fn partition_bound(d: usize, mu: &Partition) -> f64 {
    -(d as f64) / partition_denominator(d, mu) as f64
}

pub fn partition_npt_floor(d: usize, mu: &Partition) -> f64 {
    let mut s = 0;
    let num: usize = mu
        .parts()
        .iter()
        .map(|&m| {
            s += m;
            2 * m * (m - 1) + 2 * m * (d - 2 * s)
        })
        .sum();
    -(num as f64) / d as f64
}

/// Bound for the unnormalized extended family, `−4·n·a0` with `d = 4n`.
pub fn extended_bound(d: usize, a0: f64) -> f64 {
    -((d / 4) as f64) * 4.0 * a0
}
