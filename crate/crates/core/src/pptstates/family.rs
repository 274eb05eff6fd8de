use serde::{Deserialize, Serialize};

use super::layout::CycleLayout;
use super::{ConditionReport, PairMap};
use crate::error::{Error, Result};
use crate::BipartiteOperator;

/// Coefficients of the canonical PPT family on `d⊗d` with `n ≥ 2` blocks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PptFamilyParams {
    pub d: usize,
    pub n: usize,
    pub a0: f64,
    pub a: PairMap,
    pub c: Vec<f64>,
}

pub(crate) fn family_layout(d: usize, n: usize) -> Result<CycleLayout> {
    if n < 2 || 2 * n > d {
        return Err(Error::InvalidParams(format!("need 2 <= n and 2n <= d, got d={d}, n={n}")));
    }
    Ok(CycleLayout { d, blocks: vec![0..n] })
}

pub(crate) fn family_name(n: usize) -> impl Fn(usize, usize) -> String {
    move |x, y| {
        let m = 2 * n;
        let parity = |v: usize| if v.is_multiple_of(2) { "even" } else { "odd" };
        match (x < m, y < m) {
            (true, true) if x % 2 == y % 2 => format!("{0}_{0}", parity(x)),
            (true, true) => "even_odd".into(),
            (true, false) => format!("{}_complement", parity(x)),
            (false, true) => format!("{}_complement", parity(y)),
            (false, false) => "complement".into(),
        }
    }
}

impl PptFamilyParams {
    pub fn validate(&self) -> Result<()> {
        family_layout(self.d, self.n)?.validate("family", self.a0, &self.a, &self.c)
    }

    /// `Tr` of the unnormalized operator.
    pub fn normalization(&self) -> f64 {
        (self.d + 2 * self.n) as f64 * self.a0 + self.a.sum()
    }
}

/// Unit-trace member of the canonical family.
pub fn build_family_state(p: &PptFamilyParams) -> Result<BipartiteOperator> {
    p.validate()?;
    family_layout(p.d, p.n)?.normalized(p.a0, &p.a, &p.c)
}

/// Evaluates every positivity and PPT inequality of the family.
pub fn check_conditions(p: &PptFamilyParams) -> ConditionReport {
    let layout = CycleLayout { d: p.d, blocks: vec![0..p.n] };
    layout.check(p.a0, &p.a, &p.c, family_name(p.n))
}

/// All coefficients equal to `a0`: every inequality holds with equality.
pub fn boundary_params(d: usize, n: usize, a0: f64) -> Result<PptFamilyParams> {
    if !(a0 > 0.0) || !a0.is_finite() {
        return Err(Error::InvalidParams(format!("a0 must be positive, got {a0}")));
    }
    let (a, c) = family_layout(d, n)?.boundary(a0);
    Ok(PptFamilyParams { d, n, a0, a, c })
}

pub fn boundary_state(d: usize, n: usize, a0: f64) -> Result<BipartiteOperator> {
    build_family_state(&boundary_params(d, n, a0)?)
}
