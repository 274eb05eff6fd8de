//! Shared engine for the families whose entangling part is a cycle of
//! `C`-couplings inside blocks of index pairs `(2i, 2i+1)`.

use std::ops::Range;

use super::{ConditionKind, ConditionReport, Inequality, PairMap};
use crate::error::{Error, Result};
use crate::BipartiteOperator;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Rhs {
    A0Squared,
    C(usize),
}

/// `a[lhs.0] · a[lhs.1] ≥ rhs²`.
#[derive(Debug, Clone)]
pub(crate) struct ProductConstraint {
    pub kind: ConditionKind,
    pub name: String,
    pub lhs: [(usize, usize); 2],
    pub rhs: Rhs,
}

pub(crate) fn evaluate(
    constraints: &[ProductConstraint],
    nonneg: impl Iterator<Item = (String, f64)>,
    a0: f64,
    a: impl Fn(usize, usize) -> f64,
    c: &[f64],
) -> ConditionReport {
    let mut checks: Vec<(Inequality, f64)> = Vec::new();
    for (name, v) in nonneg {
        checks.push((Inequality { kind: ConditionKind::Positivity, name, margin: v }, 0.0));
    }
    for k in constraints {
        let lhs = a(k.lhs[0].0, k.lhs[0].1) * a(k.lhs[1].0, k.lhs[1].1);
        let r = match k.rhs {
            Rhs::A0Squared => a0 * a0,
            Rhs::C(i) => c[i] * c[i],
        };
        checks.push((Inequality { kind: k.kind, name: k.name.clone(), margin: lhs - r }, r));
    }
    ConditionReport::from_checks(checks)
}

/// Pair blocks of the first `2·npairs` indices; indices from `2·npairs`
/// to `d` form the complement.
#[derive(Debug, Clone)]
pub(crate) struct CycleLayout {
    pub d: usize,
    pub blocks: Vec<Range<usize>>,
}

impl CycleLayout {
    pub fn npairs(&self) -> usize {
        self.blocks.last().map_or(0, |r| r.end)
    }

    fn block_of(&self, pair: usize) -> Option<usize> {
        self.blocks.iter().position(|r| r.contains(&pair))
    }

    /// `(i, next(i))` for every pair in a block of at least two pairs.
    pub fn links(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for r in &self.blocks {
            let m = r.len();
            if m < 2 {
                continue;
            }
            for i in r.clone() {
                out.push((i, r.start + (i - r.start + 1) % m));
            }
        }
        out
    }

    pub fn has_link(&self, i: usize) -> bool {
        self.block_of(i).is_some_and(|b| self.blocks[b].len() >= 2)
    }

    fn is_pair_internal(&self, x: usize, y: usize) -> bool {
        let (lo, hi) = (x.min(y), x.max(y));
        lo % 2 == 0 && hi == lo + 1 && hi < 2 * self.npairs()
    }

    /// Unnormalized operator: `a0·Φ`, the pair terms, the `C` couplings and
    /// the diagonal `a` terms.
    pub fn assemble(&self, a0: f64, a: &PairMap, c: &[f64]) -> BipartiteOperator {
        let d = self.d;
        let mut op = BipartiteOperator::zeros(d, d);
        for x in 0..d {
            for y in 0..d {
                op.add_to((x, x), (y, y), a0);
            }
        }
        for i in 0..self.npairs() {
            let (e, o) = (2 * i, 2 * i + 1);
            op.add_to((e, e), (e, e), a0);
            op.add_to((o, o), (o, o), a0);
            op.add_to((e, e), (o, o), -a0);
            op.add_to((o, o), (e, e), -a0);
        }
        for (i, nx) in self.links() {
            let p = (2 * nx, 2 * i);
            let q = (2 * i + 1, 2 * nx + 1);
            op.add_to(p, q, -c[i]);
            op.add_to(q, p, -c[i]);
        }
        for ((x, y), v) in a.iter() {
            op.add_to((x, y), (x, y), v);
        }
        op
    }

    pub fn normalized(&self, a0: f64, a: &PairMap, c: &[f64]) -> Result<BipartiteOperator> {
        let op = self.assemble(a0, a, c);
        let n = op.trace();
        if !(n > 0.0) {
            return Err(Error::InvalidParams(format!("normalization {n} is not positive")));
        }
        Ok(op.scale(1.0 / n))
    }

    pub fn validate(&self, what: &str, a0: f64, a: &PairMap, c: &[f64]) -> Result<()> {
        super::check_a0(a0)?;
        if c.len() != self.npairs() {
            return Err(Error::InvalidParams(format!(
                "{what}: expected {} C coefficients, got {}",
                self.npairs(),
                c.len()
            )));
        }
        for (i, &ci) in c.iter().enumerate() {
            if !ci.is_finite() || ci < 0.0 {
                return Err(Error::InvalidParams(format!("{what}: C_{i} = {ci} must be finite and nonnegative")));
            }
            if !self.has_link(i) && ci != 0.0 {
                return Err(Error::InvalidParams(format!("{what}: C_{i} belongs to a single-pair block and must be 0")));
            }
        }
        let d = self.d;
        a.validate(what, |x, y| x != y && x < d && y < d)
    }

    /// Every inequality, named with `classify(x, y)` for the symmetric ones.
    pub fn constraints(&self, classify: impl Fn(usize, usize) -> String) -> Vec<ProductConstraint> {
        let mut out = Vec::new();
        for (i, nx) in self.links() {
            out.push(ProductConstraint {
                kind: ConditionKind::Positivity,
                name: format!("c_cycle({i})"),
                lhs: [(2 * i + 1, 2 * nx + 1), (2 * nx, 2 * i)],
                rhs: Rhs::C(i),
            });
        }
        for (i, nx) in self.links() {
            out.push(ProductConstraint {
                kind: ConditionKind::Ppt,
                name: format!("c_cycle({i})"),
                lhs: [(2 * i + 1, 2 * i), (2 * nx, 2 * nx + 1)],
                rhs: Rhs::C(i),
            });
        }
        for x in 0..self.d {
            for y in x + 1..self.d {
                if self.is_pair_internal(x, y) {
                    continue;
                }
                out.push(ProductConstraint {
                    kind: ConditionKind::Ppt,
                    name: format!("{}({x},{y})", classify(x, y)),
                    lhs: [(x, y), (y, x)],
                    rhs: Rhs::A0Squared,
                });
            }
        }
        out
    }

    pub fn check(&self, a0: f64, a: &PairMap, c: &[f64], classify: impl Fn(usize, usize) -> String) -> ConditionReport {
        let mut nonneg = vec![("nonnegative(a0)".to_string(), a0)];
        nonneg.extend(a.iter().map(|((x, y), v)| (format!("nonnegative({x},{y})"), v)));
        nonneg.extend(c.iter().enumerate().map(|(i, &v)| (format!("nonnegative(C_{i})"), v)));
        evaluate(&self.constraints(classify), nonneg.into_iter(), a0, |x, y| a.get(x, y), c)
    }

    /// Every `a` equal to `a0` and every linked `C` equal to `a0`.
    pub fn boundary(&self, a0: f64) -> (PairMap, Vec<f64>) {
        let c = (0..self.npairs()).map(|i| if self.has_link(i) { a0 } else { 0.0 }).collect();
        (PairMap::off_diagonal(self.d, a0), c)
    }

    pub fn block_name(&self, x: usize, y: usize) -> String {
        let bx = self.block_of(x / 2);
        let by = self.block_of(y / 2);
        match (bx, by) {
            (Some(p), Some(q)) if p == q => "within_block".into(),
            (Some(_), Some(_)) => "cross_block".into(),
            _ => "complement".into(),
        }
    }
}
