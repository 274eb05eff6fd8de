use serde::{Deserialize, Serialize};

use super::layout::{evaluate, ProductConstraint, Rhs};
use super::{check_a0, ConditionKind, ConditionReport, PairMap};
use crate::error::{Error, Result};
use crate::BipartiteOperator;

/// Coefficients of the state family paired with the three-generator witness
/// on `d = 4n`. The operator carries no normalization unless asked for.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtendedParams {
    pub d: usize,
    pub a0: f64,
    pub a: PairMap,
}

fn check_dim(d: usize) -> Result<()> {
    if d == 0 || !d.is_multiple_of(4) {
        return Err(Error::InvalidDimension(format!("extended family needs d a positive multiple of 4, got {d}")));
    }
    Ok(())
}

impl ExtendedParams {
    pub fn validate(&self) -> Result<()> {
        check_dim(self.d)?;
        check_a0(self.a0)?;
        let d = self.d;
        self.a.validate("extended", |x, y| x != y && x < d && y < d)
    }
}

/// The operator; divided by its trace when `normalize` is set.
pub fn build_extended_state(p: &ExtendedParams, normalize: bool) -> Result<BipartiteOperator> {
    p.validate()?;
    let (d, a0) = (p.d, p.a0);
    let mut op = BipartiteOperator::zeros(d, d);
    for x in 0..d {
        for y in 0..d {
            op.add_to((x, x), (y, y), a0);
        }
    }
    for b in (0..d).step_by(4) {
        for x in b..b + 4 {
            op.add_to((x, x), (x, x), 3.0 * a0);
            for y in b..b + 4 {
                if x != y {
                    op.add_to((x, x), (y, y), -a0);
                }
            }
        }
        for (p, q) in [((b + 1, b + 2), (b + 3, b)), ((b, b + 3), (b + 2, b + 1))] {
            op.add_to(p, q, a0);
            op.add_to(q, p, a0);
        }
    }
    for ((x, y), v) in p.a.iter() {
        op.add_to((x, y), (x, y), v);
    }
    if !normalize {
        return Ok(op);
    }
    let n = op.trace();
    if !(n > 0.0) {
        return Err(Error::InvalidParams(format!("normalization {n} is not positive")));
    }
    Ok(op.scale(1.0 / n))
}

pub(crate) fn extended_constraints(d: usize) -> Vec<ProductConstraint> {
    let mut out = Vec::new();
    let mut push = |kind, name: String, lhs| out.push(ProductConstraint { kind, name, lhs, rhs: Rhs::A0Squared });
    for b in (0..d).step_by(4) {
        let i = b / 4;
        push(ConditionKind::Positivity, format!("coupling_a({i})"), [(b + 1, b + 2), (b + 3, b)]);
        push(ConditionKind::Positivity, format!("coupling_b({i})"), [(b, b + 3), (b + 2, b + 1)]);
        push(ConditionKind::Ppt, format!("within_block_a({i})"), [(b + 1, b), (b + 3, b + 2)]);
        push(ConditionKind::Ppt, format!("within_block_b({i})"), [(b, b + 1), (b + 2, b + 3)]);
    }
    for x in 0..d {
        for y in x + 1..d {
            if x / 4 != y / 4 {
                push(ConditionKind::Ppt, format!("cross_block({x},{y})"), [(x, y), (y, x)]);
            }
        }
    }
    out
}

pub fn check_extended_conditions(p: &ExtendedParams) -> ConditionReport {
    let mut nonneg = vec![("nonnegative(a0)".to_string(), p.a0)];
    nonneg.extend(p.a.iter().map(|((x, y), v)| (format!("nonnegative({x},{y})"), v)));
    evaluate(&extended_constraints(p.d), nonneg.into_iter(), p.a0, |x, y| p.a.get(x, y), &[])
}

/// Every coefficient equal to `a0`.
pub fn extended_boundary_params(d: usize, a0: f64) -> Result<ExtendedParams> {
    check_dim(d)?;
    if !(a0 > 0.0) || !a0.is_finite() {
        return Err(Error::InvalidParams(format!("a0 must be positive, got {a0}")));
    }
    Ok(ExtendedParams { d, a0, a: PairMap::off_diagonal(d, a0) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::densemat::trace_product;
    use crate::pptstates::extended_bound;
    use crate::witnesses::extended_witness;

    #[test]
    fn saturation() {
        for (d, tr) in [(4, 28.0), (8, 88.0)] {
            let p = extended_boundary_params(d, 1.0).unwrap();
            assert!(check_extended_conditions(&p).is_valid());
            let rho = build_extended_state(&p, false).unwrap();
            assert!((rho.trace() - tr).abs() < 1e-12);
            let w = extended_witness(d).unwrap();
            let t = trace_product(w.op(), &rho).unwrap();
            assert!((t - extended_bound(d, 1.0)).abs() < 1e-12, "d={d}: {t}");
            let normed = build_extended_state(&p, true).unwrap();
            assert!((normed.trace() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn coupling_violation() {
        let mut p = extended_boundary_params(4, 1.0).unwrap();
        p.a.set(1, 2, 0.5);
        p.a.set(3, 0, 0.5);
        let r = check_extended_conditions(&p);
        assert!(!r.positivity_ok);
        assert_eq!(r.violated[0].name, "coupling_a(0)");
        assert_eq!(r.violated[0].margin, -0.75);
    }

    #[test]
    fn free_coefficients_do_not_move_the_trace() {
        let w = extended_witness(4).unwrap();
        let p = extended_boundary_params(4, 1.0).unwrap();
        let base = trace_product(w.op(), &build_extended_state(&p, false).unwrap()).unwrap();
        let mut q = p.clone();
        for (x, y) in [(0, 2), (2, 0), (1, 3), (3, 1)] {
            q.a.set(x, y, 0.0);
        }
        assert!(check_extended_conditions(&q).is_valid());
        let t = trace_product(w.op(), &build_extended_state(&q, false).unwrap()).unwrap();
        assert!((t - base).abs() < 1e-12);
    }

    #[test]
    fn constraint_count() {
        // 4 per block plus one per unordered cross-block pair.
        assert_eq!(extended_constraints(4).len(), 4);
        assert_eq!(extended_constraints(8).len(), 8 + 16);
        assert!(build_extended_state(&ExtendedParams { d: 6, a0: 1.0, a: PairMap::new() }, false).is_err());
    }
}
