use serde::{Deserialize, Serialize};

use super::family::{boundary_params, family_layout, family_name, PptFamilyParams};
use super::layout::evaluate;
use super::{ConditionReport, PairMap};
use crate::combinatorics::Combination;
use crate::error::{Error, Result};
use crate::BipartiteOperator;

/// Canonical family on `d1⊗d1` moved onto the combination's image in the
/// second factor, plus diagonal weight `ker[(i, j)]` on `|i, c'_j⟩`, where
/// `c'_j` is the `j`-th index outside the combination.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbeddedParams {
    pub d2: usize,
    pub combo: Vec<usize>,
    pub inner: PptFamilyParams,
    pub ker: PairMap,
}

impl EmbeddedParams {
    pub fn d1(&self) -> usize {
        self.inner.d
    }

    pub fn combination(&self) -> Result<Combination> {
        let c = Combination::new(self.d2, self.combo.clone())?;
        if c.d1() != self.inner.d {
            return Err(Error::InvalidCombination(format!(
                "combination has {} indices but the inner family has d = {}",
                c.d1(),
                self.inner.d
            )));
        }
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        self.inner.validate()?;
        self.combination()?;
        let (d1, kd) = (self.d1(), self.d2 - self.d1());
        self.ker.validate("kernel sector", |i, j| i < d1 && j < kd)
    }
}

/// Unit-trace state on `d1⊗d2`.
pub fn build_embedded_state(p: &EmbeddedParams) -> Result<BipartiteOperator> {
    p.validate()?;
    let c = p.combination()?;
    let (d1, d2) = (p.d1(), p.d2);
    let inner = family_layout(d1, p.inner.n)?.assemble(p.inner.a0, &p.inner.a, &p.inner.c);
    let mut op = BipartiteOperator::zeros(d1, d2);
    for i in 0..d1 {
        for j in 0..d1 {
            for k in 0..d1 {
                for l in 0..d1 {
                    let v = inner.get((i, j), (k, l)).re;
                    if v != 0.0 {
                        op.add_to((i, c.label(j)), (k, c.label(l)), v);
                    }
                }
            }
        }
    }
    let comp = c.complement();
    for ((i, j), v) in p.ker.iter() {
        op.add_to((i, comp[j]), (i, comp[j]), v);
    }
    let n = op.trace();
    if !(n > 0.0) {
        return Err(Error::InvalidParams(format!("normalization {n} is not positive")));
    }
    Ok(op.scale(1.0 / n))
}

/// Canonical conditions on the image plus nonnegativity of the kernel sector.
pub fn check_embedded_conditions(p: &EmbeddedParams) -> ConditionReport {
    let layout = super::layout::CycleLayout { d: p.inner.d, blocks: vec![0..p.inner.n] };
    let q = &p.inner;
    let mut nonneg = vec![("nonnegative(a0)".to_string(), q.a0)];
    nonneg.extend(q.a.iter().map(|((x, y), v)| (format!("nonnegative({x},{y})"), v)));
    nonneg.extend(q.c.iter().enumerate().map(|(i, &v)| (format!("nonnegative(C_{i})"), v)));
    nonneg.extend(p.ker.iter().map(|((i, j), v)| (format!("kernel_nonnegative({i},{j})"), v)));
    evaluate(
        &layout.constraints(family_name(q.n)),
        nonneg.into_iter(),
        q.a0,
        |x, y| q.a.get(x, y),
        &q.c,
    )
}

/// Saturating inner family and every kernel coefficient equal to `ker`.
pub fn embedded_boundary_params(d1: usize, d2: usize, n: usize, combo: &[usize], a0: f64, ker: f64) -> Result<EmbeddedParams> {
    if d1 > d2 {
        return Err(Error::InvalidCombination(format!("need d1 <= d2, got {d1} > {d2}")));
    }
    let mut k = PairMap::new();
    for i in 0..d1 {
        for j in 0..d2 - d1 {
            k.set(i, j, ker);
        }
    }
    let p = EmbeddedParams { d2, combo: combo.to_vec(), inner: boundary_params(d1, n, a0)?, ker: k };
    p.validate()?;
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::combinations;
    use crate::densemat::trace_product;
    use crate::pptstates::{build_family_state, canonical_bound};
    use crate::witnesses::embedded_witness;

    #[test]
    fn full_combination_is_family() {
        let p = embedded_boundary_params(4, 4, 2, &[0, 1, 2, 3], 1.0, 0.0).unwrap();
        assert_eq!(build_embedded_state(&p).unwrap(), build_family_state(&p.inner).unwrap());
    }

    #[test]
    fn four_by_five_traces() {
        for c in combinations(5, 4).unwrap() {
            let p = embedded_boundary_params(4, 5, 2, c.indices(), 1.0, 1.0).unwrap();
            let rho = build_embedded_state(&p).unwrap();
            assert!((rho.trace() - 1.0).abs() < 1e-14);
            let w = embedded_witness(4, 5, c.indices(), &[1.0, 1.0]).unwrap();
            let t = trace_product(w.op(), &rho).unwrap();
            // Normalization 20 on the image plus 4 in the kernel sector.
            assert!((t + 4.0 / 24.0).abs() < 1e-12);
            assert!(t >= canonical_bound(4, 2));
            assert!(check_embedded_conditions(&p).is_valid());
        }
    }

    #[test]
    fn negative_kernel_coefficient() {
        let mut p = embedded_boundary_params(4, 5, 2, &[0, 1, 2, 4], 1.0, 1.0).unwrap();
        p.ker.set(2, 0, -0.5);
        assert!(build_embedded_state(&p).is_err());
        let r = check_embedded_conditions(&p);
        assert!(!r.positivity_ok);
        assert_eq!(r.violated[0].name, "kernel_nonnegative(2,0)");
    }

    #[test]
    fn rejects_bad_kernel_index() {
        let mut p = embedded_boundary_params(4, 5, 2, &[0, 1, 2, 4], 1.0, 1.0).unwrap();
        p.ker.set(0, 1, 1.0);
        assert!(build_embedded_state(&p).is_err());
        assert!(embedded_boundary_params(4, 5, 2, &[0, 1, 2], 1.0, 1.0).is_err());
    }
}
