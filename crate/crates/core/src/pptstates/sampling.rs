//! Seeded parameter draws for the state families.
//!
//! Every product inequality `a·a' ≥ a0²` is drawn as `a = a0·δ·t`,
//! `a' = a0·δ/t` with `δ ≥ 1` and a tilt `t > 0`; coefficients that sit in no
//! such inequality get `a0·δ`. Each `C_i` is then a fraction of the largest
//! value its two inequalities allow. `δ = 1`, `t = 1` and full `C` land on
//! the saturating boundary, which is hit with positive probability.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;
use serde::{Deserialize, Serialize};

use super::embedded::EmbeddedParams;
use super::extended::{extended_constraints, ExtendedParams};
use super::family::{family_layout, PptFamilyParams};
use super::layout::{ProductConstraint, Rhs};
use super::partition::{partition_layout, PartitionParams};
use super::{ConditionKind, PairMap};
use crate::combinatorics::{Combination, Partition};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SampleMode {
    /// Positivity and PPT inequalities all hold.
    Valid,
    /// Every inequality holds with equality.
    Boundary,
    /// Positivity holds, exactly one PPT inequality is broken.
    NptViolating,
}

/// Independent stream `index` of the generator seeded by `seed`.
pub fn draw_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn sample_a0<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.random_range(0.25..2.0)
}

fn delta<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    if rng.random_bool(0.25) {
        1.0
    } else {
        let e: f64 = rng.sample(Exp1);
        1.0 + e
    }
}

fn tilt<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    if rng.random_bool(0.25) {
        1.0
    } else {
        rng.random_range(-1.0f64..1.0).exp()
    }
}

fn fill_a<R: Rng + ?Sized>(d: usize, constraints: &[ProductConstraint], a0: f64, boundary: bool, rng: &mut R) -> PairMap {
    if boundary {
        return PairMap::off_diagonal(d, a0);
    }
    let mut a = PairMap::new();
    for k in constraints.iter().filter(|k| k.rhs == Rhs::A0Squared) {
        let (dl, t) = (delta(rng), tilt(rng));
        a.set(k.lhs[0].0, k.lhs[0].1, a0 * dl * t);
        a.set(k.lhs[1].0, k.lhs[1].1, a0 * dl / t);
    }
    for x in 0..d {
        for y in 0..d {
            if x != y && !a.0.contains_key(&(x, y)) {
                let v = a0 * delta(rng);
                a.set(x, y, v);
            }
        }
    }
    a
}

/// Largest `C_i` allowed by the inequalities of `kinds`.
fn c_cap(constraints: &[ProductConstraint], a: &PairMap, i: usize, kinds: &[ConditionKind]) -> f64 {
    constraints
        .iter()
        .filter(|k| k.rhs == Rhs::C(i) && kinds.contains(&k.kind))
        .map(|k| (a.get(k.lhs[0].0, k.lhs[0].1) * a.get(k.lhs[1].0, k.lhs[1].1)).sqrt())
        .fold(f64::INFINITY, f64::min)
}

fn fill_c<R: Rng + ?Sized>(
    npairs: usize,
    linked: impl Fn(usize) -> bool,
    constraints: &[ProductConstraint],
    a: &PairMap,
    a0: f64,
    boundary: bool,
    rng: &mut R,
) -> Vec<f64> {
    let both = [ConditionKind::Positivity, ConditionKind::Ppt];
    (0..npairs)
        .map(|i| {
            if !linked(i) {
                0.0
            } else if boundary {
                a0
            } else {
                let u = if rng.random_bool(0.3) { 1.0 } else { rng.random_range(0.0..1.0) };
                u * c_cap(constraints, a, i, &both)
            }
        })
        .collect()
}

/// Breaks one randomly chosen PPT inequality and repairs positivity.
fn violate<R: Rng + ?Sized>(constraints: &[ProductConstraint], a0: f64, a: &mut PairMap, c: &mut [f64], rng: &mut R) {
    let ppt: Vec<&ProductConstraint> = constraints.iter().filter(|k| k.kind == ConditionKind::Ppt).collect();
    let k = ppt[rng.random_range(0..ppt.len())];
    let s = rng.random_range(0.05..0.95);
    match k.rhs {
        Rhs::A0Squared => {
            let t = tilt(rng);
            a.set(k.lhs[0].0, k.lhs[0].1, a0 * s * t);
            a.set(k.lhs[1].0, k.lhs[1].1, a0 * s / t);
        }
        Rhs::C(i) => {
            c[i] = c_cap(constraints, a, i, &[ConditionKind::Positivity]);
            let other = a.get(k.lhs[1].0, k.lhs[1].1);
            a.set(k.lhs[0].0, k.lhs[0].1, s * c[i] * c[i] / other);
        }
    }
    for (i, ci) in c.iter_mut().enumerate() {
        let cap = c_cap(constraints, a, i, &[ConditionKind::Positivity]);
        if cap.is_finite() {
            *ci = ci.min(cap);
        }
    }
}

fn cycle_draw<R: Rng + ?Sized>(
    layout: &super::layout::CycleLayout,
    mode: SampleMode,
    rng: &mut R,
) -> (f64, PairMap, Vec<f64>) {
    let constraints = layout.constraints(|_, _| String::new());
    let a0 = sample_a0(rng);
    let boundary = mode == SampleMode::Boundary;
    let mut a = fill_a(layout.d, &constraints, a0, boundary, rng);
    let mut c = fill_c(layout.npairs(), |i| layout.has_link(i), &constraints, &a, a0, boundary, rng);
    if mode == SampleMode::NptViolating {
        violate(&constraints, a0, &mut a, &mut c, rng);
    }
    (a0, a, c)
}

pub fn sample_family<R: Rng + ?Sized>(d: usize, n: usize, mode: SampleMode, rng: &mut R) -> Result<PptFamilyParams> {
    let layout = family_layout(d, n)?;
    let (a0, a, c) = cycle_draw(&layout, mode, rng);
    Ok(PptFamilyParams { d, n, a0, a, c })
}

pub fn sample_partition<R: Rng + ?Sized>(d: usize, mu: &Partition, mode: SampleMode, rng: &mut R) -> Result<PartitionParams> {
    let layout = partition_layout(d, mu)?;
    let (a0, a, c) = cycle_draw(&layout, mode, rng);
    Ok(PartitionParams { d, mu: mu.clone(), a0, a, c })
}

/// Kernel-sector weights are drawn from `[0, 2·a0)` (`a0` on the boundary).
pub fn sample_embedded<R: Rng + ?Sized>(
    combo: &Combination,
    n: usize,
    mode: SampleMode,
    rng: &mut R,
) -> Result<EmbeddedParams> {
    let inner = sample_family(combo.d1(), n, mode, rng)?;
    let mut ker = PairMap::new();
    for i in 0..combo.d1() {
        for j in 0..combo.d2() - combo.d1() {
            let v = if mode == SampleMode::Boundary { inner.a0 } else { rng.random_range(0.0..2.0 * inner.a0) };
            ker.set(i, j, v);
        }
    }
    Ok(EmbeddedParams { d2: combo.d2(), combo: combo.indices().to_vec(), inner, ker })
}

pub fn sample_extended<R: Rng + ?Sized>(d: usize, mode: SampleMode, rng: &mut R) -> Result<ExtendedParams> {
    if d == 0 || !d.is_multiple_of(4) {
        return Err(Error::InvalidDimension(format!("extended family needs d a positive multiple of 4, got {d}")));
    }
    let constraints = extended_constraints(d);
    let a0 = sample_a0(rng);
    let mut a = fill_a(d, &constraints, a0, mode == SampleMode::Boundary, rng);
    if mode == SampleMode::NptViolating {
        violate(&constraints, a0, &mut a, &mut [], rng);
    }
    Ok(ExtendedParams { d, a0, a })
}
