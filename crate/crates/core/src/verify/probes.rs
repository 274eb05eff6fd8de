use rand::Rng;
use rand_distr::StandardNormal;

use crate::densemat::{kron, min_eigenvalue};
use crate::error::{Error, Result};
use crate::pptstates::sampling::draw_rng;
use crate::witnesses::{canonical_witness, jamiolkowski_apply};
use crate::{BipartiteOperator, ComplexMatrix, C64};

/// Haar-random pure state `|x⟩⟨x|` on `C^d`.
pub fn random_pure_state<R: Rng + ?Sized>(d: usize, rng: &mut R) -> ComplexMatrix {
    let mut v: Vec<C64> = (0..d).map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))).collect();
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.iter_mut().for_each(|z| *z /= n);
    ComplexMatrix::outer(&v, &v)
}

/// Random convex mixture of `terms` product pure states: separable, hence PPT.
pub fn random_product_mixture<R: Rng + ?Sized>(d1: usize, d2: usize, terms: usize, rng: &mut R) -> Result<BipartiteOperator> {
    if terms == 0 {
        return Err(Error::InvalidParams("need at least one term".into()));
    }
    let weights: Vec<f64> = (0..terms).map(|_| rng.random_range(0.05..1.0)).collect();
    let total: f64 = weights.iter().sum();
    let mut m = ComplexMatrix::zeros(d1 * d2, d1 * d2);
    for w in weights {
        let p = kron(&random_pure_state(d1, rng), &random_pure_state(d2, rng));
        m = &m + &p.scale(w / total);
    }
    BipartiteOperator::new(d1, d2, m)
}

/// Worst minimum eigenvalue of `φ(|x⟩⟨x|)` over `samples` seeded random pure
/// states, `φ` the map attached to the canonical witness with `lambdas`.
pub fn map_positivity_probe(lambdas: &[f64], d: usize, samples: usize, seed: u64) -> Result<f64> {
    if samples == 0 {
        return Err(Error::InvalidParams("samples must be at least 1".into()));
    }
    let w = canonical_witness(d, lambdas)?;
    let mut rng = draw_rng(seed, 0);
    let mut worst = f64::INFINITY;
    for _ in 0..samples {
        let rho = random_pure_state(d, &mut rng);
        let phi = jamiolkowski_apply(&w, &rho)?;
        let m = min_eigenvalue(&BipartiteOperator::new(d, 1, phi)?)?;
        worst = worst.min(m);
    }
    Ok(worst)
}
