use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::CVector;
use crate::densemat::hermitian_eigen;
use crate::error::{Error, Result};
use crate::pptstates::sampling::draw_rng;
use crate::witnesses::Witness;
use crate::{BipartiteOperator, ComplexMatrix, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Field {
    Complex,
    Real,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeeSawConfig {
    pub restarts: usize,
    pub max_iters: usize,
    pub tol: f64,
    pub seed: u64,
    pub field: Field,
    /// Minima at or above `-cert_tol` count as nonnegative.
    pub cert_tol: f64,
}

impl Default for SeeSawConfig {
    fn default() -> Self {
        Self { restarts: 200, max_iters: 500, tol: 1e-12, seed: 0, field: Field::Complex, cert_tol: 1e-8 }
    }
}

impl SeeSawConfig {
    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 {
            return Err(Error::InvalidConfig("restarts must be at least 1".into()));
        }
        if !(self.tol > 0.0) || !(self.cert_tol > 0.0) {
            return Err(Error::InvalidConfig("tolerances must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RestartStats {
    pub restarts: usize,
    pub converged: usize,
    pub hit_max_iters: usize,
    pub total_iterations: usize,
    /// Updates whose raw eigenvector raised the objective by more than 1e-14.
    pub monotonicity_violations: usize,
    pub best_restart: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertReport {
    pub min_value: f64,
    pub eta: CVector,
    pub zeta: CVector,
    pub is_ew: bool,
    pub cert_tol: f64,
    pub stats: RestartStats,
}

struct Run {
    value: f64,
    eta: Vec<C64>,
    zeta: Vec<C64>,
    iters: usize,
    converged: bool,
    violations: usize,
}

fn normalize(v: &mut [C64]) {
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.iter_mut().for_each(|z| *z /= n);
}

fn random_unit<R: Rng + ?Sized>(n: usize, field: Field, rng: &mut R) -> Vec<C64> {
    let mut v: Vec<C64> = (0..n)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = if field == Field::Complex { rng.sample(StandardNormal) } else { 0.0 };
            C64::new(re, im)
        })
        .collect();
    normalize(&mut v);
    v
}

/// Operator on the second factor: `⟨η,k|W|η,l⟩`.
fn reduce_first(w: &BipartiteOperator, eta: &[C64]) -> ComplexMatrix {
    let (d1, d2) = (w.d1(), w.d2());
    let mut b = ComplexMatrix::zeros(d2, d2);
    for i in 0..d1 {
        for j in 0..d1 {
            let c = eta[i].conj() * eta[j];
            if c == C64::new(0.0, 0.0) {
                continue;
            }
            for k in 0..d2 {
                for l in 0..d2 {
                    b[(k, l)] += c * w.get((i, k), (j, l));
                }
            }
        }
    }
    b
}

/// Operator on the first factor: `⟨i,ζ|W|j,ζ⟩`.
fn reduce_second(w: &BipartiteOperator, zeta: &[C64]) -> ComplexMatrix {
    let (d1, d2) = (w.d1(), w.d2());
    let mut a = ComplexMatrix::zeros(d1, d1);
    for k in 0..d2 {
        for l in 0..d2 {
            let c = zeta[k].conj() * zeta[l];
            if c == C64::new(0.0, 0.0) {
                continue;
            }
            for i in 0..d1 {
                for j in 0..d1 {
                    a[(i, j)] += c * w.get((i, k), (j, l));
                }
            }
        }
    }
    a
}

fn quad(m: &ComplexMatrix, v: &[C64]) -> f64 {
    let mv = m.apply(v);
    v.iter().zip(&mv).map(|(a, b)| (a.conj() * b).re).sum()
}

/// Minimum eigenvector; over the reals only the symmetric part matters and
/// the vector is rotated to a real one.
fn min_vector(m: &ComplexMatrix, field: Field) -> Vec<C64> {
    let m = match field {
        Field::Complex => m.clone(),
        Field::Real => m.real_part().to_complex(),
    };
    let e = hermitian_eigen(&m);
    let mut v = e.vector(0);
    if field == Field::Real {
        let k = (0..v.len()).max_by(|&a, &b| v[a].norm().total_cmp(&v[b].norm())).unwrap_or(0);
        let phase = v[k].conj() / v[k].norm();
        v = v.iter().map(|z| C64::new((z * phase).re, 0.0)).collect();
        normalize(&mut v);
    }
    v
}

fn run_restart(w: &BipartiteOperator, cfg: &SeeSawConfig, index: usize) -> Run {
    let mut rng = draw_rng(cfg.seed, index as u64);
    let mut eta = random_unit(w.d1(), cfg.field, &mut rng);
    let b = reduce_first(w, &eta);
    let mut zeta = min_vector(&b, cfg.field);
    let mut value = quad(&b, &zeta);
    let mut violations = 0;
    for it in 1..=cfg.max_iters {
        let before = value;
        let a = reduce_second(w, &zeta);
        let cand = min_vector(&a, cfg.field);
        let v = quad(&a, &cand);
        if v <= value {
            eta = cand;
            value = v;
        } else if v > value + 1e-14 {
            violations += 1;
        }
        let b = reduce_first(w, &eta);
        let cand = min_vector(&b, cfg.field);
        let v = quad(&b, &cand);
        if v <= value {
            zeta = cand;
            value = v;
        } else if v > value + 1e-14 {
            violations += 1;
        }
        if before - value < cfg.tol {
            return Run { value, eta, zeta, iters: it, converged: true, violations };
        }
    }
    Run { value, eta, zeta, iters: cfg.max_iters, converged: false, violations }
}

/// Minimizes `⟨η⊗ζ|W|η⊗ζ⟩` over unit product vectors by alternating
/// minimum-eigenvector updates. Restarts run in parallel; restart `k` draws
/// from stream `k` of the seed so the result is independent of scheduling.
pub fn product_minimize(w: &Witness, cfg: &SeeSawConfig) -> Result<CertReport> {
    cfg.validate()?;
    let op = w.op();
    op.ensure_hermitian(1e-12)?;
    let runs: Vec<Run> = (0..cfg.restarts).into_par_iter().map(|k| run_restart(op, cfg, k)).collect();
    let mut best = 0;
    for (k, r) in runs.iter().enumerate() {
        if r.value < runs[best].value {
            best = k;
        }
    }
    let stats = RestartStats {
        restarts: runs.len(),
        converged: runs.iter().filter(|r| r.converged).count(),
        hit_max_iters: runs.iter().filter(|r| !r.converged).count(),
        total_iterations: runs.iter().map(|r| r.iters).sum(),
        monotonicity_violations: runs.iter().map(|r| r.violations).sum(),
        best_restart: best,
    };
    let r = &runs[best];
    Ok(CertReport {
        min_value: r.value,
        eta: CVector::from_complex(&r.eta),
        zeta: CVector::from_complex(&r.zeta),
        is_ew: r.value >= -cfg.cert_tol,
        cert_tol: cfg.cert_tol,
        stats,
    })
}

/// Runs [`product_minimize`] and records the verdict on the witness.
pub fn certify(w: &mut Witness, cfg: &SeeSawConfig) -> Result<CertReport> {
    let rep = product_minimize(w, cfg)?;
    w.set_certified(rep.is_ew);
    Ok(rep)
}
