//! Span of analytically known product zeros `⟨η⊗ζ|W|η⊗ζ⟩ = 0`.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::CVector;
use crate::densemat::{hermitian_eigen, kron_vec};
use crate::error::{Error, Result};
use crate::pptstates::sampling::draw_rng;
use crate::skewcanon::{build_j, canonical_decompose};
use crate::witnesses::{ConjugationMode, Provenance, Witness};
use crate::{ComplexMatrix, RealMatrix, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelFamily {
    /// `η ⊗ η*` for arbitrary `η`.
    ConjugatePair,
    /// `η` on a unit-factor block of a generator `U`, `ζ = αη* + βUη`.
    Rotated,
    /// `η` arbitrary; the core part of `ζ` is `s(αη''* + βJη'')` with `η''`
    /// the normalized core projection of `η`, the rest of `ζ` arbitrary.
    ProjectedCore,
    /// Both factors supported off the core.
    Complement,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelSpan {
    pub rank: usize,
    pub dim: usize,
    pub full: bool,
    pub samples: usize,
    pub families: Vec<KernelFamily>,
    /// Largest `|⟨γ|W|γ⟩|` over the collected products.
    pub max_abs_expectation: f64,
    /// Orthonormal basis of the span.
    pub basis: Vec<CVector>,
}

/// A generator `U` together with an orthonormal basis of the subspace on
/// which `UᵀU` acts as the identity.
struct Generator {
    u: RealMatrix,
    support: Vec<Vec<f64>>,
}

/// Kernel description in the frame of a witness `I − Φ − Σ (Uᵀ⊗I)Φ^{T_A}(U⊗I)`
/// on `d⊗d`. The actual witness sees `(left·η) ⊗ (right·ζ)`.
struct Model {
    d: usize,
    gens: Vec<Generator>,
    /// Core size for the projected families (first `core` indices).
    core: usize,
    left: Option<RealMatrix>,
    right: Option<RealMatrix>,
}

fn unit_pairs(lambdas: &[f64]) -> Vec<usize> {
    (0..lambdas.len()).filter(|&i| (lambdas[i] - 1.0).abs() <= 1e-12).collect()
}

fn pair_support(d: usize, pairs: &[usize], q: Option<&RealMatrix>) -> Vec<Vec<f64>> {
    let mut out = Vec::new();
    for &i in pairs {
        for k in [2 * i, 2 * i + 1] {
            let v = match q {
                Some(q) => q.column(k),
                None => (0..d).map(|r| if r == k { 1.0 } else { 0.0 }).collect(),
            };
            out.push(v);
        }
    }
    out
}

fn canonical_generator(d: usize, lambdas: &[f64], q: Option<&RealMatrix>) -> Result<Generator> {
    let j = build_j(d, lambdas)?;
    let u = match q {
        Some(q) => j.conjugate(q)?.matrix().clone(),
        None => j.matrix().clone(),
    };
    Ok(Generator { support: pair_support(d, &unit_pairs(lambdas), q), u })
}

fn model_for(p: &Provenance) -> Result<Model> {
    let plain = |d, gens| Model { d, gens, core: d, left: None, right: None };
    Ok(match p {
        Provenance::Canonical { d, lambdas } => plain(*d, vec![canonical_generator(*d, lambdas, None)?]),
        Provenance::FromU { d, u, .. } => {
            let cf = canonical_decompose(u);
            plain(*d, vec![Generator { support: pair_support(*d, &unit_pairs(&cf.lambdas), Some(&cf.q)), u: u.matrix().clone() }])
        }
        Provenance::Conjugated { d, lambdas, q, mode } => {
            let g = canonical_generator(*d, lambdas, Some(q))?;
            let left = match mode {
                ConjugationMode::J => None,
                ConjugationMode::Psi => Some(q.transpose()),
            };
            Model { d: *d, gens: vec![g], core: *d, left, right: None }
        }
        Provenance::Partition { d, mu } => {
            let gens = mu
                .block_ranges()
                .into_iter()
                .map(|r| {
                    let mut u = RealMatrix::zeros(*d, *d);
                    for i in r.clone() {
                        u[(2 * i, 2 * i + 1)] = 1.0;
                        u[(2 * i + 1, 2 * i)] = -1.0;
                    }
                    let pairs: Vec<usize> = r.collect();
                    Generator { support: pair_support(*d, &pairs, None), u }
                })
                .collect();
            plain(*d, gens)
        }
        Provenance::Embedded { d1, d2, combo, lambdas } => {
            let c = crate::combinatorics::Combination::new(*d2, combo.clone())?;
            Model {
                d: *d1,
                gens: vec![canonical_generator(*d1, lambdas, None)?],
                core: *d1,
                left: None,
                right: Some(c.isometry::<f64>()),
            }
        }
        Provenance::Extended { d } => plain(*d, vec![]),
        Provenance::Opc { d, n } => {
            let lambdas = vec![1.0; *n];
            Model { d: *d, gens: vec![canonical_generator(*d, &lambdas, None)?], core: 2 * n, left: None, right: None }
        }
        Provenance::Shifted { .. } => return Err(Error::NoKernelFamily),
    })
}

/// Families that apply to a provenance by default.
pub fn default_families(p: &Provenance) -> Vec<KernelFamily> {
    match p {
        Provenance::Opc { .. } => vec![KernelFamily::Rotated, KernelFamily::ProjectedCore, KernelFamily::Complement],
        Provenance::Extended { .. } => vec![KernelFamily::ConjugatePair],
        Provenance::Shifted { .. } => vec![],
        _ => vec![KernelFamily::ConjugatePair, KernelFamily::Rotated],
    }
}

fn unit(i: usize, n: usize) -> Vec<C64> {
    let mut v = vec![C64::new(0.0, 0.0); n];
    v[i] = C64::new(1.0, 0.0);
    v
}

/// `e_k`, `(e_k + e_l)/√2` and `(e_k + i·e_l)/√2`.
fn grid(n: usize) -> Vec<Vec<C64>> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut out: Vec<Vec<C64>> = (0..n).map(|k| unit(k, n)).collect();
    for k in 0..n {
        for l in k + 1..n {
            for ph in [C64::new(1.0, 0.0), C64::new(0.0, 1.0)] {
                let mut v = vec![C64::new(0.0, 0.0); n];
                v[k] = C64::new(s, 0.0);
                v[l] = ph * s;
                out.push(v);
            }
        }
    }
    out
}

fn coefficient_grid() -> Vec<(C64, C64)> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    vec![
        (C64::new(1.0, 0.0), C64::new(0.0, 0.0)),
        (C64::new(0.0, 0.0), C64::new(1.0, 0.0)),
        (C64::new(s, 0.0), C64::new(s, 0.0)),
        (C64::new(s, 0.0), C64::new(0.0, s)),
    ]
}

fn random_vec<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<C64> {
    let mut v: Vec<C64> = (0..n).map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))).collect();
    normalize(&mut v);
    v
}

fn normalize(v: &mut [C64]) -> f64 {
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if n > 0.0 {
        v.iter_mut().for_each(|z| *z /= n);
    }
    n
}

fn real_apply(m: &RealMatrix, v: &[C64]) -> Vec<C64> {
    (0..m.rows())
        .map(|r| (0..m.cols()).map(|c| v[c] * m[(r, c)]).sum())
        .collect()
}

fn combine(basis: &[Vec<f64>], coeffs: &[C64]) -> Vec<C64> {
    let d = basis[0].len();
    let mut v = vec![C64::new(0.0, 0.0); d];
    for (b, &c) in basis.iter().zip(coeffs) {
        for (x, &bi) in v.iter_mut().zip(b) {
            *x += c * bi;
        }
    }
    v
}

fn rotated(g: &Generator, eta: Vec<C64>, alpha: C64, beta: C64) -> (Vec<C64>, Vec<C64>) {
    let ue = real_apply(&g.u, &eta);
    let zeta = eta.iter().zip(&ue).map(|(e, u)| alpha * e.conj() + beta * u).collect();
    (eta, zeta)
}

fn projected(model: &Model, g: &Generator, eta: Vec<C64>, rest: &[C64], alpha: C64, beta: C64, s: f64) -> Option<(Vec<C64>, Vec<C64>)> {
    let (d, m) = (model.d, model.core);
    let mut core: Vec<C64> = (0..d).map(|i| if i < m { eta[i] } else { C64::new(0.0, 0.0) }).collect();
    if normalize(&mut core) < 1e-8 {
        return None;
    }
    let (_, zc) = rotated(g, core, alpha, beta);
    let mut zeta: Vec<C64> = zc.iter().map(|z| z * s).collect();
    for (i, &r) in rest.iter().enumerate() {
        zeta[m + i] = r;
    }
    Some((eta, zeta))
}

fn collect(model: &Model, family: KernelFamily, budget: usize, seed: u64, out: &mut Vec<(Vec<C64>, Vec<C64>)>) {
    let d = model.d;
    let comp = d - model.core;
    let mut rng = draw_rng(seed, family as u64);
    let coeffs = coefficient_grid();
    let random_ab = |rng: &mut rand_chacha::ChaCha8Rng| {
        let mut ab = random_vec(2, rng);
        normalize(&mut ab);
        (ab[0], ab[1])
    };
    match family {
        KernelFamily::ConjugatePair => {
            for eta in grid(d) {
                let zeta = eta.iter().map(|z| z.conj()).collect();
                out.push((eta, zeta));
            }
            for _ in 0..budget {
                let eta = random_vec(d, &mut rng);
                let zeta = eta.iter().map(|z| z.conj()).collect();
                out.push((eta, zeta));
            }
        }
        KernelFamily::Rotated => {
            let gens: Vec<&Generator> = model.gens.iter().filter(|g| !g.support.is_empty()).collect();
            if gens.is_empty() {
                return;
            }
            for g in &gens {
                for c in grid(g.support.len()) {
                    for &(a, b) in &coeffs {
                        out.push(rotated(g, combine(&g.support, &c), a, b));
                    }
                }
            }
            for k in 0..budget {
                let g = gens[k % gens.len()];
                let c = random_vec(g.support.len(), &mut rng);
                let (a, b) = random_ab(&mut rng);
                out.push(rotated(g, combine(&g.support, &c), a, b));
            }
        }
        KernelFamily::ProjectedCore => {
            let Some(g) = model.gens.first() else { return };
            let rests: Vec<Vec<C64>> = if comp == 0 { vec![vec![]] } else { grid(comp) };
            let half = std::f64::consts::FRAC_1_SQRT_2;
            for eta in grid(d) {
                for r in &rests {
                    for &(a, b) in &coeffs {
                        let r: Vec<C64> = r.iter().map(|z| z * half).collect();
                        if let Some(p) = projected(model, g, eta.clone(), &r, a, b, half) {
                            out.push(p);
                        }
                    }
                }
            }
            for _ in 0..budget {
                let eta = random_vec(d, &mut rng);
                let (a, b) = random_ab(&mut rng);
                let s = rng.random_range(0.2..1.0);
                let r: Vec<C64> = random_vec(comp.max(1), &mut rng).into_iter().take(comp).collect();
                if let Some(p) = projected(model, g, eta, &r, a, b, s) {
                    out.push(p);
                }
            }
        }
        KernelFamily::Complement => {
            if comp == 0 {
                return;
            }
            let lift = |v: Vec<C64>| {
                let mut full = vec![C64::new(0.0, 0.0); d];
                full[model.core..].copy_from_slice(&v);
                full
            };
            let g = grid(comp);
            for x in &g {
                for y in &g {
                    out.push((lift(x.clone()), lift(y.clone())));
                }
            }
            for _ in 0..budget {
                out.push((lift(random_vec(comp, &mut rng)), lift(random_vec(comp, &mut rng))));
            }
        }
    }
}

pub fn kernel_span_rank(w: &Witness, budget: usize, seed: u64) -> Result<KernelSpan> {
    kernel_span_rank_with(w, &default_families(w.provenance()), budget, seed)
}

/// Collects grid and `budget` random products per family, checks that each
/// is a zero of the witness, and returns the rank of their span.
pub fn kernel_span_rank_with(w: &Witness, families: &[KernelFamily], budget: usize, seed: u64) -> Result<KernelSpan> {
    if !w.is_certified() {
        return Err(Error::Uncertified);
    }
    let model = model_for(w.provenance())?;
    let mut pairs = Vec::new();
    for &f in families {
        collect(&model, f, budget, seed, &mut pairs);
    }
    if pairs.is_empty() {
        return Err(Error::NoKernelFamily);
    }
    let dim = w.d1() * w.d2();
    let op = w.matrix();
    let scale = op.max_abs().max(1.0);
    let mut gram = ComplexMatrix::zeros(dim, dim);
    let mut worst: f64 = 0.0;
    for (eta, zeta) in &pairs {
        let mut x = match &model.left {
            Some(l) => real_apply(l, eta),
            None => eta.clone(),
        };
        let mut y = match &model.right {
            Some(r) => real_apply(r, zeta),
            None => zeta.clone(),
        };
        normalize(&mut x);
        normalize(&mut y);
        let g = kron_vec(&x, &y);
        let wg = op.apply(&g);
        let v: C64 = g.iter().zip(&wg).map(|(a, b)| a.conj() * b).sum();
        worst = worst.max(v.norm());
        if v.norm() > 1e-10 * scale {
            return Err(Error::NotAKernelState { value: v.norm() });
        }
        for r in 0..dim {
            if g[r] == C64::new(0.0, 0.0) {
                continue;
            }
            for c in 0..dim {
                gram[(r, c)] += g[r] * g[c].conj();
            }
        }
    }
    let e = hermitian_eigen(&gram);
    let top = e.max();
    let keep: Vec<usize> = (0..dim).filter(|&k| e.values[k] > 1e-9 * top).collect();
    let basis = keep.iter().map(|&k| CVector::from_complex(&e.vector(k))).collect();
    Ok(KernelSpan {
        rank: keep.len(),
        dim,
        full: keep.len() == dim,
        samples: pairs.len(),
        families: families.to_vec(),
        max_abs_expectation: worst,
        basis,
    })
}
