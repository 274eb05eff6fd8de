use serde::{Deserialize, Serialize};

use super::{check_lambdas, generator_operator, unnormalized_bell, Provenance, Witness};
use crate::densemat::{kron, RealMatrix, Subsystem};
use crate::error::{Error, Result};
use crate::skewcanon::{build_j, canonical_decompose, SkewMatrix};
use crate::{BipartiteOperator, ComplexMatrix};

/// Projector onto `(1/√d)Σ|ii⟩`.
pub fn max_entangled(d: usize) -> Result<BipartiteOperator> {
    if d == 0 {
        return Err(Error::InvalidDimension("d must be at least 1".into()));
    }
    let m = unnormalized_bell(d).scale(1.0 / d as f64);
    BipartiteOperator::new(d, d, m)
}

/// `I − d|ψ⟩⟨ψ|`.
pub fn reduction_witness(d: usize) -> Result<Witness> {
    canonical_witness(d, &[])
}

/// Witness generated by an arbitrary skew matrix whose invariant factors
/// do not exceed one.
pub fn witness_from_u(u: &SkewMatrix<f64>) -> Result<Witness> {
    let d = u.d();
    if d == 0 {
        return Err(Error::InvalidDimension("d must be at least 1".into()));
    }
    let lambdas = canonical_decompose(u).lambdas;
    if let Some(&value) = lambdas.iter().find(|&&l| l > 1.0 + 1e-12) {
        return Err(Error::LambdaOutOfRange { value });
    }
    let op = generator_operator(d, &[u.matrix()]);
    Ok(Witness::new(
        op,
        Provenance::FromU {
            d,
            u: u.clone(),
            lambdas,
        },
    ))
}

/// Canonical witness built from its operator form.
pub fn canonical_witness(d: usize, lambdas: &[f64]) -> Result<Witness> {
    check_lambdas(lambdas, d)?;
    if d == 0 {
        return Err(Error::InvalidDimension("d must be at least 1".into()));
    }
    let j = build_j(d, lambdas)?;
    let op = generator_operator(d, &[j.matrix()]);
    Ok(Witness::new(
        op,
        Provenance::Canonical {
            d,
            lambdas: lambdas.to_vec(),
        },
    ))
}

/// Canonical witness with every invariant factor equal to one.
pub fn canonical_witness_unit(d: usize, n: usize) -> Result<Witness> {
    if 2 * n > d {
        return Err(Error::TooManyBlocks { blocks: n, dim: d });
    }
    canonical_witness(d, &vec![1.0; n])
}

pub(crate) fn add(op: &mut BipartiteOperator, a: (usize, usize), b: (usize, usize), v: f64) {
    op.add_to(a, b, v);
}

/// `|x,y⟩⟨x,y| + |y,x⟩⟨y,x| − |x,x⟩⟨y,y| − |y,y⟩⟨x,x|` for `x ≠ y`.
pub(crate) fn add_cross(op: &mut BipartiteOperator, x: usize, y: usize) {
    add(op, (x, y), (x, y), 1.0);
    add(op, (y, x), (y, x), 1.0);
    add(op, (x, x), (y, y), -1.0);
    add(op, (y, y), (x, x), -1.0);
}

/// Terms coupling the 2×2 blocks `i ≠ j` inside `range`, with the
/// `λ_i·λ_j` weight on the rotation part.
pub(crate) fn add_opc_block(
    op: &mut BipartiteOperator,
    range: std::ops::Range<usize>,
    lam: impl Fn(usize) -> f64,
) {
    for i in range.clone() {
        for j in range.clone() {
            if i == j {
                continue;
            }
            let (a, b, c, e) = (2 * i, 2 * i + 1, 2 * j, 2 * j + 1);
            add(op, (a, c), (a, c), 1.0);
            add(op, (a, e), (a, e), 1.0);
            add(op, (b, c), (b, c), 1.0);
            add(op, (b, e), (b, e), 1.0);
            add(op, (a, a), (c, c), -1.0);
            add(op, (a, a), (e, e), -1.0);
            add(op, (b, b), (c, c), -1.0);
            add(op, (b, b), (e, e), -1.0);
            let ll = lam(i) * lam(j);
            add(op, (b, c), (e, a), -ll);
            add(op, (b, e), (c, a), ll);
            add(op, (a, c), (e, b), ll);
            add(op, (a, e), (c, b), -ll);
        }
    }
}

/// Term-by-term expanded form of the canonical witness.
pub fn canonical_witness_expanded(d: usize, lambdas: &[f64]) -> Result<BipartiteOperator> {
    check_lambdas(lambdas, d)?;
    let n = lambdas.len();
    let mut op = BipartiteOperator::zeros(d, d);
    for (i, &l) in lambdas.iter().enumerate() {
        let w = 1.0 - l * l;
        let (a, b) = (2 * i, 2 * i + 1);
        add(&mut op, (a, b), (a, b), w);
        add(&mut op, (b, a), (b, a), w);
        add(&mut op, (a, a), (b, b), -w);
        add(&mut op, (b, b), (a, a), -w);
    }
    add_opc_block(&mut op, 0..n, |i| lambdas[i]);
    for i in 0..n {
        for j in 2 * n..d {
            add_cross(&mut op, 2 * i, j);
            add_cross(&mut op, 2 * i + 1, j);
        }
    }
    for x in 2 * n..d {
        for y in (x + 1)..d {
            add_cross(&mut op, x, y);
        }
    }
    Ok(op)
}

/// Decomposition of the unit canonical witness into two decomposable parts
/// and the core supported where `J` has full rank.
#[derive(Debug, Clone, PartialEq)]
pub struct WitnessSplit {
    pub o1_ta: BipartiteOperator,
    pub o2_ta: BipartiteOperator,
    pub w_opc: BipartiteOperator,
}

impl WitnessSplit {
    pub fn reconstruct(&self) -> BipartiteOperator {
        self.o1_ta
            .add(&self.o2_ta)
            .and_then(|s| s.add(&self.w_opc))
            .expect("parts share one shape")
    }
}

pub fn split_canonical(d: usize, n: usize) -> Result<WitnessSplit> {
    if 2 * n > d {
        return Err(Error::TooManyBlocks { blocks: n, dim: d });
    }
    let mut o1 = BipartiteOperator::zeros(d, d);
    for i in 0..n {
        for j in 2 * n..d {
            add_cross(&mut o1, 2 * i, j);
            add_cross(&mut o1, 2 * i + 1, j);
        }
    }
    let mut o2 = BipartiteOperator::zeros(d, d);
    for x in 2 * n..d {
        for y in (x + 1)..d {
            add_cross(&mut o2, x, y);
        }
    }
    let mut w_opc = BipartiteOperator::zeros(d, d);
    add_opc_block(&mut w_opc, 0..n, |_| 1.0);
    Ok(WitnessSplit {
        o1_ta: o1,
        o2_ta: o2,
        w_opc,
    })
}

/// The `2n⊗2n` core of the unit canonical witness, embedded in `d⊗d`.
pub fn opc_witness(d: usize, n: usize) -> Result<Witness> {
    let split = split_canonical(d, n)?;
    Ok(Witness::new(split.w_opc, Provenance::Opc { d, n }))
}

/// Which ingredient of the canonical witness the orthogonal matrix acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConjugationMode {
    /// `|ψ⟩⟨ψ| → (Qᵀ⊗I)|ψ⟩⟨ψ|(Q⊗I)`.
    Psi,
    /// `J → Q·J·Qᵀ`.
    J,
}

pub fn conjugated_witness(
    d: usize,
    lambdas: &[f64],
    q: &RealMatrix<f64>,
    mode: ConjugationMode,
) -> Result<Witness> {
    check_lambdas(lambdas, d)?;
    if q.rows() != d || !q.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "orthogonal matrix is {}x{}, expected {d}x{d}",
            q.rows(),
            q.cols()
        )));
    }
    let dev = q.orthogonality_deviation();
    if !(dev <= 1e-10) {
        return Err(Error::NotOrthogonal { deviation: dev });
    }
    let j = build_j(d, lambdas)?;
    let op = match mode {
        ConjugationMode::J => {
            let u = j.conjugate(q)?;
            generator_operator(d, &[u.matrix()])
        }
        ConjugationMode::Psi => {
            let id = ComplexMatrix::identity(d);
            let qc = q.to_complex();
            let qj = (q * j.matrix()).to_complex();
            let phi = BipartiteOperator::new(d, d, unnormalized_bell(d))?;
            let phi_ta = phi.partial_transpose(Subsystem::A);
            let t1 = &(&kron(&qc.transpose(), &id) * phi.matrix()) * &kron(&qc, &id);
            let t2 = &(&kron(&qj.transpose(), &id) * phi_ta.matrix()) * &kron(&qj, &id);
            let m = &(&ComplexMatrix::identity(d * d) - &t1) - &t2;
            BipartiteOperator::new(d, d, m)?
        }
    };
    Ok(Witness::new(
        op,
        Provenance::Conjugated {
            d,
            lambdas: lambdas.to_vec(),
            q: q.clone(),
            mode,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::densemat::{expectation, trace_product};
    use crate::skewcanon::{assemble, random_orthogonal};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn bell_projector_entries() {
        let p1 = max_entangled(1).unwrap();
        assert_eq!(p1.trace(), 1.0);
        let p = max_entangled(2).unwrap();
        for r in 0..4 {
            for c in 0..4 {
                let want = if [0, 3].contains(&r) && [0, 3].contains(&c) { 0.5 } else { 0.0 };
                assert_eq!(p.matrix()[(r, c)].re, want);
            }
        }
        let ev = p.partial_transpose(Subsystem::A).eigenvalues().unwrap();
        assert!((ev[0] + 0.5).abs() < 1e-12 && (ev[3] - 0.5).abs() < 1e-12);
        assert!(max_entangled(0).is_err());
    }

    #[test]
    fn reduction_expectation() {
        let w = reduction_witness(2).unwrap();
        let t = expectation(w.op(), &max_entangled(2).unwrap()).unwrap();
        assert!((t + 1.0).abs() < 1e-14);
        let w4 = canonical_witness(4, &[0.0, 0.0]).unwrap();
        let r4 = reduction_witness(4).unwrap();
        assert_eq!(w4.op(), r4.op());
        assert!((expectation(w4.op(), &max_entangled(4).unwrap()).unwrap() + 3.0).abs() < 1e-12);
    }

    #[test]
    fn full_rank_expectation() {
        let w = canonical_witness(4, &[1.0, 1.0]).unwrap();
        let t = expectation(w.op(), &max_entangled(4).unwrap()).unwrap();
        // Direct evaluation: 1 − d + 2·Σλ²/d.
        assert!((t - (1.0 - 4.0 + 4.0 / 4.0)).abs() < 1e-12);
        assert!((t + 2.0).abs() < 1e-12);
    }

    #[test]
    fn named_entries() {
        let w = canonical_witness(5, &[1.0, 1.0]).unwrap();
        assert_eq!(w.op().get((4, 4), (0, 0)).re, -1.0);
        let w6 = canonical_witness_unit(6, 2).unwrap();
        assert_eq!(w6.op().get((4, 0), (4, 0)).re, 1.0);
        assert_eq!(w6.op(), canonical_witness(6, &[1.0, 1.0]).unwrap().op());
        assert!(canonical_witness_unit(3, 2).is_err());
    }

    #[test]
    fn rejects_large_lambda() {
        assert!(matches!(canonical_witness(4, &[1.5, 1.0]), Err(Error::LambdaOutOfRange { .. })));
        let u = build_j(4, &[1.2]).unwrap();
        assert!(matches!(witness_from_u(&u), Err(Error::LambdaOutOfRange { .. })));
    }

    #[test]
    fn from_u_special_cases() {
        let w0 = witness_from_u(&SkewMatrix::zeros(3)).unwrap();
        assert_eq!(w0.op(), reduction_witness(3).unwrap().op());
        let j = build_j(4, &[1.0, 1.0]).unwrap();
        assert_eq!(witness_from_u(&j).unwrap().op(), canonical_witness(4, &[1.0, 1.0]).unwrap().op());
    }

    #[test]
    fn conjugation_classes() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let lams = [1.0, 0.6];
        let id = RealMatrix::identity(4);
        let wc = canonical_witness(4, &lams).unwrap();
        for mode in [ConjugationMode::Psi, ConjugationMode::J] {
            let w = conjugated_witness(4, &lams, &id, mode).unwrap();
            assert!(w.matrix().max_abs_diff(wc.matrix()) < 1e-14);
        }
        let q = random_orthogonal(4, &mut rng);
        let wj = conjugated_witness(4, &lams, &q, ConjugationMode::J).unwrap();
        let wpsi = conjugated_witness(4, &lams, &q, ConjugationMode::Psi).unwrap();
        let l = kron(&q.transpose().to_complex(), &ComplexMatrix::identity(4));
        let r = kron(&q.to_complex(), &ComplexMatrix::identity(4));
        let rel = &(&l * wj.matrix()) * &r;
        assert!(rel.max_abs_diff(wpsi.matrix()) < 1e-10);
        let u = assemble(&q, &lams).unwrap();
        let wu = witness_from_u(&u).unwrap();
        assert!(wu.matrix().max_abs_diff(wj.matrix()) < 1e-12);
        let mut bad = q.clone();
        bad[(0, 0)] += 1e-3;
        assert!(matches!(
            conjugated_witness(4, &lams, &bad, ConjugationMode::J),
            Err(Error::NotOrthogonal { .. })
        ));
    }

    #[test]
    fn split_examples() {
        let s = split_canonical(4, 2).unwrap();
        assert_eq!(s.o1_ta, BipartiteOperator::zeros(4, 4));
        assert_eq!(s.o2_ta, BipartiteOperator::zeros(4, 4));
        assert_eq!(&s.w_opc, canonical_witness_unit(4, 2).unwrap().op());
        let s6 = split_canonical(6, 2).unwrap();
        assert_eq!(s6.o2_ta.get((4, 5), (4, 5)).re, 1.0);
        assert_eq!(s6.o2_ta.get((4, 4), (5, 5)).re, -1.0);
        let s5 = split_canonical(5, 2).unwrap();
        assert_eq!(s5.o2_ta, BipartiteOperator::zeros(5, 5));
        let s41 = split_canonical(4, 1).unwrap();
        assert_eq!(s41.w_opc, BipartiteOperator::zeros(4, 4));
    }

    #[test]
    fn split_reconstructs_exactly() {
        for d in 1..=8 {
            for n in 0..=d / 2 {
                let s = split_canonical(d, n).unwrap();
                assert_eq!(&s.reconstruct(), canonical_witness_unit(d, n).unwrap().op(), "d={d} n={n}");
                for o in [&s.o1_ta, &s.o2_ta] {
                    let o = o.partial_transpose(Subsystem::A);
                    assert!(o.min_eigenvalue().unwrap() >= -1e-10);
                }
            }
        }
    }

    #[test]
    fn operator_and_expanded_forms_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for d in 1..=8 {
            for n in 0..=d / 2 {
                let unit = vec![1.0; n];
                let random: Vec<f64> = (0..n).map(|_| rand::Rng::random_range(&mut rng, 0.0..=1.0)).collect();
                for lams in [unit, random] {
                    let a = canonical_witness(d, &lams).unwrap();
                    let b = canonical_witness_expanded(d, &lams).unwrap();
                    assert!(a.matrix().max_abs_diff(b.matrix()) <= 1e-12, "d={d} lams={lams:?}");
                }
            }
        }
    }

    #[test]
    fn outputs_are_real_symmetric() {
        for w in [
            canonical_witness(6, &[0.3, 1.0]).unwrap(),
            opc_witness(6, 2).unwrap(),
            reduction_witness(3).unwrap(),
        ] {
            assert!(w.op().hermitian_deviation() <= 1e-12);
            assert_eq!(w.matrix().max_imag(), 0.0);
        }
    }

    #[test]
    fn unnormalized_trace_helper() {
        let w = canonical_witness_unit(4, 2).unwrap();
        let id = BipartiteOperator::identity(4, 4);
        assert_eq!(trace_product(w.op(), &id).unwrap(), w.op().trace());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn product_expectation_formula(d in 2usize..=6, seed in any::<u64>()) {
            // ⟨ηζ|W|ηζ⟩ = 1 − |⟨ζ|η*⟩|² − |⟨ζ|U|η⟩|² for normalized η, ζ.
            use rand_distr::StandardNormal;
            use rand::Rng;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let u = crate::skewcanon::random_skew(d, &mut rng);
            let cf = canonical_decompose(&u);
            let scale = cf.lambdas.first().copied().unwrap_or(1.0).max(1.0);
            let u = SkewMatrix::from_upper(d, &u.upper().iter().map(|x| x / scale).collect::<Vec<_>>()).unwrap();
            let w = witness_from_u(&u).unwrap();
            let mut draw = || -> Vec<crate::C64> {
                let v: Vec<crate::C64> = (0..d).map(|_| crate::C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))).collect();
                let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                v.into_iter().map(|z| z / n).collect()
            };
            let eta = draw();
            let zeta = draw();
            let g = crate::densemat::kron_vec(&eta, &zeta);
            let lhs = w.matrix().sandwich(&g, &g).re;
            let uc = u.to_complex();
            let ueta = uc.apply(&eta);
            let ov1: crate::C64 = zeta.iter().zip(&eta).map(|(z, e)| z.conj() * e.conj()).sum();
            let ov2: crate::C64 = zeta.iter().zip(&ueta).map(|(z, e)| z.conj() * e).sum();
            let rhs = 1.0 - ov1.norm_sqr() - ov2.norm_sqr();
            prop_assert!((lhs - rhs).abs() < 1e-12);
            prop_assert!(rhs >= -1e-12);
        }
    }
}
