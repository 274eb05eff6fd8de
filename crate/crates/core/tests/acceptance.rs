use std::process::ExitCode;
use std::time::Instant;

use rand::Rng;
use witnesskit::combinatorics::{combinations, partitions, Partition};
use witnesskit::densemat::{trace_product, Subsystem};
use witnesskit::pptstates::sampling::{draw_rng, sample_family, sample_partition, SampleMode};
use witnesskit::pptstates::{
    boundary_state, build_extended_state, build_family_state, build_partition_state, canonical_bound,
    canonical_npt_floor, check_conditions, check_partition_conditions, extended_boundary_params, extended_bound,
    partition_boundary_params, partition_bound, partition_denominator,
};
use witnesskit::skewcanon::{canonical_decompose, orthogonality_identity_check, random_orthogonal, random_skew};
use witnesskit::verify::{
    certify, classify_detection, is_ppt, kernel_span_rank, map_positivity_probe, product_minimize,
    random_pure_state, DetectionClass, Field, SeeSawConfig,
};
use witnesskit::witnesses::{
    canonical_witness, canonical_witness_unit, embedded_witness, extended_split, extended_witness,
    jamiolkowski_apply, opc_witness, partition_witness, reduction_witness, Witness,
};
use witnesskit::{ComplexMatrix, C64};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn c1_decomposition() -> Outcome {
    let (mut roundtrip, mut orth, mut inv) = (0.0f64, 0.0f64, 0.0f64);
    for k in 0..1000u64 {
        let mut rng = draw_rng(101, k);
        let d = 2 + (k as usize % 11);
        let u = random_skew(d, &mut rng);
        let f = canonical_decompose(&u);
        roundtrip = roundtrip.max(f.reassemble().max_abs_diff(u.matrix()));
        orth = orth.max(f.q.orthogonality_deviation());
        let r = random_orthogonal(d, &mut rng);
        let g = canonical_decompose(&u.conjugate(&r).map_err(|e| e.to_string())?);
        let mut a = f.lambdas.clone();
        let mut b = g.lambdas.clone();
        a.sort_by(f64::total_cmp);
        b.sort_by(f64::total_cmp);
        check(a.len() == b.len(), || format!("draw {k}: {} vs {} invariant factors", a.len(), b.len()))?;
        for (x, y) in a.iter().zip(&b) {
            inv = inv.max((x - y).abs());
        }
    }
    check(roundtrip <= 1e-10 && orth <= 1e-10 && inv <= 1e-9, || {
        format!("roundtrip {roundtrip:e}, orthogonality {orth:e}, invariants {inv:e}")
    })?;
    Ok(format!("1000 draws, roundtrip {roundtrip:.1e}, orthogonality {orth:.1e}, invariants {inv:.1e}"))
}

fn c2_orthogonality_identity() -> Outcome {
    let mut worst = 0.0f64;
    for k in 0..10_000u64 {
        let mut rng = draw_rng(102, k);
        let d = 1 + (k as usize % 12);
        let u = random_skew(d, &mut rng);
        let alpha: Vec<C64> =
            (0..d).map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
        worst = worst.max(orthogonality_identity_check(&u, &alpha).map_err(|e| e.to_string())?);
    }
    check(worst <= 1e-12, || format!("worst {worst:e}"))?;
    Ok(format!("10000 draws, worst {worst:.1e}"))
}

fn constructed_witnesses() -> Vec<(Witness, Field)> {
    let mut out = Vec::new();
    for d in 2..=8 {
        for n in 0..=d / 2 {
            out.push((canonical_witness_unit(d, n).unwrap(), Field::Complex));
        }
    }
    for n in 1..=4 {
        for mu in partitions(n).unwrap() {
            out.push((partition_witness(2 * n, &mu).unwrap(), Field::Complex));
        }
    }
    for c in combinations(5, 4).unwrap() {
        out.push((embedded_witness(4, 5, c.indices(), &[1.0, 1.0]).unwrap(), Field::Complex));
    }
    for d in [4, 8] {
        out.push((extended_witness(d).unwrap(), Field::Real));
    }
    out
}

fn c3_certification() -> Outcome {
    let list = constructed_witnesses();
    let mut worst = f64::INFINITY;
    let mut control = f64::NEG_INFINITY;
    for (w, field) in &list {
        let cfg = SeeSawConfig { seed: 103, field: *field, ..Default::default() };
        let r = product_minimize(w, &cfg).map_err(|e| e.to_string())?;
        check(r.min_value >= -1e-8, || format!("{:?}: minimum {:e}", w.provenance(), r.min_value))?;
        worst = worst.min(r.min_value);
        let neg = product_minimize(&w.shifted(1e-3), &cfg).map_err(|e| e.to_string())?;
        check(!neg.is_ew, || format!("{:?}: shifted witness still certifies", w.provenance()))?;
        control = control.max(neg.min_value);
    }
    Ok(format!("{} witnesses, worst minimum {worst:.1e}; shifted controls all negative (max {control:.2e})", list.len()))
}

fn c4_boundary_saturation() -> Outcome {
    let mut parts = Vec::new();
    for (d, n, expected) in [(4, 2, -0.2), (6, 3, -1.0 / 7.0), (6, 2, -0.1)] {
        let rho = boundary_state(d, n, 1.0).map_err(|e| e.to_string())?;
        let w = canonical_witness_unit(d, n).unwrap();
        let t = trace_product(w.op(), &rho).unwrap();
        check((t - expected).abs() <= 1e-12, || format!("({d},{n}): {t} vs {expected}"))?;
        check(is_ppt(&rho).unwrap().is_ppt, || format!("({d},{n}): boundary state is not PPT"))?;
        parts.push(format!("({d},{n}) {t:.12}"));
    }
    Ok(parts.join(", "))
}

fn c5_sampled_bounds() -> Outcome {
    let mut parts = Vec::new();
    for (d, n) in [(4, 2), (5, 2), (6, 2), (6, 3)] {
        let w = canonical_witness_unit(d, n).unwrap();
        let (bound, floor) = (canonical_bound(d, n), canonical_npt_floor(d, n));
        let mut min_valid = f64::INFINITY;
        for k in 0..2000u64 {
            let mode = if k % 4 == 0 { SampleMode::Boundary } else { SampleMode::Valid };
            let p = sample_family(d, n, mode, &mut draw_rng(105, k)).map_err(|e| e.to_string())?;
            check(check_conditions(&p).is_valid(), || format!("({d},{n}) draw {k} is not condition-valid"))?;
            let t = trace_product(w.op(), &build_family_state(&p).unwrap()).unwrap();
            min_valid = min_valid.min(t);
        }
        check(min_valid >= bound - 1e-10, || format!("({d},{n}): {min_valid} below {bound}"))?;
        let mut min_npt = f64::INFINITY;
        for k in 0..2000u64 {
            let p = sample_family(d, n, SampleMode::NptViolating, &mut draw_rng(205, k)).map_err(|e| e.to_string())?;
            check(check_conditions(&p).is_npt_only(), || format!("({d},{n}) npt draw {k} malformed"))?;
            let t = trace_product(w.op(), &build_family_state(&p).unwrap()).unwrap();
            min_npt = min_npt.min(t);
        }
        check(min_npt >= floor - 1e-10, || format!("({d},{n}): npt {min_npt} below {floor}"))?;
        parts.push(format!("({d},{n}) min {min_valid:.4}>={bound:.4}, npt {min_npt:.4}>={floor:.4}"));
    }
    Ok(parts.join("; "))
}

fn c6_partition_bound() -> Outcome {
    let d = 8;
    let mut failures = Vec::new();
    let mut parts = Vec::new();
    for mu in partitions(4).unwrap() {
        let den = partition_denominator(d, &mu);
        check(den == 72, || format!("{:?}: denominator {den}", mu.parts()))?;
        let bound = partition_bound(d, &mu);
        check((bound + 1.0 / 9.0).abs() < 1e-15, || format!("{:?}: bound {bound}", mu.parts()))?;
        let w = partition_witness(d, &mu).unwrap();
        let mut min_t = f64::INFINITY;
        for k in 0..500u64 {
            let p = sample_partition(d, &mu, SampleMode::Valid, &mut draw_rng(106, k)).map_err(|e| e.to_string())?;
            check(check_partition_conditions(&p).unwrap().is_valid(), || format!("{:?} draw {k} invalid", mu.parts()))?;
            min_t = min_t.min(trace_product(w.op(), &build_partition_state(&p).unwrap()).unwrap());
        }
        check(min_t >= bound - 1e-10, || format!("{:?}: sampled {min_t} below {bound}", mu.parts()))?;
        let rho = build_partition_state(&partition_boundary_params(d, &mu, 1.0).unwrap()).unwrap();
        let t = trace_product(w.op(), &rho).unwrap();
        if (t - bound).abs() > 1e-12 {
            failures.push(format!("{:?} boundary trace {t:.6} != {bound:.6}", mu.parts()));
        }
        parts.push(format!("{:?} min {min_t:.4} boundary {t:.4}", mu.parts()));
    }
    for n in 2..=4 {
        let single = Partition::new(vec![n]).unwrap();
        let (a, b) = (partition_bound(2 * n, &single), canonical_bound(2 * n, n));
        let expected = -1.0 / (2 * n + 1) as f64;
        check((a - b).abs() < 1e-15 && (a - expected).abs() < 1e-15, || format!("n={n}: {a} vs {b}"))?;
    }
    if failures.is_empty() {
        Ok(parts.join("; "))
    } else {
        Err(format!("denominators 72 and sampled bounds hold; saturation fails: {}", failures.join(", ")))
    }
}

fn c7_detection() -> Outcome {
    let w = canonical_witness_unit(4, 2).unwrap();
    let rho = boundary_state(4, 2, 1.0).unwrap();
    let r = classify_detection(&w, &rho).map_err(|e| e.to_string())?;
    check(r.class == DetectionClass::PptEntangledDetected, || format!("class {}", r.class.label()))?;
    Ok(format!("class {}, trace {:.6}, ppt min eigenvalue {:.2e}", r.class.label(), r.trace, r.ppt_min_eigenvalue))
}

fn c8_map_positivity() -> Outcome {
    let mut parts = Vec::new();
    for (d, l) in [(3, vec![]), (2, vec![1.0]), (4, vec![1.0, 1.0]), (6, vec![1.0, 1.0, 1.0])] {
        let m = map_positivity_probe(&l, d, 1000, 108).map_err(|e| e.to_string())?;
        check(m >= -1e-10, || format!("d={d} lambdas {l:?}: {m:e}"))?;
        parts.push(format!("d={d} n={} worst {m:.1e}", l.len()));
    }
    let w = canonical_witness(3, &[]).unwrap();
    let mut worst = 0.0f64;
    for k in 0..100u64 {
        let rho = random_pure_state(3, &mut draw_rng(208, k));
        let phi = jamiolkowski_apply(&w, &rho).map_err(|e| e.to_string())?;
        let reduction = &ComplexMatrix::identity(3).scale(rho.trace().re) - &rho;
        worst = worst.max(phi.max_abs_diff(&reduction));
    }
    check(worst <= 1e-12, || format!("rank-0 map deviates from reduction map by {worst:e}"))?;
    parts.push(format!("reduction map deviation {worst:.1e}"));
    Ok(parts.join(", "))
}

fn certified(mut w: Witness) -> Result<Witness, String> {
    let r = certify(&mut w, &SeeSawConfig { seed: 109, ..Default::default() }).map_err(|e| e.to_string())?;
    check(r.is_ew, || format!("{:?} failed certification", w.provenance()))?;
    Ok(w)
}

fn c9_kernel_span() -> Outcome {
    let wc = kernel_span_rank(&certified(canonical_witness_unit(4, 2).unwrap())?, 64, 109).map_err(|e| e.to_string())?;
    let wr = kernel_span_rank(&certified(reduction_witness(4).unwrap())?, 64, 109).map_err(|e| e.to_string())?;
    let wo = kernel_span_rank(&certified(opc_witness(6, 2).unwrap())?, 144, 109).map_err(|e| e.to_string())?;
    check(wc.rank == 16 && wc.full, || format!("canonical (4,2) rank {}", wc.rank))?;
    check(wr.rank == 16 && wr.full, || format!("reduction d=4 rank {}", wr.rank))?;
    check(wo.rank == 36 && wo.full, || format!("core (6,2) rank {}", wo.rank))?;
    Ok(format!("canonical(4,2) {}/16, reduction(4) {}/16, core(6,2) {}/36", wc.rank, wr.rank, wo.rank))
}

fn c10_extended() -> Outcome {
    let mut parts = Vec::new();
    for d in [4, 8] {
        let s = extended_split(d).map_err(|e| e.to_string())?;
        let err = s.reconstruction_error();
        check(err <= 1e-12, || format!("d={d}: reconstruction error {err:e}"))?;
        for (name, ta) in [("D1", &s.d1_ta), ("D2", &s.d2_ta)] {
            let m = ta.partial_transpose(Subsystem::A).min_eigenvalue().unwrap();
            check(m >= -1e-10, || format!("d={d}: {name} has eigenvalue {m:e}"))?;
        }
        parts.push(format!("d={d} reconstruction {err:.1e}"));
    }
    let a0 = 1.0;
    let p = extended_boundary_params(4, a0).map_err(|e| e.to_string())?;
    let sigma = build_extended_state(&p, false).map_err(|e| e.to_string())?;
    let w = extended_witness(4).unwrap();
    let t = trace_product(w.op(), &sigma).unwrap();
    let expected = extended_bound(4, a0);
    check((t - expected).abs() <= 1e-12 && (expected + 4.0 * a0).abs() < 1e-15, || {
        format!("saturation {t} vs {expected}")
    })?;
    parts.push(format!("saturation {t:.12}"));
    let cfg = SeeSawConfig { seed: 110, field: Field::Complex, ..Default::default() };
    let m = product_minimize(&w, &cfg).map_err(|e| e.to_string())?.min_value;
    check(m < -1e-3, || format!("complex field minimum {m:e}"))?;
    parts.push(format!("complex-field minimum {m:.4}"));
    Ok(parts.join(", "))
}

fn c11_counting() -> Outcome {
    let p = partitions(5).map_err(|e| e.to_string())?.len();
    let c = combinations(5, 4).map_err(|e| e.to_string())?.len();
    check(p == 7 && c == 5, || format!("p(5)={p}, C(5,4)={c}"))?;
    Ok(format!("p(5)={p}, C(5,4)={c}"))
}

fn c12_reproducibility() -> Outcome {
    let report = || -> Result<String, String> {
        let w = canonical_witness_unit(5, 2).unwrap();
        let cfg = SeeSawConfig { restarts: 32, seed: 112, ..Default::default() };
        let cert = product_minimize(&w, &cfg).map_err(|e| e.to_string())?;
        let p = sample_family(5, 2, SampleMode::Valid, &mut draw_rng(112, 3)).map_err(|e| e.to_string())?;
        let det = classify_detection(&w, &build_family_state(&p).unwrap()).map_err(|e| e.to_string())?;
        serde_json::to_string(&(cert, p, det)).map_err(|e| e.to_string())
    };
    let (a, b) = (report()?, report()?);
    check(a == b, || "reports differ between runs".into())?;
    Ok(format!("{} identical bytes", a.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("canonical decomposition", c1_decomposition),
        ("orthogonality identity", c2_orthogonality_identity),
        ("witness certification", c3_certification),
        ("boundary saturation", c4_boundary_saturation),
        ("sampled family bounds", c5_sampled_bounds),
        ("partition bound", c6_partition_bound),
        ("detection", c7_detection),
        ("map positivity", c8_map_positivity),
        ("kernel span", c9_kernel_span),
        ("extended witness", c10_extended),
        ("counting", c11_counting),
        ("reproducibility", c12_reproducibility),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name} ({secs:.1}s): {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({secs:.1}s): {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
