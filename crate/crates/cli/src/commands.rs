use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;
use witnesskit::combinatorics::{combinations, partitions, Partition};
use witnesskit::pptstates::ConditionReport;
use witnesskit::skewcanon::{canonical_decompose, CanonicalForm, SkewMatrix};
use witnesskit::verify::{classify_detection_with, product_minimize, Detection, DetectionClass, Field, SeeSawConfig};
use witnesskit::witnesses::{
    canonical_witness, embedded_witness, extended_witness, opc_witness, partition_witness, witness_from_u, Witness,
};
use witnesskit::{BipartiteOperator, Error, Tolerances};

use crate::family::{conditions_held, FamilySpec, Mode, Params};
use crate::report::{emit, read_json, read_witness, to_json, tolerances, Report};
use crate::{Cli, Command, FieldArg, Kind};

pub enum Status {
    Ok,
    /// Certification found a violation.
    Negative,
}

pub fn run(cli: &Cli) -> Result<Status> {
    let tol = tolerances(&cli.tol)?;
    let out = cli.out.as_deref();
    match &cli.command {
        Command::BuildWitness { kind, d, n, lambdas, mu, d1, d2, combo, u } => {
            let w = build_witness(*kind, *d, *n, lambdas.as_deref(), mu.as_deref(), *d1, *d2, combo.as_deref(), u.as_deref())?;
            emit(out, &to_json(&w)?)?;
            Ok(Status::Ok)
        }
        Command::BuildState { spec, mode, index, a0, params, unnormalized } => {
            let p = match (params, a0) {
                (Some(path), _) => {
                    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
                    spec.parse_params(&text)?
                }
                (None, Some(a0)) => spec.boundary(*a0)?,
                (None, None) => spec.sample(*mode, cli.seed, *index)?,
            };
            let record = StateRecord::new(p, !unnormalized)?;
            emit(out, &to_json(&Report::new("build-state", cli.seed, tol, None, record))?)?;
            Ok(Status::Ok)
        }
        Command::VerifyWitness { input, restarts, max_iters, field } => {
            let w = read_witness(input)?;
            let cfg = SeeSawConfig {
                restarts: *restarts,
                max_iters: *max_iters,
                seed: cli.seed,
                field: match field {
                    FieldArg::Complex => Field::Complex,
                    FieldArg::Real => Field::Real,
                },
                cert_tol: tol.cert,
                ..Default::default()
            };
            let rep = product_minimize(&w, &cfg)?;
            let ok = rep.is_ew;
            emit(out, &to_json(&Report::new("verify-witness", cli.seed, tol, Some(w.provenance()), VerifyResult { config: cfg, report: rep }))?)?;
            Ok(if ok { Status::Ok } else { Status::Negative })
        }
        Command::Classify { witness, state } => classify(cli.seed, tol, out, witness, state),
        Command::Sweep { spec, mode, draws } => sweep(cli.seed, tol, out, spec, *mode, *draws),
        Command::Decompose { input, d, upper } => {
            let u: SkewMatrix<f64> = match (input, d, upper) {
                (Some(path), _, _) => read_json(path)?,
                (None, Some(d), Some(upper)) => SkewMatrix::from_upper(*d, upper)?,
                _ => bail!("give --in or both --d and --upper"),
            };
            let form = canonical_decompose(&u);
            let result = Decomposition {
                reconstruction_error: form.reassemble().max_abs_diff(u.matrix()),
                orthogonality_deviation: form.q.orthogonality_deviation(),
                form,
            };
            emit(out, &to_json(&Report::new("decompose", cli.seed, tol, None, result))?)?;
            Ok(Status::Ok)
        }
        Command::Enumerate { partitions: p, combos } => {
            let value = match (p, combos.as_deref()) {
                (Some(n), _) => {
                    let list = partitions(*n)?;
                    serde_json::json!({ "partitions": n, "count": list.len(), "items": list })
                }
                (None, Some([d2, d1])) => {
                    let list = combinations(*d2, *d1)?;
                    let items: Vec<&[usize]> = list.iter().map(|c| c.indices()).collect();
                    serde_json::json!({ "d2": d2, "d1": d1, "count": list.len(), "items": items })
                }
                _ => bail!("give --partitions N or --combos D2 D1"),
            };
            emit(out, &to_json(&Report::new("enumerate", cli.seed, tol, None, value))?)?;
            Ok(Status::Ok)
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn build_witness(
    kind: Kind,
    d: Option<usize>,
    n: Option<usize>,
    lambdas: Option<&[f64]>,
    mu: Option<&[usize]>,
    d1: Option<usize>,
    d2: Option<usize>,
    combo: Option<&[usize]>,
    u: Option<&Path>,
) -> Result<Witness> {
    let req = |v: Option<usize>, flag: &str| v.with_context(|| format!("--{flag} is required for --kind {kind:?}"));
    let lambdas = || -> Result<Vec<f64>> {
        match (lambdas, n) {
            (Some(_), Some(_)) => bail!("give either --lambda or --n, not both"),
            (Some(l), None) => Ok(l.to_vec()),
            (None, Some(n)) => Ok(vec![1.0; n]),
            (None, None) => bail!("--lambda or --n is required for --kind {kind:?}"),
        }
    };
    Ok(match kind {
        Kind::Canonical => canonical_witness(req(d, "d")?, &lambdas()?)?,
        Kind::Partition => {
            let mu = mu.context("--mu is required for --kind partition")?;
            partition_witness(req(d, "d")?, &Partition::new(mu.to_vec())?)?
        }
        Kind::Embedded => {
            let combo = combo.context("--combo is required for --kind embedded")?;
            embedded_witness(req(d1, "d1")?, req(d2, "d2")?, combo, &lambdas()?)?
        }
        Kind::Extended => extended_witness(req(d, "d")?)?,
        Kind::FromU => {
            let path = u.context("--u is required for --kind from-u")?;
            witness_from_u(&read_json::<SkewMatrix<f64>>(path)?)?
        }
        Kind::Opc => opc_witness(req(d, "d")?, req(n, "n")?)?,
    })
}

#[derive(Serialize)]
struct VerifyResult {
    config: SeeSawConfig,
    report: witnesskit::verify::CertReport,
}

#[derive(Serialize)]
struct Decomposition {
    form: CanonicalForm<f64>,
    reconstruction_error: f64,
    orthogonality_deviation: f64,
}

#[derive(Serialize)]
struct StateRecord {
    #[serde(flatten)]
    params: Params,
    conditions: ConditionReport,
    normalized: bool,
    state: BipartiteOperator,
}

impl StateRecord {
    fn new(params: Params, normalized: bool) -> Result<Self> {
        let state = params.build(normalized)?;
        Ok(Self { conditions: params.conditions()?, params, normalized, state })
    }
}

#[derive(Serialize)]
struct ClassifyResult {
    conditions_held: Option<bool>,
    detection: Detection,
}

/// Accepts a `build-state` report, its `result` object, or a bare operator.
fn read_state(path: &Path) -> Result<(BipartiteOperator, Option<ConditionReport>)> {
    let mut v: Value = read_json(path)?;
    if let Some(r) = v.get_mut("result") {
        v = r.take();
    }
    if let Some(s) = v.get("state") {
        let op = serde_json::from_value(s.clone()).context("malformed state operator")?;
        let cond = match v.get("conditions") {
            Some(c) => Some(serde_json::from_value(c.clone()).context("malformed condition report")?),
            None => None,
        };
        return Ok((op, cond));
    }
    Ok((serde_json::from_value(v).context("state file holds no operator")?, None))
}

fn classify(seed: u64, tol: Tolerances, out: Option<&Path>, witness: &Path, state: &Path) -> Result<Status> {
    let w = read_witness(witness)?;
    let (rho, cond) = read_state(state)?;
    let held = cond.as_ref().and_then(conditions_held);
    match classify_detection_with(&w, &rho, held, &tol) {
        Ok(detection) => {
            let result = ClassifyResult { conditions_held: held, detection };
            emit(out, &to_json(&Report::new("classify", seed, tol, Some(w.provenance()), result))?)?;
            Ok(Status::Ok)
        }
        Err(e @ Error::BoundViolated { .. }) => {
            eprintln!("violation: {e}");
            Ok(Status::Negative)
        }
        Err(e) => Err(e.into()),
    }
}

struct Row {
    params: String,
    detection: Detection,
    violated: bool,
}

fn sweep_row(spec: &FamilySpec, mode: Mode, seed: u64, index: u64, tol: &Tolerances) -> Result<Row> {
    let p = spec.sample(mode, seed, index)?;
    let w = p.witness()?;
    let rho = p.build(true)?;
    let held = conditions_held(&p.conditions()?);
    let (detection, violated) = match classify_detection_with(&w, &rho, held, tol) {
        Ok(det) => (det, false),
        Err(Error::BoundViolated { .. }) => (classify_detection_with(&w, &rho, None, tol)?, true),
        Err(e) => return Err(e.into()),
    };
    let params = serde_json::to_value(&p)?.get("params").cloned().unwrap_or(Value::Null).to_string();
    Ok(Row { params, detection, violated })
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:e}")).unwrap_or_default()
}

fn sweep(seed: u64, tol: Tolerances, out: Option<&Path>, spec: &FamilySpec, mode: Mode, draws: u64) -> Result<Status> {
    if draws == 0 {
        bail!("--draws must be at least 1");
    }
    let rows: Vec<Row> = (0..draws).into_par_iter().map(|k| sweep_row(spec, mode, seed, k, &tol)).collect::<Result<_>>()?;
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["draw", "seed", "params", "trace", "class", "is_ppt", "bound", "npt_floor", "margin"])?;
    for (k, r) in rows.iter().enumerate() {
        let d = &r.detection;
        let class = if r.violated { "bound_violated" } else { d.class.label() };
        w.write_record([
            k.to_string(),
            seed.to_string(),
            r.params.clone(),
            format!("{:e}", d.trace),
            class.to_string(),
            d.is_ppt.to_string(),
            fmt_opt(d.bound.map(|b| b.ppt)),
            fmt_opt(d.bound.map(|b| b.npt_floor)),
            fmt_opt(d.margin),
        ])?;
    }
    let text = String::from_utf8(w.into_inner().map_err(|e| e.into_error())?)?;
    emit(out, &text)?;

    let min_trace = rows.iter().map(|r| r.detection.trace).fold(f64::INFINITY, f64::min);
    let min_margin = rows.iter().filter_map(|r| r.detection.margin).reduce(f64::min);
    let violations = rows.iter().filter(|r| r.violated).count();
    let detected = rows.iter().filter(|r| r.detection.class == DetectionClass::PptEntangledDetected).count();
    let mut summary = format!("summary: draws={draws} seed={seed} min_trace={min_trace:e}");
    match min_margin {
        Some(m) => write!(summary, " min_margin={m:e}")?,
        None => summary.push_str(" min_margin=no-bound"),
    }
    write!(summary, " ppt_entangled_detected={detected} violations={violations}")?;
    eprintln!("{summary}");
    Ok(if violations == 0 { Status::Ok } else { Status::Negative })
}
