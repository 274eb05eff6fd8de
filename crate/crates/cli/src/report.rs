use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::Value;
use witnesskit::witnesses::{Provenance, Witness};
use witnesskit::Tolerances;

/// Envelope shared by every JSON report.
#[derive(Debug, Serialize)]
pub struct Report<'a, T: Serialize> {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'a str,
    pub seed: u64,
    pub tolerances: Tolerances,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub provenance: Option<&'a Provenance>,
    pub result: T,
}

impl<'a, T: Serialize> Report<'a, T> {
    pub fn new(command: &'a str, seed: u64, tolerances: Tolerances, provenance: Option<&'a Provenance>, result: T) -> Self {
        Self { tool: "witnesskit", version: witnesskit::VERSION, command, seed, tolerances, provenance, result }
    }
}

pub fn to_json<T: Serialize>(v: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}

/// Writes to `path`, or stdout when absent.
pub fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("cannot parse {}", path.display()))
}

pub fn read_witness(path: &Path) -> Result<Witness> {
    let w: Witness = read_json(path)?;
    Ok(Witness::from_parts(w.op().clone(), w.provenance().clone())?)
}

/// Applies `key=value` overrides on top of the default tolerances.
pub fn tolerances(overrides: &[String]) -> Result<Tolerances> {
    let mut v = serde_json::to_value(Tolerances::default())?;
    let obj = v.as_object_mut().expect("tolerances serialize as an object");
    for o in overrides {
        let Some((k, val)) = o.split_once('=') else {
            bail!("tolerance override {o:?} is not key=value");
        };
        if !obj.contains_key(k) {
            bail!("unknown tolerance {k:?}; expected one of {}", obj.keys().cloned().collect::<Vec<_>>().join(", "));
        }
        let x: f64 = val.parse().with_context(|| format!("tolerance {k} is not a number: {val:?}"))?;
        obj.insert(k.to_string(), Value::from(x));
    }
    let t: Tolerances = serde_json::from_value(v)?;
    t.validate()?;
    Ok(t)
}
