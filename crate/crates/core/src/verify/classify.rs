use serde::{Deserialize, Serialize};

use super::{ensure_state, is_ppt};
use crate::config::Tolerances;
use crate::densemat::trace_product;
use crate::error::{Error, Result};
use crate::pptstates::{canonical_bound, canonical_npt_floor, partition_bound, partition_npt_floor};
use crate::witnesses::{Provenance, Witness};
use crate::BipartiteOperator;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DetectionClass {
    Undetected,
    PptEntangledDetected,
    NptWindow,
    /// The witness has no bound formula; nothing is claimed.
    NoBound,
}

impl DetectionClass {
    pub fn label(self) -> &'static str {
        match self {
            Self::Undetected => "undetected",
            Self::PptEntangledDetected => "ppt_entangled_detected",
            Self::NptWindow => "npt_window",
            Self::NoBound => "no-bound",
        }
    }
}

/// Lower bound for PPT family members and the floor for positive members
/// that break a PPT inequality.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundPair {
    pub ppt: f64,
    pub npt_floor: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Detection {
    pub class: DetectionClass,
    pub trace: f64,
    pub is_ppt: bool,
    pub ppt_min_eigenvalue: f64,
    pub bound: Option<BoundPair>,
    /// `trace − bound.ppt` for PPT states, `trace − bound.npt_floor` otherwise.
    pub margin: Option<f64>,
}

fn all_unit(lambdas: &[f64]) -> bool {
    lambdas.iter().all(|&l| l == 1.0)
}

/// Bound formulas exist for the unit canonical witness with at least two
/// blocks, partition witnesses, and unit embedded witnesses with at least two
/// blocks. Everything else returns `None`.
pub fn bounds_for(p: &Provenance) -> Option<BoundPair> {
    match p {
        Provenance::Canonical { d, lambdas } if lambdas.len() >= 2 && all_unit(lambdas) => Some(BoundPair {
            ppt: canonical_bound(*d, lambdas.len()),
            npt_floor: canonical_npt_floor(*d, lambdas.len()),
        }),
        Provenance::Partition { d, mu } => Some(BoundPair {
            ppt: partition_bound(*d, mu),
            npt_floor: partition_npt_floor(*d, mu),
        }),
        Provenance::Embedded { d1, lambdas, .. } if lambdas.len() >= 2 && all_unit(lambdas) => Some(BoundPair {
            ppt: canonical_bound(*d1, lambdas.len()),
            npt_floor: canonical_npt_floor(*d1, lambdas.len()),
        }),
        _ => None,
    }
}

pub fn classify_detection(w: &Witness, rho: &BipartiteOperator) -> Result<Detection> {
    classify_detection_with(w, rho, None, &Tolerances::default())
}

/// `conditions_held` is the construction-time verdict of the state's family:
/// `Some(true)` if every inequality held, `Some(false)` if only positivity
/// held. When given, a trace below the applicable bound is an error.
pub fn classify_detection_with(
    w: &Witness,
    rho: &BipartiteOperator,
    conditions_held: Option<bool>,
    tol: &Tolerances,
) -> Result<Detection> {
    if w.d1() != rho.d1() || w.d2() != rho.d2() {
        return Err(Error::DimensionMismatch(format!(
            "witness is {}x{}, state is {}x{}",
            w.d1(),
            w.d2(),
            rho.d1(),
            rho.d2()
        )));
    }
    ensure_state(rho)?;
    let t = trace_product(w.op(), rho)?;
    let ppt = is_ppt(rho)?;
    let bound = bounds_for(w.provenance());
    let class = match bound {
        None => DetectionClass::NoBound,
        Some(_) if t >= -tol.trace => DetectionClass::Undetected,
        Some(_) if ppt.is_ppt => DetectionClass::PptEntangledDetected,
        Some(_) => DetectionClass::NptWindow,
    };
    let margin = bound.map(|b| if ppt.is_ppt { t - b.ppt } else { t - b.npt_floor });
    if let (Some(b), Some(held)) = (bound, conditions_held) {
        let floor = if held { b.ppt } else { b.npt_floor };
        if t < floor - tol.bound {
            return Err(Error::BoundViolated { trace: t, bound: floor });
        }
    }
    Ok(Detection { class, trace: t, is_ppt: ppt.is_ppt, ppt_min_eigenvalue: ppt.min_eigenvalue, bound, margin })
}
