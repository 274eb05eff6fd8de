//! Numerical certification: product-state minimization, PPT tests,
//! detection windows, kernel-span and map-positivity probes.

mod classify;
mod kernel;
mod probes;
mod seesaw;

pub use classify::{bounds_for, classify_detection, classify_detection_with, BoundPair, Detection, DetectionClass};
pub use kernel::{default_families, kernel_span_rank, kernel_span_rank_with, KernelFamily, KernelSpan};
pub use probes::{map_positivity_probe, random_product_mixture, random_pure_state};
pub use seesaw::{certify, product_minimize, CertReport, Field, RestartStats, SeeSawConfig};

use serde::{Deserialize, Serialize};

use crate::densemat::Subsystem;
use crate::error::{Error, Result};
use crate::{BipartiteOperator, C64};

/// Complex vector stored as parallel real and imaginary parts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CVector {
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl CVector {
    pub fn from_complex(v: &[C64]) -> Self {
        Self { re: v.iter().map(|z| z.re).collect(), im: v.iter().map(|z| z.im).collect() }
    }

    pub fn to_complex(&self) -> Vec<C64> {
        self.re.iter().zip(&self.im).map(|(&r, &i)| C64::new(r, i)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PptCheck {
    pub is_ppt: bool,
    pub min_eigenvalue: f64,
}

/// Hermiticity (1e-12) and unit trace (1e-10).
pub(crate) fn ensure_state(rho: &BipartiteOperator) -> Result<()> {
    rho.ensure_hermitian(1e-12)?;
    let t = rho.trace();
    if (t - 1.0).abs() > 1e-10 {
        return Err(Error::NotAState(format!("trace {t} differs from 1")));
    }
    Ok(())
}

/// Smallest eigenvalue of `ρ^{T_A}` and whether it clears `-1e-10`.
pub fn is_ppt(rho: &BipartiteOperator) -> Result<PptCheck> {
    ensure_state(rho)?;
    let m = rho.partial_transpose(Subsystem::A).min_eigenvalue()?;
    Ok(PptCheck { is_ppt: m >= -1e-10, min_eigenvalue: m })
}
