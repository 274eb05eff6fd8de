use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Named numerical tolerances. Defaults match the accuracy contracts of the
/// library; every field may be overridden.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// Entrywise hermiticity / antisymmetry check.
    pub hermitian: f64,
    /// Eigenvalue accuracy relative to the spectral norm.
    pub eigen: f64,
    /// Unit-trace check for density operators.
    pub trace: f64,
    /// Positive semidefiniteness (minimum eigenvalue floor).
    pub psd: f64,
    /// A product minimum above `-cert` counts as nonnegative.
    pub cert: f64,
    /// Slack when comparing traces against analytic lower bounds.
    pub bound: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            hermitian: 1e-12,
            eigen: 1e-10,
            trace: 1e-12,
            psd: 1e-10,
            cert: 1e-8,
            bound: 1e-10,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<()> {
        let all = [self.hermitian, self.eigen, self.trace, self.psd, self.cert, self.bound];
        if all.iter().all(|t| t.is_finite() && *t > 0.0) {
            Ok(())
        } else {
            Err(Error::InvalidConfig("tolerances must be finite and positive".into()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partial_override_keeps_defaults() {
        let t: Tolerances = serde_json::from_str(r#"{"cert":1e-6}"#).unwrap();
        assert_eq!(t.cert, 1e-6);
        assert_eq!(t.hermitian, 1e-12);
        assert!(t.validate().is_ok());
        let bad = Tolerances { psd: -1.0, ..t };
        assert!(bad.validate().is_err());
    }
}
