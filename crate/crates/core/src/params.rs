//! Distortion parameters.
//!
//! Most closed forms depend on δ only through δ². The critical parameter
//! δ = 1/√(d+1) is irrational, so [`Delta::critical`] keeps δ² = 1/(d+1) as
//! its own field instead of squaring a rounded square root. That keeps regime
//! classification exact at the breakpoint.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance on δ² − 1/(d+1) under which a parameter counts as critical.
pub const REGIME_TOLERANCE: f64 = 1e-12;

/// A distortion parameter δ together with its square.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Delta {
    value: f64,
    squared: f64,
    critical: bool,
}

impl Delta {
    /// Any finite δ. Range checks are left to the operations that need them.
    pub fn new(value: f64) -> Result<Self> {
        if !value.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "delta must be finite, got {value}"
            )));
        }
        Ok(Self {
            value,
            squared: value * value,
            critical: false,
        })
    }

    /// δ = 1/√(d+1), with δ² stored as 1/(d+1).
    pub fn critical(d: usize) -> Self {
        let squared = 1.0 / (d as f64 + 1.0);
        Self {
            value: squared.sqrt(),
            squared,
            critical: true,
        }
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn squared(&self) -> f64 {
        self.squared
    }

    /// True when this parameter was built by [`Delta::critical`].
    pub fn is_symbolic_critical(&self) -> bool {
        self.critical
    }

    /// Rejects δ outside (0, 1], the range where the quality measures are defined.
    pub fn require_unit_range(&self) -> Result<()> {
        if self.value > 0.0 && self.value <= 1.0 {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!(
                "delta must lie in (0, 1], got {}",
                self.value
            )))
        }
    }
}

impl fmt::Display for Delta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.critical {
            write!(f, "crit({})", self.value)
        } else {
            write!(f, "{}", self.value)
        }
    }
}

/// Where δ sits relative to the critical value 1/√(d+1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    BelowCritical,
    Critical,
    AboveCritical,
}

impl Regime {
    pub fn classify(d: usize, delta: Delta) -> Self {
        if delta.critical {
            return Regime::Critical;
        }
        let gap = delta.squared - 1.0 / (d as f64 + 1.0);
        if gap.abs() <= REGIME_TOLERANCE {
            Regime::Critical
        } else if gap < 0.0 {
            Regime::BelowCritical
        } else {
            Regime::AboveCritical
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::BelowCritical => "below_critical",
            Regime::Critical => "critical",
            Regime::AboveCritical => "above_critical",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Ambient dimension plus distortion parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistortionParams {
    pub d: usize,
    pub delta: Delta,
}

impl DistortionParams {
    pub fn new(d: usize, delta: Delta) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidParameter(
                "dimension must be at least 1".into(),
            ));
        }
        Ok(Self { d, delta })
    }

    pub fn critical(d: usize) -> Result<Self> {
        Self::new(d, Delta::critical(d))
    }

    pub fn regime(&self) -> Regime {
        Regime::classify(self.d, self.delta)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn critical_squares_exactly() {
        let delta = Delta::critical(3);
        assert_eq!(delta.squared(), 0.25);
        assert_eq!(delta.value(), 0.5);
        assert_eq!(Regime::classify(3, delta), Regime::Critical);
    }

    #[test]
    fn regime_from_float_input() {
        assert_eq!(
            Regime::classify(3, Delta::new(0.5).unwrap()),
            Regime::Critical
        );
        assert_eq!(
            Regime::classify(3, Delta::new(0.49).unwrap()),
            Regime::BelowCritical
        );
        assert_eq!(
            Regime::classify(3, Delta::new(0.51).unwrap()),
            Regime::AboveCritical
        );
        // 1/sqrt(3) rounded still lands in the critical band.
        let rounded = Delta::new(1.0 / 3f64.sqrt()).unwrap();
        assert_eq!(Regime::classify(2, rounded), Regime::Critical);
    }

    #[test]
    fn unit_range() {
        assert!(Delta::new(1.0).unwrap().require_unit_range().is_ok());
        assert!(Delta::new(0.0).unwrap().require_unit_range().is_err());
        assert!(Delta::new(1.5).unwrap().require_unit_range().is_err());
        assert!(Delta::new(f64::NAN).is_err());
        assert!(DistortionParams::new(0, Delta::new(0.5).unwrap()).is_err());
    }
}
