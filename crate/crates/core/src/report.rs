use std::fmt;

use serde::{Deserialize, Serialize};

/// Self-describing outcome of one machine check.
///
/// `pass` holds exactly when `max_deviation <= tolerance` and every side
/// condition recorded with [`OracleReport::require`] held.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub claim: String,
    pub d: usize,
    pub delta: Option<f64>,
    pub box_radius: Option<i64>,
    pub measured: Vec<f64>,
    pub reference: Vec<f64>,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub notes: Vec<String>,
    failed_conditions: Vec<String>,
}

impl OracleReport {
    pub fn new(claim: impl Into<String>, d: usize, tolerance: f64) -> Self {
        Self {
            claim: claim.into(),
            d,
            delta: None,
            box_radius: None,
            measured: Vec::new(),
            reference: Vec::new(),
            max_deviation: 0.0,
            tolerance,
            pass: true,
            notes: Vec::new(),
            failed_conditions: Vec::new(),
        }
    }

    pub fn with_delta(mut self, delta: f64) -> Self {
        self.delta = Some(delta);
        self
    }

    pub fn with_box(mut self, box_radius: i64) -> Self {
        self.box_radius = Some(box_radius);
        self
    }

    /// Records measured/reference pairs; the deviation is absolute.
    pub fn compare(&mut self, measured: f64, reference: f64) {
        self.measured.push(measured);
        self.reference.push(reference);
        self.record_deviation((measured - reference).abs());
    }

    /// Records a pair compared relative to the reference magnitude.
    pub fn compare_relative(&mut self, measured: f64, reference: f64) {
        self.measured.push(measured);
        self.reference.push(reference);
        self.record_deviation(
            (measured - reference).abs() / reference.abs().max(f64::MIN_POSITIVE),
        );
    }

    /// Records a side condition; a false condition fails the report.
    pub fn require(&mut self, condition: bool, description: impl Into<String>) {
        if !condition {
            self.failed_conditions.push(description.into());
        }
        self.refresh();
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    /// Re-evaluates `pass` against a different deviation tolerance. Side
    /// conditions keep the outcome they were recorded with.
    pub fn set_tolerance(&mut self, tolerance: f64) {
        self.tolerance = tolerance;
        self.refresh();
    }

    pub fn failed_conditions(&self) -> &[String] {
        &self.failed_conditions
    }

    fn record_deviation(&mut self, deviation: f64) {
        // NaN counts as an unbounded deviation.
        let deviation = if deviation.is_nan() {
            f64::INFINITY
        } else {
            deviation
        };
        self.max_deviation = self.max_deviation.max(deviation);
        self.refresh();
    }

    fn refresh(&mut self) {
        self.pass = self.max_deviation <= self.tolerance && self.failed_conditions.is_empty();
    }
}

impl fmt::Display for OracleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {} d={}",
            if self.pass { "PASS" } else { "FAIL" },
            self.claim,
            self.d
        )?;
        if let Some(delta) = self.delta {
            write!(f, " delta={delta}")?;
        }
        if let Some(b) = self.box_radius {
            write!(f, " box={b}")?;
        }
        writeln!(
            f,
            " max_deviation={:.3e} tolerance={:.1e}",
            self.max_deviation, self.tolerance
        )?;
        if !self.measured.is_empty() {
            writeln!(f, "  measured:  {:?}", self.measured)?;
            writeln!(f, "  reference: {:?}", self.reference)?;
        }
        for note in &self.notes {
            writeln!(f, "  note: {note}")?;
        }
        for failure in &self.failed_conditions {
            writeln!(f, "  violated: {failure}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_tracks_deviation_and_conditions() {
        let mut r = OracleReport::new("x", 2, 1e-9);
        r.compare(1.0, 1.0 + 1e-12);
        assert!(r.pass);
        r.require(true, "fine");
        assert!(r.pass);
        r.compare(1.0, 1.1);
        assert!(!r.pass);

        let mut r = OracleReport::new("y", 2, 1e-9);
        r.require(false, "broken");
        assert!(!r.pass);
        assert!(r.to_string().contains("violated: broken"));
    }

    #[test]
    fn nan_fails() {
        let mut r = OracleReport::new("nan", 2, 1e-9);
        r.compare(f64::NAN, 0.0);
        r.compare(1.0, 1.0);
        assert!(!r.pass);
    }
}
