//! Quality tables over (d, δ) grids and their CSV form.
//!
//! CSV layout: the header [`CSV_HEADER`], one row per (d, δ) sorted by d then
//! δ, floats printed with 12 significant digits in `%g` style. Output is
//! byte-identical across runs for the same configuration.

use std::fmt::Write as _;
use std::io;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::closed_forms::{self, QualityRecord};
use crate::error::{Error, Result};
use crate::params::{Delta, REGIME_TOLERANCE};

pub const CSV_HEADER: &str =
    "d,delta,regime,protection,normalized_protection,power_end,power_mid,thickness,aspect,circumradius";

/// Significant digits used for every float in the CSV output.
pub const CSV_DIGITS: usize = 12;

/// One comma-separated item of a δ specification.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum DeltaItem {
    Value(f64),
    /// start:stop:step, both ends inclusive.
    Range {
        start: f64,
        stop: f64,
        step: f64,
    },
    /// 1/√(d+1), resolved per dimension.
    Critical,
}

/// A list of δ values, ranges and the `crit` token, e.g. `0.1:1.0:0.1,crit`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeltaSpec {
    pub items: Vec<DeltaItem>,
}

impl FromStr for DeltaSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parse_num = |t: &str| -> Result<f64> {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidParameter(format!("cannot parse delta value '{t}'")))
        };
        let mut items = Vec::new();
        for token in s.split(',').map(str::trim) {
            if token.is_empty() {
                return Err(Error::InvalidParameter(format!(
                    "empty item in delta list '{s}'"
                )));
            }
            if token.eq_ignore_ascii_case("crit") {
                items.push(DeltaItem::Critical);
                continue;
            }
            let parts: Vec<&str> = token.split(':').collect();
            match parts.as_slice() {
                [v] => items.push(DeltaItem::Value(parse_num(v)?)),
                [a, b, c] => {
                    let (start, stop, step) = (parse_num(a)?, parse_num(b)?, parse_num(c)?);
                    if step.is_nan() || step <= 0.0 || stop < start {
                        return Err(Error::InvalidParameter(format!(
                            "range '{token}' needs step > 0 and start <= stop"
                        )));
                    }
                    items.push(DeltaItem::Range { start, stop, step });
                }
                _ => {
                    return Err(Error::InvalidParameter(format!(
                        "'{token}' is neither a number, start:stop:step, nor 'crit'"
                    )))
                }
            }
        }
        Ok(Self { items })
    }
}

impl DeltaSpec {
    /// Concrete δ values for dimension `d`, ascending, each in (0, 1].
    ///
    /// A grid value within 1e−12 of the critical one is replaced by it.
    pub fn resolve(&self, d: usize) -> Result<Vec<Delta>> {
        let mut out = Vec::new();
        for item in &self.items {
            match *item {
                DeltaItem::Value(v) => out.push(Delta::new(v)?),
                DeltaItem::Range { start, stop, step } => {
                    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
                    if count > 1_000_000 {
                        return Err(Error::ResourceLimit(format!("range has {count} samples")));
                    }
                    for k in 0..count {
                        // Snap to 1e-12 so 0.1:1.0:0.1 ends at exactly 1.
                        let v = ((start + k as f64 * step) * 1e12).round() / 1e12;
                        out.push(Delta::new(v)?);
                    }
                }
                DeltaItem::Critical => out.push(Delta::critical(d)),
            }
        }
        for delta in &out {
            delta.require_unit_range()?;
        }
        out.sort_by(|a, b| {
            a.value()
                .total_cmp(&b.value())
                .then(b.is_symbolic_critical().cmp(&a.is_symbolic_critical()))
        });
        out.dedup_by(|later, earlier| (later.value() - earlier.value()).abs() <= REGIME_TOLERANCE);
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub dims: Vec<usize>,
    pub deltas: DeltaSpec,
}

/// Where each measure peaks on the sampled grid, next to 1/√(d+1).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Peak {
    pub d: usize,
    pub critical_delta: f64,
    pub argmax_normalized_protection: f64,
    pub argmax_thickness: f64,
    pub argmax_aspect: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    pub records: Vec<QualityRecord>,
    pub peaks: Vec<Peak>,
}

/// Quality records for every requested (d, δ); rows are computed in parallel
/// and returned sorted by (d, δ).
pub fn figure_sweep(config: &SweepConfig) -> Result<SweepTable> {
    if config.dims.is_empty() {
        return Err(Error::InvalidParameter("no dimensions requested".into()));
    }
    let mut dims = config.dims.clone();
    dims.sort_unstable();
    dims.dedup();
    if let Some(bad) = dims.iter().find(|&&d| d < 2) {
        return Err(Error::InvalidParameter(format!(
            "dimensions must be >= 2, got {bad}"
        )));
    }
    let jobs = dims
        .iter()
        .map(|&d| {
            config
                .deltas
                .resolve(d)
                .map(|ds| ds.into_iter().map(move |x| (d, x)))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect::<Vec<_>>();
    let records = jobs
        .par_iter()
        .map(|&(d, delta)| closed_forms::quality_record(d, delta))
        .collect::<Result<Vec<_>>>()?;

    let peaks = dims
        .iter()
        .map(|&d| {
            let rows: Vec<&QualityRecord> = records.iter().filter(|r| r.d == d).collect();
            let argmax = |f: fn(&QualityRecord) -> f64| {
                rows.iter()
                    .max_by(|a, b| f(a).total_cmp(&f(b)))
                    .map(|r| r.delta)
                    .unwrap_or(f64::NAN)
            };
            Peak {
                d,
                critical_delta: closed_forms::critical_delta(d),
                argmax_normalized_protection: argmax(|r| r.normalized_protection),
                argmax_thickness: argmax(|r| r.thickness),
                argmax_aspect: argmax(|r| r.aspect),
            }
        })
        .collect();
    Ok(SweepTable { records, peaks })
}

/// `%.{digits}g` formatting: fixed notation for exponents in [−5, digits),
/// scientific otherwise, trailing zeros removed.
pub fn format_significant(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= digits as i32 {
        format!(
            "{}e{}{:02}",
            trim_zeros(mantissa),
            if exp < 0 { '-' } else { '+' },
            exp.abs()
        )
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn csv_row(record: &QualityRecord) -> String {
    let mut line = format!(
        "{},{},{}",
        record.d,
        format_significant(record.delta, CSV_DIGITS),
        record.regime
    );
    for value in [
        record.protection,
        record.normalized_protection,
        record.power_end,
        record.power_mid,
        record.thickness,
        record.aspect,
        record.circumradius,
    ] {
        write!(line, ",{}", format_significant(value, CSV_DIGITS)).expect("writing to a String");
    }
    line
}

pub fn write_csv<W: io::Write>(records: &[QualityRecord], mut out: W) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for record in records {
        writeln!(out, "{}", csv_row(record))?;
    }
    out.flush()
}
