//! `distgrid`: closed-form quality measures, sweeps and machine checks for
//! diagonally distorted grids.
//!
//! Exit status: 0 when every check passes, 1 when a verification fails,
//! 2 on usage errors (bad flags, δ outside (0, 1], unsupported dimension),
//! 3 when the output cannot be written.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use distgrid::closed_forms::{self, QualityRecord};
use distgrid::lattice;
use distgrid::sweep::{self, format_significant, DeltaSpec, SweepConfig, CSV_DIGITS};
use distgrid::verification;
use distgrid::{Delta, OracleReport, Regime};

/// Overrides the 1e-9 deviation tolerance used by `verify`.
const TOLERANCE_ENV: &str = "DISTGRID_TOLERANCE";

#[derive(Parser)]
#[command(
    name = "distgrid",
    version,
    about = "Protection, thickness and aspect ratio of distorted grids"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form quality record for one (d, δ).
    Measures {
        #[arg(long)]
        dim: usize,
        /// δ in (0, 1], or `crit` for 1/√(d+1).
        #[arg(long, value_parser = parse_delta_arg)]
        delta: DeltaArg,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
    },
    /// Quality table over a grid of dimensions and δ values.
    Sweep {
        /// Comma-separated dimensions, each >= 2.
        #[arg(long, value_delimiter = ',', required = true)]
        dims: Vec<usize>,
        /// Comma-separated values, start:stop:step ranges and `crit`.
        #[arg(long, allow_hyphen_values = true)]
        delta: String,
        /// Output file; stdout when omitted.
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = SweepFormat::Csv)]
        format: SweepFormat,
    },
    /// Brute-force oracles against the closed forms.
    Verify {
        #[arg(long)]
        dim: usize,
        #[arg(long, value_parser = parse_delta_arg)]
        delta: DeltaArg,
        /// Enumeration box radius of the protection oracle.
        #[arg(long = "box", default_value_t = verification::DEFAULT_BOX)]
        box_radius: i64,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
    },
    /// Isometries with A_d and A*_d.
    Isometry {
        #[arg(long)]
        dim: usize,
        /// Box radius for the δ = 0 set equality.
        #[arg(long = "box", default_value_t = lattice::DEFAULT_SET_BOX)]
        box_radius: i64,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormat {
    Text,
    Structured,
}

#[derive(Clone, Copy, ValueEnum)]
enum SweepFormat {
    Csv,
    Structured,
}

#[derive(Clone, Copy, Debug)]
enum DeltaArg {
    Critical,
    Value(f64),
}

impl DeltaArg {
    fn resolve(self, d: usize) -> Delta {
        match self {
            DeltaArg::Critical => Delta::critical(d),
            DeltaArg::Value(v) => Delta::new(v).expect("validated by the parser"),
        }
    }
}

fn parse_delta_arg(s: &str) -> Result<DeltaArg, String> {
    if s.trim().eq_ignore_ascii_case("crit") {
        return Ok(DeltaArg::Critical);
    }
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| format!("'{s}' is not a number or 'crit'"))?;
    if v.is_finite() && v > 0.0 && v <= 1.0 {
        Ok(DeltaArg::Value(v))
    } else {
        Err(format!("delta must lie in (0, 1], got {s}"))
    }
}

enum Failure {
    Usage(String),
    Verification,
    Io(String),
}

impl From<distgrid::Error> for Failure {
    fn from(e: distgrid::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

fn tolerance_override() -> Result<Option<f64>, Failure> {
    match std::env::var(TOLERANCE_ENV) {
        Err(_) => Ok(None),
        Ok(raw) => match raw.trim().parse::<f64>() {
            Ok(t) if t.is_finite() && t > 0.0 => Ok(Some(t)),
            _ => Err(Failure::Usage(format!(
                "{TOLERANCE_ENV} must be a positive number, got '{raw}'"
            ))),
        },
    }
}

fn require_dim(d: usize) -> Result<(), Failure> {
    if d < 2 {
        return Err(Failure::Usage(format!("--dim must be at least 2, got {d}")));
    }
    Ok(())
}

fn print_json<T: Serialize>(value: &T) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Failure::Io(e.to_string()))?;
    println!("{text}");
    Ok(())
}

fn measures(d: usize, delta: DeltaArg, format: ReportFormat) -> Result<(), Failure> {
    require_dim(d)?;
    let record = closed_forms::quality_record(d, delta.resolve(d))?;
    match format {
        ReportFormat::Structured => print_json(&record),
        ReportFormat::Text => {
            print!("{}", record_text(&record));
            Ok(())
        }
    }
}

fn record_text(r: &QualityRecord) -> String {
    let g = |x: f64| format_significant(x, CSV_DIGITS);
    let rows = [
        ("protection", r.protection),
        ("normalized_protection", r.normalized_protection),
        ("power_end", r.power_end),
        ("power_mid", r.power_mid),
        ("thickness", r.thickness),
        ("aspect", r.aspect),
        ("circumradius", r.circumradius),
    ];
    let mut out = format!(
        "d = {}\ndelta = {}\nregime = {}\n",
        r.d,
        g(r.delta),
        r.regime
    );
    for (name, value) in rows {
        out.push_str(&format!("{name} = {}\n", g(value)));
    }
    out
}

#[derive(Serialize)]
struct SweepDocument<'a> {
    dims: &'a [usize],
    delta: &'a str,
    csv_header: &'a str,
    table: &'a sweep::SweepTable,
}

fn run_sweep(
    dims: Vec<usize>,
    delta: String,
    output: Option<PathBuf>,
    format: SweepFormat,
) -> Result<(), Failure> {
    let deltas: DeltaSpec = delta.parse()?;
    let config = SweepConfig {
        dims: dims.clone(),
        deltas,
    };
    let table = sweep::figure_sweep(&config)?;
    let mut sink: Box<dyn Write> = match &output {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    match format {
        SweepFormat::Csv => sweep::write_csv(&table.records, &mut sink)?,
        SweepFormat::Structured => {
            let doc = SweepDocument {
                dims: &dims,
                delta: &delta,
                csv_header: sweep::CSV_HEADER,
                table: &table,
            };
            serde_json::to_writer_pretty(&mut sink, &doc)
                .map_err(|e| Failure::Io(e.to_string()))?;
            writeln!(sink)?;
        }
    }
    sink.flush()?;
    if let Some(path) = output {
        eprintln!("wrote {} rows to {}", table.records.len(), path.display());
    }
    Ok(())
}

fn emit_reports(reports: &[OracleReport], format: ReportFormat) -> Result<(), Failure> {
    match format {
        ReportFormat::Structured => print_json(&reports)?,
        ReportFormat::Text => {
            for report in reports {
                print!("{report}");
            }
        }
    }
    if reports.iter().all(|r| r.pass) {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn verify(d: usize, delta: DeltaArg, box_radius: i64, format: ReportFormat) -> Result<(), Failure> {
    require_dim(d)?;
    let tolerance = tolerance_override()?;
    let delta = delta.resolve(d);
    let mut reports = vec![
        verification::protection_oracle(d, delta, box_radius)?,
        verification::uniform_protection_check(d, delta)?,
        verification::minkowski_check(d, delta)?,
    ];
    if Regime::classify(d, delta) == Regime::Critical {
        reports.push(lattice::check_isometry_to_astar_at_critical(d)?);
    }
    if let Some(t) = tolerance {
        for report in &mut reports {
            report.set_tolerance(t);
        }
    }
    emit_reports(&reports, format)
}

fn isometry(d: usize, box_radius: i64, format: ReportFormat) -> Result<(), Failure> {
    require_dim(d)?;
    let reports = vec![
        lattice::check_isometry_to_ad(d)?,
        lattice::check_isometry_to_astar_at_critical(d)?,
        lattice::check_isometry_t0_to_astar(d, box_radius)?,
    ];
    emit_reports(&reports, format)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Measures { dim, delta, format } => measures(dim, delta, format),
        Command::Sweep {
            dims,
            delta,
            output,
            format,
        } => run_sweep(dims, delta, output, format),
        Command::Verify {
            dim,
            delta,
            box_radius,
            format,
        } => verify(dim, delta, box_radius, format),
        Command::Isometry {
            dim,
            box_radius,
            format,
        } => isometry(dim, box_radius, format),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => {
            eprintln!("verification failed");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
