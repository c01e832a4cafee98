//! Python bindings for distgrid.
//!
//! δ arguments accept a float in (0, 1] or the string "crit".

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use distgrid_core::closed_forms;
use distgrid_core::freudenthal::{canonical_simplex, distorted_simplex, opposite_set};
use distgrid_core::lattice;
use distgrid_core::sweep::{self, SweepConfig};
use distgrid_core::verification;
use distgrid_core::{Delta, DistortionParams, Point};

fn to_py(e: distgrid_core::Error) -> PyErr {
    match e {
        distgrid_core::Error::ResourceLimit(_) | distgrid_core::Error::Inconsistent(_) => {
            PyRuntimeError::new_err(e.to_string())
        }
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn delta_arg(d: usize, value: &Bound<'_, PyAny>) -> PyResult<Delta> {
    if let Ok(s) = value.extract::<String>() {
        return if s.trim().eq_ignore_ascii_case("crit") {
            Ok(Delta::critical(d))
        } else {
            Err(PyValueError::new_err(format!(
                "delta must be a float or 'crit', got '{s}'"
            )))
        };
    }
    let v: f64 = value.extract()?;
    let delta = Delta::new(v).map_err(to_py)?;
    delta.require_unit_range().map_err(to_py)?;
    Ok(delta)
}

/// Closed-form measures of the distorted grid at one (d, δ).
#[pyclass(frozen, get_all, module = "distgrid")]
struct QualityRecord {
    d: usize,
    delta: f64,
    regime: String,
    protection: f64,
    normalized_protection: f64,
    power_end: f64,
    power_mid: f64,
    thickness: f64,
    aspect: f64,
    circumradius: f64,
}

#[pymethods]
impl QualityRecord {
    fn __repr__(&self) -> String {
        format!(
            "QualityRecord(d={}, delta={}, regime='{}', protection={}, normalized_protection={}, thickness={}, aspect={})",
            self.d, self.delta, self.regime, self.protection, self.normalized_protection, self.thickness, self.aspect
        )
    }
}

impl From<closed_forms::QualityRecord> for QualityRecord {
    fn from(r: closed_forms::QualityRecord) -> Self {
        Self {
            d: r.d,
            delta: r.delta,
            regime: r.regime.as_str().to_string(),
            protection: r.protection,
            normalized_protection: r.normalized_protection,
            power_end: r.power_end,
            power_mid: r.power_mid,
            thickness: r.thickness,
            aspect: r.aspect,
            circumradius: r.circumradius,
        }
    }
}

/// Outcome of a machine check.
#[pyclass(frozen, get_all, module = "distgrid")]
struct OracleReport {
    claim: String,
    d: usize,
    delta: Option<f64>,
    box_radius: Option<i64>,
    measured: Vec<f64>,
    reference: Vec<f64>,
    max_deviation: f64,
    tolerance: f64,
    passed: bool,
    notes: Vec<String>,
    failed_conditions: Vec<String>,
    text: String,
}

#[pymethods]
impl OracleReport {
    fn __str__(&self) -> String {
        self.text.clone()
    }

    fn __repr__(&self) -> String {
        format!(
            "OracleReport(claim='{}', d={}, passed={})",
            self.claim, self.d, self.passed
        )
    }

    fn __bool__(&self) -> bool {
        self.passed
    }
}

impl From<distgrid_core::OracleReport> for OracleReport {
    fn from(r: distgrid_core::OracleReport) -> Self {
        Self {
            text: r.to_string(),
            failed_conditions: r.failed_conditions().to_vec(),
            claim: r.claim,
            d: r.d,
            delta: r.delta,
            box_radius: r.box_radius,
            measured: r.measured,
            reference: r.reference,
            max_deviation: r.max_deviation,
            tolerance: r.tolerance,
            passed: r.pass,
            notes: r.notes,
        }
    }
}

/// T_δ(ℤ^d) together with its canonical Freudenthal simplex.
#[pyclass(frozen, module = "distgrid")]
struct DistortedGrid {
    params: DistortionParams,
}

#[pymethods]
impl DistortedGrid {
    #[new]
    fn new(d: usize, delta: &Bound<'_, PyAny>) -> PyResult<Self> {
        if d < 2 {
            return Err(PyValueError::new_err("dimension must be at least 2"));
        }
        let delta = delta_arg(d, delta)?;
        Ok(Self {
            params: DistortionParams::new(d, delta).map_err(to_py)?,
        })
    }

    #[getter]
    fn d(&self) -> usize {
        self.params.d
    }

    #[getter]
    fn delta(&self) -> f64 {
        self.params.delta.value()
    }

    #[getter]
    fn regime(&self) -> &'static str {
        self.params.regime().as_str()
    }

    /// T_δ applied to a point of ℝ^d.
    fn distort(&self, x: Vec<f64>) -> PyResult<Vec<f64>> {
        let p = Point::new(x).map_err(to_py)?;
        Ok(lattice::distort(&p, &self.params)
            .map_err(to_py)?
            .into_coords())
    }

    fn undistort(&self, y: Vec<f64>) -> PyResult<Vec<f64>> {
        let p = Point::new(y).map_err(to_py)?;
        Ok(lattice::undistort(&p, &self.params)
            .map_err(to_py)?
            .into_coords())
    }

    /// Vertices of the distorted canonical simplex.
    fn simplex(&self) -> PyResult<Vec<Vec<f64>>> {
        let s =
            distorted_simplex(&canonical_simplex(self.params.d), &self.params).map_err(to_py)?;
        Ok(s.vertices().iter().map(|v| v.coords().to_vec()).collect())
    }

    /// Integer preimages of the points opposite each vertex.
    fn opposite_points(&self) -> Vec<Vec<i64>> {
        opposite_set(&canonical_simplex(self.params.d)).points
    }

    fn circumcenter(&self) -> PyResult<Vec<f64>> {
        Ok(closed_forms::circumcenter(self.params.d, self.params.delta)
            .map_err(to_py)?
            .into_coords())
    }

    fn measures(&self) -> PyResult<QualityRecord> {
        Ok(
            closed_forms::quality_record(self.params.d, self.params.delta)
                .map_err(to_py)?
                .into(),
        )
    }

    /// Coordinate-only measures of the distorted simplex, as a dict.
    fn measured<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, pyo3::types::PyDict>> {
        let s =
            distorted_simplex(&canonical_simplex(self.params.d), &self.params).map_err(to_py)?;
        let m = distgrid_core::geometry::simplex_measures(&s).map_err(to_py)?;
        let out = pyo3::types::PyDict::new(py);
        out.set_item("circumcenter", m.circumcenter.coords().to_vec())?;
        out.set_item("circumradius", m.circumradius)?;
        out.set_item("longest_edge", m.longest_edge)?;
        out.set_item("heights", m.heights.clone())?;
        out.set_item("thickness", m.thickness)?;
        out.set_item("aspect", m.aspect)?;
        Ok(out)
    }

    fn __repr__(&self) -> String {
        format!(
            "DistortedGrid(d={}, delta={})",
            self.params.d, self.params.delta
        )
    }
}

#[pyfunction]
fn critical_delta(d: usize) -> f64 {
    closed_forms::critical_delta(d)
}

#[pyfunction]
fn quality_record(d: usize, delta: &Bound<'_, PyAny>) -> PyResult<QualityRecord> {
    let delta = delta_arg(d, delta)?;
    Ok(closed_forms::quality_record(d, delta)
        .map_err(to_py)?
        .into())
}

#[pyfunction]
fn protection(d: usize, delta: &Bound<'_, PyAny>) -> PyResult<f64> {
    closed_forms::protection(d, delta_arg(d, delta)?).map_err(to_py)
}

#[pyfunction]
fn normalized_protection(d: usize, delta: &Bound<'_, PyAny>) -> PyResult<f64> {
    closed_forms::normalized_protection(d, delta_arg(d, delta)?).map_err(to_py)
}

/// (end, middle) power protection.
#[pyfunction]
fn power_protection(d: usize, delta: &Bound<'_, PyAny>) -> PyResult<(f64, f64)> {
    let delta = delta_arg(d, delta)?;
    Ok((
        closed_forms::power_protection_end(delta),
        closed_forms::power_protection_mid(d, delta),
    ))
}

#[pyfunction]
fn thickness(d: usize, delta: &Bound<'_, PyAny>) -> PyResult<f64> {
    closed_forms::thickness(d, delta_arg(d, delta)?).map_err(to_py)
}

#[pyfunction]
fn aspect(d: usize, delta: &Bound<'_, PyAny>) -> PyResult<f64> {
    closed_forms::aspect(d, delta_arg(d, delta)?).map_err(to_py)
}

#[pyfunction]
fn circumradius(d: usize, delta: &Bound<'_, PyAny>) -> PyResult<f64> {
    closed_forms::circumradius(d, delta_arg(d, delta)?).map_err(to_py)
}

#[pyfunction]
fn circumcenter(d: usize, delta: &Bound<'_, PyAny>) -> PyResult<Vec<f64>> {
    Ok(closed_forms::circumcenter(d, delta_arg(d, delta)?)
        .map_err(to_py)?
        .into_coords())
}

#[pyfunction]
#[pyo3(signature = (d, delta, box_radius = verification::DEFAULT_BOX))]
fn protection_oracle(
    py: Python<'_>,
    d: usize,
    delta: &Bound<'_, PyAny>,
    box_radius: i64,
) -> PyResult<OracleReport> {
    let delta = delta_arg(d, delta)?;
    py.detach(|| verification::protection_oracle(d, delta, box_radius))
        .map(Into::into)
        .map_err(to_py)
}

#[pyfunction]
fn uniform_protection_check(
    py: Python<'_>,
    d: usize,
    delta: &Bound<'_, PyAny>,
) -> PyResult<OracleReport> {
    let delta = delta_arg(d, delta)?;
    py.detach(|| verification::uniform_protection_check(d, delta))
        .map(Into::into)
        .map_err(to_py)
}

#[pyfunction]
fn minkowski_check(py: Python<'_>, d: usize, delta: &Bound<'_, PyAny>) -> PyResult<OracleReport> {
    let delta = delta_arg(d, delta)?;
    py.detach(|| verification::minkowski_check(d, delta))
        .map(Into::into)
        .map_err(to_py)
}

/// The three lattice isometry checks for dimension d.
#[pyfunction]
#[pyo3(signature = (d, box_radius = lattice::DEFAULT_SET_BOX))]
fn isometry_checks(d: usize, box_radius: i64) -> PyResult<Vec<OracleReport>> {
    if d < 2 {
        return Err(PyValueError::new_err("dimension must be at least 2"));
    }
    Ok(vec![
        lattice::check_isometry_to_ad(d).map_err(to_py)?.into(),
        lattice::check_isometry_to_astar_at_critical(d)
            .map_err(to_py)?
            .into(),
        lattice::check_isometry_t0_to_astar(d, box_radius)
            .map_err(to_py)?
            .into(),
    ])
}

/// Sweep table as CSV text, e.g. `sweep_csv([2, 3], "0.1:1.0:0.1,crit")`.
#[pyfunction]
fn sweep_csv(py: Python<'_>, dims: Vec<usize>, delta: &str) -> PyResult<String> {
    let config = SweepConfig {
        dims,
        deltas: delta.parse().map_err(to_py)?,
    };
    let table = py.detach(|| sweep::figure_sweep(&config)).map_err(to_py)?;
    let mut buf = Vec::new();
    sweep::write_csv(&table.records, &mut buf)
        .map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    String::from_utf8(buf).map_err(|e| PyRuntimeError::new_err(e.to_string()))
}

#[pymodule]
fn distgrid(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("CSV_HEADER", sweep::CSV_HEADER)?;
    m.add_class::<QualityRecord>()?;
    m.add_class::<OracleReport>()?;
    m.add_class::<DistortedGrid>()?;
    m.add_function(wrap_pyfunction!(critical_delta, m)?)?;
    m.add_function(wrap_pyfunction!(quality_record, m)?)?;
    m.add_function(wrap_pyfunction!(protection, m)?)?;
    m.add_function(wrap_pyfunction!(normalized_protection, m)?)?;
    m.add_function(wrap_pyfunction!(power_protection, m)?)?;
    m.add_function(wrap_pyfunction!(thickness, m)?)?;
    m.add_function(wrap_pyfunction!(aspect, m)?)?;
    m.add_function(wrap_pyfunction!(circumradius, m)?)?;
    m.add_function(wrap_pyfunction!(circumcenter, m)?)?;
    m.add_function(wrap_pyfunction!(protection_oracle, m)?)?;
    m.add_function(wrap_pyfunction!(uniform_protection_check, m)?)?;
    m.add_function(wrap_pyfunction!(minkowski_check, m)?)?;
    m.add_function(wrap_pyfunction!(isometry_checks, m)?)?;
    m.add_function(wrap_pyfunction!(sweep_csv, m)?)?;
    Ok(())
}
