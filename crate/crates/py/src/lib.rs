//! Python bindings: `import kneadlab`.
//!
//! Families are passed by name (`"logistic"`, `"sine"`); words as strings
//! over `{L, C, R}` or as [`PyWord`] objects.

use kneadlab::entropy;
use kneadlab::enumeration;
use kneadlab::inverse::{self, Branch, Level, LevelFunction};
use kneadlab::schwarzian;
use kneadlab::solver::{self, SolveOptions};
use kneadlab::sweep;
use kneadlab::symbolic::{self, Order};
use kneadlab::{BuiltinFamily, KneadError, Termination, Word};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn err(e: KneadError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn family(name: &str) -> PyResult<BuiltinFamily> {
    name.parse().map_err(err)
}

fn word(s: &str) -> PyResult<Word> {
    s.parse().map_err(err)
}

fn order_name(o: Order) -> &'static str {
    match o {
        Order::Less => "less",
        Order::Equal => "equal",
        Order::Greater => "greater",
        Order::Undecided => "undecided",
    }
}

fn termination_name(t: Termination) -> &'static str {
    match t {
        Termination::HitC => "hit_C",
        Termination::Truncated => "truncated",
    }
}

/// A word over `{L, C, R}`: finite if it ends in `C`, truncated otherwise.
#[pyclass(name = "Word", frozen, eq, hash, from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct PyWord(Word);

#[pymethods]
impl PyWord {
    #[new]
    fn new(s: &str) -> PyResult<Self> {
        Ok(PyWord(word(s)?))
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Word('{}')", self.0)
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    #[getter]
    fn is_finite(&self) -> bool {
        self.0.is_finite()
    }

    /// Parity-lexicographic order against `other`.
    fn compare(&self, other: &PyWord) -> &'static str {
        order_name(symbolic::compare(&self.0, &other.0))
    }

    fn is_shift_maximal(&self) -> bool {
        symbolic::is_shift_maximal(&self.0)
    }

    fn shift(&self) -> PyResult<PyWord> {
        Ok(PyWord(symbolic::shift(&self.0).map_err(err)?))
    }
}

#[pyclass(name = "KneadingResult", frozen, get_all)]
struct PyKneadingResult {
    word: String,
    termination: &'static str,
    c_distance: f64,
}

impl From<kneadlab::KneadingResult> for PyKneadingResult {
    fn from(k: kneadlab::KneadingResult) -> Self {
        PyKneadingResult {
            word: k.word.to_string(),
            termination: termination_name(k.termination),
            c_distance: k.c_distance,
        }
    }
}

#[pymethods]
impl PyKneadingResult {
    fn __repr__(&self) -> String {
        format!(
            "KneadingResult(word='{}', termination='{}', c_distance={})",
            self.word, self.termination, self.c_distance
        )
    }
}

#[pyclass(name = "SolveReport", frozen, get_all)]
struct PySolveReport {
    target: String,
    mu_star: f64,
    residual: f64,
    bracket_history: Vec<(f64, f64)>,
    newton_steps: usize,
}

impl From<solver::SolveReport> for PySolveReport {
    fn from(r: solver::SolveReport) -> Self {
        PySolveReport {
            target: r.target.to_string(),
            mu_star: r.mu_star,
            residual: r.residual,
            bracket_history: r.bracket_history,
            newton_steps: r.newton_steps,
        }
    }
}

#[pymethods]
impl PySolveReport {
    fn __repr__(&self) -> String {
        format!(
            "SolveReport(target='{}', mu_star={}, residual={:e})",
            self.target, self.mu_star, self.residual
        )
    }
}

#[pyfunction]
fn families() -> Vec<String> {
    BuiltinFamily::ALL.iter().map(|f| f.to_string()).collect()
}

#[pyfunction]
fn iterate(fam: &str, mu: f64, x0: f64, n: usize) -> PyResult<Vec<f64>> {
    let orbit = kneadlab::iterate(&family(fam)?, mu, x0, n).map_err(err)?;
    Ok(orbit.into_iter().map(|p| p.value).collect())
}

#[pyfunction]
fn iterate_derivative(fam: &str, mu: f64, x: f64, n: usize) -> PyResult<f64> {
    kneadlab::iterate_derivative(&family(fam)?, mu, x, n).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (fam, mu, x0, max_len = kneadlab::kneading::DEFAULT_MAX_LEN, c_tol = kneadlab::kneading::DEFAULT_C_TOL))]
fn itinerary(
    fam: &str,
    mu: f64,
    x0: f64,
    max_len: usize,
    c_tol: f64,
) -> PyResult<PyKneadingResult> {
    Ok(kneadlab::itinerary(&family(fam)?, mu, x0, max_len, c_tol)
        .map_err(err)?
        .into())
}

#[pyfunction]
#[pyo3(signature = (fam, mu, max_len = kneadlab::kneading::DEFAULT_MAX_LEN, c_tol = kneadlab::kneading::DEFAULT_C_TOL))]
fn kneading_sequence(fam: &str, mu: f64, max_len: usize, c_tol: f64) -> PyResult<PyKneadingResult> {
    Ok(
        kneadlab::kneading_sequence(&family(fam)?, mu, max_len, c_tol)
            .map_err(err)?
            .into(),
    )
}

#[pyfunction]
fn compare(a: &str, b: &str) -> PyResult<&'static str> {
    Ok(order_name(symbolic::compare(&word(a)?, &word(b)?)))
}

#[pyfunction]
fn is_shift_maximal(w: &str) -> PyResult<bool> {
    Ok(symbolic::is_shift_maximal(&word(w)?))
}

#[pyfunction]
#[pyo3(signature = (fam, mu, branch, y, tol = inverse::DEFAULT_INVERT_TOL))]
fn invert_branch(fam: &str, mu: f64, branch: &str, y: f64, tol: f64) -> PyResult<f64> {
    let b = match branch {
        "L" => Branch::L,
        "R" => Branch::R,
        _ => {
            return Err(PyValueError::new_err(format!(
                "branch must be 'L' or 'R', got {branch:?}"
            )))
        }
    };
    inverse::invert_branch(&family(fam)?, mu, b, y, tol).map_err(err)
}

/// Level function value, or `None` on a domain violation.
#[pyfunction]
#[pyo3(signature = (fam, branches, mu, tol = inverse::DEFAULT_INVERT_TOL))]
fn level(fam: &str, branches: &str, mu: f64, tol: f64) -> PyResult<Option<f64>> {
    let f = family(fam)?;
    let level =
        LevelFunction::new(&f, inverse::parse_branches(branches).map_err(err)?).map_err(err)?;
    Ok(match level.eval(mu, tol).map_err(err)? {
        Level::Value { x } => Some(x),
        Level::DomainViolation { .. } => None,
    })
}

/// Fixed points of the level function of a finite word, as dicts.
#[pyfunction]
#[pyo3(signature = (fam, w, lo = 0.0, hi = 1.0, tol = inverse::DEFAULT_LEVEL_TOL))]
fn superstable<'py>(
    py: Python<'py>,
    fam: &str,
    w: &str,
    lo: f64,
    hi: f64,
    tol: f64,
) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let f = family(fam)?;
    let level = LevelFunction::for_word(&f, &word(w)?).map_err(err)?;
    inverse::level_fixed_points(&level, lo, hi, tol)
        .map_err(err)?
        .into_iter()
        .map(|p| {
            let d = PyDict::new(py);
            d.set_item("mu", p.mu)?;
            d.set_item("level_residual", p.level_residual)?;
            d.set_item("forward_residual", p.forward_residual)?;
            d.set_item("verified", p.verified)?;
            Ok(d)
        })
        .collect()
}

#[pyfunction]
#[pyo3(signature = (fam, w, lo = None, hi = None, tol = solver::DEFAULT_SOLVE_TOL))]
fn solve(
    fam: &str,
    w: &str,
    lo: Option<f64>,
    hi: Option<f64>,
    tol: f64,
) -> PyResult<PySolveReport> {
    let f = family(fam)?;
    let target = word(w)?;
    let opts = SolveOptions {
        tol,
        ..SolveOptions::default()
    };
    let report = match (lo, hi) {
        (Some(lo), Some(hi)) => solver::solve_word(&f, &target, lo, hi, &opts),
        (None, None) => solver::solve_discovered(&f, &target, &opts),
        _ => return Err(PyValueError::new_err("give both lo and hi, or neither")),
    };
    Ok(report.map_err(err)?.into())
}

/// Reports for every admissible word up to `max_period`, sorted by `mu*`.
#[pyfunction]
#[pyo3(signature = (fam, max_period, tol = solver::DEFAULT_SOLVE_TOL))]
fn solve_all(fam: &str, max_period: u32, tol: f64) -> PyResult<Vec<PySolveReport>> {
    let words = enumeration::admissible_up_to(max_period).map_err(err)?;
    let all = solver::solve_all(
        &family(fam)?,
        &words,
        &SolveOptions {
            tol,
            ..SolveOptions::default()
        },
    );
    if let Some(f) = all.failures.first() {
        return Err(PyValueError::new_err(format!("{}: {}", f.target, f.error)));
    }
    Ok(all.reports.into_iter().map(Into::into).collect())
}

#[pyfunction]
fn enumerate_admissible(n: u32) -> PyResult<Vec<String>> {
    Ok(enumeration::enumerate_admissible(n)
        .map_err(err)?
        .iter()
        .map(|w| w.to_string())
        .collect())
}

#[pyfunction]
fn formula_count(n: u32) -> PyResult<u128> {
    enumeration::formula_count(n).map_err(err)
}

#[pyfunction]
fn lap_numbers(fam: &str, mu: f64, n_max: usize) -> PyResult<Vec<u64>> {
    Ok(entropy::lap_numbers(&family(fam)?, mu, n_max)
        .map_err(err)?
        .into_iter()
        .map(|p| p.laps)
        .collect())
}

#[pyfunction]
#[pyo3(signature = (fam, mu, n_max = entropy::DEFAULT_SWEEP_NMAX))]
fn entropy_lap(fam: &str, mu: f64, n_max: usize) -> PyResult<f64> {
    entropy::entropy_lap(&family(fam)?, mu, n_max).map_err(err)
}

#[pyfunction]
fn entropy_matrix(w: &str) -> PyResult<f64> {
    entropy::entropy_matrix(&word(w)?).map_err(err)
}

/// Minimum Schwarzian derivative of both inverse branches on a grid.
#[pyfunction]
#[pyo3(signature = (fam, n_mu = 50, n_y = 50))]
fn schwarzian_check<'py>(
    py: Python<'py>,
    fam: &str,
    n_mu: usize,
    n_y: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let (mus, fracs) = schwarzian::positivity_grid(n_mu, n_y);
    let r = schwarzian::verify_positive_schwarzian(&family(fam)?, &mus, &fracs).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("samples", r.samples)?;
    d.set_item("min_s_left", r.min_s_left)?;
    d.set_item("min_s_right", r.min_s_right)?;
    d.set_item("min_s", r.min_s)?;
    d.set_item("pass", r.pass)?;
    Ok(d)
}

/// Kneading monotonicity sweep; words and parameters plus reversal counts.
#[pyfunction]
#[pyo3(signature = (fam, grid_size = 10_000, trunc_len = sweep::DEFAULT_SWEEP_TRUNC, c_tol = kneadlab::kneading::DEFAULT_C_TOL))]
fn kneading_sweep<'py>(
    py: Python<'py>,
    fam: &str,
    grid_size: usize,
    trunc_len: usize,
    c_tol: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let f = family(fam)?;
    let r = py
        .detach(|| sweep::kneading_sweep(&f, grid_size, trunc_len, c_tol))
        .map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("mu", r.points.iter().map(|p| p.mu).collect::<Vec<_>>())?;
    d.set_item(
        "word",
        r.points
            .iter()
            .map(|p| p.word.to_string())
            .collect::<Vec<_>>(),
    )?;
    d.set_item(
        "violations",
        r.violations.iter().map(|v| v.index).collect::<Vec<_>>(),
    )?;
    d.set_item(
        "undecided",
        r.undecided.iter().map(|v| v.index).collect::<Vec<_>>(),
    )?;
    Ok(d)
}

#[pymodule]
#[pyo3(name = "kneadlab")]
fn kneadlab_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyWord>()?;
    m.add_class::<PyKneadingResult>()?;
    m.add_class::<PySolveReport>()?;
    m.add_function(wrap_pyfunction!(families, m)?)?;
    m.add_function(wrap_pyfunction!(iterate, m)?)?;
    m.add_function(wrap_pyfunction!(iterate_derivative, m)?)?;
    m.add_function(wrap_pyfunction!(itinerary, m)?)?;
    m.add_function(wrap_pyfunction!(kneading_sequence, m)?)?;
    m.add_function(wrap_pyfunction!(compare, m)?)?;
    m.add_function(wrap_pyfunction!(is_shift_maximal, m)?)?;
    m.add_function(wrap_pyfunction!(invert_branch, m)?)?;
    m.add_function(wrap_pyfunction!(level, m)?)?;
    m.add_function(wrap_pyfunction!(superstable, m)?)?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(solve_all, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_admissible, m)?)?;
    m.add_function(wrap_pyfunction!(formula_count, m)?)?;
    m.add_function(wrap_pyfunction!(lap_numbers, m)?)?;
    m.add_function(wrap_pyfunction!(entropy_lap, m)?)?;
    m.add_function(wrap_pyfunction!(entropy_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(schwarzian_check, m)?)?;
    m.add_function(wrap_pyfunction!(kneading_sweep, m)?)?;
    Ok(())
}
