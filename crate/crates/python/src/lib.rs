//! Python module `stackdist`.

use std::collections::BTreeMap;

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;
use stackdist::asymptotics::{self, SingularityResult};
use stackdist::oracle::{self, StructureFilter};
use stackdist::{BigCount, Error, ExactRatio};

fn py_err(e: Error) -> PyErr {
    match e {
        Error::InvalidParameter(_) | Error::InvalidOperand(_) | Error::CapExceeded { .. } | Error::Domain(_) => {
            PyValueError::new_err(e.to_string())
        }
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn fraction<'py>(py: Python<'py>, q: &ExactRatio) -> PyResult<Bound<'py, PyAny>> {
    let cls = py.import("fractions")?.getattr("Fraction")?;
    cls.call1((q.numer().clone(), q.denom().clone()))
}

fn singularity_dict<'py>(py: Python<'py>, r: &SingularityResult) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("k", r.k)?;
    d.set_item("tau", r.tau)?;
    d.set_item("rho_k", r.rho_k)?;
    d.set_item("gamma0", r.gamma0)?;
    d.set_item("gamma1", r.gamma1)?;
    d.set_item("gamma2", r.gamma2)?;
    d.set_item("mu", r.mu)?;
    d.set_item("sigma2", r.sigma2)?;
    d.set_item("residual", r.residual)?;
    d.set_item("unverified_regime", r.unverified_regime)?;
    Ok(d)
}

/// Precomputed `T*`, `C*` and matching tables for one `k`, answering count
/// queries for any `tau` and `n <= max_n`.
#[pyclass(name = "CountTable", frozen)]
struct PyCountTable {
    inner: stackdist::CountTable,
}

#[pymethods]
impl PyCountTable {
    #[new]
    fn new(k: u32, max_n: usize) -> PyResult<Self> {
        Ok(PyCountTable { inner: stackdist::CountTable::build(k, max_n).map_err(py_err)? })
    }

    #[getter]
    fn k(&self) -> u32 {
        self.inner.k()
    }

    #[getter]
    fn max_n(&self) -> usize {
        self.inner.max_n()
    }

    fn count(&self, tau: u32, n: usize, t: usize) -> PyResult<BigCount> {
        self.inner.count_structures(tau, n, t).map_err(py_err)
    }

    fn row(&self, tau: u32, n: usize) -> PyResult<Vec<BigCount>> {
        self.inner.row(tau, n).map_err(py_err)
    }

    fn distribution<'py>(&self, py: Python<'py>, tau: u32, n: usize) -> PyResult<Vec<Bound<'py, PyAny>>> {
        let d = self.inner.distribution(tau, n).map_err(py_err)?;
        d.probabilities.iter().map(|q| fraction(py, q)).collect()
    }

    fn tstar(&self, n: usize, h: usize) -> PyResult<BigCount> {
        self.check(n)?;
        Ok(self.inner.tstar(n as i64, h as i64).clone())
    }

    fn corestar(&self, n: usize, h: usize) -> PyResult<BigCount> {
        self.check(n)?;
        Ok(self.inner.corestar(n as i64, h as i64).clone())
    }

    fn __repr__(&self) -> String {
        format!("CountTable(k={}, max_n={})", self.inner.k(), self.inner.max_n())
    }
}

impl PyCountTable {
    fn check(&self, n: usize) -> PyResult<()> {
        if n > self.inner.max_n() {
            return Err(PyValueError::new_err(format!("table covers n <= {}", self.inner.max_n())));
        }
        Ok(())
    }
}

/// Number of structures on `n` vertices with exactly `t` stacks.
#[pyfunction]
fn count_structures(k: u32, tau: u32, n: usize, t: usize) -> PyResult<BigCount> {
    stackdist::count_structures(k, tau, n, t).map_err(py_err)
}

/// Exact law of the stack number as a list of `Fraction`, indexed by `t`.
#[pyfunction]
fn distribution<'py>(py: Python<'py>, k: u32, tau: u32, n: usize) -> PyResult<Vec<Bound<'py, PyAny>>> {
    let d = stackdist::distribution(k, tau, n).map_err(py_err)?;
    d.probabilities.iter().map(|q| fraction(py, q)).collect()
}

/// Exact mean and variance of the stack number as `Fraction`s.
#[pyfunction]
fn moments<'py>(py: Python<'py>, k: u32, tau: u32, n: usize) -> PyResult<(Bound<'py, PyAny>, Bound<'py, PyAny>)> {
    let d = stackdist::distribution(k, tau, n).map_err(py_err)?;
    let (m, v) = stackdist::moments(&d);
    Ok((fraction(py, &m)?, fraction(py, &v)?))
}

/// `f_k(2n)`: perfect matchings on `2n` points without `k` mutually crossing arcs.
#[pyfunction]
fn count_perfect(k: u32, n: usize) -> PyResult<BigCount> {
    stackdist::count_perfect(k, n).map_err(py_err)
}

/// Brute-force tally of structures on `[n]` by stack number.
#[pyfunction]
#[pyo3(signature = (n, k, tau, lambda_min = oracle::DEFAULT_LAMBDA_MIN))]
fn enumerate_counts(n: usize, k: u32, tau: u32, lambda_min: u32) -> PyResult<BTreeMap<usize, BigCount>> {
    let filter = StructureFilter::structures(k, tau).with_lambda_min(lambda_min);
    oracle::enumerate_counts(n, &filter).map_err(py_err)
}

/// `[T(0), ..., T(order)]` from the generating function.
#[pyfunction]
fn univariate_series(k: u32, tau: u32, order: usize) -> PyResult<Vec<BigCount>> {
    let s = stackdist::univariate_t(k, tau, order).map_err(py_err)?;
    s.coeffs().iter().map(integral).collect()
}

/// `rows[n][t] = T(n, t)` from the bivariate generating function.
#[pyfunction]
fn bivariate_series(k: u32, tau: u32, order: usize) -> PyResult<Vec<Vec<BigCount>>> {
    let s = stackdist::bivariate_t(k, tau, order).map_err(py_err)?;
    s.coeffs().iter().map(|p| p.coeffs().iter().map(integral).collect()).collect()
}

fn integral(c: &ExactRatio) -> PyResult<BigCount> {
    if !c.is_integer() {
        return Err(PyRuntimeError::new_err(format!("non-integral coefficient {c}")));
    }
    c.to_integer().to_biguint().ok_or_else(|| PyRuntimeError::new_err(format!("negative coefficient {c}")))
}

/// Dominant singularity and limiting mean and variance per vertex.
#[pyfunction]
fn clt_params<'py>(py: Python<'py>, k: u32, tau: u32) -> PyResult<Bound<'py, PyDict>> {
    let r = asymptotics::clt_params(k, tau).map_err(py_err)?;
    singularity_dict(py, &r)
}

/// Minimal positive root of the singularity equation at shift `s`.
#[pyfunction]
fn solve_gamma(k: u32, tau: u32, s: f64) -> PyResult<f64> {
    asymptotics::solve_gamma(k, tau, s).map(|r| r.gamma).map_err(py_err)
}

/// Computed grid next to the published reference values.
#[pyfunction]
fn table1<'py>(py: Python<'py>, ks: Vec<u32>, taus: Vec<u32>) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let rows = asymptotics::table1(&ks, &taus).map_err(py_err)?;
    rows.iter()
        .map(|r| {
            let d = match &r.computed {
                Ok(c) => singularity_dict(py, c)?,
                Err(e) => {
                    let d = PyDict::new(py);
                    d.set_item("k", r.k)?;
                    d.set_item("tau", r.tau)?;
                    d.set_item("error", e)?;
                    d
                }
            };
            d.set_item("ref_mu", r.reference.map(|c| c.mu))?;
            d.set_item("ref_sigma2", r.reference.map(|c| c.sigma2))?;
            d.set_item("dev_mu", r.dev_mu)?;
            d.set_item("dev_sigma2", r.dev_sigma2)?;
            d.set_item("suspected_typo", r.suspected_typo())?;
            Ok(d)
        })
        .collect()
}

/// Named functional-equation checks to `x^order`, mapped to pass/fail.
#[pyfunction]
fn identity_checks(k: u32, tau: u32, order: usize) -> PyResult<BTreeMap<&'static str, bool>> {
    let r = stackdist::identities::identity_checks(k, tau, order).map_err(py_err)?;
    Ok(r.checks.iter().map(|c| (c.name, c.holds)).collect())
}

#[pymodule]
#[pyo3(name = "stackdist")]
fn stackdist_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyCountTable>()?;
    m.add_function(wrap_pyfunction!(count_structures, m)?)?;
    m.add_function(wrap_pyfunction!(distribution, m)?)?;
    m.add_function(wrap_pyfunction!(moments, m)?)?;
    m.add_function(wrap_pyfunction!(count_perfect, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_counts, m)?)?;
    m.add_function(wrap_pyfunction!(univariate_series, m)?)?;
    m.add_function(wrap_pyfunction!(bivariate_series, m)?)?;
    m.add_function(wrap_pyfunction!(clt_params, m)?)?;
    m.add_function(wrap_pyfunction!(solve_gamma, m)?)?;
    m.add_function(wrap_pyfunction!(table1, m)?)?;
    m.add_function(wrap_pyfunction!(identity_checks, m)?)?;
    Ok(())
}
