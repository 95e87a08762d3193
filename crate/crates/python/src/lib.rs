//! Python bindings: the group constructors, block scans and verification
//! suites, exposed in-process.
//!
//! Build with `cargo build -p blockcoh-py`, then import the produced
//! cdylib as `blockcoh_py` (see python/smoke_test.py for a loader).

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use std::sync::Arc;

use blockcoh::blocks::splitting_field;
use blockcoh::budget::Budget;
use blockcoh::group::FiniteGroup;
use blockcoh::report::{block_info_text, run_scan, run_verify, ScanConfig, Suite};
use blockcoh::{make_group, Error};

fn err_py(e: Error) -> PyErr {
    match e {
        Error::Usage(msg) | Error::BadGroup(msg) => PyValueError::new_err(msg),
        other => PyRuntimeError::new_err(other.to_string()),
    }
}

/// A finite group built from a spec string:
/// `C n | D n | S n | A n | Q8 | prod(a,b) | perm: (1 2 3)(4 5), ...`
#[pyclass]
struct Group {
    inner: Arc<FiniteGroup>,
}

#[pymethods]
impl Group {
    #[new]
    fn new(spec: &str) -> PyResult<Self> {
        Ok(Group {
            inner: make_group(spec).map_err(err_py)?,
        })
    }

    fn order(&self) -> usize {
        self.inner.order()
    }

    /// Display name of the element with the given index (identity is 0).
    fn element_name(&self, index: u16) -> PyResult<String> {
        if (index as usize) < self.inner.order() {
            Ok(self.inner.name(index).to_string())
        } else {
            Err(PyValueError::new_err("element index out of range"))
        }
    }

    fn mul(&self, a: u16, b: u16) -> PyResult<u16> {
        let n = self.inner.order() as u16;
        if a < n && b < n {
            Ok(self.inner.mul(a, b))
        } else {
            Err(PyValueError::new_err("element index out of range"))
        }
    }

    fn inv(&self, a: u16) -> PyResult<u16> {
        if (a as usize) < self.inner.order() {
            Ok(self.inner.inv(a))
        } else {
            Err(PyValueError::new_err("element index out of range"))
        }
    }

    fn exponent(&self) -> usize {
        self.inner.exponent()
    }

    fn conjugacy_class_count(&self) -> usize {
        self.inner.conjugacy_classes().len()
    }

    fn sylow_order(&self, p: usize) -> usize {
        blockcoh::group::sylow(&self.inner, p).order()
    }

    /// The splitting field GF(p^m) used for this group at the prime p,
    /// returned as (p, m).
    fn splitting_field(&self, p: u32) -> PyResult<(u32, u32)> {
        let f = splitting_field(&self.inner, p).map_err(err_py)?;
        Ok((f.characteristic(), f.degree()))
    }

    fn __repr__(&self) -> String {
        format!(
            "Group({:?}, order={})",
            self.inner.description(),
            self.inner.order()
        )
    }
}

/// Dimensions of H^n(G, k) over the splitting field at p, n = 0..=max_degree.
#[pyfunction]
fn cohomology_dims(spec: &str, p: u32, max_degree: usize) -> PyResult<Vec<usize>> {
    let group = make_group(spec).map_err(err_py)?;
    let field = splitting_field(&group, p).map_err(err_py)?;
    let budget = Budget::from_env();
    (0..=max_degree)
        .map(|n| blockcoh::groupcoh::cohomology_dim(&group, &field, n, &budget).map_err(err_py))
        .collect()
}

/// Dimensions of HH^n(kG) over the splitting field at p.
#[pyfunction]
fn hochschild_dims(spec: &str, p: u32, max_degree: usize) -> PyResult<Vec<usize>> {
    let group = make_group(spec).map_err(err_py)?;
    let field = splitting_field(&group, p).map_err(err_py)?;
    let budget = Budget::from_env();
    (0..=max_degree)
        .map(|n| blockcoh::hochschild::hh_dim(&group, &field, n, &budget).map_err(err_py))
        .collect()
}

/// Human-readable block summary (same as the block-info subcommand).
#[pyfunction]
fn block_info(spec: &str, p: u32) -> PyResult<String> {
    block_info_text(spec, p).map_err(err_py)
}

/// Run a scan and return the JSON report as a string.
#[pyfunction]
#[pyo3(signature = (groups, primes, max_degree=4, hh_degree=1, suites=vec!["sasaki".to_string()]))]
fn scan_json(
    groups: Vec<String>,
    primes: Vec<u32>,
    max_degree: usize,
    hh_degree: usize,
    suites: Vec<String>,
) -> PyResult<String> {
    let parsed: Vec<Suite> = suites
        .iter()
        .map(|s| Suite::parse(s).map_err(err_py))
        .collect::<PyResult<_>>()?;
    let config = ScanConfig {
        groups,
        primes,
        max_degree,
        hh_degree,
        suites: parsed,
        budget: Budget::from_env(),
    };
    let report = run_scan(&config).map_err(err_py)?;
    Ok(report.to_json())
}

/// Run a named verification suite; returns (passed, [(check, pass), ...]).
#[pyfunction]
#[pyo3(signature = (suite, group, prime, max_degree=2, hh_degree=1, subgroup=None))]
fn verify(
    suite: &str,
    group: &str,
    prime: u32,
    max_degree: usize,
    hh_degree: usize,
    subgroup: Option<String>,
) -> PyResult<(bool, Vec<(String, bool)>)> {
    let report = run_verify(
        suite,
        group,
        prime,
        max_degree,
        hh_degree,
        subgroup.as_deref(),
        Budget::from_env(),
    )
    .map_err(err_py)?;
    Ok((
        report.passed,
        report.items.into_iter().map(|i| (i.name, i.pass)).collect(),
    ))
}

#[pymodule]
fn blockcoh_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<Group>()?;
    m.add_function(wrap_pyfunction!(cohomology_dims, m)?)?;
    m.add_function(wrap_pyfunction!(hochschild_dims, m)?)?;
    m.add_function(wrap_pyfunction!(block_info, m)?)?;
    m.add_function(wrap_pyfunction!(scan_json, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
