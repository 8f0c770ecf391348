//! Python bindings for the resonant crate: partition counting, basis
//! enumeration, coupling evaluation, block assembly/diagonalization and the
//! level-spacing statistics, mirroring the CLI's vocabulary.

// The #[pyfunction] expansion trips this lint on pyo3 0.22.
#![allow(clippy::useless_conversion)]

use std::str::FromStr;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;
use resonant::couplings::{CouplingProvider, Family, Quartet};
use resonant::hamiltonian::assemble_block;
use resonant::oracles;
use resonant::partitions::{self, BlockLabel};
use resonant::spectra::{self, SpectrumRecord};
use resonant::statistics::{self, DeltaPolicy, UnfoldedSpacings};

fn err(e: resonant::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_family(name: &str) -> PyResult<Family> {
    Family::from_str(name).map_err(err)
}

/// Number of partitions of `m` into at most `n` parts (the block dimension).
#[pyfunction]
fn count_partitions(n: u32, m: u32) -> PyResult<u64> {
    partitions::count_partitions(BlockLabel::new(n, m)).map_err(err)
}

/// Canonically ordered occupation-number vectors of the (N, M)-block.
#[pyfunction]
fn enumerate_basis(n: u32, m: u32) -> Vec<Vec<u32>> {
    partitions::enumerate_basis(BlockLabel::new(n, m))
        .states()
        .iter()
        .map(|s| s.occupations.clone())
        .collect()
}

/// Interaction coefficient C_nmkl for the named family.
#[pyfunction]
#[pyo3(signature = (family, n, m, k, l, seed = 0))]
fn coupling(family: &str, n: u32, m: u32, k: u32, l: u32, seed: u64) -> PyResult<f64> {
    if n + m != k + l {
        return Err(PyValueError::new_err(format!(
            "quartet ({n},{m},{k},{l}) is not resonant"
        )));
    }
    CouplingProvider::new(parse_family(family)?, seed)
        .coupling(Quartet::new(n, m, k, l))
        .map_err(err)
}

/// Dense (N, M)-block Hamiltonian as nested lists, rows in basis order.
#[pyfunction]
#[pyo3(signature = (family, n, m, seed = 0))]
fn block_matrix(family: &str, n: u32, m: u32, seed: u64) -> PyResult<Vec<Vec<f64>>> {
    let provider = CouplingProvider::new(parse_family(family)?, seed);
    let block = assemble_block(BlockLabel::new(n, m), &provider).map_err(err)?;
    Ok(block
        .entries()
        .rows()
        .into_iter()
        .map(|r| r.to_vec())
        .collect())
}

/// Ascending eigenvalues of the (N, M)-block.
#[pyfunction]
#[pyo3(signature = (family, n, m, seed = 0))]
fn eigenvalues(family: &str, n: u32, m: u32, seed: u64) -> PyResult<Vec<f64>> {
    let provider = CouplingProvider::new(parse_family(family)?, seed);
    let block = assemble_block(BlockLabel::new(n, m), &provider).map_err(err)?;
    Ok(spectra::diagonalize(&block).map_err(err)?.eigenvalues)
}

/// Closed-form maximal eigenvalue for the solvable families.
#[pyfunction]
fn expected_max_eigenvalue(family: &str, n: u32, m: u32) -> PyResult<f64> {
    oracles::expected_max_eigenvalue(parse_family(family)?, BlockLabel::new(n, m)).map_err(err)
}

/// Unfolded nearest-neighbor spacings (mean one) of a raw spectrum.
#[pyfunction]
#[pyo3(signature = (eigenvalues, delta = None))]
fn unfold(eigenvalues: Vec<f64>, delta: Option<usize>) -> PyResult<Vec<f64>> {
    let spec = SpectrumRecord::from_eigenvalues(eigenvalues);
    let policy = match delta {
        None => DeltaPolicy::Auto,
        Some(d) => DeltaPolicy::Fixed(d),
    };
    Ok(statistics::unfold(&spec, policy).map_err(err)?.values)
}

/// Poisson-vs-Wigner verdict for a raw spectrum; returns a dict with the
/// verdict string, both KS statistics and the degenerate fraction.
#[pyfunction]
#[pyo3(signature = (eigenvalues, delta = None, margin = statistics::DEFAULT_MARGIN))]
fn classify<'py>(
    py: Python<'py>,
    eigenvalues: Vec<f64>,
    delta: Option<usize>,
    margin: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let spec = SpectrumRecord::from_eigenvalues(eigenvalues);
    let policy = match delta {
        None => DeltaPolicy::Auto,
        Some(d) => DeltaPolicy::Fixed(d),
    };
    let spacings = statistics::unfold(&spec, policy).map_err(err)?;
    let c = statistics::classify_spacings(&spacings, margin);
    let out = PyDict::new_bound(py);
    out.set_item("verdict", c.verdict.to_string())?;
    out.set_item("ks_poisson", c.ks_poisson)?;
    out.set_item("ks_wigner", c.ks_wigner)?;
    out.set_item("degenerate_fraction", c.degenerate_fraction)?;
    Ok(out)
}

/// Mean-one spacing sample classification without unfolding (for externally
/// produced spacings).
#[pyfunction]
#[pyo3(signature = (spacings, margin = statistics::DEFAULT_MARGIN))]
fn classify_spacings<'py>(
    py: Python<'py>,
    spacings: Vec<f64>,
    margin: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let c = statistics::classify_spacings(&UnfoldedSpacings::from_samples(spacings), margin);
    let out = PyDict::new_bound(py);
    out.set_item("verdict", c.verdict.to_string())?;
    out.set_item("ks_poisson", c.ks_poisson)?;
    out.set_item("ks_wigner", c.ks_wigner)?;
    out.set_item("degenerate_fraction", c.degenerate_fraction)?;
    Ok(out)
}

#[pymodule]
fn resonant_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("FAMILIES", Family::ALL.map(|f| f.name()).to_vec())?;
    m.add_function(wrap_pyfunction!(count_partitions, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_basis, m)?)?;
    m.add_function(wrap_pyfunction!(coupling, m)?)?;
    m.add_function(wrap_pyfunction!(block_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(eigenvalues, m)?)?;
    m.add_function(wrap_pyfunction!(expected_max_eigenvalue, m)?)?;
    m.add_function(wrap_pyfunction!(unfold, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(classify_spacings, m)?)?;
    Ok(())
}
