//! Python bindings for the conequant engine: the operator DSL, the
//! symbolic verification suite, and the spectral and monodromy layers.

// The #[pyfunction] macro expansion inserts a PyErr .into() that trips
// this lint.
#![allow(clippy::useless_conversion)]

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use conequant::dsl::{format_weyl, parse_weyl};
use conequant::{sl2pencil, spectral, QuadraticForm};

fn value_err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Parse an operator expression and return its normal form.
#[pyfunction]
fn eval_operator(expr: &str, dim: usize) -> PyResult<String> {
    let e = parse_weyl(expr, dim).map_err(value_err)?;
    Ok(format_weyl(&e))
}

/// Weight decomposition of an operator expression:
/// a list of (max_order, weight, component) triples.
#[pyfunction]
fn bigrade(expr: &str, dim: usize) -> PyResult<Vec<(u32, i64, String)>> {
    let e = parse_weyl(expr, dim).map_err(value_err)?;
    Ok(e.bigrade()
        .into_iter()
        .map(|((k, l), part)| (k, l, format_weyl(&part)))
        .collect())
}

/// Whether the operator descends to the standard cone of the given
/// dimension (preserves the ideal generated by the quadratic form).
#[pyfunction]
fn restrictable(expr: &str, dim: usize) -> PyResult<bool> {
    let e = parse_weyl(expr, dim).map_err(value_err)?;
    Ok(e.preserves_ideal(&QuadraticForm::standard(dim)))
}

/// Negative eigenvalues of the radial pencil, ascending.
#[pyfunction]
#[pyo3(signature = (kappa, ell, size, beta=None))]
fn bound_states(kappa: f64, ell: u32, size: usize, beta: Option<f64>) -> PyResult<Vec<f64>> {
    let basis =
        spectral::RadialBasis::build(ell, size, beta.unwrap_or(kappa)).map_err(value_err)?;
    let pencil = spectral::assemble_pencil(&basis, kappa).map_err(value_err)?;
    spectral::bound_states(&pencil, size).map_err(value_err)
}

/// Monodromy at complex lambda: returns (I_re, I_im, M_re, M_im, abs_M).
#[pyfunction]
#[pyo3(signature = (lambda_re, lambda_im=0.0))]
fn monodromy(lambda_re: f64, lambda_im: f64) -> PyResult<(f64, f64, f64, f64, f64)> {
    let r = sl2pencil::monodromy(Complex64::new(lambda_re, lambda_im)).map_err(value_err)?;
    Ok((
        r.integral.0,
        r.integral.1,
        r.monodromy.0,
        r.monodromy.1,
        r.abs_m,
    ))
}

/// Conjugacy class of lambda*E + F, e.g. "elliptic, nu=0.5".
#[pyfunction]
fn classify(lambda: f64) -> String {
    let (class, _) = sl2pencil::classify_and_conjugate(lambda);
    class.to_string()
}

/// The monodromy-admissible candidate set {-kappa^2/m^2 : m <= m_max}.
#[pyfunction]
fn candidate_spectrum(kappa: f64, m_max: u32) -> PyResult<Vec<f64>> {
    if kappa.is_nan() || kappa <= 0.0 {
        return Err(PyValueError::new_err("kappa must be positive"));
    }
    Ok(sl2pencil::candidate_spectrum(kappa, m_max))
}

#[pymodule]
fn conequant_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(eval_operator, m)?)?;
    m.add_function(wrap_pyfunction!(bigrade, m)?)?;
    m.add_function(wrap_pyfunction!(restrictable, m)?)?;
    m.add_function(wrap_pyfunction!(bound_states, m)?)?;
    m.add_function(wrap_pyfunction!(monodromy, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(candidate_spectrum, m)?)?;
    Ok(())
}
