//! Python module `prolate`.

use num_complex::Complex64 as C64;
use pyo3::create_exception;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;
use rand::SeedableRng;

use prolate_core::boundary_algebra::{
    boundary_condition_matrix, boundary_kernel, self_orthogonality_residual, subspace_from_unitary, UnitaryMatrix2,
};
use prolate_core::endpoint_forms::{boundary_values_from_samples, BoundaryValues, Endpoint};
use prolate_core::extension_solver::{
    connection_matrix, default_window, eigenfunctions_shoot, eigenvalues_scan_with, secular_det, ScanOptions,
};
use prolate_core::fourier_commutator::{commutator_constant, noncommuting_witness, pswf_fourier_check, WitnessCase};
use prolate_core::legendre::{default_truncation, prolate_spectrum, EigenPair};
use prolate_core::operator::Operator;
use prolate_core::Error;

create_exception!(prolate, ValidationError, PyValueError, "Rejected input.");
create_exception!(
    prolate,
    NumericalError,
    PyRuntimeError,
    "A numerical procedure did not converge."
);

fn py_err(e: Error) -> PyErr {
    let msg = format!("{}: {e}", e.kind());
    if e.is_numerical() {
        NumericalError::new_err(msg)
    } else {
        ValidationError::new_err(msg)
    }
}

/// A 2x2 unitary matrix parametrizing a self-adjoint extension.
#[pyclass(name = "UnitaryMatrix", frozen, skip_from_py_object)]
#[derive(Clone, Copy)]
struct PyUnitary(UnitaryMatrix2);

#[pymethods]
impl PyUnitary {
    /// From the entries `[u11, u12, u21, u22]`.
    #[new]
    fn new(entries: [C64; 4]) -> PyResult<Self> {
        UnitaryMatrix2::new(entries).map(Self).map_err(py_err)
    }

    /// `"identity"`, `"neg-identity"`, `"swap"` or eight comma-separated reals.
    #[staticmethod]
    fn parse(spec: &str) -> PyResult<Self> {
        UnitaryMatrix2::parse(spec).map(Self).map_err(py_err)
    }

    #[staticmethod]
    fn identity() -> Self {
        Self(UnitaryMatrix2::identity())
    }

    #[staticmethod]
    fn neg_identity() -> Self {
        Self(UnitaryMatrix2::neg_identity())
    }

    #[staticmethod]
    fn swap() -> Self {
        Self(UnitaryMatrix2::swap())
    }

    /// Haar-random, reproducible from `seed`.
    #[staticmethod]
    fn random(seed: u64) -> Self {
        Self(UnitaryMatrix2::random(&mut rand::rngs::StdRng::seed_from_u64(seed)))
    }

    fn entries(&self) -> [C64; 4] {
        self.0.entries()
    }

    fn is_identity(&self) -> bool {
        self.0.is_identity(1e-12)
    }

    /// Rows of `B(U)` acting on `(b_-a, c_-a, b_a, c_a)`.
    fn boundary_condition_matrix(&self) -> Vec<Vec<C64>> {
        let b = boundary_condition_matrix(&self.0);
        (0..2).map(|i| (0..4).map(|j| b[(i, j)]).collect()).collect()
    }

    /// Basis `v^1(U), v^2(U)` of the J-self-orthogonal subspace.
    fn subspace(&self) -> Vec<[C64; 4]> {
        let (v1, v2) = subspace_from_unitary(&self.0).vectors();
        vec![v1.as_array(), v2.as_array()]
    }

    fn self_orthogonality_residual(&self) -> f64 {
        self_orthogonality_residual(&subspace_from_unitary(&self.0))
    }

    /// Orthonormal basis of `ker B(U)`: the boundary values admitted by the extension.
    fn admissible_boundary_values(&self) -> Vec<[C64; 4]> {
        boundary_kernel(&self.0).to_vec()
    }

    fn __repr__(&self) -> String {
        let e = self.0.entries();
        format!("UnitaryMatrix([{}, {}, {}, {}])", e[0], e[1], e[2], e[3])
    }
}

/// A prolate spheroidal wave function: eigenpair of the distinguished extension.
#[pyclass(name = "Pswf", frozen)]
struct PyPswf {
    pair: EigenPair,
    #[pyo3(get)]
    index: usize,
}

#[pymethods]
impl PyPswf {
    #[getter]
    fn eigenvalue(&self) -> f64 {
        self.pair.lambda
    }

    #[getter]
    fn residual(&self) -> f64 {
        self.pair.residual
    }

    /// Coefficients against the orthonormal Legendre basis on `(-a, a)`.
    #[getter]
    fn coefficients(&self) -> Vec<f64> {
        self.pair.eigenfunction.coeffs.iter().map(|c| c.re).collect()
    }

    fn __call__(&self, t: Vec<f64>) -> Vec<f64> {
        t.iter().map(|&s| self.pair.eigenfunction.eval(s).re).collect()
    }

    /// `(gamma, residual)` with `F chi = gamma chi` for the truncated Fourier operator `F`.
    fn fourier_eigenvalue(&self) -> PyResult<(C64, f64)> {
        pswf_fourier_check(&self.pair, self.pair.eigenfunction.half_width).map_err(py_err)
    }
}

fn check_a(a: f64) -> PyResult<()> {
    if a > 0.0 && a.is_finite() {
        Ok(())
    } else {
        Err(ValidationError::new_err(format!(
            "InvalidInput: half-width must be positive, got {a}"
        )))
    }
}

/// The `n_modes` lowest prolate spheroidal wave functions on `(-a, a)`, certified by truncation doubling.
#[pyfunction]
#[pyo3(signature = (a, n_modes, truncation = None))]
fn pswf(a: f64, n_modes: usize, truncation: Option<usize>) -> PyResult<Vec<PyPswf>> {
    check_a(a)?;
    let n = truncation.unwrap_or_else(|| default_truncation(a, n_modes));
    let pairs = prolate_spectrum(n, a, n_modes).map_err(py_err)?;
    Ok(pairs
        .into_iter()
        .enumerate()
        .map(|(index, pair)| PyPswf { pair, index })
        .collect())
}

/// Eigenvalues `(lambda, multiplicity)` of the extension `L_U`, by shooting.
///
/// Without a window, the `n_modes` lowest (counted with multiplicity) are returned.
#[pyfunction]
#[pyo3(signature = (u, a, n_modes = 5, lambda_min = None, lambda_max = None, tol = 1e-12, legendre = false))]
fn eigenvalues(
    u: PyRef<'_, PyUnitary>,
    a: f64,
    n_modes: usize,
    lambda_min: Option<f64>,
    lambda_max: Option<f64>,
    tol: f64,
    legendre: bool,
) -> PyResult<Vec<(f64, u8)>> {
    check_a(a)?;
    let (lo, hi) = default_window(a, n_modes);
    let explicit = lambda_min.is_some() || lambda_max.is_some();
    let op = if legendre {
        Operator::Legendre
    } else {
        Operator::Prolate
    };
    let opts = ScanOptions {
        op,
        tol,
        ..ScanOptions::default()
    };
    let mut found =
        eigenvalues_scan_with(&u.0, a, lambda_min.unwrap_or(lo), lambda_max.unwrap_or(hi), &opts).map_err(py_err)?;
    if !explicit {
        let mut count = 0usize;
        found.retain(|e| {
            let keep = count < n_modes;
            count += e.multiplicity as usize;
            keep
        });
    }
    Ok(found.iter().map(|e| (e.lambda, e.multiplicity)).collect())
}

/// Values at `t` of the L^2-normalized eigenfunctions of `L_U` at the eigenvalue `lam`
/// (one list per eigenfunction).
#[pyfunction]
fn eigenfunctions(u: PyRef<'_, PyUnitary>, a: f64, lam: f64, t: Vec<f64>) -> PyResult<Vec<Vec<C64>>> {
    check_a(a)?;
    if let Some(bad) = t.iter().find(|s| !(s.abs() < a)) {
        return Err(ValidationError::new_err(format!(
            "InvalidInput: point {bad} outside (-a, a)"
        )));
    }
    let fs = eigenfunctions_shoot(Operator::Prolate, &u.0, a, lam).map_err(py_err)?;
    Ok(fs.iter().map(|f| t.iter().map(|&s| f.value(s)).collect()).collect())
}

/// Secular determinant of `L_U` at `lam`, with its real indicator.
#[pyfunction]
fn secular_determinant<'py>(
    py: Python<'py>,
    u: PyRef<'_, PyUnitary>,
    a: f64,
    lam: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let r = secular_det(&u.0, a, lam).map_err(py_err)?;
    let d = PyDict::new(py);
    d.set_item("det", r.det_value)?;
    d.set_item("indicator", r.indicator)?;
    d.set_item("imaginary_residue", r.imaginary_residue)?;
    d.set_item("scale", r.scale)?;
    d.set_item("condition", r.condition)?;
    Ok(d)
}

/// The 2x2 matrix `T` with `x_i^- = sum_j T[i][j] x_j^+` for the prolate equation.
#[pyfunction]
fn connection(a: f64, lam: f64) -> PyResult<[[f64; 2]; 2]> {
    connection_matrix(lam, a).map(|c| c.t).map_err(py_err)
}

fn bv_dict<'py>(py: Python<'py>, bv: &BoundaryValues) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("b_minus", bv.b_minus)?;
    d.set_item("c_minus", bv.c_minus)?;
    d.set_item("b_plus", bv.b_plus)?;
    d.set_item("c_plus", bv.c_plus)?;
    Ok(d)
}

/// Generalized boundary values `(b, c)` at both endpoints from samples of a function.
#[pyfunction]
fn boundary_values<'py>(py: Python<'py>, t: Vec<f64>, x: Vec<C64>, a: f64) -> PyResult<Bound<'py, PyDict>> {
    check_a(a)?;
    let mut bv = BoundaryValues::default();
    for ep in [Endpoint::MinusA, Endpoint::PlusA] {
        let (b, c) = boundary_values_from_samples(&t, &x, ep, a).map_err(py_err)?;
        bv.set(ep, b, c);
    }
    bv_dict(py, &bv)
}

/// Prefactor of the boundary term in `F L - L F` for the truncated Fourier operator.
#[pyfunction]
fn fourier_commutator_constant(a: f64) -> PyResult<f64> {
    check_a(a)?;
    Ok(commutator_constant(a))
}

/// A function in the domain of `L_U` showing that `L_U` does not commute with the
/// truncated Fourier operator. Raises for `U = I`.
#[pyfunction]
fn witness<'py>(py: Python<'py>, u: PyRef<'_, PyUnitary>, a: f64) -> PyResult<Bound<'py, PyDict>> {
    check_a(a)?;
    let w = noncommuting_witness(&u.0, a).map_err(py_err)?;
    let d = PyDict::new(py);
    d.set_item(
        "case",
        match w.case {
            WitnessCase::Commutator => "commutator",
            WitnessCase::BoundaryViolation => "boundary_violation",
        },
    )?;
    d.set_item("residual_norm", w.residual_norm)?;
    d.set_item("boundary_values", bv_dict(py, &w.boundary_values)?)?;
    d.set_item("image_endpoint_values", w.image_endpoint_values)?;
    Ok(d)
}

/// Run the invariant checks; returns a list of `(id, passed, value, tolerance)`.
#[pyfunction]
fn verify(py: Python<'_>, a: f64) -> PyResult<Vec<(String, bool, f64, f64)>> {
    check_a(a)?;
    let r = py.detach(|| prolate_core::verify::run_all(a));
    Ok(r.checks
        .into_iter()
        .map(|c| (c.id, c.passed, c.value, c.tolerance))
        .collect())
}

#[pymodule]
#[pyo3(name = "prolate")]
pub fn prolate_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    let py = m.py();
    m.add("ValidationError", py.get_type::<ValidationError>())?;
    m.add("NumericalError", py.get_type::<NumericalError>())?;
    m.add_class::<PyUnitary>()?;
    m.add_class::<PyPswf>()?;
    m.add_function(wrap_pyfunction!(pswf, m)?)?;
    m.add_function(wrap_pyfunction!(eigenvalues, m)?)?;
    m.add_function(wrap_pyfunction!(eigenfunctions, m)?)?;
    m.add_function(wrap_pyfunction!(secular_determinant, m)?)?;
    m.add_function(wrap_pyfunction!(connection, m)?)?;
    m.add_function(wrap_pyfunction!(boundary_values, m)?)?;
    m.add_function(wrap_pyfunction!(fourier_commutator_constant, m)?)?;
    m.add_function(wrap_pyfunction!(witness, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
