//! Python bindings for `hspan`.
//!
//! Matrices cross the boundary as lists of rows of Python `complex` values
//! (real numbers are accepted too). Library errors surface as `ValueError`.

use hspan::span::{self, SamplerRun};
use hspan::{
    AnyFamily, ComplexMatrix, ComplexVector, FamilyKind, GenSpec, HspanError, InstanceFile,
    MatrixFamily, PsdFamily, Subspace, ToleranceConfig, VerifyOptions,
};
use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

type Rows = Vec<Vec<Complex64>>;

fn py_err(e: HspanError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_matrix(rows: Rows) -> PyResult<ComplexMatrix> {
    ComplexMatrix::from_rows(&rows).map_err(py_err)
}

fn to_rows(m: &ComplexMatrix) -> Rows {
    (0..m.rows()).map(|i| m.row_vec(i)).collect()
}

fn to_family(mats: Vec<Rows>) -> PyResult<MatrixFamily> {
    let mats = mats
        .into_iter()
        .map(to_matrix)
        .collect::<PyResult<Vec<_>>>()?;
    MatrixFamily::new(mats).map_err(py_err)
}

fn to_psd_family(mats: Vec<Rows>) -> PyResult<PsdFamily> {
    let mats = mats
        .into_iter()
        .map(to_matrix)
        .collect::<PyResult<Vec<_>>>()?;
    PsdFamily::new(mats).map_err(py_err)
}

fn cfg_or_default(cfg: Option<PyRef<'_, PyToleranceConfig>>) -> ToleranceConfig {
    cfg.map(|c| c.inner).unwrap_or_default()
}

/// Numerical policy: rank cutoff, tolerances, seed and budgets.
#[pyclass(name = "ToleranceConfig", module = "hspan_py", skip_from_py_object)]
#[derive(Clone)]
struct PyToleranceConfig {
    inner: ToleranceConfig,
}

#[pymethods]
impl PyToleranceConfig {
    #[new]
    #[pyo3(signature = (
        rank_rel_tol = 1e-10,
        identity_abs_tol = 1e-10,
        subspace_tol = 1e-8,
        seed = 0,
        oracle_budget = 65_536,
        tensor_budget = 1_000_000,
        stability_window = 5,
        max_samples = None,
    ))]
    #[allow(clippy::too_many_arguments)]
    fn new(
        rank_rel_tol: f64,
        identity_abs_tol: f64,
        subspace_tol: f64,
        seed: u64,
        oracle_budget: u64,
        tensor_budget: u64,
        stability_window: usize,
        max_samples: Option<usize>,
    ) -> PyResult<Self> {
        let inner = ToleranceConfig {
            rank_rel_tol,
            identity_abs_tol,
            subspace_tol,
            seed,
            oracle_budget,
            tensor_budget,
            stability_window,
            max_samples,
        };
        inner.validate().map_err(py_err)?;
        Ok(Self { inner })
    }

    #[getter]
    fn rank_rel_tol(&self) -> f64 {
        self.inner.rank_rel_tol
    }

    #[getter]
    fn identity_abs_tol(&self) -> f64 {
        self.inner.identity_abs_tol
    }

    #[getter]
    fn subspace_tol(&self) -> f64 {
        self.inner.subspace_tol
    }

    #[getter]
    fn seed(&self) -> u64 {
        self.inner.seed
    }

    fn __repr__(&self) -> String {
        format!("{:?}", self.inner)
    }
}

/// Subspace of C^n held as an orthonormal basis.
#[pyclass(name = "Subspace", module = "hspan_py")]
struct PySubspace {
    inner: Subspace,
}

impl From<Subspace> for PySubspace {
    fn from(inner: Subspace) -> Self {
        Self { inner }
    }
}

#[pymethods]
impl PySubspace {
    #[getter]
    fn ambient_dim(&self) -> usize {
        self.inner.ambient_dim()
    }

    #[getter]
    fn rank(&self) -> usize {
        self.inner.rank()
    }

    #[getter]
    fn tol_used(&self) -> f64 {
        self.inner.tol_used()
    }

    /// n x rank orthonormal basis as rows.
    fn basis(&self) -> Rows {
        to_rows(self.inner.basis())
    }

    fn projector(&self) -> Rows {
        to_rows(&self.inner.projector())
    }

    fn complement_projector(&self) -> Rows {
        to_rows(&self.inner.complement_projector())
    }

    fn orthonormality_defect(&self) -> f64 {
        self.inner.orthonormality_defect()
    }

    /// Frobenius distance between the two orthogonal projectors.
    fn distance(&self, other: PyRef<'_, PySubspace>) -> PyResult<f64> {
        self.inner.distance(&other.inner).map_err(py_err)
    }

    #[pyo3(signature = (v, tol = 1e-10))]
    fn contains(&self, v: Vec<Complex64>, tol: f64) -> PyResult<bool> {
        let v = ComplexVector::from_vec(v).map_err(py_err)?;
        self.inner.contains(&v, tol).map_err(py_err)
    }

    fn __repr__(&self) -> String {
        format!(
            "Subspace(ambient_dim={}, rank={})",
            self.inner.ambient_dim(),
            self.inner.rank()
        )
    }
}

#[pyfunction]
fn hadamard(a: Rows, b: Rows) -> PyResult<Rows> {
    let out = to_matrix(a)?.hadamard(&to_matrix(b)?).map_err(py_err)?;
    Ok(to_rows(&out))
}

#[pyfunction]
fn matmul(a: Rows, b: Rows) -> PyResult<Rows> {
    let out = to_matrix(a)?.matmul(&to_matrix(b)?).map_err(py_err)?;
    Ok(to_rows(&out))
}

#[pyfunction]
fn conj_transpose(a: Rows) -> PyResult<Rows> {
    Ok(to_rows(&to_matrix(a)?.conj_transpose()))
}

/// Eigenvalues (descending) and eigenvector matrix of a Hermitian matrix.
#[pyfunction]
fn hermitian_eig(a: Rows) -> PyResult<(Vec<f64>, Rows)> {
    let eig = hspan::hermitian_eig(&to_matrix(a)?).map_err(py_err)?;
    Ok((eig.values, to_rows(&eig.vectors)))
}

#[pyfunction]
#[pyo3(signature = (a, cfg = None))]
fn range_basis(a: Rows, cfg: Option<PyRef<'_, PyToleranceConfig>>) -> PyResult<PySubspace> {
    Ok(hspan::range_basis(&to_matrix(a)?, &cfg_or_default(cfg)).into())
}

/// (B_1 B_1^*) ∘ ... ∘ (B_k B_k^*).
#[pyfunction]
fn gram_hadamard(family: Vec<Rows>) -> PyResult<Rows> {
    Ok(to_rows(&hspan::gram_hadamard(&to_family(family)?)))
}

#[pyfunction]
#[pyo3(signature = (family, cfg = None))]
fn theorem_span(
    family: Vec<Rows>,
    cfg: Option<PyRef<'_, PyToleranceConfig>>,
) -> PyResult<PySubspace> {
    Ok(hspan::theorem_span(&to_family(family)?, &cfg_or_default(cfg)).into())
}

#[pyfunction]
#[pyo3(signature = (family, cfg = None))]
fn basis_product_oracle(
    family: Vec<Rows>,
    cfg: Option<PyRef<'_, PyToleranceConfig>>,
) -> PyResult<PySubspace> {
    hspan::basis_product_oracle(&to_family(family)?, &cfg_or_default(cfg))
        .map(Into::into)
        .map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (family, samples, cfg = None))]
fn random_sample_span(
    family: Vec<Rows>,
    samples: usize,
    cfg: Option<PyRef<'_, PyToleranceConfig>>,
) -> PyResult<PySubspace> {
    hspan::random_sample_span(&to_family(family)?, samples, &cfg_or_default(cfg))
        .map(Into::into)
        .map_err(py_err)
}

#[pyfunction]
fn psd_sqrt(a: Rows) -> PyResult<Rows> {
    Ok(to_rows(&hspan::psd_sqrt(&to_matrix(a)?).map_err(py_err)?))
}

#[pyfunction]
#[pyo3(signature = (family, cfg = None))]
fn corollary5_span(
    family: Vec<Rows>,
    cfg: Option<PyRef<'_, PyToleranceConfig>>,
) -> PyResult<PySubspace> {
    Ok(hspan::corollary5_span(&to_psd_family(family)?, &cfg_or_default(cfg)).into())
}

/// Single-vector sampler; returns the subspace and the number of draws.
#[pyfunction]
#[pyo3(signature = (family, cfg = None))]
fn corollary4_sample_span(
    family: Vec<Rows>,
    cfg: Option<PyRef<'_, PyToleranceConfig>>,
) -> PyResult<(PySubspace, usize)> {
    let SamplerRun {
        subspace,
        samples_drawn,
        ..
    } = span::corollary4_sample_run(&to_psd_family(family)?, &cfg_or_default(cfg));
    Ok((subspace.into(), samples_drawn))
}

/// Runs every proof certificate and returns the report as a dict.
#[pyfunction]
#[pyo3(signature = (family, psd = false, trials = 50, pairing_trials = 10, cfg = None))]
fn verify_all<'py>(
    py: Python<'py>,
    family: Vec<Rows>,
    psd: bool,
    trials: usize,
    pairing_trials: usize,
    cfg: Option<PyRef<'_, PyToleranceConfig>>,
) -> PyResult<Bound<'py, PyAny>> {
    let input = if psd {
        AnyFamily::Psd(to_psd_family(family)?)
    } else {
        AnyFamily::General(to_family(family)?)
    };
    let opts = VerifyOptions {
        trials,
        pairing_trials,
        ..VerifyOptions::default()
    };
    let report = hspan::verify_all(&input, &opts, &cfg_or_default(cfg)).map_err(py_err)?;
    let text = serde_json::to_string(&report).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn split(family: &AnyFamily) -> (&'static str, Vec<Rows>) {
    match family {
        AnyFamily::General(f) => ("general", f.matrices().iter().map(to_rows).collect()),
        AnyFamily::Psd(f) => ("psd", f.matrices().iter().map(to_rows).collect()),
    }
}

/// Random family as (kind, matrices), identical to `hspan gen` for the same arguments.
#[pyfunction]
#[pyo3(signature = (n, k, kind = "general", rank_deficit = 0, seed = 0))]
fn generate(
    n: usize,
    k: usize,
    kind: &str,
    rank_deficit: usize,
    seed: u64,
) -> PyResult<(&'static str, Vec<Rows>)> {
    let kind = match kind {
        "general" => FamilyKind::General,
        "psd" => FamilyKind::Psd,
        other => return Err(PyValueError::new_err(format!("unknown kind {other:?}"))),
    };
    let spec = GenSpec {
        n,
        k,
        kind,
        rank_deficit,
        seed,
    };
    Ok(split(&hspan::generate(&spec).map_err(py_err)?))
}

/// Loads and validates an instance file, returning (kind, matrices).
#[pyfunction]
fn load_instance(path: &str) -> PyResult<(&'static str, Vec<Rows>)> {
    let family = InstanceFile::load(path)
        .and_then(|f| f.to_family())
        .map_err(py_err)?;
    Ok(split(&family))
}

#[pymodule]
fn hspan_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyToleranceConfig>()?;
    m.add_class::<PySubspace>()?;
    m.add_function(wrap_pyfunction!(hadamard, m)?)?;
    m.add_function(wrap_pyfunction!(matmul, m)?)?;
    m.add_function(wrap_pyfunction!(conj_transpose, m)?)?;
    m.add_function(wrap_pyfunction!(hermitian_eig, m)?)?;
    m.add_function(wrap_pyfunction!(range_basis, m)?)?;
    m.add_function(wrap_pyfunction!(gram_hadamard, m)?)?;
    m.add_function(wrap_pyfunction!(theorem_span, m)?)?;
    m.add_function(wrap_pyfunction!(basis_product_oracle, m)?)?;
    m.add_function(wrap_pyfunction!(random_sample_span, m)?)?;
    m.add_function(wrap_pyfunction!(psd_sqrt, m)?)?;
    m.add_function(wrap_pyfunction!(corollary5_span, m)?)?;
    m.add_function(wrap_pyfunction!(corollary4_sample_span, m)?)?;
    m.add_function(wrap_pyfunction!(verify_all, m)?)?;
    m.add_function(wrap_pyfunction!(generate, m)?)?;
    m.add_function(wrap_pyfunction!(load_instance, m)?)?;
    Ok(())
}
