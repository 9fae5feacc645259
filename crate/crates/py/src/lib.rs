use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;

use epw_core::epw::{self as locus, SexticEquation};
use epw_core::lagrangian::{self, CertificatePrimes, LagrangianJson};
use epw_core::{chern, enumerate, mukai, symplectic, Field, FieldScalar, LagrangianSubspace};

create_exception!(epw, EpwError, PyException);

fn err(e: epw_core::Error) -> PyErr {
    EpwError::new_err(e.to_string())
}

fn field_of(prime: Option<u64>) -> PyResult<Field> {
    match prime {
        None => Ok(Field::Rational),
        Some(p) => Field::prime(p).map_err(err),
    }
}

/// Serializes through `json.loads` so reports arrive as plain dicts.
fn to_py<'py>(py: Python<'py>, value: &impl serde::Serialize) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| EpwError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

/// Coordinates given as ints or strings such as `"3/4"`.
fn point(field: Field, coords: &[Bound<'_, PyAny>]) -> PyResult<Vec<FieldScalar>> {
    coords
        .iter()
        .map(|c| field.parse_scalar(&c.str()?.to_cow()?).map_err(err))
        .collect()
}

/// A Lagrangian subspace of the third exterior power of a 6-dimensional space.
#[pyclass(name = "Lagrangian", module = "epw", frozen)]
struct PyLagrangian {
    inner: LagrangianSubspace,
}

#[pymethods]
impl PyLagrangian {
    /// Seeded graph Lagrangian over Q, or over F_p when `prime` is given.
    #[staticmethod]
    #[pyo3(signature = (seed, prime=None))]
    fn sample(seed: u64, prime: Option<u64>) -> PyResult<Self> {
        Ok(PyLagrangian {
            inner: lagrangian::sample_lagrangian(seed, field_of(prime)?),
        })
    }

    /// Graph Lagrangian whose quadric `q_A` has rank 7.
    #[staticmethod]
    #[pyo3(signature = (seed, prime=None))]
    fn sample_rank7(seed: u64, prime: Option<u64>) -> PyResult<Self> {
        Ok(PyLagrangian {
            inner: mukai::sample_rank7_lagrangian(seed, field_of(prime)?).map_err(err)?,
        })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let j: LagrangianJson = serde_json::from_str(text).map_err(|e| EpwError::new_err(e.to_string()))?;
        Ok(PyLagrangian {
            inner: LagrangianSubspace::from_json(&j).map_err(err)?,
        })
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.inner.to_json()).unwrap()
    }

    #[getter]
    fn prime(&self) -> Option<u64> {
        self.inner.field().modulus()
    }

    /// Echelon basis as 10 rows of 20 coordinate strings.
    #[getter]
    fn basis(&self) -> Vec<Vec<String>> {
        self.inner.to_json().basis
    }

    fn reduce_mod(&self, p: u64) -> PyResult<Self> {
        Ok(PyLagrangian {
            inner: self.inner.reduce_mod(p).map_err(err)?,
        })
    }

    fn perp(&self) -> PyResult<Self> {
        Ok(PyLagrangian {
            inner: lagrangian::perp(&self.inner).map_err(err)?,
        })
    }

    #[pyo3(signature = (decomposable_prime=3, corank_prime=5))]
    fn certificates<'py>(&self, py: Python<'py>, decomposable_prime: u64, corank_prime: u64) -> PyResult<Bound<'py, PyAny>> {
        let primes = CertificatePrimes {
            decomposable: decomposable_prime,
            corank: corank_prime,
        };
        let r = py.detach(|| lagrangian::lg_certificates(&self.inner, primes)).map_err(err)?;
        to_py(py, &r)
    }

    fn corank_at(&self, v: Vec<Bound<'_, PyAny>>) -> PyResult<usize> {
        locus::corank_at(&self.inner, &point(self.inner.field(), &v)?).map_err(err)
    }

    fn sextic(&self, py: Python<'_>) -> PyResult<PySextic> {
        let inner = py.detach(|| locus::sextic_equation(&self.inner)).map_err(err)?;
        Ok(PySextic { inner })
    }

    /// Corank histogram over `P^5(F_p)` plus the points of corank at least 2.
    fn strata<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let s = py.detach(|| locus::strata_scan(&self.inner)).map_err(err)?;
        to_py(py, &s)
    }

    #[pyo3(signature = (seed=0, cross_check=false))]
    fn verify<'py>(&self, py: Python<'py>, seed: u64, cross_check: bool) -> PyResult<Bound<'py, PyAny>> {
        let opts = locus::VerifyOptions {
            seed,
            cross_check,
            ..Default::default()
        };
        let r = py.detach(|| locus::verify(&self.inner, &opts)).map_err(err)?;
        to_py(py, &r)
    }

    /// Whether the quadric-route sextic agrees with the chart sextic.
    fn quadric_route_agrees(&self, py: Python<'_>) -> PyResult<bool> {
        Ok(py.detach(|| mukai::sextic_via_quadrics(&self.inner, None)).map_err(err)?.proportional)
    }

    fn multiplicity_at_qa(&self, py: Python<'_>) -> PyResult<usize> {
        py.detach(|| mukai::multiplicity_at_qa(&self.inner)).map_err(err)
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner.basis() == other.inner.basis() && self.inner.space() == other.inner.space()
    }

    fn __repr__(&self) -> String {
        let field = match self.inner.field() {
            Field::Rational => "Q".to_string(),
            Field::Prime(p) => format!("F_{p}"),
        };
        format!("Lagrangian(field={field}, space={:?})", self.inner.space())
    }
}

/// Homogeneous sextic in `x0..x5`.
#[pyclass(name = "Sextic", module = "epw", frozen)]
struct PySextic {
    inner: SexticEquation,
}

#[pymethods]
impl PySextic {
    #[getter]
    fn degree(&self) -> i64 {
        self.inner.f.degree()
    }

    #[getter]
    fn num_terms(&self) -> usize {
        self.inner.f.num_terms()
    }

    #[getter]
    fn chart(&self) -> usize {
        self.inner.chart
    }

    fn is_homogeneous(&self) -> bool {
        self.inner.f.is_homogeneous()
    }

    /// Value at a point, as a string.
    fn eval(&self, v: Vec<Bound<'_, PyAny>>) -> PyResult<String> {
        let v = point(self.inner.f.field(), &v)?;
        Ok(self.inner.eval(&v).map_err(err)?.to_string())
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.inner.to_json()).unwrap()
    }

    fn __str__(&self) -> String {
        self.inner.f.to_string()
    }
}

#[pyfunction]
fn chern_report(py: Python<'_>) -> PyResult<Bound<'_, PyAny>> {
    to_py(py, &chern::chern_report().map_err(err)?)
}

#[pyfunction]
fn symplectic_uniqueness(py: Python<'_>) -> PyResult<(usize, usize)> {
    let u = py
        .detach(|| symplectic::symplectic_uniqueness(&symplectic::witness_lines(Field::Rational)))
        .map_err(err)?;
    Ok((u.constraints, u.kernel_dim))
}

#[pyfunction]
fn grassmannian_count(k: u32, n: u32, p: u64) -> u64 {
    enumerate::gaussian_binomial(n, k, p)
}

#[pyfunction]
fn projective_count(n: u32, p: u64) -> u64 {
    enumerate::projective_count(n, p)
}

#[pymodule]
fn epw(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyLagrangian>()?;
    m.add_class::<PySextic>()?;
    m.add_function(wrap_pyfunction!(chern_report, m)?)?;
    m.add_function(wrap_pyfunction!(symplectic_uniqueness, m)?)?;
    m.add_function(wrap_pyfunction!(grassmannian_count, m)?)?;
    m.add_function(wrap_pyfunction!(projective_count, m)?)?;
    m.add("EpwError", m.py().get_type::<EpwError>())?;
    Ok(())
}
