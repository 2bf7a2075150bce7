use std::collections::BTreeMap;

use num_bigint::BigUint;
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;

use phyper::catalog::SpaceId;
use phyper::freelie::{hall_basis as core_hall_basis, GeneratorSpec};
use phyper::hyperbolicity::{certify_catalog_space, wedge_summand_census, CertificationOutcome};
use phyper::oracles::{verify_oracles as core_verify_oracles, Scope};
use phyper::output::CertificateDocument;
use phyper::stems::{stable_summand_stem as core_stem, StemWitness};

create_exception!(phyper, HypothesisFailure, PyException);

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

#[pyfunction]
fn witt(n: u64, k: u64) -> BigUint {
    phyper::numtheory::witt(n, k)
}

/// `(index, bracket, weight, degree)` for every basic product up to `max_weight`.
#[pyfunction]
fn hall_basis(degrees: Vec<u64>, max_weight: usize) -> PyResult<Vec<(usize, String, usize, u64)>> {
    let spec = GeneratorSpec::new(degrees).map_err(value_err)?;
    let basis = core_hall_basis(&spec, max_weight);
    Ok(basis
        .iter()
        .map(|b| (b.index(), b.to_string(), b.weight(), b.degree()))
        .collect())
}

#[pyclass(name = "StemWitness", frozen)]
struct PyStemWitness(StemWitness);

#[pymethods]
impl PyStemWitness {
    #[getter]
    fn p(&self) -> u64 {
        self.0.p
    }
    #[getter]
    fn r(&self) -> u32 {
        self.0.r
    }
    #[getter]
    fn j(&self) -> u64 {
        self.0.j
    }
    #[getter]
    fn t(&self) -> Option<u64> {
        self.0.t
    }
    #[getter]
    fn case(&self) -> String {
        self.0.case.to_string()
    }
    fn stable_from(&self) -> u64 {
        self.0.stable_from()
    }
    fn __repr__(&self) -> String {
        format!("StemWitness(p={}, r={}, j={})", self.0.p, self.0.r, self.0.j)
    }
}

#[pyfunction]
fn stable_summand_stem(p: u64, r: u32) -> PyResult<PyStemWitness> {
    core_stem(p, r).map(PyStemWitness).map_err(value_err)
}

/// A wedge census or a K-detection certificate.
#[pyclass(name = "Certificate", frozen)]
struct PyCertificate(CertificateDocument);

#[pymethods]
impl PyCertificate {
    #[staticmethod]
    fn from_json(s: &str) -> PyResult<Self> {
        CertificateDocument::from_json(s).map(Self).map_err(value_err)
    }
    #[getter]
    fn space(&self) -> &str {
        &self.0.space
    }
    #[getter]
    fn p(&self) -> u64 {
        self.0.p
    }
    #[getter]
    fn q(&self) -> (u64, u64) {
        (self.0.q1, self.0.q2)
    }
    #[getter]
    fn c(&self) -> Option<u64> {
        self.0.c
    }
    #[getter]
    fn i_lambda(&self) -> Option<u32> {
        self.0.i_lambda
    }
    #[getter]
    fn k0(&self) -> u64 {
        self.0.k0
    }
    #[getter]
    fn a(&self) -> u64 {
        self.0.a
    }
    #[getter]
    fn b(&self) -> u64 {
        self.0.b
    }
    #[getter]
    fn liminf_ln2_coeff(&self) -> &str {
        &self.0.liminf_ln2_coeff
    }
    /// `(k, witt, {degree: count})` per row.
    #[getter]
    fn rows(&self) -> Vec<(u64, u64, BTreeMap<u64, u64>)> {
        self.0.rows.iter().map(|r| (r.k, r.witt, r.degrees.clone())).collect()
    }
    fn to_json(&self) -> String {
        self.0.to_json()
    }
    fn to_csv(&self) -> String {
        self.0.to_csv()
    }
    fn to_text(&self) -> String {
        self.0.to_text()
    }
    fn __repr__(&self) -> String {
        format!("Certificate(space={:?}, p={}, a={})", self.0.space, self.0.p, self.0.a)
    }
}

#[pyfunction]
#[pyo3(signature = (q1, q2, p, k_max, r = 1))]
fn wedge_census(q1: u64, q2: u64, p: u64, k_max: u64, r: u32) -> PyResult<PyCertificate> {
    let census = wedge_summand_census(q1, q2, p, r, k_max).map_err(value_err)?;
    let space = format!("Wedge({},{})", q1.min(q2) + 1, q1.max(q2) + 1);
    Ok(PyCertificate(CertificateDocument::from_wedge(&census, &space)))
}

/// Raises `HypothesisFailure` with the JSON reason when the built-in map does not qualify.
#[pyfunction]
fn certify(space: &str, p: u64, k_max: u64) -> PyResult<PyCertificate> {
    let id: SpaceId = space.parse().map_err(value_err)?;
    match certify_catalog_space(&id, p, k_max).map_err(value_err)? {
        CertificationOutcome::Certified(c) => Ok(PyCertificate(CertificateDocument::from_certificate(&c))),
        CertificationOutcome::HypothesisFailure(f) => {
            let json = serde_json::to_string(&f).expect("failure serializes");
            Err(HypothesisFailure::new_err((f.to_string(), json)))
        }
    }
}

/// `(all_passed, report_text)`.
#[pyfunction]
#[pyo3(signature = (scope = "all"))]
fn verify_oracles(scope: &str) -> PyResult<(bool, String)> {
    let scope = match scope {
        "numtheory" => Scope::Numtheory,
        "freelie" => Scope::Freelie,
        "stems" => Scope::Stems,
        "all" => Scope::All,
        other => return Err(PyValueError::new_err(format!("unknown scope {other:?}"))),
    };
    let report = core_verify_oracles(scope);
    Ok((report.passed(), report.to_string()))
}

/// Same as the `phyper` binary: returns `(exit_code, stdout, stderr)`.
#[pyfunction]
fn run_cli(args: Vec<String>) -> (i32, String, String) {
    let out = phyper::cli::run(std::iter::once("phyper".to_string()).chain(args));
    (out.code, out.stdout, out.stderr)
}

#[pymodule]
#[pyo3(name = "phyper")]
fn phyper_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("HypothesisFailure", m.py().get_type::<HypothesisFailure>())?;
    m.add_class::<PyStemWitness>()?;
    m.add_class::<PyCertificate>()?;
    m.add_function(wrap_pyfunction!(witt, m)?)?;
    m.add_function(wrap_pyfunction!(hall_basis, m)?)?;
    m.add_function(wrap_pyfunction!(stable_summand_stem, m)?)?;
    m.add_function(wrap_pyfunction!(wedge_census, m)?)?;
    m.add_function(wrap_pyfunction!(certify, m)?)?;
    m.add_function(wrap_pyfunction!(verify_oracles, m)?)?;
    m.add_function(wrap_pyfunction!(run_cli, m)?)?;
    Ok(())
}
