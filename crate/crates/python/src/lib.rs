//! Python bindings. Rationals cross the boundary as `"p/q"` strings and
//! composite reports as JSON text in the same schemas as the CLI.

use pyo3::exceptions::{PyNotImplementedError, PyValueError};
use pyo3::prelude::*;

use metlie::classify::{self, FamilyJson, FamilySpec, DEFAULT_ORBIT_BOUND};
use metlie::decomp::{self, Decision};
use metlie::json::{parse, render};
use metlie::liecore::{self, Subspace};
use metlie::linalg::{fmt_q, Matrix, Q};
use metlie::twofold;

fn py_err(e: metlie::Error) -> PyErr {
    match e {
        metlie::Error::Unsupported(_) => PyNotImplementedError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

trait OrPy<T> {
    fn py(self) -> PyResult<T>;
}

impl<T> OrPy<T> for metlie::Result<T> {
    fn py(self) -> PyResult<T> {
        self.map_err(py_err)
    }
}

fn strings(v: &[Q]) -> Vec<String> {
    v.iter().map(fmt_q).collect()
}

fn rows(m: &Matrix) -> Vec<Vec<String>> {
    m.to_rows().iter().map(|r| strings(r)).collect()
}

fn basis(s: &Subspace) -> Vec<Vec<String>> {
    s.basis().iter().map(|v| strings(v)).collect()
}

/// A finite-dimensional Lie algebra with an invariant inner product.
#[pyclass(module = "metlie_py", frozen)]
#[derive(Clone)]
struct MetricLieAlgebra(liecore::MetricLieAlgebra);

#[pymethods]
impl MetricLieAlgebra {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Self(liecore::MetricLieAlgebra::from_json(parse(text).py()?).py()?))
    }

    fn to_json(&self) -> String {
        render(&self.0.to_json())
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    /// Axiom report as JSON; `passed` summarises it.
    fn verify(&self) -> String {
        render(&self.0.verify())
    }

    fn passes(&self) -> bool {
        self.0.verify().passed()
    }

    /// `(negative, positive, nullity)`.
    fn signature(&self) -> PyResult<(usize, usize, usize)> {
        let s = self.0.signature().py()?;
        Ok((s.negative, s.positive, s.nullity))
    }

    fn centre(&self) -> Vec<Vec<String>> {
        basis(&self.0.centre())
    }

    fn derived(&self) -> Vec<Vec<String>> {
        basis(&self.0.derived())
    }

    fn is_abelian(&self) -> bool {
        self.0.is_abelian()
    }

    fn is_nilpotent(&self) -> bool {
        self.0.is_nilpotent()
    }

    /// Returns the twofold data and the frame matrix (columns in input
    /// coordinates).
    fn extract(&self) -> PyResult<(TwofoldData, Vec<Vec<String>>)> {
        let ex = twofold::extract(&self.0).py()?;
        Ok((TwofoldData(ex.data), rows(&ex.frame)))
    }

    fn __repr__(&self) -> String {
        format!("MetricLieAlgebra(dim={})", self.0.dim())
    }
}

/// Data `(ρ, α, γ)` of a twofold extension of `l` by an orthogonal module `a`.
#[pyclass(module = "metlie_py", frozen)]
#[derive(Clone)]
struct TwofoldData(twofold::TwofoldData);

#[pymethods]
impl TwofoldData {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Self(twofold::TwofoldData::from_json(parse(text).py()?).py()?))
    }

    fn to_json(&self) -> String {
        render(&self.0.to_json())
    }

    #[getter]
    fn l(&self) -> usize {
        self.0.l()
    }

    #[getter]
    fn a(&self) -> usize {
        self.0.a()
    }

    fn build(&self) -> MetricLieAlgebra {
        MetricLieAlgebra(self.0.build())
    }

    fn is_regular(&self) -> bool {
        twofold::regularity(&self.0).regular
    }

    /// The shift `τ` with `other = self.act(τ)` as cochain JSON, or `None`.
    fn equivalent(&self, other: &TwofoldData) -> PyResult<Option<String>> {
        Ok(twofold::extension_equivalent(&self.0, &other.0).py()?.map(|t| render(&t.to_json())))
    }

    /// `"decomposable"`, `"indecomposable"` or `"undecided"` for Euclidean `a`.
    fn decompose(&self) -> PyResult<&'static str> {
        Ok(match decomp::euclidean_decomposable(&self.0).py()? {
            Decision::Decomposable(_) => "decomposable",
            Decision::Indecomposable => "indecomposable",
            Decision::Undecided(_) => "undecided",
        })
    }

    fn __repr__(&self) -> String {
        format!("TwofoldData(l={}, a={})", self.0.l(), self.0.a())
    }
}

/// A member of one of the families `osc`, `d`, `dA` or a table row.
#[pyclass(module = "metlie_py", frozen)]
#[derive(Clone)]
struct Family(FamilySpec);

#[pymethods]
impl Family {
    /// `lambda` lists the weights, one row of `l` rationals each.
    #[new]
    #[pyo3(signature = (family, lambda, row = None))]
    fn new(family: &str, lambda: Vec<Vec<String>>, row: Option<String>) -> PyResult<Self> {
        let j = serde_json::json!({ "family": family, "row": row, "lambda": lambda });
        let j: FamilyJson = parse(&j.to_string()).py()?;
        Ok(Self(FamilySpec::from_json(j).py()?))
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Self(FamilySpec::from_json(parse(text).py()?).py()?))
    }

    fn to_json(&self) -> String {
        render(&self.0.to_json())
    }

    fn admissible(&self) -> PyResult<bool> {
        self.0.admissible().py()
    }

    fn data(&self) -> PyResult<TwofoldData> {
        Ok(TwofoldData(classify::build_family(&self.0).py()?))
    }

    fn build(&self) -> PyResult<MetricLieAlgebra> {
        Ok(MetricLieAlgebra(classify::build_family(&self.0).py()?.build()))
    }

    /// Canonical invariant with its certificate, as JSON.
    #[pyo3(signature = (orbit_bound = DEFAULT_ORBIT_BOUND))]
    fn invariant(&self, orbit_bound: usize) -> PyResult<String> {
        Ok(render(&classify::invariant(&self.0, orbit_bound).py()?.to_json()))
    }

    /// `(isomorphic, reason)`; see `witness` for the explicit map.
    #[pyo3(signature = (other, orbit_bound = DEFAULT_ORBIT_BOUND))]
    fn isomorphic(&self, other: &Family, orbit_bound: usize) -> PyResult<(bool, Option<String>)> {
        let out = classify::isomorphic_family(&self.0, &other.0, orbit_bound).py()?;
        Ok((out.isomorphic, out.reason))
    }

    /// The isomorphism `build(self) → build(other)` as rows, when one exists.
    #[pyo3(signature = (other, orbit_bound = DEFAULT_ORBIT_BOUND))]
    fn witness(&self, other: &Family, orbit_bound: usize) -> PyResult<Option<Vec<Vec<String>>>> {
        let out = classify::isomorphic_family(&self.0, &other.0, orbit_bound).py()?;
        Ok(out.witness.map(|w| rows(&w.f)))
    }

    #[pyo3(signature = (orbit_bound = DEFAULT_ORBIT_BOUND))]
    fn classify_index2(&self, orbit_bound: usize) -> PyResult<String> {
        Ok(render(&classify::classify_index2(&self.0, orbit_bound).py()?))
    }

    fn __repr__(&self) -> String {
        format!("Family({})", serde_json::to_string(&self.0.to_json()).unwrap_or_default())
    }
}

#[pymodule]
fn metlie_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<MetricLieAlgebra>()?;
    m.add_class::<TwofoldData>()?;
    m.add_class::<Family>()?;
    m.add("DEFAULT_ORBIT_BOUND", DEFAULT_ORBIT_BOUND)?;
    Ok(())
}
