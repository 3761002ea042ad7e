//! Python bindings. Reports come back as plain dicts and lists.

use num_bigint::BigInt;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};
use serde::Serialize;
use serde_json::Value;

use veronese_core::cohomology::{cohomology_orders, CyclicAction};
use veronese_core::geometry::{fiber_check, jacobian_rank};
use veronese_core::gluing::{completely_p_glued, default_s_cap, SemigroupGens};
use veronese_core::lattice::{smith_normal_form, IntMatrix};
use veronese_core::poly::PrimeField;
use veronese_core::reproduce::run_all;
use veronese_core::sci::{
    build_certificate, default_k_max, full_ideal_point_survey, point_survey, verify_char_p,
    SciError, SurveyMode, DEFAULT_ENUMERATION_BUDGET,
};
use veronese_core::toric::{quadratic_generators, rewrite, GeneratorStyle, TypeStarBinomial};
use veronese_core::veronese::{IndexTuple, VeroneseParams};

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn sci_err(e: SciError) -> PyErr {
    match e {
        SciError::BudgetExceeded { .. } | SciError::KMaxExceeded { .. } => {
            PyRuntimeError::new_err(e.to_string())
        }
        SciError::Poly(_) => value_err(e),
    }
}

fn to_py<'py>(py: Python<'py>, v: &Value) -> PyResult<Bound<'py, PyAny>> {
    Ok(match v {
        Value::Null => py.None().into_bound(py),
        Value::Bool(b) => b.into_pyobject(py)?.to_owned().into_any(),
        Value::Number(n) => match (n.as_u64(), n.as_i64()) {
            (Some(u), _) => u.into_pyobject(py)?.into_any(),
            (None, Some(i)) => i.into_pyobject(py)?.into_any(),
            _ => n.as_f64().unwrap_or(f64::NAN).into_pyobject(py)?.into_any(),
        },
        Value::String(s) => s.into_pyobject(py)?.into_any(),
        Value::Array(xs) => {
            let list = PyList::empty(py);
            for x in xs {
                list.append(to_py(py, x)?)?;
            }
            list.into_any()
        }
        Value::Object(m) => {
            let d = PyDict::new(py);
            for (k, x) in m {
                d.set_item(k, to_py(py, x)?)?;
            }
            d.into_any()
        }
    })
}

fn report<'py>(py: Python<'py>, x: &impl Serialize) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &serde_json::to_value(x).map_err(value_err)?)
}

fn style_of(s: &str) -> PyResult<GeneratorStyle> {
    match s {
        "star" => Ok(GeneratorStyle::Star),
        "full" => Ok(GeneratorStyle::Full),
        _ => Err(value_err(format!(
            "unknown style {s:?}, expected 'star' or 'full'"
        ))),
    }
}

/// Veronese variety V^n_q with q = p^h.
#[pyclass(name = "Veronese", frozen)]
struct PyVeronese {
    inner: veronese_core::veronese::Veronese,
}

#[pymethods]
impl PyVeronese {
    #[new]
    fn new(n: usize, p: u64, h: u32) -> PyResult<Self> {
        let params = VeroneseParams::new(n, p, h).map_err(value_err)?;
        Ok(PyVeronese {
            inner: veronese_core::veronese::Veronese::new(params),
        })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn p(&self) -> u64 {
        self.inner.params().p()
    }

    #[getter]
    fn h(&self) -> u32 {
        self.inner.params().h()
    }

    #[getter]
    fn q(&self) -> u64 {
        self.inner.q()
    }

    #[getter]
    fn codimension(&self) -> usize {
        self.inner.codimension()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("Veronese(n={}, p={}, h={})", self.n(), self.p(), self.h())
    }

    fn variable_names(&self) -> Vec<String> {
        self.inner.variable_names()
    }

    fn tuples(&self) -> Vec<Vec<u16>> {
        self.inner.tuples().iter().map(|t| t.0.clone()).collect()
    }

    fn exponents(&self) -> Vec<Vec<u32>> {
        self.inner.exponents().iter().map(|a| a.0.clone()).collect()
    }

    #[pyo3(signature = (style = "star"))]
    fn generators(&self, style: &str) -> PyResult<Vec<String>> {
        let names = self.inner.variable_names();
        Ok(quadratic_generators(&self.inner, style_of(style)?)
            .iter()
            .map(|b| b.format(&names))
            .collect())
    }

    fn certificate(&self) -> Vec<String> {
        build_certificate(&self.inner)
            .to_json(&self.inner)
            .binomials
    }

    fn parametrize(&self, u: Vec<u64>, r: u64) -> PyResult<Vec<u64>> {
        let field = PrimeField::new(r).map_err(value_err)?;
        if u.len() != self.n() {
            return Err(value_err(format!("expected {} parameters", self.n())));
        }
        Ok(self.inner.parametrize(&u, field))
    }

    /// Rewrite the type-(*) binomial given by index blocks and a 1-based
    /// slot permutation.
    fn rewrite<'py>(
        &self,
        py: Python<'py>,
        blocks: Vec<Vec<u16>>,
        sigma: Vec<usize>,
    ) -> PyResult<Bound<'py, PyAny>> {
        let f = TypeStarBinomial {
            blocks: blocks.into_iter().map(IndexTuple).collect(),
            sigma,
        };
        let target = f.to_int_poly(&self.inner).map_err(value_err)?;
        let cert = rewrite(&self.inner, &f).map_err(value_err)?;
        let names = self.inner.variable_names();
        let out = serde_json::json!({
            "binomial": target.format_with(&names),
            "verified": cert.verifies(&target),
            "steps": cert.to_json(&names),
        });
        to_py(py, &out)
    }

    #[pyo3(signature = (k_max = None))]
    fn verify_sci<'py>(&self, py: Python<'py>, k_max: Option<u32>) -> PyResult<Bound<'py, PyAny>> {
        let k_max = k_max.unwrap_or_else(|| default_k_max(self.h()));
        let cert =
            verify_char_p(&self.inner, &build_certificate(&self.inner), k_max).map_err(sci_err)?;
        report(py, &cert.witnesses_json(&self.inner))
    }

    #[pyo3(signature = (r, set = "certificate", budget = DEFAULT_ENUMERATION_BUDGET))]
    fn points<'py>(
        &self,
        py: Python<'py>,
        r: u64,
        set: &str,
        budget: u64,
    ) -> PyResult<Bound<'py, PyAny>> {
        let rep = match set {
            "certificate" => point_survey(
                &self.inner,
                &build_certificate(&self.inner),
                r,
                SurveyMode::FullEnumeration,
                budget,
            ),
            "full" => full_ideal_point_survey(&self.inner, r, budget),
            _ => return Err(value_err(format!("unknown point set {set:?}"))),
        }
        .map_err(sci_err)?;
        report(py, &rep)
    }

    #[pyo3(signature = (s_cap = None))]
    fn gluing<'py>(&self, py: Python<'py>, s_cap: Option<u32>) -> PyResult<Bound<'py, PyAny>> {
        let p = self.p();
        let s_cap = s_cap.unwrap_or_else(|| default_s_cap(self.h()));
        let tree = completely_p_glued(&SemigroupGens::of_veronese(&self.inner), p, self.h(), s_cap)
            .map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
        tree.validate(p).map_err(PyRuntimeError::new_err)?;
        report(py, &tree)
    }

    fn jacobian<'py>(
        &self,
        py: Python<'py>,
        point: Vec<u64>,
        r: u64,
    ) -> PyResult<Bound<'py, PyAny>> {
        let b = quadratic_generators(&self.inner, GeneratorStyle::Full);
        report(
            py,
            &jacobian_rank(&self.inner, &b, &point, r).map_err(value_err)?,
        )
    }

    fn fibers<'py>(&self, py: Python<'py>, u: Vec<u64>, r: u64) -> PyResult<Bound<'py, PyAny>> {
        report(py, &fiber_check(&self.inner, r, &u).map_err(value_err)?)
    }
}

/// Orders of H^i(Z/q, Z/q) for i = 0..i_max, generator acting by a.
#[pyfunction]
#[pyo3(signature = (q, a, i_max = 6))]
fn cohomology(py: Python<'_>, q: u64, a: u64, i_max: usize) -> PyResult<Bound<'_, PyAny>> {
    let act = CyclicAction::new(q, a).map_err(value_err)?;
    report(py, &cohomology_orders(&act, i_max))
}

/// Invariant factors of an integer matrix given as a list of rows.
#[pyfunction]
fn invariant_factors(rows: Vec<Vec<BigInt>>) -> PyResult<Vec<BigInt>> {
    let r = rows.len();
    let c = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|row| row.len() != c) {
        return Err(value_err("ragged matrix"));
    }
    let m = IntMatrix::from_row_major(r, c, rows.into_iter().flatten().collect());
    Ok(smith_normal_form(&m).d)
}

/// Runs the acceptance matrix.
#[pyfunction]
fn reproduce(py: Python<'_>) -> PyResult<Bound<'_, PyAny>> {
    report(py, &run_all())
}

#[pymodule]
fn veronese(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyVeronese>()?;
    m.add_function(wrap_pyfunction!(cohomology, m)?)?;
    m.add_function(wrap_pyfunction!(invariant_factors, m)?)?;
    m.add_function(wrap_pyfunction!(reproduce, m)?)?;
    Ok(())
}
