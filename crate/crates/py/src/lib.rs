//! Python bindings. Configurations and simplices cross the boundary as JSON.

use num_bigint::BigUint;
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use nfold::cubes::{self, Configuration, Mode};
use nfold::graph_operads::{gamma_member, GammaSimplex};
use nfold::topology::{gamma_chain_complex, homology as chain_homology, order_complex};
use nfold::{coherence, enumeration, milgram, Label, Op};

create_exception!(nfold, NfoldError, PyValueError);

fn err(e: nfold::Error) -> PyErr {
    NfoldError::new_err(e.to_string())
}

/// An object of M_n(k), written with `#i` for the i-th product.
#[pyclass(name = "Expr", module = "nfold", frozen, eq, ord, hash, from_py_object)]
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct PyExpr(nfold::Expr);

#[pymethods]
impl PyExpr {
    #[new]
    #[pyo3(signature = (text, n = 9))]
    fn new(text: &str, n: Op) -> PyResult<Self> {
        nfold::Expr::parse_object(text, n).map(PyExpr).map_err(err)
    }

    fn __str__(&self) -> String {
        self.0.render()
    }

    fn __repr__(&self) -> String {
        format!("Expr('{}')", self.0.render())
    }

    fn leaves(&self) -> Vec<Label> {
        self.0.leaves()
    }

    fn size(&self) -> usize {
        self.0.size()
    }

    fn max_op(&self) -> Op {
        self.0.max_op()
    }

    fn is_level_ordered(&self) -> bool {
        self.0.is_level_ordered()
    }

    fn restrict(&self, labels: Vec<Label>) -> Self {
        PyExpr(self.0.restrict(&labels.into_iter().collect()))
    }

    /// Label `a` becomes `sigma[a-1]`.
    fn permute(&self, sigma: Vec<Label>) -> PyResult<Self> {
        self.0.permute(&sigma).map(PyExpr).map_err(err)
    }

    /// `(a, b, op, first)` for every pair `a < b`.
    fn relations(&self, n: Op) -> PyResult<Vec<(Label, Label, Op, Label)>> {
        Ok(self.0.pair_table(n).map_err(err)?.relations())
    }
}

fn exprs(v: Vec<nfold::Expr>) -> Vec<PyExpr> {
    v.into_iter().map(PyExpr).collect()
}

fn unwrap_all(v: &[PyExpr]) -> Vec<nfold::Expr> {
    v.iter().map(|e| e.0.clone()).collect()
}

#[pyfunction]
fn hom_exists(a: &PyExpr, b: &PyExpr) -> PyResult<bool> {
    coherence::hom_exists(&a.0, &b.0).map_err(err)
}

/// JSON list of rewrite steps, or `None` when there is no morphism.
#[pyfunction]
#[pyo3(signature = (a, b, n, max_depth = None))]
fn witness(a: &PyExpr, b: &PyExpr, n: Op, max_depth: Option<usize>) -> PyResult<Option<String>> {
    let chain = coherence::reachability_witness(&a.0, &b.0, n, max_depth).map_err(err)?;
    Ok(chain.map(|c| coherence::witness_json(&c)))
}

#[pyfunction]
#[pyo3(signature = (n, k, milgram = false))]
fn enumerate(n: Op, k: usize, milgram: bool) -> Vec<PyExpr> {
    exprs(enumeration::enumerate(n, k, milgram))
}

/// `a^n_0 .. a^n_kmax`.
#[pyfunction]
fn shape_sequence(n: Op, kmax: usize) -> Vec<BigUint> {
    enumeration::shape_sequence(n, kmax)
}

#[pyfunction]
fn counts_csv(n: Op, kmax: usize) -> String {
    enumeration::shape_counts(n, kmax).to_csv()
}

#[pyfunction]
fn operad_compose(outer: &PyExpr, inners: Vec<PyExpr>) -> PyResult<PyExpr> {
    enumeration::operad_compose(&outer.0, &unwrap_all(&inners)).map(PyExpr).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (n, x, milgram = true))]
fn downset(n: Op, x: &PyExpr, milgram: bool) -> PyResult<Vec<PyExpr>> {
    Ok(exprs(milgram::downset(n, &x.0, milgram).map_err(err)?.elements().to_vec()))
}

#[pyfunction]
fn pi_retract(a: &PyExpr, b: &PyExpr) -> PyResult<PyExpr> {
    milgram::pi_retract(&a.0, &b.0).map(PyExpr).map_err(err)
}

#[pyfunction]
fn q_map(n: Op, cells: Vec<PyExpr>) -> PyResult<PyExpr> {
    milgram::q_map(n, &unwrap_all(&cells)).map(PyExpr).map_err(err)
}

/// Homology of the nerve of M_n(k) (`"order"`, `"milgram"`) or of the
/// normalized chains of the Smith filtration stage (`"gamma"`).
#[pyfunction]
#[pyo3(signature = (n, k, complex = "order"))]
fn homology<'py>(py: Python<'py>, n: Op, k: usize, complex: &str) -> PyResult<Bound<'py, PyDict>> {
    let c = match complex {
        "order" => order_complex(&enumeration::build_poset(n, k, false)),
        "milgram" => order_complex(&enumeration::build_poset(n, k, true)),
        "gamma" => gamma_chain_complex(n, k),
        other => return Err(PyValueError::new_err(format!("unknown complex {other:?}"))),
    };
    let h = chain_homology(&c).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("f", h.f)?;
    d.set_item("betti", h.betti)?;
    d.set_item("torsion", h.torsion)?;
    d.set_item("euler", h.euler)?;
    Ok(d)
}

#[pyfunction]
fn in_gamma(simplex_json: &str, n: Op) -> PyResult<bool> {
    Ok(gamma_member(&GammaSimplex::from_json(simplex_json).map_err(err)?, n))
}

fn config(json: &str) -> PyResult<Configuration> {
    Configuration::from_json(json).map_err(err)
}

#[pyfunction]
fn realize(a: &PyExpr, n: Op) -> PyResult<String> {
    Ok(cubes::realize(&a.0, n).map_err(err)?.to_json())
}

#[pyfunction]
fn in_g(config_json: &str, a: &PyExpr) -> PyResult<bool> {
    cubes::in_g(&config(config_json)?, &a.0).map_err(err)
}

#[pyfunction]
fn in_f(config_json: &str, a: &PyExpr) -> PyResult<bool> {
    cubes::in_f(&config(config_json)?, &a.0).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (config_json, milgram = false))]
fn decomposable(config_json: &str, milgram: bool) -> PyResult<bool> {
    let mode = if milgram { Mode::Milgram } else { Mode::Plain };
    Ok(cubes::decomposable(&config(config_json)?, mode))
}

#[pyfunction]
fn shrink(config_json: &str) -> PyResult<String> {
    Ok(cubes::shrink(&config(config_json)?).to_json())
}

#[pymodule]
#[pyo3(name = "nfold")]
fn nfold_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("NfoldError", m.py().get_type::<NfoldError>())?;
    m.add_class::<PyExpr>()?;
    m.add_function(wrap_pyfunction!(hom_exists, m)?)?;
    m.add_function(wrap_pyfunction!(witness, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate, m)?)?;
    m.add_function(wrap_pyfunction!(shape_sequence, m)?)?;
    m.add_function(wrap_pyfunction!(counts_csv, m)?)?;
    m.add_function(wrap_pyfunction!(operad_compose, m)?)?;
    m.add_function(wrap_pyfunction!(downset, m)?)?;
    m.add_function(wrap_pyfunction!(pi_retract, m)?)?;
    m.add_function(wrap_pyfunction!(q_map, m)?)?;
    m.add_function(wrap_pyfunction!(homology, m)?)?;
    m.add_function(wrap_pyfunction!(in_gamma, m)?)?;
    m.add_function(wrap_pyfunction!(realize, m)?)?;
    m.add_function(wrap_pyfunction!(in_g, m)?)?;
    m.add_function(wrap_pyfunction!(in_f, m)?)?;
    m.add_function(wrap_pyfunction!(decomposable, m)?)?;
    m.add_function(wrap_pyfunction!(shrink, m)?)?;
    Ok(())
}
