//! Python bindings: forms, tables, character sums, circuits, the search
//! experiments and G72 programs.

use std::collections::BTreeMap;

use charsum::search::{self, Generators};
use pyo3::exceptions::{PyMemoryError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;

fn to_py(e: charsum::Error) -> PyErr {
    use charsum::Error as E;
    match e {
        E::Capacity(_) => PyMemoryError::new_err(e.to_string()),
        E::Internal(_) | E::Verification(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

/// A quadratic form over Z2 on `n` variables.
#[pyclass(name = "QuadraticForm", frozen, eq, hash, skip_from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct PyForm(charsum::QuadraticForm);

#[pymethods]
impl PyForm {
    #[new]
    fn new(text: &str, n: usize) -> PyResult<Self> {
        charsum::QuadraticForm::parse(text, n)
            .map(Self)
            .map_err(to_py)
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    fn rank(&self) -> usize {
        charsum::witt_rank(&self.0)
    }

    fn normal_form(&self) -> Self {
        Self(charsum::witt_normal_form(&self.0))
    }

    /// `(pairs, residual)` with each pair a tuple of linear-form strings.
    fn decompose(&self) -> (Vec<(String, String)>, String) {
        let d = charsum::witt_decompose(&self.0);
        let pairs = d
            .pairs
            .iter()
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .collect();
        (pairs, d.residual.to_string())
    }

    fn evaluate(&self, x: Vec<bool>) -> PyResult<bool> {
        self.0.eval(&x).map_err(to_py)
    }

    fn support(&self) -> u64 {
        self.0.support()
    }

    /// Table of the character `2^q`.
    fn character(&self) -> PyTable {
        PyTable(charsum::character_table(&self.0))
    }

    fn __add__(&self, other: &Self) -> PyResult<Self> {
        self.0.add(&other.0).map(Self).map_err(to_py)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("QuadraticForm('{}', n={})", self.0, self.0.n())
    }
}

/// A function `{0,1}^n -> Z3` as its value table.
#[pyclass(name = "FunctionTable", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq, Eq)]
struct PyTable(charsum::FunctionTable);

#[pymethods]
impl PyTable {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        charsum::FunctionTable::parse(text).map(Self).map_err(to_py)
    }

    #[staticmethod]
    fn and_n(n: usize) -> PyResult<Self> {
        charsum::and_table(n).map(Self).map_err(to_py)
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    fn values(&self) -> Vec<u8> {
        self.0.values()
    }

    fn support(&self) -> u64 {
        self.0.support()
    }

    fn ones_twos(&self) -> (u64, u64) {
        self.0.ones_twos()
    }

    /// Degree of the multilinear polynomial over Z3 with this table.
    fn degree(&self) -> usize {
        charsum::poly_degree(&charsum::interpolate(&self.0))
    }

    fn __add__(&self, other: &Self) -> PyResult<Self> {
        self.0.add(&other.0).map(Self).map_err(to_py)
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn __getitem__(&self, x: usize) -> PyResult<u8> {
        if x >= self.0.len() {
            return Err(PyValueError::new_err(format!("index {x} out of range")));
        }
        Ok(self.0.get(x))
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("FunctionTable('{}')", self.0)
    }
}

/// A multiset of quadratic characters summed over Z3.
#[pyclass(name = "CharacterSum", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq, Eq)]
struct PySum(charsum::CharacterSum);

#[pymethods]
impl PySum {
    #[new]
    fn new(text: &str, n: usize) -> PyResult<Self> {
        charsum::CharacterSum::parse(text, n)
            .map(Self)
            .map_err(to_py)
    }

    #[staticmethod]
    fn and_construction(n: usize) -> PyResult<Self> {
        charsum::and_product_construction(n)
            .map(Self)
            .map_err(to_py)
    }

    #[staticmethod]
    fn expand(q: &PyForm) -> Self {
        Self(charsum::expand_character(&q.0))
    }

    #[staticmethod]
    fn expand_full_rank(q: &PyForm) -> PyResult<Self> {
        charsum::expand_to_full_rank(&q.0).map(Self).map_err(to_py)
    }

    #[getter]
    fn weight(&self) -> usize {
        self.0.weight()
    }

    fn terms(&self) -> Vec<PyForm> {
        self.0.terms().iter().copied().map(PyForm).collect()
    }

    fn table(&self) -> PyTable {
        PyTable(charsum::sum_table(&self.0))
    }

    fn shift(&self, r: &PyForm) -> PyResult<Self> {
        charsum::shift_sum(&self.0, &r.0).map(Self).map_err(to_py)
    }

    /// Depth-2 (linear terms only) or depth-3 circuit accepting where the sum is 0.
    #[pyo3(signature = (depth = 3))]
    fn to_circuit(&self, depth: u8) -> PyResult<PyCircuit> {
        match depth {
            2 => charsum::characters_to_depth2(&self.0),
            3 => charsum::characters_to_depth3(&self.0),
            d => return Err(PyValueError::new_err(format!("depth {d} is not 2 or 3"))),
        }
        .map(PyCircuit)
        .map_err(to_py)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("CharacterSum('{}', n={})", self.0, self.0.n())
    }
}

#[pyclass(name = "Circuit", frozen)]
struct PyCircuit(charsum::Circuit);

#[pymethods]
impl PyCircuit {
    #[staticmethod]
    fn parse(netlist: &str) -> PyResult<Self> {
        charsum::Circuit::parse_netlist(netlist)
            .map(Self)
            .map_err(to_py)
    }

    fn evaluate(&self, x: Vec<bool>) -> PyResult<bool> {
        self.0.evaluate(&x).map_err(to_py)
    }

    fn depth(&self) -> usize {
        self.0.depth()
    }

    fn gate_count(&self) -> usize {
        self.0.gates().len()
    }

    #[pyo3(signature = (depth = 3))]
    fn to_characters(&self, depth: u8) -> PyResult<PySum> {
        match depth {
            2 => charsum::depth2_to_characters(&self.0),
            3 => charsum::depth3_to_characters(&self.0),
            d => return Err(PyValueError::new_err(format!("depth {d} is not 2 or 3"))),
        }
        .map(PySum)
        .map_err(to_py)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }
}

/// Minimum weight of `target` by exact search (n <= 4): `(weight, witness)`.
#[pyfunction]
#[pyo3(signature = (target, linear = false))]
fn bfs_min_weight(py: Python<'_>, target: &PyTable, linear: bool) -> PyResult<(usize, PySum)> {
    let generators = if linear {
        Generators::Linear
    } else {
        Generators::Quadratic
    };
    let t = target.0.clone();
    let w = py
        .detach(move || search::bfs_min_weight(&t, generators))
        .map_err(to_py)?;
    Ok((w.weight, PySum(w.sum)))
}

/// Support histogram `{support: count}` of random sums of `w` characters.
#[pyfunction]
#[pyo3(signature = (n, w, samples, seed = 0))]
fn sample_histogram(
    py: Python<'_>,
    n: usize,
    w: usize,
    samples: u64,
    seed: u64,
) -> PyResult<BTreeMap<u64, u64>> {
    py.detach(move || search::sample_histogram(n, w, samples, seed))
        .map(|h| h.bins)
        .map_err(to_py)
}

/// Exact weighted support distribution of all weight-3 sums at n = 6.
#[pyfunction]
fn enumerate_weight3(py: Python<'_>) -> PyResult<BTreeMap<u64, u64>> {
    py.detach(|| search::enumerate_weight3(6))
        .map(|e| e.histogram.bins)
        .map_err(to_py)
}

/// Index pairs `(i, j)`, `i <= j`, of tables in `pool` summing to AND_n.
#[pyfunction]
fn scan_pairs(pool: Vec<PyRef<'_, PyTable>>) -> PyResult<Vec<(usize, usize)>> {
    let tables: Vec<charsum::FunctionTable> = pool.iter().map(|t| t.0.clone()).collect();
    search::scan_complementary_pairs(&tables).map_err(to_py)
}

/// Whether each of the twelve G72 relations holds, keyed by relation.
#[pyfunction]
fn g72_relations() -> Vec<(String, bool)> {
    charsum::check_g72_relations()
        .into_iter()
        .map(|(r, ok)| (r.to_string(), ok))
        .collect()
}

/// Order of the group generated by `g72` or `s3`'s generators.
#[pyfunction]
fn group_order(group: &str) -> PyResult<usize> {
    let g: charsum::Group = group.parse().map_err(to_py)?;
    charsum::closure(&g.generators())
        .map(|c| c.len())
        .map_err(to_py)
}

/// Runs a program file's text on input bits: `(element, accepted)`.
#[pyfunction]
fn eval_program(program: &str, input: Vec<bool>) -> PyResult<(String, bool)> {
    let p = charsum::Program::parse(program).map_err(to_py)?;
    let (g, accepted) = charsum::eval_program(&p, &input).map_err(to_py)?;
    Ok((g.to_string(), accepted))
}

#[pymodule]
fn pycharsum(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyForm>()?;
    m.add_class::<PyTable>()?;
    m.add_class::<PySum>()?;
    m.add_class::<PyCircuit>()?;
    m.add_function(wrap_pyfunction!(bfs_min_weight, m)?)?;
    m.add_function(wrap_pyfunction!(sample_histogram, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_weight3, m)?)?;
    m.add_function(wrap_pyfunction!(scan_pairs, m)?)?;
    m.add_function(wrap_pyfunction!(g72_relations, m)?)?;
    m.add_function(wrap_pyfunction!(group_order, m)?)?;
    m.add_function(wrap_pyfunction!(eval_program, m)?)?;
    Ok(())
}
