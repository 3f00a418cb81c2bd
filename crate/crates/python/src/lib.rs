//! Python bindings. Reports cross the boundary as JSON-decoded dicts.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;
use serde::Serialize;

use semigens::asymptotics::{self, BoundsConfig};
use semigens::exact;
use semigens::gensets::{self, DEFAULT_IRREDUNDANT_CEILING, DEFAULT_RANK_CEILING};
use semigens::greens::{d_classes, ordered_elements, Direction};
use semigens::montecarlo::{self, Quantity, SamplingConfig};
use semigens::semigroup::SemigroupTable;
use semigens::table1;
use semigens::{Error, Transformation};

fn to_py(e: Error) -> PyErr {
    match e {
        Error::InvalidInput(_) | Error::Parse(_) | Error::Domain(_) => PyValueError::new_err(e.to_string()),
        Error::ResourceLimit(_) | Error::Numeric(_) => PyRuntimeError::new_err(e.to_string()),
    }
}

fn to_dict<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn fraction<'py>(py: Python<'py>, value: &num_rational::BigRational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?.getattr("Fraction")?.call1((value.to_string(),))
}

fn direction(order: &str) -> PyResult<Direction> {
    order.parse().map_err(to_py)
}

/// A total map of {1..n}, acting on the right.
#[pyclass(name = "Transformation", module = "semigens", frozen, eq, ord, hash, from_py_object)]
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct PyTransformation(Transformation);

#[pymethods]
impl PyTransformation {
    /// From one-based images, e.g. `Transformation([2, 3, 1])`, or a literal `"[2,3,1]"`.
    #[new]
    fn new(images: &Bound<'_, PyAny>) -> PyResult<Self> {
        if let Ok(text) = images.extract::<String>() {
            return text.parse().map(Self).map_err(to_py);
        }
        let images: Vec<usize> = images.extract()?;
        Transformation::from_one_based(&images).map(Self).map_err(to_py)
    }

    #[staticmethod]
    fn identity(degree: usize) -> Self {
        Self(Transformation::identity(degree))
    }

    #[getter]
    fn images(&self) -> Vec<usize> {
        self.0.one_based()
    }

    #[getter]
    fn degree(&self) -> usize {
        self.0.degree()
    }

    fn rank(&self) -> usize {
        self.0.rank()
    }

    /// One-based image points, sorted.
    fn image(&self) -> Vec<usize> {
        self.0.image().into_iter().map(|x| x + 1).collect()
    }

    /// Kernel classes as one-based point lists.
    fn kernel(&self) -> Vec<Vec<usize>> {
        self.0
            .kernel()
            .into_iter()
            .map(|c| c.into_iter().map(|x| x + 1).collect())
            .collect()
    }

    fn is_idempotent(&self) -> bool {
        self.0.is_idempotent()
    }

    fn is_permutation(&self) -> bool {
        self.0.is_permutation()
    }

    fn is_group_generator(&self) -> bool {
        self.0.is_group_generator()
    }

    fn compose(&self, other: &Self) -> PyResult<Self> {
        self.0.compose(&other.0).map(Self).map_err(to_py)
    }

    fn __mul__(&self, other: &Self) -> PyResult<Self> {
        self.compose(other)
    }

    fn __pow__(&self, exponent: usize, _modulo: Option<usize>) -> Self {
        Self(self.0.pow(exponent))
    }

    /// `p⁻¹ f p`.
    fn conjugate(&self, p: &Self) -> PyResult<Self> {
        self.0.conjugate(&p.0).map(Self).map_err(to_py)
    }

    fn __call__(&self, point: usize) -> PyResult<usize> {
        if point < 1 || point > self.0.degree() {
            return Err(PyValueError::new_err(format!("point {point} out of range")));
        }
        Ok(self.0.apply(point - 1) + 1)
    }

    fn __repr__(&self) -> String {
        format!("Transformation(\"{}\")", self.0)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }
}

fn unwrap_all(list: Vec<PyTransformation>) -> Vec<Transformation> {
    list.into_iter().map(|t| t.0).collect()
}

fn wrap_all(list: &[Transformation]) -> Vec<PyTransformation> {
    list.iter().cloned().map(PyTransformation).collect()
}

/// The semigroup generated by a list of transformations.
#[pyclass(name = "Semigroup", module = "semigens", frozen)]
struct PySemigroup(SemigroupTable);

#[pymethods]
impl PySemigroup {
    #[new]
    #[pyo3(signature = (generators, max_elements = semigens::semigroup::DEFAULT_MAX_ELEMENTS))]
    fn new(generators: Vec<PyTransformation>, max_elements: usize) -> PyResult<Self> {
        SemigroupTable::closure_with_limit(&unwrap_all(generators), max_elements)
            .map(Self)
            .map_err(to_py)
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn __contains__(&self, f: &PyTransformation) -> bool {
        self.0.contains(&f.0)
    }

    #[getter]
    fn generators(&self) -> Vec<PyTransformation> {
        wrap_all(self.0.generators())
    }

    /// Elements in discovery order.
    #[getter]
    fn elements(&self) -> Vec<PyTransformation> {
        wrap_all(self.0.elements())
    }

    /// Generator indices whose product is the element.
    fn word(&self, f: &PyTransformation) -> PyResult<Vec<usize>> {
        let i = self
            .0
            .index_of(&f.0)
            .ok_or_else(|| PyValueError::new_err(format!("{} is not an element", f.0)))?;
        Ok(self.0.word(i))
    }

    /// `x ≤ y` in the two-sided ideal preorder.
    fn is_below(&self, x: &PyTransformation, y: &PyTransformation) -> PyResult<bool> {
        self.0.principal_ideal_membership(&x.0, &y.0).map_err(to_py)
    }

    fn d_classes(&self) -> Vec<Vec<PyTransformation>> {
        let d = d_classes(&self.0);
        d.classes()
            .iter()
            .map(|c| c.iter().map(|&i| PyTransformation(self.0.elements()[i].clone())).collect())
            .collect()
    }

    #[pyo3(signature = (order = "desc"))]
    fn ordered_elements(&self, order: &str) -> PyResult<Vec<PyTransformation>> {
        let d = d_classes(&self.0);
        Ok(wrap_all(&ordered_elements(&self.0, &d, direction(order)?)))
    }

    #[pyo3(signature = (order = "desc"))]
    fn small_generating_set<'py>(&self, py: Python<'py>, order: &str) -> PyResult<Bound<'py, PyAny>> {
        let report = gensets::small_generating_set(&self.0, direction(order)?).map_err(to_py)?;
        to_dict(py, &report)
    }

    #[pyo3(signature = (ceiling = DEFAULT_RANK_CEILING))]
    fn rank(&self, ceiling: usize) -> PyResult<usize> {
        gensets::semigroup_rank(&self.0, ceiling).map_err(to_py)
    }

    #[pyo3(signature = (ceiling = DEFAULT_IRREDUNDANT_CEILING))]
    fn irredundant_generating_sets(&self, ceiling: usize) -> PyResult<Vec<Vec<PyTransformation>>> {
        let sets = gensets::enumerate_irredundant_generating_sets(&self.0, ceiling).map_err(to_py)?;
        Ok(sets.iter().map(|s| wrap_all(s)).collect())
    }

    #[pyo3(signature = (ceiling = DEFAULT_IRREDUNDANT_CEILING))]
    fn is_ubiquitous(&self, ceiling: usize) -> PyResult<bool> {
        gensets::is_ubiquitous(&self.0, ceiling).map_err(to_py)
    }

    fn __repr__(&self) -> String {
        format!("<Semigroup of degree {} with {} elements>", self.0.degree(), self.0.len())
    }
}

/// Greedy scan over a full element list in the given order.
#[pyfunction]
fn greedy<'py>(py: Python<'py>, elements: Vec<PyTransformation>) -> PyResult<Bound<'py, PyAny>> {
    let report = gensets::greedy(&unwrap_all(elements)).map_err(to_py)?;
    to_dict(py, &report)
}

#[pyfunction]
fn is_irredundant(generators: Vec<PyTransformation>) -> PyResult<bool> {
    gensets::is_irredundant(&unwrap_all(generators)).map_err(to_py)
}

#[pyfunction]
fn satisfies_sufficient_condition(generators: Vec<PyTransformation>) -> PyResult<bool> {
    gensets::satisfies_sufficient_condition(&unwrap_all(generators)).map_err(to_py)
}

/// Exact `G`, `T`, `V`, or the lower bound `P` (which uses `k`), as a Fraction.
#[pyfunction]
#[pyo3(signature = (quantity, n, k = 2))]
fn exact_probability<'py>(py: Python<'py>, quantity: &str, n: usize, k: usize) -> PyResult<Bound<'py, PyAny>> {
    let value = match quantity.to_ascii_uppercase().as_str() {
        "G" => exact::exact_g(n),
        "T" => exact::exact_t(n),
        "V" => exact::exact_v(n),
        "P" => exact::bound_p(n, k),
        other => return Err(PyValueError::new_err(format!("unknown quantity {other:?}"))),
    }
    .map_err(to_py)?;
    fraction(py, &value)
}

/// Monte Carlo estimate of `G`, `T`, `V` or `SUFF` (which uses `k`).
#[pyfunction]
#[pyo3(signature = (quantity, n, samples, seed = 1, k = 2, workers = 1))]
fn estimate<'py>(
    py: Python<'py>,
    quantity: &str,
    n: usize,
    samples: u64,
    seed: u64,
    k: usize,
    workers: usize,
) -> PyResult<Bound<'py, PyAny>> {
    let quantity: Quantity = quantity.parse().map_err(to_py)?;
    let config = SamplingConfig::new(samples, seed).workers(workers);
    let e = py
        .detach(|| match quantity {
            Quantity::Suff => montecarlo::estimate_sufficient(n, k, &config),
            q => montecarlo::estimate(q, n, &config),
        })
        .map_err(to_py)?;
    to_dict(py, &e)
}

#[pyfunction]
fn lambert_w(x: f64) -> PyResult<f64> {
    asymptotics::lambert_w(x).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (single_resolution = 100_000, square_resolution = 500, simplex_resolution = 100))]
fn bounds<'py>(
    py: Python<'py>,
    single_resolution: usize,
    square_resolution: usize,
    simplex_resolution: usize,
) -> PyResult<Bound<'py, PyAny>> {
    let config = BoundsConfig {
        single_resolution,
        square_resolution,
        simplex_resolution,
    };
    let report = py.detach(|| asymptotics::bounds_report(config)).map_err(to_py)?;
    to_dict(py, &report)
}

/// Conjugacy-class representatives of the subsemigroups of `T_3`.
#[pyfunction]
fn subsemigroups_t3() -> Vec<Vec<PyTransformation>> {
    table1::enumerate_subsemigroups_t3()
        .iter()
        .map(|c| wrap_all(&c.representative))
        .collect()
}

#[pyfunction]
#[pyo3(name = "table1", signature = (order = "desc", workers = 1))]
fn table1_py<'py>(py: Python<'py>, order: &str, workers: usize) -> PyResult<Bound<'py, PyAny>> {
    let direction = direction(order)?;
    let t = py.detach(|| table1::table1(direction, workers)).map_err(to_py)?;
    let out = to_dict(py, &t)?;
    let dict = out.cast::<PyDict>()?;
    dict.set_item("rank_distribution", t.rank_distribution())?;
    dict.set_item("diff_against_published", to_dict(py, &t.diff_against_published())?)?;
    Ok(out)
}

#[pymodule]
#[pyo3(name = "semigens")]
fn semigens_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyTransformation>()?;
    m.add_class::<PySemigroup>()?;
    m.add_function(wrap_pyfunction!(greedy, m)?)?;
    m.add_function(wrap_pyfunction!(is_irredundant, m)?)?;
    m.add_function(wrap_pyfunction!(satisfies_sufficient_condition, m)?)?;
    m.add_function(wrap_pyfunction!(exact_probability, m)?)?;
    m.add_function(wrap_pyfunction!(estimate, m)?)?;
    m.add_function(wrap_pyfunction!(lambert_w, m)?)?;
    m.add_function(wrap_pyfunction!(bounds, m)?)?;
    m.add_function(wrap_pyfunction!(subsemigroups_t3, m)?)?;
    m.add_function(wrap_pyfunction!(table1_py, m)?)?;
    Ok(())
}
