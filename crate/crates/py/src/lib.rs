use std::str::FromStr;

use agcolor::bounds::bounds_row;
use agcolor::colorings::construct as build;
use agcolor::oracle::{exact_index, Budget, Index as OracleIndex, IntersectionGraph};
use agcolor::verify::{count_meeting_lines, verify_coloring as run_checks, Check};
use agcolor::{AffineSpace, Coloring as CoreColoring, Field as CoreField, FieldElement, Method};
use pyo3::exceptions::{PyValueError, PyZeroDivisionError};
use pyo3::prelude::*;

fn value_err(e: impl ToString) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// GF(q) with elements given by their integer index.
#[pyclass(name = "Field", module = "agcolor", frozen)]
struct Field {
    inner: CoreField,
}

impl Field {
    fn el(&self, i: u32) -> PyResult<FieldElement> {
        self.inner.element(i).map_err(value_err)
    }
}

#[pymethods]
impl Field {
    #[new]
    fn new(q: u64) -> PyResult<Self> {
        Ok(Field {
            inner: CoreField::of_order(q).map_err(value_err)?,
        })
    }

    #[getter]
    fn order(&self) -> u32 {
        self.inner.order()
    }

    #[getter]
    fn characteristic(&self) -> u32 {
        self.inner.characteristic()
    }

    #[getter]
    fn degree(&self) -> u32 {
        self.inner.degree()
    }

    #[getter]
    fn modulus(&self) -> Vec<u32> {
        self.inner.modulus().to_vec()
    }

    fn add(&self, a: u32, b: u32) -> PyResult<u32> {
        Ok(self.inner.add(self.el(a)?, self.el(b)?).index())
    }

    fn sub(&self, a: u32, b: u32) -> PyResult<u32> {
        Ok(self.inner.sub(self.el(a)?, self.el(b)?).index())
    }

    fn mul(&self, a: u32, b: u32) -> PyResult<u32> {
        Ok(self.inner.mul(self.el(a)?, self.el(b)?).index())
    }

    fn inv(&self, a: u32) -> PyResult<u32> {
        let a = self.el(a)?;
        self.inner
            .inv(a)
            .map(FieldElement::index)
            .map_err(|e| PyZeroDivisionError::new_err(e.to_string()))
    }

    fn pow(&self, a: u32, e: u64) -> PyResult<u32> {
        Ok(self.inner.pow(self.el(a)?, e).index())
    }

    fn primitive_element(&self) -> u32 {
        self.inner.primitive_element().index()
    }

    fn __repr__(&self) -> String {
        format!("Field({})", self.inner.order())
    }
}

/// A line coloring of AG(n, q) together with its space.
#[pyclass(name = "Coloring", module = "agcolor", frozen)]
struct Coloring {
    space: AffineSpace,
    inner: CoreColoring,
}

#[pymethods]
impl Coloring {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let (inner, space) = CoreColoring::from_json_str(text).map_err(value_err)?;
        Ok(Coloring { space, inner })
    }

    #[getter]
    fn construction(&self) -> String {
        self.inner.construction().to_owned()
    }

    #[getter]
    fn class_count(&self) -> usize {
        self.inner.class_count()
    }

    /// Line ids of each class, in class order.
    fn classes(&self) -> Vec<(String, Vec<String>)> {
        self.inner
            .classes
            .iter()
            .map(|c| {
                (
                    c.id.clone(),
                    c.lines.iter().map(|&l| self.space.line_id(l)).collect(),
                )
            })
            .collect()
    }

    fn class_sizes(&self) -> Vec<(usize, usize)> {
        self.inner.size_census().into_iter().collect()
    }

    fn to_json(&self) -> String {
        self.inner.to_json_string(&self.space)
    }

    /// Runs the named checks ("proper", "complete") and returns the report
    /// as a JSON string.
    #[pyo3(signature = (checks = vec!["proper".to_owned(), "complete".to_owned()]))]
    fn verify(&self, checks: Vec<String>) -> PyResult<String> {
        let checks = checks
            .iter()
            .map(|c| Check::from_str(c))
            .collect::<Result<Vec<_>, _>>()
            .map_err(value_err)?;
        Ok(run_checks(&self.space, &self.inner, &checks).to_json_string())
    }

    /// Number of lines outside the given lines that meet one of them.
    fn count_meeting_lines(&self, line_ids: Vec<String>) -> PyResult<usize> {
        meeting(&self.space, &line_ids)
    }

    fn __repr__(&self) -> String {
        format!(
            "Coloring({}, {} classes)",
            self.inner.construction(),
            self.inner.class_count()
        )
    }
}

fn meeting(space: &AffineSpace, line_ids: &[String]) -> PyResult<usize> {
    let lines = line_ids
        .iter()
        .map(|id| space.parse_line_id(id))
        .collect::<Result<Vec<_>, _>>()
        .map_err(value_err)?;
    count_meeting_lines(space, &lines, false).map_err(value_err)
}

fn space(n: usize, q: u64) -> PyResult<AffineSpace> {
    AffineSpace::new(n, &CoreField::of_order(q).map_err(value_err)?).map_err(value_err)
}

#[pyfunction]
fn construct(method: &str, n: usize, q: u64) -> PyResult<Coloring> {
    let method = Method::from_str(method).map_err(value_err)?;
    let field = CoreField::of_order(q).map_err(value_err)?;
    let (space, inner) = build(method, n, &field).map_err(value_err)?;
    Ok(Coloring { space, inner })
}

/// The bounds table row for (n, q) as a JSON string.
#[pyfunction]
fn bounds(n: u32, q: u64) -> PyResult<String> {
    let row = bounds_row(n, q).map_err(value_err)?;
    serde_json::to_string(&row).map_err(value_err)
}

/// Number of lines of AG(n, q) outside `line_ids` meeting one of them.
#[pyfunction]
fn meeting_lines(n: usize, q: u64, line_ids: Vec<String>) -> PyResult<usize> {
    meeting(&space(n, q)?, &line_ids)
}

/// Exact χ′, α′ or ψ′ of AG(n, q). Returns (lower, upper, exact).
#[pyfunction]
#[pyo3(signature = (n, q, index, max_nodes = None))]
fn oracle(
    py: Python<'_>,
    n: usize,
    q: u64,
    index: &str,
    max_nodes: Option<u64>,
) -> PyResult<(usize, usize, bool)> {
    let index = OracleIndex::from_str(index).map_err(value_err)?;
    let s = space(n, q)?;
    let g = IntersectionGraph::from_point_sets(&s.line_point_sets()).map_err(value_err)?;
    let budget = max_nodes.map_or_else(Budget::unlimited, Budget::nodes);
    let r = py.detach(|| exact_index(&g, index, budget));
    Ok((r.lower, r.upper, r.exact))
}

#[pymodule(name = "agcolor")]
fn agcolor_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Field>()?;
    m.add_class::<Coloring>()?;
    m.add_function(wrap_pyfunction!(construct, m)?)?;
    m.add_function(wrap_pyfunction!(bounds, m)?)?;
    m.add_function(wrap_pyfunction!(meeting_lines, m)?)?;
    m.add_function(wrap_pyfunction!(oracle, m)?)?;
    m.add(
        "METHODS",
        Method::ALL.iter().map(|m| m.name()).collect::<Vec<_>>(),
    )?;
    Ok(())
}
