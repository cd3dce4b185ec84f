//! Python bindings: graphs, path counts, the extremal pipeline, structure
//! queries and both algebras over the rationals.

use num_bigint::BigUint;
use num_rational::BigRational;
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use quiverkit_core::adjacency::{adjacency_matrix, count_paths_matrix, is_nilpotent};
use quiverkit_core::extremal::{maximize_with_trace, maximizer_graph, optimal_bound as bound};
use quiverkit_core::leavitt::{pullback_check as pullback, LeavittAlgebra};
use quiverkit_core::path_algebra::{self, PathAlgebra};
use quiverkit_core::structure::{self, VertexSubset};
use quiverkit_core::{EdgeId, VertexId};

type Q = BigRational;

create_exception!(quiverkit, QuiverkitError, PyValueError);

fn err(e: quiverkit_core::Error) -> PyErr {
    QuiverkitError::new_err(e.to_string())
}

/// A finite directed multigraph with named vertices and edges.
#[pyclass(frozen, skip_from_py_object, module = "quiverkit")]
#[derive(Clone)]
pub struct Graph {
    inner: quiverkit_core::Graph,
}

#[pymethods]
impl Graph {
    #[new]
    #[pyo3(signature = (vertices, edges, bundles = Vec::new()))]
    fn new(vertices: Vec<String>, edges: Vec<(String, String, String)>, bundles: Vec<(String, String)>) -> PyResult<Self> {
        let inner = quiverkit_core::Graph::from_parts(
            vertices.into_iter().map(VertexId::from).collect(),
            edges.into_iter().map(|(e, s, t)| (EdgeId::from(e), VertexId::from(s), VertexId::from(t))).collect(),
            bundles.into_iter().map(|(s, t)| (VertexId::from(s), VertexId::from(t))).collect(),
        )
        .map_err(err)?;
        Ok(Graph { inner })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Graph { inner: quiverkit_core::Graph::from_json(text).map_err(err)? })
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    fn to_dot(&self) -> String {
        self.inner.to_dot()
    }

    #[getter]
    fn vertices(&self) -> Vec<String> {
        self.inner.vertices().iter().map(ToString::to_string).collect()
    }

    #[getter]
    fn edges(&self) -> Vec<(String, String, String)> {
        self.inner.edges().map(|(e, s, t)| (e.to_string(), s.to_string(), t.to_string())).collect()
    }

    fn has_loop(&self) -> bool {
        self.inner.has_loop()
    }

    /// Number of paths of length `k`; `engine` is "matrix" or "dfs".
    #[pyo3(signature = (k, engine = "matrix"))]
    fn count_paths(&self, k: usize, engine: &str) -> PyResult<BigUint> {
        match engine {
            "matrix" => count_paths_matrix(&self.inner, k).map_err(err),
            "dfs" => self.inner.count_paths_bruteforce(k).map_err(err),
            other => Err(PyValueError::new_err(format!("unknown engine `{other}`"))),
        }
    }

    /// Paths of length `k` as lists of edge ids.
    fn paths(&self, k: usize) -> PyResult<Vec<Vec<String>>> {
        let paths = self.inner.enumerate_paths(k).map_err(err)?;
        Ok(paths.iter().map(|p| p.edges.iter().map(ToString::to_string).collect()).collect())
    }

    fn adjacency(&self) -> PyResult<Vec<Vec<BigUint>>> {
        Ok(adjacency_matrix(&self.inner).map_err(err)?.rows().to_vec())
    }

    fn nilpotency_index(&self) -> PyResult<Option<usize>> {
        Ok(is_nilpotent(&adjacency_matrix(&self.inner).map_err(err)?))
    }

    fn __repr__(&self) -> String {
        format!("Graph({} vertices, {} edges)", self.inner.vertex_count(), self.inner.edge_count())
    }

    fn __eq__(&self, other: &Graph) -> bool {
        self.inner == other.inner
    }
}

fn names(sets: Vec<VertexSubset>) -> Vec<Vec<String>> {
    sets.iter().map(VertexSubset::names).collect()
}

#[pyfunction]
fn optimal_bound(n_edges: usize, k: usize) -> PyResult<BigUint> {
    bound(n_edges, k).map_err(err)
}

#[pyfunction]
fn maximizer(n_edges: usize, k: usize) -> PyResult<Graph> {
    Ok(Graph { inner: maximizer_graph(n_edges, k).map_err(err)? })
}

/// Runs the reshaping pipeline; returns `(counts, certificate_holds, final_graph)`.
#[pyfunction]
fn maximize(graph: &Graph, k: usize) -> PyResult<(Vec<BigUint>, bool, Graph)> {
    let trace = maximize_with_trace(&graph.inner, k).map_err(err)?;
    let counts = trace.steps.iter().map(|s| s.count.clone()).collect();
    let last = trace.final_graph().cloned().unwrap_or_else(|| graph.inner.clone());
    Ok((counts, trace.certify().holds(), Graph { inner: last }))
}

#[pyfunction]
fn hereditary_subsets(graph: &Graph) -> PyResult<Vec<Vec<String>>> {
    Ok(names(structure::hereditary_subsets(&graph.inner).map_err(err)?))
}

#[pyfunction]
fn saturated_subsets(graph: &Graph) -> PyResult<Vec<Vec<String>>> {
    Ok(names(structure::saturated_subsets(&graph.inner).map_err(err)?))
}

#[pyfunction]
fn admissible_subgraphs(graph: &Graph) -> PyResult<Vec<Graph>> {
    let subs = structure::admissible_subgraphs(&graph.inner).map_err(err)?;
    Ok(subs.into_iter().map(|(_, inner)| Graph { inner }).collect())
}

#[pyfunction]
fn is_admissible_intersection(f: &Graph, g: &Graph) -> PyResult<bool> {
    structure::is_admissible_intersection(&f.inner, &g.inner).map_err(err)
}

#[pyfunction]
fn is_admissible_union(f: &Graph, g: &Graph) -> PyResult<bool> {
    structure::is_admissible_union(&f.inner, &g.inner).map_err(err)
}

/// Path algebra dimension as a decimal string, or "infinite".
#[pyfunction]
fn path_algebra_dim(graph: &Graph) -> String {
    path_algebra::dimension(&graph.inner).to_string()
}

/// Product of two paths given as edge-id lists; a one-element list naming a
/// vertex stands for that vertex.
#[pyfunction]
fn path_multiply(graph: &Graph, left: Vec<String>, right: Vec<String>) -> PyResult<String> {
    let alg = PathAlgebra::<Q>::new(graph.inner.clone()).map_err(err)?;
    let element = |tokens: &[String]| match tokens {
        [v] if graph.inner.has_vertex(v) => alg.vertex(v),
        _ => alg.path(tokens),
    };
    let (x, y) = (element(&left).map_err(err)?, element(&right).map_err(err)?);
    Ok(alg.multiply(&x, &y).map_err(err)?.to_string())
}

#[pyfunction]
fn leavitt_reduce(graph: &Graph, word: &str) -> PyResult<String> {
    let alg = LeavittAlgebra::<Q>::new(graph.inner.clone()).map_err(err)?;
    Ok(alg.reduce(word).map_err(err)?.to_string())
}

#[pyfunction]
fn leavitt_dim(graph: &Graph) -> PyResult<String> {
    let alg = LeavittAlgebra::<Q>::new(graph.inner.clone()).map_err(err)?;
    Ok(alg.dimension_if_finite().to_string())
}

/// Pullback report as JSON text.
#[pyfunction]
#[pyo3(signature = (f, g, filtration = quiverkit_core::leavitt::DEFAULT_FILTRATION_DEGREE))]
fn pullback_check(f: &Graph, g: &Graph, filtration: usize) -> PyResult<String> {
    let report = pullback::<Q>(&f.inner, &g.inner, filtration).map_err(err)?;
    Ok(serde_json::to_string(&report).expect("report json"))
}

#[pymodule]
fn quiverkit(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("QuiverkitError", m.py().get_type::<QuiverkitError>())?;
    m.add_class::<Graph>()?;
    m.add_function(wrap_pyfunction!(optimal_bound, m)?)?;
    m.add_function(wrap_pyfunction!(maximizer, m)?)?;
    m.add_function(wrap_pyfunction!(maximize, m)?)?;
    m.add_function(wrap_pyfunction!(hereditary_subsets, m)?)?;
    m.add_function(wrap_pyfunction!(saturated_subsets, m)?)?;
    m.add_function(wrap_pyfunction!(admissible_subgraphs, m)?)?;
    m.add_function(wrap_pyfunction!(is_admissible_intersection, m)?)?;
    m.add_function(wrap_pyfunction!(is_admissible_union, m)?)?;
    m.add_function(wrap_pyfunction!(path_algebra_dim, m)?)?;
    m.add_function(wrap_pyfunction!(path_multiply, m)?)?;
    m.add_function(wrap_pyfunction!(leavitt_reduce, m)?)?;
    m.add_function(wrap_pyfunction!(leavitt_dim, m)?)?;
    m.add_function(wrap_pyfunction!(pullback_check, m)?)?;
    Ok(())
}
