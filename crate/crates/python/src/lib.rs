use std::collections::HashMap;
use std::path::PathBuf;

use pyo3::exceptions::{PyArithmeticError, PyOSError, PyValueError};
use pyo3::prelude::*;

use attrclust::config::Settings;
use attrclust::generators::{self, NoiseSpec, SbmSpec};
use attrclust::{io, metrics, pipeline, Error, Partition};

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Io { .. } => PyOSError::new_err(e.to_string()),
        _ if e.exit_code() == 3 => PyArithmeticError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn settings(overrides: Option<HashMap<String, String>>) -> PyResult<Settings> {
    let mut s = Settings::default();
    for (k, v) in overrides.unwrap_or_default() {
        s.set(&k, &v).map_err(to_py)?;
    }
    Ok(s)
}

fn partition(labels: &[usize]) -> Partition {
    Partition::from_labels(labels)
}

/// Undirected weighted graph.
#[pyclass(name = "Graph", module = "pyattrclust")]
struct PyGraph {
    inner: attrclust::Graph,
}

#[pymethods]
impl PyGraph {
    /// `edges` holds `(i, j)` or `(i, j, weight)` tuples; each pair once.
    #[new]
    fn new(n: usize, edges: Vec<Vec<f64>>) -> PyResult<Self> {
        let mut list = Vec::with_capacity(edges.len());
        for e in &edges {
            let id = |x: f64| {
                if x >= 0.0 && x.fract() == 0.0 {
                    Ok(x as usize)
                } else {
                    Err(PyValueError::new_err(format!("bad vertex id {x}")))
                }
            };
            match e.as_slice() {
                [i, j] => list.push((id(*i)?, id(*j)?, None)),
                [i, j, w] => list.push((id(*i)?, id(*j)?, Some(*w))),
                _ => return Err(PyValueError::new_err("edges must be (i, j) or (i, j, w)")),
            }
        }
        let inner = attrclust::Graph::from_edges(n, &list).map_err(to_py)?;
        Ok(Self { inner })
    }

    #[staticmethod]
    fn read(path: PathBuf) -> PyResult<Self> {
        let inner = io::read_edge_list(&path).and_then(|e| e.to_graph()).map_err(to_py)?;
        Ok(Self { inner })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn ne(&self) -> usize {
        self.inner.ne()
    }

    fn neighbors(&self, i: usize) -> PyResult<Vec<usize>> {
        if i >= self.inner.n() {
            return Err(PyValueError::new_err(format!("vertex {i} out of range")));
        }
        Ok(self.inner.neighbors(i).to_vec())
    }

    fn edges(&self) -> Vec<(usize, usize, f64)> {
        self.inner.edges().collect()
    }

    fn average_weighted_degree(&self) -> f64 {
        self.inner.average_weighted_degree()
    }

    /// `(subgraph, original ids, discarded count)`.
    fn largest_component(&self) -> (PyGraph, Vec<usize>, usize) {
        let (g, keep, discarded) = pipeline::largest_component(&self.inner);
        (PyGraph { inner: g }, keep, discarded)
    }

    fn __repr__(&self) -> String {
        format!("Graph(n={}, ne={})", self.inner.n(), self.inner.ne())
    }
}

/// Categorical vertex attributes; `None` cells are missing.
#[pyclass(name = "AttributeTable", module = "pyattrclust")]
struct PyAttributeTable {
    inner: attrclust::AttributeTable,
}

#[pymethods]
impl PyAttributeTable {
    #[new]
    fn new(names: Vec<String>, rows: Vec<Vec<Option<String>>>) -> PyResult<Self> {
        let inner = attrclust::AttributeTable::new(names, rows).map_err(to_py)?;
        Ok(Self { inner })
    }

    #[staticmethod]
    fn read(path: PathBuf) -> PyResult<Self> {
        Ok(Self {
            inner: io::read_attributes(&path).map_err(to_py)?,
        })
    }

    #[getter]
    fn names(&self) -> Vec<String> {
        self.inner.names().to_vec()
    }

    #[getter]
    fn n_rows(&self) -> usize {
        self.inner.n_rows()
    }

    #[getter]
    fn n_attributes(&self) -> usize {
        self.inner.n_attributes()
    }
}

#[pyclass(name = "AugmentedGraph", module = "pyattrclust")]
struct PyAugmentedGraph {
    inner: attrclust::AugmentedGraph,
}

#[pymethods]
impl PyAugmentedGraph {
    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn m(&self) -> usize {
        self.inner.m()
    }

    #[getter]
    fn n_new(&self) -> usize {
        self.inner.n_new()
    }

    #[getter]
    fn ne_new(&self) -> usize {
        self.inner.ne_new()
    }

    #[getter]
    fn graph(&self) -> PyGraph {
        PyGraph {
            inner: self.inner.graph.clone(),
        }
    }

    fn attribute_neighbors(&self, i: usize) -> PyResult<Vec<usize>> {
        if i >= self.inner.n() {
            return Err(PyValueError::new_err(format!("vertex {i} out of range")));
        }
        Ok(self.inner.attribute_neighbors(i).to_vec())
    }
}

#[pyclass(name = "Embedding", module = "pyattrclust")]
struct PyEmbedding {
    inner: pipeline::Embedding,
}

#[pymethods]
impl PyEmbedding {
    #[getter]
    fn m_components(&self) -> usize {
        self.inner.m_components()
    }

    #[getter]
    fn n_c(&self) -> usize {
        self.inner.basis.n_c()
    }

    #[getter]
    fn shift(&self) -> f64 {
        self.inner.lambda
    }

    #[getter]
    fn rho_history(&self) -> Vec<f64> {
        self.inner.rho_history.clone()
    }

    #[getter]
    fn singular_values(&self) -> Vec<f64> {
        self.inner.basis.singular_values.clone()
    }

    #[getter]
    fn seconds(&self) -> f64 {
        self.inner.seconds
    }

    /// One row per structure vertex, flattened over (basis vector, block entry).
    fn coordinates(&self) -> Vec<Vec<f64>> {
        let c = &self.inner.coords;
        (0..c.n()).map(|i| c.point(i).as_slice().to_vec()).collect()
    }
}

#[pyclass(name = "ClusterResult", module = "pyattrclust")]
struct PyClusterResult {
    #[pyo3(get)]
    labels: Vec<usize>,
    #[pyo3(get)]
    k: usize,
    #[pyo3(get)]
    modularity: Option<f64>,
    #[pyo3(get)]
    objective: f64,
    #[pyo3(get)]
    restart: usize,
    #[pyo3(get)]
    embedding: Py<PyEmbedding>,
}

#[pyfunction]
#[pyo3(signature = (graph, table, attr_weight = 1.0))]
fn augment(graph: &PyGraph, table: &PyAttributeTable, attr_weight: f64) -> PyResult<PyAugmentedGraph> {
    let inner = attrclust::augment(&graph.inner, &table.inner, attr_weight).map_err(to_py)?;
    Ok(PyAugmentedGraph { inner })
}

/// Embed a connected graph. `settings` maps config keys to string values.
#[pyfunction]
#[pyo3(signature = (graph, attributes = None, settings = None))]
fn embed(
    py: Python<'_>,
    graph: &PyGraph,
    attributes: Option<&PyAttributeTable>,
    settings: Option<HashMap<String, String>>,
) -> PyResult<PyEmbedding> {
    let params = self::settings(settings)?.embed_params().map_err(to_py)?;
    let attrs = attributes.map(|a| &a.inner);
    let inner = py
        .detach(|| pipeline::embed(&graph.inner, attrs, &params))
        .map_err(to_py)?;
    Ok(PyEmbedding { inner })
}

#[pyfunction]
#[pyo3(signature = (graph, k, attributes = None, settings = None))]
fn cluster(
    py: Python<'_>,
    graph: &PyGraph,
    k: usize,
    attributes: Option<&PyAttributeTable>,
    settings: Option<HashMap<String, String>>,
) -> PyResult<PyClusterResult> {
    let s = self::settings(settings)?;
    let params = s.embed_params().map_err(to_py)?;
    let km = s.kmeans(k);
    let attrs = attributes.map(|a| &a.inner);
    let (e, c) = py
        .detach(|| pipeline::cluster(&graph.inner, attrs, &params, &km))
        .map_err(to_py)?;
    Ok(PyClusterResult {
        labels: c.partition.labels().to_vec(),
        k: c.partition.k(),
        modularity: c.modularity,
        objective: c.objective,
        restart: c.restart,
        embedding: Py::new(py, PyEmbedding { inner: e })?,
    })
}

#[pyfunction]
fn modularity(graph: &PyGraph, labels: Vec<usize>) -> PyResult<f64> {
    metrics::modularity(&graph.inner, &partition(&labels)).map_err(to_py)
}

#[pyfunction]
fn ratio_cut(graph: &PyGraph, labels: Vec<usize>) -> PyResult<f64> {
    metrics::ratio_cut(&graph.inner, &partition(&labels)).map_err(to_py)
}

#[pyfunction]
fn entropy(labels: Vec<usize>) -> f64 {
    metrics::entropy(&partition(&labels))
}

#[pyfunction]
fn conditional_entropy(truth: Vec<usize>, estimate: Vec<usize>) -> PyResult<f64> {
    metrics::conditional_entropy(&partition(&truth), &partition(&estimate)).map_err(to_py)
}

#[pyfunction]
fn information_gain(truth: Vec<usize>, estimate: Vec<usize>) -> PyResult<f64> {
    metrics::information_gain(&partition(&truth), &partition(&estimate)).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (a, b, raw = false))]
fn nmi(a: Vec<usize>, b: Vec<usize>, raw: bool) -> PyResult<f64> {
    let (a, b) = (partition(&a), partition(&b));
    if raw {
        metrics::nmi_raw(&a, &b)
    } else {
        metrics::nmi(&a, &b)
    }
    .map_err(to_py)
}

/// Planted-partition graph and its group labels.
#[pyfunction]
#[pyo3(signature = (n, q, c, delta, seed = 0))]
fn generate_sbm(n: usize, q: usize, c: f64, delta: f64, seed: u64) -> PyResult<(PyGraph, Vec<usize>)> {
    let (g, truth) = generators::generate_sbm(&SbmSpec { n, q, c, delta, seed }).map_err(to_py)?;
    Ok((PyGraph { inner: g }, truth.labels().to_vec()))
}

/// One-column table of labels, each redrawn uniformly with probability `noise`.
#[pyfunction]
#[pyo3(signature = (labels, noise = 0.0, seed = 0, q = 0))]
fn labels_to_attributes(labels: Vec<usize>, noise: f64, seed: u64, q: usize) -> PyResult<PyAttributeTable> {
    let p = partition(&labels);
    let inner = generators::labels_to_attributes(&p, &NoiseSpec { level: noise, seed }, q).map_err(to_py)?;
    Ok(PyAttributeTable { inner })
}

#[pymodule]
fn pyattrclust(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGraph>()?;
    m.add_class::<PyAttributeTable>()?;
    m.add_class::<PyAugmentedGraph>()?;
    m.add_class::<PyEmbedding>()?;
    m.add_class::<PyClusterResult>()?;
    m.add_function(wrap_pyfunction!(augment, m)?)?;
    m.add_function(wrap_pyfunction!(embed, m)?)?;
    m.add_function(wrap_pyfunction!(cluster, m)?)?;
    m.add_function(wrap_pyfunction!(modularity, m)?)?;
    m.add_function(wrap_pyfunction!(ratio_cut, m)?)?;
    m.add_function(wrap_pyfunction!(entropy, m)?)?;
    m.add_function(wrap_pyfunction!(conditional_entropy, m)?)?;
    m.add_function(wrap_pyfunction!(information_gain, m)?)?;
    m.add_function(wrap_pyfunction!(nmi, m)?)?;
    m.add_function(wrap_pyfunction!(generate_sbm, m)?)?;
    m.add_function(wrap_pyfunction!(labels_to_attributes, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
