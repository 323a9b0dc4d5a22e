//! Attribute augmentation: one new vertex per distinct value of each
//! categorical attribute, joined to every structure vertex carrying that value.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::graph::{Edge, Graph};

/// Categorical attributes, one row per structure vertex.
///
/// Missing cells are resolved at construction: each becomes a value unique to
/// its vertex, so it forms its own singleton class.
#[derive(Debug, Clone, PartialEq)]
pub struct AttributeTable {
    names: Vec<String>,
    rows: Vec<Vec<String>>,
}

const MISSING_PREFIX: &str = "\u{0}missing:";

impl AttributeTable {
    pub fn new(names: Vec<String>, rows: Vec<Vec<Option<String>>>) -> Result<Self> {
        let m = names.len();
        let rows = rows
            .into_iter()
            .enumerate()
            .map(|(i, row)| {
                if row.len() != m {
                    return Err(Error::DimensionMismatch {
                        expected: m,
                        got: row.len(),
                    });
                }
                Ok(row
                    .into_iter()
                    .map(|cell| match cell {
                        Some(v) if !v.is_empty() => v,
                        _ => format!("{MISSING_PREFIX}{i}"),
                    })
                    .collect())
            })
            .collect::<Result<_>>()?;
        Ok(Self { names, rows })
    }

    /// Table whose every cell is present.
    pub fn from_strings(names: Vec<String>, rows: Vec<Vec<String>>) -> Result<Self> {
        Self::new(names, rows.into_iter().map(|r| r.into_iter().map(Some).collect()).collect())
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_attributes(&self) -> usize {
        self.names.len()
    }

    pub fn value(&self, row: usize, attr: usize) -> &str {
        &self.rows[row][attr]
    }

    pub fn is_missing(&self, row: usize, attr: usize) -> bool {
        self.rows[row][attr].starts_with(MISSING_PREFIX)
    }

    /// Rows restricted to `vertices`, in that order.
    pub fn select_rows(&self, vertices: &[usize]) -> Self {
        Self {
            names: self.names.clone(),
            rows: vertices.iter().map(|&v| self.rows[v].clone()).collect(),
        }
    }
}

/// Distinct values of each attribute, in first-appearance order.
#[derive(Debug, Clone, PartialEq)]
pub struct AttributeDomain {
    pub values: Vec<Vec<String>>,
}

impl AttributeDomain {
    pub fn sizes(&self) -> Vec<usize> {
        self.values.iter().map(Vec::len).collect()
    }
}

pub fn compute_domains(t: &AttributeTable) -> Result<AttributeDomain> {
    if t.n_rows() == 0 {
        return Err(Error::EmptyTable);
    }
    let values = (0..t.n_attributes())
        .map(|j| {
            let mut seen = HashMap::new();
            let mut vals = Vec::new();
            for i in 0..t.n_rows() {
                let v = t.value(i, j);
                if !seen.contains_key(v) {
                    seen.insert(v, vals.len());
                    vals.push(v.to_owned());
                }
            }
            vals
        })
        .collect();
    Ok(AttributeDomain { values })
}

/// Graph extended with attribute vertices, plus the bookkeeping between
/// structure vertices and their attribute-vertex neighbors.
#[derive(Debug, Clone)]
pub struct AugmentedGraph {
    pub graph: Graph,
    n: usize,
    m: usize,
    domain: AttributeDomain,
    /// First global id of each attribute's vertex range.
    offsets: Vec<usize>,
    /// Row-major n × m global ids of attribute neighbors.
    neighbor_table: Vec<usize>,
}

impl AugmentedGraph {
    /// Number of structure vertices.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n_new(&self) -> usize {
        self.graph.n()
    }

    pub fn ne_new(&self) -> usize {
        self.graph.ne()
    }

    pub fn domain(&self) -> &AttributeDomain {
        &self.domain
    }

    /// Global id of the vertex for value `k` of attribute `j`.
    pub fn attr_index(&self, j: usize, k: usize) -> usize {
        self.offsets[j] + k
    }

    /// Global ids of structure vertex `i`'s attribute vertices, in attribute order.
    pub fn attribute_neighbors(&self, i: usize) -> &[usize] {
        &self.neighbor_table[i * self.m..(i + 1) * self.m]
    }

    /// Inverse lookup: (attribute, value index) of an attribute vertex.
    pub fn attribute_of(&self, v: usize) -> Option<(usize, usize)> {
        if v < self.n || v >= self.n_new() {
            return None;
        }
        let j = self.offsets.partition_point(|&o| o <= v) - 1;
        Some((j, v - self.offsets[j]))
    }

    /// Graph without attributes, viewed as a degenerate augmentation.
    pub fn structure_only(g: &Graph) -> Self {
        Self {
            graph: g.clone(),
            n: g.n(),
            m: 0,
            domain: AttributeDomain { values: Vec::new() },
            offsets: Vec::new(),
            neighbor_table: Vec::new(),
        }
    }
}

/// Append attribute vertices and structure–attribute edges of weight `attr_weight`.
pub fn augment(g: &Graph, t: &AttributeTable, attr_weight: f64) -> Result<AugmentedGraph> {
    if t.n_rows() != g.n() {
        return Err(Error::RowCountMismatch {
            table: t.n_rows(),
            graph: g.n(),
        });
    }
    if !(attr_weight > 0.0 && attr_weight.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "attribute edge weight must be positive, got {attr_weight}"
        )));
    }
    let n = g.n();
    let m = t.n_attributes();
    if m == 0 {
        return Ok(AugmentedGraph::structure_only(g));
    }
    let domain = compute_domains(t)?;
    let mut offsets = Vec::with_capacity(m);
    let mut next = n;
    for vals in &domain.values {
        offsets.push(next);
        next += vals.len();
    }
    let n_new = next;

    let mut neighbor_table = vec![0usize; n * m];
    let mut edges: Vec<Edge> = g.edges().map(|(i, j, w)| (i, j, Some(w))).collect();
    edges.reserve(n * m);
    for (j, vals) in domain.values.iter().enumerate() {
        let index: HashMap<&str, usize> = vals.iter().enumerate().map(|(k, v)| (v.as_str(), k)).collect();
        for i in 0..n {
            let v = offsets[j] + index[t.value(i, j)];
            neighbor_table[i * m + j] = v;
            edges.push((i, v, Some(attr_weight)));
        }
    }
    let graph = Graph::from_edges(n_new, &edges)?;
    Ok(AugmentedGraph {
        graph,
        n,
        m,
        domain,
        offsets,
        neighbor_table,
    })
}
