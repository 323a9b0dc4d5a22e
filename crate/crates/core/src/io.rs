//! Text formats: edge lists, attribute and partition TSVs, coordinate dumps.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Serialize;

use crate::augment::AttributeTable;
use crate::embedding::VertexCoordinates;
use crate::error::{Error, Result};
use crate::graph::{Edge, Graph};

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    write_text(path, &s)
}

fn parse_err(path: &str, line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_string(),
        line,
        msg: msg.into(),
    }
}

/// Parsed edge list; `n` is the declared vertex count or max id + 1.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeList {
    pub n: usize,
    pub edges: Vec<Edge>,
}

impl EdgeList {
    pub fn to_graph(&self) -> Result<Graph> {
        Graph::from_edges(self.n, &self.edges)
    }
}

/// Lines `i j [w]`; `#` starts a comment. A `# n = N` comment declares the
/// vertex count so that trailing isolated vertices survive a round trip.
pub fn parse_edge_list(text: &str, origin: &str) -> Result<EdgeList> {
    let mut edges = Vec::new();
    let mut declared = None;
    let mut max_id = None::<usize>;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let (body, comment) = match raw.split_once('#') {
            Some((b, c)) => (b, Some(c)),
            None => (raw, None),
        };
        if let Some(c) = comment {
            if let Some(v) = c.trim().strip_prefix("n =").or_else(|| c.trim().strip_prefix("n=")) {
                let n = v
                    .trim()
                    .parse()
                    .map_err(|_| parse_err(origin, line_no, format!("bad vertex count {:?}", v.trim())))?;
                declared = Some(n);
            }
        }
        let fields: Vec<&str> = body.split_whitespace().collect();
        if fields.is_empty() {
            continue;
        }
        if !(2..=3).contains(&fields.len()) {
            return Err(parse_err(origin, line_no, format!("expected `i j [w]`, got {} fields", fields.len())));
        }
        let id = |s: &str| s.parse::<usize>().map_err(|_| parse_err(origin, line_no, format!("bad vertex id {s:?}")));
        let (i, j) = (id(fields[0])?, id(fields[1])?);
        let w = match fields.get(2) {
            Some(s) => Some(
                s.parse::<f64>()
                    .map_err(|_| parse_err(origin, line_no, format!("bad weight {s:?}")))?,
            ),
            None => None,
        };
        max_id = Some(max_id.map_or(i.max(j), |m| m.max(i).max(j)));
        edges.push((i, j, w));
    }
    let inferred = max_id.map_or(0, |m| m + 1);
    let n = match declared {
        Some(n) if n < inferred => {
            return Err(parse_err(origin, 0, format!("declared n = {n} but vertex {} appears", inferred - 1)))
        }
        Some(n) => n,
        None => inferred,
    };
    Ok(EdgeList { n, edges })
}

pub fn read_edge_list(path: &Path) -> Result<EdgeList> {
    parse_edge_list(&read(path)?, &path.display().to_string())
}

pub fn format_edge_list(g: &Graph) -> String {
    let mut s = format!("# n = {}\n", g.n());
    for (i, j, w) in g.edges() {
        if w == 1.0 {
            writeln!(s, "{i} {j}").unwrap();
        } else {
            writeln!(s, "{i} {j} {w}").unwrap();
        }
    }
    s
}

/// Header row of attribute names, then one row per vertex. Empty cells are missing.
pub fn parse_attributes(text: &str, origin: &str) -> Result<AttributeTable> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let Some((_, header)) = lines.next() else {
        return Err(parse_err(origin, 1, "missing header row"));
    };
    let names: Vec<String> = header.trim_end_matches('\r').split('\t').map(str::to_string).collect();
    let mut rows = Vec::new();
    for (idx, raw) in lines {
        let cells: Vec<Option<String>> = raw
            .trim_end_matches('\r')
            .split('\t')
            .map(|c| (!c.is_empty()).then(|| c.to_string()))
            .collect();
        if cells.len() != names.len() {
            return Err(parse_err(
                origin,
                idx + 1,
                format!("expected {} fields, got {}", names.len(), cells.len()),
            ));
        }
        rows.push(cells);
    }
    if rows.is_empty() {
        return Err(Error::EmptyTable);
    }
    AttributeTable::new(names, rows)
}

pub fn read_attributes(path: &Path) -> Result<AttributeTable> {
    parse_attributes(&read(path)?, &path.display().to_string())
}

pub fn format_attributes(t: &AttributeTable) -> String {
    let mut s = t.names().join("\t");
    s.push('\n');
    for i in 0..t.n_rows() {
        let row: Vec<&str> = (0..t.n_attributes())
            .map(|j| if t.is_missing(i, j) { "" } else { t.value(i, j) })
            .collect();
        s.push_str(&row.join("\t"));
        s.push('\n');
    }
    s
}

/// Summary carried by a partition file's trailing comment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PartitionSummary {
    pub k: usize,
    pub modularity: Option<f64>,
    pub objective: Option<f64>,
    pub restart: Option<usize>,
}

/// `(vertex, cluster)` pairs from a `vertex<TAB>cluster` file; `#` lines and
/// a `vertex cluster` header are skipped.
pub fn parse_partition(text: &str, origin: &str) -> Result<Vec<(usize, usize)>> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields == ["vertex", "cluster"] {
            continue;
        }
        if fields.len() != 2 {
            return Err(parse_err(origin, idx + 1, format!("expected 2 fields, got {}", fields.len())));
        }
        let num = |s: &str| s.parse::<usize>().map_err(|_| parse_err(origin, idx + 1, format!("bad integer {s:?}")));
        out.push((num(fields[0])?, num(fields[1])?));
    }
    Ok(out)
}

pub fn read_partition(path: &Path) -> Result<Vec<(usize, usize)>> {
    parse_partition(&read(path)?, &path.display().to_string())
}

pub fn format_partition(vertices: &[usize], labels: &[usize], summary: &PartitionSummary) -> String {
    let mut s = String::from("vertex\tcluster\n");
    for (v, l) in vertices.iter().zip(labels) {
        writeln!(s, "{v}\t{l}").unwrap();
    }
    let opt = |x: Option<f64>| x.map_or("NA".to_string(), |v| format!("{v:.12}"));
    writeln!(
        s,
        "# K={} modularity={} objective={} restart={}",
        summary.k,
        opt(summary.modularity),
        opt(summary.objective),
        summary.restart.map_or("NA".to_string(), |r| r.to_string())
    )
    .unwrap();
    s
}

/// One row per (vertex, smooth-vector index): `vertex r block_0 .. block_m`.
pub fn format_coordinates(vertices: &[usize], c: &VertexCoordinates) -> String {
    let mut s = String::from("vertex\tr");
    for b in 0..c.block_len() {
        write!(s, "\tblock_{b}").unwrap();
    }
    s.push('\n');
    for (i, v) in vertices.iter().enumerate() {
        let p = c.point(i);
        for r in 0..c.n_c() {
            write!(s, "{v}\t{r}").unwrap();
            for x in p.block(r) {
                write!(s, "\t{x:.17e}").unwrap();
            }
            s.push('\n');
        }
    }
    s
}
