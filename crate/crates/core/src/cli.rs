//! Drivers behind the `cluster`, `generate`, `score` and `sweep` subcommands.

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::augment::AttributeTable;
use crate::config::Settings;
use crate::error::{Error, Result};
use crate::generators::{detectability_threshold, generate_sbm, labels_to_attributes, NoiseSpec, SbmSpec};
use crate::graph::{connected_components, Graph};
use crate::io;
use crate::metrics::{self, Comparison};
use crate::partition::Partition;
use crate::pipeline::{embed, largest_component, Embedding};
use crate::rng;
use crate::clustering::kmeans_blocks;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Attributed,
    Structure,
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "attributed" => Ok(Self::Attributed),
            "structure" => Ok(Self::Structure),
            _ => Err(Error::Usage(format!("mode must be attributed or structure, got {s:?}"))),
        }
    }
}

/// A single K or an inclusive range `a..b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KSpec {
    Single(usize),
    Range(usize, usize),
}

impl KSpec {
    pub fn parse_range(s: &str) -> Result<Self> {
        let bad = || Error::Usage(format!("K range must look like a..b, got {s:?}"));
        let (a, b) = s.split_once("..").ok_or_else(bad)?;
        let (a, b): (usize, usize) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
        if a == 0 || a > b {
            return Err(bad());
        }
        Ok(Self::Range(a, b))
    }

    pub fn values(&self) -> Vec<usize> {
        match *self {
            Self::Single(k) => vec![k],
            Self::Range(a, b) => (a..=b).collect(),
        }
    }
}

/// Validate mode against the presence of an attribute file; infer it when absent.
pub fn resolve_mode(mode: Option<Mode>, has_attributes: bool) -> Result<Mode> {
    match (mode, has_attributes) {
        (Some(Mode::Attributed), false) => Err(Error::Usage("attributed mode requires an attribute file".into())),
        (Some(Mode::Structure), true) => Err(Error::Usage("structure mode does not accept an attribute file".into())),
        (Some(m), _) => Ok(m),
        (None, true) => Ok(Mode::Attributed),
        (None, false) => Ok(Mode::Structure),
    }
}

/// Scores of one K on the clustered (largest-component) graph.
#[derive(Debug, Clone, Serialize)]
pub struct KResult {
    pub k: usize,
    pub modularity: Option<f64>,
    pub ratio_cut: f64,
    pub objective: f64,
    pub restart: usize,
    #[serde(flatten)]
    pub comparison: Option<Comparison>,
    #[serde(skip)]
    pub labels: Vec<usize>,
    #[serde(skip)]
    pub seconds: f64,
}

/// Embedding plus one K-means result per requested K.
#[derive(Debug, Clone)]
pub struct ClusterOutcome {
    pub vertices: Vec<usize>,
    pub discarded: usize,
    pub embedding: Embedding,
    pub results: Vec<KResult>,
}

/// Largest component → embedding → K-means for every K. `truth` and `attrs`
/// are indexed by original vertex id.
pub fn cluster_graph(
    g: &Graph,
    attrs: Option<&AttributeTable>,
    truth: Option<&Partition>,
    ks: &[usize],
    settings: &Settings,
    nmi_raw: bool,
) -> Result<ClusterOutcome> {
    let (sub, vertices, discarded) = largest_component(g);
    let sub_attrs = attrs.map(|t| t.select_rows(&vertices));
    let sub_truth = truth.map(|t| t.restrict(&vertices));
    let embedding = embed(&sub, sub_attrs.as_ref(), &settings.embed_params()?)?;
    let mut results = Vec::with_capacity(ks.len());
    for &k in ks {
        let start = Instant::now();
        let c = kmeans_blocks(&embedding.coords, &sub, &settings.kmeans(k))?;
        let comparison = match &sub_truth {
            Some(t) => Some(metrics::compare(t, &c.partition, nmi_raw)?),
            None => None,
        };
        results.push(KResult {
            k,
            modularity: c.modularity,
            ratio_cut: metrics::ratio_cut(&sub, &c.partition)?,
            objective: c.objective,
            restart: c.restart,
            comparison,
            labels: c.partition.labels().to_vec(),
            seconds: start.elapsed().as_secs_f64(),
        });
    }
    Ok(ClusterOutcome {
        vertices,
        discarded,
        embedding,
        results,
    })
}

/// Partition over `0..n` from `(vertex, label)` pairs; every vertex must appear exactly once.
pub fn partition_from_pairs(pairs: &[(usize, usize)], n: usize, origin: &str) -> Result<Partition> {
    let mut labels = vec![None; n];
    for &(v, l) in pairs {
        if v >= n {
            return Err(Error::VertexSetMismatch(format!("{origin}: vertex {v} is not in a graph of {n} vertices")));
        }
        if labels[v].replace(l).is_some() {
            return Err(Error::VertexSetMismatch(format!("{origin}: vertex {v} listed twice")));
        }
    }
    let labels: Vec<usize> = labels
        .into_iter()
        .enumerate()
        .map(|(v, l)| l.ok_or_else(|| Error::VertexSetMismatch(format!("{origin}: vertex {v} has no label"))))
        .collect::<Result<_>>()?;
    Ok(Partition::from_labels(&labels))
}

#[derive(Debug, Clone)]
pub struct ClusterJob {
    pub edges: PathBuf,
    pub attributes: Option<PathBuf>,
    pub truth: Option<PathBuf>,
    pub out_dir: PathBuf,
    pub mode: Option<Mode>,
    pub k: KSpec,
    pub settings: Settings,
    pub nmi_raw: bool,
    pub dump_coordinates: bool,
}

fn path_str(p: &Option<PathBuf>) -> Option<String> {
    p.as_ref().map(|p| p.display().to_string())
}

/// Partition file name for one K of a job.
pub fn partition_file(k: &KSpec, value: usize) -> String {
    match k {
        KSpec::Single(_) => "partition.tsv".into(),
        KSpec::Range(..) => format!("partition_k{value}.tsv"),
    }
}

/// Writes partition TSV(s), `metrics.json` and `provenance.json` under `out_dir`.
pub fn run_cluster(job: &ClusterJob) -> Result<ClusterOutcome> {
    let total = Instant::now();
    let mode = resolve_mode(job.mode, job.attributes.is_some())?;
    let el = io::read_edge_list(&job.edges)?;
    let attrs = match &job.attributes {
        Some(p) => Some(io::read_attributes(p)?),
        None => None,
    };
    let n = el.n.max(attrs.as_ref().map_or(0, |t| t.n_rows()));
    let g = Graph::from_edges(n, &el.edges)?;
    let truth = match &job.truth {
        Some(p) => Some(partition_from_pairs(&io::read_partition(p)?, n, &p.display().to_string())?),
        None => None,
    };
    let load_seconds = total.elapsed().as_secs_f64();
    let ks = job.k.values();
    let out = cluster_graph(&g, attrs.as_ref(), truth.as_ref(), &ks, &job.settings, job.nmi_raw)?;

    for r in &out.results {
        let summary = io::PartitionSummary {
            k: r.k,
            modularity: r.modularity,
            objective: Some(r.objective),
            restart: Some(r.restart),
        };
        let text = io::format_partition(&out.vertices, &r.labels, &summary);
        io::write_text(&job.out_dir.join(partition_file(&job.k, r.k)), &text)?;
    }
    let scores = |r: &KResult| {
        let mut v = serde_json::to_value(r).expect("plain data");
        v["n_vertices"] = json!(out.vertices.len());
        v["discarded_vertices"] = json!(out.discarded);
        v
    };
    let metrics = match job.k {
        KSpec::Single(_) => scores(&out.results[0]),
        KSpec::Range(..) => json!(out.results.iter().map(scores).collect::<Vec<_>>()),
    };
    io::write_json(&job.out_dir.join("metrics.json"), &metrics)?;
    if job.dump_coordinates {
        let text = io::format_coordinates(&out.vertices, &out.embedding.coords);
        io::write_text(&job.out_dir.join("coordinates.tsv"), &text)?;
    }

    let e = &out.embedding;
    let provenance = json!({
        "tool": "attrclust",
        "version": env!("CARGO_PKG_VERSION"),
        "command": "cluster",
        "inputs": {
            "edges": job.edges.display().to_string(),
            "attributes": path_str(&job.attributes),
            "truth": path_str(&job.truth),
        },
        "mode": mode,
        "k": ks,
        "nmi_raw": job.nmi_raw,
        "settings": job.settings,
        "graph": {
            "n_input": n,
            "ne_input": g.ne(),
            "n_clustered": out.vertices.len(),
            "discarded_vertices": out.discarded,
            "n_attributes": e.augmented.m(),
            "n_new": e.augmented.n_new(),
            "ne_new": e.augmented.ne_new(),
        },
        "embedding": {
            "lambda": e.lambda,
            "shift_edge": e.shift_edge,
            "m_components": e.m_components(),
            "n_c": e.basis.n_c(),
            "rho_history": e.rho_history,
            "hierarchy_levels": e.hierarchy_levels,
            "singular_values": e.basis.singular_values,
        },
        "kmeans": out.results.iter().map(|r| json!({"k": r.k, "restart": r.restart, "seconds": r.seconds})).collect::<Vec<_>>(),
        "timings": {
            "load_seconds": load_seconds,
            "embed_seconds": e.seconds,
            "total_seconds": total.elapsed().as_secs_f64(),
        },
    });
    io::write_json(&job.out_dir.join("provenance.json"), &provenance)?;
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct GenerateJob {
    pub spec: SbmSpec,
    pub noise: f64,
    pub out_dir: PathBuf,
}

/// Writes `edges.txt`, `truth.tsv`, `attributes.tsv` and `meta.json`.
pub fn run_generate(job: &GenerateJob) -> Result<serde_json::Value> {
    let s = &job.spec;
    let (c_in, c_out) = s.degrees().map_err(|e| Error::InfeasibleSpec(e.to_string()))?;
    let (p_in, p_out) = s.probabilities()?;
    let (g, truth) = generate_sbm(s)?;
    let attrs = labels_to_attributes(&truth, &NoiseSpec { level: job.noise, seed: s.seed }, s.q)?;
    let vertices: Vec<usize> = (0..g.n()).collect();
    let summary = io::PartitionSummary {
        k: truth.k(),
        modularity: metrics::modularity(&g, &truth).ok(),
        objective: None,
        restart: None,
    };
    io::write_text(&job.out_dir.join("edges.txt"), &io::format_edge_list(&g))?;
    io::write_text(&job.out_dir.join("truth.tsv"), &io::format_partition(&vertices, truth.labels(), &summary))?;
    io::write_text(&job.out_dir.join("attributes.tsv"), &io::format_attributes(&attrs))?;
    let comps = connected_components(&g);
    let meta = json!({
        "tool": "attrclust",
        "version": env!("CARGO_PKG_VERSION"),
        "command": "generate",
        "spec": s,
        "seed": s.seed,
        "c_in": c_in,
        "c_out": c_out,
        "p_in": p_in,
        "p_out": p_out,
        "detectability_threshold": detectability_threshold(s.q, s.c).ok(),
        "noise": job.noise,
        "noise_model": "with probability noise the value is redrawn uniformly from all q labels, including the true one",
        "n": g.n(),
        "ne": g.ne(),
        "realized_average_degree": if g.n() > 0 { 2.0 * g.ne() as f64 / g.n() as f64 } else { 0.0 },
        "component_sizes": comps.members.iter().map(Vec::len).collect::<Vec<_>>(),
        "truth_modularity": summary.modularity,
    });
    io::write_json(&job.out_dir.join("meta.json"), &meta)?;
    Ok(meta)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScoreReport {
    pub modularity: Option<f64>,
    pub ratio_cut: Option<f64>,
    pub nmi: f64,
    pub entropy: f64,
    pub conditional_entropy: f64,
    pub gain: f64,
}

/// Compare two partitions given as `(vertex, label)` pairs over the same
/// vertex set; graph scores use the subgraph induced by that set.
pub fn score_pairs(
    truth: &[(usize, usize)],
    estimate: &[(usize, usize)],
    graph: Option<&Graph>,
    nmi_raw: bool,
) -> Result<ScoreReport> {
    let index = |pairs: &[(usize, usize)], which: &str| -> Result<HashMap<usize, usize>> {
        let mut m = HashMap::with_capacity(pairs.len());
        for &(v, l) in pairs {
            if m.insert(v, l).is_some() {
                return Err(Error::VertexSetMismatch(format!("vertex {v} listed twice in {which}")));
            }
        }
        Ok(m)
    };
    let t = index(truth, "truth")?;
    let e = index(estimate, "estimate")?;
    let mut vertices: Vec<usize> = t.keys().copied().collect();
    vertices.sort_unstable();
    if t.len() != e.len() || vertices.iter().any(|v| !e.contains_key(v)) {
        let missing = vertices.iter().filter(|v| !e.contains_key(v)).count();
        return Err(Error::VertexSetMismatch(format!(
            "truth has {} vertices, estimate has {}, {missing} truth vertices lack an estimate",
            t.len(),
            e.len()
        )));
    }
    let tp = Partition::from_labels(&vertices.iter().map(|v| t[v]).collect::<Vec<_>>());
    let ep = Partition::from_labels(&vertices.iter().map(|v| e[v]).collect::<Vec<_>>());
    let (modularity, ratio_cut) = match graph {
        Some(g) => {
            if let Some(&v) = vertices.iter().find(|&&v| v >= g.n()) {
                return Err(Error::VertexSetMismatch(format!("vertex {v} is not in the graph")));
            }
            let sub = g.induced_subgraph(&vertices);
            (metrics::modularity(&sub, &ep).ok(), Some(metrics::ratio_cut(&sub, &ep)?))
        }
        None => (None, None),
    };
    let c = metrics::compare(&tp, &ep, nmi_raw)?;
    Ok(ScoreReport {
        modularity,
        ratio_cut,
        nmi: c.nmi,
        entropy: c.entropy,
        conditional_entropy: c.conditional_entropy,
        gain: c.gain,
    })
}

pub fn run_score(truth: &Path, estimate: &Path, edges: Option<&Path>, nmi_raw: bool) -> Result<ScoreReport> {
    let g = match edges {
        Some(p) => Some(io::read_edge_list(p)?.to_graph()?),
        None => None,
    };
    score_pairs(&io::read_partition(truth)?, &io::read_partition(estimate)?, g.as_ref(), nmi_raw)
}

/// Experiment grid over SBM parameters; cells are the product delta × noise × K.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepGrid {
    pub n: usize,
    pub q: usize,
    pub c: f64,
    pub deltas: Vec<f64>,
    pub noises: Vec<f64>,
    pub ks: Vec<usize>,
    pub samples: usize,
    pub base_seed: u64,
    pub mode: Mode,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepCell {
    pub index: usize,
    pub delta: f64,
    pub noise: f64,
    pub k: usize,
}

impl SweepGrid {
    pub fn cells(&self) -> Vec<SweepCell> {
        let mut out = Vec::new();
        for &delta in &self.deltas {
            for &noise in &self.noises {
                for &k in &self.ks {
                    out.push(SweepCell { index: out.len(), delta, noise, k });
                }
            }
        }
        out
    }

    pub fn seed(&self, cell: usize, sample: usize) -> u64 {
        rng::derive_seed(self.base_seed, "sweep", &[cell as u64, sample as u64])
    }
}

/// One (cell, sample) measurement; `error` is set and scores are absent on failure.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub cell: usize,
    pub delta: f64,
    pub noise: f64,
    pub k: usize,
    pub sample: usize,
    pub seed: u64,
    pub status: String,
    pub n_clustered: Option<usize>,
    pub discarded: Option<usize>,
    pub m_components: Option<usize>,
    pub n_c: Option<usize>,
    pub modularity: Option<f64>,
    pub nmi: Option<f64>,
    pub entropy: Option<f64>,
    pub conditional_entropy: Option<f64>,
    pub gain: Option<f64>,
    pub seconds: f64,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSummary {
    pub cell: usize,
    pub delta: f64,
    pub noise: f64,
    pub k: usize,
    pub ok: usize,
    pub failed: usize,
    pub modularity_mean: Option<f64>,
    pub modularity_std: Option<f64>,
    pub nmi_mean: Option<f64>,
    pub nmi_std: Option<f64>,
    pub entropy_mean: Option<f64>,
    pub entropy_std: Option<f64>,
    pub conditional_entropy_mean: Option<f64>,
    pub conditional_entropy_std: Option<f64>,
    pub gain_mean: Option<f64>,
    pub gain_std: Option<f64>,
    pub seconds_mean: Option<f64>,
    pub seconds_std: Option<f64>,
}

/// Mean and sample standard deviation (0 for a single value).
pub fn mean_std(xs: &[f64]) -> (Option<f64>, Option<f64>) {
    if xs.is_empty() {
        return (None, None);
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = if xs.len() > 1 {
        xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    (Some(mean), Some(var.sqrt()))
}

fn sweep_sample(grid: &SweepGrid, cell: &SweepCell, sample: usize, settings: &Settings, nmi_raw: bool) -> SweepRow {
    let seed = grid.seed(cell.index, sample);
    let start = Instant::now();
    let mut row = SweepRow {
        cell: cell.index,
        delta: cell.delta,
        noise: cell.noise,
        k: cell.k,
        sample,
        seed,
        status: "ok".into(),
        n_clustered: None,
        discarded: None,
        m_components: None,
        n_c: None,
        modularity: None,
        nmi: None,
        entropy: None,
        conditional_entropy: None,
        gain: None,
        seconds: 0.0,
        error: String::new(),
    };
    let run = || -> Result<ClusterOutcome> {
        let spec = SbmSpec { n: grid.n, q: grid.q, c: grid.c, delta: cell.delta, seed };
        let (g, truth) = generate_sbm(&spec)?;
        let attrs = match grid.mode {
            Mode::Attributed => Some(labels_to_attributes(&truth, &NoiseSpec { level: cell.noise, seed }, grid.q)?),
            Mode::Structure => None,
        };
        let mut s = settings.clone();
        s.seed = seed;
        cluster_graph(&g, attrs.as_ref(), Some(&truth), &[cell.k], &s, nmi_raw)
    };
    match run() {
        Ok(out) => {
            let r = &out.results[0];
            let c = r.comparison.expect("truth supplied");
            row.n_clustered = Some(out.vertices.len());
            row.discarded = Some(out.discarded);
            row.m_components = Some(out.embedding.m_components());
            row.n_c = Some(out.embedding.basis.n_c());
            row.modularity = r.modularity;
            row.nmi = Some(c.nmi);
            row.entropy = Some(c.entropy);
            row.conditional_entropy = Some(c.conditional_entropy);
            row.gain = Some(c.gain);
        }
        Err(e) => {
            row.status = "failed".into();
            row.error = e.to_string();
        }
    }
    row.seconds = start.elapsed().as_secs_f64();
    row
}

/// Run every (cell, sample) on a pool of `workers` threads; failures are
/// recorded as flagged rows and the sweep continues.
pub fn sweep(grid: &SweepGrid, settings: &Settings, workers: usize, nmi_raw: bool) -> Result<(Vec<SweepRow>, Vec<SweepSummary>)> {
    if grid.samples == 0 || grid.deltas.is_empty() || grid.noises.is_empty() || grid.ks.is_empty() {
        return Err(Error::Usage("sweep grid needs at least one value per axis and one sample".into()));
    }
    let cells = grid.cells();
    let tasks: Vec<(SweepCell, usize)> = cells
        .iter()
        .flat_map(|c| (0..grid.samples).map(move |s| (*c, s)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidParameter(e.to_string()))?;
    let rows: Vec<SweepRow> = pool.install(|| {
        tasks
            .par_iter()
            .map(|(c, s)| sweep_sample(grid, c, *s, settings, nmi_raw))
            .collect()
    });
    let summaries = cells
        .iter()
        .map(|c| {
            let mine: Vec<&SweepRow> = rows.iter().filter(|r| r.cell == c.index).collect();
            let ok: Vec<&SweepRow> = mine.iter().copied().filter(|r| r.status == "ok").collect();
            let col = |f: fn(&SweepRow) -> Option<f64>| mean_std(&ok.iter().filter_map(|r| f(r)).collect::<Vec<_>>());
            let (modularity_mean, modularity_std) = col(|r| r.modularity);
            let (nmi_mean, nmi_std) = col(|r| r.nmi);
            let (entropy_mean, entropy_std) = col(|r| r.entropy);
            let (conditional_entropy_mean, conditional_entropy_std) = col(|r| r.conditional_entropy);
            let (gain_mean, gain_std) = col(|r| r.gain);
            let (seconds_mean, seconds_std) = col(|r| Some(r.seconds));
            SweepSummary {
                cell: c.index,
                delta: c.delta,
                noise: c.noise,
                k: c.k,
                ok: ok.len(),
                failed: mine.len() - ok.len(),
                modularity_mean,
                modularity_std,
                nmi_mean,
                nmi_std,
                entropy_mean,
                entropy_std,
                conditional_entropy_mean,
                conditional_entropy_std,
                gain_mean,
                gain_std,
                seconds_mean,
                seconds_std,
            }
        })
        .collect();
    Ok((rows, summaries))
}

fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| Error::InvalidParameter(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::InvalidParameter(e.to_string()))?;
    io::write_text(path, &String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Writes `sweep.csv`, `summary.csv` and `provenance.json` under `out_dir`.
pub fn run_sweep(grid: &SweepGrid, settings: &Settings, workers: usize, nmi_raw: bool, out_dir: &Path) -> Result<(Vec<SweepRow>, Vec<SweepSummary>)> {
    let start = Instant::now();
    let (rows, summaries) = sweep(grid, settings, workers, nmi_raw)?;
    write_csv(&out_dir.join("sweep.csv"), &rows)?;
    write_csv(&out_dir.join("summary.csv"), &summaries)?;
    let provenance = json!({
        "tool": "attrclust",
        "version": env!("CARGO_PKG_VERSION"),
        "command": "sweep",
        "grid": grid,
        "settings": settings,
        "workers": workers,
        "nmi_raw": nmi_raw,
        "seed_derivation": "seed(cell, sample) = derive_seed(base_seed, \"sweep\", [cell, sample])",
        "rows": rows.len(),
        "failed": rows.iter().filter(|r| r.status != "ok").count(),
        "total_seconds": start.elapsed().as_secs_f64(),
    });
    io::write_json(&out_dir.join("provenance.json"), &provenance)?;
    Ok((rows, summaries))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k_range_parsing() {
        assert_eq!(KSpec::parse_range("2..4").unwrap().values(), vec![2, 3, 4]);
        assert!(KSpec::parse_range("4..2").is_err());
        assert!(KSpec::parse_range("0..2").is_err());
        assert!(KSpec::parse_range("3").is_err());
    }

    #[test]
    fn mode_resolution() {
        assert_eq!(resolve_mode(None, true).unwrap(), Mode::Attributed);
        assert_eq!(resolve_mode(None, false).unwrap(), Mode::Structure);
        assert!(matches!(resolve_mode(Some(Mode::Attributed), false), Err(Error::Usage(_))));
        assert!(matches!(resolve_mode(Some(Mode::Structure), true), Err(Error::Usage(_))));
    }

    #[test]
    fn score_requires_same_vertices() {
        let a = [(0, 0), (1, 0), (2, 1)];
        let b = [(0, 5), (1, 5), (3, 7)];
        assert!(matches!(score_pairs(&a, &b, None, false), Err(Error::VertexSetMismatch(_))));
        let s = score_pairs(&a, &[(2, 9), (0, 1), (1, 1)], None, false).unwrap();
        assert!((s.nmi - 1.0).abs() < 1e-12 && s.conditional_entropy.abs() < 1e-12);
    }

    #[test]
    fn mean_std_cases() {
        assert_eq!(mean_std(&[]), (None, None));
        assert_eq!(mean_std(&[2.0]), (Some(2.0), Some(0.0)));
        let (m, s) = mean_std(&[1.0, 3.0]);
        assert_eq!(m, Some(2.0));
        assert!((s.unwrap() - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn grid_seeds_are_distinct() {
        let grid = SweepGrid {
            n: 40,
            q: 2,
            c: 6.0,
            deltas: vec![2.0, 4.0],
            noises: vec![0.0],
            ks: vec![2, 3],
            samples: 3,
            base_seed: 1,
            mode: Mode::Structure,
        };
        let cells = grid.cells();
        assert_eq!(cells.len(), 4);
        let mut seeds: Vec<u64> = cells.iter().flat_map(|c| (0..3).map(|s| grid.seed(c.index, s))).collect();
        seeds.sort_unstable();
        seeds.dedup();
        assert_eq!(seeds.len(), 12);
    }
}
