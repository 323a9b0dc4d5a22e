//! Partition quality: modularity, ratio cut, and the information-theoretic
//! comparisons against a ground truth. Logarithms are natural (nats).

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::partition::Partition;

/// K × K' overlap counts between two partitions of the same vertex set.
#[derive(Debug, Clone, PartialEq)]
pub struct ContingencyTable {
    pub counts: Vec<Vec<usize>>,
    pub row_sums: Vec<usize>,
    pub col_sums: Vec<usize>,
    pub n: usize,
}

impl ContingencyTable {
    pub fn new(a: &Partition, b: &Partition) -> Result<Self> {
        same_vertices(a, b)?;
        let mut counts = vec![vec![0usize; b.k()]; a.k()];
        for (&x, &y) in a.labels().iter().zip(b.labels()) {
            counts[x][y] += 1;
        }
        Ok(Self {
            row_sums: counts.iter().map(|r| r.iter().sum()).collect(),
            col_sums: (0..b.k()).map(|c| counts.iter().map(|r| r[c]).sum()).collect(),
            counts,
            n: a.n(),
        })
    }
}

fn same_vertices(a: &Partition, b: &Partition) -> Result<()> {
    if a.n() != b.n() {
        return Err(Error::VertexSetMismatch(format!("{} vs {} vertices", a.n(), b.n())));
    }
    Ok(())
}

#[inline]
fn plogp(p: f64) -> f64 {
    if p > 0.0 {
        p * p.ln()
    } else {
        0.0
    }
}

fn check_cover(g: &Graph, p: &Partition) -> Result<()> {
    if p.n() != g.n() {
        return Err(Error::DimensionMismatch {
            expected: g.n(),
            got: p.n(),
        });
    }
    Ok(())
}

/// Q = Σ_c [ w_in(c) / 2W − (d(c) / 2W)² ] with W the total edge weight.
pub fn modularity(g: &Graph, p: &Partition) -> Result<f64> {
    check_cover(g, p)?;
    if g.ne() == 0 {
        return Err(Error::EmptyGraph);
    }
    let two_w = 2.0 * g.total_weight();
    let mut internal = vec![0.0; p.k()];
    let mut degree = vec![0.0; p.k()];
    let labels = p.labels();
    for i in 0..g.n() {
        let ci = labels[i];
        for (&j, &w) in g.neighbors(i).iter().zip(g.neighbor_weights(i)) {
            degree[ci] += w;
            if labels[j] == ci {
                internal[ci] += w;
            }
        }
    }
    Ok(internal
        .iter()
        .zip(&degree)
        .map(|(&a, &d)| a / two_w - (d / two_w).powi(2))
        .sum())
}

/// (1/2) Σ_k W(V_k, V̄_k) / |V_k|.
pub fn ratio_cut(g: &Graph, p: &Partition) -> Result<f64> {
    check_cover(g, p)?;
    let sizes = p.sizes();
    if let Some(k) = sizes.iter().position(|&s| s == 0) {
        return Err(Error::EmptyCluster(k));
    }
    let mut cut = vec![0.0; p.k()];
    let labels = p.labels();
    for (i, j, w) in g.edges() {
        if labels[i] != labels[j] {
            cut[labels[i]] += w;
            cut[labels[j]] += w;
        }
    }
    Ok(0.5 * cut.iter().zip(&sizes).map(|(c, &s)| c / s as f64).sum::<f64>())
}

pub fn entropy(p: &Partition) -> f64 {
    let n = p.n() as f64;
    -p.sizes().iter().map(|&s| plogp(s as f64 / n)).sum::<f64>()
}

/// H(truth | estimate).
pub fn conditional_entropy(truth: &Partition, estimate: &Partition) -> Result<f64> {
    let t = ContingencyTable::new(estimate, truth)?;
    let n = t.n as f64;
    let mut h = 0.0;
    for (row, &nk) in t.counts.iter().zip(&t.row_sums) {
        if nk == 0 {
            continue;
        }
        let inner: f64 = row.iter().map(|&c| plogp(c as f64 / nk as f64)).sum();
        h -= nk as f64 / n * inner;
    }
    Ok(h.max(0.0))
}

pub fn mutual_information(a: &Partition, b: &Partition) -> Result<f64> {
    let t = ContingencyTable::new(a, b)?;
    let n = t.n as f64;
    let mut mi = 0.0;
    for (row, &nk) in t.counts.iter().zip(&t.row_sums) {
        for (&c, &nl) in row.iter().zip(&t.col_sums) {
            if c > 0 {
                let pkl = c as f64 / n;
                mi += pkl * (pkl / ((nk as f64 / n) * (nl as f64 / n))).ln();
            }
        }
    }
    Ok(mi.max(0.0))
}

/// 2 I / (H + H'); 1 when both partitions are single clusters.
pub fn nmi(a: &Partition, b: &Partition) -> Result<f64> {
    let denom = entropy(a) + entropy(b);
    if denom == 0.0 {
        same_vertices(a, b)?;
        return Ok(1.0);
    }
    Ok((2.0 * mutual_information(a, b)? / denom).min(1.0))
}

/// Literal I / (H + H'), at most 1/2; 1/2 when both are single clusters.
pub fn nmi_raw(a: &Partition, b: &Partition) -> Result<f64> {
    Ok(nmi(a, b)? / 2.0)
}

/// H(truth) − H(truth | estimate).
pub fn information_gain(truth: &Partition, estimate: &Partition) -> Result<f64> {
    Ok(entropy(truth) - conditional_entropy(truth, estimate)?)
}

/// All comparison scores of an estimate against a truth.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct Comparison {
    pub nmi: f64,
    /// H(estimate).
    pub entropy: f64,
    /// H(truth | estimate).
    pub conditional_entropy: f64,
    pub gain: f64,
}

pub fn compare(truth: &Partition, estimate: &Partition, raw_nmi: bool) -> Result<Comparison> {
    Ok(Comparison {
        nmi: if raw_nmi { nmi_raw(truth, estimate)? } else { nmi(truth, estimate)? },
        entropy: entropy(estimate),
        conditional_entropy: conditional_entropy(truth, estimate)?,
        gain: information_gain(truth, estimate)?,
    })
}
