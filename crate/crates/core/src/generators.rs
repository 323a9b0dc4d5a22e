//! Planted-partition stochastic block models and label-derived attributes.

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::augment::AttributeTable;
use crate::error::{Error, Result};
use crate::graph::{Edge, Graph};
use crate::partition::Partition;
use crate::rng;

/// Within- and between-group expected degrees from q, c and δ = c_in − c_out.
pub fn split_degrees(q: usize, c: f64, delta: f64) -> Result<(f64, f64)> {
    if q == 0 {
        return Err(Error::InfeasibleDegrees("q must be positive".into()));
    }
    let qf = q as f64;
    let c_in = c + (qf - 1.0) * delta / qf;
    let c_out = c - delta / qf;
    if c_out < 0.0 || delta < 0.0 || c < 0.0 {
        return Err(Error::InfeasibleDegrees(format!(
            "q={q}, c={c}, delta={delta} gives c_in={c_in}, c_out={c_out}"
        )));
    }
    Ok((c_in, c_out))
}

/// Smallest detectable c_in − c_out: q √c.
pub fn detectability_threshold(q: usize, c: f64) -> Result<f64> {
    if q < 2 || !(c > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "threshold needs q >= 2 and c > 0, got q={q}, c={c}"
        )));
    }
    Ok(q as f64 * c.sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SbmSpec {
    pub n: usize,
    pub q: usize,
    pub c: f64,
    pub delta: f64,
    pub seed: u64,
}

impl SbmSpec {
    pub fn degrees(&self) -> Result<(f64, f64)> {
        split_degrees(self.q, self.c, self.delta)
    }

    /// (p_in, p_out) = (c_in / n, c_out / n).
    pub fn probabilities(&self) -> Result<(f64, f64)> {
        if self.n == 0 || self.q == 0 || self.q > self.n {
            return Err(Error::InfeasibleSpec(format!("n={} with q={}", self.n, self.q)));
        }
        let (c_in, c_out) = self.degrees().map_err(|e| Error::InfeasibleSpec(e.to_string()))?;
        let n = self.n as f64;
        let (p_in, p_out) = (c_in / n, c_out / n);
        if p_in > 1.0 {
            return Err(Error::InfeasibleSpec(format!("p_in = {p_in} exceeds 1")));
        }
        Ok((p_in, p_out))
    }
}

/// Equal group sizes with the remainder spread over the first groups.
pub fn planted_labels(n: usize, q: usize) -> Vec<usize> {
    let (base, extra) = (n / q, n % q);
    (0..q)
        .flat_map(|g| std::iter::repeat_n(g, base + usize::from(g < extra)))
        .collect()
}

/// One Bernoulli trial per unordered pair with p_in inside a group and p_out across.
pub fn generate_planted(n: usize, q: usize, p_in: f64, p_out: f64, seed: u64) -> Result<(Graph, Partition)> {
    if q == 0 || q > n {
        return Err(Error::InfeasibleSpec(format!("n={n} with q={q}")));
    }
    if !(0.0..=1.0).contains(&p_in) || !(0.0..=1.0).contains(&p_out) || p_out > p_in {
        return Err(Error::InfeasibleSpec(format!(
            "need 0 <= p_out <= p_in <= 1, got p_in={p_in}, p_out={p_out}"
        )));
    }
    let labels = planted_labels(n, q);
    let mut r = rng::stream(seed, "sbm", &[]);
    let mut edges: Vec<Edge> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let p = if labels[i] == labels[j] { p_in } else { p_out };
            if r.random_bool(p) {
                edges.push((i, j, None));
            }
        }
    }
    let g = Graph::from_edges(n, &edges)?;
    Ok((g, Partition::new(labels, q)?))
}

pub fn generate_sbm(spec: &SbmSpec) -> Result<(Graph, Partition)> {
    let (p_in, p_out) = spec.probabilities()?;
    generate_planted(spec.n, spec.q, p_in, p_out, spec.seed)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    pub level: f64,
    pub seed: u64,
}

/// Single-column table holding each vertex's true cluster id; with
/// probability `noise.level` the value is redrawn uniformly from all q values.
pub fn labels_to_attributes(truth: &Partition, noise: &NoiseSpec, q: usize) -> Result<AttributeTable> {
    if !(0.0..=1.0).contains(&noise.level) {
        return Err(Error::InvalidParameter(format!("noise level {} outside [0, 1]", noise.level)));
    }
    let q = q.max(truth.k());
    let mut r = rng::stream(noise.seed, "attribute-noise", &[]);
    let rows = truth
        .labels()
        .iter()
        .map(|&l| {
            let v = if r.random_bool(noise.level) { r.random_range(0..q) } else { l };
            vec![v.to_string()]
        })
        .collect();
    AttributeTable::from_strings(vec!["label".into()], rows)
}
