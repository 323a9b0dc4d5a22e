//! K-means over block coordinates with modularity-based restart selection.

use rand::seq::index::sample;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::embedding::{squared_distance, VertexCoordinates};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::metrics::modularity;
use crate::partition::Partition;
use crate::rng;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KmeansConfig {
    pub k: usize,
    pub restarts: usize,
    pub max_iters: usize,
    pub seed: u64,
    /// Relative objective change below which a restart stops.
    pub tol: f64,
}

impl KmeansConfig {
    pub fn new(k: usize) -> Self {
        Self {
            k,
            restarts: 100,
            max_iters: 300,
            seed: 0,
            tol: 1e-9,
        }
    }
}

/// Result of a single restart.
#[derive(Debug, Clone, PartialEq)]
pub struct RestartOutcome {
    pub labels: Vec<usize>,
    /// Row-major k × point_len centroid tensors.
    pub centroids: Vec<f64>,
    pub objective: f64,
    /// Objective after each assignment/update iteration.
    pub history: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Clustering {
    pub partition: Partition,
    pub objective: f64,
    /// Modularity of the selected restart; `None` for edgeless graphs.
    pub modularity: Option<f64>,
    pub restart: usize,
}

/// Σ_i dist(x_i, c_label(i))².
pub fn kmeans_objective(coords: &VertexCoordinates, labels: &[usize], centroids: &[f64]) -> Result<f64> {
    let len = coords.point_len();
    if labels.len() != coords.n() || len == 0 && !centroids.is_empty() || len > 0 && centroids.len() % len != 0 {
        return Err(Error::DimensionMismatch {
            expected: coords.n(),
            got: labels.len(),
        });
    }
    let k = if len == 0 { 0 } else { centroids.len() / len };
    let mut total = 0.0;
    for (i, &l) in labels.iter().enumerate() {
        if l >= k {
            return Err(Error::IndexOutOfRange { index: l, n: k });
        }
        total += squared_distance(coords.point(i).as_slice(), &centroids[l * len..(l + 1) * len]);
    }
    Ok(total)
}

fn validate(coords: &VertexCoordinates, k: usize) -> Result<()> {
    let n = coords.n();
    if k == 0 || k > n {
        return Err(Error::KTooLarge { k, n });
    }
    if k > 1 {
        let first = coords.point(0).as_slice();
        if (1..n).all(|i| coords.point(i).as_slice() == first) {
            return Err(Error::DegenerateCoordinates(k));
        }
    }
    Ok(())
}

/// Lloyd iterations from `k` distinct random vertices.
pub fn kmeans_single(coords: &VertexCoordinates, k: usize, max_iters: usize, tol: f64, rng: &mut rng::Rng) -> Result<RestartOutcome> {
    validate(coords, k)?;
    let n = coords.n();
    let len = coords.point_len();
    let mut centroids = Vec::with_capacity(k * len);
    for i in sample(rng, n, k).into_iter() {
        centroids.extend_from_slice(coords.point(i).as_slice());
    }
    let mut labels = vec![usize::MAX; n];
    let mut dist = vec![0.0; n];
    let mut history = Vec::new();

    for _ in 0..max_iters.max(1) {
        let mut changed = false;
        for i in 0..n {
            let x = coords.point(i).as_slice();
            let (mut best, mut best_d) = (0, f64::INFINITY);
            for c in 0..k {
                let d = squared_distance(x, &centroids[c * len..(c + 1) * len]);
                if d < best_d {
                    best = c;
                    best_d = d;
                }
            }
            changed |= labels[i] != best;
            labels[i] = best;
            dist[i] = best_d;
        }

        // empty clusters take the point farthest from its centroid
        let mut counts = vec![0usize; k];
        labels.iter().for_each(|&l| counts[l] += 1);
        for c in 0..k {
            if counts[c] > 0 {
                continue;
            }
            let far = (0..n)
                .filter(|&i| counts[labels[i]] > 1)
                .fold(None, |acc: Option<usize>, i| match acc {
                    Some(j) if dist[j] >= dist[i] => Some(j),
                    _ => Some(i),
                })
                .expect("k <= n leaves a cluster with two members");
            counts[labels[far]] -= 1;
            labels[far] = c;
            counts[c] = 1;
            dist[far] = 0.0;
            changed = true;
        }

        centroids.iter_mut().for_each(|v| *v = 0.0);
        for (i, &l) in labels.iter().enumerate() {
            let dst = &mut centroids[l * len..(l + 1) * len];
            dst.iter_mut().zip(coords.point(i).as_slice()).for_each(|(d, s)| *d += s);
        }
        for c in 0..k {
            let inv = 1.0 / counts[c] as f64;
            centroids[c * len..(c + 1) * len].iter_mut().for_each(|v| *v *= inv);
        }

        let obj = kmeans_objective(coords, &labels, &centroids)?;
        let prev = history.last().copied();
        history.push(obj);
        if !changed {
            break;
        }
        if let Some(p) = prev {
            if (p - obj).abs() <= tol * p.max(f64::MIN_POSITIVE) {
                break;
            }
        }
    }
    let objective = *history.last().expect("at least one iteration");
    Ok(RestartOutcome {
        labels,
        centroids,
        objective,
        history,
    })
}

/// Run `cfg.restarts` independent restarts and keep the one of maximum
/// modularity on `g` (lowest restart index on ties). Edgeless graphs fall
/// back to minimum objective.
pub fn kmeans_blocks(coords: &VertexCoordinates, g: &Graph, cfg: &KmeansConfig) -> Result<Clustering> {
    validate(coords, cfg.k)?;
    if g.n() != coords.n() {
        return Err(Error::DimensionMismatch {
            expected: coords.n(),
            got: g.n(),
        });
    }
    if cfg.restarts == 0 {
        return Err(Error::InvalidParameter("restarts must be at least 1".into()));
    }
    let outcomes: Vec<(RestartOutcome, Option<f64>)> = (0..cfg.restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = rng::stream(cfg.seed, "kmeans", &[r as u64]);
            let out = kmeans_single(coords, cfg.k, cfg.max_iters, cfg.tol, &mut rng)?;
            let q = if g.ne() > 0 {
                Some(modularity(g, &Partition::new(out.labels.clone(), cfg.k)?)?)
            } else {
                None
            };
            Ok((out, q))
        })
        .collect::<Result<_>>()?;

    let mut best = 0;
    for r in 1..outcomes.len() {
        let better = match (outcomes[r].1, outcomes[best].1) {
            (Some(a), Some(b)) => a > b,
            _ => outcomes[r].0.objective < outcomes[best].0.objective,
        };
        if better {
            best = r;
        }
    }
    let (out, q) = outcomes.into_iter().nth(best).expect("restarts >= 1");
    Ok(Clustering {
        partition: Partition::new(out.labels, cfg.k)?,
        objective: out.objective,
        modularity: q,
        restart: best,
    })
}
