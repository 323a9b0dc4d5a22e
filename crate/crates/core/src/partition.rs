use std::collections::HashMap;

use crate::error::{Error, Result};

/// Cluster label per structure vertex, labels in `0..k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    labels: Vec<usize>,
    k: usize,
}

impl Partition {
    /// Labels must lie in `0..k`; clusters may be empty.
    pub fn new(labels: Vec<usize>, k: usize) -> Result<Self> {
        if let Some(&bad) = labels.iter().find(|&&l| l >= k) {
            return Err(Error::InvalidParameter(format!("label {bad} is not below K = {k}")));
        }
        Ok(Self { labels, k })
    }

    /// Renumber arbitrary labels to `0..K` in first-appearance order.
    pub fn from_labels<T: std::hash::Hash + Eq + Clone>(raw: &[T]) -> Self {
        let mut ids: HashMap<T, usize> = HashMap::new();
        let labels = raw
            .iter()
            .map(|l| {
                let next = ids.len();
                *ids.entry(l.clone()).or_insert(next)
            })
            .collect();
        Self { labels, k: ids.len() }
    }

    pub fn single_cluster(n: usize) -> Self {
        Self {
            labels: vec![0; n],
            k: usize::from(n > 0),
        }
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut s = vec![0; self.k];
        for &l in &self.labels {
            s[l] += 1;
        }
        s
    }

    /// Labels restricted to `vertices`, renumbered.
    pub fn restrict(&self, vertices: &[usize]) -> Self {
        let sub: Vec<usize> = vertices.iter().map(|&v| self.labels[v]).collect();
        Self::from_labels(&sub)
    }
}
