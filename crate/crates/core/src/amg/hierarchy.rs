use std::sync::Arc;

use nalgebra::{DMatrix, DVector, Dyn, LU};
use serde::{Deserialize, Serialize};

use super::smoother::SmootherConfig;
use crate::error::{Error, Result};
use crate::sparse::CsrMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AmgParams {
    /// Total number of levels including the coarsest.
    pub max_levels: usize,
    pub max_coarse_size: usize,
    pub smoother: SmootherConfig,
}

impl Default for AmgParams {
    fn default() -> Self {
        Self {
            max_levels: 20,
            max_coarse_size: 40,
            smoother: SmootherConfig::default(),
        }
    }
}

/// Unsmoothed aggregation prolongator from pairwise matching.
///
/// Every fine row has exactly one nonzero, so each column (aggregate) holds
/// one entry for a singleton or two for a matched pair.
#[derive(Debug, Clone, PartialEq)]
pub struct Prolongator {
    aggregate: Vec<usize>,
    weight: Vec<f64>,
    n_coarse: usize,
}

impl Prolongator {
    pub fn n_fine(&self) -> usize {
        self.aggregate.len()
    }

    pub fn n_coarse(&self) -> usize {
        self.n_coarse
    }

    pub fn aggregate_of(&self, i: usize) -> usize {
        self.aggregate[i]
    }

    /// Pᵀ r
    pub fn restrict(&self, r: &[f64]) -> Vec<f64> {
        let mut rc = vec![0.0; self.n_coarse];
        for ((&a, &w), &ri) in self.aggregate.iter().zip(&self.weight).zip(r) {
            rc[a] += w * ri;
        }
        rc
    }

    /// x += P xc
    pub fn prolong_add(&self, x: &mut [f64], xc: &[f64]) {
        for ((xi, &a), &w) in x.iter_mut().zip(&self.aggregate).zip(&self.weight) {
            *xi += w * xc[a];
        }
    }

    /// Pᵀ A P
    pub fn galerkin(&self, a: &CsrMatrix) -> CsrMatrix {
        let mut t = Vec::with_capacity(a.nnz());
        for i in 0..a.n_rows() {
            let (cols, vals) = a.row(i);
            let (ai, wi) = (self.aggregate[i], self.weight[i]);
            for (&j, &v) in cols.iter().zip(vals) {
                t.push((ai, self.aggregate[j], wi * v * self.weight[j]));
            }
        }
        CsrMatrix::from_triplets(self.n_coarse, self.n_coarse, &t)
    }

    pub fn to_csr(&self) -> CsrMatrix {
        let t: Vec<_> = (0..self.n_fine())
            .map(|i| (i, self.aggregate[i], self.weight[i]))
            .collect();
        CsrMatrix::from_triplets(self.n_fine(), self.n_coarse, &t)
    }
}

/// Matching weight 1 − 2 a_ij u_i u_j / (a_ii u_i² + a_jj u_j²).
#[inline]
pub fn matching_weight(a_ij: f64, a_ii: f64, a_jj: f64, u_i: f64, u_j: f64) -> f64 {
    let denom = a_ii * u_i * u_i + a_jj * u_j * u_j;
    if denom == 0.0 {
        1.0
    } else {
        1.0 - 2.0 * a_ij * u_i * u_j / denom
    }
}

/// Greedy maximal matching on descending weights, then pairwise aggregation
/// whose columns reproduce `u` on each aggregate.
pub fn pairwise_aggregation(a: &CsrMatrix, u: &[f64]) -> Prolongator {
    let n = a.n_rows();
    let diag = a.diagonal();
    let mut cand = Vec::with_capacity(a.nnz() / 2);
    for i in 0..n {
        let (cols, vals) = a.row(i);
        for (&j, &v) in cols.iter().zip(vals) {
            if j <= i || v.abs() <= 1e-14 * (diag[i] * diag[j]).abs().sqrt() {
                continue;
            }
            cand.push((matching_weight(v, diag[i], diag[j], u[i], u[j]), i, j));
        }
    }
    cand.sort_by(|x, y| y.0.total_cmp(&x.0).then((x.1, x.2).cmp(&(y.1, y.2))));

    let mut mate = vec![usize::MAX; n];
    for &(_, i, j) in &cand {
        if mate[i] == usize::MAX && mate[j] == usize::MAX {
            mate[i] = j;
            mate[j] = i;
        }
    }

    let mut aggregate = vec![usize::MAX; n];
    let mut weight = vec![0.0; n];
    let mut n_coarse = 0;
    for i in 0..n {
        if aggregate[i] != usize::MAX {
            continue;
        }
        match mate[i] {
            usize::MAX => {
                aggregate[i] = n_coarse;
                weight[i] = if u[i] == 0.0 { 1.0 } else { u[i].signum() };
            }
            j => {
                let norm = u[i].hypot(u[j]);
                let (wi, wj) = if norm == 0.0 {
                    (std::f64::consts::FRAC_1_SQRT_2, std::f64::consts::FRAC_1_SQRT_2)
                } else {
                    (u[i] / norm, u[j] / norm)
                };
                aggregate[i] = n_coarse;
                aggregate[j] = n_coarse;
                weight[i] = wi;
                weight[j] = wj;
            }
        }
        n_coarse += 1;
    }
    Prolongator {
        aggregate,
        weight,
        n_coarse,
    }
}

#[derive(Debug, Clone)]
pub struct Level {
    pub a: Arc<CsrMatrix>,
    pub p: Prolongator,
}

/// Multilevel hierarchy driven by one smooth vector.
#[derive(Debug, Clone)]
pub struct AmgHierarchy {
    pub levels: Vec<Level>,
    coarsest: Arc<CsrMatrix>,
    lu: LU<f64, Dyn, Dyn>,
    pub smoother: SmootherConfig,
}

impl AmgHierarchy {
    /// Number of levels including the coarsest.
    pub fn n_levels(&self) -> usize {
        self.levels.len() + 1
    }

    pub fn dim(&self) -> usize {
        self.levels.first().map_or(self.coarsest.n_rows(), |l| l.a.n_rows())
    }

    pub fn coarsest(&self) -> &CsrMatrix {
        &self.coarsest
    }

    /// Matrix at level `l` (0 = finest).
    pub fn matrix(&self, l: usize) -> &CsrMatrix {
        if l < self.levels.len() {
            &self.levels[l].a
        } else {
            &self.coarsest
        }
    }

    pub fn level_sizes(&self) -> Vec<usize> {
        (0..self.n_levels()).map(|l| self.matrix(l).n_rows()).collect()
    }

    pub(crate) fn coarse_solve(&self, b: &[f64]) -> Vec<f64> {
        let x = self
            .lu
            .solve(&DVector::from_column_slice(b))
            .expect("coarsest factorization checked at setup");
        x.as_slice().to_vec()
    }

    /// Operator complexity Σ nnz(A_l) / nnz(A_0).
    pub fn operator_complexity(&self) -> f64 {
        let total: usize = (0..self.n_levels()).map(|l| self.matrix(l).nnz()).sum();
        total as f64 / self.matrix(0).nnz() as f64
    }
}

pub fn build_hierarchy(a: &CsrMatrix, u: &[f64], params: &AmgParams) -> Result<AmgHierarchy> {
    build_hierarchy_shared(Arc::new(a.clone()), u, params)
}

/// Same as [`build_hierarchy`], sharing the finest matrix with the caller.
pub fn build_hierarchy_shared(a: Arc<CsrMatrix>, u: &[f64], params: &AmgParams) -> Result<AmgHierarchy> {
    if u.len() != a.n_rows() {
        return Err(Error::DimensionMismatch {
            expected: a.n_rows(),
            got: u.len(),
        });
    }
    if params.max_levels == 0 {
        return Err(Error::InvalidParameter("max_levels must be at least 1".into()));
    }
    let mut levels = Vec::new();
    let mut a = a;
    let mut u = u.to_vec();
    while levels.len() + 1 < params.max_levels && a.n_rows() > params.max_coarse_size {
        let p = pairwise_aggregation(&a, &u);
        if p.n_coarse() == a.n_rows() {
            break;
        }
        let ac = Arc::new(p.galerkin(&a));
        let uc = p.restrict(&u);
        levels.push(Level { a, p });
        a = ac;
        u = uc;
    }
    let n = a.n_rows();
    let dense = DMatrix::from_fn(n, n, |i, j| a.get(i, j));
    let lu = dense.lu();
    let diag: Vec<f64> = lu.u().diagonal().iter().map(|d| d.abs()).collect();
    let dmax = diag.iter().cloned().fold(0.0, f64::max);
    let dmin = diag.iter().cloned().fold(f64::INFINITY, f64::min);
    if n == 0 || !(dmin > 1e-13 * dmax) {
        return Err(Error::SingularCoarsest);
    }
    Ok(AmgHierarchy {
        levels,
        coarsest: a,
        lu,
        smoother: params.smoother,
    })
}
