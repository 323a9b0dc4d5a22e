use std::sync::Arc;

use super::hierarchy::AmgHierarchy;
use super::smoother::{smooth_in_place, Direction, SmootherConfig};
use crate::error::{Error, Result};
use crate::sparse::CsrMatrix;

/// An approximate inverse `b ↦ B⁻¹ b`.
pub trait Preconditioner {
    fn dim(&self) -> usize;
    fn apply(&self, b: &[f64]) -> Result<Vec<f64>>;
}

/// Symmetric V-cycle: forward pre-smoothing, coarse correction, backward
/// post-smoothing, direct solve on the coarsest level.
pub fn vcycle_apply(h: &AmgHierarchy, b: &[f64], cfg: &SmootherConfig) -> Result<Vec<f64>> {
    if b.len() != h.dim() {
        return Err(Error::DimensionMismatch {
            expected: h.dim(),
            got: b.len(),
        });
    }
    cycle(h, 0, b, cfg)
}

fn cycle(h: &AmgHierarchy, level: usize, b: &[f64], cfg: &SmootherConfig) -> Result<Vec<f64>> {
    let Some(lvl) = h.levels.get(level) else {
        return Ok(h.coarse_solve(b));
    };
    let a = &lvl.a;
    let mut x = vec![0.0; b.len()];
    smooth_in_place(a, &mut x, b, cfg, Direction::Forward)?;
    let ax = a.matvec(&x);
    let r: Vec<f64> = b.iter().zip(&ax).map(|(bi, ai)| bi - ai).collect();
    let xc = cycle(h, level + 1, &lvl.p.restrict(&r), cfg)?;
    lvl.p.prolong_add(&mut x, &xc);
    smooth_in_place(a, &mut x, b, cfg, Direction::Backward)?;
    Ok(x)
}

impl Preconditioner for AmgHierarchy {
    fn dim(&self) -> usize {
        AmgHierarchy::dim(self)
    }

    fn apply(&self, b: &[f64]) -> Result<Vec<f64>> {
        vcycle_apply(self, b, &self.smoother)
    }
}

/// Multiplicative composition of AMG components for one s.p.d. matrix.
#[derive(Debug, Clone)]
pub struct CompositeSolver {
    a: Arc<CsrMatrix>,
    components: Vec<AmgHierarchy>,
    /// Estimated convergence rate after each bootstrap test, in build order.
    pub rho_history: Vec<f64>,
}

impl CompositeSolver {
    pub fn new(a: Arc<CsrMatrix>) -> Self {
        Self {
            a,
            components: Vec::new(),
            rho_history: Vec::new(),
        }
    }

    pub fn matrix(&self) -> &CsrMatrix {
        &self.a
    }

    pub(crate) fn shared_matrix(&self) -> Arc<CsrMatrix> {
        Arc::clone(&self.a)
    }

    pub fn push(&mut self, h: AmgHierarchy) -> Result<()> {
        if h.dim() != self.a.n_rows() {
            return Err(Error::DimensionMismatch {
                expected: self.a.n_rows(),
                got: h.dim(),
            });
        }
        self.components.push(h);
        Ok(())
    }

    pub fn components(&self) -> &[AmgHierarchy] {
        &self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Error propagation of the first `k` components: e ← (I − B_r⁻¹A) e for r = 0..k.
    pub fn error_step_prefix(&self, e: &mut [f64], k: usize) -> Result<()> {
        for h in &self.components[..k] {
            let ae = self.a.matvec(e);
            let corr = h.apply(&ae)?;
            for (ei, ci) in e.iter_mut().zip(&corr) {
                *ei -= ci;
            }
        }
        Ok(())
    }

    /// Like [`Self::apply`] restricted to the first `k` components.
    pub fn apply_prefix(&self, b: &[f64], k: usize) -> Result<Vec<f64>> {
        if k == 0 || self.components.is_empty() {
            return Err(Error::EmptyComposite);
        }
        let mut x = vec![0.0; b.len()];
        for h in &self.components[..k] {
            let ax = self.a.matvec(&x);
            let r: Vec<f64> = b.iter().zip(&ax).map(|(bi, ai)| bi - ai).collect();
            let c = h.apply(&r)?;
            for (xi, ci) in x.iter_mut().zip(&c) {
                *xi += ci;
            }
        }
        Ok(x)
    }
}

impl Preconditioner for CompositeSolver {
    fn dim(&self) -> usize {
        self.a.n_rows()
    }

    fn apply(&self, b: &[f64]) -> Result<Vec<f64>> {
        composite_apply(self, b)
    }
}

/// x ← x + B_r⁻¹(b − A x) for each component in build order, from x = 0.
pub fn composite_apply(c: &CompositeSolver, b: &[f64]) -> Result<Vec<f64>> {
    c.apply_prefix(b, c.len())
}

/// `t` error-propagation steps u ← (I − Op⁻¹A) u on the homogeneous system.
pub fn smooth_vector<P: Preconditioner + ?Sized>(op: &P, a: &CsrMatrix, t: usize, start: &[f64]) -> Result<Vec<f64>> {
    if t == 0 {
        return Err(Error::InvalidParameter("smoothing iteration count must be at least 1".into()));
    }
    if start.len() != a.n_rows() || op.dim() != a.n_rows() {
        return Err(Error::DimensionMismatch {
            expected: a.n_rows(),
            got: start.len(),
        });
    }
    let mut u = start.to_vec();
    for _ in 0..t {
        let au = a.matvec(&u);
        let c = op.apply(&au)?;
        for (ui, ci) in u.iter_mut().zip(&c) {
            *ui -= ci;
        }
    }
    Ok(u)
}
