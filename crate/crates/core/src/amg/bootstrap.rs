use std::sync::Arc;

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use super::cycle::CompositeSolver;
use super::hierarchy::{build_hierarchy_shared, AmgParams};
use crate::error::{Error, Result};
use crate::rng;
use crate::sparse::{norm2, CsrMatrix};

/// How the target convergence factor is compared against the estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RhoMode {
    /// Target bounds ρ̂^t, the total reduction over one test run.
    Total,
    /// Target bounds ρ̂ itself.
    PerStep,
}

impl std::str::FromStr for RhoMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "total" => Ok(Self::Total),
            "per_step" => Ok(Self::PerStep),
            _ => Err(Error::Usage(format!("rho_mode must be total or per_step, got {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BootstrapConfig {
    pub target_rho: f64,
    pub rho_mode: RhoMode,
    pub max_components: usize,
    /// Error-propagation steps per test vector.
    pub smooth_iters: usize,
    pub amg: AmgParams,
    pub seed: u64,
}

impl Default for BootstrapConfig {
    fn default() -> Self {
        Self {
            target_rho: 1e-8,
            rho_mode: RhoMode::PerStep,
            max_components: 40,
            smooth_iters: 15,
            amg: AmgParams::default(),
            seed: 0,
        }
    }
}

/// Smooth vectors harvested by the bootstrap, before orthogonalization.
#[derive(Debug, Clone, PartialEq)]
pub struct SmoothVectorSet {
    pub vectors: Vec<Vec<f64>>,
    pub iterations: usize,
}

impl SmoothVectorSet {
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.vectors.first().map_or(0, Vec::len)
    }
}

fn test_vector(n: usize, seed: u64, index: usize) -> Vec<f64> {
    let mut r = rng::stream(seed, "bootstrap", &[index as u64]);
    let mut v: Vec<f64> = (0..n).map(|_| r.random_range(-1.0..1.0)).collect();
    let mean = v.iter().sum::<f64>() / n as f64;
    v.iter_mut().for_each(|x| *x -= mean);
    v
}

fn checked_energy(a: &CsrMatrix, v: &[f64]) -> Result<f64> {
    let q = a.quadratic_form(v);
    let scale = norm2(v).powi(2) * a.diagonal().iter().cloned().fold(0.0, f64::max);
    if q < -1e-12 * scale || !q.is_finite() {
        return Err(Error::NotSpd(q));
    }
    Ok(q.max(0.0).sqrt())
}

/// Build the composite solver, one component per harvested smooth vector.
///
/// Component 0 is driven by the all-ones vector. Each further step runs the
/// current composite on a random vector, records the observed rate, and stops
/// once the target is met or the component cap is reached.
pub fn bootstrap(l_s: &CsrMatrix, cfg: &BootstrapConfig) -> Result<(CompositeSolver, SmoothVectorSet)> {
    bootstrap_shared(Arc::new(l_s.clone()), cfg)
}

pub fn bootstrap_shared(a: Arc<CsrMatrix>, cfg: &BootstrapConfig) -> Result<(CompositeSolver, SmoothVectorSet)> {
    if !(cfg.target_rho > 0.0 && cfg.target_rho < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "target_rho must lie in (0, 1), got {}",
            cfg.target_rho
        )));
    }
    if cfg.max_components == 0 || cfg.smooth_iters == 0 {
        return Err(Error::InvalidParameter(
            "max_components and smooth_iters must be at least 1".into(),
        ));
    }
    let n = a.n_rows();
    let t = cfg.smooth_iters;
    let ones = vec![1.0; n];
    checked_energy(&a, &ones)?;
    let mut solver = CompositeSolver::new(Arc::clone(&a));
    solver.push(build_hierarchy_shared(Arc::clone(&a), &ones, &cfg.amg)?)?;
    let mut vectors = vec![ones];

    loop {
        let u0 = test_vector(n, cfg.seed, solver.len());
        let norm0 = checked_energy(&a, &u0)?;
        let mut u = u0;
        for _ in 0..t {
            solver.error_step_prefix(&mut u, solver.len())?;
        }
        let norm_t = checked_energy(&a, &u)?;
        let rho = if norm0 == 0.0 {
            0.0
        } else {
            (norm_t / norm0).powf(1.0 / t as f64)
        };
        solver.rho_history.push(rho);

        let reached = match cfg.rho_mode {
            RhoMode::PerStep => rho <= cfg.target_rho,
            RhoMode::Total => rho.powi(t as i32) <= cfg.target_rho,
        };
        if reached || solver.len() >= cfg.max_components {
            break;
        }
        let scale = norm2(&u);
        u.iter_mut().for_each(|x| *x /= scale);
        solver.push(build_hierarchy_shared(solver.shared_matrix(), &u, &cfg.amg)?)?;
        vectors.push(u);
    }

    Ok((solver, SmoothVectorSet { vectors, iterations: t }))
}
