use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sparse::CsrMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SmootherKind {
    GaussSeidel,
    Jacobi { omega: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Backward,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SmootherConfig {
    pub kind: SmootherKind,
    pub sweeps: usize,
}

impl Default for SmootherConfig {
    fn default() -> Self {
        Self {
            kind: SmootherKind::GaussSeidel,
            sweeps: 1,
        }
    }
}

impl SmootherConfig {
    pub fn jacobi(omega: f64) -> Result<Self> {
        if !(omega > 0.0 && omega <= 1.0) {
            return Err(Error::InvalidParameter(format!("Jacobi weight must be in (0, 1], got {omega}")));
        }
        Ok(Self {
            kind: SmootherKind::Jacobi { omega },
            sweeps: 1,
        })
    }
}

/// Relax `A x = b` in place for `cfg.sweeps` sweeps.
///
/// Gauss-Seidel runs in increasing row order for [`Direction::Forward`] and
/// decreasing order for [`Direction::Backward`]; Jacobi ignores direction.
pub fn smooth_in_place(a: &CsrMatrix, x: &mut [f64], b: &[f64], cfg: &SmootherConfig, dir: Direction) -> Result<()> {
    let n = a.n_rows();
    if x.len() != n || b.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: x.len().min(b.len()),
        });
    }
    match cfg.kind {
        SmootherKind::GaussSeidel => {
            for _ in 0..cfg.sweeps {
                let mut relax = |i: usize| -> Result<()> {
                    let (cols, vals) = a.row(i);
                    let mut diag = 0.0;
                    let mut s = b[i];
                    for (&j, &v) in cols.iter().zip(vals) {
                        if j == i {
                            diag = v;
                        } else {
                            s -= v * x[j];
                        }
                    }
                    if !(diag > 0.0) {
                        return Err(Error::ZeroDiagonal(i));
                    }
                    x[i] = s / diag;
                    Ok(())
                };
                match dir {
                    Direction::Forward => (0..n).try_for_each(&mut relax)?,
                    Direction::Backward => (0..n).rev().try_for_each(&mut relax)?,
                }
            }
        }
        SmootherKind::Jacobi { omega } => {
            let diag = a.diagonal();
            if let Some(i) = diag.iter().position(|&d| !(d > 0.0)) {
                return Err(Error::ZeroDiagonal(i));
            }
            let mut ax = vec![0.0; n];
            for _ in 0..cfg.sweeps {
                a.matvec_into(x, &mut ax);
                for i in 0..n {
                    x[i] += omega * (b[i] - ax[i]) / diag[i];
                }
            }
        }
    }
    Ok(())
}

/// One smoothing application returning the relaxed iterate.
pub fn smoother_apply(a: &CsrMatrix, x: &[f64], b: &[f64], cfg: &SmootherConfig, dir: Direction) -> Result<Vec<f64>> {
    let mut out = x.to_vec();
    smooth_in_place(a, &mut out, b, cfg, dir)?;
    Ok(out)
}
