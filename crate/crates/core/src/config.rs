//! Run settings: defaults, overridden by an INI-style file, overridden by flags.

use std::path::Path;

use serde::Serialize;

use crate::amg::{AmgParams, BootstrapConfig, RhoMode, SmootherConfig, SmootherKind};
use crate::clustering::KmeansConfig;
use crate::error::{Error, Result};
use crate::pipeline::EmbedParams;

/// Every tunable of a run. Serialized verbatim into provenance records.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Settings {
    pub seed: u64,
    /// `None` uses the average weighted degree.
    pub lambda: Option<f64>,
    pub attr_weight: f64,
    pub trunc_tol: f64,
    pub target_rho: f64,
    pub rho_mode: RhoMode,
    pub max_components: usize,
    pub smooth_iters: usize,
    pub smoother: String,
    pub jacobi_omega: f64,
    pub smoother_sweeps: usize,
    pub max_levels: usize,
    pub max_coarse_size: usize,
    pub restarts: usize,
    pub max_iters: usize,
    pub kmeans_tol: f64,
}

impl Default for Settings {
    fn default() -> Self {
        let e = EmbedParams::default();
        let b = e.bootstrap;
        let k = KmeansConfig::new(2);
        Self {
            seed: 0,
            lambda: e.lambda,
            attr_weight: e.attr_weight,
            trunc_tol: e.trunc_tol,
            target_rho: b.target_rho,
            rho_mode: b.rho_mode,
            max_components: b.max_components,
            smooth_iters: b.smooth_iters,
            smoother: "gs".into(),
            jacobi_omega: 2.0 / 3.0,
            smoother_sweeps: b.amg.smoother.sweeps,
            max_levels: b.amg.max_levels,
            max_coarse_size: b.amg.max_coarse_size,
            restarts: k.restarts,
            max_iters: k.max_iters,
            kmeans_tol: k.tol,
        }
    }
}

fn parse<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Usage(format!("invalid value {value:?} for {key}")))
}

impl Settings {
    pub const KEYS: &'static [&'static str] = &[
        "seed",
        "lambda",
        "attr_weight",
        "trunc_tol",
        "target_rho",
        "rho_mode",
        "max_components",
        "smooth_iters",
        "smoother",
        "jacobi_omega",
        "smoother_sweeps",
        "max_levels",
        "max_coarse_size",
        "restarts",
        "max_iters",
        "kmeans_tol",
    ];

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let v = value.trim();
        match key {
            "seed" => self.seed = parse(key, v)?,
            "lambda" => self.lambda = if v == "auto" { None } else { Some(parse(key, v)?) },
            "attr_weight" => self.attr_weight = parse(key, v)?,
            "trunc_tol" => self.trunc_tol = parse(key, v)?,
            "target_rho" => self.target_rho = parse(key, v)?,
            "rho_mode" => self.rho_mode = v.parse()?,
            "max_components" => self.max_components = parse(key, v)?,
            "smooth_iters" => self.smooth_iters = parse(key, v)?,
            "smoother" => match v {
                "gs" | "jacobi" => self.smoother = v.to_string(),
                _ => return Err(Error::Usage(format!("smoother must be gs or jacobi, got {v:?}"))),
            },
            "jacobi_omega" => self.jacobi_omega = parse(key, v)?,
            "smoother_sweeps" => self.smoother_sweeps = parse(key, v)?,
            "max_levels" => self.max_levels = parse(key, v)?,
            "max_coarse_size" => self.max_coarse_size = parse(key, v)?,
            "restarts" => self.restarts = parse(key, v)?,
            "max_iters" => self.max_iters = parse(key, v)?,
            "kmeans_tol" => self.kmeans_tol = parse(key, v)?,
            _ => return Err(Error::Usage(format!("unknown setting {key:?}"))),
        }
        Ok(())
    }

    /// Apply `key = value` lines. `#` and `;` start comments and `[section]`
    /// headers are ignored.
    pub fn apply_ini(&mut self, text: &str, origin: &str) -> Result<()> {
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split(['#', ';']).next().unwrap_or("").trim();
            if line.is_empty() || line.starts_with('[') && line.ends_with(']') {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return Err(Error::Parse {
                    path: origin.to_string(),
                    line: idx + 1,
                    msg: format!("expected `key = value`, got {line:?}"),
                });
            };
            self.set(k.trim(), v).map_err(|e| Error::Parse {
                path: origin.to_string(),
                line: idx + 1,
                msg: e.to_string(),
            })?;
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        self.apply_ini(&text, &path.display().to_string())
    }

    pub fn smoother_config(&self) -> Result<SmootherConfig> {
        let mut cfg = if self.smoother == "jacobi" {
            SmootherConfig::jacobi(self.jacobi_omega)?
        } else {
            SmootherConfig {
                kind: SmootherKind::GaussSeidel,
                sweeps: 1,
            }
        };
        if self.smoother_sweeps == 0 {
            return Err(Error::InvalidParameter("smoother_sweeps must be at least 1".into()));
        }
        cfg.sweeps = self.smoother_sweeps;
        Ok(cfg)
    }

    pub fn embed_params(&self) -> Result<EmbedParams> {
        if !(self.attr_weight > 0.0) {
            return Err(Error::InvalidParameter(format!("attr_weight must be positive, got {}", self.attr_weight)));
        }
        Ok(EmbedParams {
            lambda: self.lambda,
            attr_weight: self.attr_weight,
            trunc_tol: self.trunc_tol,
            bootstrap: BootstrapConfig {
                target_rho: self.target_rho,
                rho_mode: self.rho_mode,
                max_components: self.max_components,
                smooth_iters: self.smooth_iters,
                amg: AmgParams {
                    max_levels: self.max_levels,
                    max_coarse_size: self.max_coarse_size,
                    smoother: self.smoother_config()?,
                },
                seed: self.seed,
            },
        })
    }

    pub fn kmeans(&self, k: usize) -> KmeansConfig {
        KmeansConfig {
            k,
            restarts: self.restarts,
            max_iters: self.max_iters,
            seed: self.seed,
            tol: self.kmeans_tol,
        }
    }
}
