//! JSON model configuration.
//!
//! ```json
//! {"p": 1, "alpha": 1.5, "lambda": 1, "b": 0,
//!  "measure": {"type": "pt", "ell": 1, "c": 10}}
//! ```
//! `measure` may also be `{"type": "atoms", "atoms": [{"x": 1, "w": 0.5}]}` or
//! `{"type": "spectral", "atoms": [{"xi": 1, "sigma_w": 1, "q": [{"s": 1, "w": 1}]}]}`.
//! Locations and `b` are numbers in one dimension or arrays.

use super::measure::{Atom, QAtom, RosinskiMeasure, SpectralAtom, SpectralModel};
use super::params::{Model, TsouParams};
use crate::error::{Error, Result};
use crate::power_model::PtParams;
use serde::Deserialize;

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum Vector {
    Scalar(f64),
    Array(Vec<f64>),
}

impl Vector {
    fn into_vec(self) -> Vec<f64> {
        match self {
            Vector::Scalar(v) => vec![v],
            Vector::Array(v) => v,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct AtomConfig {
    x: Vector,
    w: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct QConfig {
    s: f64,
    w: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpectralConfig {
    xi: Vector,
    sigma_w: f64,
    q: Vec<QConfig>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
enum MeasureConfig {
    Pt { ell: f64, c: f64 },
    Atoms { atoms: Vec<AtomConfig> },
    Spectral { atoms: Vec<SpectralConfig> },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelConfig {
    p: f64,
    alpha: f64,
    lambda: f64,
    #[serde(default)]
    b: Option<Vector>,
    measure: MeasureConfig,
}

fn config_err(e: Error) -> Error {
    match e {
        Error::Config(m) => Error::Config(m),
        other => Error::Config(other.to_string()),
    }
}

/// Parses and validates a model configuration.
pub fn parse_config(json: &str) -> Result<TsouParams> {
    let cfg: ModelConfig = serde_json::from_str(json).map_err(|e| Error::Config(e.to_string()))?;
    let model = match cfg.measure {
        MeasureConfig::Pt { ell, c } => {
            if cfg.p != 1.0 {
                return Err(Error::Config("the pt measure requires p = 1".into()));
            }
            Model::Rosinski(PtParams::new(cfg.alpha, ell, c).map_err(config_err)?.measure())
        }
        MeasureConfig::Atoms { atoms } => {
            let atoms: Vec<Atom> = atoms.into_iter().map(|a| Atom { x: a.x.into_vec(), w: a.w }).collect();
            let dim = atoms.first().map_or(1, |a| a.x.len());
            if atoms.is_empty() {
                return Err(Error::Config("atoms list is empty".into()));
            }
            Model::Rosinski(RosinskiMeasure::from_atoms(dim, atoms).map_err(config_err)?)
        }
        MeasureConfig::Spectral { atoms } => {
            let atoms: Vec<SpectralAtom> = atoms
                .into_iter()
                .map(|a| SpectralAtom {
                    xi: a.xi.into_vec(),
                    sigma_w: a.sigma_w,
                    q: a.q.into_iter().map(|q| QAtom { s: q.s, w: q.w }).collect(),
                })
                .collect();
            let dim = atoms.first().map_or(1, |a| a.xi.len());
            Model::Spectral(SpectralModel::new(dim, atoms).map_err(config_err)?)
        }
    };
    let dim = match &model {
        Model::Rosinski(m) => m.dim(),
        Model::Spectral(s) => s.dim,
    };
    let b = match cfg.b {
        None => vec![0.0; dim],
        Some(Vector::Scalar(v)) if dim > 1 => vec![v; dim],
        Some(v) => v.into_vec(),
    };
    TsouParams::new(cfg.p, cfg.alpha, cfg.lambda, b, model).map_err(config_err)
}
