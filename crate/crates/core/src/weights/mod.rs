//! Edge weight (filter) functions.
//!
//! Every function maps each edge of a snapshot to a real weight that
//! orders the filtration:
//!
//! * `native`: the weight stored on the edge
//! * `max-degree`: `max(deg(u), deg(v))`
//! * `ricci`: Ollivier–Ricci curvature with lazy random-walk measures
//! * `hks`: `max(hks(u), hks(v))` from the combinatorial Laplacian

mod ricci;
mod spectral;
mod transport;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

pub use ricci::ricci_curvature;
pub use spectral::{hks, laplacian, symmetric_eigen, SpectralDecomposition};
pub use transport::{wasserstein, DiscreteMeasure};

use crate::error::{Error, Result};
use crate::graph::{EdgeKey, GraphSnapshot};

pub type EdgeWeights = BTreeMap<EdgeKey, f64>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum WeightKind {
    Native,
    MaxDegree,
    Ricci,
    Hks,
}

impl fmt::Display for WeightKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            WeightKind::Native => "native",
            WeightKind::MaxDegree => "max-degree",
            WeightKind::Ricci => "ricci",
            WeightKind::Hks => "hks",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightConfig {
    pub kind: WeightKind,
    pub ricci_alpha: f64,
    pub hks_t: f64,
}

impl Default for WeightConfig {
    fn default() -> Self {
        WeightConfig {
            kind: WeightKind::Native,
            ricci_alpha: 0.5,
            hks_t: 10.0,
        }
    }
}

impl WeightConfig {
    pub fn new(kind: WeightKind) -> Self {
        WeightConfig {
            kind,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.ricci_alpha) {
            return Err(Error::Config(format!(
                "ricci alpha {} outside [0, 1]",
                self.ricci_alpha
            )));
        }
        if !(self.hks_t > 0.0 && self.hks_t.is_finite()) {
            return Err(Error::Config(format!("hks t {} must be positive", self.hks_t)));
        }
        Ok(())
    }
}

/// Assigns a filtration weight to every edge of `g`.
pub fn weigh_edges(g: &GraphSnapshot, cfg: &WeightConfig) -> Result<EdgeWeights> {
    cfg.validate()?;
    match cfg.kind {
        WeightKind::Native => {
            let weights: EdgeWeights = g.edges().iter().map(|e| (e.key(), e.weight)).collect();
            if g.edge_count() > 1 && g.edges().windows(2).all(|w| w[0].weight == w[1].weight) {
                log::debug!("all {} native edge weights are identical", g.edge_count());
            }
            Ok(weights)
        }
        WeightKind::MaxDegree => {
            let deg = g.degrees();
            Ok(g.edges()
                .iter()
                .map(|e| {
                    let (a, b) = g.endpoint_indices(e);
                    (e.key(), deg[a].max(deg[b]) as f64)
                })
                .collect())
        }
        WeightKind::Ricci => ricci::RicciContext::new(g).all_edges(cfg.ricci_alpha),
        WeightKind::Hks => {
            if g.edge_count() == 0 {
                return Ok(EdgeWeights::new());
            }
            let sig = hks(g, cfg.hks_t)?;
            Ok(g.edges().iter().map(|e| (e.key(), sig[&e.u].max(sig[&e.v]))).collect())
        }
    }
}
