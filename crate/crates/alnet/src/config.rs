//! JSON run configuration.
//!
//! ```json
//! {
//!   "experiment": "bifurcation",
//!   "topology": {
//!     "bonds": [
//!       {"label": "1", "gamma": 1.0, "kind": "incoming"},
//!       {"label": "11", "gamma": 1.5, "kind": "leaf"},
//!       {"label": "12", "gamma": 3.0, "kind": "leaf"}
//!     ],
//!     "truncation": 400
//!   },
//!   "soliton": {"alpha": 3.9269908169872414, "beta": 0.1, "n0": -150.0, "phi0": 0.0},
//!   "sim": {"dt": 0.01, "t_final": 200.0, "output_stride": 100}
//! }
//! ```
//!
//! Internal bonds also need `"length"`. Every other field is optional.

use std::fmt;
use std::path::{Path, PathBuf};

use alnet_core::experiments::reference_soliton;
use alnet_core::topology::DEFAULT_TRUNCATION;
use alnet_core::{BondKind, BondSpec, GraphTopology, SimConfig, SolitonParams};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    #[default]
    Simulate,
    Bifurcation,
    Sweep,
    BrokenRule,
    ConservedAudit,
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Experiment::Simulate => "simulate",
            Experiment::Bifurcation => "bifurcation",
            Experiment::Sweep => "sweep",
            Experiment::BrokenRule => "broken-rule",
            Experiment::ConservedAudit => "conserved-audit",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BondKindDoc {
    Incoming,
    Internal,
    Leaf,
}

impl From<BondKindDoc> for BondKind {
    fn from(k: BondKindDoc) -> Self {
        match k {
            BondKindDoc::Incoming => BondKind::Incoming,
            BondKindDoc::Internal => BondKind::Internal,
            BondKindDoc::Leaf => BondKind::Leaf,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BondDoc {
    pub label: String,
    pub gamma: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub length: Option<usize>,
    pub kind: BondKindDoc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TopologyDoc {
    pub bonds: Vec<BondDoc>,
    #[serde(default = "default_truncation")]
    pub truncation: usize,
}

fn default_truncation() -> usize {
    DEFAULT_TRUNCATION
}

impl TopologyDoc {
    pub fn build(&self) -> Result<GraphTopology, CliError> {
        let mut specs = Vec::with_capacity(self.bonds.len());
        for b in &self.bonds {
            let length = match (b.kind, b.length) {
                (BondKindDoc::Internal, Some(l)) => l,
                (BondKindDoc::Internal, None) => {
                    return Err(CliError::Config(format!(
                        "internal bond `{}` needs a length",
                        b.label
                    )))
                }
                (_, l) => l.unwrap_or(self.truncation),
            };
            specs.push(BondSpec::new(
                b.label.clone(),
                b.kind.into(),
                b.gamma,
                length,
            ));
        }
        Ok(GraphTopology::from_bonds(&specs, self.truncation)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolitonDoc {
    pub alpha: f64,
    pub beta: f64,
    pub n0: f64,
    pub phi0: f64,
}

impl Default for SolitonDoc {
    fn default() -> Self {
        let p = reference_soliton();
        SolitonDoc {
            alpha: p.alpha,
            beta: p.beta,
            n0: p.n0,
            phi0: p.phi0,
        }
    }
}

impl SolitonDoc {
    pub fn params(&self) -> Result<SolitonParams, CliError> {
        Ok(SolitonParams::new(
            self.alpha, self.beta, self.n0, self.phi0,
        )?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimDoc {
    pub dt: f64,
    pub t_final: f64,
    pub output_stride: usize,
}

impl Default for SimDoc {
    fn default() -> Self {
        let d = SimConfig::default();
        SimDoc {
            dt: d.dt,
            t_final: d.t_final,
            output_stride: d.output_stride,
        }
    }
}

impl SimDoc {
    pub fn config(&self) -> Result<SimConfig, CliError> {
        Ok(SimConfig::new(self.dt, self.t_final, self.output_stride)?)
    }
}

/// Grid for the `sweep` experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepDoc {
    /// Values of `gamma1 / gamma2`, each in `(0, 1)`.
    pub ratios: Vec<f64>,
}

impl Default for SweepDoc {
    fn default() -> Self {
        SweepDoc {
            ratios: (1..10).map(|k| k as f64 / 10.0).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub experiment: Experiment,
    pub topology: TopologyDoc,
    #[serde(default)]
    pub soliton: SolitonDoc,
    #[serde(default)]
    pub sim: SimDoc,
    #[serde(default = "default_out_dir")]
    pub out_dir: PathBuf,
    #[serde(default = "default_m_max")]
    pub m_max: usize,
    /// Times at which full field snapshots are written. Each is matched to
    /// the nearest recorded time.
    #[serde(default)]
    pub snapshot_times: Vec<f64>,
    #[serde(default)]
    pub sweep: SweepDoc,
    /// Reserved; no part of a run is random.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

fn default_out_dir() -> PathBuf {
    PathBuf::from("out")
}

fn default_m_max() -> usize {
    3
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let cfg: RunConfig =
            serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::from_json(&text).map_err(|e| match e {
            CliError::Config(msg) => CliError::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Checks every field that can be checked without running.
    pub fn validate(&self) -> Result<(), CliError> {
        self.topology.build()?;
        self.soliton.params()?;
        self.sim.config()?;
        if self.m_max < 2 {
            return Err(CliError::Config(format!(
                "m_max must be at least 2, got {}",
                self.m_max
            )));
        }
        if let Some(t) = self.snapshot_times.iter().find(|t| !t.is_finite()) {
            return Err(CliError::Config(format!("snapshot time {t} is not finite")));
        }
        Ok(())
    }
}
