//! Result files. Every float is written with 17 significant digits in CSV
//! files and as its shortest exact representation in JSON, so output
//! round-trips bit for bit.

use std::fs;
use std::path::{Path, PathBuf};

use alnet_core::conserved::DriftAudit;
use alnet_core::{Complex64, FieldState, GraphTopology};
use serde::Serialize;

use crate::config::RunConfig;
use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransmissionEntry {
    pub bond: String,
    pub measured: f64,
    pub predicted: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BondVelocity {
    pub bond: String,
    pub velocity: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VelocitySummary {
    pub analytic: f64,
    pub incident: Option<f64>,
    pub reflected: Option<f64>,
    pub transmitted: Vec<BondVelocity>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepEntry {
    pub ratio: f64,
    pub gamma2: f64,
    pub gamma3: f64,
    pub t2: f64,
    pub t3: f64,
    pub predicted_t2: f64,
    pub predicted_t3: f64,
    pub reflection: f64,
    pub unitarity_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DriftSummary {
    pub norm: f64,
    pub z: f64,
    pub energy: f64,
    pub current: f64,
    /// Drift of `C_2, C_3, ...`.
    pub charges: Vec<f64>,
}

/// Scalar results of a run; absent fields are omitted from `summary.json`.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Summary {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub experiment: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub final_time: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub total_norm: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub norm_drift: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reflection: Option<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub transmissions: Vec<TransmissionEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unitarity_residual: Option<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub sum_rule_residuals: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub velocities: Option<VelocitySummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radiation_fraction: Option<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub sweep: Vec<SweepEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub drifts: Option<DriftSummary>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PartialNormSeries {
    pub labels: Vec<String>,
    pub times: Vec<f64>,
    /// One row per time, one column per bond.
    pub norms: Vec<Vec<f64>>,
}

/// Field on every site at one time.
#[derive(Debug, Clone, PartialEq)]
pub struct SnapshotTable {
    pub time: f64,
    /// `(bond label, lattice site, amplitude)`.
    pub rows: Vec<(String, i64, Complex64)>,
}

impl SnapshotTable {
    pub fn from_state(state: &FieldState, topology: &GraphTopology) -> Self {
        let mut rows = Vec::with_capacity(topology.site_count());
        for (b, bond) in topology.bonds().iter().enumerate() {
            for (i, z) in state.bond(b).iter().enumerate() {
                rows.push((bond.label().to_string(), topology.lattice_site(b, i), *z));
            }
        }
        SnapshotTable {
            time: state.time,
            rows,
        }
    }

    pub fn file_name(&self) -> String {
        format!("t_{:.4}.csv", self.time)
    }
}

/// Everything a run hands to [`write_outputs`].
#[derive(Debug, Clone, Default)]
pub struct Report {
    pub config: Option<RunConfig>,
    pub summary: Summary,
    pub partial_norms: Option<PartialNormSeries>,
    pub drift: Option<DriftAudit>,
    pub snapshots: Vec<SnapshotTable>,
}

/// Paths written by [`write_outputs`], in write order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Manifest {
    pub files: Vec<PathBuf>,
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn create_dir(path: &Path) -> Result<(), CliError> {
    fs::create_dir_all(path).map_err(|e| CliError::io(path, e))
}

fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

fn write_csv(path: &Path, header: &[String], rows: &[Vec<String>]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_path(path).map_err(|e| CliError::csv(path, e))?;
    w.write_record(header).map_err(|e| CliError::csv(path, e))?;
    for r in rows {
        w.write_record(r).map_err(|e| CliError::csv(path, e))?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

fn partial_norm_rows(p: &PartialNormSeries) -> (Vec<String>, Vec<Vec<String>>) {
    let mut header = vec!["time".to_string(), "total".to_string()];
    header.extend(p.labels.iter().map(|l| format!("norm_{l}")));
    header.extend(p.labels.iter().map(|l| format!("fraction_{l}")));
    let rows = p
        .times
        .iter()
        .zip(&p.norms)
        .map(|(t, row)| {
            let total: f64 = row.iter().sum();
            let mut out = vec![num(*t), num(total)];
            out.extend(row.iter().map(|&n| num(n)));
            out.extend(
                row.iter()
                    .map(|&n| num(if total > 0.0 { n / total } else { 0.0 })),
            );
            out
        })
        .collect();
    (header, rows)
}

fn drift_rows(audit: &DriftAudit) -> (Vec<String>, Vec<Vec<String>>) {
    let mut header: Vec<String> = ["time", "N", "ReZ", "ImZ", "E", "J"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let charges = audit.snapshots.first().map_or(0, |s| s.charges.len());
    for m in 2..2 + charges {
        header.push(format!("ReC{m}"));
        header.push(format!("ImC{m}"));
    }
    let rows = audit
        .snapshots
        .iter()
        .map(|s| {
            let mut r = vec![
                num(s.time),
                num(s.norm),
                num(s.z.re),
                num(s.z.im),
                num(s.energy),
                num(s.current),
            ];
            for c in &s.charges {
                r.push(num(c.re));
                r.push(num(c.im));
            }
            r
        })
        .collect();
    (header, rows)
}

/// Writes the report under `dir`: `summary.json` always, plus
/// `config.json`, `partial_norms.csv`, `drift.csv` and
/// `snapshots/t_<time>.csv` when the report holds the data.
pub fn write_outputs(report: &Report, dir: &Path) -> Result<Manifest, CliError> {
    create_dir(dir)?;
    let mut manifest = Manifest::default();

    let path = dir.join("summary.json");
    let json = serde_json::to_string_pretty(&report.summary).expect("summary serializes");
    write_text(&path, &(json + "\n"))?;
    manifest.files.push(path);

    if let Some(cfg) = &report.config {
        let path = dir.join("config.json");
        write_text(&path, &(cfg.to_json() + "\n"))?;
        manifest.files.push(path);
    }

    if let Some(p) = &report.partial_norms {
        let path = dir.join("partial_norms.csv");
        let (header, rows) = partial_norm_rows(p);
        write_csv(&path, &header, &rows)?;
        manifest.files.push(path);
    }

    if let Some(audit) = &report.drift {
        let path = dir.join("drift.csv");
        let (header, rows) = drift_rows(audit);
        write_csv(&path, &header, &rows)?;
        manifest.files.push(path);
    }

    if !report.snapshots.is_empty() {
        let sub = dir.join("snapshots");
        create_dir(&sub)?;
        let header: Vec<String> = ["bond_label", "paper_site_index", "re", "im"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        for snap in &report.snapshots {
            let path = sub.join(snap.file_name());
            let rows: Vec<Vec<String>> = snap
                .rows
                .iter()
                .map(|(label, site, z)| vec![label.clone(), site.to_string(), num(z.re), num(z.im)])
                .collect();
            write_csv(&path, &header, &rows)?;
            manifest.files.push(path);
        }
    }
    Ok(manifest)
}
