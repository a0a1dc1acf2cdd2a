//! Runs the experiment a configuration selects and assembles its report.

use alnet_core::conserved::{drift_audit, norm, DriftAudit};
use alnet_core::experiments::{
    run_bifurcation, run_broken_rule, simulate, sweep_point, sweep_topology, ScenarioRun, SweepRow,
    TransmissionReport,
};
use alnet_core::{coupling_coefficients, GraphTopology, SimConfig, SolitonParams, Trajectory};
use rayon::prelude::*;

use crate::config::{Experiment, RunConfig};
use crate::error::CliError;
use crate::output::{
    BondVelocity, DriftSummary, PartialNormSeries, Report, SnapshotTable, Summary, SweepEntry,
    TransmissionEntry, VelocitySummary,
};

/// Runs `config.experiment`.
pub fn execute(config: &RunConfig) -> Result<Report, CliError> {
    config.validate()?;
    let topology = config.topology.build()?;
    let soliton = config.soliton.params()?;
    let sim = config.sim.config()?;

    let mut report = match config.experiment {
        Experiment::Simulate => trajectory_report(config, &topology, &soliton, &sim, false)?,
        Experiment::ConservedAudit => trajectory_report(config, &topology, &soliton, &sim, true)?,
        Experiment::Bifurcation => {
            let run = run_bifurcation(&topology, &soliton, &sim)?;
            scenario_report(config, &topology, &run)
        }
        Experiment::BrokenRule => {
            let b = run_broken_rule(&topology, &soliton, &sim)?;
            let mut report = scenario_report(config, &topology, &b.run);
            let label = |i: usize| topology.bond(i).label().to_string();
            report.summary.velocities = Some(VelocitySummary {
                analytic: soliton.velocity(),
                incident: b.peaks.incident.velocity,
                reflected: b.peaks.reflected.velocity,
                transmitted: b
                    .peaks
                    .transmitted
                    .iter()
                    .map(|p| BondVelocity {
                        bond: label(p.bond),
                        velocity: p.velocity,
                    })
                    .collect(),
            });
            report.summary.radiation_fraction = Some(b.radiation_fraction);
            report
        }
        Experiment::Sweep => {
            let gamma1 = topology.bond(topology.root()).gamma();
            let rows = parallel_sweep(
                &config.sweep.ratios,
                gamma1,
                config.topology.truncation,
                &soliton,
                &sim,
            )?;
            Report {
                summary: Summary {
                    sweep: rows.iter().map(sweep_entry).collect(),
                    ..Summary::default()
                },
                ..Report::default()
            }
        }
    };
    report.summary.experiment = Some(config.experiment.to_string());
    report.config = Some(config.clone());
    Ok(report)
}

/// Sweep with one task per grid point. Rows keep grid order and do not
/// depend on the thread count.
pub fn parallel_sweep(
    ratios: &[f64],
    gamma1: f64,
    truncation: usize,
    soliton: &SolitonParams,
    sim: &SimConfig,
) -> Result<Vec<SweepRow>, CliError> {
    for &r in ratios {
        sweep_topology(r, gamma1, 2)?;
    }
    let rows = ratios
        .par_iter()
        .map(|&r| sweep_point(r, gamma1, truncation, soliton, sim))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(rows)
}

fn sweep_entry(r: &SweepRow) -> SweepEntry {
    SweepEntry {
        ratio: r.ratio,
        gamma2: r.gamma2,
        gamma3: r.gamma3,
        t2: r.t2,
        t3: r.t3,
        predicted_t2: r.predicted_t2,
        predicted_t3: r.predicted_t3,
        reflection: r.reflection,
        unitarity_residual: r.unitarity_residual,
    }
}

fn drift_summary(audit: &DriftAudit) -> DriftSummary {
    let d = &audit.drifts;
    DriftSummary {
        norm: d.norm,
        z: d.z,
        energy: d.energy,
        current: d.current,
        charges: d.charges.clone(),
    }
}

fn selected_snapshots(
    config: &RunConfig,
    topology: &GraphTopology,
    trajectory: &Trajectory,
) -> Vec<SnapshotTable> {
    let mut picked: Vec<usize> = config
        .snapshot_times
        .iter()
        .filter_map(|&t| {
            trajectory
                .snapshots
                .iter()
                .enumerate()
                .min_by(|a, b| (a.1.time - t).abs().total_cmp(&(b.1.time - t).abs()))
                .map(|(i, _)| i)
        })
        .collect();
    picked.sort_unstable();
    picked.dedup();
    picked
        .into_iter()
        .map(|i| SnapshotTable::from_state(&trajectory.snapshots[i], topology))
        .collect()
}

fn partial_series(topology: &GraphTopology, trajectory: &Trajectory) -> PartialNormSeries {
    PartialNormSeries {
        labels: topology.bonds().iter().map(|b| b.label().into()).collect(),
        times: trajectory.times().collect(),
        norms: trajectory
            .snapshots
            .iter()
            .map(|s| alnet_core::partial_norms(s, topology))
            .collect(),
    }
}

fn trajectory_report(
    config: &RunConfig,
    topology: &GraphTopology,
    soliton: &SolitonParams,
    sim: &SimConfig,
    audit: bool,
) -> Result<Report, CliError> {
    let trajectory = simulate(topology, soliton, sim)?;
    let n0 = trajectory
        .snapshots
        .first()
        .map_or(0.0, |s| norm(s, topology));
    let n1 = trajectory.last().map_or(0.0, |s| norm(s, topology));
    let drift = if audit {
        let couplings = coupling_coefficients(topology);
        Some(drift_audit(
            &trajectory.snapshots,
            topology,
            &couplings,
            config.m_max,
        )?)
    } else {
        None
    };
    Ok(Report {
        summary: Summary {
            final_time: trajectory.last().map(|s| s.time),
            total_norm: Some(n1),
            norm_drift: Some(if n0 > 0.0 { (n1 - n0).abs() / n0 } else { 0.0 }),
            sum_rule_residuals: alnet_core::check_sum_rule(topology),
            drifts: drift.as_ref().map(drift_summary),
            ..Summary::default()
        },
        partial_norms: Some(partial_series(topology, &trajectory)),
        snapshots: selected_snapshots(config, topology, &trajectory),
        drift,
        config: None,
    })
}

fn transmission_summary(topology: &GraphTopology, r: &TransmissionReport) -> Summary {
    let label = |i: usize| topology.bond(i).label().to_string();
    Summary {
        final_time: Some(r.measurement_time),
        norm_drift: Some(r.norm_drift),
        reflection: Some(r.reflection),
        transmissions: r
            .transmissions
            .iter()
            .zip(&r.predicted)
            .map(|(&(b, t), &(_, p))| TransmissionEntry {
                bond: label(b),
                measured: t,
                predicted: p,
            })
            .collect(),
        unitarity_residual: Some(r.unitarity_residual),
        sum_rule_residuals: r.sum_rule_residuals.clone(),
        ..Summary::default()
    }
}

fn scenario_report(config: &RunConfig, topology: &GraphTopology, run: &ScenarioRun) -> Report {
    let mut summary = transmission_summary(topology, &run.report);
    summary.total_norm = run.trajectory.last().map(|s| norm(s, topology));
    Report {
        summary,
        partial_norms: Some(partial_series(topology, &run.trajectory)),
        snapshots: selected_snapshots(config, topology, &run.trajectory),
        drift: None,
        config: None,
    }
}
