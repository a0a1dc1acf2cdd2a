//! Packaged soliton scattering scenarios: transmission through integrable
//! vertices, sweeps over the nonlinearity ratio, and the broken-sum-rule
//! regime with reflection.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::conserved::norm;
use crate::dynamics::{boundary_fraction, evolve, SimConfig, Trajectory};
use crate::error::{Error, Result};
use crate::soliton::{soliton_profile, SolitonParams};
use crate::state::{bond_norm, partial_norms, FieldState};
use crate::topology::{
    build_psg, check_sum_rule, coupling_coefficients, BondKind, GraphTopology, SUM_RULE_TOLERANCE,
};

/// Minimum distance, in sites, between a transmitted peak and both its
/// vertex and the truncated far end when transmission is measured.
pub const MEASUREMENT_MARGIN: f64 = 50.0;

/// Norm fraction allowed within [`BOUNDARY_SITES`] of a truncated end.
pub const BOUNDARY_TOLERANCE: f64 = 1e-6;
pub const BOUNDARY_SITES: usize = 10;

/// Incident soliton used for the reference scattering runs.
pub fn reference_soliton() -> SolitonParams {
    SolitonParams {
        alpha: 5.0 * PI / 4.0,
        beta: 0.1,
        n0: -150.0,
        phi0: 0.0,
    }
}

/// Outcome of one scattering run, measured at the final time.
#[derive(Debug, Clone, PartialEq)]
pub struct TransmissionReport {
    pub labels: Vec<String>,
    pub times: Vec<f64>,
    /// Partial norm of every bond at every observation.
    pub partial_norms: Vec<Vec<f64>>,
    /// `(leaf bond, final partial norm / final total norm)`.
    pub transmissions: Vec<(usize, f64)>,
    /// `(leaf bond, gamma_1 / gamma_leaf)`.
    pub predicted: Vec<(usize, f64)>,
    /// Final norm fraction left on the incoming bond.
    pub reflection: f64,
    /// `|sum_leaf T - 1|`.
    pub unitarity_residual: f64,
    /// Relative change of the total norm over the run.
    pub norm_drift: f64,
    pub sum_rule_residuals: Vec<f64>,
    pub measurement_time: f64,
}

impl TransmissionReport {
    pub fn transmission(&self, bond: usize) -> Option<f64> {
        self.transmissions
            .iter()
            .find(|(b, _)| *b == bond)
            .map(|(_, t)| *t)
    }
}

/// Trajectory of a run together with its measured report.
#[derive(Debug, Clone)]
pub struct ScenarioRun {
    pub trajectory: Trajectory,
    pub report: TransmissionReport,
}

/// Launches `soliton` on `topology` and records a snapshot every
/// `config.output_stride` steps.
pub fn simulate(
    topology: &GraphTopology,
    soliton: &SolitonParams,
    config: &SimConfig,
) -> Result<Trajectory> {
    soliton.validate()?;
    let couplings = coupling_coefficients(topology);
    let initial = soliton_profile(soliton, topology, 0.0);
    let mut trajectory = Trajectory::new();
    evolve(
        &initial,
        topology,
        &couplings,
        config,
        &mut [&mut trajectory],
    )?;
    Ok(trajectory)
}

fn check_measurable(topology: &GraphTopology, soliton: &SolitonParams, t: f64) -> Result<()> {
    let v = soliton.velocity();
    if v <= 0.0 {
        return Err(Error::Inconclusive(format!(
            "soliton velocity {v} does not carry it towards the vertex"
        )));
    }
    let center = soliton.center(t);
    for leaf in topology.leaves() {
        let x = center - topology.offset_of(leaf) as f64;
        let len = topology.bond(leaf).len() as f64;
        if x < MEASUREMENT_MARGIN {
            return Err(Error::Inconclusive(format!(
                "at t = {t} the transmitted peak on `{}` is only {x:.1} sites past its vertex",
                topology.bond(leaf).label()
            )));
        }
        if x > len - MEASUREMENT_MARGIN {
            return Err(Error::Inconclusive(format!(
                "at t = {t} the transmitted peak on `{}` is within {} sites of the truncated end",
                topology.bond(leaf).label(),
                MEASUREMENT_MARGIN
            )));
        }
    }
    Ok(())
}

fn check_boundary(topology: &GraphTopology, state: &FieldState) -> Result<()> {
    let f = boundary_fraction(state, topology, BOUNDARY_SITES);
    if f > BOUNDARY_TOLERANCE {
        return Err(Error::Inconclusive(format!(
            "norm fraction {f:.3e} reached the truncated boundary by t = {}",
            state.time
        )));
    }
    Ok(())
}

fn report_from(topology: &GraphTopology, trajectory: &Trajectory) -> TransmissionReport {
    let partial: Vec<Vec<f64>> = trajectory
        .snapshots
        .iter()
        .map(|s| partial_norms(s, topology))
        .collect();
    let first = trajectory
        .snapshots
        .first()
        .map_or(0.0, |s| norm(s, topology));
    let last = partial.last().cloned().unwrap_or_default();
    let total: f64 = last.iter().sum();
    let frac = |b: usize| if total > 0.0 { last[b] / total } else { 0.0 };

    let gamma1 = topology.bond(topology.root()).gamma();
    let transmissions: Vec<(usize, f64)> = topology.leaves().map(|l| (l, frac(l))).collect();
    let predicted = topology
        .leaves()
        .map(|l| (l, gamma1 / topology.bond(l).gamma()))
        .collect();
    let sum_t: f64 = transmissions.iter().map(|(_, t)| t).sum();

    TransmissionReport {
        labels: topology.bonds().iter().map(|b| b.label().into()).collect(),
        times: trajectory.times().collect(),
        partial_norms: partial,
        transmissions,
        predicted,
        reflection: frac(topology.root()),
        unitarity_residual: (sum_t - 1.0).abs(),
        norm_drift: if first > 0.0 {
            (total - first).abs() / first
        } else {
            0.0
        },
        sum_rule_residuals: check_sum_rule(topology),
        measurement_time: trajectory.last().map_or(0.0, |s| s.time),
    }
}

/// Sends the soliton through the graph and measures the asymptotic
/// transmission into every leaf at `config.t_final`.
///
/// Fails as inconclusive when, at the final time, a transmitted peak is
/// not yet [`MEASUREMENT_MARGIN`] sites past its vertex, is that close to
/// the truncated end, or norm has reached the boundary.
pub fn run_bifurcation(
    topology: &GraphTopology,
    soliton: &SolitonParams,
    config: &SimConfig,
) -> Result<ScenarioRun> {
    config.validate()?;
    soliton.validate()?;
    check_measurable(topology, soliton, config.steps() as f64 * config.dt)?;
    let trajectory = simulate(topology, soliton, config)?;
    if let Some(last) = trajectory.last() {
        check_boundary(topology, last)?;
    }
    let report = report_from(topology, &trajectory);
    Ok(ScenarioRun { trajectory, report })
}

/// Primary star graph whose third nonlinearity satisfies the sum rule for
/// the given `gamma1 / gamma2`.
pub fn sweep_topology(ratio: f64, gamma1: f64, truncation: usize) -> Result<GraphTopology> {
    if !(ratio > 0.0 && ratio < 1.0) {
        return Err(Error::invalid(format!(
            "gamma1/gamma2 must lie in (0, 1), got {ratio}"
        )));
    }
    let gamma2 = gamma1 / ratio;
    let gamma3 = 1.0 / (1.0 / gamma1 - 1.0 / gamma2);
    build_psg(gamma1, gamma2, gamma3, truncation)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
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

/// One grid point of [`transmission_sweep`].
pub fn sweep_point(
    ratio: f64,
    gamma1: f64,
    truncation: usize,
    soliton: &SolitonParams,
    config: &SimConfig,
) -> Result<SweepRow> {
    let topology = sweep_topology(ratio, gamma1, truncation)?;
    let run = run_bifurcation(&topology, soliton, config)?;
    let r = &run.report;
    Ok(SweepRow {
        ratio,
        gamma2: topology.bond(1).gamma(),
        gamma3: topology.bond(2).gamma(),
        t2: r.transmission(1).unwrap_or(0.0),
        t3: r.transmission(2).unwrap_or(0.0),
        predicted_t2: gamma1 / topology.bond(1).gamma(),
        predicted_t3: gamma1 / topology.bond(2).gamma(),
        reflection: r.reflection,
        unitarity_residual: r.unitarity_residual,
    })
}

/// Transmission through a primary star graph for each `gamma1/gamma2` in
/// `ratio_grid`, with `gamma3` fixed by the sum rule. Rows follow grid order.
pub fn transmission_sweep(
    ratio_grid: &[f64],
    gamma1: f64,
    truncation: usize,
    soliton: &SolitonParams,
    config: &SimConfig,
) -> Result<Vec<SweepRow>> {
    // Validate the whole grid before spending time on any run.
    for &r in ratio_grid {
        sweep_topology(r, gamma1, 2)?;
    }
    ratio_grid
        .iter()
        .map(|&r| sweep_point(r, gamma1, truncation, soliton, config))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeakSample {
    pub time: f64,
    /// Interpolated peak position in lattice coordinates of the bond.
    pub site: f64,
    pub modulus: f64,
}

/// Peak motion on one bond.
#[derive(Debug, Clone, PartialEq)]
pub struct PeakSeries {
    pub bond: usize,
    pub samples: Vec<PeakSample>,
    /// Least-squares slope of `site` against `time` over the samples whose
    /// modulus exceeds half the largest one; `None` when no peak is found.
    pub velocity: Option<f64>,
}

/// Tracks the modulus maximum of `bond` across `trajectory`.
///
/// The peak position is refined by a parabola through the maximum and its
/// two neighbours. Samples whose maximum sits on the first or last site of
/// the bond are kept in `samples` but excluded from the velocity fit.
pub fn peak_tracker(
    trajectory: &[FieldState],
    topology: &GraphTopology,
    bond: usize,
) -> PeakSeries {
    let mut samples = Vec::with_capacity(trajectory.len());
    let mut interior = Vec::with_capacity(trajectory.len());
    for state in trajectory {
        let psi = state.bond(bond);
        let Some((i, m)) = psi.iter().map(|z| z.norm()).enumerate().fold(
            None,
            |best: Option<(usize, f64)>, (i, m)| match best {
                Some((_, bm)) if bm >= m => best,
                _ => Some((i, m)),
            },
        ) else {
            continue;
        };
        if m <= 0.0 {
            continue;
        }
        let inside = i > 0 && i + 1 < psi.len();
        let shift = if inside {
            let (l, r) = (psi[i - 1].norm(), psi[i + 1].norm());
            let denom = l - 2.0 * m + r;
            if denom < 0.0 {
                0.5 * (l - r) / denom
            } else {
                0.0
            }
        } else {
            0.0
        };
        samples.push(PeakSample {
            time: state.time,
            site: topology.lattice_site(bond, i) as f64 + shift,
            modulus: m,
        });
        interior.push(inside);
    }

    let max = samples.iter().map(|s| s.modulus).fold(0.0, f64::max);
    let window: Vec<&PeakSample> = samples
        .iter()
        .zip(&interior)
        .filter(|(s, inside)| **inside && s.modulus > 0.5 * max)
        .map(|(s, _)| s)
        .collect();
    let velocity = fit_slope(&window);
    PeakSeries {
        bond,
        samples,
        velocity,
    }
}

fn fit_slope(points: &[&PeakSample]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let mt = points.iter().map(|p| p.time).sum::<f64>() / n;
    let mx = points.iter().map(|p| p.site).sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for p in points {
        sxy += (p.time - mt) * (p.site - mx);
        sxx += (p.time - mt) * (p.time - mt);
    }
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Peak tracks of a broken-sum-rule run.
#[derive(Debug, Clone, PartialEq)]
pub struct PeakTrack {
    /// Incoming bond, while the incident centre is at least
    /// [`MEASUREMENT_MARGIN`] sites before the vertex.
    pub incident: PeakSeries,
    /// Incoming bond, after the reflected wave has separated from the vertex.
    pub reflected: PeakSeries,
    /// One series per leaf.
    pub transmitted: Vec<PeakSeries>,
    /// Time from which the reflected peak is tracked.
    pub reflection_window_start: f64,
}

#[derive(Debug, Clone)]
pub struct BrokenRuleRun {
    pub run: ScenarioRun,
    pub peaks: PeakTrack,
    /// Final norm outside the windows around the tracked peaks, as a
    /// fraction of the final total norm.
    pub radiation_fraction: f64,
}

/// Scattering through a vertex that violates the sum rule.
///
/// The reflected peak is tracked once the incident centre would be
/// [`MEASUREMENT_MARGIN`] sites past the vertex.
pub fn run_broken_rule(
    topology: &GraphTopology,
    soliton: &SolitonParams,
    config: &SimConfig,
) -> Result<BrokenRuleRun> {
    if check_sum_rule(topology)
        .iter()
        .all(|r| r.abs() <= SUM_RULE_TOLERANCE)
    {
        return Err(Error::invalid(
            "run_broken_rule needs a topology that violates the sum rule",
        ));
    }
    let run = run_bifurcation(topology, soliton, config)?;
    let snaps = &run.trajectory.snapshots;
    let root = topology.root();
    let v = soliton.velocity();
    let arrival = -soliton.n0 / v;
    let split = arrival + MEASUREMENT_MARGIN / v;

    let approach = arrival - MEASUREMENT_MARGIN / v;
    let before: Vec<FieldState> = snaps
        .iter()
        .filter(|s| s.time <= approach)
        .cloned()
        .collect();
    let after: Vec<FieldState> = snaps.iter().filter(|s| s.time >= split).cloned().collect();
    let incident = peak_tracker(&before, topology, root);
    let reflected = peak_tracker(&after, topology, root);
    let transmitted: Vec<PeakSeries> = topology
        .leaves()
        .map(|l| peak_tracker(&after, topology, l))
        .collect();

    // Norm inside +-4 widths of each final peak.
    let radiation_fraction = match snaps.last() {
        Some(last) => {
            let half = libm::ceil(4.0 / soliton.beta) as i64;
            let mut tracked = 0.0;
            for series in core::iter::once(&reflected).chain(&transmitted) {
                let Some(peak) = series.samples.last() else {
                    continue;
                };
                let bond = topology.bond(series.bond);
                let centre = libm::round(peak.site) as i64;
                let idx: Vec<usize> = (centre - half..=centre + half)
                    .filter_map(|n| topology.array_index(series.bond, n))
                    .collect();
                if let (Some(&lo), Some(&hi)) = (idx.first(), idx.last()) {
                    tracked += bond_norm(&last.bond(series.bond)[lo..=hi], bond.gamma());
                }
            }
            let total = norm(last, topology);
            if total > 0.0 {
                ((total - tracked) / total).max(0.0)
            } else {
                0.0
            }
        }
        None => 0.0,
    };

    Ok(BrokenRuleRun {
        run,
        peaks: PeakTrack {
            incident,
            reflected,
            transmitted,
            reflection_window_start: split,
        },
        radiation_fraction,
    })
}

/// Bonds on which a soliton can end up: the incoming bond and every leaf.
pub fn semi_infinite_bonds(topology: &GraphTopology) -> impl Iterator<Item = usize> + '_ {
    topology
        .bonds()
        .iter()
        .enumerate()
        .filter(|(_, b)| b.kind() != BondKind::Internal)
        .map(|(i, _)| i)
}
