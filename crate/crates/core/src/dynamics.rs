//! Equations of motion on a graph and their fixed-step time integration.
//!
//! Away from vertices every bond obeys
//! `d psi_n/dt = i (psi_{n+1} + psi_{n-1}) (1 + gamma |psi_n|^2)`.
//! At a vertex the parent's last site sees the virtual right neighbour
//! `sum_c s_c psi_{c,first}` and each child's first site sees the virtual
//! left neighbour `s_c psi_{parent,last}`. Truncated far ends see zero.

use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::state::{bond_norm, FieldState};
use crate::topology::{BondKind, CouplingCoefficients, GraphTopology};

pub const DEFAULT_DT: f64 = 0.01;

/// Time stepping parameters. Integration is always classical 4-stage
/// Runge-Kutta.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    pub dt: f64,
    pub t_final: f64,
    /// Observers fire every `output_stride` steps.
    pub output_stride: usize,
}

impl SimConfig {
    pub const INTEGRATOR_ORDER: u32 = 4;

    pub fn new(dt: f64, t_final: f64, output_stride: usize) -> Result<Self> {
        let cfg = SimConfig {
            dt,
            t_final,
            output_stride,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::invalid(format!(
                "dt must be positive, got {}",
                self.dt
            )));
        }
        if !(self.t_final.is_finite() && self.t_final >= 0.0) {
            return Err(Error::invalid(format!(
                "t_final must be non-negative, got {}",
                self.t_final
            )));
        }
        if self.output_stride == 0 {
            return Err(Error::invalid("output_stride must be at least 1"));
        }
        Ok(())
    }

    /// Number of steps to reach `t_final`, rounded to the nearest integer.
    pub fn steps(&self) -> usize {
        libm::round(self.t_final / self.dt) as usize
    }
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            dt: DEFAULT_DT,
            t_final: 200.0,
            output_stride: 100,
        }
    }
}

fn check_couplings(topology: &GraphTopology, couplings: &CouplingCoefficients) -> Result<()> {
    if couplings.len() != topology.bonds().len() {
        return Err(Error::structure(format!(
            "coupling table covers {} bonds, topology has {}",
            couplings.len(),
            topology.bonds().len()
        )));
    }
    Ok(())
}

/// Writes the time derivative of `state` into `out`. Shapes are assumed
/// valid; see [`rhs`] for the checked version.
pub fn rhs_into(
    state: &FieldState,
    topology: &GraphTopology,
    couplings: &CouplingCoefficients,
    out: &mut FieldState,
) {
    let zero = Complex64::new(0.0, 0.0);
    for (b, bond) in topology.bonds().iter().enumerate() {
        let psi = state.bond(b);
        let n = psi.len();
        let left_virtual = match bond.parent() {
            Some(p) => state.bond(p)[state.bond(p).len() - 1] * couplings.weight(b),
            None => zero,
        };
        let right_virtual = bond
            .children()
            .iter()
            .fold(zero, |acc, &c| acc + state.bond(c)[0] * couplings.weight(c));
        let gamma = bond.gamma();
        let d = out.bond_mut(b);
        for i in 0..n {
            let left = if i > 0 { psi[i - 1] } else { left_virtual };
            let right = if i + 1 < n { psi[i + 1] } else { right_virtual };
            let sum = left + right;
            let factor = 1.0 + gamma * psi[i].norm_sqr();
            // i * sum * factor
            d[i] = Complex64::new(-sum.im * factor, sum.re * factor);
        }
    }
    out.time = state.time;
}

/// Time derivative of `state`.
pub fn rhs(
    state: &FieldState,
    topology: &GraphTopology,
    couplings: &CouplingCoefficients,
) -> Result<FieldState> {
    state.check_shape(topology)?;
    check_couplings(topology, couplings)?;
    let mut out = FieldState::zeros_like(state);
    rhs_into(state, topology, couplings, &mut out);
    Ok(out)
}

/// Classical RK4 stepper holding its stage buffers.
#[derive(Debug, Clone)]
pub struct Rk4 {
    k1: FieldState,
    k2: FieldState,
    k3: FieldState,
    k4: FieldState,
    stage: FieldState,
}

fn axpy(out: &mut FieldState, base: &FieldState, k: &FieldState, h: f64) {
    for ((o, x), d) in out.bonds.iter_mut().zip(&base.bonds).zip(&k.bonds) {
        for ((o, x), d) in o.iter_mut().zip(x).zip(d) {
            *o = *x + *d * h;
        }
    }
}

impl Rk4 {
    pub fn new(template: &FieldState) -> Self {
        let z = FieldState::zeros_like(template);
        Rk4 {
            k1: z.clone(),
            k2: z.clone(),
            k3: z.clone(),
            k4: z.clone(),
            stage: z,
        }
    }

    /// Advances `state` by `dt` in place without shape or finiteness checks.
    pub fn advance(
        &mut self,
        state: &mut FieldState,
        topology: &GraphTopology,
        couplings: &CouplingCoefficients,
        dt: f64,
    ) {
        rhs_into(state, topology, couplings, &mut self.k1);
        axpy(&mut self.stage, state, &self.k1, 0.5 * dt);
        rhs_into(&self.stage, topology, couplings, &mut self.k2);
        axpy(&mut self.stage, state, &self.k2, 0.5 * dt);
        rhs_into(&self.stage, topology, couplings, &mut self.k3);
        axpy(&mut self.stage, state, &self.k3, dt);
        rhs_into(&self.stage, topology, couplings, &mut self.k4);

        let w = dt / 6.0;
        for (b, x) in state.bonds.iter_mut().enumerate() {
            let (k1, k2, k3, k4) = (
                self.k1.bond(b),
                self.k2.bond(b),
                self.k3.bond(b),
                self.k4.bond(b),
            );
            for (i, x) in x.iter_mut().enumerate() {
                *x += (k1[i] + (k2[i] + k3[i]) * 2.0 + k4[i]) * w;
            }
        }
        state.time += dt;
    }
}

fn divergence(state: &FieldState, topology: &GraphTopology) -> Result<()> {
    match state.first_non_finite() {
        None => Ok(()),
        Some((b, i)) => Err(Error::Divergence {
            bond: topology.bond(b).label().into(),
            site: topology.lattice_site(b, i),
            time: state.time,
        }),
    }
}

/// One RK4 step of size `dt`.
pub fn step(
    state: &FieldState,
    topology: &GraphTopology,
    couplings: &CouplingCoefficients,
    dt: f64,
) -> Result<FieldState> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::invalid(format!("dt must be positive, got {dt}")));
    }
    state.check_shape(topology)?;
    check_couplings(topology, couplings)?;
    let mut next = state.clone();
    Rk4::new(state).advance(&mut next, topology, couplings, dt);
    divergence(&next, topology)?;
    Ok(next)
}

/// Receives snapshots during [`evolve`].
pub trait Observer {
    fn observe(&mut self, state: &FieldState);
}

impl<F: FnMut(&FieldState)> Observer for F {
    fn observe(&mut self, state: &FieldState) {
        self(state)
    }
}

/// Keeps a copy of every observed state.
#[derive(Debug, Clone, Default)]
pub struct Trajectory {
    pub snapshots: Vec<FieldState>,
}

impl Trajectory {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        self.snapshots.iter().map(|s| s.time)
    }

    pub fn last(&self) -> Option<&FieldState> {
        self.snapshots.last()
    }

    pub fn len(&self) -> usize {
        self.snapshots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.snapshots.is_empty()
    }
}

impl Observer for Trajectory {
    fn observe(&mut self, state: &FieldState) {
        self.snapshots.push(state.clone());
    }
}

/// Integrates `initial` to `config.t_final`.
///
/// Observers see the initial state, every `output_stride`-th step, and the
/// final state. The state is checked for non-finite values after every
/// step. Returns the final state.
pub fn evolve(
    initial: &FieldState,
    topology: &GraphTopology,
    couplings: &CouplingCoefficients,
    config: &SimConfig,
    observers: &mut [&mut dyn Observer],
) -> Result<FieldState> {
    config.validate()?;
    initial.check_shape(topology)?;
    check_couplings(topology, couplings)?;
    divergence(initial, topology)?;

    let t0 = initial.time;
    let steps = config.steps();
    let mut state = initial.clone();
    let mut rk = Rk4::new(initial);
    let notify = |s: &FieldState, obs: &mut [&mut dyn Observer]| {
        for o in obs.iter_mut() {
            o.observe(s);
        }
    };

    notify(&state, observers);
    for k in 1..=steps {
        rk.advance(&mut state, topology, couplings, config.dt);
        // Avoid accumulating rounding in the clock.
        state.time = t0 + k as f64 * config.dt;
        divergence(&state, topology)?;
        if k % config.output_stride == 0 || k == steps {
            notify(&state, observers);
        }
    }
    Ok(state)
}

/// Local current `j_n = 2 Im(conj(psi_{n+1}) psi_n)` between sites `site`
/// and `site + 1` of one bond.
pub fn local_current(
    state: &FieldState,
    topology: &GraphTopology,
    label: &str,
    site: i64,
) -> Result<f64> {
    let b = topology.bond_index(label)?;
    let out_of_range = |s| Error::SiteOutOfRange {
        bond: label.into(),
        site: s,
    };
    let i = topology
        .array_index(b, site)
        .ok_or_else(|| out_of_range(site))?;
    let j = topology
        .array_index(b, site + 1)
        .ok_or_else(|| out_of_range(site + 1))?;
    let psi = state.bond(b);
    Ok(2.0 * (psi[j].conj() * psi[i]).im)
}

/// Fraction of the total norm held within `margin` sites of any truncated
/// far end. Nonzero values mean the field is feeling the artificial boundary.
pub fn boundary_fraction(state: &FieldState, topology: &GraphTopology, margin: usize) -> f64 {
    let mut edge = 0.0;
    let mut total = 0.0;
    for (b, bond) in topology.bonds().iter().enumerate() {
        let psi = state.bond(b);
        let g = bond.gamma();
        total += bond_norm(psi, g);
        let m = margin.min(psi.len());
        edge += match bond.kind() {
            BondKind::Incoming => bond_norm(&psi[..m], g),
            BondKind::Leaf => bond_norm(&psi[psi.len() - m..], g),
            BondKind::Internal => 0.0,
        };
    }
    if total > 0.0 {
        edge / total
    } else {
        0.0
    }
}
