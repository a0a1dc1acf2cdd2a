//! Conserved quantities on graphs: norm, `Z` (energy and current), the
//! explicit second and third charges, the general `C_m` hierarchy, and
//! drift auditing of trajectories.
//!
//! Normalisation: every `C_m` reported here is the graph sum
//! `gamma_1 * sum_B (1/gamma_B) sum_{n in B} f_m^(n)(sqrt(gamma_B) psi_B)`,
//! with ghost sites supplying the stencil past bond ends. Under the sum rule
//! this equals `sum_n f_m^(n)(q)` of the universal unit-nonlinearity chain.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hierarchy::densities;
use crate::state::{ghost_extend, partial_norms, FieldState, GhostBond};
use crate::topology::{CouplingCoefficients, GraphTopology};

/// Smallest reference magnitude used when turning drifts into relative drifts.
pub const DRIFT_FLOOR: f64 = 1e-12;

/// Highest charge order computed unless asked otherwise.
pub const DEFAULT_M_MAX: usize = 4;

/// Total norm `sum_B (1/gamma_B) sum_n ln(1 + gamma_B |psi_{B,n}|^2)`.
pub fn norm(state: &FieldState, topology: &GraphTopology) -> f64 {
    partial_norms(state, topology).iter().sum()
}

/// `Z = sum_B sum_n conj(psi_{B,n}) psi_{B,n+1} + sum_vertices conj(psi_{p,last}) sum_c s_c psi_{c,first}`.
///
/// Energy and current follow as `E = -2 Re Z` and `J = 2 Im Z`.
pub fn z_quantity(
    state: &FieldState,
    topology: &GraphTopology,
    couplings: &CouplingCoefficients,
) -> Complex64 {
    let mut z = Complex64::new(0.0, 0.0);
    for (b, bond) in topology.bonds().iter().enumerate() {
        let psi = state.bond(b);
        for w in psi.windows(2) {
            z += w[0].conj() * w[1];
        }
        if !bond.children().is_empty() {
            let virt: Complex64 = bond
                .children()
                .iter()
                .map(|&c| state.bond(c)[0] * couplings.weight(c))
                .sum();
            z += psi[psi.len() - 1].conj() * virt;
        }
    }
    z
}

pub fn energy_of(z: Complex64) -> f64 {
    -2.0 * z.re
}

pub fn current_of(z: Complex64) -> f64 {
    2.0 * z.im
}

fn c2_density(g: &GhostBond, gamma: f64, i: isize) -> Complex64 {
    let (m1, p0, p1) = (g.at(i - 1), g.at(i), g.at(i + 1));
    p1.conj() * m1 * (1.0 + gamma * p0.norm_sqr()) + p0 * p0 * p1.conj() * p1.conj() * (gamma / 2.0)
}

fn c3_density(g: &GhostBond, gamma: f64, i: isize) -> Complex64 {
    let (m1, p0, p1, p2) = (g.at(i - 1), g.at(i), g.at(i + 1), g.at(i + 2));
    let inner = p2.conj() * m1 * (1.0 + gamma * p1.norm_sqr())
        + p0.conj() * p1.conj() * m1 * m1 * gamma
        + p1.conj() * p1.conj() * p0 * m1 * gamma;
    let hop = p1.conj() * p0;
    inner * (1.0 + gamma * p0.norm_sqr()) + hop * hop * hop * (gamma * gamma / 3.0)
}

/// Second and third charges from their explicit lattice formulas, with ghost
/// sites past every bond end.
pub fn higher_constants_direct(
    state: &FieldState,
    topology: &GraphTopology,
) -> Result<(Complex64, Complex64)> {
    let ext = ghost_extend(state, topology, 2)?;
    let mut c2 = Complex64::new(0.0, 0.0);
    let mut c3 = Complex64::new(0.0, 0.0);
    for (g, bond) in ext.bonds.iter().zip(topology.bonds()) {
        let gamma = bond.gamma();
        for i in 0..g.real.len() as isize {
            c2 += c2_density(g, gamma, i);
            c3 += c3_density(g, gamma, i);
        }
    }
    let gamma1 = topology.bond(topology.root()).gamma();
    Ok((-c2 * gamma1, -c3 * gamma1))
}

/// `C_1..=C_{m_max}` on a graph from the recursion, bond by bond.
///
/// `C_1 = -gamma_1 conj(Z)` for any couplings derived from the bond
/// nonlinearities.
pub fn graph_hierarchy(
    state: &FieldState,
    topology: &GraphTopology,
    m_max: usize,
) -> Result<Vec<Complex64>> {
    let width = m_max.max(2);
    let ext = ghost_extend(state, topology, width)?;
    let gamma1 = topology.bond(topology.root()).gamma();
    let mut totals = vec![Complex64::new(0.0, 0.0); m_max];
    for (g, bond) in ext.bonds.iter().zip(topology.bonds()) {
        let scale = libm::sqrt(bond.gamma());
        let q: Vec<Complex64> = g.contiguous().iter().map(|z| z * scale).collect();
        let rows = densities(&q, m_max);
        let weight = gamma1 / bond.gamma();
        for row in &rows[width..width + g.real.len()] {
            for (t, f) in totals.iter_mut().zip(row) {
                *t += f * weight;
            }
        }
    }
    Ok(totals)
}

/// Bond fields rescaled to the universal unit-nonlinearity chain along one
/// root-to-leaf path.
#[derive(Debug, Clone, PartialEq)]
pub struct UniversalChain {
    pub q: Vec<Complex64>,
    /// Lattice coordinate of `q[0]`.
    pub first_site: i64,
    /// Largest mismatch between an off-path bond's rescaled field and the
    /// chain at the same position, relative to `max |q|`. Zero for
    /// fields of the exact graph-solution form.
    pub child_residual: f64,
}

/// Maps a graph field onto the universal chain `q_n = sqrt(gamma_B) psi_{B,n}`
/// following the path from the root to `leaf`.
pub fn universal_chain(
    state: &FieldState,
    topology: &GraphTopology,
    leaf: usize,
) -> Result<UniversalChain> {
    state.check_shape(topology)?;
    if !topology.bond(leaf).children().is_empty() {
        return Err(Error::invalid(format!(
            "bond `{}` is not a leaf",
            topology.bond(leaf).label()
        )));
    }
    let path = topology.path_to(leaf);
    let root = topology.root();
    let first_site = topology.lattice_site(root, 0);
    let mut q = Vec::new();
    for &b in &path {
        let s = libm::sqrt(topology.bond(b).gamma());
        q.extend(state.bond(b).iter().map(|z| z * s));
    }

    // position of chain coordinate x in q
    let index_of = |x: i64| -> Option<usize> {
        let i = x - first_site;
        (0..q.len() as i64).contains(&i).then_some(i as usize)
    };
    let scale = q.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let mut residual: f64 = 0.0;
    for (b, bond) in topology.bonds().iter().enumerate() {
        if path.contains(&b) {
            continue;
        }
        let s = libm::sqrt(bond.gamma());
        for (i, z) in state.bond(b).iter().enumerate() {
            let x = topology.lattice_site(b, i) + topology.offset_of(b);
            let reference = index_of(x).map_or(Complex64::new(0.0, 0.0), |k| q[k]);
            residual = residual.max((z * s - reference).norm());
        }
    }
    let child_residual = if scale > 0.0 { residual / scale } else { 0.0 };
    Ok(UniversalChain {
        q,
        first_site,
        child_residual,
    })
}

/// Conserved quantities at one instant.
#[derive(Debug, Clone, PartialEq)]
pub struct ConservedSnapshot {
    pub time: f64,
    pub norm: f64,
    pub z: Complex64,
    pub energy: f64,
    pub current: f64,
    /// `C_2, C_3, ..., C_{m_max}`.
    pub charges: Vec<Complex64>,
}

/// Evaluates every conserved quantity. `C_2` and `C_3` come from the
/// explicit formulas, higher orders from the recursion.
pub fn snapshot(
    state: &FieldState,
    topology: &GraphTopology,
    couplings: &CouplingCoefficients,
    m_max: usize,
) -> Result<ConservedSnapshot> {
    let z = z_quantity(state, topology, couplings);
    let mut charges = Vec::new();
    if m_max >= 2 {
        let (c2, c3) = higher_constants_direct(state, topology)?;
        charges.push(c2);
        if m_max >= 3 {
            charges.push(c3);
        }
        if m_max >= 4 {
            let all = graph_hierarchy(state, topology, m_max)?;
            charges.extend_from_slice(&all[3..]);
        }
    }
    Ok(ConservedSnapshot {
        time: state.time,
        norm: norm(state, topology),
        z,
        energy: energy_of(z),
        current: current_of(z),
        charges,
    })
}

/// Largest relative deviation from the initial value over a series.
pub fn relative_drift<T: Copy>(
    values: impl IntoIterator<Item = T>,
    dist: impl Fn(T, T) -> f64,
    mag: impl Fn(T) -> f64,
) -> f64 {
    let mut it = values.into_iter();
    let Some(first) = it.next() else {
        return 0.0;
    };
    let reference = mag(first).max(DRIFT_FLOOR);
    it.map(|v| dist(v, first)).fold(0.0, f64::max) / reference
}

/// Maximum relative drift of every tracked quantity.
#[derive(Debug, Clone, PartialEq)]
pub struct Drifts {
    pub norm: f64,
    pub z: f64,
    pub energy: f64,
    pub current: f64,
    /// Aligned with [`ConservedSnapshot::charges`].
    pub charges: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DriftAudit {
    pub snapshots: Vec<ConservedSnapshot>,
    pub drifts: Drifts,
}

/// Evaluates conserved quantities at every trajectory point and their drift
/// `max_t |Q(t) - Q(0)| / max(|Q(0)|, 1e-12)`.
pub fn drift_audit(
    trajectory: &[FieldState],
    topology: &GraphTopology,
    couplings: &CouplingCoefficients,
    m_max: usize,
) -> Result<DriftAudit> {
    let snapshots = trajectory
        .iter()
        .map(|s| snapshot(s, topology, couplings, m_max))
        .collect::<Result<Vec<_>>>()?;

    let real = |sel: fn(&ConservedSnapshot) -> f64| {
        relative_drift(snapshots.iter().map(sel), |a, b| (a - b).abs(), f64::abs)
    };
    let complex = |sel: &dyn Fn(&ConservedSnapshot) -> Complex64| {
        relative_drift(
            snapshots.iter().map(sel),
            |a, b| (a - b).norm(),
            |a| a.norm(),
        )
    };
    let n_charges = snapshots.first().map_or(0, |s| s.charges.len());
    let drifts = Drifts {
        norm: real(|s| s.norm),
        z: complex(&|s| s.z),
        energy: real(|s| s.energy),
        current: real(|s| s.current),
        charges: (0..n_charges).map(|k| complex(&|s| s.charges[k])).collect(),
    };
    Ok(DriftAudit { snapshots, drifts })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::zero_state;
    use crate::topology::{build_psg, coupling_coefficients};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn zero_state_quantities_vanish() {
        let t = build_psg(1.0, 1.5, 3.0, 10).unwrap();
        let s = coupling_coefficients(&t);
        let z = zero_state(&t);
        let snap = snapshot(&z, &t, &s, 5).unwrap();
        assert_eq!(snap.norm, 0.0);
        assert_eq!(snap.z, c(0.0, 0.0));
        assert_eq!(snap.charges.len(), 4);
        assert!(snap.charges.iter().all(|v| *v == c(0.0, 0.0)));
        let audit = drift_audit(&[z.clone(), z], &t, &s, 3).unwrap();
        assert_eq!(audit.drifts.norm, 0.0);
        assert!(audit.drifts.charges.iter().all(|d| *d == 0.0));
    }

    #[test]
    fn two_site_z() {
        let t = build_psg(1.0, 1.5, 3.0, 10).unwrap();
        let s = coupling_coefficients(&t);
        let mut st = zero_state(&t);
        st.set(&t, "1", -1, c(1.0, 0.0)).unwrap();
        st.set(&t, "1", 0, c(1.0, 0.0)).unwrap();
        let z = z_quantity(&st, &t, &s);
        assert_eq!(z, c(1.0, 0.0));
        assert_eq!(energy_of(z), -2.0);
        assert_eq!(current_of(z), 0.0);
    }

    #[test]
    fn vertex_term_in_z() {
        let t = build_psg(1.0, 1.5, 3.0, 10).unwrap();
        let s = coupling_coefficients(&t);
        let mut st = zero_state(&t);
        let (p, a, b) = (c(0.2, 0.3), c(0.5, -0.1), c(-0.4, 0.2));
        st.set(&t, "1", 0, p).unwrap();
        st.set(&t, "11", 1, a).unwrap();
        st.set(&t, "12", 1, b).unwrap();
        let want = p.conj() * (a * s.get(1).unwrap() + b * s.get(2).unwrap());
        assert!((z_quantity(&st, &t, &s) - want).norm() < 1e-16);
    }

    #[test]
    fn drift_uses_floor() {
        let d = relative_drift([0.0, 1e-15], |a: f64, b: f64| (a - b).abs(), f64::abs);
        assert!((d - 1e-3).abs() < 1e-12);
        assert_eq!(
            relative_drift(core::iter::empty::<f64>(), |a, b| a - b, f64::abs),
            0.0
        );
    }

    #[test]
    fn universal_chain_rejects_internal_bonds() {
        let t = build_psg(1.0, 1.5, 3.0, 10).unwrap();
        assert!(universal_chain(&zero_state(&t), &t, 0).is_err());
        let u = universal_chain(&zero_state(&t), &t, 2).unwrap();
        assert_eq!(u.q.len(), 20);
        assert_eq!(u.first_site, -9);
    }
}
