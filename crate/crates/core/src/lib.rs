//! Ablowitz-Ladik discrete nonlinear Schrödinger dynamics on chains, star
//! graphs and tree graphs with bond-dependent nonlinearity.
//!
//! The crate is `no_std` and only needs `alloc`. File formats and the
//! command-line driver live in the companion `alnet` crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod conserved;
pub mod dynamics;
pub mod error;
pub mod experiments;
pub mod hierarchy;
pub mod soliton;
pub mod state;
pub mod topology;

pub use num_complex::Complex64;

pub use conserved::{
    drift_audit, graph_hierarchy, higher_constants_direct, norm, snapshot, universal_chain,
    z_quantity, ConservedSnapshot, DriftAudit, Drifts,
};
pub use dynamics::{evolve, local_current, rhs, step, Observer, SimConfig, Trajectory};
pub use error::{Error, Result};
pub use experiments::{
    peak_tracker, run_bifurcation, run_broken_rule, transmission_sweep, PeakTrack,
    TransmissionReport,
};
pub use hierarchy::higher_constants_recursive;
pub use soliton::{analytic_norm, analytic_z, derive_kinematics, soliton_profile, SolitonParams};
pub use state::{ghost_extend, partial_norms, zero_state, FieldState, GhostExtendedState};
pub use topology::{
    build_psg, build_star, build_tree, check_sum_rule, coupling_coefficients, site_offset,
    BondKind, BondSpec, CouplingCoefficients, GraphTopology, TreeNode,
};
