//! Exact bright soliton of the Ablowitz-Ladik lattice and its closed-form
//! conserved quantities.
//!
//! The universal soliton on the unit-nonlinearity chain is
//!
//! ```text
//! q_n(t) = sinh(beta) sech(beta (n - n0 - v t)) exp(-i (omega t + alpha n + phi0))
//! omega  = -2 cosh(beta) cos(alpha)
//! v      = -(2 / beta) sinh(beta) sin(alpha)
//! ```
//!
//! On a graph, bond `B` carries `gamma_B^{-1/2} q_{n + offset(B)}`.

use alloc::format;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::state::{zero_state, FieldState};
use crate::topology::GraphTopology;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolitonParams {
    /// Wave number. Any finite value is accepted; the profile is
    /// `2 pi`-periodic in it.
    pub alpha: f64,
    /// Inverse width, strictly positive.
    pub beta: f64,
    /// Initial centre, in lattice coordinates of bond `"1"`.
    pub n0: f64,
    pub phi0: f64,
}

impl SolitonParams {
    pub fn new(alpha: f64, beta: f64, n0: f64, phi0: f64) -> Result<Self> {
        let p = SolitonParams {
            alpha,
            beta,
            n0,
            phi0,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.beta.is_finite() && self.beta > 0.0) {
            return Err(Error::invalid(format!(
                "soliton beta must be positive, got {}",
                self.beta
            )));
        }
        for (name, v) in [("alpha", self.alpha), ("n0", self.n0), ("phi0", self.phi0)] {
            if !v.is_finite() {
                return Err(Error::invalid(format!("soliton {name} must be finite")));
            }
        }
        Ok(())
    }

    pub fn omega(&self) -> f64 {
        -2.0 * libm::cosh(self.beta) * libm::cos(self.alpha)
    }

    pub fn velocity(&self) -> f64 {
        -(2.0 / self.beta) * libm::sinh(self.beta) * libm::sin(self.alpha)
    }

    /// Centre position at time `t` on the universal chain.
    pub fn center(&self, t: f64) -> f64 {
        self.n0 + self.velocity() * t
    }

    /// Universal amplitude `q_x(t)` at chain position `x`.
    pub fn universal(&self, x: f64, t: f64) -> Complex64 {
        let modulus = libm::sinh(self.beta) / libm::cosh(self.beta * (x - self.center(t)));
        let phase = -(self.omega() * t + self.alpha * x + self.phi0);
        Complex64::from_polar(modulus, phase)
    }
}

/// Frequency and velocity `(omega, v)` for wave number `alpha` and inverse
/// width `beta`.
pub fn derive_kinematics(alpha: f64, beta: f64) -> Result<(f64, f64)> {
    let p = SolitonParams::new(alpha, beta, 0.0, 0.0)?;
    Ok((p.omega(), p.velocity()))
}

/// Soliton field on every bond of `topology` at time `t`.
pub fn soliton_profile(params: &SolitonParams, topology: &GraphTopology, t: f64) -> FieldState {
    let mut state = zero_state(topology);
    for (b, bond) in topology.bonds().iter().enumerate() {
        let scale = libm::sqrt(bond.gamma()).recip();
        let offset = topology.offset_of(b);
        for (i, z) in state.bond_mut(b).iter_mut().enumerate() {
            let x = (topology.lattice_site(b, i) + offset) as f64;
            *z = params.universal(x, t) * scale;
        }
    }
    state.time = t;
    state
}

/// Exact norm `2 beta / gamma1` of the soliton on an integrable graph.
pub fn analytic_norm(params: &SolitonParams, gamma1: f64) -> f64 {
    2.0 * params.beta / gamma1
}

/// Closed-form `Z`, energy and current of the soliton on an integrable graph.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZReference {
    pub z: Complex64,
    pub energy: f64,
    pub current: f64,
}

/// `Z = (2/gamma1) e^{-i alpha} sinh(beta)`, `E = -2 Re Z`, `J = 2 Im Z`.
pub fn analytic_z(params: &SolitonParams, gamma1: f64) -> ZReference {
    let amp = 2.0 / gamma1 * libm::sinh(params.beta);
    ZReference {
        z: Complex64::from_polar(amp, -params.alpha),
        energy: -2.0 * amp * libm::cos(params.alpha),
        current: -2.0 * amp * libm::sin(params.alpha),
    }
}

/// Whether the soliton centre lies on the real sites of `bond` at time `t`.
/// A centre on the bond's ghost continuation marks a ghost soliton.
pub fn is_real_on(params: &SolitonParams, topology: &GraphTopology, bond: usize, t: f64) -> bool {
    let b = topology.bond(bond);
    let x = params.center(t) - topology.offset_of(bond) as f64;
    if b.is_root() {
        x <= 0.5
    } else {
        x > 0.5 && (b.kind().is_semi_infinite() || x <= b.len() as f64 + 0.5)
    }
}
