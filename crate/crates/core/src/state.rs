//! Complex field on a topology, partial norms, and ghost-bond completion.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::topology::{coupling_coefficients, GraphTopology};

/// Default number of ghost sites added past each end of a bond.
pub const DEFAULT_GHOST_WIDTH: usize = 4;

/// Field amplitudes on every bond plus the simulation time.
///
/// Each bond's array follows the orientation documented in
/// [`crate::topology`].
#[derive(Debug, Clone, PartialEq)]
pub struct FieldState {
    pub bonds: Vec<Vec<Complex64>>,
    pub time: f64,
}

impl FieldState {
    pub fn zeros_like(other: &FieldState) -> Self {
        FieldState {
            bonds: other
                .bonds
                .iter()
                .map(|b| vec![Complex64::new(0.0, 0.0); b.len()])
                .collect(),
            time: other.time,
        }
    }

    pub fn bond(&self, index: usize) -> &[Complex64] {
        &self.bonds[index]
    }

    pub fn bond_mut(&mut self, index: usize) -> &mut [Complex64] {
        &mut self.bonds[index]
    }

    /// Amplitude at lattice site `site` of bond `label`.
    pub fn get(&self, topology: &GraphTopology, label: &str, site: i64) -> Result<Complex64> {
        let b = topology.bond_index(label)?;
        let i = topology
            .array_index(b, site)
            .ok_or_else(|| Error::SiteOutOfRange {
                bond: label.into(),
                site,
            })?;
        Ok(self.bonds[b][i])
    }

    pub fn set(
        &mut self,
        topology: &GraphTopology,
        label: &str,
        site: i64,
        value: Complex64,
    ) -> Result<()> {
        let b = topology.bond_index(label)?;
        let i = topology
            .array_index(b, site)
            .ok_or_else(|| Error::SiteOutOfRange {
                bond: label.into(),
                site,
            })?;
        self.bonds[b][i] = value;
        Ok(())
    }

    /// Checks that the arrays match the topology's bond lengths.
    pub fn check_shape(&self, topology: &GraphTopology) -> Result<()> {
        if self.bonds.len() != topology.bonds().len() {
            return Err(Error::structure(alloc::format!(
                "state has {} bonds, topology has {}",
                self.bonds.len(),
                topology.bonds().len()
            )));
        }
        for (arr, bond) in self.bonds.iter().zip(topology.bonds()) {
            if arr.len() != bond.len() {
                return Err(Error::structure(alloc::format!(
                    "bond `{}` holds {} sites, topology expects {}",
                    bond.label(),
                    arr.len(),
                    bond.len()
                )));
            }
        }
        Ok(())
    }

    /// First non-finite amplitude as `(bond, array index)`.
    pub fn first_non_finite(&self) -> Option<(usize, usize)> {
        self.bonds.iter().enumerate().find_map(|(b, arr)| {
            arr.iter()
                .position(|z| !(z.re.is_finite() && z.im.is_finite()))
                .map(|i| (b, i))
        })
    }

    /// Multiplies every amplitude by `e^{i theta}`.
    pub fn rotate_phase(&mut self, theta: f64) {
        let phase = Complex64::from_polar(1.0, theta);
        for z in self.bonds.iter_mut().flatten() {
            *z *= phase;
        }
    }
}

/// All amplitudes zero at time zero.
pub fn zero_state(topology: &GraphTopology) -> FieldState {
    FieldState {
        bonds: topology
            .bonds()
            .iter()
            .map(|b| vec![Complex64::new(0.0, 0.0); b.len()])
            .collect(),
        time: 0.0,
    }
}

/// Norm density `(1/gamma) ln(1 + gamma |psi|^2)` summed over one bond.
pub fn bond_norm(values: &[Complex64], gamma: f64) -> f64 {
    values
        .iter()
        .map(|z| libm::log1p(gamma * z.norm_sqr()))
        .sum::<f64>()
        / gamma
}

/// Per-bond norms in bond order. Their sum is the conserved total norm.
pub fn partial_norms(state: &FieldState, topology: &GraphTopology) -> Vec<f64> {
    state
        .bonds
        .iter()
        .zip(topology.bonds())
        .map(|(arr, bond)| bond_norm(arr, bond.gamma()))
        .collect()
}

/// One bond with its real sites and ghost continuations on both ends.
#[derive(Debug, Clone, PartialEq)]
pub struct GhostBond {
    /// Ghost sites on the root side; `before[j]` sits at array index `-1 - j`.
    pub before: Vec<Complex64>,
    pub real: Vec<Complex64>,
    /// Ghost sites on the leaf side; `after[j]` sits at array index `len + j`.
    pub after: Vec<Complex64>,
}

impl GhostBond {
    /// Value at array index `i`, which may reach into either ghost region.
    /// Positions beyond the ghost width read as zero.
    pub fn at(&self, i: isize) -> Complex64 {
        let len = self.real.len() as isize;
        if i < 0 {
            self.before
                .get((-1 - i) as usize)
                .copied()
                .unwrap_or_default()
        } else if i < len {
            self.real[i as usize]
        } else {
            self.after
                .get((i - len) as usize)
                .copied()
                .unwrap_or_default()
        }
    }

    /// Ghost-before, real and ghost-after sites as one contiguous array.
    pub fn contiguous(&self) -> Vec<Complex64> {
        self.before
            .iter()
            .rev()
            .chain(&self.real)
            .chain(&self.after)
            .copied()
            .collect()
    }
}

/// A field state whose bonds are each completed to a longer line segment.
#[derive(Debug, Clone, PartialEq)]
pub struct GhostExtendedState {
    pub bonds: Vec<GhostBond>,
    pub width: usize,
}

/// Completes every bond with `width` ghost sites at each end.
///
/// Past a vertex, the parent's ghost sites continue as
/// `sum_c sqrt(gamma_p/gamma_c) psi_c` and each child's ghost sites continue
/// as `sqrt(gamma_p/gamma_c) psi_p`. Past a truncated far end the ghosts are
/// zero.
pub fn ghost_extend(
    state: &FieldState,
    topology: &GraphTopology,
    width: usize,
) -> Result<GhostExtendedState> {
    state.check_shape(topology)?;
    let s = coupling_coefficients(topology);
    let zero = Complex64::new(0.0, 0.0);

    let mut out = Vec::with_capacity(topology.bonds().len());
    for (b, bond) in topology.bonds().iter().enumerate() {
        let before = match bond.parent() {
            None => vec![zero; width],
            Some(p) => {
                let parent = state.bond(p);
                if width > parent.len() {
                    return Err(Error::GhostWidth {
                        bond: topology.bond(p).label().into(),
                        width,
                        available: parent.len(),
                    });
                }
                let w = s.weight(b);
                (0..width)
                    .map(|j| parent[parent.len() - 1 - j] * w)
                    .collect()
            }
        };

        let mut after = vec![zero; width];
        for &c in bond.children() {
            let child = state.bond(c);
            if width > child.len() {
                return Err(Error::GhostWidth {
                    bond: topology.bond(c).label().into(),
                    width,
                    available: child.len(),
                });
            }
            let w = s.weight(c);
            for (a, v) in after.iter_mut().zip(child) {
                *a += *v * w;
            }
        }

        out.push(GhostBond {
            before,
            real: state.bond(b).to_vec(),
            after,
        });
    }
    Ok(GhostExtendedState { bonds: out, width })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::{build_psg, build_tree, TreeNode};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn zero_state_shape_and_norm() {
        let t = build_psg(1.0, 1.5, 3.0, 10).unwrap();
        let z = zero_state(&t);
        assert_eq!(z.bonds.iter().map(Vec::len).sum::<usize>(), 30);
        assert_eq!(z.time, 0.0);
        assert!(partial_norms(&z, &t).iter().all(|&n| n == 0.0));
    }

    #[test]
    fn single_site_norm() {
        let t = build_psg(1.0, 1.5, 3.0, 10).unwrap();
        let mut st = zero_state(&t);
        let w = c(0.3, -0.4);
        st.set(&t, "12", 4, w).unwrap();
        let n = partial_norms(&st, &t);
        assert_eq!(n[0], 0.0);
        assert_eq!(n[1], 0.0);
        let expected = (1.0 + 3.0 * 0.25f64).ln() / 3.0;
        assert!((n[2] - expected).abs() < 1e-15);
    }

    #[test]
    fn site_access_errors() {
        let t = build_psg(1.0, 1.5, 3.0, 10).unwrap();
        let mut st = zero_state(&t);
        assert!(matches!(
            st.set(&t, "11", 0, c(1.0, 0.0)),
            Err(Error::SiteOutOfRange { .. })
        ));
        assert!(matches!(
            st.get(&t, "1", 1),
            Err(Error::SiteOutOfRange { .. })
        ));
        assert!(matches!(st.get(&t, "99", 1), Err(Error::UnknownBond(_))));
    }

    #[test]
    fn ghost_values_at_psg_vertex() {
        let t = build_psg(1.0, 1.5, 3.0, 10).unwrap();
        let mut st = zero_state(&t);
        let (a, b, p) = (c(0.2, 0.1), c(-0.3, 0.05), c(0.7, -0.2));
        st.set(&t, "11", 1, a).unwrap();
        st.set(&t, "12", 1, b).unwrap();
        st.set(&t, "1", 0, p).unwrap();
        let g = ghost_extend(&st, &t, DEFAULT_GHOST_WIDTH).unwrap();
        let expected = a * (2.0f64 / 3.0).sqrt() + b * (1.0f64 / 3.0).sqrt();
        assert!((g.bonds[0].at(10) - expected).norm() < 1e-15);
        assert!((g.bonds[1].at(-1) - p * (2.0f64 / 3.0).sqrt()).norm() < 1e-15);
        assert!((g.bonds[2].at(-1) - p * (1.0f64 / 3.0).sqrt()).norm() < 1e-15);
        // truncated far ends
        assert_eq!(g.bonds[0].at(-1), c(0.0, 0.0));
        assert_eq!(g.bonds[1].at(10), c(0.0, 0.0));
        assert_eq!(g.bonds[1].contiguous().len(), 18);
    }

    #[test]
    fn ghost_width_limited_by_opposing_bond() {
        let root = TreeNode::root(
            1.0,
            alloc::vec![
                TreeNode::internal(
                    2.0,
                    3,
                    alloc::vec![TreeNode::leaf(4.0), TreeNode::leaf(4.0)]
                ),
                TreeNode::leaf(2.0),
            ],
        );
        let t = build_tree(&root, 20).unwrap();
        let st = zero_state(&t);
        assert!(ghost_extend(&st, &t, 3).is_ok());
        assert!(matches!(
            ghost_extend(&st, &t, 4),
            Err(Error::GhostWidth { available: 3, .. })
        ));
    }

    #[test]
    fn zero_state_has_zero_ghosts() {
        let t = build_psg(1.0, 1.5, 3.0, 10).unwrap();
        let g = ghost_extend(&zero_state(&t), &t, 4).unwrap();
        for b in &g.bonds {
            assert!(b.before.iter().chain(&b.after).all(|z| *z == c(0.0, 0.0)));
        }
    }
}
