//! Network geometry: chains, star graphs and tree graphs built from bonds.
//!
//! Bonds are addressed by path labels. The incoming bond is always `"1"`,
//! its children are `"11"`, `"12"`, ..., their children `"111"`, `"112"`,
//! and so on. Child indices above nine are written in parentheses, e.g.
//! `"1(10)"`.
//!
//! Every bond stores its sites in an array oriented away from the root.
//! For the incoming bond, array index `i` is lattice site `n = i - (L - 1)`,
//! so the vertex site `n = 0` is the last element. For every other bond,
//! array index `i` is lattice site `n = i + 1`.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Sites kept on each semi-infinite bond unless configured otherwise.
pub const DEFAULT_TRUNCATION: usize = 400;

/// Largest sum-rule residual still treated as an exactly satisfied rule.
pub const SUM_RULE_TOLERANCE: f64 = 1e-12;

pub const ROOT_LABEL: &str = "1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BondKind {
    /// The unique incoming bond `"1"`, extending to `n -> -inf`.
    Incoming,
    /// A finite bond between two vertices.
    Internal,
    /// An outgoing bond extending to `n -> +inf`.
    Leaf,
}

impl BondKind {
    pub fn is_semi_infinite(self) -> bool {
        !matches!(self, BondKind::Internal)
    }
}

/// User-facing description of one bond.
#[derive(Debug, Clone, PartialEq)]
pub struct BondSpec {
    pub label: String,
    /// Site count. Only meaningful for internal bonds; semi-infinite bonds
    /// take the topology truncation.
    pub length: usize,
    pub kind: BondKind,
    pub gamma: f64,
}

impl BondSpec {
    pub fn new(label: impl Into<String>, kind: BondKind, gamma: f64, length: usize) -> Self {
        BondSpec {
            label: label.into(),
            length,
            kind,
            gamma,
        }
    }
}

/// Nested description of a tree rooted at the incoming bond.
///
/// A node with children is an internal bond and needs a `length`; a node
/// without children is a semi-infinite leaf. The root's `length` is ignored.
#[derive(Debug, Clone, PartialEq)]
pub struct TreeNode {
    pub gamma: f64,
    pub length: Option<usize>,
    pub children: Vec<TreeNode>,
}

impl TreeNode {
    pub fn leaf(gamma: f64) -> Self {
        TreeNode {
            gamma,
            length: None,
            children: Vec::new(),
        }
    }

    pub fn internal(gamma: f64, length: usize, children: Vec<TreeNode>) -> Self {
        TreeNode {
            gamma,
            length: Some(length),
            children,
        }
    }

    pub fn root(gamma: f64, children: Vec<TreeNode>) -> Self {
        TreeNode {
            gamma,
            length: None,
            children,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Bond {
    label: String,
    kind: BondKind,
    gamma: f64,
    length: usize,
    parent: Option<usize>,
    children: Vec<usize>,
    offset: i64,
}

impl Bond {
    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn kind(&self) -> BondKind {
        self.kind
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Number of stored sites.
    pub fn len(&self) -> usize {
        self.length
    }

    pub fn is_empty(&self) -> bool {
        self.length == 0
    }

    pub fn parent(&self) -> Option<usize> {
        self.parent
    }

    pub fn children(&self) -> &[usize] {
        &self.children
    }

    pub fn is_root(&self) -> bool {
        self.parent.is_none()
    }
}

/// A branching point: one parent bond feeding an ordered list of children.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vertex {
    pub parent: usize,
    pub children: Vec<usize>,
}

/// Immutable rooted tree of bonds.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphTopology {
    bonds: Vec<Bond>,
    vertices: Vec<Vertex>,
    truncation: usize,
}

/// Splits a path label into its child indices, e.g. `"12(10)"` -> `[1, 2, 10]`.
pub fn parse_label(label: &str) -> Result<Vec<u32>> {
    let bad = || Error::structure(format!("malformed bond label `{label}`"));
    let mut out = Vec::new();
    let mut chars = label.chars();
    while let Some(c) = chars.next() {
        match c {
            '1'..='9' => out.push(c as u32 - '0' as u32),
            '(' => {
                let mut digits = String::new();
                loop {
                    match chars.next() {
                        Some(')') => break,
                        Some(d) if d.is_ascii_digit() => digits.push(d),
                        _ => return Err(bad()),
                    }
                }
                let k: u32 = digits.parse().map_err(|_| bad())?;
                if k == 0 {
                    return Err(bad());
                }
                out.push(k);
            }
            _ => return Err(bad()),
        }
    }
    if out.first() != Some(&1) {
        return Err(bad());
    }
    Ok(out)
}

pub fn child_label(parent: &str, index: usize) -> String {
    if (1..=9).contains(&index) {
        format!("{parent}{index}")
    } else {
        format!("{parent}({index})")
    }
}

fn check_gamma(gamma: f64, what: &str) -> Result<()> {
    if gamma.is_finite() && gamma > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "nonlinearity of {what} must be positive and finite, got {gamma}"
        )))
    }
}

fn check_truncation(truncation: usize) -> Result<()> {
    if truncation < 2 {
        return Err(Error::invalid(format!(
            "truncation must be at least 2 sites, got {truncation}"
        )));
    }
    Ok(())
}

impl GraphTopology {
    /// Builds a topology from a flat list of bonds whose labels form a
    /// prefix tree rooted at `"1"`.
    pub fn from_bonds(specs: &[BondSpec], truncation: usize) -> Result<Self> {
        check_truncation(truncation)?;

        let mut parsed: Vec<(Vec<u32>, &BondSpec)> = Vec::with_capacity(specs.len());
        for spec in specs {
            check_gamma(spec.gamma, &format!("bond `{}`", spec.label))?;
            parsed.push((parse_label(&spec.label)?, spec));
        }
        // Lexicographic order on index paths is a preorder walk with the root first.
        parsed.sort_by(|a, b| a.0.cmp(&b.0));
        for pair in parsed.windows(2) {
            if pair[0].0 == pair[1].0 {
                return Err(Error::structure(format!(
                    "duplicate bond label `{}`",
                    pair[0].1.label
                )));
            }
        }

        match parsed.first() {
            Some((path, _)) if path.len() == 1 && path[0] == 1 => {}
            _ => return Err(Error::structure("no incoming bond labelled `1`")),
        }
        if parsed.iter().filter(|(path, _)| path.len() == 1).count() > 1 {
            return Err(Error::structure("bond labels must all descend from `1`"));
        }

        let mut bonds: Vec<Bond> = Vec::with_capacity(parsed.len());
        for (idx, (path, spec)) in parsed.iter().enumerate() {
            let parent = if path.len() == 1 {
                None
            } else {
                let parent_path = &path[..path.len() - 1];
                let p = parsed[..idx]
                    .iter()
                    .position(|(q, _)| q.as_slice() == parent_path)
                    .ok_or_else(|| {
                        Error::structure(format!("bond `{}` has no parent bond", spec.label))
                    })?;
                Some(p)
            };

            match (parent.is_none(), spec.kind) {
                (true, BondKind::Incoming) | (false, BondKind::Internal | BondKind::Leaf) => {}
                (true, kind) => {
                    return Err(Error::structure(format!(
                        "root bond `1` must be incoming, got {kind:?}"
                    )))
                }
                (false, BondKind::Incoming) => {
                    return Err(Error::structure(format!(
                        "only bond `1` may be incoming, `{}` is marked incoming",
                        spec.label
                    )))
                }
            }

            let length = if spec.kind.is_semi_infinite() {
                truncation
            } else if spec.length == 0 {
                return Err(Error::invalid(format!(
                    "internal bond `{}` needs a positive length",
                    spec.label
                )));
            } else {
                spec.length
            };

            if let Some(p) = parent {
                bonds[p].children.push(idx);
            }
            bonds.push(Bond {
                label: spec.label.clone(),
                kind: spec.kind,
                gamma: spec.gamma,
                length,
                parent,
                children: Vec::new(),
                offset: 0,
            });
        }

        for bond in &bonds {
            match bond.kind {
                BondKind::Internal if bond.children.is_empty() => {
                    return Err(Error::structure(format!(
                        "internal bond `{}` has no children",
                        bond.label
                    )))
                }
                BondKind::Leaf if !bond.children.is_empty() => {
                    return Err(Error::structure(format!(
                        "semi-infinite leaf `{}` cannot have children",
                        bond.label
                    )))
                }
                BondKind::Incoming if bond.children.is_empty() => {
                    return Err(Error::structure(
                        "a topology needs at least two semi-infinite bonds",
                    ))
                }
                _ => {}
            }
        }

        // Parents precede children, so one forward pass fills the offsets.
        for idx in 0..bonds.len() {
            if let Some(p) = bonds[idx].parent {
                let parent = &bonds[p];
                bonds[idx].offset = parent.offset
                    + if parent.is_root() {
                        0
                    } else {
                        parent.length as i64
                    };
            }
        }

        let vertices = bonds
            .iter()
            .enumerate()
            .filter(|(_, b)| !b.children.is_empty())
            .map(|(i, b)| Vertex {
                parent: i,
                children: b.children.clone(),
            })
            .collect();

        Ok(GraphTopology {
            bonds,
            vertices,
            truncation,
        })
    }

    /// Plain infinite chain: bond `"1"` (sites `n <= 0`) continued by a
    /// single leaf `"11"` (sites `n >= 1`) of equal nonlinearity.
    pub fn chain(gamma: f64, truncation: usize) -> Result<Self> {
        check_gamma(gamma, "the chain")?;
        Self::from_bonds(
            &[
                BondSpec::new(ROOT_LABEL, BondKind::Incoming, gamma, truncation),
                BondSpec::new("11", BondKind::Leaf, gamma, truncation),
            ],
            truncation,
        )
    }

    pub fn bonds(&self) -> &[Bond] {
        &self.bonds
    }

    pub fn bond(&self, index: usize) -> &Bond {
        &self.bonds[index]
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn root(&self) -> usize {
        0
    }

    /// Total number of stored lattice sites.
    pub fn site_count(&self) -> usize {
        self.bonds.iter().map(|b| b.length).sum()
    }

    pub fn bond_index(&self, label: &str) -> Result<usize> {
        self.bonds
            .iter()
            .position(|b| b.label == label)
            .ok_or_else(|| Error::UnknownBond(label.to_string()))
    }

    pub fn leaves(&self) -> impl Iterator<Item = usize> + '_ {
        self.bonds
            .iter()
            .enumerate()
            .filter(|(_, b)| b.kind == BondKind::Leaf)
            .map(|(i, _)| i)
    }

    /// Lattice coordinate `n` of array element `index` on `bond`.
    pub fn lattice_site(&self, bond: usize, index: usize) -> i64 {
        let b = &self.bonds[bond];
        if b.is_root() {
            index as i64 - (b.length as i64 - 1)
        } else {
            index as i64 + 1
        }
    }

    /// Inverse of [`lattice_site`](Self::lattice_site).
    pub fn array_index(&self, bond: usize, site: i64) -> Option<usize> {
        let b = &self.bonds[bond];
        let idx = if b.is_root() {
            site + b.length as i64 - 1
        } else {
            site - 1
        };
        (0..b.length as i64).contains(&idx).then_some(idx as usize)
    }

    /// Number of lattice sites a wave crosses between leaving bond `"1"` and
    /// entering `bond`: the summed lengths of the internal bonds on the path.
    pub fn offset_of(&self, bond: usize) -> i64 {
        self.bonds[bond].offset
    }

    /// Bond indices from the root down to `bond`, inclusive.
    pub fn path_to(&self, bond: usize) -> Vec<usize> {
        let mut path = Vec::new();
        let mut cur = Some(bond);
        while let Some(b) = cur {
            path.push(b);
            cur = self.bonds[b].parent;
        }
        path.reverse();
        path
    }

    pub fn is_integrable(&self) -> bool {
        check_sum_rule(self)
            .iter()
            .all(|r| r.abs() <= SUM_RULE_TOLERANCE)
    }
}

/// Primary star graph: one incoming and two outgoing semi-infinite bonds.
pub fn build_psg(
    gamma1: f64,
    gamma2: f64,
    gamma3: f64,
    truncation: usize,
) -> Result<GraphTopology> {
    build_star(&[gamma1, gamma2, gamma3], truncation)
}

/// Star graph with `gammas[0]` on the incoming bond and one outgoing leaf
/// per remaining entry.
pub fn build_star(gammas: &[f64], truncation: usize) -> Result<GraphTopology> {
    if gammas.len() < 3 {
        return Err(Error::invalid(format!(
            "a star graph needs at least 3 bonds, got {}",
            gammas.len()
        )));
    }
    let root = TreeNode::root(
        gammas[0],
        gammas[1..].iter().map(|&g| TreeNode::leaf(g)).collect(),
    );
    build_tree(&root, truncation)
}

/// Builds a tree graph from a nested description rooted at bond `"1"`.
pub fn build_tree(root: &TreeNode, truncation: usize) -> Result<GraphTopology> {
    fn walk(node: &TreeNode, label: String, is_root: bool, out: &mut Vec<BondSpec>) -> Result<()> {
        let kind = if is_root {
            BondKind::Incoming
        } else if node.children.is_empty() {
            if node.length.is_some() {
                return Err(Error::structure(format!(
                    "bond `{label}` has a finite length but no children"
                )));
            }
            BondKind::Leaf
        } else {
            match node.length {
                Some(len) if len > 0 => BondKind::Internal,
                _ => {
                    return Err(Error::structure(format!(
                        "internal bond `{label}` needs a positive length"
                    )))
                }
            }
        };
        out.push(BondSpec::new(
            label.clone(),
            kind,
            node.gamma,
            node.length.unwrap_or(0),
        ));
        for (k, child) in node.children.iter().enumerate() {
            walk(child, child_label(&label, k + 1), false, out)?;
        }
        Ok(())
    }

    let mut specs = Vec::new();
    walk(root, ROOT_LABEL.to_string(), true, &mut specs)?;
    GraphTopology::from_bonds(&specs, truncation)
}

/// Residual `1/gamma_parent - sum_children 1/gamma_child`, one per vertex in
/// the order of [`GraphTopology::vertices`].
pub fn check_sum_rule(topology: &GraphTopology) -> Vec<f64> {
    topology
        .vertices()
        .iter()
        .map(|v| {
            let parent = 1.0 / topology.bond(v.parent).gamma();
            let children: f64 = v
                .children
                .iter()
                .map(|&c| 1.0 / topology.bond(c).gamma())
                .sum();
            parent - children
        })
        .collect()
}

/// Vertex weights `s` with which a child's boundary site enters its parent's
/// virtual neighbour, and vice versa.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingCoefficients {
    // Indexed by bond; the root has no parent and keeps `None`.
    s: Vec<Option<f64>>,
}

impl CouplingCoefficients {
    /// Arbitrary positive weights, one per non-root bond in bond order.
    pub fn from_values(topology: &GraphTopology, values: &[f64]) -> Result<Self> {
        let expected = topology.bonds().len() - 1;
        if values.len() != expected {
            return Err(Error::invalid(format!(
                "expected {expected} coupling weights, got {}",
                values.len()
            )));
        }
        if let Some(bad) = values.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
            return Err(Error::invalid(format!(
                "coupling weights must be positive and finite, got {bad}"
            )));
        }
        let mut s = Vec::with_capacity(values.len() + 1);
        s.push(None);
        s.extend(values.iter().copied().map(Some));
        Ok(CouplingCoefficients { s })
    }

    /// Weight of `child` at the vertex it hangs from; `None` for the root.
    pub fn get(&self, child: usize) -> Option<f64> {
        self.s.get(child).copied().flatten()
    }

    pub(crate) fn weight(&self, child: usize) -> f64 {
        self.s[child].unwrap_or(0.0)
    }

    pub fn len(&self) -> usize {
        self.s.len()
    }

    pub fn is_empty(&self) -> bool {
        self.s.is_empty()
    }
}

/// `s = sqrt(gamma_parent / gamma_child)` for every parent/child pair,
/// whether or not the sum rule holds.
pub fn coupling_coefficients(topology: &GraphTopology) -> CouplingCoefficients {
    let s = topology
        .bonds()
        .iter()
        .map(|b| {
            b.parent()
                .map(|p| libm::sqrt(topology.bond(p).gamma() / b.gamma()))
        })
        .collect();
    CouplingCoefficients { s }
}

/// Site offset of the bond labelled `label`. The launch position of a
/// soliton is not included.
pub fn site_offset(topology: &GraphTopology, label: &str) -> Result<i64> {
    let idx = topology.bond_index(label)?;
    Ok(topology.offset_of(idx))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn two_level_tree() -> GraphTopology {
        let root = TreeNode::root(
            1.0,
            vec![
                TreeNode::internal(1.5, 30, vec![TreeNode::leaf(3.0), TreeNode::leaf(3.0)]),
                TreeNode::internal(3.0, 30, vec![TreeNode::leaf(4.0), TreeNode::leaf(12.0)]),
            ],
        );
        build_tree(&root, 50).unwrap()
    }

    #[test]
    fn psg_layout() {
        let t = build_psg(1.0, 1.5, 3.0, 400).unwrap();
        let labels: Vec<_> = t.bonds().iter().map(|b| b.label()).collect();
        assert_eq!(labels, ["1", "11", "12"]);
        assert_eq!(t.bond(0).kind(), BondKind::Incoming);
        assert_eq!(t.bond(1).kind(), BondKind::Leaf);
        assert_eq!(t.site_count(), 1200);
        assert_eq!(t.vertices().len(), 1);
        assert_eq!(t.lattice_site(0, 399), 0);
        assert_eq!(t.lattice_site(0, 0), -399);
        assert_eq!(t.lattice_site(1, 0), 1);
        assert_eq!(t.array_index(0, 0), Some(399));
        assert_eq!(t.array_index(2, 400), Some(399));
        assert_eq!(t.array_index(2, 0), None);
        assert_eq!(t.array_index(0, 1), None);
    }

    #[test]
    fn invalid_parameters_rejected() {
        assert!(matches!(
            build_psg(0.0, 1.0, 1.0, 10),
            Err(Error::InvalidParameter(_))
        ));
        assert!(matches!(
            build_psg(1.0, -2.0, 1.0, 10),
            Err(Error::InvalidParameter(_))
        ));
        assert!(matches!(
            build_psg(1.0, 2.0, 2.0, 1),
            Err(Error::InvalidParameter(_))
        ));
        assert!(matches!(
            build_star(&[1.0, 2.0], 10),
            Err(Error::InvalidParameter(_))
        ));
        assert!(matches!(
            build_star(&[1.0, 2.0, f64::NAN], 10),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn star_of_three_is_psg() {
        assert_eq!(
            build_star(&[1.0, 1.5, 3.0], 77).unwrap(),
            build_psg(1.0, 1.5, 3.0, 77).unwrap()
        );
    }

    #[test]
    fn sum_rule_residuals() {
        let r = check_sum_rule(&build_psg(1.0, 1.5, 3.0, 10).unwrap());
        assert!(r[0].abs() < SUM_RULE_TOLERANCE);
        let r = check_sum_rule(&build_psg(0.5, 1.5, 3.0, 10).unwrap());
        assert!((r[0] - 1.0).abs() < 1e-15);
        let r = check_sum_rule(&build_star(&[1.0, 2.0, 4.0, 4.0], 10).unwrap());
        assert!(r[0].abs() < SUM_RULE_TOLERANCE);
        for g in [0.1, 1.0, 7.3] {
            assert!(build_psg(g, 2.0 * g, 2.0 * g, 10).unwrap().is_integrable());
        }
        assert!(!build_psg(0.5, 1.5, 3.0, 10).unwrap().is_integrable());
    }

    #[test]
    fn couplings() {
        let t = build_psg(1.0, 1.5, 3.0, 10).unwrap();
        let s = coupling_coefficients(&t);
        assert_eq!(s.get(0), None);
        assert!((s.get(1).unwrap() - 0.816_496_580_927_726).abs() < 1e-12);
        assert!((s.get(2).unwrap() - 0.577_350_269_189_626).abs() < 1e-12);
        let same = coupling_coefficients(&build_psg(2.0, 2.0, 2.0, 10).unwrap());
        assert_eq!(same.get(1), Some(1.0));
    }

    #[test]
    fn tree_structure_and_offsets() {
        let t = two_level_tree();
        let labels: Vec<_> = t.bonds().iter().map(|b| b.label()).collect();
        assert_eq!(labels, ["1", "11", "111", "112", "12", "121", "122"]);
        assert_eq!(t.vertices().len(), 3);
        assert_eq!(t.bond(1).kind(), BondKind::Internal);
        assert_eq!(t.bond(1).len(), 30);
        assert_eq!(t.bond(2).len(), 50);
        assert_eq!(site_offset(&t, "1").unwrap(), 0);
        assert_eq!(site_offset(&t, "11").unwrap(), 0);
        assert_eq!(site_offset(&t, "111").unwrap(), 30);
        assert_eq!(site_offset(&t, "122").unwrap(), 30);
        assert!(matches!(site_offset(&t, "13"), Err(Error::UnknownBond(_))));
        assert!(check_sum_rule(&t)
            .iter()
            .all(|r| r.abs() < SUM_RULE_TOLERANCE));
        assert_eq!(t.path_to(6), vec![0, 4, 6]);
    }

    #[test]
    fn degenerate_tree_is_star() {
        let root = TreeNode::root(1.0, vec![TreeNode::leaf(2.0), TreeNode::leaf(2.0)]);
        assert_eq!(
            build_tree(&root, 20).unwrap(),
            build_psg(1.0, 2.0, 2.0, 20).unwrap()
        );
    }

    #[test]
    fn malformed_flat_specs() {
        let inc = |l: &str| BondSpec::new(l, BondKind::Incoming, 1.0, 0);
        let leaf = |l: &str| BondSpec::new(l, BondKind::Leaf, 2.0, 0);
        let internal = |l: &str| BondSpec::new(l, BondKind::Internal, 2.0, 5);

        // orphan
        assert!(GraphTopology::from_bonds(&[inc("1"), leaf("11"), leaf("121")], 10).is_err());
        // duplicate
        assert!(GraphTopology::from_bonds(&[inc("1"), leaf("11"), leaf("11")], 10).is_err());
        // no root
        assert!(GraphTopology::from_bonds(&[leaf("11"), leaf("12")], 10).is_err());
        // root alone
        assert!(GraphTopology::from_bonds(&[inc("1")], 10).is_err());
        // leaf with children
        assert!(GraphTopology::from_bonds(&[inc("1"), leaf("11"), leaf("111")], 10).is_err());
        // internal without children
        assert!(GraphTopology::from_bonds(&[inc("1"), internal("11"), leaf("12")], 10).is_err());
        // second incoming
        assert!(GraphTopology::from_bonds(&[inc("1"), inc("11")], 10).is_err());
        // garbage label
        assert!(GraphTopology::from_bonds(&[inc("1"), leaf("1x")], 10).is_err());
        // order of the input does not matter
        let a = GraphTopology::from_bonds(&[leaf("12"), inc("1"), leaf("11")], 10).unwrap();
        let b = GraphTopology::from_bonds(&[inc("1"), leaf("11"), leaf("12")], 10).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn label_parsing() {
        assert_eq!(parse_label("1").unwrap(), vec![1]);
        assert_eq!(parse_label("12(10)3").unwrap(), vec![1, 2, 10, 3]);
        assert!(parse_label("").is_err());
        assert!(parse_label("2").is_err());
        assert!(parse_label("1(0)").is_err());
        assert!(parse_label("1(12").is_err());
        assert_eq!(child_label("1", 3), "13");
        assert_eq!(child_label("1", 11), "1(11)");
        let gammas: Vec<f64> = core::iter::once(1.0).chain((0..11).map(|_| 11.0)).collect();
        let star = build_star(&gammas, 10).unwrap();
        assert_eq!(star.bonds().len(), 12);
        assert!(star.bond_index("1(11)").is_ok());
    }

    #[test]
    fn chain_is_two_bonds() {
        let c = GraphTopology::chain(1.0, 8).unwrap();
        assert_eq!(c.bonds().len(), 2);
        assert!(c.is_integrable());
        assert_eq!(coupling_coefficients(&c).get(1), Some(1.0));
    }
}
