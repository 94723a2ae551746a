//! Symmetry detection by reduction to colored-graph automorphism.
//!
//! The pipeline canonicalizes the formula, builds the detection graph,
//! searches for a generator set of the color- and edge-preserving
//! automorphism group, maps each generator back to a literal permutation
//! (or a per-depth permutation sequence for the layered graph), and
//! verifies every generator against the formula before reporting it.

mod automorphism;
mod export;
mod graph;

pub use automorphism::{find_automorphisms, AutomorphismGroup};
pub use export::{export_graph, GraphFormat};
pub use graph::{
    build_graph, build_graph_layered, build_graph_layered_with, build_graph_with, ColoredGraph,
    DetectOptions, DetectionGraph, NodeLabel,
};

use std::collections::BTreeMap;

use thiserror::Error;

use crate::formula::{Clause, ModalCnf, Modality};
use crate::permutation::{Permutation, PermutationError, PermutationSequence};

/// Group orders above this cap are not reported; generators still are.
pub const GROUP_ORDER_CAP: u128 = 1_000_000;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum DetectError {
    #[error("inconsistent detection graph: {0}")]
    BadGraph(String),
    #[error("internal error in the detection pipeline: {0}")]
    Internal(String),
    #[error("a detected generator failed symmetry verification")]
    UnverifiedGenerator,
    #[error(transparent)]
    Permutation(#[from] PermutationError),
}

/// Unique identifier of a clause occurrence: the modal depth at which it
/// occurs, its type color, and an index fresh per occurrence.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ClauseId {
    pub depth: usize,
    pub color: u32,
    pub index: usize,
}

/// A clause occurrence with its identifier and position in the formula.
#[derive(Clone, Debug)]
pub struct ClauseEntry {
    pub id: ClauseId,
    pub clause: Clause,
    /// Entry index of the enclosing clause, if any.
    pub parent: Option<usize>,
    /// Modality and polarity of the modal literal wrapping this clause.
    pub via: Option<(Modality, bool)>,
    /// Entry indices of nested clause occurrences, in canonical order.
    pub children: Vec<usize>,
}

/// The color family of a modality. Atom-indexed modalities share one
/// family: their index is carried structurally by an `E2` edge, so a
/// symmetry may map `[@i]C` to `[@j]C'` while the graph tracks the index
/// through the literal nodes. Relational names are fixed by every
/// permutation and keep one family per name.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum ModalityFamily {
    Relational(String),
    Universal,
    AtomIndexed,
}

impl ModalityFamily {
    pub fn of(modality: &Modality) -> ModalityFamily {
        match modality {
            Modality::Relational(n) => ModalityFamily::Relational(n.clone()),
            Modality::Universal => ModalityFamily::Universal,
            Modality::AtomIndexed(_) => ModalityFamily::AtomIndexed,
        }
    }
}

/// The typing and identifier assignment for every clause occurrence of a
/// canonical formula. Top clauses have color 1; the body of `[m]C` has
/// color `s(m, 0)` and the body of `~[m]C` color `s(m, 1)`, with
/// `s(m, pol) = 2 + 2 * index(family(m)) + pol` over modality families in
/// first-occurrence order. Identifier assignment is injective over
/// occurrences and deterministic given the canonical form.
#[derive(Clone, Debug)]
pub struct IdAssignment {
    pub entries: Vec<ClauseEntry>,
    families: Vec<ModalityFamily>,
}

impl IdAssignment {
    pub fn assign(phi: &ModalCnf) -> IdAssignment {
        let phi = phi.canonicalize();
        let mut families = Vec::new();
        for m in phi.modalities() {
            let family = ModalityFamily::of(&m);
            if !families.contains(&family) {
                families.push(family);
            }
        }
        let occurrences = graph::collect_occurrences(&phi);
        let mut entries: Vec<ClauseEntry> = Vec::with_capacity(occurrences.len());
        for (index, occ) in occurrences.into_iter().enumerate() {
            let color = match &occ.via {
                None => 1,
                Some((m, positive)) => type_color(&families, m, *positive),
            };
            if let Some(p) = occ.parent {
                entries[p].children.push(index);
            }
            entries.push(ClauseEntry {
                id: ClauseId { depth: occ.depth, color, index },
                clause: occ.clause,
                parent: occ.parent,
                via: occ.via,
                children: Vec::new(),
            });
        }
        IdAssignment { entries, families }
    }

    /// The injective type encoder `s`: colors 2 and up, two per modality
    /// family.
    pub fn type_color(&self, modality: &Modality, positive: bool) -> u32 {
        type_color(&self.families, modality, positive)
    }

    pub(crate) fn family_count(&self) -> usize {
        self.families.len()
    }

    pub(crate) fn child_of(&self, entry: usize, child_index: usize) -> usize {
        self.entries[entry].children[child_index]
    }
}

fn type_color(families: &[ModalityFamily], modality: &Modality, positive: bool) -> u32 {
    let family = ModalityFamily::of(modality);
    let idx = families.iter().position(|f| *f == family).expect("modality occurs in the formula");
    2 + 2 * idx as u32 + if positive { 0 } else { 1 }
}

/// Identifier map for every clause occurrence of the canonical formula.
pub fn assign_ids(phi: &ModalCnf) -> Vec<(Clause, ClauseId)> {
    IdAssignment::assign(phi).entries.into_iter().map(|e| (e.clause, e.id)).collect()
}

/// Detected symmetry group: verified generators in cycle notation.
#[derive(Clone, Debug)]
pub struct SymmetryReport {
    pub generators: Vec<Permutation>,
    /// Exact group order, absent above [`GROUP_ORDER_CAP`].
    pub group_order: Option<u128>,
    /// Every reported generator passed `is_symmetry`.
    pub verified: bool,
}

impl SymmetryReport {
    pub fn is_trivial(&self) -> bool {
        self.generators.is_empty()
    }
}

/// Detected layered symmetry group: verified permutation sequences.
#[derive(Clone, Debug)]
pub struct LayeredSymmetryReport {
    pub generators: Vec<PermutationSequence>,
    pub group_order: Option<u128>,
    pub verified: bool,
}

impl LayeredSymmetryReport {
    pub fn is_trivial(&self) -> bool {
        self.generators.is_empty()
    }
}

fn cap_order(order: u128) -> Option<u128> {
    (order <= GROUP_ORDER_CAP).then_some(order)
}

/// Restricts a verified graph automorphism to the literal nodes and
/// translates it back through the construction mapping.
pub fn automorphism_to_symmetry(
    pi: &[usize],
    dg: &DetectionGraph,
) -> Result<Permutation, DetectError> {
    let map = literal_restriction(pi, dg, None)?;
    let sigma = Permutation::from_map(map)
        .map_err(|e| DetectError::Internal(format!("literal restriction is not a bijection: {e}")))?;
    if !sigma.is_consistent() {
        return Err(DetectError::Internal("restricted permutation is not consistent".into()));
    }
    Ok(sigma)
}

/// Restricts a verified layered-graph automorphism to one permutation per
/// modal depth.
pub fn automorphism_to_layered(
    pi: &[usize],
    dg: &DetectionGraph,
) -> Result<PermutationSequence, DetectError> {
    let mut depth_count = 0;
    for label in &dg.labels {
        if let NodeLabel::Literal { depth: Some(d), .. } = label {
            depth_count = depth_count.max(d + 1);
        }
    }
    let mut elements = Vec::with_capacity(depth_count);
    for d in 0..depth_count {
        let map = literal_restriction(pi, dg, Some(d))?;
        let sigma = Permutation::from_map(map)
            .map_err(|e| DetectError::Internal(format!("depth {d} restriction is not a bijection: {e}")))?;
        if !sigma.is_consistent() {
            return Err(DetectError::Internal(format!("depth {d} restriction is not consistent")));
        }
        elements.push(sigma);
    }
    Ok(PermutationSequence::new(elements))
}

fn literal_restriction(
    pi: &[usize],
    dg: &DetectionGraph,
    depth: Option<usize>,
) -> Result<BTreeMap<crate::formula::Literal, crate::formula::Literal>, DetectError> {
    let mut map = BTreeMap::new();
    for node in dg.literal_node_indices() {
        let NodeLabel::Literal { literal, depth: node_depth } = &dg.labels[node] else {
            unreachable!()
        };
        if depth.is_some() && *node_depth != depth {
            continue;
        }
        let image = pi
            .get(node)
            .copied()
            .ok_or_else(|| DetectError::Internal("automorphism does not cover the graph".into()))?;
        match &dg.labels[image] {
            NodeLabel::Literal { literal: target, depth: target_depth } => {
                if target_depth != node_depth {
                    return Err(DetectError::Internal(
                        "automorphism moves a literal across depths".into(),
                    ));
                }
                map.insert(literal.clone(), target.clone());
            }
            NodeLabel::Clause { .. } => {
                return Err(DetectError::Internal(
                    "automorphism maps a literal node to a clause node".into(),
                ));
            }
        }
    }
    Ok(map)
}

/// Detects the symmetry group of a formula with default options.
pub fn detect_symmetries(phi: &ModalCnf) -> Result<SymmetryReport, DetectError> {
    detect_symmetries_with(phi, DetectOptions::default())
}

pub fn detect_symmetries_with(
    phi: &ModalCnf,
    options: DetectOptions,
) -> Result<SymmetryReport, DetectError> {
    let phi = phi.canonicalize();
    let dg = build_graph_with(&phi, options);
    let group = find_automorphisms(&dg.graph)?;
    let mut generators = Vec::new();
    for pi in &group.generators {
        let sigma = automorphism_to_symmetry(pi, &dg)?;
        if sigma.is_identity() {
            return Err(DetectError::Internal(
                "non-identity automorphism restricted to the identity".into(),
            ));
        }
        if !sigma.is_symmetry(&phi)? {
            return Err(DetectError::UnverifiedGenerator);
        }
        generators.push(sigma);
    }
    Ok(SymmetryReport { generators, group_order: cap_order(group.order), verified: true })
}

/// Detects the layered symmetry group of a formula with default options.
pub fn detect_layered_symmetries(phi: &ModalCnf) -> Result<LayeredSymmetryReport, DetectError> {
    detect_layered_symmetries_with(phi, DetectOptions::default())
}

pub fn detect_layered_symmetries_with(
    phi: &ModalCnf,
    options: DetectOptions,
) -> Result<LayeredSymmetryReport, DetectError> {
    let phi = phi.canonicalize();
    let dg = build_graph_layered_with(&phi, options);
    let group = find_automorphisms(&dg.graph)?;
    let mut generators = Vec::new();
    for pi in &group.generators {
        let seq = automorphism_to_layered(pi, &dg)?;
        if seq.elements.iter().all(Permutation::is_identity) {
            return Err(DetectError::Internal(
                "non-identity automorphism restricted to the identity".into(),
            ));
        }
        if !seq.is_layered_symmetry(&phi)? {
            return Err(DetectError::UnverifiedGenerator);
        }
        generators.push(seq);
    }
    Ok(LayeredSymmetryReport { generators, group_order: cap_order(group.order), verified: true })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_to_cnf;

    fn fig5() -> ModalCnf {
        crate::formula::Formula::parse("(a | [m](b | ~[m]c)) & (b | [m](a | ~[m]c))")
            .unwrap()
            .to_cnf()
    }

    #[test]
    fn id_assignment_of_the_two_level_example() {
        let ids = assign_ids(&fig5());
        assert_eq!(ids.len(), 6);
        let mut by_depth: BTreeMap<usize, Vec<u32>> = BTreeMap::new();
        for (_, id) in &ids {
            by_depth.entry(id.depth).or_default().push(id.color);
        }
        // Two top clauses, two positive-box bodies at depth 1, two
        // negative-box bodies at depth 2.
        assert_eq!(by_depth[&0], vec![1, 1]);
        assert_eq!(by_depth[&1], vec![2, 2]);
        assert_eq!(by_depth[&2], vec![3, 3]);
        // Identifier assignment is injective.
        let indices: std::collections::BTreeSet<_> = ids.iter().map(|(_, id)| id.index).collect();
        assert_eq!(indices.len(), 6);
    }

    #[test]
    fn empty_formula_has_the_trivial_group() {
        let report = detect_symmetries(&ModalCnf::default()).unwrap();
        assert!(report.is_trivial());
        assert_eq!(report.group_order, Some(1));
    }

    #[test]
    fn unit_clause_gets_the_top_id() {
        let ids = assign_ids(&parse_to_cnf("{ { p } }").unwrap());
        assert_eq!(ids.len(), 1);
        assert_eq!(ids[0].1, ClauseId { depth: 0, color: 1, index: 0 });
    }

    #[test]
    fn negative_modal_clause_is_typed_by_polarity() {
        let ids = assign_ids(&parse_to_cnf("{ { ~[m]{ p } } }").unwrap());
        assert_eq!(ids.len(), 2);
        assert_eq!(ids[0].1, ClauseId { depth: 0, color: 1, index: 0 });
        // s(m, 1) = 3 for the first modality.
        assert_eq!(ids[1].1, ClauseId { depth: 1, color: 3, index: 1 });
    }
}
