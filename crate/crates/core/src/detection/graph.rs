//! Colored-graph construction for symmetry detection.
//!
//! The graph has one node pair per atom (color 0) joined by a Boolean
//! consistency edge, one node per top clause (color 1), and one node per
//! modal clause occurrence colored by the modality and polarity of the
//! modal literal wrapping it. Clause nodes connect through `E1` to their
//! atom literals and to their nested modal clauses; an atom-indexed
//! modality adds an `E2` edge from the modal clause node to its index
//! literal. In the layered construction literal nodes are duplicated per
//! modal depth, so automorphisms decompose into per-depth permutations.

use std::collections::{BTreeMap, BTreeSet};

use crate::formula::{is_definitional_atom, Clause, Literal, ModalCnf, Modality};

use super::{ClauseId, IdAssignment};

/// An undirected graph with node colors and two edge sorts.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ColoredGraph {
    pub colors: Vec<u32>,
    pub e1: BTreeSet<(usize, usize)>,
    pub e2: BTreeSet<(usize, usize)>,
}

impl ColoredGraph {
    pub fn node_count(&self) -> usize {
        self.colors.len()
    }

    pub fn color_count(&self) -> usize {
        self.colors.iter().collect::<BTreeSet<_>>().len()
    }
}

pub(crate) fn edge(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

/// What a graph node stands for; `depth` is set in the layered construction.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum NodeLabel {
    Literal { literal: Literal, depth: Option<usize> },
    Clause { id: ClauseId },
}

/// The detection graph together with the mapping induced by its
/// construction (literals and clause occurrences to nodes).
#[derive(Clone, Debug)]
pub struct DetectionGraph {
    pub graph: ColoredGraph,
    pub labels: Vec<NodeLabel>,
    literal_nodes: BTreeMap<(Literal, Option<usize>), usize>,
    layered: bool,
}

impl DetectionGraph {
    pub fn is_layered(&self) -> bool {
        self.layered
    }

    /// The node of a literal (at a depth, for layered graphs).
    pub fn literal_node(&self, literal: &Literal, depth: Option<usize>) -> Option<usize> {
        self.literal_nodes.get(&(literal.clone(), depth)).copied()
    }

    /// Indices of all literal nodes.
    pub fn literal_node_indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.labels.iter().enumerate().filter_map(|(i, l)| match l {
            NodeLabel::Literal { .. } => Some(i),
            NodeLabel::Clause { .. } => None,
        })
    }
}

/// Options for graph construction and detection.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct DetectOptions {
    /// When false (the default), atoms introduced by the CNF transform get
    /// a unique color each, pinning them as fixed points of every
    /// automorphism.
    pub include_aux_atoms: bool,
}

/// Plain construction: literal nodes are shared across depths.
pub fn build_graph(phi: &ModalCnf) -> DetectionGraph {
    build_graph_with(phi, DetectOptions::default())
}

pub fn build_graph_with(phi: &ModalCnf, options: DetectOptions) -> DetectionGraph {
    build(phi, options, false)
}

/// Layered construction: a fresh literal node pair per depth at which the
/// atom occurs.
pub fn build_graph_layered(phi: &ModalCnf) -> DetectionGraph {
    build_graph_layered_with(phi, DetectOptions::default())
}

pub fn build_graph_layered_with(phi: &ModalCnf, options: DetectOptions) -> DetectionGraph {
    build(phi, options, true)
}

fn build(phi: &ModalCnf, options: DetectOptions, layered: bool) -> DetectionGraph {
    let phi = phi.canonicalize();
    let ids = IdAssignment::assign(&phi);
    let family_count = ids.family_count();

    // Literal universe: (atom, None) pairs, or (atom, depth) pairs at every
    // depth where the atom occurs (as a literal or as a modality index).
    let slots: Vec<(String, Option<usize>)> = if layered {
        let mut by_depth: BTreeMap<usize, BTreeSet<String>> = BTreeMap::new();
        for entry in &ids.entries {
            let depth_atoms = by_depth.entry(entry.id.depth).or_default();
            for l in &entry.clause.atom_literals {
                depth_atoms.insert(l.atom.clone());
            }
            for ml in &entry.clause.modal_literals {
                if let Some(i) = ml.modality.index_atom() {
                    depth_atoms.insert(i.to_string());
                }
            }
        }
        by_depth
            .into_iter()
            .flat_map(|(d, atoms)| atoms.into_iter().map(move |a| (a, Some(d))))
            .collect()
    } else {
        phi.atoms().into_iter().map(|a| (a, None)).collect()
    };

    let mut colors = Vec::new();
    let mut labels = Vec::new();
    let mut literal_nodes = BTreeMap::new();
    let mut e1 = BTreeSet::new();
    let mut e2 = BTreeSet::new();

    // Colors 0 and 1 are literals and top clauses; modal clause colors run
    // from 2 to 2 + 2 * families - 1; pinned definitional atoms take fresh
    // colors above that.
    let mut pin_color = 2 + 2 * family_count as u32;

    for (atom, depth) in &slots {
        let pinned = !options.include_aux_atoms && is_definitional_atom(atom);
        for positive in [true, false] {
            let literal = Literal { atom: atom.clone(), positive };
            let node = colors.len();
            if pinned {
                colors.push(pin_color);
                pin_color += 1;
            } else {
                colors.push(0);
            }
            labels.push(NodeLabel::Literal { literal: literal.clone(), depth: *depth });
            literal_nodes.insert((literal, *depth), node);
        }
        let pos = colors.len() - 2;
        e1.insert(edge(pos, pos + 1));
    }

    // One node per clause occurrence, in the deterministic walk order of
    // the id assignment.
    let clause_base = colors.len();
    for entry in &ids.entries {
        let node = colors.len();
        colors.push(entry.id.color);
        labels.push(NodeLabel::Clause { id: entry.id });
        if let Some(parent) = entry.parent {
            e1.insert(edge(clause_base + parent, node));
        }
    }

    for (i, entry) in ids.entries.iter().enumerate() {
        let clause_node = clause_base + i;
        let lit_depth = if layered { Some(entry.id.depth) } else { None };
        for l in &entry.clause.atom_literals {
            let ln = literal_nodes[&(l.clone(), lit_depth)];
            e1.insert(edge(clause_node, ln));
        }
        for (child_index, ml) in entry.clause.modal_literals.iter().enumerate() {
            if let Some(index_atom) = ml.modality.index_atom() {
                // The index is permuted at the depth of the clause that
                // contains the modal literal.
                let ln = literal_nodes[&(Literal::pos(index_atom), lit_depth)];
                let child_entry = ids.child_of(i, child_index);
                e2.insert(edge(clause_base + child_entry, ln));
            }
        }
    }

    DetectionGraph { graph: ColoredGraph { colors, e1, e2 }, labels, literal_nodes, layered }
}

/// Collects clause occurrences in canonical depth-first order.
pub(crate) fn collect_occurrences(phi: &ModalCnf) -> Vec<Occurrence> {
    let mut out = Vec::new();
    for clause in &phi.clauses {
        visit(clause, 0, None, None, &mut out);
    }
    out
}

pub(crate) struct Occurrence {
    pub clause: Clause,
    pub depth: usize,
    pub parent: Option<usize>,
    pub via: Option<(Modality, bool)>,
}

fn visit(
    clause: &Clause,
    depth: usize,
    parent: Option<usize>,
    via: Option<(Modality, bool)>,
    out: &mut Vec<Occurrence>,
) {
    let index = out.len();
    out.push(Occurrence { clause: clause.clone(), depth, parent, via });
    for ml in &clause.modal_literals {
        visit(&ml.body, depth + 1, Some(index), Some((ml.modality.clone(), ml.positive)), out);
    }
}
