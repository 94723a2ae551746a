//! Sigma-simulations, bisimulations, and their layered variant.
//!
//! A sigma-simulation transports truth of `phi` at one model to truth of
//! `sigma(phi)` at the other: Harmony relates the complete literal sets of
//! paired worlds through `sigma`, Zig and Zag match successors relation by
//! relation. The checkers compute the greatest relation satisfying
//! Harmony/Zig/Zag by fixpoint refinement from the full product of the
//! reachable parts, then check the roots. Zig and Zag range over the stored
//! relational modalities of both models.

use std::collections::BTreeSet;

use crate::formula::Literal;
use crate::permutation::{Permutation, PermutationError, PermutationSequence};

use super::FiniteModel;

/// A simulation witness: pairs of world indices into the two models.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SimulationRelation {
    pub pairs: BTreeSet<(usize, usize)>,
}

impl SimulationRelation {
    pub fn contains(&self, left: usize, right: usize) -> bool {
        self.pairs.contains(&(left, right))
    }
}

/// A layered simulation witness: one relation per sequence level, level `i`
/// (0-based) governed by the suffix of the sequence starting at element `i`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LayeredSimulationRelation {
    pub levels: Vec<BTreeSet<(usize, usize)>>,
}

impl LayeredSimulationRelation {
    pub fn contains(&self, level: usize, left: usize, right: usize) -> bool {
        self.levels.get(level).is_some_and(|z| z.contains(&(left, right)))
    }
}

fn atom_universe(sigma: &Permutation, left: &FiniteModel, right: &FiniteModel) -> BTreeSet<String> {
    let mut atoms: BTreeSet<String> = sigma.support().into_iter().map(|l| l.atom).collect();
    atoms.extend(left.atoms());
    atoms.extend(right.atoms());
    atoms
}

/// Harmony under `sigma`: `l` in the complete literal set of the left world
/// iff `sigma(l)` in the complete literal set of the right world, for every
/// literal over the finite atom universe. For a consistent `sigma`,
/// checking the literal chosen by the left valuation suffices per atom.
fn harmony(
    sigma: &Permutation,
    atoms: &BTreeSet<String>,
    left: &FiniteModel,
    w: usize,
    right: &FiniteModel,
    v: usize,
) -> bool {
    atoms.iter().all(|a| {
        let lit = Literal { atom: a.clone(), positive: left.valuation(w).contains(a) };
        let image = sigma.apply(&lit);
        right.valuation(v).contains(&image.atom) == image.positive
    })
}

fn relation_names(left: &FiniteModel, right: &FiniteModel) -> BTreeSet<String> {
    left.relation_names().chain(right.relation_names()).map(String::from).collect()
}

/// Zig: every left successor has a partner among the right successors under
/// the same relational modality (relational names are fixed by every
/// permutation). `zag` is the mirror image.
fn zig_zag_ok(
    names: &BTreeSet<String>,
    left: &FiniteModel,
    right: &FiniteModel,
    z: &BTreeSet<(usize, usize)>,
    w: usize,
    v: usize,
    link: impl Fn(usize, usize) -> (usize, usize),
) -> bool {
    names.iter().all(|m| {
        let ls = left.relational_successors(m, w);
        let rs = right.relational_successors(m, v);
        ls.iter().all(|&n| rs.iter().any(|&n2| z.contains(&link(n, n2))))
    })
}

/// The greatest sigma-simulation between two models, if the roots are
/// related by it.
pub fn find_sigma_simulation(
    sigma: &Permutation,
    left: &FiniteModel,
    right: &FiniteModel,
) -> Result<Option<SimulationRelation>, PermutationError> {
    if !sigma.is_consistent() {
        let l = sigma.support().into_iter().next().unwrap_or_else(|| Literal::pos("p"));
        return Err(PermutationError::NotConsistent(l));
    }
    let atoms = atom_universe(sigma, left, right);
    let names = relation_names(left, right);
    let ext_left = left.reachable();
    let ext_right = right.reachable();

    let mut z: BTreeSet<(usize, usize)> = ext_left
        .iter()
        .flat_map(|&w| ext_right.iter().map(move |&v| (w, v)))
        .filter(|&(w, v)| harmony(sigma, &atoms, left, w, right, v))
        .collect();

    loop {
        let keep: BTreeSet<(usize, usize)> = z
            .iter()
            .copied()
            .filter(|&(w, v)| {
                zig_zag_ok(&names, left, right, &z, w, v, |n, n2| (n, n2))
                    && zig_zag_ok(&names, right, left, &z, v, w, |n2, n| (n, n2))
            })
            .collect();
        if keep.len() == z.len() {
            break;
        }
        z = keep;
    }

    if z.contains(&(left.point(), right.point())) {
        Ok(Some(SimulationRelation { pairs: z }))
    } else {
        Ok(None)
    }
}

/// Bisimilarity on the reachable parts: the identity-permutation case of
/// the sigma-simulation checker.
pub fn is_bisimilar(left: &FiniteModel, right: &FiniteModel) -> bool {
    find_sigma_simulation(&Permutation::identity(), left, right)
        .expect("identity permutation is consistent")
        .is_some()
}

/// The greatest layered simulation for a permutation sequence, if the roots
/// are related at level 0.
///
/// Level `i` uses the head of the suffix starting at element `i` for
/// Harmony; Zig and Zag step from level `i` to level `i + 1`. Levels at and
/// beyond the sequence length all use the empty sequence (a bisimulation),
/// so one extra level closes the family.
pub fn find_layered_simulation(
    seq: &PermutationSequence,
    left: &FiniteModel,
    right: &FiniteModel,
) -> Result<Option<LayeredSimulationRelation>, PermutationError> {
    for p in &seq.elements {
        if !p.is_consistent() {
            let l = p.support().into_iter().next().unwrap_or_else(|| Literal::pos("p"));
            return Err(PermutationError::NotConsistent(l));
        }
    }
    let identity = Permutation::identity();
    let levels_n = seq.len() + 1;
    let head = |i: usize| seq.elements.get(i).unwrap_or(&identity);

    let names = relation_names(left, right);
    let ext_left = left.reachable();
    let ext_right = right.reachable();

    let mut levels: Vec<BTreeSet<(usize, usize)>> = (0..levels_n)
        .map(|i| {
            let atoms = atom_universe(head(i), left, right);
            ext_left
                .iter()
                .flat_map(|&w| ext_right.iter().map(move |&v| (w, v)))
                .filter(|&(w, v)| harmony(head(i), &atoms, left, w, right, v))
                .collect()
        })
        .collect();

    loop {
        let mut changed = false;
        for i in 0..levels_n {
            let next = (i + 1).min(levels_n - 1);
            let z_next = levels[next].clone();
            let keep: BTreeSet<(usize, usize)> = levels[i]
                .iter()
                .copied()
                .filter(|&(w, v)| {
                    zig_zag_ok(&names, left, right, &z_next, w, v, |n, n2| (n, n2))
                        && zig_zag_ok(&names, right, left, &z_next, v, w, |n2, n| (n, n2))
                })
                .collect();
            if keep.len() != levels[i].len() {
                levels[i] = keep;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }

    if levels[0].contains(&(left.point(), right.point())) {
        Ok(Some(LayeredSimulationRelation { levels }))
    } else {
        Ok(None)
    }
}
