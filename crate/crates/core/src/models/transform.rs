//! Model transformations: permutation by a literal permutation, truncated
//! unravelling, and layered permutation of tree models.

use std::collections::BTreeSet;

use crate::formula::Literal;
use crate::permutation::{Permutation, PermutationError, PermutationSequence};

use super::{FiniteModel, ModelError, TreeModel};

/// The image of a model under a consistent permutation.
///
/// Per-world valuations become the positive part of the permuted complete
/// literal set; atoms outside the permutation's support and the valuation
/// are untouched, so the infinite complement is never materialized.
/// Relational modality names are fixed by every permutation, so the frame
/// carries over unchanged.
pub fn permute_model(sigma: &Permutation, model: &FiniteModel) -> Result<FiniteModel, PermutationError> {
    if !sigma.is_consistent() {
        let l = sigma.support().into_iter().next().unwrap_or_else(|| Literal::pos("p"));
        return Err(PermutationError::NotConsistent(l));
    }
    let support_atoms: BTreeSet<String> = sigma.support().into_iter().map(|l| l.atom).collect();
    let valuations = model
        .valuations()
        .iter()
        .map(|val| permute_valuation(sigma, &support_atoms, val))
        .collect();
    Ok(FiniteModel::from_parts(
        model.worlds().to_vec(),
        model.point(),
        valuations,
        model.relations().clone(),
    ))
}

fn permute_valuation(
    sigma: &Permutation,
    support_atoms: &BTreeSet<String>,
    val: &BTreeSet<String>,
) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    for atom in support_atoms.union(val) {
        let lit = Literal { atom: atom.clone(), positive: val.contains(atom) };
        let image = sigma.apply(&lit);
        if image.positive {
            out.insert(image.atom);
        }
    }
    out
}

/// The tree of all relational paths from the point, truncated at `depth`
/// steps. Agrees with the original model on every formula whose modal depth
/// is within the bound.
pub fn unravel(model: &FiniteModel, depth: usize) -> TreeModel {
    let mut worlds: Vec<String> = Vec::new();
    let mut used: BTreeSet<String> = BTreeSet::new();
    let mut origin: Vec<usize> = Vec::new();
    let mut depths: Vec<usize> = Vec::new();
    let mut valuations = Vec::new();
    let mut relations: std::collections::BTreeMap<String, BTreeSet<(usize, usize)>> =
        std::collections::BTreeMap::new();

    let fresh_name = |candidate: String, used: &mut BTreeSet<String>| -> String {
        let mut name = candidate;
        while !used.insert(name.clone()) {
            name.push('\'');
        }
        name
    };

    let root_name = fresh_name(model.point_name().to_string(), &mut used);
    worlds.push(root_name);
    origin.push(model.point());
    depths.push(0);
    valuations.push(model.valuation(model.point()).clone());

    let mut frontier = vec![0usize];
    for level in 0..depth {
        let mut next = Vec::new();
        for &path in &frontier {
            let last = origin[path];
            for name in model.relation_names().map(String::from).collect::<Vec<_>>() {
                for succ in model.relational_successors(&name, last) {
                    let candidate = format!("{}.{}.{}", worlds[path], name, model.worlds()[succ]);
                    let world_name = fresh_name(candidate, &mut used);
                    let idx = worlds.len();
                    worlds.push(world_name);
                    origin.push(succ);
                    depths.push(level + 1);
                    valuations.push(model.valuation(succ).clone());
                    relations.entry(name.clone()).or_default().insert((path, idx));
                    next.push(idx);
                }
            }
        }
        frontier = next;
    }

    let tree = FiniteModel::from_parts(worlds, 0, valuations, relations);
    TreeModel::from_parts(tree, depths, depth)
}

/// Layered permutation of a tree model: element `i` of the sequence
/// transforms the valuations of worlds at tree depth `i - 1`; deeper levels
/// than the sequence length are untouched.
pub fn permute_tree_layered(
    seq: &PermutationSequence,
    tree: &TreeModel,
) -> Result<TreeModel, ModelError> {
    for p in &seq.elements {
        if !p.is_consistent() {
            let l = p.support().into_iter().next().unwrap_or_else(|| Literal::pos("p"));
            return Err(ModelError::Permutation(PermutationError::NotConsistent(l)));
        }
    }
    let identity = Permutation::identity();
    let model = tree.model();
    let valuations = model
        .valuations()
        .iter()
        .enumerate()
        .map(|(w, val)| {
            let sigma = seq.elements.get(tree.depth_of(w)).unwrap_or(&identity);
            let support_atoms: BTreeSet<String> = sigma.support().into_iter().map(|l| l.atom).collect();
            permute_valuation(sigma, &support_atoms, val)
        })
        .collect();
    let permuted = FiniteModel::from_parts(
        model.worlds().to_vec(),
        model.point(),
        valuations,
        model.relations().clone(),
    );
    Ok(TreeModel::from_parts(permuted, tree.depths().to_vec(), tree.depth_bound()))
}
