//! Bounded model enumeration, the bounded entailment oracle, and the
//! class-closure check for permutations.

use std::collections::{BTreeMap, BTreeSet};

use crate::formula::{Literal, ModalCnf};
use crate::permutation::{Permutation, PermutationError};

use super::semantics::eval_cnf;
use super::{check_class, ClassSpec, FiniteModel, ModelError};

/// Hard cap on the number of models an enumeration may describe.
const MAX_ENUMERATION: u128 = 1 << 62;

/// Exhaustive enumeration of spec-conforming models up to a world bound:
/// every valuation of the plain atoms, every placement of each nominal at
/// exactly one world, every subset of each relation, every point.
///
/// Enumeration order is deterministic and models are random-access by
/// index, so streams can be re-created and sampled independently.
#[derive(Clone, Debug)]
pub struct ModelEnumerator {
    plain: Vec<String>,
    nominals: Vec<String>,
    relations: Vec<String>,
    max_worlds: usize,
}

impl ModelEnumerator {
    pub fn new(
        atoms: &BTreeSet<String>,
        max_worlds: usize,
        spec: &ClassSpec,
    ) -> Result<Self, ModelError> {
        if max_worlds == 0 {
            return Err(ModelError::EmptyDomain);
        }
        let nominals: Vec<String> = spec.nominals.iter().cloned().collect();
        let plain: Vec<String> = atoms.iter().filter(|a| !spec.nominals.contains(*a)).cloned().collect();
        let relations: Vec<String> = spec.relational.iter().cloned().collect();
        let en = ModelEnumerator { plain, nominals, relations, max_worlds };
        if en.checked_count().is_none() {
            return Err(ModelError::EnumerationTooLarge);
        }
        Ok(en)
    }

    fn count_for(&self, n: usize) -> Option<u128> {
        let n128 = n as u128;
        let val_bits = self.plain.len().checked_mul(n)?;
        let rel_bits = self.relations.len().checked_mul(n.checked_mul(n)?)?;
        if val_bits + rel_bits > 100 {
            return None;
        }
        let mut total = n128; // point choices
        total = total.checked_mul(1u128.checked_shl(val_bits as u32)?)?;
        for _ in 0..self.nominals.len() {
            total = total.checked_mul(n128)?;
        }
        total = total.checked_mul(1u128.checked_shl(rel_bits as u32)?)?;
        (total <= MAX_ENUMERATION).then_some(total)
    }

    fn checked_count(&self) -> Option<u128> {
        let mut total: u128 = 0;
        for n in 1..=self.max_worlds {
            total = total.checked_add(self.count_for(n)?)?;
        }
        (total <= MAX_ENUMERATION).then_some(total)
    }

    /// Total number of models in the enumeration.
    pub fn count(&self) -> u128 {
        self.checked_count().expect("checked at construction")
    }

    /// Decodes the model at a given index; panics when out of range.
    pub fn get(&self, index: u128) -> FiniteModel {
        let mut index = index;
        for n in 1..=self.max_worlds {
            let c = self.count_for(n).expect("checked at construction");
            if index < c {
                return self.decode(n, index);
            }
            index -= c;
        }
        panic!("model index out of range");
    }

    fn decode(&self, n: usize, mut k: u128) -> FiniteModel {
        let worlds: Vec<String> = (1..=n).map(|i| format!("w{i}")).collect();
        let point = (k % n as u128) as usize;
        k /= n as u128;

        let mut valuations = vec![BTreeSet::new(); n];
        for val in valuations.iter_mut() {
            for a in &self.plain {
                if k & 1 == 1 {
                    val.insert(a.clone());
                }
                k >>= 1;
            }
        }
        for nom in &self.nominals {
            let w = (k % n as u128) as usize;
            k /= n as u128;
            valuations[w].insert(nom.clone());
        }

        let mut relations: BTreeMap<String, BTreeSet<(usize, usize)>> = BTreeMap::new();
        for r in &self.relations {
            let mut edges = BTreeSet::new();
            for f in 0..n {
                for t in 0..n {
                    if k & 1 == 1 {
                        edges.insert((f, t));
                    }
                    k >>= 1;
                }
            }
            if !edges.is_empty() {
                relations.insert(r.clone(), edges);
            }
        }
        FiniteModel::from_parts(worlds, point, valuations, relations)
    }

    pub fn iter(&self) -> impl Iterator<Item = FiniteModel> + '_ {
        (0..self.count()).map(|i| self.get(i))
    }
}

/// Search bounds for the entailment oracle.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Bounds {
    pub max_worlds: usize,
    pub max_depth: usize,
}

impl Bounds {
    pub fn new(max_worlds: usize, max_depth: usize) -> Self {
        Bounds { max_worlds, max_depth }
    }
}

/// Verdict of the bounded entailment oracle.
///
/// A found countermodel is always exact; an entailment verdict is exact
/// only when the class is unconstrained (basic logic over the stored
/// relations) and the bounds dominate the small-model bound.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Entailment {
    pub entailed: bool,
    pub exact: bool,
    pub countermodel: Option<FiniteModel>,
}

/// A world bound sufficient for exactness of the bounded search in the
/// basic logic: the size of a tree whose per-level branching is the number
/// of modal literal occurrences at the previous level of either formula
/// (each occurrence contributes at most one successor obligation when
/// satisfying `phi` and refuting `psi`).
pub fn small_model_bound(phi: &ModalCnf, psi: &ModalCnf) -> usize {
    let occ_phi = modal_occurrence_profile(phi);
    let occ_psi = modal_occurrence_profile(psi);
    let depth = occ_phi.len().max(occ_psi.len());
    let mut width: u128 = 1;
    let mut total: u128 = 1;
    for d in 0..depth {
        let b = (occ_phi.get(d).copied().unwrap_or(0) + occ_psi.get(d).copied().unwrap_or(0)) as u128;
        width = width.saturating_mul(b);
        if width == 0 {
            break;
        }
        total = total.saturating_add(width);
    }
    total.min(usize::MAX as u128) as usize
}

/// `profile[d]` counts modal literal occurrences in clauses at depth `d`.
fn modal_occurrence_profile(phi: &ModalCnf) -> Vec<usize> {
    fn walk(clause: &crate::formula::Clause, depth: usize, out: &mut Vec<usize>) {
        if out.len() <= depth {
            out.resize(depth + 1, 0);
        }
        out[depth] += clause.modal_literals.len();
        for ml in &clause.modal_literals {
            walk(&ml.body, depth + 1, out);
        }
    }
    let mut out = Vec::new();
    for c in &phi.clauses {
        walk(c, 0, &mut out);
    }
    out
}

/// Bounded entailment: searches the enumeration for a model of `phi` that
/// refutes `psi`. The spec is widened with the relational modalities
/// occurring in either formula; the atom universe is their atoms plus the
/// spec's nominals.
pub fn entails(
    phi: &ModalCnf,
    psi: &ModalCnf,
    spec: &ClassSpec,
    bounds: Bounds,
) -> Result<Entailment, ModelError> {
    let spec = spec.clone().covering(&[phi, psi]);
    let mut atoms = phi.atoms();
    atoms.extend(psi.atoms());
    let exact_if_entailed = spec.is_unconstrained()
        && bounds.max_worlds >= small_model_bound(phi, psi)
        && bounds.max_depth >= phi.modal_depth().max(psi.modal_depth());

    let en = ModelEnumerator::new(&atoms, bounds.max_worlds, &spec)?;
    for m in en.iter() {
        if eval_cnf(&m, m.point(), phi) && !eval_cnf(&m, m.point(), psi) {
            return Ok(Entailment { entailed: false, exact: true, countermodel: Some(m) });
        }
    }
    Ok(Entailment { entailed: true, exact: exact_if_entailed, countermodel: None })
}

/// Whether the class selected by `spec` is closed under `sigma`.
///
/// Sufficient syntactic check first: every nominal must map to a positive
/// nominal literal (a bijection on the nominal set follows). When that
/// fails, falls back to exhaustive falsification over small enumerated
/// models; relations never move under a permutation, so only valuations are
/// enumerated.
pub fn is_closed_under(sigma: &Permutation, spec: &ClassSpec) -> Result<bool, PermutationError> {
    if !sigma.is_consistent() {
        let l = sigma.support().into_iter().next().unwrap_or_else(|| Literal::pos("p"));
        return Err(PermutationError::NotConsistent(l));
    }
    if spec.nominals.is_empty() {
        return Ok(true);
    }
    let nominal_images_ok = spec.nominals.iter().all(|n| {
        let image = sigma.apply(&Literal::pos(n.clone()));
        image.positive && spec.nominals.contains(&image.atom)
    });
    if nominal_images_ok {
        return Ok(true);
    }

    // Falsification search at desk scale.
    let mut atoms: BTreeSet<String> = sigma.support().into_iter().map(|l| l.atom).collect();
    atoms.extend(spec.nominals.iter().cloned());
    let check_spec = ClassSpec {
        relational: BTreeSet::new(),
        universal: spec.universal,
        at: spec.at,
        nominals: spec.nominals.clone(),
    };
    for max_worlds in 1..=2 {
        let Ok(en) = ModelEnumerator::new(&atoms, max_worlds, &check_spec) else {
            return Ok(false);
        };
        for m in en.iter() {
            let image = super::transform::permute_model(sigma, &m)?;
            if !check_class(&image, &check_spec) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
