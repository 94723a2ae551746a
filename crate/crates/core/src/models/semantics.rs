//! The satisfaction relation for modal CNF formulas over finite models.
//!
//! A formula holds when every clause holds; a clause holds when some
//! literal does; `[m]C` holds when `C` holds at every `m`-successor, and
//! `~[m]C` is its negation. Successors of the universal modality are all
//! worlds, successors of `@i` are exactly the worlds where `i` holds, and
//! relational successors come from the stored relation (empty when the
//! relation was never mentioned).

use crate::formula::{Clause, ModalCnf, Modality};

use super::{check_class, violated_nominal, ClassSpec, FiniteModel, ModelError};

/// Evaluates `phi` at the model's point. Errors when the model does not
/// conform to the class spec.
pub fn satisfies(model: &FiniteModel, spec: &ClassSpec, phi: &ModalCnf) -> Result<bool, ModelError> {
    if !check_class(model, spec) {
        let nominal = violated_nominal(model, spec).unwrap_or_default();
        return Err(ModelError::SpecViolated(nominal));
    }
    Ok(eval_cnf(model, model.point(), phi))
}

pub(crate) fn eval_cnf(model: &FiniteModel, world: usize, phi: &ModalCnf) -> bool {
    phi.clauses.iter().all(|c| eval_clause(model, world, c))
}

fn eval_clause(model: &FiniteModel, world: usize, clause: &Clause) -> bool {
    clause
        .atom_literals
        .iter()
        .any(|l| model.valuation(world).contains(&l.atom) == l.positive)
        || clause.modal_literals.iter().any(|ml| {
            let box_holds =
                successors(model, &ml.modality, world).into_iter().all(|v| eval_clause(model, v, &ml.body));
            box_holds == ml.positive
        })
}

pub(crate) fn successors(model: &FiniteModel, modality: &Modality, world: usize) -> Vec<usize> {
    match modality {
        Modality::Relational(name) => model.relational_successors(name, world),
        Modality::Universal => (0..model.world_count()).collect(),
        Modality::AtomIndexed(atom) => (0..model.world_count())
            .filter(|&v| model.valuation(v).contains(atom))
            .collect(),
    }
}
