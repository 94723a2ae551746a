//! Symmetry detection and verification for modal formulas in conjunctive
//! normal form.
//!
//! A symmetry of a modal CNF formula is a consistent permutation of its
//! literals that fixes the formula when clauses and literals are read as
//! sets. This crate provides:
//!
//! - [`formula`]: the modal formula AST, a text parser, conversion to modal
//!   CNF and a canonical set-based representation,
//! - [`permutation`]: literal permutations in cycle notation, group
//!   operations, and their action on formulas (plain and layered),
//! - [`models`]: finite pointed Kripke-style models, the semantic evaluator,
//!   sigma-simulations, bisimulations, unravelling, and a bounded entailment
//!   oracle,
//! - [`detection`]: the reduction of symmetry detection to colored-graph
//!   automorphism, an in-house automorphism search, and exchange formats for
//!   external tools.
//!
//! All values are immutable after construction and every operation is a pure
//! function, so everything here is safe to share across threads.

pub mod detection;
pub mod formula;
pub mod models;
pub mod permutation;

pub use formula::{Clause, Formula, Literal, Modality, ModalCnf, ModalLiteral, Signature};
pub use permutation::{Permutation, PermutationSequence};

#[cfg(test)]
mod thread_safety {
    fn assert_send_sync<T: Send + Sync>() {}

    #[test]
    fn core_values_are_shareable_across_threads() {
        assert_send_sync::<crate::ModalCnf>();
        assert_send_sync::<crate::Formula>();
        assert_send_sync::<crate::Permutation>();
        assert_send_sync::<crate::PermutationSequence>();
        assert_send_sync::<crate::models::FiniteModel>();
        assert_send_sync::<crate::models::TreeModel>();
        assert_send_sync::<crate::detection::DetectionGraph>();
    }
}
