//! Conversion of modal formulas to equisatisfiable modal CNF.
//!
//! The transform pushes negation down to atoms, then converts bottom-up.
//! Disjunctions distribute over conjunctions as long as a single
//! distribution step produces at most [`DEFAULT_DISTRIBUTION_BUDGET`]
//! clauses; above that, one side is renamed with a fresh definitional atom
//! so the whole transform stays polynomial. Diamonds become negative box
//! literals through the exact dual (`<m>b == ~[m]C1 | .. | ~[m]Cn` for
//! `C1 & .. & Cn` equivalent to `~b`) when that dual stays within budget,
//! and through a fresh witness atom (`<m>x & [m](x -> b)`) otherwise.
//!
//! Definitional atoms are namespaced `_d0`, `_d1`, ... — the leading
//! underscore keeps them out of the input grammar, and symmetry detection
//! pins them by default.

use std::collections::BTreeSet;

use super::ast::Formula;
use super::cnf::{Clause, Literal, ModalCnf, ModalLiteral, Modality};

/// Maximum number of clauses a single distribution step may produce before
/// renaming fires.
pub const DEFAULT_DISTRIBUTION_BUDGET: usize = 16;

/// True for atoms introduced by the CNF transform.
pub fn is_definitional_atom(name: &str) -> bool {
    name.starts_with("_d")
}

/// Negation normal form: negation only on atoms, diamonds first-class.
enum Nnf {
    Lit(Literal),
    And(Box<Nnf>, Box<Nnf>),
    Or(Box<Nnf>, Box<Nnf>),
    Boxed(Modality, Box<Nnf>),
    Diamond(Modality, Box<Nnf>),
}

fn nnf(f: &Formula, positive: bool) -> Nnf {
    match (f, positive) {
        (Formula::Atom(a), pos) => Nnf::Lit(Literal { atom: a.clone(), positive: pos }),
        (Formula::Not(x), pos) => nnf(x, !pos),
        (Formula::And(a, b), true) | (Formula::Or(a, b), false) => {
            Nnf::And(Box::new(nnf(a, positive)), Box::new(nnf(b, positive)))
        }
        (Formula::Or(a, b), true) | (Formula::And(a, b), false) => {
            Nnf::Or(Box::new(nnf(a, positive)), Box::new(nnf(b, positive)))
        }
        (Formula::Box(m, x), true) | (Formula::Diamond(m, x), false) => {
            Nnf::Boxed(m.clone(), Box::new(nnf(x, positive)))
        }
        (Formula::Diamond(m, x), true) | (Formula::Box(m, x), false) => {
            Nnf::Diamond(m.clone(), Box::new(nnf(x, positive)))
        }
    }
}

/// Structural dual: the NNF of the negation.
fn negate(n: &Nnf) -> Nnf {
    match n {
        Nnf::Lit(l) => Nnf::Lit(l.negated()),
        Nnf::And(a, b) => Nnf::Or(Box::new(negate(a)), Box::new(negate(b))),
        Nnf::Or(a, b) => Nnf::And(Box::new(negate(a)), Box::new(negate(b))),
        Nnf::Boxed(m, x) => Nnf::Diamond(m.clone(), Box::new(negate(x))),
        Nnf::Diamond(m, x) => Nnf::Boxed(m.clone(), Box::new(negate(x))),
    }
}

struct FreshAtoms {
    used: BTreeSet<String>,
    next: usize,
}

impl FreshAtoms {
    fn new(used: BTreeSet<String>) -> Self {
        FreshAtoms { used, next: 0 }
    }

    fn fresh(&mut self) -> String {
        loop {
            let name = format!("_d{}", self.next);
            self.next += 1;
            if !self.used.contains(&name) {
                self.used.insert(name.clone());
                return name;
            }
        }
    }
}

/// Cross product of two clause sets: one clause per pair, unioned.
fn distribute(a: &BTreeSet<Clause>, b: &BTreeSet<Clause>) -> BTreeSet<Clause> {
    let mut out = BTreeSet::new();
    for ca in a {
        for cb in b {
            out.insert(ca.union(cb));
        }
    }
    out
}

fn unit_modal(m: &Modality, positive: bool, body: Clause) -> Clause {
    Clause::new([], [ModalLiteral::new(m.clone(), positive, body)])
}

/// Exact (equivalence-preserving) conversion: no renaming anywhere. Returns
/// `None` as soon as a distribution step would exceed the budget. Used for
/// diamond bodies, where a renamed dual would not be sound.
fn clauses_exact(n: &Nnf, budget: usize) -> Option<BTreeSet<Clause>> {
    match n {
        Nnf::Lit(l) => Some(BTreeSet::from([Clause::from_literals([l.clone()])])),
        Nnf::And(a, b) => {
            let mut ca = clauses_exact(a, budget)?;
            ca.extend(clauses_exact(b, budget)?);
            Some(ca)
        }
        Nnf::Or(a, b) => {
            let ca = clauses_exact(a, budget)?;
            let cb = clauses_exact(b, budget)?;
            if ca.len().saturating_mul(cb.len()) > budget {
                return None;
            }
            Some(distribute(&ca, &cb))
        }
        Nnf::Boxed(m, x) => {
            let cs = clauses_exact(x, budget)?;
            Some(cs.into_iter().map(|c| unit_modal(m, true, c)).collect())
        }
        Nnf::Diamond(m, x) => {
            let dual = clauses_exact(&negate(x), budget)?;
            if dual.len() > budget {
                return None;
            }
            let lits = dual.into_iter().map(|c| ModalLiteral::new(m.clone(), false, c));
            Some(BTreeSet::from([Clause::new([], lits)]))
        }
    }
}

fn clauses(n: &Nnf, budget: usize, fresh: &mut FreshAtoms) -> BTreeSet<Clause> {
    match n {
        Nnf::Lit(l) => BTreeSet::from([Clause::from_literals([l.clone()])]),
        Nnf::And(a, b) => {
            let mut ca = clauses(a, budget, fresh);
            ca.extend(clauses(b, budget, fresh));
            ca
        }
        Nnf::Or(a, b) => {
            let ca = clauses(a, budget, fresh);
            let cb = clauses(b, budget, fresh);
            if ca.len().saturating_mul(cb.len()) <= budget {
                return distribute(&ca, &cb);
            }
            // Rename the side with more clauses: a | b becomes
            // (x -> a) & (x | b), which is equisatisfiable.
            let (renamed, kept) = if ca.len() >= cb.len() { (ca, cb) } else { (cb, ca) };
            let x = fresh.fresh();
            let mut out = BTreeSet::new();
            for c in renamed {
                out.insert(c.union(&Clause::from_literals([Literal::neg(x.clone())])));
            }
            for c in kept {
                out.insert(c.union(&Clause::from_literals([Literal::pos(x.clone())])));
            }
            out
        }
        Nnf::Boxed(m, x) => {
            let cs = clauses(x, budget, fresh);
            cs.into_iter().map(|c| unit_modal(m, true, c)).collect()
        }
        Nnf::Diamond(m, x) => {
            if let Some(cs) = clauses_exact(n, budget) {
                return cs;
            }
            // The exact dual of the body is too large: introduce a witness
            // atom, <m>b becomes <m>x & [m](x -> b).
            let w = fresh.fresh();
            let mut out = BTreeSet::new();
            out.insert(unit_modal(m, false, Clause::from_literals([Literal::neg(w.clone())])));
            for c in clauses(x, budget, fresh) {
                let guarded = c.union(&Clause::from_literals([Literal::neg(w.clone())]));
                out.insert(unit_modal(m, true, guarded));
            }
            out
        }
    }
}

impl Formula {
    /// Converts to an equisatisfiable modal CNF with the default
    /// distribution budget.
    pub fn to_cnf(&self) -> ModalCnf {
        self.to_cnf_with_budget(DEFAULT_DISTRIBUTION_BUDGET)
    }

    /// Converts to an equisatisfiable modal CNF, renaming with fresh
    /// definitional atoms whenever a distribution step would produce more
    /// than `budget` clauses.
    pub fn to_cnf_with_budget(&self, budget: usize) -> ModalCnf {
        let n = nnf(self, true);
        let mut fresh = FreshAtoms::new(self.atoms());
        ModalCnf { clauses: clauses(&n, budget.max(1), &mut fresh) }
    }
}
