//! Set-based representation of formulas in modal conjunctive normal form.
//!
//! A modal CNF formula is a set of clauses read conjunctively; a clause is a
//! set of atom literals and modal literals read disjunctively; a modal
//! literal is `[m]C` or `~[m]C` with `C` again a clause. Sets are backed by
//! `BTreeSet`, so every value is canonical by construction: duplicates
//! collapse and iteration follows the fixed total order used for golden
//! output (atoms by name with the negative literal first, atom literals
//! before modal literals, modal literals by modality, polarity, then body).

use std::collections::BTreeSet;
use std::fmt;

/// An atom or its negation.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Literal {
    pub atom: String,
    pub positive: bool,
}

impl Literal {
    pub fn pos(atom: impl Into<String>) -> Self {
        Literal { atom: atom.into(), positive: true }
    }

    pub fn neg(atom: impl Into<String>) -> Self {
        Literal { atom: atom.into(), positive: false }
    }

    /// Negation is an involution: `l.negated().negated() == l`.
    pub fn negated(&self) -> Self {
        Literal { atom: self.atom.clone(), positive: !self.positive }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.positive {
            write!(f, "{}", self.atom)
        } else {
            write!(f, "~{}", self.atom)
        }
    }
}

/// A box-type modal operator.
///
/// Relational modalities are interpreted over a stored accessibility
/// relation; the universal modality sees every world; an atom-indexed
/// modality `@i` sees exactly the worlds where `i` holds.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Modality {
    Relational(String),
    Universal,
    AtomIndexed(String),
}

impl Modality {
    /// The index atom of an atom-indexed modality, if any.
    pub fn index_atom(&self) -> Option<&str> {
        match self {
            Modality::AtomIndexed(a) => Some(a),
            _ => None,
        }
    }

    pub(crate) fn name(&self) -> String {
        match self {
            Modality::Relational(n) => n.clone(),
            Modality::Universal => "A".to_string(),
            Modality::AtomIndexed(a) => format!("@{a}"),
        }
    }
}

impl fmt::Display for Modality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

/// `[m]C` or `~[m]C` for a clause `C`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ModalLiteral {
    pub modality: Modality,
    pub positive: bool,
    pub body: Clause,
}

impl ModalLiteral {
    pub fn new(modality: Modality, positive: bool, body: Clause) -> Self {
        ModalLiteral { modality, positive, body }
    }
}

impl fmt::Display for ModalLiteral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.positive {
            write!(f, "~")?;
        }
        write!(f, "[{}]{}", self.modality, self.body)
    }
}

/// A disjunction of atom literals and modal literals, as a set.
///
/// A literal and its negation may co-occur: tautological clauses are
/// representable and detection never simplifies them away.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Clause {
    pub atom_literals: BTreeSet<Literal>,
    pub modal_literals: BTreeSet<ModalLiteral>,
}

impl Clause {
    pub fn new(
        atom_literals: impl IntoIterator<Item = Literal>,
        modal_literals: impl IntoIterator<Item = ModalLiteral>,
    ) -> Self {
        Clause {
            atom_literals: atom_literals.into_iter().collect(),
            modal_literals: modal_literals.into_iter().collect(),
        }
    }

    pub fn from_literals(atom_literals: impl IntoIterator<Item = Literal>) -> Self {
        Clause::new(atom_literals, [])
    }

    pub fn is_empty(&self) -> bool {
        self.atom_literals.is_empty() && self.modal_literals.is_empty()
    }

    /// Set union of two clauses.
    pub fn union(&self, other: &Clause) -> Clause {
        Clause {
            atom_literals: self.atom_literals.union(&other.atom_literals).cloned().collect(),
            modal_literals: self.modal_literals.union(&other.modal_literals).cloned().collect(),
        }
    }

    fn depth(&self) -> usize {
        self.modal_literals.iter().map(|ml| 1 + ml.body.depth()).max().unwrap_or(0)
    }

    fn collect_atoms(&self, out: &mut BTreeSet<String>) {
        for l in &self.atom_literals {
            out.insert(l.atom.clone());
        }
        for ml in &self.modal_literals {
            if let Some(i) = ml.modality.index_atom() {
                out.insert(i.to_string());
            }
            ml.body.collect_atoms(out);
        }
    }

    fn collect_modalities(&self, out: &mut Vec<Modality>) {
        for ml in &self.modal_literals {
            if !out.contains(&ml.modality) {
                out.push(ml.modality.clone());
            }
            ml.body.collect_modalities(out);
        }
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "{{ }}");
        }
        write!(f, "{{ ")?;
        let mut first = true;
        for l in &self.atom_literals {
            if !first {
                write!(f, ", ")?;
            }
            write!(f, "{l}")?;
            first = false;
        }
        for ml in &self.modal_literals {
            if !first {
                write!(f, ", ")?;
            }
            write!(f, "{ml}")?;
            first = false;
        }
        write!(f, " }}")
    }
}

/// A formula in modal CNF: a set of clauses.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct ModalCnf {
    pub clauses: BTreeSet<Clause>,
}

impl ModalCnf {
    pub fn from_clauses(clauses: impl IntoIterator<Item = Clause>) -> Self {
        ModalCnf { clauses: clauses.into_iter().collect() }
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    /// Deterministic canonical form.
    ///
    /// The representation is canonical by construction (sets are sorted and
    /// deduplicated at every nesting depth), so this is the identity; it
    /// exists so the canonical-form contract has a name. Idempotent.
    pub fn canonicalize(&self) -> ModalCnf {
        self.clone()
    }

    /// Maximum nesting depth of modal literals; 0 for purely propositional
    /// formulas.
    pub fn modal_depth(&self) -> usize {
        self.clauses.iter().map(Clause::depth).max().unwrap_or(0)
    }

    /// All atoms occurring in the formula at any depth, including the index
    /// atoms of atom-indexed modalities.
    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for c in &self.clauses {
            c.collect_atoms(&mut out);
        }
        out
    }

    /// Modalities in first-occurrence order of the canonical formula.
    pub fn modalities(&self) -> Vec<Modality> {
        let mut out = Vec::new();
        for c in &self.clauses {
            c.collect_modalities(&mut out);
        }
        out
    }

    /// Names of the relational modalities occurring in the formula.
    pub fn relational_modalities(&self) -> BTreeSet<String> {
        self.modalities()
            .into_iter()
            .filter_map(|m| match m {
                Modality::Relational(n) => Some(n),
                _ => None,
            })
            .collect()
    }
}

impl fmt::Display for ModalCnf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.clauses.is_empty() {
            return write!(f, "{{ }}");
        }
        write!(f, "{{ ")?;
        for (i, c) in self.clauses.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, " }}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lit(s: &str) -> Literal {
        match s.strip_prefix('~') {
            Some(a) => Literal::neg(a),
            None => Literal::pos(s),
        }
    }

    #[test]
    fn literal_order_is_atom_then_negative_first() {
        assert!(lit("~p") < lit("p"));
        assert!(lit("p") < lit("~q"));
        assert!(lit("~q") < lit("q"));
    }

    #[test]
    fn negation_is_involution() {
        let l = lit("~p");
        assert_eq!(l.negated().negated(), l);
    }

    #[test]
    fn duplicate_clauses_collapse() {
        let c1 = Clause::from_literals([lit("q"), lit("p")]);
        let c2 = Clause::from_literals([lit("p"), lit("q")]);
        let phi = ModalCnf::from_clauses([c1, c2]);
        assert_eq!(phi.clauses.len(), 1);
        assert_eq!(phi.to_string(), "{ { p, q } }");
    }

    #[test]
    fn tautological_clause_is_kept() {
        let c = Clause::from_literals([lit("r"), lit("~r")]);
        assert_eq!(c.atom_literals.len(), 2);
        let ml = ModalLiteral::new(Modality::Relational("m".into()), true, c);
        let phi = ModalCnf::from_clauses([Clause::new([], [ml])]);
        assert_eq!(phi.to_string(), "{ { [m]{ ~r, r } } }");
    }

    #[test]
    fn modal_depth_counts_nesting() {
        let phi = ModalCnf::from_clauses([Clause::from_literals([lit("p"), lit("q")])]);
        assert_eq!(phi.modal_depth(), 0);

        let inner = Clause::from_literals([lit("~p"), lit("~q")]);
        let ml = ModalLiteral::new(Modality::Relational("m".into()), false, inner);
        let phi = ModalCnf::from_clauses([Clause::new([], [ml])]);
        assert_eq!(phi.modal_depth(), 1);
    }

    #[test]
    fn atoms_include_modality_indices() {
        let body = Clause::from_literals([lit("p")]);
        let ml = ModalLiteral::new(Modality::AtomIndexed("i".into()), true, body);
        let phi = ModalCnf::from_clauses([Clause::new([], [ml])]);
        let atoms: Vec<_> = phi.atoms().into_iter().collect();
        assert_eq!(atoms, ["i", "p"]);
    }

    #[test]
    fn canonicalize_is_identity_on_canonical_values() {
        let phi = ModalCnf::from_clauses([Clause::from_literals([lit("p")])]);
        assert_eq!(phi.canonicalize(), phi);
        assert_eq!(phi.canonicalize().canonicalize(), phi.canonicalize());
    }
}
