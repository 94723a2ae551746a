//! Modal formula AST and signatures.

use std::collections::BTreeSet;
use std::fmt;

use super::cnf::Modality;
use super::parse::ParseError;

/// A modal signature: disjoint finite sets of atom names and modalities.
///
/// Atom names are open-ended (any identifier may be used as an atom as long
/// as it does not clash with a modality name); the modality set is the
/// authoritative list of operators a parse may use.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Signature {
    pub atoms: BTreeSet<String>,
    pub modalities: BTreeSet<Modality>,
}

impl Signature {
    /// Builds a signature, rejecting atom names that clash with modality
    /// names.
    pub fn new(
        atoms: impl IntoIterator<Item = String>,
        modalities: impl IntoIterator<Item = Modality>,
    ) -> Result<Self, ParseError> {
        let sig = Signature {
            atoms: atoms.into_iter().collect(),
            modalities: modalities.into_iter().collect(),
        };
        for a in &sig.atoms {
            if sig.clashes_with_modality(a) {
                return Err(ParseError::name_clash(a));
            }
        }
        Ok(sig)
    }

    pub(crate) fn clashes_with_modality(&self, atom: &str) -> bool {
        self.modalities.iter().any(|m| matches!(m, Modality::Relational(n) if n == atom))
    }

    pub(crate) fn has_modality(&self, m: &Modality) -> bool {
        self.modalities.contains(m)
    }
}

/// A modal formula over some signature.
///
/// Derived connectives of the input grammar (`->`) are desugared by the
/// parser; conjunction and diamonds are kept as first-class constructors.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Formula {
    Atom(String),
    Not(std::boxed::Box<Formula>),
    Or(std::boxed::Box<Formula>, std::boxed::Box<Formula>),
    And(std::boxed::Box<Formula>, std::boxed::Box<Formula>),
    Box(Modality, std::boxed::Box<Formula>),
    Diamond(Modality, std::boxed::Box<Formula>),
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Self {
        Formula::Atom(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(std::boxed::Box::new(f))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(std::boxed::Box::new(a), std::boxed::Box::new(b))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(std::boxed::Box::new(a), std::boxed::Box::new(b))
    }

    pub fn boxed(m: Modality, f: Formula) -> Self {
        Formula::Box(m, std::boxed::Box::new(f))
    }

    pub fn diamond(m: Modality, f: Formula) -> Self {
        Formula::Diamond(m, std::boxed::Box::new(f))
    }

    /// Maximum nesting of modal operators.
    pub fn modal_depth(&self) -> usize {
        match self {
            Formula::Atom(_) => 0,
            Formula::Not(f) => f.modal_depth(),
            Formula::Or(a, b) | Formula::And(a, b) => a.modal_depth().max(b.modal_depth()),
            Formula::Box(_, f) | Formula::Diamond(_, f) => 1 + f.modal_depth(),
        }
    }

    /// All atoms occurring in the formula, including modality indices.
    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Atom(a) => {
                out.insert(a.clone());
            }
            Formula::Not(f) => f.collect_atoms(out),
            Formula::Or(a, b) | Formula::And(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
            Formula::Box(m, f) | Formula::Diamond(m, f) => {
                if let Some(i) = m.index_atom() {
                    out.insert(i.to_string());
                }
                f.collect_atoms(out);
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atom(a) => write!(f, "{a}"),
            Formula::Not(x) => write!(f, "~{}", Paren(x, 1)),
            Formula::And(a, b) => write!(f, "{} & {}", Paren(a, 2), Paren(b, 2)),
            Formula::Or(a, b) => write!(f, "{} | {}", Paren(a, 3), Paren(b, 3)),
            Formula::Box(m, x) => write!(f, "[{m}]{}", Paren(x, 1)),
            Formula::Diamond(m, x) => write!(f, "<{m}>{}", Paren(x, 1)),
        }
    }
}

/// Wraps subformulas in parentheses when their top connective binds more
/// loosely than the context allows.
struct Paren<'a>(&'a Formula, u8);

impl fmt::Display for Paren<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let level = match self.0 {
            Formula::Atom(_) | Formula::Not(_) | Formula::Box(..) | Formula::Diamond(..) => 1,
            Formula::And(..) => 2,
            Formula::Or(..) => 3,
        };
        if level > self.1 {
            write!(f, "({})", self.0)
        } else {
            write!(f, "{}", self.0)
        }
    }
}
