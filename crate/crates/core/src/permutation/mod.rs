//! Literal permutations and permutation sequences.
//!
//! A permutation is a bijection on literals with finite support, written in
//! cycle notation, e.g. `(p ~q)(~p q)`. Consistency (`s(~l) = ~s(l)`) is a
//! checkable predicate rather than a construction invariant, so the checker
//! has something to reject. A permutation sequence applies one permutation
//! per modal depth of a formula.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::formula::{Clause, Literal, ModalCnf, ModalLiteral, Modality};

/// Largest support a permutation may have; keeps order computation (an lcm
/// of cycle lengths) within sane bounds.
pub const MAX_SUPPORT: usize = 10_000;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum PermutationError {
    #[error("literal `{0}` appears more than once across cycles")]
    RepeatedLiteral(Literal),
    #[error("malformed cycle notation: {0}")]
    Malformed(String),
    #[error("permutation is not consistent at `{0}`")]
    NotConsistent(Literal),
    #[error("index atom `{atom}` is mapped to the negative literal `{image}`")]
    IndexMappedToNegative { atom: String, image: Literal },
    #[error("support exceeds {MAX_SUPPORT} literals")]
    SupportTooLarge,
}

/// A finite-support bijection on literals; identity outside its support.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Permutation {
    map: BTreeMap<Literal, Literal>,
}

impl Permutation {
    pub fn identity() -> Self {
        Permutation::default()
    }

    /// Builds a permutation from explicit cycles. Literals not mentioned are
    /// fixed. Rejects repeats across (or within) cycles.
    pub fn from_cycles(
        cycles: impl IntoIterator<Item = Vec<Literal>>,
    ) -> Result<Self, PermutationError> {
        let mut map = BTreeMap::new();
        let mut seen = BTreeSet::new();
        for cycle in cycles {
            for l in &cycle {
                if !seen.insert(l.clone()) {
                    return Err(PermutationError::RepeatedLiteral(l.clone()));
                }
            }
            if cycle.len() < 2 {
                continue;
            }
            for (i, l) in cycle.iter().enumerate() {
                map.insert(l.clone(), cycle[(i + 1) % cycle.len()].clone());
            }
        }
        if map.len() > MAX_SUPPORT {
            return Err(PermutationError::SupportTooLarge);
        }
        Ok(Permutation { map })
    }

    /// Builds a permutation from a mapping, dropping fixed points. The
    /// mapping must be a bijection on its own domain.
    pub fn from_map(map: BTreeMap<Literal, Literal>) -> Result<Self, PermutationError> {
        let map: BTreeMap<_, _> = map.into_iter().filter(|(k, v)| k != v).collect();
        let images: BTreeSet<_> = map.values().cloned().collect();
        if images.len() != map.len() || !map.keys().all(|k| images.contains(k)) {
            return Err(PermutationError::Malformed("mapping is not a bijection on its support".into()));
        }
        if map.len() > MAX_SUPPORT {
            return Err(PermutationError::SupportTooLarge);
        }
        Ok(Permutation { map })
    }

    /// Parses cycle notation, e.g. `(p ~q)(~p q)`. The empty string is the
    /// identity.
    pub fn parse_cycles(text: &str) -> Result<Self, PermutationError> {
        let mut cycles = Vec::new();
        let mut chars = text.chars().peekable();
        loop {
            while matches!(chars.peek(), Some(c) if c.is_whitespace()) {
                chars.next();
            }
            match chars.next() {
                None => break,
                Some('(') => {
                    let mut cycle = Vec::new();
                    loop {
                        while matches!(chars.peek(), Some(c) if c.is_whitespace()) {
                            chars.next();
                        }
                        match chars.peek() {
                            Some(')') => {
                                chars.next();
                                break;
                            }
                            Some(_) => cycle.push(parse_literal(&mut chars)?),
                            None => {
                                return Err(PermutationError::Malformed("unclosed cycle".into()));
                            }
                        }
                    }
                    cycles.push(cycle);
                }
                Some(c) => {
                    return Err(PermutationError::Malformed(format!("expected `(`, found `{c}`")));
                }
            }
        }
        Permutation::from_cycles(cycles)
    }

    /// The image of a literal; identity outside the support.
    pub fn apply(&self, l: &Literal) -> Literal {
        self.map.get(l).cloned().unwrap_or_else(|| l.clone())
    }

    pub fn is_identity(&self) -> bool {
        self.map.is_empty()
    }

    /// The literals moved by this permutation.
    pub fn support(&self) -> BTreeSet<Literal> {
        self.map.keys().cloned().collect()
    }

    /// True iff `s(~l) = ~s(l)` for every literal in the support and its
    /// negations.
    pub fn is_consistent(&self) -> bool {
        self.map
            .keys()
            .flat_map(|l| [l.clone(), l.negated()])
            .all(|l| self.apply(&l.negated()) == self.apply(&l).negated())
    }

    fn ensure_consistent(&self) -> Result<(), PermutationError> {
        for l in self.map.keys() {
            for l in [l.clone(), l.negated()] {
                if self.apply(&l.negated()) != self.apply(&l).negated() {
                    return Err(PermutationError::NotConsistent(l));
                }
            }
        }
        Ok(())
    }

    /// Functional composition: `compose(a, b)` applies `b` first, then `a`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation, PermutationError> {
        let mut map = BTreeMap::new();
        for l in self.map.keys().chain(other.map.keys()) {
            map.insert(l.clone(), self.apply(&other.apply(l)));
        }
        Permutation::from_map(map)
    }

    pub fn inverse(&self) -> Permutation {
        Permutation { map: self.map.iter().map(|(k, v)| (v.clone(), k.clone())).collect() }
    }

    /// `k`-fold composition; `power(0)` is the identity and negative `k`
    /// composes the inverse. Exponents reduce modulo the order.
    pub fn power(&self, k: i64) -> Permutation {
        let (base, count) = if k >= 0 {
            (self.clone(), k as u128)
        } else {
            (self.inverse(), k.unsigned_abs() as u128)
        };
        let count = count % self.order();
        let mut out = Permutation::identity();
        for _ in 0..count {
            // Composition of a permutation with itself stays bijective.
            out = out.compose(&base).expect("powers of a permutation are permutations");
        }
        out
    }

    /// Least `n >= 1` with `s^n` the identity: the lcm of the cycle lengths
    /// (saturating).
    pub fn order(&self) -> u128 {
        self.cycles().iter().fold(1u128, |acc, c| lcm(acc, c.len() as u128))
    }

    /// Canonical cycle decomposition: each cycle starts at its least
    /// literal, cycles ordered by starting literal. Fixed points omitted.
    pub fn cycles(&self) -> Vec<Vec<Literal>> {
        let mut seen = BTreeSet::new();
        let mut cycles = Vec::new();
        for start in self.map.keys() {
            if seen.contains(start) {
                continue;
            }
            let mut cycle = vec![start.clone()];
            seen.insert(start.clone());
            let mut cur = self.apply(start);
            while &cur != start {
                seen.insert(cur.clone());
                cycle.push(cur.clone());
                cur = self.apply(&cur);
            }
            cycles.push(cycle);
        }
        cycles
    }

    /// The image of a modal CNF formula, canonical by construction.
    ///
    /// Errors when the permutation is inconsistent or maps the index atom of
    /// an atom-indexed modality to a negative literal.
    pub fn apply_cnf(&self, phi: &ModalCnf) -> Result<ModalCnf, PermutationError> {
        self.ensure_consistent()?;
        let clauses = phi
            .clauses
            .iter()
            .map(|c| self.apply_clause(c))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(ModalCnf::from_clauses(clauses))
    }

    fn apply_clause(&self, c: &Clause) -> Result<Clause, PermutationError> {
        let atom_literals: Vec<_> = c.atom_literals.iter().map(|l| self.apply(l)).collect();
        let modal_literals = c
            .modal_literals
            .iter()
            .map(|ml| {
                Ok(ModalLiteral::new(
                    self.apply_modality(&ml.modality)?,
                    ml.positive,
                    self.apply_clause(&ml.body)?,
                ))
            })
            .collect::<Result<Vec<_>, PermutationError>>()?;
        Ok(Clause::new(atom_literals, modal_literals))
    }

    pub(crate) fn apply_modality(&self, m: &Modality) -> Result<Modality, PermutationError> {
        match m {
            Modality::Relational(_) | Modality::Universal => Ok(m.clone()),
            Modality::AtomIndexed(a) => {
                let image = self.apply(&Literal::pos(a.clone()));
                if image.positive {
                    Ok(Modality::AtomIndexed(image.atom))
                } else {
                    Err(PermutationError::IndexMappedToNegative { atom: a.clone(), image })
                }
            }
        }
    }

    /// True iff the formula is a fixed point of the permutation, clauses and
    /// literals read as sets.
    pub fn is_symmetry(&self, phi: &ModalCnf) -> Result<bool, PermutationError> {
        Ok(self.apply_cnf(phi)? == phi.canonicalize())
    }

    /// `[s^1(psi), ..., s^(order-1)(psi)]`, deduplicated in order of first
    /// occurrence.
    pub fn symmetric_images(&self, psi: &ModalCnf) -> Result<Vec<ModalCnf>, PermutationError> {
        self.ensure_consistent()?;
        let order = self.order();
        let mut out: Vec<ModalCnf> = Vec::new();
        let mut cur = psi.clone();
        let mut k = 1u128;
        while k < order {
            cur = self.apply_cnf(&cur)?;
            if !out.contains(&cur) {
                out.push(cur.clone());
            }
            k += 1;
        }
        Ok(out)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for cycle in cycles {
            write!(f, "(")?;
            for (i, l) in cycle.iter().enumerate() {
                if i > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{l}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

fn parse_literal(
    chars: &mut std::iter::Peekable<std::str::Chars<'_>>,
) -> Result<Literal, PermutationError> {
    let positive = if chars.peek() == Some(&'~') {
        chars.next();
        false
    } else {
        true
    };
    let mut atom = String::new();
    match chars.peek() {
        Some(&c) if c.is_ascii_lowercase() => {
            atom.push(c);
            chars.next();
        }
        other => {
            return Err(PermutationError::Malformed(format!(
                "expected an atom, found {:?}",
                other.map(|c| c.to_string()).unwrap_or_else(|| "end of input".into())
            )));
        }
    }
    while let Some(&c) = chars.peek() {
        if c.is_ascii_alphanumeric() || c == '_' {
            atom.push(c);
            chars.next();
        } else {
            break;
        }
    }
    Ok(Literal { atom, positive })
}

fn gcd(a: u128, b: u128) -> u128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u128, b: u128) -> u128 {
    if a == 0 || b == 0 {
        return 0;
    }
    (a / gcd(a, b)).saturating_mul(b)
}

/// A finite ordered list of permutations, one per modal depth.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct PermutationSequence {
    pub elements: Vec<Permutation>,
}

impl PermutationSequence {
    pub fn empty() -> Self {
        PermutationSequence::default()
    }

    pub fn new(elements: impl IntoIterator<Item = Permutation>) -> Self {
        PermutationSequence { elements: elements.into_iter().collect() }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// The subsequence starting at the `i`-th element, 1-based; the empty
    /// sequence when `i` exceeds the length.
    pub fn suffix(&self, i: usize) -> &[Permutation] {
        let start = i.saturating_sub(1).min(self.elements.len());
        &self.elements[start..]
    }

    /// The head permutation, or the identity for the empty sequence.
    pub fn head(&self) -> Permutation {
        self.elements.first().cloned().unwrap_or_default()
    }

    /// Parses `[ cycles ; cycles ; ... ]` or one permutation per line.
    pub fn parse(text: &str) -> Result<Self, PermutationError> {
        let trimmed = text.trim();
        let parts: Vec<String> = if let Some(inner) = trimmed.strip_prefix('[') {
            let inner = inner
                .strip_suffix(']')
                .ok_or_else(|| PermutationError::Malformed("unclosed `[`".into()))?;
            if inner.trim().is_empty() {
                Vec::new()
            } else {
                inner.split(';').map(|s| s.to_string()).collect()
            }
        } else {
            trimmed.lines().map(|s| s.to_string()).filter(|s| !s.trim().is_empty()).collect()
        };
        let elements = parts
            .iter()
            .map(|p| Permutation::parse_cycles(p.trim()))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(PermutationSequence::new(elements))
    }

    pub fn is_consistent(&self) -> bool {
        self.elements.iter().all(Permutation::is_consistent)
    }

    fn ensure_consistent(&self) -> Result<(), PermutationError> {
        for p in &self.elements {
            p.ensure_consistent()?;
        }
        Ok(())
    }

    /// Layered image of a formula: element `i` acts on the literals and
    /// modality indices at modal depth `i - 1`; deeper levels than the
    /// sequence length are untouched.
    pub fn apply_cnf(&self, phi: &ModalCnf) -> Result<ModalCnf, PermutationError> {
        self.ensure_consistent()?;
        let clauses = phi
            .clauses
            .iter()
            .map(|c| apply_clause_layered(&self.elements, c))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(ModalCnf::from_clauses(clauses))
    }

    /// True iff the formula is a fixed point of the layered application.
    pub fn is_layered_symmetry(&self, phi: &ModalCnf) -> Result<bool, PermutationError> {
        Ok(self.apply_cnf(phi)? == phi.canonicalize())
    }
}

fn apply_clause_layered(seq: &[Permutation], c: &Clause) -> Result<Clause, PermutationError> {
    let Some((head, tail)) = seq.split_first() else {
        // The empty sequence leaves the clause untouched at every depth.
        return Ok(c.clone());
    };
    let atom_literals: Vec<_> = c.atom_literals.iter().map(|l| head.apply(l)).collect();
    let modal_literals = c
        .modal_literals
        .iter()
        .map(|ml| {
            Ok(ModalLiteral::new(
                head.apply_modality(&ml.modality)?,
                ml.positive,
                apply_clause_layered(tail, &ml.body)?,
            ))
        })
        .collect::<Result<Vec<_>, PermutationError>>()?;
    Ok(Clause::new(atom_literals, modal_literals))
}

impl fmt::Display for PermutationSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[ ")?;
        for (i, p) in self.elements.iter().enumerate() {
            if i > 0 {
                write!(f, " ; ")?;
            }
            write!(f, "{p}")?;
        }
        if self.elements.is_empty() {
            write!(f, "]")
        } else {
            write!(f, " ]")
        }
    }
}
