//! Shared test support: a seeded generator for formulas, models and
//! permutations, plus independent brute-force oracles the main pipeline is
//! checked against. Everything here is deliberately written against the
//! public API only and shares no code path with the implementation it
//! checks.

#![allow(dead_code)]

use std::collections::BTreeSet;

use modsym_core::detection::ColoredGraph;
use modsym_core::formula::{Clause, Literal, ModalCnf, ModalLiteral, Modality};
use modsym_core::models::{ClassSpec, FiniteModel, ModelEnumerator};
use modsym_core::{Permutation, PermutationSequence};

/// Small deterministic xorshift* generator; seeds make every suite
/// reproducible.
pub struct TestRng(u64);

impl TestRng {
    pub fn new(seed: u64) -> Self {
        TestRng(seed.max(1))
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.0 = x;
        x.wrapping_mul(0x2545_F491_4F6C_DD1D)
    }

    pub fn below(&mut self, n: usize) -> usize {
        (self.next_u64() % n as u64) as usize
    }

    pub fn chance(&mut self, percent: u64) -> bool {
        self.next_u64() % 100 < percent
    }

    pub fn pick<'a, T>(&mut self, xs: &'a [T]) -> &'a T {
        &xs[self.below(xs.len())]
    }
}

pub fn lit(s: &str) -> Literal {
    match s.strip_prefix('~') {
        Some(a) => Literal::neg(a),
        None => Literal::pos(s),
    }
}

pub fn perm(text: &str) -> Permutation {
    Permutation::parse_cycles(text).unwrap()
}

pub fn cnf(text: &str) -> ModalCnf {
    modsym_core::formula::parse_to_cnf(text).unwrap()
}

/// A random clause over the given atoms with modal literals down to
/// `depth` more levels.
fn random_clause(rng: &mut TestRng, atoms: &[&str], modalities: &[Modality], depth: usize) -> Clause {
    let mut atom_literals = Vec::new();
    let n_lits = 1 + rng.below(2);
    for _ in 0..n_lits {
        let atom = *rng.pick(atoms);
        atom_literals.push(Literal { atom: atom.to_string(), positive: rng.chance(50) });
    }
    let mut modal_literals = Vec::new();
    if depth > 0 && rng.chance(60) {
        let m = rng.pick(modalities).clone();
        let body = random_clause(rng, atoms, modalities, depth - 1);
        modal_literals.push(ModalLiteral::new(m, rng.chance(50), body));
    }
    Clause::new(atom_literals, modal_literals)
}

pub fn random_cnf(
    rng: &mut TestRng,
    atoms: &[&str],
    modalities: &[Modality],
    max_depth: usize,
    max_clauses: usize,
) -> ModalCnf {
    let n = 1 + rng.below(max_clauses);
    let mut clauses = Vec::new();
    for _ in 0..n {
        clauses.push(random_clause(rng, atoms, modalities, max_depth));
    }
    ModalCnf::from_clauses(clauses)
}

pub fn random_model(
    rng: &mut TestRng,
    atoms: &[&str],
    relations: &[&str],
    max_worlds: usize,
) -> FiniteModel {
    let n = 1 + rng.below(max_worlds);
    let names: Vec<String> = (1..=n).map(|i| format!("w{i}")).collect();
    let point = names[rng.below(n)].clone();
    let mut m = FiniteModel::new(names.clone(), &point).unwrap();
    for w in &names {
        let val: Vec<String> =
            atoms.iter().filter(|_| rng.chance(50)).map(|a| a.to_string()).collect();
        m.set_valuation(w, val).unwrap();
    }
    for r in relations {
        for f in &names {
            for t in &names {
                if rng.chance(35) {
                    m.add_edge(r, f, t).unwrap();
                }
            }
        }
    }
    m
}

/// All permutations of a small slice.
fn permutations<T: Clone>(items: &[T]) -> Vec<Vec<T>> {
    if items.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head.clone());
            out.push(tail);
        }
    }
    out
}

/// Every consistent permutation over the literals of the given atoms: an
/// atom bijection combined with a polarity flip per atom. Includes the
/// identity.
pub fn all_consistent_perms(atoms: &[String]) -> Vec<Permutation> {
    let k = atoms.len();
    let mut out = Vec::new();
    for image in permutations(atoms) {
        for signs in 0..(1u32 << k) {
            let mut map = std::collections::BTreeMap::new();
            for (i, a) in atoms.iter().enumerate() {
                let positive = signs & (1 << i) == 0;
                let target = Literal { atom: image[i].clone(), positive };
                map.insert(Literal::pos(a.clone()), target.clone());
                map.insert(Literal::neg(a.clone()), target.negated());
            }
            out.push(Permutation::from_map(map).unwrap());
        }
    }
    out
}

/// Brute-force symmetry group of a formula: every consistent permutation
/// of its literals that fixes it, identity included.
pub fn brute_force_symmetries(phi: &ModalCnf) -> BTreeSet<Permutation> {
    let atoms: Vec<String> = phi.atoms().into_iter().collect();
    all_consistent_perms(&atoms)
        .into_iter()
        .filter(|s| s.is_symmetry(phi).unwrap_or(false))
        .collect()
}

/// Closure of a generator set under composition; includes the identity.
pub fn expand_group(generators: &[Permutation]) -> BTreeSet<Permutation> {
    let mut group: BTreeSet<Permutation> = BTreeSet::from([Permutation::identity()]);
    group.extend(generators.iter().cloned());
    loop {
        let mut fresh = Vec::new();
        for a in &group {
            for b in &group {
                let c = a.compose(b).unwrap();
                if !group.contains(&c) {
                    fresh.push(c);
                }
            }
        }
        if fresh.is_empty() {
            return group;
        }
        group.extend(fresh);
    }
}

/// Brute-force automorphism enumeration: every color-preserving bijection
/// (the product of per-color-class permutations) checked edge-by-edge
/// against both edge sets. Exponential; for small graphs only.
pub fn brute_force_graph_automorphisms(g: &ColoredGraph) -> Vec<Vec<usize>> {
    let n = g.colors.len();
    let mut classes: std::collections::BTreeMap<u32, Vec<usize>> = Default::default();
    for (v, &c) in g.colors.iter().enumerate() {
        classes.entry(c).or_default().push(v);
    }
    let class_list: Vec<Vec<usize>> = classes.into_values().collect();
    let perms_per_class: Vec<Vec<Vec<usize>>> =
        class_list.iter().map(|members| permutations(members)).collect();

    let mut out = Vec::new();
    let mut choice = vec![0usize; class_list.len()];
    loop {
        let mut pi = vec![usize::MAX; n];
        for (ci, members) in class_list.iter().enumerate() {
            let image = &perms_per_class[ci][choice[ci]];
            for (m, im) in members.iter().zip(image) {
                pi[*m] = *im;
            }
        }
        if preserves_edges(g, &pi) {
            out.push(pi);
        }
        // Odometer over class permutation choices.
        let mut i = 0;
        loop {
            if i == choice.len() {
                return out;
            }
            choice[i] += 1;
            if choice[i] < perms_per_class[i].len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

fn preserves_edges(g: &ColoredGraph, pi: &[usize]) -> bool {
    let maps = |edges: &BTreeSet<(usize, usize)>| {
        edges.iter().all(|&(a, b)| {
            let (x, y) = (pi[a].min(pi[b]), pi[a].max(pi[b]));
            edges.contains(&(x, y))
        })
    };
    maps(&g.e1) && maps(&g.e2)
}

/// Independent evaluator used to cross-check `satisfies`: computes the
/// truth set of every clause as a set of worlds instead of recursing per
/// world.
pub fn naive_satisfies(model: &FiniteModel, phi: &ModalCnf) -> bool {
    phi.clauses.iter().all(|c| clause_truth_set(model, c).contains(&model.point()))
}

fn clause_truth_set(model: &FiniteModel, clause: &Clause) -> BTreeSet<usize> {
    let all: BTreeSet<usize> = (0..model.world_count()).collect();
    let mut truth = BTreeSet::new();
    for l in &clause.atom_literals {
        for &w in &all {
            if model.valuation(w).contains(&l.atom) == l.positive {
                truth.insert(w);
            }
        }
    }
    for ml in &clause.modal_literals {
        let body = clause_truth_set(model, &ml.body);
        for &w in &all {
            let succs: Vec<usize> = match &ml.modality {
                Modality::Relational(name) => model.relational_successors(name, w),
                Modality::Universal => all.iter().copied().collect(),
                Modality::AtomIndexed(a) => {
                    all.iter().copied().filter(|&v| model.valuation(v).contains(a)).collect()
                }
            };
            let box_holds = succs.iter().all(|v| body.contains(v));
            if box_holds == ml.positive {
                truth.insert(w);
            }
        }
    }
    truth
}

/// Exhaustive bounded satisfiability through the public enumerator.
pub fn bounded_sat(phi: &ModalCnf, max_worlds: usize) -> Option<FiniteModel> {
    let spec = ClassSpec::empty().covering(&[phi]);
    let en = ModelEnumerator::new(&phi.atoms(), max_worlds, &spec).unwrap();
    let found = en.iter().find(|m| modsym_core::models::satisfies(m, &spec, phi).unwrap());
    found
}

/// Independent bisimilarity check by partition refinement on the disjoint
/// union of the two reachable parts: two worlds stay equivalent while they
/// share a valuation and, per relation, the same set of successor classes.
/// A different algorithm from the pairwise simulation checker on purpose.
pub fn naive_bisimilar(a: &FiniteModel, b: &FiniteModel) -> bool {
    #[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
    enum Side {
        A,
        B,
    }
    let nodes: Vec<(Side, usize)> = a
        .reachable()
        .into_iter()
        .map(|w| (Side::A, w))
        .chain(b.reachable().into_iter().map(|w| (Side::B, w)))
        .collect();
    let relations: BTreeSet<String> =
        a.relation_names().chain(b.relation_names()).map(String::from).collect();

    let valuation = |&(side, w): &(Side, usize)| match side {
        Side::A => a.valuation(w).clone(),
        Side::B => b.valuation(w).clone(),
    };
    let successors = |&(side, w): &(Side, usize), rel: &str| -> Vec<(Side, usize)> {
        match side {
            Side::A => a.relational_successors(rel, w).into_iter().map(|v| (Side::A, v)).collect(),
            Side::B => b.relational_successors(rel, w).into_iter().map(|v| (Side::B, v)).collect(),
        }
    };

    // Initial classes by valuation.
    let mut class: Vec<usize> = {
        let keys: Vec<_> = nodes.iter().map(valuation).collect();
        let uniq: BTreeSet<_> = keys.iter().cloned().collect();
        let index: std::collections::BTreeMap<_, _> =
            uniq.into_iter().enumerate().map(|(i, k)| (k, i)).collect();
        keys.into_iter().map(|k| index[&k]).collect()
    };

    loop {
        let signature = |i: usize| -> (usize, Vec<(String, BTreeSet<usize>)>) {
            let succ_classes: Vec<(String, BTreeSet<usize>)> = relations
                .iter()
                .map(|rel| {
                    let cs: BTreeSet<usize> = successors(&nodes[i], rel)
                        .into_iter()
                        .map(|n| class[nodes.iter().position(|x| *x == n).unwrap()])
                        .collect();
                    (rel.clone(), cs)
                })
                .collect();
            (class[i], succ_classes)
        };
        let sigs: Vec<_> = (0..nodes.len()).map(signature).collect();
        let uniq: BTreeSet<_> = sigs.iter().cloned().collect();
        if uniq.len() == class.iter().collect::<BTreeSet<_>>().len() {
            break;
        }
        let index: std::collections::BTreeMap<_, _> =
            uniq.into_iter().enumerate().map(|(i, s)| (s, i)).collect();
        class = sigs.into_iter().map(|s| index[&s]).collect();
    }

    let pa = nodes.iter().position(|&n| n == (Side::A, a.point())).unwrap();
    let pb = nodes.iter().position(|&n| n == (Side::B, b.point())).unwrap();
    class[pa] == class[pb]
}

/// A random consistent permutation over a subset of the given atoms.
pub fn random_consistent_perm(rng: &mut TestRng, atoms: &[&str]) -> Permutation {
    let mut chosen: Vec<String> =
        atoms.iter().filter(|_| rng.chance(70)).map(|a| a.to_string()).collect();
    if chosen.is_empty() {
        chosen = vec![atoms[0].to_string()];
    }
    // Random bijection: shuffle by repeated removal.
    let mut pool = chosen.clone();
    let mut image = Vec::new();
    while !pool.is_empty() {
        image.push(pool.remove(rng.below(pool.len())));
    }
    let mut map = std::collections::BTreeMap::new();
    for (a, b) in chosen.iter().zip(&image) {
        let positive = rng.chance(50);
        let target = Literal { atom: b.clone(), positive };
        map.insert(Literal::pos(a.clone()), target.clone());
        map.insert(Literal::neg(a.clone()), target.negated());
    }
    Permutation::from_map(map).unwrap()
}

/// A random consistent permutation sequence.
pub fn random_sequence(rng: &mut TestRng, atoms: &[&str], len: usize) -> PermutationSequence {
    PermutationSequence::new((0..len).map(|_| random_consistent_perm(rng, atoms)))
}
