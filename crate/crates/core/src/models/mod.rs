//! Finite pointed Kripke-style models, defining conditions, and the
//! semantic machinery used to validate symmetry results: evaluation,
//! sigma-simulations, bisimulation, unravelling, model permutation, bounded
//! enumeration, and a bounded entailment oracle.
//!
//! Relational modalities read a stored accessibility relation; the
//! universal modality and atom-indexed modalities are derived (`A` sees
//! every world, `@i` sees exactly the worlds where `i` holds), so a finite
//! model conforms to their defining conditions by construction. The only
//! stored condition is the nominal one: a nominal atom must hold at exactly
//! one world.

mod enumerate;
mod semantics;
mod simulation;
mod transform;

pub use enumerate::{entails, is_closed_under, small_model_bound, Bounds, Entailment, ModelEnumerator};
pub use semantics::satisfies;
pub use simulation::{
    find_layered_simulation, find_sigma_simulation, is_bisimilar, LayeredSimulationRelation,
    SimulationRelation,
};
pub use transform::{permute_model, permute_tree_layered, unravel};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::formula::ModalCnf;
use crate::permutation::PermutationError;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("unknown world `{0}`")]
    UnknownWorld(String),
    #[error("duplicate world `{0}`")]
    DuplicateWorld(String),
    #[error("a model needs at least one world")]
    EmptyDomain,
    #[error("model violates its class: nominal `{0}` does not hold at exactly one world")]
    SpecViolated(String),
    #[error("model text, line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("enumeration bounds too large")]
    EnumerationTooLarge,
    #[error("model is not a tree rooted at its point")]
    NotATree,
    #[error(transparent)]
    Permutation(#[from] PermutationError),
}

/// A finite pointed model: ordered worlds, a point of evaluation, a
/// valuation per world, and one stored relation per relational modality.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FiniteModel {
    worlds: Vec<String>,
    point: usize,
    valuations: Vec<BTreeSet<String>>,
    relations: BTreeMap<String, BTreeSet<(usize, usize)>>,
}

impl FiniteModel {
    pub fn new(
        worlds: impl IntoIterator<Item = String>,
        point: &str,
    ) -> Result<Self, ModelError> {
        let worlds: Vec<String> = worlds.into_iter().collect();
        if worlds.is_empty() {
            return Err(ModelError::EmptyDomain);
        }
        let mut seen = BTreeSet::new();
        for w in &worlds {
            if !seen.insert(w.clone()) {
                return Err(ModelError::DuplicateWorld(w.clone()));
            }
        }
        let point = worlds
            .iter()
            .position(|w| w == point)
            .ok_or_else(|| ModelError::UnknownWorld(point.to_string()))?;
        let n = worlds.len();
        Ok(FiniteModel { worlds, point, valuations: vec![BTreeSet::new(); n], relations: BTreeMap::new() })
    }

    pub(crate) fn from_parts(
        worlds: Vec<String>,
        point: usize,
        valuations: Vec<BTreeSet<String>>,
        relations: BTreeMap<String, BTreeSet<(usize, usize)>>,
    ) -> Self {
        FiniteModel { worlds, point, valuations, relations }
    }

    pub fn world_count(&self) -> usize {
        self.worlds.len()
    }

    pub fn worlds(&self) -> &[String] {
        &self.worlds
    }

    pub fn point(&self) -> usize {
        self.point
    }

    pub fn point_name(&self) -> &str {
        &self.worlds[self.point]
    }

    pub fn world_index(&self, name: &str) -> Result<usize, ModelError> {
        self.worlds
            .iter()
            .position(|w| w == name)
            .ok_or_else(|| ModelError::UnknownWorld(name.to_string()))
    }

    /// Moves the point of evaluation; the frame and valuation are shared.
    pub fn at_point(&self, point: usize) -> FiniteModel {
        let mut m = self.clone();
        m.point = point;
        m
    }

    pub fn valuation(&self, world: usize) -> &BTreeSet<String> {
        &self.valuations[world]
    }

    pub(crate) fn valuations(&self) -> &[BTreeSet<String>] {
        &self.valuations
    }

    pub fn set_valuation(
        &mut self,
        world: &str,
        atoms: impl IntoIterator<Item = String>,
    ) -> Result<(), ModelError> {
        let w = self.world_index(world)?;
        self.valuations[w] = atoms.into_iter().collect();
        Ok(())
    }

    pub fn add_edge(&mut self, modality: &str, from: &str, to: &str) -> Result<(), ModelError> {
        let f = self.world_index(from)?;
        let t = self.world_index(to)?;
        self.relations.entry(modality.to_string()).or_default().insert((f, t));
        Ok(())
    }

    pub fn relation_names(&self) -> impl Iterator<Item = &str> {
        self.relations.keys().map(String::as_str)
    }

    pub(crate) fn relations(&self) -> &BTreeMap<String, BTreeSet<(usize, usize)>> {
        &self.relations
    }

    /// Successor worlds through a stored relational modality.
    pub fn relational_successors(&self, name: &str, world: usize) -> Vec<usize> {
        match self.relations.get(name) {
            Some(rel) => rel.iter().filter(|(f, _)| *f == world).map(|(_, t)| *t).collect(),
            None => Vec::new(),
        }
    }

    /// All atoms mentioned by any valuation.
    pub fn atoms(&self) -> BTreeSet<String> {
        self.valuations.iter().flatten().cloned().collect()
    }

    /// Worlds reachable from the point through stored relations, point
    /// included.
    pub fn reachable(&self) -> BTreeSet<usize> {
        let mut seen = BTreeSet::from([self.point]);
        let mut queue = vec![self.point];
        while let Some(w) = queue.pop() {
            for rel in self.relations.values() {
                for &(f, t) in rel {
                    if f == w && seen.insert(t) {
                        queue.push(t);
                    }
                }
            }
        }
        seen
    }

    /// Parses the line-based model text format.
    pub fn parse(text: &str) -> Result<(FiniteModel, ClassSpec), ModelError> {
        let mut worlds: Option<Vec<String>> = None;
        let mut point: Option<String> = None;
        let mut vals: Vec<(String, Vec<String>)> = Vec::new();
        let mut rels: Vec<(String, String, String)> = Vec::new();
        let mut spec = ClassSpec::default();

        let err = |line: usize, message: &str| ModelError::Parse { line, message: message.to_string() };

        for (i, raw) in text.lines().enumerate() {
            let lineno = i + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, rest) = line
                .split_once(':')
                .ok_or_else(|| err(lineno, "expected `key: value`"))?;
            let rest = rest.trim();
            let mut key_parts = key.split_whitespace();
            match key_parts.next() {
                Some("worlds") => {
                    worlds = Some(rest.split_whitespace().map(String::from).collect());
                }
                Some("point") => point = Some(rest.to_string()),
                Some("val") => {
                    let w = key_parts.next().ok_or_else(|| err(lineno, "expected `val <world>:`"))?;
                    vals.push((w.to_string(), rest.split_whitespace().map(String::from).collect()));
                }
                Some("rel") => {
                    let m = key_parts.next().ok_or_else(|| err(lineno, "expected `rel <modality>:`"))?;
                    let mut pair = rest.split_whitespace();
                    let (Some(f), Some(t), None) = (pair.next(), pair.next(), pair.next()) else {
                        return Err(err(lineno, "expected `rel m: w1 w2`"));
                    };
                    rels.push((m.to_string(), f.to_string(), t.to_string()));
                    spec.relational.insert(m.to_string());
                }
                Some("class") => {
                    for part in rest.split(',') {
                        let mut words = part.split_whitespace();
                        match (words.next(), words.next()) {
                            (Some("nominal"), Some(atom)) => {
                                spec.nominals.insert(atom.to_string());
                            }
                            (Some("universal"), None) => spec.universal = true,
                            (Some("at"), None) => spec.at = true,
                            (None, _) => {}
                            _ => return Err(err(lineno, "expected `nominal <atom>`, `universal` or `at`")),
                        }
                    }
                }
                _ => return Err(err(lineno, "expected `worlds`, `point`, `val`, `rel` or `class`")),
            }
        }

        let worlds = worlds.ok_or_else(|| err(0, "missing `worlds:` line"))?;
        let point = point.ok_or_else(|| err(0, "missing `point:` line"))?;
        let mut model = FiniteModel::new(worlds, &point)?;
        for (w, atoms) in vals {
            model.set_valuation(&w, atoms)?;
        }
        for (m, f, t) in rels {
            model.add_edge(&m, &f, &t)?;
        }
        Ok((model, spec))
    }

    /// Emits the line-based model text format; deterministic.
    pub fn to_text(&self, spec: &ClassSpec) -> String {
        let mut out = String::new();
        out.push_str(&format!("worlds: {}\n", self.worlds.join(" ")));
        out.push_str(&format!("point: {}\n", self.point_name()));
        for (w, val) in self.worlds.iter().zip(&self.valuations) {
            if !val.is_empty() {
                let atoms: Vec<_> = val.iter().cloned().collect();
                out.push_str(&format!("val {}: {}\n", w, atoms.join(" ")));
            }
        }
        for (m, rel) in &self.relations {
            for (f, t) in rel {
                out.push_str(&format!("rel {}: {} {}\n", m, self.worlds[*f], self.worlds[*t]));
            }
        }
        let mut parts: Vec<String> = spec.nominals.iter().map(|n| format!("nominal {n}")).collect();
        if spec.universal {
            parts.push("universal".to_string());
        }
        if spec.at {
            parts.push("at".to_string());
        }
        if !parts.is_empty() {
            out.push_str(&format!("class: {}\n", parts.join(", ")));
        }
        out
    }
}

impl fmt::Display for FiniteModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text(&ClassSpec::default()))
    }
}

/// Flags selecting a class of models by its defining conditions.
///
/// `relational` names the stored relations an enumeration ranges over;
/// `nominals` are atoms constrained to hold at exactly one world;
/// `universal` and `at` record that the corresponding derived modalities are
/// in play (they impose no condition a finite model could violate).
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct ClassSpec {
    pub relational: BTreeSet<String>,
    pub universal: bool,
    pub at: bool,
    pub nominals: BTreeSet<String>,
}

impl ClassSpec {
    pub fn empty() -> Self {
        ClassSpec::default()
    }

    /// A spec for plain relational reasoning over the given modality names.
    pub fn relational(names: impl IntoIterator<Item = String>) -> Self {
        ClassSpec { relational: names.into_iter().collect(), ..ClassSpec::default() }
    }

    pub fn with_nominals(mut self, nominals: impl IntoIterator<Item = String>) -> Self {
        self.nominals.extend(nominals);
        self
    }

    /// Widens the spec with the relational modalities occurring in the
    /// given formulas.
    pub fn covering(mut self, formulas: &[&ModalCnf]) -> Self {
        for phi in formulas {
            self.relational.extend(phi.relational_modalities());
        }
        self
    }

    /// No constraining conditions at all (the basic logic over the stored
    /// relations).
    pub fn is_unconstrained(&self) -> bool {
        self.nominals.is_empty() && !self.universal && !self.at
    }
}

/// True iff every flagged defining condition holds in the model. Only the
/// nominal condition can fail in this representation: universal and `@`
/// accessibility are derived, and stored relations are relational by
/// construction.
pub fn check_class(model: &FiniteModel, spec: &ClassSpec) -> bool {
    violated_nominal(model, spec).is_none()
}

pub(crate) fn violated_nominal(model: &FiniteModel, spec: &ClassSpec) -> Option<String> {
    spec.nominals
        .iter()
        .find(|n| {
            let count = model.valuations().iter().filter(|v| v.contains(*n)).count();
            count != 1
        })
        .cloned()
}

/// A finite model whose relational structure is a tree rooted at its point,
/// with the depth of every world recorded. Produced by [`unravel`] or by
/// checking an existing model with [`TreeModel::try_new`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TreeModel {
    model: FiniteModel,
    depths: Vec<usize>,
    depth_bound: usize,
}

impl TreeModel {
    /// Checks that the model is a tree rooted at its point (every world
    /// reachable, unique parent, no cycles) and records world depths.
    pub fn try_new(model: FiniteModel) -> Result<TreeModel, ModelError> {
        let n = model.world_count();
        let mut parent: Vec<Option<usize>> = vec![None; n];
        for rel in model.relations().values() {
            for &(f, t) in rel {
                if parent[t].replace(f).is_some() {
                    return Err(ModelError::NotATree);
                }
            }
        }
        if parent[model.point()].is_some() {
            return Err(ModelError::NotATree);
        }
        // Unique parents and a parentless point leave one failure mode: a
        // world visited twice, i.e. a cycle.
        let mut depths = vec![usize::MAX; n];
        depths[model.point()] = 0;
        let mut queue = std::collections::VecDeque::from([model.point()]);
        while let Some(w) = queue.pop_front() {
            for rel in model.relations().values() {
                for &(f, t) in rel {
                    if f == w {
                        if depths[t] != usize::MAX {
                            return Err(ModelError::NotATree);
                        }
                        depths[t] = depths[w] + 1;
                        queue.push_back(t);
                    }
                }
            }
        }
        if depths.contains(&usize::MAX) {
            return Err(ModelError::NotATree);
        }
        let depth_bound = depths.iter().copied().max().unwrap_or(0);
        Ok(TreeModel { model, depths, depth_bound })
    }

    pub(crate) fn from_parts(model: FiniteModel, depths: Vec<usize>, depth_bound: usize) -> Self {
        TreeModel { model, depths, depth_bound }
    }

    pub fn model(&self) -> &FiniteModel {
        &self.model
    }

    pub fn into_model(self) -> FiniteModel {
        self.model
    }

    pub fn depth_of(&self, world: usize) -> usize {
        self.depths[world]
    }

    pub fn depths(&self) -> &[usize] {
        &self.depths
    }

    /// The depth bound the tree was built for (or its height when checked
    /// from an existing model).
    pub fn depth_bound(&self) -> usize {
        self.depth_bound
    }
}
