//! Partially defined concepts, services, and the evolving knowledge state.
//!
//! A [`KnowledgeState`] stores what is known per concept: whether some
//! instance of it is known at all, and which of its properties are known.
//! Absorbing a service's outputs marks each output concept and all of its
//! ancestors as known, and pushes every learned property upward as long as the
//! ancestor still has that property. Because learned facts are always closed
//! upward, checking whether a service input `(c, props)` is covered only needs
//! a look at `c` itself.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::ontology::{ConceptId, Ontology, PropertyId};

/// A concept paired with a subset of its effective properties.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PartialConcept {
    concept: ConceptId,
    props: BTreeSet<PropertyId>,
}

impl PartialConcept {
    /// Fails with [`Error::PropertyNotHeld`] if some property is not held by
    /// `concept`.
    pub fn new(
        ont: &Ontology,
        concept: ConceptId,
        props: impl IntoIterator<Item = PropertyId>,
    ) -> Result<Self> {
        let props: BTreeSet<PropertyId> = props.into_iter().collect();
        check_held(ont, concept, &props)?;
        Ok(PartialConcept { concept, props })
    }

    /// Builds a partial concept from IRIs, resolving them in `ont`.
    pub fn from_iris<S: AsRef<str>>(ont: &Ontology, concept: &str, props: &[S]) -> Result<Self> {
        let concept = ont.concept_id(concept)?;
        let props = props
            .iter()
            .map(|p| ont.property_id(p.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(ont, concept, props)
    }

    pub fn concept(&self) -> ConceptId {
        self.concept
    }

    pub fn props(&self) -> &BTreeSet<PropertyId> {
        &self.props
    }
}

fn check_held(ont: &Ontology, concept: ConceptId, props: &BTreeSet<PropertyId>) -> Result<()> {
    let effective = ont.effective_properties(concept);
    match props.iter().find(|p| !effective.contains(p)) {
        Some(&p) => Err(Error::PropertyNotHeld {
            concept: ont.concept_iri(concept).to_owned(),
            property: ont.property_iri(p).to_owned(),
        }),
        None => Ok(()),
    }
}

/// Merges entries that name the same concept by uniting their property sets.
/// Keeps the position of each concept's first occurrence.
pub fn merge_by_concept(pdcs: impl IntoIterator<Item = PartialConcept>) -> Vec<PartialConcept> {
    let mut out: Vec<PartialConcept> = Vec::new();
    for pdc in pdcs {
        match out.iter_mut().find(|o| o.concept == pdc.concept) {
            Some(existing) => existing.props.extend(pdc.props),
            None => out.push(pdc),
        }
    }
    out
}

/// A stateless service: one operation with typed inputs and outputs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WebService {
    pub id: String,
    pub name: String,
    inputs: Vec<PartialConcept>,
    outputs: Vec<PartialConcept>,
}

impl WebService {
    pub fn new(
        id: impl Into<String>,
        name: impl Into<String>,
        inputs: impl IntoIterator<Item = PartialConcept>,
        outputs: impl IntoIterator<Item = PartialConcept>,
    ) -> Self {
        WebService {
            id: id.into(),
            name: name.into(),
            inputs: merge_by_concept(inputs),
            outputs: merge_by_concept(outputs),
        }
    }

    pub fn inputs(&self) -> &[PartialConcept] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[PartialConcept] {
        &self.outputs
    }
}

/// The user request: what is initially known and what must become known.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Query {
    pub init: Vec<PartialConcept>,
    pub goal: Vec<PartialConcept>,
}

impl Query {
    pub fn new(
        init: impl IntoIterator<Item = PartialConcept>,
        goal: impl IntoIterator<Item = PartialConcept>,
    ) -> Self {
        Query {
            init: merge_by_concept(init),
            goal: merge_by_concept(goal),
        }
    }
}

/// A single unit of knowledge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Fact {
    /// Some instance of the concept is known.
    Exists(ConceptId),
    /// The property is known for the concept.
    Has(ConceptId, PropertyId),
}

/// Facts that became known during one absorption, in discovery order.
pub type Learned = Vec<Fact>;

/// Aggregated knowledge: known concepts and, per concept, its known
/// properties. Only reachable through [`KnowledgeState::empty`] and absorption,
/// which keeps it closed upward along the taxonomy.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KnowledgeState {
    known: BTreeMap<ConceptId, BTreeSet<PropertyId>>,
    exists: BTreeSet<ConceptId>,
}

impl KnowledgeState {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn is_known(&self, concept: ConceptId) -> bool {
        self.exists.contains(&concept)
    }

    pub fn knows(&self, concept: ConceptId, property: PropertyId) -> bool {
        self.known
            .get(&concept)
            .is_some_and(|props| props.contains(&property))
    }

    /// Known properties of `concept`; empty when nothing is known.
    pub fn known_properties(&self, concept: ConceptId) -> impl Iterator<Item = PropertyId> + '_ {
        self.known.get(&concept).into_iter().flatten().copied()
    }

    pub fn known_concepts(&self) -> impl Iterator<Item = ConceptId> + '_ {
        self.exists.iter().copied()
    }

    /// Whether every fact of `self` is also a fact of `other`.
    pub fn is_subset_of(&self, other: &KnowledgeState) -> bool {
        self.exists.is_subset(&other.exists)
            && self.known.iter().all(|(c, props)| {
                other
                    .known
                    .get(c)
                    .is_some_and(|theirs| props.is_subset(theirs))
            })
    }

    /// Every input is covered: its concept is known and its properties are a
    /// subset of what is known for that concept.
    pub fn matches(&self, inputs: &[PartialConcept]) -> bool {
        inputs.iter().all(|pdc| self.covers(pdc))
    }

    pub fn matches_service(&self, service: &WebService) -> bool {
        self.matches(service.inputs())
    }

    /// The goal is the input set of a mock service with no outputs.
    pub fn satisfies_goal(&self, goal: &[PartialConcept]) -> bool {
        self.matches(goal)
    }

    pub fn covers(&self, pdc: &PartialConcept) -> bool {
        self.exists.contains(&pdc.concept)
            && match self.known.get(&pdc.concept) {
                Some(known) => pdc.props.is_subset(known),
                None => pdc.props.is_empty(),
            }
    }

    /// Adds `outputs` to the state and returns the newly learned facts.
    ///
    /// The walk up from each output concept stops at the first level that
    /// gains nothing: upward closure guarantees every higher level already
    /// has what this level had.
    pub fn absorb(&mut self, ont: &Ontology, outputs: &[PartialConcept]) -> Result<Learned> {
        self.absorb_walk(ont, outputs, true)
    }

    /// Same as [`absorb`](Self::absorb) but always walks to the root.
    pub fn absorb_exhaustive(
        &mut self,
        ont: &Ontology,
        outputs: &[PartialConcept],
    ) -> Result<Learned> {
        self.absorb_walk(ont, outputs, false)
    }

    /// Functional form of [`absorb`](Self::absorb).
    pub fn absorbed(&self, ont: &Ontology, outputs: &[PartialConcept]) -> Result<Self> {
        let mut next = self.clone();
        next.absorb(ont, outputs)?;
        Ok(next)
    }

    fn absorb_walk(
        &mut self,
        ont: &Ontology,
        outputs: &[PartialConcept],
        early_stop: bool,
    ) -> Result<Learned> {
        for pdc in outputs {
            check_held(ont, pdc.concept, &pdc.props)?;
        }
        let mut learned = Learned::new();
        for pdc in outputs {
            for level in ont.ancestors(pdc.concept) {
                let mut added = false;
                if self.exists.insert(level) {
                    learned.push(Fact::Exists(level));
                    added = true;
                }
                for &p in &pdc.props {
                    if !ont.holds(level, p) || self.knows(level, p) {
                        continue;
                    }
                    self.known.entry(level).or_default().insert(p);
                    learned.push(Fact::Has(level, p));
                    added = true;
                }
                if early_stop && !added {
                    break;
                }
            }
        }
        Ok(learned)
    }
}
