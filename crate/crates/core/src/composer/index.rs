//! Indexes that let the search find newly callable services without rescanning
//! the repository after each call.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::knowledge::{Fact, KnowledgeState, Learned, PartialConcept, Query};
use crate::ontology::{ConceptId, Ontology, PropertyId};

use super::Repository;

/// Reserved id of the mock service whose outputs are the query's initial
/// knowledge.
pub const INIT_ID: &str = "__init__";
/// Reserved id of the mock service whose inputs are the query's goal.
pub const GOAL_ID: &str = "__goal__";

/// What a service still needs to learn about one of its input concepts.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Pending {
    pub props: BTreeSet<PropertyId>,
    pub needs_existence: bool,
}

impl Pending {
    pub fn is_discharged(&self) -> bool {
        self.props.is_empty() && !self.needs_existence
    }
}

/// A slot is a repository position; the goal mock service takes the slot
/// right after the last real service.
pub type Slot = usize;

/// `required`/`required_exist` map a fact to the services waiting for it,
/// `remaining` holds each service's outstanding facts and `callable` the
/// services whose inputs are fully known, in the order they became callable.
#[derive(Debug, Clone)]
pub struct SearchIndexes {
    required: HashMap<ConceptId, HashMap<PropertyId, Vec<Slot>>>,
    required_exist: HashMap<ConceptId, Vec<Slot>>,
    remaining: Vec<BTreeMap<ConceptId, Pending>>,
    callable: VecDeque<Slot>,
    enqueued: Vec<bool>,
    goal: Slot,
}

impl SearchIndexes {
    /// Registers every service and the goal. Services with no inputs, and the
    /// goal when it is empty, start out callable.
    pub fn new(repo: &Repository, query: &Query) -> Result<Self> {
        for id in [INIT_ID, GOAL_ID] {
            if repo.position(id).is_some() {
                return Err(Error::ReservedServiceId(id.to_owned()));
            }
        }
        let goal = repo.len();
        let slot_inputs = repo
            .services()
            .iter()
            .map(|w| w.inputs())
            .chain(std::iter::once(query.goal.as_slice()));

        let mut indexes = SearchIndexes {
            required: HashMap::new(),
            required_exist: HashMap::new(),
            remaining: Vec::with_capacity(goal + 1),
            callable: VecDeque::new(),
            enqueued: vec![false; goal + 1],
            goal,
        };
        for (slot, inputs) in slot_inputs.enumerate() {
            let mut remaining = BTreeMap::new();
            for pdc in inputs {
                let c = pdc.concept();
                let by_prop = indexes.required.entry(c).or_default();
                for &p in pdc.props() {
                    by_prop.entry(p).or_default().push(slot);
                }
                indexes.required_exist.entry(c).or_default().push(slot);
                let pending: &mut Pending = remaining.entry(c).or_default();
                pending.props.extend(pdc.props().iter().copied());
                pending.needs_existence = true;
            }
            indexes.remaining.push(remaining);
            if indexes.remaining[slot].is_empty() {
                indexes.enqueue(slot);
            }
        }
        Ok(indexes)
    }

    pub fn goal_slot(&self) -> Slot {
        self.goal
    }

    pub fn goal_satisfied(&self) -> bool {
        self.remaining[self.goal].is_empty()
    }

    pub fn remaining(&self, slot: Slot) -> &BTreeMap<ConceptId, Pending> {
        &self.remaining[slot]
    }

    pub fn callable(&self) -> impl Iterator<Item = Slot> + '_ {
        self.callable.iter().copied()
    }

    /// Services waiting on `property` of `concept`.
    pub fn waiting_on(&self, concept: ConceptId, property: PropertyId) -> &[Slot] {
        self.required
            .get(&concept)
            .and_then(|m| m.get(&property))
            .map_or(&[], Vec::as_slice)
    }

    /// Services waiting on some instance of `concept` being known.
    pub fn waiting_on_existence(&self, concept: ConceptId) -> &[Slot] {
        self.required_exist.get(&concept).map_or(&[], Vec::as_slice)
    }

    /// Removes `slot` from the callable set.
    pub fn take(&mut self, slot: Slot) -> bool {
        match self.callable.iter().position(|&s| s == slot) {
            Some(i) => {
                self.callable.remove(i);
                true
            }
            None => false,
        }
    }

    /// Number of outstanding index entries that `learned` would discharge.
    pub fn count_discharged(&self, learned: &Learned) -> usize {
        learned
            .iter()
            .map(|fact| match *fact {
                Fact::Exists(c) => self
                    .waiting_on_existence(c)
                    .iter()
                    .filter(|&&w| self.remaining[w].get(&c).is_some_and(|p| p.needs_existence))
                    .count(),
                Fact::Has(c, p) => self
                    .waiting_on(c, p)
                    .iter()
                    .filter(|&&w| {
                        self.remaining[w]
                            .get(&c)
                            .is_some_and(|x| x.props.contains(&p))
                    })
                    .count(),
            })
            .sum()
    }

    /// Crosses `learned` off every waiting service.
    pub fn discharge(&mut self, learned: &Learned) {
        for &fact in learned {
            let (concept, waiting) = match fact {
                Fact::Exists(c) => (c, self.required_exist.get(&c)),
                Fact::Has(c, p) => (c, self.required.get(&c).and_then(|m| m.get(&p))),
            };
            let Some(waiting) = waiting else { continue };
            for &slot in waiting {
                let remaining = &mut self.remaining[slot];
                if let Some(pending) = remaining.get_mut(&concept) {
                    match fact {
                        Fact::Exists(_) => pending.needs_existence = false,
                        Fact::Has(_, p) => {
                            pending.props.remove(&p);
                        }
                    }
                    if pending.is_discharged() {
                        remaining.remove(&concept);
                    }
                }
                if remaining.is_empty() && !self.enqueued[slot] {
                    self.enqueued[slot] = true;
                    self.callable.push_back(slot);
                }
            }
        }
    }

    fn enqueue(&mut self, slot: Slot) {
        if !self.enqueued[slot] {
            self.enqueued[slot] = true;
            self.callable.push_back(slot);
        }
    }
}

/// Absorbs `outputs` into `knowledge` and updates the indexes with whatever
/// was learned.
pub fn call_web_service(
    ont: &Ontology,
    knowledge: &mut KnowledgeState,
    indexes: &mut SearchIndexes,
    outputs: &[PartialConcept],
) -> Result<Learned> {
    let learned = knowledge.absorb(ont, outputs)?;
    indexes.discharge(&learned);
    Ok(learned)
}
