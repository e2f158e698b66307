//! Forward-chaining composition search.
//!
//! The search starts from the query's initial knowledge, repeatedly picks a
//! callable service, absorbs its outputs and stops as soon as the goal is
//! covered. Every service is called at most once, so the loop runs at most
//! `|repository|` times and either reaches the goal or saturates the
//! reachable knowledge, in which case no composition exists.

mod index;
mod oracle;

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::knowledge::{KnowledgeState, Query, WebService};
use crate::ontology::Ontology;

pub use index::{call_web_service, Pending, SearchIndexes, Slot, GOAL_ID, INIT_ID};
pub use oracle::{brute_force_search, prune_backward, validate_chain};

/// Services in load order, addressable by id.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Repository {
    services: Vec<WebService>,
    by_id: HashMap<String, usize>,
}

impl Repository {
    pub fn new(services: impl IntoIterator<Item = WebService>) -> Result<Self> {
        let mut repo = Repository::default();
        for w in services {
            repo.push(w)?;
        }
        Ok(repo)
    }

    pub fn push(&mut self, service: WebService) -> Result<()> {
        if self.by_id.contains_key(&service.id) {
            return Err(Error::DuplicateService(service.id));
        }
        self.by_id.insert(service.id.clone(), self.services.len());
        self.services.push(service);
        Ok(())
    }

    pub fn services(&self) -> &[WebService] {
        &self.services
    }

    pub fn len(&self) -> usize {
        self.services.len()
    }

    pub fn is_empty(&self) -> bool {
        self.services.is_empty()
    }

    pub fn position(&self, id: &str) -> Option<usize> {
        self.by_id.get(id).copied()
    }

    pub fn get(&self, id: &str) -> Option<&WebService> {
        self.position(id).map(|i| &self.services[i])
    }
}

/// An ordered list of service ids.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Chain(pub Vec<String>);

impl Chain {
    pub fn ids(&self) -> &[String] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl<S: Into<String>> FromIterator<S> for Chain {
    fn from_iter<I: IntoIterator<Item = S>>(iter: I) -> Self {
        Chain(iter.into_iter().map(Into::into).collect())
    }
}

/// How the next service is picked among the callable ones.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Strategy {
    /// The service that became callable first.
    #[default]
    Fifo,
    /// The service that discharges the most outstanding input requirements;
    /// ties go to the lexicographically smallest id.
    Heuristic,
}

impl std::str::FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "fifo" => Ok(Strategy::Fifo),
            "heuristic" => Ok(Strategy::Heuristic),
            other => Err(format!(
                "unknown strategy {other:?} (expected fifo|heuristic)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ComposeOptions {
    pub strategy: Strategy,
    /// Drop services that turn out to be useless, scanning from the end.
    pub prune: bool,
}

/// Number of outstanding requirements (over all pending services and the
/// goal) that calling `service` now would discharge.
pub fn heuristic_score(
    ont: &Ontology,
    knowledge: &KnowledgeState,
    indexes: &SearchIndexes,
    service: &WebService,
) -> Result<usize> {
    let learned = knowledge.clone().absorb(ont, service.outputs())?;
    Ok(indexes.count_discharged(&learned))
}

/// Finds a chain of matching services that reaches the goal, or `None` when
/// the goal is unreachable.
pub fn find_composition(
    ont: &Ontology,
    repo: &Repository,
    query: &Query,
    options: ComposeOptions,
) -> Result<Option<Chain>> {
    let mut indexes = SearchIndexes::new(repo, query)?;
    let mut knowledge = KnowledgeState::empty();
    call_web_service(ont, &mut knowledge, &mut indexes, &query.init)?;

    let services = repo.services();
    let mut composition = Vec::new();
    while !indexes.goal_satisfied() {
        let next = match options.strategy {
            Strategy::Fifo => indexes.callable().find(|&s| s != indexes.goal_slot()),
            Strategy::Heuristic => select_best(ont, &knowledge, &indexes, services)?,
        };
        let Some(slot) = next else { break };
        indexes.take(slot);
        composition.push(slot);
        call_web_service(ont, &mut knowledge, &mut indexes, services[slot].outputs())?;
    }
    if !indexes.goal_satisfied() {
        return Ok(None);
    }

    let chain: Chain = composition
        .into_iter()
        .map(|s| services[s].id.clone())
        .collect();
    if options.prune {
        prune_backward(ont, repo, query, &chain).map(Some)
    } else {
        Ok(Some(chain))
    }
}

fn select_best(
    ont: &Ontology,
    knowledge: &KnowledgeState,
    indexes: &SearchIndexes,
    services: &[WebService],
) -> Result<Option<Slot>> {
    let mut best: Option<(usize, Slot)> = None;
    for slot in indexes.callable() {
        if slot == indexes.goal_slot() {
            continue;
        }
        let score = heuristic_score(ont, knowledge, indexes, &services[slot])?;
        let better = match best {
            None => true,
            Some((best_score, best_slot)) => {
                score > best_score
                    || (score == best_score && services[slot].id < services[best_slot].id)
            }
        };
        if better {
            best = Some((score, slot));
        }
    }
    Ok(best.map(|(_, slot)| slot))
}
