//! Index-free checks: chain validation, backward pruning and an exhaustive
//! breadth-first search. All of them re-evaluate knowledge from scratch and
//! never touch [`SearchIndexes`](super::SearchIndexes).

use std::collections::{BTreeSet, HashSet};

use crate::error::{Error, Result};
use crate::knowledge::{KnowledgeState, Query, WebService};
use crate::ontology::Ontology;

use super::{Chain, Repository};

fn resolve<'r>(repo: &'r Repository, chain: &Chain) -> Result<Vec<&'r WebService>> {
    chain
        .ids()
        .iter()
        .map(|id| {
            repo.get(id)
                .ok_or_else(|| Error::UnknownService(id.clone()))
        })
        .collect()
}

fn initial_knowledge(ont: &Ontology, query: &Query) -> Result<KnowledgeState> {
    KnowledgeState::empty().absorbed(ont, &query.init)
}

fn run_valid(ont: &Ontology, query: &Query, services: &[&WebService]) -> Result<bool> {
    let mut seen = HashSet::new();
    let mut k = initial_knowledge(ont, query)?;
    for w in services {
        if !seen.insert(w.id.as_str()) || !k.matches_service(w) {
            return Ok(false);
        }
        k.absorb(ont, w.outputs())?;
    }
    Ok(k.satisfies_goal(&query.goal))
}

/// Whether every service in `chain` matches the knowledge accumulated from the
/// initial knowledge and its predecessors, and the goal holds at the end.
/// A chain that repeats a service is rejected.
pub fn validate_chain(
    ont: &Ontology,
    repo: &Repository,
    query: &Query,
    chain: &Chain,
) -> Result<bool> {
    let services = resolve(repo, chain)?;
    run_valid(ont, query, &services)
}

/// Walks `chain` from the last service to the first and drops every service
/// whose removal leaves a valid chain.
pub fn prune_backward(
    ont: &Ontology,
    repo: &Repository,
    query: &Query,
    chain: &Chain,
) -> Result<Chain> {
    let mut services = resolve(repo, chain)?;
    if !run_valid(ont, query, &services)? {
        return Err(Error::InvalidChain(
            "backward pruning needs a valid chain".to_owned(),
        ));
    }
    for i in (0..services.len()).rev() {
        let mut candidate = services.clone();
        candidate.remove(i);
        if run_valid(ont, query, &candidate)? {
            services = candidate;
        }
    }
    Ok(services.iter().map(|w| w.id.clone()).collect())
}

/// Shortest valid chain of at most `max_len` services, by breadth-first search.
///
/// States are deduplicated on their knowledge: two prefixes that know the same
/// facts have the same continuations, and re-calling a service already in a
/// prefix never teaches anything new, so the first chain found is a shortest
/// one.
pub fn brute_force_search(
    ont: &Ontology,
    repo: &Repository,
    query: &Query,
    max_len: usize,
) -> Result<Option<Chain>> {
    let start = initial_knowledge(ont, query)?;
    if start.satisfies_goal(&query.goal) {
        return Ok(Some(Chain::default()));
    }
    let services = repo.services();
    let mut seen: BTreeSet<KnowledgeState> = BTreeSet::new();
    seen.insert(start.clone());
    let mut frontier: Vec<(Vec<usize>, KnowledgeState)> = vec![(Vec::new(), start)];

    for _ in 0..max_len {
        let mut next = Vec::new();
        for (prefix, k) in &frontier {
            for (i, w) in services.iter().enumerate() {
                if prefix.contains(&i) || !k.matches_service(w) {
                    continue;
                }
                let after = k.absorbed(ont, w.outputs())?;
                if !seen.insert(after.clone()) {
                    continue;
                }
                let mut chain = prefix.clone();
                chain.push(i);
                if after.satisfies_goal(&query.goal) {
                    return Ok(Some(
                        chain.iter().map(|&s| services[s].id.clone()).collect(),
                    ));
                }
                next.push((chain, after));
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    Ok(None)
}
