//! Random problem instances with a hidden valid composition.
//!
//! Generation runs in four steps: a random concept forest with properties
//! attached to random concepts, a repository of services with random
//! parameters, a random initial knowledge set, and finally a *dependency list*
//! of services whose inputs are rebuilt from what the previous services in the
//! list (or the initial knowledge) produce. The goal is drawn from the outputs
//! of the list, so the list itself is always a valid composition.
//!
//! # Reproducibility
//!
//! All randomness comes from Xoshiro256++ seeded through SplitMix64
//! (`seed_from_u64`). Integers below `n` are drawn as
//! `(next_u64() as u128 * n as u128) >> 64` and Bernoulli trials compare the
//! top 53 bits of `next_u64()`, scaled to `[0, 1)`, against the probability.
//! No other source of randomness is used, so a given seed yields the same
//! instance on every platform.

mod bench;

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

use crate::codec::{chain_to_json, query_to_json, repository_to_json};
use crate::composer::{Chain, Repository};
use crate::error::{Error, Result};
use crate::knowledge::{PartialConcept, Query, WebService};
use crate::ontology::{
    ConceptId, ConceptRecord, Ontology, OntologyDocument, PropertyId, PropertyRecord,
};

pub use bench::{bench, to_csv, InstanceResult, RowReport, CSV_HEADER};

/// Namespace of generated concept, property and service names.
pub const GEN_NS: &str = "http://example.org/gen/";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneratorParams {
    pub num_concepts: usize,
    pub num_properties: usize,
    pub num_services: usize,
    pub dependency_list_size: usize,
    pub seed: u64,
    /// Chance that a concept other than the first starts a new tree.
    pub root_probability: f64,
}

impl GeneratorParams {
    pub fn new(
        num_concepts: usize,
        num_properties: usize,
        num_services: usize,
        dependency_list_size: usize,
        seed: u64,
    ) -> Self {
        GeneratorParams {
            num_concepts,
            num_properties,
            num_services,
            dependency_list_size,
            seed,
            root_probability: 0.1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |m: &str| Err(Error::InvalidParams(m.to_owned()));
        if self.num_concepts == 0 {
            return fail("number of concepts must be positive");
        }
        if self.num_properties == 0 {
            return fail("number of properties must be positive");
        }
        if self.num_services == 0 {
            return fail("number of services must be positive");
        }
        if self.dependency_list_size == 0 {
            return fail("dependency list size must be positive");
        }
        if self.dependency_list_size > self.num_services {
            return fail("dependency list size exceeds the number of services");
        }
        if !(0.0..=1.0).contains(&self.root_probability) {
            return fail("root probability must lie in [0, 1]");
        }
        Ok(())
    }
}

/// The parameter rows of the reference benchmark table:
/// (concepts, properties, services, dependency list size).
pub const TABLE_ROWS: [(usize, usize, usize, usize); 4] = [
    (5, 5, 10, 5),
    (10, 10, 20, 10),
    (30, 20, 20, 20),
    (10, 10, 50, 20),
];

#[derive(Debug, Clone)]
pub struct GeneratedInstance {
    pub ontology: Ontology,
    pub repository: Repository,
    pub query: Query,
    pub dependency_list: Chain,
}

impl GeneratedInstance {
    pub fn ontology_json(&self) -> String {
        self.ontology.to_json()
    }

    pub fn repository_json(&self) -> String {
        repository_to_json(&self.repository, &self.ontology)
    }

    pub fn query_json(&self) -> String {
        query_to_json(&self.query, &self.ontology)
    }

    pub fn dependency_list_json(&self) -> String {
        chain_to_json(&self.dependency_list)
    }
}

/// Seeded random source with fixed, documented sampling rules.
pub struct InstanceRng(Xoshiro256PlusPlus);

impl InstanceRng {
    pub fn new(seed: u64) -> Self {
        InstanceRng(Xoshiro256PlusPlus::seed_from_u64(seed))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    /// Uniform integer in `0..n`; `n` must be positive.
    pub fn below(&mut self, n: usize) -> usize {
        assert!(n > 0, "empty range");
        ((self.next_u64() as u128 * n as u128) >> 64) as usize
    }

    /// Uniform integer in `lo..=hi`.
    pub fn between(&mut self, lo: usize, hi: usize) -> usize {
        lo + self.below(hi - lo + 1)
    }

    pub fn chance(&mut self, p: f64) -> bool {
        ((self.next_u64() >> 11) as f64 / (1u64 << 53) as f64) < p
    }

    /// Each element kept with probability ½.
    pub fn subset<T: Copy>(&mut self, items: impl IntoIterator<Item = T>) -> Vec<T> {
        items.into_iter().filter(|_| self.chance(0.5)).collect()
    }
}

pub fn generate(params: &GeneratorParams) -> Result<GeneratedInstance> {
    params.validate()?;
    let mut rng = InstanceRng::new(params.seed);
    let ontology = random_ontology(params, &mut rng)?;
    let ont = &ontology;

    let mut services: Vec<WebService> = (0..params.num_services)
        .map(|i| {
            let n_in = rng.between(1, 3);
            let inputs: Vec<_> = (0..n_in).map(|_| random_pdc(ont, &mut rng)).collect();
            let n_out = rng.between(1, 3);
            let outputs: Vec<_> = (0..n_out).map(|_| random_pdc(ont, &mut rng)).collect();
            WebService::new(format!("w{i}"), format!("service{i}"), inputs, outputs)
        })
        .collect();

    let n_init = rng.between(1, 3);
    let init: Vec<PartialConcept> = (0..n_init).map(|_| random_pdc(ont, &mut rng)).collect();

    // Partial Fisher-Yates: the first `dependency_list_size` entries.
    let mut order: Vec<usize> = (0..params.num_services).collect();
    for i in 0..params.dependency_list_size {
        let j = i + rng.below(order.len() - i);
        order.swap(i, j);
    }
    let list = &order[..params.dependency_list_size];

    let mut pool: Vec<PartialConcept> = init.clone();
    for &idx in list {
        let picks = rng.between(1, pool.len().min(3));
        let inputs: Vec<PartialConcept> = (0..picks)
            .map(|_| {
                let source = &pool[rng.below(pool.len())];
                generalize(ont, source, &mut rng)
            })
            .collect();
        let old = &services[idx];
        services[idx] = WebService::new(
            old.id.clone(),
            old.name.clone(),
            inputs,
            old.outputs().to_vec(),
        );
        pool.extend(services[idx].outputs().iter().cloned());
    }

    let produced: Vec<PartialConcept> = list
        .iter()
        .flat_map(|&i| services[i].outputs().iter().cloned())
        .collect();
    let mut goal: Vec<PartialConcept> = produced
        .iter()
        .filter(|_| rng.chance(0.5))
        .cloned()
        .collect();
    if goal.is_empty() {
        goal.push(produced[rng.below(produced.len())].clone());
    }

    let dependency_list: Chain = list.iter().map(|&i| services[i].id.clone()).collect();
    Ok(GeneratedInstance {
        repository: Repository::new(services)?,
        query: Query::new(init, goal),
        dependency_list,
        ontology,
    })
}

fn random_ontology(params: &GeneratorParams, rng: &mut InstanceRng) -> Result<Ontology> {
    let name = |prefix: &str, i: usize| format!("{GEN_NS}{prefix}{i}");
    let mut concepts: Vec<ConceptRecord> = (0..params.num_concepts)
        .map(|i| {
            let root = i == 0 || rng.chance(params.root_probability);
            ConceptRecord {
                id: name("C", i),
                name: format!("C{i}"),
                parent: (!root).then(|| name("C", rng.below(i))),
                properties: Vec::new(),
            }
        })
        .collect();
    for j in 0..params.num_properties {
        let domain = rng.below(params.num_concepts);
        let range = rng.below(params.num_concepts);
        concepts[domain].properties.push(PropertyRecord {
            id: name("p", j),
            name: format!("p{j}"),
            range: name("C", range),
        });
    }
    Ontology::from_document(&OntologyDocument { concepts })
}

fn random_pdc(ont: &Ontology, rng: &mut InstanceRng) -> PartialConcept {
    let concept = random_concept(ont, rng);
    let props = rng.subset(ont.effective_properties(concept).iter().copied());
    PartialConcept::new(ont, concept, props).expect("effective properties are held")
}

fn random_concept(ont: &Ontology, rng: &mut InstanceRng) -> ConceptId {
    ont.concept_ids()
        .nth(rng.below(ont.len()))
        .expect("index in range")
}

/// A requirement satisfied by knowing `source`: a random subset of its
/// properties, on the source concept itself (probability ½) or on a uniformly
/// chosen strict ancestor that still has all of those properties.
fn generalize(ont: &Ontology, source: &PartialConcept, rng: &mut InstanceRng) -> PartialConcept {
    let props: Vec<PropertyId> = rng.subset(source.props().iter().copied());
    let mut concept = source.concept();
    if !rng.chance(0.5) {
        let candidates: Vec<ConceptId> = ont
            .ancestors(concept)
            .skip(1)
            .filter(|&a| props.iter().all(|&p| ont.holds(a, p)))
            .collect();
        if !candidates.is_empty() {
            concept = candidates[rng.below(candidates.len())];
        }
    }
    PartialConcept::new(ont, concept, props).expect("ancestor holds the chosen properties")
}
