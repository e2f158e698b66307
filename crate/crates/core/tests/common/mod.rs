//! Shared fixtures and independent oracles for the integration tests.
//!
//! The oracles here use only raw parent links and declared properties of the
//! ontology, never `is_a`, `holds` or the aggregated knowledge state.
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::PathBuf;

use semcompose::codec::{load_query, load_repository_native};
use semcompose::generator::{generate, GeneratorParams, InstanceRng};
use semcompose::{
    ConceptId, KnowledgeState, Ontology, PartialConcept, PropertyId, Query, Repository,
};

pub fn fixture(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(rel)
}

pub fn read(rel: &str) -> Vec<u8> {
    std::fs::read(fixture(rel)).unwrap_or_else(|e| panic!("{rel}: {e}"))
}

pub struct CaseStudy {
    pub ont: Ontology,
    pub repo: Repository,
    pub query: Query,
}

pub fn case_study() -> CaseStudy {
    let ont = Ontology::from_json(&read("transport/ontology.json")).unwrap();
    let repo = load_repository_native(&read("transport/repository.json"), &ont).unwrap();
    let query = load_query(&read("transport/query.json"), &ont).unwrap();
    CaseStudy { ont, repo, query }
}

pub const SCHEMA: &str = "http://schema.org/";

pub fn schema(name: &str) -> String {
    format!("{SCHEMA}{name}")
}

/// Partial concept from schema.org local names.
pub fn spdc(ont: &Ontology, concept: &str, props: &[&str]) -> PartialConcept {
    let props: Vec<String> = props.iter().map(|p| schema(p)).collect();
    PartialConcept::from_iris(ont, &schema(concept), &props).unwrap()
}

pub const REFERENCE_ORDER: [&str; 6] = [
    "getCountryFromLocation",
    "getTransportCompany",
    "getClosestCity",
    "getLocalSubsidiary",
    "getVehicle",
    "makeArrangements",
];

// ---------------------------------------------------------------------------
// Oracles

/// `a isA b` by walking raw parent links.
pub fn naive_is_a(ont: &Ontology, a: ConceptId, b: ConceptId) -> bool {
    let mut cur = Some(a);
    let mut steps = 0;
    while let Some(c) = cur {
        if c == b {
            return true;
        }
        steps += 1;
        assert!(steps <= ont.len(), "parent chain longer than the ontology");
        cur = ont.parent(c);
    }
    false
}

/// `c has p`: `p` is declared on `c` or on one of its ancestors.
pub fn naive_has(ont: &Ontology, c: ConceptId, p: PropertyId) -> bool {
    ont.concept_ids()
        .filter(|&d| naive_is_a(ont, c, d))
        .any(|d| ont.concept(d).declared.contains(&p))
}

/// Knowledge as a literal set of partially defined concepts.
pub type PdcSet = BTreeSet<(ConceptId, BTreeSet<PropertyId>)>;

/// `P ⊕ w_out` evaluated set-theoretically over every concept of the
/// ontology: concepts already in `P` gain the new properties they have;
/// concepts not in `P` that generalize some output concept enter `P` with the
/// properties they have.
pub fn naive_absorb(ont: &Ontology, p: &PdcSet, w_out: &[PartialConcept]) -> PdcSet {
    let learned_for = |c: ConceptId| -> BTreeSet<PropertyId> {
        let mut set = BTreeSet::new();
        for out in w_out {
            if !naive_is_a(ont, out.concept(), c) {
                continue;
            }
            for &prop in out.props() {
                if naive_has(ont, c, prop) {
                    set.insert(prop);
                }
            }
        }
        set
    };
    let mut result = PdcSet::new();
    for c in ont.concept_ids() {
        let existing: Vec<&BTreeSet<PropertyId>> = p
            .iter()
            .filter(|(pc, _)| *pc == c)
            .map(|(_, s)| s)
            .collect();
        if existing.is_empty() {
            if w_out.iter().any(|o| naive_is_a(ont, o.concept(), c)) {
                result.insert((c, learned_for(c)));
            }
        } else {
            for props in existing {
                let mut merged = props.clone();
                merged.extend(learned_for(c));
                result.insert((c, merged));
            }
        }
    }
    result
}

/// `∀ (c, S) ∈ inputs. ∃ (c_spec, S') ∈ P. c_spec isA c ∧ S ⊆ S'`.
pub fn naive_matches(ont: &Ontology, p: &PdcSet, inputs: &[PartialConcept]) -> bool {
    inputs.iter().all(|need| {
        p.iter().any(|(c_spec, have)| {
            naive_is_a(ont, *c_spec, need.concept()) && need.props().is_subset(have)
        })
    })
}

/// Whether the aggregated state describes exactly the set `p`.
pub fn same_knowledge(ont: &Ontology, k: &KnowledgeState, p: &PdcSet) -> bool {
    ont.concept_ids().all(|c| {
        let in_p: Vec<&BTreeSet<PropertyId>> = p
            .iter()
            .filter(|(pc, _)| *pc == c)
            .map(|(_, s)| s)
            .collect();
        let known: BTreeSet<PropertyId> = k.known_properties(c).collect();
        match in_p.as_slice() {
            [] => !k.is_known(c) && known.is_empty(),
            [props] => k.is_known(c) && known == **props,
            _ => false,
        }
    })
}

// ---------------------------------------------------------------------------
// Random material

pub fn random_pdc(ont: &Ontology, rng: &mut InstanceRng) -> PartialConcept {
    let c = ont.concept_ids().nth(rng.below(ont.len())).unwrap();
    let props = rng.subset(ont.effective_properties(c).iter().copied());
    PartialConcept::new(ont, c, props).unwrap()
}

/// A requirement likely to be met by `p`: a random known entry, generalized
/// to a random ancestor, with a random subset of the properties that ancestor
/// has. Falls back to a fully random PDC.
pub fn plausible_pdc(ont: &Ontology, p: &PdcSet, rng: &mut InstanceRng) -> PartialConcept {
    if p.is_empty() || rng.chance(0.3) {
        return random_pdc(ont, rng);
    }
    let (c, props) = p.iter().nth(rng.below(p.len())).unwrap();
    let ancestors: Vec<ConceptId> = ont.ancestors(*c).collect();
    let target = ancestors[rng.below(ancestors.len())];
    let mut pool: Vec<PropertyId> = ont.effective_properties(target).iter().copied().collect();
    if rng.chance(0.7) {
        pool.retain(|q| props.contains(q));
    }
    let chosen = rng.subset(pool);
    PartialConcept::new(ont, target, chosen).unwrap()
}

pub fn random_ontology(rng: &mut InstanceRng, max_concepts: usize, max_props: usize) -> Ontology {
    let params = GeneratorParams {
        root_probability: 0.2,
        ..GeneratorParams::new(
            rng.between(1, max_concepts),
            rng.between(1, max_props),
            1,
            1,
            rng.next_u64(),
        )
    };
    generate(&params).unwrap().ontology
}

/// Small generated instance; half of them get a random goal, which is often
/// unreachable.
pub fn small_instance(seed: u64) -> (Ontology, Repository, Query) {
    let mut rng = InstanceRng::new(seed ^ 0x5eed_5eed_5eed_5eed);
    let ns = rng.between(1, 8);
    let params = GeneratorParams {
        root_probability: 0.2,
        ..GeneratorParams::new(
            rng.between(2, 12),
            rng.between(1, 10),
            ns,
            rng.between(1, ns),
            seed,
        )
    };
    let inst = generate(&params).unwrap();
    let mut query = inst.query.clone();
    if rng.chance(0.5) {
        let n = rng.between(1, 2);
        let goal: Vec<PartialConcept> = (0..n)
            .map(|_| random_pdc(&inst.ontology, &mut rng))
            .collect();
        query = Query::new(query.init.clone(), goal);
    }
    (inst.ontology, inst.repository, query)
}

// ---------------------------------------------------------------------------
// Proptest strategies

pub const TEST_NS: &str = "http://example.org/t/";

/// Builds an ontology whose concept `i` has parent `parents[i]` (always an
/// earlier index) and whose property `j` is declared on `domains[j]`.
/// Records are emitted in the order given by `order`.
pub fn build_ontology(parents: &[Option<usize>], domains: &[usize], order: &[usize]) -> Ontology {
    use semcompose::ontology::{ConceptRecord, OntologyDocument, PropertyRecord};
    let iri = |i: usize| format!("{TEST_NS}C{i}");
    let mut records: Vec<ConceptRecord> = parents
        .iter()
        .enumerate()
        .map(|(i, parent)| ConceptRecord {
            id: iri(i),
            name: format!("C{i}"),
            parent: parent.map(iri),
            properties: Vec::new(),
        })
        .collect();
    for (j, &d) in domains.iter().enumerate() {
        records[d].properties.push(PropertyRecord {
            id: format!("{TEST_NS}p{j}"),
            name: format!("p{j}"),
            range: iri(0),
        });
    }
    let concepts = order.iter().map(|&i| records[i].clone()).collect();
    Ontology::from_document(&OntologyDocument { concepts }).expect("generated forest is valid")
}

/// Random forests of 1 to 12 concepts with up to 10 properties, listed in a
/// shuffled order.
pub fn arb_ontology() -> impl proptest::strategy::Strategy<Value = Ontology> {
    use proptest::prelude::*;
    (1usize..=12)
        .prop_flat_map(|n| {
            let parents: Vec<BoxedStrategy<Option<usize>>> = (0..n)
                .map(|i| {
                    if i == 0 {
                        Just(None).boxed()
                    } else {
                        proptest::option::weighted(0.8, 0..i).boxed()
                    }
                })
                .collect();
            let order = Just((0..n).collect::<Vec<usize>>()).prop_shuffle();
            (parents, proptest::collection::vec(0..n, 0..=10), order)
        })
        .prop_map(|(parents, domains, order)| build_ontology(&parents, &domains, &order))
}
