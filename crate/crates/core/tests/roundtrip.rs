mod common;

use common::*;
use proptest::prelude::*;
use semcompose::codec::{load_query, load_repository_native, query_to_json, repository_to_json};
use semcompose::generator::{generate, GeneratorParams};
use semcompose::{find_composition, ComposeOptions, Ontology, Strategy};

proptest! {
    #![proptest_config(ProptestConfig { cases: 256, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn ontology_json_round_trips(ont in arb_ontology()) {
        let back = Ontology::from_json(ont.to_json().as_bytes()).unwrap();
        prop_assert_eq!(back.to_json(), ont.to_json());
        for a in ont.concept_ids() {
            let a2 = back.concept_id(ont.concept_iri(a)).unwrap();
            for b in ont.concept_ids() {
                let b2 = back.concept_id(ont.concept_iri(b)).unwrap();
                prop_assert_eq!(ont.is_a(a, b), back.is_a(a2, b2));
            }
        }
    }

    #[test]
    fn generated_files_reload_identically(seed in any::<u64>(), row in 0usize..4) {
        let (c, p, s, l) = semcompose::generator::TABLE_ROWS[row];
        let inst = generate(&GeneratorParams::new(c, p, s, l, seed)).unwrap();
        let ont = Ontology::from_json(inst.ontology_json().as_bytes()).unwrap();
        let repo = load_repository_native(inst.repository_json().as_bytes(), &ont).unwrap();
        let query = load_query(inst.query_json().as_bytes(), &ont).unwrap();
        prop_assert_eq!(repository_to_json(&repo, &ont), inst.repository_json());
        prop_assert_eq!(query_to_json(&query, &ont), inst.query_json());
    }

    #[test]
    fn composition_is_deterministic(seed in any::<u64>()) {
        let (ont, repo, query) = small_instance(seed);
        for strategy in [Strategy::Fifo, Strategy::Heuristic] {
            let opts = ComposeOptions { strategy, prune: true };
            let a = find_composition(&ont, &repo, &query, opts).unwrap();
            let b = find_composition(&ont, &repo, &query, opts).unwrap();
            prop_assert_eq!(a, b);
        }
    }
}
