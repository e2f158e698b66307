//! OpenAPI + JSON-LD ingestion against the native fixtures, plus the edge
//! cases of annotation coverage.

mod common;

use common::*;
use semcompose::codec::{load_repository_from_openapi, LoadOptions, REQUEST_BODY};
use semcompose::{find_composition, ComposeOptions, Error, Ontology};

fn strict() -> LoadOptions {
    LoadOptions { strict: true }
}

fn lenient() -> LoadOptions {
    LoadOptions { strict: false }
}

#[test]
fn transport_description_equals_native_repository() {
    let cs = case_study();
    let load = load_repository_from_openapi(
        &read("transport/openapi.json"),
        &[&read("transport/annotations.jsonld")],
        &cs.ont,
        strict(),
    )
    .unwrap();
    assert!(load.warnings.is_empty(), "{:?}", load.warnings);
    assert_eq!(load.repository, cs.repo);

    let ops: Vec<&str> = load
        .operations
        .iter()
        .map(|o| o.operation_id.as_str())
        .collect();
    assert_eq!(ops, REFERENCE_ORDER);
    let country = &load.operations[0];
    assert_eq!(
        (country.path.as_str(), country.method.as_str()),
        ("/country", "GET")
    );
    let names: Vec<&str> = country
        .parameter_bindings
        .iter()
        .map(|b| b.name.as_str())
        .collect();
    assert_eq!(names, ["lat", "lon"]);
    // lat and lon both bind GeoCoordinates and become one input.
    assert_eq!(load.repository.services()[0].inputs().len(), 1);

    let found = find_composition(
        &cs.ont,
        &load.repository,
        &cs.query,
        ComposeOptions::default(),
    )
    .unwrap()
    .unwrap();
    assert_eq!(found.len(), 6);
    assert_eq!(found.ids().last().unwrap(), "makeArrangements");
}

#[test]
fn skeleton_yields_one_service() {
    let ont = Ontology::from_json(&read("skeleton/ontology.json")).unwrap();
    let load = load_repository_from_openapi(
        &read("skeleton/openapi.json"),
        &[&read("skeleton/annotations.jsonld")],
        &ont,
        strict(),
    )
    .unwrap();
    assert_eq!(load.repository.len(), 1);
    let w = &load.repository.services()[0];
    assert_eq!(w.id, "service");
    let c1 = ont.concept_id("http://ontology.info/Concept1").unwrap();
    let c2 = ont.concept_id("http://ontology.info/Concept2").unwrap();
    assert_eq!(w.inputs().len(), 1);
    assert_eq!(w.inputs()[0].concept(), c1);
    assert!(w.inputs()[0].props().is_empty());
    assert_eq!(w.outputs().len(), 1);
    assert_eq!(w.outputs()[0].concept(), c2);
}

fn skeleton_ont() -> Ontology {
    Ontology::from_json(&read("skeleton/ontology.json")).unwrap()
}

const TWO_OPS: &str = r##"{
  "openapi": "3.1.0",
  "paths": {
    "/a": { "get": { "operationId": "a", "summary": "Fetch A",
              "parameters": [ { "name": "x", "in": "query", "schema": { "type": "string" } } ],
              "responses": { "200": { "description": "ok",
                  "content": { "application/json": { "schema": { "type": "object" } } } } } } },
    "/b": { "post": { "operationId": "b",
              "requestBody": { "content": { "application/json": { "schema": {
                  "type": "object", "properties": { "first": { "type": "string" } } } } } },
              "responses": { "204": { "description": "done" } } } }
  }
}"##;

const ANNOTATE_A: &str = r#"{ "operationId": "a", "@context": "http://ontology.info/",
  "inputs": [ { "name": "x", "@type": "Concept1" } ], "outputs": [ { "@type": "Concept2" } ] }"#;

const ANNOTATE_B: &str = r#"{ "operationId": "b", "@context": "http://ontology.info/",
  "inputs": [ { "name": "first", "@type": "Concept2" } ] }"#;

#[test]
fn unannotated_operation_is_fatal_when_strict_and_skipped_when_lenient() {
    let ont = skeleton_ont();
    let err =
        load_repository_from_openapi(TWO_OPS.as_bytes(), &[ANNOTATE_A.as_bytes()], &ont, strict())
            .unwrap_err();
    assert!(
        matches!(err, Error::MissingAnnotation { ref operation, .. } if operation == "b"),
        "{err}"
    );

    let load = load_repository_from_openapi(
        TWO_OPS.as_bytes(),
        &[ANNOTATE_A.as_bytes()],
        &ont,
        lenient(),
    )
    .unwrap();
    assert_eq!(load.repository.len(), 1);
    assert_eq!(load.repository.services()[0].name, "Fetch A");
    assert_eq!(load.warnings.len(), 1);
    assert!(load.warnings[0].starts_with("b:"));
}

#[test]
fn request_body_binds_through_a_top_level_field() {
    let ont = skeleton_ont();
    let load = load_repository_from_openapi(
        TWO_OPS.as_bytes(),
        &[ANNOTATE_A.as_bytes(), ANNOTATE_B.as_bytes()],
        &ont,
        strict(),
    )
    .unwrap();
    assert_eq!(load.repository.len(), 2);
    let b = load.repository.get("b").unwrap();
    assert_eq!(b.name, "b");
    assert_eq!(b.inputs().len(), 1);
    assert!(b.outputs().is_empty());

    let by_name = ANNOTATE_B.replace("\"first\"", &format!("{REQUEST_BODY:?}"));
    let again = load_repository_from_openapi(
        TWO_OPS.as_bytes(),
        &[ANNOTATE_A.as_bytes(), by_name.as_bytes()],
        &ont,
        strict(),
    )
    .unwrap();
    assert_eq!(again.repository, load.repository);
}

#[test]
fn partially_annotated_inputs_or_responses_are_coverage_errors() {
    let ont = skeleton_ont();
    let no_inputs = r#"{ "operationId": "a", "@context": "http://ontology.info/",
        "outputs": [ { "@type": "Concept2" } ] }"#;
    let err = load_repository_from_openapi(
        TWO_OPS.as_bytes(),
        &[no_inputs.as_bytes(), ANNOTATE_B.as_bytes()],
        &ont,
        strict(),
    )
    .unwrap_err();
    assert!(matches!(err, Error::MissingAnnotation { .. }), "{err}");

    let no_outputs = r#"{ "operationId": "a", "@context": "http://ontology.info/",
        "inputs": [ { "name": "x", "@type": "Concept1" } ] }"#;
    let load = load_repository_from_openapi(
        TWO_OPS.as_bytes(),
        &[no_outputs.as_bytes(), ANNOTATE_B.as_bytes()],
        &ont,
        lenient(),
    )
    .unwrap();
    assert_eq!(load.repository.len(), 1);
    assert!(load.repository.get("a").is_none());
}

#[test]
fn annotation_for_unknown_operation_is_rejected() {
    let ont = skeleton_ont();
    let stray = r#"{ "operationId": "zzz", "@context": "http://ontology.info/" }"#;
    let err = load_repository_from_openapi(
        TWO_OPS.as_bytes(),
        &[
            ANNOTATE_A.as_bytes(),
            ANNOTATE_B.as_bytes(),
            stray.as_bytes(),
        ],
        &ont,
        strict(),
    )
    .unwrap_err();
    assert!(
        matches!(err, Error::UnknownOperation(ref op) if op == "zzz"),
        "{err}"
    );
}

#[test]
fn document_without_paths_gives_empty_repository() {
    let ont = skeleton_ont();
    for doc in [
        r#"{ "openapi": "3.0.0" }"#,
        r#"{ "openapi": "3.0.0", "paths": {} }"#,
    ] {
        let load = load_repository_from_openapi(doc.as_bytes(), &[], &ont, strict()).unwrap();
        assert!(load.repository.is_empty());
    }
    let err =
        load_repository_from_openapi(br#"{ "swagger": "2.0" }"#, &[], &ont, strict()).unwrap_err();
    assert!(matches!(err, Error::Unsupported(_)));
}

#[test]
fn untyped_input_takes_its_concept_from_the_datatype_mapping() {
    let cs = case_study();
    let doc = r#"{ "openapi": "3.0.0", "paths": { "/t": { "get": { "operationId": "t",
        "parameters": [ { "name": "q", "in": "query", "schema": { "type": "string" } } ],
        "responses": { "200": { "description": "ok",
            "content": { "application/json": { "schema": { "type": "number" } } } } } } } } }"#;
    let ann = r#"{ "operationId": "t",
        "@context": { "@vocab": "http://schema.org/", "string": "Text", "number": "Number" },
        "inputs": [ { "name": "q" } ], "outputs": [ {} ] }"#;
    let load =
        load_repository_from_openapi(doc.as_bytes(), &[ann.as_bytes()], &cs.ont, strict()).unwrap();
    let t = load.repository.get("t").unwrap();
    assert_eq!(
        t.inputs()[0].concept(),
        cs.ont.concept_id(&schema("Text")).unwrap()
    );
    assert_eq!(
        t.outputs()[0].concept(),
        cs.ont.concept_id(&schema("Number")).unwrap()
    );

    let unmapped = r#"{ "operationId": "t", "@context": "http://schema.org/",
        "inputs": [ { "name": "q" } ], "outputs": [ { "@type": "Number" } ] }"#;
    let err =
        load_repository_from_openapi(doc.as_bytes(), &[unmapped.as_bytes()], &cs.ont, strict())
            .unwrap_err();
    assert!(matches!(err, Error::UnresolvedTerm(_)), "{err}");
}

#[test]
fn property_not_held_by_bound_concept_is_rejected() {
    let cs = case_study();
    let mut ann: serde_json::Value =
        serde_json::from_slice(&read("transport/annotations.jsonld")).unwrap();
    // getClosestCity: claim the City output carries a vehicle identification number.
    ann[2]["outputs"][0]["properties"] = serde_json::json!(["schema:vehicleIdentificationNumber"]);
    let bytes = serde_json::to_vec(&ann).unwrap();
    let err = load_repository_from_openapi(
        &read("transport/openapi.json"),
        &[&bytes],
        &cs.ont,
        strict(),
    )
    .unwrap_err();
    assert!(matches!(err, Error::PropertyNotHeld { .. }), "{err}");
}
