//! Semantic web-service composition.
//!
//! Services consume and produce *partially defined concepts*: a concept from a
//! shared single-inheritance taxonomy together with the subset of its
//! (inherited) properties that the service needs or provides. Given an initial
//! set of known concepts and a goal, [`composer::find_composition`] finds an
//! ordered chain of services in which every service is callable with what the
//! previous ones produced.
//!
//! Repositories can be read from a native JSON format or from OpenAPI 3
//! documents annotated with JSON-LD sidecars ([`codec`]). The [`generator`]
//! module builds random, solvable instances for benchmarking.

pub mod codec;
pub mod composer;
pub mod error;
pub mod generator;
pub mod knowledge;
pub mod ontology;

pub use composer::{find_composition, validate_chain, Chain, ComposeOptions, Repository, Strategy};
pub use error::{Error, Result};
pub use knowledge::{KnowledgeState, PartialConcept, Query, WebService};
pub use ontology::{ConceptId, Ontology, PropertyId};
