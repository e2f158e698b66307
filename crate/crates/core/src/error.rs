use thiserror::Error;

/// Errors raised while loading models or running a composition.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid IRI {0:?}")]
    InvalidIri(String),

    #[error("isA cycle through concept {0}")]
    Cycle(String),

    #[error("duplicate concept IRI {0}")]
    DuplicateConcept(String),

    #[error("duplicate property IRI {0}")]
    DuplicateProperty(String),

    #[error("{owner} references unknown {kind} {iri}")]
    DanglingReference {
        owner: String,
        kind: &'static str,
        iri: String,
    },

    #[error("unknown concept {0}")]
    UnknownConcept(String),

    #[error("unknown property {0}")]
    UnknownProperty(String),

    #[error("concept {concept} does not hold property {property}")]
    PropertyNotHeld { concept: String, property: String },

    #[error("duplicate service id {0}")]
    DuplicateService(String),

    #[error("service id {0} is reserved for the query mock services")]
    ReservedServiceId(String),

    #[error("chain is not a valid composition: {0}")]
    InvalidChain(String),

    #[error("unknown service id {0}")]
    UnknownService(String),

    #[error("annotation references unknown operation {0}")]
    UnknownOperation(String),

    #[error("operation {operation}: {message}")]
    MissingAnnotation { operation: String, message: String },

    #[error("cannot resolve term {0:?} against the annotation context")]
    UnresolvedTerm(String),

    #[error("unsupported document: {0}")]
    Unsupported(String),

    #[error("invalid generator parameters: {0}")]
    InvalidParams(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
