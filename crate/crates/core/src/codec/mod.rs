//! Reading and writing repositories, queries and chains.

pub mod context;
pub mod native;
pub mod openapi;

pub use context::ContextMapping;
pub use native::{
    chain_to_json, load_chain, load_query, load_repository_native, query_to_json,
    repository_to_json,
};
pub use openapi::{
    load_repository_from_openapi, AnnotatedOperation, LoadOptions, OpenApiLoad, ParameterBinding,
    REQUEST_BODY,
};
