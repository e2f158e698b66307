//! Term resolution against a local JSON-LD `@context`.
//!
//! Only what annotations need is supported: a string context acts as the
//! vocabulary base, an inline object may define `@vocab`, prefixes (values
//! ending in `/` or `#`) and terms, and an array merges its entries in order.
//! Remote contexts are never fetched.

use std::collections::BTreeMap;

use serde_json::Value;

use crate::error::{Error, Result};
use crate::ontology::{is_absolute_iri, Ontology};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ContextMapping {
    /// IRI of the context when it was given by reference.
    pub context_iri: Option<String>,
    vocab: Option<String>,
    prefixes: BTreeMap<String, String>,
    terms: BTreeMap<String, String>,
}

impl ContextMapping {
    /// Reads a context value and checks that every term maps to a concept or
    /// property of `ont`.
    pub fn new(value: &Value, ont: &Ontology) -> Result<Self> {
        let mut mapping = ContextMapping::default();
        mapping.merge(value)?;
        for (term, iri) in &mapping.terms {
            if ont.concept_id(iri).is_err() && ont.property_id(iri).is_err() {
                return Err(Error::UnresolvedTerm(format!("{term} -> {iri}")));
            }
        }
        Ok(mapping)
    }

    fn merge(&mut self, value: &Value) -> Result<()> {
        match value {
            Value::Null => {}
            Value::String(iri) => {
                if !is_absolute_iri(iri) {
                    return Err(Error::InvalidIri(iri.clone()));
                }
                self.context_iri = Some(iri.clone());
                self.vocab = Some(iri.clone());
            }
            Value::Array(items) => {
                for item in items {
                    self.merge(item)?;
                }
            }
            Value::Object(entries) => {
                // Prefixes first so terms may use compact IRIs in any order.
                let mut terms = Vec::new();
                for (key, def) in entries {
                    let target = match def {
                        Value::String(s) => s.as_str(),
                        Value::Object(o) => match o.get("@id") {
                            Some(Value::String(s)) => s.as_str(),
                            _ => continue,
                        },
                        _ => continue,
                    };
                    match key.as_str() {
                        "@vocab" => self.vocab = Some(target.to_owned()),
                        k if k.starts_with('@') => {}
                        k if target.ends_with('/') || target.ends_with('#') => {
                            self.prefixes.insert(k.to_owned(), target.to_owned());
                        }
                        k => terms.push((k.to_owned(), target.to_owned())),
                    }
                }
                for (term, target) in terms {
                    let iri = self.expand_compact(&target)?;
                    self.terms.insert(term, iri);
                }
            }
            other => return Err(Error::Parse(format!("unsupported @context value {other}"))),
        }
        Ok(())
    }

    fn expand_compact(&self, value: &str) -> Result<String> {
        if let Some((prefix, suffix)) = value.split_once(':') {
            if let Some(base) = self.prefixes.get(prefix) {
                return Ok(format!("{base}{suffix}"));
            }
            if is_absolute_iri(value) {
                return Ok(value.to_owned());
            }
        } else if let Some(vocab) = &self.vocab {
            return Ok(format!("{vocab}{value}"));
        }
        Err(Error::UnresolvedTerm(value.to_owned()))
    }

    /// Resolves a term, compact IRI, vocabulary-relative name or absolute IRI.
    pub fn expand(&self, value: &str) -> Result<String> {
        match self.terms.get(value) {
            Some(iri) => Ok(iri.clone()),
            None => self.expand_compact(value),
        }
    }

    /// Direct term lookup, used for JSON datatype names (`string`, `number`,
    /// ...) and JSON field names.
    pub fn map_json_datatype(&self, term: &str) -> Option<&str> {
        self.terms.get(term).map(String::as_str)
    }
}
