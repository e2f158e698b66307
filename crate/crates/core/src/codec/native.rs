//! Native JSON formats for repositories, queries and chains.

use serde::{Deserialize, Serialize};

use crate::composer::{Chain, Repository};
use crate::error::Result;
use crate::knowledge::{PartialConcept, Query, WebService};
use crate::ontology::Ontology;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PdcRecord {
    pub concept: String,
    #[serde(default)]
    pub props: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ServiceRecord {
    pub id: String,
    #[serde(default)]
    pub name: String,
    #[serde(rename = "in", default)]
    pub inputs: Vec<PdcRecord>,
    #[serde(rename = "out", default)]
    pub outputs: Vec<PdcRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepositoryDocument {
    pub services: Vec<ServiceRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryDocument {
    #[serde(default)]
    pub init: Vec<PdcRecord>,
    #[serde(default)]
    pub goal: Vec<PdcRecord>,
}

/// Chain file. Extra fields are ignored, so the JSON report of `compose` can
/// be fed back as is.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainDocument {
    pub chain: Vec<String>,
}

pub fn pdc_from_record(ont: &Ontology, rec: &PdcRecord) -> Result<PartialConcept> {
    PartialConcept::from_iris(ont, &rec.concept, &rec.props)
}

pub fn pdc_to_record(ont: &Ontology, pdc: &PartialConcept) -> PdcRecord {
    PdcRecord {
        concept: ont.concept_iri(pdc.concept()).to_owned(),
        props: pdc
            .props()
            .iter()
            .map(|&p| ont.property_iri(p).to_owned())
            .collect(),
    }
}

fn pdcs(ont: &Ontology, recs: &[PdcRecord]) -> Result<Vec<PartialConcept>> {
    recs.iter().map(|r| pdc_from_record(ont, r)).collect()
}

pub fn repository_from_document(doc: &RepositoryDocument, ont: &Ontology) -> Result<Repository> {
    let services = doc
        .services
        .iter()
        .map(|s| {
            Ok(WebService::new(
                s.id.clone(),
                s.name.clone(),
                pdcs(ont, &s.inputs)?,
                pdcs(ont, &s.outputs)?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    Repository::new(services)
}

pub fn load_repository_native(bytes: &[u8], ont: &Ontology) -> Result<Repository> {
    let doc: RepositoryDocument = serde_json::from_slice(bytes)?;
    repository_from_document(&doc, ont)
}

pub fn repository_to_document(repo: &Repository, ont: &Ontology) -> RepositoryDocument {
    let records = |xs: &[PartialConcept]| xs.iter().map(|p| pdc_to_record(ont, p)).collect();
    RepositoryDocument {
        services: repo
            .services()
            .iter()
            .map(|w| ServiceRecord {
                id: w.id.clone(),
                name: w.name.clone(),
                inputs: records(w.inputs()),
                outputs: records(w.outputs()),
            })
            .collect(),
    }
}

pub fn repository_to_json(repo: &Repository, ont: &Ontology) -> String {
    serde_json::to_string_pretty(&repository_to_document(repo, ont)).expect("repository serializes")
}

pub fn load_query(bytes: &[u8], ont: &Ontology) -> Result<Query> {
    let doc: QueryDocument = serde_json::from_slice(bytes)?;
    Ok(Query::new(pdcs(ont, &doc.init)?, pdcs(ont, &doc.goal)?))
}

pub fn query_to_json(query: &Query, ont: &Ontology) -> String {
    let doc = QueryDocument {
        init: query.init.iter().map(|p| pdc_to_record(ont, p)).collect(),
        goal: query.goal.iter().map(|p| pdc_to_record(ont, p)).collect(),
    };
    serde_json::to_string_pretty(&doc).expect("query serializes")
}

pub fn load_chain(bytes: &[u8]) -> Result<Chain> {
    let doc: ChainDocument = serde_json::from_slice(bytes)?;
    Ok(Chain(doc.chain))
}

pub fn chain_to_json(chain: &Chain) -> String {
    serde_json::to_string_pretty(&ChainDocument {
        chain: chain.ids().to_vec(),
    })
    .expect("chain serializes")
}
