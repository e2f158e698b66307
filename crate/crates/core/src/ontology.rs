//! Concept taxonomy with single inheritance and inherited, typed properties.
//!
//! Concepts form a forest under the `isA` relation. Every property is declared
//! on exactly one concept, its most general holder, and is inherited by all
//! descendants of that concept. The ontology is immutable once loaded and is
//! shared read-only by every composition run.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An absolute IRI, checked for a scheme and the absence of whitespace.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Iri(String);

impl Iri {
    pub fn parse(s: &str) -> Result<Self> {
        if is_absolute_iri(s) {
            Ok(Iri(s.to_owned()))
        } else {
            Err(Error::InvalidIri(s.to_owned()))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// `scheme ":" rest`, with an RFC 3987 scheme and no whitespace, controls or
/// characters excluded from IRIs.
pub fn is_absolute_iri(s: &str) -> bool {
    let Some((scheme, rest)) = s.split_once(':') else {
        return false;
    };
    let mut chars = scheme.chars();
    let scheme_ok = chars.next().is_some_and(|c| c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || matches!(c, '+' | '-' | '.'));
    scheme_ok
        && !rest.is_empty()
        && !s
            .chars()
            .any(|c| c.is_whitespace() || c.is_control() || "<>\"{}|\\^`".contains(c))
}

/// Dense handle of a concept inside one [`Ontology`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ConceptId(u32);

/// Dense handle of a property inside one [`Ontology`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PropertyId(u32);

impl ConceptId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl PropertyId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Property {
    pub iri: Iri,
    pub name: String,
    /// Range of the property. Stored but not consulted by matching.
    pub range: ConceptId,
    /// The concept the property is declared on.
    pub domain: ConceptId,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Concept {
    pub iri: Iri,
    pub name: String,
    pub parent: Option<ConceptId>,
    pub declared: Vec<PropertyId>,
    /// Distance to the root of its tree; roots have depth 0.
    pub depth: usize,
}

/// The shared concept universe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ontology {
    concepts: Vec<Concept>,
    properties: Vec<Property>,
    effective: Vec<BTreeSet<PropertyId>>,
    concept_index: HashMap<String, ConceptId>,
    property_index: HashMap<String, PropertyId>,
}

/// Serialized form of an ontology.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OntologyDocument {
    pub concepts: Vec<ConceptRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConceptRecord {
    pub id: String,
    #[serde(default)]
    pub name: String,
    #[serde(default)]
    pub parent: Option<String>,
    #[serde(default)]
    pub properties: Vec<PropertyRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyRecord {
    pub id: String,
    #[serde(default)]
    pub name: String,
    pub range: String,
}

impl Ontology {
    /// Parses and validates an ontology-JSON document.
    pub fn from_json(bytes: &[u8]) -> Result<Self> {
        let doc: OntologyDocument = serde_json::from_slice(bytes)?;
        Self::from_document(&doc)
    }

    pub fn from_document(doc: &OntologyDocument) -> Result<Self> {
        let mut concept_index = HashMap::with_capacity(doc.concepts.len());
        for (i, rec) in doc.concepts.iter().enumerate() {
            let iri = Iri::parse(&rec.id)?;
            if concept_index.insert(iri.0, ConceptId(i as u32)).is_some() {
                return Err(Error::DuplicateConcept(rec.id.clone()));
            }
        }

        let mut parents = Vec::with_capacity(doc.concepts.len());
        for rec in &doc.concepts {
            let parent = match &rec.parent {
                None => None,
                Some(p) => Some(*concept_index.get(p.as_str()).ok_or_else(|| {
                    Error::DanglingReference {
                        owner: rec.id.clone(),
                        kind: "parent concept",
                        iri: p.clone(),
                    }
                })?),
            };
            parents.push(parent);
        }
        let depths = compute_depths(&parents, &doc.concepts)?;

        let mut properties = Vec::new();
        let mut property_index = HashMap::new();
        let mut concepts = Vec::with_capacity(doc.concepts.len());
        for (i, rec) in doc.concepts.iter().enumerate() {
            let domain = ConceptId(i as u32);
            let mut declared = Vec::with_capacity(rec.properties.len());
            for prec in &rec.properties {
                let iri = Iri::parse(&prec.id)?;
                let range = *concept_index.get(prec.range.as_str()).ok_or_else(|| {
                    Error::DanglingReference {
                        owner: prec.id.clone(),
                        kind: "range concept",
                        iri: prec.range.clone(),
                    }
                })?;
                let id = PropertyId(properties.len() as u32);
                if property_index.insert(prec.id.clone(), id).is_some() {
                    return Err(Error::DuplicateProperty(prec.id.clone()));
                }
                properties.push(Property {
                    iri,
                    name: prec.name.clone(),
                    range,
                    domain,
                });
                declared.push(id);
            }
            concepts.push(Concept {
                iri: Iri(rec.id.clone()),
                name: rec.name.clone(),
                parent: parents[i],
                declared,
                depth: depths[i],
            });
        }

        // Parents can appear after their children, so fill effective sets in
        // depth order.
        let mut order: Vec<usize> = (0..concepts.len()).collect();
        order.sort_by_key(|&i| concepts[i].depth);
        let mut effective = vec![BTreeSet::new(); concepts.len()];
        for i in order {
            let mut set = match concepts[i].parent {
                Some(p) => effective[p.index()].clone(),
                None => BTreeSet::new(),
            };
            set.extend(concepts[i].declared.iter().copied());
            effective[i] = set;
        }

        Ok(Ontology {
            concepts,
            properties,
            effective,
            concept_index,
            property_index,
        })
    }

    pub fn to_document(&self) -> OntologyDocument {
        OntologyDocument {
            concepts: self
                .concepts
                .iter()
                .map(|c| ConceptRecord {
                    id: c.iri.0.clone(),
                    name: c.name.clone(),
                    parent: c.parent.map(|p| self.concept(p).iri.0.clone()),
                    properties: c
                        .declared
                        .iter()
                        .map(|&p| {
                            let prop = self.property(p);
                            PropertyRecord {
                                id: prop.iri.0.clone(),
                                name: prop.name.clone(),
                                range: self.concept(prop.range).iri.0.clone(),
                            }
                        })
                        .collect(),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("ontology serializes")
    }

    pub fn len(&self) -> usize {
        self.concepts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.concepts.is_empty()
    }

    pub fn property_count(&self) -> usize {
        self.properties.len()
    }

    pub fn concept_ids(&self) -> impl Iterator<Item = ConceptId> + '_ {
        (0..self.concepts.len() as u32).map(ConceptId)
    }

    pub fn property_ids(&self) -> impl Iterator<Item = PropertyId> + '_ {
        (0..self.properties.len() as u32).map(PropertyId)
    }

    /// Looks up a concept by IRI.
    pub fn concept_id(&self, iri: &str) -> Result<ConceptId> {
        self.concept_index
            .get(iri)
            .copied()
            .ok_or_else(|| Error::UnknownConcept(iri.to_owned()))
    }

    /// Looks up a property by IRI.
    pub fn property_id(&self, iri: &str) -> Result<PropertyId> {
        self.property_index
            .get(iri)
            .copied()
            .ok_or_else(|| Error::UnknownProperty(iri.to_owned()))
    }

    pub fn concept(&self, id: ConceptId) -> &Concept {
        &self.concepts[id.index()]
    }

    pub fn property(&self, id: PropertyId) -> &Property {
        &self.properties[id.index()]
    }

    pub fn parent(&self, id: ConceptId) -> Option<ConceptId> {
        self.concepts[id.index()].parent
    }

    /// `id` followed by its parent, grandparent and so on up to the root.
    pub fn ancestors(&self, id: ConceptId) -> Ancestors<'_> {
        Ancestors {
            ont: self,
            next: Some(id),
        }
    }

    /// Reflexive, transitive subsumption: `a` is `b` or a descendant of `b`.
    pub fn is_a(&self, a: ConceptId, b: ConceptId) -> bool {
        let target = self.concept(b).depth;
        let mut cur = a;
        while self.concept(cur).depth > target {
            cur = self.parent(cur).expect("non-root concept has a parent");
        }
        cur == b
    }

    /// Declared plus inherited properties of `id`.
    pub fn effective_properties(&self, id: ConceptId) -> &BTreeSet<PropertyId> {
        &self.effective[id.index()]
    }

    /// Whether `concept` has `property`, directly or by inheritance.
    pub fn holds(&self, concept: ConceptId, property: PropertyId) -> bool {
        self.is_a(concept, self.property(property).domain)
    }

    /// Highest ancestor of `concept` (possibly itself) that has `property`.
    pub fn most_general_holder(
        &self,
        concept: ConceptId,
        property: PropertyId,
    ) -> Option<ConceptId> {
        let domain = self.property(property).domain;
        self.is_a(concept, domain).then_some(domain)
    }

    pub fn concept_iri(&self, id: ConceptId) -> &str {
        self.concept(id).iri.as_str()
    }

    pub fn property_iri(&self, id: PropertyId) -> &str {
        self.property(id).iri.as_str()
    }
}

pub struct Ancestors<'a> {
    ont: &'a Ontology,
    next: Option<ConceptId>,
}

impl Iterator for Ancestors<'_> {
    type Item = ConceptId;

    fn next(&mut self) -> Option<ConceptId> {
        let cur = self.next?;
        self.next = self.ont.parent(cur);
        Some(cur)
    }
}

fn compute_depths(parents: &[Option<ConceptId>], recs: &[ConceptRecord]) -> Result<Vec<usize>> {
    const UNSEEN: usize = usize::MAX;
    const ON_PATH: usize = usize::MAX - 1;
    let mut depth = vec![UNSEEN; parents.len()];
    let mut path = Vec::new();
    for start in 0..parents.len() {
        let mut cur = start;
        while depth[cur] == UNSEEN {
            depth[cur] = ON_PATH;
            path.push(cur);
            match parents[cur] {
                Some(p) => cur = p.index(),
                None => break,
            }
        }
        if depth[cur] == ON_PATH && parents[cur].is_some() {
            return Err(Error::Cycle(recs[cur].id.clone()));
        }
        // `cur` is either a fresh root (on the path) or already resolved.
        let mut d = if depth[cur] == ON_PATH {
            path.pop();
            depth[cur] = 0;
            0
        } else {
            depth[cur]
        };
        while let Some(i) = path.pop() {
            d += 1;
            depth[i] = d;
        }
    }
    Ok(depth)
}
