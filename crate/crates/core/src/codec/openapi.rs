//! OpenAPI 3 ingestion with JSON-LD annotation sidecars.
//!
//! Each operation of the OpenAPI document becomes one service, identified by
//! its `operationId`. The sidecar binds operation inputs (parameters or the
//! request body) and the success response to ontology concepts:
//!
//! ```json
//! [ { "operationId": "getCountryFromLocation",
//!     "@context": { "schema": "http://schema.org/" },
//!     "inputs":  [ { "name": "lat", "@type": "schema:GeoCoordinates",
//!                    "properties": ["schema:latitude"] } ],
//!     "outputs": [ { "@type": "schema:Country", "properties": ["schema:name"] } ] } ]
//! ```
//!
//! Several inputs bound to the same concept are merged into one partially
//! defined concept. An input or output without `@type` takes its concept from
//! the context mapping of its JSON schema type.

use std::collections::{BTreeSet, HashMap};

use serde::Deserialize;
use serde_json::{Map, Value};

use super::context::ContextMapping;
use crate::composer::Repository;
use crate::error::{Error, Result};
use crate::knowledge::{PartialConcept, WebService};
use crate::ontology::{ConceptId, Ontology, PropertyId};

const METHODS: [&str; 8] = [
    "get", "put", "post", "delete", "options", "head", "patch", "trace",
];

/// Name under which an annotation binds a request body as a whole.
pub const REQUEST_BODY: &str = "requestBody";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LoadOptions {
    /// Reject operations with unannotated inputs or responses. When off, such
    /// operations are skipped and reported in [`OpenApiLoad::warnings`].
    pub strict: bool,
}

impl Default for LoadOptions {
    fn default() -> Self {
        LoadOptions { strict: true }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParameterBinding {
    pub name: String,
    pub concept: ConceptId,
    pub props: BTreeSet<PropertyId>,
}

/// An operation together with its resolved annotations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnotatedOperation {
    pub path: String,
    pub method: String,
    pub operation_id: String,
    pub parameter_bindings: Vec<ParameterBinding>,
    pub response_binding: Vec<PartialConcept>,
}

#[derive(Debug, Clone)]
pub struct OpenApiLoad {
    pub repository: Repository,
    pub operations: Vec<AnnotatedOperation>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, Deserialize)]
struct Annotation {
    #[serde(rename = "operationId")]
    operation_id: String,
    #[serde(rename = "@context", default)]
    context: Value,
    #[serde(default)]
    inputs: Vec<InputAnnotation>,
    #[serde(default)]
    outputs: Vec<OutputAnnotation>,
}

#[derive(Debug, Clone, Deserialize)]
struct InputAnnotation {
    name: String,
    #[serde(rename = "@type")]
    ty: Option<String>,
    #[serde(default)]
    properties: Vec<String>,
}

#[derive(Debug, Clone, Deserialize)]
struct OutputAnnotation {
    #[serde(rename = "@type")]
    ty: Option<String>,
    #[serde(default)]
    properties: Vec<String>,
}

/// An input slot of an operation that an annotation can bind.
struct InputSlot {
    name: String,
    schema: Option<Value>,
    body: bool,
}

pub fn load_repository_from_openapi(
    openapi: &[u8],
    annotations: &[&[u8]],
    ont: &Ontology,
    options: LoadOptions,
) -> Result<OpenApiLoad> {
    let doc: Value = serde_json::from_slice(openapi)?;
    match doc.get("openapi").and_then(Value::as_str) {
        Some(v) if v.starts_with("3.") => {}
        Some(v) => return Err(Error::Unsupported(format!("OpenAPI version {v}"))),
        None => {
            return Err(Error::Unsupported(
                "missing \"openapi\" version field".into(),
            ))
        }
    }

    let mut by_op: HashMap<String, Annotation> = HashMap::new();
    for bytes in annotations {
        let value: Value = serde_json::from_slice(bytes)?;
        let list: Vec<Annotation> = match value {
            Value::Array(_) => serde_json::from_value(value)?,
            other => vec![serde_json::from_value(other)?],
        };
        for ann in list {
            let id = ann.operation_id.clone();
            if by_op.insert(id.clone(), ann).is_some() {
                return Err(Error::Parse(format!("operation {id} is annotated twice")));
            }
        }
    }

    let mut services = Vec::new();
    let mut operations = Vec::new();
    let mut warnings = Vec::new();
    let mut seen_ops = BTreeSet::new();

    let empty = Map::new();
    let paths = match doc.get("paths") {
        None | Some(Value::Null) => &empty,
        Some(Value::Object(p)) => p,
        Some(_) => return Err(Error::Parse("\"paths\" must be an object".into())),
    };
    for (path, item) in paths {
        let item = resolve_ref(&doc, item)?;
        let shared_params = item.get("parameters").cloned().unwrap_or(Value::Null);
        for (method, op) in item.as_object().into_iter().flatten() {
            if !METHODS.contains(&method.as_str()) {
                continue;
            }
            let Some(op_id) = op.get("operationId").and_then(Value::as_str) else {
                let msg = format!("{} {path} has no operationId", method.to_uppercase());
                if options.strict {
                    return Err(Error::MissingAnnotation {
                        operation: format!("{} {path}", method.to_uppercase()),
                        message: msg,
                    });
                }
                warnings.push(msg);
                continue;
            };
            seen_ops.insert(op_id.to_owned());
            let Some(ann) = by_op.get(op_id) else {
                let msg = "operation is not annotated".to_owned();
                if options.strict {
                    return Err(Error::MissingAnnotation {
                        operation: op_id.to_owned(),
                        message: msg,
                    });
                }
                warnings.push(format!("{op_id}: {msg}; skipped"));
                continue;
            };

            let slots = input_slots(&doc, &shared_params, op)?;
            let success = success_schema(&doc, op)?;
            match bind_operation(ont, path, method, op_id, ann, &slots, &success) {
                Ok(bound) => {
                    let name = op
                        .get("summary")
                        .and_then(Value::as_str)
                        .unwrap_or(op_id)
                        .to_owned();
                    let inputs = bound
                        .parameter_bindings
                        .iter()
                        .map(|b| PartialConcept::new(ont, b.concept, b.props.iter().copied()))
                        .collect::<Result<Vec<_>>>()?;
                    services.push(WebService::new(
                        op_id,
                        name,
                        inputs,
                        bound.response_binding.clone(),
                    ));
                    operations.push(bound);
                }
                Err(Coverage(msg)) if !options.strict => {
                    warnings.push(format!("{op_id}: {msg}; skipped"));
                }
                Err(Coverage(msg)) => {
                    return Err(Error::MissingAnnotation {
                        operation: op_id.to_owned(),
                        message: msg,
                    })
                }
                Err(Hard(e)) => return Err(e),
            }
        }
    }

    let mut unknown: Vec<&String> = by_op.keys().filter(|k| !seen_ops.contains(*k)).collect();
    unknown.sort();
    if let Some(op) = unknown.first() {
        return Err(Error::UnknownOperation((*op).clone()));
    }

    Ok(OpenApiLoad {
        repository: Repository::new(services)?,
        operations,
        warnings,
    })
}

enum BindError {
    /// Something is left unannotated; fatal only in strict mode.
    Coverage(String),
    Hard(Error),
}
use BindError::{Coverage, Hard};

impl From<Error> for BindError {
    fn from(e: Error) -> Self {
        Hard(e)
    }
}

/// The 2xx response of an operation, with its schema if it has one.
struct Success {
    present: bool,
    schema: Option<Value>,
}

fn bind_operation(
    ont: &Ontology,
    path: &str,
    method: &str,
    op_id: &str,
    ann: &Annotation,
    slots: &[InputSlot],
    success: &Success,
) -> Result<AnnotatedOperation, BindError> {
    let ctx = ContextMapping::new(&ann.context, ont)?;

    let mut bindings = Vec::new();
    let mut bound = BTreeSet::new();
    for input in &ann.inputs {
        let slot = slots
            .iter()
            .find(|s| s.name == input.name)
            .or_else(|| {
                // A top-level field of the request body binds the body.
                slots.iter().find(|s| {
                    s.body
                        && s.schema
                            .as_ref()
                            .and_then(|sc| sc.get("properties"))
                            .and_then(|p| p.get(&input.name))
                            .is_some()
                })
            })
            .ok_or_else(|| {
                Hard(Error::Parse(format!(
                    "annotation of {op_id} binds unknown input {:?}",
                    input.name
                )))
            })?;
        bound.insert(slot.name.clone());
        let concept = resolve_concept(ont, &ctx, input.ty.as_deref(), slot.schema.as_ref())?;
        let props = resolve_props(ont, &ctx, &input.properties)?;
        PartialConcept::new(ont, concept, props.iter().copied())?;
        bindings.push(ParameterBinding {
            name: input.name.clone(),
            concept,
            props,
        });
    }
    if let Some(missing) = slots.iter().find(|s| !bound.contains(&s.name)) {
        return Err(Coverage(format!(
            "input {:?} is not annotated",
            missing.name
        )));
    }

    if !ann.outputs.is_empty() && !success.present {
        return Err(Hard(Error::Parse(format!(
            "annotation of {op_id} declares outputs but the operation has no 2xx response"
        ))));
    }
    if ann.outputs.is_empty() && success.schema.is_some() {
        return Err(Coverage("success response is not annotated".to_owned()));
    }
    let mut outputs = Vec::new();
    for out in &ann.outputs {
        let concept = resolve_concept(ont, &ctx, out.ty.as_deref(), success.schema.as_ref())?;
        let props = resolve_props(ont, &ctx, &out.properties)?;
        outputs.push(PartialConcept::new(ont, concept, props)?);
    }

    Ok(AnnotatedOperation {
        path: path.to_owned(),
        method: method.to_uppercase(),
        operation_id: op_id.to_owned(),
        parameter_bindings: bindings,
        response_binding: outputs,
    })
}

fn resolve_concept(
    ont: &Ontology,
    ctx: &ContextMapping,
    ty: Option<&str>,
    schema: Option<&Value>,
) -> Result<ConceptId> {
    let iri = match ty {
        Some(t) => ctx.expand(t)?,
        None => {
            let datatype = schema
                .map(schema_type)
                .ok_or_else(|| Error::UnresolvedTerm("<untyped input without schema>".into()))?;
            ctx.map_json_datatype(datatype)
                .ok_or_else(|| Error::UnresolvedTerm(datatype.to_owned()))?
                .to_owned()
        }
    };
    ont.concept_id(&iri)
}

fn resolve_props(
    ont: &Ontology,
    ctx: &ContextMapping,
    props: &[String],
) -> Result<BTreeSet<PropertyId>> {
    props
        .iter()
        .map(|p| ont.property_id(&ctx.expand(p)?))
        .collect()
}

fn schema_type(schema: &Value) -> &str {
    schema
        .get("type")
        .and_then(Value::as_str)
        .unwrap_or("object")
}

/// Follows a local `$ref` (`#/...`) chain.
fn resolve_ref<'a>(doc: &'a Value, mut value: &'a Value) -> Result<&'a Value> {
    for _ in 0..32 {
        let Some(r) = value.get("$ref").and_then(Value::as_str) else {
            return Ok(value);
        };
        let pointer = r
            .strip_prefix('#')
            .ok_or_else(|| Error::Unsupported(format!("non-local $ref {r}")))?;
        value = doc
            .pointer(pointer)
            .ok_or_else(|| Error::Parse(format!("dangling $ref {r}")))?;
    }
    Err(Error::Parse("$ref chain too deep".into()))
}

fn input_slots(doc: &Value, shared: &Value, op: &Value) -> Result<Vec<InputSlot>> {
    let mut slots: Vec<(String, String, Option<Value>)> = Vec::new();
    for list in [shared, op.get("parameters").unwrap_or(&Value::Null)] {
        for p in list.as_array().into_iter().flatten() {
            let p = resolve_ref(doc, p)?;
            let name = p
                .get("name")
                .and_then(Value::as_str)
                .ok_or_else(|| Error::Parse("parameter without name".into()))?;
            let location = p.get("in").and_then(Value::as_str).unwrap_or("query");
            let schema = match p.get("schema") {
                Some(s) => Some(resolve_ref(doc, s)?.clone()),
                None => None,
            };
            // Operation-level parameters override path-level ones.
            slots.retain(|(n, l, _)| !(n == name && l == location));
            slots.push((name.to_owned(), location.to_owned(), schema));
        }
    }
    let mut out: Vec<InputSlot> = slots
        .into_iter()
        .map(|(name, _, schema)| InputSlot {
            name,
            schema,
            body: false,
        })
        .collect();
    if let Some(body) = op.get("requestBody") {
        let body = resolve_ref(doc, body)?;
        out.push(InputSlot {
            name: REQUEST_BODY.to_owned(),
            schema: content_schema(doc, body)?,
            body: true,
        });
    }
    Ok(out)
}

fn content_schema(doc: &Value, holder: &Value) -> Result<Option<Value>> {
    let schema = holder.get("schema").or_else(|| {
        let content = holder.get("content")?.as_object()?;
        content
            .get("application/json")
            .or_else(|| content.values().next())?
            .get("schema")
    });
    match schema {
        Some(s) => Ok(Some(resolve_ref(doc, s)?.clone())),
        None => Ok(None),
    }
}

fn success_schema(doc: &Value, op: &Value) -> Result<Success> {
    let Some(responses) = op.get("responses").and_then(Value::as_object) else {
        return Ok(Success {
            present: false,
            schema: None,
        });
    };
    let success = responses
        .iter()
        .find(|(code, _)| code.starts_with('2'))
        .map(|(_, r)| r);
    match success {
        None => Ok(Success {
            present: false,
            schema: None,
        }),
        Some(r) => {
            let r = resolve_ref(doc, r)?;
            // A dangling schema $ref is tolerated as long as the annotation
            // carries an explicit @type.
            let schema = content_schema(doc, r)
                .ok()
                .flatten()
                .or_else(|| r.get("schema").cloned());
            Ok(Success {
                present: true,
                schema,
            })
        }
    }
}
