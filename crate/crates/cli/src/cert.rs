//! JSON form of an embedding certificate, and its checks.

use k3lat::cones::{build_model, Flavor};
use k3lat::embeddings::{Certificate, Checks, ExtraCondition, ReflectionTrace, Source, TraceStep};
use k3lat::lattice::Rank2Lattice;
use k3lat::{DivisorClass, Embedding, GramMatrix, Matrix};
use serde_json::{Map, Value};

use crate::document::CheckEntry;
use crate::error::CliError;
use crate::json::*;

pub fn source_json(s: &Source) -> Value {
    match s {
        Source::Rank2(l) => object(vec![("kind", "rank2".into()), ("d", int(&l.d)), ("a", int(&l.a)), ("b", int(&l.b))]),
        Source::Rank4(w) => object(vec![("kind", "rank4".into()), ("which", Value::from(*w))]),
        Source::Explicit(m) => object(vec![("kind", "explicit".into()), ("gram", matrix_rows(m))]),
    }
}

pub fn source_from(v: &Value) -> Result<Source, CliError> {
    match as_str(field(v, "kind")?)? {
        "rank2" => Ok(Source::Rank2(Rank2Lattice {
            d: as_int(field(v, "d")?)?,
            a: as_int(field(v, "a")?)?,
            b: as_int(field(v, "b")?)?,
        })),
        "rank4" => {
            let w = as_usize(field(v, "which")?)?;
            u8::try_from(w).map(Source::Rank4).map_err(|_| CliError::Schema(format!("which = {w}")))
        }
        "explicit" => Ok(Source::Explicit(Matrix::from_rows(as_int_lists(field(v, "gram")?)?)?)),
        other => Err(CliError::Schema(format!("unknown source kind {other:?}"))),
    }
}

pub fn step_json(s: &TraceStep) -> Value {
    object(vec![("root", class(&s.root)), ("pairing", int(&s.pairing)), ("degree", int(&s.degree))])
}

pub fn step_from(v: &Value, basis: k3lat::lattice::BasisId) -> Result<TraceStep, CliError> {
    Ok(TraceStep {
        root: DivisorClass::new(basis, as_ints(field(v, "root")?)?),
        pairing: as_int(field(v, "pairing")?)?,
        degree: as_int(field(v, "degree")?)?,
    })
}

fn trace_json(t: &ReflectionTrace) -> Value {
    object(vec![
        ("negated", Value::Bool(t.negated)),
        ("initial_degree", t.initial_degree.as_ref().map_or(Value::Null, int)),
        ("steps", Value::Array(t.steps.iter().map(step_json).collect())),
    ])
}

fn notes_json(notes: &[(String, String)]) -> Value {
    let mut m = Map::new();
    for (k, v) in notes {
        m.insert(k.clone(), Value::String(v.clone()));
    }
    Value::Object(m)
}

pub fn certificate_json(c: &Certificate) -> Value {
    object(vec![
        ("source", source_json(&c.source)),
        ("target", object(vec![("flavor", Value::String(c.flavor.to_string())), ("r", Value::from(c.r))])),
        ("initial_columns", matrix_columns(&c.initial.matrix)),
        ("trace", trace_json(&c.trace)),
        ("columns", matrix_columns(&c.embedding.matrix)),
        ("L", c.l_coords.as_deref().map_or(Value::Null, ints)),
        ("image_of_L", c.image_of_l.as_ref().map_or(Value::Null, class)),
        (
            "extra_conditions",
            Value::Array(c.extra_conditions.iter().map(|e| Value::String(e.name().into())).collect()),
        ),
        ("notes", notes_json(&c.notes)),
    ])
}

fn embedding_from(source: &GramMatrix, target: &GramMatrix, cols: &Value) -> Result<Embedding, CliError> {
    let cols = as_int_lists(cols)?;
    Ok(Embedding::new(source.clone(), target.clone(), Matrix::from_columns(&cols)?)?)
}

/// Rebuilds a certificate from its raw fields; the checks are recomputed.
pub fn certificate_from(v: &Value) -> Result<Certificate, CliError> {
    let source = source_from(field(v, "source")?)?;
    let target = field(v, "target")?;
    let flavor: Flavor = as_str(field(target, "flavor")?)?.parse()?;
    let model = build_model(flavor, as_usize(field(target, "r")?)?)?;
    let sg = source.gram()?;
    let initial = embedding_from(&sg, model.gram(), field(v, "initial_columns")?)?;
    let embedding = embedding_from(&sg, model.gram(), field(v, "columns")?)?;
    let t = field(v, "trace")?;
    let initial_degree = field(t, "initial_degree")?;
    let trace = ReflectionTrace {
        negated: as_bool(field(t, "negated")?)?,
        initial_degree: if initial_degree.is_null() { None } else { Some(as_int(initial_degree)?) },
        steps: as_array(field(t, "steps")?)?.iter().map(|s| step_from(s, model.basis())).collect::<Result<_, _>>()?,
    };
    let l_coords = as_opt_ints(field(v, "L")?)?;
    let image_of_l = as_opt_ints(field(v, "image_of_L")?)?.map(|c| DivisorClass::new(model.basis(), c));
    let extra_conditions = as_array(field(v, "extra_conditions")?)?
        .iter()
        .map(|e| {
            let name = as_str(e)?;
            ExtraCondition::from_name(name).ok_or_else(|| CliError::Schema(format!("unknown extra condition {name:?}")))
        })
        .collect::<Result<_, _>>()?;
    let notes = field(v, "notes")?
        .as_object()
        .ok_or_else(|| CliError::Schema("notes must be an object".into()))?
        .iter()
        .map(|(k, v)| Ok((k.clone(), as_str(v)?.to_string())))
        .collect::<Result<_, CliError>>()?;
    Ok(Certificate::from_raw(source, &model, initial, trace, embedding, l_coords, image_of_l, extra_conditions, notes)?)
}

pub fn checks_json(c: &Checks, steps: usize) -> Vec<CheckEntry> {
    let mut out = vec![
        CheckEntry::flag("gram_preserved", c.gram_preserved),
        CheckEntry::new(
            "primitive",
            c.primitive.primitive,
            object(vec![("invariant_factors", ints(&c.primitive.invariant_factors))]),
        ),
        CheckEntry::new("trace_replays", c.trace_replays, object(vec![("steps", Value::from(steps))])),
        CheckEntry::flag("image_consistent", c.image_consistent),
    ];
    if let Some(n) = &c.nef {
        out.push(CheckEntry::new(
            "nef",
            n.nef,
            object(vec![
                ("min_pairing", n.min_pairing.as_ref().map_or(Value::Null, int)),
                ("failing", n.failing.as_ref().map_or(Value::Null, class)),
            ]),
        ));
    }
    if let Some(b) = &c.big {
        out.push(CheckEntry::new("big", b.big, object(vec![("square", int(&b.square)), ("degree", int(&b.degree))])));
    }
    for e in &c.extra {
        out.push(CheckEntry::new(e.condition.name(), e.pass, object(vec![("value", int(&e.value))])));
    }
    out
}

/// Checks of a certificate stored as JSON, recomputed from its raw fields.
pub fn recheck_certificate(v: &Value) -> Result<(Certificate, Vec<CheckEntry>), CliError> {
    let c = certificate_from(v)?;
    let checks = checks_json(&c.checks, c.trace.len());
    Ok((c, checks))
}
