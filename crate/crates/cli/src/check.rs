//! Re-verification of an emitted document from its raw fields.

use serde_json::Value;

use crate::commands::Invocation;
use crate::document::{CheckEntry, Document};
use crate::error::CliError;
use crate::json::object;

/// First JSON pointer at which `a` and `b` differ.
pub fn first_difference(a: &Value, b: &Value) -> Option<String> {
    match (a, b) {
        (Value::Object(x), Value::Object(y)) => {
            let kx: Vec<&String> = x.keys().collect();
            let ky: Vec<&String> = y.keys().collect();
            for (k, l) in kx.iter().zip(&ky) {
                if k != l {
                    return Some(format!("/{k}"));
                }
                if let Some(p) = first_difference(&x[k.as_str()], &y[k.as_str()]) {
                    return Some(format!("/{k}{p}"));
                }
            }
            (kx.len() != ky.len()).then(|| format!("/{}", kx.len().min(ky.len())))
        }
        (Value::Array(x), Value::Array(y)) => {
            for (i, (p, q)) in x.iter().zip(y).enumerate() {
                if let Some(d) = first_difference(p, q) {
                    return Some(format!("/{i}{d}"));
                }
            }
            (x.len() != y.len()).then(|| format!("/{}", x.len().min(y.len())))
        }
        _ => (a != b).then(String::new),
    }
}

fn divergence(reason: &str, extra: Vec<(&str, Value)>) -> Value {
    let mut pairs = vec![("reason", Value::String(reason.into()))];
    pairs.extend(extra);
    object(pairs)
}

fn compare_checks(stored: &[CheckEntry], fresh: &[CheckEntry]) -> Option<Value> {
    for i in 0..stored.len().max(fresh.len()) {
        let idx = ("index", Value::from(i));
        match (stored.get(i), fresh.get(i)) {
            (Some(s), Some(f)) if s.name != f.name => {
                return Some(divergence(
                    "check_set_differs",
                    vec![idx, ("stored", Value::String(s.name.clone())), ("recomputed", Value::String(f.name.clone()))],
                ))
            }
            (Some(s), Some(f)) if s != f => {
                return Some(divergence(
                    "stored_differs",
                    vec![idx, ("check", Value::String(f.name.clone())), ("stored", s.to_json()), ("recomputed", f.to_json())],
                ))
            }
            (Some(_), Some(f)) if !f.pass => {
                return Some(divergence("check_fails", vec![idx, ("check", Value::String(f.name.clone())), ("recomputed", f.to_json())]))
            }
            (Some(_), Some(_)) => {}
            (s, f) => {
                let name = |c: Option<&CheckEntry>| c.map_or(Value::Null, |c| Value::String(c.name.clone()));
                return Some(divergence("check_set_differs", vec![idx, ("stored", name(s)), ("recomputed", name(f))]));
            }
        }
    }
    None
}

/// Rechecks a document given as text. Schema problems are errors; every
/// other discrepancy is reported in the returned document.
pub fn check_text(text: &str, file: &str) -> Result<Document, CliError> {
    let v: Value = serde_json::from_str(text).map_err(|e| CliError::Schema(format!("not JSON: {e}")))?;
    let doc = Document::from_json(&v)?;
    if doc.command == "check" {
        return Err(CliError::Schema("check reports are not themselves certificates".into()));
    }
    let inv = Invocation::from_parts(&doc.command, &doc.inputs)?;

    let fresh = inv.recheck(&doc.result);
    let mut first = match &fresh {
        Ok(f) => compare_checks(&doc.checks, f),
        Err(CliError::Schema(m)) => return Err(CliError::Schema(m.clone())),
        Err(e) => Some(divergence("recheck_failed", vec![("error", Value::String(e.to_string()))])),
    };
    let fresh = fresh.unwrap_or_default();
    let stored_match = first.is_none() || fresh.len() == doc.checks.len() && fresh == doc.checks;
    let all_pass = !fresh.is_empty() && fresh.iter().all(|c| c.pass);

    let rerun = inv.execute();
    let (result_same, doc_same) = match &rerun {
        Ok(again) => {
            if first.is_none() {
                first = first_difference(&doc.result, &again.result)
                    .map(|p| divergence("result_differs", vec![("path", Value::String(format!("/result{p}")))]));
            }
            let doc_same = again.render() == text;
            if first.is_none() && !doc_same {
                first = Some(divergence("document_bytes_differ", vec![]));
            }
            (again.result == doc.result, doc_same)
        }
        Err(e) => {
            if first.is_none() {
                first = Some(divergence("rerun_failed", vec![("error", Value::String(e.to_string()))]));
            }
            (false, false)
        }
    };
    let verified = first.is_none();
    let result = object(vec![
        ("document_command", Value::String(doc.command.clone())),
        ("verified", Value::Bool(verified)),
        ("checks_recomputed", Value::from(fresh.len())),
        ("first_divergence", first.unwrap_or(Value::Null)),
    ]);
    let checks = vec![
        CheckEntry::flag("stored_checks_match", stored_match),
        CheckEntry::flag("all_checks_pass", all_pass),
        CheckEntry::flag("result_reproducible", result_same),
        CheckEntry::flag("document_reproducible", doc_same),
    ];
    Ok(Document {
        command: "check".into(),
        inputs: object(vec![("file", Value::String(file.into()))]),
        result,
        checks,
    })
}

pub fn check_file(path: &std::path::Path) -> Result<Document, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    check_text(&text, &path.display().to_string())
}
