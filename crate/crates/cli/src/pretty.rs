//! Human-readable tables rendered from a document's JSON.

use serde_json::Value;

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(m) if !m.is_empty() => {
            for (k, x) in m {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, x, out);
            }
        }
        Value::Array(xs) if xs.iter().any(Value::is_object) => {
            for (i, x) in xs.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), x, out);
            }
        }
        other => out.push((prefix.to_string(), scalar(other))),
    }
}

fn table(title: &str, v: &Value, s: &mut String) {
    let mut rows = Vec::new();
    flatten("", v, &mut rows);
    let w = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    s.push_str(title);
    s.push('\n');
    for (k, x) in rows {
        s.push_str(&format!("  {k:<w$}  {x}\n"));
    }
}

pub fn render(doc: &Value) -> String {
    let mut s = format!("{}\n", scalar(&doc["command"]));
    table("inputs", &doc["inputs"], &mut s);
    table("result", &doc["result"], &mut s);
    s.push_str("checks\n");
    if let Some(checks) = doc["checks"].as_array() {
        let w = checks.iter().filter_map(|c| c["name"].as_str()).map(str::len).max().unwrap_or(0);
        for c in checks {
            let mark = if c["pass"].as_bool() == Some(true) { "PASS" } else { "FAIL" };
            let details = if c["details"].is_null() { String::new() } else { c["details"].to_string() };
            s.push_str(&format!("  {mark}  {:<w$}  {details}\n", scalar(&c["name"])).trim_end().to_string());
            s.push('\n');
        }
    }
    s
}
