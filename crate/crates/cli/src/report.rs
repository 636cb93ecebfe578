//! Plain-text rendering of JSON reports.

use serde_json::Value;

pub fn render_text(report: &Value) -> String {
    let mut out = String::new();
    render(report, 0, &mut out);
    out
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("none".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) if !s.contains('\n') => Some(s.clone()),
        Value::Array(items) => items
            .iter()
            .map(scalar)
            .collect::<Option<Vec<_>>>()
            .filter(|_| items.iter().all(|i| !i.is_array() && !i.is_object()))
            .map(|parts| format!("[{}]", parts.join(", "))),
        _ => None,
    }
}

fn render(value: &Value, indent: usize, out: &mut String) {
    let pad = " ".repeat(indent);
    match value {
        Value::Object(map) => {
            for (key, v) in map {
                match (scalar(v), v) {
                    (Some(s), _) => out.push_str(&format!("{pad}{key}: {s}\n")),
                    (None, Value::String(s)) => {
                        out.push_str(&format!("{pad}{key}: |\n"));
                        for line in s.lines() {
                            out.push_str(&format!("{pad}  {line}\n"));
                        }
                    }
                    (None, _) => {
                        out.push_str(&format!("{pad}{key}:\n"));
                        render(v, indent + 2, out);
                    }
                }
            }
        }
        Value::Array(items) => {
            for item in items {
                match scalar(item) {
                    Some(s) => out.push_str(&format!("{pad}- {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}-\n"));
                        render(item, indent + 2, out);
                    }
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar(other).unwrap_or_default())),
    }
}
