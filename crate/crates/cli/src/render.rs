//! Plain-text rendering of a JSON report.

use serde_json::Value;

pub fn text(report: &Value) -> String {
    let mut out = String::new();
    let command = &report["command"];
    let args: Vec<&str> = command["args"]
        .as_array()
        .map(|a| a.iter().filter_map(Value::as_str).collect())
        .unwrap_or_default();
    let status = if report["ok"].as_bool() == Some(true) { "ok" } else { "FAILED" };
    out.push_str(&format!(
        "{} {}: {status}\n",
        command["name"].as_str().unwrap_or("?"),
        args.join(" ")
    ));
    if let Some(checks) = report["checks"].as_array() {
        for c in checks {
            let mark = if c["passed"].as_bool() == Some(true) { "PASS" } else { "FAIL" };
            out.push_str(&format!("  {mark} {}", c["name"].as_str().unwrap_or("?")));
            if let Some(w) = c["witness"].as_str() {
                out.push_str(&format!(" ({w})"));
            }
            out.push('\n');
        }
    }
    if !report["result"].is_null() {
        out.push_str("result:\n");
        flatten(&report["result"], "", &mut out);
    }
    for key in ["witnesses", "warnings"] {
        if let Some(items) = report[key].as_array().filter(|a| !a.is_empty()) {
            out.push_str(&format!("{key}:\n"));
            for w in items {
                out.push_str(&format!("  - {}\n", w.as_str().unwrap_or_default()));
            }
        }
    }
    out
}

/// Pretty JSON with rows of scalars (sparse triples, label pairs) kept on one
/// line. Always ends in a newline.
pub fn json(v: &Value) -> String {
    let mut out = String::new();
    write_json(v, 0, &mut out);
    out.push('\n');
    out
}

fn write_json(v: &Value, indent: usize, out: &mut String) {
    let pad = |n: usize| " ".repeat(n);
    match v {
        Value::Array(items) if items.is_empty() => out.push_str("[]"),
        Value::Array(items) if items.iter().all(|x| !x.is_array() && !x.is_object()) => {
            let parts: Vec<String> = items.iter().map(|x| x.to_string()).collect();
            out.push_str(&format!("[{}]", parts.join(", ")));
        }
        Value::Array(items) => {
            out.push_str("[\n");
            for (i, x) in items.iter().enumerate() {
                out.push_str(&pad(indent + 2));
                write_json(x, indent + 2, out);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Object(map) => {
            out.push_str("{\n");
            for (i, (k, x)) in map.iter().enumerate() {
                out.push_str(&format!("{}{}: ", pad(indent + 2), Value::String(k.clone())));
                write_json(x, indent + 2, out);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
        other => out.push_str(&other.to_string()),
    }
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        // [label, value] pairs and other short tuples of scalars
        Value::Array(items) if items.iter().all(|x| !x.is_array() && !x.is_object()) => {
            Some(items.iter().filter_map(scalar).collect::<Vec<_>>().join(" = "))
        }
        _ => None,
    }
}

fn flatten(v: &Value, prefix: &str, out: &mut String) {
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(x, &key, out);
            }
        }
        Value::Array(items) if items.iter().any(|x| x.is_array() || x.is_object()) => {
            if items.iter().all(|x| scalar(x).is_some()) {
                let parts: Vec<String> = items.iter().filter_map(scalar).collect();
                out.push_str(&format!("  {prefix}: {}\n", parts.join(", ")));
            } else {
                for (i, x) in items.iter().enumerate() {
                    flatten(x, &format!("{prefix}[{i}]"), out);
                }
            }
        }
        Value::Array(items) => {
            let parts: Vec<String> = items.iter().filter_map(scalar).collect();
            out.push_str(&format!("  {prefix}: [{}]\n", parts.join(", ")));
        }
        other => out.push_str(&format!("  {prefix}: {}\n", scalar(other).unwrap_or_default())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn json_rows_stay_on_one_line() {
        let v = json!({"mult": [[0, 0, 0, "1"], [1, 1, 0, "-1/2"]], "basis": [], "meta": {}});
        let s = json(&v);
        assert_eq!(
            s,
            "{\n  \"mult\": [\n    [0, 0, 0, \"1\"],\n    [1, 1, 0, \"-1/2\"]\n  ],\n  \"basis\": [],\n  \"meta\": {}\n}\n"
        );
        assert_eq!(serde_json::from_str::<Value>(&s).unwrap(), v);
    }

    #[test]
    fn renders_checks_and_pairs() {
        let r = json!({
            "command": {"name": "classify-map", "args": ["m.json"]},
            "ok": false,
            "checks": [{"name": "mult", "passed": false, "witness": "g, g"}],
            "result": {"chi_f": [["1", "1"], ["g", "-1"]], "frobenius": false},
            "witnesses": ["mult: g, g"],
            "warnings": [],
        });
        let t = text(&r);
        assert!(t.starts_with("classify-map m.json: FAILED\n"));
        assert!(t.contains("  FAIL mult (g, g)\n"));
        assert!(t.contains("  chi_f: 1 = 1, g = -1\n"));
        assert!(t.contains("  frobenius: false\n"));
        assert!(!t.contains("warnings"));
    }
}
