//! Canonical JSON for command inputs. File references inside spec files are
//! inlined recursively and builtin descriptors are normalized, so the hash of
//! the result depends only on the mathematical content of the input.

use std::fs;
use std::path::Path;

use hopfkit::{Descriptor, Error, Result};
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

/// Keys whose string values refer to other objects.
const REF_KEYS: &[&str] = &["source", "target", "hopf", "algebra"];

pub fn canonical(reference: &str, base: &Path) -> Result<Value> {
    let path = base.join(reference);
    if path.is_file() {
        let text = fs::read_to_string(&path).map_err(|e| Error::Parse {
            location: path.display().to_string(),
            message: e.to_string(),
        })?;
        let value: Value = serde_json::from_str(&text).map_err(|e| Error::Parse {
            location: format!("{}:{}:{}", path.display(), e.line(), e.column()),
            message: e.to_string(),
        })?;
        let dir = path.parent().unwrap_or(Path::new("."));
        return inline_refs(value, dir);
    }
    if let Some(inner) = reference.trim().strip_prefix("regular(").and_then(|r| r.strip_suffix(')')) {
        return Ok(serde_json::json!({ "regular": canonical(inner, base)? }));
    }
    Ok(Value::String(reference.parse::<Descriptor>()?.to_string()))
}

fn inline_refs(value: Value, dir: &Path) -> Result<Value> {
    Ok(match value {
        Value::Object(map) => {
            let mut entries: Vec<(String, Value)> = map.into_iter().collect();
            entries.sort_by(|a, b| a.0.cmp(&b.0));
            let mut out = Map::new();
            for (k, v) in entries {
                let v = match v {
                    Value::String(s) if REF_KEYS.contains(&k.as_str()) => canonical(&s, dir)?,
                    other => inline_refs(other, dir)?,
                };
                out.insert(k, v);
            }
            Value::Object(out)
        }
        Value::Array(items) => Value::Array(items.into_iter().map(|v| inline_refs(v, dir)).collect::<Result<_>>()?),
        other => other,
    })
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn hash_value(v: &Value) -> String {
    sha256_hex(serde_json::to_string(v).expect("json").as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn descriptors_are_normalized() {
        let a = canonical("uqsl2( 3 )", Path::new(".")).unwrap();
        let b = canonical("uqsl2(3)", Path::new(".")).unwrap();
        assert_eq!(a, b);
        // neither a file nor a descriptor
        assert!(canonical("missing.json", Path::new(".")).is_err());
    }

    #[test]
    fn key_order_does_not_matter() {
        let dir = tempfile::tempdir().unwrap();
        fs::write(dir.path().join("a.json"), r#"{"b": 1, "a": {"y": 2, "x": 3}}"#).unwrap();
        fs::write(dir.path().join("b.json"), r#"{"a": {"x": 3, "y": 2}, "b": 1}"#).unwrap();
        let a = canonical("a.json", dir.path()).unwrap();
        let b = canonical("b.json", dir.path()).unwrap();
        assert_eq!(hash_value(&a), hash_value(&b));
    }

    #[test]
    fn nested_files_are_inlined() {
        let dir = tempfile::tempdir().unwrap();
        fs::write(dir.path().join("h.json"), r#"{"dim": 1}"#).unwrap();
        fs::write(dir.path().join("m.json"), r#"{"source": "h.json", "target": "trivial"}"#).unwrap();
        let v = canonical("m.json", dir.path()).unwrap();
        assert_eq!(v["source"]["dim"], 1);
        assert_eq!(v["target"], "trivial");
    }
}
