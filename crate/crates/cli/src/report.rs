use std::path::Path;

use anyhow::{Context, Result};
use serde_json::{Map, Value};

pub const SCHEMA: u64 = 1;

/// Integers go out as decimal strings.
pub fn int(v: impl ToString) -> Value {
    Value::String(v.to_string())
}

/// Object with the schema field set.
pub fn object(fields: impl IntoIterator<Item = (&'static str, Value)>) -> Value {
    let mut map = Map::new();
    map.insert("schema".into(), Value::from(SCHEMA));
    for (k, v) in fields {
        map.insert(k.into(), v);
    }
    Value::Object(map)
}

pub fn write_json(path: &Path, value: &Value) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

pub fn emit(report: Option<&Path>, value: &Value) -> Result<()> {
    match report {
        Some(path) => write_json(path, value),
        None => Ok(()),
    }
}
