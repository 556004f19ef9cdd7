//! Box-world spec files.
//!
//! Two formats are accepted. JSON:
//!
//! ```text
//! {"left": {"inputs": [2, 2], "labels": [["up", "down"], ["l", "r"]]},
//!  "right": {"inputs": [2, 2]}}
//! ```
//!
//! and a line-oriented `key = value` form where each value is JSON:
//!
//! ```text
//! # the CHSH scenario
//! left.inputs = [2, 2]
//! right.inputs = [2, 2]
//! ```

use std::collections::BTreeMap;
use std::path::Path;

use serde_json::{Map, Value};

use crate::box_world::{BoxSpec, BoxWorld};
use crate::error::{Error, Result};

pub fn parse_spec(path: &Path) -> Result<BoxWorld> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Spec {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_spec_str(&text)
}

pub fn parse_spec_str(text: &str) -> Result<BoxWorld> {
    if text.trim_start().starts_with('{') {
        let root: Value = serde_json::from_str(text).map_err(|e| Error::Spec {
            path: format!("line {}", e.line()),
            message: format!("JSON syntax error: {e}"),
        })?;
        world_from_value(&root, &|field| field.to_string())
    } else {
        let (root, lines) = key_value_document(text)?;
        let locate = |field: &str| {
            let key = field.split('[').next().unwrap_or(field);
            match lines
                .get(key)
                .or_else(|| lines.get(key.split('.').next().unwrap_or(key)))
            {
                Some(n) => format!("line {n}: {field}"),
                None => field.to_string(),
            }
        };
        world_from_value(&root, &locate)
    }
}

/// Folds `side.field = json` lines into the JSON shape, remembering where
/// each key was defined.
fn key_value_document(text: &str) -> Result<(Value, BTreeMap<String, usize>)> {
    let mut root = Map::new();
    let mut lines = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let n = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |message: String| Error::Spec {
            path: format!("line {n}"),
            message,
        };
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| err("expected `key = value`".into()))?;
        let key = key.trim();
        let (side, field) = key
            .split_once('.')
            .ok_or_else(|| err(format!("key `{key}` must look like `left.inputs`")))?;
        let value: Value = serde_json::from_str(value.trim())
            .map_err(|e| err(format!("value of `{key}` is not valid JSON: {e}")))?;
        let entry = root
            .entry(side.to_string())
            .or_insert_with(|| Value::Object(Map::new()));
        let obj = entry.as_object_mut().expect("sides are always objects");
        if obj.insert(field.to_string(), value).is_some() {
            return Err(err(format!("`{key}` is set twice")));
        }
        lines.insert(key.to_string(), n);
        lines.entry(side.to_string()).or_insert(n);
    }
    Ok((Value::Object(root), lines))
}

fn world_from_value(root: &Value, locate: &dyn Fn(&str) -> String) -> Result<BoxWorld> {
    let err = |field: &str, message: &str| Error::Spec {
        path: locate(field),
        message: message.to_string(),
    };
    let obj = root
        .as_object()
        .ok_or_else(|| err("spec", "must be an object with fields `left` and `right`"))?;
    if let Some(k) = obj.keys().find(|k| *k != "left" && *k != "right") {
        return Err(err(k, "unknown field; expected `left` or `right`"));
    }
    let left = side(obj, "left", locate)?;
    let right = side(obj, "right", locate)?;
    BoxWorld::new(left, right)
}

fn side(root: &Map<String, Value>, name: &str, locate: &dyn Fn(&str) -> String) -> Result<BoxSpec> {
    let err = |field: String, message: &str| Error::Spec {
        path: locate(&field),
        message: message.to_string(),
    };
    let obj = root
        .get(name)
        .ok_or_else(|| err(name.to_string(), "missing field"))?
        .as_object()
        .ok_or_else(|| err(name.to_string(), "must be an object"))?;
    if let Some(k) = obj.keys().find(|k| *k != "inputs" && *k != "labels") {
        return Err(err(
            format!("{name}.{k}"),
            "unknown field; expected `inputs` or `labels`",
        ));
    }
    let inputs = obj
        .get("inputs")
        .ok_or_else(|| err(format!("{name}.inputs"), "missing field"))?
        .as_array()
        .ok_or_else(|| {
            err(
                format!("{name}.inputs"),
                "must be an array of outcome counts",
            )
        })?;
    if inputs.is_empty() {
        return Err(err(
            format!("{name}.inputs"),
            "a box needs at least one input",
        ));
    }
    let mut sizes = Vec::with_capacity(inputs.len());
    for (i, v) in inputs.iter().enumerate() {
        let field = format!("{name}.inputs[{i}]");
        let k = v
            .as_u64()
            .ok_or_else(|| err(field.clone(), "outcome count must be a positive integer"))?;
        if k == 0 {
            return Err(err(field, "outcome count must be >= 1"));
        }
        sizes.push(usize::try_from(k).map_err(|_| err(field, "outcome count is too large"))?);
    }
    let spec = BoxSpec::new(sizes)?;
    let Some(labels) = obj.get("labels") else {
        return Ok(spec);
    };
    let field = format!("{name}.labels");
    let rows = labels
        .as_array()
        .ok_or_else(|| err(field.clone(), "must be an array of label arrays"))?;
    let mut parsed = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let field = format!("{name}.labels[{i}]");
        let row = row
            .as_array()
            .ok_or_else(|| err(field.clone(), "must be an array of strings"))?;
        parsed.push(
            row.iter()
                .map(|s| {
                    s.as_str()
                        .map(str::to_string)
                        .ok_or_else(|| err(field.clone(), "labels must be strings"))
                })
                .collect::<Result<Vec<_>>>()?,
        );
    }
    spec.with_labels(parsed)
        .map_err(|e| err(field, &e.to_string()))
}
