//! Just enough JSON Schema (2020-12) for the published schema files: type,
//! enum, properties, required, additionalProperties, items, prefixItems,
//! min/maxItems, minimum, maximum, exclusiveMinimum, oneOf and `$ref` to
//! local `$defs` or sibling files.

use std::collections::HashMap;
use std::path::Path;

use serde_json::Value;

pub struct Validator {
    docs: HashMap<String, Value>,
}

const KNOWN: &[&str] = &[
    "$schema", "$id", "$defs", "$ref", "title", "description", "type", "enum", "properties",
    "required", "additionalProperties", "items", "prefixItems", "minItems", "maxItems",
    "minimum", "maximum", "exclusiveMinimum", "oneOf",
];

impl Validator {
    pub fn load(dir: &Path) -> Self {
        let mut docs = HashMap::new();
        for entry in std::fs::read_dir(dir).unwrap() {
            let path = entry.unwrap().path();
            let name = path.file_name().unwrap().to_string_lossy().into_owned();
            if name.ends_with(".schema.json") {
                let text = std::fs::read_to_string(&path).unwrap();
                docs.insert(name, serde_json::from_str(&text).unwrap());
            }
        }
        Self { docs }
    }

    pub fn names(&self) -> impl Iterator<Item = &String> {
        self.docs.keys()
    }

    pub fn validate(&self, doc: &str, value: &Value) -> Vec<String> {
        let mut errors = Vec::new();
        let root = &self.docs[doc];
        self.check(doc, root, value, "$", &mut errors);
        errors
    }

    /// Keywords the validator does not understand, so a schema cannot
    /// silently pass because of an ignored constraint.
    pub fn unknown_keywords(&self) -> Vec<String> {
        fn walk(v: &Value, path: &str, out: &mut Vec<String>, in_map: bool) {
            if let Value::Object(map) = v {
                for (k, child) in map {
                    if !in_map && !KNOWN.contains(&k.as_str()) {
                        out.push(format!("{path}/{k}"));
                    }
                    // children of these are name → schema maps
                    let map_like = matches!(k.as_str(), "properties" | "$defs");
                    walk(child, &format!("{path}/{k}"), out, map_like);
                }
            } else if let Value::Array(items) = v {
                for (i, child) in items.iter().enumerate() {
                    walk(child, &format!("{path}/{i}"), out, false);
                }
            }
        }
        let mut out = Vec::new();
        for (name, doc) in &self.docs {
            walk(doc, name, &mut out, false);
        }
        // `enum` and `required` arrays hold data, not schemas
        out.retain(|p| !p.contains("/enum/") && !p.contains("/required/"));
        out
    }

    fn resolve<'a>(&'a self, doc: &'a str, reference: &str) -> (&'a str, &'a Value) {
        let (file, pointer) = reference.split_once('#').unwrap_or((reference, ""));
        let doc_name = if file.is_empty() {
            doc
        } else {
            self.docs.get_key_value(file).expect("unknown $ref file").0.as_str()
        };
        let root = &self.docs[doc_name];
        let target = if pointer.is_empty() {
            root
        } else {
            root.pointer(pointer).expect("dangling $ref")
        };
        (doc_name, target)
    }

    fn check(&self, doc: &str, schema: &Value, value: &Value, at: &str, errors: &mut Vec<String>) {
        let Value::Object(s) = schema else {
            return;
        };
        if let Some(Value::String(r)) = s.get("$ref") {
            let (d, target) = self.resolve(doc, r);
            self.check(d, target, value, at, errors);
        }
        if let Some(t) = s.get("type") {
            let allowed: Vec<&str> = match t {
                Value::String(one) => vec![one.as_str()],
                Value::Array(many) => many.iter().filter_map(Value::as_str).collect(),
                _ => vec![],
            };
            if !allowed.iter().any(|ty| type_matches(ty, value)) {
                errors.push(format!("{at}: expected {allowed:?}, got {value}"));
                return;
            }
        }
        if let Some(Value::Array(options)) = s.get("enum") {
            if !options.contains(value) {
                errors.push(format!("{at}: {value} not in {options:?}"));
            }
        }
        if let Some(x) = value.as_f64() {
            if let Some(min) = s.get("minimum").and_then(Value::as_f64) {
                if x < min {
                    errors.push(format!("{at}: {x} < minimum {min}"));
                }
            }
            if let Some(max) = s.get("maximum").and_then(Value::as_f64) {
                if x > max {
                    errors.push(format!("{at}: {x} > maximum {max}"));
                }
            }
            if let Some(min) = s.get("exclusiveMinimum").and_then(Value::as_f64) {
                if x <= min {
                    errors.push(format!("{at}: {x} <= exclusiveMinimum {min}"));
                }
            }
        }
        if let Value::Object(obj) = value {
            let props = s.get("properties").and_then(Value::as_object);
            if let Some(Value::Array(required)) = s.get("required") {
                for key in required.iter().filter_map(Value::as_str) {
                    if !obj.contains_key(key) {
                        errors.push(format!("{at}: missing required '{key}'"));
                    }
                }
            }
            for (key, child) in obj {
                match props.and_then(|p| p.get(key)) {
                    Some(sub) => self.check(doc, sub, child, &format!("{at}.{key}"), errors),
                    None => {
                        if s.get("additionalProperties") == Some(&Value::Bool(false)) {
                            errors.push(format!("{at}: unexpected property '{key}'"));
                        }
                    }
                }
            }
        }
        if let Value::Array(items) = value {
            if let Some(min) = s.get("minItems").and_then(Value::as_u64) {
                if (items.len() as u64) < min {
                    errors.push(format!("{at}: fewer than {min} items"));
                }
            }
            if let Some(max) = s.get("maxItems").and_then(Value::as_u64) {
                if items.len() as u64 > max {
                    errors.push(format!("{at}: more than {max} items"));
                }
            }
            let prefix = s.get("prefixItems").and_then(Value::as_array);
            let skip = prefix.map_or(0, Vec::len);
            if let Some(prefix) = prefix {
                for (i, (sub, item)) in prefix.iter().zip(items).enumerate() {
                    self.check(doc, sub, item, &format!("{at}[{i}]"), errors);
                }
            }
            if let Some(sub) = s.get("items") {
                for (i, item) in items.iter().enumerate().skip(skip) {
                    self.check(doc, sub, item, &format!("{at}[{i}]"), errors);
                }
            }
        }
        if let Some(Value::Array(options)) = s.get("oneOf") {
            let matching = options
                .iter()
                .filter(|sub| {
                    let mut errs = Vec::new();
                    self.check(doc, sub, value, at, &mut errs);
                    errs.is_empty()
                })
                .count();
            if matching != 1 {
                errors.push(format!("{at}: matches {matching} oneOf branches"));
            }
        }
    }
}

fn type_matches(ty: &str, v: &Value) -> bool {
    match ty {
        "null" => v.is_null(),
        "boolean" => v.is_boolean(),
        "string" => v.is_string(),
        "array" => v.is_array(),
        "object" => v.is_object(),
        "number" => v.is_number(),
        "integer" => v.is_i64() || v.is_u64() || v.as_f64().is_some_and(|x| x.fract() == 0.0),
        _ => false,
    }
}
