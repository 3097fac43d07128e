#![allow(dead_code)]

pub mod schema;

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_gelfand"))
}

pub fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn gelfand")
}

pub fn schema_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas")
}

pub fn write_config(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

/// Validates `json` against `schemas/<name>.schema.json`, panicking with the
/// list of violations.
pub fn assert_schema(name: &str, json: &str) {
    let value: serde_json::Value = serde_json::from_str(json).expect("valid JSON");
    let validator = schema::Validator::load(&schema_dir());
    let errors = validator.validate(&format!("{name}.schema.json"), &value);
    assert!(errors.is_empty(), "{name}: {errors:#?}");
}
