//! JSON schemas for the catalog, transformation specs and reports.

use serde_json::Value;

pub const CATALOG: &str = include_str!("../../../docs/catalog.schema.json");
pub const SPEC: &str = include_str!("../../../docs/spec.schema.json");
pub const REPORT: &str = include_str!("../../../docs/report.schema.json");

/// Validates `doc` against `schema`, returning every violation.
pub fn validate(schema: &str, doc: &Value) -> Result<(), Vec<String>> {
    let schema: Value = serde_json::from_str(schema).expect("bundled schema is JSON");
    let compiled = jsonschema::JSONSchema::compile(&schema).expect("bundled schema compiles");
    let result = compiled.validate(doc);
    result.map_err(|errs| {
        errs.map(|e| format!("{} at {}", e, e.instance_path))
            .collect()
    })
}
