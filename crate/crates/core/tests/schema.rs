use std::path::PathBuf;

use popsrep::cli::{config_schema, ExperimentConfig};

fn schema_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("config.schema.json")
}

/// Set `POPSREP_UPDATE_SCHEMA=1` to regenerate the committed schema.
#[test]
fn committed_schema_is_current() {
    let generated = format!("{}\n", serde_json::to_string_pretty(&config_schema()).unwrap());
    if std::env::var_os("POPSREP_UPDATE_SCHEMA").is_some() {
        std::fs::write(schema_path(), &generated).unwrap();
    }
    let committed = std::fs::read_to_string(schema_path()).unwrap();
    assert_eq!(committed, generated, "config.schema.json is stale");
}

#[test]
fn every_fixture_parses() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        ExperimentConfig::load(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    }
}
