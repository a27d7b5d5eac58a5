//! Reproducibility records and output writers. Every output file embeds the
//! full experiment configuration and the tool version; rerunning with the
//! same configuration reproduces byte-identical bodies.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentConfig {
    pub command: String,
    pub params: BTreeMap<String, String>,
}

impl ExperimentConfig {
    pub fn new(command: &str) -> ExperimentConfig {
        ExperimentConfig {
            command: command.to_string(),
            params: BTreeMap::new(),
        }
    }

    pub fn set(mut self, key: &str, value: impl ToString) -> ExperimentConfig {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    pub fn set_opt(self, key: &str, value: Option<impl ToString>) -> ExperimentConfig {
        match value {
            Some(v) => self.set(key, v),
            None => self,
        }
    }
}

/// JSON envelope around any serializable result.
#[derive(Debug, Clone, Serialize)]
pub struct Envelope<T: Serialize> {
    pub version: &'static str,
    pub config: ExperimentConfig,
    pub result: T,
}

impl<T: Serialize> Envelope<T> {
    pub fn new(config: ExperimentConfig, result: T) -> Envelope<T> {
        Envelope {
            version: TOOL_VERSION,
            config,
            result,
        }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
}

/// CSV with the uniform schema
/// `(family, n, field, seed, quantity, value, bound, satisfied)`, one row per
/// (instance, block/partition/trial). Header comments carry the config.
type CsvRow = (String, String, String, String, String, String, String, String);

pub struct CsvWriter {
    config_json: String,
    rows: Vec<CsvRow>,
}

impl CsvWriter {
    pub fn new(config: &ExperimentConfig) -> CsvWriter {
        CsvWriter {
            config_json: serde_json::to_string(config).expect("serializable"),
            rows: Vec::new(),
        }
    }

    #[allow(clippy::too_many_arguments)]
    pub fn row(
        &mut self,
        family: &str,
        n: impl ToString,
        field: &str,
        seed: impl ToString,
        quantity: &str,
        value: impl ToString,
        bound: impl ToString,
        satisfied: bool,
    ) {
        self.rows.push((
            family.to_string(),
            n.to_string(),
            field.to_string(),
            seed.to_string(),
            quantity.to_string(),
            value.to_string(),
            bound.to_string(),
            satisfied.to_string(),
        ));
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("# version={TOOL_VERSION}\n"));
        out.push_str(&format!("# config={}\n", self.config_json));
        out.push_str("family,n,field,seed,quantity,value,bound,satisfied\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                r.0, r.1, r.2, r.3, r.4, r.5, r.6, r.7
            ));
        }
        out
    }
}

pub fn write_output(path: Option<&Path>, content: &str) -> anyhow::Result<()> {
    match path {
        Some(p) => {
            if let Some(dir) = p.parent() {
                if !dir.as_os_str().is_empty() {
                    std::fs::create_dir_all(dir)?;
                }
            }
            std::fs::write(p, content)?;
        }
        None => {
            std::io::stdout().write_all(content.as_bytes())?;
            if !content.ends_with('\n') {
                println!();
            }
        }
    }
    Ok(())
}
