//! Batch front-end binding the exact-algebra toolkit into reproducible
//! experiments with machine-readable outputs.

pub mod config;
pub mod pipelines;

pub use config::{CsvWriter, Envelope, ExperimentConfig, OutputFormat};

/// Exhaustive-enumeration limit, overridable with `IPSLAB_MAX_VARS` or the
/// `--guard-vars` flag.
pub fn exhaustive_limit(flag: Option<usize>) -> usize {
    if let Some(v) = flag {
        return v;
    }
    std::env::var("IPSLAB_MAX_VARS")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(ipslab_core::hypercube::DEFAULT_EXHAUSTIVE_LIMIT)
}
