//! File formats, synthetic corpora, reports and the command-line driver for
//! [`rationale_core`].

pub mod cli;
pub mod config;
pub mod corpus_file;
pub mod html;
pub mod model_file;
pub mod pipeline;
pub mod report;
pub mod synth;

use std::path::PathBuf;

/// Errors from reading or writing the on-disk formats.
#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: {source}")]
    Json {
        path: PathBuf,
        line: usize,
        #[source]
        source: serde_json::Error,
    },
    #[error("{path}: unsupported model format_version {version} (expected {expected})")]
    UnsupportedVersion {
        path: PathBuf,
        version: serde_json::Value,
        expected: u32,
    },
    #[error("{path}: {source}")]
    Invalid {
        path: PathBuf,
        #[source]
        source: rationale_core::Error,
    },
}

/// Scores are stored in `[0, 1]` and shown on a 0–100 scale with two decimals.
pub fn display_score(score: f64) -> String {
    format!("{:.2}", score * 100.0)
}

#[cfg(test)]
mod tests {
    #[test]
    fn display_scaling() {
        assert_eq!(super::display_score(0.3482), "34.82");
        assert_eq!(super::display_score(0.8695), "86.95");
        assert_eq!(super::display_score(1.0), "100.00");
    }
}
