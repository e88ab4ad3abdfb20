//! Optional TOML run configuration. Command-line flags override file values.
//!
//! Keys use the flag names, e.g.
//!
//! ```toml
//! corpus = "data/corpus.jsonl"
//! snippet-size = [50, 100, 200]
//! weights = [0.7, 0.2, 0.1]
//! match-mode = "min"
//! ```

use std::path::{Path, PathBuf};

use rationale_core::Method;
use serde::Deserialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum MatchMode {
    Min,
    Max,
}

impl From<MatchMode> for rationale_core::MatchCriterion {
    fn from(m: MatchMode) -> Self {
        match m {
            MatchMode::Min => Self::MinHalf,
            MatchMode::Max => Self::MaxHalf,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Html,
}

/// One value or a list.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum Sizes {
    One(usize),
    Many(Vec<usize>),
}

impl Sizes {
    pub fn into_vec(self) -> Vec<usize> {
        match self {
            Sizes::One(n) => vec![n],
            Sizes::Many(v) => v,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct RunConfig {
    pub corpus: Option<PathBuf>,
    pub model: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub snippet_size: Option<Sizes>,
    pub top_k: Option<usize>,
    #[serde(default, deserialize_with = "method")]
    pub method: Option<Method>,
    pub weights: Option<[f64; 3]>,
    pub rrf_k: Option<u32>,
    pub cutoff: Option<f64>,
    pub cutoff_recall: Option<f64>,
    pub match_mode: Option<MatchMode>,
    pub folds: Option<usize>,
    pub seed: Option<u64>,
    pub keywords: Option<usize>,
    pub vocab_cap: Option<usize>,
    pub format: Option<Format>,
    pub workers: Option<usize>,
    pub max_epochs: Option<usize>,
    pub tolerance: Option<f64>,
    pub l2: Option<f64>,
    pub grid_step: Option<f64>,
    pub threshold: Option<f64>,
    pub top_m: Option<usize>,
}

fn method<'de, D: serde::Deserializer<'de>>(d: D) -> Result<Option<Method>, D::Error> {
    let s: Option<String> = Option::deserialize(d)?;
    s.map(|s| s.parse().map_err(serde::de::Error::custom)).transpose()
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Toml {
        path: PathBuf,
        #[source]
        source: toml::de::Error,
    },
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self, toml::de::Error> {
        toml::from_str(text)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_owned(),
            source,
        })?;
        Self::from_toml(&text).map_err(|source| ConfigError::Toml {
            path: path.to_owned(),
            source,
        })
    }
}
