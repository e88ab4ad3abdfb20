//! Versioned JSON model files.
//!
//! `{"format_version": 1, "config": {..}, "vocabulary": [token, ..], "weights": [w, ..], "bias": b}`,
//! where `weights[i]` belongs to `vocabulary[i]`. Floats are written in
//! shortest round-trip form, so a reloaded model scores bit-identically.

use std::path::Path;

use rationale_core::{features::DEFAULT_MAX_FEATURES, LinearModel, TrainConfig, Vocabulary};
use serde::{Deserialize, Serialize};

use crate::FormatError;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelFile {
    format_version: u32,
    config: TrainConfig,
    vocabulary: Vec<String>,
    weights: Vec<f64>,
    bias: f64,
}

pub fn to_json(model: &LinearModel) -> String {
    let file = ModelFile {
        format_version: FORMAT_VERSION,
        config: model.config().clone(),
        vocabulary: model.vocab().tokens().to_vec(),
        weights: model.weights().to_vec(),
        bias: model.bias(),
    };
    serde_json::to_string(&file).expect("model serialization is infallible")
}

pub fn from_json(text: &str, path: &Path) -> Result<LinearModel, FormatError> {
    let json_err = |source| FormatError::Json {
        path: path.to_owned(),
        line: 1,
        source,
    };
    let value: serde_json::Value = serde_json::from_str(text).map_err(json_err)?;
    let version = value.get("format_version").cloned().unwrap_or(serde_json::Value::Null);
    if version.as_u64() != Some(FORMAT_VERSION as u64) {
        return Err(FormatError::UnsupportedVersion {
            path: path.to_owned(),
            version,
            expected: FORMAT_VERSION,
        });
    }
    let file: ModelFile = serde_json::from_value(value).map_err(json_err)?;
    let invalid = |source| FormatError::Invalid {
        path: path.to_owned(),
        source,
    };
    let cap = file.vocabulary.len().max(DEFAULT_MAX_FEATURES);
    let vocab = Vocabulary::from_tokens(file.vocabulary, cap).map_err(invalid)?;
    LinearModel::from_parts(vocab, file.weights, file.bias, file.config).map_err(invalid)
}

pub fn save(model: &LinearModel, path: &Path) -> Result<(), FormatError> {
    std::fs::write(path, to_json(model) + "\n").map_err(|source| FormatError::Io {
        path: path.to_owned(),
        source,
    })
}

pub fn load(path: &Path) -> Result<LinearModel, FormatError> {
    let text = std::fs::read_to_string(path).map_err(|source| FormatError::Io {
        path: path.to_owned(),
        source,
    })?;
    from_json(&text, path)
}
