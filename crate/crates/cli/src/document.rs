//! The on-disk algebra document: one structure tensor per file, rationals
//! written as `"p/q"` strings.

use std::collections::BTreeMap;
use std::path::Path;

use hqds_core::linalg::Matrix3;
use hqds_core::scalar::{format_rational, parse_rational, Rational};
use hqds_core::tensor::{StructureTensor, PAIRS, PAIR_KEYS};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const FORMAT_VERSION: &str = "1";

#[derive(Debug, Error)]
pub enum DocumentError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported format_version {0:?} (expected {FORMAT_VERSION:?})")]
    Version(String),
    #[error("missing product key {0:?}")]
    MissingKey(String),
    #[error("unknown product key {0:?}")]
    UnknownKey(String),
    #[error("product {key:?} has unparsable rational {value:?}")]
    BadRational { key: String, value: String },
}

/// Record of a seeded conjugation applied to produce a document.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjugationRecord {
    pub seed: u64,
    /// Rows of the change-of-basis matrix; its columns are the new basis
    /// vectors written in the coordinates of the source document.
    pub matrix: [[String; 3]; 3],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraDocument {
    pub format_version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected_family: Option<String>,
    /// `e_i e_j` for each pair key `"ij"` with `i ≤ j`.
    pub products: BTreeMap<String, [String; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conjugation: Option<ConjugationRecord>,
}

pub fn render_matrix(m: &Matrix3<Rational>) -> [[String; 3]; 3] {
    std::array::from_fn(|r| std::array::from_fn(|c| format_rational(m.get(r, c))))
}

impl AlgebraDocument {
    pub fn from_tensor(t: &StructureTensor) -> Self {
        let products = PAIR_KEYS
            .iter()
            .zip(t.products())
            .map(|(k, v)| (k.to_string(), std::array::from_fn(|i| format_rational(&v[i]))))
            .collect();
        AlgebraDocument {
            format_version: FORMAT_VERSION.to_string(),
            name: None,
            expected_family: None,
            products,
            conjugation: None,
        }
    }

    pub fn parse(text: &str) -> Result<Self, DocumentError> {
        let doc: AlgebraDocument = serde_json::from_str(text)?;
        if doc.format_version != FORMAT_VERSION {
            return Err(DocumentError::Version(doc.format_version));
        }
        doc.tensor()?;
        Ok(doc)
    }

    pub fn load(path: &Path) -> Result<Self, DocumentError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| DocumentError::Io { path: path.display().to_string(), source })?;
        Self::parse(&text)
    }

    pub fn tensor(&self) -> Result<StructureTensor, DocumentError> {
        if let Some(k) = self.products.keys().find(|k| !PAIR_KEYS.contains(&k.as_str())) {
            return Err(DocumentError::UnknownKey(k.clone()));
        }
        let mut t = StructureTensor::zero();
        for (key, &(i, j)) in PAIR_KEYS.iter().zip(PAIRS.iter()) {
            let entry = self.products.get(*key).ok_or_else(|| DocumentError::MissingKey(key.to_string()))?;
            let mut v: [Rational; 3] = Default::default();
            for (slot, s) in v.iter_mut().zip(entry) {
                *slot = parse_rational(s)
                    .ok_or_else(|| DocumentError::BadRational { key: key.to_string(), value: s.clone() })?;
            }
            t.set(i, j, v);
        }
        Ok(t)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents always serialize")
    }
}
