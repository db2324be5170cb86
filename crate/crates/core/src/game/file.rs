//! JSON instance files.
//!
//! ```json
//! { "n": 2, "m": 2, "entries": [[0, 0.25], [-0.25, 0]],
//!   "noise": {"kind": "gaussian", "sigma": 1.0}, "tags": [] }
//! ```
//!
//! Entries keep their decimal text, so a file read and re-emitted reproduces
//! the numbers exactly as written.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Number;

use super::{GameError, GameMatrix, NoiseModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NoiseKind {
    Gaussian,
    Bernoulli,
    Zero,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    pub kind: NoiseKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<f64>,
}

impl NoiseSpec {
    pub fn to_model(&self) -> Result<NoiseModel, GameError> {
        Ok(match self.kind {
            NoiseKind::Gaussian => NoiseModel::Gaussian {
                sigma: self.sigma.unwrap_or(1.0),
            },
            NoiseKind::Bernoulli | NoiseKind::Zero if self.sigma.is_some() => {
                return Err(GameError::InvalidFile(format!(
                    "sigma is only meaningful for gaussian noise, got kind {:?}",
                    self.kind
                )));
            }
            NoiseKind::Bernoulli => NoiseModel::Bernoulli,
            NoiseKind::Zero => NoiseModel::Zero,
        })
    }
}

impl From<NoiseModel> for NoiseSpec {
    fn from(noise: NoiseModel) -> Self {
        match noise {
            NoiseModel::Gaussian { sigma } => NoiseSpec {
                kind: NoiseKind::Gaussian,
                sigma: Some(sigma),
            },
            NoiseModel::Bernoulli => NoiseSpec {
                kind: NoiseKind::Bernoulli,
                sigma: None,
            },
            NoiseModel::Zero => NoiseSpec {
                kind: NoiseKind::Zero,
                sigma: None,
            },
        }
    }
}

/// On-disk form of a [`GameMatrix`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub n: usize,
    pub m: usize,
    pub entries: Vec<Vec<Number>>,
    pub noise: NoiseSpec,
    #[serde(default)]
    pub tags: Vec<String>,
}

impl InstanceFile {
    pub fn from_json(text: &str) -> Result<Self, GameError> {
        serde_json::from_str(text).map_err(|e| GameError::InvalidFile(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance files always serialize")
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self, GameError> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| GameError::Io {
            path: path.display().to_string(),
            source: e,
        })?;
        Self::from_json(&text)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<(), GameError> {
        let path = path.as_ref();
        fs::write(path, self.to_json() + "\n").map_err(|e| GameError::Io {
            path: path.display().to_string(),
            source: e,
        })
    }

    pub fn to_matrix(&self) -> Result<GameMatrix, GameError> {
        if self.entries.len() != self.n || self.entries.iter().any(|r| r.len() != self.m) {
            return Err(GameError::InvalidFile(format!(
                "declared shape {}x{} does not match the entries array",
                self.n, self.m
            )));
        }
        let values = self
            .entries
            .iter()
            .flatten()
            .map(|x| {
                x.as_f64().ok_or_else(|| {
                    GameError::InvalidFile(format!("entry {x} is not a finite number"))
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(
            GameMatrix::from_row_major(self.n, self.m, values, self.noise.to_model()?)?
                .with_tags(self.tags.iter().cloned()),
        )
    }
}

impl From<&GameMatrix> for InstanceFile {
    fn from(matrix: &GameMatrix) -> Self {
        let entries = (0..matrix.rows())
            .map(|i| {
                matrix
                    .row(i)
                    .iter()
                    .map(|&v| Number::from_f64(v).expect("entries are finite"))
                    .collect()
            })
            .collect();
        Self {
            n: matrix.rows(),
            m: matrix.cols(),
            entries,
            noise: matrix.noise().into(),
            tags: matrix.tags().to_vec(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const RPS: &str = r#"{"n": 3, "m": 3,
        "entries": [[0, 1, -1], [-1, 0, 1], [1, -1, 0.10]],
        "noise": {"kind": "zero"}, "tags": ["rps"]}"#;

    #[test]
    fn decimal_text_survives_a_round_trip() {
        let file = InstanceFile::from_json(RPS).unwrap();
        let again = InstanceFile::from_json(&file.to_json()).unwrap();
        assert_eq!(file, again);
        assert!(file.to_json().contains("0.10"));
        let m = file.to_matrix().unwrap();
        assert_eq!(m.get(2, 2), 0.1);
        assert_eq!(m.tags(), ["rps"]);
    }

    #[test]
    fn shape_mismatch_is_rejected() {
        let bad = r#"{"n": 2, "m": 2, "entries": [[0, 1]], "noise": {"kind": "zero"}}"#;
        let file = InstanceFile::from_json(bad).unwrap();
        assert!(matches!(file.to_matrix(), Err(GameError::InvalidFile(_))));
    }

    #[test]
    fn gaussian_sigma_defaults_to_one() {
        let text = r#"{"n": 1, "m": 1, "entries": [[0.5]], "noise": {"kind": "gaussian"}}"#;
        let m = InstanceFile::from_json(text).unwrap().to_matrix().unwrap();
        assert_eq!(m.noise(), NoiseModel::Gaussian { sigma: 1.0 });
    }

    #[test]
    fn bernoulli_rejects_negative_entries() {
        let text = r#"{"n": 1, "m": 2, "entries": [[0.5, -0.1]], "noise": {"kind": "bernoulli"}}"#;
        let file = InstanceFile::from_json(text).unwrap();
        assert!(matches!(
            file.to_matrix(),
            Err(GameError::EntryOutOfRange { .. })
        ));
    }
}
