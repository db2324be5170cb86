use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::HarnessError;
use crate::baselines::{
    run_exp3ix_selfplay, run_lucb_g, run_tsallis_inf_selfplay, run_uniform, LUCB_DELTA,
};
use crate::game::{GameMatrix, InstanceFile, SamplingOracle};
use crate::instances::{make_a_hard, make_planted_strict, make_random_strict, AHardParams};
use crate::midsearch::find_psne_heuristic;
use crate::run::AlgorithmRun;
use crate::AlgorithmError;

pub const DEFAULT_CHECKPOINTS: usize = 20;

/// A benchmark experiment, usually read from JSON:
///
/// ```json
/// {
///   "instance": {"a_hard": {"d": 32, "delta_min": 0.05, "beta": 0.1}},
///   "algorithms": [{"name": "midsearch"}, {"name": "lucb-g", "delta": 0.1}],
///   "budget": {"h1_multiple": 50},
///   "trials": 300,
///   "checkpoints": 20,
///   "base_seed": 0,
///   "output": {"csv": "out/figure1.csv", "json": "out/figure1.json", "svg": "out/figure1.svg"}
/// }
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub instance: InstanceSpec,
    pub algorithms: Vec<AlgorithmSpec>,
    pub budget: BudgetSpec,
    pub trials: u64,
    #[serde(default = "default_checkpoints")]
    pub checkpoints: usize,
    #[serde(default)]
    pub base_seed: u64,
    #[serde(default)]
    pub output: OutputSpec,
}

fn default_checkpoints() -> usize {
    DEFAULT_CHECKPOINTS
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum InstanceSpec {
    AHard(AHardParams),
    RandomStrict {
        n: usize,
        m: usize,
        seed: u64,
    },
    PlantedStrict {
        n: usize,
        m: usize,
        seed: u64,
    },
    /// Path to an instance JSON file.
    File(PathBuf),
    Inline(InstanceFile),
}

impl InstanceSpec {
    pub fn build(&self) -> Result<GameMatrix, HarnessError> {
        Ok(match self {
            InstanceSpec::AHard(p) => make_a_hard(*p)?,
            InstanceSpec::RandomStrict { n, m, seed } => make_random_strict(*n, *m, *seed)?,
            InstanceSpec::PlantedStrict { n, m, seed } => make_planted_strict(*n, *m, *seed)?,
            InstanceSpec::File(path) => InstanceFile::read(path)?.to_matrix()?,
            InstanceSpec::Inline(file) => file.to_matrix()?,
        })
    }
}

/// Fixed-budget identifiers the harness can run, written in JSON as
/// `{"name": "lucb-g", "delta": 0.1}`. Only LUCB-G takes a parameter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawAlgorithm", into = "RawAlgorithm")]
pub enum AlgorithmSpec {
    Midsearch,
    Exp3ix,
    Tsallis,
    LucbG { delta: f64 },
    Uniform,
}

// A plain struct rather than a tagged enum: serde buffers tagged enums, and
// buffered numbers do not deserialize under `arbitrary_precision`.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAlgorithm {
    name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    delta: Option<f64>,
}

impl TryFrom<RawAlgorithm> for AlgorithmSpec {
    type Error = String;

    fn try_from(raw: RawAlgorithm) -> Result<Self, String> {
        let spec = match raw.name.as_str() {
            "midsearch" => AlgorithmSpec::Midsearch,
            "exp3ix" => AlgorithmSpec::Exp3ix,
            "tsallis" => AlgorithmSpec::Tsallis,
            "lucb-g" => AlgorithmSpec::LucbG {
                delta: raw.delta.unwrap_or(LUCB_DELTA),
            },
            "uniform" => AlgorithmSpec::Uniform,
            other => {
                return Err(format!(
                    "unknown algorithm {other:?}; expected one of midsearch, exp3ix, tsallis, lucb-g, uniform"
                ))
            }
        };
        if raw.delta.is_some() && !matches!(spec, AlgorithmSpec::LucbG { .. }) {
            return Err(format!("algorithm {} takes no delta", raw.name));
        }
        Ok(spec)
    }
}

impl From<AlgorithmSpec> for RawAlgorithm {
    fn from(spec: AlgorithmSpec) -> Self {
        let delta = match spec {
            AlgorithmSpec::LucbG { delta } => Some(delta),
            _ => None,
        };
        RawAlgorithm {
            name: spec.name().to_string(),
            delta,
        }
    }
}

impl AlgorithmSpec {
    pub fn name(&self) -> &'static str {
        match self {
            AlgorithmSpec::Midsearch => "midsearch",
            AlgorithmSpec::Exp3ix => "exp3ix",
            AlgorithmSpec::Tsallis => "tsallis",
            AlgorithmSpec::LucbG { .. } => "lucb-g",
            AlgorithmSpec::Uniform => "uniform",
        }
    }

    /// Runs the identifier for `budget` samples, snapshotting its guess on `grid`.
    pub fn run(
        &self,
        oracle: &mut SamplingOracle,
        budget: u64,
        grid: &[u64],
    ) -> Result<AlgorithmRun, AlgorithmError> {
        match self {
            AlgorithmSpec::Midsearch => find_psne_heuristic(oracle, budget, grid).map(|o| o.run),
            AlgorithmSpec::Exp3ix => run_exp3ix_selfplay(oracle, budget, grid),
            AlgorithmSpec::Tsallis => run_tsallis_inf_selfplay(oracle, budget, grid),
            AlgorithmSpec::LucbG { delta } => run_lucb_g(oracle, budget, *delta, grid),
            AlgorithmSpec::Uniform => run_uniform(oracle, budget, grid),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum BudgetSpec {
    /// `ceil(x * H1)` samples, with `H1` the Condorcet hardness for dueling
    /// instances. A product within a relative `1e-9` of an integer is taken
    /// as that integer.
    H1Multiple(f64),
    Samples(u64),
}

impl BudgetSpec {
    /// Resolves the budget against the instance hardness, if any.
    pub fn resolve(&self, h1: Option<f64>) -> Result<u64, HarnessError> {
        match *self {
            BudgetSpec::Samples(t) => Ok(t),
            BudgetSpec::H1Multiple(x) => {
                let h1 = h1.ok_or_else(|| {
                    HarnessError::InvalidConfig(
                        "an h1_multiple budget needs an instance with a strict equilibrium".into(),
                    )
                })?;
                if !(x.is_finite() && x >= 0.0) {
                    return Err(HarnessError::InvalidConfig(format!(
                        "h1_multiple must be a non-negative number, got {x}"
                    )));
                }
                let t = x * h1;
                let nearest = t.round();
                let t = if (t - nearest).abs() <= 1e-9 * nearest.max(1.0) {
                    nearest
                } else {
                    t.ceil()
                };
                if t >= u64::MAX as f64 {
                    return Err(HarnessError::InvalidConfig(format!(
                        "budget {t} is too large"
                    )));
                }
                Ok(t as u64)
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub csv: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub json: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub svg: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, HarnessError> {
        let config: Self =
            serde_json::from_str(text).map_err(|e| HarnessError::InvalidConfig(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self, HarnessError> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.trials == 0 {
            return Err(HarnessError::InvalidConfig(
                "trials must be at least 1".into(),
            ));
        }
        if self.checkpoints == 0 {
            return Err(HarnessError::InvalidConfig(
                "checkpoints must be at least 1".into(),
            ));
        }
        if self.algorithms.is_empty() {
            return Err(HarnessError::InvalidConfig("no algorithms listed".into()));
        }
        for (k, a) in self.algorithms.iter().enumerate() {
            if self.algorithms[..k].iter().any(|b| b.name() == a.name()) {
                return Err(HarnessError::InvalidConfig(format!(
                    "algorithm {} is listed twice",
                    a.name()
                )));
            }
        }
        Ok(())
    }
}
