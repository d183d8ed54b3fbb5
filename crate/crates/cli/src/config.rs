//! Experiment configuration: a TOML file, with every key overridable by a
//! flag of the same name.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sfperc::weights::LawSpec;
use sfperc::{BoxGeometry, Engine, ModelParams, Topology, WeightLaw};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSection {
    pub d: usize,
    pub alpha: f64,
    pub intensity: f64,
    pub weights: LawSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometrySection {
    pub side: f64,
    #[serde(default)]
    pub topology: Topology,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct GraphSection {
    #[serde(default)]
    pub engine: Engine,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cell_side: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct DegreesSection {
    /// Hill order statistic; defaults to `⌊√N⌋`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CcSection {
    pub m: f64,
    pub delta: f64,
}

impl Default for CcSection {
    fn default() -> Self {
        Self { m: 16.0, delta: 0.1 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PalmSection {
    pub replicas: usize,
    /// Side of the Palm sampling box; defaults to the geometry side.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub side: Option<f64>,
}

impl Default for PalmSection {
    fn default() -> Self {
        Self { replicas: 200, side: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    pub model: ModelSection,
    pub geometry: GeometrySection,
    #[serde(default)]
    pub graph: GraphSection,
    #[serde(default)]
    pub degrees: DegreesSection,
    #[serde(default)]
    pub cc: CcSection,
    #[serde(default)]
    pub palm: PalmSection,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            seed: 1,
            out: None,
            model: ModelSection { d: 2, alpha: 4.0, intensity: 1.0, weights: LawSpec::Pareto { tau: 2.5 } },
            geometry: GeometrySection { side: 64.0, topology: Topology::Torus },
            graph: GraphSection::default(),
            degrees: DegreesSection::default(),
            cc: CcSection::default(),
            palm: PalmSection::default(),
        }
    }
}

#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

impl From<sfperc::Error> for ConfigError {
    fn from(e: sfperc::Error) -> Self {
        ConfigError(e.to_string())
    }
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        toml::from_str(text).map_err(|e| ConfigError(e.to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config is always representable")
    }

    pub fn law(&self) -> Result<WeightLaw, ConfigError> {
        Ok(WeightLaw::try_from(self.model.weights)?)
    }

    pub fn params(&self) -> Result<ModelParams, ConfigError> {
        Ok(ModelParams::new(self.model.d, self.model.alpha, self.law()?, self.model.intensity)?)
    }

    pub fn geometry(&self) -> Result<BoxGeometry, ConfigError> {
        Ok(BoxGeometry::new(self.model.d, self.geometry.side, self.geometry.topology)?)
    }

    /// Checks every section, so that a bad config fails before any work.
    pub fn validate(&self) -> Result<(), ConfigError> {
        self.params()?;
        self.geometry()?;
        sfperc::estimators::TruncationParams::new(self.cc.m, self.cc.delta)?;
        if self.palm.replicas < 2 {
            return Err(ConfigError("palm.replicas must be at least 2".into()));
        }
        if let Some(s) = self.palm.side {
            BoxGeometry::new(self.model.d, s, self.geometry.topology)?;
        }
        if let Some(c) = self.graph.cell_side {
            if !(c > 0.0 && c.is_finite()) {
                return Err(ConfigError(format!("graph.cell_side must be positive, got {c}")));
            }
        }
        Ok(())
    }
}
