//! Machine-readable estimator records.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::Value;

/// `{operation, params, seeds, value, stderr?, runtime_ms}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimatorRecord {
    pub operation: String,
    pub params: Value,
    pub seeds: BTreeMap<String, u64>,
    pub value: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stderr: Option<f64>,
    /// Set when the estimator ran outside the regime it is meant for.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
    pub runtime_ms: f64,
}

impl EstimatorRecord {
    /// Runs `f`, timing it, and records its value and optional standard error.
    pub fn timed<T: Serialize, E>(
        operation: &str,
        params: Value,
        seeds: &[(&str, u64)],
        f: impl FnOnce() -> Result<(T, Option<f64>), E>,
    ) -> Result<Self, E> {
        let start = Instant::now();
        let (value, stderr) = f()?;
        let runtime_ms = start.elapsed().as_secs_f64() * 1e3;
        Ok(Self {
            operation: operation.to_string(),
            params,
            seeds: seeds.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            value: serde_json::to_value(value).unwrap_or(Value::Null),
            stderr,
            warning: None,
            runtime_ms,
        })
    }

    pub fn with_warning(mut self, warning: Option<String>) -> Self {
        self.warning = warning;
        self
    }

    /// Copy with the runtime zeroed, for comparing reruns.
    pub fn without_runtime(&self) -> Self {
        Self { runtime_ms: 0.0, ..self.clone() }
    }
}
