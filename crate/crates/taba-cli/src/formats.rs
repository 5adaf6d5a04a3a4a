//! File schemas for the CLI.
//!
//! Inputs are plain JSON mirrors of the core types. A scenario file bundles
//! everything a pipeline stage might need; each subcommand reads only the
//! sections it uses, so one fixture serves the whole pipeline.

use serde::ser::SerializeMap;
use serde::{Deserialize, Serialize, Serializer};
use taba_core::simulator::SimWorld;
use taba_core::{InformationProfile, LearningCurve, ProbeRecord, TaskSet};

/// A map serialized in insertion order (task order), keyed by task id.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderedMap<V>(pub Vec<(String, V)>);

impl<V: Serialize> Serialize for OrderedMap<V> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.0.len()))?;
        for (key, value) in &self.0 {
            map.serialize_entry(key, value)?;
        }
        map.end()
    }
}

/// Bundled pipeline inputs. Every section is optional; commands report
/// which ones they are missing.
#[derive(Debug, Clone, Deserialize)]
pub struct Scenario {
    #[serde(default)]
    pub task_set: Option<TaskSet>,
    #[serde(default)]
    pub profile: Option<InformationProfile>,
    #[serde(default)]
    pub world: Option<SimWorld>,
    #[serde(default)]
    pub probe_log: Option<Vec<ProbeRecord>>,
    #[serde(default)]
    pub curves: Option<Vec<LearningCurve>>,
}

/// Output of `relatedness`: the matrix plus the derived row sums.
#[derive(Debug, Clone, Serialize)]
pub struct TransferFile {
    pub values: Vec<Vec<f64>>,
    pub informativeness: Vec<f64>,
}

/// Output of `fit-beta`.
#[derive(Debug, Clone, Serialize)]
pub struct FitFile {
    pub beta: f64,
    pub ds: f64,
    pub residual: f64,
}

/// Output of `allocate`.
#[derive(Debug, Clone, Serialize)]
pub struct AllocationFile {
    pub counts: OrderedMap<u64>,
    pub spent: u64,
    pub objective: f64,
    pub solver: String,
}

/// One strategy row of the simulation report.
#[derive(Debug, Clone, Serialize)]
pub struct ReportRow {
    pub strategy: String,
    pub solver: Option<String>,
    pub counts: OrderedMap<u64>,
    pub spent: u64,
    pub objective: f64,
    pub task_gains: OrderedMap<f64>,
    pub overall_gain: f64,
}

/// Output of `simulate`.
#[derive(Debug, Clone, Serialize)]
pub struct ReportFile {
    pub rows: Vec<ReportRow>,
}
