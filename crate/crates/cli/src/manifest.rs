//! Run manifests: every command writes one next to its CSV outputs so a
//! run can be reproduced from its parameters alone.

use std::path::Path;

use serde::{Deserialize, Serialize};

/// Parameters of a run; unused fields stay absent from the JSON.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Parameters {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub function: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub derivative_order: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid_points: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window_pad: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_min: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_max: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_set: Option<Vec<u32>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ratios: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub suite: Option<String>,
}

/// Headline numbers of a run, recorded alongside the parameters.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Results {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub condition: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub condition_second: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual_second: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sup_error: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_marked_error: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub marked_to_sup_ratio: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inside_hull_sup: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub outside_hull_sup: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub merge_residual_norm: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: Parameters,
    pub outputs: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub results: Option<Results>,
    pub wall_time_seconds: f64,
    pub version: String,
}

impl RunManifest {
    pub fn new(command: &str, parameters: Parameters) -> Self {
        RunManifest {
            command: command.to_owned(),
            parameters,
            outputs: Vec::new(),
            results: None,
            wall_time_seconds: 0.0,
            version: env!("CARGO_PKG_VERSION").to_owned(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serializes")
    }

    pub fn write(&self, path: &Path) -> std::io::Result<()> {
        crate::output::write_atomic(path, &self.to_json())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parameters_round_trip() {
        let mut manifest = RunManifest::new(
            "collocate",
            Parameters {
                n: Some(45),
                alpha: Some(0.5),
                model: Some("model1".into()),
                function: Some("pole2".into()),
                grid_points: Some(4000),
                window_pad: Some(2.0),
                ..Parameters::default()
            },
        );
        manifest.outputs = vec!["a.csv".into(), "b.csv".into()];
        manifest.results = Some(Results {
            condition: Some(123.0),
            residual: Some(1e-12),
            ..Results::default()
        });
        manifest.wall_time_seconds = 0.25;
        let json = manifest.to_json();
        let back: RunManifest = serde_json::from_str(&json).unwrap();
        assert_eq!(back, manifest);
    }
}
