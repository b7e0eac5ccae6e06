//! Sweep configuration file: flat TOML whose keys mirror `SweepConfig`.
//!
//! ```toml
//! f_pi = "x1^2*(x1^2 + x2^2)"
//! g = "0.01*x1^3"
//! epsilon = 0.05
//! n_perturbations = 25
//! seed = 5
//! lambda_min = 100.0
//! lambda_max = 10000.0
//! lambda_points = 5
//! amp_radius = 0.5
//! box_half_width = 0.5
//! recenter = true
//! cross_check = true
//! tol = 1e-9
//! ```

use std::path::Path;

use serde::Deserialize;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepFile {
    pub f_pi: Option<String>,
    pub g: Option<String>,
    pub epsilon: Option<f64>,
    pub n_perturbations: Option<usize>,
    pub seed: Option<u64>,
    pub lambda_min: Option<f64>,
    pub lambda_max: Option<f64>,
    pub lambda_points: Option<usize>,
    pub amp_radius: Option<f64>,
    pub box_half_width: Option<f64>,
    pub recenter: Option<bool>,
    pub cross_check: Option<bool>,
    pub tol: Option<f64>,
}

impl SweepFile {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("--config {}: {e}", path.display()))?;
        toml::from_str(&text).map_err(|e| format!("--config {}: {e}", path.display()))
    }
}
