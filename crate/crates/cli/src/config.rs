//! Run configuration: a single JSON document, schema-validated with unknown
//! keys rejected. Command-line flags override individual fields.

use serde::Deserialize;

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub schema: Option<String>,
    #[serde(default)]
    pub channel: Option<ChannelConfig>,
    #[serde(default)]
    pub budget: Option<BudgetConfig>,
    #[serde(default)]
    pub sim: Option<SimConfig>,
    #[serde(default)]
    pub output: Option<OutputConfig>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelConfig {
    pub eta: f64,
    pub n_b: f64,
    #[serde(default)]
    pub gamma: Option<f64>,
    #[serde(default)]
    pub p_d: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BudgetConfig {
    #[serde(default)]
    pub epsilon: Option<f64>,
    #[serde(default)]
    pub delta: Option<f64>,
    #[serde(default)]
    pub n: Option<f64>,
    /// Log-spaced grid over channel uses (sweep command).
    #[serde(default)]
    pub n_grid: Option<GridConfig>,
    #[serde(default)]
    pub epsilons: Option<Vec<f64>>,
    #[serde(default)]
    pub deltas: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimConfig {
    #[serde(default)]
    pub trials: Option<u64>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub codebook: Option<String>,
    #[serde(default)]
    pub m: Option<usize>,
    #[serde(default)]
    pub scenarios: Option<Vec<String>>,
    #[serde(default)]
    pub p_fa_target: Option<f64>,
    #[serde(default)]
    pub q: Option<f64>,
    #[serde(default)]
    pub p_b: Option<f64>,
    #[serde(default)]
    pub alpha_sq: Option<f64>,
    #[serde(default)]
    pub kappa: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default)]
    pub out: Option<String>,
    /// Input CSV for the plot command.
    #[serde(default)]
    pub csv: Option<String>,
}

impl RunConfig {
    pub fn load(path: &std::path::Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        let cfg: Self = serde_json::from_str(&text).map_err(|e| format!("invalid config: {e}"))?;
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), String> {
        if let Some(schema) = &self.schema {
            if schema != "covert-photon-config/v1" {
                return Err(format!("unsupported config schema \"{schema}\""));
            }
        }
        if let Some(sim) = &self.sim {
            if let Some(kind) = &sim.codebook {
                if kind != "gaussian_coherent" && kind != "ook_twostage" {
                    return Err(format!("unknown codebook kind \"{kind}\""));
                }
            }
        }
        Ok(())
    }

    pub fn channel(&self) -> Result<&ChannelConfig, String> {
        self.channel
            .as_ref()
            .ok_or_else(|| "config is missing the \"channel\" section".into())
    }

    pub fn budget(&self) -> Result<&BudgetConfig, String> {
        self.budget
            .as_ref()
            .ok_or_else(|| "config is missing the \"budget\" section".into())
    }
}
