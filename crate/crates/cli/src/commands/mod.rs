pub mod bounds;
pub mod plot;
pub mod simulate;
pub mod sweep;
pub mod verify;

use crate::config::{ChannelConfig, RunConfig};
use crate::CliError;
use covert_photon_core::fock::ChannelParams;
use std::path::Path;

pub fn load_config(path: &Path) -> Result<RunConfig, CliError> {
    RunConfig::load(path).map_err(CliError::Config)
}

pub fn channel_params(cfg: &ChannelConfig) -> Result<ChannelParams, CliError> {
    ChannelParams::new(cfg.eta, cfg.gamma, cfg.n_b, cfg.p_d.unwrap_or(0.0))
        .map_err(|e| CliError::Domain(e.to_string()))
}
