//! `sweep`: covert throughput over a log-spaced grid of channel uses and
//! sets of (epsilon, delta), written as versioned CSV sorted by
//! (epsilon, delta, n).

use super::load_config;
use crate::CliError;
use covert_photon_core::{bounds, exec};
use std::path::Path;

pub const CSV_VERSION_LINE: &str = "# covert-photon v1";
pub const CSV_HEADER: &str = "n,epsilon,delta,eta,n_b,nbar,bits_exact,c_d,c_c_paper,c_c_exact";

pub fn run(config_path: &Path, out: Option<&Path>) -> Result<(), CliError> {
    let cfg = load_config(config_path)?;
    let channel = cfg.channel()?.clone();
    let budget = cfg.budget()?.clone();

    let grid = budget
        .n_grid
        .as_ref()
        .ok_or_else(|| CliError::Config("budget.n_grid is required for sweep".into()))?;
    let epsilons = budget
        .epsilons
        .clone()
        .or_else(|| budget.epsilon.map(|e| vec![e]))
        .unwrap_or_default();
    let deltas = budget
        .deltas
        .clone()
        .or_else(|| budget.delta.map(|d| vec![d]))
        .unwrap_or_default();
    if grid.points == 0 || epsilons.is_empty() || deltas.is_empty() {
        return Err(CliError::Config("sweep grid is empty".into()));
    }
    if grid.start <= 0.0 || grid.stop < grid.start {
        return Err(CliError::Config(
            "n_grid must satisfy 0 < start <= stop".into(),
        ));
    }

    let ns: Vec<f64> = if grid.points == 1 {
        vec![grid.start]
    } else {
        let log_start = grid.start.ln();
        let step = (grid.stop.ln() - log_start) / (grid.points - 1) as f64;
        (0..grid.points)
            .map(|i| (log_start + i as f64 * step).exp())
            .collect()
    };

    let mut cells: Vec<(f64, f64, f64)> = Vec::new();
    let mut sorted_eps = epsilons.clone();
    sorted_eps.sort_by(f64::total_cmp);
    let mut sorted_deltas = deltas.clone();
    sorted_deltas.sort_by(f64::total_cmp);
    for &eps in &sorted_eps {
        for &delta in &sorted_deltas {
            for &n in &ns {
                cells.push((eps, delta, n));
            }
        }
    }

    let (eta, n_b) = (channel.eta, channel.n_b);
    let rows: Vec<Result<String, String>> = exec::map_indexed(cells.len(), |i| {
        let (eps, delta, n) = cells[i];
        let nbar = bounds::covert_nbar_thermal(eps, eta, n_b, n).map_err(|e| e.to_string())?;
        let report = bounds::bits_homodyne(n, eps, delta, eta, n_b).map_err(|e| e.to_string())?;
        Ok(format!(
            "{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e}",
            n,
            eps,
            delta,
            eta,
            n_b,
            nbar,
            report.bits_exact,
            report.c_d,
            report.c_c_paper,
            report.c_c_exact
        ))
    });

    let mut body = String::new();
    body.push_str(CSV_VERSION_LINE);
    body.push('\n');
    body.push_str(CSV_HEADER);
    body.push('\n');
    for row in rows {
        body.push_str(&row.map_err(CliError::Domain)?);
        body.push('\n');
    }

    let out_path = out
        .map(Path::to_path_buf)
        .or_else(|| {
            cfg.output
                .as_ref()
                .and_then(|o| o.out.clone())
                .map(std::path::PathBuf::from)
        })
        .unwrap_or_else(|| "sweep.csv".into());
    std::fs::write(&out_path, body)
        .map_err(|e| CliError::Config(format!("cannot write {}: {e}", out_path.display())))?;
    Ok(())
}
