//! `simulate`: run the configured Monte Carlo scenarios, compare every
//! estimate against its analytic bound (3σ slack), write per-scenario CSV
//! rows and a JSON summary. Exits 4 when any bound is violated.

use super::{channel_params, load_config};
use crate::{resolve_seed, CliError};
use covert_photon_core::fock::ChannelParams;
use covert_photon_core::sim::SimEstimate;
use covert_photon_core::{bounds, metrics, sim};
use serde::Serialize;
use std::path::Path;

pub const CSV_VERSION_LINE: &str = "# covert-photon v1";
pub const CSV_HEADER: &str = "scenario,n,trials,estimate,ci_low,ci_high,analytic_bound,pass";

#[derive(Serialize)]
struct Summary {
    schema: &'static str,
    seed: u64,
    rows: Vec<Row>,
    all_pass: bool,
}

#[derive(Serialize, Clone)]
struct Row {
    scenario: String,
    n: u64,
    trials: u64,
    estimate: f64,
    ci_low: f64,
    ci_high: f64,
    analytic_bound: f64,
    pass: bool,
}

enum Direction {
    /// Estimate must stay at or below the bound (within 3σ).
    Upper,
    /// Estimate must stay at or above the bound (within 3σ).
    Lower,
    /// The interval must contain the bound.
    Contains,
}

fn row(scenario: &str, n: u64, est: SimEstimate, bound: f64, direction: Direction) -> Row {
    let slack = 3.0 * est.std_error();
    let pass = match direction {
        Direction::Upper => est.estimate <= bound + slack,
        Direction::Lower => est.estimate >= bound - slack,
        Direction::Contains => est.contains(bound),
    };
    Row {
        scenario: scenario.to_string(),
        n,
        trials: est.trials,
        estimate: est.estimate,
        ci_low: est.ci_low,
        ci_high: est.ci_high,
        analytic_bound: bound,
        pass,
    }
}

struct ScenarioInputs {
    params: ChannelParams,
    epsilon: f64,
    n: usize,
    trials: u64,
    seed: u64,
    m: usize,
    q: f64,
    p_b: f64,
    alpha_sq: f64,
    p_fa_target: f64,
}

fn run_scenario(name: &str, inp: &ScenarioInputs) -> Result<Vec<Row>, CliError> {
    let p = &inp.params;
    let nf = inp.n as f64;
    match name {
        "willie_lrt" => {
            let nbar = bounds::covert_nbar_thermal(inp.epsilon, p.eta, p.n_b, nf)?;
            let est = sim::willie_lrt_error(p, nbar, inp.n, inp.trials, inp.seed);
            Ok(vec![row(
                name,
                inp.n as u64,
                est,
                0.5 - inp.epsilon,
                Direction::Lower,
            )])
        }
        "willie_lrt_null" => {
            let est = sim::willie_lrt_error(p, 0.0, inp.n, inp.trials, inp.seed);
            Ok(vec![row(name, inp.n as u64, est, 0.5, Direction::Contains)])
        }
        "radiometer" => {
            let (d, t) = bounds::radiometer_threshold(inp.p_fa_target, nf, p.gamma, p.n_b);
            let (fa, md) =
                sim::radiometer_rates(p.gamma, p.n_b, inp.n, t, inp.alpha_sq, inp.trials, inp.seed);
            let md_bound =
                bounds::radiometer_md_ub(inp.alpha_sq, inp.alpha_sq, nf, p.gamma, p.n_b, d);
            Ok(vec![
                row(
                    "radiometer_fa",
                    inp.n as u64,
                    fa,
                    inp.p_fa_target,
                    Direction::Upper,
                ),
                row(
                    "radiometer_md",
                    inp.n as u64,
                    md,
                    md_bound.value,
                    Direction::Upper,
                ),
            ])
        }
        "bob_homodyne" => {
            let nbar = bounds::covert_nbar_thermal(inp.epsilon, p.eta, p.n_b, nf)?;
            let sigma_sq = bounds::homodyne_noise_power(p.eta, p.n_b)?;
            let bits = (inp.m as f64).log2();
            let bound = bounds::bob_error_ub_homodyne(bits, nf, nbar, sigma_sq).min(1.0);
            let est = sim::bob_homodyne_error(inp.m, inp.n, nbar, sigma_sq, inp.trials, inp.seed);
            Ok(vec![row(name, inp.n as u64, est, bound, Direction::Upper)])
        }
        "darkcount" => {
            if p.p_d <= 0.0 {
                return Err(CliError::Domain(
                    "darkcount scenario requires channel.p_d > 0".into(),
                ));
            }
            let alpha_sq = bounds::covert_nbar_darkcount(inp.epsilon, p.eta, p.p_d, nf)? / inp.q;
            let p1 = sim::darkcount_p1(inp.q, alpha_sq, p.eta, p.p_d);
            let cre =
                metrics::cre_bernoulli(p.p_d, p1).map_err(|e| CliError::Domain(e.to_string()))?;
            let bound = metrics::pinsker_classical_lb(nf * cre).lower;
            let est = sim::willie_darkcount_test(
                inp.q, alpha_sq, p.eta, p.p_d, inp.n, inp.trials, inp.seed,
            );
            Ok(vec![row(name, inp.n as u64, est, bound, Direction::Lower)])
        }
        "bob_bac" => {
            let rate_nats = (inp.m as f64).ln() / nf;
            let (s, e0) =
                bounds::gallager_optimize_s(rate_nats, inp.q, p.eta, inp.alpha_sq, inp.p_b);
            let bound = bounds::bob_error_ub_ook(nf, rate_nats, s, e0);
            let est = sim::bob_bac_error(
                inp.m,
                inp.n,
                inp.q,
                inp.alpha_sq,
                p.eta,
                inp.p_b,
                inp.trials,
                inp.seed,
            );
            Ok(vec![row(name, inp.n as u64, est, bound, Direction::Upper)])
        }
        other => Err(CliError::Config(format!("unknown scenario \"{other}\""))),
    }
}

pub fn run(
    config_path: &Path,
    seed_flag: Option<u64>,
    trials_flag: Option<u64>,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let cfg = load_config(config_path)?;
    let channel = cfg.channel()?.clone();
    let budget = cfg.budget()?.clone();
    let sim_cfg = cfg
        .sim
        .clone()
        .ok_or_else(|| CliError::Config("config is missing the \"sim\" section".into()))?;
    let params = channel_params(&channel)?;

    let trials = trials_flag.or(sim_cfg.trials).unwrap_or(10_000);
    if trials < 100 {
        return Err(CliError::Config("sim.trials must be at least 100".into()));
    }
    let seed = resolve_seed(seed_flag, sim_cfg.seed);
    let n = budget
        .n
        .ok_or_else(|| CliError::Config("budget.n is required".into()))? as usize;
    if n == 0 {
        return Err(CliError::Config("budget.n must be positive".into()));
    }
    let epsilon = budget.epsilon.unwrap_or(0.1);
    let scenarios = sim_cfg
        .scenarios
        .clone()
        .unwrap_or_else(|| vec!["willie_lrt".to_string()]);
    if scenarios.is_empty() {
        return Err(CliError::Config("sim.scenarios is empty".into()));
    }

    let mut rows = Vec::new();
    for (idx, name) in scenarios.iter().enumerate() {
        let inputs = ScenarioInputs {
            params,
            epsilon,
            n,
            trials,
            seed: seed.wrapping_add(idx as u64),
            m: sim_cfg.m.unwrap_or(16),
            q: sim_cfg.q.unwrap_or(0.5),
            p_b: sim_cfg.p_b.unwrap_or(1e-3),
            alpha_sq: sim_cfg.alpha_sq.unwrap_or(0.1),
            p_fa_target: sim_cfg.p_fa_target.unwrap_or(0.25),
        };
        rows.extend(run_scenario(name, &inputs)?);
    }

    let mut body = String::new();
    body.push_str(CSV_VERSION_LINE);
    body.push('\n');
    body.push_str(CSV_HEADER);
    body.push('\n');
    for r in &rows {
        body.push_str(&format!(
            "{},{},{},{:e},{:e},{:e},{:e},{}\n",
            r.scenario, r.n, r.trials, r.estimate, r.ci_low, r.ci_high, r.analytic_bound, r.pass
        ));
    }
    let out_path = out
        .map(Path::to_path_buf)
        .or_else(|| {
            cfg.output
                .as_ref()
                .and_then(|o| o.out.clone())
                .map(std::path::PathBuf::from)
        })
        .unwrap_or_else(|| "simulate.csv".into());
    std::fs::write(&out_path, body)
        .map_err(|e| CliError::Config(format!("cannot write {}: {e}", out_path.display())))?;

    let all_pass = rows.iter().all(|r| r.pass);
    let summary = Summary {
        schema: "covert-photon-simulate/v1",
        seed,
        rows,
        all_pass,
    };
    println!(
        "{}",
        serde_json::to_string_pretty(&summary)
            .map_err(|e| CliError::Config(format!("serialization failed: {e}")))?
    );
    if !all_pass {
        return Err(CliError::Check("one or more bounds violated".into()));
    }
    Ok(())
}
