//! `bounds`: evaluate every closed form applicable to the configured link
//! and budget, as a single JSON report on stdout.

use super::{channel_params, load_config};
use crate::CliError;
use covert_photon_core::{bounds, metrics};
use serde::Serialize;
use std::path::Path;

#[derive(Serialize)]
struct Report {
    schema: &'static str,
    channel: ChannelOut,
    budget: BudgetOut,
    qre: QreOut,
    homodyne: HomodyneOut,
    throughput: ThroughputOut,
    #[serde(skip_serializing_if = "Option::is_none")]
    converse: Option<ConverseOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    darkcount: Option<DarkcountOut>,
}

#[derive(Serialize)]
struct ChannelOut {
    eta: f64,
    gamma: f64,
    n_b: f64,
    p_d: f64,
}

#[derive(Serialize)]
struct BudgetOut {
    epsilon: f64,
    delta: f64,
    n: f64,
    nbar: f64,
}

#[derive(Serialize)]
struct QreOut {
    closed: f64,
    taylor_ub: f64,
    total_taylor: f64,
    willie_error_lb: f64,
}

#[derive(Serialize)]
struct HomodyneOut {
    noise_power: f64,
}

#[derive(Serialize)]
struct ThroughputOut {
    bits_exact: f64,
    c_d: f64,
    c_c_paper: f64,
    c_c_exact: f64,
    sqrt_n_term: f64,
}

#[derive(Serialize)]
struct ConverseOut {
    fa_ub: f64,
    md_ub: f64,
    md_ub_display: f64,
    md_ub_clamped: bool,
    threshold_t: f64,
    bob_error_lb: f64,
}

#[derive(Serialize)]
struct DarkcountOut {
    nbar: f64,
    cre_ub: f64,
    willie_error_lb: f64,
}

pub fn run(config_path: &Path, _seed: Option<u64>) -> Result<(), CliError> {
    let cfg = load_config(config_path)?;
    let channel = cfg.channel()?.clone();
    let budget = cfg.budget()?.clone();
    let params = channel_params(&channel)?;

    let epsilon = budget
        .epsilon
        .ok_or_else(|| CliError::Config("budget.epsilon is required".into()))?;
    let delta = budget
        .delta
        .ok_or_else(|| CliError::Config("budget.delta is required".into()))?;
    let n = budget
        .n
        .ok_or_else(|| CliError::Config("budget.n is required".into()))?;

    let nbar = bounds::covert_nbar_thermal(epsilon, params.eta, params.n_b, n)?;
    let closed = bounds::qre_thermal_closed(nbar, params.eta, params.n_b)?;
    let taylor = bounds::qre_thermal_taylor_ub(nbar, params.eta, params.n_b)?;
    let total = n * taylor;
    let throughput = bounds::bits_homodyne(n, epsilon, delta, params.eta, params.n_b)?;
    let noise_power = bounds::homodyne_noise_power(params.eta, params.n_b)?;

    let converse = cfg.sim.as_ref().and_then(|sim| {
        let p_fa_target = sim.p_fa_target?;
        let kappa = sim.kappa.unwrap_or(0.5);
        let rate_bits = throughput.bits_exact / n;
        if rate_bits <= 0.0 {
            return None;
        }
        let report = bounds::converse_report(
            p_fa_target,
            n,
            params.gamma,
            params.eta,
            params.n_b,
            nbar,
            nbar,
            rate_bits,
            kappa,
        )
        .ok()?;
        let (d, _) = bounds::radiometer_threshold(p_fa_target, n, params.gamma, params.n_b);
        let md = bounds::radiometer_md_ub(nbar, nbar, n, params.gamma, params.n_b, d);
        Some(ConverseOut {
            fa_ub: report.fa_ub,
            md_ub: report.md_ub,
            md_ub_display: md.display,
            md_ub_clamped: md.clamped,
            threshold_t: report.threshold_t,
            bob_error_lb: report.bob_error_lb,
        })
    });

    let darkcount = if params.p_d > 0.0 {
        let nbar_dark = bounds::covert_nbar_darkcount(epsilon, params.eta, params.p_d, n)?;
        let cre_ub = bounds::cre_darkcount_ub(1.0, nbar_dark, params.eta, params.p_d)?;
        Some(DarkcountOut {
            nbar: nbar_dark,
            cre_ub,
            willie_error_lb: metrics::pinsker_classical_lb(n * cre_ub).lower,
        })
    } else {
        None
    };

    let report = Report {
        schema: "covert-photon-report/v1",
        channel: ChannelOut {
            eta: params.eta,
            gamma: params.gamma,
            n_b: params.n_b,
            p_d: params.p_d,
        },
        budget: BudgetOut {
            epsilon,
            delta,
            n,
            nbar,
        },
        qre: QreOut {
            closed,
            taylor_ub: taylor,
            total_taylor: total,
            willie_error_lb: metrics::pinsker_quantum_lb(total).lower,
        },
        homodyne: HomodyneOut { noise_power },
        throughput: ThroughputOut {
            bits_exact: throughput.bits_exact,
            c_d: throughput.c_d,
            c_c_paper: throughput.c_c_paper,
            c_c_exact: throughput.c_c_exact,
            sqrt_n_term: throughput.sqrt_n_term,
        },
        converse,
        darkcount,
    };
    let json = serde_json::to_string_pretty(&report)
        .map_err(|e| CliError::Config(format!("serialization failed: {e}")))?;
    println!("{json}");
    Ok(())
}
