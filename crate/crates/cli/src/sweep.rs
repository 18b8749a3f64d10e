//! Topology sweeps and single-point rate evaluation for the AWGN modes.
//!
//! A sweep moves the relay along (x, 0), derives the path-loss gains at
//! each grid point, evaluates the requested strategies plus the Gaussian
//! outer bound, and collects one ordered row per x. Everything is
//! deterministic given the config (Monte-Carlo rows derive their seeds
//! from the config seed and row index).

use crate::config::{ExperimentConfig, Mode};
use crate::CliError;
use rayon::prelude::*;
use secrecy_relay::awgn::{
    af_rate, cf_rate_awgn, deaf_nf_rate_awgn, df_rate, mc_phase_average_over, nf_rate,
    outer_bound_gaussian, wiretap_baseline, Strategy, StrategyResult,
};
use secrecy_relay::channel::{gains_from_topology, sample_phases, ChannelGains};
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct SweepMetadata {
    pub config_hash: String,
    pub seed: u64,
    pub version: String,
    pub mode: String,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct SweepRow {
    pub x: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wiretap: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub df: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nf: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cf: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub af: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub deaf_nf: Option<f64>,
    pub outer: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub df_ci: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub af_ci: Option<f64>,
}

impl SweepRow {
    fn empty(x: f64) -> Self {
        Self {
            x,
            wiretap: None,
            df: None,
            nf: None,
            cf: None,
            af: None,
            deaf_nf: None,
            outer: 0.0,
            df_ci: None,
            af_ci: None,
        }
    }

    pub fn cell(&self, strategy: Strategy) -> Option<f64> {
        match strategy {
            Strategy::Wiretap => self.wiretap,
            Strategy::Df => self.df,
            Strategy::Nf => self.nf,
            Strategy::Cf => self.cf,
            Strategy::Af => self.af,
            Strategy::DeafNf => self.deaf_nf,
            Strategy::OuterBound => Some(self.outer),
        }
    }

    fn set_cell(&mut self, strategy: Strategy, value: f64) {
        match strategy {
            Strategy::Wiretap => self.wiretap = Some(value),
            Strategy::Df => self.df = Some(value),
            Strategy::Nf => self.nf = Some(value),
            Strategy::Cf => self.cf = Some(value),
            Strategy::Af => self.af = Some(value),
            Strategy::DeafNf => self.deaf_nf = Some(value),
            Strategy::OuterBound => self.outer = value,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepTable {
    pub metadata: SweepMetadata,
    pub strategies: Vec<String>,
    pub has_ci: bool,
    pub rows: Vec<SweepRow>,
}

fn metadata(cfg: &ExperimentConfig) -> SweepMetadata {
    SweepMetadata {
        config_hash: cfg.hash(),
        seed: cfg.mc.seed,
        version: env!("CARGO_PKG_VERSION").to_string(),
        mode: cfg.mode.name().to_string(),
    }
}

/// Per-row seed: a splitmix64 mix of the config seed and the row index, so
/// rows can be computed independently (and in parallel) yet reproducibly.
pub fn row_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn gains_at_x(cfg: &ExperimentConfig, x: f64) -> Result<ChannelGains<f64>, CliError> {
    let topo_cfg = cfg
        .topology
        .as_ref()
        .ok_or_else(|| CliError::Config("sweep needs a topology".into()))?;
    let powers = cfg
        .powers
        .ok_or_else(|| CliError::Config("sweep needs powers".into()))?;
    let topo = topo_cfg.to_core()?.relay_at([x, 0.0]);
    gains_from_topology(&topo)
        .and_then(|g| g.with_powers(powers.p1, powers.p2))
        .map_err(|e| CliError::Numerical(e.to_string()))
}

fn evaluate_strategy(
    cfg: &ExperimentConfig,
    g: &ChannelGains<f64>,
    strategy: Strategy,
) -> Result<StrategyResult<f64>, CliError> {
    let res = match strategy {
        Strategy::Wiretap => wiretap_baseline(g),
        Strategy::Df => df_rate(g, &cfg.optimizer.df_settings())?,
        Strategy::Nf => nf_rate(g),
        Strategy::Cf => cf_rate_awgn(g),
        Strategy::Af => af_rate(g, &cfg.optimizer.af_settings())?,
        Strategy::DeafNf => deaf_nf_rate_awgn(g),
        Strategy::OuterBound => outer_bound_gaussian(g, cfg.optimizer.rho_step)?,
    };
    Ok(res)
}

/// Deterministic relay-position sweep in the real channel model.
pub fn run_awgn_sweep(cfg: &ExperimentConfig) -> Result<SweepTable, CliError> {
    cfg.validate()?;
    if cfg.mode != Mode::AwgnSweep {
        return Err(CliError::Config("run_awgn_sweep needs mode awgn-sweep".into()));
    }
    let strategies = cfg.strategy_set()?;
    let xs = cfg.x_grid.expect("validated").values();

    let rows: Vec<SweepRow> = xs
        .par_iter()
        .map(|&x| -> Result<SweepRow, CliError> {
            let g = gains_at_x(cfg, x)?;
            let mut row = SweepRow::empty(x);
            for &s in &strategies {
                row.set_cell(s, evaluate_strategy(cfg, &g, s)?.rate);
            }
            row.outer = evaluate_strategy(cfg, &g, Strategy::OuterBound)?.rate;
            Ok(row)
        })
        .collect::<Result<Vec<_>, _>>()?;

    Ok(SweepTable {
        metadata: metadata(cfg),
        strategies: strategies.iter().map(|s| s.name().to_string()).collect(),
        has_ci: false,
        rows,
    })
}

/// Phase-fading sweep: DF and AF are Monte-Carlo means with 95% half-width
/// columns; the phase-invariant strategies are computed once per x; the
/// outer bound is averaged over the same phase draws as DF/AF.
pub fn run_fading_sweep(cfg: &ExperimentConfig) -> Result<SweepTable, CliError> {
    cfg.validate()?;
    if cfg.mode != Mode::AwgnFadingSweep {
        return Err(CliError::Config("run_fading_sweep needs mode awgn-fading-sweep".into()));
    }
    let strategies = cfg.strategy_set()?;
    let xs = cfg.x_grid.expect("validated").values();
    let draws_n = cfg.mc.draws;

    let mut rows = Vec::with_capacity(xs.len());
    for (i, &x) in xs.iter().enumerate() {
        let g = gains_at_x(cfg, x)?;
        let seed = row_seed(cfg.mc.seed, i as u64);
        let draws = sample_phases::<f64>(seed, draws_n);
        let mut row = SweepRow::empty(x);
        for &s in &strategies {
            match s {
                Strategy::Df => {
                    let mc =
                        mc_phase_average_over(&draws, s, &g, &cfg.optimizer.df_settings())?;
                    row.df = Some(mc.result.rate);
                    row.df_ci = Some(mc.half_width);
                }
                Strategy::Af => {
                    let mc =
                        mc_phase_average_over(&draws, s, &g, &cfg.optimizer.af_settings())?;
                    row.af = Some(mc.result.rate);
                    row.af_ci = Some(mc.half_width);
                }
                // phase-invariant: one evaluation on the aligned gains
                other => row.set_cell(other, evaluate_strategy(cfg, &g, other)?.rate),
            }
        }
        let outer_rates: Vec<f64> = draws
            .par_iter()
            .map(|d| {
                outer_bound_gaussian(&g.with_eavesdropper_phases(d), cfg.optimizer.rho_step)
                    .map(|r| r.rate)
            })
            .collect::<secrecy_relay::Result<Vec<_>>>()?;
        row.outer = outer_rates.iter().sum::<f64>() / outer_rates.len() as f64;
        rows.push(row);
    }

    Ok(SweepTable {
        metadata: metadata(cfg),
        strategies: strategies.iter().map(|s| s.name().to_string()).collect(),
        has_ci: true,
        rows,
    })
}

/// Single-point evaluation of every requested strategy plus the bound,
/// reported as a JSON document.
pub fn run_rate(cfg: &ExperimentConfig) -> Result<serde_json::Value, CliError> {
    cfg.validate()?;
    if cfg.mode != Mode::AwgnRate {
        return Err(CliError::Config("run_rate needs mode awgn-rate".into()));
    }
    let strategies = cfg.strategy_set()?;
    let g = cfg.awgn_gains()?;

    let mut results = serde_json::Map::new();
    for &s in strategies.iter().chain([Strategy::OuterBound].iter()) {
        let r = evaluate_strategy(cfg, &g, s)?;
        results.insert(s.name().to_string(), strategy_result_json(&r));
    }

    let mut report = serde_json::Map::new();
    report.insert("metadata".into(), serde_json::to_value(metadata(cfg)).unwrap());
    report.insert(
        "gains".into(),
        serde_json::json!({
            "h_sd": [g.h_sd.re, g.h_sd.im],
            "h_sw": [g.h_sw.re, g.h_sw.im],
            "h_sr": [g.h_sr.re, g.h_sr.im],
            "h_rd": [g.h_rd.re, g.h_rd.im],
            "h_rw": [g.h_rw.re, g.h_rw.im],
            "p1": g.p1,
            "p2": g.p2,
        }),
    );
    report.insert("results".into(), serde_json::Value::Object(results));
    Ok(serde_json::Value::Object(report))
}

pub fn strategy_result_json(r: &StrategyResult<f64>) -> serde_json::Value {
    let params: serde_json::Map<String, serde_json::Value> = r
        .params
        .iter()
        .map(|(k, v)| (k.clone(), serde_json::json!(v)))
        .collect();
    let branches: serde_json::Map<String, serde_json::Value> = r
        .branch_values
        .iter()
        .map(|(k, v)| (k.clone(), serde_json::json!(v)))
        .collect();
    let mut obj = serde_json::Map::new();
    obj.insert("rate".into(), serde_json::json!(r.rate));
    obj.insert("converged".into(), serde_json::json!(r.converged));
    obj.insert("params".into(), serde_json::Value::Object(params));
    obj.insert("branch_values".into(), serde_json::Value::Object(branches));
    if let Some(note) = &r.note {
        obj.insert("note".into(), serde_json::json!(note));
    }
    serde_json::Value::Object(obj)
}
