//! Discrete-channel commands: point evaluation of a supplied input design
//! and exhaustive grid search, both reported as JSON documents carrying
//! every sub-term.

use crate::config::{DesignConfig, DmcConfig, ExperimentConfig, Mode};
use crate::CliError;
use secrecy_relay::channel::{is_reversely_degraded, RelayDmc};
use secrecy_relay::dmc::{
    best_over_grid, cf_point, deaf_nf_point, df_point, nf_point, outer_bound_point,
    reversely_degraded_rate, BestDesign, CfDesign, CondPmf, DmcGridOptions, DmcStrategy,
    InputDesign, Prefix, RegionPoint, SourceLaw,
};
use std::path::{Path, PathBuf};

fn resolve_channel_path(base: &Path, dmc: &DmcConfig) -> PathBuf {
    let p = PathBuf::from(&dmc.channel);
    if p.is_absolute() {
        p
    } else {
        base.join(p)
    }
}

fn rows_to_cond_pmf(rows: &[Vec<f64>], what: &str) -> Result<CondPmf<f64>, CliError> {
    let n_in = rows.len();
    let n_out = rows.first().map(Vec::len).unwrap_or(0);
    if rows.iter().any(|r| r.len() != n_out) {
        return Err(CliError::Config(format!("{what}: ragged rows")));
    }
    let flat: Vec<f64> = rows.iter().flatten().copied().collect();
    CondPmf::new(n_in, n_out, flat).map_err(|e| CliError::Config(format!("{what}: {e}")))
}

fn build_input_design(
    c: &RelayDmc<f64>,
    d: &DesignConfig,
) -> Result<InputDesign<f64>, CliError> {
    let law_count = [
        d.pv1.is_some() && d.pv2.is_some(),
        d.joint_pv.is_some(),
        d.joint_puv.is_some(),
    ]
    .iter()
    .filter(|&&b| b)
    .count();
    if law_count != 1 {
        return Err(CliError::Config(
            "design needs exactly one of pv1+pv2, joint_pv, joint_puv".into(),
        ));
    }
    let mut design = if let (Some(pv1), Some(pv2)) = (&d.pv1, &d.pv2) {
        InputDesign::product(pv1.clone(), pv2.clone())?
    } else if let Some(pv) = &d.joint_pv {
        InputDesign::joint(pv.clone(), c.nx1, c.nx2)?
    } else if let Some(puv) = &d.joint_puv {
        let nu = d.u_size.unwrap_or(2);
        InputDesign::with_aux(puv.clone(), nu, c.nx1, c.nx2)?
    } else {
        unreachable!()
    };
    if d.px1_given_v1.is_some() || d.px2_given_v2.is_some() {
        let px1 = rows_to_cond_pmf(
            d.px1_given_v1
                .as_ref()
                .ok_or_else(|| CliError::Config("prefix needs both px1 and px2 rows".into()))?,
            "px1_given_v1",
        )?;
        let px2 = rows_to_cond_pmf(
            d.px2_given_v2
                .as_ref()
                .ok_or_else(|| CliError::Config("prefix needs both px1 and px2 rows".into()))?,
            "px2_given_v2",
        )?;
        design = design.with_prefix(Prefix::Factored { px1, px2 })?;
    }
    Ok(design)
}

fn build_cf_design(c: &RelayDmc<f64>, d: &DesignConfig) -> Result<CfDesign<f64>, CliError> {
    let cf = d
        .cf
        .as_ref()
        .ok_or_else(|| CliError::Config("cf strategy needs a design.cf section".into()))?;
    let (pv1, pv2) = match (&d.pv1, &d.pv2) {
        (Some(a), Some(b)) => (a.clone(), b.clone()),
        _ => return Err(CliError::Config("cf design needs pv1 and pv2 input pmfs".into())),
    };
    if cf.quantizer.len() != c.ny1 * c.nx2 {
        return Err(CliError::Config(format!(
            "cf quantizer needs {} rows (one per (y1, x2) pair), got {}",
            c.ny1 * c.nx2,
            cf.quantizer.len()
        )));
    }
    let quantizer = rows_to_cond_pmf(&cf.quantizer, "cf.quantizer")?;
    Ok(CfDesign::new(pv1, pv2, quantizer, cf.r0)?)
}

fn region_point_json(p: &RegionPoint<f64>) -> serde_json::Value {
    let terms: serde_json::Map<String, serde_json::Value> = p
        .terms
        .iter()
        .map(|(k, v)| (k.clone(), serde_json::json!(v)))
        .collect();
    serde_json::json!({
        "r1_max": p.r1_max,
        "re_max": p.re_max,
        "feasible": p.feasible,
        "applicable": p.applicable,
        "terms": serde_json::Value::Object(terms),
    })
}

fn design_json(design: &BestDesign<f64>) -> serde_json::Value {
    match design {
        BestDesign::Input(d) => match d.law() {
            SourceLaw::Product { pv1, pv2 } => serde_json::json!({
                "pv1": pv1,
                "pv2": pv2,
            }),
            SourceLaw::Joint { pv, nv1, nv2 } => serde_json::json!({
                "joint_pv": pv,
                "nv1": nv1,
                "nv2": nv2,
            }),
            SourceLaw::Aux { puv, nu, nv1, nv2 } => serde_json::json!({
                "joint_puv": puv,
                "u_size": nu,
                "nv1": nv1,
                "nv2": nv2,
            }),
        },
        BestDesign::Cf(d) => {
            let rows: Vec<Vec<f64>> = (0..d.quantizer.n_in())
                .map(|i| (0..d.quantizer.n_out()).map(|j| d.quantizer.prob(i, j)).collect())
                .collect();
            serde_json::json!({
                "px1": d.px1,
                "px2": d.px2,
                "quantizer": rows,
                "r0": d.r0,
            })
        }
    }
}

fn evaluate_point(
    c: &RelayDmc<f64>,
    strategy: DmcStrategy,
    d: &DesignConfig,
) -> Result<(RegionPoint<f64>, serde_json::Value), CliError> {
    match strategy {
        DmcStrategy::Cf => {
            let design = build_cf_design(c, d)?;
            let point = cf_point(c, &design)?;
            Ok((point, design_json(&BestDesign::Cf(design))))
        }
        _ => {
            let design = build_input_design(c, d)?;
            let point = match strategy {
                DmcStrategy::OuterBound => outer_bound_point(c, &design)?,
                DmcStrategy::Df => df_point(c, &design)?,
                DmcStrategy::Nf => nf_point(c, &design)?,
                DmcStrategy::DeafNf => deaf_nf_point(c, &design)?,
                DmcStrategy::ReverselyDegraded => reversely_degraded_rate(c, &design)?,
                DmcStrategy::Cf => unreachable!(),
            };
            Ok((point, design_json(&BestDesign::Input(design))))
        }
    }
}

/// Runs the dmc-point or dmc-search mode and returns the JSON report.
pub fn run_dmc(cfg: &ExperimentConfig, base_dir: &Path) -> Result<serde_json::Value, CliError> {
    cfg.validate()?;
    let dmc = cfg
        .dmc
        .as_ref()
        .ok_or_else(|| CliError::Config("dmc modes need a dmc section".into()))?;
    let channel_path = resolve_channel_path(base_dir, dmc);
    let channel = crate::config::load_relay_dmc(&channel_path)?;
    let strategy: DmcStrategy = dmc
        .strategy
        .parse()
        .map_err(|e: secrecy_relay::Error| CliError::Config(e.to_string()))?;

    let degradedness = is_reversely_degraded(&channel, 1e-9);

    let (point_json, design_json_val, extra) = match cfg.mode {
        Mode::DmcPoint => {
            let design = dmc
                .design
                .as_ref()
                .ok_or_else(|| CliError::Config("dmc-point needs a design".into()))?;
            let (point, dj) = evaluate_point(&channel, strategy, design)?;
            (region_point_json(&point), dj, serde_json::Map::new())
        }
        Mode::DmcSearch => {
            let opts = DmcGridOptions {
                budget: dmc.budget,
                u_size: dmc.u_size,
                yhat_size: dmc.yhat_size,
            };
            let best = best_over_grid(&channel, strategy, dmc.grid_k, &opts)?;
            let mut extra = serde_json::Map::new();
            extra.insert(
                "designs_evaluated".into(),
                serde_json::json!(best.designs_evaluated),
            );
            extra.insert("grid_k".into(), serde_json::json!(dmc.grid_k));
            (region_point_json(&best.point), design_json(&best.design), extra)
        }
        _ => return Err(CliError::Config("run_dmc needs a dmc mode".into())),
    };

    let mut report = serde_json::Map::new();
    report.insert(
        "metadata".into(),
        serde_json::json!({
            "config_hash": cfg.hash(),
            "version": env!("CARGO_PKG_VERSION"),
            "mode": cfg.mode.name(),
            "channel": channel_path.display().to_string(),
            "strategy": dmc.strategy,
        }),
    );
    report.insert(
        "channel_info".into(),
        serde_json::json!({
            "sizes": {
                "x1": channel.nx1, "x2": channel.nx2,
                "y": channel.ny, "y1": channel.ny1, "y2": channel.ny2,
            },
            "reversely_degraded": degradedness.reversely_degraded,
            "degradedness_violation": degradedness.max_violation,
        }),
    );
    report.insert("point".into(), point_json);
    report.insert("design".into(), design_json_val);
    for (k, v) in extra {
        report.insert(k, v);
    }
    Ok(serde_json::Value::Object(report))
}
