//! Experiment configuration: a single JSON document, with CLI flags able to
//! override individual fields. The fully resolved config is hashable so
//! emitted artifacts can be traced back to their exact inputs.

use crate::CliError;
use secrecy_relay::channel::{ChannelGains, PhaseModel, RelayDmc, Topology};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    AwgnRate,
    AwgnSweep,
    AwgnFadingSweep,
    DmcPoint,
    DmcSearch,
}

impl Mode {
    pub fn name(&self) -> &'static str {
        match self {
            Mode::AwgnRate => "awgn-rate",
            Mode::AwgnSweep => "awgn-sweep",
            Mode::AwgnFadingSweep => "awgn-fading-sweep",
            Mode::DmcPoint => "dmc-point",
            Mode::DmcSearch => "dmc-search",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PhaseModelConfig {
    Real,
    UniformPhase,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TopologyConfig {
    pub source: [f64; 2],
    pub destination: [f64; 2],
    pub eavesdropper: [f64; 2],
    pub relay: [f64; 2],
    #[serde(default = "default_gamma")]
    pub gamma: f64,
    #[serde(default = "default_phase_model")]
    pub phase_model: PhaseModelConfig,
    #[serde(default = "default_d_min")]
    pub d_min: f64,
    #[serde(default = "default_clamp")]
    pub clamp: bool,
}

fn default_gamma() -> f64 {
    2.0
}
fn default_phase_model() -> PhaseModelConfig {
    PhaseModelConfig::Real
}
fn default_d_min() -> f64 {
    1e-6
}
fn default_clamp() -> bool {
    true
}

impl TopologyConfig {
    pub fn to_core(&self) -> Result<Topology<f64>, CliError> {
        let pm = match self.phase_model {
            PhaseModelConfig::Real => PhaseModel::Real,
            PhaseModelConfig::UniformPhase => PhaseModel::UniformPhase,
        };
        Topology::new(
            self.source,
            self.destination,
            self.eavesdropper,
            self.relay,
            self.gamma,
            pm,
        )
        .and_then(|t| t.with_distance_floor(self.d_min, self.clamp))
        .map_err(|e| CliError::Config(format!("topology: {e}")))
    }
}

/// A link gain: a bare number (real) or an [re, im] pair.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GainValue {
    Real(f64),
    Complex([f64; 2]),
}

impl GainValue {
    fn to_complex(self) -> num_complex::Complex<f64> {
        match self {
            GainValue::Real(r) => num_complex::Complex::new(r, 0.0),
            GainValue::Complex([re, im]) => num_complex::Complex::new(re, im),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GainsConfig {
    pub h_sd: GainValue,
    pub h_sw: GainValue,
    pub h_sr: GainValue,
    pub h_rd: GainValue,
    pub h_rw: GainValue,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Powers {
    pub p1: f64,
    pub p2: f64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct XGrid {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl XGrid {
    pub fn values(&self) -> Vec<f64> {
        let mut out = Vec::new();
        let mut i = 0u64;
        loop {
            let x = self.start + self.step * i as f64;
            if x > self.stop + self.step * 1e-9 {
                break;
            }
            out.push(x);
            i += 1;
        }
        out
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct McConfig {
    #[serde(default = "default_draws")]
    pub draws: usize,
    #[serde(default)]
    pub seed: u64,
}

fn default_draws() -> usize {
    1000
}

impl Default for McConfig {
    fn default() -> Self {
        Self { draws: default_draws(), seed: 0 }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptimizerConfig {
    #[serde(default = "default_df_res")]
    pub df_resolution: usize,
    #[serde(default = "default_af_res")]
    pub af_resolution: usize,
    #[serde(default = "default_levels")]
    pub levels: usize,
    #[serde(default = "default_budget")]
    pub budget: usize,
    #[serde(default = "default_rho_step")]
    pub rho_step: f64,
}

fn default_df_res() -> usize {
    51
}
fn default_af_res() -> usize {
    21
}
fn default_levels() -> usize {
    3
}
fn default_budget() -> usize {
    1_000_000
}
fn default_rho_step() -> f64 {
    0.01
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            df_resolution: default_df_res(),
            af_resolution: default_af_res(),
            levels: default_levels(),
            budget: default_budget(),
            rho_step: default_rho_step(),
        }
    }
}

impl OptimizerConfig {
    pub fn df_settings(&self) -> secrecy_relay::optim::GridSearchSettings {
        secrecy_relay::optim::GridSearchSettings {
            resolutions: vec![self.df_resolution],
            levels: self.levels,
            budget: self.budget,
        }
    }

    pub fn af_settings(&self) -> secrecy_relay::optim::GridSearchSettings {
        secrecy_relay::optim::GridSearchSettings {
            resolutions: vec![self.af_resolution],
            levels: self.levels,
            budget: self.budget,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CfConfig {
    /// Quantizer rows p(yh | y1, x2), one row per (y1, x2) pair in
    /// y1-major order.
    pub quantizer: Vec<Vec<f64>>,
    #[serde(default)]
    pub r0: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct DesignConfig {
    #[serde(default)]
    pub pv1: Option<Vec<f64>>,
    #[serde(default)]
    pub pv2: Option<Vec<f64>>,
    /// Correlated p(v1, v2), row-major.
    #[serde(default)]
    pub joint_pv: Option<Vec<f64>>,
    /// p(u, v1, v2) for the outer bound, row-major (u, v1, v2).
    #[serde(default)]
    pub joint_puv: Option<Vec<f64>>,
    #[serde(default)]
    pub u_size: Option<usize>,
    /// Optional factored prefix rows p(x1|v1), p(x2|v2).
    #[serde(default)]
    pub px1_given_v1: Option<Vec<Vec<f64>>>,
    #[serde(default)]
    pub px2_given_v2: Option<Vec<Vec<f64>>>,
    #[serde(default)]
    pub cf: Option<CfConfig>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DmcConfig {
    /// Path to the transition-tensor JSON file (relative paths resolve
    /// against the config file's directory).
    pub channel: String,
    pub strategy: String,
    #[serde(default = "default_grid_k")]
    pub grid_k: usize,
    #[serde(default = "default_u_size")]
    pub u_size: usize,
    #[serde(default)]
    pub yhat_size: Option<usize>,
    #[serde(default = "default_design_budget")]
    pub budget: usize,
    #[serde(default)]
    pub design: Option<DesignConfig>,
}

fn default_grid_k() -> usize {
    10
}
fn default_u_size() -> usize {
    2
}
fn default_design_budget() -> usize {
    1_000_000
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OutputFormat {
    Csv,
    Json,
}

impl std::str::FromStr for OutputFormat {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(CliError::Config(format!("unknown output format {other}"))),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default)]
    pub path: Option<String>,
    #[serde(default = "default_format")]
    pub format: OutputFormat,
}

fn default_format() -> OutputFormat {
    OutputFormat::Csv
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self { path: None, format: default_format() }
    }
}

fn default_strategies() -> Vec<String> {
    ["wiretap", "df", "nf", "cf", "af", "deaf-nf"]
        .iter()
        .map(|s| s.to_string())
        .collect()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub mode: Mode,
    #[serde(default)]
    pub topology: Option<TopologyConfig>,
    #[serde(default)]
    pub gains: Option<GainsConfig>,
    #[serde(default)]
    pub powers: Option<Powers>,
    #[serde(default = "default_strategies")]
    pub strategies: Vec<String>,
    #[serde(default)]
    pub x_grid: Option<XGrid>,
    #[serde(default)]
    pub mc: McConfig,
    #[serde(default)]
    pub optimizer: OptimizerConfig,
    #[serde(default)]
    pub dmc: Option<DmcConfig>,
    #[serde(default)]
    pub output: OutputConfig,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<(Self, PathBuf), CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        let cfg: ExperimentConfig = serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        let base = path
            .parent()
            .map(Path::to_path_buf)
            .unwrap_or_else(|| PathBuf::from("."));
        Ok((cfg, base))
    }

    /// Parsed strategy list, in canonical column order and de-duplicated.
    pub fn strategy_set(&self) -> Result<Vec<secrecy_relay::awgn::Strategy>, CliError> {
        use secrecy_relay::awgn::Strategy;
        let mut requested = Vec::new();
        for name in &self.strategies {
            let s: Strategy = name
                .parse()
                .map_err(|e| CliError::Config(format!("strategies: {e}")))?;
            if s == Strategy::OuterBound {
                return Err(CliError::Config(
                    "the outer bound is always computed; list only achievability strategies"
                        .into(),
                ));
            }
            if !requested.contains(&s) {
                requested.push(s);
            }
        }
        if requested.is_empty() {
            return Err(CliError::Config("strategy list must be non-empty".into()));
        }
        let canonical: Vec<Strategy> = Strategy::ALL
            .into_iter()
            .filter(|s| requested.contains(s))
            .collect();
        Ok(canonical)
    }

    /// Channel gains for the AWGN modes (from geometry or explicit gains).
    pub fn awgn_gains(&self) -> Result<ChannelGains<f64>, CliError> {
        let powers = self
            .powers
            .ok_or_else(|| CliError::Config("awgn modes need a powers section".into()))?;
        let gains = match (&self.topology, &self.gains) {
            (Some(t), None) => secrecy_relay::channel::gains_from_topology(&t.to_core()?)
                .map_err(|e| CliError::Config(e.to_string()))?,
            (None, Some(g)) => ChannelGains::new(
                g.h_sd.to_complex(),
                g.h_sw.to_complex(),
                g.h_sr.to_complex(),
                g.h_rd.to_complex(),
                g.h_rw.to_complex(),
                0.0,
                0.0,
            )
            .map_err(|e| CliError::Config(e.to_string()))?,
            (Some(_), Some(_)) => {
                return Err(CliError::Config(
                    "give either a topology or explicit gains, not both".into(),
                ))
            }
            (None, None) => {
                return Err(CliError::Config("awgn modes need a topology or gains".into()))
            }
        };
        gains
            .with_powers(powers.p1, powers.p2)
            .map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.strategy_set()?;
        match self.mode {
            Mode::AwgnRate => {
                self.awgn_gains()?;
            }
            Mode::AwgnSweep | Mode::AwgnFadingSweep => {
                if self.topology.is_none() {
                    return Err(CliError::Config("sweep modes need a topology".into()));
                }
                let grid = self
                    .x_grid
                    .ok_or_else(|| CliError::Config("sweep modes need an x_grid".into()))?;
                if !(grid.step > 0.0) {
                    return Err(CliError::Config(format!(
                        "x_grid.step must be > 0, got {}",
                        grid.step
                    )));
                }
                if grid.stop < grid.start {
                    return Err(CliError::Config("x_grid.stop must be >= start".into()));
                }
                self.awgn_gains()?;
                if self.mode == Mode::AwgnFadingSweep {
                    if self.mc.draws < 2 {
                        return Err(CliError::Config(
                            "fading sweeps need mc.draws >= 2".into(),
                        ));
                    }
                    match &self.topology {
                        Some(t) if t.phase_model == PhaseModelConfig::UniformPhase => {}
                        _ => {
                            return Err(CliError::Config(
                                "fading sweeps need phase_model = uniform-phase".into(),
                            ))
                        }
                    }
                }
            }
            Mode::DmcPoint | Mode::DmcSearch => {
                let dmc = self
                    .dmc
                    .as_ref()
                    .ok_or_else(|| CliError::Config("dmc modes need a dmc section".into()))?;
                dmc.strategy
                    .parse::<secrecy_relay::dmc::DmcStrategy>()
                    .map_err(|e| CliError::Config(e.to_string()))?;
                if self.mode == Mode::DmcPoint && dmc.design.is_none() {
                    return Err(CliError::Config("dmc-point needs a dmc.design section".into()));
                }
                if dmc.grid_k == 0 {
                    return Err(CliError::Config("dmc.grid_k must be >= 1".into()));
                }
            }
        }
        Ok(())
    }

    /// SHA-256 over the canonical JSON serialization of the resolved config.
    pub fn hash(&self) -> String {
        let canon = serde_json::to_string(self).expect("config serializes");
        let digest = Sha256::digest(canon.as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// On-disk schema of a relay channel transition tensor.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct TensorFile {
    sizes: TensorSizes,
    probs: Vec<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct TensorSizes {
    x1: usize,
    x2: usize,
    y: usize,
    y1: usize,
    y2: usize,
}

/// Loads `{"sizes": {...}, "probs": [...]}` with the flat array in
/// x1-major order; schema violations carry line/column diagnostics.
pub fn load_relay_dmc(path: &Path) -> Result<RelayDmc<f64>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let file: TensorFile = serde_json::from_str(&text)
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    RelayDmc::new(
        [file.sizes.x1, file.sizes.x2, file.sizes.y, file.sizes.y1, file.sizes.y2],
        file.probs,
    )
    .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn minimal_sweep_config() -> ExperimentConfig {
        serde_json::from_str(
            r#"{
                "mode": "awgn-sweep",
                "topology": {
                    "source": [0.0, 0.0], "destination": [1.0, 0.0],
                    "eavesdropper": [0.0, 1.0], "relay": [0.5, 0.0]
                },
                "powers": { "p1": 1.0, "p2": 8.0 },
                "x_grid": { "start": 0.0, "stop": 1.8, "step": 0.05 }
            }"#,
        )
        .unwrap()
    }

    #[test]
    fn defaults_fill_in() {
        let cfg = minimal_sweep_config();
        assert_eq!(cfg.strategies.len(), 6);
        assert_eq!(cfg.optimizer.df_resolution, 51);
        assert_eq!(cfg.topology.as_ref().unwrap().gamma, 2.0);
        cfg.validate().unwrap();
    }

    #[test]
    fn x_grid_inclusive_endpoints() {
        let grid = XGrid { start: 0.0, stop: 1.8, step: 0.05 };
        let xs = grid.values();
        assert_eq!(xs.len(), 37);
        assert_eq!(xs[0], 0.0);
        assert!((xs[36] - 1.8).abs() < 1e-12);
    }

    #[test]
    fn bad_step_rejected() {
        let mut cfg = minimal_sweep_config();
        cfg.x_grid = Some(XGrid { start: 0.0, stop: 1.0, step: 0.0 });
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn empty_strategies_rejected() {
        let mut cfg = minimal_sweep_config();
        cfg.strategies.clear();
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn hash_changes_with_semantic_fields() {
        let a = minimal_sweep_config();
        let mut b = minimal_sweep_config();
        let h1 = a.hash();
        assert_eq!(h1, b.hash());
        b.mc.seed = 99;
        assert_ne!(h1, b.hash());
        let mut c = minimal_sweep_config();
        c.powers = Some(Powers { p1: 1.0, p2: 7.0 });
        assert_ne!(h1, c.hash());
    }

    #[test]
    fn fading_requires_uniform_phase_and_draws() {
        let mut cfg = minimal_sweep_config();
        cfg.mode = Mode::AwgnFadingSweep;
        assert!(cfg.validate().is_err()); // real phase model
        cfg.topology.as_mut().unwrap().phase_model = PhaseModelConfig::UniformPhase;
        cfg.mc.draws = 1;
        assert!(cfg.validate().is_err());
        cfg.mc.draws = 16;
        cfg.validate().unwrap();
    }

    #[test]
    fn unknown_fields_rejected() {
        let err = serde_json::from_str::<ExperimentConfig>(
            r#"{ "mode": "awgn-rate", "bogus": 1 }"#,
        );
        assert!(err.is_err());
    }
}
