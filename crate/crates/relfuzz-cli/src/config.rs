//! Run configuration: a single versioned JSON document with explicit unit
//! suffixes in every physical key name.

use relfuzz::failure::{
    FailureModel, StressFactors, ThermalElectricalParams, DEFAULT_TJ_LIMIT_C,
};
use relfuzz::fuzzy::{FuzzyMethod, Tfn, Unit, DEFAULT_ALPHA_LEVELS};
use relfuzz::redundancy::{FormulaVariant, RedundancyKind};
use relfuzz::PER_MILLION_HOURS_TO_PER_YEAR;
use serde::Deserialize;
use sha2::{Digest, Sha256};
use std::path::Path;

use crate::CliError;

pub const CONFIG_SCHEMA: u32 = 1;

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema: u32,
    pub converter: ConverterConfig,
    pub failure: FailureConfig,
    pub redundancy: Vec<RedundancyEntry>,
    #[serde(default)]
    pub fuzzy: FuzzyConfig,
    #[serde(default)]
    pub simulation: SimulationConfig,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConverterConfig {
    pub v_in_v: f64,
    pub v_out_v: f64,
    pub r_ds_on_ohm: f64,
    #[serde(default)]
    pub e_sw_j: f64,
    #[serde(default)]
    pub f_sw_hz: f64,
    #[serde(default = "default_i_ref")]
    pub i_ref_a: f64,
    pub r_th_ja_c_per_w: f64,
    #[serde(default = "default_tj_limit")]
    pub tj_limit_c: f64,
}

fn default_i_ref() -> f64 {
    1.0
}

fn default_tj_limit() -> f64 {
    DEFAULT_TJ_LIMIT_C
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FailureConfig {
    /// Base failure rate TFN in failures per million hours.
    pub lambda_b_per_1e6h: [f64; 3],
    #[serde(default = "one")]
    pub pi_q: f64,
    #[serde(default = "one")]
    pub pi_a: f64,
    #[serde(default = "one")]
    pub pi_e: f64,
}

fn one() -> f64 {
    1.0
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RedundancyEntry {
    pub kind: RedundancyKind,
    pub coverage: [f64; 3],
    #[serde(default)]
    pub formula_variant: FormulaVariant,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FuzzyConfig {
    pub method: FuzzyMethod,
    pub alpha_levels: usize,
}

impl Default for FuzzyConfig {
    fn default() -> Self {
        FuzzyConfig { method: FuzzyMethod::default(), alpha_levels: DEFAULT_ALPHA_LEVELS }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SimulationConfig {
    pub trials: u64,
    pub seed: u64,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        SimulationConfig { trials: 1_000_000, seed: 42 }
    }
}

/// Parsed configuration plus the hash of the exact bytes it came from.
pub struct ConfigBundle {
    pub config: RunConfig,
    pub sha256: String,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn load_config(path: &Path) -> Result<ConfigBundle, CliError> {
    let bytes = std::fs::read(path)
        .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
    let config: RunConfig = serde_json::from_slice(&bytes)
        .map_err(|e| CliError::Config(format!("config {}: {e}", path.display())))?;
    validate(&config)?;
    Ok(ConfigBundle { config, sha256: sha256_hex(&bytes) })
}

fn validate(config: &RunConfig) -> Result<(), CliError> {
    if config.schema != CONFIG_SCHEMA {
        return Err(CliError::Config(format!(
            "schema: expected {CONFIG_SCHEMA}, got {}",
            config.schema
        )));
    }
    if config.redundancy.is_empty() {
        return Err(CliError::Config(
            "redundancy: at least one configuration is required".into(),
        ));
    }
    for (i, entry) in config.redundancy.iter().enumerate() {
        entry
            .coverage_tfn()
            .map_err(|e| CliError::Config(format!("redundancy[{i}].coverage: {e}")))?;
    }
    if config.fuzzy.alpha_levels < 2 {
        return Err(CliError::Config(format!(
            "fuzzy.alpha_levels: need at least 2 levels, got {}",
            config.fuzzy.alpha_levels
        )));
    }
    if config.simulation.trials == 0 {
        return Err(CliError::Config("simulation.trials: must be at least 1".into()));
    }
    // surface parameter problems now, with their config field names
    config.failure_model()?;
    Ok(())
}

impl RedundancyEntry {
    pub fn coverage_tfn(&self) -> Result<Tfn, relfuzz::fuzzy::FuzzyError> {
        let [a, b, c] = self.coverage;
        let t = Tfn::new(a, b, c, Unit::DIMENSIONLESS)?;
        if a < 0.0 || c > 1.0 {
            return Err(relfuzz::fuzzy::FuzzyError::BadInterval { lo: a, hi: c });
        }
        Ok(t)
    }
}

impl RunConfig {
    pub fn thermal_params(&self) -> ThermalElectricalParams {
        let c = &self.converter;
        ThermalElectricalParams {
            v_in_v: c.v_in_v,
            v_out_v: c.v_out_v,
            r_ds_on_ohm: c.r_ds_on_ohm,
            e_sw_j: c.e_sw_j,
            f_sw_hz: c.f_sw_hz,
            r_th_ja_c_per_w: c.r_th_ja_c_per_w,
            i_ref_a: c.i_ref_a,
            tj_limit_c: c.tj_limit_c,
        }
    }

    /// Stress model over the config, with the base rate converted to
    /// failures per year before any fuzzy arithmetic touches it.
    pub fn failure_model(&self) -> Result<FailureModel, CliError> {
        let [a, b, c] = self.failure.lambda_b_per_1e6h;
        let lambda_b = Tfn::new(a, b, c, Unit::PER_MILLION_HOURS)
            .and_then(|t| t.scale(PER_MILLION_HOURS_TO_PER_YEAR))
            .map(|t| t.with_unit(Unit::PER_YEAR))
            .map_err(|e| CliError::Config(format!("failure.lambda_b_per_1e6h: {e}")))?;
        let factors = StressFactors::new(self.failure.pi_q, self.failure.pi_a, self.failure.pi_e)
            .map_err(|e| CliError::Config(format!("failure: {e}")))?;
        FailureModel::new(lambda_b, factors, self.thermal_params())
            .map_err(|e| CliError::Config(format!("converter/failure: {e}")))
    }
}
