//! Report documents: canonical field order, floats rounded to six
//! significant digits, byte-stable serialization.

use relfuzz::fuzzy::Tfn;
use relfuzz::markov::FuzzyMttf;
use relfuzz::simulate::SimResult;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub const REPORT_SCHEMA: u32 = 1;

/// Rounds to six significant digits; the round-trip through scientific
/// notation is idempotent, so re-reading a report reproduces it exactly.
pub fn round_sig6(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { 0.0 } else { x };
    }
    format!("{x:.5e}").parse().expect("scientific notation round-trip")
}

/// An f64 that serializes at six significant digits.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sig6(f64);

impl Sig6 {
    pub fn get(self) -> f64 {
        self.0
    }
}

impl From<f64> for Sig6 {
    fn from(x: f64) -> Sig6 {
        Sig6(round_sig6(x))
    }
}

impl Serialize for Sig6 {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_f64(self.0)
    }
}

impl<'de> Deserialize<'de> for Sig6 {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Sig6, D::Error> {
        f64::deserialize(deserializer).map(Sig6::from)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub schema: u32,
    pub provenance: Provenance,
    pub profile: Option<ProfileReport>,
    pub configurations: Vec<ConfigurationReport>,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Provenance {
    pub tool: String,
    pub version: String,
    pub config_sha256: String,
    pub profile_sha256: Option<String>,
    pub rng: String,
    pub seed: u64,
    pub method: String,
    pub alpha_levels: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileReport {
    pub states: Vec<StateReport>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateReport {
    pub t_ambient_c: Sig6,
    pub power_w: Sig6,
    pub probability: Sig6,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigurationReport {
    pub kind: String,
    pub formula_variant: String,
    pub rates_source: String,
    pub coverage: TfnJson,
    pub lambda_mode2_per_year: TfnJson,
    pub lambda_mode1_per_year: TfnJson,
    pub mttf_alpha_cut: MttfJson,
    pub mttf_vertex: MttfJson,
    pub monte_carlo: McJson,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TfnJson {
    pub a: Sig6,
    pub b: Sig6,
    pub c: Sig6,
}

impl From<&Tfn> for TfnJson {
    fn from(t: &Tfn) -> TfnJson {
        TfnJson { a: t.a().into(), b: t.b().into(), c: t.c().into() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MttfJson {
    pub lowest_years: Sig6,
    pub peak_years: Sig6,
    pub highest_years: Sig6,
    pub defuzzified_years: Sig6,
}

impl From<&FuzzyMttf> for MttfJson {
    fn from(m: &FuzzyMttf) -> MttfJson {
        let summary = m.tfn_summary();
        MttfJson {
            lowest_years: summary.a().into(),
            peak_years: summary.b().into(),
            highest_years: summary.c().into(),
            defuzzified_years: m.defuzzified().into(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct McJson {
    pub trials: u64,
    pub seed: u64,
    pub mean_years: Sig6,
    pub std_error_years: Sig6,
    pub ci95_years: [Sig6; 2],
    pub analytic_peak_years: Sig6,
    pub within_ci95: bool,
}

impl McJson {
    pub fn new(sim: &SimResult, analytic_peak: f64) -> McJson {
        McJson {
            trials: sim.trials,
            seed: sim.seed,
            mean_years: sim.mean_mttf_years.into(),
            std_error_years: sim.std_error_years.into(),
            ci95_years: [sim.ci95.0.into(), sim.ci95.1.into()],
            analytic_peak_years: analytic_peak.into(),
            within_ci95: sim.ci95_contains(analytic_peak),
        }
    }
}

/// Standalone document emitted by the `simulate` command.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateReport {
    pub schema: u32,
    pub rng: String,
    pub seed: u64,
    pub trials: u64,
    pub lambda2_per_year: Sig6,
    pub lambda1_per_year: Sig6,
    pub coverage: Sig6,
    pub analytic_mttf_years: Sig6,
    pub simulated_mean_years: Sig6,
    pub std_error_years: Sig6,
    pub ci95_years: [Sig6; 2],
    pub within_ci95: bool,
}

pub fn to_json_bytes<T: Serialize>(value: &T) -> Vec<u8> {
    let mut text = serde_json::to_string_pretty(value).expect("report serialization");
    text.push('\n');
    text.into_bytes()
}
