//! Orchestration of the analysis pipeline: mission profile → stress rates →
//! redundancy-equivalent totals → fuzzy MTTF → Monte Carlo cross-check.

use relfuzz::failure::{state_mode_rates, ConductionSharing, StateModeRates};
use relfuzz::fuzzy::{uniform_alpha_grid, FuzzyMethod, Tfn};
use relfuzz::markov::{build_chain, fuzzy_mttf_on_grid, mttf_closed_form, FuzzyMttf};
use relfuzz::mission::MissionProfile;
use relfuzz::redundancy::{mode_totals, FormulaVariant, RedundancyConfig, RedundancyKind};
use relfuzz::simulate::simulate_mttf;

use crate::config::{RedundancyEntry, RunConfig};
use crate::report::{
    ConfigurationReport, McJson, MttfJson, ProfileReport, Provenance, Report, StateReport,
    TfnJson, REPORT_SCHEMA,
};
use crate::CliError;

const RNG_NAME: &str = "chacha8";

const SCALE_NOTE: &str = "Defuzzified MTTF values depend on the coverage membership and on the \
time unit of the aggregated failure rates, which this tool takes as failures per year; \
externally published year-scale allocations computed under different or unpublished coverage \
memberships and rate units are not directly comparable.";

const OVERRIDE_NOTE: &str = "Per-mode rate totals were injected via --rates-override and are \
taken as failures per year; the mission, stress, and redundancy stages were skipped.";

pub struct AnalyzeInputs<'a> {
    pub config: &'a RunConfig,
    pub config_sha256: &'a str,
    pub profile: Option<&'a MissionProfile>,
    pub profile_sha256: Option<&'a str>,
    pub rates_override: Option<(Tfn, Tfn)>,
    pub method_override: Option<FuzzyMethod>,
    pub variant_override: Option<FormulaVariant>,
    pub trials_override: Option<u64>,
    pub seed_override: Option<u64>,
}

/// One membership polyline destined for plot output.
pub struct PlotSeries {
    pub name: String,
    pub points: Vec<(f64, f64)>,
}

fn numeric_err<E: std::fmt::Display>(stage: &str) -> impl FnOnce(E) -> CliError + '_ {
    move |e| CliError::Numeric(format!("{stage}: {e}"))
}

/// Per-state stress rates for both operation modes under the conduction
/// pattern of the redundancy kind.
fn stress_rates(
    config: &RunConfig,
    profile: &MissionProfile,
    kind: RedundancyKind,
) -> Result<(Vec<StateModeRates>, usize), CliError> {
    let model = config.failure_model()?;
    let sharing = match kind {
        RedundancyKind::Parallel => ConductionSharing::RedundantPair,
        RedundancyKind::Standby => ConductionSharing::SingleDevice,
    };
    let mut per_state = Vec::with_capacity(profile.len() * 2);
    let mut over_limit = 0;
    for (index, state) in profile.states().iter().enumerate() {
        for mode_k in [1u32, 2] {
            let rates = state_mode_rates(&model, state, index, mode_k, sharing)
                .map_err(numeric_err("stress model"))?;
            if rates.over_tj_limit {
                over_limit += 1;
            }
            per_state.push(rates);
        }
    }
    Ok((per_state, over_limit))
}

/// Per-mode fuzzy totals for one redundancy entry, in failures per year.
pub fn entry_totals(
    config: &RunConfig,
    profile: &MissionProfile,
    entry: &RedundancyEntry,
    variant: FormulaVariant,
    method: FuzzyMethod,
) -> Result<(Tfn, Tfn, usize), CliError> {
    let (per_state, over_limit) = stress_rates(config, profile, entry.kind)?;
    let coverage = entry
        .coverage_tfn()
        .map_err(|e| CliError::Config(format!("redundancy coverage: {e}")))?;
    let rc = RedundancyConfig::new(entry.kind, coverage, variant)
        .map_err(|e| CliError::Config(format!("redundancy coverage: {e}")))?;
    let totals = mode_totals(profile, &per_state, &rc, method)
        .map_err(numeric_err("redundancy aggregation"))?;
    Ok((
        totals.lambda_mode2().clone(),
        totals.lambda_mode1().clone(),
        over_limit,
    ))
}

pub fn analyze(inputs: &AnalyzeInputs<'_>) -> Result<(Report, Vec<PlotSeries>), CliError> {
    let config = inputs.config;
    let method = inputs.method_override.unwrap_or(config.fuzzy.method);
    let trials = inputs.trials_override.unwrap_or(config.simulation.trials);
    let seed = inputs.seed_override.unwrap_or(config.simulation.seed);
    let grid = uniform_alpha_grid(config.fuzzy.alpha_levels);

    let mut notes = vec![SCALE_NOTE.to_string()];
    if inputs.rates_override.is_some() {
        notes.push(OVERRIDE_NOTE.to_string());
    }

    let mut configurations = Vec::with_capacity(config.redundancy.len());
    let mut series = Vec::with_capacity(config.redundancy.len());
    for (index, entry) in config.redundancy.iter().enumerate() {
        let variant = inputs.variant_override.unwrap_or(entry.formula_variant);
        let coverage = entry
            .coverage_tfn()
            .map_err(|e| CliError::Config(format!("redundancy[{index}].coverage: {e}")))?;

        let (lambda2, lambda1, rates_source) = match &inputs.rates_override {
            Some((l2, l1)) => (l2.clone(), l1.clone(), "override"),
            None => {
                let profile = inputs.profile.ok_or_else(|| {
                    CliError::Config(
                        "either --profile or --rates-override must be given".into(),
                    )
                })?;
                let (l2, l1, over_limit) =
                    entry_totals(config, profile, entry, variant, method)?;
                if over_limit > 0 {
                    notes.push(format!(
                        "configuration {index} ({}): junction temperature exceeds {} C in \
                         {over_limit} state/mode evaluations",
                        entry.kind, config.converter.tj_limit_c
                    ));
                }
                (l2, l1, "mission-profile")
            }
        };

        let alpha_cut = fuzzy_mttf_on_grid(&lambda2, &lambda1, &coverage, FuzzyMethod::AlphaCut, &grid)
            .map_err(numeric_err("fuzzy MTTF (alpha-cut)"))?;
        let vertex = fuzzy_mttf_on_grid(&lambda2, &lambda1, &coverage, FuzzyMethod::Vertex, &grid)
            .map_err(numeric_err("fuzzy MTTF (vertex)"))?;

        let chain = build_chain(2, &[lambda1.b(), lambda2.b()], coverage.b())
            .map_err(numeric_err("chain at membership peaks"))?;
        let sim = simulate_mttf(&chain, trials, seed).map_err(numeric_err("simulation"))?;
        let analytic_peak = mttf_closed_form(lambda2.b(), lambda1.b(), coverage.b())
            .map_err(numeric_err("closed-form MTTF"))?;

        let chosen: &FuzzyMttf = match method {
            FuzzyMethod::AlphaCut => &alpha_cut,
            FuzzyMethod::Vertex => &vertex,
        };
        series.push(PlotSeries {
            name: format!("{index}_{}", entry.kind),
            points: chosen.curve().points().to_vec(),
        });

        configurations.push(ConfigurationReport {
            kind: entry.kind.to_string(),
            formula_variant: variant.to_string(),
            rates_source: rates_source.to_string(),
            coverage: TfnJson::from(&coverage),
            lambda_mode2_per_year: TfnJson::from(&lambda2),
            lambda_mode1_per_year: TfnJson::from(&lambda1),
            mttf_alpha_cut: MttfJson::from(&alpha_cut),
            mttf_vertex: MttfJson::from(&vertex),
            monte_carlo: McJson::new(&sim, analytic_peak),
        });
    }

    let report = Report {
        schema: REPORT_SCHEMA,
        provenance: Provenance {
            tool: "relfuzz".to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            config_sha256: inputs.config_sha256.to_string(),
            profile_sha256: inputs.profile_sha256.map(str::to_string),
            rng: RNG_NAME.to_string(),
            seed,
            method: method.to_string(),
            alpha_levels: config.fuzzy.alpha_levels,
        },
        profile: inputs.profile.map(|p| ProfileReport {
            states: p
                .states()
                .iter()
                .map(|s| StateReport {
                    t_ambient_c: s.t_ambient_c.into(),
                    power_w: s.power_w.into(),
                    probability: s.probability.into(),
                })
                .collect(),
        }),
        configurations,
        notes,
    };
    Ok((report, series))
}

pub struct SimulateOutcome {
    pub lambda2_peak: f64,
    pub lambda1_peak: f64,
    pub coverage_peak: f64,
    pub analytic: f64,
    pub sim: relfuzz::simulate::SimResult,
}

pub fn simulate_peak_chain(
    config: &RunConfig,
    profile: Option<&MissionProfile>,
    rates_override: Option<(Tfn, Tfn)>,
    trials: u64,
    seed: u64,
) -> Result<SimulateOutcome, CliError> {
    let entry = &config.redundancy[0];
    let (lambda2, lambda1) = match rates_override {
        Some(pair) => pair,
        None => {
            let profile = profile.ok_or_else(|| {
                CliError::Config("either --profile or --rates-override must be given".into())
            })?;
            let (l2, l1, _) =
                entry_totals(config, profile, entry, entry.formula_variant, config.fuzzy.method)?;
            (l2, l1)
        }
    };
    let coverage = entry
        .coverage_tfn()
        .map_err(|e| CliError::Config(format!("redundancy[0].coverage: {e}")))?;
    let chain = build_chain(2, &[lambda1.b(), lambda2.b()], coverage.b())
        .map_err(numeric_err("chain at membership peaks"))?;
    let sim = simulate_mttf(&chain, trials, seed).map_err(numeric_err("simulation"))?;
    let analytic = mttf_closed_form(lambda2.b(), lambda1.b(), coverage.b())
        .map_err(numeric_err("closed-form MTTF"))?;
    Ok(SimulateOutcome {
        lambda2_peak: lambda2.b(),
        lambda1_peak: lambda1.b(),
        coverage_peak: coverage.b(),
        analytic,
        sim,
    })
}
