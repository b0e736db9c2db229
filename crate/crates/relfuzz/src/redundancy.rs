//! Equivalent fuzzy failure rates of a redundant switch cell and the
//! profile-weighted per-mode totals built from them.
//!
//! The parallel-cell rate exists in two variants. `AsPrinted` evaluates
//! `2λ̃_H / (1 + 2 λ̃_F P̃_C)`, which mixes a dimensionless 1 with a
//! rate-times-probability term; it is kept selectable for comparison with
//! sources that state it in that form. `Consistent` — the default — is the
//! inverse MTTF of a covered hot pair, `2 λ̃_H λ̃_F / (λ̃_F + 2 λ̃_H P̃_C)`,
//! which is dimensionally sound and reduces to the same value whenever
//! λ̃_F = 1 in the working rate unit. The standby cell uses
//! `λ̃_F / (1 + P̃_C)`.

use crate::failure::StateModeRates;
use crate::fuzzy::{alpha_bounds, BoxSearch, FuzzyError, FuzzyMethod, Tfn, Unit};
use crate::mission::{aggregate_rate, MissionProfile, ProfileError};
use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

/// Redundant-cell topology.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RedundancyKind {
    /// Both switches conduct; either alone sustains the phase.
    Parallel,
    /// A cold spare engages after the primary's covered failure.
    Standby,
}

impl fmt::Display for RedundancyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RedundancyKind::Parallel => f.write_str("parallel"),
            RedundancyKind::Standby => f.write_str("standby"),
        }
    }
}

/// Which parallel-cell formula to evaluate (see the module docs).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FormulaVariant {
    AsPrinted,
    #[default]
    Consistent,
}

impl fmt::Display for FormulaVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormulaVariant::AsPrinted => f.write_str("as-printed"),
            FormulaVariant::Consistent => f.write_str("consistent"),
        }
    }
}

/// Errors from equivalent-rate evaluation and aggregation.
#[derive(Debug, Error)]
pub enum RedundancyError {
    #[error("coverage must lie within [0, 1], got support [{a}, {c}]")]
    CoverageRange { a: f64, c: f64 },
    #[error("{which} must have strictly positive support, got left vertex {a}")]
    NonPositiveRate { which: &'static str, a: f64 },
    #[error("state {state_index} has no rates for mode {mode_k}")]
    MissingStateMode { state_index: usize, mode_k: u32 },
    #[error("state {state_index} appears twice for mode {mode_k}")]
    DuplicateStateMode { state_index: usize, mode_k: u32 },
    #[error("rates carry unexpected operation mode {mode_k} (expected 1 or 2)")]
    UnexpectedMode { mode_k: u32 },
    #[error("state index {state_index} outside profile of {states} states")]
    StateIndexOutOfRange { state_index: usize, states: usize },
    #[error(transparent)]
    Fuzzy(#[from] FuzzyError),
    #[error(transparent)]
    Profile(#[from] ProfileError),
}

/// Cell topology, fault-manager coverage, and formula choice for one run.
#[derive(Clone, Debug, PartialEq)]
pub struct RedundancyConfig {
    kind: RedundancyKind,
    coverage: Tfn,
    variant: FormulaVariant,
}

impl RedundancyConfig {
    pub fn new(
        kind: RedundancyKind,
        coverage: Tfn,
        variant: FormulaVariant,
    ) -> Result<RedundancyConfig, RedundancyError> {
        validate_coverage(&coverage)?;
        Ok(RedundancyConfig { kind, coverage, variant })
    }

    pub fn kind(&self) -> RedundancyKind {
        self.kind
    }

    pub fn coverage(&self) -> &Tfn {
        &self.coverage
    }

    pub fn variant(&self) -> FormulaVariant {
        self.variant
    }
}

/// Profile-weighted equivalent rates per operation mode.
#[derive(Clone, Debug, PartialEq)]
pub struct ModeRates {
    lambda_mode2: Tfn,
    lambda_mode1: Tfn,
    config: RedundancyConfig,
}

impl ModeRates {
    /// Total equivalent rate while both phases run.
    pub fn lambda_mode2(&self) -> &Tfn {
        &self.lambda_mode2
    }

    /// Total equivalent rate in derated single-phase operation.
    pub fn lambda_mode1(&self) -> &Tfn {
        &self.lambda_mode1
    }

    pub fn config(&self) -> &RedundancyConfig {
        &self.config
    }
}

fn validate_coverage(coverage: &Tfn) -> Result<(), RedundancyError> {
    if coverage.a() < 0.0 || coverage.c() > 1.0 {
        return Err(RedundancyError::CoverageRange { a: coverage.a(), c: coverage.c() });
    }
    Ok(())
}

fn validate_rate(rate: &Tfn, which: &'static str) -> Result<(), RedundancyError> {
    if rate.a() <= 0.0 {
        return Err(RedundancyError::NonPositiveRate { which, a: rate.a() });
    }
    Ok(())
}

fn as_printed_parallel(v: &[f64]) -> f64 {
    2.0 * v[0] / (1.0 + 2.0 * v[1] * v[2])
}

fn consistent_parallel(v: &[f64]) -> f64 {
    2.0 * v[0] * v[1] / (v[1] + 2.0 * v[0] * v[2])
}

fn standby_formula(v: &[f64]) -> f64 {
    v[0] / (1.0 + v[1])
}

/// TFN summary of a coordinate-wise monotone formula: support from the
/// alpha-0 corner bounds, peak from the alpha-1 point.
fn summary_from_bounds(
    f: fn(&[f64]) -> f64,
    inputs: &[Tfn],
    unit: Unit,
) -> Result<Tfn, RedundancyError> {
    let support = alpha_bounds(&f, inputs, 0.0, BoxSearch::Corners)?;
    let peak = alpha_bounds(&f, inputs, 1.0, BoxSearch::Corners)?;
    Ok(Tfn::new(support.lo(), peak.lo(), support.hi(), unit)?)
}

fn dimensionless(t: &Tfn) -> Tfn {
    t.with_unit(Unit::DIMENSIONLESS)
}

/// Equivalent rate of a redundant parallel pair under fuzzy coverage.
pub fn equivalent_rate_parallel(
    lambda_h: &Tfn,
    lambda_f: &Tfn,
    coverage: &Tfn,
    variant: FormulaVariant,
    method: FuzzyMethod,
) -> Result<Tfn, RedundancyError> {
    validate_rate(lambda_h, "lambda_h")?;
    validate_rate(lambda_f, "lambda_f")?;
    validate_coverage(coverage)?;
    let unit = lambda_h.unit().clone();
    match method {
        FuzzyMethod::AlphaCut => {
            let f = match variant {
                FormulaVariant::AsPrinted => as_printed_parallel,
                FormulaVariant::Consistent => consistent_parallel,
            };
            let inputs = [lambda_h.clone(), lambda_f.clone(), coverage.clone()];
            summary_from_bounds(f, &inputs, unit)
        }
        FuzzyMethod::Vertex => {
            let h = dimensionless(lambda_h);
            let lf = dimensionless(lambda_f);
            let pc = dimensionless(coverage);
            let one = Tfn::crisp(1.0, Unit::DIMENSIONLESS)?;
            let out = match variant {
                FormulaVariant::AsPrinted => {
                    let den = one.add(&lf.scale(2.0)?.mul(&pc)?)?;
                    h.scale(2.0)?.div(&den)?
                }
                FormulaVariant::Consistent => {
                    let den = lf.add(&h.scale(2.0)?.mul(&pc)?)?;
                    h.mul(&lf)?.scale(2.0)?.div(&den)?
                }
            };
            Ok(out.with_unit(unit))
        }
    }
}

/// Equivalent rate of a cold-standby cell under fuzzy coverage.
pub fn equivalent_rate_standby(
    lambda_f: &Tfn,
    coverage: &Tfn,
    method: FuzzyMethod,
) -> Result<Tfn, RedundancyError> {
    validate_rate(lambda_f, "lambda_f")?;
    validate_coverage(coverage)?;
    let unit = lambda_f.unit().clone();
    match method {
        FuzzyMethod::AlphaCut => {
            let inputs = [lambda_f.clone(), coverage.clone()];
            summary_from_bounds(standby_formula, &inputs, unit)
        }
        FuzzyMethod::Vertex => {
            let one = Tfn::crisp(1.0, Unit::DIMENSIONLESS)?;
            let den = one.add(&dimensionless(coverage))?;
            Ok(dimensionless(lambda_f).div(&den)?.with_unit(unit))
        }
    }
}

fn equivalent_rate(
    rates: &StateModeRates,
    config: &RedundancyConfig,
    method: FuzzyMethod,
) -> Result<Tfn, RedundancyError> {
    match config.kind {
        RedundancyKind::Parallel => equivalent_rate_parallel(
            &rates.lambda_h,
            &rates.lambda_f,
            &config.coverage,
            config.variant,
            method,
        ),
        RedundancyKind::Standby => {
            equivalent_rate_standby(&rates.lambda_f, &config.coverage, method)
        }
    }
}

/// Profile-weighted cell rates per operation mode: applies the equivalent
/// rate state by state, then the mission-weighted sum, separately for the
/// two-phase and one-phase modes. `per_state` must hold exactly one entry
/// per (state, mode) pair for modes 1 and 2.
pub fn mode_totals(
    profile: &MissionProfile,
    per_state: &[StateModeRates],
    config: &RedundancyConfig,
    method: FuzzyMethod,
) -> Result<ModeRates, RedundancyError> {
    let n = profile.len();
    let mut by_mode: [Vec<Option<&StateModeRates>>; 2] = [vec![None; n], vec![None; n]];
    for rates in per_state {
        let slot = match rates.mode_k {
            1 => &mut by_mode[0],
            2 => &mut by_mode[1],
            other => return Err(RedundancyError::UnexpectedMode { mode_k: other }),
        };
        if rates.state_index >= n {
            return Err(RedundancyError::StateIndexOutOfRange {
                state_index: rates.state_index,
                states: n,
            });
        }
        if slot[rates.state_index].is_some() {
            return Err(RedundancyError::DuplicateStateMode {
                state_index: rates.state_index,
                mode_k: rates.mode_k,
            });
        }
        slot[rates.state_index] = Some(rates);
    }

    let mut totals = Vec::with_capacity(2);
    for (mode_k, slots) in [(1u32, &by_mode[0]), (2u32, &by_mode[1])] {
        let mut state_rates = Vec::with_capacity(n);
        for (state_index, slot) in slots.iter().enumerate() {
            let rates =
                slot.ok_or(RedundancyError::MissingStateMode { state_index, mode_k })?;
            state_rates.push(equivalent_rate(rates, config, method)?);
        }
        totals.push(aggregate_rate(profile, &state_rates)?);
    }
    let lambda_mode2 = totals.pop().expect("two modes aggregated");
    let lambda_mode1 = totals.pop().expect("two modes aggregated");
    Ok(ModeRates { lambda_mode2, lambda_mode1, config: config.clone() })
}
