//! Part-stress fuzzy failure rates. A base fuzzy rate is scaled by crisp
//! quality/application/environment factors and a temperature factor driven
//! by the switch junction temperature, which in turn follows from the
//! mission state's ambient temperature and the conduction/switching losses
//! of the devices sharing the load.
//!
//! Each mission state and operation mode yields two rates: the healthy-path
//! rate (devices share current as designed) and the faulty-path rate (one
//! device carries the full phase current after its partner failed).

use crate::fuzzy::{FuzzyError, Tfn};
use crate::mission::MissionState;
use thiserror::Error;

/// Crisp part-stress multipliers: quality, application, environment.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StressFactors {
    pi_q: f64,
    pi_a: f64,
    pi_e: f64,
}

impl StressFactors {
    pub fn new(pi_q: f64, pi_a: f64, pi_e: f64) -> Result<StressFactors, FailureError> {
        for (name, value) in [("pi_q", pi_q), ("pi_a", pi_a), ("pi_e", pi_e)] {
            if !value.is_finite() || value <= 0.0 {
                return Err(FailureError::NonPositiveParam { name, value });
            }
        }
        Ok(StressFactors { pi_q, pi_a, pi_e })
    }

    /// Unit factors: no quality/application/environment derating.
    pub fn unity() -> StressFactors {
        StressFactors { pi_q: 1.0, pi_a: 1.0, pi_e: 1.0 }
    }

    pub fn product(&self) -> f64 {
        self.pi_q * self.pi_a * self.pi_e
    }
}

/// Default junction-temperature limit flagged by the thermal model, °C.
pub const DEFAULT_TJ_LIMIT_C: f64 = 175.0;

/// Converter electrical and thermal parameters of one switch position.
///
/// `e_sw_j` is the switching energy per cycle at the reference current
/// `i_ref_a`; the switching loss is linearized as `e_sw·f_sw·(I/I_ref)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThermalElectricalParams {
    pub v_in_v: f64,
    pub v_out_v: f64,
    pub r_ds_on_ohm: f64,
    pub e_sw_j: f64,
    pub f_sw_hz: f64,
    pub r_th_ja_c_per_w: f64,
    pub i_ref_a: f64,
    pub tj_limit_c: f64,
}

impl ThermalElectricalParams {
    pub fn validated(self) -> Result<ThermalElectricalParams, FailureError> {
        if !(self.v_in_v.is_finite() && self.v_out_v.is_finite())
            || self.v_in_v <= 0.0
            || self.v_out_v <= self.v_in_v
        {
            return Err(FailureError::InvalidVoltages {
                v_in_v: self.v_in_v,
                v_out_v: self.v_out_v,
            });
        }
        for (name, value) in [
            ("r_ds_on_ohm", self.r_ds_on_ohm),
            ("r_th_ja_c_per_w", self.r_th_ja_c_per_w),
            ("i_ref_a", self.i_ref_a),
            ("tj_limit_c", self.tj_limit_c),
        ] {
            if !value.is_finite() || value <= 0.0 {
                return Err(FailureError::NonPositiveParam { name, value });
            }
        }
        // zero is meaningful here: a run without switching loss
        for (name, value) in [("e_sw_j", self.e_sw_j), ("f_sw_hz", self.f_sw_hz)] {
            if !value.is_finite() || value < 0.0 {
                return Err(FailureError::NegativeParam { name, value });
            }
        }
        Ok(self)
    }

    /// Boost duty cycle `1 − v_in/v_out`.
    pub fn duty(&self) -> f64 {
        1.0 - self.v_in_v / self.v_out_v
    }
}

/// Errors from model construction and rate evaluation.
#[derive(Debug, Error, PartialEq)]
pub enum FailureError {
    #[error("`{name}` must be a positive finite number, got {value}")]
    NonPositiveParam { name: &'static str, value: f64 },
    #[error("`{name}` must be a nonnegative finite number, got {value}")]
    NegativeParam { name: &'static str, value: f64 },
    #[error("voltages must satisfy 0 < v_in_v < v_out_v, got v_in_v={v_in_v}, v_out_v={v_out_v}")]
    InvalidVoltages { v_in_v: f64, v_out_v: f64 },
    #[error("base failure rate must have strictly positive support, got left vertex {a}")]
    NonPositiveBaseRate { a: f64 },
    #[error("at least one device must share the load")]
    ZeroPhases,
    #[error("operation mode must have at least one running phase")]
    ZeroMode,
    #[error(transparent)]
    Fuzzy(#[from] FuzzyError),
}

/// Fuzzy base rate plus the crisp stress context it is scaled by.
#[derive(Clone, Debug, PartialEq)]
pub struct FailureModel {
    lambda_b: Tfn,
    factors: StressFactors,
    thermal: ThermalElectricalParams,
}

impl FailureModel {
    pub fn new(
        lambda_b: Tfn,
        factors: StressFactors,
        thermal: ThermalElectricalParams,
    ) -> Result<FailureModel, FailureError> {
        if lambda_b.a() <= 0.0 {
            return Err(FailureError::NonPositiveBaseRate { a: lambda_b.a() });
        }
        let thermal = thermal.validated()?;
        Ok(FailureModel { lambda_b, factors, thermal })
    }

    pub fn lambda_b(&self) -> &Tfn {
        &self.lambda_b
    }

    pub fn factors(&self) -> &StressFactors {
        &self.factors
    }

    pub fn thermal(&self) -> &ThermalElectricalParams {
        &self.thermal
    }
}

/// Junction temperature with the over-limit flag (informative, not fatal).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JunctionTemp {
    pub celsius: f64,
    pub exceeds_limit: bool,
}

/// Steady-state junction temperature of one device when `phases_sharing`
/// devices split the converter input current.
///
/// `Tj = T_amb + R_th_ja · (R_ds_on·D·I² + E_sw·f_sw·I/I_ref)` with
/// per-device current `I = P/(phases_sharing·v_in)` and boost duty
/// `D = 1 − v_in/v_out`.
pub fn junction_temperature(
    state: &MissionState,
    phases_sharing: u32,
    params: &ThermalElectricalParams,
) -> Result<JunctionTemp, FailureError> {
    if phases_sharing == 0 {
        return Err(FailureError::ZeroPhases);
    }
    let params = params.validated()?;
    let current = state.power_w / (phases_sharing as f64 * params.v_in_v);
    let conduction = params.r_ds_on_ohm * params.duty() * current * current;
    let switching = params.e_sw_j * params.f_sw_hz * current / params.i_ref_a;
    let celsius = state.t_ambient_c + params.r_th_ja_c_per_w * (conduction + switching);
    Ok(JunctionTemp { celsius, exceeds_limit: celsius > params.tj_limit_c })
}

/// Arrhenius temperature factor, normalized to 1 at a 25 °C junction:
/// `exp(−1925·(1/(Tj+273) − 1/298))`. Strictly increasing in `tj_c`,
/// which must stay above absolute zero.
pub fn pi_t(tj_c: f64) -> f64 {
    debug_assert!(tj_c > -273.0, "junction temperature below absolute zero");
    (-1925.0 * (1.0 / (tj_c + 273.0) - 1.0 / 298.0)).exp()
}

/// How the healthy redundant cell carries the phase current.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConductionSharing {
    /// Both devices of the cell conduct, each carrying half the phase
    /// current (parallel cell).
    RedundantPair,
    /// One device conducts at the design rating; its partner is idle
    /// (standby cell).
    SingleDevice,
}

/// Healthy- and faulty-path fuzzy rates of one mission state in one
/// operation mode.
#[derive(Clone, Debug, PartialEq)]
pub struct StateModeRates {
    pub state_index: usize,
    pub mode_k: u32,
    pub lambda_h: Tfn,
    pub lambda_f: Tfn,
    pub tj_h_c: f64,
    pub tj_f_c: f64,
    pub over_tj_limit: bool,
}

/// Evaluates both stress paths of one state in mode `mode_k` (the number of
/// phases still running; each carries `power/mode_k`).
pub fn state_mode_rates(
    model: &FailureModel,
    state: &MissionState,
    state_index: usize,
    mode_k: u32,
    sharing: ConductionSharing,
) -> Result<StateModeRates, FailureError> {
    if mode_k == 0 {
        return Err(FailureError::ZeroMode);
    }
    let healthy_devices = match sharing {
        ConductionSharing::RedundantPair => 2 * mode_k,
        ConductionSharing::SingleDevice => mode_k,
    };
    let tj_h = junction_temperature(state, healthy_devices, model.thermal())?;
    let tj_f = junction_temperature(state, mode_k, model.thermal())?;
    let base = model.factors().product();
    let lambda_h = model.lambda_b().scale(base * pi_t(tj_h.celsius))?;
    let lambda_f = model.lambda_b().scale(base * pi_t(tj_f.celsius))?;
    Ok(StateModeRates {
        state_index,
        mode_k,
        lambda_h,
        lambda_f,
        tj_h_c: tj_h.celsius,
        tj_f_c: tj_f.celsius,
        over_tj_limit: tj_h.exceeds_limit || tj_f.exceeds_limit,
    })
}
