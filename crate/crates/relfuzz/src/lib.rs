//! Fuzzy lifetime analysis of fault-tolerant multi-phase converters.
//!
//! The crate chains five layers:
//!
//! 1. [`mission`] — clustered ambient-temperature/power operating profiles,
//! 2. [`failure`] — part-stress fuzzy failure rates per profile state,
//! 3. [`redundancy`] — equivalent rates of parallel / standby switch cells,
//! 4. [`markov`] — absorbing-chain MTTF (closed-form and numeric) and
//!    reliability curves,
//! 5. [`simulate`] — Monte Carlo absorption-time cross-checks,
//!
//! with [`fuzzy`] providing the triangular-fuzzy-number plumbing used
//! throughout: vertex arithmetic, alpha-cut propagation, membership curves,
//! and centroid defuzzification.

pub mod failure;
pub mod fuzzy;
pub mod markov;
pub mod mission;
pub mod redundancy;
pub mod simulate;

/// Hours in a (non-leap) year, used to move rates between the
/// failures-per-10^6-hours scale of part-stress models and the
/// failures-per-year scale of the Markov layer.
pub const HOURS_PER_YEAR: f64 = 8760.0;

/// Multiplier taking a rate in failures/10^6 h to failures/year.
pub const PER_MILLION_HOURS_TO_PER_YEAR: f64 = HOURS_PER_YEAR / 1.0e6;
