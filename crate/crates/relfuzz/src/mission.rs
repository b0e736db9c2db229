//! Mission-profile handling: loading a probability-weighted set of
//! (ambient temperature, output power) operating states, clustering raw
//! telemetry into such a profile, and the profile-weighted sum that turns
//! per-state fuzzy rates into a single duty-cycle-averaged rate.

use crate::fuzzy::{FuzzyError, Tfn};
use serde::Deserialize;
use std::path::Path;
use thiserror::Error;

/// One operating state: an ambient temperature and output power level the
/// converter spends `probability` of its mission time in.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MissionState {
    pub t_ambient_c: f64,
    pub power_w: f64,
    pub probability: f64,
}

/// Ambient-temperature range accepted by default, in °C.
pub const DEFAULT_AMBIENT_RANGE_C: (f64, f64) = (-40.0, 85.0);

/// How much the probability column may drift from 1 before loading fails
/// instead of normalizing.
pub const NORMALIZATION_TOLERANCE: f64 = 0.01;

const PROBABILITY_SUM_TOLERANCE: f64 = 1e-9;

/// Errors from profile loading, clustering, and aggregation.
#[derive(Debug, Error)]
pub enum ProfileError {
    #[error("failed to read table: {0}")]
    Csv(#[from] csv::Error),
    #[error("missing column `{column}`")]
    MissingColumn { column: &'static str },
    #[error("profile contains no states")]
    Empty,
    #[error("state {index}: value for `{field}` is not finite")]
    NonFinite { index: usize, field: &'static str },
    #[error("state {index}: probability {value} is negative")]
    NegativeProbability { index: usize, value: f64 },
    #[error("state {index}: power_w {value} is negative")]
    NegativePower { index: usize, value: f64 },
    #[error("state {index}: t_ambient_c {value} outside [{lo}, {hi}]")]
    AmbientOutOfRange { index: usize, value: f64, lo: f64, hi: f64 },
    #[error("probabilities sum to {sum}, expected 1 (±{tolerance})")]
    ProbabilitySum { sum: f64, tolerance: f64 },
    #[error("states {first} and {second} share the same (t_ambient_c, power_w) pair")]
    DuplicateState { first: usize, second: usize },
    #[error("profile has {states} states but {rates} rates were supplied")]
    RateCountMismatch { states: usize, rates: usize },
    #[error("no telemetry samples to cluster")]
    NoSamples,
    #[error("bin edges must be finite, strictly increasing, and at least two")]
    BadEdges,
    #[error("sample {index} ({t_ambient_c} °C, {power_w} W) lies outside the bin edges")]
    SampleOutOfRange { index: usize, t_ambient_c: f64, power_w: f64 },
    #[error(transparent)]
    Fuzzy(#[from] FuzzyError),
}

/// Validated mission profile: at least one state, probabilities summing
/// to 1, no duplicated operating points.
#[derive(Clone, Debug, PartialEq)]
pub struct MissionProfile {
    states: Vec<MissionState>,
}

impl MissionProfile {
    /// Validates against the default ambient range.
    pub fn new(states: Vec<MissionState>) -> Result<MissionProfile, ProfileError> {
        let (lo, hi) = DEFAULT_AMBIENT_RANGE_C;
        MissionProfile::with_ambient_range(states, lo, hi)
    }

    /// Validates with an explicit physical ambient range in °C.
    pub fn with_ambient_range(
        states: Vec<MissionState>,
        ambient_lo_c: f64,
        ambient_hi_c: f64,
    ) -> Result<MissionProfile, ProfileError> {
        if states.is_empty() {
            return Err(ProfileError::Empty);
        }
        for (index, s) in states.iter().enumerate() {
            validate_state(s, index, ambient_lo_c, ambient_hi_c)?;
        }
        for i in 0..states.len() {
            for j in (i + 1)..states.len() {
                if states[i].t_ambient_c == states[j].t_ambient_c
                    && states[i].power_w == states[j].power_w
                {
                    return Err(ProfileError::DuplicateState { first: i, second: j });
                }
            }
        }
        let sum: f64 = states.iter().map(|s| s.probability).sum();
        if (sum - 1.0).abs() > PROBABILITY_SUM_TOLERANCE {
            return Err(ProfileError::ProbabilitySum {
                sum,
                tolerance: PROBABILITY_SUM_TOLERANCE,
            });
        }
        Ok(MissionProfile { states })
    }

    pub fn states(&self) -> &[MissionState] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }
}

fn validate_state(
    s: &MissionState,
    index: usize,
    ambient_lo_c: f64,
    ambient_hi_c: f64,
) -> Result<(), ProfileError> {
    for (field, value) in [
        ("t_ambient_c", s.t_ambient_c),
        ("power_w", s.power_w),
        ("probability", s.probability),
    ] {
        if !value.is_finite() {
            return Err(ProfileError::NonFinite { index, field });
        }
    }
    if s.probability < 0.0 {
        return Err(ProfileError::NegativeProbability { index, value: s.probability });
    }
    if s.power_w < 0.0 {
        return Err(ProfileError::NegativePower { index, value: s.power_w });
    }
    if s.t_ambient_c < ambient_lo_c || s.t_ambient_c > ambient_hi_c {
        return Err(ProfileError::AmbientOutOfRange {
            index,
            value: s.t_ambient_c,
            lo: ambient_lo_c,
            hi: ambient_hi_c,
        });
    }
    Ok(())
}

#[derive(Debug, Deserialize)]
struct ProfileRow {
    t_ambient_c: f64,
    power_w: f64,
    probability: f64,
}

#[derive(Debug, Deserialize)]
struct TelemetryRow {
    #[allow(dead_code)]
    timestamp: String,
    t_ambient_c: f64,
    power_w: f64,
}

fn require_columns(
    headers: &csv::StringRecord,
    required: &[&'static str],
) -> Result<(), ProfileError> {
    for &column in required {
        if !headers.iter().any(|h| h == column) {
            return Err(ProfileError::MissingColumn { column });
        }
    }
    Ok(())
}

/// Loads a mission-profile CSV (`t_ambient_c,power_w,probability`).
///
/// Probabilities off from 1 by at most [`NORMALIZATION_TOLERANCE`] are
/// rescaled to sum to 1; larger deviations are an error.
pub fn load_profile(path: impl AsRef<Path>) -> Result<MissionProfile, ProfileError> {
    let mut reader = csv::Reader::from_path(path)?;
    require_columns(reader.headers()?, &["t_ambient_c", "power_w", "probability"])?;
    let mut states = Vec::new();
    for row in reader.deserialize() {
        let row: ProfileRow = row?;
        states.push(MissionState {
            t_ambient_c: row.t_ambient_c,
            power_w: row.power_w,
            probability: row.probability,
        });
    }
    if states.is_empty() {
        return Err(ProfileError::Empty);
    }
    let (lo, hi) = DEFAULT_AMBIENT_RANGE_C;
    for (index, s) in states.iter().enumerate() {
        validate_state(s, index, lo, hi)?;
    }
    let sum: f64 = states.iter().map(|s| s.probability).sum();
    if (sum - 1.0).abs() > NORMALIZATION_TOLERANCE {
        return Err(ProfileError::ProbabilitySum { sum, tolerance: NORMALIZATION_TOLERANCE });
    }
    for s in &mut states {
        s.probability /= sum;
    }
    MissionProfile::new(states)
}

/// Loads telemetry (`timestamp,t_ambient_c,power_w`) as (temperature, power)
/// samples; the timestamp column is required but not interpreted.
pub fn load_telemetry(path: impl AsRef<Path>) -> Result<Vec<(f64, f64)>, ProfileError> {
    let mut reader = csv::Reader::from_path(path)?;
    require_columns(reader.headers()?, &["timestamp", "t_ambient_c", "power_w"])?;
    let mut samples = Vec::new();
    for (index, row) in reader.deserialize().enumerate() {
        let row: TelemetryRow = row?;
        if !row.t_ambient_c.is_finite() {
            return Err(ProfileError::NonFinite { index, field: "t_ambient_c" });
        }
        if !row.power_w.is_finite() {
            return Err(ProfileError::NonFinite { index, field: "power_w" });
        }
        samples.push((row.t_ambient_c, row.power_w));
    }
    Ok(samples)
}

/// What to do with telemetry samples that fall outside the outermost bin
/// edges.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum OutOfRange {
    /// Fail with [`ProfileError::SampleOutOfRange`].
    #[default]
    Reject,
    /// Move the sample into the nearest boundary bin.
    Clamp,
}

/// Equally spaced bin edges aligned to multiples of `width`, covering
/// `[lo, hi]`.
pub fn edges_covering(lo: f64, hi: f64, width: f64) -> Result<Vec<f64>, ProfileError> {
    if !(lo.is_finite() && hi.is_finite() && width.is_finite()) || width <= 0.0 || lo > hi {
        return Err(ProfileError::BadEdges);
    }
    let start = (lo / width).floor() * width;
    let mut end = (hi / width).ceil() * width;
    if end <= start {
        end = start + width;
    }
    let bins = ((end - start) / width).round() as usize;
    Ok((0..=bins).map(|i| start + i as f64 * width).collect())
}

fn bin_index(edges: &[f64], value: f64, policy: OutOfRange) -> Option<usize> {
    let last = edges.len() - 1;
    if value < edges[0] || value > edges[last] {
        return match policy {
            OutOfRange::Reject => None,
            OutOfRange::Clamp => Some(if value < edges[0] { 0 } else { last - 1 }),
        };
    }
    // half-open bins [e_i, e_{i+1}), except the final bin which is closed
    let idx = edges.partition_point(|&e| e <= value);
    Some(idx.min(last) - 1)
}

/// Clusters telemetry into a mission profile over a 2-D histogram: every
/// non-empty bin becomes a state at the bin midpoint, weighted by its share
/// of the samples. The last state's probability absorbs the rounding
/// residual so the profile sums to 1 exactly.
pub fn cluster_telemetry(
    samples: &[(f64, f64)],
    t_edges: &[f64],
    p_edges: &[f64],
    policy: OutOfRange,
) -> Result<MissionProfile, ProfileError> {
    if samples.is_empty() {
        return Err(ProfileError::NoSamples);
    }
    for edges in [t_edges, p_edges] {
        if edges.len() < 2
            || edges.iter().any(|e| !e.is_finite())
            || edges.windows(2).any(|w| w[0] >= w[1])
        {
            return Err(ProfileError::BadEdges);
        }
    }
    let t_bins = t_edges.len() - 1;
    let p_bins = p_edges.len() - 1;
    let mut counts = vec![0u64; t_bins * p_bins];
    for (index, &(t, p)) in samples.iter().enumerate() {
        let bins = if t.is_finite() && p.is_finite() {
            bin_index(t_edges, t, policy).zip(bin_index(p_edges, p, policy))
        } else {
            None
        };
        let (ti, pi) = bins.ok_or(ProfileError::SampleOutOfRange {
            index,
            t_ambient_c: t,
            power_w: p,
        })?;
        counts[ti * p_bins + pi] += 1;
    }

    let total = samples.len() as f64;
    let mut states = Vec::new();
    for ti in 0..t_bins {
        for pi in 0..p_bins {
            let count = counts[ti * p_bins + pi];
            if count == 0 {
                continue;
            }
            states.push(MissionState {
                t_ambient_c: 0.5 * (t_edges[ti] + t_edges[ti + 1]),
                power_w: 0.5 * (p_edges[pi] + p_edges[pi + 1]),
                probability: count as f64 / total,
            });
        }
    }
    let partial: f64 = states[..states.len() - 1].iter().map(|s| s.probability).sum();
    states.last_mut().expect("at least one bin").probability = (1.0 - partial).max(0.0);
    // bin midpoints can poke past the default ambient limits even when every
    // sample is inside them, so the admissible range follows the bins
    let lo = 0.5 * (t_edges[0] + t_edges[1]);
    let hi = 0.5 * (t_edges[t_bins - 1] + t_edges[t_bins]);
    MissionProfile::with_ambient_range(states, lo, hi)
}

/// Profile-weighted fuzzy rate: Σᵢ μᵢ·rateᵢ over the mission states.
pub fn aggregate_rate(
    profile: &MissionProfile,
    per_state_rates: &[Tfn],
) -> Result<Tfn, ProfileError> {
    if per_state_rates.len() != profile.len() {
        return Err(ProfileError::RateCountMismatch {
            states: profile.len(),
            rates: per_state_rates.len(),
        });
    }
    let mut total = per_state_rates[0].scale(profile.states()[0].probability)?;
    for (state, rate) in profile.states().iter().zip(per_state_rates).skip(1) {
        total = total.add(&rate.scale(state.probability)?)?;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fuzzy::Unit;
    use approx::assert_abs_diff_eq;
    use std::io::Write;

    fn state(t: f64, p: f64, mu: f64) -> MissionState {
        MissionState { t_ambient_c: t, power_w: p, probability: mu }
    }

    fn write_csv(content: &str) -> tempfile::NamedTempFile {
        let mut file = tempfile::NamedTempFile::new().unwrap();
        file.write_all(content.as_bytes()).unwrap();
        file
    }

    fn rate(a: f64, b: f64, c: f64) -> Tfn {
        Tfn::new(a, b, c, Unit::PER_YEAR).unwrap()
    }

    #[test]
    fn load_single_state_profile() {
        let file = write_csv("t_ambient_c,power_w,probability\n25,500,1.0\n");
        let profile = load_profile(file.path()).unwrap();
        assert_eq!(profile.states(), &[state(25.0, 500.0, 1.0)]);
    }

    #[test]
    fn load_keeps_exact_probabilities() {
        let file = write_csv("t_ambient_c,power_w,probability\n25,500,0.5\n40,800,0.5\n");
        let profile = load_profile(file.path()).unwrap();
        assert_eq!(profile.states()[0].probability, 0.5);
        assert_eq!(profile.states()[1].probability, 0.5);
    }

    #[test]
    fn load_normalizes_small_drift() {
        // 0.499 + 0.499 = 0.998, inside the 1% band; rescales to exactly 0.5
        let file = write_csv("t_ambient_c,power_w,probability\n25,500,0.499\n40,800,0.499\n");
        let profile = load_profile(file.path()).unwrap();
        assert_eq!(profile.states()[0].probability, 0.5);
        assert_eq!(profile.states()[1].probability, 0.5);
    }

    #[test]
    fn load_rejects_probability_sum_drift() {
        let file = write_csv(
            "t_ambient_c,power_w,probability\n25,500,0.3\n40,800,0.3\n55,900,0.3\n",
        );
        match load_profile(file.path()) {
            Err(ProfileError::ProbabilitySum { sum, .. }) => {
                assert_abs_diff_eq!(sum, 0.9, epsilon = 1e-12)
            }
            other => panic!("expected probability-sum error, got {other:?}"),
        }
    }

    #[test]
    fn load_rejects_missing_column_and_empty_file() {
        let file = write_csv("t_ambient_c,power_w\n25,500\n");
        assert!(matches!(
            load_profile(file.path()),
            Err(ProfileError::MissingColumn { column: "probability" })
        ));
        let file = write_csv("t_ambient_c,power_w,probability\n");
        assert!(matches!(load_profile(file.path()), Err(ProfileError::Empty)));
    }

    #[test]
    fn load_rejects_negative_probability() {
        let file = write_csv("t_ambient_c,power_w,probability\n25,500,1.2\n40,800,-0.2\n");
        assert!(matches!(
            load_profile(file.path()),
            Err(ProfileError::NegativeProbability { index: 1, .. })
        ));
    }

    #[test]
    fn profile_rejects_duplicates_and_out_of_range_ambient() {
        let dup = MissionProfile::new(vec![state(25.0, 500.0, 0.5), state(25.0, 500.0, 0.5)]);
        assert!(matches!(dup, Err(ProfileError::DuplicateState { first: 0, second: 1 })));
        let hot = MissionProfile::new(vec![state(90.0, 500.0, 1.0)]);
        assert!(matches!(hot, Err(ProfileError::AmbientOutOfRange { .. })));
        let wide =
            MissionProfile::with_ambient_range(vec![state(90.0, 500.0, 1.0)], -40.0, 125.0);
        assert!(wide.is_ok());
    }

    #[test]
    fn telemetry_loader_ignores_timestamps() {
        let file = write_csv(
            "timestamp,t_ambient_c,power_w\n2024-01-01T00:00:00Z,30,400\n2024-01-01T00:05:00Z,31,410\n",
        );
        let samples = load_telemetry(file.path()).unwrap();
        assert_eq!(samples, vec![(30.0, 400.0), (31.0, 410.0)]);
    }

    #[test]
    fn cluster_identical_samples_to_single_state() {
        let samples = vec![(30.0, 400.0); 4];
        let t_edges = [25.0, 35.0];
        let p_edges = [350.0, 450.0];
        let profile =
            cluster_telemetry(&samples, &t_edges, &p_edges, OutOfRange::Reject).unwrap();
        assert_eq!(profile.states(), &[state(30.0, 400.0, 1.0)]);
    }

    #[test]
    fn cluster_even_split_across_two_bins() {
        let samples = vec![(30.0, 400.0), (40.0, 400.0), (30.0, 410.0), (40.0, 410.0)];
        let t_edges = [25.0, 35.0, 45.0];
        let p_edges = [350.0, 450.0];
        let profile =
            cluster_telemetry(&samples, &t_edges, &p_edges, OutOfRange::Reject).unwrap();
        assert_eq!(
            profile.states(),
            &[state(30.0, 400.0, 0.5), state(40.0, 400.0, 0.5)]
        );
    }

    #[test]
    fn cluster_probabilities_sum_to_one_exactly() {
        // 1000 samples cycling through a 2x2 grid: each bin gets 250
        let mut samples = Vec::with_capacity(1000);
        for i in 0..1000 {
            let t = if i % 2 == 0 { 20.0 } else { 30.0 };
            let p = if (i / 2) % 2 == 0 { 100.0 } else { 300.0 };
            samples.push((t, p));
        }
        let t_edges = [15.0, 25.0, 35.0];
        let p_edges = [0.0, 200.0, 400.0];
        let profile =
            cluster_telemetry(&samples, &t_edges, &p_edges, OutOfRange::Reject).unwrap();
        assert_eq!(profile.len(), 4);
        for s in profile.states() {
            assert_abs_diff_eq!(s.probability, 0.25, epsilon = 1e-12);
        }
        let sum: f64 = profile.states().iter().map(|s| s.probability).sum();
        assert_eq!(sum, 1.0);
    }

    #[test]
    fn cluster_out_of_range_policies() {
        let samples = vec![(30.0, 400.0), (50.0, 400.0)];
        let t_edges = [25.0, 35.0];
        let p_edges = [350.0, 450.0];
        assert!(matches!(
            cluster_telemetry(&samples, &t_edges, &p_edges, OutOfRange::Reject),
            Err(ProfileError::SampleOutOfRange { index: 1, .. })
        ));
        let clamped =
            cluster_telemetry(&samples, &t_edges, &p_edges, OutOfRange::Clamp).unwrap();
        assert_eq!(clamped.states(), &[state(30.0, 400.0, 1.0)]);
    }

    #[test]
    fn cluster_boundary_sample_lands_in_upper_bin_and_last_edge_is_closed() {
        let samples = vec![(35.0, 400.0), (45.0, 400.0)];
        let t_edges = [25.0, 35.0, 45.0];
        let p_edges = [350.0, 450.0];
        let profile =
            cluster_telemetry(&samples, &t_edges, &p_edges, OutOfRange::Reject).unwrap();
        assert_eq!(profile.states(), &[state(40.0, 400.0, 1.0)]);
    }

    #[test]
    fn edge_builder_aligns_to_width_multiples() {
        assert_eq!(edges_covering(22.0, 33.0, 5.0).unwrap(), vec![20.0, 25.0, 30.0, 35.0]);
        assert_eq!(edges_covering(30.0, 30.0, 5.0).unwrap(), vec![30.0, 35.0]);
        assert!(matches!(edges_covering(10.0, 20.0, 0.0), Err(ProfileError::BadEdges)));
    }

    #[test]
    fn aggregate_single_state_is_identity() {
        let profile = MissionProfile::new(vec![state(25.0, 500.0, 1.0)]).unwrap();
        let r = rate(1.0, 2.0, 3.0);
        assert_eq!(aggregate_rate(&profile, &[r.clone()]).unwrap(), r);
    }

    #[test]
    fn aggregate_equal_rates_is_convex() {
        let profile =
            MissionProfile::new(vec![state(25.0, 500.0, 0.5), state(40.0, 800.0, 0.5)]).unwrap();
        let r = rate(2.0, 4.0, 6.0);
        assert_eq!(aggregate_rate(&profile, &[r.clone(), r.clone()]).unwrap(), r);
    }

    #[test]
    fn aggregate_matches_crisp_expectation() {
        let profile =
            MissionProfile::new(vec![state(25.0, 500.0, 0.25), state(40.0, 800.0, 0.75)]).unwrap();
        let rates = [rate(1.0, 1.0, 1.0), rate(2.0, 2.0, 2.0)];
        assert_eq!(
            aggregate_rate(&profile, &rates).unwrap(),
            rate(1.75, 1.75, 1.75)
        );
    }

    #[test]
    fn aggregate_support_stays_within_input_hull() {
        let profile = MissionProfile::new(vec![
            state(25.0, 500.0, 0.2),
            state(40.0, 800.0, 0.3),
            state(55.0, 900.0, 0.5),
        ])
        .unwrap();
        let rates = [rate(1.0, 2.0, 3.0), rate(0.5, 1.0, 4.0), rate(2.0, 2.5, 3.0)];
        let total = aggregate_rate(&profile, &rates).unwrap();
        assert!(total.a() >= 0.5 && total.a() <= 2.0);
        assert!(total.b() >= 1.0 && total.b() <= 2.5);
        assert!(total.c() >= 3.0 && total.c() <= 4.0);
    }

    #[test]
    fn aggregate_rejects_length_mismatch() {
        let profile = MissionProfile::new(vec![state(25.0, 500.0, 1.0)]).unwrap();
        assert!(matches!(
            aggregate_rate(&profile, &[]),
            Err(ProfileError::RateCountMismatch { states: 1, rates: 0 })
        ));
    }
}
