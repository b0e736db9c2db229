//! Absorbing continuous-time Markov chains for the converter's operation
//! modes, mean time to failure by fundamental matrix and by closed form,
//! the fuzzy MTTF built from either, and reliability curves R(t).
//!
//! Every analytic quantity has two independent routes: MTTF via the linear
//! system and via the closed form, R(t) via the two-exponential solution
//! and via uniformization. The routes are kept separate so tests can pit
//! them against each other.

use crate::fuzzy::{
    alpha_bounds, propagate, uniform_alpha_grid, AlphaInterval, BoxSearch, FuzzyError,
    FuzzyMethod, MembershipCurve, Tfn, Unit, DEFAULT_ALPHA_LEVELS,
};
use nalgebra::{DMatrix, DVector};
use thiserror::Error;

/// Errors from chain construction and MTTF/reliability evaluation.
#[derive(Debug, Error, PartialEq)]
pub enum MarkovError {
    #[error("chain needs at least one operational state")]
    NoStates,
    #[error("transition {from} -> {to} references no valid state pair")]
    InvalidTransition { from: usize, to: usize },
    #[error("transition {from} -> {to} has invalid rate {rate}")]
    InvalidRate { from: usize, to: usize, rate: f64 },
    #[error("state {state} cannot reach the absorbing state")]
    FailUnreachable { state: usize },
    #[error("{modes} operation modes need {modes} rates, got {rates}")]
    ModeCountMismatch { modes: usize, rates: usize },
    #[error("rate for mode {mode_k} must be positive and finite, got {rate}")]
    NonPositiveModeRate { mode_k: u32, rate: f64 },
    #[error("coverage must lie in [0, 1], got {0}")]
    InvalidCoverage(f64),
    #[error("{which} must have strictly positive support, got left vertex {a}")]
    NonPositiveFuzzyRate { which: &'static str, a: f64 },
    #[error("coverage support [{a}, {c}] must lie within [0, 1]")]
    CoverageSupport { a: f64, c: f64 },
    #[error("start state {start} is not one of the {transient} operational states")]
    StartOutOfRange { start: usize, transient: usize },
    #[error("absorption-time system is singular")]
    SingularSystem,
    #[error("time grid must be finite, nonnegative, and strictly increasing")]
    BadTimeGrid,
    #[error(transparent)]
    Fuzzy(#[from] FuzzyError),
}

/// Absorbing CTMC: operational states indexed `0..transient_count()`, the
/// single absorbing state at `fail_index()`. Rates are failures per year.
#[derive(Clone, Debug, PartialEq)]
pub struct MarkovChain {
    labels: Vec<String>,
    transitions: Vec<(usize, usize, f64)>,
    n_transient: usize,
}

impl MarkovChain {
    /// Builds a chain from operational-state labels and `(from, to, rate)`
    /// transitions; the absorbing state is implicit and indexed one past the
    /// last operational state. Every operational state must reach it through
    /// positive-rate transitions.
    pub fn new(
        transient_labels: Vec<String>,
        transitions: Vec<(usize, usize, f64)>,
    ) -> Result<MarkovChain, MarkovError> {
        let n = transient_labels.len();
        if n == 0 {
            return Err(MarkovError::NoStates);
        }
        for &(from, to, rate) in &transitions {
            if from >= n || to > n || from == to {
                return Err(MarkovError::InvalidTransition { from, to });
            }
            if !rate.is_finite() || rate < 0.0 {
                return Err(MarkovError::InvalidRate { from, to, rate });
            }
        }
        // walk backwards from the absorbing state over positive-rate edges
        let mut reaches_fail = vec![false; n + 1];
        reaches_fail[n] = true;
        let mut frontier = vec![n];
        while let Some(target) = frontier.pop() {
            for &(from, to, rate) in &transitions {
                if to == target && rate > 0.0 && !reaches_fail[from] {
                    reaches_fail[from] = true;
                    frontier.push(from);
                }
            }
        }
        if let Some(state) = reaches_fail[..n].iter().position(|&ok| !ok) {
            return Err(MarkovError::FailUnreachable { state });
        }
        let mut labels = transient_labels;
        labels.push("fail".to_string());
        Ok(MarkovChain { labels, transitions, n_transient: n })
    }

    pub fn transient_count(&self) -> usize {
        self.n_transient
    }

    pub fn fail_index(&self) -> usize {
        self.n_transient
    }

    /// State labels, absorbing state last.
    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn transitions(&self) -> &[(usize, usize, f64)] {
        &self.transitions
    }

    /// Total exit rate of one operational state.
    pub fn out_rate(&self, state: usize) -> f64 {
        self.transitions
            .iter()
            .filter(|&&(from, _, _)| from == state)
            .map(|&(_, _, rate)| rate)
            .sum()
    }
}

/// Degradation chain of a converter with `phase_count` phases: from mode
/// `k > 1` a covered failure moves to mode `k−1` at rate `k·p_c·λ^(k)`, an
/// uncovered one absorbs at `k·(1−p_c)·λ^(k)`; the last mode absorbs at
/// `λ^(1)`. `lambda_per_mode[k-1]` is the per-phase-cell rate in mode `k`;
/// zero-rate edges are omitted. The start state (index 0) is the full
/// `phase_count`-phase mode.
pub fn build_chain(
    phase_count: u32,
    lambda_per_mode: &[f64],
    p_c: f64,
) -> Result<MarkovChain, MarkovError> {
    let k_max = phase_count as usize;
    if k_max == 0 {
        return Err(MarkovError::NoStates);
    }
    if lambda_per_mode.len() != k_max {
        return Err(MarkovError::ModeCountMismatch {
            modes: k_max,
            rates: lambda_per_mode.len(),
        });
    }
    for (i, &rate) in lambda_per_mode.iter().enumerate() {
        if !rate.is_finite() || rate <= 0.0 {
            return Err(MarkovError::NonPositiveModeRate { mode_k: i as u32 + 1, rate });
        }
    }
    if !(0.0..=1.0).contains(&p_c) {
        return Err(MarkovError::InvalidCoverage(p_c));
    }

    let labels: Vec<String> = (1..=k_max).rev().map(|k| format!("mode{k}")).collect();
    let fail = k_max;
    let mut transitions = Vec::new();
    for (i, k) in (1..=k_max).rev().enumerate() {
        let lambda = lambda_per_mode[k - 1];
        if k > 1 {
            let down = k as f64 * p_c * lambda;
            let direct = k as f64 * (1.0 - p_c) * lambda;
            if down > 0.0 {
                transitions.push((i, i + 1, down));
            }
            if direct > 0.0 {
                transitions.push((i, fail, direct));
            }
        } else {
            transitions.push((i, fail, lambda));
        }
    }
    MarkovChain::new(labels, transitions)
}

/// Expected time to absorption from `start`, solving `(−Q_transient)·t = 1`.
pub fn mttf_numeric(chain: &MarkovChain, start: usize) -> Result<f64, MarkovError> {
    let n = chain.transient_count();
    if start >= n {
        return Err(MarkovError::StartOutOfRange { start, transient: n });
    }
    let mut a = DMatrix::<f64>::zeros(n, n);
    for &(from, to, rate) in chain.transitions() {
        a[(from, from)] += rate;
        if to < n {
            a[(from, to)] -= rate;
        }
    }
    let b = DVector::from_element(n, 1.0);
    let t = a.lu().solve(&b).ok_or(MarkovError::SingularSystem)?;
    let value = t[start];
    if !value.is_finite() || value < 0.0 {
        return Err(MarkovError::SingularSystem);
    }
    Ok(value)
}

fn validate_two_phase_params(lambda2: f64, lambda1: f64, p_c: f64) -> Result<(), MarkovError> {
    for (mode_k, rate) in [(2u32, lambda2), (1u32, lambda1)] {
        if !rate.is_finite() || rate <= 0.0 {
            return Err(MarkovError::NonPositiveModeRate { mode_k, rate });
        }
    }
    if !(0.0..=1.0).contains(&p_c) {
        return Err(MarkovError::InvalidCoverage(p_c));
    }
    Ok(())
}

/// Two-phase-converter MTTF in closed form:
/// `(1 + (2λ₂/λ₁)·p_c) / (2λ₂)`, identically `1/(2λ₂) + p_c/λ₁`.
pub fn mttf_closed_form(lambda2: f64, lambda1: f64, p_c: f64) -> Result<f64, MarkovError> {
    validate_two_phase_params(lambda2, lambda1, p_c)?;
    Ok((1.0 + (2.0 * lambda2 / lambda1) * p_c) / (2.0 * lambda2))
}

/// Fuzzy MTTF: membership curve, TFN summary, defuzzified value, and the
/// method that produced them.
#[derive(Clone, Debug, PartialEq)]
pub struct FuzzyMttf {
    tfn_summary: Tfn,
    curve: MembershipCurve,
    defuzzified: f64,
    method: FuzzyMethod,
}

impl FuzzyMttf {
    /// TFN through the support endpoints and peak, in years.
    pub fn tfn_summary(&self) -> &Tfn {
        &self.tfn_summary
    }

    pub fn curve(&self) -> &MembershipCurve {
        &self.curve
    }

    /// Centroid of the TFN summary, years.
    pub fn defuzzified(&self) -> f64 {
        self.defuzzified
    }

    pub fn method(&self) -> FuzzyMethod {
        self.method
    }

    /// Support endpoints: the most pessimistic and optimistic MTTF.
    pub fn bounds_years(&self) -> (f64, f64) {
        (self.tfn_summary.a(), self.tfn_summary.c())
    }
}

fn mttf_formula(v: &[f64]) -> f64 {
    (1.0 + (2.0 * v[0] / v[1]) * v[2]) / (2.0 * v[0])
}

fn validate_fuzzy_rate(rate: &Tfn, which: &'static str) -> Result<(), MarkovError> {
    if rate.a() <= 0.0 {
        return Err(MarkovError::NonPositiveFuzzyRate { which, a: rate.a() });
    }
    Ok(())
}

fn validate_fuzzy_coverage(coverage: &Tfn) -> Result<(), MarkovError> {
    if coverage.a() < 0.0 || coverage.c() > 1.0 {
        return Err(MarkovError::CoverageSupport { a: coverage.a(), c: coverage.c() });
    }
    Ok(())
}

/// [`fuzzy_mttf_on_grid`] at the default 101-level alpha grid.
pub fn fuzzy_mttf(
    lambda2: &Tfn,
    lambda1: &Tfn,
    coverage: &Tfn,
    method: FuzzyMethod,
) -> Result<FuzzyMttf, MarkovError> {
    fuzzy_mttf_on_grid(lambda2, lambda1, coverage, method, &uniform_alpha_grid(DEFAULT_ALPHA_LEVELS))
}

/// Fuzzy two-phase MTTF from fuzzy mode rates and coverage.
///
/// The closed form is monotone in each argument (decreasing in both rates,
/// increasing in coverage), so the alpha-cut route's corner evaluation is
/// exact. The vertex route chains the triple-rule arithmetic instead and
/// yields a conservative (wider-support) triangle with the same peak.
pub fn fuzzy_mttf_on_grid(
    lambda2: &Tfn,
    lambda1: &Tfn,
    coverage: &Tfn,
    method: FuzzyMethod,
    alpha_grid: &[f64],
) -> Result<FuzzyMttf, MarkovError> {
    validate_fuzzy_rate(lambda2, "lambda2")?;
    validate_fuzzy_rate(lambda1, "lambda1")?;
    validate_fuzzy_coverage(coverage)?;
    let (tfn_summary, curve) = match method {
        FuzzyMethod::AlphaCut => {
            let inputs = [lambda2.clone(), lambda1.clone(), coverage.clone()];
            let curve = propagate(mttf_formula, &inputs, alpha_grid, Unit::YEARS)?;
            let support = alpha_bounds(&mttf_formula, &inputs, 0.0, BoxSearch::Corners)?;
            let peak = alpha_bounds(&mttf_formula, &inputs, 1.0, BoxSearch::Corners)?;
            let summary = Tfn::new(support.lo(), peak.lo(), support.hi(), Unit::YEARS)?;
            (summary, curve)
        }
        FuzzyMethod::Vertex => {
            let l2 = lambda2.with_unit(Unit::DIMENSIONLESS);
            let l1 = lambda1.with_unit(Unit::DIMENSIONLESS);
            let pc = coverage.with_unit(Unit::DIMENSIONLESS);
            let one = Tfn::crisp(1.0, Unit::DIMENSIONLESS)?;
            let covered = l2.scale(2.0)?.div(&l1)?.mul(&pc)?;
            let summary = one.add(&covered)?.div(&l2.scale(2.0)?)?.with_unit(Unit::YEARS);
            let mut grid: Vec<f64> = alpha_grid.to_vec();
            grid.extend([0.0, 1.0]);
            grid.sort_by(f64::total_cmp);
            grid.dedup();
            let cuts: Vec<AlphaInterval> = grid
                .iter()
                .map(|&alpha| summary.alpha_cut(alpha))
                .collect::<Result<_, _>>()?;
            let curve = MembershipCurve::from_cuts(&cuts, Unit::YEARS)?;
            (summary, curve)
        }
    };
    let defuzzified = tfn_summary.defuzzify_centroid();
    Ok(FuzzyMttf { tfn_summary, curve, defuzzified, method })
}

/// Survival function of the two-phase degradation chain at time `t` years:
/// the two-exponential closed form, evaluated in a cancellation-free
/// arrangement (`expm1` near equal decay rates, split exponentials far
/// apart).
pub fn reliability_two_phase(
    lambda2: f64,
    lambda1: f64,
    p_c: f64,
    t: f64,
) -> Result<f64, MarkovError> {
    validate_two_phase_params(lambda2, lambda1, p_c)?;
    if !t.is_finite() || t < 0.0 {
        return Err(MarkovError::BadTimeGrid);
    }
    let beta = 2.0 * lambda2;
    let gamma = lambda1;
    let inflow = p_c * beta;
    let d = beta - gamma;
    let r = if d == 0.0 {
        (-beta * t).exp() * (1.0 + inflow * t)
    } else if (d * t).abs() <= 1.0 {
        (-beta * t).exp() * (1.0 + inflow * (d * t).exp_m1() / d)
    } else {
        let w = inflow / d;
        (1.0 - w) * (-beta * t).exp() + w * (-gamma * t).exp()
    };
    Ok(r.clamp(0.0, 1.0))
}

const MAX_STEP_RATE_TIME: f64 = 32.0;
const POISSON_TAIL: f64 = 1e-15;

/// Survival probabilities `R(t) = 1 − P(absorbed by t)` over a strictly
/// increasing time grid, by uniformization of the transient generator.
/// Works for any chain; long horizons are split into substeps to keep the
/// Poisson expansion short and stable.
pub fn reliability_curve(
    chain: &MarkovChain,
    start: usize,
    t_grid: &[f64],
) -> Result<Vec<(f64, f64)>, MarkovError> {
    let n = chain.transient_count();
    if start >= n {
        return Err(MarkovError::StartOutOfRange { start, transient: n });
    }
    for (i, &t) in t_grid.iter().enumerate() {
        if !t.is_finite() || t < 0.0 || (i > 0 && t <= t_grid[i - 1]) {
            return Err(MarkovError::BadTimeGrid);
        }
    }
    let cap = (0..n)
        .map(|i| chain.out_rate(i))
        .fold(0.0f64, f64::max);
    // one-step matrix of the uniformized jump chain (absorption leaks out)
    let mut m = vec![vec![0.0; n]; n];
    for i in 0..n {
        m[i][i] = 1.0 - chain.out_rate(i) / cap;
    }
    for &(from, to, rate) in chain.transitions() {
        if to < n {
            m[from][to] += rate / cap;
        }
    }

    let mut p = vec![0.0; n];
    p[start] = 1.0;
    let mut prev_t = 0.0;
    let mut out = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        advance(&mut p, t - prev_t, cap, &m);
        prev_t = t;
        out.push((t, p.iter().sum::<f64>().clamp(0.0, 1.0)));
    }
    Ok(out)
}

fn advance(p: &mut Vec<f64>, dt: f64, cap: f64, m: &[Vec<f64>]) {
    if dt <= 0.0 {
        return;
    }
    let substeps = ((cap * dt) / MAX_STEP_RATE_TIME).ceil().max(1.0) as usize;
    let q = cap * (dt / substeps as f64);
    for _ in 0..substeps {
        poisson_step(p, q, m);
    }
}

/// One uniformization step: `p ← p · e^{Q·h}` expanded as a Poisson-weighted
/// sum of jump-chain powers, truncated once the weights are exhausted.
fn poisson_step(p: &mut Vec<f64>, q: f64, m: &[Vec<f64>]) {
    let n = p.len();
    let mut weight = (-q).exp();
    let mut covered = weight;
    let mut term = p.clone();
    let mut acc: Vec<f64> = term.iter().map(|&x| x * weight).collect();
    let mut k = 1.0;
    let k_cap = q + 12.0 * q.sqrt() + 80.0;
    while covered < 1.0 - POISSON_TAIL && k <= k_cap {
        let mut next = vec![0.0; n];
        for (i, &ti) in term.iter().enumerate() {
            if ti != 0.0 {
                for j in 0..n {
                    next[j] += ti * m[i][j];
                }
            }
        }
        term = next;
        if term.iter().all(|&x| x == 0.0) {
            break;
        }
        weight *= q / k;
        covered += weight;
        for (a, &t) in acc.iter_mut().zip(&term) {
            *a += weight * t;
        }
        k += 1.0;
    }
    *p = acc;
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn spec_chain(lambda2: f64, lambda1: f64, p_c: f64) -> MarkovChain {
        build_chain(2, &[lambda1, lambda2], p_c).unwrap()
    }

    fn simpson(values: &[f64], h: f64) -> f64 {
        assert!(values.len() % 2 == 1, "simpson needs an even interval count");
        let n = values.len() - 1;
        let mut sum = values[0] + values[n];
        for (i, &v) in values.iter().enumerate().take(n).skip(1) {
            sum += if i % 2 == 1 { 4.0 * v } else { 2.0 * v };
        }
        sum * h / 3.0
    }

    #[test]
    fn single_mode_chain_has_one_edge() {
        let chain = build_chain(1, &[2.0], 0.5).unwrap();
        assert_eq!(chain.transitions(), &[(0, 1, 2.0)]);
        assert_eq!(chain.labels(), &["mode1".to_string(), "fail".to_string()]);
    }

    #[test]
    fn perfect_coverage_omits_the_direct_failure_edge() {
        let chain = spec_chain(1.0, 1.0, 1.0);
        assert_eq!(chain.transitions(), &[(0, 1, 2.0), (1, 2, 1.0)]);
    }

    #[test]
    fn half_coverage_splits_the_exit_rate() {
        let chain = spec_chain(1.0, 1.0, 0.5);
        assert_eq!(
            chain.transitions(),
            &[(0, 1, 1.0), (0, 2, 1.0), (1, 2, 1.0)]
        );
    }

    #[test]
    fn chain_validation_rejects_bad_inputs() {
        assert!(matches!(
            build_chain(2, &[1.0], 0.5),
            Err(MarkovError::ModeCountMismatch { modes: 2, rates: 1 })
        ));
        assert!(matches!(
            build_chain(2, &[1.0, 0.0], 0.5),
            Err(MarkovError::NonPositiveModeRate { mode_k: 2, .. })
        ));
        assert!(matches!(
            build_chain(2, &[1.0, 1.0], 1.5),
            Err(MarkovError::InvalidCoverage(_))
        ));
        assert!(matches!(
            MarkovChain::new(vec!["a".into()], vec![(0, 0, 1.0)]),
            Err(MarkovError::InvalidTransition { .. })
        ));
        let spinning = MarkovChain::new(
            vec!["a".into(), "b".into()],
            vec![(0, 1, 1.0), (1, 0, 1.0)],
        );
        assert!(matches!(spinning, Err(MarkovError::FailUnreachable { state: 0 })));
    }

    #[test]
    fn single_state_mttf_is_the_exponential_mean() {
        let chain = build_chain(1, &[2.0], 1.0).unwrap();
        assert_abs_diff_eq!(mttf_numeric(&chain, 0).unwrap(), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn perfect_coverage_mttf_sums_the_sojourns() {
        let chain = spec_chain(1.0, 1.0, 1.0);
        assert_abs_diff_eq!(mttf_numeric(&chain, 0).unwrap(), 1.5, epsilon = 1e-12);
    }

    #[test]
    fn solver_matches_closed_form_on_the_reference_chain() {
        let solved = mttf_numeric(&spec_chain(0.5, 1.0, 0.9), 0).unwrap();
        let formula = mttf_closed_form(0.5, 1.0, 0.9).unwrap();
        assert_abs_diff_eq!(formula, 1.9, epsilon = 1e-12);
        assert_abs_diff_eq!(solved, formula, epsilon = 1e-12);
    }

    #[test]
    fn solver_matches_closed_form_across_parameters() {
        let mut x = 11u64;
        let mut next = || {
            // small xorshift; keeps the sweep reproducible without a rng dep
            x ^= x << 13;
            x ^= x >> 7;
            x ^= x << 17;
            (x >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..200 {
            let lambda2 = 0.05 + 4.0 * next();
            let lambda1 = 0.05 + 4.0 * next();
            let p_c = next();
            let solved = mttf_numeric(&spec_chain(lambda2, lambda1, p_c), 0).unwrap();
            let formula = mttf_closed_form(lambda2, lambda1, p_c).unwrap();
            let scale = formula.abs().max(1.0);
            assert!(
                (solved - formula).abs() <= 1e-12 * scale,
                "mismatch at ({lambda2}, {lambda1}, {p_c}): {solved} vs {formula}"
            );
        }
    }

    #[test]
    fn closed_form_fixed_points() {
        assert_eq!(mttf_closed_form(1.0, 1.0, 0.0).unwrap(), 0.5);
        assert_eq!(mttf_closed_form(1.0, 1.0, 1.0).unwrap(), 1.5);
        assert_abs_diff_eq!(
            mttf_closed_form(1.8564, 2.9605, 1.0).unwrap(),
            0.6071,
            epsilon = 1e-4
        );
    }

    fn years(a: f64, b: f64, c: f64) -> Tfn {
        Tfn::new(a, b, c, Unit::PER_YEAR).unwrap()
    }

    fn coverage(a: f64, b: f64, c: f64) -> Tfn {
        Tfn::new(a, b, c, Unit::DIMENSIONLESS).unwrap()
    }

    #[test]
    fn crisp_inputs_collapse_to_the_closed_form() {
        for method in [FuzzyMethod::AlphaCut, FuzzyMethod::Vertex] {
            let out = fuzzy_mttf(
                &years(0.5, 0.5, 0.5),
                &years(1.0, 1.0, 1.0),
                &coverage(0.9, 0.9, 0.9),
                method,
            )
            .unwrap();
            let expected = mttf_closed_form(0.5, 1.0, 0.9).unwrap();
            assert_eq!(out.tfn_summary().vertices(), (expected, expected, expected));
            // the centroid is computed as (a+b+c)/3 even for a spike, which
            // costs an ulp against the exact closed form
            assert_abs_diff_eq!(out.defuzzified(), expected, epsilon = 1e-12);
            assert_eq!(out.curve().points(), &[(expected, 1.0)]);
        }
    }

    #[test]
    fn fuzzy_coverage_spreads_the_summary() {
        for method in [FuzzyMethod::AlphaCut, FuzzyMethod::Vertex] {
            let out = fuzzy_mttf(
                &years(1.0, 1.0, 1.0),
                &years(1.0, 1.0, 1.0),
                &coverage(0.0, 0.5, 1.0),
                method,
            )
            .unwrap();
            let (a, b, c) = out.tfn_summary().vertices();
            assert_abs_diff_eq!(a, 0.5, epsilon = 1e-12);
            assert_abs_diff_eq!(b, 1.0, epsilon = 1e-12);
            assert_abs_diff_eq!(c, 1.5, epsilon = 1e-12);
            assert_abs_diff_eq!(out.defuzzified(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn published_style_totals_peak_near_0_6071_years() {
        let lambda2 = years(1.0335, 1.8564, 3.2574);
        let lambda1 = years(1.6696, 2.9605, 5.1197);
        let pc = coverage(1.0, 1.0, 1.0);
        for method in [FuzzyMethod::AlphaCut, FuzzyMethod::Vertex] {
            let out = fuzzy_mttf(&lambda2, &lambda1, &pc, method).unwrap();
            assert_abs_diff_eq!(out.tfn_summary().b(), 0.6071, epsilon = 1e-4);
            assert_abs_diff_eq!(
                out.tfn_summary().b(),
                mttf_closed_form(1.8564, 2.9605, 1.0).unwrap(),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn vertex_summary_brackets_the_corner_summary() {
        let lambda2 = years(1.0335, 1.8564, 3.2574);
        let lambda1 = years(1.6696, 2.9605, 5.1197);
        let pc = coverage(0.8, 0.9, 1.0);
        let ac = fuzzy_mttf(&lambda2, &lambda1, &pc, FuzzyMethod::AlphaCut).unwrap();
        let vx = fuzzy_mttf(&lambda2, &lambda1, &pc, FuzzyMethod::Vertex).unwrap();
        assert!(vx.tfn_summary().a() <= ac.tfn_summary().a() + 1e-12);
        assert!(ac.tfn_summary().c() <= vx.tfn_summary().c() + 1e-12);
        assert_abs_diff_eq!(vx.tfn_summary().b(), ac.tfn_summary().b(), epsilon = 1e-12);
    }

    #[test]
    fn fuzzy_summary_contains_its_centroid_and_curve_peak() {
        let out = fuzzy_mttf(
            &years(1.0, 2.0, 4.0),
            &years(2.0, 3.0, 5.0),
            &coverage(0.7, 0.9, 1.0),
            FuzzyMethod::AlphaCut,
        )
        .unwrap();
        let (a, b, c) = out.tfn_summary().vertices();
        assert!(a <= out.defuzzified() && out.defuzzified() <= c);
        assert_eq!(out.curve().peak_x(), b);
        assert_eq!(out.bounds_years(), (a, c));
    }

    #[test]
    fn reliability_starts_at_one_and_never_increases() {
        let chain = spec_chain(0.7, 1.3, 0.85);
        let grid: Vec<f64> = (0..=200).map(|i| i as f64 * 0.05).collect();
        let curve = reliability_curve(&chain, 0, &grid).unwrap();
        assert_eq!(curve[0], (0.0, 1.0));
        for w in curve.windows(2) {
            assert!(w[1].1 <= w[0].1 + 1e-12);
        }
    }

    #[test]
    fn single_state_reliability_is_a_plain_exponential() {
        let chain = build_chain(1, &[0.8], 1.0).unwrap();
        let grid: Vec<f64> = (0..=50).map(|i| i as f64 * 0.25).collect();
        for (t, r) in reliability_curve(&chain, 0, &grid).unwrap() {
            assert_abs_diff_eq!(r, (-0.8 * t).exp(), epsilon = 1e-12);
        }
    }

    #[test]
    fn uniformization_matches_the_two_exponential_solution() {
        for (l2, l1, pc) in [(1.0, 1.0, 1.0), (0.5, 1.0, 0.9), (0.5, 1.0, 0.4), (2.0, 0.3, 0.7)]
        {
            let chain = spec_chain(l2, l1, pc);
            let grid: Vec<f64> = (0..=80).map(|i| i as f64 * 0.1).collect();
            for (t, r) in reliability_curve(&chain, 0, &grid).unwrap() {
                let analytic = reliability_two_phase(l2, l1, pc, t).unwrap();
                assert_abs_diff_eq!(r, analytic, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn two_exponential_form_handles_equal_decay_rates() {
        // 2·λ2 == λ1 makes the generic formula 0/0; the expm1 branch covers it
        let (l2, l1, pc) = (0.5, 1.0, 0.9);
        assert_eq!(2.0 * l2, l1);
        for t in [0.0, 0.3, 1.7, 9.0] {
            let r = reliability_two_phase(l2, l1, pc, t).unwrap();
            let direct = (-t).exp() * (1.0 + 0.9 * t);
            assert_abs_diff_eq!(r, direct, epsilon = 1e-12);
        }
    }

    #[test]
    fn reliability_integral_recovers_the_mttf() {
        let chain = spec_chain(1.0, 1.0, 1.0);
        let h = 0.002;
        let grid: Vec<f64> = (0..=20_000).map(|i| i as f64 * h).collect();
        let curve = reliability_curve(&chain, 0, &grid).unwrap();
        let values: Vec<f64> = curve.iter().map(|&(_, r)| r).collect();
        assert!(values.last().unwrap() < &1e-9);
        let integral = simpson(&values, h);
        assert_abs_diff_eq!(integral, 1.5, epsilon = 1e-6);
        assert_abs_diff_eq!(integral, mttf_numeric(&chain, 0).unwrap(), epsilon = 1e-6);
    }

    #[test]
    fn long_horizons_stay_finite_under_substepping() {
        // widely separated rates and a 400-year jump force many substeps
        let chain = spec_chain(3.0, 0.05, 1.0);
        let curve = reliability_curve(&chain, 0, &[0.0, 1.0, 50.0, 400.0]).unwrap();
        for (t, r) in curve {
            assert!(r.is_finite(), "R({t}) must be finite");
            let analytic = reliability_two_phase(3.0, 0.05, 1.0, t).unwrap();
            assert_abs_diff_eq!(r, analytic, epsilon = 1e-10);
        }
    }

    #[test]
    fn time_grid_validation() {
        let chain = spec_chain(1.0, 1.0, 0.5);
        assert!(matches!(
            reliability_curve(&chain, 0, &[0.0, 0.0]),
            Err(MarkovError::BadTimeGrid)
        ));
        assert!(matches!(
            reliability_curve(&chain, 0, &[-1.0]),
            Err(MarkovError::BadTimeGrid)
        ));
        assert!(matches!(
            reliability_curve(&chain, 5, &[0.0]),
            Err(MarkovError::StartOutOfRange { .. })
        ));
    }
}
