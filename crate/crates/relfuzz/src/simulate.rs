//! Monte Carlo estimation of the chain MTTF, and a fuzzy envelope that
//! replays the simulation at the alpha-cut corners of fuzzy inputs.
//!
//! Trials are deterministic given `(seed, trial index)`: each trial runs on
//! its own counter-derived ChaCha8 stream, blocks of trials are summed in
//! index order, and the block partials are folded sequentially. The result
//! is bit-identical for any rayon thread count.

use crate::fuzzy::{FuzzyError, Tfn};
use crate::markov::{build_chain, MarkovChain, MarkovError};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp};
use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum SimError {
    #[error("at least one trial is required")]
    ZeroTrials,
    #[error(transparent)]
    Chain(#[from] MarkovError),
    #[error(transparent)]
    Fuzzy(#[from] FuzzyError),
}

/// Summary of one simulation run. The confidence interval is the usual
/// normal-approximation 95% band around the sample mean.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SimResult {
    pub trials: u64,
    pub mean_mttf_years: f64,
    pub std_error_years: f64,
    pub ci95: (f64, f64),
    pub seed: u64,
}

impl SimResult {
    pub fn ci95_contains(&self, value: f64) -> bool {
        self.ci95.0 <= value && value <= self.ci95.1
    }
}

struct StateDyn {
    sojourn: Exp<f64>,
    exits: Vec<(usize, f64)>,
}

fn state_dynamics(chain: &MarkovChain) -> Vec<StateDyn> {
    (0..chain.transient_count())
        .map(|i| {
            let total = chain.out_rate(i);
            let mut cum = 0.0;
            let mut exits: Vec<(usize, f64)> = chain
                .transitions()
                .iter()
                .filter(|&&(from, _, rate)| from == i && rate > 0.0)
                .map(|&(_, to, rate)| {
                    cum += rate / total;
                    (to, cum)
                })
                .collect();
            // chain validation guarantees an exit; pin the last bound so a
            // uniform draw in [0, 1) always lands somewhere
            exits.last_mut().expect("state with no exit").1 = 1.0;
            StateDyn {
                sojourn: Exp::new(total).expect("positive exit rate"),
                exits,
            }
        })
        .collect()
}

fn run_trial(states: &[StateDyn], seed: u64, trial: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    let fail = states.len();
    let mut state = 0;
    let mut time = 0.0;
    while state != fail {
        let s = &states[state];
        time += s.sojourn.sample(&mut rng);
        let u: f64 = rng.random();
        state = s
            .exits
            .iter()
            .find(|&&(_, cum)| u < cum)
            .map(|&(to, _)| to)
            .expect("exit bounds cover [0, 1)");
    }
    time
}

const TRIAL_BLOCK: u64 = 4096;

/// Samples time-to-absorption from the full-redundancy state (index 0)
/// `trials` times and returns mean, standard error, and 95% interval.
pub fn simulate_mttf(chain: &MarkovChain, trials: u64, seed: u64) -> Result<SimResult, SimError> {
    if trials == 0 {
        return Err(SimError::ZeroTrials);
    }
    let states = state_dynamics(chain);
    let n_blocks = trials.div_ceil(TRIAL_BLOCK);
    let partials: Vec<(f64, f64)> = (0..n_blocks)
        .into_par_iter()
        .map(|block| {
            let lo = block * TRIAL_BLOCK;
            let hi = (lo + TRIAL_BLOCK).min(trials);
            let mut sum = 0.0;
            let mut sumsq = 0.0;
            for trial in lo..hi {
                let t = run_trial(&states, seed, trial);
                sum += t;
                sumsq += t * t;
            }
            (sum, sumsq)
        })
        .collect();
    let (mut sum, mut sumsq) = (0.0, 0.0);
    for (s, s2) in partials {
        sum += s;
        sumsq += s2;
    }
    let n = trials as f64;
    let mean = sum / n;
    let std_error = if trials < 2 {
        0.0
    } else {
        let variance = ((sumsq - sum * sum / n) / (n - 1.0)).max(0.0);
        (variance / n).sqrt()
    };
    let half = 1.96 * std_error;
    Ok(SimResult {
        trials,
        mean_mttf_years: mean,
        std_error_years: std_error,
        ci95: (mean - half, mean + half),
        seed,
    })
}

/// Seed for one parameter corner, mixed from the base seed and the exact
/// parameter bits so equal corners replay identical trials.
pub fn corner_seed(base: u64, lambda2: f64, lambda1: f64, p_c: f64) -> u64 {
    let mut h = base ^ 0x9e37_79b9_7f4a_7c15;
    for bits in [lambda2.to_bits(), lambda1.to_bits(), p_c.to_bits()] {
        h ^= bits;
        h = h.wrapping_mul(0xbf58_476d_1ce4_e5b9);
        h ^= h >> 27;
        h = h.wrapping_mul(0x94d0_49bb_1331_11eb);
        h ^= h >> 31;
    }
    h
}

/// Simulated MTTF band at one membership level.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnvelopeLevel {
    pub alpha: f64,
    pub lo: SimResult,
    pub hi: SimResult,
}

/// Replays the two-phase simulation at every distinct alpha-cut corner of
/// the fuzzy mode rates and coverage, keeping the extreme sample means per
/// level. Simulation noise keeps this from being a membership curve proper;
/// it serves as an independent check that brackets the analytic result.
pub fn simulate_fuzzy_envelope(
    lambda2: &Tfn,
    lambda1: &Tfn,
    coverage: &Tfn,
    alpha_levels: &[f64],
    trials_per_corner: u64,
    seed: u64,
) -> Result<Vec<EnvelopeLevel>, SimError> {
    if trials_per_corner == 0 {
        return Err(SimError::ZeroTrials);
    }
    let mut out = Vec::with_capacity(alpha_levels.len());
    for &alpha in alpha_levels {
        let cut2 = lambda2.alpha_cut(alpha)?;
        let cut1 = lambda1.alpha_cut(alpha)?;
        let cutc = coverage.alpha_cut(alpha)?;
        let mut corners: Vec<(f64, f64, f64)> = Vec::with_capacity(8);
        for l2 in [cut2.lo(), cut2.hi()] {
            for l1 in [cut1.lo(), cut1.hi()] {
                for pc in [cutc.lo(), cutc.hi()] {
                    if !corners.contains(&(l2, l1, pc)) {
                        corners.push((l2, l1, pc));
                    }
                }
            }
        }
        let mut lo: Option<SimResult> = None;
        let mut hi: Option<SimResult> = None;
        for (l2, l1, pc) in corners {
            let chain = build_chain(2, &[l1, l2], pc)?;
            let result = simulate_mttf(&chain, trials_per_corner, corner_seed(seed, l2, l1, pc))?;
            if lo.is_none_or(|r| result.mean_mttf_years < r.mean_mttf_years) {
                lo = Some(result);
            }
            if hi.is_none_or(|r| result.mean_mttf_years > r.mean_mttf_years) {
                hi = Some(result);
            }
        }
        out.push(EnvelopeLevel {
            alpha,
            lo: lo.expect("at least one corner"),
            hi: hi.expect("at least one corner"),
        });
    }
    Ok(out)
}
