//! Empirical checks of the m-dependent maxima machinery on the moving-sum
//! process: conditional-exceedance (clustering) estimates, non-exceedance
//! probabilities at the threshold sequence, the paired-maxima independence
//! experiment, and the law-of-large-numbers remainder.

use crate::asymptotics::{
    gamma_tail_exact, gumbel_cdf, gumbel_quantile, watson_threshold, GammaTail, WatsonThreshold,
};
use crate::error::{Error, Result};
use crate::experiment::{ks_one_sample, Ecdf, KsReport};
use crate::sampling::moving_sums;
use crate::sampling::{next_exponential, sample_exponentials, InnovationDraw, StreamKey};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

const MIN_RUN_LENGTH: u64 = 10_000;
const LOW_CONFIDENCE_EXCEEDANCES: u64 = 50;

/// A strictly stationary m-dependent sequence built by applying a pure
/// window function to `m + 1` consecutive i.i.d. standard-exponential
/// innovations: `Y_i = f(X_i, ..., X_{i+m})`.
pub struct MDepProcess<F> {
    m: usize,
    window_fn: F,
}

impl<F: Fn(&[f64]) -> f64> MDepProcess<F> {
    pub fn new(m: usize, window_fn: F) -> Self {
        Self { m, window_fn }
    }

    /// Dependence range.
    pub fn m(&self) -> usize {
        self.m
    }
}

/// The moving-sum process of window order `k`, which is (k-1)-dependent.
pub fn moving_sum_process(k: usize) -> Result<MDepProcess<impl Fn(&[f64]) -> f64>> {
    if k < 1 {
        return Err(Error::WindowOrderZero);
    }
    Ok(MDepProcess::new(k - 1, |w: &[f64]| w.iter().sum()))
}

/// Conditional exceedance estimate from one long run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct As1Estimate {
    /// `max_{1<=a<=m} P(Y_{i+a} > y | Y_i > y)` estimated by pair counting;
    /// 0 by convention when the lag set is empty (m = 0).
    pub max_conditional: f64,
    /// Per-lag conditional estimates; `None` where no conditioning events
    /// occurred.
    pub lag_conditionals: Vec<Option<f64>>,
    /// Number of exceedances observed along the run.
    pub exceedances: u64,
    /// Set when fewer than 50 exceedances back the estimate.
    pub low_confidence: bool,
}

/// Outcome of [`as1_estimate`]: either an estimate or an explicit marker
/// that the run produced no usable conditioning events.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum As1Outcome {
    Estimate(As1Estimate),
    NoData { run_length: u64 },
}

impl As1Outcome {
    pub fn estimate(&self) -> Option<&As1Estimate> {
        match self {
            As1Outcome::Estimate(e) => Some(e),
            As1Outcome::NoData { .. } => None,
        }
    }
}

/// Estimates the vanishing-clustering quantity of the process at level `y`
/// from a single run of `run_length` terms (an ergodic average; exceedances
/// are rare, so one long run extracts the most data per random bit).
///
/// For each lag `a = 1..=m` the conditional `P(Y_{i+a} > y | Y_i > y)` is
/// estimated as (pairs with both exceeding) / (pairs with the first
/// exceeding), counting each pair `(i, i+a)` with both ends inside the run.
pub fn as1_estimate<F: Fn(&[f64]) -> f64>(
    process: &MDepProcess<F>,
    y: f64,
    run_length: u64,
    key: StreamKey,
) -> Result<As1Outcome> {
    if run_length < MIN_RUN_LENGTH {
        return Err(Error::RunTooShort {
            min: MIN_RUN_LENGTH,
            run_length,
        });
    }
    let m = process.m;
    let width = m + 1;
    let mut rng = key.rng();
    let mut window: Vec<f64> = (0..width).map(|_| next_exponential(&mut rng)).collect();

    // Ring of the previous m exceedance flags; slot (i - a) mod m holds the
    // flag of step i - a while it is still within lag range.
    let mut flags = vec![false; m.max(1)];
    let mut both = vec![0u64; m];
    let mut first = vec![0u64; m];
    let mut exceedances = 0u64;

    for i in 0..run_length {
        let value = (process.window_fn)(&window);
        let hit = value > y;
        if hit {
            exceedances += 1;
        }
        for a in 1..=m.min(i as usize) {
            if flags[(i as usize - a) % m] {
                first[a - 1] += 1;
                if hit {
                    both[a - 1] += 1;
                }
            }
        }
        if m > 0 {
            flags[i as usize % m] = hit;
        }
        window.rotate_left(1);
        window[width - 1] = next_exponential(&mut rng);
    }

    if exceedances == 0 {
        return Ok(As1Outcome::NoData { run_length });
    }
    let lag_conditionals: Vec<Option<f64>> = (0..m)
        .map(|a| (first[a] > 0).then(|| both[a] as f64 / first[a] as f64))
        .collect();
    if m > 0 && lag_conditionals.iter().all(Option::is_none) {
        return Ok(As1Outcome::NoData { run_length });
    }
    let max_conditional = lag_conditionals
        .iter()
        .flatten()
        .fold(0.0f64, |acc, &c| acc.max(c));
    Ok(As1Outcome::Estimate(As1Estimate {
        max_conditional,
        lag_conditionals,
        exceedances,
        low_confidence: exceedances < LOW_CONFIDENCE_EXCEEDANCES,
    }))
}

/// Non-exceedance frequency of the moving-sum maximum at the threshold
/// sequence, against its two references.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WatsonLimitReport {
    pub k: usize,
    pub x: f64,
    pub n: u64,
    pub trials: u64,
    pub threshold: WatsonThreshold,
    /// Fraction of trials with `max_{1<=i<=n} Y_i <= y_n`.
    pub empirical: f64,
    /// The limit value `exp(-xi)`.
    pub asymptotic_reference: f64,
    /// `exp(-n P(Y_1 > y_n))`, which absorbs the slowly-decaying excess of
    /// `n P(Y_1 > y_n)` over `xi` at finite n.
    pub finite_n_reference: f64,
    /// Per-trial maxima, in trial order.
    pub trial_maxima: Vec<f64>,
}

/// Estimates `P(max_{1<=i<=n} Y_i <= y_n)` over independent trials.
///
/// Each trial draws `n + k - 1` innovations and forms exactly the `n`
/// moving sums `Y_1..Y_n`; trial `t` uses stream id `t`.
pub fn watson_limit_estimate(
    k: usize,
    x: f64,
    n: u64,
    trials: u64,
    key: StreamKey,
) -> Result<WatsonLimitReport> {
    if trials < 100 {
        return Err(Error::TooFewTrials {
            context: "watson limit estimate",
            min: 100,
            trials,
        });
    }
    if n < 3 {
        return Err(Error::SampleSizeTooSmall {
            context: "watson limit estimate",
            min: 3,
            n,
        });
    }
    let threshold = watson_threshold(n, k, x)?;
    let tail = gamma_tail_exact(GammaTail::new(k)?, threshold.y_n)?;
    let innovations = n as usize + k - 1;

    let trial_maxima: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let draw = sample_exponentials(innovations, key.stream(t)).expect("n + k - 1 >= 1");
            moving_sums(&draw, k).expect("k <= n + k - 1").max()
        })
        .collect();

    let hits = trial_maxima.iter().filter(|&&v| v <= threshold.y_n).count();
    Ok(WatsonLimitReport {
        k,
        x,
        n,
        trials,
        threshold,
        empirical: hits as f64 / trials as f64,
        asymptotic_reference: (-threshold.xi).exp(),
        finite_n_reference: (-(n as f64) * tail).exp(),
        trial_maxima,
    })
}

/// How the two pair-maxima series share innovations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StreamMode {
    /// The construction under study: both series read one stream
    /// `X_1..X_{2n+1}` with interleaved, overlapping pairs.
    Overlapping,
    /// Control: the two series draw from disjoint streams and are
    /// independent by construction.
    Disjoint,
}

/// Maxima of the two interleaved pair-sum series for one trial.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairMaxima {
    pub a_max: f64,
    pub b_max: f64,
    /// `a_max - log n - log log n`.
    pub a_norm: f64,
    pub b_norm: f64,
}

/// Dependence diagnostics for the paired maxima.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndependenceReport {
    pub n: u64,
    pub trials: u64,
    pub mode: StreamMode,
    /// Pearson correlation of the normalized pair `(a', b')`.
    pub correlation: f64,
    /// Exceedance threshold used for the factorization check.
    pub threshold: f64,
    pub marginal_a: f64,
    pub marginal_b: f64,
    pub joint: f64,
    /// `|P(a' > t, b' > t) - P(a' > t) P(b' > t)|`.
    pub joint_gap: f64,
    /// KS of `max(a', b') - log 2` against the standard Gumbel law.
    pub ks_shifted_max: KsReport,
    pub pairs: Vec<PairMaxima>,
}

/// Maxima of the overlapping pair sums of one draw `X_1..X_{2n+1}`:
/// odd-start pairs feed the first series, even-start pairs the second.
pub fn overlapping_pair_maxima(d: &InnovationDraw) -> Result<(f64, f64)> {
    let x = d.x();
    let len = x.len();
    if len < 3 || len % 2 == 0 {
        return Err(Error::SampleSizeTooSmall {
            context: "overlapping pair maxima (needs 2n + 1 innovations)",
            min: 3,
            n: len as u64,
        });
    }
    let mut a_max = f64::NEG_INFINITY;
    let mut b_max = f64::NEG_INFINITY;
    for i in 0..len - 1 {
        let s = x[i] + x[i + 1];
        if i % 2 == 0 {
            a_max = a_max.max(s);
        } else {
            b_max = b_max.max(s);
        }
    }
    Ok((a_max, b_max))
}

fn disjoint_pair_max(d: &InnovationDraw) -> f64 {
    d.x()
        .chunks_exact(2)
        .map(|c| c[0] + c[1])
        .fold(f64::NEG_INFINITY, f64::max)
}

fn pearson_correlation(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut vx = 0.0;
    let mut vy = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        cov += (x - mx) * (y - my);
        vx += (x - mx) * (x - mx);
        vy += (y - my) * (y - my);
    }
    cov / (vx.sqrt() * vy.sqrt())
}

/// Runs the paired-maxima experiment: per trial, both series' maxima are
/// normalized by `log n + log log n`; the report carries the correlation,
/// the joint-exceedance factorization gap at the 0.8 Gumbel quantile, and a
/// KS test of `max(a', b') - log 2` against the Gumbel law.
///
/// Overlapping trials use stream id `t`; disjoint (control) trials use the
/// stream pair `(2t, 2t + 1)`.
pub fn independence_experiment(
    n: u64,
    trials: u64,
    key: StreamKey,
    mode: StreamMode,
) -> Result<IndependenceReport> {
    if n < 16 {
        return Err(Error::SampleSizeTooSmall {
            context: "independence experiment",
            min: 16,
            n,
        });
    }
    if trials < 500 {
        return Err(Error::TooFewTrials {
            context: "independence experiment",
            min: 500,
            trials,
        });
    }
    let nf = n as f64;
    let norm = nf.ln() + nf.ln().ln();
    let pairs: Vec<PairMaxima> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let (a_max, b_max) = match mode {
                StreamMode::Overlapping => {
                    let d = sample_exponentials(2 * n as usize + 1, key.stream(t))
                        .expect("2n + 1 >= 1");
                    overlapping_pair_maxima(&d).expect("odd length by construction")
                }
                StreamMode::Disjoint => {
                    let da =
                        sample_exponentials(2 * n as usize, key.stream(2 * t)).expect("2n >= 1");
                    let db = sample_exponentials(2 * n as usize, key.stream(2 * t + 1))
                        .expect("2n >= 1");
                    (disjoint_pair_max(&da), disjoint_pair_max(&db))
                }
            };
            PairMaxima {
                a_max,
                b_max,
                a_norm: a_max - norm,
                b_norm: b_max - norm,
            }
        })
        .collect();

    let a: Vec<f64> = pairs.iter().map(|p| p.a_norm).collect();
    let b: Vec<f64> = pairs.iter().map(|p| p.b_norm).collect();
    let correlation = pearson_correlation(&a, &b);

    let threshold = gumbel_quantile(0.8).expect("0.8 inside (0,1)");
    let tf = trials as f64;
    let marginal_a = a.iter().filter(|&&v| v > threshold).count() as f64 / tf;
    let marginal_b = b.iter().filter(|&&v| v > threshold).count() as f64 / tf;
    let joint = pairs
        .iter()
        .filter(|p| p.a_norm > threshold && p.b_norm > threshold)
        .count() as f64
        / tf;
    let joint_gap = (joint - marginal_a * marginal_b).abs();

    let shifted: Vec<f64> = pairs
        .iter()
        .map(|p| p.a_norm.max(p.b_norm) - std::f64::consts::LN_2)
        .collect();
    let ks_shifted_max = ks_one_sample(&Ecdf::from_unsorted(shifted)?, gumbel_cdf, 1e-3);

    Ok(IndependenceReport {
        n,
        trials,
        mode,
        correlation,
        threshold,
        marginal_a,
        marginal_b,
        joint,
        joint_gap,
        ks_shifted_max,
        pairs,
    })
}

/// The remainder `log n * (n / total - 1)`; zero exactly when `total = n`.
pub fn slutsky_statistic(n: u64, total: f64) -> f64 {
    (n as f64).ln() * ((n as f64) / total - 1.0)
}

/// Per-trial values of the remainder over independent draws of
/// `X_1..X_{n+1}`; trial `t` uses stream id `t`. The sample standard
/// deviation is asymptotically `log n / sqrt(n)`.
pub fn slutsky_remainder(n: u64, trials: u64, key: StreamKey) -> Result<Vec<f64>> {
    if n < 3 {
        return Err(Error::SampleSizeTooSmall {
            context: "slutsky remainder",
            min: 3,
            n,
        });
    }
    if trials < 1 {
        return Err(Error::TooFewTrials {
            context: "slutsky remainder",
            min: 1,
            trials,
        });
    }
    Ok((0..trials)
        .into_par_iter()
        .map(|t| {
            let draw = sample_exponentials(n as usize + 1, key.stream(t)).expect("n + 1 >= 1");
            slutsky_statistic(n, draw.total())
        })
        .collect())
}
