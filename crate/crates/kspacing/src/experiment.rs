//! Monte Carlo driver for the limit law at desk scale: batches of trials,
//! empirical CDFs, and one- and two-sample Kolmogorov-Smirnov reports.

use crate::asymptotics::{centering, gumbel_cdf};
use crate::error::{Error, Result};
use crate::sampling::{
    sample_exponentials, sample_uniform_sorted, spacings_from_exponentials, StreamKey,
};
use crate::spacing::max_k_spacing;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Which route generates the sorted uniform sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SamplingPath {
    /// Sort raw uniforms.
    UniformSort,
    /// Normalized partial sums of exponentials (equal in distribution).
    ExponentialRepresentation,
}

impl SamplingPath {
    pub fn label(&self) -> &'static str {
        match self {
            SamplingPath::UniformSort => "sort",
            SamplingPath::ExponentialRepresentation => "exp",
        }
    }
}

/// Configuration of one limit-law experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub k: usize,
    pub n_list: Vec<u64>,
    /// Trials per sample size.
    pub trials: u64,
    pub seed: u64,
    pub path: SamplingPath,
    /// Significance for KS verdicts.
    pub alpha: f64,
}

impl ExperimentConfig {
    pub fn new(k: usize, n_list: Vec<u64>, trials: u64, seed: u64) -> Self {
        Self {
            k,
            n_list,
            trials,
            seed,
            path: SamplingPath::UniformSort,
            alpha: 1e-3,
        }
    }

    pub fn with_path(mut self, path: SamplingPath) -> Self {
        self.path = path;
        self
    }
}

/// One simulated trial: the maximal k-spacing and its normalized statistic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: u64,
    pub m_value: f64,
    pub t_normalized: f64,
}

/// Empirical CDF of a sample, evaluated as a right-continuous step function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ecdf {
    sorted: Vec<f64>,
}

impl Ecdf {
    pub fn from_unsorted(mut values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptySample);
        }
        if let Some(&bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::NonFiniteSample { value: bad });
        }
        values.sort_unstable_by(f64::total_cmp);
        Ok(Self { sorted: values })
    }

    pub fn n(&self) -> usize {
        self.sorted.len()
    }

    pub fn sorted(&self) -> &[f64] {
        &self.sorted
    }

    /// Fraction of sample points `<= t`.
    pub fn eval(&self, t: f64) -> f64 {
        let count = self.sorted.partition_point(|&x| x <= t);
        count as f64 / self.sorted.len() as f64
    }

    /// Left limit: fraction of sample points `< t`.
    pub fn eval_left(&self, t: f64) -> f64 {
        let count = self.sorted.partition_point(|&x| x < t);
        count as f64 / self.sorted.len() as f64
    }

    /// Empirical p-quantile (inverse ECDF, lower order statistic).
    pub fn quantile(&self, p: f64) -> Result<f64> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::ProbabilityOutOfRange { p });
        }
        let n = self.sorted.len();
        let rank = (p * n as f64).ceil() as usize;
        Ok(self.sorted[rank.clamp(1, n) - 1])
    }

    /// `count` evenly spaced quantiles at p = 1/(count+1), ..., count/(count+1).
    pub fn evenly_spaced_quantiles(&self, count: usize) -> Vec<f64> {
        (1..=count)
            .map(|j| {
                self.quantile(j as f64 / (count + 1) as f64)
                    .expect("p inside (0,1)")
            })
            .collect()
    }
}

/// Kolmogorov-Smirnov comparison summary.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KsReport {
    /// Two-sided sup-distance.
    pub statistic: f64,
    /// Effective sample size behind the asymptotic p-value.
    pub n_eff: f64,
    /// Asymptotic Kolmogorov p-value.
    pub p_value: f64,
    /// Significance the verdict was taken at.
    pub alpha: f64,
    /// True when the sample is not significant at `alpha`.
    pub pass: bool,
    /// The asymptotic p-value is coarse below n_eff = 50.
    pub low_confidence: bool,
}

/// Survival function of the Kolmogorov distribution,
/// `2 sum_{j>=1} (-1)^{j-1} exp(-2 j^2 lambda^2)`, truncated once a term
/// drops below 1e-12 and clamped to `[0, 1]`.
pub fn kolmogorov_sf(lambda: f64) -> f64 {
    debug_assert!(lambda >= 0.0);
    // Below 0.2 the alternating series no longer terminates usefully; the
    // true survival value there exceeds 1 - 1e-12.
    if lambda < 0.2 {
        return 1.0;
    }
    let mut sum = 0.0f64;
    let mut sign = 1.0f64;
    for j in 1..1000 {
        let term = 2.0 * (-2.0 * (j as f64).powi(2) * lambda * lambda).exp();
        sum += sign * term;
        if term < 1e-12 {
            break;
        }
        sign = -sign;
    }
    sum.clamp(0.0, 1.0)
}

/// One-sample KS test of an ECDF against a reference CDF.
///
/// Uses the two-sided statistic with both step endpoints:
/// `max_j max(F(t_j) - j/N, (j+1)/N - F(t_j))`.
pub fn ks_one_sample<F: Fn(f64) -> f64>(e: &Ecdf, cdf: F, alpha: f64) -> KsReport {
    let n = e.n();
    let mut d = 0.0f64;
    for (j, &t) in e.sorted().iter().enumerate() {
        let f = cdf(t);
        d = d.max(f - j as f64 / n as f64);
        d = d.max((j + 1) as f64 / n as f64 - f);
    }
    let n_eff = n as f64;
    let p_value = kolmogorov_sf(n_eff.sqrt() * d);
    KsReport {
        statistic: d,
        n_eff,
        p_value,
        alpha,
        pass: p_value >= alpha,
        low_confidence: n_eff < 50.0,
    }
}

/// Two-sample KS test: sup-distance between the two step functions over the
/// merged support, with `n_eff = n_a n_b / (n_a + n_b)`.
pub fn ks_two_sample(a: &Ecdf, b: &Ecdf, alpha: f64) -> KsReport {
    let xs = a.sorted();
    let ys = b.sorted();
    let (na, nb) = (xs.len() as f64, ys.len() as f64);
    let mut i = 0usize;
    let mut j = 0usize;
    let mut d = 0.0f64;
    while i < xs.len() || j < ys.len() {
        let t = match (xs.get(i), ys.get(j)) {
            (Some(&x), Some(&y)) => x.min(y),
            (Some(&x), None) => x,
            (None, Some(&y)) => y,
            (None, None) => break,
        };
        while i < xs.len() && xs[i] <= t {
            i += 1;
        }
        while j < ys.len() && ys[j] <= t {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    let n_eff = na * nb / (na + nb);
    let p_value = kolmogorov_sf(n_eff.sqrt() * d);
    KsReport {
        statistic: d,
        n_eff,
        p_value,
        alpha,
        pass: p_value >= alpha,
        low_confidence: n_eff < 50.0,
    }
}

/// Results for one sample size of a limit-law run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitRunResult {
    pub n: u64,
    pub k: usize,
    pub centering_a: f64,
    pub records: Vec<TrialRecord>,
    pub ecdf: Ecdf,
    pub ks_vs_gumbel: KsReport,
}

/// Runs the limit-law experiment for every configured sample size.
///
/// Trial `t` of the sample size at position `i` in `n_list` uses stream id
/// `i * trials + t` (its global trial index), so any partition of trials
/// across workers produces the same records; results are collected by index.
pub fn run_limit_experiment(cfg: &ExperimentConfig) -> Result<Vec<LimitRunResult>> {
    if cfg.trials < 1 {
        return Err(Error::TooFewTrials {
            context: "limit experiment",
            min: 1,
            trials: cfg.trials,
        });
    }
    // Validate every n upfront so no partial work happens on bad configs.
    for &n in &cfg.n_list {
        let norm = centering(n, cfg.k)?;
        if (cfg.k as u64) > n + 1 {
            return Err(Error::WindowOrderTooLarge {
                k: cfg.k,
                n: n as usize,
                max: n as usize + 1,
            });
        }
        debug_assert_eq!(norm.n, n);
    }

    let mut out = Vec::with_capacity(cfg.n_list.len());
    for (index, &n) in cfg.n_list.iter().enumerate() {
        let a = centering(n, cfg.k)?.a;
        let base = index as u64 * cfg.trials;
        let records: Vec<TrialRecord> = (0..cfg.trials)
            .into_par_iter()
            .map(|t| {
                let key = StreamKey::new(cfg.seed, base + t);
                let m_value = simulate_max_spacing(n as usize, cfg.k, cfg.path, key);
                TrialRecord {
                    trial: t,
                    m_value,
                    t_normalized: n as f64 * m_value - a,
                }
            })
            .collect();
        let ecdf = Ecdf::from_unsorted(records.iter().map(|r| r.t_normalized).collect())?;
        let ks_vs_gumbel = ks_one_sample(&ecdf, gumbel_cdf, cfg.alpha);
        out.push(LimitRunResult {
            n,
            k: cfg.k,
            centering_a: a,
            records,
            ecdf,
            ks_vs_gumbel,
        });
    }
    Ok(out)
}

fn simulate_max_spacing(n: usize, k: usize, path: SamplingPath, key: StreamKey) -> f64 {
    let sample = match path {
        SamplingPath::UniformSort => sample_uniform_sorted(n, key),
        SamplingPath::ExponentialRepresentation => {
            let draw = sample_exponentials(n + 1, key).expect("n + 1 >= 1");
            spacings_from_exponentials(&draw)
        }
    };
    max_k_spacing(&sample, k)
        .expect("k validated against every configured n")
        .m_value
}

/// Runs a closure inside a worker pool of the requested size; `None` uses
/// the ambient pool. Output does not depend on the choice.
pub fn with_workers<R: Send>(workers: Option<usize>, f: impl FnOnce() -> R + Send) -> R {
    match workers {
        None => f(),
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build()
            .expect("worker pool")
            .install(f),
    }
}
