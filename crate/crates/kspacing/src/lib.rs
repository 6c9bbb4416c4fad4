//! Maximal k-spacing statistics of uniform samples.
//!
//! The maximal k-spacing of `n` points on `[0, 1]` is the longest open
//! subinterval containing exactly `k - 1` of them. Normalized as
//! `n * M - (log n + (k-1) log log n - log (k-1)!)`, it converges in
//! distribution to the standard Gumbel law. This crate provides:
//!
//! - exact spacing scans with a brute-force oracle ([`spacing`]);
//! - reproducible sampling by two distribution-equal routes, plus the
//!   moving-sum identity linking them ([`sampling`]);
//! - the closed-form limit machinery: centering constants, Gumbel CDF and
//!   quantiles, p-values, Erlang tails and threshold sequences
//!   ([`asymptotics`]);
//! - empirical checks of the m-dependent maxima ingredients
//!   ([`watson`]);
//! - a deterministic, parallel Monte Carlo driver with KS goodness-of-fit
//!   reports ([`experiment`]).
//!
//! All randomness flows through [`StreamKey`]: a `(seed, stream id)` pair
//! that pins one ChaCha stream, making every experiment reproducible
//! byte-for-byte across runs, platforms and worker counts.

pub mod asymptotics;
pub mod error;
pub mod experiment;
pub mod sampling;
pub mod spacing;
pub mod summation;
pub mod watson;

pub use asymptotics::{
    as2_check, centering, gamma_tail_asymptotic, gamma_tail_exact, gumbel_cdf, gumbel_quantile,
    pvalue_max_k_spacing, watson_threshold, GammaTail, LimitNormalization, WatsonThreshold,
};
pub use error::{Error, Result};
pub use experiment::{
    kolmogorov_sf, ks_one_sample, ks_two_sample, run_limit_experiment, with_workers, Ecdf,
    ExperimentConfig, KsReport, LimitRunResult, SamplingPath, TrialRecord,
};
pub use sampling::{
    moving_sum_identity_check, moving_sums, sample_exponentials, sample_uniform_sorted,
    spacings_from_exponentials, InnovationDraw, MovingSumSeries, StreamKey,
};
pub use spacing::{
    all_k_spacings, max_k_spacing, naive_max_k_spacing, order_statistics, KSpacingResult,
    SortedSample,
};
pub use watson::{
    as1_estimate, independence_experiment, moving_sum_process, overlapping_pair_maxima,
    slutsky_remainder, slutsky_statistic, watson_limit_estimate, As1Estimate, As1Outcome,
    IndependenceReport, MDepProcess, PairMaxima, StreamMode, WatsonLimitReport,
};
