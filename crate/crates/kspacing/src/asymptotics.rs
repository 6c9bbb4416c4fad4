//! Closed-form limit quantities: centering constants, the Gumbel law,
//! integer-shape gamma tails, and the threshold sequences used by the
//! m-dependent maxima experiments.

use crate::error::{Error, Result};
use crate::summation::CompensatedSum;
use serde::{Deserialize, Serialize};

/// Centering constant for the normalized maximal k-spacing,
/// `a(n, k) = log n + (k-1) log log n - log (k-1)!`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LimitNormalization {
    pub n: u64,
    pub k: usize,
    /// The centering constant; `n * M - a` is asymptotically standard Gumbel.
    pub a: f64,
}

/// Threshold sequence for non-exceedance experiments: `y_n = a(n, k) + x`
/// with target intensity `xi = exp(-x)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WatsonThreshold {
    pub k: usize,
    pub x: f64,
    pub xi: f64,
    pub y_n: f64,
}

/// Integer-shape (Erlang) gamma distribution, standard scale.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GammaTail {
    shape: usize,
}

impl GammaTail {
    pub fn new(shape: usize) -> Result<Self> {
        if shape == 0 {
            return Err(Error::ZeroGammaShape);
        }
        Ok(Self { shape })
    }

    pub fn shape(&self) -> usize {
        self.shape
    }
}

/// `log(m!)` via a compensated sum of logarithms; exact at m = 0, 1.
pub fn ln_factorial(m: usize) -> f64 {
    let mut acc = CompensatedSum::new();
    for j in 2..=m {
        acc.add((j as f64).ln());
    }
    acc.value()
}

fn min_n_for(k: usize) -> u64 {
    if k == 1 {
        1
    } else {
        3
    }
}

/// Centering constant of the limit law.
///
/// For `k = 1` this is exactly `log n`. For `k >= 2` the `log log n` term
/// requires `n >= 3`; smaller `n` is a domain error rather than a clamp.
pub fn centering(n: u64, k: usize) -> Result<LimitNormalization> {
    if k < 1 {
        return Err(Error::WindowOrderZero);
    }
    let min = min_n_for(k);
    if n < min {
        return Err(Error::CenteringDomain { n, k, min });
    }
    let a = if k == 1 {
        (n as f64).ln()
    } else {
        let log_n = (n as f64).ln();
        log_n + (k as f64 - 1.0) * log_n.ln() - ln_factorial(k - 1)
    };
    Ok(LimitNormalization { n, k, a })
}

/// Standard Gumbel distribution function `exp(-exp(-t))`.
pub fn gumbel_cdf(t: f64) -> f64 {
    (-(-t).exp()).exp()
}

/// Inverse of [`gumbel_cdf`]: `-log(-log p)` for `p` in `(0, 1)`.
pub fn gumbel_quantile(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::ProbabilityOutOfRange { p });
    }
    Ok(-(-p.ln()).ln())
}

/// Upper-tail p-value of an observed maximal k-spacing under the limit law.
///
/// Forms `t = n * m - a(n, k)` and returns `1 - exp(-exp(-t))` through
/// `expm1`, which keeps relative accuracy when `exp(-t)` is tiny. The value
/// is a first-order asymptotic approximation; for `k >= 2` the centering
/// converges at `log log` speed, so small-n p-values are coarse.
pub fn pvalue_max_k_spacing(n: u64, k: usize, m_observed: f64) -> Result<f64> {
    if !(m_observed > 0.0 && m_observed <= 1.0) {
        return Err(Error::ObservedSpacingOutOfRange { m: m_observed });
    }
    let a = centering(n, k)?.a;
    let t = (n as f64) * m_observed - a;
    Ok(-(-(-t).exp()).exp_m1())
}

/// Exact Erlang upper tail `P(Y > y) = exp(-y) * sum_{j<shape} y^j / j!`.
///
/// Terms are accumulated in increasing `j` with the exponential factored
/// out; no overflow for `y <= 700` at the integer shapes used here.
pub fn gamma_tail_exact(g: GammaTail, y: f64) -> Result<f64> {
    if y < 0.0 || y.is_nan() {
        return Err(Error::NegativeTailPoint { y });
    }
    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    for j in 1..g.shape() {
        term *= y / j as f64;
        sum += term;
    }
    Ok(((-y).exp() * sum).min(1.0))
}

/// First-order tail `y^{shape-1} exp(-y) / (shape-1)!`.
///
/// Computed by the Poisson-weight recurrence, so intermediate values stay
/// bounded by 1 for all `y`.
pub fn gamma_tail_asymptotic(g: GammaTail, y: f64) -> f64 {
    let mut weight = (-y).exp();
    for j in 1..g.shape() {
        weight *= y / j as f64;
    }
    weight
}

/// Threshold sequence `y_n = a(n, k) + x`, `xi = exp(-x)`.
pub fn watson_threshold(n: u64, k: usize, x: f64) -> Result<WatsonThreshold> {
    let a = centering(n, k)?.a;
    Ok(WatsonThreshold {
        k,
        x,
        xi: (-x).exp(),
        y_n: a + x,
    })
}

/// The tail-calibration product `n * P(Y_1 > y_n)` for the moving-sum
/// process, which converges to `xi = exp(-x)` from above as `n` grows.
pub fn as2_check(n: u64, k: usize, x: f64) -> Result<f64> {
    let threshold = watson_threshold(n, k, x)?;
    let tail = gamma_tail_exact(GammaTail::new(k)?, threshold.y_n)?;
    Ok(n as f64 * tail)
}

#[cfg(test)]
mod tests {
    use super::*;

    const LN_100: f64 = 4.605170185988091;
    // High-precision evaluations of the closed forms.
    const CENTERING_16_2: f64 = 3.792370162778008;
    const CENTERING_1E6_3: f64 = 18.37394720635635;
    const Y_1E6_2_0: f64 = 16.441302472440285;
    const INV_E: f64 = 0.36787944117144233;

    #[test]
    fn centering_k1_is_exactly_log_n() {
        let c = centering(100, 1).unwrap();
        assert_eq!(c.a, (100f64).ln());
        assert!((c.a - LN_100).abs() < 1e-14);
        // k = 1 must not touch log log n, which is undefined at n = 1.
        assert_eq!(centering(1, 1).unwrap().a, 0.0);
    }

    #[test]
    fn centering_closed_form_values() {
        assert!((centering(16, 2).unwrap().a - CENTERING_16_2).abs() < 1e-12);
        assert!((centering(1_000_000, 3).unwrap().a - CENTERING_1E6_3).abs() < 1e-12);
    }

    #[test]
    fn centering_domain_errors() {
        assert_eq!(
            centering(0, 1).unwrap_err(),
            Error::CenteringDomain { n: 0, k: 1, min: 1 }
        );
        assert_eq!(
            centering(2, 2).unwrap_err(),
            Error::CenteringDomain { n: 2, k: 2, min: 3 }
        );
        assert_eq!(centering(10, 0).unwrap_err(), Error::WindowOrderZero);
        assert!(centering(3, 2).is_ok());
    }

    #[test]
    fn centering_increases_in_n() {
        for k in 1..=6usize {
            let mut prev = f64::NEG_INFINITY;
            for n in 3..400u64 {
                let a = centering(n, k).unwrap().a;
                assert!(a > prev, "a(n, {k}) not increasing at n = {n}");
                prev = a;
            }
        }
    }

    #[test]
    fn gumbel_cdf_values() {
        assert!((gumbel_cdf(0.0) - INV_E).abs() < 1e-15);
        assert!((gumbel_cdf(0.36651292058166433) - 0.5).abs() < 1e-15);
        assert!((gumbel_cdf(10.0) - 0.9999546011007987).abs() < 1e-15);
    }

    #[test]
    fn gumbel_quantile_values() {
        assert!(gumbel_quantile(INV_E).unwrap().abs() < 1e-15);
        assert!((gumbel_quantile(0.5).unwrap() - 0.36651292058166433).abs() < 1e-14);
        assert!((gumbel_quantile(0.99).unwrap() - 4.60014922677658).abs() < 1e-12);
    }

    #[test]
    fn gumbel_quantile_domain() {
        for p in [0.0, 1.0, -0.5, 1.5, f64::NAN] {
            assert!(gumbel_quantile(p).is_err(), "p = {p} should be rejected");
        }
    }

    #[test]
    fn pvalue_at_zero_statistic() {
        // m = a / n makes t = 0 and p = 1 - 1/e.
        let a = centering(100, 1).unwrap().a;
        let p = pvalue_max_k_spacing(100, 1, a / 100.0).unwrap();
        assert!((p - (1.0 - INV_E)).abs() < 1e-15);
    }

    #[test]
    fn pvalue_survives_extreme_statistic() {
        // m = 1 at n = 100 gives t ~ 95.4 and a p-value around 1e-42 that
        // must remain strictly positive.
        let p = pvalue_max_k_spacing(100, 1, 1.0).unwrap();
        assert!(p > 0.0 && p < 1e-40);
    }

    #[test]
    fn pvalue_rejects_bad_m() {
        assert!(pvalue_max_k_spacing(100, 1, 0.0).is_err());
        assert!(pvalue_max_k_spacing(100, 1, -0.2).is_err());
        assert!(pvalue_max_k_spacing(100, 1, 1.2).is_err());
        assert!(pvalue_max_k_spacing(100, 1, f64::NAN).is_err());
    }

    #[test]
    fn pvalue_decreases_in_m() {
        // Strict decrease away from the float saturation ends (p rounds to
        // exactly 1 once exp(-t) > 37.4, i.e. t < -3.62), non-increase
        // everywhere.
        let a = centering(1000, 2).unwrap().a;
        let mut prev = 2.0f64;
        for i in 0..=200 {
            let t = -3.0 + 43.0 * i as f64 / 200.0;
            let p = pvalue_max_k_spacing(1000, 2, (a + t) / 1000.0).unwrap();
            assert!(p < prev, "t = {t}");
            prev = p;
        }
        let mut wide_prev = 1.0f64;
        for i in 1..100 {
            let p = pvalue_max_k_spacing(1000, 2, i as f64 / 100.0).unwrap();
            assert!(p <= wide_prev);
            wide_prev = p;
        }
    }

    #[test]
    fn gamma_tail_exact_values() {
        let g1 = GammaTail::new(1).unwrap();
        let g2 = GammaTail::new(2).unwrap();
        assert!((gamma_tail_exact(g1, 1.0).unwrap() - INV_E).abs() < 1e-15);
        assert_eq!(gamma_tail_exact(g2, 0.0).unwrap(), 1.0);
        assert!((gamma_tail_exact(g2, 10.0).unwrap() - 4.993992273873334e-4).abs() < 1e-18);
    }

    #[test]
    fn gamma_tail_domain() {
        assert!(GammaTail::new(0).is_err());
        let g = GammaTail::new(2).unwrap();
        assert!(gamma_tail_exact(g, -1.0).is_err());
    }

    #[test]
    fn tail_ratio_examples() {
        let g1 = GammaTail::new(1).unwrap();
        for y in [0.5, 3.0, 20.0] {
            let ratio = gamma_tail_exact(g1, y).unwrap() / gamma_tail_asymptotic(g1, y);
            assert_eq!(ratio, 1.0, "shape-1 tail is its own first-order form");
        }
        let g2 = GammaTail::new(2).unwrap();
        let r2 = gamma_tail_exact(g2, 10.0).unwrap() / gamma_tail_asymptotic(g2, 10.0);
        assert!((r2 - 1.1).abs() < 1e-13);
        let g3 = GammaTail::new(3).unwrap();
        let r3 = gamma_tail_exact(g3, 100.0).unwrap() / gamma_tail_asymptotic(g3, 100.0);
        assert!((r3 - 1.0202).abs() < 1e-12);
    }

    #[test]
    fn watson_threshold_values() {
        let t = watson_threshold(1000, 1, 0.0).unwrap();
        assert_eq!(t.y_n, (1000f64).ln());
        assert_eq!(t.xi, 1.0);
        let t2 = watson_threshold(1_000_000, 2, 0.0).unwrap();
        assert!((t2.y_n - Y_1E6_2_0).abs() < 1e-12);
        let t3 = watson_threshold(50, 4, std::f64::consts::LN_2).unwrap();
        assert!((t3.xi - 0.5).abs() < 1e-15);
    }

    #[test]
    fn as2_is_exact_for_k1() {
        for n in [1u64, 10, 1000, 1_000_000_000, 10u64.pow(14)] {
            let v = as2_check(n, 1, 0.0).unwrap();
            assert!((v - 1.0).abs() < 1e-12, "n = {n}: {v}");
        }
        let v = as2_check(12345, 1, 1.5).unwrap();
        assert!((v - (-1.5f64).exp()).abs() < 1e-12 * v);
    }

    #[test]
    fn as2_respects_centering_domain() {
        assert!(as2_check(2, 2, 0.0).is_err());
    }

    #[test]
    fn ln_factorial_small_values() {
        assert_eq!(ln_factorial(0), 0.0);
        assert_eq!(ln_factorial(1), 0.0);
        assert!((ln_factorial(2) - std::f64::consts::LN_2).abs() < 1e-15);
        assert!((ln_factorial(5) - (120f64).ln()).abs() < 1e-13);
        assert!((ln_factorial(20) - (2432902008176640000f64).ln()).abs() < 1e-12);
    }
}
