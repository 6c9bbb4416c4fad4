//! Exact k-spacing computations for sorted samples on the unit interval.
//!
//! A sample of `n` interior points partitions `[0, 1]` via the implicit
//! boundary sentinels `u(0) = 0` and `u(n+1) = 1`. The k-spacing starting at
//! window index `i` is `u(i+k) - u(i)`, i.e. the length of the open interval
//! that contains exactly `k - 1` sample points when all points are distinct.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// An ascending sample of points in `[0, 1]`.
///
/// The boundary sentinels are implicit: `point(0) = 0` and `point(n+1) = 1`
/// are produced by the accessor, not stored, so a sample of `n` points
/// occupies exactly `n` slots.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SortedSample {
    values: Vec<f64>,
}

impl SortedSample {
    /// Wraps an already-sorted vector, validating range and order.
    pub fn from_sorted(values: Vec<f64>) -> Result<Self> {
        let mut prev = 0.0f64;
        for (index, &value) in values.iter().enumerate() {
            if !(0.0..=1.0).contains(&value) {
                return Err(Error::ValueOutsideUnitInterval { index, value });
            }
            if value < prev {
                return Err(Error::UnsortedSample {
                    index,
                    value,
                    previous: prev,
                });
            }
            prev = value;
        }
        Ok(Self { values })
    }

    /// Wraps a vector the caller guarantees to be sorted and in range.
    pub(crate) fn from_sorted_unchecked(values: Vec<f64>) -> Self {
        debug_assert!(values
            .windows(2)
            .all(|w| w[0] <= w[1] && (0.0..=1.0).contains(&w[0])));
        debug_assert!(values.last().map_or(true, |v| (0.0..=1.0).contains(v)));
        Self { values }
    }

    /// Number of interior points.
    pub fn n(&self) -> usize {
        self.values.len()
    }

    /// Interior points, ascending.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Order-statistic accessor with boundary sentinels.
    ///
    /// `point(0) = 0`, `point(n+1) = 1`, and `point(i) = values[i-1]` in
    /// between. Panics when `i > n + 1`.
    #[inline]
    pub fn point(&self, i: usize) -> f64 {
        let n = self.values.len();
        if i == 0 {
            0.0
        } else if i == n + 1 {
            1.0
        } else {
            self.values[i - 1]
        }
    }
}

/// The maximal k-spacing of a sample and where it was attained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KSpacingResult {
    /// Window order (the spacing spans k consecutive elementary gaps).
    pub k: usize,
    /// The maximal k-spacing, in `(0, 1]`.
    pub m_value: f64,
    /// Smallest window index attaining the maximum, in `0..=n+1-k`.
    pub start_index: usize,
}

fn check_window_order(n: usize, k: usize) -> Result<()> {
    if k < 1 {
        return Err(Error::WindowOrderZero);
    }
    if k > n + 1 {
        return Err(Error::WindowOrderTooLarge { k, n, max: n + 1 });
    }
    Ok(())
}

/// Sorts a raw batch of points into a [`SortedSample`].
///
/// The input is copied; ties are kept. Entries outside `[0, 1]` (including
/// NaN) are rejected with the offending input index.
pub fn order_statistics(raw: &[f64]) -> Result<SortedSample> {
    for (index, &value) in raw.iter().enumerate() {
        if !(0.0..=1.0).contains(&value) {
            return Err(Error::ValueOutsideUnitInterval { index, value });
        }
    }
    let mut values = raw.to_vec();
    values.sort_unstable_by(f64::total_cmp);
    Ok(SortedSample::from_sorted_unchecked(values))
}

/// Maximal k-spacing in a single pass over the window index.
///
/// Ties are broken toward the smallest start index. Requires `1 <= k <= n+1`.
pub fn max_k_spacing(s: &SortedSample, k: usize) -> Result<KSpacingResult> {
    let n = s.n();
    check_window_order(n, k)?;
    let mut best = f64::NEG_INFINITY;
    let mut best_index = 0usize;
    for i in 0..=(n + 1 - k) {
        let gap = s.point(i + k) - s.point(i);
        if gap > best {
            best = gap;
            best_index = i;
        }
    }
    Ok(KSpacingResult {
        k,
        m_value: best,
        start_index: best_index,
    })
}

/// All `n + 2 - k` window values `u(j+k) - u(j)`, for diagnostics.
pub fn all_k_spacings(s: &SortedSample, k: usize) -> Result<Vec<f64>> {
    let n = s.n();
    check_window_order(n, k)?;
    Ok((0..=(n + 1 - k))
        .map(|j| s.point(j + k) - s.point(j))
        .collect())
}

/// Reference implementation of [`max_k_spacing`], used as a test oracle.
///
/// Materializes every window value through the accessor and scans the list,
/// sharing no state with the single-pass routine. Both paths evaluate the
/// same subtraction `u(i+k) - u(i)`, so agreement is exact, not approximate.
pub fn naive_max_k_spacing(s: &SortedSample, k: usize) -> Result<KSpacingResult> {
    let gaps = all_k_spacings(s, k)?;
    let mut best = f64::NEG_INFINITY;
    let mut best_index = 0usize;
    for (i, &gap) in gaps.iter().enumerate() {
        if gap > best {
            best = gap;
            best_index = i;
        }
    }
    Ok(KSpacingResult {
        k,
        m_value: best,
        start_index: best_index,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(values: &[f64]) -> SortedSample {
        SortedSample::from_sorted(values.to_vec()).unwrap()
    }

    #[test]
    fn order_statistics_sorts_a_copy() {
        let raw = [0.9, 0.1, 0.5];
        let s = order_statistics(&raw).unwrap();
        assert_eq!(s.values(), &[0.1, 0.5, 0.9]);
        assert_eq!(raw, [0.9, 0.1, 0.5]);
    }

    #[test]
    fn order_statistics_empty() {
        let s = order_statistics(&[]).unwrap();
        assert_eq!(s.n(), 0);
        assert!(s.values().is_empty());
    }

    #[test]
    fn order_statistics_keeps_ties() {
        let s = order_statistics(&[0.5, 0.5]).unwrap();
        assert_eq!(s.values(), &[0.5, 0.5]);
    }

    #[test]
    fn order_statistics_rejects_out_of_range() {
        match order_statistics(&[0.2, 1.5, 0.1]) {
            Err(Error::ValueOutsideUnitInterval { index: 1, value }) => assert_eq!(value, 1.5),
            other => panic!("expected domain error, got {other:?}"),
        }
        assert!(order_statistics(&[f64::NAN]).is_err());
        assert!(order_statistics(&[-0.1]).is_err());
    }

    #[test]
    fn accessor_produces_sentinels() {
        let s = sample(&[0.25, 0.75]);
        assert_eq!(s.point(0), 0.0);
        assert_eq!(s.point(1), 0.25);
        assert_eq!(s.point(2), 0.75);
        assert_eq!(s.point(3), 1.0);
    }

    #[test]
    fn from_sorted_rejects_disorder() {
        match SortedSample::from_sorted(vec![0.5, 0.4]) {
            Err(Error::UnsortedSample { index: 1, .. }) => {}
            other => panic!("expected order error, got {other:?}"),
        }
    }

    #[test]
    fn max_k_spacing_four_point_example() {
        // Windows (0,2),(1,3),(2,4),(3,5) have gaps 0.4, 0.4, 0.5, 0.5;
        // the smallest argmax is window 2.
        let s = sample(&[0.1, 0.4, 0.5, 0.9]);
        let r = max_k_spacing(&s, 2).unwrap();
        assert_eq!(r.m_value, 0.5);
        assert_eq!(r.start_index, 2);
    }

    #[test]
    fn max_k_spacing_whole_interval() {
        let s = sample(&[0.3, 0.6, 0.61]);
        let r = max_k_spacing(&s, s.n() + 1).unwrap();
        assert_eq!(r.m_value, 1.0);
        assert_eq!(r.start_index, 0);
    }

    #[test]
    fn max_k_spacing_single_gaps() {
        // 1-spacings are 0.25, 0.5, 0.25.
        let s = sample(&[0.25, 0.75]);
        let r = max_k_spacing(&s, 1).unwrap();
        assert_eq!(r.m_value, 0.5);
        assert_eq!(r.start_index, 1);
    }

    #[test]
    fn window_order_is_validated() {
        let s = sample(&[0.5]);
        assert_eq!(max_k_spacing(&s, 0).unwrap_err(), Error::WindowOrderZero);
        assert_eq!(
            max_k_spacing(&s, 3).unwrap_err(),
            Error::WindowOrderTooLarge { k: 3, n: 1, max: 2 }
        );
    }

    #[test]
    fn all_k_spacings_examples() {
        let s = sample(&[0.25, 0.75]);
        assert_eq!(all_k_spacings(&s, 1).unwrap(), vec![0.25, 0.5, 0.25]);
        assert_eq!(all_k_spacings(&s, 3).unwrap(), vec![1.0]);
        let empty = sample(&[]);
        assert_eq!(all_k_spacings(&empty, 1).unwrap(), vec![1.0]);
    }

    #[test]
    fn naive_matches_examples() {
        let s = sample(&[0.1, 0.4, 0.5, 0.9]);
        let r = naive_max_k_spacing(&s, 2).unwrap();
        assert_eq!((r.m_value, r.start_index), (0.5, 2));
        let s2 = sample(&[0.25, 0.75]);
        let r2 = naive_max_k_spacing(&s2, 1).unwrap();
        assert_eq!((r2.m_value, r2.start_index), (0.5, 1));
        let r3 = naive_max_k_spacing(&s2, 3).unwrap();
        assert_eq!((r3.m_value, r3.start_index), (1.0, 0));
    }

    #[test]
    fn duplicates_yield_zero_width_windows() {
        let s = sample(&[0.5, 0.5, 0.5]);
        let gaps = all_k_spacings(&s, 1).unwrap();
        assert_eq!(gaps, vec![0.5, 0.0, 0.0, 0.5]);
        let r = max_k_spacing(&s, 1).unwrap();
        assert_eq!((r.m_value, r.start_index), (0.5, 0));
    }

    #[test]
    fn result_is_consistent_with_accessor() {
        let s = sample(&[0.11, 0.32, 0.54, 0.8, 0.99]);
        for k in 1..=s.n() + 1 {
            let r = max_k_spacing(&s, k).unwrap();
            assert_eq!(
                r.m_value,
                s.point(r.start_index + k) - s.point(r.start_index)
            );
        }
    }
}
