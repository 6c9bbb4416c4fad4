//! Compensated (Neumaier) summation.
//!
//! Sums of up to 10^7 positive terms feed identities that are checked to
//! 1e-10 relative accuracy; naive accumulation drifts by ~n*eps and would
//! eat that budget on its own.

/// Running Neumaier sum. The logical value is `sum + compensation`.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.compensation += (self.sum - t) + v;
        } else {
            self.compensation += (v - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }

    /// The unevaluated (sum, compensation) pair; their exact sum carries
    /// more precision than the collapsed [`value`](Self::value).
    #[inline]
    pub fn parts(&self) -> (f64, f64) {
        (self.sum, self.compensation)
    }
}

/// Compensated sum of a slice.
pub fn compensated_total(xs: &[f64]) -> f64 {
    let mut acc = CompensatedSum::new();
    for &x in xs {
        acc.add(x);
    }
    acc.value()
}
