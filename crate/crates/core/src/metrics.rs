//! W1 on the line, running moments, histograms, log-log slopes.

use alloc::vec::Vec;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct W1Result {
    pub distance: f64,
    pub n: usize,
}

/// W1 between two equal-size empirical measures: sort, pair, average.
pub fn w1_empirical(a: &[f64], b: &[f64]) -> Result<W1Result> {
    check_pair(a, b)?;
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_unstable_by(f64::total_cmp);
    b.sort_unstable_by(f64::total_cmp);
    w1_sorted(&a, &b)
}

/// Like [`w1_empirical`] for inputs that are already sorted ascending.
pub fn w1_sorted(a: &[f64], b: &[f64]) -> Result<W1Result> {
    check_pair(a, b)?;
    let sum: f64 = a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum();
    Ok(W1Result { distance: sum / a.len() as f64, n: a.len() })
}

fn check_pair(a: &[f64], b: &[f64]) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch { a: a.len(), b: b.len() });
    }
    if a.is_empty() {
        return Err(Error::Empty);
    }
    Ok(())
}

/// Streaming central moments up to fourth order, mergeable.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Accumulator {
    pub n: u64,
    pub mean: f64,
    m2: f64,
    m3: f64,
    m4: f64,
}

impl Accumulator {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn push(&mut self, x: f64) {
        let n1 = self.n as f64;
        self.n += 1;
        let n = self.n as f64;
        let d = x - self.mean;
        let dn = d / n;
        let dn2 = dn * dn;
        let t1 = d * dn * n1;
        self.mean += dn;
        self.m4 += t1 * dn2 * (n * n - 3.0 * n + 3.0) + 6.0 * dn2 * self.m2 - 4.0 * dn * self.m3;
        self.m3 += t1 * dn * (n - 2.0) - 3.0 * dn * self.m2;
        self.m2 += t1;
    }

    pub fn merge(&mut self, o: &Accumulator) {
        if o.n == 0 {
            return;
        }
        if self.n == 0 {
            *self = *o;
            return;
        }
        let (na, nb) = (self.n as f64, o.n as f64);
        let n = na + nb;
        let d = o.mean - self.mean;
        let d2 = d * d;
        let m2 = self.m2 + o.m2 + d2 * na * nb / n;
        let m3 = self.m3 + o.m3 + d * d2 * na * nb * (na - nb) / (n * n) + 3.0 * d * (na * o.m2 - nb * self.m2) / n;
        let m4 = self.m4
            + o.m4
            + d2 * d2 * na * nb * (na * na - na * nb + nb * nb) / (n * n * n)
            + 6.0 * d2 * (na * na * o.m2 + nb * nb * self.m2) / (n * n)
            + 4.0 * d * (na * o.m3 - nb * self.m3) / n;
        self.mean += d * nb / n;
        self.m2 = m2;
        self.m3 = m3;
        self.m4 = m4;
        self.n += o.n;
    }

    /// Unbiased (n-1) variance; 0 for a single value.
    pub fn variance(&self) -> f64 {
        if self.n < 2 {
            0.0
        } else {
            (self.m2 / (self.n as f64 - 1.0)).max(0.0)
        }
    }

    /// Standard error of the mean.
    pub fn se_mean(&self) -> f64 {
        libm::sqrt(self.variance() / self.n as f64)
    }

    /// Large-sample standard error of the variance: sqrt((m4 - s^4) / n).
    pub fn se_variance(&self) -> f64 {
        let n = self.n as f64;
        let mu2 = self.m2 / n;
        let mu4 = self.m4 / n;
        libm::sqrt(((mu4 - mu2 * mu2) / n).max(0.0))
    }

    pub fn skewness(&self) -> f64 {
        let n = self.n as f64;
        libm::sqrt(n) * self.m3 / libm::pow(self.m2, 1.5)
    }

    pub fn excess_kurtosis(&self) -> f64 {
        let n = self.n as f64;
        n * self.m4 / (self.m2 * self.m2) - 3.0
    }
}

impl Extend<f64> for Accumulator {
    fn extend<I: IntoIterator<Item = f64>>(&mut self, iter: I) {
        for x in iter {
            self.push(x);
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HistogramSpec {
    pub lo: f64,
    pub hi: f64,
    pub bins: usize,
}

impl Default for HistogramSpec {
    fn default() -> Self {
        HistogramSpec { lo: -15.0, hi: 15.0, bins: 100 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    pub spec: HistogramSpec,
    /// Values outside the range land in the end bins.
    pub counts: Vec<u64>,
}

impl Histogram {
    pub fn new(spec: HistogramSpec) -> Result<Self> {
        if spec.bins == 0 || !(spec.lo < spec.hi) {
            return Err(Error::InvalidHistogram);
        }
        Ok(Histogram { spec, counts: alloc::vec![0; spec.bins] })
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let s = &self.spec;
        let f = (x - s.lo) / (s.hi - s.lo) * s.bins as f64;
        let i = if f < 0.0 || f.is_nan() { 0 } else { (f as usize).min(s.bins - 1) };
        self.counts[i] += 1;
    }

    pub fn edges(&self) -> Vec<f64> {
        let s = &self.spec;
        (0..=s.bins).map(|i| s.lo + (s.hi - s.lo) * i as f64 / s.bins as f64).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleSummary {
    pub n: usize,
    pub mean: f64,
    pub variance: f64,
    pub histogram: Histogram,
    pub collisions_total: u64,
    pub wall_time: f64,
}

/// Moments and histogram of final positions plus pass-through counters.
pub fn summarize(xs: &[f64], spec: HistogramSpec, collisions_total: u64, wall_time: f64) -> Result<EnsembleSummary> {
    if xs.is_empty() {
        return Err(Error::Empty);
    }
    let mut acc = Accumulator::new();
    let mut histogram = Histogram::new(spec)?;
    for &x in xs {
        acc.push(x);
        histogram.add(x);
    }
    Ok(EnsembleSummary {
        n: xs.len(),
        mean: acc.mean,
        variance: acc.variance(),
        histogram,
        collisions_total,
        wall_time,
    })
}

/// Least-squares slope of log y against log x.
pub fn fit_order(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() {
        return Err(Error::LengthMismatch { a: xs.len(), b: ys.len() });
    }
    if xs.len() < 3 {
        return Err(Error::TooFewPoints(xs.len()));
    }
    if let Some(&bad) = xs.iter().chain(ys).find(|v| !(**v > 0.0)) {
        return Err(Error::NonPositiveValue(bad));
    }
    let n = xs.len() as f64;
    let lx: Vec<f64> = xs.iter().map(|x| libm::log(*x)).collect();
    let ly: Vec<f64> = ys.iter().map(|y| libm::log(*y)).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    Ok(sxy / sxx)
}
