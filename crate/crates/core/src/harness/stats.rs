//! Kolmogorov-Smirnov statistics and Gaussian kernel density estimates.

use crate::error::{domain, Result};

/// sup_x |F_n(x) − F(x)| of the samples against `cdf`.
pub fn ks_statistic(samples: &[f64], cdf: impl Fn(f64) -> f64) -> Result<f64> {
    if samples.is_empty() {
        return domain("KS statistic of an empty sample");
    }
    let mut xs = samples.to_vec();
    if xs.iter().any(|x| x.is_nan()) {
        return domain("sample contains NaN");
    }
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in xs.iter().enumerate() {
        let f = cdf(x);
        d = d.max(f - i as f64 / n).max((i + 1) as f64 / n - f);
    }
    Ok(d)
}

/// sup_x |F_n(x) − G_m(x)| of two samples.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return domain("KS statistic of an empty sample");
    }
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    if a.iter().chain(&b).any(|x| x.is_nan()) {
        return domain("sample contains NaN");
    }
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (n, m) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / n - j as f64 / m).abs());
    }
    Ok(d)
}

/// P(K > x) for the Kolmogorov distribution.
pub fn kolmogorov_sf(x: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    if x < 1.0 {
        // Jacobi form, accurate for small x.
        let t = -std::f64::consts::PI.powi(2) / (8.0 * x * x);
        let mut s = 0.0;
        for k in (1..40).step_by(2) {
            s += (t * (k * k) as f64).exp();
        }
        return 1.0 - (2.0 * std::f64::consts::PI).sqrt() / x * s;
    }
    let mut s = 0.0;
    for k in 1..100 {
        let term = (-2.0 * (k * k) as f64 * x * x).exp();
        s += if k % 2 == 1 { term } else { -term };
        if term < 1e-18 {
            break;
        }
    }
    (2.0 * s).clamp(0.0, 1.0)
}

fn kolmogorov_isf(level: f64) -> f64 {
    let (mut lo, mut hi) = (0.2, 5.0);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if kolmogorov_sf(mid) > level {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Approximate p-value of a one-sample statistic `d` from `n` draws
/// (Stephens' finite-sample correction).
pub fn ks_pvalue(d: f64, n: usize) -> f64 {
    let s = (n as f64).sqrt();
    kolmogorov_sf(d * (s + 0.12 + 0.11 / s))
}

/// Critical value of the one-sample statistic at significance `level`.
pub fn ks_critical(n: usize, level: f64) -> f64 {
    let s = (n as f64).sqrt();
    kolmogorov_isf(level) / (s + 0.12 + 0.11 / s)
}

/// Critical value of the two-sample statistic at significance `level`.
pub fn ks_critical_two(n: usize, m: usize, level: f64) -> f64 {
    let e = (n as f64 * m as f64 / (n + m) as f64).sqrt();
    kolmogorov_isf(level) / (e + 0.12 + 0.11 / e)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bandwidth {
    Silverman,
    Fixed(f64),
}

/// Bandwidth and evaluation grid lo, lo + step, … ≤ hi.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KdeSpec {
    pub bandwidth: Bandwidth,
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
}

impl KdeSpec {
    pub fn new(bandwidth: Bandwidth, lo: f64, hi: f64, step: f64) -> Result<Self> {
        if !(lo < hi && step > 0.0 && lo.is_finite() && hi.is_finite()) {
            return domain(format!("bad grid {lo}:{hi}:{step}"));
        }
        if let Bandwidth::Fixed(h) = bandwidth {
            if !(h > 0.0 && h.is_finite()) {
                return domain(format!("bandwidth must be positive, got {h}"));
            }
        }
        Ok(Self { bandwidth, lo, hi, step })
    }

    pub fn grid(&self) -> Vec<f64> {
        let n = ((self.hi - self.lo) / self.step + 1e-9).floor() as usize;
        (0..=n).map(|i| self.lo + i as f64 * self.step).collect()
    }
}

/// Silverman's rule 0.9 min(sd, IQR/1.34) n^{−1/5}.
pub fn silverman_bandwidth(samples: &[f64]) -> Result<f64> {
    let n = samples.len();
    if n < 2 {
        return domain("bandwidth needs at least two samples");
    }
    let mean = samples.iter().sum::<f64>() / n as f64;
    let sd = (samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt();
    let mut xs = samples.to_vec();
    xs.sort_by(f64::total_cmp);
    let iqr = quantile_sorted(&xs, 0.75) - quantile_sorted(&xs, 0.25);
    let spread = if iqr > 0.0 { sd.min(iqr / 1.34) } else { sd };
    if !(spread > 0.0) {
        return domain("samples have zero spread");
    }
    Ok(0.9 * spread * (n as f64).powf(-0.2))
}

fn quantile_sorted(xs: &[f64], q: f64) -> f64 {
    let h = q * (xs.len() - 1) as f64;
    let i = h.floor() as usize;
    let f = h - i as f64;
    if i + 1 < xs.len() {
        xs[i] + f * (xs[i + 1] - xs[i])
    } else {
        xs[i]
    }
}

/// Gaussian KDE on the grid of `spec`; returns (x, f̂(x)) pairs and the bandwidth.
pub fn kde(samples: &[f64], spec: &KdeSpec) -> Result<(Vec<(f64, f64)>, f64)> {
    if samples.is_empty() {
        return domain("KDE of an empty sample");
    }
    let h = match spec.bandwidth {
        Bandwidth::Fixed(h) => h,
        Bandwidth::Silverman => silverman_bandwidth(samples)?,
    };
    let mut xs = samples.to_vec();
    xs.sort_by(f64::total_cmp);
    let norm = 1.0 / (xs.len() as f64 * h * (2.0 * std::f64::consts::PI).sqrt());
    let reach = 9.0 * h;
    let out = spec
        .grid()
        .into_iter()
        .map(|x| {
            let a = xs.partition_point(|&v| v < x - reach);
            let b = xs.partition_point(|&v| v <= x + reach);
            let s: f64 = xs[a..b].iter().map(|v| (-0.5 * ((x - v) / h).powi(2)).exp()).sum();
            (x, s * norm)
        })
        .collect();
    Ok((out, h))
}
