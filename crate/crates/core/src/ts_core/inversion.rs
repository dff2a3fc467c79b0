//! Fourier inversion of one-dimensional TS laws and sampling of the
//! TS components of the transition law.
//!
//! The cdf and pdf are tabulated once on an equispaced grid by the
//! trapezoidal Gil-Pelaez sums (one FFT each). Between grid points the cdf is
//! a quintic Hermite interpolant using the pdf and its slope. Outside the table the
//! Gil-Pelaez integrals are evaluated directly.

use super::cf::{LogCheb, TsLaw};
use super::measure::{integrate_on, RosinskiMeasure};
use crate::base_dists::{gamma_unchecked, RandomSource};
use crate::error::{domain, numerical, Error, Result};
use crate::quad::{adaptive, gl64, semi_infinite, Tol};
use crate::special_fn::{gamma, gamma_cdf, GammaCdfParams};
use num_complex::Complex64;
use rand_distr::{Distribution, StandardNormal};
use rustfft::FftPlanner;
use std::f64::consts::PI;
use std::sync::Arc;

/// Largest FFT length used for a table.
pub const MAX_FFT: usize = 1 << 22;
/// Smallest number of tabulated points.
pub const MIN_TABLE: usize = 2048;
/// |φ| at the truncation frequency above which a table is refused.
pub const MAX_CF_AT_CUTOFF: f64 = 1e-6;

/// How a table was built.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TableDiagnostics {
    pub fft_len: usize,
    pub period: f64,
    pub z_max: f64,
    pub cf_at_z_max: f64,
    pub half_width: f64,
    pub min_pdf: f64,
}

/// U(v) = ∫_v^∞ u^{−1−α} e^{−u^p} du for v > 0.
fn levy_tail_kernel(alpha: f64, p: f64, v: f64) -> f64 {
    // t = u^p: (1/p) ∫_{v^p}^∞ t^{−1−α/p} e^{−t} dt
    let a = v.powf(p);
    let scale = a.clamp(1e-300, 1.0);
    let g = |t: f64| t.powf(-1.0 - alpha / p) * (-t).exp();
    semi_infinite(g, a, scale, Tol::new(1e-300, 1e-6)).map(|r| r.0 / p).unwrap_or(f64::INFINITY)
}

/// Lévy mass of {|y| > x}.
fn levy_tail(law: &TsLaw, x: f64) -> f64 {
    let (alpha, p) = (law.alpha, law.p);
    let mut t = 0.0;
    for a in law.measure.atoms() {
        let r = super::measure::norm(&a.x);
        t += a.w * levy_tail_kernel(alpha, p, x / r);
    }
    if let Some((d, f)) = law.measure.density() {
        let (lo, hi) = d.support();
        let g = |r: f64| {
            let v = d.pdf(r);
            if v == 0.0 || r == 0.0 {
                0.0
            } else {
                v * levy_tail_kernel(alpha, p, x / r.abs())
            }
        };
        t += f * integrate_on(g, lo, hi, d.scale_hint(), Tol::new(1e-300, 1e-4)).unwrap_or(f64::INFINITY);
    }
    t
}

fn find_scale(law: &TsLaw) -> Result<f64> {
    let mag = |z: f64| -> Result<f64> { Ok(-law.exponent_1d(z)?.re) };
    let mut z = 1.0;
    let mut m = mag(z)?;
    let mut iter = 0;
    let (mut lo, mut hi);
    if m < 1.0 {
        loop {
            lo = z;
            z *= 2.0;
            m = mag(z)?;
            iter += 1;
            if m >= 1.0 {
                hi = z;
                break;
            }
            if iter > 400 {
                return numerical("characteristic function does not decay");
            }
        }
    } else {
        loop {
            hi = z;
            z *= 0.5;
            m = mag(z)?;
            iter += 1;
            if m < 1.0 {
                lo = z;
                break;
            }
            if iter > 400 {
                return numerical("could not bracket the scale of the law");
            }
        }
    }
    for _ in 0..12 {
        let mid = (lo * hi).sqrt();
        if mag(mid)? < 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo * hi).sqrt())
}

/// Tabulated cdf and pdf of a one-dimensional TS law.
#[derive(Debug, Clone)]
pub struct InversionTable {
    law: TsLaw,
    mu: f64,
    y0: f64,
    dy: f64,
    cdf: Vec<f64>,
    pdf: Vec<f64>,
    dpdf: Vec<f64>,
    cf: LogCheb,
    z_lo: f64,
    z_hi: f64,
    pub diagnostics: TableDiagnostics,
}

impl InversionTable {
    pub fn new(law: &TsLaw) -> Result<Self> {
        if law.measure.dim() != 1 {
            return Err(Error::Unsupported("Fourier inversion is one-dimensional".into()));
        }
        let mass = law.measure.total_mass();
        if !(mass > 0.0 && mass.is_finite()) {
            return domain(format!("TS law needs a measure with finite positive mass, got {mass}"));
        }
        let mu = match law.mean()? {
            Some(m) => m[0],
            None => return Err(Error::Unsupported("inversion needs a finite first moment".into())),
        };
        let zs = find_scale(law)?;
        let s = 1.0 / zs;
        // truncation frequency
        let mut z_max = zs;
        let mut cf_end = (law.exponent_1d(z_max)?.re).exp();
        while cf_end > 1e-14 && z_max < zs * 1e12 {
            z_max *= 2.0;
            cf_end = (law.exponent_1d(z_max)?.re).exp();
        }
        // half-width of the kept region
        let sd = law.variance()?.sqrt();
        let mut w = 30.0 * s;
        if sd.is_finite() {
            w = w.max(12.0 * sd);
        }
        let target = 1e-12;
        if levy_tail(law, w) > target {
            let mut lo = w;
            let mut hi = 2.0 * w;
            let mut guard = 0;
            while levy_tail(law, hi) > target {
                lo = hi;
                hi *= 2.0;
                guard += 1;
                if guard > 200 {
                    return numerical("Lévy tail does not decay");
                }
            }
            for _ in 0..20 {
                let mid = 0.5 * (lo + hi);
                if levy_tail(law, mid) > target {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            w = hi;
        }
        let period = 4.0 * w;
        let want = ((4.0 * z_max * period / (2.0 * PI)).max(32.0 * period / s)).max(2.0 * MIN_TABLE as f64);
        let mut n = (want.min(MAX_FFT as f64) as usize).next_power_of_two().min(MAX_FFT);
        // keep at least MIN_TABLE points in the kept half of the grid
        if n / 2 < MIN_TABLE {
            n = 2 * MIN_TABLE;
        }
        let h = 2.0 * PI / period;
        let z_top = h * (n - 1) as f64;
        let cf_top = if z_top < z_max { (law.exponent_1d(z_top)?.re).exp() } else { cf_end };
        if cf_top > MAX_CF_AT_CUTOFF {
            return numerical(format!(
                "FFT length cap reached: |cf| = {cf_top:.2e} at the largest frequency (alpha = {}, p = {})",
                law.alpha, law.p
            ));
        }
        let width = super::cf::panel_width(law.p);
        let z_lo = h * 0.5;
        let z_hi = z_top.max(z_max) * 1.01;
        let cf = LogCheb::build(|z| law.exponent_1d(z), z_lo, z_hi, width)?;
        let y0 = mu - 0.5 * period;
        let dy = period / n as f64;
        let shift = y0 / period;
        let mut a = vec![Complex64::new(0.0, 0.0); n];
        let mut b = vec![Complex64::new(0.0, 0.0); n];
        let mut dd = vec![Complex64::new(0.0, 0.0); n];
        for k in 1..n {
            let c = cf.eval(h * k as f64).expect("frequency inside the interpolation range");
            let ph = -2.0 * PI * (k as f64 * shift).rem_euclid(1.0);
            let v = (c + Complex64::new(0.0, ph)).exp();
            a[k] = v;
            b[k] = v / k as f64;
            dd[k] = v * (k as f64);
        }
        let mut planner = FftPlanner::<f64>::new();
        let fft = planner.plan_fft_forward(n);
        fft.process(&mut a);
        fft.process(&mut b);
        fft.process(&mut dd);
        let first = n / 4;
        let last = 3 * n / 4;
        let mut cdf = Vec::with_capacity(last - first + 1);
        let mut pdf = Vec::with_capacity(last - first + 1);
        let mut dpdf = Vec::with_capacity(last - first + 1);
        let mut min_pdf = f64::INFINITY;
        let mut run = 0.0f64;
        for j in first..=last {
            let y = y0 + j as f64 * dy;
            let f = h / PI * (0.5 + a[j].re);
            let fc = 0.5 + h * (y - mu) / (2.0 * PI) - b[j].im / PI;
            min_pdf = min_pdf.min(f);
            pdf.push(f.max(0.0));
            // d/dy of Re(φ e^{−izy}) is Re(−iz φ e^{−izy}) = z·Im(·)
            dpdf.push(h * h / PI * dd[j].im);
            run = run.max(fc.clamp(0.0, 1.0));
            cdf.push(run);
        }
        if min_pdf < -1e-6 {
            return numerical(format!("inverted density is negative ({min_pdf:.2e})"));
        }
        Ok(Self {
            law: law.clone(),
            mu,
            y0: y0 + first as f64 * dy,
            dy,
            cdf,
            pdf,
            dpdf,
            cf,
            z_lo,
            z_hi,
            diagnostics: TableDiagnostics { fft_len: n, period, z_max: z_top, cf_at_z_max: cf_top, half_width: 0.5 * (last - first) as f64 * dy, min_pdf },
        })
    }

    pub fn law(&self) -> &TsLaw {
        &self.law
    }

    /// Tabulated range [lo, hi].
    pub fn range(&self) -> (f64, f64) {
        (self.y0, self.y0 + (self.cdf.len() - 1) as f64 * self.dy)
    }

    /// Grid points with their cdf and pdf values.
    pub fn grid(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        (0..self.cdf.len()).map(move |j| (self.y0 + j as f64 * self.dy, self.cdf[j], self.pdf[j]))
    }

    fn exponent(&self, z: f64) -> Result<Complex64> {
        if z >= self.z_lo && z <= self.z_hi {
            if let Some(c) = self.cf.eval(z) {
                return Ok(c);
            }
        }
        self.law.exponent_1d(z)
    }

    // quintic Hermite in t ∈ [0, 1] for the cdf: values, pdf and pdf slope
    fn hermite(&self, j: usize, t: f64) -> f64 {
        let h = self.dy;
        let (p0, p1) = (self.cdf[j], self.cdf[j + 1]);
        let (v0, v1) = (self.pdf[j] * h, self.pdf[j + 1] * h);
        let (a0, a1) = (self.dpdf[j] * h * h, self.dpdf[j + 1] * h * h);
        let t2 = t * t;
        let t3 = t2 * t;
        let t4 = t3 * t;
        let t5 = t4 * t;
        let h0 = 1.0 - 10.0 * t3 + 15.0 * t4 - 6.0 * t5;
        let h1 = t - 6.0 * t3 + 8.0 * t4 - 3.0 * t5;
        let h2 = 0.5 * (t2 - 3.0 * t3 + 3.0 * t4 - t5);
        let h3 = 0.5 * (t3 - 2.0 * t4 + t5);
        let h4 = -4.0 * t3 + 7.0 * t4 - 3.0 * t5;
        let h5 = 10.0 * t3 - 15.0 * t4 + 6.0 * t5;
        h0 * p0 + h1 * v0 + h2 * a0 + h3 * a1 + h4 * v1 + h5 * p1
    }

    // cubic Hermite for the pdf with its slope
    fn pdf_hermite(&self, j: usize, t: f64) -> f64 {
        let (f0, f1) = (self.pdf[j], self.pdf[j + 1]);
        let (d0, d1) = (self.dpdf[j] * self.dy, self.dpdf[j + 1] * self.dy);
        let t2 = t * t;
        let t3 = t2 * t;
        (2.0 * t3 - 3.0 * t2 + 1.0) * f0 + (t3 - 2.0 * t2 + t) * d0 + (-2.0 * t3 + 3.0 * t2) * f1 + (t3 - t2) * d1
    }

    fn locate(&self, y: f64) -> Option<(usize, f64)> {
        let pos = (y - self.y0) / self.dy;
        let n = self.cdf.len();
        if !(pos >= 0.0 && pos <= (n - 1) as f64) {
            return None;
        }
        let j = (pos.floor() as usize).min(n - 2);
        Some((j, pos - j as f64))
    }

    pub fn cdf(&self, y: f64) -> Result<f64> {
        match self.locate(y) {
            Some((j, t)) => Ok(self.hermite(j, t).clamp(self.cdf[j], self.cdf[j + 1])),
            None => Ok(gil_pelaez_with(|z| self.exponent(z), self.mu, self.z_hi, y)?.0),
        }
    }

    pub fn pdf(&self, y: f64) -> Result<f64> {
        match self.locate(y) {
            Some((j, t)) => Ok(self.pdf_hermite(j, t).max(0.0)),
            None => Ok(gil_pelaez_with(|z| self.exponent(z), self.mu, self.z_hi, y)?.1.max(0.0)),
        }
    }

    /// F^{-1}(u).
    pub fn quantile(&self, u: f64) -> Result<f64> {
        if !(u > 0.0 && u < 1.0) {
            return domain(format!("quantile level must lie in (0, 1), got {u}"));
        }
        let n = self.cdf.len();
        if u < self.cdf[0] || u > self.cdf[n - 1] {
            return self.tail_quantile(u);
        }
        let mut lo = 0;
        let mut hi = n - 1;
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if self.cdf[mid] <= u {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let j = lo;
        let span = self.cdf[j + 1] - self.cdf[j];
        if span <= 0.0 {
            return Ok(self.y0 + j as f64 * self.dy);
        }
        let (mut a, mut b) = (0.0, 1.0);
        let mut t = ((u - self.cdf[j]) / span).clamp(0.0, 1.0);
        for _ in 0..60 {
            let g = self.hermite(j, t) - u;
            if g.abs() < 1e-15 {
                break;
            }
            if g > 0.0 {
                b = t;
            } else {
                a = t;
            }
            let d = self.pdf_hermite(j, t) * self.dy;
            let mut next = if d > 0.0 { t - g / d } else { 0.5 * (a + b) };
            if !(next > a && next < b) {
                next = 0.5 * (a + b);
            }
            if (next - t).abs() < 1e-15 {
                t = next;
                break;
            }
            t = next;
        }
        Ok(self.y0 + (j as f64 + t) * self.dy)
    }

    fn tail_quantile(&self, u: f64) -> Result<f64> {
        let (lo_end, hi_end) = self.range();
        let f = |y: f64| -> Result<f64> { Ok(gil_pelaez_with(|z| self.exponent(z), self.mu, self.z_hi, y)?.0) };
        let step0 = hi_end - lo_end;
        let (mut a, mut b) = if u < self.cdf[0] {
            let mut step = step0;
            let mut a = lo_end - step;
            let mut guard = 0;
            while f(a)? > u {
                step *= 2.0;
                a = lo_end - step;
                guard += 1;
                if guard > 60 {
                    return numerical("tail quantile bracket failed");
                }
            }
            (a, lo_end)
        } else {
            let mut step = step0;
            let mut b = hi_end + step;
            let mut guard = 0;
            while f(b)? < u {
                step *= 2.0;
                b = hi_end + step;
                guard += 1;
                if guard > 60 {
                    return numerical("tail quantile bracket failed");
                }
            }
            (hi_end, b)
        };
        for _ in 0..80 {
            let m = 0.5 * (a + b);
            if f(m)? < u {
                a = m;
            } else {
                b = m;
            }
            if b - a < 1e-10 * (1.0 + m.abs()) {
                break;
            }
        }
        Ok(0.5 * (a + b))
    }

    /// One draw by inversion of a uniform.
    pub fn sample(&self, rng: &mut RandomSource) -> Result<f64> {
        self.quantile(rng.uniform())
    }
}

/// cdf and pdf by direct Gil-Pelaez integration of a given exponent, using
/// 64-point Gauss-Legendre panels on [0, z_max] with the panel count doubled
/// until successive results agree to 1e-10.
pub(crate) fn gil_pelaez_with<F: FnMut(f64) -> Result<Complex64>>(mut c: F, mu: f64, z_max: f64, y: f64) -> Result<(f64, f64)> {
    let rule = gl64();
    let d = y - mu;
    let mut m = ((z_max * d.abs() / PI).ceil() as usize).clamp(8, 1 << 14);
    let mut prev: Option<(f64, f64)> = None;
    loop {
        let hw = z_max / m as f64;
        let mut fc = 0.0;
        let mut fp = 0.0;
        for k in 0..m {
            let a = k as f64 * hw;
            let mid = a + 0.5 * hw;
            for (x, wt) in rule.nodes.iter().zip(&rule.weights) {
                let z = mid + 0.5 * hw * x;
                let v = (c(z)? - Complex64::new(0.0, z * y)).exp();
                fc += wt * v.im / z;
                fp += wt * v.re;
            }
        }
        let cdf = 0.5 - 0.5 * hw * fc / PI;
        let pdf = 0.5 * hw * fp / PI;
        if let Some((pc, pp)) = prev {
            if (cdf - pc).abs() < 1e-10 && (pdf - pp).abs() < 1e-10 {
                return Ok((cdf, pdf));
            }
        }
        if m >= 1 << 16 {
            return numerical("direct Gil-Pelaez integration did not converge");
        }
        prev = Some((cdf, pdf));
        m *= 2;
    }
}

/// Truncation frequency where |φ| drops below 1e-16.
fn cutoff(law: &TsLaw) -> Result<f64> {
    let mut z = find_scale(law)?;
    let limit = z * 1e12;
    while law.exponent_1d(z)?.re > -37.0 && z < limit {
        z *= 1.5;
    }
    Ok(z)
}

/// (cdf, pdf) at y by direct Gil-Pelaez integration of the exact exponent.
pub fn gil_pelaez(law: &TsLaw, y: f64) -> Result<(f64, f64)> {
    if law.measure.dim() != 1 {
        return Err(Error::Unsupported("Fourier inversion is one-dimensional".into()));
    }
    let mu = match law.mean()? {
        Some(m) => m[0],
        None => return Err(Error::Unsupported("inversion needs a finite first moment".into())),
    };
    let z_max = cutoff(law)?;
    gil_pelaez_with(|z| law.exponent_1d(z), mu, z_max, y)
}

/// (pdf, cdf) of TS^p_α(R, b) at y. Builds a table; reuse
/// [`InversionTable`] for many evaluations.
pub fn ts_pdf_cdf(law: &TsLaw, y: f64) -> Result<(f64, f64)> {
    let t = InversionTable::new(law)?;
    Ok((t.pdf(y)?, t.cdf(y)?))
}

/// How a TS component is drawn.
#[derive(Debug, Clone)]
enum ComponentKind {
    Table(Arc<InversionTable>),
    /// α = 0, p = 1 with atoms only: Σ x_k Ga(w_k, 1).
    GammaAtoms,
    /// α = 0, p = 1 with a continuous part: G·Σ π_j V_j with G ~ Ga(R(ℝ), 1)
    /// and stick-breaking weights π.
    GammaDirichlet,
    /// Small R(ℝᵈ): the shot-noise sum Σ u_j x_j over the points
    /// u_j = (αΓ_j/R(ℝᵈ))^{−1/α} kept with probability e^{−u_j^p}, stopped
    /// at u ≤ `stop`, plus `shift` and a normal of sd `gauss_sd` standing in
    /// for the dropped points.
    Series { mass: f64, stop: f64, shift: Vec<f64>, gauss_sd: f64 },
}

/// Largest expected number of series terms per draw.
const MAX_SERIES_TERMS: f64 = 1e4;

struct SeriesPlan {
    stop: f64,
    shift: Vec<f64>,
    gauss_sd: f64,
}

/// ∫_0^a u^{k−α}e^{−u^p}du for k − α > −1.
fn lower_moment(k: f64, alpha: f64, p: f64, a: f64) -> Result<f64> {
    let s = (k + 1.0 - alpha) / p;
    let g = gamma_cdf(GammaCdfParams::new(s, 1.0)?, a.powf(p));
    Ok(if g > 0.0 { gamma(s) * g / p } else { a.powf(k + 1.0 - alpha) / (k + 1.0 - alpha) })
}

/// ∫_a^∞ u^{−α}e^{−u^p}du, in v = ln u.
fn upper_mean_integral(alpha: f64, p: f64, a: f64) -> Result<f64> {
    let f = |v: f64| ((1.0 - alpha) * v - (p * v).exp()).exp();
    let top = (60.0f64.ln() / p).max(a.ln() + 1.0);
    Ok(adaptive(f, a.ln(), top, Tol::new(1e-300, 1e-12))?.0)
}

/// Cutoff, centring and normal correction for the series, or None when R
/// has no finite second moment or no R¹ sampler, or the series would be
/// too long.
fn series_plan(alpha: f64, p: f64, measure: &RosinskiMeasure) -> Result<Option<SeriesPlan>> {
    if !(alpha > 0.0 && alpha < 2.0) || !measure.has_r1_sampler() {
        return Ok(None);
    }
    let mass = measure.total_mass();
    let m2 = measure.abs_moment(2.0)?;
    if !m2.is_finite() {
        return Ok(None);
    }
    // dropped points have sd at most 1e-12 times the rms size of x under R¹
    let exact = (1e-24 * (2.0 - alpha) / mass).powf(1.0 / (2.0 - alpha));
    let (stop, gauss_sd) = if mass / alpha * exact.powf(-alpha) <= MAX_SERIES_TERMS {
        (exact, 0.0)
    } else if measure.dim() == 1 {
        let stop = (mass / (alpha * MAX_SERIES_TERMS)).powf(1.0 / alpha);
        (stop, (m2 * lower_moment(1.0, alpha, p, stop)?).sqrt())
    } else {
        return Ok(None);
    };
    let mean = measure.mean()?;
    let factor = if alpha < 1.0 { lower_moment(0.0, alpha, p, stop)? } else { -upper_mean_integral(alpha, p, stop)? };
    let shift = mean.into_iter().map(|m| m * factor).collect();
    Ok(Some(SeriesPlan { stop, shift, gauss_sd }))
}

/// A centered TS component TS^p_α(R, 0) ready for repeated sampling.
#[derive(Debug, Clone)]
pub struct TsComponent {
    alpha: f64,
    p: f64,
    measure: RosinskiMeasure,
    kind: ComponentKind,
}

impl TsComponent {
    pub fn new(alpha: f64, measure: RosinskiMeasure, p: f64) -> Result<Self> {
        super::cf::check_alpha_p(alpha, p)?;
        let mass = measure.total_mass();
        if !(mass > 0.0 && mass.is_finite()) {
            return domain(format!("TS component needs finite positive mass, got {mass}"));
        }
        let kind = if alpha == 0.0 && p == 1.0 {
            if measure.density().is_none() {
                ComponentKind::GammaAtoms
            } else if measure.has_r1_sampler() {
                ComponentKind::GammaDirichlet
            } else {
                let law = TsLaw::new(alpha, p, measure.clone(), vec![0.0])?;
                ComponentKind::Table(Arc::new(InversionTable::new(&law)?))
            }
        } else {
            if measure.dim() != 1 {
                return Err(Error::Unsupported(format!(
                    "TS component with alpha = {alpha}, p = {p} in dimension {} needs a plug-in sampler",
                    measure.dim()
                )));
            }
            let law = TsLaw::new(alpha, p, measure.clone(), vec![0.0])?;
            match InversionTable::new(&law) {
                Ok(t) => ComponentKind::Table(Arc::new(t)),
                Err(Error::Numerical(msg)) => match series_plan(alpha, p, &measure)? {
                    Some(SeriesPlan { stop, shift, gauss_sd }) => ComponentKind::Series { mass, stop, shift, gauss_sd },
                    None => return Err(Error::Numerical(msg)),
                },
                Err(e) => return Err(e),
            }
        };
        Ok(Self { alpha, p, measure, kind })
    }

    /// The shot-noise route, when the series is short enough.
    pub fn by_series(alpha: f64, measure: RosinskiMeasure, p: f64) -> Result<Self> {
        super::cf::check_alpha_p(alpha, p)?;
        let mass = measure.total_mass();
        if !(mass > 0.0 && mass.is_finite()) {
            return domain(format!("TS component needs finite positive mass, got {mass}"));
        }
        match series_plan(alpha, p, &measure)? {
            Some(SeriesPlan { stop, shift, gauss_sd }) => {
                Ok(Self { alpha, p, measure, kind: ComponentKind::Series { mass, stop, shift, gauss_sd } })
            }
            None => Err(Error::Unsupported(format!("no short series for alpha = {alpha} and mass {mass}"))),
        }
    }

    pub fn is_series(&self) -> bool {
        matches!(self.kind, ComponentKind::Series { .. })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn measure(&self) -> &RosinskiMeasure {
        &self.measure
    }

    /// The inversion table when the component is drawn by inversion.
    pub fn table(&self) -> Option<&InversionTable> {
        match &self.kind {
            ComponentKind::Table(t) => Some(t),
            _ => None,
        }
    }

    pub fn sample(&self, rng: &mut RandomSource) -> Result<Vec<f64>> {
        match &self.kind {
            ComponentKind::Table(t) => Ok(vec![t.sample(rng)?]),
            ComponentKind::GammaAtoms => {
                let mut out = vec![0.0; self.measure.dim()];
                for a in self.measure.atoms() {
                    let g = gamma_unchecked(a.w, 1.0, rng);
                    for (o, x) in out.iter_mut().zip(&a.x) {
                        *o += g * x;
                    }
                }
                Ok(out)
            }
            ComponentKind::GammaDirichlet => {
                let mass = self.measure.total_mass();
                let g = gamma_unchecked(mass, 1.0, rng);
                let mut out = vec![0.0; self.measure.dim()];
                let mut rest = 1.0;
                while rest > 1e-17 {
                    let keep = rng.uniform().powf(1.0 / mass);
                    let pi = rest * (1.0 - keep);
                    rest *= keep;
                    let v = self.measure.sample_r1(rng)?;
                    for (o, x) in out.iter_mut().zip(&v) {
                        *o += pi * x;
                    }
                }
                Ok(out.into_iter().map(|v| g * v).collect())
            }
            ComponentKind::Series { mass, stop, shift, gauss_sd } => {
                let mut out = shift.clone();
                if *gauss_sd > 0.0 {
                    let z: f64 = StandardNormal.sample(rng);
                    out[0] += gauss_sd * z;
                }
                let mut arrival = 0.0;
                loop {
                    arrival -= (1.0 - rng.uniform()).ln();
                    let u = (self.alpha * arrival / mass).powf(-1.0 / self.alpha);
                    if u <= *stop {
                        break;
                    }
                    let keep = rng.uniform() < (-u.powf(self.p)).exp();
                    let x = self.measure.sample_r1(rng)?;
                    if keep {
                        for (o, xi) in out.iter_mut().zip(&x) {
                            *o += u * xi;
                        }
                    }
                }
                Ok(out)
            }
        }
    }
}

/// One draw from TS^p_α(R, 0). Builds the sampler each call.
pub fn sample_ts_component(alpha: f64, measure: &RosinskiMeasure, p: f64, rng: &mut RandomSource) -> Result<Vec<f64>> {
    TsComponent::new(alpha, measure.clone(), p)?.sample(rng)
}
