//! Characteristic exponents of p-tempered α-stable laws.
//!
//! Everything reduces to the one-dimensional kernel
//! I_α(w) = ∫_0^∞ ψ_α(wu) u^{−1−α} e^{−u^p} du, with
//! ψ_α(v) = e^{iv} − 1 − iv·1{α ≥ 1}.

use super::measure::{integrate_on, RosinskiMeasure};
use crate::error::{domain, numerical, Result};
use crate::quad::{semi_infinite, Tol};
use crate::special_fn::{gamma, lgamma, reg_lower_gamma};
use num_complex::Complex64;
use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// e^z − 1 accurate near 0.
pub(crate) fn cexpm1(z: Complex64) -> Complex64 {
    let (x, y) = (z.re, z.im);
    if z.norm() > 0.5 {
        return z.exp() - 1.0;
    }
    let em = x.exp_m1();
    let sh = (0.5 * y).sin();
    Complex64::new(em * y.cos() - 2.0 * sh * sh, x.exp() * y.sin())
}

/// log(1 − iw) for real w.
fn log1m_iw(w: f64) -> Complex64 {
    Complex64::new(0.5 * (w * w).ln_1p(), -w.atan())
}

/// ψ_α(v) for complex v.
pub fn psi(alpha: f64, v: Complex64) -> Complex64 {
    let h = alpha >= 1.0;
    if v.norm() < 0.1 {
        // Σ (iv)^m/m! from m = 1 or 2
        let iv = I * v;
        let mut term = iv;
        let mut sum = if h { Complex64::new(0.0, 0.0) } else { iv };
        for m in 2..30 {
            term = term * iv / m as f64;
            sum += term;
            if term.norm() < 1e-18 * sum.norm() {
                break;
            }
        }
        return sum;
    }
    let e = cexpm1(I * v);
    if h {
        e - I * v
    } else {
        e
    }
}

/// Closed form of I_α(w) for p = 1.
pub fn inner_integral_p1(alpha: f64, w: f64) -> Complex64 {
    if w == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let l = log1m_iw(w);
    if alpha == 0.0 {
        return -l;
    }
    if alpha == 1.0 {
        return (1.0 - I * w) * l + I * w;
    }
    if alpha < 1.0 {
        gamma(-alpha) * cexpm1(alpha * l)
    } else {
        // (1−iw)^α − 1 + iαw regrouped around α = 1
        let eps = alpha - 1.0;
        gamma(-alpha) * (I * (eps * w) + (1.0 - I * w) * cexpm1(eps * l))
    }
}

/// γ(a, x) = ∫_0^x t^{a−1}e^{−t} dt for a > 0 (unregularized).
fn lower_gamma(a: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x < a + 1.0 {
        let mut ap = a;
        let mut term = 1.0 / a;
        let mut sum = term;
        for _ in 0..10_000 {
            ap += 1.0;
            term *= x / ap;
            sum += term;
            if term < 1e-17 * sum {
                break;
            }
        }
        sum * (a * x.ln() - x).exp()
    } else {
        reg_lower_gamma(a, x) * lgamma(a).exp()
    }
}

/// I_α(w) for any p > 0 by quadrature: a power series on [0, u₁] with
/// u₁ = min(1, 1/|w|), then a ray rotated into the half-plane where
/// e^{iwu} decays.
pub fn inner_integral_numeric(alpha: f64, p: f64, w: f64) -> Result<Complex64> {
    if w == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let m0 = if alpha >= 1.0 { 2 } else { 1 };
    let u1 = 1.0f64.min(1.0 / w.abs());
    let x1 = u1.powf(p);
    let iw = I * w;
    let mut series = Complex64::new(0.0, 0.0);
    let mut coef = Complex64::new(1.0, 0.0);
    for m in 1..60 {
        coef = coef * iw / m as f64;
        if m < m0 {
            continue;
        }
        let t = coef * (lower_gamma((m as f64 - alpha) / p, x1) / p);
        series += t;
        if m > m0 + 3 && t.norm() < 1e-18 * series.norm().max(1e-300) {
            break;
        }
    }
    let theta = w.signum() * (PI / 3.0).min(PI / (3.0 * p));
    let dir = Complex64::from_polar(1.0, theta);
    let g = |r: f64| -> Complex64 {
        let u = u1 + r * dir;
        let lu = u.ln();
        let v = psi(alpha, w * u) * ((-1.0 - alpha) * lu - (p * lu).exp()).exp();
        if v.re.is_finite() && v.im.is_finite() {
            v * dir
        } else {
            Complex64::new(0.0, 0.0)
        }
    };
    let (ray, _) = semi_infinite(g, 0.0, 1.0, Tol::new(1e-16 * series.norm().max(1e-300), 1e-12))?;
    Ok(series + ray)
}

const DEG: usize = 16;

fn cheb_nodes() -> &'static [f64; DEG + 1] {
    static N: OnceLock<[f64; DEG + 1]> = OnceLock::new();
    N.get_or_init(|| {
        let mut n = [0.0; DEG + 1];
        for (j, v) in n.iter_mut().enumerate() {
            *v = (PI * j as f64 / DEG as f64).cos();
        }
        n
    })
}

/// Piecewise Chebyshev interpolant of a complex function of ln z on equal
/// panels, evaluated in barycentric form.
#[derive(Debug, Clone)]
pub(crate) struct LogCheb {
    s0: f64,
    width: f64,
    vals: Vec<[Complex64; DEG + 1]>,
}

impl LogCheb {
    pub(crate) fn build<F: Fn(f64) -> Result<Complex64> + Sync>(f: F, z_lo: f64, z_hi: f64, max_width: f64) -> Result<Self> {
        let (s0, s1) = (z_lo.ln(), z_hi.ln());
        let npan = (((s1 - s0) / max_width).ceil() as usize).max(1);
        let width = (s1 - s0) / npan as f64;
        let nodes = cheb_nodes();
        let work = |k: usize| -> Result<[Complex64; DEG + 1]> {
            let a = s0 + k as f64 * width;
            let mut v = [Complex64::new(0.0, 0.0); DEG + 1];
            for (j, x) in nodes.iter().enumerate() {
                v[j] = f((a + 0.5 * width * (x + 1.0)).exp())?;
            }
            Ok(v)
        };
        let vals = crate::par::map_range(npan, work)?;
        Ok(Self { s0, width, vals })
    }

    pub(crate) fn eval(&self, z: f64) -> Option<Complex64> {
        let s = z.ln();
        let pos = (s - self.s0) / self.width;
        let n = self.vals.len();
        if !(pos >= -1e-9 && pos <= n as f64 + 1e-9) {
            return None;
        }
        let k = (pos.floor().max(0.0) as usize).min(n - 1);
        let t = (2.0 * (pos - k as f64) - 1.0).clamp(-1.0, 1.0);
        let nodes = cheb_nodes();
        let v = &self.vals[k];
        let mut num = Complex64::new(0.0, 0.0);
        let mut den = 0.0;
        for j in 0..=DEG {
            let d = t - nodes[j];
            if d == 0.0 {
                return Some(v[j]);
            }
            let mut wj = if j % 2 == 0 { 1.0 } else { -1.0 };
            if j == 0 || j == DEG {
                wj *= 0.5;
            }
            let c = wj / d;
            num += v[j] * c;
            den += c;
        }
        Some(num / den)
    }
}

/// Width in ln w of the strip around the positive axis where I_α is analytic,
/// halved to keep the Chebyshev panels well inside it.
pub(crate) fn panel_width(p: f64) -> f64 {
    (PI / (4.0 * p.max(1.0))).min(std::f64::consts::LN_2)
}

/// Cached interpolant of I_α(w) for one (α, p) with p ≠ 1.
#[derive(Debug)]
pub(crate) struct InnerTable {
    alpha: f64,
    p: f64,
    cheb: LogCheb,
    small: Vec<Complex64>,
}

const W_LO: f64 = 1e-3;
const W_HI: f64 = 1e10;

impl InnerTable {
    fn build(alpha: f64, p: f64) -> Result<Self> {
        let cheb = LogCheb::build(|w| inner_integral_numeric(alpha, p, w), W_LO, W_HI, panel_width(p))?;
        let m0 = if alpha >= 1.0 { 2 } else { 1 };
        let mut small = Vec::new();
        let mut ik = Complex64::new(1.0, 0.0);
        for m in 1..=14u32 {
            ik *= I / m as f64;
            if m >= m0 {
                small.push(ik * (gamma((m as f64 - alpha) / p) / p));
            } else {
                small.push(Complex64::new(0.0, 0.0));
            }
        }
        Ok(Self { alpha, p, cheb, small })
    }

    fn eval(&self, w: f64) -> Result<Complex64> {
        let a = w.abs();
        if a == 0.0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let v = if a < W_LO {
            let mut s = Complex64::new(0.0, 0.0);
            let mut pw = 1.0;
            for c in &self.small {
                pw *= a;
                s += c * pw;
            }
            s
        } else if let Some(v) = self.cheb.eval(a) {
            v
        } else {
            inner_integral_numeric(self.alpha, self.p, a)?
        };
        Ok(if w < 0.0 { v.conj() } else { v })
    }
}

fn inner_table(alpha: f64, p: f64) -> Result<Arc<InnerTable>> {
    static CACHE: OnceLock<Mutex<HashMap<(u64, u64), Arc<InnerTable>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let key = (alpha.to_bits(), p.to_bits());
    if let Some(t) = cache.lock().expect("cache lock").get(&key) {
        return Ok(t.clone());
    }
    let t = Arc::new(InnerTable::build(alpha, p)?);
    cache.lock().expect("cache lock").insert(key, t.clone());
    Ok(t)
}

/// I_α(w) by the fastest available route.
pub fn inner_integral(alpha: f64, p: f64, w: f64) -> Result<Complex64> {
    check_alpha_p(alpha, p)?;
    if p == 1.0 {
        Ok(inner_integral_p1(alpha, w))
    } else {
        inner_table(alpha, p)?.eval(w)
    }
}

pub(crate) fn check_alpha_p(alpha: f64, p: f64) -> Result<()> {
    if !(0.0..2.0).contains(&alpha) {
        return domain(format!("alpha must lie in [0, 2), got {alpha}"));
    }
    if !(p > 0.0 && p.is_finite()) {
        return domain(format!("p must be positive, got {p}"));
    }
    Ok(())
}

/// A p-tempered α-stable law TS^p_α(R, b).
#[derive(Debug, Clone)]
pub struct TsLaw {
    pub alpha: f64,
    pub p: f64,
    pub measure: RosinskiMeasure,
    pub b: Vec<f64>,
    table: Option<Arc<InnerTable>>,
}

impl TsLaw {
    pub fn new(alpha: f64, p: f64, measure: RosinskiMeasure, b: Vec<f64>) -> Result<Self> {
        check_alpha_p(alpha, p)?;
        if b.len() != measure.dim() {
            return domain("drift dimension differs from the measure");
        }
        let table = if p == 1.0 { None } else { Some(inner_table(alpha, p)?) };
        Ok(Self { alpha, p, measure, b, table })
    }

    fn kernel(&self, w: f64) -> Result<Complex64> {
        match &self.table {
            None => Ok(inner_integral_p1(self.alpha, w)),
            Some(t) => t.eval(w),
        }
    }

    /// C(z) = i⟨b, z⟩ + ∫ I_α(⟨z, x⟩) R(dx).
    pub fn exponent(&self, z: &[f64]) -> Result<Complex64> {
        if z.len() != self.measure.dim() {
            return domain("argument dimension differs from the measure");
        }
        let bz: f64 = self.b.iter().zip(z).map(|(b, z)| b * z).sum();
        let mut c = I * bz;
        for a in self.measure.atoms() {
            let w: f64 = a.x.iter().zip(z).map(|(x, z)| x * z).sum();
            c += a.w * self.kernel(w)?;
        }
        if let Some((d, f)) = self.measure.density() {
            let z = z[0];
            if z != 0.0 && f != 0.0 {
                let (lo, hi) = d.support();
                let tol = Tol::new(1e-15, 1e-11);
                let v = if d.is_symmetric() && lo == -hi {
                    let mut err = None;
                    let re = integrate_on(
                        |x| match self.kernel(z * x) {
                            Ok(k) => 2.0 * d.pdf(x) * k.re,
                            Err(e) => {
                                err = Some(e);
                                0.0
                            }
                        },
                        0.0,
                        hi,
                        d.scale_hint(),
                        tol,
                    )?;
                    if let Some(e) = err {
                        return Err(e);
                    }
                    Complex64::new(re, 0.0)
                } else {
                    let mut err = None;
                    let v = integrate_on(
                        |x| {
                            let r = d.pdf(x);
                            if r == 0.0 {
                                return Complex64::new(0.0, 0.0);
                            }
                            match self.kernel(z * x) {
                                Ok(k) => r * k,
                                Err(e) => {
                                    err = Some(e);
                                    Complex64::new(0.0, 0.0)
                                }
                            }
                        },
                        lo,
                        hi,
                        d.scale_hint(),
                        tol,
                    )?;
                    if let Some(e) = err {
                        return Err(e);
                    }
                    v
                };
                c += f * v;
            }
        }
        if !(c.re.is_finite() && c.im.is_finite()) {
            return numerical(format!("non-finite characteristic exponent at z = {z:?}"));
        }
        Ok(c)
    }

    pub fn exponent_1d(&self, z: f64) -> Result<Complex64> {
        self.exponent(&[z])
    }

    /// E X, or `None` when the first moment is infinite.
    pub fn mean(&self) -> Result<Option<Vec<f64>>> {
        if self.alpha >= 1.0 {
            return Ok(Some(self.b.clone()));
        }
        if !self.measure.abs_moment(1.0)?.is_finite() {
            return Ok(None);
        }
        let c = gamma((1.0 - self.alpha) / self.p) / self.p;
        let m = self.measure.mean()?;
        Ok(Some(self.b.iter().zip(m).map(|(b, m)| b + c * m).collect()))
    }

    /// Var X in d = 1 (may be +inf).
    pub fn variance(&self) -> Result<f64> {
        let m2 = self.measure.abs_moment(2.0)?;
        Ok(gamma((2.0 - self.alpha) / self.p) / self.p * m2)
    }
}
