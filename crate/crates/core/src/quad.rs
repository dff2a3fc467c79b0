//! Quadrature: Gauss-Legendre rules, globally adaptive bisection,
//! half-line maps and tanh-sinh for endpoint singularities.

use crate::error::{numerical, Result};
use num_complex::Complex64;
use std::collections::BinaryHeap;
use std::ops::{Add, Mul, Sub};
use std::sync::OnceLock;

/// Values a quadrature rule can accumulate.
pub trait Scalar:
    Copy + Default + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self>
{
    fn modulus(self) -> f64;
    fn finite(self) -> bool;
}

impl Scalar for f64 {
    fn modulus(self) -> f64 {
        self.abs()
    }
    fn finite(self) -> bool {
        self.is_finite()
    }
}

impl Scalar for Complex64 {
    fn modulus(self) -> f64 {
        self.norm()
    }
    fn finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

/// Nodes and weights of an n-point Gauss-Legendre rule on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    /// ∫_a^b f.
    pub fn integrate<V: Scalar, F: FnMut(f64) -> V>(&self, mut f: F, a: f64, b: f64) -> V {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        let mut acc = V::default();
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc = acc + f(c + h * x) * *w;
        }
        acc * h
    }
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

pub(crate) fn gl15() -> &'static GaussLegendre {
    static R: OnceLock<GaussLegendre> = OnceLock::new();
    R.get_or_init(|| GaussLegendre::new(15))
}

pub(crate) fn gl64() -> &'static GaussLegendre {
    static R: OnceLock<GaussLegendre> = OnceLock::new();
    R.get_or_init(|| GaussLegendre::new(64))
}

/// Tolerances for the adaptive integrators.
#[derive(Debug, Clone, Copy)]
pub struct Tol {
    pub abs: f64,
    pub rel: f64,
    pub max_intervals: usize,
}

impl Default for Tol {
    fn default() -> Self {
        Self { abs: 1e-13, rel: 1e-12, max_intervals: 4000 }
    }
}

impl Tol {
    pub fn new(abs: f64, rel: f64) -> Self {
        Self { abs, rel, ..Self::default() }
    }
}

struct Piece<V> {
    a: f64,
    b: f64,
    value: V,
    left: V,
    right: V,
    err: f64,
}

impl<V> PartialEq for Piece<V> {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl<V> Eq for Piece<V> {}
impl<V> PartialOrd for Piece<V> {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl<V> Ord for Piece<V> {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.err.total_cmp(&other.err)
    }
}

fn piece<V: Scalar, F: FnMut(f64) -> V>(f: &mut F, a: f64, b: f64, whole: Option<V>) -> Piece<V> {
    let rule = gl15();
    let m = 0.5 * (a + b);
    let whole = whole.unwrap_or_else(|| rule.integrate(&mut *f, a, b));
    let left = rule.integrate(&mut *f, a, m);
    let right = rule.integrate(&mut *f, m, b);
    let value = left + right;
    let err = (value - whole).modulus();
    Piece { a, b, value, left, right, err }
}

/// Globally adaptive integration of f over [a, b] (finite).
/// Returns the value and an error estimate.
pub fn adaptive<V: Scalar, F: FnMut(f64) -> V>(mut f: F, a: f64, b: f64, tol: Tol) -> Result<(V, f64)> {
    adaptive_split(&mut f, &[a, b], tol)
}

/// Like [`adaptive`] but starting from the given breakpoints.
pub fn adaptive_split<V: Scalar, F: FnMut(f64) -> V>(f: &mut F, breaks: &[f64], tol: Tol) -> Result<(V, f64)> {
    let mut heap: BinaryHeap<Piece<V>> = BinaryHeap::new();
    let mut total = V::default();
    let mut total_err = 0.0;
    for w in breaks.windows(2) {
        if w[1] == w[0] {
            continue;
        }
        let p = piece(f, w[0], w[1], None);
        total = total + p.value;
        total_err += p.err;
        heap.push(p);
    }
    let mut count = heap.len();
    loop {
        if !total.finite() {
            return numerical("non-finite integrand value in adaptive quadrature");
        }
        let target = tol.abs.max(tol.rel * total.modulus());
        if total_err <= target {
            return Ok((total, total_err));
        }
        let worst = match heap.pop() {
            Some(p) => p,
            None => return Ok((total, total_err)),
        };
        if count >= tol.max_intervals || (worst.b - worst.a).abs() < 1e-14 * worst.a.abs().max(1e-300) {
            // cannot refine further: accept if error is already small in relative terms
            heap.push(worst);
            let sum_err: f64 = heap.iter().map(|p| p.err).sum();
            if sum_err <= 1e3 * target {
                return Ok((total, sum_err));
            }
            return numerical(format!(
                "adaptive quadrature did not converge: error {sum_err:.3e} vs target {target:.3e}"
            ));
        }
        let m = 0.5 * (worst.a + worst.b);
        let l = piece(f, worst.a, m, Some(worst.left));
        let r = piece(f, m, worst.b, Some(worst.right));
        total = total - worst.value + l.value + r.value;
        total_err = total_err - worst.err + l.err + r.err;
        if total_err < 0.0 {
            total_err = heap.iter().map(|p| p.err).sum::<f64>() + l.err + r.err;
        }
        heap.push(l);
        heap.push(r);
        count += 1;
    }
}

/// ∫_a^∞ f via x = a + s·t/(1−t) on (0, 1).
pub fn semi_infinite<V: Scalar, F: FnMut(f64) -> V>(mut f: F, a: f64, scale: f64, tol: Tol) -> Result<(V, f64)> {
    let mut g = |t: f64| {
        if t >= 1.0 {
            return V::default();
        }
        let om = 1.0 - t;
        let x = a + scale * t / om;
        let v = f(x);
        if !v.finite() && x.is_infinite() {
            return V::default();
        }
        v * (scale / (om * om))
    };
    adaptive_split(&mut g, &[0.0, 0.5, 0.75, 0.9, 1.0], tol)
}

/// ∫_{-∞}^{∞} f split at `center`.
pub fn whole_line<V: Scalar, F: FnMut(f64) -> V>(mut f: F, center: f64, scale: f64, tol: Tol) -> Result<(V, f64)> {
    let (r, er) = semi_infinite(&mut f, center, scale, tol)?;
    let (l, el) = semi_infinite(|x| f(2.0 * center - x), center, scale, tol)?;
    Ok((r + l, er + el))
}

/// Tanh-sinh rule on [a, b]; `f` receives (x, distance to nearest endpoint)
/// so integrands with endpoint singularities can be evaluated accurately.
pub fn tanh_sinh<V: Scalar, F: FnMut(f64, f64) -> V>(mut f: F, a: f64, b: f64, rel: f64) -> Result<V> {
    use std::f64::consts::FRAC_PI_2;
    let half = 0.5 * (b - a);
    let tmax = 6.5;
    let mut eval = |t: f64| -> V {
        let s = FRAC_PI_2 * t.sinh();
        let c = s.cosh();
        let w = FRAC_PI_2 * t.cosh() / (c * c);
        // distance to the nearer endpoint in units of half-width
        let d = 1.0 / (s.abs().exp() * c);
        let dist = half * d;
        if dist == 0.0 {
            return V::default();
        }
        let x = if s < 0.0 { a + dist } else { b - dist };
        f(x, dist) * (w * half)
    };
    let mut h = 0.5;
    let mut sum = eval(0.0);
    let mut k = 1;
    while (k as f64) * h <= tmax {
        let t = k as f64 * h;
        sum = sum + eval(t) + eval(-t);
        k += 1;
    }
    let mut prev = sum * h;
    for _level in 0..10 {
        h *= 0.5;
        let mut add = V::default();
        let mut k = 1;
        while (k as f64) * h <= tmax {
            let t = k as f64 * h;
            add = add + eval(t) + eval(-t);
            k += 2;
        }
        sum = sum + add;
        let cur = sum * h;
        if !cur.finite() {
            return numerical("non-finite value in tanh-sinh quadrature");
        }
        if (cur - prev).modulus() <= rel * cur.modulus() + 1e-300 {
            return Ok(cur);
        }
        prev = cur;
    }
    numerical("tanh-sinh quadrature did not converge")
}
