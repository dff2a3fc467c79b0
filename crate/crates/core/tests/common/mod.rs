//! Test-side numerics kept separate from the library: Gauss-Legendre nodes
//! by Newton iteration on P_n, adaptive bisection, a seeded uniform stream
//! and Monte Carlo helpers.
#![allow(dead_code)]

use std::sync::OnceLock;
use tsou::ou_transition::{gamma_index, DirectionSampler};

fn legendre_nodes(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                let dp = {
                    let (mut p0, mut p1) = (1.0, z);
                    for k in 2..=n {
                        let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                        p0 = p1;
                        p1 = p2;
                    }
                    n as f64 * (z * p1 - p0) / (z * z - 1.0)
                };
                w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
                break;
            }
        }
        x[i] = z;
    }
    (x, w)
}

fn rule() -> &'static (Vec<f64>, Vec<f64>) {
    static R: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    R.get_or_init(|| legendre_nodes(20))
}

fn gl(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let (x, w) = rule();
    let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
    x.iter().zip(w).map(|(x, w)| w * f(c + h * x)).sum::<f64>() * h
}

fn rec(f: &dyn Fn(f64) -> f64, a: f64, b: f64, whole: f64, tol: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let l = gl(f, a, m);
    let r = gl(f, m, b);
    let floor = 1e-15 * (l.abs() + r.abs());
    if (l + r - whole).abs() <= tol.max(floor) || depth == 0 {
        return l + r;
    }
    rec(f, a, m, l, 0.5 * tol, depth - 1) + rec(f, m, b, r, 0.5 * tol, depth - 1)
}

/// ∫_a^b f with an absolute error target `tol` (20-point Gauss-Legendre,
/// bisection until both halves agree with the whole).
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let whole = gl(&f, a, b);
    rec(&f, a, b, whole, tol, 30)
}

/// ∫_a^∞ f on geometrically growing panels [a + s(2^k − 1), a + s(2^{k+1} − 1)].
pub fn integrate_to_inf(f: impl Fn(f64) -> f64, a: f64, scale: f64, tol: f64) -> f64 {
    let mut total = 0.0;
    let mut lo = a;
    let mut width = scale;
    for _ in 0..200 {
        let v = integrate(&f, lo, lo + width, tol * 0.01);
        total += v;
        lo += width;
        width *= 2.0;
        if v.abs() < tol * 1e-3 && lo > a + 64.0 * scale {
            break;
        }
    }
    total
}

/// Relative error with a floor on the denominator.
pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

/// Sample mean and standard error.
pub fn mean_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    let v = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0);
    (m, (v / n).sqrt())
}

/// Empirical cdf check: KS statistic against `cdf` below the 1% critical value.
pub fn ks_passes(samples: &[f64], cdf: impl Fn(f64) -> f64) -> (bool, f64, f64) {
    let d = tsou::harness::ks_statistic(samples, cdf).unwrap();
    let c = tsou::harness::ks_critical(samples.len(), 0.01);
    (d < c, d, c)
}

pub fn ks2_passes(a: &[f64], b: &[f64]) -> (bool, f64, f64) {
    let d = tsou::harness::ks_two_sample(a, b).unwrap();
    let c = tsou::harness::ks_critical_two(a.len(), b.len(), 0.01);
    (d < c, d, c)
}

/// A cdf tabulated by cumulative quadrature of `pdf` on [0, hi] with `n`
/// panels of a geometric-then-linear grid; linear interpolation in between.
pub struct TabulatedCdf {
    x: Vec<f64>,
    f: Vec<f64>,
}

impl TabulatedCdf {
    /// Grid points are given by the caller (increasing, starting at the lower end of the support).
    pub fn new(pdf: impl Fn(f64) -> f64, grid: &[f64], mass_below: f64) -> Self {
        let mut f = vec![mass_below];
        for w in grid.windows(2) {
            let v = integrate(&pdf, w[0], w[1], 1e-13);
            f.push(f.last().unwrap() + v);
        }
        Self { x: grid.to_vec(), f }
    }

    pub fn total(&self) -> f64 {
        *self.f.last().unwrap()
    }

    pub fn eval(&self, x: f64) -> f64 {
        if x <= self.x[0] {
            return self.f[0];
        }
        let i = self.x.partition_point(|&v| v <= x);
        if i >= self.x.len() {
            return *self.f.last().unwrap();
        }
        let t = (x - self.x[i - 1]) / (self.x[i] - self.x[i - 1]);
        self.f[i - 1] + t * (self.f[i] - self.f[i - 1])
    }
}

/// lo·r^k grid from lo up to hi with `per_decade` points per factor 10, plus 0 in front.
pub fn log_grid(lo: f64, hi: f64, per_decade: usize) -> Vec<f64> {
    let n = ((hi / lo).log10() * per_decade as f64).ceil() as usize;
    let mut g = vec![0.0];
    g.extend((0..=n).map(|k| lo * (hi / lo).powf(k as f64 / n as f64)));
    g
}

/// Γ(x) by the Lanczos approximation (g = 7, 9 terms), reflection below 1/2.
pub fn gamma_ref(x: f64) -> f64 {
    const C: [f64; 9] = [
        0.999_999_999_999_809_93,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_13,
        -176.615_029_162_140_59,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_571_6e-6,
        1.505_632_735_149_311_6e-7,
    ];
    use std::f64::consts::PI;
    if x < 0.5 {
        return PI / ((PI * x).sin() * gamma_ref(1.0 - x));
    }
    let x = x - 1.0;
    let mut a = C[0];
    let t = x + 7.5;
    for (i, c) in C.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    (2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * a
}

/// K_{β,γ,p,η} from the beta-integral form
/// Γ(γ−β/p)/(pΓ(γ)) ∫_{1/η}^1 (1−u)^{γ−1} u^{−1−β/p} du, with u = e^{−s}.
pub fn k_oracle(beta: f64, gamma: u32, p: f64, eta: f64) -> f64 {
    let c = beta / p;
    let f = |s: f64| (-(-s).exp_m1()).powi(gamma as i32 - 1) * (c * s).exp();
    let v = integrate(f, 0.0, eta.ln(), 0.0);
    gamma_ref(gamma as f64 - c) / (p * gamma_ref(gamma as f64)) * v
}

/// P(γ, x) for integer γ, by the series e^{−x} Σ_{n≥γ} x^n/n! when x is moderate.
pub fn lower_gamma_int_ref(g: u32, x: f64) -> f64 {
    if x > 40.0 {
        let mut term = 1.0;
        let mut s = 1.0;
        for n in 1..g {
            term *= x / n as f64;
            s += term;
        }
        return 1.0 - (-x).exp() * s;
    }
    let mut term = (-x).exp();
    for n in 1..=g {
        term *= x / n as f64;
    }
    let mut s = term;
    let mut n = g;
    loop {
        n += 1;
        term *= x / n as f64;
        s += term;
        if term < 1e-18 * s {
            break;
        }
    }
    s
}

/// IGa(β, γ, p, η) density with the oracle constant.
pub struct IgaOracle {
    pub beta: f64,
    pub gamma: u32,
    pub p: f64,
    pub eta: f64,
    pub k: f64,
}

impl IgaOracle {
    pub fn new(beta: f64, gamma: u32, p: f64, eta: f64) -> Self {
        Self { beta, gamma, p, eta, k: k_oracle(beta, gamma, p, eta) }
    }

    pub fn pdf(&self, u: f64) -> f64 {
        if u <= 0.0 {
            return 0.0;
        }
        let up = u.powf(self.p);
        (-up).exp() * lower_gamma_int_ref(self.gamma, up * (self.eta - 1.0)) * u.powf(-1.0 - self.beta) / self.k
    }

    /// Tabulated cdf; the mass below the first grid point uses the leading
    /// small-u behaviour (η−1)^γ u^{pγ−1−β}/(γ! K).
    pub fn cdf_table(&self) -> TabulatedCdf {
        let g = self.gamma as f64;
        let e = self.p * g - self.beta;
        // the leading term is good to relative order u^p·η
        let lo = 1e-9f64.min((1e-9 / self.eta).powf(1.0 / self.p));
        let fact: f64 = (1..=self.gamma).map(|i| i as f64).product();
        let below = (self.eta - 1.0).powf(g) * lo.powf(e) / (fact * e * self.k);
        let hi = 80f64.powf(1.0 / self.p);
        let mut grid = log_grid(lo, hi, 200);
        grid.remove(0);
        TabulatedCdf::new(|u| self.pdf(u), &grid, below)
    }
}

// κ-free radial density Σ w ETD(u^p s, η u^p s, γ) u^{−1−α}
pub fn radial_kernel(d: &DirectionSampler, alpha: f64, p: f64, gamma: u32, eta: f64, u: f64) -> f64 {
    let up = u.powf(p);
    d.q.iter().map(|a| a.w * (-up * a.s).exp() * lower_gamma_int_ref(gamma, up * a.s * (eta - 1.0))).sum::<f64>() * u.powf(-1.0 - alpha)
}

pub struct RadialOracle {
    pub kappa: f64,
    pub lo: f64,
    pub cdf: TabulatedCdf,
}

pub fn radial_oracle(d: &DirectionSampler, alpha: f64, p: f64, t: f64, lambda: f64) -> RadialOracle {
    let gamma = gamma_index(alpha, p);
    let eta = (p * lambda * t).exp();
    let zeta = d.q.iter().map(|a| a.s).fold(f64::INFINITY, f64::min);
    // below lo the kernel is c·u^{γp−α−1} to relative order u^p·max s·η
    let smax = d.q.iter().map(|a| a.s).fold(0.0, f64::max) * eta;
    let lo = 1e-9f64.min((1e-14 / smax).powf(1.0 / p));
    let hi = (80.0 / zeta).powf(1.0 / p);
    let mut grid = log_grid(lo, hi, 200);
    grid.remove(0);
    let g = gamma as f64;
    let fact: f64 = (1..=gamma).map(|i| i as f64).product();
    let c = (eta - 1.0).powf(g) / fact * d.q.iter().map(|a| a.w * a.s.powf(g)).sum::<f64>();
    let e = g * p - alpha;
    let below = c * lo.powf(e) / e;
    let raw = TabulatedCdf::new(|u| radial_kernel(d, alpha, p, gamma, eta, u), &grid, below);
    let kappa = 1.0 / raw.total();
    let cdf = TabulatedCdf::new(|u| kappa * radial_kernel(d, alpha, p, gamma, eta, u), &grid, kappa * below);
    RadialOracle { kappa, lo, cdf }
}
