//! Building-block laws: gamma, generalized gamma, Poisson, the incomplete
//! gamma law IGa(β, γ, p, η) with its accept-reject sampler, and the
//! log-Laplace law LL(α, p).

use crate::error::{domain, numerical, Result};
use crate::quad::{adaptive, Tol};
use crate::special_fn::{binomial, etd, lgamma, scaled_lower_gamma_int};
use rand::RngCore;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;
use rand_distr::{Distribution, Gamma, Poisson};

/// Rejection loops give up after this many consecutive rejections.
pub const MAX_REJECTIONS: u64 = 1_000_000;

/// Seeded random stream. Streams built from the same seed with different
/// stream ids are independent.
#[derive(Debug, Clone)]
pub struct RandomSource {
    rng: ChaCha8Rng,
}

impl RandomSource {
    pub fn new(seed: u64) -> Self {
        Self { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn with_stream(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self { rng }
    }

    /// Uniform on the open interval (0, 1).
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        ((self.rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform on (−1, 1), never exactly 0.
    #[inline]
    pub fn uniform_sym(&mut self) -> f64 {
        2.0 * self.uniform() - 1.0
    }

    /// Child stream derived from this one.
    pub fn split(&mut self) -> Self {
        let seed = self.rng.next_u64();
        let stream = self.rng.next_u64();
        Self::with_stream(seed, stream)
    }
}

impl RngCore for RandomSource {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }
    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }
    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.rng.fill_bytes(dst)
    }
}

/// One Ga(shape, rate) variate.
pub fn sample_gamma(shape: f64, rate: f64, rng: &mut RandomSource) -> Result<f64> {
    if !(shape > 0.0 && shape.is_finite() && rate > 0.0 && rate.is_finite()) {
        return domain(format!("gamma sampler needs positive shape and rate, got ({shape}, {rate})"));
    }
    Ok(gamma_unchecked(shape, rate, rng))
}

#[inline]
pub(crate) fn gamma_unchecked(shape: f64, rate: f64, rng: &mut RandomSource) -> f64 {
    let g = Gamma::new(shape, 1.0 / rate).expect("validated gamma parameters");
    g.sample(rng)
}

/// GGa(γ, p, ζ) as X^{1/p} with X ~ Ga(γ/p, ζ).
pub fn sample_gen_gamma(gamma: f64, p: f64, zeta: f64, rng: &mut RandomSource) -> Result<f64> {
    if !(p > 0.0 && p.is_finite()) {
        return domain(format!("generalized gamma needs p > 0, got {p}"));
    }
    let x = sample_gamma(gamma / p, zeta, rng)?;
    Ok(x.powf(1.0 / p))
}

/// GGa(γ, p, ζ) density.
pub fn gen_gamma_pdf(gamma: f64, p: f64, zeta: f64, u: f64) -> f64 {
    if u <= 0.0 {
        return 0.0;
    }
    let a = gamma / p;
    (p.ln() + a * zeta.ln() - lgamma(a) + (gamma - 1.0) * u.ln() - u.powf(p) * zeta).exp()
}

/// One Poisson(mean) variate; mean 0 gives 0.
pub fn sample_poisson(mean: f64, rng: &mut RandomSource) -> Result<u64> {
    if !(mean >= 0.0) || !mean.is_finite() {
        return domain(format!("Poisson mean must be finite and nonnegative, got {mean}"));
    }
    if mean == 0.0 {
        return Ok(0);
    }
    let d = Poisson::new(mean).map_err(|e| crate::error::Error::Domain(format!("Poisson({mean}): {e}")))?;
    Ok(d.sample(rng) as u64)
}

/// K_{β,γ,p,η}, the IGa normalizing constant.
pub fn iga_norm_constant(beta: f64, gamma: u32, p: f64, eta: f64) -> Result<f64> {
    check_iga(beta, gamma, p, eta)?;
    Ok(norm_constant(beta, gamma, p, eta))
}

fn check_iga(beta: f64, gamma: u32, p: f64, eta: f64) -> Result<()> {
    if gamma == 0 {
        return domain("IGa needs an integer gamma >= 1");
    }
    if !(p > 0.0 && p.is_finite()) {
        return domain(format!("IGa needs p > 0, got {p}"));
    }
    if !(eta > 1.0) || !eta.is_finite() {
        return domain(format!("IGa needs eta > 1, got {eta}"));
    }
    if !(p * gamma as f64 > beta) || !beta.is_finite() {
        return domain(format!("IGa needs p*gamma > beta, got p={p}, gamma={gamma}, beta={beta}"));
    }
    Ok(())
}

pub(crate) fn norm_constant(beta: f64, gamma: u32, p: f64, eta: f64) -> f64 {
    let c = beta / p;
    let l = eta.ln();
    let lead = lgamma(gamma as f64 - c);
    if gamma >= 2 && l * (1.0 + c.abs()) <= 1.0 {
        // termwise integration of the finite sum re-expanded in ln η
        return (lead - lgamma(gamma as f64)).exp() / p * small_log_series(gamma, c, l);
    }
    let mut sum = 0.0;
    let mut mag = 0.0;
    for n in 0..gamma {
        let e = n as f64 * p - beta;
        let term = if e.abs() < 1e-9 {
            l / p
        } else {
            -(-(e / p) * l).exp_m1() / e
        };
        let t = binomial(gamma - 1, n) * term;
        mag += t.abs();
        if n % 2 == 0 {
            sum += t;
        } else {
            sum -= t;
        }
    }
    if mag * 1e-15 > 1e-12 * sum.abs() {
        // heavy cancellation: integrate the same finite sum in the ln η variable
        return (lead - lgamma(gamma as f64)).exp() / p * log_integral(gamma, c, l);
    }
    (lead - lgamma(gamma as f64)).exp() * sum
}

// ∫_0^L (1−e^{−s})^{γ−1} e^{cs} ds by power series, valid for small L(1+|c|).
fn small_log_series(gamma: u32, c: f64, l: f64) -> f64 {
    const M: usize = 60;
    // a(s) = (1−e^{−s})/s
    let mut a = [0.0f64; M];
    let mut fact = 1.0;
    for (k, slot) in a.iter_mut().enumerate() {
        fact *= (k + 1) as f64;
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        *slot = sign / fact;
    }
    let mut pow = [0.0f64; M];
    pow[0] = 1.0;
    for _ in 1..gamma {
        let mut next = [0.0f64; M];
        for i in 0..M {
            if pow[i] == 0.0 {
                continue;
            }
            for j in 0..M - i {
                next[i + j] += pow[i] * a[j];
            }
        }
        pow = next;
    }
    let mut ec = [0.0f64; M];
    let mut t = 1.0;
    for (j, slot) in ec.iter_mut().enumerate() {
        if j > 0 {
            t *= c / j as f64;
        }
        *slot = t;
    }
    let g1 = (gamma - 1) as f64;
    let mut total = 0.0;
    let mut lp = l.powf(g1 + 1.0);
    for m in 0..M {
        let mut coef = 0.0;
        for i in 0..=m {
            coef += pow[i] * ec[m - i];
        }
        let term = coef * lp / (g1 + 1.0 + m as f64);
        // no early exit: coefficients can vanish (e.g. odd ones when 2c = γ − 1)
        total += term;
        lp *= l;
    }
    total
}

fn log_integral(gamma: u32, c: f64, l: f64) -> f64 {
    let g1 = (gamma - 1) as i32;
    let f = |s: f64| (-(-s).exp_m1()).powi(g1) * (c * s).exp();
    adaptive(f, 0.0, l, Tol::new(0.0, 1e-14))
        .map(|(v, _)| v)
        .unwrap_or(f64::NAN)
}

/// Parameters of IGa(β, γ, p, η) with cached K and envelope constant V₁.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IgaParams {
    pub beta: f64,
    pub gamma: u32,
    pub p: f64,
    pub eta: f64,
    pub k_const: f64,
    pub v1: f64,
    /// Acceptance rate of the mixture route in [`sample_iga_mixture_counted`].
    pub mix_accept: f64,
}

impl IgaParams {
    pub fn new(beta: f64, gamma: u32, p: f64, eta: f64) -> Result<Self> {
        check_iga(beta, gamma, p, eta)?;
        let k_const = norm_constant(beta, gamma, p, eta);
        if !(k_const > 0.0 && k_const.is_finite()) {
            return numerical(format!("IGa normalizing constant not finite/positive: {k_const}"));
        }
        let g = gamma as f64;
        let log_v1 = g * (eta - 1.0).ln() + lgamma(g - beta / p) - p.ln() - k_const.ln() - lgamma(g + 1.0);
        let v1 = log_v1.exp();
        debug_assert!({
            let q = iga_k_by_quadrature(beta, gamma, p, eta);
            (q / k_const - 1.0).abs() < 1e-8
        });
        // ∫_1^η (v−1)^{γ−1}v^{β/p−γ}dv = p(γ−1)!K/Γ(γ−β/p) over ∫_1^η v^{β/p−1}dv
        let c = beta / p;
        let le = eta.ln();
        let den = if c == 0.0 { le } else { (c * le).exp_m1() / c };
        let log_num = p.ln() + lgamma(g) + k_const.ln() - lgamma(g - c);
        let mix_accept = (log_num - den.ln()).exp().min(1.0);
        Ok(Self { beta, gamma, p, eta, k_const, v1, mix_accept })
    }

    /// Shape of the Ga proposal in Algorithm 1.
    pub fn proposal_shape(&self) -> f64 {
        self.gamma as f64 - self.beta / self.p
    }

    /// φ₁ evaluated at a Ga(γ − β/p, 1) proposal y.
    #[inline]
    pub fn phi1(&self, y: f64) -> f64 {
        scaled_lower_gamma_int(self.gamma, y * (self.eta - 1.0))
    }
}

/// K by quadrature of the beta-integral representation.
pub(crate) fn iga_k_by_quadrature(beta: f64, gamma: u32, p: f64, eta: f64) -> f64 {
    let c = beta / p;
    let g1 = gamma as i32 - 1;
    let f = |u: f64| (1.0 - u).powi(g1) * u.powf(-1.0 - c);
    let (v, _) = adaptive(f, 1.0 / eta, 1.0, Tol::new(0.0, 1e-14)).unwrap_or((f64::NAN, 0.0));
    (lgamma(gamma as f64 - c) - lgamma(gamma as f64)).exp() / p * v
}

/// IGa density.
pub fn iga_pdf(params: &IgaParams, u: f64) -> f64 {
    if u <= 0.0 || !u.is_finite() {
        return 0.0;
    }
    let up = u.powf(params.p);
    let num = etd(up, params.eta * up, params.gamma);
    if num == 0.0 {
        // fall back to the scaled form when the plain product underflows
        let d = up * (params.eta - 1.0);
        let g = params.gamma as f64;
        let logv = -up + g * d.ln() - lgamma(g + 1.0) + scaled_lower_gamma_int(params.gamma, d).ln()
            - (1.0 + params.beta) * u.ln()
            - params.k_const.ln();
        return logv.exp();
    }
    num * u.powf(-1.0 - params.beta) / params.k_const
}

/// E[X^κ] for X ~ IGa.
pub fn iga_moment(params: &IgaParams, kappa: f64) -> Result<f64> {
    let lo = params.beta - params.p * params.gamma as f64;
    if !(kappa > lo) {
        return domain(format!("IGa moment needs kappa > {lo}, got {kappa}"));
    }
    if kappa == 0.0 {
        return Ok(1.0);
    }
    Ok(norm_constant(params.beta - kappa, params.gamma, params.p, params.eta) / params.k_const)
}

/// Algorithm 1: returns the draw and the number of proposals used.
pub fn sample_iga_counted(params: &IgaParams, rng: &mut RandomSource) -> Result<(f64, u64)> {
    let shape = params.proposal_shape();
    let g = Gamma::new(shape, 1.0).expect("positive proposal shape");
    let inv_p = 1.0 / params.p;
    for k in 1..=MAX_REJECTIONS {
        let u = rng.uniform();
        let y: f64 = g.sample(rng);
        if u <= params.phi1(y) {
            return Ok((y.powf(inv_p), k));
        }
    }
    numerical(format!(
        "IGa sampler: {MAX_REJECTIONS} consecutive rejections (beta={}, gamma={}, p={}, eta={})",
        params.beta, params.gamma, params.p, params.eta
    ))
}

/// IGa as a mixture: V on [1, η] with density ∝ (v−1)^{γ−1}v^{β/p−γ}, drawn
/// by rejection from ∝ v^{β/p−1}, then U^p ~ Ga(γ − β/p, V). Returns the draw
/// and the number of proposals for V.
pub fn sample_iga_mixture_counted(params: &IgaParams, rng: &mut RandomSource) -> Result<(f64, u64)> {
    let c = params.beta / params.p;
    let le = params.eta.ln();
    let span = (c * le).exp_m1();
    let gm1 = params.gamma as i32 - 1;
    for k in 1..=MAX_REJECTIONS {
        let w = rng.uniform();
        let v = if c == 0.0 { (w * le).exp() } else { ((w * span).ln_1p() / c).exp() };
        if gm1 == 0 || rng.uniform() <= (1.0 - 1.0 / v).powi(gm1) {
            let g = gamma_unchecked(params.proposal_shape(), 1.0, rng);
            return Ok(((g / v).powf(1.0 / params.p), k));
        }
    }
    numerical(format!(
        "IGa mixture sampler: {MAX_REJECTIONS} consecutive rejections (beta={}, gamma={}, p={}, eta={})",
        params.beta, params.gamma, params.p, params.eta
    ))
}

/// IGa by whichever of Algorithm 1 and the mixture route accepts more often.
pub fn sample_iga_fast_counted(params: &IgaParams, rng: &mut RandomSource) -> Result<(f64, u64)> {
    if params.mix_accept > 1.0 / params.v1 {
        sample_iga_mixture_counted(params, rng)
    } else {
        sample_iga_counted(params, rng)
    }
}

/// One IGa draw by the faster route.
pub fn sample_iga(params: &IgaParams, rng: &mut RandomSource) -> Result<f64> {
    sample_iga_fast_counted(params, rng).map(|(v, _)| v)
}

/// LL(α, p) parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LlParams {
    pub alpha: f64,
    pub p: f64,
}

impl LlParams {
    pub fn new(alpha: f64, p: f64) -> Result<Self> {
        if !(alpha > 0.0 && p > alpha && p.is_finite()) {
            return domain(format!("LL needs 0 < alpha < p, got alpha={alpha}, p={p}"));
        }
        Ok(Self { alpha, p })
    }
}

/// LL(α, p) density.
pub fn ll_pdf(params: &LlParams, u: f64) -> f64 {
    if u <= 0.0 {
        return 0.0;
    }
    let (a, p) = (params.alpha, params.p);
    let c = a * (1.0 - a / p);
    if u <= 1.0 {
        c * u.powf(p - a - 1.0)
    } else {
        c * u.powf(-1.0 - a)
    }
}

/// LL(α, p) cdf.
pub fn ll_cdf(params: &LlParams, u: f64) -> f64 {
    if u <= 0.0 {
        return 0.0;
    }
    let (a, p) = (params.alpha, params.p);
    if u <= 1.0 {
        a / p * u.powf(p - a)
    } else {
        1.0 - (1.0 - a / p) * u.powf(-a)
    }
}

/// LL(α, p) from one uniform.
pub fn sample_ll(params: &LlParams, rng: &mut RandomSource) -> f64 {
    ll_from_uniform(params, rng.uniform())
}

/// The single-uniform map used by [`sample_ll`].
#[inline]
pub fn ll_from_uniform(params: &LlParams, u: f64) -> f64 {
    let (a, p) = (params.alpha, params.p);
    let r = a / p;
    if u <= r {
        (u / r).powf(1.0 / (p - a))
    } else {
        ((1.0 - u) / (1.0 - r)).powf(-1.0 / a)
    }
}

/// LL(α, p) as U₁^{1/(p−α)} U₂^{−1/α}.
pub fn sample_ll_two_uniform(params: &LlParams, rng: &mut RandomSource) -> f64 {
    let u1 = rng.uniform();
    let u2 = rng.uniform();
    u1.powf(1.0 / (params.p - params.alpha)) * u2.powf(-1.0 / params.alpha)
}

/// Γ(γ−β/p)(η−1)^γ/(pΓ(γ+1)), the η ↓ 1 asymptote of K.
pub fn iga_k_asymptote_near_one(beta: f64, gamma: u32, p: f64, eta: f64) -> f64 {
    let g = gamma as f64;
    (lgamma(g - beta / p) + g * (eta - 1.0).ln() - lgamma(g + 1.0)).exp() / p
}

/// The η → ∞ asymptote of K (three regimes by the sign of β).
pub fn iga_k_asymptote_large(beta: f64, gamma: u32, p: f64, eta: f64) -> f64 {
    let g = gamma as f64;
    if beta > 0.0 {
        (lgamma(g - beta / p) - lgamma(g) + beta / p * eta.ln()).exp() / beta
    } else if beta == 0.0 {
        eta.ln() / p
    } else {
        lgamma(-beta / p).exp() / p
    }
}
