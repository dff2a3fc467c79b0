//! Exact transition law of the p-tempered α-stable OU process.
//!
//! Given Y_s = y, over a step t with η = e^{pλt} and γ = 1 + ⌊α/p⌋,
//!
//! Y_{s+t} = e^{−λt}y + (1 − e^{−λt})b − Σ_n b_n + X₀ + e^{−λt} Σ_{n=1}^{γ−1} X_n + Σ_{j≤N} V_j W_j
//!
//! with X₀ ~ TS_α((1 − e^{−αλt})R), X_n ~ TS_{α−np}((1 − e^{−pλt})^n/n!·R),
//! N ~ Pois(e^{−αλt}R(ℝᵈ)K_{α,γ,p,η}), V_j ~ R¹ and W_j ~ IGa(α, γ, p, η).

use crate::base_dists::{
    gamma_unchecked, iga_norm_constant, sample_iga_fast_counted, sample_poisson, IgaParams, LlParams, RandomSource,
    MAX_REJECTIONS,
};
use crate::error::{domain, numerical, Error, Result};
use crate::quad::{adaptive, semi_infinite, Tol};
use crate::special_fn::{factorial, gamma, lgamma, scaled_lower_gamma_int};
use crate::ts_core::cf::{cexpm1, check_alpha_p};
use crate::ts_core::measure::integrate_on;
use crate::ts_core::{inner_integral_p1, QAtom, RosinskiMeasure, SpectralAtom, SpectralModel, TsComponent, TsLaw, TsouParams};
use num_complex::Complex64;
use std::f64::consts::PI;
use std::fmt::Debug;
use std::sync::Arc;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// γ = 1 + ⌊α/p⌋, with α/p within 1e-12 of an integer treated as that integer.
pub fn gamma_index(alpha: f64, p: f64) -> u32 {
    let r = alpha / p;
    let k = r.round();
    let f = if (r - k).abs() < 1e-12 { k } else { r.floor() };
    1 + f as u32
}

/// One TS component of the transition: multiplier·X with X ~ TS_{alpha}(scale·R).
#[derive(Debug, Clone)]
pub struct ComponentSpec {
    pub n: u32,
    pub alpha: f64,
    pub scale: f64,
    pub multiplier: f64,
}

/// Deterministic parts of the transition over one step.
#[derive(Debug, Clone)]
pub struct TransitionSpec {
    pub t: f64,
    pub lambda: f64,
    pub alpha: f64,
    pub p: f64,
    pub gamma: u32,
    pub eta: f64,
    /// e^{−λt}.
    pub decay: f64,
    /// (1 − e^{−λt})b − Σ_n b_n.
    pub shift: Vec<f64>,
    /// b_0, …, b_{γ−1}.
    pub b_n: Vec<Vec<f64>>,
    pub components: Vec<ComponentSpec>,
    /// K_{α,γ,p,η}.
    pub k_const: f64,
    pub poisson_mean: f64,
}

/// Builds the deterministic parts of the transition for a step t > 0.
pub fn build_transition_spec(params: &TsouParams, t: f64) -> Result<TransitionSpec> {
    if !(t > 0.0 && t.is_finite()) {
        return domain(format!("time step must be positive, got {t}"));
    }
    let (alpha, p, lambda) = (params.alpha, params.p, params.lambda);
    let r = params.rosinski();
    let gam = gamma_index(alpha, p);
    let lt = lambda * t;
    let eta = (p * lt).exp();
    let decay = (-lt).exp();
    let mass = r.total_mass();
    let k_const = iga_norm_constant(alpha, gam, p, eta)?;
    let poisson_mean = (-alpha * lt).exp() * mass * k_const;
    let mean_r = if alpha >= 1.0 { r.mean()? } else { vec![0.0; r.dim()] };
    let mut b_n = Vec::new();
    let b0 = if alpha >= 1.0 {
        let k1 = iga_norm_constant(alpha - 1.0, gam, p, eta)?;
        mean_r.iter().map(|m| (-alpha * lt).exp() * m * k1).collect()
    } else {
        vec![0.0; r.dim()]
    };
    b_n.push(b0);
    let mut components = Vec::new();
    let s0 = -(-alpha * lt).exp_m1();
    if alpha > 0.0 {
        components.push(ComponentSpec { n: 0, alpha, scale: s0, multiplier: 1.0 });
    }
    let base = -(-p * lt).exp_m1();
    for n in 1..gam {
        let nf = n as f64;
        let an = (alpha - nf * p).max(0.0);
        let scale = base.powi(n as i32) / factorial(n);
        components.push(ComponentSpec { n, alpha: an, scale, multiplier: decay });
        let bn = if alpha >= 1.0 && alpha < 1.0 + nf * p {
            let c = gamma((1.0 - alpha + nf * p) / p) / p;
            mean_r.iter().map(|m| decay * m * scale * c).collect()
        } else {
            vec![0.0; r.dim()]
        };
        b_n.push(bn);
    }
    let mut shift: Vec<f64> = params.b.iter().map(|b| -(-lt).exp_m1() * b).collect();
    for bn in &b_n {
        for (s, v) in shift.iter_mut().zip(bn) {
            *s -= v;
        }
    }
    Ok(TransitionSpec { t, lambda, alpha, p, gamma: gam, eta, decay, shift, b_n, components, k_const, poisson_mean })
}

/// (1 − e^{−pλt})^n/n!, the factor of R in X_n.
pub fn component_scale(p: f64, lambda: f64, t: f64, n: u32) -> f64 {
    (-(-p * lambda * t).exp_m1()).powi(n as i32) / factorial(n)
}

/// ℓ_n(ξ, u) = (e^{pλt} − 1)^n/n! Σ_k w_k s_k^n e^{−u^p s_k} for a direction with discrete Q_ξ.
pub fn ell_n(atom: &SpectralAtom, n: u32, u: f64, t: f64, lambda: f64, p: f64) -> f64 {
    let lead = (p * lambda * t).exp_m1().powi(n as i32) / factorial(n);
    let up = u.powf(p);
    lead * atom.q.iter().map(|a| a.w * a.s.powi(n as i32) * (-up * a.s).exp()).sum::<f64>()
}

/// How the jump sizes V·W are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// V ~ R¹ and W by Algorithm 1.
    Direct,
    /// Radial part by rejection from LL(α, γp).
    Alg2,
    /// Radial part by rejection from a generalized gamma law.
    Alg3,
    /// Per direction, whichever of Algorithms 2 and 3 has the smaller
    /// expected number of proposals; direct for Rosiński-form measures.
    Auto,
}

impl std::str::FromStr for Strategy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "direct" => Ok(Strategy::Direct),
            "alg2" => Ok(Strategy::Alg2),
            "alg3" => Ok(Strategy::Alg3),
            "auto" => Ok(Strategy::Auto),
            _ => Err(Error::Config(format!("unknown strategy '{s}'"))),
        }
    }
}

/// Which rejection sampler a direction uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RadialAlg {
    Alg2,
    Alg3,
}

/// Constants of Algorithms 2 and 3 for one direction ξ.
#[derive(Debug, Clone)]
pub struct DirectionSampler {
    pub xi: Vec<f64>,
    pub q: Vec<QAtom>,
    alpha: f64,
    p: f64,
    gamma: u32,
    eta: f64,
    /// 1/κ_ξ = K Σ w s^{α/p}.
    pub kappa: f64,
    /// C_{ξ,γ} = (η−1)^γ/γ! Σ w s^γ.
    pub c_const: f64,
    pub v2_prime: f64,
    /// Expected proposals per draw for Algorithm 2 (infinite when α = 0).
    pub v2: f64,
    /// Expected proposals per draw for Algorithm 3.
    pub v3: f64,
    pub zeta: f64,
    sum_s_gamma: f64,
    pub alg: RadialAlg,
}

impl DirectionSampler {
    fn new(xi: Vec<f64>, q: Vec<QAtom>, alpha: f64, p: f64, gam: u32, eta: f64, k_const: f64, choice: Strategy) -> Result<Self> {
        let g = gam as f64;
        let sum_alpha: f64 = q.iter().map(|a| a.w * a.s.powf(alpha / p)).sum();
        let sum_s_gamma: f64 = q.iter().map(|a| a.w * a.s.powi(gam as i32)).sum();
        let kappa = 1.0 / (k_const * sum_alpha);
        let lf = lgamma(g + 1.0);
        let c_const = (g * (eta - 1.0).ln() - lf).exp() * sum_s_gamma;
        let peak = (-g + g * g.ln() + g * (eta - 1.0).ln() - lf).exp();
        let v2_prime = peak.min(1.0).max(c_const);
        let v2 = if alpha > 0.0 { kappa * g * p / (alpha * (g * p - alpha)) * v2_prime } else { f64::INFINITY };
        let zeta = q.iter().map(|a| a.s).fold(f64::INFINITY, f64::min);
        let sh = g - alpha / p;
        let v3 = kappa * (-sh * zeta.ln() + lgamma(sh)).exp() * c_const / p;
        let alg = match choice {
            Strategy::Alg2 => {
                if alpha == 0.0 {
                    return Err(Error::Unsupported("Algorithm 2 needs alpha > 0".into()));
                }
                RadialAlg::Alg2
            }
            Strategy::Alg3 => RadialAlg::Alg3,
            _ => {
                if v2 < v3 {
                    RadialAlg::Alg2
                } else {
                    RadialAlg::Alg3
                }
            }
        };
        Ok(Self { xi, q, alpha, p, gamma: gam, eta, kappa, c_const, v2_prime, v2, v3, zeta, sum_s_gamma, alg })
    }

    /// Sufficient threshold on ζ for V₂ > V₃.
    pub fn zeta_threshold(&self) -> f64 {
        let g = self.gamma as f64;
        let sh = g - self.alpha / self.p;
        (self.alpha / (g * self.p) * gamma(sh + 1.0)).powf(1.0 / sh)
    }

    /// Acceptance probability of Algorithm 2 at u.
    pub fn phi2(&self, u: f64) -> f64 {
        let up = u.powf(self.p);
        let g = self.gamma;
        let mut s = 0.0;
        if u <= 1.0 {
            // Σ w ETD(u^p s, u^p η s, γ)/u^{γp} = Σ w s^γ e^{−a}(η−1)^γ S̃(a(η−1))/γ!, a = u^p s
            let lead = ((self.gamma as f64) * (self.eta - 1.0).ln() - lgamma(g as f64 + 1.0)).exp();
            for a in &self.q {
                let x = up * a.s;
                s += a.w * a.s.powi(g as i32) * (-x).exp() * scaled_lower_gamma_int(g, x * (self.eta - 1.0));
            }
            s * lead / self.v2_prime
        } else {
            for a in &self.q {
                let x = up * a.s;
                s += a.w * crate::special_fn::etd(x, self.eta * x, g);
            }
            s / self.v2_prime
        }
    }

    /// Acceptance probability of Algorithm 3 at y = u^p.
    pub fn phi3(&self, y: f64) -> f64 {
        let g = self.gamma;
        let mut s = 0.0;
        for a in &self.q {
            s += a.w * a.s.powi(g as i32) * (-y * (a.s - self.zeta)).exp() * scaled_lower_gamma_int(g, y * a.s * (self.eta - 1.0));
        }
        s / self.sum_s_gamma
    }

    /// Radial part by Algorithm 2 with the number of proposals.
    pub fn sample_alg2_counted(&self, rng: &mut RandomSource) -> Result<(f64, u64)> {
        if self.alpha == 0.0 {
            return Err(Error::Unsupported("Algorithm 2 needs alpha > 0".into()));
        }
        let ll = LlParams { alpha: self.alpha, p: self.gamma as f64 * self.p };
        for k in 1..=MAX_REJECTIONS {
            let u = crate::base_dists::sample_ll(&ll, rng);
            if rng.uniform() <= self.phi2(u) {
                return Ok((u, k));
            }
        }
        numerical("Algorithm 2: too many consecutive rejections")
    }

    /// Radial part by Algorithm 3 with the number of proposals.
    pub fn sample_alg3_counted(&self, rng: &mut RandomSource) -> Result<(f64, u64)> {
        let sh = self.gamma as f64 - self.alpha / self.p;
        for k in 1..=MAX_REJECTIONS {
            let y = gamma_unchecked(sh, self.zeta, rng);
            if rng.uniform() <= self.phi3(y) {
                return Ok((y.powf(1.0 / self.p), k));
            }
        }
        numerical("Algorithm 3: too many consecutive rejections")
    }

    pub fn sample_counted(&self, rng: &mut RandomSource) -> Result<(f64, u64)> {
        match self.alg {
            RadialAlg::Alg2 => self.sample_alg2_counted(rng),
            RadialAlg::Alg3 => self.sample_alg3_counted(rng),
        }
    }

    /// Density of the radial part U of V·W = ξU.
    pub fn radial_pdf(&self, u: f64) -> f64 {
        if u <= 0.0 {
            return 0.0;
        }
        let up = u.powf(self.p);
        let s: f64 = self.q.iter().map(|a| a.w * crate::special_fn::etd(up * a.s, self.eta * up * a.s, self.gamma)).sum();
        self.kappa * s * u.powf(-1.0 - self.alpha)
    }
}

/// V·W for a spectral model by Algorithms 2 and 3.
#[derive(Debug, Clone)]
pub struct ProductSamplerAlg23 {
    pub directions: Vec<DirectionSampler>,
    cum: Vec<f64>,
}

impl ProductSamplerAlg23 {
    /// Probability of picking each direction.
    pub fn probabilities(&self) -> Vec<f64> {
        let total = self.cum.last().copied().unwrap_or(0.0);
        let mut prev = 0.0;
        self.cum
            .iter()
            .map(|&c| {
                let w = (c - prev) / total;
                prev = c;
                w
            })
            .collect()
    }

    pub fn sample_counted(&self, rng: &mut RandomSource) -> Result<(Vec<f64>, u64)> {
        let u = rng.uniform() * self.cum.last().copied().unwrap_or(0.0);
        let i = self.cum.iter().position(|&c| u < c).unwrap_or(self.cum.len() - 1);
        let d = &self.directions[i];
        let (r, k) = d.sample_counted(rng)?;
        Ok((d.xi.iter().map(|x| x * r).collect(), k))
    }
}

/// Builds Algorithms 2/3 for every direction of a spectral model.
pub fn build_product_sampler_spectral(
    model: &SpectralModel,
    alpha: f64,
    p: f64,
    t: f64,
    lambda: f64,
    strategy: Strategy,
) -> Result<ProductSamplerAlg23> {
    check_alpha_p(alpha, p)?;
    if !(t > 0.0 && lambda > 0.0) {
        return domain("t and lambda must be positive");
    }
    let gam = gamma_index(alpha, p);
    let eta = (p * lambda * t).exp();
    let k_const = iga_norm_constant(alpha, gam, p, eta)?;
    let mut directions = Vec::new();
    let mut cum = Vec::new();
    let mut acc = 0.0;
    for a in &model.atoms {
        let d = DirectionSampler::new(a.xi.clone(), a.q.clone(), alpha, p, gam, eta, k_const, strategy)?;
        acc += a.sigma_w * a.q.iter().map(|q| q.w * q.s.powf(alpha / p)).sum::<f64>();
        cum.push(acc);
        directions.push(d);
    }
    Ok(ProductSamplerAlg23 { directions, cum })
}

/// Draws from TS components a built-in sampler cannot handle (d > 1 with α > 0).
pub trait ComponentSampler: Send + Sync + Debug {
    fn sample(&self, alpha: f64, measure: &RosinskiMeasure, p: f64, rng: &mut RandomSource) -> Result<Vec<f64>>;
}

#[derive(Debug, Clone)]
enum ComponentDraw {
    Builtin(Arc<TsComponent>),
    Plugin(Arc<dyn ComponentSampler>, RosinskiMeasure),
}

#[derive(Debug, Clone)]
enum JumpDraw {
    Direct(IgaParams),
    Spectral(ProductSamplerAlg23),
}

/// Counts gathered while drawing one transition.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TransitionCounts {
    pub jumps: u64,
    pub proposals: u64,
}

/// Ready-to-use sampler of the transition law for a fixed step.
#[derive(Debug, Clone)]
pub struct TransitionSampler {
    pub spec: TransitionSpec,
    measure: RosinskiMeasure,
    components: Vec<(ComponentSpec, ComponentDraw)>,
    jumps: JumpDraw,
    pub strategy: Strategy,
}

impl TransitionSampler {
    pub fn new(params: &TsouParams, t: f64, strategy: Strategy) -> Result<Self> {
        Self::with_plugin(params, t, strategy, None)
    }

    pub fn with_plugin(
        params: &TsouParams,
        t: f64,
        strategy: Strategy,
        plugin: Option<Arc<dyn ComponentSampler>>,
    ) -> Result<Self> {
        let spec = build_transition_spec(params, t)?;
        let measure = params.rosinski().clone();
        let mut components = Vec::new();
        for c in &spec.components {
            if c.scale == 0.0 {
                continue;
            }
            let m = measure.scaled(c.scale);
            let draw = match TsComponent::new(c.alpha, m.clone(), params.p) {
                Ok(tc) => ComponentDraw::Builtin(Arc::new(tc)),
                Err(Error::Unsupported(msg)) => match &plugin {
                    Some(pl) => ComponentDraw::Plugin(pl.clone(), m),
                    None => return Err(Error::Unsupported(msg)),
                },
                Err(e) => return Err(e),
            };
            components.push((c.clone(), draw));
        }
        let resolved = match (strategy, params.spectral()) {
            (Strategy::Auto, None) => Strategy::Direct,
            (Strategy::Alg2 | Strategy::Alg3, None) => {
                return Err(Error::Unsupported("Algorithms 2 and 3 need a spectral model".into()))
            }
            (s, _) => s,
        };
        let jumps = match (resolved, params.spectral()) {
            (Strategy::Direct, _) => JumpDraw::Direct(IgaParams::new(params.alpha, spec.gamma, params.p, spec.eta)?),
            (s, Some(model)) => JumpDraw::Spectral(build_product_sampler_spectral(model, params.alpha, params.p, t, params.lambda, s)?),
            (_, None) => unreachable!("resolved above"),
        };
        Ok(Self { spec, measure, components, jumps, strategy: resolved })
    }

    /// The product sampler of Algorithms 2/3 when one is in use.
    pub fn product_sampler(&self) -> Option<&ProductSamplerAlg23> {
        match &self.jumps {
            JumpDraw::Spectral(s) => Some(s),
            JumpDraw::Direct(_) => None,
        }
    }

    /// One draw of V·W.
    pub fn sample_jump(&self, rng: &mut RandomSource) -> Result<(Vec<f64>, u64)> {
        match &self.jumps {
            JumpDraw::Direct(iga) => {
                let v = self.measure.sample_r1(rng)?;
                let (w, k) = sample_iga_fast_counted(iga, rng)?;
                Ok((v.into_iter().map(|x| x * w).collect(), k))
            }
            JumpDraw::Spectral(s) => s.sample_counted(rng),
        }
    }

    /// Y_{s+t} given Y_s = y.
    pub fn sample(&self, y: &[f64], rng: &mut RandomSource) -> Result<Vec<f64>> {
        self.sample_counted(y, rng).map(|(v, _)| v)
    }

    pub fn sample_counted(&self, y: &[f64], rng: &mut RandomSource) -> Result<(Vec<f64>, TransitionCounts)> {
        if y.len() != self.measure.dim() {
            return domain("state dimension differs from the model");
        }
        let mut out: Vec<f64> = y.iter().zip(&self.spec.shift).map(|(y, s)| self.spec.decay * y + s).collect();
        for (c, draw) in &self.components {
            let x = match draw {
                ComponentDraw::Builtin(tc) => tc.sample(rng)?,
                ComponentDraw::Plugin(pl, m) => pl.sample(c.alpha, m, self.spec.p, rng)?,
            };
            for (o, v) in out.iter_mut().zip(&x) {
                *o += c.multiplier * v;
            }
        }
        let n = sample_poisson(self.spec.poisson_mean, rng)?;
        let mut counts = TransitionCounts { jumps: n, proposals: 0 };
        for _ in 0..n {
            let (j, k) = self.sample_jump(rng)?;
            counts.proposals += k;
            for (o, v) in out.iter_mut().zip(&j) {
                *o += v;
            }
        }
        Ok((out, counts))
    }
}

/// One transition draw. Builds the sampler each call; use
/// [`TransitionSampler`] for repeated draws.
pub fn sample_transition(params: &TsouParams, t: f64, y: &[f64], strategy: Strategy, rng: &mut RandomSource) -> Result<Vec<f64>> {
    TransitionSampler::new(params, t, strategy)?.sample(y, rng)
}

/// A path y₀, Y_t, Y_{2t}, … of `steps` transitions from one seed.
pub fn simulate_path(params: &TsouParams, t: f64, steps: usize, y0: &[f64], seed: u64, strategy: Strategy) -> Result<Vec<Vec<f64>>> {
    let sampler = TransitionSampler::new(params, t, strategy)?;
    let mut rng = RandomSource::new(seed);
    let mut path = Vec::with_capacity(steps + 1);
    let mut y = y0.to_vec();
    path.push(y.clone());
    for _ in 0..steps {
        y = sampler.sample(&y, &mut rng)?;
        path.push(y.clone());
    }
    Ok(path)
}

/// Ĝ(β, c, w) = ∫_0^∞ (e^{iwu} − 1 − iwu) e^{−cu} u^{−1−β} du for β ∈ [0, 2).
fn compensated_gamma_kernel(beta: f64, c: f64, w: f64) -> Complex64 {
    let x = w / c;
    let v = if beta >= 1.0 { inner_integral_p1(beta, x) } else { inner_integral_p1(beta, x) - I * x * gamma(1.0 - beta) };
    c.powf(beta) * v
}

/// Ĝ without compensator for β ∈ [0, 1).
fn plain_gamma_kernel(beta: f64, c: f64, w: f64) -> Complex64 {
    c.powf(beta) * inner_integral_p1(beta, w / c)
}

/// e^{−a} P(γ, a(η−1)) for complex a with Re a ≥ 0.
fn etd_complex(a: Complex64, eta: f64, g: u32) -> Complex64 {
    let d = a * (eta - 1.0);
    let gf = g as f64;
    let p = if d.norm() < gf + 1.0 {
        let mut lead = (-d).exp();
        for i in 1..=g {
            lead = lead * d / i as f64;
        }
        let mut term = Complex64::new(1.0, 0.0);
        let mut sum = term;
        let mut j = gf;
        for _ in 0..200 {
            j += 1.0;
            term = term * d / j;
            sum += term;
            if term.norm() < 1e-17 * sum.norm() {
                break;
            }
        }
        lead * sum
    } else {
        let mut term = Complex64::new(1.0, 0.0);
        let mut sum = term;
        for n in 1..g {
            term = term * d / n as f64;
            sum += term;
        }
        1.0 - (-d).exp() * sum
    };
    (-a).exp() * p
}

/// J(w) = ∫_0^∞ (e^{iwu} − 1) ETD(u^p, ηu^p, γ) u^{−1−α} du by quadrature:
/// real axis up to u₁ = min(1, 1/|w|), then a rotated ray.
pub fn compound_kernel_numeric(alpha: f64, p: f64, gam: u32, eta: f64, w: f64) -> Result<Complex64> {
    if w == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let u1 = 1.0f64.min(1.0 / w.abs());
    let f = |u: f64| -> Complex64 {
        if u == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let up = u.powf(p);
        cexpm1(I * (w * u)) * (crate::special_fn::etd(up, eta * up, gam) * u.powf(-1.0 - alpha))
    };
    let (head, _) = adaptive(f, 0.0, u1, Tol::new(1e-17, 1e-12))?;
    let theta = w.signum() * (PI / 3.0).min(PI / (3.0 * p));
    let dir = Complex64::from_polar(1.0, theta);
    let g = |r: f64| -> Complex64 {
        let u = u1 + r * dir;
        let lu = u.ln();
        let up = (p * lu).exp();
        let v = cexpm1(I * w * u) * etd_complex(up, eta, gam) * ((-1.0 - alpha) * lu).exp() * dir;
        if v.re.is_finite() && v.im.is_finite() {
            v
        } else {
            Complex64::new(0.0, 0.0)
        }
    };
    let (ray, _) = semi_infinite(g, 0.0, 1.0, Tol::new(1e-17 * head.norm().max(1e-300), 1e-12))?;
    Ok(head + ray)
}

/// J(w) in closed form for p = 1 (α ∈ [0, 2)).
pub fn compound_kernel_p1(alpha: f64, gam: u32, eta: f64, w: f64) -> Result<Complex64> {
    // ETD(u, ηu, γ) = e^{−u} − Σ_{n<γ} (η−1)^n/n! u^n e^{−ηu}
    if alpha >= 1.0 {
        let k1 = iga_norm_constant(alpha - 1.0, gam, 1.0, eta)?;
        let mut j = compensated_gamma_kernel(alpha, 1.0, w);
        let mut c = 1.0;
        for n in 0..gam {
            if n > 0 {
                c *= (eta - 1.0) / n as f64;
            }
            j -= c * compensated_gamma_kernel(alpha - n as f64, eta, w);
        }
        Ok(j + I * w * k1)
    } else {
        Ok(plain_gamma_kernel(alpha, 1.0, w) - plain_gamma_kernel(alpha, eta, w))
    }
}

fn compound_kernel(alpha: f64, p: f64, gam: u32, eta: f64, w: f64) -> Result<Complex64> {
    if p == 1.0 {
        compound_kernel_p1(alpha, gam, eta, w)
    } else {
        compound_kernel_numeric(alpha, p, gam, eta, w)
    }
}

/// log E[e^{izY_{s+t}} | Y_s = y] in d = 1, assembled term by term from the
/// transition decomposition.
pub fn transition_cf_exponent(params: &TsouParams, t: f64, y: f64, z: f64) -> Result<Complex64> {
    if params.dim() != 1 {
        return Err(Error::Unsupported("transition exponent is one-dimensional".into()));
    }
    let spec = build_transition_spec(params, t)?;
    let r = params.rosinski();
    let mut c = I * z * (spec.decay * y + spec.shift[0]);
    for comp in &spec.components {
        if comp.scale == 0.0 {
            continue;
        }
        let law = TsLaw::new(comp.alpha, params.p, r.scaled(comp.scale), vec![0.0])?;
        c += law.exponent_1d(comp.multiplier * z)?;
    }
    let pre = (-params.alpha * params.lambda * t).exp();
    let (alpha, p, gam, eta) = (params.alpha, params.p, spec.gamma, spec.eta);
    let mut cp = Complex64::new(0.0, 0.0);
    for a in r.atoms() {
        cp += a.w * compound_kernel(alpha, p, gam, eta, z * a.x[0])?;
    }
    if let Some((d, f)) = r.density() {
        let (lo, hi) = d.support();
        let mut err = None;
        let v = integrate_on(
            |x| {
                let rho = d.pdf(x);
                if rho == 0.0 {
                    return Complex64::new(0.0, 0.0);
                }
                match compound_kernel(alpha, p, gam, eta, z * x) {
                    Ok(k) => rho * k,
                    Err(e) => {
                        err = Some(e);
                        Complex64::new(0.0, 0.0)
                    }
                }
            },
            lo,
            hi,
            d.scale_hint(),
            Tol::new(1e-15, 1e-11),
        )?;
        if let Some(e) = err {
            return Err(e);
        }
        cp += f * v;
    }
    Ok(c + pre * cp)
}

/// The same exponent from the stationary law alone:
/// iyz e^{−λt} + C_stat(z) − C_stat(z e^{−λt}).
pub fn transition_cf_exponent_stationary(params: &TsouParams, t: f64, y: f64, z: f64) -> Result<Complex64> {
    if !(t > 0.0) {
        return domain("time step must be positive");
    }
    let law = params.stationary_law()?;
    let d = (-params.lambda * t).exp();
    Ok(I * y * z * d + law.exponent_1d(z)? - law.exponent_1d(z * d)?)
}
