//! The work behind each CLI command. Every function is a pure function of
//! its inputs and seed; the binary only does file I/O and exit codes.

use super::plot::{line_plot, Series};
use super::stats::{kde, KdeSpec};
use crate::base_dists::{sample_iga_counted, IgaParams, RandomSource};
use crate::error::{domain, Error, Result};
use crate::ou_transition::{build_product_sampler_spectral, transition_cf_exponent, Strategy, TransitionSampler};
use crate::par::map_range;
use crate::ts_core::{parse_config, rosinski_to_spectral, InversionTable, TsouParams};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::Value;
use std::fmt::Write;

/// Draws per independent random stream in the fan-out commands.
const CHUNK: usize = 4096;

/// Starting state: a stationary draw in one dimension, the origin otherwise.
fn initial_state(params: &TsouParams, table: Option<&InversionTable>, rng: &mut RandomSource) -> Result<Vec<f64>> {
    match table {
        Some(t) => Ok(vec![t.sample(rng)?]),
        None => Ok(vec![0.0; params.dim()]),
    }
}

fn stationary_table(params: &TsouParams) -> Result<InversionTable> {
    if params.dim() != 1 {
        return Err(Error::Unsupported("the stationary law is tabulated only in one dimension".into()));
    }
    InversionTable::new(&params.stationary_law()?)
}

/// Path of `steps` transitions. In one dimension it starts from a draw of
/// the stationary law; row k holds Y_{kt}.
pub fn simulate(params: &TsouParams, t: f64, steps: usize, seed: u64, strategy: Strategy) -> Result<Vec<Vec<f64>>> {
    if !(t > 0.0 && t.is_finite()) || steps == 0 {
        return domain("need t > 0 and steps >= 1");
    }
    let table = if params.dim() == 1 { Some(stationary_table(params)?) } else { None };
    let sampler = TransitionSampler::new(params, t, strategy)?;
    let mut rng = RandomSource::new(seed);
    let mut y = initial_state(params, table.as_ref(), &mut rng)?;
    let mut path = Vec::with_capacity(steps + 1);
    path.push(y.clone());
    for _ in 0..steps {
        y = sampler.sample(&y, &mut rng)?;
        path.push(y.clone());
    }
    Ok(path)
}

/// CSV with header `step,time,value[,value_2,…]`.
pub fn path_csv(path: &[Vec<f64>], t: f64) -> String {
    let d = path.first().map_or(1, |r| r.len());
    let mut s = String::from("step,time,value");
    for j in 2..=d {
        let _ = write!(s, ",value_{j}");
    }
    s.push('\n');
    for (k, row) in path.iter().enumerate() {
        let _ = write!(s, "{k},{}", k as f64 * t);
        for v in row {
            let _ = write!(s, ",{v}");
        }
        s.push('\n');
    }
    s
}

/// Stationary path, its KDE and the exact stationary pdf on the grid.
#[derive(Debug, Clone)]
pub struct StationaryReport {
    /// Y_t, …, Y_{Nt} (the initial stationary draw is not included).
    pub samples: Vec<f64>,
    pub bandwidth: f64,
    /// (x, kde, true pdf).
    pub rows: Vec<(f64, f64, f64)>,
}

impl StationaryReport {
    pub fn sup_gap(&self) -> f64 {
        self.rows.iter().map(|r| (r.1 - r.2).abs()).fold(0.0, f64::max)
    }

    /// Trapezoidal integral of the KDE over the grid.
    pub fn kde_mass(&self) -> f64 {
        self.rows.windows(2).map(|w| 0.5 * (w[1].0 - w[0].0) * (w[0].1 + w[1].1)).sum()
    }

    pub fn csv(&self) -> String {
        let mut s = String::from("x,kde,true_pdf\n");
        for (x, k, f) in &self.rows {
            let _ = writeln!(s, "{x},{k},{f}");
        }
        s
    }

    pub fn svg(&self, title: &str) -> String {
        let k: Vec<(f64, f64)> = self.rows.iter().map(|r| (r.0, r.1)).collect();
        let f: Vec<(f64, f64)> = self.rows.iter().map(|r| (r.0, r.2)).collect();
        line_plot(
            title,
            &[
                Series { label: "KDE", points: &k, dashed: false },
                Series { label: "true pdf", points: &f, dashed: true },
            ],
        )
    }
}

pub fn stationary(params: &TsouParams, t: f64, steps: usize, seed: u64, strategy: Strategy, spec: &KdeSpec) -> Result<StationaryReport> {
    let table = stationary_table(params)?;
    if !(t > 0.0 && t.is_finite()) || steps == 0 {
        return domain("need t > 0 and steps >= 1");
    }
    let sampler = TransitionSampler::new(params, t, strategy)?;
    let mut rng = RandomSource::new(seed);
    let mut y = vec![table.sample(&mut rng)?];
    let mut samples = Vec::with_capacity(steps);
    for _ in 0..steps {
        y = sampler.sample(&y, &mut rng)?;
        samples.push(y[0]);
    }
    let (est, bandwidth) = kde(&samples, spec)?;
    let rows = est.into_iter().map(|(x, k)| Ok((x, k, table.pdf(x)?))).collect::<Result<Vec<_>>>()?;
    Ok(StationaryReport { samples, bandwidth, rows })
}

/// n independent draws of Y_{kt} given Y_0 = y0 (one dimension), each
/// block of draws on its own random stream.
pub fn transition_draws(params: &TsouParams, t: f64, y0: f64, n: usize, seed: u64, strategy: Strategy) -> Result<Vec<f64>> {
    let sampler = TransitionSampler::new(params, t, strategy)?;
    let chunks = map_range(n.div_ceil(CHUNK), |c| {
        let mut rng = RandomSource::with_stream(seed, c as u64);
        let len = CHUNK.min(n - c * CHUNK);
        (0..len).map(|_| sampler.sample(&[y0], &mut rng).map(|v| v[0])).collect::<Result<Vec<_>>>()
    })?;
    Ok(chunks.concat())
}

/// For each of n independent paths started in the stationary law, the
/// states after each step count in `ks` (one dimension). Returns the
/// initial sample followed by one sample per entry of `ks`.
pub fn stationary_marginals(params: &TsouParams, t: f64, ks: &[usize], n: usize, seed: u64, strategy: Strategy) -> Result<Vec<Vec<f64>>> {
    let table = stationary_table(params)?;
    let sampler = TransitionSampler::new(params, t, strategy)?;
    let kmax = ks.iter().copied().max().unwrap_or(0);
    let rows = map_range(n.div_ceil(CHUNK), |c| {
        let mut rng = RandomSource::with_stream(seed, c as u64);
        let len = CHUNK.min(n - c * CHUNK);
        let mut out = Vec::with_capacity(len);
        for _ in 0..len {
            let mut y = vec![table.sample(&mut rng)?];
            let mut row = vec![y[0]];
            for k in 1..=kmax {
                y = sampler.sample(&y, &mut rng)?;
                if ks.contains(&k) {
                    row.push(y[0]);
                }
            }
            out.push(row);
        }
        Ok(out)
    })?
    .concat();
    let m = 1 + ks.len();
    Ok((0..m).map(|j| rows.iter().map(|r| r[j]).collect()).collect())
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct AcceptReport {
    pub target: String,
    pub n: u64,
    pub proposals: u64,
    pub acceptance: f64,
    pub theoretical: f64,
    pub std_error: f64,
    pub proposals_per_sample: f64,
    pub within_3se: bool,
    /// Per-direction (V₂, V₃, ζ, ζ-threshold) for alg2/alg3.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub directions: Vec<DirectionReport>,
    /// The accepted draws (not serialized).
    #[serde(skip)]
    pub samples: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct DirectionReport {
    pub probability: f64,
    pub v2: f64,
    pub v3: f64,
    pub zeta: f64,
    pub zeta_threshold: f64,
}

fn field(v: &Value, name: &str) -> Result<f64> {
    v.get(name).and_then(Value::as_f64).ok_or_else(|| Error::Config(format!("params need a numeric '{name}'")))
}

/// `acceptance` from the proposal counts; the standard error uses the
/// theoretical mean m and variance s² of the proposals per draw:
/// se = s/(m²√n).
fn accept_report(target: &str, n: u64, proposals: u64, mean_k: f64, var_k: f64, samples: Vec<f64>, directions: Vec<DirectionReport>) -> AcceptReport {
    let acceptance = n as f64 / proposals as f64;
    let theoretical = 1.0 / mean_k;
    let std_error = var_k.sqrt() / (mean_k * mean_k * (n as f64).sqrt());
    AcceptReport {
        target: target.into(),
        n,
        proposals,
        acceptance,
        theoretical,
        std_error,
        proposals_per_sample: proposals as f64 / n as f64,
        within_3se: (acceptance - theoretical).abs() <= 3.0 * std_error,
        directions,
        samples,
    }
}

/// Acceptance benchmark. `params` is `{"beta","gamma","p","eta"}` for `iga`
/// and `{"t": T, "model": <model config>}` for `alg2` and `alg3`; the radial
/// draws of alg2/alg3 are reported as samples.
pub fn bench_accept(target: &str, params: &Value, n: u64, seed: u64) -> Result<AcceptReport> {
    if n == 0 {
        return domain("n must be positive");
    }
    let nn = n as usize;
    match target {
        "iga" => {
            let gamma = field(params, "gamma")?;
            if gamma < 1.0 || gamma.fract() != 0.0 {
                return Err(Error::Config("gamma must be a positive integer".into()));
            }
            let iga = IgaParams::new(field(params, "beta")?, gamma as u32, field(params, "p")?, field(params, "eta")?)?;
            let draws = map_range(nn.div_ceil(CHUNK), |c| {
                let mut rng = RandomSource::with_stream(seed, c as u64);
                (0..CHUNK.min(nn - c * CHUNK)).map(|_| sample_iga_counted(&iga, &mut rng)).collect::<Result<Vec<_>>>()
            })?
            .concat();
            let proposals = draws.iter().map(|d| d.1).sum();
            let p = 1.0 / iga.v1;
            let var_k = (1.0 - p) / (p * p);
            Ok(accept_report(target, n, proposals, iga.v1, var_k, draws.into_iter().map(|d| d.0).collect(), Vec::new()))
        }
        "alg2" | "alg3" => {
            let t = field(params, "t")?;
            let model = params.get("model").ok_or_else(|| Error::Config("params need a 'model'".into()))?;
            let tp = parse_config(&model.to_string())?;
            let spectral = match tp.spectral() {
                Some(s) => s.clone(),
                None => rosinski_to_spectral(tp.rosinski(), tp.alpha, tp.p)?,
            };
            let strategy = if target == "alg2" { Strategy::Alg2 } else { Strategy::Alg3 };
            let ps = build_product_sampler_spectral(&spectral, tp.alpha, tp.p, t, tp.lambda, strategy)?;
            let probs = ps.probabilities();
            let mut mean_k = 0.0;
            let mut second = 0.0;
            let mut directions = Vec::new();
            for (d, &w) in ps.directions.iter().zip(&probs) {
                let v = if target == "alg2" { d.v2 } else { d.v3 };
                mean_k += w * v;
                second += w * (2.0 * v * v - v);
                directions.push(DirectionReport { probability: w, v2: d.v2, v3: d.v3, zeta: d.zeta, zeta_threshold: d.zeta_threshold() });
            }
            let var_k = second - mean_k * mean_k;
            let draws = map_range(nn.div_ceil(CHUNK), |c| {
                let mut rng = RandomSource::with_stream(seed, c as u64);
                (0..CHUNK.min(nn - c * CHUNK)).map(|_| ps.sample_counted(&mut rng)).collect::<Result<Vec<_>>>()
            })?
            .concat();
            let proposals = draws.iter().map(|d| d.1).sum();
            let samples = draws.into_iter().map(|(x, _)| x.iter().map(|v| v * v).sum::<f64>().sqrt()).collect();
            Ok(accept_report(target, n, proposals, mean_k, var_k, samples, directions))
        }
        other => Err(Error::Config(format!("unknown target '{other}'"))),
    }
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct CfPoint {
    pub z: f64,
    pub theory_re: f64,
    pub theory_im: f64,
    pub empirical_re: f64,
    pub empirical_im: f64,
    pub gap: f64,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct CfReport {
    pub t: f64,
    pub y: f64,
    pub n: u64,
    pub strategy: String,
    pub points: Vec<CfPoint>,
    pub max_gap: f64,
    pub bound: f64,
    pub pass: bool,
}

/// exp(C_t(y, z)) against the empirical characteristic function of n
/// transitions from y.
pub fn oracle_cf(params: &TsouParams, t: f64, y: f64, zs: &[f64], n: u64, seed: u64, strategy: Strategy) -> Result<CfReport> {
    if params.dim() != 1 {
        return Err(Error::Unsupported("the cf oracle is one-dimensional".into()));
    }
    if n == 0 || zs.is_empty() {
        return domain("need n >= 1 and at least one z");
    }
    let draws = transition_draws(params, t, y, n as usize, seed, strategy)?;
    let mut points = Vec::with_capacity(zs.len());
    for &z in zs {
        let theory = transition_cf_exponent(params, t, y, z)?.exp();
        let mut acc = Complex64::new(0.0, 0.0);
        for x in &draws {
            let (s, c) = (z * x).sin_cos();
            acc += Complex64::new(c, s);
        }
        let emp = acc / n as f64;
        points.push(CfPoint {
            z,
            theory_re: theory.re,
            theory_im: theory.im,
            empirical_re: emp.re,
            empirical_im: emp.im,
            gap: (theory - emp).norm(),
        });
    }
    let max_gap = points.iter().map(|p| p.gap).fold(0.0, f64::max);
    let bound = 4.0 / (n as f64).sqrt();
    let strategy = format!("{strategy:?}").to_lowercase();
    Ok(CfReport { t, y, n, strategy, points, max_gap, bound, pass: max_gap <= bound })
}
