mod common;

use common::*;
use serde_json::{json, Value};
use std::path::PathBuf;
use std::process::Command;
use tsou::base_dists::RandomSource;
use tsou::harness::*;
use tsou::ou_transition::Strategy;
use tsou::ts_core::{parse_config, TsouParams};

const PT: &str = r#"{"p": 1, "alpha": 1.5, "lambda": 1, "measure": {"type": "pt", "ell": 1, "c": 10}}"#;
// atoms at ±1 given in spectral form, so alg3 and direct both apply
const ATOMS: &str = r#"{"p": 1, "alpha": 1.5, "lambda": 1, "measure": {"type": "spectral",
  "atoms": [{"xi": 1, "sigma_w": 1, "q": [{"s": 2, "w": 1}]}, {"xi": -1, "sigma_w": 1, "q": [{"s": 2, "w": 1}]}]}}"#;

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("tsou-harness-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn model(s: &str) -> TsouParams {
    parse_config(s).unwrap()
}

fn normal_draws(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = RandomSource::new(seed);
    (0..n)
        .map(|_| {
            let (u, v) = (rng.uniform(), rng.uniform());
            (-2.0 * u.ln()).sqrt() * (2.0 * std::f64::consts::PI * v).cos()
        })
        .collect()
}

#[test]
fn ks_null_rejection_rate() {
    let mut passed = 0;
    for seed in 0..100 {
        let mut rng = RandomSource::new(1000 + seed);
        let xs: Vec<f64> = (0..1000).map(|_| rng.uniform()).collect();
        let d = ks_statistic(&xs, |x| x.clamp(0.0, 1.0)).unwrap();
        if d < ks_critical(xs.len(), 0.01) {
            passed += 1;
        }
    }
    assert!(passed >= 98, "{passed} of 100");
}

#[test]
fn ks_edge_cases() {
    assert!(ks_statistic(&[], |x| x).is_err());
    assert!(ks_two_sample(&[], &[1.0]).is_err());
    let cdf = |x: f64| 1.0 / (1.0 + (-x).exp());
    for &x0 in &[-2.0, 0.0, 0.7] {
        let d = ks_statistic(&[x0], cdf).unwrap();
        assert!((d - cdf(x0).max(1.0 - cdf(x0))).abs() < 1e-15);
    }
}

#[test]
fn kde_of_normal_draws() {
    // The mode of a Silverman-bandwidth KDE wanders by about 0.8h, so "peak
    // within h of 0" holds for most seeds but not all. Check the typical case
    // over 10 seeds and bound every seed by the mode's asymptotic sd
    // sqrt(f(0)R(K′)/(nh³))/|f″(0)|.
    let n = 200_000;
    let mut within_h = 0;
    for seed in 1..=10 {
        let xs = normal_draws(n, seed);
        let spec = KdeSpec::new(Bandwidth::Silverman, -6.0, 6.0, 0.01).unwrap();
        let (grid, h) = kde(&xs, &spec).unwrap();
        let peak = grid.iter().cloned().fold((0.0, f64::MIN), |a, b| if b.1 > a.1 { b } else { a });
        let f0 = 1.0 / (2.0 * std::f64::consts::PI).sqrt();
        let rk = 1.0 / (4.0 * std::f64::consts::PI.sqrt());
        let sd = (f0 * rk / (n as f64 * h.powi(3))).sqrt() / f0;
        assert!(peak.0.abs() <= 3.5 * sd + 0.01, "seed {seed}: peak at {} (sd {sd})", peak.0);
        if peak.0.abs() <= h {
            within_h += 1;
        }
        let mass: f64 = grid.iter().map(|p| p.1).sum::<f64>() * 0.01;
        assert!((mass - 1.0).abs() < 1e-3, "{mass}");
    }
    assert!(within_h >= 6, "{within_h} of 10 peaks within h");
    assert!(KdeSpec::new(Bandwidth::Silverman, 1.0, -1.0, 0.1).is_err());
    assert!(KdeSpec::new(Bandwidth::Fixed(-1.0), -1.0, 1.0, 0.1).is_err());
}

#[test]
fn stationary_report_properties() {
    let params = model(PT);
    let spec = KdeSpec::new(Bandwidth::Silverman, -10.0, 10.0, 0.01).unwrap();
    let rep = stationary(&params, 0.1, 20_000, 11, Strategy::Auto, &spec).unwrap();
    // the report's grid stops at ±10, so check the mass on one that holds every sample
    let (lo, hi) = rep.samples.iter().fold((0.0f64, 0.0f64), |a, &x| (a.0.min(x), a.1.max(x)));
    let pad = 10.0 * rep.bandwidth;
    let wide = KdeSpec::new(Bandwidth::Fixed(rep.bandwidth), lo - pad, hi + pad, 0.01).unwrap();
    let (g, _) = kde(&rep.samples, &wide).unwrap();
    let mass = g.iter().map(|p| p.1).sum::<f64>() * 0.01;
    assert!((mass - 1.0).abs() < 1e-3, "{mass}");
    let pdf_mass: f64 = rep.rows.iter().map(|r| r.2).sum::<f64>() * 0.01;
    assert!((rep.kde_mass() - pdf_mass).abs() < 0.02, "{} vs {pdf_mass}", rep.kde_mass());
    // skewness of the KDE on the grid; its SE from 20 batches of the path
    let skew = |rows: &[(f64, f64)]| {
        let m1: f64 = rows.iter().map(|r| r.0 * r.1).sum::<f64>() / rows.iter().map(|r| r.1).sum::<f64>();
        let w: f64 = rows.iter().map(|r| r.1).sum();
        let m2: f64 = rows.iter().map(|r| (r.0 - m1).powi(2) * r.1).sum::<f64>() / w;
        let m3: f64 = rows.iter().map(|r| (r.0 - m1).powi(3) * r.1).sum::<f64>() / w;
        m3 / m2.powf(1.5)
    };
    let rows: Vec<(f64, f64)> = rep.rows.iter().map(|r| (r.0, r.1)).collect();
    let s = skew(&rows);
    let batch = rep.samples.len() / 20;
    let bs: Vec<f64> = rep
        .samples
        .chunks(batch)
        .take(20)
        .map(|c| {
            let (g, _) = kde(c, &KdeSpec::new(Bandwidth::Fixed(rep.bandwidth), -10.0, 10.0, 0.01).unwrap()).unwrap();
            skew(&g)
        })
        .collect();
    // the SE of the batch mean stands in for the SE of the whole-path value
    let (_, se) = mean_se(&bs);
    assert!(s.abs() < 3.0 * se, "skewness {s} se {se}");
    let csv = rep.csv();
    assert!(csv.starts_with("x,kde,true_pdf\n"));
    assert_eq!(csv.lines().count(), rep.rows.len() + 1);
    let svg = rep.svg("PT");
    assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
}

#[test]
fn path_csv_format() {
    let params = model(PT);
    let path = simulate(&params, 0.1, 1000, 3, Strategy::Auto).unwrap();
    let csv = path_csv(&path, 0.1);
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("step,time,value"));
    for (k, line) in lines.enumerate() {
        let cols: Vec<&str> = line.split(',').collect();
        assert_eq!(cols.len(), 3);
        assert_eq!(cols[0].parse::<usize>().unwrap(), k);
        let time: f64 = cols[1].parse().unwrap();
        assert!((time - k as f64 * 0.1).abs() <= 1e-15 * (1.0 + k as f64 * 0.1), "{time}");
        assert!(cols[2].parse::<f64>().unwrap().is_finite());
    }
    assert_eq!(csv.lines().count(), 1002);
    assert_eq!(path_csv(&simulate(&params, 0.1, 1000, 3, Strategy::Auto).unwrap(), 0.1), csv);
    let two = path_csv(&[vec![1.0, 2.0]], 0.5);
    assert!(two.starts_with("step,time,value,value_2\n"));
}

#[test]
fn oracle_cf_basics() {
    let params = model(PT);
    let zs = [-2.0, 0.0, 2.0];
    let rep = oracle_cf(&params, 0.1, 2.0, &zs, 20_000, 4, Strategy::Auto).unwrap();
    let at0 = &rep.points[1];
    assert_eq!((at0.theory_re, at0.theory_im, at0.empirical_re, at0.empirical_im), (1.0, 0.0, 1.0, 0.0));
    let (m, p) = (&rep.points[0], &rep.points[2]);
    assert_eq!(m.empirical_re, p.empirical_re);
    assert_eq!(m.empirical_im, -p.empirical_im);
    assert!((m.theory_re - p.theory_re).abs() < 1e-14 && (m.theory_im + p.theory_im).abs() < 1e-14);
    assert!(rep.pass, "{} vs {}", rep.max_gap, rep.bound);
}

#[test]
fn oracle_cf_across_strategies() {
    let params = model(ATOMS);
    let zs: Vec<f64> = (0..10).map(|i| -4.5 + i as f64).collect();
    let n = 50_000;
    let a = oracle_cf(&params, 0.1, 0.5, &zs, n, 6, Strategy::Alg3).unwrap();
    let d = oracle_cf(&params, 0.1, 0.5, &zs, n, 7, Strategy::Direct).unwrap();
    assert!(a.pass && d.pass, "{} {} bound {}", a.max_gap, d.max_gap, a.bound);
    for (x, y) in a.points.iter().zip(&d.points) {
        let gap = ((x.empirical_re - y.empirical_re).powi(2) + (x.empirical_im - y.empirical_im).powi(2)).sqrt();
        assert!(gap <= 2f64.sqrt() * a.bound, "z {}: {gap}", x.z);
    }
}

#[test]
fn bench_accept_reports() {
    let rep = bench_accept("iga", &json!({"beta": 1.5, "gamma": 2, "p": 1, "eta": 1.01}), 100_000, 1).unwrap();
    assert!(rep.acceptance > 0.99 && rep.within_3se, "{rep:?}");
    let cts = |target: &str| {
        let m: Value = serde_json::from_str(r#"{"p": 1, "alpha": 1.5, "lambda": 1, "measure": {"type": "spectral", "atoms": [{"xi": 1, "sigma_w": 1, "q": [{"s": 3, "w": 1}]}]}}"#).unwrap();
        bench_accept(target, &json!({"t": 0.1, "model": m}), 200_000, 2).unwrap()
    };
    let (r2, r3) = (cts("alg2"), cts("alg3"));
    let d = &r3.directions[0];
    assert!(d.zeta > d.zeta_threshold && d.v3 < d.v2, "{d:?}");
    assert!(r3.theoretical > r2.theoretical);
    assert!(r2.within_3se && r3.within_3se, "{r2:?} {r3:?}");
    assert!(r3.acceptance > r2.acceptance);
    let again = bench_accept("iga", &json!({"beta": 1.5, "gamma": 2, "p": 1, "eta": 1.01}), 100_000, 1).unwrap();
    assert_eq!(serde_json::to_string(&rep).unwrap(), serde_json::to_string(&again).unwrap());
    assert!(bench_accept("nope", &json!({}), 10, 1).is_err());
}

fn tsou(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_tsou")).args(args).output().unwrap()
}

#[test]
fn cli_runs_and_exit_codes() {
    let dir = scratch("cli");
    let cfg = dir.join("pt.json");
    std::fs::write(&cfg, PT).unwrap();
    let cfg = cfg.to_str().unwrap();
    let out = dir.join("a.csv");
    let run = |o: &PathBuf| tsou(&["simulate", "--config", cfg, "--t", "0.1", "--steps", "200", "--seed", "5", "--out", o.to_str().unwrap()]);
    let r = run(&out);
    assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
    let out2 = dir.join("b.csv");
    assert!(run(&out2).status.success());
    assert_eq!(std::fs::read(&out).unwrap(), std::fs::read(&out2).unwrap());

    let r = tsou(&["oracle-cf", "--config", cfg, "--t", "0.1", "--y", "-1", "--z", "-1,0,1", "--n", "2000", "--seed", "1"]);
    assert!(r.status.success());
    let v: Value = serde_json::from_slice(&r.stdout).unwrap();
    assert_eq!(v["points"].as_array().unwrap().len(), 3);

    // bad config
    let bad = dir.join("bad.json");
    std::fs::write(&bad, r#"{"p": 1, "alpha": 2.5, "lambda": 1, "measure": {"type": "pt", "ell": 1, "c": 10}}"#).unwrap();
    let r = tsou(&["simulate", "--config", bad.to_str().unwrap(), "--t", "0.1", "--steps", "5", "--seed", "1", "--out", out.to_str().unwrap()]);
    assert_eq!(r.status.code(), Some(2));
    assert!(!r.stderr.is_empty());
    let r = tsou(&["simulate", "--config", dir.join("missing.json").to_str().unwrap(), "--t", "0.1", "--steps", "5", "--seed", "1", "--out", out.to_str().unwrap()]);
    assert_eq!(r.status.code(), Some(2));
    let r = tsou(&["simulate", "--config", cfg, "--t", "-0.1", "--steps", "5", "--seed", "1", "--out", out.to_str().unwrap()]);
    assert_eq!(r.status.code(), Some(2));
    let r = tsou(&["bench-accept", "--target", "iga", "--params", "{\"beta\": 3, \"gamma\": 1, \"p\": 1, \"eta\": 2}", "--n", "10", "--seed", "1"]);
    assert_eq!(r.status.code(), Some(2));
    // numerical failure: Algorithms 2/3 need a spectral model with α > 0
    let r = tsou(&["bench-accept", "--target", "alg2", "--params", r#"{"t": 0.1, "model": {"p": 1, "alpha": 0, "lambda": 1, "measure": {"type": "atoms", "atoms": [{"x": 1, "w": 1}]}}}"#, "--n", "10", "--seed", "1"]);
    assert_eq!(r.status.code(), Some(3), "{}", String::from_utf8_lossy(&r.stderr));
    assert!(!r.stderr.is_empty());
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn cli_stationary_outputs() {
    let dir = scratch("stat");
    let cfg = dir.join("pt.json");
    std::fs::write(&cfg, PT).unwrap();
    let (csv, svg) = (dir.join("s.csv"), dir.join("s.svg"));
    let r = tsou(&[
        "stationary", "--config", cfg.to_str().unwrap(), "--t", "0.1", "--steps", "2000", "--seed", "2", "--grid", "-10:10:0.05",
        "--out", csv.to_str().unwrap(), "--svg", svg.to_str().unwrap(),
    ]);
    assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("x,kde,true_pdf\n"));
    assert_eq!(text.lines().count(), 402);
    assert!(std::fs::read_to_string(&svg).unwrap().contains("<polyline"));
    let r = tsou(&["stationary", "--config", cfg.to_str().unwrap(), "--t", "0.1", "--steps", "10", "--seed", "2", "--grid", "10:-10:0.05", "--out", csv.to_str().unwrap()]);
    assert_eq!(r.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).ok();
}
