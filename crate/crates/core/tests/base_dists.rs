mod common;

use common::*;
use proptest::prelude::*;
use tsou::base_dists::*;

fn draws(n: usize, seed: u64, mut f: impl FnMut(&mut RandomSource) -> f64) -> Vec<f64> {
    let mut rng = RandomSource::new(seed);
    (0..n).map(|_| f(&mut rng)).collect()
}

#[test]
fn gamma_moments() {
    let xs = draws(1_000_000, 11, |r| sample_gamma(2.0, 3.0, r).unwrap());
    let (m, se) = mean_se(&xs);
    assert!((m - 2.0 / 3.0).abs() < 3.0 * se, "mean {m} se {se}");
    let sq: Vec<f64> = xs.iter().map(|x| (x - 2.0 / 3.0).powi(2)).collect();
    let (v, se) = mean_se(&sq);
    assert!((v - 2.0 / 9.0).abs() < 3.0 * se, "var {v} se {se}");
    assert!(sample_gamma(0.0, 1.0, &mut RandomSource::new(0)).is_err());
}

#[test]
fn gamma_shape_one_is_exponential() {
    let xs = draws(100_000, 12, |r| sample_gamma(1.0, 2.5, r).unwrap());
    let (ok, d, c) = ks_passes(&xs, |x| -(-2.5 * x).exp_m1());
    assert!(ok, "D={d} crit={c}");
}

#[test]
fn gen_gamma_p1_is_gamma() {
    let a = draws(100_000, 13, |r| sample_gen_gamma(2.5, 1.0, 1.5, r).unwrap());
    let b = draws(100_000, 14, |r| sample_gamma(2.5, 1.5, r).unwrap());
    let (ok, d, c) = ks2_passes(&a, &b);
    assert!(ok, "D={d} crit={c}");
}

#[test]
fn gen_gamma_second_moment() {
    let xs = draws(1_000_000, 15, |r| sample_gen_gamma(2.0, 2.0, 1.0, r).unwrap().powi(2));
    let (m, se) = mean_se(&xs);
    assert!((m - 1.0).abs() < 3.0 * se, "{m} {se}");
}

#[test]
fn gen_gamma_ks_against_quadrature_cdf() {
    for &(g, p, z) in &[(1.5f64, 0.7f64, 2.0f64), (3.0, 2.5, 0.5)] {
        let pdf = |u: f64| p * z.powf(g / p) * u.powf(g - 1.0) * (-u.powf(p) * z).exp() / gamma_ref(g / p);
        let hi = (80.0 / z).powf(1.0 / p);
        let mut grid = log_grid(1e-9, hi, 200);
        grid.remove(0);
        let below = z.powf(g / p) * 1e-9f64.powf(g) * p / (g * gamma_ref(g / p));
        let cdf = TabulatedCdf::new(pdf, &grid, below);
        assert!((cdf.total() - 1.0).abs() < 1e-8, "mass {}", cdf.total());
        for &u in &[0.3, 1.0, 2.0] {
            assert!((gen_gamma_pdf(g, p, z, u) - pdf(u)).abs() < 1e-12 * pdf(u));
        }
        let xs = draws(100_000, 16, |r| sample_gen_gamma(g, p, z, r).unwrap());
        let (ok, d, c) = ks_passes(&xs, |x| cdf.eval(x));
        assert!(ok, "g={g} p={p} z={z}: D={d} crit={c}");
    }
}

#[test]
fn poisson_samples() {
    let mut rng = RandomSource::new(17);
    for _ in 0..1000 {
        assert_eq!(sample_poisson(0.0, &mut rng).unwrap(), 0);
    }
    assert!(sample_poisson(-1.0, &mut rng).is_err());
    let n = 1_000_000;
    let zeros: Vec<f64> = (0..n).map(|_| (sample_poisson(0.0936, &mut rng).unwrap() == 0) as u8 as f64).collect();
    let (m, se) = mean_se(&zeros);
    assert!((m - (-0.0936f64).exp()).abs() < 3.0 * se, "{m}");
    let xs: Vec<f64> = (0..n).map(|_| sample_poisson(4.0, &mut rng).unwrap() as f64).collect();
    let (m, se) = mean_se(&xs);
    assert!((m - 4.0).abs() < 3.0 * se, "{m}");
}

#[test]
fn k_examples() {
    let e01 = 0.1f64.exp();
    let want = gamma_ref(0.5) * (0.05f64.exp() - 1.0) / 0.5;
    let got = iga_norm_constant(0.5, 1, 1.0, e01).unwrap();
    assert!(rel(got, want) < 1e-12, "{got} {want}");
    assert!((got - 0.18175).abs() < 1e-5);
    assert!(rel(got, k_oracle(0.5, 1, 1.0, e01)) < 1e-10);
    for &eta in &[1.0001, 1.5, 20.0, 1e6] {
        assert!(rel(iga_norm_constant(0.0, 1, 1.0, eta).unwrap(), f64::ln(eta)) < 1e-15);
    }
    let got = iga_norm_constant(1.5, 2, 1.0, e01).unwrap();
    assert!(rel(got, k_oracle(1.5, 2, 1.0, e01)) < 1e-10);
    // coefficients of the small-η expansion vanish in alternate orders here
    let got = iga_norm_constant(0.5, 2, 1.0, 1.5).unwrap();
    assert!(rel(got, 0.0730985709803062422) < 1e-13, "{got}");
    assert!(iga_norm_constant(2.0, 2, 1.0, 1.5).is_err());
    assert!(iga_norm_constant(0.5, 1, 1.0, 1.0).is_err());
}

#[test]
fn k_against_quadrature_grid() {
    for &beta in &[-1.0, -0.3, 0.0, 0.5, 1.0, 1.5, 1.99] {
        for gamma in 1..=4u32 {
            for &p in &[0.4, 1.0, 1.5, 3.0] {
                if p * gamma as f64 <= beta {
                    continue;
                }
                for &eta in &[1.0 + 1e-6, 1.001, 1.105, 2.0, 50.0, 1e4] {
                    let a = iga_norm_constant(beta, gamma, p, eta).unwrap();
                    let b = k_oracle(beta, gamma, p, eta);
                    assert!(rel(a, b) < 1e-10, "beta={beta} gamma={gamma} p={p} eta={eta}: {a} vs {b}");
                }
            }
        }
    }
}

#[test]
fn k_asymptotes() {
    for &(beta, gamma, p) in &[(0.5, 1, 1.0), (1.5, 2, 1.0), (-0.5, 2, 2.0), (0.0, 1, 1.0), (1.0, 3, 0.5)] {
        let eta = 1.0 + 1e-4;
        let r = iga_norm_constant(beta, gamma, p, eta).unwrap() / iga_k_asymptote_near_one(beta, gamma, p, eta);
        assert!((0.99..=1.01).contains(&r), "near one {beta} {gamma} {p}: {r}");
    }
    // the β < 0 limit is approached at rate η^{β/p}, so β/p = −1/2 leaves 1e-4 at η = 1e8
    for &(beta, gamma, p) in &[(0.5, 1, 1.0), (1.5, 2, 1.0), (0.0, 1, 1.0), (0.0, 1, 2.0), (-0.5, 2, 1.0), (-1.0, 1, 1.0)] {
        let eta = 1e8;
        let r = iga_norm_constant(beta, gamma, p, eta).unwrap() / iga_k_asymptote_large(beta, gamma, p, eta);
        assert!((0.99..=1.01).contains(&r), "large {beta} {gamma} {p}: {r}");
    }
}

#[test]
fn iga_pdf_normalized_and_enveloped() {
    let mut rng = RandomSource::new(21);
    for &(beta, gamma, p, eta) in &[(0.5, 1, 1.0, 1.105), (1.5, 2, 1.0, 1.105), (-0.5, 2, 2.0, 7.39), (0.0, 1, 1.0, 1.01)] {
        let ip = IgaParams::new(beta, gamma, p, eta).unwrap();
        let o = IgaOracle::new(beta, gamma, p, eta);
        let tab = o.cdf_table();
        assert!((tab.total() - 1.0).abs() < 1e-8, "oracle mass {}", tab.total());
        let mass = {
            let mut grid = log_grid(1e-9, 80f64.powf(1.0 / p), 100);
            grid.remove(0);
            let below = tab.eval(1e-9);
            below + grid.windows(2).map(|w| integrate(|u| iga_pdf(&ip, u), w[0], w[1], 1e-14)).sum::<f64>()
        };
        assert!((mass - 1.0).abs() < 1e-8, "mass {mass}");
        let shape = gamma as f64 * p - beta;
        for _ in 0..10_000 {
            let u = (-12.0 + 15.0 * rng.uniform()).exp();
            let g1 = gen_gamma_pdf(shape, p, 1.0, u);
            assert!(iga_pdf(&ip, u) <= ip.v1 * g1 * (1.0 + 1e-12), "u={u}");
            let y = -rng.uniform().ln() * 20.0;
            let phi = ip.phi1(y);
            assert!((0.0..=1.0).contains(&phi));
        }
        assert!(ip.v1 >= 1.0);
    }
    // γ = 1, u → 0: f(u) ≈ (η−1) u^p u^{−1−β}/K
    let ip = IgaParams::new(0.7, 1, 1.5, 1.3).unwrap();
    let u: f64 = 1e-4;
    let approx = 0.3 * u.powf(1.5) * u.powf(-1.7) / ip.k_const;
    assert!(rel(iga_pdf(&ip, u), approx) < 1e-5);
}

#[test]
fn iga_moments() {
    let e01 = 0.1f64.exp();
    let ip = IgaParams::new(1.0, 2, 1.0, e01).unwrap();
    assert_eq!(iga_moment(&ip, 0.0).unwrap(), 1.0);
    let want = k_oracle(0.0, 2, 1.0, e01) / k_oracle(1.0, 2, 1.0, e01);
    let m1 = iga_moment(&ip, 1.0).unwrap();
    assert!(rel(m1, want) < 1e-10);
    assert!(iga_moment(&ip, -1.0).is_err());
    let xs = draws(1_000_000, 22, |r| sample_iga(&ip, r).unwrap());
    let (m, se) = mean_se(&xs);
    assert!((m - m1).abs() < 3.0 * se, "{m} vs {m1} (se {se})");
}

#[test]
fn iga_acceptance_rate() {
    for &(beta, gamma, p, eta) in &[(1.5, 2, 1.0, 1.105), (0.3, 1, 2.0, 3.0)] {
        let ip = IgaParams::new(beta, gamma, p, eta).unwrap();
        let mut rng = RandomSource::new(23);
        let n = 1_000_000u64;
        let total: u64 = (0..n).map(|_| sample_iga_counted(&ip, &mut rng).unwrap().1).sum();
        let acc = n as f64 / total as f64;
        let a = 1.0 / ip.v1;
        let se = (a * a * (1.0 - a) / n as f64).sqrt();
        assert!((acc - a).abs() < 3.0 * se, "measured {acc} vs {a} (se {se})");
    }
    let ip = IgaParams::new(1.5, 2, 1.0, 1.01).unwrap();
    let mut rng = RandomSource::new(24);
    let n = 100_000u64;
    let total: u64 = (0..n).map(|_| sample_iga_counted(&ip, &mut rng).unwrap().1).sum();
    assert!(n as f64 / total as f64 > 0.99);
}

#[test]
fn iga_ks_small_grid() {
    for &(beta, gamma, p, eta) in &[(1.5, 2, 1.0, 1.105), (-0.5, 1, 2.0, 7.389), (0.0, 1, 1.0, 1.6487)] {
        let ip = IgaParams::new(beta, gamma, p, eta).unwrap();
        let tab = IgaOracle::new(beta, gamma, p, eta).cdf_table();
        let xs = draws(100_000, 25, |r| sample_iga(&ip, r).unwrap());
        let (ok, d, c) = ks_passes(&xs, |x| tab.eval(x));
        assert!(ok, "{beta} {gamma} {p} {eta}: D={d} crit={c}");
    }
}

#[test]
fn iga_mixture_route() {
    let e = std::f64::consts::E;
    for &(beta, gamma, p, eta) in &[(1.5, 2, 1.0, e.powi(20)), (0.5, 3, 2.0, e.powi(8)), (0.0, 2, 0.5, e.powi(5)), (-0.5, 2, 1.0, e * e)] {
        let ip = IgaParams::new(beta, gamma, p, eta).unwrap();
        let tab = IgaOracle::new(beta, gamma, p, eta).cdf_table();
        let mut rng = RandomSource::new(26);
        let n = 100_000;
        let mut total = 0u64;
        let xs: Vec<f64> = (0..n)
            .map(|_| {
                let (x, k) = sample_iga_mixture_counted(&ip, &mut rng).unwrap();
                total += k;
                x
            })
            .collect();
        let (ok, d, c) = ks_passes(&xs, |x| tab.eval(x));
        assert!(ok, "{beta} {gamma} {p} {eta}: D={d} crit={c}");
        let acc = n as f64 / total as f64;
        let a = ip.mix_accept;
        let se = (a * a * (1.0 - a) / n as f64).sqrt().max(1e-12);
        assert!((acc - a).abs() < 3.0 * se, "acceptance {acc} vs {a} (se {se})");
    }
    // at large η the mixture route is the one used
    let ip = IgaParams::new(1.5, 2, 1.0, e.powi(20)).unwrap();
    assert!(ip.mix_accept > 0.99 && 1.0 / ip.v1 < 1e-4);
    let mut rng = RandomSource::new(27);
    assert!((0..1000).all(|_| sample_iga_fast_counted(&ip, &mut rng).unwrap().1 <= 10));
}

fn ll_cdf_ref(a: f64, p: f64, u: f64) -> f64 {
    // ∫ of α(1−α/p)(u^{p−α−1} 1{u≤1} + u^{−1−α} 1{u>1})
    if u <= 1.0 {
        a / p * u.powf(p - a)
    } else {
        1.0 - (1.0 - a / p) * u.powf(-a)
    }
}

#[test]
fn ll_density() {
    let ll = LlParams::new(1.5, 3.0).unwrap();
    let c = 1.5 * 0.5;
    assert!(rel(ll_pdf(&ll, 1.0), c) < 1e-15);
    assert!(rel(ll_pdf(&ll, 1.0 - 1e-12), c) < 1e-10);
    assert!(rel(ll_pdf(&ll, 1.0 + 1e-12), c) < 1e-10);
    assert!((ll_pdf(&ll, 2.0) - 0.13258).abs() < 1e-5);
    let mass = integrate(|u| ll_pdf(&ll, u), 0.0, 1.0, 1e-14) + integrate_to_inf(|u| ll_pdf(&ll, u), 1.0, 1.0, 1e-14);
    assert!((mass - 1.0).abs() < 1e-10, "{mass}");
    assert!(LlParams::new(2.0, 1.0).is_err());
    for &u in &[0.1, 0.9, 1.0, 3.0, 40.0] {
        assert!((ll_cdf(&ll, u) - ll_cdf_ref(1.5, 3.0, u)).abs() < 1e-14);
    }
}

#[test]
fn ll_sampling() {
    let ll = LlParams::new(0.8, 2.4).unwrap();
    assert!((ll_from_uniform(&ll, 0.8 / 2.4) - 1.0).abs() < 1e-14);
    let a = draws(100_000, 31, |r| sample_ll(&ll, r));
    let b = draws(100_000, 32, |r| sample_ll_two_uniform(&ll, r));
    let (ok, d, c) = ks2_passes(&a, &b);
    assert!(ok, "two-sample D={d} crit={c}");
    let (ok, d, c) = ks_passes(&a, |u| ll_cdf_ref(0.8, 2.4, u));
    assert!(ok, "D={d} crit={c}");
}

#[test]
fn deterministic_streams() {
    let ip = IgaParams::new(0.5, 1, 1.0, 2.0).unwrap();
    let a = draws(1000, 99, |r| sample_iga(&ip, r).unwrap());
    let b = draws(1000, 99, |r| sample_iga(&ip, r).unwrap());
    assert_eq!(a, b);
    let c = draws(1000, 100, |r| sample_iga(&ip, r).unwrap());
    assert_ne!(a, c);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn k_matches_beta_integral(beta in -1.5f64..1.99, gamma in 1u32..=4, p in 0.3f64..3.0, leta in -7.0f64..7.0) {
        prop_assume!(p * gamma as f64 > beta + 0.05);
        let eta = 1.0 + leta.exp();
        let a = iga_norm_constant(beta, gamma, p, eta).unwrap();
        let b = k_oracle(beta, gamma, p, eta);
        prop_assert!(rel(a, b) < 1e-10, "{} vs {}", a, b);
    }

    #[test]
    fn phi1_is_a_probability(beta in -1.0f64..1.9, gamma in 1u32..=3, p in 0.5f64..2.0, eta in 1.0001f64..50.0, y in 0.0f64..200.0) {
        prop_assume!(p * gamma as f64 > beta + 0.05);
        let ip = IgaParams::new(beta, gamma, p, eta).unwrap();
        let v = ip.phi1(y);
        prop_assert!((0.0..=1.0).contains(&v));
    }
}
