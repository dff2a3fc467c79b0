use num_complex::Complex64;
use tsou::quad::{adaptive, tanh_sinh, Tol};
use tsou::ts_core::{inner_integral, inner_integral_numeric, inner_integral_p1, psi};

// brute-force I_α(w) on the real axis: [0,1] with tanh-sinh, [1,40] split finely
fn brute(alpha: f64, p: f64, w: f64) -> Complex64 {
    let f = |u: f64| psi(alpha, Complex64::new(w * u, 0.0)) * (u.powf(-1.0 - alpha) * (-u.powf(p)).exp());
    let head = tanh_sinh(|u, _| if u < 1e-100 { Complex64::new(0.0, 0.0) } else { f(u) }, 0.0, 1.0, 1e-13).unwrap();
    let top = 40f64.powf(1.0 / p).max(2.0);
    let n = ((top - 1.0) * w.abs()).ceil().max(8.0) as usize;
    let mut tail = Complex64::new(0.0, 0.0);
    for k in 0..n {
        let a = 1.0 + (top - 1.0) * k as f64 / n as f64;
        let b = 1.0 + (top - 1.0) * (k + 1) as f64 / n as f64;
        tail += adaptive(f, a, b, Tol::new(1e-17, 1e-13)).unwrap().0;
    }
    head + tail
}

#[test]
fn numeric_route_matches_closed_form_at_p1() {
    for &alpha in &[0.0, 0.3, 0.9, 1.0, 1.2, 1.5, 1.95] {
        for &w in &[-250.0, -3.0, -0.2, 1e-4, 0.05, 0.7, 1.0, 4.0, 60.0, 3000.0] {
            let a = inner_integral_p1(alpha, w);
            let b = inner_integral_numeric(alpha, 1.0, w).unwrap();
            assert!((a - b).norm() <= 1e-10 * a.norm().max(1e-12), "alpha={alpha} w={w}: {a} vs {b}");
        }
    }
}

#[test]
fn numeric_route_matches_brute_force() {
    for &p in &[0.6, 2.0, 3.0] {
        for &alpha in &[0.0, 0.5, 1.0, 1.5] {
            for &w in &[-2.0, 0.3, 1.0, 7.0] {
                let a = inner_integral_numeric(alpha, p, w).unwrap();
                let b = brute(alpha, p, w);
                assert!((a - b).norm() <= 1e-9 * a.norm(), "p={p} alpha={alpha} w={w}: {a} vs {b}");
            }
        }
    }
}

#[test]
fn interpolated_kernel_matches_numeric() {
    for &p in &[0.5, 2.0, 4.0] {
        for &alpha in &[0.25, 1.0, 1.7] {
            for &w in &[-1e-4, 2e-3, -0.123, 0.77, 5.5, -91.0, 1234.5, 7e6] {
                let a = inner_integral(alpha, p, w).unwrap();
                let b = inner_integral_numeric(alpha, p, w).unwrap();
                assert!((a - b).norm() <= 1e-10 * b.norm(), "p={p} alpha={alpha} w={w}: {a} vs {b}");
            }
        }
    }
}
