//! Integrability conditions a Rosiński measure must meet for TS^p_α to exist.

use super::measure::{norm, RosinskiMeasure};
use crate::quad::{adaptive, Tol};

/// One integrability condition and its outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    /// Numeric value of the integral (+inf when divergent).
    pub value: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub alpha: f64,
    pub p: f64,
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }
}

/// Weight q(r) applied to R on {|x| ≤ 2} and {|x| > 2}.
struct Moment {
    name: &'static str,
    near: fn(f64, f64) -> f64,
    far: fn(f64, f64) -> f64,
}

/// ∫ over a dyadic ladder in s = ln r of g(e^s)e^s; returns +inf when the
/// last blocks stop shrinking.
fn ladder<G: Fn(f64) -> f64>(g: G, outward: bool) -> f64 {
    let edge = std::f64::consts::LN_2;
    let mut blocks = Vec::new();
    let mut edges = vec![edge];
    let mut s = 2.0f64;
    while s <= 256.0 {
        edges.push(if outward { s } else { -s });
        s *= 2.0;
    }
    for w in edges.windows(2) {
        let (a, b) = if outward { (w[0], w[1]) } else { (w[1], w[0]) };
        let f = |s: f64| {
            let r = s.exp();
            let v = g(r) * r;
            if v.is_nan() {
                0.0
            } else {
                v
            }
        };
        let sofar: f64 = blocks.iter().sum();
        let tol = Tol::new(1e-14 * sofar.max(1e-300), 1e-9);
        match adaptive(f, a, b, tol) {
            Ok((v, _)) if v.is_finite() => blocks.push(v),
            _ => return f64::INFINITY,
        }
    }
    let total: f64 = blocks.iter().sum();
    let n = blocks.len();
    let (last, prev) = (blocks[n - 1], blocks[n - 2]);
    if last <= 1e-10 * total.abs() || last == 0.0 {
        return total;
    }
    let r = last / prev;
    if r >= 0.75 {
        return f64::INFINITY;
    }
    total + last * r / (1.0 - r)
}

/// Checks the conditions on R for the given α (and p > 0).
pub fn validate_rosinski(measure: &RosinskiMeasure, alpha: f64, p: f64) -> ValidationReport {
    let mut checks = Vec::new();
    let origin = measure.atoms().iter().any(|a| norm(&a.x) == 0.0);
    checks.push(Check { name: "no mass at the origin".into(), value: if origin { 1.0 } else { 0.0 }, passed: !origin });
    checks.push(Check {
        name: "alpha in [0, 2) and p > 0".into(),
        value: alpha,
        passed: (0.0..2.0).contains(&alpha) && p > 0.0 && p.is_finite(),
    });
    let moments: Vec<Moment> = if alpha == 0.0 {
        vec![
            Moment { name: "mass of {|x| <= 2}", near: |_, _| 1.0, far: |_, _| 0.0 },
            Moment { name: "log moment on {|x| > 2}", near: |_, _| 0.0, far: |r, _| r.ln() },
        ]
    } else if alpha == 1.0 {
        vec![
            Moment { name: "first moment on {|x| <= 2}", near: |r, _| r, far: |_, _| 0.0 },
            Moment { name: "x log x moment on {|x| > 2}", near: |_, _| 0.0, far: |r, _| r * r.ln() },
        ]
    } else {
        vec![Moment { name: "alpha moment", near: |r, a| r.powf(a), far: |r, a| r.powf(a) }]
    };
    for m in &moments {
        let mut v = 0.0;
        for a in measure.atoms() {
            let r = norm(&a.x);
            if r > 0.0 {
                v += a.w * if r <= 2.0 { (m.near)(r, alpha) } else { (m.far)(r, alpha) };
            }
        }
        if let Some((d, f)) = measure.density() {
            let sym = |r: f64| d.pdf(r) + d.pdf(-r);
            let weighted = |r: f64, q: fn(f64, f64) -> f64| {
                let v = sym(r);
                if v == 0.0 {
                    0.0
                } else {
                    v * q(r, alpha)
                }
            };
            let near = ladder(|r| weighted(r, m.near), false);
            let far = ladder(|r| weighted(r, m.far), true);
            v += f * (near + far);
        }
        checks.push(Check { name: m.name.into(), value: v, passed: v.is_finite() });
    }
    let mass = measure.total_mass();
    checks.push(Check { name: "finite positive total mass".into(), value: mass, passed: mass > 0.0 && mass.is_finite() });
    ValidationReport { alpha, p, checks }
}
