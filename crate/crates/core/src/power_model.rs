//! The power-tempered family PT_α(ℓ, c) with p = 1: symmetric Rosiński
//! density ½c(α+ℓ)(α+ℓ+1)(1+|x|)^{−2−α−ℓ} of total mass c(α+ℓ).

use crate::base_dists::RandomSource;
use crate::error::{domain, Result};
use crate::special_fn::gamma;
use crate::ts_core::{DensityPart, RosinskiMeasure};
use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PtParams {
    pub alpha: f64,
    pub ell: f64,
    pub c: f64,
}

impl PtParams {
    pub fn new(alpha: f64, ell: f64, c: f64) -> Result<Self> {
        if !(0.0..2.0).contains(&alpha) {
            return domain(format!("PT needs alpha in [0, 2), got {alpha}"));
        }
        if !(ell > 0.0 && ell.is_finite()) {
            return domain(format!("PT needs ell > 0, got {ell}"));
        }
        if !(c > 0.0 && c.is_finite()) {
            return domain(format!("PT needs c > 0, got {c}"));
        }
        Ok(Self { alpha, ell, c })
    }

    /// Tail exponent 1 + α + ℓ of the normalized measure.
    fn k(&self) -> f64 {
        1.0 + self.alpha + self.ell
    }

    /// The Rosiński measure as a [`RosinskiMeasure`].
    pub fn measure(&self) -> RosinskiMeasure {
        RosinskiMeasure::from_density(Arc::new(*self))
    }
}

/// R(dx)/dx.
pub fn pt_rosinski_density(params: &PtParams, x: f64) -> f64 {
    let a = params.alpha + params.ell;
    0.5 * params.c * a * (a + 1.0) * (1.0 + x.abs()).powf(-2.0 - a)
}

/// sign(u)(|u|^{−1/(1+α+ℓ)} − 1) for u in [−1, 1] \ {0}.
pub fn pt_r1_from_uniform(params: &PtParams, u: f64) -> f64 {
    u.signum() * (u.abs().powf(-1.0 / params.k()) - 1.0)
}

/// One draw from R¹, U uniform on (−1, 1).
pub fn pt_sample_r1(params: &PtParams, rng: &mut RandomSource) -> f64 {
    pt_r1_from_uniform(params, rng.uniform_sym())
}

impl DensityPart for PtParams {
    fn pdf(&self, x: f64) -> f64 {
        pt_rosinski_density(self, x)
    }
    fn total_mass(&self) -> f64 {
        self.c * (self.alpha + self.ell)
    }
    fn mean(&self) -> Option<f64> {
        Some(0.0)
    }
    fn abs_moment(&self, a: f64) -> Option<f64> {
        // c(α+ℓ)(α+ℓ+1) B(a+1, 1+α+ℓ−a)
        let k = self.k();
        if a >= k {
            return Some(f64::INFINITY);
        }
        let m = self.alpha + self.ell;
        Some(self.c * m * (m + 1.0) * gamma(a + 1.0) * gamma(k - a) / gamma(k + 1.0))
    }
    fn sample_normalized(&self, rng: &mut RandomSource) -> Option<f64> {
        Some(pt_sample_r1(self, rng))
    }
    fn is_symmetric(&self) -> bool {
        true
    }
    fn scale_hint(&self) -> f64 {
        1.0 / (self.alpha + self.ell)
    }
}

/// Mean of the Poisson count in the transition of the PT-driven OU process
/// over a step t, in closed form.
pub fn pt_poisson_mean(params: &PtParams, lambda: f64, t: f64) -> Result<f64> {
    if !(lambda > 0.0 && t > 0.0) {
        return domain("lambda and t must be positive");
    }
    let PtParams { alpha, ell, c } = *params;
    let lt = lambda * t;
    let m = alpha + ell;
    Ok(if alpha == 0.0 {
        c * ell * lt
    } else if alpha < 1.0 {
        c * m * gamma(1.0 - alpha) * (-(-alpha * lt).exp_m1()) / alpha
    } else if alpha == 1.0 {
        c * m * (-lt).exp() * (lt.exp_m1() - lt)
    } else {
        let bracket = (-alpha * lt).exp_m1() - alpha * (-lt).exp_m1();
        c * m * gamma(2.0 - alpha) / (alpha * (alpha - 1.0)) * bracket
    })
}

/// The TS components of the transition over a step t: X₀ ~ PT_α(ℓ, (1−e^{−αλt})c)
/// and, for α ≥ 1, X₁ ~ PT_{α−1}(ℓ+1, (1−e^{−λt})c). Each entry is (index, parameters).
pub fn pt_transition_components(params: &PtParams, lambda: f64, t: f64) -> Result<Vec<(f64, PtParams)>> {
    if !(lambda > 0.0 && t > 0.0) {
        return domain("lambda and t must be positive");
    }
    let PtParams { alpha, ell, c } = *params;
    let mut out = Vec::new();
    if alpha > 0.0 {
        out.push((alpha, PtParams { alpha, ell, c: -(-alpha * lambda * t).exp_m1() * c }));
    }
    if alpha >= 1.0 {
        out.push((alpha - 1.0, PtParams { alpha: alpha - 1.0, ell: ell + 1.0, c: -(-lambda * t).exp_m1() * c }));
    }
    Ok(out)
}

/// E|V| for V ~ R¹.
pub fn pt_expected_abs_r1(params: &PtParams) -> f64 {
    1.0 / (params.alpha + params.ell)
}
