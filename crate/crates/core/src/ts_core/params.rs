//! Parameters of the OU process and its stationary law.

use super::cf::{check_alpha_p, TsLaw};
use super::measure::{norm, spectral_to_rosinski, RosinskiMeasure, SpectralModel};
use super::validate::validate_rosinski;
use crate::error::{domain, Error, Result};
use num_complex::Complex64;

/// How the Rosiński measure is specified.
#[derive(Debug, Clone)]
pub enum Model {
    Rosinski(RosinskiMeasure),
    Spectral(SpectralModel),
}

/// (p, α, λ, b, R): the OU process dY = −λY dt + dZ whose stationary law
/// is TS^p_α(R, b).
#[derive(Debug, Clone)]
pub struct TsouParams {
    pub p: f64,
    pub alpha: f64,
    pub lambda: f64,
    pub b: Vec<f64>,
    pub model: Model,
    measure: RosinskiMeasure,
}

impl TsouParams {
    pub fn new(p: f64, alpha: f64, lambda: f64, b: Vec<f64>, model: Model) -> Result<Self> {
        check_alpha_p(alpha, p)?;
        if !(lambda > 0.0 && lambda.is_finite()) {
            return domain(format!("lambda must be positive, got {lambda}"));
        }
        let measure = match &model {
            Model::Rosinski(m) => m.clone(),
            Model::Spectral(s) => spectral_to_rosinski(s, alpha, p)?,
        };
        if b.len() != measure.dim() {
            return domain("drift dimension differs from the measure");
        }
        let report = validate_rosinski(&measure, alpha, p);
        if !report.is_valid() {
            let names: Vec<String> = report.failures().iter().map(|c| c.name.clone()).collect();
            return domain(format!("Rosiński measure fails: {}", names.join(", ")));
        }
        Ok(Self { p, alpha, lambda, b, model, measure })
    }

    pub fn dim(&self) -> usize {
        self.measure.dim()
    }

    /// R in Rosiński form (converted from the spectral pair when needed).
    pub fn rosinski(&self) -> &RosinskiMeasure {
        &self.measure
    }

    pub fn spectral(&self) -> Option<&SpectralModel> {
        match &self.model {
            Model::Spectral(s) => Some(s),
            Model::Rosinski(_) => None,
        }
    }

    /// TS^p_α(R, b).
    pub fn stationary_law(&self) -> Result<TsLaw> {
        TsLaw::new(self.alpha, self.p, self.measure.clone(), self.b.clone())
    }
}

/// Characteristic exponent of the stationary law at z.
pub fn characteristic_exponent(params: &TsouParams, z: &[f64]) -> Result<Complex64> {
    params.stationary_law()?.exponent(z)
}

/// Mass that the background driving Lévy measure puts on {u x : u > a} for
/// the atom x of R with weight w: w a^{−α} e^{−a^p}.
pub fn bdlp_levy_tail(measure: &RosinskiMeasure, alpha: f64, p: f64, atom: usize, a: f64) -> Result<f64> {
    check_alpha_p(alpha, p)?;
    if !(a > 0.0) {
        return domain(format!("tail parameter must be positive, got {a}"));
    }
    let at = measure
        .atoms()
        .get(atom)
        .ok_or_else(|| Error::Domain(format!("no atom with index {atom}")))?;
    if norm(&at.x) == 0.0 {
        return domain("atom at the origin");
    }
    Ok(at.w * (-alpha * a.ln() - a.powf(p)).exp())
}
