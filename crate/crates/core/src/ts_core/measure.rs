//! Rosiński measures (finite atoms plus an optional 1-d density) and
//! spectral pairs (σ, Q_ξ) with discrete Q_ξ.

use crate::base_dists::RandomSource;
use crate::error::{domain, Error, Result};
use crate::quad::{adaptive, semi_infinite, Scalar, Tol};
use std::fmt::Debug;
use std::sync::Arc;

/// Continuous part of a one-dimensional Rosiński measure.
pub trait DensityPart: Send + Sync + Debug {
    /// R(dx)/dx.
    fn pdf(&self, x: f64) -> f64;
    fn total_mass(&self) -> f64;
    /// ∫ x R(dx) when known in closed form.
    fn mean(&self) -> Option<f64> {
        None
    }
    /// ∫ |x|^a R(dx) when known in closed form (may be +inf).
    fn abs_moment(&self, _a: f64) -> Option<f64> {
        None
    }
    /// One draw from R/R(ℝ).
    fn sample_normalized(&self, _rng: &mut RandomSource) -> Option<f64> {
        None
    }
    fn is_symmetric(&self) -> bool {
        false
    }
    /// Typical |x| under R, used to scale quadrature maps.
    fn scale_hint(&self) -> f64 {
        1.0
    }
    /// Support endpoints (lo, hi); may be infinite.
    fn support(&self) -> (f64, f64) {
        (f64::NEG_INFINITY, f64::INFINITY)
    }
}

/// A density given by a closure on an interval; mass is computed numerically.
#[derive(Clone)]
pub struct FnDensity {
    f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    lo: f64,
    hi: f64,
    mass: f64,
    scale: f64,
}

impl Debug for FnDensity {
    fn fmt(&self, fm: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(fm, "FnDensity([{}, {}], mass={})", self.lo, self.hi, self.mass)
    }
}

impl FnDensity {
    /// `f` must be nonnegative on [lo, hi] and vanish elsewhere.
    pub fn new(f: impl Fn(f64) -> f64 + Send + Sync + 'static, lo: f64, hi: f64, scale: f64) -> Result<Self> {
        if !(lo < hi) {
            return domain("density support must have lo < hi");
        }
        let f: Arc<dyn Fn(f64) -> f64 + Send + Sync> = Arc::new(f);
        let mass = integrate_on(|x| f(x), lo, hi, scale, Tol::new(1e-14, 1e-10))?;
        Ok(Self { f, lo, hi, mass, scale })
    }
}

impl DensityPart for FnDensity {
    fn pdf(&self, x: f64) -> f64 {
        if x < self.lo || x > self.hi {
            0.0
        } else {
            (self.f)(x)
        }
    }
    fn total_mass(&self) -> f64 {
        self.mass
    }
    fn scale_hint(&self) -> f64 {
        self.scale
    }
    fn support(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }
}

/// ∫_lo^hi g over a possibly infinite interval, split at 0 when it is interior.
pub(crate) fn integrate_on<V: Scalar, G: FnMut(f64) -> V>(mut g: G, lo: f64, hi: f64, scale: f64, tol: Tol) -> Result<V> {
    let mut total = V::default();
    let mut pieces: Vec<(f64, f64)> = Vec::new();
    if lo < 0.0 && hi > 0.0 {
        pieces.push((lo, 0.0));
        pieces.push((0.0, hi));
    } else {
        pieces.push((lo, hi));
    }
    for (a, b) in pieces {
        let v = match (a.is_finite(), b.is_finite()) {
            (true, true) => adaptive(&mut g, a, b, tol)?.0,
            (true, false) => semi_infinite(&mut g, a, scale, tol)?.0,
            (false, true) => semi_infinite(|x| g(-x), -b, scale, tol)?.0,
            (false, false) => unreachable!("split at zero"),
        };
        total = total + v;
    }
    Ok(total)
}

/// A weighted point of a Rosiński measure.
#[derive(Debug, Clone, PartialEq)]
pub struct Atom {
    pub x: Vec<f64>,
    pub w: f64,
}

/// The Rosiński measure R.
#[derive(Debug, Clone)]
pub struct RosinskiMeasure {
    dim: usize,
    atoms: Vec<Atom>,
    density: Option<(Arc<dyn DensityPart>, f64)>,
}

impl RosinskiMeasure {
    /// Finite-atom measure. Weights must be positive; locations share one dimension.
    pub fn from_atoms(dim: usize, atoms: Vec<Atom>) -> Result<Self> {
        if dim == 0 {
            return domain("dimension must be >= 1");
        }
        for a in &atoms {
            if a.x.len() != dim {
                return domain(format!("atom {:?} does not have dimension {dim}", a.x));
            }
            if !(a.w > 0.0 && a.w.is_finite()) {
                return domain(format!("atom weight must be positive and finite, got {}", a.w));
            }
            if a.x.iter().any(|v| !v.is_finite()) {
                return domain("atom location must be finite");
            }
        }
        Ok(Self { dim, atoms, density: None })
    }

    /// One-dimensional atoms from (location, weight) pairs.
    pub fn from_atoms_1d(pairs: &[(f64, f64)]) -> Result<Self> {
        Self::from_atoms(1, pairs.iter().map(|&(x, w)| Atom { x: vec![x], w }).collect())
    }

    /// Purely continuous one-dimensional measure.
    pub fn from_density(d: Arc<dyn DensityPart>) -> Self {
        Self { dim: 1, atoms: Vec::new(), density: Some((d, 1.0)) }
    }

    /// Adds a continuous part (d = 1 only).
    pub fn with_density(mut self, d: Arc<dyn DensityPart>) -> Result<Self> {
        if self.dim != 1 {
            return Err(Error::Unsupported("continuous parts are one-dimensional only".into()));
        }
        self.density = Some((d, 1.0));
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    /// The continuous part and the factor multiplying it.
    pub fn density(&self) -> Option<(&Arc<dyn DensityPart>, f64)> {
        self.density.as_ref().map(|(d, s)| (d, *s))
    }

    /// s·R.
    pub fn scaled(&self, s: f64) -> Self {
        Self {
            dim: self.dim,
            atoms: self.atoms.iter().map(|a| Atom { x: a.x.clone(), w: a.w * s }).collect(),
            density: self.density.as_ref().map(|(d, f)| (d.clone(), f * s)),
        }
    }

    /// Density of the continuous part including its factor.
    pub fn density_at(&self, x: f64) -> f64 {
        match &self.density {
            Some((d, f)) => f * d.pdf(x),
            None => 0.0,
        }
    }

    /// R(ℝᵈ).
    pub fn total_mass(&self) -> f64 {
        let a: f64 = self.atoms.iter().map(|a| a.w).sum();
        let d = self.density.as_ref().map_or(0.0, |(d, f)| f * d.total_mass());
        a + d
    }

    /// ∫ x R(dx).
    pub fn mean(&self) -> Result<Vec<f64>> {
        let mut m = vec![0.0; self.dim];
        for a in &self.atoms {
            for (mi, xi) in m.iter_mut().zip(&a.x) {
                *mi += a.w * xi;
            }
        }
        if let Some((d, f)) = &self.density {
            let v = if d.is_symmetric() {
                0.0
            } else if let Some(v) = d.mean() {
                v
            } else {
                let g = |x: f64| x * d.pdf(x);
                let (lo, hi) = d.support();
                integrate_on(g, lo, hi, d.scale_hint(), Tol::new(1e-12, 1e-10))?
            };
            m[0] += f * v;
        }
        Ok(m)
    }

    /// ∫ |x|^a R(dx); +inf when divergent.
    pub fn abs_moment(&self, a: f64) -> Result<f64> {
        let mut s = 0.0;
        for at in &self.atoms {
            s += at.w * norm(&at.x).powf(a);
        }
        if let Some((d, f)) = &self.density {
            let v = match d.abs_moment(a) {
                Some(v) => v,
                None => {
                    let g = |x: f64| x.abs().powf(a) * d.pdf(x);
                    let (lo, hi) = d.support();
                    integrate_on(g, lo, hi, d.scale_hint(), Tol::new(1e-12, 1e-10))?
                }
            };
            s += f * v;
        }
        Ok(s)
    }

    /// Whether R is invariant under x ↦ −x.
    pub fn is_symmetric(&self) -> bool {
        if let Some((d, _)) = &self.density {
            if !d.is_symmetric() {
                return false;
            }
        }
        let mut used = vec![false; self.atoms.len()];
        for (i, a) in self.atoms.iter().enumerate() {
            if used[i] {
                continue;
            }
            let neg: Vec<f64> = a.x.iter().map(|v| -v).collect();
            let found = self.atoms.iter().enumerate().position(|(j, b)| {
                !used[j] && j != i && b.w == a.w && b.x == neg
            });
            match found {
                Some(j) => {
                    used[i] = true;
                    used[j] = true;
                }
                None => return false,
            }
        }
        true
    }

    /// Whether draws from R/R(ℝᵈ) are available.
    pub fn has_r1_sampler(&self) -> bool {
        match &self.density {
            Some((d, f)) if *f > 0.0 => {
                let mut probe = RandomSource::new(0);
                d.sample_normalized(&mut probe).is_some()
            }
            _ => true,
        }
    }

    /// One draw from R¹ = R/R(ℝᵈ).
    pub fn sample_r1(&self, rng: &mut RandomSource) -> Result<Vec<f64>> {
        let total = self.total_mass();
        if !(total > 0.0 && total.is_finite()) {
            return domain(format!("R1 needs finite positive mass, got {total}"));
        }
        let dmass = self.density.as_ref().map_or(0.0, |(d, f)| f * d.total_mass());
        let u = rng.uniform() * total;
        if u < dmass {
            let (d, _) = self.density.as_ref().expect("density present");
            return d
                .sample_normalized(rng)
                .map(|v| vec![v])
                .ok_or_else(|| Error::Unsupported("continuous part has no R1 sampler".into()));
        }
        let mut acc = dmass;
        for a in &self.atoms {
            acc += a.w;
            if u < acc {
                return Ok(a.x.clone());
            }
        }
        Ok(self.atoms.last().map(|a| a.x.clone()).unwrap_or_else(|| vec![0.0; self.dim]))
    }
}

pub(crate) fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// One point mass of a discrete Q_ξ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QAtom {
    pub s: f64,
    pub w: f64,
}

/// A direction ξ with σ-weight and discrete Q_ξ.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralAtom {
    pub xi: Vec<f64>,
    pub sigma_w: f64,
    pub q: Vec<QAtom>,
}

impl SpectralAtom {
    /// q(ξ, u) = Σ w e^{−su}.
    pub fn laplace(&self, u: f64) -> f64 {
        self.q.iter().map(|a| a.w * (-a.s * u).exp()).sum()
    }

    /// ζ = inf supp Q_ξ.
    pub fn zeta(&self) -> f64 {
        self.q.iter().map(|a| a.s).fold(f64::INFINITY, f64::min)
    }
}

/// The spectral pair (σ, Q_ξ) with finitely many directions.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralModel {
    pub dim: usize,
    pub atoms: Vec<SpectralAtom>,
}

impl SpectralModel {
    pub fn new(dim: usize, atoms: Vec<SpectralAtom>) -> Result<Self> {
        if dim == 0 || atoms.is_empty() {
            return domain("spectral model needs d >= 1 and at least one direction");
        }
        for a in &atoms {
            if a.xi.len() != dim {
                return domain("direction dimension mismatch");
            }
            if (norm(&a.xi) - 1.0).abs() > 1e-12 {
                return domain(format!("direction {:?} is not a unit vector", a.xi));
            }
            if !(a.sigma_w > 0.0 && a.sigma_w.is_finite()) {
                return domain("sigma weight must be positive");
            }
            if a.q.is_empty() {
                return domain("Q_xi must have at least one atom");
            }
            let mut tot = 0.0;
            for q in &a.q {
                if !(q.s > 0.0 && q.s.is_finite() && q.w > 0.0) {
                    return domain("Q_xi atoms need s > 0 and w > 0");
                }
                tot += q.w;
            }
            if (tot - 1.0).abs() > 1e-12 {
                return domain(format!("Q_xi weights must sum to 1, got {tot}"));
            }
        }
        Ok(Self { dim, atoms })
    }
}

/// R from (σ, Q_ξ): the Q-point sξ with mass σw goes to ξ s^{−1/p} with
/// weight σ w s^{α/p}.
pub fn spectral_to_rosinski(model: &SpectralModel, alpha: f64, p: f64) -> Result<RosinskiMeasure> {
    if !(p > 0.0) {
        return domain("p must be positive");
    }
    let mut atoms = Vec::new();
    for a in &model.atoms {
        for q in &a.q {
            let r = q.s.powf(-1.0 / p);
            atoms.push(Atom {
                x: a.xi.iter().map(|v| v * r).collect(),
                w: a.sigma_w * q.w * q.s.powf(alpha / p),
            });
        }
    }
    RosinskiMeasure::from_atoms(model.dim, atoms)
}

/// (σ, Q_ξ) from a finite-atom R: x goes to direction x/|x| and s = |x|^{−p}
/// with Q-mass w|x|^α. Atoms sharing a direction are grouped.
pub fn rosinski_to_spectral(measure: &RosinskiMeasure, alpha: f64, p: f64) -> Result<SpectralModel> {
    if measure.density().is_some() {
        return Err(Error::Unsupported("spectral form needs a finite-atom measure".into()));
    }
    let mut dirs: Vec<(Vec<f64>, Vec<(f64, f64)>)> = Vec::new();
    for a in measure.atoms() {
        let r = norm(&a.x);
        if r == 0.0 {
            return domain("atom at the origin");
        }
        let xi: Vec<f64> = a.x.iter().map(|v| v / r).collect();
        let mass = a.w * r.powf(alpha);
        let s = r.powf(-p);
        match dirs.iter_mut().find(|(d, _)| d.iter().zip(&xi).all(|(u, v)| (u - v).abs() < 1e-12)) {
            Some((_, list)) => list.push((s, mass)),
            None => dirs.push((xi, vec![(s, mass)])),
        }
    }
    let atoms = dirs
        .into_iter()
        .map(|(xi, list)| {
            let sigma: f64 = list.iter().map(|(_, m)| m).sum();
            SpectralAtom {
                xi,
                sigma_w: sigma,
                q: list.into_iter().map(|(s, m)| QAtom { s, w: m / sigma }).collect(),
            }
        })
        .collect();
    Ok(SpectralModel { dim: measure.dim(), atoms })
}
