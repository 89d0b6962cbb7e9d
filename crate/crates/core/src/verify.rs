//! Verification backends for the exponent.
//!
//! The exact backend evaluates order quotients
//! `ord(grad f(φ(t))) / ord(φ(t))` along monomial curves; every finite
//! quotient is a certified lower bound for `L(f)`. The numeric backend
//! samples the weighted gradient norm `‖grad_w f‖_w` on the spheres
//! `ρ(z) = r` of the weighted control function
//! `ρ(z) = (Σ |zᵢ|^{2/wᵢ})^{1/2}` and reports per-radius extrema.

use std::collections::BTreeSet;

use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

pub use crate::poly::MonomialCurve;

use crate::engine::classify_coordinates;
use crate::poly::{PolyError, Polynomial};
use crate::weights::{is_weighted_homogeneous, WeightSystem};
use crate::{Extended, Rational};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("the polynomial is not weighted homogeneous of type {0}")]
    NotWeightedHomogeneous(WeightSystem),
    #[error("non-finite value at radius {radius} for sample {sample:?}")]
    NonFinite { radius: f64, sample: Vec<Complex64> },
    #[error("radii must be positive and finite")]
    BadRadius,
    #[error("the zero polynomial has no gradient inequality")]
    ZeroPolynomial,
}

/// An exact order quotient along one curve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathQuotient {
    pub curve: MonomialCurve,
    /// `ord(grad f ∘ φ)`; `+∞` when `φ` lies in the critical locus.
    pub numerator: Extended<u64>,
    /// `ord(φ)`.
    pub denominator: u32,
    pub value: Extended<Rational>,
}

/// Caches the gradient of `f` for repeated quotient evaluations.
pub struct PathEvaluator {
    gradient: Vec<Polynomial>,
}

impl PathEvaluator {
    pub fn new(f: &Polynomial) -> Self {
        PathEvaluator { gradient: f.gradient() }
    }

    pub fn quotient(&self, curve: &MonomialCurve) -> Result<PathQuotient, VerifyError> {
        let mut numerator = Extended::Infinity;
        for g in &self.gradient {
            let o = g.order_along(curve)?;
            if o < numerator {
                numerator = o;
            }
        }
        let denominator = curve.order();
        let value = numerator
            .clone()
            .map(|num| Rational::new(num.into(), denominator.into()));
        Ok(PathQuotient {
            curve: curve.clone(),
            numerator,
            denominator,
            value,
        })
    }
}

/// `ord(grad f(φ(t))) / ord(φ(t))` computed exactly.
pub fn path_quotient(f: &Polynomial, curve: &MonomialCurve) -> Result<PathQuotient, VerifyError> {
    PathEvaluator::new(f).quotient(curve)
}

/// Result of [`witness_search`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessSearch {
    /// The largest finite quotient found.
    pub best: PathQuotient,
    pub curves_tried: usize,
    pub seed: u64,
}

/// A random rational `p/q` with `|p| ≤ 10`, `1 ≤ q ≤ 10`.
pub fn random_rational<R: Rng>(rng: &mut R, allow_zero: bool) -> Rational {
    loop {
        let p: i64 = rng.random_range(-10..=10);
        if p == 0 && !allow_zero {
            continue;
        }
        let q: i64 = rng.random_range(1..=10);
        return Rational::new(p.into(), q.into());
    }
}

/// A random monomial curve with exponents in `1..=max_exponent` and small
/// rational coefficients, some of which may vanish.
pub fn random_curve<R: Rng>(rng: &mut R, n: usize, max_exponent: u32) -> MonomialCurve {
    loop {
        let a: Vec<Rational> = (0..n)
            .map(|_| {
                if rng.random_bool(0.2) {
                    Rational::zero()
                } else {
                    random_rational(rng, false)
                }
            })
            .collect();
        let m: Vec<u32> = (0..n).map(|_| rng.random_range(1..=max_exponent)).collect();
        if let Ok(c) = MonomialCurve::new(a, m) {
            return c;
        }
    }
}

/// Maximises the order quotient over the witness families: coordinate
/// axes, weighted orbits `t·a` through the basis points and `budget`
/// random points, and, for weak types, weighted orbits inside the
/// coordinate subspace that survives elimination of `M(f)`.
pub fn witness_search(
    f: &Polynomial,
    ws: &WeightSystem,
    budget: usize,
    seed: u64,
) -> Result<WitnessSearch, VerifyError> {
    if !is_weighted_homogeneous(f, ws) {
        return Err(VerifyError::NotWeightedHomogeneous(ws.clone()));
    }
    search(f, f, &ws.normalized(), budget, seed)
}

/// [`witness_search`] for a germ that is only semi-weighted homogeneous
/// for the weights of `ws`: the candidate families are built from the
/// weighted initial form, and every quotient is still evaluated on `f`.
pub fn witness_search_semi(
    f: &Polynomial,
    ws: &WeightSystem,
    budget: usize,
    seed: u64,
) -> Result<WitnessSearch, VerifyError> {
    let degree = f.weighted_degree(ws).finite().ok_or(VerifyError::ZeroPolynomial)?;
    let h = f.initial_form(ws)?;
    let hw = WeightSystem::new(degree, ws.weights().to_vec()).map_err(|_| VerifyError::ZeroPolynomial)?;
    search(f, &h, &hw.normalized(), budget, seed)
}

fn search(
    f: &Polynomial,
    initial: &Polynomial,
    ws: &WeightSystem,
    budget: usize,
    seed: u64,
) -> Result<WitnessSearch, VerifyError> {
    let n = f.variable_count();
    let weights = ws.weights();
    let eval = PathEvaluator::new(f);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut curves: Vec<MonomialCurve> = (0..n).map(|i| MonomialCurve::axis(n, i)).collect();

    let one = Rational::from_integer(1.into());
    for i in 0..n {
        let mut a = vec![Rational::zero(); n];
        a[i] = one.clone();
        curves.push(MonomialCurve::weighted_orbit(a, weights)?);
    }
    for _ in 0..budget {
        let a = (0..n).map(|_| random_rational(&mut rng, false)).collect();
        curves.push(MonomialCurve::weighted_orbit(a, weights)?);
    }
    if !ws.is_strict() {
        let classification = classify_coordinates(initial, ws);
        let surviving = classification.surviving(n);
        if !surviving.is_empty() {
            for _ in 0..budget {
                let a = (0..n)
                    .map(|i| {
                        if surviving.contains(&i) {
                            random_rational(&mut rng, false)
                        } else {
                            Rational::zero()
                        }
                    })
                    .collect();
                curves.push(MonomialCurve::weighted_orbit(a, weights)?);
            }
        }
    }

    let mut best: Option<PathQuotient> = None;
    for c in &curves {
        let q = eval.quotient(c)?;
        if !q.value.is_finite() {
            continue;
        }
        if best.as_ref().is_none_or(|b| q.value > b.value) {
            best = Some(q);
        }
    }
    let best = match best {
        Some(b) => b,
        // every candidate lies in the critical locus; report the first axis
        None => eval.quotient(&curves[0])?,
    };
    Ok(WitnessSearch {
        best,
        curves_tried: curves.len(),
        seed,
    })
}

/// Coordinate axes along which the whole gradient vanishes identically.
pub fn critical_axes(f: &Polynomial) -> Vec<usize> {
    let eval = PathEvaluator::new(f);
    (0..f.variable_count())
        .filter(|&i| {
            eval.quotient(&MonomialCurve::axis(f.variable_count(), i))
                .map(|q| !q.numerator.is_finite())
                .unwrap_or(false)
        })
        .collect()
}

/// `ρ` and the weighted gradient norm for one weight system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RhoGeometry {
    pub weights: WeightSystem,
}

impl RhoGeometry {
    pub fn new(weights: WeightSystem) -> Self {
        RhoGeometry { weights }
    }

    /// `ρ(z) = (Σ |zᵢ|^{2/wᵢ})^{1/2}`.
    pub fn rho(&self, z: &[Complex64]) -> f64 {
        z.iter()
            .zip(self.weights.weights())
            .map(|(x, &w)| x.norm().powf(2.0 / w as f64))
            .sum::<f64>()
            .sqrt()
    }

    /// The weighted action `s·z = (s^{w₁}z₁, …, s^{wₙ}zₙ)` for real `s > 0`.
    pub fn act(&self, s: f64, z: &[Complex64]) -> Vec<Complex64> {
        z.iter()
            .zip(self.weights.weights())
            .map(|(x, &w)| x * s.powi(w as i32))
            .collect()
    }

    /// Moves a nonzero point onto `S_r` along its orbit.
    pub fn project_to_sphere(&self, r: f64, z: &[Complex64]) -> Vec<Complex64> {
        self.act(r / self.rho(z), z)
    }

    /// `‖grad_w f(z)‖_w = (Σ |ρ^{wᵢ}(z) ∂f/∂zᵢ(z)|²)^{1/2}`.
    pub fn weighted_gradient_norm(&self, gradient: &[FloatPolynomial], z: &[Complex64]) -> f64 {
        let rho = self.rho(z);
        gradient
            .iter()
            .zip(self.weights.weights())
            .map(|(g, &w)| (rho.powi(w as i32) * g.evaluate(z).norm()).powi(2))
            .sum::<f64>()
            .sqrt()
    }
}

/// A polynomial with `f64` coefficients for fast numeric evaluation.
#[derive(Debug, Clone)]
pub struct FloatPolynomial {
    terms: Vec<(f64, Vec<(usize, i32)>)>,
}

impl FloatPolynomial {
    pub fn new(p: &Polynomial) -> Self {
        let terms = p
            .terms()
            .map(|(m, c)| {
                let powers = m
                    .exponents()
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(i, &e)| (i, e as i32))
                    .collect();
                (c.to_f64().unwrap_or(f64::NAN), powers)
            })
            .collect();
        FloatPolynomial { terms }
    }

    pub fn evaluate(&self, z: &[Complex64]) -> Complex64 {
        self.terms
            .iter()
            .map(|(c, powers)| {
                powers
                    .iter()
                    .fold(Complex64::new(*c, 0.0), |acc, &(i, e)| acc * z[i].powi(e))
            })
            .sum()
    }
}

/// Settings shared by the samplers.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplingConfig {
    /// Radii, conventionally decreasing.
    pub radii: Vec<f64>,
    pub samples_per_radius: usize,
    pub seed: u64,
    /// Sample `ℂⁿ` instead of `ℝⁿ`.
    pub complex: bool,
}

impl Default for SamplingConfig {
    fn default() -> Self {
        SamplingConfig {
            radii: vec![1e-1, 1e-2, 1e-3],
            samples_per_radius: 1000,
            seed: 0x5eed,
            complex: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RadiusExtremum {
    pub radius: f64,
    pub value: f64,
}

fn gaussian_point<R: Rng>(rng: &mut R, n: usize, complex: bool) -> Vec<Complex64> {
    loop {
        let z: Vec<Complex64> = (0..n)
            .map(|_| {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = if complex { rng.sample(StandardNormal) } else { 0.0 };
                Complex64::new(re, im)
            })
            .collect();
        let norm = z.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if norm > 0.0 {
            return z.into_iter().map(|x| x / norm).collect();
        }
    }
}

enum Aggregate {
    Min,
    Max,
}

fn sample_extrema(
    f: &Polynomial,
    geometry: &RhoGeometry,
    exponent: f64,
    config: &SamplingConfig,
    aggregate: Aggregate,
    mut draw: impl FnMut(&mut ChaCha8Rng, f64) -> Vec<Complex64>,
) -> Result<Vec<RadiusExtremum>, VerifyError> {
    if config.radii.iter().any(|r| !(r.is_finite() && *r > 0.0)) {
        return Err(VerifyError::BadRadius);
    }
    let gradient: Vec<FloatPolynomial> = f.gradient().iter().map(FloatPolynomial::new).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut out = Vec::with_capacity(config.radii.len());
    for &r in &config.radii {
        let mut acc = match aggregate {
            Aggregate::Min => f64::INFINITY,
            Aggregate::Max => f64::NEG_INFINITY,
        };
        for _ in 0..config.samples_per_radius {
            let z = geometry.project_to_sphere(r, &draw(&mut rng, r));
            let value = geometry.weighted_gradient_norm(&gradient, &z) / geometry.rho(&z).powf(exponent);
            if !value.is_finite() {
                return Err(VerifyError::NonFinite { radius: r, sample: z });
            }
            acc = match aggregate {
                Aggregate::Min => acc.min(value),
                Aggregate::Max => acc.max(value),
            };
        }
        out.push(RadiusExtremum { radius: r, value: acc });
    }
    Ok(out)
}

/// Per-radius minima of `‖grad_w f‖_w / ρ^d` on uniformly drawn points of
/// each sphere `S_r`; bounded away from zero for isolated singularities.
pub fn sample_inequality_lower(
    f: &Polynomial,
    ws: &WeightSystem,
    config: &SamplingConfig,
) -> Result<Vec<RadiusExtremum>, VerifyError> {
    if !is_weighted_homogeneous(f, ws) {
        return Err(VerifyError::NotWeightedHomogeneous(ws.clone()));
    }
    let n = f.variable_count();
    let complex = config.complex;
    sample_extrema(
        f,
        &RhoGeometry::new(ws.clone()),
        ws.degree() as f64,
        config,
        Aggregate::Min,
        |rng, _| gaussian_point(rng, n, complex),
    )
}

/// Per-radius minima of `‖grad_w f‖_w / ρ^d` on points clustered around
/// `direction` with an angular spread proportional to the radius. Near a
/// critical direction of a non-isolated singularity the minima decay with
/// the radius.
pub fn sample_directed_lower(
    f: &Polynomial,
    ws: &WeightSystem,
    direction: &[f64],
    config: &SamplingConfig,
) -> Result<Vec<RadiusExtremum>, VerifyError> {
    let n = f.variable_count();
    assert_eq!(direction.len(), n, "direction dimension mismatch");
    let complex = config.complex;
    sample_extrema(
        f,
        &RhoGeometry::new(ws.clone()),
        ws.degree() as f64,
        config,
        Aggregate::Min,
        |rng, r| {
            let jitter = gaussian_point(rng, n, complex);
            direction
                .iter()
                .zip(jitter)
                .map(|(&d, j)| Complex64::new(d, 0.0) + j * r)
                .collect()
        },
    )
}

/// Per-radius maxima of `‖grad_w f‖_w / ρ^{d_w(f)}`; bounded as `r → 0`.
pub fn sample_inequality_upper(
    f: &Polynomial,
    ws: &WeightSystem,
    config: &SamplingConfig,
) -> Result<Vec<RadiusExtremum>, VerifyError> {
    let degree = f.weighted_degree(ws).finite().ok_or(VerifyError::ZeroPolynomial)?;
    let n = f.variable_count();
    let complex = config.complex;
    sample_extrema(
        f,
        &RhoGeometry::new(ws.clone()),
        degree as f64,
        config,
        Aggregate::Max,
        |rng, _| gaussian_point(rng, n, complex),
    )
}

/// Per-radius minima of `|grad f(z)| / |z|^λ` on Euclidean spheres.
pub fn sample_euclidean_lower(
    f: &Polynomial,
    exponent: f64,
    config: &SamplingConfig,
) -> Result<Vec<RadiusExtremum>, VerifyError> {
    if config.radii.iter().any(|r| !(r.is_finite() && *r > 0.0)) {
        return Err(VerifyError::BadRadius);
    }
    let n = f.variable_count();
    let gradient: Vec<FloatPolynomial> = f.gradient().iter().map(FloatPolynomial::new).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut out = Vec::new();
    for &r in &config.radii {
        let mut acc = f64::INFINITY;
        for _ in 0..config.samples_per_radius {
            let z: Vec<Complex64> = gaussian_point(&mut rng, n, config.complex)
                .into_iter()
                .map(|x| x * r)
                .collect();
            let g = gradient.iter().map(|p| p.evaluate(&z).norm_sqr()).sum::<f64>().sqrt();
            let value = g / r.powf(exponent);
            if !value.is_finite() {
                return Err(VerifyError::NonFinite { radius: r, sample: z });
            }
            acc = acc.min(value);
        }
        out.push(RadiusExtremum { radius: r, value: acc });
    }
    Ok(out)
}

/// `max/min` of the per-radius values.
pub fn spread_ratio(extrema: &[RadiusExtremum]) -> f64 {
    let max = extrema.iter().map(|e| e.value).fold(f64::NEG_INFINITY, f64::max);
    let min = extrema.iter().map(|e| e.value).fold(f64::INFINITY, f64::min);
    max / min
}

/// Monotone decrease as the radius shrinks, by at least 10× across some
/// pair of radii two decades apart.
pub fn exhibits_decay(extrema: &[RadiusExtremum]) -> bool {
    let mut sorted: Vec<&RadiusExtremum> = extrema.iter().collect();
    sorted.sort_by(|a, b| b.radius.total_cmp(&a.radius));
    let monotone = sorted.windows(2).all(|w| w[1].value <= w[0].value);
    if !monotone {
        return false;
    }
    sorted.iter().enumerate().any(|(i, big)| {
        sorted[i + 1..]
            .iter()
            .any(|small| big.radius / small.radius >= 100.0 * (1.0 - 1e-9) && big.value >= 10.0 * small.value)
    })
}

/// Coordinates that survive elimination, for reporting.
pub fn surviving_coordinates(f: &Polynomial, ws: &WeightSystem) -> BTreeSet<usize> {
    let c = classify_coordinates(f, ws);
    (0..f.variable_count())
        .filter(|i| !c.eliminated_set.contains(i))
        .collect()
}
