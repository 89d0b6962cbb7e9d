//! Deformations `F_t = f + t·g` of weighted homogeneous germs and
//! semi-weighted homogeneous germs.
//!
//! A deformation all of whose monomials have weighted degree at least `d`
//! is μ-constant, and the exponent stays equal to `L(f)` along it. The
//! Gröbner oracle corroborates this at sampled parameters.

use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::engine::{lojasiewicz_exponent, EngineError, ExponentReport, IsolationCertificate, Method};
use crate::groebner::{is_isolated, milnor_number, Budget, Dimension, GroebnerError};
use crate::poly::{Monomial, Polynomial};
use crate::verify::random_rational;
use crate::weights::{is_weighted_homogeneous, WeightSystem};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DeformError {
    #[error("base and perturbation have {base} and {perturbation} variables")]
    VariableCountMismatch { base: usize, perturbation: usize },
    #[error("the perturbation does not vanish at the origin")]
    PerturbationNotVanishing,
    #[error("weight system has {weights} weights for {variables} variables")]
    WeightCountMismatch { weights: usize, variables: usize },
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
    #[error("F_t at t = {t} has a nonzero gradient at the origin")]
    NotSingularAt { t: Rational },
    #[error("F_t at t = {t} has a non-isolated singularity")]
    NotIsolatedAt { t: Rational },
    #[error("d_w(f) = {degree} < 2·w{index} = {}", 2 * weight)]
    StrictnessFails { degree: u64, index: usize, weight: u64 },
    #[error("the weighted initial form does not define an isolated singularity")]
    InitialFormNotIsolated,
    #[error("isolation of the weighted initial form not proven: {0}")]
    InitialFormUndecided(GroebnerError),
    #[error("the zero polynomial has no initial form")]
    ZeroPolynomial,
}

/// `F_t = f + t·g` with `g(0) = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Deformation {
    base: Polynomial,
    perturbation: Polynomial,
}

impl Deformation {
    pub fn new(base: Polynomial, perturbation: Polynomial) -> Result<Self, DeformError> {
        if base.variable_count() != perturbation.variable_count() {
            return Err(DeformError::VariableCountMismatch {
                base: base.variable_count(),
                perturbation: perturbation.variable_count(),
            });
        }
        if !perturbation.constant_term().is_zero() {
            return Err(DeformError::PerturbationNotVanishing);
        }
        Ok(Deformation { base, perturbation })
    }

    pub fn base(&self) -> &Polynomial {
        &self.base
    }

    pub fn perturbation(&self) -> &Polynomial {
        &self.perturbation
    }

    /// `F_t` at a fixed parameter.
    pub fn specialize(&self, t: &Rational) -> Polynomial {
        &self.base + &self.perturbation.scale(t)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeformationVerdict {
    pub mu_constant_by_degree: bool,
    /// Monomials of `g` with `d_w < d`, with their weighted degrees.
    pub violating_monomials: Vec<(Monomial, u64)>,
    /// `L(F_t)`, constant in `t`; present when the degree criterion holds.
    pub l_family: Option<Rational>,
    pub mu_base: Option<u64>,
    pub oracle_mu_samples: Vec<(Rational, u64)>,
    /// Samples whose μ disagreed with `μ(f)` while the criterion holds.
    pub conflicting_samples: Vec<(Rational, u64)>,
    /// Parameters at which `F_t` has a non-isolated singularity.
    pub degenerate_samples: Vec<Rational>,
    /// Set when the last round of fresh samples still disagreed.
    pub conflict_persists: bool,
}

fn check_dimensions(def: &Deformation, ws: &WeightSystem) -> Result<(), DeformError> {
    let n = def.base.variable_count();
    if ws.variable_count() != n {
        return Err(DeformError::WeightCountMismatch {
            weights: ws.variable_count(),
            variables: n,
        });
    }
    Ok(())
}

/// Applies the weighted-degree criterion: every monomial of `g` must have
/// `d_w ≥ d`.
pub fn check_mu_constant_by_degree(
    def: &Deformation,
    ws: &WeightSystem,
    cert: &IsolationCertificate,
) -> Result<DeformationVerdict, DeformError> {
    check_dimensions(def, ws)?;
    if !is_weighted_homogeneous(&def.base, ws) {
        return Err(EngineError::NotWeightedHomogeneous(ws.clone()).into());
    }
    let report = lojasiewicz_exponent(&def.base, ws, cert)?;
    let violating_monomials: Vec<(Monomial, u64)> = def
        .perturbation
        .support()
        .map(|m| (m.clone(), m.weighted_degree(ws.weights())))
        .filter(|&(_, dw)| dw < ws.degree())
        .collect();
    let mu_constant_by_degree = violating_monomials.is_empty();
    Ok(DeformationVerdict {
        mu_constant_by_degree,
        violating_monomials,
        l_family: mu_constant_by_degree.then_some(report.exponent),
        mu_base: report.mu_groebner,
        oracle_mu_samples: Vec::new(),
        conflicting_samples: Vec::new(),
        degenerate_samples: Vec::new(),
        conflict_persists: false,
    })
}

/// Gröbner Milnor number of `F_t` at each sampled `t`.
pub fn oracle_mu_samples(
    def: &Deformation,
    t_values: &[Rational],
    budget: &Budget,
) -> Result<Vec<(Rational, u64)>, DeformError> {
    t_values
        .iter()
        .map(|t| {
            let ft = def.specialize(t);
            if ft.order().is_some_and(|o| o <= 1) {
                return Err(DeformError::NotSingularAt { t: t.clone() });
            }
            match milnor_number(&ft, budget)? {
                Dimension::Finite(mu) => Ok((t.clone(), mu)),
                Dimension::Infinite => Err(DeformError::NotIsolatedAt { t: t.clone() }),
            }
        })
        .collect()
}

/// Number of fresh parameter draws after a conflicting sample.
pub const RETRY_ROUNDS: usize = 3;

type MuSamples = Vec<(Rational, u64)>;

/// Splits samples into Milnor numbers and parameters where `F_t` is not
/// isolated.
fn sample_round(
    def: &Deformation,
    t_values: &[Rational],
    budget: &Budget,
) -> Result<(MuSamples, Vec<Rational>), DeformError> {
    let mut finite = Vec::new();
    let mut degenerate = Vec::new();
    for t in t_values {
        match oracle_mu_samples(def, std::slice::from_ref(t), budget) {
            Ok(mut s) => finite.append(&mut s),
            Err(DeformError::NotIsolatedAt { t }) => degenerate.push(t),
            Err(e) => return Err(e),
        }
    }
    Ok((finite, degenerate))
}

/// The degree criterion together with oracle samples. When the criterion
/// holds and a sample disagrees with `μ(f)`, fresh parameters are drawn and
/// every disagreeing sample is kept in `conflicting_samples`; parameters
/// with a non-isolated `F_t` go to `degenerate_samples`.
pub fn analyze_deformation(
    def: &Deformation,
    ws: &WeightSystem,
    t_values: &[Rational],
    budget: &Budget,
    seed: u64,
) -> Result<DeformationVerdict, DeformError> {
    check_dimensions(def, ws)?;
    let isolation = is_isolated(&def.base, budget);
    let mut verdict = check_mu_constant_by_degree(def, ws, &isolation.certificate)?;
    let (samples, mut degenerate) = sample_round(def, t_values, budget)?;
    let Some(mu_base) = verdict.mu_base else {
        verdict.oracle_mu_samples = samples;
        verdict.degenerate_samples = degenerate;
        return Ok(verdict);
    };
    let mut conflicts: Vec<(Rational, u64)> = samples.iter().filter(|(_, mu)| *mu != mu_base).cloned().collect();
    let mut all = samples;
    let mut persists = !conflicts.is_empty() || !degenerate.is_empty();
    if verdict.mu_constant_by_degree && persists {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..RETRY_ROUNDS {
            let fresh: Vec<Rational> = (0..t_values.len().max(1))
                .map(|_| random_rational(&mut rng, false))
                .collect();
            let (more, mut lost) = sample_round(def, &fresh, budget)?;
            let bad: Vec<(Rational, u64)> = more.iter().filter(|(_, mu)| *mu != mu_base).cloned().collect();
            all.extend(more);
            persists = !bad.is_empty() || !lost.is_empty();
            conflicts.extend(bad);
            degenerate.append(&mut lost);
            if !persists {
                break;
            }
        }
    }
    verdict.oracle_mu_samples = all;
    verdict.degenerate_samples = degenerate;
    if verdict.mu_constant_by_degree {
        verdict.conflicting_samples = conflicts;
        verdict.conflict_persists = persists;
    }
    Ok(verdict)
}

/// The exponent of a germ whose weighted initial form `H_{d_w(f)}` has an
/// isolated singularity, under `d_w(f) ≥ 2wᵢ`. Only the weights of `ws`
/// are used; the degree is `d_w(f)`.
pub fn semi_weighted_lojasiewicz(
    f: &Polynomial,
    ws: &WeightSystem,
    budget: &Budget,
) -> Result<ExponentReport, DeformError> {
    if ws.variable_count() != f.variable_count() {
        return Err(DeformError::WeightCountMismatch {
            weights: ws.variable_count(),
            variables: f.variable_count(),
        });
    }
    let degree = f.weighted_degree(ws).finite().ok_or(DeformError::ZeroPolynomial)?;
    if let Some((index, &weight)) = ws.weights().iter().enumerate().find(|(_, &w)| degree < 2 * w) {
        return Err(DeformError::StrictnessFails { degree, index, weight });
    }
    let h = f.initial_form(ws).map_err(|_| DeformError::ZeroPolynomial)?;
    let hw = WeightSystem::new(degree, ws.weights().to_vec()).map_err(|_| DeformError::ZeroPolynomial)?;
    let check = is_isolated(&h, budget);
    match check.certificate {
        IsolationCertificate::Proven(_) => {}
        IsolationCertificate::Refuted => return Err(DeformError::InitialFormNotIsolated),
        IsolationCertificate::Assumed => {
            return Err(DeformError::InitialFormUndecided(
                milnor_number(&h, budget).err().unwrap_or(GroebnerError::Indeterminate),
            ))
        }
    }
    let mut report = lojasiewicz_exponent(&h, &hw, &check.certificate)?;
    report.method = Method::CorollaryMain3;
    Ok(report)
}
