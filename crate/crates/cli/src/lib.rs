//! Request and report types behind the `lojex` command-line tool.
//!
//! Every numeric field of a report that is exact is serialized as a string
//! (`"4"`, `"3/2"`); floats appear only in sampling sections. Index sets are
//! 1-based.

use std::fmt::Write as _;
use std::path::Path;

use lojex::deform::{analyze_deformation, semi_weighted_lojasiewicz, DeformError, Deformation};
use lojex::engine::{
    lojasiewicz_exponent, CoordinateClassification, EngineError, ExponentReport, IsolationCertificate,
};
use lojex::groebner::{is_isolated, milnor_number, Budget, Dimension, GroebnerError};
use lojex::poly::{parse_polynomial, parse_with_inferred_variables, ParseError, Polynomial};
use lojex::verify::{
    critical_axes, exhibits_decay, sample_directed_lower, sample_inequality_lower, sample_inequality_upper,
    spread_ratio, witness_search, witness_search_semi, RadiusExtremum, SamplingConfig, VerifyError, WitnessSearch,
};
use lojex::weights::{infer_weight_systems, is_weighted_homogeneous, SolutionKind, WeightError, WeightSystem};
use lojex::{Extended, Rational};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const INTERNAL: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const PARSE: i32 = 3;
    pub const NO_WEIGHTS: i32 = 4;
    pub const NOT_ISOLATED: i32 = 5;
    pub const BUDGET: i32 = 6;
    pub const IO: i32 = 7;
    pub const HYPOTHESIS: i32 = 8;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(#[from] ParseError),
    #[error("invalid type: {0}")]
    Type(#[from] WeightError),
    #[error("type has {weights} weights but the polynomial has {variables} variables")]
    TypeArity { weights: usize, variables: usize },
    #[error("no positive weight system makes the polynomial weighted homogeneous")]
    NoWeightSystem,
    #[error("the polynomial is weighted homogeneous for a family of types (representative {0}); pass --type or --representative")]
    AmbiguousWeights(WeightSystem),
    #[error("the polynomial is not weighted homogeneous of type {0}")]
    NotWeightedHomogeneous(WeightSystem),
    #[error("the singularity at the origin is not isolated")]
    NotIsolated,
    #[error("resource budget exhausted: {0}")]
    Budget(GroebnerError),
    #[error("{0}")]
    Hypothesis(String),
    #[error("internal inconsistency: {0}")]
    Internal(String),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) | CliError::Type(_) | CliError::TypeArity { .. } => exit::PARSE,
            CliError::NoWeightSystem | CliError::AmbiguousWeights(_) | CliError::NotWeightedHomogeneous(_) => {
                exit::NO_WEIGHTS
            }
            CliError::NotIsolated => exit::NOT_ISOLATED,
            CliError::Budget(_) => exit::BUDGET,
            CliError::Hypothesis(_) => exit::HYPOTHESIS,
            CliError::Internal(_) => exit::INTERNAL,
            CliError::Io(_) => exit::IO,
        }
    }
}

impl From<EngineError> for CliError {
    fn from(e: EngineError) -> Self {
        match e {
            EngineError::NotWeightedHomogeneous(ws) => CliError::NotWeightedHomogeneous(ws),
            EngineError::IsolationRefuted => CliError::NotIsolated,
            EngineError::MilnorMismatch { .. } => CliError::Internal(e.to_string()),
            EngineError::NotSingular | EngineError::NotThreeVariables(_) => CliError::Hypothesis(e.to_string()),
        }
    }
}

impl From<GroebnerError> for CliError {
    fn from(e: GroebnerError) -> Self {
        match e {
            GroebnerError::SPairBudget { .. } | GroebnerError::TermBudget { .. } | GroebnerError::Indeterminate => {
                CliError::Budget(e)
            }
            GroebnerError::VariableCountMismatch | GroebnerError::NoGenerators => CliError::Internal(e.to_string()),
        }
    }
}

impl From<VerifyError> for CliError {
    fn from(e: VerifyError) -> Self {
        match e {
            VerifyError::NotWeightedHomogeneous(ws) => CliError::NotWeightedHomogeneous(ws),
            VerifyError::BadRadius | VerifyError::ZeroPolynomial => CliError::Hypothesis(e.to_string()),
            VerifyError::Poly(_) | VerifyError::NonFinite { .. } => CliError::Internal(e.to_string()),
        }
    }
}

impl From<DeformError> for CliError {
    fn from(e: DeformError) -> Self {
        match e {
            DeformError::Engine(e) => e.into(),
            DeformError::Groebner(e) => e.into(),
            DeformError::InitialFormUndecided(e) => CliError::Budget(e),
            DeformError::InitialFormNotIsolated | DeformError::NotIsolatedAt { .. } => CliError::NotIsolated,
            DeformError::WeightCountMismatch { weights, variables } => CliError::TypeArity { weights, variables },
            DeformError::VariableCountMismatch { .. }
            | DeformError::PerturbationNotVanishing
            | DeformError::NotSingularAt { .. }
            | DeformError::StrictnessFails { .. }
            | DeformError::ZeroPolynomial => CliError::Hypothesis(e.to_string()),
        }
    }
}

fn num(r: &Rational) -> String {
    r.to_string()
}

fn ext(r: &Extended<Rational>) -> String {
    match r {
        Extended::Finite(r) => num(r),
        Extended::Infinity => "inf".to_string(),
    }
}

fn one_based(set: impl IntoIterator<Item = usize>) -> Vec<usize> {
    set.into_iter().map(|i| i + 1).collect()
}

/// Options of the numeric and path-based verification.
#[derive(Debug, Clone, PartialEq)]
pub struct VerifyOptions {
    /// Number of random weighted orbits per witness family.
    pub witness_budget: usize,
    pub sampling: SamplingConfig,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            witness_budget: 64,
            sampling: SamplingConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisRequest {
    pub polynomial: String,
    pub variables: Option<Vec<String>>,
    pub weights: Option<WeightSystem>,
    /// Take a representative when the weights form a family.
    pub use_representative: bool,
    pub assume_isolated: bool,
    /// Compute the Gröbner Milnor number even when isolation is assumed.
    pub milnor: bool,
    /// Treat the input as semi-weighted homogeneous for the weights of `weights`.
    pub semi: bool,
    pub verify: Option<VerifyOptions>,
    pub budget: Budget,
}

impl AnalysisRequest {
    pub fn new(polynomial: impl Into<String>) -> Self {
        AnalysisRequest {
            polynomial: polynomial.into(),
            variables: None,
            weights: None,
            use_representative: false,
            assume_isolated: false,
            milnor: false,
            semi: false,
            verify: None,
            budget: Budget::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightReport {
    /// `unique`, `family`, `none` or `given`.
    pub kind: String,
    /// `(d;w1,...,wn)`.
    #[serde(rename = "type")]
    pub type_: Option<String>,
    pub degree: Option<String>,
    pub weights: Vec<String>,
    /// Generators of the cone of types, as `[d, w1, ..., wn]`.
    pub cone_basis: Vec<Vec<String>>,
}

impl WeightReport {
    fn given(ws: &WeightSystem) -> Self {
        WeightReport {
            kind: "given".to_string(),
            type_: Some(ws.to_string()),
            degree: Some(ws.degree().to_string()),
            weights: ws.weights().iter().map(u64::to_string).collect(),
            cone_basis: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub maximal_set: Vec<usize>,
    /// `[I_max, I_min]` pairs.
    pub pairing: Vec<[usize; 2]>,
    pub minimal_set: Vec<usize>,
    pub eliminated_set: Vec<usize>,
    pub ell: String,
    pub reduced_type: Option<String>,
}

impl From<&CoordinateClassification> for ClassificationReport {
    fn from(c: &CoordinateClassification) -> Self {
        ClassificationReport {
            maximal_set: one_based(c.maximal_set.iter().copied()),
            pairing: c.pairing.iter().map(|&(a, b)| [a + 1, b + 1]).collect(),
            minimal_set: one_based(c.minimal_set.iter().copied()),
            eliminated_set: one_based(c.eliminated_set.iter().copied()),
            ell: c.ell.to_string(),
            reduced_type: c.reduced_weights.as_ref().map(ToString::to_string),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadiusValue {
    pub radius: f64,
    pub value: f64,
}

fn radius_values(e: &[RadiusExtremum]) -> Vec<RadiusValue> {
    e.iter()
        .map(|x| RadiusValue {
            radius: x.radius,
            value: x.value,
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub coefficients: Vec<String>,
    pub exponents: Vec<u32>,
    pub numerator: String,
    pub denominator: String,
    pub quotient: String,
    pub curves_tried: usize,
    pub seed: u64,
}

impl From<&WitnessSearch> for WitnessReport {
    fn from(s: &WitnessSearch) -> Self {
        let q = &s.best;
        WitnessReport {
            coefficients: q.curve.coefficients().iter().map(num).collect(),
            exponents: q.curve.exponents().to_vec(),
            numerator: q.numerator.to_string(),
            denominator: q.denominator.to_string(),
            quotient: ext(&q.value),
            curves_tried: s.curves_tried,
            seed: s.seed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplingReport {
    pub samples_per_radius: usize,
    pub seed: u64,
    pub complex: bool,
    /// Minima of `‖grad_w f‖_w / ρ^d`.
    pub lower: Vec<RadiusValue>,
    /// Maxima of `‖grad_w f‖_w / ρ^{d_w(f)}`.
    pub upper: Vec<RadiusValue>,
    /// `max/min` of the lower minima across radii.
    pub lower_spread: f64,
    pub lower_decays: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DirectedReport {
    pub axis: usize,
    pub minima: Vec<RadiusValue>,
    pub decays: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub witness: WitnessReport,
    /// `exponent` when the witness attains the engine value, `lower bound` otherwise.
    pub witness_status: Option<String>,
    pub sampling: SamplingReport,
    /// Coordinate axes inside the critical locus, with directed sampling.
    pub directed: Vec<DirectedReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub input: String,
    pub variables: Vec<String>,
    pub weights: WeightReport,
    pub strict: bool,
    pub classification: Option<ClassificationReport>,
    #[serde(rename = "L")]
    pub exponent: String,
    pub method: String,
    pub sufficiency_degree: String,
    /// `max_i (d/wᵢ − 1)`.
    pub max_dual_minus_one: String,
    /// `min(max_i (d/wᵢ − 1), μ)`, the known bound for three variables.
    pub min_with_mu: Option<String>,
    pub mu_milnor_orlik: Option<String>,
    pub mu_groebner: Option<String>,
    /// `proven` or `assumed`.
    pub isolation: String,
    pub verification: Option<VerificationReport>,
    pub warnings: Vec<String>,
}

/// A parsed polynomial with its variable names.
pub fn parse_input(text: &str, variables: Option<&[String]>) -> Result<(Polynomial, Vec<String>), CliError> {
    match variables {
        Some(names) => Ok((parse_polynomial(text, names)?, names.to_vec())),
        None => Ok(parse_with_inferred_variables(text)?),
    }
}

fn weight_report(f: &Polynomial) -> (WeightReport, Option<WeightSystem>) {
    let solution = infer_weight_systems(f);
    let rep = solution.representative.clone();
    let report = WeightReport {
        kind: solution.kind.as_str().to_string(),
        type_: rep.as_ref().map(ToString::to_string),
        degree: rep.as_ref().map(|w| w.degree().to_string()),
        weights: rep
            .as_ref()
            .map(|w| w.weights().iter().map(u64::to_string).collect())
            .unwrap_or_default(),
        cone_basis: solution
            .cone_basis
            .iter()
            .map(|v| v.iter().map(num).collect())
            .collect(),
    };
    (report, rep.filter(|_| solution.kind != SolutionKind::None))
}

/// Resolves the weight system: the given type, or the inferred one.
fn resolve_weights(
    f: &Polynomial,
    given: Option<&WeightSystem>,
    use_representative: bool,
    warnings: &mut Vec<String>,
) -> Result<(WeightReport, WeightSystem), CliError> {
    if let Some(ws) = given {
        if ws.variable_count() != f.variable_count() {
            return Err(CliError::TypeArity {
                weights: ws.variable_count(),
                variables: f.variable_count(),
            });
        }
        if !is_weighted_homogeneous(f, ws) || f.is_zero() {
            return Err(CliError::NotWeightedHomogeneous(ws.clone()));
        }
        return Ok((WeightReport::given(ws), ws.clone()));
    }
    let (report, rep) = weight_report(f);
    match (report.kind.as_str(), rep) {
        ("unique", Some(ws)) => Ok((report, ws)),
        ("family", Some(ws)) if use_representative => {
            warnings.push(format!("weights form a family; using representative {ws}"));
            Ok((report, ws))
        }
        ("family", Some(ws)) => Err(CliError::AmbiguousWeights(ws)),
        _ => Err(CliError::NoWeightSystem),
    }
}

fn certify(
    f: &Polynomial,
    assume: bool,
    milnor: bool,
    budget: &Budget,
    warnings: &mut Vec<String>,
) -> Result<IsolationCertificate, CliError> {
    if assume {
        warnings.push("isolated singularity assumed, not proven".to_string());
        if milnor {
            match milnor_number(f, budget) {
                Ok(Dimension::Finite(mu)) => return Ok(IsolationCertificate::Proven(mu)),
                Ok(Dimension::Infinite) => return Err(CliError::NotIsolated),
                Err(e) => warnings.push(format!("Milnor number not computed: {e}")),
            }
        }
        return Ok(IsolationCertificate::Assumed);
    }
    match milnor_number(f, budget) {
        Ok(Dimension::Finite(mu)) => Ok(IsolationCertificate::Proven(mu)),
        Ok(Dimension::Infinite) => Err(CliError::NotIsolated),
        Err(e) => Err(e.into()),
    }
}

fn run_verification(
    f: &Polynomial,
    ws: &WeightSystem,
    exponent: Option<&Rational>,
    semi: bool,
    options: &VerifyOptions,
) -> Result<VerificationReport, CliError> {
    let seed = options.sampling.seed;
    let search = if semi {
        witness_search_semi(f, ws, options.witness_budget, seed)?
    } else {
        witness_search(f, ws, options.witness_budget, seed)?
    };
    let witness_status = match exponent {
        Some(l) => {
            let l = Extended::Finite(l.clone());
            if search.best.value > l {
                return Err(CliError::Internal(format!(
                    "witness quotient {} exceeds the exponent {}",
                    search.best.value, l
                )));
            }
            Some(
                if search.best.value == l {
                    "exponent"
                } else {
                    "lower bound"
                }
                .to_string(),
            )
        }
        None => None,
    };
    let lower = sample_inequality_lower(f, ws, &options.sampling).or_else(|e| match e {
        VerifyError::NotWeightedHomogeneous(_) if semi => {
            let degree = f.weighted_degree(ws).finite().unwrap_or(ws.degree());
            let hw = WeightSystem::new(degree, ws.weights().to_vec()).map_err(|_| VerifyError::ZeroPolynomial)?;
            let h = f.initial_form(ws)?;
            sample_inequality_lower(&h, &hw, &options.sampling)
        }
        e => Err(e),
    })?;
    let upper = sample_inequality_upper(f, ws, &options.sampling)?;
    let mut directed = Vec::new();
    for axis in critical_axes(f) {
        let mut direction = vec![0.0; f.variable_count()];
        direction[axis] = 1.0;
        let minima = sample_directed_lower(f, ws, &direction, &options.sampling)?;
        directed.push(DirectedReport {
            axis: axis + 1,
            decays: exhibits_decay(&minima),
            minima: radius_values(&minima),
        });
    }
    Ok(VerificationReport {
        witness: WitnessReport::from(&search),
        witness_status,
        sampling: SamplingReport {
            samples_per_radius: options.sampling.samples_per_radius,
            seed,
            complex: options.sampling.complex,
            lower_spread: spread_ratio(&lower),
            lower_decays: exhibits_decay(&lower),
            lower: radius_values(&lower),
            upper: radius_values(&upper),
        },
        directed,
    })
}

fn exponent_fields(report: &ExponentReport) -> (String, String, String, Option<ClassificationReport>) {
    (
        num(&report.exponent),
        report.method.tag().to_string(),
        report.sufficiency_degree.to_string(),
        report.classification.as_ref().map(ClassificationReport::from),
    )
}

/// The full pipeline: parse, weights, isolation, exponent, verification.
pub fn run_analyze(req: &AnalysisRequest) -> Result<AnalysisReport, CliError> {
    let (f, variables) = parse_input(&req.polynomial, req.variables.as_deref())?;
    if req.semi {
        return run_semi(req, f, variables);
    }
    let mut warnings = Vec::new();
    let (weights, ws) = match resolve_weights(&f, req.weights.as_ref(), req.use_representative, &mut warnings) {
        // a non-isolated singularity outranks the ambiguity of its weights
        Err(CliError::AmbiguousWeights(ws)) => match milnor_number(&f, &req.budget) {
            Ok(Dimension::Infinite) => return Err(CliError::NotIsolated),
            _ => return Err(CliError::AmbiguousWeights(ws)),
        },
        other => other?,
    };
    if f.order().is_some_and(|o| o <= 1) {
        return Err(EngineError::NotSingular.into());
    }
    let cert = certify(&f, req.assume_isolated, req.milnor, &req.budget, &mut warnings)?;
    let report = lojasiewicz_exponent(&f, &ws, &cert)?;
    let normalized = ws.normalized();
    let min_with_mu = report.mu_milnor_orlik.as_ref().filter(|mo| mo.integral).map(|mo| {
        let bound = normalized.max_dual_minus_one();
        num(if bound < mo.value { &bound } else { &mo.value })
    });
    let verification = match &req.verify {
        Some(options) => Some(run_verification(&f, &ws, Some(&report.exponent), false, options)?),
        None => None,
    };
    let (exponent, method, sufficiency_degree, classification) = exponent_fields(&report);
    Ok(AnalysisReport {
        input: req.polynomial.clone(),
        variables,
        weights,
        strict: normalized.is_strict(),
        classification,
        exponent,
        method,
        sufficiency_degree,
        max_dual_minus_one: num(&normalized.max_dual_minus_one()),
        min_with_mu,
        mu_milnor_orlik: report.mu_milnor_orlik.as_ref().map(|m| num(&m.value)),
        mu_groebner: report.mu_groebner.map(|m| m.to_string()),
        isolation: match cert {
            IsolationCertificate::Proven(_) => "proven",
            _ => "assumed",
        }
        .to_string(),
        verification,
        warnings,
    })
}

fn run_semi(req: &AnalysisRequest, f: Polynomial, variables: Vec<String>) -> Result<AnalysisReport, CliError> {
    let ws = req.weights.clone().ok_or_else(|| {
        CliError::Hypothesis("semi-weighted analysis needs weights (--type or --weights)".to_string())
    })?;
    if ws.variable_count() != f.variable_count() {
        return Err(CliError::TypeArity {
            weights: ws.variable_count(),
            variables: f.variable_count(),
        });
    }
    let mut warnings = Vec::new();
    let report = semi_weighted_lojasiewicz(&f, &ws, &req.budget)?;
    let degree = f.weighted_degree(&ws).finite().expect("nonzero");
    let hw = WeightSystem::new(degree, ws.weights().to_vec())?;
    let mu_groebner = match milnor_number(&f, &req.budget) {
        Ok(Dimension::Finite(mu)) => Some(mu.to_string()),
        Ok(Dimension::Infinite) => return Err(CliError::NotIsolated),
        Err(e) => {
            warnings.push(format!("Milnor number of the germ not computed: {e}"));
            None
        }
    };
    let verification = match &req.verify {
        Some(options) => Some(run_verification(&f, &hw, Some(&report.exponent), true, options)?),
        None => None,
    };
    let normalized = hw.normalized();
    let (exponent, method, sufficiency_degree, classification) = exponent_fields(&report);
    let mut weights = WeightReport::given(&hw);
    weights.kind = "initial-form".to_string();
    Ok(AnalysisReport {
        input: req.polynomial.clone(),
        variables,
        weights,
        strict: normalized.is_strict(),
        classification,
        exponent,
        method,
        sufficiency_degree,
        max_dual_minus_one: num(&normalized.max_dual_minus_one()),
        min_with_mu: None,
        mu_milnor_orlik: report.mu_milnor_orlik.as_ref().map(|m| num(&m.value)),
        mu_groebner,
        isolation: "proven".to_string(),
        verification,
        warnings,
    })
}

/// Weight inference on its own.
pub fn run_infer_weights(text: &str, variables: Option<&[String]>) -> Result<WeightReport, CliError> {
    let (f, _) = parse_input(text, variables)?;
    Ok(weight_report(&f).0)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MilnorReport {
    pub input: String,
    pub variables: Vec<String>,
    /// A count, or `inf` for a non-isolated singularity.
    pub mu: String,
    pub isolated: bool,
    /// Whether the input is weighted homogeneous, so that the global and
    /// local quotients agree.
    pub graded: bool,
}

pub fn run_milnor(text: &str, variables: Option<&[String]>, budget: &Budget) -> Result<MilnorReport, CliError> {
    let (f, variables) = parse_input(text, variables)?;
    let graded = infer_weight_systems(&f).kind != SolutionKind::None;
    let mu = milnor_number(&f, budget)?;
    Ok(MilnorReport {
        input: text.to_string(),
        variables,
        mu: match mu {
            Dimension::Finite(m) => m.to_string(),
            Dimension::Infinite => "inf".to_string(),
        },
        isolated: matches!(mu, Dimension::Finite(_)),
        graded,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyCommandReport {
    pub input: String,
    pub variables: Vec<String>,
    pub weights: WeightReport,
    /// `proven`, `refuted` or `undecided`.
    pub isolation: String,
    #[serde(rename = "L")]
    pub exponent: Option<String>,
    pub verification: VerificationReport,
    pub warnings: Vec<String>,
}

/// Witness search and sampling; runs on non-isolated inputs as well, where
/// the directed samplers exhibit the failure of the inequality.
pub fn run_verify(req: &AnalysisRequest, options: &VerifyOptions) -> Result<VerifyCommandReport, CliError> {
    let (f, variables) = parse_input(&req.polynomial, req.variables.as_deref())?;
    let mut warnings = Vec::new();
    let (weights, ws) = resolve_weights(&f, req.weights.as_ref(), req.use_representative, &mut warnings)?;
    let check = is_isolated(&f, &req.budget);
    let (isolation, exponent) = match &check.certificate {
        IsolationCertificate::Refuted => ("refuted", None),
        cert => {
            if let Some(w) = check.warning {
                warnings.push(w);
            }
            let label = if matches!(cert, IsolationCertificate::Proven(_)) {
                "proven"
            } else {
                "undecided"
            };
            (label, Some(lojasiewicz_exponent(&f, &ws, cert)?.exponent))
        }
    };
    let verification = run_verification(&f, &ws, exponent.as_ref(), false, options)?;
    Ok(VerifyCommandReport {
        input: req.polynomial.clone(),
        variables,
        weights,
        isolation: isolation.to_string(),
        exponent: exponent.as_ref().map(num),
        verification,
        warnings,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeformRequest {
    pub base: String,
    pub perturbation: String,
    pub variables: Option<Vec<String>>,
    pub weights: Option<WeightSystem>,
    pub use_representative: bool,
    pub t_values: Vec<Rational>,
    pub budget: Budget,
    pub witness_budget: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ViolatingMonomial {
    pub exponents: Vec<u32>,
    pub weighted_degree: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MuSample {
    pub t: String,
    pub mu: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecializationWitness {
    pub t: String,
    pub quotient: String,
    /// The witness equals the family exponent.
    pub attains: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeformReport {
    pub base: String,
    pub perturbation: String,
    pub variables: Vec<String>,
    pub weights: WeightReport,
    pub mu_constant_by_degree: bool,
    pub violating_monomials: Vec<ViolatingMonomial>,
    pub l_family: Option<String>,
    pub mu_base: Option<String>,
    pub oracle_mu_samples: Vec<MuSample>,
    pub conflicting_samples: Vec<MuSample>,
    pub degenerate_samples: Vec<String>,
    pub conflict_persists: bool,
    pub witnesses: Vec<SpecializationWitness>,
    pub warnings: Vec<String>,
}

fn mu_samples(s: &[(Rational, u64)]) -> Vec<MuSample> {
    s.iter()
        .map(|(t, mu)| MuSample {
            t: num(t),
            mu: mu.to_string(),
        })
        .collect()
}

pub fn run_deform(req: &DeformRequest) -> Result<DeformReport, CliError> {
    let names = match &req.variables {
        Some(v) => v.clone(),
        None => parse_with_inferred_variables(&format!("{} + {}", req.base, req.perturbation))?.1,
    };
    let f = parse_polynomial(&req.base, &names)?;
    let g = parse_polynomial(&req.perturbation, &names)?;
    let mut warnings = Vec::new();
    let (weights, ws) = resolve_weights(&f, req.weights.as_ref(), req.use_representative, &mut warnings)?;
    let def = Deformation::new(f, g)?;
    let verdict = analyze_deformation(&def, &ws, &req.t_values, &req.budget, req.seed)?;
    let mut witnesses = Vec::new();
    if let Some(l) = &verdict.l_family {
        for (t, _) in &verdict.oracle_mu_samples {
            let ft = def.specialize(t);
            let search = witness_search_semi(&ft, &ws, req.witness_budget, req.seed)?;
            let l = Extended::Finite(l.clone());
            if search.best.value > l {
                return Err(CliError::Internal(format!(
                    "witness quotient {} at t = {t} exceeds the family exponent {l}",
                    search.best.value
                )));
            }
            witnesses.push(SpecializationWitness {
                t: num(t),
                quotient: ext(&search.best.value),
                attains: search.best.value == l,
            });
        }
    }
    Ok(DeformReport {
        base: req.base.clone(),
        perturbation: req.perturbation.clone(),
        variables: names,
        weights,
        mu_constant_by_degree: verdict.mu_constant_by_degree,
        violating_monomials: verdict
            .violating_monomials
            .iter()
            .map(|(m, d)| ViolatingMonomial {
                exponents: m.exponents().to_vec(),
                weighted_degree: d.to_string(),
            })
            .collect(),
        l_family: verdict.l_family.as_ref().map(num),
        mu_base: verdict.mu_base.map(|m| m.to_string()),
        oracle_mu_samples: mu_samples(&verdict.oracle_mu_samples),
        conflicting_samples: mu_samples(&verdict.conflicting_samples),
        degenerate_samples: verdict.degenerate_samples.iter().map(num).collect(),
        conflict_persists: verdict.conflict_persists,
        witnesses,
        warnings,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorReport {
    pub code: i32,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchLine {
    /// 1-based line number in the input file.
    pub line: usize,
    pub input: String,
    pub report: Option<AnalysisReport>,
    pub error: Option<ErrorReport>,
}

/// Splits a batch line `polynomial[;d:w1,...]`.
pub fn parse_batch_line(line: &str) -> Result<(String, Option<WeightSystem>), CliError> {
    match line.split_once(';') {
        Some((p, t)) => Ok((p.trim().to_string(), Some(t.trim().parse()?))),
        None => Ok((line.trim().to_string(), None)),
    }
}

/// Analyzes every non-blank line of `text` independently, in parallel,
/// keeping input order.
pub fn run_batch_text(text: &str, template: &AnalysisRequest) -> Vec<BatchLine> {
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| (i + 1, l))
        .collect();
    lines
        .par_iter()
        .map(|&(line, input)| {
            let result = parse_batch_line(input).and_then(|(polynomial, weights)| {
                let req = AnalysisRequest {
                    polynomial,
                    weights: weights.or_else(|| template.weights.clone()),
                    ..template.clone()
                };
                run_analyze(&req)
            });
            let (report, error) = match result {
                Ok(r) => (Some(r), None),
                Err(e) => (
                    None,
                    Some(ErrorReport {
                        code: e.exit_code(),
                        message: e.to_string(),
                    }),
                ),
            };
            BatchLine {
                line,
                input: input.to_string(),
                report,
                error,
            }
        })
        .collect()
}

pub fn run_batch(path: &Path, template: &AnalysisRequest) -> Result<Vec<BatchLine>, CliError> {
    let text = std::fs::read_to_string(path)?;
    Ok(run_batch_text(&text, template))
}

fn set(v: &[usize]) -> String {
    let items: Vec<String> = v.iter().map(usize::to_string).collect();
    format!("{{{}}}", items.join(","))
}

fn write_extrema(out: &mut String, label: &str, values: &[RadiusValue]) {
    let items: Vec<String> = values
        .iter()
        .map(|v| format!("r={:e}: {:.6e}", v.radius, v.value))
        .collect();
    let _ = writeln!(out, "{label}: {}", items.join(", "));
}

fn write_verification(out: &mut String, v: &VerificationReport) {
    let w = &v.witness;
    let _ = writeln!(
        out,
        "witness curve: a=({}) m=({}) quotient {}/{} = {}",
        w.coefficients.join(","),
        w.exponents.iter().map(u32::to_string).collect::<Vec<_>>().join(","),
        w.numerator,
        w.denominator,
        w.quotient
    );
    if let Some(s) = &v.witness_status {
        let _ = writeln!(out, "witness status: {s}");
    }
    let _ = writeln!(out, "curves tried: {} (seed {})", w.curves_tried, w.seed);
    write_extrema(out, "lower minima", &v.sampling.lower);
    write_extrema(out, "upper maxima", &v.sampling.upper);
    let _ = writeln!(out, "lower spread: {:.6}", v.sampling.lower_spread);
    for d in &v.directed {
        write_extrema(out, &format!("directed minima near axis {}", d.axis), &d.minima);
        let _ = writeln!(out, "decay near axis {}: {}", d.axis, d.decays);
    }
}

fn write_weights(out: &mut String, w: &WeightReport) {
    let _ = writeln!(out, "type: {} [{}]", w.type_.as_deref().unwrap_or("none"), w.kind);
}

pub fn render_analysis(r: &AnalysisReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "polynomial: {}", r.input);
    let _ = writeln!(out, "variables: {}", r.variables.join(", "));
    write_weights(&mut out, &r.weights);
    let _ = writeln!(out, "strictness: {}", if r.strict { "strict" } else { "weak" });
    if let Some(c) = &r.classification {
        let _ = writeln!(out, "M(w): {}", set(&c.maximal_set));
        let pairs: Vec<String> = c.pairing.iter().map(|[a, b]| format!("{a}-{b}")).collect();
        let _ = writeln!(out, "pairing: {}", pairs.join(", "));
        let _ = writeln!(out, "M(f): {}", set(&c.eliminated_set));
        let _ = writeln!(out, "ell: {}", c.ell);
        let _ = writeln!(out, "reduced type: {}", c.reduced_type.as_deref().unwrap_or("none"));
    }
    let _ = writeln!(out, "L: {}", r.exponent);
    let _ = writeln!(out, "method: {}", r.method);
    let _ = writeln!(out, "sufficiency degree: {}", r.sufficiency_degree);
    let _ = writeln!(out, "max(d/w_i - 1): {}", r.max_dual_minus_one);
    if let Some(b) = &r.min_with_mu {
        let _ = writeln!(out, "min(max(d/w_i - 1), mu): {b}");
    }
    if let Some(mu) = &r.mu_milnor_orlik {
        let _ = writeln!(out, "mu (Milnor-Orlik): {mu}");
    }
    if let Some(mu) = &r.mu_groebner {
        let _ = writeln!(out, "mu (Groebner): {mu}");
    }
    let _ = writeln!(out, "isolation: {}", r.isolation);
    if let Some(v) = &r.verification {
        write_verification(&mut out, v);
    }
    for w in &r.warnings {
        let _ = writeln!(out, "warning: {w}");
    }
    out
}

pub fn render_weights(r: &WeightReport) -> String {
    let mut out = String::new();
    write_weights(&mut out, r);
    for v in &r.cone_basis {
        let _ = writeln!(out, "cone generator: [{}]", v.join(", "));
    }
    out
}

pub fn render_milnor(r: &MilnorReport) -> String {
    format!(
        "polynomial: {}\nmu: {}\nisolated: {}\ngraded: {}\n",
        r.input, r.mu, r.isolated, r.graded
    )
}

pub fn render_verify(r: &VerifyCommandReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "polynomial: {}", r.input);
    write_weights(&mut out, &r.weights);
    let _ = writeln!(out, "isolation: {}", r.isolation);
    if let Some(l) = &r.exponent {
        let _ = writeln!(out, "L: {l}");
    }
    write_verification(&mut out, &r.verification);
    for w in &r.warnings {
        let _ = writeln!(out, "warning: {w}");
    }
    out
}

pub fn render_deform(r: &DeformReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "base: {}", r.base);
    let _ = writeln!(out, "perturbation: {}", r.perturbation);
    write_weights(&mut out, &r.weights);
    let _ = writeln!(out, "mu-constant by degree: {}", r.mu_constant_by_degree);
    for v in &r.violating_monomials {
        let e: Vec<String> = v.exponents.iter().map(u32::to_string).collect();
        let _ = writeln!(out, "violating monomial: ({}) d_w = {}", e.join(","), v.weighted_degree);
    }
    if let Some(l) = &r.l_family {
        let _ = writeln!(out, "L along the family: {l}");
    }
    if let Some(mu) = &r.mu_base {
        let _ = writeln!(out, "mu(f): {mu}");
    }
    for s in &r.oracle_mu_samples {
        let _ = writeln!(out, "mu at t={}: {}", s.t, s.mu);
    }
    for s in &r.conflicting_samples {
        let _ = writeln!(out, "conflict at t={}: mu = {}", s.t, s.mu);
    }
    for t in &r.degenerate_samples {
        let _ = writeln!(out, "non-isolated at t={t}");
    }
    for w in &r.witnesses {
        let _ = writeln!(out, "witness at t={}: {} (attains: {})", w.t, w.quotient, w.attains);
    }
    for w in &r.warnings {
        let _ = writeln!(out, "warning: {w}");
    }
    out
}

pub fn render_batch_line(b: &BatchLine) -> String {
    match (&b.report, &b.error) {
        (Some(r), _) => format!(
            "{}: {} -> L = {} ({}), type {}",
            b.line,
            b.input.trim(),
            r.exponent,
            r.method,
            r.weights.type_.as_deref().unwrap_or("none")
        ),
        (None, Some(e)) => format!("{}: {} -> error {}: {}", b.line, b.input.trim(), e.code, e.message),
        (None, None) => format!("{}: {}", b.line, b.input.trim()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn remark_report() {
        let r = run_analyze(&AnalysisRequest::new("z1*z4+z1^10+z2^5+z3^5")).unwrap();
        assert_eq!(r.weights.type_.as_deref(), Some("(10;1,2,2,9)"));
        assert!(!r.strict);
        assert_eq!(r.exponent, "4");
        assert_eq!(r.mu_groebner.as_deref(), Some("16"));
        assert_eq!(r.mu_milnor_orlik.as_deref(), Some("16"));
        assert_eq!(r.sufficiency_degree, "5");
        let c = r.classification.unwrap();
        assert_eq!(c.maximal_set, vec![4]);
        assert_eq!(c.eliminated_set, vec![1, 4]);
        assert_eq!(c.ell, "2");
    }

    #[test]
    fn morse_and_refuted() {
        let r = run_analyze(&AnalysisRequest::new("x^2+y^2")).unwrap();
        assert_eq!((r.exponent.as_str(), r.method.as_str()), ("1", "theorem-main1"));
        assert_eq!(r.mu_groebner.as_deref(), Some("1"));
        assert!(r.strict);

        let mut req = AnalysisRequest::new("x*y");
        req.variables = Some(vec!["x".into(), "y".into(), "z".into()]);
        assert_eq!(run_analyze(&req).unwrap_err().exit_code(), exit::NOT_ISOLATED);
    }

    #[test]
    fn exit_codes() {
        let code = |text: &str| run_analyze(&AnalysisRequest::new(text)).unwrap_err().exit_code();
        assert_eq!(code("x^2 +* y"), exit::PARSE);
        assert_eq!(code("x^2 + x^3"), exit::NO_WEIGHTS);
        assert_eq!(code("z1*z6+z2*z5+z3*z4"), exit::NO_WEIGHTS);
        assert_eq!(code("x + y^2"), exit::HYPOTHESIS);
        let mut req = AnalysisRequest::new("x^3 + x*y^2 + y^4");
        req.weights = None;
        assert_eq!(run_analyze(&req).unwrap_err().exit_code(), exit::NO_WEIGHTS);
        let mut req = AnalysisRequest::new("x^2*y + y^4");
        req.budget = Budget {
            max_spairs: 0,
            max_terms: 1000,
        };
        assert_eq!(run_analyze(&req).unwrap_err().exit_code(), exit::BUDGET);
        req.assume_isolated = true;
        let r = run_analyze(&req).unwrap();
        assert_eq!(r.isolation, "assumed");
        assert!(r.mu_groebner.is_none());
    }

    #[test]
    fn json_round_trip() {
        let mut req = AnalysisRequest::new("z1*z4+z1^10+z2^5+z3^5");
        req.verify = Some(VerifyOptions {
            witness_budget: 8,
            sampling: SamplingConfig {
                samples_per_radius: 20,
                ..SamplingConfig::default()
            },
        });
        let r = run_analyze(&req).unwrap();
        let text = serde_json::to_string(&r).unwrap();
        let back: AnalysisReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r);
        assert_eq!(r.verification.unwrap().witness_status.as_deref(), Some("exponent"));
    }

    #[test]
    fn batch_isolates_failures() {
        let lines = run_batch_text(
            "x^2+y^2\n\nx^2 +* y\nz1*z6+z2*z5+z3*z4;12:1,2,3,9,10,11\n",
            &AnalysisRequest::new(""),
        );
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[0].line, 1);
        assert!(lines[0].report.is_some());
        assert_eq!(lines[1].error.as_ref().unwrap().code, exit::PARSE);
        assert_eq!(lines[2].report.as_ref().unwrap().exponent, "1");
        assert!(run_batch_text("", &AnalysisRequest::new("")).is_empty());
    }

    #[test]
    fn semi_weighted_analysis() {
        let mut req = AnalysisRequest::new("x^2+y^3+x^3");
        req.semi = true;
        req.weights = Some("6:3,2".parse().unwrap());
        let r = run_analyze(&req).unwrap();
        assert_eq!((r.exponent.as_str(), r.method.as_str()), ("2", "corollary-main3"));
        assert_eq!(r.mu_groebner.as_deref(), Some("2"));
    }

    #[test]
    fn deform_report() {
        let req = DeformRequest {
            base: "x^3+y^3+z^3".into(),
            perturbation: "x*y*z".into(),
            variables: None,
            weights: None,
            use_representative: false,
            t_values: vec![Rational::from_integer(0.into()), Rational::from_integer(1.into())],
            budget: Budget::default(),
            witness_budget: 16,
            seed: 1,
        };
        let r = run_deform(&req).unwrap();
        assert!(r.mu_constant_by_degree);
        assert_eq!(r.l_family.as_deref(), Some("2"));
        assert!(r.witnesses.iter().all(|w| w.attains));
    }
}
