//! Closed-form Łojasiewicz exponents of weighted homogeneous singularities.
//!
//! For a strict type (`d ≥ 2wᵢ` for all `i`) the exponent is
//! `max_i (d/wᵢ − 1)`. For a weak type the maximal coordinates
//! `M(w) = { i : d < 2wᵢ }` are paired with the minimal coordinates that
//! appear with them in quadratic cross terms; both are eliminated and the
//! formula is applied to the surviving weights, with `L = 1` when nothing
//! survives.

use std::collections::BTreeSet;

use num_traits::{One, Signed, ToPrimitive};
use thiserror::Error;

use crate::poly::{Monomial, Polynomial};
use crate::weights::{is_weighted_homogeneous, WeightSystem};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("the polynomial is not weighted homogeneous of type {0}")]
    NotWeightedHomogeneous(WeightSystem),
    #[error("isolated singularity hypothesis refuted")]
    IsolationRefuted,
    #[error("the origin is not a critical point (a term of order at most one is present)")]
    NotSingular,
    #[error("Milnor numbers disagree: Milnor-Orlik gives {milnor_orlik}, Groebner gives {groebner}")]
    MilnorMismatch { milnor_orlik: Rational, groebner: u64 },
    #[error("expected 3 variables, found {0}")]
    NotThreeVariables(usize),
}

/// Status of the isolated-singularity hypothesis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IsolationCertificate {
    /// Proven by a finite Milnor number computed from a Gröbner basis.
    Proven(u64),
    /// Taken on trust from the caller.
    Assumed,
    Refuted,
}

/// Maximal/minimal coordinate classification. Indices are 0-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoordinateClassification {
    /// `M(w) = { i : d < 2wᵢ }`.
    pub maximal_set: BTreeSet<usize>,
    /// `(I_max_k, I_min_k)` with `I_max` decreasing.
    pub pairing: Vec<(usize, usize)>,
    /// `I(f)`.
    pub minimal_set: BTreeSet<usize>,
    /// `M(f) = M(w) ∪ I(f)`.
    pub eliminated_set: BTreeSet<usize>,
    /// `ℓ(f) = |M(f)|`.
    pub ell: usize,
    /// Type restricted to the surviving coordinates; `None` when all are eliminated.
    pub reduced_weights: Option<WeightSystem>,
}

impl CoordinateClassification {
    pub fn surviving(&self, n: usize) -> Vec<usize> {
        (0..n).filter(|i| !self.eliminated_set.contains(i)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    TheoremMain1,
    TheoremMain4,
    SplittingLemma,
    CorollaryMain3,
}

impl Method {
    pub fn tag(self) -> &'static str {
        match self {
            Method::TheoremMain1 => "theorem-main1",
            Method::TheoremMain4 => "theorem-main4",
            Method::SplittingLemma => "splitting-lemma",
            Method::CorollaryMain3 => "corollary-main3",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExponentReport {
    pub exponent: Rational,
    pub method: Method,
    pub classification: Option<CoordinateClassification>,
    pub sufficiency_degree: u64,
    pub mu_milnor_orlik: Option<MilnorOrlik>,
    pub mu_groebner: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MilnorOrlik {
    pub value: Rational,
    /// Set when the product is a positive integer.
    pub integral: bool,
}

/// Builds `M(w)`, the `I_max`/`I_min` pairing, `I(f)`, `M(f)` and `ℓ(f)`.
///
/// `I_min_k` is the smallest index not already used as an earlier `I_min`
/// such that `zᵢ·z_{I_max_k}` is a monomial of `f`; when no such cross
/// term exists at all, `I_min_k = I_max_k`.
pub fn classify_coordinates(f: &Polynomial, ws: &WeightSystem) -> CoordinateClassification {
    let n = ws.variable_count();
    let d = ws.degree();
    let maximal_set: BTreeSet<usize> = (0..n).filter(|&i| d < 2 * ws.weights()[i]).collect();
    let cross_term = |i: usize, j: usize| {
        let mut e = vec![0u32; n];
        e[i] += 1;
        e[j] += 1;
        f.contains_monomial(&Monomial::new(e))
    };

    let mut pairing = Vec::with_capacity(maximal_set.len());
    let mut used: Vec<usize> = Vec::new();
    for &imax in maximal_set.iter().rev() {
        let partners: Vec<usize> = (0..n).filter(|&i| cross_term(i, imax)).collect();
        let imin = if partners.is_empty() {
            imax
        } else {
            // if every partner was consumed the cascade is undefined; this
            // cannot happen for isolated singularities, fall back to imax
            partners.into_iter().find(|i| !used.contains(i)).unwrap_or(imax)
        };
        used.push(imin);
        pairing.push((imax, imin));
    }
    let minimal_set: BTreeSet<usize> = used.into_iter().collect();
    let eliminated_set: BTreeSet<usize> = maximal_set.union(&minimal_set).copied().collect();
    let keep: Vec<usize> = (0..n).filter(|i| !eliminated_set.contains(i)).collect();
    CoordinateClassification {
        ell: eliminated_set.len(),
        reduced_weights: ws.restricted(&keep),
        maximal_set,
        pairing,
        minimal_set,
        eliminated_set,
    }
}

/// `L = max_i (d/wᵢ − 1)` for strict types.
pub fn exponent_strict(ws: &WeightSystem) -> Rational {
    ws.max_dual_minus_one()
}

/// The elimination formula for weak types; on strict types `M(f) = ∅` and
/// the result agrees with [`exponent_strict`].
pub fn exponent_by_elimination(f: &Polynomial, ws: &WeightSystem) -> (Rational, Method, CoordinateClassification) {
    let classification = classify_coordinates(f, ws);
    match &classification.reduced_weights {
        Some(reduced) => (reduced.max_dual_minus_one(), Method::TheoremMain4, classification),
        None => (Rational::one(), Method::SplittingLemma, classification),
    }
}

/// Computes `L(f)` for a weighted homogeneous `f` of type `ws`.
pub fn lojasiewicz_exponent(
    f: &Polynomial,
    ws: &WeightSystem,
    cert: &IsolationCertificate,
) -> Result<ExponentReport, EngineError> {
    if !is_weighted_homogeneous(f, ws) || f.is_zero() {
        return Err(EngineError::NotWeightedHomogeneous(ws.clone()));
    }
    if f.order().is_some_and(|o| o <= 1) {
        return Err(EngineError::NotSingular);
    }
    let mu_groebner = match cert {
        IsolationCertificate::Refuted => return Err(EngineError::IsolationRefuted),
        IsolationCertificate::Proven(mu) => Some(*mu),
        IsolationCertificate::Assumed => None,
    };
    let ws = ws.normalized();
    let mo = milnor_orlik(&ws);
    if let Some(mu) = mu_groebner {
        if !mo.integral || mo.value != Rational::from_integer(mu.into()) {
            return Err(EngineError::MilnorMismatch {
                milnor_orlik: mo.value,
                groebner: mu,
            });
        }
    }
    let (exponent, method, classification) = if ws.is_strict() {
        (exponent_strict(&ws), Method::TheoremMain1, None)
    } else {
        let (l, m, c) = exponent_by_elimination(f, &ws);
        (l, m, Some(c))
    };
    Ok(ExponentReport {
        sufficiency_degree: sufficiency_degree(&exponent),
        exponent,
        method,
        classification,
        mu_milnor_orlik: Some(mo),
        mu_groebner,
    })
}

/// C⁰-sufficiency degree `⌊L⌋ + 1`.
pub fn sufficiency_degree(l: &Rational) -> u64 {
    assert!(l.is_positive(), "exponent must be positive");
    l.floor().to_integer().to_u64().expect("exponent fits in u64") + 1
}

/// `μ = Π (d/wᵢ − 1)`.
pub fn milnor_orlik(ws: &WeightSystem) -> MilnorOrlik {
    let value: Rational = ws.dual_weights().into_iter().map(|q| q - Rational::one()).product();
    MilnorOrlik {
        integral: value.is_integer() && value.is_positive(),
        value,
    }
}

/// `min(max_i (d/wᵢ − 1), μ)`, the three-variable closed form.
pub fn kop_three_variable(f: &Polynomial, ws: &WeightSystem, mu: u64) -> Result<Rational, EngineError> {
    if f.variable_count() != 3 || ws.variable_count() != 3 {
        return Err(EngineError::NotThreeVariables(f.variable_count()));
    }
    let bound = ws.max_dual_minus_one();
    let mu = Rational::from_integer(mu.into());
    Ok(if bound < mu { bound } else { mu })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_with_inferred_variables;
    use crate::rat;

    fn ws(d: u64, w: &[u64]) -> WeightSystem {
        WeightSystem::new(d, w.to_vec()).unwrap()
    }

    fn poly(text: &str) -> Polynomial {
        parse_with_inferred_variables(text).unwrap().0
    }

    fn set(v: &[usize]) -> BTreeSet<usize> {
        v.iter().map(|i| i - 1).collect()
    }

    #[test]
    fn classification_of_remark_polynomial() {
        let c = classify_coordinates(&poly("z1*z4 + z1^10 + z2^5 + z3^5"), &ws(10, &[1, 2, 2, 9]));
        assert_eq!(c.maximal_set, set(&[4]));
        assert_eq!(c.pairing, vec![(3, 0)]);
        assert_eq!(c.minimal_set, set(&[1]));
        assert_eq!(c.eliminated_set, set(&[1, 4]));
        assert_eq!(c.ell, 2);
        assert_eq!(c.reduced_weights, Some(ws(10, &[2, 2])));
    }

    #[test]
    fn classification_of_examples() {
        let c = classify_coordinates(
            &poly("z1*z6 + z1^12 + z2*z5 + z3^4 + z4^3 + z2^6"),
            &ws(12, &[1, 2, 3, 4, 10, 11]),
        );
        assert_eq!(c.maximal_set, set(&[5, 6]));
        assert_eq!(c.eliminated_set, set(&[1, 2, 5, 6]));
        assert_eq!(c.ell, 4);

        let c = classify_coordinates(&poly("z1*z6 + z2*z5 + z3*z4"), &ws(12, &[1, 2, 3, 9, 10, 11]));
        assert_eq!(c.maximal_set, set(&[4, 5, 6]));
        assert_eq!(c.eliminated_set, set(&[1, 2, 3, 4, 5, 6]));
        assert_eq!(c.ell, 6);
        assert_eq!(c.reduced_weights, None);
    }

    #[test]
    fn cascade_skips_consumed_partners() {
        // z4 and z3 both maximal; z3 pairs with z1 and z2, z4 only with z1
        let f = poly("z1*z4 + z1*z3 + z2*z3 + z1^10 + z2^10");
        let w = ws(10, &[1, 1, 9, 9]);
        let c = classify_coordinates(&f, &w);
        assert_eq!(c.pairing, vec![(3, 0), (2, 1)]);
        assert_eq!(c.ell, 4);
    }

    #[test]
    fn exponent_examples() {
        let a = IsolationCertificate::Assumed;
        let r = lojasiewicz_exponent(&poly("z1*z4 + z1^10 + z2^5 + z3^5"), &ws(10, &[1, 2, 2, 9]), &a).unwrap();
        assert_eq!(r.exponent, rat(4, 1));
        assert_eq!(r.method, Method::TheoremMain4);
        assert_eq!(r.sufficiency_degree, 5);

        let r = lojasiewicz_exponent(
            &poly("z1*z6 + z1^12 + z2*z5 + z3^4 + z4^3 + z2^6"),
            &ws(12, &[1, 2, 3, 4, 10, 11]),
            &a,
        )
        .unwrap();
        assert_eq!(r.exponent, rat(3, 1));

        let f = poly("z1*z6 + z2*z5 + z3*z4");
        let weak = lojasiewicz_exponent(&f, &ws(12, &[1, 2, 3, 9, 10, 11]), &a).unwrap();
        let strict = lojasiewicz_exponent(&f, &ws(2, &[1; 6]), &a).unwrap();
        assert_eq!(weak.exponent, rat(1, 1));
        assert_eq!(weak.method, Method::SplittingLemma);
        assert_eq!(strict.exponent, rat(1, 1));
        assert_eq!(strict.method, Method::TheoremMain1);

        let r = lojasiewicz_exponent(
            &poly("x^3 + y^3 + z^3"),
            &ws(3, &[1, 1, 1]),
            &IsolationCertificate::Proven(8),
        )
        .unwrap();
        assert_eq!(r.exponent, rat(2, 1));
        assert_eq!(r.mu_groebner, Some(8));
    }

    #[test]
    fn exponent_errors() {
        let f = poly("x^2 + y^3");
        assert_eq!(
            lojasiewicz_exponent(&f, &ws(6, &[2, 3]), &IsolationCertificate::Assumed),
            Err(EngineError::NotWeightedHomogeneous(ws(6, &[2, 3])))
        );
        assert_eq!(
            lojasiewicz_exponent(&f, &ws(6, &[3, 2]), &IsolationCertificate::Refuted),
            Err(EngineError::IsolationRefuted)
        );
        assert!(matches!(
            lojasiewicz_exponent(&f, &ws(6, &[3, 2]), &IsolationCertificate::Proven(3)),
            Err(EngineError::MilnorMismatch { .. })
        ));
        assert_eq!(
            lojasiewicz_exponent(&poly("x + y^2"), &ws(2, &[2, 1]), &IsolationCertificate::Assumed),
            Err(EngineError::NotSingular)
        );
    }

    #[test]
    fn sufficiency_examples() {
        assert_eq!(sufficiency_degree(&rat(4, 1)), 5);
        assert_eq!(sufficiency_degree(&rat(1, 1)), 2);
        assert_eq!(sufficiency_degree(&rat(10, 9)), 2);
    }

    #[test]
    fn milnor_orlik_examples() {
        let r = milnor_orlik(&ws(10, &[1, 2, 2, 9]));
        assert_eq!(r.value, rat(16, 1));
        assert!(r.integral);
        assert_eq!(milnor_orlik(&ws(3, &[1, 1, 1])).value, rat(8, 1));
        assert_eq!(milnor_orlik(&ws(2, &[1; 5])).value, rat(1, 1));
        let odd = milnor_orlik(&ws(5, &[2, 2]));
        assert_eq!(odd.value, rat(9, 4));
        assert!(!odd.integral);
    }

    #[test]
    fn kop_examples() {
        let f = poly("x^3 + y^3 + z^3");
        assert_eq!(kop_three_variable(&f, &ws(3, &[1, 1, 1]), 8).unwrap(), rat(2, 1));
        let g = poly("x^2 + y^2 + z^2");
        assert_eq!(kop_three_variable(&g, &ws(2, &[1, 1, 1]), 1).unwrap(), rat(1, 1));
        let h = poly("x^2 + y^3 + z^6");
        assert_eq!(kop_three_variable(&h, &ws(6, &[3, 2, 1]), 10).unwrap(), rat(5, 1));
        let two = poly("x^2 + y^2");
        assert_eq!(
            kop_three_variable(&two, &ws(2, &[1, 1]), 1),
            Err(EngineError::NotThreeVariables(2))
        );
    }
}
