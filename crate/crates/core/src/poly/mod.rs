//! Sparse multivariate polynomials over the rationals.
//!
//! Terms live in a `BTreeMap` keyed by [`Monomial`], so iteration follows
//! the graded reverse lexicographic order and printing is deterministic.

mod curve;
mod monomial;
mod parse;
mod series;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use thiserror::Error;

pub use curve::MonomialCurve;
pub use monomial::Monomial;
pub use parse::{natural_order, parse_polynomial, parse_with_inferred_variables, ParseError};
pub use series::UnivariateSeries;

use crate::weights::WeightSystem;
use crate::{Extended, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("variable index {index} out of range for {count} variables")]
    IndexOutOfRange { index: usize, count: usize },
    #[error("expected {expected} variables, found {found}")]
    VariableCountMismatch { expected: usize, found: usize },
    #[error("operation undefined on the zero polynomial")]
    ZeroPolynomial,
    #[error("curve must have a nonzero coefficient")]
    ZeroCurve,
    #[error("curve exponents must be positive where coefficients are nonzero")]
    CurveNotThroughOrigin,
    #[error("exponent does not fit in 32 bits")]
    ExponentOverflow,
}

/// `base^exp` by repeated squaring.
pub(crate) fn rational_pow(base: &Rational, exp: u32) -> Rational {
    num_traits::pow(base.clone(), exp as usize)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        Self::monomial(c, Monomial::one(nvars))
    }

    pub fn variable(nvars: usize, i: usize) -> Self {
        Self::monomial(Rational::one(), Monomial::variable(nvars, i))
    }

    pub fn monomial(c: Rational, m: Monomial) -> Self {
        let mut p = Self::zero(m.len());
        p.add_term(m, c);
        p
    }

    /// Collects terms, summing repeated monomials and dropping zeros.
    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Result<Self, PolyError> {
        let mut p = Self::zero(nvars);
        for (m, c) in terms {
            if m.len() != nvars {
                return Err(PolyError::VariableCountMismatch {
                    expected: nvars,
                    found: m.len(),
                });
            }
            p.add_term(m, c);
        }
        Ok(p)
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn variable_count(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.keys()
    }

    pub fn coefficient(&self, m: &Monomial) -> Option<&Rational> {
        self.terms.get(m)
    }

    pub fn contains_monomial(&self, m: &Monomial) -> bool {
        self.terms.contains_key(m)
    }

    /// Largest term under the graded reverse lexicographic order.
    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.keys().next_back()
    }

    pub fn constant_term(&self) -> Rational {
        self.terms
            .get(&Monomial::one(self.nvars))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// Largest total degree of a term, `None` for zero.
    pub fn total_degree(&self) -> Option<u64> {
        self.terms.keys().map(Monomial::total_degree).max()
    }

    /// Smallest total degree of a term, `None` for zero.
    pub fn order(&self) -> Option<u64> {
        self.terms.keys().map(Monomial::total_degree).min()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    /// Divides by the leading coefficient. The zero polynomial is returned unchanged.
    pub fn monic(&self) -> Self {
        match self.leading_term() {
            Some((_, c)) if !c.is_one() => self.scale(&c.recip()),
            _ => self.clone(),
        }
    }

    pub fn mul_monomial(&self, c: &Rational, m: &Monomial) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(k, a)| (k.mul(m), a * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::constant(self.nvars, Rational::one());
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Exact `∂f/∂zᵢ` for a 0-based index `i`.
    pub fn partial_derivative(&self, i: usize) -> Result<Self, PolyError> {
        if i >= self.nvars {
            return Err(PolyError::IndexOutOfRange {
                index: i,
                count: self.nvars,
            });
        }
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.exponents()[i];
            if e == 0 {
                continue;
            }
            let mut exps = m.exponents().to_vec();
            exps[i] -= 1;
            out.add_term(Monomial::new(exps), c * Rational::from_integer(e.into()));
        }
        Ok(out)
    }

    pub fn gradient(&self) -> Vec<Self> {
        (0..self.nvars)
            .map(|i| self.partial_derivative(i).expect("index in range"))
            .collect()
    }

    /// `d_w(f) = min ⟨w, α⟩` over the support; `+∞` for the zero polynomial.
    pub fn weighted_degree(&self, ws: &WeightSystem) -> Extended<u64> {
        self.check_weights(ws);
        self.terms
            .keys()
            .map(|m| m.weighted_degree(ws.weights()))
            .min()
            .map_or(Extended::Infinity, Extended::Finite)
    }

    /// Splits `f` into weighted homogeneous parts `H_j`.
    pub fn graded_parts(&self, ws: &WeightSystem) -> BTreeMap<u64, Polynomial> {
        self.check_weights(ws);
        let mut parts: BTreeMap<u64, Polynomial> = BTreeMap::new();
        for (m, c) in &self.terms {
            let j = m.weighted_degree(ws.weights());
            parts
                .entry(j)
                .or_insert_with(|| Self::zero(self.nvars))
                .add_term(m.clone(), c.clone());
        }
        parts
    }

    /// The lowest weighted-degree part `H_{d_w(f)}`.
    pub fn initial_form(&self, ws: &WeightSystem) -> Result<Polynomial, PolyError> {
        self.graded_parts(ws)
            .into_iter()
            .next()
            .map(|(_, h)| h)
            .ok_or(PolyError::ZeroPolynomial)
    }

    /// Substitutes `zᵢ ↦ aᵢ t^{mᵢ}` exactly.
    pub fn compose_with_curve(&self, curve: &MonomialCurve) -> Result<UnivariateSeries, PolyError> {
        self.check_curve(curve)?;
        let mut out = UnivariateSeries::zero();
        for (m, c) in &self.terms {
            if let Some((e, v)) = term_on_curve(m, c, curve) {
                out.add_term(e, v);
            }
        }
        Ok(out)
    }

    /// `ord(f ∘ φ)` without expanding the whole composition: terms are
    /// grouped by their `t`-exponent and only the lowest groups are summed
    /// until one survives cancellation.
    pub fn order_along(&self, curve: &MonomialCurve) -> Result<Extended<u64>, PolyError> {
        self.check_curve(curve)?;
        let mut groups: BTreeMap<u64, Vec<(&Monomial, &Rational)>> = BTreeMap::new();
        for (m, c) in &self.terms {
            let vanishes = m
                .exponents()
                .iter()
                .zip(curve.coefficients())
                .any(|(&e, a)| e > 0 && a.is_zero());
            if vanishes {
                continue;
            }
            let e: u64 = m
                .exponents()
                .iter()
                .zip(curve.exponents())
                .map(|(&e, &k)| u64::from(e) * u64::from(k))
                .sum();
            groups.entry(e).or_default().push((m, c));
        }
        for (e, group) in groups {
            let mut sum = Rational::zero();
            for (m, c) in group {
                if let Some((_, v)) = term_on_curve(m, c, curve) {
                    sum += v;
                }
            }
            if !sum.is_zero() {
                return Ok(Extended::Finite(e));
            }
        }
        Ok(Extended::Infinity)
    }

    /// Exact value at a rational point.
    pub fn evaluate(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.nvars, "point dimension mismatch");
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (&e, x) in m.exponents().iter().zip(point) {
                if e > 0 {
                    v *= rational_pow(x, e);
                }
            }
            acc += v;
        }
        acc
    }

    /// Substitutes a rational value for `zᵢ`, keeping the variable count.
    pub fn specialize(&self, i: usize, value: &Rational) -> Self {
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let mut exps = m.exponents().to_vec();
            let e = std::mem::replace(&mut exps[i], 0);
            out.add_term(Monomial::new(exps), c * rational_pow(value, e));
        }
        out
    }

    /// Relabels variables: variable `i` becomes variable `perm[i]`.
    pub fn permute_variables(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.nvars);
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            out.add_term(m.permuted(perm), c.clone());
        }
        out
    }

    /// Drops the variables in `removed`, keeping only terms free of them.
    /// The remaining variables keep their relative order.
    pub fn restrict_to_complement(&self, removed: &BTreeSet<usize>) -> Self {
        let keep: Vec<usize> = (0..self.nvars).filter(|i| !removed.contains(i)).collect();
        let mut out = Self::zero(keep.len());
        for (m, c) in &self.terms {
            if removed.iter().any(|&i| m.exponents()[i] > 0) {
                continue;
            }
            let exps = keep.iter().map(|&i| m.exponents()[i]).collect();
            out.add_term(Monomial::new(exps), c.clone());
        }
        out
    }

    /// Formats with caller-supplied variable names.
    pub fn display_with<'a>(&'a self, names: &'a [String]) -> PolynomialDisplay<'a> {
        PolynomialDisplay {
            poly: self,
            names: Some(names),
        }
    }

    fn check_weights(&self, ws: &WeightSystem) {
        assert_eq!(
            ws.variable_count(),
            self.nvars,
            "weight system and polynomial disagree on the variable count"
        );
    }

    fn check_curve(&self, curve: &MonomialCurve) -> Result<(), PolyError> {
        if curve.variable_count() != self.nvars {
            return Err(PolyError::VariableCountMismatch {
                expected: self.nvars,
                found: curve.variable_count(),
            });
        }
        Ok(())
    }
}

fn term_on_curve(m: &Monomial, c: &Rational, curve: &MonomialCurve) -> Option<(u64, Rational)> {
    let mut v = c.clone();
    let mut e = 0u64;
    for ((&k, a), &mi) in m.exponents().iter().zip(curve.coefficients()).zip(curve.exponents()) {
        if k == 0 {
            continue;
        }
        if a.is_zero() {
            return None;
        }
        v *= rational_pow(a, k);
        e += u64::from(k) * u64::from(mi);
    }
    Some((e, v))
}

/// Default variable names `z1, …, zn`.
pub fn default_variable_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("z{i}")).collect()
}

pub struct PolynomialDisplay<'a> {
    poly: &'a Polynomial,
    names: Option<&'a [String]>,
}

impl fmt::Display for PolynomialDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let defaults;
        let names = match self.names {
            Some(n) => n,
            None => {
                defaults = default_variable_names(self.poly.nvars);
                &defaults
            }
        };
        if self.poly.is_zero() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.poly.terms.iter().rev().enumerate() {
            let negative = c < &Rational::zero();
            let abs = if negative { -c } else { c.clone() };
            match (k, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mut factors = Vec::new();
            if !abs.is_one() || m.is_one() {
                factors.push(abs.to_string());
            }
            for (i, &e) in m.exponents().iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(names[i].clone()),
                    _ => factors.push(format!("{}^{}", names[i], e)),
                }
            }
            f.write_str(&factors.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        PolynomialDisplay {
            poly: self,
            names: None,
        }
        .fmt(f)
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;

    fn add(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;

    fn sub(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        self.scale(&-Rational::one())
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = Polynomial::zero(self.nvars);
        for (a, ca) in &self.terms {
            for (b, cb) in &rhs.terms {
                out.add_term(a.mul(b), ca * cb);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;

    fn p(text: &str, vars: &[&str]) -> Polynomial {
        let names: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
        parse_polynomial(text, &names).unwrap()
    }

    fn ws(d: u64, w: &[u64]) -> WeightSystem {
        WeightSystem::new(d, w.to_vec()).unwrap()
    }

    #[test]
    fn derivative_examples() {
        let f = p("x^2 + y^3", &["x", "y"]);
        assert_eq!(f.partial_derivative(0).unwrap(), p("2*x", &["x", "y"]));
        let g = p("z1*z4 + z1^10", &["z1", "z2", "z3", "z4"]);
        assert_eq!(
            g.partial_derivative(0).unwrap(),
            p("z4 + 10*z1^9", &["z1", "z2", "z3", "z4"])
        );
        let h = p("x^3", &["x", "y"]);
        assert!(h.partial_derivative(1).unwrap().is_zero());
        assert_eq!(
            h.partial_derivative(2),
            Err(PolyError::IndexOutOfRange { index: 2, count: 2 })
        );
    }

    #[test]
    fn weighted_degree_examples() {
        let vars = ["z1", "z2", "z3", "z4"];
        let f = p("z1*z4 + z1^10 + z2^5 + z3^5", &vars);
        assert_eq!(f.weighted_degree(&ws(10, &[1, 2, 2, 9])), Extended::Finite(10));
        assert_eq!(Polynomial::zero(2).weighted_degree(&ws(1, &[1, 1])), Extended::Infinity);
        let g = p("x + y^2", &["x", "y"]);
        assert_eq!(g.weighted_degree(&ws(2, &[2, 1])), Extended::Finite(2));
    }

    #[test]
    fn graded_parts_examples() {
        let f = p("x^2 + y^3 + x^3", &["x", "y"]);
        let w = ws(6, &[3, 2]);
        let parts = f.graded_parts(&w);
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[&6], p("x^2 + y^3", &["x", "y"]));
        assert_eq!(parts[&9], p("x^3", &["x", "y"]));
        assert_eq!(f.initial_form(&w).unwrap(), p("x^2 + y^3", &["x", "y"]));

        let h = p("x^2 + y^3", &["x", "y"]);
        let parts = h.graded_parts(&w);
        assert_eq!(parts.len(), 1);
        assert_eq!(parts[&6], h);

        assert!(Polynomial::zero(2).graded_parts(&w).is_empty());
        assert_eq!(Polynomial::zero(2).initial_form(&w), Err(PolyError::ZeroPolynomial));
    }

    #[test]
    fn composition_examples() {
        let f = p("x^2 + y^3", &["x", "y"]);
        let curve = MonomialCurve::new(vec![rat(0, 1), rat(1, 1)], vec![1, 1]).unwrap();
        let s = f.compose_with_curve(&curve).unwrap();
        assert_eq!(s, UnivariateSeries::from_terms([(3, rat(1, 1))]));

        let x = p("x", &["x", "y"]);
        let axis = MonomialCurve::axis(2, 0);
        assert_eq!(
            x.compose_with_curve(&axis).unwrap(),
            UnivariateSeries::from_terms([(1, rat(1, 1))])
        );

        let vars = ["z1", "z2", "z3", "z4"];
        let g = p("z1*z4", &vars);
        let a = vec![rat(2, 1), rat(-3, 1), rat(5, 7), rat(1, 3)];
        let orbit = MonomialCurve::weighted_orbit(a, &[1, 2, 2, 9]).unwrap();
        assert_eq!(
            g.compose_with_curve(&orbit).unwrap(),
            UnivariateSeries::from_terms([(10, rat(2, 3))])
        );
    }

    #[test]
    fn order_along_sees_cancellation() {
        // x - y on the diagonal cancels at order one; x^2 survives at order two.
        let f = p("x - y + x^2", &["x", "y"]);
        let diag = MonomialCurve::new(vec![rat(1, 1), rat(1, 1)], vec![1, 1]).unwrap();
        assert_eq!(f.order_along(&diag).unwrap(), Extended::Finite(2));
        let g = p("x - y", &["x", "y"]);
        assert_eq!(g.order_along(&diag).unwrap(), Extended::Infinity);
    }

    #[test]
    fn display_is_canonical() {
        let f = p("3*y - x^2 + 1/2", &["x", "y"]);
        assert_eq!(
            f.display_with(&["x".into(), "y".into()]).to_string(),
            "-x^2 + 3*y + 1/2"
        );
        assert_eq!(Polynomial::zero(3).to_string(), "0");
        assert_eq!(p("-2/3*x*y^2", &["x", "y"]).to_string(), "-2/3*z1*z2^2");
    }

    #[test]
    fn restriction_and_specialization() {
        let vars = ["z1", "z2", "z3", "z4"];
        let f = p("z1*z4 + z1^10 + z2^5 + z3^5", &vars);
        let removed: BTreeSet<usize> = [0, 3].into_iter().collect();
        let h = f.restrict_to_complement(&removed);
        assert_eq!(h, p("a^5 + b^5", &["a", "b"]));
        let g = f.specialize(0, &rat(0, 1));
        assert_eq!(g, p("z2^5 + z3^5", &vars));
    }
}
