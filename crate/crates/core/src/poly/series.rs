use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::{Extended, Rational};

/// A polynomial in one variable `t` with exact rational coefficients,
/// the result of substituting a curve into a polynomial.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct UnivariateSeries {
    terms: BTreeMap<u64, Rational>,
}

impl UnivariateSeries {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (u64, Rational)>) -> Self {
        let mut s = Self::zero();
        for (e, c) in terms {
            s.add_term(e, c);
        }
        s
    }

    pub fn add_term(&mut self, exponent: u64, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(exponent).or_insert_with(Rational::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&exponent);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, &Rational)> {
        self.terms.iter().map(|(&e, c)| (e, c))
    }

    pub fn coefficient(&self, exponent: u64) -> Option<&Rational> {
        self.terms.get(&exponent)
    }

    /// Lowest exponent carrying a nonzero coefficient; `+∞` for zero.
    pub fn ord(&self) -> Extended<u64> {
        match self.terms.keys().next() {
            Some(&e) => Extended::Finite(e),
            None => Extended::Infinity,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&e, c) in &other.terms {
            out.add_term(e, c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (&a, ca) in &self.terms {
            for (&b, cb) in &other.terms {
                out.add_term(a + b, ca * cb);
            }
        }
        out
    }
}

impl fmt::Display for UnivariateSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (e, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            match e {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*t")?,
                _ => write!(f, "{c}*t^{e}")?,
            }
        }
        Ok(())
    }
}
