use std::fmt;

use num_traits::Zero;

use super::PolyError;
use crate::Rational;

/// A monomial arc `φ(t) = (a₁t^{m₁}, …, aₙt^{mₙ})` through the origin.
///
/// The exponent `mᵢ` is ignored wherever `aᵢ = 0`. With `m = w` the curve
/// is the orbit `t·a` of the weighted `ℂ*` action.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialCurve {
    coefficients: Vec<Rational>,
    exponents: Vec<u32>,
}

impl MonomialCurve {
    pub fn new(coefficients: Vec<Rational>, exponents: Vec<u32>) -> Result<Self, PolyError> {
        if coefficients.len() != exponents.len() {
            return Err(PolyError::VariableCountMismatch {
                expected: coefficients.len(),
                found: exponents.len(),
            });
        }
        if coefficients.iter().all(Zero::is_zero) {
            return Err(PolyError::ZeroCurve);
        }
        if coefficients
            .iter()
            .zip(&exponents)
            .any(|(a, &m)| !a.is_zero() && m == 0)
        {
            return Err(PolyError::CurveNotThroughOrigin);
        }
        Ok(MonomialCurve {
            coefficients,
            exponents,
        })
    }

    /// The coordinate axis `t ↦ t·eᵢ`.
    pub fn axis(n: usize, i: usize) -> Self {
        let mut a = vec![Rational::zero(); n];
        a[i] = Rational::from_integer(1.into());
        MonomialCurve {
            coefficients: a,
            exponents: vec![1; n],
        }
    }

    /// The weighted orbit `t·a = (t^{w₁}a₁, …, t^{wₙ}aₙ)`.
    pub fn weighted_orbit(point: Vec<Rational>, weights: &[u64]) -> Result<Self, PolyError> {
        let exps = weights
            .iter()
            .map(|&w| u32::try_from(w).map_err(|_| PolyError::ExponentOverflow))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(point, exps)
    }

    pub fn variable_count(&self) -> usize {
        self.coefficients.len()
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.coefficients
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    /// `ord φ = min { mᵢ : aᵢ ≠ 0 }`.
    pub fn order(&self) -> u32 {
        self.coefficients
            .iter()
            .zip(&self.exponents)
            .filter(|(a, _)| !a.is_zero())
            .map(|(_, &m)| m)
            .min()
            .expect("curve is nonzero")
    }
}

impl fmt::Display for MonomialCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, (a, m)) in self.coefficients.iter().zip(&self.exponents).enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            if a.is_zero() {
                write!(f, "0")?;
            } else {
                write!(f, "{a}*t^{m}")?;
            }
        }
        write!(f, ")")
    }
}
