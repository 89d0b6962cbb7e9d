//! Weight systems `(d; w₁, …, wₙ)` and their inference from a support.
//!
//! A polynomial is weighted homogeneous of type `(d; w)` when every exponent
//! `α` in its support satisfies `⟨w, α⟩ = d`. The type is *strict* when in
//! addition `d ≥ 2wᵢ` for every `i`; without that condition it is *weak*.
//! Weak is read literally as "weighted homogeneous, strictness not
//! required", so every strict type is also weak.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::linalg;
use crate::poly::Polynomial;
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WeightError {
    #[error("degree must be positive")]
    ZeroDegree,
    #[error("weights must be positive (weight {index} is zero)")]
    ZeroWeight { index: usize },
    #[error("a weight system needs at least one variable")]
    NoVariables,
    #[error("malformed type `{0}`, expected `d:w1,w2,...`")]
    Malformed(String),
}

/// The type `(d; w₁, …, wₙ)` of a weighted homogeneous polynomial.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeightSystem {
    degree: u64,
    weights: Vec<u64>,
}

impl WeightSystem {
    pub fn new(degree: u64, weights: Vec<u64>) -> Result<Self, WeightError> {
        if degree == 0 {
            return Err(WeightError::ZeroDegree);
        }
        if weights.is_empty() {
            return Err(WeightError::NoVariables);
        }
        if let Some(index) = weights.iter().position(|&w| w == 0) {
            return Err(WeightError::ZeroWeight { index });
        }
        Ok(WeightSystem { degree, weights })
    }

    pub fn degree(&self) -> u64 {
        self.degree
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn variable_count(&self) -> usize {
        self.weights.len()
    }

    /// Divides `d` and all weights by their common gcd.
    pub fn normalized(&self) -> Self {
        let g = self.weights.iter().fold(self.degree, |acc, &w| acc.gcd(&w));
        WeightSystem {
            degree: self.degree / g,
            weights: self.weights.iter().map(|w| w / g).collect(),
        }
    }

    pub fn scaled(&self, k: u64) -> Self {
        assert!(k > 0);
        WeightSystem {
            degree: self.degree * k,
            weights: self.weights.iter().map(|w| w * k).collect(),
        }
    }

    /// Weight of variable `i` moves to position `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let mut w = vec![0; self.weights.len()];
        for (i, &p) in perm.iter().enumerate() {
            w[p] = self.weights[i];
        }
        WeightSystem {
            degree: self.degree,
            weights: w,
        }
    }

    /// Keeps only the listed variables, in order.
    pub fn restricted(&self, keep: &[usize]) -> Option<Self> {
        if keep.is_empty() {
            return None;
        }
        Some(WeightSystem {
            degree: self.degree,
            weights: keep.iter().map(|&i| self.weights[i]).collect(),
        })
    }

    /// `(d/w₁, …, d/wₙ)`.
    pub fn dual_weights(&self) -> Vec<Rational> {
        self.weights
            .iter()
            .map(|&w| Rational::new(self.degree.into(), w.into()))
            .collect()
    }

    /// `d ≥ 2wᵢ` for every `i`.
    pub fn is_strict(&self) -> bool {
        self.weights.iter().all(|&w| self.degree >= 2 * w)
    }

    /// `max_i (d/wᵢ − 1)`, attained at the smallest weight.
    pub fn max_dual_minus_one(&self) -> Rational {
        let wmin = *self.weights.iter().min().expect("nonempty");
        Rational::new(self.degree.into(), wmin.into()) - Rational::one()
    }

    /// The vector `(d, w₁, …, wₙ)` as rationals.
    pub fn as_vector(&self) -> Vec<Rational> {
        std::iter::once(self.degree)
            .chain(self.weights.iter().copied())
            .map(|x| Rational::from_integer(x.into()))
            .collect()
    }

    /// Scales a positive rational vector `(d, w₁, …)` to coprime integers.
    pub fn from_positive_vector(v: &[Rational]) -> Option<Self> {
        if v.len() < 2 || v.iter().any(|x| !x.is_positive()) {
            return None;
        }
        let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let ints: Vec<BigInt> = v.iter().map(|x| (x * &lcm).to_integer()).collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        let ints: Vec<u64> = ints.iter().map(|x| (x / &g).to_u64()).collect::<Option<_>>()?;
        WeightSystem::new(ints[0], ints[1..].to_vec()).ok()
    }
}

impl fmt::Display for WeightSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({};", self.degree)?;
        for (i, w) in self.weights.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{w}")?;
        }
        write!(f, ")")
    }
}

/// Parses the command-line form `d:w1,w2,...,wn`.
impl FromStr for WeightSystem {
    type Err = WeightError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let malformed = || WeightError::Malformed(s.to_string());
        let (d, ws) = s.split_once(':').ok_or_else(malformed)?;
        let d: u64 = d.trim().parse().map_err(|_| malformed())?;
        let ws = ws
            .split(',')
            .map(|w| w.trim().parse::<u64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| malformed())?;
        WeightSystem::new(d, ws)
    }
}

/// Whether every support exponent satisfies `⟨w, α⟩ = d`.
pub fn is_weighted_homogeneous(f: &Polynomial, ws: &WeightSystem) -> bool {
    f.variable_count() == ws.variable_count() && f.support().all(|m| m.weighted_degree(ws.weights()) == ws.degree())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolutionKind {
    None,
    Unique,
    Family,
}

impl SolutionKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SolutionKind::None => "none",
            SolutionKind::Unique => "unique",
            SolutionKind::Family => "family",
        }
    }
}

/// All weight systems making a polynomial weighted homogeneous.
///
/// Vectors in `cone_basis` are laid out as `(d, w₁, …, wₙ)` and span the
/// rational solution space of the homogeneity equations. The positive part
/// of that span is the set of admissible types.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightSolution {
    pub kind: SolutionKind,
    pub representative: Option<WeightSystem>,
    pub cone_basis: Vec<Vec<Rational>>,
}

impl WeightSolution {
    fn none() -> Self {
        WeightSolution {
            kind: SolutionKind::None,
            representative: None,
            cone_basis: Vec::new(),
        }
    }

    /// Whether `ws` (up to scaling) is one of the admissible types.
    pub fn contains(&self, ws: &WeightSystem) -> bool {
        if self.kind == SolutionKind::None {
            return false;
        }
        let v = ws.as_vector();
        if v.len() != self.cone_basis[0].len() {
            return false;
        }
        let mut m = self.cone_basis.clone();
        let r = linalg::rank(&m);
        m.push(v);
        linalg::rank(&m) == r
    }
}

/// Solves `⟨w, α⟩ = d` over the support of `f` and intersects the solution
/// space with the open positive orthant.
pub fn infer_weight_systems(f: &Polynomial) -> WeightSolution {
    let n = f.variable_count();
    if f.is_zero() || n == 0 {
        return WeightSolution::none();
    }
    // unknowns (d, w_1, ..., w_n); one row -d + <alpha, w> = 0 per exponent
    let rows: linalg::Matrix = f
        .support()
        .map(|m| {
            std::iter::once(-Rational::one())
                .chain(m.exponents().iter().map(|&e| Rational::from_integer(e.into())))
                .collect()
        })
        .collect();
    let basis = linalg::nullspace(&rows, n + 1);
    match basis.len() {
        0 => WeightSolution::none(),
        1 => {
            let v = &basis[0];
            let oriented: Vec<Rational> = if v[0].is_negative() {
                v.iter().map(|x| -x).collect()
            } else {
                v.clone()
            };
            match WeightSystem::from_positive_vector(&oriented) {
                Some(rep) => WeightSolution {
                    kind: SolutionKind::Unique,
                    cone_basis: vec![rep.as_vector()],
                    representative: Some(rep),
                },
                None => WeightSolution::none(),
            }
        }
        _ => match positive_point(&basis) {
            Some(point) => {
                let uniform = uniform_type(f);
                let representative = uniform
                    .or_else(|| WeightSystem::from_positive_vector(&point))
                    .map(|ws| ws.normalized());
                WeightSolution {
                    kind: SolutionKind::Family,
                    representative,
                    cone_basis: basis,
                }
            }
            None => WeightSolution::none(),
        },
    }
}

/// `(deg; 1, …, 1)` when `f` is homogeneous in the ordinary sense.
fn uniform_type(f: &Polynomial) -> Option<WeightSystem> {
    let mut degrees = f.support().map(|m| m.total_degree());
    let d = degrees.next()?;
    if d == 0 || degrees.any(|e| e != d) {
        return None;
    }
    WeightSystem::new(d, vec![1; f.variable_count()]).ok()
}

/// A linear inequality `a·c ≥ b`.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Inequality {
    a: Vec<Rational>,
    b: Rational,
}

impl Inequality {
    /// Scales so the first nonzero entry of `a` has absolute value one.
    fn normalized(mut self) -> Self {
        if let Some(lead) = self.a.iter().find(|x| !x.is_zero()).map(|x| x.abs()) {
            for x in self.a.iter_mut() {
                *x /= &lead;
            }
            self.b /= &lead;
        }
        self
    }
}

/// Finds coefficients `c` with `Σ c_j basis_j ≥ 1` componentwise by
/// Fourier–Motzkin elimination, returning the resulting positive vector.
fn positive_point(basis: &[Vec<Rational>]) -> Option<Vec<Rational>> {
    let k = basis.len();
    let dim = basis[0].len();
    let initial: Vec<Inequality> = (0..dim)
        .map(|row| Inequality {
            a: basis.iter().map(|v| v[row].clone()).collect(),
            b: Rational::one(),
        })
        .collect();

    // systems[j] only involves variables 0..=j
    let mut systems = vec![initial];
    for var in (1..k).rev() {
        let current = systems.last().expect("nonempty");
        let (mut lower, mut upper, mut rest) = (Vec::new(), Vec::new(), Vec::new());
        for ineq in current {
            let coef = &ineq.a[var];
            if coef.is_positive() {
                lower.push(ineq);
            } else if coef.is_negative() {
                upper.push(ineq);
            } else {
                rest.push(ineq.clone());
            }
        }
        for lo in &lower {
            for up in &upper {
                // lo: a_var x ≥ b - ..., up: -|u_var| x ≥ ... ; combine to cancel x
                let s = -&up.a[var];
                let t = lo.a[var].clone();
                let a: Vec<Rational> = lo.a.iter().zip(&up.a).map(|(p, q)| p * &s + q * &t).collect();
                let b = &lo.b * &s + &up.b * &t;
                let combined = Inequality { a, b }.normalized();
                if !rest.contains(&combined) {
                    rest.push(combined);
                }
            }
        }
        systems.push(rest);
    }

    // back-substitute, choosing each variable at the tightest lower bound
    let mut c = vec![Rational::zero(); k];
    for (var, system) in (0..k).zip(systems.iter().rev()) {
        let mut lo: Option<Rational> = None;
        let mut hi: Option<Rational> = None;
        for ineq in system {
            let known: Rational = (0..var).map(|j| &ineq.a[j] * &c[j]).sum();
            let coef = &ineq.a[var];
            let rhs = &ineq.b - known;
            if coef.is_zero() {
                if rhs.is_positive() {
                    return None;
                }
                continue;
            }
            let bound = &rhs / coef;
            if coef.is_positive() {
                if lo.as_ref().is_none_or(|l| bound > *l) {
                    lo = Some(bound);
                }
            } else if hi.as_ref().is_none_or(|h| bound < *h) {
                hi = Some(bound);
            }
        }
        c[var] = match (lo, hi) {
            (Some(l), Some(h)) if l > h => return None,
            (Some(l), _) => l,
            (None, Some(h)) => h,
            (None, None) => Rational::zero(),
        };
    }
    let point: Vec<Rational> = (0..dim)
        .map(|row| basis.iter().zip(&c).map(|(v, cj)| &v[row] * cj).sum())
        .collect();
    point.iter().all(Signed::is_positive).then_some(point)
}
