//! Buchberger's algorithm over the rationals and the Milnor number oracle.
//!
//! Bases are computed for the graded reverse lexicographic order. For a
//! weighted homogeneous germ the Jacobian ideal is graded and the only
//! critical point is the origin, so the dimension of the global quotient
//! equals the Milnor number. For other inputs the quotient splits over the
//! critical points and the origin's share is extracted as the common
//! generalised kernel of the multiplication maps `zᵢ·`.

use std::collections::{BTreeSet, HashMap, VecDeque};

use num_traits::{One, Zero};
use thiserror::Error;

use crate::linalg::{self, Matrix};
use crate::poly::{Monomial, Polynomial};
use crate::weights::{infer_weight_systems, SolutionKind};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroebnerError {
    #[error("S-pair budget of {limit} exhausted")]
    SPairBudget { limit: usize },
    #[error("term budget of {limit} exhausted (intermediate polynomial with {terms} terms)")]
    TermBudget { limit: usize, terms: usize },
    #[error("generators disagree on the variable count")]
    VariableCountMismatch,
    #[error("no nonzero generators")]
    NoGenerators,
    #[error("local Milnor number undetermined: the global quotient is infinite and the ideal is not graded")]
    Indeterminate,
}

/// Resource caps for Buchberger's algorithm.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub max_spairs: usize,
    pub max_terms: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_spairs: 20_000,
            max_terms: 100_000,
        }
    }
}

/// Graded reverse lexicographic order, the only order used here. Its
/// comparison is the `Ord` instance of [`Monomial`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct MonomialOrder;

impl MonomialOrder {
    pub fn name(self) -> &'static str {
        "grevlex"
    }
}

/// A reduced Gröbner basis: monic generators sorted by leading monomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroebnerBasis {
    generators: Vec<Polynomial>,
    nvars: usize,
    order: MonomialOrder,
}

impl GroebnerBasis {
    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn variable_count(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn leading_monomials(&self) -> Vec<&Monomial> {
        self.generators
            .iter()
            .map(|g| g.leading_monomial().expect("nonzero generator"))
            .collect()
    }

    /// Whether the ideal is the whole ring.
    pub fn is_unit(&self) -> bool {
        self.generators
            .iter()
            .any(|g| g.leading_monomial().is_some_and(Monomial::is_one))
    }

    pub fn contains(&self, p: &Polynomial) -> bool {
        normal_form(p, self).is_zero()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Dimension {
    Finite(u64),
    Infinite,
}

impl Dimension {
    pub fn finite(self) -> Option<u64> {
        match self {
            Dimension::Finite(n) => Some(n),
            Dimension::Infinite => None,
        }
    }
}

/// Remainder of `p` on division by `gens` (all nonzero), reducing every term.
fn reduce(p: &Polynomial, gens: &[Polynomial], budget: Option<&Budget>) -> Result<Polynomial, GroebnerError> {
    let n = p.variable_count();
    let mut work = p.clone();
    let mut rem = Polynomial::zero(n);
    let leads: Vec<(&Monomial, &Rational)> = gens
        .iter()
        .map(|g| g.leading_term().expect("nonzero generator"))
        .collect();
    while let Some((m, c)) = work.leading_term() {
        let (m, c) = (m.clone(), c.clone());
        let divisor = leads.iter().position(|(lm, _)| lm.divides(&m));
        match divisor {
            Some(k) => {
                let (lm, lc) = leads[k];
                let q = lm.quotient_of(&m).expect("divides");
                let factor = -(&c / lc);
                work = &work + &gens[k].mul_monomial(&factor, &q);
                if let Some(b) = budget {
                    if work.len() > b.max_terms {
                        return Err(GroebnerError::TermBudget {
                            limit: b.max_terms,
                            terms: work.len(),
                        });
                    }
                }
            }
            None => {
                work = &work - &Polynomial::monomial(c.clone(), m.clone());
                rem = &rem + &Polynomial::monomial(c, m);
            }
        }
    }
    Ok(rem)
}

fn s_polynomial(f: &Polynomial, g: &Polynomial) -> Polynomial {
    let (fm, fc) = f.leading_term().expect("nonzero");
    let (gm, gc) = g.leading_term().expect("nonzero");
    let lcm = fm.lcm(gm);
    let a = f.mul_monomial(&fc.recip(), &fm.quotient_of(&lcm).expect("lcm"));
    let b = g.mul_monomial(&gc.recip(), &gm.quotient_of(&lcm).expect("lcm"));
    &a - &b
}

/// Reduced Gröbner basis of the ideal generated by `gens`.
///
/// Uses the coprime-leading-term and chain criteria with the normal
/// selection strategy (smallest lcm first).
pub fn buchberger(gens: &[Polynomial], budget: &Budget) -> Result<GroebnerBasis, GroebnerError> {
    let nvars = gens.first().ok_or(GroebnerError::NoGenerators)?.variable_count();
    if gens.iter().any(|g| g.variable_count() != nvars) {
        return Err(GroebnerError::VariableCountMismatch);
    }
    let mut basis: Vec<Polynomial> = Vec::new();
    let mut pending: BTreeSet<(Monomial, usize, usize)> = BTreeSet::new();
    let mut done: BTreeSet<(usize, usize)> = BTreeSet::new();

    let push = |basis: &mut Vec<Polynomial>, pending: &mut BTreeSet<_>, h: Polynomial| {
        let h = h.monic();
        let hm = h.leading_monomial().expect("nonzero").clone();
        let k = basis.len();
        for (i, g) in basis.iter().enumerate() {
            let lcm = g.leading_monomial().expect("nonzero").lcm(&hm);
            pending.insert((lcm, i, k));
        }
        basis.push(h);
    };

    for g in gens {
        if g.is_zero() {
            continue;
        }
        let r = if basis.is_empty() {
            g.clone()
        } else {
            reduce(g, &basis, Some(budget))?
        };
        if !r.is_zero() {
            push(&mut basis, &mut pending, r);
        }
    }
    if basis.is_empty() {
        return Err(GroebnerError::NoGenerators);
    }

    let mut processed = 0usize;
    while let Some((lcm, i, j)) = pending.pop_first() {
        done.insert((i, j));
        let li = basis[i].leading_monomial().expect("nonzero");
        let lj = basis[j].leading_monomial().expect("nonzero");
        if li.is_coprime(lj) {
            continue;
        }
        let chain = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && basis[k].leading_monomial().expect("nonzero").divides(&lcm)
                && done.contains(&ordered(i, k))
                && done.contains(&ordered(j, k))
        });
        if chain {
            continue;
        }
        processed += 1;
        if processed > budget.max_spairs {
            return Err(GroebnerError::SPairBudget {
                limit: budget.max_spairs,
            });
        }
        let s = s_polynomial(&basis[i], &basis[j]);
        let r = reduce(&s, &basis, Some(budget))?;
        if !r.is_zero() {
            push(&mut basis, &mut pending, r);
        }
    }

    Ok(GroebnerBasis {
        generators: interreduce(basis)?,
        nvars,
        order: MonomialOrder,
    })
}

fn ordered(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Minimal basis followed by tail reduction.
fn interreduce(basis: Vec<Polynomial>) -> Result<Vec<Polynomial>, GroebnerError> {
    let mut minimal: Vec<Polynomial> = Vec::new();
    let mut sorted = basis;
    sorted.sort_by(|a, b| a.leading_monomial().cmp(&b.leading_monomial()));
    for g in sorted {
        let lm = g.leading_monomial().expect("nonzero");
        if minimal
            .iter()
            .any(|h| h.leading_monomial().expect("nonzero").divides(lm))
        {
            continue;
        }
        minimal.push(g);
    }
    let mut reduced = Vec::with_capacity(minimal.len());
    for k in 0..minimal.len() {
        let g = &minimal[k];
        let (lm, lc) = g.leading_term().expect("nonzero");
        let tail = g - &Polynomial::monomial(lc.clone(), lm.clone());
        let others: Vec<Polynomial> = minimal
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != k)
            .map(|(_, h)| h.clone())
            .collect();
        let tail = if others.is_empty() {
            tail
        } else {
            reduce(&tail, &others, None)?
        };
        let full = &Polynomial::monomial(lc.clone(), lm.clone()) + &tail;
        reduced.push(full.monic());
    }
    Ok(reduced)
}

/// Complete remainder of `p` modulo `gb`; zero iff `p` lies in the ideal.
pub fn normal_form(p: &Polynomial, gb: &GroebnerBasis) -> Polynomial {
    assert_eq!(p.variable_count(), gb.nvars, "variable count mismatch");
    if gb.generators.is_empty() {
        return p.clone();
    }
    reduce(p, &gb.generators, None).expect("unbudgeted reduction")
}

/// Monomials outside the leading-term ideal, when there are finitely many.
pub fn standard_monomials(gb: &GroebnerBasis) -> Option<Vec<Monomial>> {
    let n = gb.nvars;
    let leads = gb.leading_monomials();
    let mut has_pure_power = vec![false; n];
    for m in &leads {
        if m.is_one() {
            return Some(Vec::new());
        }
        if let Some(i) = m.pure_power_variable() {
            has_pure_power[i] = true;
        }
    }
    if !has_pure_power.iter().all(|&b| b) {
        return None;
    }
    // the staircase is an order ideal: breadth-first search from 1
    let mut seen: BTreeSet<Monomial> = BTreeSet::new();
    let mut queue = VecDeque::from([Monomial::one(n)]);
    seen.insert(Monomial::one(n));
    while let Some(m) = queue.pop_front() {
        for i in 0..n {
            let next = m.mul(&Monomial::variable(n, i));
            if seen.contains(&next) || leads.iter().any(|l| l.divides(&next)) {
                continue;
            }
            seen.insert(next.clone());
            queue.push_back(next);
        }
    }
    Some(seen.into_iter().collect())
}

/// `dim k[z]/I`: finite iff every variable has a pure power among the
/// leading monomials.
pub fn quotient_dimension(gb: &GroebnerBasis) -> Dimension {
    match standard_monomials(gb) {
        Some(s) => Dimension::Finite(s.len() as u64),
        None => Dimension::Infinite,
    }
}

/// Dimension of the localisation of `k[z]/I` at the origin, for a
/// zero-dimensional ideal.
pub fn local_dimension_at_origin(gb: &GroebnerBasis) -> Option<u64> {
    let basis = standard_monomials(gb)?;
    let size = basis.len();
    if size == 0 {
        return Some(0);
    }
    let index: HashMap<&Monomial, usize> = basis.iter().enumerate().map(|(k, m)| (m, k)).collect();
    let n = gb.nvars;
    let mut stacked: Matrix = Vec::new();
    for i in 0..n {
        let x = Monomial::variable(n, i);
        let mut mult: Matrix = vec![vec![Rational::zero(); size]; size];
        for (col, b) in basis.iter().enumerate() {
            let image = normal_form(&Polynomial::monomial(Rational::one(), b.mul(&x)), gb);
            for (m, c) in image.terms() {
                mult[index[m]][col] = c.clone();
            }
        }
        // the generalised kernel of multiplication by z_i is ker(M^k) once ranks stabilise
        let mut power = mult.clone();
        let mut r = linalg::rank(&power);
        loop {
            if r == 0 {
                break;
            }
            let next = linalg::mul(&power, &mult);
            let rn = linalg::rank(&next);
            if rn == r {
                break;
            }
            power = next;
            r = rn;
        }
        stacked.extend(power);
    }
    Some((size - linalg::rank(&stacked)) as u64)
}

/// Milnor number `dim 𝒪ₙ/J(f)` at the origin.
pub fn milnor_number(f: &Polynomial, budget: &Budget) -> Result<Dimension, GroebnerError> {
    let jacobian = f.gradient();
    if jacobian.iter().all(Polynomial::is_zero) {
        return Ok(Dimension::Infinite);
    }
    let gb = buchberger(&jacobian, budget)?;
    let graded = infer_weight_systems(f).kind != SolutionKind::None;
    match quotient_dimension(&gb) {
        Dimension::Finite(global) if graded => Ok(Dimension::Finite(global)),
        Dimension::Finite(_) => Ok(Dimension::Finite(
            local_dimension_at_origin(&gb).expect("zero-dimensional"),
        )),
        Dimension::Infinite if graded => Ok(Dimension::Infinite),
        Dimension::Infinite => Err(GroebnerError::Indeterminate),
    }
}

/// Outcome of an isolation check, with a warning when the check could not
/// be completed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsolationCheck {
    pub certificate: crate::engine::IsolationCertificate,
    pub warning: Option<String>,
}

/// Decides whether `f` has an isolated critical point at the origin.
pub fn is_isolated(f: &Polynomial, budget: &Budget) -> IsolationCheck {
    use crate::engine::IsolationCertificate as C;
    match milnor_number(f, budget) {
        Ok(Dimension::Finite(mu)) => IsolationCheck {
            certificate: C::Proven(mu),
            warning: None,
        },
        Ok(Dimension::Infinite) => IsolationCheck {
            certificate: C::Refuted,
            warning: None,
        },
        Err(e) => IsolationCheck {
            certificate: C::Assumed,
            warning: Some(format!("isolation assumed, not proven: {e}")),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::IsolationCertificate;
    use crate::poly::parse_polynomial;

    fn p(text: &str, vars: &[&str]) -> Polynomial {
        let names: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
        parse_polynomial(text, &names).unwrap()
    }

    const XY: [&str; 2] = ["x", "y"];
    const XYZ: [&str; 3] = ["x", "y", "z"];

    fn gb(gens: &[&str], vars: &[&str]) -> GroebnerBasis {
        let gens: Vec<Polynomial> = gens.iter().map(|g| p(g, vars)).collect();
        buchberger(&gens, &Budget::default()).unwrap()
    }

    #[test]
    fn basis_examples() {
        let g = gb(&["3*x^2", "3*y^2"], &XY);
        assert_eq!(g.generators(), &[p("y^2", &XY), p("x^2", &XY)]);
        let f = p("x^3 + y^3", &XY);
        let j = buchberger(&f.gradient(), &Budget::default()).unwrap();
        assert_eq!(j, g);
        let lin = gb(&["x + y", "y"], &XY);
        assert_eq!(lin.generators(), &[p("y", &XY), p("x", &XY)]);
    }

    #[test]
    fn nontrivial_basis_is_reduced() {
        // twisted cubic style ideal
        let g = gb(&["x^2 - y", "x*y - 1"], &XY);
        for gen in g.generators() {
            assert_eq!(gen.leading_term().unwrap().1, &Rational::from_integer(1.into()));
        }
        assert!(g.contains(&p("x^2 - y", &XY)));
        assert!(g.contains(&p("x*y - 1", &XY)));
        assert!(g.contains(&p("y^2 - x", &XY)));
        assert_eq!(quotient_dimension(&g), Dimension::Finite(3));
    }

    #[test]
    fn normal_form_examples() {
        let g = gb(&["x^2", "y^2"], &XY);
        assert!(normal_form(&p("x^2", &XY), &g).is_zero());
        assert_eq!(normal_form(&p("x*y", &XY), &g), p("x*y", &XY));
        assert_eq!(normal_form(&p("x^2 + x*y", &XY), &g), p("x*y", &XY));
    }

    #[test]
    fn quotient_dimension_examples() {
        assert_eq!(quotient_dimension(&gb(&["x^2", "y^2"], &XY)), Dimension::Finite(4));
        assert_eq!(quotient_dimension(&gb(&["x"], &XY)), Dimension::Infinite);
        let f = p("x^3 + y^3 + z^3", &XYZ);
        let j = buchberger(&f.gradient(), &Budget::default()).unwrap();
        assert_eq!(quotient_dimension(&j), Dimension::Finite(8));
    }

    #[test]
    fn milnor_examples() {
        let b = Budget::default();
        let vars = ["z1", "z2", "z3", "z4"];
        assert_eq!(
            milnor_number(&p("z1*z4 + z1^10 + z2^5 + z3^5", &vars), &b),
            Ok(Dimension::Finite(16))
        );
        assert_eq!(milnor_number(&p("x^2 + y^2", &XY), &b), Ok(Dimension::Finite(1)));
        assert_eq!(milnor_number(&p("x^2 + y^3", &XY), &b), Ok(Dimension::Finite(2)));
    }

    #[test]
    fn local_part_is_extracted_for_non_graded_input() {
        // critical points at the origin (mu = 4) and at x = -2/3
        let f = p("x^3 + x^2 + y^3 + z^3", &XYZ);
        let j = buchberger(&f.gradient(), &Budget::default()).unwrap();
        assert_eq!(quotient_dimension(&j), Dimension::Finite(8));
        assert_eq!(milnor_number(&f, &Budget::default()), Ok(Dimension::Finite(4)));
    }

    #[test]
    fn isolation_examples() {
        let b = Budget::default();
        assert_eq!(
            is_isolated(&p("x^3 + y^3 + z^3", &XYZ), &b).certificate,
            IsolationCertificate::Proven(8)
        );
        assert_eq!(
            is_isolated(&p("x*y", &XYZ), &b).certificate,
            IsolationCertificate::Refuted
        );
        let tiny = Budget {
            max_spairs: 0,
            max_terms: 1_000,
        };
        let check = is_isolated(&p("x^2*y + y^4", &XY), &tiny);
        assert_eq!(check.certificate, IsolationCertificate::Assumed);
        assert!(check.warning.is_some());
    }

    #[test]
    fn budget_errors_are_reported() {
        let tiny = Budget {
            max_spairs: 0,
            max_terms: 1_000,
        };
        let gens = vec![p("x^2 - y", &XY), p("x*y - 1", &XY)];
        assert_eq!(buchberger(&gens, &tiny), Err(GroebnerError::SPairBudget { limit: 0 }));
        assert_eq!(buchberger(&[], &tiny), Err(GroebnerError::NoGenerators));
        assert_eq!(
            buchberger(&[Polynomial::zero(2)], &tiny),
            Err(GroebnerError::NoGenerators)
        );
    }
}
