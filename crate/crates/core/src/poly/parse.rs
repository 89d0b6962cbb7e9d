//! Text grammar for polynomials.
//!
//! ```text
//! polynomial := sign? term (('+' | '-') term)*
//! term       := factor ('*' factor)*
//! factor     := rational | variable ('^' integer)?
//! rational   := integer ('/' integer)?
//! variable   := [A-Za-z_][A-Za-z0-9_]*
//! ```
//!
//! Whitespace between tokens is ignored. Decimal literals such as `1.5`
//! are rejected; coefficients must be integers or `p/q` fractions.

use std::cmp::Ordering;
use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use super::{Monomial, Polynomial};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("unknown variable `{name}` at position {position}")]
    UnknownVariable { name: String, position: usize },
    #[error("non-rational coefficient literal `{literal}` at position {position}")]
    NonRationalLiteral { literal: String, position: usize },
    #[error("zero denominator at position {position}")]
    ZeroDenominator { position: usize },
    #[error("exponent too large at position {position}")]
    ExponentOverflow { position: usize },
    #[error("duplicate variable name `{0}`")]
    DuplicateVariable(String),
    #[error("no variables: the polynomial is constant and no variable list was given")]
    NoVariables,
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Token)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            '+' => Token::Plus,
            '-' => Token::Minus,
            '*' => Token::Star,
            '/' => Token::Slash,
            '^' => Token::Caret,
            '0'..='9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let is_decimal = i < bytes.len() && (bytes[i] == b'.' || bytes[i] == b'e' || bytes[i] == b'E');
                if is_decimal {
                    let mut j = i + 1;
                    while j < bytes.len() && (bytes[j].is_ascii_alphanumeric() || bytes[j] == b'.') {
                        j += 1;
                    }
                    return Err(ParseError::NonRationalLiteral {
                        literal: text[start..j].to_string(),
                        position: start,
                    });
                }
                let digits = &text[start..i];
                out.push((start, Token::Int(digits.parse().expect("ascii digits"))));
                continue;
            }
            '.' => {
                let mut j = i + 1;
                while j < bytes.len() && bytes[j].is_ascii_digit() {
                    j += 1;
                }
                return Err(ParseError::NonRationalLiteral {
                    literal: text[start..j].to_string(),
                    position: start,
                });
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((start, Token::Ident(text[start..i].to_string())));
                continue;
            }
            _ => {
                let ch = text[start..].chars().next().unwrap_or('?');
                return Err(ParseError::Syntax {
                    position: start,
                    message: format!("unexpected character `{ch}`"),
                });
            }
        };
        out.push((start, tok));
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: &'a [(usize, Token)],
    pos: usize,
    end: usize,
    index: &'a HashMap<&'a str, usize>,
    nvars: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn position(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn syntax(&self, message: &str) -> ParseError {
        ParseError::Syntax {
            position: self.position(),
            message: message.to_string(),
        }
    }

    fn polynomial(&mut self) -> Result<Polynomial, ParseError> {
        let mut out = Polynomial::zero(self.nvars);
        let mut sign = match self.peek() {
            Some(Token::Minus) => {
                self.pos += 1;
                -Rational::one()
            }
            Some(Token::Plus) => {
                self.pos += 1;
                Rational::one()
            }
            _ => Rational::one(),
        };
        loop {
            let (m, c) = self.term()?;
            out.add_term(m, c * &sign);
            sign = match self.peek() {
                None => break,
                Some(Token::Plus) => Rational::one(),
                Some(Token::Minus) => -Rational::one(),
                Some(_) => return Err(self.syntax("expected `+`, `-` or `*`")),
            };
            self.pos += 1;
        }
        Ok(out)
    }

    fn term(&mut self) -> Result<(Monomial, Rational), ParseError> {
        let mut coeff = Rational::one();
        let mut exps = vec![0u32; self.nvars];
        self.factor(&mut coeff, &mut exps)?;
        while let Some(Token::Star) = self.peek() {
            self.pos += 1;
            self.factor(&mut coeff, &mut exps)?;
        }
        Ok((Monomial::new(exps), coeff))
    }

    fn factor(&mut self, coeff: &mut Rational, exps: &mut [u32]) -> Result<(), ParseError> {
        let at = self.position();
        match self.tokens.get(self.pos).map(|(_, t)| t.clone()) {
            Some(Token::Int(n)) => {
                self.pos += 1;
                let mut value = Rational::from_integer(n);
                if let Some(Token::Slash) = self.peek() {
                    self.pos += 1;
                    let den_at = self.position();
                    match self.peek().cloned() {
                        Some(Token::Int(d)) => {
                            self.pos += 1;
                            if d.is_zero() {
                                return Err(ParseError::ZeroDenominator { position: den_at });
                            }
                            value /= Rational::from_integer(d);
                        }
                        _ => return Err(self.syntax("expected integer denominator after `/`")),
                    }
                }
                if let Some(Token::Caret) = self.peek() {
                    return Err(self.syntax("exponents apply to variables only"));
                }
                *coeff *= value;
                Ok(())
            }
            Some(Token::Ident(name)) => {
                self.pos += 1;
                let i = *self.index.get(name.as_str()).ok_or(ParseError::UnknownVariable {
                    name: name.clone(),
                    position: at,
                })?;
                let mut e = 1u32;
                if let Some(Token::Caret) = self.peek() {
                    self.pos += 1;
                    let exp_at = self.position();
                    match self.peek().cloned() {
                        Some(Token::Int(k)) => {
                            self.pos += 1;
                            e = u32::try_from(k).map_err(|_| ParseError::ExponentOverflow { position: exp_at })?;
                        }
                        _ => return Err(self.syntax("expected nonnegative integer exponent")),
                    }
                }
                exps[i] = exps[i]
                    .checked_add(e)
                    .ok_or(ParseError::ExponentOverflow { position: at })?;
                Ok(())
            }
            Some(Token::Slash) => Err(self.syntax("`/` must follow an integer numerator")),
            Some(_) => Err(self.syntax("expected a number or a variable")),
            None => Err(self.syntax("unexpected end of input")),
        }
    }
}

/// Parses `text` over the given ordered variable names.
pub fn parse_polynomial(text: &str, variables: &[String]) -> Result<Polynomial, ParseError> {
    let mut index = HashMap::new();
    for (i, v) in variables.iter().enumerate() {
        if index.insert(v.as_str(), i).is_some() {
            return Err(ParseError::DuplicateVariable(v.clone()));
        }
    }
    let tokens = tokenize(text)?;
    if tokens.is_empty() {
        return Err(ParseError::Syntax {
            position: 0,
            message: "empty input".into(),
        });
    }
    let mut parser = Parser {
        tokens: &tokens,
        pos: 0,
        end: text.len(),
        index: &index,
        nvars: variables.len(),
    };
    parser.polynomial()
}

/// Parses `text`, taking the variables to be every identifier that occurs,
/// sorted by [`natural_order`] (so `z2` precedes `z10`).
pub fn parse_with_inferred_variables(text: &str) -> Result<(Polynomial, Vec<String>), ParseError> {
    let tokens = tokenize(text)?;
    let mut names: Vec<String> = Vec::new();
    for (_, t) in &tokens {
        if let Token::Ident(name) = t {
            if !names.contains(name) {
                names.push(name.clone());
            }
        }
    }
    if names.is_empty() {
        return Err(ParseError::NoVariables);
    }
    names.sort_by(|a, b| natural_order(a, b));
    let poly = parse_polynomial(text, &names)?;
    Ok((poly, names))
}

/// Orders identifiers by alphabetic prefix, then by numeric suffix.
pub fn natural_order(a: &str, b: &str) -> Ordering {
    fn split(s: &str) -> (&str, Option<u64>, &str) {
        let cut = s.trim_end_matches(|c: char| c.is_ascii_digit()).len();
        let (head, digits) = s.split_at(cut);
        (head, digits.parse().ok(), digits)
    }
    let (ha, na, da) = split(a);
    let (hb, nb, db) = split(b);
    ha.cmp(hb)
        .then(na.cmp(&nb))
        .then(da.len().cmp(&db.len()))
        .then(a.cmp(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn remark_polynomial_support() {
        let vars = names(&["z1", "z2", "z3", "z4"]);
        let f = parse_polynomial("z1*z4 + z1^10 + z2^5 + z3^5", &vars).unwrap();
        assert_eq!(f.len(), 4);
        let mut support: Vec<Vec<u32>> = f.support().map(|m| m.exponents().to_vec()).collect();
        support.sort();
        assert_eq!(
            support,
            vec![vec![0, 0, 5, 0], vec![0, 5, 0, 0], vec![1, 0, 0, 1], vec![10, 0, 0, 0]]
        );
    }

    #[test]
    fn zero_and_cancellation() {
        let vars = names(&["x", "y"]);
        assert!(parse_polynomial("0", &vars).unwrap().is_zero());
        let f = parse_polynomial("x^2 - x^2 + 3*y", &vars).unwrap();
        assert_eq!(f.len(), 1);
        assert_eq!(f.coefficient(&Monomial::new(vec![0, 1])), Some(&rat(3, 1)));
    }

    #[test]
    fn rationals_and_signs() {
        let vars = names(&["x", "y"]);
        let f = parse_polynomial(" - 1/2 * x*y  +2/4*x * y+x", &vars).unwrap();
        assert_eq!(f, Polynomial::variable(2, 0));
        let g = parse_polynomial("x*x*3", &vars).unwrap();
        assert_eq!(g.coefficient(&Monomial::new(vec![2, 0])), Some(&rat(3, 1)));
    }

    #[test]
    fn errors_carry_positions() {
        let vars = names(&["x", "y"]);
        assert_eq!(
            parse_polynomial("x + w", &vars),
            Err(ParseError::UnknownVariable {
                name: "w".into(),
                position: 4
            })
        );
        assert!(matches!(
            parse_polynomial("1.5*x", &vars),
            Err(ParseError::NonRationalLiteral { position: 0, .. })
        ));
        assert!(matches!(
            parse_polynomial("x +", &vars),
            Err(ParseError::Syntax { position: 3, .. })
        ));
        assert!(matches!(
            parse_polynomial("x y", &vars),
            Err(ParseError::Syntax { position: 2, .. })
        ));
        assert!(matches!(
            parse_polynomial("x/0", &vars),
            Err(ParseError::Syntax { position: 1, .. })
        ));
        assert_eq!(
            parse_polynomial("3/0*x", &vars),
            Err(ParseError::ZeroDenominator { position: 2 })
        );
        assert_eq!(
            parse_polynomial("x", &names(&["x", "x"])),
            Err(ParseError::DuplicateVariable("x".into()))
        );
        assert!(matches!(
            parse_polynomial("x^99999999999", &vars),
            Err(ParseError::ExponentOverflow { .. })
        ));
        assert!(matches!(
            parse_polynomial("x # y", &vars),
            Err(ParseError::Syntax { position: 2, .. })
        ));
    }

    #[test]
    fn inferred_variables_use_natural_order() {
        let (f, vars) = parse_with_inferred_variables("z10*z2 + z1^2 + z2^3").unwrap();
        assert_eq!(vars, names(&["z1", "z2", "z10"]));
        assert_eq!(f.variable_count(), 3);
        let (_, vars) = parse_with_inferred_variables("y^2 + x^3").unwrap();
        assert_eq!(vars, names(&["x", "y"]));
        assert_eq!(parse_with_inferred_variables("5"), Err(ParseError::NoVariables));
    }
}
