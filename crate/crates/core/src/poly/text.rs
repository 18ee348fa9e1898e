//! Plain-text polynomial format.
//!
//! One term per line: an optional rational coefficient `n` or `n/d`
//! followed by variable powers such as `x^2 y w^3`. A bare variable means
//! exponent one and omitted variables mean exponent zero. `#` starts a
//! comment. The bidegree is inferred from the terms and must be shared by
//! all of them.

use std::str::FromStr;

use num_traits::{One, Zero};
use thiserror::Error;

use super::biform::{bidegree_of, monomial_string, Exponent};
use super::{BiForm, Var};
use crate::Rational;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: bad coefficient `{token}`")]
    BadCoefficient { line: usize, token: String },
    #[error("line {line}: unknown variable in `{token}`")]
    UnknownVariable { line: usize, token: String },
    #[error("line {line}: bad exponent in `{token}`")]
    BadExponent { line: usize, token: String },
    #[error("line {line}: term has bidegree {found:?}, expected {expected:?}")]
    Bidegree { line: usize, expected: (u32, u32), found: (u32, u32) },
}

/// Parse a form. `expected` fixes the bidegree (and is the bidegree of an
/// empty input); otherwise it is taken from the first term.
pub fn parse_biform(text: &str, expected: Option<(u32, u32)>) -> Result<BiForm<Rational>, ParseError> {
    let mut bidegree = expected;
    let mut terms: Vec<(Exponent, Rational)> = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let (exp, coeff) = parse_term(body, line)?;
        let found = bidegree_of(&exp);
        match bidegree {
            Some(b) if b != found => {
                return Err(ParseError::Bidegree { line, expected: b, found });
            }
            None => bidegree = Some(found),
            _ => {}
        }
        terms.push((exp, coeff));
    }
    let bidegree = bidegree.unwrap_or((0, 0));
    Ok(BiForm::from_terms(bidegree, terms).expect("bidegrees checked while parsing"))
}

fn parse_term(body: &str, line: usize) -> Result<(Exponent, Rational), ParseError> {
    let mut exp = [0u32; 6];
    let mut coeff = Rational::one();
    for (i, mut token) in body.split_whitespace().enumerate() {
        // a sign directly on a variable, as in `-x^3`
        if i == 0 && token.len() > 1 && token[1..].starts_with(|c: char| c.is_ascii_alphabetic()) {
            if let Some(rest) = token.strip_prefix('-') {
                coeff = -coeff;
                token = rest;
            } else if let Some(rest) = token.strip_prefix('+') {
                token = rest;
            }
        }
        let starts_numeric = token.starts_with(|c: char| c.is_ascii_digit() || c == '-' || c == '+');
        if i == 0 && starts_numeric {
            let t = token.strip_prefix('+').unwrap_or(token);
            coeff = Rational::from_str(t)
                .map_err(|_| ParseError::BadCoefficient { line, token: token.to_string() })?;
            continue;
        }
        let (name, power) = match token.split_once('^') {
            Some((name, p)) => {
                let p = p
                    .parse::<u32>()
                    .map_err(|_| ParseError::BadExponent { line, token: token.to_string() })?;
                (name, p)
            }
            None => (token, 1),
        };
        let var = Var::from_name(name)
            .ok_or_else(|| ParseError::UnknownVariable { line, token: token.to_string() })?;
        exp[var.index()] += power;
    }
    Ok((exp, coeff))
}

/// Canonical text rendering: one term per line in descending lex order,
/// each line `<coefficient> <monomial>`. Parses back to the same form.
pub fn format_biform(f: &BiForm<Rational>) -> String {
    let mut out = String::new();
    for (e, c) in f.terms().rev() {
        if c.is_zero() {
            continue;
        }
        let mono = monomial_string(e, " ");
        if mono.is_empty() {
            out.push_str(&format!("{c}\n"));
        } else {
            out.push_str(&format!("{c} {mono}\n"));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, qi};

    #[test]
    fn parses_terms_and_comments() {
        let f = parse_biform("# perturbation\n1/20 y^3 u w^2\n-3 x^2 y w^3  # fibre term\n\n", None).unwrap();
        assert_eq!(f.bidegree(), (3, 3));
        assert_eq!(f.coeff(&[0, 3, 0, 1, 0, 2]), q(1, 20));
        assert_eq!(f.coeff(&[2, 1, 0, 0, 0, 3]), qi(-3));
    }

    #[test]
    fn bare_variables_and_repeats() {
        let f = parse_biform("x y z\n2 x x z", None).unwrap();
        assert_eq!(f.coeff(&[1, 1, 1, 0, 0, 0]), qi(1));
        assert_eq!(f.coeff(&[2, 0, 1, 0, 0, 0]), qi(2));
    }

    #[test]
    fn sign_on_a_variable() {
        let f = parse_biform("-y^3 v w^2\n+x y z u w^2", None).unwrap();
        assert_eq!(f.coeff(&[0, 3, 0, 0, 1, 2]), qi(-1));
        assert_eq!(f.coeff(&[1, 1, 1, 1, 0, 2]), qi(1));
    }

    #[test]
    fn rejects_mixed_bidegrees() {
        let err = parse_biform("x u\nx^2", None).unwrap_err();
        assert!(matches!(err, ParseError::Bidegree { line: 2, .. }));
    }

    #[test]
    fn rejects_junk() {
        assert!(matches!(parse_biform("3/0 x", None), Err(ParseError::BadCoefficient { .. })));
        assert!(matches!(parse_biform("t^2", None), Err(ParseError::UnknownVariable { .. })));
        assert!(matches!(parse_biform("x^a", None), Err(ParseError::BadExponent { .. })));
    }

    #[test]
    fn empty_input_uses_expected_bidegree() {
        let f = parse_biform("# nothing\n", Some((3, 3))).unwrap();
        assert!(f.is_zero());
        assert_eq!(f.bidegree(), (3, 3));
    }

    #[test]
    fn canonical_format_round_trips() {
        let f = parse_biform("1/2 z^3 u w^2\n-1 x^2 y w^3\n7 y^3 v w^2", None).unwrap();
        let text = format_biform(&f);
        assert_eq!(text, "-1 x^2 y w^3\n7 y^3 v w^2\n1/2 z^3 u w^2\n");
        assert_eq!(parse_biform(&text, None).unwrap(), f);
    }
}
