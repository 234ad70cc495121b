//! Tiny parser for sparse polynomial expressions such as `y^2-x^3`,
//! `2*x*y + x^4` or `2u+1`. No parentheses: an expression is a signed sum
//! of monomials, each an optional integer times powers of named variables.

use crate::error::{Error, Result};
use crate::field::{Elem, FiniteField};

/// Monomial exponents (one per variable, in the order given to [`parse`])
/// with an integer coefficient.
pub type RawTerm = (Vec<u32>, i64);

pub fn parse(src: &str, vars: &[char]) -> Result<Vec<RawTerm>> {
    let chars: Vec<char> = src.chars().filter(|c| !c.is_whitespace()).collect();
    if chars.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let mut pos = 0;
    let mut terms: Vec<RawTerm> = Vec::new();
    while pos < chars.len() {
        let mut sign = 1i64;
        while pos < chars.len() && (chars[pos] == '+' || chars[pos] == '-') {
            if chars[pos] == '-' {
                sign = -sign;
            }
            pos += 1;
        }
        let (exps, coeff) = parse_term(&chars, &mut pos, vars, src)?;
        terms.push((exps, sign * coeff));
        if pos < chars.len() && chars[pos] != '+' && chars[pos] != '-' {
            return Err(Error::Parse(format!(
                "unexpected {:?} at offset {pos} in {src:?}",
                chars[pos]
            )));
        }
    }
    Ok(terms)
}

fn parse_number(chars: &[char], pos: &mut usize) -> Option<u64> {
    let start = *pos;
    while *pos < chars.len() && chars[*pos].is_ascii_digit() {
        *pos += 1;
    }
    if *pos == start {
        return None;
    }
    chars[start..*pos].iter().collect::<String>().parse().ok()
}

fn parse_term(chars: &[char], pos: &mut usize, vars: &[char], src: &str) -> Result<RawTerm> {
    let mut exps = vec![0u32; vars.len()];
    let mut coeff = 1i64;
    let mut factors = 0;
    loop {
        if *pos >= chars.len() {
            break;
        }
        let c = chars[*pos];
        if c.is_ascii_digit() {
            let n = parse_number(chars, pos).ok_or_else(|| Error::Parse(format!("bad number in {src:?}")))?;
            coeff = coeff
                .checked_mul(n as i64)
                .ok_or_else(|| Error::Parse(format!("coefficient overflow in {src:?}")))?;
        } else if let Some(v) = vars.iter().position(|&x| x == c) {
            *pos += 1;
            let mut e = 1u32;
            if *pos < chars.len() && chars[*pos] == '^' {
                *pos += 1;
                e = parse_number(chars, pos).ok_or_else(|| Error::Parse(format!("missing exponent in {src:?}")))?
                    as u32;
            }
            exps[v] += e;
        } else {
            break;
        }
        factors += 1;
        if *pos < chars.len() && chars[*pos] == '*' {
            *pos += 1;
            if *pos >= chars.len() {
                return Err(Error::Parse(format!("dangling '*' in {src:?}")));
            }
        }
    }
    if factors == 0 {
        return Err(Error::Parse(format!("expected a term at offset {} in {src:?}", *pos)));
    }
    Ok((exps, coeff))
}

/// Parse a field element written as an integer or a polynomial in the
/// generator `u` (e.g. `"2"`, `"-1"`, `"u+2"`).
pub fn parse_element(field: &FiniteField, src: &str) -> Result<Elem> {
    let terms = parse(src, &['u'])?;
    if field.k() == 1 && terms.iter().any(|(e, _)| e[0] > 0) {
        return Err(Error::Parse(format!(
            "{src:?} uses the generator u but F_{} is a prime field",
            field.p()
        )));
    }
    let u = field.generator();
    Ok(terms.iter().fold(Elem::ZERO, |acc, (e, c)| {
        let term = field.mul(field.from_int(*c), field.pow(u, e[0] as u64));
        field.add(acc, term)
    }))
}
