//! Sparse bivariate polynomials `f(x, y)` used as local equations.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::expr;
use crate::field::{Elem, FiniteField};

/// Map from exponent pair `(a, b)` (for `x^a y^b`) to a nonzero coefficient.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct BiPoly {
    terms: BTreeMap<(u32, u32), Elem>,
}

impl BiPoly {
    pub fn zero() -> Self {
        BiPoly::default()
    }

    pub fn from_terms<I>(field: &FiniteField, terms: I) -> Self
    where
        I: IntoIterator<Item = ((u32, u32), Elem)>,
    {
        let mut out = BiPoly::zero();
        for (e, c) in terms {
            out.add_term(field, e, c);
        }
        out
    }

    /// Parse an expression in `x` and `y` with integer coefficients.
    pub fn parse(field: &FiniteField, src: &str) -> Result<Self> {
        let raw = expr::parse(src, &['x', 'y'])?;
        let f = BiPoly::from_terms(field, raw.into_iter().map(|(e, c)| ((e[0], e[1]), field.from_int(c))));
        if f.is_zero() {
            return Err(Error::InvalidLocalEquation(format!(
                "{src:?} is zero over F_{}",
                field.order()
            )));
        }
        Ok(f)
    }

    pub fn add_term(&mut self, field: &FiniteField, e: (u32, u32), c: Elem) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_insert(Elem::ZERO);
        *entry = field.add(*entry, c);
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = ((u32, u32), Elem)> + '_ {
        self.terms.iter().map(|(&e, &c)| (e, c))
    }

    pub fn coeff(&self, a: u32, b: u32) -> Elem {
        self.terms.get(&(a, b)).copied().unwrap_or(Elem::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Least total degree of a nonzero term (`None` for the zero polynomial).
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(|&(a, b)| a + b).min()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|&(a, b)| a + b).max()
    }

    pub fn eval(&self, field: &FiniteField, x: Elem, y: Elem) -> Elem {
        self.terms().fold(Elem::ZERO, |acc, ((a, b), c)| {
            let t = field.mul(c, field.mul(field.pow(x, a as u64), field.pow(y, b as u64)));
            field.add(acc, t)
        })
    }

    /// Apply `g` to every coefficient (e.g. a field embedding).
    pub fn map_coeffs(&self, dst: &FiniteField, g: impl Fn(Elem) -> Elem) -> Self {
        BiPoly::from_terms(dst, self.terms().map(|(e, c)| (e, g(c))))
    }

    pub fn display(&self, field: &FiniteField) -> String {
        Display { f: self, field }.to_string()
    }
}

struct Display<'a> {
    f: &'a BiPoly,
    field: &'a FiniteField,
}

impl fmt::Display for Display<'_> {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.f.is_zero() {
            return write!(out, "0");
        }
        let mut first = true;
        // Low total degree first, then by y-exponent.
        let mut terms: Vec<_> = self.f.terms().collect();
        terms.sort_by_key(|&((a, b), _)| (a + b, b));
        for ((a, b), c) in terms {
            if !first {
                write!(out, " + ")?;
            }
            first = false;
            let mono = match (a, b) {
                (0, 0) => String::new(),
                _ => {
                    let px = match a {
                        0 => String::new(),
                        1 => "x".into(),
                        _ => format!("x^{a}"),
                    };
                    let py = match b {
                        0 => String::new(),
                        1 => "y".into(),
                        _ => format!("y^{b}"),
                    };
                    px + &py
                }
            };
            let cs = self.field.format(c);
            if mono.is_empty() {
                write!(out, "{cs}")?;
            } else if c == Elem::ONE {
                write!(out, "{mono}")?;
            } else if cs.contains('+') {
                write!(out, "({cs}){mono}")?;
            } else {
                write!(out, "{cs}{mono}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;

    #[test]
    fn parse_and_order() {
        let f3 = make_field(3, 1).unwrap();
        let f = BiPoly::parse(&f3, "y^2-x^2-x^3").unwrap();
        assert_eq!(f.order(), Some(2));
        assert_eq!(f.coeff(2, 0), Elem(2));
        assert_eq!(BiPoly::parse(&f3, "x^3-y^5").unwrap().order(), Some(3));
        assert!(BiPoly::parse(&f3, "3x").is_err());
        assert_eq!(f.display(&f3), "2x^2 + y^2 + 2x^3");
    }

    #[test]
    fn terms_cancel() {
        let f5 = make_field(5, 1).unwrap();
        let f = BiPoly::parse(&f5, "x*y + 4x*y + y").unwrap();
        assert_eq!(f.terms().count(), 1);
        assert_eq!(f.eval(&f5, Elem(3), Elem(2)), Elem(2));
    }
}
