//! Dense univariate polynomials over a [`FiniteField`].
//!
//! Coefficients are stored low degree first and kept trimmed, so the zero
//! polynomial is the empty vector.

use crate::field::{Elem, FiniteField};

pub type UPoly = Vec<Elem>;

pub fn trim(f: &mut UPoly) {
    while matches!(f.last(), Some(c) if c.is_zero()) {
        f.pop();
    }
}

pub fn degree(f: &[Elem]) -> Option<usize> {
    f.iter().rposition(|c| !c.is_zero())
}

pub fn x() -> UPoly {
    vec![Elem::ZERO, Elem::ONE]
}

pub fn add(field: &FiniteField, a: &[Elem], b: &[Elem]) -> UPoly {
    let n = a.len().max(b.len());
    let mut out: UPoly = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(Elem::ZERO);
            let y = b.get(i).copied().unwrap_or(Elem::ZERO);
            field.add(x, y)
        })
        .collect();
    trim(&mut out);
    out
}

pub fn sub(field: &FiniteField, a: &[Elem], b: &[Elem]) -> UPoly {
    let n = a.len().max(b.len());
    let mut out: UPoly = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(Elem::ZERO);
            let y = b.get(i).copied().unwrap_or(Elem::ZERO);
            field.sub(x, y)
        })
        .collect();
    trim(&mut out);
    out
}

pub fn mul(field: &FiniteField, a: &[Elem], b: &[Elem]) -> UPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Elem::ZERO; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = field.add(out[i + j], field.mul(x, y));
        }
    }
    trim(&mut out);
    out
}

/// Remainder of `a` modulo a nonzero `b`.
pub fn rem(field: &FiniteField, a: &[Elem], b: &[Elem]) -> UPoly {
    let db = degree(b).expect("division by the zero polynomial");
    let lead_inv = field.inv(b[db]);
    let mut r: UPoly = a.to_vec();
    trim(&mut r);
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let c = field.mul(r[dr], lead_inv);
        let shift = dr - db;
        for (i, &bi) in b[..=db].iter().enumerate() {
            r[shift + i] = field.sub(r[shift + i], field.mul(c, bi));
        }
        trim(&mut r);
    }
    r
}

pub fn monic(field: &FiniteField, f: &[Elem]) -> UPoly {
    match degree(f) {
        None => Vec::new(),
        Some(d) => {
            let inv = field.inv(f[d]);
            f[..=d].iter().map(|&c| field.mul(c, inv)).collect()
        }
    }
}

/// Monic gcd; `gcd(0, 0) = 0`.
pub fn gcd(field: &FiniteField, a: &[Elem], b: &[Elem]) -> UPoly {
    let mut a: UPoly = a.to_vec();
    let mut b: UPoly = b.to_vec();
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = rem(field, &a, &b);
        a = b;
        b = r;
    }
    monic(field, &a)
}

pub fn derivative(field: &FiniteField, f: &[Elem]) -> UPoly {
    let mut out: UPoly = f
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| field.mul(field.from_int(i as i64), c))
        .collect();
    trim(&mut out);
    out
}

pub fn eval(field: &FiniteField, f: &[Elem], x: Elem) -> Elem {
    f.iter()
        .rev()
        .fold(Elem::ZERO, |acc, &c| field.add(field.mul(acc, x), c))
}

/// `base^e mod modulus` by square-and-multiply.
pub fn powmod(field: &FiniteField, base: &[Elem], mut e: u64, modulus: &[Elem]) -> UPoly {
    let mut result: UPoly = rem(field, &[Elem::ONE], modulus);
    let mut b = rem(field, base, modulus);
    while e > 0 {
        if e & 1 == 1 {
            result = rem(field, &mul(field, &result, &b), modulus);
        }
        e >>= 1;
        if e > 0 {
            b = rem(field, &mul(field, &b, &b), modulus);
        }
    }
    result
}

/// Number of distinct roots of `f` in the degree-`m` extension of `field`,
/// i.e. `deg gcd(f, x^(|F|^m) - x)`. `f` must be nonzero.
pub fn count_roots_in_extension(field: &FiniteField, f: &[Elem], m: u32) -> usize {
    let d = degree(f).expect("zero polynomial has every element as a root");
    if d == 0 {
        return 0;
    }
    let f = monic(field, f);
    let mut h = rem(field, &x(), &f);
    for _ in 0..m {
        h = powmod(field, &h, field.order(), &f);
    }
    let g = gcd(field, &f, &sub(field, &h, &x()));
    degree(&g).unwrap_or(0)
}

/// True when `f` has no repeated factor over the algebraic closure.
pub fn is_squarefree(field: &FiniteField, f: &[Elem]) -> bool {
    match degree(f) {
        None => false,
        Some(0) => true,
        Some(_) => {
            let g = gcd(field, f, &derivative(field, f));
            degree(&g) == Some(0)
        }
    }
}
