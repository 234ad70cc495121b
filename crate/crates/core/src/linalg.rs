//! Subspaces of `F^n` kept in reduced row-echelon form.
//!
//! Rows are sorted by pivot column, every pivot is 1 and is the only nonzero
//! entry in its column, so two subspaces are equal exactly when their row
//! lists are equal.

use crate::field::{Elem, FiniteField};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    dim: usize,
    rows: Vec<Vec<Elem>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(dim: usize) -> Self {
        Subspace {
            dim,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(dim: usize) -> Self {
        let rows = (0..dim)
            .map(|i| {
                let mut r = vec![Elem::ZERO; dim];
                r[i] = Elem::ONE;
                r
            })
            .collect();
        Subspace {
            dim,
            rows,
            pivots: (0..dim).collect(),
        }
    }

    pub fn spanned_by<I>(field: &FiniteField, dim: usize, vectors: I) -> Self
    where
        I: IntoIterator<Item = Vec<Elem>>,
    {
        let mut s = Subspace::zero(dim);
        for v in vectors {
            s.insert(field, v);
        }
        s
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn codim(&self) -> usize {
        self.dim - self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<Elem>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Subtract pivot components in place; `v` ends up zero iff it was in the span.
    pub fn reduce(&self, field: &FiniteField, v: &mut [Elem]) {
        for (row, &piv) in self.rows.iter().zip(&self.pivots) {
            let c = v[piv];
            if c.is_zero() {
                continue;
            }
            for (x, &r) in v.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x = field.sub(*x, field.mul(c, r));
                }
            }
        }
    }

    pub fn contains(&self, field: &FiniteField, v: &[Elem]) -> bool {
        let mut w = v.to_vec();
        self.reduce(field, &mut w);
        w.iter().all(|x| x.is_zero())
    }

    /// Add `v` to the span. Returns true if the rank grew.
    pub fn insert(&mut self, field: &FiniteField, mut v: Vec<Elem>) -> bool {
        debug_assert_eq!(v.len(), self.dim);
        self.reduce(field, &mut v);
        let Some(piv) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = field.inv(v[piv]);
        for x in v.iter_mut() {
            *x = field.mul(*x, inv);
        }
        for row in self.rows.iter_mut() {
            let c = row[piv];
            if c.is_zero() {
                continue;
            }
            for (x, &r) in row.iter_mut().zip(&v) {
                if !r.is_zero() {
                    *x = field.sub(*x, field.mul(c, r));
                }
            }
        }
        let at = self.pivots.partition_point(|&p| p < piv);
        self.pivots.insert(at, piv);
        self.rows.insert(at, v);
        true
    }

    pub fn is_subspace_of(&self, field: &FiniteField, other: &Subspace) -> bool {
        self.rows.iter().all(|r| other.contains(field, r))
    }

    /// Canonical byte encoding (one byte per entry for fields of order <= 256).
    pub fn encode(&self, field: &FiniteField) -> Vec<u8> {
        let wide = field.order() > 256;
        let mut out = Vec::with_capacity(self.rows.len() * self.dim * if wide { 4 } else { 1 });
        for row in &self.rows {
            for x in row {
                if wide {
                    out.extend_from_slice(&(x.0 as u32).to_le_bytes());
                } else {
                    out.push(x.0 as u8);
                }
            }
        }
        out
    }
}

/// `sum_i v_i * images[i]` where `images[i]` is the image of the i-th basis vector.
pub fn apply(field: &FiniteField, images: &[Vec<Elem>], v: &[Elem]) -> Vec<Elem> {
    let n = images.first().map_or(0, |r| r.len());
    let mut out = vec![Elem::ZERO; n];
    for (&c, img) in v.iter().zip(images) {
        if c.is_zero() {
            continue;
        }
        for (o, &x) in out.iter_mut().zip(img) {
            if !x.is_zero() {
                *o = field.add(*o, field.mul(c, x));
            }
        }
    }
    out
}

/// Gaussian binomial `[n choose k]_q`, or `None` on overflow.
pub fn gaussian_binomial(n: u32, k: u32, q: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let q = q as u128;
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..k {
        num = num.checked_mul(q.checked_pow(n - i)?.checked_sub(1)?)?;
        den = den.checked_mul(q.checked_pow(i + 1)?.checked_sub(1)?)?;
    }
    Some(num / den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;

    fn v(f: &FiniteField, c: &[i64]) -> Vec<Elem> {
        c.iter().map(|&x| f.from_int(x)).collect()
    }

    #[test]
    fn canonical_form_is_order_independent() {
        let f = make_field(5, 1).unwrap();
        let a = v(&f, &[1, 2, 0, 3]);
        let b = v(&f, &[0, 1, 4, 4]);
        let c = v(&f, &[2, 0, 1, 1]);
        let s1 = Subspace::spanned_by(&f, 4, [a.clone(), b.clone(), c.clone()]);
        let s2 = Subspace::spanned_by(&f, 4, [c.clone(), a.clone(), b.clone()]);
        let s3 = Subspace::spanned_by(&f, 4, [b, c.clone(), a.clone(), v(&f, &[3, 2, 1, 4])]);
        assert_eq!(s1, s2);
        assert_eq!(s1, s3);
        assert_eq!(s1.encode(&f), s2.encode(&f));
        assert!(s1.contains(&f, &c));
        for (row, &p) in s1.rows().iter().zip(s1.pivots()) {
            assert_eq!(row[p], Elem::ONE);
        }
    }

    #[test]
    fn rank_and_membership() {
        let f = make_field(2, 1).unwrap();
        let mut s = Subspace::zero(3);
        assert!(s.insert(&f, v(&f, &[1, 1, 0])));
        assert!(s.insert(&f, v(&f, &[0, 1, 1])));
        assert!(!s.insert(&f, v(&f, &[1, 0, 1])));
        assert_eq!(s.rank(), 2);
        assert!(!s.contains(&f, &v(&f, &[1, 0, 0])));
        assert!(s.is_subspace_of(&f, &Subspace::full(3)));
    }

    #[test]
    fn gaussian_binomials() {
        assert_eq!(gaussian_binomial(5, 2, 3), Some(1210));
        assert_eq!(gaussian_binomial(4, 0, 7), Some(1));
        assert_eq!(gaussian_binomial(3, 1, 2), Some(7));
        assert_eq!(gaussian_binomial(2, 3, 2), Some(0));
    }
}
