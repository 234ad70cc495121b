//! Truncated local algebras `A_N = F[[x,y]] / ((f) + m^N)`.
//!
//! Monomials of degree `< N` are the coordinates; the relations
//! `x^a y^b f` (truncated) are row-reduced with the largest monomials
//! (y-exponent first, then x-exponent) as pivots, so the surviving basis
//! consists of the smallest monomials in that order.

use std::collections::HashMap;
use std::sync::Arc;

use crate::bipoly::BiPoly;
use crate::error::{Error, Result};
use crate::field::{Elem, FiniteField};
use crate::linalg::{self, Subspace};

#[derive(Clone, Debug)]
pub struct LocalAlgebra {
    field: Arc<FiniteField>,
    f: BiPoly,
    order: usize,
    multiplicity: u32,
    columns: Vec<(u32, u32)>,
    column_of: HashMap<(u32, u32), usize>,
    relations: Subspace,
    basis: Vec<(u32, u32)>,
    basis_columns: Vec<usize>,
    mul_x: Vec<Vec<Elem>>,
    mul_y: Vec<Vec<Elem>>,
}

pub fn multiplicity(f: &BiPoly) -> Result<u32> {
    match f.order() {
        None => Err(Error::InvalidLocalEquation("f is zero".into())),
        Some(0) => Err(Error::InvalidLocalEquation("f is a unit (f(0,0) != 0)".into())),
        Some(mu) => Ok(mu),
    }
}

/// `dim A_N` for a local equation of order `mu`.
pub fn expected_dim(order: usize, mu: usize) -> usize {
    let tri = |n: usize| n * (n + 1) / 2;
    tri(order) - tri(order.saturating_sub(mu))
}

pub fn build_truncated(f: &BiPoly, field: &Arc<FiniteField>, order: usize) -> Result<LocalAlgebra> {
    let mu = multiplicity(f)?;
    if order == 0 {
        return Err(Error::InvalidLocalEquation("truncation order must be positive".into()));
    }
    let n = order as u32;
    let mut columns: Vec<(u32, u32)> = (0..n).flat_map(|d| (0..=d).map(move |b| (d - b, b))).collect();
    columns.sort_by_key(|&(a, b)| std::cmp::Reverse((b, a)));
    let column_of: HashMap<(u32, u32), usize> = columns.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    let width = columns.len();

    let mut relations = Subspace::zero(width);
    for d in 0..n.saturating_sub(mu) {
        for b in 0..=d {
            let a = d - b;
            let mut row = vec![Elem::ZERO; width];
            for ((fa, fb), c) in f.terms() {
                if let Some(&col) = column_of.get(&(fa + a, fb + b)) {
                    row[col] = c;
                }
            }
            relations.insert(field, row);
        }
    }
    let pivots: std::collections::HashSet<usize> = relations.pivots().iter().copied().collect();
    let mut basis: Vec<(u32, u32)> = columns
        .iter()
        .enumerate()
        .filter(|(i, _)| !pivots.contains(i))
        .map(|(_, &m)| m)
        .collect();
    basis.sort_by_key(|&(a, b)| (a + b, b));
    let basis_columns = basis.iter().map(|m| column_of[m]).collect();

    let mut alg = LocalAlgebra {
        field: field.clone(),
        f: f.clone(),
        order,
        multiplicity: mu,
        columns,
        column_of,
        relations,
        basis,
        basis_columns,
        mul_x: Vec::new(),
        mul_y: Vec::new(),
    };
    alg.mul_x = alg.basis.iter().map(|&(a, b)| alg.monomial(a + 1, b)).collect();
    alg.mul_y = alg.basis.iter().map(|&(a, b)| alg.monomial(a, b + 1)).collect();
    Ok(alg)
}

impl LocalAlgebra {
    pub fn field(&self) -> &Arc<FiniteField> {
        &self.field
    }

    pub fn equation(&self) -> &BiPoly {
        &self.f
    }

    /// Truncation order `N`.
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn multiplicity(&self) -> u32 {
        self.multiplicity
    }

    /// True when `N <= mu`, so `f` itself vanishes in the truncation.
    pub fn is_undersized(&self) -> bool {
        self.order <= self.multiplicity as usize
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[(u32, u32)] {
        &self.basis
    }

    pub fn mul_x(&self) -> &[Vec<Elem>] {
        &self.mul_x
    }

    pub fn mul_y(&self) -> &[Vec<Elem>] {
        &self.mul_y
    }

    /// Coordinates of `x^a y^b`.
    pub fn monomial(&self, a: u32, b: u32) -> Vec<Elem> {
        let mut p = BiPoly::zero();
        p.add_term(&self.field, (a, b), Elem::ONE);
        self.normal_form(&p)
    }

    /// Coordinates of the image of a polynomial.
    pub fn normal_form(&self, p: &BiPoly) -> Vec<Elem> {
        let mut v = vec![Elem::ZERO; self.columns.len()];
        for (m, c) in p.terms() {
            if let Some(&col) = self.column_of.get(&m) {
                v[col] = self.field.add(v[col], c);
            }
        }
        self.relations.reduce(&self.field, &mut v);
        self.basis_columns.iter().map(|&c| v[c]).collect()
    }

    /// The maximal ideal: span of the non-constant basis monomials.
    pub fn maximal_ideal(&self) -> Subspace {
        let dim = self.dim();
        Subspace::spanned_by(
            &self.field,
            dim,
            (0..dim).filter(|&i| self.basis[i] != (0, 0)).map(|i| unit(dim, i)),
        )
    }

    /// `m^n`, spanned by the monomials of degree at least `n`.
    pub fn maximal_power(&self, n: usize) -> Subspace {
        let monos = self
            .columns
            .iter()
            .filter(|&&(a, b)| (a + b) as usize >= n)
            .map(|&(a, b)| self.monomial(a, b));
        Subspace::spanned_by(&self.field, self.dim(), monos)
    }

    pub fn times_x(&self, v: &[Elem]) -> Vec<Elem> {
        linalg::apply(&self.field, &self.mul_x, v)
    }

    pub fn times_y(&self, v: &[Elem]) -> Vec<Elem> {
        linalg::apply(&self.field, &self.mul_y, v)
    }
}

fn unit(dim: usize, i: usize) -> Vec<Elem> {
    let mut v = vec![Elem::ZERO; dim];
    v[i] = Elem::ONE;
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::shared_field;
    use proptest::prelude::*;

    fn alg(p: u32, src: &str, n: usize) -> LocalAlgebra {
        let field = shared_field(p, 1).unwrap();
        let f = BiPoly::parse(&field, src).unwrap();
        build_truncated(&f, &field, n).unwrap()
    }

    #[test]
    fn documented_examples() {
        let smooth = alg(3, "y - x^2", 5);
        assert_eq!(smooth.dim(), 5);
        assert_eq!(smooth.basis(), &[(0, 0), (1, 0), (2, 0), (3, 0), (4, 0)]);

        let cusp = alg(3, "y^2 - x^3", 4);
        assert_eq!(cusp.dim(), 7);
        assert_eq!(expected_dim(4, 2), 7);
        assert_eq!(cusp.basis(), &[(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (3, 0), (2, 1)]);
        // y^2 == x^3, x y^2 == 0, y^3 == 0
        assert_eq!(cusp.monomial(0, 2), cusp.monomial(3, 0));
        assert!(cusp.monomial(1, 2).iter().all(|c| c.is_zero()));
        assert!(cusp.monomial(0, 3).iter().all(|c| c.is_zero()));
    }

    #[test]
    fn multiplicities() {
        let f3 = shared_field(3, 1).unwrap();
        for (src, mu) in [("y^2-x^3", 2), ("y^2-x^2-x^3", 2), ("x^3-y^5", 3)] {
            assert_eq!(multiplicity(&BiPoly::parse(&f3, src).unwrap()).unwrap(), mu);
        }
        assert!(multiplicity(&BiPoly::parse(&f3, "1 + x").unwrap()).is_err());
        assert!(build_truncated(&BiPoly::parse(&f3, "x").unwrap(), &f3, 0).is_err());
    }

    #[test]
    fn undersized_truncation_is_allowed() {
        let a = alg(3, "x^3 - y^5", 2);
        assert!(a.is_undersized());
        assert_eq!(a.dim(), 3);
    }

    fn check_invariants(a: &LocalAlgebra) {
        let field = a.field().clone();
        let dim = a.dim();
        assert_eq!(dim, expected_dim(a.order(), a.multiplicity() as usize));
        assert!(a.normal_form(a.equation()).iter().all(|c| c.is_zero()));
        for i in 0..dim {
            let e = unit(dim, i);
            assert_eq!(a.times_x(&a.times_y(&e)), a.times_y(&a.times_x(&e)));
        }
        let m = a.maximal_ideal();
        assert_eq!(m.rank(), dim - 1);
        // m^j -> m^(j+1) under both operators, so N steps kill everything.
        for j in 0..a.order() {
            let mj = a.maximal_power(j);
            let mj1 = a.maximal_power(j + 1);
            for row in mj.rows() {
                assert!(mj1.contains(&field, &a.times_x(row)));
                assert!(mj1.contains(&field, &a.times_y(row)));
            }
        }
        assert_eq!(a.maximal_power(a.order()).rank(), 0);
    }

    #[test]
    fn corpus_singularities_satisfy_invariants() {
        for p in [2, 3, 5] {
            for src in ["x*y", "y^2-x^3", "y^2-x^4", "y^2-x^5", "y^2+x^2-x^3", "y^2+x^2*y"] {
                for n in 1..=7 {
                    check_invariants(&alg(p, src, n));
                }
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn random_equations_satisfy_invariants(
            coeffs in proptest::collection::vec(0u64..5, 9),
            n in 1usize..7,
        ) {
            let field = shared_field(5, 1).unwrap();
            let monos = [(2, 0), (1, 1), (0, 2), (3, 0), (2, 1), (1, 2), (0, 3), (1, 0), (4, 1)];
            let f = BiPoly::from_terms(&field, monos.iter().zip(&coeffs).map(|(&m, &c)| (m, Elem(c))));
            prop_assume!(!f.is_zero());
            let a = build_truncated(&f, &field, n).unwrap();
            check_invariants(&a);
        }
    }
}
