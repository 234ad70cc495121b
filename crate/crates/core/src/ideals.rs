//! Enumeration of finite-colength ideals of a truncated local algebra.
//!
//! Every colength-`n+1` ideal is a hyperplane `H` with `mI ⊆ H ⊂ I` for some
//! colength-`n` ideal `I`, and every such hyperplane is an ideal. Levels are
//! built one at a time from the previous level and deduplicated through the
//! canonical echelon form.

use std::collections::HashSet;

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::field::Elem;
use crate::linalg::{gaussian_binomial, Subspace};
use crate::local::LocalAlgebra;
use crate::series::TruncatedSeries;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IdealRep {
    space: Subspace,
}

pub fn is_ideal(alg: &LocalAlgebra, space: &Subspace) -> bool {
    let field = alg.field();
    space
        .rows()
        .iter()
        .all(|r| space.contains(field, &alg.times_x(r)) && space.contains(field, &alg.times_y(r)))
}

impl IdealRep {
    /// `None` unless `space` is closed under multiplication by `x` and `y`.
    pub fn new(alg: &LocalAlgebra, space: Subspace) -> Option<Self> {
        is_ideal(alg, &space).then_some(IdealRep { space })
    }

    pub fn whole(alg: &LocalAlgebra) -> Self {
        IdealRep {
            space: Subspace::full(alg.dim()),
        }
    }

    pub fn space(&self) -> &Subspace {
        &self.space
    }

    pub fn colength(&self) -> usize {
        self.space.codim()
    }
}

/// `mI` together with vectors of `I` completing it to a basis of `I`.
fn socle_split(alg: &LocalAlgebra, ideal: &IdealRep) -> (Subspace, Vec<Vec<Elem>>) {
    let field = alg.field();
    let rows = ideal.space.rows();
    let mi = Subspace::spanned_by(
        field,
        alg.dim(),
        rows.iter().flat_map(|r| [alg.times_x(r), alg.times_y(r)]),
    );
    let mut span = mi.clone();
    let complement = rows
        .iter()
        .filter(|r| span.insert(field, (*r).clone()))
        .cloned()
        .collect();
    (mi, complement)
}

fn hyperplane_count(q: u64, g: usize) -> u128 {
    let q = q as u128;
    (0..g as u32).map(|j| q.pow(j)).sum()
}

/// All ideals `I' ⊂ I` with `dim I/I' = 1`.
pub fn children(alg: &LocalAlgebra, ideal: &IdealRep) -> Vec<IdealRep> {
    let field = alg.field();
    let (mi, w) = socle_split(alg, ideal);
    let g = w.len();
    let q = field.order();
    let mut out = Vec::new();
    // Hyperplane = kernel of the functional c with c_j = 1 its last nonzero entry.
    for j in 0..g {
        let free = (q as u128).pow(j as u32);
        for code in 0..free {
            let mut c = vec![Elem::ZERO; j];
            let mut rest = code;
            for slot in c.iter_mut() {
                *slot = Elem((rest % q as u128) as u64);
                rest /= q as u128;
            }
            let mut h = mi.clone();
            for (i, wi) in w.iter().enumerate() {
                if i == j {
                    continue;
                }
                let v = if i < j && !c[i].is_zero() {
                    wi.iter()
                        .zip(&w[j])
                        .map(|(&a, &b)| field.sub(a, field.mul(c[i], b)))
                        .collect()
                } else {
                    wi.clone()
                };
                h.insert(field, v);
            }
            let child = IdealRep::new(alg, h).expect("hyperplanes over mI are ideals");
            debug_assert_eq!(child.colength(), ideal.colength() + 1);
            out.push(child);
        }
    }
    debug_assert_eq!(out.len() as u128, hyperplane_count(q, g));
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumOptions {
    pub parallel: bool,
    pub frontier_limit: usize,
}

impl Default for EnumOptions {
    fn default() -> Self {
        EnumOptions {
            parallel: true,
            frontier_limit: Budget::default().frontier,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealCounts {
    /// `counts[n]` = number of colength-`n` ideals.
    pub counts: Vec<u64>,
    /// Enumeration stopped early because the next frontier was too large.
    pub cutoff: bool,
}

pub fn count_colength_ideals(alg: &LocalAlgebra, n_max: usize, opts: EnumOptions) -> Result<IdealCounts> {
    if alg.order() < n_max {
        return Err(Error::InsufficientPrecision {
            required: n_max,
            got: alg.order(),
        });
    }
    let field = alg.field();
    let q = field.order();
    let mut level = vec![IdealRep::whole(alg)];
    let mut counts = vec![1u64];
    for _ in 1..=n_max {
        let estimate: u128 = if opts.parallel {
            level
                .par_iter()
                .map(|i| hyperplane_count(q, socle_split(alg, i).1.len()))
                .sum()
        } else {
            level
                .iter()
                .map(|i| hyperplane_count(q, socle_split(alg, i).1.len()))
                .sum()
        };
        if estimate > opts.frontier_limit as u128 {
            return Ok(IdealCounts { counts, cutoff: true });
        }
        let raw: Vec<IdealRep> = if opts.parallel {
            level.par_iter().flat_map_iter(|i| children(alg, i)).collect()
        } else {
            level.iter().flat_map(|i| children(alg, i)).collect()
        };
        let mut seen = HashSet::with_capacity(raw.len());
        let mut next: Vec<(Vec<u8>, IdealRep)> = raw
            .into_iter()
            .filter_map(|i| {
                let key = i.space.encode(field);
                seen.insert(key.clone()).then_some((key, i))
            })
            .collect();
        next.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        counts.push(next.len() as u64);
        level = next.into_iter().map(|(_, i)| i).collect();
    }
    Ok(IdealCounts { counts, cutoff: false })
}

/// Count colength-`n` ideals by scanning every codimension-`n` subspace
/// that contains `m^n`.
pub fn naive_count(alg: &LocalAlgebra, n: usize, budget: &Budget) -> Result<u64> {
    if alg.order() < n {
        return Err(Error::InsufficientPrecision {
            required: n,
            got: alg.order(),
        });
    }
    let field = alg.field();
    let dim = alg.dim();
    let q = field.order();
    let mn = alg.maximal_power(n);
    let mut span = mn.clone();
    let lifts: Vec<Vec<Elem>> = (0..dim)
        .map(|i| {
            let mut e = vec![Elem::ZERO; dim];
            e[i] = Elem::ONE;
            e
        })
        .filter(|e| span.insert(field, e.clone()))
        .collect();
    let quotient = lifts.len();
    if quotient < n {
        return Ok(0);
    }
    let k = quotient - n;
    let total = gaussian_binomial(quotient as u32, k as u32, q).unwrap_or(u128::MAX);
    budget.check(
        format!("naive scan of codimension-{n} subspaces"),
        total,
        budget.naive_subspaces,
    )?;
    let mut count = 0u64;
    for pivots in combinations(quotient, k) {
        // Free entries of a row-echelon matrix with these pivots.
        let free: Vec<(usize, usize)> = pivots
            .iter()
            .enumerate()
            .flat_map(|(r, &p)| ((p + 1)..quotient).filter(|c| !pivots.contains(c)).map(move |c| (r, c)))
            .collect();
        let cells = (q as u128).pow(free.len() as u32);
        for code in 0..cells {
            let mut rows = vec![vec![Elem::ZERO; quotient]; k];
            for (r, &p) in pivots.iter().enumerate() {
                rows[r][p] = Elem::ONE;
            }
            let mut rest = code;
            for &(r, c) in &free {
                rows[r][c] = Elem((rest % q as u128) as u64);
                rest /= q as u128;
            }
            let mut sub = mn.clone();
            for row in rows {
                let mut lifted = vec![Elem::ZERO; dim];
                for (coef, lift) in row.iter().zip(&lifts) {
                    if coef.is_zero() {
                        continue;
                    }
                    for (x, &l) in lifted.iter_mut().zip(lift) {
                        *x = field.add(*x, field.mul(*coef, l));
                    }
                }
                sub.insert(field, lifted);
            }
            debug_assert_eq!(sub.codim(), n);
            if is_ideal(alg, &sub) {
                count += 1;
            }
        }
    }
    Ok(count)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// `sum_n c_n t^n` up to `t^n_max`. A frontier cutoff is a budget error.
pub fn local_series(alg: &LocalAlgebra, n_max: usize, opts: EnumOptions) -> Result<TruncatedSeries> {
    let counts = count_colength_ideals(alg, n_max, opts)?;
    if counts.cutoff {
        return Err(Error::Budget {
            what: format!("ideal frontier at colength {}", counts.counts.len()),
            estimate: opts.frontier_limit as u128 + 1,
            limit: opts.frontier_limit as u128,
        });
    }
    let mut s = TruncatedSeries::from_ints_big(counts.counts.iter().map(|&c| BigInt::from(c)).collect());
    s.flag_integral()?;
    Ok(s)
}
