//! Plane projective curves `F(x, y, z) = 0` over `F_q`: point counts,
//! singular closed points and local equations.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::bipoly::BiPoly;
use crate::budget::Budget;
use crate::document::{CurveDocument, Declared};
use crate::error::{Error, Result};
use crate::expr;
use crate::field::{shared_field, Elem, Embedding, FiniteField};
use crate::upoly::{self, UPoly};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Term {
    pub exps: [u32; 3],
    pub coeff: Elem,
}

#[derive(Clone, Debug)]
pub struct PlaneCurve {
    name: String,
    field: Arc<FiniteField>,
    degree: u32,
    genus: u32,
    terms: Vec<Term>,
    declared: Declared,
}

fn plane_genus(d: u32) -> u32 {
    (d - 1) * d.saturating_sub(2) / 2
}

impl PlaneCurve {
    pub fn new(
        name: impl Into<String>,
        field: Arc<FiniteField>,
        terms: Vec<([u32; 3], Elem)>,
        declared: Declared,
    ) -> Result<Self> {
        let name = name.into();
        let Some(first) = terms.first() else {
            return Err(Error::InvalidCurve(format!("{name}: no terms")));
        };
        let degree: u32 = first.0.iter().sum();
        if degree < 1 {
            return Err(Error::InvalidCurve(format!("{name}: degree must be at least 1")));
        }
        let mut seen = BTreeSet::new();
        let mut kept = Vec::new();
        for (idx, &(exps, coeff)) in terms.iter().enumerate() {
            let d: u32 = exps.iter().sum();
            if d != degree {
                return Err(Error::InvalidCurve(format!(
                    "{name}: term {idx} {exps:?} has degree {d}, expected {degree}"
                )));
            }
            if !seen.insert(exps) {
                return Err(Error::InvalidCurve(format!(
                    "{name}: term {idx} repeats exponents {exps:?}"
                )));
            }
            if !coeff.is_zero() {
                kept.push(Term { exps, coeff });
            }
        }
        if kept.is_empty() {
            return Err(Error::InvalidCurve(format!("{name}: every coefficient is zero")));
        }
        kept.sort_by_key(|t| std::cmp::Reverse(t.exps));
        let genus = plane_genus(degree);
        assert_eq!(2 * genus, (degree - 1) * (degree.max(2) - 2));
        Ok(PlaneCurve {
            name,
            field,
            degree,
            genus,
            terms: kept,
            declared,
        })
    }

    pub fn from_document(doc: &CurveDocument) -> Result<Self> {
        let field = shared_field(doc.p, doc.k)?;
        let mut terms = Vec::with_capacity(doc.terms.len());
        for (idx, (i, j, k, c)) in doc.terms.iter().enumerate() {
            let coeff = expr::parse_element(&field, c)
                .map_err(|e| Error::InvalidCurve(format!("{}: term {idx} coefficient {c:?}: {e}", doc.name)))?;
            terms.push(([*i, *j, *k], coeff));
        }
        PlaneCurve::new(doc.name.clone(), field, terms, doc.declared.clone())
    }

    /// Parse `F` written in `x`, `y`, `z`, e.g. `"y^2*z - x^3"`.
    pub fn parse(name: &str, field: Arc<FiniteField>, src: &str) -> Result<Self> {
        let raw = expr::parse(src, &['x', 'y', 'z'])?;
        let mut acc: Vec<([u32; 3], Elem)> = Vec::new();
        for (e, c) in raw {
            let exps = [e[0], e[1], e[2]];
            let c = field.from_int(c);
            match acc.iter_mut().find(|(x, _)| *x == exps) {
                Some(slot) => slot.1 = field.add(slot.1, c),
                None => acc.push((exps, c)),
            }
        }
        PlaneCurve::new(name, field, acc, Declared::default())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn field(&self) -> &Arc<FiniteField> {
        &self.field
    }

    pub fn q(&self) -> u64 {
        self.field.order()
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn declared(&self) -> &Declared {
        &self.declared
    }

    /// The curve with coordinates relabelled: new variable `i` is old variable `perm[i]`.
    pub fn permuted(&self, perm: [usize; 3]) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| ([t.exps[perm[0]], t.exps[perm[1]], t.exps[perm[2]]], t.coeff))
            .collect();
        PlaneCurve::new(self.name.clone(), self.field.clone(), terms, Declared::default())
            .expect("permutation preserves validity")
    }

    /// SHA-256 over the field and the canonical term list, hex encoded.
    pub fn content_hash(&self) -> String {
        let mut h = Sha256::new();
        h.update(format!(
            "p={};k={};mod={:?};",
            self.field.p(),
            self.field.k(),
            self.field.modulus()
        ));
        for t in &self.terms {
            h.update(format!("{},{},{},{};", t.exps[0], t.exps[1], t.exps[2], t.coeff.0));
        }
        hex::encode(h.finalize())
    }

    /// Extension field `F_{q^m}` and the defining terms mapped into it.
    pub fn terms_over(&self, m: u32) -> Result<(Arc<FiniteField>, Vec<Term>)> {
        let ext = shared_field(self.field.p(), self.field.k() * m)?;
        let emb = Embedding::new(&self.field, &ext)?;
        let terms = self
            .terms
            .iter()
            .map(|t| Term {
                exps: t.exps,
                coeff: emb.apply(t.coeff),
            })
            .collect();
        Ok((ext, terms))
    }

    /// Formal partial derivative in variable `var` (0 = x, 1 = y, 2 = z).
    pub fn partial(&self, var: usize) -> Vec<Term> {
        partial(&self.field, &self.terms, var)
    }
}

impl fmt::Display for PlaneCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = ['x', 'y', 'z'];
        let mut parts = Vec::new();
        for t in &self.terms {
            let mut mono = String::new();
            for (v, &e) in t.exps.iter().enumerate() {
                match e {
                    0 => {}
                    1 => mono.push(names[v]),
                    _ => mono.push_str(&format!("{}^{e}", names[v])),
                }
            }
            let c = self.field.format(t.coeff);
            parts.push(match (mono.is_empty(), t.coeff == Elem::ONE) {
                (true, _) => c,
                (false, true) => mono,
                (false, false) if c.contains('+') => format!("({c}){mono}"),
                (false, false) => format!("{c}{mono}"),
            });
        }
        write!(f, "{}", parts.join(" + "))
    }
}

fn partial(field: &FiniteField, terms: &[Term], var: usize) -> Vec<Term> {
    terms
        .iter()
        .filter(|t| t.exps[var] > 0)
        .filter_map(|t| {
            let c = field.mul(field.from_int(t.exps[var] as i64), t.coeff);
            if c.is_zero() {
                return None;
            }
            let mut exps = t.exps;
            exps[var] -= 1;
            Some(Term { exps, coeff: c })
        })
        .collect()
}

pub fn eval_terms(field: &FiniteField, terms: &[Term], pt: [Elem; 3]) -> Elem {
    terms.iter().fold(Elem::ZERO, |acc, t| {
        let mut v = t.coeff;
        for (i, &e) in t.exps.iter().enumerate() {
            if e > 0 {
                v = field.mul(v, field.pow(pt[i], e as u64));
            }
        }
        field.add(acc, v)
    })
}

/// `F(x0, y, 1)` as a polynomial in `y`, with `xpow[i] = x0^i`.
fn slice_in_y(field: &FiniteField, terms: &[Term], xpow: &[Elem], deg: usize) -> UPoly {
    let mut out = vec![Elem::ZERO; deg + 1];
    for t in terms {
        let j = t.exps[1] as usize;
        out[j] = field.add(out[j], field.mul(t.coeff, xpow[t.exps[0] as usize]));
    }
    upoly::trim(&mut out);
    out
}

fn powers(field: &FiniteField, x: Elem, n: usize) -> Vec<Elem> {
    let mut out = Vec::with_capacity(n + 1);
    let mut acc = Elem::ONE;
    for _ in 0..=n {
        out.push(acc);
        acc = field.mul(acc, x);
    }
    out
}

/// Number of roots in `field` itself (all of them for the zero polynomial).
fn roots_in_field(field: &FiniteField, f: &[Elem]) -> u64 {
    if f.is_empty() {
        field.order()
    } else {
        upoly::count_roots_in_extension(field, f, 1) as u64
    }
}

/// `#C(F_{q^m})`.
///
/// Curves of degree at most one in some variable are counted exactly through
/// the resulting fibration over a line, at any `m`. Other curves are counted
/// on the chart `z = 1` one vertical line at a time, plus the line at
/// infinity, subject to `q^(2m) <= budget.point_scan`.
pub fn count_points(curve: &PlaneCurve, m: u32, budget: &Budget) -> Result<u64> {
    if m == 0 {
        return Err(Error::InvalidCurve("extension degree must be positive".into()));
    }
    if let Some(n) = count_points_fibration(curve, m) {
        return Ok(n);
    }
    count_points_sliced(curve, m, budget)
}

fn scan_estimate(curve: &PlaneCurve, m: u32) -> u128 {
    (curve.q() as u128).checked_pow(2 * m).unwrap_or(u128::MAX)
}

/// Count over `F_{q^m}` by root-counting `F(x0, y, 1)` for each `x0`.
pub fn count_points_sliced(curve: &PlaneCurve, m: u32, budget: &Budget) -> Result<u64> {
    budget.check(
        format!("point count of {} over F_{}^{m}", curve.name, curve.q()),
        scan_estimate(curve, m),
        budget.point_scan,
    )?;
    let (ext, terms) = curve.terms_over(m)?;
    let d = curve.degree as usize;
    let q = ext.order();
    let affine: u64 = (0..q as usize)
        .into_par_iter()
        .with_min_len(64)
        .map(|x| {
            let xpow = powers(&ext, Elem(x as u64), d);
            roots_in_field(&ext, &slice_in_y(&ext, &terms, &xpow, d))
        })
        .sum();
    Ok(affine + infinity_count(&ext, &terms, d))
}

/// Points with `z = 0`: `(x : 1 : 0)` and `(1 : 0 : 0)`.
fn infinity_count(ext: &FiniteField, terms: &[Term], d: usize) -> u64 {
    let mut at_inf = vec![Elem::ZERO; d + 1];
    for t in terms.iter().filter(|t| t.exps[2] == 0) {
        let i = t.exps[0] as usize;
        at_inf[i] = ext.add(at_inf[i], t.coeff);
    }
    let corner = at_inf[d].is_zero() as u64;
    upoly::trim(&mut at_inf);
    roots_in_field(ext, &at_inf) + corner
}

/// Literal scan of every `(x, y)` in the chart `z = 1` plus the line at
/// infinity. Slow; kept as an independent check on the other routes.
pub fn count_points_scan(curve: &PlaneCurve, m: u32, budget: &Budget) -> Result<u64> {
    budget.check(
        format!("exhaustive scan of {} over F_{}^{m}", curve.name, curve.q()),
        scan_estimate(curve, m),
        budget.point_scan,
    )?;
    let (ext, terms) = curve.terms_over(m)?;
    let q = ext.order();
    let affine: u64 = (0..q)
        .into_par_iter()
        .map(|x| {
            (0..q)
                .filter(|&y| eval_terms(&ext, &terms, [Elem(x), Elem(y), Elem::ONE]).is_zero())
                .count() as u64
        })
        .sum();
    let inf_line = (0..q)
        .filter(|&x| eval_terms(&ext, &terms, [Elem(x), Elem::ONE, Elem::ZERO]).is_zero())
        .count() as u64;
    let corner = eval_terms(&ext, &terms, [Elem::ONE, Elem::ZERO, Elem::ZERO]).is_zero() as u64;
    Ok(affine + inf_line + corner)
}

/// When `F = A·v + B` for some variable `v` with binary forms `A`, `B` in the
/// other two variables, each point of `P^1` off the common zeros of `A` and
/// `B` carries exactly one point of `C` when `A != 0` and none otherwise,
/// common zeros carry a whole affine line, and the vertex `e_v` is added.
pub fn count_points_fibration(curve: &PlaneCurve, m: u32) -> Option<u64> {
    let v = (0..3).rev().find(|&v| curve.terms.iter().all(|t| t.exps[v] <= 1))?;
    let a = if v == 0 { 1 } else { 0 };
    let field = &curve.field;
    let qm = (curve.q() as u128).checked_pow(m)?;
    let d = curve.degree;
    // Binary form as (dehomogenized polynomial in X_a with X_b = 1, coefficient of X_a^deg).
    let form = |vexp: u32| -> (UPoly, Elem) {
        let deg = d - vexp;
        let mut h = vec![Elem::ZERO; deg as usize + 1];
        for t in curve.terms.iter().filter(|t| t.exps[v] == vexp) {
            let i = t.exps[a] as usize;
            h[i] = field.add(h[i], t.coeff);
        }
        let top = h[deg as usize];
        upoly::trim(&mut h);
        (h, top)
    };
    let roots = |h: &[Elem]| upoly::count_roots_in_extension(field, h, m) as u128;
    let zeros = |h: &UPoly, top: Elem| -> u128 {
        if h.is_empty() {
            qm + 1
        } else {
            roots(h) + top.is_zero() as u128
        }
    };
    let (ha, ta) = form(1);
    let (hb, tb) = form(0);
    let za = zeros(&ha, ta);
    let zab = if ha.is_empty() {
        zeros(&hb, tb)
    } else if hb.is_empty() {
        za
    } else {
        roots(&upoly::gcd(field, &ha, &hb)) + (ta.is_zero() && tb.is_zero()) as u128
    };
    let vertex = curve
        .terms
        .iter()
        .find(|t| t.exps[v] == d)
        .is_none_or(|t| t.coeff.is_zero()) as u128;
    let n = qm + 1 - za + qm * zab + vertex;
    u64::try_from(n).ok()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedPoint {
    /// Residue degree `e` over `F_q`.
    pub degree: u32,
    /// `F_{q^e}`, where `coords` live.
    pub field: Arc<FiniteField>,
    /// Normalized projective coordinates of the least point of the orbit.
    pub coords: [Elem; 3],
    pub multiplicity: u32,
}

impl ClosedPoint {
    pub fn format_coords(&self) -> String {
        let c: Vec<String> = self.coords.iter().map(|&a| self.field.format(a)).collect();
        format!("({})", c.join(":"))
    }
}

/// Scale so the last nonzero coordinate is 1.
pub fn normalize(field: &FiniteField, pt: [Elem; 3]) -> [Elem; 3] {
    let last = pt
        .iter()
        .rposition(|a| !a.is_zero())
        .expect("projective point is nonzero");
    let inv = field.inv(pt[last]);
    pt.map(|a| field.mul(a, inv))
}

/// Frobenius orbit of a normalized point under `a -> a^q`.
pub fn frobenius_orbit(field: &FiniteField, q: u64, pt: [Elem; 3]) -> Vec<[Elem; 3]> {
    let mut orbit = vec![pt];
    loop {
        let next = orbit.last().unwrap().map(|a| field.pow(a, q));
        if next == pt {
            return orbit;
        }
        orbit.push(next);
    }
}

#[derive(Clone, Debug)]
pub struct SingularLocus {
    pub points: Vec<ClosedPoint>,
    pub searched_up_to: u32,
    /// Every residue degree an integral curve's singular point can have
    /// (at most the arithmetic genus) was searched.
    pub complete: bool,
}

/// Singular closed points: common zeros of `F` and its three partials,
/// searched over `F_{q^m}` for `m = 1 ..= min(m_sing, max(g_a, 1))`.
pub fn singular_closed_points(curve: &PlaneCurve, budget: &Budget) -> Result<SingularLocus> {
    let target = curve.genus.max(1).min(budget.singular_search_degree);
    let d = curve.degree as usize;
    let q = curve.q();
    let bezout = (d - 1) * (d - 1);
    let mut points = Vec::new();
    let mut geometric = 0usize;
    let mut searched = 0;
    for m in 1..=target {
        let qm = (q as u128).pow(m);
        if qm > budget.singular_scan {
            break;
        }
        let (ext, f) = curve.terms_over(m)?;
        let system: Vec<Vec<Term>> = std::iter::once(f.clone())
            .chain((0..3).map(|v| partial(&ext, &f, v)))
            .collect();
        let mut found = singular_affine(&ext, &system, d);
        for x in ext.elements() {
            let pt = [x, Elem::ONE, Elem::ZERO];
            if system.iter().all(|s| eval_terms(&ext, s, pt).is_zero()) {
                found.push(pt);
            }
        }
        let corner = [Elem::ONE, Elem::ZERO, Elem::ZERO];
        if system.iter().all(|s| eval_terms(&ext, s, corner).is_zero()) {
            found.push(corner);
        }
        if found.len() > bezout {
            return Err(Error::InvalidCurve(format!(
                "{}: {} singular points over F_{}^{m} exceeds (d-1)^2 = {bezout}; F has a repeated factor",
                curve.name,
                found.len(),
                q
            )));
        }
        let mut reps = BTreeSet::new();
        for pt in found {
            let orbit = frobenius_orbit(&ext, q, pt);
            if orbit.len() as u32 == m {
                reps.insert(*orbit.iter().min().unwrap());
            }
        }
        for rep in reps {
            let local = local_equation_at(curve, &ext, rep)?;
            geometric += m as usize;
            points.push(ClosedPoint {
                degree: m,
                field: ext.clone(),
                coords: rep,
                multiplicity: local.f.order().unwrap_or(0),
            });
        }
        searched = m;
    }
    debug_assert!(geometric <= bezout);
    Ok(SingularLocus {
        points,
        searched_up_to: searched,
        complete: searched >= curve.genus.max(1),
    })
}

fn singular_affine(ext: &Arc<FiniteField>, system: &[Vec<Term>], d: usize) -> Vec<[Elem; 3]> {
    let q = ext.order();
    let hits: Vec<Vec<[Elem; 3]>> = (0..q as usize)
        .into_par_iter()
        .with_min_len(64)
        .map(|x| {
            let x = x as u64;
            let xpow = powers(ext, Elem(x), d);
            let mut g: UPoly = Vec::new();
            for s in system {
                g = upoly::gcd(ext, &g, &slice_in_y(ext, s, &xpow, d));
                if upoly::degree(&g) == Some(0) {
                    return Vec::new();
                }
            }
            if !g.is_empty() && upoly::count_roots_in_extension(ext, &g, 1) == 0 {
                return Vec::new();
            }
            ext.elements()
                .filter(|&y| g.is_empty() || upoly::eval(ext, &g, y).is_zero())
                .map(|y| [Elem(x), y, Elem::ONE])
                .collect()
        })
        .collect();
    hits.into_iter().flatten().collect()
}

#[derive(Clone, Debug)]
pub struct LocalEquation {
    pub field: Arc<FiniteField>,
    /// Coordinate set to 1 (`'x'`, `'y'` or `'z'`).
    pub chart: char,
    pub f: BiPoly,
}

pub fn local_equation(curve: &PlaneCurve, point: &ClosedPoint) -> Result<LocalEquation> {
    local_equation_at(curve, &point.field, point.coords)
}

/// Translate `pt` (over an extension `ext` of the base field) to the origin
/// of the standard chart given by its last nonzero coordinate.
pub fn local_equation_at(curve: &PlaneCurve, ext: &Arc<FiniteField>, pt: [Elem; 3]) -> Result<LocalEquation> {
    if ext.p() != curve.field.p() || !ext.k().is_multiple_of(curve.field.k()) {
        return Err(Error::IncompatibleEmbedding {
            src_p: curve.field.p(),
            src_k: curve.field.k(),
            dst_p: ext.p(),
            dst_k: ext.k(),
        });
    }
    let (_, terms) = curve.terms_over(ext.k() / curve.field.k())?;
    let pt = normalize(ext, pt);
    let c = pt.iter().rposition(|a| !a.is_zero()).unwrap();
    let (a, b) = match c {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    };
    let mut f = BiPoly::zero();
    for t in &terms {
        let ea = expand_shift(ext, pt[a], t.exps[a]);
        let eb = expand_shift(ext, pt[b], t.exps[b]);
        for (i, &ca) in ea.iter().enumerate() {
            for (j, &cb) in eb.iter().enumerate() {
                f.add_term(ext, (i as u32, j as u32), ext.mul(t.coeff, ext.mul(ca, cb)));
            }
        }
    }
    if !f.coeff(0, 0).is_zero() {
        return Err(Error::NotOnCurve);
    }
    Ok(LocalEquation {
        field: ext.clone(),
        chart: ['x', 'y', 'z'][c],
        f,
    })
}

/// Coefficients of `(u + s)^n` in `u`.
fn expand_shift(field: &FiniteField, s: Elem, n: u32) -> Vec<Elem> {
    let mut out = vec![Elem::ONE];
    for _ in 0..n {
        let mut next = vec![Elem::ZERO; out.len() + 1];
        for (i, &c) in out.iter().enumerate() {
            next[i + 1] = field.add(next[i + 1], c);
            next[i] = field.add(next[i], field.mul(c, s));
        }
        out = next;
    }
    out
}

/// True when `F` has no repeated factor: some line `y = a x + b z` over a
/// small extension meets the curve in `d` distinct geometric points.
/// A reduced curve has at most `O(d^2)` bad lines per pencil direction, so
/// the search stops once the field has more than `2 d^2` elements.
pub fn is_reduced(curve: &PlaneCurve) -> Result<bool> {
    let d = curve.degree as usize;
    if d == 1 {
        return Ok(true);
    }
    for m in 1.. {
        let (ext, terms) = curve.terms_over(m)?;
        for a in ext.elements() {
            let at_inf = curve_at_infinity_on_line(&ext, &terms, a);
            let need = if at_inf.is_zero() { d - 1 } else { d };
            for b in ext.elements() {
                let h = restrict_to_line(&ext, &terms, a, b, d);
                if upoly::degree(&h) == Some(need) && upoly::is_squarefree(&ext, &h) {
                    return Ok(true);
                }
            }
        }
        if ext.order() as usize > 2 * d * d {
            return Ok(false);
        }
    }
    unreachable!()
}

fn curve_at_infinity_on_line(ext: &FiniteField, terms: &[Term], a: Elem) -> Elem {
    eval_terms(ext, terms, [Elem::ONE, a, Elem::ZERO])
}

/// `F(s, a s + b, 1)` as a polynomial in `s`.
fn restrict_to_line(ext: &FiniteField, terms: &[Term], a: Elem, b: Elem, d: usize) -> UPoly {
    let lin: UPoly = {
        let mut l = vec![b, a];
        upoly::trim(&mut l);
        l
    };
    let mut lin_pows: Vec<UPoly> = vec![vec![Elem::ONE]];
    for j in 1..=d {
        let next = upoly::mul(ext, &lin_pows[j - 1], &lin);
        lin_pows.push(next);
    }
    let mut out: UPoly = Vec::new();
    for t in terms {
        let mut mono = vec![Elem::ZERO; t.exps[0] as usize];
        mono.push(t.coeff);
        out = upoly::add(ext, &out, &upoly::mul(ext, &mono, &lin_pows[t.exps[1] as usize]));
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ScreenVerdict {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Clone, Debug, Serialize)]
pub struct IntegralityScreen {
    pub verdict: ScreenVerdict,
    pub reduced: bool,
    /// Extension degrees whose counts violate `|N_m - q^m - 1| <= 2 g_a q^(m/2)`.
    pub bound_violations: Vec<u32>,
    /// Least `m` from which a reducible curve must violate the bound.
    pub conclusive_from: u32,
    pub checked_up_to: u32,
    pub declared_integral: Option<bool>,
}

/// Least `m` with `q^(m/2) > 2 d^3`.
pub fn screen_degree(curve: &PlaneCurve) -> u32 {
    let d = curve.degree as u128;
    let limit = 4 * d.pow(6);
    let q = curve.q() as u128;
    let mut m = 1;
    while q.pow(m) <= limit {
        m += 1;
    }
    m
}

/// Necessary conditions for geometric integrality: `F` is reduced and every
/// supplied count obeys the singular Weil bound in the arithmetic genus.
/// `counts[i]` is `N_{i+1}`.
pub fn integrality_heuristic(curve: &PlaneCurve, counts: &[u64]) -> Result<IntegralityScreen> {
    let reduced = is_reduced(curve)?;
    let q = curve.q() as i128;
    let g = curve.genus as i128;
    let mut violations = Vec::new();
    for (i, &n) in counts.iter().enumerate() {
        let m = i as u32 + 1;
        let qm = q.pow(m);
        let dev = n as i128 - qm - 1;
        if dev * dev > 4 * g * g * qm {
            violations.push(m);
        }
    }
    let conclusive_from = screen_degree(curve);
    let checked = counts.len() as u32;
    let declared = curve.declared.integral;
    let verdict = if !reduced || !violations.is_empty() || declared == Some(false) {
        ScreenVerdict::Fail
    } else if checked >= conclusive_from || declared == Some(true) {
        ScreenVerdict::Pass
    } else {
        ScreenVerdict::Inconclusive
    };
    Ok(IntegralityScreen {
        verdict,
        reduced,
        bound_violations: violations,
        conclusive_from,
        checked_up_to: checked,
        declared_integral: declared,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn curve(p: u32, src: &str) -> PlaneCurve {
        PlaneCurve::parse(src, shared_field(p, 1).unwrap(), src).unwrap()
    }

    fn budget() -> Budget {
        Budget::default()
    }

    #[test]
    fn genus_and_validation() {
        assert_eq!(curve(3, "x").genus(), 0);
        assert_eq!(curve(3, "y^2*z - x^3").genus(), 1);
        assert_eq!(curve(3, "x^4+y^4+z^4").genus(), 3);
        let f3 = shared_field(3, 1).unwrap();
        let bad = PlaneCurve::parse("bad", f3.clone(), "y^2*z - x^3 + x*z");
        assert!(matches!(bad, Err(Error::InvalidCurve(msg)) if msg.contains("degree 2")));
        assert!(PlaneCurve::parse("zero", f3.clone(), "3x").is_err());
        assert!(PlaneCurve::new("c", f3, vec![([0, 0, 0], Elem::ONE)], Declared::default()).is_err());
    }

    #[test]
    fn documented_counts() {
        assert_eq!(count_points(&curve(3, "x"), 1, &budget()).unwrap(), 4);
        assert_eq!(count_points(&curve(3, "y^2*z - x^3"), 1, &budget()).unwrap(), 4);
        assert_eq!(count_points(&curve(3, "y^2*z - x^3 + x*z^2"), 1, &budget()).unwrap(), 4);
        assert_eq!(
            count_points(&curve(3, "y^2*z - x^3 + x*z^2"), 2, &budget()).unwrap(),
            16
        );
    }

    #[test]
    fn routes_agree() {
        let curves = [
            (2, "x"),
            (3, "x^2 + y*z"),
            (5, "x^2 + y*z"),
            (3, "x*y"),
            (2, "x^3 + y^2*z + x*y*z"),
            (3, "y^2*z - x^3"),
            (3, "y^2*z - x^2*z - x^3"),
            (5, "y^2*z - x^3 + x*z^2"),
            (3, "x^4 + y^4 + z^4 + x^2*y*z"),
            (2, "x^2 + y^2"),
        ];
        for (p, src) in curves {
            let c = curve(p, src);
            for m in 1..=3 {
                let scan = count_points_scan(&c, m, &budget()).unwrap();
                assert_eq!(count_points_sliced(&c, m, &budget()).unwrap(), scan, "{src} m={m}");
                if let Some(n) = count_points_fibration(&c, m) {
                    assert_eq!(n, scan, "fibration {src} m={m}");
                }
            }
        }
    }

    #[test]
    fn counts_are_chart_independent() {
        let c = curve(3, "y^2*z - x^3 + x*z^2 + x*y*z");
        let base: Vec<u64> = (1..=3).map(|m| count_points(&c, m, &budget()).unwrap()).collect();
        for perm in [[0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]] {
            let cp = c.permuted(perm);
            let other: Vec<u64> = (1..=3).map(|m| count_points(&cp, m, &budget()).unwrap()).collect();
            assert_eq!(base, other, "{perm:?}");
        }
    }

    #[test]
    fn budget_refusal() {
        let c = curve(3, "y^2*z - x^3 + x*z^2");
        let err = count_points(&c, 20, &budget()).unwrap_err();
        assert!(matches!(err, Error::Budget { .. }));
        assert_eq!(err.exit_code(), 2);
        // Linear-in-a-variable curves are exempt.
        assert_eq!(
            count_points(&curve(5, "x^2 + y*z"), 12, &budget()).unwrap(),
            5u64.pow(12) + 1
        );
    }

    #[test]
    fn singular_points_of_cubics() {
        let b = budget();
        assert!(singular_closed_points(&curve(3, "x^2 + y*z"), &b)
            .unwrap()
            .points
            .is_empty());
        for src in ["y^2*z - x^3", "y^2*z - x^2*z - x^3", "y^2*z + x^2*z - x^3"] {
            let loc = singular_closed_points(&curve(3, src), &b).unwrap();
            assert!(loc.complete);
            assert_eq!(loc.points.len(), 1, "{src}");
            let p = &loc.points[0];
            assert_eq!((p.degree, p.multiplicity), (1, 2));
            assert_eq!(p.coords, [Elem(0), Elem(0), Elem(1)]);
        }
        let e = singular_closed_points(&curve(3, "y^2*z - x^3 + x*z^2"), &b).unwrap();
        assert!(e.points.is_empty());
    }

    #[test]
    fn singular_points_of_degree_two() {
        // y (y - z) (x^2 + z^2) over F3: the conjugate lines x = +-iz meet the
        // two rational lines in two conjugate pairs.
        let c = curve(3, "x^2*y^2 + y^2*z^2 - x^2*y*z - y*z^3");
        let loc = singular_closed_points(&c, &budget()).unwrap();
        let mut degrees: Vec<u32> = loc.points.iter().map(|p| p.degree).collect();
        degrees.sort();
        assert_eq!(degrees, vec![1, 1, 2, 2]);
        for p in &loc.points {
            assert_eq!(p.multiplicity, 2);
            let orbit = frobenius_orbit(&p.field, 3, p.coords);
            assert_eq!(orbit.len() as u32, p.degree);
            assert_eq!(*orbit.iter().min().unwrap(), p.coords);
        }
    }

    #[test]
    fn local_equations() {
        let b = budget();
        let f3 = shared_field(3, 1).unwrap();
        for (src, expect) in [
            ("y^2*z - x^3", "y^2-x^3"),
            ("y^2*z - x^2*z - x^3", "y^2-x^2-x^3"),
            ("y^2*z + x^2*z - x^3", "y^2+x^2-x^3"),
        ] {
            let c = curve(3, src);
            let p = &singular_closed_points(&c, &b).unwrap().points[0];
            let loc = local_equation(&c, p).unwrap();
            assert_eq!(loc.chart, 'z');
            assert_eq!(loc.f, BiPoly::parse(&f3, expect).unwrap());
        }
        // Cusp moved to (1:1:1): x -> x - z, y -> y - z.
        let moved = PlaneCurve::parse(
            "moved",
            shared_field(5, 1).unwrap(),
            "y^2*z - 2y*z^2 + z^3 - x^3 + 3x^2*z - 3x*z^2 + z^3",
        )
        .unwrap();
        let loc = local_equation_at(&moved, moved.field(), [Elem(1), Elem(1), Elem(1)]).unwrap();
        assert_eq!(loc.f, BiPoly::parse(&shared_field(5, 1).unwrap(), "y^2 - x^3").unwrap());
        assert!(matches!(
            local_equation_at(&moved, moved.field(), [Elem(0), Elem(0), Elem(1)]),
            Err(Error::NotOnCurve)
        ));
    }

    #[test]
    fn integrality_screen_examples() {
        let b = budget();
        let counts =
            |c: &PlaneCurve, m: u32| -> Vec<u64> { (1..=m).map(|i| count_points(c, i, &b).unwrap()).collect() };
        let two_lines = curve(3, "x*y");
        let s = integrality_heuristic(&two_lines, &counts(&two_lines, 3)).unwrap();
        assert_eq!(s.verdict, ScreenVerdict::Fail);
        assert!(s.reduced);
        assert!(s.bound_violations.contains(&3));

        let cusp = curve(3, "y^2*z - x^3");
        let s = integrality_heuristic(&cusp, &counts(&cusp, screen_degree(&cusp))).unwrap();
        assert_eq!(s.verdict, ScreenVerdict::Pass);

        let conj = curve(3, "x^2 + y^2");
        let s = integrality_heuristic(&conj, &counts(&conj, 4)).unwrap();
        assert_eq!(s.verdict, ScreenVerdict::Fail);
        assert_eq!(s.bound_violations, vec![1, 2, 3, 4]);

        let double = curve(3, "x^2 - 2x*y + y^2");
        assert!(!is_reduced(&double).unwrap());
    }
}
