//! Assembly of the Hilbert-zeta series of a plane curve as an Euler product
//! over closed points, and the checks run on it.
//!
//! `Z_Hilb(t) = Z_smooth(t) · Π_P L_P(t^{e_P})`, where `Z_smooth` is the
//! counting zeta of the smooth locus and `L_P(u) = Σ c_k u^k` counts the
//! colength-`k` ideals of the completed local ring at a singular point `P`
//! of residue degree `e_P`.

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::bipoly::BiPoly;
use crate::budget::Budget;
use crate::curve::{
    count_points, frobenius_orbit, integrality_heuristic, local_equation, normalize, screen_degree,
    singular_closed_points, ClosedPoint, IntegralityScreen, LocalEquation, PlaneCurve, ScreenVerdict, SingularLocus,
};
use crate::document::DeclaredPoint;
use crate::error::{Error, Result};
use crate::expr;
use crate::field::{shared_field, Elem, Embedding, FiniteField};
use crate::ideals::{count_colength_ideals, local_series, EnumOptions};
use crate::local::build_truncated;
use crate::series::{
    check_functional_equation, default_precision, extract_numerator, numerator_from_power_sums, zeta_from_counts,
    NumeratorPolynomial, TruncatedSeries, TAIL_MARGIN,
};

/// Source of point counts `N_m = #C(F_{q^m})`.
pub trait PointCounter: Sync {
    fn count(&self, curve: &PlaneCurve, m: u32) -> Result<u64>;
}

#[derive(Clone, Debug, Default)]
pub struct DirectCounter {
    pub budget: Budget,
}

impl PointCounter for DirectCounter {
    fn count(&self, curve: &PlaneCurve, m: u32) -> Result<u64> {
        count_points(curve, m, &self.budget)
    }
}

#[derive(Clone, Debug, Default)]
pub struct ZetaConfig {
    pub budget: Budget,
    /// Lower bound on the series precision; the default is `2 g_a + 4`.
    pub min_precision: usize,
    pub serial: bool,
    pub timings: bool,
}

impl ZetaConfig {
    pub fn enum_options(&self) -> EnumOptions {
        EnumOptions {
            parallel: !self.serial,
            frontier_limit: self.budget.frontier,
        }
    }

    pub fn precision(&self, curve: &PlaneCurve) -> usize {
        default_precision(curve.genus()).max(self.min_precision)
    }
}

/// Branch orbits at a singular point, as residue degrees over its residue field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BranchData {
    Rational(u32),
    OrbitDegrees(Vec<u32>),
}

impl BranchData {
    pub fn orbit_degrees(&self) -> Vec<u32> {
        match self {
            BranchData::Rational(r) => vec![1; *r as usize],
            BranchData::OrbitDegrees(o) => o.clone(),
        }
    }

    /// `Π (1 - t^{e_i})`.
    pub fn denominator(&self) -> Vec<BigInt> {
        let mut poly = vec![BigInt::one()];
        for e in self.orbit_degrees() {
            let e = e as usize;
            let mut next = poly.clone();
            next.resize(poly.len() + e, BigInt::zero());
            for (i, c) in poly.iter().enumerate() {
                next[i + e] -= c;
            }
            poly = next;
        }
        poly
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Clone, Debug, Serialize)]
pub struct LocalVerdicts {
    pub polynomial: bool,
    pub even_degree: bool,
    pub functional_equation: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta_matches: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct LocalTheoremReport {
    pub equation: String,
    pub q: u64,
    pub multiplicity: u32,
    pub orbit_degrees: Vec<u32>,
    pub normalization: String,
    pub n_max: usize,
    pub counts: Vec<u64>,
    pub numerator: Vec<String>,
    pub delta: Option<u32>,
    pub verdicts: LocalVerdicts,
    pub status: Status,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl LocalTheoremReport {
    pub fn numerator_i64(&self) -> Vec<i64> {
        self.numerator.iter().map(|s| s.parse().unwrap()).collect()
    }
}

/// Extra colengths tried past the first guess before giving up on a tail.
const GROWTH_LIMIT: usize = 8;

/// Check that `N(t) = Π(1 - t^{e_i}) Σ c_n t^n` is a polynomial of even
/// degree `2δ` with `n_{2δ-i} = q^{δ-i} n_i`, enumerating ideals up to
/// colength `n_max` and beyond until the tail is seen to vanish.
pub fn verify_local_theorem(
    f: &BiPoly,
    field: &Arc<FiniteField>,
    branches: &BranchData,
    n_max: usize,
    declared_delta: Option<u32>,
    opts: EnumOptions,
) -> Result<LocalTheoremReport> {
    let denom = branches.denominator();
    let q = field.order();
    let cap = n_max + GROWTH_LIMIT;
    let mut n = n_max.max(1);
    let mut notes = Vec::new();
    let (counts, numer, stabilized, multiplicity) = loop {
        let alg = build_truncated(f, field, n)?;
        let res = count_colength_ideals(&alg, n, opts)?;
        let series = TruncatedSeries::from_ints_big(res.counts.iter().map(|&c| BigInt::from(c)).collect());
        let numer = series
            .mul_poly(&denom)
            .integer_coeffs()
            .expect("integer series times integer polynomial");
        let reached = res.counts.len() - 1;
        let last = numer.iter().rposition(|c| !c.is_zero()).unwrap_or(0);
        if reached >= last + TAIL_MARGIN {
            break (res.counts, numer, true, alg.multiplicity());
        }
        if res.cutoff || n >= cap {
            notes.push(if res.cutoff {
                format!("ideal frontier cut off at colength {reached}")
            } else {
                format!("numerator tail still nonzero at colength {reached}")
            });
            break (res.counts, numer, false, alg.multiplicity());
        }
        n += 2;
    };
    let last = numer.iter().rposition(|c| !c.is_zero()).unwrap_or(0);
    let body: Vec<BigInt> = numer[..=last].to_vec();
    let even = last % 2 == 0;
    let delta = even.then_some((last / 2) as u32);
    let fe = even && {
        let d = last / 2;
        let qb = BigInt::from(q);
        (0..=d).all(|i| body[last - i] == num_traits::pow(qb.clone(), d - i) * &body[i]) && body[0] == BigInt::one()
    };
    let delta_matches = declared_delta.map(|dd| delta == Some(dd));
    let verdicts = LocalVerdicts {
        polynomial: stabilized,
        even_degree: stabilized && even,
        functional_equation: stabilized && fe,
        delta_matches,
    };
    let status = if !stabilized {
        Status::Inconclusive
    } else if even && fe && delta_matches != Some(false) {
        Status::Pass
    } else {
        Status::Fail
    };
    let orbit_degrees = branches.orbit_degrees();
    let normalization = if orbit_degrees.iter().all(|&e| e == 1) {
        "rational branches"
    } else {
        "orbit-degree denominator"
    };
    Ok(LocalTheoremReport {
        equation: f.display(field),
        q,
        multiplicity,
        orbit_degrees,
        normalization: normalization.into(),
        n_max: counts.len() - 1,
        counts,
        numerator: if stabilized { body } else { numer }
            .iter()
            .map(|c| c.to_string())
            .collect(),
        delta: if stabilized { delta } else { None },
        verdicts,
        status,
        notes,
    })
}

fn lcm_upto(n: u32) -> u32 {
    fn gcd(a: u32, b: u32) -> u32 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    (1..=n).fold(1, |acc, i| acc / gcd(acc, i) * i)
}

/// Advisory geometric branch count: the pole order at `t = 1` of the local
/// series over `F_{q^L}`, `L = lcm(1..μ)`, where every branch is rational.
/// `None` when the extension is too large to enumerate or the order does
/// not settle within `n_max` colengths.
pub fn estimate_branches(f: &BiPoly, field: &Arc<FiniteField>, n_max: usize, opts: EnumOptions) -> Option<u32> {
    const MAX_ORDER: u64 = 1000;
    let mu = f.order()?;
    let l = lcm_upto(mu);
    let ext = shared_field(field.p(), field.k() * l).ok()?;
    if ext.order() > MAX_ORDER {
        return None;
    }
    let emb = Embedding::new(field, &ext).ok()?;
    let g = f.map_coeffs(&ext, |c| emb.apply(c));
    let alg = build_truncated(&g, &ext, n_max).ok()?;
    let series = local_series(&alg, n_max, opts).ok()?;
    (1..=mu).find(|&r| {
        let numer = series
            .mul_poly(&BranchData::Rational(r).denominator())
            .integer_coeffs()
            .unwrap();
        let last = numer.iter().rposition(|c| !c.is_zero()).unwrap_or(0);
        n_max >= last + TAIL_MARGIN
    })
}

#[derive(Clone, Debug)]
pub struct LocalFactor {
    pub point: ClosedPoint,
    pub equation: LocalEquation,
    /// `Σ c_k u^k` over the residue field.
    pub series_over_residue: TruncatedSeries,
    /// `Σ c_k t^{e k}`.
    pub substituted: TruncatedSeries,
}

pub fn local_factor(curve: &PlaneCurve, point: &ClosedPoint, prec: usize, opts: EnumOptions) -> Result<LocalFactor> {
    let equation = local_equation(curve, point)?;
    let e = point.degree as usize;
    let n_loc = prec.saturating_sub(1) / e;
    let series_over_residue = if n_loc == 0 {
        TruncatedSeries::one(1)
    } else {
        let alg = build_truncated(&equation.f, &equation.field, n_loc)?;
        local_series(&alg, n_loc, opts)?
    };
    let substituted = series_over_residue.substitute_power(e, prec);
    Ok(LocalFactor {
        point: point.clone(),
        equation,
        series_over_residue,
        substituted,
    })
}

/// `S_m`: geometric singular points rational over `F_{q^m}`.
pub fn singular_point_counts(points: &[ClosedPoint], max_m: usize) -> Vec<u64> {
    (1..=max_m as u32)
        .map(|m| {
            points
                .iter()
                .filter(|p| m % p.degree == 0)
                .map(|p| p.degree as u64)
                .sum()
        })
        .collect()
}

/// Counting zeta of the smooth locus, `exp(Σ (N_m - S_m) t^m / m)`.
/// `counts[i] = N_{i+1}`.
pub fn smooth_locus_zeta(counts: &[u64], singular: &[ClosedPoint], prec: usize) -> Result<TruncatedSeries> {
    let s = singular_point_counts(singular, counts.len());
    let smooth: Vec<i64> = counts.iter().zip(&s).map(|(&n, &s)| n as i64 - s as i64).collect();
    zeta_from_counts(&smooth, prec)
}

/// The Euler product of the smooth-locus zeta and the local factors.
pub fn global_hilbert_zeta(smooth: &TruncatedSeries, factors: &[LocalFactor]) -> Result<TruncatedSeries> {
    let mut z = smooth.clone();
    for f in factors {
        z = z.mul(&f.substituted);
    }
    z.flag_integral()?;
    if !z.is_nonnegative() {
        return Err(Error::InconsistentCounts(
            "Hilbert-zeta series has a negative coefficient".into(),
        ));
    }
    Ok(z)
}

/// The declared point whose coordinates lie in the Frobenius orbit of `point`.
pub fn match_declared<'a>(
    curve: &PlaneCurve,
    point: &ClosedPoint,
    declared: &'a [DeclaredPoint],
) -> Result<Option<&'a DeclaredPoint>> {
    let orbit = frobenius_orbit(&point.field, curve.q(), point.coords);
    for dp in declared.iter().filter(|d| d.residue_degree == point.degree) {
        let pt = declared_coords(curve, dp)?;
        if orbit.contains(&normalize(&point.field, pt)) {
            return Ok(Some(dp));
        }
    }
    Ok(None)
}

/// Projective coordinates of a declared point over `F_{q^e}`.
pub fn declared_coords(curve: &PlaneCurve, dp: &DeclaredPoint) -> Result<[Elem; 3]> {
    let base = curve.field();
    let ext = shared_field(base.p(), base.k() * dp.residue_degree)?;
    if dp.coords.len() != 2 {
        return Err(Error::InvalidCurve(format!(
            "declared point needs two affine coordinates, got {}",
            dp.coords.len()
        )));
    }
    let a = expr::parse_element(&ext, &dp.coords[0])?;
    let b = expr::parse_element(&ext, &dp.coords[1])?;
    Ok(match dp.chart.as_str() {
        "z" => [a, b, Elem::ONE],
        "y" => [a, Elem::ONE, b],
        "x" => [Elem::ONE, a, b],
        other => return Err(Error::InvalidCurve(format!("unknown chart {other:?}"))),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct Verdicts {
    pub shape: bool,
    pub degree: bool,
    pub functional_equation: bool,
    pub integrality: bool,
    pub nonnegativity: bool,
    pub hypothesis: bool,
    pub t1_identity: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub macdonald: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub local_theorem: Option<bool>,
}

impl Verdicts {
    /// Every check passed; the characteristic hypothesis is not a check.
    pub fn all_pass(&self) -> bool {
        self.shape
            && self.degree
            && self.functional_equation
            && self.integrality
            && self.nonnegativity
            && self.t1_identity
            && self.macdonald != Some(false)
            && self.local_theorem != Some(false)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LocalFactorReport {
    pub point: String,
    pub residue_degree: u32,
    pub residue_field_order: u64,
    pub chart: String,
    pub equation: String,
    pub multiplicity: u32,
    pub counts: Vec<String>,
    pub substituted: TruncatedSeries,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub declared_orbit_degrees: Option<Vec<u32>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub branch_estimate: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub local_theorem: Option<LocalTheoremReport>,
}

#[derive(Clone, Debug, Serialize)]
pub struct LocusReport {
    pub searched_up_to: u32,
    pub complete: bool,
    pub points: usize,
    pub max_multiplicity: u32,
}

#[derive(Clone, Debug, Serialize)]
pub struct HilbertZetaReport {
    pub curve: String,
    pub equation: String,
    pub p: u32,
    pub k: u32,
    pub q: u64,
    pub degree: u32,
    pub genus: u32,
    pub precision: usize,
    pub counts: BTreeMap<String, u64>,
    pub zeta: TruncatedSeries,
    pub numerator: NumeratorPolynomial,
    pub tail: Vec<String>,
    pub verdicts: Verdicts,
    pub singular_locus: LocusReport,
    pub screen: IntegralityScreen,
    pub local_factors: Vec<LocalFactorReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    pub timing_ms: BTreeMap<String, u64>,
}

impl HilbertZetaReport {
    pub fn passed(&self) -> bool {
        self.verdicts.all_pass()
    }
}

/// Everything needed to assemble `Z_Hilb`.
#[derive(Clone, Debug)]
pub struct Assembly {
    pub precision: usize,
    pub counts: Vec<u64>,
    pub locus: SingularLocus,
    pub factors: Vec<LocalFactor>,
    pub smooth: TruncatedSeries,
    pub zeta: TruncatedSeries,
}

/// Counts, singular locus, local factors and the Euler product at the
/// configured precision.
pub fn assemble(curve: &PlaneCurve, counter: &dyn PointCounter, config: &ZetaConfig) -> Result<Assembly> {
    let precision = config.precision(curve);
    let counts = (1..precision as u32)
        .map(|m| counter.count(curve, m))
        .collect::<Result<Vec<_>>>()?;
    let locus = singular_closed_points(curve, &config.budget)?;
    let factors = locus
        .points
        .iter()
        .map(|p| local_factor(curve, p, precision, config.enum_options()))
        .collect::<Result<Vec<_>>>()?;
    let smooth = smooth_locus_zeta(&counts, &locus.points, precision)?;
    let zeta = global_hilbert_zeta(&smooth, &factors)?;
    Ok(Assembly {
        precision,
        counts,
        locus,
        factors,
        smooth,
        zeta,
    })
}

/// Path A: numerator of the assembled series. Path B: Newton's identities on
/// the Frobenius power sums `q^m + 1 - N_m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MacdonaldCheck {
    pub euler_product: NumeratorPolynomial,
    pub power_sums: NumeratorPolynomial,
    pub agree: bool,
}

pub fn macdonald_two_path_check(
    curve: &PlaneCurve,
    counter: &dyn PointCounter,
    config: &ZetaConfig,
) -> Result<MacdonaldCheck> {
    let asm = assemble(curve, counter, config)?;
    if !asm.locus.points.is_empty() {
        return Err(Error::SingularCurve);
    }
    macdonald_from_assembly(curve, &asm)
}

fn macdonald_from_assembly(curve: &PlaneCurve, asm: &Assembly) -> Result<MacdonaldCheck> {
    let g = curve.genus();
    let q = curve.q();
    let a = extract_numerator(&asm.zeta, q, g)?.numerator;
    let sums: Vec<BigInt> = (1..=2 * g)
        .map(|m| BigInt::from(q).pow(m) + 1 - BigInt::from(asm.counts[m as usize - 1]))
        .collect();
    let b = numerator_from_power_sums(&sums, g, q)?;
    Ok(MacdonaldCheck {
        agree: a == b,
        euler_product: a,
        power_sums: b,
    })
}

/// Run every global check on `curve`. Budget refusals, invalid input and a
/// failed integrality screen are errors; everything else is a verdict.
pub fn verify_weil(curve: &PlaneCurve, counter: &dyn PointCounter, config: &ZetaConfig) -> Result<HilbertZetaReport> {
    let mut timing = BTreeMap::new();
    let mut clock = Instant::now();
    let mut lap = |name: &str, timing: &mut BTreeMap<String, u64>| {
        if config.timings {
            timing.insert(name.to_string(), clock.elapsed().as_millis() as u64);
        }
        clock = Instant::now();
    };

    let precision = config.precision(curve);
    let mut counts = (1..precision as u32)
        .map(|m| counter.count(curve, m))
        .collect::<Result<Vec<_>>>()?;
    lap("counts", &mut timing);

    let mut screen_counts = counts.clone();
    for m in counts.len() as u32 + 1..=screen_degree(curve) {
        match counter.count(curve, m) {
            Ok(n) => screen_counts.push(n),
            Err(Error::Budget { .. }) => break,
            Err(e) => return Err(e),
        }
    }
    let screen = integrality_heuristic(curve, &screen_counts)?;
    if screen.verdict == ScreenVerdict::Fail {
        return Err(Error::NotIntegral(format!(
            "{}: reduced = {}, bound violated at m = {:?}",
            curve.name(),
            screen.reduced,
            screen.bound_violations
        )));
    }
    lap("screen", &mut timing);

    let locus = singular_closed_points(curve, &config.budget)?;
    lap("singular_locus", &mut timing);

    let opts = config.enum_options();
    let mut notes = Vec::new();
    if screen.verdict == ScreenVerdict::Inconclusive {
        notes.push(format!(
            "integrality screen inconclusive: counts reach m = {}, conclusive from m = {}",
            screen.checked_up_to, screen.conclusive_from
        ));
    }
    if !locus.complete {
        notes.push(format!(
            "singular locus possibly incomplete: searched residue degrees up to {} of {}",
            locus.searched_up_to,
            curve.genus()
        ));
    }
    let declared = &curve.declared().singular_points;
    let mut matched = vec![false; declared.len()];
    let mut factors = Vec::new();
    let mut factor_reports = Vec::new();
    let mut local_ok: Option<bool> = None;
    for point in &locus.points {
        let factor = local_factor(curve, point, precision, opts)?;
        let dp = match_declared(curve, point, declared)?;
        if let Some(dp) = dp {
            let idx = declared.iter().position(|d| std::ptr::eq(d, dp)).unwrap();
            matched[idx] = true;
        }
        let e = point.degree;
        let delta_hint = dp.and_then(|d| d.delta).unwrap_or(curve.genus() / e) as usize;
        let start = (2 * delta_hint + TAIL_MARGIN).max(1);
        let declared_branches = dp.and_then(|d| d.branch_orbits());
        let estimate = if declared_branches.is_none() {
            estimate_branches(&factor.equation.f, &factor.equation.field, start + 2, opts)
        } else {
            None
        };
        let branch_data = declared_branches
            .clone()
            .map(BranchData::OrbitDegrees)
            .or(estimate.map(BranchData::Rational));
        let local_theorem = match &branch_data {
            Some(bd) => {
                let mut r = verify_local_theorem(
                    &factor.equation.f,
                    &factor.equation.field,
                    bd,
                    start,
                    dp.and_then(|d| d.delta),
                    opts,
                )?;
                if declared_branches.is_none() {
                    r.notes.push("branch count from the pole-order estimate".into());
                }
                match r.status {
                    Status::Pass => {
                        local_ok.get_or_insert(true);
                    }
                    Status::Fail => local_ok = Some(false),
                    Status::Inconclusive => {
                        notes.push(format!("local check at {} inconclusive", point.format_coords()))
                    }
                }
                Some(r)
            }
            None => {
                notes.push(format!(
                    "no branch data for {}; local check skipped",
                    point.format_coords()
                ));
                None
            }
        };
        factor_reports.push(LocalFactorReport {
            point: point.format_coords(),
            residue_degree: e,
            residue_field_order: point.field.order(),
            chart: factor.equation.chart.to_string(),
            equation: factor.equation.f.display(&factor.equation.field),
            multiplicity: point.multiplicity,
            counts: factor
                .series_over_residue
                .coeffs()
                .iter()
                .map(|c| c.to_string())
                .collect(),
            substituted: factor.substituted.clone(),
            declared_orbit_degrees: declared_branches,
            branch_estimate: estimate,
            local_theorem,
        });
        factors.push(factor);
    }
    for (dp, found) in declared.iter().zip(&matched) {
        if !found {
            notes.push(format!(
                "declared singular point {:?} in chart {} was not found",
                dp.coords, dp.chart
            ));
        }
    }
    lap("local_factors", &mut timing);

    let smooth = smooth_locus_zeta(&counts, &locus.points, precision)?;
    let zeta = global_hilbert_zeta(&smooth, &factors)?;
    let extraction = extract_numerator(&zeta, curve.q(), curve.genus())?;
    let numerator = extraction.numerator.clone();
    let g = curve.genus() as usize;
    let p_top = numerator.coeff(2 * g);
    let fe = check_functional_equation(&numerator);
    let degree_ok = !p_top.is_zero()
        && numerator.degree() == Some(2 * g)
        && (numerator.coeff(0) != BigInt::one() || p_top == BigInt::from(curve.q()).pow(g as u32));
    let max_mult = locus.points.iter().map(|p| p.multiplicity).max().unwrap_or(1);
    let smooth_curve = locus.points.is_empty() && locus.complete;
    let asm = Assembly {
        precision,
        counts: counts.clone(),
        locus: locus.clone(),
        factors,
        smooth,
        zeta: zeta.clone(),
    };
    let macdonald = if smooth_curve {
        Some(macdonald_from_assembly(curve, &asm)?.agree)
    } else {
        None
    };
    lap("assembly", &mut timing);

    let verdicts = Verdicts {
        shape: extraction.shape_ok,
        degree: degree_ok,
        functional_equation: fe.holds,
        integrality: zeta.is_flagged_integral(),
        nonnegativity: zeta.is_nonnegative(),
        hypothesis: curve.field().p() > max_mult,
        t1_identity: zeta.prec() > 1 && zeta.coeff(1) == &BigInt::from(counts[0]).into(),
        macdonald,
        local_theorem: local_ok,
    };
    if !verdicts.hypothesis {
        notes.push(format!(
            "outside hypotheses: characteristic {} <= maximal multiplicity {max_mult}",
            curve.field().p()
        ));
    }
    counts.truncate(precision - 1);
    Ok(HilbertZetaReport {
        curve: curve.name().to_string(),
        equation: curve.to_string(),
        p: curve.field().p(),
        k: curve.field().k(),
        q: curve.q(),
        degree: curve.degree(),
        genus: curve.genus(),
        precision,
        counts: counts
            .iter()
            .enumerate()
            .map(|(i, &n)| ((i + 1).to_string(), n))
            .collect(),
        zeta,
        numerator,
        tail: extraction.tail.iter().map(|c| c.to_string()).collect(),
        verdicts,
        singular_locus: LocusReport {
            searched_up_to: locus.searched_up_to,
            complete: locus.complete,
            points: locus.points.len(),
            max_multiplicity: max_mult,
        },
        screen,
        local_factors: factor_reports,
        notes,
        timing_ms: timing,
    })
}

/// Human-readable summary of a report.
pub fn render_table(r: &HilbertZetaReport) -> String {
    let yes = |b: bool| if b { "pass" } else { "FAIL" };
    let mut out = String::new();
    out.push_str(&format!("curve       {}  ({} over F_{})\n", r.curve, r.equation, r.q));
    out.push_str(&format!("genus       {}  (degree {})\n", r.genus, r.degree));
    let counts: Vec<String> = r.counts.iter().map(|(m, n)| format!("N{m}={n}")).collect();
    out.push_str(&format!("counts      {}\n", counts.join(" ")));
    out.push_str(&format!("Z_Hilb      {}\n", r.zeta));
    out.push_str(&format!("P(t)        {}\n", r.numerator));
    for lf in &r.local_factors {
        out.push_str(&format!(
            "singular    {} deg {} mult {}  f = {}",
            lf.point, lf.residue_degree, lf.multiplicity, lf.equation
        ));
        if let Some(lt) = &lf.local_theorem {
            out.push_str(&format!("  N(t) = [{}] {:?}", lt.numerator.join(", "), lt.status));
        }
        out.push('\n');
    }
    let v = &r.verdicts;
    let mut checks = vec![
        ("shape", v.shape),
        ("degree", v.degree),
        ("functional_equation", v.functional_equation),
        ("integrality", v.integrality),
        ("nonnegativity", v.nonnegativity),
        ("t1_identity", v.t1_identity),
    ];
    if let Some(m) = v.macdonald {
        checks.push(("macdonald", m));
    }
    if let Some(l) = v.local_theorem {
        checks.push(("local_theorem", l));
    }
    for (name, ok) in checks {
        out.push_str(&format!("  {name:<22}{}\n", yes(ok)));
    }
    out.push_str(&format!(
        "  {:<22}{}\n",
        "hypothesis",
        if v.hypothesis { "char > mult" } else { "char <= mult" }
    ));
    for n in &r.notes {
        out.push_str(&format!("note: {n}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::document::Declared;

    fn curve(p: u32, src: &str) -> PlaneCurve {
        PlaneCurve::parse(src, shared_field(p, 1).unwrap(), src).unwrap()
    }

    fn ints(s: &TruncatedSeries) -> Vec<i64> {
        s.integer_coeffs()
            .unwrap()
            .iter()
            .map(|c| c.try_into().unwrap())
            .collect()
    }

    fn local(p: u32, src: &str, b: BranchData, n: usize) -> LocalTheoremReport {
        let field = shared_field(p, 1).unwrap();
        let f = BiPoly::parse(&field, src).unwrap();
        verify_local_theorem(&f, &field, &b, n, None, EnumOptions::default()).unwrap()
    }

    #[test]
    fn branch_denominators() {
        let d = BranchData::OrbitDegrees(vec![1, 2]).denominator();
        assert_eq!(d, [1, -1, -1, 1].map(BigInt::from).to_vec());
        assert_eq!(
            BranchData::Rational(2).denominator(),
            [1, -2, 1].map(BigInt::from).to_vec()
        );
    }

    #[test]
    fn local_theorem_examples() {
        let r = local(3, "y^2-x^3", BranchData::Rational(1), 6);
        assert_eq!((r.status, r.delta), (Status::Pass, Some(1)));
        assert_eq!(r.numerator_i64(), vec![1, 0, 3]);
        let r = local(3, "x*y", BranchData::Rational(2), 6);
        assert_eq!(r.numerator_i64(), vec![1, -1, 3]);
        assert_eq!(r.status, Status::Pass);
        let r = local(3, "y^2+x^2-x^3", BranchData::OrbitDegrees(vec![2]), 6);
        assert_eq!(r.numerator_i64(), vec![1, 1, 3]);
        assert_eq!(r.normalization, "orbit-degree denominator");
        assert_eq!(r.status, Status::Pass);
        let r = local(2, "x*y", BranchData::Rational(2), 6);
        assert_eq!(r.numerator_i64(), vec![1, -1, 2]);
        let r = local(3, "y^2-x^4", BranchData::Rational(2), 8);
        assert_eq!((r.status, r.delta), (Status::Pass, Some(2)));
    }

    #[test]
    fn wrong_branch_count_is_not_a_polynomial() {
        let r = local(3, "x*y", BranchData::Rational(1), 5);
        assert_eq!(r.status, Status::Inconclusive);
        assert!(!r.verdicts.polynomial);
    }

    #[test]
    fn branch_estimates() {
        let opts = EnumOptions::default();
        let f3 = shared_field(3, 1).unwrap();
        for (src, r) in [("x*y", 2), ("y^2-x^3", 1), ("y^2+x^2-x^3", 2), ("y^2-x^4", 2)] {
            let f = BiPoly::parse(&f3, src).unwrap();
            assert_eq!(estimate_branches(&f, &f3, 8, opts), Some(r), "{src}");
        }
    }

    #[test]
    fn smooth_locus_examples() {
        let b = Budget::default();
        let cusp = curve(3, "y^2*z - x^3");
        let counts: Vec<u64> = (1..=5).map(|m| count_points(&cusp, m, &b).unwrap()).collect();
        let locus = singular_closed_points(&cusp, &b).unwrap();
        let s = smooth_locus_zeta(&counts, &locus.points, 6).unwrap();
        assert_eq!(ints(&s), vec![1, 3, 9, 27, 81, 243]);

        let node = curve(3, "y^2*z - x^2*z - x^3");
        let counts: Vec<u64> = (1..=5).map(|m| count_points(&node, m, &b).unwrap()).collect();
        assert_eq!(counts, vec![3, 9, 27, 81, 243]);
        let locus = singular_closed_points(&node, &b).unwrap();
        let s = smooth_locus_zeta(&counts, &locus.points, 6).unwrap();
        // (1 - t) / (1 - 3t)
        assert_eq!(ints(&s), vec![1, 2, 6, 18, 54, 162]);
    }

    #[test]
    fn global_series_examples() {
        let cfg = ZetaConfig::default();
        let counter = DirectCounter::default();
        let line = curve(2, "x");
        let z = assemble(&line, &counter, &cfg).unwrap().zeta;
        assert_eq!(ints(&z)[..4], [1, 3, 7, 15]);

        let cusp = curve(3, "y^2*z - x^3");
        let z = assemble(&cusp, &counter, &cfg).unwrap().zeta;
        assert_eq!(ints(&z)[..5], [1, 4, 16, 52, 160]);
    }

    #[test]
    fn weil_reports() {
        let counter = DirectCounter::default();
        let cfg = ZetaConfig::default();
        let conic = curve(5, "x^2 + y*z");
        let r = verify_weil(&conic, &counter, &cfg).unwrap();
        assert!(r.passed());
        assert_eq!(r.numerator.as_i64().unwrap(), vec![1]);
        assert_eq!(r.verdicts.macdonald, Some(true));

        let cusp = curve(3, "y^2*z - x^3");
        let r = verify_weil(&cusp, &counter, &cfg).unwrap();
        assert!(r.passed());
        assert_eq!(r.numerator.as_i64().unwrap(), vec![1, 0, 3]);
        assert_eq!(r.local_factors[0].branch_estimate, Some(1));

        let cusp2 = curve(2, "y^2*z - x^3");
        let r = verify_weil(&cusp2, &counter, &cfg).unwrap();
        assert!(!r.verdicts.hypothesis);
        assert!(r.passed());
    }

    #[test]
    fn two_lines_are_refused() {
        let err = verify_weil(&curve(3, "x*y"), &DirectCounter::default(), &ZetaConfig::default()).unwrap_err();
        assert!(matches!(err, Error::NotIntegral(_)));
        assert_eq!(err.exit_code(), 3);
    }

    #[test]
    fn macdonald_elliptic_f3() {
        let e = curve(3, "y^2*z - x^3 + x*z^2");
        let m = macdonald_two_path_check(&e, &DirectCounter::default(), &ZetaConfig::default()).unwrap();
        assert!(m.agree);
        assert_eq!(m.power_sums.as_i64().unwrap(), vec![1, 0, 3]);
        let cusp = curve(3, "y^2*z - x^3");
        assert!(matches!(
            macdonald_two_path_check(&cusp, &DirectCounter::default(), &ZetaConfig::default()),
            Err(Error::SingularCurve)
        ));
    }

    #[test]
    fn declared_points_match_orbits() {
        let f3 = shared_field(3, 1).unwrap();
        let c = PlaneCurve::new(
            "nonsplit",
            f3.clone(),
            vec![([0, 2, 1], Elem(1)), ([2, 0, 1], Elem(1)), ([3, 0, 0], Elem(2))],
            Declared::default(),
        )
        .unwrap();
        let locus = singular_closed_points(&c, &Budget::default()).unwrap();
        let dp = DeclaredPoint {
            chart: "z".into(),
            coords: vec!["0".into(), "0".into()],
            residue_degree: 1,
            branches: None,
            orbit_degrees: Some(vec![2]),
            delta: Some(1),
        };
        let found = match_declared(&c, &locus.points[0], std::slice::from_ref(&dp)).unwrap();
        assert!(found.is_some());
        let elsewhere = DeclaredPoint {
            coords: vec!["1".into(), "0".into()],
            ..dp
        };
        assert!(match_declared(&c, &locus.points[0], &[elsewhere]).unwrap().is_none());
    }
}
