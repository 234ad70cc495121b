//! Truncated power series with exact rational coefficients, and the integer
//! numerator polynomials extracted from zeta series.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Margin of vanishing tail coefficients required beyond the last structural one.
pub const TAIL_MARGIN: usize = 3;

/// Default precision (number of coefficients) for a numerator of degree `2g`.
pub fn default_precision(genus: u32) -> usize {
    2 * genus as usize + 1 + TAIL_MARGIN
}

/// `sum_{n < prec} c_n t^n`; coefficients at `n >= prec` are unknown.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    coeffs: Vec<BigRational>,
    integral: bool,
}

impl TruncatedSeries {
    pub fn new(coeffs: Vec<BigRational>) -> Self {
        TruncatedSeries {
            coeffs,
            integral: false,
        }
    }

    pub fn from_ints<T: Into<BigInt> + Copy>(coeffs: &[T]) -> Self {
        TruncatedSeries {
            coeffs: coeffs.iter().map(|&c| BigRational::from_integer(c.into())).collect(),
            integral: true,
        }
    }

    pub fn one(prec: usize) -> Self {
        let mut coeffs = vec![BigRational::zero(); prec];
        if prec > 0 {
            coeffs[0] = BigRational::one();
        }
        TruncatedSeries { coeffs, integral: true }
    }

    /// `1 / (1 - a t)` to `prec` terms.
    pub fn geometric(a: i64, prec: usize) -> Self {
        let mut c = BigInt::one();
        let coeffs = (0..prec)
            .map(|_| {
                let v = c.clone();
                c *= a;
                v
            })
            .collect::<Vec<_>>();
        Self::from_ints_big(coeffs)
    }

    pub fn from_ints_big(coeffs: Vec<BigInt>) -> Self {
        TruncatedSeries {
            coeffs: coeffs.into_iter().map(BigRational::from_integer).collect(),
            integral: true,
        }
    }

    pub fn prec(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> &BigRational {
        &self.coeffs[n]
    }

    pub fn is_flagged_integral(&self) -> bool {
        self.integral
    }

    /// Mark the series integral after checking every denominator is 1.
    pub fn flag_integral(&mut self) -> Result<()> {
        if let Some(n) = self.coeffs.iter().position(|c| !c.is_integer()) {
            return Err(Error::InconsistentCounts(format!(
                "coefficient of t^{n} is {}, not an integer",
                self.coeffs[n]
            )));
        }
        self.integral = true;
        Ok(())
    }

    /// Integer coefficients, if every coefficient is integral.
    pub fn integer_coeffs(&self) -> Option<Vec<BigInt>> {
        self.coeffs
            .iter()
            .map(|c| c.is_integer().then(|| c.to_integer()))
            .collect()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.coeffs.iter().all(|c| !c.is_negative())
    }

    pub fn truncate(&self, prec: usize) -> Self {
        TruncatedSeries {
            coeffs: self.coeffs.iter().take(prec).cloned().collect(),
            integral: self.integral,
        }
    }

    /// Cauchy product, truncated to the smaller precision.
    pub fn mul(&self, other: &Self) -> Self {
        let prec = self.prec().min(other.prec());
        let mut out = vec![BigRational::zero(); prec];
        for (i, a) in self.coeffs.iter().take(prec).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().take(prec - i).enumerate() {
                out[i + j] += a * b;
            }
        }
        TruncatedSeries {
            coeffs: out,
            integral: self.integral && other.integral,
        }
    }

    /// Multiply by a polynomial given by integer coefficients.
    pub fn mul_poly(&self, poly: &[BigInt]) -> Self {
        let p = TruncatedSeries::from_ints_big(
            (0..self.prec())
                .map(|i| poly.get(i).cloned().unwrap_or_default())
                .collect(),
        );
        self.mul(&p)
    }

    pub fn inverse(&self) -> Result<Self> {
        let prec = self.prec();
        if prec == 0 {
            return Ok(self.clone());
        }
        if self.coeffs[0].is_zero() {
            return Err(Error::NotInvertible);
        }
        let a0_inv = self.coeffs[0].recip();
        let mut out: Vec<BigRational> = Vec::with_capacity(prec);
        out.push(a0_inv.clone());
        for n in 1..prec {
            let s: BigRational = (1..=n).map(|i| &self.coeffs[i] * &out[n - i]).sum();
            out.push(-s * &a0_inv);
        }
        let mut inv = TruncatedSeries::new(out);
        inv.integral = self.integral && inv.coeffs.iter().all(|c| c.is_integer());
        Ok(inv)
    }

    /// `S(t^e)`, truncated at `prec`.
    pub fn substitute_power(&self, e: usize, prec: usize) -> Self {
        let mut out = vec![BigRational::zero(); prec];
        for (n, c) in self.coeffs.iter().enumerate() {
            if n * e >= prec {
                break;
            }
            out[n * e] = c.clone();
        }
        TruncatedSeries {
            coeffs: out,
            integral: self.integral,
        }
    }
}

fn rational_to_string(c: &BigRational) -> String {
    if c.is_integer() {
        c.to_integer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

fn parse_rational(s: &str) -> Option<BigRational> {
    match s.split_once('/') {
        Some((n, d)) => {
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(n.trim().parse().ok()?, d))
        }
        None => Some(BigRational::from_integer(s.trim().parse().ok()?)),
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(n, c)| match n {
                0 => rational_to_string(c),
                1 => format!("{}t", rational_to_string(c)),
                _ => format!("{}t^{n}", rational_to_string(c)),
            })
            .collect();
        let body = if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join(" + ")
        };
        write!(f, "{body} + O(t^{})", self.prec())
    }
}

impl Serialize for TruncatedSeries {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.coeffs.iter().map(rational_to_string))
    }
}

impl<'de> Deserialize<'de> for TruncatedSeries {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw: Vec<String> = Vec::deserialize(d)?;
        let coeffs = raw
            .iter()
            .map(|s| parse_rational(s).ok_or_else(|| D::Error::custom(format!("bad coefficient {s:?}"))))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        let integral = coeffs.iter().all(|c| c.is_integer());
        Ok(TruncatedSeries { coeffs, integral })
    }
}

/// `exp(sum_{m >= 1} N_m t^m / m)` truncated at `prec`: the counting zeta
/// function (Euler product over closed points) of a variety with `N_m`
/// points over the degree-`m` extension. `counts[m - 1] = N_m`.
pub fn zeta_from_counts(counts: &[i64], prec: usize) -> Result<TruncatedSeries> {
    if prec > 0 && counts.len() < prec - 1 {
        return Err(Error::InsufficientPrecision {
            required: prec - 1,
            got: counts.len(),
        });
    }
    if let Some(m) = counts.iter().position(|&c| c < 0) {
        return Err(Error::InconsistentCounts(format!(
            "N_{} = {} is negative",
            m + 1,
            counts[m]
        )));
    }
    let mut b: Vec<BigRational> = Vec::with_capacity(prec);
    if prec > 0 {
        b.push(BigRational::one());
    }
    for n in 1..prec {
        let s: BigRational = (1..=n)
            .map(|m| BigRational::from_integer(BigInt::from(counts[m - 1])) * &b[n - m])
            .sum();
        b.push(s / BigRational::from_integer(BigInt::from(n)));
    }
    let mut z = TruncatedSeries::new(b);
    z.flag_integral()?;
    if !z.is_nonnegative() {
        return Err(Error::InconsistentCounts(
            "zeta series has a negative coefficient".into(),
        ));
    }
    Ok(z)
}

/// Inverse of [`zeta_from_counts`]: read `N_1..N_{prec-1}` off the
/// logarithmic derivative `t Z'/Z`.
pub fn counts_from_zeta(z: &TruncatedSeries) -> Result<Vec<BigRational>> {
    let prec = z.prec();
    if prec == 0 || z.coeffs[0] != BigRational::one() {
        return Err(Error::NotInvertible);
    }
    let mut counts: Vec<BigRational> = Vec::with_capacity(prec.saturating_sub(1));
    for n in 1..prec {
        let mut v = &z.coeffs[n] * BigRational::from_integer(BigInt::from(n));
        for m in 1..n {
            v -= &counts[m - 1] * &z.coeffs[n - m];
        }
        counts.push(v);
    }
    Ok(counts)
}

/// Integer polynomial `p_0 + p_1 t + ... + p_D t^D` with the genus and field
/// size it is to be checked against.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NumeratorPolynomial {
    pub coeffs: Vec<BigInt>,
    pub genus: u32,
    pub q: u64,
}

impl NumeratorPolynomial {
    pub fn new(coeffs: Vec<BigInt>, genus: u32, q: u64) -> Self {
        NumeratorPolynomial { coeffs, genus, q }
    }

    pub fn from_ints(coeffs: &[i64], genus: u32, q: u64) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect(), genus, q)
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }

    pub fn as_i64(&self) -> Option<Vec<i64>> {
        self.coeffs.iter().map(|c| i64::try_from(c).ok()).collect()
    }
}

impl fmt::Display for NumeratorPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            let mag = c.abs();
            let body = match (i, mag.is_one()) {
                (0, _) => mag.to_string(),
                (1, true) => "t".into(),
                (1, false) => format!("{mag}t"),
                (_, true) => format!("t^{i}"),
                (_, false) => format!("{mag}t^{i}"),
            };
            if out.is_empty() {
                if c.is_negative() {
                    out.push('-');
                }
            } else {
                out.push_str(&format!(" {sign} "));
            }
            out.push_str(&body);
        }
        if out.is_empty() {
            out.push('0');
        }
        f.write_str(&out)
    }
}

impl Serialize for NumeratorPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.coeffs.iter().map(|c| c.to_string()))
    }
}

/// Result of clearing the `(1 - t)(1 - qt)` denominator.
#[derive(Clone, Debug)]
pub struct NumeratorExtraction {
    pub numerator: NumeratorPolynomial,
    /// Coefficients of positions `2g + 1 .. prec - 1`.
    pub tail: Vec<BigInt>,
    pub shape_ok: bool,
}

/// Multiply `Z` by `(1 - t)(1 - qt)` and split off `p_0..p_{2g}`.
pub fn extract_numerator(z: &TruncatedSeries, q: u64, genus: u32) -> Result<NumeratorExtraction> {
    let required = default_precision(genus);
    if z.prec() < required {
        return Err(Error::InsufficientPrecision {
            required,
            got: z.prec(),
        });
    }
    let q = BigInt::from(q);
    let denom = vec![BigInt::one(), -(BigInt::one() + &q), q.clone()];
    let product = z.mul_poly(&denom);
    let ints = product
        .integer_coeffs()
        .ok_or_else(|| Error::InconsistentCounts("numerator has non-integral coefficients".into()))?;
    let split = 2 * genus as usize + 1;
    let tail = ints[split..].to_vec();
    let shape_ok = tail.iter().all(|c| c.is_zero());
    Ok(NumeratorExtraction {
        numerator: NumeratorPolynomial::new(ints[..split].to_vec(), genus, q.try_into().unwrap()),
        tail,
        shape_ok,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctionalEquationVerdict {
    pub holds: bool,
    pub first_violation: Option<usize>,
}

/// `p_{2g-i} = q^{g-i} p_i` for `0 <= i <= g`.
pub fn check_functional_equation(p: &NumeratorPolynomial) -> FunctionalEquationVerdict {
    let g = p.genus as usize;
    let q = BigInt::from(p.q);
    let beyond = p.coeffs.iter().skip(2 * g + 1).any(|c| !c.is_zero());
    for i in 0..=g {
        let lhs = p.coeff(2 * g - i);
        let rhs = num_traits::pow(q.clone(), g - i) * p.coeff(i);
        if lhs != rhs {
            return FunctionalEquationVerdict {
                holds: false,
                first_violation: Some(i),
            };
        }
    }
    FunctionalEquationVerdict {
        holds: !beyond,
        first_violation: None,
    }
}

/// Characteristic polynomial of Frobenius `prod (1 - a_i t)` from the power
/// sums `s_m = sum a_i^m`, via Newton's identities
/// `i e_i = sum_{j=1..i} (-1)^{j-1} e_{i-j} s_j`.
pub fn numerator_from_power_sums(power_sums: &[BigInt], genus: u32, q: u64) -> Result<NumeratorPolynomial> {
    let n = 2 * genus as usize;
    if power_sums.len() != n {
        return Err(Error::InsufficientPrecision {
            required: n,
            got: power_sums.len(),
        });
    }
    let mut e: Vec<BigRational> = vec![BigRational::one()];
    for i in 1..=n {
        let mut s = BigRational::zero();
        for j in 1..=i {
            let term = &e[i - j] * BigRational::from_integer(power_sums[j - 1].clone());
            if j % 2 == 1 {
                s += term;
            } else {
                s -= term;
            }
        }
        e.push(s / BigRational::from_integer(BigInt::from(i)));
    }
    let coeffs = e
        .iter()
        .enumerate()
        .map(|(i, c)| {
            if !c.is_integer() {
                return Err(Error::InconsistentCounts(format!("e_{i} = {c} is not an integer")));
            }
            let v = c.to_integer();
            Ok(if i % 2 == 1 { -v } else { v })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(NumeratorPolynomial::new(coeffs, genus, q))
}
