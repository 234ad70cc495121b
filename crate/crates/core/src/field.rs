//! Finite fields `F_{p^k}` in polynomial basis.
//!
//! An element is stored as the integer `c_0 + c_1 p + ... + c_{k-1} p^{k-1}`
//! of its coordinate vector in the basis `1, u, ..., u^{k-1}`, where `u` is
//! the class of the generator modulo the field modulus. Ordering elements by
//! that integer is the lexicographic order on coordinate vectors with the
//! top coordinate most significant, which is the order [`FiniteField::elements`]
//! yields and every "least element" choice in this crate uses.
//!
//! Fields of order at most 2^22 also carry Zech logarithm tables; all
//! arithmetic goes through them when present.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::upoly;

/// Raw element handle. Only meaningful together with its [`FiniteField`].
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Elem(pub u64);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

const TABLE_LIMIT: u64 = 1 << 22;

/// Discrete log / Zech log tables with respect to a fixed primitive element.
///
/// Logs live in `0..q-1`; the value `q - 1` stands for the log of zero.
pub struct LogTables {
    exp: Vec<u32>,
    log: Vec<u32>,
    zech: Vec<u32>,
    zero: u32,
    generator: Elem,
}

impl LogTables {
    #[inline]
    pub fn zero(&self) -> u32 {
        self.zero
    }

    #[inline]
    pub fn to_log(&self, a: Elem) -> u32 {
        self.log[a.0 as usize]
    }

    #[inline]
    pub fn from_log(&self, l: u32) -> Elem {
        if l == self.zero {
            Elem::ZERO
        } else {
            Elem(self.exp[l as usize] as u64)
        }
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == self.zero || b == self.zero {
            return self.zero;
        }
        let s = a + b;
        if s >= self.zero {
            s - self.zero
        } else {
            s
        }
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        if a == self.zero {
            return b;
        }
        if b == self.zero {
            return a;
        }
        let d = if b >= a { b - a } else { b + self.zero - a };
        let z = self.zech[d as usize];
        if z == self.zero {
            return self.zero;
        }
        let s = a + z;
        if s >= self.zero {
            s - self.zero
        } else {
            s
        }
    }

    pub fn generator(&self) -> Elem {
        self.generator
    }
}

/// The field `F_p[u] / (modulus)`.
pub struct FiniteField {
    p: u32,
    k: u32,
    order: u64,
    modulus: Vec<u32>,
    pows: Vec<u64>,
    tables: Option<LogTables>,
}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteField")
            .field("p", &self.p)
            .field("k", &self.k)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.k == other.k && self.modulus == other.modulus
    }
}

impl Eq for FiniteField {}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Build `F_{p^k}` with the lexicographically least monic irreducible modulus.
pub fn make_field(p: u32, k: u32) -> Result<FiniteField> {
    if !is_prime(p as u64) {
        return Err(Error::NotPrime(p as u64));
    }
    if k == 0 {
        return Err(Error::ZeroDegree);
    }
    let order = (p as u64).checked_pow(k).ok_or(Error::FieldTooLarge { p, k })?;
    let modulus = if k == 1 { vec![0, 1] } else { least_irreducible(p, k) };
    Ok(FiniteField::with_modulus(p, k, order, modulus))
}

/// Shared, lazily built instance of `F_{p^k}`.
pub fn shared_field(p: u32, k: u32) -> Result<Arc<FiniteField>> {
    type FieldCache = Mutex<HashMap<(u32, u32), Arc<FiniteField>>>;
    static CACHE: OnceLock<FieldCache> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(f) = cache.lock().unwrap().get(&(p, k)) {
        return Ok(Arc::clone(f));
    }
    let field = Arc::new(make_field(p, k)?);
    let mut guard = cache.lock().unwrap();
    Ok(Arc::clone(guard.entry((p, k)).or_insert(field)))
}

fn least_irreducible(p: u32, k: u32) -> Vec<u32> {
    let base = make_field(p, 1).expect("prime field");
    let count = (p as u64).pow(k);
    for code in 0..count {
        let mut coeffs: Vec<u32> = Vec::with_capacity(k as usize + 1);
        let mut c = code;
        for _ in 0..k {
            coeffs.push((c % p as u64) as u32);
            c /= p as u64;
        }
        coeffs.push(1);
        let f: upoly::UPoly = coeffs.iter().map(|&c| Elem(c as u64)).collect();
        if is_irreducible_over_prime(&base, &f) {
            return coeffs;
        }
    }
    unreachable!("irreducible polynomials of every degree exist")
}

/// Irreducibility over the prime field: no factor of degree `<= deg/2`,
/// tested via `gcd(f, u^(p^i) - u) = 1` for `i = 1..=deg/2`.
fn is_irreducible_over_prime(base: &FiniteField, f: &[Elem]) -> bool {
    let d = upoly::degree(f).unwrap_or(0);
    if d == 0 {
        return false;
    }
    let mut h = upoly::rem(base, &upoly::x(), f);
    for _ in 1..=d / 2 {
        h = upoly::powmod(base, &h, base.p as u64, f);
        let g = upoly::gcd(base, f, &upoly::sub(base, &h, &upoly::x()));
        if upoly::degree(&g) != Some(0) {
            return false;
        }
    }
    true
}

impl FiniteField {
    fn with_modulus(p: u32, k: u32, order: u64, modulus: Vec<u32>) -> Self {
        let pows = (0..=k).map(|i| (p as u64).pow(i)).collect();
        let mut field = FiniteField {
            p,
            k,
            order,
            modulus,
            pows,
            tables: None,
        };
        if order <= TABLE_LIMIT && order > 2 {
            field.tables = Some(field.build_tables());
        }
        field
    }

    fn build_tables(&self) -> LogTables {
        let q = self.order;
        let factors = prime_factors(q - 1);
        let generator = (2..q)
            .map(Elem)
            .find(|&g| factors.iter().all(|&l| self.slow_pow(g, (q - 1) / l) != Elem::ONE))
            .expect("multiplicative group is cyclic");
        let zero = (q - 1) as u32;
        let mut exp = vec![0u32; (q - 1) as usize];
        let mut log = vec![zero; q as usize];
        let mut cur = Elem::ONE;
        for (i, slot) in exp.iter_mut().enumerate() {
            *slot = cur.0 as u32;
            log[cur.0 as usize] = i as u32;
            cur = self.slow_mul(cur, generator);
        }
        let zech = exp
            .iter()
            .map(|&e| log[self.slow_add(Elem(e as u64), Elem::ONE).0 as usize])
            .collect();
        LogTables {
            exp,
            log,
            zech,
            zero,
            generator,
        }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// Number of elements `p^k`.
    pub fn order(&self) -> u64 {
        self.order
    }

    /// Monic modulus, low degree first (length `k + 1`).
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn tables(&self) -> Option<&LogTables> {
        self.tables.as_ref()
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> + '_ {
        (0..self.order).map(Elem)
    }

    pub fn digits(&self, a: Elem) -> Vec<u32> {
        let mut v = a.0;
        (0..self.k)
            .map(|_| {
                let d = (v % self.p as u64) as u32;
                v /= self.p as u64;
                d
            })
            .collect()
    }

    pub fn from_digits(&self, digits: &[u32]) -> Elem {
        Elem(
            digits
                .iter()
                .zip(&self.pows)
                .map(|(&d, &w)| (d % self.p) as u64 * w)
                .sum(),
        )
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> Elem {
        Elem(n.rem_euclid(self.p as i64) as u64)
    }

    /// The generator `u` (equal to 0 when `k = 1`, whose modulus is `u`).
    pub fn generator(&self) -> Elem {
        if self.k == 1 {
            Elem::ZERO
        } else {
            Elem(self.p as u64)
        }
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if self.p == 2 {
            return Elem(a.0 ^ b.0);
        }
        if self.k == 1 {
            let s = a.0 + b.0;
            return Elem(if s >= self.p as u64 { s - self.p as u64 } else { s });
        }
        match &self.tables {
            Some(t) => t.from_log(t.add(t.to_log(a), t.to_log(b))),
            None => self.slow_add(a, b),
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        if self.p == 2 || a.is_zero() {
            return a;
        }
        if self.k == 1 {
            return Elem(self.p as u64 - a.0);
        }
        if let Some(t) = &self.tables {
            return t.from_log(t.mul(t.to_log(a), t.zero / 2));
        }
        let d: Vec<u32> = self.digits(a).into_iter().map(|c| (self.p - c) % self.p).collect();
        self.from_digits(&d)
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if self.k == 1 {
            return Elem(a.0 * b.0 % self.p as u64);
        }
        match &self.tables {
            Some(t) => t.from_log(t.mul(t.to_log(a), t.to_log(b))),
            None => self.slow_mul(a, b),
        }
    }

    /// Multiplicative inverse. Panics on zero; see [`FieldElement::inv`] for
    /// the checked form.
    pub fn inv(&self, a: Elem) -> Elem {
        assert!(!a.is_zero(), "inverse of zero");
        match &self.tables {
            Some(t) => {
                let l = t.to_log(a);
                t.from_log(if l == 0 { 0 } else { t.zero - l })
            }
            None => self.pow(a, self.order - 2),
        }
    }

    pub fn pow(&self, a: Elem, mut e: u64) -> Elem {
        let mut result = Elem::ONE;
        let mut b = a;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(result, b);
            }
            e >>= 1;
            if e > 0 {
                b = self.mul(b, b);
            }
        }
        result
    }

    /// Absolute Frobenius `a -> a^p`.
    pub fn frobenius(&self, a: Elem) -> Elem {
        self.pow(a, self.p as u64)
    }

    fn slow_add(&self, a: Elem, b: Elem) -> Elem {
        let da = self.digits(a);
        let db = self.digits(b);
        let s: Vec<u32> = da.iter().zip(&db).map(|(&x, &y)| (x + y) % self.p).collect();
        self.from_digits(&s)
    }

    fn slow_mul(&self, a: Elem, b: Elem) -> Elem {
        let k = self.k as usize;
        let p = self.p as u64;
        let da = self.digits(a);
        let db = self.digits(b);
        let mut prod = vec![0u64; 2 * k - 1];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        for top in (k..prod.len()).rev() {
            let c = prod[top];
            if c == 0 {
                continue;
            }
            prod[top] = 0;
            for (i, &m) in self.modulus[..k].iter().enumerate() {
                let idx = top - k + i;
                prod[idx] = (prod[idx] + (p - c) * m as u64) % p;
            }
        }
        let digits: Vec<u32> = prod[..k].iter().map(|&c| c as u32).collect();
        self.from_digits(&digits)
    }

    fn slow_pow(&self, a: Elem, mut e: u64) -> Elem {
        let mut result = Elem::ONE;
        let mut b = a;
        while e > 0 {
            if e & 1 == 1 {
                result = self.slow_mul(result, b);
            }
            e >>= 1;
            b = self.slow_mul(b, b);
        }
        result
    }

    /// Render an element as a polynomial in `u`, e.g. `2u+1`.
    pub fn format(&self, a: Elem) -> String {
        if self.k == 1 {
            return a.0.to_string();
        }
        let digits = self.digits(a);
        let mut parts = Vec::new();
        for (i, &c) in digits.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let coeff = if c == 1 && i > 0 { String::new() } else { c.to_string() };
            parts.push(match i {
                0 => coeff,
                1 => format!("{coeff}u"),
                _ => format!("{coeff}u^{i}"),
            });
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join("+")
        }
    }
}

/// Field element bundled with its field, for callers who want cross-field
/// mistakes caught at runtime.
#[derive(Clone, Debug)]
pub struct FieldElement {
    field: Arc<FiniteField>,
    value: Elem,
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        *self.field == *other.field && self.value == other.value
    }
}

impl Eq for FieldElement {}

impl FieldElement {
    pub fn new(field: &Arc<FiniteField>, value: Elem) -> Result<Self> {
        if value.0 >= field.order() {
            return Err(Error::Parse(format!(
                "element index {} outside a field of order {}",
                value.0,
                field.order()
            )));
        }
        Ok(FieldElement {
            field: Arc::clone(field),
            value,
        })
    }

    pub fn from_coeffs(field: &Arc<FiniteField>, coeffs: &[u32]) -> Result<Self> {
        if coeffs.len() != field.k() as usize || coeffs.iter().any(|&c| c >= field.p()) {
            return Err(Error::Parse(format!(
                "coefficient vector {coeffs:?} is not a point of F_{}^{}",
                field.p(),
                field.k()
            )));
        }
        Ok(FieldElement {
            field: Arc::clone(field),
            value: field.from_digits(coeffs),
        })
    }

    pub fn field(&self) -> &Arc<FiniteField> {
        &self.field
    }

    pub fn value(&self) -> Elem {
        self.value
    }

    pub fn coeffs(&self) -> Vec<u32> {
        self.field.digits(self.value)
    }

    fn same_field(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.field, &other.field) || *self.field == *other.field {
            Ok(())
        } else {
            Err(Error::CrossField)
        }
    }

    fn wrap(&self, value: Elem) -> Self {
        FieldElement {
            field: Arc::clone(&self.field),
            value,
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(self.wrap(self.field.add(self.value, other.value)))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(self.wrap(self.field.sub(self.value, other.value)))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(self.wrap(self.field.mul(self.value, other.value)))
    }

    pub fn inv(&self) -> Result<Self> {
        if self.value.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.wrap(self.field.inv(self.value)))
    }

    pub fn pow(&self, e: u64) -> Self {
        self.wrap(self.field.pow(self.value, e))
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.field.format(self.value))
    }
}

/// A fixed embedding `src -> dst`: the generator of `src` goes to the least
/// root of its modulus in `dst`.
#[derive(Clone, Debug)]
pub struct Embedding {
    src: Arc<FiniteField>,
    dst: Arc<FiniteField>,
    powers: Vec<Elem>,
}

impl Embedding {
    pub fn new(src: &Arc<FiniteField>, dst: &Arc<FiniteField>) -> Result<Self> {
        if src.p() != dst.p() || !dst.k().is_multiple_of(src.k()) {
            return Err(Error::IncompatibleEmbedding {
                src_p: src.p(),
                src_k: src.k(),
                dst_p: dst.p(),
                dst_k: dst.k(),
            });
        }
        let modulus: Vec<Elem> = src.modulus().iter().map(|&c| dst.from_int(c as i64)).collect();
        let root = if src.k() == 1 {
            Elem::ZERO
        } else {
            dst.elements()
                .find(|&v| upoly::eval(dst, &modulus, v).is_zero())
                .expect("a subfield of the right degree exists")
        };
        let mut powers = Vec::with_capacity(src.k() as usize);
        let mut cur = Elem::ONE;
        for _ in 0..src.k() {
            powers.push(cur);
            cur = dst.mul(cur, root);
        }
        Ok(Embedding {
            src: Arc::clone(src),
            dst: Arc::clone(dst),
            powers,
        })
    }

    pub fn src(&self) -> &Arc<FiniteField> {
        &self.src
    }

    pub fn dst(&self) -> &Arc<FiniteField> {
        &self.dst
    }

    /// Image of the generator of `src`.
    pub fn generator_image(&self) -> Elem {
        if self.src.k() == 1 {
            Elem::ZERO
        } else {
            self.powers[1]
        }
    }

    pub fn apply(&self, a: Elem) -> Elem {
        if self.src.k() == 1 {
            return Elem(a.0);
        }
        self.src
            .digits(a)
            .iter()
            .zip(&self.powers)
            .fold(Elem::ZERO, |acc, (&c, &w)| {
                self.dst.add(acc, self.dst.mul(self.dst.from_int(c as i64), w))
            })
    }
}

/// Checked one-shot embedding of a single element.
pub fn embed(src: &Arc<FiniteField>, dst: &Arc<FiniteField>, a: &FieldElement) -> Result<FieldElement> {
    if **a.field() != **src {
        return Err(Error::CrossField);
    }
    let e = Embedding::new(src, dst)?;
    FieldElement::new(dst, e.apply(a.value()))
}
