//! Exact field arithmetic.
//!
//! Finite fields GF(p^k) with q = p^k <= 128 are table driven: an element is
//! its coefficient vector over GF(p) packed base p into a byte, so that the
//! natural integer order of the codes is also the canonical enumeration order
//! (0, 1, then lexicographic in the coefficient vector). The rationals are
//! backed by `num_rational::BigRational`.
//!
//! Algorithms elsewhere in the crate are generic over [`Field`], so the same
//! canonicalization code runs over GF(q) and over Q.

use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::Value;

use crate::error::{Error, Result};

/// Largest supported finite field.
pub const MAX_Q: u64 = 128;

/// The operations every coefficient field must provide.
pub trait Field: Send + Sync {
    type Elem: Clone + Eq + Ord + Hash + fmt::Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse, `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    /// 0 for the rationals.
    fn characteristic(&self) -> u64;
    fn from_i64(&self, n: i64) -> Self::Elem;
    /// All elements in canonical order, or `None` for an infinite field.
    fn elements(&self) -> Option<Vec<Self::Elem>>;
    /// The field-spec string this field was built from.
    fn spec_string(&self) -> String;
    fn elem_to_json(&self, a: &Self::Elem) -> Value;
    fn elem_from_json(&self, v: &Value) -> Result<Self::Elem>;
    fn format_elem(&self, a: &Self::Elem) -> String;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem> {
        let inv = self.inv(b).ok_or(Error::DivisionByZero)?;
        Ok(self.mul(a, &inv))
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }

    fn nonzero_elements(&self) -> Option<Vec<Self::Elem>> {
        self.elements()
            .map(|els| els.into_iter().filter(|x| !self.is_zero(x)).collect())
    }

    /// Number of elements, `None` when infinite.
    fn order(&self) -> Option<u64> {
        None
    }
}

/// Element of a finite field: the base-p encoding of its coefficient vector.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Gf(pub(crate) u8);

impl Gf {
    pub fn code(self) -> u32 {
        self.0 as u32
    }
}

impl fmt::Debug for Gf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Gf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Built-in moduli, coefficients listed from x^0 upwards.
const MODULUS_TABLE: &[(u32, u32, &[u32])] = &[
    (2, 2, &[1, 1, 1]),
    (2, 3, &[1, 1, 0, 1]),
    (2, 4, &[1, 1, 0, 0, 1]),
    (2, 5, &[1, 0, 1, 0, 0, 1]),
    (2, 6, &[1, 1, 0, 0, 0, 0, 1]),
    (2, 7, &[1, 1, 0, 0, 0, 0, 0, 1]),
    (3, 2, &[1, 0, 1]),
    (3, 3, &[1, 2, 0, 1]),
    (3, 4, &[2, 1, 0, 0, 1]),
    (5, 2, &[1, 1, 1]),
    (7, 2, &[3, 1, 1]),
    (11, 2, &[7, 1, 1]),
];

fn default_modulus(p: u32, k: u32) -> Option<Vec<u32>> {
    MODULUS_TABLE
        .iter()
        .find(|(tp, tk, _)| *tp == p && *tk == k)
        .map(|(_, _, c)| c.to_vec())
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Remainder of `a` modulo the monic polynomial `m` over GF(p), low-first.
fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = r[r.len() - 1] % p;
        let shift = r.len() - 1 - dm;
        if lead != 0 {
            for (i, &c) in m.iter().enumerate() {
                let idx = shift + i;
                r[idx] = (r[idx] + p * p - (lead * c) % p) % p;
            }
        }
        r.pop();
    }
    r
}

/// Exhaustive irreducibility test: no monic factor of degree 1..=deg/2.
pub fn is_irreducible(modulus: &[u32], p: u32) -> bool {
    let deg = modulus.len() - 1;
    if deg == 0 {
        return false;
    }
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for code in 0..count {
            let mut cand = Vec::with_capacity(d + 1);
            let mut c = code;
            for _ in 0..d {
                cand.push((c % p as u64) as u32);
                c /= p as u64;
            }
            cand.push(1);
            if poly_rem(modulus, &cand, p).iter().all(|&x| x == 0) {
                return false;
            }
        }
    }
    true
}

fn format_poly_high_first(low_first: &[u32]) -> String {
    low_first
        .iter()
        .rev()
        .map(|c| c.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// Parsed form of a field-spec string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FieldSpec {
    Finite {
        p: u64,
        k: u32,
        /// Monic modulus, coefficients from x^0 upwards.
        modulus: Option<Vec<u32>>,
    },
    Rational,
}

impl FromStr for FieldSpec {
    type Err = Error;

    /// Grammar: `rational`, `q=<p>`, `q=<p>^<k>`, `q=<p>^<k>;poly=<c_k>,...,<c_0>`.
    /// Polynomial coefficients are written from the leading one down.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::BadFieldSpec(s.to_string());
        let t = s.trim();
        if t.eq_ignore_ascii_case("rational") {
            return Ok(FieldSpec::Rational);
        }
        let (head, poly) = match t.split_once(';') {
            Some((h, rest)) => {
                let coeffs = rest.trim().strip_prefix("poly=").ok_or_else(bad)?;
                let parsed = coeffs
                    .split(',')
                    .map(|c| c.trim().parse::<u32>().map_err(|_| bad()))
                    .collect::<Result<Vec<_>>>()?;
                (h.trim(), Some(parsed))
            }
            None => (t, None),
        };
        let body = head.strip_prefix("q=").ok_or_else(bad)?;
        let (p, k) = match body.split_once('^') {
            Some((p, k)) => (
                p.trim().parse::<u64>().map_err(|_| bad())?,
                k.trim().parse::<u32>().map_err(|_| bad())?,
            ),
            None => (body.trim().parse::<u64>().map_err(|_| bad())?, 1),
        };
        if k == 0 {
            return Err(bad());
        }
        let modulus = match poly {
            None => None,
            Some(high_first) => {
                if high_first.len() != k as usize + 1 || high_first[0] != 1 {
                    return Err(Error::BadFieldSpec(format!(
                        "{s}: poly must be monic of degree {k}"
                    )));
                }
                Some(high_first.into_iter().rev().collect())
            }
        };
        Ok(FieldSpec::Finite { p, k, modulus })
    }
}

/// A field chosen at run time.
#[derive(Debug, Clone)]
pub enum AnyField {
    Finite(GaloisField),
    Rational(Rationals),
}

impl AnyField {
    pub fn as_finite(&self) -> Result<&GaloisField> {
        match self {
            AnyField::Finite(f) => Ok(f),
            AnyField::Rational(_) => Err(Error::InfiniteField),
        }
    }

    pub fn spec_string(&self) -> String {
        match self {
            AnyField::Finite(f) => f.spec_string(),
            AnyField::Rational(r) => r.spec_string(),
        }
    }
}

/// Builds a field from its spec string.
pub fn field_make(spec: &str) -> Result<AnyField> {
    match spec.parse::<FieldSpec>()? {
        FieldSpec::Rational => Ok(AnyField::Rational(Rationals)),
        FieldSpec::Finite { p, k, modulus } => {
            Ok(AnyField::Finite(GaloisField::with_modulus(p, k, modulus)?))
        }
    }
}

/// GF(p^k) with precomputed operation tables.
#[derive(Clone)]
pub struct GaloisField {
    p: u32,
    k: u32,
    q: u32,
    /// Monic, low-first; `None` for prime fields.
    modulus: Option<Vec<u32>>,
    add_tab: Vec<u8>,
    mul_tab: Vec<u8>,
    neg_tab: Vec<u8>,
    inv_tab: Vec<u8>,
}

impl fmt::Debug for GaloisField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GaloisField({})", self.spec_string())
    }
}

impl PartialEq for GaloisField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.k == other.k && self.modulus == other.modulus
    }
}

impl Eq for GaloisField {}

impl GaloisField {
    /// GF(p^k) with the built-in modulus.
    pub fn new(p: u64, k: u32) -> Result<Self> {
        Self::with_modulus(p, k, None)
    }

    /// Shorthand for a prime field.
    pub fn prime(p: u64) -> Result<Self> {
        Self::new(p, 1)
    }

    pub fn with_modulus(p: u64, k: u32, modulus: Option<Vec<u32>>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if k == 0 || k > 7 || p.checked_pow(k).map_or(true, |q| q > MAX_Q) {
            return Err(Error::UnsupportedSize { p, k });
        }
        let p32 = p as u32;
        let q = p32.pow(k);
        let modulus = if k == 1 {
            None
        } else {
            let m = match modulus {
                Some(m) => m,
                None => default_modulus(p32, k).ok_or(Error::UnsupportedSize { p, k })?,
            };
            if m.iter().any(|&c| c >= p32) {
                return Err(Error::BadFieldSpec(format!(
                    "modulus coefficient out of range for p={p}"
                )));
            }
            if !is_irreducible(&m, p32) {
                return Err(Error::ReducibleModulus(format_poly_high_first(&m), p32));
            }
            Some(m)
        };

        let qs = q as usize;
        let digits = |code: u32| -> Vec<u32> {
            let mut c = code;
            (0..k)
                .map(|_| {
                    let d = c % p32;
                    c /= p32;
                    d
                })
                .collect()
        };
        let pack = |ds: &[u32]| -> u32 { ds.iter().rev().fold(0, |acc, &d| acc * p32 + d) };

        let mut add_tab = vec![0u8; qs * qs];
        let mut mul_tab = vec![0u8; qs * qs];
        for a in 0..q {
            let da = digits(a);
            for b in 0..q {
                let db = digits(b);
                let sum: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p32).collect();
                add_tab[(a * q + b) as usize] = pack(&sum) as u8;

                let mut prod = vec![0u32; 2 * k as usize - 1];
                for (i, x) in da.iter().enumerate() {
                    for (j, y) in db.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p32;
                    }
                }
                let reduced = match &modulus {
                    Some(m) => poly_rem(&prod, m, p32),
                    None => prod,
                };
                let mut padded = reduced;
                padded.resize(k as usize, 0);
                mul_tab[(a * q + b) as usize] = pack(&padded) as u8;
            }
        }
        let neg_tab: Vec<u8> = (0..q)
            .map(|a| (0..q).find(|&b| add_tab[(a * q + b) as usize] == 0).unwrap() as u8)
            .collect();
        let inv_tab: Vec<u8> = (0..q)
            .map(|a| {
                if a == 0 {
                    0
                } else {
                    (1..q).find(|&b| mul_tab[(a * q + b) as usize] == 1).unwrap() as u8
                }
            })
            .collect();

        Ok(GaloisField { p: p32, k, q, modulus, add_tab, mul_tab, neg_tab, inv_tab })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Modulus coefficients from x^0 upwards; `None` for prime fields.
    pub fn modulus(&self) -> Option<&[u32]> {
        self.modulus.as_deref()
    }

    pub fn elem(&self, code: u64) -> Result<Gf> {
        if code < self.q as u64 {
            Ok(Gf(code as u8))
        } else {
            Err(Error::BadElement(code))
        }
    }

    /// Coefficient vector (x^0 first) of an element.
    pub fn coefficients(&self, a: Gf) -> Vec<u32> {
        let mut c = a.code();
        (0..self.k)
            .map(|_| {
                let d = c % self.p;
                c /= self.p;
                d
            })
            .collect()
    }

    /// The element x (the class of the indeterminate); equals `p` as a code.
    pub fn generator_x(&self) -> Option<Gf> {
        (self.k > 1).then_some(Gf(self.p as u8))
    }

    /// A generator of the multiplicative group.
    pub fn primitive_element(&self) -> Gf {
        let order = self.q - 1;
        (1..self.q)
            .map(|c| Gf(c as u8))
            .find(|&g| {
                let mut x = g;
                let mut n = 1;
                while x != Gf(1) {
                    x = self.mul(&x, &g);
                    n += 1;
                }
                n == order
            })
            .expect("multiplicative group is cyclic")
    }

    /// All elements, optionally only the nonzero ones, in canonical order.
    pub fn field_elements(&self, nonzero: bool) -> Vec<Gf> {
        let start = if nonzero { 1 } else { 0 };
        (start..self.q).map(|c| Gf(c as u8)).collect()
    }

    /// Bounds-checked element handle.
    pub fn fe(&self, code: u64) -> Result<Fe<'_>> {
        Ok(Fe { field: self, value: self.elem(code)? })
    }

    #[inline]
    pub fn add_gf(&self, a: Gf, b: Gf) -> Gf {
        Gf(self.add_tab[a.0 as usize * self.q as usize + b.0 as usize])
    }

    #[inline]
    pub fn mul_gf(&self, a: Gf, b: Gf) -> Gf {
        Gf(self.mul_tab[a.0 as usize * self.q as usize + b.0 as usize])
    }

    #[inline]
    pub fn neg_gf(&self, a: Gf) -> Gf {
        Gf(self.neg_tab[a.0 as usize])
    }
}

impl Field for GaloisField {
    type Elem = Gf;

    fn zero(&self) -> Gf {
        Gf(0)
    }

    fn one(&self) -> Gf {
        Gf(1)
    }

    #[inline]
    fn add(&self, a: &Gf, b: &Gf) -> Gf {
        self.add_gf(*a, *b)
    }

    #[inline]
    fn neg(&self, a: &Gf) -> Gf {
        self.neg_gf(*a)
    }

    #[inline]
    fn mul(&self, a: &Gf, b: &Gf) -> Gf {
        self.mul_gf(*a, *b)
    }

    fn inv(&self, a: &Gf) -> Option<Gf> {
        (a.0 != 0).then(|| Gf(self.inv_tab[a.0 as usize]))
    }

    fn characteristic(&self) -> u64 {
        self.p as u64
    }

    fn from_i64(&self, n: i64) -> Gf {
        Gf(n.rem_euclid(self.p as i64) as u8)
    }

    fn elements(&self) -> Option<Vec<Gf>> {
        Some(self.field_elements(false))
    }

    fn spec_string(&self) -> String {
        match &self.modulus {
            None => format!("q={}", self.p),
            Some(m) if default_modulus(self.p, self.k).as_ref() == Some(m) => {
                format!("q={}^{}", self.p, self.k)
            }
            Some(m) => format!("q={}^{};poly={}", self.p, self.k, format_poly_high_first(m)),
        }
    }

    fn elem_to_json(&self, a: &Gf) -> Value {
        Value::from(a.code())
    }

    fn elem_from_json(&self, v: &Value) -> Result<Gf> {
        let code = v
            .as_u64()
            .ok_or_else(|| Error::Invalid(format!("expected element code, got {v}")))?;
        self.elem(code)
    }

    fn format_elem(&self, a: &Gf) -> String {
        a.code().to_string()
    }

    fn order(&self) -> Option<u64> {
        Some(self.q as u64)
    }
}

/// An element bound to its field, with checked arithmetic.
#[derive(Clone, Copy, Debug)]
pub struct Fe<'a> {
    field: &'a GaloisField,
    value: Gf,
}

impl<'a> Fe<'a> {
    pub fn value(self) -> Gf {
        self.value
    }

    pub fn field(self) -> &'a GaloisField {
        self.field
    }

    fn same_field(self, other: Fe<'_>) -> Result<()> {
        if std::ptr::eq(self.field, other.field) || self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    fn wrap(self, value: Gf) -> Fe<'a> {
        Fe { field: self.field, value }
    }

    pub fn add(self, other: Fe<'_>) -> Result<Fe<'a>> {
        self.same_field(other)?;
        Ok(self.wrap(self.field.add_gf(self.value, other.value)))
    }

    pub fn sub(self, other: Fe<'_>) -> Result<Fe<'a>> {
        self.same_field(other)?;
        Ok(self.wrap(self.field.sub(&self.value, &other.value)))
    }

    pub fn mul(self, other: Fe<'_>) -> Result<Fe<'a>> {
        self.same_field(other)?;
        Ok(self.wrap(self.field.mul_gf(self.value, other.value)))
    }

    pub fn div(self, other: Fe<'_>) -> Result<Fe<'a>> {
        self.same_field(other)?;
        Ok(self.wrap(self.field.div(&self.value, &other.value)?))
    }

    pub fn neg(self) -> Fe<'a> {
        self.wrap(self.field.neg_gf(self.value))
    }

    pub fn inv(self) -> Result<Fe<'a>> {
        self.field
            .inv(&self.value)
            .map(|v| self.wrap(v))
            .ok_or(Error::DivisionByZero)
    }

    pub fn pow(self, e: u64) -> Fe<'a> {
        self.wrap(self.field.pow(&self.value, e))
    }
}

impl PartialEq for Fe<'_> {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value && self.field == other.field
    }
}

/// The field of rational numbers.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }

    fn one(&self) -> BigRational {
        BigRational::one()
    }

    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }

    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }

    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }

    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        (!a.is_zero()).then(|| a.recip())
    }

    fn characteristic(&self) -> u64 {
        0
    }

    fn from_i64(&self, n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn elements(&self) -> Option<Vec<BigRational>> {
        None
    }

    fn spec_string(&self) -> String {
        "rational".to_string()
    }

    fn elem_to_json(&self, a: &BigRational) -> Value {
        Value::from(self.format_elem(a))
    }

    fn elem_from_json(&self, v: &Value) -> Result<BigRational> {
        if let Some(i) = v.as_i64() {
            return Ok(self.from_i64(i));
        }
        let s = v
            .as_str()
            .ok_or_else(|| Error::Invalid(format!("expected rational, got {v}")))?;
        parse_rational(s)
    }

    fn format_elem(&self, a: &BigRational) -> String {
        if a.is_integer() {
            a.numer().to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::Invalid(format!("bad rational `{s}`"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let r = BigRational::new(n, d);
    debug_assert!(!r.denom().is_negative());
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(spec: &str) -> GaloisField {
        match field_make(spec).unwrap() {
            AnyField::Finite(f) => f,
            AnyField::Rational(_) => panic!("expected finite field"),
        }
    }

    #[test]
    fn parses_specs() {
        assert_eq!(gf("q=2").q(), 2);
        let f4 = gf("q=2^2");
        assert_eq!(f4.q(), 4);
        assert_eq!(f4.modulus(), Some(&[1, 1, 1][..]));
        let f9 = gf("q=3^2;poly=1,0,1");
        assert_eq!(f9.q(), 9);
        assert_eq!(f9.spec_string(), "q=3^2");
        assert!(matches!(field_make("rational").unwrap(), AnyField::Rational(_)));
    }

    #[test]
    fn x_squared_plus_one_has_no_root_mod_3() {
        // brute-force root search, independent of the irreducibility helper
        for x in 0u32..3 {
            assert_ne!((x * x + 1) % 3, 0);
        }
        assert!(is_irreducible(&[1, 0, 1], 3));
    }

    #[test]
    fn rejects_bad_specs() {
        assert_eq!(field_make("q=4").unwrap_err(), Error::NotPrime(4));
        assert!(matches!(field_make("q=2^2;poly=1,0,1").unwrap_err(), Error::ReducibleModulus(..)));
        assert!(matches!(field_make("q=2^8").unwrap_err(), Error::UnsupportedSize { .. }));
        assert!(matches!(field_make("q=131").unwrap_err(), Error::UnsupportedSize { .. }));
        assert!(matches!(field_make("q=3^2;poly=2,0,1").unwrap_err(), Error::BadFieldSpec(_)));
        assert!(matches!(field_make("p=3").unwrap_err(), Error::BadFieldSpec(_)));
        assert!(matches!(field_make("q=2^0").unwrap_err(), Error::BadFieldSpec(_)));
    }

    #[test]
    fn table_moduli_are_irreducible() {
        for (p, k, _) in MODULUS_TABLE {
            let f = GaloisField::new(*p as u64, *k).unwrap();
            assert_eq!(f.q(), p.pow(*k));
        }
    }

    #[test]
    fn arithmetic_examples() {
        let f3 = gf("q=3");
        assert_eq!(f3.add(&Gf(2), &Gf(2)), Gf(1));
        let f4 = gf("q=2^2");
        let x = f4.generator_x().unwrap();
        // x*x = x + 1, which encodes as 1 + 1*2 = 3
        assert_eq!(f4.mul(&x, &x), Gf(3));
        let f5 = gf("q=5");
        assert_eq!(f5.inv(&Gf(2)), Some(Gf(3)));
        assert_eq!(f5.div(&Gf(1), &Gf(0)), Err(Error::DivisionByZero));
    }

    #[test]
    fn enumeration_order() {
        assert_eq!(gf("q=2").field_elements(false), vec![Gf(0), Gf(1)]);
        assert_eq!(gf("q=3").field_elements(true), vec![Gf(1), Gf(2)]);
        let f4 = gf("q=2^2");
        let els = f4.field_elements(false);
        assert_eq!(els.len(), 4);
        let coeffs: Vec<_> = els.iter().map(|&e| f4.coefficients(e)).collect();
        assert_eq!(coeffs, vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]]);
    }

    #[test]
    fn fe_checks_field_identity() {
        let f5 = gf("q=5");
        let f7 = gf("q=7");
        let a = f5.fe(2).unwrap();
        let b = f7.fe(2).unwrap();
        assert_eq!(a.add(b), Err(Error::FieldMismatch));
        assert_eq!(a.inv().unwrap().value(), Gf(3));
        assert_eq!(f5.fe(0).unwrap().inv(), Err(Error::DivisionByZero));
        assert!(f5.fe(5).is_err());
        assert_eq!(a.pow(4).value(), Gf(1));
    }

    #[test]
    fn field_laws_on_every_table() {
        for (p, k, _) in MODULUS_TABLE.iter().chain([(5, 1, &[][..]), (13, 1, &[][..])].iter()) {
            let f = GaloisField::new(*p as u64, *k).unwrap();
            let els = f.field_elements(false);
            let q = f.q() as u64;
            let mut sum = Gf(0);
            let mut prod = Gf(1);
            for &a in &els {
                sum = f.add(&sum, &a);
                if a != Gf(0) {
                    prod = f.mul(&prod, &a);
                    assert_eq!(f.pow(&a, q - 1), Gf(1));
                    assert_eq!(f.mul(&a, &f.inv(&a).unwrap()), Gf(1));
                }
                for &b in &els {
                    let lhs = f.pow(&f.add(&a, &b), *p as u64);
                    let rhs = f.add(&f.pow(&a, *p as u64), &f.pow(&b, *p as u64));
                    assert_eq!(lhs, rhs, "Frobenius in {}", f.spec_string());
                }
            }
            if q > 2 {
                assert_eq!(sum, Gf(0));
            }
            assert_eq!(prod, f.neg(&Gf(1)), "Wilson in {}", f.spec_string());
        }
    }

    #[test]
    fn rationals() {
        let q = Rationals;
        let half = q.div(&q.one(), &q.from_i64(2)).unwrap();
        assert_eq!(q.format_elem(&half), "1/2");
        assert_eq!(q.elem_from_json(&Value::from("-3/6")).unwrap(), q.neg(&half));
        assert!(q.elements().is_none());
    }
}
