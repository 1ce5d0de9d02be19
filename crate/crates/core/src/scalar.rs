//! Exact base fields: the rationals, prime fields GF(p), and cyclotomic fields
//! Q(z) with z a primitive n-th root of unity.
//!
//! Cyclotomic elements are polynomials in `z` of degree below `deg Phi_n`,
//! reduced modulo the n-th cyclotomic polynomial, so two elements are equal
//! exactly when their coefficient vectors are equal.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Which exact field a computation runs over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldSpec {
    Rational,
    Prime(u64),
    Cyclotomic(u32),
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rational => write!(f, "rational"),
            FieldSpec::Prime(p) => write!(f, "prime({p})"),
            FieldSpec::Cyclotomic(n) => write!(f, "cyclotomic({n})"),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let lower = t.to_ascii_lowercase();
        if lower == "rational" || lower == "q" {
            return Ok(FieldSpec::Rational);
        }
        let arg = |prefix: &str| -> Option<&str> {
            lower
                .strip_prefix(prefix)
                .and_then(|r| r.strip_prefix('('))
                .and_then(|r| r.strip_suffix(')'))
        };
        if let Some(p) = arg("prime") {
            let p: u64 = p
                .parse()
                .map_err(|_| Error::parse("field", format!("bad prime modulus in {s:?}")))?;
            return Ok(FieldSpec::Prime(p));
        }
        if let Some(n) = arg("cyclotomic") {
            let n: u32 = n
                .parse()
                .map_err(|_| Error::parse("field", format!("bad cyclotomic order in {s:?}")))?;
            return Ok(FieldSpec::Cyclotomic(n));
        }
        Err(Error::parse("field", format!("unknown field {s:?}")))
    }
}

impl Serialize for FieldSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for FieldSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Integer coefficients of the n-th cyclotomic polynomial, lowest degree first.
pub fn cyclotomic_polynomial(n: u32) -> Vec<BigInt> {
    // x^n - 1 = prod_{d | n} Phi_d(x)
    let mut num: Vec<BigInt> = vec![BigInt::zero(); n as usize + 1];
    num[0] = -BigInt::one();
    num[n as usize] = BigInt::one();
    for d in 1..n {
        if n % d == 0 {
            let div = cyclotomic_polynomial(d);
            num = poly_div_exact(&num, &div);
        }
    }
    num
}

fn poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    // den is monic
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let nd = rem.len() - 1;
    let mut quot = vec![BigInt::zero(); nd - dd + 1];
    for k in (0..=nd - dd).rev() {
        let c = rem[k + dd].clone();
        if c.is_zero() {
            continue;
        }
        for (i, di) in den.iter().enumerate() {
            rem[k + i] -= &c * di;
        }
        quot[k] = c;
    }
    debug_assert!(rem.iter().all(|c| c.is_zero()));
    quot
}

fn euler_phi(n: u32) -> usize {
    (1..=n).filter(|k| k.gcd(&n) == 1).count()
}

struct FieldData {
    spec: FieldSpec,
    degree: usize,
    /// x^k mod Phi_n for k in 0..2*degree-1 (cyclotomic only).
    powers: Vec<Vec<BigRational>>,
}

/// Handle to an exact field; cheap to clone, interned per spec.
#[derive(Clone)]
pub struct Field(Arc<FieldData>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.spec == other.0.spec
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Field({})", self.0.spec)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.spec)
    }
}

fn registry() -> &'static Mutex<HashMap<FieldSpec, Field>> {
    static REG: OnceLock<Mutex<HashMap<FieldSpec, Field>>> = OnceLock::new();
    REG.get_or_init(|| Mutex::new(HashMap::new()))
}

impl Field {
    /// Builds (or fetches the interned) field for `spec`.
    pub fn new(spec: FieldSpec) -> Result<Field> {
        match spec {
            FieldSpec::Prime(p) if !is_prime(p) => {
                return Err(Error::InvalidField(format!("non-prime modulus {p}")))
            }
            FieldSpec::Prime(p) if p > u32::MAX as u64 => {
                return Err(Error::InvalidField(format!("modulus {p} too large")))
            }
            FieldSpec::Cyclotomic(0) => {
                return Err(Error::InvalidField("cyclotomic order must be >= 1".into()))
            }
            _ => {}
        }
        let mut reg = registry().lock().expect("field registry poisoned");
        if let Some(f) = reg.get(&spec) {
            return Ok(f.clone());
        }
        let data = match spec {
            FieldSpec::Rational | FieldSpec::Prime(_) => FieldData {
                spec,
                degree: 1,
                powers: Vec::new(),
            },
            FieldSpec::Cyclotomic(n) => {
                let phi = cyclotomic_polynomial(n);
                let degree = phi.len() - 1;
                debug_assert_eq!(degree, euler_phi(n));
                let phi: Vec<BigRational> = phi.into_iter().map(BigRational::from_integer).collect();
                let mut powers = Vec::with_capacity(2 * degree);
                let mut cur = vec![BigRational::zero(); degree];
                cur[0] = BigRational::one();
                for _ in 0..(2 * degree).max(2) {
                    powers.push(cur.clone());
                    // multiply by x and reduce
                    let top = cur[degree - 1].clone();
                    let mut next = vec![BigRational::zero(); degree];
                    for i in (1..degree).rev() {
                        next[i] = cur[i - 1].clone();
                    }
                    if !top.is_zero() {
                        for i in 0..degree {
                            next[i] -= &top * &phi[i];
                        }
                    }
                    cur = next;
                }
                FieldData {
                    spec,
                    degree,
                    powers,
                }
            }
        };
        let f = Field(Arc::new(data));
        reg.insert(spec, f.clone());
        Ok(f)
    }

    pub fn rational() -> Field {
        Field::new(FieldSpec::Rational).expect("rational field")
    }

    pub fn spec(&self) -> FieldSpec {
        self.0.spec
    }

    /// Dimension over the prime field (phi(n) for cyclotomic fields).
    pub fn degree(&self) -> usize {
        self.0.degree
    }

    pub fn zero(&self) -> Scalar {
        let value = match self.0.spec {
            FieldSpec::Rational => Value::Rat(BigRational::zero()),
            FieldSpec::Prime(_) => Value::Mod(0),
            FieldSpec::Cyclotomic(_) => Value::Cyc(vec![BigRational::zero(); self.0.degree].into()),
        };
        Scalar {
            field: self.clone(),
            value,
        }
    }

    pub fn one(&self) -> Scalar {
        self.from_int(1)
    }

    pub fn from_int(&self, k: i64) -> Scalar {
        self.from_rational(&BigRational::from_integer(BigInt::from(k)))
            .expect("integers embed in every field")
    }

    /// Embeds a rational; fails in GF(p) when p divides the denominator.
    pub fn from_rational(&self, q: &BigRational) -> Result<Scalar> {
        let value = match self.0.spec {
            FieldSpec::Rational => Value::Rat(q.clone()),
            FieldSpec::Prime(p) => {
                let pm = BigInt::from(p);
                let num = q.numer().mod_floor(&pm).to_u64().expect("residue");
                let den = q.denom().mod_floor(&pm).to_u64().expect("residue");
                if den == 0 {
                    return Err(Error::DivisionByZero);
                }
                Value::Mod(mulmod(num, inv_mod(den, p), p))
            }
            FieldSpec::Cyclotomic(_) => {
                let mut v = vec![BigRational::zero(); self.0.degree];
                v[0] = q.clone();
                Value::Cyc(v.into())
            }
        };
        Ok(Scalar {
            field: self.clone(),
            value,
        })
    }

    /// The designated primitive n-th root of unity `z` (cyclotomic fields only).
    pub fn zeta(&self) -> Option<Scalar> {
        match self.0.spec {
            FieldSpec::Cyclotomic(_) => Some(self.cyc_from_coeffs(&self.0.powers[1])),
            _ => None,
        }
    }

    fn cyc_from_coeffs(&self, coeffs: &[BigRational]) -> Scalar {
        Scalar {
            field: self.clone(),
            value: Value::Cyc(coeffs.to_vec().into()),
        }
    }

    /// `z^k` for any integer k.
    pub fn zeta_pow(&self, k: i64) -> Option<Scalar> {
        match self.0.spec {
            FieldSpec::Cyclotomic(n) => {
                let e = k.rem_euclid(n as i64) as usize;
                let z = self.zeta()?;
                Some(z.pow(e as u64))
            }
            _ => None,
        }
    }

    /// Parses a scalar literal: integers, `a/b`, and expressions in `z`
    /// built from `+ - * / ^` and parentheses, e.g. `1/2*z^2 - z + 3`.
    pub fn parse(&self, s: &str) -> Result<Scalar> {
        let mut p = LiteralParser {
            src: s.as_bytes(),
            pos: 0,
            field: self,
        };
        let v = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(Error::parse(
                format!("scalar {s:?} offset {}", p.pos),
                "unexpected trailing input",
            ));
        }
        Ok(v)
    }
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // Fermat
    let mut result = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = mulmod(result, base, p);
        }
        base = mulmod(base, base, p);
        e >>= 1;
    }
    result
}

#[derive(Clone, PartialEq, Eq, Hash)]
enum Value {
    Rat(BigRational),
    Mod(u64),
    Cyc(Box<[BigRational]>),
}

/// An element of an exact field. Equality is exact.
#[derive(Clone)]
pub struct Scalar {
    field: Field,
    value: Value,
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.value == other.value
    }
}

impl Eq for Scalar {}

impl std::hash::Hash for Scalar {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.field.spec().hash(state);
        self.value.hash(state);
    }
}

impl Scalar {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        match &self.value {
            Value::Rat(q) => q.is_zero(),
            Value::Mod(v) => *v == 0,
            Value::Cyc(c) => c.iter().all(|x| x.is_zero()),
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.value {
            Value::Rat(q) => q.is_one(),
            Value::Mod(v) => *v == 1,
            Value::Cyc(c) => c[0].is_one() && c[1..].iter().all(|x| x.is_zero()),
        }
    }

    /// Coefficients in the power basis 1, z, z^2, ... (a single entry outside
    /// cyclotomic fields; residues are returned as integers).
    pub fn coefficients(&self) -> Vec<BigRational> {
        match &self.value {
            Value::Rat(q) => vec![q.clone()],
            Value::Mod(v) => vec![BigRational::from_integer(BigInt::from(*v))],
            Value::Cyc(c) => c.to_vec(),
        }
    }

    fn check(&self, other: &Scalar) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch {
                left: self.field.to_string(),
                right: other.field.to_string(),
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Scalar) -> Result<Scalar> {
        self.check(other)?;
        Ok(self.add_unchecked(other))
    }

    pub fn try_sub(&self, other: &Scalar) -> Result<Scalar> {
        self.check(other)?;
        Ok(self.add_unchecked(&other.neg_ref()))
    }

    pub fn try_mul(&self, other: &Scalar) -> Result<Scalar> {
        self.check(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub fn try_div(&self, other: &Scalar) -> Result<Scalar> {
        self.check(other)?;
        Ok(self.mul_unchecked(&other.inv()?))
    }

    fn add_unchecked(&self, other: &Scalar) -> Scalar {
        let value = match (&self.value, &other.value) {
            (Value::Rat(a), Value::Rat(b)) => Value::Rat(a + b),
            (Value::Mod(a), Value::Mod(b)) => {
                let p = self.modulus();
                Value::Mod(((*a as u128 + *b as u128) % p as u128) as u64)
            }
            (Value::Cyc(a), Value::Cyc(b)) => {
                Value::Cyc(a.iter().zip(b.iter()).map(|(x, y)| x + y).collect())
            }
            _ => unreachable!("field checked"),
        };
        Scalar {
            field: self.field.clone(),
            value,
        }
    }

    fn mul_unchecked(&self, other: &Scalar) -> Scalar {
        let value = match (&self.value, &other.value) {
            (Value::Rat(a), Value::Rat(b)) => Value::Rat(a * b),
            (Value::Mod(a), Value::Mod(b)) => Value::Mod(mulmod(*a, *b, self.modulus())),
            (Value::Cyc(a), Value::Cyc(b)) => Value::Cyc(self.cyc_mul(a, b)),
            _ => unreachable!("field checked"),
        };
        Scalar {
            field: self.field.clone(),
            value,
        }
    }

    fn cyc_mul(&self, a: &[BigRational], b: &[BigRational]) -> Box<[BigRational]> {
        let deg = a.len();
        let a_nz: Vec<(usize, &BigRational)> =
            a.iter().enumerate().filter(|(_, x)| !x.is_zero()).collect();
        let b_nz: Vec<(usize, &BigRational)> =
            b.iter().enumerate().filter(|(_, x)| !x.is_zero()).collect();
        let mut prod = vec![BigRational::zero(); 2 * deg - 1];
        for (i, x) in &a_nz {
            for (j, y) in &b_nz {
                prod[i + j] += *x * *y;
            }
        }
        let mut out: Vec<BigRational> = prod[..deg].to_vec();
        let powers = &self.field.0.powers;
        for (k, c) in prod.iter().enumerate().skip(deg) {
            if c.is_zero() {
                continue;
            }
            for (o, r) in out.iter_mut().zip(powers[k].iter()) {
                if !r.is_zero() {
                    *o += c * r;
                }
            }
        }
        out.into()
    }

    fn modulus(&self) -> u64 {
        match self.field.spec() {
            FieldSpec::Prime(p) => p,
            _ => unreachable!(),
        }
    }

    fn neg_ref(&self) -> Scalar {
        let value = match &self.value {
            Value::Rat(a) => Value::Rat(-a),
            Value::Mod(a) => {
                let p = self.modulus();
                Value::Mod(if *a == 0 { 0 } else { p - a })
            }
            Value::Cyc(a) => Value::Cyc(a.iter().map(|x| -x).collect()),
        };
        Scalar {
            field: self.field.clone(),
            value,
        }
    }

    /// Multiplicative inverse.
    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let value = match &self.value {
            Value::Rat(a) => Value::Rat(a.recip()),
            Value::Mod(a) => Value::Mod(inv_mod(*a, self.modulus())),
            Value::Cyc(a) => Value::Cyc(self.cyc_inv(a)?),
        };
        Ok(Scalar {
            field: self.field.clone(),
            value,
        })
    }

    fn cyc_inv(&self, a: &[BigRational]) -> Result<Box<[BigRational]>> {
        // Solve (multiplication-by-a matrix) x = e_0 by Gauss-Jordan.
        let deg = a.len();
        let mut cols: Vec<Box<[BigRational]>> = Vec::with_capacity(deg);
        for k in 0..deg {
            cols.push(self.cyc_mul(a, &self.field.0.powers[k]));
        }
        let mut m: Vec<Vec<BigRational>> = (0..deg)
            .map(|r| {
                let mut row: Vec<BigRational> = (0..deg).map(|c| cols[c][r].clone()).collect();
                row.push(if r == 0 {
                    BigRational::one()
                } else {
                    BigRational::zero()
                });
                row
            })
            .collect();
        for col in 0..deg {
            let piv = (col..deg)
                .find(|&r| !m[r][col].is_zero())
                .ok_or(Error::DivisionByZero)?;
            m.swap(col, piv);
            let inv = m[col][col].recip();
            for x in m[col].iter_mut() {
                *x *= &inv;
            }
            for r in 0..deg {
                if r != col && !m[r][col].is_zero() {
                    let f = m[r][col].clone();
                    let pivot_row = m[col].clone();
                    for (x, y) in m[r].iter_mut().zip(pivot_row.iter()) {
                        *x -= &f * y;
                    }
                }
            }
        }
        Ok(m.into_iter().map(|row| row[deg].clone()).collect())
    }

    pub fn pow(&self, mut e: u64) -> Scalar {
        let mut result = self.field.one();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul_unchecked(&base);
            }
            base = base.mul_unchecked(&base);
            e >>= 1;
        }
        result
    }

    pub fn powi(&self, e: i64) -> Result<Scalar> {
        if e >= 0 {
            Ok(self.pow(e as u64))
        } else {
            Ok(self.inv()?.pow(e.unsigned_abs()))
        }
    }

    /// Multiplicative order, searched up to `bound`.
    pub fn multiplicative_order(&self, bound: u64) -> Option<u64> {
        if self.is_zero() {
            return None;
        }
        let mut acc = self.clone();
        for k in 1..=bound {
            if acc.is_one() {
                return Some(k);
            }
            acc = acc.mul_unchecked(self);
        }
        None
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    /// Panics on field mismatch; use [`Scalar::try_add`] for a checked version.
    fn add(self, rhs: &'a Scalar) -> Scalar {
        self.try_add(rhs).expect("scalar field mismatch")
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &'a Scalar) -> Scalar {
        self.try_sub(rhs).expect("scalar field mismatch")
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &'a Scalar) -> Scalar {
        self.try_mul(rhs).expect("scalar field mismatch")
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}

fn fmt_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.value {
            Value::Rat(q) => write!(f, "{}", fmt_rational(q)),
            Value::Mod(v) => write!(f, "{v}"),
            Value::Cyc(c) => {
                let mut out = String::new();
                for (k, q) in c.iter().enumerate().rev() {
                    if q.is_zero() {
                        continue;
                    }
                    let neg = q.is_negative();
                    let abs = q.abs();
                    let mono = match k {
                        0 => String::new(),
                        1 => "z".to_string(),
                        _ => format!("z^{k}"),
                    };
                    let term = if k == 0 {
                        fmt_rational(&abs)
                    } else if abs.is_one() {
                        mono
                    } else {
                        format!("{}*{}", fmt_rational(&abs), mono)
                    };
                    if out.is_empty() {
                        if neg {
                            out.push('-');
                        }
                    } else {
                        out.push_str(if neg { " - " } else { " + " });
                    }
                    out.push_str(&term);
                }
                if out.is_empty() {
                    out.push('0');
                }
                write!(f, "{out}")
            }
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

struct LiteralParser<'a> {
    src: &'a [u8],
    pos: usize,
    field: &'a Field,
}

impl LiteralParser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::parse(
            format!(
                "scalar {:?} offset {}",
                String::from_utf8_lossy(self.src),
                self.pos
            ),
            msg,
        )
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Scalar> {
        let mut acc = self.term()?;
        while let Some(c) = self.peek() {
            match c {
                b'+' => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                b'-' => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Scalar> {
        let mut acc = self.factor()?;
        while let Some(c) = self.peek() {
            match c {
                b'*' => {
                    self.pos += 1;
                    acc = &acc * &self.factor()?;
                }
                b'/' => {
                    self.pos += 1;
                    let d = self.factor()?;
                    acc = acc.try_div(&d)?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Scalar> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(-self.factor()?);
        }
        let base = self.base()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let neg = if self.peek() == Some(b'-') {
                self.pos += 1;
                true
            } else {
                false
            };
            let e = self.integer()?;
            let e = e.to_i64().ok_or_else(|| self.err("exponent too large"))?;
            return base.powi(if neg { -e } else { e });
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected integer"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(s.parse().expect("digits parse"))
    }

    fn base(&mut self) -> Result<Scalar> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(v)
            }
            Some(b'z') => {
                self.pos += 1;
                self.field
                    .zeta()
                    .ok_or_else(|| self.err("`z` is only defined in cyclotomic fields"))
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                self.field
                    .from_rational(&BigRational::from_integer(n))
                    .map_err(|_| self.err("integer not representable"))
            }
            _ => Err(self.err("expected number, `z` or '('")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyc(n: u32) -> Field {
        Field::new(FieldSpec::Cyclotomic(n)).unwrap()
    }

    #[test]
    fn rational_field_basics() {
        let q = Field::rational();
        assert!(q.zero().is_zero());
        assert!(q.one().is_one());
        let a = q.parse("2/3").unwrap();
        assert_eq!(a.inv().unwrap(), q.parse("3/2").unwrap());
    }

    #[test]
    fn cyclotomic_three_relation() {
        let f = cyc(3);
        let z = f.zeta().unwrap();
        let z2 = &z * &z;
        let s = &(&z2 + &z) + &f.one();
        assert!(s.is_zero());
        assert!((&z * &z2).is_one());
    }

    #[test]
    fn prime_four_rejected() {
        assert!(matches!(
            Field::new(FieldSpec::Prime(4)),
            Err(Error::InvalidField(_))
        ));
        assert!(Field::new(FieldSpec::Cyclotomic(0)).is_err());
    }

    #[test]
    fn zeta_nine_order_by_long_division() {
        // Phi_9 = x^6 + x^3 + 1; reduce x^k by long division, independent of
        // the field's precomputed power table.
        let phi = [1i64, 0, 0, 1, 0, 0, 1];
        let reduce = |k: usize| -> Vec<i64> {
            let mut p = vec![0i64; k + 1];
            p[k] = 1;
            for d in (6..=k).rev() {
                let c = p[d];
                if c != 0 {
                    for (i, ph) in phi.iter().enumerate() {
                        p[d - 6 + i] -= c * ph;
                    }
                }
            }
            p.truncate(6);
            p.resize(6, 0);
            p
        };
        let f = cyc(9);
        let z = f.zeta().unwrap();
        for k in 1..=9u64 {
            let expected = reduce(k as usize);
            let got = z.pow(k);
            let got: Vec<i64> = got
                .coefficients()
                .iter()
                .map(|c| c.to_integer().to_i64().unwrap())
                .collect();
            assert_eq!(got, expected, "z^{k}");
            assert_eq!(z.pow(k).is_one(), k == 9);
        }
    }

    #[test]
    fn cyclotomic_polynomials_known() {
        let as_i64 = |n| {
            cyclotomic_polynomial(n)
                .iter()
                .map(|c| c.to_i64().unwrap())
                .collect::<Vec<_>>()
        };
        assert_eq!(as_i64(1), vec![-1, 1]);
        assert_eq!(as_i64(2), vec![1, 1]);
        assert_eq!(as_i64(3), vec![1, 1, 1]);
        assert_eq!(as_i64(4), vec![1, 0, 1]);
        assert_eq!(as_i64(6), vec![1, -1, 1]);
        assert_eq!(as_i64(9), vec![1, 0, 0, 1, 0, 0, 1]);
    }

    #[test]
    fn zeta_has_exact_order() {
        for n in [1u32, 2, 3, 4, 5, 6, 7, 8, 9, 12] {
            let f = cyc(n);
            let z = f.zeta().unwrap();
            assert_eq!(z.multiplicative_order(64), Some(n as u64), "n={n}");
        }
    }

    #[test]
    fn literal_roundtrip_and_grammar() {
        let f = cyc(5);
        let a = f.parse("1/2*z^2 - z + 3").unwrap();
        assert_eq!(a.to_string(), "1/2*z^2 - z + 3");
        assert_eq!(f.parse(&a.to_string()).unwrap(), a);
        let zi = f.parse("z^-1").unwrap();
        assert!((&zi * &f.zeta().unwrap()).is_one());
        assert!(Field::rational().parse("z").is_err());
        assert!(f.parse("1/0").is_err());
        assert!(f.parse("3 +").is_err());
    }

    #[test]
    fn prime_field_arithmetic() {
        let f = Field::new(FieldSpec::Prime(7)).unwrap();
        let a = f.from_int(3);
        assert_eq!((&a * &a.inv().unwrap()), f.one());
        assert_eq!(f.parse("1/2").unwrap(), f.from_int(4));
        assert_eq!((-f.one()).to_string(), "6");
        assert!(f.parse("z").is_err());
    }

    #[test]
    fn mismatch_is_an_error() {
        let a = cyc(3).one();
        let b = cyc(5).one();
        assert!(matches!(a.try_add(&b), Err(Error::FieldMismatch { .. })));
        assert!(matches!(cyc(3).zero().inv(), Err(Error::DivisionByZero)));
    }

    #[test]
    fn field_spec_parsing() {
        assert_eq!("cyclotomic(9)".parse::<FieldSpec>().unwrap(), FieldSpec::Cyclotomic(9));
        assert_eq!("prime(7)".parse::<FieldSpec>().unwrap(), FieldSpec::Prime(7));
        assert_eq!("rational".parse::<FieldSpec>().unwrap(), FieldSpec::Rational);
        assert!("cyclotomic(x)".parse::<FieldSpec>().is_err());
    }
}
