//! Exact arithmetic in the cyclotomic field `Q(ξ_M)`.
//!
//! Elements are stored in the power basis `1, ξ, …, ξ^{φ(M)-1}` reduced
//! modulo the `M`-th cyclotomic polynomial, so two elements are equal iff
//! their coefficient vectors agree.
//!
//! Fields are interned: [`field`] hands out a `&'static` handle per order,
//! and every [`CycNum`] carries the handle of the field it lives in.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// The field `Q(ξ_M)` with its reduction tables.
#[derive(Debug)]
pub struct CyclotomicField {
    order: u32,
    degree: usize,
    /// `Φ_M`, low degree first, monic.
    modulus: Vec<i64>,
    /// `ξ^p` in the power basis for `0 <= p < M`.
    powers: Vec<Vec<i64>>,
}

impl PartialEq for CyclotomicField {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order
    }
}

impl Eq for CyclotomicField {}

static FIELDS: OnceLock<Mutex<HashMap<u32, &'static CyclotomicField>>> = OnceLock::new();

/// Interned handle to `Q(ξ_order)`.
pub fn field(order: u32) -> &'static CyclotomicField {
    assert!(order >= 1, "cyclotomic order must be positive");
    let map = FIELDS.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = map.lock().expect("field registry poisoned");
    guard
        .entry(order)
        .or_insert_with(|| Box::leak(Box::new(CyclotomicField::build(order))))
}

/// The working field for the modulus `n`: `M = lcm(4, 2n)`, which contains
/// `ξ_n`, `ξ_{2n}` and `√−1`.
pub fn field_for_modulus(n: u32) -> &'static CyclotomicField {
    field(4u32.lcm(&(2 * n)))
}

/// Integer polynomial division `a / b`, asserting exactness.
fn exact_div(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut rem = a.to_vec();
    let db = b.len() - 1;
    let lead = *b.last().unwrap();
    let mut q = vec![0i64; rem.len().saturating_sub(db).max(1)];
    for i in (db..rem.len()).rev() {
        let c = rem[i];
        if c == 0 {
            continue;
        }
        assert_eq!(c % lead, 0);
        let f = c / lead;
        q[i - db] = f;
        for (j, bj) in b.iter().enumerate() {
            rem[i - db + j] -= f * bj;
        }
    }
    assert!(rem.iter().all(|&c| c == 0), "inexact cyclotomic division");
    q
}

fn cyclotomic_poly(m: u32) -> Vec<i64> {
    let mut num = vec![0i64; m as usize + 1];
    num[0] = -1;
    num[m as usize] = 1;
    for d in 1..m {
        if m % d == 0 {
            num = exact_div(&num, &cyclotomic_poly(d));
        }
    }
    while num.len() > 1 && *num.last().unwrap() == 0 {
        num.pop();
    }
    num
}

impl CyclotomicField {
    fn build(order: u32) -> Self {
        let modulus = cyclotomic_poly(order);
        let degree = modulus.len() - 1;
        let mut powers = Vec::with_capacity(order as usize);
        let mut cur = vec![0i64; degree];
        cur[0] = 1;
        for _ in 0..order {
            powers.push(cur.clone());
            // multiply by ξ and reduce x^degree = -(Φ - x^degree)
            let top = cur[degree - 1];
            for j in (1..degree).rev() {
                cur[j] = cur[j - 1];
            }
            cur[0] = 0;
            if top != 0 {
                for j in 0..degree {
                    cur[j] -= top * modulus[j];
                }
            }
        }
        CyclotomicField {
            order,
            degree,
            modulus,
            powers,
        }
    }

    pub fn order(&'static self) -> u32 {
        self.order
    }

    /// `φ(M)`, the dimension over `Q`.
    pub fn degree(&'static self) -> usize {
        self.degree
    }

    /// Coefficients of the cyclotomic polynomial, low degree first.
    pub fn modulus(&'static self) -> &'static [i64] {
        &self.modulus
    }

    pub fn zero(&'static self) -> CycNum {
        CycNum {
            field: self,
            coeffs: vec![BigRational::zero(); self.degree],
        }
    }

    pub fn one(&'static self) -> CycNum {
        self.from_i64(1)
    }

    pub fn from_i64(&'static self, v: i64) -> CycNum {
        self.from_rational(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn from_ratio(&'static self, r: Rational64) -> CycNum {
        self.from_rational(BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom())))
    }

    pub fn from_rational(&'static self, r: BigRational) -> CycNum {
        let mut z = self.zero();
        z.coeffs[0] = r;
        z
    }

    pub fn from_coeffs(&'static self, coeffs: Vec<BigRational>) -> CycNum {
        let mut z = self.zero();
        for (j, c) in coeffs.into_iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            z.add_scaled_power(j % self.order as usize, &c);
        }
        z
    }

    /// `ξ_M^p` for any integer `p`.
    pub fn xi_pow(&'static self, p: i64) -> CycNum {
        let m = self.order as i64;
        let e = p.rem_euclid(m) as usize;
        CycNum {
            field: self,
            coeffs: self.powers[e]
                .iter()
                .map(|&c| BigRational::from_integer(BigInt::from(c)))
                .collect(),
        }
    }

    /// `ξ_d^p` embedded as `ξ_M^{pM/d}`.
    pub fn zeta(&'static self, d: u32, p: i64) -> Result<CycNum> {
        if d == 0 || self.order % d != 0 {
            return Err(Error::NotADivisor(d, self.order));
        }
        Ok(self.xi_pow(p * (self.order / d) as i64))
    }

    /// `√−1 = ξ_4`, when `4 | M`.
    pub fn i(&'static self) -> Result<CycNum> {
        self.zeta(4, 1)
    }

    /// `e^{2πi·turns}`; the result must lie in the field.
    pub fn root_from_turns(&'static self, turns: Rational64) -> Result<CycNum> {
        let scaled = turns * Rational64::from_integer(self.order as i64);
        if !scaled.is_integer() {
            return Err(Error::RootNotInField(turns.to_string(), self.order));
        }
        Ok(self.xi_pow(scaled.to_integer()))
    }

    /// Parse the polynomial form printed by `Display`, e.g. `1/2 - 3*z^2 + z`.
    pub fn parse(&'static self, s: &str) -> Result<CycNum> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::Parse("empty cyclotomic number".into()));
        }
        let mut out = self.zero();
        let mut terms: Vec<String> = Vec::new();
        let mut cur = String::new();
        for (idx, ch) in compact.chars().enumerate() {
            if (ch == '+' || ch == '-') && idx > 0 && !cur.ends_with('^') {
                terms.push(std::mem::take(&mut cur));
            }
            cur.push(ch);
        }
        terms.push(cur);
        for t in terms {
            let (neg, body) = match t.strip_prefix('-') {
                Some(rest) => (true, rest),
                None => (false, t.strip_prefix('+').unwrap_or(&t)),
            };
            let (coef_str, pow) = match body.find('z') {
                None => (body, 0i64),
                Some(pos) => {
                    let coef = body[..pos].trim_end_matches('*');
                    let rest = &body[pos + 1..];
                    let pow = if rest.is_empty() {
                        1
                    } else {
                        rest.strip_prefix('^')
                            .ok_or_else(|| Error::Parse(format!("bad term `{t}`")))?
                            .parse::<i64>()
                            .map_err(|e| Error::Parse(format!("bad exponent in `{t}`: {e}")))?
                    };
                    (coef, pow)
                }
            };
            let mut c = if coef_str.is_empty() {
                BigRational::one()
            } else {
                BigRational::from_str(coef_str)
                    .map_err(|e| Error::Parse(format!("bad coefficient `{coef_str}`: {e}")))?
            };
            if neg {
                c = -c;
            }
            out.add_scaled_power(pow.rem_euclid(self.order as i64) as usize, &c);
        }
        Ok(out)
    }
}

/// An element of `Q(ξ_M)`.
#[derive(Clone)]
pub struct CycNum {
    field: &'static CyclotomicField,
    coeffs: Vec<BigRational>,
}

impl PartialEq for CycNum {
    fn eq(&self, other: &Self) -> bool {
        self.field.order == other.field.order && self.coeffs == other.coeffs
    }
}

impl Eq for CycNum {}

impl std::hash::Hash for CycNum {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.field.order.hash(state);
        self.coeffs.hash(state);
    }
}

impl CycNum {
    pub fn field(&self) -> &'static CyclotomicField {
        self.field
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// The rational value, if the element lies in `Q`.
    pub fn as_rational(&self) -> Option<&BigRational> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    /// `p` with `self = ξ_M^p`, if `self` is a root of unity.
    pub fn as_root_of_unity(&self) -> Option<u32> {
        if !self.coeffs.iter().all(|c| c.is_integer()) {
            return None;
        }
        let ints: Vec<i64> = self
            .coeffs
            .iter()
            .map(|c| c.to_integer().to_i64())
            .collect::<Option<_>>()?;
        self.field
            .powers
            .iter()
            .position(|p| *p == ints)
            .map(|p| p as u32)
    }

    fn check(&self, other: &CycNum) {
        assert_eq!(
            self.field.order, other.field.order,
            "arithmetic across different cyclotomic fields"
        );
    }

    pub fn try_add(&self, other: &CycNum) -> Result<CycNum> {
        self.same_field(other)?;
        Ok(self + other)
    }

    pub fn try_mul(&self, other: &CycNum) -> Result<CycNum> {
        self.same_field(other)?;
        Ok(self * other)
    }

    pub fn try_div(&self, other: &CycNum) -> Result<CycNum> {
        self.same_field(other)?;
        Ok(self * &other.inv()?)
    }

    fn same_field(&self, other: &CycNum) -> Result<()> {
        if self.field.order != other.field.order {
            return Err(Error::FieldMismatch(self.field.order, other.field.order));
        }
        Ok(())
    }

    fn add_scaled_power(&mut self, p: usize, c: &BigRational) {
        let deg = self.field.degree;
        if p < deg {
            self.coeffs[p] += c;
        } else {
            for (j, &v) in self.field.powers[p].iter().enumerate() {
                if v != 0 {
                    self.coeffs[j] += c * BigRational::from_integer(BigInt::from(v));
                }
            }
        }
    }

    /// `self += a * b`, avoiding a temporary for the product.
    pub fn add_mul(&mut self, a: &CycNum, b: &CycNum) {
        self.check(a);
        self.check(b);
        let deg = self.field.degree;
        if deg == 1 {
            self.coeffs[0] += &a.coeffs[0] * &b.coeffs[0];
            return;
        }
        let mut conv: Vec<BigRational> = vec![BigRational::zero(); 2 * deg - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                conv[i + j] += x * y;
            }
        }
        for (p, c) in conv.iter().enumerate() {
            if !c.is_zero() {
                self.add_scaled_power(p, c);
            }
        }
    }

    pub fn scale(&self, r: &BigRational) -> CycNum {
        CycNum {
            field: self.field,
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    /// Multiplicative inverse via the extended Euclidean algorithm against `Φ_M`.
    pub fn inv(&self) -> Result<CycNum> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(r) = self.as_rational() {
            return Ok(self.field.from_rational(r.recip()));
        }
        let phi: Vec<BigRational> = self
            .field
            .modulus
            .iter()
            .map(|&c| BigRational::from_integer(BigInt::from(c)))
            .collect();
        let (mut r0, mut r1) = (phi, trim(self.coeffs.clone()));
        let (mut s0, mut s1) = (vec![BigRational::zero()], vec![BigRational::one()]);
        while !(r1.len() == 1 && r1[0].is_zero()) {
            let (q, r) = poly_divrem(&r0, &r1);
            let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
        }
        // r0 is a nonzero constant because Φ_M is irreducible.
        debug_assert_eq!(r0.len(), 1);
        let g = r0[0].clone();
        Ok(self.field.from_coeffs(s0.into_iter().map(|c| c / &g).collect()))
    }

    /// Galois conjugation `ξ ↦ ξ^{-1}` (complex conjugation).
    pub fn conj(&self) -> CycNum {
        let m = self.field.order as usize;
        let mut out = self.field.zero();
        for (j, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                out.add_scaled_power((m - j) % m, c);
            }
        }
        out
    }

    pub fn pow(&self, e: i64) -> Result<CycNum> {
        let mut base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = self.field.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        Ok(acc)
    }

    /// Floating-point image under `ξ_M ↦ e^{2πi/M}`.
    pub fn to_complex(&self) -> (f64, f64) {
        let m = self.field.order as f64;
        let mut re = 0.0;
        let mut im = 0.0;
        for (j, c) in self.coeffs.iter().enumerate() {
            let v = c.to_f64().unwrap_or(f64::NAN);
            let t = 2.0 * std::f64::consts::PI * j as f64 / m;
            re += v * t.cos();
            im += v * t.sin();
        }
        (re, im)
    }
}

fn trim(mut p: Vec<BigRational>) -> Vec<BigRational> {
    while p.len() > 1 && p.last().unwrap().is_zero() {
        p.pop();
    }
    if p.is_empty() {
        p.push(BigRational::zero());
    }
    p
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    trim(out)
}

fn poly_divrem(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut rem = a.to_vec();
    let db = b.len() - 1;
    if rem.len() <= db {
        return (vec![BigRational::zero()], trim(rem));
    }
    let lead = b.last().unwrap().clone();
    let mut q = vec![BigRational::zero(); rem.len() - db];
    for i in (db..rem.len()).rev() {
        if rem[i].is_zero() {
            continue;
        }
        let f = &rem[i] / &lead;
        for (j, bj) in b.iter().enumerate() {
            rem[i - db + j] -= &f * bj;
        }
        q[i - db] = f;
    }
    rem.truncate(db.max(1));
    (trim(q), trim(rem))
}

impl fmt::Display for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            match j {
                0 => write!(f, "{a}")?,
                _ => {
                    if !a.is_one() {
                        write!(f, "{a}*")?;
                    }
                    if j == 1 {
                        write!(f, "z")?;
                    } else {
                        write!(f, "z^{j}")?;
                    }
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [Q(z_{})]", self, self.field.order)
    }
}

impl<'a> Add<&'a CycNum> for &'a CycNum {
    type Output = CycNum;
    fn add(self, rhs: &'a CycNum) -> CycNum {
        self.check(rhs);
        CycNum {
            field: self.field,
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<'a> Sub<&'a CycNum> for &'a CycNum {
    type Output = CycNum;
    fn sub(self, rhs: &'a CycNum) -> CycNum {
        self.check(rhs);
        CycNum {
            field: self.field,
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect(),
        }
    }
}

impl<'a> Mul<&'a CycNum> for &'a CycNum {
    type Output = CycNum;
    fn mul(self, rhs: &'a CycNum) -> CycNum {
        let mut out = self.field.zero();
        out.add_mul(self, rhs);
        out
    }
}

impl<'a> Div<&'a CycNum> for &'a CycNum {
    type Output = CycNum;
    /// Panics on division by zero; use [`CycNum::try_div`] to get an error instead.
    fn div(self, rhs: &'a CycNum) -> CycNum {
        self * &rhs.inv().expect("division by zero in Q(zeta)")
    }
}

impl Neg for &CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        CycNum {
            field: self.field,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for CycNum {
    type Output = CycNum;
    fn neg(mut self) -> CycNum {
        for c in &mut self.coeffs {
            *c = -std::mem::take(c);
        }
        self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<CycNum> for CycNum {
            type Output = CycNum;
            fn $m(self, rhs: CycNum) -> CycNum {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a CycNum> for CycNum {
            type Output = CycNum;
            fn $m(self, rhs: &'a CycNum) -> CycNum {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<CycNum> for &'a CycNum {
            type Output = CycNum;
            fn $m(self, rhs: CycNum) -> CycNum {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl AddAssign<&CycNum> for CycNum {
    fn add_assign(&mut self, rhs: &CycNum) {
        self.check(rhs);
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
    }
}

impl SubAssign<&CycNum> for CycNum {
    fn sub_assign(&mut self, rhs: &CycNum) {
        self.check(rhs);
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a -= b;
        }
    }
}

impl MulAssign<&CycNum> for CycNum {
    fn mul_assign(&mut self, rhs: &CycNum) {
        *self = &*self * rhs;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(cyclotomic_poly(1), vec![-1, 1]);
        assert_eq!(cyclotomic_poly(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_poly(8), vec![1, 0, 0, 0, 1]);
        assert_eq!(cyclotomic_poly(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(field(12).degree(), 4);
    }

    #[test]
    fn zeta_examples() {
        let k = field(12);
        assert_eq!(k.zeta(4, 2).unwrap(), k.from_i64(-1));
        assert_eq!(&k.zeta(3, 1).unwrap() + &k.zeta(3, 2).unwrap(), k.from_i64(-1));
        let mut s = k.zero();
        for r in 1..=3 {
            s += &k.zeta(3, -r).unwrap();
        }
        assert!(s.is_zero());
        assert!(matches!(k.zeta(5, 1), Err(Error::NotADivisor(5, 12))));
    }

    #[test]
    fn zeta_depends_on_residue_only() {
        let k = field(12);
        for d in [1, 2, 3, 4, 6, 12] {
            for p in -30..30 {
                assert_eq!(k.zeta(d, p).unwrap(), k.zeta(d, p + d as i64).unwrap());
            }
        }
    }

    #[test]
    fn norm_of_one_minus_zeta3() {
        let k = field(12);
        let one = k.one();
        let a = &one - &k.zeta(3, 1).unwrap();
        let b = &one - &k.zeta(3, 2).unwrap();
        assert_eq!(&a * &b, k.from_i64(3));
    }

    #[test]
    fn i_squared() {
        let k = field(4);
        let i = k.i().unwrap();
        assert_eq!(&i * &i, k.from_i64(-1));
        assert_eq!(i.conj(), -&i);
    }

    #[test]
    fn conjugation_examples() {
        let k = field(20);
        let z = k.zeta(5, 2).unwrap();
        assert_eq!(z.conj(), k.zeta(5, -2).unwrap());
        assert_eq!(k.one().conj(), k.one());
        let k8 = field(8);
        let x = &k8.from_i64(2) + &(&k8.from_i64(3) * &k8.xi_pow(1));
        let expected = &k8.from_i64(2) + &(&k8.from_i64(3) * &k8.xi_pow(7));
        assert_eq!(x.conj(), expected);
        // ξ_8^7 = -ξ_8^3 in the reduced basis
        assert_eq!(k8.xi_pow(7), -k8.xi_pow(3));
    }

    #[test]
    fn inverse_and_division() {
        let k = field(12);
        let a = k.from_coeffs(vec![q(1, 2), q(-3, 1), q(0, 1), q(5, 7)]);
        let inv = a.inv().unwrap();
        assert!((&a * &inv).is_one());
        assert_eq!(k.zero().inv(), Err(Error::DivisionByZero));
        assert_eq!(k.zero().try_div(&k.zero()), Err(Error::DivisionByZero));
    }

    #[test]
    fn roots_and_turns() {
        let k = field(12);
        assert_eq!(k.root_from_turns(Rational64::new(1, 4)).unwrap(), k.i().unwrap());
        assert!(k.root_from_turns(Rational64::new(1, 9)).is_err());
        assert_eq!(k.xi_pow(5).as_root_of_unity(), Some(5));
        assert_eq!(k.from_i64(2).as_root_of_unity(), None);
    }

    #[test]
    fn display_and_parse() {
        let k = field(12);
        let a = k.from_coeffs(vec![q(1, 2), q(-1, 1), q(0, 1), q(3, 1)]);
        let s = a.to_string();
        assert_eq!(s, "1/2 - z + 3*z^3");
        assert_eq!(k.parse(&s).unwrap(), a);
        assert_eq!(k.parse("0").unwrap(), k.zero());
        assert_eq!(k.parse("-z^2").unwrap(), -k.xi_pow(2));
        assert_eq!(k.parse("z^12").unwrap(), k.one());
        assert!(k.parse("3*y").is_err());
    }
}
