//! Exact scalars over ℚ and prime fields.
//!
//! A [`Scalar`] carries its own field tag. Arithmetic operators panic when the
//! operands live in different fields; containers validate field agreement at
//! construction time and report [`Error::MixedFields`] instead.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::enumeration::rational_enumerate;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Field {
    Rationals,
    Prime(u64),
}

/// Cardinality of the successor set `K ∪ {K}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cardinality {
    Finite(u128),
    Infinite,
}

impl Field {
    /// Builds `F_p`, rejecting composite moduli by trial division.
    pub fn prime(p: u64) -> Result<Field> {
        if is_prime(p) {
            Ok(Field::Prime(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    pub fn order(&self) -> Option<u64> {
        match self {
            Field::Rationals => None,
            Field::Prime(p) => Some(*p),
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Rationals => 0,
            Field::Prime(p) => *p,
        }
    }

    pub fn successor_cardinality(&self) -> Cardinality {
        match self {
            Field::Rationals => Cardinality::Infinite,
            Field::Prime(p) => Cardinality::Finite(*p as u128 + 1),
        }
    }

    pub fn zero(&self) -> Scalar {
        match self {
            Field::Rationals => Scalar::Rational(BigRational::zero()),
            Field::Prime(p) => Scalar::Residue { value: 0, modulus: *p },
        }
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        match self {
            Field::Rationals => Scalar::Rational(BigRational::from_integer(BigInt::from(v))),
            Field::Prime(p) => Scalar::Residue {
                value: (v as i128).rem_euclid(*p as i128) as u64,
                modulus: *p,
            },
        }
    }

    /// Reduces a rational into this field. Fails in `F_p` when the
    /// denominator vanishes mod p.
    pub fn from_rational(&self, q: &BigRational) -> Result<Scalar> {
        match self {
            Field::Rationals => Ok(Scalar::Rational(q.clone())),
            Field::Prime(p) => {
                let m = BigInt::from(*p);
                let num = residue(q.numer(), &m);
                let den = residue(q.denom(), &m);
                let den = Scalar::Residue { value: den, modulus: *p };
                let num = Scalar::Residue { value: num, modulus: *p };
                num.div(&den)
            }
        }
    }

    pub fn contains(&self, s: &Scalar) -> bool {
        s.field() == *self
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rationals => write!(f, "Q"),
            Field::Prime(p) => write!(f, "F_{p}"),
        }
    }
}

fn residue(v: &BigInt, m: &BigInt) -> u64 {
    let r = ((v % m) + m) % m;
    r.to_u64_digits().1.first().copied().unwrap_or(0)
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p < 4 {
        return true;
    }
    if p.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// An exact field element. Rationals are kept in lowest terms with a positive
/// denominator (guaranteed by `BigRational`), residues in `[0, p)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Residue { value: u64, modulus: u64 },
}

impl Scalar {
    pub fn rational(num: i64, den: i64) -> Scalar {
        Scalar::Rational(BigRational::new(num.into(), den.into()))
    }

    pub fn integer(v: i64) -> Scalar {
        Scalar::rational(v, 1)
    }

    pub fn field(&self) -> Field {
        match self {
            Scalar::Rational(_) => Field::Rationals,
            Scalar::Residue { modulus, .. } => Field::Prime(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_zero(),
            Scalar::Residue { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_one(),
            Scalar::Residue { value, .. } => *value == 1,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(q) => Some(q),
            Scalar::Residue { .. } => None,
        }
    }

    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match self {
            Scalar::Rational(q) => Scalar::Rational(q.recip()),
            Scalar::Residue { value, modulus } => Scalar::Residue {
                value: pow_mod(*value, modulus - 2, *modulus),
                modulus: *modulus,
            },
        })
    }

    pub fn div(&self, rhs: &Scalar) -> Result<Scalar> {
        Ok(self * &rhs.inv()?)
    }

    pub fn checked_add(&self, rhs: &Scalar) -> Result<Scalar> {
        self.same_field(rhs)?;
        Ok(self + rhs)
    }

    pub fn checked_mul(&self, rhs: &Scalar) -> Result<Scalar> {
        self.same_field(rhs)?;
        Ok(self * rhs)
    }

    fn same_field(&self, rhs: &Scalar) -> Result<()> {
        if self.field() == rhs.field() {
            Ok(())
        } else {
            Err(Error::MixedFields)
        }
    }

    /// Multiplies by a small integer (used for derivative factors).
    pub fn scale(&self, k: i64) -> Scalar {
        self * &self.field().from_i64(k)
    }

    /// Height `max(|num|, den)`; residues report their value.
    pub fn height(&self) -> BigInt {
        match self {
            Scalar::Rational(q) => {
                let n = q.numer().abs();
                if &n > q.denom() {
                    n
                } else {
                    q.denom().clone()
                }
            }
            Scalar::Residue { value, .. } => BigInt::from(*value),
        }
    }
}

fn pow_mod(b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u128 % m as u128;
    let mut base = b as u128 % m as u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m as u128;
        }
        base = base * base % m as u128;
        e >>= 1;
    }
    acc as u64
}

fn expect_same(a: &Scalar, b: &Scalar) -> u64 {
    match (a, b) {
        (Scalar::Residue { modulus: p, .. }, Scalar::Residue { modulus: q, .. }) if p == q => *p,
        _ => panic!("scalar arithmetic across fields: {} and {}", a.field(), b.field()),
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &'a Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            _ => {
                let p = expect_same(self, rhs);
                let (Scalar::Residue { value: a, .. }, Scalar::Residue { value: b, .. }) = (self, rhs)
                else {
                    unreachable!()
                };
                Scalar::Residue { value: ((*a as u128 + *b as u128) % p as u128) as u64, modulus: p }
            }
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &'a Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &'a Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            _ => {
                let p = expect_same(self, rhs);
                let (Scalar::Residue { value: a, .. }, Scalar::Residue { value: b, .. }) = (self, rhs)
                else {
                    unreachable!()
                };
                Scalar::Residue { value: ((*a as u128 * *b as u128) % p as u128) as u64, modulus: p }
            }
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Residue { value, modulus } => Scalar::Residue {
                value: if *value == 0 { 0 } else { modulus - value },
                modulus: *modulus,
            },
        }
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &'a Scalar) -> Scalar {
                (&self).$m(rhs)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) => write!(f, "{q}"),
            Scalar::Residue { value, .. } => write!(f, "{value}"),
        }
    }
}

/// Returns `count` pairwise-distinct elements of the field.
///
/// For `F_p` these are the residues `0..count`. For ℚ the list is `a(0)`
/// followed by `a(2), a(3), …` of [`rational_enumerate`]; index 1 is skipped
/// because `a(1) = a(2) = 1`.
pub fn field_enumerate(field: Field, count: usize) -> Result<Vec<Scalar>> {
    match field {
        Field::Prime(p) => {
            if count as u128 > p as u128 {
                return Err(Error::CountExceedsField { count, order: p });
            }
            Ok((0..count as u64).map(|v| Scalar::Residue { value: v, modulus: p }).collect())
        }
        Field::Rationals => Ok((0..count as u64)
            .map(|i| {
                let idx = if i == 0 { 0u64 } else { i + 1 };
                Scalar::Rational(rational_enumerate(&idx.into()))
            })
            .collect()),
    }
}
