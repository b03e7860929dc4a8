//! Computable enumerations of ℚ with computable inverses.
//!
//! `a(0) = 0`, `a(1) = 1`, and for `k ≥ 1` the tail interleaves signs over the
//! Calkin–Wilf sequence `q_1 = 1, q_2 = 1/2, q_3 = 2, q_4 = 1/3, …`:
//! `a(2k) = q_k`, `a(2k+1) = -q_k`. The tail `(a(i))_{i≥2}` hits every
//! nonzero rational exactly once, so the value 1 appears twice (at 1 and 2).

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// The `k`-th Calkin–Wilf rational, `k ≥ 1`.
///
/// Reading the bits of `k` below its leading one from the top: bit 0 maps
/// `a/b ↦ a/(a+b)`, bit 1 maps `a/b ↦ (a+b)/b`.
pub fn calkin_wilf(k: &BigUint) -> BigRational {
    assert!(!k.is_zero(), "Calkin-Wilf sequence starts at index 1");
    let (mut a, mut b) = (BigInt::one(), BigInt::one());
    let bits = k.bits();
    for pos in (0..bits - 1).rev() {
        if k.bit(pos) {
            a += &b;
        } else {
            b += &a;
        }
    }
    BigRational::new(a, b)
}

/// Inverse of [`calkin_wilf`] for positive `q`.
pub fn calkin_wilf_index(q: &BigRational) -> BigUint {
    assert!(q.is_positive());
    let (mut a, mut b) = (q.numer().clone(), q.denom().clone());
    // Walk up the tree, collecting runs of equal bits from the least
    // significant end.
    let mut runs: Vec<(bool, usize)> = Vec::new();
    while !(a.is_one() && b.is_one()) {
        if a < b {
            let steps = run_length(&b, &a);
            let n = usize::try_from(steps.magnitude().clone()).expect("index too large");
            runs.push((false, n));
            b -= &a * BigInt::from(n);
        } else {
            let steps = run_length(&a, &b);
            let n = usize::try_from(steps.magnitude().clone()).expect("index too large");
            runs.push((true, n));
            a -= &b * BigInt::from(n);
        }
    }
    let mut k = BigUint::one();
    for (bit, n) in runs.into_iter().rev() {
        k <<= n;
        if bit {
            k += (BigUint::one() << n) - 1u32;
        }
    }
    k
}

/// Number of consecutive parent steps that subtract `small` from `large`:
/// stop once the remainder drops below `small`, or at `1/1`.
fn run_length(large: &BigInt, small: &BigInt) -> BigInt {
    let (quot, rem) = large.div_rem(small);
    if rem.is_zero() {
        quot - 1
    } else {
        quot
    }
}

/// `a(i)` of the enumeration described in the module docs.
pub fn rational_enumerate(i: &BigUint) -> BigRational {
    if i.is_zero() {
        return BigRational::zero();
    }
    if i.is_one() {
        return BigRational::one();
    }
    let (k, sign) = i.div_rem(&BigUint::from(2u32));
    let q = calkin_wilf(&k);
    if sign.is_zero() {
        q
    } else {
        -q
    }
}

/// Smallest `i` with `a(i) = q`, restricted to `{0} ∪ {i ≥ 2}`.
///
/// In particular `rational_index(1) = 2`, never 1.
pub fn rational_index(q: &BigRational) -> BigUint {
    if q.is_zero() {
        return BigUint::zero();
    }
    let k = calkin_wilf_index(&q.abs());
    let base = k << 1u32;
    if q.is_negative() {
        base + 1u32
    } else {
        base
    }
}

/// A sequence `a_0, a_1, …` of rationals with `a_0 = 0`, `a_1 = 1`, used to
/// build the countable-field counterexample.
pub trait FieldEnumeration: Send + Sync + std::fmt::Debug {
    fn value(&self, i: &BigUint) -> BigRational;

    /// Index `i ≥ 2` with `value(i) = q` (or 0 for `q = 0`), if any.
    fn index_of(&self, q: &BigRational) -> Option<BigUint>;

    fn name(&self) -> &'static str;
}

/// The surjective enumeration of ℚ ([`rational_enumerate`]).
#[derive(Debug, Clone, Copy, Default)]
pub struct RationalEnumeration;

impl FieldEnumeration for RationalEnumeration {
    fn value(&self, i: &BigUint) -> BigRational {
        rational_enumerate(i)
    }

    fn index_of(&self, q: &BigRational) -> Option<BigUint> {
        Some(rational_index(q))
    }

    fn name(&self) -> &'static str {
        "calkin-wilf"
    }
}

/// `0, 1, 1, -1, 2, -2, …`: misses every non-integer, so it is not an
/// enumeration of a field.
#[derive(Debug, Clone, Copy, Default)]
pub struct IntegerEnumeration;

impl FieldEnumeration for IntegerEnumeration {
    fn value(&self, i: &BigUint) -> BigRational {
        if i.is_zero() {
            return BigRational::zero();
        }
        if i.is_one() {
            return BigRational::one();
        }
        let (k, sign) = i.div_rem(&BigUint::from(2u32));
        let v = BigRational::from_integer(BigInt::from(k));
        if sign.is_zero() {
            v
        } else {
            -v
        }
    }

    fn index_of(&self, q: &BigRational) -> Option<BigUint> {
        if q.is_zero() {
            return Some(BigUint::zero());
        }
        if !q.is_integer() {
            return None;
        }
        let k = q.numer().magnitude().clone() << 1u32;
        Some(if q.is_negative() { k + 1u32 } else { k })
    }

    fn name(&self) -> &'static str {
        "integers"
    }
}
