//! Truncated multivariate power series with exact coefficients.
//!
//! A series carries a precision `P`: every coefficient of total degree `≤ P`
//! is known, nothing above it is. `EXACT` marks polynomials that are known
//! at every degree.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};

pub type Exponent = Vec<u32>;

/// Precision of a series known in every degree.
pub const EXACT: i64 = i64::MAX;

pub fn total_degree(e: &[u32]) -> i64 {
    e.iter().map(|&x| x as i64).sum()
}

/// `p - d`, keeping `EXACT` exact.
pub fn lower_precision(p: i64, d: i64) -> i64 {
    if p == EXACT {
        EXACT
    } else {
        p - d
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiSeries {
    field: Field,
    nvars: usize,
    terms: BTreeMap<Exponent, Scalar>,
    precision: i64,
}

impl MultiSeries {
    pub fn zero(field: Field, nvars: usize, precision: i64) -> MultiSeries {
        MultiSeries { field, nvars, terms: BTreeMap::new(), precision }
    }

    /// Sums repeated exponents, drops zeros and anything above `precision`.
    pub fn from_terms<I>(field: Field, nvars: usize, precision: i64, terms: I) -> Result<MultiSeries>
    where
        I: IntoIterator<Item = (Exponent, Scalar)>,
    {
        let mut out = MultiSeries::zero(field, nvars, precision);
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(Error::ArityMismatch { left: nvars, right: e.len() });
            }
            if !field.contains(&c) {
                return Err(Error::MixedFields);
            }
            out.add_term(e, c);
        }
        Ok(out)
    }

    /// `Σ coeffs[i] t^i`.
    pub fn univariate(field: Field, coeffs: &[Scalar], precision: i64) -> Result<MultiSeries> {
        MultiSeries::from_terms(field, 1, precision, coeffs.iter().enumerate().map(|(i, c)| (vec![i as u32], c.clone())))
    }

    pub fn constant(field: Field, nvars: usize, c: Scalar) -> MultiSeries {
        let mut out = MultiSeries::zero(field, nvars, EXACT);
        out.add_term(vec![0; nvars], c);
        out
    }

    fn add_term(&mut self, e: Exponent, c: Scalar) {
        if c.is_zero() || total_degree(&e) > self.precision {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(old) => {
                let sum = &*old + &c;
                if sum.is_zero() {
                    self.terms.remove(&e);
                } else {
                    *old = sum;
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn precision(&self) -> i64 {
        self.precision
    }

    pub fn is_exact(&self) -> bool {
        self.precision == EXACT
    }

    /// Nonzero terms in increasing exponent order.
    pub fn terms(&self) -> &BTreeMap<Exponent, Scalar> {
        &self.terms
    }

    pub fn coeff(&self, e: &[u32]) -> Scalar {
        self.terms.get(e).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Exponents with nonzero coefficient.
    pub fn support(&self) -> Vec<Exponent> {
        self.terms.keys().cloned().collect()
    }

    /// Lowest total degree with a nonzero coefficient.
    pub fn order(&self) -> Option<i64> {
        self.terms.keys().map(|e| total_degree(e)).min()
    }

    /// Keeps only degrees `≤ precision`.
    pub fn truncate(&self, precision: i64) -> MultiSeries {
        let precision = precision.min(self.precision);
        MultiSeries {
            field: self.field,
            nvars: self.nvars,
            terms: self.terms.iter().filter(|(e, _)| total_degree(e) <= precision).map(|(e, c)| (e.clone(), c.clone())).collect(),
            precision,
        }
    }

    fn check_compatible(&self, other: &MultiSeries) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::ArityMismatch { left: self.nvars, right: other.nvars });
        }
        if self.field != other.field {
            return Err(Error::MixedFields);
        }
        Ok(())
    }

    pub fn add(&self, other: &MultiSeries) -> Result<MultiSeries> {
        self.check_compatible(other)?;
        let mut out = self.truncate(self.precision.min(other.precision));
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &MultiSeries) -> Result<MultiSeries> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> MultiSeries {
        self.scale(&-self.field.one())
    }

    pub fn scale(&self, k: &Scalar) -> MultiSeries {
        let mut out = MultiSeries::zero(self.field, self.nvars, self.precision);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c * k);
        }
        out
    }

    pub fn mul(&self, other: &MultiSeries) -> Result<MultiSeries> {
        self.check_compatible(other)?;
        let mut out = MultiSeries::zero(self.field, self.nvars, self.precision.min(other.precision));
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let e: Exponent = a.iter().zip(b).map(|(i, j)| i + j).collect();
                out.add_term(e, x * y);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Result<MultiSeries> {
        let mut acc = MultiSeries::constant(self.field, self.nvars, self.field.one());
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// `∂^{|J|} / ∂t_1^{J_1} ⋯ ∂t_m^{J_m}` with the usual falling-factorial
    /// coefficients; needs characteristic zero.
    pub fn theta(&self, j: &[u32]) -> Result<MultiSeries> {
        if self.field != Field::Rationals {
            return Err(Error::CharNotZero);
        }
        if j.len() != self.nvars {
            return Err(Error::ArityMismatch { left: self.nvars, right: j.len() });
        }
        let mut out = MultiSeries::zero(self.field, self.nvars, lower_precision(self.precision, total_degree(j)));
        for (e, c) in &self.terms {
            if e.iter().zip(j).any(|(a, b)| a < b) {
                continue;
            }
            let lowered: Exponent = e.iter().zip(j).map(|(a, b)| a - b).collect();
            let mut factor = BigInt::from(1);
            for (&i, &jk) in lowered.iter().zip(j) {
                for step in 1..=jk {
                    factor *= BigInt::from(i + step);
                }
            }
            out.add_term(lowered, c * &Scalar::Rational(BigRational::from_integer(factor)));
        }
        Ok(out)
    }

    /// Some nonzero coefficient of total degree `≤ through`, lowest degree
    /// first.
    pub fn first_nonzero_through(&self, through: i64) -> Option<(&Exponent, &Scalar)> {
        self.terms.iter().filter(|(e, _)| total_degree(e) <= through).min_by_key(|(e, _)| total_degree(e))
    }
}

impl fmt::Display for MultiSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            write!(f, "0")?;
        }
        for (k, (e, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}")?;
            for (v, &p) in e.iter().enumerate() {
                if p > 0 {
                    write!(f, "·t{}^{p}", v + 1)?;
                }
            }
        }
        if self.precision != EXACT {
            write!(f, " + O(deg {})", self.precision + 1)?;
        }
        Ok(())
    }
}
