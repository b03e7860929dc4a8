//! Differential polynomials in `n` unknown series of `m` variables, their
//! evaluation and derivatives, linear ODE solution bases, and the passage
//! from solution spaces to generator families.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::linalg::Vector;
use crate::matroid::GeneratorFamily;
use crate::series::{total_degree, Exponent, MultiSeries, EXACT};
use crate::window::{GroundWindow, Position, SupportSet};

/// `x_{var, J}^pow`: the `J`-th derivative of unknown `var`, raised to `pow`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Factor {
    pub var: usize,
    pub deriv: Exponent,
    pub pow: u32,
}

/// A product of factors, kept sorted with each `(var, J)` at most once. The
/// empty product is the constant monomial 1.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DiffMonomial(Vec<Factor>);

impl DiffMonomial {
    pub fn one() -> DiffMonomial {
        DiffMonomial(Vec::new())
    }

    /// `x_{var, J}`.
    pub fn var(var: usize, deriv: Exponent) -> DiffMonomial {
        DiffMonomial(vec![Factor { var, deriv, pow: 1 }])
    }

    pub fn new(factors: Vec<Factor>) -> Result<DiffMonomial> {
        let mut merged: BTreeMap<(usize, Exponent), u32> = BTreeMap::new();
        for f in factors {
            if f.pow == 0 {
                return Err(Error::InvalidInput("monomial powers must be at least 1".into()));
            }
            *merged.entry((f.var, f.deriv)).or_insert(0) += f.pow;
        }
        Ok(DiffMonomial(merged.into_iter().map(|((var, deriv), pow)| Factor { var, deriv, pow }).collect()))
    }

    pub fn factors(&self) -> &[Factor] {
        &self.0
    }

    pub fn is_constant(&self) -> bool {
        self.0.is_empty()
    }

    /// A single factor of power one.
    pub fn is_linear(&self) -> bool {
        self.0.len() == 1 && self.0[0].pow == 1
    }

    /// Largest derivative order among the factors.
    pub fn order(&self) -> i64 {
        self.0.iter().map(|f| total_degree(&f.deriv)).max().unwrap_or(0)
    }

    /// `∂/∂t_k` by the Leibniz rule, as `(multiplicity, monomial)` pairs.
    pub fn derivative(&self, k: usize) -> Vec<(u32, DiffMonomial)> {
        let mut out = Vec::new();
        for (idx, f) in self.0.iter().enumerate() {
            let mut factors: Vec<Factor> = self.0.clone();
            if f.pow == 1 {
                factors.remove(idx);
            } else {
                factors[idx].pow -= 1;
            }
            let mut deriv = f.deriv.clone();
            deriv[k] += 1;
            factors.push(Factor { var: f.var, deriv, pow: 1 });
            out.push((f.pow, DiffMonomial::new(factors).expect("powers stay positive")));
        }
        out
    }

    /// `E_M(φ) = Π (Θ(J) φ_var)^pow`.
    pub fn evaluate(&self, phi: &[MultiSeries], field: Field, nvars: usize) -> Result<MultiSeries> {
        let mut acc = MultiSeries::constant(field, nvars, field.one());
        for f in &self.0 {
            let base = phi[f.var].theta(&f.deriv)?;
            acc = acc.mul(&base.pow(f.pow)?)?;
        }
        Ok(acc)
    }
}

impl fmt::Display for DiffMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (k, x) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, "·")?;
            }
            write!(f, "x{}{:?}", x.var, x.deriv)?;
            if x.pow > 1 {
                write!(f, "^{}", x.pow)?;
            }
        }
        Ok(())
    }
}

/// `Σ a_M E_M` with series coefficients `a_M`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiffPolynomial {
    field: Field,
    nvars: usize,
    nfuncs: usize,
    terms: Vec<(MultiSeries, DiffMonomial)>,
}

impl DiffPolynomial {
    /// Merges equal monomials and drops zero coefficients.
    pub fn new(field: Field, nvars: usize, nfuncs: usize, terms: Vec<(MultiSeries, DiffMonomial)>) -> Result<DiffPolynomial> {
        let mut merged: BTreeMap<DiffMonomial, MultiSeries> = BTreeMap::new();
        for (a, m) in terms {
            if a.nvars() != nvars {
                return Err(Error::ArityMismatch { left: nvars, right: a.nvars() });
            }
            if a.field() != field {
                return Err(Error::MixedFields);
            }
            for f in m.factors() {
                if f.var >= nfuncs {
                    return Err(Error::InvalidInput(format!("unknown {} out of range (have {nfuncs})", f.var)));
                }
                if f.deriv.len() != nvars {
                    return Err(Error::ArityMismatch { left: nvars, right: f.deriv.len() });
                }
            }
            let sum = match merged.remove(&m) {
                Some(old) => old.add(&a)?,
                None => a,
            };
            merged.insert(m, sum);
        }
        let terms = merged.into_iter().filter(|(_, a)| !a.is_zero()).map(|(m, a)| (a, m)).collect();
        Ok(DiffPolynomial { field, nvars, nfuncs, terms })
    }

    /// `y^(r) + Σ_k α_k y^(k)` for one unknown in one variable.
    pub fn linear_ode(alpha: &[MultiSeries]) -> Result<DiffPolynomial> {
        let field = alpha.first().map_or(Field::Rationals, MultiSeries::field);
        let r = alpha.len() as u32;
        let mut terms = vec![(MultiSeries::constant(field, 1, field.one()), DiffMonomial::var(0, vec![r]))];
        for (k, a) in alpha.iter().enumerate() {
            terms.push((a.clone(), DiffMonomial::var(0, vec![k as u32])));
        }
        DiffPolynomial::new(field, 1, 1, terms)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn nfuncs(&self) -> usize {
        self.nfuncs
    }

    pub fn terms(&self) -> &[(MultiSeries, DiffMonomial)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Every monomial a single factor of power one; no constant term.
    pub fn is_homogeneous_linear(&self) -> bool {
        self.terms.iter().all(|(_, m)| m.is_linear())
    }

    pub fn order(&self) -> i64 {
        self.terms.iter().map(|(_, m)| m.order()).max().unwrap_or(0)
    }

    fn check_tuple(&self, phi: &[MultiSeries]) -> Result<()> {
        if phi.len() != self.nfuncs {
            return Err(Error::DimensionMismatch { expected: self.nfuncs, found: phi.len() });
        }
        if self.field != Field::Rationals || phi.iter().any(|f| f.field() != Field::Rationals) {
            return Err(Error::CharNotZero);
        }
        for f in phi {
            if f.nvars() != self.nvars {
                return Err(Error::ArityMismatch { left: self.nvars, right: f.nvars() });
            }
        }
        Ok(())
    }

    /// `P(φ)`, known up to the smallest precision among its terms.
    pub fn evaluate(&self, phi: &[MultiSeries]) -> Result<MultiSeries> {
        self.check_tuple(phi)?;
        let input = phi.iter().map(MultiSeries::precision).min().unwrap_or(EXACT);
        let mut acc = MultiSeries::zero(self.field, self.nvars, EXACT);
        for (a, m) in &self.terms {
            let value = a.mul(&m.evaluate(phi, self.field, self.nvars)?)?;
            acc = acc.add(&value)?;
        }
        if self.terms.is_empty() {
            acc = acc.truncate(input);
        }
        if acc.precision() < 0 {
            return Err(Error::PrecisionExhausted { needed: 0, available: acc.precision() });
        }
        Ok(acc)
    }

    /// Whether every coefficient of `P(φ)` of degree `≤ through` vanishes.
    pub fn is_solution(&self, phi: &[MultiSeries], through: i64) -> Result<bool> {
        let value = self.evaluate(phi)?;
        if through > value.precision() {
            return Err(Error::PrecisionExhausted { needed: through, available: value.precision() });
        }
        Ok(value.first_nonzero_through(through).is_none())
    }

    /// `∂P/∂t_k`: differentiates coefficients and monomials.
    pub fn derivative(&self, k: usize) -> Result<DiffPolynomial> {
        if k >= self.nvars {
            return Err(Error::InvalidInput(format!("variable {k} out of range (have {})", self.nvars)));
        }
        let mut unit = vec![0u32; self.nvars];
        unit[k] = 1;
        let mut terms = Vec::new();
        for (a, m) in &self.terms {
            terms.push((a.theta(&unit)?, m.clone()));
            for (mult, dm) in m.derivative(k) {
                terms.push((a.scale(&self.field.from_i64(mult as i64)), dm));
            }
        }
        DiffPolynomial::new(self.field, self.nvars, self.nfuncs, terms)
    }

    /// `Θ(J) P`.
    pub fn theta(&self, j: &[u32]) -> Result<DiffPolynomial> {
        if j.len() != self.nvars {
            return Err(Error::ArityMismatch { left: self.nvars, right: j.len() });
        }
        let mut p = self.clone();
        for (k, &times) in j.iter().enumerate() {
            for _ in 0..times {
                p = p.derivative(k)?;
            }
        }
        Ok(p)
    }
}

impl fmt::Display for DiffPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (a, m)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({a})·{m}")?;
        }
        Ok(())
    }
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::from(1), |acc, k| acc * BigInt::from(k))
}

/// Basis of `y^(r) + α_{r-1} y^(r-1) + ⋯ + α_0 y = 0` near 0, solution `k`
/// having `y^(j)(0) = δ_{jk}`, computed by the coefficient recurrence up to
/// `t^order` (less if the `α` are known to lower precision).
pub fn ode_solution_basis(alpha: &[MultiSeries], order: u32) -> Result<Vec<MultiSeries>> {
    let r = alpha.len();
    if r == 0 {
        return Err(Error::InvalidInput("need at least one coefficient".into()));
    }
    for a in alpha {
        if a.nvars() != 1 {
            return Err(Error::ArityMismatch { left: 1, right: a.nvars() });
        }
        if a.field() != Field::Rationals {
            return Err(Error::CharNotZero);
        }
    }
    let known = alpha.iter().map(MultiSeries::precision).min().unwrap_or(EXACT);
    let precision = (order as i64).min(known.saturating_add(r as i64));
    let top = precision.max(-1);
    let field = Field::Rationals;
    let rat = |n: BigInt, d: BigInt| Scalar::Rational(BigRational::new(n, d));
    let mut basis = Vec::with_capacity(r);
    for k in 0..r {
        let mut y: Vec<Scalar> = vec![field.zero(); (top + 1).max(0) as usize];
        if (k as i64) <= top {
            y[k] = rat(BigInt::from(1), factorial(k as u32));
        }
        for n in r as i64..=top {
            let d = (n - r as i64) as u32;
            // Coefficient of t^d in Σ_q α_q y^(q).
            let mut rhs = field.zero();
            for (q, a) in alpha.iter().enumerate() {
                for (e, c) in a.terms() {
                    let i = e[0];
                    if i > d {
                        continue;
                    }
                    let jj = d - i;
                    let idx = (jj as usize) + q;
                    if y[idx].is_zero() {
                        continue;
                    }
                    let falling = rat(factorial(jj + q as u32), factorial(jj));
                    rhs = &rhs + &(&(c * &y[idx]) * &falling);
                }
            }
            let lead = rat(factorial(n as u32), factorial(d));
            y[n as usize] = -&rhs.div(&lead)?;
        }
        basis.push(MultiSeries::univariate(field, &y, precision)?);
    }
    Ok(basis)
}

/// Embeds an `n`-tuple of exponent sets into the concatenated window: block
/// `k` receives the `k`-th set.
pub fn merge_tuple_support(window: &GroundWindow, supports: &[Vec<Exponent>]) -> Result<SupportSet> {
    if supports.len() != window.nblocks() {
        return Err(Error::WindowMismatch(format!("{} components for {} blocks", supports.len(), window.nblocks())));
    }
    let mut out = Vec::new();
    for (block, set) in supports.iter().enumerate() {
        for e in set {
            let pos = Position { block, exponent: e.clone() };
            let idx = window
                .index(&pos)
                .ok_or_else(|| Error::WindowMismatch(format!("exponent {e:?} does not fit block {block}")))?;
            out.push(idx);
        }
    }
    Ok(SupportSet::from_indices(out))
}

/// Coefficients of an `n`-tuple of series laid out along the window.
pub fn merged_row(window: &GroundWindow, tuple: &[MultiSeries]) -> Result<Vector> {
    if tuple.len() != window.nblocks() {
        return Err(Error::WindowMismatch(format!("{} components for {} blocks", tuple.len(), window.nblocks())));
    }
    for (block, f) in tuple.iter().enumerate() {
        if f.nvars() != window.nvars() {
            return Err(Error::WindowMismatch(format!("component {block} has {} variables, window has {}", f.nvars(), window.nvars())));
        }
        let needed = window.max_total_degree(block) as i64;
        if f.precision() < needed {
            return Err(Error::PrecisionExhausted { needed, available: f.precision() });
        }
    }
    Ok(window.positions().map(|p| tuple[p.block].coeff(&p.exponent)).collect())
}

/// The generator family of a solution space given by a basis of `n`-tuples.
pub fn solution_family(solutions: &[Vec<MultiSeries>], window: &GroundWindow) -> Result<GeneratorFamily> {
    let field = solutions
        .first()
        .and_then(|t| t.first())
        .map(MultiSeries::field)
        .ok_or_else(|| Error::InvalidInput("no solutions given".into()))?;
    let rows = solutions.iter().map(|t| merged_row(window, t)).collect::<Result<Vec<_>>>()?;
    GeneratorFamily::new(field, window.clone(), rows)
}
