//! A second-order linear ODE over ℚ whose classical solutions never have
//! full support, although the full support solves the tropicalization.
//!
//! With `a_0, a_1, a_2, …` an enumeration of ℚ (`a_0 = 0`, `a_1 = 1`), the
//! equation `y'' + γ y' + β y = 0` is built so that
//! `φ_1 = 1 + Σ_{i≥2} t^i` and `φ_2 = t + Σ_{i≥2} a_i t^i` solve it. The
//! combination `λ_1 φ_1 - λ_2 φ_2` has coefficient `λ_1 - λ_2 a_j` at `t^j`
//! for `j ≥ 2`, which vanishes at the index of `λ_1 / λ_2`.

use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::axioms::{CheckReport, Verdict};
use crate::diffpoly::DiffPolynomial;
use crate::enumeration::{FieldEnumeration, RationalEnumeration};
use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::linalg::rank;
use crate::series::MultiSeries;
use crate::tropical::{is_trop_solution, tropicalize, BooleanSeries};

/// How `γ` and `β` were produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Construction {
    /// Coefficient comparison of `P(φ_1) = P(φ_2) = 0`, which fixes
    /// `b_0 = -2` and `c_0 = -2 a_2`.
    CoefficientComparison,
    /// The coupled recurrences
    /// `b_{i+1} = (i+2)(i+1) + Σ_{j≤i} (i+1-j) c_j - c_i + Σ_{j≤i} b_j` and
    /// `c_{i+1} = -(i+3)(i+2) a_{i+3} - Σ_{j≤i} (i+2-j) c_j a_{i+2-j} - Σ_{j≤i} b_j a_{i+1-j}`
    /// started from arbitrary seeds.
    Seeded { b0: BigRational, c0: BigRational },
}

#[derive(Debug, Clone)]
pub struct CounterexampleInstance {
    order: u32,
    enumeration: Arc<dyn FieldEnumeration>,
    construction: Construction,
    /// `a_0, …, a_{order+1}`.
    a: Vec<BigRational>,
    /// Coefficients of `β` and `γ`, indices `0 .. order-1`.
    b: Vec<BigRational>,
    c: Vec<BigRational>,
}

/// Where `λ_1 φ_1 - λ_2 φ_2` loses its support.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Gap {
    /// The single missing index, inside the window.
    At(usize),
    /// The missing index lies beyond the window.
    NoneInWindow { index: BigUint },
    /// The enumeration never takes the value `λ_1 / λ_2`.
    Unindexed,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapSample {
    pub lambda1: BigRational,
    pub lambda2: BigRational,
    pub gap: Gap,
    /// Indices in `0..=order` where the combination vanishes.
    pub scanned: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct Verification {
    pub report: CheckReport,
    pub samples: Vec<GapSample>,
}

fn rat(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

fn q(s: &BigRational) -> Scalar {
    Scalar::Rational(s.clone())
}

impl CounterexampleInstance {
    /// The equation for the Calkin–Wilf enumeration of ℚ.
    pub fn build(order: u32) -> Result<CounterexampleInstance> {
        CounterexampleInstance::build_with(order, Arc::new(RationalEnumeration))
    }

    pub fn build_with(order: u32, enumeration: Arc<dyn FieldEnumeration>) -> Result<CounterexampleInstance> {
        let mut inst = CounterexampleInstance::skeleton(order, enumeration, Construction::CoefficientComparison)?;
        let a = &inst.a;
        for i in 0..order as usize {
            // Degree i of P(φ_2): the c_i·a_1 term isolates c_i.
            let mut rhs = rat(((i + 2) * (i + 1)) as i64) * &a[i + 2];
            for j in 0..i {
                rhs += rat((i + 1 - j) as i64) * &inst.c[j] * &a[i + 1 - j];
                rhs += &inst.b[j] * &a[i - j];
            }
            inst.c.push(-rhs);
            // Degree i of P(φ_1): φ_1 has no t term, so b_{i-1} drops out.
            let mut rhs = rat(((i + 2) * (i + 1)) as i64);
            for j in 0..i {
                rhs += rat((i + 1 - j) as i64) * &inst.c[j];
            }
            for j in 0..i.saturating_sub(1) {
                rhs += &inst.b[j];
            }
            inst.b.push(-rhs);
        }
        Ok(inst)
    }

    /// `γ`, `β` from the seeded recurrences of [`Construction::Seeded`].
    pub fn from_seeded_recurrence(order: u32, b0: BigRational, c0: BigRational) -> Result<CounterexampleInstance> {
        let construction = Construction::Seeded { b0: b0.clone(), c0: c0.clone() };
        let mut inst = CounterexampleInstance::skeleton(order, Arc::new(RationalEnumeration), construction)?;
        inst.b.push(b0);
        inst.c.push(c0);
        for i in 0..order as usize - 1 {
            let (next_b, next_c) = seeded_step(&inst.a, &inst.b, &inst.c, i);
            inst.b.push(next_b);
            inst.c.push(next_c);
        }
        Ok(inst)
    }

    fn skeleton(order: u32, enumeration: Arc<dyn FieldEnumeration>, construction: Construction) -> Result<CounterexampleInstance> {
        if order < 4 {
            return Err(Error::PreconditionViolated(format!("order must be at least 4, got {order}")));
        }
        let a: Vec<BigRational> = (0..=order as u64 + 1).map(|i| enumeration.value(&BigUint::from(i))).collect();
        Ok(CounterexampleInstance { order, enumeration, construction, a, b: Vec::new(), c: Vec::new() })
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn construction(&self) -> &Construction {
        &self.construction
    }

    pub fn enumeration(&self) -> &dyn FieldEnumeration {
        self.enumeration.as_ref()
    }

    pub fn a(&self, i: usize) -> &BigRational {
        &self.a[i]
    }

    pub fn beta_coeffs(&self) -> &[BigRational] {
        &self.b
    }

    pub fn gamma_coeffs(&self) -> &[BigRational] {
        &self.c
    }

    /// Replaces one coefficient of `β`.
    pub fn with_beta_coefficient(mut self, degree: usize, value: BigRational) -> CounterexampleInstance {
        self.b[degree] = value;
        self
    }

    fn series(coeffs: &[BigRational], precision: i64) -> MultiSeries {
        let c: Vec<Scalar> = coeffs.iter().map(q).collect();
        MultiSeries::univariate(Field::Rationals, &c, precision).expect("rational coefficients")
    }

    pub fn gamma(&self) -> MultiSeries {
        Self::series(&self.c, self.order as i64 - 1)
    }

    pub fn beta(&self) -> MultiSeries {
        Self::series(&self.b, self.order as i64 - 1)
    }

    pub fn phi1(&self) -> MultiSeries {
        let c: Vec<BigRational> = (0..=self.order).map(|i| rat((i != 1) as i64)).collect();
        Self::series(&c, self.order as i64)
    }

    pub fn phi2(&self) -> MultiSeries {
        Self::series(&self.a[..=self.order as usize], self.order as i64)
    }

    /// `y'' + γ y' + β y`.
    pub fn equation(&self) -> DiffPolynomial {
        DiffPolynomial::linear_ode(&[self.beta(), self.gamma()]).expect("well-formed equation")
    }

    /// Re-evaluates the defining recurrences on the stored coefficients.
    pub fn recurrences_hold(&self) -> bool {
        match &self.construction {
            Construction::CoefficientComparison => {
                // P(φ) at degree i, written out from the coefficient lists.
                let phi1 = |k: usize| rat((k != 1) as i64);
                (0..self.order as usize).all(|i| {
                    let mut r1 = rat(((i + 2) * (i + 1)) as i64);
                    let mut r2 = rat(((i + 2) * (i + 1)) as i64) * &self.a[i + 2];
                    for j in 0..=i {
                        r1 += &self.c[j] * rat((i - j + 1) as i64) * phi1(i - j + 1) + &self.b[j] * phi1(i - j);
                        r2 += &self.c[j] * rat((i - j + 1) as i64) * &self.a[i - j + 1] + &self.b[j] * &self.a[i - j];
                    }
                    r1.is_zero() && r2.is_zero()
                })
            }
            Construction::Seeded { b0, c0 } => {
                self.b[0] == *b0
                    && self.c[0] == *c0
                    && (0..self.order as usize - 1).all(|i| seeded_step(&self.a, &self.b, &self.c, i) == (self.b[i + 1].clone(), self.c[i + 1].clone()))
            }
        }
    }

    /// `P(φ_1)` and `P(φ_2)`, known through degree `order - 2`.
    pub fn residuals(&self) -> Result<[MultiSeries; 2]> {
        let p = self.equation();
        Ok([p.evaluate(&[self.phi1()])?, p.evaluate(&[self.phi2()])?])
    }

    pub fn verify_solutions(&self) -> Result<CheckReport> {
        let through = self.order as i64 - 2;
        let mut report = CheckReport::default();
        for (name, res) in ["phi1", "phi2"].iter().zip(self.residuals()?) {
            let verdict = match res.first_nonzero_through(through) {
                None => Verdict::Pass,
                Some((e, c)) => Verdict::Fail(format!("residual {c} at degree {}", e[0])),
            };
            report.push(&format!("{name} solves the equation through degree {through}"), verdict);
        }
        let rows: Vec<Vec<Scalar>> = [self.phi1(), self.phi2()]
            .iter()
            .map(|f| (0..=self.order).map(|i| f.coeff(&[i])).collect())
            .collect();
        let independent = rank(Field::Rationals, self.order as usize + 1, &rows)? == 2;
        report.push(
            "phi1 and phi2 are linearly independent",
            if independent { Verdict::Pass } else { Verdict::Fail("rank below 2".into()) },
        );
        Ok(report)
    }

    /// The index at which `λ_1 φ_1 - λ_2 φ_2` has a zero coefficient.
    pub fn support_gap(&self, lambda1: &BigRational, lambda2: &BigRational) -> Result<Gap> {
        let index = match (lambda1.is_zero(), lambda2.is_zero()) {
            (true, true) => return Err(Error::BothZero),
            (true, false) => BigUint::zero(),
            (false, true) => BigUint::from(1u32),
            (false, false) => match self.enumeration.index_of(&(lambda1 / lambda2)) {
                Some(i) => i,
                None => return Ok(Gap::Unindexed),
            },
        };
        Ok(match index.to_usize() {
            Some(j) if j <= self.order as usize => Gap::At(j),
            _ => Gap::NoneInWindow { index },
        })
    }

    /// Window indices where `λ_1 φ_1 - λ_2 φ_2` vanishes, read off the
    /// coefficients directly.
    pub fn scan_gap(&self, lambda1: &BigRational, lambda2: &BigRational) -> Vec<usize> {
        let (f1, f2) = (self.phi1(), self.phi2());
        (0..=self.order)
            .filter(|&i| {
                let v = q(lambda1) * f1.coeff(&[i]) - q(lambda2) * f2.coeff(&[i]);
                v.is_zero()
            })
            .map(|i| i as usize)
            .collect()
    }

    /// Solutions, tropical solution of `Θ(k)P` for `k ≤ derivative_bound`,
    /// sampled gaps against coefficient scans, and the exact gap identity.
    pub fn full_verification(&self, derivative_bound: u32, samples: usize, seed: u64) -> Result<Verification> {
        let mut report = self.verify_solutions()?;
        report.push(
            "recurrences hold on the stored coefficients",
            if self.recurrences_hold() { Verdict::Pass } else { Verdict::Fail("re-evaluation differs".into()) },
        );

        let full = BooleanSeries::full(1, self.order as i64);
        let p = self.equation();
        for k in 0..=derivative_bound {
            let t = tropicalize(&p.theta(&[k])?);
            let verdict = match is_trop_solution(&t, std::slice::from_ref(&full)) {
                Ok(true) => Verdict::Pass,
                Ok(false) => Verdict::Fail("the tropical sum does not vanish".into()),
                Err(e) => Verdict::Fail(e.to_string()),
            };
            report.push(&format!("full window solves trop(Θ({k})P)"), verdict);
        }

        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut table = Vec::with_capacity(samples);
        for s in 0..samples {
            let (lambda1, lambda2) = self.sample_pair(&mut rng, s);
            let gap = self.support_gap(&lambda1, &lambda2)?;
            let scanned = self.scan_gap(&lambda1, &lambda2);
            table.push(GapSample { lambda1, lambda2, gap, scanned });
        }

        let mismatch = table.iter().find(|g| match &g.gap {
            Gap::At(j) => g.scanned != [*j],
            Gap::NoneInWindow { .. } => !g.scanned.is_empty(),
            Gap::Unindexed => g.scanned.len() > 1,
        });
        report.push(
            &format!("gap index matches the coefficient scan ({} samples)", table.len()),
            match mismatch {
                None => Verdict::Pass,
                Some(g) => Verdict::Fail(format!("λ = ({}, {}): predicted {:?}, scanned {:?}", g.lambda1, g.lambda2, g.gap, g.scanned)),
            },
        );

        // The coefficient λ1 - λ2·a_j at the predicted index is exactly zero,
        // for any pair, so no classical solution has full support.
        let mut identity = Verdict::Pass;
        for g in &table {
            if g.lambda1.is_zero() || g.lambda2.is_zero() {
                continue;
            }
            let ratio = &g.lambda1 / &g.lambda2;
            match self.enumeration.index_of(&ratio) {
                None => {
                    identity = Verdict::Fail(format!("ratio {ratio} has no index in the {} enumeration", self.enumeration.name()));
                    break;
                }
                Some(j) => {
                    let coeff = &g.lambda1 - &g.lambda2 * self.enumeration.value(&j);
                    if !coeff.is_zero() {
                        identity = Verdict::Fail(format!("coefficient {coeff} at index {j} for ratio {ratio}"));
                        break;
                    }
                }
            }
        }
        report.push("gap identity holds exactly for every sampled ratio", identity);

        // A ratio outside {a_2, …, a_order} plays the role of a field element
        // the enumeration has not reached: the window support is full.
        let fresh = self.enumeration.value(&BigUint::from(self.order + 1));
        let stand_in = self.scan_gap(&fresh, &rat(1));
        report.push(
            "a ratio beyond the window attains the full window",
            if stand_in.is_empty() { Verdict::Pass } else { Verdict::Fail(format!("zeros at {stand_in:?}")) },
        );
        Ok(Verification { report, samples: table })
    }

    /// Half the samples aim at a gap inside the window, the rest are
    /// arbitrary small rationals.
    fn sample_pair(&self, rng: &mut ChaCha8Rng, s: usize) -> (BigRational, BigRational) {
        let small = |rng: &mut ChaCha8Rng| {
            let n = rng.random_range(-30i64..=30);
            let d = rng.random_range(1i64..=30);
            BigRational::new(n.into(), d.into())
        };
        match s % 4 {
            0 | 1 => {
                let j = rng.random_range(2..=self.order as usize);
                let mut lambda2 = small(rng);
                if lambda2.is_zero() {
                    lambda2 = rat(1);
                }
                (&self.a[j] * &lambda2, lambda2)
            }
            2 => (small(rng), small(rng)),
            _ => {
                if rng.random_bool(0.5) {
                    (rat(0), rat(rng.random_range(1i64..=9)))
                } else {
                    (rat(rng.random_range(1i64..=9)), rat(0))
                }
            }
        }
    }
}

fn seeded_step(a: &[BigRational], b: &[BigRational], c: &[BigRational], i: usize) -> (BigRational, BigRational) {
    let mut next_b = rat(((i + 2) * (i + 1)) as i64) - &c[i];
    let mut next_c = -(rat(((i + 3) * (i + 2)) as i64) * &a[i + 3]);
    for j in 0..=i {
        next_b += rat((i + 1 - j) as i64) * &c[j] + &b[j];
        next_c -= rat((i + 2 - j) as i64) * &c[j] * &a[i + 2 - j] + &b[j] * &a[i + 1 - j];
    }
    (next_b, next_c)
}
