//! Boolean power series (sets of exponents), their Newton polyhedra, and
//! tropical vanishing of differential polynomials.
//!
//! Boolean series carry the same total-degree precision as [`MultiSeries`]:
//! members of degree `≤ precision` are known, nothing is known above it.

use std::collections::BTreeSet;

use crate::axioms::{CheckReport, Verdict};
use crate::diffpoly::{DiffMonomial, DiffPolynomial};
use crate::error::{Error, Result};
use crate::series::{lower_precision, total_degree, Exponent, MultiSeries, EXACT};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BooleanSeries {
    nvars: usize,
    members: BTreeSet<Exponent>,
    precision: i64,
}

impl BooleanSeries {
    /// Drops members above `precision`.
    pub fn new<I: IntoIterator<Item = Exponent>>(nvars: usize, precision: i64, members: I) -> Result<BooleanSeries> {
        let mut set = BTreeSet::new();
        for e in members {
            if e.len() != nvars {
                return Err(Error::ArityMismatch { left: nvars, right: e.len() });
            }
            if total_degree(&e) <= precision {
                set.insert(e);
            }
        }
        Ok(BooleanSeries { nvars, members: set, precision })
    }

    pub fn empty(nvars: usize, precision: i64) -> BooleanSeries {
        BooleanSeries { nvars, members: BTreeSet::new(), precision }
    }

    /// `{0}`, the multiplicative identity.
    pub fn one(nvars: usize) -> BooleanSeries {
        BooleanSeries { nvars, members: BTreeSet::from([vec![0; nvars]]), precision: EXACT }
    }

    /// Every exponent of total degree `≤ precision`.
    pub fn full(nvars: usize, precision: i64) -> BooleanSeries {
        assert!(precision != EXACT, "the full series has no finite description");
        let mut members = BTreeSet::new();
        if precision >= 0 {
            lattice_points_up_to(nvars, precision as u32, &mut vec![], &mut members);
        }
        BooleanSeries { nvars, members, precision }
    }

    /// The support of a series, with the same precision.
    pub fn from_series(f: &MultiSeries) -> BooleanSeries {
        BooleanSeries { nvars: f.nvars(), members: f.support().into_iter().collect(), precision: f.precision() }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn precision(&self) -> i64 {
        self.precision
    }

    pub fn members(&self) -> &BTreeSet<Exponent> {
        &self.members
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, e: &[u32]) -> bool {
        self.members.contains(e)
    }

    pub fn truncate(&self, precision: i64) -> BooleanSeries {
        let precision = precision.min(self.precision);
        BooleanSeries {
            nvars: self.nvars,
            members: self.members.iter().filter(|e| total_degree(e) <= precision).cloned().collect(),
            precision,
        }
    }

    fn check_arity(&self, other: &BooleanSeries) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::ArityMismatch { left: self.nvars, right: other.nvars });
        }
        Ok(())
    }

    /// Union.
    pub fn add(&self, other: &BooleanSeries) -> Result<BooleanSeries> {
        self.check_arity(other)?;
        let precision = self.precision.min(other.precision);
        BooleanSeries::new(self.nvars, precision, self.members.iter().chain(&other.members).cloned())
    }

    /// Minkowski sum.
    pub fn mul(&self, other: &BooleanSeries) -> Result<BooleanSeries> {
        self.check_arity(other)?;
        // An exactly empty factor annihilates at every degree.
        if [self, other].iter().any(|s| s.is_empty() && s.precision == EXACT) {
            return Ok(BooleanSeries::empty(self.nvars, EXACT));
        }
        let precision = self.precision.min(other.precision);
        let sums = self.members.iter().flat_map(|a| other.members.iter().map(move |b| a.iter().zip(b).map(|(x, y)| x + y).collect::<Exponent>()));
        BooleanSeries::new(self.nvars, precision, sums)
    }

    pub fn pow(&self, k: u32) -> Result<BooleanSeries> {
        let mut acc = BooleanSeries::one(self.nvars);
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Shift down along variable `var`, discarding members with a zero in
    /// that slot.
    pub fn derivative(&self, var: usize) -> BooleanSeries {
        assert!(var < self.nvars, "variable {var} out of range");
        let members = self
            .members
            .iter()
            .filter(|e| e[var] > 0)
            .map(|e| {
                let mut d = e.clone();
                d[var] -= 1;
                d
            })
            .collect();
        BooleanSeries { nvars: self.nvars, members, precision: lower_precision(self.precision, 1) }
    }

    pub fn theta(&self, j: &[u32]) -> Result<BooleanSeries> {
        if j.len() != self.nvars {
            return Err(Error::ArityMismatch { left: self.nvars, right: j.len() });
        }
        let mut out = self.clone();
        for (var, &times) in j.iter().enumerate() {
            for _ in 0..times {
                out = out.derivative(var);
            }
        }
        Ok(out)
    }
}

fn lattice_points_up_to(nvars: usize, budget: u32, prefix: &mut Vec<u32>, out: &mut BTreeSet<Exponent>) {
    if prefix.len() == nvars {
        out.insert(prefix.clone());
        return;
    }
    for x in 0..=budget {
        prefix.push(x);
        lattice_points_up_to(nvars, budget - x, prefix, out);
        prefix.pop();
    }
}

/// Lattice points of total degree exactly `d`.
fn lattice_points_at(nvars: usize, d: u32) -> Vec<Exponent> {
    let mut all = BTreeSet::new();
    lattice_points_up_to(nvars, d, &mut vec![], &mut all);
    all.into_iter().filter(|e| total_degree(e) == d as i64).collect()
}

/// The vertices of `conv(A + ℕ^m)`, which determine the polyhedron.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VertexPoly {
    nvars: usize,
    vertices: Vec<Exponent>,
}

impl VertexPoly {
    pub fn empty(nvars: usize) -> VertexPoly {
        VertexPoly { nvars, vertices: Vec::new() }
    }

    /// Vertices of the Newton polyhedron of a finite point set, `m ≤ 2`.
    pub fn hull<'a, I: IntoIterator<Item = &'a Exponent>>(nvars: usize, points: I) -> Result<VertexPoly> {
        let points: BTreeSet<&Exponent> = points.into_iter().collect();
        if points.iter().any(|p| p.len() != nvars) {
            return Err(Error::ArityMismatch { left: nvars, right: points.iter().find(|p| p.len() != nvars).map_or(0, |p| p.len()) });
        }
        let vertices = match nvars {
            1 => points.iter().map(|p| (*p).clone()).min().into_iter().collect(),
            2 => staircase_vertices(points.iter().map(|p| (p[0] as i128, p[1] as i128))),
            m => return Err(Error::UnsupportedArity(m)),
        };
        Ok(VertexPoly { nvars, vertices })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Sorted by the first coordinate.
    pub fn vertices(&self) -> &[Exponent] {
        &self.vertices
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Containment of polyhedra: every vertex of `self` lies in `other`.
    pub fn is_subset(&self, other: &VertexPoly) -> bool {
        self.vertices.iter().all(|v| other.contains(v))
    }

    /// Whether `q` lies in the polyhedron.
    pub fn contains(&self, q: &[u32]) -> bool {
        match (self.nvars, self.vertices.as_slice()) {
            (_, []) => false,
            (1, [v]) => q[0] >= v[0],
            (2, vs) => {
                let (qx, qy) = (q[0] as i128, q[1] as i128);
                let first = &vs[0];
                let last = &vs[vs.len() - 1];
                if qx < first[0] as i128 {
                    return false;
                }
                if qx >= last[0] as i128 {
                    return qy >= last[1] as i128;
                }
                vs.windows(2).any(|w| {
                    let (ax, ay, bx, by) = (w[0][0] as i128, w[0][1] as i128, w[1][0] as i128, w[1][1] as i128);
                    ax <= qx && qx <= bx && (qy - ay) * (bx - ax) >= (by - ay) * (qx - ax)
                })
            }
            _ => unreachable!("hulls are only built for one or two variables"),
        }
    }
}

/// Pareto-minimal points, then the strictly convex vertices of the lower
/// chain between the two extreme ones.
fn staircase_vertices<I: Iterator<Item = (i128, i128)>>(points: I) -> Vec<Exponent> {
    let mut pts: Vec<(i128, i128)> = points.collect();
    pts.sort_unstable();
    let mut minimal: Vec<(i128, i128)> = Vec::new();
    for p in pts {
        if minimal.last().is_none_or(|&(_, y)| p.1 < y) {
            minimal.push(p);
        }
    }
    let cross = |o: (i128, i128), a: (i128, i128), b: (i128, i128)| (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0);
    let mut chain: Vec<(i128, i128)> = Vec::new();
    for p in minimal {
        while chain.len() >= 2 && cross(chain[chain.len() - 2], chain[chain.len() - 1], p) <= 0 {
            chain.pop();
        }
        chain.push(p);
    }
    chain.into_iter().map(|(x, y)| vec![x as u32, y as u32]).collect()
}

pub fn newton_vertices(a: &BooleanSeries) -> Result<VertexPoly> {
    VertexPoly::hull(a.nvars, &a.members)
}

fn union_hull(nvars: usize, parts: &[&VertexPoly]) -> Result<VertexPoly> {
    VertexPoly::hull(nvars, parts.iter().flat_map(|p| p.vertices.iter()))
}

/// `Σ s_i` vanishes when dropping any single summand leaves the sum
/// unchanged. Empty summands are the zero element; a sum of no nonempty
/// summands vanishes.
pub fn tropically_vanishes(summands: &[VertexPoly]) -> Result<bool> {
    let Some(nvars) = summands.first().map(|s| s.nvars) else {
        return Ok(true);
    };
    let refs: Vec<&VertexPoly> = summands.iter().collect();
    let total = union_hull(nvars, &refs)?;
    for i in 0..refs.len() {
        let mut rest = refs.clone();
        rest.remove(i);
        if union_hull(nvars, &rest)? != total {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Points above a summand's precision that could still show up, as a set
/// whose upward closure contains all of them.
fn unknown_region(s: &BooleanSeries) -> Vec<Exponent> {
    if s.precision == EXACT {
        return Vec::new();
    }
    let d = (s.precision + 1).max(0) as u32;
    lattice_points_at(s.nvars, d)
}

/// Vanishing of a sum of truncated Boolean series.
///
/// Each summand's true Newton polyhedron lies between that of its known
/// members and that of its known members plus the unknown region, so every
/// partial sum is bracketed. The total must be pinned down exactly; a
/// partial sum decides the verdict when its bracket closes or when its upper
/// end already misses part of the total. Anything else is
/// `PrecisionExhausted`. A sum with no members inside any trusted range
/// vanishes.
pub fn tropically_vanishes_truncated(summands: &[BooleanSeries]) -> Result<bool> {
    let Some(nvars) = summands.first().map(|s| s.nvars) else {
        return Ok(true);
    };
    if summands.iter().all(BooleanSeries::is_empty) {
        return Ok(true);
    }
    let known: Vec<VertexPoly> = summands.iter().map(newton_vertices).collect::<Result<_>>()?;
    let upper: Vec<VertexPoly> = summands
        .iter()
        .map(|s| {
            let tail = unknown_region(s);
            VertexPoly::hull(nvars, s.members.iter().chain(tail.iter()))
        })
        .collect::<Result<_>>()?;
    let bracket = |skip: Option<usize>| -> Result<std::result::Result<VertexPoly, (VertexPoly, VertexPoly)>> {
        let lo: Vec<&VertexPoly> = known.iter().enumerate().filter(|(k, _)| Some(*k) != skip).map(|(_, v)| v).collect();
        let hi: Vec<&VertexPoly> = upper.iter().enumerate().filter(|(k, _)| Some(*k) != skip).map(|(_, v)| v).collect();
        let (lo, hi) = (union_hull(nvars, &lo)?, union_hull(nvars, &hi)?);
        Ok(if lo == hi { Ok(lo) } else { Err((lo, hi)) })
    };
    let needed = summands.iter().map(|s| s.precision).max().unwrap_or(EXACT);
    let available = summands.iter().map(|s| s.precision).min().unwrap_or(EXACT);
    let exhausted = || Error::PrecisionExhausted { needed: needed.saturating_add(1), available };
    let total = bracket(None)?.map_err(|_| exhausted())?;
    let mut undecided = false;
    for i in 0..summands.len() {
        match bracket(Some(i))? {
            Ok(partial) if partial != total => return Ok(false),
            Ok(_) => {}
            // The partial sum is at most `hi`; if that already misses part
            // of the total, dropping summand `i` changes the sum.
            Err((_, hi)) if !total.is_subset(&hi) => return Ok(false),
            Err(_) => undecided = true,
        }
    }
    if undecided {
        return Err(exhausted());
    }
    Ok(true)
}

/// `Σ_M A_M E_M` with Boolean coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TropDiffPolynomial {
    nvars: usize,
    nfuncs: usize,
    terms: Vec<(BooleanSeries, DiffMonomial)>,
}

impl TropDiffPolynomial {
    pub fn new(nvars: usize, nfuncs: usize, terms: Vec<(BooleanSeries, DiffMonomial)>) -> Result<TropDiffPolynomial> {
        for (a, m) in &terms {
            if a.nvars != nvars {
                return Err(Error::ArityMismatch { left: nvars, right: a.nvars });
            }
            for f in m.factors() {
                if f.var >= nfuncs {
                    return Err(Error::InvalidInput(format!("unknown {} out of range (have {nfuncs})", f.var)));
                }
                if f.deriv.len() != nvars {
                    return Err(Error::ArityMismatch { left: nvars, right: f.deriv.len() });
                }
            }
        }
        Ok(TropDiffPolynomial { nvars, nfuncs, terms })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn nfuncs(&self) -> usize {
        self.nfuncs
    }

    pub fn terms(&self) -> &[(BooleanSeries, DiffMonomial)] {
        &self.terms
    }

    pub fn order(&self) -> i64 {
        self.terms.iter().map(|(_, m)| m.order()).max().unwrap_or(0)
    }

    /// `A_M · E_M(ψ)` for each term.
    pub fn evaluate_terms(&self, psi: &[BooleanSeries]) -> Result<Vec<BooleanSeries>> {
        if psi.len() != self.nfuncs {
            return Err(Error::DimensionMismatch { expected: self.nfuncs, found: psi.len() });
        }
        if let Some(bad) = psi.iter().find(|p| p.nvars != self.nvars) {
            return Err(Error::ArityMismatch { left: self.nvars, right: bad.nvars });
        }
        self.terms
            .iter()
            .map(|(a, m)| {
                let mut acc = a.clone();
                for f in m.factors() {
                    acc = acc.mul(&psi[f.var].theta(&f.deriv)?.pow(f.pow)?)?;
                }
                Ok(acc)
            })
            .collect()
    }
}

/// Replaces every coefficient by its support.
pub fn tropicalize(p: &DiffPolynomial) -> TropDiffPolynomial {
    TropDiffPolynomial {
        nvars: p.nvars(),
        nfuncs: p.nfuncs(),
        terms: p.terms().iter().map(|(a, m)| (BooleanSeries::from_series(a), m.clone())).collect(),
    }
}

/// Whether `ψ` tropically solves `p`, within the precision of `ψ`.
pub fn is_trop_solution(p: &TropDiffPolynomial, psi: &[BooleanSeries]) -> Result<bool> {
    let needed = p.order() + 1;
    if let Some(short) = psi.iter().map(|s| s.precision).min() {
        if short < needed {
            return Err(Error::PrecisionExhausted { needed, available: short });
        }
    }
    let summands = p.evaluate_terms(psi)?;
    tropically_vanishes_truncated(&summands)
}

/// Componentwise union of two tuples.
pub fn union_tuple(a: &[BooleanSeries], b: &[BooleanSeries]) -> Result<Vec<BooleanSeries>> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch { expected: a.len(), found: b.len() });
    }
    a.iter().zip(b).map(|(x, y)| x.add(y)).collect()
}

/// Every given tuple must solve every polynomial; then every pairwise union
/// is checked to solve them too.
pub fn semigroup_check(polys: &[TropDiffPolynomial], solutions: &[Vec<BooleanSeries>]) -> Result<CheckReport> {
    for (k, s) in solutions.iter().enumerate() {
        for (i, p) in polys.iter().enumerate() {
            if !is_trop_solution(p, s)? {
                return Err(Error::PreconditionViolated(format!("solution {k} does not solve polynomial {i}")));
            }
        }
    }
    let mut report = CheckReport::default();
    report.push("inputs are tropical solutions", Verdict::Pass);
    let mut verdict = Verdict::Pass;
    let mut pairs = 0usize;
    'outer: for a in 0..solutions.len() {
        for b in a + 1..solutions.len() {
            pairs += 1;
            let u = union_tuple(&solutions[a], &solutions[b])?;
            for (i, p) in polys.iter().enumerate() {
                let ok = match is_trop_solution(p, &u) {
                    Ok(v) => v,
                    Err(Error::PrecisionExhausted { .. }) => false,
                    Err(e) => return Err(e),
                };
                if !ok {
                    verdict = Verdict::Fail(format!("union of solutions {a} and {b} does not solve polynomial {i}"));
                    break 'outer;
                }
            }
        }
    }
    report.push(&format!("pairwise unions are tropical solutions ({pairs} pairs)"), verdict);
    Ok(report)
}
