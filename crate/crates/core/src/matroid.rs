//! The matroid of supports of a finite-dimensional space of sequences
//! `W = span(φ_1, …, φ_s) ⊂ K^E`, restricted to a finite window `E`.
//!
//! Rows are the generators `φ_i`; column `j` is `u^(j) = (φ_1[j], …, φ_s[j])`.
//! The support of `λ·φ` is `{j : λ·u^(j) ≠ 0}`, circuits are the minimal
//! nonempty supports, and they correspond to column-spanned hyperplanes `L`
//! through `C = {j : u^(j) ∉ L}`.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::field::{Cardinality, Field, Scalar};
use crate::linalg::{dot, hyperplane_normal, rank, solve_with_unit, span, Subspace, Vector};
use crate::par::{self, Exec};
use crate::window::{GroundWindow, SupportSet};

/// Default bound on `p^s` for exhaustive searches over coefficient vectors.
pub const DEFAULT_BUDGET: u128 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SupportStrategy {
    /// `S` is a support iff the columns outside `S` leave every column of `S`
    /// outside their span. Exact only when `|E| < |K| + 1`.
    PsiTest,
    /// Try every `λ ∈ F_p^s`.
    BruteForce,
    /// Search for an explicit `λ` vanishing on the columns outside `S` and
    /// on none inside. Exact over any field.
    Witness,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorFamily {
    field: Field,
    window: GroundWindow,
    rows: Vec<Vector>,
    columns: Vec<Vector>,
}

impl GeneratorFamily {
    /// Fails with `RankCollapse` when truncation to the window makes the rows
    /// linearly dependent.
    pub fn new(field: Field, window: GroundWindow, rows: Vec<Vector>) -> Result<GeneratorFamily> {
        if rows.is_empty() {
            return Err(Error::InvalidInput("need at least one generator".into()));
        }
        if window.is_empty() {
            return Err(Error::InvalidInput("window is empty".into()));
        }
        for row in &rows {
            if row.len() != window.len() {
                return Err(Error::DimensionMismatch { expected: window.len(), found: row.len() });
            }
            if row.iter().any(|x| !field.contains(x)) {
                return Err(Error::MixedFields);
            }
        }
        let r = rank(field, window.len(), &rows)?;
        if r != rows.len() {
            return Err(Error::RankCollapse { rank: r, expected: rows.len() });
        }
        let columns = (0..window.len()).map(|j| rows.iter().map(|row| row[j].clone()).collect()).collect();
        Ok(GeneratorFamily { field, window, rows, columns })
    }

    /// Generators given as integer sequences on `{0, …, len-1}`.
    pub fn from_integer_rows(field: Field, rows: &[Vec<i64>]) -> Result<GeneratorFamily> {
        let len = rows.first().map_or(0, Vec::len);
        let window = GroundWindow::univariate(len as u32)?;
        let rows = rows.iter().map(|r| r.iter().map(|&v| field.from_i64(v)).collect()).collect();
        GeneratorFamily::new(field, window, rows)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn window(&self) -> &GroundWindow {
        &self.window
    }

    /// Number of generators `s`.
    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Size of the ground set.
    pub fn len(&self) -> usize {
        self.columns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }

    pub fn rows(&self) -> &[Vector] {
        &self.rows
    }

    pub fn column(&self, j: usize) -> &[Scalar] {
        &self.columns[j]
    }

    pub fn columns(&self) -> &[Vector] {
        &self.columns
    }

    /// `λ·φ` as a sequence on the window.
    pub fn combination(&self, lambda: &[Scalar]) -> Result<Vector> {
        self.check_lambda(lambda)?;
        Ok(self.columns.iter().map(|u| dot(lambda, u)).collect())
    }

    fn check_lambda(&self, lambda: &[Scalar]) -> Result<()> {
        if lambda.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: lambda.len() });
        }
        if lambda.iter().any(|x| !self.field.contains(x)) {
            return Err(Error::MixedFields);
        }
        Ok(())
    }

    fn check_set(&self, set: &SupportSet) -> Result<()> {
        match set.max() {
            Some(m) if m >= self.len() => {
                Err(Error::InvalidInput(format!("index {m} outside window of size {}", self.len())))
            }
            _ => Ok(()),
        }
    }

    pub fn support(&self, lambda: &[Scalar]) -> Result<SupportSet> {
        self.check_lambda(lambda)?;
        Ok(self.columns.iter().enumerate().filter(|(_, u)| !dot(lambda, u).is_zero()).map(|(j, _)| j).collect())
    }

    /// Indices whose column lies outside `l`.
    pub fn psi(&self, l: &Subspace) -> Result<SupportSet> {
        if l.ambient_dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: l.ambient_dim() });
        }
        if l.field() != self.field {
            return Err(Error::MixedFields);
        }
        Ok(self.psi_unchecked(l))
    }

    fn psi_unchecked(&self, l: &Subspace) -> SupportSet {
        self.columns.iter().enumerate().filter(|(_, u)| !l.contains_unchecked(u)).map(|(j, _)| j).collect()
    }

    /// Span of the columns indexed outside `set`.
    pub fn outside_span(&self, set: &SupportSet) -> Result<Subspace> {
        self.check_set(set)?;
        Ok(self.outside_span_unchecked(set))
    }

    fn outside_span_unchecked(&self, set: &SupportSet) -> Subspace {
        let outside: Vec<Vector> =
            (0..self.len()).filter(|&j| !set.contains(j)).map(|j| self.columns[j].clone()).collect();
        span(self.field, self.dim(), &outside).expect("columns share the family's field")
    }

    pub fn is_circuit(&self, c: &SupportSet) -> Result<bool> {
        if c.is_empty() {
            return Err(Error::EmptySet);
        }
        let l = self.outside_span(c)?;
        Ok(l.dim() + 1 == self.dim() && c.iter().all(|i| !l.contains_unchecked(&self.columns[i])))
    }

    pub fn circuits(&self) -> Vec<SupportSet> {
        self.circuits_with(Exec::default())
    }

    /// Every circuit, sorted. Enumerates the column-spanned hyperplanes once
    /// each (through their greedy column bases) and maps them through `psi`.
    pub fn circuits_with(&self, exec: Exec) -> Vec<SupportSet> {
        let hyperplanes = self.column_flats(exec, self.dim() - 1, true);
        let mut out: Vec<SupportSet> = par::map_slice(exec, &hyperplanes, |h| self.psi_unchecked(h));
        out.sort();
        out.dedup();
        out
    }

    /// Every proper subspace of `K^s` spanned by a set of columns, including
    /// the zero subspace.
    pub fn lin_subspaces(&self) -> Vec<Subspace> {
        self.column_flats(Exec::default(), self.dim() - 1, false)
    }

    /// `{psi(L) : L proper and column-spanned}`, sorted.
    pub fn psi_image(&self) -> Vec<SupportSet> {
        let mut out: Vec<SupportSet> = self.lin_subspaces().iter().map(|l| self.psi_unchecked(l)).collect();
        out.sort();
        out.dedup();
        out
    }

    /// Column-spanned subspaces of dimension `≤ max_rank` (or exactly
    /// `max_rank` when `exact`), each produced once: a set of columns is
    /// visited only if it is the greedy (lowest-index) basis of its span.
    fn column_flats(&self, exec: Exec, max_rank: usize, exact: bool) -> Vec<Subspace> {
        let zero = Subspace::zero(self.field, self.dim());
        let mut out = Vec::new();
        if !exact || max_rank == 0 {
            out.push(zero.clone());
        }
        if max_rank == 0 {
            return out;
        }
        let roots: Vec<usize> = (0..self.len()).filter(|&j| !zero.contains_unchecked(&self.columns[j])).collect();
        let mut rest = par::flat_map_range(exec, 0..roots.len(), |k| {
            let first = roots[k];
            let mut found = Vec::new();
            let prefix = vec![zero.clone(), zero.extended(&self.columns[first])];
            self.flats_from(&mut vec![first], prefix, max_rank, exact, &mut found);
            found
        });
        out.append(&mut rest);
        out
    }

    /// `prefix[k]` is the span of the first `k` chosen columns.
    fn flats_from(
        &self,
        chosen: &mut Vec<usize>,
        prefix: Vec<Subspace>,
        max_rank: usize,
        exact: bool,
        out: &mut Vec<Subspace>,
    ) {
        let k = chosen.len();
        let current = &prefix[k];
        let last = chosen[k - 1];
        // Greedy-basis test: a skipped column inside the span must already
        // lie in the span of the chosen columns before it.
        let mut next_chosen = 0;
        for j in 0..last {
            if next_chosen < k && chosen[next_chosen] == j {
                next_chosen += 1;
                continue;
            }
            let u = &self.columns[j];
            if current.contains_unchecked(u) && !prefix[next_chosen].contains_unchecked(u) {
                return;
            }
        }
        if !exact || k == max_rank {
            out.push(current.clone());
        }
        if k == max_rank {
            return;
        }
        for next in last + 1..self.len() {
            let u = &self.columns[next];
            if current.contains_unchecked(u) {
                continue;
            }
            let mut child = prefix.clone();
            child.push(current.extended(u));
            chosen.push(next);
            self.flats_from(chosen, child, max_rank, exact, out);
            chosen.pop();
        }
    }

    /// A circuit through `z` inside `support(λ)`: grow the span of the
    /// columns outside the support by support columns, never capturing
    /// `u^(z)`, until it is a hyperplane, then take its normal.
    pub fn minimal_support_through(&self, lambda: &[Scalar], z: usize) -> Result<SupportSet> {
        let supp = self.support(lambda)?;
        if !supp.contains(z) {
            return Err(Error::PreconditionViolated(format!("index {z} is not in the support")));
        }
        let uz = &self.columns[z];
        let mut l = self.outside_span_unchecked(&supp);
        for j in supp.iter() {
            if l.dim() + 1 == self.dim() {
                break;
            }
            if j == z || l.contains_unchecked(&self.columns[j]) {
                continue;
            }
            let grown = l.extended(&self.columns[j]);
            if !grown.contains_unchecked(uz) {
                l = grown;
            }
        }
        debug_assert_eq!(l.dim() + 1, self.dim());
        let normal = solve_with_unit(self.field, self.dim(), l.basis(), uz)?
            .ok_or_else(|| Error::PreconditionViolated("column lies in the grown span".into()))?;
        self.support(&normal)
    }

    /// No circuit inside `x`; equivalently the columns outside `x` span `K^s`.
    pub fn is_independent(&self, x: &SupportSet) -> Result<bool> {
        Ok(self.outside_span(x)?.is_full())
    }

    pub fn cocircuits(&self) -> Vec<SupportSet> {
        self.cocircuits_with(Exec::default())
    }

    /// Minimal linearly dependent sets of columns, sorted.
    ///
    /// Each one is an independent set `I` plus a larger index `x` whose
    /// column is a combination of `I` with every coefficient nonzero.
    pub fn cocircuits_with(&self, exec: Exec) -> Vec<SupportSet> {
        let zero = Subspace::zero(self.field, self.dim());
        let mut out: Vec<SupportSet> = (0..self.len())
            .filter(|&j| zero.contains_unchecked(&self.columns[j]))
            .map(|j| SupportSet::from_indices([j]))
            .collect();
        let mut rest = par::flat_map_range(exec, 0..self.len(), |first| {
            let mut found = Vec::new();
            if !zero.contains_unchecked(&self.columns[first]) {
                let s = zero.extended(&self.columns[first]);
                self.cocircuits_from(&mut vec![first], &s, &mut found);
            }
            found
        });
        out.append(&mut rest);
        out.sort();
        out
    }

    fn cocircuits_from(&self, indep: &mut Vec<usize>, s: &Subspace, out: &mut Vec<SupportSet>) {
        let last = *indep.last().expect("nonempty");
        for x in last + 1..self.len() {
            let u = &self.columns[x];
            if s.contains_unchecked(u) {
                let minimal = (0..indep.len()).all(|drop| {
                    let others: Vec<Vector> = indep
                        .iter()
                        .enumerate()
                        .filter(|&(k, _)| k != drop)
                        .map(|(_, &i)| self.columns[i].clone())
                        .collect();
                    !span(self.field, self.dim(), &others).expect("same field").contains_unchecked(u)
                });
                if minimal {
                    out.push(indep.iter().copied().chain([x]).collect());
                }
            } else if indep.len() < self.dim() {
                indep.push(x);
                self.cocircuits_from(indep, &s.extended(u), out);
                indep.pop();
            }
        }
    }

    /// A union of circuits (the empty set included).
    pub fn is_scrawl(&self, set: &SupportSet) -> Result<bool> {
        Ok(&self.scrawl_closure(set)? == set)
    }

    /// Union of all circuits contained in `set`. An index `z ∈ set` lies on
    /// such a circuit iff `u^(z)` is outside the span of the columns not in
    /// `set`.
    pub fn scrawl_closure(&self, set: &SupportSet) -> Result<SupportSet> {
        let l = self.outside_span(set)?;
        Ok(set.iter().filter(|&z| !l.contains_unchecked(&self.columns[z])).collect())
    }

    /// `|E| < |K ∪ {K}|`, under which every scrawl is a support.
    pub fn cardinality_condition(&self) -> bool {
        match self.field.successor_cardinality() {
            Cardinality::Finite(n) => (self.len() as u128) < n,
            Cardinality::Infinite => true,
        }
    }

    pub fn is_support(&self, set: &SupportSet, strategy: SupportStrategy) -> Result<bool> {
        self.is_support_with_budget(set, strategy, DEFAULT_BUDGET)
    }

    pub fn is_support_with_budget(&self, set: &SupportSet, strategy: SupportStrategy, budget: u128) -> Result<bool> {
        self.check_set(set)?;
        match strategy {
            SupportStrategy::PsiTest => {
                if !self.cardinality_condition() {
                    return Err(Error::StrategyUnavailable(format!(
                        "psi test needs |E| < |{}| + 1, window has {} points",
                        self.field,
                        self.len()
                    )));
                }
                Ok(&self.psi_unchecked(&self.outside_span_unchecked(set)) == set)
            }
            SupportStrategy::BruteForce => {
                let (p, total) = self.brute_force_size(budget)?;
                let cols = self.residue_columns(p);
                let target = set.as_slice();
                Ok((0..total).any(|code| residue_support(&cols, &decode(code, p, self.dim()), p) == target))
            }
            SupportStrategy::Witness => Ok(self.support_witness(set)?.is_some()),
        }
    }

    /// Some `λ` with `support(λ) = set`, if one exists.
    pub fn support_witness(&self, set: &SupportSet) -> Result<Option<Vector>> {
        self.check_set(set)?;
        if set.is_empty() {
            return Ok(Some(vec![self.field.zero(); self.dim()]));
        }
        let l = self.outside_span_unchecked(set);
        let inside: Vec<Vector> = set.iter().map(|j| self.columns[j].clone()).collect();
        hyperplane_normal(&l, &inside)
    }

    fn brute_force_size(&self, budget: u128) -> Result<(u64, u128)> {
        let Field::Prime(p) = self.field else {
            return Err(Error::StrategyUnavailable("brute force needs a finite field".into()));
        };
        let required = (p as u128).checked_pow(self.dim() as u32).unwrap_or(u128::MAX);
        if required > budget {
            return Err(Error::BudgetExceeded { required, budget });
        }
        Ok((p, required))
    }

    fn residue_columns(&self, p: u64) -> Vec<Vec<u64>> {
        self.columns
            .iter()
            .map(|u| {
                u.iter()
                    .map(|x| match x {
                        Scalar::Residue { value, .. } => *value,
                        Scalar::Rational(_) => unreachable!("family over F_{p}"),
                    })
                    .collect()
            })
            .collect()
    }

    pub fn supports_enumerate(&self) -> Result<Vec<SupportSet>> {
        self.supports_enumerate_with(DEFAULT_BUDGET, Exec::default())
    }

    /// The exact set of supports over `F_p` by trying every `λ`.
    pub fn supports_enumerate_with(&self, budget: u128, exec: Exec) -> Result<Vec<SupportSet>> {
        let (p, total) = self.brute_force_size(budget)?;
        let cols = self.residue_columns(p);
        let s = self.dim();
        let chunks = par::map_chunks(exec, total as u64, 4096, |range| {
            range
                .map(|code| SupportSet::from_indices(residue_support(&cols, &decode(code as u128, p, s), p)))
                .collect::<BTreeSet<_>>()
        });
        let all: BTreeSet<SupportSet> = chunks.into_iter().flatten().collect();
        Ok(all.into_iter().collect())
    }
}

fn decode(mut code: u128, p: u64, s: usize) -> Vec<u64> {
    let mut out = vec![0u64; s];
    for slot in out.iter_mut().rev() {
        *slot = (code % p as u128) as u64;
        code /= p as u128;
    }
    out
}

fn residue_support(cols: &[Vec<u64>], lambda: &[u64], p: u64) -> Vec<usize> {
    cols.iter()
        .enumerate()
        .filter(|(_, u)| {
            let acc = u.iter().zip(lambda).fold(0u128, |acc, (&a, &b)| (acc + a as u128 * b as u128) % p as u128);
            acc != 0
        })
        .map(|(j, _)| j)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn set(ix: &[usize]) -> SupportSet {
        SupportSet::from_indices(ix.iter().copied())
    }

    fn f2_intro() -> GeneratorFamily {
        GeneratorFamily::from_integer_rows(Field::Prime(2), &[vec![0, 1, 1], vec![1, 0, 1]]).unwrap()
    }

    /// `1 + Σ_{i≥2} t^i` and `Σ i t^i`.
    fn shifted_ones(len: usize) -> GeneratorFamily {
        let a: Vec<i64> = (0..len as i64).map(|i| if i == 1 { 0 } else { 1 }).collect();
        let b: Vec<i64> = (0..len as i64).collect();
        GeneratorFamily::from_integer_rows(Field::Rationals, &[a, b]).unwrap()
    }

    fn even_odd(field: Field, len: usize) -> GeneratorFamily {
        let a: Vec<i64> = (0..len).map(|i| (i % 2 == 0) as i64).collect();
        let b: Vec<i64> = (0..len).map(|i| (i % 2 == 1) as i64).collect();
        GeneratorFamily::from_integer_rows(field, &[a, b]).unwrap()
    }

    fn evens(len: usize) -> SupportSet {
        (0..len).step_by(2).collect()
    }

    fn odds(len: usize) -> SupportSet {
        (1..len).step_by(2).collect()
    }

    /// All subsets of the window (as masks) that are minimal nonempty among
    /// the given family of sets.
    fn minimal_nonempty(sets: &[SupportSet]) -> Vec<SupportSet> {
        let mut out: Vec<SupportSet> = sets
            .iter()
            .filter(|a| !a.is_empty() && !sets.iter().any(|b| !b.is_empty() && b != *a && b.is_subset(a)))
            .cloned()
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// Minimal dependent column subsets by checking every subset's rank.
    fn brute_cocircuits(fam: &GeneratorFamily) -> Vec<SupportSet> {
        let n = fam.len();
        let dependent: Vec<SupportSet> = (0u64..1 << n)
            .map(SupportSet::from_mask)
            .filter(|x| {
                let cols: Vec<Vector> = x.iter().map(|j| fam.column(j).to_vec()).collect();
                rank(fam.field(), fam.dim(), &cols).unwrap() < x.len()
            })
            .collect();
        minimal_nonempty(&dependent)
    }

    fn random_family(p: u64, s: usize, n: usize, seed: u64) -> Option<GeneratorFamily> {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let rows: Vec<Vec<i64>> =
            (0..s).map(|_| (0..n).map(|_| rng.random_range(0..p as i64)).collect()).collect();
        GeneratorFamily::from_integer_rows(Field::Prime(p), &rows).ok()
    }

    #[test]
    fn rank_collapse_is_rejected() {
        let err = GeneratorFamily::from_integer_rows(Field::Rationals, &[vec![1, 0, 0], vec![2, 0, 0]]).unwrap_err();
        assert_eq!(err, Error::RankCollapse { rank: 1, expected: 2 });
        let err = GeneratorFamily::from_integer_rows(Field::Rationals, &[vec![1, 0], vec![1, 0]]).unwrap_err();
        assert!(matches!(err, Error::RankCollapse { .. }));
        assert!(GeneratorFamily::from_integer_rows(Field::Rationals, &[]).is_err());
    }

    #[test]
    fn supports_of_combinations() {
        let fam = f2_intro();
        let f = Field::Prime(2);
        assert_eq!(fam.support(&[f.zero(), f.zero()]).unwrap(), SupportSet::empty());
        assert_eq!(fam.support(&[f.one(), f.one()]).unwrap(), set(&[0, 1]));
        assert!(matches!(fam.support(&[f.one()]), Err(Error::DimensionMismatch { .. })));
        let single = GeneratorFamily::from_integer_rows(Field::Rationals, &[vec![0, 3, 0, 5]]).unwrap();
        assert_eq!(single.support(&[Scalar::integer(1)]).unwrap(), set(&[1, 3]));
    }

    #[test]
    fn psi_examples() {
        let fam = shifted_ones(12);
        let q = Field::Rationals;
        assert_eq!(fam.psi(&Subspace::full(q, 2)).unwrap(), SupportSet::empty());
        assert_eq!(fam.psi(&Subspace::zero(q, 2)).unwrap(), fam.window().full());
        let l = span(q, 2, &[vec![q.one(), q.zero()]]).unwrap();
        assert_eq!(fam.psi(&l).unwrap(), (1..12).collect());
        assert!(fam.psi(&Subspace::zero(q, 3)).is_err());
    }

    #[test]
    fn outside_span_examples() {
        let fam = f2_intro();
        assert_eq!(fam.outside_span(&fam.window().full()).unwrap().dim(), 0);
        assert!(fam.outside_span(&SupportSet::empty()).unwrap().is_full());
        let l = fam.outside_span(&set(&[1, 2])).unwrap();
        assert_eq!(l.dim(), 1);
        assert!(l.contains(fam.column(0)).unwrap());
        assert!(fam.outside_span(&set(&[7])).is_err());
    }

    #[test]
    fn circuit_examples() {
        let fam = f2_intro();
        assert!(fam.is_circuit(&set(&[1, 2])).unwrap());
        assert!(!fam.is_circuit(&set(&[0, 1, 2])).unwrap());
        assert_eq!(fam.is_circuit(&SupportSet::empty()), Err(Error::EmptySet));
        assert_eq!(fam.circuits(), vec![set(&[0, 1]), set(&[0, 2]), set(&[1, 2])]);

        let eo = even_odd(Field::Rationals, 12);
        assert!(eo.is_circuit(&evens(12)).unwrap());
        let mut expected = vec![evens(12), odds(12)];
        expected.sort();
        assert_eq!(eo.circuits(), expected);

        let fam = shifted_ones(12);
        let mut expected: Vec<SupportSet> = (0..12).map(|n| (0..12).filter(|&j| j != n).collect()).collect();
        expected.sort();
        assert_eq!(fam.circuits(), expected);

        let with_loop = GeneratorFamily::from_integer_rows(Field::Rationals, &[vec![1, 0, 1], vec![0, 0, 1]]).unwrap();
        assert!(!with_loop.is_circuit(&set(&[1])).unwrap());
    }

    #[test]
    fn minimal_support_examples() {
        let f2 = Field::Prime(2);
        let fam = f2_intro();
        assert_eq!(fam.minimal_support_through(&[f2.one(), f2.zero()], 1).unwrap(), set(&[1, 2]));
        assert!(matches!(
            fam.minimal_support_through(&[f2.one(), f2.zero()], 0),
            Err(Error::PreconditionViolated(_))
        ));
        let eo = even_odd(Field::Rationals, 12);
        let one = Scalar::integer(1);
        assert_eq!(eo.minimal_support_through(&[one.clone(), one.clone()], 4).unwrap(), evens(12));
        assert_eq!(eo.minimal_support_through(&[one.clone(), one], 5).unwrap(), odds(12));
    }

    #[test]
    fn independence_examples() {
        let fam = f2_intro();
        assert!(fam.is_independent(&SupportSet::empty()).unwrap());
        assert!(fam.is_independent(&set(&[0])).unwrap());
        for c in fam.circuits() {
            assert!(!fam.is_independent(&c).unwrap());
        }
    }

    #[test]
    fn cocircuit_examples() {
        assert_eq!(f2_intro().cocircuits(), vec![set(&[0, 1, 2])]);
        let eo = even_odd(Field::Rationals, 8);
        let mut expected = Vec::new();
        for a in 0..8 {
            for b in a + 1..8 {
                if a % 2 == b % 2 {
                    expected.push(set(&[a, b]));
                }
            }
        }
        expected.sort();
        assert_eq!(eo.cocircuits(), expected);
        let with_loop = GeneratorFamily::from_integer_rows(Field::Rationals, &[vec![1, 0, 1], vec![0, 0, 1]]).unwrap();
        assert!(with_loop.cocircuits().contains(&set(&[1])));
    }

    #[test]
    fn scrawl_examples() {
        let fam = f2_intro();
        assert!(fam.is_scrawl(&SupportSet::empty()).unwrap());
        assert!(fam.is_scrawl(&set(&[0, 1, 2])).unwrap());
        assert!(!fam.is_scrawl(&set(&[0])).unwrap());
        assert_eq!(fam.scrawl_closure(&set(&[0, 1])).unwrap(), set(&[0, 1]));
        assert_eq!(fam.scrawl_closure(&set(&[0])).unwrap(), SupportSet::empty());
        let all: SupportSet = fam.circuits().iter().fold(SupportSet::empty(), |a, c| a.union(c));
        assert_eq!(fam.scrawl_closure(&fam.window().full()).unwrap(), all);
    }

    #[test]
    fn support_decisions() {
        let fam = f2_intro();
        for strategy in [SupportStrategy::BruteForce, SupportStrategy::Witness] {
            assert!(fam.is_support(&SupportSet::empty(), strategy).unwrap());
            assert!(!fam.is_support(&set(&[0, 1, 2]), strategy).unwrap());
            assert!(fam.is_support(&set(&[0, 2]), strategy).unwrap());
        }
        assert!(matches!(
            fam.is_support(&set(&[0, 1]), SupportStrategy::PsiTest),
            Err(Error::StrategyUnavailable(_))
        ));
        let q = shifted_ones(6);
        assert!(matches!(
            q.is_support(&set(&[0]), SupportStrategy::BruteForce),
            Err(Error::StrategyUnavailable(_))
        ));
        assert!(q.is_support(&q.window().full(), SupportStrategy::PsiTest).unwrap());
        assert!(q.is_support(&(1..6).collect(), SupportStrategy::Witness).unwrap());
    }

    /// Over `F_q` with `|E| = q + 1`: `φ1 = (0, 1, …, 1)`, `φ2 = (1, 0, 1, …, q-1)`.
    fn sharpness_family(q: u64) -> GeneratorFamily {
        let a: Vec<i64> = (0..=q as i64).map(|i| (i != 0) as i64).collect();
        let b: Vec<i64> = (0..=q as i64).map(|i| if i == 0 { 1 } else { i - 1 }).collect();
        GeneratorFamily::from_integer_rows(Field::Prime(q), &[a, b]).unwrap()
    }

    #[test]
    fn cardinality_sharpness() {
        for q in [2u64, 3, 5, 7] {
            let fam = sharpness_family(q);
            let e = fam.window().full();
            assert!(!fam.cardinality_condition());
            assert!(fam.is_scrawl(&e).unwrap());
            assert!(!fam.is_support(&e, SupportStrategy::BruteForce).unwrap());
            assert!(!fam.is_support(&e, SupportStrategy::Witness).unwrap());
            assert!(fam.psi_image().contains(&e));
        }
    }

    #[test]
    fn cardinality_condition_examples() {
        assert!(!f2_intro().cardinality_condition());
        let f5 = GeneratorFamily::from_integer_rows(Field::Prime(5), &[vec![1, 2, 3, 4, 0]]).unwrap();
        assert!(f5.cardinality_condition());
        assert!(shifted_ones(40).cardinality_condition());
    }

    #[test]
    fn enumerate_supports() {
        let fam = f2_intro();
        assert_eq!(fam.supports_enumerate().unwrap(), vec![SupportSet::empty(), set(&[0, 1]), set(&[0, 2]), set(&[1, 2])]);
        let single = GeneratorFamily::from_integer_rows(Field::Prime(3), &[vec![1, 0, 2, 2]]).unwrap();
        assert_eq!(single.supports_enumerate().unwrap(), vec![SupportSet::empty(), set(&[0, 2, 3])]);
        assert!(matches!(shifted_ones(4).supports_enumerate(), Err(Error::StrategyUnavailable(_))));
        let big = GeneratorFamily::from_integer_rows(Field::Prime(101), &[vec![1, 0, 0, 0], vec![0, 1, 0, 0], vec![0, 0, 1, 0], vec![0, 0, 0, 1]]).unwrap();
        assert!(matches!(
            big.supports_enumerate_with(1_000_000, Exec::Sequential),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn supports_match_psi_image_on_small_windows() {
        let mut checked = 0;
        for seed in 0..60 {
            for n in 2..=3 {
                let Some(fam) = random_family(3, 2, n, seed) else { continue };
                let mut image = fam.psi_image();
                image.push(SupportSet::empty());
                image.sort();
                image.dedup();
                assert_eq!(fam.supports_enumerate().unwrap(), image);
                checked += 1;
            }
        }
        assert!(checked > 50);
    }

    #[test]
    fn parallel_and_sequential_agree() {
        let fam = random_family(5, 3, 11, 7).unwrap();
        assert_eq!(fam.circuits_with(Exec::Sequential), fam.circuits_with(Exec::Parallel));
        assert_eq!(fam.cocircuits_with(Exec::Sequential), fam.cocircuits_with(Exec::Parallel));
        assert_eq!(
            fam.supports_enumerate_with(DEFAULT_BUDGET, Exec::Sequential).unwrap(),
            fam.supports_enumerate_with(DEFAULT_BUDGET, Exec::Parallel).unwrap()
        );
    }

    #[test]
    fn multivariate_window() {
        // Two blocks of 2×2 exponents; the generators live on different blocks.
        let window = GroundWindow::new(vec![vec![2, 2], vec![2, 2]]).unwrap();
        let q = Field::Rationals;
        let row = |vals: [i64; 8]| vals.iter().map(|&v| q.from_i64(v)).collect::<Vector>();
        let fam = GeneratorFamily::new(q, window, vec![row([1, 1, 0, 1, 0, 0, 0, 0]), row([0, 0, 0, 0, 2, 0, 1, 0])]).unwrap();
        assert_eq!(fam.circuits(), vec![set(&[0, 1, 3]), set(&[4, 6])]);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        /// Circuits are exactly the minimal nonempty supports.
        #[test]
        fn circuits_are_minimal_supports(p in prop::sample::select(vec![2u64, 3, 5]), s in 1usize..=3, n in 1usize..=7, seed in any::<u64>()) {
            let Some(fam) = random_family(p, s, n, seed) else { return Ok(()) };
            let supports = fam.supports_enumerate().unwrap();
            let circuits = fam.circuits();
            prop_assert_eq!(&circuits, &minimal_nonempty(&supports));
            for c in &circuits {
                prop_assert!(fam.is_circuit(c).unwrap());
                prop_assert!(!fam.is_independent(c).unwrap());
            }
            prop_assert_eq!(fam.cocircuits(), brute_cocircuits(&fam));
            for c in fam.cocircuits() {
                prop_assert!(c.len() <= s + 1);
            }
        }

        /// Every support is a scrawl, and every scrawl is a support when the
        /// window is smaller than `p + 1`.
        #[test]
        fn supports_and_scrawls(p in prop::sample::select(vec![2u64, 3, 5, 7]), s in 1usize..=3, n in 1usize..=8, seed in any::<u64>()) {
            let Some(fam) = random_family(p, s, n, seed) else { return Ok(()) };
            let supports = fam.supports_enumerate().unwrap();
            let circuits = fam.circuits();
            for mask in 0u64..1 << n {
                let x = SupportSet::from_mask(mask);
                let by_union = circuits.iter().filter(|c| c.is_subset(&x)).fold(SupportSet::empty(), |a, c| a.union(c));
                prop_assert_eq!(fam.scrawl_closure(&x).unwrap(), by_union.clone());
                let is_support = supports.binary_search(&x).is_ok();
                prop_assert_eq!(fam.is_support(&x, SupportStrategy::Witness).unwrap(), is_support);
                prop_assert_eq!(fam.is_support(&x, SupportStrategy::BruteForce).unwrap(), is_support);
                prop_assert_eq!(fam.is_independent(&x).unwrap(), !circuits.iter().any(|c| c.is_subset(&x)));
                if is_support {
                    prop_assert!(fam.is_scrawl(&x).unwrap());
                }
                if fam.cardinality_condition() {
                    prop_assert_eq!(fam.is_support(&x, SupportStrategy::PsiTest).unwrap(), is_support);
                    prop_assert_eq!(fam.is_scrawl(&x).unwrap(), is_support);
                }
            }
        }

        /// The minimal support through `z` is a circuit inside the support.
        #[test]
        fn minimal_support_is_a_circuit(p in prop::sample::select(vec![2u64, 3, 5]), s in 1usize..=3, n in 1usize..=8, seed in any::<u64>(), code in any::<u64>()) {
            let Some(fam) = random_family(p, s, n, seed) else { return Ok(()) };
            let lambda: Vec<Scalar> = decode(code as u128, p, s).iter().map(|&v| Field::Prime(p).from_i64(v as i64)).collect();
            let supp = fam.support(&lambda).unwrap();
            for z in supp.iter() {
                let c = fam.minimal_support_through(&lambda, z).unwrap();
                prop_assert!(c.contains(z));
                prop_assert!(c.is_subset(&supp));
                prop_assert!(fam.is_circuit(&c).unwrap());
            }
        }

        /// Circuits depend only on the row space, not on the chosen basis.
        #[test]
        fn circuits_are_basis_invariant(n in 2usize..=8, seed in any::<u64>(), mix in any::<[i64; 4]>()) {
            let Some(fam) = random_family(5, 2, n, seed) else { return Ok(()) };
            let f = Field::Prime(5);
            let m: Vec<Scalar> = mix.iter().map(|&v| f.from_i64(v)).collect();
            let det = &(&m[0] * &m[3]) - &(&m[1] * &m[2]);
            prop_assume!(!det.is_zero());
            let rows = fam.rows();
            let mixed: Vec<Vector> = (0..2)
                .map(|r| (0..n).map(|j| &(&m[2 * r] * &rows[0][j]) + &(&m[2 * r + 1] * &rows[1][j])).collect())
                .collect();
            let other = GeneratorFamily::new(f, fam.window().clone(), mixed).unwrap();
            prop_assert_eq!(other.circuits(), fam.circuits());
            prop_assert_eq!(other.cocircuits(), fam.cocircuits());
            prop_assert_eq!(other.supports_enumerate().unwrap(), fam.supports_enumerate().unwrap());
        }
    }
}
