//! Exhaustive checks of the matroid axioms on small ground sets, using
//! bitmasks over `{0, …, n-1}`.

use std::collections::HashSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::matroid::GeneratorFamily;
use crate::par::{self, Exec};
use crate::window::SupportSet;

/// Largest ground set the exhaustive checks accept.
pub const GROUND_LIMIT: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    /// A concrete counterexample.
    Fail(String),
}

impl Verdict {
    pub fn is_pass(&self) -> bool {
        matches!(self, Verdict::Pass)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Pass => write!(f, "PASS"),
            Verdict::Fail(w) => write!(f, "FAIL: {w}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CheckReport {
    pub checks: Vec<Check>,
}

impl CheckReport {
    pub fn push(&mut self, name: &str, verdict: Verdict) {
        self.checks.push(Check { name: name.to_string(), verdict });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.verdict.is_pass())
    }

    pub fn verdict(&self, name: &str) -> Option<&Verdict> {
        self.checks.iter().find(|c| c.name == name).map(|c| &c.verdict)
    }
}

fn check_ground(ground: usize, family: &[SupportSet]) -> Result<Vec<u32>> {
    if ground > GROUND_LIMIT {
        return Err(Error::GroundTooLarge { size: ground, limit: GROUND_LIMIT });
    }
    family
        .iter()
        .map(|s| match s.max() {
            Some(m) if m >= ground => Err(Error::InvalidInput(format!("index {m} outside ground set of size {ground}"))),
            _ => Ok(s.mask() as u32),
        })
        .collect()
}

fn show(mask: u32) -> String {
    SupportSet::from_mask(mask as u64).to_string()
}

/// Checks axioms (i) through (iv) of a circuit family on `{0, …, ground-1}`.
pub fn verify_circuit_axioms(ground: usize, family: &[SupportSet]) -> Result<CheckReport> {
    let masks = check_ground(ground, family)?;
    let mut report = CheckReport::default();
    report.push("(i) empty set is not a circuit", empty_not_circuit(&masks));
    report.push("(ii) no circuit contains another", incomparable(&masks));
    report.push("(iii) circuit elimination", elimination(&masks));
    report.push("(iv) maximal independent extensions", maximal_extension(ground, &masks));
    Ok(report)
}

fn empty_not_circuit(masks: &[u32]) -> Verdict {
    if masks.contains(&0) {
        Verdict::Fail("{} is listed".into())
    } else {
        Verdict::Pass
    }
}

fn incomparable(masks: &[u32]) -> Verdict {
    for &a in masks {
        for &b in masks {
            if a != b && a & b == a {
                return Verdict::Fail(format!("{} is a proper subset of {}", show(a), show(b)));
            }
        }
    }
    Verdict::Pass
}

/// For every circuit `C`, every `X ⊆ C` and every admissible family
/// `{C_x}` (with `x ∈ C_y` iff `x = y`), each `z ∈ C ∖ ⋃C_x` must lie on a
/// circuit inside `(C ∪ ⋃C_x) ∖ X`. Only the union `⋃C_x` matters, so the
/// reachable unions are built up one `x` at a time.
fn elimination(masks: &[u32]) -> Verdict {
    let unique: Vec<u32> = masks.iter().copied().collect::<HashSet<_>>().into_iter().collect();
    let failures = par::map_slice(Exec::default(), &unique, |&c| {
        let bits: Vec<u32> = (0..32).filter(|b| c >> b & 1 == 1).collect();
        for sub in 0u32..1 << bits.len() {
            let x: u32 = bits.iter().enumerate().filter(|(k, _)| sub >> k & 1 == 1).map(|(_, &b)| 1u32 << b).sum();
            let mut unions: HashSet<u32> = HashSet::from([0]);
            for &b in &bits {
                if x >> b & 1 == 0 {
                    continue;
                }
                let cands: Vec<u32> = unique.iter().copied().filter(|&d| d & x == 1 << b).collect();
                unions = unions.iter().flat_map(|&u| cands.iter().map(move |&d| u | d)).collect();
                if unions.is_empty() {
                    break;
                }
            }
            for &u in &unions {
                let target = (c | u) & !x;
                let rest = c & !u;
                for z in (0..32).filter(|z| rest >> z & 1 == 1) {
                    let found = unique.iter().any(|&d| d >> z & 1 == 1 && d & !target == 0);
                    if !found {
                        return Some(format!(
                            "C = {}, X = {}, union of C_x = {}, z = {z}: no circuit through z inside {}",
                            show(c),
                            show(x),
                            show(u),
                            show(target)
                        ));
                    }
                }
            }
        }
        None
    });
    match failures.into_iter().flatten().next() {
        Some(w) => Verdict::Fail(w),
        None => Verdict::Pass,
    }
}

/// `table[m]` is true iff no listed circuit is contained in `m`.
fn independence_table(ground: usize, masks: &[u32]) -> Vec<bool> {
    let mut dependent = vec![false; 1 << ground];
    for &c in masks {
        dependent[c as usize] = true;
    }
    for m in 0..1usize << ground {
        if !dependent[m] {
            dependent[m] = (0..ground).any(|b| m >> b & 1 == 1 && dependent[m & !(1 << b)]);
        }
    }
    dependent.into_iter().map(|d| !d).collect()
}

/// For each `I ⊆ X` with `I` independent, greedily extend `I` inside `X` and
/// confirm the result is maximal.
fn maximal_extension(ground: usize, masks: &[u32]) -> Verdict {
    let indep = independence_table(ground, masks);
    for x in 0u32..1 << ground {
        // Enumerate all submasks of x.
        let mut i = x;
        loop {
            if indep[i as usize] {
                let mut grown = i;
                for b in 0..ground {
                    let next = grown | 1 << b;
                    if x >> b & 1 == 1 && next != grown && indep[next as usize] {
                        grown = next;
                    }
                }
                let maximal = (0..ground).all(|b| x >> b & 1 == 0 || grown >> b & 1 == 1 || !indep[(grown | 1 << b) as usize]);
                if !maximal {
                    return Verdict::Fail(format!("I = {}, X = {}: greedy extension {} is not maximal", show(i), show(x), show(grown)));
                }
            }
            if i == 0 {
                break;
            }
            i = (i - 1) & x;
        }
    }
    Verdict::Pass
}

/// Union closure, plus the circuit axioms on the minimal nonempty members,
/// plus every member being a union of minimal members.
pub fn verify_scrawl_axioms(ground: usize, family: &[SupportSet]) -> Result<CheckReport> {
    let masks = check_ground(ground, family)?;
    let present: HashSet<u32> = masks.iter().copied().collect();
    let mut report = CheckReport::default();

    let mut closure = if present.contains(&0) { Verdict::Pass } else { Verdict::Fail("empty union {} is missing".into()) };
    'outer: for (k, &a) in masks.iter().enumerate() {
        for &b in &masks[k + 1..] {
            if !present.contains(&(a | b)) {
                closure = Verdict::Fail(format!("{} ∪ {} = {} is missing", show(a), show(b), show(a | b)));
                break 'outer;
            }
        }
    }
    report.push("union closure", closure);

    let mut minimal: Vec<u32> = present
        .iter()
        .copied()
        .filter(|&a| a != 0 && !present.iter().any(|&b| b != 0 && b != a && b & a == b))
        .collect();
    minimal.sort_unstable();
    report.push("(iii) circuit elimination on minimal members", elimination(&minimal));
    report.push("(iv) maximal independent extensions on minimal members", maximal_extension(ground, &minimal));

    let mut covered = Verdict::Pass;
    for &a in &masks {
        let union = minimal.iter().filter(|&&c| c & !a == 0).fold(0, |u, &c| u | c);
        if union != a {
            covered = Verdict::Fail(format!("{} is not a union of minimal members", show(a)));
            break;
        }
    }
    report.push("members are unions of minimal members", covered);
    Ok(report)
}

/// Minimal sets not contained in any of `bases`.
fn circuits_from_bases(ground: usize, bases: &[u32]) -> Vec<SupportSet> {
    let mut indep = vec![false; 1 << ground];
    for &b in bases {
        indep[b as usize] = true;
    }
    for m in (0..1usize << ground).rev() {
        if !indep[m] {
            indep[m] = (0..ground).any(|b| m >> b & 1 == 0 && indep[m | 1 << b]);
        }
    }
    let mut out: Vec<SupportSet> = (0..1usize << ground)
        .filter(|&m| !indep[m] && (0..ground).all(|b| m >> b & 1 == 0 || indep[m & !(1 << b)]))
        .map(|m| SupportSet::from_mask(m as u64))
        .collect();
    out.sort();
    out
}

/// Bases of the column matroid: `s`-subsets of linearly independent columns.
pub fn column_bases(fam: &GeneratorFamily) -> Result<Vec<SupportSet>> {
    let n = fam.len();
    if n > GROUND_LIMIT {
        return Err(Error::GroundTooLarge { size: n, limit: GROUND_LIMIT });
    }
    let s = fam.dim();
    let full = fam.window().full();
    Ok((0u64..1 << n)
        .filter(|m| m.count_ones() as usize == s)
        .map(SupportSet::from_mask)
        .filter(|b| fam.outside_span(&full.difference(b)).map(|l| l.is_full()).unwrap_or(false))
        .collect())
}

/// Bases of the support matroid are complements of column bases; dualising
/// by complementation must give back the column matroid, whose circuits are
/// the cocircuits of the family.
pub fn dual_check(fam: &GeneratorFamily) -> Result<CheckReport> {
    let n = fam.len();
    let col_bases = column_bases(fam)?;
    let all = (1u32 << n) - 1;
    let bases: Vec<u32> = col_bases.iter().map(|b| all & !(b.mask() as u32)).collect();
    let dual_bases: Vec<u32> = bases.iter().map(|b| all & !b).collect();
    let mut report = CheckReport::default();

    let dual_circuits = circuits_from_bases(n, &dual_bases);
    let cocircuits = fam.cocircuits();
    report.push(
        "dual circuits equal cocircuits",
        if dual_circuits == cocircuits {
            Verdict::Pass
        } else {
            Verdict::Fail(format!("dual circuits {dual_circuits:?} vs cocircuits {cocircuits:?}"))
        },
    );

    let primal = circuits_from_bases(n, &bases);
    let circuits = fam.circuits();
    report.push(
        "circuits match complements of column bases",
        if primal == circuits {
            Verdict::Pass
        } else {
            Verdict::Fail(format!("from bases {primal:?} vs enumerated {circuits:?}"))
        },
    );
    Ok(report)
}
