//! Instance files: JSON documents describing a field, a window and one of
//! generators, a differential equation or a tropical system.

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use tropical_supports::diffpoly::Factor;
use tropical_supports::series::EXACT;
use tropical_supports::{
    BooleanSeries, DiffMonomial, DiffPolynomial, Field, GeneratorFamily, GroundWindow, MultiSeries, Position, Scalar,
    SupportSet, TropDiffPolynomial,
};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    /// `"Q"` or `"F_p"`.
    pub field: String,
    /// Per-block exponent bounds; defaults to one univariate block.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<Vec<Vec<u32>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<Vec<Entry>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subset: Option<Vec<PositionJson>>,
    /// Coefficients `α_0, …, α_{r-1}` of `y^(r) + Σ α_k y^(k)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ode: Option<Vec<SeriesJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub equation: Option<EquationJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub system: Option<Vec<TropEquationJson>>,
    /// Tuples of Boolean series, one entry per unknown function.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub candidates: Option<Vec<Vec<BooleanJson>>>,
}

/// A field element: an integer or a string such as `"-3/4"`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Int(i64),
    Text(String),
}

/// `[block, [e1, …]]`, or a bare exponent in block 0 of a univariate window.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PositionJson {
    Exponent(u32),
    Pair(usize, Vec<u32>),
}

/// A bare exponent for univariate series, or a full tuple.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ExponentJson {
    Univariate(u32),
    Tuple(Vec<u32>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesJson {
    /// Dense univariate coefficients from degree 0.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coeffs: Option<Vec<Entry>>,
    /// Sparse `[exponent, coefficient]` pairs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub terms: Option<Vec<(ExponentJson, Entry)>>,
    /// Omitted means the series is a polynomial known exactly.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub precision: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BooleanJson {
    pub members: Vec<ExponentJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub precision: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorJson {
    #[serde(default)]
    pub var: usize,
    pub deriv: ExponentJson,
    #[serde(default = "one")]
    pub pow: u32,
}

fn one() -> u32 {
    1
}

fn default_arity() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermJson {
    pub coeff: SeriesJson,
    pub monomial: Vec<FactorJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EquationJson {
    #[serde(default = "default_arity")]
    pub nvars: usize,
    #[serde(default = "default_arity")]
    pub nfuncs: usize,
    pub terms: Vec<TermJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TropTermJson {
    pub coeff: BooleanJson,
    pub monomial: Vec<FactorJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TropEquationJson {
    #[serde(default = "default_arity")]
    pub nvars: usize,
    #[serde(default = "default_arity")]
    pub nfuncs: usize,
    pub terms: Vec<TropTermJson>,
}

fn malformed(at: &str, msg: impl std::fmt::Display) -> CliError {
    CliError::Malformed(format!("{at}: {msg}"))
}

fn core(at: &str, e: tropical_supports::Error) -> CliError {
    CliError::Core { at: at.to_string(), source: e }
}

pub fn parse_field(s: &str) -> Result<Field, CliError> {
    let t = s.trim();
    if t == "Q" {
        return Ok(Field::Rationals);
    }
    let p = t
        .strip_prefix("F_")
        .or_else(|| t.strip_prefix('F'))
        .and_then(|p| p.parse::<u64>().ok())
        .ok_or_else(|| malformed("field", format!("expected \"Q\" or \"F_p\", got {s:?}")))?;
    Field::prime(p).map_err(|e| malformed("field", e))
}

fn exponent(raw: &ExponentJson, nvars: usize, at: &str) -> Result<Vec<u32>, CliError> {
    let e = match raw {
        ExponentJson::Univariate(e) => vec![*e],
        ExponentJson::Tuple(e) => e.clone(),
    };
    if e.len() != nvars {
        return Err(malformed(at, format!("exponent has {} entries, expected {nvars}", e.len())));
    }
    Ok(e)
}

impl InstanceFile {
    pub fn parse(text: &str) -> Result<InstanceFile, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Malformed(format!("instance: {e}")))
    }

    pub fn field(&self) -> Result<Field, CliError> {
        parse_field(&self.field)
    }

    fn entry(&self, e: &Entry, at: &str) -> Result<Scalar, CliError> {
        let field = self.field()?;
        let q: BigRational = match e {
            Entry::Int(v) => BigRational::from_integer((*v).into()),
            Entry::Text(s) => s.trim().parse().map_err(|_| malformed(at, format!("{s:?} is not a rational number")))?,
        };
        field.from_rational(&q).map_err(|e| core(at, e))
    }

    pub fn family(&self) -> Result<GeneratorFamily, CliError> {
        let rows = self.generators.as_ref().ok_or_else(|| malformed("generators", "missing"))?;
        let rows: Vec<Vec<Scalar>> = rows
            .iter()
            .enumerate()
            .map(|(i, r)| r.iter().enumerate().map(|(j, e)| self.entry(e, &format!("generators[{i}][{j}]"))).collect())
            .collect::<Result<_, _>>()?;
        let len = rows.first().map_or(0, Vec::len);
        let window = match &self.window {
            Some(b) => GroundWindow::new(b.clone()).map_err(|e| core("window", e))?,
            None => GroundWindow::univariate(len as u32).map_err(|e| core("generators", e))?,
        };
        GeneratorFamily::new(self.field()?, window, rows).map_err(|e| core("generators", e))
    }

    pub fn subset(&self, window: &GroundWindow) -> Result<Option<SupportSet>, CliError> {
        let Some(raw) = &self.subset else { return Ok(None) };
        let mut out = Vec::with_capacity(raw.len());
        for (k, p) in raw.iter().enumerate() {
            let pos = match p {
                PositionJson::Exponent(e) => Position { block: 0, exponent: vec![*e] },
                PositionJson::Pair(b, e) => Position { block: *b, exponent: e.clone() },
            };
            let idx = window.index(&pos).ok_or_else(|| malformed(&format!("subset[{k}]"), format!("{pos} lies outside the window")))?;
            out.push(idx);
        }
        Ok(Some(SupportSet::from_indices(out)))
    }

    fn series(&self, raw: &SeriesJson, nvars: usize, at: &str) -> Result<MultiSeries, CliError> {
        let precision = raw.precision.unwrap_or(EXACT);
        let mut terms = Vec::new();
        match (&raw.coeffs, &raw.terms) {
            (Some(c), None) => {
                if nvars != 1 {
                    return Err(malformed(at, "dense coeffs need a univariate series; use terms"));
                }
                for (i, e) in c.iter().enumerate() {
                    terms.push((vec![i as u32], self.entry(e, &format!("{at}.coeffs[{i}]"))?));
                }
            }
            (None, Some(t)) => {
                for (i, (e, c)) in t.iter().enumerate() {
                    let here = format!("{at}.terms[{i}]");
                    terms.push((exponent(e, nvars, &here)?, self.entry(c, &here)?));
                }
            }
            _ => return Err(malformed(at, "give exactly one of coeffs or terms")),
        }
        MultiSeries::from_terms(self.field()?, nvars, precision, terms).map_err(|e| core(at, e))
    }

    fn monomial(raw: &[FactorJson], nvars: usize, at: &str) -> Result<DiffMonomial, CliError> {
        let factors = raw
            .iter()
            .enumerate()
            .map(|(i, f)| {
                let deriv = exponent(&f.deriv, nvars, &format!("{at}[{i}].deriv"))?;
                Ok(Factor { var: f.var, deriv, pow: f.pow })
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        DiffMonomial::new(factors).map_err(|e| core(at, e))
    }

    pub fn ode(&self) -> Result<Vec<MultiSeries>, CliError> {
        let raw = self.ode.as_ref().ok_or_else(|| malformed("ode", "missing"))?;
        raw.iter().enumerate().map(|(k, s)| self.series(s, 1, &format!("ode[{k}]"))).collect()
    }

    /// The differential polynomial from `equation`, or else from `ode`.
    pub fn equation(&self) -> Result<DiffPolynomial, CliError> {
        if let Some(eq) = &self.equation {
            let terms = eq
                .terms
                .iter()
                .enumerate()
                .map(|(i, t)| {
                    let at = format!("equation.terms[{i}]");
                    Ok((self.series(&t.coeff, eq.nvars, &format!("{at}.coeff"))?, Self::monomial(&t.monomial, eq.nvars, &format!("{at}.monomial"))?))
                })
                .collect::<Result<Vec<_>, CliError>>()?;
            return DiffPolynomial::new(self.field()?, eq.nvars, eq.nfuncs, terms).map_err(|e| core("equation", e));
        }
        if self.ode.is_some() {
            return DiffPolynomial::linear_ode(&self.ode()?).map_err(|e| core("ode", e));
        }
        Err(malformed("equation", "missing (give equation or ode)"))
    }

    fn boolean(raw: &BooleanJson, nvars: usize, at: &str) -> Result<BooleanSeries, CliError> {
        let members = raw
            .members
            .iter()
            .enumerate()
            .map(|(i, m)| exponent(m, nvars, &format!("{at}.members[{i}]")))
            .collect::<Result<Vec<_>, _>>()?;
        BooleanSeries::new(nvars, raw.precision.unwrap_or(EXACT), members).map_err(|e| core(at, e))
    }

    /// The tropical system from `system`, or the tropicalization of the
    /// classical equation.
    pub fn tropical_system(&self) -> Result<Vec<TropDiffPolynomial>, CliError> {
        let Some(system) = &self.system else {
            return Ok(vec![tropical_supports::tropical::tropicalize(&self.equation()?)]);
        };
        if system.is_empty() {
            return Err(malformed("system", "needs at least one equation"));
        }
        system
            .iter()
            .enumerate()
            .map(|(k, eq)| {
                let terms = eq
                    .terms
                    .iter()
                    .enumerate()
                    .map(|(i, t)| {
                        let at = format!("system[{k}].terms[{i}]");
                        Ok((Self::boolean(&t.coeff, eq.nvars, &format!("{at}.coeff"))?, Self::monomial(&t.monomial, eq.nvars, &format!("{at}.monomial"))?))
                    })
                    .collect::<Result<Vec<_>, CliError>>()?;
                TropDiffPolynomial::new(eq.nvars, eq.nfuncs, terms).map_err(|e| core(&format!("system[{k}]"), e))
            })
            .collect()
    }

    pub fn candidates(&self, nvars: usize) -> Result<Vec<Vec<BooleanSeries>>, CliError> {
        let raw = self.candidates.as_ref().ok_or_else(|| malformed("candidates", "missing"))?;
        raw.iter()
            .enumerate()
            .map(|(i, tuple)| {
                tuple.iter().enumerate().map(|(j, b)| Self::boolean(b, nvars, &format!("candidates[{i}][{j}]"))).collect()
            })
            .collect()
    }
}
