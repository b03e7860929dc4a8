use num_rational::BigRational;
use serde_json::{json, Value};

use tropical_supports::axioms::{dual_check, verify_circuit_axioms, verify_scrawl_axioms};
use tropical_supports::diffpoly::ode_solution_basis;
use tropical_supports::matroid::DEFAULT_BUDGET;
use tropical_supports::series::EXACT;
use tropical_supports::tropical::{is_trop_solution, semigroup_check};
use tropical_supports::{
    BooleanSeries, CheckReport, CounterexampleInstance, Exec, Gap, GeneratorFamily, GroundWindow, MultiSeries, SupportSet,
    SupportStrategy, TropDiffPolynomial, Verdict,
};

use crate::instance::InstanceFile;
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Circuits,
    Cocircuits,
    Independent,
    ScrawlCheck,
    Supports,
    Axioms,
    DualCheck,
    OdeBasis,
    Tropicalize,
    TropCheck,
    SemigroupCheck,
    Counterexample,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum StrategyArg {
    Psi,
    Brute,
    Witness,
}

impl From<StrategyArg> for SupportStrategy {
    fn from(s: StrategyArg) -> SupportStrategy {
        match s {
            StrategyArg::Psi => SupportStrategy::PsiTest,
            StrategyArg::Brute => SupportStrategy::BruteForce,
            StrategyArg::Witness => SupportStrategy::Witness,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Options {
    pub order: Option<u32>,
    pub derivative_bound: u32,
    pub samples: usize,
    pub strategy: Option<StrategyArg>,
    pub budget: Option<u128>,
    pub seed: u64,
    pub recurrence_seeds: Option<(BigRational, BigRational)>,
}

impl Options {
    pub fn echo(&self) -> Value {
        json!({
            "order": self.order,
            "derivative_bound": self.derivative_bound,
            "samples": self.samples,
            "strategy": self.strategy.map(|s| format!("{s:?}").to_lowercase()),
            "budget": self.budget.map(|b| b.to_string()),
            "seed": self.seed,
            "recurrence_seeds": self.recurrence_seeds.as_ref().map(|(b, c)| vec![b.to_string(), c.to_string()]),
        })
    }
}

pub struct Outcome {
    pub results: Value,
    pub checks: CheckReport,
}

impl Outcome {
    fn plain(results: Value) -> Outcome {
        Outcome { results, checks: CheckReport::default() }
    }
}

fn core(at: &str) -> impl Fn(tropical_supports::Error) -> CliError + '_ {
    move |source| CliError::Core { at: at.to_string(), source }
}

fn positions(window: &GroundWindow, set: &SupportSet) -> Value {
    Value::from(set.iter().map(|i| window.position(i).to_string()).collect::<Vec<_>>())
}

fn sets(window: &GroundWindow, family: &[SupportSet]) -> Value {
    Value::from(family.iter().map(|s| positions(window, s)).collect::<Vec<_>>())
}

fn series(s: &MultiSeries) -> Value {
    let terms: Vec<Value> = s.terms().iter().map(|(e, c)| json!([e, c.to_string()])).collect();
    json!({
        "terms": terms,
        "precision": if s.precision() == EXACT { Value::from("exact") } else { Value::from(s.precision()) },
    })
}

fn boolean(s: &BooleanSeries) -> Value {
    json!({
        "members": s.members().iter().collect::<Vec<_>>(),
        "precision": if s.precision() == EXACT { Value::from("exact") } else { Value::from(s.precision()) },
    })
}

fn tropical(p: &TropDiffPolynomial) -> Value {
    let terms: Vec<Value> = p.terms().iter().map(|(c, m)| json!({ "coeff": boolean(c), "monomial": m.to_string() })).collect();
    json!({ "nvars": p.nvars(), "nfuncs": p.nfuncs(), "terms": terms })
}

fn require(inst: Option<&InstanceFile>) -> Result<&InstanceFile, CliError> {
    inst.ok_or_else(|| CliError::Malformed("this command needs an instance file".into()))
}

pub fn run(cmd: Command, inst: Option<&InstanceFile>, opts: &Options) -> Result<Outcome, CliError> {
    let exec = Exec::default();
    match cmd {
        Command::Circuits => {
            let fam = require(inst)?.family()?;
            Ok(Outcome::plain(json!({ "circuits": sets(fam.window(), &fam.circuits_with(exec)) })))
        }
        Command::Cocircuits => {
            let fam = require(inst)?.family()?;
            Ok(Outcome::plain(json!({ "cocircuits": sets(fam.window(), &fam.cocircuits_with(exec)) })))
        }
        Command::Independent => {
            let inst = require(inst)?;
            let fam = inst.family()?;
            let set = inst.subset(fam.window())?.ok_or_else(|| CliError::Malformed("subset: missing".into()))?;
            let independent = fam.is_independent(&set).map_err(core("subset"))?;
            Ok(Outcome::plain(json!({ "subset": positions(fam.window(), &set), "independent": independent })))
        }
        Command::ScrawlCheck => {
            let inst = require(inst)?;
            let fam = inst.family()?;
            let set = inst.subset(fam.window())?.unwrap_or_else(|| fam.window().full());
            let scrawl = fam.is_scrawl(&set).map_err(core("subset"))?;
            let closure = fam.scrawl_closure(&set).map_err(core("subset"))?;
            Ok(Outcome::plain(json!({
                "subset": positions(fam.window(), &set),
                "is_scrawl": scrawl,
                "largest_scrawl_inside": positions(fam.window(), &closure),
            })))
        }
        Command::Supports => supports(require(inst)?, opts, exec),
        Command::Axioms => {
            let fam = require(inst)?.family()?;
            axioms(&fam, exec)
        }
        Command::DualCheck => {
            let fam = require(inst)?.family()?;
            let checks = dual_check(&fam).map_err(core("generators"))?;
            Ok(Outcome { results: json!({ "cocircuits": sets(fam.window(), &fam.cocircuits_with(exec)) }), checks })
        }
        Command::OdeBasis => {
            let inst = require(inst)?;
            let alpha = inst.ode()?;
            let order = opts.order.unwrap_or(20);
            let basis = ode_solution_basis(&alpha, order).map_err(core("ode"))?;
            let p = inst.equation()?;
            let mut checks = CheckReport::default();
            for (k, y) in basis.iter().enumerate() {
                let through = y.precision() - p.order();
                let solved = p.is_solution(std::slice::from_ref(y), through).map_err(core("ode"))?;
                let verdict = if solved { Verdict::Pass } else { Verdict::Fail("nonzero residual".into()) };
                checks.push(&format!("y_{k} solves the equation through degree {through}"), verdict);
            }
            Ok(Outcome { results: json!({ "basis": basis.iter().map(series).collect::<Vec<_>>() }), checks })
        }
        Command::Tropicalize => {
            let system = require(inst)?.tropical_system()?;
            Ok(Outcome::plain(json!({ "tropical": system.iter().map(tropical).collect::<Vec<_>>() })))
        }
        Command::TropCheck => {
            let inst = require(inst)?;
            let system = inst.tropical_system()?;
            let candidates = inst.candidates(system[0].nvars())?;
            let mut rows = Vec::new();
            for (i, psi) in candidates.iter().enumerate() {
                let mut per_equation = Vec::new();
                for (k, p) in system.iter().enumerate() {
                    per_equation.push(is_trop_solution(p, psi).map_err(core(&format!("candidates[{i}] against equation {k}")))?);
                }
                rows.push(json!({ "candidate": i, "solves": per_equation }));
            }
            Ok(Outcome::plain(json!({ "results": rows })))
        }
        Command::SemigroupCheck => {
            let inst = require(inst)?;
            let system = inst.tropical_system()?;
            let candidates = inst.candidates(system[0].nvars())?;
            let checks = semigroup_check(&system, &candidates).map_err(core("candidates"))?;
            Ok(Outcome { results: json!({ "inputs": candidates.len() }), checks })
        }
        Command::Counterexample => counterexample(inst, opts),
    }
}

fn supports(inst: &InstanceFile, opts: &Options, exec: Exec) -> Result<Outcome, CliError> {
    let fam = inst.family()?;
    let budget = opts.budget.unwrap_or(DEFAULT_BUDGET);
    let strategy = opts.strategy.map(SupportStrategy::from).unwrap_or(SupportStrategy::BruteForce);
    match inst.subset(fam.window())? {
        Some(set) => {
            let is_support = fam.is_support_with_budget(&set, strategy, budget).map_err(core("subset"))?;
            Ok(Outcome::plain(json!({
                "subset": positions(fam.window(), &set),
                "strategy": format!("{strategy:?}"),
                "is_support": is_support,
            })))
        }
        None => {
            let all = match strategy {
                SupportStrategy::BruteForce => fam.supports_enumerate_with(budget, exec).map_err(core("generators"))?,
                SupportStrategy::PsiTest if fam.cardinality_condition() => {
                    let mut s = fam.psi_image();
                    s.push(SupportSet::empty());
                    s.sort();
                    s.dedup();
                    s
                }
                other => {
                    let why = format!("{other:?} cannot enumerate supports of this family");
                    return Err(CliError::Core { at: "strategy".into(), source: tropical_supports::Error::StrategyUnavailable(why) });
                }
            };
            Ok(Outcome::plain(json!({ "strategy": format!("{strategy:?}"), "supports": sets(fam.window(), &all) })))
        }
    }
}

fn axioms(fam: &GeneratorFamily, exec: Exec) -> Result<Outcome, CliError> {
    let n = fam.len();
    let circuits = fam.circuits_with(exec);
    let mut checks = CheckReport::default();
    for c in verify_circuit_axioms(n, &circuits).map_err(core("generators"))?.checks {
        checks.push(&format!("circuits: {}", c.name), c.verdict);
    }
    let mut results = json!({ "circuits": sets(fam.window(), &circuits), "cardinality_condition": fam.cardinality_condition() });
    if fam.cardinality_condition() {
        let mut image = fam.psi_image();
        image.push(SupportSet::empty());
        image.sort();
        image.dedup();
        for c in verify_scrawl_axioms(n, &image).map_err(core("generators"))?.checks {
            checks.push(&format!("supports: {}", c.name), c.verdict);
        }
        results["supports"] = sets(fam.window(), &image);
    }
    Ok(Outcome { results, checks })
}

fn counterexample(inst: Option<&InstanceFile>, opts: &Options) -> Result<Outcome, CliError> {
    if let Some(inst) = inst {
        if inst.field()? != tropical_supports::Field::Rationals {
            return Err(CliError::Core {
                at: "field".into(),
                source: tropical_supports::Error::PreconditionViolated("the construction lives over Q".into()),
            });
        }
    }
    let order = opts.order.unwrap_or(40);
    let ce = match &opts.recurrence_seeds {
        Some((b0, c0)) => CounterexampleInstance::from_seeded_recurrence(order, b0.clone(), c0.clone()),
        None => CounterexampleInstance::build(order),
    }
    .map_err(core("order"))?;
    let v = ce.full_verification(opts.derivative_bound, opts.samples, opts.seed).map_err(core("counterexample"))?;
    let show = |c: &[BigRational]| c.iter().map(ToString::to_string).collect::<Vec<_>>();
    let gaps: Vec<Value> = v
        .samples
        .iter()
        .map(|g| {
            let gap = match &g.gap {
                Gap::At(j) => json!(j),
                Gap::NoneInWindow { index } => json!(format!("beyond window (index {index})")),
                Gap::Unindexed => json!("unindexed"),
            };
            json!({ "lambda1": g.lambda1.to_string(), "lambda2": g.lambda2.to_string(), "gap": gap, "scanned": g.scanned })
        })
        .collect();
    let construction = if opts.recurrence_seeds.is_some() { "seeded recurrence" } else { "coefficient comparison" };
    Ok(Outcome {
        results: json!({
            "order": order,
            "construction": construction,
            "beta": show(ce.beta_coeffs()),
            "gamma": show(ce.gamma_coeffs()),
            "gap_table": gaps,
        }),
        checks: v.report,
    })
}
