//! The `check`, `verify` and `enumerate` subcommands.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use symvec::gen::{random_formula, random_net, transition_ids, NetShape};
use symvec::oracle::{ExplicitSpace, Mismatch, DEFAULT_BUDGET};
use symvec::{EvalOptions, Evaluator, Formula, PetriNet, SymbolicVectorSet, Vector};

use crate::config::Sidecar;
use crate::error::{CliError, Result};
use crate::pnml::read_pnml;
use crate::report::{ReportOptions, ReportStats, RunReport};

/// A uniform capacity: a natural or `inf`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Capacity(pub Option<u32>);

impl FromStr for Capacity {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim() {
            "inf" | "∞" => Ok(Capacity(None)),
            t => t.parse().map(|k| Capacity(Some(k))).map_err(|_| format!("expected a natural or `inf`, got `{s}`")),
        }
    }
}

#[derive(Clone, Debug, clap::Args)]
pub struct NetArgs {
    /// PNML file.
    #[arg(long)]
    pub net: PathBuf,
    /// Sidecar JSON with per-place capacities.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

impl NetArgs {
    pub fn load(&self) -> Result<PetriNet> {
        let mut net = read_pnml(&self.net)?;
        if let Some(c) = &self.config {
            Sidecar::read(c)?.apply(&mut net)?;
        }
        Ok(net)
    }
}

#[derive(Clone, Debug, clap::Args)]
pub struct EvalArgs {
    /// Uniform capacity for places without one, or `inf`.
    #[arg(long, default_value = "inf")]
    pub capacity: Capacity,
    #[arg(long)]
    pub no_saturation: bool,
    #[arg(long, default_value_t = 10_000)]
    pub max_iterations: usize,
}

impl Default for EvalArgs {
    fn default() -> Self {
        EvalArgs { capacity: Capacity(None), no_saturation: false, max_iterations: 10_000 }
    }
}

impl EvalArgs {
    pub fn options(&self) -> EvalOptions {
        EvalOptions {
            capacity: self.capacity.0,
            saturation: !self.no_saturation,
            max_iterations: self.max_iterations,
            ..EvalOptions::default()
        }
    }
}

#[derive(Clone, Debug, clap::Args)]
pub struct CheckArgs {
    #[command(flatten)]
    pub net: NetArgs,
    #[arg(long)]
    pub formula: String,
    #[command(flatten)]
    pub eval: EvalArgs,
    /// Marking to test, as `v1,v2,...`, or `m0` for the initial marking. Repeatable.
    #[arg(long)]
    pub contains: Vec<String>,
    /// Count satisfying markings within the capacities.
    #[arg(long)]
    pub count: bool,
    #[arg(long)]
    pub stats: bool,
    #[arg(long)]
    pub json: bool,
}

/// Reduces, desugars and evaluates `f` on `net`.
pub struct Evaluation {
    pub core: Formula,
    pub result: SymbolicVectorSet,
    pub stats: symvec::EvalStats,
    pub ms: f64,
    /// The net with the uniform capacity applied.
    pub net: PetriNet,
}

pub fn evaluate(net: &PetriNet, f: &Formula, opts: EvalOptions) -> Result<Evaluation> {
    let start = Instant::now();
    let core = f.reduce().desugar().reduce();
    let mut ev = Evaluator::new(net, opts)?;
    let result = ev.eval(&core)?;
    let ms = start.elapsed().as_secs_f64() * 1e3;
    let net = ev.net().clone();
    Ok(Evaluation { core, result, stats: ev.take_stats(), ms, net })
}

fn parse_marking(net: &PetriNet, s: &str) -> Result<Vector> {
    if s.trim() == "m0" {
        return Ok(net.initial().clone());
    }
    let v: Vector = s.parse().map_err(|_| CliError::Usage(format!("bad marking `{s}`")))?;
    if v.dim() != net.dim() {
        return Err(CliError::Usage(format!("marking `{s}` has {} components, the net has {} places", v.dim(), net.dim())));
    }
    Ok(v)
}

pub fn run_check(args: &CheckArgs) -> Result<RunReport> {
    let net = args.net.load()?;
    let f = Formula::parse(&args.formula)?;
    let markings = args.contains.iter().map(|s| parse_marking(&net, s)).collect::<Result<Vec<_>>>()?;
    let opts = args.eval.options();
    let ev = evaluate(&net, &f, opts.clone())?;
    let mut membership = BTreeMap::new();
    for m in &markings {
        membership.insert(m.to_string(), ev.result.contains(m)?);
    }
    let count = if args.count {
        let caps = ev.net.finite_capacities().map_err(|_| CliError::Usage("--count needs finite capacities".into()))?;
        Some(ev.result.count_within_caps(&caps)?.into())
    } else {
        None
    };
    Ok(RunReport {
        formula: f.to_string(),
        core: ev.core.to_string(),
        options: ReportOptions {
            capacity: opts.capacity,
            saturation: opts.saturation,
            max_iterations: opts.max_iterations,
        },
        places: net.places().to_vec(),
        dim: net.dim(),
        result: ev.result.members().cloned().collect(),
        stats: args.stats.then_some(ReportStats {
            iterations: ev.stats.iterations,
            peak: ev.stats.peak,
            final_count: ev.stats.final_count,
            ms: ev.ms,
        }),
        membership,
        count,
    })
}

#[derive(Clone, Debug, clap::Args)]
pub struct VerifyArgs {
    /// PNML file; random nets are generated when absent.
    #[arg(long)]
    pub net: Option<PathBuf>,
    #[arg(long, requires = "net")]
    pub config: Option<PathBuf>,
    /// Formula to check; random formulas are generated when absent.
    #[arg(long)]
    pub formula: Option<String>,
    /// Uniform capacity. Required with --net; random per case otherwise.
    #[arg(long)]
    pub capacity: Option<u32>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Number of generated cases.
    #[arg(long)]
    pub random: Option<usize>,
    #[arg(long)]
    pub no_saturation: bool,
    #[arg(long, default_value_t = 10_000)]
    pub max_iterations: usize,
}

#[derive(Clone, Debug)]
pub struct CaseFailure {
    pub case: usize,
    pub formula: String,
    pub capacity: u32,
    pub mismatch: Mismatch,
}

#[derive(Clone, Debug, Default)]
pub struct VerifyOutcome {
    pub cases: usize,
    pub failures: Vec<CaseFailure>,
}

/// Oracle comparison of one case; `tamper` lets tests corrupt the symbolic side.
pub fn verify_case(
    net: &PetriNet,
    f: &Formula,
    k: u32,
    opts: EvalOptions,
    tamper: &dyn Fn(SymbolicVectorSet) -> SymbolicVectorSet,
) -> Result<Option<Mismatch>> {
    let bounded = net.with_uniform_capacity(Some(k))?;
    let space = ExplicitSpace::build(&bounded, DEFAULT_BUDGET)?;
    let labels = space.eval(f)?;
    let ev = evaluate(net, f, EvalOptions { capacity: Some(k), ..opts })?;
    Ok(space.first_difference(&labels, &tamper(ev.result))?)
}

pub fn run_verify(args: &VerifyArgs) -> Result<VerifyOutcome> {
    let opts = EvalOptions {
        saturation: !args.no_saturation,
        max_iterations: args.max_iterations,
        ..EvalOptions::default()
    };
    let given = match &args.net {
        Some(path) => {
            let net = NetArgs { net: path.clone(), config: args.config.clone() }.load()?;
            let k = args.capacity.ok_or_else(|| CliError::Usage("--capacity is required with --net".into()))?;
            Some((net, k))
        }
        None => None,
    };
    if given.is_none() && args.random.is_none() {
        return Err(CliError::Usage("give --net or --random".into()));
    }
    if args.formula.is_none() && args.random.is_none() {
        return Err(CliError::Usage("give --formula or --random".into()));
    }
    let fixed = args.formula.as_deref().map(Formula::parse).transpose()?;
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let mut out = VerifyOutcome::default();
    for case in 0..args.random.unwrap_or(1) {
        let (net, k) = match &given {
            Some((net, k)) => (net.clone(), *k),
            None => {
                let net = random_net(&mut |n| rng.gen_range(0..n), NetShape::default())?;
                (net, args.capacity.unwrap_or_else(|| rng.gen_range(1..=3)))
            }
        };
        let f = match &fixed {
            Some(f) => f.clone(),
            None => random_formula(&mut |n| rng.gen_range(0..n), &transition_ids(&net), 3),
        };
        out.cases += 1;
        if let Some(mismatch) = verify_case(&net, &f, k, opts.clone(), &|s| s)? {
            out.failures.push(CaseFailure { case, formula: f.to_string(), capacity: k, mismatch });
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, clap::Args)]
pub struct EnumerateArgs {
    #[command(flatten)]
    pub net: NetArgs,
    #[arg(long)]
    pub formula: String,
    /// Uniform capacity for places without one.
    #[arg(long)]
    pub capacity: Option<u32>,
    #[arg(long)]
    pub no_saturation: bool,
    /// Refuse to list more markings than this.
    #[arg(long, default_value_t = 100_000)]
    pub limit: u64,
}

/// Satisfying markings within the capacities, in lexicographic order.
pub fn run_enumerate(args: &EnumerateArgs) -> Result<Vec<Vector>> {
    let net = args.net.load()?;
    let f = Formula::parse(&args.formula)?;
    let opts = EvalOptions { capacity: args.capacity, saturation: !args.no_saturation, ..EvalOptions::default() };
    let ev = evaluate(&net, &f, opts)?;
    let caps = ev.net.finite_capacities().map_err(|_| CliError::Usage("enumerate needs finite capacities".into()))?;
    let n = ev.result.count_within_caps(&caps)?;
    if n.as_f64() > args.limit as f64 {
        return Err(CliError::Usage(format!("{n} markings exceed --limit {}", args.limit)));
    }
    let bx = caps.iter().copied().max().unwrap_or(0);
    Ok(ev
        .result
        .enumerate_clipped(bx)
        .into_iter()
        .filter(|m| m.values().iter().zip(&caps).all(|(v, k)| v <= k))
        .collect())
}
