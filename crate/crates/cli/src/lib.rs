//! The `semigraph` command line.
//!
//! Every command loads an instance file, runs one operation of the core
//! crate and prints a report. Reports list `key: value` lines (text) or
//! tab-separated `key\tvalue` lines after a versioned header (machine), and
//! end with the command line that reproduces them.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use semigraph_core::algebra::{FormalWord, Letter};
use semigraph_core::approximant::{approximant, level_generators, CoreError};
use semigraph_core::conditions::{
    check_aperiodicity, check_cancelling, in_fullness_kernel, instance_algebra, is_full, make_full, quotient_by,
    ConditionReport, Verdict,
};
use semigraph_core::format::parse_instance;
use semigraph_core::scalar::format_scalar;
use semigraph_core::semigraph::DEFAULT_CAP;
use semigraph_core::{Algebra, ConditionError, Element, Instance, MultiDegree, ProjectionSet};

/// Header line of the machine format.
pub const MACHINE_HEADER: &str = "#semigraph-report v1";

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_UNKNOWN: i32 = 2;
pub const EXIT_INPUT: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Machine,
}

#[derive(Debug, Parser)]
#[command(
    name = "semigraph",
    version,
    about = "Symbolic workbench for higher-rank semigraph *-algebras"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Instance file (TOML).
    #[arg(long, global = true)]
    pub instance: Option<PathBuf>,
    /// Degree bound or level, one number per coordinate or a single number for all.
    #[arg(long, global = true)]
    pub bound: Option<String>,
    /// Search depth, in the same syntax as --bound.
    #[arg(long, global = true)]
    pub depth: Option<String>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Seed for sampled checks.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Element cap for saturation loops.
    #[arg(long, global = true)]
    pub cap: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the semigraph axioms and sample the inverse-semigroup law.
    Check,
    /// Minimal common extensions of two elements.
    Minext { x: String, y: String },
    /// Canonical form and fibers of an element literal.
    Normalize { literal: String },
    /// Block profile of a core approximant.
    Core {
        /// Also print atoms and matrix units.
        #[arg(long)]
        units: bool,
    },
    /// Aperiodicity search.
    Aperiodic,
    /// Search a cancelling projection for a word below a projection.
    Cancelling { word: String, projection: String },
    /// The full quotient, or membership of a projection in its kernel.
    Full { projection: Option<String> },
    /// Quotient by homogeneous relations.
    Quotient {
        #[arg(required = true)]
        relations: Vec<String>,
    },
    /// Fock matrix of an element and agreement of the two zero tests.
    Fock { literal: String },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Self::Check => "check",
            Self::Minext { .. } => "minext",
            Self::Normalize { .. } => "normalize",
            Self::Core { .. } => "core",
            Self::Aperiodic => "aperiodic",
            Self::Cancelling { .. } => "cancelling",
            Self::Full { .. } => "full",
            Self::Quotient { .. } => "quotient",
            Self::Fock { .. } => "fock",
        }
    }

    fn args(&self) -> Vec<String> {
        match self {
            Self::Check | Self::Aperiodic => Vec::new(),
            Self::Core { units } => units.then(|| "--units".to_string()).into_iter().collect(),
            Self::Minext { x, y } => vec![x.clone(), y.clone()],
            Self::Normalize { literal } | Self::Fock { literal } => vec![literal.clone()],
            Self::Cancelling { word, projection } => vec![word.clone(), projection.clone()],
            Self::Full { projection } => projection.iter().cloned().collect(),
            Self::Quotient { relations } => relations.clone(),
        }
    }
}

fn shell_quote(s: &str) -> String {
    let plain = !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || "_-./,=:@+".contains(c));
    if plain {
        s.to_string()
    } else {
        format!("'{}'", s.replace('\'', "'\\''"))
    }
}

impl Cli {
    /// The command line reproducing this run.
    pub fn replay(&self) -> String {
        let mut parts = vec!["semigraph".to_string(), self.command.name().to_string()];
        if let Some(p) = &self.instance {
            parts.push("--instance".into());
            parts.push(shell_quote(&p.display().to_string()));
        }
        if let Some(b) = &self.bound {
            parts.push("--bound".into());
            parts.push(shell_quote(b));
        }
        if let Some(d) = &self.depth {
            parts.push("--depth".into());
            parts.push(shell_quote(d));
        }
        if self.format == Format::Machine {
            parts.push("--format".into());
            parts.push("machine".into());
        }
        if let Some(s) = self.seed {
            parts.push("--seed".into());
            parts.push(s.to_string());
        }
        if let Some(c) = self.cap {
            parts.push("--cap".into());
            parts.push(c.to_string());
        }
        let args = self.command.args();
        if args.iter().any(|a| a.starts_with('-') && a != "--units") {
            parts.push("--".into());
        }
        parts.extend(
            args.iter()
                .map(|a| if a == "--units" { a.clone() } else { shell_quote(a) }),
        );
        parts.join(" ")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
    Unknown,
}

impl Outcome {
    pub fn code(self) -> i32 {
        match self {
            Self::Pass => EXIT_PASS,
            Self::Fail => EXIT_FAIL,
            Self::Unknown => EXIT_UNKNOWN,
        }
    }

    fn of(v: Verdict) -> Self {
        match v {
            Verdict::Holds => Self::Pass,
            Verdict::Fails => Self::Fail,
            Verdict::UnknownAtBound => Self::Unknown,
        }
    }
}

/// An ordered list of report fields.
#[derive(Debug, Default)]
pub struct Report {
    fields: Vec<(String, String)>,
}

impl Report {
    fn push(&mut self, key: &str, value: impl ToString) {
        self.fields.push((key.to_string(), value.to_string()));
    }

    pub fn fields(&self) -> &[(String, String)] {
        &self.fields
    }

    pub fn render(&self, format: Format) -> String {
        let mut out = String::new();
        if format == Format::Machine {
            out.push_str(MACHINE_HEADER);
            out.push('\n');
        }
        for (k, v) in &self.fields {
            let v = v.replace('\n', " ");
            match format {
                Format::Text => out.push_str(&format!("{k}: {v}\n")),
                Format::Machine => out.push_str(&format!("{k}\t{v}\n")),
            }
        }
        out
    }
}

/// Result of one invocation: exit code and the text for stdout and stderr.
#[derive(Debug)]
pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Run
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_PASS };
            return if e.use_stderr() {
                Run {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Run {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    execute(&cli)
}

pub fn execute(cli: &Cli) -> Run {
    let mut report = Report::default();
    report.push("command", cli.command.name());
    match dispatch(cli, &mut report) {
        Ok(outcome) => {
            report.push("replay", cli.replay());
            Run {
                code: outcome.code(),
                stdout: report.render(cli.format),
                stderr: String::new(),
            }
        }
        Err(e) => {
            let mut err = Report::default();
            err.push("command", cli.command.name());
            err.push("error", format!("{e:#}"));
            err.push("replay", cli.replay());
            Run {
                code: EXIT_INPUT,
                stdout: String::new(),
                stderr: err.render(cli.format),
            }
        }
    }
}

fn parse_degree(text: &str, rank: usize, what: &str) -> anyhow::Result<MultiDegree> {
    let parts: Vec<u32> = text
        .split(',')
        .map(|p| p.trim().parse::<u32>())
        .collect::<Result<_, _>>()
        .map_err(|_| anyhow!("--{what} expects non-negative integers separated by commas, got `{text}`"))?;
    match parts.len() {
        1 => Ok(MultiDegree::uniform(rank, parts[0])),
        n if n == rank => Ok(MultiDegree::from_slice(&parts)),
        n => bail!("--{what} has {n} entries but the instance has rank {rank}"),
    }
}

fn fmt_degree(inst: &Instance, d: &MultiDegree) -> String {
    d.to_vec(inst.rank())
        .iter()
        .map(u32::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

struct Context_ {
    inst: Arc<Instance>,
    alg: Algebra,
}

fn load(cli: &Cli, report: &mut Report) -> anyhow::Result<Context_> {
    let path = cli
        .instance
        .as_ref()
        .ok_or_else(|| anyhow!("--instance PATH is required"))?;
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("instance");
    let inst = Arc::new(parse_instance(&text, stem).with_context(|| format!("in {}", path.display()))?);
    if cli.cap == Some(0) {
        bail!("--cap must be positive");
    }
    let alg = instance_algebra(inst.clone()).context("building the instance algebra")?;
    report.push(
        "instance",
        format!(
            "{} (rank {}, {} vertices, {} edges{})",
            inst.name(),
            inst.rank(),
            inst.vertex_count(),
            inst.edges().count(),
            if alg.is_quotient() { ", quotient" } else { "" }
        ),
    );
    Ok(Context_ { inst, alg })
}

fn dispatch(cli: &Cli, report: &mut Report) -> anyhow::Result<Outcome> {
    let ctx = load(cli, report)?;
    let rank = ctx.inst.rank();
    let bound = |default: u32| -> anyhow::Result<MultiDegree> {
        match &cli.bound {
            Some(b) => parse_degree(b, rank, "bound"),
            None => Ok(MultiDegree::uniform(rank, default)),
        }
    };
    let depth = |default: u32| -> anyhow::Result<MultiDegree> {
        match &cli.depth {
            Some(d) => parse_degree(d, rank, "depth"),
            None => Ok(MultiDegree::uniform(rank, default)),
        }
    };
    let cap = cli.cap.unwrap_or(DEFAULT_CAP);
    match &cli.command {
        Command::Check => cmd_check(&ctx, bound(3)?, cli.seed.unwrap_or(0), report),
        Command::Minext { x, y } => cmd_minext(&ctx, x, y, report),
        Command::Normalize { literal } => cmd_normalize(&ctx, literal, report),
        Command::Core { units } => cmd_core(&ctx, bound(1)?, cap, *units, report),
        Command::Aperiodic => {
            let b = bound(3)?;
            report.push("bound", fmt_degree(&ctx.inst, &b));
            Ok(condition(&ctx.inst, check_aperiodicity(&ctx.inst, &b), report))
        }
        Command::Cancelling { word, projection } => {
            let w = ctx.alg.parse(word)?;
            let p = ctx.alg.parse(projection)?;
            report.push("word", ctx.alg.format(&w));
            report.push("projection", ctx.alg.format(&p));
            match check_cancelling(&ctx.alg, &w, &p, &depth(3)?) {
                Ok(r) => Ok(condition(&ctx.inst, r, report)),
                Err(e) => rejected(e, report),
            }
        }
        Command::Full { projection } => cmd_full(&ctx, projection.as_deref(), depth(3)?, report),
        Command::Quotient { relations } => cmd_quotient(&ctx, relations, report),
        Command::Fock { literal } => cmd_fock(&ctx, literal, cli.depth.as_deref(), report),
    }
}

/// Condition errors that describe the input rather than the file are reported as failures.
fn rejected(e: ConditionError, report: &mut Report) -> anyhow::Result<Outcome> {
    match e {
        ConditionError::Algebra(_) | ConditionError::UnsupportedRank | ConditionError::NonGraphEdge(_) => Err(e.into()),
        other => {
            report.push("verdict", "rejected");
            report.push("reason", other);
            Ok(Outcome::Fail)
        }
    }
}

fn condition(inst: &Instance, r: ConditionReport, report: &mut Report) -> Outcome {
    report.push("verdict", r.verdict);
    report.push("search-bound", &r.bound);
    report.push("witnesses", r.witnesses.len());
    for w in &r.witnesses {
        report.push("witness", w.describe(inst));
    }
    Outcome::of(r.verdict)
}

fn random_word(rng: &mut ChaCha8Rng, inst: &Instance) -> FormalWord {
    let edges: Vec<_> = inst.edges().collect();
    let verts: Vec<_> = inst.vertices().collect();
    let len = rng.gen_range(1..=6);
    let letters = (0..len)
        .map(|_| {
            if edges.is_empty() || rng.gen_bool(0.15) {
                let k = rng.gen_range(1..=verts.len());
                let set: BTreeSet<_> = verts.choose_multiple(rng, k).copied().collect();
                Letter::Projection(ProjectionSet::Set(set))
            } else {
                Letter::Edge {
                    edge: *edges.choose(rng).expect("nonempty"),
                    star: rng.gen_bool(0.5),
                }
            }
        })
        .collect();
    FormalWord::new(letters)
}

const SAMPLES: usize = 200;

fn cmd_check(ctx: &Context_, bound: MultiDegree, seed: u64, report: &mut Report) -> anyhow::Result<Outcome> {
    let axioms = ctx.inst.check_axioms(&bound);
    report.push(
        "bound",
        if axioms.exact {
            "exact".to_string()
        } else {
            fmt_degree(&ctx.inst, &axioms.bound)
        },
    );
    report.push("elements", axioms.elements);
    report.push("axiom-violations", axioms.violations.len());
    for v in &axioms.violations {
        report.push("violation", v);
    }
    // w w* w = w on sampled formal words, in the universal algebra
    let alg = Algebra::new(ctx.inst.clone());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = 0;
    for _ in 0..SAMPLES {
        let w = random_word(&mut rng, &ctx.inst);
        let x = alg.word_to_standard(&w);
        let back = alg.multiply(&alg.multiply(&x, &alg.adjoint(&x)?)?, &x)?;
        if back != x {
            failures += 1;
            report.push("inverse-law-failure", w.display(&ctx.inst));
        }
    }
    report.push("seed", seed);
    report.push("inverse-law-samples", SAMPLES);
    report.push("inverse-law-failures", failures);
    let pass = axioms.passed() && failures == 0;
    report.push("verdict", if pass { "pass" } else { "fail" });
    Ok(if pass { Outcome::Pass } else { Outcome::Fail })
}

fn element(inst: &Instance, text: &str) -> anyhow::Result<Element> {
    let t = text.trim();
    if t == "1" {
        return Ok(Element::unit());
    }
    inst.parse_element(t)
        .ok_or_else(|| anyhow!("`{text}` is not an element of the semigraph"))
}

fn cmd_minext(ctx: &Context_, x: &str, y: &str, report: &mut Report) -> anyhow::Result<Outcome> {
    let inst = &ctx.inst;
    let (ex, ey) = (element(inst, x)?, element(inst, y)?);
    report.push("x", inst.format_element(&ex));
    report.push("y", inst.format_element(&ey));
    let pairs = inst.min_common_extensions(&ex, &ey);
    report.push("count", pairs.len());
    for (a, b) in pairs.iter() {
        let z = inst.compose(&ex, a).expect("extension is defined");
        report.push(
            "extension",
            format!(
                "alpha={} beta={} common={}",
                inst.format_element(a),
                inst.format_element(b),
                inst.format_element(&z)
            ),
        );
    }
    Ok(Outcome::Pass)
}

fn cmd_normalize(ctx: &Context_, literal: &str, report: &mut Report) -> anyhow::Result<Outcome> {
    let a = ctx.alg.parse(literal)?;
    report.push("input", literal);
    report.push("normal-form", ctx.alg.format(&a));
    report.push("terms", a.len());
    match a.homogeneous_degree() {
        Some(d) => report.push("degree", d),
        None if a.is_zero() => report.push("degree", "none (zero)"),
        None => report.push("degree", "mixed"),
    }
    for (d, part) in ctx.alg.fibers(&a) {
        report.push("fiber", format!("{d} {}", ctx.alg.format(&part)));
    }
    Ok(Outcome::Pass)
}

fn cmd_core(
    ctx: &Context_,
    level: MultiDegree,
    cap: usize,
    units: bool,
    report: &mut Report,
) -> anyhow::Result<Outcome> {
    let inst = &ctx.inst;
    report.push("level", fmt_degree(inst, &level));
    let d = level_generators(inst, &level);
    match approximant(&ctx.alg, &d, cap) {
        Ok(core) => {
            report.push("generators", core.h.len());
            report.push("spanning-set", core.g.len());
            report.push("atoms", core.atoms.len());
            report.push(
                "profile",
                format!(
                    "[{}]",
                    core.profile()
                        .iter()
                        .map(usize::to_string)
                        .collect::<Vec<_>>()
                        .join(", ")
                ),
            );
            report.push("dimension", core.profile().iter().map(|b| b * b).sum::<usize>());
            if units {
                for (i, atom) in core.atoms.iter().enumerate() {
                    let pieces: Vec<String> = atom.pieces.iter().map(|p| p.display(inst)).collect();
                    report.push(
                        "atom",
                        format!("p{i} = {} = {}", ctx.alg.format(&atom.projection), pieces.join(" + ")),
                    );
                }
                for (b, block) in core.blocks.iter().enumerate() {
                    report.push(
                        "block",
                        format!(
                            "{b}: {}",
                            block.iter().map(|x| format!("p{x}")).collect::<Vec<_>>().join(" ")
                        ),
                    );
                }
                for ((x, y), e) in &core.units {
                    report.push("unit", format!("e({x},{y}) = {}", ctx.alg.format(e)));
                }
            }
            report.push("verdict", "pass");
            Ok(Outcome::Pass)
        }
        Err(CoreError::Hypotheses(vs)) => {
            report.push("violations", vs.len());
            for v in &vs {
                report.push("violation", v);
            }
            report.push("verdict", "fail");
            Ok(Outcome::Fail)
        }
        Err(e) => Err(e.into()),
    }
}

fn cmd_full(
    ctx: &Context_,
    projection: Option<&str>,
    depth: MultiDegree,
    report: &mut Report,
) -> anyhow::Result<Outcome> {
    let inst = &ctx.inst;
    if let Some(text) = projection {
        let p = ctx.alg.parse(text)?;
        report.push("projection", ctx.alg.format(&p));
        report.push("question", "is the projection killed in the full quotient");
        return match in_fullness_kernel(&ctx.alg, &p, &depth) {
            Ok(r) => Ok(condition(inst, r, report)),
            Err(e) => rejected(e, report),
        };
    }
    let full = make_full(&ctx.alg)?;
    let rules = full.quotient_rules().expect("make_full builds a quotient");
    let names =
        |s: &semigraph_core::semigraph::VertexSet| s.iter().map(|v| inst.vertex_name(*v)).collect::<Vec<_>>().join(" ");
    report.push("dead", names(rules.dead()));
    report.push("expandable", names(rules.expandable()));
    let already = is_full(&ctx.alg)?;
    report.push("already-full", if already { "yes" } else { "no" });
    report.push("idempotent", if is_full(&full)? { "yes" } else { "no" });
    for v in inst.vertices() {
        let pv = ctx.alg.projection(&ProjectionSet::Set([v].into()));
        report.push(
            "vertex",
            format!("p{{{}}} -> {}", inst.vertex_name(v), full.format(&full.transfer(&pv))),
        );
    }
    Ok(Outcome::Pass)
}

fn cmd_quotient(ctx: &Context_, relations: &[String], report: &mut Report) -> anyhow::Result<Outcome> {
    let inst = &ctx.inst;
    let rels = relations
        .iter()
        .map(|r| ctx.alg.parse(r))
        .collect::<Result<Vec<_>, _>>()?;
    for r in &rels {
        report.push("relation", ctx.alg.format(r));
    }
    let q = match quotient_by(&ctx.alg, &rels) {
        Ok(q) => q,
        Err(e) => return rejected(e, report),
    };
    let names =
        |s: &semigraph_core::semigraph::VertexSet| s.iter().map(|v| inst.vertex_name(*v)).collect::<Vec<_>>().join(" ");
    match q.quotient_rules() {
        Some(rules) => {
            report.push("dead", names(rules.dead()));
            report.push("expandable", names(rules.expandable()));
        }
        None => report.push("dead", ""),
    }
    if inst.rank() == 1 {
        report.push("full", if is_full(&q)? { "yes" } else { "no" });
    }
    for e in inst.edges() {
        let x = inst.letter(e).expect("edge letter");
        report.push(
            "range",
            format!("{} -> {}", inst.edge_name(e), q.format(&q.range_of(&x))),
        );
    }
    report.push("verdict", "accepted");
    Ok(Outcome::Pass)
}

fn cmd_fock(ctx: &Context_, literal: &str, depth: Option<&str>, report: &mut Report) -> anyhow::Result<Outcome> {
    let inst = &ctx.inst;
    let alg = Algebra::new(inst.clone());
    if ctx.alg.is_quotient() {
        bail!("the Fock oracle models only the universal algebra; this instance is a quotient");
    }
    let a = alg.parse(literal)?;
    let depth = match depth {
        Some(d) => parse_degree(d, inst.rank(), "depth")?,
        None => {
            let mut js = MultiDegree::zero();
            let mut jt = MultiDegree::zero();
            for (w, _) in a.terms() {
                js = js.join(w.s.degree());
                jt = jt.join(w.t.degree());
            }
            &js + &jt
        }
    };
    let (space, m) = alg.fock_matrix(&a, &depth)?;
    report.push("element", alg.format(&a));
    report.push("depth", fmt_degree(inst, &depth));
    report.push("dimension", space.dim());
    let state = |i: usize| {
        let (mu, x) = space.state(i);
        format!("{}|{}", inst.format_element(mu), inst.vertex_name(*x))
    };
    for ((r, c), v) in m.entries() {
        report.push(
            "entry",
            format!("{} <- {} : {}", state(*r), state(*c), format_scalar(v)),
        );
    }
    let algebraic = a.is_zero();
    let oracle = alg.fock_is_zero(&a)?;
    report.push("algebra-zero", if algebraic { "yes" } else { "no" });
    report.push("oracle-zero", if oracle { "yes" } else { "no" });
    let agree = algebraic == oracle;
    report.push("agree", if agree { "yes" } else { "no" });
    Ok(if agree { Outcome::Pass } else { Outcome::Fail })
}
