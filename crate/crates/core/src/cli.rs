//! Command-line front end: `query`, `verify`, `bench` and `fn`.
//!
//! Exit status is 0 on success, 1 when verification or a trade-off assertion fails and
//! 2 on usage or input errors. A query that exceeds its structure's step budget is an
//! internal bug; the process prints a diagnostic and aborts.

use std::ffi::OsString;
use std::fmt;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::hierarchy::{ackermann_a, ackermann_b, alpha, lambda};
use crate::io::{parse_array, parse_queries, parse_tree};
use crate::linear::{
    KStepStructure, LinearAlphaStructure, OneStepTable, RangeStructure, SimpleRangeTree, TwoStepStructure,
};
use crate::semigroup::{fold_interval, registry_lookup, Monoid, NamedSemigroup, SemigroupVisitor, Swapped};
use crate::tree::gen::{random_tree, TreeShape};
use crate::tree::{
    brute_path_fold, path_folds_from, LcaIndex, PathStructure, RootedTree, TreeKStep, TreeLinearAlpha, TreePreliminary,
};
use crate::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Inputs up to this size are verified on every query pair.
pub const EXHAUSTIVE_LIMIT: usize = 512;

#[derive(Parser, Debug)]
#[command(name = "semiprod", version, about = "Range and tree-path products with bounded query steps")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build a structure from a file and answer a query stream.
    Query(QueryArgs),
    /// Compare structures against brute-force folds on generated inputs.
    Verify(VerifyArgs),
    /// Measure space and steps on generated inputs and write CSV.
    Bench(BenchArgs),
    /// Evaluate the Ackermann-type hierarchy.
    #[command(name = "fn", subcommand)]
    Fn(FnCommand),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Array,
    Tree,
}

/// A structure selector such as `k:3` or `tree-alpha`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StructureKind {
    One,
    Two,
    K(usize),
    Alpha,
    Simple,
    TreeK(usize),
    TreeAlpha,
    TreePrelim,
}

impl StructureKind {
    pub fn kind(self) -> Kind {
        match self {
            Self::TreeK(_) | Self::TreeAlpha | Self::TreePrelim => Kind::Tree,
            _ => Kind::Array,
        }
    }

    pub fn k(self) -> Option<usize> {
        match self {
            Self::One => Some(1),
            Self::Two => Some(2),
            Self::K(k) | Self::TreeK(k) => Some(k),
            _ => None,
        }
    }

    pub fn defaults(kind: Kind) -> Vec<StructureKind> {
        match kind {
            Kind::Array => vec![Self::One, Self::Two, Self::K(3), Self::K(4), Self::K(5), Self::Alpha, Self::Simple],
            Kind::Tree => vec![Self::TreePrelim, Self::TreeK(2), Self::TreeK(3), Self::TreeK(4), Self::TreeAlpha],
        }
    }
}

impl FromStr for StructureKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let budget = |t: &str| -> Result<usize, String> {
            let k: usize = t.parse().map_err(|_| format!("bad step budget in `{s}`"))?;
            if k < 2 {
                return Err(format!("step budget must be at least 2 in `{s}`"));
            }
            Ok(k)
        };
        Ok(match s {
            "one" => Self::One,
            "two" => Self::Two,
            "alpha" => Self::Alpha,
            "simple" => Self::Simple,
            "tree-alpha" => Self::TreeAlpha,
            "tree-prelim" => Self::TreePrelim,
            _ => {
                if let Some(t) = s.strip_prefix("tree-k:") {
                    Self::TreeK(budget(t)?)
                } else if let Some(t) = s.strip_prefix("k:") {
                    Self::K(budget(t)?)
                } else {
                    return Err(format!("unknown structure `{s}`"));
                }
            }
        })
    }
}

impl fmt::Display for StructureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::One => write!(f, "one"),
            Self::Two => write!(f, "two"),
            Self::K(k) => write!(f, "k:{k}"),
            Self::Alpha => write!(f, "alpha"),
            Self::Simple => write!(f, "simple"),
            Self::TreeK(k) => write!(f, "tree-k:{k}"),
            Self::TreeAlpha => write!(f, "tree-alpha"),
            Self::TreePrelim => write!(f, "tree-prelim"),
        }
    }
}

/// Input sizes: comma-separated values, inclusive ranges `a..b` and powers `2^e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sizes(pub Vec<usize>);

impl FromStr for Sizes {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let one = |t: &str| -> Result<usize, String> {
            let t = t.trim();
            let v = match t.split_once('^') {
                Some((b, e)) => {
                    let b: usize = b.parse().map_err(|_| format!("bad size `{t}`"))?;
                    let e: u32 = e.parse().map_err(|_| format!("bad size `{t}`"))?;
                    b.checked_pow(e).ok_or_else(|| format!("size `{t}` overflows"))?
                }
                None => t.parse().map_err(|_| format!("bad size `{t}`"))?,
            };
            if v == 0 {
                return Err("sizes must be at least 1".into());
            }
            Ok(v)
        };
        let mut out = Vec::new();
        for part in s.split(',') {
            match part.split_once("..") {
                Some((a, b)) => {
                    let (a, b) = (one(a)?, one(b)?);
                    if a > b {
                        return Err(format!("empty range `{part}`"));
                    }
                    out.extend(a..=b);
                }
                None => out.push(one(part)?),
            }
        }
        Ok(Sizes(out))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Shape {
    Path,
    Star,
    Binary,
    Random,
}

impl Shape {
    fn tree_shape(self) -> TreeShape {
        match self {
            Self::Path => TreeShape::Path,
            Self::Star => TreeShape::Star,
            Self::Binary => TreeShape::CompleteBinary,
            Self::Random => TreeShape::RandomAttachment,
        }
    }

    fn index(self) -> u64 {
        self as u64
    }
}

#[derive(Args, Debug)]
pub struct QueryArgs {
    #[arg(long, value_enum, default_value_t = Kind::Array)]
    pub kind: Kind,
    #[arg(long)]
    pub structure: StructureKind,
    #[arg(long, default_value = "min-i64")]
    pub semigroup: String,
    /// Array or tree file.
    #[arg(long)]
    pub input: PathBuf,
    /// Query file; standard input when omitted.
    #[arg(long)]
    pub queries: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = Kind::Array)]
    pub kind: Kind,
    /// Structures to check; all of the kind when omitted.
    #[arg(long, value_delimiter = ',')]
    pub structure: Vec<StructureKind>,
    #[arg(long, value_delimiter = ',', default_value = "min-i64,mat2-mod251")]
    pub semigroup: Vec<String>,
    #[arg(long, default_value = "1..64")]
    pub n: Sizes,
    /// Tree shapes; all when omitted.
    #[arg(long, value_enum, value_delimiter = ',')]
    pub shape: Vec<Shape>,
    /// Random query pairs per input above the exhaustive limit.
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    #[arg(long, env = "RANGEPROD_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Build structures with reversed operand order (checks that verification notices).
    #[arg(long, hide = true)]
    pub swap_operands: bool,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    #[arg(long, value_enum, default_value_t = Kind::Array)]
    pub kind: Kind,
    #[arg(long, value_delimiter = ',')]
    pub structure: Vec<StructureKind>,
    #[arg(long, value_delimiter = ',', default_value = "min-i64")]
    pub semigroup: Vec<String>,
    #[arg(long, default_value = "2^16")]
    pub n: Sizes,
    #[arg(long, value_enum, default_value_t = Shape::Random)]
    pub shape: Shape,
    /// Random queries per structure.
    #[arg(long, default_value_t = 100_000)]
    pub queries: usize,
    /// CSV destination; `-` for standard output.
    #[arg(long, default_value = "-")]
    pub output: PathBuf,
    #[arg(long, env = "RANGEPROD_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Report 0 for build times so output is reproducible byte for byte.
    #[arg(long)]
    pub no_timing: bool,
    /// Require stored elements to fall and max steps to rise along two-step, k=4, alpha.
    #[arg(long)]
    pub assert_tradeoff: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Which {
    #[value(name = "A", alias = "a")]
    A,
    #[value(name = "B", alias = "b")]
    B,
}

#[derive(Subcommand, Debug)]
pub enum FnCommand {
    /// lambda(k, x)
    Lambda {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        x: u64,
    },
    /// alpha(x)
    Alpha {
        #[arg(long)]
        x: u64,
    },
    /// A(i, j) or B(i, j), capped at 2^62
    Ackermann {
        #[arg(long, value_enum)]
        which: Which,
        #[arg(long)]
        i: u64,
        #[arg(long)]
        j: u64,
    },
}

/// One benchmark measurement, written as one CSV row in field order.
#[derive(Clone, Debug, PartialEq)]
pub struct BenchRecord {
    pub structure: String,
    pub semigroup: String,
    pub n: usize,
    pub k: Option<usize>,
    pub build_millis: u128,
    pub stored_semigroup_elements: usize,
    pub index_overhead_bytes: usize,
    pub queries_run: usize,
    pub max_elements_used: usize,
    pub mean_elements_used: f64,
}

impl BenchRecord {
    pub const HEADER: [&'static str; 10] = [
        "structure",
        "semigroup",
        "n",
        "k",
        "build_millis",
        "stored_semigroup_elements",
        "index_overhead_bytes",
        "queries_run",
        "max_elements_used",
        "mean_elements_used",
    ];

    fn fields(&self) -> [String; 10] {
        [
            self.structure.clone(),
            self.semigroup.clone(),
            self.n.to_string(),
            self.k.map(|k| k.to_string()).unwrap_or_default(),
            self.build_millis.to_string(),
            self.stored_semigroup_elements.to_string(),
            self.index_overhead_bytes.to_string(),
            self.queries_run.to_string(),
            self.max_elements_used.to_string(),
            format!("{:.4}", self.mean_elements_used),
        ]
    }
}

/// A message for the user; exit status 2.
#[derive(Debug)]
struct Usage(String);

impl<E: fmt::Display> From<E> for Usage {
    fn from(e: E) -> Self {
        Usage(e.to_string())
    }
}

type CmdResult = Result<i32, Usage>;

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                return EXIT_USAGE;
            }
            let _ = write!(out, "{}", e.render());
            return EXIT_OK;
        }
    };
    let result = match cli.command {
        Command::Query(a) => cmd_query(&a, out),
        Command::Verify(a) => cmd_verify(&a, out),
        Command::Bench(a) => cmd_bench(&a, out, err),
        Command::Fn(f) => cmd_fn(&f, out),
    };
    match result {
        Ok(code) => code,
        Err(Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
    }
}

fn budget_violation(what: fmt::Arguments<'_>) -> ! {
    eprintln!("internal error: step budget exceeded: {what}");
    std::process::abort()
}

fn check_kinds(kind: Kind, structures: &[StructureKind]) -> Result<(), Usage> {
    for s in structures {
        if s.kind() != kind {
            let want = if s.kind() == Kind::Tree { "tree" } else { "array" };
            return Err(Usage(format!("structure `{s}` needs --kind {want}")));
        }
    }
    Ok(())
}

fn build_array<B>(kind: StructureKind, sg: B, values: Vec<B::Elem>) -> Result<Box<dyn RangeStructure<B>>, Error>
where
    B: Monoid + 'static,
    B::Elem: 'static,
{
    Ok(match kind {
        StructureKind::One => Box::new(OneStepTable::build(sg, values)?),
        StructureKind::Two => Box::new(TwoStepStructure::build(sg, values)?),
        StructureKind::K(k) => Box::new(KStepStructure::build(sg, values, k)?),
        StructureKind::Alpha => Box::new(LinearAlphaStructure::build(sg, values)?),
        StructureKind::Simple => Box::new(SimpleRangeTree::build(sg, values)?),
        other => unreachable!("{other} is a tree structure"),
    })
}

fn build_tree<B>(kind: StructureKind, sg: B, tree: RootedTree<B::Elem>) -> Result<Box<dyn PathStructure<B>>, Error>
where
    B: Monoid + 'static,
    B::Elem: 'static,
{
    Ok(match kind {
        StructureKind::TreeK(k) => Box::new(TreeKStep::build(sg, tree, k)?),
        StructureKind::TreeAlpha => Box::new(TreeLinearAlpha::build(sg, tree)),
        StructureKind::TreePrelim => Box::new(TreePreliminary::build(sg, tree)),
        other => unreachable!("{other} is an array structure"),
    })
}

fn read_file(path: &Path) -> Result<String, Usage> {
    std::fs::read_to_string(path).map_err(|e| Usage(format!("cannot read {}: {e}", path.display())))
}

fn at_line(line: usize, e: Error) -> Usage {
    Usage(format!("line {line}: {e}"))
}

// ---------------------------------------------------------------- query

struct QueryRun<'a> {
    args: &'a QueryArgs,
    input: String,
    queries: String,
    out: &'a mut dyn Write,
}

impl SemigroupVisitor for QueryRun<'_> {
    type Output = CmdResult;

    fn visit<S>(self, sg: S) -> CmdResult
    where
        S: NamedSemigroup + Send + Sync + 'static,
        S::Elem: Send + Sync + 'static,
    {
        let queries = parse_queries(&self.queries)?;
        let kind = self.args.structure;
        match self.args.kind {
            Kind::Array => {
                let values = parse_array(&sg, &self.input)?;
                let s = build_array(kind, sg.clone(), values)?;
                for (line, i, j) in queries {
                    let ans = s.query(i, j).map_err(|e| at_line(line, e))?;
                    if ans.elements_used > s.step_budget() {
                        budget_violation(format_args!("{kind} ({i}, {j}) used {}", ans.elements_used));
                    }
                    writeln!(self.out, "{} {}", sg.format(&ans.value), ans.elements_used)?;
                }
            }
            Kind::Tree => {
                let tree = parse_tree(&sg, &self.input)?;
                let s = build_tree(kind, sg.clone(), tree)?;
                for (line, u, v) in queries {
                    if u == 0 || v == 0 {
                        return Err(at_line(line, Error::InvalidVertex(0)));
                    }
                    let ans = s.query_path(u - 1, v - 1).map_err(|e| match e {
                        Error::InvalidVertex(x) => at_line(line, Error::InvalidVertex(x + 1)),
                        e => at_line(line, e),
                    })?;
                    if ans.elements_used > s.step_budget() {
                        budget_violation(format_args!("{kind} ({u}, {v}) used {}", ans.elements_used));
                    }
                    writeln!(self.out, "{} {}", sg.format(&ans.value), ans.elements_used)?;
                }
            }
        }
        Ok(EXIT_OK)
    }
}

fn cmd_query(args: &QueryArgs, out: &mut dyn Write) -> CmdResult {
    check_kinds(args.kind, &[args.structure])?;
    let sg = registry_lookup(&args.semigroup)?;
    let input = read_file(&args.input)?;
    let queries = match &args.queries {
        Some(p) => read_file(p)?,
        None => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s)?;
            s
        }
    };
    sg.dispatch(QueryRun { args, input, queries, out })
}

// ---------------------------------------------------------------- verify

/// Deterministic generator for one generated input.
fn case_rng(seed: u64, n: usize, salt: u64) -> ChaCha8Rng {
    let mix = seed ^ (n as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ salt.wrapping_mul(0xD1B5_4A32_D192_ED03);
    ChaCha8Rng::seed_from_u64(mix)
}

struct Mismatch(String);

fn check_array<S, B>(
    sg: &S,
    s: &dyn RangeStructure<B>,
    values: &[S::Elem],
    rng: &mut ChaCha8Rng,
    samples: usize,
) -> Result<usize, Mismatch>
where
    S: NamedSemigroup,
    B: Monoid<Elem = S::Elem>,
{
    let n = values.len();
    let budget = s.step_budget();
    let check = |i: usize, j: usize, expected: &S::Elem| -> Result<(), Mismatch> {
        let ans = s.query(i, j).expect("generated queries are valid");
        if ans.elements_used > budget {
            budget_violation(format_args!("n={n} ({i}, {j}) used {} > {budget}", ans.elements_used));
        }
        if ans.value != *expected {
            return Err(Mismatch(format!(
                "i={i} j={j}: expected {}, got {}",
                sg.format(expected),
                sg.format(&ans.value)
            )));
        }
        Ok(())
    };
    if n <= EXHAUSTIVE_LIMIT {
        for i in 1..=n {
            let mut acc = values[i - 1].clone();
            check(i, i, &acc)?;
            for j in i + 1..=n {
                acc = sg.combine(&acc, &values[j - 1]);
                check(i, j, &acc)?;
            }
        }
        Ok(n * (n + 1) / 2)
    } else {
        for _ in 0..samples {
            let (a, b) = (rng.gen_range(1..=n), rng.gen_range(1..=n));
            let (i, j) = (a.min(b), a.max(b));
            check(i, j, &fold_interval(sg, values, i, j).expect("valid"))?;
        }
        Ok(samples)
    }
}

fn check_tree<S, B>(sg: &S, s: &dyn PathStructure<B>, rng: &mut ChaCha8Rng, samples: usize) -> Result<usize, Mismatch>
where
    S: NamedSemigroup,
    B: Monoid<Elem = S::Elem>,
{
    let tree = s.tree();
    let n = tree.len();
    let lca = LcaIndex::build(tree);
    let check = |u: usize, v: usize, expected: &S::Elem| -> Result<(), Mismatch> {
        let ans = s.query_path(u, v).expect("generated queries are valid");
        let l = lca.lca(u, v);
        let budget = if l == u || l == v { s.ancestor_budget() } else { s.step_budget() };
        if ans.elements_used > budget {
            budget_violation(format_args!("n={n} ({}, {}) used {} > {budget}", u + 1, v + 1, ans.elements_used));
        }
        if ans.value != *expected {
            return Err(Mismatch(format!(
                "u={} v={}: expected {}, got {}",
                u + 1,
                v + 1,
                sg.format(expected),
                sg.format(&ans.value)
            )));
        }
        Ok(())
    };
    if n <= EXHAUSTIVE_LIMIT {
        for u in 0..n {
            let folds = path_folds_from(tree, sg, u).expect("valid vertex");
            for (v, f) in folds.iter().enumerate() {
                check(u, v, f)?;
            }
        }
        Ok(n * n)
    } else {
        for _ in 0..samples {
            let (u, v) = (rng.gen_range(0..n), rng.gen_range(0..n));
            check(u, v, &brute_path_fold(tree, sg, u, v).expect("valid"))?;
        }
        Ok(samples)
    }
}

struct VerifyRun<'a> {
    args: &'a VerifyArgs,
    structures: &'a [StructureKind],
    shapes: &'a [Shape],
    out: &'a mut dyn Write,
}

impl VerifyRun<'_> {
    /// One input: `Ok(queries)` or the mismatch description.
    fn case<S, B>(
        &self,
        sg: &S,
        build_sg: B,
        kind: StructureKind,
        n: usize,
        shape: Option<Shape>,
    ) -> Result<usize, Mismatch>
    where
        S: NamedSemigroup,
        B: Monoid<Elem = S::Elem> + 'static,
        S::Elem: 'static,
    {
        let salt = shape.map_or(0, |s| s.index() + 1);
        let mut rng = case_rng(self.args.seed, n, salt);
        match shape {
            None => {
                let values: Vec<S::Elem> = (0..n).map(|_| sg.sample(rng.gen())).collect();
                let s = build_array(kind, build_sg, values.clone()).expect("valid structure");
                check_array(sg, s.as_ref(), &values, &mut rng, self.args.samples)
            }
            Some(shape) => {
                let tree = random_tree(shape.tree_shape(), n, &mut rng, sg);
                let s = build_tree(kind, build_sg, tree).expect("valid structure");
                check_tree(sg, s.as_ref(), &mut rng, self.args.samples)
            }
        }
    }
}

impl SemigroupVisitor for VerifyRun<'_> {
    type Output = Result<usize, Usage>;

    /// Returns the number of failing configurations.
    fn visit<S>(self, sg: S) -> Result<usize, Usage>
    where
        S: NamedSemigroup + Send + Sync + 'static,
        S::Elem: Send + Sync + 'static,
    {
        let mut failures = 0;
        let shapes: Vec<Option<Shape>> = match self.args.kind {
            Kind::Array => vec![None],
            Kind::Tree => self.shapes.iter().copied().map(Some).collect(),
        };
        for &kind in self.structures {
            for &shape in &shapes {
                let mut queries = 0;
                let mut failed = None;
                for &n in &self.args.n.0 {
                    let result = if self.args.swap_operands {
                        self.case(&sg, Swapped(sg.clone()), kind, n, shape)
                    } else {
                        self.case(&sg, sg.clone(), kind, n, shape)
                    };
                    match result {
                        Ok(q) => queries += q,
                        Err(Mismatch(what)) => {
                            failed = Some((n, what));
                            break;
                        }
                    }
                }
                let shape_tag = shape.map(|s| format!(" shape={}", s.tree_shape().name())).unwrap_or_default();
                match failed {
                    None => writeln!(
                        self.out,
                        "PASS {kind} {}{shape_tag} sizes={} queries={queries}",
                        sg.name(),
                        self.args.n.0.len()
                    )?,
                    Some((n, what)) => {
                        failures += 1;
                        writeln!(self.out, "FAIL {kind} {}{shape_tag} n={n} seed={} {what}", sg.name(), self.args.seed)?
                    }
                }
            }
        }
        Ok(failures)
    }
}

fn cmd_verify(args: &VerifyArgs, out: &mut dyn Write) -> CmdResult {
    let structures =
        if args.structure.is_empty() { StructureKind::defaults(args.kind) } else { args.structure.clone() };
    check_kinds(args.kind, &structures)?;
    let shapes = if args.shape.is_empty() { Shape::value_variants().to_vec() } else { args.shape.clone() };
    let semigroups = args.semigroup.iter().map(|s| registry_lookup(s)).collect::<Result<Vec<_>, _>>()?;
    let mut failures = 0;
    for sg in semigroups {
        failures += sg.dispatch(VerifyRun { args, structures: &structures, shapes: &shapes, out: &mut *out })?;
    }
    if failures == 0 {
        writeln!(out, "verify: all configurations passed")?;
        Ok(EXIT_OK)
    } else {
        writeln!(out, "verify: {failures} configuration(s) failed")?;
        Ok(EXIT_FAILURE)
    }
}

// ---------------------------------------------------------------- bench

struct BenchRun<'a> {
    args: &'a BenchArgs,
    structures: &'a [StructureKind],
    rows: &'a mut Vec<BenchRecord>,
}

impl SemigroupVisitor for BenchRun<'_> {
    type Output = Result<(), Usage>;

    fn visit<S>(self, sg: S) -> Result<(), Usage>
    where
        S: NamedSemigroup + Send + Sync + 'static,
        S::Elem: Send + Sync + 'static,
    {
        let shape = self.args.shape;
        for &n in &self.args.n.0 {
            for &kind in self.structures {
                let mut rng = case_rng(self.args.seed, n, shape.index() + 1);
                let (millis, stored, overhead, budget, steps) = match kind.kind() {
                    Kind::Array => {
                        let values: Vec<S::Elem> = (0..n).map(|_| sg.sample(rng.gen())).collect();
                        let start = Instant::now();
                        let s = build_array(kind, sg.clone(), values)?;
                        let millis = start.elapsed().as_millis();
                        let steps: Vec<usize> = (0..self.args.queries)
                            .map(|_| {
                                let (a, b) = (rng.gen_range(1..=n), rng.gen_range(1..=n));
                                s.query(a.min(b), a.max(b)).expect("valid").elements_used
                            })
                            .collect();
                        (millis, s.stored_elements(), s.index_overhead_bytes(), s.step_budget(), steps)
                    }
                    Kind::Tree => {
                        let tree = random_tree(shape.tree_shape(), n, &mut rng, &sg);
                        let start = Instant::now();
                        let s = build_tree(kind, sg.clone(), tree)?;
                        let millis = start.elapsed().as_millis();
                        let steps: Vec<usize> = (0..self.args.queries)
                            .map(|_| {
                                let (u, v) = (rng.gen_range(0..n), rng.gen_range(0..n));
                                s.query_path(u, v).expect("valid").elements_used
                            })
                            .collect();
                        (millis, s.stored_elements(), s.index_overhead_bytes(), s.step_budget(), steps)
                    }
                };
                let max = steps.iter().copied().max().unwrap_or(0);
                if max > budget {
                    budget_violation(format_args!("{kind} n={n} used {max} > {budget}"));
                }
                let mean = if steps.is_empty() { 0.0 } else { steps.iter().sum::<usize>() as f64 / steps.len() as f64 };
                self.rows.push(BenchRecord {
                    structure: kind.to_string(),
                    semigroup: sg.name().to_string(),
                    n,
                    k: kind.k(),
                    build_millis: if self.args.no_timing { 0 } else { millis },
                    stored_semigroup_elements: stored,
                    index_overhead_bytes: overhead,
                    queries_run: steps.len(),
                    max_elements_used: max,
                    mean_elements_used: mean,
                });
            }
        }
        Ok(())
    }
}

/// Writes records as CSV with the fixed header.
pub fn write_csv(rows: &[BenchRecord], sink: &mut dyn Write) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(BenchRecord::HEADER)?;
    for r in rows {
        w.write_record(r.fields())?;
    }
    w.flush()?;
    Ok(())
}

/// For every `(semigroup, n)` holding the two-step (or `k:2`), `k:4` and `alpha` rows of
/// one kind: stored elements strictly fall and max steps strictly rise along that chain.
///
/// Returns one description per checked group, or the first violation.
pub fn check_tradeoff(rows: &[BenchRecord]) -> Result<Vec<String>, String> {
    let chains: [[&[&str]; 3]; 2] =
        [[&["two", "k:2"], &["k:4"], &["alpha"]], [&["tree-k:2"], &["tree-k:4"], &["tree-alpha"]]];
    let mut checked = Vec::new();
    let mut groups: Vec<(&str, usize)> = rows.iter().map(|r| (r.semigroup.as_str(), r.n)).collect();
    groups.dedup();
    groups.sort();
    groups.dedup();
    for (sg, n) in groups {
        for chain in &chains {
            let picked: Vec<&BenchRecord> = chain
                .iter()
                .filter_map(|names| {
                    rows.iter().find(|r| r.semigroup == sg && r.n == n && names.contains(&r.structure.as_str()))
                })
                .collect();
            if picked.len() != 3 {
                continue;
            }
            let desc = picked
                .iter()
                .map(|r| {
                    format!("{}(stored={}, max={})", r.structure, r.stored_semigroup_elements, r.max_elements_used)
                })
                .collect::<Vec<_>>()
                .join(" -> ");
            let ok = picked.windows(2).all(|w| {
                w[0].stored_semigroup_elements > w[1].stored_semigroup_elements
                    && w[0].max_elements_used < w[1].max_elements_used
            });
            if !ok {
                return Err(format!("{sg} n={n}: {desc}"));
            }
            checked.push(format!("{sg} n={n}: {desc}"));
        }
    }
    if checked.is_empty() {
        return Err("no (semigroup, n) group has the two, k:4 and alpha rows".into());
    }
    Ok(checked)
}

fn cmd_bench(args: &BenchArgs, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let structures = if args.structure.is_empty() {
        match args.kind {
            Kind::Array => vec![StructureKind::Two, StructureKind::K(3), StructureKind::K(4), StructureKind::Alpha],
            Kind::Tree => vec![
                StructureKind::TreeK(2),
                StructureKind::TreeK(3),
                StructureKind::TreeK(4),
                StructureKind::TreeAlpha,
            ],
        }
    } else {
        args.structure.clone()
    };
    check_kinds(args.kind, &structures)?;
    let semigroups = args.semigroup.iter().map(|s| registry_lookup(s)).collect::<Result<Vec<_>, _>>()?;
    let mut rows = Vec::new();
    for sg in semigroups {
        sg.dispatch(BenchRun { args, structures: &structures, rows: &mut rows })?;
    }
    if args.output.as_os_str() == "-" {
        write_csv(&rows, out)?;
    } else {
        let mut file = std::fs::File::create(&args.output)
            .map_err(|e| Usage(format!("cannot write {}: {e}", args.output.display())))?;
        write_csv(&rows, &mut file)?;
    }
    if args.assert_tradeoff {
        match check_tradeoff(&rows) {
            Ok(lines) => {
                for l in lines {
                    writeln!(err, "trade-off holds: {l}")?;
                }
            }
            Err(msg) => {
                writeln!(err, "trade-off violated: {msg}")?;
                return Ok(EXIT_FAILURE);
            }
        }
    }
    Ok(EXIT_OK)
}

// ---------------------------------------------------------------- fn

fn cmd_fn(f: &FnCommand, out: &mut dyn Write) -> CmdResult {
    match *f {
        FnCommand::Lambda { k, x } => writeln!(out, "{}", lambda(k, x)?)?,
        FnCommand::Alpha { x } => writeln!(out, "{}", alpha(x)?)?,
        FnCommand::Ackermann { which, i, j } => {
            let v = match which {
                Which::A => ackermann_a(i, j),
                Which::B => ackermann_b(i, j),
            };
            if v.is_saturated() {
                writeln!(out, ">={}", v.get())?;
            } else {
                writeln!(out, "{}", v.get())?;
            }
        }
    }
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn structure_names_round_trip() {
        for s in ["one", "two", "k:3", "alpha", "simple", "tree-k:2", "tree-alpha", "tree-prelim"] {
            assert_eq!(s.parse::<StructureKind>().unwrap().to_string(), s);
        }
        assert!("k:1".parse::<StructureKind>().is_err());
        assert!("k:x".parse::<StructureKind>().is_err());
        assert!("three".parse::<StructureKind>().is_err());
    }

    #[test]
    fn sizes() {
        assert_eq!("1..3,10,2^4".parse::<Sizes>().unwrap().0, vec![1, 2, 3, 10, 16]);
        assert!("0".parse::<Sizes>().is_err());
        assert!("5..2".parse::<Sizes>().is_err());
        assert!("2^99".parse::<Sizes>().is_err());
    }

    #[test]
    fn csv_header_follows_record_fields() {
        let row = BenchRecord {
            structure: "k:3".into(),
            semigroup: "min-i64".into(),
            n: 8,
            k: Some(3),
            build_millis: 0,
            stored_semigroup_elements: 20,
            index_overhead_bytes: 0,
            queries_run: 2,
            max_elements_used: 3,
            mean_elements_used: 2.5,
        };
        let mut buf = Vec::new();
        write_csv(&[row], &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "structure,semigroup,n,k,build_millis,stored_semigroup_elements,index_overhead_bytes,queries_run,max_elements_used,mean_elements_used\n\
             k:3,min-i64,8,3,0,20,0,2,3,2.5000\n"
        );
    }
}
