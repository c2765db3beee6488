//! Command-line front end for the `nfold` crate.

pub mod recipes;

use std::collections::BTreeMap;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use nfold::coherence::{hom_exists, one_step_rewrites, reachability_witness, witness_json};
use nfold::cubes::{self, Configuration, Mode};
use nfold::enumeration::{build_poset, enumerate, shape_counts, shape_sequence};
use nfold::graph_operads::{gamma_member, gamma_simplices, k_enumerate, k_leq, k_poset, GammaSimplex};
use nfold::milgram::{downset, q_chain, q_from_chain, q_map, OrderedPartition};
use nfold::topology::{gamma_chain_complex, homology, order_complex};
use nfold::{Expr, Op, PairTable, Poset};

/// Largest `n` accepted anywhere.
const MAX_N: u64 = 16;
/// Largest object count materialized by `enumerate`.
const MAX_OBJECTS: u64 = 2_000_000;
/// Largest poset for which comparabilities are computed.
const MAX_POSET: u64 = 20_000;
/// Largest poset whose order complex is built.
const MAX_ORDER_COMPLEX: u64 = 600;
/// Largest dimension `(n-1) C(k,2)` of a Smith filtration stage.
const MAX_GAMMA_DIM: u64 = 6;

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{msg}")]
    Usage { msg: String },
    #[error(transparent)]
    Domain(#[from] nfold::Error),
    #[error("{0}")]
    Failed(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

type CliResult<T = ()> = Result<T, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage { msg: msg.into() }
}

#[derive(Parser, Debug)]
#[command(name = "nfold", version, about = "Coherence, enumeration and topology of n-fold monoidal categories")]
struct Cli {
    /// Seed for every randomized command.
    #[arg(long, global = true, default_value_t = 20240101)]
    seed: u64,
    /// Worker threads (0 = all cores).
    #[arg(long, global = true, env = "MOL_JOBS")]
    jobs: Option<usize>,
    /// Write output here instead of stdout.
    #[arg(short, long, global = true)]
    output: Option<std::path::PathBuf>,
    /// Run every worked example and exit.
    #[arg(long)]
    verify_paper: bool,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the objects of M_n(k).
    Enumerate(EnumerateArgs),
    /// CSV of a^n_k, k! a^n_k and successive ratios.
    Counts(CountsArgs),
    /// Is there a morphism A -> B?
    Hom(HomArgs),
    /// A chain of elementary rewrites from A to B, as JSON.
    Witness(WitnessArgs),
    /// DOT diagram of M_n(k).
    Hasse(HasseArgs),
    /// Homology of a nerve or a Smith filtration stage, as JSON.
    Homology(HomologyArgs),
    /// Objects below X.
    Downset(DownsetArgs),
    /// The map from cells of a product of permutohedra to M_n(k).
    Qmap(QmapArgs),
    /// Simplices of the Smith filtration stage Gamma^(n)(k).
    Gamma(GammaArgs),
    /// The complete graph operad K^(n)(k).
    Kgraph(KgraphArgs),
    /// Little cubes configurations.
    Cubes {
        #[command(subcommand)]
        command: CubesCommand,
    },
    /// Same as the matching subcommand, meant for writing files with -o.
    Export {
        #[command(subcommand)]
        kind: ExportKind,
    },
    /// Run every worked example; nonzero exit on any mismatch.
    VerifyPaper,
}

#[derive(Subcommand, Debug)]
enum ExportKind {
    Hasse(HasseArgs),
    Homology(HomologyArgs),
    Gamma(GammaArgs),
    Qmap(QmapArgs),
    Counts(CountsArgs),
    Cubes(RealizeArgs),
}

#[derive(Args, Debug)]
struct EnumerateArgs {
    #[arg(long)]
    n: u64,
    #[arg(long)]
    k: usize,
    /// Only level-ordered objects.
    #[arg(long)]
    milgram: bool,
    /// Print one shape per relabeling class (leaves read 1..k).
    #[arg(long)]
    shapes: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct CountsArgs {
    #[arg(long)]
    n: u64,
    #[arg(long, default_value_t = 8)]
    kmax: usize,
    /// Also enumerate explicitly up to this k and compare.
    #[arg(long, default_value_t = 0)]
    check_upto: usize,
}

#[derive(Args, Debug)]
struct HomArgs {
    #[arg(long)]
    n: u64,
    a: String,
    b: String,
}

#[derive(Args, Debug)]
struct WitnessArgs {
    #[arg(long)]
    n: u64,
    a: String,
    b: String,
    #[arg(long)]
    max_depth: Option<usize>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum EdgeKind {
    /// One arrow per elementary rewrite.
    Generators,
    /// The transitive reduction.
    Covers,
    /// Every strict comparability.
    Order,
}

#[derive(Args, Debug)]
struct HasseArgs {
    #[arg(long)]
    n: u64,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    milgram: bool,
    #[arg(long, value_enum, default_value_t = EdgeKind::Generators)]
    edges: EdgeKind,
    /// Label generator arrows with their rewrite names.
    #[arg(long)]
    names: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ComplexKind {
    /// Nerve of M_n(k).
    Order,
    /// Nerve of the level-ordered part.
    Milgram,
    /// Nerve of K^(n)(k).
    Kgraph,
    /// Normalized chains of Gamma^(n)(k).
    Gamma,
}

#[derive(Args, Debug)]
struct HomologyArgs {
    #[arg(long)]
    n: u64,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, value_enum, default_value_t = ComplexKind::Order)]
    complex: ComplexKind,
    /// Nerve of the downset of this object instead.
    #[arg(long)]
    downset: Option<String>,
    /// Downset taken in all of M_n rather than the level-ordered part.
    #[arg(long)]
    full: bool,
}

#[derive(Args, Debug)]
struct DownsetArgs {
    #[arg(long)]
    n: u64,
    x: String,
    /// Use all of M_n rather than the level-ordered part.
    #[arg(long)]
    full: bool,
    /// Print ordered partitions (only for two-level objects).
    #[arg(long)]
    partitions: bool,
}

#[derive(Args, Debug)]
struct QmapArgs {
    #[arg(long)]
    n: u64,
    #[arg(long)]
    k: Option<usize>,
    /// A_1 .. A_{n-1}, or B_1 .. B_{n-1} with --from-chain.
    #[arg(long, num_args = 1.., required = true)]
    cells: Vec<String>,
    /// Print the intermediate chain B_1 .. B_{n-1} too.
    #[arg(long)]
    chain: bool,
    /// The cells already form the chain.
    #[arg(long)]
    from_chain: bool,
}

#[derive(Args, Debug)]
struct GammaArgs {
    #[arg(long)]
    n: u64,
    #[arg(long)]
    k: usize,
    /// Test one simplex, given as JSON.
    #[arg(long)]
    member: Option<String>,
    /// Print counts per dimension only.
    #[arg(long)]
    count: bool,
    /// Print the homology report.
    #[arg(long)]
    homology: bool,
}

#[derive(Args, Debug)]
struct KgraphArgs {
    #[arg(long)]
    n: u64,
    #[arg(long)]
    k: usize,
    /// Compare two tables (JSON or expressions).
    #[arg(long, num_args = 2, value_names = ["X", "Y"])]
    leq: Option<Vec<String>>,
    /// Print the number of tables and how many come from expressions.
    #[arg(long)]
    count: bool,
}

#[derive(Subcommand, Debug)]
enum CubesCommand {
    /// Membership of a configuration in G(A) and F(A).
    Check {
        #[arg(long)]
        config: String,
        #[arg(long)]
        expr: String,
    },
    /// Decomposability, plain and level-by-level.
    Decompose {
        #[arg(long)]
        config: String,
    },
    /// Shrink boxes about their barycenters.
    Shrink {
        #[arg(long, conflicts_with = "random")]
        config: Option<String>,
        /// Shrink a seeded random configuration with this many boxes.
        #[arg(long)]
        random: Option<usize>,
        #[arg(long, default_value_t = 2)]
        n: u64,
    },
    /// Insert inner configurations into the boxes of an outer one.
    Compose {
        #[arg(long)]
        outer: String,
        #[arg(long = "inner", num_args = 1.., required = true)]
        inners: Vec<String>,
    },
    /// A configuration in F(A).
    Realize(RealizeArgs),
}

#[derive(Args, Debug)]
struct RealizeArgs {
    #[arg(long)]
    n: u64,
    a: String,
    #[arg(long)]
    svg: bool,
}

/// Replace every `@path` argument by the trimmed contents of the file.
fn expand_at(args: Vec<String>) -> CliResult<Vec<String>> {
    args.into_iter()
        .enumerate()
        .map(|(i, a)| match a.strip_prefix('@') {
            Some(path) if i > 0 && !path.is_empty() => std::fs::read_to_string(path)
                .map(|s| s.trim_end().to_string())
                .map_err(|e| usage(format!("cannot read {path}: {e}"))),
            _ => Ok(a),
        })
        .collect()
}

/// Entry point shared by the binary and the tests. Returns the exit code.
pub fn run(args: impl IntoIterator<Item = String>, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let args = match expand_at(args.into_iter().collect()) {
        Ok(a) => a,
        Err(e) => return report(e, err),
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.jobs.unwrap_or(0)).build() {
        Ok(p) => p,
        Err(e) => return report(usage(format!("cannot start {:?} workers: {e}", cli.jobs)), err),
    };
    let mut buf = Vec::new();
    let result = pool.install(|| dispatch(&cli, &mut buf));
    let written = match &cli.output {
        Some(path) if result.is_ok() => std::fs::write(path, &buf).map_err(CliError::from),
        _ => out.write_all(&buf).map_err(CliError::from),
    };
    match result.and(written) {
        Ok(()) => 0,
        Err(e) => report(e, err),
    }
}

fn report(e: CliError, err: &mut dyn Write) -> i32 {
    let _ = writeln!(err, "error: {e}");
    match e {
        CliError::Usage { .. } => 2,
        _ => 1,
    }
}

fn dispatch(cli: &Cli, out: &mut Vec<u8>) -> CliResult {
    if cli.verify_paper {
        return verify_paper(out);
    }
    let Some(cmd) = &cli.command else {
        return Err(usage("no subcommand given (try --help)"));
    };
    match cmd {
        Command::Enumerate(a) => cmd_enumerate(a, out),
        Command::Counts(a) => cmd_counts(a, out),
        Command::Hom(a) => cmd_hom(a, out),
        Command::Witness(a) => cmd_witness(a, out),
        Command::Hasse(a) => cmd_hasse(a, out),
        Command::Homology(a) => cmd_homology(a, out),
        Command::Downset(a) => cmd_downset(a, out),
        Command::Qmap(a) => cmd_qmap(a, out),
        Command::Gamma(a) => cmd_gamma(a, out),
        Command::Kgraph(a) => cmd_kgraph(a, out),
        Command::Cubes { command } => cmd_cubes(command, cli.seed, out),
        Command::Export { kind } => match kind {
            ExportKind::Hasse(a) => cmd_hasse(a, out),
            ExportKind::Homology(a) => cmd_homology(a, out),
            ExportKind::Gamma(a) => cmd_gamma(a, out),
            ExportKind::Qmap(a) => cmd_qmap(a, out),
            ExportKind::Counts(a) => cmd_counts(a, out),
            ExportKind::Cubes(a) => cmd_realize(a, out),
        },
        Command::VerifyPaper => verify_paper(out),
    }
}

fn check_n(n: u64) -> CliResult<Op> {
    if n == 0 || n > MAX_N {
        return Err(usage(format!("--n must lie in 1..={MAX_N}, got {n}")));
    }
    Ok(n as Op)
}

fn factorial(k: usize) -> BigUint {
    (1..=k as u64).product()
}

/// `k! a^n_k`, the size of M_n(k).
fn object_count(n: Op, k: usize) -> BigUint {
    factorial(k) * &shape_sequence(n, k)[k]
}

fn bound(what: &str, size: BigUint, limit: u64) -> CliResult {
    if size > BigUint::from(limit) {
        return Err(usage(format!("{what} has {size} elements; refusing anything above {limit}")));
    }
    Ok(())
}

fn parse_expr(text: &str, n: Op) -> CliResult<Expr> {
    Ok(Expr::parse_object(text, n)?)
}

fn cmd_enumerate(a: &EnumerateArgs, out: &mut Vec<u8>) -> CliResult {
    let n = check_n(a.n)?;
    bound(&format!("M_{n}({})", a.k), object_count(n, a.k), MAX_OBJECTS)?;
    let mut objs = enumerate(n, a.k, a.milgram);
    if a.shapes {
        objs.retain(|x| x.leaves().iter().copied().eq(1..=a.k as u32));
    }
    if a.json {
        let v: Vec<String> = objs.iter().map(Expr::render).collect();
        writeln!(out, "{}", serde_json::to_string(&v).map_err(|e| CliError::Failed(e.to_string()))?)?;
    } else {
        for x in objs {
            writeln!(out, "{x}")?;
        }
    }
    Ok(())
}

fn cmd_counts(a: &CountsArgs, out: &mut Vec<u8>) -> CliResult {
    let n = check_n(a.n)?;
    if a.kmax == 0 || a.kmax > 200 {
        return Err(usage(format!("--kmax must lie in 1..=200, got {}", a.kmax)));
    }
    let table = shape_counts(n, a.kmax);
    for k in 1..=a.check_upto.min(a.kmax) {
        bound(&format!("M_{n}({k})"), object_count(n, k), MAX_OBJECTS)?;
        let listed = enumerate(n, k, false);
        let shapes = listed.iter().filter(|x| x.leaves().iter().copied().eq(1..=k as u32)).count();
        let row = table.rows.iter().find(|r| r.k == k).expect("row for every k up to kmax");
        if BigUint::from(listed.len()) != row.objects || BigUint::from(shapes) != row.shapes {
            return Err(CliError::Failed(format!(
                "k={k}: listed {} objects and {shapes} shapes, recurrence gives {} and {}",
                listed.len(),
                row.objects,
                row.shapes
            )));
        }
    }
    write!(out, "{}", table.to_csv())?;
    Ok(())
}

fn cmd_hom(a: &HomArgs, out: &mut Vec<u8>) -> CliResult {
    let n = check_n(a.n)?;
    let (x, y) = (parse_expr(&a.a, n)?, parse_expr(&a.b, n)?);
    writeln!(out, "{}", if hom_exists(&x, &y)? { "yes" } else { "no" })?;
    Ok(())
}

fn cmd_witness(a: &WitnessArgs, out: &mut Vec<u8>) -> CliResult {
    let n = check_n(a.n)?;
    let (x, y) = (parse_expr(&a.a, n)?, parse_expr(&a.b, n)?);
    match reachability_witness(&x, &y, n, a.max_depth)? {
        Some(chain) => {
            writeln!(out, "{}", witness_json(&chain))?;
            Ok(())
        }
        None => Err(CliError::Failed(format!("no morphism {x} -> {y}"))),
    }
}

fn poset_for(n: Op, k: usize, milgram: bool) -> CliResult<Poset<Expr>> {
    bound(&format!("M_{n}({k})"), object_count(n, k), MAX_POSET)?;
    Ok(build_poset(n, k, milgram))
}

fn cmd_hasse(a: &HasseArgs, out: &mut Vec<u8>) -> CliResult {
    let n = check_n(a.n)?;
    let p = poset_for(n, a.k, a.milgram)?;
    let edges: Vec<(usize, usize, Option<String>)> = match a.edges {
        EdgeKind::Generators => {
            let index: BTreeMap<&Expr, usize> = p.elements().iter().enumerate().map(|(i, x)| (x, i)).collect();
            let mut v = Vec::new();
            for (i, x) in p.elements().iter().enumerate() {
                for (step, t) in one_step_rewrites(x, n) {
                    // Targets outside the level-ordered part are dropped.
                    if let Some(&j) = index.get(&t) {
                        v.push((i, j, a.names.then(|| step.name())));
                    }
                }
            }
            v
        }
        EdgeKind::Covers => p.cover_edges().into_iter().map(|(i, j)| (i, j, None)).collect(),
        EdgeKind::Order => p.comparable_pairs().into_iter().map(|(i, j)| (i, j, None)).collect(),
    };
    let name = format!("M{n}_{}", a.k);
    write!(out, "{}", p.to_dot(&name, Expr::render, &edges))?;
    Ok(())
}

fn cmd_homology(a: &HomologyArgs, out: &mut Vec<u8>) -> CliResult {
    let n = check_n(a.n)?;
    let complex = if let Some(x) = &a.downset {
        let x = parse_expr(x, n)?;
        bound(&format!("M_{n}({})", x.size()), object_count(n, x.size()), MAX_POSET)?;
        let d = downset(n, &x, !a.full)?;
        bound("the downset", d.len().into(), MAX_ORDER_COMPLEX)?;
        order_complex(&d)
    } else {
        let k = a.k.ok_or_else(|| usage("--k is required unless --downset is given"))?;
        match a.complex {
            ComplexKind::Order => {
                bound(&format!("M_{n}({k})"), object_count(n, k), MAX_ORDER_COMPLEX)?;
                order_complex(&build_poset(n, k, false))
            }
            ComplexKind::Milgram => {
                let p = poset_for(n, k, true)?;
                bound("the level-ordered part", p.len().into(), MAX_ORDER_COMPLEX)?;
                order_complex(&p)
            }
            ComplexKind::Kgraph => {
                bound(&format!("K^({n})({k})"), kgraph_size(n, k), MAX_ORDER_COMPLEX)?;
                order_complex(&k_poset(n, k))
            }
            ComplexKind::Gamma => {
                check_gamma(n, k)?;
                gamma_chain_complex(n, k)
            }
        }
    };
    writeln!(out, "{}", homology(&complex)?.to_json())?;
    Ok(())
}

fn cmd_downset(a: &DownsetArgs, out: &mut Vec<u8>) -> CliResult {
    let n = check_n(a.n)?;
    let x = parse_expr(&a.x, n)?;
    bound(&format!("M_{n}({})", x.size()), object_count(n, x.size()), MAX_OBJECTS)?;
    let d = downset(n, &x, !a.full)?;
    for y in d.elements() {
        if a.partitions {
            writeln!(out, "{}", OrderedPartition::from_expr(y)?.to_json())?;
        } else {
            writeln!(out, "{y}")?;
        }
    }
    Ok(())
}

fn cmd_qmap(a: &QmapArgs, out: &mut Vec<u8>) -> CliResult {
    let n = check_n(a.n)?;
    if n < 2 {
        return Err(usage("qmap needs n >= 2"));
    }
    if a.cells.len() != n as usize - 1 {
        return Err(usage(format!("expected {} cells for n = {n}, got {}", n - 1, a.cells.len())));
    }
    let cells: Vec<Expr> = a.cells.iter().map(|c| parse_expr(c, 2)).collect::<CliResult<_>>()?;
    if let Some(k) = a.k {
        if let Some(bad) = cells.iter().find(|c| c.size() != k) {
            return Err(usage(format!("cell {bad} does not have {k} letters")));
        }
    }
    let (chain, result) = if a.from_chain {
        (cells.clone(), q_from_chain(n, &cells)?)
    } else {
        (q_chain(&cells)?, q_map(n, &cells)?)
    };
    if a.chain {
        for (i, b) in chain.iter().enumerate() {
            writeln!(out, "B{} = {b}", i + 1)?;
        }
    }
    writeln!(out, "{result}")?;
    Ok(())
}

fn check_gamma(n: Op, k: usize) -> CliResult {
    if k == 0 || k > 8 {
        return Err(usage(format!("--k must lie in 1..=8 here, got {k}")));
    }
    let dim = (n as u64 - 1) * (k * (k - 1) / 2) as u64;
    if dim > MAX_GAMMA_DIM {
        return Err(usage(format!(
            "Gamma^({n})({k}) has simplices up to dimension {dim} and {}^{dim} times as many as vertices; refusing above dimension {MAX_GAMMA_DIM}",
            factorial(k)
        )));
    }
    Ok(())
}

fn cmd_gamma(a: &GammaArgs, out: &mut Vec<u8>) -> CliResult {
    let n = check_n(a.n)?;
    if let Some(m) = &a.member {
        let s = GammaSimplex::from_json(m)?;
        writeln!(out, "{}", gamma_member(&s, n))?;
        return Ok(());
    }
    check_gamma(n, a.k)?;
    if a.homology {
        writeln!(out, "{}", homology(&gamma_chain_complex(n, a.k))?.to_json())?;
        return Ok(());
    }
    let graded = gamma_simplices(n, a.k);
    if a.count {
        let counts: Vec<usize> = graded.iter().map(Vec::len).collect();
        writeln!(out, "{}", serde_json::to_string(&counts).map_err(|e| CliError::Failed(e.to_string()))?)?;
    } else {
        for s in graded.iter().flatten() {
            writeln!(out, "{}", s.to_json())?;
        }
    }
    Ok(())
}

/// `k! n^{C(k,2)}`.
fn kgraph_size(n: Op, k: usize) -> BigUint {
    factorial(k) * BigUint::from(n).pow((k * k.saturating_sub(1) / 2) as u32)
}

fn parse_table(text: &str, n: Op) -> CliResult<PairTable> {
    if text.trim_start().starts_with('{') {
        Ok(PairTable::from_json(text)?)
    } else {
        Ok(parse_expr(text, n)?.pair_table(n)?)
    }
}

fn cmd_kgraph(a: &KgraphArgs, out: &mut Vec<u8>) -> CliResult {
    let n = check_n(a.n)?;
    if let Some(xy) = &a.leq {
        let (x, y) = (parse_table(&xy[0], n)?, parse_table(&xy[1], n)?);
        writeln!(out, "{}", k_leq(&x, &y)?)?;
        return Ok(());
    }
    bound(&format!("K^({n})({})", a.k), kgraph_size(n, a.k), MAX_OBJECTS)?;
    let tables = k_enumerate(n, a.k);
    if a.count {
        let realizable = tables.iter().filter(|t| t.realize().is_some()).count();
        writeln!(out, "tables {}\nfrom expressions {realizable}", tables.len())?;
    } else {
        for t in &tables {
            writeln!(out, "{}", t.to_json())?;
        }
    }
    Ok(())
}

fn load_config(text: &str) -> CliResult<Configuration> {
    Ok(Configuration::from_json(text)?)
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn cmd_realize(a: &RealizeArgs, out: &mut Vec<u8>) -> CliResult {
    let n = check_n(a.n)?;
    let c = cubes::realize(&parse_expr(&a.a, n)?, n)?;
    if a.svg {
        write!(out, "{}", c.to_svg()?)?;
    } else {
        writeln!(out, "{}", c.to_json())?;
    }
    Ok(())
}

fn cmd_cubes(cmd: &CubesCommand, seed: u64, out: &mut Vec<u8>) -> CliResult {
    match cmd {
        CubesCommand::Check { config, expr } => {
            let c = load_config(config)?;
            let a = parse_expr(expr, c.n())?;
            writeln!(out, "G: {}\nF: {}", yes_no(cubes::in_g(&c, &a)?), yes_no(cubes::in_f(&c, &a)?))?;
        }
        CubesCommand::Decompose { config } => {
            let c = load_config(config)?;
            writeln!(
                out,
                "plain: {}\nmilgram: {}",
                yes_no(cubes::decomposable(&c, Mode::Plain)),
                yes_no(cubes::decomposable(&c, Mode::Milgram))
            )?;
        }
        CubesCommand::Shrink { config, random, n } => {
            let c = match (config, random) {
                (Some(text), _) => load_config(text)?,
                (None, Some(k)) => {
                    let n = check_n(*n)?;
                    if *k == 0 || *k > 12 {
                        return Err(usage(format!("--random must lie in 1..=12, got {k}")));
                    }
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    cubes::random_configuration(n, *k, 16, &mut rng)
                        .ok_or_else(|| CliError::Failed("no random configuration found".into()))?
                }
                (None, None) => return Err(usage("give --config or --random")),
            };
            writeln!(out, "{}", cubes::shrink(&c).to_json())?;
        }
        CubesCommand::Compose { outer, inners } => {
            let o = load_config(outer)?;
            let ins: Vec<Configuration> = inners.iter().map(|t| load_config(t)).collect::<CliResult<_>>()?;
            writeln!(out, "{}", cubes::cubes_compose(&o, &ins)?.to_json())?;
        }
        CubesCommand::Realize(a) => cmd_realize(a, out)?,
    }
    Ok(())
}

fn verify_paper(out: &mut Vec<u8>) -> CliResult {
    let outcomes = recipes::verify_all();
    let mut failed = 0;
    for o in &outcomes {
        match &o.result {
            Ok(()) => writeln!(out, "PASS {}", o.name)?,
            Err(msg) => {
                failed += 1;
                writeln!(out, "FAIL {}: {msg}", o.name)?;
            }
        }
    }
    writeln!(out, "{} of {} checks passed", outcomes.len() - failed, outcomes.len())?;
    if failed > 0 {
        return Err(CliError::Failed(format!("{failed} worked example(s) did not reproduce")));
    }
    Ok(())
}
