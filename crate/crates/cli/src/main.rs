use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use structsched::decomp::{
    branch_decomposition_from_json, branch_decomposition_to_json, exact_treewidth, heuristic_tree_decomposition,
    tree_decomposition_from_json, tree_decomposition_to_json, validate_branch_decomposition,
    validate_tree_decomposition, BranchDecomposition, Heuristic,
};
use structsched::eps::{parse_eps, Eps};
use structsched::graphs::{build_graph, graph_stats, GraphKind};
use structsched::harness::{
    cross_validate, diagnostics, generate, run_algorithm, verify_class, Algorithm, CorpusSpec, GeneratorSpec,
    InstanceClass, SolveOptions,
};
use structsched::ptas::incidence_branch_decomposition;
use structsched::{load_instance, write_instance, Error, Instance};

#[derive(Parser)]
#[command(name = "structsched", version, about = "Makespan scheduling with assignment restrictions")]
struct Cli {
    /// More log output on stderr (-v debug, -vv trace).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance and print the value and schedule as JSON.
    Solve(SolveArgs),
    /// Generate a seeded instance.
    Gen(GenArgs),
    /// Print graph statistics, or one graph as DOT.
    Graph(GraphArgs),
    /// Build or validate decompositions.
    #[command(subcommand)]
    Decomp(DecompCommand),
    /// Cross-check every solver against brute force on a generated corpus; JSON lines.
    Bench(BenchArgs),
    /// Structural diagnostics and an optional class check.
    Validate(ValidateArgs),
}

#[derive(Args)]
struct SolveArgs {
    instance: PathBuf,
    #[arg(long, value_parser = parse_algorithm)]
    algo: Algorithm,
    #[arg(long, value_parser = parse_eps_arg)]
    eps: Option<Eps>,
    /// Tree decomposition (tw-*, fptas-tw) or branch decomposition (edge-dp, ptas-rw) as JSON.
    #[arg(long)]
    decomp: Option<PathBuf>,
    /// Graph for fptas-tw.
    #[arg(long, value_enum, default_value_t = FptasGraph::Incidence)]
    graph: FptasGraph,
}

#[derive(Clone, Copy, ValueEnum)]
enum FptasGraph {
    Dual,
    Incidence,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Primal,
    Dual,
    Incidence,
}

impl From<Kind> for GraphKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Primal => GraphKind::Primal,
            Kind::Dual => GraphKind::Dual,
            Kind::Incidence => GraphKind::Incidence,
        }
    }
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_parser = parse_class)]
    class: InstanceClass,
    #[arg(short, long, default_value_t = 6)]
    n: usize,
    #[arg(short, long, default_value_t = 3)]
    m: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    p_min: u64,
    #[arg(long, default_value_t = 10)]
    p_max: u64,
    #[arg(long, default_value_t = 0.5)]
    density: f64,
    /// Output file; stdout when absent.
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GraphArgs {
    instance: PathBuf,
    /// Print this graph as DOT instead of statistics.
    #[arg(long, value_enum)]
    dot: Option<Kind>,
}

#[derive(Clone, Copy, ValueEnum)]
enum TreeMethod {
    MinDegree,
    MinFill,
    Exact,
}

#[derive(Subcommand)]
enum DecompCommand {
    /// Tree decomposition of one graph.
    Tree {
        instance: PathBuf,
        #[arg(long, value_enum, default_value_t = Kind::Incidence)]
        graph: Kind,
        #[arg(long, value_enum, default_value_t = TreeMethod::MinFill)]
        method: TreeMethod,
    },
    /// Branch decomposition of the incidence graph: from the bi-cotree, or a caterpillar over
    /// jobs then machines with `--caterpillar`.
    Branch {
        instance: PathBuf,
        #[arg(long)]
        caterpillar: bool,
    },
    /// Check a decomposition file and report its width.
    Validate {
        instance: PathBuf,
        decomp: PathBuf,
        /// Graph of a tree decomposition; omit for a branch decomposition.
        #[arg(long, value_enum)]
        graph: Option<Kind>,
    },
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_parser = parse_class, num_args = 1.., value_delimiter = ',')]
    classes: Vec<InstanceClass>,
    #[arg(long, default_value_t = 1)]
    seed_from: u64,
    #[arg(long, default_value_t = 100)]
    seed_to: u64,
    #[arg(long, default_value_t = 6)]
    max_n: usize,
    #[arg(long, default_value_t = 3)]
    max_m: usize,
    #[arg(long, value_parser = parse_eps_arg, num_args = 1.., value_delimiter = ',', default_value = "1/2")]
    eps: Vec<Eps>,
}

#[derive(Args)]
struct ValidateArgs {
    instance: PathBuf,
    #[arg(long, value_parser = parse_class)]
    class: Option<InstanceClass>,
}

fn parse_algorithm(s: &str) -> Result<Algorithm, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_class(s: &str) -> Result<InstanceClass, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_eps_arg(s: &str) -> Result<Eps, String> {
    parse_eps(s).map_err(|e| e.to_string())
}

/// Exit status for each error kind.
fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Infeasible(_) => 1,
        Error::Resource(_) => 2,
        _ => 3,
    }
}

/// Writes to stdout; a closed pipe is not an error.
fn emit(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn print_json(v: &Value) {
    emit(&(serde_json::to_string_pretty(v).expect("values serialize") + "\n"));
}

fn names(inst: &Instance, kind: GraphKind) -> Vec<String> {
    build_graph(inst, kind).vertex_names(inst)
}

fn read(path: &Path) -> Result<String, Error> {
    Ok(fs::read_to_string(path)?)
}

fn solve(args: SolveArgs) -> Result<(), Error> {
    let inst = load_instance(&args.instance)?;
    let fptas_graph = match args.graph {
        FptasGraph::Dual => GraphKind::Dual,
        FptasGraph::Incidence => GraphKind::Incidence,
    };
    let mut opts = SolveOptions { eps: args.eps, fptas_graph, ..SolveOptions::default() };
    if let Some(path) = &args.decomp {
        let text = read(path)?;
        if let Some(kind) = args.algo.tree_graph(fptas_graph) {
            opts.tree = Some(tree_decomposition_from_json(&text, &names(&inst, kind))?);
        } else if args.algo.uses_branch_decomposition() {
            opts.branch = Some(branch_decomposition_from_json(&text, &names(&inst, GraphKind::Incidence))?);
        } else {
            return Err(Error::Invalid(format!("{} takes no decomposition", args.algo)));
        }
    }
    let out = run_algorithm(&inst, args.algo, &opts)?;
    let schedule: BTreeMap<&str, &str> =
        out.solution.schedule.iter().map(|(j, i)| (inst.job_id(j), inst.machine_id(i))).collect();
    print_json(&json!({
        "algorithm": args.algo.name(),
        "eps": args.eps.map(|e| e.to_string()),
        "value": out.solution.value,
        "width": out.width,
        "schedule": schedule,
    }));
    Ok(())
}

fn gen(args: GenArgs) -> Result<(), Error> {
    let spec = GeneratorSpec {
        class: args.class,
        n: args.n,
        m: args.m,
        p_min: args.p_min,
        p_max: args.p_max,
        seed: args.seed,
        density: args.density,
    };
    let inst = generate(&spec)?;
    match args.out {
        Some(path) => write_instance(path, &inst),
        None => {
            emit(&(inst.to_json_string() + "\n"));
            Ok(())
        }
    }
}

fn graph(args: GraphArgs) -> Result<(), Error> {
    let inst = load_instance(&args.instance)?;
    match args.dot {
        Some(kind) => emit(&build_graph(&inst, kind.into()).to_dot(&inst)),
        None => print_json(&serde_json::to_value(graph_stats(&inst))?),
    }
    Ok(())
}

fn branch_for(inst: &Instance, caterpillar: bool) -> Result<BranchDecomposition, Error> {
    if caterpillar {
        let order: Vec<usize> = (0..inst.n() + inst.m()).collect();
        return Ok(BranchDecomposition::caterpillar(&order));
    }
    incidence_branch_decomposition(inst)
}

fn decomp(cmd: DecompCommand) -> Result<(), Error> {
    match cmd {
        DecompCommand::Tree { instance, graph, method } => {
            let inst = load_instance(&instance)?;
            let g = build_graph(&inst, graph.into());
            let td = match method {
                TreeMethod::MinDegree => heuristic_tree_decomposition(&g.graph, Heuristic::MinDegree),
                TreeMethod::MinFill => heuristic_tree_decomposition(&g.graph, Heuristic::MinFill),
                TreeMethod::Exact => exact_treewidth(&g.graph)?.1,
            };
            emit(&(tree_decomposition_to_json(&td, &g.vertex_names(&inst), None) + "\n"));
        }
        DecompCommand::Branch { instance, caterpillar } => {
            let inst = load_instance(&instance)?;
            let bd = branch_for(&inst, caterpillar)?;
            emit(&(branch_decomposition_to_json(&bd, &names(&inst, GraphKind::Incidence)) + "\n"));
        }
        DecompCommand::Validate { instance, decomp, graph } => {
            let inst = load_instance(&instance)?;
            let text = read(&decomp)?;
            let report = match graph {
                Some(kind) => {
                    let g = build_graph(&inst, kind.into());
                    let (td, _) = tree_decomposition_from_json(&text, &g.vertex_names(&inst))?;
                    validate_tree_decomposition(&g.graph, &td)
                        .map_err(|v| Error::Invalid(format!("not a tree decomposition: {v}")))?;
                    json!({ "valid": true, "kind": "tree", "width": td.width() })
                }
                None => {
                    let g = build_graph(&inst, GraphKind::Incidence);
                    let bd = branch_decomposition_from_json(&text, &g.vertex_names(&inst))?;
                    let r = validate_branch_decomposition(&g.graph, &bd)
                        .map_err(|v| Error::Invalid(format!("not a branch decomposition: {v}")))?;
                    json!({ "valid": true, "kind": "branch", "rankwidth": r.rankwidth })
                }
            };
            print_json(&report);
        }
    }
    Ok(())
}

/// Prints the report; a failing record makes the run exit with status 1.
fn bench(args: BenchArgs) -> Result<bool, Error> {
    let mut spec = CorpusSpec {
        seeds: (args.seed_from..=args.seed_to).collect(),
        max_n: args.max_n,
        max_m: args.max_m,
        eps: args.eps,
        ..CorpusSpec::default()
    };
    if !args.classes.is_empty() {
        spec.classes = args.classes;
    }
    let report = cross_validate(&spec);
    emit(&report.to_json_lines());
    Ok(report.passed())
}

/// Prints diagnostics; an instance outside the requested class exits with status 3.
fn validate(args: ValidateArgs) -> Result<bool, Error> {
    let inst = load_instance(&args.instance)?;
    let verdict = args.class.map(|c| verify_class(&inst, c));
    let passed = verdict.as_ref().is_none_or(|v| v.passed());
    print_json(&json!({
        "class": args.class,
        "verdict": verdict,
        "diagnostics": diagnostics(&inst),
    }));
    Ok(passed)
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Solve(a) => solve(a)?,
        Command::Gen(a) => gen(a)?,
        Command::Graph(a) => graph(a)?,
        Command::Decomp(c) => decomp(c)?,
        Command::Bench(a) => {
            if !bench(a)? {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Validate(a) => {
            if !validate(a)? {
                return Ok(ExitCode::from(3));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(3) } else { ExitCode::SUCCESS };
        }
    };
    let level = match cli.verbose {
        0 => tracing::Level::WARN,
        1 => tracing::Level::DEBUG,
        _ => tracing::Level::TRACE,
    };
    tracing_subscriber::fmt().with_max_level(level).with_writer(std::io::stderr).init();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
