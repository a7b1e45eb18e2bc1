//! Command-line front end: curvature of a single graph, the classification
//! pipeline, the lemma-check harness, and DOT export.
//!
//! Exit codes: 0 success (and all checks passing), 1 a verification check
//! reported violations, 2 usage errors (from clap), 3 bad input or any
//! other runtime failure.

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use curvlab_core::rational::to_decimal;
use curvlab_core::{
    classify_positively_curved, curvature_report, default_corpus, dot_filename, parse_adjacency_list,
    parse_graph6, parse_graph6_file, run_all, run_lemma, to_dot, ClassificationReport,
    ClassifyScope, CurvatureReport, Graph, LemmaCheckResult,
};
use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "curvlab", version, about = "Exact Lin-Lu-Yau curvature on finite graphs")]
struct Cli {
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    jobs: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact curvature of the vertex pairs of one graph.
    Curvature(CurvatureArgs),
    /// Enumerate small outerplanar graphs and keep the positively curved ones.
    Classify(ClassifyArgs),
    /// Run the structural property checks over the enumerated corpus.
    Verify(VerifyArgs),
    /// Render graphs as Graphviz DOT files with curvature-labeled edges.
    Export(ExportArgs),
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct InputArgs {
    /// Inline graph6 code.
    #[arg(long, value_name = "CODE")]
    g6: Option<String>,
    /// File with graph6 lines, or an edge list ("u v" per line).
    #[arg(long, value_name = "PATH")]
    file: Option<PathBuf>,
}

impl InputArgs {
    fn load_many(&self) -> anyhow::Result<Vec<Graph>> {
        if let Some(code) = &self.g6 {
            return Ok(vec![parse_graph6(code.trim())?]);
        }
        let path = self.file.as_ref().expect("clap guarantees one input");
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading {}", path.display()))?;
        match parse_graph6_file(&text) {
            Ok(graphs) if !graphs.is_empty() => Ok(graphs),
            Ok(_) => bail!("{}: no graphs found", path.display()),
            // Not graph6; try the edge-list form before giving up.
            Err(g6_err) => parse_adjacency_list(&text)
                .map(|g| vec![g])
                .map_err(|_| anyhow!("{}: not graph6 ({g6_err}) and not an edge list", path.display())),
        }
    }

    fn load_one(&self) -> anyhow::Result<Graph> {
        let graphs = self.load_many()?;
        if graphs.len() != 1 {
            bail!("expected exactly one graph, found {}", graphs.len());
        }
        Ok(graphs.into_iter().next().unwrap())
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
    Dot,
}

#[derive(Args)]
struct CurvatureArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Only adjacent pairs.
    #[arg(long)]
    edges_only: bool,
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
    /// Append a rounded decimal rendering with this many digits.
    #[arg(long, value_name = "K")]
    decimal: Option<u32>,
    /// Write here instead of stdout.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ClassifyArgs {
    /// Largest vertex count to enumerate (3..=11).
    #[arg(long, default_value_t = 10)]
    n_max: usize,
    /// Restrict the corpus to 2-connected graphs.
    #[arg(long, conflicts_with = "maximal_only")]
    two_connected_only: bool,
    /// Restrict the corpus to maximal outerplanar graphs.
    #[arg(long)]
    maximal_only: bool,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Output file, or the target directory for --format dot.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Run every check (the default).
    #[arg(long, conflicts_with = "lemma")]
    all: bool,
    /// Run a single check by id.
    #[arg(long, value_name = "ID", value_parser = ["3.1", "3.2", "3.3", "3.4", "3.5", "3.6"])]
    lemma: Option<String>,
    /// Random couplings sampled per edge in check 3.1.
    #[arg(long, default_value_t = 20)]
    samples: usize,
    /// Corpus bound: connected outerplanar, min degree 2, n <= n_max.
    #[arg(long, default_value_t = 8)]
    n_max: usize,
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExportArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Directory the DOT files go to.
    #[arg(long, value_name = "DIR", default_value = ".")]
    out: PathBuf,
}

fn sampling_seed() -> anyhow::Result<u64> {
    match std::env::var("CURVLAB_SEED") {
        Ok(s) => s.trim().parse().with_context(|| format!("CURVLAB_SEED={s:?} is not a u64")),
        Err(_) => Ok(0),
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)
            .with_context(|| format!("writing {}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn curvature_table(g: &Graph, report: &CurvatureReport, decimal: Option<u32>) -> String {
    let mut out = String::new();
    writeln!(out, "n = {}, edges = {}", g.n(), g.edge_count()).unwrap();
    writeln!(out, "{:>4} {:>4}  {:<10}  method", "u", "v", "kappa").unwrap();
    for p in &report.pairs {
        let mut value = p.kappa.to_string();
        if let Some(k) = decimal {
            write!(value, " ({})", to_decimal(p.kappa, k)).unwrap();
        }
        let method = serde_json::to_value(p.method).unwrap();
        writeln!(
            out,
            "{:>4} {:>4}  {:<10}  {}",
            p.u,
            p.v,
            value,
            method.as_str().unwrap()
        )
        .unwrap();
    }
    writeln!(out, "positively curved: {}", report.positively_curved).unwrap();
    out
}

fn classification_table(report: &ClassificationReport) -> String {
    let mut out = String::new();
    writeln!(out, "{:>3}  {:<12} {:>6}  min kappa", "n", "graph6", "edges").unwrap();
    for g in &report.graphs {
        let min = g.edges.iter().map(|e| e.kappa).min().unwrap();
        writeln!(out, "{:>3}  {:<12} {:>6}  {}", g.n, g.graph6, g.edges.len(), min).unwrap();
    }
    writeln!(out, "total: {}", report.total).unwrap();
    out
}

fn verify_table(results: &[LemmaCheckResult]) -> String {
    let mut out = String::new();
    for r in results {
        writeln!(
            out,
            "{}  {}  instances={} violations={} ({:.2}s, {})",
            r.lemma,
            if r.pass { "pass" } else { "FAIL" },
            r.instances,
            r.violations.len(),
            r.seconds,
            r.corpus
        )
        .unwrap();
        for v in &r.violations {
            writeln!(out, "    {}: {}", v.graph6, v.detail).unwrap();
        }
    }
    out
}

fn write_dot_batch(graphs: &[(usize, Graph)], dir: &PathBuf) -> anyhow::Result<usize> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut per_n: std::collections::BTreeMap<usize, usize> = std::collections::BTreeMap::new();
    for (n, g) in graphs {
        let index = per_n.entry(*n).or_insert(0);
        *index += 1;
        let path = dir.join(dot_filename(*n, *index));
        let name = format!("n{n}_{index}");
        std::fs::write(&path, to_dot(g, &name)?)
            .with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(graphs.len())
}

fn cmd_curvature(args: &CurvatureArgs) -> anyhow::Result<u8> {
    let g = args.input.load_one()?;
    match args.format {
        Format::Dot => emit(&args.out, &to_dot(&g, "graph")?)?,
        Format::Json => {
            let report = curvature_report(&g, args.edges_only)?;
            emit(&args.out, &format!("{}\n", serde_json::to_string_pretty(&report)?))?;
        }
        Format::Table => {
            let report = curvature_report(&g, args.edges_only)?;
            emit(&args.out, &curvature_table(&g, &report, args.decimal))?;
        }
    }
    Ok(0)
}

fn cmd_classify(args: &ClassifyArgs) -> anyhow::Result<u8> {
    let scope = if args.two_connected_only {
        ClassifyScope::TwoConnected
    } else if args.maximal_only {
        ClassifyScope::MaximalOuterplanar
    } else {
        ClassifyScope::MinDegreeTwo
    };
    let report = classify_positively_curved(args.n_max, scope)?;
    match args.format {
        Format::Json => {
            emit(&args.out, &format!("{}\n", serde_json::to_string_pretty(&report)?))?
        }
        Format::Table => emit(&args.out, &classification_table(&report))?,
        Format::Dot => {
            let dir = args.out.clone().unwrap_or_else(|| PathBuf::from("."));
            let graphs: Vec<(usize, Graph)> = report
                .graphs
                .iter()
                .map(|cg| Ok((cg.n, parse_graph6(&cg.graph6)?)))
                .collect::<anyhow::Result<_>>()?;
            let count = write_dot_batch(&graphs, &dir)?;
            println!("wrote {count} DOT files to {}", dir.display());
        }
    }
    Ok(0)
}

fn cmd_verify(args: &VerifyArgs) -> anyhow::Result<u8> {
    let seed = sampling_seed()?;
    let corpus = default_corpus(args.n_max)?;
    let results = match &args.lemma {
        Some(id) => vec![run_lemma(id, &corpus, args.samples, seed)?],
        None => run_all(&corpus, args.samples, seed)?,
    };
    match args.format {
        Format::Json => {
            emit(&args.out, &format!("{}\n", serde_json::to_string_pretty(&results)?))?
        }
        _ => emit(&args.out, &verify_table(&results))?,
    }
    Ok(if results.iter().all(|r| r.pass) { 0 } else { 1 })
}

fn cmd_export(args: &ExportArgs) -> anyhow::Result<u8> {
    let graphs: Vec<(usize, Graph)> =
        args.input.load_many()?.into_iter().map(|g| (g.n(), g)).collect();
    let count = write_dot_batch(&graphs, &args.out)?;
    println!("wrote {count} DOT files to {}", args.out.display());
    Ok(0)
}

fn run(cli: &Cli) -> anyhow::Result<u8> {
    if let Some(jobs) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs as usize)
            .build_global()
            .context("initializing the worker pool")?;
    }
    match &cli.command {
        Command::Curvature(args) => cmd_curvature(args),
        Command::Classify(args) => cmd_classify(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Export(args) => cmd_export(args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(3)
        }
    }
}
