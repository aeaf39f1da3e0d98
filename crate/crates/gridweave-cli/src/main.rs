//! gridweave: crossing-free 3D grid drawings of graphs.
//!
//! Subcommands: `draw` (graph file -> embedding JSON), `verify` (audit an
//! embedding against its graph), `count` (lattice censuses as CSV), `bench`
//! (seeded experiment sweeps), `render` (embedding -> SVG).
//!
//! Exit codes: 0 success / valid; 1 parse error or invalid drawing;
//! 2 infeasible parameters or malformed/mismatched input; 3 attempt budget
//! exhausted; 4 I/O error; 70 internal soundness failure.

use std::fmt;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use gridweave::census::{self, CensusError, PrimitiveNormal, Strategy};
use gridweave::engine::{
    draw_blowup_greedy, draw_first_moment, Algorithm, DrawingParams, EngineError,
};
use gridweave::formats::{EmbeddingFile, FormatError};
use gridweave::graph::{Graph, GraphError};
use gridweave::harness::{self, ExperimentConfig, HarnessError};
use gridweave::render::render_svg;
use gridweave::verify::{verify_drawing, VerifyError};

const EXIT_PARSE: i32 = 1;
const EXIT_INVALID: i32 = 1;
const EXIT_INFEASIBLE: i32 = 2;
const EXIT_BUDGET: i32 = 3;
const EXIT_IO: i32 = 4;
const EXIT_INTERNAL: i32 = 70;

#[derive(Debug)]
struct CliError {
    code: i32,
    message: String,
}

impl CliError {
    fn new(code: i32, message: impl Into<String>) -> Self {
        CliError { code, message: message.into() }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<GraphError> for CliError {
    fn from(e: GraphError) -> Self {
        CliError::new(EXIT_PARSE, e.to_string())
    }
}

impl From<FormatError> for CliError {
    fn from(e: FormatError) -> Self {
        CliError::new(EXIT_INFEASIBLE, e.to_string())
    }
}

impl From<VerifyError> for CliError {
    fn from(e: VerifyError) -> Self {
        CliError::new(EXIT_INFEASIBLE, e.to_string())
    }
}

impl From<CensusError> for CliError {
    fn from(e: CensusError) -> Self {
        CliError::new(EXIT_INFEASIBLE, e.to_string())
    }
}

impl From<EngineError> for CliError {
    fn from(e: EngineError) -> Self {
        match e {
            EngineError::BudgetExhausted { .. } => CliError::new(EXIT_BUDGET, e.to_string()),
            _ => CliError::new(EXIT_INFEASIBLE, e.to_string()),
        }
    }
}

impl From<HarnessError> for CliError {
    fn from(e: HarnessError) -> Self {
        match e {
            HarnessError::Config(_) | HarnessError::Graph(_) => {
                CliError::new(EXIT_PARSE, e.to_string())
            }
            HarnessError::Engine(inner) => inner.into(),
            HarnessError::Soundness { .. } => CliError::new(EXIT_INTERNAL, e.to_string()),
        }
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::new(EXIT_IO, format!("reading {}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents)
        .map_err(|e| CliError::new(EXIT_IO, format!("writing {}: {e}", path.display())))
}

#[derive(Parser)]
#[command(name = "gridweave", version, about = "Crossing-free 3D grid drawings of graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw a graph on integer grid points and write the embedding JSON
    Draw(DrawArgs),
    /// Audit an embedding file against its graph; exit 0 iff it is a valid drawing
    Verify(VerifyArgs),
    /// Emit lattice census rows as CSV
    Count(CountArgs),
    /// Run a seeded experiment sweep from a JSON config
    Bench(BenchArgs),
    /// Render an embedding (optionally with its graph's edges) to SVG
    Render(RenderArgs),
}

#[derive(Args)]
struct DrawArgs {
    /// Graph file in edge-list format ("n k" header, then "u v" lines)
    graph: PathBuf,
    /// Drawing algorithm: first-moment or blowup-greedy
    #[arg(long, default_value = "blowup-greedy", value_parser = clap_algorithm_parser)]
    alg: Algorithm,
    /// Grid side override (0 = derive from the volume formula)
    #[arg(long, default_value_t = 0)]
    m: u32,
    /// Blowup part size override (0 = derive)
    #[arg(long, default_value_t = 0)]
    t: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Volume constant in the grid-side formulas
    #[arg(long = "c", default_value_t = 10.0)]
    volume_constant: f64,
    /// Embedding attempts per grid side
    #[arg(long, default_value_t = 20)]
    budget: u32,
    /// Grid-side growth factor on escalation
    #[arg(long, default_value_t = 1.2599210498948732)]
    growth: f64,
    /// Escalations allowed before giving up
    #[arg(long, default_value_t = 8)]
    escalations: u32,
    /// Output path (default: the graph path with extension .drawing.json)
    #[arg(long)]
    out: Option<PathBuf>,
}

impl DrawArgs {
    fn params(&self) -> DrawingParams {
        DrawingParams {
            m: self.m,
            t: self.t,
            volume_constant: self.volume_constant,
            attempt_budget: self.budget,
            growth_factor: self.growth,
            max_escalations: self.escalations,
            seed: self.seed,
        }
    }
}

fn clap_algorithm_parser(s: &str) -> Result<Algorithm, String> {
    s.parse()
}

#[derive(Args)]
struct VerifyArgs {
    /// Embedding JSON produced by `draw`
    embedding: PathBuf,
    /// The graph the embedding claims to draw
    graph: PathBuf,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum CountKind {
    /// Collinear k-subsets of [m]^d
    Collinear,
    /// 3-subsets of [m]^3 coplanar with the origin
    CoplanarOrigin,
    /// Coplanar 4-subsets of [m]^3
    Coplanar4,
    /// Points of [m]^d on the hyperplane a.x = 0, plus the bound check
    Hyperplane,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum StrategyArg {
    Auto,
    Brute,
    Enumeration,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Strategy {
        match s {
            StrategyArg::Auto => Strategy::Auto,
            StrategyArg::Brute => Strategy::BruteForce,
            StrategyArg::Enumeration => Strategy::Enumeration,
        }
    }
}

#[derive(Args)]
struct CountArgs {
    kind: CountKind,
    /// Dimension (collinear census only; the others are 3-dimensional)
    #[arg(short, long, default_value_t = 3)]
    d: u32,
    /// Subset size for the collinear census
    #[arg(short, long)]
    k: Option<u32>,
    /// Grid sides, comma separated (e.g. 4,6,8)
    #[arg(short, long = "m", value_delimiter = ',', required = true)]
    m: Vec<u32>,
    #[arg(long, default_value = "auto")]
    strategy: StrategyArg,
    /// Normal vector entries for the hyperplane census, e.g. "2,-1,0"
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    normal: Option<Vec<i64>>,
    /// Append the fitted log-log growth slope after the rows
    #[arg(long)]
    fit: bool,
    /// Write the CSV here as well as stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// Experiment config JSON
    config: PathBuf,
    /// Override the config's trial count
    #[arg(long)]
    trials: Option<usize>,
    /// Override the config's master seed
    #[arg(long)]
    seed: Option<u64>,
    /// Records CSV path (default: config path with .records.csv)
    #[arg(long)]
    records: Option<PathBuf>,
    /// Summary JSON path (default: config path with .summary.json)
    #[arg(long)]
    summary: Option<PathBuf>,
}

#[derive(Args)]
struct RenderArgs {
    /// Embedding JSON produced by `draw`
    embedding: PathBuf,
    /// Graph file; when given, edges are drawn and the content hash checked
    graph: Option<PathBuf>,
    /// Output path (default: stdout)
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() {
    harness::configure_thread_pool();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Draw(args) => cmd_draw(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Count(args) => cmd_count(args),
        Command::Bench(args) => cmd_bench(args),
        Command::Render(args) => cmd_render(args),
    };
    if let Err(e) = result {
        eprintln!("error: {e}");
        std::process::exit(e.code);
    }
}

fn cmd_draw(args: DrawArgs) -> Result<(), CliError> {
    let graph = Graph::parse(&read_file(&args.graph)?)?;
    let params = args.params();
    let outcome = match args.alg {
        Algorithm::FirstMoment => draw_first_moment(&graph, &params),
        Algorithm::BlowupGreedy => draw_blowup_greedy(&graph, &params),
    }?;
    // re-verify before persisting anything
    let verdict = verify_drawing(&graph, &outcome.embedding)?;
    if !verdict.valid {
        return Err(CliError::new(
            EXIT_INTERNAL,
            format!("drawer returned an embedding with {} violations", verdict.violations.len()),
        ));
    }
    let out_path = args
        .out
        .unwrap_or_else(|| args.graph.with_extension("drawing.json"));
    let file = EmbeddingFile::new(&outcome.embedding, &graph);
    write_file(&out_path, &file.to_json())?;
    // round-trip integrity: what landed on disk must re-verify
    let reread = EmbeddingFile::from_json(&read_file(&out_path)?)?;
    reread.check_graph(&graph)?;
    let verdict = verify_drawing(&graph, &reread.to_embedding())?;
    if !verdict.valid {
        return Err(CliError::new(EXIT_INTERNAL, "persisted drawing failed re-verification"));
    }
    println!(
        "{}",
        serde_json::to_string(&outcome.stats).expect("stats serialize")
    );
    eprintln!("wrote {}", out_path.display());
    Ok(())
}

fn cmd_verify(args: VerifyArgs) -> Result<(), CliError> {
    let graph = Graph::parse(&read_file(&args.graph)?)
        .map_err(|e| CliError::new(EXIT_INFEASIBLE, e.to_string()))?;
    let file = EmbeddingFile::from_json(&read_file(&args.embedding)?)?;
    file.check_graph(&graph)?;
    let verdict = verify_drawing(&graph, &file.to_embedding())?;
    println!(
        "{}",
        serde_json::to_string_pretty(&verdict).expect("verdict serialize")
    );
    if verdict.valid {
        Ok(())
    } else {
        Err(CliError::new(
            EXIT_INVALID,
            format!("drawing is not valid: {} violations", verdict.violations.len()),
        ))
    }
}

#[derive(Serialize)]
struct CountRow {
    kind: String,
    d: u32,
    k: Option<u32>,
    m: u32,
    count: u64,
    elapsed_ms: u64,
}

fn cmd_count(args: CountArgs) -> Result<(), CliError> {
    let strategy: Strategy = args.strategy.into();
    let mut rows = Vec::new();
    for &m in &args.m {
        let started = Instant::now();
        let (result, note) = match args.kind {
            CountKind::Collinear => {
                let k = args.k.ok_or_else(|| {
                    CliError::new(EXIT_INFEASIBLE, "count collinear requires -k")
                })?;
                (census::count_collinear_ksets(args.d, k, m, strategy)?, None)
            }
            CountKind::CoplanarOrigin => (census::count_coplanar_origin_triples(m)?, None),
            CountKind::Coplanar4 => (census::count_coplanar_4sets(m, strategy)?, None),
            CountKind::Hyperplane => {
                let entries = args.normal.clone().ok_or_else(|| {
                    CliError::new(EXIT_INFEASIBLE, "count hyperplane requires --normal")
                })?;
                let normal = PrimitiveNormal::new(entries)?;
                let h = census::hyperplane_count(&normal, m)?;
                let note = match h.bound_holds {
                    Some(holds) => format!(
                        "m={m}: spans hyperplane, bound 3^d m^(d-1)/s {}",
                        if holds { "holds" } else { "VIOLATED" }
                    ),
                    None => format!("m={m}: intersection does not span a hyperplane; bound not asserted"),
                };
                (h.result, Some(note))
            }
        };
        if let Some(note) = note {
            eprintln!("{note}");
        }
        let k_column = match result.kind {
            census::CensusKind::CollinearKSets { k } => Some(k),
            census::CensusKind::CoplanarOriginTriples => Some(3),
            census::CensusKind::CoplanarFourSets => Some(4),
            census::CensusKind::HyperplaneCount { .. } => None,
        };
        rows.push(CountRow {
            kind: result.kind.to_string(),
            d: result.d,
            k: k_column,
            m: result.m,
            count: result.count,
            elapsed_ms: started.elapsed().as_millis() as u64,
        });
    }
    let mut writer = csv::Writer::from_writer(Vec::new());
    for row in &rows {
        writer.serialize(row).expect("row serializes");
    }
    let mut csv_text =
        String::from_utf8(writer.into_inner().expect("in-memory writer")).expect("utf-8");
    if args.fit {
        let series: Vec<(u32, u64)> = rows.iter().map(|r| (r.m, r.count)).collect();
        let slope = census::fit_growth_exponent(&series)?;
        csv_text.push_str(&format!("# fitted log-log slope: {slope:.4}\n"));
    }
    print!("{csv_text}");
    if let Some(out) = &args.out {
        write_file(out, &csv_text)?;
    }
    Ok(())
}

fn cmd_bench(args: BenchArgs) -> Result<(), CliError> {
    let text = read_file(&args.config)?;
    let mut config: ExperimentConfig = serde_json::from_str(&text)
        .map_err(|e| CliError::new(EXIT_PARSE, format!("config: {e}")))?;
    if let Some(trials) = args.trials {
        config.trials = trials;
    }
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    let outcome = harness::run_bench(&config)?;
    let records_path = args
        .records
        .or_else(|| config.records_path.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| args.config.with_extension("records.csv"));
    let summary_path = args
        .summary
        .or_else(|| config.summary_path.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| args.config.with_extension("summary.json"));
    write_file(&records_path, &harness::records_to_csv(&outcome.records))?;
    let summary_json = harness::summary_to_json(&outcome.summary);
    write_file(&summary_path, &summary_json)?;
    print!("{summary_json}");
    eprintln!("wrote {} and {}", records_path.display(), summary_path.display());
    Ok(())
}

fn cmd_render(args: RenderArgs) -> Result<(), CliError> {
    let file = EmbeddingFile::from_json(&read_file(&args.embedding)?)?;
    let graph = match &args.graph {
        Some(path) => {
            let g = Graph::parse(&read_file(path)?)?;
            file.check_graph(&g)?;
            Some(g)
        }
        None => None,
    };
    let svg = render_svg(&file.to_embedding(), graph.as_ref());
    match &args.out {
        Some(path) => write_file(path, &svg)?,
        None => print!("{svg}"),
    }
    Ok(())
}
