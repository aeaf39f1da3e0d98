//! Experiment runner: seeded families of graphs drawn across a size sweep,
//! with per-trial records (CSV) and a per-size summary (JSON).
//!
//! Trials run on a worker pool capped by the `GRIDWEAVE_THREADS` environment
//! variable. Per-trial seeds derive from the master seed by a fixed
//! splitting rule (`seed_i = master ^ splitmix64(i)`), so results do not
//! depend on scheduling.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::engine::{
    draw_blowup_greedy, draw_first_moment, Algorithm, DrawingParams, EngineError,
};
use crate::graph::{generate, GraphError, GraphFamily};
use crate::verify::{drawing_stats, verify_drawing};

pub const THREADS_ENV: &str = "GRIDWEAVE_THREADS";

/// Installs the global worker pool, honoring `GRIDWEAVE_THREADS`. Safe to
/// call more than once; only the first call takes effect.
pub fn configure_thread_pool() {
    static ONCE: std::sync::Once = std::sync::Once::new();
    ONCE.call_once(|| {
        if let Ok(v) = std::env::var(THREADS_ENV) {
            if let Ok(threads) = v.parse::<usize>() {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(threads)
                    .build_global();
            }
        }
    });
}

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("config: {0}")]
    Config(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error("soundness violation in trial {trial} at n = {n}: {detail}")]
    Soundness { n: usize, trial: usize, detail: String },
}

/// A graph family spec as written in config files, e.g. `random-regular(3)`,
/// `random-d-degenerate(2)`, `grid-2d`, `complete-bipartite(3,3)`. A bare
/// `complete-bipartite` splits each size as evenly as possible.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FamilySpec {
    RandomRegular(usize),
    RandomDegenerate(usize),
    Grid2d,
    CompleteBipartite(Option<(usize, usize)>),
}

impl FamilySpec {
    pub fn parse(text: &str) -> Result<Self, HarnessError> {
        let text = text.trim();
        let (name, args) = match text.find('(') {
            Some(open) => {
                let close = text
                    .rfind(')')
                    .ok_or_else(|| HarnessError::Config(format!("unbalanced parens in family {text:?}")))?;
                (
                    &text[..open],
                    text[open + 1..close]
                        .split(',')
                        .map(str::trim)
                        .map(|a| {
                            a.parse::<usize>().map_err(|_| {
                                HarnessError::Config(format!("bad family argument {a:?} in {text:?}"))
                            })
                        })
                        .collect::<Result<Vec<usize>, _>>()?,
                )
            }
            None => (text, Vec::new()),
        };
        match (name, args.as_slice()) {
            ("random-regular", [d]) => Ok(FamilySpec::RandomRegular(*d)),
            ("random-d-degenerate" | "random-degenerate", [d]) => Ok(FamilySpec::RandomDegenerate(*d)),
            ("grid-2d", []) => Ok(FamilySpec::Grid2d),
            ("complete-bipartite", []) => Ok(FamilySpec::CompleteBipartite(None)),
            ("complete-bipartite", [a, b]) => Ok(FamilySpec::CompleteBipartite(Some((*a, *b)))),
            _ => Err(HarnessError::Config(format!("unknown family spec {text:?}"))),
        }
    }

    /// Resolves to a concrete family for size `n`, rejecting infeasible
    /// combinations up front.
    pub fn resolve(&self, n: usize) -> Result<GraphFamily, HarnessError> {
        match *self {
            FamilySpec::RandomRegular(d) => {
                if n <= d {
                    return Err(HarnessError::Config(format!(
                        "random-regular({d}) infeasible at n = {n}: need n > d"
                    )));
                }
                if !(n * d).is_multiple_of(2) {
                    return Err(HarnessError::Config(format!(
                        "random-regular({d}) infeasible at n = {n}: n*d must be even"
                    )));
                }
                Ok(GraphFamily::RandomRegular { degree: d })
            }
            FamilySpec::RandomDegenerate(d) => Ok(GraphFamily::RandomDegenerate { max_degeneracy: d }),
            FamilySpec::Grid2d => Ok(GraphFamily::Grid2d),
            FamilySpec::CompleteBipartite(Some((a, b))) => {
                if a + b != n {
                    return Err(HarnessError::Config(format!(
                        "complete-bipartite({a},{b}) requires n = {}, got {n}",
                        a + b
                    )));
                }
                Ok(GraphFamily::CompleteBipartite { left: a, right: b })
            }
            FamilySpec::CompleteBipartite(None) => Ok(GraphFamily::CompleteBipartite {
                left: n.div_ceil(2),
                right: n / 2,
            }),
        }
    }
}

impl std::fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FamilySpec::RandomRegular(d) => write!(f, "random-regular({d})"),
            FamilySpec::RandomDegenerate(d) => write!(f, "random-d-degenerate({d})"),
            FamilySpec::Grid2d => write!(f, "grid-2d"),
            FamilySpec::CompleteBipartite(None) => write!(f, "complete-bipartite"),
            FamilySpec::CompleteBipartite(Some((a, b))) => write!(f, "complete-bipartite({a},{b})"),
        }
    }
}

/// Optional overrides of [`DrawingParams`] in a bench config file.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamOverrides {
    pub m: Option<u32>,
    pub t: Option<u32>,
    pub volume_constant: Option<f64>,
    pub attempt_budget: Option<u32>,
    pub growth_factor: Option<f64>,
    pub max_escalations: Option<u32>,
}

impl ParamOverrides {
    pub fn apply(&self, seed: u64) -> DrawingParams {
        let defaults = DrawingParams::default();
        DrawingParams {
            m: self.m.unwrap_or(defaults.m),
            t: self.t.unwrap_or(defaults.t),
            volume_constant: self.volume_constant.unwrap_or(defaults.volume_constant),
            attempt_budget: self.attempt_budget.unwrap_or(defaults.attempt_budget),
            growth_factor: self.growth_factor.unwrap_or(defaults.growth_factor),
            max_escalations: self.max_escalations.unwrap_or(defaults.max_escalations),
            seed,
        }
    }
}

fn default_reverify() -> f64 {
    1.0
}

/// A bench run: one family, a sweep of sizes, `trials` seeded trials each.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub family: String,
    pub sizes: Vec<usize>,
    pub trials: usize,
    pub algorithm: Algorithm,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub params: ParamOverrides,
    /// Fraction of successful drawings re-verified end to end (default all).
    #[serde(default = "default_reverify")]
    pub reverify_fraction: f64,
    /// Write elapsed-time columns as 0 so output bytes depend only on
    /// (config, seed).
    #[serde(default)]
    pub deterministic_output: bool,
    /// Records CSV destination; the CLI falls back to `<config>.records.csv`.
    #[serde(default)]
    pub records_path: Option<String>,
    /// Summary JSON destination; the CLI falls back to `<config>.summary.json`.
    #[serde(default)]
    pub summary_path: Option<String>,
}

/// One row of the records CSV.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub family: String,
    pub algorithm: Algorithm,
    pub n: usize,
    pub k: usize,
    pub degeneracy: u32,
    pub trial: usize,
    pub seed: u64,
    pub success: bool,
    pub m: u32,
    pub t: u32,
    pub attempts: u32,
    pub volume: u64,
    pub elapsed_ms: u64,
    /// `m^3 / (D * max(k, n) * ln n)`; empty for degenerate denominators.
    pub ratio: Option<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SizeSummary {
    pub n: usize,
    pub trials: usize,
    pub successes: usize,
    pub success_rate: f64,
    pub max_ratio: Option<f64>,
    pub max_aspect_ratio: Option<f64>,
    pub mean_attempts: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BenchSummary {
    pub family: String,
    pub algorithm: Algorithm,
    pub master_seed: u64,
    pub per_size: Vec<SizeSummary>,
    pub overall_success_rate: f64,
}

#[derive(Clone, Debug)]
pub struct BenchOutcome {
    pub records: Vec<ExperimentRecord>,
    pub summary: BenchSummary,
}

/// SplitMix64 finalizer; the mixing half of the seed-splitting rule.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// The documented seed-splitting rule: `seed_i = master ^ mix(i)`.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    master ^ mix(index)
}

/// Substreams within one trial (graph generation, drawing, re-verify dice).
/// Chained through the mixer rather than plain XOR so substream indices
/// cannot cancel against the trial index.
fn substream(trial_seed: u64, lane: u64) -> u64 {
    mix(trial_seed.wrapping_add(lane))
}

struct TrialOutcome {
    record: ExperimentRecord,
    aspect_ratio: Option<f64>,
}

/// Runs the full experiment described by `config`.
pub fn run_bench(config: &ExperimentConfig) -> Result<BenchOutcome, HarnessError> {
    configure_thread_pool();
    let spec = FamilySpec::parse(&config.family)?;
    if config.trials < 1 {
        return Err(HarnessError::Config("trials must be >= 1".into()));
    }
    if config.sizes.is_empty() {
        return Err(HarnessError::Config("sizes must be nonempty".into()));
    }
    if !config.sizes.windows(2).all(|w| w[0] < w[1]) {
        return Err(HarnessError::Config("sizes must be strictly increasing".into()));
    }
    if !(0.0..=1.0).contains(&config.reverify_fraction) {
        return Err(HarnessError::Config("reverify_fraction must lie in [0, 1]".into()));
    }
    // family feasibility for every size, before any trial runs
    for &n in &config.sizes {
        spec.resolve(n)?;
    }

    let plans: Vec<(usize, usize, u64)> = config
        .sizes
        .iter()
        .enumerate()
        .flat_map(|(size_idx, &n)| {
            (0..config.trials).map(move |trial| {
                let global = (size_idx * config.trials + trial) as u64;
                (n, trial, global)
            })
        })
        .collect();

    let outcomes: Result<Vec<TrialOutcome>, HarnessError> = plans
        .par_iter()
        .map(|&(n, trial, global)| run_trial(config, &spec, n, trial, global))
        .collect();
    let outcomes = outcomes?;

    let records: Vec<ExperimentRecord> = outcomes.iter().map(|o| o.record.clone()).collect();
    let per_size = config
        .sizes
        .iter()
        .map(|&n| {
            let rows: Vec<&TrialOutcome> =
                outcomes.iter().filter(|o| o.record.n == n).collect();
            let successes = rows.iter().filter(|o| o.record.success).count();
            SizeSummary {
                n,
                trials: rows.len(),
                successes,
                success_rate: successes as f64 / rows.len() as f64,
                max_ratio: rows
                    .iter()
                    .filter(|o| o.record.success)
                    .filter_map(|o| o.record.ratio)
                    .fold(None, |acc, r| Some(acc.map_or(r, |a: f64| a.max(r)))),
                max_aspect_ratio: rows
                    .iter()
                    .filter_map(|o| o.aspect_ratio)
                    .fold(None, |acc, r| Some(acc.map_or(r, |a: f64| a.max(r)))),
                mean_attempts: rows.iter().map(|o| o.record.attempts as f64).sum::<f64>()
                    / rows.len() as f64,
            }
        })
        .collect();
    let total_success = records.iter().filter(|r| r.success).count();
    let summary = BenchSummary {
        family: spec.to_string(),
        algorithm: config.algorithm,
        master_seed: config.seed,
        per_size,
        overall_success_rate: total_success as f64 / records.len() as f64,
    };
    Ok(BenchOutcome { records, summary })
}

fn run_trial(
    config: &ExperimentConfig,
    spec: &FamilySpec,
    n: usize,
    trial: usize,
    global: u64,
) -> Result<TrialOutcome, HarnessError> {
    let base = derive_seed(config.seed, global);
    let graph_seed = substream(base, 1);
    let draw_seed = substream(base, 2);
    let family = spec.resolve(n)?;
    let graph = generate(&family, n, graph_seed)?;
    let degeneracy = graph.degeneracy_ordering().degeneracy;
    let k = graph.edge_count();
    let params = config.params.apply(draw_seed);
    let drawn = match config.algorithm {
        Algorithm::FirstMoment => draw_first_moment(&graph, &params),
        Algorithm::BlowupGreedy => draw_blowup_greedy(&graph, &params),
    };
    let ratio_of = |m: u32| {
        let denom = degeneracy as f64 * k.max(n) as f64 * (n as f64).ln();
        (denom > 0.0).then(|| (m as u64).pow(3) as f64 / denom)
    };
    let record = |success: bool, stats: &crate::engine::TrialStats| ExperimentRecord {
        family: spec.to_string(),
        algorithm: config.algorithm,
        n,
        k,
        degeneracy,
        trial,
        seed: draw_seed,
        success,
        m: stats.m,
        t: stats.t,
        attempts: stats.attempts,
        volume: (stats.m as u64).pow(3),
        elapsed_ms: if config.deterministic_output { 0 } else { stats.elapsed_ms },
        ratio: success.then(|| ratio_of(stats.m)).flatten(),
    };
    match drawn {
        Ok(out) => {
            let stats = drawing_stats(&out.embedding, &graph);
            // spot re-verification, deterministically sampled per trial;
            // a full fraction re-verifies unconditionally
            let dice = substream(base, 3) as f64 / u64::MAX as f64;
            if config.reverify_fraction >= 1.0 || dice < config.reverify_fraction {
                let verdict = verify_drawing(&graph, &out.embedding)
                    .map_err(|e| HarnessError::Soundness { n, trial, detail: e.to_string() })?;
                if !verdict.valid {
                    return Err(HarnessError::Soundness {
                        n,
                        trial,
                        detail: format!("{} violations", verdict.violations.len()),
                    });
                }
            }
            Ok(TrialOutcome {
                record: record(true, &out.stats),
                aspect_ratio: Some(stats.aspect_ratio),
            })
        }
        Err(EngineError::BudgetExhausted { stats }) => Ok(TrialOutcome {
            record: record(false, &stats),
            aspect_ratio: None,
        }),
        Err(other) => Err(other.into()),
    }
}

/// Records as an RFC-4180-style CSV document with a header row.
pub fn records_to_csv(records: &[ExperimentRecord]) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    for record in records {
        writer.serialize(record).expect("record serializes");
    }
    String::from_utf8(writer.into_inner().expect("in-memory writer")).expect("csv is utf-8")
}

pub fn summary_to_json(summary: &BenchSummary) -> String {
    let mut s = serde_json::to_string_pretty(summary).expect("summary serializes");
    s.push('\n');
    s
}
