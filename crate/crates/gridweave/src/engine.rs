//! The two randomized drawing procedures: repeated uniform random embedding
//! with a first-moment grid side, and greedy vertex selection inside a
//! random embedding of the t-blowup.
//!
//! Both drawers are deterministic functions of (graph, params, seed): a
//! single ChaCha stream drives every sample, shuffle, and restart.

use std::collections::HashSet;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde::Serialize;
use thiserror::Error;

use crate::geometry::{
    segments_conflict, strictly_between, vertex_edge_conflict, ConflictKind, GridPoint, Segment,
};
use crate::graph::{BlowupGraph, Graph, VertexId};

/// Cube root of 2: the default escalation factor, doubling the grid volume.
const VOLUME_DOUBLING: f64 = 1.259_921_049_894_873_2;

/// An injective placement of vertices `0..n` on lattice points of `[m]^3`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Embedding {
    /// Grid side: all coordinates lie in `[0, m)`.
    pub m: u32,
    /// `points[v]` is the position of vertex `v`.
    pub points: Vec<GridPoint>,
}

impl Embedding {
    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn point(&self, v: VertexId) -> GridPoint {
        self.points[v as usize]
    }
}

/// Tunables shared by both drawers. Zero values for `m` and `t` mean
/// "derive from the graph"; nonzero values override the formulas.
#[derive(Clone, Debug, PartialEq)]
pub struct DrawingParams {
    /// Grid side, or 0 to resolve from the algorithm's volume formula.
    pub m: u32,
    /// Blowup part size, or 0 to resolve `t = max(ceil(ln n), ceil(D ln D), 1)`.
    pub t: u32,
    /// The constant `c` in the grid-side formulas. Natural logarithms
    /// throughout.
    pub volume_constant: f64,
    /// Embedding attempts per grid side before escalating.
    pub attempt_budget: u32,
    /// Grid-side multiplier on escalation (volume doubles at the default).
    pub growth_factor: f64,
    /// Escalations allowed before giving up entirely.
    pub max_escalations: u32,
    pub seed: u64,
}

impl Default for DrawingParams {
    fn default() -> Self {
        DrawingParams {
            m: 0,
            t: 0,
            volume_constant: 10.0,
            attempt_budget: 20,
            growth_factor: VOLUME_DOUBLING,
            max_escalations: 8,
            seed: 0,
        }
    }
}

impl DrawingParams {
    fn validate(&self) -> Result<(), EngineError> {
        if !(self.volume_constant > 0.0 && self.volume_constant.is_finite()) {
            return Err(EngineError::InvalidParams("volume_constant must be positive".into()));
        }
        if self.attempt_budget < 1 {
            return Err(EngineError::InvalidParams("attempt_budget must be >= 1".into()));
        }
        if !(self.growth_factor >= 1.0 && self.growth_factor.is_finite()) {
            return Err(EngineError::InvalidParams("growth_factor must be >= 1".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    FirstMoment,
    BlowupGreedy,
}

impl std::str::FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "first-moment" | "first_moment" => Ok(Algorithm::FirstMoment),
            "blowup-greedy" | "blowup_greedy" | "greedy" => Ok(Algorithm::BlowupGreedy),
            other => Err(format!("unknown algorithm {other:?} (expected first-moment or blowup-greedy)")),
        }
    }
}

/// One detected violation, naming the entities of the drawn graph involved.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum ConflictReport {
    VertexInEdgeInterior {
        vertex: VertexId,
        edge: (VertexId, VertexId),
    },
    EdgeInteriorIntersection {
        first: (VertexId, VertexId),
        second: (VertexId, VertexId),
    },
}

impl ConflictReport {
    pub fn kind(&self) -> ConflictKind {
        match self {
            ConflictReport::VertexInEdgeInterior { .. } => ConflictKind::VertexInEdgeInterior,
            ConflictReport::EdgeInteriorIntersection { .. } => ConflictKind::EdgeInteriorIntersection,
        }
    }
}

/// Attempt accounting for one drawing call.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TrialStats {
    /// Grid side the returned embedding uses (or the last one tried).
    pub m: u32,
    pub t: u32,
    /// Total embedding attempts across all grid sides.
    pub attempts: u32,
    /// First-moment: conflicts found in failed embeddings. Greedy: candidate
    /// rejections.
    pub conflicts_seen: u64,
    pub elapsed_ms: u64,
    /// `(m, attempts at that m)`, in escalation order.
    pub per_level: Vec<(u32, u32)>,
}

#[derive(Clone, Debug)]
pub struct DrawOutcome {
    pub embedding: Embedding,
    pub stats: TrialStats,
}

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("cannot draw the empty graph")]
    EmptyGraph,
    #[error("grid side {m} cannot hold {needed} distinct points")]
    GridTooSmall { needed: u64, m: u32 },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("attempt budget exhausted after {} attempts (final grid side {})", stats.attempts, stats.m)]
    BudgetExhausted { stats: TrialStats },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ResolvedParams {
    pub m: u32,
    pub t: u32,
}

/// Largest admissible grid side: the geometry kernel caps coordinates at
/// 2^20, so no drawing can use a bigger cube.
pub const MAX_SIDE: u32 = crate::geometry::MAX_COORD as u32;

fn cube(m: u32) -> u64 {
    debug_assert!(m <= MAX_SIDE);
    (m as u64).pow(3)
}

/// Smallest side whose cube holds `points` lattice points.
fn min_side(points: u64) -> u32 {
    let mut m = ((points as f64).cbrt().floor() as u64).max(1);
    while (m as u128).pow(3) < points as u128 {
        m += 1;
    }
    while m > 1 && ((m - 1) as u128).pow(3) >= points as u128 {
        m -= 1;
    }
    m as u32
}

fn ensure_capacity(points: u64, m: u32) -> Result<(), EngineError> {
    if m > MAX_SIDE {
        return Err(EngineError::InvalidParams(format!(
            "grid side {m} exceeds the coordinate cap {MAX_SIDE}"
        )));
    }
    if cube(m) < points {
        return Err(EngineError::GridTooSmall { needed: points, m });
    }
    Ok(())
}

/// Resolves the grid side and blowup size for a drawing call.
///
/// First-moment: `m = ceil(c * ((nk)^(1/3) + k^(2/3) (ln k)^(1/3)))`, raised
/// to the smallest side that can hold `n` points.
///
/// Blowup-greedy: `t = max(ceil(ln n), ceil(D ln D), 1)` and the smallest `m`
/// with `m^3 >= c * D * max(k, n) * ln n` and `m^3 >= n*t`.
pub fn choose_parameters(
    g: &Graph,
    params: &DrawingParams,
    algorithm: Algorithm,
) -> Result<ResolvedParams, EngineError> {
    params.validate()?;
    let n = g.n();
    if n == 0 {
        return Err(EngineError::EmptyGraph);
    }
    let k = g.edge_count();
    match algorithm {
        Algorithm::FirstMoment => {
            let m = if params.m != 0 {
                params.m
            } else {
                let term = if k >= 1 {
                    let nk = n as f64 * k as f64;
                    nk.cbrt() + (k as f64).powf(2.0 / 3.0) * (k as f64).ln().max(0.0).cbrt()
                } else {
                    0.0
                };
                let formula = (params.volume_constant * term).ceil() as u32;
                formula.max(min_side(n as u64))
            };
            ensure_capacity(n as u64, m)?;
            Ok(ResolvedParams { m, t: 1 })
        }
        Algorithm::BlowupGreedy => {
            let degeneracy = g.degeneracy_ordering().degeneracy as f64;
            let t = if params.t != 0 {
                params.t
            } else {
                let from_n = (n as f64).ln().ceil() as u32;
                let from_d = if degeneracy > 1.0 {
                    (degeneracy * degeneracy.ln()).ceil() as u32
                } else {
                    0
                };
                from_n.max(from_d).max(1)
            };
            let blowup_points = n as u64 * t as u64;
            let m = if params.m != 0 {
                params.m
            } else {
                let volume =
                    params.volume_constant * degeneracy * k.max(n) as f64 * (n as f64).ln();
                min_side((volume.ceil() as u64).max(blowup_points))
            };
            ensure_capacity(blowup_points, m)?;
            Ok(ResolvedParams { m, t })
        }
    }
}

/// Uniform injective placement of `vertex_count` vertices in `[m]^3`.
///
/// For sparse occupancy this rejection-samples lattice points against the
/// used set; past half occupancy it partially shuffles the full point list.
/// Both paths sample the uniform distribution over injective placements.
pub fn random_embedding(
    vertex_count: usize,
    m: u32,
    rng: &mut impl Rng,
) -> Result<Embedding, EngineError> {
    ensure_capacity(vertex_count as u64, m)?;
    let total = cube(m);
    let decode = |idx: u64| {
        let m = m as u64;
        GridPoint::new((idx % m) as i64, ((idx / m) % m) as i64, (idx / (m * m)) as i64)
    };
    let points = if (vertex_count as u64) * 2 <= total {
        let mut used = HashSet::with_capacity(vertex_count);
        let mut points = Vec::with_capacity(vertex_count);
        while points.len() < vertex_count {
            let idx = rng.random_range(0..total);
            if used.insert(idx) {
                points.push(decode(idx));
            }
        }
        points
    } else {
        let mut all: Vec<u64> = (0..total).collect();
        for i in 0..vertex_count {
            let j = rng.random_range(i..all.len());
            all.swap(i, j);
        }
        all[..vertex_count].iter().map(|&idx| decode(idx)).collect()
    };
    Ok(Embedding { m, points })
}

/// Complete conflict scan of a drawn graph: every edge pair sharing a point
/// interior to at least one of them, and every vertex strictly inside a
/// non-incident edge. Empty iff the embedding is a grid-drawing of `g`.
///
/// The embedding must place every vertex of `g` on a distinct point.
pub fn find_conflicts(g: &Graph, emb: &Embedding) -> Vec<ConflictReport> {
    debug_assert_eq!(emb.n(), g.n(), "embedding size mismatch");
    debug_assert!(
        emb.points.iter().collect::<HashSet<_>>().len() == emb.n(),
        "embedding is not injective"
    );
    let edges = g.edges();
    let segments: Vec<Segment> = edges
        .iter()
        .map(|&(u, v)| Segment::new(emb.point(u), emb.point(v)))
        .collect();
    let mut reports = Vec::new();
    for (i, e) in segments.iter().enumerate() {
        for (j, f) in segments.iter().enumerate().skip(i + 1) {
            if segments_conflict(e, f).is_some() {
                reports.push(ConflictReport::EdgeInteriorIntersection {
                    first: edges[i],
                    second: edges[j],
                });
            }
        }
    }
    for v in 0..g.n() as VertexId {
        let p = emb.point(v);
        for (i, &(a, b)) in edges.iter().enumerate() {
            if v != a && v != b && vertex_edge_conflict(p, &segments[i]) {
                reports.push(ConflictReport::VertexInEdgeInterior { vertex: v, edge: (a, b) });
            }
        }
    }
    reports
}

/// Draws by repeatedly sampling a uniform random embedding and keeping the
/// first conflict-free one. After `attempt_budget` failures the grid side
/// escalates by `growth_factor`, up to `max_escalations` times.
pub fn draw_first_moment(g: &Graph, params: &DrawingParams) -> Result<DrawOutcome, EngineError> {
    let resolved = choose_parameters(g, params, Algorithm::FirstMoment)?;
    let mut rng = ChaCha12Rng::seed_from_u64(params.seed);
    let start = Instant::now();
    let mut m = resolved.m;
    let mut attempts = 0u32;
    let mut conflicts_seen = 0u64;
    let mut per_level: Vec<(u32, u32)> = Vec::new();
    for _ in 0..=params.max_escalations {
        let mut here = 0u32;
        for _ in 0..params.attempt_budget {
            attempts += 1;
            here += 1;
            let embedding = random_embedding(g.n(), m, &mut rng)?;
            let conflicts = find_conflicts(g, &embedding);
            if conflicts.is_empty() {
                per_level.push((m, here));
                let stats = TrialStats {
                    m,
                    t: 1,
                    attempts,
                    conflicts_seen,
                    elapsed_ms: start.elapsed().as_millis() as u64,
                    per_level,
                };
                return Ok(DrawOutcome { embedding, stats });
            }
            conflicts_seen += conflicts.len() as u64;
        }
        per_level.push((m, here));
        m = escalate(m, params.growth_factor);
    }
    Err(EngineError::BudgetExhausted {
        stats: TrialStats {
            m,
            t: 1,
            attempts,
            conflicts_seen,
            elapsed_ms: start.elapsed().as_millis() as u64,
            per_level,
        },
    })
}

/// Draws via the blowup procedure: embed the `t`-blowup at random, then scan
/// the parts in reverse degeneracy order, keeping the first copy of each
/// vertex whose addition leaves the partial drawing conflict-free. A part
/// with no viable candidate restarts the attempt with a fresh blowup
/// embedding; grid-side escalation mirrors `draw_first_moment`.
pub fn draw_blowup_greedy(g: &Graph, params: &DrawingParams) -> Result<DrawOutcome, EngineError> {
    let resolved = choose_parameters(g, params, Algorithm::BlowupGreedy)?;
    let blow = g
        .blowup(resolved.t as usize)
        .expect("resolved t is always positive");
    let mut rng = ChaCha12Rng::seed_from_u64(params.seed);
    let start = Instant::now();
    let mut m = resolved.m;
    let mut attempts = 0u32;
    let mut rejections = 0u64;
    let mut per_level: Vec<(u32, u32)> = Vec::new();
    for _ in 0..=params.max_escalations {
        let mut here = 0u32;
        for _ in 0..params.attempt_budget {
            attempts += 1;
            here += 1;
            let blowup_embedding = random_embedding(blow.graph().n(), m, &mut rng)?;
            if let Some(points) = greedy_select(&blow, &blowup_embedding, &mut rng, &mut rejections)
            {
                let embedding = Embedding { m, points };
                debug_assert!(find_conflicts(g, &embedding).is_empty());
                per_level.push((m, here));
                let stats = TrialStats {
                    m,
                    t: resolved.t,
                    attempts,
                    conflicts_seen: rejections,
                    elapsed_ms: start.elapsed().as_millis() as u64,
                    per_level,
                };
                return Ok(DrawOutcome { embedding, stats });
            }
        }
        per_level.push((m, here));
        m = escalate(m, params.growth_factor);
    }
    Err(EngineError::BudgetExhausted {
        stats: TrialStats {
            m,
            t: resolved.t,
            attempts,
            conflicts_seen: rejections,
            elapsed_ms: start.elapsed().as_millis() as u64,
            per_level,
        },
    })
}

/// One greedy pass over the parts, from the last position of the ordering
/// down to the first. Returns the selected points indexed by original
/// vertex id, or None if some part has no viable candidate.
fn greedy_select(
    blow: &BlowupGraph,
    blowup_embedding: &Embedding,
    rng: &mut ChaCha12Rng,
    rejections: &mut u64,
) -> Option<Vec<GridPoint>> {
    let base = blow.base();
    let ordering = blow.ordering();
    let n = base.n();
    let mut chosen: Vec<Option<GridPoint>> = vec![None; n];
    let mut placed_points: Vec<GridPoint> = Vec::with_capacity(n);
    let mut placed_edges: Vec<Segment> = Vec::with_capacity(base.edge_count());
    let mut candidates: Vec<VertexId> = Vec::with_capacity(blow.t());
    let mut new_edges: Vec<Segment> = Vec::new();
    for pos in (0..n).rev() {
        let v = ordering.order[pos];
        // endpoints already placed: neighbors of v later in the ordering
        let neighbor_points: Vec<GridPoint> = base
            .neighbors(v)
            .iter()
            .filter_map(|&u| {
                let pu = ordering.position[u as usize] as usize;
                if pu > pos {
                    chosen[pu]
                } else {
                    None
                }
            })
            .collect();
        candidates.clear();
        candidates.extend_from_slice(&blow.parts()[pos]);
        candidates.shuffle(rng);
        let mut selected = None;
        'candidates: for &w in candidates.iter() {
            let p = blowup_embedding.point(w);
            new_edges.clear();
            new_edges.extend(neighbor_points.iter().map(|&q| Segment::new(p, q)));
            for e in &new_edges {
                for f in &placed_edges {
                    if segments_conflict(e, f).is_some() {
                        *rejections += 1;
                        continue 'candidates;
                    }
                }
                for &x in &placed_points {
                    if !e.has_endpoint(x) && strictly_between(x, e.a(), e.b()) {
                        *rejections += 1;
                        continue 'candidates;
                    }
                }
            }
            for (i, e) in new_edges.iter().enumerate() {
                for f in &new_edges[i + 1..] {
                    if segments_conflict(e, f).is_some() {
                        *rejections += 1;
                        continue 'candidates;
                    }
                }
            }
            for f in &placed_edges {
                if strictly_between(p, f.a(), f.b()) {
                    *rejections += 1;
                    continue 'candidates;
                }
            }
            selected = Some(p);
            break;
        }
        let p = selected?;
        chosen[pos] = Some(p);
        placed_points.push(p);
        placed_edges.append(&mut new_edges);
    }
    let mut points = vec![GridPoint::new(0, 0, 0); n];
    for pos in 0..n {
        points[ordering.order[pos] as usize] = chosen[pos].expect("every part selected");
    }
    Some(points)
}

fn escalate(m: u32, growth_factor: f64) -> u32 {
    let grown = (m as f64 * growth_factor).ceil() as u32;
    grown.max(m + 1).min(MAX_SIDE)
}
