//! Independent validation that a (graph, embedding) pair is a grid-drawing.
//!
//! The verifier re-walks every vertex/edge pair and every edge pair with
//! plain nested loops and no incremental shortcuts, on purpose: it shares
//! only the exact geometric predicates with the drawing engine, so an engine
//! bookkeeping bug cannot certify its own output. It also audits the
//! embedding itself (placement count, grid range, distinctness) before any
//! geometry runs, making it usable on third-party drawings.

use std::collections::HashMap;

use serde::Serialize;
use thiserror::Error;

use crate::engine::{ConflictReport, Embedding};
use crate::geometry::{segments_conflict, vertex_edge_conflict, GridPoint, Segment};
use crate::graph::{Graph, VertexId};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum VerifyError {
    #[error("embedding places {found} vertices, graph has {expected}")]
    PlacementCountMismatch { expected: usize, found: usize },
    #[error("grid side {m} exceeds the coordinate cap {cap}")]
    GridTooLarge { m: u32, cap: i64 },
    #[error("vertex {vertex} at {point:?} lies outside [0, {m})^3")]
    OutOfGrid { vertex: VertexId, point: [i64; 3], m: u32 },
    #[error("vertices {first} and {second} share the point {point:?}")]
    DuplicatePoint { first: VertexId, second: VertexId, point: [i64; 3] },
}

/// Size and shape measurements of a drawing.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DrawingStats {
    /// Grid volume `m^3`.
    pub volume: u64,
    /// Longest over shortest side of the tight bounding box of the points,
    /// where a side counts lattice planes: `max - min + 1` per axis.
    pub aspect_ratio: f64,
    pub max_abs_coordinate: i64,
    pub edge_count: usize,
    /// Whether `k <= 8 * volume` holds; true for every valid drawing.
    pub edge_bound_ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationVerdict {
    pub valid: bool,
    pub violations: Vec<ConflictReport>,
    pub stats: DrawingStats,
}

/// Exhaustively audits a drawing: embedding well-formedness first, then the
/// two grid-drawing conditions over all pairs.
pub fn verify_drawing(g: &Graph, emb: &Embedding) -> Result<VerificationVerdict, VerifyError> {
    if emb.n() != g.n() {
        return Err(VerifyError::PlacementCountMismatch { expected: g.n(), found: emb.n() });
    }
    if emb.m as i64 > crate::geometry::MAX_COORD {
        return Err(VerifyError::GridTooLarge { m: emb.m, cap: crate::geometry::MAX_COORD });
    }
    let m = emb.m as i64;
    let mut seen: HashMap<GridPoint, VertexId> = HashMap::with_capacity(emb.n());
    for v in 0..g.n() as VertexId {
        let p = emb.point(v);
        if [p.x, p.y, p.z].iter().any(|&c| c < 0 || c >= m) {
            return Err(VerifyError::OutOfGrid { vertex: v, point: p.into(), m: emb.m });
        }
        if let Some(&first) = seen.get(&p) {
            return Err(VerifyError::DuplicatePoint { first, second: v, point: p.into() });
        }
        seen.insert(p, v);
    }

    let mut violations = Vec::new();
    // condition (i): no vertex strictly inside a non-incident edge
    for v in 0..g.n() as VertexId {
        for &(a, b) in g.edges() {
            if v == a || v == b {
                continue;
            }
            let segment = Segment::new(emb.point(a), emb.point(b));
            if vertex_edge_conflict(emb.point(v), &segment) {
                violations.push(ConflictReport::VertexInEdgeInterior { vertex: v, edge: (a, b) });
            }
        }
    }
    // condition (ii): no two edges share a point interior to either
    let edges = g.edges();
    for i in 0..edges.len() {
        let e = Segment::new(emb.point(edges[i].0), emb.point(edges[i].1));
        for &(c, d) in &edges[i + 1..] {
            let f = Segment::new(emb.point(c), emb.point(d));
            if segments_conflict(&e, &f).is_some() {
                violations.push(ConflictReport::EdgeInteriorIntersection {
                    first: edges[i],
                    second: (c, d),
                });
            }
        }
    }
    Ok(VerificationVerdict {
        valid: violations.is_empty(),
        violations,
        stats: drawing_stats(emb, g),
    })
}

/// Volume, tight-bounding-box aspect ratio, and the edge-count sanity bound.
pub fn drawing_stats(emb: &Embedding, g: &Graph) -> DrawingStats {
    let volume = (emb.m as u64).pow(3);
    let k = g.edge_count();
    let mut max_abs = 0i64;
    let mut aspect = 1.0;
    if !emb.points.is_empty() {
        let mut lo = [i64::MAX; 3];
        let mut hi = [i64::MIN; 3];
        for p in &emb.points {
            let c: [i64; 3] = (*p).into();
            for axis in 0..3 {
                lo[axis] = lo[axis].min(c[axis]);
                hi[axis] = hi[axis].max(c[axis]);
                max_abs = max_abs.max(c[axis].abs());
            }
        }
        let sides: Vec<i64> = (0..3).map(|a| hi[a] - lo[a] + 1).collect();
        let longest = *sides.iter().max().unwrap() as f64;
        let shortest = *sides.iter().min().unwrap() as f64;
        aspect = longest / shortest;
    }
    DrawingStats {
        volume,
        aspect_ratio: aspect,
        max_abs_coordinate: max_abs,
        edge_count: k,
        edge_bound_ok: k as u64 <= 8 * volume,
    }
}
