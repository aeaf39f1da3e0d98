//! Independent oracles for the acceptance suite. Everything here reproves
//! the library's answers by a different route: exact rational parametric
//! intersection instead of integer sign tests, direction-normalization
//! instead of cross products, rational rank instead of determinants. None
//! of it calls into the engine's conflict detection.

// each integration test compiles this module separately and uses a subset
#![allow(dead_code)]

use std::collections::BTreeSet;

use num_rational::Ratio;

use gridweave::engine::{ConflictReport, Embedding};
use gridweave::graph::{Graph, VertexId};

type Q = Ratio<i128>;

fn q(v: i64) -> Q {
    Ratio::from_integer(v as i128)
}

/// Exact-rational parametric classification of two segments: solve
/// `a + s(b-a) = c + u(d-c)` over the rationals by Gauss-Jordan elimination
/// and decide whether the segments share a point interior to at least one.
pub fn oracle_segments_conflict(a: [i64; 3], b: [i64; 3], c: [i64; 3], d: [i64; 3]) -> bool {
    assert_ne!(a, b, "degenerate first segment");
    assert_ne!(c, d, "degenerate second segment");
    let zero = q(0);
    let one = q(1);
    let d1: Vec<Q> = (0..3).map(|i| q(b[i] - a[i])).collect();
    let d2: Vec<Q> = (0..3).map(|i| q(d[i] - c[i])).collect();
    let r: Vec<Q> = (0..3).map(|i| q(c[i] - a[i])).collect();
    // augmented rows of the 3x2 system [d1 | -d2 | r]
    let mut rows: Vec<[Q; 3]> = (0..3).map(|i| [d1[i], -d2[i], r[i]]).collect();
    let mut rank = 0usize;
    for col in 0..2 {
        if let Some(pivot_row) = (rank..3).find(|&i| rows[i][col] != zero) {
            rows.swap(rank, pivot_row);
            let pivot = rows[rank][col];
            for x in rows[rank].iter_mut() {
                *x /= pivot;
            }
            let pivot_row = rows[rank];
            for (i, row) in rows.iter_mut().enumerate() {
                if i != rank && row[col] != zero {
                    let factor = row[col];
                    for (x, p) in row.iter_mut().zip(pivot_row) {
                        *x -= factor * p;
                    }
                }
            }
            rank += 1;
        }
    }
    // inconsistent system: skew lines or parallel distinct lines
    for row in rows.iter().skip(rank) {
        if row[2] != zero {
            return false;
        }
    }
    if rank == 2 {
        let s = rows[0][2];
        let u = rows[1][2];
        if s < zero || s > one || u < zero || u > one {
            return false;
        }
        // single common point: conflict iff interior to at least one segment
        return (s > zero && s < one) || (u > zero && u < one);
    }
    // rank 1 and consistent: the same line; compare parameter intervals
    let axis = (0..3).find(|&i| d1[i] != zero).expect("nondegenerate");
    let tc = r[axis] / d1[axis];
    let td = (r[axis] + d2[axis]) / d1[axis];
    let (c_lo, c_hi) = if tc <= td { (tc, td) } else { (td, tc) };
    let lo = if c_lo > zero { c_lo } else { zero };
    let hi = if c_hi < one { c_hi } else { one };
    if lo > hi {
        return false;
    }
    if lo < hi {
        return true;
    }
    // single shared parameter value
    let t = lo;
    if t > zero && t < one {
        return true;
    }
    let u = (t - tc) / (td - tc);
    u > zero && u < one
}

/// Rational betweenness: is `p` strictly inside segment `ab`? Decided by a
/// per-axis parameter consistency check, not cross products.
pub fn oracle_point_inside(p: [i64; 3], a: [i64; 3], b: [i64; 3]) -> bool {
    assert_ne!(a, b, "degenerate segment");
    let zero = q(0);
    let one = q(1);
    let mut t: Option<Q> = None;
    for i in 0..3 {
        let den = b[i] - a[i];
        let num = p[i] - a[i];
        if den == 0 {
            if num != 0 {
                return false;
            }
        } else {
            let ti = Ratio::new(num as i128, den as i128);
            match t {
                None => t = Some(ti),
                Some(prev) if prev != ti => return false,
                Some(_) => {}
            }
        }
    }
    let t = t.expect("segment nondegenerate");
    t > zero && t < one
}

fn coords(emb: &Embedding, v: VertexId) -> [i64; 3] {
    emb.point(v).into()
}

/// Naive double-loop conflict detection built entirely on the rational
/// oracles above.
pub fn naive_conflict_set(g: &Graph, emb: &Embedding) -> BTreeSet<ConflictReport> {
    let mut out = BTreeSet::new();
    let edges = g.edges();
    for (i, &(a, b)) in edges.iter().enumerate() {
        for &(c, d) in &edges[i + 1..] {
            if oracle_segments_conflict(
                coords(emb, a),
                coords(emb, b),
                coords(emb, c),
                coords(emb, d),
            ) {
                out.insert(ConflictReport::EdgeInteriorIntersection {
                    first: (a, b),
                    second: (c, d),
                });
            }
        }
    }
    for v in 0..g.n() as VertexId {
        for &(a, b) in edges {
            if v != a && v != b && oracle_point_inside(coords(emb, v), coords(emb, a), coords(emb, b))
            {
                out.insert(ConflictReport::VertexInEdgeInterior { vertex: v, edge: (a, b) });
            }
        }
    }
    out
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

/// Direction normalized to its canonical primitive form; two point pairs are
/// collinear through a common anchor iff their normalized directions match.
fn normalized_direction(from: [i64; 3], to: [i64; 3]) -> [i64; 3] {
    let d = [to[0] - from[0], to[1] - from[1], to[2] - from[2]];
    let g = gcd(gcd(d[0], d[1]), d[2]);
    assert!(g > 0, "coincident points");
    let mut n = [d[0] / g, d[1] / g, d[2] / g];
    let lead = n.iter().find(|&&c| c != 0).copied().unwrap();
    if lead < 0 {
        n = [-n[0], -n[1], -n[2]];
    }
    n
}

fn box_points(d: u32, m: i64) -> Vec<[i64; 3]> {
    let mut pts = Vec::new();
    for x in 0..m {
        for y in 0..m {
            if d == 2 {
                pts.push([x, y, 0]);
            } else {
                for z in 0..m {
                    pts.push([x, y, z]);
                }
            }
        }
    }
    pts
}

/// Collinear 3-subsets by literal combination enumeration with
/// direction-normalization equality (no cross products).
pub fn brute_collinear_triples(d: u32, m: i64) -> u64 {
    let pts = box_points(d, m);
    let n = pts.len();
    let mut count = 0;
    for i in 0..n {
        for j in i + 1..n {
            let dir = normalized_direction(pts[i], pts[j]);
            for l in j + 1..n {
                if normalized_direction(pts[i], pts[l]) == dir {
                    count += 1;
                }
            }
        }
    }
    count
}

/// Rank over the rationals of a small set of integer vectors.
fn rational_rank(vectors: &[[i64; 3]]) -> usize {
    let zero = q(0);
    let mut rows: Vec<[Q; 3]> = vectors
        .iter()
        .map(|v| [q(v[0]), q(v[1]), q(v[2])])
        .collect();
    let mut rank = 0;
    for col in 0..3 {
        if let Some(p) = (rank..rows.len()).find(|&i| rows[i][col] != zero) {
            rows.swap(rank, p);
            let pivot = rows[rank][col];
            for x in rows[rank].iter_mut() {
                *x /= pivot;
            }
            let pivot_row = rows[rank];
            for (i, row) in rows.iter_mut().enumerate() {
                if i != rank && row[col] != zero {
                    let f = row[col];
                    for (x, p) in row.iter_mut().zip(pivot_row) {
                        *x -= f * p;
                    }
                }
            }
            rank += 1;
        }
    }
    rank
}

/// Coplanar 4-subsets by combination enumeration with a rational rank test.
pub fn brute_coplanar_4sets(m: i64) -> u64 {
    let pts = box_points(3, m);
    let n = pts.len();
    let mut count = 0;
    for i in 0..n {
        for j in i + 1..n {
            for l in j + 1..n {
                for s in l + 1..n {
                    let diffs: Vec<[i64; 3]> = [pts[j], pts[l], pts[s]]
                        .iter()
                        .map(|p| [p[0] - pts[i][0], p[1] - pts[i][1], p[2] - pts[i][2]])
                        .collect();
                    if rational_rank(&diffs) <= 2 {
                        count += 1;
                    }
                }
            }
        }
    }
    count
}

/// 3-subsets coplanar with the origin, by rational rank of the points
/// themselves.
pub fn brute_origin_coplanar_triples(m: i64) -> u64 {
    let pts = box_points(3, m);
    let n = pts.len();
    let mut count = 0;
    for i in 0..n {
        for j in i + 1..n {
            for l in j + 1..n {
                if rational_rank(&[pts[i], pts[j], pts[l]]) <= 2 {
                    count += 1;
                }
            }
        }
    }
    count
}
