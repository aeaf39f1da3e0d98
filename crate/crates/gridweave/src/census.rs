//! Brute-force and enumeration-based lattice censuses: collinear k-subsets,
//! coplanar subsets, and hyperplane point counts with their bound checks.
//!
//! All counts are of UNORDERED sets of distinct points (multiply by k! for
//! ordered tuples). Each census offers two independent strategies where
//! practical, so they can cross-check each other exactly. Operations
//! estimate their work up front and refuse infeasible requests instead of
//! running for hours.

use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CensusError {
    #[error("refusing census: roughly {estimated_ops} inner operations exceed the {limit} limit")]
    Infeasible { estimated_ops: u128, limit: u128 },
    #[error("unsupported dimension {0}: this kernel handles d = 2 and d = 3")]
    UnsupportedDimension(usize),
    #[error("parameter out of range: {0}")]
    BadParameter(String),
    #[error("normal vector is not primitive (zero, or gcd of entries != 1)")]
    NotPrimitive,
    #[error("grid side m = {m} is smaller than s = {s}")]
    GridSmallerThanS { m: u32, s: i64 },
    #[error("growth fit needs at least 3 points with positive counts, got {0}")]
    NotEnoughPoints(usize),
}

/// Upper bound on inner-loop operations a single census call may perform.
const WORK_LIMIT: u128 = 2_000_000_000;

/// What a census counted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CensusKind {
    CollinearKSets { k: u32 },
    CoplanarOriginTriples,
    CoplanarFourSets,
    HyperplaneCount { normal: Vec<i64> },
}

impl std::fmt::Display for CensusKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CensusKind::CollinearKSets { .. } => write!(f, "collinear"),
            CensusKind::CoplanarOriginTriples => write!(f, "coplanar-origin-triples"),
            CensusKind::CoplanarFourSets => write!(f, "coplanar-4sets"),
            CensusKind::HyperplaneCount { normal } => {
                let coords: Vec<String> = normal.iter().map(|c| c.to_string()).collect();
                write!(f, "hyperplane[{}]", coords.join(" "))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusResult {
    pub d: u32,
    pub m: u32,
    pub kind: CensusKind,
    pub count: u64,
}

/// Counting strategy selector. `Auto` picks the cheaper exact strategy.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    Auto,
    /// Direct scan organized by the smallest member pair/triple of each
    /// subset; cost grows like a power of the full point count.
    BruteForce,
    /// Enumeration of primitive directions / distinct planes, summing
    /// per-line (per-plane) binomials.
    Enumeration,
}

type Pt = [i64; 3];

fn grid_points(d: u32, m: u32) -> Vec<Pt> {
    let m = m as i64;
    let mut pts = Vec::new();
    match d {
        2 => {
            for x in 0..m {
                for y in 0..m {
                    pts.push([x, y, 0]);
                }
            }
        }
        3 => {
            for x in 0..m {
                for y in 0..m {
                    for z in 0..m {
                        pts.push([x, y, z]);
                    }
                }
            }
        }
        _ => unreachable!("dimension checked by callers"),
    }
    pts
}

#[inline]
fn sub(a: Pt, b: Pt) -> Pt {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

#[inline]
fn cross(a: Pt, b: Pt) -> Pt {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

#[inline]
fn dot(a: Pt, b: Pt) -> i64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[inline]
fn is_zero(a: Pt) -> bool {
    a == [0, 0, 0]
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

fn gcd3(v: Pt) -> i64 {
    gcd(gcd(v[0], v[1]), v[2])
}

/// Scales to the canonical primitive representative: entries divided by
/// their gcd, sign fixed so the first nonzero entry is positive.
fn primitive(v: Pt) -> Pt {
    let g = gcd3(v);
    debug_assert!(g > 0);
    let mut p = [v[0] / g, v[1] / g, v[2] / g];
    let lead = p.iter().find(|&&c| c != 0).copied().unwrap_or(0);
    if lead < 0 {
        p = [-p[0], -p[1], -p[2]];
    }
    p
}

fn binomial(n: u64, k: u32) -> u64 {
    let k = k as u64;
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as u64
}

fn ensure_feasible(estimated_ops: u128) -> Result<(), CensusError> {
    if estimated_ops > WORK_LIMIT {
        return Err(CensusError::Infeasible { estimated_ops, limit: WORK_LIMIT });
    }
    Ok(())
}

fn check_dim(d: u32) -> Result<(), CensusError> {
    if d == 2 || d == 3 {
        Ok(())
    } else {
        Err(CensusError::UnsupportedDimension(d as usize))
    }
}

/// Number of unordered k-subsets of distinct points of `[m]^d` lying on a
/// common line.
pub fn count_collinear_ksets(d: u32, k: u32, m: u32, strategy: Strategy) -> Result<CensusResult, CensusError> {
    check_dim(d)?;
    if k < 2 {
        return Err(CensusError::BadParameter(format!("k must be >= 2, got {k}")));
    }
    if m < 1 {
        return Err(CensusError::BadParameter("m must be >= 1".into()));
    }
    let n_points = (m as u128).pow(d);
    let count = match strategy {
        Strategy::Auto | Strategy::Enumeration => {
            ensure_feasible((2 * m as u128).pow(d) * n_points)?;
            collinear_by_lines(d, k, m)
        }
        Strategy::BruteForce => {
            ensure_feasible(n_points.pow(3) / 2)?;
            collinear_by_scan(d, k, m)
        }
    };
    Ok(CensusResult { d, m, kind: CensusKind::CollinearKSets { k }, count })
}

/// Direct scan: every k-subset is counted once via its two smallest point
/// indices; the remaining members are found on their line by brute check.
fn collinear_by_scan(d: u32, k: u32, m: u32) -> u64 {
    let pts = grid_points(d, m);
    let n = pts.len();
    if k == 2 {
        return binomial(n as u64, 2);
    }
    (0..n)
        .into_par_iter()
        .map(|i| {
            let mut acc = 0u64;
            for j in i + 1..n {
                let dir = sub(pts[j], pts[i]);
                let mut on_line = 0u64;
                for l in j + 1..n {
                    if is_zero(cross(dir, sub(pts[l], pts[i]))) {
                        on_line += 1;
                    }
                }
                acc += binomial(on_line, k - 2);
            }
            acc
        })
        .sum()
}

/// Canonical primitive directions with all entries below `m` in magnitude.
fn primitive_directions(d: u32, m: u32) -> Vec<Pt> {
    let r = m as i64 - 1;
    let mut dirs = Vec::new();
    let zs: Vec<i64> = if d == 3 { (-r..=r).collect() } else { vec![0] };
    for x in -r..=r {
        for y in -r..=r {
            for &z in &zs {
                let v = [x, y, z];
                if is_zero(v) {
                    continue;
                }
                let lead = v.iter().find(|&&c| c != 0).copied().unwrap();
                if lead < 0 {
                    continue;
                }
                if gcd3(v) == 1 {
                    dirs.push(v);
                }
            }
        }
    }
    dirs
}

/// Line enumeration mirroring the direction-counting structure: every
/// maximal lattice progression in the box is visited exactly once (its step
/// is the primitive direction of its line), contributing C(c, k).
fn collinear_by_lines(d: u32, k: u32, m: u32) -> u64 {
    let mi = m as i64;
    let in_box = |p: Pt| -> bool {
        p[0] >= 0 && p[0] < mi && p[1] >= 0 && p[1] < mi && p[2] >= 0 && p[2] < mi && (d == 3 || p[2] == 0)
    };
    let pts = grid_points(d, m);
    primitive_directions(d, m)
        .par_iter()
        .map(|&v| {
            let mut acc = 0u64;
            for &p in &pts {
                // only walk from the first point of each maximal progression
                if in_box(sub(p, v)) {
                    continue;
                }
                let mut c = 0u64;
                let mut q = p;
                while in_box(q) {
                    c += 1;
                    q = [q[0] + v[0], q[1] + v[1], q[2] + v[2]];
                }
                acc += binomial(c, k);
            }
            acc
        })
        .sum()
}

/// Number of unordered 3-subsets `{p, q, r}` of distinct points of `[m]^3`
/// with `det(p, q, r) = 0`, i.e. coplanar with the origin.
pub fn count_coplanar_origin_triples(m: u32) -> Result<CensusResult, CensusError> {
    if m < 1 {
        return Err(CensusError::BadParameter("m must be >= 1".into()));
    }
    let n = (m as u128).pow(3);
    ensure_feasible(n * (n - 1) * (n.saturating_sub(2).max(1)) / 6)?;
    let pts = grid_points(3, m);
    let n = pts.len();
    let count: u64 = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut acc = 0u64;
            for j in i + 1..n {
                let c = cross(pts[i], pts[j]);
                if is_zero(c) {
                    // p_i and p_j are collinear with the origin: every third
                    // point closes a (degenerate) coplanar triple
                    acc += (n - j - 1) as u64;
                    continue;
                }
                for pl in &pts[j + 1..] {
                    if dot(c, *pl) == 0 {
                        acc += 1;
                    }
                }
            }
            acc
        })
        .sum();
    Ok(CensusResult { d: 3, m, kind: CensusKind::CoplanarOriginTriples, count })
}

/// Number of unordered 4-subsets of distinct points of `[m]^3` lying on a
/// common plane.
pub fn count_coplanar_4sets(m: u32, strategy: Strategy) -> Result<CensusResult, CensusError> {
    if m < 1 {
        return Err(CensusError::BadParameter("m must be >= 1".into()));
    }
    let n = (m as u128).pow(3);
    let count = match strategy {
        Strategy::BruteForce => {
            ensure_feasible(n.pow(4) / 24)?;
            coplanar4_by_scan(m)
        }
        Strategy::Auto | Strategy::Enumeration => {
            ensure_feasible(n.pow(3) / 6 + n.pow(2))?;
            coplanar4_by_planes(m)
        }
    };
    Ok(CensusResult { d: 3, m, kind: CensusKind::CoplanarFourSets, count })
}

/// Direct scan: every 4-subset is counted once via its three smallest
/// indices plus a determinant test for each later point.
fn coplanar4_by_scan(m: u32) -> u64 {
    let pts = grid_points(3, m);
    let n = pts.len();
    (0..n)
        .into_par_iter()
        .map(|i| {
            let mut acc = 0u64;
            for j in i + 1..n {
                let u = sub(pts[j], pts[i]);
                for l in j + 1..n {
                    let normal = cross(u, sub(pts[l], pts[i]));
                    if is_zero(normal) {
                        // collinear triple: any fourth point is coplanar
                        acc += (n - l - 1) as u64;
                        continue;
                    }
                    for s in &pts[l + 1..] {
                        if dot(normal, sub(*s, pts[i])) == 0 {
                            acc += 1;
                        }
                    }
                }
            }
            acc
        })
        .sum()
}

/// Plane enumeration: distinct planes are discovered through their
/// noncollinear triples; each contributes its 4-subsets minus the ones that
/// are collinear inside it (those span a line, not the plane, and are added
/// back once globally from the line census).
fn coplanar4_by_planes(m: u32) -> u64 {
    use std::collections::{HashMap, HashSet};
    let pts = grid_points(3, m);
    let n = pts.len();

    // all distinct planes spanned by noncollinear point triples
    let mut planes: HashSet<(Pt, i64)> = HashSet::new();
    for i in 0..n {
        for j in i + 1..n {
            let u = sub(pts[j], pts[i]);
            for l in j + 1..n {
                let normal = cross(u, sub(pts[l], pts[i]));
                if is_zero(normal) {
                    continue;
                }
                let a = primitive(normal);
                planes.insert((a, dot(a, pts[i])));
            }
        }
    }

    let spanning: u64 = planes
        .par_iter()
        .map(|&(a, off)| {
            let members: Vec<Pt> = pts.iter().copied().filter(|&p| dot(a, p) == off).collect();
            let c = members.len() as u64;
            if c < 4 {
                return 0;
            }
            // collinear 4-subsets inside this plane, grouped by line
            let mut pair_counts: HashMap<(Pt, Pt), u64> = HashMap::new();
            for (x, &p) in members.iter().enumerate() {
                for &q in &members[x + 1..] {
                    let dir = primitive(sub(q, p));
                    // cross(dir, p) identifies the line among those with this direction
                    pair_counts
                        .entry((dir, cross(dir, p)))
                        .and_modify(|e| *e += 1)
                        .or_insert(1);
                }
            }
            let mut collinear_inside = 0u64;
            for &pairs in pair_counts.values() {
                // pairs = C(points_on_line, 2); invert and sum C(points, 4)
                let on_line = int_sqrt(1 + 8 * pairs).div_ceil(2);
                debug_assert_eq!(on_line * (on_line - 1) / 2, pairs);
                collinear_inside += binomial(on_line, 4);
            }
            binomial(c, 4) - collinear_inside
        })
        .sum();

    spanning + collinear_by_lines(3, 4, m)
}

fn int_sqrt(v: u64) -> u64 {
    let mut r = (v as f64).sqrt() as u64;
    while r * r > v {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= v {
        r += 1;
    }
    r
}

/// An integer normal vector with coprime entries, defining a lattice
/// hyperplane through the origin.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimitiveNormal {
    entries: Vec<i64>,
    s: i64,
}

impl PrimitiveNormal {
    pub fn new(entries: Vec<i64>) -> Result<Self, CensusError> {
        check_dim(entries.len() as u32)?;
        if entries.iter().all(|&c| c == 0) {
            return Err(CensusError::NotPrimitive);
        }
        let g = entries.iter().fold(0i64, |acc, &c| gcd(acc, c));
        if g != 1 {
            return Err(CensusError::NotPrimitive);
        }
        let s = entries.iter().map(|c| c.abs()).max().unwrap();
        Ok(PrimitiveNormal { entries, s })
    }

    pub fn entries(&self) -> &[i64] {
        &self.entries
    }

    /// `max_i |a_i|`.
    pub fn s(&self) -> i64 {
        self.s
    }

    pub fn dim(&self) -> u32 {
        self.entries.len() as u32
    }
}

/// Outcome of a hyperplane census: the exact point count, whether the
/// intersection spans a full hyperplane, and (only then) the verdict of the
/// `count <= 3^d m^(d-1) / s` bound, evaluated in exact integer arithmetic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HyperplaneCensus {
    pub result: CensusResult,
    pub s: i64,
    pub spans_hyperplane: bool,
    pub bound_holds: Option<bool>,
}

/// Exact `|{x in [m]^d : a . x = 0}|` by direct scan, plus the bound check.
pub fn hyperplane_count(normal: &PrimitiveNormal, m: u32) -> Result<HyperplaneCensus, CensusError> {
    let d = normal.dim();
    if m < 1 {
        return Err(CensusError::BadParameter("m must be >= 1".into()));
    }
    if (m as i64) < normal.s() {
        return Err(CensusError::GridSmallerThanS { m, s: normal.s() });
    }
    ensure_feasible((m as u128).pow(d))?;
    let mut a = [0i64; 3];
    a[..normal.entries.len()].copy_from_slice(&normal.entries);
    let pts = grid_points(d, m);
    let members: Vec<Pt> = pts.into_iter().filter(|&p| dot(a, p) == 0).collect();
    let count = members.len() as u64;
    let rank = rank_of(&members);
    let spans = rank == d as usize - 1;
    let bound_holds = spans.then(|| {
        // count <= 3^d m^(d-1) / s, compared as count * s <= 3^d m^(d-1)
        (count as u128) * (normal.s() as u128)
            <= 3u128.pow(d) * (m as u128).pow(d - 1)
    });
    Ok(HyperplaneCensus {
        result: CensusResult {
            d,
            m,
            kind: CensusKind::HyperplaneCount { normal: normal.entries.clone() },
            count,
        },
        s: normal.s(),
        spans_hyperplane: spans,
        bound_holds,
    })
}

/// Rank of the span of a set of integer vectors, exact (no rounding).
fn rank_of(points: &[Pt]) -> usize {
    let mut basis: Vec<Pt> = Vec::new();
    for &p in points {
        if is_zero(p) {
            continue;
        }
        let independent = match basis.len() {
            0 => true,
            1 => !is_zero(cross(basis[0], p)),
            2 => dot(cross(basis[0], basis[1]), p) != 0,
            _ => false,
        };
        if independent {
            basis.push(p);
            if basis.len() == 3 {
                break;
            }
        }
    }
    basis.len()
}

/// Least-squares slope of `log(count)` versus `log(m)`.
pub fn fit_growth_exponent(series: &[(u32, u64)]) -> Result<f64, CensusError> {
    let usable: Vec<(f64, f64)> = series
        .iter()
        .filter(|&&(m, c)| m > 0 && c > 0)
        .map(|&(m, c)| ((m as f64).ln(), (c as f64).ln()))
        .collect();
    if usable.len() < 3 {
        return Err(CensusError::NotEnoughPoints(usable.len()));
    }
    let n = usable.len() as f64;
    let mx = usable.iter().map(|p| p.0).sum::<f64>() / n;
    let my = usable.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = usable.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = usable.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    Ok(sxy / sxx)
}
