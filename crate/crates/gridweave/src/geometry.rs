//! Exact integer predicates for points and segments in `Z^3`.
//!
//! Every decision here reduces to the sign of an integer cross product, dot
//! product, or 3x3 determinant evaluated in `i128`, so there is no rounding
//! anywhere. Inputs are capped at `|coordinate| <= 2^20` (see [`MAX_COORD`]);
//! with that cap the widest intermediates (squared cross-product norms) stay
//! below 2^88, comfortably inside `i128`.

/// Largest admissible coordinate magnitude. Asserted by every predicate.
pub const MAX_COORD: i64 = 1 << 20;

/// A lattice point. When attached to an embedding of grid side `m`, all
/// coordinates lie in `[0, m)`; the predicates themselves accept any
/// integers within [`MAX_COORD`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GridPoint {
    pub x: i64,
    pub y: i64,
    pub z: i64,
}

impl GridPoint {
    pub const fn new(x: i64, y: i64, z: i64) -> Self {
        GridPoint { x, y, z }
    }

    pub fn translate(self, dx: i64, dy: i64, dz: i64) -> Self {
        GridPoint::new(self.x + dx, self.y + dy, self.z + dz)
    }
}

impl From<[i64; 3]> for GridPoint {
    fn from(c: [i64; 3]) -> Self {
        GridPoint::new(c[0], c[1], c[2])
    }
}

impl From<GridPoint> for [i64; 3] {
    fn from(p: GridPoint) -> Self {
        [p.x, p.y, p.z]
    }
}

/// A nondegenerate straight-line segment between two lattice points.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Segment {
    a: GridPoint,
    b: GridPoint,
}

impl Segment {
    /// Panics if `a == b`: a segment of a drawing always joins two distinct
    /// vertex positions, so a degenerate segment is a caller bug.
    pub fn new(a: GridPoint, b: GridPoint) -> Self {
        check_range(a);
        check_range(b);
        assert!(a != b, "degenerate segment at {a:?}");
        Segment { a, b }
    }

    pub fn a(&self) -> GridPoint {
        self.a
    }

    pub fn b(&self) -> GridPoint {
        self.b
    }

    pub fn has_endpoint(&self, p: GridPoint) -> bool {
        self.a == p || self.b == p
    }
}

/// The two violation classes of a grid-drawing: an edge passing through a
/// vertex interior, or two edges sharing a point interior to at least one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ConflictKind {
    VertexInEdgeInterior,
    EdgeInteriorIntersection,
}

#[inline]
fn check_range(p: GridPoint) {
    assert!(
        p.x.abs() <= MAX_COORD && p.y.abs() <= MAX_COORD && p.z.abs() <= MAX_COORD,
        "coordinate magnitude exceeds 2^20: {p:?}"
    );
}

type V3 = (i128, i128, i128);

#[inline]
fn diff(p: GridPoint, q: GridPoint) -> V3 {
    (
        (p.x - q.x) as i128,
        (p.y - q.y) as i128,
        (p.z - q.z) as i128,
    )
}

#[inline]
fn cross(u: V3, v: V3) -> V3 {
    (
        u.1 * v.2 - u.2 * v.1,
        u.2 * v.0 - u.0 * v.2,
        u.0 * v.1 - u.1 * v.0,
    )
}

#[inline]
fn dot(u: V3, v: V3) -> i128 {
    u.0 * v.0 + u.1 * v.1 + u.2 * v.2
}

#[inline]
fn is_zero(v: V3) -> bool {
    v.0 == 0 && v.1 == 0 && v.2 == 0
}

/// True iff `p`, `q`, `r` lie on one line. Coincident points count as
/// collinear.
pub fn collinear(p: GridPoint, q: GridPoint, r: GridPoint) -> bool {
    check_range(p);
    check_range(q);
    check_range(r);
    is_zero(cross(diff(q, p), diff(r, p)))
}

/// True iff `q` lies on the open segment `(p, r)`, i.e. on the segment but
/// at neither endpoint. Panics if `p == r`.
pub fn strictly_between(q: GridPoint, p: GridPoint, r: GridPoint) -> bool {
    check_range(q);
    check_range(p);
    check_range(r);
    assert!(p != r, "strictly_between requires distinct anchors, got {p:?}");
    if !is_zero(cross(diff(q, p), diff(r, p))) {
        return false;
    }
    dot(diff(q, p), diff(r, p)) > 0 && dot(diff(q, r), diff(p, r)) > 0
}

/// True iff the four points lie on a common plane: `det(q-p, r-p, s-p) = 0`.
pub fn coplanar(p: GridPoint, q: GridPoint, r: GridPoint, s: GridPoint) -> bool {
    check_range(p);
    check_range(q);
    check_range(r);
    check_range(s);
    let u = diff(q, p);
    let v = diff(r, p);
    let w = diff(s, p);
    dot(cross(u, v), w) == 0
}

/// Decides whether two segments share a point that is interior to at least
/// one of them.
///
/// A shared endpoint alone is not a conflict (two edges of a graph
/// legitimately meet at a common vertex), but a shared endpoint plus any
/// further common point is. T-contacts, where an endpoint of one segment
/// sits in the other's interior, are conflicts: the contact point is
/// interior to one of the two segments.
pub fn segments_conflict(e1: &Segment, e2: &Segment) -> Option<ConflictKind> {
    let (a, b) = (e1.a(), e1.b());
    let (c, d) = (e2.a(), e2.b());
    // Coplanarity screen: skew segments have no common point at all.
    if !coplanar(a, b, c, d) {
        return None;
    }
    let d1 = diff(b, a);
    let d2 = diff(d, c);
    let r = diff(c, a);
    let n = cross(d1, d2);
    if !is_zero(n) {
        // Coplanar, non-parallel lines: exactly one line intersection.
        // Solve a + s*d1 = c + u*d2 with both parameters scaled by |n|^2.
        let den = dot(n, n);
        let s_num = dot(cross(r, d2), n);
        let u_num = dot(cross(r, d1), n);
        if s_num < 0 || s_num > den || u_num < 0 || u_num > den {
            return None;
        }
        let at_endpoint_1 = s_num == 0 || s_num == den;
        let at_endpoint_2 = u_num == 0 || u_num == den;
        if at_endpoint_1 && at_endpoint_2 {
            return None;
        }
        return Some(ConflictKind::EdgeInteriorIntersection);
    }
    // Parallel lines meet only if they are the same line.
    if !is_zero(cross(r, d1)) {
        return None;
    }
    // Same line: compare parameter intervals along d1, scaled by |d1|^2.
    // A single shared parameter value is necessarily an endpoint of both
    // segments; only an overlap of positive length yields interior points.
    let len = dot(d1, d1);
    let tc = dot(r, d1);
    let td = dot(diff(d, a), d1);
    let lo = tc.min(td).max(0);
    let hi = tc.max(td).min(len);
    if lo < hi {
        Some(ConflictKind::EdgeInteriorIntersection)
    } else {
        None
    }
}

/// True iff vertex position `v` lies strictly inside segment `e`. The caller
/// must ensure `v` is not an endpoint of `e`; violating that is a bug in the
/// caller and panics.
pub fn vertex_edge_conflict(v: GridPoint, e: &Segment) -> bool {
    assert!(
        !e.has_endpoint(v),
        "vertex_edge_conflict called with an endpoint of the segment: {v:?}"
    );
    strictly_between(v, e.a(), e.b())
}
