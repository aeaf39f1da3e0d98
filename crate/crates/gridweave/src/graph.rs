//! Simple undirected graphs on dense integer vertex ids, degeneracy
//! orderings, blowup construction, and the graph families used by the
//! experiment harness.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use thiserror::Error;

pub type VertexId = u32;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex id {id} out of range (n = {n})")]
    VertexOutOfRange { id: u64, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(VertexId),
    #[error("duplicate edge {0} {1}")]
    DuplicateEdge(VertexId, VertexId),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("infeasible family parameters: {0}")]
    Infeasible(String),
    #[error("blowup part size t must be at least 1")]
    ZeroBlowupSize,
}

/// A simple undirected graph. Vertices are the ids `0..n`; the edge list is
/// kept normalized (each pair as `(min, max)`, sorted lexicographically) and
/// the adjacency lists mirror it exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(VertexId, VertexId)>,
    adj: Vec<Vec<VertexId>>,
}

impl Graph {
    /// Builds a graph from an edge list, rejecting self-loops, duplicate
    /// edges (in either orientation), and out-of-range endpoints.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (VertexId, VertexId)>) -> Result<Self, GraphError> {
        let mut normalized: Vec<(VertexId, VertexId)> = Vec::new();
        let mut seen = BTreeSet::new();
        for (u, v) in edges {
            if u as usize >= n {
                return Err(GraphError::VertexOutOfRange { id: u as u64, n });
            }
            if v as usize >= n {
                return Err(GraphError::VertexOutOfRange { id: v as u64, n });
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            let e = (u.min(v), u.max(v));
            if !seen.insert(e) {
                return Err(GraphError::DuplicateEdge(e.0, e.1));
            }
            normalized.push(e);
        }
        normalized.sort_unstable();
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &normalized {
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(Graph { n, edges: normalized, adj })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Normalized edge list: `(min, max)` pairs in lexicographic order.
    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.adj[v as usize]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adj[v as usize].len()
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.adj[u as usize].binary_search(&v).is_ok()
    }

    /// Parses the edge-list text format: a header line `n k` followed by
    /// exactly `k` lines `u v`. Blank lines are not allowed; every problem is
    /// reported with its 1-based line number.
    pub fn parse(text: &str) -> Result<Self, GraphError> {
        // keeps a corrupt header from driving a giant allocation
        const MAX_DECLARED: u64 = 10_000_000;
        let mut lines = text.lines();
        let header = lines.next().ok_or(GraphError::Parse {
            line: 1,
            message: "missing header line \"n k\"".into(),
        })?;
        let (n, k) = parse_pair(header, 1, "header \"n k\"")?;
        if n > MAX_DECLARED || k > MAX_DECLARED {
            return Err(GraphError::Parse {
                line: 1,
                message: format!("header declares {n} vertices / {k} edges; limit is {MAX_DECLARED}"),
            });
        }
        let n = n as usize;
        let mut edges = Vec::with_capacity((k as usize).min(1 << 20));
        let mut seen = BTreeSet::new();
        for i in 0..k as usize {
            let line_no = i + 2;
            let line = lines.next().ok_or(GraphError::Parse {
                line: line_no,
                message: format!("expected {k} edge lines, found {i}"),
            })?;
            let (u, v) = parse_pair(line, line_no, "edge \"u v\"")?;
            if u as usize >= n || v as usize >= n {
                return Err(GraphError::Parse {
                    line: line_no,
                    message: GraphError::VertexOutOfRange { id: u.max(v), n }.to_string(),
                });
            }
            let (u, v) = (u as VertexId, v as VertexId);
            if u == v {
                return Err(GraphError::Parse {
                    line: line_no,
                    message: GraphError::SelfLoop(u).to_string(),
                });
            }
            let e = (u.min(v), u.max(v));
            if !seen.insert(e) {
                return Err(GraphError::Parse {
                    line: line_no,
                    message: GraphError::DuplicateEdge(e.0, e.1).to_string(),
                });
            }
            edges.push(e);
        }
        for (off, extra) in lines.enumerate() {
            if !extra.trim().is_empty() {
                return Err(GraphError::Parse {
                    line: k as usize + 2 + off,
                    message: format!("trailing content after {k} edges: {extra:?}"),
                });
            }
        }
        Graph::new(n, edges)
    }

    /// Serializes to the same edge-list format `parse` reads, with edges in
    /// lexicographic order. `parse(to_edge_list(g)) == g` exactly, and this
    /// string is the canonical form hashed into embedding files.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} {}", self.n, self.edges.len());
        for &(u, v) in &self.edges {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }

    /// Minimum-degree peeling order with smallest-id tie-breaking.
    ///
    /// The reported `degeneracy` is the maximum over the peeling sequence of
    /// the minimum degree at removal time, which equals the true degeneracy
    /// of the graph; each vertex has at most that many neighbors later in
    /// the order.
    pub fn degeneracy_ordering(&self) -> DegeneracyOrdering {
        let mut deg: Vec<u32> = (0..self.n).map(|v| self.adj[v].len() as u32).collect();
        let mut alive = vec![true; self.n];
        // (degree, id) pairs; iteration order gives min degree, then min id.
        let mut queue: BTreeSet<(u32, VertexId)> =
            (0..self.n).map(|v| (deg[v], v as VertexId)).collect();
        let mut order = Vec::with_capacity(self.n);
        let mut degeneracy = 0;
        while let Some(&(d, v)) = queue.iter().next() {
            queue.remove(&(d, v));
            alive[v as usize] = false;
            degeneracy = degeneracy.max(d);
            order.push(v);
            for &u in &self.adj[v as usize] {
                if alive[u as usize] {
                    queue.remove(&(deg[u as usize], u));
                    deg[u as usize] -= 1;
                    queue.insert((deg[u as usize], u));
                }
            }
        }
        let mut position = vec![0u32; self.n];
        for (i, &v) in order.iter().enumerate() {
            position[v as usize] = i as u32;
        }
        DegeneracyOrdering { order, position, degeneracy }
    }

    /// The `t`-blowup: each vertex becomes an independent set of `t` copies,
    /// each edge a complete bipartite bundle between the two sets. Parts are
    /// indexed by position in the degeneracy ordering of `self`.
    pub fn blowup(&self, t: usize) -> Result<BlowupGraph, GraphError> {
        if t == 0 {
            return Err(GraphError::ZeroBlowupSize);
        }
        let ordering = self.degeneracy_ordering();
        let parts: Vec<Vec<VertexId>> = (0..self.n)
            .map(|i| ((i * t) as VertexId..((i + 1) * t) as VertexId).collect())
            .collect();
        let mut edges = Vec::with_capacity(self.edges.len() * t * t);
        for &(u, v) in &self.edges {
            let pu = ordering.position[u as usize] as usize;
            let pv = ordering.position[v as usize] as usize;
            for &a in &parts[pu] {
                for &b in &parts[pv] {
                    edges.push((a, b));
                }
            }
        }
        let graph = Graph::new(self.n * t, edges)?;
        Ok(BlowupGraph { base: self.clone(), t, ordering, parts, graph })
    }
}

fn parse_pair(line: &str, line_no: usize, what: &str) -> Result<(u64, u64), GraphError> {
    let mut it = line.split_whitespace();
    let err = |message: String| GraphError::Parse { line: line_no, message };
    let a = it
        .next()
        .ok_or_else(|| err(format!("expected {what}, got {line:?}")))?;
    let b = it
        .next()
        .ok_or_else(|| err(format!("expected {what}, got {line:?}")))?;
    if it.next().is_some() {
        return Err(err(format!("expected {what}, got extra tokens in {line:?}")));
    }
    let a = a
        .parse::<u64>()
        .map_err(|_| err(format!("invalid integer {a:?}")))?;
    let b = b
        .parse::<u64>()
        .map_err(|_| err(format!("invalid integer {b:?}")))?;
    Ok((a, b))
}

/// A peeling order together with the degeneracy it certifies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegeneracyOrdering {
    /// Vertices in removal order.
    pub order: Vec<VertexId>,
    /// Inverse of `order`: `position[v]` is the index of `v` in `order`.
    pub position: Vec<u32>,
    pub degeneracy: u32,
}

impl DegeneracyOrdering {
    /// Number of neighbors of `v` placed after `v` in the order.
    pub fn later_degree(&self, g: &Graph, v: VertexId) -> usize {
        let pv = self.position[v as usize];
        g.neighbors(v)
            .iter()
            .filter(|&&u| self.position[u as usize] > pv)
            .count()
    }
}

/// A materialized `t`-blowup with its part structure.
#[derive(Clone, Debug)]
pub struct BlowupGraph {
    base: Graph,
    t: usize,
    ordering: DegeneracyOrdering,
    parts: Vec<Vec<VertexId>>,
    graph: Graph,
}

impl BlowupGraph {
    pub fn base(&self) -> &Graph {
        &self.base
    }

    pub fn t(&self) -> usize {
        self.t
    }

    /// Degeneracy ordering of the base graph that indexes the parts.
    pub fn ordering(&self) -> &DegeneracyOrdering {
        &self.ordering
    }

    /// `parts()[i]` holds the blowup vertex ids for the base vertex at
    /// position `i` of the degeneracy ordering.
    pub fn parts(&self) -> &[Vec<VertexId>] {
        &self.parts
    }

    /// The blowup as a plain graph on `n * t` vertices.
    pub fn graph(&self) -> &Graph {
        &self.graph
    }
}

/// Graph families for the experiment harness. All generators are
/// deterministic given the seed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GraphFamily {
    /// Uniform simple d-regular graph via the pairing model with rejection.
    RandomRegular { degree: usize },
    /// Incremental construction: each new vertex attaches to
    /// `min(max_degeneracy, i)` distinct earlier vertices, so the result is
    /// `max_degeneracy`-degenerate by construction.
    RandomDegenerate { max_degeneracy: usize },
    /// Two-dimensional grid filled row-major (last row may be partial).
    Grid2d,
    /// Complete bipartite graph K_{left,right}; `left + right` must equal n.
    CompleteBipartite { left: usize, right: usize },
}

/// Generates a member of `family` on `n` vertices.
pub fn generate(family: &GraphFamily, n: usize, seed: u64) -> Result<Graph, GraphError> {
    match *family {
        GraphFamily::RandomRegular { degree } => random_regular(n, degree, seed),
        GraphFamily::RandomDegenerate { max_degeneracy } => random_degenerate(n, max_degeneracy, seed),
        GraphFamily::Grid2d => grid_2d(n),
        GraphFamily::CompleteBipartite { left, right } => {
            if left + right != n {
                return Err(GraphError::Infeasible(format!(
                    "complete-bipartite({left},{right}) needs n = {}, got {n}",
                    left + right
                )));
            }
            let edges = (0..left as VertexId)
                .flat_map(|u| (0..right as VertexId).map(move |v| (u, left as VertexId + v)));
            Graph::new(n, edges)
        }
    }
}

fn random_regular(n: usize, degree: usize, seed: u64) -> Result<Graph, GraphError> {
    if degree >= n && !(n == 0 && degree == 0) {
        return Err(GraphError::Infeasible(format!(
            "random-regular({degree}) needs n > d, got n = {n}"
        )));
    }
    if !(n * degree).is_multiple_of(2) {
        return Err(GraphError::Infeasible(format!(
            "random-regular({degree}) needs n*d even, got n = {n}"
        )));
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut stubs: Vec<VertexId> = (0..n as VertexId)
        .flat_map(|v| std::iter::repeat_n(v, degree))
        .collect();
    // Pairing model: shuffle stubs, pair them up, reject non-simple matchings.
    const MAX_TRIES: usize = 10_000;
    for _ in 0..MAX_TRIES {
        stubs.shuffle(&mut rng);
        let mut seen = BTreeSet::new();
        let mut ok = true;
        for pair in stubs.chunks_exact(2) {
            let (u, v) = (pair[0], pair[1]);
            if u == v || !seen.insert((u.min(v), u.max(v))) {
                ok = false;
                break;
            }
        }
        if ok {
            return Graph::new(n, seen);
        }
    }
    Err(GraphError::Infeasible(format!(
        "random-regular({degree}) did not produce a simple graph in {MAX_TRIES} tries"
    )))
}

fn random_degenerate(n: usize, d: usize, seed: u64) -> Result<Graph, GraphError> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for v in 1..n {
        let take = d.min(v);
        // sample `take` distinct earlier vertices by partial shuffle
        let mut earlier: Vec<VertexId> = (0..v as VertexId).collect();
        for i in 0..take {
            let j = rng.random_range(i..earlier.len());
            earlier.swap(i, j);
            edges.push((earlier[i], v as VertexId));
        }
    }
    Graph::new(n, edges)
}

fn grid_2d(n: usize) -> Result<Graph, GraphError> {
    if n == 0 {
        return Graph::new(0, []);
    }
    let rows = (n as f64).sqrt().floor() as usize;
    let rows = rows.max(1);
    let cols = n.div_ceil(rows);
    let mut edges = Vec::new();
    for i in 0..n {
        let c = i % cols;
        if c + 1 < cols && i + 1 < n {
            edges.push((i as VertexId, (i + 1) as VertexId));
        }
        if i + cols < n {
            edges.push((i as VertexId, (i + cols) as VertexId));
        }
    }
    Graph::new(n, edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn complete(q: usize) -> Graph {
        let edges = (0..q as VertexId)
            .flat_map(|u| (u + 1..q as VertexId).map(move |v| (u, v)));
        Graph::new(q, edges).unwrap()
    }

    #[test]
    fn parse_path() {
        let g = Graph::parse("3 2\n0 1\n1 2").unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.edges(), &[(0, 1), (1, 2)]);
    }

    #[test]
    fn parse_rejects_self_loop() {
        let err = Graph::parse("2 1\n0 0").unwrap_err();
        match err {
            GraphError::Parse { line, message } => {
                assert_eq!(line, 2);
                assert!(message.contains("self-loop"), "{message}");
            }
            other => panic!("unexpected error: {other}"),
        }
    }

    #[test]
    fn parse_k4() {
        let g = Graph::parse("4 6\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3").unwrap();
        assert_eq!(g.n(), 4);
        assert_eq!(g.edge_count(), 6);
        assert_eq!(g, complete(4));
    }

    #[test]
    fn parse_rejects_duplicate_edge_with_line() {
        let err = Graph::parse("3 2\n0 1\n1 0").unwrap_err();
        match err {
            GraphError::Parse { line, message } => {
                assert_eq!(line, 3);
                assert!(message.contains("duplicate edge"), "{message}");
            }
            other => panic!("unexpected error: {other}"),
        }
    }

    #[test]
    fn parse_rejects_out_of_range_with_line() {
        let err = Graph::parse("3 1\n0 7").unwrap_err();
        match err {
            GraphError::Parse { line, message } => {
                assert_eq!(line, 2);
                assert!(message.contains("out of range"), "{message}");
            }
            other => panic!("unexpected error: {other}"),
        }
    }

    #[test]
    fn parse_rejects_malformed_line() {
        assert!(matches!(
            Graph::parse("2 1\n0"),
            Err(GraphError::Parse { line: 2, .. })
        ));
        assert!(matches!(
            Graph::parse("nope"),
            Err(GraphError::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn parse_rejects_absurd_header() {
        assert!(matches!(
            Graph::parse("99999999999999 0"),
            Err(GraphError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            Graph::parse("3 99999999999999\n0 1"),
            Err(GraphError::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn serialize_then_parse_is_identity() {
        let g = Graph::parse("5 4\n3 2\n0 1\n1 2\n0 4").unwrap();
        let round = Graph::parse(&g.to_edge_list()).unwrap();
        assert_eq!(g, round);
    }

    #[test]
    fn degeneracy_examples() {
        assert_eq!(Graph::parse("3 2\n0 1\n1 2").unwrap().degeneracy_ordering().degeneracy, 1);
        assert_eq!(complete(4).degeneracy_ordering().degeneracy, 3);
        let c5 = Graph::new(5, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap();
        assert_eq!(c5.degeneracy_ordering().degeneracy, 2);
    }

    #[test]
    fn degeneracy_of_cliques() {
        for q in 2..=8 {
            assert_eq!(complete(q).degeneracy_ordering().degeneracy as usize, q - 1);
        }
    }

    #[test]
    fn degeneracy_empty_graph() {
        let g = Graph::new(0, []).unwrap();
        let ord = g.degeneracy_ordering();
        assert!(ord.order.is_empty());
        assert_eq!(ord.degeneracy, 0);
    }

    #[test]
    fn degeneracy_ordering_is_deterministic_smallest_id_first() {
        // an edgeless graph peels in id order
        let g = Graph::new(4, []).unwrap();
        assert_eq!(g.degeneracy_ordering().order, vec![0, 1, 2, 3]);
    }

    #[test]
    fn blowup_k2() {
        let k2 = Graph::new(2, [(0, 1)]).unwrap();
        let b = k2.blowup(2).unwrap();
        assert_eq!(b.graph().n(), 4);
        assert_eq!(b.graph().edge_count(), 4);
        // every blowup vertex has degree t = 2: a 4-cycle between the parts
        for v in 0..4 {
            assert_eq!(b.graph().degree(v), 2);
        }
    }

    #[test]
    fn blowup_triangle() {
        let tri = Graph::new(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        let b = tri.blowup(3).unwrap();
        assert_eq!(b.graph().n(), 9);
        assert_eq!(b.graph().edge_count(), 27);
    }

    #[test]
    fn blowup_t1_is_isomorphic_copy() {
        let g = Graph::parse("5 4\n0 1\n1 2\n2 3\n0 4").unwrap();
        let b = g.blowup(1).unwrap();
        assert_eq!(b.graph().n(), g.n());
        assert_eq!(b.graph().edge_count(), g.edge_count());
        // part i is the single vertex i, standing for ordering.order[i]
        let ord = b.ordering();
        for (i, part) in b.parts().iter().enumerate() {
            assert_eq!(part.len(), 1);
            let i_base = ord.order[i];
            for (j, other) in b.parts().iter().enumerate().skip(i + 1) {
                let j_base = ord.order[j];
                assert_eq!(
                    b.graph().has_edge(part[0], other[0]),
                    g.has_edge(i_base, j_base)
                );
            }
        }
    }

    #[test]
    fn blowup_rejects_t0() {
        let g = Graph::new(2, [(0, 1)]).unwrap();
        assert_eq!(g.blowup(0).unwrap_err(), GraphError::ZeroBlowupSize);
    }

    #[test]
    fn blowup_adjacency_matches_parts() {
        let g = Graph::parse("4 3\n0 1\n1 2\n2 3").unwrap();
        let b = g.blowup(3).unwrap();
        let ord = b.ordering();
        for i in 0..g.n() {
            for j in 0..g.n() {
                let expect = i != j && g.has_edge(ord.order[i], ord.order[j]);
                for &a in &b.parts()[i] {
                    for &bb in &b.parts()[j] {
                        if a != bb {
                            assert_eq!(b.graph().has_edge(a, bb), expect);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn random_regular_is_regular() {
        let g = generate(&GraphFamily::RandomRegular { degree: 3 }, 10, 1).unwrap();
        assert_eq!(g.n(), 10);
        assert_eq!(g.edge_count(), 15);
        for v in 0..10 {
            assert_eq!(g.degree(v), 3);
        }
    }

    #[test]
    fn random_regular_rejects_odd_total() {
        assert!(matches!(
            generate(&GraphFamily::RandomRegular { degree: 3 }, 9, 1),
            Err(GraphError::Infeasible(_))
        ));
    }

    #[test]
    fn complete_bipartite_33() {
        let g = generate(&GraphFamily::CompleteBipartite { left: 3, right: 3 }, 6, 0).unwrap();
        assert_eq!(g.edge_count(), 9);
        for v in 0..6 {
            assert_eq!(g.degree(v), 3);
        }
    }

    #[test]
    fn random_degenerate_bound_holds() {
        let g = generate(&GraphFamily::RandomDegenerate { max_degeneracy: 2 }, 20, 5).unwrap();
        assert!(g.degeneracy_ordering().degeneracy <= 2);
    }

    #[test]
    fn grid_2d_square() {
        let g = generate(&GraphFamily::Grid2d, 9, 0).unwrap();
        assert_eq!(g.n(), 9);
        assert_eq!(g.edge_count(), 12);
    }

    #[test]
    fn generators_are_seed_deterministic() {
        for family in [
            GraphFamily::RandomRegular { degree: 3 },
            GraphFamily::RandomDegenerate { max_degeneracy: 3 },
        ] {
            let a = generate(&family, 16, 99).unwrap();
            let b = generate(&family, 16, 99).unwrap();
            assert_eq!(a, b);
            let c = generate(&family, 16, 100).unwrap();
            assert_ne!(a, c, "different seeds should differ for {family:?}");
        }
    }

    fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
        (1..=max_n).prop_flat_map(|n| {
            let all_edges: Vec<(VertexId, VertexId)> = (0..n as VertexId)
                .flat_map(|u| (u + 1..n as VertexId).map(move |v| (u, v)))
                .collect();
            proptest::sample::subsequence(all_edges.clone(), 0..=all_edges.len())
                .prop_map(move |edges| Graph::new(n, edges).unwrap())
        })
    }

    proptest! {
        #[test]
        fn ordering_has_bounded_later_degree(g in arb_graph(12)) {
            let ord = g.degeneracy_ordering();
            for v in 0..g.n() as VertexId {
                prop_assert!(ord.later_degree(&g, v) <= ord.degeneracy as usize);
            }
        }

        #[test]
        fn parse_roundtrip(g in arb_graph(10)) {
            let round = Graph::parse(&g.to_edge_list()).unwrap();
            prop_assert_eq!(g, round);
        }

        #[test]
        fn blowup_counts(g in arb_graph(8), t in 1usize..=5) {
            let b = g.blowup(t).unwrap();
            prop_assert_eq!(b.graph().n(), g.n() * t);
            prop_assert_eq!(b.graph().edge_count(), t * t * g.edge_count());
            // the blowup's own ordering satisfies the degeneracy invariants
            let ord = b.graph().degeneracy_ordering();
            for v in 0..b.graph().n() as VertexId {
                prop_assert!(ord.later_degree(b.graph(), v) <= ord.degeneracy as usize);
            }
        }
    }
}
