//! Immutable compressed graph representation, BFS primitives, and the
//! quadratic all-sources oracle used for verification.
//!
//! Graphs are undirected, unweighted and connected; construction rejects
//! anything else. Vertex ids are dense 0-based integers so every traversal
//! is array-indexed.

use crate::error::Error;
use crate::stats::WorkCounter;
use crate::{exec, Result};

/// Compressed sparse adjacency for a connected simple graph.
///
/// Immutable after construction and safe for any number of concurrent
/// readers; each BFS owns its private scratch state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<u32>,
}

impl Graph {
    /// Builds a graph from an edge list. Duplicate edges and self-loops are
    /// dropped; the result is canonical under any permutation of the input
    /// list. Fails on an empty or disconnected input.
    pub fn from_edges(n: usize, edges: &[(u32, u32)]) -> Result<Graph> {
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        for &(u, v) in edges {
            if u as usize >= n {
                return Err(Error::VertexOutOfRange { v: u, n });
            }
            if v as usize >= n {
                return Err(Error::VertexOutOfRange { v, n });
            }
        }
        let mut pairs: Vec<(u32, u32)> = edges
            .iter()
            .filter(|&&(u, v)| u != v)
            .map(|&(u, v)| if u < v { (u, v) } else { (v, u) })
            .collect();
        pairs.sort_unstable();
        pairs.dedup();

        let mut degree = vec![0usize; n];
        for &(u, v) in &pairs {
            degree[u as usize] += 1;
            degree[v as usize] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0usize);
        for v in 0..n {
            offsets.push(offsets[v] + degree[v]);
        }
        let mut targets = vec![0u32; offsets[n]];
        let mut cursor = offsets.clone();
        for &(u, v) in &pairs {
            targets[cursor[u as usize]] = v;
            cursor[u as usize] += 1;
            targets[cursor[v as usize]] = u;
            cursor[v as usize] += 1;
        }
        for v in 0..n {
            targets[offsets[v]..offsets[v + 1]].sort_unstable();
        }
        let g = Graph { offsets, targets };

        let reps = g.component_representatives();
        if reps.len() > 1 {
            return Err(Error::DisconnectedInput {
                representatives: reps,
            });
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn m(&self) -> usize {
        self.targets.len() / 2
    }

    pub fn neighbours(&self, v: u32) -> &[u32] {
        &self.targets[self.offsets[v as usize]..self.offsets[v as usize + 1]]
    }

    pub fn degree(&self, v: u32) -> usize {
        self.neighbours(v).len()
    }

    /// Edges with u < v, in sorted order.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        (0..self.n() as u32).flat_map(move |u| {
            self.neighbours(u)
                .iter()
                .filter(move |&&v| u < v)
                .map(move |&v| (u, v))
        })
    }

    pub fn is_complete(&self) -> bool {
        self.m() == self.n() * (self.n() - 1) / 2
    }

    /// Smallest vertex of each connected component (on the internal
    /// adjacency, before the connectivity check has passed).
    fn component_representatives(&self) -> Vec<u32> {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut reps = Vec::new();
        let mut queue = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            reps.push(s as u32);
            seen[s] = true;
            queue.clear();
            queue.push(s as u32);
            let mut head = 0;
            while head < queue.len() {
                let u = queue[head];
                head += 1;
                for &w in self.neighbours(u) {
                    if !seen[w as usize] {
                        seen[w as usize] = true;
                        queue.push(w);
                    }
                }
            }
        }
        reps
    }
}

/// Exact hop distances from a single source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceVector {
    pub source: u32,
    pub dist: Vec<u32>,
}

impl DistanceVector {
    pub fn eccentricity(&self) -> u32 {
        *self.dist.iter().max().expect("non-empty graph")
    }
}

/// Reusable BFS state: flat queue plus epoch-stamped visited marks, so one
/// allocation serves many sources.
#[derive(Debug, Clone)]
pub struct BfsScratch {
    mark: Vec<u32>,
    dist: Vec<u32>,
    queue: Vec<u32>,
    epoch: u32,
}

impl BfsScratch {
    pub fn new(n: usize) -> Self {
        Self {
            mark: vec![0; n],
            dist: vec![0; n],
            queue: Vec::with_capacity(n),
            epoch: 0,
        }
    }

    /// BFS from `source`, stopping after depth `cap`. Returns the number of
    /// adjacency entries touched.
    pub fn run(&mut self, g: &Graph, source: u32, cap: u32) -> u64 {
        debug_assert_eq!(self.mark.len(), g.n());
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            // wrapped: clear stale marks
            self.mark.iter_mut().for_each(|m| *m = 0);
            self.epoch = 1;
        }
        self.queue.clear();
        self.queue.push(source);
        self.mark[source as usize] = self.epoch;
        self.dist[source as usize] = 0;
        let mut touched = 0u64;
        let mut head = 0;
        while head < self.queue.len() {
            let u = self.queue[head];
            head += 1;
            let du = self.dist[u as usize];
            if du >= cap {
                continue;
            }
            let nbrs = g.neighbours(u);
            touched += nbrs.len() as u64;
            for &w in nbrs {
                if self.mark[w as usize] != self.epoch {
                    self.mark[w as usize] = self.epoch;
                    self.dist[w as usize] = du + 1;
                    self.queue.push(w);
                }
            }
        }
        touched
    }

    /// Distance of `v` from the last run's source, if reached.
    pub fn dist_of(&self, v: u32) -> Option<u32> {
        if self.mark[v as usize] == self.epoch {
            Some(self.dist[v as usize])
        } else {
            None
        }
    }

    /// Vertices reached by the last run, in visit order.
    pub fn reached(&self) -> &[u32] {
        &self.queue
    }

    pub fn max_dist(&self) -> u32 {
        self.queue
            .last()
            .map(|&v| self.dist[v as usize])
            .unwrap_or(0)
    }

    /// Materialises a full distance vector (graph must be connected).
    pub fn to_distance_vector(&self, source: u32) -> DistanceVector {
        debug_assert_eq!(self.queue.len(), self.mark.len());
        let mut dist = vec![0u32; self.mark.len()];
        for &v in &self.queue {
            dist[v as usize] = self.dist[v as usize];
        }
        DistanceVector { source, dist }
    }
}

/// Exact hop distances from `s`; O(n + m).
pub fn bfs_distances(g: &Graph, s: u32) -> DistanceVector {
    let mut scratch = BfsScratch::new(g.n());
    scratch.run(g, s, u32::MAX);
    scratch.to_distance_vector(s)
}

/// The ball of centre `v` and radius `depth`, sorted by vertex id.
pub fn ball(g: &Graph, v: u32, depth: u32) -> Vec<u32> {
    let mut scratch = BfsScratch::new(g.n());
    scratch.run(g, v, depth);
    let mut members = scratch.reached().to_vec();
    members.sort_unstable();
    members
}

/// Exact diameter and radius through n BFS runs; sources are processed
/// concurrently against the immutable graph.
pub fn diameter_oracle(g: &Graph) -> (u32, u32) {
    diameter_oracle_counted(g, &WorkCounter::new())
}

/// Oracle variant that reports touched adjacency entries.
pub fn diameter_oracle_counted(g: &Graph, work: &WorkCounter) -> (u32, u32) {
    let n = g.n();
    let per_source = exec::map_range_init(
        n,
        || BfsScratch::new(n),
        |scratch, s| {
            let touched = scratch.run(g, s as u32, u32::MAX);
            (scratch.max_dist(), touched)
        },
    );
    let mut touched = 0u64;
    let mut diam = 0u32;
    let mut rad = u32::MAX;
    for (ecc, t) in per_source {
        touched += t;
        diam = diam.max(ecc);
        rad = rad.min(ecc);
    }
    work.add_adjacency(touched);
    (diam, rad)
}

// ---------------------------------------------------------------------------
// Input formats
// ---------------------------------------------------------------------------

/// Parses the plain edge-list format: first line `n m`, then m lines `u v`
/// (0-based). Anything after `#` is a comment.
pub fn parse_edge_list(text: &str, origin: &str) -> Result<(usize, Vec<(u32, u32)>)> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut it = line.split_whitespace();
        let parse = |tok: Option<&str>, what: &str| -> Result<u64> {
            tok.ok_or_else(|| Error::Parse {
                path: origin.to_string(),
                line: idx + 1,
                msg: format!("missing {what}"),
            })?
            .parse::<u64>()
            .map_err(|e| Error::Parse {
                path: origin.to_string(),
                line: idx + 1,
                msg: format!("bad {what}: {e}"),
            })
        };
        if header.is_none() {
            let n = parse(it.next(), "vertex count")? as usize;
            let m = parse(it.next(), "edge count")? as usize;
            header = Some((n, m));
        } else {
            let u = parse(it.next(), "endpoint")? as u32;
            let v = parse(it.next(), "endpoint")? as u32;
            edges.push((u, v));
        }
    }
    let (n, m) = header.ok_or_else(|| Error::Parse {
        path: origin.to_string(),
        line: 0,
        msg: "empty input".into(),
    })?;
    if edges.len() != m {
        return Err(Error::Parse {
            path: origin.to_string(),
            line: 0,
            msg: format!("header announces {m} edges, found {}", edges.len()),
        });
    }
    Ok((n, edges))
}

/// Parses DIMACS-style input (`c` comments, one `p` line, `e u v` 1-based).
pub fn parse_dimacs(text: &str, origin: &str) -> Result<(usize, Vec<(u32, u32)>)> {
    let mut n = None;
    let mut edges = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let err = |msg: String| Error::Parse {
            path: origin.to_string(),
            line: idx + 1,
            msg,
        };
        match fields[0] {
            "p" => {
                if fields.len() < 4 {
                    return Err(err("short problem line".into()));
                }
                n = Some(
                    fields[2]
                        .parse::<usize>()
                        .map_err(|e| err(format!("bad vertex count: {e}")))?,
                );
            }
            "e" | "a" => {
                if fields.len() < 3 {
                    return Err(err("short edge line".into()));
                }
                let u: u32 = fields[1]
                    .parse()
                    .map_err(|e| err(format!("bad endpoint: {e}")))?;
                let v: u32 = fields[2]
                    .parse()
                    .map_err(|e| err(format!("bad endpoint: {e}")))?;
                if u == 0 || v == 0 {
                    return Err(err("DIMACS vertices are 1-based".into()));
                }
                edges.push((u - 1, v - 1));
            }
            other => return Err(err(format!("unknown record `{other}`"))),
        }
    }
    let n = n.ok_or_else(|| Error::Parse {
        path: origin.to_string(),
        line: 0,
        msg: "missing problem line".into(),
    })?;
    Ok((n, edges))
}

/// Restricts an edge list to its largest connected component, relabelling
/// vertices densely. Returns the component's size, its edges, and the map
/// new id -> original id (persisted in reports).
pub fn largest_component(n: usize, edges: &[(u32, u32)]) -> (usize, Vec<(u32, u32)>, Vec<u32>) {
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        if u != v {
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
    }
    let mut comp = vec![usize::MAX; n];
    let mut sizes = Vec::new();
    let mut queue = Vec::new();
    for s in 0..n {
        if comp[s] != usize::MAX {
            continue;
        }
        let id = sizes.len();
        comp[s] = id;
        queue.clear();
        queue.push(s as u32);
        let mut size = 1usize;
        let mut head = 0;
        while head < queue.len() {
            let u = queue[head] as usize;
            head += 1;
            for &w in &adj[u] {
                if comp[w as usize] == usize::MAX {
                    comp[w as usize] = id;
                    size += 1;
                    queue.push(w);
                }
            }
        }
        sizes.push(size);
    }
    if sizes.is_empty() {
        return (0, Vec::new(), Vec::new());
    }
    let best = sizes
        .iter()
        .enumerate()
        .max_by_key(|&(i, &s)| (s, std::cmp::Reverse(i)))
        .map(|(i, _)| i)
        .unwrap();
    let mut map = Vec::new();
    let mut new_id = vec![u32::MAX; n];
    for v in 0..n {
        if comp[v] == best {
            new_id[v] = map.len() as u32;
            map.push(v as u32);
        }
    }
    let kept: Vec<(u32, u32)> = edges
        .iter()
        .filter(|&&(u, v)| comp[u as usize] == best && comp[v as usize] == best)
        .map(|&(u, v)| (new_id[u as usize], new_id[v as usize]))
        .collect();
    (map.len(), kept, map)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn path_graph(n: usize) -> Graph {
        let edges: Vec<(u32, u32)> = (0..n as u32 - 1).map(|i| (i, i + 1)).collect();
        Graph::from_edges(n, &edges).unwrap()
    }

    pub(crate) fn cycle_graph(n: usize) -> Graph {
        let mut edges: Vec<(u32, u32)> = (0..n as u32 - 1).map(|i| (i, i + 1)).collect();
        edges.push((n as u32 - 1, 0));
        Graph::from_edges(n, &edges).unwrap()
    }

    pub(crate) fn complete_graph(n: usize) -> Graph {
        let mut edges = Vec::new();
        for u in 0..n as u32 {
            for v in u + 1..n as u32 {
                edges.push((u, v));
            }
        }
        Graph::from_edges(n, &edges).unwrap()
    }

    /// O(n^3) all-pairs oracle, independent of the BFS code path.
    fn floyd_warshall(g: &Graph) -> Vec<Vec<u32>> {
        let n = g.n();
        const INF: u32 = u32::MAX / 4;
        let mut d = vec![vec![INF; n]; n];
        for v in 0..n {
            d[v][v] = 0;
        }
        for (u, v) in g.edges() {
            d[u as usize][v as usize] = 1;
            d[v as usize][u as usize] = 1;
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let via = d[i][k].saturating_add(d[k][j]);
                    if via < d[i][j] {
                        d[i][j] = via;
                    }
                }
            }
        }
        d
    }

    fn seeded_connected_graph(n: usize, extra: usize, seed: u64) -> Graph {
        // Small LCG is enough for test fixtures.
        let mut state = seed.wrapping_mul(0x9E3779B97F4A7C15).wrapping_add(1);
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        let mut edges = Vec::new();
        for v in 1..n as u32 {
            let parent = (next() % v as u64) as u32;
            edges.push((parent, v));
        }
        for _ in 0..extra {
            let u = (next() % n as u64) as u32;
            let v = (next() % n as u64) as u32;
            if u != v {
                edges.push((u, v));
            }
        }
        Graph::from_edges(n, &edges).unwrap()
    }

    #[test]
    fn build_path_p4() {
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        assert_eq!(g.n(), 4);
        assert_eq!(g.m(), 3);
        assert_eq!(g.neighbours(1), &[0, 2]);
    }

    #[test]
    fn build_dedups_and_orients() {
        let g = Graph::from_edges(2, &[(0, 1), (1, 0), (0, 1)]).unwrap();
        assert_eq!(g.m(), 1);
    }

    #[test]
    fn build_rejects_disconnected() {
        match Graph::from_edges(3, &[(0, 1)]) {
            Err(Error::DisconnectedInput { representatives }) => {
                assert_eq!(representatives, vec![0, 2]);
            }
            other => panic!("expected DisconnectedInput, got {other:?}"),
        }
    }

    #[test]
    fn build_rejects_empty() {
        assert!(matches!(Graph::from_edges(0, &[]), Err(Error::EmptyGraph)));
    }

    #[test]
    fn build_is_permutation_invariant() {
        let edges = [(0, 1), (1, 2), (2, 3), (3, 0), (1, 3)];
        let g1 = Graph::from_edges(4, &edges).unwrap();
        let mut rev = edges;
        rev.reverse();
        let swapped: Vec<(u32, u32)> = rev.iter().map(|&(u, v)| (v, u)).collect();
        let g2 = Graph::from_edges(4, &swapped).unwrap();
        assert_eq!(g1, g2);
    }

    #[test]
    fn bfs_on_path_and_cycle() {
        let p4 = path_graph(4);
        assert_eq!(bfs_distances(&p4, 0).dist, vec![0, 1, 2, 3]);
        let c6 = cycle_graph(6);
        assert_eq!(bfs_distances(&c6, 0).dist, vec![0, 1, 2, 3, 2, 1]);
    }

    #[test]
    fn bfs_matches_floyd_warshall() {
        let g = seeded_connected_graph(50, 60, 7);
        let fw = floyd_warshall(&g);
        for s in 0..g.n() as u32 {
            assert_eq!(bfs_distances(&g, s).dist, fw[s as usize]);
        }
    }

    #[test]
    fn bfs_is_edge_lipschitz() {
        let g = seeded_connected_graph(80, 100, 3);
        for s in [0u32, 17, 42] {
            let d = bfs_distances(&g, s).dist;
            for (u, v) in g.edges() {
                let a = d[u as usize];
                let b = d[v as usize];
                assert!(a.abs_diff(b) <= 1, "edge ({u},{v}) violates |d| <= 1");
            }
        }
    }

    #[test]
    fn ball_examples() {
        let c6 = cycle_graph(6);
        assert_eq!(ball(&c6, 3, 0), vec![3]);
        assert_eq!(ball(&c6, 0, 2), vec![0, 1, 2, 4, 5]);
        assert_eq!(ball(&c6, 0, 99).len(), 6);
    }

    #[test]
    fn balls_nest() {
        let g = seeded_connected_graph(40, 30, 11);
        for v in 0..g.n() as u32 {
            let mut prev: Vec<u32> = vec![v];
            for depth in 1..6 {
                let cur = ball(&g, v, depth);
                assert!(prev.iter().all(|x| cur.binary_search(x).is_ok()));
                prev = cur;
            }
        }
    }

    #[test]
    fn oracle_on_known_graphs() {
        assert_eq!(diameter_oracle(&cycle_graph(6)), (3, 3));
        assert_eq!(diameter_oracle(&complete_graph(4)), (1, 1));
        let grid = crate::harness::gen_grid(10, 10).unwrap();
        let (diam, rad) = diameter_oracle(&grid);
        assert_eq!(diam, 18);
        // Minimum eccentricity of a 10x10 grid: 5 + 5 per axis.
        assert_eq!(rad, 10);
    }

    #[test]
    fn oracle_matches_floyd_warshall() {
        let g = seeded_connected_graph(60, 45, 5);
        let fw = floyd_warshall(&g);
        let diam = fw
            .iter()
            .flat_map(|row| row.iter().copied())
            .max()
            .unwrap();
        let rad = fw
            .iter()
            .map(|row| *row.iter().max().unwrap())
            .min()
            .unwrap();
        assert_eq!(diameter_oracle(&g), (diam, rad));
    }

    #[test]
    fn parse_edge_list_roundtrip() {
        let text = "# toy\n4 3\n0 1\n1 2 # inline\n2 3\n";
        let (n, edges) = parse_edge_list(text, "mem").unwrap();
        assert_eq!(n, 4);
        assert_eq!(edges, vec![(0, 1), (1, 2), (2, 3)]);
        let g = Graph::from_edges(n, &edges).unwrap();
        assert_eq!(g.m(), 3);
    }

    #[test]
    fn parse_dimacs_basic() {
        let text = "c comment\np edge 3 2\ne 1 2\ne 2 3\n";
        let (n, edges) = parse_dimacs(text, "mem").unwrap();
        assert_eq!(n, 3);
        assert_eq!(edges, vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn largest_component_extraction() {
        let edges = [(0, 1), (1, 2), (3, 4)];
        let (n, kept, map) = largest_component(5, &edges);
        assert_eq!(n, 3);
        assert_eq!(kept, vec![(0, 1), (1, 2)]);
        assert_eq!(map, vec![0, 1, 2]);
    }
}
