//! Balanced separators, r-divisions, and the boundary hypergraph with its
//! dedicated spanning-path construction.
//!
//! The division recursion never materialises subgraphs: it works on vertex
//! subsets of the original graph with stamped membership masks, so the
//! intermediate (possibly disconnected) pieces need no re-validation.

use crate::config::{sauer_bound, AlgoConfig, SeparatorProvider};
use crate::error::Error;
use crate::exec;
use crate::graph::{BfsScratch, Graph};
use crate::hypergraph::Hypergraph;
use crate::stabbing::{CwOptions, SpanningPath, StabSet};
use crate::stats::{DivisionStats, WorkCounter};
use crate::Result;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;

/// A balanced separator with the bipartition of the remaining components.
#[derive(Debug, Clone)]
pub struct Separator {
    /// Sorted separator vertices.
    pub vertices: Vec<u32>,
    pub side_a: Vec<u32>,
    pub side_b: Vec<u32>,
    /// Set when no balanced layer existed and an arbitrary n/3-subset was
    /// taken instead (complete-graph-like inputs).
    pub degraded: bool,
}

/// Shared scratch for subset-restricted traversals.
struct DivScratch {
    in_sub: Vec<u32>,
    sub_epoch: u32,
    blocked: Vec<u32>,
    blocked_epoch: u32,
    mark: Vec<u32>,
    mark_epoch: u32,
    dist: Vec<u32>,
    queue: Vec<u32>,
}

impl DivScratch {
    fn new(n: usize) -> Self {
        Self {
            in_sub: vec![0; n],
            sub_epoch: 0,
            blocked: vec![0; n],
            blocked_epoch: 0,
            mark: vec![0; n],
            mark_epoch: 0,
            dist: vec![0; n],
            queue: Vec::new(),
        }
    }

    fn set_subset(&mut self, members: &[u32]) {
        self.sub_epoch += 1;
        for &v in members {
            self.in_sub[v as usize] = self.sub_epoch;
        }
    }

    fn contains(&self, v: u32) -> bool {
        self.in_sub[v as usize] == self.sub_epoch
    }

    fn set_blocked(&mut self, vertices: &[u32]) {
        self.blocked_epoch += 1;
        for &v in vertices {
            self.blocked[v as usize] = self.blocked_epoch;
        }
    }

    fn clear_blocked(&mut self) {
        self.blocked_epoch += 1;
    }

    fn is_blocked(&self, v: u32) -> bool {
        self.blocked[v as usize] == self.blocked_epoch
    }

    /// BFS from `source` within the subset, skipping blocked vertices.
    fn bfs(&mut self, g: &Graph, source: u32) {
        self.mark_epoch += 1;
        self.queue.clear();
        self.queue.push(source);
        self.mark[source as usize] = self.mark_epoch;
        self.dist[source as usize] = 0;
        let mut head = 0;
        while head < self.queue.len() {
            let u = self.queue[head];
            head += 1;
            let du = self.dist[u as usize];
            for &w in g.neighbours(u) {
                if self.contains(w)
                    && !self.is_blocked(w)
                    && self.mark[w as usize] != self.mark_epoch
                {
                    self.mark[w as usize] = self.mark_epoch;
                    self.dist[w as usize] = du + 1;
                    self.queue.push(w);
                }
            }
        }
    }

    /// Connected components of subset minus blocked, ordered by smallest
    /// member id; each component sorted.
    fn components(&mut self, g: &Graph, members: &[u32]) -> Vec<Vec<u32>> {
        let mut comps = Vec::new();
        self.mark_epoch += 1;
        let epoch = self.mark_epoch;
        for &s in members {
            if self.is_blocked(s) || self.mark[s as usize] == epoch {
                continue;
            }
            let mut comp = vec![s];
            self.mark[s as usize] = epoch;
            let mut head = 0;
            while head < comp.len() {
                let u = comp[head];
                head += 1;
                for &w in g.neighbours(u) {
                    if self.contains(w) && !self.is_blocked(w) && self.mark[w as usize] != epoch {
                        self.mark[w as usize] = epoch;
                        comp.push(w);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }
}

/// The first-fit bipartition of components: i0 is the largest index whose
/// strict prefix stays within 2n/3; the straddling component either joins
/// the suffix side or becomes a side on its own.
fn bipartition_with(
    comps: &[Vec<u32>],
    n_total: usize,
) -> std::result::Result<(Vec<u32>, Vec<u32>), usize> {
    let within = |size: usize| 3 * size <= 2 * n_total;
    for c in comps {
        if !within(c.len()) {
            return Err(c.len());
        }
    }
    if comps.is_empty() {
        return Ok((Vec::new(), Vec::new()));
    }
    let mut prefix = 0usize;
    let mut i0 = 0usize;
    for (i, c) in comps.iter().enumerate() {
        if within(prefix) {
            i0 = i;
        } else {
            break;
        }
        prefix += c.len();
    }
    let a_prime: Vec<u32> = comps[..i0].iter().flatten().copied().collect();
    let b_prime: Vec<u32> = comps[i0 + 1..].iter().flatten().copied().collect();
    let straddle = &comps[i0];
    let (mut a, mut b) = if within(b_prime.len() + straddle.len()) {
        let mut b_all = b_prime;
        b_all.extend_from_slice(straddle);
        (a_prime, b_all)
    } else {
        let mut a_all = a_prime;
        a_all.extend(b_prime);
        (a_all, straddle.clone())
    };
    a.sort_unstable();
    b.sort_unstable();
    Ok((a, b))
}

/// Bipartitions the components of `g` minus `s` into two sides of at most
/// 2n/3 vertices each (n counts the whole graph, separator included).
pub fn bipartition_components(g: &Graph, s: &[u32]) -> Result<(Vec<u32>, Vec<u32>)> {
    let n = g.n();
    let mut scratch = DivScratch::new(n);
    let members: Vec<u32> = (0..n as u32).collect();
    scratch.set_subset(&members);
    scratch.set_blocked(s);
    let comps = scratch.components(g, &members);
    bipartition_with(&comps, n).map_err(|size| Error::UnbalancedComponent {
        size,
        limit: 2 * n / 3,
    })
}

struct SubsetSeparator {
    vertices: Vec<u32>,
    degraded: bool,
}

/// BFS-layer separator inside a connected subset: try the far end of a
/// double sweep plus seeded random roots; keep the smallest balanced level
/// (ties broken towards balance, then root order).
fn bfs_layer_separator(
    g: &Graph,
    members: &[u32],
    scratch: &mut DivScratch,
    rng: &mut ChaCha8Rng,
) -> SubsetSeparator {
    let n = members.len();
    scratch.clear_blocked();
    scratch.bfs(g, members[0]);
    let far = *scratch.queue.last().unwrap();
    let mut roots = vec![far];
    for _ in 0..4 {
        roots.push(members[rng.gen_range(0..n)]);
    }
    roots.push(members[0]);

    let mut best: Option<(usize, usize, Vec<u32>)> = None;
    for &root in &roots {
        scratch.bfs(g, root);
        debug_assert_eq!(scratch.queue.len(), n, "subset must be connected");
        let depth = scratch.dist[*scratch.queue.last().unwrap() as usize] as usize;
        let mut sizes = vec![0usize; depth + 1];
        for &v in &scratch.queue {
            sizes[scratch.dist[v as usize] as usize] += 1;
        }
        let mut near = sizes[0];
        for i in 1..sizes.len() {
            let far_count = n - near - sizes[i];
            // The near side is a single component; each far component is at
            // most the whole far side.
            if near >= 1 && far_count >= 1 && 3 * near <= 2 * n && 3 * far_count <= 2 * n {
                let imbalance = near.abs_diff(far_count);
                let better = match &best {
                    None => true,
                    Some((bs, bi, _)) => sizes[i] < *bs || (sizes[i] == *bs && imbalance < *bi),
                };
                if better {
                    let mut s: Vec<u32> = scratch
                        .queue
                        .iter()
                        .copied()
                        .filter(|&v| scratch.dist[v as usize] == i as u32)
                        .collect();
                    s.sort_unstable();
                    best = Some((sizes[i], imbalance, s));
                }
            }
            near += sizes[i];
        }
    }
    match best {
        Some((_, _, s)) => SubsetSeparator {
            vertices: s,
            degraded: false,
        },
        None => SubsetSeparator {
            // No balanced layer exists (clique-like subset): fall back to an
            // arbitrary n/3-subset so the remainder obeys the 2n/3 bound.
            vertices: members[..n.div_ceil(3)].to_vec(),
            degraded: true,
        },
    }
}

/// Degree-greedy fallback: remove the highest-degree live vertex until
/// every remaining component fits in 2n/3.
fn degree_greedy_separator(
    g: &Graph,
    members: &[u32],
    scratch: &mut DivScratch,
) -> SubsetSeparator {
    let n = members.len();
    let mut sep: Vec<u32> = Vec::new();
    loop {
        scratch.set_blocked(&sep);
        let comps = scratch.components(g, members);
        if comps.iter().all(|c| 3 * c.len() <= 2 * n) {
            sep.sort_unstable();
            return SubsetSeparator {
                vertices: sep,
                degraded: false,
            };
        }
        let mut pick: Option<(usize, u32)> = None;
        for &v in members {
            if scratch.is_blocked(v) {
                continue;
            }
            let deg = g
                .neighbours(v)
                .iter()
                .filter(|&&w| scratch.contains(w) && !scratch.is_blocked(w))
                .count();
            let better = match pick {
                None => true,
                Some((bd, bv)) => deg > bd || (deg == bd && v < bv),
            };
            if better {
                pick = Some((deg, v));
            }
        }
        sep.push(
            pick.expect("live vertex exists while a component is oversized")
                .1,
        );
    }
}

/// Balanced separator of the whole graph under the configured provider,
/// with the component bipartition already applied.
pub fn balanced_separator(g: &Graph, cfg: &AlgoConfig) -> Result<Separator> {
    let n = g.n();
    if n < 3 {
        return Err(Error::Invalid(format!(
            "separator needs at least 3 vertices, got {n}"
        )));
    }
    let members: Vec<u32> = (0..n as u32).collect();
    let mut scratch = DivScratch::new(n);
    scratch.set_subset(&members);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let sub = match cfg.provider {
        SeparatorProvider::BfsLayer => bfs_layer_separator(g, &members, &mut scratch, &mut rng),
        SeparatorProvider::DegreeGreedy => degree_greedy_separator(g, &members, &mut scratch),
    };
    scratch.set_blocked(&sub.vertices);
    let comps = scratch.components(g, &members);
    let (a, b) = bipartition_with(&comps, n).map_err(|size| Error::UnbalancedComponent {
        size,
        limit: 2 * n / 3,
    })?;
    Ok(Separator {
        vertices: sub.vertices,
        side_a: a,
        side_b: b,
        degraded: sub.degraded,
    })
}

/// An edge-covering collection of connected clusters of order at most r.
#[derive(Debug, Clone)]
pub struct RDivision {
    clusters: Vec<Vec<u32>>,
    clusters_of: Vec<Vec<u32>>,
    boundary: Vec<bool>,
    excess: usize,
    degraded: bool,
    r: usize,
}

impl RDivision {
    /// Validates an explicit cluster collection against a graph and derives
    /// boundary flags and excess. For tests and fixture inputs.
    pub fn from_clusters(g: &Graph, clusters: Vec<Vec<u32>>, r: usize) -> Result<RDivision> {
        let mut clusters: Vec<Vec<u32>> = clusters
            .into_iter()
            .map(|mut c| {
                c.sort_unstable();
                c.dedup();
                c
            })
            .collect();
        clusters.sort();
        clusters.dedup();
        let div = Self::assemble(g.n(), clusters, r, false);
        div.validate(g)?;
        Ok(div)
    }

    fn assemble(n: usize, clusters: Vec<Vec<u32>>, r: usize, degraded: bool) -> RDivision {
        let mut clusters_of = vec![Vec::new(); n];
        let mut total = 0usize;
        for (i, c) in clusters.iter().enumerate() {
            total += c.len();
            for &v in c {
                clusters_of[v as usize].push(i as u32);
            }
        }
        let boundary: Vec<bool> = clusters_of.iter().map(|l| l.len() >= 2).collect();
        RDivision {
            clusters,
            clusters_of,
            boundary,
            excess: total - n,
            degraded,
            r,
        }
    }

    pub fn clusters(&self) -> &[Vec<u32>] {
        &self.clusters
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn excess(&self) -> usize {
        self.excess
    }

    pub fn degraded(&self) -> bool {
        self.degraded
    }

    pub fn is_boundary(&self, v: u32) -> bool {
        self.boundary[v as usize]
    }

    /// Sorted ids of the clusters containing v.
    pub fn clusters_of(&self, v: u32) -> &[u32] {
        &self.clusters_of[v as usize]
    }

    pub fn boundary_vertices(&self) -> Vec<u32> {
        (0..self.boundary.len() as u32)
            .filter(|&v| self.boundary[v as usize])
            .collect()
    }

    pub fn boundary_count(&self) -> usize {
        self.boundary.iter().filter(|&&b| b).count()
    }

    /// Structural invariants: cluster sizes, connectivity, edge coverage,
    /// and the boundary-vs-excess accounting.
    pub fn validate(&self, g: &Graph) -> Result<()> {
        let n = g.n();
        let fail = |msg: String| Error::Invalid(format!("r-division: {msg}"));
        if self.clusters_of.iter().any(|l| l.is_empty()) {
            return Err(fail("some vertex lies in no cluster".into()));
        }
        let mut scratch = DivScratch::new(n);
        for c in &self.clusters {
            if c.len() > self.r {
                return Err(fail(format!(
                    "cluster of size {} exceeds r = {}",
                    c.len(),
                    self.r
                )));
            }
            scratch.set_subset(c);
            scratch.clear_blocked();
            scratch.bfs(g, c[0]);
            if scratch.queue.len() != c.len() {
                return Err(fail("cluster does not induce a connected subgraph".into()));
            }
        }
        for (u, v) in g.edges() {
            let covered = self
                .clusters_of(u)
                .iter()
                .any(|&c| self.clusters[c as usize].binary_search(&v).is_ok());
            if !covered {
                return Err(fail(format!("edge ({u},{v}) not inside any cluster")));
            }
        }
        let sum_b: usize = self
            .clusters
            .iter()
            .map(|c| c.iter().filter(|&&v| self.boundary[v as usize]).count())
            .sum();
        if sum_b > 2 * self.excess {
            return Err(fail(format!(
                "boundary multiplicity {sum_b} exceeds twice the excess {}",
                self.excess
            )));
        }
        Ok(())
    }

    pub fn stats(&self) -> DivisionStats {
        DivisionStats {
            n: self.clusters_of.len(),
            r: self.r,
            clusters: self.clusters.len(),
            max_cluster: self.clusters.iter().map(Vec::len).max().unwrap_or(0),
            excess: self.excess,
            boundary_vertices: self.boundary_count(),
            degraded: self.degraded,
            census_size: None,
        }
    }
}

/// Recursive r-division: split on a balanced separator until every piece
/// fits in r, recursing on both sides plus the separator. Pieces no
/// separator can make progress on (clique-like) fall back to a pairwise
/// group cover, which keeps every invariant at the price of excess.
pub fn r_division(g: &Graph, r: usize, cfg: &AlgoConfig) -> Result<RDivision> {
    if r < cfg.r_min {
        return Err(Error::RTooSmall { r, min: cfg.r_min });
    }
    let n = g.n();
    let mut scratch = DivScratch::new(n);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0xD1B5);
    let mut degraded = false;
    let mut clusters: Vec<Vec<u32>> = Vec::new();
    let mut stack: Vec<Vec<u32>> = vec![(0..n as u32).collect()];

    while let Some(members) = stack.pop() {
        scratch.set_subset(&members);
        if members.len() <= r {
            // split disconnected leftovers into connected clusters
            scratch.clear_blocked();
            clusters.extend(scratch.components(g, &members));
            continue;
        }
        if !connected_within(g, &members, &mut scratch) {
            scratch.clear_blocked();
            stack.extend(scratch.components(g, &members));
            continue;
        }
        let sub = match cfg.provider {
            SeparatorProvider::BfsLayer => bfs_layer_separator(g, &members, &mut scratch, &mut rng),
            SeparatorProvider::DegreeGreedy => degree_greedy_separator(g, &members, &mut scratch),
        };
        degraded |= sub.degraded;
        scratch.set_blocked(&sub.vertices);
        let comps = scratch.components(g, &members);
        let (a, b) = bipartition_with(&comps, members.len()).unwrap_or_default();
        if a.is_empty() || b.is_empty() {
            // This separator cannot split the piece; cover it with all
            // pairs of half-size groups instead.
            degraded = true;
            clusters.extend(pairwise_cover(g, &members, r, &mut scratch));
            continue;
        }
        let mut left = a;
        left.extend_from_slice(&sub.vertices);
        left.sort_unstable();
        let mut right = b;
        right.extend_from_slice(&sub.vertices);
        right.sort_unstable();
        debug_assert!(left.len() < members.len() && right.len() < members.len());
        stack.push(left);
        stack.push(right);
    }

    // identical clusters arise when both recursion sides shrink onto the
    // shared separator
    clusters.sort();
    clusters.dedup();
    Ok(RDivision::assemble(n, clusters, r, degraded))
}

fn connected_within(g: &Graph, members: &[u32], scratch: &mut DivScratch) -> bool {
    scratch.clear_blocked();
    scratch.bfs(g, members[0]);
    scratch.queue.len() == members.len()
}

/// Terminal cover for pieces without usable separators: one cluster per
/// pair of half-size groups, split into connected components.
fn pairwise_cover(
    g: &Graph,
    members: &[u32],
    r: usize,
    scratch: &mut DivScratch,
) -> Vec<Vec<u32>> {
    let group_size = (r / 2).max(1);
    let groups: Vec<&[u32]> = members.chunks(group_size).collect();
    let mut out = Vec::new();
    for i in 0..groups.len() {
        for j in i + 1..groups.len() {
            let mut cluster: Vec<u32> = groups[i].to_vec();
            cluster.extend_from_slice(groups[j]);
            cluster.sort_unstable();
            scratch.set_subset(&cluster);
            scratch.clear_blocked();
            out.extend(scratch.components(g, &cluster));
        }
    }
    out
}

/// All (centre, radius) pairs of the depth-`ell` boundary hypergraph: for
/// boundary v and same-cluster u with 0 < dist(u, v) < ell, the pair
/// (v, ell - dist(u, v)) is emitted. One capped BFS per boundary vertex;
/// deduplicated, sorted by boundary order.
pub fn boundary_hypergraph_census(g: &Graph, div: &RDivision, ell: u32) -> Vec<(u32, u32)> {
    boundary_hypergraph_census_counted(g, div, ell, &WorkCounter::new())
}

pub fn boundary_hypergraph_census_counted(
    g: &Graph,
    div: &RDivision,
    ell: u32,
    work: &WorkCounter,
) -> Vec<(u32, u32)> {
    if ell == 0 {
        return Vec::new();
    }
    let f = div.boundary_vertices();
    let per_v: Vec<(Vec<u32>, u64)> = exec::map_range_init(
        f.len(),
        || BfsScratch::new(g.n()),
        |scratch, i| {
            let v = f[i];
            let touched = scratch.run(g, v, ell - 1);
            let mut radii = vec![false; ell as usize + 1];
            for &c in div.clusters_of(v) {
                for &u in &div.clusters()[c as usize] {
                    if u == v {
                        continue;
                    }
                    if let Some(d) = scratch.dist_of(u) {
                        if d >= 1 && d < ell {
                            radii[(ell - d) as usize] = true;
                        }
                    }
                }
            }
            ((1..ell).filter(|&t| radii[t as usize]).collect(), touched)
        },
    );
    let mut census = Vec::new();
    let mut touched = 0u64;
    for (i, (radii, t)) in per_v.iter().enumerate() {
        touched += t;
        for &r in radii {
            census.push((f[i], r));
        }
    }
    work.add_adjacency(touched);
    census
}

// ---------------------------------------------------------------------------
// Boundary spanning paths
// ---------------------------------------------------------------------------

/// Cluster-local distance rows: for every cluster, the distances from each
/// of its boundary members to all of its members, capped at the census
/// depth (`u16::MAX` beyond it).
#[derive(Debug, Clone)]
pub struct ClusterRows {
    boundary_of: Vec<Vec<u32>>,
    widths: Vec<usize>,
    rows: Vec<Vec<u16>>,
}

impl ClusterRows {
    fn empty(clusters: usize) -> Self {
        Self {
            boundary_of: vec![Vec::new(); clusters],
            widths: vec![0; clusters],
            rows: vec![Vec::new(); clusters],
        }
    }

    /// Sorted boundary members of the cluster.
    pub fn boundary_of(&self, cluster: usize) -> &[u32] {
        &self.boundary_of[cluster]
    }

    /// dist(boundary_of(cluster)[b_idx], members[m_idx]) when within depth.
    pub fn dist(&self, cluster: usize, b_idx: usize, m_idx: usize) -> Option<u32> {
        let d = self.rows[cluster][b_idx * self.widths[cluster] + m_idx];
        (d != u16::MAX).then_some(d as u32)
    }
}

/// A spanning path for the depth-`ell` boundary hypergraph together with the
/// exact stab set of every census hyperedge.
pub struct BoundaryPaths {
    pub path: SpanningPath,
    /// (centre, radius) pairs, sorted.
    pub census: Vec<(u32, u32)>,
    /// Aligned with `census`.
    pub stabs: Vec<StabSet>,
    pub cluster_rows: ClusterRows,
    pub block_count: usize,
    pub max_stab: usize,
}

impl BoundaryPaths {
    pub fn census_index(&self, v: u32, t: u32) -> Option<usize> {
        self.census.binary_search(&(v, t)).ok()
    }
}

fn hash_ids(ids: &[u32]) -> u64 {
    let mut h = 0xcbf29ce484222325u64;
    for &x in ids {
        h ^= x as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h ^ (ids.len() as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

fn merge_disjoint_sorted(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        if a[i] < b[j] {
            out.push(a[i]);
            i += 1;
        } else {
            out.push(b[j]);
            j += 1;
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

fn common_cluster(div: &RDivision, u: u32, v: u32) -> bool {
    let (a, b) = (div.clusters_of(u), div.clusters_of(v));
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Equal => return true,
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
        }
    }
    false
}

/// Per-block incremental state: the distinct prefix-union traces created so
/// far (the arena doubles as the output hyperedge list), a content-hash
/// index with full-comparison confirmation, and one pointer per boundary
/// source to its current trace.
struct BlockTraces {
    len: usize,
    traces: Vec<Vec<u32>>,
    index: HashMap<u64, Vec<u32>>,
    ptr: Vec<u32>,
    scanned: u64,
    overflow: bool,
}

impl BlockTraces {
    fn new(len: usize, sources: usize) -> Self {
        let mut index = HashMap::new();
        index.insert(hash_ids(&[]), vec![0u32]);
        Self {
            len,
            traces: vec![Vec::new()],
            index,
            ptr: vec![0; sources],
            scanned: 0,
            overflow: false,
        }
    }

    /// One layer step: bucket entries are (source, new members) pairs; the
    /// extensions are deduplicated per current trace, each distinct
    /// extension refines its trace into a (possibly existing) union.
    fn step(&mut self, bucket: &[(u32, Vec<u32>)], trace_cap: usize) {
        if bucket.is_empty() || self.overflow {
            return;
        }
        // group sources by (current trace, extension content); bucket order
        // keeps trace creation deterministic
        struct Group {
            entry: usize,
            sources: Vec<u32>,
        }
        let mut groups: Vec<Group> = Vec::new();
        let mut by_key: HashMap<(u32, u64), Vec<u32>> = HashMap::new();
        for (e, (fi, ext)) in bucket.iter().enumerate() {
            let t = self.ptr[*fi as usize];
            let key = (t, hash_ids(ext));
            self.scanned += ext.len() as u64;
            let ids = by_key.entry(key).or_default();
            let mut placed = false;
            for &gid in ids.iter() {
                let grp = &mut groups[gid as usize];
                if bucket[grp.entry].1 == *ext {
                    grp.sources.push(*fi);
                    placed = true;
                    break;
                }
            }
            if !placed {
                ids.push(groups.len() as u32);
                groups.push(Group {
                    entry: e,
                    sources: vec![*fi],
                });
            }
        }
        for grp in &groups {
            let (_, ext) = &bucket[grp.entry];
            let t = self.ptr[grp.sources[0] as usize];
            let merged = merge_disjoint_sorted(&self.traces[t as usize], ext);
            let h = hash_ids(&merged);
            self.scanned += merged.len() as u64;
            let target = {
                let candidates = self.index.entry(h).or_default();
                let mut found = None;
                for &cand in candidates.iter() {
                    if self.traces[cand as usize] == merged {
                        found = Some(cand);
                        break;
                    }
                }
                match found {
                    Some(id) => id,
                    None => {
                        let id = self.traces.len() as u32;
                        candidates.push(id);
                        self.traces.push(merged);
                        id
                    }
                }
            };
            for &fi in &grp.sources {
                self.ptr[fi as usize] = target;
            }
        }
        if self.traces.len() > trace_cap {
            self.overflow = true;
        }
    }
}

/// Spanning path for the depth-`ell` boundary hypergraph, without ever
/// materialising it. Three stages: a lockstep layered BFS from every
/// boundary vertex feeds the per-block duplicate-eliminating trace
/// subprocedure and collects the census; the reweighting greedy runs on each
/// block's distinct traces and the block paths are concatenated; a second
/// BFS pass per boundary vertex turns distance straddles of consecutive
/// path positions into exact per-census stab sets.
pub fn boundary_spanning_path(
    g: &Graph,
    div: &RDivision,
    ell: u32,
    cfg: &AlgoConfig,
) -> Result<BoundaryPaths> {
    boundary_spanning_path_counted(g, div, ell, cfg, &WorkCounter::new())
}

pub fn boundary_spanning_path_counted(
    g: &Graph,
    div: &RDivision,
    ell: u32,
    cfg: &AlgoConfig,
    work: &WorkCounter,
) -> Result<BoundaryPaths> {
    let n = g.n();
    let f = div.boundary_vertices();
    let cluster_count = div.clusters().len();
    if f.is_empty() || ell == 0 {
        return Ok(BoundaryPaths {
            path: SpanningPath::identity(n),
            census: Vec::new(),
            stabs: Vec::new(),
            cluster_rows: ClusterRows::empty(cluster_count),
            block_count: 0,
            max_stab: 0,
        });
    }
    let cap = ell - 1;
    let block_size = cfg.block_size(n);
    let starts: Vec<u32> = (0..n).step_by(block_size).map(|s| s as u32).collect();
    let p = starts.len();
    let bit_words = n.div_ceil(64);
    let trace_cap = (cfg.sauer_slack * sauer_bound(block_size, cfg.d)).min(1e18) as usize + 2;

    struct Source {
        v: u32,
        visited: Vec<u64>,
        frontier: Vec<u32>,
        next: Vec<u32>,
        census: Vec<bool>,
        touched: u64,
    }
    let mut sources: Vec<Source> = f
        .iter()
        .map(|&v| {
            let mut visited = vec![0u64; bit_words];
            visited[v as usize / 64] |= 1 << (v % 64);
            Source {
                v,
                visited,
                frontier: vec![v],
                next: Vec::new(),
                census: vec![false; ell as usize],
                touched: 0,
            }
        })
        .collect();
    let mut blocks: Vec<BlockTraces> = (0..p)
        .map(|b| BlockTraces::new(block_size.min(n - starts[b] as usize), f.len()))
        .collect();
    let mut buckets: Vec<Vec<(u32, Vec<u32>)>> = vec![Vec::new(); p];

    for layer in 0..=cap {
        if layer > 0 {
            exec::for_each_mut(&mut sources, |s| {
                s.next.clear();
                for &u in &s.frontier {
                    let nbrs = g.neighbours(u);
                    s.touched += nbrs.len() as u64;
                    for &w in nbrs {
                        let (wi, wb) = (w as usize / 64, 1u64 << (w % 64));
                        if s.visited[wi] & wb == 0 {
                            s.visited[wi] |= wb;
                            s.next.push(w);
                        }
                    }
                }
                std::mem::swap(&mut s.frontier, &mut s.next);
                s.frontier.sort_unstable();
            });
            if sources.iter().all(|s| s.frontier.is_empty()) {
                break;
            }
            // census: every new vertex sits at distance `layer`, so a single
            // same-cluster hit certifies the radius ell - layer
            let radius = (ell - layer) as usize;
            exec::for_each_mut(&mut sources, |s| {
                if !s.census[radius] {
                    s.census[radius] = s.frontier.iter().any(|&u| common_cluster(div, u, s.v));
                }
            });
        }
        // feed the per-block subprocedures
        for bucket in &mut buckets {
            bucket.clear();
        }
        for (fi, s) in sources.iter().enumerate() {
            let fr = &s.frontier;
            let mut i = 0;
            while i < fr.len() {
                let b = fr[i] as usize / block_size;
                let lo = starts[b];
                let hi = lo + blocks[b].len as u32;
                let mut j = i;
                while j < fr.len() && fr[j] < hi {
                    j += 1;
                }
                buckets[b].push((fi as u32, fr[i..j].iter().map(|&x| x - lo).collect()));
                i = j;
            }
        }
        exec::zip_for_each(&mut blocks, &buckets, |blk, bucket| {
            blk.step(bucket, trace_cap)
        });
    }
    work.add_adjacency(sources.iter().map(|s| s.touched).sum());
    work.add_hyperedge(blocks.iter().map(|b| b.scanned).sum());
    if let Some(blk) = blocks.iter().find(|b| b.overflow) {
        return Err(Error::TraceOverflow {
            traces: blk.traces.len(),
            cap: trace_cap,
        });
    }

    // census radii per source, then release the BFS bitmaps
    let radii_of: Vec<Vec<u32>> = sources
        .iter()
        .map(|s| {
            (1..ell).filter(|&t| s.census[t as usize]).collect()
        })
        .collect();
    drop(sources);

    // one reweighting path per block, concatenated in block order
    let opts_base = CwOptions::from_config(cfg);
    let block_paths: Vec<(SpanningPath, u64)> = exec::map_range(p, |b| {
        let blk = &blocks[b];
        let edges: Vec<Vec<u32>> = blk.traces[1..].to_vec();
        let local = Hypergraph::from_sorted_edges(blk.len, edges, true);
        let opts = CwOptions {
            seed: opts_base.seed ^ (b as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ 0xB0,
            ..opts_base.clone()
        };
        let (tree, words) = crate::stabbing::cw_tree_counted(&local, &opts);
        (crate::stabbing::preorder_path(blk.len, &tree), words)
    });
    work.add_hyperedge(block_paths.iter().map(|(_, w)| *w).sum());
    let mut inverse = Vec::with_capacity(n);
    for (b, (bp, _)) in block_paths.iter().enumerate() {
        let lo = starts[b];
        inverse.extend(bp.inverse().iter().map(|&x| x + lo));
    }
    let path = SpanningPath::from_inverse(inverse);

    // second pass: exact stab sets per census pair plus cluster-local rows
    struct PassTwo {
        stabs: Vec<StabSet>,
        rows: Vec<(u32, Vec<u16>)>,
        touched: u64,
        scanned: u64,
    }
    let outs: Vec<PassTwo> = exec::map_range_init(
        f.len(),
        || BfsScratch::new(n),
        |scratch, fi| {
            let v = f[fi];
            let radii = &radii_of[fi];
            let touched = scratch.run(g, v, cap);
            let mut rows = Vec::new();
            for &c in div.clusters_of(v) {
                let members = &div.clusters()[c as usize];
                let row: Vec<u16> = members
                    .iter()
                    .map(|&u| match scratch.dist_of(u) {
                        Some(d) if d < u16::MAX as u32 => d as u16,
                        _ => u16::MAX,
                    })
                    .collect();
                rows.push((c, row));
            }
            let mut lists: Vec<Vec<u32>> = vec![Vec::new(); radii.len()];
            let mut scanned = 0u64;
            if !radii.is_empty() {
                let beyond = cap + 1;
                let mut dx = scratch.dist_of(path.vertex_at(0)).unwrap_or(beyond);
                let d0 = dx;
                for pos in 0..n as u32 - 1 {
                    let dy = scratch.dist_of(path.vertex_at(pos + 1)).unwrap_or(beyond);
                    if dx != dy {
                        let (lo, hi) = (dx.min(dy), dx.max(dy));
                        let from = radii.partition_point(|&t| t < lo);
                        let to = radii.partition_point(|&t| t < hi);
                        for list in lists[from..to].iter_mut() {
                            list.push(pos);
                        }
                    }
                    dx = dy;
                }
                scanned += n as u64;
                let stabs = radii
                    .iter()
                    .zip(lists)
                    .map(|(&t, positions)| StabSet {
                        hyperedge: 0,
                        positions,
                        first_in: d0 <= t,
                    })
                    .collect();
                return PassTwo {
                    stabs,
                    rows,
                    touched,
                    scanned,
                };
            }
            PassTwo {
                stabs: Vec::new(),
                rows,
                touched,
                scanned,
            }
        },
    );
    work.add_adjacency(outs.iter().map(|o| o.touched).sum());
    work.add_hyperedge(outs.iter().map(|o| o.scanned).sum());

    // assemble census, stabs, rows
    let widths: Vec<usize> = div.clusters().iter().map(Vec::len).collect();
    let boundary_of: Vec<Vec<u32>> = div
        .clusters()
        .iter()
        .map(|c| c.iter().copied().filter(|&u| div.is_boundary(u)).collect())
        .collect();
    let mut rows: Vec<Vec<u16>> = boundary_of
        .iter()
        .zip(&widths)
        .map(|(b, &w)| vec![u16::MAX; b.len() * w])
        .collect();
    let mut census = Vec::new();
    let mut stabs = Vec::new();
    let mut max_stab = 0usize;
    for (fi, out) in outs.into_iter().enumerate() {
        let v = f[fi];
        for (t, mut s) in radii_of[fi].iter().zip(out.stabs) {
            s.hyperedge = census.len() as u32;
            max_stab = max_stab.max(s.count());
            census.push((v, *t));
            stabs.push(s);
        }
        for (c, row) in out.rows {
            let b_idx = boundary_of[c as usize]
                .binary_search(&v)
                .expect("boundary member");
            let w = widths[c as usize];
            rows[c as usize][b_idx * w..(b_idx + 1) * w].copy_from_slice(&row);
        }
    }
    Ok(BoundaryPaths {
        path,
        census,
        stabs,
        cluster_rows: ClusterRows {
            boundary_of,
            widths,
            rows,
        },
        block_count: p,
        max_stab,
    })
}

#[cfg(test)]
mod boundary_tests {
    use super::*;
    use crate::graph::ball;
    use crate::harness::{gen_grid, gen_perturbed_grid};
    use crate::hypergraph::Hypergraph as H;
    use crate::stabbing::{partitioned_spanning_path, stabbed_edges};

    fn path_graph(n: usize) -> Graph {
        let edges: Vec<(u32, u32)> = (0..n as u32 - 1).map(|i| (i, i + 1)).collect();
        Graph::from_edges(n, &edges).unwrap()
    }

    #[test]
    fn empty_census_gives_identity_path() {
        let g = gen_grid(4, 4).unwrap();
        let div = r_division(&g, 16, &AlgoConfig::default()).unwrap();
        let bp = boundary_spanning_path(&g, &div, 6, &AlgoConfig::default()).unwrap();
        assert!(bp.census.is_empty());
        assert_eq!(bp.path.inverse(), SpanningPath::identity(16).inverse());
    }

    #[test]
    fn two_cluster_path_exact_stabs() {
        let g = path_graph(20);
        let clusters = vec![(0..=10).collect::<Vec<u32>>(), (10..20).collect()];
        let div = RDivision::from_clusters(&g, clusters, 11).unwrap();
        let bp = boundary_spanning_path(&g, &div, 6, &AlgoConfig::default()).unwrap();
        assert!(!bp.census.is_empty());
        assert_eq!(bp.census, boundary_hypergraph_census(&g, &div, 6));
        for (i, &(v, t)) in bp.census.iter().enumerate() {
            let explicit = ball(&g, v, t);
            let expect = stabbed_edges(&bp.path, i as u32, &explicit);
            assert_eq!(bp.stabs[i].positions, expect.positions, "pair ({v},{t})");
            assert_eq!(bp.stabs[i].first_in, expect.first_in);
        }
    }

    #[test]
    fn grid_stabs_match_explicit_balls() {
        let g = gen_perturbed_grid(12, 12, 0.15, 3).unwrap();
        let div = r_division(&g, 36, &AlgoConfig::default()).unwrap();
        for ell in [2u32, 5, 9] {
            let bp = boundary_spanning_path(&g, &div, ell, &AlgoConfig::default()).unwrap();
            assert_eq!(bp.census, boundary_hypergraph_census(&g, &div, ell));
            for (i, &(v, t)) in bp.census.iter().enumerate() {
                let expect = stabbed_edges(&bp.path, i as u32, &ball(&g, v, t));
                assert_eq!(bp.stabs[i].positions, expect.positions);
                assert_eq!(bp.stabs[i].first_in, expect.first_in);
            }
        }
    }

    #[test]
    fn cluster_rows_match_bfs() {
        let g = gen_grid(10, 10).unwrap();
        let div = r_division(&g, 25, &AlgoConfig::default()).unwrap();
        let ell = 7;
        let bp = boundary_spanning_path(&g, &div, ell, &AlgoConfig::default()).unwrap();
        for (c, members) in div.clusters().iter().enumerate() {
            for (bi, &v) in bp.cluster_rows.boundary_of(c).iter().enumerate() {
                let dv = crate::graph::bfs_distances(&g, v);
                for (mi, &u) in members.iter().enumerate() {
                    let want = dv.dist[u as usize];
                    match bp.cluster_rows.dist(c, bi, mi) {
                        Some(d) => assert_eq!(d, want),
                        None => assert!(want >= ell, "({v},{u}): {want}"),
                    }
                }
            }
        }
    }

    #[test]
    fn comparable_to_explicit_materialisation() {
        // Materialise the whole boundary hypergraph on a 32x32 grid and
        // compare the max stab against the partitioned construction on it.
        let g = gen_grid(32, 32).unwrap();
        let cfg = AlgoConfig::default();
        let div = r_division(&g, 64, &cfg).unwrap();
        let ell = 8;
        let bp = boundary_spanning_path(&g, &div, ell, &cfg).unwrap();
        let census = boundary_hypergraph_census(&g, &div, ell);
        let edges: Vec<Vec<u32>> = census.iter().map(|&(v, t)| ball(&g, v, t)).collect();
        let h = H::new(g.n(), edges).unwrap();
        let naive = partitioned_spanning_path(&h, &cfg);
        let naive_max = naive.stabs.iter().map(StabSet::count).max().unwrap_or(0);
        assert!(
            bp.max_stab <= naive_max + naive.block_count,
            "{} vs {} + {}",
            bp.max_stab,
            naive_max,
            naive.block_count
        );
    }
}

#[cfg(test)]
mod division_tests {
    use super::*;
    use crate::harness::gen_grid;

    fn path_graph(n: usize) -> Graph {
        let edges: Vec<(u32, u32)> = (0..n as u32 - 1).map(|i| (i, i + 1)).collect();
        Graph::from_edges(n, &edges).unwrap()
    }

    fn complete_graph(n: usize) -> Graph {
        let mut edges = Vec::new();
        for u in 0..n as u32 {
            for v in u + 1..n as u32 {
                edges.push((u, v));
            }
        }
        Graph::from_edges(n, &edges).unwrap()
    }

    #[test]
    fn separator_on_path_is_middle_vertex() {
        let g = path_graph(9);
        let sep = balanced_separator(&g, &AlgoConfig::default()).unwrap();
        assert!(!sep.degraded);
        assert_eq!(sep.vertices, vec![4]);
        assert_eq!(sep.side_a.len(), 4);
        assert_eq!(sep.side_b.len(), 4);
    }

    #[test]
    fn separator_on_grid_is_small_and_balanced() {
        let g = gen_grid(16, 16).unwrap();
        let sep = balanced_separator(&g, &AlgoConfig::default()).unwrap();
        assert!(!sep.degraded);
        assert!(sep.vertices.len() <= 16, "|S| = {}", sep.vertices.len());
        assert!(3 * sep.side_a.len() <= 2 * 256);
        assert!(3 * sep.side_b.len() <= 2 * 256);
        let in_a: std::collections::HashSet<u32> = sep.side_a.iter().copied().collect();
        let in_b: std::collections::HashSet<u32> = sep.side_b.iter().copied().collect();
        for (u, v) in g.edges() {
            assert!(!(in_a.contains(&u) && in_b.contains(&v)));
            assert!(!(in_b.contains(&u) && in_a.contains(&v)));
        }
    }

    #[test]
    fn separator_on_clique_degrades() {
        let g = complete_graph(5);
        let sep = balanced_separator(&g, &AlgoConfig::default()).unwrap();
        assert!(sep.degraded);
    }

    #[test]
    fn degree_greedy_provider_works() {
        let g = gen_grid(8, 8).unwrap();
        let cfg = AlgoConfig {
            provider: SeparatorProvider::DegreeGreedy,
            ..AlgoConfig::default()
        };
        let sep = balanced_separator(&g, &cfg).unwrap();
        assert!(!sep.degraded);
        assert!(3 * sep.side_a.len() <= 2 * 64);
        assert!(3 * sep.side_b.len() <= 2 * 64);
    }

    #[test]
    fn bipartition_two_even_components() {
        let mut e: Vec<(u32, u32)> = (0..4u32).map(|i| (i, (i + 1) % 4)).collect();
        e.extend((5..8u32).map(|i| (i, i + 1)));
        e.push((8, 5));
        e.push((0, 4));
        e.push((4, 5));
        let g = Graph::from_edges(9, &e).unwrap();
        let (a, b) = bipartition_components(&g, &[4]).unwrap();
        assert_eq!(a, vec![0, 1, 2, 3]);
        assert_eq!(b, vec![5, 6, 7, 8]);
    }

    #[test]
    fn bipartition_five_even_components() {
        // 5 components of size 2 after removing the hub: both sides <= 2n/3.
        let mut edges = Vec::new();
        for i in 0..5u32 {
            edges.push((2 * i, 2 * i + 1));
            edges.push((2 * i, 10));
        }
        let g = Graph::from_edges(11, &edges).unwrap();
        let (a, b) = bipartition_components(&g, &[10]).unwrap();
        assert_eq!(a.len() + b.len(), 10);
        assert!(
            3 * a.len() <= 22 && 3 * b.len() <= 22,
            "{}/{}",
            a.len(),
            b.len()
        );
    }

    #[test]
    fn bipartition_rejects_oversized_component() {
        let g = path_graph(10);
        match bipartition_components(&g, &[9]) {
            Err(Error::UnbalancedComponent { size, .. }) => assert_eq!(size, 9),
            other => panic!("expected UnbalancedComponent, got {other:?}"),
        }
    }

    #[test]
    fn r_division_single_cluster() {
        let g = gen_grid(4, 4).unwrap();
        let div = r_division(&g, 16, &AlgoConfig::default()).unwrap();
        assert_eq!(div.clusters().len(), 1);
        assert_eq!(div.excess(), 0);
        div.validate(&g).unwrap();
    }

    #[test]
    fn r_division_grid_invariants() {
        let g = gen_grid(32, 32).unwrap();
        let div = r_division(&g, 64, &AlgoConfig::default()).unwrap();
        assert!(!div.degraded());
        div.validate(&g).unwrap();
        assert!(div.clusters().iter().all(|c| c.len() <= 64));
    }

    #[test]
    fn r_division_excess_scales_with_sqrt_r() {
        let g = gen_grid(64, 64).unwrap();
        let n = 4096f64;
        for r in [64usize, 128, 256] {
            let div = r_division(&g, r, &AlgoConfig::default()).unwrap();
            div.validate(&g).unwrap();
            let ratio = div.excess() as f64 / (n / (r as f64).sqrt());
            assert!(ratio <= 8.0, "r={r}: excess ratio {ratio}");
        }
    }

    #[test]
    fn r_division_rejects_small_r() {
        let g = gen_grid(4, 4).unwrap();
        assert!(matches!(
            r_division(&g, 4, &AlgoConfig::default()),
            Err(Error::RTooSmall { .. })
        ));
    }

    #[test]
    fn r_division_on_clique_stays_valid() {
        let g = complete_graph(40);
        let div = r_division(&g, 16, &AlgoConfig::default()).unwrap();
        assert!(div.degraded());
        div.validate(&g).unwrap();
    }

    #[test]
    fn census_examples() {
        let g = gen_grid(4, 4).unwrap();
        let div = r_division(&g, 16, &AlgoConfig::default()).unwrap();
        assert!(boundary_hypergraph_census(&g, &div, 4).is_empty());

        let g = gen_grid(6, 6).unwrap();
        let div = r_division(&g, 18, &AlgoConfig::default()).unwrap();
        assert!(boundary_hypergraph_census(&g, &div, 1).is_empty());

        let g = gen_grid(16, 16).unwrap();
        let div = r_division(&g, 32, &AlgoConfig::default()).unwrap();
        let census = boundary_hypergraph_census(&g, &div, 4);
        assert!(!census.is_empty());
        let cap = 4.0 * 256.0 * (32f64).sqrt();
        assert!(
            (census.len() as f64) < cap,
            "census {} vs {cap}",
            census.len()
        );
        let mut seen = std::collections::HashSet::new();
        for &(v, t) in &census {
            assert!(div.is_boundary(v));
            assert!((1..4).contains(&t));
            assert!(seen.insert((v, t)));
        }
    }

    #[test]
    fn manual_division_fixture() {
        let g = path_graph(20);
        let clusters = vec![(0..=10).collect::<Vec<u32>>(), (10..20).collect()];
        let div = RDivision::from_clusters(&g, clusters, 11).unwrap();
        assert_eq!(div.boundary_vertices(), vec![10]);
        assert_eq!(div.excess(), 1);
    }
}
