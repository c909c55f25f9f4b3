//! Spanning paths of low stabbing number.
//!
//! The reweighting greedy (after Chazelle-Welzl): hyperedge weights start at
//! one; repeatedly contract the pair of active vertices whose crossing weight
//! is minimum, doubling the weight of every hyperedge the pair stabs; the
//! recorded contraction edges form a spanning tree which a preorder walk
//! turns into a path. `partitioned_spanning_path` runs the greedy on blocks
//! of a vertex partition and concatenates, trading stabbing quality for a
//! near-linear trace-computation pass.

use crate::config::AlgoConfig;
use crate::exec;
use crate::hypergraph::{duplicate_representatives, Hypergraph};
use crate::stats::WorkCounter;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A total ordering of `0..n`: `order[v]` is the position of vertex v,
/// `inverse[p]` the vertex at position p.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanningPath {
    order: Vec<u32>,
    inverse: Vec<u32>,
}

impl SpanningPath {
    pub fn identity(n: usize) -> Self {
        let ids: Vec<u32> = (0..n as u32).collect();
        Self {
            order: ids.clone(),
            inverse: ids,
        }
    }

    /// Builds from the position -> vertex map.
    pub fn from_inverse(inverse: Vec<u32>) -> Self {
        let mut order = vec![u32::MAX; inverse.len()];
        for (pos, &v) in inverse.iter().enumerate() {
            debug_assert_eq!(order[v as usize], u32::MAX, "not a permutation");
            order[v as usize] = pos as u32;
        }
        debug_assert!(order.iter().all(|&p| p != u32::MAX));
        Self { order, inverse }
    }

    pub fn n(&self) -> usize {
        self.order.len()
    }

    pub fn position(&self, v: u32) -> u32 {
        self.order[v as usize]
    }

    pub fn vertex_at(&self, pos: u32) -> u32 {
        self.inverse[pos as usize]
    }

    pub fn order(&self) -> &[u32] {
        &self.order
    }

    pub fn inverse(&self) -> &[u32] {
        &self.inverse
    }

    /// Sorted positions of the given vertices.
    pub fn positions_of(&self, q: &[u32]) -> Vec<u32> {
        let mut pos: Vec<u32> = q.iter().map(|&v| self.position(v)).collect();
        pos.sort_unstable();
        pos
    }
}

/// The path edges stabbed by one hyperedge: sorted indices p such that the
/// path edge (p, p+1) has exactly one endpoint in the hyperedge, plus the
/// membership of position 0 (which fixes membership everywhere else).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabSet {
    pub hyperedge: u32,
    pub positions: Vec<u32>,
    pub first_in: bool,
}

impl StabSet {
    pub fn count(&self) -> usize {
        self.positions.len()
    }

    /// Membership of the last position, determined by flip parity.
    pub fn last_in(&self) -> bool {
        self.first_in ^ (self.positions.len() % 2 == 1)
    }
}

/// Sorted, pairwise disjoint, non-adjacent (maximal) inclusive runs [a, b].
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct IntervalSet {
    runs: Vec<(u32, u32)>,
}

impl IntervalSet {
    pub fn new(mut runs: Vec<(u32, u32)>) -> Self {
        runs.sort_unstable();
        Self::merge_sorted(runs)
    }

    fn merge_sorted(runs: Vec<(u32, u32)>) -> Self {
        let mut merged: Vec<(u32, u32)> = Vec::with_capacity(runs.len());
        for (a, b) in runs {
            debug_assert!(a <= b);
            match merged.last_mut() {
                Some(last) if a <= last.1.saturating_add(1) => last.1 = last.1.max(b),
                _ => merged.push((a, b)),
            }
        }
        Self { runs: merged }
    }

    pub fn runs(&self) -> &[(u32, u32)] {
        &self.runs
    }

    pub fn run_count(&self) -> usize {
        self.runs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.runs.is_empty()
    }

    /// Total number of covered positions.
    pub fn len(&self) -> usize {
        self.runs.iter().map(|&(a, b)| (b - a + 1) as usize).sum()
    }

    /// Rebuilds the covered positions from flip positions and parity.
    pub fn from_stabs(s: &StabSet, n: usize) -> Self {
        if n == 0 {
            return Self::default();
        }
        let mut runs = Vec::new();
        let mut inside = s.first_in;
        let mut start = 0u32;
        for &p in &s.positions {
            debug_assert!((p as usize) < n - 1);
            if inside {
                runs.push((start, p));
            }
            inside = !inside;
            start = p + 1;
        }
        if inside {
            runs.push((start, n as u32 - 1));
        }
        Self { runs }
    }

    /// Runs of consecutive values in a sorted position list.
    pub fn from_sorted_positions(pos: &[u32]) -> Self {
        let mut runs = Vec::new();
        let mut i = 0;
        while i < pos.len() {
            let mut j = i;
            while j + 1 < pos.len() && pos[j + 1] == pos[j] + 1 {
                j += 1;
            }
            runs.push((pos[i], pos[j]));
            i = j + 1;
        }
        Self { runs }
    }

    /// Complement within positions [0, n).
    pub fn complement(&self, n: usize) -> Self {
        let mut runs = Vec::new();
        let mut next = 0u32;
        for &(a, b) in &self.runs {
            if a > next {
                runs.push((next, a - 1));
            }
            next = b + 1;
        }
        if (next as usize) < n {
            runs.push((next, n as u32 - 1));
        }
        Self { runs }
    }

    /// Union of several interval sets (maximal runs).
    pub fn union_of<'a>(sets: impl IntoIterator<Item = &'a IntervalSet>) -> Self {
        let mut runs: Vec<(u32, u32)> = sets
            .into_iter()
            .flat_map(|s| s.runs.iter().copied())
            .collect();
        runs.sort_unstable();
        Self::merge_sorted(runs)
    }

    pub fn contains(&self, pos: u32) -> bool {
        self.runs
            .binary_search_by(|&(a, b)| {
                if b < pos {
                    std::cmp::Ordering::Less
                } else if a > pos {
                    std::cmp::Ordering::Greater
                } else {
                    std::cmp::Ordering::Equal
                }
            })
            .is_ok()
    }

    /// Whether two interval sets share a position (merge walk).
    pub fn intersects(&self, other: &IntervalSet) -> bool {
        let (mut i, mut j) = (0, 0);
        while i < self.runs.len() && j < other.runs.len() {
            let (a1, b1) = self.runs[i];
            let (a2, b2) = other.runs[j];
            if a1 <= b2 && a2 <= b1 {
                return true;
            }
            if b1 < b2 {
                i += 1;
            } else {
                j += 1;
            }
        }
        false
    }

    /// Stab positions and first-position membership of the covered set,
    /// viewed as a hyperedge on a path of length n.
    pub fn to_stabs(&self, hyperedge: u32, n: usize) -> StabSet {
        let mut positions = Vec::with_capacity(2 * self.runs.len());
        for &(a, b) in &self.runs {
            if a > 0 {
                positions.push(a - 1);
            }
            if (b as usize) < n - 1 {
                positions.push(b);
            }
        }
        StabSet {
            hyperedge,
            positions,
            first_in: self.runs.first().is_some_and(|&(a, _)| a == 0),
        }
    }
}

/// Exactly the path-edge indices where membership in `q` flips.
pub fn stabbed_edges(path: &SpanningPath, hyperedge: u32, q: &[u32]) -> StabSet {
    let n = path.n();
    let pos = path.positions_of(q);
    let mut positions = Vec::new();
    let first_in = pos.first() == Some(&0);
    let mut i = 0;
    while i < pos.len() {
        let mut j = i;
        while j + 1 < pos.len() && pos[j + 1] == pos[j] + 1 {
            j += 1;
        }
        let (a, b) = (pos[i], pos[j]);
        if a > 0 {
            positions.push(a - 1);
        }
        if (b as usize) < n - 1 {
            positions.push(b);
        }
        i = j + 1;
    }
    StabSet {
        hyperedge,
        positions,
        first_in,
    }
}

/// Interval representation of a stab set plus its complement
/// (the membership runs and the non-membership runs of the path).
pub fn intervals_from_stabs(s: &StabSet, n: usize) -> (IntervalSet, IntervalSet) {
    let inside = IntervalSet::from_stabs(s, n);
    let outside = inside.complement(n);
    (inside, outside)
}

/// Max and mean stabbed-edge count of `path` over the hyperedges of `h`.
pub fn measure_stabbing(path: &SpanningPath, h: &Hypergraph) -> (usize, f64) {
    if h.edge_count() == 0 {
        return (0, 0.0);
    }
    let counts = exec::map_slice(h.edges(), |q| stabbed_edges(path, 0, q).count());
    let max = counts.iter().copied().max().unwrap_or(0);
    let sum: usize = counts.iter().sum();
    (max, sum as f64 / counts.len() as f64)
}

/// True iff the union of all runs covers every position in [0, n).
pub fn union_cover_check<'a>(sets: impl IntoIterator<Item = &'a IntervalSet>, n: usize) -> bool {
    let mut runs: Vec<(u32, u32)> = sets
        .into_iter()
        .flat_map(|s| s.runs().iter().copied())
        .collect();
    runs.sort_unstable();
    covers_all_sorted(&runs, n)
}

/// Sweep over start-sorted runs; shared by the cover checks.
pub(crate) fn covers_all_sorted(runs: &[(u32, u32)], n: usize) -> bool {
    if n == 0 {
        return true;
    }
    let mut reach: i64 = -1;
    for &(a, b) in runs {
        if a as i64 > reach + 1 {
            return false;
        }
        reach = reach.max(b as i64);
        if reach >= n as i64 - 1 {
            return true;
        }
    }
    reach >= n as i64 - 1
}

/// Options for the reweighting greedy.
#[derive(Debug, Clone, Default)]
pub struct CwOptions {
    /// Above this many active vertices a round evaluates a random
    /// sqrt-sized subset of the candidate pairs instead of all of them.
    pub sample_above: Option<usize>,
    pub seed: u64,
}

impl CwOptions {
    pub fn from_config(cfg: &AlgoConfig) -> Self {
        Self {
            sample_above: cfg.cw_sample_above,
            seed: cfg.seed,
        }
    }

    fn block_seed(&self, block: usize) -> u64 {
        self.seed ^ (block as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)
    }
}

/// The contraction tree of the reweighting greedy (n-1 edges).
pub fn cw_spanning_tree(h: &Hypergraph, opts: &CwOptions) -> Vec<(u32, u32)> {
    cw_tree_counted(h, opts).0
}

/// Tree plus the number of incidence words scanned by pair evaluations.
pub(crate) fn cw_tree_counted(h: &Hypergraph, opts: &CwOptions) -> (Vec<(u32, u32)>, u64) {
    debug_assert!(h.is_deduped() || h.edge_count() <= 1);
    let n = h.universe();
    if n <= 1 {
        return (Vec::new(), 0);
    }
    let r = h.edge_count();
    let words = r.div_ceil(64).max(1);
    let mut inc = vec![0u64; n * words];
    for (i, q) in h.edges().iter().enumerate() {
        for &x in q {
            inc[x as usize * words + i / 64] |= 1 << (i % 64);
        }
    }
    let mut weight = vec![1.0f64; r];
    let mut max_weight = 1.0f64;
    let mut active: Vec<u32> = (0..n as u32).collect();
    let mut tree = Vec::with_capacity(n - 1);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut scanned_words = 0u64;

    let crossing = |inc: &[u64], weight: &[f64], u: u32, v: u32| -> f64 {
        let (ru, rv) = (u as usize * words, v as usize * words);
        let mut total = 0.0;
        for w in 0..words {
            let mut x = inc[ru + w] ^ inc[rv + w];
            while x != 0 {
                let bit = x.trailing_zeros() as usize;
                total += weight[w * 64 + bit];
                x &= x - 1;
            }
        }
        total
    };

    while active.len() > 1 {
        let a = active.len();
        let full_pairs = a * (a - 1) / 2;
        let sample = match opts.sample_above {
            Some(limit) if a > limit => Some(
                ((full_pairs as f64).sqrt().ceil() as usize)
                    .max(64)
                    .min(full_pairs),
            ),
            _ => None,
        };
        let mut best: Option<(f64, u32, u32)> = None;
        let mut eval_sum = 0.0;
        let mut eval_cnt = 0usize;
        let mut consider = |u: u32, v: u32, best: &mut Option<(f64, u32, u32)>| {
            let (u, v) = if u < v { (u, v) } else { (v, u) };
            let w = crossing(&inc, &weight, u, v);
            eval_sum += w;
            eval_cnt += 1;
            let better = match *best {
                None => true,
                Some((bw, bu, bv)) => w < bw || (w == bw && (u, v) < (bu, bv)),
            };
            if better {
                *best = Some((w, u, v));
            }
        };
        match sample {
            None => {
                for i in 0..a {
                    for j in i + 1..a {
                        consider(active[i], active[j], &mut best);
                    }
                }
            }
            Some(k) => {
                for _ in 0..k {
                    let i = rng.gen_range(0..a);
                    let mut j = rng.gen_range(0..a - 1);
                    if j >= i {
                        j += 1;
                    }
                    consider(active[i], active[j], &mut best);
                }
            }
        }
        let (w, u, v) = best.expect("at least one candidate pair");
        scanned_words += (eval_cnt * words) as u64;
        // The minimum can never exceed the candidate average.
        debug_assert!(eval_cnt > 0 && w <= eval_sum / eval_cnt as f64 + 1e-9);

        tree.push((u, v));
        // Double stabbed weights, then contract v into u (the surviving
        // class keeps the representative's incidence).
        let (ru, rv) = (u as usize * words, v as usize * words);
        for wd in 0..words {
            let mut x = inc[ru + wd] ^ inc[rv + wd];
            while x != 0 {
                let bit = x.trailing_zeros() as usize;
                let q = wd * 64 + bit;
                weight[q] *= 2.0;
                max_weight = max_weight.max(weight[q]);
                x &= x - 1;
            }
        }
        if max_weight > 1e280 {
            // Only relative order matters; rescale.
            for wq in weight.iter_mut() {
                *wq /= max_weight;
            }
            max_weight = 1.0;
        }
        let pos = active.iter().position(|&x| x == v).unwrap();
        active.remove(pos);
    }
    (tree, scanned_words)
}

/// Deterministic preorder walk of a spanning tree, rooted at vertex 0 with
/// children visited in ascending id order.
pub fn preorder_path(n: usize, tree: &[(u32, u32)]) -> SpanningPath {
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in tree {
        adj[u as usize].push(v);
        adj[v as usize].push(u);
    }
    for l in &mut adj {
        l.sort_unstable();
    }
    let mut inverse = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    let mut stack = vec![0u32];
    while let Some(v) = stack.pop() {
        if seen[v as usize] {
            continue;
        }
        seen[v as usize] = true;
        inverse.push(v);
        for &w in adj[v as usize].iter().rev() {
            if !seen[w as usize] {
                stack.push(w);
            }
        }
    }
    debug_assert_eq!(inverse.len(), n, "tree must span all vertices");
    SpanningPath::from_inverse(inverse)
}

/// Spanning path by iterative reweighting plus preorder linearisation.
/// Deterministic; intended for deduplicated hypergraphs of block size.
pub fn cw_spanning_path(h: &Hypergraph) -> SpanningPath {
    cw_spanning_path_with(h, &CwOptions::default())
}

pub fn cw_spanning_path_with(h: &Hypergraph, opts: &CwOptions) -> SpanningPath {
    let tree = cw_spanning_tree(h, opts);
    preorder_path(h.universe(), &tree)
}

/// Output of the block-partitioned construction.
pub struct PartitionedPath {
    pub path: SpanningPath,
    /// One stab set per hyperedge of the input, aligned by index.
    pub stabs: Vec<StabSet>,
    pub block_count: usize,
    pub block_max_stabs: Vec<usize>,
}

/// Partitions the universe into contiguous blocks of size `ceil(n^eta)`,
/// deduplicates the hyperedge traces on each block in one scan, runs the
/// reweighting greedy per block, and concatenates the block paths. A final
/// scan extracts every hyperedge's stab set.
pub fn partitioned_spanning_path(h: &Hypergraph, cfg: &AlgoConfig) -> PartitionedPath {
    partitioned_spanning_path_counted(h, cfg, &WorkCounter::new())
}

pub fn partitioned_spanning_path_counted(
    h: &Hypergraph,
    cfg: &AlgoConfig,
    work: &WorkCounter,
) -> PartitionedPath {
    let n = h.universe();
    if n == 0 {
        return PartitionedPath {
            path: SpanningPath::identity(0),
            stabs: Vec::new(),
            block_count: 0,
            block_max_stabs: Vec::new(),
        };
    }
    let block_size = cfg.block_size(n);
    let starts: Vec<u32> = (0..n).step_by(block_size).map(|s| s as u32).collect();
    let p = starts.len();

    // One scan of h: the trace of a hyperedge on a contiguous block is a
    // contiguous slice of its sorted member list.
    let mut block_traces: Vec<Vec<Vec<u32>>> = vec![Vec::new(); p];
    for q in h.edges() {
        let mut i = 0;
        while i < q.len() {
            let b = q[i] as usize / block_size;
            let lo = starts[b];
            let hi = (lo as usize + block_size).min(n) as u32;
            let mut j = i;
            while j < q.len() && q[j] < hi {
                j += 1;
            }
            block_traces[b].push(q[i..j].iter().map(|&x| x - lo).collect());
            i = j;
        }
    }
    work.add_hyperedge(h.size() as u64);

    let opts_base = CwOptions::from_config(cfg);
    struct BlockOut {
        local_path: SpanningPath,
        max_stab: usize,
        cw_words: u64,
    }
    let blocks: Vec<BlockOut> = exec::map_range(p, |b| {
        let traces = &block_traces[b];
        let lo = starts[b] as usize;
        let len = block_size.min(n - lo);
        let reps = duplicate_representatives(len, traces);
        let mut dedup: Vec<Vec<u32>> = Vec::new();
        for (i, rep) in reps.iter().enumerate() {
            if *rep as usize == i && !traces[i].is_empty() {
                dedup.push(traces[i].clone());
            }
        }
        let local = Hypergraph::from_sorted_edges(len, dedup, true);
        let opts = CwOptions {
            seed: opts_base.block_seed(b),
            ..opts_base.clone()
        };
        let (tree, cw_words) = cw_tree_counted(&local, &opts);
        let local_path = preorder_path(len, &tree);
        let (max_stab, _) = measure_stabbing(&local_path, &local);
        BlockOut {
            local_path,
            max_stab,
            cw_words,
        }
    });
    work.add_hyperedge(blocks.iter().map(|b| b.cw_words).sum());

    let mut inverse = Vec::with_capacity(n);
    for (b, out) in blocks.iter().enumerate() {
        let lo = starts[b];
        inverse.extend(out.local_path.inverse().iter().map(|&x| x + lo));
    }
    let path = SpanningPath::from_inverse(inverse);

    let stabs: Vec<StabSet> =
        exec::map_range(h.edge_count(), |i| stabbed_edges(&path, i as u32, h.edge(i)));
    work.add_hyperedge(h.size() as u64);

    // Concatenation accounting: a hyperedge stabs at most the per-block
    // maxima plus one seam edge per block boundary.
    let block_max_stabs: Vec<usize> = blocks.iter().map(|b| b.max_stab).collect();
    let bound: usize = block_max_stabs.iter().sum::<usize>() + p - 1;
    let worst = stabs.iter().map(StabSet::count).max().unwrap_or(0);
    assert!(
        worst <= bound,
        "concatenated stabbing {worst} exceeds block accounting {bound}"
    );

    PartitionedPath {
        path,
        stabs,
        block_count: p,
        block_max_stabs,
    }
}
