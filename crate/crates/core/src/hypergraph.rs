//! Explicit hypergraphs: traces, duals, exact VC-dimension for validation,
//! Sauer-Shelah checks and epsilon-net sampling.
//!
//! Everything here is meant for moderate sizes (validation, fixtures, and the
//! explicitly materialised neighbourhood hypergraphs of small inputs); the
//! subquadratic pipeline never stores the dense hypergraphs it reasons about.

use crate::config::{sauer_bound, AlgoConfig};
use crate::error::Error;
use crate::graph::{ball, BfsScratch, Graph};
use crate::{exec, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Vertex universe `0..universe` plus a list of hyperedges, each a sorted
/// duplicate-free vertex list. The hyperedge *list* may contain duplicates
/// unless [`Hypergraph::dedup`] has been applied; `deduped` records which.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypergraph {
    universe: usize,
    edges: Vec<Vec<u32>>,
    deduped: bool,
}

impl Hypergraph {
    /// Builds a raw hypergraph; member lists are sorted and deduplicated,
    /// the hyperedge list is kept as given.
    pub fn new(universe: usize, mut edges: Vec<Vec<u32>>) -> Result<Self> {
        for q in &mut edges {
            q.sort_unstable();
            q.dedup();
            if let Some(&max) = q.last() {
                if max as usize >= universe {
                    return Err(Error::VertexOutOfRange {
                        v: max,
                        n: universe,
                    });
                }
            }
        }
        Ok(Self {
            universe,
            edges,
            deduped: false,
        })
    }

    pub(crate) fn from_sorted_edges(universe: usize, edges: Vec<Vec<u32>>, deduped: bool) -> Self {
        debug_assert!(edges
            .iter()
            .all(|q| q.windows(2).all(|w| w[0] < w[1])
                && q.last().map_or(true, |&m| (m as usize) < universe)));
        Self {
            universe,
            edges,
            deduped,
        }
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    /// Number of hyperedges.
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Sum of hyperedge cardinalities (the hypergraph size).
    pub fn size(&self) -> usize {
        self.edges.iter().map(Vec::len).sum()
    }

    pub fn edges(&self) -> &[Vec<u32>] {
        &self.edges
    }

    pub fn edge(&self, i: usize) -> &[u32] {
        &self.edges[i]
    }

    pub fn is_deduped(&self) -> bool {
        self.deduped
    }

    /// Removes duplicate hyperedges (first occurrence kept, order preserved).
    pub fn dedup(&self) -> Hypergraph {
        let reps = duplicate_representatives(self.universe, &self.edges);
        let mut edges = Vec::new();
        for (i, rep) in reps.iter().enumerate() {
            if *rep as usize == i {
                edges.push(self.edges[i].clone());
            }
        }
        Hypergraph {
            universe: self.universe,
            edges,
            deduped: true,
        }
    }

    /// Incidence list `R_x` (indices of hyperedges containing x) per vertex.
    pub fn incidences(&self) -> Vec<Vec<u32>> {
        let mut inc = vec![Vec::new(); self.universe];
        for (i, q) in self.edges.iter().enumerate() {
            for &x in q {
                inc[x as usize].push(i as u32);
            }
        }
        inc
    }

    /// Parses the fixture format: `n r`, then r lines of sorted vertex ids.
    pub fn parse(text: &str, origin: &str) -> Result<Hypergraph> {
        let mut lines = text.lines().enumerate();
        let (idx, header) = lines
            .by_ref()
            .find(|(_, l)| !l.trim().is_empty())
            .ok_or_else(|| Error::Parse {
                path: origin.into(),
                line: 0,
                msg: "empty input".into(),
            })?;
        let mut it = header.split_whitespace();
        let bad = |line: usize, msg: String| Error::Parse {
            path: origin.into(),
            line,
            msg,
        };
        let n: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| bad(idx + 1, "bad universe size".into()))?;
        let r: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| bad(idx + 1, "bad hyperedge count".into()))?;
        let mut edges = Vec::with_capacity(r);
        for _ in 0..r {
            let (lidx, line) = lines
                .next()
                .ok_or_else(|| bad(0, format!("expected {r} hyperedge lines")))?;
            let members: std::result::Result<Vec<u32>, _> =
                line.split_whitespace().map(str::parse).collect();
            let members = members.map_err(|e| bad(lidx + 1, format!("bad vertex id: {e}")))?;
            edges.push(members);
        }
        Hypergraph::new(n, edges)
    }

    pub fn format(&self) -> String {
        let mut out = format!("{} {}\n", self.universe, self.edges.len());
        for q in &self.edges {
            let line: Vec<String> = q.iter().map(u32::to_string).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }
}

/// Partition-refinement duplicate detection: returns, per hyperedge, the
/// index of the first hyperedge equal to it. Linear in universe + size.
pub(crate) fn duplicate_representatives(universe: usize, edges: &[Vec<u32>]) -> Vec<u32> {
    let r = edges.len();
    let mut class_of = vec![0u32; r];
    if r == 0 {
        return class_of;
    }
    let mut class_size: Vec<usize> = vec![r];
    let mut buckets: Vec<Vec<u32>> = vec![Vec::new()];
    let mut incidence = vec![Vec::new(); universe];
    for (i, q) in edges.iter().enumerate() {
        for &x in q {
            incidence[x as usize].push(i as u32);
        }
    }
    let mut touched: Vec<u32> = Vec::new();
    for x in 0..universe {
        for &e in &incidence[x] {
            let c = class_of[e as usize] as usize;
            if buckets[c].is_empty() {
                touched.push(c as u32);
            }
            buckets[c].push(e);
        }
        for &c in &touched {
            let c = c as usize;
            let members = std::mem::take(&mut buckets[c]);
            if members.len() < class_size[c] {
                let fresh = class_size.len();
                class_size.push(members.len());
                class_size[c] -= members.len();
                for &e in &members {
                    class_of[e as usize] = fresh as u32;
                }
                buckets.push(Vec::new());
            }
        }
        touched.clear();
    }
    let mut rep_of_class = vec![u32::MAX; class_size.len()];
    let mut reps = vec![0u32; r];
    for i in 0..r {
        let c = class_of[i] as usize;
        if rep_of_class[c] == u32::MAX {
            rep_of_class[c] = i as u32;
        }
        reps[i] = rep_of_class[c];
    }
    reps
}

/// The closed neighbourhood hypergraph of `g`; always linear in m.
pub fn closed_neighbourhoods(g: &Graph) -> Hypergraph {
    let edges = (0..g.n() as u32)
        .map(|v| {
            let mut q: Vec<u32> = g.neighbours(v).to_vec();
            q.push(v);
            q.sort_unstable();
            q
        })
        .collect();
    Hypergraph {
        universe: g.n(),
        edges,
        deduped: false,
    }
}

/// The depth-`level` neighbourhood hypergraph of `g`, one hyperedge per
/// vertex in vertex order (duplicates retained so edge index == centre).
/// Worst-case quadratic storage, hence the explicit size guard.
pub fn neighbourhood_hypergraph(g: &Graph, level: u32, cap: usize) -> Result<Hypergraph> {
    if g.n() > cap {
        return Err(Error::SizeGuardExceeded { n: g.n(), cap });
    }
    if level == 1 {
        return Ok(closed_neighbourhoods(g));
    }
    let edges = exec::map_range_init(
        g.n(),
        || BfsScratch::new(g.n()),
        |scratch, v| {
            scratch.run(g, v as u32, level);
            let mut members = scratch.reached().to_vec();
            members.sort_unstable();
            members
        },
    );
    Ok(Hypergraph {
        universe: g.n(),
        edges,
        deduped: false,
    })
}

/// The ball hypergraph of `g`: all balls of every centre and every radius up
/// to the centre's eccentricity. Quadratically many hyperedges; small n only.
pub fn ball_hypergraph(g: &Graph, cap: usize) -> Result<Hypergraph> {
    if g.n() > cap {
        return Err(Error::SizeGuardExceeded { n: g.n(), cap });
    }
    let mut edges = Vec::new();
    let mut scratch = BfsScratch::new(g.n());
    for v in 0..g.n() as u32 {
        scratch.run(g, v, u32::MAX);
        let ecc = scratch.max_dist();
        for t in 0..=ecc {
            edges.push(ball(g, v, t));
        }
    }
    Ok(Hypergraph {
        universe: g.n(),
        edges,
        deduped: false,
    })
}

/// Trace of `h` on `y`: universe re-indexed to `|y|`, hyperedges intersected
/// with `y` and deduplicated by partition refinement.
pub fn trace(h: &Hypergraph, y: &[u32]) -> Hypergraph {
    let mut local = vec![u32::MAX; h.universe().max(1)];
    let mut sorted = y.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    for (i, &v) in sorted.iter().enumerate() {
        local[v as usize] = i as u32;
    }
    let traces: Vec<Vec<u32>> = h
        .edges
        .iter()
        .map(|q| {
            q.iter()
                .filter_map(|&x| {
                    let l = local[x as usize];
                    (l != u32::MAX).then_some(l)
                })
                .collect()
        })
        .collect();
    let reps = duplicate_representatives(sorted.len(), &traces);
    let mut edges = Vec::new();
    for (i, rep) in reps.iter().enumerate() {
        if *rep as usize == i {
            edges.push(traces[i].clone());
        }
    }
    Hypergraph {
        universe: sorted.len(),
        edges,
        deduped: true,
    }
}

/// Dual hypergraph: universe = hyperedge indices of `h`, one hyperedge `R_x`
/// per vertex x, deduplicated.
pub fn dual(h: &Hypergraph) -> Hypergraph {
    let inc = h.incidences();
    let reps = duplicate_representatives(h.edge_count(), &inc);
    let mut edges = Vec::new();
    for (i, rep) in reps.iter().enumerate() {
        if *rep as usize == i {
            edges.push(inc[i].clone());
        }
    }
    Hypergraph {
        universe: h.edge_count(),
        edges,
        deduped: true,
    }
}

/// Outcome of an exact shatter search capped at `d_cap`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VcDim {
    Exact(u32),
    /// Some set of size `d_cap` is shattered; the true value may be larger.
    AtLeast(u32),
}

impl VcDim {
    pub fn lower_bound(&self) -> u32 {
        match *self {
            VcDim::Exact(d) | VcDim::AtLeast(d) => d,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, VcDim::Exact(_))
    }
}

/// Exact VC-dimension by levelwise shatter search. Candidates of size s+1
/// extend shattered sets of size s by a larger vertex (colex order), so a
/// set is only examined when at least one subset already survived; the
/// trace-count test inside `is_shattered` exits early on the first miss.
/// `budget` caps the number of candidate checks.
pub fn vc_dimension_exact(h: &Hypergraph, d_cap: u32, budget: u64) -> Result<VcDim> {
    if h.edge_count() == 0 || d_cap == 0 {
        return Ok(VcDim::Exact(0));
    }
    let mut spent = 0u64;
    let mut shattered: Vec<Vec<u32>> = vec![Vec::new()]; // the empty set
    for s in 1..=d_cap {
        let mut candidates = Vec::new();
        for base in &shattered {
            let lo = base.last().map_or(0, |&x| x + 1);
            for x in lo..h.universe() as u32 {
                let mut ext = base.clone();
                ext.push(x);
                candidates.push(ext);
            }
        }
        spent += candidates.len() as u64;
        if spent > budget {
            return Err(Error::BudgetExceeded { spent, budget });
        }
        let verdicts = exec::map_slice(&candidates, |y| is_shattered(h, y));
        shattered = candidates
            .into_iter()
            .zip(verdicts)
            .filter_map(|(y, ok)| ok.then_some(y))
            .collect();
        if shattered.is_empty() {
            return Ok(VcDim::Exact(s - 1));
        }
        if s == d_cap {
            return Ok(VcDim::AtLeast(d_cap));
        }
    }
    unreachable!()
}

/// Whether `y` (sorted, |y| <= 25) is shattered by `h`.
pub fn is_shattered(h: &Hypergraph, y: &[u32]) -> bool {
    let s = y.len();
    assert!(s <= 25, "shatter check limited to small sets");
    let want = 1usize << s;
    let mut seen = vec![false; want];
    let mut found = 0usize;
    for q in &h.edges {
        let mut mask = 0usize;
        for (bit, &v) in y.iter().enumerate() {
            if q.binary_search(&v).is_ok() {
                mask |= 1 << bit;
            }
        }
        if !seen[mask] {
            seen[mask] = true;
            found += 1;
            if found == want {
                return true;
            }
        }
    }
    false
}

/// Checks the exact Sauer-Shelah inequality: every tested subset Y realises
/// at most `sum_{i<=d} C(|Y|, i)` distinct traces. Exhaustive over all
/// subsets when the universe has at most 12 vertices, sampled otherwise.
pub fn sauer_check(h: &Hypergraph, d: u32, seed: u64) -> bool {
    let n = h.universe();
    if n <= 12 {
        let masks: Vec<u64> = h
            .edges
            .iter()
            .map(|q| q.iter().fold(0u64, |m, &v| m | (1 << v)))
            .collect();
        return exec::all_range(1usize << n, |y_mask| {
            let y_mask = y_mask as u64;
            let mut seen = std::collections::HashSet::new();
            for &em in &masks {
                seen.insert(em & y_mask);
            }
            seen.len() as f64 <= sauer_bound(y_mask.count_ones() as usize, d)
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..256 {
        let size = rng.gen_range(1..=n.min(24));
        let y = rand::seq::index::sample(&mut rng, n, size)
            .into_iter()
            .map(|v| v as u32)
            .collect::<Vec<_>>();
        let traced = trace(h, &y);
        if traced.edge_count() as f64 > sauer_bound(size, d) {
            return false;
        }
    }
    true
}

/// A sampled epsilon-net candidate.
#[derive(Debug, Clone)]
pub struct EpsNetSample {
    /// Sorted members.
    pub members: Vec<u32>,
    pub epsilon: f64,
    pub delta: f64,
    pub seed: u64,
}

/// Uniform sample without replacement of size
/// `ceil(c_net * d * (1/eps) * log)` (clamped to n), deterministic per seed.
pub fn sample_eps_net(
    universe: usize,
    d: u32,
    eps: f64,
    delta: f64,
    cfg: &AlgoConfig,
    seed: u64,
) -> EpsNetSample {
    assert!(eps > 0.0 && eps <= 1.0, "eps must lie in (0, 1]");
    assert!(delta > 0.0 && delta < 1.0, "delta must lie in (0, 1)");
    let cfg = AlgoConfig {
        d,
        delta,
        ..cfg.clone()
    };
    let size = cfg.net_sample_size(universe, eps);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut members: Vec<u32> = rand::seq::index::sample(&mut rng, universe, size.min(universe))
        .into_iter()
        .map(|v| v as u32)
        .collect();
    members.sort_unstable();
    EpsNetSample {
        members,
        epsilon: eps,
        delta,
        seed,
    }
}

/// Post-hoc check: does `members` hit every hyperedge of size >= eps * n?
pub fn is_eps_net(h: &Hypergraph, members: &[u32], eps: f64) -> bool {
    let threshold = eps * h.universe() as f64;
    h.edges
        .iter()
        .all(|q| (q.len() as f64) < threshold || q.iter().any(|v| members.binary_search(v).is_ok()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::{gen_grid, gen_interval};

    fn cycle(n: usize) -> Graph {
        let mut e: Vec<(u32, u32)> = (0..n as u32 - 1).map(|i| (i, i + 1)).collect();
        e.push((n as u32 - 1, 0));
        Graph::from_edges(n, &e).unwrap()
    }

    fn power_set_hypergraph(n: usize) -> Hypergraph {
        let edges = (0usize..1 << n)
            .map(|mask| (0..n as u32).filter(|&v| mask >> v & 1 == 1).collect())
            .collect();
        Hypergraph::new(n, edges).unwrap()
    }

    /// Unpruned reference shatter search, independent of the levelwise code.
    fn vc_naive(h: &Hypergraph) -> u32 {
        let n = h.universe();
        assert!(n <= 16);
        let mut best = 0;
        for mask in 0usize..1 << n {
            let y: Vec<u32> = (0..n as u32).filter(|&v| mask >> v & 1 == 1).collect();
            if y.len() > best as usize && is_shattered(h, &y) {
                best = y.len() as u32;
            }
        }
        best
    }

    #[test]
    fn neighbourhood_examples() {
        let c4 = cycle(4);
        let h0 = neighbourhood_hypergraph(&c4, 0, 100).unwrap();
        assert!(h0.edges().iter().enumerate().all(|(v, q)| q == &[v as u32]));
        let hbig = neighbourhood_hypergraph(&c4, 9, 100).unwrap();
        assert!(hbig.edges().iter().all(|q| q.len() == 4));
        let h1 = neighbourhood_hypergraph(&c4, 1, 100).unwrap();
        assert_eq!(
            h1.edges(),
            &[vec![0, 1, 3], vec![0, 1, 2], vec![1, 2, 3], vec![0, 2, 3]]
        );
        assert!(matches!(
            neighbourhood_hypergraph(&c4, 1, 3),
            Err(Error::SizeGuardExceeded { .. })
        ));
    }

    #[test]
    fn trace_examples() {
        let c4 = cycle(4);
        let h = closed_neighbourhoods(&c4);
        let full: Vec<u32> = (0..4).collect();
        assert_eq!(trace(&h, &full).edge_count(), 4);
        let empty = trace(&h, &[]);
        assert_eq!(empty.universe(), 0);
        assert_eq!(empty.edge_count(), 1);
        assert!(empty.edges()[0].is_empty());
        // N[0] cap {0,2} = {0}, N[1] cap = {0,2}, N[2] cap = {2}, N[3] cap = {0,2}
        let t = trace(&h, &[0, 2]);
        assert_eq!(t.universe(), 2);
        let mut family = t.edges().to_vec();
        family.sort();
        assert_eq!(family, vec![vec![0], vec![0, 1], vec![1]]);
    }

    #[test]
    fn dual_examples() {
        let h = Hypergraph::new(2, vec![vec![0], vec![1]]).unwrap();
        let d = dual(&h);
        assert_eq!(d.universe(), 2);
        assert_eq!(d.edges(), &[vec![0], vec![1]]);

        let h = Hypergraph::new(2, vec![vec![0, 1]]).unwrap();
        let d = dual(&h);
        assert_eq!(d.universe(), 1);
        assert_eq!(d.edges(), &[vec![0]]);
    }

    #[test]
    fn neighbourhood_hypergraph_is_self_dual() {
        for g in [gen_grid(4, 3).unwrap(), cycle(7)] {
            for level in 1..=3u32 {
                let h = neighbourhood_hypergraph(&g, level, 100).unwrap();
                // One hyperedge per centre, so dual hyperedges are vertex sets
                // directly comparable with the primal family.
                let mut primal: Vec<Vec<u32>> = h.dedup().edges().to_vec();
                let mut co: Vec<Vec<u32>> = dual(&h).edges().to_vec();
                primal.sort();
                co.sort();
                assert_eq!(primal, co, "level {level}");
            }
        }
    }

    #[test]
    fn double_dual_on_twin_free_instances() {
        // Closed neighbourhoods of paths and grids have pairwise distinct
        // incidences, so the canonical double-dual map is the identity.
        for g in [gen_grid(3, 4).unwrap(), gen_grid(1, 6).unwrap()] {
            let h = closed_neighbourhoods(&g).dedup();
            let dd = dual(&dual(&h)).dedup();
            assert_eq!(dd.universe(), h.universe());
            let mut a = h.edges().to_vec();
            let mut b = dd.edges().to_vec();
            a.sort();
            b.sort();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn vc_examples() {
        assert_eq!(
            vc_dimension_exact(&power_set_hypergraph(2), 8, 1 << 20).unwrap(),
            VcDim::Exact(2)
        );
        // Star K_{1,3}: centre 0.
        let star = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        let h = closed_neighbourhoods(&star);
        assert_eq!(vc_dimension_exact(&h, 8, 1 << 20).unwrap(), VcDim::Exact(2));
        assert_eq!(vc_naive(&h), 2);
        // d_cap reached
        assert_eq!(
            vc_dimension_exact(&power_set_hypergraph(4), 3, 1 << 20).unwrap(),
            VcDim::AtLeast(3)
        );
        // budget
        assert!(matches!(
            vc_dimension_exact(&power_set_hypergraph(8), 8, 4),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn vc_matches_naive_on_random_hypergraphs() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..40 {
            let n = rng.gen_range(2..=8);
            let r = rng.gen_range(1..=20);
            let edges: Vec<Vec<u32>> = (0..r)
                .map(|_| {
                    (0..n as u32)
                        .filter(|_| rng.gen_bool(0.4))
                        .collect::<Vec<_>>()
                })
                .collect();
            let h = Hypergraph::new(n, edges).unwrap();
            let exact = vc_dimension_exact(&h, 12, 1 << 24).unwrap();
            assert_eq!(exact, VcDim::Exact(vc_naive(&h)));
        }
    }

    #[test]
    fn trace_vc_is_monotone() {
        let g = gen_grid(3, 3).unwrap();
        let h = closed_neighbourhoods(&g);
        let d_full = vc_dimension_exact(&h, 8, 1 << 24).unwrap().lower_bound();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let y: Vec<u32> = (0..9u32).filter(|_| rng.gen_bool(0.5)).collect();
            let t = trace(&h, &y);
            let d_t = vc_dimension_exact(&t, 8, 1 << 24).unwrap().lower_bound();
            assert!(d_t <= d_full);
        }
    }

    #[test]
    fn dual_vc_bounded() {
        // Exhaustive on small fixtures: dual VC <= 2^{d+1}.
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..25 {
            let n = rng.gen_range(2..=7);
            let r = rng.gen_range(1..=12);
            let edges: Vec<Vec<u32>> = (0..r)
                .map(|_| (0..n as u32).filter(|_| rng.gen_bool(0.5)).collect())
                .collect();
            let h = Hypergraph::new(n, edges).unwrap();
            let d = vc_dimension_exact(&h, 10, 1 << 24).unwrap().lower_bound();
            let dual_d = vc_dimension_exact(&dual(&h), 10, 1 << 24)
                .unwrap()
                .lower_bound();
            assert!(dual_d <= 2u32.pow(d + 1), "dual {dual_d} vs primal {d}");
        }
    }

    #[test]
    fn interval_graphs_have_distance_vc_at_most_two() {
        for seed in 0..10 {
            let ig = gen_interval(10, 8, seed).unwrap();
            if ig.graph.n() < 3 {
                continue;
            }
            let h = ball_hypergraph(&ig.graph, 64).unwrap();
            let d = vc_dimension_exact(&h, 3, 1 << 26).unwrap();
            assert!(d.lower_bound() <= 2, "seed {seed}: {d:?}");
        }
    }

    #[test]
    fn sauer_examples() {
        assert!(!sauer_check(&power_set_hypergraph(3), 2, 0));
        assert!(sauer_check(&power_set_hypergraph(3), 3, 0));
        let ig = gen_interval(12, 9, 4).unwrap();
        let h = ball_hypergraph(&ig.graph, 64).unwrap();
        assert!(sauer_check(&h, 2, 0));
    }

    #[test]
    fn eps_net_formula_case() {
        // n=1000, d=2, eps=0.1, delta=0.01, c_net=1 -> ceil(20 ln 1e5) = 231
        let cfg = AlgoConfig {
            c_net: 1.0,
            ..AlgoConfig::default()
        };
        let s = sample_eps_net(1000, 2, 0.1, 0.01, &cfg, 3);
        assert_eq!(s.members.len(), 231);
        let again = sample_eps_net(1000, 2, 0.1, 0.01, &cfg, 3);
        assert_eq!(s.members, again.members);
        assert!(s.members.windows(2).all(|w| w[0] < w[1]));
        assert!(s.members.iter().all(|&v| v < 1000));
    }

    #[test]
    fn eps_one_net_hits_full_edges() {
        let h = Hypergraph::new(6, vec![vec![0, 1, 2, 3, 4, 5], vec![0, 2]]).unwrap();
        let cfg = AlgoConfig::default();
        let s = sample_eps_net(6, 2, 1.0, 0.5, &cfg, 1);
        assert!(is_eps_net(&h, &s.members, 1.0));
    }

    #[test]
    fn eps_net_hits_symmetric_differences_whp() {
        // On random interval graphs the sampled set is an eps-net for the
        // pairwise symmetric differences of balls in >= 99/100 runs.
        let cfg = AlgoConfig::default();
        let mut successes = 0;
        for seed in 0..100u64 {
            let ig = gen_interval(14, 10, seed).unwrap();
            let g = &ig.graph;
            if g.n() < 4 {
                successes += 1;
                continue;
            }
            let balls = ball_hypergraph(g, 64).unwrap();
            let mut diffs = Vec::new();
            for a in balls.edges() {
                for b in balls.edges() {
                    let mut d: Vec<u32> = a
                        .iter()
                        .filter(|x| b.binary_search(x).is_err())
                        .chain(b.iter().filter(|x| a.binary_search(x).is_err()))
                        .copied()
                        .collect();
                    d.sort_unstable();
                    diffs.push(d);
                }
            }
            let dh = Hypergraph::new(g.n(), diffs).unwrap();
            let eps = 0.25;
            let s = sample_eps_net(g.n(), 2, eps, 0.01, &cfg, seed ^ 0xABCD);
            if is_eps_net(&dh, &s.members, eps) {
                successes += 1;
            }
        }
        assert!(successes >= 99, "only {successes}/100 nets succeeded");
    }

    #[test]
    fn fixture_format_roundtrip() {
        let h = Hypergraph::new(5, vec![vec![0, 2, 4], vec![], vec![1, 3]]).unwrap();
        let parsed = Hypergraph::parse(&h.format(), "mem").unwrap();
        assert_eq!(parsed, h);
    }

    #[test]
    fn dedup_flags_and_counts() {
        let h = Hypergraph::new(3, vec![vec![0, 1], vec![1, 0], vec![2]]).unwrap();
        assert!(!h.is_deduped());
        let d = h.dedup();
        assert!(d.is_deduped());
        assert_eq!(d.edge_count(), 2);
        assert_eq!(d.edges()[0], vec![0, 1]);
    }
}
