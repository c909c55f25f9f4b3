//! Seeded graph generators for tests and benchmarks.

use crate::error::Error;
use crate::graph::{largest_component, Graph};
use crate::Result;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// w x h grid, row-major vertex ids.
pub fn gen_grid(w: usize, h: usize) -> Result<Graph> {
    if w == 0 || h == 0 {
        return Err(Error::EmptyGraph);
    }
    let idx = |x: usize, y: usize| (y * w + x) as u32;
    let mut edges = Vec::with_capacity(2 * w * h);
    for y in 0..h {
        for x in 0..w {
            if x + 1 < w {
                edges.push((idx(x, y), idx(x + 1, y)));
            }
            if y + 1 < h {
                edges.push((idx(x, y), idx(x, y + 1)));
            }
        }
    }
    Graph::from_edges(w * h, &edges)
}

/// An interval graph together with the model that produced it.
#[derive(Debug, Clone)]
pub struct IntervalGraph {
    pub graph: Graph,
    /// Closed intervals, indexed by (re-mapped) vertex id.
    pub intervals: Vec<(i64, i64)>,
    /// New id -> id in the raw sample, for reproducibility reports.
    pub vertex_map: Vec<u32>,
}

/// Random interval graph: n intervals with starts uniform on [0, 4n] and
/// lengths uniform on [1, max_len]; the intersection graph's largest
/// component is returned with its interval model.
pub fn gen_interval(n: usize, max_len: u32, seed: u64) -> Result<IntervalGraph> {
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let span = 4 * n as i64;
    let mut intervals: Vec<(i64, i64)> = (0..n)
        .map(|_| {
            let a = rng.gen_range(0..=span);
            let len = rng.gen_range(1..=max_len.max(1)) as i64;
            (a, a + len)
        })
        .collect();

    // Sweep by start point to list intersections without the n^2 scan.
    let mut order: Vec<u32> = (0..n as u32).collect();
    order.sort_by_key(|&i| intervals[i as usize]);
    let mut edges = Vec::new();
    let mut active: Vec<u32> = Vec::new();
    for &i in &order {
        let (a, _) = intervals[i as usize];
        active.retain(|&j| intervals[j as usize].1 >= a);
        for &j in &active {
            edges.push((i, j));
        }
        active.push(i);
    }

    let (kept_n, kept_edges, map) = largest_component(n, &edges);
    let graph = Graph::from_edges(kept_n, &kept_edges)?;
    intervals = map.iter().map(|&old| intervals[old as usize]).collect();
    Ok(IntervalGraph {
        graph,
        intervals,
        vertex_map: map,
    })
}

/// Split graph: a clique on `0..clique_size` plus `n_stable` stable vertices,
/// each attached to a small random subset of the clique.
pub fn gen_split(n_stable: usize, clique_size: usize, seed: u64) -> Result<Graph> {
    if clique_size == 0 {
        return Err(Error::EmptyGraph);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = clique_size as u32;
    let n = clique_size + n_stable;
    let mut edges = Vec::new();
    for u in 0..k {
        for v in u + 1..k {
            edges.push((u, v));
        }
    }
    for s in 0..n_stable as u32 {
        let v = k + s;
        let deg = rng.gen_range(1..=clique_size.min(4));
        let mut picked: Vec<u32> = (0..k).collect();
        picked.shuffle(&mut rng);
        for &c in picked.iter().take(deg) {
            edges.push((v, c));
        }
    }
    Graph::from_edges(n, &edges)
}

/// Uniform-ish sparse graph: a random recursive tree plus `m - (n-1)` extra
/// distinct random edges, so the result is always connected.
pub fn gen_sparse(n: usize, m: usize, seed: u64) -> Result<Graph> {
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    if m + 1 < n || m > n * (n - 1) / 2 {
        return Err(Error::ResampleLimit { attempts: 0 });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges: Vec<(u32, u32)> = Vec::with_capacity(m);
    let mut seen = std::collections::HashSet::new();
    for v in 1..n as u32 {
        let parent = rng.gen_range(0..v);
        edges.push((parent, v));
        seen.insert((parent.min(v), parent.max(v)));
    }
    let mut attempts = 0usize;
    let budget = 100 * (m + 16);
    while edges.len() < m {
        attempts += 1;
        if attempts > budget {
            return Err(Error::ResampleLimit { attempts });
        }
        let u = rng.gen_range(0..n as u32);
        let v = rng.gen_range(0..n as u32);
        if u == v {
            continue;
        }
        let key = (u.min(v), u.max(v));
        if seen.insert(key) {
            edges.push(key);
        }
    }
    Graph::from_edges(n, &edges)
}

/// Grid with a fraction of its non-tree edges deleted: a random spanning
/// tree is kept intact, so every deletion preserves connectivity.
pub fn gen_perturbed_grid(w: usize, h: usize, delete_frac: f64, seed: u64) -> Result<Graph> {
    let grid = gen_grid(w, h)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut all: Vec<(u32, u32)> = grid.edges().collect();
    all.shuffle(&mut rng);

    // Random-order Kruskal: the first edges to connect new components form
    // a uniform-ish random spanning tree.
    let n = grid.n();
    let mut parent: Vec<u32> = (0..n as u32).collect();
    fn find(parent: &mut [u32], mut x: u32) -> u32 {
        while parent[x as usize] != x {
            parent[x as usize] = parent[parent[x as usize] as usize];
            x = parent[x as usize];
        }
        x
    }
    let mut tree = Vec::with_capacity(n - 1);
    let mut rest = Vec::new();
    for (u, v) in all {
        let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
        if ru != rv {
            parent[ru as usize] = rv;
            tree.push((u, v));
        } else {
            rest.push((u, v));
        }
    }
    let delete = ((grid.m() as f64) * delete_frac.clamp(0.0, 1.0)).floor() as usize;
    let delete = delete.min(rest.len());
    let mut edges = tree;
    edges.extend_from_slice(&rest[delete..]);
    Graph::from_edges(n, &edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::diameter_oracle;

    #[test]
    fn grid_cases() {
        let c4 = gen_grid(2, 2).unwrap();
        assert_eq!((c4.n(), c4.m()), (4, 4));
        assert_eq!(diameter_oracle(&c4), (2, 2));
        let path = gen_grid(1, 7).unwrap();
        assert_eq!(diameter_oracle(&path).0, 6);
        assert_eq!(diameter_oracle(&gen_grid(10, 10).unwrap()).0, 18);
    }

    #[test]
    fn interval_generator_is_seed_deterministic() {
        let a = gen_interval(40, 12, 9).unwrap();
        let b = gen_interval(40, 12, 9).unwrap();
        assert_eq!(a.graph, b.graph);
        assert_eq!(a.intervals, b.intervals);
        assert_eq!(a.graph.n(), a.intervals.len());
    }

    #[test]
    fn interval_model_matches_graph() {
        let ig = gen_interval(60, 20, 3).unwrap();
        let overlaps = |a: (i64, i64), b: (i64, i64)| a.0 <= b.1 && b.0 <= a.1;
        let g = &ig.graph;
        for u in 0..g.n() as u32 {
            for v in u + 1..g.n() as u32 {
                let has_edge = g.neighbours(u).binary_search(&v).is_ok();
                assert_eq!(
                    has_edge,
                    overlaps(ig.intervals[u as usize], ig.intervals[v as usize])
                );
            }
        }
    }

    #[test]
    fn split_cases() {
        // Full bipartite attachment: star over one clique vertex.
        let g = gen_split(12, 1, 0).unwrap();
        assert!(diameter_oracle(&g).0 <= 2);
        let g = gen_split(30, 6, 5).unwrap();
        assert!(diameter_oracle(&g).0 <= 3);
    }

    #[test]
    fn sparse_tree_like() {
        let g = gen_sparse(50, 49, 2).unwrap();
        assert_eq!(g.m(), 49);
        let g = gen_sparse(50, 120, 2).unwrap();
        assert_eq!(g.m(), 120);
        assert!(gen_sparse(10, 5, 1).is_err());
    }

    #[test]
    fn perturbed_grid_cases() {
        let g = gen_perturbed_grid(8, 8, 0.0, 1).unwrap();
        assert_eq!(g.m(), gen_grid(8, 8).unwrap().m());
        let g = gen_perturbed_grid(12, 12, 0.3, 1).unwrap();
        assert!(g.m() < gen_grid(12, 12).unwrap().m());
        // still connected by construction; from_edges would have failed otherwise
        assert_eq!(g.n(), 144);
    }
}
