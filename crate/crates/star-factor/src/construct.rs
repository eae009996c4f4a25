//! Instance generators: the three-layer extremal family certifying the upper
//! bound on achievable star size, plus seeded random benchmark graphs.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

use crate::graph::Graph;
use crate::util::ceil_sqrt;
use crate::{Error, Result};

/// Three-layer graph `A ∪ B ∪ C` with `|A| = n`, `|B| = ceil(sqrt(d))·n`,
/// `|C| = d`: all three layers independent, every `a ∈ A` adjacent to exactly
/// `d` vertices of `B` (chosen smallest-degree-first, seed shuffling ties),
/// `B × C` complete. Minimum degree is exactly `d`, yet for `n` past
/// [`lower_bound_threshold`] no star factor with stars larger than
/// `ceil(sqrt(d)) + 1` exists.
pub fn lower_bound_graph(d: usize, n: usize, seed: u64) -> Result<Graph> {
    if d < 1 || n < 1 {
        return Err(Error::input("need d >= 1 and n >= 1"));
    }
    let cs = ceil_sqrt(d);
    let a_size = n;
    let b_size = cs * n;
    let c_size = d;
    let total = a_size + b_size + c_size;
    let b_start = a_size;
    let c_start = a_size + b_size;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tie_rank: Vec<usize> = (0..b_size).collect();
    tie_rank.shuffle(&mut rng);

    let mut edges = Vec::with_capacity(a_size * d + b_size * c_size);
    // (deg, tie, index) ordering realizes "smallest current degree first"
    let mut pool: BTreeSet<(usize, usize, usize)> =
        (0..b_size).map(|j| (0, tie_rank[j], j)).collect();
    for a in 0..a_size {
        let picks: Vec<(usize, usize, usize)> = pool.iter().take(d).copied().collect();
        for (deg, tie, j) in picks {
            pool.remove(&(deg, tie, j));
            pool.insert((deg + 1, tie, j));
            edges.push((a, b_start + j));
        }
    }
    for j in 0..b_size {
        for c in 0..c_size {
            edges.push((b_start + j, c_start + c));
        }
    }
    Graph::from_edges(total, &edges)
}

/// Smallest `n` for which `d·ceil(sqrt(d)) + (sqrt(d)+1)·n/(sqrt(d)+2) < n`
/// holds (with a 1e-9 guard band); for such `n` the counting argument rules
/// out factors of stars larger than `ceil(sqrt(d)) + 1`.
pub fn lower_bound_threshold(d: usize) -> usize {
    let sq = (d as f64).sqrt();
    let cs = ceil_sqrt(d) as f64;
    let holds = |n: usize| {
        let n = n as f64;
        (d as f64) * cs + (sq + 1.0) * n / (sq + 2.0) < n - 1e-9
    };
    // closed form n > d·ceil(sqrt(d))·(sqrt(d)+2), then settle the boundary
    let approx = ((d as f64) * cs * (sq + 2.0)).floor() as usize;
    let mut n = approx.saturating_sub(2).max(1);
    while !holds(n) {
        n += 1;
    }
    n
}

/// Random graph with minimum degree at least `d`: an Erdős–Rényi sample at
/// edge probability `1.2·d/n`, then each deficient vertex is repaired with
/// edges to uniformly random non-neighbors. Deterministic under `seed`.
pub fn random_min_degree_graph(n: usize, d: usize, seed: u64) -> Result<Graph> {
    if d < 1 || n <= d {
        return Err(Error::input(format!("need n > d >= 1, got n={n}, d={d}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = (1.2 * d as f64 / n as f64).min(1.0);
    let mut adj: Vec<BTreeSet<u32>> = vec![BTreeSet::new(); n];
    for u in 0..n {
        for v in u + 1..n {
            if rng.random::<f64>() < p {
                adj[u].insert(v as u32);
                adj[v].insert(u as u32);
            }
        }
    }
    for v in 0..n {
        while adj[v].len() < d {
            let w = rng.random_range(0..n);
            if w != v && !adj[v].contains(&(w as u32)) {
                adj[v].insert(w as u32);
                adj[w].insert(v as u32);
            }
        }
    }
    let mut edges = Vec::new();
    for (u, nbrs) in adj.iter().enumerate() {
        for &w in nbrs {
            if u < w as usize {
                edges.push((u, w as usize));
            }
        }
    }
    Graph::from_edges(n, &edges)
}

/// Random simple `d`-regular graph via configuration-model stub pairing with
/// restarts on loops or parallel edges (after 100 restarts, edge-swap
/// repair). Deterministic under `seed`; `n·d` must be even.
pub fn random_regular_graph(n: usize, d: usize, seed: u64) -> Result<Graph> {
    if !(n * d).is_multiple_of(2) {
        return Err(Error::input(format!("n*d must be even, got n={n}, d={d}")));
    }
    if d < 1 || n <= d {
        return Err(Error::input(format!("need n > d >= 1, got n={n}, d={d}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stubs: Vec<u32> = (0..n as u32)
        .flat_map(|v| std::iter::repeat_n(v, d))
        .collect();

    let pair_up = |stubs: &[u32]| -> Option<Vec<(u32, u32)>> {
        let mut seen = BTreeSet::new();
        let mut pairs = Vec::with_capacity(stubs.len() / 2);
        for c in stubs.chunks_exact(2) {
            let (u, v) = (c[0].min(c[1]), c[0].max(c[1]));
            if u == v || !seen.insert((u, v)) {
                return None;
            }
            pairs.push((u, v));
        }
        Some(pairs)
    };

    for _ in 0..100 {
        stubs.shuffle(&mut rng);
        if let Some(pairs) = pair_up(&stubs) {
            let edges: Vec<(usize, usize)> = pairs
                .iter()
                .map(|&(u, v)| (u as usize, v as usize))
                .collect();
            return Graph::from_edges(n, &edges);
        }
    }

    // edge-swap repair on the last multigraph
    let mut pairs: Vec<(u32, u32)> = stubs.chunks_exact(2).map(|c| (c[0], c[1])).collect();
    for _ in 0..10_000 {
        let mut counts: BTreeSet<(u32, u32)> = BTreeSet::new();
        let bad: Vec<usize> = pairs
            .iter()
            .enumerate()
            .filter_map(|(i, &(u, v))| {
                let key = (u.min(v), u.max(v));
                (u == v || !counts.insert(key)).then_some(i)
            })
            .collect();
        if bad.is_empty() {
            let edges: Vec<(usize, usize)> = pairs
                .iter()
                .map(|&(u, v)| (u as usize, v as usize))
                .collect();
            return Graph::from_edges(n, &edges);
        }
        for i in bad {
            let j = rng.random_range(0..pairs.len());
            let (a, b) = (pairs[i].1, pairs[j].1);
            pairs[i].1 = b;
            pairs[j].1 = a;
        }
    }
    Err(Error::input(format!(
        "could not realize a simple {d}-regular graph on {n} vertices from seed {seed}"
    )))
}
