//! Simple undirected graphs: adjacency sets, degree queries, induced
//! subgraphs, bipartite views, and the edge-minimalization preprocessing the
//! solver relies on.

use crate::{Error, Result};

/// Immutable simple graph on vertices `0..n`. Adjacency lists are sorted and
/// symmetric; loops and parallel edges are rejected at construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adj: Vec<Vec<u32>>,
}

impl Graph {
    /// Graph with `n` vertices and no edges.
    pub fn empty(n: usize) -> Self {
        Graph {
            n,
            adj: vec![Vec::new(); n],
        }
    }

    /// Builds a graph from an edge list. Out-of-range endpoints, loops and
    /// duplicate edges are input errors.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::input(format!(
                    "edge ({u},{v}) out of range for n={n}"
                )));
            }
            if u == v {
                return Err(Error::input(format!("self-loop at vertex {u}")));
            }
            adj[u].push(v as u32);
            adj[v].push(u as u32);
        }
        for (v, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if list.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::input(format!("duplicate edge at vertex {v}")));
            }
        }
        Ok(Graph { n, adj })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Sorted neighbor list of `v`.
    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.adj[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.adj[u].binary_search(&(v as u32)).is_ok()
    }

    pub fn min_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).min().unwrap_or(0)
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Sorted `e (u,v)` pairs with `u < v`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.n {
            for &w in &self.adj[u] {
                let w = w as usize;
                if u < w {
                    out.push((u, w));
                }
            }
        }
        out
    }

    /// Checks adjacency symmetry, sortedness and loop-freeness. Constructed
    /// graphs always pass; used as a test harness for generators.
    pub fn validate(&self) -> Result<()> {
        for v in 0..self.n {
            let list = &self.adj[v];
            if !list.windows(2).all(|w| w[0] < w[1]) {
                return Err(Error::contract(format!(
                    "adjacency of {v} not strictly sorted"
                )));
            }
            for &w in list {
                let w = w as usize;
                if w >= self.n {
                    return Err(Error::contract(format!("neighbor {w} of {v} out of range")));
                }
                if w == v {
                    return Err(Error::contract(format!("self-loop at {v}")));
                }
                if !self.has_edge(w, v) {
                    return Err(Error::contract(format!("asymmetric edge ({v},{w})")));
                }
            }
        }
        Ok(())
    }
}

/// Sorted, duplicate-free set of vertex indices.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VertexSet(Vec<u32>);

impl VertexSet {
    pub fn new() -> Self {
        VertexSet(Vec::new())
    }

    /// All vertices `0..n`.
    pub fn full(n: usize) -> Self {
        VertexSet((0..n as u32).collect())
    }

    pub fn from_unsorted(mut v: Vec<u32>) -> Self {
        v.sort_unstable();
        v.dedup();
        VertexSet(v)
    }

    pub fn from_mask(mask: &[bool]) -> Self {
        VertexSet(
            mask.iter()
                .enumerate()
                .filter_map(|(i, &b)| b.then_some(i as u32))
                .collect(),
        )
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&(v as u32)).is_ok()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().map(|&v| v as usize)
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    /// Dense membership mask over `0..n`; the fast path for inner loops.
    pub fn to_mask(&self, n: usize) -> Vec<bool> {
        let mut mask = vec![false; n];
        for &v in &self.0 {
            mask[v as usize] = true;
        }
        mask
    }

    /// Errors if any member is `>= n`.
    pub fn check_range(&self, n: usize) -> Result<()> {
        match self.0.last() {
            Some(&v) if (v as usize) >= n => {
                Err(Error::input(format!("vertex {v} out of range for n={n}")))
            }
            _ => Ok(()),
        }
    }

    pub fn intersect(&self, other: &VertexSet) -> VertexSet {
        VertexSet(
            self.0
                .iter()
                .copied()
                .filter(|&v| other.contains(v as usize))
                .collect(),
        )
    }

    pub fn minus(&self, other: &VertexSet) -> VertexSet {
        VertexSet(
            self.0
                .iter()
                .copied()
                .filter(|&v| !other.contains(v as usize))
                .collect(),
        )
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        let mut v: Vec<u32> = self.0.iter().chain(other.0.iter()).copied().collect();
        v.sort_unstable();
        v.dedup();
        VertexSet(v)
    }
}

impl FromIterator<u32> for VertexSet {
    fn from_iter<T: IntoIterator<Item = u32>>(iter: T) -> Self {
        VertexSet::from_unsorted(iter.into_iter().collect())
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        VertexSet::from_unsorted(iter.into_iter().map(|v| v as u32).collect())
    }
}

/// View of the bipartite subgraph induced by two disjoint vertex sets of a
/// host graph. Only host edges with one endpoint per side are visible.
#[derive(Debug, Clone)]
pub struct BipartiteView<'a> {
    host: &'a Graph,
    left: VertexSet,
    right: VertexSet,
}

impl<'a> BipartiteView<'a> {
    pub fn new(host: &'a Graph, left: VertexSet, right: VertexSet) -> Result<Self> {
        left.check_range(host.vertex_count())?;
        right.check_range(host.vertex_count())?;
        if !left.intersect(&right).is_empty() {
            return Err(Error::input("bipartite view sides must be disjoint"));
        }
        Ok(BipartiteView { host, left, right })
    }

    pub fn host(&self) -> &Graph {
        self.host
    }

    pub fn left(&self) -> &VertexSet {
        &self.left
    }

    pub fn right(&self) -> &VertexSet {
        &self.right
    }

    /// Degree of `v` into the opposite side (`v` may be on either side).
    pub fn view_degree(&self, v: usize) -> usize {
        let other = if self.left.contains(v) {
            &self.right
        } else {
            &self.left
        };
        self.host
            .neighbors(v)
            .iter()
            .filter(|&&w| other.contains(w as usize))
            .count()
    }
}

/// `|N(v) ∩ s|`.
pub fn degree_into(g: &Graph, v: usize, s: &VertexSet) -> Result<usize> {
    if v >= g.vertex_count() {
        return Err(Error::input(format!(
            "vertex {v} out of range for n={}",
            g.vertex_count()
        )));
    }
    Ok(g.neighbors(v)
        .iter()
        .filter(|&&w| s.contains(w as usize))
        .count())
}

/// Repeatedly removes edges (lexicographic `(u,v)` order, full passes until a
/// pass removes nothing) while every vertex outside `exempt` keeps degree at
/// least `target`. In the result no edge can be removed without dropping a
/// non-exempt vertex below `target`; edges inside `exempt` are always removed.
///
/// Precondition: `deg(v) >= target` for every `v` outside `exempt`.
pub fn edge_minimalize(g: &Graph, target: i64, exempt: &VertexSet) -> Result<Graph> {
    let n = g.vertex_count();
    exempt.check_range(n)?;
    let exempt_mask = exempt.to_mask(n);
    for (v, &is_exempt) in exempt_mask.iter().enumerate() {
        if !is_exempt && (g.degree(v) as i64) < target {
            return Err(Error::input(format!(
                "vertex {v} has degree {} < target {target}",
                g.degree(v)
            )));
        }
    }

    let edges = g.edges();
    let mut alive = vec![true; edges.len()];
    let mut deg: Vec<i64> = (0..n).map(|v| g.degree(v) as i64).collect();
    let removable = |v: usize, deg: &[i64]| exempt_mask[v] || deg[v] > target;

    loop {
        let mut removed_any = false;
        for (i, &(u, v)) in edges.iter().enumerate() {
            if alive[i] && removable(u, &deg) && removable(v, &deg) {
                alive[i] = false;
                deg[u] -= 1;
                deg[v] -= 1;
                removed_any = true;
            }
        }
        if !removed_any {
            break;
        }
    }

    let kept: Vec<(usize, usize)> = edges
        .iter()
        .zip(&alive)
        .filter_map(|(&e, &a)| a.then_some(e))
        .collect();
    Graph::from_edges(n, &kept)
}

/// Subgraph induced by `s`, relabeled to `0..|s|`, plus the map from new
/// indices back to host indices.
pub fn induced_subgraph(g: &Graph, s: &VertexSet) -> Result<(Graph, Vec<usize>)> {
    s.check_range(g.vertex_count())?;
    let map: Vec<usize> = s.iter().collect();
    let mut back = vec![usize::MAX; g.vertex_count()];
    for (new, &old) in map.iter().enumerate() {
        back[old] = new;
    }
    let mut edges = Vec::new();
    for (new_u, &old_u) in map.iter().enumerate() {
        for &w in g.neighbors(old_u) {
            let new_w = back[w as usize];
            if new_w != usize::MAX && new_u < new_w {
                edges.push((new_u, new_w));
            }
        }
    }
    Ok((Graph::from_edges(map.len(), &edges)?, map))
}

/// True iff no host edge joins two members of `s`.
pub fn is_independent_set(g: &Graph, s: &VertexSet) -> bool {
    s.iter().all(|v| {
        g.neighbors(v)
            .iter()
            .all(|&w| w as usize <= v || !s.contains(w as usize))
    })
}
