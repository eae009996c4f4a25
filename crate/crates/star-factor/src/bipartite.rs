//! Deterministic bipartite workhorses: a Hall-based star factor with all
//! centers on one side, and a packing that covers the left side with stars of
//! size at least `isqrt(d)`.

use crate::graph::{BipartiteView, VertexSet};
use crate::packing::{Star, StarPacking};
use crate::util::isqrt;
use crate::{Error, Result};

/// Dinic max-flow on a unit-ish network; deterministic for fixed insertion
/// order.
struct Dinic {
    adj: Vec<Vec<u32>>,
    to: Vec<u32>,
    cap: Vec<u32>,
}

impl Dinic {
    fn new(nodes: usize) -> Self {
        Dinic {
            adj: vec![Vec::new(); nodes],
            to: Vec::new(),
            cap: Vec::new(),
        }
    }

    /// Adds a directed edge and its residual twin; returns the forward index.
    fn add_edge(&mut self, u: usize, v: usize, cap: u32) -> usize {
        let id = self.to.len();
        self.adj[u].push(id as u32);
        self.to.push(v as u32);
        self.cap.push(cap);
        self.adj[v].push(id as u32 + 1);
        self.to.push(u as u32);
        self.cap.push(0);
        id
    }

    fn bfs(&self, s: usize, t: usize, level: &mut [u32]) -> bool {
        level.fill(u32::MAX);
        level[s] = 0;
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &e in &self.adj[u] {
                let v = self.to[e as usize] as usize;
                if self.cap[e as usize] > 0 && level[v] == u32::MAX {
                    level[v] = level[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        level[t] != u32::MAX
    }

    fn dfs(&mut self, u: usize, t: usize, pushed: u32, level: &[u32], it: &mut [usize]) -> u32 {
        if u == t {
            return pushed;
        }
        while it[u] < self.adj[u].len() {
            let e = self.adj[u][it[u]] as usize;
            let v = self.to[e] as usize;
            if self.cap[e] > 0 && level[v] == level[u] + 1 {
                let got = self.dfs(v, t, pushed.min(self.cap[e]), level, it);
                if got > 0 {
                    self.cap[e] -= got;
                    self.cap[e ^ 1] += got;
                    return got;
                }
            }
            it[u] += 1;
        }
        0
    }

    fn max_flow(&mut self, s: usize, t: usize) -> u64 {
        let n = self.adj.len();
        let mut flow = 0u64;
        let mut level = vec![u32::MAX; n];
        while self.bfs(s, t, &mut level) {
            let mut it = vec![0usize; n];
            loop {
                let pushed = self.dfs(s, t, u32::MAX, &level, &mut it);
                if pushed == 0 {
                    break;
                }
                flow += pushed as u64;
            }
        }
        flow
    }
}

/// Capacitated star assignment: every left vertex receives exactly `cap`
/// right leaves (source capacity), each right vertex used at most once.
/// Returns `leaves_of[left_pos]` and the used-flag per right position.
fn assign_leaves(
    bv: &BipartiteView,
    left_ids: &[usize],
    right_ids: &[usize],
    cap: u32,
) -> (Vec<Vec<usize>>, Vec<bool>) {
    let nl = left_ids.len();
    let nr = right_ids.len();
    let host_n = bv.host().vertex_count();
    let mut right_pos = vec![usize::MAX; host_n];
    for (i, &w) in right_ids.iter().enumerate() {
        right_pos[w] = i;
    }

    let source = 0usize;
    let sink = nl + nr + 1;
    let mut net = Dinic::new(nl + nr + 2);
    let mut left_edge_ids: Vec<Vec<(usize, usize)>> = vec![Vec::new(); nl];
    for (i, &v) in left_ids.iter().enumerate() {
        net.add_edge(source, 1 + i, cap);
        for &w in bv.host().neighbors(v) {
            let wp = right_pos[w as usize];
            if wp != usize::MAX {
                let e = net.add_edge(1 + i, 1 + nl + wp, 1);
                left_edge_ids[i].push((e, wp));
            }
        }
    }
    let mut sink_edges = Vec::with_capacity(nr);
    for j in 0..nr {
        sink_edges.push(net.add_edge(1 + nl + j, sink, 1));
    }

    let flow = net.max_flow(source, sink);
    assert_eq!(
        flow,
        nl as u64 * cap as u64,
        "bipartite matching failed to saturate the left side despite Hall preconditions"
    );

    let mut leaves_of = vec![Vec::new(); nl];
    for (i, edges) in left_edge_ids.iter().enumerate() {
        for &(e, wp) in edges {
            if net.cap[e] == 0 {
                leaves_of[i].push(right_ids[wp]);
            }
        }
    }
    let right_used: Vec<bool> = sink_edges.iter().map(|&e| net.cap[e] == 0).collect();
    (leaves_of, right_used)
}

/// Star factor of a bipartite view with all centers on the left, star size at
/// least `floor(d1/d2)`.
///
/// Preconditions: every left vertex has view degree at least `d1`, every
/// right vertex between 1 and `d2`, and `d1 >= d2 >= 1`. Right vertices left
/// over by the matching are attached to an adjacent center with the currently
/// smallest star.
pub fn hall_star_factor(bv: &BipartiteView, d1: usize, d2: usize) -> Result<StarPacking> {
    if d2 < 1 || d1 < d2 {
        return Err(Error::input(format!(
            "need d1 >= d2 >= 1, got d1={d1}, d2={d2}"
        )));
    }
    let left_ids: Vec<usize> = bv.left().iter().collect();
    let right_ids: Vec<usize> = bv.right().iter().collect();
    for &v in &left_ids {
        let deg = bv.view_degree(v);
        if deg < d1 {
            return Err(Error::input(format!(
                "left vertex {v} has view degree {deg} < d1={d1}"
            )));
        }
    }
    for &w in &right_ids {
        let deg = bv.view_degree(w);
        if deg < 1 || deg > d2 {
            return Err(Error::input(format!(
                "right vertex {w} has view degree {deg} outside [1, d2={d2}]"
            )));
        }
    }

    let ell = d1 / d2;
    let nl = left_ids.len();
    if nl == 0 {
        // nothing to center; preconditions force the right side empty too
        if !right_ids.is_empty() {
            return Err(Error::input("right vertices present with empty left side"));
        }
        return Ok(StarPacking::empty().with_declared_ell(ell));
    }

    let (mut leaves_of, right_used) = assign_leaves(bv, &left_ids, &right_ids, ell as u32);

    // attach leftover right vertices to the adjacent center with the smallest
    // star so far, ties by center index
    let host_n = bv.host().vertex_count();
    let mut left_pos = vec![usize::MAX; host_n];
    for (i, &v) in left_ids.iter().enumerate() {
        left_pos[v] = i;
    }
    for (j, &w) in right_ids.iter().enumerate() {
        if right_used[j] {
            continue;
        }
        let mut best: Option<usize> = None;
        for &v in bv.host().neighbors(w) {
            let lp = left_pos[v as usize];
            if lp != usize::MAX {
                best = Some(match best {
                    Some(b) if leaves_of[b].len() <= leaves_of[lp].len() => b,
                    _ => lp,
                });
            }
        }
        let lp = best.expect("right vertex with positive view degree has a left neighbor");
        leaves_of[lp].push(w);
    }

    let stars = left_ids
        .iter()
        .zip(leaves_of)
        .map(|(&center, leaves)| {
            Star::new(center, leaves.into_iter().collect()).expect("center never its own leaf")
        })
        .collect();
    Ok(StarPacking::new(stars, ell))
}

/// Packing with stars of size at least `isqrt(d)` covering the whole left
/// side of the view.
///
/// Stage 1 greedily grows a maximal packing of size-`isqrt(d)` stars centered
/// on the right (with uncovered left vertices appended to adjacent centers
/// until none remains); stage 2 covers the residual left side through
/// [`hall_star_factor`], or a plain maximum matching when `isqrt(d) = 1`.
pub fn cover_left_side(bv: &BipartiteView, d: usize) -> Result<StarPacking> {
    if d < 1 {
        return Err(Error::input("need d >= 1"));
    }
    let left_ids: Vec<usize> = bv.left().iter().collect();
    let right_ids: Vec<usize> = bv.right().iter().collect();
    for &v in &left_ids {
        let deg = bv.view_degree(v);
        if deg < d {
            return Err(Error::input(format!(
                "left vertex {v} has view degree {deg} < d={d}"
            )));
        }
    }

    let s = isqrt(d);
    let host = bv.host();
    let host_n = host.vertex_count();
    let left_mask = bv.left().to_mask(host_n);
    let mut left_covered = vec![false; host_n];
    let mut right_used = vec![false; host_n];

    // stage 1: greedy maximal packing of stars of size exactly s, centers on
    // the right, scanning rights in increasing index
    let mut stage1: Vec<(usize, Vec<usize>)> = Vec::new();
    for &w in &right_ids {
        let free: Vec<usize> = host
            .neighbors(w)
            .iter()
            .map(|&v| v as usize)
            .filter(|&v| left_mask[v] && !left_covered[v])
            .collect();
        if free.len() >= s && s > 0 {
            let leaves: Vec<usize> = free[..s].to_vec();
            for &v in &leaves {
                left_covered[v] = true;
            }
            right_used[w] = true;
            stage1.push((w, leaves));
        }
    }

    // append uncovered lefts adjacent to a used center (smallest star first,
    // ties by center index); one ascending pass reaches the fixpoint
    let mut center_slot = vec![usize::MAX; host_n];
    for (slot, &(w, _)) in stage1.iter().enumerate() {
        center_slot[w] = slot;
    }
    for &v in &left_ids {
        if left_covered[v] {
            continue;
        }
        let mut best: Option<usize> = None;
        for &w in host.neighbors(v) {
            let slot = center_slot[w as usize];
            if slot != usize::MAX {
                best = Some(match best {
                    Some(b) if stage1[b].1.len() <= stage1[slot].1.len() => b,
                    _ => slot,
                });
            }
        }
        if let Some(slot) = best {
            stage1[slot].1.push(v);
            left_covered[v] = true;
        }
    }

    // maximality certificate: every unused right vertex now sees fewer than s
    // uncovered left vertices, and uncovered lefts have no used neighbor
    for &w in &right_ids {
        if !right_used[w] {
            let cnt = host
                .neighbors(w)
                .iter()
                .filter(|&&v| left_mask[v as usize] && !left_covered[v as usize])
                .count();
            assert!(
                cnt < s.max(1),
                "stage-1 packing not maximal at right vertex {w}"
            );
        }
    }

    let residual_left: VertexSet = left_ids
        .iter()
        .copied()
        .filter(|&v| !left_covered[v])
        .collect();
    let mut stars: Vec<Star> = stage1
        .into_iter()
        .map(|(c, leaves)| Star::new(c, leaves.into_iter().collect()).expect("bipartite star"))
        .collect();

    if !residual_left.is_empty() {
        let residual_right: VertexSet = right_ids
            .iter()
            .copied()
            .filter(|&w| {
                !right_used[w]
                    && host
                        .neighbors(w)
                        .iter()
                        .any(|&v| left_mask[v as usize] && !left_covered[v as usize])
            })
            .collect();
        let view2 = BipartiteView::new(host, residual_left.clone(), residual_right.clone())?;
        let sub = if s >= 2 {
            hall_star_factor(&view2, d, s - 1)?
        } else {
            // degenerate d < 4: a maximum matching saturates the residual lefts
            let rl: Vec<usize> = residual_left.iter().collect();
            let rr: Vec<usize> = residual_right.iter().collect();
            for &v in &rl {
                if view2.view_degree(v) < 1 {
                    return Err(Error::input(format!(
                        "left vertex {v} has no residual right neighbor"
                    )));
                }
            }
            let (leaves_of, _) = assign_leaves(&view2, &rl, &rr, 1);
            let stars = rl
                .iter()
                .zip(leaves_of)
                .map(|(&c, ls)| Star::new(c, ls.into_iter().collect()).expect("matching star"))
                .collect();
            StarPacking::new(stars, 1)
        };
        stars.extend(sub.stars().iter().cloned());
    }

    Ok(StarPacking::new(stars, s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::packing::verify;

    fn complete_bipartite(nl: usize, nr: usize) -> (Graph, VertexSet, VertexSet) {
        let mut edges = Vec::new();
        for u in 0..nl {
            for w in 0..nr {
                edges.push((u, nl + w));
            }
        }
        let g = Graph::from_edges(nl + nr, &edges).unwrap();
        let left = VertexSet::full(nl);
        let right: VertexSet = (nl..nl + nr).collect();
        (g, left, right)
    }

    #[test]
    fn hall_single_star() {
        let (g, left, right) = complete_bipartite(1, 3);
        let bv = BipartiteView::new(&g, left.clone(), right.clone()).unwrap();
        let p = hall_star_factor(&bv, 3, 1).unwrap();
        assert_eq!(p.star_count(), 1);
        assert_eq!(p.stars()[0].center, 0);
        assert_eq!(p.min_star_size(), Some(3));
        assert!(verify(&g, &p, 3, &left.union(&right)).is_valid());
    }

    #[test]
    fn hall_two_centers_share_five_rights() {
        let (g, left, right) = complete_bipartite(2, 5);
        let bv = BipartiteView::new(&g, left.clone(), right.clone()).unwrap();
        let p = hall_star_factor(&bv, 5, 2).unwrap();
        assert!(verify(&g, &p, 2, &left.union(&right)).is_valid());
        assert_eq!(p.star_count(), 2);
    }

    #[test]
    fn hall_rejects_isolated_right_vertex() {
        let mut edges = vec![(0, 1)];
        edges.push((0, 2));
        let g = Graph::from_edges(4, &edges).unwrap();
        let bv = BipartiteView::new(
            &g,
            [0usize].into_iter().collect(),
            [1usize, 2, 3].into_iter().collect(),
        )
        .unwrap();
        let err = hall_star_factor(&bv, 2, 1).unwrap_err();
        assert!(matches!(err, Error::Input(ref m) if m.contains("right vertex 3")));
    }

    #[test]
    fn hall_rejects_bad_parameters() {
        let (g, left, right) = complete_bipartite(1, 3);
        let bv = BipartiteView::new(&g, left, right).unwrap();
        assert!(hall_star_factor(&bv, 1, 2).is_err());
        assert!(hall_star_factor(&bv, 1, 0).is_err());
    }

    #[test]
    fn cover_single_left_vertex_needs_stage_two() {
        // one left vertex adjacent to four rights: no right has 2 left
        // neighbors, so stage 1 is empty and stage 2 matches u into the rights
        let (g, left, right) = complete_bipartite(1, 4);
        let bv = BipartiteView::new(&g, left.clone(), right).unwrap();
        let p = cover_left_side(&bv, 4).unwrap();
        assert!(verify(&g, &p, 2, &left).is_valid());
        // stage 2 centers the star at the left vertex
        assert_eq!(p.stars()[0].center, 0);
    }

    #[test]
    fn cover_k99_all_stars_at_least_three() {
        let (g, left, right) = complete_bipartite(9, 9);
        let bv = BipartiteView::new(&g, left.clone(), right).unwrap();
        let p = cover_left_side(&bv, 9).unwrap();
        let report = verify(&g, &p, 3, &left);
        assert!(report.is_valid(), "{:?}", report.violations);
        assert!(report.min_star_size.unwrap() >= 3);
    }

    #[test]
    fn cover_degenerate_d1() {
        // two lefts share a single right: K_{2,1} with d=1
        let g = Graph::from_edges(3, &[(0, 2), (1, 2)]).unwrap();
        let left: VertexSet = [0usize, 1].into_iter().collect();
        let right: VertexSet = [2usize].into_iter().collect();
        let bv = BipartiteView::new(&g, left.clone(), right).unwrap();
        let p = cover_left_side(&bv, 1).unwrap();
        assert!(verify(&g, &p, 1, &left).is_valid());
    }

    #[test]
    fn cover_rejects_deficient_left_degree() {
        let (g, left, right) = complete_bipartite(2, 3);
        let bv = BipartiteView::new(&g, left, right).unwrap();
        assert!(cover_left_side(&bv, 4).is_err());
    }
}
