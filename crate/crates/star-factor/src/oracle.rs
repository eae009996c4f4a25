//! Ground-truth engine: exhaustive decision of star-factor existence and the
//! exact maximum `ell` on tiny graphs. Everything else in the crate is
//! validated against this module, and this module is validated against an
//! independent partition-enumeration brute force in [`naive`].

use crate::graph::Graph;
use crate::packing::{Star, StarPacking};
use crate::{Error, Result};

/// Default vertex-count limit for exhaustive search.
pub const DEFAULT_LIMIT: usize = 16;
/// Hard cap: the memo table is indexed by uncovered-set bitmask.
pub const HARD_LIMIT: usize = 20;

/// Result of [`max_factor_size`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MaxFactor {
    /// Largest `ell` admitting a factor; 0 iff no factor exists at all.
    pub ell: usize,
    /// Set when an isolated vertex makes any factor impossible.
    pub isolated_vertex: bool,
}

fn check_limit(g: &Graph, limit: usize) -> Result<()> {
    if limit > HARD_LIMIT {
        return Err(Error::input(format!(
            "oracle limit {limit} exceeds hard cap {HARD_LIMIT}"
        )));
    }
    if g.vertex_count() > limit {
        return Err(Error::input(format!(
            "graph has {} vertices, over the oracle limit {limit}",
            g.vertex_count()
        )));
    }
    Ok(())
}

fn adjacency_masks(g: &Graph) -> Vec<u32> {
    (0..g.vertex_count())
        .map(|v| g.neighbors(v).iter().fold(0u32, |m, &w| m | (1 << w)))
        .collect()
}

struct Search {
    adj: Vec<u32>,
    ell: usize,
    /// 0 = unknown, 1 = feasible, 2 = infeasible
    memo: Vec<u8>,
    /// winning (center, leaf mask) per feasible mask, for witness rebuild
    choice: Vec<(u8, u32)>,
}

impl Search {
    fn new(g: &Graph, ell: usize) -> Self {
        let n = g.vertex_count();
        Search {
            adj: adjacency_masks(g),
            ell,
            memo: vec![0; 1usize << n],
            choice: vec![(0, 0); 1usize << n],
        }
    }

    fn feasible(&mut self, mask: u32) -> bool {
        if mask == 0 {
            return true;
        }
        match self.memo[mask as usize] {
            1 => return true,
            2 => return false,
            _ => {}
        }
        // an uncovered vertex with no uncovered neighbor can never be placed
        let mut rest = mask;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            if self.adj[v] & mask == 0 {
                self.memo[mask as usize] = 2;
                return false;
            }
            rest &= rest - 1;
        }

        let v = mask.trailing_zeros() as usize;
        let vbit = 1u32 << v;
        let avail = self.adj[v] & mask;

        // v as center: any uncovered-neighbor subset of size >= ell
        if (avail.count_ones() as usize) >= self.ell {
            let mut sub = avail;
            loop {
                if (sub.count_ones() as usize) >= self.ell && self.feasible(mask & !sub & !vbit) {
                    self.memo[mask as usize] = 1;
                    self.choice[mask as usize] = (v as u8, sub);
                    return true;
                }
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & avail;
            }
        }

        // v as leaf: some uncovered neighbor u is the center, leaf set contains v
        let mut centers = avail;
        while centers != 0 {
            let u = centers.trailing_zeros() as usize;
            centers &= centers - 1;
            let ubit = 1u32 << u;
            let pool = (self.adj[u] & mask) & !vbit;
            if (pool.count_ones() as usize) + 1 < self.ell {
                continue;
            }
            let mut sub = pool;
            loop {
                let leaves = sub | vbit;
                if (leaves.count_ones() as usize) >= self.ell
                    && self.feasible(mask & !leaves & !ubit)
                {
                    self.memo[mask as usize] = 1;
                    self.choice[mask as usize] = (u as u8, leaves);
                    return true;
                }
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & pool;
            }
        }

        self.memo[mask as usize] = 2;
        false
    }

    fn witness(&self, mut mask: u32, ell: usize) -> StarPacking {
        let mut stars = Vec::new();
        while mask != 0 {
            let (center, leaves) = self.choice[mask as usize];
            let leaf_set = (0..32)
                .filter(|&b| leaves & (1 << b) != 0)
                .map(|b| b as usize);
            stars.push(Star::new(center as usize, leaf_set.collect()).expect("oracle star"));
            mask &= !(leaves | (1 << center));
        }
        StarPacking::new(stars, ell)
    }
}

/// Decides whether `g` has an `S_ell`-factor, i.e. whether its vertex set can
/// be partitioned into stars of size at least `ell`. On success a witness
/// packing is returned. Graphs over `limit` vertices are refused, never
/// approximated.
pub fn exists_factor(g: &Graph, ell: usize, limit: usize) -> Result<(bool, Option<StarPacking>)> {
    check_limit(g, limit)?;
    if ell == 0 {
        return Err(Error::input("ell must be at least 1"));
    }
    let n = g.vertex_count();
    if n == 0 {
        return Ok((true, Some(StarPacking::empty().with_declared_ell(ell))));
    }
    let full = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let mut search = Search::new(g, ell);
    if search.feasible(full) {
        let w = search.witness(full, ell);
        Ok((true, Some(w)))
    } else {
        Ok((false, None))
    }
}

/// Largest `ell` for which an `S_ell`-factor exists, by descending search
/// from the maximum degree (existence is downward-closed in `ell`). An
/// isolated vertex makes every factor impossible: `ell = 0` with the flag set.
pub fn max_factor_size(g: &Graph, limit: usize) -> Result<MaxFactor> {
    check_limit(g, limit)?;
    let n = g.vertex_count();
    if n == 0 {
        return Ok(MaxFactor {
            ell: 0,
            isolated_vertex: false,
        });
    }
    if g.min_degree() == 0 {
        return Ok(MaxFactor {
            ell: 0,
            isolated_vertex: true,
        });
    }
    for ell in (1..=g.max_degree()).rev() {
        if exists_factor(g, ell, limit)?.0 {
            return Ok(MaxFactor {
                ell,
                isolated_vertex: false,
            });
        }
    }
    Ok(MaxFactor {
        ell: 0,
        isolated_vertex: false,
    })
}

/// Independent brute force used to validate the backtracking oracle: direct
/// enumeration of all set partitions (restricted-growth strings).
pub mod naive {
    use super::*;

    /// Practical bound: Bell(10) partitions.
    pub const NAIVE_LIMIT: usize = 10;

    fn block_is_star(g: &Graph, block: &[usize], ell: usize) -> bool {
        if block.len() < ell + 1 {
            return false;
        }
        block
            .iter()
            .any(|&c| block.iter().all(|&v| v == c || g.has_edge(c, v)))
    }

    pub fn exists_factor(g: &Graph, ell: usize) -> Result<bool> {
        let n = g.vertex_count();
        if n > NAIVE_LIMIT {
            return Err(Error::input(format!(
                "naive oracle limited to {NAIVE_LIMIT} vertices, got {n}"
            )));
        }
        if ell == 0 {
            return Err(Error::input("ell must be at least 1"));
        }
        if n == 0 {
            return Ok(true);
        }
        let mut assign = vec![0usize; n];
        loop {
            let blocks = assign.iter().max().unwrap() + 1;
            let mut groups: Vec<Vec<usize>> = vec![Vec::new(); blocks];
            for (v, &b) in assign.iter().enumerate() {
                groups[b].push(v);
            }
            if groups.iter().all(|b| block_is_star(g, b, ell)) {
                return Ok(true);
            }
            // next restricted-growth string
            let mut i = n - 1;
            loop {
                if i == 0 {
                    return Ok(false);
                }
                let max_prefix = assign[..i].iter().copied().max().unwrap();
                if assign[i] <= max_prefix {
                    assign[i] += 1;
                    for a in assign[i + 1..].iter_mut() {
                        *a = 0;
                    }
                    break;
                }
                i -= 1;
            }
        }
    }

    pub fn max_factor_size(g: &Graph) -> Result<MaxFactor> {
        let n = g.vertex_count();
        if n == 0 {
            return Ok(MaxFactor {
                ell: 0,
                isolated_vertex: false,
            });
        }
        if g.min_degree() == 0 {
            return Ok(MaxFactor {
                ell: 0,
                isolated_vertex: true,
            });
        }
        for ell in (1..=g.max_degree()).rev() {
            if exists_factor(g, ell)? {
                return Ok(MaxFactor {
                    ell,
                    isolated_vertex: false,
                });
            }
        }
        Ok(MaxFactor {
            ell: 0,
            isolated_vertex: false,
        })
    }
}
