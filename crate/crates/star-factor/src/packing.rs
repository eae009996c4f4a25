//! Star packings and the verifier that certifies every solver output.

use std::fmt;

use crate::graph::{Graph, VertexSet};
use crate::{Error, Result};

/// One star: a center and its leaf set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Star {
    pub center: usize,
    pub leaves: VertexSet,
}

impl Star {
    pub fn new(center: usize, leaves: VertexSet) -> Result<Self> {
        if leaves.contains(center) {
            return Err(Error::contract(format!(
                "center {center} listed among its own leaves"
            )));
        }
        Ok(Star { center, leaves })
    }

    /// Star size = number of leaves.
    pub fn size(&self) -> usize {
        self.leaves.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = usize> + '_ {
        std::iter::once(self.center).chain(self.leaves.iter())
    }
}

/// A collection of vertex-disjoint stars. `declared_ell` is metadata carried
/// through serialization; the verifier always recomputes the true minimum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarPacking {
    stars: Vec<Star>,
    declared_ell: usize,
}

impl StarPacking {
    /// Builds a packing; stars are stored sorted by center so equal packings
    /// serialize identically.
    pub fn new(mut stars: Vec<Star>, declared_ell: usize) -> Self {
        stars.sort_by_key(|s| s.center);
        StarPacking {
            stars,
            declared_ell,
        }
    }

    pub fn empty() -> Self {
        StarPacking {
            stars: Vec::new(),
            declared_ell: 0,
        }
    }

    pub fn stars(&self) -> &[Star] {
        &self.stars
    }

    pub fn declared_ell(&self) -> usize {
        self.declared_ell
    }

    pub fn star_count(&self) -> usize {
        self.stars.len()
    }

    /// True minimum star size, `None` for an empty packing.
    pub fn min_star_size(&self) -> Option<usize> {
        self.stars.iter().map(Star::size).min()
    }

    /// All vertices used by the packing (centers and leaves).
    pub fn covered(&self) -> VertexSet {
        self.stars
            .iter()
            .flat_map(|s| s.vertices().collect::<Vec<_>>())
            .collect()
    }

    pub fn with_declared_ell(mut self, ell: usize) -> Self {
        self.declared_ell = ell;
        self
    }

    /// Adds `v` as a leaf of the star at `star_index`. `v` must be adjacent to
    /// that star's center in `g` and not already used by the packing.
    pub fn attach_leaf(&self, g: &Graph, star_index: usize, v: usize) -> Result<StarPacking> {
        let star = self
            .stars
            .get(star_index)
            .ok_or_else(|| Error::contract(format!("no star at index {star_index}")))?;
        if self
            .stars
            .iter()
            .any(|s| s.center == v || s.leaves.contains(v))
        {
            return Err(Error::contract(format!(
                "vertex {v} already in the packing"
            )));
        }
        if !g.has_edge(star.center, v) {
            return Err(Error::contract(format!(
                "vertex {v} not adjacent to center {}",
                star.center
            )));
        }
        let mut stars = self.stars.clone();
        let mut leaves: Vec<u32> = star.leaves.as_slice().to_vec();
        leaves.push(v as u32);
        stars[star_index] = Star::new(star.center, VertexSet::from_unsorted(leaves))?;
        Ok(StarPacking::new(stars, self.declared_ell))
    }

    /// Restricts every star's leaves to `keep`. Centers are never removed; a
    /// star whose size would fall below `floor` is a contract error.
    pub fn prune_leaves(&self, keep: &VertexSet, floor: usize) -> Result<StarPacking> {
        let mut stars = Vec::with_capacity(self.stars.len());
        for (i, star) in self.stars.iter().enumerate() {
            let kept = star.leaves.intersect(keep);
            if kept.len() < floor {
                return Err(Error::contract(format!(
                    "star {i} (center {}) would shrink to {} leaves, below floor {floor}",
                    star.center,
                    kept.len()
                )));
            }
            stars.push(Star {
                center: star.center,
                leaves: kept,
            });
        }
        Ok(StarPacking::new(stars, self.declared_ell))
    }
}

/// A single verifier finding. Violations are data, not errors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    CenterOutOfRange {
        star: usize,
        center: usize,
    },
    LeafOutOfRange {
        star: usize,
        leaf: usize,
    },
    EmptyStar {
        star: usize,
    },
    LeafNotAdjacent {
        star: usize,
        center: usize,
        leaf: usize,
    },
    VertexReused {
        vertex: usize,
    },
    StarTooSmall {
        star: usize,
        size: usize,
        required: usize,
    },
    Uncovered {
        vertex: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::CenterOutOfRange { star, center } => {
                write!(f, "star {star}: center {center} out of range")
            }
            Violation::LeafOutOfRange { star, leaf } => {
                write!(f, "star {star}: leaf {leaf} out of range")
            }
            Violation::EmptyStar { star } => write!(f, "star {star}: no leaves"),
            Violation::LeafNotAdjacent { star, center, leaf } => {
                write!(
                    f,
                    "star {star}: leaf {leaf} not adjacent to center {center}"
                )
            }
            Violation::VertexReused { vertex } => write!(f, "reused: {vertex}"),
            Violation::StarTooSmall {
                star,
                size,
                required,
            } => {
                write!(f, "star {star}: size {size} < {required}")
            }
            Violation::Uncovered { vertex } => write!(f, "uncovered: {vertex}"),
        }
    }
}

/// Verifier output: all violations found plus the recomputed minimum star
/// size (the declaration is never trusted).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub violations: Vec<Violation>,
    pub min_star_size: Option<usize>,
}

impl VerificationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Certifies that `p` is an `S_ell`-packing of `g` covering `required_cover`.
/// With `required_cover = V(g)` this certifies an `S_ell`-factor. Malformed
/// packings are reported, never rejected with an error.
pub fn verify(
    g: &Graph,
    p: &StarPacking,
    ell: usize,
    required_cover: &VertexSet,
) -> VerificationReport {
    let n = g.vertex_count();
    let mut violations = Vec::new();
    let mut seen = vec![false; n];
    let mut reused: Vec<usize> = Vec::new();
    let mark = |v: usize, seen: &mut Vec<bool>, reused: &mut Vec<usize>| {
        if v < n {
            if seen[v] {
                reused.push(v);
            } else {
                seen[v] = true;
            }
        }
    };

    for (i, star) in p.stars().iter().enumerate() {
        if star.center >= n {
            violations.push(Violation::CenterOutOfRange {
                star: i,
                center: star.center,
            });
        } else {
            mark(star.center, &mut seen, &mut reused);
        }
        if star.size() == 0 {
            violations.push(Violation::EmptyStar { star: i });
        }
        for leaf in star.leaves.iter() {
            if leaf >= n {
                violations.push(Violation::LeafOutOfRange { star: i, leaf });
                continue;
            }
            mark(leaf, &mut seen, &mut reused);
            if star.center < n && !g.has_edge(star.center, leaf) {
                violations.push(Violation::LeafNotAdjacent {
                    star: i,
                    center: star.center,
                    leaf,
                });
            }
        }
        if star.size() < ell {
            violations.push(Violation::StarTooSmall {
                star: i,
                size: star.size(),
                required: ell,
            });
        }
    }

    reused.sort_unstable();
    reused.dedup();
    for v in reused {
        violations.push(Violation::VertexReused { vertex: v });
    }
    for v in required_cover.iter() {
        if v >= n || !seen[v] {
            violations.push(Violation::Uncovered { vertex: v });
        }
    }

    VerificationReport {
        violations,
        min_star_size: p.min_star_size(),
    }
}

/// Renders the packing text format: header `ell <k>`, then one `s <center>
/// <leaf> <leaf> ...` line per star, 0-based, LF-terminated.
pub fn to_text(p: &StarPacking) -> String {
    let mut out = format!("ell {}\n", p.declared_ell());
    for star in p.stars() {
        out.push_str(&format!("s {}", star.center));
        for leaf in star.leaves.iter() {
            out.push_str(&format!(" {leaf}"));
        }
        out.push('\n');
    }
    out
}

/// Parses the packing text format; `#` starts a comment.
pub fn from_text(text: &str) -> Result<StarPacking> {
    let mut declared_ell: Option<usize> = None;
    let mut stars = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut tokens = content.split_whitespace();
        match tokens.next() {
            Some("ell") => {
                if declared_ell.is_some() {
                    return Err(Error::Parse {
                        line,
                        msg: "duplicate ell header".into(),
                    });
                }
                let k = tokens.next().ok_or_else(|| Error::Parse {
                    line,
                    msg: "missing ell value".into(),
                })?;
                declared_ell = Some(k.parse().map_err(|_| Error::Parse {
                    line,
                    msg: format!("bad ell value '{k}'"),
                })?);
                if tokens.next().is_some() {
                    return Err(Error::Parse {
                        line,
                        msg: "trailing tokens after ell".into(),
                    });
                }
            }
            Some("s") => {
                let mut ids = Vec::new();
                for tok in tokens {
                    ids.push(tok.parse::<usize>().map_err(|_| Error::Parse {
                        line,
                        msg: format!("bad vertex '{tok}'"),
                    })?);
                }
                if ids.is_empty() {
                    return Err(Error::Parse {
                        line,
                        msg: "star line without center".into(),
                    });
                }
                let center = ids[0];
                let leaves: VertexSet = ids[1..].iter().map(|&v| v as u32).collect();
                if leaves.len() != ids.len() - 1 {
                    return Err(Error::Parse {
                        line,
                        msg: "duplicate leaf in star".into(),
                    });
                }
                let star = Star::new(center, leaves).map_err(|e| Error::Parse {
                    line,
                    msg: e.to_string(),
                })?;
                stars.push(star);
            }
            Some(other) => {
                return Err(Error::Parse {
                    line,
                    msg: format!("unknown directive '{other}'"),
                })
            }
            None => unreachable!(),
        }
    }
    let ell = declared_ell.ok_or_else(|| Error::Parse {
        line: 0,
        msg: "missing ell header".into(),
    })?;
    Ok(StarPacking::new(stars, ell))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k4() -> Graph {
        Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap()
    }

    fn star(center: usize, leaves: &[u32]) -> Star {
        Star::new(center, leaves.iter().copied().collect()).unwrap()
    }

    #[test]
    fn verify_single_star_factor_of_k4() {
        let g = k4();
        let p = StarPacking::new(vec![star(0, &[1, 2, 3])], 3);
        let report = verify(&g, &p, 3, &VertexSet::full(4));
        assert!(report.is_valid(), "{:?}", report.violations);
        assert_eq!(report.min_star_size, Some(3));
    }

    #[test]
    fn verify_reports_uncovered_vertex() {
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let p = StarPacking::new(vec![star(0, &[1, 3])], 2);
        let report = verify(&g, &p, 2, &VertexSet::full(4));
        assert_eq!(report.violations, vec![Violation::Uncovered { vertex: 2 }]);
    }

    #[test]
    fn verify_reports_vertex_reuse() {
        let g = Graph::from_edges(3, &[(0, 1), (0, 2), (1, 2)]).unwrap();
        let p = StarPacking::new(vec![star(0, &[1]), star(1, &[2])], 1);
        let report = verify(&g, &p, 1, &VertexSet::new());
        assert_eq!(
            report.violations,
            vec![Violation::VertexReused { vertex: 1 }]
        );
    }

    #[test]
    fn verify_reports_non_adjacent_leaf_and_small_star() {
        let g = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        let p = StarPacking::new(vec![star(0, &[2])], 0);
        let report = verify(&g, &p, 2, &VertexSet::new());
        assert!(report.violations.contains(&Violation::LeafNotAdjacent {
            star: 0,
            center: 0,
            leaf: 2
        }));
        assert!(report.violations.contains(&Violation::StarTooSmall {
            star: 0,
            size: 1,
            required: 2
        }));
    }

    #[test]
    fn verify_monotone_in_ell() {
        let g = k4();
        let p = StarPacking::new(vec![star(0, &[1, 2])], 2);
        for ell in (1..=2).rev() {
            assert!(verify(&g, &p, ell, &VertexSet::new()).is_valid());
        }
    }

    #[test]
    fn attach_leaf_examples() {
        let g = Graph::from_edges(3, &[(0, 1), (0, 2), (1, 2)]).unwrap();
        let p = StarPacking::new(vec![star(0, &[1])], 1);
        let p2 = p.attach_leaf(&g, 0, 2).unwrap();
        assert_eq!(p2.stars()[0].leaves, [1u32, 2].into_iter().collect());
        assert!(p.attach_leaf(&g, 0, 1).is_err()); // already in packing
        let g2 = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        let q = StarPacking::new(vec![star(0, &[1])], 1);
        assert!(q.attach_leaf(&g2, 0, 3).is_err()); // non-neighbor
    }

    #[test]
    fn prune_leaves_examples() {
        let p = StarPacking::new(vec![star(0, &[1, 2, 3])], 3);
        let keep: VertexSet = [1u32, 2].into_iter().collect();
        let pruned = p.prune_leaves(&keep, 2).unwrap();
        assert_eq!(pruned.stars()[0].leaves, keep);

        let tiny = StarPacking::new(vec![star(0, &[1])], 1);
        assert!(tiny.prune_leaves(&VertexSet::new(), 1).is_err());

        let all: VertexSet = [1u32, 2, 3].into_iter().collect();
        assert_eq!(p.prune_leaves(&all, 3).unwrap(), p);
    }

    #[test]
    fn prune_then_attach_restores_validity() {
        let g = k4();
        let p = StarPacking::new(vec![star(0, &[1, 2, 3])], 3);
        let keep: VertexSet = [1u32, 2].into_iter().collect();
        let pruned = p.prune_leaves(&keep, 2).unwrap();
        let restored = pruned.attach_leaf(&g, 0, 3).unwrap();
        assert!(verify(&g, &restored, 3, &VertexSet::full(4)).is_valid());
    }

    #[test]
    fn text_round_trip() {
        let p = StarPacking::new(vec![star(4, &[1, 2]), star(0, &[3])], 1);
        let text = to_text(&p);
        assert_eq!(text, "ell 1\ns 0 3\ns 4 1 2\n");
        let parsed = from_text(&text).unwrap();
        assert_eq!(parsed, p);
        let commented = format!("# packing\n{text}");
        assert_eq!(from_text(&commented).unwrap(), p);
    }

    #[test]
    fn text_parse_errors() {
        assert!(from_text("s 0 1\n").is_err()); // missing header
        assert!(from_text("ell 1\ns\n").is_err()); // star without center
        assert!(from_text("ell 1\nz 0 1\n").is_err()); // unknown directive
        assert!(from_text("ell 1\ns 0 1 1\n").is_err()); // duplicate leaf
        assert!(from_text("ell 1\ns 0 0\n").is_err()); // center as leaf
    }
}
