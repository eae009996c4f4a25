//! Two-phase covering solver: edge-minimalize relative to an exempt set,
//! partition the rest by degree structure, cover the awkward classes through
//! a randomized center selection (Phase I), then cover the remainder through
//! the bipartite engine over pruned leaves (Phase II).

use std::str::FromStr;

use crate::bipartite::{cover_left_side, hall_star_factor};
use crate::graph::{edge_minimalize, BipartiteView, Graph, VertexSet};
use crate::lll::{select_subset, BadEvent, EventKind, SubsetSelectionProblem};
use crate::packing::{Star, StarPacking};
use crate::util::{derive_seed, ge12, round12, sqrt_log};
use crate::{Error, Result};

pub(crate) const STREAM_PHASE1: u64 = 1;
pub(crate) const STREAM_PHASE2: u64 = 2;

/// Execution mode. `Faithful` uses the derivation's formulas verbatim and
/// fails cleanly when a quantity degenerates; `BestEffort` (default) clamps
/// thresholds at sane floors and falls back to a deterministic greedy cover
/// when a randomized stage does not converge, flagging every deviation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Faithful,
    BestEffort,
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "faithful" => Ok(Mode::Faithful),
            "best-effort" | "best_effort" => Ok(Mode::BestEffort),
            other => Err(Error::input(format!("unknown mode '{other}'"))),
        }
    }
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Mode::Faithful => write!(f, "faithful"),
            Mode::BestEffort => write!(f, "best-effort"),
        }
    }
}

/// Tuning constants of the covering solver. Defaults follow the derivation;
/// they are configuration so tests can exercise every branch at small scale.
#[derive(Debug, Clone)]
pub struct CoverConfig {
    /// Phase-I inclusion probability factor: `p = c_select·sqrt(log d)/d^(3/4)`.
    pub c_select: f64,
    /// Phase-I per-vertex cap factor: `max{d, deg(v)}·c_cap·sqrt(log d)/d^(3/4)`.
    pub c_cap: f64,
    /// Phase-II pruning probability factor: `p = c_prune·sqrt(log d)/d^(1/4)`.
    pub c_prune: f64,
    /// Slack in the Phase-II degree parameter `d − c_slack·d^(3/4)·sqrt(log d)`.
    pub c_slack: f64,
    /// Phase-II per-star retention floor factor (`keep_floor_factor·sqrt(d)` leaves).
    pub keep_floor_factor: f64,
    pub mode: Mode,
    pub seed: u64,
    /// Resample budget per selection; `None` uses the engine default.
    pub max_resamples: Option<u64>,
}

impl Default for CoverConfig {
    fn default() -> Self {
        CoverConfig {
            c_select: 8.0,
            c_cap: 9.0,
            c_prune: 30.0,
            c_slack: 42.0,
            keep_floor_factor: 2.0,
            mode: Mode::BestEffort,
            seed: 0,
            max_resamples: None,
        }
    }
}

impl CoverConfig {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_mode(mut self, mode: Mode) -> Self {
        self.mode = mode;
        self
    }

    fn validate(&self) -> Result<()> {
        let all = [
            self.c_select,
            self.c_cap,
            self.c_prune,
            self.c_slack,
            self.keep_floor_factor,
        ];
        if all.iter().any(|&c| !c.is_finite() || c <= 0.0) {
            return Err(Error::input("cover constants must be positive"));
        }
        Ok(())
    }
}

/// Vertex classes of the minimalized graph relative to the exempt set and
/// degree parameter: `tight` has degree exactly `d−5`, `high` more;
/// `near_high` are tight vertices leaning on `high`; `anchored` vertices
/// concentrate their degree in `near_high ∪ exempt` and are covered in
/// Phase II; `loose` is the remainder, covered (with `near_high`) in Phase I.
#[derive(Debug, Clone)]
pub struct CoverPartition {
    pub tight: VertexSet,
    pub high: VertexSet,
    pub near_high: VertexSet,
    pub anchored: VertexSet,
    pub loose: VertexSet,
    /// Threshold `tau` used for the `near_high` split (possibly clamped).
    pub tau: f64,
    /// Threshold used for the `anchored` split (possibly clamped).
    pub anchor_threshold: f64,
}

impl CoverPartition {
    pub fn class_sizes(&self) -> [usize; 5] {
        [
            self.tight.len(),
            self.high.len(),
            self.near_high.len(),
            self.anchored.len(),
            self.loose.len(),
        ]
    }
}

/// Per-phase statistics surfaced in solver reports.
#[derive(Debug, Clone, Default)]
pub struct PhaseStat {
    pub covered: usize,
    pub stars: usize,
    pub min_star: Option<usize>,
    pub resamples: u64,
    pub converged: bool,
    pub fallback: bool,
    /// Diagnostic: whether the symmetric Local Lemma condition held for the
    /// stage's selection problem (never enforced).
    pub symmetric_condition: Option<bool>,
}

/// Outcome of [`cover_excluding`].
#[derive(Debug, Clone)]
pub struct CoverReport {
    /// Minimum star size actually achieved (0 for an empty packing).
    pub achieved_ell: usize,
    /// Linearized target `sqrt(d) − c_slack·d^(1/4)·sqrt(log d)`; may be negative.
    pub target_ell: f64,
    pub class_sizes: [usize; 5],
    pub phase1: PhaseStat,
    pub phase2: PhaseStat,
    pub fallbacks: Vec<String>,
}

/// Computes the degree-structure partition of `V(g) ∖ s`.
///
/// `g` must already be edge-minimalized with target `d−5` and exempt `s`
/// (checked through its consequences: degree bounds and independence of the
/// high class). Thresholds use natural logs and are compared after rounding
/// to 12 significant digits.
pub fn partition_vertices(
    g: &Graph,
    s: &VertexSet,
    d: usize,
    cfg: &CoverConfig,
) -> Result<CoverPartition> {
    cfg.validate()?;
    let n = g.vertex_count();
    s.check_range(n)?;
    if d < 1 {
        return Err(Error::input("need d >= 1"));
    }
    let s_mask = s.to_mask(n);
    let target = d as i64 - 5;
    for (v, &exempt) in s_mask.iter().enumerate() {
        if exempt {
            if g.degree(v) > d {
                return Err(Error::input(format!(
                    "exempt vertex {v} has degree {} > d={d}",
                    g.degree(v)
                )));
            }
        } else if (g.degree(v) as i64) < target {
            return Err(Error::input(format!(
                "vertex {v} has degree {} < d-5 = {target}",
                g.degree(v)
            )));
        }
    }
    if cfg.mode == Mode::Faithful {
        let cap = crate::util::pow_f(d, 5.0);
        if let Some(v) = (0..n).find(|&v| (g.degree(v) as f64) > cap) {
            return Err(Error::input(format!(
                "vertex {v} has degree {} > d^5 = {cap}",
                g.degree(v)
            )));
        }
    }

    let slog = sqrt_log(d);
    let mut tau = (d as f64).powf(0.75) * slog;
    if cfg.mode == Mode::BestEffort {
        tau = tau.min(d as f64 / 4.0);
    }
    let mut anchor_threshold = d as f64 - 3.0 * tau;
    if cfg.mode == Mode::BestEffort {
        anchor_threshold = anchor_threshold.max(0.0);
    }

    let mut tight = Vec::new();
    let mut high = Vec::new();
    for (v, &exempt) in s_mask.iter().enumerate() {
        if exempt {
            continue;
        }
        if g.degree(v) as i64 == target {
            tight.push(v);
        } else {
            high.push(v);
        }
    }
    let tight: VertexSet = tight.into_iter().collect();
    let high: VertexSet = high.into_iter().collect();
    if !crate::graph::is_independent_set(g, &high) {
        return Err(Error::input(
            "high-degree class is not independent; graph is not edge-minimal",
        ));
    }

    let high_mask = high.to_mask(n);
    let count_into =
        |v: usize, mask: &[bool]| g.neighbors(v).iter().filter(|&&w| mask[w as usize]).count();

    let near_high: VertexSet = tight
        .iter()
        .filter(|&v| ge12(count_into(v, &high_mask), tau))
        .collect();

    let mut nh_or_s = near_high.to_mask(n);
    for v in s.iter() {
        nh_or_s[v] = true;
    }
    let mut anchored = Vec::new();
    let mut loose = Vec::new();
    for v in tight.iter().chain(high.iter()) {
        if near_high.contains(v) {
            continue;
        }
        if ge12(count_into(v, &nh_or_s), anchor_threshold) {
            anchored.push(v);
        } else {
            loose.push(v);
        }
    }

    Ok(CoverPartition {
        tight,
        high,
        near_high,
        anchored: anchored.into_iter().collect(),
        loose: loose.into_iter().collect(),
        tau,
        anchor_threshold,
    })
}

/// Checks the two derived degree inequalities on a partition: every `loose`
/// vertex has at least `tau` neighbors in `tight ∖ near_high`, and every
/// `anchored ∪ loose` vertex has at least `d − 5 − tau` neighbors in
/// `tight ∪ s`. Returns human-readable violations (empty = all hold).
pub fn partition_inequality_violations(
    g: &Graph,
    s: &VertexSet,
    d: usize,
    part: &CoverPartition,
) -> Vec<String> {
    let n = g.vertex_count();
    let mut avail = part.tight.to_mask(n);
    for v in part.near_high.iter() {
        avail[v] = false;
    }
    let mut tight_or_s = part.tight.to_mask(n);
    for v in s.iter() {
        tight_or_s[v] = true;
    }
    let count_into =
        |v: usize, mask: &[bool]| g.neighbors(v).iter().filter(|&&w| mask[w as usize]).count();

    let mut out = Vec::new();
    for v in part.loose.iter() {
        let deg = count_into(v, &avail);
        if !ge12(deg, part.tau) {
            out.push(format!(
                "loose vertex {v}: {deg} neighbors in tight-minus-near_high < tau={}",
                round12(part.tau)
            ));
        }
    }
    let bound = d as f64 - 5.0 - part.tau;
    for v in part.anchored.iter().chain(part.loose.iter()) {
        let deg = count_into(v, &tight_or_s);
        if !ge12(deg, bound) {
            out.push(format!(
                "vertex {v}: {deg} neighbors in tight-or-exempt < d-5-tau={}",
                round12(bound)
            ));
        }
    }
    out
}

/// Mutable packing under construction; tracks vertex usage so stars stay
/// disjoint.
pub(crate) struct PackingBuilder {
    stars: Vec<(usize, Vec<usize>)>,
    used: Vec<bool>,
    /// star index a vertex belongs to (center or leaf), usize::MAX if unused
    member_of: Vec<usize>,
    is_center: Vec<bool>,
}

impl PackingBuilder {
    pub fn new(n: usize) -> Self {
        PackingBuilder {
            stars: Vec::new(),
            used: vec![false; n],
            member_of: vec![usize::MAX; n],
            is_center: vec![false; n],
        }
    }

    pub fn from_packing(n: usize, p: &StarPacking) -> Self {
        let mut b = PackingBuilder::new(n);
        for star in p.stars() {
            b.push_star(star.center, star.leaves.iter().collect());
        }
        b
    }

    pub fn push_star(&mut self, center: usize, leaves: Vec<usize>) -> usize {
        let idx = self.stars.len();
        debug_assert!(!self.used[center]);
        self.used[center] = true;
        self.member_of[center] = idx;
        self.is_center[center] = true;
        for &v in &leaves {
            debug_assert!(!self.used[v]);
            self.used[v] = true;
            self.member_of[v] = idx;
        }
        self.stars.push((center, leaves));
        idx
    }

    pub fn attach(&mut self, star: usize, v: usize) {
        debug_assert!(!self.used[v]);
        self.used[v] = true;
        self.member_of[v] = star;
        self.stars[star].1.push(v);
    }

    pub fn is_used(&self, v: usize) -> bool {
        self.used[v]
    }

    pub fn star_size(&self, idx: usize) -> usize {
        self.stars[idx].1.len()
    }

    pub fn finish(self, declared_ell: usize) -> StarPacking {
        let stars = self
            .stars
            .into_iter()
            .filter(|(_, leaves)| !leaves.is_empty())
            .map(|(c, leaves)| {
                Star::new(c, leaves.into_iter().collect()).expect("builder keeps stars disjoint")
            })
            .collect();
        StarPacking::new(stars, declared_ell)
    }

    /// Attaches an uncovered vertex whose neighbors are all used: to an
    /// adjacent center when one exists (smallest star first), otherwise by
    /// splitting or re-rooting at an adjacent leaf.
    pub fn attach_covered_neighbor(&mut self, g: &Graph, t: usize) -> Result<()> {
        let mut best: Option<usize> = None;
        for &w in g.neighbors(t) {
            let w = w as usize;
            if self.used[w] && self.is_center[w] {
                let idx = self.member_of[w];
                best = Some(match best {
                    Some(b) if self.stars[b].1.len() <= self.stars[idx].1.len() => b,
                    _ => idx,
                });
            }
        }
        if let Some(idx) = best {
            self.attach(idx, t);
            return Ok(());
        }
        // no adjacent center: re-root at an adjacent leaf
        let leaf = g
            .neighbors(t)
            .iter()
            .map(|&w| w as usize)
            .find(|&w| self.used[w] && !self.is_center[w])
            .ok_or_else(|| {
                Error::input(format!("vertex {t} has no neighbor inside the packing"))
            })?;
        let idx = self.member_of[leaf];
        let (center, leaves) = &mut self.stars[idx];
        let center = *center;
        if leaves.len() >= 2 {
            // split: the leaf leaves its star and centers a new one over t
            leaves.retain(|&x| x != leaf);
            self.is_center[leaf] = true;
            let new_idx = self.stars.len();
            self.member_of[leaf] = new_idx;
            self.member_of[t] = new_idx;
            self.used[t] = true;
            self.stars.push((leaf, vec![t]));
        } else {
            // singleton star: re-root at the leaf, old center becomes a leaf
            self.stars[idx] = (leaf, vec![center, t]);
            self.is_center[leaf] = true;
            self.is_center[center] = false;
            self.used[t] = true;
            self.member_of[t] = idx;
        }
        Ok(())
    }
}

/// Deterministic greedy cover used as the best-effort fallback: for each
/// uncovered target (ascending), its unused neighbor of highest residual
/// degree becomes a center claiming all its unused neighbors; remaining
/// targets attach into the existing packing.
pub(crate) fn greedy_cover_targets(
    g: &Graph,
    targets: &VertexSet,
    builder: &mut PackingBuilder,
) -> Result<()> {
    for t in targets.iter() {
        if builder.is_used(t) {
            continue;
        }
        let residual = |u: usize| {
            g.neighbors(u)
                .iter()
                .filter(|&&x| !builder.is_used(x as usize))
                .count()
        };
        let mut best: Option<(usize, usize)> = None; // (residual, vertex)
        for &u in g.neighbors(t) {
            let u = u as usize;
            if !builder.is_used(u) {
                let r = residual(u);
                best = Some(match best {
                    Some((br, bu)) if br >= r => (br, bu),
                    _ => (r, u),
                });
            }
        }
        if let Some((_, u)) = best {
            let leaves: Vec<usize> = g
                .neighbors(u)
                .iter()
                .map(|&x| x as usize)
                .filter(|&x| !builder.is_used(x))
                .collect();
            builder.push_star(u, leaves);
        }
    }
    for t in targets.iter() {
        if !builder.is_used(t) {
            builder.attach_covered_neighbor(g, t)?;
        }
    }
    Ok(())
}

struct CoverInstance<'a> {
    /// graph the solver works on (already minimalized)
    gm: &'a Graph,
    /// graph used by the greedy fallback (pre-minimalization edges)
    fallback: &'a Graph,
    s: &'a VertexSet,
    d: usize,
    cfg: &'a CoverConfig,
}

impl CoverInstance<'_> {
    fn fail_or_fallback(
        &self,
        stage: &str,
        details: String,
        targets: &VertexSet,
        builder: &mut PackingBuilder,
        stat: &mut PhaseStat,
        fallbacks: &mut Vec<String>,
    ) -> Result<()> {
        if self.cfg.mode == Mode::Faithful {
            return Err(Error::SolverFailure {
                stage: stage.into(),
                details,
            });
        }
        greedy_cover_targets(self.fallback, targets, builder)?;
        stat.fallback = true;
        fallbacks.push(format!("{stage}: {details}"));
        Ok(())
    }

    fn phase1(
        &self,
        part: &CoverPartition,
        fallbacks: &mut Vec<String>,
    ) -> Result<(StarPacking, PhaseStat)> {
        let n = self.gm.vertex_count();
        let mut stat = PhaseStat::default();
        let targets = part.loose.union(&part.near_high);
        stat.covered = targets.len();
        if targets.is_empty() {
            stat.converged = true;
            return Ok((StarPacking::empty(), stat));
        }

        let universe = part.anchored.union(&part.loose);
        let universe_mask = universe.to_mask(n);
        let d = self.d;
        let slog = sqrt_log(d);
        let p = (self.cfg.c_select * slog / (d as f64).powf(0.75)).clamp(0.0, 1.0);

        let mut events = Vec::new();
        let mut next_id = 0;
        for v in targets.iter() {
            let scope: VertexSet = self
                .gm
                .neighbors(v)
                .iter()
                .filter(|&&w| universe_mask[w as usize])
                .map(|&w| w as usize)
                .collect();
            events.push(BadEvent::new(next_id, scope, EventKind::CountAtMost(0)));
            next_id += 1;
        }
        for v in 0..n {
            let cap =
                (d.max(self.gm.degree(v)) as f64) * self.cfg.c_cap * slog / (d as f64).powf(0.75);
            let bound = round12(cap).ceil().max(1.0) as usize;
            let scope: VertexSet = self
                .gm
                .neighbors(v)
                .iter()
                .filter(|&&w| universe_mask[w as usize])
                .map(|&w| w as usize)
                .collect();
            if scope.len() >= bound {
                events.push(BadEvent::new(
                    next_id,
                    scope,
                    EventKind::CountAtLeast(bound),
                ));
                next_id += 1;
            }
        }

        let problem = SubsetSelectionProblem::new(universe.clone(), p, events);
        stat.symmetric_condition = Some(problem.symmetric_condition());
        log::debug!(
            "phase1 selection: p={p:.4}, {} events, symmetric condition {:?}",
            problem.events.len(),
            stat.symmetric_condition
        );
        let sel = select_subset(
            &problem,
            derive_seed(self.cfg.seed, STREAM_PHASE1),
            self.cfg.max_resamples,
        );
        stat.resamples = sel.resample_count;
        stat.converged = sel.converged;

        let mut builder = PackingBuilder::new(n);
        if !sel.converged {
            self.fail_or_fallback(
                "phase1",
                format!(
                    "selection did not converge ({} events still violated after {} resamples)",
                    sel.violated_events, sel.resample_count
                ),
                &targets,
                &mut builder,
                &mut stat,
                fallbacks,
            )?;
            let packing = builder.finish(1);
            stat.stars = packing.star_count();
            stat.min_star = packing.min_star_size();
            return Ok((packing, stat));
        }

        let chosen = sel.chosen;
        let chosen_mask = chosen.to_mask(n);
        let mut leaf_pool = part.tight.to_mask(n);
        for v in self.s.iter() {
            leaf_pool[v] = true;
        }
        let right: VertexSet = (0..n)
            .filter(|&w| {
                leaf_pool[w]
                    && !chosen_mask[w]
                    && self
                        .gm
                        .neighbors(w)
                        .iter()
                        .any(|&x| chosen_mask[x as usize])
            })
            .collect();

        let d1 = chosen
            .iter()
            .map(|v| {
                self.gm
                    .neighbors(v)
                    .iter()
                    .filter(|&&w| right.contains(w as usize))
                    .count()
            })
            .min()
            .unwrap_or(0);
        let d2 = right
            .iter()
            .map(|w| {
                self.gm
                    .neighbors(w)
                    .iter()
                    .filter(|&&x| chosen_mask[x as usize])
                    .count()
            })
            .max()
            .unwrap_or(0);
        if (d1 as f64) < 0.99 * d as f64 {
            log::warn!(
                "phase1 realized center degree {d1} is below 0.99*d = {}",
                0.99 * d as f64
            );
        }

        let hall = if chosen.is_empty() && right.is_empty() {
            Ok(StarPacking::empty())
        } else if d1 >= d2 && d2 >= 1 {
            BipartiteView::new(self.gm, chosen.clone(), right.clone())
                .and_then(|view| hall_star_factor(&view, d1, d2))
        } else {
            Err(Error::input(format!(
                "degenerate center set: realized d1={d1}, d2={d2}"
            )))
        };

        match hall {
            Ok(packing) => {
                let mut builder = PackingBuilder::from_packing(n, &packing);
                let center_index: std::collections::BTreeMap<usize, usize> = builder
                    .stars
                    .iter()
                    .enumerate()
                    .map(|(i, &(c, _))| (c, i))
                    .collect();
                // targets in the high class that were not chosen are attached
                // through one of their chosen neighbors
                for v in targets.iter() {
                    if builder.is_used(v) {
                        continue;
                    }
                    let mut best: Option<usize> = None;
                    for &w in self.gm.neighbors(v) {
                        if let Some(&idx) = center_index.get(&(w as usize)) {
                            best = Some(match best {
                                Some(b) if builder.star_size(b) <= builder.star_size(idx) => b,
                                _ => idx,
                            });
                        }
                    }
                    match best {
                        Some(idx) => builder.attach(idx, v),
                        None => {
                            return Err(Error::SolverFailure {
                                stage: "phase1".into(),
                                details: format!("target {v} has no chosen neighbor"),
                            })
                        }
                    }
                }
                let packing = builder.finish(1);
                stat.stars = packing.star_count();
                stat.min_star = packing.min_star_size();
                Ok((packing, stat))
            }
            Err(e) => {
                self.fail_or_fallback(
                    "phase1",
                    format!("bipartite stage failed: {e}"),
                    &targets,
                    &mut builder,
                    &mut stat,
                    fallbacks,
                )?;
                let packing = builder.finish(1);
                stat.stars = packing.star_count();
                stat.min_star = packing.min_star_size();
                Ok((packing, stat))
            }
        }
    }

    fn phase2(
        &self,
        part: &CoverPartition,
        phase1: &StarPacking,
        fallbacks: &mut Vec<String>,
    ) -> Result<(StarPacking, PhaseStat)> {
        let n = self.gm.vertex_count();
        let d = self.d;
        let mut stat = PhaseStat::default();

        let mut in_phase1 = vec![false; n];
        for star in phase1.stars() {
            for v in star.vertices() {
                in_phase1[v] = true;
            }
        }
        let uncovered: VertexSet = part.anchored.iter().filter(|&v| !in_phase1[v]).collect();
        stat.covered = uncovered.len();
        if uncovered.is_empty() {
            stat.converged = true;
            stat.stars = phase1.star_count();
            stat.min_star = phase1.min_star_size();
            return Ok((phase1.clone(), stat));
        }

        // leaves eligible for pruning: phase-1 leaves inside near_high ∪ s.
        // Phase-1 centers are excluded from the pool outright: a fallback
        // phase 1 may center stars inside near_high ∪ s, and those vertices
        // are not available to the bipartite stage.
        let mut pool_mask = part.near_high.to_mask(n);
        for v in self.s.iter() {
            pool_mask[v] = true;
        }
        for star in phase1.stars() {
            pool_mask[star.center] = false;
        }
        let mut universe_vec = Vec::new();
        for star in phase1.stars() {
            for leaf in star.leaves.iter() {
                if pool_mask[leaf] {
                    universe_vec.push(leaf);
                }
            }
        }
        let universe: VertexSet = universe_vec.into_iter().collect();

        let slog = sqrt_log(d);
        let raw_param = d as f64 - self.cfg.c_slack * (d as f64).powf(0.75) * slog;
        let view_param = match self.cfg.mode {
            Mode::Faithful => {
                if raw_param < 1.0 {
                    return Err(Error::SolverFailure {
                        stage: "phase2".into(),
                        details: format!("degree parameter {raw_param:.3} is not positive"),
                    });
                }
                raw_param
            }
            Mode::BestEffort => raw_param.max((d as f64 / 2.0).ceil()),
        };
        let view_param_int = round12(view_param).ceil().max(1.0) as usize;

        let keep_floor = self.cfg.keep_floor_factor * (d as f64).sqrt();
        let keep_bound = round12(keep_floor).ceil() as usize;

        let p = (self.cfg.c_prune * slog / (d as f64).powf(0.25)).clamp(0.0, 1.0);
        let mut events = Vec::new();
        let mut next_id = 0;
        for star in phase1.stars() {
            let scope: VertexSet = star.leaves.iter().filter(|&l| pool_mask[l]).collect();
            // leaves outside the pool always survive pruning, so the star only
            // needs enough retained pool leaves to stay at the floor
            let nonpool = star.size() - scope.len();
            let need = keep_bound.saturating_sub(nonpool);
            if need == 0 {
                continue;
            }
            events.push(BadEvent::new(
                next_id,
                scope,
                EventKind::CountAtMost(need - 1),
            ));
            next_id += 1;
        }
        let universe_mask = universe.to_mask(n);
        for v in uncovered.iter() {
            let scope: VertexSet = self
                .gm
                .neighbors(v)
                .iter()
                .filter(|&&w| universe_mask[w as usize])
                .map(|&w| w as usize)
                .collect();
            let deg_pool = self
                .gm
                .neighbors(v)
                .iter()
                .filter(|&&w| pool_mask[w as usize])
                .count();
            // violated when pruning would push v below the view parameter
            let slack = deg_pool as f64 - view_param;
            let bound = round12(slack).floor() + 1.0;
            let bound = if bound < 0.0 { 0 } else { bound as usize };
            if scope.len() >= bound {
                events.push(BadEvent::new(
                    next_id,
                    scope,
                    EventKind::CountAtLeast(bound),
                ));
                next_id += 1;
            }
        }

        let problem = SubsetSelectionProblem::new(universe.clone(), p, events);
        stat.symmetric_condition = Some(problem.symmetric_condition());
        let sel = select_subset(
            &problem,
            derive_seed(self.cfg.seed, STREAM_PHASE2),
            self.cfg.max_resamples,
        );
        stat.resamples = sel.resample_count;
        stat.converged = sel.converged;

        if !sel.converged {
            let mut builder = PackingBuilder::from_packing(n, phase1);
            self.fail_or_fallback(
                "phase2",
                format!(
                    "pruning selection did not converge ({} events violated after {} resamples)",
                    sel.violated_events, sel.resample_count
                ),
                &uncovered,
                &mut builder,
                &mut stat,
                fallbacks,
            )?;
            let packing = builder.finish(1);
            stat.stars = packing.star_count();
            stat.min_star = packing.min_star_size();
            return Ok((packing, stat));
        }

        let retained = sel.chosen; // leaves kept by the pruned packing
        let retained_mask = retained.to_mask(n);

        // prune: keep retained pool-leaves plus all leaves outside the pool
        let keep: VertexSet = (0..n)
            .filter(|&v| !pool_mask[v] || retained_mask[v])
            .collect();
        let pruned = match phase1.prune_leaves(&keep, keep_bound) {
            Ok(p) => p,
            Err(e) => {
                let mut builder = PackingBuilder::from_packing(n, phase1);
                self.fail_or_fallback(
                    "phase2",
                    format!("pruning failed: {e}"),
                    &uncovered,
                    &mut builder,
                    &mut stat,
                    fallbacks,
                )?;
                let packing = builder.finish(1);
                stat.stars = packing.star_count();
                stat.min_star = packing.min_star_size();
                return Ok((packing, stat));
            }
        };

        let right: VertexSet = (0..n)
            .filter(|&w| pool_mask[w] && !retained_mask[w])
            .collect();
        let attempt = BipartiteView::new(self.gm, uncovered.clone(), right.clone())
            .and_then(|view| cover_left_side(&view, view_param_int));

        match attempt {
            Ok(sub) => {
                let mut builder = PackingBuilder::from_packing(n, &pruned);
                let mut claimed = vec![false; n];
                for star in sub.stars() {
                    for v in star.vertices() {
                        claimed[v] = true;
                    }
                }
                // pruned leaves the new packing did not claim return to their
                // original stars
                let center_index: std::collections::BTreeMap<usize, usize> = builder
                    .stars
                    .iter()
                    .enumerate()
                    .map(|(i, &(c, _))| (c, i))
                    .collect();
                for star in phase1.stars() {
                    let idx = center_index[&star.center];
                    for leaf in star.leaves.iter() {
                        if pool_mask[leaf] && !retained_mask[leaf] && !claimed[leaf] {
                            builder.attach(idx, leaf);
                        }
                    }
                }
                for star in sub.stars() {
                    builder.push_star(star.center, star.leaves.iter().collect());
                }
                let packing = builder.finish(1);
                stat.stars = packing.star_count();
                stat.min_star = packing.min_star_size();
                Ok((packing, stat))
            }
            Err(e) => {
                let mut builder = PackingBuilder::from_packing(n, phase1);
                self.fail_or_fallback(
                    "phase2",
                    format!("bipartite cover failed: {e}"),
                    &uncovered,
                    &mut builder,
                    &mut stat,
                    fallbacks,
                )?;
                let packing = builder.finish(1);
                stat.stars = packing.star_count();
                stat.min_star = packing.min_star_size();
                Ok((packing, stat))
            }
        }
    }
}

/// Phase I as a standalone operation on an already-minimalized graph.
pub fn phase1_cover(
    g: &Graph,
    part: &CoverPartition,
    s: &VertexSet,
    d: usize,
    cfg: &CoverConfig,
) -> Result<(StarPacking, PhaseStat)> {
    let inst = CoverInstance {
        gm: g,
        fallback: g,
        s,
        d,
        cfg,
    };
    let mut fallbacks = Vec::new();
    inst.phase1(part, &mut fallbacks)
}

/// Phase II as a standalone operation; `phase1` must be a valid Phase-I
/// output for the same partition.
pub fn phase2_cover(
    g: &Graph,
    part: &CoverPartition,
    s: &VertexSet,
    phase1: &StarPacking,
    d: usize,
    cfg: &CoverConfig,
) -> Result<(StarPacking, PhaseStat)> {
    let inst = CoverInstance {
        gm: g,
        fallback: g,
        s,
        d,
        cfg,
    };
    let mut fallbacks = Vec::new();
    inst.phase2(part, phase1, &mut fallbacks)
}

/// End-to-end covering solver: minimalize, partition, Phase I, Phase II.
/// The result is a star packing covering `V(g) ∖ s` (exempt vertices may be
/// covered incidentally); the report records the achieved minimum star size,
/// per-phase statistics and every best-effort deviation.
pub fn cover_excluding(
    g: &Graph,
    s: &VertexSet,
    d: usize,
    cfg: &CoverConfig,
) -> Result<(StarPacking, CoverReport)> {
    cfg.validate()?;
    let n = g.vertex_count();
    s.check_range(n)?;
    if d < 1 {
        return Err(Error::input("need d >= 1"));
    }
    let target = d as i64 - 5;
    #[allow(clippy::needless_range_loop)]
    for v in 0..n {
        if s.contains(v) {
            if g.degree(v) > d {
                return Err(Error::input(format!(
                    "exempt vertex {v} has degree {} > d={d}",
                    g.degree(v)
                )));
            }
        } else if (g.degree(v) as i64) < target {
            return Err(Error::input(format!(
                "vertex {v} has degree {} < d-5 = {target}",
                g.degree(v)
            )));
        }
    }

    let gm = edge_minimalize(g, target, s)?;
    let part = partition_vertices(&gm, s, d, cfg)?;
    if cfg.mode == Mode::Faithful {
        let violations = partition_inequality_violations(&gm, s, d, &part);
        if !violations.is_empty() {
            return Err(Error::SolverFailure {
                stage: "partition".into(),
                details: violations.join("; "),
            });
        }
    }

    let inst = CoverInstance {
        gm: &gm,
        fallback: g,
        s,
        d,
        cfg,
    };
    let mut fallbacks = Vec::new();
    let (p1, stat1) = inst.phase1(&part, &mut fallbacks)?;
    let (combined, stat2) = inst.phase2(&part, &p1, &mut fallbacks)?;

    let slog = sqrt_log(d);
    let target_ell = (d as f64).sqrt() - cfg.c_slack * (d as f64).powf(0.25) * slog;
    let report = CoverReport {
        achieved_ell: combined.min_star_size().unwrap_or(0),
        target_ell: round12(target_ell),
        class_sizes: part.class_sizes(),
        phase1: stat1,
        phase2: stat2,
        fallbacks,
    };
    Ok((combined, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::random_min_degree_graph;
    use crate::packing::verify;

    fn complete(n: usize) -> Graph {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v));
            }
        }
        Graph::from_edges(n, &edges).unwrap()
    }

    #[test]
    fn partition_k12_faithful() {
        // all degrees 11 = d-5 for d=16; tau ≈ 13.3 makes the anchor
        // threshold negative, so everything is anchored
        let g = complete(12);
        let cfg = CoverConfig {
            mode: Mode::Faithful,
            ..CoverConfig::default()
        };
        let part = partition_vertices(&g, &VertexSet::new(), 16, &cfg).unwrap();
        assert_eq!(part.high.len(), 0);
        assert_eq!(part.tight.len(), 12);
        assert_eq!(part.near_high.len(), 0);
        assert_eq!(part.anchored.len(), 12);
        assert_eq!(part.loose.len(), 0);
        assert!((part.tau - 13.3).abs() < 0.1);
        assert!(partition_inequality_violations(&g, &VertexSet::new(), 16, &part).is_empty());
    }

    #[test]
    fn partition_rejects_deficient_input() {
        let g = Graph::empty(5);
        let err = partition_vertices(&g, &VertexSet::new(), 6, &CoverConfig::default());
        assert!(matches!(err, Err(Error::Input(_))));
    }

    #[test]
    fn partition_separates_hubs_from_leaves() {
        // disjoint stars of size d-5 = 7 for d=12: hubs have degree 7 > 7?
        // hubs have degree exactly 7 too; give hubs one extra mutual spoke
        // through a shared leaf to push them above d-5. Simpler: hub degree
        // d-4 by adding one more leaf.
        let d = 12;
        let mut edges = Vec::new();
        // two stars with hub degree 8 (= d-4 > d-5), leaves degree 1 < d-5
        // would violate the precondition, so join leaves into a clique big
        // enough to reach degree d-5 = 7. Use a complete graph on the leaves.
        let hub_a = 0usize;
        let leaves_a: Vec<usize> = (2..10).collect();
        let hub_b = 1usize;
        let leaves_b: Vec<usize> = (10..18).collect();
        for &l in &leaves_a {
            edges.push((hub_a, l));
        }
        for &l in &leaves_b {
            edges.push((hub_b, l));
        }
        // leaves need degree >= 7: connect each group of 8 leaves completely
        // (degree 7 inside + 1 to hub = 8 > 7), hubs have degree 8
        for g in [&leaves_a, &leaves_b] {
            for i in 0..g.len() {
                for j in i + 1..g.len() {
                    edges.push((g[i], g[j]));
                }
            }
        }
        let g = Graph::from_edges(18, &edges).unwrap();
        // minimalize to get exact degrees
        let gm = edge_minimalize(&g, (d - 5) as i64, &VertexSet::new()).unwrap();
        let cfg = CoverConfig::default();
        let part = partition_vertices(&gm, &VertexSet::new(), d, &cfg).unwrap();
        for v in part.high.iter() {
            assert!(gm.degree(v) > d - 5);
        }
        for v in part.tight.iter() {
            assert_eq!(gm.degree(v), d - 5);
        }
        assert_eq!(part.high.len() + part.tight.len(), 18);
    }

    #[test]
    fn phase1_empty_when_no_targets() {
        let g = complete(12);
        let cfg = CoverConfig {
            mode: Mode::Faithful,
            ..CoverConfig::default()
        };
        let part = partition_vertices(&g, &VertexSet::new(), 16, &cfg).unwrap();
        let (p, stat) = phase1_cover(&g, &part, &VertexSet::new(), 16, &cfg).unwrap();
        assert_eq!(p.star_count(), 0);
        assert!(!stat.fallback);
    }

    #[test]
    fn k12_faithful_fails_best_effort_covers() {
        let g = complete(12);
        let faithful = CoverConfig {
            mode: Mode::Faithful,
            ..CoverConfig::default()
        };
        let err = cover_excluding(&g, &VertexSet::new(), 16, &faithful);
        assert!(matches!(err, Err(Error::SolverFailure { .. })), "{err:?}");

        let best = CoverConfig::default().with_seed(5);
        let (p, report) = cover_excluding(&g, &VertexSet::new(), 16, &best).unwrap();
        assert!(verify(&g, &p, 1, &VertexSet::full(12)).is_valid());
        assert!(!report.fallbacks.is_empty());
    }

    #[test]
    fn degenerate_small_d_still_covers() {
        // d = 5 means the minimalized graph is empty; the fallback must cover
        // everything using the original edges
        let g = complete(4);
        let (p, report) =
            cover_excluding(&g, &VertexSet::new(), 5, &CoverConfig::default()).unwrap();
        let rep = verify(&g, &p, 1, &VertexSet::full(4));
        assert!(rep.is_valid(), "{:?}", rep.violations);
        assert!(report.achieved_ell >= 1);
    }

    #[test]
    fn cover_excluding_boundary_degree_accepted() {
        // min degree exactly d-5 satisfies the precondition; one more is an
        // input error naming a deficient vertex
        let g = crate::construct::lower_bound_graph(4, 40, 0).unwrap();
        let result = cover_excluding(&g, &VertexSet::new(), 9, &CoverConfig::default());
        assert!(result.is_ok());
        let (p, _) = result.unwrap();
        let rep = verify(&g, &p, 1, &VertexSet::full(g.vertex_count()));
        assert!(rep.is_valid());

        let err = cover_excluding(&g, &VertexSet::new(), 10, &CoverConfig::default());
        assert!(matches!(err, Err(Error::Input(ref m)) if m.contains("vertex")));
    }

    #[test]
    fn random_instance_covers_all_but_exempt() {
        let d = 25;
        let g = random_min_degree_graph(300, d, 11).unwrap();
        let cfg = CoverConfig::default().with_seed(3);
        let (p, _) = cover_excluding(&g, &VertexSet::new(), d, &cfg).unwrap();
        let rep = verify(&g, &p, 1, &VertexSet::full(300));
        assert!(rep.is_valid(), "{:?}", rep.violations.len());
    }

    #[test]
    fn random_instance_with_exempt_set() {
        let d = 30;
        let g = random_min_degree_graph(400, d, 13).unwrap();
        // exempt vertices must have degree <= d; trim a sample of vertices
        let mut trimmed: Vec<(usize, usize)> = Vec::new();
        let mut adj: Vec<std::collections::BTreeSet<u32>> = (0..400)
            .map(|v| g.neighbors(v).iter().copied().collect())
            .collect();
        let s: VertexSet = (0..400usize).step_by(20).collect();
        for v in s.iter() {
            while adj[v].len() > d {
                let &w = adj[v].iter().next_back().unwrap();
                adj[v].remove(&w);
                adj[w as usize].remove(&(v as u32));
            }
        }
        for (u, nbrs) in adj.iter().enumerate() {
            for &w in nbrs {
                if u < w as usize {
                    trimmed.push((u, w as usize));
                }
            }
        }
        let g2 = Graph::from_edges(400, &trimmed).unwrap();
        // non-exempt degrees may have dropped; keep only instances satisfying
        // the precondition (deterministic here)
        let ok = (0..400).all(|v| s.contains(v) || g2.degree(v) as i64 >= d as i64 - 5);
        assert!(
            ok,
            "trimming broke the precondition; adjust test parameters"
        );
        let cfg = CoverConfig::default().with_seed(4);
        let (p, _) = cover_excluding(&g2, &s, d, &cfg).unwrap();
        let required = VertexSet::full(400).minus(&s);
        let rep = verify(&g2, &p, 1, &required);
        assert!(rep.is_valid(), "{} violations", rep.violations.len());
    }

    #[test]
    fn attach_covered_neighbor_reroots_and_splits() {
        // path 0-1-2-3: star {0;[1]} forces a re-root to cover 2, then the
        // two-leaf star splits to cover 3
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let mut b = PackingBuilder::new(4);
        b.push_star(0, vec![1]);
        // 2's only packed neighbor is the single leaf 1: re-root to {1;[0,2]}
        b.attach_covered_neighbor(&g, 2).unwrap();
        // 3's only packed neighbor is leaf 2 of a two-leaf star: split
        b.attach_covered_neighbor(&g, 3).unwrap();
        let p = b.finish(1);
        let rep = verify(&g, &p, 1, &VertexSet::full(4));
        assert!(rep.is_valid(), "{:?}", rep.violations);
        assert_eq!(p.star_count(), 2);
    }

    #[test]
    fn phase1_converges_on_regular_instance_with_tuned_constant() {
        // at desk scale the default selection constant saturates p, so tune
        // it down; the selection then converges without fallback and the
        // bipartite stage covers every target (seed pinned)
        let d = 64usize;
        let g = crate::construct::random_regular_graph(500, d, 3).unwrap();
        let gm = edge_minimalize(&g, d as i64 - 5, &VertexSet::new()).unwrap();
        let cfg = CoverConfig {
            c_select: 1.0,
            seed: 0,
            ..CoverConfig::default()
        };
        let part = partition_vertices(&gm, &VertexSet::new(), d, &cfg).unwrap();
        let targets = part.loose.union(&part.near_high);
        assert!(!targets.is_empty());
        let (p, stat) = phase1_cover(&gm, &part, &VertexSet::new(), d, &cfg).unwrap();
        assert!(stat.converged && !stat.fallback);
        assert!(stat.min_star.unwrap() >= 8);
        let rep = verify(&gm, &p, stat.min_star.unwrap(), &targets);
        assert!(rep.is_valid(), "{:?}", rep.violations);
        for star in p.stars() {
            assert!(part.anchored.contains(star.center) || part.loose.contains(star.center));
        }
    }

    #[test]
    fn phase2_is_identity_when_anchored_already_covered() {
        let g = complete(6);
        let phase1 = StarPacking::new(
            vec![Star::new(0, [1u32, 2].into_iter().collect()).unwrap()],
            1,
        );
        let part = CoverPartition {
            tight: VertexSet::new(),
            high: VertexSet::new(),
            near_high: VertexSet::new(),
            anchored: [0usize, 1, 2].into_iter().collect(),
            loose: VertexSet::new(),
            tau: 0.0,
            anchor_threshold: 0.0,
        };
        let (out, stat) = phase2_cover(
            &g,
            &part,
            &VertexSet::new(),
            &phase1,
            16,
            &CoverConfig::default(),
        )
        .unwrap();
        assert_eq!(out, phase1);
        assert!(stat.converged && !stat.fallback);
    }

    #[test]
    fn phase2_converged_prunes_and_reattaches() {
        // hand-built instance where the pruning selection converges and the
        // uncovered anchored vertices are covered through the bipartite
        // engine: 5 anchored vertices adjacent to a pool of 40, two phase-1
        // stars holding the pool as leaves
        let d = 16usize;
        let anchored: Vec<usize> = (0..5).collect();
        let pool: Vec<usize> = (5..45).collect();
        let centers = [45usize, 46];
        let mut edges = Vec::new();
        for &a in &anchored {
            for &m in &pool {
                edges.push((a, m));
            }
        }
        for &m in &pool[..20] {
            edges.push((centers[0], m));
        }
        for &m in &pool[20..] {
            edges.push((centers[1], m));
        }
        let g = Graph::from_edges(47, &edges).unwrap();

        let phase1 = StarPacking::new(
            vec![
                Star::new(centers[0], pool[..20].iter().copied().collect()).unwrap(),
                Star::new(centers[1], pool[20..].iter().copied().collect()).unwrap(),
            ],
            1,
        );
        let part = CoverPartition {
            tight: pool.iter().copied().collect(),
            high: VertexSet::new(),
            near_high: pool.iter().copied().collect(),
            anchored: anchored
                .iter()
                .copied()
                .chain(centers.iter().copied())
                .collect(),
            loose: VertexSet::new(),
            tau: 0.0,
            anchor_threshold: 0.0,
        };
        let cfg = CoverConfig {
            c_prune: 0.4,
            c_slack: 0.1,
            keep_floor_factor: 0.5,
            seed: 12,
            ..CoverConfig::default()
        };
        let (combined, stat) =
            phase2_cover(&g, &part, &VertexSet::new(), &phase1, d, &cfg).unwrap();
        assert!(stat.converged, "selection should converge");
        assert!(!stat.fallback, "bipartite path should succeed");
        let mut required: VertexSet = anchored.iter().copied().collect();
        required = required.union(&pool.iter().copied().collect());
        let rep = verify(&g, &combined, 1, &required);
        assert!(rep.is_valid(), "{:?}", rep.violations);
        // pruned stars kept at least keep_floor_factor*sqrt(d) = 2 leaves
        for star in combined.stars() {
            assert!(star.size() >= 2, "star at {} too small", star.center);
        }
    }

    #[test]
    fn phase2_never_reuses_a_pool_center() {
        // a fallback-style phase 1 can center a star inside the pool (vertex
        // 45 here); phase 2 must not hand that center to the bipartite stage
        // as an available right vertex
        let d = 16usize;
        let mut edges = Vec::new();
        for j in 0..40usize {
            let m = 5 + j;
            edges.push((j % 5, m));
            edges.push(((j + 2) % 5, m));
        }
        for a in 0..5 {
            edges.push((a, 45));
        }
        for m in 5..25 {
            edges.push((45, m));
        }
        for m in 25..45 {
            edges.push((46, m));
        }
        let g = Graph::from_edges(47, &edges).unwrap();

        let phase1 = StarPacking::new(
            vec![
                Star::new(45, (5u32..25).collect()).unwrap(),
                Star::new(46, (25u32..45).collect()).unwrap(),
            ],
            1,
        );
        let part = CoverPartition {
            tight: (5usize..46).collect(),
            high: VertexSet::new(),
            near_high: (5usize..46).collect(),
            anchored: (0usize..5).collect(),
            loose: VertexSet::new(),
            tau: 0.0,
            anchor_threshold: 0.0,
        };
        let cfg = CoverConfig {
            c_prune: 0.15,
            c_slack: 0.1,
            keep_floor_factor: 0.5,
            ..CoverConfig::default()
        };
        for seed in 0..8u64 {
            let cfg = CoverConfig {
                seed,
                ..cfg.clone()
            };
            let (combined, _) =
                phase2_cover(&g, &part, &VertexSet::new(), &phase1, d, &cfg).unwrap();
            let rep = verify(&g, &combined, 1, &VertexSet::full(47));
            assert!(rep.is_valid(), "seed {seed}: {:?}", rep.violations);
        }
    }

    #[test]
    fn deterministic_under_seed() {
        let d = 25;
        let g = random_min_degree_graph(200, d, 21).unwrap();
        let cfg = CoverConfig::default().with_seed(9);
        let (p1, _) = cover_excluding(&g, &VertexSet::new(), d, &cfg).unwrap();
        let (p2, _) = cover_excluding(&g, &VertexSet::new(), d, &cfg).unwrap();
        assert_eq!(p1, p2);
    }
}
