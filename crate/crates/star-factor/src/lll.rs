//! Random-subset selection with bad-event resampling.
//!
//! The solver replaces existence-only probabilistic arguments with an
//! explicit sampler: draw every universe element independently, then while
//! any bad event holds, re-draw exactly that event's scope. All events used by
//! the solver are threshold counts over a scope, which keeps re-evaluation
//! incremental and cheap.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

use crate::graph::VertexSet;

/// How an event reads the chosen subset restricted to its scope.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EventKind {
    /// Violated iff `|chosen ∩ scope| <= bound`.
    CountAtMost(usize),
    /// Violated iff `|chosen ∩ scope| >= bound`.
    CountAtLeast(usize),
}

/// A bad event: a predicate of the chosen subset restricted to `scope`.
#[derive(Debug, Clone)]
pub struct BadEvent {
    pub id: usize,
    pub scope: VertexSet,
    pub kind: EventKind,
}

impl BadEvent {
    pub fn new(id: usize, scope: VertexSet, kind: EventKind) -> Self {
        BadEvent { id, scope, kind }
    }

    /// Evaluates the predicate against a membership mask. Reads only `scope`.
    pub fn holds(&self, chosen: &[bool]) -> bool {
        let count = self
            .scope
            .iter()
            .filter(|&v| v < chosen.len() && chosen[v])
            .count();
        match self.kind {
            EventKind::CountAtMost(b) => count <= b,
            EventKind::CountAtLeast(b) => count >= b,
        }
    }
}

/// A subset-selection instance: sample each universe element with the given
/// probability, subject to a family of bad events.
#[derive(Debug, Clone)]
pub struct SubsetSelectionProblem {
    pub universe: VertexSet,
    pub inclusion_probability: f64,
    pub events: Vec<BadEvent>,
}

impl SubsetSelectionProblem {
    pub fn new(universe: VertexSet, inclusion_probability: f64, events: Vec<BadEvent>) -> Self {
        // formulas occasionally evaluate outside [0,1] at degenerate degrees
        let p = inclusion_probability.clamp(0.0, 1.0);
        SubsetSelectionProblem {
            universe,
            inclusion_probability: p,
            events,
        }
    }

    /// Default resample budget: `10·|universe| + 10·|events|`.
    pub fn default_budget(&self) -> u64 {
        10 * self.universe.len() as u64 + 10 * self.events.len() as u64
    }

    /// Upper bound on the dependency degree: for each event, the number of
    /// other events reading at least one shared variable, maximized.
    pub fn dependency_degree_bound(&self) -> usize {
        let size = self
            .events
            .iter()
            .filter_map(|e| e.scope.as_slice().last().map(|&v| v as usize + 1))
            .max()
            .unwrap_or(0);
        let mut readers = vec![0usize; size];
        for e in &self.events {
            for v in e.scope.iter() {
                readers[v] += 1;
            }
        }
        self.events
            .iter()
            .map(|e| e.scope.iter().map(|v| readers[v] - 1).sum::<usize>())
            .max()
            .unwrap_or(0)
    }

    /// Probability that a single event is violated under independent
    /// sampling (binomial tail over its scope).
    pub fn event_probability(&self, event: &BadEvent) -> f64 {
        let m = event.scope.len();
        let p = self.inclusion_probability;
        let tail_at_most = |bound: usize| -> f64 {
            // P[X <= bound], X ~ Bin(m, p)
            if p >= 1.0 {
                return if bound >= m { 1.0 } else { 0.0 };
            }
            let q = 1.0 - p;
            let mut term = q.powi(m as i32);
            let mut acc = 0.0;
            for k in 0..=m {
                if k <= bound {
                    acc += term;
                }
                term *= (m - k) as f64 / (k + 1) as f64 * (p / q);
            }
            acc.clamp(0.0, 1.0)
        };
        match event.kind {
            EventKind::CountAtMost(b) => tail_at_most(b),
            EventKind::CountAtLeast(b) => {
                if b == 0 {
                    1.0
                } else {
                    1.0 - tail_at_most(b - 1)
                }
            }
        }
    }

    /// Diagnostic: does the symmetric condition hold for the worst event?
    /// Informative only; the resampling loop runs regardless.
    pub fn symmetric_condition(&self) -> bool {
        let worst = self
            .events
            .iter()
            .map(|e| self.event_probability(e))
            .fold(0.0f64, f64::max);
        check_symmetric_condition(worst, self.dependency_degree_bound())
    }
}

/// Outcome of a selection run.
#[derive(Debug, Clone)]
pub struct LllOutcome {
    /// The chosen subset: the converged one, or the best seen under budget
    /// exhaustion.
    pub chosen: VertexSet,
    pub resample_count: u64,
    pub converged: bool,
    /// Number of events still violated on `chosen` (0 when converged).
    pub violated_events: usize,
}

/// Symmetric Local Lemma condition `e·p·(dep_degree + 1) <= 1`. Logged as a
/// diagnostic by callers, never enforced: at small degrees the solver's
/// constants violate it while resampling still converges.
pub fn check_symmetric_condition(p: f64, dep_degree: usize) -> bool {
    std::f64::consts::E * p * (dep_degree as f64 + 1.0) <= 1.0
}

/// Runs the resampling loop. Identical `(problem, seed, max_resamples)`
/// yields bit-identical outcomes; the stream is a portable counter-based
/// generator, so results are stable across platforms.
///
/// While any event holds, the violated event of smallest id has exactly its
/// scope re-drawn. Non-convergence is data: the best-so-far subset is
/// returned with its violated-event count.
pub fn select_subset(
    problem: &SubsetSelectionProblem,
    seed: u64,
    max_resamples: Option<u64>,
) -> LllOutcome {
    let budget = max_resamples.unwrap_or_else(|| problem.default_budget());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = problem.inclusion_probability;

    let size = problem
        .universe
        .as_slice()
        .last()
        .map(|&v| v as usize + 1)
        .unwrap_or(0)
        .max(
            problem
                .events
                .iter()
                .filter_map(|e| e.scope.as_slice().last().map(|&v| v as usize + 1))
                .max()
                .unwrap_or(0),
        );
    let mut in_universe = vec![false; size];
    for v in problem.universe.iter() {
        in_universe[v] = true;
    }

    // resampling order follows event id; ties broken by position
    let mut order: Vec<usize> = (0..problem.events.len()).collect();
    order.sort_by_key(|&i| (problem.events[i].id, i));

    // scope restricted to the universe: only those elements are random
    let eff_scope: Vec<Vec<u32>> = order
        .iter()
        .map(|&i| {
            problem.events[i]
                .scope
                .as_slice()
                .iter()
                .copied()
                .filter(|&v| in_universe[v as usize])
                .collect()
        })
        .collect();
    let kinds: Vec<EventKind> = order.iter().map(|&i| problem.events[i].kind).collect();
    // fixed (non-universe) scope elements are never chosen and contribute 0

    let mut touching: Vec<Vec<u32>> = vec![Vec::new(); size];
    for (rank, scope) in eff_scope.iter().enumerate() {
        for &v in scope {
            touching[v as usize].push(rank as u32);
        }
    }

    let mut chosen = vec![false; size];
    for v in problem.universe.iter() {
        chosen[v] = rng.random::<f64>() < p;
    }

    let violated_now = |count: usize, kind: EventKind| match kind {
        EventKind::CountAtMost(b) => count <= b,
        EventKind::CountAtLeast(b) => count >= b,
    };

    let mut counts: Vec<usize> = eff_scope
        .iter()
        .map(|scope| scope.iter().filter(|&&v| chosen[v as usize]).count())
        .collect();
    let mut violated: BTreeSet<u32> = (0..kinds.len())
        .filter(|&r| violated_now(counts[r], kinds[r]))
        .map(|r| r as u32)
        .collect();

    let mut best_chosen = chosen.clone();
    let mut best_violated = violated.len();
    let mut resamples = 0u64;

    while let Some(&rank) = violated.first() {
        if resamples >= budget {
            break;
        }
        resamples += 1;
        // re-draw exactly this event's scope
        for &v in &eff_scope[rank as usize] {
            let new_val = rng.random::<f64>() < p;
            let v = v as usize;
            if new_val != chosen[v] {
                chosen[v] = new_val;
                for &r in &touching[v] {
                    let r = r as usize;
                    if new_val {
                        counts[r] += 1;
                    } else {
                        counts[r] -= 1;
                    }
                    if violated_now(counts[r], kinds[r]) {
                        violated.insert(r as u32);
                    } else {
                        violated.remove(&(r as u32));
                    }
                }
            }
        }
        if violated.len() < best_violated {
            best_violated = violated.len();
            best_chosen.copy_from_slice(&chosen);
        }
    }

    let converged = violated.is_empty();
    let (final_chosen, violated_events) = if converged {
        (chosen, 0)
    } else {
        (best_chosen, best_violated)
    };
    LllOutcome {
        chosen: VertexSet::from_mask(&final_chosen).intersect(&problem.universe),
        resample_count: resamples,
        converged,
        violated_events,
    }
}
