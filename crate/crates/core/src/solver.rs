//! Exact minimum move counts and the `M_min >= M0 / (n - 1)` check.
//!
//! Two independent routes compute `M_min` on the chip side (stable target):
//!
//! - [`bfs_min_moves`] searches divisor space under all `2n` single moves.
//!   Intermediate divisors are unrestricted.
//! - [`coset_min_moves`] searches firing vectors. Any stabilizing firing
//!   vector can be shifted to be nonnegative with a zero entry, and then it
//!   dominates the greedy vector `v0` (least action principle). So the search
//!   walks `v1 = v0 + w`, `w >= 0`, in layers of growing `|w|`, scoring each
//!   stabilizing candidate by the norm of its minimal representative.
//!
//! The dollar side (effective target) is always answered on the dual
//! instance `K - C`, with moves flipped on the way back.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::engine::{run_greedy, EngineError, Outcome, RunOptions, Side};
use crate::graph::{Divisor, FiringVector, Graph, GraphError, Move, MoveKind};
use crate::rational::Rational;
use crate::renorm::{lower_bound, minimal_representative, RenormError};

pub const DEFAULT_COSET_BUDGET: u64 = 1_000_000;
pub const DEFAULT_BFS_STATE_LIMIT: usize = 2_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    Stable,
    Effective,
}

impl From<Side> for Target {
    fn from(side: Side) -> Self {
        match side {
            Side::Dollar => Target::Effective,
            Side::Chip => Target::Stable,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Bfs,
    Coset,
}

/// Method selection for [`verify_theorem`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MethodChoice {
    /// Breadth-first search, falling back to coset search if the BFS state
    /// limit is hit.
    #[default]
    Auto,
    Bfs,
    Coset,
}

impl std::str::FromStr for MethodChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "auto" => Ok(MethodChoice::Auto),
            "bfs" => Ok(MethodChoice::Bfs),
            "coset" => Ok(MethodChoice::Coset),
            other => Err(format!("unknown method `{other}` (expected auto, bfs or coset)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolverError {
    #[error("no target divisor within {cap} moves")]
    CapExceeded { cap: u64 },
    #[error("breadth-first search visited more than {limit} states")]
    StateLimitExceeded { limit: usize },
    #[error("coset search exceeded its budget of {budget} candidates (best so far: {best} moves)")]
    BudgetExceeded { budget: u64, best: u64 },
    #[error("greedy play does not finish on this instance")]
    GreedyFailed(Box<Outcome>),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Renorm(#[from] RenormError),
}

/// A shortest move sequence to a target divisor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Shortest {
    pub m_min: u64,
    pub witness: Vec<Move>,
    pub target: Divisor,
}

pub fn bfs_min_moves(
    g: &Graph,
    c: &Divisor,
    target: Target,
    radius_cap: u64,
) -> Result<Shortest, SolverError> {
    bfs_min_moves_limited(g, c, target, radius_cap, DEFAULT_BFS_STATE_LIMIT)
}

/// Like [`bfs_min_moves`] but gives up after `max_states` distinct divisors.
///
/// Children are generated vertex by vertex, lend before borrow, on the chip
/// side; the first target found in that order is the witness.
pub fn bfs_min_moves_limited(
    g: &Graph,
    c: &Divisor,
    target: Target,
    radius_cap: u64,
    max_states: usize,
) -> Result<Shortest, SolverError> {
    match target {
        Target::Stable => {
            let (witness, found) = bfs_to_stable(g, c, radius_cap, max_states)?;
            Ok(Shortest {
                m_min: witness.len() as u64,
                witness,
                target: found,
            })
        }
        Target::Effective => {
            let dual = g.dualize(c)?;
            let (witness, found) = bfs_to_stable(g, &dual, radius_cap, max_states)?;
            Ok(Shortest {
                m_min: witness.len() as u64,
                witness: witness.into_iter().map(Move::inverse).collect(),
                target: g.dualize(&found)?,
            })
        }
    }
}

fn bfs_to_stable(
    g: &Graph,
    start: &Divisor,
    radius_cap: u64,
    max_states: usize,
) -> Result<(Vec<Move>, Divisor), SolverError> {
    let n = g.num_vertices();
    if start.len() != n {
        return Err(GraphError::DimensionMismatch {
            expected: n,
            found: start.len(),
        }
        .into());
    }
    if g.is_stable_unchecked(start.values()) {
        return Ok((Vec::new(), start.clone()));
    }

    // node i: (state, parent, move from parent)
    let mut nodes: Vec<(Vec<i64>, usize, Option<Move>)> = vec![(start.0.clone(), 0, None)];
    let mut index: HashMap<Vec<i64>, usize> = HashMap::new();
    index.insert(start.0.clone(), 0);
    let mut frontier = vec![0usize];

    for _depth in 1..=radius_cap {
        let mut next = Vec::new();
        for &parent in &frontier {
            for vertex in 0..n {
                for kind in [MoveKind::Lend, MoveKind::Borrow] {
                    let mut child = nodes[parent].0.clone();
                    g.fire_in_place(&mut child, vertex, kind.sign())?;
                    if index.contains_key(&child) {
                        continue;
                    }
                    let id = nodes.len();
                    let done = g.is_stable_unchecked(&child);
                    index.insert(child.clone(), id);
                    nodes.push((child, parent, Some(Move { vertex, kind })));
                    if done {
                        return Ok(reconstruct(&nodes, id));
                    }
                    next.push(id);
                }
            }
            if nodes.len() > max_states {
                return Err(SolverError::StateLimitExceeded { limit: max_states });
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    Err(SolverError::CapExceeded { cap: radius_cap })
}

fn reconstruct(nodes: &[(Vec<i64>, usize, Option<Move>)], mut id: usize) -> (Vec<Move>, Divisor) {
    let found = Divisor(nodes[id].0.clone());
    let mut moves = Vec::new();
    while let Some(m) = nodes[id].2 {
        moves.push(m);
        id = nodes[id].1;
    }
    moves.reverse();
    (moves, found)
}

/// Result of [`coset_min_moves`], always on the chip side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CosetSolution {
    pub m_min: u64,
    /// Greedy aggregate `v0`.
    pub greedy: FiringVector,
    /// Best normalized stabilizing vector `v1 = v0 + w`.
    pub normalized: FiringVector,
    /// Minimal representative of `normalized`; `|firing| = m_min`.
    pub firing: FiringVector,
    pub target: Divisor,
    pub candidates: u64,
}

pub fn coset_min_moves(g: &Graph, c: &Divisor, budget: u64) -> Result<CosetSolution, SolverError> {
    coset_min_moves_with(g, c, budget, |_| {})
}

/// [`coset_min_moves`], calling `on_stabilizing` with every normalized
/// stabilizing vector the search checks.
pub fn coset_min_moves_with(
    g: &Graph,
    c: &Divisor,
    budget: u64,
    mut on_stabilizing: impl FnMut(&FiringVector),
) -> Result<CosetSolution, SolverError> {
    let greedy = match run_greedy(g, c, Side::Chip, &quiet_run())? {
        Outcome::Settled(trace) => trace,
        other => return Err(SolverError::GreedyFailed(Box::new(other))),
    };
    let v0 = greedy.aggregate.clone();
    on_stabilizing(&v0);

    let mut search = CosetSearch {
        g,
        v0: &v0.0,
        base: greedy.final_state.0.clone(),
        zero_slot: v0.0.iter().map(|&x| x == 0).collect(),
        incumbent: minimal_representative(&v0).minimal_norm,
        best: v0.0.clone(),
        w: vec![0; v0.len()],
        candidates: 0,
        budget,
        on_stabilizing: &mut on_stabilizing,
    };

    let n = g.num_vertices() as u64;
    let v0_norm = v0.l1_norm();
    let mut layer = 1u64;
    while search.incumbent > 0 && n >= 2 {
        // Every candidate in this layer is nonnegative with a zero entry, so
        // its shortest equivalent has norm >= |v1| / (n - 1).
        if (v0_norm + layer).div_ceil(n - 1) >= search.incumbent {
            break;
        }
        if layer > search.capacity(0) {
            break;
        }
        search.layer(0, layer, false)?;
        layer += 1;
    }

    let candidates = search.candidates;
    let normalized = FiringVector(search.best);
    let shift = minimal_representative(&normalized);
    let target = g.apply_firing(c, &normalized)?;
    Ok(CosetSolution {
        m_min: shift.minimal_norm,
        greedy: v0,
        normalized,
        firing: shift.minimal,
        target,
        candidates,
    })
}

struct CosetSearch<'a, F> {
    g: &'a Graph,
    v0: &'a [i64],
    // greedy final divisor; candidates fire w on top of it
    base: Vec<i64>,
    zero_slot: Vec<bool>,
    incumbent: u64,
    best: Vec<i64>,
    w: Vec<i64>,
    candidates: u64,
    budget: u64,
    on_stabilizing: &'a mut F,
}

impl<F: FnMut(&FiringVector)> CosetSearch<'_, F> {
    // A normalized v1 has minimal norm >= max(v1), so improving candidates
    // keep every entry below the incumbent.
    fn cap(&self, i: usize) -> u64 {
        let limit = self.incumbent as i64 - 1 - self.v0[i];
        limit.max(0) as u64
    }

    fn capacity(&self, from: usize) -> u64 {
        (from..self.v0.len()).map(|i| self.cap(i)).sum()
    }

    fn layer(&mut self, i: usize, remaining: u64, has_zero: bool) -> Result<(), SolverError> {
        let n = self.v0.len();
        if i == n {
            if remaining == 0 && has_zero {
                self.visit()?;
            }
            return Ok(());
        }
        if self.capacity(i) < remaining {
            return Ok(());
        }
        let mut wi = 0;
        while wi <= remaining.min(self.cap(i)) {
            self.w[i] = wi as i64;
            let zero_here = self.zero_slot[i] && wi == 0;
            self.layer(i + 1, remaining - wi, has_zero || zero_here)?;
            wi += 1;
        }
        self.w[i] = 0;
        Ok(())
    }

    fn visit(&mut self) -> Result<(), SolverError> {
        self.candidates += 1;
        if self.candidates > self.budget {
            return Err(SolverError::BudgetExceeded {
                budget: self.budget,
                best: self.incumbent,
            });
        }
        let mut chips = self.base.clone();
        for (vertex, &times) in self.w.iter().enumerate() {
            if times != 0 {
                self.g.fire_in_place(&mut chips, vertex, times)?;
            }
        }
        if !self.g.is_stable_unchecked(&chips) {
            return Ok(());
        }
        let v1 = FiringVector(self.v0.iter().zip(&self.w).map(|(a, b)| a + b).collect());
        (self.on_stabilizing)(&v1);
        let norm = minimal_representative(&v1).minimal_norm;
        if norm < self.incumbent {
            self.incumbent = norm;
            self.best = v1.0;
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct SolveOptions {
    pub method: MethodChoice,
    /// BFS radius; defaults to the greedy move count.
    pub radius_cap: Option<u64>,
    pub bfs_state_limit: usize,
    pub coset_budget: u64,
    pub run: RunOptions,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            method: MethodChoice::Auto,
            radius_cap: None,
            bfs_state_limit: DEFAULT_BFS_STATE_LIMIT,
            coset_budget: DEFAULT_COSET_BUDGET,
            run: quiet_run(),
        }
    }
}

fn quiet_run() -> RunOptions {
    RunOptions {
        record_states: false,
        ..Default::default()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SolveReport {
    pub side: Side,
    pub m0: u64,
    pub m_min: u64,
    pub bound_rational: Rational,
    pub bound_ceiling: u64,
    pub holds: bool,
    pub tight: bool,
    pub witness_moves: Vec<Move>,
    pub witness_target: Divisor,
    pub method: Method,
}

/// Greedy move count, exact minimum and the lower bound for one instance.
///
/// `side` picks the game: the dollar side compares the borrowing binge with
/// the closest effective divisor, the chip side compares greedy
/// stabilization with the closest stable divisor.
pub fn verify_theorem(
    g: &Graph,
    c: &Divisor,
    side: Side,
    options: &SolveOptions,
) -> Result<SolveReport, SolverError> {
    let greedy = match run_greedy(g, c, side, &options.run)? {
        Outcome::Settled(trace) => trace,
        other => return Err(SolverError::GreedyFailed(Box::new(other))),
    };
    let m0 = greedy.move_count();
    let n = g.num_vertices();
    let bound = lower_bound(m0, n)?;
    let cap = options.radius_cap.unwrap_or(m0);

    let bfs = |limit| bfs_min_moves_limited(g, c, side.into(), cap, limit);
    let (shortest, method) = match options.method {
        MethodChoice::Bfs => (bfs(usize::MAX)?, Method::Bfs),
        MethodChoice::Coset => (coset_for_side(g, c, side, options.coset_budget)?, Method::Coset),
        MethodChoice::Auto => match bfs(options.bfs_state_limit) {
            Ok(s) => (s, Method::Bfs),
            Err(SolverError::StateLimitExceeded { .. }) => (
                coset_for_side(g, c, side, options.coset_budget)?,
                Method::Coset,
            ),
            Err(e) => return Err(e),
        },
    };

    let scaled = shortest.m_min * (n as u64 - 1);
    Ok(SolveReport {
        side,
        m0,
        m_min: shortest.m_min,
        bound_rational: bound.rational,
        bound_ceiling: bound.ceiling,
        holds: scaled >= m0,
        tight: scaled == m0,
        witness_moves: shortest.witness,
        witness_target: shortest.target,
        method,
    })
}

/// Coset search for either side, run on the chip side.
pub fn coset_for_side(
    g: &Graph,
    c: &Divisor,
    side: Side,
    budget: u64,
) -> Result<Shortest, SolverError> {
    match side {
        Side::Chip => {
            let sol = coset_min_moves(g, c, budget)?;
            Ok(Shortest {
                m_min: sol.m_min,
                witness: sol.firing.to_moves(),
                target: sol.target,
            })
        }
        Side::Dollar => {
            let dual = g.dualize(c)?;
            let sol = coset_min_moves(g, &dual, budget)?;
            let firing = FiringVector(sol.firing.0.iter().map(|x| -x).collect());
            Ok(Shortest {
                m_min: sol.m_min,
                witness: firing.to_moves(),
                target: g.apply_firing(c, &firing)?,
            })
        }
    }
}

/// Whether a nonnegative stabilizing vector `v1` dominates the greedy
/// aggregate entrywise.
pub fn check_least_action(g: &Graph, c: &Divisor, v1: &FiringVector) -> Result<bool, SolverError> {
    if v1.0.iter().any(|&x| x < 0) {
        return Err(SolverError::PreconditionViolated(format!(
            "firing vector {v1} has a negative entry"
        )));
    }
    let end = g.apply_firing(c, v1)?;
    if !g.is_stable(&end)? {
        return Err(SolverError::PreconditionViolated(format!(
            "firing vector {v1} ends at unstable divisor {end}"
        )));
    }
    let greedy = match run_greedy(g, c, Side::Chip, &quiet_run())? {
        Outcome::Settled(trace) => trace,
        other => return Err(SolverError::GreedyFailed(Box::new(other))),
    };
    Ok(v1.dominates(&greedy.aggregate))
}
