//! Greedy play: the borrowing binge for the dollar game and greedy
//! stabilization for the chip-firing game.
//!
//! Both runs are the same loop seen through the duality `C -> K - C`: the
//! binge borrows at a vertex in debt, stabilization lends at a vertex holding
//! at least its degree. The number of moves, the per-vertex counts and the
//! final divisor do not depend on which eligible vertex is picked, so the
//! tie-break policy only changes the order of the trace.
//!
//! A game that never ends revisits a configuration, because chip counts stay
//! inside a finite box along a greedy run. The engine keeps every visited
//! configuration and reports the first revisit as a [`CycleWitness`].

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Divisor, FiringVector, Graph, GraphError, Move, MoveKind};

pub const DEFAULT_MAX_STEPS: u64 = 1_000_000;

/// Which game a divisor is played in.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// Win by reaching an effective divisor; greedy play borrows.
    #[default]
    Dollar,
    /// Finish at a stable divisor; greedy play lends.
    Chip,
}

impl Side {
    pub fn greedy_kind(self) -> MoveKind {
        match self {
            Side::Dollar => MoveKind::Borrow,
            Side::Chip => MoveKind::Lend,
        }
    }

    pub fn dual(self) -> Side {
        match self {
            Side::Dollar => Side::Chip,
            Side::Chip => Side::Dollar,
        }
    }

    /// Whether `chips` already satisfies this side's goal.
    pub fn is_done(self, g: &Graph, chips: &[i64]) -> bool {
        match self {
            Side::Dollar => chips.iter().all(|&x| x >= 0),
            Side::Chip => g.is_stable_unchecked(chips),
        }
    }

    fn eligible(self, g: &Graph, chips: &[i64], vertex: usize) -> bool {
        match self {
            Side::Dollar => chips[vertex] < 0,
            Side::Chip => chips[vertex] >= g.degree(vertex),
        }
    }

    // Larger is picked first under `TieBreakPolicy::Extreme`.
    fn urgency(self, chips: &[i64], vertex: usize) -> i64 {
        match self {
            Side::Dollar => chips[vertex].saturating_neg(),
            Side::Chip => chips[vertex],
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Dollar => "dollar",
            Side::Chip => "chip",
        })
    }
}

impl FromStr for Side {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "dollar" => Ok(Side::Dollar),
            "chip" => Ok(Side::Chip),
            other => Err(format!("unknown side `{other}` (expected dollar or chip)")),
        }
    }
}

/// How greedy play chooses among several eligible vertices.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub enum TieBreakPolicy {
    #[default]
    LowestIndex,
    HighestIndex,
    /// Most negative vertex on the dollar side, most chips on the chip side.
    /// Ties go to the lowest index.
    Extreme,
    SeededRandom(u64),
}

impl fmt::Display for TieBreakPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TieBreakPolicy::LowestIndex => f.write_str("lowest"),
            TieBreakPolicy::HighestIndex => f.write_str("highest"),
            TieBreakPolicy::Extreme => f.write_str("extreme"),
            TieBreakPolicy::SeededRandom(seed) => write!(f, "random:{seed}"),
        }
    }
}

impl FromStr for TieBreakPolicy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "lowest" => Ok(TieBreakPolicy::LowestIndex),
            "highest" => Ok(TieBreakPolicy::HighestIndex),
            "extreme" => Ok(TieBreakPolicy::Extreme),
            _ => match s.strip_prefix("random:") {
                Some(seed) => seed
                    .parse()
                    .map(TieBreakPolicy::SeededRandom)
                    .map_err(|e| format!("bad seed in `{s}`: {e}")),
                None => Err(format!(
                    "unknown policy `{s}` (expected lowest, highest, extreme or random:<seed>)"
                )),
            },
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunOptions {
    pub policy: TieBreakPolicy,
    pub max_steps: u64,
    /// Keep every intermediate divisor in the trace.
    pub record_states: bool,
    /// Report a total-degree obstruction without simulating. Off by default so
    /// unwinnable games come back with a cycle witness.
    pub negative_degree_shortcut: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            policy: TieBreakPolicy::default(),
            max_steps: DEFAULT_MAX_STEPS,
            record_states: true,
            negative_degree_shortcut: false,
        }
    }
}

impl RunOptions {
    pub fn with_policy(policy: TieBreakPolicy) -> Self {
        RunOptions {
            policy,
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameTrace {
    pub side: Side,
    pub moves: Vec<Move>,
    /// `states[0]` is the input and `states[last]` the final divisor, when
    /// recorded.
    pub states: Option<Vec<Divisor>>,
    pub aggregate: FiringVector,
    pub final_state: Divisor,
}

impl GameTrace {
    pub fn move_count(&self) -> u64 {
        self.moves.len() as u64
    }

    /// Per-vertex number of greedy moves (borrows or lends).
    pub fn move_counts(&self) -> Vec<u64> {
        self.aggregate.0.iter().map(|x| x.unsigned_abs()).collect()
    }
}

/// Proof that greedy play never ends: a configuration seen twice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleWitness {
    pub state: Divisor,
    /// Move index after which `state` was first reached (0 = the input).
    pub first_seen: usize,
    pub revisited_at: usize,
    /// The run up to and including the revisit.
    pub trace: GameTrace,
}

impl CycleWitness {
    pub fn period(&self) -> usize {
        self.revisited_at - self.first_seen
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    /// Effective (dollar side) or stable (chip side) divisor reached.
    Settled(GameTrace),
    /// The run revisits a configuration and never ends.
    Cycle(CycleWitness),
    /// Only with `negative_degree_shortcut`: the total chip count alone rules
    /// out a finish.
    NegativeDegree { total: i64 },
}

impl Outcome {
    pub fn settled(&self) -> Option<&GameTrace> {
        match self {
            Outcome::Settled(t) => Some(t),
            _ => None,
        }
    }

    pub fn into_settled(self) -> Option<GameTrace> {
        match self {
            Outcome::Settled(t) => Some(t),
            _ => None,
        }
    }

    pub fn is_settled(&self) -> bool {
        matches!(self, Outcome::Settled(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("step limit of {steps} reached before the run ended or cycled")]
    StepLimitExceeded { steps: u64, trace: Box<GameTrace> },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Borrows at vertices in debt until the divisor is effective.
pub fn borrowing_binge(
    g: &Graph,
    c: &Divisor,
    options: &RunOptions,
) -> Result<Outcome, EngineError> {
    run_greedy(g, c, Side::Dollar, options)
}

/// Lends at vertices with at least their degree in chips until the divisor is
/// stable.
pub fn greedy_stabilize(
    g: &Graph,
    c: &Divisor,
    options: &RunOptions,
) -> Result<Outcome, EngineError> {
    run_greedy(g, c, Side::Chip, options)
}

pub fn run_greedy(
    g: &Graph,
    c: &Divisor,
    side: Side,
    options: &RunOptions,
) -> Result<Outcome, EngineError> {
    let n = g.num_vertices();
    if c.len() != n {
        return Err(GraphError::DimensionMismatch {
            expected: n,
            found: c.len(),
        }
        .into());
    }

    if options.negative_degree_shortcut {
        let total = c.degree();
        let hopeless = match side {
            Side::Dollar => total < 0,
            // dual of deg(C) < 0
            Side::Chip => total > g.canonical_divisor().degree(),
        };
        if hopeless {
            return Ok(Outcome::NegativeDegree { total });
        }
    }

    let mut chips = c.0.clone();
    let mut aggregate = vec![0i64; n];
    let mut moves = Vec::new();
    let mut states = options.record_states.then(|| vec![c.clone()]);
    let mut seen: HashMap<Vec<i64>, usize> = HashMap::new();
    seen.insert(chips.clone(), 0);

    let kind = side.greedy_kind();
    let mut picker = Picker::new(options.policy);

    let trace = |moves: Vec<Move>, states, aggregate: Vec<i64>, chips: &[i64]| GameTrace {
        side,
        moves,
        states,
        aggregate: FiringVector(aggregate),
        final_state: Divisor(chips.to_vec()),
    };

    loop {
        let Some(vertex) = picker.pick(g, &chips, side) else {
            return Ok(Outcome::Settled(trace(moves, states, aggregate, &chips)));
        };
        if moves.len() as u64 >= options.max_steps {
            return Err(EngineError::StepLimitExceeded {
                steps: options.max_steps,
                trace: Box::new(trace(moves, states, aggregate, &chips)),
            });
        }

        g.fire_in_place(&mut chips, vertex, kind.sign())?;
        aggregate[vertex] += kind.sign();
        moves.push(Move { vertex, kind });
        if let Some(states) = states.as_mut() {
            states.push(Divisor(chips.clone()));
        }

        let step = moves.len();
        if let Some(&first_seen) = seen.get(&chips) {
            let state = Divisor(chips.clone());
            return Ok(Outcome::Cycle(CycleWitness {
                state,
                first_seen,
                revisited_at: step,
                trace: trace(moves, states, aggregate, &chips),
            }));
        }
        seen.insert(chips.clone(), step);
    }
}

/// True iff `next` was already produced by the run. Because greedy play is
/// confluent, a repeat proves the run never terminates.
pub fn detect_cycle(states_seen: &HashSet<Divisor>, next: &Divisor) -> bool {
    states_seen.contains(next)
}

/// One lend or borrow, with no legality check.
pub fn single_move(g: &Graph, c: &Divisor, m: Move) -> Result<Divisor, GraphError> {
    g.check_vertex(m.vertex)?;
    if c.len() != g.num_vertices() {
        return Err(GraphError::DimensionMismatch {
            expected: g.num_vertices(),
            found: c.len(),
        });
    }
    let mut chips = c.0.clone();
    g.fire_in_place(&mut chips, m.vertex, m.kind.sign())?;
    Ok(Divisor(chips))
}

struct Picker {
    policy: TieBreakPolicy,
    rng: Option<ChaCha8Rng>,
    scratch: Vec<usize>,
}

impl Picker {
    fn new(policy: TieBreakPolicy) -> Self {
        let rng = match policy {
            TieBreakPolicy::SeededRandom(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
            _ => None,
        };
        Picker {
            policy,
            rng,
            scratch: Vec::new(),
        }
    }

    fn pick(&mut self, g: &Graph, chips: &[i64], side: Side) -> Option<usize> {
        let n = chips.len();
        let mut eligible = (0..n).filter(|&i| side.eligible(g, chips, i));
        match self.policy {
            TieBreakPolicy::LowestIndex => eligible.next(),
            TieBreakPolicy::HighestIndex => eligible.next_back(),
            TieBreakPolicy::Extreme => {
                let mut best: Option<usize> = None;
                for i in eligible {
                    if best.is_none_or(|b| side.urgency(chips, i) > side.urgency(chips, b)) {
                        best = Some(i);
                    }
                }
                best
            }
            TieBreakPolicy::SeededRandom(_) => {
                self.scratch.clear();
                self.scratch.extend(eligible);
                if self.scratch.is_empty() {
                    return None;
                }
                let rng = self.rng.as_mut().expect("seeded policy has an rng");
                Some(self.scratch[rng.gen_range(0..self.scratch.len())])
            }
        }
    }
}
