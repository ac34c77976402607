//! Dollar game and chip-firing game on simple connected graphs.
//!
//! The crate is organised bottom-up:
//!
//! - [`graph`]: graphs, divisors, firing vectors and the Laplacian action.
//! - [`engine`]: the borrowing binge and greedy stabilization, with cycle
//!   detection for games that never end.
//! - [`renorm`]: minimal L1 representatives modulo the all-ones kernel and
//!   the `M0 / (n - 1)` lower bound.
//! - [`solver`]: exact minimum move counts (breadth-first and coset search)
//!   and the report that checks the lower bound against them.
//! - [`families`]: instance generators, including the tight families.
//! - [`instance`]: the JSON and DOT formats shared by the CLI and service.

pub mod engine;
pub mod families;
pub mod graph;
pub mod instance;
pub mod rational;
pub mod renorm;
pub mod solver;

pub use engine::{
    borrowing_binge, greedy_stabilize, single_move, CycleWitness, EngineError, GameTrace, Outcome,
    RunOptions, Side, TieBreakPolicy,
};
pub use graph::{Divisor, FiringVector, Graph, GraphError, Move, MoveKind};
pub use instance::{Expected, Instance};
pub use rational::Rational;
pub use renorm::{lower_bound, minimal_representative, LowerBound, ShiftAnalysis};
pub use solver::{SolveReport, SolverError, Target};
