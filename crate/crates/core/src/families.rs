//! Instance generators.
//!
//! `star_example` and `hybrid_example` are the families on which greedy play
//! is as far from optimal as the lower bound allows (star) or by a factor
//! `n / 2` against a different stable divisor (hybrid). Both are chip-side
//! instances. The hub or center is always vertex 0.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::engine::Side;
use crate::graph::{Divisor, Graph, GraphError};
use crate::instance::{Expected, Instance};
use crate::rational::Rational;

const RANDOM_ATTEMPTS: usize = 1000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("no connected graph found in {attempts} attempts")]
    Unsatisfiable { attempts: usize },
    #[error("chip count overflowed 64-bit arithmetic")]
    Overflow,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// The six-vertex dollar game that greedy wins in 4 borrows while a single
/// lend at vertex 4 also wins.
pub fn intro_example() -> Instance {
    let graph = Graph::new(
        6,
        &[
            (0, 1),
            (1, 2),
            (0, 2),
            (0, 3),
            (0, 4),
            (1, 5),
            (2, 3),
            (3, 5),
            (4, 5),
        ],
    )
    .expect("intro graph is simple and connected");
    Instance {
        name: Some("intro".into()),
        graph,
        divisor: Divisor::new(vec![-1, 0, 2, 0, 2, 3]),
        side: Side::Dollar,
        expected: Some(Expected {
            m0: 4,
            m_min: 1,
            ratio: Rational::integer(4),
        }),
    }
}

/// Star on `n` vertices: center `-n·k`, every leaf `k`.
///
/// Greedy fires each leaf `k` times; borrowing `k` times at the center reaches
/// the same divisor, so `M0 = (n - 1)·k` and `M_min = k`.
pub fn star_example(n: usize, k: u64) -> Result<Instance, FamilyError> {
    if n < 3 || k < 1 {
        return Err(FamilyError::InvalidParams(format!(
            "star needs n >= 3 and k >= 1, got n={n}, k={k}"
        )));
    }
    let k_chips = i64::try_from(k).map_err(|_| FamilyError::Overflow)?;
    let center = (n as i64)
        .checked_mul(k_chips)
        .ok_or(FamilyError::Overflow)?;
    let edges: Vec<_> = (1..n).map(|leaf| (0, leaf)).collect();
    let mut divisor = vec![k_chips; n];
    divisor[0] = -center;
    let m0 = (n as u64 - 1)
        .checked_mul(k)
        .ok_or(FamilyError::Overflow)?;
    Ok(Instance {
        name: Some(format!("star(n={n},k={k})")),
        graph: Graph::new(n, &edges)?,
        divisor: Divisor::new(divisor),
        side: Side::Chip,
        expected: Some(Expected {
            m0,
            m_min: k,
            ratio: Rational::integer(n as i64 - 1),
        }),
    })
}

/// Vertex count of `hybrid_example(n, _)`: the parameter `n` counts the
/// clique plus the pendants, the hub comes on top.
pub fn hybrid_vertex_count(n: usize) -> usize {
    n + 1
}

/// Hub (vertex 0) joined to a clique on `n/2` vertices and to `n/2`
/// pendants. Hub `-n·k`, pendants `k`, clique `0`.
///
/// Greedy fires each pendant `k` times (`M0 = (n/2)·k`) and its firing vector
/// is already the shortest in its class. Borrowing `k` times at the hub
/// reaches a different stable divisor in `k` moves, a factor `n/2` better.
pub fn hybrid_example(n: usize, k: u64) -> Result<Instance, FamilyError> {
    if n < 4 || !n.is_multiple_of(2) || k < 1 {
        return Err(FamilyError::InvalidParams(format!(
            "hybrid needs even n >= 4 and k >= 1, got n={n}, k={k}"
        )));
    }
    let half = n / 2;
    let total = hybrid_vertex_count(n);
    let clique = 1..=half;
    let pendants = half + 1..total;

    let mut edges = Vec::new();
    for u in clique.clone() {
        edges.push((0, u));
        for v in u + 1..=half {
            edges.push((u, v));
        }
    }
    for p in pendants.clone() {
        edges.push((0, p));
    }

    let k_chips = i64::try_from(k).map_err(|_| FamilyError::Overflow)?;
    let mut divisor = vec![0; total];
    divisor[0] = -(n as i64)
        .checked_mul(k_chips)
        .ok_or(FamilyError::Overflow)?;
    for p in pendants {
        divisor[p] = k_chips;
    }
    Ok(Instance {
        name: Some(format!("hybrid(n={n},k={k}) on {total} vertices")),
        graph: Graph::new(total, &edges)?,
        divisor: Divisor::new(divisor),
        side: Side::Chip,
        expected: Some(Expected {
            m0: (half as u64).checked_mul(k).ok_or(FamilyError::Overflow)?,
            m_min: k,
            ratio: Rational::integer(half as i64),
        }),
    })
}

/// Random connected graph (each edge kept with `edge_probability`, retried
/// until connected) with uniform chips in `chips`. Deterministic in `seed`.
pub fn random_instance(
    n: usize,
    edge_probability: Rational,
    chips: (i64, i64),
    seed: u64,
) -> Result<Instance, FamilyError> {
    if n < 2 {
        return Err(FamilyError::InvalidParams(format!(
            "random instance needs n >= 2, got {n}"
        )));
    }
    if edge_probability <= Rational::integer(0) || edge_probability > Rational::integer(1) {
        return Err(FamilyError::InvalidParams(format!(
            "edge probability must lie in (0, 1], got {edge_probability}"
        )));
    }
    let (lo, hi) = chips;
    if lo > hi {
        return Err(FamilyError::InvalidParams(format!(
            "empty chip range [{lo}, {hi}]"
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (num, den) = (edge_probability.num(), edge_probability.den());
    for _ in 0..RANDOM_ATTEMPTS {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_range(0..den) < num {
                    edges.push((u, v));
                }
            }
        }
        match Graph::new(n, &edges) {
            Ok(graph) => {
                let divisor = (0..n).map(|_| rng.gen_range(lo..=hi)).collect();
                return Ok(Instance {
                    name: Some(format!("random(n={n},p={edge_probability},seed={seed})")),
                    graph,
                    divisor: Divisor::new(divisor),
                    side: Side::Dollar,
                    expected: None,
                });
            }
            Err(GraphError::Disconnected { .. }) => continue,
            Err(e) => return Err(e.into()),
        }
    }
    Err(FamilyError::Unsatisfiable {
        attempts: RANDOM_ATTEMPTS,
    })
}
