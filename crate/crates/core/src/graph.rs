//! Graphs, divisors and the Laplacian action.
//!
//! Vertices are 0-based. A [`Graph`] is always simple and connected; both
//! properties are checked when it is built. Chip counts are `i64` and every
//! arithmetic step on them is overflow-checked.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::ops::Index;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("graph must have at least one vertex")]
    Empty,
    #[error("edge ({u}, {v}) has an endpoint outside 0..{n}")]
    IndexOutOfRange { u: usize, v: usize, n: usize },
    #[error("vertex {vertex} is outside 0..{n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("edge ({vertex}, {vertex}) is a self-loop")]
    SelfLoop { vertex: usize },
    #[error("edge ({u}, {v}) appears more than once")]
    DuplicateEdge { u: usize, v: usize },
    #[error("graph is disconnected: vertex {vertex} is unreachable from vertex 0")]
    Disconnected { vertex: usize },
    #[error("expected a vector of length {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("chip count overflowed 64-bit arithmetic")]
    Overflow,
}

/// A simple connected undirected graph with its degrees and Laplacian.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    degrees: Vec<i64>,
    neighbors: Vec<Vec<usize>>,
    // row-major n x n
    laplacian: Vec<i64>,
}

impl Graph {
    /// Validates the edge list and builds the graph.
    ///
    /// Edges may be given in any order and orientation; they are stored as
    /// sorted `(min, max)` pairs.
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::Empty);
        }
        let mut set = BTreeSet::new();
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(GraphError::IndexOutOfRange { u, v, n });
            }
            if u == v {
                return Err(GraphError::SelfLoop { vertex: u });
            }
            if !set.insert((u.min(v), u.max(v))) {
                return Err(GraphError::DuplicateEdge { u, v });
            }
        }

        let mut neighbors = vec![Vec::new(); n];
        for &(u, v) in &set {
            neighbors[u].push(v);
            neighbors[v].push(u);
        }
        for list in &mut neighbors {
            list.sort_unstable();
        }

        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(u) = queue.pop_front() {
            for &w in &neighbors[u] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        if let Some(vertex) = seen.iter().position(|s| !s) {
            return Err(GraphError::Disconnected { vertex });
        }

        let degrees: Vec<i64> = neighbors.iter().map(|l| l.len() as i64).collect();
        let mut laplacian = vec![0; n * n];
        for i in 0..n {
            laplacian[i * n + i] = degrees[i];
            for &j in &neighbors[i] {
                laplacian[i * n + j] = -1;
            }
        }

        Ok(Graph {
            n,
            edges: set.into_iter().collect(),
            degrees,
            neighbors,
            laplacian,
        })
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }

    /// Sorted `(min, max)` edge pairs.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }

    pub fn degree(&self, vertex: usize) -> i64 {
        self.degrees[vertex]
    }

    pub fn neighbors(&self, vertex: usize) -> &[usize] {
        &self.neighbors[vertex]
    }

    /// Laplacian entry at row `i`, column `j`.
    pub fn laplacian(&self, i: usize, j: usize) -> i64 {
        self.laplacian[i * self.n + j]
    }

    /// Laplacian rows as owned vectors, mostly for display and tests.
    pub fn laplacian_rows(&self) -> Vec<Vec<i64>> {
        self.laplacian.chunks(self.n).map(<[i64]>::to_vec).collect()
    }

    pub fn check_vertex(&self, vertex: usize) -> Result<(), GraphError> {
        if vertex < self.n {
            Ok(())
        } else {
            Err(GraphError::VertexOutOfRange { vertex, n: self.n })
        }
    }

    fn check_len(&self, len: usize) -> Result<(), GraphError> {
        if len == self.n {
            Ok(())
        } else {
            Err(GraphError::DimensionMismatch {
                expected: self.n,
                found: len,
            })
        }
    }

    /// The maximal stable divisor `K = (d_i - 1)`.
    pub fn canonical_divisor(&self) -> Divisor {
        Divisor(self.degrees.iter().map(|d| d - 1).collect())
    }

    /// Returns `C - Δv`.
    pub fn apply_firing(&self, c: &Divisor, v: &FiringVector) -> Result<Divisor, GraphError> {
        self.check_len(c.len())?;
        self.check_len(v.len())?;
        let mut out = c.0.clone();
        for (i, &fires) in v.0.iter().enumerate() {
            if fires != 0 {
                self.fire_in_place(&mut out, i, fires)?;
            }
        }
        Ok(Divisor(out))
    }

    /// Fires `vertex` `times` times in place (negative `times` borrows).
    pub(crate) fn fire_in_place(
        &self,
        chips: &mut [i64],
        vertex: usize,
        times: i64,
    ) -> Result<(), GraphError> {
        let outflow = self.degrees[vertex]
            .checked_mul(times)
            .ok_or(GraphError::Overflow)?;
        chips[vertex] = chips[vertex]
            .checked_sub(outflow)
            .ok_or(GraphError::Overflow)?;
        for &w in &self.neighbors[vertex] {
            chips[w] = chips[w].checked_add(times).ok_or(GraphError::Overflow)?;
        }
        Ok(())
    }

    /// True iff `c[i] <= d_i - 1` for every vertex. Negative entries are allowed.
    pub fn is_stable(&self, c: &Divisor) -> Result<bool, GraphError> {
        self.check_len(c.len())?;
        Ok(self.is_stable_unchecked(&c.0))
    }

    pub(crate) fn is_stable_unchecked(&self, chips: &[i64]) -> bool {
        chips.iter().zip(&self.degrees).all(|(c, d)| c < d)
    }

    /// `K - C`. Swaps the dollar game and the chip-firing game: `C >= 0`
    /// exactly when `K - C <= K`.
    pub fn dualize(&self, c: &Divisor) -> Result<Divisor, GraphError> {
        self.check_len(c.len())?;
        c.0.iter()
            .zip(&self.degrees)
            .map(|(x, d)| (d - 1).checked_sub(*x).ok_or(GraphError::Overflow))
            .collect::<Result<Vec<_>, _>>()
            .map(Divisor)
    }
}

/// Chips per vertex; negative entries are debt.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Divisor(pub Vec<i64>);

impl Divisor {
    pub fn new(values: Vec<i64>) -> Self {
        Divisor(values)
    }

    pub fn zeros(n: usize) -> Self {
        Divisor(vec![0; n])
    }

    pub fn values(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Total number of chips, `deg(C)`.
    pub fn degree(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn is_effective(&self) -> bool {
        self.0.iter().all(|&x| x >= 0)
    }
}

impl From<Vec<i64>> for Divisor {
    fn from(values: Vec<i64>) -> Self {
        Divisor(values)
    }
}

impl Index<usize> for Divisor {
    type Output = i64;

    fn index(&self, i: usize) -> &i64 {
        &self.0[i]
    }
}

impl fmt::Display for Divisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tuple(f, &self.0)
    }
}

/// Net number of lends minus borrows at each vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FiringVector(pub Vec<i64>);

impl FiringVector {
    pub fn new(counts: Vec<i64>) -> Self {
        FiringVector(counts)
    }

    pub fn zeros(n: usize) -> Self {
        FiringVector(vec![0; n])
    }

    pub fn ones(n: usize) -> Self {
        FiringVector(vec![1; n])
    }

    pub fn unit(n: usize, vertex: usize) -> Self {
        let mut v = vec![0; n];
        v[vertex] = 1;
        FiringVector(v)
    }

    pub fn counts(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of single-vertex moves needed to realise this vector.
    pub fn l1_norm(&self) -> u64 {
        self.0.iter().map(|x| x.unsigned_abs()).sum()
    }

    /// Entrywise `self >= other`.
    pub fn dominates(&self, other: &FiringVector) -> bool {
        self.len() == other.len() && self.0.iter().zip(&other.0).all(|(a, b)| a >= b)
    }

    /// One move per unit of firing, vertices in ascending order.
    pub fn to_moves(&self) -> Vec<Move> {
        let mut moves = Vec::with_capacity(self.l1_norm() as usize);
        for (vertex, &count) in self.0.iter().enumerate() {
            let kind = if count > 0 {
                MoveKind::Lend
            } else {
                MoveKind::Borrow
            };
            moves.extend((0..count.unsigned_abs()).map(|_| Move { vertex, kind }));
        }
        moves
    }

    /// Net firing vector of a move sequence on `n` vertices.
    pub fn from_moves(n: usize, moves: &[Move]) -> Self {
        let mut v = vec![0; n];
        for m in moves {
            v[m.vertex] += m.kind.sign();
        }
        FiringVector(v)
    }
}

impl From<Vec<i64>> for FiringVector {
    fn from(counts: Vec<i64>) -> Self {
        FiringVector(counts)
    }
}

impl Index<usize> for FiringVector {
    type Output = i64;

    fn index(&self, i: usize) -> &i64 {
        &self.0[i]
    }
}

impl fmt::Display for FiringVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tuple(f, &self.0)
    }
}

fn write_tuple(f: &mut fmt::Formatter<'_>, values: &[i64]) -> fmt::Result {
    write!(f, "(")?;
    for (i, x) in values.iter().enumerate() {
        if i > 0 {
            write!(f, ",")?;
        }
        write!(f, "{x}")?;
    }
    write!(f, ")")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MoveKind {
    Lend,
    Borrow,
}

impl MoveKind {
    /// Contribution to the firing vector: +1 for a lend, -1 for a borrow.
    pub fn sign(self) -> i64 {
        match self {
            MoveKind::Lend => 1,
            MoveKind::Borrow => -1,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            MoveKind::Lend => MoveKind::Borrow,
            MoveKind::Borrow => MoveKind::Lend,
        }
    }
}

impl fmt::Display for MoveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MoveKind::Lend => "lend",
            MoveKind::Borrow => "borrow",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Move {
    pub vertex: usize,
    pub kind: MoveKind,
}

impl Move {
    pub fn lend(vertex: usize) -> Self {
        Move {
            vertex,
            kind: MoveKind::Lend,
        }
    }

    pub fn borrow(vertex: usize) -> Self {
        Move {
            vertex,
            kind: MoveKind::Borrow,
        }
    }

    pub fn inverse(self) -> Self {
        Move {
            vertex: self.vertex,
            kind: self.kind.flipped(),
        }
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub(crate) fn intro_graph() -> Graph {
        Graph::new(
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
        .unwrap()
    }

    #[test]
    fn single_edge() {
        let g = Graph::new(2, &[(0, 1)]).unwrap();
        assert_eq!(g.degrees(), &[1, 1]);
        assert_eq!(g.laplacian_rows(), vec![vec![1, -1], vec![-1, 1]]);
        assert_eq!(g.canonical_divisor(), Divisor::zeros(2));
    }

    #[test]
    fn intro_degrees_and_canonical() {
        let g = intro_graph();
        assert_eq!(g.degrees(), &[4, 3, 3, 3, 2, 3]);
        assert_eq!(g.canonical_divisor().values(), &[3, 2, 2, 2, 1, 2]);
    }

    #[test]
    fn laplacian_shape() {
        let g = intro_graph();
        let n = g.num_vertices();
        for i in 0..n {
            let row: i64 = (0..n).map(|j| g.laplacian(i, j)).sum();
            let col: i64 = (0..n).map(|j| g.laplacian(j, i)).sum();
            assert_eq!((row, col), (0, 0));
            assert_eq!(g.laplacian(i, i), g.degree(i));
            for j in 0..n {
                assert_eq!(g.laplacian(i, j), g.laplacian(j, i));
                if i != j {
                    assert!(matches!(g.laplacian(i, j), 0 | -1));
                }
            }
        }
    }

    #[test]
    fn construction_errors() {
        assert_eq!(
            Graph::new(3, &[(0, 1)]),
            Err(GraphError::Disconnected { vertex: 2 })
        );
        assert_eq!(
            Graph::new(2, &[(1, 1)]),
            Err(GraphError::SelfLoop { vertex: 1 })
        );
        assert_eq!(
            Graph::new(2, &[(0, 1), (1, 0)]),
            Err(GraphError::DuplicateEdge { u: 1, v: 0 })
        );
        assert_eq!(
            Graph::new(2, &[(0, 2)]),
            Err(GraphError::IndexOutOfRange { u: 0, v: 2, n: 2 })
        );
        assert_eq!(Graph::new(0, &[]), Err(GraphError::Empty));
        assert!(Graph::new(1, &[]).is_ok());
    }

    #[test]
    fn lend_on_degree_two_vertex() {
        let g = intro_graph();
        let c = Divisor::new(vec![-1, 0, 2, 0, 2, 3]);
        let out = g.apply_firing(&c, &FiringVector::unit(6, 4)).unwrap();
        assert_eq!(out.values(), &[0, 0, 2, 0, 0, 4]);
        assert!(out.is_effective());
    }

    #[test]
    fn kernel_and_identity() {
        let g = intro_graph();
        let c = Divisor::new(vec![-1, 0, 2, 0, 2, 3]);
        assert_eq!(g.apply_firing(&c, &FiringVector::zeros(6)).unwrap(), c);
        assert_eq!(g.apply_firing(&c, &FiringVector::ones(6)).unwrap(), c);
        assert_eq!(
            g.apply_firing(&c, &FiringVector::new(vec![-7; 6])).unwrap(),
            c
        );
    }

    #[test]
    fn effectiveness() {
        assert!(Divisor::new(vec![0, 1, 2, 1, 1, 1]).is_effective());
        assert!(!Divisor::new(vec![-1, 0, 2, 0, 2, 3]).is_effective());
        assert!(Divisor::zeros(4).is_effective());
    }

    #[test]
    fn stability() {
        let g = intro_graph();
        assert!(g.is_stable(&Divisor::new(vec![3, 1, 0, 1, 0, 1])).unwrap());
        let k = g.canonical_divisor();
        assert!(g.is_stable(&k).unwrap());
        for i in 0..6 {
            let mut over = k.clone();
            over.0[i] += 1;
            assert!(!g.is_stable(&over).unwrap());
        }
        let star = Graph::new(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
        assert!(star.is_stable(&Divisor::new(vec![-2, 0, 0, 0, 0])).unwrap());
    }

    #[test]
    fn dualize_intro() {
        let g = intro_graph();
        let c = Divisor::new(vec![-1, 0, 2, 0, 2, 3]);
        let d = g.dualize(&c).unwrap();
        assert_eq!(d.values(), &[4, 2, 0, 2, -1, -1]);
        assert_eq!(g.dualize(&d).unwrap(), c);
        assert_eq!(g.dualize(&g.canonical_divisor()).unwrap(), Divisor::zeros(6));
    }

    #[test]
    fn dimension_mismatch() {
        let g = intro_graph();
        let short = Divisor::zeros(3);
        assert_eq!(
            g.is_stable(&short),
            Err(GraphError::DimensionMismatch {
                expected: 6,
                found: 3
            })
        );
        assert!(g.dualize(&short).is_err());
        assert!(g
            .apply_firing(&Divisor::zeros(6), &FiringVector::zeros(5))
            .is_err());
    }

    #[test]
    fn overflow_is_reported() {
        let g = Graph::new(2, &[(0, 1)]).unwrap();
        let c = Divisor::new(vec![i64::MAX, 0]);
        assert_eq!(
            g.apply_firing(&c, &FiringVector::new(vec![0, 1])),
            Err(GraphError::Overflow)
        );
    }

    #[test]
    fn moves_round_trip_through_firing_vector() {
        let v = FiringVector::new(vec![2, 0, -3, 1]);
        let moves = v.to_moves();
        assert_eq!(moves.len() as u64, v.l1_norm());
        assert_eq!(FiringVector::from_moves(4, &moves), v);
    }
}
