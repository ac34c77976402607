//! Shortest firing vectors modulo the all-ones kernel.
//!
//! On a connected graph `Δ·1 = 0`, so `v` and `v - k·1` reach the same
//! divisor. The L1 norm of `v - k·1` is convex and piecewise linear in `k`
//! and is minimised by any median of the entries of `v`; we use the lower
//! median so the result is deterministic.

use serde::Serialize;
use thiserror::Error;

use crate::graph::FiringVector;
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RenormError {
    #[error("the lower bound needs at least two vertices, got {0}")]
    InvalidN(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ShiftAnalysis {
    pub input: FiringVector,
    pub shift: i64,
    /// `input - shift·1`
    pub minimal: FiringVector,
    pub input_norm: u64,
    pub minimal_norm: u64,
    pub positives: usize,
    pub negatives: usize,
    pub zeros: usize,
}

pub fn minimal_representative(v: &FiringVector) -> ShiftAnalysis {
    let mut sorted = v.0.clone();
    sorted.sort_unstable();
    // ceil(n/2)-th smallest entry
    let shift = sorted
        .get(sorted.len().saturating_sub(1) / 2)
        .copied()
        .unwrap_or(0);
    let minimal = FiringVector(
        v.0.iter()
            .map(|x| {
                x.checked_sub(shift)
                    .expect("firing vector entries span more than the i64 range")
            })
            .collect(),
    );
    ShiftAnalysis {
        input: v.clone(),
        shift,
        input_norm: v.l1_norm(),
        minimal_norm: minimal.l1_norm(),
        positives: minimal.0.iter().filter(|&&x| x > 0).count(),
        negatives: minimal.0.iter().filter(|&&x| x < 0).count(),
        zeros: minimal.0.iter().filter(|&&x| x == 0).count(),
        minimal,
    }
}

/// True iff no shift by a multiple of the all-ones vector shortens `v`.
pub fn is_coset_minimal(v: &FiringVector) -> bool {
    v.l1_norm() == minimal_representative(v).minimal_norm
}

/// `M0 / (n - 1)`, exactly and rounded up.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LowerBound {
    pub rational: Rational,
    /// Move counts are integers, so the ceiling is also a valid bound.
    pub ceiling: u64,
}

/// `n` is the number of graph vertices, not a trace length.
pub fn lower_bound(m0: u64, n: usize) -> Result<LowerBound, RenormError> {
    if n < 2 {
        return Err(RenormError::InvalidN(n));
    }
    let rational = Rational::new(
        i64::try_from(m0).expect("move count fits in i64"),
        (n - 1) as i64,
    );
    Ok(LowerBound {
        rational,
        ceiling: rational.ceil() as u64,
    })
}
