#![allow(dead_code)]

use chipfire::engine::{borrowing_binge, Outcome, RunOptions};
use chipfire::families::random_instance;
use chipfire::{Instance, Rational};

pub const CORPUS_SIZE: usize = 200;

/// Seeded random dollar games with n in 2..=6 and chips in [-3, 3],
/// unfiltered.
pub fn random_stream() -> impl Iterator<Item = (u64, Instance)> {
    (0u64..).map(|seed| {
        let n = 2 + (seed % 5) as usize;
        let inst = random_instance(n, Rational::new(1, 2), (-3, 3), seed).expect("sampling");
        (seed, inst)
    })
}

/// The first `CORPUS_SIZE` winnable instances of [`random_stream`].
pub fn winnable_corpus() -> Vec<Instance> {
    random_stream()
        .filter(|(_, inst)| {
            matches!(
                borrowing_binge(&inst.graph, &inst.divisor, &RunOptions::default()),
                Ok(Outcome::Settled(_))
            )
        })
        .map(|(_, inst)| inst)
        .take(CORPUS_SIZE)
        .collect()
}

/// The first `count` instances of [`random_stream`], winnable or not.
pub fn mixed_corpus(count: usize) -> Vec<Instance> {
    random_stream().map(|(_, inst)| inst).take(count).collect()
}
