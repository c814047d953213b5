//! Inputs shared by the benchmarks.

use partsync::random_model::instance_seed;
use partsync::{largest_sink_subautomaton, sample_automaton, PartialAutomaton, State};

/// Largest sink subautomata of `count` random `n`-state automata.
pub fn sink_instances(n: usize, k: usize, count: u64, seed: u64) -> Vec<PartialAutomaton> {
    (0..count)
        .map(|i| largest_sink_subautomaton(&sample_automaton(n, k, instance_seed(seed, n, i))))
        .collect()
}

/// Cycle plus transposition: strongly connected and never synchronizing,
/// so the fast checker runs to its fallback.
pub fn permutation_automaton(n: usize) -> PartialAutomaton {
    PartialAutomaton::from_fn(n, 2, |q, x| {
        Some(match (x, q) {
            (0, q) => q % n as State + 1,
            (_, 1) => 2,
            (_, 2) => 1,
            (_, q) => q,
        })
    })
    .expect("valid permutation automaton")
}
