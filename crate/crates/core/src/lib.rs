//! Synchronization of partial automata: exact and linear-expected-time
//! checkers, the random model and its exact distributions, and the SAT
//! reduction showing the general problem is NP-complete.

pub mod automaton;
pub mod error;
pub mod exact;
pub mod experiment;
pub mod fast;
pub mod functional;
pub mod graph;
pub mod pair;
pub mod random_model;
pub mod report;
pub mod sat;

pub use automaton::{letter_char, PartialAutomaton, State, Word, UNDEFINED};
pub use error::{AutomatonError, SatError, SyncError};
pub use exact::{
    exact_sync, is_synchronizing_complete, is_synchronizing_sc, mergeable_pairs,
    shortest_reset_word, verify_reset_word, MergeTable, ShortestReset, DEFAULT_SUBSET_CAP,
};
pub use fast::{fast_is_synchronizing_sc, fast_is_synchronizing_sc_with, FastConfig};
pub use graph::{is_reachable, is_strongly_connected, largest_sink_subautomaton, sink_subautomata};
pub use random_model::{sample_automaton, zx_pmf_exact, undefined_count_pmf};
pub use report::{Stage, SyncReport, Verdict, Witness, WorkStats};
pub use sat::{build_2letter, build_4letter, parse_dimacs, CnfInstance, ReductionArtifact};
