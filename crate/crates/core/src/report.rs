//! Verdicts, witnesses and work accounting shared by all checkers.

use std::fmt;

use crate::automaton::{State, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Synchronizing,
    NotSynchronizing,
    /// The subset search ran out of room before deciding.
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Synchronizing => "Synchronizing",
            Verdict::NotSynchronizing => "NotSynchronizing",
            Verdict::Inconclusive => "Inconclusive",
        }
    }

    pub fn is_synchronizing(self) -> bool {
        self == Verdict::Synchronizing
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// A word `w` with `|Q.w| = 1`.
    ResetWord(Word),
    /// A pair `{p, q}`, `p < q`, that no word merges.
    Deadlock(State, State),
    /// Why the search stopped without a verdict.
    CapExceeded { visited: usize },
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::ResetWord(w) => write!(f, "{w}"),
            Witness::Deadlock(p, q) => write!(f, "{p},{q}"),
            Witness::CapExceeded { visited } => write!(f, "cap exceeded after {visited} subsets"),
        }
    }
}

/// Which stage of the fast checker was reached or answered.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Stage {
    GreedyShrink,
    PairPhase,
    Fallback,
}

impl Stage {
    pub fn as_str(self) -> &'static str {
        match self {
            Stage::GreedyShrink => "GreedyShrink",
            Stage::PairPhase => "PairPhase",
            Stage::Fallback => "Fallback",
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Work accounting of the fast checker.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WorkStats {
    /// Transition-table reads plus pair-graph arcs examined by the fallback.
    pub transitions_observed: u64,
    /// Furthest stage entered.
    pub stage_reached: Stage,
    /// Stage that produced the verdict.
    pub verdict_source: Stage,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyncReport {
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    /// Pair-graph arcs examined (pair checkers) or subset transitions
    /// computed (subset search). The fast checker reports
    /// `stats.transitions_observed` here as well.
    pub work: u64,
    pub stats: Option<WorkStats>,
}

impl SyncReport {
    pub fn reset_word(&self) -> Option<&Word> {
        match &self.witness {
            Some(Witness::ResetWord(w)) => Some(w),
            _ => None,
        }
    }

    pub fn deadlock(&self) -> Option<(State, State)> {
        match self.witness {
            Some(Witness::Deadlock(p, q)) => Some((p, q)),
            _ => None,
        }
    }

    /// Column names matching [`SyncReport::csv_row`].
    pub const CSV_HEADER: &'static str = "verdict,witness,work,wall_ms,stage_reached,verdict_source";

    /// One CSV row: verdict, witness, work, wall time, and the fast checker's
    /// stage columns (empty for the other checkers). Witness pairs are quoted
    /// since they contain a comma.
    pub fn csv_row(&self, wall_ms: f64) -> String {
        let witness = match &self.witness {
            None | Some(Witness::CapExceeded { .. }) => String::new(),
            Some(Witness::ResetWord(w)) => w.to_string(),
            Some(Witness::Deadlock(p, q)) => format!("\"{p},{q}\""),
        };
        let (reached, source) = match &self.stats {
            Some(s) => (s.stage_reached.as_str(), s.verdict_source.as_str()),
            None => ("", ""),
        };
        format!(
            "{},{},{},{:.3},{},{}",
            self.verdict, witness, self.work, wall_ms, reached, source
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_row_formats_each_witness_kind() {
        let r = SyncReport {
            verdict: Verdict::Synchronizing,
            witness: Some(Witness::ResetWord("bbac".parse().unwrap())),
            work: 17,
            stats: None,
        };
        assert_eq!(r.csv_row(1.5), "Synchronizing,bbac,17,1.500,,");
        let r = SyncReport {
            verdict: Verdict::NotSynchronizing,
            witness: Some(Witness::Deadlock(1, 2)),
            work: 3,
            stats: Some(WorkStats {
                transitions_observed: 3,
                stage_reached: Stage::Fallback,
                verdict_source: Stage::Fallback,
            }),
        };
        assert_eq!(r.csv_row(0.0), "NotSynchronizing,\"1,2\",3,0.000,Fallback,Fallback");
        assert_eq!(SyncReport::CSV_HEADER.split(',').count(), 6);
    }
}
