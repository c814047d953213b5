//! Staged synchronization check for strongly connected partial automata.
//!
//! The verdict always equals [`is_synchronizing_sc`](crate::exact::is_synchronizing_sc).
//! The first two stages can only answer "synchronizing", and only together
//! with a reset word; anything they cannot settle within their budgets goes
//! to the quadratic pair check. On random automata the cheap stages almost
//! always succeed, which keeps the expected work linear.
//!
//! 1. Greedy shrink: replace `S` by the smallest nonempty `S.x`.
//! 2. Pair phase: merge the remaining states with words `u x^t`, where `t`
//!    pushes every state of `S.u` onto an `x`-cycle or into the sink, so two
//!    states collide exactly when they land on the same cycle position. Each
//!    `x^t` is evaluated in constant time per state from the letter's
//!    functional-digraph decomposition.
//! 3. Fallback: the full pair-graph BFS.

use crate::automaton::{PartialAutomaton, State, Word};
use crate::error::SyncError;
use crate::exact::pair_check;
use crate::functional::{FunctionalGraph, PowerImage};
use crate::graph::is_strongly_connected;
use crate::report::{Stage, SyncReport, Verdict, Witness, WorkStats};

/// Budgets of the cheap stages, in units of `k·n` observed transitions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FastConfig {
    pub greedy_budget: f64,
    pub pair_budget: f64,
    /// Greedy shrink stops once `|S|` is at most this.
    pub target_size: usize,
}

impl Default for FastConfig {
    fn default() -> Self {
        Self {
            greedy_budget: 20.0,
            pair_budget: 20.0,
            target_size: 8,
        }
    }
}

pub fn fast_is_synchronizing_sc(a: &PartialAutomaton) -> Result<SyncReport, SyncError> {
    fast_is_synchronizing_sc_with(a, &FastConfig::default())
}

pub fn fast_is_synchronizing_sc_with(
    a: &PartialAutomaton,
    cfg: &FastConfig,
) -> Result<SyncReport, SyncError> {
    if !is_strongly_connected(a) {
        return Err(SyncError::NotStronglyConnected);
    }
    let n = a.n();
    let k = a.k();
    let kn = (k * n) as u64;
    // strong connectivity check reads every transition once
    let mut observed = kn;

    let done = |verdict, witness, observed, reached, source| SyncReport {
        verdict,
        witness,
        work: observed,
        stats: Some(WorkStats {
            transitions_observed: observed,
            stage_reached: reached,
            verdict_source: source,
        }),
    };

    if n == 1 {
        return Ok(done(
            Verdict::Synchronizing,
            Some(Witness::ResetWord(Word::empty())),
            observed,
            Stage::GreedyShrink,
            Stage::GreedyShrink,
        ));
    }

    let mut scratch = ImageScratch::new(n);
    let mut current: Vec<State> = a.states().collect();
    let mut word = Word::empty();

    let greedy_budget = (cfg.greedy_budget * kn as f64) as u64;
    let outcome = greedy_shrink(a, cfg.target_size, greedy_budget, &mut scratch, &mut current, &mut word);
    observed += outcome.spent;
    if current.len() == 1 {
        return Ok(done(
            Verdict::Synchronizing,
            Some(Witness::ResetWord(word)),
            observed,
            Stage::GreedyShrink,
            Stage::GreedyShrink,
        ));
    }

    if !outcome.dead_end {
        let pair_budget = (cfg.pair_budget * kn as f64) as u64;
        let (merged, spent) = pair_phase(a, pair_budget, &mut scratch, &mut current, &mut word);
        observed += spent;
        if merged {
            return Ok(done(
                Verdict::Synchronizing,
                Some(Witness::ResetWord(word)),
                observed,
                Stage::PairPhase,
                Stage::PairPhase,
            ));
        }
    }

    let report = pair_check(a);
    observed += report.work;
    Ok(done(
        report.verdict,
        report.witness,
        observed,
        Stage::Fallback,
        Stage::Fallback,
    ))
}

/// Epoch-stamped marks for deduplicating images without clearing.
struct ImageScratch {
    stamp: Vec<u32>,
    epoch: u32,
}

impl ImageScratch {
    fn new(n: usize) -> Self {
        Self {
            stamp: vec![0; n + 1],
            epoch: 0,
        }
    }

    fn next_epoch(&mut self) {
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.stamp.iter_mut().for_each(|s| *s = 0);
            self.epoch = 1;
        }
    }

    /// Inserts `q` into the current epoch; true if it was new.
    #[inline]
    fn insert(&mut self, q: State) -> bool {
        let s = &mut self.stamp[q as usize];
        if *s == self.epoch {
            false
        } else {
            *s = self.epoch;
            true
        }
    }
}

fn image_into(
    a: &PartialAutomaton,
    set: &[State],
    x: usize,
    scratch: &mut ImageScratch,
    out: &mut Vec<State>,
) {
    out.clear();
    scratch.next_epoch();
    for &q in set {
        if let Some(t) = a.step(q, x) {
            if scratch.insert(t) {
                out.push(t);
            }
        }
    }
}

struct GreedyOutcome {
    spent: u64,
    /// Every letter empties the current set.
    dead_end: bool,
}

fn greedy_shrink(
    a: &PartialAutomaton,
    target: usize,
    budget: u64,
    scratch: &mut ImageScratch,
    current: &mut Vec<State>,
    word: &mut Word,
) -> GreedyOutcome {
    let k = a.k();
    let mut spent = 0u64;
    let mut stalled = 0usize;
    let mut best: Vec<State> = Vec::new();
    let mut candidate: Vec<State> = Vec::new();
    while current.len() > target.max(1) {
        let cost = (k * current.len()) as u64;
        if spent + cost > budget {
            break;
        }
        spent += cost;
        let mut best_letter = None;
        for x in 0..k {
            image_into(a, current, x, scratch, &mut candidate);
            if candidate.is_empty() {
                continue;
            }
            if best_letter.is_none() || candidate.len() < best.len() {
                best_letter = Some(x);
                std::mem::swap(&mut best, &mut candidate);
            }
        }
        let Some(x) = best_letter else {
            return GreedyOutcome {
                spent,
                dead_end: true,
            };
        };
        if best.len() < current.len() {
            stalled = 0;
        } else {
            stalled += 1;
        }
        std::mem::swap(current, &mut best);
        word.push(x);
        if stalled >= k {
            break;
        }
    }
    GreedyOutcome {
        spent,
        dead_end: false,
    }
}

/// Shortlex successor of `u` over `k` letters.
fn next_shortlex(u: &mut Vec<u8>, k: usize) {
    for i in (0..u.len()).rev() {
        if (u[i] as usize) + 1 < k {
            u[i] += 1;
            u[i + 1..].iter_mut().for_each(|c| *c = 0);
            return;
        }
    }
    let len = u.len() + 1;
    u.clear();
    u.resize(len, 0);
}

/// Returns whether `current` was reduced to one state, and the number of
/// transitions observed.
fn pair_phase(
    a: &PartialAutomaton,
    budget: u64,
    scratch: &mut ImageScratch,
    current: &mut Vec<State>,
    word: &mut Word,
) -> (bool, u64) {
    let n = a.n();
    let k = a.k();
    let decomposition_cost = (k * n) as u64;
    if decomposition_cost > budget {
        return (false, 0);
    }
    let mut spent = decomposition_cost;
    let letters: Vec<FunctionalGraph> = (0..k).map(|x| FunctionalGraph::of_letter(a, x)).collect();

    let mut prefix_image: Vec<State> = Vec::new();
    let mut tmp: Vec<State> = Vec::new();
    let mut jumped: Vec<State> = Vec::new();
    let mut prefix: Vec<u8> = Vec::new();

    while current.len() > 1 {
        prefix.clear();
        'search: loop {
            let cost = (current.len() * (prefix.len() + 1)) as u64;
            if spent + cost > budget {
                return (false, spent);
            }
            spent += cost;

            prefix_image.clear();
            prefix_image.extend_from_slice(current);
            for &y in &prefix {
                image_into(a, &prefix_image, y as usize, scratch, &mut tmp);
                std::mem::swap(&mut prefix_image, &mut tmp);
                if prefix_image.is_empty() {
                    break;
                }
            }
            if !prefix_image.is_empty() {
                for (x, g) in letters.iter().enumerate() {
                    let t = prefix_image.iter().map(|&q| g.horizon(q)).max().unwrap_or(0).max(1);
                    jumped.clear();
                    scratch.next_epoch();
                    for &q in &prefix_image {
                        match g.power(q, t as u64) {
                            PowerImage::Defined(s) => {
                                if scratch.insert(s) {
                                    jumped.push(s);
                                }
                            }
                            PowerImage::Undefined => {}
                            PowerImage::BelowLevel => unreachable!("t is at least every horizon"),
                        }
                    }
                    if !jumped.is_empty() && jumped.len() < current.len() {
                        for &y in &prefix {
                            word.push(y as usize);
                        }
                        word.push_power(x, t as usize);
                        std::mem::swap(current, &mut jumped);
                        break 'search;
                    }
                }
            }
            next_shortlex(&mut prefix, k);
        }
    }
    (true, spent)
}
