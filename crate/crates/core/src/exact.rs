//! Exact synchronization checks.
//!
//! * [`mergeable_pairs`] runs a backward BFS on the pair graph from every
//!   `{q,q}` and `{0,q}` node. In a strongly connected (or complete)
//!   automaton, all pairs mergeable is equivalent to synchronizing.
//! * [`exact_sync`] is a forward BFS over reachable subsets of `Q`. It is
//!   exponential in the worst case and capped, but valid for every input.

use std::collections::HashMap;

use crate::automaton::{PartialAutomaton, State, Word, UNDEFINED};
use crate::error::SyncError;
use crate::graph::is_strongly_connected;
use crate::pair::{proper_pair_index, PairGraph, PairState};
use crate::report::{SyncReport, Verdict, Witness};

/// Default number of visited subsets before [`exact_sync`] gives up.
pub const DEFAULT_SUBSET_CAP: usize = 1_000_000;

const UNMERGEABLE: u32 = u32::MAX;

/// Shortest merging word length for every proper pair `{p, q}`, `p < q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MergeTable {
    n: usize,
    depth: Vec<u32>,
    mergeable: usize,
}

impl MergeTable {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Length of a shortest word merging `{p, q}`; `Some(0)` when `p == q`.
    pub fn depth(&self, p: State, q: State) -> Option<u32> {
        if p == q {
            return Some(0);
        }
        let (lo, hi) = if p < q { (p, q) } else { (q, p) };
        match self.depth[proper_pair_index(lo, hi)] {
            UNMERGEABLE => None,
            d => Some(d),
        }
    }

    pub fn is_mergeable(&self, p: State, q: State) -> bool {
        self.depth(p, q).is_some()
    }

    pub fn mergeable_count(&self) -> usize {
        self.mergeable
    }

    pub fn pair_count(&self) -> usize {
        self.depth.len()
    }

    pub fn all_mergeable(&self) -> bool {
        self.mergeable == self.depth.len()
    }

    /// Largest finite merge depth, 0 if nothing needs merging.
    pub fn max_depth(&self) -> u32 {
        self.depth
            .iter()
            .copied()
            .filter(|&d| d != UNMERGEABLE)
            .max()
            .unwrap_or(0)
    }

    /// Lexicographically least pair that cannot be merged.
    pub fn first_deadlock(&self) -> Option<(State, State)> {
        first_unmarked(self.n, |i| self.depth[i] != UNMERGEABLE)
    }

    /// A shortest word merging `{p, q}`, following arcs that decrease depth.
    /// Letters are tried in increasing index order.
    pub fn merging_word(&self, a: &PartialAutomaton, p: State, q: State) -> Option<Word> {
        let graph = PairGraph::new(a);
        let mut node = PairState::of(p, q);
        let mut d = self.depth(p, q)?;
        let mut w = Word::empty();
        while let PairState::Pair(lo, hi) = node {
            debug_assert_eq!(self.depth(lo, hi), Some(d));
            let (x, next) = (0..a.k())
                .map(|x| (x, graph.successor(node, x)))
                .find(|&(_, s)| match s {
                    PairState::Diag(_) | PairState::HalfDead(_) => d == 1,
                    PairState::Pair(u, v) => self.depth(u, v) == Some(d - 1),
                    PairState::Dead => false,
                })
                .expect("a mergeable pair has a successor one step closer");
            w.push(x);
            node = next;
            d -= 1;
        }
        Some(w)
    }
}

fn first_unmarked(n: usize, marked: impl Fn(usize) -> bool) -> Option<(State, State)> {
    for p in 1..n as State {
        for q in p + 1..=n as State {
            if !marked(proper_pair_index(p, q)) {
                return Some((p, q));
            }
        }
    }
    None
}

/// Per-letter preimage lists over `0..=n`, with the sink `0` listed first in
/// the preimage of `0`.
struct Preimages {
    n: usize,
    // offsets[x * (n + 2) + r] .. offsets[x * (n + 2) + r + 1]
    offsets: Vec<u32>,
    items: Vec<State>,
}

impl Preimages {
    fn new(a: &PartialAutomaton) -> Self {
        let n = a.n();
        let k = a.k();
        let stride = n + 2;
        let mut offsets = vec![0u32; k * stride];
        let mut items = vec![0 as State; k * (n + 1)];
        for x in 0..k {
            let row = a.letter_row(x);
            let base = x * stride;
            let mut counts = vec![0u32; n + 1];
            counts[0] = 1;
            for &t in row {
                counts[t as usize] += 1;
            }
            let mut acc = (x * (n + 1)) as u32;
            for r in 0..=n {
                offsets[base + r] = acc;
                acc += counts[r];
            }
            offsets[base + n + 1] = acc;
            let mut fill: Vec<u32> = offsets[base..base + n + 1].to_vec();
            items[fill[0] as usize] = UNDEFINED;
            fill[0] += 1;
            for (i, &t) in row.iter().enumerate() {
                items[fill[t as usize] as usize] = i as State + 1;
                fill[t as usize] += 1;
            }
        }
        Self { n, offsets, items }
    }

    #[inline]
    fn of(&self, x: usize, r: State) -> &[State] {
        let i = x * (self.n + 2) + r as usize;
        &self.items[self.offsets[i] as usize..self.offsets[i + 1] as usize]
    }
}

/// Storage for the BFS marks; either a depth table or a plain bitmap.
trait PairMarks {
    /// Whether marks need breadth-first order.
    const LAYERED: bool;
    /// Marks pair index `i` at `depth`; returns true if it was unmarked.
    fn mark(&mut self, i: usize, depth: u32) -> bool;
}

impl PairMarks for Vec<u32> {
    const LAYERED: bool = true;
    #[inline]
    fn mark(&mut self, i: usize, depth: u32) -> bool {
        if self[i] == UNMERGEABLE {
            self[i] = depth;
            true
        } else {
            false
        }
    }
}

struct BitMarks(Vec<u64>);

impl BitMarks {
    fn get(&self, i: usize) -> bool {
        self.0[i >> 6] >> (i & 63) & 1 == 1
    }
}

impl PairMarks for BitMarks {
    const LAYERED: bool = false;
    #[inline]
    fn mark(&mut self, i: usize, _depth: u32) -> bool {
        let (w, b) = (i >> 6, 1u64 << (i & 63));
        if self.0[w] & b == 0 {
            self.0[w] |= b;
            true
        } else {
            false
        }
    }
}

/// Backward search from all `{q,q}` and `{0,q}`. Returns (number of proper
/// pairs marked, arcs examined). Runs breadth first when the marks record
/// depths, and as a stack otherwise, which keeps the worklist small.
fn backward_bfs<M: PairMarks>(a: &PartialAutomaton, marks: &mut M) -> (usize, u64) {
    let n = a.n() as State;
    let k = a.k();
    let pre = Preimages::new(a);
    let mut queue: Vec<(State, State)> = Vec::with_capacity(2 * n as usize);
    for r in 1..=n {
        queue.push((r, r));
        queue.push((0, r));
    }
    let mut head = 0;
    let mut layer_end = queue.len();
    let mut depth = 1u32;
    let mut marked = 0usize;
    let mut work = 0u64;

    loop {
        let (u, v) = if M::LAYERED {
            if head == queue.len() {
                break;
            }
            if head == layer_end {
                layer_end = queue.len();
                depth += 1;
            }
            head += 1;
            queue[head - 1]
        } else {
            match queue.pop() {
                Some(e) => e,
                None => break,
            }
        };
        for x in 0..k {
            let pu = pre.of(x, u);
            if u == v {
                for (i, &p) in pu.iter().enumerate() {
                    let rest = &pu[i + 1..];
                    work += rest.len() as u64;
                    if p == UNDEFINED {
                        continue;
                    }
                    for &q in rest {
                        if marks.mark(proper_pair_index(p, q), depth) {
                            marked += 1;
                            queue.push((p, q));
                        }
                    }
                }
            } else {
                let pv = pre.of(x, v);
                work += (pu.len() * pv.len()) as u64;
                for &p in pu {
                    if p == UNDEFINED {
                        continue;
                    }
                    for &q in pv {
                        let (lo, hi) = if p < q { (p, q) } else { (q, p) };
                        if marks.mark(proper_pair_index(lo, hi), depth) {
                            marked += 1;
                            queue.push((lo, hi));
                        }
                    }
                }
            }
        }
    }
    (marked, work)
}

/// Shortest merge depths for all pairs, plus the number of pair-graph arcs
/// examined.
pub fn mergeable_pairs_with_work(a: &PartialAutomaton) -> (MergeTable, u64) {
    let n = a.n();
    let mut depth = vec![UNMERGEABLE; n * (n - 1) / 2];
    let (mergeable, work) = backward_bfs(a, &mut depth);
    (MergeTable { n, depth, mergeable }, work)
}

pub fn mergeable_pairs(a: &PartialAutomaton) -> MergeTable {
    mergeable_pairs_with_work(a).0
}

/// Verdict-only pair check without connectivity precondition.
pub(crate) fn pair_check(a: &PartialAutomaton) -> SyncReport {
    let n = a.n();
    let pairs = n * (n - 1) / 2;
    let mut marks = BitMarks(vec![0; pairs.div_ceil(64)]);
    let (marked, work) = backward_bfs(a, &mut marks);
    if marked == pairs {
        SyncReport {
            verdict: Verdict::Synchronizing,
            witness: None,
            work,
            stats: None,
        }
    } else {
        let (p, q) = first_unmarked(n, |i| marks.get(i)).expect("some pair is unmarked");
        SyncReport {
            verdict: Verdict::NotSynchronizing,
            witness: Some(Witness::Deadlock(p, q)),
            work,
            stats: None,
        }
    }
}

/// Decides synchronization of a strongly connected partial automaton: it is
/// synchronizing iff every pair can be merged. A negative verdict carries the
/// lexicographically least deadlock pair.
pub fn is_synchronizing_sc(a: &PartialAutomaton) -> Result<SyncReport, SyncError> {
    if !is_strongly_connected(a) {
        return Err(SyncError::NotStronglyConnected);
    }
    Ok(pair_check(a))
}

/// The same pair check for complete automata, where strong connectivity is
/// not needed.
pub fn is_synchronizing_complete(a: &PartialAutomaton) -> Result<SyncReport, SyncError> {
    if !a.is_complete() {
        return Err(SyncError::NotComplete);
    }
    Ok(pair_check(a))
}

/// Builds a reset word by merging pairs of the current image one at a time
/// with shortest merging words. Only meaningful when every pair is
/// mergeable; returns `None` if the image ever consists of deadlocked pairs
/// only.
pub fn pairwise_reset_word(a: &PartialAutomaton, table: &MergeTable) -> Option<Word> {
    let mut current: Vec<State> = a.states().collect();
    let mut word = Word::empty();
    while current.len() > 1 {
        let (p, q) = (0..current.len())
            .flat_map(|i| (i + 1..current.len()).map(move |j| (i, j)))
            .map(|(i, j)| (current[i], current[j]))
            .filter(|&(p, q)| table.is_mergeable(p, q))
            .min_by_key(|&(p, q)| table.depth(p, q))?;
        let v = table.merging_word(a, p, q)?;
        current = a.image(&current, &v);
        word = word.concat(&v);
    }
    (current.len() == 1).then_some(word)
}

/// True iff `|Q.w| = 1`.
pub fn verify_reset_word(a: &PartialAutomaton, w: &Word) -> Result<bool, SyncError> {
    a.check_word(w)?;
    let mut first = None;
    for q in a.states() {
        if let Some(t) = a.apply(q, w) {
            match first {
                None => first = Some(t),
                Some(f) if f != t => return Ok(false),
                Some(_) => {}
            }
        }
    }
    Ok(first.is_some())
}

/// Result of a shortest reset word search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ShortestReset {
    Found(Word),
    NotSynchronizing,
    Inconclusive,
}

/// A shortest reset word, by breadth-first subset search.
pub fn shortest_reset_word(a: &PartialAutomaton, cap: usize) -> ShortestReset {
    let report = exact_sync(a, cap);
    match report.verdict {
        Verdict::Synchronizing => ShortestReset::Found(
            report
                .reset_word()
                .cloned()
                .expect("synchronizing subset search carries a word"),
        ),
        Verdict::NotSynchronizing => ShortestReset::NotSynchronizing,
        Verdict::Inconclusive => ShortestReset::Inconclusive,
    }
}

/// Subset search from `Q`; see [`subset_search`].
pub fn exact_sync(a: &PartialAutomaton, cap: usize) -> SyncReport {
    let all: Vec<State> = a.states().collect();
    subset_search(a, &all, cap)
}

/// Breadth-first search over the subsets reachable from `start`, skipping
/// empty images. Synchronizing with a shortest word once a singleton shows
/// up; NotSynchronizing when the reachable family is exhausted; Inconclusive
/// when more than `cap` subsets would be visited. Letters are tried in
/// increasing order, so the first shortest word found is also the least in
/// that order among words reaching a singleton first.
pub fn subset_search(a: &PartialAutomaton, start: &[State], cap: usize) -> SyncReport {
    let n = a.n();
    let k = a.k();
    let words = n.div_ceil(64);
    let to_bits = |s: &[State]| {
        let mut b = vec![0u64; words].into_boxed_slice();
        for &q in s {
            let i = q as usize - 1;
            b[i >> 6] |= 1 << (i & 63);
        }
        b
    };

    let start_bits = to_bits(start);
    let popcount = |b: &[u64]| b.iter().map(|w| w.count_ones()).sum::<u32>();
    match popcount(&start_bits) {
        0 => {
            return SyncReport {
                verdict: Verdict::NotSynchronizing,
                witness: None,
                work: 0,
                stats: None,
            }
        }
        1 => {
            return SyncReport {
                verdict: Verdict::Synchronizing,
                witness: Some(Witness::ResetWord(Word::empty())),
                work: 0,
                stats: None,
            }
        }
        _ => {}
    }

    let mut index: HashMap<Box<[u64]>, u32> = HashMap::new();
    let mut nodes: Vec<Box<[u64]>> = Vec::new();
    // parent id and letter of every node except the root
    let mut parent: Vec<(u32, u8)> = Vec::new();
    index.insert(start_bits.clone(), 0);
    nodes.push(start_bits);
    parent.push((u32::MAX, 0));

    let rebuild = |parent: &[(u32, u8)], mut id: u32, last: u8| {
        let mut letters = vec![last];
        while parent[id as usize].0 != u32::MAX {
            letters.push(parent[id as usize].1);
            id = parent[id as usize].0;
        }
        letters.reverse();
        Word::from(letters)
    };

    let mut work = 0u64;
    let mut head = 0usize;
    let mut next = vec![0u64; words];
    while head < nodes.len() {
        for x in 0..k {
            next.iter_mut().for_each(|w| *w = 0);
            let cur = &nodes[head];
            for (wi, &bits) in cur.iter().enumerate() {
                let mut b = bits;
                while b != 0 {
                    let i = wi * 64 + b.trailing_zeros() as usize;
                    b &= b - 1;
                    let t = a.step_raw(i as State + 1, x);
                    if t != UNDEFINED {
                        let j = t as usize - 1;
                        next[j >> 6] |= 1 << (j & 63);
                    }
                }
            }
            work += 1;
            match popcount(&next) {
                0 => continue,
                1 => {
                    return SyncReport {
                        verdict: Verdict::Synchronizing,
                        witness: Some(Witness::ResetWord(rebuild(
                            &parent,
                            head as u32,
                            x as u8,
                        ))),
                        work,
                        stats: None,
                    }
                }
                _ => {}
            }
            if index.contains_key(next.as_slice()) {
                continue;
            }
            if nodes.len() >= cap {
                return SyncReport {
                    verdict: Verdict::Inconclusive,
                    witness: Some(Witness::CapExceeded {
                        visited: nodes.len(),
                    }),
                    work,
                    stats: None,
                };
            }
            let boxed: Box<[u64]> = next.clone().into_boxed_slice();
            index.insert(boxed.clone(), nodes.len() as u32);
            nodes.push(boxed);
            parent.push((head as u32, x as u8));
        }
        head += 1;
    }
    SyncReport {
        verdict: Verdict::NotSynchronizing,
        witness: None,
        work,
        stats: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn aut(n: usize, rows: &[&[State]]) -> PartialAutomaton {
        let rows: Vec<Vec<State>> = rows.iter().map(|r| r.to_vec()).collect();
        PartialAutomaton::from_rows(n, &rows).unwrap()
    }

    #[test]
    fn identity_letters_merge_nothing() {
        let a = aut(2, &[&[1, 2], &[1, 2]]);
        let t = mergeable_pairs(&a);
        assert!(!t.is_mergeable(1, 2));
        assert_eq!(t.first_deadlock(), Some((1, 2)));
    }

    #[test]
    fn collision_merges_at_depth_one() {
        let a = aut(2, &[&[2, 2], &[0, 0]]);
        let t = mergeable_pairs(&a);
        assert_eq!(t.depth(1, 2), Some(1));
        assert_eq!(t.depth(2, 2), Some(0));
    }

    #[test]
    fn killing_both_states_is_not_a_merge() {
        // Only letter kills both states at once.
        let a = aut(2, &[&[0, 0]]);
        assert!(!mergeable_pairs(&a).is_mergeable(1, 2));
        // Killing exactly one is a merge.
        let a = aut(2, &[&[2, 0]]);
        assert_eq!(mergeable_pairs(&a).depth(1, 2), Some(1));
    }

    #[test]
    fn single_state_is_synchronizing() {
        let a = aut(1, &[&[1], &[0]]);
        let r = is_synchronizing_sc(&a).unwrap();
        assert_eq!(r.verdict, Verdict::Synchronizing);
        let r = exact_sync(&a, 10);
        assert_eq!(r.reset_word(), Some(&Word::empty()));
    }

    #[test]
    fn swap_and_identity_is_not_synchronizing() {
        let a = aut(2, &[&[2, 1], &[1, 2]]);
        let r = is_synchronizing_sc(&a).unwrap();
        assert_eq!(r.verdict, Verdict::NotSynchronizing);
        assert_eq!(r.deadlock(), Some((1, 2)));
        assert_eq!(exact_sync(&a, 100).verdict, Verdict::NotSynchronizing);
    }

    #[test]
    fn pair_check_requires_its_precondition() {
        let a = aut(2, &[&[2, 0], &[0, 0]]);
        assert_eq!(is_synchronizing_sc(&a), Err(SyncError::NotStronglyConnected));
        assert_eq!(is_synchronizing_complete(&a), Err(SyncError::NotComplete));
    }

    #[test]
    fn cerny_four_states() {
        // a: cycle 1->2->3->4->1; b: 4 -> 1, identity elsewhere
        let a = aut(4, &[&[2, 3, 4, 1], &[1, 2, 3, 1]]);
        let r = is_synchronizing_complete(&a).unwrap();
        assert_eq!(r.verdict, Verdict::Synchronizing);
        match shortest_reset_word(&a, 1000) {
            ShortestReset::Found(w) => {
                assert_eq!(w.len(), 9);
                assert!(verify_reset_word(&a, &w).unwrap());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn permutations_never_synchronize() {
        let a = aut(3, &[&[2, 3, 1]]);
        assert_eq!(
            is_synchronizing_complete(&a).unwrap().verdict,
            Verdict::NotSynchronizing
        );
        let a = aut(3, &[&[1, 2, 3], &[1, 2, 3]]);
        assert_eq!(
            is_synchronizing_complete(&a).unwrap().verdict,
            Verdict::NotSynchronizing
        );
    }

    #[test]
    fn verify_rejects_foreign_letters_and_empty_images() {
        let a = aut(2, &[&[2, 2], &[0, 0]]);
        assert!(verify_reset_word(&a, &"a".parse().unwrap()).unwrap());
        assert!(!verify_reset_word(&a, &"b".parse().unwrap()).unwrap());
        assert!(!verify_reset_word(&a, &Word::empty()).unwrap());
        assert!(verify_reset_word(&a, &"c".parse().unwrap()).is_err());
    }

    #[test]
    fn cap_yields_inconclusive() {
        let a = aut(4, &[&[2, 3, 4, 1], &[1, 2, 3, 1]]);
        let r = exact_sync(&a, 2);
        assert_eq!(r.verdict, Verdict::Inconclusive);
    }

    #[test]
    fn merging_words_realize_depths() {
        let a = aut(4, &[&[2, 3, 4, 1], &[1, 2, 3, 1]]);
        let t = mergeable_pairs(&a);
        for p in 1..=4 {
            for q in p + 1..=4 {
                let w = t.merging_word(&a, p, q).unwrap();
                assert_eq!(Some(w.len() as u32), t.depth(p, q));
                assert_eq!(a.image(&[p, q], &w).len(), 1);
            }
        }
        let w = pairwise_reset_word(&a, &t).unwrap();
        assert!(verify_reset_word(&a, &w).unwrap());
    }
}
