//! The square automaton on unordered pairs of `Q ∪ {0}`.
//!
//! Undefined transitions are redirected to the sink `0`, so a pair node is
//! one of `{q,q}`, `{p,q}` with `p < q`, `{0,q}` or the absorbing `{0,0}`.
//! Successors are computed on demand from the underlying table.

use crate::automaton::{PartialAutomaton, State, UNDEFINED};

/// A node of the pair graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PairState {
    /// `{q, q}`: already merged.
    Diag(State),
    /// `{p, q}` with `p < q`.
    Pair(State, State),
    /// `{0, q}`: one state has died.
    HalfDead(State),
    /// `{0, 0}`.
    Dead,
}

impl PairState {
    /// Canonical node for the unordered pair `{p, q}` over `Q ∪ {0}`.
    pub fn of(p: State, q: State) -> Self {
        let (lo, hi) = if p <= q { (p, q) } else { (q, p) };
        match (lo, hi) {
            (0, 0) => PairState::Dead,
            (0, h) => PairState::HalfDead(h),
            (l, h) if l == h => PairState::Diag(l),
            (l, h) => PairState::Pair(l, h),
        }
    }

    /// The two members, `0` standing for the sink, smaller first.
    pub fn members(self) -> (State, State) {
        match self {
            PairState::Diag(q) => (q, q),
            PairState::Pair(p, q) => (p, q),
            PairState::HalfDead(q) => (0, q),
            PairState::Dead => (0, 0),
        }
    }

    /// Merge targets: a pair is mergeable iff it reaches one of these.
    pub fn is_merged(self) -> bool {
        matches!(self, PairState::Diag(_) | PairState::HalfDead(_))
    }
}

/// Index of the unordered pair `{p, q}`, `p, q ∈ 0..=n`, in `0..(n+1)(n+2)/2`.
#[inline]
pub fn node_index(p: State, q: State) -> usize {
    let (lo, hi) = if p <= q { (p, q) } else { (q, p) };
    let h = hi as usize;
    h * (h + 1) / 2 + lo as usize
}

/// Index of `{p, q}` with `1 <= p < q`, in `0..n(n-1)/2`.
#[inline]
pub fn proper_pair_index(p: State, q: State) -> usize {
    debug_assert!(0 < p && p < q);
    let h = q as usize - 1;
    h * (h - 1) / 2 + (p as usize - 1)
}

/// Lazily evaluated pair graph of a partial automaton.
#[derive(Debug, Clone, Copy)]
pub struct PairGraph<'a> {
    automaton: &'a PartialAutomaton,
}

impl<'a> PairGraph<'a> {
    pub fn new(automaton: &'a PartialAutomaton) -> Self {
        Self { automaton }
    }

    pub fn automaton(&self) -> &'a PartialAutomaton {
        self.automaton
    }

    /// Number of nodes: all unordered pairs over `Q ∪ {0}`.
    pub fn node_count(&self) -> usize {
        let n = self.automaton.n();
        (n + 1) * (n + 2) / 2
    }

    /// Number of arcs: one per node and letter.
    pub fn edge_count(&self) -> usize {
        self.node_count() * self.automaton.k()
    }

    /// Sink-extended transition: `0` maps to `0`.
    #[inline]
    fn ext(&self, q: State, x: usize) -> State {
        if q == UNDEFINED {
            UNDEFINED
        } else {
            self.automaton.step_raw(q, x)
        }
    }

    pub fn successor(&self, node: PairState, x: usize) -> PairState {
        let (p, q) = node.members();
        PairState::of(self.ext(p, x), self.ext(q, x))
    }

    /// All nodes, in index order.
    pub fn nodes(&self) -> impl Iterator<Item = PairState> {
        let n = self.automaton.n() as State;
        (0..=n).flat_map(move |hi| (0..=hi).map(move |lo| PairState::of(lo, hi)))
    }
}
