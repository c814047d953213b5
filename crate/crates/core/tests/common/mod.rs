//! Brute-force oracles shared by the integration tests. They use only the
//! transition table and forward stepping, never the library's checkers.
#![allow(dead_code)]

use std::collections::{HashSet, VecDeque};

use partsync::{PartialAutomaton, State};

/// Every `n`-state, `k`-letter partial automaton, in table order.
pub fn all_automata(n: usize, k: usize) -> impl Iterator<Item = PartialAutomaton> {
    let entries = n * k;
    let total = (n as u64 + 1).pow(entries as u32);
    (0..total).map(move |mut code| {
        let mut table = Vec::with_capacity(entries);
        for _ in 0..entries {
            table.push((code % (n as u64 + 1)) as State);
            code /= n as u64 + 1;
        }
        PartialAutomaton::new(n, k, table).unwrap()
    })
}

/// States reachable from `q` along defined transitions, `q` included.
pub fn reach(a: &PartialAutomaton, q: State) -> Vec<bool> {
    let mut seen = vec![false; a.n() + 1];
    let mut stack = vec![q];
    seen[q as usize] = true;
    while let Some(s) = stack.pop() {
        for x in 0..a.k() {
            if let Some(t) = a.step(s, x) {
                if !seen[t as usize] {
                    seen[t as usize] = true;
                    stack.push(t);
                }
            }
        }
    }
    seen
}

pub fn brute_strongly_connected(a: &PartialAutomaton) -> bool {
    a.states().all(|q| reach(a, q)[1..].iter().all(|&b| b))
}

/// Shortest `w` with `|Q.w| = 1` by BFS over sorted state vectors;
/// `None` when no reachable nonempty set is a singleton.
pub fn brute_shortest_reset(a: &PartialAutomaton) -> Option<usize> {
    let start: Vec<State> = a.states().collect();
    if start.len() == 1 {
        return Some(0);
    }
    let mut seen: HashSet<Vec<State>> = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([(start, 0usize)]);
    while let Some((s, d)) = queue.pop_front() {
        for x in 0..a.k() {
            let mut t: Vec<State> = s.iter().filter_map(|&q| a.step(q, x)).collect();
            t.sort_unstable();
            t.dedup();
            if t.len() == 1 {
                return Some(d + 1);
            }
            if !t.is_empty() && seen.insert(t.clone()) {
                queue.push_back((t, d + 1));
            }
        }
    }
    None
}

/// Shortest merging word length for `{p, q}`, by forward BFS over ordered
/// pairs with `0` for undefined.
pub fn brute_merge_depth(a: &PartialAutomaton, p: State, q: State) -> Option<usize> {
    let step = |s: State, x: usize| if s == 0 { 0 } else { a.step_raw(s, x) };
    let merged = |(u, v): (State, State)| u == v && u != 0 || (u == 0) != (v == 0);
    if merged((p, q)) {
        return Some(0);
    }
    let mut seen = HashSet::from([(p, q)]);
    let mut queue = VecDeque::from([((p, q), 0usize)]);
    while let Some(((u, v), d)) = queue.pop_front() {
        for x in 0..a.k() {
            let next = (step(u, x), step(v, x));
            if merged(next) {
                return Some(d + 1);
            }
            if next != (0, 0) && seen.insert(next) {
                queue.push_back((next, d + 1));
            }
        }
    }
    None
}
