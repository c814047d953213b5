//! Decomposition of a single letter's action as a functional digraph on
//! `Q ∪ {0}`: each component outside the sink's component is one cycle with
//! trees hanging off it; every state of the sink's component reaches `0`.
//!
//! Besides the structure, the decomposition answers `q.x^t` in constant time
//! for any `t` at least the state's level, which the fast checker relies on.

use crate::automaton::{PartialAutomaton, State, UNDEFINED};

const NONE: u32 = u32::MAX;

#[derive(Debug, Clone)]
pub struct FunctionalGraph {
    /// For a state of the sink component: number of steps until the letter
    /// becomes undefined (at least 1). Zero for all other states.
    death: Vec<u32>,
    /// Distance to the cycle, zero on the cycle and in the sink component.
    level: Vec<u32>,
    /// Cycle id, `u32::MAX` in the sink component.
    cycle: Vec<u32>,
    /// Position on the cycle of the state's root (the first cyclic state on
    /// its path).
    root_pos: Vec<u32>,
    cycles: Vec<Vec<State>>,
}

/// `q.x^t` as answered by [`FunctionalGraph::power`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PowerImage {
    Defined(State),
    Undefined,
    /// `t` is below the state's level; walk the tree instead.
    BelowLevel,
}

impl FunctionalGraph {
    pub fn of_letter(a: &PartialAutomaton, x: usize) -> Self {
        let n = a.n();
        let row = a.letter_row(x);
        let mut death = vec![0u32; n];
        let mut level = vec![0u32; n];
        let mut cycle = vec![NONE; n];
        let mut root_pos = vec![0u32; n];
        let mut cycles: Vec<Vec<State>> = Vec::new();
        // 0 = unvisited, 1 = on the current path, 2 = finished
        let mut status = vec![0u8; n];
        let mut path: Vec<usize> = Vec::new();

        for start in 0..n {
            if status[start] != 0 {
                continue;
            }
            path.clear();
            let mut cur = start;
            loop {
                status[cur] = 1;
                path.push(cur);
                let t = row[cur];
                if t == UNDEFINED {
                    // whole path drains into the sink
                    for (d, &s) in path.iter().rev().enumerate() {
                        death[s] = d as u32 + 1;
                        status[s] = 2;
                    }
                    break;
                }
                let next = t as usize - 1;
                match status[next] {
                    0 => cur = next,
                    1 => {
                        let at = path.iter().position(|&s| s == next).expect("on path");
                        let id = cycles.len() as u32;
                        let members: Vec<State> =
                            path[at..].iter().map(|&s| s as State + 1).collect();
                        for (i, &s) in path[at..].iter().enumerate() {
                            cycle[s] = id;
                            root_pos[s] = i as u32;
                            status[s] = 2;
                        }
                        cycles.push(members);
                        for (d, &s) in path[..at].iter().rev().enumerate() {
                            level[s] = d as u32 + 1;
                            cycle[s] = id;
                            root_pos[s] = 0;
                            status[s] = 2;
                        }
                        break;
                    }
                    _ => {
                        for (d, &s) in path.iter().rev().enumerate() {
                            let d = d as u32 + 1;
                            if cycle[next] == NONE {
                                death[s] = death[next] + d;
                            } else {
                                level[s] = level[next] + d;
                                cycle[s] = cycle[next];
                                root_pos[s] = root_pos[next];
                            }
                            status[s] = 2;
                        }
                        break;
                    }
                }
            }
        }
        Self {
            death,
            level,
            cycle,
            root_pos,
            cycles,
        }
    }

    pub fn n(&self) -> usize {
        self.level.len()
    }

    pub fn in_sink_component(&self, q: State) -> bool {
        self.cycle[q as usize - 1] == NONE
    }

    /// Steps from `q` until the letter becomes undefined, if it ever does.
    pub fn death_depth(&self, q: State) -> Option<u32> {
        match self.death[q as usize - 1] {
            0 => None,
            d => Some(d),
        }
    }

    /// Distance from `q` to its cycle (zero in the sink component).
    pub fn level(&self, q: State) -> u32 {
        self.level[q as usize - 1]
    }

    /// Smallest `t` with `q.x^t` on a cycle or undefined.
    #[inline]
    pub fn horizon(&self, q: State) -> u32 {
        let i = q as usize - 1;
        self.level[i].max(self.death[i])
    }

    pub fn cycle_id(&self, q: State) -> Option<usize> {
        match self.cycle[q as usize - 1] {
            NONE => None,
            c => Some(c as usize),
        }
    }

    pub fn cycles(&self) -> &[Vec<State>] {
        &self.cycles
    }

    /// The cyclic state where `q`'s path first meets its cycle.
    pub fn root(&self, q: State) -> Option<State> {
        let i = q as usize - 1;
        match self.cycle[i] {
            NONE => None,
            c => Some(self.cycles[c as usize][self.root_pos[i] as usize]),
        }
    }

    /// `q.x^t` in constant time, valid when `t >= horizon(q)` or `q` is in
    /// the sink component.
    #[inline]
    pub fn power(&self, q: State, t: u64) -> PowerImage {
        let i = q as usize - 1;
        match self.cycle[i] {
            NONE => {
                if t >= self.death[i] as u64 {
                    PowerImage::Undefined
                } else {
                    PowerImage::BelowLevel
                }
            }
            c => {
                let lvl = self.level[i] as u64;
                if t < lvl {
                    return PowerImage::BelowLevel;
                }
                let members = &self.cycles[c as usize];
                let len = members.len() as u64;
                let idx = (self.root_pos[i] as u64 + (t - lvl) % len) % len;
                PowerImage::Defined(members[idx as usize])
            }
        }
    }
}
