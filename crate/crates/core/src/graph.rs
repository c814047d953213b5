//! Structure of the transition digraph: strongly connected components,
//! reachability, and sink subautomata.
//!
//! The digraph has an arc `q -> δ(q, x)` for every defined transition.

use crate::automaton::{PartialAutomaton, State, UNDEFINED};

/// Strongly connected components of the transition digraph.
#[derive(Debug, Clone)]
pub struct Condensation {
    /// `component[q - 1]` is the component id of state `q`.
    pub component: Vec<u32>,
    /// States of each component, sorted. Ids are in reverse topological
    /// order: every arc goes from a higher id to a lower or equal one.
    pub members: Vec<Vec<State>>,
}

impl Condensation {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn component_of(&self, q: State) -> usize {
        self.component[q as usize - 1] as usize
    }
}

/// Iterative Tarjan over the defined transitions.
pub fn strongly_connected_components(a: &PartialAutomaton) -> Condensation {
    const NONE: u32 = u32::MAX;
    let n = a.n();
    let k = a.k();
    let mut index = vec![NONE; n];
    let mut low = vec![0u32; n];
    let mut on_stack = vec![false; n];
    let mut component = vec![NONE; n];
    let mut stack: Vec<State> = Vec::new();
    let mut members: Vec<Vec<State>> = Vec::new();
    // (state, next letter to explore)
    let mut call: Vec<(State, usize)> = Vec::new();
    let mut counter = 0u32;

    for root in a.states() {
        if index[root as usize - 1] != NONE {
            continue;
        }
        call.push((root, 0));
        index[root as usize - 1] = counter;
        low[root as usize - 1] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root as usize - 1] = true;

        while let Some(&mut (q, ref mut next)) = call.last_mut() {
            let qi = q as usize - 1;
            if *next < k {
                let t = a.step_raw(q, *next);
                *next += 1;
                if t == UNDEFINED {
                    continue;
                }
                let ti = t as usize - 1;
                if index[ti] == NONE {
                    index[ti] = counter;
                    low[ti] = counter;
                    counter += 1;
                    stack.push(t);
                    on_stack[ti] = true;
                    call.push((t, 0));
                } else if on_stack[ti] {
                    low[qi] = low[qi].min(index[ti]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                let pi = parent as usize - 1;
                low[pi] = low[pi].min(low[qi]);
            }
            if low[qi] == index[qi] {
                let id = members.len() as u32;
                let mut comp = Vec::new();
                loop {
                    let s = stack.pop().expect("tarjan stack underflow");
                    on_stack[s as usize - 1] = false;
                    component[s as usize - 1] = id;
                    comp.push(s);
                    if s == q {
                        break;
                    }
                }
                comp.sort_unstable();
                members.push(comp);
            }
        }
    }
    Condensation { component, members }
}

pub fn is_strongly_connected(a: &PartialAutomaton) -> bool {
    strongly_connected_components(a).len() == 1
}

/// True iff some state reaches every state, i.e. the condensation has a
/// single source component.
pub fn is_reachable(a: &PartialAutomaton) -> bool {
    let scc = strongly_connected_components(a);
    let mut has_incoming = vec![false; scc.len()];
    for q in a.states() {
        let cq = scc.component_of(q);
        for x in 0..a.k() {
            if let Some(t) = a.step(q, x) {
                let ct = scc.component_of(t);
                if ct != cq {
                    has_incoming[ct] = true;
                }
            }
        }
    }
    has_incoming.iter().filter(|&&b| !b).count() == 1
}

/// Sink components of the transition digraph: the minimal nonempty state
/// sets closed under all defined transitions. Sorted by smallest member.
pub fn sink_subautomata(a: &PartialAutomaton) -> Vec<Vec<State>> {
    let scc = strongly_connected_components(a);
    let mut is_sink = vec![true; scc.len()];
    for q in a.states() {
        let cq = scc.component_of(q);
        for x in 0..a.k() {
            if let Some(t) = a.step(q, x) {
                if scc.component_of(t) != cq {
                    is_sink[cq] = false;
                }
            }
        }
    }
    let mut sinks: Vec<Vec<State>> = scc
        .members
        .into_iter()
        .zip(is_sink)
        .filter_map(|(m, sink)| sink.then_some(m))
        .collect();
    sinks.sort_unstable_by_key(|m| m[0]);
    sinks
}

/// The largest sink subautomaton (ties: smallest first state), renumbered.
pub fn largest_sink_subautomaton(a: &PartialAutomaton) -> PartialAutomaton {
    let sinks = sink_subautomata(a);
    let best = sinks
        .iter()
        .max_by(|x, y| x.len().cmp(&y.len()).then(y[0].cmp(&x[0])))
        .expect("every automaton has a sink component");
    a.restrict(best)
        .expect("restriction of a valid automaton is valid")
}
