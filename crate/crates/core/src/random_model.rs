//! The random model: every transition is independently uniform over
//! `{undefined} ∪ Q`, so each letter is a uniform `0`-preserving map on
//! `{0} ∪ Q`.
//!
//! Sampling is counter based: the image of state `q` under letter `x` is
//! read from ChaCha8 keyed by the seed, on stream `x`, at a block offset
//! derived from `q`. A sample therefore does not depend on the order in
//! which entries are drawn.

use num_bigint::BigUint;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::automaton::{PartialAutomaton, State};
use crate::functional::FunctionalGraph;
use crate::graph::sink_subautomata;

/// Words of ChaCha output reserved per table entry.
const WORDS_PER_ENTRY: u128 = 16;

/// Draws `δ(q, x)` for the given key.
fn draw_entry(rng: &mut ChaCha8Rng, n: usize, x: usize, q: State) -> State {
    rng.set_stream(x as u64);
    rng.set_word_pos(q as u128 * WORDS_PER_ENTRY);
    rng.random_range(0..=n as State)
}

/// A uniform letter map on `n` states: entry `0` means undefined.
pub fn sample_letter(n: usize, seed: u64, x: usize) -> Vec<State> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (1..=n as State).map(|q| draw_entry(&mut rng, n, x, q)).collect()
}

/// A random `n`-state, `k`-letter partial automaton; a deterministic
/// function of `(n, k, seed)`.
pub fn sample_automaton(n: usize, k: usize, seed: u64) -> PartialAutomaton {
    assert!(n >= 1 && k >= 1, "need n >= 1 and k >= 1");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut table = Vec::with_capacity(n * k);
    for x in 0..k {
        table.extend((1..=n as State).map(|q| draw_entry(&mut rng, n, x, q)));
    }
    PartialAutomaton::new(n, k, table).expect("sampled table is valid")
}

/// Seed of instance `index` at size `n` under `master`. Adding sizes or
/// instances never changes the seeds of the others.
pub fn instance_seed(master: u64, n: usize, index: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(n as u64);
    rng.set_word_pos(index as u128 * 2);
    rng.next_u64()
}

/// One component of a letter's digraph outside the sink component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cluster {
    pub states: Vec<State>,
    pub cycle_length: usize,
    /// Height of the tree rooted at each cycle state, in cycle order.
    pub tree_heights: Vec<u32>,
}

/// The highest tree among all non-sink clusters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HighestTree {
    pub root: State,
    pub height: u32,
    /// Height of the next-highest tree, `None` if there is no other tree.
    pub second_height: Option<u32>,
    /// Vertices of the highest tree above every other tree's height.
    pub top_count: usize,
}

impl HighestTree {
    /// Strictly higher than every other tree.
    pub fn is_unique(&self) -> bool {
        self.second_height.is_none_or(|h| h < self.height)
    }

    pub fn gap(&self) -> Option<u32> {
        self.second_height.map(|h| self.height.saturating_sub(h))
    }
}

/// Decomposition of one letter's functional digraph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DigraphStats {
    pub clusters: Vec<Cluster>,
    /// States that reach `0`, i.e. the sink's cluster without `0` itself.
    pub zero_cluster: Vec<State>,
    /// `levels[q - 1]`: distance to the cycle, or to `0` in the sink cluster.
    pub levels: Vec<u32>,
    pub highest_tree: Option<HighestTree>,
}

impl DigraphStats {
    /// `z_x`.
    pub fn zero_cluster_size(&self) -> usize {
        self.zero_cluster.len()
    }
}

pub fn analyze_letter(a: &PartialAutomaton, x: usize) -> DigraphStats {
    assert!(x < a.k(), "letter {x} outside alphabet");
    let g = FunctionalGraph::of_letter(a, x);
    let mut clusters: Vec<Cluster> = g
        .cycles()
        .iter()
        .map(|c| Cluster {
            states: Vec::new(),
            cycle_length: c.len(),
            tree_heights: vec![0; c.len()],
        })
        .collect();
    let mut cycle_pos = vec![0usize; a.n() + 1];
    for c in g.cycles() {
        for (i, &q) in c.iter().enumerate() {
            cycle_pos[q as usize] = i;
        }
    }
    let mut zero_cluster = Vec::new();
    let mut levels = Vec::with_capacity(a.n());
    // (height, root) of each tree
    let mut tree_height = vec![0u32; a.n() + 1];
    for q in a.states() {
        match g.cycle_id(q) {
            None => {
                zero_cluster.push(q);
                levels.push(g.death_depth(q).expect("sink component state"));
            }
            Some(c) => {
                let lvl = g.level(q);
                levels.push(lvl);
                clusters[c].states.push(q);
                let root = g.root(q).expect("non-sink state has a root");
                let pos = cycle_pos[root as usize];
                let h = &mut clusters[c].tree_heights[pos];
                *h = (*h).max(lvl);
                tree_height[root as usize] = tree_height[root as usize].max(lvl);
            }
        }
    }

    let roots: Vec<State> = g.cycles().iter().flatten().copied().collect();
    let highest_tree = roots
        .iter()
        .copied()
        // highest, ties broken by smallest root
        .max_by(|&p, &q| {
            tree_height[p as usize]
                .cmp(&tree_height[q as usize])
                .then(q.cmp(&p))
        })
        .map(|root| {
            let height = tree_height[root as usize];
            let second_height = roots
                .iter()
                .filter(|&&r| r != root)
                .map(|&r| tree_height[r as usize])
                .max();
            let threshold = second_height.map_or(0, |h| h + 1);
            let top_count = a
                .states()
                .filter(|&q| g.root(q) == Some(root) && g.level(q) >= threshold)
                .count();
            HighestTree {
                root,
                height,
                second_height,
                top_count,
            }
        });

    DigraphStats {
        clusters,
        zero_cluster,
        levels,
        highest_tree,
    }
}

/// Natural logs of `0!, 1!, ..., n!`.
fn ln_factorials(n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(0.0);
    let mut acc = 0.0f64;
    for i in 1..=n {
        acc += (i as f64).ln();
        out.push(acc);
    }
    out
}

/// `m · ln(b)` with the convention `0^0 = 1`.
fn ln_pow(b: f64, m: f64) -> f64 {
    if m == 0.0 {
        0.0
    } else {
        m * b.ln()
    }
}

/// Distribution of the size of a random letter's sink cluster:
/// `P(z = j) = C(n,j) (j+1)^(j-1) (n-j)^(n-j) / (n+1)^n`.
pub fn zx_pmf_exact(n: usize) -> Vec<f64> {
    assert!(n >= 1);
    let lf = ln_factorials(n);
    let total = n as f64 * ((n + 1) as f64).ln();
    (0..=n)
        .map(|j| {
            let ln_choose = lf[n] - lf[j] - lf[n - j];
            let trees = ln_pow((j + 1) as f64, j as f64 - 1.0);
            let rest = ln_pow((n - j) as f64, (n - j) as f64);
            (ln_choose + trees + rest - total).exp()
        })
        .collect()
}

/// Distribution of the number of undefined entries of a random letter:
/// `P(r) = C(n,r) n^(n-r) / (n+1)^n`.
pub fn undefined_count_pmf(n: usize) -> Vec<f64> {
    assert!(n >= 1);
    let lf = ln_factorials(n);
    let total = n as f64 * ((n + 1) as f64).ln();
    (0..=n)
        .map(|r| {
            let ln_choose = lf[n] - lf[r] - lf[n - r];
            (ln_choose + ln_pow(n as f64, (n - r) as f64) - total).exp()
        })
        .collect()
}

/// Number of rooted forests with `roots` labeled roots and `others` labeled
/// non-root vertices: `N (m + N)^(m - 1)`, and 1 for the empty forest.
pub fn forest_count(roots: u64, others: u64) -> BigUint {
    assert!(roots >= 1, "a forest count needs at least one root");
    if others == 0 {
        return BigUint::from(1u32);
    }
    BigUint::from(roots) * BigUint::from(others + roots).pow((others - 1) as u32)
}

/// Size of the smallest sink subautomaton.
pub fn min_subautomaton_size(a: &PartialAutomaton) -> usize {
    sink_subautomata(a)
        .iter()
        .map(Vec::len)
        .min()
        .expect("at least one sink component")
}
