//! Reduction from SAT to synchronizability of partial automata.
//!
//! A normalized CNF with `n` variables and `m = n + 1` clauses becomes a
//! 4-letter automaton on
//!
//! * `S^q = { q(i,j) : 1 <= i <= m, 1 <= j <= n+1 }`, one row per clause,
//! * `S^p = { p(i,j) : 1 <= i <= j <= n+1 }`,
//! * `S^g = { g(i,j) : i in {0,1}, 1 <= j <= n+1 }`,
//!
//! numbered in that order, row-major. On `S^q`, letter `a` (resp. `b`) is
//! undefined at `q(i,j)` exactly when `x_j` (resp. `¬x_j`) occurs in `c_i`.
//! A 2-letter automaton is then obtained on `Q × {a,b,c,d}`, where `a`
//! selects the next letter and `b` fires the selected one.

use std::collections::BTreeSet;
use std::fmt;

use rand::Rng;

use crate::automaton::{PartialAutomaton, State, Word, UNDEFINED};
use crate::error::SatError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    /// Variable index, from 1.
    pub var: u32,
    pub positive: bool,
}

impl Literal {
    pub fn pos(var: u32) -> Self {
        Self { var, positive: true }
    }

    pub fn neg(var: u32) -> Self {
        Self { var, positive: false }
    }

    pub fn from_dimacs(l: i64) -> Self {
        Self {
            var: l.unsigned_abs() as u32,
            positive: l > 0,
        }
    }

    pub fn to_dimacs(self) -> i64 {
        if self.positive {
            self.var as i64
        } else {
            -(self.var as i64)
        }
    }

    pub fn eval(self, assignment: &[bool]) -> bool {
        assignment[self.var as usize - 1] == self.positive
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.positive {
            write!(f, "x{}", self.var)
        } else {
            write!(f, "¬x{}", self.var)
        }
    }
}

/// A clause is a nonempty set of literals, kept sorted.
pub type Clause = BTreeSet<Literal>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CnfInstance {
    pub n_vars: usize,
    pub clauses: Vec<Clause>,
}

fn is_tautology(c: &Clause) -> bool {
    c.iter().any(|l| l.positive && c.contains(&Literal::neg(l.var)))
}

impl CnfInstance {
    /// Builds an instance from DIMACS-style integer clauses.
    pub fn from_dimacs_clauses(n_vars: usize, clauses: &[&[i64]]) -> Self {
        Self {
            n_vars,
            clauses: clauses
                .iter()
                .map(|c| c.iter().map(|&l| Literal::from_dimacs(l)).collect())
                .collect(),
        }
    }

    pub fn n_clauses(&self) -> usize {
        self.clauses.len()
    }

    pub fn satisfied_by(&self, assignment: &[bool]) -> bool {
        assert_eq!(assignment.len(), self.n_vars, "assignment length");
        self.clauses
            .iter()
            .all(|c| c.iter().any(|l| l.eval(assignment)))
    }

    /// Truth-table search for a satisfying assignment; `n_vars <= 20`.
    pub fn find_assignment(&self) -> Option<Vec<bool>> {
        assert!(self.n_vars <= 20, "truth-table oracle limited to 20 variables");
        let n = self.n_vars;
        let mut tau = vec![false; n];
        (0u32..1 << n).find_map(|bits| {
            for (j, t) in tau.iter_mut().enumerate() {
                *t = bits >> j & 1 == 1;
            }
            self.satisfied_by(&tau).then(|| tau.clone())
        })
    }

    pub fn is_satisfiable(&self) -> bool {
        self.find_assignment().is_some()
    }

    /// `m = n + 1`, and no clause contains a variable with both signs.
    pub fn is_normalized(&self) -> bool {
        self.n_vars >= 1
            && self.clauses.len() == self.n_vars + 1
            && self.clauses.iter().all(|c| {
                !c.is_empty()
                    && !is_tautology(c)
                    && c.iter().all(|l| l.var >= 1 && l.var as usize <= self.n_vars)
            })
    }

    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p cnf {} {}\n", self.n_vars, self.clauses.len());
        for c in &self.clauses {
            for l in c {
                out.push_str(&l.to_dimacs().to_string());
                out.push(' ');
            }
            out.push_str("0\n");
        }
        out
    }
}

impl fmt::Display for CnfInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, c) in self.clauses.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            let lits: Vec<String> = c.iter().map(|l| l.to_string()).collect();
            write!(f, "{}", lits.join(" ∨ "))?;
        }
        write!(f, "}}")
    }
}

/// Parses DIMACS CNF. Comment lines start with `c`; a line `%` ends the
/// input (as in the SATLIB files). Clauses may span lines.
pub fn parse_dimacs(text: &str) -> Result<CnfInstance, SatError> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses: Vec<Clause> = Vec::new();
    let mut current = Clause::new();
    let mut open = false;

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line.starts_with('%') {
            break;
        }
        if line.starts_with('p') {
            if header.is_some() {
                return Err(SatError::MalformedHeader {
                    line: line_no,
                    msg: "duplicate header".into(),
                });
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 4 || parts[0] != "p" || parts[1] != "cnf" {
                return Err(SatError::MalformedHeader {
                    line: line_no,
                    msg: "expected `p cnf <vars> <clauses>`".into(),
                });
            }
            let num = |s: &str| {
                s.parse::<usize>().map_err(|_| SatError::MalformedHeader {
                    line: line_no,
                    msg: format!("bad count `{s}`"),
                })
            };
            header = Some((num(parts[2])?, num(parts[3])?));
            continue;
        }
        let Some((n_vars, _)) = header else {
            return Err(SatError::MalformedHeader {
                line: line_no,
                msg: "clause before header".into(),
            });
        };
        for tok in line.split_whitespace() {
            let lit: i64 = tok.parse().map_err(|_| SatError::BadToken {
                line: line_no,
                token: tok.to_string(),
            })?;
            if lit == 0 {
                if current.is_empty() {
                    return Err(SatError::EmptyClause { line: line_no });
                }
                clauses.push(std::mem::take(&mut current));
                open = false;
                continue;
            }
            if lit.unsigned_abs() as usize > n_vars {
                return Err(SatError::LiteralOutOfRange {
                    line: line_no,
                    literal: lit,
                    n_vars,
                });
            }
            current.insert(Literal::from_dimacs(lit));
            open = true;
        }
    }

    let Some((n_vars, n_clauses)) = header else {
        return Err(SatError::MalformedHeader {
            line: 0,
            msg: "missing `p cnf` header".into(),
        });
    };
    if open {
        return Err(SatError::UnterminatedClause);
    }
    if clauses.len() != n_clauses {
        return Err(SatError::ClauseCount {
            expected: n_clauses,
            found: clauses.len(),
        });
    }
    Ok(CnfInstance { n_vars, clauses })
}

/// Where a clause of a normalized instance came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClauseOrigin {
    /// Clause `i` (from 0) of the input.
    Original(usize),
    /// A copy of the first kept clause, added to reach `m = n + 1`.
    Padding,
    /// The stand-in `(x1)` used when every input clause was a tautology.
    Canonical,
}

/// Normalizes and records the origin of every clause.
pub fn normalize_with_origin(psi: &CnfInstance) -> (CnfInstance, Vec<ClauseOrigin>) {
    let mut n_vars = psi.n_vars.max(1);
    let mut clauses = Vec::new();
    let mut origin = Vec::new();
    for (i, c) in psi.clauses.iter().enumerate() {
        if !is_tautology(c) {
            clauses.push(c.clone());
            origin.push(ClauseOrigin::Original(i));
        }
    }
    if clauses.is_empty() {
        clauses.push(Clause::from([Literal::pos(1)]));
        origin.push(ClauseOrigin::Canonical);
    }
    while clauses.len() < n_vars + 1 {
        clauses.push(clauses[0].clone());
        origin.push(ClauseOrigin::Padding);
    }
    if clauses.len() > n_vars + 1 {
        // fresh variables occur in no clause
        n_vars = clauses.len() - 1;
    }
    (CnfInstance { n_vars, clauses }, origin)
}

/// A satisfiability-equivalent instance with `m = n + 1` and no
/// tautological clause.
pub fn normalize(psi: &CnfInstance) -> CnfInstance {
    normalize_with_origin(psi).0
}

/// Sizes and clause provenance of a built reduction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionMeta {
    pub n_vars: usize,
    pub n_clauses: usize,
    pub origin: Vec<ClauseOrigin>,
}

#[derive(Debug, Clone)]
pub struct ReductionArtifact {
    pub automaton: PartialAutomaton,
    /// `labels[q - 1]` names state `q`, e.g. `q1,2`, `p3,4`, `g0,4`.
    pub labels: Vec<String>,
    pub meta: ReductionMeta,
}

impl ReductionArtifact {
    /// The state carrying `label`.
    pub fn state(&self, label: &str) -> Option<State> {
        self.labels
            .iter()
            .position(|l| l == label)
            .map(|i| i as State + 1)
    }

    pub fn label(&self, q: State) -> &str {
        &self.labels[q as usize - 1]
    }

    /// Tab-separated `state<TAB>label` lines.
    pub fn labels_tsv(&self) -> String {
        self.labels
            .iter()
            .enumerate()
            .map(|(i, l)| format!("{}\t{l}\n", i + 1))
            .collect()
    }
}

/// Expected number of states of the 4-letter automaton.
pub fn reduction_size(n_vars: usize, n_clauses: usize) -> usize {
    let (n, m) = (n_vars, n_clauses);
    m * (n + 1) + m * (m + 1) / 2 + 2 * (n + 1)
}

/// State numbering of the 4-letter automaton.
struct Layout {
    n: usize,
    m: usize,
}

impl Layout {
    fn q(&self, i: usize, j: usize) -> State {
        ((i - 1) * (self.n + 1) + j) as State
    }

    fn p(&self, i: usize, j: usize) -> State {
        // rows 1..i-1 hold (n+1) - r + 1 states each
        let w = self.n + 1;
        let before: usize = (1..i).map(|r| w - r + 1).sum();
        (self.m * w + before + (j - i) + 1) as State
    }

    fn g(&self, i: usize, j: usize) -> State {
        let w = self.n + 1;
        // S^p has m(m+1)/2 states only because m = n + 1
        let base = self.m * w + w * (w + 1) / 2;
        (base + i * w + j) as State
    }
}

const A: usize = 0;
const B: usize = 1;
const C: usize = 2;
const D: usize = 3;

/// The 4-letter automaton `A(ψ)` of a normalized instance.
pub fn build_4letter(psi: &CnfInstance) -> Result<ReductionArtifact, SatError> {
    if !psi.is_normalized() {
        return Err(SatError::NotNormalized);
    }
    let origin = (0..psi.n_clauses()).map(ClauseOrigin::Original).collect();
    Ok(build_unchecked(psi, origin))
}

/// Normalizes `psi` and builds `A(normalize(psi))`.
pub fn reduce(psi: &CnfInstance) -> ReductionArtifact {
    let (norm, origin) = normalize_with_origin(psi);
    build_unchecked(&norm, origin)
}

fn build_unchecked(psi: &CnfInstance, origin: Vec<ClauseOrigin>) -> ReductionArtifact {
    let n = psi.n_vars;
    let m = psi.n_clauses();
    let w = n + 1;
    let size = reduction_size(n, m);
    let lay = Layout { n, m };
    let mut table = vec![UNDEFINED; 4 * size];
    let mut set = |q: State, x: usize, t: State| table[x * size + q as usize - 1] = t;
    let mut labels = vec![String::new(); size];

    for (i, clause) in psi.clauses.iter().enumerate() {
        let i = i + 1;
        for j in 1..=w {
            let q = lay.q(i, j);
            labels[q as usize - 1] = format!("q{i},{j}");
            if j <= n {
                if !clause.contains(&Literal::pos(j as u32)) {
                    set(q, A, lay.q(i, j + 1));
                }
                if !clause.contains(&Literal::neg(j as u32)) {
                    set(q, B, lay.q(i, j + 1));
                }
            }
            set(q, C, lay.g(1, w));
        }
    }
    for i in 1..=w {
        for j in i..=w {
            let p = lay.p(i, j);
            labels[p as usize - 1] = format!("p{i},{j}");
            if j <= n {
                set(p, A, lay.p(i, j + 1));
            }
            if i < j && j <= n {
                set(p, B, lay.p(i, j + 1));
            }
            if i == j && i <= n {
                set(p, B, lay.p(i + 1, i + 1));
            }
            set(p, C, lay.g(0, w));
            if j == w {
                set(p, D, lay.q(i, 1));
            }
        }
    }
    for i in 0..=1 {
        for j in 1..=w {
            let g = lay.g(i, j);
            labels[g as usize - 1] = format!("g{i},{j}");
            if j <= n {
                set(g, A, lay.g(i, j + 1));
                set(g, B, lay.g(i, j + 1));
                set(g, C, lay.g(i, j + 1));
            }
            if j == 1 {
                set(g, D, lay.g(1 - i, 1));
            } else {
                set(g, D, lay.g(i, 1));
            }
        }
    }

    let automaton = PartialAutomaton::new(size, 4, table).expect("layout is in range");
    ReductionArtifact {
        automaton,
        labels,
        meta: ReductionMeta {
            n_vars: n,
            n_clauses: m,
            origin,
        },
    }
}

/// `v c` where `v[j] = a` if `x_j` is true and `b` otherwise.
pub fn assignment_to_word(assignment: &[bool]) -> Word {
    let mut w: Word = assignment.iter().map(|&t| if t { A } else { B }).collect();
    w.push(C);
    w
}

/// State `(q, a_i)` of the 2-letter automaton, `i` from 0.
pub fn pair_state(q: State, i: usize) -> State {
    (q - 1) * 4 + i as State + 1
}

/// The 2-letter automaton on `Q × {a1..a4}`: `a` advances the second
/// component (saturating at `a4`), `b` applies it to the first and resets
/// the second to `a1`.
pub fn build_2letter(a: &PartialAutomaton) -> Result<PartialAutomaton, SatError> {
    if a.k() != 4 {
        return Err(SatError::WrongAlphabet(a.k()));
    }
    let n2 = a.n() * 4;
    Ok(PartialAutomaton::from_fn(n2, 2, |s, x| {
        let q = (s - 1) / 4 + 1;
        let i = ((s - 1) % 4) as usize;
        match x {
            0 => Some(pair_state(q, (i + 1).min(3))),
            _ => a.step(q, i).map(|t| pair_state(t, 0)),
        }
    })?)
}

/// Labels `label/a1` .. `label/a4` for the 2-letter automaton.
pub fn labels_2letter(labels: &[String]) -> Vec<String> {
    labels
        .iter()
        .flat_map(|l| (1..=4).map(move |i| format!("{l}/a{i}")))
        .collect()
}

/// Letter `a_j` (index `j - 1`) becomes `a^(j-1) b`.
pub fn encode_word(w: &Word) -> Word {
    let mut out = Word::empty();
    for &x in w.letters() {
        out.push_power(A, x as usize);
        out.push(B);
    }
    out
}

/// Inverse of [`encode_word`] on its image.
pub fn decode_word(w: &Word) -> Result<Word, SatError> {
    let mut out = Word::empty();
    let mut run = 0usize;
    for &x in w.letters() {
        match x as usize {
            A => {
                run += 1;
                if run > 3 {
                    return Err(SatError::MalformedEncoding);
                }
            }
            B => {
                out.push(run);
                run = 0;
            }
            _ => return Err(SatError::MalformedEncoding),
        }
    }
    if run > 0 {
        return Err(SatError::MalformedEncoding);
    }
    Ok(out)
}

/// A random instance with `m` nonempty, non-tautological clauses. Each
/// variable enters a clause positively, negatively or not at all with equal
/// probability; empty clauses are redrawn.
pub fn random_cnf<R: Rng + ?Sized>(n_vars: usize, m: usize, rng: &mut R) -> CnfInstance {
    assert!(n_vars >= 1);
    let clauses = (0..m)
        .map(|_| loop {
            let c: Clause = (1..=n_vars as u32)
                .filter_map(|v| match rng.random_range(0..3) {
                    0 => Some(Literal::pos(v)),
                    1 => Some(Literal::neg(v)),
                    _ => None,
                })
                .collect();
            if !c.is_empty() {
                break c;
            }
        })
        .collect();
    CnfInstance { n_vars, clauses }
}

/// `{x1 ∨ x2 ∨ x3, ¬x1 ∨ x2, ¬x2 ∨ x3, ¬x2 ∨ ¬x3}`, satisfiable.
pub fn psi1() -> CnfInstance {
    CnfInstance::from_dimacs_clauses(3, &[&[1, 2, 3], &[-1, 2], &[-2, 3], &[-2, -3]])
}

/// [`psi1`] without `x3` in the first clause, unsatisfiable.
pub fn psi2() -> CnfInstance {
    CnfInstance::from_dimacs_clauses(3, &[&[1, 2], &[-1, 2], &[-2, 3], &[-2, -3]])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{exact_sync, subset_search, verify_reset_word, DEFAULT_SUBSET_CAP};
    use crate::graph::is_reachable;
    use crate::report::Verdict;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn parses_trivial_and_worked_instances() {
        let one = parse_dimacs("p cnf 1 1\n1 0\n").unwrap();
        assert_eq!(one.n_vars, 1);
        assert_eq!(one.clauses, vec![Clause::from([Literal::pos(1)])]);

        let text = "c psi1\np cnf 3 4\n1 2 3 0\n-1 2 0\n-2 3 0\n-2 -3\n0\n%\n0\n";
        assert_eq!(parse_dimacs(text).unwrap(), psi1());
        assert_eq!(parse_dimacs(&psi2().to_dimacs()).unwrap(), psi2());
    }

    #[test]
    fn parse_keeps_tautologies_and_dedups() {
        let t = parse_dimacs("p cnf 1 1\n1 -1 1 0\n").unwrap();
        assert_eq!(t.clauses[0].len(), 2);
        assert!(is_tautology(&t.clauses[0]));
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse_dimacs("1 0\n"), Err(SatError::MalformedHeader { .. })));
        assert!(matches!(parse_dimacs("p cnf x 1\n"), Err(SatError::MalformedHeader { .. })));
        assert!(matches!(
            parse_dimacs("p cnf 2 1\n3 0\n"),
            Err(SatError::LiteralOutOfRange { literal: 3, .. })
        ));
        assert!(matches!(parse_dimacs("p cnf 2 1\n0\n"), Err(SatError::EmptyClause { line: 2 })));
        assert!(matches!(parse_dimacs("p cnf 2 1\n1 2\n"), Err(SatError::UnterminatedClause)));
        assert!(matches!(parse_dimacs("p cnf 2 2\n1 2 0\n"), Err(SatError::ClauseCount { .. })));
        assert!(matches!(parse_dimacs("p cnf 2 1\n1 y 0\n"), Err(SatError::BadToken { .. })));
    }

    #[test]
    fn normalization_cases() {
        assert_eq!(normalize(&psi1()), psi1());
        let two = CnfInstance::from_dimacs_clauses(2, &[&[1, 2], &[-1]]);
        let norm = normalize(&two);
        assert_eq!(norm.clauses.len(), 3);
        assert_eq!(norm.clauses[2], two.clauses[0]);
        // more clauses than n + 1: fresh variables
        let wide = CnfInstance::from_dimacs_clauses(1, &[&[1], &[-1], &[1], &[-1]]);
        let norm = normalize(&wide);
        assert_eq!((norm.n_vars, norm.n_clauses()), (3, 4));
        assert!(!norm.is_satisfiable());
        // only tautologies
        let taut = CnfInstance::from_dimacs_clauses(2, &[&[1, -1]]);
        let (norm, origin) = normalize_with_origin(&taut);
        assert!(norm.is_normalized());
        assert_eq!(origin[0], ClauseOrigin::Canonical);
        assert!(norm.is_satisfiable());
    }

    #[test]
    fn psi_truth() {
        assert_eq!(psi1().find_assignment(), Some(vec![false, false, true]));
        assert!(!psi2().is_satisfiable());
    }

    #[test]
    fn size_and_labels() {
        let r = build_4letter(&psi1()).unwrap();
        assert_eq!(r.automaton.n(), 34);
        assert_eq!(r.automaton.n(), reduction_size(3, 4));
        let mut sorted = r.labels.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), 34);
        assert_eq!(r.label(1), "q1,1");
        assert_eq!(r.label(17), "p1,1");
        assert_eq!(r.label(27), "g0,1");
        assert_eq!(r.label(34), "g1,4");
        assert!(matches!(
            build_4letter(&CnfInstance::from_dimacs_clauses(2, &[&[1]])),
            Err(SatError::NotNormalized)
        ));
    }

    #[test]
    fn transitions_follow_the_rules() {
        let r = build_4letter(&psi1()).unwrap();
        let a = &r.automaton;
        let s = |l: &str| r.state(l).unwrap();
        // x3 in c1: a undefined on q1,3; psi2 differs exactly there
        assert_eq!(a.step(s("q1,3"), A), None);
        let r2 = build_4letter(&psi2()).unwrap();
        assert_eq!(r2.automaton.step(s("q1,3"), A), Some(s("q1,4")));
        let diff = (0..4)
            .flat_map(|x| a.states().map(move |q| (q, x)))
            .filter(|&(q, x)| a.step(q, x) != r2.automaton.step(q, x))
            .count();
        assert_eq!(diff, 1);
        assert_eq!(a.step(s("q2,1"), B), None);
        assert_eq!(a.step(s("q2,1"), A), Some(s("q2,2")));
        assert_eq!(a.step(s("p1,1"), B), Some(s("p2,2")));
        assert_eq!(a.step(s("p1,2"), B), Some(s("p1,3")));
        assert_eq!(a.step(s("p4,4"), B), None);
        assert_eq!(a.step(s("p2,4"), D), Some(s("q2,1")));
        assert_eq!(a.step(s("p2,3"), C), Some(s("g0,4")));
        assert_eq!(a.step(s("q3,4"), C), Some(s("g1,4")));
        assert_eq!(a.step(s("g0,1"), D), Some(s("g1,1")));
        assert_eq!(a.step(s("g1,3"), D), Some(s("g1,1")));
        assert_eq!(a.step(s("g1,4"), C), None);
    }

    #[test]
    fn worked_example_reset_word() {
        let r = build_4letter(&psi1()).unwrap();
        let w: Word = "bbac".parse().unwrap();
        assert_eq!(assignment_to_word(&[false, false, true]), w);
        assert!(verify_reset_word(&r.automaton, &w).unwrap());
        let img = r.automaton.image_of_all(&w);
        assert_eq!(r.label(img[0]), "g0,4");
        let rep = exact_sync(&r.automaton, DEFAULT_SUBSET_CAP);
        assert_eq!(rep.verdict, Verdict::Synchronizing);
        assert_eq!(rep.reset_word().unwrap().len(), 4);
    }

    #[test]
    fn unsatisfiable_example_is_nevertheless_synchronized() {
        // d sends S^p to column 1 of S^q and S^g to {g0,1, g1,1}; bbb keeps
        // only q1,1 among the q-rows and pushes S^g to column 4, where c is
        // undefined, so c leaves the single state g1,4
        let r = build_4letter(&psi2()).unwrap();
        let w: Word = "dbbbc".parse().unwrap();
        assert!(verify_reset_word(&r.automaton, &w).unwrap());
        assert_eq!(r.label(r.automaton.image_of_all(&w)[0]), "g1,4");
        let rep = exact_sync(&r.automaton, DEFAULT_SUBSET_CAP);
        assert_eq!(rep.verdict, Verdict::Synchronizing);
    }

    #[test]
    fn g_pair_of_unsatisfiable_example_never_merges() {
        let r = build_4letter(&psi2()).unwrap();
        let t = [r.state("g0,1").unwrap(), r.state("g1,1").unwrap()];
        let rep = subset_search(&r.automaton, &t, DEFAULT_SUBSET_CAP);
        assert_eq!(rep.verdict, Verdict::NotSynchronizing);
    }

    #[test]
    fn reachable_after_normalization() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let n = rng.random_range(1..=4);
            let m = rng.random_range(1..=6);
            let r = reduce(&random_cnf(n, m, &mut rng));
            assert!(is_reachable(&r.automaton));
            assert_eq!(r.automaton.n(), reduction_size(r.meta.n_vars, r.meta.n_clauses));
        }
    }

    #[test]
    fn two_letter_codec() {
        let w: Word = "bbac".parse().unwrap();
        let e = encode_word(&w);
        assert_eq!(e.to_string(), "ababbaab");
        assert_eq!(decode_word(&e).unwrap(), w);
        assert_eq!(decode_word(&Word::empty()).unwrap(), Word::empty());
        for bad in ["a", "aaaab", "ba", "c"] {
            assert_eq!(decode_word(&bad.parse().unwrap()), Err(SatError::MalformedEncoding));
        }
    }

    #[test]
    fn two_letter_construction() {
        let r = build_4letter(&psi1()).unwrap();
        let b = build_2letter(&r.automaton).unwrap();
        assert_eq!(b.n(), 136);
        assert_eq!(b.k(), 2);
        let q = r.state("p1,1").unwrap();
        assert_eq!(b.step(pair_state(q, 3), 0), Some(pair_state(q, 3)));
        assert_eq!(
            b.step(pair_state(q, 1), 1),
            Some(pair_state(r.state("p2,2").unwrap(), 0))
        );
        assert_eq!(
            build_2letter(&PartialAutomaton::from_fn(2, 2, |q, _| Some(q)).unwrap()).unwrap_err(),
            SatError::WrongAlphabet(2)
        );
        assert_eq!(labels_2letter(&r.labels)[1], "q1,1/a2");
    }

    #[test]
    fn encoded_word_on_two_letter_automaton() {
        // pairs (q, a_i) with i > 0 read the blocks with shifted letters, so
        // the encoded reset word leaves more than the image of A
        let r = build_4letter(&psi1()).unwrap();
        let b = build_2letter(&r.automaton).unwrap();
        let e: Word = "ababbaab".parse().unwrap();
        assert!(!verify_reset_word(&b, &e).unwrap());
    }
}
