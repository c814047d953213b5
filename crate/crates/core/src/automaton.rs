//! Partial deterministic automata, words, and the plain-text table format.
//!
//! States are numbered `1..=n`. The value `0` is reserved for "undefined" both
//! in memory and in the text format, so a transition table is just a dense
//! `k × n` array of state ids.

use std::fmt;
use std::str::FromStr;

use crate::error::AutomatonError;

/// A state id. Valid states are `1..=n`; [`UNDEFINED`] marks a missing transition.
pub type State = u32;

/// Sentinel image for an undefined transition (the death sink `0`).
pub const UNDEFINED: State = 0;

/// Largest supported alphabet; letters print as `a..z`.
pub const MAX_LETTERS: usize = 26;

/// A partial DFA `⟨Q, Σ, δ⟩` with `Q = {1..n}` and `Σ = {0..k}`.
///
/// Immutable after construction.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PartialAutomaton {
    n: usize,
    k: usize,
    // table[x * n + (q - 1)] = δ(q, x), 0 when undefined
    table: Vec<State>,
}

impl PartialAutomaton {
    /// Builds an automaton from a letter-major table: `table[x * n + (q - 1)]`.
    pub fn new(n: usize, k: usize, table: Vec<State>) -> Result<Self, AutomatonError> {
        if n == 0 {
            return Err(AutomatonError::NoStates);
        }
        if k == 0 || k > MAX_LETTERS {
            return Err(AutomatonError::BadAlphabet(k));
        }
        if table.len() != n * k {
            return Err(AutomatonError::TableSize {
                expected: n * k,
                found: table.len(),
            });
        }
        if n > State::MAX as usize / 2 {
            return Err(AutomatonError::TooManyStates(n));
        }
        if let Some(pos) = table.iter().position(|&t| t as usize > n) {
            return Err(AutomatonError::StateOutOfRange {
                state: table[pos] as usize,
                n,
            });
        }
        Ok(Self { n, k, table })
    }

    /// Builds an automaton from one image row per letter.
    pub fn from_rows(n: usize, rows: &[Vec<State>]) -> Result<Self, AutomatonError> {
        if rows.iter().any(|r| r.len() != n) {
            return Err(AutomatonError::TableSize {
                expected: n * rows.len(),
                found: rows.iter().map(Vec::len).sum(),
            });
        }
        Self::new(n, rows.len(), rows.concat())
    }

    /// Builds an automaton from a closure `(state, letter) -> Option<State>`.
    pub fn from_fn(
        n: usize,
        k: usize,
        mut delta: impl FnMut(State, usize) -> Option<State>,
    ) -> Result<Self, AutomatonError> {
        let mut table = Vec::with_capacity(n * k);
        for x in 0..k {
            for q in 1..=n as State {
                table.push(delta(q, x).unwrap_or(UNDEFINED));
            }
        }
        Self::new(n, k, table)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// All states `1..=n`.
    pub fn states(&self) -> impl Iterator<Item = State> + Clone {
        1..=self.n as State
    }

    /// The image row of letter `x`, indexed by `q - 1`; `0` marks undefined.
    pub fn letter_row(&self, x: usize) -> &[State] {
        &self.table[x * self.n..(x + 1) * self.n]
    }

    /// `δ(q, x)`, or `None` when undefined.
    #[inline]
    pub fn step(&self, q: State, x: usize) -> Option<State> {
        debug_assert!(q >= 1 && q as usize <= self.n && x < self.k);
        match self.table[x * self.n + q as usize - 1] {
            UNDEFINED => None,
            t => Some(t),
        }
    }

    /// Raw table entry: `δ(q, x)` with `0` for undefined.
    #[inline]
    pub fn step_raw(&self, q: State, x: usize) -> State {
        self.table[x * self.n + q as usize - 1]
    }

    /// `q.w`, composing left to right. Once undefined, stays undefined.
    pub fn apply(&self, q: State, w: &Word) -> Option<State> {
        w.letters()
            .iter()
            .try_fold(q, |s, &x| self.step(s, x as usize))
    }

    /// `S.w`: the images of the states of `s` on which `w` is defined, sorted
    /// and deduplicated.
    pub fn image(&self, s: &[State], w: &Word) -> Vec<State> {
        let mut out: Vec<State> = s.iter().filter_map(|&q| self.apply(q, w)).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// `Q.w`.
    pub fn image_of_all(&self, w: &Word) -> Vec<State> {
        let all: Vec<State> = self.states().collect();
        self.image(&all, w)
    }

    /// True when no transition is undefined.
    pub fn is_complete(&self) -> bool {
        !self.table.contains(&UNDEFINED)
    }

    /// Number of undefined transitions of letter `x`.
    pub fn undefined_count(&self, x: usize) -> usize {
        self.letter_row(x).iter().filter(|&&t| t == UNDEFINED).count()
    }

    /// Checks that every letter of `w` belongs to this alphabet.
    pub fn check_word(&self, w: &Word) -> Result<(), AutomatonError> {
        match w.letters().iter().find(|&&x| x as usize >= self.k) {
            Some(&x) => Err(AutomatonError::InvalidLetter {
                letter: x as usize,
                k: self.k,
            }),
            None => Ok(()),
        }
    }

    /// The subautomaton induced by `states`, renumbered `1..=|states|` in the
    /// given order. Transitions leaving the set become undefined, so callers
    /// that want a true subautomaton should pass a closed set.
    pub fn restrict(&self, states: &[State]) -> Result<PartialAutomaton, AutomatonError> {
        let mut renumber = vec![UNDEFINED; self.n + 1];
        for (i, &q) in states.iter().enumerate() {
            renumber[q as usize] = i as State + 1;
        }
        let m = states.len();
        let mut table = Vec::with_capacity(m * self.k);
        for x in 0..self.k {
            table.extend(
                states
                    .iter()
                    .map(|&q| renumber[self.step_raw(q, x) as usize]),
            );
        }
        PartialAutomaton::new(m, self.k, table)
    }

    /// Serializes to the text format (`n k`, then one row per letter).
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.k);
        for x in 0..self.k {
            let row: Vec<String> = self.letter_row(x).iter().map(|t| t.to_string()).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }

    /// Parses the text format: optional `#` comment lines, a header `n k`,
    /// then `k` lines of `n` images each, where `0` or `-` means undefined.
    pub fn parse(text: &str) -> Result<Self, AutomatonError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

        let (line_no, header) = lines.next().ok_or_else(|| AutomatonError::Parse {
            line: 0,
            msg: "missing `n k` header".into(),
        })?;
        let dims: Vec<&str> = header.split_whitespace().collect();
        let parse_dim = |s: &str| {
            s.parse::<usize>().map_err(|_| AutomatonError::Parse {
                line: line_no,
                msg: format!("bad header token `{s}`"),
            })
        };
        if dims.len() != 2 {
            return Err(AutomatonError::Parse {
                line: line_no,
                msg: "header must be `n k`".into(),
            });
        }
        let (n, k) = (parse_dim(dims[0])?, parse_dim(dims[1])?);
        if n == 0 {
            return Err(AutomatonError::NoStates);
        }
        if k == 0 || k > MAX_LETTERS {
            return Err(AutomatonError::BadAlphabet(k));
        }

        let mut table = Vec::with_capacity(n * k);
        for x in 0..k {
            let (line_no, row) = lines.next().ok_or_else(|| AutomatonError::Parse {
                line: 0,
                msg: format!("expected {k} letter rows, found {x}"),
            })?;
            let before = table.len();
            for tok in row.split_whitespace() {
                let t = if tok == "-" {
                    UNDEFINED
                } else {
                    tok.parse::<State>().map_err(|_| AutomatonError::Parse {
                        line: line_no,
                        msg: format!("bad state token `{tok}`"),
                    })?
                };
                if t as usize > n {
                    return Err(AutomatonError::Parse {
                        line: line_no,
                        msg: format!("state {t} out of range 1..={n}"),
                    });
                }
                table.push(t);
            }
            if table.len() - before != n {
                return Err(AutomatonError::Parse {
                    line: line_no,
                    msg: format!("expected {n} entries, found {}", table.len() - before),
                });
            }
        }
        if let Some((line_no, _)) = lines.next() {
            return Err(AutomatonError::Parse {
                line: line_no,
                msg: "unexpected trailing data".into(),
            });
        }
        Self::new(n, k, table)
    }
}

impl fmt::Debug for PartialAutomaton {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PartialAutomaton {{ n: {}, k: {}, rows: [", self.n, self.k)?;
        for x in 0..self.k {
            write!(f, " {}: {:?}", letter_char(x), self.letter_row(x))?;
        }
        write!(f, " ] }}")
    }
}

impl FromStr for PartialAutomaton {
    type Err = AutomatonError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse(s)
    }
}

/// Display character for letter index `x` (`0 -> 'a'`).
pub fn letter_char(x: usize) -> char {
    debug_assert!(x < MAX_LETTERS);
    (b'a' + x as u8) as char
}

/// A word over letter indices. The empty word is legal.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<u8>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, x: usize) {
        debug_assert!(x < MAX_LETTERS);
        self.0.push(x as u8);
    }

    /// Appends `x` repeated `times` times.
    pub fn push_power(&mut self, x: usize, times: usize) {
        self.0.extend(std::iter::repeat_n(x as u8, times));
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }
}

impl From<Vec<u8>> for Word {
    fn from(v: Vec<u8>) -> Self {
        Word(v)
    }
}

impl FromIterator<usize> for Word {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        Word(iter.into_iter().map(|x| x as u8).collect())
    }
}

impl FromStr for Word {
    type Err = AutomatonError;

    /// Parses `a..z` letters; `ε`, `eps` and `-` denote the empty word.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() || s == "ε" || s == "eps" || s == "-" {
            return Ok(Word::empty());
        }
        s.chars()
            .map(|c| match c {
                'a'..='z' => Ok(c as u8 - b'a'),
                _ => Err(AutomatonError::BadWord(s.to_string())),
            })
            .collect::<Result<Vec<u8>, _>>()
            .map(Word)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("ε");
        }
        for &x in &self.0 {
            write!(f, "{}", letter_char(x as usize))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}
