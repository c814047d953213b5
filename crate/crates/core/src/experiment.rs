//! Seeded Monte Carlo experiments with CSV output.
//!
//! Every run is a pure function of its [`ExperimentConfig`]. Instance `i` at
//! size `n` is drawn from [`instance_seed`]`(seed, n, i)`; instances are
//! evaluated in parallel and gathered in index order, so the rows do not
//! depend on the number of worker threads.

use std::fmt;
use std::io::{self, Write};
use std::path::PathBuf;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::automaton::PartialAutomaton;
use crate::exact::{exact_sync, is_synchronizing_sc, pair_check, DEFAULT_SUBSET_CAP};
use crate::fast::{fast_is_synchronizing_sc_with, FastConfig};
use crate::functional::FunctionalGraph;
use crate::graph::largest_sink_subautomaton;
use crate::random_model::{
    analyze_letter, instance_seed, min_subautomaton_size, sample_automaton, sample_letter,
    undefined_count_pmf, zx_pmf_exact,
};
use crate::report::{Stage, Verdict};
use crate::sat::{build_2letter, build_4letter, random_cnf, CnfInstance};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExperimentKind {
    SyncProbability,
    ZxDistribution,
    UndefCounts,
    FastWorkScaling,
    MinSubautomaton,
    ReductionSweep,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 6] = [
        ExperimentKind::SyncProbability,
        ExperimentKind::ZxDistribution,
        ExperimentKind::UndefCounts,
        ExperimentKind::FastWorkScaling,
        ExperimentKind::MinSubautomaton,
        ExperimentKind::ReductionSweep,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ExperimentKind::SyncProbability => "sync-probability",
            ExperimentKind::ZxDistribution => "zx-distribution",
            ExperimentKind::UndefCounts => "undef-counts",
            ExperimentKind::FastWorkScaling => "fast-work-scaling",
            ExperimentKind::MinSubautomaton => "min-subautomaton",
            ExperimentKind::ReductionSweep => "reduction-sweep",
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ExperimentKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm: String = s
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .map(|c| c.to_ascii_lowercase())
            .collect();
        Self::ALL
            .into_iter()
            .find(|k| k.as_str().replace('-', "") == norm)
            .ok_or_else(|| format!("unknown experiment kind `{s}`"))
    }
}

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("config line {line}: {msg}")]
    Config { line: usize, msg: String },
    #[error("invalid config: {0}")]
    Invalid(String),
    #[error("cross-check failed: {0}")]
    Disagreement(Reproducer),
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Enough to regenerate a failing instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reproducer {
    pub kind: ExperimentKind,
    pub seed: u64,
    pub n: usize,
    pub k: usize,
    pub index: u64,
    pub detail: String,
}

impl fmt::Display for Reproducer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "kind={} seed={} n={} k={} index={} instance_seed={}: {}",
            self.kind,
            self.seed,
            self.n,
            self.k,
            self.index,
            instance_seed(self.seed, self.n, self.index),
            self.detail
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    /// Automaton sizes, or numbers of variables for the reduction sweep.
    pub n_grid: Vec<usize>,
    pub k: usize,
    pub samples: u64,
    pub seed: u64,
    /// Subset cap of the exact search.
    pub cap: usize,
    pub fast: FastConfig,
    pub output: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn new(kind: ExperimentKind, n_grid: Vec<usize>, samples: u64, seed: u64) -> Self {
        Self {
            kind,
            n_grid,
            k: 2,
            samples,
            seed,
            cap: DEFAULT_SUBSET_CAP,
            fast: FastConfig::default(),
            output: None,
        }
    }

    /// Parses `key = value` lines; `#` starts a comment. Keys: `kind`,
    /// `n_grid` (comma separated), `k`, `samples`, `seed`, `cap`,
    /// `greedy_budget`, `pair_budget`, `target_size`, `output`.
    pub fn parse(text: &str) -> Result<Self, ExperimentError> {
        let mut kind = None;
        let mut cfg = Self::new(ExperimentKind::SyncProbability, Vec::new(), 1, 0);
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let err = |msg: String| ExperimentError::Config { line, msg };
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| err(format!("expected `key = value`, got `{content}`")))?;
            let (key, value) = (key.trim(), value.trim());
            fn num<T: FromStr>(v: &str) -> Result<T, String> {
                v.parse().map_err(|_| format!("bad number `{v}`"))
            }
            match key {
                "kind" => kind = Some(value.parse().map_err(err)?),
                "n_grid" => {
                    cfg.n_grid = value
                        .split(',')
                        .map(|s| num(s.trim()))
                        .collect::<Result<_, _>>()
                        .map_err(err)?
                }
                "k" => cfg.k = num(value).map_err(err)?,
                "samples" => cfg.samples = num(value).map_err(err)?,
                "seed" => cfg.seed = num(value).map_err(err)?,
                "cap" => cfg.cap = num(value).map_err(err)?,
                "greedy_budget" => cfg.fast.greedy_budget = num(value).map_err(err)?,
                "pair_budget" => cfg.fast.pair_budget = num(value).map_err(err)?,
                "target_size" => cfg.fast.target_size = num(value).map_err(err)?,
                "output" => cfg.output = Some(PathBuf::from(value)),
                _ => return Err(err(format!("unknown key `{key}`"))),
            }
        }
        cfg.kind = kind.ok_or_else(|| ExperimentError::Config {
            line: 0,
            msg: "missing `kind`".into(),
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ExperimentError> {
        let bad = |m: &str| Err(ExperimentError::Invalid(m.to_string()));
        if self.samples == 0 {
            return bad("samples must be at least 1");
        }
        if self.n_grid.is_empty() {
            return bad("n_grid is empty");
        }
        if self.n_grid.contains(&0) {
            return bad("sizes must be at least 1");
        }
        if self.k == 0 || self.k > crate::automaton::MAX_LETTERS {
            return bad("k must be in 1..=26");
        }
        if self.kind == ExperimentKind::SyncProbability && self.k < 2 {
            return bad("sync-probability needs k >= 2");
        }
        if self.kind == ExperimentKind::ReductionSweep && self.n_grid.iter().any(|&n| n > 20) {
            return bad("reduction sweep is limited to 20 variables");
        }
        Ok(())
    }
}

/// One metric of one grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentRow {
    pub kind: ExperimentKind,
    /// Grid point; 0 for metrics fitted across the whole grid.
    pub n: usize,
    pub k: usize,
    pub seed: u64,
    pub metric: &'static str,
    pub value: f64,
    pub samples: u64,
}

impl ExperimentRow {
    pub const CSV_HEADER: &'static str = "kind,n,k,seed,metric,value,samples";

    pub fn csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.kind, self.n, self.k, self.seed, self.metric, self.value, self.samples
        )
    }
}

pub fn write_csv<W: Write>(rows: &[ExperimentRow], mut out: W) -> io::Result<()> {
    writeln!(out, "{}", ExperimentRow::CSV_HEADER)?;
    for r in rows {
        writeln!(out, "{}", r.csv())?;
    }
    Ok(())
}

pub fn to_csv(rows: &[ExperimentRow]) -> String {
    let mut buf = Vec::new();
    write_csv(rows, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("CSV is ASCII")
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len());
    assert!(xs.len() >= 2, "need two points for a slope");
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let len = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / len;
    let my = ly.iter().sum::<f64>() / len;
    let cov: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let var: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    cov / var
}

/// Total variation distance between an empirical histogram and a pmf.
pub fn total_variation(counts: &[u64], pmf: &[f64]) -> f64 {
    let total: u64 = counts.iter().sum();
    let len = counts.len().max(pmf.len());
    (0..len)
        .map(|i| {
            let e = counts.get(i).copied().unwrap_or(0) as f64 / total as f64;
            (e - pmf.get(i).copied().unwrap_or(0.0)).abs()
        })
        .sum::<f64>()
        / 2.0
}

/// Value at quantile `p` of sorted data (nearest rank).
fn quantile(sorted: &[u64], p: f64) -> f64 {
    let rank = ((p * sorted.len() as f64).ceil() as usize).clamp(1, sorted.len());
    sorted[rank - 1] as f64
}

/// Runs the experiment named by `cfg.kind`.
pub fn run(cfg: &ExperimentConfig) -> Result<Vec<ExperimentRow>, ExperimentError> {
    cfg.validate()?;
    match cfg.kind {
        ExperimentKind::SyncProbability => Ok(run_sync_probability(cfg)),
        ExperimentKind::ZxDistribution | ExperimentKind::UndefCounts => {
            Ok(run_distribution_checks(cfg))
        }
        ExperimentKind::FastWorkScaling => run_fast_work_scaling(cfg),
        ExperimentKind::MinSubautomaton => Ok(run_min_subautomaton(cfg)),
        ExperimentKind::ReductionSweep => run_reduction_sweep(cfg),
    }
}

struct Rows<'a> {
    cfg: &'a ExperimentConfig,
    out: Vec<ExperimentRow>,
}

impl<'a> Rows<'a> {
    fn new(cfg: &'a ExperimentConfig) -> Self {
        Self {
            cfg,
            out: Vec::new(),
        }
    }

    fn push(&mut self, n: usize, metric: &'static str, value: f64) {
        self.out.push(ExperimentRow {
            kind: self.cfg.kind,
            n,
            k: self.cfg.k,
            seed: self.cfg.seed,
            metric,
            value,
            samples: self.cfg.samples,
        });
    }
}

/// Evaluates `f` on every instance index at size `n`, in parallel, keeping
/// index order.
fn per_instance<T, F>(cfg: &ExperimentConfig, n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64, u64) -> T + Sync,
{
    (0..cfg.samples)
        .into_par_iter()
        .map(|i| f(i, instance_seed(cfg.seed, n, i)))
        .collect()
}

/// Fraction of automata whose pairs are all mergeable, and fraction of
/// largest sink subautomata that synchronize.
pub fn run_sync_probability(cfg: &ExperimentConfig) -> Vec<ExperimentRow> {
    let mut rows = Rows::new(cfg);
    let mut failure = Vec::new();
    for &n in &cfg.n_grid {
        let results = per_instance(cfg, n, |_, seed| {
            let a = sample_automaton(n, cfg.k, seed);
            let all_pairs = pair_check(&a).verdict.is_synchronizing();
            let sink = largest_sink_subautomaton(&a);
            let sink_sync = is_synchronizing_sc(&sink)
                .expect("sink components are strongly connected")
                .verdict
                .is_synchronizing();
            (all_pairs, sink_sync, sink.n())
        });
        let s = cfg.samples as f64;
        let a_frac = results.iter().filter(|r| r.0).count() as f64 / s;
        let b_frac = results.iter().filter(|r| r.1).count() as f64 / s;
        let size = results.iter().map(|r| r.2 as f64).sum::<f64>() / s;
        rows.push(n, "all_pairs_mergeable", a_frac);
        rows.push(n, "all_pairs_failure", 1.0 - a_frac);
        rows.push(n, "sink_synchronizing", b_frac);
        rows.push(n, "sink_size_mean", size);
        failure.push((n as f64, 1.0 - a_frac));
    }
    let usable: Vec<(f64, f64)> = failure.into_iter().filter(|p| p.1 > 0.0).collect();
    if usable.len() >= 2 {
        let (xs, ys): (Vec<f64>, Vec<f64>) = usable.into_iter().unzip();
        rows.push(0, "failure_loglog_slope", loglog_slope(&xs, &ys));
    }
    rows.out
}

#[derive(Debug, Clone, Copy)]
struct FastSample {
    work: u64,
    kn: u64,
    source: Stage,
    agree: bool,
    fast: Verdict,
    reference: Verdict,
}

/// Work of the fast checker on largest sink subautomata, cross-checked
/// against the pair check on every sample.
pub fn run_fast_work_scaling(cfg: &ExperimentConfig) -> Result<Vec<ExperimentRow>, ExperimentError> {
    let mut rows = Rows::new(cfg);
    let mut means = Vec::new();
    for &n in &cfg.n_grid {
        let results = per_instance(cfg, n, |_, seed| {
            let sink = largest_sink_subautomaton(&sample_automaton(n, cfg.k, seed));
            let fast = fast_is_synchronizing_sc_with(&sink, &cfg.fast)
                .expect("sink components are strongly connected");
            let reference = is_synchronizing_sc(&sink).expect("strongly connected");
            let stats = fast.stats.expect("fast checker reports stats");
            FastSample {
                work: stats.transitions_observed,
                kn: (sink.n() * sink.k()) as u64,
                source: stats.verdict_source,
                agree: fast.verdict == reference.verdict,
                fast: fast.verdict,
                reference: reference.verdict,
            }
        });
        if let Some((i, r)) = results.iter().enumerate().find(|(_, r)| !r.agree) {
            return Err(ExperimentError::Disagreement(Reproducer {
                kind: cfg.kind,
                seed: cfg.seed,
                n,
                k: cfg.k,
                index: i as u64,
                detail: format!("fast says {}, pair check says {}", r.fast, r.reference),
            }));
        }
        let s = cfg.samples as f64;
        let mut work: Vec<u64> = results.iter().map(|r| r.work).collect();
        work.sort_unstable();
        let mean = work.iter().map(|&w| w as f64).sum::<f64>() / s;
        let per_kn = results
            .iter()
            .map(|r| r.work as f64 / r.kn as f64)
            .sum::<f64>()
            / s;
        let frac = |st: Stage| results.iter().filter(|r| r.source == st).count() as f64 / s;
        rows.push(n, "work_mean", mean);
        rows.push(n, "work_per_kn_mean", per_kn);
        rows.push(n, "work_p50", quantile(&work, 0.5));
        rows.push(n, "work_p90", quantile(&work, 0.9));
        rows.push(n, "work_p99", quantile(&work, 0.99));
        rows.push(n, "work_max", *work.last().expect("samples >= 1") as f64);
        rows.push(n, "greedy_fraction", frac(Stage::GreedyShrink));
        rows.push(n, "pair_phase_fraction", frac(Stage::PairPhase));
        rows.push(n, "fallback_fraction", frac(Stage::Fallback));
        rows.push(n, "agreement", 1.0);
        means.push((n as f64, mean));
    }
    if means.len() >= 2 {
        let (xs, ys): (Vec<f64>, Vec<f64>) = means.into_iter().unzip();
        rows.push(0, "work_exponent", loglog_slope(&xs, &ys));
    }
    Ok(rows.out)
}

/// Size of the sink cluster (`z_x`) and number of undefined entries of
/// uniform random letters, against their exact distributions.
pub fn run_distribution_checks(cfg: &ExperimentConfig) -> Vec<ExperimentRow> {
    let mut rows = Rows::new(cfg);
    for &n in &cfg.n_grid {
        match cfg.kind {
            ExperimentKind::UndefCounts => {
                let counts = per_instance(cfg, n, |_, seed| {
                    sample_letter(n, seed, 0).iter().filter(|&&t| t == 0).count()
                });
                let mut hist = vec![0u64; n + 1];
                counts.iter().for_each(|&r| hist[r] += 1);
                let pmf = undefined_count_pmf(n);
                let ln_n = (n as f64).ln();
                let tail = counts.iter().filter(|&&r| r as f64 > ln_n).count() as f64
                    / cfg.samples as f64;
                let exact_tail: f64 = (0..=n).filter(|&r| r as f64 > ln_n).map(|r| pmf[r]).sum();
                rows.push(n, "undef_tv", total_variation(&hist, &pmf));
                rows.push(n, "undef_mean", mean_of(&counts));
                rows.push(n, "undef_tail_ln_n", tail);
                rows.push(n, "undef_tail_ln_n_exact", exact_tail);
            }
            _ => {
                let stats = per_instance(cfg, n, |_, seed| {
                    let a = PartialAutomaton::new(n, 1, sample_letter(n, seed, 0))
                        .expect("sampled letter is valid");
                    let g = FunctionalGraph::of_letter(&a, 0);
                    let zx = a.states().filter(|&q| g.in_sink_component(q)).count();
                    let unique = analyze_letter(&a, 0)
                        .highest_tree
                        .is_some_and(|t| t.is_unique());
                    (zx, unique)
                });
                let mut hist = vec![0u64; n + 1];
                stats.iter().for_each(|&(z, _)| hist[z] += 1);
                let pmf = zx_pmf_exact(n);
                let zx: Vec<usize> = stats.iter().map(|s| s.0).collect();
                let exact_mean: f64 = pmf.iter().enumerate().map(|(j, p)| j as f64 * p).sum();
                let unique = stats.iter().filter(|s| s.1).count() as f64 / cfg.samples as f64;
                rows.push(n, "zx_tv", total_variation(&hist, &pmf));
                rows.push(n, "zx_mean", mean_of(&zx));
                rows.push(n, "zx_mean_exact", exact_mean);
                rows.push(n, "highest_tree_unique", unique);
            }
        }
    }
    rows.out
}

fn mean_of(v: &[usize]) -> f64 {
    v.iter().map(|&x| x as f64).sum::<f64>() / v.len() as f64
}

/// Smallest sink subautomaton size against the linear lower bound `n/(4e²)`.
pub fn run_min_subautomaton(cfg: &ExperimentConfig) -> Vec<ExperimentRow> {
    let mut rows = Rows::new(cfg);
    for &n in &cfg.n_grid {
        let sizes = per_instance(cfg, n, |_, seed| {
            min_subautomaton_size(&sample_automaton(n, cfg.k, seed))
        });
        let bound = n as f64 / (4.0 * std::f64::consts::E.powi(2));
        let above = sizes.iter().filter(|&&s| s as f64 >= bound).count() as f64;
        rows.push(n, "min_sub_mean", mean_of(&sizes));
        rows.push(n, "min_sub_min", *sizes.iter().min().expect("samples >= 1") as f64);
        rows.push(n, "min_sub_above_bound", above / cfg.samples as f64);
    }
    rows.out
}

/// Satisfiability and the exact verdicts on both automata of one instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReductionCheck {
    pub sat: bool,
    pub sync4: Verdict,
    pub sync2: Verdict,
}

impl ReductionCheck {
    pub fn agrees(&self) -> bool {
        let expect = if self.sat {
            Verdict::Synchronizing
        } else {
            Verdict::NotSynchronizing
        };
        self.sync4 == expect && self.sync2 == expect
    }
}

/// Builds both automata of a normalized instance and decides them exactly.
pub fn check_reduction(psi: &CnfInstance, cap: usize) -> ReductionCheck {
    let a = build_4letter(psi).expect("instance is normalized");
    let b = build_2letter(&a.automaton).expect("4 letters");
    ReductionCheck {
        sat: psi.is_satisfiable(),
        sync4: exact_sync(&a.automaton, cap).verdict,
        sync2: exact_sync(&b, cap).verdict,
    }
}

/// The random instance of the reduction sweep with `n_vars` variables,
/// `n_vars + 1` clauses.
pub fn sweep_instance(n_vars: usize, seed: u64) -> CnfInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_cnf(n_vars, n_vars + 1, &mut rng)
}

/// Random normalized CNFs; satisfiability and synchronizability of both
/// automata must coincide on every instance.
pub fn run_reduction_sweep(cfg: &ExperimentConfig) -> Result<Vec<ExperimentRow>, ExperimentError> {
    let mut rows = Rows::new(cfg);
    for &n in &cfg.n_grid {
        let checks = per_instance(cfg, n, |_, seed| check_reduction(&sweep_instance(n, seed), cfg.cap));
        if let Some((i, c)) = checks.iter().enumerate().find(|(_, c)| !c.agrees()) {
            return Err(ExperimentError::Disagreement(Reproducer {
                kind: cfg.kind,
                seed: cfg.seed,
                n,
                k: 4,
                index: i as u64,
                detail: format!(
                    "sat={} sync4={} sync2={} on {}",
                    c.sat as u8,
                    c.sync4,
                    c.sync2,
                    sweep_instance(n, instance_seed(cfg.seed, n, i as u64))
                ),
            }));
        }
        let s = cfg.samples as f64;
        rows.push(n, "satisfiable", checks.iter().filter(|c| c.sat).count() as f64 / s);
        rows.push(n, "agreement", 1.0);
    }
    Ok(rows.out)
}
