use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use partsync::experiment::{self, ExperimentConfig, ExperimentError, ExperimentKind};
use partsync::random_model::{analyze_letter, instance_seed, undefined_count_pmf, zx_pmf_exact};
use partsync::sat::{build_2letter, labels_2letter, reduce};
use partsync::{
    exact_sync, fast_is_synchronizing_sc_with, is_reachable, is_strongly_connected,
    is_synchronizing_complete, is_synchronizing_sc, largest_sink_subautomaton, letter_char,
    parse_dimacs, sample_automaton, sink_subautomata, verify_reset_word, FastConfig,
    PartialAutomaton, SyncError, SyncReport, Verdict, Word, DEFAULT_SUBSET_CAP,
};

/// Exit codes shared by all subcommands.
const EXIT_NOT_SYNCHRONIZING: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_INCONCLUSIVE: u8 = 3;

#[derive(Parser)]
#[command(name = "partsync", version, about = "Synchronization of partial automata")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample random partial automata.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of instances; instance i uses the derived seed (seed, n, i).
        #[arg(long, default_value_t = 1)]
        count: u64,
        /// Write `aut-<n>-<i>.txt` files here instead of printing.
        #[arg(long)]
        out_dir: Option<PathBuf>,
        /// Emit the largest sink subautomaton instead of the whole automaton.
        #[arg(long)]
        sink: bool,
    },
    /// Decide whether an automaton is synchronizing.
    Check {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Algo::Exact)]
        algo: Algo,
        /// Subset cap of the exact search.
        #[arg(long, default_value_t = DEFAULT_SUBSET_CAP)]
        cap: usize,
        /// Print one CSV row (with header) instead of text.
        #[arg(long)]
        csv: bool,
    },
    /// Per-letter digraph statistics.
    Analyze { file: PathBuf },
    /// Build the automaton of a DIMACS CNF instance.
    Reduce {
        file: PathBuf,
        #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u8).range(2..=4))]
        letters: u8,
        /// Write `state<TAB>label` lines to this file.
        #[arg(long)]
        labels: Option<PathBuf>,
    },
    /// Check whether a word resets an automaton.
    Verify { file: PathBuf, word: String },
    /// Run a Monte Carlo experiment and write CSV.
    Experiment {
        /// Config file of `key = value` lines; flags override it.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        kind: Option<String>,
        /// Comma-separated sizes.
        #[arg(long, value_delimiter = ',')]
        n_grid: Option<Vec<usize>>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        cap: Option<usize>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Print an exact distribution as `value,probability` CSV.
    Pmf {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = PmfKind::Zx)]
        of: PmfKind,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Algo {
    /// Subset search; valid for every automaton.
    Exact,
    /// Pair-graph search; needs a strongly connected or complete automaton.
    Bfs,
    /// Staged linear-expected-time check; needs strong connectivity.
    Fast,
}

#[derive(Clone, Copy, ValueEnum)]
enum PmfKind {
    Zx,
    Undefined,
}

/// A failure reported on standard error with its exit code.
struct Failure {
    code: u8,
    msg: String,
}

impl Failure {
    fn usage(msg: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            msg: msg.into(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        // A closed pipe (`partsync pmf ... | head`) is not an error.
        let code = if e.kind() == io::ErrorKind::BrokenPipe { 0 } else { EXIT_USAGE };
        Failure { code, msg: e.to_string() }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn load_automaton(path: &Path) -> Result<PartialAutomaton, Failure> {
    PartialAutomaton::parse(&read(path)?)
        .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = io::stdout().lock();
    match run(cli.command, &mut out) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            let _ = out.flush();
            if f.code != 0 {
                eprintln!("partsync: {}", f.msg);
            }
            ExitCode::from(f.code)
        }
    }
}

fn run(command: Command, out: &mut impl Write) -> Result<u8, Failure> {
    match command {
        Command::Gen {
            n,
            k,
            seed,
            count,
            out_dir,
            sink,
        } => {
            if n == 0 || k == 0 || k > 26 {
                return Err(Failure::usage("need n >= 1 and 1 <= k <= 26"));
            }
            if count > 1 && out_dir.is_none() {
                return Err(Failure::usage("--count above 1 needs --out-dir"));
            }
            if let Some(dir) = &out_dir {
                fs::create_dir_all(dir)?;
            }
            for i in 0..count {
                let mut a = sample_automaton(n, k, instance_seed(seed, n, i));
                if sink {
                    a = largest_sink_subautomaton(&a);
                }
                match &out_dir {
                    Some(dir) => fs::write(dir.join(format!("aut-{n}-{i}.txt")), a.to_text())?,
                    None => out.write_all(a.to_text().as_bytes())?,
                }
            }
            Ok(0)
        }
        Command::Check {
            file,
            algo,
            cap,
            csv,
        } => {
            let a = load_automaton(&file)?;
            let started = Instant::now();
            let report = check(&a, algo, cap).map_err(|e| Failure::usage(e.to_string()))?;
            let ms = started.elapsed().as_secs_f64() * 1e3;
            if csv {
                writeln!(out, "{}", SyncReport::CSV_HEADER)?;
                writeln!(out, "{}", report.csv_row(ms))?;
            } else {
                writeln!(out, "{}", report.verdict)?;
                if let Some(w) = &report.witness {
                    let what = match w {
                        partsync::Witness::ResetWord(_) => "reset word",
                        partsync::Witness::Deadlock(..) => "deadlock pair",
                        partsync::Witness::CapExceeded { .. } => "stopped",
                    };
                    writeln!(out, "{what}: {w}")?;
                }
                writeln!(out, "work: {}", report.work)?;
                if let Some(s) = report.stats {
                    writeln!(out, "stage reached: {}", s.stage_reached)?;
                    writeln!(out, "verdict from: {}", s.verdict_source)?;
                }
            }
            Ok(match report.verdict {
                Verdict::Synchronizing => 0,
                Verdict::NotSynchronizing => EXIT_NOT_SYNCHRONIZING,
                Verdict::Inconclusive => EXIT_INCONCLUSIVE,
            })
        }
        Command::Analyze { file } => {
            let a = load_automaton(&file)?;
            let sinks = sink_subautomata(&a);
            writeln!(out, "# states {} letters {}", a.n(), a.k())?;
            writeln!(
                out,
                "# strongly connected {} reachable {} complete {}",
                is_strongly_connected(&a),
                is_reachable(&a),
                a.is_complete()
            )?;
            let sizes: Vec<String> = sinks.iter().map(|s| s.len().to_string()).collect();
            writeln!(out, "# sink subautomata sizes {}", sizes.join(" "))?;
            writeln!(
                out,
                "letter,undefined,clusters,zx,max_level,highest_tree_root,highest_tree_height,second_height,unique_highest,top_count"
            )?;
            for x in 0..a.k() {
                let s = analyze_letter(&a, x);
                let max_level = s.levels.iter().max().copied().unwrap_or(0);
                let (root, height, second, unique, top) = match s.highest_tree {
                    Some(t) => (
                        t.root.to_string(),
                        t.height.to_string(),
                        t.second_height.map(|h| h.to_string()).unwrap_or_default(),
                        t.is_unique().to_string(),
                        t.top_count.to_string(),
                    ),
                    None => Default::default(),
                };
                writeln!(
                    out,
                    "{},{},{},{},{max_level},{root},{height},{second},{unique},{top}",
                    letter_char(x),
                    a.undefined_count(x),
                    s.clusters.len(),
                    s.zero_cluster_size(),
                )?;
            }
            Ok(0)
        }
        Command::Reduce {
            file,
            letters,
            labels,
        } => {
            if letters != 2 && letters != 4 {
                return Err(Failure::usage("--letters must be 2 or 4"));
            }
            let psi = parse_dimacs(&read(&file)?)
                .map_err(|e| Failure::usage(format!("{}: {e}", file.display())))?;
            let r = reduce(&psi);
            let (automaton, names) = if letters == 2 {
                let b = build_2letter(&r.automaton).expect("reduction has 4 letters");
                (b, labels_2letter(&r.labels))
            } else {
                (r.automaton, r.labels)
            };
            if let Some(path) = labels {
                let tsv: String = names
                    .iter()
                    .enumerate()
                    .map(|(i, l)| format!("{}\t{l}\n", i + 1))
                    .collect();
                fs::write(path, tsv)?;
            }
            out.write_all(automaton.to_text().as_bytes())?;
            Ok(0)
        }
        Command::Verify { file, word } => {
            let a = load_automaton(&file)?;
            let w: Word = word.parse().map_err(|e: partsync::AutomatonError| Failure::usage(e.to_string()))?;
            let ok = verify_reset_word(&a, &w).map_err(|e| Failure::usage(e.to_string()))?;
            writeln!(out, "{ok}")?;
            Ok(if ok { 0 } else { EXIT_NOT_SYNCHRONIZING })
        }
        Command::Experiment {
            config,
            kind,
            n_grid,
            k,
            samples,
            seed,
            cap,
            output,
        } => {
            let mut cfg = match (&config, &kind) {
                (Some(path), _) => {
                    ExperimentConfig::parse(&read(path)?).map_err(|e| Failure::usage(e.to_string()))?
                }
                (None, Some(_)) => {
                    ExperimentConfig::new(ExperimentKind::SyncProbability, Vec::new(), 1000, 0)
                }
                (None, None) => return Err(Failure::usage("need --config or --kind")),
            };
            if let Some(kind) = kind {
                cfg.kind = kind.parse().map_err(Failure::usage)?;
            }
            if let Some(g) = n_grid {
                cfg.n_grid = g;
            }
            if let Some(k) = k {
                cfg.k = k;
            }
            if let Some(s) = samples {
                cfg.samples = s;
            }
            if let Some(s) = seed {
                cfg.seed = s;
            }
            if let Some(c) = cap {
                cfg.cap = c;
            }
            if output.is_some() {
                cfg.output = output;
            }
            let rows = experiment::run(&cfg).map_err(|e| match e {
                ExperimentError::Disagreement(r) => Failure {
                    code: EXIT_NOT_SYNCHRONIZING,
                    msg: format!("cross-check failed, reproduce with {r}"),
                },
                other => Failure::usage(other.to_string()),
            })?;
            match &cfg.output {
                Some(path) => experiment::write_csv(&rows, fs::File::create(path)?)?,
                None => experiment::write_csv(&rows, &mut *out)?,
            }
            Ok(0)
        }
        Command::Pmf { n, of } => {
            if n == 0 {
                return Err(Failure::usage("need n >= 1"));
            }
            let pmf = match of {
                PmfKind::Zx => zx_pmf_exact(n),
                PmfKind::Undefined => undefined_count_pmf(n),
            };
            writeln!(out, "value,probability")?;
            for (v, p) in pmf.iter().enumerate() {
                writeln!(out, "{v},{p}")?;
            }
            Ok(0)
        }
    }
}

fn check(a: &PartialAutomaton, algo: Algo, cap: usize) -> Result<SyncReport, SyncError> {
    match algo {
        Algo::Exact => Ok(exact_sync(a, cap)),
        Algo::Bfs => match is_synchronizing_sc(a) {
            Err(SyncError::NotStronglyConnected) if a.is_complete() => is_synchronizing_complete(a),
            r => r,
        },
        Algo::Fast => fast_is_synchronizing_sc_with(a, &FastConfig::default()),
    }
}
