use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn partsync(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_partsync"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write_temp(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn exact_check_of_the_satisfiable_fixture_prints_a_reset_word() {
    let o = partsync(&["check", "--algo", "exact", fixture("psi1.aut").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("Synchronizing\nreset word: "), "{text}");
    let word = text.lines().nth(1).unwrap().trim_start_matches("reset word: ");
    assert_eq!(word.len(), 4);
}

#[test]
fn verify_accepts_the_assignment_word() {
    let o = partsync(&["verify", fixture("psi1.aut").to_str().unwrap(), "bbac"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "true\n");
    let o = partsync(&["verify", fixture("psi1.aut").to_str().unwrap(), "ab"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o), "false\n");
}

#[test]
fn unsatisfiable_fixture_checks_as_synchronizing() {
    // the construction admits a reset word even though the instance is
    // unsatisfiable
    let o = partsync(&["check", fixture("psi2.aut").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("reset word: daaac"));
}

#[test]
fn not_synchronizing_exits_with_one() {
    let dir = tempfile::tempdir().unwrap();
    // a 3-cycle and a transposition
    let f = write_temp(&dir, "perm.aut", "3 2\n2 3 1\n2 1 3\n");
    for algo in ["exact", "bfs", "fast"] {
        let o = partsync(&["check", "--algo", algo, &f]);
        assert_eq!(o.status.code(), Some(1), "{algo}");
        assert!(stdout(&o).starts_with("NotSynchronizing\ndeadlock pair: 1,2\n") || algo == "exact");
    }
}

#[test]
fn capped_search_exits_with_three() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_temp(&dir, "cerny.aut", "# Cerny automaton\n4 2\n2 3 4 1\n1 2 3 1\n");
    let o = partsync(&["check", "--cap", "3", &f]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).starts_with("Inconclusive"));
    let o = partsync(&["check", &f]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("reset word: baaabaaab"));
}

#[test]
fn usage_and_input_errors_exit_with_two() {
    assert_eq!(partsync(&[]).status.code(), Some(2));
    assert_eq!(partsync(&["check", "--algo", "magic", "x"]).status.code(), Some(2));
    let o = partsync(&["check", "/nonexistent/file"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty());
    let dir = tempfile::tempdir().unwrap();
    let bad = write_temp(&dir, "bad.aut", "2 1\n1 9\n");
    assert_eq!(partsync(&["check", &bad]).status.code(), Some(2));
    let not_sc = write_temp(&dir, "line.aut", "2 1\n2 0\n");
    assert_eq!(partsync(&["check", "--algo", "fast", &not_sc]).status.code(), Some(2));
    assert_eq!(partsync(&["verify", &not_sc, "z"]).status.code(), Some(2));
}

#[test]
fn reduce_reproduces_the_fixtures() {
    for name in ["psi1", "psi2"] {
        let o = partsync(&["reduce", fixture(&format!("{name}.cnf")).to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
        let expected = std::fs::read_to_string(fixture(&format!("{name}.aut"))).unwrap();
        assert_eq!(stdout(&o), expected);
    }
}

#[test]
fn reduce_to_two_letters_with_labels() {
    let dir = tempfile::tempdir().unwrap();
    let labels = dir.path().join("labels.tsv");
    let o = partsync(&[
        "reduce",
        "--letters",
        "2",
        "--labels",
        labels.to_str().unwrap(),
        fixture("psi1.cnf").to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("136 2\n"));
    let tsv = std::fs::read_to_string(labels).unwrap();
    assert_eq!(tsv.lines().count(), 136);
    assert_eq!(tsv.lines().next(), Some("1\tq1,1/a1"));
}

#[test]
fn gen_is_deterministic_and_writes_files() {
    let a = partsync(&["gen", "--n", "20", "--k", "3", "--seed", "5"]);
    let b = partsync(&["gen", "--n", "20", "--k", "3", "--seed", "5"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).starts_with("20 3\n"));
    let dir = tempfile::tempdir().unwrap();
    let o = partsync(&[
        "gen", "--n", "8", "--count", "3", "--sink", "--out-dir", dir.path().to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    for i in 0..3 {
        let p = dir.path().join(format!("aut-8-{i}.txt"));
        let o = partsync(&["check", "--algo", "fast", p.to_str().unwrap()]);
        assert!(matches!(o.status.code(), Some(0 | 1)));
    }
    assert_eq!(partsync(&["gen", "--n", "8", "--count", "2"]).status.code(), Some(2));
}

#[test]
fn analyze_reports_each_letter() {
    let o = partsync(&["analyze", fixture("psi1.aut").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows.len(), 5);
    assert!(rows[0].starts_with("letter,undefined,clusters,zx"));
    assert!(text.contains("reachable true"));
}

#[test]
fn experiment_from_config_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("rows.csv");
    let cfg = write_temp(
        &dir,
        "exp.cfg",
        &format!(
            "kind = fast-work-scaling\nn_grid = 16, 32\nsamples = 30\nseed = 4\noutput = {}\n",
            out.display()
        ),
    );
    assert_eq!(partsync(&["experiment", "--config", &cfg]).status.code(), Some(0));
    let first = std::fs::read_to_string(&out).unwrap();
    assert!(first.starts_with("kind,n,k,seed,metric,value,samples\n"));
    assert!(first.contains("fast-work-scaling,32,2,4,agreement,1,30"));
    let o = partsync(&["experiment", "--config", &cfg, "--output", "/dev/stdout"]);
    assert_eq!(stdout(&o), first);
}

#[test]
fn experiment_flags_and_cross_check_failure() {
    let o = partsync(&["experiment", "--kind", "min-subautomaton", "--n-grid", "50", "--samples", "20"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 4);
    // unsatisfiable instances synchronize, so the sweep aborts with a reproducer
    let o = partsync(&["experiment", "--kind", "reduction-sweep", "--n-grid", "2", "--samples", "50"]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("reproduce with kind=reduction-sweep"), "{err}");
    assert_eq!(partsync(&["experiment"]).status.code(), Some(2));
    assert_eq!(partsync(&["experiment", "--kind", "nope", "--n-grid", "4"]).status.code(), Some(2));
}

#[test]
fn pmf_prints_the_exact_distribution() {
    let o = partsync(&["pmf", "--n", "1", "--of", "undefined"]);
    assert_eq!(stdout(&o), "value,probability\n0,0.5\n1,0.5\n");
}
