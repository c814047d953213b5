use partsync::exact::subset_search;
use partsync::experiment::{check_reduction, sweep_instance};
use partsync::random_model::instance_seed;
use partsync::sat::*;
use partsync::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn fixture(name: &str) -> String {
    let path = format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"))
}

/// All nonempty clauses over `n` variables, tautologies included.
fn all_clauses(n: usize) -> Vec<Clause> {
    let mut out = Vec::new();
    for mut code in 1..3u32.pow(n as u32) {
        let mut c = Clause::new();
        for v in 1..=n as u32 {
            match code % 3 {
                1 => {
                    c.insert(Literal::pos(v));
                }
                2 => {
                    c.insert(Literal::neg(v));
                }
                _ => {}
            }
            code /= 3;
        }
        out.push(c);
    }
    // clauses with both signs of a variable
    for v in 1..=n as u32 {
        out.push(Clause::from([Literal::pos(v), Literal::neg(v)]));
    }
    out
}

#[test]
fn fixtures_parse_to_the_worked_instances() {
    assert_eq!(parse_dimacs(&fixture("psi1.cnf")).unwrap(), psi1());
    assert_eq!(parse_dimacs(&fixture("psi2.cnf")).unwrap(), psi2());
}

#[test]
fn fixture_automata_match_the_construction() {
    for (cnf, aut) in [("psi1.cnf", "psi1.aut"), ("psi2.cnf", "psi2.aut")] {
        let built = build_4letter(&parse_dimacs(&fixture(cnf)).unwrap()).unwrap();
        let shipped = PartialAutomaton::parse(&fixture(aut)).unwrap();
        assert_eq!(built.automaton, shipped, "{aut}");
    }
}

#[test]
fn normalization_preserves_satisfiability() {
    for n in 1..=2 {
        let clauses = all_clauses(n);
        for mask in 0u32..1 << clauses.len() {
            let psi = CnfInstance {
                n_vars: n,
                clauses: (0..clauses.len())
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| clauses[i].clone())
                    .collect(),
            };
            let norm = normalize(&psi);
            assert!(norm.is_normalized(), "{psi}");
            assert_eq!(norm.is_satisfiable(), psi.is_satisfiable(), "{psi}");
        }
    }
    let clauses = all_clauses(3);
    for i in 0..clauses.len() {
        for j in i..clauses.len() {
            for l in j..clauses.len() {
                let psi = CnfInstance {
                    n_vars: 3,
                    clauses: vec![clauses[i].clone(), clauses[j].clone(), clauses[l].clone()],
                };
                let norm = normalize(&psi);
                assert!(norm.is_normalized());
                assert_eq!(norm.is_satisfiable(), psi.is_satisfiable(), "{psi}");
            }
        }
    }
}

#[test]
fn assignment_words_reset_exactly_for_satisfying_assignments() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..200 {
        let n = rng.random_range(1..=5);
        let psi = random_cnf(n, n + 1, &mut rng);
        let tau: Vec<bool> = (0..n).map(|_| rng.random()).collect();
        let a = build_4letter(&psi).unwrap();
        let w = assignment_to_word(&tau);
        assert_eq!(w.len(), n + 1);
        assert_eq!(
            verify_reset_word(&a.automaton, &w).unwrap(),
            psi.satisfied_by(&tau),
            "{psi} {tau:?}"
        );
    }
    assert_eq!(assignment_to_word(&[true, true]).to_string(), "aac");
}

#[test]
fn built_automata_have_the_stated_size_and_are_reachable() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..300 {
        let n = rng.random_range(1..=6);
        let m = rng.random_range(1..=9);
        let r = reduce(&random_cnf(n, m, &mut rng));
        let (n, m) = (r.meta.n_vars, r.meta.n_clauses);
        assert_eq!(m, n + 1);
        assert_eq!(r.automaton.n(), m * (n + 1) + m * (m + 1) / 2 + 2 * (n + 1));
        assert!(is_reachable(&r.automaton));
    }
}

#[test]
fn satisfiable_instances_give_synchronizing_automata() {
    for n in 2..=3 {
        for i in 0..100 {
            let psi = sweep_instance(n, instance_seed(1, n, i));
            let c = check_reduction(&psi, DEFAULT_SUBSET_CAP);
            if c.sat {
                assert_eq!(c.sync4, Verdict::Synchronizing, "{psi}");
                assert_eq!(c.sync2, Verdict::Synchronizing, "{psi}");
            }
        }
    }
}

#[test]
fn both_automata_have_the_same_verdict() {
    for n in 2..=3 {
        for i in 0..100 {
            let psi = sweep_instance(n, instance_seed(1, n, i));
            let c = check_reduction(&psi, DEFAULT_SUBSET_CAP);
            assert_ne!(c.sync4, Verdict::Inconclusive);
            assert_eq!(c.sync4, c.sync2, "{psi}");
        }
    }
}

#[test]
fn column_one_g_pair_of_the_unsatisfiable_example_cannot_merge() {
    let r = build_4letter(&psi2()).unwrap();
    let t = [r.state("g0,1").unwrap(), r.state("g1,1").unwrap()];
    let rep = subset_search(&r.automaton, &t, DEFAULT_SUBSET_CAP);
    assert_eq!(rep.verdict, Verdict::NotSynchronizing);
}

#[test]
fn two_letter_automaton_simulates_on_the_first_layer() {
    // from states (q, a1), an encoded word acts like the original word
    let r = build_4letter(&psi1()).unwrap();
    let b = build_2letter(&r.automaton).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..500 {
        let len = rng.random_range(0..8);
        let w: Word = (0..len).map(|_| rng.random_range(0..4usize)).collect();
        let e = encode_word(&w);
        assert_eq!(decode_word(&e).unwrap(), w);
        for q in r.automaton.states() {
            let expect = r.automaton.apply(q, &w).map(|t| pair_state(t, 0));
            assert_eq!(b.apply(pair_state(q, 0), &e), expect);
        }
    }
}
