//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero when any criterion fails. Pass criterion numbers as arguments
//! to run a subset, e.g. `cargo test --test acceptance -- 1 4`.

use std::time::{Duration, Instant};

use rand::Rng;

use polyctrl::cli;
use polyctrl::family::{
    for_each_exhaustive, random_hypergraph, random_pattern, rng_from_seed, PatternParams,
};
use polyctrl::numeric::{
    equilibrated_rank, explicit_controllability_matrix, strong_controllability,
};
use polyctrl::oracle::{
    brute_force_dilation, default_depth_cap, heads_into, individual_accessibility_closure,
    kalman_rank, lie_algebra_rank_at_origin, DEFAULT_CLOSURE_CAP,
};
use polyctrl::structural::{accessible_set, detect_dilation, structural_verdict};
use polyctrl::tensor::unfold;
use polyctrl::{
    DenseMatrix, DirectedHypergraph, Polysystem, SparseTensor, SparsityPattern, StructuralVerdict,
};

const TOL: f64 = 1e-10;
const SCALE: f64 = 1e3;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    summary: String,
}

fn outcome(pass: bool, summary: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        summary: summary.into(),
    }
}

fn secs(d: Duration) -> f64 {
    d.as_secs_f64()
}

// ---- dilation -------------------------------------------------------------

fn witness_holds(h: &DirectedHypergraph, w: &[usize]) -> bool {
    !w.is_empty() && heads_into(h, w) < w.len()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let (mut cases, mut mismatches, mut bad_witnesses) = (0usize, 0usize, 0usize);
    let mut check = |h: &DirectedHypergraph| {
        cases += 1;
        let fast = detect_dilation(h);
        let brute = brute_force_dilation(h).expect("desk scale");
        if fast.dilated != brute.dilated {
            mismatches += 1;
        }
        for w in [&fast.witness, &brute.witness].into_iter().flatten() {
            if !witness_holds(h, w) {
                bad_witnesses += 1;
            }
        }
        if fast.dilated && fast.witness.is_none() {
            bad_witnesses += 1;
        }
    };
    for_each_exhaustive(&mut check);
    let mut rng = rng_from_seed(0xD11A);
    for _ in 0..200 {
        check(&random_hypergraph(&mut rng, 8));
    }
    let elapsed = start.elapsed();
    outcome(
        mismatches == 0 && bad_witnesses == 0 && elapsed < Duration::from_secs(5),
        format!(
            "dilation oracle equivalence: {cases} hypergraphs, {mismatches} flag mismatches, \
             {bad_witnesses} invalid witnesses, {:.2} s (limit 5 s)",
            secs(elapsed)
        ),
    )
}

// ---- structural vs numeric -------------------------------------------------

/// Per-trial numeric verdicts for the cross-validation protocol, with
/// every realization scaled by `scale`.
fn cross_validation(scale: f64) -> Vec<(bool, Vec<bool>)> {
    let mut stream = rng_from_seed(0xC2);
    (0..100)
        .map(|_| {
            let params = PatternParams::random(&mut stream, 4, 4, 2, 6);
            let seed: u64 = stream.gen();
            let pat = random_pattern(&params, seed);
            let verdict = structural_verdict(&pat).controllable;
            let count = if verdict {
                cli::CONTROLLABLE_TRIALS
            } else {
                cli::UNCONTROLLABLE_TRIALS
            };
            let full: Vec<bool> = (0..count as u64)
                .map(|j| {
                    let sys = pat
                        .sample_realization(seed.wrapping_add(1 + j))
                        .scaled(scale);
                    strong_controllability(&sys, TOL)
                        .expect("small system")
                        .strongly_controllable
                })
                .collect();
            (verdict, full)
        })
        .collect()
}

fn agrees((verdict, full): &(bool, Vec<bool>)) -> bool {
    if *verdict {
        full.iter().any(|&f| f)
    } else {
        full.iter().all(|&f| !f)
    }
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let trials = cross_validation(1.0);
    let elapsed = start.elapsed();
    let agree = trials.iter().filter(|t| agrees(t)).count();
    let controllable = trials.iter().filter(|t| t.0).count();
    outcome(
        agree == trials.len() && elapsed < Duration::from_secs(60),
        format!(
            "structural vs numeric: {agree}/{} patterns agree ({controllable} structurally controllable), \
             {:.2} s (limit 60 s)",
            trials.len(),
            secs(elapsed)
        ),
    )
}

fn linear_patterns() -> Vec<(SparsityPattern, u64)> {
    let mut stream = rng_from_seed(0xC3);
    (0..50)
        .map(|_| {
            let params = PatternParams::random(&mut stream, 6, 2, 2, 10);
            let seed: u64 = stream.gen();
            (random_pattern(&params, seed), seed)
        })
        .collect()
}

/// Kalman rank of the sampled linear realization, as a full-rank flag.
fn linear_verdicts(scale: f64) -> Vec<(bool, bool, bool)> {
    linear_patterns()
        .iter()
        .map(|(pat, seed)| {
            let h = polyctrl::build_hypergraph(pat);
            let conjunction =
                !detect_dilation(&h).dilated && accessible_set(&h).len() == h.vertex_count();
            let verdict = StructuralVerdict::of_hypergraph(&h).controllable;
            let sys = pat.sample_realization(*seed).scaled(scale);
            let a = unfold(sys.tensor()).expect("small tensor");
            let kalman = kalman_rank(&a, sys.control(), TOL).expect("matching shapes") == pat.dim();
            (verdict, conjunction, kalman)
        })
        .collect()
}

fn criterion_3() -> Outcome {
    let rows = linear_verdicts(1.0);
    let agree = rows.iter().filter(|(v, c, k)| v == c && c == k).count();
    outcome(
        agree == rows.len(),
        format!(
            "linear case vs Kalman rank: {agree}/{} three-way agreements",
            rows.len()
        ),
    )
}

fn seeded_systems(seed: u64, count: usize, max_n: usize) -> Vec<Polysystem> {
    let mut stream = rng_from_seed(seed);
    (0..count)
        .map(|_| {
            let params = PatternParams::random(&mut stream, max_n, 4, 2, 6);
            let s: u64 = stream.gen();
            random_pattern(&params, s).sample_realization(s.wrapping_add(1))
        })
        .collect()
}

fn explicit_vs_reduced(scale: f64) -> Vec<(usize, usize)> {
    seeded_systems(0xC4, 20, 3)
        .iter()
        .map(|sys| {
            let sys = sys.scaled(scale);
            let reduced = strong_controllability(&sys, TOL).expect("small").rank;
            let explicit = explicit_controllability_matrix(&sys, sys.n()).expect("desk scale");
            (reduced, equilibrated_rank(&explicit, TOL))
        })
        .collect()
}

fn criterion_4() -> Outcome {
    let rows = explicit_vs_reduced(1.0);
    let agree = rows.iter().filter(|(a, b)| a == b).count();
    outcome(
        agree == rows.len(),
        format!(
            "reduced vs explicit controllability matrix: {agree}/{} ranks agree",
            rows.len()
        ),
    )
}

// ---- Lie algebra ------------------------------------------------------------

fn named(k: usize, n: usize, tensor: &[(&[usize], f64)], control: &[&[f64]]) -> Polysystem {
    let t = SparseTensor::from_entries(k, n, tensor.iter().map(|(i, v)| (i.to_vec(), *v)))
        .expect("fixture");
    Polysystem::checked(t, DenseMatrix::from_rows(control)).expect("fixture")
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let mut systems = vec![
        (
            "cube",
            named(4, 2, &[(&[0, 0, 0, 1], 1.0)], &[&[1.0], &[0.0]]),
        ),
        (
            "inaccessible",
            named(4, 2, &[(&[0, 0, 0, 0], 1.0)], &[&[1.0], &[0.0]]),
        ),
        ("dilated", named(4, 2, &[], &[&[1.0], &[1.0]])),
    ];
    for (i, s) in seeded_systems(0xC5, 6, 3).into_iter().enumerate() {
        systems.push((["s1", "s2", "s3", "s4", "s5", "s6"][i], s));
    }
    let chain = named(2, 2, &[(&[0, 1], 1.0)], &[&[1.0], &[0.0]]);
    let chain_rank = strong_controllability(&chain, TOL).expect("small").rank;

    let mut failures = Vec::new();
    for (name, sys) in &systems {
        let numeric = strong_controllability(sys, TOL).expect("small").rank == sys.n();
        let lie = lie_algebra_rank_at_origin(sys, default_depth_cap(sys.n(), sys.k()))
            .expect("desk scale");
        if (lie.rank == sys.n()) != numeric || !lie.saturated {
            failures.push(format!(
                "{name} (lie {}/{}, numeric full {numeric}, saturated {})",
                lie.rank,
                sys.n(),
                lie.saturated
            ));
        }
    }
    let elapsed = start.elapsed();
    outcome(
        failures.is_empty() && chain_rank == 2 && elapsed < Duration::from_secs(30),
        format!(
            "Lie rank vs numeric rank: {}/{} systems consistent and saturated, chain (linear, numeric only) rank {chain_rank}/2, \
             {:.2} s (limit 30 s){}",
            systems.len() - failures.len(),
            systems.len(),
            secs(elapsed),
            if failures.is_empty() { String::new() } else { format!("; failing: {}", failures.join(", ")) }
        ),
    )
}

// ---- individual accessibility audit ------------------------------------------

fn criterion_6() -> Outcome {
    let (mut cases, mut hypothesis, mut forward_bad, mut reverse_bad, mut truncated) =
        (0, 0, 0, 0, 0);
    let mut forward_examples = Vec::new();
    let mut reverse_examples = Vec::new();
    for_each_exhaustive(|h| {
        cases += 1;
        let verdict = StructuralVerdict::of_hypergraph(h);
        let closure = individual_accessibility_closure(h, DEFAULT_CLOSURE_CAP).expect("desk scale");
        truncated += usize::from(closure.truncated);
        let all_individual = closure.individually_accessible.len() == h.n();
        if verdict.controllable {
            hypothesis += 1;
            if !all_individual {
                forward_bad += 1;
                if forward_examples.len() < 3 {
                    forward_examples.push(h.to_string().replace('\n', "; "));
                }
            }
        } else if all_individual {
            reverse_bad += 1;
            if reverse_examples.len() < 3 {
                reverse_examples.push(h.to_string().replace('\n', "; "));
            }
        }
    });
    println!("  reverse audit: {reverse_bad} of {} structurally uncontrollable hypergraphs have every vertex individually accessible", cases - hypothesis);
    for e in &reverse_examples {
        println!("    reverse counterexample: {e}");
    }
    for e in &forward_examples {
        println!("    forward counterexample: {e}");
    }
    outcome(
        forward_bad == 0,
        format!(
            "individual accessibility audit: forward implication fails on {forward_bad}/{hypothesis} \
             accessible non-dilated hypergraphs ({cases} total, {truncated} closures truncated)"
        ),
    )
}

// ---- determinism and scaling -----------------------------------------------

fn run_cli(args: &[&str], stdin: &str) -> cli::RunOutcome {
    let mut argv = vec!["polyctrl"];
    argv.extend_from_slice(args);
    cli::run(argv, &mut stdin.as_bytes())
}

fn criterion_7() -> Outcome {
    let generated = run_cli(
        &["gen", "--n", "3", "--k", "4", "--m", "2", "--seed", "11"],
        "",
    )
    .stdout;
    let runs: [(&[&str], &str); 5] = [
        (
            &["--json", "analyze", "--numeric", "--seed", "5"],
            &generated,
        ),
        (&["--json", "rank", "--seed", "5"], &generated),
        (&["--json", "dilation"], &generated),
        (&["--json", "lie-rank", "--seed", "5"], &generated),
        (&["--json", "validate", "--trials", "25", "--seed", "9"], ""),
    ];
    let mut nondeterministic = Vec::new();
    for (args, input) in runs {
        let a = run_cli(args, input);
        let b = run_cli(args, input);
        if a != b || a.code != 0 {
            nondeterministic.push(args.join(" "));
        }
    }

    let c2_flips = cross_validation(1.0)
        .iter()
        .zip(cross_validation(SCALE).iter())
        .filter(|(a, b)| a != b)
        .count();
    let c3_flips = linear_verdicts(1.0)
        .iter()
        .zip(linear_verdicts(SCALE).iter())
        .filter(|(a, b)| a != b)
        .count();
    let c4_flips = explicit_vs_reduced(1.0)
        .iter()
        .zip(explicit_vs_reduced(SCALE).iter())
        .filter(|((a, b), (c, d))| (a == b) != (c == d) || a != c)
        .count();
    outcome(
        nondeterministic.is_empty() && c2_flips + c3_flips + c4_flips == 0,
        format!(
            "determinism and scaling: {} non-identical repeated reports, verdict flips under x{SCALE:e} scaling: \
             {c2_flips} (cross-validation), {c3_flips} (linear), {c4_flips} (explicit matrix)",
            nondeterministic.len()
        ),
    )
}

fn main() {
    let filters: Vec<String> = std::env::args()
        .skip(1)
        .filter(|a| !a.starts_with('-'))
        .collect();
    let criteria: [Criterion; 7] = [
        ("1", criterion_1),
        ("2", criterion_2),
        ("3", criterion_3),
        ("4", criterion_4),
        ("5", criterion_5),
        ("6", criterion_6),
        ("7", criterion_7),
    ];
    let mut failed = 0;
    for (id, f) in criteria {
        if !filters.is_empty() && !filters.iter().any(|x| x == id) {
            continue;
        }
        let o = f();
        println!(
            "{} criterion {id}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            o.summary
        );
        failed += usize::from(!o.pass);
    }
    if failed > 0 {
        println!("{failed} criterion(s) failed");
        std::process::exit(1);
    }
}
