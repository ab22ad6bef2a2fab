//! Acceptance suite: one test per criterion, each printing a pass line on
//! success (run with `--nocapture` to see them) and failing with a measured
//! message otherwise.
//!
//! `criterion_08_end_to_end_density_one` runs a workload outside the regime
//! the greedy disjoint-cover construction can serve (see its failure
//! message); it is kept as specified rather than weakened, and the attainable
//! baseline lives in `criterion_08_supplement_end_to_end_baseline`.

use std::time::{Duration, Instant};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use lcube_core::bounds::{feasible, lemma2_margin, lemma2_margin_f64, BoundsParams};
use lcube_core::engine::{solve, SolverParams};
use lcube_core::forbidden::conflicts;
use lcube_core::oracle::{decide_avoidable, enumerate_avoiders, OracleOutcome};
use lcube_core::structure::{
    block_members, check_property, swap, three_cube_from_pair, three_cubes_through, BlockId,
    CheckMode, PropertyId, SymbolSetAxis, BLOCK_FAMILIES,
};
use lcube_core::{
    Cell, ForbiddenCube, LatinCube, PermutationQuadruple, StructuredCube,
};

fn finish(criterion: u32, name: &str, start: Instant, budget: Duration) {
    let elapsed = start.elapsed();
    assert!(
        elapsed < budget,
        "criterion {criterion} ({name}): took {elapsed:?}, budget {budget:?}"
    );
    println!("acceptance criterion {criterion} ({name}): pass in {elapsed:?}");
}

#[test]
fn criterion_01_boolean_construction() {
    let start = Instant::now();
    for t in 1..=6 {
        let cube = LatinCube::boolean(t).unwrap();
        let report = cube.validate();
        assert!(report.is_ok(), "boolean({t}) invalid: {report}");
    }
    finish(1, "boolean construction", start, Duration::from_secs(1));
}

#[test]
fn criterion_02_three_cube_counts() {
    let start = Instant::now();
    for t in [2u32, 3] {
        let sc = StructuredCube::boolean(t).unwrap();
        let report = check_property(&sc, PropertyId::P4, CheckMode::Exhaustive, 2).unwrap();
        assert!(report.pass, "t={t}: {report}");
    }
    for t in [4u32, 5, 6] {
        let sc = StructuredCube::boolean(t).unwrap();
        let report =
            check_property(&sc, PropertyId::P4, CheckMode::Sampled { samples: 1000 }, t as u64)
                .unwrap();
        assert!(report.pass, "t={t}: {report}");
    }
    finish(2, "cells lie in n-1 3-cubes", start, Duration::from_secs(10));
}

#[test]
fn criterion_03_intersection_census() {
    let start = Instant::now();
    let sc = StructuredCube::boolean(2).unwrap();
    let report = check_property(&sc, PropertyId::P6, CheckMode::Exhaustive, 3).unwrap();
    assert!(report.pass, "{report}");
    finish(3, "3-cube intersections in {0,1,8}", start, Duration::from_secs(5));
}

#[test]
fn criterion_04_swap_soundness() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for t in [3u32, 4, 5] {
        let swaps = 10_000 / 3 + 1;
        let n = 1usize << t;
        let sc = StructuredCube::new(t, PermutationQuadruple::random(n, &mut rng)).unwrap();
        for _ in 0..swaps {
            let cell = Cell::from_flat(rng.random_range(0..n * n * n), n);
            let mut j2 = rng.random_range(0..n - 1);
            if j2 >= cell.j {
                j2 += 1;
            }
            let tc = three_cube_from_pair(&sc, cell, j2).unwrap();
            let mut cube = sc.cube().clone();
            swap(&mut cube, &tc).unwrap();
            assert!(cube.validate().is_ok(), "swap broke Latin property");
            swap(&mut cube, &tc).unwrap();
            assert_eq!(&cube, sc.cube(), "double swap is not the identity");
        }
    }
    finish(4, "swap soundness", start, Duration::from_secs(10));
}

#[test]
fn criterion_05_structure_partitions() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for t in [2u32, 3] {
        let n = 1usize << t;
        for _ in 0..20 {
            let sc = StructuredCube::new(t, PermutationQuadruple::random(n, &mut rng)).unwrap();
            // Every block family partitions the n^3 cells into n blocks of
            // n^2 cells.
            for family in BLOCK_FAMILIES {
                let mut seen = vec![false; n * n * n];
                for index in 0..n {
                    let members = block_members(&sc, BlockId { family, index }).unwrap();
                    assert_eq!(members.len(), n * n, "{family} {index}");
                    for cell in members {
                        assert!(!seen[cell.flat(n)], "{family}: overlapping blocks");
                        seen[cell.flat(n)] = true;
                    }
                }
                assert!(seen.iter().all(|&s| s), "{family}: cells uncovered");
            }
            // Transversal-sets: the three defining conditions, including a
            // common 3-cube for every pair.
            let mut covered = vec![false; n * n * n];
            for c in 0..n {
                for d in 0..n {
                    let cells = lcube_core::structure::transversal_set(&sc, c, d).unwrap();
                    assert_eq!(cells.len(), n);
                    for (ai, a) in cells.iter().enumerate() {
                        assert!(!covered[a.flat(n)]);
                        covered[a.flat(n)] = true;
                        for b in &cells[ai + 1..] {
                            assert!(a.i != b.i && a.j != b.j && a.k != b.k);
                            assert_ne!(sc.get_cell(*a), sc.get_cell(*b));
                            let tc = three_cube_from_pair(&sc, *a, b.j).unwrap();
                            assert!(tc.contains(*b), "pair without a common 3-cube");
                        }
                    }
                }
            }
            assert!(covered.iter().all(|&s| s));
            // Symbol-sets are monochromatic.
            for axis in [SymbolSetAxis::Row, SymbolSetAxis::Column, SymbolSetAxis::File] {
                for layer in 0..n {
                    for block in 0..n {
                        let cells =
                            lcube_core::structure::symbol_set(&sc, axis, layer, block).unwrap();
                        let s = sc.get_cell(cells[0]);
                        assert!(cells.iter().all(|&c| sc.get_cell(c) == s));
                    }
                }
            }
        }
    }
    finish(5, "structure partitions", start, Duration::from_secs(20));
}

#[test]
fn criterion_06_bounds_reproduction() {
    let start = Instant::now();
    let p = BoundsParams::paper();
    let at30 = feasible(&p, 30).unwrap();
    assert!(at30.lemma1_ok && at30.lemma2_ok, "t=30 must be feasible");
    let at25 = feasible(&p, 25).unwrap();
    assert!(!at25.lemma1_ok, "t=25 must fail the counting inequality");
    use num_traits::Signed;
    assert!(lemma2_margin(&p, 5).unwrap().is_negative(), "margin(32) < 0");
    assert!(lemma2_margin(&p, 30).unwrap().is_positive(), "margin(2^30) > 0");
    for t in 1..=40u32 {
        use num_traits::ToPrimitive;
        let exact = lemma2_margin(&p, t).unwrap().to_f64().unwrap();
        let float = lemma2_margin_f64(&p, t);
        assert!(
            (exact - float).abs() <= 1e-9 * exact.abs().max(1.0),
            "t={t}: exact {exact} vs float {float}"
        );
    }
    finish(6, "bounds reproduction", start, Duration::from_secs(1));
}

#[test]
fn criterion_07_oracle_ground_truth() {
    let start = Instant::now();
    for n in [2usize, 4] {
        let a = ForbiddenCube::unavoidable_half(n).unwrap();
        assert_eq!(
            decide_avoidable(&a, 100_000_000),
            OracleOutcome::Unavoidable,
            "half construction at n={n}"
        );
    }
    let empty = ForbiddenCube::new(2, 1).unwrap();
    let avoiders = enumerate_avoiders(&empty, 100).unwrap();
    assert_eq!(avoiders.len(), 2);
    for witness in &avoiders {
        assert!(witness.validate().is_ok());
        assert!(conflicts(witness, &empty).unwrap().is_empty());
    }
    // Witnesses from decided instances verify too.
    for seed in 0..5u64 {
        let a = ForbiddenCube::random(4, 1, 0.5, seed).unwrap();
        if let OracleOutcome::Avoidable(witness) = decide_avoidable(&a, 100_000_000) {
            assert!(witness.validate().is_ok());
            assert!(conflicts(&witness, &a).unwrap().is_empty());
        } else {
            panic!("sparse random n=4 instance unexpectedly not avoidable");
        }
    }
    finish(7, "oracle ground truth", start, Duration::from_secs(60));
}

/// Shared driver for the end-to-end runs: solves `seeds` instances of
/// (n=16, m=1, `density`) with default desk parameters and full per-solution
/// verification, returning the number solved within the restart budget.
fn end_to_end(density: f64, seeds: u64) -> usize {
    let mut solved = 0;
    for seed in 0..seeds {
        let a = ForbiddenCube::random(16, 1, density, seed).unwrap();
        let params = SolverParams::default().with_seed(seed);
        if let Ok(solution) = solve(&a, &params) {
            assert!(solution.cube.validate().is_ok(), "invalid cube accepted");
            assert!(
                conflicts(&solution.cube, &a).unwrap().is_empty(),
                "conflicting cube accepted"
            );
            solved += 1;
        }
    }
    solved
}

#[test]
fn criterion_08_end_to_end_density_one() {
    let start = Instant::now();
    let solved = end_to_end(1.0, 100);
    let elapsed = start.elapsed();
    assert!(
        elapsed < Duration::from_secs(300),
        "took {elapsed:?}, budget 300s"
    );
    assert!(
        solved >= 95,
        "criterion 8 (end-to-end at n=16, m=1, density 1.0): {solved}/100 solved within \
         20 restarts, need >= 95. At this density roughly 190-210 of the 4096 cells \
         conflict under any sampled permutation; covering each conflict needs its own \
         8 disjoint cells (~40% of the cube), and the one-pass greedy selection with \
         global restarts dies on the used/conflict side-cell condition even with the \
         overload thresholds fully relaxed. The attainable regression baseline for this \
         pipeline is recorded at density 0.25 in \
         criterion_08_supplement_end_to_end_baseline."
    );
    finish(8, "end-to-end solving, density 1.0", start, Duration::from_secs(300));
}

#[test]
fn criterion_08_supplement_end_to_end_baseline() {
    // Regression baseline in the regime the construction serves: same
    // instance family at density 0.25.
    let start = Instant::now();
    let solved = end_to_end(0.25, 100);
    assert!(
        solved >= 95,
        "end-to-end baseline at density 0.25: {solved}/100 solved, need >= 95"
    );
    finish(
        8,
        "end-to-end baseline, density 0.25 (supplement)",
        start,
        Duration::from_secs(300),
    );
}

#[test]
fn criterion_09_plan_invariants() {
    use lcube_core::engine::verify_plan;
    let start = Instant::now();
    // Default-threshold builds at the attainable density.
    let mut successes = 0;
    for seed in 0..40u64 {
        let a = ForbiddenCube::random(16, 1, 0.25, seed).unwrap();
        let params = SolverParams::default().with_seed(seed);
        if let Ok(solution) = solve(&a, &params) {
            successes += 1;
            verify_plan(&solution.base, &a, &solution.plan).unwrap();
            assert!(
                solution.ledger.matches_recount(&solution.base, &solution.plan),
                "ledger recount mismatch"
            );
            assert_eq!(solution.ledger.used_cells(), 8 * solution.plan.len());
            assert_eq!(
                solution.plan.len(),
                conflicts(solution.base.cube(), &a).unwrap().len(),
                "one 3-cube per conflict"
            );
        }
    }
    assert!(successes >= 38, "only {successes}/40 builds to verify");
    // Strict-threshold runs: the post-build usage bound
    // 2 kappa n + epsilon n + 1 holds on every line.
    let mut strict_successes = 0;
    for seed in 0..25u64 {
        let a = ForbiddenCube::random(16, 1, 0.05, seed).unwrap();
        let params = SolverParams {
            strict_thresholds: true,
            ..SolverParams::default()
        }
        .with_seed(seed);
        if let Ok(solution) = solve(&a, &params) {
            strict_successes += 1;
            verify_plan(&solution.base, &a, &solution.plan).unwrap();
            assert!(solution.ledger.matches_recount(&solution.base, &solution.plan));
            let n = 16f64;
            let bound = 2.0 * params.kappa * n + params.epsilon * n + 1.0;
            assert!(
                (solution.ledger.max_line_used() as f64) <= bound,
                "strict run: a line holds {} used cells, bound {bound}",
                solution.ledger.max_line_used()
            );
        }
    }
    assert!(
        strict_successes >= 20,
        "only {strict_successes}/25 strict builds to verify"
    );
    finish(9, "plan and ledger invariants", start, Duration::from_secs(120));
}

#[test]
fn criterion_10_solver_oracle_agreement() {
    let start = Instant::now();
    let mut solver_ok = 0;
    let mut oracle_unavoidable = 0;
    for seed in 0..50u64 {
        let a = ForbiddenCube::random(4, 1, 0.5, seed).unwrap();
        let params = SolverParams {
            max_restarts: 20,
            permutation_samples: 32,
            ..SolverParams::default()
        }
        .with_seed(seed);
        let solver = solve(&a, &params);
        let oracle = decide_avoidable(&a, 100_000_000);
        match (&solver, &oracle) {
            (Ok(solution), OracleOutcome::Avoidable(_)) => {
                solver_ok += 1;
                assert!(conflicts(&solution.cube, &a).unwrap().is_empty());
            }
            (Ok(_), OracleOutcome::Unavoidable) => {
                panic!("solver produced a verified cube for an unavoidable instance")
            }
            (Err(_), OracleOutcome::Unavoidable) => oracle_unavoidable += 1,
            (Err(_), OracleOutcome::Avoidable(_)) => {
                // The randomized engine may exhaust its budget on avoidable
                // instances; only false successes are forbidden.
            }
            (_, OracleOutcome::BudgetExceeded { .. }) => {
                panic!("oracle budget exceeded on an n=4 instance")
            }
        }
    }
    // Known-unavoidable instances must exhaust the solver, never succeed.
    for n in [2usize, 4] {
        let a = ForbiddenCube::unavoidable_half(n).unwrap();
        assert_eq!(decide_avoidable(&a, 100_000_000), OracleOutcome::Unavoidable);
        let params = SolverParams {
            max_restarts: 10,
            permutation_samples: 16,
            ..SolverParams::default()
        };
        assert!(
            solve(&a, &params).is_err(),
            "solver claimed success on the unavoidable half construction (n={n})"
        );
        oracle_unavoidable += 1;
    }
    println!(
        "criterion 10 detail: solver successes {solver_ok}, oracle-unavoidable cases {oracle_unavoidable}"
    );
    finish(10, "solver-oracle agreement", start, Duration::from_secs(120));
}
