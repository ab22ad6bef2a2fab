//! Per-instance diagnostics for dense solves: pair counts, conflict counts,
//! elimination reasons at the stuck conflict, progress through the list.
//!
//! Usage: cargo run --example diagnose [n m density seeds epsilon theta]

use lcube_core::engine::{build_swap_plan, find_permutation, Elimination, SolverParams};
use lcube_core::forbidden::conflicts;
use lcube_core::ForbiddenCube;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let n: usize = args.get(1).map(|v| v.parse().unwrap()).unwrap_or(16);
    let m: usize = args.get(2).map(|v| v.parse().unwrap()).unwrap_or(1);
    let density: f64 = args.get(3).map(|v| v.parse().unwrap()).unwrap_or(1.0);
    let seeds: u64 = args.get(4).map(|v| v.parse().unwrap()).unwrap_or(20);
    let epsilon: f64 = args.get(5).map(|v| v.parse().unwrap()).unwrap_or(1.0);
    let theta: f64 = args.get(6).map(|v| v.parse().unwrap()).unwrap_or(1.0);
    let t = n.trailing_zeros();

    let mut ok = 0;
    for seed in 0..seeds {
        let a = ForbiddenCube::random(n, m, density, seed).unwrap();
        let params = SolverParams {
            epsilon,
            theta,
            seed,
            ..SolverParams::default()
        };
        let search = find_permutation(t, &a, &params).unwrap();
        let conflict_count = conflicts(search.cube.cube(), &a).unwrap().len();
        match build_swap_plan(&search.cube, &a, &params) {
            Ok((plan, ledger)) => {
                ok += 1;
                println!(
                    "seed={seed} pairs={} conflicts={conflict_count} plan=ok len={} used={}",
                    a.pair_count(),
                    plan.len(),
                    ledger.used_cells()
                );
            }
            Err(stuck) => {
                let mut blocks = 0;
                let mut lines = 0;
                let mut confl = 0;
                let mut used = 0;
                let mut not_allowed = 0;
                for (_, reason) in &stuck.eliminations {
                    match reason {
                        Elimination::BlockOverloaded(_) => blocks += 1,
                        Elimination::LineOverloaded(_) => lines += 1,
                        Elimination::ConflictCell(_) => confl += 1,
                        Elimination::UsedCell(_) => used += 1,
                        Elimination::NotAllowed => not_allowed += 1,
                    }
                }
                println!(
                    "seed={seed} pairs={} conflicts={conflict_count} stuck at {} \
                     [blocks={blocks} lines={lines} conflict={confl} used={used} disallowed={not_allowed}]",
                    a.pair_count(),
                    stuck.conflict,
                );
            }
        }
    }
    println!("plans completed: {ok}/{seeds}");
}
