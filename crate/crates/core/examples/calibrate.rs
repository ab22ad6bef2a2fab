//! Threshold calibration sweep: success rates of the solver on dense
//! random instances for a grid of overload thresholds.
//!
//! Usage: cargo run --example calibrate [n m density seeds]

use lcube_core::engine::{solve, SolverParams};
use lcube_core::ForbiddenCube;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let n: usize = args.get(1).map(|v| v.parse().unwrap()).unwrap_or(16);
    let m: usize = args.get(2).map(|v| v.parse().unwrap()).unwrap_or(1);
    let density: f64 = args.get(3).map(|v| v.parse().unwrap()).unwrap_or(1.0);
    let seeds: u64 = args.get(4).map(|v| v.parse().unwrap()).unwrap_or(100);

    for (epsilon, theta) in [
        (0.25, 0.25),
        (0.375, 0.375),
        (0.5, 0.5),
        (0.625, 0.625),
        (0.75, 0.75),
        (0.875, 0.875),
        (0.75, 0.5),
        (0.5, 0.75),
    ] {
        let mut solved = 0usize;
        let mut restarts_total = 0usize;
        let start = std::time::Instant::now();
        for seed in 0..seeds {
            let a = ForbiddenCube::random(n, m, density, seed).unwrap();
            let params = SolverParams {
                epsilon,
                theta,
                seed,
                ..SolverParams::default()
            };
            match solve(&a, &params) {
                Ok(solution) => {
                    solved += 1;
                    restarts_total += solution.restarts_used;
                }
                Err(_) => restarts_total += params.max_restarts,
            }
        }
        println!(
            "epsilon={epsilon} theta={theta}: solved {solved}/{seeds}, avg restarts {:.2}, {:?}",
            restarts_total as f64 / seeds as f64,
            start.elapsed()
        );
    }
}
