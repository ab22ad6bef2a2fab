use lcube_core::forbidden::ForbiddenCube;
use lcube_core::oracle::{decide_avoidable, OracleOutcome};

fn main() {
    let start = std::time::Instant::now();
    let a = ForbiddenCube::unavoidable_half(2).unwrap();
    println!("n=2: {:?} {:?}", decide_avoidable(&a, u64::MAX), start.elapsed());
    let start = std::time::Instant::now();
    let a = ForbiddenCube::unavoidable_half(4).unwrap();
    let out = decide_avoidable(&a, u64::MAX);
    match &out {
        OracleOutcome::Avoidable(_) => println!("n=4: avoidable?! {:?}", start.elapsed()),
        other => println!("n=4: {other:?} {:?}", start.elapsed()),
    }
    // An avoidable n=4 instance for contrast.
    let start = std::time::Instant::now();
    let a = ForbiddenCube::random(4, 1, 0.5, 3).unwrap();
    let out = decide_avoidable(&a, 100_000_000);
    match &out {
        OracleOutcome::Avoidable(w) => println!("n=4 random: avoidable, valid={} {:?}", w.validate().is_ok(), start.elapsed()),
        other => println!("n=4 random: {other:?} {:?}", start.elapsed()),
    }
}
