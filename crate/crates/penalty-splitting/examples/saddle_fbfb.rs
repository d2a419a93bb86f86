//! Two-forward-step scheme on a problem whose single-valued part is skew:
//!
//!     0 ∈ (x − a) + Kx,    K = [[0, 1], [−1, 0]],  a = (1, 0).
//!
//! K is monotone and 1-Lipschitz but not cocoercive, so the one-forward-step
//! scheme refuses it and the Tseng-style double forward step takes over.
//! The unique zero solves (I + K)x = a, here (0.5, 0.5). Run with
//!
//!     cargo run --example saddle_fbfb

use penalty_splitting::benchmarks::{self, BenchmarkProblem};
use penalty_splitting::diagnostics::ErgodicAverager;
use penalty_splitting::problem::RunOptions;
use penalty_splitting::schedules::StepSchedule;
use penalty_splitting::space::Point;
use penalty_splitting::{fbb, fbfb};

fn main() -> penalty_splitting::Result<()> {
    let bench = benchmarks::by_name("skew-saddle")?;
    let BenchmarkProblem::Inclusion(problem) = &bench.problem else {
        unreachable!()
    };
    let oracle = bench.oracle_solution();
    println!("oracle ({}) : {:?}", bench.oracle_method, oracle.coords());

    let schedule = StepSchedule::power_law(1.0, 0.6, 1.0, 1.0)?;

    // the admission rule in action: fbb rejects a non-cocoercive D
    match fbb::run(problem, &schedule, &RunOptions::with_budget(10)) {
        Err(e) => println!("one-forward-step solver says: {e}"),
        Ok(_) => unreachable!("fbb must refuse a skew D"),
    }

    // manual fbfb loop with ergodic averaging of the pre-step iterates
    let mut x = Point::zeros(2);
    let mut average = ErgodicAverager::new();
    for n in 1..=100_000usize {
        let (lambda, beta) = schedule.at(n);
        average.update(lambda, &x);
        x = fbfb::step(problem, n, &x, lambda, beta)?.x_next;
        if n % 10 == 0 && (n as f64).log10().fract() == 0.0 {
            println!(
                "n = {:>6}   iterate dist {:.3e}   ergodic dist {:.3e}",
                n,
                x.distance_to(&oracle),
                average.average().unwrap().distance_to(&oracle)
            );
        }
    }
    Ok(())
}
