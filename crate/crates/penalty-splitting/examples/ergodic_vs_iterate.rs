//! Why averaging matters: without strong monotonicity only the λ-weighted
//! ergodic average is guaranteed to converge, and under strong
//! monotonicity the iterates themselves do — side by side on the same
//! skew-saddle family with two strengths μ. Run with
//!
//!     cargo run --example ergodic_vs_iterate

use penalty_splitting::benchmarks::{skew_saddle_benchmark, BenchmarkProblem, PenaltyChoice};
use penalty_splitting::diagnostics::ErgodicAverager;
use penalty_splitting::fbfb;
use penalty_splitting::schedules::StepSchedule;
use penalty_splitting::space::{ConvexSet, Point};

fn main() -> penalty_splitting::Result<()> {
    let schedule = StepSchedule::power_law(1.0, 0.6, 1.0, 1.0)?;
    for mu in [1.0, 0.05] {
        let bench = skew_saddle_benchmark(
            1,
            mu,
            1.0,
            Point::new(vec![1.0, 0.0])?,
            ConvexSet::whole_space(2)?,
            PenaltyChoice::NormalCone,
        )?;
        let BenchmarkProblem::Inclusion(problem) = &bench.problem else {
            unreachable!()
        };
        let oracle = bench.oracle_solution();
        println!("μ = {mu}: oracle {:?}", oracle.coords());

        let mut x = Point::zeros(2);
        let mut average = ErgodicAverager::new();
        for n in 1..=100_000usize {
            let (lambda, beta) = schedule.at(n);
            average.update(lambda, &x);
            x = fbfb::step(problem, n, &x, lambda, beta)?.x_next;
            if [100, 10_000, 100_000].contains(&n) {
                println!(
                    "  n = {:>6}   iterate {:.3e}   ergodic {:.3e}",
                    n,
                    x.distance_to(&oracle),
                    average.average().unwrap().distance_to(&oracle)
                );
            }
        }
    }
    println!("weak strong-monotonicity (small μ) slows the iterates; the averages keep shrinking");
    Ok(())
}
