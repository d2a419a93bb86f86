//! One-forward-step penalty scheme on the constrained projection problem
//!
//!     0 ∈ (x − a) + N_C(x),    C = {x₁ ≤ 0},  a = (2, 3),
//!
//! whose solution is Proj_C(a) = (0, 3). A is 1-strongly monotone, so the
//! iterates converge without averaging. Run with
//!
//!     cargo run --example projection_fbb

use penalty_splitting::fbb;
use penalty_splitting::operators::{ResolventOp, SingleValuedOp};
use penalty_splitting::penalty::PenaltyOp;
use penalty_splitting::problem::{InclusionProblem, RunOptions};
use penalty_splitting::schedules::StepSchedule;
use penalty_splitting::space::{ConvexSet, Point};

fn main() -> penalty_splitting::Result<()> {
    let a = Point::new(vec![2.0, 3.0])?;
    let c = ConvexSet::halfspace(Point::new(vec![1.0, 0.0])?, 0.0)?;
    let solution = c.project(&a)?;

    let problem = InclusionProblem::new(
        ResolventOp::subdiff_quadratic(a, 1.0)?,
        SingleValuedOp::zero(2),
        // penalize ½·dist² instead of projecting onto C
        PenaltyOp::half_dist_sq(c),
    )?
    .with_known_solution(solution.clone())?;

    // λ_n = 1/n is square-summable but not summable; β_n = n grows fast
    // enough for the half-dist² gap condition (p + q = 2 > 1)
    let schedule = StepSchedule::power_law(1.0, 1.0, 1.0, 1.0)?;
    let outcome = fbb::run(&problem, &schedule, &RunOptions::with_budget(100_000))?;

    println!("schedule        : {}", outcome.report.schedule);
    println!("step sizes      : {}", outcome.report.step_verdict);
    println!("gap condition   : {}", outcome.report.gap_verdict);
    println!("solution oracle : {:?}", solution.coords());
    println!("final iterate   : {:?}", outcome.report.final_x);
    println!("distance trace:");
    for sample in outcome
        .report
        .dist_samples
        .iter()
        .filter(|s| s.n.is_power_of_two() || s.n == outcome.report.iterations)
    {
        println!("  n = {:>6}   ‖x_n − u‖ = {:.3e}", sample.n, sample.dist);
    }
    println!(
        "after {} iterations: ‖x − u‖ = {:.3e}",
        outcome.report.iterations,
        outcome.report.dist_last.unwrap()
    );
    Ok(())
}
