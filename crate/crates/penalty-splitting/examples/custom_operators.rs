//! Building a problem from scratch instead of using a benchmark: an affine
//! monotone A given by a matrix, a skew D, a box constraint handled through
//! the half-dist² penalty, and a custom penalty with a user-supplied gap
//! evaluator. Run with
//!
//!     cargo run --example custom_operators

use penalty_splitting::fbfb;
use penalty_splitting::operators::{LinearMap, ResolventOp, SingleValuedOp};
use penalty_splitting::penalty::PenaltyOp;
use penalty_splitting::problem::{InclusionProblem, RunOptions};
use penalty_splitting::schedules::StepSchedule;
use penalty_splitting::space::{ConvexSet, ExtReal, Point};

fn main() -> penalty_splitting::Result<()> {
    // A x = W(x − t) with W ≻ 0: resolvent solved exactly per step
    let w = LinearMap::from_rows(vec![vec![2.0, 0.5], vec![0.5, 1.0]])?;
    let t = Point::new(vec![1.5, -1.0])?;
    let offset = w.apply(&t).scale(-1.0);
    let a = ResolventOp::affine(w, offset)?;

    let d = SingleValuedOp::skew(LinearMap::from_rows(vec![vec![0.0, 0.3], vec![-0.3, 0.0]])?)?;

    let cbox = ConvexSet::bounding_box(vec![0.0, 0.0], vec![1.0, 1.0])?;
    let problem = InclusionProblem::new(a, d, PenaltyOp::half_dist_sq(cbox.clone()))?;

    let schedule = StepSchedule::power_law(1.0, 0.6, 1.0, 1.0)?;
    let outcome = fbfb::run(&problem, &schedule, &RunOptions::with_budget(50_000))?;
    let x = Point::new(outcome.report.final_x.clone())?;
    println!("final iterate        : {:?}", x.coords());
    println!(
        "constraint residual  : {:.3e}",
        cbox.membership_residual(&x)?
    );

    // a custom penalty: B = 3·N_C has the same zero set and the same kind
    // of resolvent (a projection), and its gap evaluator is supplied by
    // the caller — the library never guesses gaps for unknown operators
    let custom = PenaltyOp::custom(
        {
            let set = cbox.clone();
            move |_gamma, x| set.project(x).expect("dims fixed")
        },
        cbox,
        |p, beta| {
            // same cancellation as for N_C: zero wherever σ_C(p/β) is finite
            let _ = (p, beta);
            ExtReal::finite(0.0)
        },
        "scaled_normal_cone",
    );
    println!(
        "custom penalty '{}': J_B(2.5, 0.5) = {:?}, gap = {}",
        custom.variant_name(),
        custom
            .resolvent(1.0, &Point::new(vec![2.5, 0.5])?)?
            .coords(),
        custom.fitzpatrick_gap(&Point::new(vec![1.0, 0.0])?, 2.0)?
    );
    Ok(())
}
