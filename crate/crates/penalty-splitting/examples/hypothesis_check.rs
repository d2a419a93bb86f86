//! Machine classification of the two schedule-dependent convergence
//! hypotheses — (λ_n) ∈ ℓ²\ℓ¹ and summability of the λβ-weighted
//! Fitzpatrick gap — across penalty classes and power-law schedules.
//! Run with
//!
//!     cargo run --example hypothesis_check

use penalty_splitting::operators::LinearMap;
use penalty_splitting::penalty::PenaltyOp;
use penalty_splitting::schedules::{GapVerdict, StepSchedule, StepVerdict};
use penalty_splitting::space::{ConvexSet, Point};

fn main() -> penalty_splitting::Result<()> {
    let c = ConvexSet::halfspace(Point::new(vec![1.0, 0.0])?, 0.0)?;
    let k = LinearMap::from_rows(vec![vec![0.0, 1.0], vec![-1.0, 0.0]])?;
    let penalties = vec![
        PenaltyOp::normal_cone(c.clone()),
        PenaltyOp::half_dist_sq(c.clone()),
        PenaltyOp::dist(c),
        PenaltyOp::skew_linear(k)?,
    ];

    println!("step-size condition (λ_n = n^-p ∈ ℓ²\\ℓ¹):");
    for p in [0.4, 0.5, 0.6, 1.0, 2.0] {
        let s = StepSchedule::power_law(1.0, p, 1.0, 1.0)?;
        let verdict = match s.classify_l2_not_l1(0) {
            StepVerdict::Accepted => "accepted".to_string(),
            StepVerdict::Rejected(r) => format!("rejected — {r}"),
            StepVerdict::Unknown { .. } => "unknown".to_string(),
        };
        println!("  p = {p:<4} {verdict}");
    }

    println!("\ngap summability Σ λ_nβ_n·gap(p, β_n) < ∞ (λ_n = n^-p, β_n = n^q):");
    print!("{:<16}", "penalty \\ (p,q)");
    let grid = [(1.0, 0.0), (1.0, 0.5), (1.0, 1.0), (0.6, 2.0)];
    for (p, q) in grid {
        print!("{:>16}", format!("({p}, {q})"));
    }
    println!();
    for b in &penalties {
        print!("{:<16}", b.variant_name());
        for (p, q) in grid {
            let s = StepSchedule::power_law(1.0, p, 1.0, q)?;
            let witness = b.probe_witness()?;
            let witness = if witness.norm() > 0.0 {
                witness
            } else {
                // skew zero set is ker K = {0} here, probe from its range
                Point::new(vec![1.0, 1.0])?
            };
            let verdict = match s.classify_gap_summability(b, &witness, 0)? {
                GapVerdict::Satisfied => "satisfied",
                GapVerdict::Violated(_) => "violated",
                GapVerdict::Unknown { .. } => "unknown",
            };
            print!("{verdict:>16}");
        }
        println!();
    }
    println!(
        "\nthe half_dist_sq row flips at p + q = 1: the gap term is \
         λ_nβ_n·½‖p‖²/β_n² ∝ n^-(p+q)"
    );
    Ok(())
}
