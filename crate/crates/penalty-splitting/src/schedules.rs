//! Step-size and penalty-parameter sequences (λ_n, β_n), with machine
//! classification of the two schedule-dependent convergence hypotheses:
//! (λ_n) ∈ ℓ²\ℓ¹, and summability of the λβ-weighted Fitzpatrick gap.

use crate::penalty::PenaltyOp;
use crate::space::Point;
use crate::{Error, Result};
use std::sync::Arc;

type GeneratorFn = dyn Fn(usize) -> (f64, f64) + Send + Sync;

#[derive(Clone)]
enum Family {
    /// λ_n = λ₀·n^{−p}, β_n = β₀·n^{q}.
    PowerLaw {
        lambda0: f64,
        p: f64,
        beta0: f64,
        q: f64,
    },
    /// Finite explicit lists; n past the end repeats the final entry.
    Explicit { lambdas: Vec<f64>, betas: Vec<f64> },
    Custom {
        generator: Arc<GeneratorFn>,
        label: String,
    },
}

/// A schedule n ↦ (λ_n, β_n) of positive step sizes and penalty parameters,
/// n ≥ 1.
#[derive(Clone)]
pub struct StepSchedule {
    family: Family,
}

impl std::fmt::Debug for StepSchedule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "StepSchedule({})", self.describe())
    }
}

/// Verdict on (λ_n) ∈ ℓ² \ ℓ¹.
#[derive(Debug, Clone, PartialEq)]
pub enum StepVerdict {
    Accepted,
    Rejected(String),
    /// No analytic form; partial sums up to the horizon are reported
    /// instead of a guess.
    Unknown {
        horizon: usize,
        sum_lambda: f64,
        sum_lambda_sq: f64,
    },
}

/// Verdict on Σ λ_n β_n · gap(p, β_n) < ∞.
#[derive(Debug, Clone, PartialEq)]
pub enum GapVerdict {
    Satisfied,
    Violated(String),
    Unknown { horizon: usize, partial_sum: f64 },
}

impl StepSchedule {
    /// λ_n = λ₀·n^{−p}, β_n = β₀·n^{q}.
    pub fn power_law(lambda0: f64, p: f64, beta0: f64, q: f64) -> Result<Self> {
        if !(lambda0 > 0.0 && lambda0.is_finite()) || !(beta0 > 0.0 && beta0.is_finite()) {
            return Err(Error::InvalidArgument(
                "power_law needs lambda0 > 0 and beta0 > 0".into(),
            ));
        }
        if !p.is_finite() || !q.is_finite() {
            return Err(Error::InvalidArgument(
                "power_law exponents must be finite".into(),
            ));
        }
        Ok(StepSchedule {
            family: Family::PowerLaw {
                lambda0,
                p,
                beta0,
                q,
            },
        })
    }

    /// The default benchmark schedule λ_n = 1/n, β_n = n.
    pub fn default_benchmark() -> Self {
        StepSchedule::power_law(1.0, 1.0, 1.0, 1.0).expect("valid parameters")
    }

    pub fn explicit(lambdas: Vec<f64>, betas: Vec<f64>) -> Result<Self> {
        if lambdas.is_empty() || lambdas.len() != betas.len() {
            return Err(Error::InvalidArgument(
                "explicit schedule needs equal-length nonempty lists".into(),
            ));
        }
        if lambdas
            .iter()
            .chain(&betas)
            .any(|v| !(v.is_finite() && *v > 0.0))
        {
            return Err(Error::InvalidArgument(
                "explicit schedule entries must be positive and finite".into(),
            ));
        }
        Ok(StepSchedule {
            family: Family::Explicit { lambdas, betas },
        })
    }

    pub fn custom<F>(generator: F, label: &str) -> Self
    where
        F: Fn(usize) -> (f64, f64) + Send + Sync + 'static,
    {
        StepSchedule {
            family: Family::Custom {
                generator: Arc::new(generator),
                label: label.to_string(),
            },
        }
    }

    /// (λ_n, β_n) for n ≥ 1.
    pub fn at(&self, n: usize) -> (f64, f64) {
        assert!(n >= 1, "schedules are indexed from n = 1");
        match &self.family {
            Family::PowerLaw {
                lambda0,
                p,
                beta0,
                q,
            } => {
                let nf = n as f64;
                (lambda0 * nf.powf(-p), beta0 * nf.powf(*q))
            }
            Family::Explicit { lambdas, betas } => {
                let i = (n - 1).min(lambdas.len() - 1);
                (lambdas[i], betas[i])
            }
            Family::Custom { generator, .. } => {
                let (l, b) = generator(n);
                assert!(l > 0.0 && b > 0.0, "custom schedule must stay positive");
                (l, b)
            }
        }
    }

    pub fn describe(&self) -> String {
        match &self.family {
            Family::PowerLaw {
                lambda0,
                p,
                beta0,
                q,
            } => {
                format!("power_law(λ_n = {lambda0}·n^-{p}, β_n = {beta0}·n^{q})")
            }
            Family::Explicit { lambdas, .. } => format!("explicit({} entries)", lambdas.len()),
            Family::Custom { label, .. } => format!("custom({label})"),
        }
    }

    fn power_law_params(&self) -> Option<(f64, f64, f64, f64)> {
        match &self.family {
            Family::PowerLaw {
                lambda0,
                p,
                beta0,
                q,
            } => Some((*lambda0, *p, *beta0, *q)),
            _ => None,
        }
    }

    /// Classifies (λ_n) ∈ ℓ² \ ℓ¹. Analytic for power laws: accepted iff
    /// 1/2 < p ≤ 1 and the penalty exponent does not decay (q ≥ 0);
    /// explicit and custom schedules get an honest Unknown with partial
    /// sums up to `horizon`.
    pub fn classify_l2_not_l1(&self, horizon: usize) -> StepVerdict {
        match &self.family {
            Family::PowerLaw { p, q, .. } => {
                if *p > 1.0 {
                    StepVerdict::Rejected(format!(
                        "λ_n ∝ n^-{p} is summable (ℓ¹): steps vanish too fast to make progress"
                    ))
                } else if *p <= 0.5 {
                    StepVerdict::Rejected(format!("λ_n ∝ n^-{p} is not square-summable (not ℓ²)"))
                } else if *q < 0.0 {
                    StepVerdict::Rejected(format!(
                        "β_n ∝ n^{q} decays: accepted power-law schedules keep q ≥ 0"
                    ))
                } else {
                    StepVerdict::Accepted
                }
            }
            _ => {
                let mut sum_lambda = 0.0;
                let mut sum_lambda_sq = 0.0;
                for n in 1..=horizon {
                    let (l, _) = self.at(n);
                    sum_lambda += l;
                    sum_lambda_sq += l * l;
                }
                StepVerdict::Unknown {
                    horizon,
                    sum_lambda,
                    sum_lambda_sq,
                }
            }
        }
    }

    /// Classifies Σ_n λ_n β_n (sup_{ũ∈C} φ_B(ũ, p/β_n) − σ_C(p/β_n)) < ∞
    /// for the given penalty class, analytically where the class admits it:
    ///
    /// - `normal_cone`: satisfied for every schedule (gap ≡ 0);
    /// - `half_dist_sq` + power law: the term is ∝ λ_n/β_n, so satisfied
    ///   iff p + q > 1;
    /// - `dist`: violated whenever C is a proper subset — some normal
    ///   direction p has ‖p‖ > β_n, making the term +∞;
    /// - `skew_linear`: violated — any nonzero p ⊥ ker B gives +∞;
    /// - `custom`: Unknown, with the partial sum at the witness reported.
    pub fn classify_gap_summability(
        &self,
        b: &PenaltyOp,
        p_witness: &Point,
        horizon: usize,
    ) -> Result<GapVerdict> {
        if p_witness.dim() != b.dim() {
            return Err(Error::dim(b.dim(), p_witness.dim()));
        }
        if b.is_normal_cone() {
            return Ok(GapVerdict::Satisfied);
        }
        if b.is_half_dist_sq() {
            if b.zero_set().is_whole_space() {
                // C = H: only p = 0, every term vanishes
                return Ok(GapVerdict::Satisfied);
            }
            if let Some((_, p, _, q)) = self.power_law_params() {
                return Ok(if p + q > 1.0 {
                    GapVerdict::Satisfied
                } else {
                    GapVerdict::Violated(format!(
                        "term λ_nβ_n·½‖p/β_n‖² ∝ n^-(p+q) with p+q = {} ≤ 1 diverges",
                        p + q
                    ))
                });
            }
            return Ok(self.partial_sum_verdict(b, p_witness, horizon));
        }
        if b.is_dist() {
            if b.zero_set().is_whole_space() {
                return Ok(GapVerdict::Satisfied);
            }
            return Ok(GapVerdict::Violated(
                "distance penalty: for any β_n there is p ∈ Ran N_C with ‖p‖ > β_n, \
                 making the gap +∞; the condition fails for every schedule"
                    .into(),
            ));
        }
        if b.is_skew_linear() {
            return Ok(GapVerdict::Violated(
                "skew penalty: every nonzero p orthogonal to ker B gives an infinite gap; \
                 the condition fails for every schedule"
                    .into(),
            ));
        }
        Ok(self.partial_sum_verdict(b, p_witness, horizon))
    }

    fn partial_sum_verdict(&self, b: &PenaltyOp, p_witness: &Point, horizon: usize) -> GapVerdict {
        let mut partial = 0.0;
        for n in 1..=horizon {
            let (l, beta) = self.at(n);
            match b.fitzpatrick_gap(p_witness, beta) {
                Ok(g) => match g.as_finite() {
                    Some(v) => partial += l * beta * v,
                    None => {
                        return GapVerdict::Violated(format!(
                            "gap(p, β_{n}) = +∞ at the supplied witness"
                        ))
                    }
                },
                Err(_) => {
                    return GapVerdict::Unknown {
                        horizon: n,
                        partial_sum: partial,
                    }
                }
            }
        }
        GapVerdict::Unknown {
            horizon,
            partial_sum: partial,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::ConvexSet;

    fn pt(coords: &[f64]) -> Point {
        Point::new(coords.to_vec()).unwrap()
    }

    fn halfspace_x1() -> ConvexSet {
        ConvexSet::halfspace(pt(&[1.0, 0.0]), 0.0).unwrap()
    }

    #[test]
    fn power_law_l2_not_l1_classification() {
        let acc = StepSchedule::power_law(1.0, 1.0, 1.0, 1.0).unwrap();
        assert_eq!(acc.classify_l2_not_l1(0), StepVerdict::Accepted);

        let l1 = StepSchedule::power_law(1.0, 2.0, 1.0, 1.0).unwrap();
        assert!(matches!(l1.classify_l2_not_l1(0), StepVerdict::Rejected(_)));

        let not_l2 = StepSchedule::power_law(1.0, 0.5, 1.0, 1.0).unwrap();
        assert!(matches!(
            not_l2.classify_l2_not_l1(0),
            StepVerdict::Rejected(_)
        ));

        let decaying_beta = StepSchedule::power_law(1.0, 1.0, 1.0, -0.5).unwrap();
        assert!(matches!(
            decaying_beta.classify_l2_not_l1(0),
            StepVerdict::Rejected(_)
        ));
    }

    #[test]
    fn accepted_steps_vanish() {
        for p in [0.6, 0.75, 1.0] {
            let s = StepSchedule::power_law(1.0, p, 1.0, 0.0).unwrap();
            assert_eq!(s.classify_l2_not_l1(0), StepVerdict::Accepted);
            let (l1, _) = s.at(1);
            let (l_mid, _) = s.at(1000);
            let (l_end, _) = s.at(1_000_000);
            assert!(l_end < l_mid && l_mid < l1, "λ_n must trend to zero");
        }
    }

    #[test]
    fn gap_summability_per_variant() {
        let p_witness = pt(&[2.0, 0.0]);
        let sched = StepSchedule::power_law(1.0, 1.0, 1.0, 1.0).unwrap();

        let nc = PenaltyOp::normal_cone(halfspace_x1());
        assert_eq!(
            sched.classify_gap_summability(&nc, &p_witness, 0).unwrap(),
            GapVerdict::Satisfied
        );

        // half_dist_sq: p + q = 2 > 1 satisfied; q = 0 gives Σ 1/n divergent
        let hd = PenaltyOp::half_dist_sq(halfspace_x1());
        assert_eq!(
            sched.classify_gap_summability(&hd, &p_witness, 0).unwrap(),
            GapVerdict::Satisfied
        );
        let flat_beta = StepSchedule::power_law(1.0, 1.0, 1.0, 0.0).unwrap();
        assert!(matches!(
            flat_beta
                .classify_gap_summability(&hd, &p_witness, 0)
                .unwrap(),
            GapVerdict::Violated(_)
        ));

        let d = PenaltyOp::dist(halfspace_x1());
        assert!(matches!(
            sched.classify_gap_summability(&d, &p_witness, 0).unwrap(),
            GapVerdict::Violated(_)
        ));

        let k =
            crate::operators::LinearMap::from_rows(vec![vec![0.0, 1.0], vec![-1.0, 0.0]]).unwrap();
        let sk = PenaltyOp::skew_linear(k).unwrap();
        assert!(matches!(
            sched.classify_gap_summability(&sk, &p_witness, 0).unwrap(),
            GapVerdict::Violated(_)
        ));
    }

    #[test]
    fn normal_cone_satisfied_for_any_schedule() {
        let nc = PenaltyOp::normal_cone(halfspace_x1());
        let p_witness = pt(&[1.0, 0.0]);
        let schedules = vec![
            StepSchedule::power_law(1.0, 1.0, 1.0, 1.0).unwrap(),
            StepSchedule::power_law(5.0, 0.2, 0.1, 0.0).unwrap(),
            StepSchedule::power_law(1.0, 3.0, 1.0, 2.0).unwrap(),
            StepSchedule::explicit(vec![1.0, 1.0], vec![1.0, 1.0]).unwrap(),
        ];
        for s in &schedules {
            assert_eq!(
                s.classify_gap_summability(&nc, &p_witness, 16).unwrap(),
                GapVerdict::Satisfied
            );
        }
    }

    #[test]
    fn half_dist_sq_analytic_agrees_with_tail_exponent_estimate() {
        // numeric oracle: Richardson-extrapolated tail exponent of the
        // term t_n = λ_nβ_n·gap(p, β_n); series converges iff exponent > 1
        let hd = PenaltyOp::half_dist_sq(halfspace_x1());
        let p_witness = pt(&[3.0, 0.0]);
        for p in [0.6, 0.75, 1.0] {
            for q in [0.0, 0.5, 1.0, 2.0] {
                let s = StepSchedule::power_law(1.0, p, 1.0, q).unwrap();
                let term = |n: usize| {
                    let (l, beta) = s.at(n);
                    l * beta * hd.fitzpatrick_gap(&p_witness, beta).unwrap().to_f64()
                };
                // exponent estimates at n and 2n; Richardson-combine two
                let est = |n: usize| (term(n) / term(2 * n)).log2();
                let e1 = est(1 << 10);
                let e2 = est(1 << 11);
                let extrapolated = 2.0 * e2 - e1;
                let analytic = matches!(
                    s.classify_gap_summability(&hd, &p_witness, 0).unwrap(),
                    GapVerdict::Satisfied
                );
                let numeric = extrapolated > 1.0 + 1e-3;
                assert_eq!(
                    analytic, numeric,
                    "verdict mismatch at p={p}, q={q}: tail exponent ≈ {extrapolated}"
                );
            }
        }
    }

    #[test]
    fn custom_schedule_reports_partial_sums() {
        let s = StepSchedule::custom(|n| (1.0 / n as f64, n as f64), "harmonic");
        match s.classify_l2_not_l1(1000) {
            StepVerdict::Unknown {
                horizon,
                sum_lambda,
                sum_lambda_sq,
            } => {
                assert_eq!(horizon, 1000);
                assert!(sum_lambda > 7.0 && sum_lambda < 8.0); // H_1000 ≈ 7.49
                assert!(sum_lambda_sq < 1.65); // < π²/6
            }
            other => panic!("expected Unknown, got {other:?}"),
        }
        let hd = PenaltyOp::half_dist_sq(halfspace_x1());
        match s
            .classify_gap_summability(&hd, &pt(&[1.0, 0.0]), 1000)
            .unwrap()
        {
            GapVerdict::Unknown { partial_sum, .. } => {
                // Σ (1/n)·n·(1/(2n²)) = ½ Σ n^{-2} → π²/12 ≈ 0.822
                assert!(partial_sum > 0.8 && partial_sum < 0.83);
            }
            other => panic!("expected Unknown, got {other:?}"),
        }
    }

    #[test]
    fn explicit_schedule_positivity_enforced() {
        assert!(StepSchedule::explicit(vec![1.0, -1.0], vec![1.0, 1.0]).is_err());
        assert!(StepSchedule::explicit(vec![], vec![]).is_err());
        assert!(StepSchedule::power_law(0.0, 1.0, 1.0, 1.0).is_err());
        let s = StepSchedule::explicit(vec![0.5, 0.25], vec![1.0, 2.0]).unwrap();
        assert_eq!(s.at(1), (0.5, 1.0));
        assert_eq!(s.at(2), (0.25, 2.0));
        assert_eq!(s.at(9), (0.25, 2.0)); // repeats the final entry
    }
}
