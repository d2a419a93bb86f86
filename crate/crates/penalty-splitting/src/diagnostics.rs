//! Ergodic averaging, convergence metrics, and run-report assembly shared
//! by all solvers.

use crate::schedules::{GapVerdict, StepVerdict};
use crate::space::Point;
use serde::Serialize;

/// Running weighted average z_n = (1/τ_n) Σ λ_k x_k with τ_n = Σ λ_k,
/// maintained incrementally as z ← z + (λ/τ')(x − z).
#[derive(Debug, Clone)]
pub struct ErgodicAverager {
    tau: f64,
    z: Option<Point>,
}

impl ErgodicAverager {
    pub fn new() -> Self {
        ErgodicAverager { tau: 0.0, z: None }
    }

    /// Folds in one iterate with weight λ > 0.
    pub fn update(&mut self, lambda: f64, x: &Point) {
        assert!(lambda > 0.0, "ergodic weight must be positive");
        self.tau += lambda;
        match &mut self.z {
            None => self.z = Some(x.clone()),
            Some(z) => {
                let step = lambda / self.tau;
                *z = z.add_scaled(step, &x.sub(z));
            }
        }
    }

    /// Σ λ_k so far.
    pub fn total_weight(&self) -> f64 {
        self.tau
    }

    /// Current average; None before the first update.
    pub fn average(&self) -> Option<&Point> {
        self.z.as_ref()
    }
}

impl Default for ErgodicAverager {
    fn default() -> Self {
        Self::new()
    }
}

/// One recorded trace row. `x` is the full iterate (dims are desk-scale);
/// `duals` is nonempty only for primal-dual runs. Distances are None when
/// no oracle solution is known.
#[derive(Debug, Clone)]
pub struct TraceRow {
    pub n: usize,
    pub lambda: f64,
    pub beta: f64,
    pub x: Vec<f64>,
    pub duals: Vec<Vec<f64>>,
    pub dist_to_solution: Option<f64>,
    pub ergodic_dist: Option<f64>,
    pub lemma_residual: Option<f64>,
}

/// Log-spaced checkpoint selector: keeps every iteration up to 100, then
/// ~28 rows per decade, and always the final iteration. Keeps traces small
/// at 10⁶ iterations.
#[derive(Debug, Clone)]
pub struct Decimator {
    next: usize,
}

impl Decimator {
    pub fn new() -> Self {
        Decimator { next: 1 }
    }

    /// Whether to record iteration n; consumes the checkpoint when hit.
    pub fn hit(&mut self, n: usize) -> bool {
        if n < self.next {
            return false;
        }
        // advance multiplicatively; exact steps below 100
        let mut next = self.next;
        while next <= n {
            next = if next < 100 {
                next + 1
            } else {
                ((next as f64) * 1.085).ceil() as usize
            };
        }
        self.next = next;
        true
    }
}

impl Default for Decimator {
    fn default() -> Self {
        Self::new()
    }
}

/// Distance samples at trace checkpoints.
#[derive(Debug, Clone, Serialize)]
pub struct DistSample {
    pub n: usize,
    pub dist: f64,
}

/// Summary of one solver run. Serialized as the report JSON (schema 1).
#[derive(Debug, Clone, Serialize)]
pub struct SolveReport {
    pub schema: u32,
    pub algorithm: String,
    pub iterations: usize,
    pub stopped_early: bool,
    pub final_x: Vec<f64>,
    pub final_ergodic: Vec<f64>,
    /// Final dual iterates (primal-dual runs only).
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub final_duals: Vec<Vec<f64>>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub final_ergodic_duals: Vec<Vec<f64>>,
    pub dist_first: Option<f64>,
    pub dist_last: Option<f64>,
    pub ergodic_dist_last: Option<f64>,
    /// Log-spaced distance history (present only with a known solution).
    pub dist_samples: Vec<DistSample>,
    pub certificate_residual_min: Option<f64>,
    pub certificate_residual_max: Option<f64>,
    /// Iterations where the step size exceeded the regularity threshold
    /// (2η for the one-forward-step scheme, η/2 for the two-forward-step
    /// scheme). The analysis needs these to die out, which they do for any
    /// vanishing λ_n.
    pub step_size_flags: usize,
    pub schedule: String,
    pub step_verdict: String,
    pub gap_verdict: String,
    pub wall_time_ms: u128,
}

/// A finished run: the JSON-serializable summary plus the decimated trace
/// rows the CSV writer consumes.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub report: SolveReport,
    pub trace: Vec<TraceRow>,
}

pub(crate) fn describe_step_verdict(v: &StepVerdict) -> String {
    match v {
        StepVerdict::Accepted => "accepted".into(),
        StepVerdict::Rejected(r) => format!("rejected: {r}"),
        StepVerdict::Unknown {
            horizon,
            sum_lambda,
            sum_lambda_sq,
        } => {
            format!("unknown: over n ≤ {horizon}, Σλ = {sum_lambda:.6e}, Σλ² = {sum_lambda_sq:.6e}")
        }
    }
}

pub(crate) fn describe_gap_verdict(v: &GapVerdict) -> String {
    match v {
        GapVerdict::Satisfied => "satisfied".into(),
        GapVerdict::Violated(r) => format!("violated: {r}"),
        GapVerdict::Unknown {
            horizon,
            partial_sum,
        } => {
            format!("unknown: partial sum over n ≤ {horizon} is {partial_sum:.6e}")
        }
    }
}
