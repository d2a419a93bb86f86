//! Backward penalty scheme with two forward steps, for a D that is only
//! monotone and Lipschitz continuous (not necessarily cocoercive — e.g.
//! skew couplings):
//!
//! ```text
//!     y_n     = x_n − λ_n D x_n
//!     p_n     = J_{λ_n A}(y_n)
//!     q_n     = p_n − λ_n D p_n
//!     x_{n+1} = J_{λ_n β_n B}(x_n − y_n + q_n)
//! ```
//!
//! The resolvent argument collapses to p_n + λ_n(Dx_n − Dp_n), which is the
//! classical two-forward-step correction.

use crate::diagnostics::RunOutcome;
use crate::fbb::{driver, DriverSetup, DriverState, HypothesisBasis, ResidualState};
use crate::problem::{InclusionProblem, RunOptions};
use crate::schedules::StepSchedule;
use crate::space::Point;
use crate::{Error, Result};

/// All intermediates of one iteration.
#[derive(Debug, Clone)]
pub struct FbfbState {
    pub n: usize,
    pub x: Point,
    pub y: Point,
    pub p: Point,
    pub q: Point,
    pub x_next: Point,
}

/// One iteration from `x` with parameters (λ, β). Accepts every declared
/// regularity class of D.
pub fn step(
    prob: &InclusionProblem,
    n: usize,
    x: &Point,
    lambda: f64,
    beta: f64,
) -> Result<FbfbState> {
    if x.dim() != prob.dim {
        return Err(Error::dim(prob.dim, x.dim()));
    }
    if !(lambda > 0.0 && beta > 0.0) {
        return Err(Error::InvalidArgument(
            "step sizes and penalty parameters must be positive".into(),
        ));
    }
    let dx = prob.d.eval_unchecked(x);
    let y = x.add_scaled(-lambda, &dx);
    let p = prob.a.resolvent(lambda, &y)?;
    let dp = prob.d.eval_unchecked(&p);
    let q = p.add_scaled(-lambda, &dp);
    let arg = x.sub(&y).add(&q);
    debug_assert!(
        !arg.is_finite()
            || arg.distance_to(&p.add_scaled(lambda, &dx.sub(&dp))) <= 1e-12 * (1.0 + arg.norm()),
        "x − y + q must equal p + λ(Dx − Dp)"
    );
    let x_next = prob.b.resolvent(lambda * beta, &arg)?;
    Ok(FbfbState {
        n,
        x: x.clone(),
        y,
        p,
        q,
        x_next,
    })
}

/// Signed residual (LHS − RHS) of the two-forward-step descent inequality
/// at the certificate (u, v, p) with w = v + Du + p; η is the reciprocal
/// Lipschitz constant of D. Nonpositive up to rounding for a valid
/// certificate; −∞ when the gap is infinite.
pub fn certificate_residual(
    prob: &InclusionProblem,
    state: &FbfbState,
    lambda: f64,
    beta: f64,
    eta: f64,
) -> Result<f64> {
    let cert = prob
        .certificate
        .as_ref()
        .ok_or_else(|| Error::InvalidArgument("problem carries no certificate".into()))?;
    let du = prob.d.eval_unchecked(&cert.u);
    let dx = prob.d.eval_unchecked(&state.x);
    let dp = prob.d.eval_unchecked(&state.p);
    let w_vec = cert.v.add(&du).add(&cert.p);

    let coeff = 1.0 - 4.0 * lambda * lambda / (eta * eta);
    let lhs = state.x_next.distance_to(&cert.u).powi(2) - state.x.distance_to(&cert.u).powi(2)
        + coeff * state.x.distance_to(&state.p).powi(2)
        + 0.5 * state.x_next.distance_to(&state.p).powi(2)
        + 0.5
            * state
                .x_next
                .sub(&state.p)
                .add_scaled(2.0 * lambda, &dp.sub(&dx).add(&cert.p))
                .norm_sq();

    let gap = prob.b.fitzpatrick_gap(&cert.p, beta)?.to_f64();
    let rhs = 2.0 * lambda * beta * gap
        + 2.0 * lambda * w_vec.inner(&cert.u.sub(&state.p))
        + 4.0 * lambda * lambda * cert.p.norm_sq();
    Ok(lhs - rhs)
}

/// Runs the scheme for up to `opts.budget` iterations. Same trace and
/// report conventions as the one-forward-step solver, for comparability.
pub fn run(
    prob: &InclusionProblem,
    schedule: &StepSchedule,
    opts: &RunOptions,
) -> Result<RunOutcome> {
    let eta = prob.eta_for_two_forward_steps();
    let setup = DriverSetup {
        algorithm: "fbfb",
        eta,
        step_threshold: 0.5 * eta,
        basis: HypothesisBasis {
            b: prob.b.clone(),
            witness: prob.gap_witness()?,
        },
    };
    driver(prob, schedule, opts, setup, |prob, n, x, l, b| {
        let st = step(prob, n, x, l, b)?;
        Ok(DriverState {
            x_next: st.x_next.clone(),
            residual_state: ResidualState::Fbfb(st),
        })
    })
}
