//! The inclusion problem 0 ∈ Ax + Dx + N_C(x) with C = zer B, plus the
//! optional solution certificate used by the per-iteration inequality
//! monitors.

use crate::operators::{Regularity, ResolventOp, SingleValuedOp};
use crate::penalty::PenaltyOp;
use crate::space::Point;
use crate::{Error, Result};

/// Surrogate cocoercivity modulus used when D ≡ 0; keeps the inequality
/// monitors free of infinities.
pub const ETA_SURROGATE: f64 = 1e12;

/// A decomposition witness (u, v, p) for a zero u: v ∈ Au and p ∈ N_C(u)
/// with v + Du + p = 0 (the w = 0 decomposition). Validated on demand.
#[derive(Debug, Clone)]
pub struct SolutionCertificate {
    pub u: Point,
    pub v: Point,
    pub p: Point,
}

/// Problem data shared by both penalty solvers.
#[derive(Debug, Clone)]
pub struct InclusionProblem {
    pub a: ResolventOp,
    pub d: SingleValuedOp,
    pub b: PenaltyOp,
    pub dim: usize,
    pub known_solution: Option<Point>,
    pub certificate: Option<SolutionCertificate>,
}

impl InclusionProblem {
    pub fn new(a: ResolventOp, d: SingleValuedOp, b: PenaltyOp) -> Result<Self> {
        let dim = a.dim();
        if d.dim() != dim {
            return Err(Error::dim(dim, d.dim()));
        }
        if b.dim() != dim {
            return Err(Error::dim(dim, b.dim()));
        }
        Ok(InclusionProblem {
            a,
            d,
            b,
            dim,
            known_solution: None,
            certificate: None,
        })
    }

    pub fn with_known_solution(mut self, u: Point) -> Result<Self> {
        if u.dim() != self.dim {
            return Err(Error::dim(self.dim, u.dim()));
        }
        self.known_solution = Some(u);
        Ok(self)
    }

    pub fn with_certificate(mut self, cert: SolutionCertificate) -> Result<Self> {
        self.validate_certificate(&cert)?;
        self.certificate = Some(cert);
        Ok(self)
    }

    /// Checks the certificate against the problem data:
    /// u ∈ C, p ∈ N_C(u), v ∈ Au via the resolvent characterization
    /// J_A(u + v) = u, and v + Du + p = 0.
    pub fn validate_certificate(&self, cert: &SolutionCertificate) -> Result<()> {
        for (name, pt) in [("u", &cert.u), ("v", &cert.v), ("p", &cert.p)] {
            if pt.dim() != self.dim {
                return Err(Error::BadCertificate(format!(
                    "{name} has dim {}, problem has dim {}",
                    pt.dim(),
                    self.dim
                )));
            }
        }
        let c = self.b.zero_set();
        let resid = c.membership_residual(&cert.u)?;
        if resid > 1e-8 {
            return Err(Error::BadCertificate(format!(
                "u is not in C: membership residual {resid:.3e}"
            )));
        }
        if !c.normal_cone_contains(&cert.u, &cert.p, 1e-8)? {
            return Err(Error::BadCertificate("p is not in N_C(u)".into()));
        }
        // v ∈ Au ⟺ u = J_A(u + v)
        let back = self.a.resolvent(1.0, &cert.u.add(&cert.v))?;
        let vres = back.distance_to(&cert.u);
        if vres > 1e-8 {
            return Err(Error::BadCertificate(format!(
                "v fails the resolvent consistency check J_A(u+v) = u: residual {vres:.3e}"
            )));
        }
        let du = self.d.eval(&cert.u)?;
        let zero_resid = cert.v.add(&du).add(&cert.p).norm();
        if zero_resid > 1e-8 {
            return Err(Error::BadCertificate(format!(
                "v + Du + p = {zero_resid:.3e} ≠ 0: u is not certified as a zero"
            )));
        }
        Ok(())
    }

    /// Cocoercivity modulus for the one-forward-step scheme: the declared η,
    /// or the capped surrogate for D ≡ 0. Lipschitz-only D is refused — it
    /// belongs to the two-forward-step solver.
    pub fn eta_for_one_forward_step(&self) -> Result<f64> {
        match self.d.regularity() {
            Regularity::Cocoercive(eta) => Ok(eta),
            Regularity::Zero => Ok(ETA_SURROGATE),
            Regularity::LipschitzMonotone(_) => Err(Error::Admission(
                "D is declared Lipschitz-monotone but not cocoercive; \
                 the one-forward-step scheme (fbb) requires cocoercivity — \
                 use the two-forward-step solver (fbfb) instead"
                    .into(),
            )),
        }
    }

    /// η = 1/L for the two-forward-step scheme; accepts all regularity
    /// classes (cocoercive η implies (1/η)-Lipschitz).
    pub fn eta_for_two_forward_steps(&self) -> f64 {
        match self.d.regularity() {
            Regularity::Cocoercive(eta) => eta,
            Regularity::LipschitzMonotone(l) if l > 1.0 / ETA_SURROGATE => 1.0 / l,
            Regularity::LipschitzMonotone(_) => ETA_SURROGATE,
            Regularity::Zero => ETA_SURROGATE,
        }
    }

    /// A deterministic witness direction p ∈ Ran N_C for the gap
    /// classifier: the certificate's p when present and nonzero, otherwise
    /// a probe normal w − Proj_C(w). Zero when C is the whole space.
    pub fn gap_witness(&self) -> Result<Point> {
        if let Some(cert) = &self.certificate {
            if cert.p.norm() > 0.0 {
                return Ok(cert.p.clone());
            }
        }
        self.b.probe_witness()
    }
}

/// Knobs shared by all run loops.
#[derive(Debug, Clone)]
pub struct RunOptions {
    /// Maximum number of iterations.
    pub budget: usize,
    /// Start point; origin when None.
    pub x0: Option<Point>,
    /// Early-stop threshold: stop after 50 consecutive iterations with
    /// ‖x_n − x_{n−1}‖ < stop_tol·λ_n. Zero disables (the analysis is
    /// purely asymptotic; any cutoff is a heuristic).
    pub stop_tol: f64,
    /// When false, schedules whose hypothesis classification comes back
    /// rejected/violated abort the run instead of proceeding.
    pub override_hypotheses: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            budget: 10_000,
            x0: None,
            stop_tol: 0.0,
            override_hypotheses: false,
        }
    }
}

impl RunOptions {
    pub fn with_budget(budget: usize) -> Self {
        RunOptions {
            budget,
            ..Default::default()
        }
    }
}
