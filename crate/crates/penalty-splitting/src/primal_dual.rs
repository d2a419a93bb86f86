//! Product-space treatment of structured inclusions
//!
//! ```text
//!     0 ∈ Ax + Σᵢ Lᵢ*(Aᵢ □ Dᵢ)(Lᵢx) + Dx + N_C(x),     C = zer B,
//! ```
//!
//! together with the dual problem of finding vᵢ ∈ (Aᵢ □ Dᵢ)(Lᵢx). The
//! primal and dual variables are stacked into ℝ^{d+Σgᵢ}, on which the
//! problem becomes a plain inclusion 0 ∈ 𝐀𝐱 + 𝐃𝐱 + N_𝐂(𝐱) solvable by the
//! two-forward-step scheme:
//!
//! - 𝐀(x, v₁…) = Ax × A₁⁻¹v₁ × …, resolvent blockwise (the dual blocks via
//!   the resolvent-of-inverse decomposition);
//! - 𝐃(x, v₁…) = (Σ Lᵢ*vᵢ + Dx, D₁⁻¹v₁ − L₁x, …), a skew coupling plus
//!   block-diagonal monotone parts — Lipschitz-monotone but (being skew)
//!   not cocoercive, which is why the one-forward-step scheme is refused;
//! - 𝐁(x, v₁…) = Bx × {0} × …, resolvent (J_B x, v₁, …), zero set
//!   C × ℝ^{g₁} × …, Fitzpatrick gap equal to the base gap when all dual
//!   gap arguments vanish and +∞ otherwise.
//!
//! [`step`] runs the unfolded seven-line scheme natively;
//! [`max_step_deviation`] checks it against the two-forward-step solver on
//! the assembled problem, which is an exact identity.

use crate::diagnostics::RunOutcome;
use crate::fbb::{driver, DriverSetup, DriverState, HypothesisBasis, ResidualState};
use crate::fbfb::FbfbState;
use crate::operators::{LinearMap, Regularity, ResolventOp, SingleValuedOp};
use crate::penalty::PenaltyOp;
use crate::problem::{InclusionProblem, RunOptions, SolutionCertificate};
use crate::schedules::StepSchedule;
use crate::space::{ConvexSet, ExtReal, Point};
use crate::{Error, Result};

/// One dual block (Aᵢ, Dᵢ⁻¹, Lᵢ). Dᵢ is never evaluated: the scheme works
/// with Dᵢ⁻¹ directly, and Dᵢ⁻¹ ≡ 0 degenerates Aᵢ □ Dᵢ to Aᵢ.
#[derive(Debug, Clone)]
pub struct Block {
    pub a: ResolventOp,
    pub d_inverse: SingleValuedOp,
    pub link: LinearMap,
}

/// Structured problem data. `known_solution`/`certificate` are optional
/// product-space references used by monitors.
#[derive(Debug, Clone)]
pub struct StructuredProblem {
    pub a: ResolventOp,
    pub d: SingleValuedOp,
    pub blocks: Vec<Block>,
    pub b: PenaltyOp,
    pub dim: usize,
    pub known_solution: Option<ProductPoint>,
    pub certificate: Option<SolutionCertificate>,
}

/// A point of the product space: primal x plus one dual point per block.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductPoint {
    pub x: Point,
    pub duals: Vec<Point>,
}

impl ProductPoint {
    pub fn zeros(dim: usize, dual_dims: &[usize]) -> Self {
        ProductPoint {
            x: Point::zeros(dim),
            duals: dual_dims.iter().map(|&g| Point::zeros(g)).collect(),
        }
    }

    pub fn flatten(&self) -> Point {
        let mut parts = vec![&self.x];
        parts.extend(self.duals.iter());
        Point::concat(&parts)
    }

    pub fn unflatten(p: &Point, dim: usize, dual_dims: &[usize]) -> Self {
        let mut dims = vec![dim];
        dims.extend_from_slice(dual_dims);
        let mut parts = p.split(&dims);
        let x = parts.remove(0);
        ProductPoint { x, duals: parts }
    }

    pub fn distance_to(&self, other: &ProductPoint) -> f64 {
        self.flatten().distance_to(&other.flatten())
    }
}

impl StructuredProblem {
    pub fn new(
        a: ResolventOp,
        d: SingleValuedOp,
        blocks: Vec<Block>,
        b: PenaltyOp,
    ) -> Result<Self> {
        let dim = a.dim();
        if d.dim() != dim {
            return Err(Error::dim(dim, d.dim()));
        }
        if b.dim() != dim {
            return Err(Error::dim(dim, b.dim()));
        }
        for (i, blk) in blocks.iter().enumerate() {
            if blk.link.ncols() != dim {
                return Err(Error::dim(dim, blk.link.ncols()));
            }
            let g = blk.link.nrows();
            if blk.a.dim() != g || blk.d_inverse.dim() != g {
                return Err(Error::InvalidArgument(format!(
                    "block {i}: operator dims must match the link codomain {g}"
                )));
            }
            if blk.link.is_zero() {
                return Err(Error::InvalidArgument(format!(
                    "block {i}: the linear link must be nonzero"
                )));
            }
        }
        Ok(StructuredProblem {
            a,
            d,
            blocks,
            b,
            dim,
            known_solution: None,
            certificate: None,
        })
    }

    pub fn with_known_solution(mut self, sol: ProductPoint) -> Result<Self> {
        if sol.x.dim() != self.dim || sol.duals.len() != self.blocks.len() {
            return Err(Error::InvalidArgument(
                "known solution does not match the block structure".into(),
            ));
        }
        self.known_solution = Some(sol);
        Ok(self)
    }

    /// Attaches a product-space certificate (validated at assembly).
    pub fn with_certificate(mut self, cert: SolutionCertificate) -> Self {
        self.certificate = Some(cert);
        self
    }

    pub fn dual_dims(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.link.nrows()).collect()
    }

    pub fn product_dim(&self) -> usize {
        self.dim + self.dual_dims().iter().sum::<usize>()
    }

    /// Σᵢ Lᵢ* vᵢ.
    fn coupling_adjoint_sum(&self, duals: &[Point]) -> Point {
        let mut acc = Point::zeros(self.dim);
        for (blk, v) in self.blocks.iter().zip(duals) {
            acc = acc.add(&blk.link.apply_adjoint(v));
        }
        acc
    }

    /// Operator norm of the skew coupling (x, v) ↦ (Σ Lᵢ*vᵢ, −L₁x, …),
    /// which equals the largest singular value of the stacked link matrix;
    /// estimated by power iteration (200 rounds, tolerance 1e−10).
    pub fn coupling_norm(&self) -> f64 {
        let mut w = Point::from_raw(vec![1.0 / (self.dim as f64).sqrt(); self.dim]);
        let mut estimate = 0.0;
        for _ in 0..200 {
            // w ← normalize(Lᵀ L w)
            let lw: Vec<Point> = self.blocks.iter().map(|b| b.link.apply(&w)).collect();
            let next = self.coupling_adjoint_sum(&lw);
            let norm = next.norm();
            if norm == 0.0 {
                return 0.0;
            }
            let new_estimate = norm.sqrt();
            let done = (new_estimate - estimate).abs() <= 1e-10 * new_estimate.max(1.0);
            estimate = new_estimate;
            w = next.scale(1.0 / norm);
            if done {
                break;
            }
        }
        estimate
    }
}

/// Builds the product-space inclusion problem. The result is an ordinary
/// [`InclusionProblem`] on ℝ^{d+Σgᵢ} that any solver accepting
/// Lipschitz-monotone D can run (the one-forward-step scheme refuses it:
/// the coupling is skew, hence not cocoercive).
pub fn assemble_product(sp: &StructuredProblem) -> Result<InclusionProblem> {
    assemble_with_fault(sp, 0.0)
}

/// Assembly with an optional perturbation of the product-D first
/// coordinate; nonzero `fault` deliberately breaks the step equivalence
/// and exists for fault-injection tests of the comparator.
pub fn assemble_with_fault(sp: &StructuredProblem, fault: f64) -> Result<InclusionProblem> {
    let dim = sp.dim;
    let dual_dims = sp.dual_dims();
    let product_dim = sp.product_dim();
    let mut split_dims = vec![dim];
    split_dims.extend_from_slice(&dual_dims);

    // product A: blockwise resolvents, dual blocks through J_{γAᵢ⁻¹}
    let a_base = sp.a.clone();
    let a_blocks: Vec<ResolventOp> = sp.blocks.iter().map(|b| b.a.clone()).collect();
    let split_a = split_dims.clone();
    let product_a = ResolventOp::from_resolvent(product_dim, 0.0, "product", move |gamma, xv| {
        let parts = xv.split(&split_a);
        let mut out: Vec<Point> = Vec::with_capacity(parts.len());
        out.push(a_base.resolvent_unchecked(gamma, &parts[0]));
        for (i, blk_a) in a_blocks.iter().enumerate() {
            out.push(
                blk_a
                    .resolvent_of_inverse(gamma, &parts[i + 1])
                    .expect("gamma > 0"),
            );
        }
        Point::concat(&out.iter().collect::<Vec<_>>())
    });

    // product D: skew coupling + block-diagonal monotone parts
    let lipschitz = sp.coupling_norm()
        + sp.blocks
            .iter()
            .map(|b| b.d_inverse.lipschitz_constant().unwrap_or(0.0))
            .chain(std::iter::once(sp.d.lipschitz_constant().unwrap_or(0.0)))
            .fold(0.0, f64::max);
    let d_base = sp.d.clone();
    let d_blocks: Vec<(SingleValuedOp, LinearMap)> = sp
        .blocks
        .iter()
        .map(|b| (b.d_inverse.clone(), b.link.clone()))
        .collect();
    let split_d = split_dims.clone();
    let product_d = SingleValuedOp::from_eval(
        product_dim,
        Regularity::LipschitzMonotone(lipschitz),
        "product",
        move |xv| {
            let parts = xv.split(&split_d);
            let x = &parts[0];
            let mut first = d_base.eval_unchecked(x);
            for ((_, link), v) in d_blocks.iter().zip(&parts[1..]) {
                first = first.add(&link.apply_adjoint(v));
            }
            if fault != 0.0 {
                let mut coords = first.into_vec();
                coords[0] += fault;
                first = Point::from_raw(coords);
            }
            let mut out = vec![first];
            for ((d_inv, link), v) in d_blocks.iter().zip(&parts[1..]) {
                out.push(d_inv.eval_unchecked(v).sub(&link.apply(x)));
            }
            Point::concat(&out.iter().collect::<Vec<_>>())
        },
    );

    // product B: base B on the primal block, identity on dual blocks;
    // zero set C × ℝ^{g₁} × …; gap = base gap iff dual arguments vanish
    let b_base = sp.b.clone();
    let b_gap = sp.b.clone();
    let split_b = split_dims.clone();
    let split_gap = split_dims.clone();
    let mut zero_components = vec![sp.b.zero_set().clone()];
    for &g in &dual_dims {
        zero_components.push(ConvexSet::whole_space(g)?);
    }
    let product_zero_set = ConvexSet::product(zero_components)?;
    let product_b = PenaltyOp::custom(
        move |gamma, xv| {
            let parts = xv.split(&split_b);
            let mut out = vec![b_base.resolvent_unchecked(gamma, &parts[0])];
            out.extend(parts[1..].iter().cloned());
            Point::concat(&out.iter().collect::<Vec<_>>())
        },
        product_zero_set,
        move |p, beta| {
            let parts = p.split(&split_gap);
            if parts[1..]
                .iter()
                .all(|v| v.coords().iter().all(|c| *c == 0.0))
            {
                b_gap
                    .fitzpatrick_gap(&parts[0], beta)
                    .expect("beta > 0 and dims checked")
            } else {
                ExtReal::PosInf
            }
        },
        "product",
    );

    let mut prob = InclusionProblem::new(product_a, product_d, product_b)?;
    if let Some(sol) = &sp.known_solution {
        prob = prob.with_known_solution(sol.flatten())?;
    }
    // a certificate cannot certify a deliberately perturbed assembly
    if fault == 0.0 {
        if let Some(cert) = &sp.certificate {
            prob = prob.with_certificate(cert.clone())?;
        }
    }
    Ok(prob)
}

/// All intermediates of one primal-dual iteration.
#[derive(Debug, Clone)]
pub struct PdState {
    pub n: usize,
    pub state: ProductPoint,
    pub y1: Point,
    pub y2: Vec<Point>,
    pub p1: Point,
    pub p2: Vec<Point>,
    pub q: Point,
    pub next: ProductPoint,
}

/// One iteration of the unfolded primal-dual scheme:
///
/// ```text
///     y₁ = xₙ − λ(Σ Lᵢ*vᵢ + Dxₙ)            p₁ = J_{λA}(y₁)
///     y₂ᵢ = vᵢ − λ(Dᵢ⁻¹vᵢ − Lᵢxₙ)            p₂ᵢ = J_{λAᵢ⁻¹}(y₂ᵢ)
///     q  = p₁ − λ(Σ Lᵢ*p₂ᵢ + Dp₁)
///     vᵢ⁺ = vᵢ − y₂ᵢ + p₂ᵢ − λ(Dᵢ⁻¹p₂ᵢ − Lᵢp₁)
///     x⁺  = J_{λβB}(xₙ − y₁ + q)
/// ```
pub fn step(
    sp: &StructuredProblem,
    n: usize,
    state: &ProductPoint,
    lambda: f64,
    beta: f64,
) -> Result<PdState> {
    if state.x.dim() != sp.dim || state.duals.len() != sp.blocks.len() {
        return Err(Error::InvalidArgument(
            "state does not match the block structure".into(),
        ));
    }
    if !(lambda > 0.0 && beta > 0.0) {
        return Err(Error::InvalidArgument(
            "step sizes and penalty parameters must be positive".into(),
        ));
    }

    let x = &state.x;
    let dx = sp.d.eval_unchecked(x);
    let y1 = x.add_scaled(-lambda, &dx.add(&sp.coupling_adjoint_sum(&state.duals)));
    let y2: Vec<Point> = sp
        .blocks
        .iter()
        .zip(&state.duals)
        .map(|(blk, v)| {
            let drift = blk.d_inverse.eval_unchecked(v).sub(&blk.link.apply(x));
            v.add_scaled(-lambda, &drift)
        })
        .collect();

    let p1 = sp.a.resolvent(lambda, &y1)?;
    let p2: Vec<Point> = sp
        .blocks
        .iter()
        .zip(&y2)
        .map(|(blk, y)| blk.a.resolvent_of_inverse(lambda, y))
        .collect::<Result<_>>()?;

    let dp1 = sp.d.eval_unchecked(&p1);
    let q = p1.add_scaled(-lambda, &dp1.add(&sp.coupling_adjoint_sum(&p2)));
    let next_duals: Vec<Point> = sp
        .blocks
        .iter()
        .zip(&state.duals)
        .zip(y2.iter().zip(&p2))
        .map(|((blk, v), (y, p))| {
            let drift = blk.d_inverse.eval_unchecked(p).sub(&blk.link.apply(&p1));
            v.sub(y).add(p).add_scaled(-lambda, &drift)
        })
        .collect();
    let next_x = sp.b.resolvent(lambda * beta, &x.sub(&y1).add(&q))?;

    Ok(PdState {
        n,
        state: state.clone(),
        y1,
        y2,
        p1,
        p2,
        q,
        next: ProductPoint {
            x: next_x,
            duals: next_duals,
        },
    })
}

fn to_fbfb_state(st: &PdState) -> FbfbState {
    // reconstruct the dual parts of the product q from the v-update:
    // v⁺ = v − y₂ + q̃
    let q_duals: Vec<Point> = st
        .next
        .duals
        .iter()
        .zip(st.state.duals.iter().zip(&st.y2))
        .map(|(vn, (v, y))| vn.sub(v).add(y))
        .collect();
    let mut y_parts = vec![&st.y1];
    y_parts.extend(st.y2.iter());
    let mut p_parts = vec![&st.p1];
    p_parts.extend(st.p2.iter());
    let mut q_parts = vec![&st.q];
    q_parts.extend(q_duals.iter());
    FbfbState {
        n: st.n,
        x: st.state.flatten(),
        y: Point::concat(&y_parts),
        p: Point::concat(&p_parts),
        q: Point::concat(&q_parts),
        x_next: st.next.flatten(),
    }
}

/// Runs the unfolded scheme. Hypotheses are classified on the base penalty
/// B (the product gap series coincides with the base one), certificates on
/// the assembled product problem. The report carries primal and dual
/// iterates plus their λ-weighted ergodic averages.
pub fn run(
    sp: &StructuredProblem,
    schedule: &StepSchedule,
    opts: &RunOptions,
) -> Result<RunOutcome> {
    let assembled = assemble_product(sp)?;
    let eta = assembled.eta_for_two_forward_steps();
    let dual_dims = sp.dual_dims();
    let dim = sp.dim;

    // classify the gap hypothesis on the base penalty: the product gap
    // series equals the base series (dual gap arguments are zero on the
    // range of the product normal cone)
    let witness = match &sp.certificate {
        Some(cert) if cert.p.norm() > 0.0 => ProductPoint::unflatten(&cert.p, dim, &dual_dims).x,
        _ => sp.b.probe_witness()?,
    };
    let setup = DriverSetup {
        algorithm: "pd",
        eta,
        step_threshold: 0.5 * eta,
        basis: HypothesisBasis {
            b: sp.b.clone(),
            witness,
        },
    };

    let outcome = driver(&assembled, schedule, opts, setup, |_, n, xv, l, b| {
        let state = ProductPoint::unflatten(xv, dim, &dual_dims);
        let st = step(sp, n, &state, l, b)?;
        Ok(DriverState {
            x_next: st.next.flatten(),
            residual_state: ResidualState::Fbfb(to_fbfb_state(&st)),
        })
    })?;

    // split flattened rows into primal and dual parts for the trace
    let mut outcome = outcome;
    for row in &mut outcome.trace {
        let full = Point::from_raw(row.x.clone());
        let pp = ProductPoint::unflatten(&full, dim, &dual_dims);
        row.x = pp.x.coords().to_vec();
        row.duals = pp.duals.iter().map(|d| d.coords().to_vec()).collect();
    }
    let final_full = Point::from_raw(outcome.report.final_x.clone());
    let pp = ProductPoint::unflatten(&final_full, dim, &dual_dims);
    outcome.report.final_x = pp.x.coords().to_vec();
    outcome.report.final_duals = pp.duals.iter().map(|d| d.coords().to_vec()).collect();
    let erg_full = Point::from_raw(outcome.report.final_ergodic.clone());
    let pe = ProductPoint::unflatten(&erg_full, dim, &dual_dims);
    outcome.report.final_ergodic = pe.x.coords().to_vec();
    outcome.report.final_ergodic_duals = pe.duals.iter().map(|d| d.coords().to_vec()).collect();
    Ok(outcome)
}

/// Runs the unfolded scheme and the two-forward-step solver on the
/// assembled product problem side by side from the same start, and returns
/// the maximum componentwise deviation across all steps. Zero fault is the
/// equivalence check; a nonzero fault perturbs the assembly and must be
/// detected as a nonzero deviation.
pub fn max_step_deviation(
    sp: &StructuredProblem,
    schedule: &StepSchedule,
    steps: usize,
    start: &ProductPoint,
    fault: f64,
) -> Result<f64> {
    let assembled = assemble_with_fault(sp, fault)?;
    let mut native = start.clone();
    let mut product = start.flatten();
    let mut max_dev: f64 = 0.0;
    for n in 1..=steps {
        let (lambda, beta) = schedule.at(n);
        native = step(sp, n, &native, lambda, beta)?.next;
        product = crate::fbfb::step(&assembled, n, &product, lambda, beta)?.x_next;
        let flat = native.flatten();
        for (a, b) in flat.coords().iter().zip(product.coords()) {
            max_dev = max_dev.max((a - b).abs());
        }
        if !flat.is_finite() || !product.is_finite() {
            return Err(Error::NonFinite {
                n,
                what: "comparator iterate".into(),
            });
        }
    }
    Ok(max_dev)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn pt(coords: &[f64]) -> Point {
        Point::new(coords.to_vec()).unwrap()
    }

    fn rotation(scale: f64) -> LinearMap {
        LinearMap::from_rows(vec![vec![0.0, scale], vec![-scale, 0.0]]).unwrap()
    }

    /// d = 2, one block with g = 2: quadratic A and A₁, skew D, Dᵢ⁻¹ = ν·Id.
    fn sample_structured() -> StructuredProblem {
        let a = ResolventOp::subdiff_quadratic(pt(&[1.0, 2.0]), 1.0).unwrap();
        let d = SingleValuedOp::skew(rotation(0.5)).unwrap();
        let block = Block {
            a: ResolventOp::subdiff_quadratic(pt(&[0.5, -0.5]), 2.0).unwrap(),
            d_inverse: SingleValuedOp::scaled_identity(2, 0.3).unwrap(),
            link: LinearMap::from_rows(vec![vec![1.0, 1.0], vec![0.0, 1.0]]).unwrap(),
        };
        let b = PenaltyOp::half_dist_sq(ConvexSet::halfspace(pt(&[1.0, 0.0]), 10.0).unwrap());
        StructuredProblem::new(a, d, vec![block], b).unwrap()
    }

    #[test]
    fn step_equals_two_forward_steps_on_product() {
        let sp = sample_structured();
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for _ in 0..200 {
            let state = ProductPoint {
                x: crate::operators::random_point(&mut rng, 2, 5.0),
                duals: vec![crate::operators::random_point(&mut rng, 2, 5.0)],
            };
            let lambda = rng.gen_range(1e-3..1.0);
            let beta = rng.gen_range(1e-3..1.0f64).recip();
            let native = step(&sp, 1, &state, lambda, beta).unwrap().next.flatten();
            let assembled = assemble_product(&sp).unwrap();
            let product = crate::fbfb::step(&assembled, 1, &state.flatten(), lambda, beta)
                .unwrap()
                .x_next;
            let dev = native
                .coords()
                .iter()
                .zip(product.coords())
                .map(|(a, b)| (a - b).abs())
                .fold(0.0f64, f64::max);
            assert!(dev <= 1e-12, "step deviation {dev}");
        }
    }

    #[test]
    fn all_zero_operators_keep_origin_stationary() {
        let block = Block {
            a: ResolventOp::zero(2),
            d_inverse: SingleValuedOp::zero(2),
            link: LinearMap::identity(2),
        };
        let sp = StructuredProblem::new(
            ResolventOp::zero(2),
            SingleValuedOp::zero(2),
            vec![block],
            PenaltyOp::normal_cone(ConvexSet::whole_space(2).unwrap()),
        )
        .unwrap();
        let origin = ProductPoint::zeros(2, &[2]);
        let st = step(&sp, 1, &origin, 0.5, 2.0).unwrap();
        assert_eq!(st.next, origin);
    }

    #[test]
    fn pinned_dual_block_fixed_point() {
        // A = ∂(½‖·−a‖²), A₁ = N_{{0}} (so A₁⁻¹ ≡ 0 and J_{λA₁⁻¹} = Id),
        // D = D₁⁻¹ = 0, L₁ = Id: the inclusion forces L₁x = 0, and
        // x = 0, v = a solves it; that point is stationary for every (λ, β)
        let a_target = pt(&[1.0, 2.0]);
        let block = Block {
            a: ResolventOp::normal_cone(ConvexSet::singleton(Point::zeros(2))),
            d_inverse: SingleValuedOp::zero(2),
            link: LinearMap::identity(2),
        };
        let sp = StructuredProblem::new(
            ResolventOp::subdiff_quadratic(a_target.clone(), 1.0).unwrap(),
            SingleValuedOp::zero(2),
            vec![block],
            PenaltyOp::normal_cone(ConvexSet::whole_space(2).unwrap()),
        )
        .unwrap();
        let kkt = ProductPoint {
            x: Point::zeros(2),
            duals: vec![a_target.clone()],
        };
        for (lambda, beta) in [(1.0, 1.0), (0.1, 10.0), (2.0, 0.5)] {
            let st = step(&sp, 1, &kkt, lambda, beta).unwrap();
            assert!(st.next.distance_to(&kkt) < 1e-14);
            // the dual resolvent degenerates to the identity
            assert!(st.p2[0].distance_to(&st.y2[0]) < 1e-15);
        }
    }

    #[test]
    fn product_d_is_monotone_but_not_cocoercive() {
        let sp = sample_structured();
        let assembled = assemble_product(&sp).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..100 {
            let x = crate::operators::random_point(&mut rng, 4, 5.0);
            let y = crate::operators::random_point(&mut rng, 4, 5.0);
            let gap = x.sub(&y).inner(
                &assembled
                    .d
                    .eval(&x)
                    .unwrap()
                    .sub(&assembled.d.eval(&y).unwrap()),
            );
            assert!(gap >= -1e-9, "product D must be monotone, got {gap}");
        }
        // the one-forward-step scheme refuses the assembled problem
        assert!(matches!(
            assembled.eta_for_one_forward_step(),
            Err(Error::Admission(_))
        ));
    }

    #[test]
    fn product_gap_matches_base_iff_duals_vanish() {
        let sp = sample_structured();
        let assembled = assemble_product(&sp).unwrap();
        let p_base = pt(&[3.0, 0.0]);
        let beta = 2.0;
        let base_gap = sp.b.fitzpatrick_gap(&p_base, beta).unwrap();
        let p_prod = Point::concat(&[&p_base, &Point::zeros(2)]);
        assert_eq!(
            assembled.b.fitzpatrick_gap(&p_prod, beta).unwrap(),
            base_gap
        );
        let p_bad = Point::concat(&[&p_base, &pt(&[1e-9, 0.0])]);
        assert_eq!(
            assembled.b.fitzpatrick_gap(&p_bad, beta).unwrap(),
            ExtReal::PosInf
        );
    }

    #[test]
    fn product_b_fixed_points_pass_duals_through() {
        let sp = sample_structured();
        let assembled = assemble_product(&sp).unwrap();
        let x_in_c = pt(&[-1.0, 4.0]); // satisfies x₁ ≤ 10
        let v = pt(&[7.0, -3.0]);
        let state = Point::concat(&[&x_in_c, &v]);
        let out = assembled.b.resolvent(3.0, &state).unwrap();
        assert!(out.distance_to(&state) < 1e-12);
    }

    #[test]
    fn coupling_norm_matches_stacked_singular_value() {
        let sp = sample_structured();
        // stacked link is the single 2×2 block: σ_max of [[1,1],[0,1]]
        let expected = sp.blocks[0].link.operator_norm();
        assert!((sp.coupling_norm() - expected).abs() < 1e-9);
    }

    #[test]
    fn comparator_detects_injected_fault() {
        let sp = sample_structured();
        let schedule = StepSchedule::default_benchmark();
        let start = ProductPoint::zeros(2, &[2]);
        let clean = max_step_deviation(&sp, &schedule, 100, &start, 0.0).unwrap();
        assert!(clean <= 1e-12);
        let faulty = max_step_deviation(&sp, &schedule, 100, &start, 1e-6).unwrap();
        assert!(
            faulty > 1e-9,
            "fault must surface as deviation, got {faulty}"
        );
    }

    #[test]
    fn no_blocks_degenerates_to_plain_two_forward_steps() {
        let a = ResolventOp::subdiff_quadratic(pt(&[2.0, 3.0]), 1.0).unwrap();
        let sp = StructuredProblem::new(
            a,
            SingleValuedOp::zero(2),
            vec![],
            PenaltyOp::half_dist_sq(ConvexSet::halfspace(pt(&[1.0, 0.0]), 0.0).unwrap()),
        )
        .unwrap();
        let schedule = StepSchedule::default_benchmark();
        let start = ProductPoint::zeros(2, &[]);
        let dev = max_step_deviation(&sp, &schedule, 500, &start, 0.0).unwrap();
        assert_eq!(dev, 0.0);
    }

    #[test]
    fn strongly_monotone_blocks_give_iterate_convergence() {
        // both A and A₁⁻¹ strongly monotone: the primal-dual iterates (not
        // just their averages) converge to the KKT point
        let bench = crate::benchmarks::structured_benchmark().unwrap();
        let crate::benchmarks::BenchmarkProblem::Structured(sp) = bench.problem else {
            panic!()
        };
        let schedule = StepSchedule::power_law(1.0, 0.6, 1.0, 1.0).unwrap();
        let out = run(
            &sp,
            &schedule,
            &crate::problem::RunOptions::with_budget(20_000),
        )
        .unwrap();
        assert!(out.report.dist_last.unwrap() < 1e-8);
        // dual iterates land on the dual oracle
        let v = Point::new(out.report.final_duals[0].clone()).unwrap();
        let oracle = sp.known_solution.as_ref().unwrap();
        assert!(v.distance_to(&oracle.duals[0]) < 1e-8);
        // the gap hypothesis is classified on the base penalty, where the
        // half-dist² power-law criterion is analytic
        assert_eq!(out.report.gap_verdict, "satisfied");
    }

    #[test]
    fn rejects_zero_link() {
        let block = Block {
            a: ResolventOp::zero(2),
            d_inverse: SingleValuedOp::zero(2),
            link: LinearMap::from_rows(vec![vec![0.0, 0.0], vec![0.0, 0.0]]).unwrap(),
        };
        let err = StructuredProblem::new(
            ResolventOp::zero(2),
            SingleValuedOp::zero(2),
            vec![block],
            PenaltyOp::normal_cone(ConvexSet::whole_space(2).unwrap()),
        )
        .unwrap_err();
        assert!(matches!(err, Error::InvalidArgument(_)));
    }
}
