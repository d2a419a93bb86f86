//! The penalty operator B: a maximally monotone operator whose zero set is
//! the constraint set C. Provides its resolvent and a closed-form evaluator
//! for the Fitzpatrick gap sup_{ũ∈C} φ_B(ũ, p/β) − σ_C(p/β), the quantity
//! whose λβ-weighted series must stay finite for the penalty schemes to
//! converge.

use crate::operators::LinearMap;
use crate::space::{ConvexSet, ExtReal, Point};
use crate::{Error, Result};
use nalgebra::DMatrix;
use std::sync::Arc;

type ResolventFn = dyn Fn(f64, &Point) -> Point + Send + Sync;
type GapFn = dyn Fn(&Point, f64) -> ExtReal + Send + Sync;

/// Penalty operator classes with closed-form resolvents and gap values.
#[derive(Clone)]
enum Variant {
    /// B = N_S. Gap is identically 0 on dom σ_S: the condition holds for
    /// any schedule.
    NormalCone,
    /// B = ∂(½ d_S²). Gap bounded by ½‖p/β‖², which decays quadratically
    /// in β.
    HalfDistSq,
    /// B = ∂ d_S. Gap is 0 for ‖p‖ ≤ β and +∞ otherwise; the summability
    /// condition fails whenever S is a proper subset.
    Dist,
    /// B x = K x for a skew linear K; zer B = ker K. Gap is +∞ for every
    /// nonzero p ⊥ ker K.
    SkewLinear { map: LinearMap },
    /// User-supplied resolvent and gap evaluator; the library never guesses
    /// a gap for operators it does not know.
    Custom {
        resolvent: Arc<ResolventFn>,
        gap: Arc<GapFn>,
        label: String,
    },
}

/// A penalty operator together with its (nonempty) zero set.
#[derive(Clone)]
pub struct PenaltyOp {
    variant: Variant,
    zero_set: ConvexSet,
}

impl std::fmt::Debug for PenaltyOp {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PenaltyOp")
            .field("variant", &self.variant_name())
            .field("zero_set_dim", &self.zero_set.dim())
            .finish()
    }
}

impl PenaltyOp {
    /// B = N_S; the resolvent is the projection onto S for every γ.
    pub fn normal_cone(set: ConvexSet) -> Self {
        PenaltyOp {
            variant: Variant::NormalCone,
            zero_set: set,
        }
    }

    /// B = ∂Ψ with Ψ = ½ d_S²; resolvent x/(γ+1) + γ·Proj_S(x)/(γ+1).
    pub fn half_dist_sq(set: ConvexSet) -> Self {
        PenaltyOp {
            variant: Variant::HalfDistSq,
            zero_set: set,
        }
    }

    /// B = ∂Ψ with Ψ = d_S; resolvent is the prox of γ·d_S.
    pub fn dist(set: ConvexSet) -> Self {
        PenaltyOp {
            variant: Variant::Dist,
            zero_set: set,
        }
    }

    /// B x = K x for a nonzero skew linear K. The zero set is ker K,
    /// computed by a rank-revealing decomposition with singular-value
    /// cutoff 1e−10.
    pub fn skew_linear(map: LinearMap) -> Result<Self> {
        let defect = map.antisymmetry_defect();
        if defect > 1e-12 {
            return Err(Error::NotSkew(defect));
        }
        if map.is_zero() {
            return Err(Error::InvalidArgument(
                "skew penalty must be nonzero (use normal_cone(whole_space) for B = 0)".into(),
            ));
        }
        let dim = map.ncols();
        let basis = map.kernel_basis(1e-10);
        let zero_set = ConvexSet::affine_subspace(basis, Point::zeros(dim))?;
        Ok(PenaltyOp {
            variant: Variant::SkewLinear { map },
            zero_set,
        })
    }

    /// User-supplied penalty: resolvent map, zero set, and gap evaluator.
    /// The gap evaluator must return sup_{ũ∈C} φ_B(ũ, p/β) − σ_C(p/β) (or a
    /// finite upper bound for it); it is never inferred.
    pub fn custom<F, G>(resolvent: F, zero_set: ConvexSet, gap: G, label: &str) -> Self
    where
        F: Fn(f64, &Point) -> Point + Send + Sync + 'static,
        G: Fn(&Point, f64) -> ExtReal + Send + Sync + 'static,
    {
        PenaltyOp {
            variant: Variant::Custom {
                resolvent: Arc::new(resolvent),
                gap: Arc::new(gap),
                label: label.to_string(),
            },
            zero_set,
        }
    }

    pub fn dim(&self) -> usize {
        self.zero_set.dim()
    }

    /// The constraint set C = zer B.
    pub fn zero_set(&self) -> &ConvexSet {
        &self.zero_set
    }

    pub fn variant_name(&self) -> &str {
        match &self.variant {
            Variant::NormalCone => "normal_cone",
            Variant::HalfDistSq => "half_dist_sq",
            Variant::Dist => "dist",
            Variant::SkewLinear { .. } => "skew_linear",
            Variant::Custom { label, .. } => label,
        }
    }

    pub fn is_normal_cone(&self) -> bool {
        matches!(self.variant, Variant::NormalCone)
    }

    pub fn is_half_dist_sq(&self) -> bool {
        matches!(self.variant, Variant::HalfDistSq)
    }

    pub fn is_dist(&self) -> bool {
        matches!(self.variant, Variant::Dist)
    }

    pub fn is_skew_linear(&self) -> bool {
        matches!(self.variant, Variant::SkewLinear { .. })
    }

    pub fn is_custom(&self) -> bool {
        matches!(self.variant, Variant::Custom { .. })
    }

    /// J_{γB}(x).
    pub fn resolvent(&self, gamma: f64, x: &Point) -> Result<Point> {
        if !(gamma > 0.0 && gamma.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "penalty resolvent parameter must be positive, got {gamma}"
            )));
        }
        if x.dim() != self.dim() {
            return Err(Error::dim(self.dim(), x.dim()));
        }
        Ok(self.resolvent_unchecked(gamma, x))
    }

    pub(crate) fn resolvent_unchecked(&self, gamma: f64, x: &Point) -> Point {
        match &self.variant {
            Variant::NormalCone => self.zero_set.project_unchecked(x),
            Variant::HalfDistSq => {
                let proj = self.zero_set.project_unchecked(x);
                x.add_scaled(gamma, &proj).scale(1.0 / (gamma + 1.0))
            }
            Variant::Dist => {
                let proj = self.zero_set.project_unchecked(x);
                let d = x.distance_to(&proj);
                if d <= gamma {
                    proj
                } else {
                    // shrink toward the set by exactly γ along x − Proj x
                    x.add_scaled(-gamma / d, &x.sub(&proj))
                }
            }
            Variant::SkewLinear { map } => {
                let n = map.ncols();
                let lhs = DMatrix::identity(n, n) + map.matrix().scale(gamma);
                let sol = lhs
                    .lu()
                    .solve(&x.as_dvector())
                    .expect("I + γK is invertible for skew K");
                Point::from_dvector(&sol)
            }
            Variant::Custom { resolvent, .. } => resolvent(gamma, x),
        }
    }

    /// A deterministic probe direction in Ran N_C for classifiers that
    /// need a witness: w − Proj_C(w) for a fixed probe w, zero when every
    /// probe already lies in C (e.g. C = ℝ^d).
    pub fn probe_witness(&self) -> Result<Point> {
        let c = &self.zero_set;
        let dim = self.dim();
        for scale in [1.0, 10.0, -3.0, 100.0, -100.0] {
            let probe = Point::from_raw(
                (0..dim)
                    .map(|i| scale * (1.0 + i as f64))
                    .collect::<Vec<_>>(),
            );
            let p = probe.sub(&c.project(&probe)?);
            if p.norm() > 1e-9 {
                return Ok(p);
            }
        }
        Ok(Point::zeros(dim))
    }

    /// The Fitzpatrick gap sup_{ũ∈C} φ_B(ũ, p/β) − σ_C(p/β), evaluated in
    /// closed form per variant (for `half_dist_sq` the conjugate upper
    /// bound ½‖p/β‖², which dominates the gap and decays the same way).
    /// Always ≥ 0 for p in the range of N_C.
    pub fn fitzpatrick_gap(&self, p: &Point, beta: f64) -> Result<ExtReal> {
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "penalty parameter must be positive, got {beta}"
            )));
        }
        if p.dim() != self.dim() {
            return Err(Error::dim(self.dim(), p.dim()));
        }
        Ok(match &self.variant {
            Variant::NormalCone => {
                // φ_{N_C}(x, u) = δ_C(x) + σ_C(u): the σ_C terms cancel
                // whenever they are finite
                match self.zero_set.support_unchecked(&p.scale(1.0 / beta)) {
                    ExtReal::Finite(_) => ExtReal::finite(0.0),
                    ExtReal::PosInf => ExtReal::PosInf,
                }
            }
            Variant::HalfDistSq => {
                // Ψ* = σ_C + ½‖·‖²: gap ≤ Ψ*(p/β) − σ_C(p/β) = ½‖p/β‖²
                ExtReal::finite(0.5 * p.norm_sq() / (beta * beta))
            }
            Variant::Dist => {
                // Ψ* = σ_C + δ_unit-ball: zero inside ‖p‖ ≤ β, +∞ outside
                if p.norm() <= beta {
                    ExtReal::finite(0.0)
                } else {
                    ExtReal::PosInf
                }
            }
            Variant::SkewLinear { .. } => {
                // sup over y of ⟨y, p/β⟩ is +∞ for every nonzero p
                if p.norm() == 0.0 {
                    ExtReal::finite(0.0)
                } else {
                    ExtReal::PosInf
                }
            }
            Variant::Custom { gap, .. } => gap(p, beta),
        })
    }
}
