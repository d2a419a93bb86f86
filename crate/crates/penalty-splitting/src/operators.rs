//! Operator abstractions: set-valued maximally monotone operators exposed
//! through their resolvents, single-valued operators with declared
//! regularity, and dense linear maps with adjoints.

use crate::space::{ConvexSet, Point};
use crate::{Error, Result};
use nalgebra::{DMatrix, DVector};
use std::sync::Arc;

type ResolventFn = dyn Fn(f64, &Point) -> Point + Send + Sync;
type EvalFn = dyn Fn(&Point) -> Point + Send + Sync;

/// A maximally monotone operator M represented by its parameterized
/// resolvent x ↦ J_{γM}(x) = (Id + γM)^{-1}x. The graph of M is never
/// materialized; the solvers touch M exclusively through this map.
#[derive(Clone)]
pub struct ResolventOp {
    resolvent: Arc<ResolventFn>,
    dim: usize,
    strong_monotonicity: f64,
    label: String,
}

impl std::fmt::Debug for ResolventOp {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ResolventOp")
            .field("dim", &self.dim)
            .field("strong_monotonicity", &self.strong_monotonicity)
            .field("label", &self.label)
            .finish()
    }
}

impl ResolventOp {
    /// Wraps a user-supplied resolvent map. The map must be single-valued
    /// and everywhere defined, and firmly nonexpansive for each fixed γ;
    /// this is spot-verified by sampling, not proven.
    pub fn from_resolvent<F>(dim: usize, strong_monotonicity: f64, label: &str, f: F) -> Self
    where
        F: Fn(f64, &Point) -> Point + Send + Sync + 'static,
    {
        assert!(strong_monotonicity >= 0.0);
        ResolventOp {
            resolvent: Arc::new(f),
            dim,
            strong_monotonicity,
            label: label.to_string(),
        }
    }

    /// The zero operator M ≡ {0}, whose resolvent is the identity.
    pub fn zero(dim: usize) -> Self {
        ResolventOp::from_resolvent(dim, 0.0, "zero", |_, x| x.clone())
    }

    /// M x = weight·(x − a), the gradient of x ↦ (weight/2)‖x − a‖².
    /// Resolvent: (x + γ·weight·a)/(1 + γ·weight). Strongly monotone with
    /// modulus `weight`.
    pub fn subdiff_quadratic(a: Point, weight: f64) -> Result<Self> {
        if !(weight > 0.0 && weight.is_finite()) {
            return Err(Error::InvalidArgument(
                "subdiff_quadratic weight must be positive".into(),
            ));
        }
        let dim = a.dim();
        Ok(ResolventOp::from_resolvent(
            dim,
            weight,
            "subdiff_quadratic",
            move |gamma, x| {
                let gw = gamma * weight;
                x.add_scaled(gw, &a).scale(1.0 / (1.0 + gw))
            },
        ))
    }

    /// The normal cone N_S; its resolvent is the metric projection onto S
    /// for every γ > 0.
    pub fn normal_cone(set: ConvexSet) -> Self {
        let dim = set.dim();
        ResolventOp::from_resolvent(dim, 0.0, "normal_cone", move |_, x| {
            set.project_unchecked(x)
        })
    }

    /// Affine operator M x = W x + c with W + Wᵀ ⪰ 0; the resolvent solves
    /// (I + γW) z = x − γc. Rejects non-monotone W (smallest eigenvalue of
    /// the symmetric part below −1e−10).
    pub fn affine(map: LinearMap, offset: Point) -> Result<Self> {
        if map.nrows() != map.ncols() {
            return Err(Error::InvalidArgument(
                "affine operator must be square".into(),
            ));
        }
        if offset.dim() != map.nrows() {
            return Err(Error::dim(map.nrows(), offset.dim()));
        }
        let w = map.matrix().clone();
        let sym = (&w + w.transpose()).scale(0.5);
        let min_eig = sym
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        if min_eig < -1e-10 {
            return Err(Error::InvalidArgument(format!(
                "affine operator is not monotone: λ_min of symmetric part = {min_eig:.3e}"
            )));
        }
        let dim = offset.dim();
        let modulus = min_eig.max(0.0);
        let c = offset.as_dvector();
        Ok(ResolventOp::from_resolvent(
            dim,
            modulus,
            "affine",
            move |gamma, x| {
                let lhs = DMatrix::identity(dim, dim) + w.scale(gamma);
                let rhs = x.as_dvector() - c.scale(gamma);
                let sol = lhs
                    .lu()
                    .solve(&rhs)
                    .expect("I + γW is invertible for monotone W and γ > 0");
                Point::from_dvector(&sol)
            },
        ))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn strong_monotonicity_modulus(&self) -> f64 {
        self.strong_monotonicity
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// J_{γM}(x).
    pub fn resolvent(&self, gamma: f64, x: &Point) -> Result<Point> {
        if !(gamma > 0.0 && gamma.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "resolvent parameter must be positive, got {gamma}"
            )));
        }
        if x.dim() != self.dim {
            return Err(Error::dim(self.dim, x.dim()));
        }
        Ok((self.resolvent)(gamma, x))
    }

    pub(crate) fn resolvent_unchecked(&self, gamma: f64, x: &Point) -> Point {
        (self.resolvent)(gamma, x)
    }

    /// J_{γM^{-1}}(y), computed from this operator's resolvent through the
    /// decomposition J_{γM^{-1}}(y) = y − γ·J_{γ^{-1}M}(γ^{-1}y).
    pub fn resolvent_of_inverse(&self, gamma: f64, y: &Point) -> Result<Point> {
        if !(gamma > 0.0 && gamma.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "resolvent parameter must be positive, got {gamma}"
            )));
        }
        let inner = self.resolvent(1.0 / gamma, &y.scale(1.0 / gamma))?;
        Ok(y.add_scaled(-gamma, &inner))
    }
}

/// Declared regularity class of a single-valued monotone operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Regularity {
    /// ⟨x−y, Dx−Dy⟩ ≥ η‖Dx−Dy‖² with η > 0. Implies monotone and
    /// (1/η)-Lipschitz.
    Cocoercive(f64),
    /// Monotone and L-Lipschitz; not necessarily cocoercive (e.g. skew).
    LipschitzMonotone(f64),
    /// D ≡ 0.
    Zero,
}

/// A single-valued operator D: ℝ^d → ℝ^d with declared regularity.
/// Regularity is user-declared and spot-verified by sampling, never proven.
#[derive(Clone)]
pub struct SingleValuedOp {
    eval: Arc<EvalFn>,
    dim: usize,
    regularity: Regularity,
    label: String,
}

impl std::fmt::Debug for SingleValuedOp {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SingleValuedOp")
            .field("dim", &self.dim)
            .field("regularity", &self.regularity)
            .field("label", &self.label)
            .finish()
    }
}

impl SingleValuedOp {
    pub fn from_eval<F>(dim: usize, regularity: Regularity, label: &str, f: F) -> Self
    where
        F: Fn(&Point) -> Point + Send + Sync + 'static,
    {
        SingleValuedOp {
            eval: Arc::new(f),
            dim,
            regularity,
            label: label.to_string(),
        }
    }

    pub fn zero(dim: usize) -> Self {
        SingleValuedOp::from_eval(dim, Regularity::Zero, "zero", |x| Point::zeros(x.dim()))
    }

    /// Skew linear operator D x = K x with ⟨x, Kx⟩ = 0, i.e. K = −Kᵀ.
    /// Monotone and ‖K‖-Lipschitz, but never cocoercive unless K = 0.
    /// Rejects matrices that are not antisymmetric within 1e−12.
    pub fn skew(map: LinearMap) -> Result<Self> {
        let defect = map.antisymmetry_defect();
        if defect > 1e-12 {
            return Err(Error::NotSkew(defect));
        }
        let dim = map.ncols();
        let norm = map.operator_norm();
        Ok(SingleValuedOp::from_eval(
            dim,
            Regularity::LipschitzMonotone(norm),
            "skew",
            move |x| map.apply(x),
        ))
    }

    /// Affine operator D x = W x + c with declared regularity.
    pub fn affine(map: LinearMap, offset: Point, regularity: Regularity) -> Result<Self> {
        if map.nrows() != map.ncols() {
            return Err(Error::InvalidArgument(
                "affine operator must be square".into(),
            ));
        }
        if offset.dim() != map.nrows() {
            return Err(Error::dim(map.nrows(), offset.dim()));
        }
        let dim = offset.dim();
        Ok(SingleValuedOp::from_eval(
            dim,
            regularity,
            "affine",
            move |x| map.apply(x).add(&offset),
        ))
    }

    /// D x = c·x (c ≥ 0), cocoercive with η = 1/c for c > 0.
    pub fn scaled_identity(dim: usize, c: f64) -> Result<Self> {
        if !(c >= 0.0 && c.is_finite()) {
            return Err(Error::InvalidArgument(
                "scale must be finite and ≥ 0".into(),
            ));
        }
        let regularity = if c == 0.0 {
            Regularity::Zero
        } else {
            Regularity::Cocoercive(1.0 / c)
        };
        Ok(SingleValuedOp::from_eval(
            dim,
            regularity,
            "scaled_identity",
            move |x| x.scale(c),
        ))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn regularity(&self) -> Regularity {
        self.regularity
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn eval(&self, x: &Point) -> Result<Point> {
        if x.dim() != self.dim {
            return Err(Error::dim(self.dim, x.dim()));
        }
        Ok((self.eval)(x))
    }

    pub(crate) fn eval_unchecked(&self, x: &Point) -> Point {
        (self.eval)(x)
    }

    /// Lipschitz constant implied by the declared regularity, if any.
    pub fn lipschitz_constant(&self) -> Option<f64> {
        match self.regularity {
            Regularity::Cocoercive(eta) => Some(1.0 / eta),
            Regularity::LipschitzMonotone(l) => Some(l),
            Regularity::Zero => Some(0.0),
        }
    }

    /// Checks the declared regularity inequalities on sampled pairs and
    /// returns the first violation found. Catches configuration mistakes;
    /// a pass is evidence, not proof.
    pub fn spot_check_regularity<R: rand::Rng>(
        &self,
        rng: &mut R,
        pairs: usize,
        tol: f64,
    ) -> Result<()> {
        for _ in 0..pairs {
            let x = random_point(rng, self.dim, 10.0);
            let y = random_point(rng, self.dim, 10.0);
            let dx = self.eval_unchecked(&x);
            let dy = self.eval_unchecked(&y);
            let gap = x.sub(&y).inner(&dx.sub(&dy));
            let dd = dx.sub(&dy).norm_sq();
            match self.regularity {
                Regularity::Cocoercive(eta) => {
                    if gap < eta * dd - tol {
                        return Err(Error::InvalidArgument(format!(
                            "operator '{}' violates declared cocoercivity η={eta}: \
                             ⟨x−y,Dx−Dy⟩={gap:.6e} < η‖Dx−Dy‖²={:.6e}",
                            self.label,
                            eta * dd
                        )));
                    }
                }
                Regularity::LipschitzMonotone(l) => {
                    if gap < -tol {
                        return Err(Error::InvalidArgument(format!(
                            "operator '{}' violates declared monotonicity: ⟨x−y,Dx−Dy⟩={gap:.6e}",
                            self.label
                        )));
                    }
                    let lhs = dx.sub(&dy).norm();
                    let rhs = l * x.sub(&y).norm();
                    if lhs > rhs + tol {
                        return Err(Error::InvalidArgument(format!(
                            "operator '{}' violates declared Lipschitz constant {l}: \
                             ‖Dx−Dy‖={lhs:.6e} > L‖x−y‖={rhs:.6e}",
                            self.label
                        )));
                    }
                }
                Regularity::Zero => {
                    if dx.norm() > tol || dy.norm() > tol {
                        return Err(Error::InvalidArgument(format!(
                            "operator '{}' declared zero but evaluates nonzero",
                            self.label
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

pub(crate) fn random_point<R: rand::Rng>(rng: &mut R, dim: usize, scale: f64) -> Point {
    Point::from_raw((0..dim).map(|_| rng.gen_range(-scale..scale)).collect())
}

/// Dense linear map K: ℝ^cols → ℝ^rows with cached operator norm.
#[derive(Debug, Clone)]
pub struct LinearMap {
    matrix: DMatrix<f64>,
    operator_norm: f64,
}

impl LinearMap {
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        if rows.is_empty() || rows[0].is_empty() {
            return Err(Error::InvalidArgument("matrix must be nonempty".into()));
        }
        let ncols = rows[0].len();
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::InvalidArgument("ragged matrix rows".into()));
        }
        if rows.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(
                "matrix entries must be finite".into(),
            ));
        }
        let matrix = DMatrix::from_row_iterator(rows.len(), ncols, rows.into_iter().flatten());
        Ok(Self::from_matrix(matrix))
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_matrix(DMatrix::identity(dim, dim))
    }

    pub(crate) fn from_matrix(matrix: DMatrix<f64>) -> Self {
        let operator_norm = matrix
            .clone()
            .svd(false, false)
            .singular_values
            .iter()
            .copied()
            .fold(0.0, f64::max);
        LinearMap {
            matrix,
            operator_norm,
        }
    }

    pub fn nrows(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.matrix.ncols()
    }

    pub fn operator_norm(&self) -> f64 {
        self.operator_norm
    }

    pub fn is_zero(&self) -> bool {
        self.operator_norm == 0.0
    }

    pub(crate) fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// K x.
    pub fn apply(&self, x: &Point) -> Point {
        assert_eq!(x.dim(), self.ncols(), "apply: dimension mismatch");
        Point::from_dvector(&(&self.matrix * x.as_dvector()))
    }

    /// Kᵀ y, the adjoint: ⟨K*y, x⟩ = ⟨y, Kx⟩.
    pub fn apply_adjoint(&self, y: &Point) -> Point {
        assert_eq!(y.dim(), self.nrows(), "apply_adjoint: dimension mismatch");
        Point::from_dvector(&(self.matrix.transpose() * y.as_dvector()))
    }

    /// Largest entry of |K + Kᵀ| (0 for a perfectly skew matrix);
    /// `f64::INFINITY` for non-square maps.
    pub fn antisymmetry_defect(&self) -> f64 {
        if self.nrows() != self.ncols() {
            return f64::INFINITY;
        }
        let s = &self.matrix + self.matrix.transpose();
        s.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }

    /// Orthonormal basis of ker K, from a rank-revealing SVD with the given
    /// singular-value cutoff.
    pub fn kernel_basis(&self, cutoff: f64) -> Vec<Point> {
        let svd = self.matrix.clone().svd(false, true);
        let v_t = svd.v_t.expect("svd computed with v_t");
        // rows of v_t with significant singular values span the row space;
        // complete them to a basis of ℝ^ncols to read off the kernel
        let mut significant: Vec<DVector<f64>> = Vec::new();
        for (i, sv) in svd.singular_values.iter().enumerate() {
            if *sv > cutoff {
                significant.push(v_t.row(i).transpose());
            }
        }
        let n = self.ncols();
        let mut kernel: Vec<DVector<f64>> = Vec::new();
        for i in 0..n {
            let mut w = DVector::zeros(n);
            w[i] = 1.0;
            for b in significant.iter().chain(kernel.iter()) {
                let t = b.dot(&w);
                w -= b * t;
            }
            if w.norm() > 1e-10 {
                let nw = w.norm();
                kernel.push(w / nw);
            }
        }
        kernel.iter().map(Point::from_dvector).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn pt(coords: &[f64]) -> Point {
        Point::new(coords.to_vec()).unwrap()
    }

    fn rotation_generator() -> LinearMap {
        LinearMap::from_rows(vec![vec![0.0, 1.0], vec![-1.0, 0.0]]).unwrap()
    }

    #[test]
    fn subdiff_quadratic_resolvent_closed_form() {
        let m = ResolventOp::subdiff_quadratic(pt(&[2.0, 0.0]), 1.0).unwrap();
        assert_eq!(m.resolvent(1.0, &Point::zeros(2)).unwrap(), pt(&[1.0, 0.0]));

        let m0 = ResolventOp::subdiff_quadratic(Point::zeros(1), 1.0).unwrap();
        assert_eq!(m0.resolvent(2.0, &pt(&[3.0])).unwrap(), pt(&[1.0]));

        // the zero of M is a fixed point of the resolvent for every γ
        let a = pt(&[1.5, -2.5]);
        let m = ResolventOp::subdiff_quadratic(a.clone(), 3.0).unwrap();
        for gamma in [0.1, 1.0, 10.0] {
            assert!(m.resolvent(gamma, &a).unwrap().distance_to(&a) < 1e-15);
        }
    }

    #[test]
    fn normal_cone_resolvent_is_projection_for_any_gamma() {
        let h = ConvexSet::halfspace(pt(&[1.0, 0.0]), 0.0).unwrap();
        let m = ResolventOp::normal_cone(h);
        assert_eq!(m.resolvent(7.0, &pt(&[2.0, 3.0])).unwrap(), pt(&[0.0, 3.0]));

        let s = ResolventOp::normal_cone(ConvexSet::singleton(pt(&[1.0, 2.0])));
        assert_eq!(s.resolvent(0.3, &pt(&[9.0, 9.0])).unwrap(), pt(&[1.0, 2.0]));

        let w = ResolventOp::normal_cone(ConvexSet::whole_space(2).unwrap());
        assert_eq!(
            w.resolvent(1.0, &pt(&[4.0, -4.0])).unwrap(),
            pt(&[4.0, -4.0])
        );
    }

    #[test]
    fn resolvent_of_inverse_identity_operator() {
        // M = Id is self-inverse: both routes must give y/2
        let m = ResolventOp::subdiff_quadratic(Point::zeros(2), 1.0).unwrap();
        let y = pt(&[2.0, 0.0]);
        let direct = m.resolvent(1.0, &y).unwrap();
        let via_inverse = m.resolvent_of_inverse(1.0, &y).unwrap();
        assert_eq!(direct, pt(&[1.0, 0.0]));
        assert!(via_inverse.distance_to(&direct) < 1e-15);
    }

    #[test]
    fn resolvent_of_inverse_normal_cone() {
        // oracle: J_{γ(N_C)^{-1}}(y) = prox of γσ_C = projection of y onto
        // the normal ray {t·a, t ≥ 0}, computed independently below
        let h = ConvexSet::halfspace(pt(&[1.0, 0.0]), 0.0).unwrap();
        let m = ResolventOp::normal_cone(h);
        let got = m.resolvent_of_inverse(2.0, &pt(&[2.0, 2.0])).unwrap();
        assert!(got.distance_to(&pt(&[2.0, 0.0])) < 1e-15);
    }

    #[test]
    fn resolvent_of_inverse_affine_shift() {
        // M x = x − 4 in dim 1; direct inversion of (Id + M^{-1}):
        // M^{-1}(u) = u + 4, so z + z + 4 = 0 gives z = −2
        let m = ResolventOp::subdiff_quadratic(pt(&[4.0]), 1.0).unwrap();
        let got = m.resolvent_of_inverse(1.0, &pt(&[0.0])).unwrap();
        assert!(got.distance_to(&pt(&[-2.0])) < 1e-15);
    }

    #[test]
    fn resolvent_of_inverse_twice_recovers_resolvent() {
        let ops = vec![
            ResolventOp::subdiff_quadratic(pt(&[1.0, -2.0]), 2.5).unwrap(),
            ResolventOp::normal_cone(ConvexSet::ball(pt(&[0.5, 0.5]), 1.0).unwrap()),
            ResolventOp::normal_cone(
                ConvexSet::bounding_box(vec![-1.0, -1.0], vec![1.0, 1.0]).unwrap(),
            ),
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for m in &ops {
            for _ in 0..30 {
                let y = random_point(&mut rng, 2, 5.0);
                for gamma in [0.1, 1.0, 10.0] {
                    let direct = m.resolvent(gamma, &y).unwrap();
                    // apply the inverse decomposition to M^{-1} itself
                    let inner = m
                        .resolvent_of_inverse(1.0 / gamma, &y.scale(1.0 / gamma))
                        .unwrap();
                    let twice = y.add_scaled(-gamma, &inner);
                    assert!(
                        twice.distance_to(&direct) < 1e-10,
                        "double inverse must recover J_γM"
                    );
                }
            }
        }
    }

    #[test]
    fn firm_nonexpansiveness_sampled() {
        let ops = vec![
            ResolventOp::subdiff_quadratic(pt(&[1.0, -1.0]), 0.7).unwrap(),
            ResolventOp::normal_cone(ConvexSet::halfspace(pt(&[1.0, 1.0]), 1.0).unwrap()),
            ResolventOp::normal_cone(ConvexSet::ball(Point::zeros(2), 2.0).unwrap()),
            ResolventOp::affine(rotation_generator(), Point::zeros(2)).unwrap(),
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for m in &ops {
            for gamma in [0.1, 1.0, 10.0] {
                for _ in 0..100 {
                    let x = random_point(&mut rng, 2, 10.0);
                    let y = random_point(&mut rng, 2, 10.0);
                    let jx = m.resolvent(gamma, &x).unwrap();
                    let jy = m.resolvent(gamma, &y).unwrap();
                    let d = jx.sub(&jy);
                    assert!(
                        d.norm_sq() <= x.sub(&y).inner(&d) + 1e-9,
                        "firm nonexpansiveness failed for {}",
                        m.label()
                    );
                }
            }
        }
    }

    #[test]
    fn strong_monotonicity_gives_contraction() {
        let mu = 2.0;
        let m = ResolventOp::subdiff_quadratic(pt(&[3.0, 1.0]), mu).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for gamma in [0.1, 1.0, 10.0] {
            let factor = 1.0 / (1.0 + gamma * mu);
            for _ in 0..50 {
                let x = random_point(&mut rng, 2, 10.0);
                let y = random_point(&mut rng, 2, 10.0);
                let jd = m
                    .resolvent(gamma, &x)
                    .unwrap()
                    .distance_to(&m.resolvent(gamma, &y).unwrap());
                assert!(jd <= factor * x.distance_to(&y) + 1e-9);
            }
        }
    }

    #[test]
    fn skew_op_checks_antisymmetry() {
        let d = SingleValuedOp::skew(rotation_generator()).unwrap();
        let x = pt(&[1.0, 0.0]);
        let dx = d.eval(&x).unwrap();
        assert_eq!(dx, pt(&[0.0, -1.0]));
        assert_eq!(x.inner(&dx), 0.0);
        match d.regularity() {
            Regularity::LipschitzMonotone(l) => assert!((l - 1.0).abs() < 1e-12),
            other => panic!("expected Lipschitz-monotone, got {other:?}"),
        }

        let zero = LinearMap::from_rows(vec![vec![0.0, 0.0], vec![0.0, 0.0]]).unwrap();
        let dz = SingleValuedOp::skew(zero).unwrap();
        assert_eq!(dz.regularity(), Regularity::LipschitzMonotone(0.0));
        assert_eq!(dz.eval(&x).unwrap(), Point::zeros(2));

        let sym = LinearMap::from_rows(vec![vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert!(matches!(SingleValuedOp::skew(sym), Err(Error::NotSkew(_))));
    }

    #[test]
    fn skew_is_monotone_but_never_cocoercive() {
        let d = SingleValuedOp::skew(rotation_generator()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let eta = 1e-3;
        let mut cocoercivity_failed = false;
        for _ in 0..100 {
            let x = random_point(&mut rng, 2, 10.0);
            let y = random_point(&mut rng, 2, 10.0);
            let dd = d.eval(&x).unwrap().sub(&d.eval(&y).unwrap());
            let gap = x.sub(&y).inner(&dd);
            assert!(gap.abs() <= 1e-12 * (1.0 + x.norm() * dd.norm()));
            if gap < eta * dd.norm_sq() - 1e-12 {
                cocoercivity_failed = true;
            }
        }
        assert!(
            cocoercivity_failed,
            "a nonzero skew map must fail cocoercivity"
        );
    }

    #[test]
    fn spot_check_catches_wrong_declarations() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        // skew declared cocoercive: must fail
        let lying = SingleValuedOp::affine(
            rotation_generator(),
            Point::zeros(2),
            Regularity::Cocoercive(0.5),
        )
        .unwrap();
        assert!(lying.spot_check_regularity(&mut rng, 100, 1e-9).is_err());
        // honest declarations pass
        let honest = SingleValuedOp::skew(rotation_generator()).unwrap();
        assert!(honest.spot_check_regularity(&mut rng, 100, 1e-9).is_ok());
        let z = SingleValuedOp::zero(3);
        assert!(z.spot_check_regularity(&mut rng, 10, 1e-12).is_ok());
    }

    #[test]
    fn adjoint_consistency() {
        let k = LinearMap::from_rows(vec![vec![1.0, 2.0, 3.0], vec![4.0, 5.0, 6.0]]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..50 {
            let x = random_point(&mut rng, 3, 10.0);
            let y = random_point(&mut rng, 2, 10.0);
            let lhs = k.apply_adjoint(&y).inner(&x);
            let rhs = y.inner(&k.apply(&x));
            assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + lhs.abs()));
        }
    }

    #[test]
    fn kernel_basis_spans_null_space() {
        // rank-1 map on ℝ²: kernel is the line x₁ = x₂... for [[1, -1]]
        let k = LinearMap::from_rows(vec![vec![1.0, -1.0]]).unwrap();
        let basis = k.kernel_basis(1e-10);
        assert_eq!(basis.len(), 1);
        assert!(k.apply(&basis[0]).norm() < 1e-12);
        let expected = pt(&[1.0, 1.0]).scale(1.0 / 2f64.sqrt());
        assert!(
            basis[0].distance_to(&expected) < 1e-12
                || basis[0].distance_to(&expected.scale(-1.0)) < 1e-12
        );

        // full-rank square map: trivial kernel
        let r = rotation_generator();
        assert!(r.kernel_basis(1e-10).is_empty());
    }

    #[test]
    fn affine_resolvent_solves_linear_system() {
        // M x = K x with K skew: (I + γK) z = x
        let m = ResolventOp::affine(rotation_generator(), Point::zeros(2)).unwrap();
        let x = pt(&[1.0, 1.0]);
        let z = m.resolvent(1.0, &x).unwrap();
        // (I + K) z = x with K = [[0,1],[-1,0]]: z = (0, 1) → check residual
        let k = rotation_generator();
        let resid = z.add(&k.apply(&z)).sub(&x).norm();
        assert!(resid < 1e-14);

        // non-monotone affine rejected
        let neg = LinearMap::from_rows(vec![vec![-1.0]]).unwrap();
        assert!(ResolventOp::affine(neg, Point::zeros(1)).is_err());
    }
}
