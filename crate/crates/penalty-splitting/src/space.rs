//! Finite-dimensional Hilbert-space primitives: points of ℝ^d with the
//! Euclidean inner product, extended reals, and closed convex sets with
//! closed-form projection and support function.

use crate::{Error, Result};
use nalgebra::{DMatrix, DVector};

/// Default tolerance for membership residuals.
pub const MEMBERSHIP_TOL: f64 = 1e-9;

/// A point of ℝ^d. Coordinates are always finite.
#[derive(Debug, Clone, PartialEq)]
pub struct Point(Vec<f64>);

impl Point {
    /// Builds a point, rejecting NaN/±∞ coordinates and zero dimension.
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidArgument("point must have dim ≥ 1".into()));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidArgument(
                "point coordinates must be finite".into(),
            ));
        }
        Ok(Point(coords))
    }

    /// Origin of ℝ^d.
    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "dim must be ≥ 1");
        Point(vec![0.0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    /// Internal constructor for arithmetic results; skips the finiteness
    /// check (solver loops re-check iterates explicitly).
    pub(crate) fn from_raw(coords: Vec<f64>) -> Self {
        Point(coords)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }

    /// Euclidean inner product ⟨self, other⟩.
    pub fn inner(&self, other: &Point) -> f64 {
        assert_eq!(self.dim(), other.dim(), "inner: dimension mismatch");
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn norm(&self) -> f64 {
        self.inner(self).sqrt()
    }

    pub fn norm_sq(&self) -> f64 {
        self.inner(self)
    }

    /// Euclidean distance ‖self − target‖.
    pub fn distance_to(&self, target: &Point) -> f64 {
        self.sub(target).norm()
    }

    pub fn add(&self, other: &Point) -> Point {
        assert_eq!(self.dim(), other.dim(), "add: dimension mismatch");
        Point(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Point) -> Point {
        assert_eq!(self.dim(), other.dim(), "sub: dimension mismatch");
        Point(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, c: f64) -> Point {
        Point(self.0.iter().map(|a| c * a).collect())
    }

    /// self + c · other, in one pass.
    pub fn add_scaled(&self, c: f64, other: &Point) -> Point {
        assert_eq!(self.dim(), other.dim(), "add_scaled: dimension mismatch");
        Point(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + c * b)
                .collect(),
        )
    }

    /// Concatenates blocks into one point (product-space flattening).
    pub fn concat(blocks: &[&Point]) -> Point {
        let mut coords = Vec::new();
        for b in blocks {
            coords.extend_from_slice(b.coords());
        }
        Point(coords)
    }

    /// Splits into consecutive blocks of the given dimensions.
    pub fn split(&self, dims: &[usize]) -> Vec<Point> {
        assert_eq!(dims.iter().sum::<usize>(), self.dim(), "split: bad dims");
        let mut out = Vec::with_capacity(dims.len());
        let mut at = 0;
        for &d in dims {
            out.push(Point(self.0[at..at + d].to_vec()));
            at += d;
        }
        out
    }

    pub(crate) fn as_dvector(&self) -> DVector<f64> {
        DVector::from_column_slice(&self.0)
    }

    pub(crate) fn from_dvector(v: &DVector<f64>) -> Point {
        Point(v.iter().copied().collect())
    }
}

/// Euclidean inner product ⟨x, y⟩; errors on dimension mismatch.
pub fn inner(x: &Point, y: &Point) -> Result<f64> {
    if x.dim() != y.dim() {
        return Err(Error::dim(x.dim(), y.dim()));
    }
    Ok(x.inner(y))
}

/// A value of ℝ ∪ {+∞}. −∞ is never representable: support functions of
/// nonempty sets are bounded below.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtReal {
    Finite(f64),
    PosInf,
}

impl ExtReal {
    /// Wraps a finite value; panics on NaN or ±∞.
    pub fn finite(v: f64) -> Self {
        assert!(v.is_finite(), "ExtReal::finite requires a finite value");
        ExtReal::Finite(v)
    }

    pub fn infinity() -> Self {
        ExtReal::PosInf
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtReal::Finite(_))
    }

    pub fn as_finite(&self) -> Option<f64> {
        match self {
            ExtReal::Finite(v) => Some(*v),
            ExtReal::PosInf => None,
        }
    }

    /// Collapses to f64, mapping +∞ to `f64::INFINITY`.
    pub fn to_f64(&self) -> f64 {
        match self {
            ExtReal::Finite(v) => *v,
            ExtReal::PosInf => f64::INFINITY,
        }
    }

    pub fn add(&self, other: &ExtReal) -> ExtReal {
        match (self, other) {
            (ExtReal::Finite(a), ExtReal::Finite(b)) => ExtReal::finite(a + b),
            _ => ExtReal::PosInf,
        }
    }
}

impl std::fmt::Display for ExtReal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ExtReal::Finite(v) => write!(f, "{v}"),
            ExtReal::PosInf => write!(f, "+inf"),
        }
    }
}

/// Nonempty closed convex set with closed-form projection, support
/// function and membership test. Construct through the named builders,
/// which check nonemptiness.
#[derive(Debug, Clone)]
pub struct ConvexSet {
    kind: SetKind,
}

#[derive(Debug, Clone)]
pub(crate) enum SetKind {
    WholeSpace {
        dim: usize,
    },
    Singleton {
        point: Point,
    },
    /// Componentwise lo ≤ x ≤ hi; ±∞ entries mark unbounded sides.
    Box {
        lo: Vec<f64>,
        hi: Vec<f64>,
    },
    /// ⟨a, x⟩ ≤ b with a ≠ 0.
    Halfspace {
        a: Point,
        b: f64,
    },
    Ball {
        center: Point,
        radius: f64,
    },
    /// offset + range(q), q with orthonormal columns (possibly none).
    AffineSubspace {
        q: DMatrix<f64>,
        offset: Point,
    },
    /// Cartesian product of components.
    Product {
        components: Vec<ConvexSet>,
    },
}

impl ConvexSet {
    pub fn whole_space(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::BadSet("whole_space needs dim ≥ 1".into()));
        }
        Ok(ConvexSet {
            kind: SetKind::WholeSpace { dim },
        })
    }

    pub fn singleton(point: Point) -> Self {
        ConvexSet {
            kind: SetKind::Singleton { point },
        }
    }

    /// Box `{x : lo ≤ x ≤ hi}`; entries may be ±∞. Rejects lo > hi.
    pub fn bounding_box(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        if lo.len() != hi.len() || lo.is_empty() {
            return Err(Error::BadSet("box bounds must share a dim ≥ 1".into()));
        }
        for (l, h) in lo.iter().zip(&hi) {
            if l.is_nan() || h.is_nan() || l > h {
                return Err(Error::BadSet(format!("empty box side: lo={l}, hi={h}")));
            }
            if *l == f64::INFINITY || *h == f64::NEG_INFINITY {
                return Err(Error::BadSet("box side has the wrong infinity".into()));
            }
        }
        Ok(ConvexSet {
            kind: SetKind::Box { lo, hi },
        })
    }

    /// Halfspace `{x : ⟨a, x⟩ ≤ b}` with a ≠ 0.
    pub fn halfspace(a: Point, b: f64) -> Result<Self> {
        if a.norm() == 0.0 {
            return Err(Error::BadSet("halfspace normal must be nonzero".into()));
        }
        if !b.is_finite() {
            return Err(Error::BadSet("halfspace offset must be finite".into()));
        }
        Ok(ConvexSet {
            kind: SetKind::Halfspace { a, b },
        })
    }

    pub fn ball(center: Point, radius: f64) -> Result<Self> {
        if !(radius >= 0.0 && radius.is_finite()) {
            return Err(Error::BadSet("ball radius must be finite and ≥ 0".into()));
        }
        Ok(ConvexSet {
            kind: SetKind::Ball { center, radius },
        })
    }

    /// Affine subspace `offset + span(basis)`. The basis vectors are
    /// orthonormalized here; near-dependent directions are dropped at a
    /// relative 1e−12 cutoff. An empty basis gives the singleton {offset}.
    pub fn affine_subspace(basis: Vec<Point>, offset: Point) -> Result<Self> {
        let dim = offset.dim();
        let mut cols: Vec<DVector<f64>> = Vec::new();
        for v in &basis {
            if v.dim() != dim {
                return Err(Error::dim(dim, v.dim()));
            }
            let mut w = v.as_dvector();
            let scale = w.norm().max(1.0);
            for c in &cols {
                let t = c.dot(&w);
                w -= c * t;
            }
            if w.norm() > 1e-12 * scale {
                let n = w.norm();
                cols.push(w / n);
            }
        }
        let q = if cols.is_empty() {
            DMatrix::zeros(dim, 0)
        } else {
            DMatrix::from_columns(&cols)
        };
        Ok(ConvexSet {
            kind: SetKind::AffineSubspace { q, offset },
        })
    }

    /// Cartesian product of nonempty sets.
    pub fn product(components: Vec<ConvexSet>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::BadSet("product needs ≥ 1 component".into()));
        }
        Ok(ConvexSet {
            kind: SetKind::Product { components },
        })
    }

    pub(crate) fn kind(&self) -> &SetKind {
        &self.kind
    }

    pub fn is_whole_space(&self) -> bool {
        match &self.kind {
            SetKind::WholeSpace { .. } => true,
            SetKind::Product { components } => components.iter().all(|c| c.is_whole_space()),
            _ => false,
        }
    }

    /// Ambient dimension.
    pub fn dim(&self) -> usize {
        match &self.kind {
            SetKind::WholeSpace { dim } => *dim,
            SetKind::Singleton { point } => point.dim(),
            SetKind::Box { lo, .. } => lo.len(),
            SetKind::Halfspace { a, .. } => a.dim(),
            SetKind::Ball { center, .. } => center.dim(),
            SetKind::AffineSubspace { offset, .. } => offset.dim(),
            SetKind::Product { components } => components.iter().map(|c| c.dim()).sum(),
        }
    }

    fn check_dim(&self, x: &Point) -> Result<()> {
        if x.dim() != self.dim() {
            return Err(Error::dim(self.dim(), x.dim()));
        }
        Ok(())
    }

    /// Metric projection: argmin over z ∈ S of ‖x − z‖.
    pub fn project(&self, x: &Point) -> Result<Point> {
        self.check_dim(x)?;
        Ok(self.project_unchecked(x))
    }

    pub(crate) fn project_unchecked(&self, x: &Point) -> Point {
        match &self.kind {
            SetKind::WholeSpace { .. } => x.clone(),
            SetKind::Singleton { point } => point.clone(),
            SetKind::Box { lo, hi } => Point::from_raw(
                x.coords()
                    .iter()
                    .zip(lo.iter().zip(hi))
                    .map(|(&c, (&l, &h))| c.max(l).min(h))
                    .collect(),
            ),
            SetKind::Halfspace { a, b } => {
                let s = a.inner(x) - b;
                if s <= 0.0 {
                    x.clone()
                } else {
                    x.add_scaled(-s / a.norm_sq(), a)
                }
            }
            SetKind::Ball { center, radius } => {
                let d = x.sub(center);
                let n = d.norm();
                if n <= *radius {
                    x.clone()
                } else {
                    center.add_scaled(radius / n, &d)
                }
            }
            SetKind::AffineSubspace { q, offset } => {
                let rel = x.sub(offset).as_dvector();
                let t = q.transpose() * &rel;
                let back = q * t;
                offset.add(&Point::from_dvector(&back))
            }
            SetKind::Product { components } => {
                let dims: Vec<usize> = components.iter().map(|c| c.dim()).collect();
                let parts = x.split(&dims);
                let projected: Vec<Point> = components
                    .iter()
                    .zip(&parts)
                    .map(|(c, p)| c.project_unchecked(p))
                    .collect();
                Point::concat(&projected.iter().collect::<Vec<_>>())
            }
        }
    }

    /// Support function σ_S(u) = sup{⟨u, y⟩ : y ∈ S}, +∞ when unbounded.
    pub fn support(&self, u: &Point) -> Result<ExtReal> {
        self.check_dim(u)?;
        Ok(self.support_unchecked(u))
    }

    pub(crate) fn support_unchecked(&self, u: &Point) -> ExtReal {
        match &self.kind {
            SetKind::WholeSpace { .. } => {
                if u.norm() == 0.0 {
                    ExtReal::finite(0.0)
                } else {
                    ExtReal::PosInf
                }
            }
            SetKind::Singleton { point } => ExtReal::finite(point.inner(u)),
            SetKind::Box { lo, hi } => {
                let mut total = 0.0;
                for (&c, (&l, &h)) in u.coords().iter().zip(lo.iter().zip(hi)) {
                    if c > 0.0 {
                        if h.is_infinite() {
                            return ExtReal::PosInf;
                        }
                        total += c * h;
                    } else if c < 0.0 {
                        if l.is_infinite() {
                            return ExtReal::PosInf;
                        }
                        total += c * l;
                    }
                }
                ExtReal::finite(total)
            }
            SetKind::Halfspace { a, b } => {
                // finite exactly on the ray {t·a : t ≥ 0}, with value t·b
                let un = u.norm();
                if un == 0.0 {
                    return ExtReal::finite(0.0);
                }
                let t = u.inner(a) / a.norm_sq();
                let resid = u.add_scaled(-t, a).norm();
                if t >= 0.0 && resid <= 1e-12 * un.max(1.0) {
                    ExtReal::finite(t * b)
                } else {
                    ExtReal::PosInf
                }
            }
            SetKind::Ball { center, radius } => {
                ExtReal::finite(center.inner(u) + radius * u.norm())
            }
            SetKind::AffineSubspace { q, offset } => {
                let t = q.transpose() * u.as_dvector();
                if t.norm() <= 1e-12 * u.norm().max(1.0) {
                    ExtReal::finite(offset.inner(u))
                } else {
                    ExtReal::PosInf
                }
            }
            SetKind::Product { components } => {
                let dims: Vec<usize> = components.iter().map(|c| c.dim()).collect();
                let parts = u.split(&dims);
                let mut total = ExtReal::finite(0.0);
                for (c, p) in components.iter().zip(&parts) {
                    total = total.add(&c.support_unchecked(p));
                    if !total.is_finite() {
                        return ExtReal::PosInf;
                    }
                }
                total
            }
        }
    }

    /// Distance ‖x − Proj_S(x)‖ from x to the set.
    pub fn membership_residual(&self, x: &Point) -> Result<f64> {
        Ok(self.project(x)?.distance_to(x))
    }

    /// Membership within the default tolerance on the residual.
    pub fn contains(&self, x: &Point, tol: f64) -> Result<bool> {
        Ok(self.membership_residual(x)? <= tol)
    }

    /// Whether u ∈ N_S(x): x must lie in S (within tol), and the support
    /// function must close the Fenchel gap, σ_S(u) − ⟨u, x⟩ ≤ tol.
    /// Off the set the normal cone is empty, so the answer is false.
    pub fn normal_cone_contains(&self, x: &Point, u: &Point, tol: f64) -> Result<bool> {
        self.check_dim(x)?;
        self.check_dim(u)?;
        if self.membership_residual(x)? > tol {
            return Ok(false);
        }
        match self.support_unchecked(u) {
            ExtReal::PosInf => Ok(false),
            ExtReal::Finite(sigma) => Ok(sigma - u.inner(x) <= tol),
        }
    }
}
