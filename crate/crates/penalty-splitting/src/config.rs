//! JSON run-configuration schema and builders into domain objects.
//! Unknown fields are rejected everywhere, so a typo fails loudly instead
//! of silently running something else.

use crate::benchmarks::{self, BenchmarkProblem};
use crate::operators::{LinearMap, Regularity, ResolventOp, SingleValuedOp};
use crate::penalty::PenaltyOp;
use crate::primal_dual::{Block, ProductPoint, StructuredProblem};
use crate::problem::{InclusionProblem, RunOptions, SolutionCertificate};
use crate::schedules::StepSchedule;
use crate::space::{ConvexSet, Point};
use crate::{Error, Result};
use serde::Deserialize;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Config schema version; only 1 exists.
    #[serde(default = "default_schema")]
    pub schema: u32,
    pub algorithm: Algorithm,
    pub problem: ProblemSpec,
    pub schedule: ScheduleSpec,
    #[serde(default = "default_budget")]
    pub budget: usize,
    /// Seed for the sampling-based operator spot checks.
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub x0: Option<Vec<f64>>,
    #[serde(default)]
    pub stop_tol: f64,
    #[serde(default)]
    pub override_hypotheses: bool,
    #[serde(default)]
    pub out_dir: Option<String>,
}

fn default_schema() -> u32 {
    1
}

fn default_budget() -> usize {
    10_000
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Fbb,
    Fbfb,
    Pd,
}

impl Algorithm {
    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::Fbb => "fbb",
            Algorithm::Fbfb => "fbfb",
            Algorithm::Pd => "pd",
        }
    }
}

/// Either a named desk benchmark or an inline problem description.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    #[serde(default)]
    pub benchmark: Option<String>,
    #[serde(default)]
    pub inline: Option<InlineProblem>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InlineProblem {
    pub dim: usize,
    pub a: OperatorSpec,
    #[serde(default)]
    pub d: Option<OperatorSpec>,
    pub penalty: PenaltySpec,
    /// Dual blocks; nonempty turns the problem into a structured one.
    #[serde(default)]
    pub blocks: Vec<BlockSpec>,
    #[serde(default)]
    pub known_solution: Option<Vec<f64>>,
    #[serde(default)]
    pub certificate: Option<CertificateSpec>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum OperatorSpec {
    /// M x = weight·(x − a).
    SubdiffQuadratic {
        a: Vec<f64>,
        weight: f64,
    },
    /// M = N_S.
    NormalCone {
        set: SetSpec,
    },
    /// M x = W x (+ c). As a set-valued A it must be monotone; as a
    /// single-valued D the regularity must be declared.
    Affine {
        matrix: Vec<Vec<f64>>,
        #[serde(default)]
        offset: Option<Vec<f64>>,
        #[serde(default)]
        regularity: Option<RegularitySpec>,
    },
    /// D x = K x with K antisymmetric.
    Skew {
        matrix: Vec<Vec<f64>>,
    },
    Zero,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum RegularitySpec {
    Cocoercive(f64),
    LipschitzMonotone(f64),
    Zero,
}

impl RegularitySpec {
    fn build(self) -> Result<Regularity> {
        match self {
            RegularitySpec::Cocoercive(eta) if eta > 0.0 => Ok(Regularity::Cocoercive(eta)),
            RegularitySpec::Cocoercive(eta) => Err(Error::Config(format!(
                "cocoercivity modulus must be positive, got {eta}"
            ))),
            RegularitySpec::LipschitzMonotone(l) if l >= 0.0 => {
                Ok(Regularity::LipschitzMonotone(l))
            }
            RegularitySpec::LipschitzMonotone(l) => Err(Error::Config(format!(
                "Lipschitz constant must be ≥ 0, got {l}"
            ))),
            RegularitySpec::Zero => Ok(Regularity::Zero),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PenaltySpec {
    pub penalty: PenaltyKind,
    #[serde(default)]
    pub set: Option<SetSpec>,
    /// Only for the skew_linear penalty.
    #[serde(default)]
    pub matrix: Option<Vec<Vec<f64>>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PenaltyKind {
    NormalCone,
    HalfDistSq,
    Dist,
    SkewLinear,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case", deny_unknown_fields)]
pub enum SetSpec {
    WholeSpace {
        dim: usize,
    },
    Singleton {
        point: Vec<f64>,
    },
    /// null bounds mean unbounded on that side.
    Box {
        lo: Vec<Option<f64>>,
        hi: Vec<Option<f64>>,
    },
    Halfspace {
        a: Vec<f64>,
        b: f64,
    },
    Ball {
        center: Vec<f64>,
        radius: f64,
    },
    AffineSubspace {
        basis: Vec<Vec<f64>>,
        offset: Vec<f64>,
    },
    Product {
        components: Vec<SetSpec>,
    },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockSpec {
    #[serde(rename = "A_i")]
    pub a: OperatorSpec,
    #[serde(rename = "D_i_inverse", default)]
    pub d_inverse: Option<OperatorSpec>,
    #[serde(rename = "L_i")]
    pub link: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateSpec {
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub p: Vec<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum ScheduleSpec {
    PowerLaw {
        lambda0: f64,
        p: f64,
        beta0: f64,
        q: f64,
    },
    Explicit {
        lambdas: Vec<f64>,
        betas: Vec<f64>,
    },
}

/// A fully built problem, ready for a solver.
#[derive(Debug, Clone)]
pub enum BuiltProblem {
    Inclusion(InclusionProblem),
    Structured(StructuredProblem),
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: RunConfig =
            serde_json::from_str(text).map_err(|e| Error::Config(format!("schema error: {e}")))?;
        if cfg.schema != 1 {
            return Err(Error::Config(format!(
                "unsupported config schema {} (this build reads schema 1)",
                cfg.schema
            )));
        }
        Ok(cfg)
    }

    pub fn from_path(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text)
    }

    pub fn build_schedule(&self) -> Result<StepSchedule> {
        match &self.schedule {
            ScheduleSpec::PowerLaw {
                lambda0,
                p,
                beta0,
                q,
            } => StepSchedule::power_law(*lambda0, *p, *beta0, *q),
            ScheduleSpec::Explicit { lambdas, betas } => {
                StepSchedule::explicit(lambdas.clone(), betas.clone())
            }
        }
    }

    pub fn build_problem(&self) -> Result<BuiltProblem> {
        match (&self.problem.benchmark, &self.problem.inline) {
            (Some(name), None) => Ok(match benchmarks::by_name(name)?.problem {
                BenchmarkProblem::Inclusion(p) => BuiltProblem::Inclusion(p),
                BenchmarkProblem::Structured(p) => BuiltProblem::Structured(p),
            }),
            (None, Some(inline)) => inline.build(),
            _ => Err(Error::Config(
                "problem must be exactly one of {\"benchmark\": ...} or {\"inline\": ...}".into(),
            )),
        }
    }

    pub fn run_options(&self) -> RunOptions {
        RunOptions {
            budget: self.budget,
            x0: self
                .x0
                .as_ref()
                .map(|v| Point::new(v.clone()))
                .transpose()
                .ok()
                .flatten(),
            stop_tol: self.stop_tol,
            override_hypotheses: self.override_hypotheses,
        }
    }
}

impl InlineProblem {
    pub fn build(&self) -> Result<BuiltProblem> {
        if self.dim == 0 {
            return Err(Error::Config("dim must be ≥ 1".into()));
        }
        let a = build_resolvent(&self.a, self.dim)?;
        let d = match &self.d {
            Some(spec) => build_single_valued(spec, self.dim)?,
            None => SingleValuedOp::zero(self.dim),
        };
        let b = build_penalty(&self.penalty, self.dim)?;

        if self.blocks.is_empty() {
            let mut prob = InclusionProblem::new(a, d, b)?;
            if let Some(sol) = &self.known_solution {
                prob = prob.with_known_solution(Point::new(sol.clone())?)?;
            }
            if let Some(cert) = &self.certificate {
                prob = prob.with_certificate(SolutionCertificate {
                    u: Point::new(cert.u.clone())?,
                    v: Point::new(cert.v.clone())?,
                    p: Point::new(cert.p.clone())?,
                })?;
            }
            return Ok(BuiltProblem::Inclusion(prob));
        }

        let mut blocks = Vec::with_capacity(self.blocks.len());
        let mut dual_dims = Vec::new();
        for spec in &self.blocks {
            let link = LinearMap::from_rows(spec.link.clone())?;
            if link.ncols() != self.dim {
                return Err(Error::Config(format!(
                    "block link has {} columns, problem dim is {}",
                    link.ncols(),
                    self.dim
                )));
            }
            let g = link.nrows();
            dual_dims.push(g);
            let a_i = build_resolvent(&spec.a, g)?;
            let d_inv = match &spec.d_inverse {
                Some(s) => build_single_valued(s, g)?,
                None => SingleValuedOp::zero(g),
            };
            blocks.push(Block {
                a: a_i,
                d_inverse: d_inv,
                link,
            });
        }
        let mut sp = StructuredProblem::new(a, d, blocks, b)?;
        if let Some(sol) = &self.known_solution {
            let flat = Point::new(sol.clone())?;
            if flat.dim() != sp.product_dim() {
                return Err(Error::Config(format!(
                    "known_solution has dim {}, expected the product dim {}",
                    flat.dim(),
                    sp.product_dim()
                )));
            }
            sp = sp.with_known_solution(ProductPoint::unflatten(&flat, self.dim, &dual_dims))?;
        }
        if let Some(cert) = &self.certificate {
            sp = sp.with_certificate(SolutionCertificate {
                u: Point::new(cert.u.clone())?,
                v: Point::new(cert.v.clone())?,
                p: Point::new(cert.p.clone())?,
            });
        }
        Ok(BuiltProblem::Structured(sp))
    }
}

pub fn build_set(spec: &SetSpec) -> Result<ConvexSet> {
    match spec {
        SetSpec::WholeSpace { dim } => ConvexSet::whole_space(*dim),
        SetSpec::Singleton { point } => Ok(ConvexSet::singleton(Point::new(point.clone())?)),
        SetSpec::Box { lo, hi } => {
            let lo = lo.iter().map(|v| v.unwrap_or(f64::NEG_INFINITY)).collect();
            let hi = hi.iter().map(|v| v.unwrap_or(f64::INFINITY)).collect();
            ConvexSet::bounding_box(lo, hi)
        }
        SetSpec::Halfspace { a, b } => ConvexSet::halfspace(Point::new(a.clone())?, *b),
        SetSpec::Ball { center, radius } => ConvexSet::ball(Point::new(center.clone())?, *radius),
        SetSpec::AffineSubspace { basis, offset } => {
            let basis = basis
                .iter()
                .map(|v| Point::new(v.clone()))
                .collect::<Result<Vec<_>>>()?;
            ConvexSet::affine_subspace(basis, Point::new(offset.clone())?)
        }
        SetSpec::Product { components } => {
            let parts = components
                .iter()
                .map(build_set)
                .collect::<Result<Vec<_>>>()?;
            ConvexSet::product(parts)
        }
    }
}

fn build_resolvent(spec: &OperatorSpec, dim: usize) -> Result<ResolventOp> {
    let op = match spec {
        OperatorSpec::SubdiffQuadratic { a, weight } => {
            ResolventOp::subdiff_quadratic(Point::new(a.clone())?, *weight)?
        }
        OperatorSpec::NormalCone { set } => ResolventOp::normal_cone(build_set(set)?),
        OperatorSpec::Affine {
            matrix,
            offset,
            regularity,
        } => {
            if regularity.is_some() {
                return Err(Error::Config(
                    "regularity belongs to single-valued operator specs (d), not to a".into(),
                ));
            }
            let map = LinearMap::from_rows(matrix.clone())?;
            let off = match offset {
                Some(o) => Point::new(o.clone())?,
                None => Point::zeros(map.nrows()),
            };
            ResolventOp::affine(map, off)?
        }
        OperatorSpec::Zero => ResolventOp::zero(dim),
        OperatorSpec::Skew { .. } => {
            return Err(Error::Config(
                "skew describes a single-valued operator (d), not a set-valued a".into(),
            ))
        }
    };
    if op.dim() != dim {
        return Err(Error::Config(format!(
            "operator dimension {} does not match expected {dim}",
            op.dim()
        )));
    }
    Ok(op)
}

fn build_single_valued(spec: &OperatorSpec, dim: usize) -> Result<SingleValuedOp> {
    let op = match spec {
        OperatorSpec::Zero => SingleValuedOp::zero(dim),
        OperatorSpec::Skew { matrix } => {
            SingleValuedOp::skew(LinearMap::from_rows(matrix.clone())?)?
        }
        OperatorSpec::Affine {
            matrix,
            offset,
            regularity,
        } => {
            let reg = regularity
                .ok_or_else(|| {
                    Error::Config(
                        "an affine d needs a declared regularity \
                         ({\"cocoercive\": η} or {\"lipschitz_monotone\": L})"
                            .into(),
                    )
                })?
                .build()?;
            let map = LinearMap::from_rows(matrix.clone())?;
            let off = match offset {
                Some(o) => Point::new(o.clone())?,
                None => Point::zeros(map.nrows()),
            };
            SingleValuedOp::affine(map, off, reg)?
        }
        OperatorSpec::SubdiffQuadratic { .. } | OperatorSpec::NormalCone { .. } => {
            return Err(Error::Config(
                "subdiff_quadratic/normal_cone describe set-valued operators (a), not d".into(),
            ))
        }
    };
    if op.dim() != dim {
        return Err(Error::Config(format!(
            "operator dimension {} does not match expected {dim}",
            op.dim()
        )));
    }
    Ok(op)
}

fn build_penalty(spec: &PenaltySpec, dim: usize) -> Result<PenaltyOp> {
    let b = match spec.penalty {
        PenaltyKind::SkewLinear => {
            let matrix = spec.matrix.as_ref().ok_or_else(|| {
                Error::Config("skew_linear penalty needs a \"matrix\" field".into())
            })?;
            if spec.set.is_some() {
                return Err(Error::Config(
                    "skew_linear penalty takes a matrix, not a set (its zero set is ker K)".into(),
                ));
            }
            PenaltyOp::skew_linear(LinearMap::from_rows(matrix.clone())?)?
        }
        kind => {
            let set_spec = spec.set.as_ref().ok_or_else(|| {
                Error::Config("this penalty needs a \"set\" field for its zero set".into())
            })?;
            let set = build_set(set_spec)?;
            match kind {
                PenaltyKind::NormalCone => PenaltyOp::normal_cone(set),
                PenaltyKind::HalfDistSq => PenaltyOp::half_dist_sq(set),
                PenaltyKind::Dist => PenaltyOp::dist(set),
                PenaltyKind::SkewLinear => unreachable!(),
            }
        }
    };
    if b.dim() != dim {
        return Err(Error::Config(format!(
            "penalty dimension {} does not match problem dim {dim}",
            b.dim()
        )));
    }
    Ok(b)
}
