//! Dimensions, hyperplanes, quadric bodies and the reduced cut coordinate.
//!
//! Bodies carry general semiaxes but every volume formula is stated for the
//! canonical unit-semiaxis solid. [`Scaling`] is the diagonal map between
//! the two frames; [`descale`] pushes a (body, plane) pair through it and
//! returns the Jacobian so callers can scale volumes back.

use alloc::vec::Vec;

use crate::error::{Error, Infeasibility, Result};
use crate::math::{dot, norm_sq, sqrt};

/// Dimension of the cut section; the ambient space is `E^{n+1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Dim(usize);

impl Dim {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("dimension n must be at least 1"));
        }
        Ok(Dim(n))
    }

    #[inline]
    pub fn n(self) -> usize {
        self.0
    }

    /// `n + 1`.
    #[inline]
    pub fn ambient(self) -> usize {
        self.0 + 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Paraboloid,
    /// Solid bounded by the upper sheet of a two-sheeted hyperboloid.
    HyperboloidUpper,
    /// Inside of a one-sheeted hyperboloid, truncated below by `z = −1/ε`.
    OneSheetTruncated,
    Cone,
    Ellipsoid,
}

impl Family {
    pub const ALL: [Family; 5] = [
        Family::Paraboloid,
        Family::HyperboloidUpper,
        Family::OneSheetTruncated,
        Family::Cone,
        Family::Ellipsoid,
    ];

    /// Paraboloids carry `n` coefficients and cones `n` semiaxes; the other
    /// families also scale the `z` axis.
    pub fn semiaxis_count(self, dim: Dim) -> usize {
        match self {
            Family::Paraboloid | Family::Cone => dim.n(),
            _ => dim.ambient(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::Paraboloid => "paraboloid",
            Family::HyperboloidUpper => "hyperboloid2",
            Family::OneSheetTruncated => "hyperboloid1",
            Family::Cone => "cone",
            Family::Ellipsoid => "ellipsoid",
        }
    }

    pub fn from_name(name: &str) -> Option<Family> {
        Family::ALL.into_iter().find(|f| f.name() == name)
    }
}

impl core::fmt::Display for Family {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.name())
    }
}

/// The non-vertical hyperplane `z = Σ slope_i x_i + intercept`.
#[derive(Debug, Clone, PartialEq)]
pub struct Hyperplane {
    slope: Vec<f64>,
    intercept: f64,
}

impl Hyperplane {
    pub fn new(slope: Vec<f64>, intercept: f64) -> Result<Self> {
        if slope.is_empty() {
            return Err(Error::InvalidInput("hyperplane needs at least one slope"));
        }
        if !intercept.is_finite() || slope.iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidInput("hyperplane coefficients must be finite"));
        }
        Ok(Hyperplane { slope, intercept })
    }

    pub fn horizontal(dim: Dim, height: f64) -> Self {
        Hyperplane {
            slope: alloc::vec![0.0; dim.n()],
            intercept: height,
        }
    }

    /// Plane with the given slope through `point = (x̄, z̄)`; the intercept is
    /// `z̄ − Σ p̄_i x̄_i`.
    pub fn through_point(slope: Vec<f64>, point: &[f64]) -> Result<Self> {
        if point.len() != slope.len() + 1 {
            return Err(Error::InvalidInput("point must have n + 1 coordinates"));
        }
        let (x, z) = point.split_at(slope.len());
        let c = z[0] - dot(&slope, x);
        Hyperplane::new(slope, c)
    }

    #[inline]
    pub fn slope(&self) -> &[f64] {
        &self.slope
    }

    #[inline]
    pub fn intercept(&self) -> f64 {
        self.intercept
    }

    pub fn dim(&self) -> Dim {
        Dim(self.slope.len())
    }

    /// Height of the plane above `x`.
    #[inline]
    pub fn height_at(&self, x: &[f64]) -> f64 {
        dot(&self.slope, x) + self.intercept
    }

    /// `z − height_at(x)` for an ambient point.
    pub fn residual(&self, point: &[f64]) -> f64 {
        let n = self.slope.len();
        point[n] - self.height_at(&point[..n])
    }
}

/// One of the five solid families with its semiaxes.
///
/// For a paraboloid the `semiaxes` are the coefficients `p_i` of
/// `z ≥ Σ p_i² x_i²`. For the cone they are `a_1, …, a_n` of
/// `z² ≥ Σ x_i²/a_i²`, `z ≥ 0`. The remaining families use
/// `a_1, …, a_{n+1}` of the form `±Σ x_i²/a_i² + z²/a_{n+1}²`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadricBody {
    family: Family,
    dim: Dim,
    semiaxes: Vec<f64>,
    epsilon: Option<f64>,
}

impl QuadricBody {
    pub fn new(family: Family, dim: Dim, semiaxes: Vec<f64>, epsilon: Option<f64>) -> Result<Self> {
        if semiaxes.len() != family.semiaxis_count(dim) {
            return Err(Error::InvalidInput("wrong number of semiaxes for family"));
        }
        if semiaxes.iter().any(|a| !(a.is_finite() && *a > 0.0)) {
            return Err(Error::InvalidInput("semiaxes must be finite and positive"));
        }
        match (family, epsilon) {
            (Family::OneSheetTruncated, Some(e)) if e.is_finite() && e > 0.0 => {}
            (Family::OneSheetTruncated, _) => {
                return Err(Error::InvalidInput(
                    "truncated one-sheeted hyperboloid needs a positive epsilon",
                ));
            }
            (_, Some(_)) => {
                return Err(Error::InvalidInput(
                    "epsilon only applies to the truncated one-sheeted hyperboloid",
                ));
            }
            _ => {}
        }
        Ok(QuadricBody {
            family,
            dim,
            semiaxes,
            epsilon,
        })
    }

    /// The unit-semiaxis body of the family.
    pub fn canonical(family: Family, dim: Dim, epsilon: Option<f64>) -> Result<Self> {
        QuadricBody::new(
            family,
            dim,
            alloc::vec![1.0; family.semiaxis_count(dim)],
            epsilon,
        )
    }

    #[inline]
    pub fn family(&self) -> Family {
        self.family
    }

    #[inline]
    pub fn dim(&self) -> Dim {
        self.dim
    }

    #[inline]
    pub fn semiaxes(&self) -> &[f64] {
        &self.semiaxes
    }

    #[inline]
    pub fn epsilon(&self) -> Option<f64> {
        self.epsilon
    }

    pub fn is_canonical(&self) -> bool {
        self.semiaxes.iter().all(|&a| a == 1.0)
    }

    pub fn scaling(&self) -> Scaling {
        let n = self.dim.n();
        let mut axis = Vec::with_capacity(n + 1);
        match self.family {
            Family::Paraboloid => {
                axis.extend(self.semiaxes.iter().map(|p| 1.0 / p));
                axis.push(1.0);
            }
            Family::Cone => {
                axis.extend_from_slice(&self.semiaxes);
                axis.push(1.0);
            }
            _ => axis.extend_from_slice(&self.semiaxes),
        }
        Scaling { axis }
    }

    /// Epsilon of the canonical body: the base `z = −1/ε` becomes
    /// `Z = −1/(ε a_{n+1})`.
    pub(crate) fn canonical_epsilon(&self) -> Option<f64> {
        self.epsilon.map(|e| e * self.semiaxes[self.dim.n()])
    }
}

/// Diagonal map `original = axis ⊙ canonical` between a body's frame and the
/// frame of its canonical solid.
#[derive(Debug, Clone, PartialEq)]
pub struct Scaling {
    axis: Vec<f64>,
}

impl Scaling {
    pub fn axis(&self) -> &[f64] {
        &self.axis
    }

    /// Volume factor from canonical to original coordinates.
    pub fn jacobian(&self) -> f64 {
        self.axis.iter().product()
    }

    pub fn to_canonical(&self, point: &[f64]) -> Vec<f64> {
        point.iter().zip(&self.axis).map(|(x, a)| x / a).collect()
    }

    pub fn from_canonical(&self, point: &[f64]) -> Vec<f64> {
        point.iter().zip(&self.axis).map(|(x, a)| x * a).collect()
    }

    pub fn plane_to_canonical(&self, plane: &Hyperplane) -> Hyperplane {
        let n = plane.slope.len();
        let top = self.axis[n];
        Hyperplane {
            slope: plane
                .slope
                .iter()
                .zip(&self.axis)
                .map(|(p, a)| p * a / top)
                .collect(),
            intercept: plane.intercept / top,
        }
    }

    pub fn plane_from_canonical(&self, plane: &Hyperplane) -> Hyperplane {
        let n = plane.slope.len();
        let top = self.axis[n];
        Hyperplane {
            slope: plane
                .slope
                .iter()
                .zip(&self.axis)
                .map(|(p, a)| p * top / a)
                .collect(),
            intercept: plane.intercept * top,
        }
    }
}

/// A (body, plane) pair expressed in the canonical frame.
#[derive(Debug, Clone, PartialEq)]
pub struct Descaled {
    pub body: QuadricBody,
    pub plane: Hyperplane,
    /// Multiply canonical volumes by this to get original volumes.
    pub scale: f64,
}

pub fn descale(body: &QuadricBody, plane: &Hyperplane) -> Result<Descaled> {
    check_plane(body, plane)?;
    let scaling = body.scaling();
    let canonical = QuadricBody::canonical(body.family, body.dim, body.canonical_epsilon())?;
    Ok(Descaled {
        body: canonical,
        plane: scaling.plane_to_canonical(plane),
        scale: scaling.jacobian(),
    })
}

fn check_plane(body: &QuadricBody, plane: &Hyperplane) -> Result<()> {
    if plane.slope.len() != body.dim.n() {
        return Err(Error::InvalidInput("plane dimension does not match body"));
    }
    Ok(())
}

/// Derived quantities of a (body, plane) pair, always in the canonical frame.
///
/// `d` is the plane intercept, `q` is `1 − Σ p_i²` for the hyperbolic and
/// conic families, `1 + Σ p_i²` for the ellipsoid and `1` for the
/// paraboloid (its change of variables has unit Jacobian). `zeta` is the
/// kernel argument.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutParams {
    pub d: f64,
    pub q: f64,
    pub zeta: f64,
    pub feasible: bool,
    pub violation: Option<Infeasibility>,
}

/// Reduced cut coordinate and feasibility of a plane against a body.
///
/// Non-canonical bodies are descaled first. Infeasible pairs are reported
/// through the flag; only a dimension mismatch is an error.
pub fn cut_params(body: &QuadricBody, plane: &Hyperplane) -> Result<CutParams> {
    check_plane(body, plane)?;
    if body.is_canonical() {
        return Ok(canonical_cut_params(body.family, body.epsilon, plane));
    }
    let reduced = descale(body, plane)?;
    Ok(canonical_cut_params(
        reduced.body.family,
        reduced.body.epsilon,
        &reduced.plane,
    ))
}

pub(crate) fn canonical_cut_params(
    family: Family,
    epsilon: Option<f64>,
    plane: &Hyperplane,
) -> CutParams {
    let d = plane.intercept;
    let s2 = norm_sq(&plane.slope);
    let verdict = |zeta: f64, q: f64, violation: Option<Infeasibility>| CutParams {
        d,
        q,
        zeta,
        feasible: violation.is_none(),
        violation,
    };
    match family {
        Family::Paraboloid => {
            let zeta = d + s2 / 4.0;
            verdict(
                zeta,
                1.0,
                (zeta <= 0.0).then_some(Infeasibility::PlaneBelowParaboloid),
            )
        }
        Family::Ellipsoid => {
            let q = 1.0 + s2;
            let zeta = d.abs() / sqrt(q);
            verdict(
                zeta,
                q,
                (zeta >= 1.0).then_some(Infeasibility::PlaneMissesEllipsoid),
            )
        }
        Family::HyperboloidUpper | Family::Cone | Family::OneSheetTruncated => {
            let q = 1.0 - s2;
            if q <= 0.0 {
                return verdict(f64::NAN, q, Some(Infeasibility::SlopeTooSteep));
            }
            let root_q = sqrt(q);
            let zeta = d / root_q;
            let violation = match family {
                Family::HyperboloidUpper => (d < root_q).then_some(Infeasibility::PlaneBelowVertex),
                Family::Cone => (d < 0.0).then_some(Infeasibility::NegativeOffset),
                _ => {
                    let eps = epsilon.unwrap_or(f64::NAN);
                    if d < 0.0 {
                        Some(Infeasibility::NegativeOffset)
                    } else if 1.0 + eps * d < sqrt(1.0 + eps * eps) * sqrt(s2) {
                        Some(Infeasibility::BaseNotSubmerged)
                    } else {
                        None
                    }
                }
            };
            verdict(zeta, q, violation)
        }
    }
}

/// Membership in the closed solid, in the body's own coordinates.
pub fn contains(body: &QuadricBody, point: &[f64]) -> bool {
    if point.len() != body.dim.ambient() {
        return false;
    }
    let c = body.scaling().to_canonical(point);
    canonical_contains(body.family, body.canonical_epsilon(), &c)
}

pub(crate) fn canonical_contains(family: Family, epsilon: Option<f64>, point: &[f64]) -> bool {
    let n = point.len() - 1;
    let r2 = norm_sq(&point[..n]);
    let z = point[n];
    match family {
        Family::Paraboloid => le(r2, z),
        Family::HyperboloidUpper => z >= 1.0 - TOL && le(r2, z * z - 1.0),
        Family::OneSheetTruncated => {
            let base = -1.0 / epsilon.unwrap_or(f64::INFINITY);
            z >= base - TOL * (1.0 + base.abs()) && le(r2, 1.0 + z * z)
        }
        Family::Cone => z >= -TOL && le(r2, z * z),
        Family::Ellipsoid => le(r2 + z * z, 1.0),
    }
}

const TOL: f64 = 1e-14;

#[inline]
fn le(a: f64, b: f64) -> bool {
    a <= b + TOL * (1.0 + a.abs().max(b.abs()))
}

/// Flotation parameter `k` paired with the family of the outer body.
///
/// Paraboloids pair with the translate `z = p(x) + k²`, ellipsoids with the
/// homothetic ellipsoid at level `k²`, and the hyperbolic and conic bodies
/// with the upper sheet of the two-sheeted hyperboloid at level `k²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InnerSurfaceParam {
    family: Family,
    k: f64,
}

impl InnerSurfaceParam {
    pub fn new(family: Family, k: f64) -> Result<Self> {
        let (lower, upper) = match family {
            Family::HyperboloidUpper => (1.0, f64::INFINITY),
            Family::Ellipsoid => (0.0, 1.0),
            _ => (0.0, f64::INFINITY),
        };
        if !(k > lower && k < upper) {
            return Err(Error::Domain {
                what: "k",
                value: k,
                lower,
                upper,
            });
        }
        Ok(InnerSurfaceParam { family, k })
    }

    #[inline]
    pub fn family(&self) -> Family {
        self.family
    }

    #[inline]
    pub fn k(&self) -> f64 {
        self.k
    }

    /// The value the reduced cut coordinate takes on every tangent plane:
    /// `k²` for the paraboloid, `k` otherwise.
    pub fn kernel_argument(&self) -> f64 {
        match self.family {
            Family::Paraboloid => self.k * self.k,
            _ => self.k,
        }
    }
}

/// A smooth surface whose tangent planes are used as cutting planes.
#[derive(Debug, Clone, PartialEq)]
pub enum SurfaceShape {
    /// `z = Σ coeffs_i² x_i² + lift`.
    Paraboloid { coeffs: Vec<f64>, lift: f64 },
    /// Upper sheet of `z²/s_{n+1}² − Σ x_i²/s_i² = 1`.
    Hyperbolic { semiaxes: Vec<f64> },
    /// Upper half of `Σ x_i²/s_i² + z²/s_{n+1}² = 1`.
    Elliptic { semiaxes: Vec<f64> },
}

impl SurfaceShape {
    /// The inner surface that `param` selects relative to a body with the
    /// given semiaxes.
    pub fn inner(param: &InnerSurfaceParam, body_semiaxes: &[f64]) -> Result<Self> {
        let k = param.k;
        Ok(match param.family {
            Family::Paraboloid => SurfaceShape::Paraboloid {
                coeffs: body_semiaxes.to_vec(),
                lift: k * k,
            },
            Family::Ellipsoid => SurfaceShape::Elliptic {
                semiaxes: body_semiaxes.iter().map(|a| k * a).collect(),
            },
            Family::Cone => {
                let mut semiaxes: Vec<f64> = body_semiaxes.iter().map(|a| k * a).collect();
                semiaxes.push(k);
                SurfaceShape::Hyperbolic { semiaxes }
            }
            Family::HyperboloidUpper | Family::OneSheetTruncated => SurfaceShape::Hyperbolic {
                semiaxes: body_semiaxes.iter().map(|a| k * a).collect(),
            },
        })
    }

    pub fn dim(&self) -> usize {
        match self {
            SurfaceShape::Paraboloid { coeffs, .. } => coeffs.len(),
            SurfaceShape::Hyperbolic { semiaxes } | SurfaceShape::Elliptic { semiaxes } => {
                semiaxes.len() - 1
            }
        }
    }

    /// Whether `x` lies in the projection on which the surface is a graph.
    pub fn covers(&self, x: &[f64]) -> bool {
        match self {
            SurfaceShape::Elliptic { semiaxes } => unit_sq(x, semiaxes) < 1.0,
            _ => true,
        }
    }

    /// The surface point above `x`.
    pub fn lift(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.dim() {
            return Err(Error::InvalidInput("tangent point must have n coordinates"));
        }
        let z = match self {
            SurfaceShape::Paraboloid { coeffs, lift } => {
                coeffs.iter().zip(x).map(|(p, x)| p * p * x * x).sum::<f64>() + lift
            }
            SurfaceShape::Hyperbolic { semiaxes } => {
                semiaxes[x.len()] * sqrt(1.0 + unit_sq(x, semiaxes))
            }
            SurfaceShape::Elliptic { semiaxes } => {
                let r2 = unit_sq(x, semiaxes);
                if r2 >= 1.0 {
                    return Err(Error::Domain {
                        what: "normalised radius² of tangent point",
                        value: r2,
                        lower: 0.0,
                        upper: 1.0,
                    });
                }
                semiaxes[x.len()] * sqrt(1.0 - r2)
            }
        };
        let mut point = x.to_vec();
        point.push(z);
        Ok(point)
    }

    /// Tangent hyperplane at the surface point above `x`.
    pub fn tangent_at(&self, x: &[f64]) -> Result<Hyperplane> {
        let point = self.lift(x)?;
        let n = x.len();
        match self {
            SurfaceShape::Paraboloid { coeffs, lift } => {
                let slope: Vec<f64> = coeffs.iter().zip(x).map(|(p, x)| 2.0 * p * p * x).collect();
                let curvature: f64 = coeffs.iter().zip(x).map(|(p, x)| p * p * x * x).sum();
                Hyperplane::new(slope, lift - curvature)
            }
            SurfaceShape::Hyperbolic { semiaxes } | SurfaceShape::Elliptic { semiaxes } => {
                // Unit frame: Z̄ Z ∓ X̄·X = 1, then back through the diagonal scaling.
                let sign = if matches!(self, SurfaceShape::Hyperbolic { .. }) { 1.0 } else { -1.0 };
                let top = semiaxes[n];
                let zbar = point[n] / top;
                let slope = x
                    .iter()
                    .zip(semiaxes)
                    .map(|(x, s)| sign * (x / s) / zbar * top / s)
                    .collect();
                Hyperplane::new(slope, top / zbar)
            }
        }
    }
}

fn unit_sq(x: &[f64], semiaxes: &[f64]) -> f64 {
    x.iter().zip(semiaxes).map(|(x, s)| (x / s) * (x / s)).sum()
}

/// Tangent hyperplane of the inner surface selected by `param` (relative to
/// a body with `semiaxes`) at the surface point above `point`.
pub fn tangent_hyperplane(
    param: &InnerSurfaceParam,
    semiaxes: &[f64],
    point: &[f64],
) -> Result<Hyperplane> {
    SurfaceShape::inner(param, semiaxes)?.tangent_at(point)
}
