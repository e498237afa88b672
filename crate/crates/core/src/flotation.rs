//! Cut volumes, their inversion, and surfaces of flotation.
//!
//! A body floating with displaced volume `V` has a plane of flotation for
//! every attitude; those planes envelop the surface of flotation. For the
//! five quadric families that surface is again a quadric of the same shape:
//!
//! | body | surface of flotation | parameter |
//! |------|----------------------|-----------|
//! | paraboloid `z ≥ p(x)` | `z = p(x) + k²` | `k² = F₀⁻¹(V Π p_i)` |
//! | hyperboloid, cone | upper sheet at level `k²` | `k = G₀⁻¹`, `C₀⁻¹` |
//! | truncated one-sheeted | two-sheeted upper sheet at level `k²`, cut at `z̄ ≤ φ(ε)` | `k = H₀⁻¹` |
//! | ellipsoid | homothetic ellipsoid with ratio `k` | `k = L₀⁻¹` |

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::geometry::{
    Descaled, Dim, Family, Hyperplane, InnerSurfaceParam, QuadricBody, SurfaceShape,
    canonical_cut_params, contains, descale,
};
use crate::kernels::{kernel, kernel_derivative};
use crate::math::{gamma_half, norm_sq, pow_half, powf, sqrt};
use crate::oracle::rng;

/// The inner quadric whose tangent planes cut a fixed volume.
#[derive(Debug, Clone, PartialEq)]
pub struct FlotationSurface {
    family: Family,
    dim: Dim,
    k: f64,
    semiaxes: Vec<f64>,
    translation: f64,
    truncation: Option<f64>,
}

impl FlotationSurface {
    /// The surface at parameter `k` for `body`. `k = 0` is accepted for the
    /// ellipsoid, where the surface degenerates to the centre.
    pub fn homothetic(body: &QuadricBody, k: f64) -> Result<Self> {
        let family = body.family();
        if !(family == Family::Ellipsoid && k == 0.0) {
            InnerSurfaceParam::new(family, k)?;
        }
        let (semiaxes, translation) = match family {
            Family::Paraboloid => (body.semiaxes().to_vec(), k * k),
            Family::Cone => {
                let mut s: Vec<f64> = body.semiaxes().iter().map(|a| k * a).collect();
                s.push(k);
                (s, 0.0)
            }
            _ => (body.semiaxes().iter().map(|a| k * a).collect(), 0.0),
        };
        let truncation = body.epsilon().map(|eps| {
            let top = body.semiaxes()[body.dim().n()];
            top * truncation_bound(k, eps * top)
        });
        Ok(FlotationSurface {
            family,
            dim: body.dim(),
            k,
            semiaxes,
            translation,
            truncation,
        })
    }

    /// A surface of the shape `family` pairs with, with arbitrary semiaxes.
    /// Used for negative controls; `semiaxes` follow [`SurfaceShape`].
    pub fn custom(
        family: Family,
        dim: Dim,
        k: f64,
        semiaxes: Vec<f64>,
        translation: f64,
        truncation: Option<f64>,
    ) -> Result<Self> {
        let expected = match family {
            Family::Paraboloid => dim.n(),
            _ => dim.ambient(),
        };
        if semiaxes.len() != expected {
            return Err(Error::InvalidInput("wrong number of surface semiaxes"));
        }
        if semiaxes.iter().any(|a| !(a.is_finite() && *a > 0.0)) {
            return Err(Error::InvalidInput("surface semiaxes must be finite and positive"));
        }
        Ok(FlotationSurface {
            family,
            dim,
            k,
            semiaxes,
            translation,
            truncation,
        })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    /// Paraboloid coefficients, otherwise the `n + 1` semiaxes of the
    /// hyperbolic sheet or ellipsoid.
    pub fn semiaxes(&self) -> &[f64] {
        &self.semiaxes
    }

    /// Vertical offset of the paraboloid surface (`k²`), zero otherwise.
    pub fn translation(&self) -> f64 {
        self.translation
    }

    /// Largest admissible tangent height for the truncated one-sheeted body.
    pub fn truncation(&self) -> Option<f64> {
        self.truncation
    }

    pub fn shape(&self) -> SurfaceShape {
        match self.family {
            Family::Paraboloid => SurfaceShape::Paraboloid {
                coeffs: self.semiaxes.clone(),
                lift: self.translation,
            },
            Family::Ellipsoid => SurfaceShape::Elliptic {
                semiaxes: self.semiaxes.clone(),
            },
            _ => SurfaceShape::Hyperbolic {
                semiaxes: self.semiaxes.clone(),
            },
        }
    }

    pub fn point_at(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.shape().lift(x)
    }

    pub fn tangent_plane(&self, x: &[f64]) -> Result<Hyperplane> {
        self.shape().tangent_at(x)
    }

    /// Whether the tangent plane at `x` belongs to the family: `x` is over
    /// the surface and, when truncated, below the admissible height.
    pub fn admits(&self, x: &[f64]) -> bool {
        let shape = self.shape();
        if !shape.covers(x) {
            return false;
        }
        match (self.truncation, shape.lift(x)) {
            (_, Err(_)) => false,
            (None, Ok(_)) => true,
            (Some(top), Ok(p)) => p[self.dim.n()] <= top,
        }
    }
}

/// Volume cut from `body` by `plane`: the segment below the plane, or the
/// smaller cup for the ellipsoid.
pub fn cut_volume(body: &QuadricBody, plane: &Hyperplane) -> Result<f64> {
    let Descaled {
        body: canon,
        plane: cplane,
        scale,
    } = descale(body, plane)?;
    let params = canonical_cut_params(canon.family(), canon.epsilon(), &cplane);
    if let Some(why) = params.violation {
        return Err(Error::Infeasible(why));
    }
    Ok(kernel(canon.family(), canon.dim(), canon.epsilon(), params.zeta)?.scaled(scale))
}

/// Flotation parameter `k` whose tangent planes cut volume `v`.
pub fn invert_volume(
    family: Family,
    dim: Dim,
    semiaxes: &[f64],
    epsilon: Option<f64>,
    v: f64,
) -> Result<f64> {
    let body = QuadricBody::new(family, dim, semiaxes.to_vec(), epsilon)?;
    let scale = body.scaling().jacobian();
    let eps = body.epsilon().map(|e| e * semiaxes[dim.n()]);
    let value = |t: f64| kernel(family, dim, eps, t).map(|e| e.value * scale);
    let slope = |t: f64| kernel_derivative(family, dim, t) * scale;

    let (lower, upper, floor) = match family {
        Family::HyperboloidUpper => (0.0, f64::INFINITY, 1.0),
        Family::OneSheetTruncated => (value(0.0)?, f64::INFINITY, 0.0),
        Family::Ellipsoid => (0.0, value(0.0)?, 0.0),
        _ => (0.0, f64::INFINITY, 0.0),
    };
    let in_range = match family {
        Family::Ellipsoid => v > lower && v <= upper,
        _ => v > lower && v < upper,
    };
    if !in_range || !v.is_finite() {
        return Err(Error::VolumeOutOfRange {
            value: v,
            lower,
            upper,
        });
    }

    let t = if family == Family::Ellipsoid {
        if v == upper {
            0.0
        } else {
            solve_monotone(value, slope, v, 0.0, 1.0, false)?
        }
    } else {
        let mut hi = floor + 1.0;
        while value(hi)? < v {
            hi = floor + 2.0 * (hi - floor);
            if !hi.is_finite() {
                return Err(Error::VolumeOutOfRange {
                    value: v,
                    lower,
                    upper,
                });
            }
        }
        solve_monotone(value, slope, v, floor, hi, true)?
    };
    Ok(match family {
        Family::Paraboloid => sqrt(t),
        _ => t,
    })
}

/// Solves `f(t) = target` on `[a, b]` for monotone `f` by Newton steps
/// with bisection fallback.
fn solve_monotone<F, D>(f: F, df: D, target: f64, a: f64, b: f64, increasing: bool) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
    D: Fn(f64) -> f64,
{
    let sign = if increasing { 1.0 } else { -1.0 };
    let (mut lo, mut hi) = (a, b);
    let mut t = 0.5 * (a + b);
    for _ in 0..400 {
        let r = sign * (f(t)? - target);
        if r == 0.0 {
            return Ok(t);
        }
        if r < 0.0 {
            lo = t;
        } else {
            hi = t;
        }
        let d = df(t);
        let mut next = t - (f(t)? - target) / d;
        if !(next > lo && next < hi) || !next.is_finite() {
            next = 0.5 * (lo + hi);
        }
        if (next - t).abs() <= 2.0 * f64::EPSILON * t.abs().max(f64::MIN_POSITIVE) || hi - lo <= f64::EPSILON * hi.abs() {
            return Ok(next);
        }
        t = next;
    }
    Err(Error::Accuracy {
        achieved: hi - lo,
        requested: f64::EPSILON * hi.abs(),
    })
}

/// Surface of flotation of `body` for displaced volume `v`.
pub fn flotation_surface(body: &QuadricBody, v: f64) -> Result<FlotationSurface> {
    let k = invert_volume(body.family(), body.dim(), body.semiaxes(), body.epsilon(), v)?;
    FlotationSurface::homothetic(body, k)
}

/// `φ(ε) = (k/ε)(k + √((1 + ε²)(1 + k²)))`, the largest tangent height on
/// the sheet `z² − |x|² = k²` whose plane keeps the base `z = −1/ε`
/// submerged.
pub fn truncation_bound(k: f64, epsilon: f64) -> f64 {
    k / epsilon * (k + sqrt((1.0 + epsilon * epsilon) * (1.0 + k * k)))
}

/// Offset `γ` of the surface of flotation of the paraboloid
/// `2z = Σ x_i²/α_i` for displaced volume `v`.
pub fn parabolic_limit_gamma(dim: Dim, alphas: &[f64], v: f64) -> Result<f64> {
    let n = dim.n();
    if alphas.len() != n {
        return Err(Error::InvalidInput("need one alpha per coordinate"));
    }
    if alphas.iter().any(|a| !(a.is_finite() && *a > 0.0)) {
        return Err(Error::InvalidInput("alphas must be finite and positive"));
    }
    if !(v.is_finite() && v >= 0.0) {
        return Err(Error::Domain {
            what: "volume",
            value: v,
            lower: 0.0,
            upper: f64::INFINITY,
        });
    }
    let product: f64 = alphas.iter().product();
    let base = gamma_half(n + 4) * v / (pow_half(2.0 * core::f64::consts::PI, n) * sqrt(product));
    Ok(powf(base, 2.0 / (n + 2) as f64))
}

#[derive(Debug, Clone, PartialEq)]
pub struct WaterlineSolution {
    pub plane: Hyperplane,
    pub submerged_volume: f64,
    pub iterations: u32,
    /// `|V − target|/target`.
    pub residual: f64,
}

/// Relative volume tolerance of [`waterline`].
pub const WATERLINE_TOL: f64 = 1e-12;

/// Plane with unit normal `direction` cutting `target` from `body`.
///
/// For the ellipsoid the cut is the smaller cup on the side `direction`
/// points to.
pub fn waterline(body: &QuadricBody, direction: &[f64], target: f64) -> Result<WaterlineSolution> {
    let n = body.dim().n();
    if direction.len() != n + 1 {
        return Err(Error::InvalidInput("direction must have n + 1 components"));
    }
    let len = sqrt(norm_sq(direction));
    if !((len - 1.0).abs() < 1e-9) {
        return Err(Error::Domain {
            what: "|direction|",
            value: len,
            lower: 1.0,
            upper: 1.0,
        });
    }
    let nz = direction[n];
    if nz == 0.0 {
        return Err(Error::InvalidInput("direction must not be horizontal"));
    }
    if !(target.is_finite() && target > 0.0) {
        return Err(Error::VolumeOutOfRange {
            value: target,
            lower: 0.0,
            upper: f64::INFINITY,
        });
    }
    let slope: Vec<f64> = direction[..n]
        .iter()
        .map(|&v| if v == 0.0 { 0.0 } else { -v / nz })
        .collect();
    let family = body.family();
    let scaling = body.scaling();
    let probe = Hyperplane::new(slope.clone(), 0.0)?;
    let canon_slope = scaling.plane_to_canonical(&probe).slope().to_vec();
    let s2 = norm_sq(&canon_slope);
    let top = scaling.axis()[n];
    let canon_eps = body.epsilon().map(|e| e * top);

    let volume = |c: f64| -> Result<f64> {
        let plane = Hyperplane::new(slope.clone(), c * top)?;
        cut_volume(body, &plane)
    };
    let inadmissible = |why| Err(Error::Infeasible(why));

    // Canonical intercept range on which the volume is monotone.
    let (mut lo, hi_start, decreasing) = match family {
        Family::Paraboloid => (-s2 / 4.0, -s2 / 4.0 + 1.0, false),
        Family::Ellipsoid => {
            let edge = sqrt(1.0 + s2);
            if nz > 0.0 { (0.0, edge, true) } else { (-edge, 0.0, false) }
        }
        _ => {
            let q = 1.0 - s2;
            if q <= 0.0 {
                return inadmissible(crate::error::Infeasibility::SlopeTooSteep);
            }
            let start = match family {
                Family::HyperboloidUpper => sqrt(q),
                Family::Cone => 0.0,
                _ => {
                    let eps = canon_eps.unwrap_or(f64::NAN);
                    ((sqrt(1.0 + eps * eps) * sqrt(s2) - 1.0) / eps).max(0.0)
                }
            };
            (start, start + 1.0, false)
        }
    };
    let mut hi = hi_start;

    let mut iterations = 0u32;
    if family == Family::Ellipsoid {
        let half = volume(0.0)?;
        if target > half {
            return Err(Error::VolumeOutOfRange {
                value: target,
                lower: 0.0,
                upper: half,
            });
        }
    } else {
        if family == Family::OneSheetTruncated {
            let floor = volume(lo)?;
            if target < floor {
                return Err(Error::VolumeOutOfRange {
                    value: target,
                    lower: floor,
                    upper: f64::INFINITY,
                });
            }
        }
        while volume(hi)? < target {
            let width = hi - lo;
            lo = hi;
            hi += 2.0 * width;
            iterations += 1;
            if !hi.is_finite() {
                return Err(Error::VolumeOutOfRange {
                    value: target,
                    lower: 0.0,
                    upper: f64::INFINITY,
                });
            }
        }
    }

    // Invariant: V(lo) ≤ target ≤ V(hi) after orienting.
    let below = |c: f64| -> Result<bool> {
        let v = match family {
            Family::Ellipsoid if (decreasing && c >= hi) || (!decreasing && c <= lo) => 0.0,
            Family::Paraboloid if c <= lo => 0.0,
            _ => volume(c)?,
        };
        Ok(v < target)
    };
    let (mut a, mut b) = (lo, hi);
    loop {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b || iterations > 4000 {
            break;
        }
        iterations += 1;
        if below(mid)? != decreasing {
            a = mid;
        } else {
            b = mid;
        }
    }
    let c = 0.5 * (a + b);
    let plane = Hyperplane::new(slope, c * top)?;
    let submerged = cut_volume(body, &plane)?;
    let residual = (submerged - target).abs() / target;
    if residual > WATERLINE_TOL {
        return Err(Error::Accuracy {
            achieved: residual,
            requested: WATERLINE_TOL,
        });
    }
    Ok(WaterlineSolution {
        plane,
        submerged_volume: submerged,
        iterations,
        residual,
    })
}

/// Rejected draws allowed per constancy sample.
pub const TANGENT_ATTEMPTS: u32 = 10_000;

#[derive(Debug, Clone, PartialEq)]
pub struct ConstancySample {
    /// Tangent point on the surface.
    pub point: Vec<f64>,
    pub volume: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConstancyReport {
    /// Volume cut by the tangent plane over `x̄ = 0`.
    pub reference: f64,
    pub max_rel_dev: f64,
    pub samples: Vec<ConstancySample>,
}

impl ConstancyReport {
    pub fn new(reference: f64, samples: Vec<ConstancySample>) -> Self {
        let max_rel_dev = samples
            .iter()
            .map(|s| (s.volume - reference).abs() / reference)
            .fold(0.0, f64::max);
        ConstancyReport {
            reference,
            max_rel_dev,
            samples,
        }
    }
}

/// Half-widths of the box tangent points are drawn from.
pub fn tangent_box(body: &QuadricBody, surface: &FlotationSurface) -> Vec<f64> {
    let n = body.dim().n();
    let s = surface.semiaxes();
    match surface.family() {
        Family::Paraboloid => s.iter().map(|p| 3.0 / p).collect(),
        Family::Ellipsoid => s[..n].to_vec(),
        _ => match surface.truncation() {
            Some(top) => {
                let reach = sqrt(((top / s[n]) * (top / s[n]) - 1.0).max(0.0));
                s[..n].iter().map(|a| a * reach).collect()
            }
            None => body.semiaxes()[..n].iter().map(|a| 3.0 * a).collect(),
        },
    }
}

/// Volume cut by the tangent plane at `x̄`, checking that the tangent point
/// is in the body.
pub fn tangent_cut(body: &QuadricBody, surface: &FlotationSurface, x: &[f64], index: u64) -> Result<ConstancySample> {
    let point = surface.point_at(x)?;
    if !contains(body, &point) {
        return Err(Error::SurfaceOutsideBody { index });
    }
    let plane = surface.tangent_plane(x)?;
    Ok(ConstancySample {
        point,
        volume: cut_volume(body, &plane)?,
    })
}

/// Tangent sample `index`: uniform in [`tangent_box`], redrawn until the
/// surface admits it and the plane is a feasible cut.
pub fn constancy_sample(
    body: &QuadricBody,
    surface: &FlotationSurface,
    half_widths: &[f64],
    seed: u64,
    index: u64,
) -> Result<ConstancySample> {
    let mut rng = rng::stream(seed, index);
    let mut x = alloc::vec![0.0; half_widths.len()];
    for _ in 0..TANGENT_ATTEMPTS {
        for (xi, b) in x.iter_mut().zip(half_widths) {
            *xi = b * (2.0 * rng::unit(&mut rng) - 1.0);
        }
        if !surface.admits(&x) {
            continue;
        }
        match tangent_cut(body, surface, &x, index) {
            Err(Error::Infeasible(_)) => continue,
            other => return other,
        }
    }
    Err(Error::Sampling {
        index,
        attempts: TANGENT_ATTEMPTS,
    })
}

/// Checks that the tangent planes of `surface` all cut the same volume.
pub fn verify_constancy(
    body: &QuadricBody,
    surface: &FlotationSurface,
    samples: u64,
    seed: u64,
) -> Result<ConstancyReport> {
    check_pairing(body, surface)?;
    let reference = tangent_cut(body, surface, &alloc::vec![0.0; body.dim().n()], 0)?.volume;
    let widths = tangent_box(body, surface);
    let drawn = (0..samples)
        .map(|i| constancy_sample(body, surface, &widths, seed, i))
        .collect::<Result<Vec<_>>>()?;
    Ok(ConstancyReport::new(reference, drawn))
}

/// Rejects a surface built for a different body family or dimension.
pub fn check_pairing(body: &QuadricBody, surface: &FlotationSurface) -> Result<()> {
    if body.family() != surface.family() || body.dim() != surface.dim() {
        return Err(Error::InvalidInput("surface does not belong to this body"));
    }
    Ok(())
}
