//! Independent estimates of cut volumes and section centroids.
//!
//! Nothing here calls [`crate::kernels`]: [`mc_volume`] is hit-or-miss
//! sampling in a box around the cut, [`slice_volume`] integrates the areas
//! of the chordal sections parallel to the plane, and
//! [`mc_section_centroid`] averages uniform points of the chordal section.
//!
//! Sample `i` of seed `s` depends only on `(s, i)`. The `*_range` functions
//! evaluate a contiguous block of indices so callers can spread blocks over
//! threads; [`CHUNK`]-sized blocks merged in index order reproduce the
//! sequential result bit for bit.

pub mod quadrature;
mod region;
pub mod rng;

use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

use crate::error::{Error, Result};
use crate::geometry::{Family, Hyperplane, QuadricBody, canonical_contains};
use crate::kernels::alpha;
use crate::math::{acos, dot, pow_half, powi, sqrt};
use region::Cut;

/// Block size of the deterministic reduction.
pub const CHUNK: u64 = 1 << 14;

/// Hit rates below this abort [`mc_volume`].
pub const MIN_HIT_RATE: f64 = 1e-3;

/// Proposals allowed per accepted centroid sample.
pub const MAX_ATTEMPTS: u32 = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    MonteCarlo,
    SliceQuadrature,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::MonteCarlo => "monte_carlo",
            Method::SliceQuadrature => "slice_quadrature",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleEstimate {
    pub value: f64,
    pub std_error: f64,
    /// Monte Carlo draws, or integrand evaluations for quadrature.
    pub samples: u64,
    pub seed: u64,
    pub method: Method,
}

/// Hit-or-miss sampler for one cut.
#[derive(Debug, Clone)]
pub struct VolumeSampler {
    cut: Cut,
    plane: Hyperplane,
    lo: Vec<f64>,
    width: Vec<f64>,
    box_volume: f64,
}

impl VolumeSampler {
    pub fn new(body: &QuadricBody, plane: &Hyperplane) -> Result<Self> {
        let cut = Cut::new(body, plane)?;
        let (lo, hi) = cut.bounding_box();
        let width: Vec<f64> = lo.iter().zip(&hi).map(|(l, h)| h - l).collect();
        let box_volume: f64 = width.iter().product();
        if !(box_volume > 0.0 && box_volume.is_finite()) {
            return Err(Error::Domain {
                what: "bounding box volume",
                value: box_volume,
                lower: 0.0,
                upper: f64::INFINITY,
            });
        }
        Ok(VolumeSampler {
            cut,
            plane: plane.clone(),
            lo,
            width,
            box_volume,
        })
    }

    /// Box volume in the original frame.
    pub fn box_volume(&self) -> f64 {
        self.box_volume * self.cut.scale
    }

    /// Number of hits among the samples with indices in `range`.
    pub fn hits(&self, seed: u64, range: Range<u64>) -> u64 {
        let dim = self.lo.len();
        let words = 2 * dim as u64;
        let mut rng = rng::positioned(seed, range.start, words);
        let mut y = vec![0.0; dim];
        let mut original = vec![0.0; dim];
        let above = self.cut.cup_above();
        let mut hits = 0;
        for _ in range {
            for j in 0..dim {
                y[j] = self.lo[j] + self.width[j] * rng::unit(&mut rng);
            }
            self.cut.unshear(&mut y);
            if !canonical_contains(self.cut.family, self.cut.epsilon, &y) {
                continue;
            }
            for j in 0..dim {
                original[j] = y[j] * self.cut.axis[j];
            }
            let side = self.plane.residual(&original);
            if (above && side >= 0.0) || (!above && side <= 0.0) {
                hits += 1;
            }
        }
        hits
    }

    pub fn estimate(&self, hits: u64, samples: u64, seed: u64) -> Result<OracleEstimate> {
        if samples == 0 {
            return Err(Error::InvalidInput("at least one sample is required"));
        }
        let f = hits as f64 / samples as f64;
        if f < MIN_HIT_RATE {
            return Err(Error::HitRate {
                rate: f,
                minimum: MIN_HIT_RATE,
            });
        }
        let v = self.box_volume();
        Ok(OracleEstimate {
            value: v * f,
            std_error: v * sqrt(f * (1.0 - f) / samples as f64),
            samples,
            seed,
            method: Method::MonteCarlo,
        })
    }
}

/// Splits `0..samples` into [`CHUNK`]-sized index ranges.
pub fn chunks(samples: u64) -> impl Iterator<Item = Range<u64>> + Clone {
    (0..samples.div_ceil(CHUNK)).map(move |c| c * CHUNK..((c + 1) * CHUNK).min(samples))
}

/// Hit-or-miss Monte Carlo estimate of the volume `cut_volume` reports.
pub fn mc_volume(
    body: &QuadricBody,
    plane: &Hyperplane,
    samples: u64,
    seed: u64,
) -> Result<OracleEstimate> {
    let sampler = VolumeSampler::new(body, plane)?;
    let hits = chunks(samples).map(|r| sampler.hits(seed, r)).sum();
    sampler.estimate(hits, samples, seed)
}

/// Volume by adaptive Gauss–Kronrod quadrature over the slices parallel to
/// the plane. Each slice is an `n`-ellipsoid of volume `α_n rⁿ/√det Q`;
/// for the truncated one-sheeted body only the part above the base counts.
/// `nodes` is the number of initial panels per smooth piece.
pub fn slice_volume(body: &QuadricBody, plane: &Hyperplane, nodes: usize) -> Result<OracleEstimate> {
    let cut = Cut::new(body, plane)?;
    let n = cut.n();
    let unit = alpha(n);
    let sigma = cut.sigma();
    let det = crate::detkit::determinant(&crate::detkit::rank_one_update(&cut.slope, sigma));
    let factor = unit / sqrt(det);
    let (w0, w1) = cut.w_range();
    let mut evaluations = 0u64;

    let q = if cut.family == Family::OneSheetTruncated {
        let fraction = BallFraction::new(n)?;
        let b = cut.base();
        let tilt = sqrt(cut.s2 / det);
        let h = |w: f64| {
            let r = sqrt(cut.radius_sq(w).max(0.0));
            if tilt == 0.0 || r == 0.0 {
                return -1.0;
            }
            (-b - w / det) / (r * tilt)
        };
        let full = if tilt > 0.0 { crossing(|w| h(w) + 1.0, w0, w1) } else { w0 };
        let mut failure = None;
        let result = quadrature::integrate(
            |w| {
                evaluations += 1;
                let area = factor * pow_half(cut.radius_sq(w).max(0.0), n);
                match fraction.above(h(w)) {
                    Ok(f) => area * f,
                    Err(e) => {
                        failure = Some(e);
                        0.0
                    }
                }
            },
            w0,
            w1,
            &[full],
            nodes,
            SLICE_REL_TOL,
            0.0,
            MAX_PANELS,
        );
        if let Some(e) = failure {
            return Err(e);
        }
        result?
    } else {
        quadrature::integrate(
            |w| {
                evaluations += 1;
                factor * pow_half(cut.radius_sq(w).max(0.0), n)
            },
            w0,
            w1,
            &[],
            nodes,
            SLICE_REL_TOL,
            0.0,
            MAX_PANELS,
        )?
    };
    Ok(OracleEstimate {
        value: q.value.abs() * cut.scale,
        std_error: q.error * cut.scale,
        samples: evaluations,
        seed: 0,
        method: Method::SliceQuadrature,
    })
}

const SLICE_REL_TOL: f64 = 1e-12;
const MAX_PANELS: usize = 20_000;

/// Root of an increasing-then-crossing function by bisection; `a` if no
/// sign change.
fn crossing<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> f64 {
    let (mut lo, mut hi) = (a, b);
    if f(lo) * f(hi) > 0.0 {
        return a;
    }
    let lo_sign = f(lo) > 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if (f(mid) > 0.0) == lo_sign {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Fraction of the unit `n`-ball with `u_1 ≥ h`, as
/// `∫_0^{acos h} sinⁿθ dθ / ∫_0^π sinⁿθ dθ`.
struct BallFraction {
    n: u32,
    total: f64,
}

impl BallFraction {
    fn new(n: usize) -> Result<Self> {
        let n = n as u32;
        let total = quadrature::integrate(
            |t| powi(libm::sin(t), n),
            0.0,
            core::f64::consts::PI,
            &[],
            2,
            1e-14,
            0.0,
            2000,
        )?
        .value;
        Ok(BallFraction { n, total })
    }

    fn above(&self, h: f64) -> Result<f64> {
        if h <= -1.0 {
            return Ok(1.0);
        }
        if h >= 1.0 {
            return Ok(0.0);
        }
        let n = self.n;
        let part = quadrature::integrate(
            |t| powi(libm::sin(t), n),
            0.0,
            acos(h),
            &[],
            1,
            1e-14,
            1e-300,
            2000,
        )?;
        Ok(part.value / self.total)
    }
}

/// Running sums of accepted section points, relative to a fixed origin.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentSums {
    pub count: u64,
    pub sum: Vec<f64>,
    pub sum_sq: Vec<f64>,
}

impl MomentSums {
    pub fn new(dim: usize) -> Self {
        MomentSums {
            count: 0,
            sum: vec![0.0; dim],
            sum_sq: vec![0.0; dim],
        }
    }

    pub fn merge(&mut self, other: &MomentSums) {
        self.count += other.count;
        for (a, b) in self.sum.iter_mut().zip(&other.sum) {
            *a += b;
        }
        for (a, b) in self.sum_sq.iter_mut().zip(&other.sum_sq) {
            *a += b;
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CentroidEstimate {
    /// Ambient point `(x, z)` in the body's frame.
    pub point: Vec<f64>,
    pub std_error: Vec<f64>,
    pub samples: u64,
    pub seed: u64,
}

/// Uniform sampler of the chordal section of a cut.
#[derive(Debug, Clone)]
pub struct SectionSampler {
    cut: Cut,
    plane: Hyperplane,
    section: region::Section,
    radius: f64,
    origin: Vec<f64>,
}

impl SectionSampler {
    pub fn new(body: &QuadricBody, plane: &Hyperplane) -> Result<Self> {
        let cut = Cut::new(body, plane)?;
        let section = cut.section(cut.c);
        if !(section.r2 > 0.0) {
            return Err(Error::Domain {
                what: "section radius squared",
                value: section.r2,
                lower: 0.0,
                upper: f64::INFINITY,
            });
        }
        let radius = 1.01 * sqrt(section.r2);
        let n = cut.n();
        let mut origin: Vec<f64> = (0..n).map(|i| section.centre[i] * cut.axis[i]).collect();
        origin.push(plane.height_at(&origin));
        Ok(SectionSampler {
            cut,
            plane: plane.clone(),
            section,
            radius,
            origin,
        })
    }

    /// One uniform point of the section, in the original frame.
    pub fn sample(&self, seed: u64, index: u64, out: &mut [f64]) -> Result<()> {
        let n = self.cut.n();
        let mut rng = rng::stream(seed, index);
        let mut u = vec![0.0; n];
        let mut y = vec![0.0; n + 1];
        for _ in 0..MAX_ATTEMPTS {
            for v in u.iter_mut() {
                *v = 2.0 * rng::unit(&mut rng) - 1.0;
            }
            if dot(&u, &u) > 1.0 {
                continue;
            }
            self.section.map(&self.cut.slope, self.radius, &u, &mut y[..n]);
            y[n] = dot(&self.cut.slope, &y[..n]) + self.cut.c;
            if !canonical_contains(self.cut.family, self.cut.epsilon, &y) {
                continue;
            }
            for i in 0..n {
                out[i] = y[i] * self.cut.axis[i];
            }
            out[n] = self.plane.height_at(&out[..n]);
            return Ok(());
        }
        Err(Error::Sampling {
            index,
            attempts: MAX_ATTEMPTS,
        })
    }

    pub fn accumulate(&self, seed: u64, range: Range<u64>) -> Result<MomentSums> {
        let dim = self.origin.len();
        let mut sums = MomentSums::new(dim);
        let mut point = vec![0.0; dim];
        for i in range {
            self.sample(seed, i, &mut point)?;
            sums.count += 1;
            for j in 0..dim {
                let d = point[j] - self.origin[j];
                sums.sum[j] += d;
                sums.sum_sq[j] += d * d;
            }
        }
        Ok(sums)
    }

    pub fn estimate(&self, sums: &MomentSums, seed: u64) -> Result<CentroidEstimate> {
        if sums.count < 2 {
            return Err(Error::InvalidInput("centroid needs at least two samples"));
        }
        let m = sums.count as f64;
        let mut point = Vec::with_capacity(self.origin.len());
        let mut std_error = Vec::with_capacity(self.origin.len());
        for j in 0..self.origin.len() {
            let mean = sums.sum[j] / m;
            let var = ((sums.sum_sq[j] - m * mean * mean) / (m - 1.0)).max(0.0);
            point.push(self.origin[j] + mean);
            std_error.push(sqrt(var / m));
        }
        Ok(CentroidEstimate {
            point,
            std_error,
            samples: sums.count,
            seed,
        })
    }
}

/// Monte Carlo centroid of the chordal section `plane ∩ body`.
pub fn mc_section_centroid(
    body: &QuadricBody,
    plane: &Hyperplane,
    samples: u64,
    seed: u64,
) -> Result<CentroidEstimate> {
    let sampler = SectionSampler::new(body, plane)?;
    let mut total = MomentSums::new(body.dim().ambient());
    for r in chunks(samples) {
        total.merge(&sampler.accumulate(seed, r)?);
    }
    sampler.estimate(&total, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Dim;
    use core::f64::consts::PI;

    fn unit(family: Family, n: usize) -> QuadricBody {
        let eps = (family == Family::OneSheetTruncated).then_some(1.0);
        QuadricBody::canonical(family, Dim::new(n).unwrap(), eps).unwrap()
    }

    #[test]
    fn hemisphere_by_slices() {
        let est = slice_volume(&unit(Family::Ellipsoid, 2), &Hyperplane::horizontal(Dim::new(2).unwrap(), 0.0), 4)
            .unwrap();
        assert!((est.value - 2.0 * PI / 3.0).abs() < 1e-12);
    }

    #[test]
    fn unit_cone_by_slices() {
        let plane = Hyperplane::horizontal(Dim::new(2).unwrap(), 1.0);
        let est = slice_volume(&unit(Family::Cone, 2), &plane, 2).unwrap();
        assert!((est.value - PI / 3.0).abs() < 1e-12);
    }

    #[test]
    fn one_sheet_horizontal_by_slices() {
        // π ∫_{-1}^{0} (1 + z²) dz
        let plane = Hyperplane::horizontal(Dim::new(2).unwrap(), 0.0);
        let est = slice_volume(&unit(Family::OneSheetTruncated, 2), &plane, 2).unwrap();
        assert!((est.value - 4.0 * PI / 3.0).abs() < 1e-11);
    }

    #[test]
    fn hemisphere_by_sampling() {
        let plane = Hyperplane::horizontal(Dim::new(2).unwrap(), 0.0);
        let est = mc_volume(&unit(Family::Ellipsoid, 2), &plane, 100_000, 1).unwrap();
        assert!((est.value - 2.0 * PI / 3.0).abs() < 4.0 * est.std_error);
        let again = mc_volume(&unit(Family::Ellipsoid, 2), &plane, 100_000, 1).unwrap();
        assert_eq!(est, again);
    }

    #[test]
    fn infeasible_cut_is_rejected() {
        let plane = Hyperplane::horizontal(Dim::new(1).unwrap(), -1.0);
        assert!(matches!(
            mc_volume(&unit(Family::Paraboloid, 1), &plane, 10, 0),
            Err(Error::Infeasible(_))
        ));
    }

    #[test]
    fn horizontal_section_centroid() {
        let plane = Hyperplane::horizontal(Dim::new(2).unwrap(), 0.3);
        let est = mc_section_centroid(&unit(Family::Ellipsoid, 2), &plane, 20_000, 5).unwrap();
        assert!(est.point[0].abs() < 4.0 * est.std_error[0]);
        assert!(est.point[1].abs() < 4.0 * est.std_error[1]);
        assert_eq!(est.point[2], 0.3);
    }

    #[test]
    fn chunks_cover_the_range() {
        let v: Vec<_> = chunks(2 * CHUNK + 3).collect();
        assert_eq!(v.len(), 3);
        assert_eq!(v[2], 2 * CHUNK..2 * CHUNK + 3);
        assert_eq!(chunks(0).count(), 0);
    }
}
