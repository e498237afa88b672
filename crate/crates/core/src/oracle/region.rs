//! Geometry of a feasible cut in the canonical frame: chordal sections of
//! the slab `z = p·x + w` and bounding boxes of the cut region.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::geometry::{Descaled, Family, Hyperplane, QuadricBody, canonical_cut_params, descale};
use crate::math::{dot, norm_sq, sqrt};

#[derive(Debug, Clone)]
pub(crate) struct Cut {
    pub family: Family,
    pub epsilon: Option<f64>,
    pub slope: Vec<f64>,
    pub c: f64,
    pub s2: f64,
    /// Volume factor back to the original frame.
    pub scale: f64,
    /// `original = axis ⊙ canonical`.
    pub axis: Vec<f64>,
}

/// The ellipsoid `(x − centre)ᵀ Q (x − centre) ≤ r²`, `Q = I + σ p pᵀ`.
#[derive(Debug, Clone)]
pub(crate) struct Section {
    pub centre: Vec<f64>,
    pub r2: f64,
    pub sigma: f64,
}

impl Cut {
    pub fn new(body: &QuadricBody, plane: &Hyperplane) -> Result<Cut> {
        let Descaled {
            body: canon,
            plane: cplane,
            scale,
        } = descale(body, plane)?;
        let params = canonical_cut_params(canon.family(), canon.epsilon(), &cplane);
        if let Some(why) = params.violation {
            return Err(Error::Infeasible(why));
        }
        Ok(Cut {
            family: canon.family(),
            epsilon: canon.epsilon(),
            s2: norm_sq(cplane.slope()),
            slope: cplane.slope().to_vec(),
            c: cplane.intercept(),
            scale,
            axis: body.scaling().axis().to_vec(),
        })
    }

    pub fn n(&self) -> usize {
        self.slope.len()
    }

    pub fn sigma(&self) -> f64 {
        match self.family {
            Family::Paraboloid => 0.0,
            Family::Ellipsoid => 1.0,
            _ => -1.0,
        }
    }

    /// `det Q = 1 + σ|p|²`.
    pub fn det_q(&self) -> f64 {
        1.0 + self.sigma() * self.s2
    }

    /// `1/ε` of the canonical body.
    pub fn base(&self) -> f64 {
        self.epsilon.map_or(f64::INFINITY, |e| 1.0 / e)
    }

    /// `r²` of the section of the untruncated quadric by `z = p·x + w`
    /// (negative when empty).
    pub fn radius_sq(&self, w: f64) -> f64 {
        let q = self.det_q();
        match self.family {
            Family::Paraboloid => w + self.s2 / 4.0,
            Family::HyperboloidUpper => w * w / q - 1.0,
            Family::Cone => w * w / q,
            Family::OneSheetTruncated => 1.0 + w * w / q,
            Family::Ellipsoid => 1.0 - w * w / q,
        }
    }

    pub fn section(&self, w: f64) -> Section {
        let centre = match self.family {
            Family::Paraboloid => self.slope.iter().map(|p| p / 2.0).collect(),
            _ => {
                let f = -self.sigma() * w / self.det_q();
                self.slope.iter().map(|p| f * p).collect()
            }
        };
        Section {
            centre,
            r2: self.radius_sq(w),
            sigma: self.sigma(),
        }
    }

    /// Range of `w = z − p·x` over the cut region; for the ellipsoid this
    /// is the smaller cup.
    pub fn w_range(&self) -> (f64, f64) {
        let q = self.det_q();
        match self.family {
            Family::Paraboloid => (-self.s2 / 4.0, self.c),
            Family::HyperboloidUpper => (sqrt(q), self.c),
            Family::Cone => (0.0, self.c),
            Family::OneSheetTruncated => {
                let b = self.base();
                (-b - sqrt(self.s2) * sqrt(1.0 + b * b), self.c)
            }
            Family::Ellipsoid => {
                if self.c >= 0.0 {
                    (self.c, sqrt(q))
                } else {
                    (-sqrt(q), self.c)
                }
            }
        }
    }

    /// Whether the ellipsoid cup lies above the plane.
    pub fn cup_above(&self) -> bool {
        self.family == Family::Ellipsoid && self.c >= 0.0
    }

    /// Sampling box for the cut region. For every family but the ellipsoid
    /// the last coordinate is the sheared `w`; the ellipsoid box is in
    /// `(x, z)` directly.
    pub fn bounding_box(&self) -> (Vec<f64>, Vec<f64>) {
        let n = self.n();
        let (mut lo, mut hi) = (vec![0.0; n + 1], vec![0.0; n + 1]);
        if self.family == Family::Ellipsoid {
            let norm = sqrt(1.0 + self.s2);
            let flip = if self.c >= 0.0 { 1.0 } else { -1.0 };
            let delta = self.c.abs() / norm;
            // Unit normal pointing into the cup.
            let mut nu: Vec<f64> = self.slope.iter().map(|p| -flip * p / norm).collect();
            nu.push(flip / norm);
            for j in 0..=n {
                hi[j] = cap_support(nu[j], delta);
                lo[j] = -cap_support(-nu[j], delta);
            }
        } else {
            let s = self.section(self.c);
            let r = sqrt(s.r2.max(0.0));
            for i in 0..n {
                let h = s.half_width(&self.slope, i, r);
                lo[i] = s.centre[i] - h;
                hi[i] = s.centre[i] + h;
            }
            if self.family == Family::OneSheetTruncated {
                let b = self.base();
                let rho = sqrt(1.0 + b * b);
                for i in 0..n {
                    lo[i] = lo[i].min(-rho);
                    hi[i] = hi[i].max(rho);
                }
            }
            let (w0, w1) = self.w_range();
            lo[n] = w0;
            hi[n] = w1;
        }
        for j in 0..=n {
            let pad = 0.005 * (hi[j] - lo[j]);
            lo[j] -= pad;
            hi[j] += pad;
        }
        (lo, hi)
    }

    /// Point of the canonical frame from box coordinates.
    #[inline]
    pub fn unshear(&self, y: &mut [f64]) {
        if self.family != Family::Ellipsoid {
            let n = self.n();
            y[n] += dot(&self.slope, &y[..n]);
        }
    }
}

/// `max e·y` over `{|y| ≤ 1, ν·y ≥ δ}` for `e·ν = nu_e`.
fn cap_support(nu_e: f64, delta: f64) -> f64 {
    if nu_e >= delta {
        1.0
    } else {
        delta * nu_e + sqrt(1.0 - delta * delta) * sqrt((1.0 - nu_e * nu_e).max(0.0))
    }
}

impl Section {
    /// Half-width of the section along `x_i`: `r √(Q⁻¹)_ii`.
    pub fn half_width(&self, slope: &[f64], i: usize, r: f64) -> f64 {
        let s2 = norm_sq(slope);
        let det = 1.0 + self.sigma * s2;
        r * sqrt((1.0 - self.sigma * slope[i] * slope[i] / det).max(0.0))
    }

    /// `centre + scale·Q^{-1/2} u`.
    pub fn map(&self, slope: &[f64], scale: f64, u: &[f64], out: &mut [f64]) {
        let s2 = norm_sq(slope);
        let beta = if s2 > 0.0 {
            (1.0 / sqrt(1.0 + self.sigma * s2) - 1.0) / s2
        } else {
            0.0
        };
        let pu = dot(slope, u);
        for i in 0..u.len() {
            out[i] = self.centre[i] + scale * (u[i] + beta * slope[i] * pu);
        }
    }
}
