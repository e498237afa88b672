//! Canonical cut-volume kernels and their Archimedean cones.
//!
//! Every kernel is `α_n(1) · ∫ g(ζ) dζ` over a family-specific range, with
//! `α_n(1) = π^{n/2}/Γ(n/2 + 1)` the volume of the unit `n`-ball:
//!
//! | kernel | integrand | range |
//! |--------|-----------|-------|
//! | `F₀` | `ζ^{n/2}` | `[0, t]` |
//! | `G₀` | `(ζ² − 1)^{n/2}` | `[1, t]` |
//! | `H₀` | `(1 + ζ²)^{n/2}` | `[−1/ε, t]` |
//! | `C₀` | `ζ^n` | `[0, t]` |
//! | `L₀` | `(1 − ζ²)^{n/2}` | `[t, 1]` |
//!
//! The integrals are evaluated by the two-step reduction
//! `(n + 1) I_n = boundary term ± n I_{n−2}` from the `n = 0` and `n = 1`
//! antiderivatives. Near the lower end of `G₀` and the upper end of `L₀`
//! that recurrence subtracts nearly equal numbers at every step, so there the
//! integral is summed from the binomial series of the integrand around the
//! endpoint instead.

use crate::error::{Error, Result};
use crate::geometry::{Dim, Family};
use crate::math::{acos, acosh, asinh, gamma_half, pow_half, powf, powi, sqrt};

/// Volume of the unit `n`-ball, `π^{n/2}/Γ(n/2 + 1)`.
pub fn alpha(n: usize) -> f64 {
    pow_half(core::f64::consts::PI, n) / gamma_half(n + 2)
}

/// A kernel value at canonical scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelEval {
    pub family: Family,
    pub n: Dim,
    pub arg: f64,
    pub value: f64,
    pub alpha_n1: f64,
}

impl KernelEval {
    /// Volume of the same cut from a body whose descale factor is `scale`.
    pub fn scaled(&self, scale: f64) -> f64 {
        self.value * scale
    }
}

fn domain(what: &'static str, value: f64, lower: f64, upper: f64) -> Error {
    Error::Domain {
        what,
        value,
        lower,
        upper,
    }
}

fn require(t: f64, lower: f64, upper: f64) -> Result<()> {
    if t.is_nan() || t < lower || t > upper {
        return Err(domain("kernel argument", t, lower, upper));
    }
    Ok(())
}

/// Paraboloid kernel `π^{n/2}/Γ(n/2 + 2) · t^{n/2 + 1}`.
pub fn f0(dim: Dim, t: f64) -> Result<f64> {
    require(t, 0.0, f64::INFINITY)?;
    let n = dim.n();
    Ok(pow_half(core::f64::consts::PI, n) / gamma_half(n + 4) * pow_half(t, n + 2))
}

/// Two-sheeted hyperboloid kernel, `t ≥ 1`.
pub fn g0(dim: Dim, t: f64) -> Result<f64> {
    require(t, 1.0, f64::INFINITY)?;
    Ok(alpha(dim.n()) * hyperbolic_integral(dim.n(), t))
}

/// Truncated one-sheeted hyperboloid kernel, `t ≥ −1/ε`.
pub fn h0(dim: Dim, epsilon: f64, t: f64) -> Result<f64> {
    if !(epsilon.is_finite() && epsilon > 0.0) {
        return Err(domain("epsilon", epsilon, 0.0, f64::INFINITY));
    }
    let base = 1.0 / epsilon;
    require(t, -base, f64::INFINITY)?;
    Ok(alpha(dim.n()) * waist_integral(dim.n(), base, t))
}

/// Cone kernel `α_n(1) t^{n+1}/(n + 1)`.
pub fn c0(dim: Dim, t: f64) -> Result<f64> {
    require(t, 0.0, f64::INFINITY)?;
    let n = dim.n();
    Ok(alpha(n) * powi(t, (n + 1) as u32) / (n + 1) as f64)
}

/// Ball cap kernel for a plane at distance `t ∈ [0, 1]` from the centre.
pub fn l0(dim: Dim, t: f64) -> Result<f64> {
    require(t, 0.0, 1.0)?;
    Ok(alpha(dim.n()) * cap_integral(dim.n(), t))
}

/// The kernel of `family`. `epsilon` is only read for
/// [`Family::OneSheetTruncated`].
pub fn kernel(family: Family, dim: Dim, epsilon: Option<f64>, t: f64) -> Result<KernelEval> {
    let value = match family {
        Family::Paraboloid => f0(dim, t)?,
        Family::HyperboloidUpper => g0(dim, t)?,
        Family::OneSheetTruncated => h0(
            dim,
            epsilon.ok_or(Error::InvalidInput("one-sheeted kernel needs epsilon"))?,
            t,
        )?,
        Family::Cone => c0(dim, t)?,
        Family::Ellipsoid => l0(dim, t)?,
    };
    Ok(KernelEval {
        family,
        n: dim,
        arg: t,
        value,
        alpha_n1: alpha(dim.n()),
    })
}

/// Derivative of the kernel in its argument, i.e. `α_n(1)` times the signed
/// integrand. Arguments are assumed to lie in the kernel's domain.
pub fn kernel_derivative(family: Family, dim: Dim, t: f64) -> f64 {
    let n = dim.n();
    let a = alpha(n);
    match family {
        Family::Paraboloid => a * pow_half(t.max(0.0), n),
        Family::HyperboloidUpper => a * pow_half(((t - 1.0) * (t + 1.0)).max(0.0), n),
        Family::OneSheetTruncated => a * pow_half(1.0 + t * t, n),
        Family::Cone => a * powi(t, n as u32),
        Family::Ellipsoid => -a * pow_half(((1.0 - t) * (1.0 + t)).max(0.0), n),
    }
}

/// `∫_1^t (ζ² − 1)^{n/2} dζ`.
fn hyperbolic_integral(n: usize, t: f64) -> f64 {
    let u = t - 1.0;
    if u < SERIES_REACH {
        return endpoint_series(n, u, 1.0);
    }
    let w = (t - 1.0) * (t + 1.0);
    let (mut acc, start) = if n % 2 == 0 {
        (u, 0)
    } else {
        (0.5 * (t * sqrt(w) - acosh(t)), 1)
    };
    let mut m = start + 2;
    while m <= n {
        acc = (t * pow_half(w, m) - m as f64 * acc) / (m + 1) as f64;
        m += 2;
    }
    acc
}

/// `∫_t^1 (1 − ζ²)^{n/2} dζ` for `t ∈ [0, 1]`.
fn cap_integral(n: usize, t: f64) -> f64 {
    let u = 1.0 - t;
    if u <= CAP_SERIES_REACH {
        return endpoint_series(n, u, -1.0);
    }
    let w = (1.0 - t) * (1.0 + t);
    let (mut acc, start) = if n % 2 == 0 {
        (u, 0)
    } else {
        (0.5 * (acos(t) - t * sqrt(w)), 1)
    };
    let mut m = start + 2;
    while m <= n {
        acc = (m as f64 * acc - t * pow_half(w, m)) / (m + 1) as f64;
        m += 2;
    }
    acc
}

/// `∫_{−base}^t (1 + ζ²)^{n/2} dζ`.
fn waist_integral(n: usize, base: f64, t: f64) -> f64 {
    let gap = t + base;
    if gap < NEAR_BOUNDARY * (1.0 + base) {
        // Leading order: integrand value at the base times the width.
        return pow_half(1.0 + base * base, n) * gap;
    }
    waist_antiderivative(n, t) + waist_antiderivative(n, base)
}

/// Odd antiderivative of `(1 + ζ²)^{n/2}` vanishing at 0. Every term of the
/// recurrence has the sign of `t`, so it is evaluated at `|t|`.
fn waist_antiderivative(n: usize, t: f64) -> f64 {
    let s = t.abs();
    let w = 1.0 + s * s;
    let (mut acc, start) = if n % 2 == 0 {
        (s, 0)
    } else {
        (0.5 * (s * sqrt(w) + asinh(s)), 1)
    };
    let mut m = start + 2;
    while m <= n {
        acc = (s * pow_half(w, m) + m as f64 * acc) / (m + 1) as f64;
        m += 2;
    }
    acc.copysign(t)
}

const NEAR_BOUNDARY: f64 = 1e-12;
const SERIES_REACH: f64 = 1.0;
const CAP_SERIES_REACH: f64 = 0.5;

/// `∫_0^u s^{n/2} (2 + σ s)^{n/2} ds` for `σ = ±1` and `0 ≤ u < 2`, summed
/// term by term from the binomial expansion of `(1 + σ s/2)^{n/2}`.
fn endpoint_series(n: usize, u: f64, sigma: f64) -> f64 {
    if u <= 0.0 {
        return 0.0;
    }
    let m = n as f64 / 2.0;
    let x = sigma * u / 2.0;
    let lead = powf(2.0, m) * pow_half(u, n + 2);
    let mut coeff = 1.0;
    let mut xp = 1.0;
    let mut sum = 0.0;
    for j in 0..400 {
        let term = coeff * xp / (m + j as f64 + 1.0);
        sum += term;
        if term.abs() <= 1e-18 * sum.abs() && j as f64 > m {
            break;
        }
        coeff *= (m - j as f64) / (j as f64 + 1.0);
        if coeff == 0.0 {
            break;
        }
        xp *= x;
    }
    lead * sum
}

/// Volume of the cone over the chordal section with apex at the segment's
/// vertex.
pub fn cone_volume(family: Family, dim: Dim, zeta: f64) -> Result<f64> {
    let n = dim.n();
    let a = alpha(n) / (n + 1) as f64;
    match family {
        Family::Paraboloid => {
            require(zeta, 0.0, f64::INFINITY)?;
            Ok(a * pow_half(zeta, n + 2))
        }
        Family::HyperboloidUpper => {
            require(zeta, 1.0, f64::INFINITY)?;
            Ok(a * pow_half((zeta - 1.0) * (zeta + 1.0), n) * (zeta - 1.0))
        }
        Family::Cone => {
            require(zeta, 0.0, f64::INFINITY)?;
            Ok(a * powi(zeta, (n + 1) as u32))
        }
        Family::Ellipsoid => {
            require(zeta, 0.0, 1.0)?;
            Ok(a * pow_half((1.0 - zeta) * (1.0 + zeta), n) * (1.0 - zeta))
        }
        Family::OneSheetTruncated => Err(Error::InvalidInput(
            "the truncated one-sheeted cut has no Archimedean cone",
        )),
    }
}

/// Segment volume over the volume of its Archimedean cone.
pub fn archimedean_ratio(family: Family, dim: Dim, zeta: f64) -> Result<f64> {
    let degenerate = match family {
        Family::Paraboloid | Family::Cone => !(zeta > 0.0),
        Family::HyperboloidUpper => !(zeta > 1.0),
        Family::Ellipsoid => !(0.0..1.0).contains(&zeta),
        Family::OneSheetTruncated => false,
    };
    if degenerate {
        let (lower, upper) = match family {
            Family::HyperboloidUpper => (1.0, f64::INFINITY),
            Family::Ellipsoid => (0.0, 1.0),
            _ => (0.0, f64::INFINITY),
        };
        return Err(domain("zeta (non-degenerate segment)", zeta, lower, upper));
    }
    let cone = cone_volume(family, dim, zeta)?;
    let segment = kernel(family, dim, None, zeta)?.value;
    Ok(segment / cone)
}
