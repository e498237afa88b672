//! Thin wrappers over `libm` so the rest of the crate reads like ordinary
//! float code.

pub(crate) use libm::{acos, acosh, asinh, sqrt};

#[inline]
pub(crate) fn powf(x: f64, y: f64) -> f64 {
    libm::pow(x, y)
}

#[inline]
pub(crate) fn powi(x: f64, n: u32) -> f64 {
    let mut acc = 1.0;
    let mut base = x;
    let mut e = n;
    while e > 0 {
        if e & 1 == 1 {
            acc *= base;
        }
        base *= base;
        e >>= 1;
    }
    acc
}

/// `x^{n/2}` for `x ≥ 0`, exact for even `n`.
#[inline]
pub(crate) fn pow_half(x: f64, n: usize) -> f64 {
    let whole = powi(x, (n / 2) as u32);
    if n % 2 == 1 { whole * sqrt(x) } else { whole }
}

/// `Γ(m/2)` for integer `m ≥ 1`, from `Γ(1/2) = √π`, `Γ(1) = 1` and
/// `Γ(x + 1) = x Γ(x)`.
pub(crate) fn gamma_half(m: usize) -> f64 {
    debug_assert!(m >= 1);
    let (mut x, mut g) = if m % 2 == 0 {
        (1.0, 1.0)
    } else {
        (0.5, sqrt(core::f64::consts::PI))
    };
    let target = m as f64 / 2.0;
    while x < target {
        g *= x;
        x += 1.0;
    }
    g
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub(crate) fn norm_sq(a: &[f64]) -> f64 {
    a.iter().map(|x| x * x).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    #[test]
    fn gamma_at_half_integers() {
        assert_eq!(gamma_half(2), 1.0);
        assert_eq!(gamma_half(4), 1.0);
        assert_eq!(gamma_half(6), 2.0);
        assert_eq!(gamma_half(10), 24.0);
        assert!((gamma_half(1) - sqrt(PI)).abs() < 1e-15);
        assert!((gamma_half(3) - sqrt(PI) / 2.0).abs() < 1e-15);
        assert!((gamma_half(7) - 15.0 * sqrt(PI) / 8.0).abs() < 1e-14);
    }

    #[test]
    fn integer_and_half_powers() {
        assert_eq!(powi(3.0, 0), 1.0);
        assert_eq!(powi(2.0, 10), 1024.0);
        assert_eq!(pow_half(4.0, 3), 8.0);
        assert_eq!(pow_half(9.0, 4), 81.0);
    }
}
