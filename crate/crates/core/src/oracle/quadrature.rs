//! Globally adaptive Gauss–Kronrod (7, 15) quadrature.

use alloc::vec::Vec;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    /// Sum of the per-panel `|Kronrod − Gauss|` differences.
    pub error: f64,
    pub panels: usize,
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn panel<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> Panel {
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(centre);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for (i, (&x, &w)) in XGK.iter().zip(&WGK).take(7).enumerate() {
        let dx = half * x;
        let pair = f(centre - dx) + f(centre + dx);
        kronrod += w * pair;
        if i % 2 == 1 {
            gauss += WG[i / 2] * pair;
        }
    }
    Panel {
        a,
        b,
        value: kronrod * half,
        error: ((kronrod - gauss) * half).abs(),
    }
}

/// Integrates `f` over `[a, b]`, first splitting at `breaks` (points outside
/// the interval are ignored) and into `initial` equal panels, then bisecting
/// the worst panel until the summed error is below
/// `max(abs_tol, rel_tol·|value|)`.
pub fn integrate<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    breaks: &[f64],
    initial: usize,
    rel_tol: f64,
    abs_tol: f64,
    max_panels: usize,
) -> Result<Quadrature> {
    if a == b {
        return Ok(Quadrature {
            value: 0.0,
            error: 0.0,
            panels: 0,
        });
    }
    let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };
    let mut cuts: Vec<f64> = Vec::with_capacity(breaks.len() + 2);
    cuts.push(lo);
    cuts.extend(breaks.iter().copied().filter(|&x| x > lo && x < hi));
    cuts.push(hi);
    cuts.sort_by(f64::total_cmp);

    let pieces = initial.max(1);
    let mut panels: Vec<Panel> = Vec::new();
    for w in cuts.windows(2) {
        let step = (w[1] - w[0]) / pieces as f64;
        for i in 0..pieces {
            let x0 = w[0] + step * i as f64;
            let x1 = if i + 1 == pieces { w[1] } else { x0 + step };
            panels.push(panel(&mut f, x0, x1));
        }
    }

    loop {
        let value: f64 = panels.iter().map(|p| p.value).sum();
        let error: f64 = panels.iter().map(|p| p.error).sum();
        let target = abs_tol.max(rel_tol * value.abs());
        if error <= target {
            return Ok(Quadrature {
                value: sign * value,
                error,
                panels: panels.len(),
            });
        }
        let (worst, _) = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .expect("at least one panel");
        let p = panels[worst];
        let mid = 0.5 * (p.a + p.b);
        if panels.len() >= max_panels || !(mid > p.a && mid < p.b) {
            return Err(Error::Accuracy {
                achieved: error,
                requested: target,
            });
        }
        panels[worst] = panel(&mut f, p.a, mid);
        panels.push(panel(&mut f, mid, p.b));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let q = integrate(|x| x * x * x - 2.0 * x, 0.0, 2.0, &[], 1, 1e-14, 0.0, 10).unwrap();
        assert!((q.value - 0.0).abs() < 1e-14);
        let q = integrate(|x| x.powi(20), -1.0, 1.0, &[], 1, 1e-14, 0.0, 100).unwrap();
        assert!((q.value - 2.0 / 21.0).abs() < 1e-15);
    }

    #[test]
    fn endpoint_square_root() {
        let q = integrate(|x: f64| x.sqrt(), 0.0, 1.0, &[], 1, 1e-12, 0.0, 2000).unwrap();
        assert!((q.value - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn reversed_limits_flip_sign() {
        let q = integrate(|x| x, 1.0, 0.0, &[], 1, 1e-14, 0.0, 10).unwrap();
        assert!((q.value + 0.5).abs() < 1e-15);
    }

    #[test]
    fn kink_at_break() {
        let q = integrate(|x: f64| x.abs(), -1.0, 2.0, &[0.0], 1, 1e-14, 0.0, 10).unwrap();
        assert!((q.value - 2.5).abs() < 1e-14);
    }

    #[test]
    fn reports_failure() {
        let r = integrate(|x: f64| 1.0 / x.abs().sqrt(), -1.0, 1.0, &[], 1, 1e-15, 0.0, 8);
        assert!(matches!(r, Err(Error::Accuracy { .. })));
    }
}
