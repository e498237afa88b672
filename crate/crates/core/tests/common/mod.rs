#![allow(dead_code)]

use floatbody_core::oracle::rng::{self, ChaCha8Rng};
use floatbody_core::{Dim, Family, Hyperplane, QuadricBody};

pub fn dim(n: usize) -> Dim {
    Dim::new(n).unwrap()
}

pub struct Draw(ChaCha8Rng);

impl Draw {
    pub fn new(seed: u64, stream: u64) -> Self {
        Draw(rng::stream(seed, stream))
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * rng::unit(&mut self.0)
    }

    pub fn vector(&mut self, len: usize, lo: f64, hi: f64) -> Vec<f64> {
        (0..len).map(|_| self.uniform(lo, hi)).collect()
    }
}

pub fn unit_body(family: Family, n: usize) -> QuadricBody {
    let eps = (family == Family::OneSheetTruncated).then_some(1.0);
    QuadricBody::canonical(family, dim(n), eps).unwrap()
}

pub fn random_body(family: Family, n: usize, draw: &mut Draw) -> QuadricBody {
    let d = dim(n);
    let semiaxes = draw.vector(family.semiaxis_count(d), 0.5, 2.0);
    let eps = (family == Family::OneSheetTruncated).then(|| draw.uniform(0.3, 3.0));
    QuadricBody::new(family, d, semiaxes, eps).unwrap()
}

/// A feasible plane for `body`, drawn in the canonical frame and mapped back.
pub fn random_cut(body: &QuadricBody, draw: &mut Draw) -> Hyperplane {
    let n = body.dim().n();
    let reach = 0.85 / (n as f64).sqrt();
    let (slope, c) = match body.family() {
        Family::Paraboloid => {
            let p = draw.vector(n, -2.0, 2.0);
            let s2: f64 = p.iter().map(|x| x * x).sum();
            let zeta = draw.uniform(0.1, 3.0);
            (p, zeta - s2 / 4.0)
        }
        Family::Ellipsoid => {
            let p = draw.vector(n, -1.0, 1.0);
            let s2: f64 = p.iter().map(|x| x * x).sum();
            let zeta = draw.uniform(0.0, 0.95);
            let sign = if draw.uniform(0.0, 1.0) < 0.5 { -1.0 } else { 1.0 };
            (p, sign * zeta * (1.0 + s2).sqrt())
        }
        family => {
            let p = draw.vector(n, -reach, reach);
            let s2: f64 = p.iter().map(|x| x * x).sum();
            let q = 1.0 - s2;
            let c = match family {
                Family::HyperboloidUpper => draw.uniform(1.05, 3.0) * q.sqrt(),
                Family::Cone => draw.uniform(0.2, 2.0) * q.sqrt(),
                _ => {
                    let eps = body.epsilon().unwrap() * body.semiaxes()[n];
                    let floor = (((1.0 + eps * eps).sqrt() * s2.sqrt() - 1.0) / eps).max(0.0);
                    floor + draw.uniform(0.05, 2.0)
                }
            };
            (p, c)
        }
    };
    let canonical = Hyperplane::new(slope, c).unwrap();
    body.scaling().plane_from_canonical(&canonical)
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}
