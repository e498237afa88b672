mod common;

use common::dim;
use floatbody_core::flotation::FlotationSurface;
use floatbody_core::geometry::{contains, cut_params, descale};
use floatbody_core::{Family, Hyperplane, QuadricBody};
use proptest::prelude::*;

fn family() -> impl Strategy<Value = Family> {
    prop::sample::select(Family::ALL.to_vec())
}

fn body_and_k() -> impl Strategy<Value = (QuadricBody, f64, Vec<f64>)> {
    (family(), 1usize..5, prop::collection::vec(0.3f64..3.0, 6), 0.3f64..3.0, 0.05f64..0.95, prop::collection::vec(-1.0f64..1.0, 4))
        .prop_map(|(family, n, axes, eps, unit_k, dir)| {
            let d = dim(n);
            let axes = axes[..family.semiaxis_count(d)].to_vec();
            let eps = (family == Family::OneSheetTruncated).then_some(eps);
            let body = QuadricBody::new(family, d, axes, eps).unwrap();
            let k = match family {
                Family::HyperboloidUpper => 1.0 + 3.0 * unit_k,
                Family::Ellipsoid => unit_k,
                _ => 3.0 * unit_k,
            };
            (body, k, dir[..n].to_vec())
        })
}

/// A tangent point the surface admits, scaled down from `dir` until it is.
fn admitted(surface: &FlotationSurface, dir: &[f64], body: &QuadricBody) -> Option<Vec<f64>> {
    let mut x: Vec<f64> = dir.iter().zip(body.semiaxes()).map(|(d, a)| 2.0 * d * a).collect();
    for _ in 0..60 {
        if surface.admits(&x) {
            let plane = surface.tangent_plane(&x).ok()?;
            if cut_params(body, &plane).ok()?.feasible {
                return Some(x);
            }
        }
        x.iter_mut().for_each(|v| *v *= 0.7);
    }
    None
}

proptest! {
    #[test]
    fn reduced_coordinate_is_constant_on_tangent_planes((body, k, dir) in body_and_k()) {
        let surface = FlotationSurface::homothetic(&body, k).unwrap();
        let x = admitted(&surface, &dir, &body);
        prop_assume!(x.is_some());
        let plane = surface.tangent_plane(&x.unwrap()).unwrap();
        let cp = cut_params(&body, &plane).unwrap();
        let want = if body.family() == Family::Paraboloid { k * k } else { k };
        prop_assert!((cp.zeta - want).abs() <= 1e-12 * want.max(1.0), "{} vs {}", cp.zeta, want);
    }

    #[test]
    fn tangent_planes_touch_the_surface((body, k, dir) in body_and_k()) {
        let surface = FlotationSurface::homothetic(&body, k).unwrap();
        let n = body.dim().n();
        let x: Vec<f64> = dir.iter().map(|d| 0.3 * d * k).collect();
        prop_assume!(surface.admits(&x));
        let plane = surface.tangent_plane(&x).unwrap();
        let p = surface.point_at(&x).unwrap();
        prop_assert!(plane.residual(&p).abs() < 1e-12 * (1.0 + p[n].abs()));
        // Nearby surface points stay on one side of the plane.
        let mut side = 0.0f64;
        for i in 0..n {
            for h in [-1e-3, 1e-3] {
                let mut y = x.clone();
                y[i] += h;
                if let Ok(q) = surface.point_at(&y) {
                    let r = plane.residual(&q);
                    prop_assert!(side * r >= -1e-18, "surface crosses its tangent plane");
                    if r.abs() > 1e-15 { side = r.signum(); }
                }
            }
        }
    }

    #[test]
    fn descale_round_trip((body, _k, dir) in body_and_k(), c in -2.0f64..2.0) {
        let plane = Hyperplane::new(dir.clone(), c).unwrap();
        let reduced = descale(&body, &plane).unwrap();
        let back = body.scaling().plane_from_canonical(&reduced.plane);
        for (a, b) in back.slope().iter().zip(plane.slope()) {
            prop_assert!((a - b).abs() < 1e-14 * (1.0 + b.abs()));
        }
        prop_assert!((back.intercept() - c).abs() < 1e-14 * (1.0 + c.abs()));
        prop_assert!((reduced.scale - body.scaling().jacobian()).abs() == 0.0);
        let pt: Vec<f64> = dir.iter().copied().chain([c]).collect();
        let canonical = body.scaling().to_canonical(&pt);
        let again = body.scaling().from_canonical(&canonical);
        for (a, b) in again.iter().zip(&pt) {
            prop_assert!((a - b).abs() < 1e-14 * (1.0 + b.abs()));
        }
    }

    #[test]
    fn raising_a_plane_keeps_it_feasible((body, _k, dir) in body_and_k(), c in -3.0f64..3.0, lift in 0.0f64..2.0) {
        prop_assume!(body.family() != Family::Ellipsoid);
        let slope: Vec<f64> = dir.iter().map(|d| 0.4 * d / body.dim().n() as f64).collect();
        let low = Hyperplane::new(slope.clone(), c).unwrap();
        let high = Hyperplane::new(slope, c + lift).unwrap();
        if cut_params(&body, &low).unwrap().feasible {
            prop_assert!(cut_params(&body, &high).unwrap().feasible);
        }
    }

    #[test]
    fn tangent_points_lie_in_the_body((body, k, dir) in body_and_k()) {
        let surface = FlotationSurface::homothetic(&body, k).unwrap();
        let x = admitted(&surface, &dir, &body);
        prop_assume!(x.is_some());
        let p = surface.point_at(&x.unwrap()).unwrap();
        prop_assert!(contains(&body, &p));
    }
}
