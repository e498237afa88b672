mod common;

use common::{Draw, dim, random_body, rel, unit_body};
use core::f64::consts::PI;
use floatbody_core::flotation::{
    FlotationSurface, cut_volume, flotation_surface, invert_volume, parabolic_limit_gamma,
    truncation_bound, verify_constancy, waterline,
};
use floatbody_core::geometry::cut_params;
use floatbody_core::kernels::l0;
use floatbody_core::{Error, Family, QuadricBody};

fn random_k(family: Family, draw: &mut Draw) -> f64 {
    match family {
        Family::HyperboloidUpper => draw.uniform(1.05, 4.0),
        Family::Ellipsoid => draw.uniform(0.02, 0.98),
        _ => draw.uniform(0.1, 3.0),
    }
}

#[test]
fn inversion_round_trip() {
    for (fi, family) in Family::ALL.into_iter().enumerate() {
        for n in 1..=6 {
            let mut draw = Draw::new(700 + fi as u64, n as u64);
            for _ in 0..20 {
                let body = random_body(family, n, &mut draw);
                let k = random_k(family, &mut draw);
                let surface = FlotationSurface::homothetic(&body, k).unwrap();
                let v = cut_volume(&body, &surface.tangent_plane(&vec![0.0; n]).unwrap()).unwrap();
                let back =
                    invert_volume(family, body.dim(), body.semiaxes(), body.epsilon(), v).unwrap();
                assert!(rel(back, k) < 1e-10, "{family} n={n}: {back} vs {k}");
            }
        }
    }
}

#[test]
fn constancy_on_random_bodies() {
    for (fi, family) in Family::ALL.into_iter().enumerate() {
        for n in [1, 2, 3, 6] {
            let mut draw = Draw::new(800 + fi as u64, n as u64);
            let body = random_body(family, n, &mut draw);
            let k = random_k(family, &mut draw);
            let surface = FlotationSurface::homothetic(&body, k).unwrap();
            let report = verify_constancy(&body, &surface, 200, 5).unwrap();
            assert!(report.max_rel_dev < 1e-11, "{family} n={n}: {}", report.max_rel_dev);
            assert_eq!(report.samples.len(), 200);
        }
    }
}

#[test]
fn constancy_examples_and_negative_control() {
    let par = unit_body(Family::Paraboloid, 2);
    let s = FlotationSurface::homothetic(&par, 1.0).unwrap();
    assert!(verify_constancy(&par, &s, 100, 1).unwrap().max_rel_dev <= 1e-12);
    let ball = unit_body(Family::Ellipsoid, 2);
    let s = FlotationSurface::homothetic(&ball, 0.5).unwrap();
    assert!(verify_constancy(&ball, &s, 100, 1).unwrap().max_rel_dev <= 1e-12);
    let bad = FlotationSurface::custom(Family::Ellipsoid, dim(2), 0.5, vec![0.5, 0.5, 0.25], 0.0, None)
        .unwrap();
    assert!(verify_constancy(&ball, &bad, 100, 1).unwrap().max_rel_dev > 1e-3);
}

#[test]
fn constancy_is_deterministic() {
    let body = unit_body(Family::Cone, 3);
    let s = FlotationSurface::homothetic(&body, 0.8).unwrap();
    let a = verify_constancy(&body, &s, 50, 7).unwrap();
    let b = verify_constancy(&body, &s, 50, 7).unwrap();
    assert_eq!(a, b);
}

#[test]
fn surface_outside_body_is_reported() {
    let ball = unit_body(Family::Ellipsoid, 2);
    let big = FlotationSurface::custom(Family::Ellipsoid, dim(2), 2.0, vec![2.0; 3], 0.0, None).unwrap();
    assert!(matches!(
        verify_constancy(&ball, &big, 10, 1),
        Err(Error::SurfaceOutsideBody { .. })
    ));
}

#[test]
fn cut_volume_examples() {
    let par = unit_body(Family::Paraboloid, 2);
    let s = FlotationSurface::homothetic(&par, 1.0).unwrap();
    let v = cut_volume(&par, &s.tangent_plane(&[0.3, -0.7]).unwrap()).unwrap();
    assert!((v - PI / 2.0).abs() < 1e-12);
    let ball = unit_body(Family::Ellipsoid, 2);
    let k: f64 = 0.35;
    let v = cut_volume(&ball, &floatbody_core::Hyperplane::horizontal(dim(2), k)).unwrap();
    assert!((v - PI / 3.0 * (1.0 - k).powi(2) * (k + 2.0)).abs() < 1e-12);
    let cone = unit_body(Family::Cone, 2);
    let v = cut_volume(&cone, &floatbody_core::Hyperplane::horizontal(dim(2), 1.0)).unwrap();
    assert!((v - PI / 3.0).abs() < 1e-12);
    let steep = floatbody_core::Hyperplane::new(vec![1.2, 0.0], 3.0).unwrap();
    assert!(matches!(cut_volume(&cone, &steep), Err(Error::Infeasible(_))));
}

#[test]
fn general_paraboloid_divides_by_the_coefficients() {
    // z ≥ p²x²: the tangent segments of z = p²x² + k² have area (4/3)k³/p.
    for p in [0.5, 2.0, 3.0] {
        let body = QuadricBody::new(Family::Paraboloid, dim(1), vec![p], None).unwrap();
        let s = FlotationSurface::homothetic(&body, 1.2).unwrap();
        let v = cut_volume(&body, &s.tangent_plane(&[0.4]).unwrap()).unwrap();
        assert!(rel(v, 4.0 / 3.0 * 1.2f64.powi(3) / p) < 1e-13);
        let k = invert_volume(Family::Paraboloid, dim(1), &[p], None, 4.0 / 3.0 / p).unwrap();
        assert!((k - 1.0).abs() < 1e-13);
    }
}

#[test]
fn surfaces_of_flotation() {
    let ball = unit_body(Family::Ellipsoid, 2);
    let s = flotation_surface(&ball, 2.0 * PI / 3.0).unwrap();
    assert_eq!(s.k(), 0.0);
    let par = unit_body(Family::Paraboloid, 2);
    let s = flotation_surface(&par, PI / 2.0).unwrap();
    assert!((s.k() - 1.0).abs() < 1e-14 && (s.translation() - 1.0).abs() < 1e-14);
    let cone = unit_body(Family::Cone, 2);
    let s = flotation_surface(&cone, PI / 3.0).unwrap();
    assert!((s.k() - 1.0).abs() < 1e-14);
    let one = unit_body(Family::OneSheetTruncated, 2);
    let s = flotation_surface(&one, 2.0 * PI).unwrap();
    assert_eq!(s.truncation(), Some(truncation_bound(s.k(), 1.0)));
    assert!(flotation_surface(&one, PI).is_err());
}

#[test]
fn truncation_flip() {
    for (k, eps, phi) in [(1.0, 1.0, 3.0), (2.0, 2.0, 7.0)] {
        assert_eq!(truncation_bound(k, eps), phi);
        let body = QuadricBody::canonical(Family::OneSheetTruncated, dim(1), Some(eps)).unwrap();
        let s = FlotationSurface::homothetic(&body, k).unwrap();
        let feasible = |x: f64| cut_params(&body, &s.tangent_plane(&[x]).unwrap()).unwrap().feasible;
        let (mut lo, mut hi) = (0.0, 100.0);
        assert!(feasible(lo) && !feasible(hi));
        while hi - lo > 1e-12 {
            let mid = 0.5 * (lo + hi);
            if feasible(mid) { lo = mid } else { hi = mid }
        }
        let z = s.point_at(&[lo]).unwrap()[1];
        assert!((z - phi).abs() < 1e-9, "{z} vs {phi}");
    }
}

#[test]
fn waterline_consistency() {
    let mut draw = Draw::new(900, 0);
    let mut solved = 0;
    for family in Family::ALL {
        for n in 1..=4 {
            let body = random_body(family, n, &mut draw);
            let k = random_k(family, &mut draw);
            let surface = FlotationSurface::homothetic(&body, k).unwrap();
            let target = cut_volume(&body, &surface.tangent_plane(&vec![0.0; n]).unwrap()).unwrap();
            let mut dir = draw.vector(n + 1, -0.15, 0.15);
            dir[n] = 1.0;
            let len = dir.iter().map(|v| v * v).sum::<f64>().sqrt();
            dir.iter_mut().for_each(|v| *v /= len);
            let sol = match waterline(&body, &dir, target) {
                Ok(sol) => sol,
                Err(Error::Infeasible(_)) | Err(Error::VolumeOutOfRange { .. }) => continue,
                Err(e) => panic!("{family} n={n}: {e}"),
            };
            let v = cut_volume(&body, &sol.plane).unwrap();
            assert!(rel(v, target) < 1e-10, "{family} n={n}");
            assert!(sol.residual <= 1e-12 && sol.submerged_volume >= 0.0);
            solved += 1;
        }
    }
    assert!(solved >= 15, "only {solved} directions admissible");
}

#[test]
fn waterline_with_tilted_direction_through_a_surface_tangent() {
    let ball = unit_body(Family::Ellipsoid, 2);
    let v = l0(dim(2), 0.5).unwrap();
    let s = 0.5f64.sqrt();
    let sol = waterline(&ball, &[s, 0.0, s], v).unwrap();
    // Plane x + z = 0.5·√2, i.e. distance 0.5 from the centre.
    assert!((sol.plane.intercept() - 1.0 / s * 0.5).abs() < 1e-12);
    assert!((sol.plane.slope()[0] + 1.0).abs() < 1e-15);
    let low = waterline(&ball, &[0.0, 0.0, -1.0], v).unwrap();
    assert!((low.plane.intercept() + 0.5).abs() < 1e-12);
    assert!(waterline(&ball, &[0.0, 0.0, 1.0], 3.0).is_err());
}

#[test]
fn gamma_matches_the_cap_volume() {
    // The cap of 2z = x² + y² below z = γ has volume πγ².
    for v in [PI / 2.0, PI, 2.0 * PI] {
        let g = parabolic_limit_gamma(dim(2), &[1.0, 1.0], v).unwrap();
        assert!((g - (v / PI).sqrt()).abs() < 1e-12);
        // Same cap through the unit paraboloid: 2z = x²/α + y²/α with p = 1/√(2α).
        let p = 0.5f64.sqrt();
        let k = invert_volume(Family::Paraboloid, dim(2), &[p, p], None, v).unwrap();
        assert!((k * k - g).abs() < 1e-12);
    }
    for n in 1..=6 {
        let alphas: Vec<f64> = (1..=n).map(|i| 0.5 + i as f64).collect();
        let p: Vec<f64> = alphas.iter().map(|a| (0.5 / a).sqrt()).collect();
        let g = parabolic_limit_gamma(dim(n), &alphas, 1.7).unwrap();
        let k = invert_volume(Family::Paraboloid, dim(n), &p, None, 1.7).unwrap();
        assert!(rel(k * k, g) < 1e-12, "n={n}");
    }
}

#[test]
fn ellipsoid_surfaces_approach_the_paraboloid_limit() {
    // Semiaxes √(αA), …, A make the bottom of the ellipsoid look like
    // 2z' = Σ x²/α near its lowest point.
    let v = PI;
    let gamma = parabolic_limit_gamma(dim(2), &[1.0, 1.0], v).unwrap();
    let mut last = f64::INFINITY;
    for a in [10.0f64, 100.0, 1000.0] {
        let semi = [a.sqrt(), a.sqrt(), a];
        let k = invert_volume(Family::Ellipsoid, dim(2), &semi, None, v).unwrap();
        let err = (a * (1.0 - k) - gamma).abs();
        assert!(err < last);
        last = err;
    }
    assert!(last / gamma < 1e-2);
}
