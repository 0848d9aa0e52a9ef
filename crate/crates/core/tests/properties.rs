use std::f64::consts::PI;

use approx::assert_relative_eq;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use mnv_core::algebra::Complex;
use mnv_core::moutard::{enneper_scalars, DeformedSurface, MoutardField, EnneperField, blow_up_u0};
use mnv_core::quadrature::{enneper_focus, l2_integral, PlaneIntegralOptions};
use mnv_core::spinor::{HoloPoly, SpinorPair};
use mnv_core::verify::{residual_report, residuals, OrderOptions, Stencil};
use mnv_core::weierstrass::{normal_vector, surface_point, WeierstrassPatch};
use mnv_core::{Field, SpaceTimePoint, SurfacePoint};

const C: f64 = 0.7;

fn opts(tol: f64, t: f64) -> PlaneIntegralOptions {
    let mut o = PlaneIntegralOptions::with_tol(tol);
    o.focus = enneper_focus(t, C);
    o
}

fn poly(c: &[(f64, f64)]) -> HoloPoly {
    HoloPoly::new(c.iter().map(|&(a, b)| Complex::new(a, b)).collect()).unwrap()
}

fn cubic_seed() -> SpinorPair {
    SpinorPair::new(poly(&[(0.1, 0.0), (0.0, 0.0), (0.5, 0.0), (1.0, 0.0)]), poly(&[(1.0, 0.0), (0.0, 0.2)]))
}

fn mean_curvature(s: &SpinorPair, z: Complex, t: f64, h: f64) -> f64 {
    let x = |dx: f64, dy: f64| surface_point(s, z + Complex::new(dx, dy), t, SurfacePoint::ORIGIN);
    let c = x(0.0, 0.0);
    let lap = (x(h, 0.0) + x(-h, 0.0) + x(0.0, h) + x(0.0, -h) - c.scale(4.0)).scale(1.0 / (h * h));
    let (xu, xv) = ((x(h, 0.0) - x(-h, 0.0)).scale(0.5 / h), (x(0.0, h) - x(0.0, -h)).scale(0.5 / h));
    let e = 0.5 * (xu.norm_sqr() + xv.norm_sqr());
    lap.dot(&normal_vector(s, z, t).unwrap()) / (2.0 * e)
}

#[test]
fn weierstrass_surfaces_are_minimal() {
    let mut rng = StdRng::seed_from_u64(11);
    for s in [SpinorPair::enneper(), cubic_seed()] {
        for _ in 0..50 {
            let z = Complex::new(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5));
            let t = rng.gen_range(-0.5..0.5);
            let h = mean_curvature(&s, z, t, 1e-3);
            assert!(h.abs() <= 2e-2, "H = {h} at {z} t={t}");
        }
    }
}

#[test]
fn weierstrass_tangents_are_conformal() {
    let patch = WeierstrassPatch::new(&cubic_seed(), 0.3);
    for z in [Complex::new(0.4, -0.2), Complex::new(-1.1, 0.9)] {
        let (xu, xv) = patch.tangents(z);
        assert_relative_eq!(xu.norm_sqr(), xv.norm_sqr(), max_relative = 1e-12);
        assert!(xu.dot(&xv).abs() <= 1e-12 * xu.norm_sqr());
    }
}

#[test]
fn pipeline_scalars_match_closed_form() {
    let mut rng = StdRng::seed_from_u64(12);
    let field = MoutardField::enneper(C);
    for _ in 0..500 {
        let p = SpaceTimePoint::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0), C + rng.gen_range(-2.0..2.0));
        let got = field.scalars(p).unwrap();
        let want = enneper_scalars(p.x, p.y, p.t, C).unwrap();
        let scale = 1.0 + want.a.norm() + want.b.norm() + want.c.norm() + want.w.abs();
        let err = (got.w - want.w).abs() + (got.a - want.a).norm() + (got.b - want.b).norm() + (got.c - want.c).norm();
        assert!(err <= 1e-11 * scale, "{err} at {p:?}");
    }
}

#[test]
fn pipeline_and_closed_form_fields_agree_on_v() {
    let mut rng = StdRng::seed_from_u64(13);
    let (a, b) = (MoutardField::enneper(C), EnneperField::new(C));
    for _ in 0..200 {
        let p = SpaceTimePoint::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0), C + rng.gen_range(-2.0..2.0));
        let (va, vb) = (a.eval(p).unwrap(), b.eval(p).unwrap());
        assert!((va.u - vb.u).abs() <= 1e-11 * (1.0 + vb.u.abs()));
        assert!((va.v - vb.v).norm() <= 1e-11 * (1.0 + vb.v.norm()));
    }
}

#[test]
fn degeneracy_only_at_origin_at_blow_up_time() {
    let s = SpinorPair::enneper();
    let surface = DeformedSurface::new(&s, blow_up_u0(C));
    assert_eq!(surface.s_tilde(Complex::new(0.0, 0.0), C).det(), 0.0);
    for (x, y, dt) in [(1e-4, 0.0, 0.0), (0.0, 1e-4, 0.0), (0.0, 0.0, 1e-6), (0.0, 0.0, -1e-6)] {
        assert!(surface.s_tilde(Complex::new(x, y), C + dt).det() > 0.0);
    }
    let field = MoutardField::enneper(C);
    assert!(field.eval(SpaceTimePoint::new(0.0, 0.0, C)).is_err());
}

#[test]
fn residual_at_reference_point() {
    let field = MoutardField::enneper(C);
    let p = SpaceTimePoint::new(0.5, -0.7, C - 0.3);
    let (m, c) = residuals(&field, p, &Stencil::default()).unwrap();
    assert!(m <= 1e-4 && c <= 1e-4, "{m} {c}");
}

#[test]
fn convergence_order_at_random_smooth_points() {
    let mut rng = StdRng::seed_from_u64(14);
    let field = MoutardField::enneper(C);
    let ord = OrderOptions::default();
    let blow_up = SpaceTimePoint::new(0.0, 0.0, C);
    let mut n = 0;
    while n < 20 {
        let p = SpaceTimePoint::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0), C + rng.gen_range(-2.0..2.0));
        if p.distance(&blow_up) < 10.0 * ord.coarse.h_space {
            continue;
        }
        n += 1;
        let r = residual_report(&field, p, &Stencil::default(), &ord).unwrap();
        for o in [r.mnv_order, r.constraint_order] {
            assert!((1.7..=2.3).contains(&o), "order {o} at {p:?}");
        }
    }
}

#[test]
fn conserved_value_jumps_at_blow_up_time() {
    let field = MoutardField::enneper(C);
    for (t, want) in [(C - 1e-3, 3.0 * PI), (C, 2.0 * PI), (C + 1e-3, 3.0 * PI)] {
        let r = l2_integral(&field, t, &opts(1e-4, t)).unwrap();
        assert!((r.value - want).abs() <= 1e-3, "t={t}: {}", r.value);
    }
}

#[test]
fn quadrature_is_rotation_invariant() {
    let field = EnneperField::new(C);
    for t in [C - 1.0, C] {
        let a = l2_integral(&field, t, &opts(1e-5, t)).unwrap();
        let mut o = opts(1e-5, t);
        o.angle_offset = PI / 4.0;
        let b = l2_integral(&field, t, &o).unwrap();
        assert!((a.value - b.value).abs() <= a.abs_error_estimate + b.abs_error_estimate);
    }
}

#[test]
fn refinement_is_monotone() {
    let field = EnneperField::new(C);
    let t = C + 1.0;
    let mut prev = l2_integral(&field, t, &opts(1e-3, t)).unwrap();
    for tol in [5e-4, 2.5e-4, 1.25e-4] {
        let next = l2_integral(&field, t, &opts(tol, t)).unwrap();
        assert!((next.value - prev.value).abs() <= prev.abs_error_estimate, "tol {tol}");
        assert!(next.abs_error_estimate <= tol);
        prev = next;
    }
}

#[test]
fn quadrature_is_deterministic_across_thread_counts() {
    let field = MoutardField::enneper(C);
    let t = C - 0.5;
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| l2_integral(&field, t, &opts(1e-4, t)).unwrap())
    };
    let (a, b) = (run(1), run(4));
    assert_eq!(a.value.to_bits(), b.value.to_bits());
    assert_eq!(a.panels_used, b.panels_used);
}

#[test]
fn tolerance_budget_is_enforced() {
    let field = EnneperField::new(C);
    let mut o = opts(1e-12, C + 1.0);
    o.max_evaluations = 10_000;
    assert!(l2_integral(&field, C + 1.0, &o).is_err());
}

proptest! {
    #[test]
    fn u_is_even_in_y(x in -4.0..4.0f64, y in -4.0..4.0f64, dt in -2.0..2.0f64) {
        let f = MoutardField::enneper(C);
        let (a, b) = (f.eval(SpaceTimePoint::new(x, y, C + dt)), f.eval(SpaceTimePoint::new(x, -y, C + dt)));
        if let (Ok(a), Ok(b)) = (a, b) {
            prop_assert!((a.u - b.u).abs() <= 1e-14 * (1.0 + a.u.abs()));
        }
    }

    #[test]
    fn fields_depend_on_c_minus_t(x in -3.0..3.0f64, y in -3.0..3.0f64, dt in -2.0..2.0f64, shift in -5.0..5.0f64) {
        let (a, b) = (EnneperField::new(C), EnneperField::new(C + shift));
        if let (Ok(p), Ok(q)) = (a.eval(SpaceTimePoint::new(x, y, C + dt)), b.eval(SpaceTimePoint::new(x, y, C + shift + dt))) {
            prop_assert!((p.u - q.u).abs() <= 1e-12 * (1.0 + p.u.abs()));
            prop_assert!((p.v - q.v).norm() <= 1e-12 * (1.0 + p.v.norm()));
        }
    }
}
