use std::f64::consts::TAU;

use num_complex::Complex64;
use proptest::prelude::*;
use schwarz_core::antirat::{
    ecalle_height, ecalle_height_detail, eval_b, eval_r, fatou_coordinate, translation_constant, AntiRatParam,
};
use schwarz_core::tri_group::{angle_b, count_b_periodic_points};
use schwarz_core::ComplexPoint;

fn r2(z: Complex64, p: &AntiRatParam) -> Complex64 {
    eval_r(eval_r(z.into(), p), p).finite().unwrap()
}

/// Fixed points of the angle model's k-th iterate, by a sign-change scan.
fn angle_model_fixed_points(k: u32) -> usize {
    let n = 1 << 16;
    let g = |phi: f64| {
        let mut x = phi;
        for _ in 0..k {
            x = angle_b(x);
        }
        let d = (x - phi).rem_euclid(1.0);
        if d > 0.5 { d - 1.0 } else { d }
    };
    let mut count = usize::from(g(0.0) == 0.0);
    for i in 0..n {
        let (x0, x1) = (i as f64 / n as f64, (i + 1) as f64 / n as f64);
        let (g0, g1) = (g(x0), g(x1));
        // a sign change away from the wrap discontinuity
        if (g0 < 0.0 && g1 > 0.0 || g0 > 0.0 && g1 < 0.0) && (g0 - g1).abs() < 0.5 {
            count += 1;
        }
        if g1 == 0.0 && i + 1 < n {
            count += 1;
        }
    }
    count
}

#[test]
fn b_periodic_points_match_angle_model() {
    for k in 1..=8u32 {
        let (n, pts) = count_b_periodic_points(k).unwrap();
        assert_eq!(n, angle_model_fixed_points(k), "k={k}");
        for z in pts {
            let mut w = ComplexPoint::from(z);
            for _ in 0..k {
                w = eval_b(w);
            }
            assert!(w.approx_eq(z.into(), 1e-9), "k={k} z={z}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn parabolic_normal_form(alpha in 0.0..TAU, re in -4.0..4.0f64, im in -4.0..4.0f64, ray in 0usize..8) {
        prop_assume!(re.abs() + im.abs() > 0.1);
        let big_a = Complex64::new(re, im);
        let p = AntiRatParam::new(alpha, big_a).unwrap();
        let (t, _) = translation_constant(&p);
        let limit = 1.0 + Complex64::from_polar(1.0, 2.0 * alpha);
        let dir = Complex64::from_polar(1.0, TAU * (ray as f64 + 0.3) / 8.0);
        for e in 3..=6 {
            let z = dir * 10f64.powi(e);
            let rem = (r2(z, &p) - z - t) * z;
            prop_assert!(rem.norm() < 10.0 * (1.0 + big_a.norm()), "|z|=1e{e} rem={rem}");
            if e <= 4 {
                prop_assert!((rem - limit).norm() < 0.1 * (1.0 + big_a.norm_sqr()), "|z|=1e{e} rem={rem}");
            }
        }
    }
}

#[test]
fn anti_relation_off_the_fit_samples() {
    for (alpha, big_a) in [(0.0, Complex64::new(3.0, 0.0)), (0.3, Complex64::new(2.5, 0.7))] {
        let p = AntiRatParam::new(alpha, big_a).unwrap();
        let h = ecalle_height_detail(&p, 1e-8).unwrap();
        for s in [Complex64::new(25.0, 3.0), Complex64::new(60.0, -9.0), Complex64::new(33.0, 14.0)] {
            let z = p.t * s;
            let rz = eval_r(z.into(), &p);
            let a = fatou_coordinate(z.into(), &p, 1e-8).unwrap().phi.im + h.constant;
            let b = fatou_coordinate(rz, &p, 1e-8).unwrap().phi.im + h.constant;
            assert!((a + b).abs() < 1e-6, "alpha={alpha} A={big_a} z={z}: {a} + {b}");
        }
    }
}

#[test]
fn fatou_coordinate_conjugates_second_iterate() {
    let p = AntiRatParam::new(0.4, Complex64::new(2.0, 1.0)).unwrap();
    let z = p.t * Complex64::new(30.0, 2.0);
    let a = fatou_coordinate(z.into(), &p, 1e-8).unwrap().phi;
    let b = fatou_coordinate(r2(z, &p).into(), &p, 1e-8).unwrap().phi;
    assert!((b - a - 1.0).norm() < 1e-6, "{a} {b}");
}

#[test]
fn height_flips_under_reflection_of_parameters() {
    for (alpha, big_a) in [(0.0, Complex64::new(3.0, 0.2)), (0.25, Complex64::new(2.0, 1.5))] {
        let p = AntiRatParam::new(alpha, big_a).unwrap();
        let q = AntiRatParam::new(-alpha, big_a.conj()).unwrap();
        let (hp, hq) = (ecalle_height(&p, 1e-8).unwrap(), ecalle_height(&q, 1e-8).unwrap());
        assert!((hp + hq).abs() < 1e-6, "h={hp} h'={hq}");
    }
}
