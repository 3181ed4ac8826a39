use std::f64::consts::TAU;

use num_complex::Complex64;
use proptest::prelude::*;
use schwarz_core::tri_group::{
    angle_b, angle_rho, circle_dist, conjugacy_e, count_dyadic_angles, reflect_generator, rho_preimages,
    rho_vertex_preimages, AngleCoord,
};
use schwarz_core::ComplexPoint;

const THIRD: f64 = 1.0 / 3.0;

/// Distance on the quotient circle `[1/3, 2/3)`, of length 1/3.
fn arc_dist(x: f64, y: f64) -> f64 {
    let d = (x - y).rem_euclid(THIRD);
    d.min(THIRD - d)
}

/// Signed step on the quotient circle.
fn arc_step(from: f64, to: f64) -> f64 {
    let d = (to - from).rem_euclid(THIRD);
    if d > THIRD / 2.0 { d - THIRD } else { d }
}

#[test]
fn rho_is_a_double_cover() {
    let n = 10_000;
    for i in 0..n {
        let psi = THIRD + THIRD * (i as f64 + 0.5) / n as f64;
        let pre = rho_preimages(AngleCoord::new(psi).unwrap());
        assert!(pre[0].value() < 0.5 && pre[1].value() > 0.5, "psi={psi} {pre:?}");
        for p in pre {
            assert!(arc_dist(angle_rho(p).value(), psi) < 1e-12, "psi={psi}");
        }
    }
}

#[test]
fn rho_reverses_orientation_on_each_cell() {
    for (lo, hi) in [(THIRD, 0.5), (0.5, 2.0 * THIRD)] {
        let n = 5_000;
        let pts: Vec<f64> = (1..n).map(|k| lo + (hi - lo) * k as f64 / n as f64).collect();
        for w in pts.windows(2) {
            let a = angle_rho(AngleCoord::new(w[0]).unwrap()).value();
            let b = angle_rho(AngleCoord::new(w[1]).unwrap()).value();
            assert!(arc_step(a, b) < 0.0, "not decreasing at {}", w[0]);
        }
    }
}

/// Pre-period-`k` points of `φ ↦ −2φ` among `j/2^k`, by iterating numerators.
fn dyadic_oracle(k: u32) -> usize {
    let m: u64 = 1 << k;
    (0..m)
        .filter(|&j| {
            let step = |x: u64| (m - (2 * x) % m) % m;
            let mut x = j;
            for s in 0..k {
                if x == 0 {
                    return false;
                }
                x = step(x);
                if x == 0 && s + 1 < k {
                    return false;
                }
            }
            x == 0
        })
        .count()
}

#[test]
fn dyadic_counts_match_oracles() {
    for k in 1..=12u32 {
        let n = count_dyadic_angles(k).unwrap();
        assert_eq!(n, 1 << (k - 1), "k={k}");
        assert_eq!(n as usize, dyadic_oracle(k), "k={k}");
        let pts = rho_vertex_preimages(k);
        assert_eq!(pts.len() as u64, n, "k={k}");
        if k <= 8 {
            // each point reaches the vertex after exactly k steps
            for &t in &pts {
                let mut x = AngleCoord::new(t).unwrap();
                for s in 0..k {
                    assert!(arc_dist(x.value(), THIRD) > 1e-9, "k={k} t={t} early at {s}");
                    x = angle_rho(x);
                }
                assert!(arc_dist(x.value(), THIRD) < 1e-6, "k={k} t={t} ends at {}", x.value());
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn conjugacy_identity(t in (1.0 / 3.0)..(2.0 / 3.0f64)) {
        let depth = 24;
        let theta = AngleCoord::new(t).unwrap();
        let lhs = conjugacy_e(angle_rho(theta), depth).unwrap();
        let rhs = angle_b(conjugacy_e(theta, depth).unwrap());
        prop_assert!(circle_dist(lhs, rhs) <= 2f64.powi(-(depth as i32) + 2));
    }

    #[test]
    fn conjugacy_is_monotone(t in (1.0 / 3.0)..(0.66f64), dt in 1e-4..5e-3f64) {
        let t2 = (t + dt).min(2.0 / 3.0 - 1e-9);
        let e1 = conjugacy_e(AngleCoord::new(t).unwrap(), 40).unwrap();
        let e2 = conjugacy_e(AngleCoord::new(t2).unwrap(), 40).unwrap();
        prop_assert!((e2 - e1).rem_euclid(1.0) < 0.5 + 1e-12);
    }

    #[test]
    fn generators_are_involutions(i in 1usize..=3, s in 0.0..TAU, r in 0.1..5.0f64) {
        let z = ComplexPoint::from(Complex64::from_polar(r, s));
        let back = reflect_generator(i, reflect_generator(i, z).unwrap()).unwrap();
        prop_assert!(back.approx_eq(z, 1e-12 * r.max(1.0)));
        let on_circle = ComplexPoint::from(Complex64::from_polar(1.0, s));
        let image = reflect_generator(i, on_circle).unwrap().finite().unwrap();
        prop_assert!((image.norm() - 1.0).abs() < 1e-12);
    }
}
