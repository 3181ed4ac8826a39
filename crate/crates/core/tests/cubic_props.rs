use num_complex::Complex64;
use proptest::prelude::*;
use schwarz_core::cubic::{eval_f, eval_fa, fiber_f, fiber_fa, to_u, f};
use schwarz_core::{ComplexPoint, SchwarzParam};

fn disk(r: f64) -> impl Strategy<Value = Complex64> {
    (0.0..1.0f64, 0.0..std::f64::consts::TAU).prop_map(move |(s, t)| Complex64::from_polar(r * s.sqrt(), t))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn fiber_residual(w in disk(100.0)) {
        let fib = fiber_f(w);
        for u in fib.roots {
            let r = eval_f(u.into()).dist(w.into());
            prop_assert!(r < 1e-10 * w.norm().powi(3).max(1.0), "w={w} u={u} residual={r}");
        }
    }
}

proptest! {
    #[test]
    fn vieta_relations(w in disk(50.0)) {
        // u³ − 3u − w: the roots sum to 0, pair products sum to −3 and multiply to w
        let [p, q, r] = fiber_f(w).roots;
        let scale = w.norm().max(1.0);
        prop_assert!((p + q + r).norm() < 1e-9 * scale);
        prop_assert!((p * q + q * r + r * p + 3.0).norm() < 1e-9 * scale);
        prop_assert!((p * q * r - w).norm() < 1e-9 * scale);
    }

    #[test]
    fn fiber_is_deterministic(w in disk(100.0)) {
        let a = fiber_f(w).roots;
        let b = fiber_f(w).roots;
        for (x, y) in a.iter().zip(&b) {
            prop_assert_eq!(x.re.to_bits(), y.re.to_bits());
            prop_assert_eq!(x.im.to_bits(), y.im.to_bits());
        }
    }

    #[test]
    fn conjugate_fiber(w in disk(20.0)) {
        let mut a: Vec<Complex64> = fiber_f(w).roots.iter().map(|u| u.conj()).collect();
        let mut b: Vec<Complex64> = fiber_f(w.conj()).roots.to_vec();
        let key = |z: &Complex64| (z.re, z.im);
        a.sort_by(|x, y| key(x).partial_cmp(&key(y)).unwrap());
        b.sort_by(|x, y| key(x).partial_cmp(&key(y)).unwrap());
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).norm() < 1e-9 * w.norm().max(1.0));
        }
    }

    #[test]
    fn chart_is_bitwise(z in disk(5.0), are in 1.6..3.9f64, aim in -1.2..1.2f64) {
        let a = SchwarzParam::from_re_im(are, aim).unwrap();
        let lhs = eval_fa(z.into(), &a);
        let rhs = eval_f(to_u(z, a.a).into());
        match (lhs, rhs) {
            (ComplexPoint::Finite(x), ComplexPoint::Finite(y)) => {
                prop_assert_eq!(x.re.to_bits(), y.re.to_bits());
                prop_assert_eq!(x.im.to_bits(), y.im.to_bits());
            }
            (x, y) => prop_assert_eq!(x, y),
        }
    }

    #[test]
    fn chart_fiber(v in disk(10.0), are in 1.6..3.9f64, aim in -1.2..1.2f64) {
        let a = SchwarzParam::from_re_im(are, aim).unwrap();
        for z in fiber_fa(v, &a) {
            prop_assert!((f(to_u(z, a.a)) - v).norm() < 1e-9 * v.norm().max(1.0));
        }
    }
}

#[test]
fn real_targets_have_real_roots() {
    for k in 0..=400 {
        let w = -2.0 + 4.0 * k as f64 / 400.0;
        assert!(fiber_f(Complex64::new(w, 0.0)).roots.iter().all(|u| u.im == 0.0), "w={w}");
    }
}
