//! The cubic Chebyshev polynomial `f(u) = u³ − 3u`.

use std::cmp::Ordering;

use num_complex::Complex64;

use crate::complex::{cbrt, ComplexPoint};
use crate::schwarz::SchwarzParam;

/// Grid used to round roots before ordering them.
pub const ROOT_GRID: f64 = 1e-12;
/// Roots closer than this are reported as a double root.
pub const DOUBLE_ROOT_GAP: f64 = 1e-8;

#[inline]
pub fn f(u: Complex64) -> Complex64 {
    u * u * u - 3.0 * u
}

#[inline]
pub fn df(u: Complex64) -> Complex64 {
    3.0 * (u * u - 1.0)
}

pub fn eval_f(u: ComplexPoint) -> ComplexPoint {
    match u {
        ComplexPoint::Finite(u) => f(u).into(),
        ComplexPoint::Infinity => ComplexPoint::Infinity,
    }
}

/// Affine chart `z ↦ a + (1 − a) z` sending 0 to `a` and 1 to 1.
#[inline]
pub fn to_u(z: Complex64, a: Complex64) -> Complex64 {
    a + (1.0 - a) * z
}

#[inline]
pub fn from_u(u: Complex64, a: Complex64) -> Complex64 {
    (u - a) / (1.0 - a)
}

pub fn eval_fa(z: ComplexPoint, a: &SchwarzParam) -> ComplexPoint {
    match z {
        ComplexPoint::Finite(z) => eval_f(to_u(z, a.a).into()),
        ComplexPoint::Infinity => ComplexPoint::Infinity,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CubicFiber {
    pub roots: [Complex64; 3],
    pub target: Complex64,
}

impl CubicFiber {
    pub fn points(&self) -> [ComplexPoint; 3] {
        self.roots.map(ComplexPoint::Finite)
    }

    pub fn max_residual(&self) -> f64 {
        self.roots
            .iter()
            .map(|&u| (f(u) - self.target).norm())
            .fold(0.0, f64::max)
    }

    /// Distinct roots, a double root listed once.
    pub fn distinct(&self) -> Vec<Complex64> {
        let mut out: Vec<Complex64> = Vec::with_capacity(3);
        for &r in &self.roots {
            if !out.iter().any(|&q| q == r) {
                out.push(r);
            }
        }
        out
    }
}

fn grid_key(x: f64) -> f64 {
    (x / ROOT_GRID).round() + 0.0
}

pub(crate) fn lex_order(p: &Complex64, q: &Complex64) -> Ordering {
    grid_key(p.re)
        .partial_cmp(&grid_key(q.re))
        .unwrap_or(Ordering::Equal)
        .then(grid_key(p.im).partial_cmp(&grid_key(q.im)).unwrap_or(Ordering::Equal))
}

fn polish(u: Complex64, w: Complex64) -> Complex64 {
    let d = df(u);
    if d.norm() == 0.0 {
        return u;
    }
    let next = u - (f(u) - w) / d;
    if next.re.is_finite() && next.im.is_finite() && (f(next) - w).norm() < (f(u) - w).norm() {
        next
    } else {
        u
    }
}

/// Solves `u³ − 3u = w` via `u = s + 1/s`, `s³ = (w ± √(w² − 4))/2`.
pub fn fiber_f(w: Complex64) -> CubicFiber {
    let disc = (w * w - 4.0).sqrt();
    let t1 = (w + disc) * 0.5;
    let t2 = (w - disc) * 0.5;
    let t = if t2.norm() > t1.norm() { t2 } else { t1 };
    let omega = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
    let s = cbrt(t);
    let mut roots = if s.norm() == 0.0 {
        // only reachable for non-finite targets
        [s; 3]
    } else {
        let s1 = s * omega;
        let s2 = s * omega.conj();
        [s + 1.0 / s, s1 + 1.0 / s1, s2 + 1.0 / s2]
    };
    for r in roots.iter_mut() {
        *r = polish(*r, w);
    }
    // keep the real axis invariant; rounding noise there is amplified by chaotic real orbits
    if w.im == 0.0 && w.re.is_finite() {
        if w.re.abs() <= 2.0 {
            roots.iter_mut().for_each(|r| r.im = 0.0);
        } else if let Some(r) = roots.iter_mut().min_by(|p, q| p.im.abs().total_cmp(&q.im.abs())) {
            r.im = 0.0;
        }
    }
    for i in 0..3 {
        for j in i + 1..3 {
            if (roots[i] - roots[j]).norm() < DOUBLE_ROOT_GAP {
                let mid = (roots[i] + roots[j]) * 0.5;
                // the double root is a critical point ±1; snap when that is what it is
                let mid = [Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)]
                    .into_iter()
                    .find(|c| (mid - c).norm() < DOUBLE_ROOT_GAP)
                    .unwrap_or(mid);
                roots[i] = mid;
                roots[j] = mid;
            }
        }
    }
    roots.sort_by(lex_order);
    CubicFiber { roots, target: w }
}

/// Fiber of `f_a` over `v`, expressed in the z-chart.
pub fn fiber_fa(v: Complex64, a: &SchwarzParam) -> [Complex64; 3] {
    let mut zs = fiber_f(v).roots.map(|u| from_u(u, a.a));
    zs.sort_by(lex_order);
    zs
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn eval_examples() {
        assert_eq!(eval_f(ComplexPoint::real(1.0)), ComplexPoint::real(-2.0));
        assert_eq!(eval_f(ComplexPoint::real(2.0)), ComplexPoint::real(2.0));
        assert_eq!(eval_f(ComplexPoint::real(0.0)), ComplexPoint::real(0.0));
        assert!(eval_f(ComplexPoint::Infinity).is_infinite());
    }

    #[test]
    fn eval_fa_examples() {
        let a = SchwarzParam::new(c(3.0, 0.0)).unwrap();
        assert_eq!(eval_fa(ComplexPoint::real(0.0), &a), ComplexPoint::real(18.0));
        assert!(eval_fa(ComplexPoint::Infinity, &a).is_infinite());
        for a in [c(3.0, 0.0), c(2.7, 0.3), c(0.4, -1.1)] {
            let p = SchwarzParam::new(a).unwrap();
            let v = eval_fa(ComplexPoint::real(1.0), &p).finite().unwrap();
            assert!((v + 2.0).norm() < 1e-14);
        }
    }

    #[test]
    fn fiber_critical_values() {
        assert_eq!(fiber_f(c(-2.0, 0.0)).roots, [c(-2.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)]);
        assert_eq!(fiber_f(c(2.0, 0.0)).roots, [c(-1.0, 0.0), c(-1.0, 0.0), c(2.0, 0.0)]);
    }

    #[test]
    fn fiber_zero() {
        let r = fiber_f(c(0.0, 0.0)).roots;
        let s3 = 3f64.sqrt();
        for (got, want) in r.iter().zip([-s3, 0.0, s3]) {
            assert!((got - c(want, 0.0)).norm() < 1e-14, "{got} vs {want}");
        }
    }

    #[test]
    fn fiber_near_critical_keeps_residual() {
        for &d in &[1e-6, 1e-10, 1e-14] {
            for w in [c(2.0 + d, 0.0), c(-2.0, d), c(2.0, -d)] {
                let fib = fiber_f(w);
                assert!(fib.max_residual() < 1e-12, "{w}: {}", fib.max_residual());
            }
        }
    }
}
