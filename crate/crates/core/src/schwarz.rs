//! The Schwarz reflection `σ_a = f ∘ ι_a ∘ f⁻¹` of `Ω_a = f(Δ_a)`.

use std::f64::consts::PI;

use num_complex::{Complex, Complex64};
use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::complex::ComplexPoint;
use crate::cubic::{df, f, fiber_f, to_u};
use crate::error::{Error, Result};
use crate::params;

/// Default tolerance for deciding which fiber root lies in `Δ̄_a`.
pub const MEMBERSHIP_TOL: f64 = 1e-10;
/// Inputs this close to the cusp are sent to the cusp.
pub const CUSP_EPS: f64 = 1e-14;

const SQRT3: f64 = 1.732_050_807_568_877_2;

/// A validated parameter with its disk `Δ_a = B(a, |a − 1|)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SchwarzParam {
    pub a: Complex64,
    pub radius: f64,
    /// `arg(a − 1)` in `(−π, π]`.
    pub theta0: f64,
    pub c_star: ComplexPoint,
    pub c: ComplexPoint,
}

impl SchwarzParam {
    pub fn new(a: Complex64) -> Result<Self> {
        if !(a.re.is_finite() && a.im.is_finite()) {
            return Err(Error::DegenerateParameter(format!("non-finite a = {a}")));
        }
        let radius = (a - 1.0).norm();
        if radius == 0.0 {
            return Err(Error::DegenerateParameter("a = 1".into()));
        }
        let mut theta0 = (a - 1.0).arg();
        if theta0 <= -PI {
            theta0 = PI;
        }
        let ab = a.conj();
        let zc = (ab - 1.0) / (ab + 1.0);
        let c = ComplexPoint::from(f(to_u(zc, a)));
        Ok(SchwarzParam { a, radius, theta0, c_star: f(a).into(), c })
    }

    pub fn from_re_im(re: f64, im: f64) -> Result<Self> {
        Self::new(Complex64::new(re, im))
    }

    pub fn center(&self) -> Complex64 {
        self.a
    }

    /// `e^{iθ₀}`.
    pub fn rotation(&self) -> Complex64 {
        Complex64::from_polar(1.0, self.theta0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Membership {
    Interior,
    Boundary,
    Exterior,
}

pub fn reflect_in_disk(u: ComplexPoint, a: &SchwarzParam) -> ComplexPoint {
    match u {
        ComplexPoint::Infinity => ComplexPoint::Finite(a.a),
        ComplexPoint::Finite(u) => reflect_u(u, a),
    }
}

#[inline]
fn reflect_u(u: Complex64, a: &SchwarzParam) -> ComplexPoint {
    let d = u - a.a;
    if d.norm() == 0.0 {
        return ComplexPoint::Infinity;
    }
    (a.a + a.radius * a.radius / d.conj()).into()
}

/// Root of the fiber over `w` that lies in the closed disk, with the membership verdict.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Located {
    pub membership: Membership,
    pub root: Option<Complex64>,
}

pub(crate) fn locate(w: Complex64, a: &SchwarzParam, tol: f64) -> Result<Located> {
    let fib = fiber_f(w);
    let roots = fib.distinct();
    let signed: Vec<(Complex64, f64)> =
        roots.iter().map(|&u| (u, (u - a.a).norm() - a.radius)).collect();
    let inside: Vec<_> = signed.iter().filter(|(_, d)| *d < -tol).collect();
    match inside.len() {
        0 => {}
        1 => return Ok(Located { membership: Membership::Interior, root: Some(inside[0].0) }),
        _ => return Err(Error::AmbiguousMembership),
    }
    let mut near: Vec<_> = signed.iter().filter(|(_, d)| d.abs() <= tol).collect();
    near.sort_by(|p, q| p.1.abs().total_cmp(&q.1.abs()));
    match near.as_slice() {
        [] => Ok(Located { membership: Membership::Exterior, root: None }),
        [(u, _)] => Ok(Located { membership: Membership::Boundary, root: Some(*u) }),
        [(u, _), (v, _), ..] => {
            // two genuinely separate roots on the circle means f is not univalent there
            if (u - v).norm() > 1e-6 {
                Err(Error::AmbiguousMembership)
            } else {
                Ok(Located { membership: Membership::Boundary, root: Some(*u) })
            }
        }
    }
}

pub fn omega_membership(w: ComplexPoint, a: &SchwarzParam, tol: f64) -> Result<Membership> {
    match w {
        ComplexPoint::Infinity => Ok(Membership::Exterior),
        ComplexPoint::Finite(w) => Ok(locate(w, a, tol)?.membership),
    }
}

pub fn sigma(w: ComplexPoint, a: &SchwarzParam) -> Result<ComplexPoint> {
    sigma_tol(w, a, MEMBERSHIP_TOL)
}

pub fn sigma_tol(w: ComplexPoint, a: &SchwarzParam, tol: f64) -> Result<ComplexPoint> {
    let w = w.finite().ok_or(Error::NotInDomain)?;
    if (w + 2.0).norm() <= CUSP_EPS {
        return Ok(ComplexPoint::real(-2.0));
    }
    let loc = locate(w, a, tol)?;
    let u = loc.root.ok_or(Error::NotInDomain)?;
    Ok(match reflect_u(u, a) {
        ComplexPoint::Finite(v) => f(v).into(),
        ComplexPoint::Infinity => ComplexPoint::Infinity,
    })
}

/// `σ_a(w)` together with `∂σ_a/∂w̄`.
///
/// The second component is zero at the cusp and undefined (reported as
/// `NotInDomain`) where σ_a(w) = ∞.
pub fn sigma_with_derivative(w: Complex64, a: &SchwarzParam) -> Result<(ComplexPoint, Complex64)> {
    if (w + 2.0).norm() <= CUSP_EPS {
        return Ok((ComplexPoint::real(-2.0), Complex64::new(0.0, 0.0)));
    }
    let u = locate(w, a, MEMBERSHIP_TOL)?.root.ok_or(Error::NotInDomain)?;
    let v = reflect_u(u, a).finite().ok_or(Error::NotInDomain)?;
    let d = u - a.a;
    let r2 = a.radius * a.radius;
    let deriv = df(v) * (-r2 / (d * d).conj()) * (1.0 / df(u)).conj();
    Ok((f(v).into(), deriv))
}

/// `(c, c*)` with `σ_a(c) = 2` and `σ_a(c*) = ∞`.
pub fn critical_points(a: &SchwarzParam) -> (ComplexPoint, ComplexPoint) {
    (a.c, a.c_star)
}

/// `e^{iθ₀} · √(x e^{−2iθ₀})` with the principal root.
pub fn cusp_sqrt(x: Complex64, theta0: f64) -> Complex64 {
    let rot = Complex64::from_polar(1.0, theta0);
    rot * (x * rot.conj() * rot.conj()).sqrt()
}

/// Puiseux expansion of the fiber root of `−2 + δ` near 1.
pub fn inverse_puiseux(delta: Complex64, a: &SchwarzParam, terms: usize) -> ComplexPoint {
    if terms == 0 {
        return ComplexPoint::ZERO;
    }
    (1.0 + puiseux_offset(delta, a.rotation(), terms)).into()
}

/// The series of [`inverse_puiseux`] without its constant term, in any float type.
///
/// `rot` is `e^{iθ₀}`; it is renormalized in the working precision so that the
/// branch choice does not perturb the magnitude of `δ^{1/2}`. Only products,
/// square roots and refined reciprocals are used, so extended-precision types
/// with a weak division keep their full accuracy.
pub fn puiseux_offset<T: Float>(delta: Complex<T>, rot: Complex<T>, terms: usize) -> Complex<T> {
    let rot = rot * recip((rot.re * rot.re + rot.im * rot.im).sqrt());
    let s = rot * csqrt(delta * rot.conj() * rot.conj());
    let k = |x: f64| T::from(x).expect("representable");
    let inv_sqrt3 = recip(k(3.0).sqrt());
    let coeffs = [
        s * inv_sqrt3,
        -delta * recip(k(18.0)),
        s * delta * (k(5.0) * recip(k(216.0)) * inv_sqrt3),
        -delta * delta * recip(k(243.0)),
        s * delta * delta * (k(77.0) * recip(k(31104.0)) * inv_sqrt3),
    ];
    coeffs.iter().take(terms.clamp(1, 6) - 1).fold(Complex::new(T::zero(), T::zero()), |acc, &c| acc + c)
}

/// `1/x` with one Newton correction.
fn recip<T: Float>(x: T) -> T {
    let r = T::one() / x;
    r + r * (T::one() - x * r)
}

/// Principal square root.
fn csqrt<T: Float>(z: Complex<T>) -> Complex<T> {
    let zero = T::zero();
    if z.re == zero && z.im == zero {
        return z;
    }
    let half = T::from(0.5).expect("representable");
    let r = (z.re * z.re + z.im * z.im).sqrt();
    let p = ((r + z.re.abs()) * half).sqrt();
    let q = z.im * recip(p + p);
    if z.re >= zero {
        Complex::new(p, q)
    } else if z.im >= zero {
        Complex::new(q, p)
    } else {
        Complex::new(-q, -p)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CuspDirection {
    Attracting,
    Repelling,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CuspCoefficient {
    /// Numerator of the exponent; the denominator is always 2.
    pub order_num: u32,
    pub coefficient: Complex64,
    pub direction: CuspDirection,
    /// Unit vector `e^{2iθ₀}` along which the expansion is taken.
    pub ray: Complex64,
}

impl CuspCoefficient {
    pub fn order(&self) -> f64 {
        self.order_num as f64 / 2.0
    }
}

pub fn cusp_coefficient(a: &SchwarzParam) -> Result<CuspCoefficient> {
    if !params::in_s_hat_region(a.a) {
        return Err(Error::OutsideRegime(format!("a = {} is not in the univalence region", a.a)));
    }
    let ray = Complex64::from_polar(1.0, 2.0 * a.theta0);
    let r = a.radius;
    let (x, y) = (a.a.re, a.a.im);
    if (x - 4.0).abs() > 1e-12 {
        return Ok(CuspCoefficient {
            order_num: 3,
            coefficient: Complex64::new(2.0 / (3.0 * SQRT3) * (4.0 - x) / r, 0.0),
            direction: if x < 4.0 { CuspDirection::Repelling } else { CuspDirection::Attracting },
            ray,
        });
    }
    if (y.abs() - SQRT3).abs() <= 1e-12 {
        let coefficient = -Complex64::new(SQRT3, y.signum()) / 972.0;
        return Ok(CuspCoefficient { order_num: 7, coefficient, direction: CuspDirection::Attracting, ray });
    }
    if y.abs() < SQRT3 {
        let coefficient = Complex64::new(-2.0 * (3.0 - y * y) / (9.0 * SQRT3 * r.powi(3)), 0.0);
        return Ok(CuspCoefficient { order_num: 5, coefficient, direction: CuspDirection::Attracting, ray });
    }
    Err(Error::OutsideRegime(format!("a = {}", a.a)))
}

fn eta_scale(a: &SchwarzParam) -> Result<f64> {
    let den = 2.0 * (a.a.re - 4.0);
    if den.abs() < 1e-12 {
        return Err(Error::OutsideRegime("Re a = 4 has no η coordinate".into()));
    }
    Ok(3.0 * SQRT3 * a.radius / den)
}

/// Coordinate near the cusp in which `σ_a` looks like `z̄ + 1/2`.
pub fn eta_coordinate(w: ComplexPoint, a: &SchwarzParam) -> Result<ComplexPoint> {
    let k = eta_scale(a)?;
    let w = match w {
        ComplexPoint::Infinity => return Ok(ComplexPoint::ZERO),
        ComplexPoint::Finite(w) => w,
    };
    let rot2 = Complex64::from_polar(1.0, -2.0 * a.theta0);
    let zeta = (w + 2.0) * rot2;
    if zeta.norm() == 0.0 {
        return Ok(ComplexPoint::Infinity);
    }
    if zeta.re <= 0.0 && zeta.im.abs() <= 1e-15 * zeta.norm() {
        return Err(Error::BranchCut);
    }
    // the e^{iθ₀} of the prefactor cancels against the rotated square root
    Ok((k / zeta.sqrt()).into())
}

/// Inverse of [`eta_coordinate`] on the half-plane where `k/z` has positive real part.
pub fn eta_inverse(z: ComplexPoint, a: &SchwarzParam) -> Result<ComplexPoint> {
    let k = eta_scale(a)?;
    let z = match z {
        ComplexPoint::Infinity => return Ok(ComplexPoint::real(-2.0)),
        ComplexPoint::Finite(z) => z,
    };
    let s = k / z;
    if s.re <= 0.0 {
        return Err(Error::BranchCut);
    }
    Ok((-2.0 + s * s * Complex64::from_polar(1.0, 2.0 * a.theta0)).into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cubic::eval_fa;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }
    fn p(re: f64, im: f64) -> SchwarzParam {
        SchwarzParam::from_re_im(re, im).unwrap()
    }

    #[test]
    fn rejects_a_equal_one() {
        assert!(SchwarzParam::from_re_im(1.0, 0.0).is_err());
    }

    #[test]
    fn reflection_examples() {
        let a = p(2.5, 0.0);
        assert!(reflect_in_disk(ComplexPoint::Finite(a.a), &a).is_infinite());
        assert_eq!(reflect_in_disk(ComplexPoint::real(2.0), &a), ComplexPoint::real(-2.0));
        for a in [p(3.0, 0.0), p(0.5, 1.0)] {
            let one = reflect_in_disk(ComplexPoint::real(1.0), &a).finite().unwrap();
            assert!((one - 1.0).norm() < 1e-15);
        }
    }

    #[test]
    fn membership_examples() {
        let tol = MEMBERSHIP_TOL;
        assert_eq!(omega_membership(ComplexPoint::real(2.0), &p(3.0, 0.0), tol).unwrap(), Membership::Interior);
        let m = omega_membership(ComplexPoint::real(2.0), &p(1.5, 0.1), tol).unwrap();
        assert_ne!(m, Membership::Interior);
        for a in [p(3.0, 0.0), p(2.8, 0.4), p(0.7, -0.9)] {
            assert_eq!(omega_membership(ComplexPoint::real(-2.0), &a, tol).unwrap(), Membership::Boundary);
        }
    }

    #[test]
    fn sigma_examples() {
        assert_eq!(sigma(ComplexPoint::real(2.0), &p(2.5, 0.0)).unwrap(), ComplexPoint::real(-2.0));
        assert!(sigma(ComplexPoint::real(2.0), &p(2.0, 0.0)).unwrap().is_infinite());
        assert_eq!(sigma(ComplexPoint::real(-2.0), &p(2.8, 0.4)).unwrap(), ComplexPoint::real(-2.0));
        assert_eq!(sigma(ComplexPoint::real(500.0), &p(3.0, 0.0)), Err(Error::NotInDomain));
    }

    #[test]
    fn critical_point_examples() {
        let (cc, cs) = critical_points(&p(3.0, 0.0));
        assert!(cc.approx_eq(ComplexPoint::real(2.0), 1e-12));
        assert!(cs.approx_eq(ComplexPoint::real(18.0), 1e-12));
        let a = p(2.5, 0.0);
        let s = sigma(a.c, &a).unwrap();
        assert!(s.approx_eq(ComplexPoint::real(2.0), 1e-10));
    }

    #[test]
    fn boundary_is_fixed() {
        for a in [p(3.0, 0.0), p(2.7, 0.3), p(3.5, -0.5)] {
            for k in 0..100 {
                let t = 2.0 * PI * (k as f64 + 0.5) / 100.0;
                let w = eval_fa(Complex64::from_polar(1.0, t).into(), &a);
                let s = sigma(w, &a).unwrap();
                assert!(s.dist(w) < 1e-9, "a={} t={t}", a.a);
            }
        }
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let a = p(2.8, 0.4);
        let w = c(0.3, 0.2);
        let (s0, d) = sigma_with_derivative(w, &a).unwrap();
        let h = 1e-6;
        // σ is anti-holomorphic: σ(w + h) − σ(w) ≈ D·conj(h)
        for dir in [c(1.0, 0.0), c(0.0, 1.0)] {
            let s1 = sigma(ComplexPoint::Finite(w + h * dir), &a).unwrap();
            let fd = (s1.finite().unwrap() - s0.finite().unwrap()) / (h * dir).conj();
            assert!((fd - d).norm() < 1e-5 * d.norm().max(1.0));
        }
    }

    #[test]
    fn cusp_coefficient_cases() {
        let cc = cusp_coefficient(&p(3.0, 0.0)).unwrap();
        assert_eq!(cc.order_num, 3);
        assert!((cc.coefficient.re - 1.0 / (3.0 * SQRT3)).abs() < 1e-15);
        assert_eq!(cc.direction, CuspDirection::Repelling);
        let cc = cusp_coefficient(&p(4.0, 0.0)).unwrap();
        assert_eq!(cc.order_num, 5);
        assert!((cc.coefficient.re + 2.0 / (81.0 * SQRT3)).abs() < 1e-15);
        let cc = cusp_coefficient(&p(4.0, SQRT3)).unwrap();
        assert_eq!(cc.order_num, 7);
        assert!((cc.coefficient.norm() - 2.0 / 972.0).abs() < 1e-15);
        assert!(cusp_coefficient(&p(5.0, 0.0)).is_err());
    }

    #[test]
    fn eta_on_real_axis() {
        let a = p(3.0, 0.0);
        for t in [1e-2, 1e-4, 1e-6] {
            let e = eta_coordinate(ComplexPoint::real(-2.0 + t), &a).unwrap().finite().unwrap();
            assert!((e.re + 3.0 * SQRT3 / t.sqrt()).abs() < 1e-9 * e.norm());
            assert_eq!(e.im, 0.0);
        }
        assert_eq!(eta_coordinate(ComplexPoint::real(-2.5), &a), Err(Error::BranchCut));
        assert!(eta_coordinate(ComplexPoint::real(-1.0), &p(4.0, 0.5)).is_err());
    }

    #[test]
    fn eta_round_trip() {
        let a = p(2.8, 0.4);
        for z in [c(-50.0, 3.0), c(-1.0, 200.0), c(-0.01, -1e3)] {
            let w = eta_inverse(z.into(), &a).unwrap();
            let back = eta_coordinate(w, &a).unwrap().finite().unwrap();
            assert!((back - z).norm() < 1e-9 * z.norm());
        }
    }

    #[test]
    fn puiseux_constant_term() {
        assert_eq!(inverse_puiseux(c(0.0, 0.0), &p(3.0, 0.0), 6), ComplexPoint::real(1.0));
    }
}
