use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// A point of the Riemann sphere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ComplexPoint {
    Finite(Complex64),
    Infinity,
}

impl ComplexPoint {
    pub const ZERO: ComplexPoint = ComplexPoint::Finite(Complex64::new(0.0, 0.0));

    /// Non-finite input collapses to [`ComplexPoint::Infinity`].
    pub fn new(re: f64, im: f64) -> Self {
        Complex64::new(re, im).into()
    }

    pub fn real(x: f64) -> Self {
        Self::new(x, 0.0)
    }

    pub fn finite(self) -> Option<Complex64> {
        match self {
            ComplexPoint::Finite(z) => Some(z),
            ComplexPoint::Infinity => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, ComplexPoint::Infinity)
    }

    pub fn conj(self) -> Self {
        match self {
            ComplexPoint::Finite(z) => ComplexPoint::Finite(z.conj()),
            ComplexPoint::Infinity => ComplexPoint::Infinity,
        }
    }

    /// Equality up to `tol`; the two infinities are equal.
    pub fn approx_eq(self, other: ComplexPoint, tol: f64) -> bool {
        match (self, other) {
            (ComplexPoint::Finite(a), ComplexPoint::Finite(b)) => (a - b).norm() <= tol,
            (ComplexPoint::Infinity, ComplexPoint::Infinity) => true,
            _ => false,
        }
    }

    /// Distance between finite points, infinite otherwise (zero for ∞ vs ∞).
    pub fn dist(self, other: ComplexPoint) -> f64 {
        match (self, other) {
            (ComplexPoint::Finite(a), ComplexPoint::Finite(b)) => (a - b).norm(),
            (ComplexPoint::Infinity, ComplexPoint::Infinity) => 0.0,
            _ => f64::INFINITY,
        }
    }
}

impl From<Complex64> for ComplexPoint {
    fn from(z: Complex64) -> Self {
        if z.re.is_finite() && z.im.is_finite() {
            ComplexPoint::Finite(z)
        } else {
            ComplexPoint::Infinity
        }
    }
}

impl From<f64> for ComplexPoint {
    fn from(x: f64) -> Self {
        ComplexPoint::real(x)
    }
}

impl fmt::Display for ComplexPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComplexPoint::Finite(z) => write!(f, "{},{}", z.re, z.im),
            ComplexPoint::Infinity => write!(f, "inf"),
        }
    }
}

/// Parses `re,im`, a bare real, or `inf`.
pub fn parse_complex(s: &str) -> Result<ComplexPoint, String> {
    let t = s.trim();
    if t.eq_ignore_ascii_case("inf") || t == "∞" {
        return Ok(ComplexPoint::Infinity);
    }
    let parse = |x: &str| {
        x.trim()
            .parse::<f64>()
            .map_err(|e| format!("bad number {x:?} in {s:?}: {e}"))
    };
    match t.split_once(',') {
        Some((re, im)) => Ok(ComplexPoint::new(parse(re)?, parse(im)?)),
        None => Ok(ComplexPoint::real(parse(t)?)),
    }
}

/// Principal cube root through polar form; conjugation-equivariant.
pub(crate) fn cbrt(z: Complex64) -> Complex64 {
    if z.re == 0.0 && z.im == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    Complex64::from_polar(z.norm().cbrt(), z.arg() / 3.0)
}

/// Solves a 2x2..nxn complex linear system in place by partial pivoting.
pub(crate) fn solve_linear(mut m: Vec<Vec<Complex64>>, mut rhs: Vec<Complex64>) -> Option<Vec<Complex64>> {
    let n = rhs.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| m[i][col].norm().total_cmp(&m[j][col].norm()))?;
        if m[piv][col].norm() == 0.0 {
            return None;
        }
        m.swap(col, piv);
        rhs.swap(col, piv);
        for row in col + 1..n {
            let factor = m[row][col] / m[col][col];
            for k in col..n {
                let sub = factor * m[col][k];
                m[row][k] -= sub;
            }
            let sub = factor * rhs[col];
            rhs[row] -= sub;
        }
    }
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    for row in (0..n).rev() {
        let mut acc = rhs[row];
        for k in row + 1..n {
            acc -= m[row][k] * x[k];
        }
        x[row] = acc / m[row][row];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse_complex("2.5,-1").unwrap(), ComplexPoint::new(2.5, -1.0));
        assert_eq!(parse_complex("3").unwrap(), ComplexPoint::real(3.0));
        assert_eq!(parse_complex("inf").unwrap(), ComplexPoint::Infinity);
        assert!(parse_complex("x,1").is_err());
    }

    #[test]
    fn nonfinite_is_infinity() {
        assert!(ComplexPoint::from(Complex64::new(f64::NAN, 0.0)).is_infinite());
        assert!(ComplexPoint::new(f64::INFINITY, 1.0).is_infinite());
    }

    #[test]
    fn cbrt_cubes_back() {
        for &(re, im) in &[(1.0, 0.0), (-8.0, 0.0), (0.3, -2.0), (-1e-9, 1e-9)] {
            let z = Complex64::new(re, im);
            let c = cbrt(z);
            assert!((c * c * c - z).norm() < 1e-12 * z.norm().max(1e-9));
            assert_eq!(cbrt(z.conj()), c.conj());
        }
    }

    #[test]
    fn linear_solve() {
        let c = |x: f64, y: f64| Complex64::new(x, y);
        let m = vec![vec![c(2.0, 0.0), c(1.0, 1.0)], vec![c(0.0, 1.0), c(3.0, 0.0)]];
        let x = solve_linear(m.clone(), vec![c(1.0, 0.0), c(0.0, 2.0)]).unwrap();
        for r in 0..2 {
            let lhs = m[r][0] * x[0] + m[r][1] * x[1];
            let rhs = [c(1.0, 0.0), c(0.0, 2.0)][r];
            assert!((lhs - rhs).norm() < 1e-14);
        }
    }
}
