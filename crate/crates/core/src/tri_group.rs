//! The ideal triangle group, its boundary map `ρ̂` on `[1/3, 2/3]/(1/3 ∼ 2/3)`,
//! Markov itineraries and the conjugacy `ℰ` to the angle map `φ ↦ −2φ`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::antirat::eval_b_finite;
use crate::complex::ComplexPoint;
use crate::error::{Error, Result};

const SQRT3: f64 = 1.732_050_807_568_877_2;
const THIRD: f64 = 1.0 / 3.0;
const TWO_THIRDS: f64 = 2.0 / 3.0;
/// Distance (in turns) at which an iterate counts as sitting on a cell endpoint.
pub const ENDPOINT_TOL: f64 = 1e-12;

/// An angle in turns on the quotient circle, stored in `[1/3, 2/3)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct AngleCoord(f64);

impl AngleCoord {
    /// Folds any angle of `[1/3, 2/3]` (and values within rounding of it) to the canonical range.
    pub fn new(theta: f64) -> Result<Self> {
        if !(theta >= THIRD - 1e-12 && theta <= TWO_THIRDS + 1e-12) {
            return Err(Error::InvalidArgument(format!("angle {theta} is outside [1/3, 2/3]")));
        }
        Ok(Self::canonical(theta))
    }

    fn canonical(theta: f64) -> Self {
        let t = theta.clamp(THIRD, TWO_THIRDS);
        if t >= TWO_THIRDS - 1e-15 || t <= THIRD + 1e-15 {
            AngleCoord(THIRD)
        } else {
            AngleCoord(t)
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

pub fn generator_center(i: usize) -> Complex64 {
    match i {
        1 => Complex64::new(1.0, SQRT3),
        2 => Complex64::new(-2.0, 0.0),
        3 => Complex64::new(1.0, -SQRT3),
        _ => panic!("generator index must be 1, 2 or 3"),
    }
}

/// Reflection in the circle of radius √3 about the `i`-th center.
pub fn reflect_generator(i: usize, z: ComplexPoint) -> Result<ComplexPoint> {
    if !(1..=3).contains(&i) {
        return Err(Error::InvalidArgument(format!("generator {i}")));
    }
    let c = generator_center(i);
    Ok(match z {
        ComplexPoint::Infinity => ComplexPoint::Finite(c),
        ComplexPoint::Finite(z) if z == c => ComplexPoint::Infinity,
        ComplexPoint::Finite(z) => (c + 3.0 / (z - c).conj()).into(),
    })
}

fn turns(z: Complex64) -> f64 {
    (z.arg() / (2.0 * PI)).rem_euclid(1.0)
}

/// The boundary map: reflect in `C₂`, then rotate back into the fundamental arc.
pub fn angle_rho(theta: AngleCoord) -> AngleCoord {
    let z = Complex64::from_polar(1.0, 2.0 * PI * theta.0);
    let w = generator_center(2) + 3.0 / (z - generator_center(2)).conj();
    let phi = turns(w);
    let folded = if phi <= THIRD { phi + THIRD } else if phi >= TWO_THIRDS { phi - THIRD } else { phi };
    AngleCoord::canonical(folded)
}

/// Convention for iterates landing exactly on a cell endpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EndpointConvention {
    /// Endpoints belong to cell 0.
    Lower,
    /// Endpoints belong to cell 1.
    Upper,
    /// The shared point 1/2 is an error; the vertex reads as cell 0.
    Strict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Itinerary(pub Vec<u8>);

impl std::fmt::Display for Itinerary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for b in &self.0 {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

fn near_half(t: f64) -> bool {
    (t - 0.5).abs() <= ENDPOINT_TOL
}

fn near_vertex(t: f64) -> bool {
    (t - THIRD).abs() <= ENDPOINT_TOL || (t - TWO_THIRDS).abs() <= ENDPOINT_TOL
}

pub fn itinerary(theta: AngleCoord, n: usize) -> Result<Itinerary> {
    itinerary_with(theta, n, EndpointConvention::Strict)
}

pub fn itinerary_with(theta: AngleCoord, n: usize, conv: EndpointConvention) -> Result<Itinerary> {
    let mut t = theta;
    let mut bits = Vec::with_capacity(n);
    for k in 0..n {
        let b = if near_half(t.0) {
            match conv {
                EndpointConvention::Lower => 0,
                EndpointConvention::Upper => 1,
                EndpointConvention::Strict => return Err(Error::HitsBoundary(k)),
            }
        } else if near_vertex(t.0) {
            if conv == EndpointConvention::Upper { 1 } else { 0 }
        } else if t.0 < 0.5 {
            0
        } else {
            1
        };
        bits.push(b);
        t = angle_rho(t);
    }
    Ok(Itinerary(bits))
}

/// Itinerary of `θ⁺`, the limit from the right; the side flips at every step
/// because `ρ̂` reverses orientation.
fn right_limit_itinerary(theta: AngleCoord, n: usize) -> Vec<u8> {
    let mut t = theta;
    let mut side = 1i8;
    let mut bits = Vec::with_capacity(n);
    for _ in 0..n {
        let b = if near_half(t.0) {
            if side > 0 { 1 } else { 0 }
        } else if near_vertex(t.0) {
            if side > 0 { 0 } else { 1 }
        } else if t.0 < 0.5 {
            0
        } else {
            1
        };
        bits.push(b);
        t = angle_rho(t);
        side = -side;
    }
    bits
}

/// The angle model `φ ↦ −2φ mod 1` of the anti-Blaschke product.
pub fn angle_b(phi: f64) -> f64 {
    (-2.0 * phi).rem_euclid(1.0)
}

/// Inverse branch of [`angle_b`] into cell `b` applied to an interval.
fn b_branch(b: u8, lo: f64, hi: f64) -> (f64, f64) {
    if b == 0 {
        ((1.0 - hi) / 2.0, (1.0 - lo) / 2.0)
    } else {
        (1.0 - hi / 2.0, 1.0 - lo / 2.0)
    }
}

/// The circle homeomorphism conjugating `ρ̂` to [`angle_b`], from `depth` itinerary bits.
pub fn conjugacy_e(theta: AngleCoord, depth: usize) -> Result<f64> {
    if depth < 8 {
        return Err(Error::InvalidArgument("conjugacy depth must be at least 8".into()));
    }
    let bits = right_limit_itinerary(theta, depth);
    let (mut lo, mut hi) = (0.0, 1.0);
    for &b in bits.iter().rev() {
        (lo, hi) = b_branch(b, lo, hi);
    }
    Ok((0.5 * (lo + hi)).rem_euclid(1.0))
}

/// Distance on the circle `ℝ/ℤ`.
pub fn circle_dist(x: f64, y: f64) -> f64 {
    let d = (x - y).rem_euclid(1.0);
    d.min(1.0 - d)
}

/// `#{φ : B^k(φ) = 0, B^{k−1}(φ) ≠ 0}` for the angle model, by exact enumeration.
pub fn count_dyadic_angles(k: u32) -> Result<u64> {
    if !(1..=20).contains(&k) {
        return Err(Error::InvalidArgument(format!("k = {k} outside 1..=20")));
    }
    let m: i128 = 1 << k;
    let pow = |e: u32| (-2i128).pow(e);
    let count = (0..m)
        .filter(|&j| (pow(k) * j).rem_euclid(m) == 0 && (pow(k - 1) * j).rem_euclid(m) != 0)
        .count();
    Ok(count as u64)
}

/// Both `ρ̂`-preimages of `psi`, computed geometrically.
pub fn rho_preimages(psi: AngleCoord) -> [AngleCoord; 2] {
    let back = |phi: f64| {
        let z = Complex64::from_polar(1.0, 2.0 * PI * phi);
        let w = generator_center(2) + 3.0 / (z - generator_center(2)).conj();
        AngleCoord::canonical(turns(w))
    };
    let p = psi.0;
    let lower = back(p - THIRD);
    let upper = back(p + THIRD);
    [lower, upper]
}

/// Angles of `(1/3, 2/3)` reaching the fixed vertex after exactly `k` steps of `ρ̂`.
pub fn rho_vertex_preimages(k: u32) -> Vec<f64> {
    let dedup = |mut v: Vec<f64>| {
        v.sort_by(f64::total_cmp);
        v.dedup_by(|x, y| (*x - *y).abs() < 1e-13);
        v
    };
    let vertex = AngleCoord(THIRD);
    let mut level: Vec<f64> = vec![vertex.0];
    let mut seen_vertex = true;
    for _ in 0..k {
        let mut next = Vec::with_capacity(level.len() * 2);
        for &t in &level {
            for q in rho_preimages(AngleCoord(t)) {
                if !near_vertex(q.0) || !seen_vertex {
                    next.push(q.0);
                }
            }
        }
        seen_vertex = true;
        level = dedup(next);
    }
    level.retain(|t| *t > THIRD + ENDPOINT_TOL && *t < TWO_THIRDS - ENDPOINT_TOL);
    level
}

/// Number of fixed points of `B^k` on the unit circle, found by root-finding
/// on the lifted angle function; every root is refined and checked against `eval_B`.
pub fn count_b_periodic_points(k: u32) -> Result<(usize, Vec<Complex64>)> {
    if !(1..=10).contains(&k) {
        return Err(Error::InvalidArgument(format!("k = {k} outside 1..=10")));
    }
    let g = |theta: f64| {
        let mut z = Complex64::from_polar(1.0, 2.0 * PI * theta);
        for _ in 0..k {
            z = eval_b_finite(z);
        }
        turns(z)
    };
    let wrap = |x: f64| x - x.round();
    // |B'| ≤ 4 on the circle, so this grid keeps lift increments below 1/2
    let n = 8usize << (2 * k);
    // lifted displacement D(θ) = G(θ) − θ runs from 0 to m = (−2)^k − 1
    let m = (-2f64).powi(k as i32) - 1.0;
    let mut roots = vec![Complex64::new(1.0, 0.0)];
    let (mut prev_t, mut prev_g, mut prev_d) = (0.0, g(0.0), 0.0);
    for i in 1..n {
        let t = i as f64 / n as f64;
        let gt = g(t);
        let d = prev_d + wrap(gt - prev_g) - (t - prev_t);
        let (lo_f, hi_f) = (prev_d.min(d), prev_d.max(d));
        let mut target = lo_f.floor() + 1.0;
        while target <= hi_f {
            if target != 0.0 && target != m {
                let (mut lo, mut hi) = (prev_t, t);
                for _ in 0..60 {
                    let mid = 0.5 * (lo + hi);
                    let dm = prev_d + wrap(g(mid) - prev_g) - (mid - prev_t);
                    if (dm - target).signum() == (prev_d - target).signum() {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                roots.push(Complex64::from_polar(1.0, 2.0 * PI * 0.5 * (lo + hi)));
            }
            target += 1.0;
        }
        (prev_t, prev_g, prev_d) = (t, gt, d);
    }
    for z in &roots {
        let mut w = *z;
        for _ in 0..k {
            w = eval_b_finite(w);
        }
        if (w - z).norm() > 1e-9 {
            return Err(Error::NoConvergence(format!("periodic point {z} of B^{k} off by {}", (w - z).norm())));
        }
    }
    Ok((roots.len(), roots))
}

/// Reduced words of the given length over {1, 2, 3} starting with 2.
pub fn enumerate_tile_words(rank: usize) -> Vec<Vec<u8>> {
    if rank == 0 {
        return Vec::new();
    }
    let mut words = vec![vec![2u8]];
    for _ in 1..rank {
        words = words
            .into_iter()
            .flat_map(|w| {
                let last = *w.last().unwrap();
                (1..=3u8).filter(move |&g| g != last).map(move |g| {
                    let mut v = w.clone();
                    v.push(g);
                    v
                })
            })
            .collect();
    }
    words
}

pub fn words_to_text(words: &[Vec<u8>]) -> String {
    let mut out = String::new();
    for w in words {
        for g in w {
            out.push(char::from(b'0' + g));
        }
        out.push('\n');
    }
    out
}

pub fn dyadic_counts_csv(max_k: u32) -> Result<String> {
    let mut out = String::from("k,count\n");
    for k in 1..=max_k {
        out.push_str(&format!("{k},{}\n", count_dyadic_angles(k)?));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ang(t: f64) -> AngleCoord {
        AngleCoord::new(t).unwrap()
    }

    #[test]
    fn generator_examples() {
        let z = reflect_generator(2, ComplexPoint::real(0.0)).unwrap();
        assert!(z.approx_eq(ComplexPoint::real(-0.5), 1e-15));
        let p = ComplexPoint::real(-2.0 + SQRT3);
        assert!(reflect_generator(2, p).unwrap().approx_eq(p, 1e-15));
        for i in 1..=3 {
            assert!((generator_center(i).norm_sqr() - 4.0).abs() < 1e-14);
        }
    }

    #[test]
    fn rho_examples() {
        assert_eq!(angle_rho(ang(THIRD)).value(), THIRD);
        assert!((angle_rho(ang(0.5)).value() - THIRD).abs() < 1e-12);
        let r = angle_rho(ang(5.0 / 12.0)).value();
        assert!(r > 0.5 && r <= TWO_THIRDS, "{r}");
    }

    #[test]
    fn itinerary_examples() {
        assert_eq!(itinerary(ang(THIRD), 5).unwrap().to_string(), "00000");
        assert_eq!(itinerary(ang(0.5), 3), Err(Error::HitsBoundary(0)));
        assert_eq!(itinerary_with(ang(0.5), 3, EndpointConvention::Lower).unwrap().to_string(), "000");
        assert_eq!(itinerary_with(ang(0.5), 3, EndpointConvention::Upper).unwrap().to_string(), "111");
        assert_eq!(itinerary(ang(0.45), 4).unwrap(), itinerary(ang(0.45), 4).unwrap());
    }

    #[test]
    fn angle_b_examples() {
        assert_eq!(angle_b(0.0), 0.0);
        assert_eq!(angle_b(0.5), 0.0);
        assert!((angle_b(THIRD) - THIRD).abs() < 1e-15);
    }

    #[test]
    fn conjugacy_landmarks() {
        assert!(circle_dist(conjugacy_e(ang(THIRD), 40).unwrap(), 0.0) < 1e-11);
        assert!(circle_dist(conjugacy_e(ang(0.5), 40).unwrap(), 0.5) < 1e-11);
    }

    #[test]
    fn dyadic_counts() {
        assert_eq!(count_dyadic_angles(1).unwrap(), 1);
        assert_eq!(count_dyadic_angles(2).unwrap(), 2);
        assert_eq!(count_dyadic_angles(3).unwrap(), 4);
        for k in 1..=10 {
            assert_eq!(rho_vertex_preimages(k).len() as u64, count_dyadic_angles(k).unwrap());
        }
    }

    #[test]
    fn tile_words() {
        assert_eq!(enumerate_tile_words(1), vec![vec![2]]);
        assert_eq!(enumerate_tile_words(2), vec![vec![2, 1], vec![2, 3]]);
        assert_eq!(enumerate_tile_words(4).len(), 8);
        assert_eq!(words_to_text(&enumerate_tile_words(2)), "21\n23\n");
    }

    #[test]
    fn b_periodic_counts() {
        for k in 1..=6u32 {
            let (n, _) = count_b_periodic_points(k).unwrap();
            assert_eq!(n as i64, ((-2i64).pow(k) - 1).abs(), "k={k}");
        }
    }
}
