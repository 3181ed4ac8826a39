//! Parameter space: the univalence region `Ŝ`, the family `S`, and escape-time
//! classification of the critical value 2.

use std::collections::VecDeque;
use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::complex::ComplexPoint;
use crate::cubic::{f, fiber_f, to_u};
use crate::error::{Error, Result};
use crate::schwarz::{locate, Membership, SchwarzParam, MEMBERSHIP_TOL};

/// Orbit points this close to −2 are snapped onto the cusp.
pub const CUSP_SNAP: f64 = 1e-10;
/// Longest cycle the proximity scan looks for.
pub const MAX_PERIOD: usize = 32;
/// Default proximity for cycle detection.
pub const CYCLE_EPS: f64 = 1e-6;

const SQRT3: f64 = 1.732_050_807_568_877_2;

/// The sextic whose zero set contains the upper and lower boundary arcs of `Ŝ`.
pub fn tangency_poly(x: f64, y: f64) -> f64 {
    let (x2, y2) = (x * x, y * y);
    let (x3, x4, x5, x6) = (x2 * x, x2 * x2, x2 * x2 * x, x2 * x2 * x2);
    let (y4, y6) = (y2 * y2, y2 * y2 * y2);
    x6 + 3.0 * x4 * y2 + 3.0 * x2 * y4 + y6 - 6.0 * x5 - 12.0 * x3 * y2 - 6.0 * x * y4 + 6.0 * x4
        - 6.0 * y4
        + 16.0 * x3
        - 30.0 * x * y2
        - 12.0 * x2
        - 15.0 * y2
        - 24.0 * x
        - 8.0
}

/// Closed-form description of `Ŝ`: the strip `0 < Re a ≤ 4` cut by the arcs.
///
/// This is the fast test used by renderers; [`in_s_hat`] additionally checks
/// simplicity of the boundary curve by sampling.
pub fn in_s_hat_region(a: Complex64) -> bool {
    let (x, y) = (a.re, a.im);
    if !(x > 0.0 && x <= 4.0) || (a - 1.0).norm() == 0.0 {
        return false;
    }
    y.abs() <= SQRT3 || tangency_poly(x, y) < 0.0
}

pub fn in_s_region(a: Complex64) -> bool {
    in_s_hat_region(a) && a.re > 1.5 && a.re < 4.0
}

fn seg_point_dist(p: Complex64, a: Complex64, b: Complex64) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let t = (((p - a) * ab.conj()).re / len2).clamp(0.0, 1.0);
    (p - (a + ab * t)).norm()
}

fn cross(u: Complex64, v: Complex64) -> f64 {
    u.re * v.im - u.im * v.re
}

fn seg_seg_dist(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> f64 {
    let d1 = cross(b - a, c - a);
    let d2 = cross(b - a, d - a);
    let d3 = cross(d - c, a - c);
    let d4 = cross(d - c, b - c);
    if d1 * d2 < 0.0 && d3 * d4 < 0.0 {
        return 0.0;
    }
    seg_point_dist(a, c, d)
        .min(seg_point_dist(b, c, d))
        .min(seg_point_dist(c, a, b))
        .min(seg_point_dist(d, a, b))
}

/// Minimum distance between non-neighbouring pieces of the sampled curve
/// `f(∂Δ_a)`, together with the curve diameter.
fn curve_separation(a: Complex64, samples: usize) -> (f64, f64) {
    // quadratic clustering of the samples at the cusp t = 0
    let n = samples;
    let ts: Vec<f64> = (0..n)
        .map(|i| {
            let s = -1.0 + 2.0 * i as f64 / n as f64;
            PI * s * s.abs()
        })
        .collect();
    let pts: Vec<Complex64> = ts.iter().map(|&t| f(to_u(Complex64::from_polar(1.0, t), a))).collect();
    let mut diam: f64 = 0.0;
    for p in &pts {
        for q in &pts {
            diam = diam.max((p - q).norm());
        }
    }
    let gap = 0.3;
    let circ = |s: f64, t: f64| {
        let d = (s - t).rem_euclid(2.0 * PI);
        d.min(2.0 * PI - d)
    };
    let mut best = f64::INFINITY;
    for i in 0..n {
        let (i0, i1) = (i, (i + 1) % n);
        for j in i + 1..n {
            let (j0, j1) = (j, (j + 1) % n);
            let sep = [circ(ts[i0], ts[j0]), circ(ts[i0], ts[j1]), circ(ts[i1], ts[j0]), circ(ts[i1], ts[j1])]
                .into_iter()
                .fold(f64::INFINITY, f64::min);
            if sep <= gap {
                continue;
            }
            best = best.min(seg_seg_dist(pts[i0], pts[i1], pts[j0], pts[j1]));
        }
    }
    (best, diam)
}

/// Membership in `Ŝ` with a sampled simplicity check of `f(∂Δ_a)`.
pub fn in_s_hat(a: Complex64, samples: usize) -> Result<bool> {
    if samples < 256 {
        return Err(Error::InvalidArgument("in_s_hat needs at least 256 samples".into()));
    }
    if !in_s_hat_region(a) {
        return Ok(false);
    }
    let (sep, diam) = curve_separation(a, samples);
    let tol = 1e-9 * diam;
    if sep < tol {
        return Ok(false);
    }
    if sep < 10.0 * tol {
        return Err(Error::Indeterminate { distance: sep, tol });
    }
    Ok(true)
}

pub fn in_s(a: Complex64) -> Result<bool> {
    if !(a.re > 1.5 && a.re < 4.0) {
        return Ok(false);
    }
    in_s_hat(a, 512)
}

/// Letters of the pullback branches, one per step before the orbit lands.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchWord(pub Vec<u8>);

impl fmt::Display for BranchWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.0 {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ParamClass {
    Escaping { depth: usize, branch_word: BranchWord },
    NonEscaping { iterations_checked: usize, cusp_landing: Option<usize> },
    CycleDetected { period: usize, multiplier_sq: Complex64, representative: ComplexPoint },
}

impl ParamClass {
    pub fn kind(&self) -> &'static str {
        match self {
            ParamClass::Escaping { .. } => "escaping",
            ParamClass::NonEscaping { .. } => "non_escaping",
            ParamClass::CycleDetected { .. } => "cycle",
        }
    }

    pub fn is_escaping(&self) -> bool {
        matches!(self, ParamClass::Escaping { .. })
    }
}

impl fmt::Display for ParamClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamClass::Escaping { depth, branch_word } if branch_word.0.is_empty() => {
                write!(f, "Escaping depth={depth}")
            }
            ParamClass::Escaping { depth, branch_word } => write!(f, "Escaping depth={depth} word={branch_word}"),
            ParamClass::NonEscaping { iterations_checked, cusp_landing: Some(k) } => {
                write!(f, "NonEscaping iterations={iterations_checked} cusp_landing={k}")
            }
            ParamClass::NonEscaping { iterations_checked, .. } => write!(f, "NonEscaping iterations={iterations_checked}"),
            ParamClass::CycleDetected { period, multiplier_sq, representative } => write!(
                f,
                "CycleDetected period={period} multiplier_sq={},{} representative={representative}",
                multiplier_sq.re, multiplier_sq.im
            ),
        }
    }
}

fn angle_from(u: Complex64, a: &SchwarzParam) -> f64 {
    ((u - a.a).arg() - a.theta0).rem_euclid(2.0 * PI)
}

fn exterior_roots(v: Complex64, a: &SchwarzParam, tol: f64) -> Vec<Complex64> {
    let mut ext: Vec<Complex64> = fiber_f(v)
        .roots
        .into_iter()
        .filter(|u| (u - a.a).norm() - a.radius > tol)
        .collect();
    ext.sort_by(|p, q| angle_from(*p, a).total_cmp(&angle_from(*q, a)));
    ext
}

fn letter_among(w: Complex64, ext: &[Complex64], a: &SchwarzParam) -> Result<u8> {
    let mut best: Option<(usize, f64)> = None;
    for (i, &u) in ext.iter().enumerate() {
        let d = match crate::schwarz::reflect_in_disk(u.into(), a) {
            ComplexPoint::Finite(x) => (f(x) - w).norm(),
            ComplexPoint::Infinity => f64::INFINITY,
        };
        if best.map_or(true, |(_, bd)| d < bd) {
            best = Some((i, d));
        }
    }
    best.map(|(i, _)| i as u8).ok_or(Error::NoExteriorRoot)
}

/// Which of the two σ-preimage branches of `v` contains `w`.
pub fn branch_letter(w: ComplexPoint, v: ComplexPoint, a: &SchwarzParam) -> Result<u8> {
    let v = match v {
        ComplexPoint::Infinity => return Ok(0),
        ComplexPoint::Finite(v) => v,
    };
    let w = w.finite().ok_or(Error::NotInDomain)?;
    letter_among(w, &exterior_roots(v, a, MEMBERSHIP_TOL), a)
}

/// Iterates σ_a a given number of times, tracking `∂/∂z̄` or `∂/∂z` of the composite.
///
/// After an even number of steps the coefficient is the holomorphic derivative.
pub fn iterate_with_derivative(z: Complex64, a: &SchwarzParam, steps: usize) -> Option<(Complex64, Complex64)> {
    let mut w = z;
    let mut coeff = Complex64::new(1.0, 0.0);
    for _ in 0..steps {
        let (v, d) = crate::schwarz::sigma_with_derivative(w, a).ok()?;
        w = v.finite()?;
        coeff = d * coeff.conj();
    }
    Some((w, coeff))
}

fn iterate_plain(z: Complex64, a: &SchwarzParam, steps: usize) -> Option<Complex64> {
    let mut w = z;
    for _ in 0..steps {
        w = crate::schwarz::sigma(w.into(), a).ok()?.finite()?;
    }
    Some(w)
}

/// A Newton-refined attracting cycle of σ_a.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RefinedCycle {
    pub period: usize,
    pub point: Complex64,
    pub multiplier_sq: Complex64,
    pub residual: f64,
}

/// Newton on `σ^{2p}(z) = z` from `z`; accepts only attracting cycles.
pub fn refine_cycle(z: Complex64, a: &SchwarzParam, p: usize) -> Option<RefinedCycle> {
    let mut z = z;
    let start = z;
    for _ in 0..60 {
        let (g, m) = iterate_with_derivative(z, a, 2 * p)?;
        let fz = g - z;
        let den = m - 1.0;
        if den.norm() == 0.0 {
            return None;
        }
        let dz = fz / den;
        z -= dz;
        if !(z.re.is_finite() && z.im.is_finite()) {
            return None;
        }
        if dz.norm() <= 1e-15 * z.norm().max(1.0) {
            break;
        }
    }
    if (z - start).norm() > 1e-3 * start.norm().max(1.0) {
        return None;
    }
    let (g, m) = iterate_with_derivative(z, a, 2 * p)?;
    let residual = (g - z).norm();
    if residual > 1e-10 * z.norm().max(1.0) || m.norm() >= 1.0 {
        return None;
    }
    let mut period = p;
    for d in 1..p {
        if p % d == 0 {
            if let Some(y) = iterate_plain(z, a, d) {
                if (y - z).norm() < 1e-8 * z.norm().max(1.0) {
                    period = d;
                    break;
                }
            }
        }
    }
    let multiplier_sq = if period == p { m } else { iterate_with_derivative(z, a, 2 * period)?.1 };
    Some(RefinedCycle { period, point: z, multiplier_sq, residual })
}

/// Classifies the critical value 2 under σ_a.
pub fn classify_parameter(a: &SchwarzParam, max_iter: usize, tol: f64) -> Result<ParamClass> {
    classify_parameter_with(a, max_iter, tol, true)
}

/// Same as [`classify_parameter`]; `record_word = false` skips branch letters.
pub fn classify_parameter_with(a: &SchwarzParam, max_iter: usize, tol: f64, record_word: bool) -> Result<ParamClass> {
    let mut w = Complex64::new(2.0, 0.0);
    let mut loc = locate(w, a, MEMBERSHIP_TOL)?;
    if loc.membership == Membership::Exterior {
        return Err(Error::OutsideRegime(format!("2 is not in the closure of Ω_a for a = {}", a.a)));
    }
    let mut word = Vec::new();
    let mut hist: VecDeque<Complex64> = VecDeque::with_capacity(MAX_PERIOD + 2);
    hist.push_back(w);
    let mut next_attempt = 0usize;
    let mut backoff = 1usize;
    for k in 0..max_iter {
        if (w + 2.0).norm() < CUSP_SNAP {
            return Ok(ParamClass::NonEscaping { iterations_checked: max_iter, cusp_landing: Some(k) });
        }
        let u = loc.root.expect("orbit point in closed domain");
        let next = match crate::schwarz::reflect_in_disk(u.into(), a) {
            ComplexPoint::Finite(x) => f(x),
            ComplexPoint::Infinity => {
                return Ok(ParamClass::Escaping { depth: k + 1, branch_word: BranchWord(word) })
            }
        };
        if !(next.re.is_finite() && next.im.is_finite()) {
            return Ok(ParamClass::Escaping { depth: k + 1, branch_word: BranchWord(word) });
        }
        let next_loc = locate(next, a, MEMBERSHIP_TOL)?;
        if next_loc.membership == Membership::Exterior && (next + 2.0).norm() >= CUSP_SNAP {
            return Ok(ParamClass::Escaping { depth: k + 1, branch_word: BranchWord(word) });
        }
        if record_word && (next + 2.0).norm() >= CUSP_SNAP {
            word.push(letter_among(w, &exterior_roots(next, a, MEMBERSHIP_TOL), a)?);
        }
        w = next;
        loc = next_loc;
        if hist.len() > MAX_PERIOD {
            hist.pop_front();
        }
        hist.push_back(w);
        if k + 1 >= next_attempt {
            let last = hist.len() - 1;
            let hit = (1..=last.min(MAX_PERIOD)).find(|&p| (hist[last] - hist[last - p]).norm() < tol);
            if let Some(p) = hit {
                if let Some(cyc) = refine_cycle(w, a, p) {
                    return Ok(ParamClass::CycleDetected {
                        period: cyc.period,
                        multiplier_sq: cyc.multiplier_sq,
                        representative: cyc.point.into(),
                    });
                }
                next_attempt = k + 1 + backoff;
                backoff = (backoff * 2).min(256);
            }
        }
    }
    Ok(ParamClass::NonEscaping { iterations_checked: max_iter, cusp_landing: None })
}

/// Classification of a point of the dynamical plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PointClass {
    /// `σ^rank(w)` lies in the fundamental tile `T⁰`.
    Tile { rank: usize },
    NonEscaping { iterations: usize },
}

/// Tile rank of `w`, or non-escaping within `max_iter` steps.
pub fn classify_point(w: ComplexPoint, a: &SchwarzParam, max_iter: usize) -> Result<PointClass> {
    let mut w = match w {
        ComplexPoint::Infinity => return Ok(PointClass::Tile { rank: 0 }),
        ComplexPoint::Finite(w) => w,
    };
    let mut hist = [Complex64::new(f64::NAN, f64::NAN); 4];
    for k in 0..=max_iter {
        if (w + 2.0).norm() < CUSP_SNAP {
            return Ok(PointClass::NonEscaping { iterations: k });
        }
        let loc = locate(w, a, MEMBERSHIP_TOL)?;
        if loc.membership == Membership::Exterior {
            return Ok(PointClass::Tile { rank: k });
        }
        // settled onto a cycle of length ≤ 4: it cannot escape any more
        if hist.iter().any(|h| (h - w).norm() < 1e-13 * w.norm().max(1.0)) {
            return Ok(PointClass::NonEscaping { iterations: k });
        }
        hist[k % 4] = w;
        if k == max_iter {
            break;
        }
        let u = loc.root.expect("closed domain has a disk root");
        w = match crate::schwarz::reflect_in_disk(u.into(), a) {
            ComplexPoint::Finite(x) => f(x),
            ComplexPoint::Infinity => return Ok(PointClass::Tile { rank: k + 1 }),
        };
        if !(w.re.is_finite() && w.im.is_finite()) {
            return Ok(PointClass::Tile { rank: k + 1 });
        }
    }
    Ok(PointClass::NonEscaping { iterations: max_iter })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SliceRow {
    pub a: Complex64,
    pub class: ParamClass,
}

/// Classification along the real axis; row order is independent of scheduling.
pub fn real_slice_table(lo: f64, hi: f64, step: f64, max_iter: usize) -> Result<Vec<SliceRow>> {
    if !(lo > 1.5 && lo < hi && hi < 4.0 && step > 0.0) {
        return Err(Error::InvalidArgument(format!("bad slice [{lo}, {hi}] step {step}")));
    }
    let n = ((hi - lo) / step + 1e-9).floor() as usize + 1;
    (0..n)
        .into_par_iter()
        .map(|i| {
            let a = Complex64::new(lo + step * i as f64, 0.0);
            let p = SchwarzParam::new(a)?;
            Ok(SliceRow { a, class: classify_parameter(&p, max_iter, CYCLE_EPS)? })
        })
        .collect()
}

pub fn slice_csv(rows: &[SliceRow]) -> String {
    let mut out = String::from("a_re,a_im,kind,depth,period,mult_re,mult_im\n");
    for r in rows {
        let (depth, period, mre, mim) = match &r.class {
            ParamClass::Escaping { depth, .. } => (depth.to_string(), String::new(), String::new(), String::new()),
            ParamClass::NonEscaping { .. } => Default::default(),
            ParamClass::CycleDetected { period, multiplier_sq, .. } => {
                (String::new(), period.to_string(), multiplier_sq.re.to_string(), multiplier_sq.im.to_string())
            }
        };
        out.push_str(&format!("{},{},{},{depth},{period},{mre},{mim}\n", r.a.re, r.a.im, r.class.kind()));
    }
    out
}
