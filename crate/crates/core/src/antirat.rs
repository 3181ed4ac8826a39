//! The parabolic anti-rational family `R(z) = e^{iα}(z̄ + 1/z̄) + A`, the
//! anti-Blaschke model `B`, Fatou coordinates and Ecalle heights.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::complex::{solve_linear, ComplexPoint};
use crate::error::{Error, Result};

/// Basin confirmation: consecutive steps with unit drift beyond [`ESCAPE_RE`].
pub const BASIN_WINDOW: usize = 20;
pub const ESCAPE_RE: f64 = 50.0;
/// Budget used to reach the basin before computing Fatou coordinates.
pub const APPROACH_BUDGET: usize = 2_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AntiRatParam {
    pub alpha: f64,
    pub a: Complex64,
    /// Translation constant of `R²` at ∞.
    pub t: Complex64,
    /// `T/|T|`, the attracting direction at ∞.
    pub direction: Complex64,
    rot: Complex64,
}

impl AntiRatParam {
    pub fn new(alpha: f64, a: Complex64) -> Result<Self> {
        if a.norm() == 0.0 || !(a.re.is_finite() && a.im.is_finite() && alpha.is_finite()) {
            return Err(Error::DegenerateParameter(format!("A = {a}")));
        }
        let rot = Complex64::from_polar(1.0, alpha);
        let t = a + rot * a.conj();
        let direction = if t.norm() > 0.0 { t / t.norm() } else { Complex64::from_polar(1.0, alpha / 2.0) };
        Ok(AntiRatParam { alpha, a, t, direction, rot })
    }

    pub fn is_simple(&self) -> bool {
        self.t.norm() > 1e-12 * self.a.norm().max(1.0)
    }
}

#[inline]
fn r_finite(z: Complex64, p: &AntiRatParam) -> ComplexPoint {
    if z.norm() == 0.0 {
        return ComplexPoint::Infinity;
    }
    let zc = z.conj();
    (p.rot * (zc + 1.0 / zc) + p.a).into()
}

pub fn eval_r(z: ComplexPoint, p: &AntiRatParam) -> ComplexPoint {
    match z {
        ComplexPoint::Infinity => ComplexPoint::Infinity,
        ComplexPoint::Finite(z) => r_finite(z, p),
    }
}

pub(crate) fn eval_b_finite(z: Complex64) -> Complex64 {
    let zc2 = z.conj() * z.conj();
    (3.0 * zc2 + 1.0) / (3.0 + zc2)
}

pub fn eval_b(z: ComplexPoint) -> ComplexPoint {
    match z {
        // B(∞) = 3
        ComplexPoint::Infinity => ComplexPoint::real(3.0),
        ComplexPoint::Finite(z) => eval_b_finite(z).into(),
    }
}

/// `(T, simple)` with `T = A + e^{iα} Ā`.
pub fn translation_constant(p: &AntiRatParam) -> (Complex64, bool) {
    (p.t, p.is_simple())
}

/// An anti-holomorphic map with a simple parabolic fixed point at ∞ whose
/// second iterate is `z ↦ z + T + O(1/z)`.
pub trait ParabolicAntiMap: Sync {
    fn apply(&self, z: Complex64) -> ComplexPoint;
    fn translation(&self) -> Complex64;
    /// The critical value whose Ecalle height is measured.
    fn critical_value(&self) -> Complex64;
    /// `∂(map)/∂z̄`.
    fn conj_derivative(&self, z: Complex64) -> Complex64;

    fn is_simple(&self) -> bool {
        self.translation().norm() > 1e-12
    }

    fn apply2(&self, z: Complex64) -> ComplexPoint {
        match self.apply(z) {
            ComplexPoint::Finite(w) => self.apply(w),
            ComplexPoint::Infinity => ComplexPoint::Infinity,
        }
    }
}

impl ParabolicAntiMap for AntiRatParam {
    fn apply(&self, z: Complex64) -> ComplexPoint {
        r_finite(z, self)
    }
    fn translation(&self) -> Complex64 {
        self.t
    }
    fn critical_value(&self) -> Complex64 {
        2.0 * self.rot + self.a
    }
    fn conj_derivative(&self, z: Complex64) -> Complex64 {
        let zc = z.conj();
        self.rot * (1.0 - 1.0 / (zc * zc))
    }
    fn is_simple(&self) -> bool {
        AntiRatParam::is_simple(self)
    }
}

/// The model `q(z) = z̄ + z̄²` in the chart `w = −1/(2z)`, where it reads
/// `w ↦ w̄ + 1/2 + O(1/w̄)`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ModelQ;

impl ModelQ {
    pub fn q(z: Complex64) -> Complex64 {
        let zc = z.conj();
        zc + zc * zc
    }
}

impl ParabolicAntiMap for ModelQ {
    fn apply(&self, w: Complex64) -> ComplexPoint {
        if w.norm() == 0.0 {
            return ComplexPoint::Finite(w);
        }
        let z = -1.0 / (2.0 * w);
        let qz = Self::q(z);
        if qz.norm() == 0.0 {
            return ComplexPoint::Infinity;
        }
        (-1.0 / (2.0 * qz)).into()
    }
    fn translation(&self) -> Complex64 {
        Complex64::new(1.0, 0.0)
    }
    /// The critical value `q(−1/2) = −1/4` sits at `w = 2`.
    fn critical_value(&self) -> Complex64 {
        Complex64::new(2.0, 0.0)
    }
    fn conj_derivative(&self, w: Complex64) -> Complex64 {
        // chain rule through w ↦ z ↦ q ↦ w'
        let z = -1.0 / (2.0 * w);
        let qz = Self::q(z);
        let dq = 1.0 + 2.0 * z.conj();
        let dz_dw = 1.0 / (2.0 * w * w);
        let dw_dq = 1.0 / (2.0 * qz * qz);
        dw_dq * dq * dz_dw.conj()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BasinClass {
    InBasin,
    NotInBasinWithinBudget,
}

/// Drift test on `u = z/T` under `R²`; returns the step at which membership was confirmed.
pub fn basin_entry<M: ParabolicAntiMap + ?Sized>(z: Complex64, map: &M, max_iter: usize) -> Option<usize> {
    let t = map.translation();
    let mut z = z;
    let mut streak = 0;
    for n in 0..max_iter {
        let next = map.apply2(z).finite()?;
        let u = z / t;
        let drift = ((next - z) / t).re;
        if u.re > ESCAPE_RE && drift > 0.5 && drift < 1.5 {
            streak += 1;
            if streak >= BASIN_WINDOW {
                return Some(n + 1);
            }
        } else {
            streak = 0;
        }
        z = next;
    }
    None
}

pub fn classify_basin_map<M: ParabolicAntiMap + ?Sized>(z: ComplexPoint, map: &M, max_iter: usize) -> BasinClass {
    match z.finite().and_then(|z| basin_entry(z, map, max_iter)) {
        Some(_) => BasinClass::InBasin,
        None => BasinClass::NotInBasinWithinBudget,
    }
}

pub fn classify_basin(z: ComplexPoint, p: &AntiRatParam, max_iter: usize) -> BasinClass {
    if !p.is_simple() {
        return BasinClass::NotInBasinWithinBudget;
    }
    classify_basin_map(z, p, max_iter)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FatouResult {
    pub phi: Complex64,
    pub iterations: usize,
    /// Fitted β in `ψ(u) = u + β log u`.
    pub log_coeff: Complex64,
    pub converged: bool,
}

/// Least-squares fit of `r_n u_n ≈ b + c₁/u + c₂/u² + c₃ log(u)/u²` with
/// `r_n = u_{n+1} − u_n − 1`; returns `β = −b`.
fn fit_log_coeff(us: &[Complex64]) -> Option<Complex64> {
    let mut normal = vec![vec![Complex64::new(0.0, 0.0); 4]; 4];
    let mut rhs = vec![Complex64::new(0.0, 0.0); 4];
    for w in us.windows(2) {
        let u = w[0];
        let y = (w[1] - u - 1.0) * u;
        let inv = 1.0 / u;
        let basis = [Complex64::new(1.0, 0.0), inv, inv * inv, u.ln() * inv * inv];
        for i in 0..4 {
            for j in 0..4 {
                normal[i][j] += basis[i].conj() * basis[j];
            }
            rhs[i] += basis[i].conj() * y;
        }
    }
    solve_linear(normal, rhs).map(|c| -c[0])
}

const FIT_SKIP: usize = 100;
const FIT_LEN: usize = 4000;
const RICHARDSON_LEVELS: usize = 4;

/// Fatou coordinate of the second iterate: `φ(R²(z)) = φ(z) + 1`.
pub fn fatou_coordinate_map<M: ParabolicAntiMap + ?Sized>(z: ComplexPoint, map: &M, tol: f64) -> Result<FatouResult> {
    if !map.is_simple() {
        return Err(Error::NotSimple);
    }
    let z0 = z.finite().ok_or(Error::NotInBasin)?;
    let t = map.translation();
    // approach the petal first; n counts R² steps from z
    let mut n = 0usize;
    let mut w = z0;
    while (w / t).re < 20.0 {
        if n >= APPROACH_BUDGET {
            return Err(Error::NotInBasin);
        }
        w = map.apply2(w).finite().ok_or(Error::NotInBasin)?;
        n += 1;
    }
    let fit_start = n + FIT_SKIP;
    let mut fit_orbit = Vec::with_capacity(FIT_LEN);
    let mut n0 = 2000usize;
    let mut beta = None;
    let mut last: Option<Complex64> = None;
    while n0 <= 64_000 {
        let checkpoints: Vec<usize> = (0..RICHARDSON_LEVELS).map(|k| fit_start + n0 * (1 << k)).collect();
        let mut vals = Vec::with_capacity(RICHARDSON_LEVELS);
        // restart from the approach point so every level is an exact orbit count
        let (mut m, mut x) = (n, w);
        for &cp in &checkpoints {
            while m < cp {
                if beta.is_none() && m >= fit_start && fit_orbit.len() < FIT_LEN {
                    fit_orbit.push(x / t);
                }
                x = map.apply2(x).finite().ok_or(Error::NotInBasin)?;
                m += 1;
            }
            if beta.is_none() {
                beta = Some(fit_log_coeff(&fit_orbit).ok_or_else(|| Error::NoConvergence("β fit singular".into()))?);
            }
            let u = x / t;
            vals.push(u + beta.unwrap() * u.ln() - cp as f64);
        }
        let mut table = vals;
        let mut prev_best = table[table.len() - 1];
        for k in 1..RICHARDSON_LEVELS {
            let fac = (1u64 << k) as f64;
            prev_best = table[table.len() - 1];
            table = table.windows(2).map(|p| (fac * p[1] - p[0]) / (fac - 1.0)).collect();
        }
        let best = table[0];
        let iterations = checkpoints[RICHARDSON_LEVELS - 1];
        let converged = (best - prev_best).norm() < tol || last.is_some_and(|l| (best - l).norm() < tol);
        if converged {
            return Ok(FatouResult { phi: best, iterations, log_coeff: beta.unwrap(), converged });
        }
        last = Some(best);
        n0 *= 2;
    }
    Err(Error::NoConvergence(format!("Fatou coordinate did not reach tolerance {tol:e}")))
}

pub fn fatou_coordinate(z: ComplexPoint, p: &AntiRatParam, tol: f64) -> Result<FatouResult> {
    fatou_coordinate_map(z, p, tol)
}

/// Normalized height data of the critical value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EcalleHeight {
    pub height: f64,
    /// Imaginary constant `c` making `Im φ∘R = −Im φ`.
    pub constant: f64,
    /// Spread `max c − min c` over the samples.
    pub spread: f64,
    pub samples: usize,
}

fn orbit_points<M: ParabolicAntiMap + ?Sized>(z: Complex64, map: &M, count: usize) -> Result<Vec<Complex64>> {
    let mut out = Vec::with_capacity(count);
    let mut w = z;
    for _ in 0..count {
        out.push(w);
        w = map.apply(w).finite().ok_or(Error::NotInBasin)?;
    }
    Ok(out)
}

pub fn ecalle_height_detail<M: ParabolicAntiMap + ?Sized>(map: &M, tol: f64) -> Result<EcalleHeight> {
    if !map.is_simple() {
        return Err(Error::NotSimple);
    }
    let v = map.critical_value();
    if classify_basin_map(v.into(), map, APPROACH_BUDGET) != BasinClass::InBasin {
        return Err(Error::NotInBasin);
    }
    let t = map.translation();
    let far = t * Complex64::new(40.0, 7.0);
    let mut samples = orbit_points(v, map, 5)?;
    samples.extend(orbit_points(far, map, 5)?);
    let consts = samples
        .par_iter()
        .map(|&z| {
            let rz = map.apply(z).finite().ok_or(Error::NotInBasin)?;
            let a = fatou_coordinate_map(z.into(), map, tol)?.phi;
            let b = fatou_coordinate_map(rz.into(), map, tol)?.phi;
            Ok(-(a.im + b.im) / 2.0)
        })
        .collect::<Result<Vec<f64>>>()?;
    let max = consts.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = consts.iter().cloned().fold(f64::INFINITY, f64::min);
    let spread = max - min;
    if spread > 10.0 * tol.max(1e-9) {
        return Err(Error::InconsistentNormalization { spread });
    }
    let c = consts.iter().sum::<f64>() / consts.len() as f64;
    let phi_v = fatou_coordinate_map(v.into(), map, tol)?.phi;
    Ok(EcalleHeight { height: phi_v.im + c, constant: c, spread, samples: consts.len() })
}

pub fn ecalle_height(p: &AntiRatParam, tol: f64) -> Result<f64> {
    Ok(ecalle_height_detail(p, tol)?.height)
}

pub fn in_l0(p: &AntiRatParam, tol: f64) -> Result<bool> {
    Ok(ecalle_height(p, (tol * 1e-2).min(1e-8))?.abs() < tol)
}

/// `−1` stays out of the parabolic basin within the budget.
pub fn in_connectedness_l0(p: &AntiRatParam, max_iter: usize) -> Result<bool> {
    if !p.is_simple() {
        return Err(Error::NotSimple);
    }
    Ok(classify_basin(ComplexPoint::real(-1.0), p, max_iter) == BasinClass::NotInBasinWithinBudget)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RCycle {
    pub period: usize,
    /// Derivative of `R^{2·period}` along the cycle.
    pub multiplier: Complex64,
    pub point: Complex64,
}

fn iterate_r_with_derivative(z: Complex64, p: &AntiRatParam, steps: usize) -> Option<(Complex64, Complex64)> {
    let mut w = z;
    let mut coeff = Complex64::new(1.0, 0.0);
    for _ in 0..steps {
        let d = p.conj_derivative(w);
        w = r_finite(w, p).finite()?;
        coeff = d * coeff.conj();
    }
    Some((w, coeff))
}

fn refine_r_cycle(z: Complex64, p: &AntiRatParam, period: usize) -> Option<RCycle> {
    let start = z;
    let mut z = z;
    for _ in 0..60 {
        let (g, m) = iterate_r_with_derivative(z, p, 2 * period)?;
        let dz = (g - z) / (m - 1.0);
        z -= dz;
        if !(z.re.is_finite() && z.im.is_finite()) {
            return None;
        }
        if dz.norm() <= 1e-15 * z.norm().max(1.0) {
            break;
        }
    }
    let (g, m) = iterate_r_with_derivative(z, p, 2 * period)?;
    let ok = (g - z).norm() < 1e-10 * z.norm().max(1.0) && m.norm() < 1.0 && (z - start).norm() < 1e-3 * start.norm().max(1.0);
    ok.then_some(RCycle { period, multiplier: m, point: z })
}

/// Attracting cycle captured by the orbit of −1, if any.
pub fn detect_cycle_r(p: &AntiRatParam, max_iter: usize) -> Option<RCycle> {
    const MAXP: usize = 32;
    let t = p.t;
    let mut hist: std::collections::VecDeque<Complex64> = Default::default();
    let mut z = Complex64::new(-1.0, 0.0);
    let mut streak = 0;
    let mut next_attempt = 0;
    let mut backoff = 1;
    for k in 0..max_iter {
        hist.push_back(z);
        if hist.len() > MAXP + 1 {
            hist.pop_front();
        }
        let last = hist.len() - 1;
        if k >= next_attempt {
            if let Some(per) = (1..=last.min(MAXP)).find(|&q| (hist[last] - hist[last - q]).norm() < 1e-6) {
                if let Some(c) = refine_r_cycle(z, p, per) {
                    // keep the least period
                    for d in 1..per {
                        if per % d == 0 {
                            if let Some((y, _)) = iterate_r_with_derivative(c.point, p, d) {
                                if (y - c.point).norm() < 1e-8 * c.point.norm().max(1.0) {
                                    let m = iterate_r_with_derivative(c.point, p, 2 * d)?.1;
                                    return Some(RCycle { period: d, multiplier: m, point: c.point });
                                }
                            }
                        }
                    }
                    return Some(c);
                }
                next_attempt = k + backoff;
                backoff = (backoff * 2).min(256);
            }
        }
        let next = r_finite(z, p).finite()?;
        if p.is_simple() {
            let u = z / t;
            let drift = ((r_finite(next, p).finite()? - z) / t).re;
            if u.re > ESCAPE_RE && drift > 0.5 && drift < 1.5 {
                streak += 1;
                if streak >= 2 * BASIN_WINDOW {
                    return None;
                }
            } else {
                streak = 0;
            }
        }
        z = next;
    }
    None
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub alpha: f64,
    pub a: Complex64,
    pub in_l0: Option<bool>,
    pub connected: Option<bool>,
    pub cycle: Option<RCycle>,
}

/// Evaluates leaf membership, connectedness and cycles over a parameter list.
pub fn scan(params: &[(f64, Complex64)], tol: f64, max_iter: usize) -> Vec<ScanRow> {
    params
        .par_iter()
        .map(|&(alpha, a)| {
            let p = AntiRatParam::new(alpha, a);
            let (in_l0, connected, cycle) = match p {
                Ok(p) if p.is_simple() => (
                    in_l0(&p, tol).ok(),
                    in_connectedness_l0(&p, max_iter).ok(),
                    detect_cycle_r(&p, max_iter),
                ),
                _ => (None, None, None),
            };
            ScanRow { alpha, a, in_l0, connected, cycle }
        })
        .collect()
}

pub fn scan_csv(rows: &[ScanRow]) -> String {
    let opt = |b: Option<bool>| b.map(|b| b.to_string()).unwrap_or_default();
    let mut out = String::from("alpha,A_re,A_im,in_L0,connected,period,mult\n");
    for r in rows {
        let (period, mult) = match r.cycle {
            Some(c) => (c.period.to_string(), c.multiplier.norm().to_string()),
            None => (String::new(), String::new()),
        };
        out.push_str(&format!(
            "{},{},{},{},{},{period},{mult}\n",
            r.alpha,
            r.a.re,
            r.a.im,
            opt(r.in_l0),
            opt(r.connected)
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn r_examples() {
        let p = AntiRatParam::new(0.0, c(3.0, 0.0)).unwrap();
        assert_eq!(eval_r(ComplexPoint::real(-1.0), &p), ComplexPoint::real(1.0));
        assert_eq!(eval_r(ComplexPoint::real(1.0), &p), ComplexPoint::real(5.0));
        assert!(eval_r(ComplexPoint::ZERO, &p).is_infinite());
    }

    #[test]
    fn b_examples() {
        assert_eq!(eval_b(ComplexPoint::real(1.0)), ComplexPoint::real(1.0));
        assert!(eval_b(ComplexPoint::ZERO).approx_eq(ComplexPoint::real(1.0 / 3.0), 1e-16));
        assert_eq!(eval_b(ComplexPoint::real(-1.0)), ComplexPoint::real(1.0));
    }

    #[test]
    fn translation_examples() {
        let (t, s) = translation_constant(&AntiRatParam::new(0.0, c(3.0, 0.0)).unwrap());
        assert_eq!((t, s), (c(6.0, 0.0), true));
        let (t, s) = translation_constant(&AntiRatParam::new(0.0, c(0.0, 1.0)).unwrap());
        assert!(t.norm() < 1e-15 && !s);
        let a = Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4);
        let (t, s) = translation_constant(&AntiRatParam::new(std::f64::consts::FRAC_PI_2, a).unwrap());
        assert!((t - 2.0 * a).norm() < 1e-15 && s);
    }

    #[test]
    fn basin_examples() {
        let p = AntiRatParam::new(0.0, c(3.0, 0.0)).unwrap();
        assert_eq!(classify_basin(ComplexPoint::real(1.0), &p, 1000), BasinClass::InBasin);
        assert_eq!(classify_basin(ComplexPoint::real(1e4), &p, 1000), BasinClass::InBasin);
        assert_eq!(classify_basin(ComplexPoint::real(-1.0), &p, 1000), BasinClass::InBasin);
    }

    #[test]
    fn model_chart_is_half_translation() {
        let q = ModelQ;
        for w in [c(1e4, 3.0), c(5e3, -2e3)] {
            let qw = q.apply(w).finite().unwrap();
            assert!((qw - w.conj() - 0.5).norm() < 10.0 / w.norm());
        }
        assert_eq!(classify_basin_map(ComplexPoint::real(2.0), &q, 10_000), BasinClass::InBasin);
    }

    #[test]
    fn cycle_at_period_one_center() {
        let p = AntiRatParam::new(0.0, c(1.0, 0.0)).unwrap();
        let cyc = detect_cycle_r(&p, 1000).unwrap();
        assert_eq!(cyc.period, 1);
        assert!(cyc.multiplier.norm() < 1e-8);
        assert!(detect_cycle_r(&AntiRatParam::new(0.0, c(3.0, 0.0)).unwrap(), 1000).is_none());
    }

    #[test]
    fn conj_derivative_matches_difference() {
        let p = AntiRatParam::new(0.4, c(1.0, 0.5)).unwrap();
        let z = c(0.7, -0.3);
        let h = c(1e-7, 0.0);
        let fd = (r_finite(z + h, &p).finite().unwrap() - r_finite(z, &p).finite().unwrap()) / h.conj();
        assert!((fd - p.conj_derivative(z)).norm() < 1e-6);
        let q = ModelQ;
        let w = c(3.0, 1.0);
        let fd = (q.apply(w + h).finite().unwrap() - q.apply(w).finite().unwrap()) / h.conj();
        assert!((fd - q.conj_derivative(w)).norm() < 1e-6);
    }
}
