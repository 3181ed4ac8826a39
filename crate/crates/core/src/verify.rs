//! The acceptance checks, runnable from the command line and the test suite.

use std::f64::consts::PI;
use std::fmt;
use std::time::{Duration, Instant};

use num_complex::{Complex, Complex64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use twofloat::TwoFloat;

use crate::antirat::{ecalle_height_detail, in_connectedness_l0, AntiRatParam, ModelQ};
use crate::complex::ComplexPoint;
use crate::corr::{conjugacy_check, corr_forward, deck_g2, deck_tau, g2_fixed_point, iota, lifted_partition, LiftedClass};
use crate::cubic::{eval_fa, fiber_fa, from_u};
use crate::params::{classify_parameter, refine_cycle, tangency_poly, ParamClass, CYCLE_EPS};
use crate::render::{render, to_ppm, Palette, PixelKind, Plane, RasterJob, Window, DEFAULT_BUDGET};
use crate::schwarz::{critical_points, puiseux_offset, sigma, SchwarzParam};
use crate::tri_group::{angle_b, angle_rho, circle_dist, conjugacy_e, count_dyadic_angles, rho_vertex_preimages, AngleCoord};

/// How much of the suite to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Tier {
    /// Exact landmark values only.
    Fast,
    /// Adds the numeric asymptotics.
    Standard,
    /// Adds the high-budget scans and the render check.
    Slow,
}

#[derive(Debug, Clone)]
pub struct CriterionReport {
    pub id: u8,
    pub title: &'static str,
    /// All numeric checks held.
    pub checks_ok: bool,
    pub elapsed: Duration,
    pub limit: Duration,
    pub detail: String,
}

impl CriterionReport {
    pub fn passed(&self) -> bool {
        self.checks_ok && self.elapsed <= self.limit
    }
}

impl fmt::Display for CriterionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} criterion {} ({}) {:.2}s/{}s: {}",
            if self.passed() { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.elapsed.as_secs_f64(),
            self.limit.as_secs(),
            self.detail
        )
    }
}

/// Criterion ids run at a tier.
pub fn criteria_for(tier: Tier) -> Vec<u8> {
    match tier {
        Tier::Fast => vec![1, 3, 5],
        Tier::Standard => vec![1, 2, 3, 4, 5, 6, 7],
        Tier::Slow => (1..=8).collect(),
    }
}

pub fn run(tier: Tier) -> Vec<CriterionReport> {
    criteria_for(tier).into_iter().map(run_criterion).collect()
}

/// Collects named boolean checks with a short summary.
struct Checks {
    ok: bool,
    notes: Vec<String>,
}

impl Checks {
    fn new() -> Self {
        Checks { ok: true, notes: Vec::new() }
    }

    fn check(&mut self, name: &str, ok: bool, note: String) {
        self.ok &= ok;
        if ok {
            self.notes.push(format!("{name} {note}"));
        } else {
            self.notes.push(format!("{name} FAILED {note}"));
        }
    }
}

pub fn run_criterion(id: u8) -> CriterionReport {
    let (title, limit, f): (&'static str, u64, fn(&mut Checks)) = match id {
        1 => ("landmark values", 1, landmarks),
        2 => ("real slices", 10, real_slices),
        3 => ("period-2 centers", 5, period_two),
        4 => ("cusp asymptotics", 5, cusp),
        5 => ("symbolic dynamics", 5, symbolic),
        6 => ("anti-rational family", 30, antirational),
        7 => ("correspondence", 30, correspondence),
        8 => ("rendering", 60, rendering),
        _ => panic!("no criterion {id}"),
    };
    let mut checks = Checks::new();
    let start = Instant::now();
    f(&mut checks);
    CriterionReport {
        id,
        title,
        checks_ok: checks.ok,
        elapsed: start.elapsed(),
        limit: Duration::from_secs(limit),
        detail: checks.notes.join("; "),
    }
}

fn param(re: f64, im: f64) -> SchwarzParam {
    SchwarzParam::from_re_im(re, im).expect("fixed parameters are valid")
}

fn sig(w: Complex64, a: &SchwarzParam) -> Option<Complex64> {
    sigma(w.into(), a).ok()?.finite()
}

fn landmarks(c: &mut Checks) {
    let a = param(2.5, 0.0);
    let s2 = sig(Complex64::new(2.0, 0.0), &a);
    let sm2 = sig(Complex64::new(-2.0, 0.0), &a);
    let e1 = s2.map_or(f64::INFINITY, |v| (v + 2.0).norm());
    let e2 = sm2.map_or(f64::INFINITY, |v| (v + 2.0).norm());
    c.check("sigma_5/2(2)=-2", e1 < 1e-10, format!("err={e1:.1e}"));
    c.check("sigma_5/2(-2)=-2", e2 < 1e-10, format!("err={e2:.1e}"));

    let a3 = param(3.0, 0.0);
    let cv = critical_points(&a3).0.dist(ComplexPoint::real(2.0));
    c.check("c(3)=2", cv < 1e-10, format!("err={cv:.1e}"));
    match classify_parameter(&a3, 10_000, CYCLE_EPS) {
        Ok(ParamClass::CycleDetected { period: 1, multiplier_sq, representative }) => {
            let d = representative.dist(ComplexPoint::real(2.0));
            c.check("a=3 superattracting", multiplier_sq.norm() < 1e-10 && d < 1e-10, format!("|mult|={:.1e}", multiplier_sq.norm()));
        }
        other => c.check("a=3 superattracting", false, format!("{other:?}")),
    }
    let a2 = param(2.0, 0.0);
    let s = sigma(ComplexPoint::real(2.0), &a2);
    let class = classify_parameter(&a2, 10_000, CYCLE_EPS);
    let ok = matches!(s, Ok(ComplexPoint::Infinity)) && matches!(class, Ok(ParamClass::Escaping { depth: 1, .. }));
    c.check("a=2 depth 1", ok, String::new());

    let t1 = tangency_poly(0.0, 2.0 * 2f64.sqrt()).abs();
    let t2 = tangency_poly(4.0, 3f64.sqrt()).abs();
    c.check("tangency endpoints", t1 < 1e-9 && t2 < 1e-9, format!("{t1:.1e},{t2:.1e}"));
}

fn real_slices(c: &mut Checks) {
    let classify = |x: f64| classify_parameter(&param(x, 0.0), 10_000, CYCLE_EPS);
    let low: Vec<f64> = (1..=50).map(|i| 1.51 + 0.98 * i as f64 / 51.0).collect();
    let bad_low = low.iter().filter(|&&x| !matches!(classify(x), Ok(ParamClass::Escaping { depth: 1, .. }))).count();
    c.check("(1.51,2.49) depth 1", bad_low == 0, format!("{} of 50 off", bad_low));

    let high: Vec<f64> = (0..30).map(|j| 2.5 + 1.45 * j as f64 / 29.0).collect();
    let bad_high = high.iter().filter(|&&x| !matches!(classify(x), Ok(ref k) if !k.is_escaping())).count();
    c.check("[2.5,3.95] non-escaping", bad_high == 0, format!("{} of 30 off", bad_high));

    for x in [3.2, 3.5, 3.8] {
        match classify(x) {
            Ok(ParamClass::CycleDetected { period: 1, multiplier_sq, representative }) => {
                let d = representative.dist(ComplexPoint::real(-2.0));
                c.check(&format!("fixed point a={x}"), d > 0.1 && multiplier_sq.norm() < 1.0, format!("|p+2|={d:.3}"));
            }
            other => c.check(&format!("fixed point a={x}"), false, format!("{other:?}")),
        }
    }
}

/// `σ_a^{∘2}(2) − 2` as a function of the parameter.
fn two_cycle_defect(a: Complex64) -> Option<Complex64> {
    let p = SchwarzParam::new(a).ok()?;
    Some(sig(sig(Complex64::new(2.0, 0.0), &p)?, &p)? - 2.0)
}

/// Newton on the real 2×2 system `σ_a^{∘2}(2) = 2` in the parameter.
fn refine_center(mut a: Complex64) -> Option<Complex64> {
    let h = 1e-7;
    for _ in 0..8 {
        let f0 = two_cycle_defect(a)?;
        if f0.norm() < 1e-14 {
            break;
        }
        let fx = (two_cycle_defect(a + h)? - f0) / h;
        let fy = (two_cycle_defect(a + Complex64::new(0.0, h))? - f0) / h;
        let det = fx.re * fy.im - fy.re * fx.im;
        if det.abs() < 1e-300 {
            return None;
        }
        let dx = (f0.re * fy.im - fy.re * f0.im) / det;
        let dy = (fx.re * f0.im - f0.re * fx.im) / det;
        a -= Complex64::new(dx, dy);
    }
    Some(a)
}

fn period_two(c: &mut Checks) {
    let centers = [Complex64::new((5.0 + 33f64.sqrt()) / 4.0, 0.0), Complex64::new(3.5, 3f64.sqrt() / 2.0)];
    for a0 in centers {
        let Some(a) = refine_center(a0) else {
            c.check(&format!("center {a0}"), false, "refinement failed".into());
            continue;
        };
        let defect = two_cycle_defect(a).map_or(f64::INFINITY, |d| d.norm());
        let p = param(a.re, a.im);
        let cycle = refine_cycle(Complex64::new(2.0, 0.0), &p, 2);
        let ok = defect < 1e-8 && (a - a0).norm() < 1e-6 && cycle.is_some_and(|r| r.period == 2);
        c.check(&format!("center {a0}"), ok, format!("|s^2(2)-2|={defect:.1e} shift={:.1e}", (a - a0).norm()));
    }
}

type C2 = Complex<TwoFloat>;

fn c2(z: Complex64) -> C2 {
    Complex::new(TwoFloat::from(z.re), TwoFloat::from(z.im))
}

/// Root of `3ε² + ε³ = δ` near `start`, by Newton in double-double arithmetic.
fn cusp_root_dd(delta: C2, start: C2) -> C2 {
    let three = TwoFloat::from(3.0);
    let six = TwoFloat::from(6.0);
    let mut e = start;
    for _ in 0..20 {
        let g = e * e * three + e * e * e - delta;
        let dg = e * six + e * e * three;
        e = e - g / dg;
    }
    e
}

/// Least-squares slope of `log y` against `log x`.
fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

fn cusp(c: &mut Checks) {
    let deltas = [1e-4, 1e-5, 1e-6];
    for (re, im) in [(3.0, 0.0), (2.8, 0.4)] {
        let a = param(re, im);
        let ray = Complex64::from_polar(1.0, 2.0 * a.theta0);
        let ratios: Vec<Complex64> = deltas
            .iter()
            .map(|&d| {
                let w = -2.0 + d * ray;
                sig(w, &a).map_or(Complex64::new(f64::NAN, 0.0), |s| (s - w) / (d.powf(1.5) * ray))
            })
            .collect();
        // the first correction is linear in √δ
        let xs: Vec<f64> = deltas.iter().map(|d| d.sqrt()).collect();
        let n = xs.len() as f64;
        let mx = xs.iter().sum::<f64>() / n;
        let my = ratios.iter().sum::<Complex64>() / n;
        let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
        let sxy: Complex64 = xs.iter().zip(&ratios).map(|(x, y)| (y - my) * (x - mx)).sum();
        let limit = my - sxy / sxx * mx;
        let expected = 2.0 / (3.0 * 3f64.sqrt()) * (4.0 - re) / a.radius;
        let rel = (limit - expected).norm() / expected;
        c.check(&format!("ratio a={}", a.a), rel < 0.01, format!("limit={:.6} expected={expected:.6} rel={rel:.1e}", limit.re));

        let rot = c2(a.rotation());
        let errs: Vec<f64> = deltas
            .iter()
            .map(|&d| {
                let delta = c2(d * ray);
                let series = puiseux_offset(delta, rot, 6);
                let exact = cusp_root_dd(delta, series);
                f64::from((series - exact).norm())
            })
            .collect();
        let order = loglog_slope(&deltas, &errs);
        let cmax = errs.iter().zip(&deltas).map(|(e, d)| e / d.powi(3)).fold(0.0, f64::max);
        c.check(&format!("puiseux a={}", a.a), order >= 2.8, format!("order={order:.3} C={cmax:.2e}"));
    }
}

fn symbolic(c: &mut Checks) {
    let mut bad = Vec::new();
    for k in 1..=12u32 {
        let n = count_dyadic_angles(k).unwrap_or(0);
        let brute = rho_vertex_preimages(k).len() as u64;
        if n != 1 << (k - 1) || n != brute {
            bad.push(k);
        }
    }
    c.check("dyadic counts k=1..12", bad.is_empty(), format!("bad k {bad:?}"));

    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let tol = 2f64.powi(-28);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let theta = AngleCoord::new(rng.gen_range(1.0 / 3.0..2.0 / 3.0)).expect("in range");
        let lhs = conjugacy_e(angle_rho(theta), 48);
        let rhs = conjugacy_e(theta, 48).map(angle_b);
        worst = match (lhs, rhs) {
            (Ok(l), Ok(r)) => worst.max(circle_dist(l, r)),
            _ => f64::INFINITY,
        };
    }
    c.check("E∘rho = B∘E", worst <= tol, format!("max={worst:.1e}"));
    let e3 = conjugacy_e(AngleCoord::new(1.0 / 3.0).unwrap(), 48).map_or(1.0, |v| circle_dist(v, 0.0));
    let e2 = conjugacy_e(AngleCoord::new(0.5).unwrap(), 48).map_or(1.0, |v| circle_dist(v, 0.5));
    c.check("E(1/3)=0, E(1/2)=1/2", e3 <= tol && e2 <= tol, format!("{e3:.1e},{e2:.1e}"));
}

/// Tolerance of the Fatou coordinate limits in the height checks.
const FATOU_TOL: f64 = 1e-8;

fn antirational(c: &mut Checks) {
    let p3 = AntiRatParam::new(0.0, Complex64::new(3.0, 0.0)).expect("valid");
    match ecalle_height_detail(&p3, FATOU_TOL) {
        Ok(h) => {
            c.check("h(0,3)=0", h.height.abs() < 1e-4, format!("h={:.1e}", h.height));
            c.check("normalization (0,3)", h.spread < 1e-6 && h.samples >= 10, format!("spread={:.1e}", h.spread));
        }
        Err(e) => c.check("h(0,3)=0", false, e.to_string()),
    }
    match ecalle_height_detail(&ModelQ, FATOU_TOL) {
        Ok(h) => {
            c.check("h(q)=0", h.height.abs() < 1e-4, format!("h={:.1e}", h.height));
            c.check("normalization q", h.spread < 1e-6 && h.samples >= 10, format!("spread={:.1e}", h.spread));
        }
        Err(e) => c.check("h(q)=0", false, e.to_string()),
    }
    let conn3 = in_connectedness_l0(&p3, 10_000);
    let p1 = AntiRatParam::new(0.0, Complex64::new(1.0, 0.0)).expect("valid");
    let conn1 = in_connectedness_l0(&p1, 10_000);
    c.check("connectedness (0,3)=false (0,1)=true", matches!((conn3, conn1), (Ok(false), Ok(true))), String::new());
}

fn rel_close(x: ComplexPoint, y: ComplexPoint, tol: f64) -> bool {
    match (x, y) {
        (ComplexPoint::Finite(p), ComplexPoint::Finite(q)) => (p - q).norm() <= tol * p.norm().max(q.norm()).max(1.0),
        (p, q) => p == q,
    }
}

fn random_disk(rng: &mut ChaCha8Rng, r: f64) -> Complex64 {
    Complex64::from_polar(r * rng.gen::<f64>().sqrt(), 2.0 * PI * rng.gen::<f64>())
}

fn correspondence(c: &mut Checks) {
    let params = [param(3.0, 0.0), param(2.8, 0.4)];
    let mut rng = ChaCha8Rng::seed_from_u64(7);

    let mut bad = 0;
    for i in 0..1000 {
        let a = &params[i % 2];
        let z = Complex64::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
        let target = eval_fa(iota(z.into()), a);
        match corr_forward(z.into(), a) {
            Ok(pairs) => bad += pairs.iter().filter(|q| !rel_close(eval_fa(q.w, a), target, 1e-9)).count(),
            Err(_) => bad += 2,
        }
    }
    c.check("defining identity", bad == 0, format!("{bad} of 2000 off"));

    let (mut tested, mut bad) = (0, 0);
    for i in 0..2000 {
        let a = &params[i % 2];
        let w = iota(random_disk(&mut rng, 1.0).into());
        if let Ok(g) = deck_g2(w, a) {
            tested += 1;
            if !deck_g2(g, a).is_ok_and(|gg| rel_close(gg, w, 1e-9)) {
                bad += 1;
            }
        }
    }
    let fixed_ok = params.iter().all(|a| {
        let cp = ComplexPoint::from(g2_fixed_point(a));
        deck_g2(cp, a).is_ok_and(|g| g.approx_eq(cp, 1e-9))
    });
    c.check("g2 involution", bad == 0 && tested >= 100, format!("{bad} of {tested} off"));
    c.check("g2 fixes (a+1)/(a-1)", fixed_ok, String::new());

    let (mut tau_bad, mut cover_bad) = (0, 0);
    for i in 0..100 {
        let a = &params[i % 2];
        let u = Complex64::from_polar(rng.gen_range(10.0..100.0), 2.0 * PI * rng.gen::<f64>());
        let z = ComplexPoint::from(from_u(u, a.a));
        let orbit = deck_tau(z, a, 200).and_then(|t1| Ok((t1, deck_tau(t1, a, 200)?))).and_then(|(t1, t2)| Ok((t1, t2, deck_tau(t2, a, 200)?)));
        let Ok((t1, t2, t3)) = orbit else {
            tau_bad += 1;
            continue;
        };
        if !rel_close(t3, z, 1e-8) {
            tau_bad += 1;
        }
        let v = eval_fa(z, a).finite().expect("finite sample");
        let fiber = fiber_fa(v, a);
        let covered = [z, t1, t2].iter().all(|p| fiber.iter().any(|&r| rel_close(*p, r.into(), 1e-8)))
            && fiber.iter().all(|&r| [z, t1, t2].iter().any(|p| rel_close(*p, r.into(), 1e-8)));
        if !covered {
            cover_bad += 1;
        }
    }
    c.check("tau^3=id", tau_bad == 0, format!("{tau_bad} of 100 off"));
    c.check("fiber coverage", cover_bad == 0, format!("{cover_bad} of 100 off"));

    // admissible: the class of z is settled well inside the budget
    let budget = 200;
    let is_tiling = |k: LiftedClass| matches!(k, LiftedClass::LiftedTiling { .. });
    let (mut tested, mut bad, mut non_escaping, mut attempts) = (0, 0, 0, 0);
    while tested < 200 && attempts < 20_000 {
        attempts += 1;
        let a = &params[attempts % 2];
        let z = if attempts % 3 == 0 {
            Complex64::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0))
        } else {
            // near the fiber of the critical value, where non-escaping points live
            let seed = if attempts % 3 == 1 { 2.0 } else { -1.0 };
            from_u(seed + random_disk(&mut rng, 0.3), a.a)
        };
        let Ok(class) = lifted_partition(z.into(), a, 2 * budget) else { continue };
        if matches!(class, LiftedClass::LiftedTiling { rank } if rank + 1 >= budget) {
            continue;
        }
        let Ok(pairs) = corr_forward(z.into(), a) else { continue };
        let Ok(images) = pairs.iter().map(|q| lifted_partition(q.w, a, budget)).collect::<Result<Vec<_>, _>>() else {
            continue;
        };
        tested += 1;
        if !is_tiling(class) {
            non_escaping += 1;
        }
        if images.iter().any(|&k| is_tiling(k) != is_tiling(class)) {
            bad += 1;
        }
    }
    c.check(
        "partition invariance",
        bad == 0 && tested == 200 && non_escaping > 0 && non_escaping < tested,
        format!("{bad} of {tested} off, {non_escaping} non-escaping"),
    );

    let (mut tested, mut worst) = (0, 0.0f64);
    let mut attempts = 0;
    while tested < 100 && attempts < 10_000 {
        attempts += 1;
        let a = &params[attempts % 2];
        if let Ok(r) = conjugacy_check(random_disk(&mut rng, 1.0).into(), a) {
            tested += 1;
            worst = worst.max(r);
        }
    }
    c.check("conjugacy residual", tested == 100 && worst < 1e-9, format!("max={worst:.1e} over {tested}"));
}

/// The acceptance render job.
pub fn acceptance_job() -> RasterJob {
    RasterJob {
        plane: Plane::Parameter,
        window: Window::from_bounds((1.6, 3.9), (-1.2, 1.2)),
        resolution: (400, 400),
        max_iter: DEFAULT_BUDGET,
        palette: Palette::Classic,
    }
}

fn rendering(c: &mut Checks) {
    let job = acceptance_job();
    let (Ok(one), Ok(four)) = (render(&job, Some(1)), render(&job, Some(4))) else {
        c.check("render", false, "render failed".into());
        return;
    };
    let same = to_ppm(&one, job.palette) == to_ppm(&four, job.palette);
    c.check("thread determinism", same, "1 vs 4 threads".into());

    // the grid has an even row count, so the real axis gets its own row
    let row = RasterJob {
        window: Window { height: job.window.height / job.resolution.1 as f64, ..job.window },
        resolution: (job.resolution.0, 1),
        ..job
    };
    match render(&row, None) {
        Ok(axis) => {
            let mut bad = 0;
            let mut checked = 0;
            for i in 0..axis.width {
                let x = row.pixel_point(i, 0).re;
                let p = axis.get(i, 0);
                let ok = if x > 1.51 && x < 2.49 {
                    p.kind == PixelKind::Escaping && p.value == 1
                } else if (2.5..=3.95).contains(&x) {
                    matches!(p.kind, PixelKind::Cycle | PixelKind::NonEscaping)
                } else {
                    continue;
                };
                checked += 1;
                if !ok {
                    bad += 1;
                }
            }
            c.check("real-axis row", bad == 0 && checked > 300, format!("{bad} of {checked} off"));
        }
        Err(e) => c.check("real-axis row", false, e.to_string()),
    }

    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut bad = 0;
    for _ in 0..1000 {
        let i = rng.gen_range(0..one.width);
        let j = rng.gen_range(0..one.height / 2);
        let (p, q) = (one.get(i, j), one.get(i, one.height - 1 - j));
        if p.kind != q.kind || p.value != q.value || (p.shade - q.shade).abs() > 1e-6 {
            bad += 1;
        }
    }
    c.check("conjugation symmetry", bad == 0, format!("{bad} of 1000 pairs differ"));
}
