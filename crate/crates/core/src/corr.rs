//! The 2:2 anti-holomorphic correspondence obtained by lifting `σ_a` through `f_a`.
//!
//! Everything here works in the `z`-chart where `Δ_a` is the unit disk and
//! `ι(z) = 1/z̄`; `u = a + (1 − a) z` is the chart of `f`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::complex::ComplexPoint;
use crate::cubic::{f, fiber_f, from_u, lex_order, to_u};
use crate::error::{Error, Result};
use crate::params::{classify_point, PointClass};
use crate::schwarz::{locate, sigma, Membership, SchwarzParam, MEMBERSHIP_TOL};

/// Anchor radius (u-chart) for continuing `τ_a`.
pub const ANCHOR_RADIUS: f64 = 1e3;
/// Budget used by [`lifted_partition`] when `deck_tau` validates its input.
pub const DECK_CHECK_BUDGET: usize = 500;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrPair {
    pub z: ComplexPoint,
    pub w: ComplexPoint,
    pub branch: u8,
}

/// `ι(z) = 1/z̄`.
pub fn iota(z: ComplexPoint) -> ComplexPoint {
    match z {
        ComplexPoint::Infinity => ComplexPoint::ZERO,
        ComplexPoint::Finite(z) if z.norm() == 0.0 => ComplexPoint::Infinity,
        ComplexPoint::Finite(z) => (1.0 / z.conj()).into(),
    }
}

/// The two roots `x ≠ u` of `f(x) = f(u)`, i.e. of `x² + ux + u² − 3 = 0`.
pub fn deflated_roots(u: Complex64) -> [Complex64; 2] {
    let s = (12.0 - 3.0 * u * u).sqrt();
    let mut r = [(-u + s) * 0.5, (-u - s) * 0.5];
    r.sort_by(lex_order);
    r
}

fn chart_roots(u: ComplexPoint, a: &SchwarzParam) -> [ComplexPoint; 2] {
    match u {
        ComplexPoint::Infinity => [ComplexPoint::Infinity; 2],
        ComplexPoint::Finite(u) => {
            let mut zs = deflated_roots(u).map(|x| from_u(x, a.a));
            zs.sort_by(lex_order);
            zs.map(ComplexPoint::from)
        }
    }
}

fn u_of(z: ComplexPoint, a: &SchwarzParam) -> ComplexPoint {
    match z {
        ComplexPoint::Infinity => ComplexPoint::Infinity,
        ComplexPoint::Finite(z) => to_u(z, a.a).into(),
    }
}

/// Both `w` with `f_a(w) = f_a(ι(z))`, `w ≠ ι(z)`.
///
/// At `z = 0` the quadratic degenerates (`ι(0) = ∞`); both solutions are then
/// reported as their common limit ∞.
pub fn corr_forward(z: ComplexPoint, a: &SchwarzParam) -> Result<[CorrPair; 2]> {
    let ws = chart_roots(u_of(iota(z), a), a);
    Ok([CorrPair { z, w: ws[0], branch: 0 }, CorrPair { z, w: ws[1], branch: 1 }])
}

/// Both `z` with `(z, w)` in the correspondence, `z ≠ ι(w)`.
pub fn corr_backward(w: ComplexPoint, a: &SchwarzParam) -> Result<[CorrPair; 2]> {
    let js = chart_roots(u_of(w, a), a);
    Ok([0u8, 1].map(|b| CorrPair { z: iota(js[b as usize]), w, branch: b }))
}

/// Fiber of `f_a` over `f_a(w)` split into the disk root and the two others.
fn va_split(w: Complex64, a: &SchwarzParam) -> Result<(Complex64, [Complex64; 2])> {
    let u = to_u(w, a.a);
    let v = f(u);
    let loc = locate(v, a, MEMBERSHIP_TOL)?;
    if loc.membership == Membership::Exterior {
        return Err(Error::NotInVa);
    }
    let disk = loc.root.expect("closed domain has a disk root");
    let mut rest: Vec<Complex64> = fiber_f(v).roots.to_vec();
    let idx = rest
        .iter()
        .enumerate()
        .min_by(|p, q| (p.1 - disk).norm().total_cmp(&(q.1 - disk).norm()))
        .map(|(i, _)| i)
        .unwrap();
    rest.remove(idx);
    let scale = u.norm().max(1.0);
    let on_boundary = ((u - a.a).norm() - a.radius).abs() <= MEMBERSHIP_TOL;
    if (u - disk).norm() <= 1e-9 * scale && !on_boundary {
        return Err(Error::NotInVa);
    }
    Ok((from_u(disk, a.a), [from_u(rest[0], a.a), from_u(rest[1], a.a)]))
}

/// The fiber root in the closed disk over `f_a(w)`.
pub fn deck_g1(w: ComplexPoint, a: &SchwarzParam) -> Result<ComplexPoint> {
    let w = w.finite().ok_or(Error::NotInVa)?;
    Ok(va_split(w, a)?.0.into())
}

/// The other non-disk root over `f_a(w)`.
pub fn deck_g2(w: ComplexPoint, a: &SchwarzParam) -> Result<ComplexPoint> {
    let w = w.finite().ok_or(Error::NotInVa)?;
    let (_, rest) = va_split(w, a)?;
    let pick = if (rest[0] - w).norm() >= (rest[1] - w).norm() { rest[0] } else { rest[1] };
    Ok(pick.into())
}

/// The critical point of `f_a` fixed by `g₂`.
pub fn g2_fixed_point(a: &SchwarzParam) -> Complex64 {
    (a.a + 1.0) / (a.a - 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LiftedClass {
    LiftedTiling { rank: usize },
    LiftedNonEscaping { iterations: usize },
}

pub fn lifted_partition(z: ComplexPoint, a: &SchwarzParam, max_iter: usize) -> Result<LiftedClass> {
    let v = crate::cubic::eval_fa(z, a);
    Ok(match classify_point(v, a, max_iter)? {
        PointClass::Tile { rank } => LiftedClass::LiftedTiling { rank },
        PointClass::NonEscaping { iterations } => LiftedClass::LiftedNonEscaping { iterations },
    })
}

/// Order-3 deck transformation, continued from `ω·u₀` at the anchor along the
/// straight (radial) path to `z`.
pub fn deck_tau(z: ComplexPoint, a: &SchwarzParam, path_steps: usize) -> Result<ComplexPoint> {
    let z = match z {
        ComplexPoint::Infinity => return Ok(ComplexPoint::Infinity),
        ComplexPoint::Finite(z) => z,
    };
    if let LiftedClass::LiftedNonEscaping { .. } = lifted_partition(z.into(), a, DECK_CHECK_BUDGET)? {
        return Err(Error::NotInDomain);
    }
    let target = to_u(z, a.a);
    if target.norm() == 0.0 {
        return Err(Error::PathObstructed { step: 0 });
    }
    let anchor = target / target.norm() * ANCHOR_RADIUS;
    let omega = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
    let steps = path_steps.max(1);
    let mut tau = omega * anchor;
    for k in 0..=steps {
        // the path is radial; steps are geometric in the radius so they shrink with |u|
        let s = k as f64 / steps as f64;
        let ut = if k == steps { target } else { target * (ANCHOR_RADIUS / target.norm()).powf(1.0 - s) };
        // Newton on f(x) = f(u_t) seeded from the previous value
        let fv = f(ut);
        let mut x = tau;
        for _ in 0..8 {
            let d = 3.0 * (x * x - 1.0);
            if d.norm() == 0.0 {
                break;
            }
            let dx = (f(x) - fv) / d;
            x -= dx;
            if dx.norm() <= 1e-15 * x.norm().max(1.0) {
                break;
            }
        }
        let roots = deflated_roots(ut);
        let gap = (roots[0] - roots[1]).norm();
        let (near, far) = if (roots[0] - x).norm() <= (roots[1] - x).norm() { (roots[0], roots[1]) } else { (roots[1], roots[0]) };
        let jumped = (near - tau).norm() > 0.25 * gap || (far - tau).norm() < 2.0 * (near - tau).norm();
        if !x.re.is_finite() || (x - near).norm() > 1e-8 * near.norm().max(1.0) || jumped {
            return Err(Error::PathObstructed { step: k });
        }
        tau = near;
    }
    Ok(from_u(tau, a.a).into())
}

/// `|f_a(g₁(ι(z))) − σ_a(f_a(z))|` for `z` in the closed disk.
pub fn conjugacy_check(z: ComplexPoint, a: &SchwarzParam) -> Result<f64> {
    let lhs = crate::cubic::eval_fa(deck_g1(iota(z), a)?, a);
    let rhs = sigma(crate::cubic::eval_fa(z, a), a)?;
    Ok(lhs.dist(rhs))
}

/// A letter of the `ι`/`τ` alphabet.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gen {
    Iota,
    Tau(u8),
}

/// Generators `τ∘ι`, `τ²∘ι` and their inverses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorrLetter {
    A,
    AInv,
    B,
    BInv,
}

impl CorrLetter {
    pub const ALL: [CorrLetter; 4] = [CorrLetter::A, CorrLetter::AInv, CorrLetter::B, CorrLetter::BInv];

    fn inverse(self) -> Self {
        match self {
            CorrLetter::A => CorrLetter::AInv,
            CorrLetter::AInv => CorrLetter::A,
            CorrLetter::B => CorrLetter::BInv,
            CorrLetter::BInv => CorrLetter::B,
        }
    }

    /// Expansion, leftmost letter applied last.
    fn expand(self) -> [Gen; 2] {
        match self {
            CorrLetter::A => [Gen::Tau(1), Gen::Iota],
            CorrLetter::AInv => [Gen::Iota, Gen::Tau(2)],
            CorrLetter::B => [Gen::Tau(2), Gen::Iota],
            CorrLetter::BInv => [Gen::Iota, Gen::Tau(1)],
        }
    }
}

/// Reduces a word in `ι`, `τ` using `ι² = τ³ = id`.
pub fn normal_form(word: &[CorrLetter]) -> Vec<Gen> {
    let mut out: Vec<Gen> = Vec::new();
    for g in word.iter().flat_map(|l| l.expand()) {
        match (out.last().copied(), g) {
            (Some(Gen::Iota), Gen::Iota) => {
                out.pop();
            }
            (Some(Gen::Tau(j)), Gen::Tau(k)) => {
                out.pop();
                let m = (j + k) % 3;
                if m != 0 {
                    out.push(Gen::Tau(m));
                }
            }
            _ => out.push(g),
        }
    }
    out
}

/// Freely reduced words of the given length in `A, A⁻¹, B, B⁻¹`.
pub fn reduced_words(len: usize) -> Vec<Vec<CorrLetter>> {
    let mut words: Vec<Vec<CorrLetter>> = vec![Vec::new()];
    for _ in 0..len {
        words = words
            .into_iter()
            .flat_map(|w| {
                CorrLetter::ALL.into_iter().filter_map(move |l| {
                    if w.last().is_some_and(|&p| p == l.inverse()) {
                        return None;
                    }
                    let mut v = w.clone();
                    v.push(l);
                    Some(v)
                })
            })
            .collect();
    }
    words
}

/// Applies a word (rightmost letter first), with `τ` continued over `path_steps`.
pub fn apply_word(word: &[CorrLetter], z: ComplexPoint, a: &SchwarzParam, path_steps: usize) -> Result<ComplexPoint> {
    let gens: Vec<Gen> = word.iter().flat_map(|l| l.expand()).collect();
    let mut x = z;
    for g in gens.iter().rev() {
        x = match g {
            Gen::Iota => iota(x),
            Gen::Tau(k) => {
                let mut y = x;
                for _ in 0..*k {
                    y = deck_tau(y, a, path_steps)?;
                }
                y
            }
        };
    }
    Ok(x)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrbitNode {
    pub id: usize,
    pub parent: Option<usize>,
    pub branch: Option<u8>,
    pub z: ComplexPoint,
    pub class: Option<LiftedClass>,
}

/// Forward images of `seed` under the correspondence, breadth first.
pub fn orbit_tree(seed: ComplexPoint, a: &SchwarzParam, steps: usize, max_iter: usize) -> Result<Vec<OrbitNode>> {
    let class = |z| lifted_partition(z, a, max_iter).ok();
    let mut nodes = vec![OrbitNode { id: 0, parent: None, branch: None, z: seed, class: class(seed) }];
    let mut frontier = vec![0usize];
    for _ in 0..steps {
        let mut next = Vec::with_capacity(frontier.len() * 2);
        for &pid in &frontier {
            for pair in corr_forward(nodes[pid].z, a)? {
                let id = nodes.len();
                nodes.push(OrbitNode { id, parent: Some(pid), branch: Some(pair.branch), z: pair.w, class: class(pair.w) });
                next.push(id);
            }
        }
        frontier = next;
    }
    Ok(nodes)
}

pub fn orbit_tree_csv(nodes: &[OrbitNode]) -> String {
    let mut out = String::from("node_id,parent_id,branch,z_re,z_im,class\n");
    for n in nodes {
        let (re, im) = match n.z {
            ComplexPoint::Finite(z) => (z.re.to_string(), z.im.to_string()),
            ComplexPoint::Infinity => ("inf".into(), "inf".into()),
        };
        let class = match n.class {
            Some(LiftedClass::LiftedTiling { rank }) => format!("tiling:{rank}"),
            Some(LiftedClass::LiftedNonEscaping { .. }) => "non_escaping".into(),
            None => "unknown".into(),
        };
        out.push_str(&format!(
            "{},{},{},{re},{im},{class}\n",
            n.id,
            n.parent.map(|p| p.to_string()).unwrap_or_default(),
            n.branch.map(|b| b.to_string()).unwrap_or_default()
        ));
    }
    out
}
