// The Schwarz reflection of `Ω_a`: membership, reflection, critical values
// and the cusp expansion at the singular boundary point.

use schwarz_core::schwarz::{critical_points, cusp_coefficient, omega_membership, sigma, sigma_with_derivative};
use schwarz_core::{Complex64, ComplexPoint, SchwarzParam};

pub fn run() {
    let a = SchwarzParam::from_re_im(3.0, 0.0).unwrap();
    println!("a = {}  disk radius = {:.6}", a.a, a.radius);
    let (c_star, c) = critical_points(&a);
    println!("critical point {c_star} -> critical value {c}");

    for w in [ComplexPoint::real(2.0), ComplexPoint::real(-2.0), Complex64::new(0.5, 1.0).into(), ComplexPoint::real(30.0)] {
        let m = omega_membership(w, &a, 1e-12).unwrap();
        match sigma(w, &a) {
            Ok(s) => println!("{w:>24}  {m:?}  sigma = {s}"),
            Err(e) => println!("{w:>24}  {m:?}  sigma undefined: {e}"),
        }
    }

    let (s, ds) = sigma_with_derivative(Complex64::new(0.5, 1.0), &a).unwrap();
    println!("sigma(0.5+i) = {s}, d sigma / d wbar = {ds:.6}");

    for a in [SchwarzParam::from_re_im(2.9, 0.0).unwrap(), SchwarzParam::from_re_im(2.7, 0.4).unwrap()] {
        let cc = cusp_coefficient(&a).unwrap();
        println!("a = {}: cusp order {} coefficient {:.6} {:?}", a.a, cc.order(), cc.coefficient, cc.direction);
    }
}

#[allow(dead_code)]
fn main() {
    run();
}
