// Fibers of the Chebyshev cubic and of its affine conjugates `f_a`.

use schwarz_core::cubic::{f, fiber_f, fiber_fa, from_u};
use schwarz_core::{Complex64, SchwarzParam};

pub fn run() {
    for w in [Complex64::new(0.0, 0.0), Complex64::new(2.0, 0.0), Complex64::new(1.0, 3.0), Complex64::new(-40.0, 0.0)] {
        let fib = fiber_f(w);
        println!("f^-1({w}):");
        for u in fib.roots {
            println!("  u = {u:.12}   f(u) - w = {:.1e}", (f(u) - w).norm());
        }
        if fib.distinct().len() < 3 {
            println!("  (critical value: double root)");
        }
    }

    let a = SchwarzParam::from_re_im(3.0, 0.0).unwrap();
    let v = Complex64::new(5.0, -1.0);
    println!("f_a^-1({v}) in the z-chart, a = {}:", a.a);
    for z in fiber_fa(v, &a) {
        println!("  z = {z:.12}");
    }
    // the chart fixes 1 and sends 0 to a
    println!("from_u(a) = {}, from_u(1) = {}", from_u(a.a, a.a), from_u(Complex64::new(1.0, 0.0), a.a));
}

#[allow(dead_code)]
fn main() {
    run();
}
