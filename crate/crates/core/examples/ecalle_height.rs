// Écalle heights and connectedness in the parabolic anti-rational family.

use schwarz_core::antirat::{ecalle_height_detail, in_connectedness_l0, scan, scan_csv, AntiRatParam, ModelQ};
use schwarz_core::Complex64;

pub fn run() {
    let q = ecalle_height_detail(&ModelQ, 1e-8).unwrap();
    println!("model z̄ + z̄²: height {:.3e} (spread {:.1e}, {} samples)", q.height, q.spread, q.samples);

    for (alpha, a) in [(0.0, Complex64::new(3.0, 0.0)), (0.0, Complex64::new(1.0, 0.0)), (0.1, Complex64::new(2.5, 0.5))] {
        let p = AntiRatParam::new(alpha, a).unwrap();
        match ecalle_height_detail(&p, 1e-8) {
            Ok(h) => println!("alpha = {alpha}, A = {a}: height {:.6}", h.height),
            Err(e) => println!("alpha = {alpha}, A = {a}: {e}"),
        }
        println!("  connected: {}", in_connectedness_l0(&p, 2000).unwrap());
    }

    let grid: Vec<(f64, Complex64)> = (0..5).map(|k| (0.0, Complex64::new(0.5 + 0.75 * k as f64, 0.0))).collect();
    print!("{}", scan_csv(&scan(&grid, 1e-8, 2000)));
}

#[allow(dead_code)]
fn main() {
    run();
}
