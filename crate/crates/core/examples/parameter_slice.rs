// Classifying parameters: landmarks, a real slice and a period-2 center.

use schwarz_core::params::{classify_parameter, in_s, real_slice_table, refine_cycle, slice_csv};
use schwarz_core::{Complex64, SchwarzParam};

pub fn run() {
    for (re, im) in [(2.0, 0.0), (3.0, 0.0), (2.6, 0.0), (3.5, 0.866_025_403_784_438_6)] {
        let a = SchwarzParam::from_re_im(re, im).unwrap();
        let class = classify_parameter(&a, 10_000, 1e-10).unwrap();
        println!("a = {:<28} in S: {:<5}  {class}", a.a.to_string(), in_s(a.a).unwrap());
    }

    let a = SchwarzParam::from_re_im(3.0, 0.0).unwrap();
    if let Some(cyc) = refine_cycle(Complex64::new(2.0, 0.0), &a, 1) {
        println!("a = 3: fixed point {} with |multiplier^2| = {:.1e}", cyc.point, cyc.multiplier_sq.norm());
    }

    let rows = real_slice_table(1.6, 3.8, 0.2, 2000).unwrap();
    print!("{}", slice_csv(&rows));
}

#[allow(dead_code)]
fn main() {
    run();
}
