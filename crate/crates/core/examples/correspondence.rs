// The 2:2 correspondence: forward branches, deck transformations, group
// words and a small orbit tree.

use schwarz_core::corr::{
    apply_word, corr_forward, deck_g2, deck_tau, g2_fixed_point, iota, orbit_tree, orbit_tree_csv, CorrLetter,
};
use schwarz_core::cubic::{eval_fa, from_u};
use schwarz_core::{Complex64, ComplexPoint, SchwarzParam};

pub fn run() {
    let a = SchwarzParam::from_re_im(3.0, 0.0).unwrap();
    let z = ComplexPoint::from(Complex64::new(0.3, 0.2));
    for pair in corr_forward(z, &a).unwrap() {
        println!("branch {}: {z} -> {}", pair.branch, pair.w);
        println!("  f_a(w) = {}  f_a(iota z) = {}", eval_fa(pair.w, &a), eval_fa(iota(z), &a));
    }

    let fixed = g2_fixed_point(&a);
    println!("g2 fixes {fixed}: g2(fixed) = {}", deck_g2(fixed.into(), &a).unwrap());

    let far = ComplexPoint::from(from_u(Complex64::new(12.0, 5.0), a.a));
    let t1 = deck_tau(far, &a, 200).unwrap();
    let t3 = deck_tau(deck_tau(t1, &a, 200).unwrap(), &a, 200).unwrap();
    println!("tau: {far} -> {t1}, tau^3 returns {t3}");

    use CorrLetter::*;
    let lhs = apply_word(&[A, A, BInv, A, A], far, &a, 400).unwrap();
    let rhs = apply_word(&[B], far, &a, 400).unwrap();
    println!("A A B^-1 A A = {lhs}\nB           = {rhs}");

    let nodes = orbit_tree(z, &a, 2, 200).unwrap();
    print!("{}", orbit_tree_csv(&nodes));
}

#[allow(dead_code)]
fn main() {
    run();
}
