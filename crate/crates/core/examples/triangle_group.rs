// The ideal triangle group: reflections, itineraries and the boundary
// conjugacy between the reflection map and the anti-doubling map.

use schwarz_core::tri_group::{
    angle_b, angle_rho, conjugacy_e, count_b_periodic_points, count_dyadic_angles, enumerate_tile_words, itinerary,
    reflect_generator, words_to_text, AngleCoord,
};
use schwarz_core::ComplexPoint;

pub fn run() {
    let z = ComplexPoint::real(0.0);
    for i in 1..=3 {
        println!("reflection {i}: 0 -> {}", reflect_generator(i, z).unwrap());
    }

    let theta = AngleCoord::new(0.41).unwrap();
    println!("itinerary of 0.41: {}", itinerary(theta, 16).unwrap());
    println!("rho(0.41) = {:.9}", angle_rho(theta).value());

    for t in [1.0 / 3.0, 0.41, 0.5, 0.6] {
        let th = AngleCoord::new(t).unwrap();
        let e = conjugacy_e(th, 48).unwrap();
        let lhs = conjugacy_e(angle_rho(th), 48).unwrap();
        println!("E({t:.4}) = {e:.9}   E(rho) = {lhs:.9}   B(E) = {:.9}", angle_b(e).rem_euclid(1.0));
    }

    for k in 1..=6 {
        let (n, _) = count_b_periodic_points(k).unwrap();
        println!("k = {k}: {} dyadic angles, {n} points of period dividing {k}", count_dyadic_angles(k).unwrap());
    }
    print!("tiles of rank 3:\n{}", words_to_text(&enumerate_tile_words(3)));
}

#[allow(dead_code)]
fn main() {
    run();
}
