//! Reduction types, Tamagawa numbers and conductor exponents.

use twin_descent::curve::{Sign, TwinCurve};
use twin_descent::localdata;

fn main() {
    let p: u64 = std::env::args().nth(1).map_or(29, |a| a.parse().expect("p is an integer"));
    for sigma in [Sign::Plus, Sign::Minus] {
        let e = TwinCurve::from_p(p, sigma).expect("p and p + 2 are prime");
        println!("E: {e}   disc = {}", e.invariants().disc);
        for ell in localdata::bad_primes(&e) {
            let d = localdata::local_data(&e, ell).unwrap();
            println!("  ell {ell:>5}: {:?}, {}, f = {}, c = {}, m = {}", d.reduction, d.kodaira, d.f, d.c, d.m);
        }
        println!("  conductor {}", localdata::conductor(&e).unwrap());
        let supersingular: Vec<u64> = twin_descent::arith::primes_up_to(100)
            .into_iter()
            .skip(1)
            .filter(|&ell| ell != e.p() && ell != e.q())
            .filter(|&ell| localdata::supersingular_sum(&e, ell).unwrap() == 0)
            .collect();
        println!("  supersingular primes below 100: {supersingular:?}");
    }
}
