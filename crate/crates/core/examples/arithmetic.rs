//! Number-theoretic helpers: twin primes, square roots, sums of two squares.

use num_bigint::BigInt;
use twin_descent::arith;

fn main() {
    let pairs = arith::twin_prime_pairs(200);
    println!("twin pairs up to 200: {:?}", pairs.iter().map(|t| (t.p(), t.q())).collect::<Vec<_>>());
    for q in [5u64, 13, 61, 1621] {
        let (a, b) = arith::two_squares(q).unwrap();
        println!("{q} = {a}^2 + {b}^2");
    }
    let r = arith::sqrt_mod(&BigInt::from(-1), 13).unwrap();
    println!("sqrt(-1) mod 13 = {r:?}");
    println!("legendre(2, 7) = {}", arith::legendre(&BigInt::from(2), 7).unwrap());
    println!("squarefree part of -72 = {}", arith::squarefree_part(-72));
}
