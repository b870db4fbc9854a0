//! Selmer dimensions for every twin pair below a limit, grouped by `p mod 8`.

use std::collections::BTreeMap;

use twin_descent::arith;
use twin_descent::curve::{Sign, TwinCurve};
use twin_descent::descent;

fn main() {
    let limit: u64 = std::env::args().nth(1).map_or(2_000, |a| a.parse().expect("limit is an integer"));
    for sigma in [Sign::Plus, Sign::Minus] {
        let mut seen: BTreeMap<u64, BTreeMap<(u32, u32, u32), usize>> = BTreeMap::new();
        for pair in arith::twin_prime_pairs(limit) {
            let e = TwinCurve::from_p(pair.p(), sigma).unwrap();
            let d = descent::descend(&e).dims();
            *seen.entry(pair.p() % 8).or_default().entry((d.dim_phi, d.dim_phihat, d.bound)).or_default() += 1;
        }
        println!("sigma {sigma}");
        for (residue, dims) in &seen {
            for ((phi, phihat, bound), count) in dims {
                println!("  p = {residue} mod 8: dim S(phi) {phi}, dim S(phi^) {phihat}, bound {bound}  ({count} pairs)");
            }
        }
    }
}
