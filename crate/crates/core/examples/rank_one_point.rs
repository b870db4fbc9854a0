//! From a two-squares witness to a point of infinite order.

use twin_descent::curve::{CurveModel, Sign, TwinCurve};
use twin_descent::rank1;

fn main() {
    let p: u64 = std::env::args().nth(1).map_or(11, |a| a.parse().expect("p is an integer"));
    let e = TwinCurve::from_p(p, Sign::Plus).expect("p and p + 2 are prime");
    println!("E: {e}");
    let Some(w) = rank1::twin_square_criterion(e.q()).expect("q = 1 mod 4") else {
        println!("q = {} has no witness", e.q());
        return;
    };
    println!("witness: {} = {w}", e.q());
    let sol = rank1::witness_to_primary(&w).expect("witness is valid");
    println!("primary solution (X, Y, S, T) = ({}, {}, {}, {}), system {}", sol.x, sol.y, sol.s, sol.t, sol.system);
    match rank1::primary_to_curve_point(&sol, &e) {
        Ok(pt) => {
            println!("point on E: {pt}");
            for k in 2..=3 {
                println!("[{k}]P = {}", e.mul(k, &pt).unwrap());
            }
        }
        Err(err) => println!("no point: {err}"),
    }
}
