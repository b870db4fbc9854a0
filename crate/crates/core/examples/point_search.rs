//! Rational points of bounded height on one curve.

use twin_descent::curve::{Sign, TwinCurve};
use twin_descent::rank1;

fn main() {
    let mut args = std::env::args().skip(1);
    let p: u64 = args.next().map_or(3, |a| a.parse().expect("p is an integer"));
    let bound: u64 = args.next().map_or(50, |a| a.parse().expect("bound is an integer"));
    let e = TwinCurve::from_p(p, Sign::Plus).expect("p and p + 2 are prime");
    let pts = rank1::point_search(&e, bound);
    println!("E: {e}, {} affine points with x = m/e^2, |m|, e <= {bound}", pts.len());
    for pt in pts {
        println!("  {pt}  height {}", pt.naive_height());
    }
}
