//! The torsion subgroup, its point-count certificate and the isogeny pair.

use twin_descent::curve::{CurveModel, RationalPoint, Sign, TwinCurve};

fn main() {
    let e = TwinCurve::from_p(3, Sign::Plus).unwrap();
    let ep = e.isogenous();
    let tors = e.torsion_over_q().unwrap();
    println!("E: {e}");
    println!("torsion {:?} of order {}", tors.structure, tors.structure.order());
    for c in &tors.certificate {
        println!("  #E(F_{}) = {}", c.ell, c.count);
    }
    let pt = RationalPoint::from_ints(-4, 2);
    for k in 1..=3 {
        let multiple = e.mul(k, &pt).unwrap();
        let image = e.phi(&multiple).unwrap();
        let back = ep.phi_hat(&image).unwrap();
        println!("[{k}]P = {multiple}");
        println!("  phi -> {image}");
        println!("  phi^ -> {back} (= [2][{k}]P: {})", back == e.double(&multiple).unwrap());
    }
}
