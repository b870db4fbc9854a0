//! Local solvability of every homogeneous space of one curve, with the
//! residue class that certifies each solvable verdict.

use twin_descent::curve::{Sign, TwinCurve};
use twin_descent::localsolve::{self, Family, LocalPlace, QuarticSpace};

fn main() {
    let p: u64 = std::env::args().nth(1).map_or(3, |a| a.parse().expect("p is an integer"));
    let e = TwinCurve::from_p(p, Sign::Plus).expect("p and p + 2 are prime");
    println!("E: {e}");
    for family in [Family::C, Family::CPrime] {
        for space in QuarticSpace::all(e, family) {
            println!("{space}");
            for place in localsolve::relevant_places(&e) {
                let line = match place {
                    LocalPlace::Infinity => match localsolve::real_point(&space) {
                        Some((x, y)) => format!("real point ({x:.4}, {y:.4})"),
                        None => "no real point".into(),
                    },
                    LocalPlace::Prime(ell) => match localsolve::find_local_point(&space.quartic(), ell) {
                        Ok(Some(w)) => format!("{:?} chart, x0 = {} mod {ell}^{} by {:?}", w.chart, w.x0, w.precision, w.reason),
                        Ok(None) => "no point".into(),
                        Err(err) => format!("error: {err}"),
                    },
                };
                println!("  {place:>4}: {line}");
            }
        }
    }
}
