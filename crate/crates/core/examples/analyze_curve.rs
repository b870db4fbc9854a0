//! Full analysis of one curve: `cargo run --example analyze_curve -- 11 -1`.

use twin_descent::cli::{build_report, render_report};
use twin_descent::curve::{Sign, TwinCurve};

fn main() {
    let mut args = std::env::args().skip(1);
    let p: u64 = args.next().map_or(3, |a| a.parse().expect("p is an integer"));
    let sigma: Sign = args.next().map_or(Sign::Plus, |a| a.parse().expect("sigma is +1 or -1"));
    let e = TwinCurve::from_p(p, sigma).expect("p and p + 2 are prime");
    print!("{}", render_report(&build_report(&e)));
}
