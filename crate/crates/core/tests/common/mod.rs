//! Independent oracles shared by the integration tests.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_integer::Roots;
use num_traits::Zero;
use twin_descent::arith::valuation_int;
use twin_descent::localsolve::Quartic;
use twin_descent::rank1::{PrimarySolution, System};

fn mulm(a: u128, b: u128, m: u128) -> u128 {
    a * b % m
}

/// `F(x, y) = y^2 - g(x) mod m`, with coefficients pre-reduced.
fn f_mod(coeffs: &[u128; 5], x: u128, y: u128, m: u128) -> u128 {
    let gx = coeffs.iter().rev().fold(0u128, |acc, &c| (mulm(acc, x, m) + c) % m);
    (mulm(y, y, m) + m - gx) % m
}

fn reduce(coeffs: &[BigInt; 5], m: u128) -> [u128; 5] {
    let mb = BigInt::from(m);
    coeffs.clone().map(|c| {
        let r = ((c % &mb) + &mb) % &mb;
        u128::try_from(r).unwrap()
    })
}

fn vinf(n: &BigInt, ell: u64) -> Option<u32> {
    (!n.is_zero()).then(|| valuation_int(n, ell).unwrap())
}

/// Two-variable Hensel test for `F = y^2 - g(x)` at an integer point.
fn hensel_point(g: &Quartic, x: u128, y: u128, ell: u64) -> bool {
    let (x, y) = (BigInt::from(x), BigInt::from(y));
    let f = &y * &y - g.eval(&x);
    let fx = -g.derivative_at(&x);
    let fy = BigInt::from(2) * &y;
    let Some(min_partial) = [vinf(&fx, ell), vinf(&fy, ell)].into_iter().flatten().min() else {
        return false;
    };
    match vinf(&f, ell) {
        None => true,
        Some(vf) => vf > 2 * min_partial,
    }
}

/// Lifts every solution of `y^2 = g(x) mod l^k` with `x, y` in `Z_l` up
/// to `depth`, with no pruning beyond the congruence itself. `Some(true)`
/// when some state satisfies Hensel's inequality, `Some(false)` when the
/// solution set dies out, `None` if states remain at `depth`.
fn lift_chart(g: &Quartic, ell: u64, depth: u32) -> Option<bool> {
    let l = ell as u128;
    let m1 = l;
    let c1 = reduce(g.coeffs(), m1);
    let mut states: Vec<(u128, u128)> = Vec::new();
    for x in 0..l {
        for y in 0..l {
            if f_mod(&c1, x, y, m1) == 0 {
                states.push((x, y));
            }
        }
    }
    let mut modulus = l;
    for k in 1..=depth {
        if states.is_empty() {
            return Some(false);
        }
        if states.iter().any(|&(x, y)| hensel_point(g, x, y, ell)) {
            return Some(true);
        }
        if k == depth {
            break;
        }
        let next = modulus * l;
        assert!(next < 1u128 << 62, "oracle modulus overflow");
        let c = reduce(g.coeffs(), next);
        let mut lifted = Vec::new();
        for &(x, y) in &states {
            for a in 0..l {
                for b in 0..l {
                    let (x1, y1) = (x + modulus * a, y + modulus * b);
                    if f_mod(&c, x1, y1, next) == 0 {
                        lifted.push((x1, y1));
                    }
                }
            }
        }
        states = lifted;
        modulus = next;
    }
    if states.is_empty() {
        Some(false)
    } else {
        None
    }
}

/// Exhaustive `l`-adic solvability oracle over both charts at `depth`.
pub fn oracle_solvable(g: &Quartic, ell: u64, depth: u32) -> Option<bool> {
    let affine = lift_chart(g, ell, depth);
    if affine == Some(true) {
        return Some(true);
    }
    let reciprocal = lift_chart(&g.reciprocal(), ell, depth);
    match (affine, reciprocal) {
        (_, Some(true)) => Some(true),
        (Some(false), Some(false)) => Some(false),
        _ => None,
    }
}

/// Every `(X, Y, S, T)` with `0 < Y <= bound`, `0 < X <= bound * sqrt(q) + 1`
/// and nonnegative `S, T` is tried; the first with `gcd(X, Y) = 1` in
/// `(Y, X)` order is returned.
pub fn brute_primary(p: u64, system: System, bound: u64) -> Option<PrimarySolution> {
    let (p, q) = (p as i64, p as i64 + 2);
    let k = match system {
        System::I => 1,
        System::II => 2,
    };
    let bound = bound as i64;
    let x_max = bound * (q.sqrt() + 1);
    for y in 1..=bound {
        for x in 1..=x_max {
            let lhs_s = x * x - p * y * y;
            let lhs_t = x * x - q * y * y;
            let s = (0..=x).find(|s| k * s * s == lhs_s);
            let t = (0..=x).find(|t| -k * t * t == lhs_t);
            if let (Some(s), Some(t)) = (s, t) {
                if num_integer::gcd(x, y) == 1 {
                    return Some(PrimarySolution { x, y, s, t, system });
                }
            }
        }
    }
    None
}
