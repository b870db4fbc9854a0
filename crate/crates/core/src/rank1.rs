//! The rank-one criterion for `E_+`: a two-squares witness for `q` yields
//! a primary solution of system (I), hence a rational point on
//! `C'_(-1): y^2 = -x^4 + (p+q) x^2 - pq`, hence a point of infinite order.

use std::fmt;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{self, ArithError};
use crate::curve::{CurveModel, RationalPoint, Sign, TwinCurve};

/// Default `Y` bound for [`primary_solution`].
pub const DEFAULT_PRIMARY_BOUND: u64 = 10_000;
/// Default height bound for [`point_search`].
pub const DEFAULT_POINT_BOUND: u64 = 1_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Rank1Error {
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error("witness has a + eps = 0 in both orderings")]
    DegenerateWitness,
    #[error("witness equations do not hold: {0:?}")]
    InvalidWitness(TwinSquareWitness),
    #[error("({x}, {y}, {s}, {t}) does not solve system {system} for p = {p}")]
    InvalidSolution { x: i64, y: i64, s: i64, t: i64, system: System, p: u64 },
    #[error("solution entries exceed 64 bits")]
    Overflow,
    #[error("the construction applies to sigma = +1 only")]
    WrongSign,
    #[error("constructed point {0} failed verification")]
    BadPoint(Box<RationalPoint>),
}

/// `q = a^2 + b^2` and `(a + eps)^2 + (b + delta)^2 = c^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TwinSquareWitness {
    pub a: u64,
    pub b: u64,
    pub eps: i8,
    pub delta: i8,
    pub c: u64,
}

impl TwinSquareWitness {
    pub fn is_valid_for(&self, q: u64) -> bool {
        let (a, b, c) = (self.a as i128, self.b as i128, self.c as i128);
        let (ae, bd) = (a + self.eps as i128, b + self.delta as i128);
        a > 0
            && b > 0
            && matches!(self.eps, 1 | -1)
            && matches!(self.delta, 1 | -1)
            && a * a + b * b == q as i128
            && ae * ae + bd * bd == c * c
    }

    fn swapped(&self) -> Self {
        TwinSquareWitness {
            a: self.b,
            b: self.a,
            eps: self.delta,
            delta: self.eps,
            c: self.c,
        }
    }
}

impl fmt::Display for TwinSquareWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = |s: i8| if s > 0 { '+' } else { '-' };
        write!(
            f,
            "{}^2 + {}^2, ({} {} 1)^2 + ({} {} 1)^2 = {}^2",
            self.a,
            self.b,
            self.a,
            sign(self.eps),
            self.b,
            sign(self.delta),
            self.c
        )
    }
}

const SIGN_ORDER: [(i8, i8); 4] = [(1, 1), (1, -1), (-1, -1), (-1, 1)];

/// Searches `q = a^2 + b^2` in both orderings and all four sign pairs for
/// `(a + eps)^2 + (b + delta)^2 = c^2`.
pub fn twin_square_criterion(q: u64) -> Result<Option<TwinSquareWitness>, Rank1Error> {
    let (a, b) = arith::two_squares(q)?;
    for (a, b) in [(a, b), (b, a)] {
        for (eps, delta) in SIGN_ORDER {
            let sum = (a as i128 + eps as i128).pow(2) + (b as i128 + delta as i128).pow(2);
            let c = sum.sqrt();
            if c * c == sum {
                return Ok(Some(TwinSquareWitness { a, b, eps, delta, c: c as u64 }));
            }
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum System {
    /// `X^2 - pY^2 = S^2`, `X^2 - qY^2 = -T^2`.
    I,
    /// `X^2 - pY^2 = 2S^2`, `X^2 - qY^2 = -2T^2`.
    II,
}

impl System {
    fn factor(self) -> i128 {
        match self {
            System::I => 1,
            System::II => 2,
        }
    }
}

impl fmt::Display for System {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            System::I => "I",
            System::II => "II",
        })
    }
}

/// A solution `(X, Y, S, T)` of system (I) or (II) with `gcd(X, Y) = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimarySolution {
    pub x: i64,
    pub y: i64,
    pub s: i64,
    pub t: i64,
    pub system: System,
}

impl PrimarySolution {
    /// Checks both equations for `p` (with `q = p + 2`) and `gcd(X, Y) = 1`.
    pub fn solves(&self, p: u64) -> bool {
        let (p, q) = (p as i128, p as i128 + 2);
        let k = self.system.factor();
        let (x, y, s, t) = (self.x as i128, self.y as i128, self.s as i128, self.t as i128);
        y != 0 && x.gcd(&y) == 1 && x * x - p * y * y == k * s * s && x * x - q * y * y == -k * t * t
    }

    fn check(self, p: u64) -> Result<Self, Rank1Error> {
        if self.solves(p) {
            Ok(self)
        } else {
            Err(Rank1Error::InvalidSolution {
                x: self.x,
                y: self.y,
                s: self.s,
                t: self.t,
                system: self.system,
                p,
            })
        }
    }
}

impl fmt::Display for PrimarySolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {})", self.x, self.y, self.s, self.t)
    }
}

fn exact_sqrt(n: i128) -> Option<i128> {
    if n < 0 {
        return None;
    }
    let r = n.sqrt();
    (r * r == n).then_some(r)
}

/// First primary solution with `0 < Y <= bound`, ordered by `Y` then `X`.
///
/// Both equations force `pY^2 <= X^2 <= qY^2`, so only that window of
/// positive `X` is scanned; signs of `X, S, T` are immaterial.
pub fn primary_solution(p: u64, q: u64, system: System, bound: u64) -> Option<PrimarySolution> {
    let (pi, qi) = (p as i128, q as i128);
    let k = system.factor();
    for y in 1..=bound as i128 {
        let y2 = y * y;
        let lo = (pi * y2).sqrt();
        let hi = (qi * y2).sqrt();
        for x in lo.max(1)..=hi {
            let x2 = x * x;
            let (u, w) = (x2 - pi * y2, qi * y2 - x2);
            if u < 0 || w < 0 || u % k != 0 || w % k != 0 {
                continue;
            }
            let (Some(s), Some(t)) = (exact_sqrt(u / k), exact_sqrt(w / k)) else {
                continue;
            };
            if x.gcd(&y) == 1 {
                let narrow = |n: i128| i64::try_from(n).expect("search window fits in i64");
                return Some(PrimarySolution { x: narrow(x), y: narrow(y), s: narrow(s), t: narrow(t), system });
            }
        }
    }
    None
}

/// The construction behind the criterion: with `u = n/d` a root of
/// `(a+eps) u^2 - 2(b+delta) u - (a+eps) = 0`, the identity
/// `q(1+u^2)^2 = ((1-u^2)a + 2ub)^2 + (2ua + (u^2-1)b)^2` yields an
/// integer solution of system (I), which is then made primary.
pub fn witness_to_primary(w: &TwinSquareWitness) -> Result<PrimarySolution, Rank1Error> {
    let q = w.a * w.a + w.b * w.b;
    if !w.is_valid_for(q) {
        return Err(Rank1Error::InvalidWitness(*w));
    }
    let w = if w.a as i64 + w.eps as i64 != 0 {
        *w
    } else if w.b as i64 + w.delta as i64 != 0 {
        w.swapped()
    } else {
        return Err(Rank1Error::DegenerateWitness);
    };
    let (a, b, c) = (w.a as i128, w.b as i128, w.c as i128);
    let (eps, delta) = (w.eps as i128, w.delta as i128);
    let n = (b + delta) + c;
    let d = a + eps;
    let (n2, d2) = (n * n, d * d);
    let x = 2 * n * d * a + (n2 - d2) * b;
    let y = d2 + n2;
    let s = eps * n2 + 2 * delta * n * d - eps * d2;
    let t = eps * n2 - 2 * delta * n * d - eps * d2;
    let g = x.gcd(&y);
    let narrow = |n: i128| i64::try_from((n / g).abs()).map_err(|_| Rank1Error::Overflow);
    let sol = PrimarySolution {
        x: narrow(x)?,
        y: narrow(y)?,
        s: narrow(s)?,
        t: narrow(t)?,
        system: System::I,
    };
    sol.check(q - 2)
}

/// The point `(X/Y, k ST/Y^2)` of `C'_(-1)` (with `k = 1` or `2` by
/// system), carried to `E` by `(x, y) -> (-x^2, -xy)`.
pub fn primary_to_curve_point(
    sol: &PrimarySolution,
    e: &TwinCurve,
) -> Result<RationalPoint, Rank1Error> {
    if e.sigma != Sign::Plus {
        return Err(Rank1Error::WrongSign);
    }
    sol.check(e.p())?;
    let big = |n: i64| BigInt::from(n);
    let x0 = BigRational::new(big(sol.x), big(sol.y));
    let y0 = BigRational::new(
        big(sol.s) * big(sol.t) * sol.system.factor(),
        big(sol.y) * big(sol.y),
    );
    let d1 = BigRational::from_integer((-1).into());
    let pt = RationalPoint::affine(&d1 * &x0 * &x0, d1 * x0 * y0);
    let torsion = e.two_torsion();
    if !e.is_on_curve(&pt) || torsion.contains(&pt) {
        return Err(Rank1Error::BadPoint(Box::new(pt)));
    }
    Ok(pt)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankOneCertificate {
    pub witness: TwinSquareWitness,
    pub primary: PrimarySolution,
    /// A point of infinite order on `E`.
    pub point: RationalPoint,
}

/// The rank-one certificate for `E_+` with `p = 3 (mod 8)` and a
/// two-squares witness for `q`; `None` when the hypotheses fail.
pub fn rank_one_certificate(e: &TwinCurve) -> Option<RankOneCertificate> {
    if e.sigma != Sign::Plus || e.p() % 8 != 3 {
        return None;
    }
    let witness = twin_square_criterion(e.q()).expect("q = 5 (mod 8) is 1 (mod 4)")?;
    let primary = witness_to_primary(&witness).expect("a valid witness yields a solution");
    let point = primary_to_curve_point(&primary, e).expect("constructed point verifies");
    Some(RankOneCertificate { witness, primary, point })
}

fn big_square_root(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// Affine points with `x = m/e^2` in lowest terms, `|m| <= bound` and
/// `1 <= e <= bound`, both signs of `y`, sorted by naive height then `x`
/// then `y`.
pub fn point_search(curve: &TwinCurve, bound: u64) -> Vec<RationalPoint> {
    let s = curve.sign() as i128;
    let (p, q) = (curve.p() as i128, curve.q() as i128);
    let b = bound as i128;
    let mut points: Vec<RationalPoint> = (1..=b)
        .into_par_iter()
        .flat_map_iter(|den| {
            let e2 = den * den;
            (-b..=b).filter_map(move |m| {
                if m.gcd(&den) != 1 {
                    return None;
                }
                let value = m
                    .checked_mul(m + s * p * e2)
                    .and_then(|v| v.checked_mul(m + s * q * e2));
                let root = match value {
                    Some(v) => exact_sqrt(v).map(BigInt::from),
                    None => {
                        let m = BigInt::from(m);
                        let e2 = BigInt::from(e2);
                        let v = &m * (&m + &e2 * (s * p)) * (&m + &e2 * (s * q));
                        big_square_root(&v)
                    }
                }?;
                Some((m, den, root))
            })
        })
        .flat_map_iter(|(m, den, root)| {
            let x = BigRational::new(BigInt::from(m), BigInt::from(den * den));
            let y = BigRational::new(root, BigInt::from(den).pow(3));
            let mut out = vec![RationalPoint::affine(x.clone(), y.clone())];
            if !y.is_zero() {
                out.push(RationalPoint::affine(x, -y));
            }
            out
        })
        .collect();
    debug_assert!(points.iter().all(|pt| curve.is_on_curve(pt)));
    points.sort_by(|a, b| {
        let key = |pt: &RationalPoint| (pt.naive_height(), pt.x().cloned(), pt.y().cloned());
        key(a).cmp(&key(b))
    });
    points
}

/// Integer points of `C'_(-1)` with `|x| <= bound`.
pub fn integer_points_on_c_prime_minus_one(p: u64, bound: u64) -> Vec<(i64, i64)> {
    let (p, q) = (p as i128, p as i128 + 2);
    let mut out = Vec::new();
    for x in -(bound as i128)..=bound as i128 {
        let x2 = x * x;
        let v = (x2 - p) * (q - x2);
        if let Some(y) = exact_sqrt(v) {
            let (x, y) = (x.to_i64().unwrap(), y.to_i64().unwrap());
            out.push((x, y));
            if y != 0 {
                out.push((x, -y));
            }
        }
    }
    out
}
