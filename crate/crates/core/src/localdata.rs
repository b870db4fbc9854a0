//! Local reduction data: reduction type, Kodaira symbol, conductor exponent,
//! Tamagawa number and component count at each prime, plus point counts and
//! the supersingularity sum at primes of good reduction.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{self, legendre_u64, rem_u64, valuation_int};
use crate::curve::{CurveModel, TwinCurve, WeierstrassCoefficients};
use crate::fp_poly::FpPoly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LocalDataError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("the curve has bad reduction at {0}")]
    BadReduction(u64),
    #[error("{0} is excluded for this computation")]
    ExcludedPrime(u64),
    #[error("model is not minimal at {0}")]
    NotMinimal(u64),
    #[error("Kodaira type {kind} at {ell} is outside the supported set {{I0, In, III}}")]
    UnsupportedKodaira { ell: u64, kind: &'static str },
    #[error("reduction at {0} has no singular point where one was expected")]
    MissingSingularPoint(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ReductionType {
    Good,
    MultiplicativeSplit,
    MultiplicativeNonsplit,
    Additive,
}

impl ReductionType {
    pub fn is_multiplicative(self) -> bool {
        matches!(
            self,
            ReductionType::MultiplicativeSplit | ReductionType::MultiplicativeNonsplit
        )
    }
}

/// The Kodaira symbols that occur on this family. Any other fiber type is
/// reported as [`LocalDataError::UnsupportedKodaira`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kodaira {
    I0,
    In(u32),
    III,
}

impl fmt::Display for Kodaira {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kodaira::I0 => f.write_str("I0"),
            Kodaira::In(n) => write!(f, "I{n}"),
            Kodaira::III => f.write_str("III"),
        }
    }
}

impl std::str::FromStr for Kodaira {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "I0" => Ok(Kodaira::I0),
            "III" => Ok(Kodaira::III),
            _ => match s.strip_prefix('I').map(str::parse::<u32>) {
                Some(Ok(n)) if n > 0 => Ok(Kodaira::In(n)),
                _ => Err(format!("unsupported Kodaira symbol {s:?}")),
            },
        }
    }
}

impl Serialize for Kodaira {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Kodaira {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// One row of the local data table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalData {
    pub ell: u64,
    pub reduction: ReductionType,
    pub kodaira: Kodaira,
    /// Exponent of `ell` in the conductor.
    pub f: u32,
    /// Tamagawa number `[E(Q_l) : E_0(Q_l)]`.
    pub c: u32,
    /// Number of irreducible components of the special fiber.
    pub m: u32,
}

impl LocalData {
    /// The wild part `f - 2` of the conductor exponent at an additive prime.
    pub fn wild_exponent(&self) -> Option<u32> {
        (self.reduction == ReductionType::Additive).then(|| self.f - 2)
    }
}

fn check_prime(ell: u64) -> Result<(), LocalDataError> {
    if arith::is_prime(ell) {
        Ok(())
    } else {
        Err(LocalDataError::NotPrime(ell))
    }
}

/// Minimality test at `ell` from the valuations of `c4`, `c6` and `Delta`.
pub fn is_minimal_at(w: &WeierstrassCoefficients, ell: u64) -> bool {
    let v = |n: &BigInt| valuation_int(n, ell).unwrap_or(u32::MAX);
    v(&w.discriminant()) < 12 || v(&w.c4()) < 4 || v(&w.c6()) < 6
}

fn ogg_components(v_disc: u32, f: u32) -> u32 {
    v_disc + 1 - f
}

pub fn reduction_type(e: &TwinCurve, ell: u64) -> Result<ReductionType, LocalDataError> {
    check_prime(ell)?;
    let w = e.coefficients();
    if !is_minimal_at(&w, ell) {
        return Err(LocalDataError::NotMinimal(ell));
    }
    let v_disc = valuation_int(&w.discriminant(), ell).expect("nonzero discriminant");
    if v_disc == 0 {
        return Ok(ReductionType::Good);
    }
    if rem_u64(&w.c4(), ell) == 0 {
        return Ok(ReductionType::Additive);
    }
    if ell == 2 {
        // a1 = a3 = 0 forces c4 even, so this is unreachable on the family
        return Err(LocalDataError::UnsupportedKodaira { ell, kind: "multiplicative at 2" });
    }
    if node_tangents_rational(e, ell)? {
        Ok(ReductionType::MultiplicativeSplit)
    } else {
        Ok(ReductionType::MultiplicativeNonsplit)
    }
}

/// Locates the node `(x0, 0)` of `y^2 = x^3 + a2 x^2 + a4 x` over `F_l` as
/// the double root of the cubic, then tests whether the tangent cone
/// `y^2 = (3 x0 + a2) t^2` splits over `F_l`.
fn node_tangents_rational(e: &TwinCurve, ell: u64) -> Result<bool, LocalDataError> {
    let cubic = FpPoly::from_ints(&[BigInt::zero(), e.a4(), e.a2(), BigInt::one()], ell);
    let double = cubic.gcd(&cubic.derivative());
    if double.degree() != Some(1) {
        return Err(LocalDataError::MissingSingularPoint(ell));
    }
    let x0 = (ell - double.coeff(0)) % ell;
    let slope_sq = (3 * x0 % ell + rem_u64(&e.a2(), ell)) % ell;
    Ok(legendre_u64(slope_sq, ell) == 1)
}

/// Kodaira symbol, conductor exponent, Tamagawa number and component count.
pub fn local_data(e: &TwinCurve, ell: u64) -> Result<LocalData, LocalDataError> {
    let reduction = reduction_type(e, ell)?;
    let w = e.coefficients();
    let v_disc = valuation_int(&w.discriminant(), ell).expect("nonzero discriminant");
    let row = match reduction {
        ReductionType::Good => LocalData {
            ell,
            reduction,
            kodaira: Kodaira::I0,
            f: 0,
            c: 1,
            m: ogg_components(v_disc, 0),
        },
        ReductionType::MultiplicativeSplit | ReductionType::MultiplicativeNonsplit => {
            let c = if reduction == ReductionType::MultiplicativeSplit {
                v_disc
            } else if v_disc.is_multiple_of(2) {
                2
            } else {
                1
            };
            LocalData {
                ell,
                reduction,
                kodaira: Kodaira::In(v_disc),
                f: 1,
                c,
                m: ogg_components(v_disc, 1),
            }
        }
        ReductionType::Additive => additive_data(&w, ell, v_disc)?,
    };
    Ok(row)
}

/// The first steps of Tate's algorithm: move the singular point to the
/// origin, then classify by divisibility of `a6`, `b8` and `b6`.
fn additive_data(
    w: &WeierstrassCoefficients,
    ell: u64,
    v_disc: u32,
) -> Result<LocalData, LocalDataError> {
    let (r, t) = singular_point(w, ell)?;
    let shifted = w.transform(&BigInt::from(r), &BigInt::zero(), &BigInt::from(t));
    let ell_big = BigInt::from(ell);
    let divides = |k: u32, n: &BigInt| n.is_multiple_of(&ell_big.pow(k));
    debug_assert!(divides(1, &shifted.a3) && divides(1, &shifted.a4) && divides(1, &shifted.a6));
    if !divides(1, &shifted.b2()) {
        return Err(LocalDataError::UnsupportedKodaira { ell, kind: "In (b2 unit)" });
    }
    if !divides(2, &shifted.a6) {
        return Err(LocalDataError::UnsupportedKodaira { ell, kind: "II" });
    }
    if !divides(3, &shifted.b8()) {
        // type III: f = v(Delta) - 1, then Ogg gives the component count
        let f = v_disc - 1;
        return Ok(LocalData {
            ell,
            reduction: ReductionType::Additive,
            kodaira: Kodaira::III,
            f,
            c: 2,
            m: ogg_components(v_disc, f),
        });
    }
    if !divides(3, &shifted.b6()) {
        return Err(LocalDataError::UnsupportedKodaira { ell, kind: "IV" });
    }
    Err(LocalDataError::UnsupportedKodaira { ell, kind: "I0* or beyond" })
}

/// Singular point of the reduction mod `ell`, by search for small `ell` and
/// from the triple root otherwise.
fn singular_point(w: &WeierstrassCoefficients, ell: u64) -> Result<(u64, u64), LocalDataError> {
    let m = |n: &BigInt| rem_u64(n, ell);
    let (a1, a2, a3, a4, a6) = (m(&w.a1), m(&w.a2), m(&w.a3), m(&w.a4), m(&w.a6));
    let candidates: Box<dyn Iterator<Item = (u64, u64)>> = if ell <= 3 {
        Box::new((0..ell).flat_map(move |x| (0..ell).map(move |y| (x, y))))
    } else {
        // complete the square, then the singular x is the triple root
        let b2 = m(&w.b2());
        let inv12 = arith::pow_mod(12 % ell, ell - 2, ell);
        let x = (ell - b2 * inv12 % ell) % ell;
        let inv2 = arith::pow_mod(2, ell - 2, ell);
        let y = (ell - (a1 * x + a3) % ell) % ell * inv2 % ell;
        Box::new(std::iter::once((x, y)))
    };
    for (x, y) in candidates {
        let f = (y * y + a1 * x % ell * y + a3 * y) % ell;
        let g = (x * x % ell * x + a2 * x % ell * x + a4 * x + a6) % ell;
        let fx = (a1 * y + 2 * ell * ell - 3 * x * x % ell - 2 * a2 * x % ell - a4) % ell;
        let fy = (2 * y + a1 * x + a3) % ell;
        if f == g && fx == 0 && fy == 0 {
            return Ok((x, y));
        }
    }
    Err(LocalDataError::MissingSingularPoint(ell))
}

/// Prime divisors of the discriminant, which are exactly `2`, `p`, `q`.
pub fn bad_primes(e: &TwinCurve) -> Vec<u64> {
    let mut rest = e.invariants().disc;
    let mut out = Vec::new();
    for ell in [2, e.p(), e.q()] {
        let ell_big = BigInt::from(ell);
        if rest.is_multiple_of(&ell_big) {
            out.push(ell);
            while rest.is_multiple_of(&ell_big) {
                rest /= &ell_big;
            }
        }
    }
    assert!(rest.is_one(), "discriminant has an unexpected prime factor");
    out
}

/// `N = prod l^{f_l}` over the bad primes.
pub fn conductor(e: &TwinCurve) -> Result<BigInt, LocalDataError> {
    let mut n = BigInt::one();
    for ell in bad_primes(e) {
        n *= BigInt::from(ell).pow(local_data(e, ell)?.f);
    }
    Ok(n)
}

fn check_good_odd(e: &TwinCurve, ell: u64) -> Result<(), LocalDataError> {
    check_prime(ell)?;
    if ell == 2 {
        return Err(LocalDataError::ExcludedPrime(ell));
    }
    if ell == e.p() || ell == e.q() {
        return Err(LocalDataError::BadReduction(ell));
    }
    Ok(())
}

/// `sum_{k=0}^{m} C(m,k)^2 p^k q^{m-k} mod l` with `m = (l-1)/2`; zero
/// exactly when the reduction at `l` is supersingular.
pub fn supersingular_sum(e: &TwinCurve, ell: u64) -> Result<u64, LocalDataError> {
    check_good_odd(e, ell)?;
    let mulm = |a: u64, b: u64| ((a as u128 * b as u128) % ell as u128) as u64;
    let m = (ell - 1) / 2;
    let (p, q) = (e.p() % ell, e.q() % ell);
    let q_inv = arith::pow_mod(q, ell - 2, ell);
    let ratio = mulm(p, q_inv);
    // binom(m, k) mod l, built incrementally; k + 1 <= m < l is invertible
    let mut binom = 1u64;
    let mut ratio_pow = 1u64;
    let mut sum = 0u64;
    for k in 0..=m {
        sum = (sum + mulm(mulm(binom, binom), ratio_pow)) % ell;
        if k < m {
            let num = (m - k) % ell;
            let den_inv = arith::pow_mod((k + 1) % ell, ell - 2, ell);
            binom = mulm(mulm(binom, num), den_inv);
            ratio_pow = mulm(ratio_pow, ratio);
        }
    }
    Ok(mulm(sum, arith::pow_mod(q, m, ell)))
}

/// `#E~(F_l) = l + 1 + sum_x (f(x) / l)` by direct enumeration.
pub fn count_points_mod(e: &TwinCurve, ell: u64) -> Result<u64, LocalDataError> {
    check_good_odd(e, ell)?;
    let s = if e.sign() > 0 { 0 } else { 1 };
    let (sp, sq) = if s == 0 {
        (e.p() % ell, e.q() % ell)
    } else {
        ((ell - e.p() % ell) % ell, (ell - e.q() % ell) % ell)
    };
    let mulm = |a: u64, b: u64| ((a as u128 * b as u128) % ell as u128) as u64;
    let mut total: i64 = ell as i64 + 1;
    for x in 0..ell {
        let fx = mulm(mulm(x, (x + sp) % ell), (x + sq) % ell);
        total += legendre_u64(fx, ell) as i64;
    }
    Ok(total as u64)
}
