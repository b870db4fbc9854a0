//! Integer primitives: primality, Legendre symbols, modular square roots,
//! valuations, sums of two squares and twin-prime enumeration.
//!
//! Primes are `u64` throughout; arbitrary integers and rationals that feed
//! valuations or residue symbols are `BigInt` / `BigRational`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("{0} is not a twin prime pair base ({0} + 2 must also be prime)")]
    NotTwin(u64),
    #[error("valuation of zero is infinite")]
    ZeroValuation,
    #[error("{0} is not congruent to 1 mod 4")]
    NotOneModFour(u64),
}

/// Twin primes `(p, p + 2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PrimePair {
    p: u64,
    q: u64,
}

impl PrimePair {
    /// Builds the pair `(p, p + 2)`, checking both entries for primality.
    pub fn new(p: u64) -> Result<Self, ArithError> {
        if !is_prime(p) {
            return Err(ArithError::NotPrime(p));
        }
        let q = p.checked_add(2).ok_or(ArithError::NotTwin(p))?;
        if p < 3 || !is_prime(q) {
            return Err(ArithError::NotTwin(p));
        }
        Ok(PrimePair { p, q })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn q(&self) -> u64 {
        self.q
    }
}

impl fmt::Display for PrimePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.p, self.q)
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

// Jaeschke / Sorenson-Webster: the first twelve primes as bases decide
// primality for every n < 3.3 * 10^24, which covers all of u64.
const MR_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Deterministic Miller-Rabin on the full `u64` range.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &b in &MR_BASES {
        if n == b {
            return true;
        }
        if n.is_multiple_of(b) {
            return false;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &MR_BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Sieve of Eratosthenes; `sieve[i]` is true iff `i` is prime.
pub fn prime_sieve(limit: usize) -> Vec<bool> {
    let mut sieve = vec![true; limit + 1];
    sieve[0] = false;
    if limit >= 1 {
        sieve[1] = false;
    }
    let mut i = 2;
    while i * i <= limit {
        if sieve[i] {
            let mut j = i * i;
            while j <= limit {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    sieve
}

/// Primes `<= limit` in ascending order.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    prime_sieve(limit as usize)
        .iter()
        .enumerate()
        .filter_map(|(i, &is_p)| is_p.then_some(i as u64))
        .collect()
}

/// All twin pairs with `q <= limit`, ascending in `p`.
pub fn twin_prime_pairs(limit: u64) -> Vec<PrimePair> {
    if limit < 5 {
        return Vec::new();
    }
    let sieve = prime_sieve(limit as usize);
    (3..=limit as usize - 2)
        .filter(|&p| sieve[p] && sieve[p + 2])
        .map(|p| PrimePair {
            p: p as u64,
            q: p as u64 + 2,
        })
        .collect()
}

fn check_odd_prime(ell: u64) -> Result<(), ArithError> {
    if ell == 2 || !is_prime(ell) {
        return Err(ArithError::NotOddPrime(ell));
    }
    Ok(())
}

/// Reduces `a` into `[0, m)`.
pub fn rem_u64(a: &BigInt, m: u64) -> u64 {
    a.mod_floor(&BigInt::from(m)).to_u64().expect("residue fits in u64")
}

/// Legendre symbol `(a / ell)` by quadratic reciprocity.
pub fn legendre(a: &BigInt, ell: u64) -> Result<i8, ArithError> {
    check_odd_prime(ell)?;
    Ok(jacobi(rem_u64(a, ell), ell))
}

/// Legendre symbol for a residue already reduced mod an odd prime; no checks.
pub(crate) fn legendre_u64(a: u64, ell: u64) -> i8 {
    jacobi(a % ell, ell)
}

fn jacobi(mut a: u64, mut n: u64) -> i8 {
    let mut result = 1i8;
    a %= n;
    while a != 0 {
        while a.is_multiple_of(2) {
            a /= 2;
            if matches!(n % 8, 3 | 5) {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

/// `v_ell(n)` for a nonzero integer.
pub fn valuation_int(n: &BigInt, ell: u64) -> Result<u32, ArithError> {
    if n.is_zero() {
        return Err(ArithError::ZeroValuation);
    }
    let ell = BigInt::from(ell);
    let mut n = n.abs();
    let mut v = 0;
    loop {
        let (quot, rem) = n.div_rem(&ell);
        if !rem.is_zero() {
            return Ok(v);
        }
        n = quot;
        v += 1;
    }
}

/// `v_ell(n)` for a nonzero rational; negative when `ell` divides the denominator.
pub fn valuation(n: &BigRational, ell: u64) -> Result<i64, ArithError> {
    if n.is_zero() {
        return Err(ArithError::ZeroValuation);
    }
    Ok(valuation_int(n.numer(), ell)? as i64 - valuation_int(n.denom(), ell)? as i64)
}

/// Square root of `a` modulo an odd prime by Tonelli-Shanks.
///
/// Returns the smaller of the two roots `min(x, ell - x)`, or `None` when `a`
/// is a non-residue.
pub fn sqrt_mod(a: &BigInt, ell: u64) -> Result<Option<u64>, ArithError> {
    check_odd_prime(ell)?;
    Ok(sqrt_mod_u64(rem_u64(a, ell), ell))
}

pub(crate) fn sqrt_mod_u64(a: u64, ell: u64) -> Option<u64> {
    let a = a % ell;
    if a == 0 {
        return Some(0);
    }
    if jacobi(a, ell) != 1 {
        return None;
    }
    let x = if ell % 4 == 3 {
        pow_mod(a, (ell + 1) / 4, ell)
    } else {
        let s = (ell - 1).trailing_zeros();
        let odd = (ell - 1) >> s;
        let z = (2..ell).find(|&z| jacobi(z, ell) == -1).expect("non-residue exists");
        let mut c = pow_mod(z, odd, ell);
        let mut x = pow_mod(a, odd.div_ceil(2), ell);
        let mut t = pow_mod(a, odd, ell);
        let mut m = s;
        while t != 1 {
            let mut i = 0;
            let mut t2 = t;
            while t2 != 1 {
                t2 = mul_mod(t2, t2, ell);
                i += 1;
            }
            let b = pow_mod(c, 1 << (m - i - 1), ell);
            x = mul_mod(x, b, ell);
            c = mul_mod(b, b, ell);
            t = mul_mod(t, c, ell);
            m = i;
        }
        x
    };
    Some(x.min(ell - x))
}

/// Writes a prime `q = 1 (mod 4)` as `a^2 + b^2` with `a < b`.
///
/// Cornacchia descent: run the Euclidean algorithm on `(q, r)` where
/// `r^2 = -1 (mod q)` and stop at the first remainder below `sqrt(q)`.
pub fn two_squares(q: u64) -> Result<(u64, u64), ArithError> {
    if !is_prime(q) {
        return Err(ArithError::NotPrime(q));
    }
    if q % 4 != 1 {
        return Err(ArithError::NotOneModFour(q));
    }
    let root = sqrt_mod_u64(q - 1, q).expect("-1 is a residue for q = 1 mod 4");
    let bound = q.sqrt();
    let (mut r0, mut r1) = (q, q - root);
    while r1 > bound {
        let r2 = r0 % r1;
        r0 = r1;
        r1 = r2;
    }
    let a = r1;
    let b = (q - a * a).sqrt();
    debug_assert_eq!(a * a + b * b, q);
    Ok((a.min(b), a.max(b)))
}

/// Squarefree part of a nonzero integer, keeping the sign.
pub fn squarefree_part(n: i128) -> i128 {
    assert!(n != 0, "squarefree part of zero");
    let sign = n.signum();
    let mut m = n.unsigned_abs();
    let mut out: u128 = 1;
    let mut d: u128 = 2;
    while d * d <= m {
        let mut e = 0;
        while m.is_multiple_of(d) {
            m /= d;
            e += 1;
        }
        if e % 2 == 1 {
            out *= d;
        }
        d += 1;
    }
    out *= m;
    sign * out as i128
}

/// Squarefree class of a nonzero rational modulo squares, as an integer.
pub fn square_class(r: &BigRational) -> i128 {
    let prod = r.numer() * r.denom();
    squarefree_part(prod.to_i128().expect("square class input fits in i128"))
}
