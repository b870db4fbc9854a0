//! Local solvability of the quartics `y^2 = d1 x^4 + A x^2 + d2` over the
//! reals and the `l`-adic fields.
//!
//! The `l`-adic decision is a residue-class search. A class
//! `x0 + l^k Z_l` is rewritten as `h(t) = g(x0 + l^k t)`; it is settled
//! once the constant term dominates every other coefficient (then every
//! value in the class has the square class of `h(0)`), or once Hensel's
//! inequality certifies a root of `g` nearby. Points with `|x|_l > 1` are
//! covered by running the same search on the reciprocal quartic.

use std::collections::VecDeque;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{self, legendre_u64, rem_u64};
use crate::curve::{CurveModel, TwinCurve};
use crate::fp_poly::FpPoly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LocalSolveError {
    #[error("zero has no square class")]
    Zero,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("quartic must have nonzero leading and constant terms and nonzero discriminant")]
    DegenerateQuartic,
    #[error("d1 = {d1} is not a valid parameter for family {family}")]
    InvalidD1 { family: Family, d1: i128 },
    #[error("residue search at {ell} left an undecided class at depth {depth}")]
    DepthExhausted { ell: u64, depth: u32 },
}

fn v(n: &BigInt, ell: u64) -> u32 {
    arith::valuation_int(n, ell).expect("valuation of a nonzero integer")
}

/// A quartic `c4 x^4 + c3 x^3 + c2 x^2 + c1 x + c0` with integer
/// coefficients, nonzero `c4`, nonzero `c0` and nonzero discriminant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quartic {
    /// Constant term first.
    coeffs: [BigInt; 5],
}

impl Quartic {
    pub fn new(coeffs: [BigInt; 5]) -> Result<Self, LocalSolveError> {
        let q = Quartic { coeffs };
        if q.coeffs[4].is_zero() || q.coeffs[0].is_zero() || q.resultant_with_derivative().is_zero() {
            return Err(LocalSolveError::DegenerateQuartic);
        }
        Ok(q)
    }

    /// `d1 x^4 + a x^2 + d2`.
    pub fn even(d1: BigInt, a: BigInt, d2: BigInt) -> Result<Self, LocalSolveError> {
        Quartic::new([d2, BigInt::zero(), a, BigInt::zero(), d1])
    }

    pub fn from_i64(coeffs: [i64; 5]) -> Result<Self, LocalSolveError> {
        Quartic::new(coeffs.map(BigInt::from))
    }

    pub fn coeffs(&self) -> &[BigInt; 5] {
        &self.coeffs
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative_at(&self, x: &BigInt) -> BigInt {
        (1..5)
            .rev()
            .fold(BigInt::zero(), |acc, i| acc * x + &self.coeffs[i] * i)
    }

    /// `x^4 g(1/x)`.
    pub fn reciprocal(&self) -> Quartic {
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        Quartic { coeffs }
    }

    /// `Res(g, g')` as the determinant of the 7 x 7 Sylvester matrix.
    pub fn resultant_with_derivative(&self) -> BigInt {
        let f: Vec<BigInt> = self.coeffs.iter().rev().cloned().collect();
        let df: Vec<BigInt> = (1..5).rev().map(|i| &self.coeffs[i] * i).collect();
        let n = 7;
        let mut m = vec![vec![BigInt::zero(); n]; n];
        for row in 0..3 {
            for (j, c) in f.iter().enumerate() {
                m[row][row + j] = c.clone();
            }
        }
        for row in 0..4 {
            for (j, c) in df.iter().enumerate() {
                m[3 + row][row + j] = c.clone();
            }
        }
        bareiss_determinant(m)
    }

    /// `Res(g, g') / c4`, the discriminant of a quartic.
    pub fn discriminant(&self) -> BigInt {
        self.resultant_with_derivative() / &self.coeffs[4]
    }

    /// Depth at which the residue search at `ell` is guaranteed to have
    /// settled every class, on either chart: `2r + 2 v(2) + 1` with `r` the
    /// larger valuation of `Res(g, g')` over the two charts.
    pub fn depth_bound(&self, ell: u64) -> u32 {
        let r = v(&self.resultant_with_derivative(), ell)
            .max(v(&self.reciprocal().resultant_with_derivative(), ell));
        let v2 = u32::from(ell == 2);
        2 * r + 2 * v2 + 1
    }

    /// Whether the reduction mod an odd `ell` is nonzero and not a constant
    /// times a square; when it holds, `y^2 = g(x)` has an `l`-adic point.
    pub fn reduction_not_const_square(&self, ell: u64) -> bool {
        if ell == 2 {
            return false;
        }
        let reduced = FpPoly::from_ints(&self.coeffs, ell);
        !reduced.is_zero() && !reduced.is_const_times_square()
    }
}

impl fmt::Display for Quartic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for i in (0..5).rev() {
            let c = &self.coeffs[i];
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let mag = c.abs();
            match i {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}")?;
                    }
                    f.write_str("x")?;
                    if i > 1 {
                        write!(f, "^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

fn bareiss_determinant(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let val = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = val / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Whether a nonzero integer is a square in `Q_l`.
pub fn is_square_in_qell(c: &BigInt, ell: u64) -> bool {
    assert!(!c.is_zero(), "square test on zero");
    let e = v(c, ell);
    if e % 2 == 1 {
        return false;
    }
    let unit = c / BigInt::from(ell).pow(e);
    if ell == 2 {
        unit.mod_floor(&BigInt::from(8)) == BigInt::one()
    } else {
        legendre_u64(rem_u64(&unit, ell), ell) == 1
    }
}

/// Whether a nonzero rational is a square in `Q_2`: even valuation and
/// unit part `= 1 (mod 8)`.
pub fn is_square_in_q2(r: &BigRational) -> Result<bool, LocalSolveError> {
    if r.is_zero() {
        return Err(LocalSolveError::Zero);
    }
    // r and r * den^2 share a square class
    Ok(is_square_in_qell(&(r.numer() * r.denom()), 2))
}

/// A polynomial in at most two variables with integer coefficients, stored
/// as `(i, j, c)` terms meaning `c x^i y^j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntPoly2 {
    terms: Vec<(u32, u32, BigInt)>,
}

impl IntPoly2 {
    pub fn new(terms: Vec<(u32, u32, BigInt)>) -> Self {
        IntPoly2 { terms }
    }

    /// A polynomial in `x` alone, constant term first.
    pub fn univariate(coeffs: &[BigInt]) -> Self {
        let terms = coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (i as u32, 0, c.clone()))
            .collect();
        IntPoly2 { terms }
    }

    /// `g(x) - y^2`.
    pub fn curve_equation(g: &Quartic) -> Self {
        let mut p = IntPoly2::univariate(g.coeffs());
        p.terms.push((0, 2, BigInt::from(-1)));
        p
    }

    pub fn eval(&self, x: &BigInt, y: &BigInt) -> BigInt {
        self.terms
            .iter()
            .map(|(i, j, c)| c * x.pow(*i) * y.pow(*j))
            .sum()
    }

    pub fn partial_x(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(i, _, _)| *i > 0)
            .map(|(i, j, c)| (i - 1, *j, c * *i))
            .collect();
        IntPoly2 { terms }
    }

    pub fn partial_y(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(_, j, _)| *j > 0)
            .map(|(i, j, c)| (*i, j - 1, c * *j))
            .collect();
        IntPoly2 { terms }
    }
}

/// `v(f(P)) > 2 v(df/dx_k (P))` for some coordinate `k`, the Hensel
/// condition for a root of `f` in `Z_l` near `P`. `point` holds `x` or
/// `(x, y)`; a missing `y` is zero.
pub fn hensel_liftable(f: &IntPoly2, point: &[BigInt], ell: u64) -> bool {
    let zero = BigInt::zero();
    let x = point.first().unwrap_or(&zero);
    let y = point.get(1).unwrap_or(&zero);
    let value = f.eval(x, y);
    let partials = [f.partial_x().eval(x, y), f.partial_y().eval(x, y)];
    partials.iter().filter(|d| !d.is_zero()).any(|d| {
        let vd = v(d, ell);
        value.is_zero() || v(&value, ell) > 2 * vd
    })
}

/// Which of the two descent families a space belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    /// `y^2 = d1 x^4 - 2s(p+q) x^2 + d2`, `d1 d2 = 4`.
    #[serde(rename = "C")]
    C,
    /// `y^2 = d1 x^4 + s(p+q) x^2 + d2`, `d1 d2 = pq`.
    #[serde(rename = "Cprime")]
    CPrime,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::C => "C",
            Family::CPrime => "C'",
        })
    }
}

impl std::str::FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "C" | "c" => Ok(Family::C),
            "Cprime" | "cprime" | "C'" | "c'" => Ok(Family::CPrime),
            other => Err(format!("unknown family {other:?}, expected C or Cprime")),
        }
    }
}

impl Family {
    /// Admissible `d1`, in ascending `|d1|` with the positive value first.
    pub fn parameters(self, e: &TwinCurve) -> Vec<i128> {
        let bases: Vec<i128> = match self {
            Family::C => vec![1, 2],
            Family::CPrime => {
                let (p, q) = (e.p() as i128, e.q() as i128);
                vec![1, p, q, p * q]
            }
        };
        bases.into_iter().flat_map(|b| [b, -b]).collect()
    }

    /// The constant `d1 d2`.
    pub fn product(self, e: &TwinCurve) -> i128 {
        match self {
            Family::C => 4,
            Family::CPrime => e.p() as i128 * e.q() as i128,
        }
    }

    /// The middle coefficient `A`.
    pub fn middle(self, e: &TwinCurve) -> BigInt {
        match self {
            Family::C => -2 * e.a2(),
            Family::CPrime => e.a2(),
        }
    }
}

/// One homogeneous space `y^2 = d1 x^4 + A x^2 + d2` of a descent family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuarticSpace {
    curve: TwinCurve,
    family: Family,
    d1: i128,
    d2: i128,
    middle: BigInt,
}

impl QuarticSpace {
    pub fn new(curve: TwinCurve, family: Family, d1: i128) -> Result<Self, LocalSolveError> {
        if !family.parameters(&curve).contains(&d1) {
            return Err(LocalSolveError::InvalidD1 { family, d1 });
        }
        Ok(QuarticSpace {
            curve,
            family,
            d1,
            d2: family.product(&curve) / d1,
            middle: family.middle(&curve),
        })
    }

    /// Every space of the family, in the order of [`Family::parameters`].
    pub fn all(curve: TwinCurve, family: Family) -> Vec<QuarticSpace> {
        family
            .parameters(&curve)
            .into_iter()
            .map(|d1| QuarticSpace::new(curve, family, d1).expect("parameter from the family list"))
            .collect()
    }

    pub fn curve(&self) -> &TwinCurve {
        &self.curve
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn d1(&self) -> i128 {
        self.d1
    }

    pub fn d2(&self) -> i128 {
        self.d2
    }

    pub fn middle(&self) -> &BigInt {
        &self.middle
    }

    pub fn quartic(&self) -> Quartic {
        Quartic::even(self.d1.into(), self.middle.clone(), self.d2.into())
            .expect("family quartics have nonzero discriminant")
    }

    /// Whether the rational point `(x, y)` lies on the space.
    pub fn contains(&self, x: &BigRational, y: &BigRational) -> bool {
        let x2 = x * x;
        let rhs = BigRational::from_integer(self.d1.into()) * &x2 * &x2
            + BigRational::from_integer(self.middle.clone()) * &x2
            + BigRational::from_integer(self.d2.into());
        y * y == rhs
    }
}

impl fmt::Display for QuarticSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({}): y^2 = {}", self.family, self.d1, self.quartic())
    }
}

/// A place of `Q`: the real place or a prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LocalPlace {
    Infinity,
    Prime(u64),
}

impl fmt::Display for LocalPlace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LocalPlace::Infinity => f.write_str("inf"),
            LocalPlace::Prime(ell) => write!(f, "{ell}"),
        }
    }
}

/// `{inf, 2, p, q}` for a curve.
pub fn relevant_places(e: &TwinCurve) -> [LocalPlace; 4] {
    [
        LocalPlace::Infinity,
        LocalPlace::Prime(2),
        LocalPlace::Prime(e.p()),
        LocalPlace::Prime(e.q()),
    ]
}

/// Whether `d1 x^4 + A x^2 + d2` takes a nonnegative value on the reals.
pub fn solvable_real(space: &QuarticSpace) -> bool {
    let (d1, d2) = (space.d1, space.d2);
    if d1 > 0 || d2 >= 0 {
        return true;
    }
    let a = space.middle();
    a.is_positive() && a * a >= BigInt::from(4) * BigInt::from(d1) * BigInt::from(d2)
}

/// A real point `(x, y)` on the space, when one exists.
pub fn real_point(space: &QuarticSpace) -> Option<(f64, f64)> {
    if !solvable_real(space) {
        return None;
    }
    let (d1, d2) = (space.d1 as f64, space.d2 as f64);
    let a = space.middle().to_f64().unwrap_or(f64::NAN);
    let x = if d2 >= 0.0 {
        0.0
    } else if d1 > 0.0 {
        // beyond the largest real root of d1 t^2 + a t + d2 in t = x^2
        let t = (-a + (a * a - 4.0 * d1 * d2).sqrt()) / (2.0 * d1);
        t.max(0.0).sqrt() + 1.0
    } else {
        // the maximum of the quartic sits at x^2 = a / (-2 d1)
        (a / (-2.0 * d1)).sqrt()
    };
    let g = d1 * x.powi(4) + a * x * x + d2;
    Some((x, g.max(0.0).sqrt()))
}

/// The fast sufficient test at an odd prime: the reduction of the quartic
/// is not a constant times a square. `false` means inconclusive.
pub fn reduction_nonsquare_test(space: &QuarticSpace, ell: u64) -> bool {
    space.quartic().reduction_not_const_square(ell)
}

/// Which chart a local witness lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Chart {
    /// `x` in `Z_l`.
    Affine,
    /// `x = 1/t` with `t` in `Z_l`, on the reciprocal quartic.
    Reciprocal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Acceptance {
    /// `g(x0) = 0` exactly.
    Root,
    /// Every value on the class is a nonzero square.
    SquareClass,
    /// Hensel's inequality gives a root of `g` in the class.
    Hensel,
}

/// A residue class `x0 + l^k Z_l` on which `y^2 = g(x)` has a point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalWitness {
    pub ell: u64,
    pub chart: Chart,
    pub x0: BigInt,
    pub precision: u32,
    pub reason: Acceptance,
}

enum Search {
    Found(BigInt, u32, Acceptance),
    Exhausted,
    Undecided,
}

struct Class {
    x0: BigInt,
    k: u32,
    h: [BigInt; 5],
}

enum Verdict {
    Accept(Acceptance),
    Reject,
    Open,
}

fn classify(class: &Class, ell: u64) -> Verdict {
    let h = &class.h;
    if h[0].is_zero() {
        return Verdict::Accept(Acceptance::Root);
    }
    let v0 = v(&h[0], ell);
    let mu1 = h[1..].iter().filter(|c| !c.is_zero()).map(|c| v(c, ell)).min();
    let margin = if ell == 2 { 3 } else { 1 };
    if mu1.is_none_or(|m| m >= v0 + margin) {
        return if is_square_in_qell(&h[0], ell) {
            Verdict::Accept(Acceptance::SquareClass)
        } else {
            Verdict::Reject
        };
    }
    // h[1] = l^k g'(x0)
    if !h[1].is_zero() && i64::from(v0) > 2 * (i64::from(v(&h[1], ell)) - i64::from(class.k)) {
        return Verdict::Accept(Acceptance::Hensel);
    }
    Verdict::Open
}

/// Coefficients of `h(j + s t)`.
fn shift(h: &[BigInt; 5], j: &BigInt, s: &BigInt) -> [BigInt; 5] {
    let mut c = h.clone();
    for i in 0..4 {
        for k in (i..4).rev() {
            let next = c[k + 1].clone();
            c[k] += j * next;
        }
    }
    let mut power = BigInt::one();
    for coeff in c.iter_mut().skip(1) {
        power *= s;
        *coeff *= &power;
    }
    c
}

fn search(g: &Quartic, ell: u64, max_depth: u32) -> Search {
    let ell_big = BigInt::from(ell);
    let mut queue = VecDeque::from([Class {
        x0: BigInt::zero(),
        k: 0,
        h: g.coeffs.clone(),
    }]);
    let mut undecided = false;
    while let Some(class) = queue.pop_front() {
        match classify(&class, ell) {
            Verdict::Accept(reason) => return Search::Found(class.x0, class.k, reason),
            Verdict::Reject => continue,
            Verdict::Open => {}
        }
        if class.k >= max_depth {
            undecided = true;
            continue;
        }
        let step = ell_big.pow(class.k);
        let child = |t0: u64| {
            let t0 = BigInt::from(t0);
            Class {
                x0: &class.x0 + &step * &t0,
                k: class.k + 1,
                h: shift(&class.h, &t0, &ell_big),
            }
        };
        if ell == 2 {
            queue.extend([child(0), child(1)]);
            continue;
        }
        // Odd l: with h = l^m h~ and h~ primitive, a child t0 where
        // h~(t0) is a unit is settled by the parity of m and the residue
        // symbol of h~(t0). Only roots of h~ mod l need a deeper look.
        let m = class.h.iter().filter(|c| !c.is_zero()).map(|c| v(c, ell)).min().unwrap();
        let content = ell_big.pow(m);
        let reduced = FpPoly::new(
            class.h.iter().map(|c| rem_u64(&(c / &content), ell)).collect(),
            ell,
        );
        for t0 in 0..ell {
            let val = reduced.eval(t0);
            if val == 0 {
                queue.push_back(child(t0));
            } else if m % 2 == 0 && legendre_u64(val, ell) == 1 {
                let x0 = &class.x0 + &step * BigInt::from(t0);
                return Search::Found(x0, class.k + 1, Acceptance::SquareClass);
            }
        }
    }
    if undecided {
        Search::Undecided
    } else {
        Search::Exhausted
    }
}

/// Searches both charts for a residue class carrying an `l`-adic point.
pub fn find_local_point(g: &Quartic, ell: u64) -> Result<Option<LocalWitness>, LocalSolveError> {
    if !arith::is_prime(ell) {
        return Err(LocalSolveError::NotPrime(ell));
    }
    let depth = g.depth_bound(ell);
    let mut exhausted = true;
    for (chart, quartic) in [(Chart::Affine, g.clone()), (Chart::Reciprocal, g.reciprocal())] {
        match search(&quartic, ell, depth) {
            Search::Found(x0, precision, reason) => {
                return Ok(Some(LocalWitness { ell, chart, x0, precision, reason }))
            }
            Search::Exhausted => {}
            Search::Undecided => exhausted = false,
        }
    }
    if exhausted {
        Ok(None)
    } else {
        Err(LocalSolveError::DepthExhausted { ell, depth })
    }
}

/// Whether `y^2 = g(x)` has a point over `Q_l`.
pub fn quartic_solvable_at(g: &Quartic, ell: u64) -> Result<bool, LocalSolveError> {
    if ell != 2 && arith::is_prime(ell) && g.reduction_not_const_square(ell) {
        return Ok(true);
    }
    Ok(find_local_point(g, ell)?.is_some())
}

/// Whether the space has a point over `Q_l`.
pub fn solvable_at(space: &QuarticSpace, ell: u64) -> Result<bool, LocalSolveError> {
    quartic_solvable_at(&space.quartic(), ell)
}

pub fn solvable_at_place(space: &QuarticSpace, place: LocalPlace) -> Result<bool, LocalSolveError> {
    match place {
        LocalPlace::Infinity => Ok(solvable_real(space)),
        LocalPlace::Prime(ell) => solvable_at(space, ell),
    }
}

/// Local verdicts at `inf, 2, p, q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlaceVerdicts {
    pub inf: bool,
    #[serde(rename = "2")]
    pub two: bool,
    pub p: bool,
    pub q: bool,
}

impl PlaceVerdicts {
    pub fn all(&self) -> bool {
        self.inf && self.two && self.p && self.q
    }

    /// The first place where the space fails, if any.
    pub fn first_failure(&self, e: &TwinCurve) -> Option<LocalPlace> {
        let flags = [self.inf, self.two, self.p, self.q];
        relevant_places(e)
            .into_iter()
            .zip(flags)
            .find_map(|(place, ok)| (!ok).then_some(place))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpaceVerdicts {
    pub family: Family,
    pub d1: i128,
    pub verdicts: PlaceVerdicts,
}

pub fn space_verdicts(space: &QuarticSpace) -> SpaceVerdicts {
    let at = |ell| solvable_at(space, ell).expect("search settles at the bad primes");
    let e = space.curve();
    SpaceVerdicts {
        family: space.family,
        d1: space.d1,
        verdicts: PlaceVerdicts {
            inf: solvable_real(space),
            two: at(2),
            p: at(e.p()),
            q: at(e.q()),
        },
    }
}

/// Solvable at every place of `{inf, 2, p, q}`; the other places impose
/// nothing since `d1` and `d2` are units there.
pub fn solvable_everywhere(space: &QuarticSpace) -> bool {
    space_verdicts(space).verdicts.all()
}
