//! The curve `E: y^2 = x(x + sp)(x + sq)`, its 2-isogenous partner
//! `E': y^2 = x^3 - 2s(p+q)x^2 + 4x`, the isogenies between them and exact
//! group arithmetic over the rationals.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{self, PrimePair};
use crate::localdata;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CurveError {
    #[error("point {0} is not on the curve")]
    NotOnCurve(Box<RationalPoint>),
    #[error("torsion bound did not close: gcd of point counts is {0}")]
    TorsionUnresolved(u64),
}

/// The sign `s = +1` or `-1` selecting `E_+` or `E_-`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "i8", try_from = "i8")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

impl From<Sign> for i8 {
    fn from(s: Sign) -> i8 {
        s.value() as i8
    }
}

impl TryFrom<i8> for Sign {
    type Error = String;

    fn try_from(v: i8) -> Result<Self, Self::Error> {
        match v {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            other => Err(format!("sign must be +1 or -1, got {other}")),
        }
    }
}

impl std::str::FromStr for Sign {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "+1" | "1" | "+" => Ok(Sign::Plus),
            "-1" | "-" => Ok(Sign::Minus),
            other => Err(format!("sign must be +1 or -1, got {other:?}")),
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+1",
            Sign::Minus => "-1",
        })
    }
}

/// A rational point: the identity or an affine pair of exact rationals.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RationalPoint {
    Infinity,
    Affine { x: BigRational, y: BigRational },
}

impl RationalPoint {
    pub fn affine(x: BigRational, y: BigRational) -> Self {
        RationalPoint::Affine { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        RationalPoint::Affine {
            x: BigRational::from_integer(x.into()),
            y: BigRational::from_integer(y.into()),
        }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, RationalPoint::Infinity)
    }

    pub fn x(&self) -> Option<&BigRational> {
        match self {
            RationalPoint::Infinity => None,
            RationalPoint::Affine { x, .. } => Some(x),
        }
    }

    pub fn y(&self) -> Option<&BigRational> {
        match self {
            RationalPoint::Infinity => None,
            RationalPoint::Affine { y, .. } => Some(y),
        }
    }

    /// Naive height `max(|num x|, |den x|)`; zero for the identity.
    pub fn naive_height(&self) -> BigInt {
        match self {
            RationalPoint::Infinity => BigInt::zero(),
            RationalPoint::Affine { x, .. } => x.numer().abs().max(x.denom().clone()),
        }
    }
}

impl fmt::Display for RationalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RationalPoint::Infinity => f.write_str("O"),
            RationalPoint::Affine { x, y } => write!(f, "({x}, {y})"),
        }
    }
}

/// Serde helpers writing rationals as `"num/den"` strings.
pub mod ratstr {
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn format(r: &BigRational) -> String {
        format!("{}/{}", r.numer(), r.denom())
    }

    pub fn parse(s: &str) -> Result<BigRational, String> {
        let (n, d) = s.split_once('/').unwrap_or((s, "1"));
        let n: BigInt = n.trim().parse().map_err(|e| format!("bad numerator in {s:?}: {e}"))?;
        let d: BigInt = d.trim().parse().map_err(|e| format!("bad denominator in {s:?}: {e}"))?;
        if d == BigInt::from(0) {
            return Err(format!("zero denominator in {s:?}"));
        }
        Ok(BigRational::new(n, d))
    }

    pub fn serialize<S: Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let s = String::deserialize(d)?;
        parse(&s).map_err(D::Error::custom)
    }
}

/// Serde helper writing big integers as decimal strings.
pub mod intstr {
    use num_bigint::BigInt;
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(n: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&n.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        String::deserialize(d)?.parse().map_err(D::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum PointRepr {
    Infinity(String),
    Affine {
        #[serde(with = "ratstr")]
        x: BigRational,
        #[serde(with = "ratstr")]
        y: BigRational,
    },
}

impl Serialize for RationalPoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            RationalPoint::Infinity => PointRepr::Infinity("O".into()).serialize(s),
            RationalPoint::Affine { x, y } => PointRepr::Affine {
                x: x.clone(),
                y: y.clone(),
            }
            .serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for RationalPoint {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match PointRepr::deserialize(d)? {
            PointRepr::Infinity(tag) if tag == "O" => Ok(RationalPoint::Infinity),
            PointRepr::Infinity(tag) => {
                Err(serde::de::Error::custom(format!("unknown point tag {tag:?}")))
            }
            PointRepr::Affine { x, y } => Ok(RationalPoint::Affine { x, y }),
        }
    }
}

/// General Weierstrass coefficients `[a1, a2, a3, a4, a6]` with the
/// standard derived quantities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeierstrassCoefficients {
    pub a1: BigInt,
    pub a2: BigInt,
    pub a3: BigInt,
    pub a4: BigInt,
    pub a6: BigInt,
}

impl WeierstrassCoefficients {
    pub fn b2(&self) -> BigInt {
        &self.a1 * &self.a1 + 4 * &self.a2
    }

    pub fn b4(&self) -> BigInt {
        2 * &self.a4 + &self.a1 * &self.a3
    }

    pub fn b6(&self) -> BigInt {
        &self.a3 * &self.a3 + 4 * &self.a6
    }

    pub fn b8(&self) -> BigInt {
        let (a1, a2, a3, a4, a6) = (&self.a1, &self.a2, &self.a3, &self.a4, &self.a6);
        a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
    }

    pub fn c4(&self) -> BigInt {
        let b2 = self.b2();
        &b2 * &b2 - 24 * self.b4()
    }

    pub fn c6(&self) -> BigInt {
        let (b2, b4, b6) = (self.b2(), self.b4(), self.b6());
        -(&b2 * &b2 * &b2) + 36 * &b2 * &b4 - 216 * b6
    }

    pub fn discriminant(&self) -> BigInt {
        let (b2, b4, b6, b8) = (self.b2(), self.b4(), self.b6(), self.b8());
        -(&b2 * &b2 * &b8) - 8 * &b4 * &b4 * &b4 - 27 * &b6 * &b6 + 9 * &b2 * &b4 * &b6
    }

    /// Coordinates change `x = x' + r`, `y = y' + s x' + t`.
    pub fn transform(&self, r: &BigInt, s: &BigInt, t: &BigInt) -> Self {
        let (a1, a2, a3, a4, a6) = (&self.a1, &self.a2, &self.a3, &self.a4, &self.a6);
        WeierstrassCoefficients {
            a1: a1 + 2 * s,
            a2: a2 - s * a1 + 3 * r - s * s,
            a3: a3 + r * a1 + 2 * t,
            a4: a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t,
            a6: a6 + r * a4 + r * r * a2 + r * r * r - t * a3 - t * t - r * t * a1,
        }
    }
}

/// Standard invariants of a Weierstrass model.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Invariants {
    #[serde(with = "intstr")]
    pub b2: BigInt,
    #[serde(with = "intstr")]
    pub b4: BigInt,
    #[serde(with = "intstr")]
    pub b6: BigInt,
    #[serde(with = "intstr")]
    pub b8: BigInt,
    #[serde(with = "intstr")]
    pub c4: BigInt,
    #[serde(with = "intstr")]
    pub c6: BigInt,
    #[serde(with = "intstr")]
    pub disc: BigInt,
    #[serde(with = "ratstr")]
    pub j: BigRational,
}

impl From<&WeierstrassCoefficients> for Invariants {
    fn from(w: &WeierstrassCoefficients) -> Self {
        let c4 = w.c4();
        let disc = w.discriminant();
        Invariants {
            b2: w.b2(),
            b4: w.b4(),
            b6: w.b6(),
            b8: w.b8(),
            j: BigRational::new(&c4 * &c4 * &c4, disc.clone()),
            c4,
            c6: w.c6(),
            disc,
        }
    }
}

/// Curves of the shape `y^2 = x^3 + a2 x^2 + a4 x`, which covers both `E`
/// and `E'`. The group law lives here.
pub trait CurveModel {
    fn a2(&self) -> BigInt;
    fn a4(&self) -> BigInt;

    fn coefficients(&self) -> WeierstrassCoefficients {
        WeierstrassCoefficients {
            a1: BigInt::zero(),
            a2: self.a2(),
            a3: BigInt::zero(),
            a4: self.a4(),
            a6: BigInt::zero(),
        }
    }

    /// Right-hand side `x^3 + a2 x^2 + a4 x`.
    fn rhs(&self, x: &BigRational) -> BigRational {
        let a2 = BigRational::from_integer(self.a2());
        let a4 = BigRational::from_integer(self.a4());
        x * (x * x + a2 * x + a4)
    }

    fn is_on_curve(&self, pt: &RationalPoint) -> bool {
        match pt {
            RationalPoint::Infinity => true,
            RationalPoint::Affine { x, y } => y * y == self.rhs(x),
        }
    }

    fn check(&self, pt: &RationalPoint) -> Result<(), CurveError> {
        if self.is_on_curve(pt) {
            Ok(())
        } else {
            Err(CurveError::NotOnCurve(Box::new(pt.clone())))
        }
    }

    fn neg(&self, pt: &RationalPoint) -> RationalPoint {
        match pt {
            RationalPoint::Infinity => RationalPoint::Infinity,
            RationalPoint::Affine { x, y } => RationalPoint::affine(x.clone(), -y),
        }
    }

    fn add(&self, p1: &RationalPoint, p2: &RationalPoint) -> Result<RationalPoint, CurveError> {
        self.check(p1)?;
        self.check(p2)?;
        Ok(self.add_unchecked(p1, p2))
    }

    fn add_unchecked(&self, p1: &RationalPoint, p2: &RationalPoint) -> RationalPoint {
        let (x1, y1, x2, y2) = match (p1, p2) {
            (RationalPoint::Infinity, other) | (other, RationalPoint::Infinity) => {
                return other.clone()
            }
            (RationalPoint::Affine { x: x1, y: y1 }, RationalPoint::Affine { x: x2, y: y2 }) => {
                (x1, y1, x2, y2)
            }
        };
        let a2 = BigRational::from_integer(self.a2());
        let a4 = BigRational::from_integer(self.a4());
        let slope = if x1 == x2 {
            if y1 != y2 || y1.is_zero() {
                return RationalPoint::Infinity;
            }
            let three = BigRational::from_integer(3.into());
            let two = BigRational::from_integer(2.into());
            (three * x1 * x1 + &two * &a2 * x1 + a4) / (two * y1)
        } else {
            (y2 - y1) / (x2 - x1)
        };
        let x3 = &slope * &slope - a2 - x1 - x2;
        let y3 = slope * (x1 - &x3) - y1;
        RationalPoint::affine(x3, y3)
    }

    fn double(&self, pt: &RationalPoint) -> Result<RationalPoint, CurveError> {
        self.add(pt, pt)
    }

    /// `[n]P` by double-and-add; negative `n` negates.
    fn mul(&self, n: i64, pt: &RationalPoint) -> Result<RationalPoint, CurveError> {
        self.check(pt)?;
        let mut base = if n < 0 { self.neg(pt) } else { pt.clone() };
        let mut k = n.unsigned_abs();
        let mut acc = RationalPoint::Infinity;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add_unchecked(&acc, &base);
            }
            base = self.add_unchecked(&base, &base);
            k >>= 1;
        }
        Ok(acc)
    }
}

/// `E_s: y^2 = x(x + sp)(x + sq)` for a twin pair `(p, q)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TwinCurve {
    pub pair: PrimePair,
    pub sigma: Sign,
}

impl TwinCurve {
    pub fn new(pair: PrimePair, sigma: Sign) -> Self {
        TwinCurve { pair, sigma }
    }

    /// Convenience constructor validating that `p` and `p + 2` are prime.
    pub fn from_p(p: u64, sigma: Sign) -> Result<Self, arith::ArithError> {
        Ok(TwinCurve::new(PrimePair::new(p)?, sigma))
    }

    pub fn p(&self) -> u64 {
        self.pair.p()
    }

    pub fn q(&self) -> u64 {
        self.pair.q()
    }

    pub fn sign(&self) -> i64 {
        self.sigma.value()
    }

    pub fn invariants(&self) -> Invariants {
        Invariants::from(&self.coefficients())
    }

    pub fn isogenous(&self) -> IsogenousCurve {
        IsogenousCurve { source: *self }
    }

    /// `{O, (0,0), (-sp, 0), (-sq, 0)}`.
    pub fn two_torsion(&self) -> Vec<RationalPoint> {
        let s = self.sign();
        vec![
            RationalPoint::Infinity,
            RationalPoint::from_ints(0, 0),
            RationalPoint::from_ints(-s * self.p() as i64, 0),
            RationalPoint::from_ints(-s * self.q() as i64, 0),
        ]
    }

    /// The isogeny `phi: E -> E'`, `(x, y) -> (y^2/x^2, y(pq - x^2)/x^2)`.
    ///
    /// The kernel `{O, (0,0)}` maps to `O`.
    pub fn phi(&self, pt: &RationalPoint) -> Result<RationalPoint, CurveError> {
        self.check(pt)?;
        match pt {
            RationalPoint::Infinity => Ok(RationalPoint::Infinity),
            RationalPoint::Affine { x, .. } if x.is_zero() => Ok(RationalPoint::Infinity),
            RationalPoint::Affine { x, y } => {
                let x2 = x * x;
                let pq = BigRational::from_integer(self.a4());
                let image = RationalPoint::affine(y * y / &x2, y * (pq - &x2) / &x2);
                debug_assert!(self.isogenous().is_on_curve(&image));
                Ok(image)
            }
        }
    }

    /// Torsion subgroup over the rationals.
    ///
    /// `E(Q)_tors` embeds in `E~(F_l)` for every odd prime `l` of good
    /// reduction, so the gcd of those counts bounds it; it already contains
    /// the four 2-torsion points. The counts are computed, never assumed.
    pub fn torsion_over_q(&self) -> Result<TorsionGroup, CurveError> {
        let mut certificate = Vec::new();
        let mut bound = 0u64;
        for ell in arith::primes_up_to(1_000).into_iter().skip(1) {
            if ell == self.p() || ell == self.q() {
                continue;
            }
            let count = localdata::count_points_mod(self, ell)
                .expect("ell is an odd prime of good reduction");
            certificate.push(TorsionCertificate { ell, count });
            bound = bound.gcd(&count);
            if bound == 4 {
                let points: Vec<_> = self.two_torsion().into_iter().skip(1).collect();
                return Ok(TorsionGroup {
                    structure: TorsionStructure::Z2xZ2,
                    generators: points,
                    certificate,
                });
            }
        }
        Err(CurveError::TorsionUnresolved(bound))
    }
}

impl CurveModel for TwinCurve {
    fn a2(&self) -> BigInt {
        BigInt::from(self.sign()) * BigInt::from(self.p() + self.q())
    }

    fn a4(&self) -> BigInt {
        BigInt::from(self.p()) * BigInt::from(self.q())
    }
}

impl fmt::Display for TwinCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (sp, sq) = match self.sigma {
            Sign::Plus => (format!("+ {}", self.p()), format!("+ {}", self.q())),
            Sign::Minus => (format!("- {}", self.p()), format!("- {}", self.q())),
        };
        write!(f, "y^2 = x(x {sp})(x {sq})")
    }
}

/// `E': y^2 = x^3 - 2s(p+q) x^2 + 4x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct IsogenousCurve {
    pub source: TwinCurve,
}

impl IsogenousCurve {
    /// The dual isogeny `E' -> E`, `(x, y) -> (y^2/4x^2, y(4 - x^2)/8x^2)`.
    pub fn phi_hat(&self, pt: &RationalPoint) -> Result<RationalPoint, CurveError> {
        self.check(pt)?;
        match pt {
            RationalPoint::Infinity => Ok(RationalPoint::Infinity),
            RationalPoint::Affine { x, .. } if x.is_zero() => Ok(RationalPoint::Infinity),
            RationalPoint::Affine { x, y } => {
                let x2 = x * x;
                let four = BigRational::from_integer(4.into());
                let eight = BigRational::from_integer(8.into());
                let image = RationalPoint::affine(
                    y * y / (&four * &x2),
                    y * (four - &x2) / (eight * &x2),
                );
                debug_assert!(self.source.is_on_curve(&image));
                Ok(image)
            }
        }
    }
}

impl CurveModel for IsogenousCurve {
    fn a2(&self) -> BigInt {
        -2 * self.source.a2()
    }

    fn a4(&self) -> BigInt {
        BigInt::from(4)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TorsionStructure {
    #[serde(rename = "Z/2 x Z/2")]
    Z2xZ2,
}

impl TorsionStructure {
    pub fn order(self) -> u64 {
        match self {
            TorsionStructure::Z2xZ2 => 4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorsionCertificate {
    pub ell: u64,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorsionGroup {
    pub structure: TorsionStructure,
    /// The three points of order two.
    pub generators: Vec<RationalPoint>,
    /// Point counts `#E~(F_l)` whose gcd pins the torsion order.
    pub certificate: Vec<TorsionCertificate>,
}

impl TorsionGroup {
    /// Every element, identity first.
    pub fn elements(&self) -> Vec<RationalPoint> {
        std::iter::once(RationalPoint::Infinity)
            .chain(self.generators.iter().cloned())
            .collect()
    }

    pub fn contains(&self, pt: &RationalPoint) -> bool {
        pt.is_infinity() || self.generators.contains(pt)
    }
}

/// Evaluates `x` as a rational `n/d`.
pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}
