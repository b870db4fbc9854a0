//! Selmer groups of the two 2-isogenies, the bound on
//! `rank E(Q) + dim Sha[2]`, and rank certificates.

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{self, square_class};
use crate::curve::{CurveModel, IsogenousCurve, RationalPoint, Sign, TorsionGroup, TwinCurve};
use crate::localsolve::{space_verdicts, Family, QuarticSpace, SpaceVerdicts};
use crate::rank1::{self, RankOneCertificate};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DescentError {
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
}

/// Multiplies squarefree integers modulo squares.
pub fn mul_mod_squares(a: i128, b: i128) -> i128 {
    let g = num_integer::gcd(a, b);
    (a / g) * (b / g)
}

/// A finite subgroup of `Q*/Q*^2` given by squarefree representatives.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisorClassGroup {
    pub ambient: Vec<i128>,
}

impl DivisorClassGroup {
    /// The group of squarefree divisors of `n` with either sign.
    pub fn for_family(e: &TwinCurve, family: Family) -> Self {
        DivisorClassGroup { ambient: family.parameters(e) }
    }

    pub fn contains(&self, d: i128) -> bool {
        self.ambient.contains(&d)
    }

    /// Whether `set` contains 1 and is closed under multiplication.
    pub fn is_subgroup(set: &[i128]) -> bool {
        set.contains(&1)
            && set
                .iter()
                .all(|&a| set.iter().all(|&b| set.contains(&mul_mod_squares(a, b))))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SelmerKind {
    Phi,
    PhiHat,
    Two,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelmerGroup {
    pub kind: SelmerKind,
    /// Representatives in ambient order; empty for [`SelmerKind::Two`].
    pub elements: Vec<i128>,
    pub dim: u32,
}

impl SelmerGroup {
    fn from_elements(kind: SelmerKind, elements: Vec<i128>) -> Self {
        assert!(
            DivisorClassGroup::is_subgroup(&elements),
            "Selmer set {elements:?} is not a subgroup"
        );
        let dim = elements.len().trailing_zeros();
        assert_eq!(1usize << dim, elements.len(), "subgroup order is a power of two");
        SelmerGroup { kind, elements, dim }
    }

    pub fn contains(&self, d: i128) -> bool {
        self.elements.contains(&d)
    }
}

fn selmer_from_verdicts(kind: SelmerKind, verdicts: &[SpaceVerdicts]) -> SelmerGroup {
    let elements = verdicts
        .iter()
        .filter(|sv| sv.verdicts.all())
        .map(|sv| sv.d1)
        .collect();
    SelmerGroup::from_elements(kind, elements)
}

fn family_verdicts(e: &TwinCurve, family: Family) -> Vec<SpaceVerdicts> {
    QuarticSpace::all(*e, family).iter().map(space_verdicts).collect()
}

/// `S^(phi)(E/Q)`: the `d1 | 4` whose space `C_(d1)` is everywhere
/// locally solvable.
pub fn selmer_phi(e: &TwinCurve) -> SelmerGroup {
    selmer_from_verdicts(SelmerKind::Phi, &family_verdicts(e, Family::C))
}

/// `S^(phi^)(E'/Q)`: the `d1 | pq` whose space `C'_(d1)` is everywhere
/// locally solvable.
pub fn selmer_phihat(e: &TwinCurve) -> SelmerGroup {
    selmer_from_verdicts(SelmerKind::PhiHat, &family_verdicts(e, Family::CPrime))
}

/// Class of `P` in `E(Q) / phi^(E'(Q))`, read in `Q*/Q*^2` through `x`.
pub fn phihat_class(e: &TwinCurve, pt: &RationalPoint) -> Option<i128> {
    class_via_x(pt, e.a4())
}

/// Class of `P'` in `E'(Q) / phi(E(Q))`, read in `Q*/Q*^2` through `x'`.
pub fn phi_class(ep: &IsogenousCurve, pt: &RationalPoint) -> Option<i128> {
    class_via_x(pt, ep.a4())
}

fn class_via_x(pt: &RationalPoint, at_origin: num_bigint::BigInt) -> Option<i128> {
    let x = pt.x()?;
    if x.is_zero() {
        Some(square_class(&BigRational::from_integer(at_origin)))
    } else {
        Some(square_class(x))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredictedDims {
    pub dim_phi: u32,
    pub dim_phihat: u32,
    pub dim_selmer2: u32,
    pub bound: u32,
}

/// The closed-form dimensions by `p mod 8`.
pub fn predicted_dims(p: u64, sigma: Sign) -> Result<PredictedDims, DescentError> {
    if p == 2 || !arith::is_prime(p) {
        return Err(DescentError::NotOddPrime(p));
    }
    let (dim_phi, dim_phihat) = match (sigma, p % 8) {
        (Sign::Plus, 5) => (0, 2),
        (Sign::Plus, 1 | 3) => (0, 3),
        (Sign::Plus, _) => (1, 3),
        (Sign::Minus, 3 | 5) => (0, 2),
        (Sign::Minus, _) => (1, 2),
    };
    Ok(PredictedDims {
        dim_phi,
        dim_phihat,
        dim_selmer2: dim_phi + dim_phihat,
        bound: dim_phi + dim_phihat - 2,
    })
}

/// What the descent proves about `E(Q)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Certificate {
    /// Bound zero: rank 0, `Sha[2] = 0`, `E(Q)` is its torsion.
    RankZero { torsion: TorsionGroup, sha2_dim: u32 },
    /// Bound one plus an explicit point of infinite order: rank 1, `Sha[2] = 0`.
    RankOne(RankOneCertificate),
    /// Only `rank + dim Sha[2] = bound` is known.
    BoundOnly { bound: u32 },
}

impl Certificate {
    pub fn label(&self) -> &'static str {
        match self {
            Certificate::RankZero { .. } => "RankZero",
            Certificate::RankOne(_) => "RankOne",
            Certificate::BoundOnly { .. } => "BoundOnly",
        }
    }

    pub fn witness_point(&self) -> Option<&RationalPoint> {
        match self {
            Certificate::RankOne(cert) => Some(&cert.point),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DescentSummary {
    pub curve: TwinCurve,
    pub spaces: Vec<SpaceVerdicts>,
    pub selmer_phi: SelmerGroup,
    pub selmer_phihat: SelmerGroup,
    pub dim_selmer2: u32,
    pub rank_sha_bound: u32,
    pub certificate: Certificate,
}

impl DescentSummary {
    pub fn selmer2(&self) -> SelmerGroup {
        SelmerGroup {
            kind: SelmerKind::Two,
            elements: Vec::new(),
            dim: self.dim_selmer2,
        }
    }

    pub fn dims(&self) -> PredictedDims {
        PredictedDims {
            dim_phi: self.selmer_phi.dim,
            dim_phihat: self.selmer_phihat.dim,
            dim_selmer2: self.dim_selmer2,
            bound: self.rank_sha_bound,
        }
    }
}

/// Both Selmer groups, the bound and the strongest certificate available.
pub fn descend(e: &TwinCurve) -> DescentSummary {
    let phi_spaces = family_verdicts(e, Family::C);
    let phihat_spaces = family_verdicts(e, Family::CPrime);
    let selmer_phi = selmer_from_verdicts(SelmerKind::Phi, &phi_spaces);
    let selmer_phihat = selmer_from_verdicts(SelmerKind::PhiHat, &phihat_spaces);
    let dim_selmer2 = selmer_phi.dim + selmer_phihat.dim;
    // the phi-hat group holds the image of all of E[2], so its dimension is at least 2
    let rank_sha_bound = dim_selmer2 - 2;
    let certificate = match rank_sha_bound {
        0 => Certificate::RankZero {
            torsion: e.torsion_over_q().expect("torsion is Z/2 x Z/2 on this family"),
            sha2_dim: 0,
        },
        1 => match rank1::rank_one_certificate(e) {
            Some(cert) => Certificate::RankOne(cert),
            None => Certificate::BoundOnly { bound: 1 },
        },
        b => Certificate::BoundOnly { bound: b },
    };
    let mut spaces = phi_spaces;
    spaces.extend(phihat_spaces);
    DescentSummary {
        curve: *e,
        spaces,
        selmer_phi,
        selmer_phihat,
        dim_selmer2,
        rank_sha_bound,
        certificate,
    }
}
