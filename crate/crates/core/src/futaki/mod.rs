//! Donaldson-Futaki invariants of the special fibres, the K-stability
//! verdict, and the Kähler-Ricci soliton vector field.

mod expint;
mod oracle;
mod soliton;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::degen::{enumerate_candidates, DegenError, DegenerationCandidate};
use crate::divpol::{fano_check, DivisorialPolytope, FanoCertificate, ProjPoint};
use crate::exactgeom::{AffineFn, Polytope, Rat, RatVec};
use crate::real::{bits_for_digits, Real};

pub use expint::{exp_divdiff, ExpIntegrator, Moments};
pub use oracle::futaki_oracle_lattice_count;
pub use soliton::{
    solve_soliton_field, solve_soliton_field_on, soliton_verdict, soliton_verdict_for,
    SolitonField, SolitonVerdict,
};

/// Default number of significant decimal digits.
pub const DEFAULT_DIGITS: u32 = 50;
/// Extra decimal digits carried internally.
pub const GUARD_DIGITS: u32 = 20;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FutakiError {
    #[error("special fibre over {0} is not normal")]
    NonNormalFiber(ProjPoint),
    #[error("polytope has zero volume")]
    ZeroVolume,
    #[error("exponential divided difference over a spread of {spread} loses too much precision")]
    PrecisionLoss { spread: f64 },
    #[error("Newton iteration did not converge after {iterations} steps (residual {residual})")]
    NonConvergence { iterations: usize, residual: f64 },
    #[error("precision of {0} digits is outside 16..=2000")]
    InvalidPrecision(u32),
    #[error("lattice point count {count} exceeds the budget {budget}")]
    TooManyLatticePoints { count: u128, budget: u128 },
    #[error(transparent)]
    Degen(#[from] DegenError),
}

/// Working precision in bits for a requested number of digits.
pub fn working_bits(digits: u32) -> Result<u32, FutakiError> {
    if !(16..=2000).contains(&digits) {
        return Err(FutakiError::InvalidPrecision(digits));
    }
    Ok(bits_for_digits(digits + GUARD_DIGITS))
}

/// `10^e` as a `Real`.
pub fn pow10(e: i32, bits: u32) -> Real {
    let ten = Rat::from_integer(BigInt::from(10));
    let r = if e >= 0 {
        num_traits::pow(ten, e as usize)
    } else {
        Rat::from_integer(BigInt::from(1)) / num_traits::pow(ten, (-e) as usize)
    };
    Real::from_rat(&r, bits)
}

/// Donaldson-Futaki invariant of the test configuration given by `(v, m)`:
/// `<b_Q, (-m v, m)>`.
pub fn df_invariant(c: &DegenerationCandidate, v: &RatVec, m: &BigInt) -> Result<Rat, FutakiError> {
    if !c.normal {
        return Err(FutakiError::NonNormalFiber(c.q.clone()));
    }
    let b = c.barycenter();
    let mr = Rat::from_integer(m.clone());
    let mut w = v.scale(&-mr.clone());
    w.0.push(mr);
    Ok(b.dot(&w))
}

/// Weight for [`exp_moment`].
#[derive(Clone, Debug)]
pub enum MomentWeight {
    One,
    Affine(AffineFn),
}

/// `int_P weight(x) e^<xi, x> dx` with `xi` acting on the leading coordinates.
pub fn exp_moment(
    p: &Polytope,
    weight: &MomentWeight,
    xi: &[Real],
    digits: u32,
) -> Result<Real, FutakiError> {
    let bits = working_bits(digits)?;
    let ig = ExpIntegrator::new(p)?;
    match weight {
        MomentWeight::One => ig.mass(xi, bits),
        MomentWeight::Affine(l) => ig.moment(l, xi, bits),
    }
}

/// Modified invariant `m / vol * int_{Delta_Q^0} <x, (-v, 1)> e^<x, xi>`.
pub fn modified_df(
    c: &DegenerationCandidate,
    v: &RatVec,
    m: &BigInt,
    xi: &[Real],
    digits: u32,
) -> Result<Real, FutakiError> {
    if !c.normal {
        return Err(FutakiError::NonNormalFiber(c.q.clone()));
    }
    let bits = working_bits(digits)?;
    let mut lin = -v;
    lin.0.push(Rat::from_integer(1.into()));
    let l = AffineFn::new(lin, Rat::zero());
    let ig = ExpIntegrator::new(&c.delta0)?;
    let integral = ig.moment(&l, xi, bits)?;
    let vol = Real::from_rat(&c.delta0.volume(), bits);
    Ok(&(&integral * &Real::from_bigint(m, bits)) / &vol)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum StabilityStatus {
    EquivariantlyKStable,
    Semistable,
    Unstable,
}

impl std::fmt::Display for StabilityStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            StabilityStatus::EquivariantlyKStable => "equivariantly K-stable",
            StabilityStatus::Semistable => "K-semistable, not K-stable",
            StabilityStatus::Unstable => "K-unstable",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WitnessKind {
    /// first moment `p1(b)` is nonzero, so a product configuration destabilises
    FirstMomentNonzero,
    /// last coordinate of `b_Q` is negative
    SecondMomentNegative,
    /// last coordinate of `b_Q` vanishes
    SecondMomentZero,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub q: ProjPoint,
    pub barycenter: RatVec,
    pub kind: WitnessKind,
}

#[derive(Clone, Debug)]
pub struct StabilityVerdict {
    pub status: StabilityStatus,
    pub witnesses: Vec<Witness>,
    /// First `d` coordinates of the barycenter, independent of `Q`.
    pub futaki_character: RatVec,
    /// `(Q, b_Q, normal)` for every candidate.
    pub barycenters: Vec<(ProjPoint, RatVec, bool)>,
}

/// Equivariant K-stability: every normal candidate must have barycenter
/// in `{0} x R_{>0}`.
pub fn kstability_verdict(cert: &FanoCertificate) -> Result<StabilityVerdict, FutakiError> {
    let cands = enumerate_candidates(cert)?;
    Ok(verdict_from_candidates(cert.psi().dim(), &cands))
}

pub fn kstability_verdict_for(psi: &DivisorialPolytope) -> Result<StabilityVerdict, FutakiError> {
    let cert = fano_check(psi).map_err(DegenError::NotFano)?;
    kstability_verdict(&cert)
}

pub(crate) fn verdict_from_candidates(d: usize, cands: &[DegenerationCandidate]) -> StabilityVerdict {
    let barycenters: Vec<(ProjPoint, RatVec, bool)> = cands
        .iter()
        .map(|c| (c.q.clone(), c.barycenter(), c.normal))
        .collect();
    let generic = barycenters
        .iter()
        .find(|(q, _, _)| q.is_generic())
        .expect("generic candidate is always present");
    let character = generic.1.truncate(d);

    let mut witnesses = Vec::new();
    for (q, b, normal) in &barycenters {
        if !normal {
            continue;
        }
        if !b.truncate(d).is_zero() {
            witnesses.push(Witness {
                q: q.clone(),
                barycenter: b.clone(),
                kind: WitnessKind::FirstMomentNonzero,
            });
        } else if b[d].is_negative() {
            witnesses.push(Witness {
                q: q.clone(),
                barycenter: b.clone(),
                kind: WitnessKind::SecondMomentNegative,
            });
        } else if b[d].is_zero() {
            witnesses.push(Witness {
                q: q.clone(),
                barycenter: b.clone(),
                kind: WitnessKind::SecondMomentZero,
            });
        }
    }
    if !character.is_zero() && witnesses.is_empty() {
        // no normal candidate at all, but the torus itself destabilises
        witnesses.push(Witness {
            q: ProjPoint::Generic,
            barycenter: generic.1.clone(),
            kind: WitnessKind::FirstMomentNonzero,
        });
    }
    let status = if witnesses.iter().any(|w| w.kind != WitnessKind::SecondMomentZero) {
        StabilityStatus::Unstable
    } else if witnesses.is_empty() {
        StabilityStatus::EquivariantlyKStable
    } else {
        StabilityStatus::Semistable
    };
    StabilityVerdict {
        status,
        witnesses,
        futaki_character: character,
        barycenters,
    }
}
