//! Special fibres of the equivariant degenerations. Each point `Q` of the
//! support, plus the generic point, gives a polytope `Delta_Q` one
//! dimension up whose barycenter feeds the Futaki invariants.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::divpol::{
    fano_check, refinement_vertices, DivisorialPolytope, FanoCertificate, FanoFailure, ProjPoint,
};
use crate::exactgeom::{GeomError, Polytope, Rat, RatVec};
use crate::pdiv::{from_divpol, is_admissible, PdivError, TailPolyhedron};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DegenError {
    #[error("not Fano: {0}")]
    NotFano(FanoFailure),
    #[error("{0} is neither in the support nor the generic point")]
    UnknownPoint(ProjPoint),
    #[error("Delta_{q} has interior lattice points {found:?}, expected exactly {expected}")]
    InteriorPointMismatch {
        q: ProjPoint,
        expected: RatVec,
        found: Vec<RatVec>,
    },
    #[error(transparent)]
    Pdiv(#[from] PdivError),
    #[error(transparent)]
    Geom(#[from] GeomError),
}

/// A candidate special fibre.
#[derive(Clone, Debug)]
pub struct DegenerationCandidate {
    pub q: ProjPoint,
    pub delta: Polytope,
    pub a_q: BigInt,
    pub u_q: RatVec,
    /// `Delta_Q - u_Q`
    pub delta0: Polytope,
    pub normal: bool,
}

impl DegenerationCandidate {
    /// Barycenter of `Delta_Q^0`.
    pub fn barycenter(&self) -> RatVec {
        self.delta0.barycenter().expect("full dimensional")
    }
}

/// `Delta_Q = {(u, a) : u in Box, -sum_{P != Q} Psi_P(u) <= a <= Psi_Q(u)}`,
/// with `Psi_Q = 0` for the generic point.
pub fn special_fiber_polytope(
    psi: &DivisorialPolytope,
    q: &ProjPoint,
) -> Result<Polytope, DegenError> {
    let support = psi.support();
    if !q.is_generic() && !support.contains(q) {
        return Err(DegenError::UnknownPoint(q.clone()));
    }
    let verts = refinement_vertices(&psi.refinement());
    let mut pts = Vec::with_capacity(2 * verts.len());
    for w in &verts {
        let mut upper = Rat::zero();
        let mut lower = Rat::zero();
        for (p, f) in psi.support_functions() {
            let val = f.eval_unchecked(w);
            if p == q {
                upper = val;
            } else {
                lower -= val;
            }
        }
        pts.push(w.extend_with(upper));
        pts.push(w.extend_with(lower));
    }
    Ok(Polytope::hull(&pts)?)
}

/// `u_Q = (0, ..., 0, -a_Q - 1)`.
pub fn distinguished_point_unchecked(cert: &FanoCertificate, q: &ProjPoint) -> RatVec {
    let d = cert.psi().dim();
    let mut u = RatVec::zeros(d + 1);
    u[d] = Rat::from_integer(-cert.a(q) - BigInt::one());
    u
}

/// `u_Q`, checked to be the only interior lattice point of `Delta_Q`.
/// This holds for normal fibres; non-normal ones may have none.
pub fn distinguished_point(
    cert: &FanoCertificate,
    q: &ProjPoint,
    delta: &Polytope,
) -> Result<RatVec, DegenError> {
    let u = distinguished_point_unchecked(cert, q);
    let found = delta.interior_lattice_points()?;
    if found.len() != 1 || found[0] != u {
        return Err(DegenError::InteriorPointMismatch {
            q: q.clone(),
            expected: u,
            found,
        });
    }
    Ok(u)
}

/// Normality of the special fibre over `Q`, decided by admissibility of
/// the coefficients away from `Q`.
pub fn is_normal_fiber(psi: &DivisorialPolytope, q: &ProjPoint) -> Result<bool, DegenError> {
    let d = from_divpol(psi)?;
    let others: Vec<&TailPolyhedron> = d
        .coeffs()
        .iter()
        .filter(|(p, _)| *p != q)
        .map(|(_, c)| c)
        .collect();
    Ok(is_admissible(&others)?)
}

/// Shortcut valid in the Fano case: normal iff at most one `P != Q` has a
/// non-integral value `Psi_P(0)`.
pub fn is_normal_fiber_fano(cert: &FanoCertificate, q: &ProjPoint) -> bool {
    let psi = cert.psi();
    let origin = RatVec::zeros(psi.dim());
    psi.support_functions()
        .iter()
        .filter(|(p, f)| *p != q && !f.eval_unchecked(&origin).is_integer())
        .count()
        <= 1
}

/// All candidates: each support point, then the generic point.
pub fn enumerate_candidates(cert: &FanoCertificate) -> Result<Vec<DegenerationCandidate>, DegenError> {
    let psi = cert.psi();
    let mut qs = psi.support();
    qs.push(ProjPoint::Generic);
    let mut out = Vec::with_capacity(qs.len());
    for q in qs {
        let delta = special_fiber_polytope(psi, &q)?;
        let normal = is_normal_fiber(psi, &q)?;
        debug_assert_eq!(normal, is_normal_fiber_fano(cert, &q), "normality tests disagree at {q}");
        let u_q = if normal {
            distinguished_point(cert, &q, &delta)?
        } else {
            distinguished_point_unchecked(cert, &q)
        };
        let delta0 = delta.translate(&-&u_q);
        out.push(DegenerationCandidate {
            a_q: cert.a(&q),
            q,
            delta,
            u_q,
            delta0,
            normal,
        });
    }
    Ok(out)
}

/// Runs the Fano check first.
pub fn enumerate_candidates_for(
    psi: &DivisorialPolytope,
) -> Result<Vec<DegenerationCandidate>, DegenError> {
    let cert = fano_check(psi).map_err(DegenError::NotFano)?;
    enumerate_candidates(&cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::exactgeom::{rat, rint};

    fn pts(xs: &[&[i64]]) -> Vec<RatVec> {
        xs.iter().map(|x| RatVec::from_ints(x)).collect()
    }

    fn by_q(c: &[DegenerationCandidate], q: ProjPoint) -> &DegenerationCandidate {
        c.iter().find(|x| x.q == q).unwrap()
    }

    #[test]
    fn del_pezzo_fibres() {
        let c = enumerate_candidates_for(&catalog::dp4_3a1()).unwrap();
        assert_eq!(c.len(), 4);
        assert!(c.iter().all(|x| x.normal));

        let inf = by_q(&c, ProjPoint::Infinity);
        assert_eq!(inf.delta.vertices(), &pts(&[&[-1, 0], &[0, -1], &[0, 1], &[1, 0]])[..]);
        assert_eq!(inf.u_q, RatVec::from_ints(&[0, 0]));
        assert_eq!(inf.barycenter(), RatVec::from_ints(&[0, 0]));

        let zero = by_q(&c, ProjPoint::zero());
        assert_eq!(zero.delta.vertices(), &pts(&[&[-1, 1], &[0, -1], &[0, 1], &[1, 0]])[..]);
        assert_eq!(zero.u_q, RatVec::from_ints(&[0, 0]));
        assert_eq!(zero.barycenter(), RatVec(vec![rint(0), rat(1, 6)]));

        let one = by_q(&c, ProjPoint::one());
        assert_eq!(one.delta.vertices(), &pts(&[&[-1, -1], &[0, -2], &[0, 0], &[1, 0]])[..]);
        assert_eq!(one.u_q, RatVec::from_ints(&[0, -1]));
        assert_eq!(one.barycenter(), RatVec(vec![rint(0), rat(1, 6)]));

        let g = by_q(&c, ProjPoint::Generic);
        assert_eq!(g.delta.vertices(), &pts(&[&[-1, 0], &[0, -2], &[1, 0]])[..]);
        assert_eq!(g.u_q, RatVec::from_ints(&[0, -1]));
        assert_eq!(g.barycenter(), RatVec(vec![rint(0), rat(1, 3)]));
    }

    #[test]
    fn threefold_normality() {
        let c = enumerate_candidates_for(&catalog::mm_3_21()).unwrap();
        let normal: Vec<String> = c.iter().filter(|x| x.normal).map(|x| x.q.to_string()).collect();
        assert_eq!(normal, vec!["0", "inf"]);
        for x in &c {
            assert!(x.delta.is_full_dimensional());
            if x.normal {
                assert_eq!(x.delta0.interior_lattice_points().unwrap(), vec![RatVec::zeros(3)]);
            }
        }
        assert_eq!(by_q(&c, ProjPoint::one()).u_q, RatVec::from_ints(&[0, 0, 1]));
    }

    #[test]
    fn unknown_point() {
        assert_eq!(
            special_fiber_polytope(&catalog::dp4_3a1(), &ProjPoint::finite(7)),
            Err(DegenError::UnknownPoint(ProjPoint::finite(7)))
        );
    }

    #[test]
    fn not_fano() {
        let psi = catalog::dp4_3a1();
        let bad = psi.with_kdiv(Some([(ProjPoint::one(), BigInt::from(3))].into_iter().collect()));
        assert!(matches!(enumerate_candidates_for(&bad), Err(DegenError::NotFano(_))));
    }
}
