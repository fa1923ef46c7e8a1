//! Divisorial polytopes: a lattice polytope `Box` with one concave
//! piecewise affine function per point of the projective line.
//!
//! [`validate`] checks the defining conditions and [`fano_check`] the Fano
//! conditions, producing the canonical coefficients `a_P`.

mod plfn;
mod point;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::exactgeom::{
    lattice_distance, primitive, AffineFn, GeomError, Halfspace, Polytope, Rat, RatVec,
};

pub use plfn::{common_refinement, refinement_vertices, PLConcave, RefinementCell};
pub use point::{parse_rational, ParsePointError, ProjPoint};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DivpolError {
    #[error("piecewise affine function needs at least one piece")]
    EmptyPieces,
    #[error("point {0} lies outside the domain")]
    OutsideDomain(RatVec),
    #[error("dimension {0} is not supported (need 1, 2 or 3)")]
    UnsupportedDimension(usize),
    #[error("the generic point cannot carry a function")]
    GenericKey,
    #[error("function at {0} is defined on a different domain")]
    DomainMismatch(ProjPoint),
    #[error(transparent)]
    Geom(#[from] GeomError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisorialPolytope {
    boxp: Polytope,
    entries: BTreeMap<ProjPoint, PLConcave>,
    kdiv: Option<BTreeMap<ProjPoint, BigInt>>,
}

impl DivisorialPolytope {
    /// Build from affine pieces per point. Functions are canonicalised when
    /// the box is full dimensional.
    pub fn new(
        boxp: Polytope,
        entries: impl IntoIterator<Item = (ProjPoint, Vec<AffineFn>)>,
        kdiv: Option<BTreeMap<ProjPoint, BigInt>>,
    ) -> Result<Self, DivpolError> {
        let mut fns = BTreeMap::new();
        for (p, pieces) in entries {
            let f = PLConcave::new(boxp.clone(), pieces)?;
            fns.insert(p, f);
        }
        Self::from_functions(boxp, fns, kdiv)
    }

    pub fn from_functions(
        boxp: Polytope,
        entries: BTreeMap<ProjPoint, PLConcave>,
        kdiv: Option<BTreeMap<ProjPoint, BigInt>>,
    ) -> Result<Self, DivpolError> {
        let d = boxp.ambient_dim();
        if !(1..=3).contains(&d) {
            return Err(DivpolError::UnsupportedDimension(d));
        }
        let mut out = BTreeMap::new();
        for (p, f) in entries {
            if p.is_generic() {
                return Err(DivpolError::GenericKey);
            }
            if f.domain() != &boxp {
                return Err(DivpolError::DomainMismatch(p));
            }
            out.insert(p, f.canonicalize());
        }
        if let Some(k) = &kdiv {
            if k.contains_key(&ProjPoint::Generic) {
                return Err(DivpolError::GenericKey);
            }
        }
        Ok(DivisorialPolytope {
            boxp,
            entries: out,
            kdiv,
        })
    }

    pub fn box_polytope(&self) -> &Polytope {
        &self.boxp
    }

    pub fn dim(&self) -> usize {
        self.boxp.ambient_dim()
    }

    pub fn entries(&self) -> &BTreeMap<ProjPoint, PLConcave> {
        &self.entries
    }

    pub fn kdiv(&self) -> Option<&BTreeMap<ProjPoint, BigInt>> {
        self.kdiv.as_ref()
    }

    pub fn with_kdiv(&self, kdiv: Option<BTreeMap<ProjPoint, BigInt>>) -> Self {
        DivisorialPolytope {
            kdiv,
            ..self.clone()
        }
    }

    /// The function at `p`; the zero function off the support.
    pub fn function(&self, p: &ProjPoint) -> PLConcave {
        self.entries
            .get(p)
            .cloned()
            .unwrap_or_else(|| PLConcave::zero(self.boxp.clone()))
    }

    /// Points carrying a nonzero function.
    pub fn support(&self) -> Vec<ProjPoint> {
        self.entries
            .iter()
            .filter(|(_, f)| !f.is_zero())
            .map(|(p, _)| p.clone())
            .collect()
    }

    pub fn support_functions(&self) -> Vec<(&ProjPoint, &PLConcave)> {
        self.entries.iter().filter(|(_, f)| !f.is_zero()).collect()
    }

    pub fn eval(&self, p: &ProjPoint, u: &RatVec) -> Result<Rat, DivpolError> {
        match self.entries.get(p) {
            Some(f) => f.evaluate(u),
            None if self.boxp.contains(u) => Ok(Rat::zero()),
            None => Err(DivpolError::OutsideDomain(u.clone())),
        }
    }

    /// Common refinement of all functions.
    pub fn refinement(&self) -> Vec<RefinementCell> {
        let fns: Vec<&PLConcave> = self.entries.values().collect();
        common_refinement(&self.boxp, &fns)
    }

    /// `deg Psi = sum_P Psi_P`, canonicalised.
    pub fn degree_function(&self) -> PLConcave {
        let n = self.dim();
        let pieces: Vec<AffineFn> = self
            .refinement()
            .iter()
            .map(|c| {
                c.active
                    .iter()
                    .fold(AffineFn::constant(n, Rat::zero()), |acc, p| acc.add(p))
            })
            .collect();
        if pieces.is_empty() {
            return PLConcave::zero(self.boxp.clone());
        }
        PLConcave::new(self.boxp.clone(), pieces)
            .expect("nonempty")
            .canonicalize()
    }

    /// Relabel points by `phi` and change coordinates on `M` by the
    /// unimodular `u`: the new function at `phi(P)` is `Psi_P o u^{-1}`.
    pub fn transform(
        &self,
        u: &[Vec<i64>],
        u_inv: &[Vec<i64>],
        phi: impl Fn(&ProjPoint) -> ProjPoint,
    ) -> Result<DivisorialPolytope, DivpolError> {
        let to_rows = |m: &[Vec<i64>]| -> Vec<RatVec> { m.iter().map(|r| RatVec::from_ints(r)).collect() };
        let a = to_rows(u);
        let a_inv = to_rows(u_inv);
        let n = self.dim();
        let boxp = self.boxp.affine_image(&a, &RatVec::zeros(n))?;
        let mut fns = BTreeMap::new();
        for (p, f) in &self.entries {
            let g = f.map_pieces(boxp.clone(), |piece| piece.pullback(&a_inv))?;
            fns.insert(phi(p), g);
        }
        let kdiv = self
            .kdiv
            .as_ref()
            .map(|k| k.iter().map(|(p, a)| (phi(p), a.clone())).collect());
        DivisorialPolytope::from_functions(boxp, fns, kdiv)
    }
}

/// `mu(v)`: least positive integer with `mu * v` integral; one for `v = 0`.
pub fn mu_of_slope(v: &RatVec) -> BigInt {
    match primitive(v) {
        Ok((_, mu)) => mu,
        Err(_) => BigInt::one(),
    }
}

/// Least common multiple of `mu` over the pieces at `p`.
pub fn mu_of_point(psi: &DivisorialPolytope, p: &ProjPoint) -> BigInt {
    match psi.entries.get(p) {
        Some(f) if !f.is_zero() => f
            .pieces()
            .iter()
            .fold(BigInt::one(), |acc, piece| acc.lcm(&mu_of_slope(&piece.linear))),
        _ => BigInt::one(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ValidationFailure {
    BoxNotFullDimensional,
    BoxNotLattice { vertex: RatVec },
    DegreeNegative { at: RatVec, value: Rat },
    DegreeIdenticallyZero,
    NonIntegralGraphVertex { point: ProjPoint, at: RatVec, value: Rat },
}

impl std::fmt::Display for ValidationFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        use crate::exactgeom::fmt_rat;
        match self {
            ValidationFailure::BoxNotFullDimensional => write!(f, "box is not full dimensional"),
            ValidationFailure::BoxNotLattice { vertex } => {
                write!(f, "box vertex {vertex} is not a lattice point")
            }
            ValidationFailure::DegreeNegative { at, value } => {
                write!(f, "degree is {} < 0 at {at}", fmt_rat(value))
            }
            ValidationFailure::DegreeIdenticallyZero => write!(f, "degree vanishes identically"),
            ValidationFailure::NonIntegralGraphVertex { point, at, value } => write!(
                f,
                "graph of the function at {point} has non-lattice vertex ({at}, {})",
                fmt_rat(value)
            ),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub box_ok: bool,
    pub degree_ok: bool,
    pub graphs_ok: bool,
    pub failures: Vec<ValidationFailure>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Check that `psi` is a divisorial polytope: the box is a full dimensional
/// lattice polytope, `deg Psi` is nonnegative and not identically zero, and
/// every graph vertex of every `Psi_P` is a lattice point.
pub fn validate(psi: &DivisorialPolytope) -> ValidationReport {
    let mut rep = ValidationReport::default();
    let b = psi.box_polytope();
    if !b.is_full_dimensional() {
        rep.failures.push(ValidationFailure::BoxNotFullDimensional);
        return rep;
    }
    for v in b.vertices() {
        if !v.is_integral() {
            rep.failures
                .push(ValidationFailure::BoxNotLattice { vertex: v.clone() });
        }
    }
    rep.box_ok = rep.failures.is_empty();

    // a concave function vanishing at an interior point is constant, so
    // nonnegativity at the refinement vertices plus one positive value
    // gives positivity on the interior
    let deg = psi.degree_function();
    let verts = refinement_vertices(&psi.refinement());
    let mut positive = false;
    let before = rep.failures.len();
    for w in &verts {
        let val = deg.eval_unchecked(w);
        if val.is_negative() {
            rep.failures.push(ValidationFailure::DegreeNegative {
                at: w.clone(),
                value: val,
            });
        } else if val.is_positive() {
            positive = true;
        }
    }
    if !positive && rep.failures.len() == before {
        rep.failures.push(ValidationFailure::DegreeIdenticallyZero);
    }
    rep.degree_ok = rep.failures.len() == before;

    let before = rep.failures.len();
    for (p, f) in psi.support_functions() {
        for w in f.cell_vertices() {
            let val = f.eval_unchecked(&w);
            if !w.is_integral() || !val.is_integer() {
                rep.failures.push(ValidationFailure::NonIntegralGraphVertex {
                    point: p.clone(),
                    at: w,
                    value: val,
                });
            }
        }
    }
    rep.graphs_ok = rep.failures.len() == before;
    rep
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FanoFailure {
    Invalid(Vec<ValidationFailure>),
    OriginNotInterior,
    CanonicalMismatch { point: ProjPoint, first: Rat, second: Rat },
    NonIntegralCanonical { point: ProjPoint, value: Rat },
    NotPositiveAtOrigin { point: ProjPoint, value: Rat },
    CanonicalSum { sum: BigInt },
    FacetDistance { facet: Halfspace, distance: Rat },
    KdivMismatch { point: ProjPoint, given: BigInt, derived: BigInt },
}

impl std::fmt::Display for FanoFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        use crate::exactgeom::fmt_rat;
        match self {
            FanoFailure::Invalid(v) => {
                write!(f, "not a divisorial polytope:")?;
                for x in v {
                    write!(f, " {x};")?;
                }
                Ok(())
            }
            FanoFailure::OriginNotInterior => write!(f, "0 is not an interior point of the box"),
            FanoFailure::CanonicalMismatch { point, first, second } => write!(
                f,
                "pieces at {point} give different canonical coefficients {} and {}",
                fmt_rat(first),
                fmt_rat(second)
            ),
            FanoFailure::NonIntegralCanonical { point, value } => {
                write!(f, "canonical coefficient at {point} is {} (not integral)", fmt_rat(value))
            }
            FanoFailure::NotPositiveAtOrigin { point, value } => write!(
                f,
                "Psi({point})(0) + a + 1 = {} is not positive",
                fmt_rat(value)
            ),
            FanoFailure::CanonicalSum { sum } => {
                write!(f, "canonical coefficients sum to {sum}, expected -2")
            }
            FanoFailure::FacetDistance { facet, distance } => write!(
                f,
                "facet {} >= {} has lattice distance {} but deg is not zero on it",
                facet.normal,
                fmt_rat(&facet.offset),
                fmt_rat(distance)
            ),
            FanoFailure::KdivMismatch { point, given, derived } => write!(
                f,
                "supplied canonical coefficient {given} at {point} differs from derived {derived}"
            ),
        }
    }
}

/// Result of a successful Fano check: the divisorial polytope together
/// with its canonical coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FanoCertificate {
    psi: DivisorialPolytope,
    kdiv: BTreeMap<ProjPoint, BigInt>,
}

impl FanoCertificate {
    pub fn psi(&self) -> &DivisorialPolytope {
        &self.psi
    }

    /// Canonical coefficients on the support.
    pub fn kdiv(&self) -> &BTreeMap<ProjPoint, BigInt> {
        &self.kdiv
    }

    /// `a_P`, zero off the support and at the generic point.
    pub fn a(&self, p: &ProjPoint) -> BigInt {
        self.kdiv.get(p).cloned().unwrap_or_else(BigInt::zero)
    }
}

/// Canonical coefficient forced by a single piece: `1/mu(v) - c - 1`.
pub fn canonical_from_piece(piece: &AffineFn) -> Rat {
    Rat::new(BigInt::one(), mu_of_slope(&piece.linear)) - &piece.constant - Rat::one()
}

/// Check the Fano conditions and derive the canonical coefficients.
pub fn fano_check(psi: &DivisorialPolytope) -> Result<FanoCertificate, FanoFailure> {
    let rep = validate(psi);
    if !rep.passed() {
        return Err(FanoFailure::Invalid(rep.failures));
    }
    let b = psi.box_polytope();
    let origin = RatVec::zeros(psi.dim());
    if !b.contains_in_relative_interior(&origin) {
        return Err(FanoFailure::OriginNotInterior);
    }

    let mut kdiv = BTreeMap::new();
    for (p, f) in psi.support_functions() {
        let mut a: Option<Rat> = None;
        for piece in f.pieces() {
            let cand = canonical_from_piece(piece);
            match &a {
                None => a = Some(cand),
                Some(prev) if *prev != cand => {
                    return Err(FanoFailure::CanonicalMismatch {
                        point: p.clone(),
                        first: prev.clone(),
                        second: cand,
                    })
                }
                _ => {}
            }
        }
        let a = a.expect("nonempty");
        if !a.is_integer() {
            return Err(FanoFailure::NonIntegralCanonical {
                point: p.clone(),
                value: a,
            });
        }
        let at0 = f.eval_unchecked(&origin) + &a + Rat::one();
        if !at0.is_positive() {
            return Err(FanoFailure::NotPositiveAtOrigin {
                point: p.clone(),
                value: at0,
            });
        }
        kdiv.insert(p.clone(), a.to_integer());
    }

    let sum: BigInt = kdiv.values().sum();
    if sum != BigInt::from(-2) {
        return Err(FanoFailure::CanonicalSum { sum });
    }

    let deg = psi.degree_function();
    let verts = refinement_vertices(&psi.refinement());
    for facet in b.facets() {
        let nonzero = verts
            .iter()
            .any(|w| facet.slack(w).is_zero() && deg.eval_unchecked(w).is_positive());
        if !nonzero {
            continue;
        }
        let dist = lattice_distance(facet).expect("facet normals are nonzero");
        if !dist.is_one() {
            return Err(FanoFailure::FacetDistance {
                facet: facet.clone(),
                distance: dist,
            });
        }
    }

    if let Some(given) = psi.kdiv() {
        for (p, g) in given {
            let derived = kdiv.get(p).cloned().unwrap_or_else(BigInt::zero);
            if *g != derived {
                return Err(FanoFailure::KdivMismatch {
                    point: p.clone(),
                    given: g.clone(),
                    derived,
                });
            }
        }
    }

    Ok(FanoCertificate {
        psi: psi.with_kdiv(Some(kdiv.clone())),
        kdiv,
    })
}

#[cfg(test)]
mod tests;
