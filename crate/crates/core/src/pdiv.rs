//! Polyhedral divisors: tailed polyhedra attached to points of the
//! projective line, all sharing one pointed tail cone.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;

use crate::divpol::{validate, DivisorialPolytope, ProjPoint, ValidationFailure};
use crate::exactgeom::dd::{cone_has_interior, cone_is_trivial, extreme_rays, integer_rows};
use crate::exactgeom::linalg::rank;
use crate::exactgeom::{primitive, GeomError, Polytope, Rat, RatVec};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PdivError {
    #[error("{0} is not in the dual of the tail cone")]
    OutsideDualCone(RatVec),
    #[error("input is not a divisorial polytope ({} failures)", .0.len())]
    InvalidDivpol(Vec<ValidationFailure>),
    #[error("coefficients have different tail cones")]
    MismatchedTails,
    #[error("tail cone is not pointed")]
    NotPointed,
    #[error(transparent)]
    Geom(#[from] GeomError),
}

/// Pointed rational polyhedral cone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cone {
    dim: usize,
    rays: Vec<RatVec>,
    facets: Vec<RatVec>,
    equations: Vec<RatVec>,
}

impl Cone {
    /// Cone spanned by the given vectors.
    pub fn from_generators(dim: usize, gens: &[RatVec]) -> Result<Cone, PdivError> {
        let mut prim = BTreeSet::new();
        for g in gens {
            if g.dim() != dim {
                return Err(GeomError::MixedDimensions {
                    expected: dim,
                    found: g.dim(),
                }
                .into());
            }
            if let Ok((p, _)) = primitive(g) {
                prim.insert(p);
            }
        }
        let origin = RatVec::zeros(dim);
        let mut pts: Vec<RatVec> = prim.iter().cloned().collect();
        pts.push(origin.clone());
        let hull = Polytope::hull(&pts)?;
        if !hull.vertices().contains(&origin) {
            return Err(PdivError::NotPointed);
        }
        let facets: Vec<RatVec> = hull
            .facets()
            .iter()
            .filter(|f| f.offset.is_zero())
            .map(|f| f.normal.clone())
            .collect();
        let equations: Vec<RatVec> = hull.equations().iter().map(|e| e.normal.clone()).collect();
        let rays: Vec<RatVec> = prim
            .into_iter()
            .filter(|r| {
                let mut tight: Vec<RatVec> = facets
                    .iter()
                    .filter(|n| n.dot(r).is_zero())
                    .cloned()
                    .collect();
                tight.extend(equations.iter().cloned());
                rank(&tight) + 1 == dim
            })
            .collect();
        Ok(Cone {
            dim,
            rays,
            facets,
            equations,
        })
    }

    /// Cone `{x : <n, x> >= 0 for all n}`.
    pub fn from_inequalities(dim: usize, normals: &[RatVec]) -> Result<Cone, PdivError> {
        let rows = integer_rows(normals);
        let rays = extreme_rays(&rows, dim).map_err(|_| PdivError::NotPointed)?;
        let gens: Vec<RatVec> = rays.iter().map(|r| RatVec::from_bigints(r)).collect();
        Cone::from_generators(dim, &gens)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Primitive generators of the extreme rays.
    pub fn rays(&self) -> &[RatVec] {
        &self.rays
    }

    /// Inner facet normals.
    pub fn facets(&self) -> &[RatVec] {
        &self.facets
    }

    pub fn contains(&self, x: &RatVec) -> bool {
        self.equations.iter().all(|e| e.dot(x).is_zero())
            && self.facets.iter().all(|n| n.dot(x) >= Rat::zero())
    }

    pub fn dual_contains(&self, u: &RatVec) -> bool {
        self.rays.iter().all(|r| r.dot(u) >= Rat::zero())
    }
}

/// Polyhedron `conv(points) + tail`.
#[derive(Clone, Debug)]
pub struct TailPolyhedron {
    polytope: Polytope,
    tail: Cone,
}

impl PartialEq for TailPolyhedron {
    fn eq(&self, other: &Self) -> bool {
        self.tail == other.tail && self.vertices() == other.vertices()
    }
}

impl TailPolyhedron {
    pub fn new(points: &[RatVec], tail: Cone) -> Result<Self, PdivError> {
        let polytope = Polytope::hull(points)?;
        if polytope.ambient_dim() != tail.dim() {
            return Err(GeomError::MixedDimensions {
                expected: tail.dim(),
                found: polytope.ambient_dim(),
            }
            .into());
        }
        Ok(TailPolyhedron { polytope, tail })
    }

    pub fn tail(&self) -> &Cone {
        &self.tail
    }

    pub fn polytope_part(&self) -> &Polytope {
        &self.polytope
    }

    /// `min <u, .>` over the polyhedron, for `u` in the dual of the tail.
    pub fn eval(&self, u: &RatVec) -> Result<Rat, PdivError> {
        if !self.tail.dual_contains(u) {
            return Err(PdivError::OutsideDualCone(u.clone()));
        }
        Ok(self.polytope.min_value(u))
    }

    /// Rows describing the normal cone at vertex `p`, inside the dual tail.
    fn normal_cone_rows(&self, p: &RatVec) -> Vec<RatVec> {
        let mut rows: Vec<RatVec> = self.tail.rays.clone();
        rows.extend(self.polytope.vertices().iter().filter(|w| *w != p).map(|w| w - p));
        rows
    }

    /// Vertices of the polyhedron: points of the polytope part whose normal
    /// cone is full dimensional.
    pub fn vertices(&self) -> Vec<RatVec> {
        let n = self.tail.dim();
        self.polytope
            .vertices()
            .iter()
            .filter(|p| cone_has_interior(&integer_rows(&self.normal_cone_rows(p)), n))
            .cloned()
            .collect()
    }

    pub fn contains(&self, x: &RatVec) -> bool {
        // x = sum l_i v_i + sum m_j r_j with l, m >= 0 and sum l_i = 1
        let verts = self.polytope.vertices();
        let rays = self.tail.rays();
        let k = verts.len() + rays.len() + 1;
        let mut rows: Vec<RatVec> = (0..k).map(|i| RatVec::unit(k, i)).collect();
        let mut eqs = Vec::new();
        for c in 0..self.tail.dim() {
            let mut r: Vec<Rat> = verts.iter().map(|v| v[c].clone()).collect();
            r.extend(rays.iter().map(|v| v[c].clone()));
            r.push(-x[c].clone());
            eqs.push(RatVec(r));
        }
        let mut sum: Vec<Rat> = vec![Rat::from_integer(1.into()); verts.len()];
        sum.extend(std::iter::repeat(Rat::zero()).take(rays.len()));
        sum.push(Rat::from_integer((-1).into()));
        eqs.push(RatVec(sum));
        for e in eqs {
            rows.push(-&e);
            rows.push(e);
        }
        let found = extreme_rays(&integer_rows(&rows), k).expect("orthant is pointed");
        found.iter().any(|r| !r[k - 1].is_zero())
    }
}

/// Polyhedral divisor on the projective line.
#[derive(Clone, Debug, PartialEq)]
pub struct PDivisor {
    tail: Cone,
    coeffs: BTreeMap<ProjPoint, TailPolyhedron>,
}

impl PDivisor {
    pub fn new(tail: Cone, coeffs: BTreeMap<ProjPoint, TailPolyhedron>) -> Result<Self, PdivError> {
        if coeffs.values().any(|c| c.tail != tail) {
            return Err(PdivError::MismatchedTails);
        }
        Ok(PDivisor { tail, coeffs })
    }

    pub fn tail(&self) -> &Cone {
        &self.tail
    }

    pub fn coeffs(&self) -> &BTreeMap<ProjPoint, TailPolyhedron> {
        &self.coeffs
    }

    /// Evaluation at `u`: the map `P -> min <u, D_P>`.
    pub fn eval(&self, u: &RatVec) -> Result<BTreeMap<ProjPoint, Rat>, PdivError> {
        if !self.tail.dual_contains(u) {
            return Err(PdivError::OutsideDualCone(u.clone()));
        }
        Ok(self
            .coeffs
            .iter()
            .map(|(p, c)| (p.clone(), c.polytope.min_value(u)))
            .collect())
    }

    /// Minkowski sum of the coefficients.
    pub fn degree(&self) -> TailPolyhedron {
        let n = self.tail.dim();
        let mut sums = vec![RatVec::zeros(n)];
        for c in self.coeffs.values() {
            let mut next = BTreeSet::new();
            for s in &sums {
                for v in c.vertices() {
                    next.insert(s + &v);
                }
            }
            sums = Polytope::hull(&next.into_iter().collect::<Vec<_>>())
                .expect("nonempty")
                .vertices()
                .to_vec();
        }
        TailPolyhedron::new(&sums, self.tail.clone()).expect("same dimension")
    }

    /// The degree is strictly contained in the tail: it lies in the tail and
    /// avoids the origin.
    pub fn is_proper(&self) -> bool {
        let deg = self.degree();
        let inside = deg.vertices().iter().all(|v| self.tail.contains(v));
        inside && !deg.contains(&RatVec::zeros(self.tail.dim()))
    }
}

/// Polyhedral divisor attached to a divisorial polytope: the tail is the
/// cone over `Box x {1}` dualised, and `D_P` is spanned by the pieces
/// `(v, c)` of `Psi_P`.
pub fn from_divpol(psi: &DivisorialPolytope) -> Result<PDivisor, PdivError> {
    let rep = validate(psi);
    if !rep.passed() {
        return Err(PdivError::InvalidDivpol(rep.failures));
    }
    let n = psi.dim() + 1;
    let rows: Vec<RatVec> = psi
        .box_polytope()
        .vertices()
        .iter()
        .map(|w| w.extend_with(Rat::from_integer(1.into())))
        .collect();
    let tail = Cone::from_inequalities(n, &rows)?;
    let mut coeffs = BTreeMap::new();
    for (p, f) in psi.support_functions() {
        let pts: Vec<RatVec> = f
            .pieces()
            .iter()
            .map(|pc| pc.linear.extend_with(pc.constant.clone()))
            .collect();
        coeffs.insert(p.clone(), TailPolyhedron::new(&pts, tail.clone())?);
    }
    PDivisor::new(tail, coeffs)
}

/// Exact normality test for a family of coefficients: it fails exactly when
/// two different coefficients have non-lattice vertices whose normal cones
/// share a nonzero direction.
pub fn is_admissible(coeffs: &[&TailPolyhedron]) -> Result<bool, PdivError> {
    let Some(first) = coeffs.first() else {
        return Ok(true);
    };
    if coeffs.iter().any(|c| c.tail != first.tail) {
        return Err(PdivError::MismatchedTails);
    }
    let n = first.tail.dim();
    let frac: Vec<Vec<RatVec>> = coeffs
        .iter()
        .map(|c| c.vertices().into_iter().filter(|v| !v.is_integral()).collect())
        .collect();
    for i in 0..coeffs.len() {
        for j in i + 1..coeffs.len() {
            for p in &frac[i] {
                for q in &frac[j] {
                    let mut rows = coeffs[i].normal_cone_rows(p);
                    rows.extend(
                        coeffs[j]
                            .polytope
                            .vertices()
                            .iter()
                            .filter(|w| *w != q)
                            .map(|w| w - q),
                    );
                    if !cone_is_trivial(&integer_rows(&rows), n) {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}
