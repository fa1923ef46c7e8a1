use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::dd::{extreme_rays, integer_rows, NotPointed};
use super::linalg::{det, rank, rref};
use super::rat::{to_primitive_integer, Rat, RatVec};
use super::simplex::Simplex;
use super::{AffineFn, GeomError};

/// Closed halfspace `<normal, x> >= offset`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Halfspace {
    pub normal: RatVec,
    pub offset: Rat,
}

impl Halfspace {
    pub fn new(normal: RatVec, offset: Rat) -> Self {
        Halfspace { normal, offset }
    }

    /// `<normal, x> - offset`
    pub fn slack(&self, x: &RatVec) -> Rat {
        self.normal.dot(x) - &self.offset
    }

    /// Same halfspace with a primitive integer normal.
    pub fn normalized(&self) -> Result<Halfspace, GeomError> {
        let (n, s) = to_primitive_integer(&self.normal.0).ok_or(GeomError::ZeroNormal)?;
        Ok(Halfspace {
            normal: RatVec::from_bigints(&n),
            offset: &self.offset * s,
        })
    }
}

/// Hyperplane `<normal, x> = offset`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Hyperplane {
    pub normal: RatVec,
    pub offset: Rat,
}

/// Bounded convex polytope with rational vertices, kept in both V- and
/// H-representation. Facets are relative to the affine hull, whose equations
/// are stored separately.
#[derive(Clone, Debug)]
pub struct Polytope {
    ambient: usize,
    vertices: Vec<RatVec>,
    facets: Vec<Halfspace>,
    equations: Vec<Hyperplane>,
}

impl PartialEq for Polytope {
    fn eq(&self, other: &Self) -> bool {
        self.ambient == other.ambient && self.vertices == other.vertices
    }
}

impl Eq for Polytope {}

impl Polytope {
    /// Convex hull of a finite point set.
    pub fn hull(points: &[RatVec]) -> Result<Polytope, GeomError> {
        let first = points.first().ok_or(GeomError::EmptyInput)?;
        let n = first.dim();
        if let Some(bad) = points.iter().find(|p| p.dim() != n) {
            return Err(GeomError::MixedDimensions {
                expected: n,
                found: bad.dim(),
            });
        }
        let pts: Vec<RatVec> = points
            .iter()
            .cloned()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let p0 = pts[0].clone();
        let dirs: Vec<RatVec> = pts[1..].iter().map(|p| p - &p0).collect();
        let (basis, pivots) = if dirs.is_empty() {
            (Vec::new(), Vec::new())
        } else {
            rref(&dirs)
        };
        let k = pivots.len();
        let equations = affine_equations(&p0, &basis, &pivots, n);

        if k == 0 {
            return Ok(Polytope {
                ambient: n,
                vertices: vec![p0],
                facets: Vec::new(),
                equations,
            });
        }

        let proj: Vec<RatVec> = pts
            .iter()
            .map(|p| RatVec(pivots.iter().map(|&c| p[c].clone()).collect()))
            .collect();
        let rows: Vec<RatVec> = proj
            .iter()
            .map(|q| {
                let mut r = vec![Rat::one()];
                r.extend(q.0.iter().cloned());
                RatVec(r)
            })
            .collect();
        let rays = extreme_rays(&integer_rows(&rows), k + 1)
            .expect("points affinely span the projected space");

        let mut proj_facets = Vec::with_capacity(rays.len());
        let mut facets = Vec::with_capacity(rays.len());
        for ray in rays {
            let y: Vec<Rat> = ray[1..].iter().map(|x| Rat::from_integer(x.clone())).collect();
            let y0 = Rat::from_integer(ray[0].clone());
            let pf = Halfspace::new(RatVec(y.clone()), -y0.clone())
                .normalized()
                .expect("facet normal is nonzero");
            let mut full = RatVec::zeros(n);
            for (j, &c) in pivots.iter().enumerate() {
                full[c] = pf.normal[j].clone();
            }
            facets.push(Halfspace::new(full, pf.offset.clone()));
            proj_facets.push(pf);
        }

        let vertices: Vec<RatVec> = pts
            .iter()
            .zip(&proj)
            .filter(|(_, q)| {
                let tight: Vec<RatVec> = proj_facets
                    .iter()
                    .filter(|f| f.slack(q).is_zero())
                    .map(|f| f.normal.clone())
                    .collect();
                tight.len() >= k && rank(&tight) == k
            })
            .map(|(p, _)| p.clone())
            .collect();

        facets.sort();
        Ok(Polytope {
            ambient: n,
            vertices,
            facets,
            equations,
        })
    }

    /// Polytope cut out by halfspaces and hyperplanes in `Q^dim`.
    ///
    /// Errors with `Empty` when infeasible and `Unbounded` when not bounded.
    pub fn from_halfspaces(
        dim: usize,
        halfspaces: &[Halfspace],
        equations: &[Hyperplane],
    ) -> Result<Polytope, GeomError> {
        let mut rows: Vec<RatVec> = Vec::new();
        let mut x0 = RatVec::zeros(dim + 1);
        x0[0] = Rat::one();
        rows.push(x0);
        let homog = |n: &RatVec, o: &Rat| {
            let mut r = vec![-o.clone()];
            r.extend(n.0.iter().cloned());
            RatVec(r)
        };
        for h in halfspaces {
            if h.normal.dim() != dim {
                return Err(GeomError::MixedDimensions {
                    expected: dim,
                    found: h.normal.dim(),
                });
            }
            rows.push(homog(&h.normal, &h.offset));
        }
        for e in equations {
            let r = homog(&e.normal, &e.offset);
            rows.push(-&r);
            rows.push(r);
        }
        let rays = match extreme_rays(&integer_rows(&rows), dim + 1) {
            Ok(r) => r,
            Err(NotPointed) => return Err(GeomError::Unbounded),
        };
        let mut points = Vec::new();
        for r in rays {
            if r[0].is_zero() {
                return Err(GeomError::Unbounded);
            }
            let d = Rat::from_integer(r[0].clone());
            points.push(RatVec(
                r[1..]
                    .iter()
                    .map(|x| Rat::from_integer(x.clone()) / &d)
                    .collect(),
            ));
        }
        if points.is_empty() {
            return Err(GeomError::Empty);
        }
        Polytope::hull(&points)
    }

    /// Axis-parallel box `[lo_i, hi_i]`.
    pub fn cuboid(lo: &[i64], hi: &[i64]) -> Polytope {
        let n = lo.len();
        let mut pts = vec![Vec::new()];
        for i in 0..n {
            let mut next = Vec::new();
            for p in &pts {
                for v in [lo[i], hi[i]] {
                    let mut q: Vec<i64> = p.clone();
                    q.push(v);
                    next.push(q);
                }
            }
            pts = next;
        }
        let pts: Vec<RatVec> = pts.iter().map(|p| RatVec::from_ints(p)).collect();
        Polytope::hull(&pts).expect("nonempty")
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    /// Dimension of the affine hull.
    pub fn dim(&self) -> usize {
        self.ambient - self.equations.len()
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.equations.is_empty()
    }

    /// Vertices in lexicographic order.
    pub fn vertices(&self) -> &[RatVec] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Halfspace] {
        &self.facets
    }

    pub fn equations(&self) -> &[Hyperplane] {
        &self.equations
    }

    pub fn is_lattice(&self) -> bool {
        self.vertices.iter().all(|v| v.is_integral())
    }

    pub fn contains(&self, x: &RatVec) -> bool {
        x.dim() == self.ambient
            && self.equations.iter().all(|e| e.normal.dot(x) == e.offset)
            && self.facets.iter().all(|f| !f.slack(x).is_negative())
    }

    /// Membership in the relative interior.
    pub fn contains_in_relative_interior(&self, x: &RatVec) -> bool {
        x.dim() == self.ambient
            && self.equations.iter().all(|e| e.normal.dot(x) == e.offset)
            && self.facets.iter().all(|f| f.slack(x).is_positive())
    }

    /// Vertices lying on a given facet.
    pub fn facet_vertices(&self, f: &Halfspace) -> Vec<RatVec> {
        self.vertices
            .iter()
            .filter(|v| f.slack(v).is_zero())
            .cloned()
            .collect()
    }

    /// Face minimising `<u, .>`.
    pub fn face(&self, u: &RatVec) -> Result<Polytope, GeomError> {
        if u.dim() != self.ambient {
            return Err(GeomError::MixedDimensions {
                expected: self.ambient,
                found: u.dim(),
            });
        }
        let vals: Vec<Rat> = self.vertices.iter().map(|v| u.dot(v)).collect();
        let min = vals.iter().min().expect("nonempty").clone();
        let pts: Vec<RatVec> = self
            .vertices
            .iter()
            .zip(&vals)
            .filter(|(_, x)| **x == min)
            .map(|(v, _)| v.clone())
            .collect();
        Polytope::hull(&pts)
    }

    pub fn min_value(&self, u: &RatVec) -> Rat {
        self.vertices
            .iter()
            .map(|v| u.dot(v))
            .min()
            .expect("nonempty")
    }

    /// Pulling triangulation from the lexicographically smallest vertex.
    /// Every simplex has dimension `self.dim()` and uses vertices of `self`.
    pub fn triangulate(&self) -> Vec<Simplex> {
        let k = self.dim();
        if self.vertices.len() == k + 1 {
            return vec![Simplex::new(self.vertices.clone())];
        }
        let apex = &self.vertices[0];
        let mut out = Vec::new();
        for f in &self.facets {
            if f.slack(apex).is_zero() {
                continue;
            }
            let face = Polytope::hull(&self.facet_vertices(f)).expect("facet is nonempty");
            for s in face.triangulate() {
                let mut vs = vec![apex.clone()];
                vs.extend(s.vertices().iter().cloned());
                out.push(Simplex::new(vs));
            }
        }
        out
    }

    /// Volume inside the affine hull, normalised so that a fundamental
    /// domain of the lattice on that hull has volume one. For full
    /// dimensional polytopes this is the Lebesgue volume; points have volume one.
    pub fn volume(&self) -> Rat {
        self.triangulate()
            .iter()
            .fold(Rat::zero(), |acc, s| acc + s.volume())
    }

    /// Lebesgue volume in the ambient space (zero unless full dimensional).
    pub fn ambient_volume(&self) -> Rat {
        if self.is_full_dimensional() {
            self.volume()
        } else {
            Rat::zero()
        }
    }

    /// Exact integral of a product of affine functions, relative volume.
    pub fn integrate_product(&self, fs: &[&AffineFn]) -> Rat {
        self.triangulate()
            .iter()
            .fold(Rat::zero(), |acc, s| acc + s.integrate_product(fs))
    }

    /// Centre of mass with respect to the relative volume.
    pub fn barycenter(&self) -> Result<RatVec, GeomError> {
        let mut total = Rat::zero();
        let mut acc = RatVec::zeros(self.ambient);
        for s in self.triangulate() {
            let v = s.volume();
            acc = &acc + &s.centroid().scale(&v);
            total += v;
        }
        if total.is_zero() {
            return Err(GeomError::ZeroVolume);
        }
        Ok(acc.scale(&(Rat::one() / total)))
    }

    /// Integer points, in lexicographic order.
    pub fn lattice_points(&self) -> Vec<RatVec> {
        self.grid_points(|x| self.contains(x))
    }

    /// Integer points of the interior. Requires full dimension.
    pub fn interior_lattice_points(&self) -> Result<Vec<RatVec>, GeomError> {
        if !self.is_full_dimensional() {
            return Err(GeomError::NotFullDimensional);
        }
        Ok(self.grid_points(|x| self.contains_in_relative_interior(x)))
    }

    fn grid_points(&self, keep: impl Fn(&RatVec) -> bool) -> Vec<RatVec> {
        let n = self.ambient;
        let lo: Vec<BigInt> = (0..n)
            .map(|i| self.vertices.iter().map(|v| v[i].ceil().to_integer()).min().unwrap())
            .collect();
        let hi: Vec<BigInt> = (0..n)
            .map(|i| self.vertices.iter().map(|v| v[i].floor().to_integer()).max().unwrap())
            .collect();
        if lo.iter().zip(&hi).any(|(l, h)| l > h) {
            return Vec::new();
        }
        let mut out = Vec::new();
        let mut cur = lo.clone();
        loop {
            let p = RatVec::from_bigints(&cur);
            if keep(&p) {
                out.push(p);
            }
            let mut i = n;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                if cur[i] < hi[i] {
                    cur[i] += 1;
                    for j in i + 1..n {
                        cur[j] = lo[j].clone();
                    }
                    break;
                }
            }
        }
    }

    /// Image under `x -> A x + t`.
    pub fn affine_image(&self, a: &[RatVec], t: &RatVec) -> Result<Polytope, GeomError> {
        let pts: Vec<RatVec> = self
            .vertices
            .iter()
            .map(|v| &RatVec(a.iter().map(|row| row.dot(v)).collect()) + t)
            .collect();
        Polytope::hull(&pts)
    }

    pub fn translate(&self, t: &RatVec) -> Polytope {
        let pts: Vec<RatVec> = self.vertices.iter().map(|v| v + t).collect();
        Polytope::hull(&pts).expect("nonempty")
    }

    /// Intersection with extra halfspaces.
    pub fn intersect(&self, extra: &[Halfspace]) -> Result<Polytope, GeomError> {
        let mut hs = self.facets.clone();
        hs.extend(extra.iter().cloned());
        Polytope::from_halfspaces(self.ambient, &hs, &self.equations)
    }
}

fn affine_equations(p0: &RatVec, basis: &[RatVec], pivots: &[usize], n: usize) -> Vec<Hyperplane> {
    let mut eqs = Vec::new();
    for j in 0..n {
        if pivots.contains(&j) {
            continue;
        }
        // x_j - sum_i basis[i][j] x_{pivot_i} is constant on the hull
        let mut normal = RatVec::zeros(n);
        normal[j] = Rat::one();
        for (i, &c) in pivots.iter().enumerate() {
            normal[c] = -basis[i][j].clone();
        }
        let offset = normal.dot(p0);
        let (prim, s) = to_primitive_integer(&normal.0).expect("nonzero");
        eqs.push(Hyperplane {
            normal: RatVec::from_bigints(&prim),
            offset: offset * s,
        });
    }
    eqs
}

/// Distance, in lattice steps, from the origin to the hyperplane
/// `<normal, x> = offset`.
pub fn lattice_distance(h: &Halfspace) -> Result<Rat, GeomError> {
    Ok(h.normalized()?.offset.abs())
}

/// Primitive integer vector on the ray through `v`, with the factor `mu`
/// such that `mu * v` is integral and minimal.
pub fn primitive(v: &RatVec) -> Result<(RatVec, BigInt), GeomError> {
    if v.is_zero() {
        return Err(GeomError::ZeroVector);
    }
    let mu = super::rat::common_denominator(v.iter());
    let scaled: Vec<BigInt> = v.iter().map(|x| (x * &mu).to_integer()).collect();
    let g = scaled.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    let prim: Vec<BigInt> = scaled.iter().map(|x| x / &g).collect();
    Ok((RatVec::from_bigints(&prim), mu))
}

/// `|det|` of the edge matrix of a full dimensional simplex.
pub(crate) fn edge_det(vs: &[RatVec]) -> Rat {
    let e: Vec<RatVec> = vs[1..].iter().map(|v| v - &vs[0]).collect();
    det(&e).abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactgeom::rat::{rat, rint};

    fn pts(xs: &[&[i64]]) -> Vec<RatVec> {
        xs.iter().map(|x| RatVec::from_ints(x)).collect()
    }

    #[test]
    fn square_hull_drops_interior() {
        let p = Polytope::hull(&pts(&[&[0, 0], &[2, 0], &[0, 2], &[2, 2], &[1, 1], &[1, 0]])).unwrap();
        assert_eq!(p.vertices(), &pts(&[&[0, 0], &[0, 2], &[2, 0], &[2, 2]])[..]);
        assert_eq!(p.facets().len(), 4);
        assert_eq!(p.volume(), rint(4));
        assert_eq!(p.barycenter().unwrap(), RatVec::from_ints(&[1, 1]));
    }

    #[test]
    fn halfspace_roundtrip() {
        let p = Polytope::hull(&pts(&[&[-1, 0], &[0, 1], &[1, 0], &[0, -1]])).unwrap();
        let q = Polytope::from_halfspaces(2, p.facets(), p.equations()).unwrap();
        assert_eq!(p, q);
        assert_eq!(p.interior_lattice_points().unwrap(), pts(&[&[0, 0]]));
        assert_eq!(p.lattice_points().len(), 5);
    }

    #[test]
    fn segment_in_plane() {
        let p = Polytope::hull(&pts(&[&[0, 0], &[2, 2], &[1, 1]])).unwrap();
        assert_eq!(p.dim(), 1);
        assert_eq!(p.vertices().len(), 2);
        assert_eq!(p.volume(), rint(2));
        assert_eq!(p.ambient_volume(), rint(0));
        let q = Polytope::from_halfspaces(2, p.facets(), p.equations()).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn unit_interval_volume() {
        let p = Polytope::hull(&pts(&[&[0], &[1]])).unwrap();
        assert_eq!(p.volume(), rint(1));
    }

    #[test]
    fn infeasible_and_unbounded() {
        let h = |n: &[i64], o: i64| Halfspace::new(RatVec::from_ints(n), rint(o));
        assert_eq!(
            Polytope::from_halfspaces(1, &[h(&[1], 1), h(&[-1], 0)], &[]),
            Err(GeomError::Empty)
        );
        assert_eq!(
            Polytope::from_halfspaces(2, &[h(&[1, 0], 0)], &[]),
            Err(GeomError::Unbounded)
        );
    }

    #[test]
    fn primitive_examples() {
        let (v, mu) = primitive(&RatVec(vec![rat(-1, 2), rint(0)])).unwrap();
        assert_eq!((v, mu), (RatVec::from_ints(&[-1, 0]), BigInt::from(2)));
        let (v, mu) = primitive(&RatVec(vec![rat(2, 3), rat(-1, 3)])).unwrap();
        assert_eq!((v, mu), (RatVec::from_ints(&[2, -1]), BigInt::from(3)));
        assert!(primitive(&RatVec::zeros(2)).is_err());
    }

    #[test]
    fn lattice_distance_scales() {
        let h = Halfspace::new(RatVec(vec![rat(1, 2), rat(1, 2)]), rint(-1));
        assert_eq!(lattice_distance(&h).unwrap(), rint(2));
    }

    #[test]
    fn face_of_diamond() {
        let p = Polytope::hull(&pts(&[&[-1, 0], &[0, 1], &[1, 0], &[0, -1]])).unwrap();
        let f = p.face(&RatVec::from_ints(&[1, 1])).unwrap();
        assert_eq!(f.vertices(), &pts(&[&[-1, 0], &[0, -1]])[..]);
        let v = p.face(&RatVec::from_ints(&[1, 0])).unwrap();
        assert_eq!(v.vertices(), &pts(&[&[-1, 0]])[..]);
    }
}
