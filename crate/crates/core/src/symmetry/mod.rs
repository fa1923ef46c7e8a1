//! Torus equivariant automorphisms visible on a divisorial polytope, and
//! the symmetry criteria for soliton existence.

mod mobius;

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::divpol::{
    common_refinement, fano_check, mu_of_point, refinement_vertices, DivisorialPolytope, FanoCertificate,
    FanoFailure, PLConcave, ProjPoint,
};
use crate::exactgeom::linalg::{det, independent_rows, solve};
use crate::exactgeom::{AffineFn, Polytope, Rat, RatVec};

pub use mobius::{mobius_from_pairs, FixedSet, Mobius};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SymmetryError {
    #[error("not Fano: {0}")]
    NotFano(FanoFailure),
    #[error("source point {0} appears twice")]
    DuplicateSourcePoints(ProjPoint),
}

/// Integer matrix given by rows.
pub type IntMatrix = Vec<Vec<i64>>;

pub fn identity_matrix(n: usize) -> IntMatrix {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

pub fn matmul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let n = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| (0..n).map(|j| row.iter().zip(b).map(|(x, r)| x * r[j]).sum()).collect())
        .collect()
}

fn to_rows(m: &IntMatrix) -> Vec<RatVec> {
    m.iter().map(|r| RatVec::from_ints(r)).collect()
}

fn apply(m: &[RatVec], x: &RatVec) -> RatVec {
    RatVec(m.iter().map(|r| r.dot(x)).collect())
}

/// Unimodular integer matrices mapping the vertex set of `boxp` onto
/// itself, identity first.
pub fn box_lattice_automorphisms(boxp: &Polytope) -> Vec<IntMatrix> {
    let n = boxp.ambient_dim();
    let verts = boxp.vertices();
    let basis = independent_rows(verts);
    let id = identity_matrix(n);
    if basis.len() < n {
        return vec![id];
    }
    let b: Vec<RatVec> = basis.iter().map(|&i| verts[i].clone()).collect();
    let vset: BTreeSet<&RatVec> = verts.iter().collect();
    let mut found = BTreeSet::new();
    let mut choice = Vec::with_capacity(n);
    images(verts.len(), n, &mut choice, &mut |img: &[usize]| {
        // rows of A solve B a_j = (img_i)_j
        let mut rows = Vec::with_capacity(n);
        for j in 0..n {
            let rhs = RatVec(img.iter().map(|&i| verts[i][j].clone()).collect());
            match solve(&b, &rhs) {
                Some(r) if r.is_integral() => rows.push(r),
                _ => return,
            }
        }
        if det(&rows).abs() != Rat::one() {
            return;
        }
        if verts.iter().all(|v| vset.contains(&apply(&rows, v))) {
            let m: IntMatrix = rows
                .iter()
                .map(|r| r.iter().map(|x| x.to_integer().to_i64().expect("small entries")).collect())
                .collect();
            found.insert(m);
        }
    });
    found.remove(&id);
    let mut out = vec![id];
    out.extend(found);
    out
}

fn images(m: usize, k: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
    if cur.len() == k {
        f(cur);
        return;
    }
    for i in 0..m {
        if !cur.contains(&i) {
            cur.push(i);
            images(m, k, cur, f);
            cur.pop();
        }
    }
}

/// A pair `(psi, F*)` with shifts satisfying
/// `Psi_P o F* + v_P + b_P = Psi_{psi(P)} + b_{psi(P)}` for every `P`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AutomorphismPair {
    pub psi: Mobius,
    pub fstar: IntMatrix,
    /// `(v_P, b_P)` on the support; both vanish elsewhere except for
    /// `off_support_b`.
    pub shifts: BTreeMap<ProjPoint, (Vec<BigInt>, BigInt)>,
    /// Total of `b` placed on points off the support fixed by `psi` (or on
    /// a generic orbit) so that all `b_P` sum to zero.
    pub off_support_b: BigInt,
}

impl AutomorphismPair {
    pub fn is_identity(&self) -> bool {
        self.psi.is_identity() && self.fstar == identity_matrix(self.fstar.len())
    }

    pub fn key(&self) -> (Mobius, IntMatrix) {
        (self.psi.clone(), self.fstar.clone())
    }

    /// Apply `self` first, then `other`: `(psi' psi, F F')`.
    pub fn then_key(&self, other: &AutomorphismPair) -> (Mobius, IntMatrix) {
        (other.psi.compose(&self.psi), matmul(&self.fstar, &other.fstar))
    }
}

fn pull(f: &PLConcave, rows: &[RatVec]) -> PLConcave {
    f.map_pieces(f.domain().clone(), |p| p.pullback(rows))
        .expect("unimodular pullback keeps the domain")
}

/// Affine `D` with `g + D = h`, if it exists.
fn affine_difference(boxp: &Polytope, g: &PLConcave, h: &PLConcave) -> Option<AffineFn> {
    let cells = common_refinement(boxp, &[g, h]);
    let mut diff: Option<AffineFn> = None;
    for c in &cells {
        let d = c.active[1].add(&c.active[0].neg());
        match &diff {
            None => diff = Some(d),
            Some(e) if *e == d => {}
            Some(_) => return None,
        }
    }
    diff
}

/// Integer solution `t` of `sum coef_i t_i = target`, zero when the target is.
fn diophantine(coef: &[BigInt], target: &BigInt) -> Option<Vec<BigInt>> {
    let mut g = BigInt::zero();
    let mut x: Vec<BigInt> = Vec::new();
    for c in coef {
        let e = g.extended_gcd(c);
        for xi in x.iter_mut() {
            *xi = &*xi * &e.x;
        }
        x.push(e.y);
        g = e.gcd;
    }
    if g.is_zero() {
        return target.is_zero().then(|| vec![BigInt::zero(); coef.len()]);
    }
    if !target.is_multiple_of(&g) {
        return None;
    }
    let q = target / &g;
    Some(x.into_iter().map(|xi| xi * &q).collect())
}

fn cycles(support: &[ProjPoint], psi: &Mobius) -> Vec<Vec<ProjPoint>> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for p in support {
        if seen.contains(p) {
            continue;
        }
        let mut cyc = vec![p.clone()];
        seen.insert(p.clone());
        let mut q = psi.apply(p);
        while q != *p {
            seen.insert(q.clone());
            cyc.push(q.clone());
            q = psi.apply(&q);
        }
        out.push(cyc);
    }
    out
}

fn try_pair(
    psi_div: &DivisorialPolytope,
    support: &[ProjPoint],
    psi: &Mobius,
    f: &IntMatrix,
) -> Option<AutomorphismPair> {
    let boxp = psi_div.box_polytope();
    let n = psi_div.dim();
    let rows = to_rows(f);
    // D_P = v_P + b_P - b_{psi(P)}
    let mut diffs = BTreeMap::new();
    let mut vsum = RatVec::zeros(n);
    for p in support {
        let g = pull(&psi_div.function(p), &rows);
        let h = psi_div.function(&psi.apply(p));
        let d = affine_difference(boxp, &g, &h)?;
        if !d.linear.is_integral() || !d.constant.is_integer() {
            return None;
        }
        vsum = &vsum + &d.linear;
        diffs.insert(p.clone(), d);
    }
    if !vsum.is_zero() {
        return None;
    }

    let cyc = cycles(support, psi);
    let mut base: BTreeMap<ProjPoint, BigInt> = BTreeMap::new();
    let mut coef = Vec::new();
    let mut total = BigInt::zero();
    for c in &cyc {
        let mut b = BigInt::zero();
        for (i, p) in c.iter().enumerate() {
            base.insert(p.clone(), b.clone());
            total += &b;
            // b_{psi(P)} = b_P - c_P
            b -= diffs[p].constant.to_integer();
            if i + 1 == c.len() && !b.is_zero() {
                return None;
            }
        }
        coef.push(BigInt::from(c.len()));
    }
    let target = -total;
    let (t, sink) = match diophantine(&coef, &target) {
        Some(t) => (t, BigInt::zero()),
        None => {
            let m = if psi.fixed_points().escapes(support) {
                BigInt::one()
            } else {
                BigInt::from(psi.order()?)
            };
            coef.push(m);
            let mut t = diophantine(&coef, &target)?;
            let s = t.pop().unwrap() * coef.last().unwrap();
            (t, s)
        }
    };
    let mut shifts = BTreeMap::new();
    for (c, tj) in cyc.iter().zip(&t) {
        for p in c {
            let v: Vec<BigInt> = diffs[p].linear.iter().map(|x| x.to_integer()).collect();
            shifts.insert(p.clone(), (v, &base[p] + tj));
        }
    }
    let pair = AutomorphismPair {
        psi: psi.clone(),
        fstar: f.clone(),
        shifts,
        off_support_b: sink,
    };
    debug_assert!(check_pair(psi_div, &pair));
    Some(pair)
}

/// Exact check of the matching equation at every vertex of the common
/// refinement, plus the zero sum conditions.
pub fn check_pair(psi_div: &DivisorialPolytope, pair: &AutomorphismPair) -> bool {
    let n = psi_div.dim();
    let rows = to_rows(&pair.fstar);
    let zero = (vec![BigInt::zero(); n], BigInt::zero());
    let mut pts: BTreeSet<ProjPoint> = psi_div.support().into_iter().collect();
    pts.extend(pair.shifts.keys().cloned());
    let mut vsum = vec![BigInt::zero(); n];
    let mut bsum = pair.off_support_b.clone();
    for p in &pts {
        let q = pair.psi.apply(p);
        let g = pull(&psi_div.function(p), &rows);
        let h = psi_div.function(&q);
        let (v, b) = pair.shifts.get(p).unwrap_or(&zero);
        let bq = &pair.shifts.get(&q).unwrap_or(&zero).1;
        let vr = RatVec::from_bigints(v);
        let cells = common_refinement(psi_div.box_polytope(), &[&g, &h]);
        for u in refinement_vertices(&cells) {
            let lhs = g.eval_unchecked(&u) + vr.dot(&u) + Rat::from_integer(b.clone());
            let rhs = h.eval_unchecked(&u) + Rat::from_integer(bq.clone());
            if lhs != rhs {
                return false;
            }
        }
        for (s, x) in vsum.iter_mut().zip(v) {
            *s += x;
        }
        bsum += b;
    }
    vsum.iter().all(|x| x.is_zero()) && bsum.is_zero()
}

fn permutations(items: &[ProjPoint]) -> Vec<Vec<ProjPoint>> {
    if items.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x.clone());
            out.push(p);
        }
    }
    out
}

/// All pairs `(psi, F*)` permuting the support, identity first.
pub fn find_automorphism_pairs(cert: &FanoCertificate) -> Vec<AutomorphismPair> {
    let psi_div = cert.psi();
    let support = psi_div.support();
    let mu: BTreeMap<&ProjPoint, BigInt> = support.iter().map(|p| (p, mu_of_point(psi_div, p))).collect();
    let autos = box_lattice_automorphisms(psi_div.box_polytope());
    let mut out = Vec::new();
    for image in permutations(&support) {
        if support.iter().zip(&image).any(|(p, q)| mu[p] != mu[q]) {
            continue;
        }
        let pairs: Vec<(ProjPoint, ProjPoint)> = support.iter().cloned().zip(image).collect();
        let Ok(Some(m)) = mobius_from_pairs(&pairs) else {
            continue;
        };
        for f in &autos {
            if let Some(p) = try_pair(psi_div, &support, &m, f) {
                out.push(p);
            }
        }
    }
    out
}

pub fn find_automorphism_pairs_for(psi: &DivisorialPolytope) -> Result<Vec<AutomorphismPair>, SymmetryError> {
    let cert = fano_check(psi).map_err(SymmetryError::NotFano)?;
    Ok(find_automorphism_pairs(&cert))
}

#[derive(Clone, Debug)]
pub struct SolitonCriteria {
    /// at least three points with `mu > 1`
    pub c1: bool,
    /// some found pair swaps two points with `mu > 1`
    pub c2: bool,
    /// the found maps have no common fixed point
    pub c3: bool,
    pub mu: BTreeMap<ProjPoint, BigInt>,
    pub c1_points: Vec<ProjPoint>,
    pub c2_swap: Option<(ProjPoint, ProjPoint, Mobius)>,
    pub common_fixed: FixedSet,
    pub pairs: Vec<AutomorphismPair>,
    pub note: String,
}

impl SolitonCriteria {
    pub fn any(&self) -> bool {
        self.c1 || self.c2 || self.c3
    }

    /// Index of the first criterion that holds.
    pub fn first(&self) -> Option<u8> {
        [self.c1, self.c2, self.c3]
            .iter()
            .position(|&c| c)
            .map(|i| i as u8 + 1)
    }
}

pub fn soliton_criteria(cert: &FanoCertificate) -> SolitonCriteria {
    let psi_div = cert.psi();
    let mu: BTreeMap<ProjPoint, BigInt> = psi_div
        .support()
        .into_iter()
        .map(|p| {
            let m = mu_of_point(psi_div, &p);
            (p, m)
        })
        .collect();
    let heavy: Vec<ProjPoint> = mu.iter().filter(|(_, m)| **m > BigInt::one()).map(|(p, _)| p.clone()).collect();
    let pairs = find_automorphism_pairs(cert);

    let mut c2_swap = None;
    'search: for pair in &pairs {
        for (i, p) in heavy.iter().enumerate() {
            for q in &heavy[i + 1..] {
                if pair.psi.apply(p) == *q && pair.psi.apply(q) == *p {
                    c2_swap = Some((p.clone(), q.clone(), pair.psi.clone()));
                    break 'search;
                }
            }
        }
    }

    let gens: BTreeSet<&Mobius> = pairs.iter().map(|p| &p.psi).filter(|m| !m.is_identity()).collect();
    let common_fixed = gens.iter().fold(FixedSet::All, |acc, m| acc.intersect(&m.fixed_points()));
    let c3 = !gens.is_empty() && common_fixed.is_empty();
    SolitonCriteria {
        c1: heavy.len() >= 3,
        c2: c2_swap.is_some(),
        c3,
        mu,
        c1_points: heavy,
        c2_swap,
        common_fixed,
        pairs,
        note: "c3 = false is inconclusive: only automorphisms visible on the support are searched".to_string(),
    }
}

pub fn soliton_criteria_for(psi: &DivisorialPolytope) -> Result<SolitonCriteria, SymmetryError> {
    let cert = fano_check(psi).map_err(SymmetryError::NotFano)?;
    Ok(soliton_criteria(&cert))
}

#[cfg(test)]
mod tests;
