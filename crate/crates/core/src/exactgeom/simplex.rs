use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::linalg::det;
use super::polytope::edge_det;
use super::rat::{to_primitive_integer, Rat, RatVec};
use super::AffineFn;

/// Simplex given by affinely independent vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Simplex {
    vertices: Vec<RatVec>,
}

impl Simplex {
    pub fn new(vertices: Vec<RatVec>) -> Self {
        Simplex { vertices }
    }

    pub fn vertices(&self) -> &[RatVec] {
        &self.vertices
    }

    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn centroid(&self) -> RatVec {
        let n = self.vertices[0].dim();
        let s = self
            .vertices
            .iter()
            .fold(RatVec::zeros(n), |acc, v| &acc + v);
        s.scale(&Rat::new(BigInt::one(), BigInt::from(self.vertices.len())))
    }

    /// `k! * vol`, i.e. the lattice normalised volume in the affine hull.
    pub fn normalized_volume(&self) -> Rat {
        let k = self.dim();
        let n = self.vertices[0].dim();
        if k == 0 {
            return Rat::one();
        }
        if k == n {
            return edge_det(&self.vertices);
        }
        // [saturation : integer span] = gcd of maximal minors; undo the row scaling.
        let edges: Vec<RatVec> = self.vertices[1..].iter().map(|v| v - &self.vertices[0]).collect();
        let mut scale = Rat::one();
        let mut ints: Vec<RatVec> = Vec::with_capacity(k);
        for e in &edges {
            let (p, s) = to_primitive_integer(&e.0).expect("edges are nonzero");
            scale *= s;
            ints.push(RatVec::from_bigints(&p));
        }
        let g = maximal_minor_gcd(&ints);
        (Rat::from_integer(g) / scale).abs()
    }

    /// Relative volume.
    pub fn volume(&self) -> Rat {
        let k = self.dim();
        self.normalized_volume() / Rat::from_integer(factorial(k))
    }

    /// Exact integral of a product of affine functions over the simplex,
    /// measured with the relative volume.
    pub fn integrate_product(&self, fs: &[&AffineFn]) -> Rat {
        let k = self.dim();
        let r = fs.len();
        let vals: Vec<Vec<Rat>> = fs
            .iter()
            .map(|f| self.vertices.iter().map(|v| f.eval(v)).collect())
            .collect();
        let mut total = Rat::zero();
        let mut idx = vec![0usize; r];
        loop {
            let mut term = Rat::one();
            let mut alpha = vec![0u32; k + 1];
            for (j, &i) in idx.iter().enumerate() {
                term *= &vals[j][i];
                alpha[i] += 1;
            }
            if !term.is_zero() {
                let af: BigInt = alpha.iter().map(|&a| factorial(a as usize)).product();
                total += term * Rat::from_integer(af);
            }
            let mut j = r;
            loop {
                if j == 0 {
                    let denom = factorial(k + r);
                    return self.normalized_volume() * total / Rat::from_integer(denom);
                }
                j -= 1;
                idx[j] += 1;
                if idx[j] <= k {
                    break;
                }
                idx[j] = 0;
            }
        }
    }
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

fn maximal_minor_gcd(rows: &[RatVec]) -> BigInt {
    let k = rows.len();
    let n = rows[0].dim();
    let mut g = BigInt::zero();
    for cols in combinations(n, k) {
        let m: Vec<RatVec> = rows
            .iter()
            .map(|r| RatVec(cols.iter().map(|&c| r[c].clone()).collect()))
            .collect();
        g = g.gcd(&det(&m).to_integer());
    }
    g
}

pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}
