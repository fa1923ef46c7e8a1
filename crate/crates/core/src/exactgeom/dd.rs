//! Double description method for pointed polyhedral cones `{x : A x >= 0}`.
//!
//! Rows are processed in the order given, which makes the output ray order
//! deterministic. Adjacency uses the combinatorial test on zero sets.

use fixedbitset::FixedBitSet;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::linalg::{independent_rows, solve};
use super::rat::{primitive_int, to_primitive_integer, Rat, RatVec};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NotPointed;

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).fold(BigInt::zero(), |acc, (x, y)| acc + x * y)
}

/// Clear denominators row by row.
pub fn integer_rows(rows: &[RatVec]) -> Vec<Vec<BigInt>> {
    rows.iter()
        .map(|r| match to_primitive_integer(&r.0) {
            Some((v, _)) => v,
            None => vec![BigInt::zero(); r.dim()],
        })
        .collect()
}

struct Ray {
    v: Vec<BigInt>,
    zeros: FixedBitSet,
}

/// Extreme rays of `{x in Q^n : rows * x >= 0}` as primitive integer vectors.
///
/// Fails when the cone contains a line, i.e. the rows have rank below `n`.
pub fn extreme_rays(rows: &[Vec<BigInt>], n: usize) -> Result<Vec<Vec<BigInt>>, NotPointed> {
    if n == 0 {
        return Ok(Vec::new());
    }
    let rat_rows: Vec<RatVec> = rows.iter().map(|r| RatVec::from_bigints(r)).collect();
    let basis = first_basis(&rat_rows, n);
    if basis.len() < n {
        return Err(NotPointed);
    }
    let m = rows.len();
    let bmat: Vec<RatVec> = basis.iter().map(|&i| rat_rows[i].clone()).collect();

    let mut rays: Vec<Ray> = Vec::with_capacity(n);
    for (k, _) in basis.iter().enumerate() {
        let mut e = RatVec::zeros(n);
        e[k] = Rat::from_integer(1.into());
        let col = solve(&bmat, &e).expect("basis rows are independent");
        let (v, _) = to_primitive_integer(&col.0).expect("nonzero column");
        let mut zeros = FixedBitSet::with_capacity(m);
        for (j, &bj) in basis.iter().enumerate() {
            if j != k {
                zeros.insert(bj);
            }
        }
        rays.push(Ray { v, zeros });
    }

    let mut in_basis = FixedBitSet::with_capacity(m);
    for &b in &basis {
        in_basis.insert(b);
    }

    for (idx, row) in rows.iter().enumerate() {
        if in_basis.contains(idx) {
            continue;
        }
        let vals: Vec<BigInt> = rays.iter().map(|r| dot(row, &r.v)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_negative()).collect();
        if neg.is_empty() {
            for (i, r) in rays.iter_mut().enumerate() {
                if vals[i].is_zero() {
                    r.zeros.insert(idx);
                }
            }
            continue;
        }

        let mut fresh: Vec<Ray> = Vec::new();
        for &p in &pos {
            for &q in &neg {
                let mut common = rays[p].zeros.clone();
                common.intersect_with(&rays[q].zeros);
                if common.count_ones(..) + 2 < n {
                    continue;
                }
                let blocked = rays.iter().enumerate().any(|(r, ray)| {
                    r != p && r != q && common.is_subset(&ray.zeros)
                });
                if blocked {
                    continue;
                }
                let mut v: Vec<BigInt> = rays[q]
                    .v
                    .iter()
                    .zip(&rays[p].v)
                    .map(|(qv, pv)| &vals[p] * qv - &vals[q] * pv)
                    .collect();
                primitive_int(&mut v);
                common.insert(idx);
                fresh.push(Ray { v, zeros: common });
            }
        }

        let old = std::mem::take(&mut rays);
        for (i, mut r) in old.into_iter().enumerate() {
            if vals[i].is_negative() {
                continue;
            }
            if vals[i].is_zero() {
                r.zeros.insert(idx);
            }
            rays.push(r);
        }
        rays.extend(fresh);
    }

    Ok(rays.into_iter().map(|r| r.v).collect())
}

fn first_basis(rows: &[RatVec], n: usize) -> Vec<usize> {
    let mut picked = independent_rows(rows);
    picked.truncate(n);
    picked
}

/// True when `{x : rows * x >= 0}` is the origin alone.
pub fn cone_is_trivial(rows: &[Vec<BigInt>], n: usize) -> bool {
    if n == 0 {
        return true;
    }
    match extreme_rays(rows, n) {
        Err(NotPointed) => false,
        Ok(r) => r.is_empty(),
    }
}

/// True when `{x : rows * x >= 0}` has nonempty interior.
///
/// By Gordan's alternative this fails exactly when some nonzero nonnegative
/// combination of the rows vanishes.
pub fn cone_has_interior(rows: &[Vec<BigInt>], n: usize) -> bool {
    let m = rows.len();
    if m == 0 {
        return true;
    }
    let mut dual: Vec<Vec<BigInt>> = Vec::new();
    for i in 0..m {
        let mut e = vec![BigInt::zero(); m];
        e[i] = 1.into();
        dual.push(e);
    }
    for c in 0..n {
        let col: Vec<BigInt> = rows.iter().map(|r| r[c].clone()).collect();
        dual.push(col.iter().map(|x| -x).collect());
        dual.push(col);
    }
    cone_is_trivial(&dual, m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    fn sorted(mut v: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
        v.sort();
        v
    }

    #[test]
    fn orthant() {
        let rays = extreme_rays(&ints(&[&[1, 0], &[0, 1]]), 2).unwrap();
        assert_eq!(sorted(rays), ints(&[&[0, 1], &[1, 0]]));
    }

    #[test]
    fn square_cone() {
        // homogenised unit square 0 <= x, y <= 1
        let rows = ints(&[&[0, 1, 0], &[0, 0, 1], &[1, -1, 0], &[1, 0, -1], &[1, 0, 0]]);
        let rays = extreme_rays(&rows, 3).unwrap();
        assert_eq!(
            sorted(rays),
            ints(&[&[1, 0, 0], &[1, 0, 1], &[1, 1, 0], &[1, 1, 1]])
        );
    }

    #[test]
    fn line_is_not_pointed() {
        assert_eq!(extreme_rays(&ints(&[&[1, 0]]), 2), Err(NotPointed));
    }

    #[test]
    fn triviality_and_interior() {
        assert!(cone_is_trivial(&ints(&[&[1, 0], &[-1, 0], &[0, 1], &[0, -1]]), 2));
        assert!(!cone_is_trivial(&ints(&[&[1, 0], &[-1, 0]]), 2));
        assert!(cone_has_interior(&ints(&[&[1, 0], &[0, 1]]), 2));
        assert!(!cone_has_interior(&ints(&[&[1, 0], &[-1, 0]]), 2));
    }
}
