//! Small dense linear algebra over the rationals.

use num_traits::{One, Zero};

use super::rat::{Rat, RatVec};

/// Reduced row echelon form. Returns the nonzero rows and the pivot columns.
pub fn rref(rows: &[RatVec]) -> (Vec<RatVec>, Vec<usize>) {
    let mut m: Vec<RatVec> = rows.to_vec();
    let ncols = m.first().map_or(0, |r| r.dim());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = Rat::one() / &m[r][c];
        m[r] = m[r].scale(&inv);
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                let sub = m[r].scale(&f);
                m[i] = &m[i] - &sub;
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank(rows: &[RatVec]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    rref(rows).1.len()
}

/// Determinant of a square matrix given by rows.
pub fn det(rows: &[RatVec]) -> Rat {
    let n = rows.len();
    let mut m: Vec<RatVec> = rows.to_vec();
    let mut d = Rat::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return Rat::zero();
        };
        if p != c {
            m.swap(p, c);
            d = -d;
        }
        d *= &m[c][c];
        for i in c + 1..n {
            if !m[i][c].is_zero() {
                let f = &m[i][c] / &m[c][c];
                let sub = m[c].scale(&f);
                m[i] = &m[i] - &sub;
            }
        }
    }
    d
}

/// Solve `A x = b` for square nonsingular `A`.
pub fn solve(a: &[RatVec], b: &RatVec) -> Option<RatVec> {
    let n = a.len();
    let aug: Vec<RatVec> = a
        .iter()
        .zip(b.iter())
        .map(|(row, bi)| row.extend_with(bi.clone()))
        .collect();
    let (r, piv) = rref(&aug);
    if piv.len() != n || piv.iter().any(|&c| c >= n) {
        return None;
    }
    Some(RatVec(r.iter().map(|row| row[n].clone()).collect()))
}

/// Select a maximal linearly independent subset of rows, scanning in order.
pub fn independent_rows(rows: &[RatVec]) -> Vec<usize> {
    let mut basis: Vec<RatVec> = Vec::new();
    let mut picked = Vec::new();
    for (i, r) in rows.iter().enumerate() {
        basis.push(r.clone());
        if rank(&basis) == basis.len() {
            picked.push(i);
        } else {
            basis.pop();
        }
    }
    picked
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactgeom::rat::rint;

    #[test]
    fn det_and_solve() {
        let a = vec![RatVec::from_ints(&[2, 1]), RatVec::from_ints(&[1, 3])];
        assert_eq!(det(&a), rint(5));
        let x = solve(&a, &RatVec::from_ints(&[3, 4])).unwrap();
        assert_eq!(x, RatVec::from_ints(&[1, 1]));
        let sing = vec![RatVec::from_ints(&[1, 2]), RatVec::from_ints(&[2, 4])];
        assert_eq!(det(&sing), rint(0));
        assert!(solve(&sing, &RatVec::from_ints(&[1, 1])).is_none());
        assert_eq!(rank(&sing), 1);
    }
}
