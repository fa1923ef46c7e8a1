//! Brute force lattice point sums, an independent route to the
//! barycenter pairings used by the invariants.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::exactgeom::rat::common_denominator;
use crate::exactgeom::{Polytope, Rat, RatVec};

use super::FutakiError;

fn to_i128(x: &BigInt) -> i128 {
    x.to_i128().expect("coordinates fit in 128 bits")
}

/// Row `(n, o)` scaled so that `n . x >= o` becomes integral.
fn int_row(normal: &RatVec, offset: &Rat) -> (Vec<i128>, Rat) {
    let den = common_denominator(normal.iter());
    let n = normal.iter().map(|x| to_i128(&(x * &den).to_integer())).collect();
    (n, offset * Rat::from_integer(den))
}

/// For `k = 1..=k_max`, sums over the lattice points `u` of `k l P`
/// (with `l` the common denominator of the vertices of `P`):
///
/// ```text
/// -(sum_u <u, v> w(u)) / (k l sum_u w(u)),   w(u) = e^<u, xi> / (k l)
/// ```
///
/// With `xi = 0` this is `-w_k / (k l_k l)` and tends to `-<b, v>`.
pub fn futaki_oracle_lattice_count(
    p: &Polytope,
    v: &RatVec,
    xi: &[f64],
    k_max: usize,
    budget: u128,
) -> Result<Vec<f64>, FutakiError> {
    let n = p.ambient_dim();
    let ell = common_denominator(p.vertices().iter().flat_map(|x| x.iter()));
    let ell_i = to_i128(&ell);
    let vden = common_denominator(v.iter());
    let vint: Vec<i128> = v.iter().map(|x| to_i128(&(x * &vden).to_integer())).collect();
    let vden_f = vden.to_f64().unwrap();
    let ineqs: Vec<(Vec<i128>, Rat)> = p.facets().iter().map(|f| int_row(&f.normal, &f.offset)).collect();
    let eqs: Vec<(Vec<i128>, Rat)> = p.equations().iter().map(|e| int_row(&e.normal, &e.offset)).collect();
    let weighted = xi.iter().any(|x| *x != 0.0);

    let mut out = Vec::with_capacity(k_max);
    for k in 1..=k_max {
        let s = k as i128 * ell_i;
        let sr = Rat::from_integer(BigInt::from(s));
        let lo: Vec<i128> = (0..n)
            .map(|i| to_i128(&(p.vertices().iter().map(|x| &x[i]).min().unwrap() * &sr).ceil().to_integer()))
            .collect();
        let hi: Vec<i128> = (0..n)
            .map(|i| to_i128(&(p.vertices().iter().map(|x| &x[i]).max().unwrap() * &sr).floor().to_integer()))
            .collect();
        let size: u128 = lo.iter().zip(&hi).map(|(l, h)| (h - l + 1).max(0) as u128).product();
        if size > budget {
            return Err(FutakiError::TooManyLatticePoints { count: size, budget });
        }
        // thresholds: n . x >= ceil(s * o) for inequalities, == s * o for equations
        let ge: Vec<(&Vec<i128>, i128)> = ineqs
            .iter()
            .map(|(nv, o)| (nv, to_i128(&(o * &sr).ceil().to_integer())))
            .collect();
        let mut eq_ok = true;
        let eqv: Vec<(&Vec<i128>, i128)> = eqs
            .iter()
            .map(|(nv, o)| {
                let t = o * &sr;
                if !t.is_integer() {
                    eq_ok = false;
                }
                (nv, to_i128(&t.to_integer()))
            })
            .collect();

        let mut count: i128 = 0;
        let mut pair: i128 = 0;
        let mut wsum = 0.0f64;
        let mut wpair = 0.0f64;
        if eq_ok && lo.iter().zip(&hi).all(|(l, h)| l <= h) {
            let mut cur = lo.clone();
            'outer: loop {
                let dot = |a: &Vec<i128>| a.iter().zip(&cur).map(|(x, y)| x * y).sum::<i128>();
                if ge.iter().all(|(nv, t)| dot(nv) >= *t) && eqv.iter().all(|(nv, t)| dot(nv) == *t) {
                    let uv: i128 = vint.iter().zip(&cur).map(|(x, y)| x * y).sum();
                    if weighted {
                        let e: f64 = xi.iter().zip(&cur).map(|(x, u)| x * *u as f64).sum::<f64>() / s as f64;
                        let w = e.exp();
                        wsum += w;
                        wpair += w * uv as f64 / vden_f;
                    } else {
                        count += 1;
                        pair += uv;
                    }
                }
                let mut i = n;
                loop {
                    if i == 0 {
                        break 'outer;
                    }
                    i -= 1;
                    if cur[i] < hi[i] {
                        cur[i] += 1;
                        for j in i + 1..n {
                            cur[j] = lo[j];
                        }
                        break;
                    }
                }
            }
        }
        let val = if weighted {
            if wsum == 0.0 {
                f64::NAN
            } else {
                -wpair / (s as f64 * wsum)
            }
        } else if count == 0 {
            f64::NAN
        } else {
            let r = -Rat::new(BigInt::from(pair), BigInt::from(count * s) * &vden);
            r.to_f64().unwrap()
        };
        out.push(val);
    }
    Ok(out)
}
