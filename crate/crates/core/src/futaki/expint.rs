//! Exponential moments over polytopes.
//!
//! On a simplex with vertices `v_0..v_n` and `z_i = <xi, v_i>`,
//!
//! ```text
//! int_S e^<xi,x> dx           = n! vol(S) exp[z_0, .., z_n]
//! int_S l(x) e^<xi,x> dx      = n! vol(S) sum_i l(v_i) exp[z_0, .., z_n, z_i]
//! int_S l(x) m(x) e^<xi,x> dx = n! vol(S) sum_{i,j} l(v_i) m(v_j) (1 + [i=j]) exp[z.., z_i, z_j]
//! ```
//!
//! where `exp[..]` is the divided difference of the exponential. `l` and `m`
//! may be affine.

use num_traits::Zero;

use crate::exactgeom::{AffineFn, Polytope, Rat, RatVec};
use crate::real::Real;

use super::FutakiError;

/// Spread of nodes beyond which we refuse to evaluate.
const MAX_SPREAD: f64 = 4096.0;
/// Hermite recursion is used only when distinct nodes are at least this far apart.
const MIN_GAP: f64 = 0.25;

/// Divided difference `exp[z_0, .., z_m]`, accurate to about `bits` bits.
pub fn exp_divdiff(nodes: &[Real], bits: u32) -> Result<Real, FutakiError> {
    assert!(!nodes.is_empty());
    let mut z: Vec<Real> = nodes.iter().map(|x| x.with_prec(bits + 64)).collect();
    z.sort();
    let lo = &z[0];
    let hi = &z[z.len() - 1];
    let spread = (hi - lo).to_f64();
    if !spread.is_finite() || spread > MAX_SPREAD {
        return Err(FutakiError::PrecisionLoss { spread });
    }
    let separated = spread > 4.0
        && z.windows(2)
            .all(|w| w[0] == w[1] || (&w[1] - &w[0]).to_f64() >= MIN_GAP);
    let out = if separated {
        hermite(&z, bits + 64)
    } else {
        taylor(&z, bits, spread / 2.0)
    };
    Ok(out.with_prec(bits))
}

/// Recursion on sorted nodes; repeated nodes use `e^z / l!`.
fn hermite(z: &[Real], wp: u32) -> Real {
    let m = z.len() - 1;
    let ez: Vec<Real> = z.iter().map(|x| x.with_prec(wp).exp()).collect();
    let mut f = ez.clone();
    let mut fact = Real::one(wp);
    for l in 1..=m {
        fact = &fact * &Real::from_i64(l as i64, wp);
        for i in 0..=m - l {
            f[i] = if z[i + l] == z[i] {
                &ez[i] / &fact
            } else {
                &(&f[i + 1] - &f[i]) / &(&z[i + l] - &z[i])
            };
        }
    }
    f[0].clone()
}

/// `e^c sum_k h_k(z - c) / (k + m)!` with `c` the midpoint of the nodes.
/// The terms alternate in size up to `e^R`, so the working precision is
/// raised by about `2R / ln 2` bits.
fn taylor(z: &[Real], bits: u32, radius: f64) -> Real {
    let m = z.len() - 1;
    let wp = bits + 64 + (2.0 * radius * std::f64::consts::LOG2_E).ceil() as u32;
    let lo = z[0].with_prec(wp);
    let hi = z[m].with_prec(wp);
    let c = (&lo + &hi).ldexp(-1);
    let delta: Vec<Real> = z.iter().map(|x| &x.with_prec(wp) - &c).collect();

    let mut inv_fact = Real::one(wp);
    for j in 1..=m {
        inv_fact = &inv_fact / &Real::from_i64(j as i64, wp);
    }
    let mut h = vec![Real::one(wp); m + 1];
    let mut sum = inv_fact.clone();
    if radius > 0.0 {
        let target = -(wp as f64) * std::f64::consts::LN_2 - 2.0 * radius - 8.0;
        let ln_r = radius.ln();
        let mut ln_kfact = 0.0;
        let mut k = 1usize;
        loop {
            let mut prev = Real::zero(wp);
            for j in 0..=m {
                let v = &prev + &(&delta[j] * &h[j]);
                h[j] = v.clone();
                prev = v;
            }
            inv_fact = &inv_fact / &Real::from_i64((k + m) as i64, wp);
            sum = &sum + &(&h[m] * &inv_fact);
            ln_kfact += (k as f64).ln();
            if k as f64 > 2.0 * radius + 2.0 && k as f64 * ln_r - ln_kfact < target {
                break;
            }
            k += 1;
        }
    }
    &c.exp() * &sum
}

/// Weighted moment data of one polytope at one `xi`.
#[derive(Clone, Debug)]
pub struct Moments {
    pub mass: Real,
    /// `int x_a e^<xi,x>` for the first `k` coordinates
    pub first: Vec<Real>,
    /// `int x_a x_b e^<xi,x>`
    pub second: Vec<Vec<Real>>,
}

/// Triangulated polytope ready for repeated exponential integration.
#[derive(Clone, Debug)]
pub struct ExpIntegrator {
    dim: usize,
    simplices: Vec<(Vec<RatVec>, Rat)>,
}

impl ExpIntegrator {
    pub fn new(p: &Polytope) -> Result<Self, FutakiError> {
        if !p.is_full_dimensional() || p.volume().is_zero() {
            return Err(FutakiError::ZeroVolume);
        }
        let simplices = p
            .triangulate()
            .into_iter()
            .map(|s| {
                let nv = s.normalized_volume();
                (s.vertices().to_vec(), nv)
            })
            .collect();
        Ok(ExpIntegrator {
            dim: p.ambient_dim(),
            simplices,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn nodes(&self, verts: &[RatVec], xi: &[Real], bits: u32) -> Vec<Real> {
        verts
            .iter()
            .map(|v| {
                xi.iter()
                    .enumerate()
                    .fold(Real::zero(bits), |acc, (a, x)| {
                        &acc + &(x * &Real::from_rat(&v[a], bits))
                    })
            })
            .collect()
    }

    /// `int e^<xi,x>`, with `xi` acting on the leading coordinates.
    pub fn mass(&self, xi: &[Real], bits: u32) -> Result<Real, FutakiError> {
        let mut total = Real::zero(bits);
        for (verts, nv) in &self.simplices {
            let z = self.nodes(verts, xi, bits);
            let e = exp_divdiff(&z, bits)?;
            total = &total + &(&e * &Real::from_rat(nv, bits));
        }
        Ok(total)
    }

    /// `int l(x) e^<xi,x>` for an affine `l`.
    pub fn moment(&self, l: &AffineFn, xi: &[Real], bits: u32) -> Result<Real, FutakiError> {
        let mut total = Real::zero(bits);
        for (verts, nv) in &self.simplices {
            let z = self.nodes(verts, xi, bits);
            let mut acc = Real::zero(bits);
            for (i, v) in verts.iter().enumerate() {
                let lv = l.eval(v);
                if lv.is_zero() {
                    continue;
                }
                let mut nodes = z.clone();
                nodes.push(z[i].clone());
                acc = &acc + &(&exp_divdiff(&nodes, bits)? * &Real::from_rat(&lv, bits));
            }
            total = &total + &(&acc * &Real::from_rat(nv, bits));
        }
        Ok(total)
    }

    /// Mass, first and second coordinate moments in the first `k` coordinates.
    pub fn moments(&self, xi: &[Real], k: usize, bits: u32) -> Result<Moments, FutakiError> {
        let zero = Real::zero(bits);
        let mut mass = zero.clone();
        let mut first = vec![zero.clone(); k];
        let mut second = vec![vec![zero.clone(); k]; k];
        for (verts, nv) in &self.simplices {
            let w = Real::from_rat(nv, bits);
            let z = self.nodes(verts, xi, bits);
            let n1 = verts.len();
            let coords: Vec<Vec<Real>> = verts
                .iter()
                .map(|v| (0..k).map(|a| Real::from_rat(&v[a], bits)).collect())
                .collect();

            mass = &mass + &(&exp_divdiff(&z, bits)? * &w);

            let mut e1 = Vec::with_capacity(n1);
            for i in 0..n1 {
                let mut nodes = z.clone();
                nodes.push(z[i].clone());
                e1.push(exp_divdiff(&nodes, bits)?);
            }
            for a in 0..k {
                let mut acc = zero.clone();
                for i in 0..n1 {
                    acc = &acc + &(&coords[i][a] * &e1[i]);
                }
                first[a] = &first[a] + &(&acc * &w);
            }

            let mut e2 = vec![vec![zero.clone(); n1]; n1];
            for i in 0..n1 {
                for j in i..n1 {
                    let mut nodes = z.clone();
                    nodes.push(z[i].clone());
                    nodes.push(z[j].clone());
                    let mut e = exp_divdiff(&nodes, bits)?;
                    if i == j {
                        e = e.ldexp(1);
                    }
                    e2[i][j] = e.clone();
                    e2[j][i] = e;
                }
            }
            for a in 0..k {
                for b in a..k {
                    let mut acc = zero.clone();
                    for i in 0..n1 {
                        for j in 0..n1 {
                            acc = &acc + &(&(&coords[i][a] * &coords[j][b]) * &e2[i][j]);
                        }
                    }
                    let val = &acc * &w;
                    second[a][b] = &second[a][b] + &val;
                    if a != b {
                        second[b][a] = &second[b][a] + &val;
                    }
                }
            }
        }
        Ok(Moments { mass, first, second })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactgeom::{rint, Simplex};
    use crate::real::bits_for_digits;

    fn r(x: f64, b: u32) -> Real {
        Real::from_f64(x, b)
    }

    #[test]
    fn divdiff_matches_closed_forms() {
        let b = bits_for_digits(60);
        // exp[0, 1] = e - 1
        let v = exp_divdiff(&[r(0.0, b), r(1.0, b)], b).unwrap();
        let want = &Real::one(b).exp() - &Real::one(b);
        assert!((&v - &want).abs() < Real::one(b).ldexp(-190));
        // exp[z, z, z] = e^z / 2
        let z = r(3.5, b);
        let v = exp_divdiff(&[z.clone(), z.clone(), z.clone()], b).unwrap();
        let want = z.exp().ldexp(-1);
        assert!((&(&v - &want) / &want).abs() < Real::one(b).ldexp(-190));
    }

    #[test]
    fn hermite_and_taylor_agree() {
        let b = bits_for_digits(50);
        let nodes = [r(-6.0, b), r(-1.0, b), r(2.0, b), r(2.0, b), r(7.0, b)];
        let h = hermite(
            &{
                let mut z: Vec<Real> = nodes.iter().map(|x| x.with_prec(b + 64)).collect();
                z.sort();
                z
            },
            b + 64,
        );
        let t = taylor(&nodes, b, 6.5);
        assert!((&(&h - &t) / &t).abs() < Real::one(b).ldexp(-(b as i64) + 8));
    }

    #[test]
    fn clustered_nodes_use_taylor() {
        let b = bits_for_digits(50);
        let eps = Real::one(b).ldexp(-80);
        let nodes = [r(-5.0, b), &r(-5.0, b) + &eps, r(5.0, b)];
        let v = exp_divdiff(&nodes, b).unwrap();
        // exp[a, a, c] = (e^c - e^a - (c - a) e^a) / (c - a)^2
        let a = r(-5.0, b).exp();
        let c = r(5.0, b).exp();
        let want = &(&(&c - &a) - &(&a * &r(10.0, b))) / &r(100.0, b);
        assert!((&(&v - &want) / &want).abs() < Real::one(b).ldexp(-70));
    }

    #[test]
    fn huge_spread_is_refused() {
        let b = 128;
        assert!(matches!(
            exp_divdiff(&[r(0.0, b), r(1e5, b)], b),
            Err(FutakiError::PrecisionLoss { .. })
        ));
    }

    #[test]
    fn zero_field_gives_polynomial_moments() {
        let b = bits_for_digits(40);
        let p = Polytope::hull(&[
            RatVec::from_ints(&[0, 0]),
            RatVec::from_ints(&[3, 0]),
            RatVec::from_ints(&[0, 2]),
            RatVec::from_ints(&[2, 2]),
        ])
        .unwrap();
        let ig = ExpIntegrator::new(&p).unwrap();
        let xi = vec![Real::zero(b), Real::zero(b)];
        let m = ig.moments(&xi, 2, b).unwrap();
        let x = AffineFn::coordinate(2, 0);
        let y = AffineFn::coordinate(2, 1);
        let exact = |fs: &[&AffineFn]| -> Rat {
            p.triangulate().iter().map(|s: &Simplex| s.integrate_product(fs)).sum()
        };
        let close = |a: &Real, e: Rat| (a - &Real::from_rat(&e, b)).abs() < Real::one(b).ldexp(-120);
        assert!(close(&m.mass, exact(&[])));
        assert!(close(&m.first[0], exact(&[&x])));
        assert!(close(&m.second[0][1], exact(&[&x, &y])));
        assert!(close(&m.second[1][1], exact(&[&y, &y])));
        let aff = AffineFn::new(RatVec::from_ints(&[1, -2]), rint(3));
        assert!(close(&ig.moment(&aff, &xi, b).unwrap(), exact(&[&aff])));
    }
}
