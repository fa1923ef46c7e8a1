use crate::degen::{enumerate_candidates, DegenError};
use crate::divpol::{fano_check, DivisorialPolytope, FanoCertificate, ProjPoint};
use crate::exactgeom::{AffineFn, Polytope};
use num_traits::Signed;

use crate::real::Real;

use super::expint::{ExpIntegrator, Moments};
use super::{pow10, working_bits, FutakiError};

const MAX_ITER: usize = 200;
const MAX_HALVINGS: usize = 60;

/// Soliton vector field: the minimiser of `xi -> log int e^<xi, x>`.
#[derive(Clone, Debug)]
pub struct SolitonField {
    pub xi: Vec<Real>,
    /// `max_a |int x_a e^<xi,x>| / int e^<xi,x>` at the returned point
    pub residual: Real,
    pub iterations: usize,
    pub digits: u32,
}

impl SolitonField {
    pub fn is_zero(&self) -> bool {
        self.xi.iter().all(|x| x.is_zero())
    }

    pub fn xi_f64(&self) -> Vec<f64> {
        self.xi.iter().map(|x| x.to_f64()).collect()
    }

    pub fn norm_f64(&self) -> f64 {
        self.xi_f64().iter().map(|x| x * x).sum::<f64>().sqrt()
    }
}

struct Eval {
    moments: Moments,
    grad: Vec<Real>,
    residual: Real,
}

fn evaluate(ig: &ExpIntegrator, xi: &[Real], bits: u32) -> Result<Eval, FutakiError> {
    let moments = ig.moments(xi, xi.len(), bits)?;
    let grad: Vec<Real> = moments.first.iter().map(|f| f / &moments.mass).collect();
    let residual = grad
        .iter()
        .map(|g| g.abs())
        .max()
        .unwrap_or_else(|| Real::zero(bits));
    Ok(Eval {
        moments,
        grad,
        residual,
    })
}

/// Gaussian elimination with partial pivoting.
fn solve(mut a: Vec<Vec<Real>>, mut b: Vec<Real>) -> Option<Vec<Real>> {
    let n = b.len();
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| a[i][c].abs().cmp(&a[j][c].abs()))?;
        if a[p][c].is_zero() {
            return None;
        }
        a.swap(p, c);
        b.swap(p, c);
        for i in c + 1..n {
            let f = &a[i][c] / &a[c][c];
            for j in c..n {
                let t = &f * &a[c][j];
                a[i][j] = &a[i][j] - &t;
            }
            let t = &f * &b[c];
            b[i] = &b[i] - &t;
        }
    }
    let mut x = b.clone();
    for i in (0..n).rev() {
        let mut s = b[i].clone();
        for j in i + 1..n {
            s = &s - &(&a[i][j] * &x[j]);
        }
        x[i] = &s / &a[i][i];
    }
    Some(x)
}

/// Minimise `log int_P e^<xi, x>` over `xi` acting on the first `k`
/// coordinates of the full dimensional polytope `p`, by damped Newton
/// iteration from zero.
pub fn solve_soliton_field_on(p: &Polytope, k: usize, digits: u32) -> Result<SolitonField, FutakiError> {
    let bits = working_bits(digits)?;
    let zero = Real::zero(bits);
    let bary = p.barycenter().map_err(|_| FutakiError::ZeroVolume)?;
    if bary.truncate(k).is_zero() {
        return Ok(SolitonField {
            xi: vec![zero.clone(); k],
            residual: zero,
            iterations: 0,
            digits,
        });
    }
    let ig = ExpIntegrator::new(p)?;
    let tol = pow10(12 - digits as i32, bits);
    let mut xi = vec![zero; k];
    let mut cur = evaluate(&ig, &xi, bits)?;
    for it in 0..MAX_ITER {
        if cur.residual <= tol {
            return Ok(SolitonField {
                xi,
                residual: cur.residual,
                iterations: it,
                digits,
            });
        }
        let m = &cur.moments;
        let hess: Vec<Vec<Real>> = (0..k)
            .map(|a| {
                (0..k)
                    .map(|b| &(&m.second[a][b] / &m.mass) - &(&cur.grad[a] * &cur.grad[b]))
                    .collect()
            })
            .collect();
        let rhs: Vec<Real> = cur.grad.iter().map(|g| -g).collect();
        let step = solve(hess, rhs).ok_or(FutakiError::NonConvergence {
            iterations: it,
            residual: cur.residual.to_f64(),
        })?;
        let mut t = Real::one(bits);
        let mut accepted = None;
        for _ in 0..MAX_HALVINGS {
            let trial: Vec<Real> = xi.iter().zip(&step).map(|(x, s)| x + &(&t * s)).collect();
            let ev = evaluate(&ig, &trial, bits)?;
            if ev.moments.mass < cur.moments.mass || ev.residual < cur.residual {
                accepted = Some((trial, ev));
                break;
            }
            t = t.ldexp(-1);
        }
        let Some((next, ev)) = accepted else {
            return Err(FutakiError::NonConvergence {
                iterations: it,
                residual: cur.residual.to_f64(),
            });
        };
        xi = next;
        cur = ev;
    }
    if cur.residual <= tol {
        return Ok(SolitonField {
            xi,
            residual: cur.residual,
            iterations: MAX_ITER,
            digits,
        });
    }
    Err(FutakiError::NonConvergence {
        iterations: MAX_ITER,
        residual: cur.residual.to_f64(),
    })
}

/// Soliton field of a Fano divisorial polytope, computed on `Delta^0` of
/// the generic candidate with `xi` acting on `M_R`.
pub fn solve_soliton_field(cert: &FanoCertificate, digits: u32) -> Result<SolitonField, FutakiError> {
    let cands = enumerate_candidates(cert)?;
    let g = cands
        .iter()
        .find(|c| c.q.is_generic())
        .expect("generic candidate");
    solve_soliton_field_on(&g.delta0, cert.psi().dim(), digits)
}

#[derive(Clone, Debug)]
pub struct SolitonVerdict {
    pub exists: bool,
    /// Some weighted moment is within tolerance of zero.
    pub indeterminate: bool,
    pub field: SolitonField,
    /// `W(Q) = int_{Delta_Q^0} a e^<u, xi>` for each normal candidate.
    pub weighted_moments: Vec<(ProjPoint, Real)>,
    /// Smallest `W(Q)`, if there are normal candidates.
    pub margin: Option<Real>,
    pub warnings: Vec<String>,
}

/// A soliton exists iff `W(Q) > 0` for every normal candidate.
pub fn soliton_verdict(cert: &FanoCertificate, digits: u32) -> Result<SolitonVerdict, FutakiError> {
    let bits = working_bits(digits)?;
    let d = cert.psi().dim();
    let cands = enumerate_candidates(cert)?;
    let g = cands
        .iter()
        .find(|c| c.q.is_generic())
        .expect("generic candidate");
    let field = solve_soliton_field_on(&g.delta0, d, digits)?;
    let tol = pow10(6 - digits as i32, bits);
    let last = AffineFn::coordinate(d + 1, d);

    let mut weighted = Vec::new();
    let mut warnings = Vec::new();
    let mut exists = true;
    let mut indeterminate = false;
    for c in cands.iter().filter(|c| c.normal) {
        if field.is_zero() {
            // exact: W(Q) = vol(Delta_Q^0) * (last coordinate of b_Q)
            let exact = c.delta0.volume() * &c.barycenter()[d];
            if !exact.is_positive() {
                exists = false;
            }
            weighted.push((c.q.clone(), Real::from_rat(&exact, bits)));
            continue;
        }
        let ig = ExpIntegrator::new(&c.delta0)?;
        let w = ig.moment(&last, &field.xi, bits)?;
        if w.abs() <= tol {
            indeterminate = true;
            exists = false;
            warnings.push(format!(
                "weighted moment at {} is within {} of zero",
                c.q,
                tol.to_sci(3)
            ));
        } else if w.is_negative() {
            exists = false;
        }
        weighted.push((c.q.clone(), w));
    }
    if weighted.is_empty() {
        warnings.push("no normal special fibre; existence holds vacuously".to_string());
    }
    let margin = weighted.iter().map(|(_, w)| w.clone()).min();
    Ok(SolitonVerdict {
        exists,
        indeterminate,
        field,
        weighted_moments: weighted,
        margin,
        warnings,
    })
}

pub fn soliton_verdict_for(psi: &DivisorialPolytope, digits: u32) -> Result<SolitonVerdict, FutakiError> {
    let cert = fano_check(psi).map_err(DegenError::NotFano)?;
    soliton_verdict(&cert, digits)
}
