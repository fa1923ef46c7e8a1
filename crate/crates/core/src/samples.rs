//! Random inputs for property tests and the acceptance suite.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::divpol::{fano_check, validate, DivisorialPolytope, ProjPoint};
use crate::exactgeom::{rat, rint, AffineFn, Polytope, Rat, RatVec};
use crate::symmetry::{identity_matrix, matmul, IntMatrix, Mobius};

const ATTEMPTS: usize = 20_000;

/// Random unimodular matrix and its inverse, as a product of `steps`
/// elementary operations and sign flips.
pub fn random_unimodular<R: Rng>(rng: &mut R, d: usize, steps: usize) -> (IntMatrix, IntMatrix) {
    let mut m = identity_matrix(d);
    let mut inv = identity_matrix(d);
    for _ in 0..steps {
        let mut e = identity_matrix(d);
        let mut e_inv = identity_matrix(d);
        if d == 1 || rng.gen_bool(0.3) {
            let i = rng.gen_range(0..d);
            e[i][i] = -1;
            e_inv[i][i] = -1;
        } else {
            let i = rng.gen_range(0..d);
            let mut j = rng.gen_range(0..d - 1);
            if j >= i {
                j += 1;
            }
            let k = if rng.gen_bool(0.5) { 1 } else { -1 };
            e[i][j] = k;
            e_inv[i][j] = -k;
        }
        m = matmul(&e, &m);
        inv = matmul(&inv, &e_inv);
    }
    (m, inv)
}

/// Random invertible `x -> (ax + b) / (cx + d)` with small integer entries.
pub fn random_mobius<R: Rng>(rng: &mut R) -> Mobius {
    loop {
        let e: Vec<Rat> = (0..4).map(|_| rint(rng.gen_range(-3..=3))).collect();
        if let Some(m) = Mobius::new(e[0].clone(), e[1].clone(), e[2].clone(), e[3].clone()) {
            return m;
        }
    }
}

/// Simplex with `d + 1` random vertices, coordinates `p/q` with `|p| <= 6`, `q <= 3`.
pub fn random_simplex<R: Rng>(rng: &mut R, d: usize) -> Polytope {
    loop {
        let pts: Vec<RatVec> = (0..=d)
            .map(|_| RatVec((0..d).map(|_| rat(rng.gen_range(-6..=6), rng.gen_range(1..=3))).collect()))
            .collect();
        if let Ok(p) = Polytope::hull(&pts) {
            if p.is_full_dimensional() && p.vertices().len() == d + 1 {
                return p;
            }
        }
    }
}

fn random_points<R: Rng>(rng: &mut R, n: usize) -> Vec<ProjPoint> {
    let mut pool = vec![
        ProjPoint::zero(),
        ProjPoint::one(),
        ProjPoint::Infinity,
        ProjPoint::finite(-1),
        ProjPoint::finite(2),
        ProjPoint::Finite(rat(1, 2)),
    ];
    pool.shuffle(rng);
    pool.truncate(n);
    pool
}

fn int_vec<R: Rng>(rng: &mut R, d: usize, r: i64) -> RatVec {
    RatVec((0..d).map(|_| rint(rng.gen_range(-r..=r))).collect())
}

/// Random divisorial polytope of dimension `d` passing [`validate`].
pub fn random_valid<R: Rng>(rng: &mut R, d: usize) -> DivisorialPolytope {
    for _ in 0..ATTEMPTS {
        let npts = rng.gen_range(d + 1..=d + 3);
        let pts: Vec<RatVec> = (0..npts).map(|_| int_vec(rng, d, 3)).collect();
        let Ok(boxp) = Polytope::hull(&pts) else {
            continue;
        };
        if !boxp.is_full_dimensional() {
            continue;
        }
        let k = rng.gen_range(1..=3);
        let entries: Vec<(ProjPoint, Vec<AffineFn>)> = random_points(rng, k)
            .into_iter()
            .map(|p| {
                let n = rng.gen_range(1..=3);
                let pieces = (0..n)
                    .map(|_| AffineFn::new(int_vec(rng, d, 2), rint(rng.gen_range(-2..=4))))
                    .collect();
                (p, pieces)
            })
            .collect();
        let Ok(psi) = DivisorialPolytope::new(boxp, entries, None) else {
            continue;
        };
        if psi.support().is_empty() || !validate(&psi).passed() {
            continue;
        }
        return psi;
    }
    panic!("no valid sample found in {ATTEMPTS} attempts");
}

/// Centrally symmetric reflexive boxes.
fn symmetric_boxes(d: usize) -> Vec<Vec<[i64; 2]>> {
    match d {
        1 => vec![],
        _ => vec![
            vec![[1, 1], [-1, 1], [-1, -1], [1, -1]],
            vec![[1, 0], [0, 1], [-1, 0], [0, -1]],
            vec![[1, 0], [0, 1], [-1, 1], [-1, 0], [0, -1], [1, -1]],
            vec![[1, 0], [1, 2], [-1, 0], [-1, -2]],
        ],
    }
}

/// Random Fano divisorial polytope with a reflexive, centrally symmetric
/// box and every `Psi_P` even, so the generic barycenter lies on the last
/// axis.
pub fn random_symmetric_fano<R: Rng>(rng: &mut R, d: usize) -> DivisorialPolytope {
    assert!(d == 1 || d == 2, "dimension 1 or 2");
    for _ in 0..ATTEMPTS {
        let boxp = if d == 1 {
            Polytope::cuboid(&[-1], &[1])
        } else {
            let shapes = symmetric_boxes(2);
            let shape = shapes.choose(rng).unwrap();
            let (u, _) = random_unimodular(rng, 2, 4);
            let pts: Vec<RatVec> = shape
                .iter()
                .map(|v| RatVec::from_ints(&[u[0][0] * v[0] + u[0][1] * v[1], u[1][0] * v[0] + u[1][1] * v[1]]))
                .collect();
            Polytope::hull(&pts).expect("nonempty")
        };
        // canonical coefficients summing to -2
        let k = rng.gen_range(2..=3);
        let mut a: Vec<i64> = vec![0; k];
        a[0] = -1;
        a[1] = -1;
        if k == 3 && rng.gen_bool(0.5) {
            a[rng.gen_range(0..2)] = -2;
            a[2] = 0;
        }
        let pts = random_points(rng, k);
        let mut entries = Vec::new();
        for (p, ap) in pts.into_iter().zip(&a) {
            let n = rng.gen_range(0..=2);
            let mut pieces = Vec::new();
            for _ in 0..n {
                let den = if rng.gen_bool(0.3) { 2 } else { 1 };
                let s = RatVec((0..d).map(|_| rat(rng.gen_range(-2..=2), den)).collect());
                let mu = crate::divpol::mu_of_slope(&s);
                let c = Rat::new(1.into(), mu) - rint(*ap) - rint(1);
                pieces.push(AffineFn::new(-&s, c.clone()));
                pieces.push(AffineFn::new(s, c));
            }
            if pieces.is_empty() {
                pieces.push(AffineFn::new(RatVec::zeros(d), rint(-ap)));
            }
            entries.push((p, pieces));
        }
        let Ok(psi) = DivisorialPolytope::new(boxp, entries, None) else {
            continue;
        };
        if fano_check(&psi).is_ok() {
            return psi;
        }
    }
    panic!("no symmetric Fano sample found in {ATTEMPTS} attempts");
}

/// Relabel `psi` by the unimodular `u` on `M` and the Möbius map `m` on the line.
pub fn relabel(psi: &DivisorialPolytope, u: &IntMatrix, u_inv: &IntMatrix, m: &Mobius) -> DivisorialPolytope {
    psi.transform(u, u_inv, |p| m.apply(p)).expect("relabelling keeps validity")
}
