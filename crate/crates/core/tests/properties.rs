use num_bigint::BigInt;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use tfk_core::degen::{enumerate_candidates, is_normal_fiber, is_normal_fiber_fano, special_fiber_polytope};
use tfk_core::divpol::{fano_check, DivisorialPolytope, PLConcave, ProjPoint};
use tfk_core::exactgeom::{rat, AffineFn, Halfspace, Polytope, Rat, RatVec};
use tfk_core::futaki::kstability_verdict;
use tfk_core::samples::{random_mobius, random_symmetric_fano, random_unimodular, random_valid, relabel};
use tfk_core::symmetry::{find_automorphism_pairs, mobius_from_pairs, soliton_criteria};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn small_point(d: usize) -> impl Strategy<Value = RatVec> {
    prop::collection::vec((-6i64..=6, 1i64..=3), d).prop_map(|v| RatVec(v.into_iter().map(|(p, q)| rat(p, q)).collect()))
}

/// `int_{Delta_Q} f` equals `int_Box f deg Psi` for `f` in `{1, u_i, u_i u_j}`.
fn projection_identity(psi: &DivisorialPolytope) {
    let d = psi.dim();
    let deg = psi.degree_function();
    let mut fs: Vec<Vec<usize>> = vec![vec![]];
    for i in 0..d {
        fs.push(vec![i]);
        for j in i..d {
            fs.push(vec![i, j]);
        }
    }
    let mut qs = psi.support();
    qs.push(ProjPoint::Generic);
    let mut p1 = None;
    for q in &qs {
        let delta = special_fiber_polytope(psi, q).unwrap();
        for f in &fs {
            let lifted: Vec<AffineFn> = f.iter().map(|&i| AffineFn::coordinate(d + 1, i)).collect();
            let lhs = delta.integrate_product(&lifted.iter().collect::<Vec<_>>());
            let mut rhs = Rat::from_integer(0.into());
            for (cell, piece) in deg.linearity_cells() {
                let mut g: Vec<AffineFn> = f.iter().map(|&i| AffineFn::coordinate(d, i)).collect();
                g.push(piece);
                rhs += cell.integrate_product(&g.iter().collect::<Vec<_>>());
            }
            assert_eq!(lhs, rhs, "Q = {q}, f = {f:?}");
        }
        let b = delta.barycenter().unwrap().truncate(d);
        match &p1 {
            None => p1 = Some(b),
            Some(prev) => assert_eq!(*prev, b),
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn hull_round_trip(pts in prop::collection::vec(small_point(2), 3..8)) {
        if let Ok(p) = Polytope::hull(&pts) {
            let q = Polytope::from_halfspaces(2, p.facets(), p.equations()).unwrap();
            prop_assert_eq!(&p, &q);
            for v in &pts {
                prop_assert!(p.contains(v));
            }
        }
    }

    #[test]
    fn volume_is_additive(pts in prop::collection::vec(small_point(2), 4..8), n in small_point(2), c in -3i64..=3) {
        let Ok(p) = Polytope::hull(&pts) else { return Ok(()) };
        prop_assume!(p.is_full_dimensional() && !n.is_zero());
        let h = Halfspace::new(n.clone(), Rat::from_integer(c.into()));
        let parts: Rat = [h.clone(), Halfspace::new(-&n, -Rat::from_integer(c.into()))]
            .iter()
            .filter_map(|h| p.intersect(std::slice::from_ref(h)).ok())
            .map(|x| x.ambient_volume())
            .sum();
        prop_assert_eq!(parts, p.volume());
    }

    #[test]
    fn canonicalize_is_idempotent(seed in any::<u64>()) {
        let psi = random_valid(&mut rng(seed), 2);
        for (_, f) in psi.support_functions() {
            let c = f.canonicalize();
            let cc = c.canonicalize();
            prop_assert_eq!(cc.pieces(), c.pieces());
            for u in f.cell_vertices() {
                prop_assert_eq!(c.evaluate(&u).unwrap(), f.evaluate(&u).unwrap());
            }
            let back = PLConcave::new(f.domain().clone(), c.pieces().to_vec()).unwrap();
            let bc = back.canonicalize();
            prop_assert_eq!(bc.pieces(), c.pieces());
        }
    }

    #[test]
    fn projection_identity_on_random_inputs(seed in any::<u64>(), d in 1usize..=2) {
        projection_identity(&random_valid(&mut rng(seed), d));
    }

    #[test]
    fn fano_samples(seed in any::<u64>(), d in 1usize..=2) {
        let psi = random_symmetric_fano(&mut rng(seed), d);
        let cert = fano_check(&psi).unwrap();
        let sum: BigInt = cert.kdiv().values().sum();
        prop_assert_eq!(sum, BigInt::from(-2));
        for q in psi.support() {
            prop_assert_eq!(is_normal_fiber(&psi, &q).unwrap(), is_normal_fiber_fano(&cert, &q));
        }
        let v = kstability_verdict(&cert).unwrap();
        prop_assert!(v.futaki_character.is_zero());
    }

    #[test]
    fn relabelling_invariance(seed in any::<u64>(), d in 1usize..=2) {
        let mut r = rng(seed);
        let psi = random_symmetric_fano(&mut r, d);
        let (u, u_inv) = random_unimodular(&mut r, d, 6);
        let m = random_mobius(&mut r);
        let moved = relabel(&psi, &u, &u_inv, &m);
        let a = kstability_verdict(&fano_check(&psi).unwrap()).unwrap();
        let b = kstability_verdict(&fano_check(&moved).unwrap()).unwrap();
        prop_assert_eq!(a.status, b.status);
        for (q, bq, normal) in &a.barycenters {
            let image = m.apply(q);
            let (_, bq2, normal2) = b.barycenters.iter().find(|(p, _, _)| *p == image).unwrap();
            prop_assert_eq!(normal, normal2);
            prop_assert_eq!(&bq[d], &bq2[d]);
        }
        let ca = soliton_criteria(&fano_check(&psi).unwrap());
        let cb = soliton_criteria(&fano_check(&moved).unwrap());
        prop_assert_eq!((ca.c1, ca.c2, ca.c3), (cb.c1, cb.c2, cb.c3));
        prop_assert_eq!(ca.pairs.len(), cb.pairs.len());
    }

    #[test]
    fn mobius_through_three_points(seed in any::<u64>()) {
        let mut r = rng(seed);
        let m = random_mobius(&mut r);
        let src = [ProjPoint::zero(), ProjPoint::one(), ProjPoint::Infinity];
        let pairs: Vec<_> = src.iter().map(|p| (p.clone(), m.apply(p))).collect();
        prop_assert_eq!(mobius_from_pairs(&pairs).unwrap(), Some(m.clone()));
        prop_assert!(m.compose(&m.inverse()).is_identity());
    }

    #[test]
    fn automorphism_pairs_form_a_group(seed in any::<u64>()) {
        let psi = random_symmetric_fano(&mut rng(seed), 1);
        let pairs = find_automorphism_pairs(&fano_check(&psi).unwrap());
        prop_assert!(pairs[0].is_identity());
        let keys: std::collections::BTreeSet<_> = pairs.iter().map(|p| p.key()).collect();
        for p in &pairs {
            for q in &pairs {
                prop_assert!(keys.contains(&p.then_key(q)));
            }
        }
    }
}

#[test]
fn projection_identity_on_catalog() {
    for (_, make) in tfk_core::catalog::all() {
        projection_identity(&make());
    }
}

#[test]
fn candidates_share_first_moment() {
    for (_, make) in tfk_core::catalog::all() {
        let cert = fano_check(&make()).unwrap();
        let cands = enumerate_candidates(&cert).unwrap();
        let d = cert.psi().dim();
        let g = cands.iter().find(|c| c.q.is_generic()).unwrap().barycenter().truncate(d);
        for c in &cands {
            assert_eq!(c.barycenter().truncate(d), g);
        }
    }
}
