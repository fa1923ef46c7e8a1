use super::*;
use crate::catalog;
use crate::exactgeom::rint;

fn cert(psi: &DivisorialPolytope) -> FanoCertificate {
    fano_check(psi).unwrap()
}

fn mob(a: i64, b: i64, c: i64, d: i64) -> Mobius {
    Mobius::new(rint(a), rint(b), rint(c), rint(d)).unwrap()
}

fn keys(pairs: &[AutomorphismPair]) -> BTreeSet<(Mobius, IntMatrix)> {
    pairs.iter().map(|p| p.key()).collect()
}

fn assert_group(pairs: &[AutomorphismPair]) {
    let ks = keys(pairs);
    for p in pairs {
        for q in pairs {
            assert!(ks.contains(&p.then_key(q)), "{} / {:?} then {} / {:?}", p.psi, p.fstar, q.psi, q.fstar);
        }
    }
}

#[test]
fn interval_automorphisms() {
    assert_eq!(box_lattice_automorphisms(&Polytope::cuboid(&[-1], &[1])), vec![vec![vec![1]], vec![vec![-1]]]);
    assert_eq!(box_lattice_automorphisms(&Polytope::cuboid(&[-1], &[2])), vec![vec![vec![1]]]);
}

#[test]
fn square_has_dihedral_group() {
    let g = box_lattice_automorphisms(&Polytope::cuboid(&[-1, -1], &[1, 1]));
    assert_eq!(g.len(), 8);
    assert_eq!(g[0], identity_matrix(2));
    // closed under products, each generated independently from signed permutations
    let set: BTreeSet<&IntMatrix> = g.iter().collect();
    for a in &g {
        for b in &g {
            assert!(set.contains(&matmul(a, b)));
        }
    }
    for perm in [[0usize, 1], [1, 0]] {
        for s in [[1i64, 1], [1, -1], [-1, 1], [-1, -1]] {
            let m: IntMatrix = (0..2).map(|i| (0..2).map(|j| if perm[i] == j { s[i] } else { 0 }).collect()).collect();
            assert!(set.contains(&m));
        }
    }
}

#[test]
fn threefold_box_has_swap() {
    let g = box_lattice_automorphisms(catalog::mm_3_21().box_polytope());
    assert!(g.contains(&vec![vec![0, 1], vec![1, 0]]));
}

#[test]
fn del_pezzo_pairs() {
    let c = cert(&catalog::dp4_3a1());
    let pairs = find_automorphism_pairs(&c);
    assert!(pairs[0].is_identity());
    let ks = keys(&pairs);
    let refl = mob(-1, 1, 0, 1);
    assert!(ks.contains(&(refl.clone(), vec![vec![-1]])));
    assert!(ks.contains(&(refl.clone(), vec![vec![1]])));
    assert!(ks.contains(&(Mobius::identity(), vec![vec![-1]])));
    assert_eq!(pairs.len(), 4);
    let p = pairs.iter().find(|p| p.key() == (refl.clone(), vec![vec![-1]])).unwrap();
    // Psi_0(-u) = Psi_1(u) + 1, so b_1 - b_0 = 1 with no linear shift
    let (v0, b0) = &p.shifts[&ProjPoint::zero()];
    let (v1, b1) = &p.shifts[&ProjPoint::one()];
    assert!(v0[0].is_zero() && v1[0].is_zero());
    assert_eq!(b1 - b0, BigInt::one());
    for p in &pairs {
        assert!(check_pair(c.psi(), p));
    }
    assert_group(&pairs);
}

#[test]
fn threefold_inversion_pair() {
    let c = cert(&catalog::mm_3_21());
    let pairs = find_automorphism_pairs(&c);
    let swap = vec![vec![0, 1], vec![1, 0]];
    let p = pairs
        .iter()
        .find(|p| p.key() == (mob(0, 1, 1, 0), swap.clone()))
        .expect("x -> 1/x with the swap");
    for (v, b) in p.shifts.values() {
        assert!(v.iter().all(|x| x.is_zero()) && b.is_zero());
    }
    assert!(p.off_support_b.is_zero());
    assert_group(&pairs);
}

#[test]
fn criteria_on_catalog() {
    let s = soliton_criteria(&cert(&catalog::mm_3_21()));
    assert!(!s.c1 && s.c2);
    assert_eq!(s.mu[&ProjPoint::zero()], BigInt::from(2));
    assert_eq!(s.mu[&ProjPoint::Infinity], BigInt::from(2));
    let (p, q, _) = s.c2_swap.clone().unwrap();
    assert_eq!(s.mu[&p], s.mu[&q]);
    assert_eq!(s.first(), Some(2));

    let s = soliton_criteria(&cert(&catalog::dp4_3a1()));
    assert!(!s.c1 && !s.c2 && !s.c3);
    assert!(s.mu.values().all(|m| m.is_one()));
    assert_eq!(s.common_fixed.to_string(), "{1/2, inf}");

    let s = soliton_criteria(&cert(&catalog::synthetic_three_half()));
    assert!(s.c1);
}

#[test]
fn diophantine_solutions() {
    let c = [BigInt::from(2), BigInt::from(3)];
    let t = diophantine(&c, &BigInt::from(7)).unwrap();
    assert_eq!(&t[0] * 2 + &t[1] * 3, BigInt::from(7));
    assert_eq!(diophantine(&c, &BigInt::zero()).unwrap(), vec![BigInt::zero(), BigInt::zero()]);
    assert!(diophantine(&[BigInt::from(2)], &BigInt::one()).is_none());
}
