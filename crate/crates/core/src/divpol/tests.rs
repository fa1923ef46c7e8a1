use super::*;
use crate::catalog;
use crate::exactgeom::{rat, rint};

fn a_map(cert: &FanoCertificate) -> Vec<(String, i64)> {
    cert.kdiv()
        .iter()
        .map(|(p, a)| (p.to_string(), i64::try_from(a).unwrap()))
        .collect()
}

#[test]
fn del_pezzo_is_fano() {
    let psi = catalog::dp4_3a1();
    assert!(validate(&psi).passed());
    let cert = fano_check(&psi).unwrap();
    assert_eq!(
        a_map(&cert),
        vec![("0".into(), -1), ("1".into(), 0), ("inf".into(), -1)]
    );
    let deg = psi.degree_function();
    for (u, want) in [(-1, 0), (0, 2), (1, 0)] {
        assert_eq!(deg.evaluate(&RatVec::from_ints(&[u])).unwrap(), rint(want));
    }
    assert_eq!(deg.evaluate(&RatVec(vec![rat(1, 2)])).unwrap(), rint(1));
}

#[test]
fn threefold_is_fano() {
    let psi = catalog::mm_3_21();
    let rep = validate(&psi);
    assert!(rep.passed(), "{:?}", rep.failures);
    let cert = fano_check(&psi).unwrap();
    assert_eq!(
        a_map(&cert),
        vec![("0".into(), 0), ("1".into(), -2), ("inf".into(), 0)]
    );
    assert_eq!(mu_of_point(&psi, &ProjPoint::zero()), BigInt::from(2));
    assert_eq!(mu_of_point(&psi, &ProjPoint::Infinity), BigInt::from(2));
    assert_eq!(mu_of_point(&psi, &ProjPoint::one()), BigInt::from(1));
    assert_eq!(mu_of_point(&psi, &ProjPoint::finite(5)), BigInt::from(1));
}

#[test]
fn synthetic_examples_are_fano() {
    for psi in [catalog::synthetic_two_point(), catalog::synthetic_three_half()] {
        let cert = fano_check(&psi).unwrap();
        assert_eq!(cert.kdiv().values().sum::<BigInt>(), BigInt::from(-2));
    }
}

#[test]
fn zero_degree_is_rejected() {
    // Psi_0 = 0 everywhere: degree vanishes identically
    let psi = DivisorialPolytope::new(
        Polytope::cuboid(&[-1], &[1]),
        [(ProjPoint::zero(), vec![AffineFn::constant(1, rint(0))])],
        None,
    )
    .unwrap();
    let rep = validate(&psi);
    assert!(rep.failures.contains(&ValidationFailure::DegreeIdenticallyZero));
}

#[test]
fn negative_degree_and_fractional_graph() {
    let psi = DivisorialPolytope::new(
        Polytope::cuboid(&[-1], &[1]),
        [(
            ProjPoint::zero(),
            vec![AffineFn::new(RatVec(vec![rat(1, 2)]), rint(0))],
        )],
        None,
    )
    .unwrap();
    let rep = validate(&psi);
    assert!(!rep.degree_ok);
    assert!(!rep.graphs_ok);
}

#[test]
fn box_must_be_lattice() {
    let b = Polytope::hull(&[RatVec(vec![rat(-1, 2)]), RatVec(vec![rint(1)])]).unwrap();
    let psi = DivisorialPolytope::new(b, [(ProjPoint::zero(), vec![AffineFn::constant(1, rint(1))])], None).unwrap();
    assert!(!validate(&psi).box_ok);
}

#[test]
fn fano_failures() {
    // sum of canonical coefficients is -1
    let psi = DivisorialPolytope::new(
        Polytope::cuboid(&[-1], &[1]),
        [(
            ProjPoint::zero(),
            vec![
                AffineFn::new(RatVec::from_ints(&[1]), rint(1)),
                AffineFn::new(RatVec::from_ints(&[-1]), rint(1)),
            ],
        )],
        None,
    )
    .unwrap();
    assert!(matches!(fano_check(&psi), Err(FanoFailure::CanonicalSum { .. })));

    // box [0, 2] does not contain 0 in its interior
    let psi = DivisorialPolytope::new(
        Polytope::cuboid(&[0], &[2]),
        [(ProjPoint::zero(), vec![AffineFn::constant(1, rint(1))])],
        None,
    )
    .unwrap();
    assert_eq!(fano_check(&psi), Err(FanoFailure::OriginNotInterior));
}

#[test]
fn supplied_kdiv_is_cross_checked() {
    let psi = catalog::dp4_3a1();
    let mut k = BTreeMap::new();
    k.insert(ProjPoint::zero(), BigInt::from(-1));
    k.insert(ProjPoint::one(), BigInt::from(-1));
    assert!(matches!(
        fano_check(&psi.with_kdiv(Some(k))),
        Err(FanoFailure::KdivMismatch { .. })
    ));
}

#[test]
fn generic_key_rejected() {
    let r = DivisorialPolytope::new(
        Polytope::cuboid(&[-1], &[1]),
        [(ProjPoint::Generic, vec![AffineFn::constant(1, rint(1))])],
        None,
    );
    assert_eq!(r, Err(DivpolError::GenericKey));
}

#[test]
fn unimodular_transform_keeps_fano() {
    let psi = catalog::mm_3_21();
    let u = vec![vec![1, 1], vec![0, 1]];
    let ui = vec![vec![1, -1], vec![0, 1]];
    let t = psi
        .transform(&u, &ui, |p| match p {
            ProjPoint::Finite(r) if r == &rint(0) => ProjPoint::Infinity,
            ProjPoint::Infinity => ProjPoint::zero(),
            q => q.clone(),
        })
        .unwrap();
    let cert = fano_check(&t).unwrap();
    assert_eq!(cert.a(&ProjPoint::one()), BigInt::from(-2));
    let w = RatVec::from_ints(&[1, 0]);
    let tw = RatVec::from_ints(&[1, 0]);
    assert_eq!(
        psi.eval(&ProjPoint::one(), &w).unwrap(),
        t.eval(&ProjPoint::one(), &tw).unwrap()
    );
}
