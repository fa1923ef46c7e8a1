//! Worked examples used by tests and the command line tool.

use crate::divpol::{DivisorialPolytope, ProjPoint};
use crate::exactgeom::{rat, rint, AffineFn, Polytope, Rat, RatVec};

fn piece(slope: &[Rat], c: Rat) -> AffineFn {
    AffineFn::new(RatVec(slope.to_vec()), c)
}

fn ipiece(slope: &[i64], c: i64) -> AffineFn {
    AffineFn::new(RatVec::from_ints(slope), rint(c))
}

fn polygon(vs: &[[i64; 2]]) -> Polytope {
    let pts: Vec<RatVec> = vs.iter().map(|v| RatVec::from_ints(v)).collect();
    Polytope::hull(&pts).expect("nonempty")
}

/// Degree four del Pezzo surface with an `A_1` singularity, one dimensional torus.
pub fn dp4_3a1() -> DivisorialPolytope {
    DivisorialPolytope::new(
        Polytope::cuboid(&[-1], &[1]),
        [
            (ProjPoint::zero(), vec![ipiece(&[0], 1), ipiece(&[-1], 1)]),
            (ProjPoint::one(), vec![ipiece(&[0], 0), ipiece(&[1], 0)]),
            (ProjPoint::Infinity, vec![ipiece(&[1], 1), ipiece(&[-1], 1)]),
        ],
        None,
    )
    .expect("well formed")
}

/// Threefold 3.21 with a two dimensional torus.
pub fn mm_3_21() -> DivisorialPolytope {
    let boxp = polygon(&[[-2, 1], [-3, 3], [-1, 3], [3, -1], [3, -3], [1, -2]]);
    let h = rat(-1, 2);
    DivisorialPolytope::new(
        boxp,
        [
            (
                ProjPoint::zero(),
                vec![ipiece(&[0, 0], 0), piece(&[h.clone(), rint(0)], h.clone())],
            ),
            (ProjPoint::one(), vec![ipiece(&[0, 0], 2), ipiece(&[1, 1], 2)]),
            (
                ProjPoint::Infinity,
                vec![ipiece(&[0, 0], 0), piece(&[rint(0), h.clone()], h)],
            ),
        ],
        None,
    )
    .expect("well formed")
}

/// Two tent functions on `[-1, 1]`, exchanged by `u -> -u`.
pub fn synthetic_two_point() -> DivisorialPolytope {
    DivisorialPolytope::new(
        Polytope::cuboid(&[-1], &[1]),
        [
            (ProjPoint::zero(), vec![ipiece(&[1], 1), ipiece(&[-1], 1)]),
            (ProjPoint::Infinity, vec![ipiece(&[1], 1), ipiece(&[-1], 1)]),
        ],
        None,
    )
    .expect("well formed")
}

/// Three points whose slopes all have denominator two.
pub fn synthetic_three_half() -> DivisorialPolytope {
    let half = rat(1, 2);
    DivisorialPolytope::new(
        Polytope::cuboid(&[-1], &[1]),
        [
            (ProjPoint::zero(), vec![piece(&[half.clone()], half.clone())]),
            (ProjPoint::one(), vec![piece(&[-half.clone()], half.clone())]),
            (ProjPoint::Infinity, vec![piece(&[half.clone()], -half)]),
        ],
        None,
    )
    .expect("well formed")
}

/// Catalogue names with their constructors.
pub fn all() -> Vec<(&'static str, fn() -> DivisorialPolytope)> {
    vec![
        ("dp4-3A1", dp4_3a1 as fn() -> DivisorialPolytope),
        ("mm-3.21", mm_3_21),
        ("synthetic-two-point", synthetic_two_point),
        ("synthetic-three-half", synthetic_three_half),
    ]
}

pub fn by_name(name: &str) -> Option<DivisorialPolytope> {
    all().into_iter().find(|(n, _)| *n == name).map(|(_, f)| f())
}
