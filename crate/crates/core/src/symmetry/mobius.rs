use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::divpol::ProjPoint;
use crate::exactgeom::rat::to_primitive_integer;
use crate::exactgeom::{fmt_rat, Rat};

use super::SymmetryError;

/// `x -> (a x + b) / (c x + d)`, stored with primitive integer entries and
/// the first nonzero entry positive.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mobius {
    pub a: Rat,
    pub b: Rat,
    pub c: Rat,
    pub d: Rat,
}

impl Mobius {
    pub fn new(a: Rat, b: Rat, c: Rat, d: Rat) -> Option<Mobius> {
        if (&a * &d - &b * &c).is_zero() {
            return None;
        }
        let (ints, _) = to_primitive_integer(&[a, b, c, d])?;
        let sign = if ints.iter().find(|x| !x.is_zero()).unwrap().is_negative() {
            -BigInt::one()
        } else {
            BigInt::one()
        };
        let e: Vec<Rat> = ints.into_iter().map(|x| Rat::from_integer(x * &sign)).collect();
        Some(Mobius {
            a: e[0].clone(),
            b: e[1].clone(),
            c: e[2].clone(),
            d: e[3].clone(),
        })
    }

    pub fn identity() -> Mobius {
        Mobius::new(Rat::one(), Rat::zero(), Rat::zero(), Rat::one()).unwrap()
    }

    pub fn is_identity(&self) -> bool {
        *self == Mobius::identity()
    }

    pub fn det(&self) -> Rat {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn apply(&self, p: &ProjPoint) -> ProjPoint {
        match p.homogeneous() {
            None => ProjPoint::Generic,
            Some((x, y)) => {
                let nx = &self.a * &x + &self.b * &y;
                let ny = &self.c * &x + &self.d * &y;
                ProjPoint::from_homogeneous(&nx, &ny).expect("invertible")
            }
        }
    }

    /// `self o other`.
    pub fn compose(&self, other: &Mobius) -> Mobius {
        Mobius::new(
            &self.a * &other.a + &self.b * &other.c,
            &self.a * &other.b + &self.b * &other.d,
            &self.c * &other.a + &self.d * &other.c,
            &self.c * &other.b + &self.d * &other.d,
        )
        .expect("product of invertible maps")
    }

    pub fn inverse(&self) -> Mobius {
        Mobius::new(
            self.d.clone(),
            -self.b.clone(),
            -self.c.clone(),
            self.a.clone(),
        )
        .expect("invertible")
    }

    /// Order in `PGL_2(Q)`, if finite. Rational elements of finite order
    /// have order 1, 2, 3, 4 or 6.
    pub fn order(&self) -> Option<u32> {
        let mut g = self.clone();
        for k in 1..=6 {
            if g.is_identity() {
                return Some(k);
            }
            g = g.compose(self);
        }
        None
    }

    /// Binary form `c x^2 + (d - a) x y - b y^2` whose zeros are the fixed points.
    pub fn fixed_form(&self) -> [Rat; 3] {
        [self.c.clone(), &self.d - &self.a, -self.b.clone()]
    }

    /// Discriminant of [`Mobius::fixed_form`]: a nonzero square means two
    /// rational fixed points, zero one, a nonsquare a conjugate pair.
    pub fn discriminant(&self) -> Rat {
        let [p, q, r] = self.fixed_form();
        &q * &q - Rat::from_integer(4.into()) * p * r
    }

    pub fn fixed_points(&self) -> FixedSet {
        if self.is_identity() {
            FixedSet::All
        } else {
            FixedSet::Conic(self.fixed_form())
        }
    }
}

impl fmt::Display for Mobius {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "x -> ({}x + {}) / ({}x + {})",
            fmt_rat(&self.a),
            fmt_rat(&self.b),
            fmt_rat(&self.c),
            fmt_rat(&self.d)
        )
    }
}

/// Exact fixed point set on the complex projective line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FixedSet {
    All,
    /// zeros of a nonzero binary quadratic form, possibly irrational
    Conic([Rat; 3]),
    /// finitely many rational points
    Points(Vec<ProjPoint>),
}

fn form_eval(q: &[Rat; 3], p: &ProjPoint) -> Rat {
    let (x, y) = p.homogeneous().expect("not generic");
    &q[0] * &x * &x + &q[1] * &x * &y + &q[2] * &y * &y
}

fn rat_sqrt(r: &Rat) -> Option<Rat> {
    if r.is_negative() {
        return None;
    }
    let n = num_integer::Roots::sqrt(r.numer());
    let d = num_integer::Roots::sqrt(r.denom());
    (&n * &n == *r.numer() && &d * &d == *r.denom()).then(|| Rat::new(n, d))
}

/// Rational zeros of `p x^2 + q x y + r y^2`.
fn rational_roots(f: &[Rat; 3]) -> Vec<ProjPoint> {
    let [p, q, r] = f;
    let mut out = Vec::new();
    if p.is_zero() {
        out.push(ProjPoint::Infinity);
        if !q.is_zero() {
            out.push(ProjPoint::Finite(-r / q));
        }
    } else {
        let disc = q * q - Rat::from_integer(4.into()) * p * r;
        if let Some(s) = rat_sqrt(&disc) {
            let two_p = p * Rat::from_integer(2.into());
            out.push(ProjPoint::Finite((-q + &s) / &two_p));
            out.push(ProjPoint::Finite((-q - &s) / &two_p));
        }
    }
    out.sort();
    out.dedup();
    out
}

fn proportional(f: &[Rat; 3], g: &[Rat; 3]) -> bool {
    (0..3).all(|i| (0..3).all(|j| &f[i] * &g[j] == &f[j] * &g[i]))
}

impl FixedSet {
    pub fn intersect(&self, other: &FixedSet) -> FixedSet {
        match (self, other) {
            (FixedSet::All, x) | (x, FixedSet::All) => x.clone(),
            (FixedSet::Conic(f), FixedSet::Conic(g)) => {
                if proportional(f, g) {
                    FixedSet::Conic(f.clone())
                } else {
                    FixedSet::Points(rational_roots(f).into_iter().filter(|p| form_eval(g, p).is_zero()).collect())
                }
            }
            (FixedSet::Points(ps), FixedSet::Conic(g)) | (FixedSet::Conic(g), FixedSet::Points(ps)) => {
                FixedSet::Points(ps.iter().filter(|p| form_eval(g, p).is_zero()).cloned().collect())
            }
            (FixedSet::Points(a), FixedSet::Points(b)) => {
                FixedSet::Points(a.iter().filter(|p| b.contains(p)).cloned().collect())
            }
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, FixedSet::Points(p) if p.is_empty())
    }

    /// Whether some point of the set lies outside `s`.
    pub fn escapes(&self, s: &[ProjPoint]) -> bool {
        match self {
            FixedSet::All => true,
            FixedSet::Points(ps) => ps.iter().any(|p| !s.contains(p)),
            FixedSet::Conic(f) => {
                let roots = rational_roots(f);
                let [p, q, r] = f;
                let double = (q * q - Rat::from_integer(4.into()) * p * r).is_zero() || (p.is_zero() && q.is_zero());
                let complete = double || roots.len() == 2;
                !complete || roots.iter().any(|x| !s.contains(x))
            }
        }
    }
}

impl fmt::Display for FixedSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FixedSet::All => write!(f, "all points"),
            FixedSet::Points(ps) => {
                let s: Vec<String> = ps.iter().map(|p| p.to_string()).collect();
                write!(f, "{{{}}}", s.join(", "))
            }
            FixedSet::Conic(q) => {
                let roots = rational_roots(q);
                if roots.is_empty() {
                    write!(
                        f,
                        "zeros of {}x^2 + {}xy + {}y^2",
                        fmt_rat(&q[0]),
                        fmt_rat(&q[1]),
                        fmt_rat(&q[2])
                    )
                } else {
                    FixedSet::Points(roots).fmt(f)
                }
            }
        }
    }
}

fn auxiliary_points() -> impl Iterator<Item = ProjPoint> {
    let mut base = vec![
        ProjPoint::zero(),
        ProjPoint::one(),
        ProjPoint::Infinity,
        ProjPoint::finite(-1),
        ProjPoint::finite(2),
        ProjPoint::Finite(Rat::new(1.into(), 2.into())),
    ];
    base.extend((3..).take(64).flat_map(|n| [ProjPoint::finite(n), ProjPoint::finite(-n)]));
    base.into_iter()
}

/// Matrix sending `e1, e2, e1 + e2` to the three given points.
fn frame(p: &[(Rat, Rat)]) -> Option<[Rat; 4]> {
    let (x1, y1) = &p[0];
    let (x2, y2) = &p[1];
    let (x3, y3) = &p[2];
    let det = x1 * y2 - x2 * y1;
    if det.is_zero() {
        return None;
    }
    let l1 = (x3 * y2 - x2 * y3) / &det;
    let l2 = (x1 * y3 - x3 * y1) / &det;
    if l1.is_zero() || l2.is_zero() {
        return None;
    }
    Some([&l1 * x1, &l2 * x2, &l1 * y1, &l2 * y2])
}

/// Möbius map through the given pairs. With fewer than three pairs the map
/// is completed by fixing auxiliary points `0, 1, inf, -1, 2, 1/2, ...`
/// that are neither sources nor targets. Returns `None` if the pairs are
/// not realisable.
pub fn mobius_from_pairs(pairs: &[(ProjPoint, ProjPoint)]) -> Result<Option<Mobius>, SymmetryError> {
    for (i, (p, _)) in pairs.iter().enumerate() {
        if pairs[..i].iter().any(|(q, _)| q == p) {
            return Err(SymmetryError::DuplicateSourcePoints(p.clone()));
        }
    }
    if pairs.iter().any(|(p, q)| p.is_generic() || q.is_generic()) {
        return Ok(None);
    }
    for (i, (_, q)) in pairs.iter().enumerate() {
        if pairs[..i].iter().any(|(_, r)| r == q) {
            return Ok(None);
        }
    }
    let mut full: Vec<(ProjPoint, ProjPoint)> = pairs.to_vec();
    if full.len() < 3 {
        for aux in auxiliary_points() {
            if full.len() >= 3 {
                break;
            }
            if full.iter().all(|(p, q)| *p != aux && *q != aux) {
                full.push((aux.clone(), aux));
            }
        }
    }
    let src: Vec<(Rat, Rat)> = full[..3].iter().map(|(p, _)| p.homogeneous().unwrap()).collect();
    let dst: Vec<(Rat, Rat)> = full[..3].iter().map(|(_, q)| q.homogeneous().unwrap()).collect();
    let (Some(s), Some(t)) = (frame(&src), frame(&dst)) else {
        return Ok(None);
    };
    // t * s^{-1}
    let s_inv = Mobius::new(s[0].clone(), s[1].clone(), s[2].clone(), s[3].clone())
        .expect("frame is invertible")
        .inverse();
    let t = Mobius::new(t[0].clone(), t[1].clone(), t[2].clone(), t[3].clone()).expect("frame is invertible");
    let m = t.compose(&s_inv);
    Ok(full.iter().all(|(p, q)| m.apply(p) == *q).then_some(m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactgeom::{rat, rint};

    fn pairs(v: &[(ProjPoint, ProjPoint)]) -> Option<Mobius> {
        mobius_from_pairs(v).unwrap()
    }

    #[test]
    fn inversion_from_pairs() {
        let m = pairs(&[
            (ProjPoint::zero(), ProjPoint::Infinity),
            (ProjPoint::Infinity, ProjPoint::zero()),
            (ProjPoint::one(), ProjPoint::one()),
        ])
        .unwrap();
        assert_eq!(m, Mobius::new(rint(0), rint(1), rint(1), rint(0)).unwrap());
        assert_eq!(m.order(), Some(2));
    }

    #[test]
    fn identity_and_reflection() {
        let id = pairs(&[
            (ProjPoint::zero(), ProjPoint::zero()),
            (ProjPoint::one(), ProjPoint::one()),
            (ProjPoint::Infinity, ProjPoint::Infinity),
        ])
        .unwrap();
        assert!(id.is_identity());
        let r = pairs(&[
            (ProjPoint::zero(), ProjPoint::one()),
            (ProjPoint::one(), ProjPoint::zero()),
            (ProjPoint::Infinity, ProjPoint::Infinity),
        ])
        .unwrap();
        // 1 - x, solved by hand from a*0+b = c*0+d, a+b = 0, c = 0
        assert_eq!(r, Mobius::new(rint(-1), rint(1), rint(0), rint(1)).unwrap());
        assert_eq!(r.apply(&ProjPoint::Finite(rat(1, 3))), ProjPoint::Finite(rat(2, 3)));
    }

    #[test]
    fn cross_ratio_mismatch() {
        let r = pairs(&[
            (ProjPoint::zero(), ProjPoint::zero()),
            (ProjPoint::one(), ProjPoint::one()),
            (ProjPoint::Infinity, ProjPoint::Infinity),
            (ProjPoint::finite(2), ProjPoint::finite(3)),
        ]);
        assert!(r.is_none());
        assert_eq!(
            mobius_from_pairs(&[(ProjPoint::zero(), ProjPoint::one()), (ProjPoint::zero(), ProjPoint::Infinity)]),
            Err(SymmetryError::DuplicateSourcePoints(ProjPoint::zero()))
        );
    }

    #[test]
    fn completion_swaps() {
        let m = pairs(&[(ProjPoint::zero(), ProjPoint::Infinity), (ProjPoint::Infinity, ProjPoint::zero())]).unwrap();
        assert_eq!(m.apply(&ProjPoint::one()), ProjPoint::one());
        assert_eq!(m.order(), Some(2));
    }

    #[test]
    fn fixed_points() {
        let r = Mobius::new(rint(-1), rint(1), rint(0), rint(1)).unwrap();
        let fs = r.fixed_points();
        assert_eq!(fs.to_string(), "{1/2, inf}");
        // x -> -1/(x+1) has order 3 and fixes the primitive cube roots of -1
        let c = Mobius::new(rint(0), rint(-1), rint(1), rint(1)).unwrap();
        assert_eq!(c.order(), Some(3));
        assert!(c.discriminant().is_negative());
        assert!(c.fixed_points().intersect(&fs).is_empty());
        assert!(c.fixed_points().escapes(&[ProjPoint::zero()]));
        assert!(!r.fixed_points().escapes(&[ProjPoint::Finite(rat(1, 2)), ProjPoint::Infinity]));
        let d = c.compose(&c);
        assert_eq!(d.fixed_points().intersect(&c.fixed_points()), FixedSet::Conic(c.fixed_form()));
    }
}
