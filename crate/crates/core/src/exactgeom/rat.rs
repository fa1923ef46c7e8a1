//! Rational scalars and vectors.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact rational number, always stored in lowest terms with positive denominator.
pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rint(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn is_integral(r: &Rat) -> bool {
    r.denom().is_one()
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a>(xs: impl IntoIterator<Item = &'a Rat>) -> BigInt {
    xs.into_iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

/// Scale a rational vector by a positive factor so it becomes a primitive
/// integer vector. Returns the integer vector and the factor used.
pub fn to_primitive_integer(xs: &[Rat]) -> Option<(Vec<BigInt>, Rat)> {
    let den = common_denominator(xs.iter());
    let ints: Vec<BigInt> = xs.iter().map(|x| (x * &den).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return None;
    }
    let prim = ints.into_iter().map(|x| x / &g).collect();
    Some((prim, Rat::new(den, g)))
}

/// Divide an integer vector by the gcd of its entries.
pub fn primitive_int(v: &mut [BigInt]) {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in v.iter_mut() {
            *x = &*x / &g;
        }
    }
}

/// Render a rational as `p` or `p/q`.
pub fn fmt_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Vector of rationals with lexicographic ordering.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct RatVec(pub Vec<Rat>);

impl RatVec {
    pub fn zeros(n: usize) -> Self {
        RatVec(vec![Rat::zero(); n])
    }

    pub fn from_ints(xs: &[i64]) -> Self {
        RatVec(xs.iter().map(|&x| rint(x)).collect())
    }

    pub fn from_bigints(xs: &[BigInt]) -> Self {
        RatVec(xs.iter().map(|x| Rat::from_integer(x.clone())).collect())
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = Self::zeros(n);
        v.0[i] = Rat::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Rat> {
        self.0.iter()
    }

    pub fn dot(&self, other: &RatVec) -> Rat {
        debug_assert_eq!(self.dim(), other.dim());
        self.0
            .iter()
            .zip(&other.0)
            .fold(Rat::zero(), |acc, (a, b)| acc + a * b)
    }

    pub fn scale(&self, s: &Rat) -> RatVec {
        RatVec(self.0.iter().map(|x| x * s).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|x| x.is_zero())
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(is_integral)
    }

    /// Append one coordinate.
    pub fn extend_with(&self, x: Rat) -> RatVec {
        let mut v = self.0.clone();
        v.push(x);
        RatVec(v)
    }

    pub fn truncate(&self, n: usize) -> RatVec {
        RatVec(self.0[..n].to_vec())
    }

    pub fn to_f64(&self) -> Vec<f64> {
        use num_traits::ToPrimitive;
        self.0.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect()
    }

    pub fn abs_max(&self) -> Rat {
        self.0
            .iter()
            .map(|x| x.abs())
            .max()
            .unwrap_or_else(Rat::zero)
    }
}

impl From<Vec<Rat>> for RatVec {
    fn from(v: Vec<Rat>) -> Self {
        RatVec(v)
    }
}

impl Index<usize> for RatVec {
    type Output = Rat;
    fn index(&self, i: usize) -> &Rat {
        &self.0[i]
    }
}

impl IndexMut<usize> for RatVec {
    fn index_mut(&mut self, i: usize) -> &mut Rat {
        &mut self.0[i]
    }
}

impl Add<&RatVec> for &RatVec {
    type Output = RatVec;
    fn add(self, o: &RatVec) -> RatVec {
        RatVec(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub<&RatVec> for &RatVec {
    type Output = RatVec;
    fn sub(self, o: &RatVec) -> RatVec {
        RatVec(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &RatVec {
    type Output = RatVec;
    fn neg(self) -> RatVec {
        RatVec(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Display for RatVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", fmt_rat(x))?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primitive_scaling() {
        let (v, s) = to_primitive_integer(&[rat(2, 3), rat(-1, 3)]).unwrap();
        assert_eq!(v, vec![BigInt::from(2), BigInt::from(-1)]);
        assert_eq!(s, rint(3));
        let (v, s) = to_primitive_integer(&[rint(4), rint(6)]).unwrap();
        assert_eq!(v, vec![BigInt::from(2), BigInt::from(3)]);
        assert_eq!(s, rat(1, 2));
        assert!(to_primitive_integer(&[Rat::zero()]).is_none());
    }

    #[test]
    fn display() {
        assert_eq!(RatVec(vec![rat(1, 6), rint(-2)]).to_string(), "(1/6, -2)");
    }
}
