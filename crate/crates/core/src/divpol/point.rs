use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::exactgeom::{fmt_rat, Rat};

/// Point of the projective line, or the generic point.
///
/// Finite points sort by value, then infinity, then the generic point.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ProjPoint {
    Finite(Rat),
    Infinity,
    Generic,
}

impl ProjPoint {
    pub fn finite(n: i64) -> ProjPoint {
        ProjPoint::Finite(Rat::from_integer(BigInt::from(n)))
    }

    pub fn zero() -> ProjPoint {
        ProjPoint::finite(0)
    }

    pub fn one() -> ProjPoint {
        ProjPoint::finite(1)
    }

    pub fn is_generic(&self) -> bool {
        matches!(self, ProjPoint::Generic)
    }

    /// Homogeneous coordinates `[x : y]` with `x / y` the affine value.
    pub fn homogeneous(&self) -> Option<(Rat, Rat)> {
        match self {
            ProjPoint::Finite(r) => Some((r.clone(), Rat::from_integer(1.into()))),
            ProjPoint::Infinity => Some((Rat::from_integer(1.into()), Rat::zero())),
            ProjPoint::Generic => None,
        }
    }

    /// Point with homogeneous coordinates `[x : y]`, not both zero.
    pub fn from_homogeneous(x: &Rat, y: &Rat) -> Option<ProjPoint> {
        if y.is_zero() {
            if x.is_zero() {
                None
            } else {
                Some(ProjPoint::Infinity)
            }
        } else {
            Some(ProjPoint::Finite(x / y))
        }
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProjPoint::Finite(r) => write!(f, "{}", fmt_rat(r)),
            ProjPoint::Infinity => write!(f, "inf"),
            ProjPoint::Generic => write!(f, "generic"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse point {0:?}")]
pub struct ParsePointError(pub String);

/// Parse a rational written as an integer, `p/q`, or a finite decimal.
pub fn parse_rational(s: &str) -> Option<Rat> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(Rat::new(p, q));
    }
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, body) = match mant.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits: BigInt = format!("{int}{frac}").parse().ok()?;
    let ten = BigInt::from(10);
    let e = exp - frac.len() as i32;
    let mut r = Rat::from_integer(digits);
    if e >= 0 {
        r *= Rat::from_integer(num_traits::pow(ten, e as usize));
    } else {
        r /= Rat::from_integer(num_traits::pow(ten, (-e) as usize));
    }
    Some(if neg { -r } else { r })
}

impl FromStr for ProjPoint {
    type Err = ParsePointError;

    /// Accepts `inf`, `generic`, a rational, or homogeneous `[p,q]`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParsePointError(s.to_string());
        let t = s.trim();
        match t.to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "∞" => return Ok(ProjPoint::Infinity),
            "generic" => return Ok(ProjPoint::Generic),
            _ => {}
        }
        if let Some(inner) = t.strip_prefix('[').and_then(|x| x.strip_suffix(']')) {
            let (p, q) = inner.split_once([',', ':']).ok_or_else(err)?;
            let p = parse_rational(p).ok_or_else(err)?;
            let q = parse_rational(q).ok_or_else(err)?;
            return ProjPoint::from_homogeneous(&p, &q).ok_or_else(err);
        }
        parse_rational(t).map(ProjPoint::Finite).ok_or_else(err)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactgeom::rat;

    #[test]
    fn parse_forms() {
        assert_eq!("0".parse::<ProjPoint>().unwrap(), ProjPoint::zero());
        assert_eq!("inf".parse::<ProjPoint>().unwrap(), ProjPoint::Infinity);
        assert_eq!("[1,2]".parse::<ProjPoint>().unwrap(), ProjPoint::Finite(rat(1, 2)));
        assert_eq!("[1,0]".parse::<ProjPoint>().unwrap(), ProjPoint::Infinity);
        assert_eq!("-3/6".parse::<ProjPoint>().unwrap(), ProjPoint::Finite(rat(-1, 2)));
        assert!("[0,0]".parse::<ProjPoint>().is_err());
        assert!("x".parse::<ProjPoint>().is_err());
    }

    #[test]
    fn decimals() {
        assert_eq!(parse_rational("0.5"), Some(rat(1, 2)));
        assert_eq!(parse_rational("-1.25e1"), Some(rat(-25, 2)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("."), None);
    }

    #[test]
    fn ordering() {
        let mut v = vec![ProjPoint::Generic, ProjPoint::Infinity, ProjPoint::one(), ProjPoint::zero()];
        v.sort();
        assert_eq!(v, vec![ProjPoint::zero(), ProjPoint::one(), ProjPoint::Infinity, ProjPoint::Generic]);
        assert_eq!(ProjPoint::Finite(rat(-1, 2)).to_string(), "-1/2");
    }
}
