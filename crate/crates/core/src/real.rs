//! Binary floating point numbers with arbitrary precision.
//!
//! A `Real` is `mant * 2^exp` with the mantissa rounded to `prec` bits.
//! Binary operations work at the larger precision of their operands.
//! Only the operations needed by the moment integrals are provided.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::exactgeom::Rat;

#[derive(Clone, Debug)]
pub struct Real {
    mant: BigInt,
    exp: i64,
    prec: u32,
}

/// Number of bits needed for `digits` significant decimal digits.
pub fn bits_for_digits(digits: u32) -> u32 {
    (digits as f64 * std::f64::consts::LOG2_10).ceil() as u32
}

impl Real {
    pub fn zero(prec: u32) -> Real {
        Real {
            mant: BigInt::zero(),
            exp: 0,
            prec,
        }
    }

    pub fn one(prec: u32) -> Real {
        Real::from_i64(1, prec)
    }

    pub fn from_i64(x: i64, prec: u32) -> Real {
        Real::from_parts(BigInt::from(x), 0, prec)
    }

    pub fn from_bigint(x: &BigInt, prec: u32) -> Real {
        Real::from_parts(x.clone(), 0, prec)
    }

    fn from_parts(mant: BigInt, exp: i64, prec: u32) -> Real {
        let mut r = Real { mant, exp, prec };
        r.round();
        r
    }

    pub fn from_rat(x: &Rat, prec: u32) -> Real {
        if x.is_zero() {
            return Real::zero(prec);
        }
        let num = x.numer();
        let den = x.denom();
        let shift = prec as i64 + 2 + den.bits() as i64 - num.bits() as i64;
        let q = if shift >= 0 {
            (num << shift as usize).div_floor(den)
        } else {
            num.div_floor(&(den << (-shift) as usize))
        };
        Real::from_parts(q, -shift, prec)
    }

    pub fn from_f64(x: f64, prec: u32) -> Real {
        match Rat::from_float(x) {
            Some(r) => Real::from_rat(&r, prec),
            None => Real::zero(prec),
        }
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    /// Same value carried at a different precision.
    pub fn with_prec(&self, prec: u32) -> Real {
        Real::from_parts(self.mant.clone(), self.exp, prec)
    }

    fn round(&mut self) {
        if self.mant.is_zero() {
            self.exp = 0;
            return;
        }
        let bits = self.mant.bits();
        if bits > self.prec as u64 {
            let shift = bits - self.prec as u64;
            let neg = self.mant.is_negative();
            let mut m = self.mant.abs();
            let half = BigInt::one() << (shift - 1);
            m = (m + half) >> shift as usize;
            self.mant = if neg { -m } else { m };
            self.exp += shift as i64;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.mant.is_positive()
    }

    pub fn abs(&self) -> Real {
        Real {
            mant: self.mant.abs(),
            exp: self.exp,
            prec: self.prec,
        }
    }

    /// `floor(log2 |x|)`, or `None` for zero.
    pub fn log2_floor(&self) -> Option<i64> {
        if self.mant.is_zero() {
            None
        } else {
            Some(self.mant.bits() as i64 - 1 + self.exp)
        }
    }

    /// Multiply by `2^k` exactly.
    pub fn ldexp(&self, k: i64) -> Real {
        Real {
            mant: self.mant.clone(),
            exp: if self.mant.is_zero() { 0 } else { self.exp + k },
            prec: self.prec,
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.mant.is_zero() {
            return 0.0;
        }
        let bits = self.mant.bits() as i64;
        let drop = (bits - 60).max(0);
        let m = (&self.mant >> drop as usize).to_f64().unwrap_or(0.0);
        let e = self.exp + drop;
        if e > 2000 {
            return m.signum() * f64::INFINITY;
        }
        if e < -2000 {
            return 0.0;
        }
        m * 2f64.powi(e as i32)
    }

    /// Exact rational value.
    pub fn to_rat(&self) -> Rat {
        if self.exp >= 0 {
            Rat::from_integer(&self.mant << self.exp as usize)
        } else {
            Rat::new(self.mant.clone(), BigInt::one() << (-self.exp) as usize)
        }
    }

    pub fn max_prec(&self, o: &Real) -> u32 {
        self.prec.max(o.prec)
    }

    /// `e^x`, by argument halving and Taylor series.
    pub fn exp(&self) -> Real {
        let prec = self.prec;
        if self.is_zero() {
            return Real::one(prec);
        }
        let mag = self.log2_floor().unwrap() + 1;
        let s = (mag + 12).max(0);
        let wp = prec + 32 + s as u32;
        let r = self.with_prec(wp).ldexp(-s);
        let mut sum = Real::one(wp);
        let mut term = Real::one(wp);
        let cutoff = -(wp as i64) - 4;
        let mut k = 1i64;
        loop {
            term = &(&term * &r) / &Real::from_i64(k, wp);
            if term.is_zero() || term.log2_floor().unwrap() < cutoff {
                break;
            }
            sum = &sum + &term;
            k += 1;
        }
        for _ in 0..s {
            sum = &sum * &sum;
        }
        sum.with_prec(prec)
    }

    /// Decimal scientific notation with `digits` significant digits.
    pub fn to_sci(&self, digits: usize) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let digits = digits.max(1);
        let l2 = self.log2_floor().unwrap() as f64;
        let mut e10 = (l2 * std::f64::consts::LOG10_2).floor() as i64;
        for _ in 0..3 {
            let n = self.scaled_decimal(digits as i64 - 1 - e10);
            let nd = n.abs().to_string().len() as i64;
            if nd > digits as i64 {
                e10 += 1;
                continue;
            }
            if nd < digits as i64 {
                e10 -= 1;
                continue;
            }
            let s = n.abs().to_string();
            let sign = if n.is_negative() { "-" } else { "" };
            let frac = &s[1..];
            return if frac.is_empty() {
                format!("{sign}{}e{e10}", &s[..1])
            } else {
                format!("{sign}{}.{}e{e10}", &s[..1], frac)
            };
        }
        format!("{}", self.to_f64())
    }

    /// `round(self * 10^k)`
    fn scaled_decimal(&self, k: i64) -> BigInt {
        let mut num = self.mant.abs();
        let mut den = BigInt::one();
        let ten = BigInt::from(10);
        if k >= 0 {
            num *= num_traits::pow(ten, k as usize);
        } else {
            den *= num_traits::pow(ten, (-k) as usize);
        }
        if self.exp >= 0 {
            num <<= self.exp as usize;
        } else {
            den <<= (-self.exp) as usize;
        }
        let two = BigInt::from(2);
        let (q, r) = num.div_mod_floor(&den);
        let q = if &r * &two >= den { q + 1 } else { q };
        if self.mant.is_negative() {
            -q
        } else {
            q
        }
    }
}

impl PartialEq for Real {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Real {}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Real {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b) = (self.mant.sign(), other.mant.sign());
        if a != b || a == Sign::NoSign {
            return a.cmp(&b);
        }
        let e = self.exp.min(other.exp);
        let x = &self.mant << (self.exp - e) as usize;
        let y = &other.mant << (other.exp - e) as usize;
        x.cmp(&y)
    }
}

impl Add<&Real> for &Real {
    type Output = Real;
    fn add(self, o: &Real) -> Real {
        let prec = self.max_prec(o);
        if self.is_zero() {
            return o.with_prec(prec);
        }
        if o.is_zero() {
            return self.with_prec(prec);
        }
        let top_a = self.log2_floor().unwrap();
        let top_b = o.log2_floor().unwrap();
        let gap = prec as i64 + 4;
        if top_a - top_b > gap {
            return self.with_prec(prec);
        }
        if top_b - top_a > gap {
            return o.with_prec(prec);
        }
        let e = self.exp.min(o.exp);
        let m = (&self.mant << (self.exp - e) as usize) + (&o.mant << (o.exp - e) as usize);
        Real::from_parts(m, e, prec)
    }
}

impl Sub<&Real> for &Real {
    type Output = Real;
    fn sub(self, o: &Real) -> Real {
        self + &(-o)
    }
}

impl Neg for &Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real {
            mant: -&self.mant,
            exp: self.exp,
            prec: self.prec,
        }
    }
}

impl Mul<&Real> for &Real {
    type Output = Real;
    fn mul(self, o: &Real) -> Real {
        Real::from_parts(&self.mant * &o.mant, self.exp + o.exp, self.max_prec(o))
    }
}

impl Div<&Real> for &Real {
    type Output = Real;
    fn div(self, o: &Real) -> Real {
        assert!(!o.is_zero(), "division by zero");
        let prec = self.max_prec(o);
        if self.is_zero() {
            return Real::zero(prec);
        }
        let shift = prec as i64 + 2 + o.mant.bits() as i64 - self.mant.bits() as i64;
        let shift = shift.max(0);
        let q = (&self.mant << shift as usize) / &o.mant;
        Real::from_parts(q, self.exp - o.exp - shift, prec)
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<Real> for Real {
            type Output = Real;
            fn $m(self, o: Real) -> Real { (&self).$m(&o) }
        }
        impl $tr<&Real> for Real {
            type Output = Real;
            fn $m(self, o: &Real) -> Real { (&self).$m(o) }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul, Div div);

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        -&self
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(20);
        write!(f, "{}", self.to_sci(digits))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactgeom::rat;

    const P: u32 = 200;

    #[test]
    fn arithmetic() {
        let third = Real::from_rat(&rat(1, 3), P);
        let one = &third * &Real::from_i64(3, P);
        assert!((&one - &Real::one(P)).abs() < Real::one(P).ldexp(-195));
        assert_eq!(Real::from_rat(&rat(3, 4), P).to_rat(), rat(3, 4));
        assert_eq!((&Real::from_i64(7, P) / &Real::from_i64(2, P)).to_f64(), 3.5);
        assert!(Real::from_i64(-2, P) < Real::from_rat(&rat(-1, 3), P));
    }

    #[test]
    fn exp_values() {
        let e = Real::one(P).exp();
        assert_eq!(
            e.to_sci(50),
            "2.7182818284590452353602874713526624977572470937000e0"
        );
        let x = Real::from_i64(-30, P).exp();
        assert!((x.to_f64() - (-30f64).exp()).abs() < 1e-25);
        let y = &Real::from_i64(5, P).exp() * &Real::from_i64(-5, P).exp();
        assert!((&y - &Real::one(P)).abs() < Real::one(P).ldexp(-190));
    }

    #[test]
    fn sci_format() {
        assert_eq!(Real::from_i64(1234, P).to_sci(3), "1.23e3");
        assert_eq!(Real::from_rat(&rat(-1, 8), P).to_sci(2), "-1.3e-1");
        assert_eq!(Real::zero(P).to_sci(5), "0");
    }
}
