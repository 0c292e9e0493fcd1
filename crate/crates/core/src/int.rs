//! Exact integers for the elimination kernel.
//!
//! Almost every entry met while reducing relation slices is a word-sized
//! integer, so [`Int`] keeps an inline `i64` and only promotes to a heap
//! [`BigInt`] when a checked operation overflows. Values that fit in a word
//! are always stored inline, which keeps equality structural.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Int {
    Small(i64),
    Big(Box<BigInt>),
}

impl Int {
    fn from_big(b: BigInt) -> Int {
        match b.to_i64() {
            Some(v) => Int::Small(v),
            None => Int::Big(Box::new(b)),
        }
    }

    pub fn to_bigint(&self) -> BigInt {
        match self {
            Int::Small(v) => BigInt::from(*v),
            Int::Big(b) => (**b).clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Int::Small(0))
    }

    pub fn is_unit(&self) -> bool {
        matches!(self, Int::Small(1) | Int::Small(-1))
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Int::Small(v) => *v < 0,
            Int::Big(b) => b.is_negative(),
        }
    }

    pub fn abs(&self) -> Int {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    /// `self - f * other`, the workhorse of row reduction.
    pub fn sub_mul(&self, f: &Int, other: &Int) -> Int {
        if let (Int::Small(a), Int::Small(b), Int::Small(c)) = (self, f, other) {
            if let Some(v) = b.checked_mul(*c).and_then(|p| a.checked_sub(p)) {
                return Int::Small(v);
            }
        }
        Int::from_big(self.to_bigint() - f.to_bigint() * other.to_bigint())
    }

    /// Floor division and remainder, remainder with the sign of the divisor.
    pub fn div_mod_floor(&self, d: &Int) -> (Int, Int) {
        if let (Int::Small(a), Int::Small(b)) = (self, d) {
            if !(*a == i64::MIN && *b == -1) {
                let (q, r) = a.div_mod_floor(b);
                return (Int::Small(q), Int::Small(r));
            }
        }
        let (q, r) = self.to_bigint().div_mod_floor(&d.to_bigint());
        (Int::from_big(q), Int::from_big(r))
    }

    /// Exact quotient; callers guarantee divisibility.
    pub fn div_exact(&self, d: &Int) -> Int {
        let (q, r) = self.div_mod_floor(d);
        debug_assert!(r.is_zero(), "inexact division");
        q
    }

    pub fn divides(&self, other: &Int) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other.div_mod_floor(self).1.is_zero()
    }

    /// Returns `(g, s, t)` with `g = gcd(a, b) > 0` and `s*a + t*b = g`.
    pub fn ext_gcd(a: &Int, b: &Int) -> (Int, Int, Int) {
        let e = a.to_bigint().extended_gcd(&b.to_bigint());
        let (mut g, mut s, mut t) = (e.gcd, e.x, e.y);
        if g.is_negative() {
            g = -g;
            s = -s;
            t = -t;
        }
        (Int::from_big(g), Int::from_big(s), Int::from_big(t))
    }
}

impl From<i64> for Int {
    fn from(v: i64) -> Int {
        Int::Small(v)
    }
}

impl From<&BigInt> for Int {
    fn from(v: &BigInt) -> Int {
        Int::from_big(v.clone())
    }
}

impl From<BigInt> for Int {
    fn from(v: BigInt) -> Int {
        Int::from_big(v)
    }
}

impl Zero for Int {
    fn zero() -> Int {
        Int::Small(0)
    }
    fn is_zero(&self) -> bool {
        Int::is_zero(self)
    }
}

impl One for Int {
    fn one() -> Int {
        Int::Small(1)
    }
}

impl Add for Int {
    type Output = Int;
    fn add(self, rhs: Int) -> Int {
        &self + &rhs
    }
}

impl Add for &Int {
    type Output = Int;
    fn add(self, rhs: &Int) -> Int {
        if let (Int::Small(a), Int::Small(b)) = (self, rhs) {
            if let Some(v) = a.checked_add(*b) {
                return Int::Small(v);
            }
        }
        Int::from_big(self.to_bigint() + rhs.to_bigint())
    }
}

impl Sub for Int {
    type Output = Int;
    fn sub(self, rhs: Int) -> Int {
        &self - &rhs
    }
}

impl Sub for &Int {
    type Output = Int;
    fn sub(self, rhs: &Int) -> Int {
        if let (Int::Small(a), Int::Small(b)) = (self, rhs) {
            if let Some(v) = a.checked_sub(*b) {
                return Int::Small(v);
            }
        }
        Int::from_big(self.to_bigint() - rhs.to_bigint())
    }
}

impl Mul for Int {
    type Output = Int;
    fn mul(self, rhs: Int) -> Int {
        &self * &rhs
    }
}

impl Mul for &Int {
    type Output = Int;
    fn mul(self, rhs: &Int) -> Int {
        if let (Int::Small(a), Int::Small(b)) = (self, rhs) {
            if let Some(v) = a.checked_mul(*b) {
                return Int::Small(v);
            }
        }
        Int::from_big(self.to_bigint() * rhs.to_bigint())
    }
}

impl Neg for Int {
    type Output = Int;
    fn neg(self) -> Int {
        -&self
    }
}

impl Neg for &Int {
    type Output = Int;
    fn neg(self) -> Int {
        match self {
            Int::Small(v) => match v.checked_neg() {
                Some(n) => Int::Small(n),
                None => Int::from_big(-BigInt::from(*v)),
            },
            Int::Big(b) => Int::from_big(-(**b).clone()),
        }
    }
}

impl fmt::Debug for Int {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Int {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Int::Small(v) => write!(f, "{v}"),
            Int::Big(b) => write!(f, "{b}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn overflow_promotes_and_demotes() {
        let big = Int::from(i64::MAX) + Int::from(1);
        assert!(matches!(big, Int::Big(_)));
        let back = big - Int::from(1);
        assert_eq!(back, Int::Small(i64::MAX));
        let sq = &Int::from(i64::MIN) * &Int::from(i64::MIN);
        assert_eq!(sq.to_bigint(), BigInt::from(i64::MIN) * BigInt::from(i64::MIN));
        assert_eq!(-Int::from(i64::MIN), Int::from(BigInt::from(i64::MIN).neg()));
    }

    #[test]
    fn ext_gcd_is_bezout() {
        let (g, s, t) = Int::ext_gcd(&Int::from(-12), &Int::from(18));
        assert_eq!(g, Int::from(6));
        assert_eq!(&(&s * &Int::from(-12)) + &(&t * &Int::from(18)), g);
    }

    proptest! {
        #[test]
        fn matches_bigint(a in any::<i64>(), b in any::<i64>(), c in any::<i64>()) {
            let (x, y, z) = (Int::from(a), Int::from(b), Int::from(c));
            let (ba, bb, bc) = (BigInt::from(a), BigInt::from(b), BigInt::from(c));
            prop_assert_eq!(x.sub_mul(&y, &z).to_bigint(), &ba - &bb * &bc);
            prop_assert_eq!((&x + &y).to_bigint(), &ba + &bb);
            prop_assert_eq!((&x * &y).to_bigint(), &ba * &bb);
            if b != 0 {
                let (q, r) = x.div_mod_floor(&y);
                let (bq, br) = ba.div_mod_floor(&bb);
                prop_assert_eq!(q.to_bigint(), bq);
                prop_assert_eq!(r.to_bigint(), br);
            }
        }
    }
}
