//! Arbitrary-precision integers with an inline fast path.
//!
//! Boundary matrices are tiny integers almost everywhere, but elimination can
//! blow entries up. `Int` keeps values in an `i64` until an operation
//! overflows, then promotes to a heap `BigInt`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Int {
    Small(i64),
    Big(Box<BigInt>),
}

impl Int {
    pub const ZERO: Int = Int::Small(0);
    pub const ONE: Int = Int::Small(1);

    fn big(b: BigInt) -> Int {
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

    pub fn to_i64(&self) -> Option<i64> {
        match self {
            Int::Small(v) => Some(*v),
            Int::Big(_) => None,
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
            -self.clone()
        } else {
            self.clone()
        }
    }

    pub fn signum(&self) -> i32 {
        match self {
            Int::Small(v) => v.signum() as i32,
            Int::Big(b) => {
                if b.is_negative() {
                    -1
                } else if b.is_zero() {
                    0
                } else {
                    1
                }
            }
        }
    }

    /// Floor division with remainder, remainder has the sign of the divisor.
    pub fn div_mod_floor(&self, other: &Int) -> (Int, Int) {
        assert!(!other.is_zero(), "division by zero");
        match (self, other) {
            (Int::Small(a), Int::Small(b)) if !(*a == i64::MIN && *b == -1) => {
                let (q, r) = a.div_mod_floor(b);
                (Int::Small(q), Int::Small(r))
            }
            _ => {
                let (q, r) = self.to_bigint().div_mod_floor(&other.to_bigint());
                (Int::big(q), Int::big(r))
            }
        }
    }

    /// Residue in `0..m` for a positive modulus.
    pub fn rem_euclid_u64(&self, m: u64) -> u64 {
        match self {
            Int::Small(v) => v.rem_euclid(m as i64) as u64,
            Int::Big(b) => {
                let r = b.mod_floor(&BigInt::from(m));
                r.to_u64().expect("residue fits")
            }
        }
    }

    pub fn gcd(&self, other: &Int) -> Int {
        match (self, other) {
            (Int::Small(a), Int::Small(b)) if *a != i64::MIN && *b != i64::MIN => {
                Int::Small(a.gcd(b))
            }
            _ => Int::big(self.to_bigint().gcd(&other.to_bigint())),
        }
    }

    /// Returns `(g, s, t)` with `s*a + t*b = g = gcd(a, b) >= 0`.
    pub fn extended_gcd(a: &Int, b: &Int) -> (Int, Int, Int) {
        let (mut old_r, mut r) = (a.clone(), b.clone());
        let (mut old_s, mut s) = (Int::ONE, Int::ZERO);
        let (mut old_t, mut t) = (Int::ZERO, Int::ONE);
        while !r.is_zero() {
            let (q, rem) = old_r.div_mod_floor(&r);
            old_r = std::mem::replace(&mut r, rem);
            let ns = &old_s - &(&q * &s);
            old_s = std::mem::replace(&mut s, ns);
            let nt = &old_t - &(&q * &t);
            old_t = std::mem::replace(&mut t, nt);
        }
        if old_r.is_negative() {
            (-old_r, -old_s, -old_t)
        } else {
            (old_r, old_s, old_t)
        }
    }
}

impl From<i64> for Int {
    fn from(v: i64) -> Self {
        Int::Small(v)
    }
}

impl From<i32> for Int {
    fn from(v: i32) -> Self {
        Int::Small(v as i64)
    }
}

impl From<BigInt> for Int {
    fn from(b: BigInt) -> Self {
        Int::big(b)
    }
}

impl Default for Int {
    fn default() -> Self {
        Int::ZERO
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl<'a> $trait<&'a Int> for &'a Int {
            type Output = Int;
            fn $method(self, rhs: &'a Int) -> Int {
                if let (Int::Small(a), Int::Small(b)) = (self, rhs) {
                    if let Some(v) = a.$checked(*b) {
                        return Int::Small(v);
                    }
                }
                Int::big(self.to_bigint().$method(rhs.to_bigint()))
            }
        }
        impl $trait<Int> for Int {
            type Output = Int;
            fn $method(self, rhs: Int) -> Int {
                (&self).$method(&rhs)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl Neg for Int {
    type Output = Int;
    fn neg(self) -> Int {
        match self {
            Int::Small(v) if v != i64::MIN => Int::Small(-v),
            other => Int::big(-other.to_bigint()),
        }
    }
}

impl Neg for &Int {
    type Output = Int;
    fn neg(self) -> Int {
        -self.clone()
    }
}

impl Ord for Int {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Int::Small(a), Int::Small(b)) => a.cmp(b),
            _ => self.to_bigint().cmp(&other.to_bigint()),
        }
    }
}

impl PartialOrd for Int {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
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

impl fmt::Debug for Int {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Int {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Int::Small(v) => s.serialize_i64(*v),
            Int::Big(b) => s.serialize_str(&b.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for Int {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(i64),
            Str(String),
        }
        match Repr::deserialize(d)? {
            Repr::Num(v) => Ok(Int::Small(v)),
            Repr::Str(s) => s
                .parse::<BigInt>()
                .map(Int::big)
                .map_err(serde::de::Error::custom),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn promotes_on_overflow_and_demotes_back() {
        let a = Int::from(i64::MAX);
        let b = &a + &Int::ONE;
        assert!(matches!(b, Int::Big(_)));
        let c = &b - &Int::ONE;
        assert_eq!(c, Int::Small(i64::MAX));
        let sq = &a * &a;
        assert_eq!(sq.to_bigint(), BigInt::from(i64::MAX) * BigInt::from(i64::MAX));
    }

    #[test]
    fn extended_gcd_bezout() {
        for (a, b) in [(12i64, 18i64), (-4, 6), (0, 5), (7, 0), (35, -15)] {
            let (g, s, t) = Int::extended_gcd(&Int::from(a), &Int::from(b));
            assert_eq!(&(&s * &Int::from(a)) + &(&t * &Int::from(b)), g);
            assert_eq!(g, Int::from(a.gcd(&b)));
        }
    }

    #[test]
    fn floor_division() {
        let (q, r) = Int::from(-7).div_mod_floor(&Int::from(2));
        assert_eq!((q, r), (Int::from(-4), Int::from(1)));
    }
}
