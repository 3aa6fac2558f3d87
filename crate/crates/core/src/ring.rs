//! Coefficient rings and the Euclidean-domain arithmetic used by elimination.

use std::fmt;
use std::fmt::Debug;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::int::Int;

/// Coefficient ring for (co)homology.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Ring {
    Integers,
    Rationals,
    PrimeField(u64),
}

impl Ring {
    pub const Z: Ring = Ring::Integers;
    pub const Q: Ring = Ring::Rationals;
    pub const Z2: Ring = Ring::PrimeField(2);

    /// `Z_p`; fails unless `p` is prime.
    pub fn zp(p: u64) -> Result<Ring, Error> {
        if is_prime(p) {
            Ok(Ring::PrimeField(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    pub fn is_field(&self) -> bool {
        !matches!(self, Ring::Integers)
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Ring::PrimeField(p) => *p,
            _ => 0,
        }
    }

    /// The rings used by the theorem batteries.
    pub fn standard() -> [Ring; 4] {
        [Ring::Integers, Ring::Rationals, Ring::PrimeField(2), Ring::PrimeField(3)]
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ring::Integers => write!(f, "Z"),
            Ring::Rationals => write!(f, "Q"),
            Ring::PrimeField(p) => write!(f, "Z{p}"),
        }
    }
}

impl FromStr for Ring {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "Z" | "z" => Ok(Ring::Integers),
            "Q" | "q" => Ok(Ring::Rationals),
            other => {
                let digits = other
                    .strip_prefix("Z_")
                    .or_else(|| other.strip_prefix('Z'))
                    .or_else(|| other.strip_prefix('z'))
                    .ok_or_else(|| Error::Parse(format!("unknown ring `{other}`")))?;
                let p: u64 = digits
                    .parse()
                    .map_err(|_| Error::Parse(format!("unknown ring `{other}`")))?;
                Ring::zp(p)
            }
        }
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Arithmetic of a Euclidean domain, with the domain as a runtime context so
/// that prime fields can carry their modulus.
pub trait Domain: Clone + Debug {
    type Elem: Clone + PartialEq + Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_int(&self, v: &Int) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn is_unit(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// Euclidean division `a = q*b + r` with `size(r) < size(b)`.
    fn div_rem(&self, a: &Self::Elem, b: &Self::Elem) -> (Self::Elem, Self::Elem);
    /// Euclidean size used for pivot selection; zero maps to `u64::MAX`.
    fn size(&self, a: &Self::Elem) -> u64;
    /// `(g, s, t)` with `s*a + t*b = g`, `g` a gcd.
    fn ext_gcd(&self, a: &Self::Elem, b: &Self::Elem) -> (Self::Elem, Self::Elem, Self::Elem);
    /// Unit `u` such that `u*a` is the canonical associate of `a`.
    fn normalizing_unit(&self, a: &Self::Elem) -> Self::Elem;
    /// Inverse of a unit.
    fn unit_inverse(&self, u: &Self::Elem) -> Self::Elem;
    fn to_int(&self, a: &Self::Elem) -> Int;
}

/// The integers.
#[derive(Clone, Copy, Debug, Default)]
pub struct Zz;

impl Domain for Zz {
    type Elem = Int;

    fn zero(&self) -> Int {
        Int::ZERO
    }
    fn one(&self) -> Int {
        Int::ONE
    }
    fn from_int(&self, v: &Int) -> Int {
        v.clone()
    }
    fn is_zero(&self, a: &Int) -> bool {
        a.is_zero()
    }
    fn is_unit(&self, a: &Int) -> bool {
        a.is_unit()
    }
    fn add(&self, a: &Int, b: &Int) -> Int {
        a + b
    }
    fn sub(&self, a: &Int, b: &Int) -> Int {
        a - b
    }
    fn mul(&self, a: &Int, b: &Int) -> Int {
        a * b
    }
    fn neg(&self, a: &Int) -> Int {
        -a
    }
    fn div_rem(&self, a: &Int, b: &Int) -> (Int, Int) {
        // symmetric remainder keeps entries small
        let (mut q, mut r) = a.div_mod_floor(b);
        let twice = &r + &r;
        if twice.abs() > b.abs() {
            r = &r - b;
            q = &q + &Int::ONE;
        }
        (q, r)
    }
    fn size(&self, a: &Int) -> u64 {
        match a {
            Int::Small(0) => u64::MAX,
            Int::Small(v) => v.unsigned_abs().min(u64::MAX - 1),
            Int::Big(_) => u64::MAX - 1,
        }
    }
    fn ext_gcd(&self, a: &Int, b: &Int) -> (Int, Int, Int) {
        Int::extended_gcd(a, b)
    }
    fn normalizing_unit(&self, a: &Int) -> Int {
        if a.is_negative() {
            Int::from(-1)
        } else {
            Int::ONE
        }
    }
    fn unit_inverse(&self, u: &Int) -> Int {
        u.clone()
    }
    fn to_int(&self, a: &Int) -> Int {
        a.clone()
    }
}

/// The prime field `Z/pZ`.
#[derive(Clone, Copy, Debug)]
pub struct Fp {
    pub p: u64,
}

impl Fp {
    pub fn new(p: u64) -> Fp {
        debug_assert!(is_prime(p));
        Fp { p }
    }

    fn reduce(&self, v: u128) -> u64 {
        (v % self.p as u128) as u64
    }

    pub fn inv(&self, a: u64) -> u64 {
        // Fermat
        let mut base = a % self.p;
        let mut exp = self.p - 2;
        let mut acc = 1u64;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.reduce(acc as u128 * base as u128);
            }
            base = self.reduce(base as u128 * base as u128);
            exp >>= 1;
        }
        acc
    }
}

impl Domain for Fp {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn from_int(&self, v: &Int) -> u64 {
        v.rem_euclid_u64(self.p)
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn is_unit(&self, a: &u64) -> bool {
        *a != 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        self.reduce(*a as u128 + *b as u128)
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        self.reduce(*a as u128 + (self.p - *b % self.p) as u128)
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        self.reduce(*a as u128 * *b as u128)
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn div_rem(&self, a: &u64, b: &u64) -> (u64, u64) {
        (self.mul(a, &self.inv(*b)), 0)
    }
    fn size(&self, a: &u64) -> u64 {
        if *a == 0 {
            u64::MAX
        } else {
            1
        }
    }
    fn ext_gcd(&self, a: &u64, b: &u64) -> (u64, u64, u64) {
        if *a != 0 {
            (1, self.inv(*a), 0)
        } else if *b != 0 {
            (1, 0, self.inv(*b))
        } else {
            (0, 1, 0)
        }
    }
    fn normalizing_unit(&self, a: &u64) -> u64 {
        if *a == 0 {
            1
        } else {
            self.inv(*a)
        }
    }
    fn unit_inverse(&self, u: &u64) -> u64 {
        self.inv(*u)
    }
    fn to_int(&self, a: &u64) -> Int {
        Int::from(*a as i64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_rings() {
        assert_eq!("Z".parse::<Ring>().unwrap(), Ring::Integers);
        assert_eq!("Q".parse::<Ring>().unwrap(), Ring::Rationals);
        assert_eq!("Z2".parse::<Ring>().unwrap(), Ring::PrimeField(2));
        assert_eq!("Z_3".parse::<Ring>().unwrap(), Ring::PrimeField(3));
        assert!("Z4".parse::<Ring>().is_err());
        assert!("R".parse::<Ring>().is_err());
    }

    #[test]
    fn field_inverse() {
        let f = Fp::new(7);
        for a in 1..7 {
            assert_eq!(f.mul(&a, &f.inv(a)), 1);
        }
    }

    #[test]
    fn symmetric_remainder() {
        let (q, r) = Zz.div_rem(&Int::from(7), &Int::from(4));
        assert_eq!(&(&q * &Int::from(4)) + &r, Int::from(7));
        assert!(r.abs() <= Int::from(2));
    }
}
