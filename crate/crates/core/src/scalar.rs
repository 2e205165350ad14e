//! Exact scalars: arbitrary precision rationals and word sized prime fields.

use alloc::string::{String, ToString};
use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::ParseError;

/// Characteristic of the base field; `0` stands for the rationals.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Characteristic(u64);

impl Characteristic {
    pub const ZERO: Characteristic = Characteristic(0);

    /// Accepts `0` or a prime that fits in 32 bits (products stay inside `u64`).
    pub fn new(c: u64) -> Option<Characteristic> {
        if c == 0 || (c <= u32::MAX as u64 && is_prime(c)) {
            Some(Characteristic(c))
        } else {
            None
        }
    }

    pub fn value(self) -> u64 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Characteristic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// An element of the prime field of some characteristic.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Q(BigRational),
    Fp { v: u64, p: u64 },
}

fn mod_pow(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = ((r as u128 * b as u128) % p as u128) as u64;
        }
        b = ((b as u128 * b as u128) % p as u128) as u64;
        e >>= 1;
    }
    r
}

fn bigint_mod(n: &BigInt, p: u64) -> u64 {
    let m = n.mod_floor(&BigInt::from(p));
    m.to_u64().expect("residue fits")
}

impl Scalar {
    pub fn zero(c: Characteristic) -> Scalar {
        Scalar::from_i64(c, 0)
    }

    pub fn one(c: Characteristic) -> Scalar {
        Scalar::from_i64(c, 1)
    }

    pub fn from_i64(c: Characteristic, n: i64) -> Scalar {
        if c.0 == 0 {
            Scalar::Q(BigRational::from_integer(BigInt::from(n)))
        } else {
            Scalar::Fp {
                v: bigint_mod(&BigInt::from(n), c.0),
                p: c.0,
            }
        }
    }

    /// Maps a rational into the prime field; `None` when the denominator vanishes mod p.
    pub fn from_rational(c: Characteristic, q: &BigRational) -> Option<Scalar> {
        if c.0 == 0 {
            return Some(Scalar::Q(q.clone()));
        }
        let p = c.0;
        let n = bigint_mod(q.numer(), p);
        let d = bigint_mod(q.denom(), p);
        if d == 0 {
            return None;
        }
        let v = ((n as u128 * mod_pow(d, p - 2, p) as u128) % p as u128) as u64;
        Some(Scalar::Fp { v, p })
    }

    /// Parses `3/2`, `-1`, `7`.
    pub fn parse(c: Characteristic, s: &str) -> Result<Scalar, ParseError> {
        let t = s.trim();
        let bad = || ParseError::new(0, alloc::format!("invalid scalar literal `{}`", s));
        let (n, d) = match t.split_once('/') {
            Some((a, b)) => (a.trim(), b.trim()),
            None => (t, "1"),
        };
        let n: BigInt = n.parse().map_err(|_| bad())?;
        let d: BigInt = d.parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(ParseError::new(0, "zero denominator in scalar literal"));
        }
        Scalar::from_rational(c, &BigRational::new(n, d))
            .ok_or_else(|| ParseError::new(0, "denominator vanishes in the prime field"))
    }

    pub fn characteristic(&self) -> Characteristic {
        match self {
            Scalar::Q(_) => Characteristic(0),
            Scalar::Fp { p, .. } => Characteristic(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Q(q) => q.is_zero(),
            Scalar::Fp { v, .. } => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Q(q) => q.is_one(),
            Scalar::Fp { v, .. } => *v == 1,
        }
    }

    /// True for rationals below zero; prime field elements are never negative.
    pub fn is_negative(&self) -> bool {
        match self {
            Scalar::Q(q) => q.is_negative(),
            Scalar::Fp { .. } => false,
        }
    }

    pub fn add(&self, o: &Scalar) -> Scalar {
        match (self, o) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a + b),
            (Scalar::Fp { v: a, p }, Scalar::Fp { v: b, p: q }) if p == q => Scalar::Fp {
                v: ((*a as u128 + *b as u128) % *p as u128) as u64,
                p: *p,
            },
            _ => mixed(),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Q(a) => Scalar::Q(-a),
            Scalar::Fp { v, p } => Scalar::Fp {
                v: if *v == 0 { 0 } else { p - v },
                p: *p,
            },
        }
    }

    pub fn sub(&self, o: &Scalar) -> Scalar {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Scalar) -> Scalar {
        match (self, o) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a * b),
            (Scalar::Fp { v: a, p }, Scalar::Fp { v: b, p: q }) if p == q => Scalar::Fp {
                v: ((*a as u128 * *b as u128) % *p as u128) as u64,
                p: *p,
            },
            _ => mixed(),
        }
    }

    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Q(a) => Scalar::Q(a.recip()),
            Scalar::Fp { v, p } => Scalar::Fp {
                v: mod_pow(*v, p - 2, *p),
                p: *p,
            },
        })
    }

    pub fn pow(&self, e: u32) -> Scalar {
        let mut r = Scalar::one(self.characteristic());
        for _ in 0..e {
            r = r.mul(self);
        }
        r
    }

    /// Integer value when the scalar is an integer (rationals) or its residue (prime field).
    pub fn as_integer(&self) -> Option<BigInt> {
        match self {
            Scalar::Q(q) if q.is_integer() => Some(q.numer().clone()),
            Scalar::Q(_) => None,
            Scalar::Fp { v, .. } => Some(BigInt::from(*v)),
        }
    }
}

fn mixed() -> ! {
    panic!("scalars of different characteristic combined")
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Scalar::Q(a), Scalar::Q(b)) => a.cmp(b),
            (Scalar::Fp { v: a, p }, Scalar::Fp { v: b, p: q }) => (p, a).cmp(&(q, b)),
            (Scalar::Q(_), Scalar::Fp { .. }) => Ordering::Less,
            (Scalar::Fp { .. }, Scalar::Q(_)) => Ordering::Greater,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Q(q) => {
                if q.is_integer() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            Scalar::Fp { v, .. } => write!(f, "{}", v),
        }
    }
}

impl Scalar {
    pub fn to_literal(&self) -> String {
        self.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        let q = Characteristic::ZERO;
        assert_eq!(Scalar::parse(q, "3/2").unwrap().to_string(), "3/2");
        assert_eq!(Scalar::parse(q, "-4/2").unwrap().to_string(), "-2");
        let f5 = Characteristic::new(5).unwrap();
        assert_eq!(Scalar::parse(f5, "1/2").unwrap().to_string(), "3");
        assert!(Scalar::parse(f5, "1/5").is_err());
        assert!(Scalar::parse(q, "x").is_err());
    }

    #[test]
    fn characteristic_rejects_composites() {
        assert!(Characteristic::new(4).is_none());
        assert!(Characteristic::new(1).is_none());
        assert!(Characteristic::new(7).is_some());
    }

    #[test]
    fn inverse_mod_p() {
        let f7 = Characteristic::new(7).unwrap();
        for n in 1..7 {
            let s = Scalar::from_i64(f7, n);
            assert!(s.mul(&s.inv().unwrap()).is_one());
        }
        assert!(Scalar::zero(f7).inv().is_none());
    }
}
