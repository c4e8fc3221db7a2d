//! Exact arithmetic in Q/Z.
//!
//! A [`Qz`] is a reduced fraction `num/den` with `0 <= num < den`. It stands
//! for the root of unity `exp(2πi·num/den)`, so the group law is written
//! additively throughout the crate.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Qz {
    num: u64,
    den: u64,
}

impl Default for Qz {
    fn default() -> Self {
        Qz::ZERO
    }
}

fn narrow(num: u128, den: u128) -> Qz {
    let g = num.gcd(&den);
    let (num, den) = (num / g, den / g);
    let den = u64::try_from(den).expect("Q/Z denominator exceeds u64");
    Qz {
        num: num as u64,
        den,
    }
}

impl Qz {
    pub const ZERO: Qz = Qz { num: 0, den: 1 };

    /// The class of `num/den` modulo 1. Panics if `den == 0`.
    pub fn new(num: i128, den: u64) -> Qz {
        assert!(den != 0, "zero denominator");
        let r = num.rem_euclid(den as i128) as u128;
        narrow(r, den as u128)
    }

    /// `k/level` reduced.
    pub fn from_level(k: i64, level: u64) -> Qz {
        Qz::new(k as i128, level)
    }

    pub fn num(self) -> u64 {
        self.num
    }

    pub fn den(self) -> u64 {
        self.den
    }

    pub fn is_zero(self) -> bool {
        self.num == 0
    }

    /// Multiplicative order of the represented root of unity.
    pub fn order(self) -> u64 {
        self.den
    }

    pub fn scale(self, k: i64) -> Qz {
        let k = (k as i128).rem_euclid(self.den as i128) as u128;
        narrow((self.num as u128 * k) % self.den as u128, self.den as u128)
    }

    pub fn scale_big(self, k: &BigInt) -> Qz {
        let r = k.mod_floor(&BigInt::from(self.den));
        self.scale(r.to_i64().expect("reduced below a u64 denominator"))
    }

    /// The preimage `y = num/(den·k)` of `self` under multiplication by `k`.
    /// Any other preimage differs from this one by a `k`-torsion element.
    pub fn divide(self, k: u64) -> Qz {
        assert!(k != 0, "division by zero in Q/Z");
        narrow(self.num as u128, self.den as u128 * k as u128)
    }

    /// Numerator over `level`, if `den` divides `level`.
    pub fn at_level(self, level: u64) -> Option<i64> {
        if level % self.den == 0 {
            Some((self.num * (level / self.den)) as i64)
        } else {
            None
        }
    }
}

impl Add for Qz {
    type Output = Qz;
    fn add(self, rhs: Qz) -> Qz {
        let l = (self.den as u128).lcm(&(rhs.den as u128));
        let n = self.num as u128 * (l / self.den as u128) + rhs.num as u128 * (l / rhs.den as u128);
        narrow(n % l, l)
    }
}

impl AddAssign for Qz {
    fn add_assign(&mut self, rhs: Qz) {
        *self = *self + rhs;
    }
}

impl Neg for Qz {
    type Output = Qz;
    fn neg(self) -> Qz {
        if self.num == 0 {
            self
        } else {
            Qz {
                num: self.den - self.num,
                den: self.den,
            }
        }
    }
}

impl Sub for Qz {
    type Output = Qz;
    fn sub(self, rhs: Qz) -> Qz {
        self + (-rhs)
    }
}

impl SubAssign for Qz {
    fn sub_assign(&mut self, rhs: Qz) {
        *self = *self - rhs;
    }
}

impl Mul<i64> for Qz {
    type Output = Qz;
    fn mul(self, k: i64) -> Qz {
        self.scale(k)
    }
}

impl std::iter::Sum for Qz {
    fn sum<I: Iterator<Item = Qz>>(iter: I) -> Qz {
        iter.fold(Qz::ZERO, |acc, q| acc + q)
    }
}

impl fmt::Display for Qz {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Qz {
    type Err = Error;
    fn from_str(s: &str) -> Result<Qz, Error> {
        let bad = || Error::Parse(format!("invalid Q/Z value {s:?}"));
        let s = s.trim();
        match s.split_once('/') {
            Some((n, d)) => {
                let n: i128 = n.trim().parse().map_err(|_| bad())?;
                let d: u64 = d.trim().parse().map_err(|_| bad())?;
                if d == 0 {
                    return Err(bad());
                }
                Ok(Qz::new(n, d))
            }
            None => {
                // integers are zero in Q/Z
                let _: i128 = s.parse().map_err(|_| bad())?;
                Ok(Qz::ZERO)
            }
        }
    }
}

impl Serialize for Qz {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Qz {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Qz, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
