//! Exact scalars and the combinatorial constants of the algebra family.
//!
//! All coefficients live in [`Rat`]. The label `ℓ` is a [`HalfInt`] that
//! stores `2ℓ`, so every index expression (`2ℓ+1`, `ℓ±1/2`) stays integral.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Arbitrary-precision rational; text form `p/q` with `q` omitted when 1.
pub type Rat = BigRational;

/// Builds a rational from two machine integers. Panics if `den == 0`.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Parses `p`, `-p` or `p/q`.
pub fn parse_rat(src: &str) -> Result<Rat> {
    let s = src.trim();
    let bad = || Error::MalformedRational(src.to_string());
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n = BigInt::from_str(n).map_err(|_| bad())?;
    let d = BigInt::from_str(d).map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Rat::new(n, d))
}

/// A half-odd-integer `ℓ ≥ 3/2`, stored as the odd integer `2ℓ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct HalfInt {
    twice: u32,
}

impl HalfInt {
    pub fn from_twice(twice: u32) -> Result<Self> {
        if twice < 3 || twice.is_multiple_of(2) {
            return Err(Error::InvalidHalfInt(format!("{twice}/2")));
        }
        Ok(HalfInt { twice })
    }

    /// `2ℓ`.
    pub fn twice(self) -> u32 {
        self.twice
    }

    /// `K = ℓ + 1/2`, the number of spatial variables `x_1 … x_K`.
    pub fn k(self) -> u32 {
        self.twice.div_ceil(2)
    }

    /// `ℓ − 1/2`.
    pub fn k_minus_one(self) -> u32 {
        (self.twice - 1) / 2
    }

    /// Number of generators: `M, D, H, C` and `P^(1) … P^(2ℓ+1)`.
    pub fn generator_count(self) -> usize {
        self.twice as usize + 5
    }

    pub fn as_rat(self) -> Rat {
        rat(self.twice as i64, 2)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/2", self.twice)
    }
}

impl FromStr for HalfInt {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidHalfInt(s.to_string());
        let (n, d) = s.trim().split_once('/').ok_or_else(bad)?;
        if d.trim() != "2" {
            return Err(bad());
        }
        let n: u32 = n.trim().parse().map_err(|_| bad())?;
        HalfInt::from_twice(n).map_err(|_| bad())
    }
}

impl TryFrom<String> for HalfInt {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<HalfInt> for String {
    fn from(h: HalfInt) -> String {
        h.to_string()
    }
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// `n!/(k!(n−k)!)` for `0 ≤ k ≤ n`, zero otherwise.
pub fn binomial(n: u32, k: i64) -> BigInt {
    if k < 0 || k > n as i64 {
        return BigInt::zero();
    }
    let k = k as u32;
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Structure constant `I_m = (−1)^{m+ℓ+1/2} (2ℓ−m)! m!` for `0 ≤ m ≤ 2ℓ`.
pub fn structure_constant_i(m: i64, ell: HalfInt) -> Result<Rat> {
    let l2 = ell.twice() as i64;
    if m < 0 || m > l2 {
        return Err(Error::IndexOutOfRange {
            what: "I_m",
            index: m,
            lo: 0,
            hi: l2,
        });
    }
    let m = m as u32;
    let mag = factorial(ell.twice() - m) * factorial(m);
    let sign_exp = m + ell.k();
    let v = if sign_exp.is_even() { mag } else { -mag };
    Ok(Rat::from_integer(v))
}

/// `a_ℓ = ((ℓ−1/2)!)²`.
pub fn a_ell(ell: HalfInt) -> Rat {
    let f = factorial(ell.k_minus_one());
    Rat::from_integer(&f * &f)
}

/// `b_ℓ = ((ℓ+1/2)!)²`.
pub fn b_ell(ell: HalfInt) -> Rat {
    let f = factorial(ell.k());
    Rat::from_integer(&f * &f)
}

/// `λ_k = 2ℓ+1−k` for `1 ≤ k ≤ 2ℓ`.
pub fn lambda_k(k: i64, ell: HalfInt) -> Result<Rat> {
    let l2 = ell.twice() as i64;
    if k < 1 || k > l2 {
        return Err(Error::IndexOutOfRange {
            what: "lambda_k",
            index: k,
            lo: 1,
            hi: l2,
        });
    }
    Ok(rat_int(l2 + 1 - k))
}

/// Renders a rational the way the text and JSON forms expect (`p/q`, `q` omitted when 1).
pub fn rat_text(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
