//! Exact rationals, points of the projective line over the rationals, and
//! p-adic orders.
//!
//! Everything downstream works in "ν units": a valuation-valued quantity is
//! kept as an exact rational and only multiplied by `log p` (or `log Nv`)
//! when a real number is asked for at the output boundary.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always in lowest terms with positive
/// denominator.
pub type Rat = BigRational;

/// Shorthand constructor for small rationals.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Parses `"n/d"` or `"n"`; the result is reduced.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let t = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match t.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(Rat::new(n, d))
        }
        None => Ok(Rat::from_integer(BigInt::from_str(t).map_err(|_| bad())?)),
    }
}

/// `"n/d"`, or `"n"` when the denominator is one.
pub fn format_rat(q: &Rat) -> String {
    q.to_string()
}

pub fn rat_to_f64(q: &Rat) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// Serde adapter that writes rationals as strings.
pub mod rat_str {
    use super::*;

    pub fn serialize<S: Serializer>(q: &Rat, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rat(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rat, D::Error> {
        let s = String::deserialize(d)?;
        parse_rat(&s).map_err(serde::de::Error::custom)
    }
}

/// A point of P¹(ℚ).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ProjRat {
    Finite(Rat),
    Infinity,
}

impl ProjRat {
    pub fn finite(&self) -> Option<&Rat> {
        match self {
            ProjRat::Finite(q) => Some(q),
            ProjRat::Infinity => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ProjRat::Infinity)
    }
}

impl From<Rat> for ProjRat {
    fn from(q: Rat) -> Self {
        ProjRat::Finite(q)
    }
}

impl fmt::Display for ProjRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProjRat::Finite(q) => write!(f, "{q}"),
            ProjRat::Infinity => f.write_str("inf"),
        }
    }
}

impl FromStr for ProjRat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.trim().eq_ignore_ascii_case("inf") {
            Ok(ProjRat::Infinity)
        } else {
            parse_rat(s).map(ProjRat::Finite)
        }
    }
}

impl Serialize for ProjRat {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ProjRat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A p-adic order: an integer, or +∞ for zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Order {
    Finite(i64),
    Infinite,
}

impl Order {
    pub fn finite(self) -> Option<i64> {
        match self {
            Order::Finite(n) => Some(n),
            Order::Infinite => None,
        }
    }

    /// `min(self, cap)`, always finite.
    pub fn min_with(self, cap: i64) -> i64 {
        match self {
            Order::Finite(n) => n.min(cap),
            Order::Infinite => cap,
        }
    }
}

impl PartialOrd for Order {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Order {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Order::Finite(a), Order::Finite(b)) => a.cmp(b),
            (Order::Finite(_), Order::Infinite) => Ordering::Less,
            (Order::Infinite, Order::Finite(_)) => Ordering::Greater,
            (Order::Infinite, Order::Infinite) => Ordering::Equal,
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(n) => write!(f, "{n}"),
            Order::Infinite => f.write_str("inf"),
        }
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// A rational prime, the normalized discrete valuation ν_p on ℚ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(Prime(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    pub fn get(self) -> u64 {
        self.0
    }

    pub fn is_odd(self) -> bool {
        self.0 != 2
    }

    /// Rejects p = 2 for the curve operations.
    pub fn require_odd(self) -> Result<Self> {
        if self.is_odd() {
            Ok(self)
        } else {
            Err(Error::CharacteristicTwo)
        }
    }

    /// Exponent of p in a nonzero integer.
    pub fn ord_int(self, n: &BigInt) -> u64 {
        debug_assert!(!n.is_zero());
        let p = BigInt::from(self.0);
        let mut n = n.abs();
        let mut k = 0;
        loop {
            let (q, r) = n.div_rem(&p);
            if !r.is_zero() {
                return k;
            }
            n = q;
            k += 1;
        }
    }

    pub fn val(self, q: &Rat) -> Order {
        if q.is_zero() {
            Order::Infinite
        } else {
            Order::Finite(self.ord_int(q.numer()) as i64 - self.ord_int(q.denom()) as i64)
        }
    }

    /// Class of `q` in ℤ/p^n, for `q` in the valuation ring ℤ_(p). `None` when
    /// `q` is not p-integral.
    pub fn residue(self, q: &Rat, n: u32) -> Option<BigInt> {
        let p = BigInt::from(self.0);
        if q.denom().is_multiple_of(&p) {
            return None;
        }
        let modulus = num_traits::pow(p, n as usize);
        if modulus.is_one() {
            return Some(BigInt::zero());
        }
        let inv = mod_inverse(q.denom(), &modulus)?;
        Some((q.numer() * inv).mod_floor(&modulus))
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

/// p-adic order of `q`; +∞ iff `q = 0`.
pub fn val(q: &Rat, p: u64) -> Result<Order> {
    Ok(Prime::new(p)?.val(q))
}

/// `log|q|` in ν units, i.e. `−ν(q)`.
pub fn log_abs(q: &Rat, p: u64) -> Result<Rat> {
    match val(q, p)? {
        Order::Finite(n) => Ok(int(-n)),
        Order::Infinite => Err(Error::LogOfZero),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn val_examples() {
        assert_eq!(val(&rat(9, 2), 3).unwrap(), Order::Finite(2));
        assert_eq!(val(&int(3), 2).unwrap(), Order::Finite(0));
        assert_eq!(val(&int(0), 5).unwrap(), Order::Infinite);
        assert_eq!(val(&rat(5, 27), 3).unwrap(), Order::Finite(-3));
        assert_eq!(val(&int(7), 4), Err(Error::NotPrime(4)));
        assert_eq!(val(&int(7), 1), Err(Error::NotPrime(1)));
    }

    #[test]
    fn log_abs_examples() {
        assert_eq!(log_abs(&int(9), 3).unwrap(), int(-2));
        assert_eq!(log_abs(&rat(1, 3), 3).unwrap(), int(1));
        assert_eq!(log_abs(&int(5), 3).unwrap(), int(0));
        assert_eq!(log_abs(&int(0), 3), Err(Error::LogOfZero));
    }

    #[test]
    fn formatting() {
        assert_eq!(format_rat(&rat(6, -4)), "-3/2");
        assert_eq!(format_rat(&int(5)), "5");
        assert_eq!(parse_rat(" 10/4 ").unwrap(), rat(5, 2));
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
        assert_eq!("inf".parse::<ProjRat>().unwrap(), ProjRat::Infinity);
        assert_eq!(ProjRat::Infinity.to_string(), "inf");
    }

    #[test]
    fn residues() {
        let p = Prime::new(3).unwrap();
        assert_eq!(p.residue(&int(10), 2), Some(BigInt::from(1)));
        // 1/2 ≡ 5 mod 9
        assert_eq!(p.residue(&rat(1, 2), 2), Some(BigInt::from(5)));
        assert_eq!(p.residue(&rat(1, 3), 1), None);
        assert_eq!(p.residue(&int(-1), 1), Some(BigInt::from(2)));
    }

    #[test]
    fn order_compare() {
        assert!(Order::Finite(100) < Order::Infinite);
        assert_eq!(Order::Infinite.min_with(4), 4);
        assert_eq!(Order::Finite(1).min_with(4), 1);
    }

    fn small_rat() -> impl Strategy<Value = Rat> {
        (-2000i64..2000, 1i64..500).prop_map(|(n, d)| rat(n, d))
    }

    proptest! {
        #[test]
        fn parse_print_identity(q in small_rat()) {
            prop_assert_eq!(parse_rat(&format_rat(&q)).unwrap(), q);
        }

        #[test]
        fn val_is_multiplicative(a in small_rat(), b in small_rat()) {
            prop_assume!(!a.is_zero() && !b.is_zero());
            for p in [3u64, 5, 7, 11] {
                let pr = Prime::new(p).unwrap();
                let (va, vb) = (pr.val(&a).finite().unwrap(), pr.val(&b).finite().unwrap());
                prop_assert_eq!(pr.val(&(&a * &b)), Order::Finite(va + vb));
            }
        }
    }

    #[test]
    fn ultrametric_on_random_pairs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for p in [3u64, 5, 7, 11] {
            let pr = Prime::new(p).unwrap();
            for _ in 0..1000 {
                let x = rat(rng.gen_range(-5000..5000), rng.gen_range(1..300));
                let y = rat(rng.gen_range(-5000..5000), rng.gen_range(1..300));
                assert!(pr.val(&(&x + &y)) >= pr.val(&x).min(pr.val(&y)));
            }
        }
    }
}
