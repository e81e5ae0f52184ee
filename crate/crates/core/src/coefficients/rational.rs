use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::PRIME;

/// Exact rational number with 5-adic bookkeeping.
///
/// The value is always kept in lowest terms with a positive denominator, so
/// structural equality is numeric equality.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct LocalRational(BigRational);

/// Exponent of `p` dividing a nonzero integer.
pub fn int_valuation(n: &BigInt, p: u64) -> u32 {
    debug_assert!(!n.is_zero());
    let p = BigInt::from(p);
    let mut n = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

impl LocalRational {
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Self> {
        let den = den.into();
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(LocalRational(BigRational::new(num.into(), den)))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        LocalRational(BigRational::from_integer(n.into()))
    }

    pub fn from_ratio(r: BigRational) -> Self {
        LocalRational(r)
    }

    pub fn zero() -> Self {
        LocalRational(BigRational::zero())
    }

    pub fn one() -> Self {
        LocalRational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn as_ratio(&self) -> &BigRational {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    /// `v_5(numerator) - v_5(denominator)`; `None` for zero.
    pub fn valuation(&self) -> Option<i64> {
        if self.is_zero() {
            return None;
        }
        let vn = int_valuation(self.numer(), PRIME) as i64;
        let vd = int_valuation(self.denom(), PRIME) as i64;
        Some(vn - vd)
    }

    pub fn is_5_integral(&self) -> bool {
        !self.denom().is_multiple_of(&BigInt::from(PRIME))
    }

    /// A 5-adic unit: nonzero with valuation zero.
    pub fn is_5_unit(&self) -> bool {
        self.valuation() == Some(0)
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(LocalRational(self.0.recip()))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = LocalRational::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Residue modulo `modulus` (a power of 5) in `0..modulus`; requires 5-integrality.
    pub fn residue(&self, modulus: &BigInt) -> Result<BigInt> {
        if !self.is_5_integral() {
            return Err(Error::NotIntegral(self.to_string()));
        }
        let den_inv = mod_inverse(&self.denom().mod_floor(modulus), modulus)
            .ok_or_else(|| Error::NotIntegral(self.to_string()))?;
        Ok((self.numer() * den_inv).mod_floor(modulus))
    }

    /// Residue modulo a machine-sized prime power.
    pub fn residue_u64(&self, modulus: u64) -> Result<u64> {
        let r = self.residue(&BigInt::from(modulus))?;
        Ok(r.to_u64().expect("residue fits modulus"))
    }

    pub fn signum(&self) -> i32 {
        if self.0.is_positive() {
            1
        } else if self.0.is_negative() {
            -1
        } else {
            0
        }
    }
}

pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let g = a.extended_gcd(m);
    if !g.gcd.is_one() {
        return None;
    }
    Some(g.x.mod_floor(m))
}

impl fmt::Display for LocalRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for LocalRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for LocalRational {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for LocalRational {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl std::str::FromStr for LocalRational {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let parse = |t: &str| {
            t.trim()
                .parse::<BigInt>()
                .map_err(|_| Error::Parse(format!("bad rational '{s}'")))
        };
        match s.split_once('/') {
            Some((n, d)) => LocalRational::new(parse(n)?, parse(d)?),
            None => Ok(LocalRational::from_integer(parse(s)?)),
        }
    }
}

impl From<i64> for LocalRational {
    fn from(n: i64) -> Self {
        LocalRational::from_integer(n)
    }
}

impl From<BigInt> for LocalRational {
    fn from(n: BigInt) -> Self {
        LocalRational::from_integer(n)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident) => {
        impl<'a> $tr<&'a LocalRational> for &'a LocalRational {
            type Output = LocalRational;
            fn $m(self, rhs: &'a LocalRational) -> LocalRational {
                LocalRational((&self.0).$m(&rhs.0))
            }
        }
        impl $tr for LocalRational {
            type Output = LocalRational;
            fn $m(self, rhs: LocalRational) -> LocalRational {
                LocalRational(self.0.$m(rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl<'a> Div<&'a LocalRational> for &'a LocalRational {
    type Output = LocalRational;
    fn div(self, rhs: &'a LocalRational) -> LocalRational {
        assert!(!rhs.is_zero(), "division by zero");
        LocalRational(&self.0 / &rhs.0)
    }
}

impl Neg for LocalRational {
    type Output = LocalRational;
    fn neg(self) -> LocalRational {
        LocalRational(-self.0)
    }
}

impl Neg for &LocalRational {
    type Output = LocalRational;
    fn neg(self) -> LocalRational {
        LocalRational(-&self.0)
    }
}

impl AddAssign<&LocalRational> for LocalRational {
    fn add_assign(&mut self, rhs: &LocalRational) {
        self.0 += &rhs.0;
    }
}

impl SubAssign<&LocalRational> for LocalRational {
    fn sub_assign(&mut self, rhs: &LocalRational) {
        self.0 -= &rhs.0;
    }
}

impl MulAssign<&LocalRational> for LocalRational {
    fn mul_assign(&mut self, rhs: &LocalRational) {
        self.0 *= &rhs.0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> LocalRational {
        LocalRational::new(n, d).unwrap()
    }

    #[test]
    fn reduce_examples() {
        assert_eq!(q(10, 5), LocalRational::from(2));
        let x = q(3, 10);
        assert_eq!(x.to_string(), "3/10");
        assert!(!x.is_5_integral());
        assert_eq!(x.valuation(), Some(-1));
        let y = q(75, 15);
        assert_eq!(y, LocalRational::from(5));
        assert_eq!(y.valuation(), Some(1));
    }

    #[test]
    fn zero_denominator_is_an_error() {
        assert!(matches!(LocalRational::new(1, 0), Err(Error::ZeroDenominator)));
    }

    #[test]
    fn sign_lives_in_numerator() {
        let x = q(3, -6);
        assert_eq!(x.numer(), &BigInt::from(-1));
        assert_eq!(x.denom(), &BigInt::from(2));
    }

    #[test]
    fn residues() {
        assert_eq!(q(1, 2).residue_u64(5).unwrap(), 3);
        assert_eq!(q(-1, 1).residue_u64(25).unwrap(), 24);
        assert!(q(1, 5).residue_u64(5).is_err());
    }

    #[test]
    fn parse_roundtrip() {
        for s in ["-7/200", "0", "15"] {
            let x: LocalRational = s.parse().unwrap();
            assert_eq!(x.to_string(), s);
        }
    }

    proptest::proptest! {
        #[test]
        fn integrality_matches_valuation(n in -2000i64..2000, d in 1i64..2000) {
            let x = q(n, d);
            if !x.is_zero() {
                let v5d = int_valuation(x.denom(), 5);
                proptest::prop_assert_eq!(x.is_5_integral(), v5d == 0);
                proptest::prop_assert_eq!(x.is_5_integral(), x.valuation().unwrap() >= 0 || v5d == 0);
            }
        }

        #[test]
        fn closed_under_unit_division(a in -500i64..500, b in 1i64..500, u in 1i64..100) {
            let x = q(a, b);
            let unit = q(5 * u + 1, 1);
            let y = &x / &unit;
            proptest::prop_assert_eq!(y.is_5_integral(), x.is_5_integral());
            proptest::prop_assert_eq!(&(&y * &unit), &x);
            let s = &x + &unit;
            proptest::prop_assert_eq!(s.is_5_integral(), x.is_5_integral());
        }
    }
}
