//! Exact scalars and the coefficient field.
//!
//! Every scalar is stored as a [`Scalar`], an exact rational with an `i64`
//! fast path that spills into a big rational on overflow. Arithmetic always
//! goes through a [`FieldConfig`]: over the rationals it is plain rational
//! arithmetic, over `GF(p)` the stored values are the canonical integer
//! representatives `0..p`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An exact rational number.
///
/// Invariant: the `Big` variant is only used when the value does not fit in
/// a `Rational64`, so structural equality is value equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Small(Rational64),
    Big(BigRational),
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Small(Rational64::zero())
    }

    pub fn one() -> Self {
        Scalar::Small(Rational64::one())
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::Small(Rational64::from_integer(n))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Small(r) => r.is_zero(),
            Scalar::Big(r) => r.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Small(r) => r.is_one(),
            Scalar::Big(r) => r.is_one(),
        }
    }

    /// The value as a small integer, if it is one.
    pub fn to_i64(&self) -> Option<i64> {
        match self {
            Scalar::Small(r) if r.is_integer() => Some(*r.numer()),
            _ => None,
        }
    }

    fn to_big(&self) -> BigRational {
        match self {
            Scalar::Small(r) => {
                BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
            }
            Scalar::Big(r) => r.clone(),
        }
    }

    fn from_big(r: BigRational) -> Self {
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(n), Some(d)) => Scalar::Small(Rational64::new_raw(n, d)),
            _ => Scalar::Big(r),
        }
    }

    fn combine(
        &self,
        other: &Self,
        small: impl Fn(&Rational64, &Rational64) -> Option<Rational64>,
        big: impl Fn(BigRational, BigRational) -> BigRational,
    ) -> Self {
        if let (Scalar::Small(a), Scalar::Small(b)) = (self, other) {
            if let Some(r) = small(a, b) {
                return Scalar::Small(r);
            }
        }
        Scalar::from_big(big(self.to_big(), other.to_big()))
    }

    fn rat_add(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a.checked_add(b), |a, b| a + b)
    }

    fn rat_sub(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a.checked_sub(b), |a, b| a - b)
    }

    fn rat_mul(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a.checked_mul(b), |a, b| a * b)
    }

    fn rat_div(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a.checked_div(b), |a, b| a / b)
    }

    fn rat_neg(&self) -> Self {
        match self {
            Scalar::Small(r) if *r.numer() != i64::MIN => Scalar::Small(-*r),
            _ => Scalar::from_big(-self.to_big()),
        }
    }

    fn numer_denom(&self) -> (BigInt, BigInt) {
        let b = self.to_big();
        (b.numer().clone(), b.denom().clone())
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Scalar::Small(r) => r.is_negative(),
            Scalar::Big(r) => r.is_negative(),
        }
    }
}

/// Renders as `p/q`, always with an explicit denominator.
impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (n, d) = self.numer_denom();
        write!(f, "{n}/{d}")
    }
}

impl FromStr for Scalar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parse = |t: &str| {
            t.trim()
                .parse::<BigInt>()
                .map_err(|_| Error::Parse(format!("invalid scalar {s:?}")))
        };
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (parse(n)?, parse(d)?),
            None => (parse(s)?, BigInt::one()),
        };
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        Ok(Scalar::from_big(BigRational::new(n, d)))
    }
}

/// The coefficient field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub enum FieldConfig {
    #[default]
    Rationals,
    PrimeField(u64),
}

/// Largest supported prime; products of two residues must fit in `u128`
/// comfortably and residues must fit in `i64`.
pub const MAX_PRIME: u64 = (1 << 31) - 1;

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl FieldConfig {
    /// `GF(p)`, rejecting non-primes.
    pub fn prime(p: u64) -> Result<Self> {
        if p > MAX_PRIME || !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not a supported prime")));
        }
        Ok(FieldConfig::PrimeField(p))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            FieldConfig::Rationals => 0,
            FieldConfig::PrimeField(p) => *p,
        }
    }

    /// Parses the command-line spelling: `q` or `fp:<p>`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("q") {
            return Ok(FieldConfig::Rationals);
        }
        match s.strip_prefix("fp:").or_else(|| s.strip_prefix("FP:")) {
            Some(p) => {
                let p = p
                    .parse::<u64>()
                    .map_err(|_| Error::InvalidField(format!("invalid prime in {s:?}")))?;
                FieldConfig::prime(p)
            }
            None => Err(Error::InvalidField(format!(
                "unknown field {s:?}; expected q or fp:<p>"
            ))),
        }
    }

    pub fn name(&self) -> String {
        match self {
            FieldConfig::Rationals => "q".to_string(),
            FieldConfig::PrimeField(p) => format!("fp:{p}"),
        }
    }

    fn residue(&self, s: &Scalar) -> u64 {
        match s {
            Scalar::Small(r) if r.is_integer() => *r.numer() as u64,
            _ => unreachable!("GF(p) scalars are always canonical residues"),
        }
    }

    fn from_residue(r: u64) -> Scalar {
        Scalar::from_int(r as i64)
    }

    /// Maps an arbitrary rational into the field. Fails over `GF(p)` when the
    /// denominator is divisible by `p`.
    pub fn element(&self, s: &Scalar) -> Result<Scalar> {
        match self {
            FieldConfig::Rationals => Ok(s.clone()),
            FieldConfig::PrimeField(p) => {
                let (n, d) = s.numer_denom();
                let pb = BigInt::from(*p);
                let reduce = |x: &BigInt| -> u64 {
                    let r = ((x % &pb) + &pb) % &pb;
                    r.to_u64().expect("residue fits")
                };
                let (n, d) = (reduce(&n), reduce(&d));
                if d == 0 {
                    return Err(Error::InvalidField(format!("{s} has no image in GF({p})")));
                }
                Ok(Self::from_residue(mul_mod(n, pow_mod(d, p - 2, *p), *p)))
            }
        }
    }

    pub fn from_int(&self, n: i64) -> Scalar {
        self.element(&Scalar::from_int(n))
            .expect("integers always map into the field")
    }

    pub fn zero(&self) -> Scalar {
        Scalar::zero()
    }

    pub fn one(&self) -> Scalar {
        Scalar::one()
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match self {
            FieldConfig::Rationals => a.rat_add(b),
            FieldConfig::PrimeField(p) => {
                Self::from_residue((self.residue(a) + self.residue(b)) % p)
            }
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match self {
            FieldConfig::Rationals => a.rat_sub(b),
            FieldConfig::PrimeField(p) => {
                Self::from_residue((self.residue(a) + p - self.residue(b)) % p)
            }
        }
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match self {
            FieldConfig::Rationals => a.rat_mul(b),
            FieldConfig::PrimeField(p) => {
                Self::from_residue(mul_mod(self.residue(a), self.residue(b), *p))
            }
        }
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match self {
            FieldConfig::Rationals => a.rat_neg(),
            FieldConfig::PrimeField(p) => Self::from_residue((p - self.residue(a)) % p),
        }
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(&self, a: &Scalar) -> Scalar {
        assert!(!a.is_zero(), "inverse of zero");
        match self {
            FieldConfig::Rationals => Scalar::one().rat_div(a),
            FieldConfig::PrimeField(p) => Self::from_residue(pow_mod(self.residue(a), p - 2, *p)),
        }
    }

    pub fn div(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.mul(a, &self.inv(b))
    }

    /// Lifts a field element to `{-1, 0, 1}` when it is one of those.
    pub fn as_sign(&self, a: &Scalar) -> Option<i8> {
        if a.is_zero() {
            return Some(0);
        }
        if a.is_one() {
            return Some(1);
        }
        if self.neg(a).is_one() {
            return Some(-1);
        }
        None
    }
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_arithmetic_promotes_on_overflow() {
        let q = FieldConfig::Rationals;
        let big = Scalar::from_int(i64::MAX);
        let sum = q.add(&big, &big);
        assert!(matches!(sum, Scalar::Big(_)));
        assert_eq!(q.sub(&sum, &big), big);
        assert!(matches!(q.sub(&sum, &big), Scalar::Small(_)));
    }

    #[test]
    fn rational_inverse_and_display() {
        let q = FieldConfig::Rationals;
        let third = q.inv(&Scalar::from_int(3));
        assert_eq!(third.to_string(), "1/3");
        assert_eq!(q.mul(&third, &Scalar::from_int(-6)).to_string(), "-2/1");
        assert_eq!("-2/4".parse::<Scalar>().unwrap().to_string(), "-1/2");
        assert_eq!("7".parse::<Scalar>().unwrap(), Scalar::from_int(7));
        assert!("1/0".parse::<Scalar>().is_err());
    }

    #[test]
    fn prime_field_arithmetic() {
        let f = FieldConfig::prime(7).unwrap();
        let three = f.from_int(3);
        assert_eq!(f.mul(&three, &f.inv(&three)), Scalar::one());
        assert_eq!(f.from_int(-1), Scalar::from_int(6));
        assert_eq!(f.as_sign(&f.from_int(-1)), Some(-1));
        assert_eq!(f.as_sign(&three), None);
        assert_eq!(
            f.element(&"1/2".parse().unwrap()).unwrap(),
            Scalar::from_int(4)
        );
    }

    #[test]
    fn gf2_sees_no_signs() {
        let f = FieldConfig::prime(2).unwrap();
        assert_eq!(f.from_int(-1), Scalar::one());
        assert_eq!(f.as_sign(&f.from_int(-1)), Some(1));
    }

    #[test]
    fn field_parsing() {
        assert_eq!(FieldConfig::parse("q").unwrap(), FieldConfig::Rationals);
        assert_eq!(
            FieldConfig::parse("fp:5").unwrap(),
            FieldConfig::PrimeField(5)
        );
        assert!(FieldConfig::parse("fp:6").is_err());
        assert!(FieldConfig::parse("fp:1").is_err());
        assert!(FieldConfig::parse("r").is_err());
    }
}
