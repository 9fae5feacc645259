//! Exact field scalars: arbitrary-precision rationals and residues modulo a prime.
//!
//! Arithmetic between scalars of different fields is a programming error and
//! panics; values crossing an API boundary are validated with [`Field::check`]
//! and friends so that mixed inputs surface as [`Error::FieldMismatch`].

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Field tag. Serializes as `"Q"` or `{"Fp": p}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "FieldRepr", into = "FieldRepr")]
pub enum Field {
    Rational,
    Prime(u64),
}

#[derive(Serialize, Deserialize)]
enum FieldRepr {
    Q,
    Fp(u64),
}

impl TryFrom<FieldRepr> for Field {
    type Error = Error;
    fn try_from(r: FieldRepr) -> Result<Self> {
        match r {
            FieldRepr::Q => Ok(Field::Rational),
            FieldRepr::Fp(p) => Field::prime(p),
        }
    }
}

impl From<Field> for FieldRepr {
    fn from(f: Field) -> Self {
        match f {
            Field::Rational => FieldRepr::Q,
            Field::Prime(p) => FieldRepr::Fp(p),
        }
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl Field {
    /// Prime field `F_p`; `p` must be an odd prime `>= 5` and below `2^31`.
    pub fn prime(p: u64) -> Result<Field> {
        if !(5..1 << 31).contains(&p) || !is_prime(p) {
            return Err(Error::InvalidPrime(p));
        }
        Ok(Field::Prime(p))
    }

    pub fn modulus(self) -> Option<u64> {
        match self {
            Field::Rational => None,
            Field::Prime(p) => Some(p),
        }
    }

    pub fn zero(self) -> FieldScalar {
        self.from_i64(0)
    }

    pub fn one(self) -> FieldScalar {
        self.from_i64(1)
    }

    pub fn from_i64(self, n: i64) -> FieldScalar {
        match self {
            Field::Rational => FieldScalar::Rational(BigRational::from_integer(n.into())),
            Field::Prime(p) => FieldScalar::Prime {
                residue: n.rem_euclid(p as i64) as u64,
                modulus: p,
            },
        }
    }

    pub fn from_bigint(self, n: &BigInt) -> FieldScalar {
        match self {
            Field::Rational => FieldScalar::Rational(BigRational::from_integer(n.clone())),
            Field::Prime(p) => {
                let r = n.mod_floor(&BigInt::from(p));
                FieldScalar::Prime {
                    residue: r.to_u64().expect("residue fits"),
                    modulus: p,
                }
            }
        }
    }

    /// Maps a rational into this field. Fails over `F_p` when `p` divides the denominator.
    pub fn from_rational(self, q: &BigRational) -> Result<FieldScalar> {
        match self {
            Field::Rational => Ok(FieldScalar::Rational(q.clone())),
            Field::Prime(_) => {
                let num = self.from_bigint(q.numer());
                let den = self.from_bigint(q.denom());
                let inv = den.inv().ok_or(Error::BadPrime {
                    p: self.modulus().unwrap(),
                })?;
                Ok(num * inv)
            }
        }
    }

    /// Fails with [`Error::FieldMismatch`] unless `x` belongs to this field.
    pub fn check(self, x: &FieldScalar) -> Result<()> {
        if x.field() == self {
            Ok(())
        } else {
            Err(Error::FieldMismatch(format!(
                "expected {self}, found {}",
                x.field()
            )))
        }
    }

    /// Parses a decimal string: `"n"` or `"n/d"` over Q, `"n"` over `F_p`.
    pub fn parse_scalar(self, s: &str) -> Result<FieldScalar> {
        let s = s.trim();
        let bad = |m: &str| Error::parse("scalar", format!("{m}: {s:?}"));
        match self {
            Field::Rational => {
                let q = if let Some((n, d)) = s.split_once('/') {
                    let n = BigInt::from_str(n.trim()).map_err(|_| bad("bad numerator"))?;
                    let d = BigInt::from_str(d.trim()).map_err(|_| bad("bad denominator"))?;
                    if d.is_zero() {
                        return Err(bad("zero denominator"));
                    }
                    BigRational::new(n, d)
                } else {
                    BigRational::from_integer(BigInt::from_str(s).map_err(|_| bad("bad integer"))?)
                };
                Ok(FieldScalar::Rational(q))
            }
            Field::Prime(_) => {
                if s.contains('/') {
                    return Err(bad("fractions are not allowed over F_p"));
                }
                let n = BigInt::from_str(s).map_err(|_| bad("bad integer"))?;
                Ok(self.from_bigint(&n))
            }
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Prime(p) => write!(f, "F_{p}"),
        }
    }
}

/// An element of Q or of `F_p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FieldScalar {
    Rational(BigRational),
    Prime { residue: u64, modulus: u64 },
}

fn mismatch(a: &FieldScalar, b: &FieldScalar) -> ! {
    panic!("field mismatch: {} vs {}", a.field(), b.field())
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

impl FieldScalar {
    pub fn field(&self) -> Field {
        match self {
            FieldScalar::Rational(_) => Field::Rational,
            FieldScalar::Prime { modulus, .. } => Field::Prime(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldScalar::Rational(q) => q.is_zero(),
            FieldScalar::Prime { residue, .. } => *residue == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            FieldScalar::Rational(q) => q.is_one(),
            FieldScalar::Prime { residue, .. } => *residue == 1,
        }
    }

    pub fn inv(&self) -> Option<FieldScalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            FieldScalar::Rational(q) => FieldScalar::Rational(q.recip()),
            FieldScalar::Prime { residue, modulus } => FieldScalar::Prime {
                residue: pow_mod(*residue, modulus - 2, *modulus),
                modulus: *modulus,
            },
        })
    }

    pub fn pow(&self, mut e: u32) -> FieldScalar {
        let mut base = self.clone();
        let mut acc = self.field().one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            FieldScalar::Rational(q) => Some(q),
            FieldScalar::Prime { .. } => None,
        }
    }

    /// Residue in `[0, p)` for prime-field elements.
    pub fn residue(&self) -> Option<u64> {
        match self {
            FieldScalar::Prime { residue, .. } => Some(*residue),
            FieldScalar::Rational(_) => None,
        }
    }

    /// Integer value, if this is a rational with denominator 1.
    pub fn to_integer(&self) -> Option<BigInt> {
        match self {
            FieldScalar::Rational(q) if q.is_integer() => Some(q.numer().clone()),
            _ => None,
        }
    }

    /// Sign used by normalization: `-1`, `0` or `1` over Q; `0` or `1` over `F_p`.
    pub fn signum(&self) -> i32 {
        match self {
            FieldScalar::Rational(q) => {
                if q.is_positive() {
                    1
                } else if q.is_negative() {
                    -1
                } else {
                    0
                }
            }
            FieldScalar::Prime { residue, .. } => (*residue != 0) as i32,
        }
    }

    fn add_ref(&self, o: &FieldScalar) -> FieldScalar {
        match (self, o) {
            (FieldScalar::Rational(a), FieldScalar::Rational(b)) => FieldScalar::Rational(a + b),
            (
                FieldScalar::Prime { residue: a, modulus: p },
                FieldScalar::Prime { residue: b, modulus: q },
            ) if p == q => FieldScalar::Prime {
                residue: (a + b) % p,
                modulus: *p,
            },
            _ => mismatch(self, o),
        }
    }

    fn sub_ref(&self, o: &FieldScalar) -> FieldScalar {
        match (self, o) {
            (FieldScalar::Rational(a), FieldScalar::Rational(b)) => FieldScalar::Rational(a - b),
            (
                FieldScalar::Prime { residue: a, modulus: p },
                FieldScalar::Prime { residue: b, modulus: q },
            ) if p == q => FieldScalar::Prime {
                residue: (a + p - b) % p,
                modulus: *p,
            },
            _ => mismatch(self, o),
        }
    }

    fn mul_ref(&self, o: &FieldScalar) -> FieldScalar {
        match (self, o) {
            (FieldScalar::Rational(a), FieldScalar::Rational(b)) => FieldScalar::Rational(a * b),
            (
                FieldScalar::Prime { residue: a, modulus: p },
                FieldScalar::Prime { residue: b, modulus: q },
            ) if p == q => FieldScalar::Prime {
                residue: a * b % p,
                modulus: *p,
            },
            _ => mismatch(self, o),
        }
    }

    fn neg_ref(&self) -> FieldScalar {
        match self {
            FieldScalar::Rational(a) => FieldScalar::Rational(-a),
            FieldScalar::Prime { residue, modulus } => FieldScalar::Prime {
                residue: (modulus - residue) % modulus,
                modulus: *modulus,
            },
        }
    }
}

impl fmt::Display for FieldScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldScalar::Rational(q) => {
                if q.is_integer() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            FieldScalar::Prime { residue, .. } => write!(f, "{residue}"),
        }
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $inner:ident) => {
        impl $tr<&FieldScalar> for &FieldScalar {
            type Output = FieldScalar;
            fn $m(self, o: &FieldScalar) -> FieldScalar {
                self.$inner(o)
            }
        }
        impl $tr<FieldScalar> for FieldScalar {
            type Output = FieldScalar;
            fn $m(self, o: FieldScalar) -> FieldScalar {
                self.$inner(&o)
            }
        }
        impl $tr<&FieldScalar> for FieldScalar {
            type Output = FieldScalar;
            fn $m(self, o: &FieldScalar) -> FieldScalar {
                self.$inner(o)
            }
        }
        impl $tr<FieldScalar> for &FieldScalar {
            type Output = FieldScalar;
            fn $m(self, o: FieldScalar) -> FieldScalar {
                self.$inner(&o)
            }
        }
    };
}

binop!(Add, add, add_ref);
binop!(Sub, sub, sub_ref);
binop!(Mul, mul, mul_ref);

impl Div<&FieldScalar> for &FieldScalar {
    type Output = FieldScalar;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: &FieldScalar) -> FieldScalar {
        self * &o.inv().expect("division by zero")
    }
}

impl Div<FieldScalar> for FieldScalar {
    type Output = FieldScalar;
    fn div(self, o: FieldScalar) -> FieldScalar {
        &self / &o
    }
}

impl Neg for FieldScalar {
    type Output = FieldScalar;
    fn neg(self) -> FieldScalar {
        self.neg_ref()
    }
}

impl Neg for &FieldScalar {
    type Output = FieldScalar;
    fn neg(self) -> FieldScalar {
        self.neg_ref()
    }
}

impl AddAssign<&FieldScalar> for FieldScalar {
    fn add_assign(&mut self, o: &FieldScalar) {
        *self = self.add_ref(o);
    }
}

impl SubAssign<&FieldScalar> for FieldScalar {
    fn sub_assign(&mut self, o: &FieldScalar) {
        *self = self.sub_ref(o);
    }
}

impl MulAssign<&FieldScalar> for FieldScalar {
    fn mul_assign(&mut self, o: &FieldScalar) {
        *self = self.mul_ref(o);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_validation() {
        assert!(Field::prime(5).is_ok());
        assert!(Field::prime(101).is_ok());
        assert_eq!(Field::prime(3), Err(Error::InvalidPrime(3)));
        assert_eq!(Field::prime(2), Err(Error::InvalidPrime(2)));
        assert_eq!(Field::prime(9), Err(Error::InvalidPrime(9)));
    }

    #[test]
    fn rationals_are_reduced() {
        let q = Field::Rational.parse_scalar("6/-4").unwrap();
        assert_eq!(q.to_string(), "-3/2");
        let r = Field::Rational.parse_scalar("8/4").unwrap();
        assert_eq!(r.to_string(), "2");
    }

    #[test]
    fn prime_field_arithmetic() {
        let f = Field::prime(7).unwrap();
        let a = f.from_i64(3);
        let b = f.from_i64(-2);
        assert_eq!((&a + &b).residue(), Some(1));
        assert_eq!((&a * &b).residue(), Some(1));
        assert_eq!((&a * &a.inv().unwrap()).residue(), Some(1));
        assert_eq!(f.parse_scalar("-1").unwrap().residue(), Some(6));
        assert!(f.parse_scalar("1/2").is_err());
    }

    #[test]
    fn rational_into_prime_field() {
        let f = Field::prime(5).unwrap();
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(f.from_rational(&half).unwrap().residue(), Some(3));
        let fifth = BigRational::new(1.into(), 5.into());
        assert_eq!(f.from_rational(&fifth), Err(Error::BadPrime { p: 5 }));
    }

    #[test]
    #[should_panic(expected = "field mismatch")]
    fn mixing_fields_panics() {
        let _ = Field::Rational.one() + Field::prime(5).unwrap().one();
    }

    #[test]
    fn field_json() {
        assert_eq!(serde_json::to_string(&Field::Rational).unwrap(), "\"Q\"");
        assert_eq!(
            serde_json::to_string(&Field::Prime(101)).unwrap(),
            "{\"Fp\":101}"
        );
        let f: Field = serde_json::from_str("{\"Fp\":7}").unwrap();
        assert_eq!(f, Field::Prime(7));
        assert!(serde_json::from_str::<Field>("{\"Fp\":4}").is_err());
    }
}
