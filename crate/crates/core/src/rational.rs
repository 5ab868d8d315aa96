//! Exact rationals with an inline `i64` fast path.
//!
//! Nearly every coefficient met in practice fits in a machine word, so the
//! small representation is tried first and arithmetic is carried out in
//! `i128`. Anything that does not fit is promoted to [`BigRational`], and
//! big results are demoted again whenever they shrink back into range.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone)]
pub enum Rational {
    /// `num / den` with `den > 0` and `gcd(num, den) == 1`.
    Small(i64, i64),
    Big(Box<BigRational>),
}

fn gcd_i128(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl Rational {
    pub const ZERO: Rational = Rational::Small(0, 1);
    pub const ONE: Rational = Rational::Small(1, 1);

    pub fn from_int(n: i64) -> Self {
        Rational::Small(n, 1)
    }

    /// Builds `num / den`, normalizing sign and common factors.
    ///
    /// Panics if `den == 0`.
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Self::from_i128(num as i128, den as i128)
    }

    fn from_i128(num: i128, den: i128) -> Self {
        debug_assert!(den != 0);
        let (mut n, mut d) = (num, den);
        if d < 0 {
            n = -n;
            d = -d;
        }
        let g = gcd_i128(n, d);
        if g > 1 {
            n /= g;
            d /= g;
        }
        if n == 0 {
            return Rational::ZERO;
        }
        match (i64::try_from(n), i64::try_from(d)) {
            (Ok(n), Ok(d)) => Rational::Small(n, d),
            _ => Rational::Big(Box::new(BigRational::new_raw(
                BigInt::from(n),
                BigInt::from(d),
            ))),
        }
    }

    fn from_big(r: BigRational) -> Self {
        // BigRational keeps itself reduced with a positive denominator.
        if let (Some(n), Some(d)) = (r.numer().to_i64(), r.denom().to_i64()) {
            return Rational::Small(n, d);
        }
        Rational::Big(Box::new(r))
    }

    fn to_big(&self) -> BigRational {
        match self {
            Rational::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Rational::Big(b) => (**b).clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Rational::Small(0, _))
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Rational::Small(1, 1))
    }

    pub fn is_integer(&self) -> bool {
        match self {
            Rational::Small(_, d) => *d == 1,
            Rational::Big(b) => b.is_integer(),
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Rational::Small(n, _) => *n < 0,
            Rational::Big(b) => b.is_negative(),
        }
    }

    /// Multiplicative inverse, or `None` for zero.
    pub fn recip(&self) -> Option<Rational> {
        match self {
            Rational::Small(0, _) => None,
            Rational::Small(n, d) => Some(Self::from_i128(*d as i128, *n as i128)),
            Rational::Big(b) => Some(Self::from_big(b.recip())),
        }
    }

    pub fn abs(&self) -> Rational {
        if self.is_negative() {
            -self.clone()
        } else {
            self.clone()
        }
    }
}

impl Default for Rational {
    fn default() -> Self {
        Rational::ZERO
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_int(n)
    }
}

impl PartialEq for Rational {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Rational::Small(a, b), Rational::Small(c, d)) => a == c && b == d,
            // Canonical forms never store a small value as Big.
            (Rational::Big(a), Rational::Big(b)) => a == b,
            _ => false,
        }
    }
}

impl Eq for Rational {}

impl std::hash::Hash for Rational {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        match self {
            Rational::Small(n, d) => {
                0u8.hash(state);
                n.hash(state);
                d.hash(state);
            }
            Rational::Big(b) => {
                1u8.hash(state);
                b.hash(state);
            }
        }
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Rational::Small(a, b), Rational::Small(c, d)) => {
                ((*a as i128) * (*d as i128)).cmp(&((*c as i128) * (*b as i128)))
            }
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl<'a> Add<&'a Rational> for &'a Rational {
    type Output = Rational;
    fn add(self, rhs: &Rational) -> Rational {
        match (self, rhs) {
            (Rational::Small(0, _), _) => rhs.clone(),
            (_, Rational::Small(0, _)) => self.clone(),
            (Rational::Small(a, b), Rational::Small(c, d)) => {
                let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
                if b == d {
                    Rational::from_i128(a + c, b)
                } else {
                    Rational::from_i128(a * d + c * b, b * d)
                }
            }
            _ => Rational::from_big(self.to_big() + rhs.to_big()),
        }
    }
}

impl<'a> Sub<&'a Rational> for &'a Rational {
    type Output = Rational;
    fn sub(self, rhs: &Rational) -> Rational {
        self + &(-rhs.clone())
    }
}

impl<'a> Mul<&'a Rational> for &'a Rational {
    type Output = Rational;
    fn mul(self, rhs: &Rational) -> Rational {
        match (self, rhs) {
            (Rational::Small(0, _), _) | (_, Rational::Small(0, _)) => Rational::ZERO,
            (Rational::Small(1, 1), _) => rhs.clone(),
            (_, Rational::Small(1, 1)) => self.clone(),
            (Rational::Small(a, b), Rational::Small(c, d)) => {
                Rational::from_i128(*a as i128 * *c as i128, *b as i128 * *d as i128)
            }
            _ => Rational::from_big(self.to_big() * rhs.to_big()),
        }
    }
}

impl<'a> Div<&'a Rational> for &'a Rational {
    type Output = Rational;
    /// Panics on division by zero.
    fn div(self, rhs: &Rational) -> Rational {
        let inv = rhs.recip().expect("division by zero rational");
        self * &inv
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Rational> for Rational {
            type Output = Rational;
            fn $m(self, rhs: Rational) -> Rational {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        *self = &*self + rhs;
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        match self {
            Rational::Small(n, d) => match n.checked_neg() {
                Some(m) => Rational::Small(m, d),
                None => Rational::from_i128(-(n as i128), d as i128),
            },
            Rational::Big(b) => Rational::from_big(-*b),
        }
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rational::Small(n, 1) => write!(f, "{n}"),
            Rational::Small(n, d) => write!(f, "{n}/{d}"),
            Rational::Big(b) => {
                if b.is_integer() {
                    write!(f, "{}", b.numer())
                } else {
                    write!(f, "{}/{}", b.numer(), b.denom())
                }
            }
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational literal `{0}`")]
pub struct ParseRationalError(pub String);

impl FromStr for Rational {
    type Err = ParseRationalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseRationalError(s.to_string());
        let t = s.trim();
        let (n, d) = match t.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (t, "1"),
        };
        let n: BigInt = n.parse().map_err(|_| err())?;
        let d: BigInt = d.parse().map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        Ok(Rational::from_big(BigRational::new(n, d)))
    }
}

impl One for Rational {
    fn one() -> Self {
        Rational::ONE
    }
}

impl Zero for Rational {
    fn zero() -> Self {
        Rational::ZERO
    }
    fn is_zero(&self) -> bool {
        Rational::is_zero(self)
    }
}

impl Rational {
    /// `self` as a `BigRational`; used by tests and the oracle-facing API.
    pub fn to_big_rational(&self) -> BigRational {
        self.to_big()
    }

    pub fn from_big_rational(r: BigRational) -> Self {
        Self::from_big(r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn big(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn normalizes_sign_and_gcd() {
        assert_eq!(Rational::new(2, -4), Rational::Small(-1, 2));
        assert_eq!(Rational::new(0, -7), Rational::ZERO);
        assert_eq!("6/4".parse::<Rational>().unwrap(), Rational::new(3, 2));
        assert_eq!(Rational::new(-3, 1).to_string(), "-3");
    }

    #[test]
    fn overflow_promotes_and_demotes() {
        let a = Rational::from_int(i64::MAX);
        let b = &a * &a;
        assert!(matches!(b, Rational::Big(_)));
        let back = &b / &a;
        assert_eq!(back, a);
        assert!(matches!(back, Rational::Small(..)));
        assert_eq!(-Rational::from_int(i64::MIN), {
            let r: Rational = "9223372036854775808".parse().unwrap();
            r
        });
    }

    #[test]
    fn rejects_bad_literals() {
        assert!("1/0".parse::<Rational>().is_err());
        assert!("abc".parse::<Rational>().is_err());
    }

    proptest! {
        #[test]
        fn agrees_with_bigrational(a in -1_000_000_000_000i64..1_000_000_000_000, b in 1i64..1_000_000_000,
                                   c in -1_000_000_000_000i64..1_000_000_000_000, d in 1i64..1_000_000_000) {
            let x = Rational::new(a, b);
            let y = Rational::new(c, d);
            prop_assert_eq!((&x + &y).to_big_rational(), big(a, b) + big(c, d));
            prop_assert_eq!((&x * &y).to_big_rational(), big(a, b) * big(c, d));
            prop_assert_eq!((&x - &y).to_big_rational(), big(a, b) - big(c, d));
            if c != 0 {
                prop_assert_eq!((&x / &y).to_big_rational(), big(a, b) / big(c, d));
            }
            prop_assert_eq!(x.cmp(&y), big(a, b).cmp(&big(c, d)));
        }
    }
}
