//! Exact rational scalars.
//!
//! Every geometric quantity in this crate is a `Scalar`: an arbitrary-precision
//! rational kept in lowest terms with a positive denominator. There is no
//! rounding anywhere in scalar arithmetic; the only floating-point site in the
//! whole workspace is the eigenvalue step of the Gram positivity check.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Arbitrary-precision rational number, always reduced, denominator > 0.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Scalar(BigRational);

impl Scalar {
    pub fn zero() -> Self {
        Scalar(BigRational::zero())
    }

    pub fn one() -> Self {
        Scalar(BigRational::one())
    }

    pub fn from_int(v: i64) -> Self {
        Scalar(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn from_bigint(v: BigInt) -> Self {
        Scalar(BigRational::from_integer(v))
    }

    /// `numer/denom`, reduced. `denom` must be nonzero.
    pub fn ratio(numer: i64, denom: i64) -> Self {
        assert!(denom != 0, "zero denominator");
        Scalar(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    pub fn from_big_ratio(numer: BigInt, denom: BigInt) -> Result<Self> {
        if denom.is_zero() {
            return Err(Error::input("zero denominator"));
        }
        Ok(Scalar(BigRational::new(numer, denom)))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn abs(&self) -> Self {
        Scalar(self.0.abs())
    }

    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "division by zero");
        Scalar(self.0.recip())
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Scalar::one();
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    pub fn min(self, other: Self) -> Self {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: Self) -> Self {
        if self >= other {
            self
        } else {
            other
        }
    }

    /// Approximate value, used only for display and the documented
    /// floating-point eigenvalue step.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn as_ratio(&self) -> &BigRational {
        &self.0
    }

    /// Exact square root if the scalar is a perfect rational square.
    pub fn sqrt_exact(&self) -> Option<Scalar> {
        if self.is_negative() {
            return None;
        }
        let n = int_sqrt_exact(self.numer().magnitude())?;
        let d = int_sqrt_exact(self.denom().magnitude())?;
        Some(Scalar(BigRational::new(BigInt::from(n), BigInt::from(d))))
    }

    /// Certified enclosure `lo <= sqrt(self) <= hi` with relative width
    /// `(hi - lo)/lo <= 10^-rel_digits` (for positive input).
    pub fn sqrt_enclosure(&self, rel_digits: u32) -> (Scalar, Scalar) {
        assert!(!self.is_negative(), "sqrt of negative scalar");
        if self.is_zero() {
            return (Scalar::zero(), Scalar::zero());
        }
        // sqrt(p/q) = sqrt(p*q)/q; scale so the integer sqrt carries enough digits.
        let p = self.numer().magnitude().clone();
        let q = self.denom().magnitude().clone();
        let pq = &p * &q;
        let mut shift: u32 = 2 * (rel_digits + 1);
        loop {
            let scaled = &pq * BigUint::from(10u32).pow(2 * shift);
            let root = scaled.sqrt();
            // root^2 <= scaled < (root+1)^2
            let denom = BigInt::from(&q * BigUint::from(10u32).pow(shift));
            let lo = Scalar(BigRational::new(BigInt::from(root.clone()), denom.clone()));
            let hi = Scalar(BigRational::new(BigInt::from(&root + 1u32), denom));
            // relative width is 1/root
            if root >= BigUint::from(10u32).pow(rel_digits) {
                return (lo, hi);
            }
            shift += rel_digits + 1;
        }
    }

    /// Decimal string with the given number of significant digits (round half
    /// away from zero). Presentation only.
    pub fn to_decimal(&self, sig_digits: usize) -> String {
        assert!(sig_digits > 0);
        if self.is_zero() {
            return "0".to_string();
        }
        let neg = self.is_negative();
        let p = self.numer().magnitude().clone();
        let q = self.denom().magnitude().clone();
        // exponent e: 10^e <= p/q < 10^(e+1)
        let mut e: i64 = p.to_string().len() as i64 - q.to_string().len() as i64;
        let ten = BigUint::from(10u32);
        let pow = |k: i64| -> (BigUint, BigUint) {
            // returns multipliers (np, nq) so that value*10^-k = p*np/(q*nq)
            if k >= 0 {
                (BigUint::one(), ten.pow(k as u32))
            } else {
                (ten.pow((-k) as u32), BigUint::one())
            }
        };
        let (np, nq) = pow(e);
        if &p * &np < &q * &nq {
            e -= 1;
        }
        // mantissa = round(p/q * 10^(sig-1-e))
        let k = sig_digits as i64 - 1 - e;
        let (np, nq) = pow(-k);
        let num = &p * np * 2u32;
        let den = &q * nq * 2u32;
        let mut mant = (&num + den.clone() / 2u32) / &den;
        let bound = ten.pow(sig_digits as u32);
        if mant >= bound {
            mant /= 10u32;
            e += 1;
        }
        let digits = mant.to_string();
        let mut s = String::new();
        if neg {
            s.push('-');
        }
        if e >= 0 && (e as usize) < sig_digits {
            let point = e as usize + 1;
            s.push_str(&digits[..point]);
            let frac = digits[point..].trim_end_matches('0');
            if !frac.is_empty() {
                s.push('.');
                s.push_str(frac);
            }
        } else if e < 0 && e >= -4 {
            s.push_str("0.");
            for _ in 0..(-e - 1) {
                s.push('0');
            }
            s.push_str(digits.trim_end_matches('0'));
        } else {
            s.push_str(&digits[..1]);
            let frac = digits[1..].trim_end_matches('0');
            if !frac.is_empty() {
                s.push('.');
                s.push_str(frac);
            }
            s.push('e');
            s.push_str(&e.to_string());
        }
        s
    }
}

fn int_sqrt_exact(v: &BigUint) -> Option<BigUint> {
    let r = v.sqrt();
    if &(&r * &r) == v {
        Some(r)
    } else {
        None
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Scalar {
    type Err = Error;

    /// Accepts `"p"` or `"p/q"` with optional sign on `p`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = |_| Error::Parse(format!("invalid rational literal {s:?}"));
        match s.split_once('/') {
            None => {
                let n = BigInt::from_str(s).map_err(bad)?;
                Ok(Scalar(BigRational::from_integer(n)))
            }
            Some((p, q)) => {
                let p = BigInt::from_str(p.trim()).map_err(bad)?;
                let q = BigInt::from_str(q.trim()).map_err(bad)?;
                if q.is_zero() {
                    return Err(Error::Parse(format!("zero denominator in {s:?}")));
                }
                Ok(Scalar(BigRational::new(p, q)))
            }
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        Scalar::from_str(&s).map_err(serde::de::Error::custom)
    }
}

impl From<i64> for Scalar {
    fn from(v: i64) -> Self {
        Scalar::from_int(v)
    }
}

impl From<BigRational> for Scalar {
    fn from(v: BigRational) -> Self {
        Scalar(v)
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                Scalar((self.0).$method(rhs.0))
            }
        }
        impl<'a> $trait<&'a Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'a Scalar) -> Scalar {
                Scalar((&self.0).$method(&rhs.0))
            }
        }
        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                Scalar((self.0).$method(&rhs.0))
            }
        }
        impl $trait<Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                Scalar((&self.0).$method(rhs.0))
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        self.0 += &rhs.0;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        self.0 -= &rhs.0;
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        self.0 *= &rhs.0;
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar(-self.0)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar(-&self.0)
    }
}

/// n! as a scalar.
pub fn factorial(n: usize) -> Scalar {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= BigInt::from(k);
    }
    Scalar::from_bigint(acc)
}

/// Binomial coefficient C(n, k) as a scalar.
pub fn binomial(n: usize, k: usize) -> Scalar {
    if k > n {
        return Scalar::zero();
    }
    let k = k.min(n - k);
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= BigInt::from(n - i);
        den *= BigInt::from(i + 1);
    }
    Scalar::from_bigint(num / den)
}

/// Rational approximation of pi, used only to scale ball approximants and in
/// the isoperimetric report. Relative error ~1e-15, well below the 1e-12
/// budget documented for ball normalization.
pub fn pi_approx() -> Scalar {
    Scalar::from_big_ratio(
        BigInt::from(314_159_265_358_979_3i64),
        BigInt::from(10i64.pow(15)),
    )
    .unwrap()
}

/// Certified rational bracket pi_lo < pi < pi_hi (width 1e-14).
pub fn pi_enclosure() -> (Scalar, Scalar) {
    (
        Scalar::from_big_ratio(BigInt::from(314_159_265_358_979_1i64), BigInt::from(10u64.pow(15) as i64))
            .unwrap(),
        Scalar::from_big_ratio(BigInt::from(314_159_265_358_979_4i64), BigInt::from(10u64.pow(15) as i64))
            .unwrap(),
    )
}

/// Sum of a slice of scalars (exact, order-independent).
pub fn sum<'a>(items: impl IntoIterator<Item = &'a Scalar>) -> Scalar {
    let mut acc = Scalar::zero();
    for it in items {
        acc += it;
    }
    acc
}

pub fn cmp_abs(a: &Scalar, b: &Scalar) -> Ordering {
    a.abs().cmp(&b.abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display_round_trip() {
        for s in ["0", "1", "-7", "3/4", "-22/7", "13717421013717421/109739369"] {
            let v: Scalar = s.parse().unwrap();
            assert_eq!(v.to_string(), s);
        }
        // reduction and sign normalization
        let v: Scalar = "4/-6".parse().unwrap();
        assert_eq!(v.to_string(), "-2/3");
    }

    #[test]
    fn arithmetic_is_exact() {
        let a = Scalar::ratio(1, 3);
        let b = Scalar::ratio(1, 6);
        assert_eq!(&a + &b, Scalar::ratio(1, 2));
        assert_eq!(&a - &b, Scalar::ratio(1, 6));
        assert_eq!(&a * &b, Scalar::ratio(1, 18));
        assert_eq!(&a / &b, Scalar::from_int(2));
    }

    #[test]
    fn decimal_printing() {
        assert_eq!(Scalar::ratio(1, 2).to_decimal(15), "0.5");
        assert_eq!(Scalar::ratio(1, 3).to_decimal(5), "0.33333");
        assert_eq!(Scalar::from_int(100).to_decimal(3), "100");
        assert_eq!(Scalar::ratio(-22, 7).to_decimal(6), "-3.14286");
        assert_eq!(Scalar::ratio(1, 100_000_000).to_decimal(3), "1e-8");
    }

    #[test]
    fn sqrt_exact_and_enclosure() {
        assert_eq!(
            Scalar::ratio(9, 4).sqrt_exact(),
            Some(Scalar::ratio(3, 2))
        );
        assert_eq!(Scalar::from_int(2).sqrt_exact(), None);
        let (lo, hi) = Scalar::from_int(2).sqrt_enclosure(15);
        assert!(&lo * &lo <= Scalar::from_int(2));
        assert!(&hi * &hi >= Scalar::from_int(2));
        let width = (&hi - &lo) / lo.clone();
        assert!(width <= Scalar::from_big_ratio(1.into(), BigInt::from(10u64.pow(15))).unwrap());
    }

    #[test]
    fn pi_constants_bracket() {
        let (lo, hi) = pi_enclosure();
        let approx = pi_approx();
        assert!(lo < approx && approx < hi);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(6, 3), Scalar::from_int(20));
        assert_eq!(binomial(4, 0), Scalar::from_int(1));
        assert_eq!(binomial(3, 5), Scalar::zero());
        assert_eq!(factorial(5), Scalar::from_int(120));
    }
}
