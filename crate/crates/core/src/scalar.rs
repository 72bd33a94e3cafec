//! Scalar abstraction shared by every solver and generator.
//!
//! All combinatorial code is written once against [`Scalar`]. Exact runs use
//! [`BigRational`](num_rational::BigRational); `f64`/`f32` are supported for
//! quick numerical sweeps, in which case comparisons against zero go through
//! [`Scalar::is_negligible`].

use std::cmp::Ordering;
use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Ordered field used for weights, masses, LP data and costs.
pub trait Scalar:
    Clone
    + Debug
    + Display
    + PartialOrd
    + Num
    + Signed
    + FromPrimitive
    + ToPrimitive
    + Sum
    + Send
    + Sync
    + 'static
{
    /// `true` when arithmetic is exact (comparisons need no tolerance).
    const EXACT: bool;

    fn from_rational(r: &BigRational) -> Self;

    /// Treat `self` as zero. Exact types test equality; floats use a tolerance.
    fn is_negligible(&self) -> bool;

    /// Text form used in instance and solution files.
    fn to_wire(&self) -> String;

    fn from_wire(text: &str) -> Result<Self>;

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_rational(&BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    fn from_count(n: usize) -> Self {
        <Self as FromPrimitive>::from_usize(n).expect("usize fits in every scalar")
    }

    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn from_rational(r: &BigRational) -> Self {
        r.clone()
    }

    fn is_negligible(&self) -> bool {
        self.is_zero()
    }

    fn to_wire(&self) -> String {
        format!("{}/{}", self.numer(), self.denom())
    }

    fn from_wire(text: &str) -> Result<Self> {
        parse_rational(text)
    }
}

macro_rules! float_scalar {
    ($t:ty, $tol:expr) => {
        impl Scalar for $t {
            const EXACT: bool = false;

            fn from_rational(r: &BigRational) -> Self {
                r.to_f64().unwrap_or(f64::NAN) as $t
            }

            fn is_negligible(&self) -> bool {
                self.abs() <= $tol
            }

            fn to_wire(&self) -> String {
                format!("{}", self)
            }

            fn from_wire(text: &str) -> Result<Self> {
                let text = text.trim();
                if text.contains('/') {
                    return Ok(Self::from_rational(&parse_rational(text)?));
                }
                text.parse::<$t>()
                    .map_err(|_| Error::Parse(format!("not a number: {text:?}")))
            }
        }
    };
}

float_scalar!(f64, 1e-9);
float_scalar!(f32, 1e-5);

/// Parse `"p/q"` or a bare integer `"p"`.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let text = text.trim();
    let bad = || Error::Parse(format!("not a rational: {text:?}"));
    match text.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(p, q))
        }
        None => Ok(BigRational::from_integer(text.parse().map_err(|_| bad())?)),
    }
}

/// Shorthand for an exact rational `num/den`.
pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Total order for scalars; incomparable values (NaN) compare equal.
pub fn cmp<T: Scalar>(a: &T, b: &T) -> Ordering {
    a.partial_cmp(b).unwrap_or(Ordering::Equal)
}

/// `a <= b`, up to the scalar's tolerance.
pub fn le<T: Scalar>(a: &T, b: &T) -> bool {
    a <= b || (a.clone() - b.clone()).is_negligible()
}

/// `a < b` by more than the scalar's tolerance.
pub fn lt<T: Scalar>(a: &T, b: &T) -> bool {
    !le(b, a)
}

/// `a == b`, up to the scalar's tolerance.
pub fn approx_eq<T: Scalar>(a: &T, b: &T) -> bool {
    (a.clone() - b.clone()).is_negligible()
}

pub fn sum<'a, T: Scalar, I: IntoIterator<Item = &'a T>>(items: I) -> T {
    items.into_iter().fold(T::zero(), |acc, x| acc + x.clone())
}

pub fn pow<T: Scalar>(base: &T, exp: usize) -> T {
    let mut out = T::one();
    for _ in 0..exp {
        out = out * base.clone();
    }
    out
}

pub fn min_of<T: Scalar>(a: T, b: T) -> T {
    if b < a {
        b
    } else {
        a
    }
}

pub(crate) fn is_one<T: Scalar>(x: &T) -> bool {
    approx_eq(x, &T::one())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_wire_form_is_canonical() {
        let x = ratio(6, 8);
        assert_eq!(x.to_wire(), "3/4");
        assert_eq!(BigRational::from_wire("3/4").unwrap(), x);
        assert_eq!(BigRational::from_wire("5").unwrap(), ratio(5, 1));
        assert_eq!(ratio(5, 1).to_wire(), "5/1");
        assert!(BigRational::from_wire("1/0").is_err());
        assert!(BigRational::from_wire("x").is_err());
    }

    #[test]
    fn float_accepts_fraction_text() {
        assert_eq!(f64::from_wire("1/4").unwrap(), 0.25);
        assert_eq!(f64::from_wire("0.5").unwrap(), 0.5);
    }

    #[test]
    fn tolerant_comparisons() {
        assert!(le(&1.0f64, &(1.0 - 1e-12)));
        assert!(!le(&ratio(1, 1), &ratio(999_999, 1_000_000)));
        assert!(lt(&ratio(1, 3), &ratio(1, 2)));
        assert_eq!(pow(&ratio(1, 2), 3), ratio(1, 8));
    }
}
