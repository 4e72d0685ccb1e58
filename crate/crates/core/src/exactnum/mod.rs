//! Exact scalars: arbitrary-precision rationals and elements of one real
//! quadratic field `Q(√D)`.
//!
//! Everything downstream (continued fractions, broken lines, forms) works on
//! [`QuadraticNumber`], which also embeds the rationals (`q = 0`). Values over
//! two different radicands never mix; the checked operations report
//! [`NumError::MixedRadicand`] and the operator impls panic.

mod matrix;
mod quadratic;

pub use matrix::{IntMatrix, Matrix2};
pub use quadratic::{floor_surd, QuadraticNumber};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::str::FromStr;

/// Arbitrary-precision rational; always kept in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

/// The scalar type used by all geometry.
pub type Scalar = QuadraticNumber;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NumError {
    #[error("operands live in different quadratic fields (√{0} and √{1})")]
    MixedRadicand(BigInt, BigInt),
    #[error("division by zero")]
    DivisionByZero,
    #[error("square root of a negative number")]
    NegativeRadicand,
    #[error("cannot parse scalar {0:?}")]
    Parse(String),
}

/// Sign of a nonzero quantity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn of(x: &Scalar) -> Option<Sign> {
        match x.signum() {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }

    pub fn as_i32(self) -> i32 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn to_scalar(self) -> Scalar {
        Scalar::from_integer(self.as_i32() as i64)
    }
}

impl std::ops::Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sign::Plus => write!(f, "+1"),
            Sign::Minus => write!(f, "-1"),
        }
    }
}

/// Parses `"p"` or `"p/q"` (optional surrounding whitespace and leading sign).
pub fn parse_rational(s: &str) -> Result<Rational, NumError> {
    let t = s.trim();
    let err = || NumError::Parse(s.to_string());
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let num = BigInt::from_str(num).map_err(|_| err())?;
    let den = BigInt::from_str(den).map_err(|_| err())?;
    if den.is_zero() {
        return Err(NumError::DivisionByZero);
    }
    Ok(Rational::new(num, den))
}

/// Formats a rational as `"p"` or `"p/q"`.
pub fn format_rational(x: &Rational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Splits `n > 0` as `s² · d` with `d` squarefree, by trial division.
pub fn squarefree_split(n: &BigInt) -> (BigInt, BigInt) {
    debug_assert!(n.is_positive());
    let mut rest = n.clone();
    let mut square = BigInt::one();
    let mut core = BigInt::one();
    let mut p = BigInt::from(2u32);
    while &p * &p <= rest {
        let mut e = 0u32;
        while (&rest % &p).is_zero() {
            rest /= &p;
            e += 1;
        }
        if e > 0 {
            square *= p.pow(e / 2);
            if e % 2 == 1 {
                core *= &p;
            }
        }
        p += if p == BigInt::from(2u32) { 1u32 } else { 2u32 };
    }
    core *= rest;
    (square, core)
}

/// `Some(s)` with `s² = n` when `n ≥ 0` is a perfect square.
pub fn exact_isqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let s = n.sqrt();
    (&s * &s == *n).then_some(s)
}

/// True when the rational is the square of a rational.
pub fn is_rational_square(x: &Rational) -> bool {
    !x.is_negative() && exact_isqrt(x.numer()).is_some() && exact_isqrt(x.denom()).is_some()
}

pub(crate) fn lcm_of_denominators<'a>(xs: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    xs.into_iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

/// Common radicand of a collection of scalars: `Ok(None)` if all are rational.
pub fn common_radicand<'a>(
    xs: impl IntoIterator<Item = &'a Scalar>,
) -> Result<Option<BigInt>, NumError> {
    let mut found: Option<BigInt> = None;
    for x in xs {
        if let Some(d) = x.radicand() {
            match &found {
                None => found = Some(d.clone()),
                Some(e) if e != d => return Err(NumError::MixedRadicand(e.clone(), d.clone())),
                _ => {}
            }
        }
    }
    Ok(found)
}

/// Decimal rendering to `digits` fractional digits, truncated toward zero and
/// marked with `≈` unless exact. Display only.
pub fn decimal(x: &Scalar, digits: u32) -> String {
    let scale = BigInt::from(10u32).pow(digits);
    let scaled = &x.abs() * &Scalar::from_bigint(scale.clone());
    let truncated = scaled.floor();
    let exact = scaled == Scalar::from_bigint(truncated.clone());
    let (int_part, frac_part) = truncated.div_rem(&scale);
    let sign = if x.signum() < 0 { "-" } else { "" };
    let body = if digits == 0 {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{:0>width$}", frac_part.to_string(), width = digits as usize)
    };
    if exact {
        body
    } else {
        format!("≈{body}")
    }
}
