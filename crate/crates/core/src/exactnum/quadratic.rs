use super::{squarefree_split, NumError, Rational};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// A real number `(p + q·√D) / r`.
///
/// Canonical form: `r > 0`, `gcd(p, q, r) = 1`, and either `q = 0` (a
/// rational, stored with `D = 1`) or `D > 1` squarefree.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadraticNumber {
    p: BigInt,
    q: BigInt,
    r: BigInt,
    d: BigInt,
}

/// `floor((p + q·√d) / r)` for `r > 0`, exact. Requires `q = 0` or `q²·d`
/// not a perfect square.
pub fn floor_surd(p: &BigInt, q: &BigInt, r: &BigInt, d: &BigInt) -> BigInt {
    debug_assert!(r.is_positive());
    if q.is_zero() {
        return p.div_floor(r);
    }
    // q√d lies strictly between t and t + 1 (or −t − 1 and −t).
    let t = (q * q * d).sqrt();
    let n = if q.is_positive() { p + t } else { p - t - 1 };
    n.div_floor(r)
}

fn sign_of_surd(p: &BigInt, q: &BigInt, d: &BigInt) -> Ordering {
    let sp = p.sign();
    let sq = q.sign();
    use num_bigint::Sign::*;
    match (sp, sq) {
        (_, NoSign) => p.cmp(&BigInt::zero()),
        (NoSign, _) => q.cmp(&BigInt::zero()),
        (Plus, Plus) => Ordering::Greater,
        (Minus, Minus) => Ordering::Less,
        _ => {
            let pp = p * p;
            let qqd = q * q * d;
            let p_wins = pp > qqd;
            match (p_wins, sp) {
                (true, Plus) | (false, Minus) => Ordering::Greater,
                _ => Ordering::Less,
            }
        }
    }
}

impl QuadraticNumber {
    /// Builds `(p + q·√d) / r`, absorbing square factors of `d` into `q`.
    pub fn new(p: BigInt, q: BigInt, r: BigInt, d: BigInt) -> Result<Self, NumError> {
        if r.is_zero() {
            return Err(NumError::DivisionByZero);
        }
        if d.is_negative() {
            return Err(NumError::NegativeRadicand);
        }
        if d.is_zero() || q.is_zero() {
            return Ok(Self::canonical(p, BigInt::zero(), r, BigInt::one()));
        }
        let (s, core) = squarefree_split(&d);
        if core.is_one() {
            return Ok(Self::canonical(p + q * s, BigInt::zero(), r, BigInt::one()));
        }
        Ok(Self::canonical(p, q * s, r, core))
    }

    /// Assumes `d` is squarefree (> 1) or `q = 0`.
    fn canonical(mut p: BigInt, mut q: BigInt, mut r: BigInt, mut d: BigInt) -> Self {
        if r.is_negative() {
            p = -p;
            q = -q;
            r = -r;
        }
        if q.is_zero() {
            d = BigInt::one();
        }
        let g = p.gcd(&q).gcd(&r);
        if !g.is_one() && !g.is_zero() {
            p /= &g;
            q /= &g;
            r /= &g;
        }
        QuadraticNumber { p, q, r, d }
    }

    pub fn from_bigint(n: BigInt) -> Self {
        QuadraticNumber { p: n, q: BigInt::zero(), r: BigInt::one(), d: BigInt::one() }
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_bigint(BigInt::from(n))
    }

    pub fn from_ratio(n: i64, m: i64) -> Self {
        assert!(m != 0, "zero denominator");
        Self::canonical(n.into(), BigInt::zero(), m.into(), BigInt::one())
    }

    pub fn from_rational(x: &Rational) -> Self {
        Self::canonical(x.numer().clone(), BigInt::zero(), x.denom().clone(), BigInt::one())
    }

    /// `√x` for a non-negative rational `x = u/v`, written as `√(uv)/v`.
    pub fn sqrt_rational(x: &Rational) -> Result<Self, NumError> {
        if x.is_negative() {
            return Err(NumError::NegativeRadicand);
        }
        let uv = x.numer() * x.denom();
        Self::new(BigInt::zero(), BigInt::one(), x.denom().clone(), uv)
    }

    pub fn p(&self) -> &BigInt {
        &self.p
    }

    pub fn q(&self) -> &BigInt {
        &self.q
    }

    pub fn r(&self) -> &BigInt {
        &self.r
    }

    /// The squarefree radicand, or `None` for rationals.
    pub fn radicand(&self) -> Option<&BigInt> {
        (!self.q.is_zero()).then_some(&self.d)
    }

    pub fn is_rational(&self) -> bool {
        self.q.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.q.is_zero() && self.r.is_one()
    }

    pub fn to_rational(&self) -> Option<Rational> {
        self.is_rational().then(|| Rational::new(self.p.clone(), self.r.clone()))
    }

    pub fn to_bigint(&self) -> Option<BigInt> {
        self.is_integer().then(|| self.p.clone())
    }

    /// −1, 0 or 1.
    pub fn signum(&self) -> i32 {
        match sign_of_surd(&self.p, &self.q, &self.d) {
            Ordering::Less => -1,
            Ordering::Equal => 0,
            Ordering::Greater => 1,
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.signum() < 0
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    pub fn floor(&self) -> BigInt {
        floor_surd(&self.p, &self.q, &self.r, &self.d)
    }

    pub fn ceil(&self) -> BigInt {
        -(-self).floor()
    }

    pub fn conjugate(&self) -> Self {
        QuadraticNumber { p: self.p.clone(), q: -&self.q, r: self.r.clone(), d: self.d.clone() }
    }

    /// Field norm `x · conj(x)`, a rational.
    pub fn norm(&self) -> Rational {
        let num = &self.p * &self.p - &self.q * &self.q * &self.d;
        Rational::new(num, &self.r * &self.r)
    }

    fn joint_radicand(&self, other: &Self) -> Result<BigInt, NumError> {
        match (self.q.is_zero(), other.q.is_zero()) {
            (true, _) => Ok(other.d.clone()),
            (_, true) => Ok(self.d.clone()),
            _ if self.d == other.d => Ok(self.d.clone()),
            _ => Err(NumError::MixedRadicand(self.d.clone(), other.d.clone())),
        }
    }

    /// True when both values live in one quadratic field.
    pub fn compatible(&self, other: &Self) -> bool {
        self.joint_radicand(other).is_ok()
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, NumError> {
        let d = self.joint_radicand(other)?;
        Ok(Self::canonical(
            &self.p * &other.r + &other.p * &self.r,
            &self.q * &other.r + &other.q * &self.r,
            &self.r * &other.r,
            d,
        ))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, NumError> {
        self.checked_add(&-other)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, NumError> {
        let d = self.joint_radicand(other)?;
        Ok(Self::canonical(
            &self.p * &other.p + &self.q * &other.q * &d,
            &self.p * &other.q + &self.q * &other.p,
            &self.r * &other.r,
            d,
        ))
    }

    pub fn checked_recip(&self) -> Result<Self, NumError> {
        if self.is_zero() {
            return Err(NumError::DivisionByZero);
        }
        // r / (p + q√d) = r (p − q√d) / (p² − q² d)
        let den = &self.p * &self.p - &self.q * &self.q * &self.d;
        Ok(Self::canonical(&self.r * &self.p, -(&self.r * &self.q), den, self.d.clone()))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, NumError> {
        self.joint_radicand(other)?;
        self.checked_mul(&other.checked_recip()?)
    }

    pub fn try_cmp(&self, other: &Self) -> Result<Ordering, NumError> {
        let diff = self.checked_sub(other)?;
        Ok(diff.signum().cmp(&0))
    }

    /// Approximate value, for layout only.
    pub fn to_f64(&self) -> f64 {
        let p = self.p.to_f64().unwrap_or(f64::NAN);
        let q = self.q.to_f64().unwrap_or(f64::NAN);
        let r = self.r.to_f64().unwrap_or(f64::NAN);
        let d = self.d.to_f64().unwrap_or(f64::NAN);
        (p + q * d.sqrt()) / r
    }
}

impl Zero for QuadraticNumber {
    fn zero() -> Self {
        Self::from_bigint(BigInt::zero())
    }

    fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero()
    }
}

impl One for QuadraticNumber {
    fn one() -> Self {
        Self::from_bigint(BigInt::one())
    }
}

impl PartialOrd for QuadraticNumber {
    /// `None` for values over different radicands.
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.try_cmp(other).ok()
    }
}

impl Neg for &QuadraticNumber {
    type Output = QuadraticNumber;
    fn neg(self) -> QuadraticNumber {
        QuadraticNumber { p: -&self.p, q: -&self.q, r: self.r.clone(), d: self.d.clone() }
    }
}

impl Neg for QuadraticNumber {
    type Output = QuadraticNumber;
    fn neg(self) -> QuadraticNumber {
        -&self
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&QuadraticNumber> for &QuadraticNumber {
            type Output = QuadraticNumber;
            /// Panics on mixed radicands (and on division by zero).
            fn $method(self, rhs: &QuadraticNumber) -> QuadraticNumber {
                match self.$checked(rhs) {
                    Ok(v) => v,
                    Err(e) => panic!("{}: {}", stringify!($method), e),
                }
            }
        }
        impl $trait<QuadraticNumber> for QuadraticNumber {
            type Output = QuadraticNumber;
            fn $method(self, rhs: QuadraticNumber) -> QuadraticNumber {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&QuadraticNumber> for QuadraticNumber {
            type Output = QuadraticNumber;
            fn $method(self, rhs: &QuadraticNumber) -> QuadraticNumber {
                (&self).$method(rhs)
            }
        }
        impl $trait<QuadraticNumber> for &QuadraticNumber {
            type Output = QuadraticNumber;
            fn $method(self, rhs: QuadraticNumber) -> QuadraticNumber {
                self.$method(&rhs)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);
binop!(Div, div, checked_div);

impl From<i64> for QuadraticNumber {
    fn from(n: i64) -> Self {
        Self::from_integer(n)
    }
}

impl From<BigInt> for QuadraticNumber {
    fn from(n: BigInt) -> Self {
        Self::from_bigint(n)
    }
}

impl From<&Rational> for QuadraticNumber {
    fn from(x: &Rational) -> Self {
        Self::from_rational(x)
    }
}

impl fmt::Display for QuadraticNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.q.is_zero() {
            return if self.r.is_one() {
                write!(f, "{}", self.p)
            } else {
                write!(f, "{}/{}", self.p, self.r)
            };
        }
        let surd = match &self.q {
            q if q.is_one() => format!("√{}", self.d),
            q if *q == -BigInt::one() => format!("-√{}", self.d),
            q => format!("{}√{}", q, self.d),
        };
        let num = if self.p.is_zero() {
            surd
        } else if self.q.is_negative() {
            format!("{}{}", self.p, surd)
        } else {
            format!("{}+{}", self.p, surd)
        };
        if self.r.is_one() {
            write!(f, "{num}")
        } else if self.p.is_zero() {
            write!(f, "{num}/{}", self.r)
        } else {
            write!(f, "({num})/{}", self.r)
        }
    }
}

impl fmt::Debug for QuadraticNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn qn(p: i64, q: i64, r: i64, d: i64) -> QuadraticNumber {
        QuadraticNumber::new(p.into(), q.into(), r.into(), d.into()).unwrap()
    }

    fn phi() -> QuadraticNumber {
        qn(1, 1, 2, 5)
    }

    #[test]
    fn golden_ratio_times_its_inverse() {
        assert_eq!(phi() * qn(-1, 1, 2, 5), QuadraticNumber::one());
    }

    #[test]
    fn rational_embedding() {
        assert_eq!(qn(3, 0, 1, 2) / qn(2, 0, 1, 2), QuadraticNumber::from_ratio(3, 2));
        assert_eq!(qn(3, 0, 1, 2), QuadraticNumber::from_integer(3));
        assert_eq!(&phi() + &QuadraticNumber::zero(), phi());
    }

    #[test]
    fn square_parts_are_absorbed() {
        assert_eq!(qn(0, 1, 1, 8), qn(0, 2, 1, 2));
        assert_eq!(qn(1, 1, 1, 9), QuadraticNumber::from_integer(4));
        assert_eq!(qn(2, 2, 4, 5), phi());
        assert_eq!(qn(-2, -2, -4, 5), phi());
    }

    #[test]
    fn floors() {
        assert_eq!(qn(0, 1, 1, 2).floor(), BigInt::from(1));
        assert_eq!(qn(0, -1, 1, 2).floor(), BigInt::from(-2));
        assert_eq!(QuadraticNumber::from_ratio(7, 2).floor(), BigInt::from(3));
        assert_eq!(QuadraticNumber::from_ratio(-7, 2).floor(), BigInt::from(-4));
        assert_eq!(phi().floor(), BigInt::from(1));
        assert_eq!(qn(0, 1, 1, 2).ceil(), BigInt::from(2));
    }

    #[test]
    fn comparisons() {
        let r5 = qn(0, 1, 1, 5);
        assert_eq!(r5.try_cmp(&QuadraticNumber::from_ratio(9, 4)).unwrap(), Ordering::Less);
        assert_eq!(r5.try_cmp(&r5).unwrap(), Ordering::Equal);
        assert_eq!(phi().try_cmp(&QuadraticNumber::one()).unwrap(), Ordering::Greater);
    }

    #[test]
    fn mixed_radicands_are_rejected() {
        let r2 = qn(0, 1, 1, 2);
        let r5 = qn(0, 1, 1, 5);
        assert!(matches!(r2.checked_add(&r5), Err(NumError::MixedRadicand(_, _))));
        assert!(matches!(r2.try_cmp(&r5), Err(NumError::MixedRadicand(_, _))));
        assert!(r2.partial_cmp(&r5).is_none());
        assert!(r2.checked_mul(&QuadraticNumber::from_integer(3)).is_ok());
    }

    #[test]
    fn division_by_zero() {
        assert_eq!(phi().checked_div(&QuadraticNumber::zero()), Err(NumError::DivisionByZero));
    }

    #[test]
    fn conjugates() {
        assert_eq!(phi().conjugate(), qn(1, -1, 2, 5));
        let x = QuadraticNumber::from_ratio(5, 3);
        assert_eq!(x.conjugate(), x);
        assert_eq!(phi().conjugate().conjugate(), phi());
    }

    #[test]
    fn display() {
        assert_eq!(phi().to_string(), "(1+√5)/2");
        assert_eq!(qn(1, -1, 2, 5).to_string(), "(1-√5)/2");
        assert_eq!(qn(0, -3, 2, 7).to_string(), "-3√7/2");
        assert_eq!(qn(1, 1, 1, 2).to_string(), "1+√2");
        assert_eq!(QuadraticNumber::from_ratio(-3, 6).to_string(), "-1/2");
    }

    fn arb_qn(d: i64) -> impl Strategy<Value = QuadraticNumber> {
        (-50i64..50, -20i64..20, 1i64..30).prop_map(move |(p, q, r)| qn(p, q, r, d))
    }

    fn arb_field() -> impl Strategy<Value = i64> {
        prop::sample::select(vec![2i64, 3, 5, 6, 7, 13])
    }

    proptest! {
        #[test]
        fn canonicalization_is_idempotent(x in arb_field().prop_flat_map(arb_qn)) {
            let again = QuadraticNumber::new(
                x.p().clone(),
                x.q().clone(),
                x.r().clone(),
                x.radicand().cloned().unwrap_or_else(BigInt::one),
            ).unwrap();
            prop_assert_eq!(again, x);
        }

        #[test]
        fn field_axioms((x, y, z) in arb_field().prop_flat_map(|d| (arb_qn(d), arb_qn(d), arb_qn(d)))) {
            prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
            prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
            prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
            prop_assert_eq!(&(&x - &y) + &y, x.clone());
            if !y.is_zero() {
                prop_assert_eq!(&(&x / &y) * &y, x);
            }
        }

        #[test]
        fn floor_brackets_value(x in arb_field().prop_flat_map(arb_qn)) {
            let fl = QuadraticNumber::from_bigint(x.floor());
            prop_assert!(fl <= x);
            prop_assert!(x < &fl + &QuadraticNumber::one());
        }

        #[test]
        fn order_agrees_with_interval_evaluation((x, y) in arb_field().prop_flat_map(|d| (arb_qn(d), arb_qn(d)))) {
            // Independent check: bracket each value between rationals with
            // 10^-30 resolution using integer square roots.
            fn bracket(v: &QuadraticNumber) -> (BigInt, BigInt) {
                let scale = BigInt::from(10u32).pow(30);
                let d = v.radicand().cloned().unwrap_or_else(BigInt::one);
                let root = (&d * &scale * &scale).sqrt(); // floor(√d · 10^30)
                let q = v.q();
                let lo_num = v.p() * &scale + if q.is_negative() { q * (&root + 1) } else { q * &root };
                let hi_num = v.p() * &scale + if q.is_negative() { q * &root } else { q * (&root + 1) };
                (lo_num.div_floor(v.r()), hi_num.div_ceil(v.r()))
            }
            let (xl, xh) = bracket(&x);
            let (yl, yh) = bracket(&y);
            let ord = x.try_cmp(&y).unwrap();
            if xh < yl {
                prop_assert_eq!(ord, Ordering::Less);
            } else if yh < xl {
                prop_assert_eq!(ord, Ordering::Greater);
            } else {
                // Intervals overlap only for equal values at this resolution.
                prop_assert_eq!(ord, Ordering::Equal);
            }
        }
    }
}
