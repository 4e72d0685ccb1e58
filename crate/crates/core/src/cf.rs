//! Continued fractions `[a0; a1 : a2 : ...]` with arbitrary nonzero scalar
//! elements.
//!
//! Evaluation runs through the continuant recurrence, i.e. the product of the
//! element matrices `[[a, 1], [1, 0]]`, so a vanishing intermediate
//! denominator never aborts the computation; the result lives on the
//! projective line.

use crate::exactnum::{common_radicand, lcm_of_denominators, parse_rational, Matrix2, NumError, Rational, Scalar};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::collections::HashMap;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CfError {
    #[error("continued fraction has no elements")]
    Empty,
    #[error("element {0} is zero (only the leading element may vanish)")]
    ZeroElement(usize),
    #[error("periodic part is empty")]
    EmptyPeriod,
    #[error(transparent)]
    Num(#[from] NumError),
    #[error("expected an irrational quadratic number")]
    RationalInput,
    #[error("the periodic continued fraction does not converge")]
    NonConvergent,
    #[error("the period map is a multiple of the identity")]
    DegeneratePeriod,
    #[error("cannot parse continued fraction {0:?}")]
    Parse(String),
}

/// A point of the projective line over the scalars.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProjectiveValue {
    Finite(Scalar),
    Infinity,
}

impl ProjectiveValue {
    /// `num / den`, infinite when `den = 0`. The pair must not be `(0, 0)`.
    pub fn from_ratio(num: &Scalar, den: &Scalar) -> Self {
        if den.is_zero() {
            debug_assert!(!num.is_zero());
            ProjectiveValue::Infinity
        } else {
            ProjectiveValue::Finite(num / den)
        }
    }

    pub fn finite(&self) -> Option<&Scalar> {
        match self {
            ProjectiveValue::Finite(x) => Some(x),
            ProjectiveValue::Infinity => None,
        }
    }

    pub fn into_finite(self) -> Option<Scalar> {
        match self {
            ProjectiveValue::Finite(x) => Some(x),
            ProjectiveValue::Infinity => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ProjectiveValue::Infinity)
    }

    /// `1 / self`.
    pub fn recip(&self) -> ProjectiveValue {
        match self {
            ProjectiveValue::Infinity => ProjectiveValue::Finite(Scalar::zero()),
            ProjectiveValue::Finite(x) if x.is_zero() => ProjectiveValue::Infinity,
            ProjectiveValue::Finite(x) => ProjectiveValue::Finite(Scalar::one() / x),
        }
    }
}

impl fmt::Display for ProjectiveValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProjectiveValue::Finite(x) => write!(f, "{x}"),
            ProjectiveValue::Infinity => write!(f, "infinity"),
        }
    }
}

/// Möbius action `z ↦ (a z + b) / (c z + d)` of an invertible matrix.
pub fn mobius(m: &Matrix2, z: &ProjectiveValue) -> ProjectiveValue {
    match z {
        ProjectiveValue::Infinity => ProjectiveValue::from_ratio(&m.a, &m.c),
        ProjectiveValue::Finite(z) => ProjectiveValue::from_ratio(&(&m.a * z + &m.b), &(&m.c * z + &m.d)),
    }
}

pub fn element_matrix(a: &Scalar) -> Matrix2 {
    Matrix2::new(a.clone(), Scalar::one(), Scalar::one(), Scalar::zero())
}

fn product_matrix(elements: &[Scalar]) -> Matrix2 {
    elements
        .iter()
        .fold(Matrix2::identity(), |acc, a| &acc * &element_matrix(a))
}

fn check_elements(elements: &[Scalar], first_index: usize) -> Result<(), CfError> {
    common_radicand(elements)?;
    for (i, a) in elements.iter().enumerate() {
        if a.is_zero() && i + first_index > 0 {
            return Err(CfError::ZeroElement(i + first_index));
        }
    }
    Ok(())
}

/// A finite continued fraction `[a0; a1 : ... : an]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CfFinite {
    elements: Vec<Scalar>,
}

impl CfFinite {
    pub fn new(elements: Vec<Scalar>) -> Result<Self, CfError> {
        if elements.is_empty() {
            return Err(CfError::Empty);
        }
        check_elements(&elements, 0)?;
        Ok(CfFinite { elements })
    }

    pub fn from_integers(xs: &[i64]) -> Result<Self, CfError> {
        Self::new(xs.iter().map(|&x| Scalar::from_integer(x)).collect())
    }

    pub fn elements(&self) -> &[Scalar] {
        &self.elements
    }

    pub fn into_elements(self) -> Vec<Scalar> {
        self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn eval(&self) -> ProjectiveValue {
        eval_finite(self)
    }
}

impl fmt::Display for CfFinite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}", self.elements[0])?;
        for (i, a) in self.elements.iter().enumerate().skip(1) {
            write!(f, "{}{}", if i == 1 { "; " } else { " : " }, a)?;
        }
        write!(f, "]")
    }
}

/// An eventually periodic continued fraction: `preperiod` followed by
/// `period` repeated forever.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CfPeriodic {
    preperiod: Vec<Scalar>,
    period: Vec<Scalar>,
}

impl CfPeriodic {
    pub fn new(preperiod: Vec<Scalar>, period: Vec<Scalar>) -> Result<Self, CfError> {
        if period.is_empty() {
            return Err(CfError::EmptyPeriod);
        }
        check_elements(&preperiod, 0)?;
        check_elements(&period, 1)?;
        common_radicand(preperiod.iter().chain(&period))?;
        Ok(CfPeriodic { preperiod, period })
    }

    pub fn from_integers(pre: &[i64], period: &[i64]) -> Result<Self, CfError> {
        let conv = |xs: &[i64]| xs.iter().map(|&x| Scalar::from_integer(x)).collect();
        Self::new(conv(pre), conv(period))
    }

    pub fn preperiod(&self) -> &[Scalar] {
        &self.preperiod
    }

    pub fn period(&self) -> &[Scalar] {
        &self.period
    }

    /// Element `i` of the infinite sequence.
    pub fn element(&self, i: usize) -> &Scalar {
        if i < self.preperiod.len() {
            &self.preperiod[i]
        } else {
            &self.period[(i - self.preperiod.len()) % self.period.len()]
        }
    }

    /// The sequence with its first `k` elements removed.
    pub fn skip(&self, k: usize) -> CfPeriodic {
        if k <= self.preperiod.len() {
            return CfPeriodic { preperiod: self.preperiod[k..].to_vec(), period: self.period.clone() };
        }
        let shift = (k - self.preperiod.len()) % self.period.len();
        let mut period = self.period[shift..].to_vec();
        period.extend_from_slice(&self.period[..shift]);
        CfPeriodic { preperiod: Vec::new(), period }
    }

    /// Prepends elements in front of the preperiod.
    pub fn prepend(&self, front: &[Scalar]) -> Result<CfPeriodic, CfError> {
        let mut pre = front.to_vec();
        pre.extend_from_slice(&self.preperiod);
        CfPeriodic::new(pre, self.period.clone())
    }

    /// Shortest period, with the preperiod shortened as far as the
    /// period allows.
    pub fn minimized(&self) -> CfPeriodic {
        let n = self.period.len();
        let mut len = n;
        for cand in 1..=n {
            if n.is_multiple_of(cand) && (cand..n).all(|i| self.period[i] == self.period[i - cand]) {
                len = cand;
                break;
            }
        }
        let mut pre = self.preperiod.clone();
        let mut period = self.period[..len].to_vec();
        while let Some(last) = pre.last() {
            if *last == period[len - 1] {
                period.rotate_right(1);
                pre.pop();
            } else {
                break;
            }
        }
        CfPeriodic { preperiod: pre, period }
    }

    pub fn eval(&self) -> Result<ProjectiveValue, CfError> {
        eval_periodic(self)
    }
}

impl fmt::Display for CfPeriodic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let period = self
            .period
            .iter()
            .map(|a| a.to_string())
            .collect::<Vec<_>>()
            .join(" : ");
        write!(f, "[")?;
        for (i, a) in self.preperiod.iter().enumerate() {
            write!(f, "{}{}", a, if i == 0 { "; " } else { " : " })?;
        }
        write!(f, "({period})]")
    }
}

/// Parity requested for the length of a regular expansion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Any,
    EvenLength,
    OddLength,
}

/// `[a0; a1 : ... : an]` as a projective value.
pub fn eval_finite(cf: &CfFinite) -> ProjectiveValue {
    let m = product_matrix(&cf.elements);
    ProjectiveValue::from_ratio(&m.a, &m.c)
}

/// Prefix values `[a0]`, `[a0; a1]`, ..., `[a0; ... : an]`.
pub fn convergents(cf: &CfFinite) -> Vec<ProjectiveValue> {
    let (mut p_prev, mut q_prev) = (Scalar::one(), Scalar::zero());
    let (mut p, mut q) = (cf.elements[0].clone(), Scalar::one());
    let mut out = vec![ProjectiveValue::from_ratio(&p, &q)];
    for a in &cf.elements[1..] {
        let p_next = a * &p + &p_prev;
        let q_next = a * &q + &q_prev;
        p_prev = std::mem::replace(&mut p, p_next);
        q_prev = std::mem::replace(&mut q, q_next);
        out.push(ProjectiveValue::from_ratio(&p, &q));
    }
    out
}

/// Regular expansion of a rational (all elements after the first positive
/// integers). Without a parity request the last element is at least 2
/// unless the expansion has a single element.
pub fn expand_rational(x: &Rational, parity: Parity) -> CfFinite {
    let mut num = x.numer().clone();
    let mut den = x.denom().clone();
    let mut out = Vec::new();
    loop {
        let (a, rem) = num.div_mod_floor(&den);
        out.push(a);
        if rem.is_zero() {
            break;
        }
        num = std::mem::replace(&mut den, rem);
    }
    let wrong = match parity {
        Parity::Any => false,
        Parity::EvenLength => out.len() % 2 == 1,
        Parity::OddLength => out.len() % 2 == 0,
    };
    if wrong {
        // [..., a] = [..., a − 1, 1]; splitting never produces a zero element
        // past the front because the last element is ≥ 2 or is a0.
        let last = out.pop().expect("nonempty");
        out.push(last - 1);
        out.push(BigInt::one());
    }
    CfFinite::new(out.into_iter().map(Scalar::from_bigint).collect()).expect("regular expansion is valid")
}

/// Regular, eventually periodic expansion of an irrational quadratic number.
///
/// Iterates the Gauss map on states `(P + √N) / Q` with `Q | N − P²`; the
/// period starts at the first repeated state.
pub fn expand_quadratic(x: &Scalar) -> Result<CfPeriodic, CfError> {
    let d = x.radicand().ok_or(CfError::RationalInput)?;
    let sgn = if x.q().is_negative() { -BigInt::one() } else { BigInt::one() };
    let mut big_n = x.q() * x.q() * d;
    let mut p = x.p() * &sgn;
    let mut q = x.r() * &sgn;
    if !((&big_n - &p * &p) % &q).is_zero() {
        let qa = q.abs();
        p *= &qa;
        big_n *= &q * &q;
        q *= &qa;
    }
    let mut seen: HashMap<(BigInt, BigInt), usize> = HashMap::new();
    let mut elements = Vec::new();
    loop {
        if let Some(&start) = seen.get(&(p.clone(), q.clone())) {
            let period = elements.split_off(start);
            return CfPeriodic::new(elements, period);
        }
        seen.insert((p.clone(), q.clone()), elements.len());
        let a = if q.is_positive() {
            crate::exactnum::floor_surd(&p, &BigInt::one(), &q, &big_n)
        } else {
            crate::exactnum::floor_surd(&-&p, &-BigInt::one(), &-&q, &big_n)
        };
        let p_next = &a * &q - &p;
        let q_next = (&big_n - &p_next * &p_next) / &q;
        elements.push(Scalar::from_bigint(a));
        p = p_next;
        q = q_next;
    }
}

/// Value of an eventually periodic continued fraction: the attracting fixed
/// point of the period's Möbius map, pushed through the preperiod.
///
/// A hyperbolic period map (distinct eigenvalue magnitudes) converges to the
/// eigenvector of the dominant eigenvalue; a parabolic one converges to its
/// unique fixed point; an elliptic one, or one with eigenvalues `±λ`, does not
/// converge.
pub fn eval_periodic(cf: &CfPeriodic) -> Result<ProjectiveValue, CfError> {
    let m = product_matrix(&cf.period);
    if m.is_scalar() {
        return Err(CfError::DegeneratePeriod);
    }
    let t = m.trace();
    let disc = &t * &t - Scalar::from_integer(4) * m.det();
    let disc_q = disc.to_rational().ok_or_else(|| {
        NumError::MixedRadicand(
            disc.radicand().cloned().unwrap_or_default(),
            disc.radicand().cloned().unwrap_or_default(),
        )
    })?;
    let fixed = match disc.signum() {
        -1 => return Err(CfError::NonConvergent),
        0 => {
            // (a − d)/(2c) when c ≠ 0, else infinity.
            ProjectiveValue::from_ratio(&(&m.a - &m.d), &(Scalar::from_integer(2) * &m.c))
        }
        _ => {
            if t.is_zero() {
                return Err(CfError::NonConvergent);
            }
            let s = sqrt_discriminant(&m, &disc_q)?;
            if !s.compatible(&m.a) {
                return Err(NumError::MixedRadicand(
                    s.radicand().cloned().unwrap_or_default(),
                    common_radicand(m.entries())?.unwrap_or_default(),
                )
                .into());
            }
            let s = if t.is_positive() { s } else { -s };
            let lambda = (&t + &s) / Scalar::from_integer(2);
            dominant_eigen_direction(&m, &lambda)
        }
    };
    Ok(mobius(&product_matrix(&cf.preperiod), &fixed))
}

// disc = (a − d)² + 4bc is the discriminant of c x² + (d − a) x − b. Over
// the rationals, dividing out the content of that polynomial first keeps the
// squarefree factorization small even when the entries are huge.
fn sqrt_discriminant(m: &Matrix2, disc: &Rational) -> Result<Scalar, CfError> {
    let coeffs = [m.c.to_rational(), (&m.d - &m.a).to_rational(), m.b.to_rational()];
    if let [Some(c), Some(bb), Some(b)] = coeffs {
        let l = lcm_of_denominators([&c, &bb, &b]);
        let ints: Vec<BigInt> = [&c, &bb, &b]
            .iter()
            .map(|x| (*x * Rational::from_integer(l.clone())).to_integer())
            .collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        if !g.is_zero() {
            let k = Rational::new(g.clone(), l);
            let reduced = disc / (&k * &k);
            let root = Scalar::sqrt_rational(&reduced)?;
            return Ok(root * Scalar::from_rational(&k));
        }
    }
    Ok(Scalar::sqrt_rational(disc)?)
}

fn dominant_eigen_direction(m: &Matrix2, lambda: &Scalar) -> ProjectiveValue {
    if !m.b.is_zero() {
        // (a − λ) v1 + b v2 = 0  →  v = (b, λ − a)
        ProjectiveValue::from_ratio(&m.b, &(lambda - &m.a))
    } else if !m.c.is_zero() {
        // c v1 + (d − λ) v2 = 0  →  v = (λ − d, c)
        ProjectiveValue::from_ratio(&(lambda - &m.d), &m.c)
    } else if *lambda == m.a {
        ProjectiveValue::Infinity
    } else {
        ProjectiveValue::Finite(Scalar::zero())
    }
}

/// Lazy regular expansion of any scalar: finite for rationals, eventually
/// periodic for quadratic irrationals.
pub fn regular_elements(x: &Scalar) -> Box<dyn Iterator<Item = BigInt>> {
    match x.to_rational() {
        Some(r) => {
            let cf = expand_rational(&r, Parity::Any);
            Box::new(cf.into_elements().into_iter().map(|a| a.to_bigint().expect("integer")))
        }
        None => {
            let cf = expand_quadratic(x).expect("irrational input");
            let pre: Vec<BigInt> = cf.preperiod.iter().map(|a| a.to_bigint().expect("integer")).collect();
            let period: Vec<BigInt> = cf.period.iter().map(|a| a.to_bigint().expect("integer")).collect();
            Box::new(pre.into_iter().chain(period.into_iter().cycle()))
        }
    }
}

fn parse_elements(s: &str, whole: &str) -> Result<Vec<Scalar>, CfError> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split([':', ';'])
        .map(|tok| {
            parse_rational(tok)
                .map(|r| Scalar::from_rational(&r))
                .map_err(|_| CfError::Parse(whole.to_string()))
        })
        .collect()
}

/// Either kind of continued fraction, as read from text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParsedCf {
    Finite(CfFinite),
    Periodic(CfPeriodic),
}

/// Parses `[a0; a1 : a2]` or `[p0; p1 : (q0 : q1)]` with rational elements.
pub fn parse_cf(text: &str) -> Result<ParsedCf, CfError> {
    let err = || CfError::Parse(text.to_string());
    let inner = text
        .trim()
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(err)?;
    match inner.find('(') {
        None => {
            if inner.matches(';').count() > 1 {
                return Err(err());
            }
            Ok(ParsedCf::Finite(CfFinite::new(parse_elements(inner, text)?)?))
        }
        Some(open) => {
            let close = inner.rfind(')').ok_or_else(err)?;
            if close < open || !inner[close + 1..].trim().is_empty() {
                return Err(err());
            }
            let head = inner[..open].trim_end();
            let head = head
                .strip_suffix(':')
                .or_else(|| head.strip_suffix(';'))
                .unwrap_or(head);
            if !head.trim().is_empty() && head.len() == inner[..open].trim_end().len() {
                return Err(err());
            }
            let pre = parse_elements(head, text)?;
            let period = parse_elements(&inner[open + 1..close], text)?;
            Ok(ParsedCf::Periodic(CfPeriodic::new(pre, period)?))
        }
    }
}

/// Text of a regular expansion of a rational.
pub fn format_rational_expansion(x: &Rational, parity: Parity) -> String {
    expand_rational(x, parity).to_string()
}
