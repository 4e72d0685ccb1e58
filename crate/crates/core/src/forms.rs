//! Binary quadratic forms `A x² + B xy + C y²` with positive discriminant.

use crate::cf::{
    eval_finite, eval_periodic, expand_quadratic, expand_rational, CfError, CfFinite, CfPeriodic, Parity,
    ProjectiveValue,
};
use crate::exactnum::{is_rational_square, IntMatrix, NumError, Rational, Scalar};
use crate::geometry::Point;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormError {
    #[error("discriminant is not positive")]
    NonPositiveDiscriminant,
    #[error("the form splits degenerately (equal kernel slopes)")]
    DegenerateSplit,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("the form must have integer coefficients")]
    NonIntegerCoefficients,
    #[error("the discriminant is a perfect square, so the form vanishes on lattice points")]
    SquareDiscriminant,
    #[error("factors expand to irrational coefficients")]
    IrrationalCoefficients,
    #[error(transparent)]
    Num(#[from] NumError),
    #[error(transparent)]
    Cf(#[from] CfError),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinaryQuadraticForm {
    a: Rational,
    b: Rational,
    c: Rational,
}

impl BinaryQuadraticForm {
    pub fn new(a: Rational, b: Rational, c: Rational) -> Result<Self, FormError> {
        let f = BinaryQuadraticForm { a, b, c };
        if !f.discriminant().is_positive() {
            return Err(FormError::NonPositiveDiscriminant);
        }
        Ok(f)
    }

    /// Panics when the discriminant is not positive.
    pub fn from_ints(a: i64, b: i64, c: i64) -> Self {
        let r = |x: i64| Rational::from_integer(x.into());
        Self::new(r(a), r(b), r(c)).expect("positive discriminant")
    }

    /// `λ (a x − b y)(c x − d y)`.
    pub fn from_factors(
        lambda: &Scalar,
        (a, b): (&Scalar, &Scalar),
        (c, d): (&Scalar, &Scalar),
    ) -> Result<Self, FormError> {
        let ca = lambda.checked_mul(&a.checked_mul(c)?)?;
        let cb = -lambda.checked_mul(&a.checked_mul(d)?.checked_add(&b.checked_mul(c)?)?)?;
        let cc = lambda.checked_mul(&b.checked_mul(d)?)?;
        match (ca.to_rational(), cb.to_rational(), cc.to_rational()) {
            (Some(a), Some(b), Some(c)) => Self::new(a, b, c),
            _ => Err(FormError::IrrationalCoefficients),
        }
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    pub fn c(&self) -> &Rational {
        &self.c
    }

    pub fn coefficients(&self) -> [&Rational; 3] {
        [&self.a, &self.b, &self.c]
    }

    pub fn is_integral(&self) -> bool {
        self.coefficients().iter().all(|x| x.is_integer())
    }

    pub fn discriminant(&self) -> Rational {
        &self.b * &self.b - Rational::from_integer(4.into()) * &self.a * &self.c
    }

    pub fn sqrt_discriminant(&self) -> Scalar {
        Scalar::sqrt_rational(&self.discriminant()).expect("positive discriminant")
    }

    pub fn has_square_discriminant(&self) -> bool {
        is_rational_square(&self.discriminant())
    }

    pub fn evaluate(&self, p: &Point) -> Scalar {
        self.try_evaluate(p).expect("coordinates share a radicand")
    }

    pub fn try_evaluate(&self, p: &Point) -> Result<Scalar, NumError> {
        let a = Scalar::from_rational(&self.a);
        let b = Scalar::from_rational(&self.b);
        let c = Scalar::from_rational(&self.c);
        let xx = p.x.checked_mul(&p.x)?;
        let xy = p.x.checked_mul(&p.y)?;
        let yy = p.y.checked_mul(&p.y)?;
        Ok(&a * &xx + &b * &xy + &c * &yy)
    }

    /// `f ∘ U`, i.e. `(x, y) ↦ f(U (x, y))`.
    pub fn compose(&self, u: &IntMatrix) -> BinaryQuadraticForm {
        let r = |x: &BigInt| Rational::from_integer(x.clone());
        let (u11, u12, u21, u22) = (r(&u.a), r(&u.b), r(&u.c), r(&u.d));
        let two = Rational::from_integer(2.into());
        let eval = |x: &Rational, y: &Rational| &self.a * x * x + &self.b * x * y + &self.c * y * y;
        BinaryQuadraticForm {
            a: eval(&u11, &u21),
            c: eval(&u12, &u22),
            b: &two * &self.a * &u11 * &u12
                + &self.b * (&u11 * &u22 + &u12 * &u21)
                + &two * &self.c * &u21 * &u22,
        }
    }

    pub fn scale(&self, lambda: &Rational) -> Result<BinaryQuadraticForm, FormError> {
        Self::new(&self.a * lambda, &self.b * lambda, &self.c * lambda)
    }

    /// Kernel slopes `y/x` (roots of `C s² + B s + A`), with infinity when
    /// `C = 0`.
    pub fn kernel_slopes(&self) -> (ProjectiveValue, ProjectiveValue) {
        if self.c.is_zero() {
            let s = Scalar::from_rational(&(-&self.a / &self.b));
            return (ProjectiveValue::Finite(s), ProjectiveValue::Infinity);
        }
        let root = self.sqrt_discriminant();
        let b = Scalar::from_rational(&self.b);
        let two_c = Scalar::from_rational(&(Rational::from_integer(2.into()) * &self.c));
        (
            ProjectiveValue::Finite((-&b + &root) / &two_c),
            ProjectiveValue::Finite((-&b - &root) / &two_c),
        )
    }

    pub fn factor(&self) -> FactoredForm {
        factor(self)
    }
}

impl fmt::Display for BinaryQuadraticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        for (coef, mono) in [(&self.a, "x²"), (&self.b, "xy"), (&self.c, "y²")] {
            if coef.is_zero() {
                continue;
            }
            let mag = coef.abs();
            let body = if mag.is_one() { mono.to_string() } else { format!("{}{}", crate::exactnum::format_rational(&mag), mono) };
            if out.is_empty() {
                out = if coef.is_negative() { format!("-{body}") } else { body };
            } else {
                out.push_str(if coef.is_negative() { " - " } else { " + " });
                out.push_str(&body);
            }
        }
        write!(f, "{out}")
    }
}

/// The linear form `a·x − b·y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearFactor {
    pub a: Scalar,
    pub b: Scalar,
}

impl LinearFactor {
    pub fn new(a: Scalar, b: Scalar) -> Self {
        LinearFactor { a, b }
    }

    pub fn evaluate(&self, p: &Point) -> Scalar {
        &self.a * &p.x - &self.b * &p.y
    }

    /// A nonzero vector on which the factor vanishes.
    pub fn kernel_direction(&self) -> Point {
        Point::new(self.b.clone(), self.a.clone())
    }
}

impl fmt::Display for LinearFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})x - ({})y", self.a, self.b)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactoredForm {
    pub scale: Scalar,
    pub first: LinearFactor,
    pub second: LinearFactor,
}

impl FactoredForm {
    pub fn evaluate(&self, p: &Point) -> Scalar {
        &self.scale * &self.first.evaluate(p) * self.second.evaluate(p)
    }

    pub fn expand(&self) -> Result<BinaryQuadraticForm, FormError> {
        BinaryQuadraticForm::from_factors(
            &self.scale,
            (&self.first.a, &self.first.b),
            (&self.second.a, &self.second.b),
        )
    }
}

/// Splits `f` into `λ · L₁ · L₂` over `Q(√Δ)`.
///
/// With `A ≠ 0` the factors are `x − t y` for the roots
/// `t = (−B ± √Δ) / 2A` (the `+` root first) and `λ = A`.
pub fn factor(f: &BinaryQuadraticForm) -> FactoredForm {
    let one = Scalar::one;
    if !f.a.is_zero() {
        let root = f.sqrt_discriminant();
        let b = Scalar::from_rational(&f.b);
        let two_a = Scalar::from_rational(&(Rational::from_integer(2.into()) * &f.a));
        let t1 = (-&b + &root) / &two_a;
        let t2 = (-&b - &root) / &two_a;
        FactoredForm {
            scale: Scalar::from_rational(&f.a),
            first: LinearFactor::new(one(), t1),
            second: LinearFactor::new(one(), t2),
        }
    } else if !f.c.is_zero() {
        // C y (y + (B/C) x)
        FactoredForm {
            scale: Scalar::from_rational(&f.c),
            first: LinearFactor::new(Scalar::zero(), -one()),
            second: LinearFactor::new(Scalar::from_rational(&(&f.b / &f.c)), -one()),
        }
    } else {
        FactoredForm {
            scale: Scalar::from_rational(&f.b),
            first: LinearFactor::new(one(), Scalar::zero()),
            second: LinearFactor::new(Scalar::zero(), -one()),
        }
    }
}

/// `f ∘ U = λ (y − α x)(y + β x)` with `α ≥ 1`, `0 ≤ β < 1`, `det U = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedForm {
    pub alpha: Scalar,
    pub beta: Scalar,
    pub scale: Rational,
    pub witness: IntMatrix,
}

impl ReducedForm {
    /// `(y − α x)(y + β x)`, without the scale.
    pub fn evaluate_unscaled(&self, p: &Point) -> Scalar {
        reduced_value(&self.alpha, &self.beta, p)
    }

    /// Discriminant `(α + β)²` of `(y − α x)(y + β x)`.
    pub fn unscaled_discriminant(&self) -> Scalar {
        let s = &self.alpha + &self.beta;
        &s * &s
    }
}

/// `(y − α x)(y + β x)`.
pub fn reduced_value(alpha: &Scalar, beta: &Scalar, p: &Point) -> Scalar {
    (&p.y - alpha * &p.x) * (&p.y + beta * &p.x)
}

fn apply_inverse(step: &IntMatrix, s: &ProjectiveValue) -> ProjectiveValue {
    let inv = step.inverse_unimodular().expect("unimodular step");
    let (x, y) = match s {
        ProjectiveValue::Infinity => inv.apply(&Scalar::zero(), &Scalar::one()),
        ProjectiveValue::Finite(s) => inv.apply(&Scalar::one(), s),
    };
    ProjectiveValue::from_ratio(&y, &x)
}

/// Normalizes two distinct kernel slopes (`y/x`) by shears and quarter
/// turns. Returns `U` (det 1) and `α ≥ 1`, `0 ≤ β < 1` such that the
/// slopes become `α` and `−β` in the coordinates `(x, y) = U (x', y')`.
pub fn reduce_slopes(
    s1: &ProjectiveValue,
    s2: &ProjectiveValue,
) -> Result<(IntMatrix, Scalar, Scalar), FormError> {
    let mut u = IntMatrix::identity();
    let mut s = [s1.clone(), s2.clone()];
    let apply = |step: IntMatrix, s: &mut [ProjectiveValue; 2], u: &mut IntMatrix| {
        s[0] = apply_inverse(&step, &s[0]);
        s[1] = apply_inverse(&step, &s[1]);
        *u = &*u * &step;
    };
    let left_shear = |k: &BigInt| IntMatrix::new(1, k.clone(), 0, 1);
    for _ in 0..100_000 {
        if s[0] == s[1] {
            return Err(FormError::DegenerateSplit);
        }
        if let Some(i) = s.iter().position(|x| x.is_infinite()) {
            let other = s[1 - i].finite().expect("distinct slopes");
            let k = if *other == Scalar::one() { BigInt::from(2) } else { BigInt::one() };
            apply(left_shear(&k), &mut s, &mut u);
            continue;
        }
        let (x, y) = (s[0].finite().unwrap(), s[1].finite().unwrap());
        let (a, b) = if x < y { (x.clone(), y.clone()) } else { (y.clone(), x.clone()) };
        let k = a.ceil();
        let a = &a - &Scalar::from_bigint(k.clone());
        let b = &b - &Scalar::from_bigint(k.clone());
        apply(IntMatrix::new(1, 0, k, 1), &mut s, &mut u);
        if b >= Scalar::one() {
            return Ok((u, b, -a));
        }
        if a.is_zero() || b.is_zero() {
            // One slope is 0; push the other to [1, ∞) with x ↦ x + k y.
            let other = if a.is_zero() { &b } else { &a };
            let c = Scalar::one() / other;
            let k: BigInt = c.ceil() - 1;
            let alpha = Scalar::one() / (&c - &Scalar::from_bigint(k.clone()));
            apply(left_shear(&k), &mut s, &mut u);
            return Ok((u, alpha, Scalar::zero()));
        }
        // Quarter turn (x, y) ↦ (−y, x): slopes s ↦ −1/s.
        apply(IntMatrix::new(0, -1, 1, 0), &mut s, &mut u);
    }
    Err(FormError::Unsupported("slope reduction did not terminate".into()))
}

pub fn reduce(f: &BinaryQuadraticForm) -> Result<ReducedForm, FormError> {
    let (s1, s2) = f.kernel_slopes();
    let (u, alpha, beta) = reduce_slopes(&s1, &s2)?;
    let g = f.compose(&u);
    let lambda = g.c.clone();
    let l = Scalar::from_rational(&lambda);
    let ok = Scalar::from_rational(&g.a) == -(&l * &alpha * &beta)
        && Scalar::from_rational(&g.b) == &l * &(&beta - &alpha);
    assert!(ok, "reduction post-condition failed for {f}");
    debug_assert!(alpha >= Scalar::one() && !beta.is_negative() && beta < Scalar::one());
    Ok(ReducedForm { alpha, beta, scale: lambda, witness: u })
}

/// One side of a two-sided LLS sequence, read away from the center.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Side {
    Finite(Vec<Scalar>),
    Periodic(CfPeriodic),
}

impl Side {
    fn get(&self, i: usize) -> Option<&Scalar> {
        match self {
            Side::Finite(v) => v.get(i),
            Side::Periodic(p) => Some(p.element(i)),
        }
    }

    fn skip(&self, k: usize) -> Side {
        match self {
            Side::Finite(v) => Side::Finite(v.get(k..).map(|s| s.to_vec()).unwrap_or_default()),
            Side::Periodic(p) => Side::Periodic(p.skip(k)),
        }
    }

    fn prepend(&self, front: &[Scalar]) -> Side {
        match self {
            Side::Finite(v) => Side::Finite(front.iter().chain(v).cloned().collect()),
            Side::Periodic(p) => Side::Periodic(p.prepend(front).expect("nonzero elements")),
        }
    }

    /// `[0; s_0 : s_1 : …]`.
    pub fn tail_value(&self) -> Result<ProjectiveValue, CfError> {
        match self {
            Side::Finite(v) => {
                let mut els = vec![Scalar::zero()];
                els.extend(v.iter().cloned());
                Ok(eval_finite(&CfFinite::new(els)?))
            }
            Side::Periodic(p) => eval_periodic(&p.prepend(&[Scalar::zero()])?),
        }
    }

    pub fn is_periodic(&self) -> bool {
        matches!(self, Side::Periodic(_))
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::Finite(v) if v.is_empty() => write!(f, "[]"),
            Side::Finite(v) => write!(f, "{}", CfFinite::new(v.clone()).map_err(|_| fmt::Error)?),
            Side::Periodic(p) => write!(f, "{p}"),
        }
    }
}

/// `(…, a_{−2}, a_{−1}, a_0, a_1, …)`: `right` holds `a_0, a_1, …` and
/// `left` holds `a_{−1}, a_{−2}, …`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoSidedSequence {
    pub left: Side,
    pub right: Side,
}

impl TwoSidedSequence {
    pub fn element(&self, i: i64) -> Option<&Scalar> {
        if i >= 0 {
            self.right.get(i as usize)
        } else {
            self.left.get((-i - 1) as usize)
        }
    }

    /// `a_{i+1}, a_{i+2}, …`.
    pub fn after(&self, i: i64) -> Side {
        if i >= -1 {
            self.right.skip((i + 1) as usize)
        } else {
            let front: Vec<Scalar> = (i + 1..0).map(|j| self.element(j).expect("in range").clone()).collect();
            self.right.prepend(&front)
        }
    }

    /// `a_{i−1}, a_{i−2}, …`.
    pub fn before(&self, i: i64) -> Side {
        if i <= 0 {
            self.left.skip((-i) as usize)
        } else {
            let front: Vec<Scalar> = (0..i).rev().map(|j| self.element(j).expect("in range").clone()).collect();
            self.left.prepend(&front)
        }
    }

    /// `a_i + [0; a_{i+1} : …] + [0; a_{i−1} : …]`.
    pub fn denominator(&self, i: i64) -> Result<ProjectiveValue, CfError> {
        let a = self.element(i).ok_or(CfError::Empty)?;
        let r = self.after(i).tail_value()?;
        let l = self.before(i).tail_value()?;
        Ok(match (r, l) {
            (ProjectiveValue::Finite(r), ProjectiveValue::Finite(l)) => ProjectiveValue::Finite(a + &r + l),
            _ => ProjectiveValue::Infinity,
        })
    }

    pub fn is_periodic(&self) -> bool {
        self.left.is_periodic() && self.right.is_periodic()
    }
}

impl fmt::Display for TwoSidedSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "left {} | right {}", self.left, self.right)
    }
}

fn regular_side(x: &Scalar) -> Result<Side, FormError> {
    Ok(match x.to_rational() {
        Some(r) => Side::Finite(expand_rational(&r, Parity::Any).into_elements()),
        None => Side::Periodic(expand_quadratic(x)?.minimized()),
    })
}

/// Regular expansions of `α` (right) and `1/β` (left).
pub fn lls_of_reduced(alpha: &Scalar, beta: &Scalar) -> Result<TwoSidedSequence, FormError> {
    let right = regular_side(alpha)?;
    let left = if beta.is_zero() { Side::Finite(Vec::new()) } else { regular_side(&(Scalar::one() / beta))? };
    Ok(TwoSidedSequence { left, right })
}

pub fn lls_of_form(f: &BinaryQuadraticForm) -> Result<TwoSidedSequence, FormError> {
    let r = reduce(f)?;
    lls_of_reduced(&r.alpha, &r.beta)
}

fn minimal_period(f: &BinaryQuadraticForm) -> Result<Vec<Scalar>, FormError> {
    match lls_of_form(f)?.right {
        Side::Periodic(p) if p.preperiod().is_empty() => Ok(p.minimized().period().to_vec()),
        _ => Err(FormError::Unsupported("LLS sequence is not purely periodic".into())),
    }
}

/// Same two-sided LLS sequence up to shift and reversal.
pub fn equivalent(f: &BinaryQuadraticForm, g: &BinaryQuadraticForm) -> Result<bool, FormError> {
    let p = minimal_period(f)?;
    let q = minimal_period(g)?;
    if p.len() != q.len() {
        return Ok(false);
    }
    let rev: Vec<Scalar> = q.iter().rev().cloned().collect();
    let n = p.len();
    let rotates_to = |target: &[Scalar]| (0..n).any(|k| (0..n).all(|i| p[(i + k) % n] == target[i]));
    Ok(rotates_to(&q) || rotates_to(&rev))
}

/// `T_a J = [[0, 1], [1, a]]`: one step along the LLS sequence, with
/// `f_{α,β} ∘ T_a J = −1/(α₁β₁) f_{α₁,β₁}`.
pub fn lls_step(a: &BigInt) -> IntMatrix {
    IntMatrix::new(0, 1, 1, a.clone())
}

/// Product of the steps for `a_0 … a_{k−1}`.
pub fn lls_walk<'a>(elements: impl IntoIterator<Item = &'a Scalar>) -> IntMatrix {
    elements.into_iter().fold(IntMatrix::identity(), |w, a| {
        &w * &lls_step(&a.to_bigint().expect("integer LLS element"))
    })
}

/// A generator `M` (det 1, trace > 2) of the proper automorphs of `f`:
/// `f ∘ M = f`.
pub fn automorph(f: &BinaryQuadraticForm) -> Result<IntMatrix, FormError> {
    if f.has_square_discriminant() {
        return Err(FormError::SquareDiscriminant);
    }
    let r = reduce(f)?;
    let right = regular_side(&r.alpha)?;
    let period = match &right {
        Side::Periodic(p) if p.preperiod().is_empty() => p.period().to_vec(),
        _ => return Err(FormError::Unsupported("α is not purely periodic".into())),
    };
    let mut w = lls_walk(&period);
    // Sign picked up over one period: (y − αx)(y + βx) ∘ W at (0, 1).
    let p = Point::new(Scalar::from_bigint(w.b.clone()), Scalar::from_bigint(w.d.clone()));
    let kappa = reduced_value(&r.alpha, &r.beta, &p);
    if !w.det().is_one() || kappa.is_negative() {
        w = &w * &w;
    }
    let u = &r.witness;
    let mut m = &(u * &w) * &u.inverse_unimodular().expect("det 1");
    if m.trace() < BigInt::from(-2) {
        m = m.neg();
    }
    if f.compose(&m) != *f {
        return Err(FormError::Unsupported("automorph check failed".into()));
    }
    Ok(m)
}
