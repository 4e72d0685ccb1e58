//! Perron-type identities: values of a form at vertices of an f-broken line
//! expressed through the line's LLS sequence and `√Δ`.
//!
//! The orientation factor `ε = sign f(A_0 + A_n)` multiplies every
//! right-hand side; it is `+1` for the forms in the usual worked examples
//! and `−1` for their negatives.

use crate::cf::{eval_finite, CfError, CfFinite, ProjectiveValue};
use crate::exactnum::{common_radicand, IntMatrix, NumError, Scalar, Sign};
use crate::forms::{lls_of_reduced, lls_step, reduce, BinaryQuadraticForm, FormError, TwoSidedSequence};
use crate::geometry::{det2, is_f_broken_line, lls, signature, BrokenLine, GeometryError, Point};
use num_traits::Zero;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PerronError {
    #[error("{0} does not lie on the kernel of the form")]
    NotOnKernel(&'static str),
    #[error("P and Q lie on the same kernel line")]
    SameKernelLine,
    #[error("not an f-broken line for this form")]
    NotFBrokenLine,
    #[error("vertex {0} is an endpoint; the identity covers interior vertices")]
    BoundaryVertex(usize),
    #[error("vertex index {0} is out of range")]
    VertexOutOfRange(usize),
    #[error("zero denominator at vertex {0}")]
    ZeroDenominator(i64),
    #[error("the form must have integer coefficients")]
    NonIntegerCoefficients,
    #[error("the discriminant is a perfect square, so the minimum is 0 on the kernel")]
    SquareDiscriminant,
    #[error(transparent)]
    Num(#[from] NumError),
    #[error(transparent)]
    Cf(#[from] CfError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Form(#[from] FormError),
}

/// One evaluated right-hand side: `value = sign · √Δ / denominator`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PerronTerm {
    pub index: i64,
    pub denominator: ProjectiveValue,
    pub value: Scalar,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectrumReport {
    pub form: BinaryQuadraticForm,
    pub minimum: Scalar,
    /// `√Δ / m(f)`.
    pub normalized: Scalar,
    pub witness: Point,
    pub term: PerronTerm,
}

fn check_field(f: &BinaryQuadraticForm, points: &[&Point]) -> Result<Scalar, NumError> {
    let root = f.sqrt_discriminant();
    common_radicand(points.iter().flat_map(|p| [&p.x, &p.y]).chain([&root]))?;
    Ok(root)
}

/// `sign f(P + Q)` for `P`, `Q` on distinct kernel lines.
pub fn cone_sign(f: &BinaryQuadraticForm, p: &Point, q: &Point) -> Result<Sign, PerronError> {
    Sign::of(&f.try_evaluate(&(p + q))?).ok_or(PerronError::SameKernelLine)
}

/// `f(A) = ε · sign det(OP, OQ) · det(OP, OA) det(OA, OQ) / det(OP, OQ) · √Δ`.
pub fn value_via_triangle(f: &BinaryQuadraticForm, p: &Point, a: &Point, q: &Point) -> Result<Scalar, PerronError> {
    let root = check_field(f, &[p, a, q])?;
    if p.is_origin() || !f.evaluate(p).is_zero() {
        return Err(PerronError::NotOnKernel("P"));
    }
    if q.is_origin() || !f.evaluate(q).is_zero() {
        return Err(PerronError::NotOnKernel("Q"));
    }
    let pq = det2(p, q);
    let sig = Sign::of(&pq).ok_or(PerronError::SameKernelLine)?;
    let eps = cone_sign(f, p, q)?;
    let body = det2(p, a) * det2(a, q) / &pq * root;
    Ok((eps * sig).to_scalar() * body)
}

/// Right-hand side of the identity at interior vertex `k`:
/// `ε · sign · √Δ / (a_{2k−1} + [0; a_{2k−2} : … : a_0] + [0; a_{2k} : … : a_{2n−1}])`.
pub fn perron_rhs_finite(f: &BinaryQuadraticForm, b: &BrokenLine, k: usize) -> Result<PerronTerm, PerronError> {
    let root = check_field(f, &b.vertices().iter().collect::<Vec<_>>())?;
    if !is_f_broken_line(b, f)? {
        return Err(PerronError::NotFBrokenLine);
    }
    let last = b.edges();
    if k > last {
        return Err(PerronError::VertexOutOfRange(k));
    }
    if k == 0 || k == last {
        return Err(PerronError::BoundaryVertex(k));
    }
    let s = lls(b)?;
    let sign = cone_sign(f, b.first(), b.last())? * signature(b)?;
    rhs_at(s.entries(), k, sign, &root)
}

fn rhs_at(a: &[Scalar], k: usize, sign: Sign, root: &Scalar) -> Result<PerronTerm, PerronError> {
    let left: Vec<Scalar> = std::iter::once(Scalar::zero()).chain(a[..2 * k - 1].iter().rev().cloned()).collect();
    let right: Vec<Scalar> = std::iter::once(Scalar::zero()).chain(a[2 * k..].iter().cloned()).collect();
    let tails = (eval_finite(&CfFinite::new(left)?), eval_finite(&CfFinite::new(right)?));
    let denominator = match tails {
        (ProjectiveValue::Finite(l), ProjectiveValue::Finite(r)) => ProjectiveValue::Finite(&a[2 * k - 1] + &l + r),
        _ => ProjectiveValue::Infinity,
    };
    let value = term_value(sign, root, &denominator, k as i64)?;
    Ok(PerronTerm { index: k as i64, denominator, value })
}

fn term_value(sign: Sign, root: &Scalar, den: &ProjectiveValue, index: i64) -> Result<Scalar, PerronError> {
    match den {
        ProjectiveValue::Infinity => Ok(Scalar::zero()),
        ProjectiveValue::Finite(d) if d.is_zero() => Err(PerronError::ZeroDenominator(index)),
        ProjectiveValue::Finite(d) => Ok(sign.to_scalar() * root.checked_div(d)?),
    }
}

/// `sign · √Δ / (a_i + [0; a_{i+1} : …] + [0; a_{i−1} : …])` for a two-sided
/// sequence. The caller supplies the sign of the asymptotic line.
pub fn perron_rhs_infinite(
    f: &BinaryQuadraticForm,
    s: &TwoSidedSequence,
    center: i64,
    sign: Sign,
) -> Result<PerronTerm, PerronError> {
    let denominator = s.denominator(center)?;
    let value = term_value(sign, &f.sqrt_discriminant(), &denominator, center)?;
    Ok(PerronTerm { index: center, denominator, value })
}

/// Basis change `W_i` with `W_0 = I` and `W_{i+1} = W_i · T_{a_i} J`; the
/// point `W_i (0, 1)` realizes the term at index `i`.
fn walk_to(s: &TwoSidedSequence, i: i64) -> IntMatrix {
    let mut w = IntMatrix::identity();
    let int = |j: i64| s.element(j).and_then(|a| a.to_bigint()).expect("integer element");
    if i >= 0 {
        for j in 0..i {
            w = &w * &lls_step(&int(j));
        }
    } else {
        for j in (i..0).rev() {
            // (T_a J)⁻¹ = [[−a, 1], [1, 0]]
            w = &w * &IntMatrix::new(-int(j), 1, 1, 0);
        }
    }
    w
}

/// Markov minimum through the classical identity: the least
/// `√Δ / (a_i + [0; a_{i+1} : …] + [0; a_{i−1} : …])` over one period of the
/// form's LLS sequence, plus `window` extra indices on either side.
pub fn classical_perron(f: &BinaryQuadraticForm, window: usize) -> Result<SpectrumReport, PerronError> {
    if !f.is_integral() {
        return Err(PerronError::NonIntegerCoefficients);
    }
    if f.has_square_discriminant() {
        return Err(PerronError::SquareDiscriminant);
    }
    let r = reduce(f)?;
    let s = lls_of_reduced(&r.alpha, &r.beta)?;
    let period = match &s.right {
        crate::forms::Side::Periodic(p) => p.preperiod().len() + p.period().len(),
        crate::forms::Side::Finite(v) => v.len(),
    } as i64;
    let w = window as i64;
    let root = f.sqrt_discriminant();
    let mut best: Option<(Scalar, Point, PerronTerm)> = None;
    for i in (0..period + w).chain((-w..0).rev()) {
        let point = &(&r.witness * &walk_to(&s, i)) * &Point::from_ints(0, 1);
        let fv = f.evaluate(&point);
        let sign = Sign::of(&fv).expect("no lattice zeros for non-square discriminant");
        let term = perron_rhs_infinite(f, &s, i, sign)?;
        assert_eq!(term.value, fv, "identity check failed at index {i} for {f}");
        let m = fv.abs();
        if best.as_ref().is_none_or(|(b, _, _)| m < *b) {
            best = Some((m, point, term));
        }
    }
    let (minimum, witness, term) = best.expect("nonempty period");
    Ok(SpectrumReport { form: f.clone(), normalized: &root / &minimum, minimum, witness, term })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexCheck {
    pub index: usize,
    pub vertex: Point,
    pub lhs: Scalar,
    pub rhs: Scalar,
    pub denominator: ProjectiveValue,
}

impl VertexCheck {
    pub fn passed(&self) -> bool {
        self.lhs == self.rhs
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub sign: Sign,
    pub orientation: Sign,
    pub sqrt_discriminant: Scalar,
    pub endpoint_values: [Scalar; 2],
    pub checks: Vec<VertexCheck>,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.endpoint_values.iter().all(|v| v.is_zero()) && self.checks.iter().all(VertexCheck::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &VertexCheck> {
        self.checks.iter().filter(|c| !c.passed())
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(
                f,
                "A{}\t{}\tf = {}\trhs = {}\t{}",
                c.index,
                c.vertex,
                c.lhs,
                c.rhs,
                if c.passed() { "ok" } else { "FAIL" }
            )?;
        }
        Ok(())
    }
}

/// Checks the identity at every interior vertex.
pub fn verify_identity(f: &BinaryQuadraticForm, b: &BrokenLine) -> Result<VerificationReport, PerronError> {
    check_field(f, &b.vertices().iter().collect::<Vec<_>>())?;
    if !is_f_broken_line(b, f)? {
        return Err(PerronError::NotFBrokenLine);
    }
    identity_table(f, b)
}

/// The right-hand sides evaluated without checking that the endpoints lie on
/// the kernel, so a line that is not an f-broken line shows where the
/// identity breaks. `endpoint_values` holds `f(A_0)` and `f(A_n)`.
pub fn identity_table(f: &BinaryQuadraticForm, b: &BrokenLine) -> Result<VerificationReport, PerronError> {
    let root = check_field(f, &b.vertices().iter().collect::<Vec<_>>())?;
    let s = lls(b)?;
    let sign = signature(b)?;
    let orientation = cone_sign(f, b.first(), b.last())?;
    let mut checks = Vec::new();
    for k in 1..b.edges() {
        let term = rhs_at(s.entries(), k, orientation * sign, &root)?;
        let vertex = b.vertices()[k].clone();
        checks.push(VertexCheck {
            index: k,
            lhs: f.evaluate(&vertex),
            rhs: term.value,
            denominator: term.denominator,
            vertex,
        });
    }
    Ok(VerificationReport {
        sign,
        orientation,
        sqrt_discriminant: root,
        endpoint_values: [f.evaluate(b.first()), f.evaluate(b.last())],
        checks,
    })
}

/// The identity with the printed sign only (no orientation factor); kept to
/// document where it disagrees.
pub fn uncorrected_rhs(f: &BinaryQuadraticForm, b: &BrokenLine, k: usize) -> Result<Scalar, PerronError> {
    let t = perron_rhs_finite(f, b, k)?;
    let eps = cone_sign(f, b.first(), b.last())?;
    Ok(eps.to_scalar() * t.value)
}
