//! Sails: origin-facing boundaries of convex hulls of lattice points in an
//! angle, and Markov minima read off their vertices.
//!
//! Two independent constructions are provided. [`sail_bruteforce`] hulls the
//! lattice points of a box; [`sail_cf`] normalizes the angle by a unimodular
//! map and reads vertices from even convergents of the boundary slope.

use crate::cf::{regular_elements, ProjectiveValue};
use crate::exactnum::{common_radicand, IntMatrix, NumError, Rational, Scalar, Sign};
use crate::forms::{automorph, factor, reduce_slopes, BinaryQuadraticForm, FormError, Side, TwoSidedSequence};
use crate::geometry::{det2, Point};
use crate::perron::{perron_rhs_infinite, PerronError, PerronTerm, SpectrumReport};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SailError {
    #[error("no lattice point of the angle lies within the box")]
    EmptyAngle,
    #[error("the rays are parallel or not counterclockwise")]
    DegenerateAngle,
    #[error("the form must have integer coefficients")]
    NonIntegerCoefficients,
    #[error("the discriminant is a perfect square, so the minimum is 0 on the kernel")]
    SquareDiscriminant,
    #[error("no period found for the sail")]
    NoPeriod,
    #[error("vertex value {value} disagrees with the identity value {identity}")]
    IdentityMismatch { value: Scalar, identity: Scalar },
    #[error(transparent)]
    Num(#[from] NumError),
    #[error(transparent)]
    Form(#[from] FormError),
    #[error(transparent)]
    Perron(#[from] PerronError),
}

/// Angle from `ray1` counterclockwise to `ray2`, apex at the origin,
/// `det(ray1, ray2) > 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Angle {
    pub ray1: Point,
    pub ray2: Point,
}

impl Angle {
    pub fn new(ray1: Point, ray2: Point) -> Result<Self, SailError> {
        common_radicand([&ray1.x, &ray1.y, &ray2.x, &ray2.y])?;
        if !det2(&ray1, &ray2).is_positive() {
            return Err(SailError::DegenerateAngle);
        }
        Ok(Angle { ray1, ray2 })
    }

    /// Closed-angle membership.
    pub fn contains(&self, p: &Point) -> bool {
        !det2(&self.ray1, p).is_negative() && !det2(p, &self.ray2).is_negative()
    }

    pub fn interior_direction(&self) -> Point {
        &self.ray1 + &self.ray2
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "angle {} -> {}", self.ray1, self.ray2)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sail {
    pub vertices: Vec<Point>,
    /// Lattice automorphism of the angle with `M V_k = V_{k+p}`.
    pub period: Option<IntMatrix>,
}

fn int_point(x: &BigInt, y: &BigInt) -> Point {
    Point::new(Scalar::from_bigint(x.clone()), Scalar::from_bigint(y.clone()))
}

fn int_coords(p: &Point) -> (BigInt, BigInt) {
    (p.x.to_bigint().expect("lattice point"), p.y.to_bigint().expect("lattice point"))
}

fn max_norm(p: &Point) -> BigInt {
    let (x, y) = int_coords(p);
    x.abs().max(y.abs())
}

/// `[lo, hi]` range of `y` for column `x` cut out by the closed angle.
fn column_range(a: &Angle, x: i64, r: i64) -> Option<(i64, i64)> {
    let (mut lo, mut hi) = (-r, r);
    let xs = Scalar::from_integer(x);
    // det(ray1, p) = r1.x·y − r1.y·x ≥ 0
    let bound = |rx: &Scalar, ry: &Scalar, lower_if_pos: bool, lo: &mut i64, hi: &mut i64| -> bool {
        if rx.is_zero() {
            let s = (ry * &xs).signum();
            return if lower_if_pos { s <= 0 } else { s >= 0 };
        }
        let t = ry * &xs / rx;
        let clamp = |v: BigInt| v.to_i64().unwrap_or(if v.is_negative() { i64::MIN } else { i64::MAX });
        let lower = rx.is_positive() == lower_if_pos;
        if lower {
            *lo = (*lo).max(clamp(t.ceil()));
        } else {
            *hi = (*hi).min(clamp(t.floor()));
        }
        true
    };
    if !bound(&a.ray1.x, &a.ray1.y, true, &mut lo, &mut hi) {
        return None;
    }
    // det(p, ray2) = x·r2.y − y·r2.x ≥ 0
    if !bound(&a.ray2.x, &a.ray2.y, false, &mut lo, &mut hi) {
        return None;
    }
    (lo <= hi).then_some((lo, hi))
}

/// Origin-facing hull chain of the primitive lattice points of the closed
/// angle with `max(|x|, |y|) ≤ radius`, ordered from `ray1` to `ray2`.
pub fn sail_bruteforce(a: &Angle, radius: u32) -> Result<Sail, SailError> {
    let r = radius as i64;
    let mut pts: Vec<(i64, i64)> = Vec::new();
    for x in -r..=r {
        if let Some((lo, hi)) = column_range(a, x, r) {
            for y in lo..=hi {
                if x.gcd(&y) == 1 {
                    pts.push((x, y));
                }
            }
        }
    }
    if pts.is_empty() {
        return Err(SailError::EmptyAngle);
    }
    let cross = |u: (i64, i64), v: (i64, i64)| u.0 as i128 * v.1 as i128 - u.1 as i128 * v.0 as i128;
    // Angular order inside an angle smaller than π.
    pts.sort_by(|&u, &v| 0.cmp(&cross(u, v)));
    let mut chain: Vec<(i64, i64)> = Vec::new();
    for p in pts {
        while chain.len() >= 2 {
            let (a, b) = (chain[chain.len() - 2], chain[chain.len() - 1]);
            if cross((b.0 - a.0, b.1 - a.1), (p.0 - b.0, p.1 - b.1)) >= 0 {
                chain.pop();
            } else {
                break;
            }
        }
        chain.push(p);
    }
    Ok(Sail { vertices: chain.into_iter().map(|(x, y)| Point::from_ints(x, y)).collect(), period: None })
}

/// Primitive integer vector along a ray with rational slope, if any.
fn rational_direction(r: &Point) -> Option<(BigInt, BigInt)> {
    if r.x.is_zero() {
        return Some((BigInt::zero(), BigInt::from(r.y.signum())));
    }
    let s = (&r.y / &r.x).to_rational()?;
    let sg = BigInt::from(r.x.signum());
    Some((s.denom() * &sg, s.numer() * &sg))
}

/// Sail vertices of the angle spanned by the primitive vector `v` and the
/// ray `r` (either orientation), starting at `v`, at most `depth` of them.
fn half_sail(v: &(BigInt, BigInt), r: &Point, depth: usize) -> Vec<Point> {
    let (p, q) = v;
    let e = p.extended_gcd(q);
    debug_assert!(e.gcd.is_one());
    // [[p, s], [q, t]] with p t − q s = 1
    let w = IntMatrix::new(p.clone(), -&e.y, q.clone(), e.x.clone());
    let winv = w.inverse_unimodular().expect("det 1");
    let mut g = w;
    let mut rr = &winv * r;
    if rr.y.is_negative() {
        g = &g * &IntMatrix::new(1, 0, 0, -1);
        rr = Point::new(rr.x, -rr.y);
    }
    // x ↦ x + k y makes the ray point into x > 0.
    let k: BigInt = (-&rr.x / &rr.y).floor() + 1;
    let rr = Point::new(&rr.x + &(&rr.y * &Scalar::from_bigint(k.clone())), rr.y);
    g = &g * &IntMatrix::new(1, -k, 0, 1);
    let theta = &rr.y / &rr.x;

    let mut out = vec![(BigInt::one(), BigInt::zero())];
    let (mut p1, mut q1) = (BigInt::one(), BigInt::zero());
    let (mut p2, mut q2) = (BigInt::zero(), BigInt::one());
    let mut exhausted = true;
    for (i, a) in regular_elements(&theta).enumerate() {
        let pn = &a * &p1 + &p2;
        let qn = &a * &q1 + &q2;
        p2 = std::mem::replace(&mut p1, pn);
        q2 = std::mem::replace(&mut q1, qn);
        if i % 2 == 0 && out.last() != Some(&(q1.clone(), p1.clone())) {
            out.push((q1.clone(), p1.clone()));
        }
        if out.len() >= depth {
            exhausted = false;
            break;
        }
    }
    if exhausted && out.last() != Some(&(q1.clone(), p1.clone())) {
        out.push((q1, p1));
    }
    out.truncate(depth.max(1));
    out.iter().map(|(x, y)| &g * &int_point(x, y)).collect()
}

/// Sail vertex known in the normalized frame where the kernel slopes are
/// `α ≥ 1` and `−β`, `0 < β < 1`.
fn normalized_vertex(d: &Point, alpha: &Scalar, beta: &Scalar) -> Point {
    let above_alpha = (&d.y - alpha * &d.x).is_positive();
    let above_beta = (&d.y + beta * &d.x).is_positive();
    match (above_alpha, above_beta) {
        (true, true) => Point::from_ints(0, 1),
        (false, false) => Point::from_ints(0, -1),
        (false, true) => Point::from_ints(1, 0),
        (true, false) => Point::from_ints(-1, 0),
    }
}

/// A sail vertex for an angle whose rays both have irrational slope.
fn anchor_vertex(a: &Angle) -> Result<Point, SailError> {
    let (u, alpha, beta) = reduce_slopes(&a.ray1.slope(), &a.ray2.slope())?;
    let uinv = u.inverse_unimodular().expect("det 1");
    let d = &uinv * &a.interior_direction();
    Ok(&u * &normalized_vertex(&d, &alpha, &beta))
}

/// Integer form whose kernel lines are the rays' lines, when the slopes are
/// conjugate quadratic irrationals.
fn form_of_angle(a: &Angle) -> Option<BinaryQuadraticForm> {
    let (s1, s2) = match (a.ray1.slope(), a.ray2.slope()) {
        (ProjectiveValue::Finite(s1), ProjectiveValue::Finite(s2)) => (s1, s2),
        _ => return None,
    };
    if s1.is_rational() || s1.conjugate() != s2 {
        return None;
    }
    // C s² + B s + A with C = 1
    let sum = (&s1 + &s2).to_rational()?;
    let prod = (&s1 * &s2).to_rational()?;
    let l = Rational::from_integer(sum.denom().lcm(prod.denom()));
    BinaryQuadraticForm::new(&prod * &l, -&sum * &l, l).ok()
}

/// The automorphism of the angle moving its sail toward `ray2`.
fn angle_period(a: &Angle) -> Option<IntMatrix> {
    let f = form_of_angle(a)?;
    let m = automorph(&f).ok()?;
    let probe = a.interior_direction();
    if det2(&probe, &(&m * &probe)).is_positive() {
        Some(m)
    } else {
        m.inverse_unimodular()
    }
}

/// Sail via continued fractions, with at most `depth` vertices on each side
/// of the anchor vertex.
pub fn sail_cf(a: &Angle, depth: usize) -> Result<Sail, SailError> {
    let depth = depth.max(1);
    let vertices = match (rational_direction(&a.ray1), rational_direction(&a.ray2)) {
        (Some(v1), _) => half_sail(&v1, &a.ray2, depth),
        (None, Some(v2)) => {
            let mut h = half_sail(&v2, &a.ray1, depth);
            h.reverse();
            h
        }
        (None, None) => {
            let v = int_coords(&anchor_vertex(a)?);
            let mut left = half_sail(&v, &a.ray1, depth);
            left.reverse();
            let right = half_sail(&v, &a.ray2, depth);
            left.extend(right.into_iter().skip(1));
            left
        }
    };
    Ok(Sail { vertices, period: angle_period(a) })
}

/// Kernel directions `(d1, d2)` of `f` with `det(d1, d2) > 0`.
fn kernel_directions(f: &BinaryQuadraticForm) -> (Point, Point) {
    let ff = factor(f);
    let d1 = ff.first.kernel_direction();
    let d2 = ff.second.kernel_direction();
    if det2(&d1, &d2).is_positive() {
        (d1, d2)
    } else {
        (d2, d1)
    }
}

/// The four angles of the kernel complement, counterclockwise.
pub fn angles_of_form(f: &BinaryQuadraticForm) -> [Angle; 4] {
    let (d1, d2) = kernel_directions(f);
    let (n1, n2) = (-&d1, -&d2);
    let mk = |a: &Point, b: &Point| Angle::new(a.clone(), b.clone()).expect("kernel lines are distinct");
    [mk(&d1, &d2), mk(&d2, &n1), mk(&n1, &n2), mk(&n2, &d1)]
}

pub fn sails_of_form(f: &BinaryQuadraticForm, depth: usize) -> Result<[Sail; 4], SailError> {
    let [a, b, c, d] = angles_of_form(f);
    Ok([sail_cf(&a, depth)?, sail_cf(&b, depth)?, sail_cf(&c, depth)?, sail_cf(&d, depth)?])
}

/// Outcome of comparing a CF sail with a brute-force chain of radius `R`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleVerdict {
    Agree { compared: usize },
    Mismatch { detail: String },
}

/// The CF vertices inside the box must appear as one contiguous run of the
/// brute-force chain, with nothing in between.
pub fn compare_with_oracle(cf: &Sail, brute: &Sail, radius: u32) -> OracleVerdict {
    let r = BigInt::from(radius);
    let inside: Vec<usize> = (0..cf.vertices.len()).filter(|&i| max_norm(&cf.vertices[i]) <= r).collect();
    let (Some(&i0), Some(&i1)) = (inside.first(), inside.last()) else {
        return OracleVerdict::Agree { compared: 0 };
    };
    let run = &cf.vertices[i0..=i1];
    if run.len() != inside.len() {
        return OracleVerdict::Mismatch { detail: "CF vertices leave and re-enter the box".into() };
    }
    let pos = |p: &Point| brute.vertices.iter().position(|q| q == p);
    let (Some(j0), Some(j1)) = (pos(&run[0]), pos(&run[run.len() - 1])) else {
        return OracleVerdict::Mismatch { detail: format!("vertex {} or {} missing from the oracle chain", run[0], run[run.len() - 1]) };
    };
    if j1 < j0 || brute.vertices[j0..=j1] != *run {
        return OracleVerdict::Mismatch {
            detail: format!(
                "chains differ between {} and {}: cf has {}, oracle has {}",
                run[0],
                run[run.len() - 1],
                run.len(),
                j1.saturating_sub(j0) + 1
            ),
        };
    }
    OracleVerdict::Agree { compared: run.len() }
}

/// Minimum of `|f|` over lattice points with `0 < max(|x|, |y|) ≤ radius`.
/// Ties prefer smaller max-norm, then smaller `|y|`, `|x|`, then `x ≥ 0`,
/// `y ≥ 0`.
pub fn markov_minimum_bruteforce(f: &BinaryQuadraticForm, radius: u32) -> (Scalar, Point) {
    let l = f.coefficients().iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = f.coefficients().iter().map(|c| (*c * Rational::from_integer(l.clone())).to_integer()).collect();
    let small: Option<Vec<i128>> = ints.iter().map(|c| c.to_i64().map(i128::from)).collect();
    let r = radius as i64;
    let key = |x: i64, y: i64| (x.abs().max(y.abs()), y.abs(), x.abs(), x < 0, y < 0);
    // f(−p) = f(p): scan x > 0, and x = 0 with y > 0.
    let scan = |eval: &mut dyn FnMut(i64, i64)| {
        for y in 1..=r {
            eval(0, y);
        }
        for x in 1..=r {
            for y in -r..=r {
                eval(x, y);
            }
        }
    };
    let (value, x, y) = match small.filter(|_| radius <= 1 << 20) {
        Some(c) => {
            let mut best: Option<(u128, i64, i64)> = None;
            scan(&mut |x, y| {
                let (xx, yy) = (x as i128, y as i128);
                let v = (c[0] * xx * xx + c[1] * xx * yy + c[2] * yy * yy).unsigned_abs();
                if best.is_none_or(|(bv, bx, by)| (v, key(x, y)) < (bv, key(bx, by))) {
                    best = Some((v, x, y));
                }
            });
            let (v, x, y) = best.expect("radius ≥ 1");
            (BigInt::from(v), x, y)
        }
        None => {
            let mut best: Option<(BigInt, i64, i64)> = None;
            scan(&mut |x, y| {
                let (xx, yy) = (BigInt::from(x), BigInt::from(y));
                let v = (&ints[0] * &xx * &xx + &ints[1] * &xx * &yy + &ints[2] * &yy * &yy).abs();
                let better = match &best {
                    None => true,
                    Some((bv, bx, by)) => (&v, key(x, y)) < (bv, key(*bx, *by)),
                };
                if better {
                    best = Some((v, x, y));
                }
            });
            best.expect("radius ≥ 1")
        }
    };
    (Scalar::from_rational(&Rational::new(value, l)), Point::from_ints(x, y))
}

/// Witness order shared with [`markov_minimum_bruteforce`].
fn tie_key(p: &Point) -> (BigInt, BigInt, BigInt, bool, bool) {
    let (x, y) = int_coords(p);
    (x.abs().max(y.abs()), y.abs(), x.abs(), x.is_negative(), y.is_negative())
}

/// Vertices `V_0 … V_p` of one period, `V_p = M V_0`, starting at the anchor.
fn one_period(a: &Angle, m: &IntMatrix, max_depth: usize) -> Result<Vec<Point>, SailError> {
    let v = int_coords(&anchor_vertex(a)?);
    let target = m * &int_point(&v.0, &v.1);
    let mut depth = max_depth.min(16);
    loop {
        let chain = half_sail(&v, &a.ray2, depth);
        if let Some(i) = chain.iter().position(|p| *p == target) {
            return Ok(chain[..=i].to_vec());
        }
        if depth >= max_depth {
            return Err(SailError::NoPeriod);
        }
        depth = (depth * 2).min(max_depth);
    }
}

/// Periodic two-sided LLS sequence of a sail centered at vertex `j` of one
/// period `V_0 … V_p`.
fn sail_sequence(period: &[Point], m: &IntMatrix, j: usize) -> Result<TwoSidedSequence, SailError> {
    let p = period.len() - 1;
    let minv = m.inverse_unimodular().expect("det 1");
    // V_{−1}, V_0, …, V_p, V_{p+1}
    let mut v = vec![&minv * &period[p - 1]];
    v.extend(period.iter().cloned());
    v.push(m * &period[1]);
    let at = |k: usize| &v[k + 1];
    let e: Vec<Scalar> = (0..p).map(|k| det2(at(k), at(k + 1))).collect();
    let o: Vec<Scalar> = (0..p)
        .map(|k| {
            let em = if k == 0 { &e[p - 1] } else { &e[k - 1] };
            let prev = if k == 0 { &v[0] } else { at(k - 1) };
            det2(&(prev - at(k)), &(at(k + 1) - at(k))) / (em * &e[k])
        })
        .collect();
    // Interleaved period o_0, e_0, o_1, e_1, …
    let seq: Vec<Scalar> = (0..p).flat_map(|k| [o[k].clone(), e[k].clone()]).collect();
    let n = seq.len();
    let c = 2 * j;
    let right: Vec<Scalar> = (0..n).map(|i| seq[(c + i) % n].clone()).collect();
    let left: Vec<Scalar> = (1..=n).map(|i| seq[(c + n - i) % n].clone()).collect();
    let periodic = |v: Vec<Scalar>| crate::cf::CfPeriodic::new(Vec::new(), v).map(Side::Periodic);
    Ok(TwoSidedSequence {
        left: periodic(left).map_err(PerronError::from)?,
        right: periodic(right).map_err(PerronError::from)?,
    })
}

/// Markov minimum from the vertices of the four sails over one period each,
/// with the asymptotic identity evaluated at the minimizing vertex. `depth`
/// caps the number of vertices searched for the period.
pub fn markov_minimum_sails(f: &BinaryQuadraticForm, depth: usize) -> Result<SpectrumReport, SailError> {
    if !f.is_integral() {
        return Err(SailError::NonIntegerCoefficients);
    }
    if f.has_square_discriminant() {
        return Err(SailError::SquareDiscriminant);
    }
    let mut best: Option<(Scalar, Angle, Vec<Point>, IntMatrix, usize)> = None;
    for a in angles_of_form(f) {
        let m = angle_period(&a).ok_or(SailError::NoPeriod)?;
        let period = one_period(&a, &m, depth.max(2))?;
        for (j, v) in period[..period.len() - 1].iter().enumerate() {
            let val = f.evaluate(v).abs();
            let better = match &best {
                None => true,
                Some((b, _, p, _, k)) => val < *b || (val == *b && tie_key(v) < tie_key(&p[*k])),
            };
            if better {
                best = Some((val, a.clone(), period.clone(), m.clone(), j));
            }
        }
    }
    let (minimum, angle, period, m, j) = best.expect("four sails");
    let witness = period[j].clone();
    let value = f.evaluate(&witness);
    let sign = Sign::of(&f.evaluate(&angle.interior_direction())).expect("interior point off the kernel");
    let seq = sail_sequence(&period, &m, j)?;
    let term: PerronTerm = perron_rhs_infinite(f, &seq, 0, sign)?;
    if term.value != value {
        return Err(SailError::IdentityMismatch { value, identity: term.value });
    }
    let normalized = &f.sqrt_discriminant() / &minimum;
    Ok(SpectrumReport { form: f.clone(), minimum, normalized, witness, term })
}
