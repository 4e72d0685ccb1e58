//! Points, broken lines and their LLS sequences.
//!
//! For a broken line `A_0 … A_n` the LLS sequence has `2n + 1` entries:
//! `a_{2k} = det(OA_k, OA_{k+1})` and
//! `a_{2k−1} = det(A_kA_{k−1}, A_kA_{k+1}) / (a_{2k−2} a_{2k})`.

use crate::cf::{CfFinite, ProjectiveValue};
use crate::exactnum::{common_radicand, IntMatrix, Matrix2, NumError, Scalar, Sign};
use crate::forms::BinaryQuadraticForm;
use num_traits::{One, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GeometryError {
    #[error("a broken line needs at least two vertices")]
    TooFewVertices,
    #[error("vertices {0} and {} coincide", .0 + 1)]
    RepeatedVertex(usize),
    #[error("vertex {0} is the origin")]
    OriginVertex(usize),
    #[error("the line through edge {0} passes through the origin")]
    EdgeThroughOrigin(usize),
    #[error("vertices {} , {0}, {} are collinear", .0 - 1, .0 + 1)]
    CollinearVertex(usize),
    #[error("the endpoints are collinear with the origin")]
    SignatureUndefined,
    #[error("an LLS sequence has odd length")]
    EvenLength,
    #[error("LLS entry {0} is zero")]
    ZeroEntry(usize),
    #[error("matrix does not have determinant 1")]
    NotUnimodular,
    #[error(transparent)]
    Num(#[from] NumError),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Point {
    pub x: Scalar,
    pub y: Scalar,
}

impl Point {
    pub fn new(x: Scalar, y: Scalar) -> Self {
        Point { x, y }
    }

    pub fn checked(x: Scalar, y: Scalar) -> Result<Self, NumError> {
        common_radicand([&x, &y])?;
        Ok(Point { x, y })
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        Point::new(Scalar::from_integer(x), Scalar::from_integer(y))
    }

    pub fn origin() -> Self {
        Point::new(Scalar::zero(), Scalar::zero())
    }

    pub fn is_origin(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn scale(&self, t: &Scalar) -> Point {
        Point::new(&self.x * t, &self.y * t)
    }

    /// `y / x` on the projective line.
    pub fn slope(&self) -> ProjectiveValue {
        ProjectiveValue::from_ratio(&self.y, &self.x)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl Add for &Point {
    type Output = Point;
    fn add(self, o: &Point) -> Point {
        Point::new(&self.x + &o.x, &self.y + &o.y)
    }
}

impl Sub for &Point {
    type Output = Point;
    fn sub(self, o: &Point) -> Point {
        Point::new(&self.x - &o.x, &self.y - &o.y)
    }
}

impl Neg for &Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-&self.x, -&self.y)
    }
}

impl Mul<&Point> for &Matrix2 {
    type Output = Point;
    fn mul(self, p: &Point) -> Point {
        let (x, y) = self.apply(&p.x, &p.y);
        Point::new(x, y)
    }
}

impl Mul<&Point> for &IntMatrix {
    type Output = Point;
    fn mul(self, p: &Point) -> Point {
        let (x, y) = self.apply(&p.x, &p.y);
        Point::new(x, y)
    }
}

/// Oriented area `u.x·v.y − u.y·v.x`.
pub fn det2(u: &Point, v: &Point) -> Scalar {
    &u.x * &v.y - &u.y * &v.x
}

/// An ordered list of at least two vertices with positive-length edges,
/// none of them at the origin.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BrokenLine {
    vertices: Vec<Point>,
}

impl BrokenLine {
    pub fn new(vertices: Vec<Point>) -> Result<Self, GeometryError> {
        if vertices.len() < 2 {
            return Err(GeometryError::TooFewVertices);
        }
        common_radicand(vertices.iter().flat_map(|p| [&p.x, &p.y]))?;
        for (k, v) in vertices.iter().enumerate() {
            if v.is_origin() {
                return Err(GeometryError::OriginVertex(k));
            }
        }
        for (k, w) in vertices.windows(2).enumerate() {
            if w[0] == w[1] {
                return Err(GeometryError::RepeatedVertex(k));
            }
        }
        Ok(BrokenLine { vertices })
    }

    pub fn from_ints(xs: &[(i64, i64)]) -> Result<Self, GeometryError> {
        Self::new(xs.iter().map(|&(x, y)| Point::from_ints(x, y)).collect())
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn into_vertices(self) -> Vec<Point> {
        self.vertices
    }

    pub fn first(&self) -> &Point {
        &self.vertices[0]
    }

    pub fn last(&self) -> &Point {
        self.vertices.last().expect("nonempty")
    }

    /// Number of edges.
    pub fn edges(&self) -> usize {
        self.vertices.len() - 1
    }
}

/// Odd-length sequence of nonzero scalars.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LlsSequence {
    entries: Vec<Scalar>,
}

impl LlsSequence {
    pub fn new(entries: Vec<Scalar>) -> Result<Self, GeometryError> {
        if entries.len().is_multiple_of(2) {
            return Err(GeometryError::EvenLength);
        }
        common_radicand(&entries)?;
        if let Some(i) = entries.iter().position(|a| a.is_zero()) {
            return Err(GeometryError::ZeroEntry(i));
        }
        Ok(LlsSequence { entries })
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// The continued fraction `[a_0; a_1 : … : a_{2n}]`.
    pub fn continued_fraction(&self) -> CfFinite {
        CfFinite::new(self.entries.clone()).expect("entries are nonzero")
    }
}

impl fmt::Display for LlsSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.entries.iter().map(|a| a.to_string()).collect();
        write!(f, "({})", items.join(", "))
    }
}

pub fn lls(b: &BrokenLine) -> Result<LlsSequence, GeometryError> {
    let v = &b.vertices;
    let areas: Vec<Scalar> = v.windows(2).map(|w| det2(&w[0], &w[1])).collect();
    if let Some(k) = areas.iter().position(|a| a.is_zero()) {
        return Err(GeometryError::EdgeThroughOrigin(k));
    }
    let mut entries = Vec::with_capacity(2 * areas.len() - 1);
    entries.push(areas[0].clone());
    for k in 1..areas.len() {
        let turn = det2(&(&v[k - 1] - &v[k]), &(&v[k + 1] - &v[k]));
        if turn.is_zero() {
            return Err(GeometryError::CollinearVertex(k));
        }
        entries.push(turn / (&areas[k - 1] * &areas[k]));
        entries.push(areas[k].clone());
    }
    LlsSequence::new(entries)
}

/// Sign of `det(OA_0, OA_n)`.
pub fn signature(b: &BrokenLine) -> Result<Sign, GeometryError> {
    Sign::of(&det2(b.first(), b.last())).ok_or(GeometryError::SignatureUndefined)
}

/// The broken line with `A_0 = (1, 0)`, `A_1 = (1, a_0)` and the given LLS
/// sequence.
pub fn reconstruct(s: &LlsSequence) -> BrokenLine {
    let a = &s.entries;
    let mut v = vec![Point::new(Scalar::one(), Scalar::zero()), Point::new(Scalar::one(), a[0].clone())];
    for k in 1..=a.len() / 2 {
        let cur = &v[k];
        let u = &v[k - 1] - cur;
        // det(A_k, X) = a_{2k} and det(u, X) = a_{2k−1} a_{2k−2} a_{2k} + a_{2k−2}
        let r1 = a[2 * k].clone();
        let r2 = &a[2 * k - 1] * &a[2 * k - 2] * &a[2 * k] + &a[2 * k - 2];
        let (m11, m12) = (-&cur.y, cur.x.clone());
        let (m21, m22) = (-&u.y, u.x.clone());
        let det = &m11 * &m22 - &m12 * &m21;
        debug_assert!(!det.is_zero());
        let x = (&r1 * &m22 - &m12 * &r2) / &det;
        let y = (&m11 * &r2 - &m21 * &r1) / &det;
        v.push(Point::new(x, y));
    }
    BrokenLine::new(v).expect("nonzero LLS entries give a valid broken line")
}

pub fn apply_unimodular(m: &IntMatrix, b: &BrokenLine) -> Result<BrokenLine, GeometryError> {
    if !m.det().is_one() {
        return Err(GeometryError::NotUnimodular);
    }
    Ok(BrokenLine { vertices: b.vertices.iter().map(|p| m * p).collect() })
}

/// Vertex-wise image under a determinant-1 map with scalar entries.
pub fn apply_linear(m: &Matrix2, b: &BrokenLine) -> Result<BrokenLine, GeometryError> {
    common_radicand(m.entries().into_iter().chain(b.vertices.iter().flat_map(|p| [&p.x, &p.y])))?;
    if !m.det().is_one() {
        return Err(GeometryError::NotUnimodular);
    }
    Ok(BrokenLine { vertices: b.vertices.iter().map(|p| m * p).collect() })
}

/// Endpoints on the two distinct kernel lines of `f` and no edge line
/// through the origin.
pub fn is_f_broken_line(b: &BrokenLine, f: &BinaryQuadraticForm) -> Result<bool, GeometryError> {
    let first = f.try_evaluate(b.first())?;
    let last = f.try_evaluate(b.last())?;
    if !first.is_zero() || !last.is_zero() {
        return Ok(false);
    }
    if det2(b.first(), b.last()).is_zero() {
        return Ok(false);
    }
    Ok(b.vertices.windows(2).all(|w| !det2(&w[0], &w[1]).is_zero()))
}
