use super::Scalar;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::fmt;
use std::ops::Mul;

/// 2×2 matrix `[[a, b], [c, d]]` over exact scalars.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix2 {
    pub a: Scalar,
    pub b: Scalar,
    pub c: Scalar,
    pub d: Scalar,
}

impl Matrix2 {
    pub fn new(a: Scalar, b: Scalar, c: Scalar, d: Scalar) -> Self {
        Matrix2 { a, b, c, d }
    }

    pub fn identity() -> Self {
        Matrix2::new(Scalar::one(), Scalar::zero(), Scalar::zero(), Scalar::one())
    }

    pub fn det(&self) -> Scalar {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn trace(&self) -> Scalar {
        &self.a + &self.d
    }

    pub fn apply(&self, x: &Scalar, y: &Scalar) -> (Scalar, Scalar) {
        (&self.a * x + &self.b * y, &self.c * x + &self.d * y)
    }

    /// Scalar multiple of the identity.
    pub fn is_scalar(&self) -> bool {
        self.b.is_zero() && self.c.is_zero() && self.a == self.d
    }

    pub fn entries(&self) -> [&Scalar; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }
}

impl Mul<&Matrix2> for &Matrix2 {
    type Output = Matrix2;
    fn mul(self, m: &Matrix2) -> Matrix2 {
        Matrix2::new(
            &self.a * &m.a + &self.b * &m.c,
            &self.a * &m.b + &self.b * &m.d,
            &self.c * &m.a + &self.d * &m.c,
            &self.c * &m.b + &self.d * &m.d,
        )
    }
}

/// 2×2 integer matrix `[[a, b], [c, d]]`, acting on column vectors.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
}

impl IntMatrix {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>, c: impl Into<BigInt>, d: impl Into<BigInt>) -> Self {
        IntMatrix { a: a.into(), b: b.into(), c: c.into(), d: d.into() }
    }

    pub fn identity() -> Self {
        IntMatrix::new(1, 0, 0, 1)
    }

    pub fn det(&self) -> BigInt {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn trace(&self) -> BigInt {
        &self.a + &self.d
    }

    /// Inverse of a matrix with determinant ±1.
    pub fn inverse_unimodular(&self) -> Option<IntMatrix> {
        let det = self.det();
        if det.is_one() {
            Some(IntMatrix { a: self.d.clone(), b: -&self.b, c: -&self.c, d: self.a.clone() })
        } else if det == -BigInt::one() {
            Some(IntMatrix { a: -&self.d, b: self.b.clone(), c: self.c.clone(), d: -&self.a })
        } else {
            None
        }
    }

    pub fn neg(&self) -> IntMatrix {
        IntMatrix { a: -&self.a, b: -&self.b, c: -&self.c, d: -&self.d }
    }

    pub fn to_scalar(&self) -> Matrix2 {
        Matrix2::new(
            self.a.clone().into(),
            self.b.clone().into(),
            self.c.clone().into(),
            self.d.clone().into(),
        )
    }

    pub fn apply(&self, x: &Scalar, y: &Scalar) -> (Scalar, Scalar) {
        self.to_scalar().apply(x, y)
    }

    pub fn rows(&self) -> [[BigInt; 2]; 2] {
        [[self.a.clone(), self.b.clone()], [self.c.clone(), self.d.clone()]]
    }
}

impl Mul<&IntMatrix> for &IntMatrix {
    type Output = IntMatrix;
    fn mul(self, m: &IntMatrix) -> IntMatrix {
        IntMatrix {
            a: &self.a * &m.a + &self.b * &m.c,
            b: &self.a * &m.b + &self.b * &m.d,
            c: &self.c * &m.a + &self.d * &m.c,
            d: &self.c * &m.b + &self.d * &m.d,
        }
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}
