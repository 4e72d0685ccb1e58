//! JSON formats for scalars, broken lines, forms, sails and render scenes.
//!
//! Scalars are `"p/q"` strings (or plain integers) for rationals and
//! `{"p": .., "q": .., "r": .., "D": ..}` for `(p + q√D)/r`.

use crate::exactnum::{format_rational, parse_rational, IntMatrix, NumError, QuadraticNumber, Scalar};
use crate::forms::{BinaryQuadraticForm, FormError};
use crate::geometry::{BrokenLine, GeometryError, Point};
use crate::sail::Sail;
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("cannot read {path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Num(#[from] NumError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Form(#[from] FormError),
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
#[serde(untagged)]
pub enum JsonInt {
    Small(i64),
    Big(String),
}

impl JsonInt {
    fn from_bigint(n: &BigInt) -> Self {
        n.to_i64().map_or_else(|| JsonInt::Big(n.to_string()), JsonInt::Small)
    }

    fn to_bigint(&self) -> Result<BigInt, IoError> {
        match self {
            JsonInt::Small(n) => Ok(BigInt::from(*n)),
            JsonInt::Big(s) => s.trim().parse().map_err(|_| IoError::Invalid(format!("not an integer: {s:?}"))),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Surd {
    p: JsonInt,
    q: JsonInt,
    r: JsonInt,
    #[serde(rename = "D")]
    d: JsonInt,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum ScalarRepr {
    Int(i64),
    Text(String),
    Surd(Surd),
}

/// A scalar with its JSON representation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JsonScalar(pub Scalar);

impl Serialize for JsonScalar {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let x = &self.0;
        let repr = match x.to_rational() {
            Some(r) => ScalarRepr::Text(format_rational(&r)),
            None => ScalarRepr::Surd(Surd {
                p: JsonInt::from_bigint(x.p()),
                q: JsonInt::from_bigint(x.q()),
                r: JsonInt::from_bigint(x.r()),
                d: JsonInt::from_bigint(x.radicand().expect("irrational")),
            }),
        };
        repr.serialize(s)
    }
}

impl<'de> Deserialize<'de> for JsonScalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let repr = ScalarRepr::deserialize(d)?;
        let x = match repr {
            ScalarRepr::Int(n) => Scalar::from_integer(n),
            ScalarRepr::Text(t) => Scalar::from_rational(&parse_rational(&t).map_err(D::Error::custom)?),
            ScalarRepr::Surd(s) => {
                let g = |v: &JsonInt| v.to_bigint().map_err(D::Error::custom);
                QuadraticNumber::new(g(&s.p)?, g(&s.q)?, g(&s.r)?, g(&s.d)?).map_err(D::Error::custom)?
            }
        };
        Ok(JsonScalar(x))
    }
}

pub type JsonPoint = [JsonScalar; 2];

fn point_of(p: &JsonPoint) -> Result<Point, IoError> {
    Ok(Point::checked(p[0].0.clone(), p[1].0.clone())?)
}

fn json_point(p: &Point) -> JsonPoint {
    [JsonScalar(p.x.clone()), JsonScalar(p.y.clone())]
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct LineJson {
    pub vertices: Vec<JsonPoint>,
}

impl LineJson {
    pub fn from_line(b: &BrokenLine) -> Self {
        LineJson { vertices: b.vertices().iter().map(json_point).collect() }
    }

    pub fn to_line(&self) -> Result<BrokenLine, IoError> {
        let v = self.vertices.iter().map(point_of).collect::<Result<Vec<_>, _>>()?;
        Ok(BrokenLine::new(v)?)
    }
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
#[serde(untagged)]
pub enum FormJson {
    Coefficients(Coefficients),
    Factors(Factors),
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Coefficients {
    #[serde(rename = "A")]
    pub a: JsonScalar,
    #[serde(rename = "B")]
    pub b: JsonScalar,
    #[serde(rename = "C")]
    pub c: JsonScalar,
}

/// `scale · (a x − b y)(c x − d y)`.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Factors {
    pub factors: [[JsonScalar; 2]; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scale: Option<JsonScalar>,
}

impl FormJson {
    pub fn from_form(f: &BinaryQuadraticForm) -> Self {
        let [a, b, c] = f.coefficients().map(|x| JsonScalar(Scalar::from_rational(x)));
        FormJson::Coefficients(Coefficients { a, b, c })
    }

    pub fn to_form(&self) -> Result<BinaryQuadraticForm, IoError> {
        match self {
            FormJson::Coefficients(c) => {
                let r = |x: &JsonScalar| {
                    x.0.to_rational().ok_or_else(|| IoError::Invalid("form coefficients must be rational".into()))
                };
                Ok(BinaryQuadraticForm::new(r(&c.a)?, r(&c.b)?, r(&c.c)?)?)
            }
            FormJson::Factors(fa) => {
                let one = Scalar::from_integer(1);
                let scale = fa.scale.as_ref().map_or(&one, |s| &s.0);
                let [[a, b], [c, d]] = &fa.factors;
                Ok(BinaryQuadraticForm::from_factors(scale, (&a.0, &b.0), (&c.0, &d.0))?)
            }
        }
    }
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SailJson {
    pub vertices: Vec<JsonPoint>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub period: Option<[[JsonInt; 2]; 2]>,
}

impl SailJson {
    pub fn from_sail(s: &Sail) -> Self {
        SailJson {
            vertices: s.vertices.iter().map(json_point).collect(),
            period: s.period.as_ref().map(|m| m.rows().map(|row| row.map(|x| JsonInt::from_bigint(&x)))),
        }
    }

    pub fn to_sail(&self) -> Result<Sail, IoError> {
        let vertices = self.vertices.iter().map(point_of).collect::<Result<Vec<_>, _>>()?;
        if vertices.iter().any(|p| !(p.x.is_integer() && p.y.is_integer())) {
            return Err(IoError::Invalid("sail vertices must be lattice points".into()));
        }
        let period = match &self.period {
            None => None,
            Some([[a, b], [c, d]]) => Some(IntMatrix::new(a.to_bigint()?, b.to_bigint()?, c.to_bigint()?, d.to_bigint()?)),
        };
        Ok(Sail { vertices, period })
    }
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SceneLine {
    pub vertices: Vec<JsonPoint>,
    /// Vertex label stem, `A` gives `A₀, A₁, …`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ScenePoint {
    pub at: JsonPoint,
    pub label: String,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Viewport {
    pub xmin: JsonScalar,
    pub xmax: JsonScalar,
    pub ymin: JsonScalar,
    pub ymax: JsonScalar,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Default)]
#[serde(deny_unknown_fields)]
pub struct SceneJson {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub forms: Vec<FormJson>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub lines: Vec<SceneLine>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sails: Vec<SailJson>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub points: Vec<ScenePoint>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub viewport: Option<Viewport>,
}

/// Inline JSON when the argument starts with `{`, a file path otherwise.
pub fn read_source(arg: &str) -> Result<String, IoError> {
    if arg.trim_start().starts_with('{') {
        Ok(arg.to_string())
    } else {
        std::fs::read_to_string(arg).map_err(|source| IoError::Read { path: arg.to_string(), source })
    }
}

pub fn parse<T: serde::de::DeserializeOwned>(arg: &str) -> Result<T, IoError> {
    Ok(serde_json::from_str(&read_source(arg)?)?)
}

pub fn read_line(arg: &str) -> Result<BrokenLine, IoError> {
    parse::<LineJson>(arg)?.to_line()
}

pub fn read_form(arg: &str) -> Result<BinaryQuadraticForm, IoError> {
    parse::<FormJson>(arg)?.to_form()
}

/// Scalar from the text syntax, or a JSON surd object.
pub fn parse_scalar(text: &str) -> Result<Scalar, IoError> {
    Ok(serde_json::from_str::<JsonScalar>(text)
        .or_else(|_| parse_rational(text).map(|r| JsonScalar(Scalar::from_rational(&r))))?
        .0)
}

pub fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("serializable")
}
