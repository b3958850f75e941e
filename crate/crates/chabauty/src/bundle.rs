//! Input bundles: the curve, the auxiliary prime, Mordell-Weil generators and
//! optional bad-prime data, all in one JSON document.
//!
//! Field elements are written as integers, strings `"n/m"`, or pairs `[a, b]`
//! meaning a + b w with w^2 = d.

use heights::BadPrimeData;
use hyperelliptic::{qpoly, BaseField, CurveModel, IntPoint, QPoly, QuadElem};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Deserialize;
use serde_json::Value;

use crate::ChabautyError;

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
enum FieldSpec {
    Name(String),
    Quadratic {
        #[serde(alias = "disc")]
        d: i64,
    },
}

#[derive(Clone, Debug, Deserialize)]
struct TermSpec {
    #[serde(default)]
    point: Option<[Value; 2]>,
    #[serde(default)]
    mumford: Option<MumfordSpec>,
    #[serde(default = "one")]
    mult: i64,
}

fn one() -> i64 {
    1
}

#[derive(Clone, Debug, Deserialize)]
struct MumfordSpec {
    u: Vec<Value>,
    v: Vec<Value>,
}

#[derive(Clone, Debug, Deserialize)]
struct GeneratorSpec {
    id: String,
    terms: Vec<TermSpec>,
}

#[derive(Clone, Debug, Deserialize)]
struct RawBundle {
    f: Vec<Value>,
    #[serde(default)]
    field: Option<FieldSpec>,
    p: u64,
    #[serde(default)]
    precision: Option<u32>,
    #[serde(default)]
    search_bound: Option<u64>,
    #[serde(default)]
    base_point: Option<[Value; 2]>,
    #[serde(default)]
    known_points: Vec<[Value; 2]>,
    #[serde(default)]
    generators: Vec<GeneratorSpec>,
    #[serde(default)]
    bad_primes: Option<Value>,
}

#[derive(Clone, Debug, Deserialize)]
struct RawCurve {
    f: Vec<Value>,
    #[serde(default)]
    field: Option<FieldSpec>,
}

fn field_of(spec: Option<FieldSpec>) -> Result<BaseField, ChabautyError> {
    match spec {
        None => Ok(BaseField::Rationals),
        Some(FieldSpec::Name(s)) if s == "Q" => Ok(BaseField::Rationals),
        Some(FieldSpec::Name(s)) => Err(bad(format!("unknown field {s}"))),
        Some(FieldSpec::Quadratic { d }) => Ok(BaseField::RealQuadratic { d }),
    }
}

/// Only the field and the coefficients of f, with no conditions on the model.
pub fn parse_coefficients(text: &str) -> Result<(BaseField, QPoly), ChabautyError> {
    let raw: RawCurve = serde_json::from_str(text).map_err(|e| bad(format!("bundle: {e}")))?;
    let field = field_of(raw.field)?;
    Ok((field, parse_poly(&raw.f, field.d())?))
}

/// One summand of a divisor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Term {
    Point(IntPoint),
    /// The points (x, v(x)) over the roots of monic u.
    Mumford { u: QPoly, v: QPoly },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub id: String,
    pub terms: Vec<(Term, i64)>,
}

impl Generator {
    /// A divisor sum m_i P_i of points.
    pub fn from_points(id: &str, pts: &[(IntPoint, i64)]) -> Self {
        Generator { id: id.to_string(), terms: pts.iter().map(|(p, m)| (Term::Point(p.clone()), *m)).collect() }
    }

    pub fn degree(&self) -> i64 {
        self.terms
            .iter()
            .map(|(t, m)| match t {
                Term::Point(_) => *m,
                Term::Mumford { u, .. } => m * (u.len() as i64 - 1),
            })
            .sum()
    }

    /// Whether every point of the support has integral coordinates.
    pub fn integral_support(&self) -> bool {
        self.terms.iter().all(|(t, _)| match t {
            Term::Point(p) => p.x.is_integral() && p.y.is_integral(),
            Term::Mumford { u, v } => {
                u.last().is_some_and(|c| c.is_one()) && u.iter().chain(v).all(|c| c.is_integral())
            }
        })
    }

    /// The same divisor on the monic model reached by (x, y) -> (b^2 x, b^(2g+1) y).
    pub fn forward(&self, map: &hyperelliptic::PointMap) -> Self {
        if map.is_identity() {
            return self.clone();
        }
        let b2 = &map.b * &map.b;
        let mut by = QuadElem::one(map.b.d);
        for _ in 0..2 * map.genus + 1 {
            by = &by * &map.b;
        }
        let b2_inv = b2.inv().expect("b is nonzero");
        let terms = self
            .terms
            .iter()
            .map(|(t, m)| {
                let t = match t {
                    Term::Point(p) => Term::Point(map.forward(p)),
                    Term::Mumford { u, v } => {
                        // roots scale by b^2; v(x) becomes b^(2g+1) v(X / b^2)
                        let n = u.len() - 1;
                        let mut scale = QuadElem::one(map.b.d);
                        let mut new_u = vec![QuadElem::zero(map.b.d); n + 1];
                        for k in (0..=n).rev() {
                            new_u[k] = &u[k] * &scale;
                            scale = &scale * &b2;
                        }
                        let mut s = by.clone();
                        let new_v = v
                            .iter()
                            .map(|c| {
                                let out = c * &s;
                                s = &s * &b2_inv;
                                out
                            })
                            .collect();
                        Term::Mumford { u: new_u, v: new_v }
                    }
                };
                (t, *m)
            })
            .collect();
        Generator { id: self.id.clone(), terms }
    }
}

/// A parsed bundle, on the model as given.
#[derive(Clone, Debug)]
pub struct Bundle {
    pub model: CurveModel,
    pub p: u64,
    pub precision: Option<u32>,
    pub search_bound: Option<u64>,
    pub base_point: Option<IntPoint>,
    pub known_points: Vec<IntPoint>,
    pub generators: Vec<Generator>,
    pub bad_primes: Vec<BadPrimeData>,
}

fn bad(msg: impl Into<String>) -> ChabautyError {
    ChabautyError::Input(msg.into())
}

fn rational(v: &Value) -> Result<BigRational, ChabautyError> {
    match v {
        Value::Number(n) => {
            let s = n.to_string();
            let i: BigInt = s.parse().map_err(|_| bad(format!("not an integer: {s}")))?;
            Ok(BigRational::from_integer(i))
        }
        Value::String(s) => QuadElem::parse_rational(s).ok_or_else(|| bad(format!("not a rational number: {s}"))),
        other => Err(bad(format!("expected a number, found {other}"))),
    }
}

/// A field element written as a number, a string, or a pair [a, b].
pub fn parse_elem(v: &Value, d: i64) -> Result<QuadElem, ChabautyError> {
    match v {
        Value::Array(pair) if pair.len() == 2 => {
            if d == 0 {
                return Err(bad("pairs [a, b] need a quadratic field"));
            }
            Ok(QuadElem { a: rational(&pair[0])?, b: rational(&pair[1])?, d })
        }
        other => Ok(QuadElem::from_rational(rational(other)?, d)),
    }
}

fn parse_poly(vs: &[Value], d: i64) -> Result<QPoly, ChabautyError> {
    vs.iter().map(|v| parse_elem(v, d)).collect()
}

fn parse_point(v: &[Value; 2], d: i64) -> Result<IntPoint, ChabautyError> {
    Ok(IntPoint::new(parse_elem(&v[0], d)?, parse_elem(&v[1], d)?))
}

fn build_generator(g: &GeneratorSpec, model: &CurveModel) -> Result<Generator, ChabautyError> {
    let d = model.d();
    let mut terms = Vec::new();
    for t in &g.terms {
        let term = match (&t.point, &t.mumford) {
            (Some(p), None) => {
                let pt = parse_point(p, d)?;
                if !model.contains(&pt) {
                    return Err(bad(format!("generator {}: {pt} is not on the curve", g.id)));
                }
                Term::Point(pt)
            }
            (None, Some(m)) => {
                let (u, v) = (parse_poly(&m.u, d)?, parse_poly(&m.v, d)?);
                let (_, r) = qpoly::divmod(&qpoly::sub(&qpoly::mul(&v, &v), &model.f), &u);
                if !qpoly::trim(r).is_empty() || !u.last().is_some_and(|c| c.is_one()) {
                    return Err(bad(format!("generator {}: (u, v) is not a Mumford pair on the curve", g.id)));
                }
                Term::Mumford { u, v }
            }
            _ => return Err(bad(format!("generator {}: each term needs exactly one of point, mumford", g.id))),
        };
        terms.push((term, t.mult));
    }
    let gen = Generator { id: g.id.clone(), terms };
    if gen.degree() != 0 {
        return Err(bad(format!("generator {} has degree {}", g.id, gen.degree())));
    }
    Ok(gen)
}

impl Bundle {
    pub fn parse(text: &str) -> Result<Self, ChabautyError> {
        let raw: RawBundle = serde_json::from_str(text).map_err(|e| bad(format!("bundle: {e}")))?;
        let field = field_of(raw.field)?;
        let d = field.d();
        let f = parse_poly(&raw.f, d)?;
        let model = CurveModel::new(field, f)?;
        let base_point = raw.base_point.as_ref().map(|v| parse_point(v, d)).transpose()?;
        let known_points = raw.known_points.iter().map(|v| parse_point(v, d)).collect::<Result<Vec<_>, _>>()?;
        for pt in base_point.iter().chain(&known_points) {
            if !model.contains(pt) {
                return Err(bad(format!("{pt} is not on the curve")));
            }
        }
        let generators = raw.generators.iter().map(|g| build_generator(g, &model)).collect::<Result<Vec<_>, _>>()?;
        let bad_primes = match raw.bad_primes {
            None => Vec::new(),
            Some(v) => BadPrimeData::parse_many(&v.to_string())?,
        };
        Ok(Bundle {
            model,
            p: raw.p,
            precision: raw.precision,
            search_bound: raw.search_bound,
            base_point,
            known_points,
            generators,
            bad_primes,
        })
    }

    /// Generators read from a separate file: a JSON array of generator objects.
    pub fn parse_generators(&self, text: &str) -> Result<Vec<Generator>, ChabautyError> {
        let specs: Vec<GeneratorSpec> = serde_json::from_str(text).map_err(|e| bad(format!("generators: {e}")))?;
        specs.iter().map(|g| build_generator(g, &self.model)).collect()
    }
}
