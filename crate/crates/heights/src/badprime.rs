//! Component data of a regular model at a bad prime, read from JSON, and the
//! pairing induced by the pseudoinverse of minus the intersection matrix.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer};

use crate::HeightError;

/// A prime of the base field.  Over Q only `q` is set; over Q(w) a prime of
/// degree one also records the image of w in F_q.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Deserialize)]
pub struct PrimeIdeal {
    pub q: u64,
    #[serde(default)]
    pub w_mod: Option<u64>,
    #[serde(default)]
    pub inert: bool,
}

impl PrimeIdeal {
    pub fn rational(q: u64) -> Self {
        PrimeIdeal { q, w_mod: None, inert: false }
    }

    pub fn norm(&self) -> BigInt {
        let q = BigInt::from(self.q);
        if self.inert {
            &q * &q
        } else {
            q
        }
    }
}

impl std::fmt::Display for PrimeIdeal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match (self.w_mod, self.inert) {
            (Some(w), _) => write!(f, "({}, w - {})", self.q, w),
            (None, true) => write!(f, "({}) inert", self.q),
            _ => write!(f, "{}", self.q),
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RationalRepr {
    Int(i64),
    Text(String),
}

fn parse_rational(r: RationalRepr) -> Result<BigRational, String> {
    match r {
        RationalRepr::Int(n) => Ok(BigRational::from_integer(n.into())),
        RationalRepr::Text(s) => hyperelliptic::QuadElem::parse_rational(&s).ok_or(format!("not a rational: {s}")),
    }
}

fn rational_matrix<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<BigRational>>, D::Error> {
    let raw: Vec<Vec<RationalRepr>> = Vec::deserialize(d)?;
    raw.into_iter()
        .map(|row| row.into_iter().map(parse_rational).collect::<Result<Vec<_>, _>>())
        .collect::<Result<_, _>>()
        .map_err(serde::de::Error::custom)
}

fn rational_list<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Vec<BigRational>>, D::Error> {
    let raw: Option<Vec<RationalRepr>> = Option::deserialize(d)?;
    raw.map(|v| v.into_iter().map(parse_rational).collect::<Result<Vec<_>, _>>())
        .transpose()
        .map_err(serde::de::Error::custom)
}

fn rational_map<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<String, BigRational>, D::Error> {
    let raw: BTreeMap<String, RationalRepr> = BTreeMap::deserialize(d)?;
    raw.into_iter()
        .map(|(k, v)| parse_rational(v).map(|r| (k, r)))
        .collect::<Result<_, _>>()
        .map_err(serde::de::Error::custom)
}

#[derive(Clone, Debug, Deserialize)]
pub struct BadPrimeData {
    #[serde(flatten)]
    pub prime: PrimeIdeal,
    #[serde(default)]
    pub components: Vec<String>,
    #[serde(rename = "M", default, deserialize_with = "rational_matrix")]
    pub m: Vec<Vec<BigRational>>,
    #[serde(default)]
    pub sp_inf_plus: Option<String>,
    #[serde(default)]
    pub sp_inf_minus: Option<String>,
    #[serde(default)]
    pub sp_points: BTreeMap<String, String>,
    #[serde(rename = "Tq_override", default, deserialize_with = "rational_list")]
    pub tq_override: Option<Vec<BigRational>>,
    #[serde(default, deserialize_with = "rational_map")]
    pub generator_local_heights: BTreeMap<String, BigRational>,
}

impl BadPrimeData {
    /// One object or an array of them.
    pub fn parse_many(text: &str) -> Result<Vec<BadPrimeData>, HeightError> {
        let value: serde_json::Value = serde_json::from_str(text).map_err(|e| HeightError::Data(e.to_string()))?;
        let items = match value {
            serde_json::Value::Array(v) => v,
            other => vec![other],
        };
        let out = items
            .into_iter()
            .map(|v| serde_json::from_value::<BadPrimeData>(v).map_err(|e| HeightError::Data(e.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        for d in &out {
            d.validate()?;
        }
        Ok(out)
    }

    pub fn validate(&self) -> Result<(), HeightError> {
        let n = self.components.len();
        if self.m.len() != n || self.m.iter().any(|r| r.len() != n) {
            return Err(HeightError::Data(format!("M must be {n} x {n} at {}", self.prime)));
        }
        for i in 0..n {
            for j in 0..n {
                if self.m[i][j] != self.m[j][i] {
                    return Err(HeightError::NotSymmetric(self.prime.q));
                }
            }
        }
        for label in [&self.sp_inf_plus, &self.sp_inf_minus].into_iter().flatten().chain(self.sp_points.values()) {
            self.index(label)?;
        }
        Ok(())
    }

    pub fn index(&self, label: &str) -> Result<usize, HeightError> {
        self.components.iter().position(|c| c == label).ok_or_else(|| HeightError::UnknownComponent(label.to_string()))
    }

    /// The vector of the component difference a - b.
    pub fn difference(&self, a: &str, b: &str) -> Result<Vec<BigRational>, HeightError> {
        let mut v = vec![BigRational::zero(); self.components.len()];
        v[self.index(a)?] += BigRational::one();
        v[self.index(b)?] -= BigRational::one();
        Ok(v)
    }

    /// v1^T (-M)^+ v2.
    pub fn lplus(&self, v1: &[BigRational], v2: &[BigRational]) -> Result<BigRational, HeightError> {
        let n = self.components.len();
        if v1.len() != n || v2.len() != n {
            return Err(HeightError::Data("vector length differs from the number of components".into()));
        }
        let a: Vec<Vec<BigRational>> = self.m.iter().map(|r| r.iter().map(|c| -c).collect()).collect();
        let x = pseudo_solve(&a, v2);
        Ok(v1.iter().zip(&x).fold(BigRational::zero(), |acc, (a, b)| acc + a * b))
    }
}

/// Row echelon form in place; returns the pivot columns.
fn echelon(m: &mut [Vec<BigRational>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(r) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else { continue };
        m.swap(row, r);
        let inv = m[row][col].recip();
        for c in m[row].iter_mut() {
            *c = &*c * &inv;
        }
        for r in 0..m.len() {
            if r != row && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                let pivot_row = m[row].clone();
                for (c, pv) in m[r].iter_mut().zip(&pivot_row) {
                    *c = &*c - &(&factor * pv);
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == m.len() {
            break;
        }
    }
    pivots
}

/// Basis of the kernel of a square matrix.
fn kernel(a: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let n = a.len();
    let mut m = a.to_vec();
    let pivots = echelon(&mut m, n);
    (0..n)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![BigRational::zero(); n];
            v[free] = BigRational::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[r][free].clone();
            }
            v
        })
        .collect()
}

fn dot(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).fold(BigRational::zero(), |acc, (x, y)| acc + x * y)
}

/// A^+ b for symmetric A: project b onto the image, then solve A x = b
/// with x orthogonal to the kernel.
fn pseudo_solve(a: &[Vec<BigRational>], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len();
    let ker = kernel(a);
    // orthogonal kernel basis
    let mut ortho: Vec<Vec<BigRational>> = Vec::new();
    for v in ker {
        let mut w = v;
        for u in &ortho {
            let c = dot(&w, u) / dot(u, u);
            w = w.iter().zip(u).map(|(x, y)| x - &c * y).collect();
        }
        ortho.push(w);
    }
    let mut rhs = b.to_vec();
    for u in &ortho {
        let c = dot(&rhs, u) / dot(u, u);
        rhs = rhs.iter().zip(u).map(|(x, y)| x - &c * y).collect();
    }
    // [A | rhs] stacked with [K^T | 0]
    let mut aug: Vec<Vec<BigRational>> = a
        .iter()
        .zip(&rhs)
        .map(|(row, r)| {
            let mut v = row.clone();
            v.push(r.clone());
            v
        })
        .collect();
    for u in &ortho {
        let mut v = u.clone();
        v.push(BigRational::zero());
        aug.push(v);
    }
    let pivots = echelon(&mut aug, n);
    let mut x = vec![BigRational::zero(); n];
    for (r, &pc) in pivots.iter().enumerate() {
        x[pc] = aug[r][n].clone();
    }
    x
}
