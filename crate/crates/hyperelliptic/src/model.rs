//! Global curve models y^2 = f(x) of even degree with square leading coefficient.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::field::{qpoly, BaseField, QPoly, QuadElem};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CurveError {
    #[error("degree {0} is not even and at least 2")]
    BadDegree(usize),
    #[error("f is not squarefree")]
    NotSquarefree,
    #[error("leading coefficient {0} is not a square")]
    LeadingNotSquare(String),
    #[error("coefficient of x^{0} is not integral")]
    NonIntegral(usize),
    #[error("coefficient of x^{0} does not belong to the base field")]
    FieldMismatch(usize),
    #[error("p = 2 is not supported")]
    PrimeTwo,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("p = {p} must exceed the genus {g}")]
    PrimeTooSmall { p: u64, g: usize },
    #[error("bad reduction at p = {0}")]
    BadReduction(u64),
    #[error("p = {0} does not split in the base field")]
    NotSplit(u64),
    #[error("the model must be monic for this operation")]
    NotMonic,
    #[error("unsupported base field: {0}")]
    UnsupportedField(String),
    #[error("point ({0}, {1}) does not lie on the curve")]
    NotOnCurve(String, String),
    #[error("point lies in an infinite residue disc")]
    InfiniteDisc,
    #[error("p-adic failure: {0}")]
    Padic(#[from] padic::PadicError),
}

/// An integral point with coordinates in the ring of integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntPoint {
    pub x: QuadElem,
    pub y: QuadElem,
}

impl IntPoint {
    pub fn new(x: QuadElem, y: QuadElem) -> Self {
        IntPoint { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        IntPoint { x: QuadElem::from_int(x, 0), y: QuadElem::from_int(y, 0) }
    }

    pub fn involution(&self) -> Self {
        IntPoint { x: self.x.clone(), y: -&self.y }
    }
}

impl std::fmt::Display for IntPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveModel {
    pub field: BaseField,
    /// Coefficients, constant term first, degree 2g+2.
    pub f: QPoly,
    pub genus: usize,
    /// b with b^2 equal to the leading coefficient.
    pub leading_sqrt: QuadElem,
}

/// Square root in Z[w] (or Z), if one exists.
pub fn integral_sqrt(x: &QuadElem) -> Option<QuadElem> {
    let (a, b) = x.integer_parts()?;
    let d = x.d;
    let root = |n: &BigInt| -> Option<BigInt> {
        if n.is_negative() {
            return None;
        }
        let r = n.sqrt();
        (&r * &r == *n).then_some(r)
    };
    if b.is_zero() && (d == 0 || !a.is_negative()) {
        if let Some(c) = root(&a) {
            return Some(QuadElem::from_bigint(c, d));
        }
        if d == 0 {
            return None;
        }
    }
    let dd = BigInt::from(d);
    let n = root(&(&a * &a - &dd * &b * &b))?;
    for s in [n.clone(), -n.clone()] {
        let twice = &a + &s;
        if twice.is_odd() {
            continue;
        }
        let Some(c) = root(&(twice / 2)) else { continue };
        let e = if c.is_zero() {
            if !b.is_zero() || !(&a % &dd).is_zero() {
                continue;
            }
            match root(&(&a / &dd)) {
                Some(e) => e,
                None => continue,
            }
        } else {
            let (e, r) = b.div_rem(&(BigInt::from(2) * &c));
            if !r.is_zero() {
                continue;
            }
            e
        };
        if &c * &c + &dd * &e * &e == a && BigInt::from(2) * &c * &e == b {
            let q = |n: BigInt| BigRational::from_integer(n);
            return Some(QuadElem { a: q(c), b: q(e), d });
        }
    }
    None
}

/// Determinant over the base field by fraction Gaussian elimination.
fn det(mut m: Vec<Vec<QuadElem>>, d: i64) -> QuadElem {
    let n = m.len();
    let mut acc = QuadElem::one(d);
    for c in 0..n {
        let Some(piv) = (c..n).find(|&r| !m[r][c].is_zero()) else {
            return QuadElem::zero(d);
        };
        if piv != c {
            m.swap(piv, c);
            acc = -&acc;
        }
        let inv = m[c][c].inv().unwrap();
        acc = &acc * &m[c][c];
        for r in c + 1..n {
            if m[r][c].is_zero() {
                continue;
            }
            let fac = &m[r][c] * &inv;
            for k in c..n {
                let t = &fac * &m[c][k];
                m[r][k] = &m[r][k] - &t;
            }
        }
    }
    acc
}

/// Resultant of two polynomials via the Sylvester matrix.
pub fn resultant(a: &[QuadElem], b: &[QuadElem], d: i64) -> QuadElem {
    let a = qpoly::trim(a.to_vec());
    let b = qpoly::trim(b.to_vec());
    let (m, n) = (a.len() - 1, b.len() - 1);
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for i in 0..n {
        let mut row = vec![QuadElem::zero(d); size];
        for (j, c) in a.iter().rev().enumerate() {
            row[i + j] = c.clone();
        }
        rows.push(row);
    }
    for i in 0..m {
        let mut row = vec![QuadElem::zero(d); size];
        for (j, c) in b.iter().rev().enumerate() {
            row[i + j] = c.clone();
        }
        rows.push(row);
    }
    det(rows, d)
}

/// Distinct prime factors of a nonzero integer.
pub fn prime_factors(n: &BigInt) -> Vec<BigInt> {
    let n: BigUint = n.abs().to_biguint().unwrap();
    if n <= BigUint::one() {
        return Vec::new();
    }
    let (found, rest) = num_prime::nt_funcs::factors(n, None);
    let mut out: Vec<BigInt> = found.keys().map(|k| BigInt::from_biguint(Sign::Plus, k.clone())).collect();
    if let Some(rest) = rest {
        out.extend(rest.into_iter().map(|k| BigInt::from_biguint(Sign::Plus, k)));
    }
    out.sort();
    out.dedup();
    out
}

impl CurveModel {
    pub fn new(field: BaseField, f: QPoly) -> Result<Self, CurveError> {
        let d = field.d();
        let f: QPoly = f.into_iter().map(|c| QuadElem { d, ..c }).collect();
        for (i, c) in f.iter().enumerate() {
            if d == 0 && !c.is_rational() {
                return Err(CurveError::FieldMismatch(i));
            }
            if !c.is_integral() {
                return Err(CurveError::NonIntegral(i));
            }
        }
        let f = qpoly::trim(f);
        let deg = qpoly::degree(&f).unwrap_or(0);
        if deg < 2 || deg % 2 == 1 {
            return Err(CurveError::BadDegree(deg));
        }
        let lead = f[deg].clone();
        let b = integral_sqrt(&lead).ok_or_else(|| CurveError::LeadingNotSquare(lead.to_string()))?;
        let g = qpoly::gcd(&f, &qpoly::deriv(&f));
        if qpoly::degree(&g).unwrap_or(0) > 0 {
            return Err(CurveError::NotSquarefree);
        }
        Ok(CurveModel { field, f, genus: deg / 2 - 1, leading_sqrt: b })
    }

    /// A curve over Q from integer coefficients, constant term first.
    pub fn over_q(coeffs: &[i64]) -> Result<Self, CurveError> {
        Self::new(BaseField::Rationals, coeffs.iter().map(|&c| QuadElem::from_int(c, 0)).collect())
    }

    pub fn degree(&self) -> usize {
        self.f.len() - 1
    }

    pub fn is_monic(&self) -> bool {
        self.f.last().is_some_and(|c| c.is_one())
    }

    pub fn d(&self) -> i64 {
        self.field.d()
    }

    pub fn eval(&self, x: &QuadElem) -> QuadElem {
        qpoly::eval(&self.f, x)
    }

    pub fn contains(&self, pt: &IntPoint) -> bool {
        &pt.y * &pt.y == self.eval(&pt.x)
    }

    /// True when every coefficient is rational although the field is not Q.
    pub fn defined_over_q(&self) -> bool {
        self.f.iter().all(|c| c.is_rational())
    }

    pub fn discriminant(&self) -> QuadElem {
        let d = self.d();
        let n = self.degree();
        let res = resultant(&self.f, &qpoly::deriv(&self.f), d);
        let lead_inv = self.f[n].inv().unwrap();
        let sign = if (n * (n - 1) / 2) % 2 == 1 { -1 } else { 1 };
        &(&res * &lead_inv) * &QuadElem::from_int(sign, d)
    }

    /// Rational primes dividing the norm of (leading coefficient * discriminant).
    pub fn bad_primes(&self) -> Vec<BigInt> {
        let disc = &self.discriminant() * &self.f[self.degree()];
        let n = disc.norm();
        let n = if self.d() == 0 { disc.a.clone() } else { n };
        let mut ps = prime_factors(n.numer());
        ps.extend(prime_factors(n.denom()));
        ps.sort();
        ps.dedup();
        ps
    }

    /// Check the hypotheses at the auxiliary prime p.
    pub fn validate_at(&self, p: u64) -> Result<(), CurveError> {
        if p == 2 {
            return Err(CurveError::PrimeTwo);
        }
        if !padic::number::is_prime_u64(p) {
            return Err(CurveError::NotPrime(p));
        }
        if p as usize <= self.genus {
            return Err(CurveError::PrimeTooSmall { p, g: self.genus });
        }
        let pb = BigInt::from(p);
        let disc = &self.discriminant() * &self.f[self.degree()];
        match self.field {
            BaseField::Rationals => {
                if (disc.a.numer() % &pb).is_zero() || (disc.a.denom() % &pb).is_zero() {
                    return Err(CurveError::BadReduction(p));
                }
            }
            BaseField::RealQuadratic { d } => {
                let roots = residue_roots_of_d(d, p);
                if roots.len() != 2 {
                    return Err(CurveError::NotSplit(p));
                }
                for r in roots {
                    match disc.reduce_mod(&pb, &BigInt::from(r)) {
                        Some(v) if !v.is_zero() => {}
                        _ => return Err(CurveError::BadReduction(p)),
                    }
                }
            }
        }
        Ok(())
    }

    /// Monic model Y^2 = b^(4g+2) f(X/b^2) and the map on integral points.
    pub fn monicize(&self) -> (CurveModel, PointMap) {
        let b = self.leading_sqrt.clone();
        let d = self.d();
        let n = self.degree();
        let b2_inv = (&b * &b).inv().expect("leading coefficient is nonzero");
        let mono: QPoly = self.f.iter().enumerate().map(|(i, c)| &(c * &pow(&b, 2 * n - 2 * i)) * &b2_inv).collect();
        let mono: QPoly = mono.into_iter().map(|c| QuadElem { d, ..c }).collect();
        let model = CurveModel { field: self.field, f: mono, genus: self.genus, leading_sqrt: QuadElem::one(d) };
        (model, PointMap { b, genus: self.genus })
    }
}

fn pow(x: &QuadElem, e: usize) -> QuadElem {
    let mut acc = QuadElem::one(x.d);
    for _ in 0..e {
        acc = &acc * x;
    }
    acc
}

/// Residues r mod p with r^2 = d.
pub fn residue_roots_of_d(d: i64, p: u64) -> Vec<u64> {
    let dm = d.rem_euclid(p as i64) as u64;
    if dm == 0 {
        return Vec::new();
    }
    (1..p).filter(|r| r * r % p == dm).collect()
}

/// (x, y) -> (b^2 x, b^(2g+1) y) from the original model to its monic form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointMap {
    pub b: QuadElem,
    pub genus: usize,
}

impl PointMap {
    pub fn forward(&self, pt: &IntPoint) -> IntPoint {
        IntPoint { x: &pow(&self.b, 2) * &pt.x, y: &pow(&self.b, 2 * self.genus + 1) * &pt.y }
    }

    /// Inverse on points of the monic model, when the preimage is integral.
    pub fn backward(&self, pt: &IntPoint) -> Option<IntPoint> {
        let x = &pt.x * &pow(&self.b, 2).inv()?;
        let y = &pt.y * &pow(&self.b, 2 * self.genus + 1).inv()?;
        (x.is_integral() && y.is_integral()).then_some(IntPoint { x, y })
    }

    pub fn is_identity(&self) -> bool {
        self.b.is_one()
    }
}

/// Small helper for reports: the integer value of a rational element.
pub fn as_i64(x: &QuadElem) -> Option<i64> {
    if x.is_rational() && x.a.is_integer() {
        x.a.to_integer().to_i64()
    } else {
        None
    }
}
