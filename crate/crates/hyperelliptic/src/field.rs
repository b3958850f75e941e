//! Exact elements of Q and of real quadratic fields Q(w), w^2 = d.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use padic::{Padic, PadicError};

/// The base field of a curve.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BaseField {
    Rationals,
    /// Q(w) with w^2 = d, d squarefree, d > 1 and d not 1 mod 4, so the ring of integers is Z[w].
    RealQuadratic { d: i64 },
}

impl BaseField {
    pub fn d(&self) -> i64 {
        match self {
            BaseField::Rationals => 0,
            BaseField::RealQuadratic { d } => *d,
        }
    }

    pub fn degree(&self) -> usize {
        match self {
            BaseField::Rationals => 1,
            BaseField::RealQuadratic { .. } => 2,
        }
    }

    pub fn int(&self, n: i64) -> QuadElem {
        QuadElem::from_int(n, self.d())
    }

    pub fn elem(&self, a: BigRational, b: BigRational) -> QuadElem {
        QuadElem { a, b, d: self.d() }
    }

    /// Square roots of d in Z_p, smaller residue first.  Empty unless p splits.
    pub fn split_roots(&self, p: u64, digits: u32) -> Vec<Padic> {
        match self {
            BaseField::Rationals => Vec::new(),
            BaseField::RealQuadratic { d } => {
                let dd = Padic::from_i64(p, *d, digits);
                if dd.valuation() != Some(0) {
                    return Vec::new();
                }
                match dd.sqrt() {
                    None => Vec::new(),
                    Some(r) => {
                        let s = -&r;
                        if r.residue() <= s.residue() {
                            vec![r, s]
                        } else {
                            vec![s, r]
                        }
                    }
                }
            }
        }
    }
}

/// a + b*w with w^2 = d; for rational elements b = 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadElem {
    pub a: BigRational,
    pub b: BigRational,
    pub d: i64,
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl QuadElem {
    pub fn from_int(n: i64, d: i64) -> Self {
        QuadElem { a: rat(n), b: BigRational::zero(), d }
    }

    pub fn from_bigint(n: BigInt, d: i64) -> Self {
        QuadElem { a: BigRational::from_integer(n), b: BigRational::zero(), d }
    }

    pub fn from_rational(a: BigRational, d: i64) -> Self {
        QuadElem { a, b: BigRational::zero(), d }
    }

    pub fn zero(d: i64) -> Self {
        Self::from_int(0, d)
    }

    pub fn one(d: i64) -> Self {
        Self::from_int(1, d)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn conj(&self) -> Self {
        QuadElem { a: self.a.clone(), b: -self.b.clone(), d: self.d }
    }

    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - &self.b * &self.b * rat(self.d)
    }

    pub fn inv(&self) -> Option<Self> {
        let n = self.norm();
        if n.is_zero() {
            return None;
        }
        let c = self.conj();
        Some(QuadElem { a: c.a / &n, b: c.b / &n, d: self.d })
    }

    /// Membership in Z[w].
    pub fn is_integral(&self) -> bool {
        self.a.is_integer() && self.b.is_integer()
    }

    /// Integer coordinates (a, b) when the element lies in Z[w].
    pub fn integer_parts(&self) -> Option<(BigInt, BigInt)> {
        self.is_integral().then(|| (self.a.to_integer(), self.b.to_integer()))
    }

    /// Least common denominator of both coordinates.
    pub fn denominator(&self) -> BigInt {
        self.a.denom().lcm(self.b.denom())
    }

    /// Image under the embedding w -> `w_p` (ignored for rational elements).
    pub fn embed(&self, p: u64, w_p: Option<&Padic>, digits: u32) -> Result<Padic, PadicError> {
        let a = Padic::from_rational(p, self.a.numer(), self.a.denom(), digits)?;
        if self.b.is_zero() {
            return Ok(a);
        }
        let w = w_p.ok_or_else(|| PadicError::Dimension("irrational element needs an embedding".into()))?;
        let b = Padic::from_rational(p, self.b.numer(), self.b.denom(), digits)?;
        Ok(&a + &(&b * w))
    }

    /// Image in F_q for a degree-one prime where w maps to `w_mod`.
    pub fn reduce_mod(&self, q: &BigInt, w_mod: &BigInt) -> Option<BigInt> {
        let red = |r: &BigRational| -> Option<BigInt> {
            let den = r.denom().mod_floor(q);
            let inv = den.modinv(q)?;
            Some((r.numer() * inv).mod_floor(q))
        };
        let a = red(&self.a)?;
        let b = red(&self.b)?;
        Some((a + b * w_mod).mod_floor(q))
    }

    /// Parse `n`, `n/m`, or a pair written `[a, b]` elsewhere.
    pub fn parse_rational(s: &str) -> Option<BigRational> {
        let s = s.trim();
        if let Some((n, m)) = s.split_once('/') {
            let n: BigInt = n.trim().parse().ok()?;
            let m: BigInt = m.trim().parse().ok()?;
            if m.is_zero() {
                return None;
            }
            Some(BigRational::new(n, m))
        } else {
            Some(BigRational::from_integer(s.parse().ok()?))
        }
    }

    fn join_d(&self, other: &Self) -> i64 {
        self.d.max(other.d)
    }
}

impl Add for &QuadElem {
    type Output = QuadElem;
    fn add(self, o: &QuadElem) -> QuadElem {
        QuadElem { a: &self.a + &o.a, b: &self.b + &o.b, d: self.join_d(o) }
    }
}

impl Sub for &QuadElem {
    type Output = QuadElem;
    fn sub(self, o: &QuadElem) -> QuadElem {
        QuadElem { a: &self.a - &o.a, b: &self.b - &o.b, d: self.join_d(o) }
    }
}

impl Mul for &QuadElem {
    type Output = QuadElem;
    fn mul(self, o: &QuadElem) -> QuadElem {
        let d = self.join_d(o);
        QuadElem {
            a: &self.a * &o.a + &self.b * &o.b * rat(d),
            b: &self.a * &o.b + &self.b * &o.a,
            d,
        }
    }
}

impl Neg for &QuadElem {
    type Output = QuadElem;
    fn neg(self) -> QuadElem {
        QuadElem { a: -self.a.clone(), b: -self.b.clone(), d: self.d }
    }
}

impl fmt::Display for QuadElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        if self.a.is_zero() {
            return write!(f, "{}*w", self.b);
        }
        let sign = if self.b.is_negative() { "-" } else { "+" };
        write!(f, "{} {} {}*w", self.a, sign, self.b.abs())
    }
}

/// Polynomials over the base field, constant term first.
pub type QPoly = Vec<QuadElem>;

pub mod qpoly {
    use super::*;

    pub fn trim(mut a: QPoly) -> QPoly {
        while a.last().is_some_and(|c| c.is_zero()) {
            a.pop();
        }
        a
    }

    pub fn degree(a: &[QuadElem]) -> Option<usize> {
        a.iter().rposition(|c| !c.is_zero())
    }

    pub fn eval(a: &[QuadElem], x: &QuadElem) -> QuadElem {
        let mut acc = QuadElem::zero(x.d);
        for c in a.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn add(a: &[QuadElem], b: &[QuadElem]) -> QPoly {
        let n = a.len().max(b.len());
        let d = a.iter().chain(b).map(|c| c.d).max().unwrap_or(0);
        let z = QuadElem::zero(d);
        trim((0..n).map(|i| &*a.get(i).unwrap_or(&z) + b.get(i).unwrap_or(&z)).collect())
    }

    pub fn neg(a: &[QuadElem]) -> QPoly {
        a.iter().map(|c| -c).collect()
    }

    pub fn sub(a: &[QuadElem], b: &[QuadElem]) -> QPoly {
        add(a, &neg(b))
    }

    pub fn mul(a: &[QuadElem], b: &[QuadElem]) -> QPoly {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let d = a.iter().chain(b).map(|c| c.d).max().unwrap_or(0);
        let mut out = vec![QuadElem::zero(d); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                out[i + j] = &out[i + j] + &(x * y);
            }
        }
        trim(out)
    }

    pub fn scale(a: &[QuadElem], c: &QuadElem) -> QPoly {
        trim(a.iter().map(|x| x * c).collect())
    }

    pub fn deriv(a: &[QuadElem]) -> QPoly {
        a.iter().enumerate().skip(1).map(|(i, c)| c * &QuadElem::from_int(i as i64, c.d)).collect()
    }

    pub fn divmod(a: &[QuadElem], b: &[QuadElem]) -> (QPoly, QPoly) {
        let b = trim(b.to_vec());
        let n = b.len() - 1;
        let inv = b[n].inv().expect("nonzero leading coefficient");
        let mut r = trim(a.to_vec());
        let d = a.iter().chain(&b).map(|c| c.d).max().unwrap_or(0);
        if r.len() <= n {
            return (Vec::new(), r);
        }
        let mut q = vec![QuadElem::zero(d); r.len() - n];
        while r.len() > n {
            let k = r.len() - 1 - n;
            let c = &r[r.len() - 1] * &inv;
            for (i, bi) in b.iter().enumerate() {
                r[k + i] = &r[k + i] - &(&c * bi);
            }
            q[k] = c;
            r.pop();
            r = trim(r);
        }
        (trim(q), r)
    }

    pub fn gcd(a: &[QuadElem], b: &[QuadElem]) -> QPoly {
        let mut x = trim(a.to_vec());
        let mut y = trim(b.to_vec());
        while !y.is_empty() {
            let (_, r) = divmod(&x, &y);
            x = y;
            y = r;
        }
        x
    }

    pub fn pow(a: &[QuadElem], e: usize) -> QPoly {
        let d = a.iter().map(|c| c.d).max().unwrap_or(0);
        let mut out = vec![QuadElem::one(d)];
        for _ in 0..e {
            out = mul(&out, a);
        }
        out
    }

    /// a(c x) coefficientwise.
    pub fn scale_variable(a: &[QuadElem], c: &QuadElem) -> QPoly {
        let mut pw = QuadElem::one(c.d);
        let mut out = Vec::with_capacity(a.len());
        for x in a {
            out.push(x * &pw);
            pw = &pw * c;
        }
        trim(out)
    }
}
