//! Runge's method for y^2 = f(x) with f in Z[x] of even degree 2n.
//!
//! If the leading coefficient is b^2 there is a unique g in Q[x] with
//! leading coefficient b and deg(f - g^2) < n.  After scaling,
//! F = G^2 + H over Z, and an integral point with H(x) != 0 has
//! F(x) strictly between (G(x) - 1)^2 and (G(x) + 1)^2 once |x| > M.
//! A negative leading coefficient makes f(x) negative for large |x|.

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RungeError {
    #[error("f must have positive even degree, got degree {0}")]
    OddDegree(usize),
    #[error("f is not squarefree")]
    NotSquarefree,
    #[error("leading coefficient {0} is positive but not a square; use the p-adic pipeline")]
    NonSquareLeading(BigInt),
    #[error("enumeration bound {0} is too large to enumerate")]
    BoundTooLarge(BigRational),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RungeDecomposition {
    /// Coefficients of g, constant term first.
    pub g: Vec<BigRational>,
    pub h: Vec<BigRational>,
    /// F = (2b)^(2k) f, G = (2b)^k g, H = F - G^2.
    pub big_f: Vec<BigInt>,
    pub big_g: Vec<BigInt>,
    pub big_h: Vec<BigInt>,
    pub k: u32,
    pub b: BigInt,
}

/// Integral points, sorted, together with how they were found.
#[derive(Clone, Debug)]
pub struct RungeReport {
    pub points: Vec<(BigInt, BigInt)>,
    pub bound: BigRational,
    pub h_roots: Vec<BigInt>,
    pub decomposition: Option<RungeDecomposition>,
}

fn rat(n: &BigInt) -> BigRational {
    BigRational::from_integer(n.clone())
}

fn trim<T: Zero>(mut v: Vec<T>) -> Vec<T> {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

fn rmul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn rem(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut a = trim(a.to_vec());
    let lead = b.last().unwrap().clone();
    while a.len() >= b.len() {
        let c = a.last().unwrap() / &lead;
        let shift = a.len() - b.len();
        for (i, bc) in b.iter().enumerate() {
            a[shift + i] -= &c * bc;
        }
        a.pop();
        a = trim(a);
    }
    a
}

fn is_squarefree(f: &[BigInt]) -> bool {
    let mut a: Vec<BigRational> = f.iter().map(rat).collect();
    let mut b: Vec<BigRational> = trim(f.iter().enumerate().skip(1).map(|(i, c)| rat(c) * rat(&BigInt::from(i))).collect());
    while !b.is_empty() {
        let r = rem(&a, &b);
        a = b;
        b = r;
    }
    a.len() == 1
}

pub fn eval(f: &[BigInt], x: &BigInt) -> BigInt {
    f.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
}

fn validate(f: &[BigInt]) -> Result<Vec<BigInt>, RungeError> {
    let f = trim(f.to_vec());
    let deg = f.len().saturating_sub(1);
    if deg == 0 || deg % 2 == 1 {
        return Err(RungeError::OddDegree(deg));
    }
    if !is_squarefree(&f) {
        return Err(RungeError::NotSquarefree);
    }
    Ok(f)
}

/// The decomposition f = g^2 + h with deg h < n and its integral scaling.
pub fn runge_decompose(f: &[BigInt]) -> Result<RungeDecomposition, RungeError> {
    let f = validate(f)?;
    let n = (f.len() - 1) / 2;
    let lead = f[2 * n].clone();
    let b = if lead.is_positive() { lead.sqrt() } else { BigInt::zero() };
    if !lead.is_positive() || &b * &b != lead {
        return Err(RungeError::NonSquareLeading(lead));
    }
    let two_b = rat(&(BigInt::from(2) * &b));
    let mut g = vec![BigRational::zero(); n + 1];
    g[n] = rat(&b);
    // x^(n+j): 2 b c_j + sum_{i+l=n+j, j<i,l<n} c_i c_l = a_(n+j)
    for j in (0..n).rev() {
        let mut acc = rat(&f[n + j]);
        for i in (j + 1)..n {
            let l = n + j - i;
            if l > j && l < n {
                acc -= &g[i] * &g[l];
            }
        }
        g[j] = acc / &two_b;
    }
    let fr: Vec<BigRational> = f.iter().map(rat).collect();
    let g2 = rmul(&g, &g);
    let h: Vec<BigRational> = trim(fr.iter().zip(g2.iter()).map(|(a, b)| a - b).collect());
    debug_assert!(h.len() <= n);

    let scale = BigInt::from(2) * &b;
    let mut k = 0u32;
    let mut factor = BigInt::one();
    while !g.iter().all(|c| (c * rat(&factor)).is_integer()) {
        k += 1;
        factor *= &scale;
    }
    let factor2 = &factor * &factor;
    let big_g: Vec<BigInt> = g.iter().map(|c| (c * rat(&factor)).to_integer()).collect();
    let big_f: Vec<BigInt> = f.iter().map(|c| c * &factor2).collect();
    let big_h: Vec<BigInt> = h.iter().map(|c| (c * rat(&factor2)).to_integer()).collect();
    Ok(RungeDecomposition { g, h, big_f, big_g, big_h, k, b })
}

/// M = (sum_{i<n} (2|p_i| + |q_i|) + 1) / (2|p_n|) for G = sum p_i x^i, H = sum q_i x^i.
pub fn runge_bound(dec: &RungeDecomposition) -> BigRational {
    let n = dec.big_g.len() - 1;
    let mut num = BigInt::one();
    for i in 0..n {
        num += BigInt::from(2) * dec.big_g[i].abs();
        if let Some(q) = dec.big_h.get(i) {
            num += q.abs();
        }
    }
    BigRational::new(num, BigInt::from(2) * dec.big_g[n].abs())
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let m: BigUint = n.abs().to_biguint().unwrap();
    let (found, rest) = num_prime::nt_funcs::factors(m, None);
    let mut primes: Vec<(BigInt, usize)> =
        found.into_iter().map(|(p, e)| (BigInt::from_biguint(Sign::Plus, p), e)).collect();
    if let Some(rest) = rest {
        primes.extend(rest.into_iter().map(|p| (BigInt::from_biguint(Sign::Plus, p), 1)));
    }
    let mut out = vec![BigInt::one()];
    for (p, e) in primes {
        let mut next = Vec::with_capacity(out.len() * (e + 1));
        for d in &out {
            let mut pk = d.clone();
            for _ in 0..=e {
                next.push(pk.clone());
                pk *= &p;
            }
        }
        out = next;
    }
    out
}

/// Integer roots of a nonzero polynomial.
pub fn integer_roots(h: &[BigInt]) -> Vec<BigInt> {
    let h = trim(h.to_vec());
    if h.len() <= 1 {
        return Vec::new();
    }
    let low = h.iter().position(|c| !c.is_zero()).unwrap();
    let mut roots = if low > 0 { vec![BigInt::zero()] } else { Vec::new() };
    if h.len() - low > 1 {
        for d in divisors(&h[low]) {
            for r in [d.clone(), -d] {
                if eval(&h, &r).is_zero() {
                    roots.push(r);
                }
            }
        }
    }
    roots.sort();
    roots.dedup();
    roots
}

fn square_root(v: &BigInt) -> Option<BigInt> {
    if v.is_negative() {
        return None;
    }
    let r = v.sqrt();
    (&r * &r == *v).then_some(r)
}

fn collect(f: &[BigInt], xs: impl Iterator<Item = BigInt>) -> Vec<(BigInt, BigInt)> {
    let mut out = Vec::new();
    for x in xs {
        if let Some(y) = square_root(&eval(f, &x)) {
            if y.is_zero() {
                out.push((x, y));
            } else {
                out.push((x.clone(), -&y));
                out.push((x, y));
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Largest bound enumerated directly.
const MAX_ENUMERATION: u64 = 50_000_000;

fn range(bound: &BigRational) -> Result<i64, RungeError> {
    let m = bound.floor().to_integer();
    match m.to_u64() {
        Some(v) if v <= MAX_ENUMERATION => Ok(v as i64),
        _ => Err(RungeError::BoundTooLarge(bound.clone())),
    }
}

/// |x| > M' forces f(x) < 0 when the leading coefficient is negative.
pub fn negative_bound(f: &[BigInt]) -> BigRational {
    let lead = f.last().unwrap().abs();
    let max = f[..f.len() - 1].iter().map(|c| c.abs()).max().unwrap_or_default();
    BigRational::one() + BigRational::new(max, lead)
}

/// All integral points of y^2 = f(x).
pub fn runge_points(f: &[BigInt]) -> Result<RungeReport, RungeError> {
    let f = validate(f)?;
    let lead = f.last().unwrap().clone();
    if lead.is_negative() {
        let bound = negative_bound(&f);
        let m = range(&bound)?;
        let points = collect(&f, (-m..=m).map(BigInt::from));
        return Ok(RungeReport { points, bound, h_roots: Vec::new(), decomposition: None });
    }
    let dec = runge_decompose(&f)?;
    let bound = runge_bound(&dec);
    let m = range(&bound)?;
    let h_roots = integer_roots(&dec.big_h);
    let points = collect(&f, (-m..=m).map(BigInt::from).chain(h_roots.iter().cloned()));
    Ok(RungeReport { points, bound, h_roots, decomposition: Some(dec) })
}

/// Whether (|G(x)| - 1)^2 < F(x) < (|G(x)| + 1)^2.
pub fn strictly_between(dec: &RungeDecomposition, x: &BigInt) -> bool {
    let fx = eval(&dec.big_f, x);
    let gx = eval(&dec.big_g, x).abs();
    let lo = (&gx - 1) * (&gx - 1);
    let hi = (&gx + 1) * (&gx + 1);
    lo < fx && fx < hi
}

impl RungeDecomposition {
    pub fn n(&self) -> usize {
        self.g.len() - 1
    }

    /// F - G^2 - H, which is zero.
    pub fn residual(&self) -> Vec<BigInt> {
        let g2 = {
            let a = &self.big_g;
            let mut out = vec![BigInt::zero(); 2 * a.len() - 1];
            for (i, x) in a.iter().enumerate() {
                for (j, y) in a.iter().enumerate() {
                    out[i + j] += x * y;
                }
            }
            out
        };
        let mut r: Vec<BigInt> = self.big_f.iter().zip(&g2).map(|(a, b)| a - b).collect();
        for (i, c) in self.big_h.iter().enumerate() {
            r[i] -= c;
        }
        trim(r)
    }

    /// Whether x^i coefficients of g lie in (2b)^-(2(n-i)-1) Z.
    pub fn denominators_ok(&self) -> bool {
        let n = self.n();
        let two_b = BigInt::from(2) * &self.b;
        (0..n).all(|i| {
            let e = (2 * (n - i) - 1) as u32;
            (&self.g[i] * rat(&two_b.pow(e))).is_integer()
        })
    }
}

