use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

/// Absolute precision carried by an exact zero.
pub const INF: i64 = i64::MAX / 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PadicError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("division by a value indistinguishable from zero (known mod p^{0})")]
    DivisionByZero(i64),
    #[error("p = {0} is not an odd prime")]
    BadPrime(u64),
    #[error("working precision must be at least 1")]
    BadPrecision,
    #[error("logarithm of zero")]
    LogOfZero,
    #[error("insufficient precision: need {needed} digits, have {have}")]
    InsufficientPrecision { needed: i64, have: i64 },
    #[error("matrix is singular at the tracked precision (pivot valuation at least {0})")]
    Singular(i64),
    #[error("overdetermined system is inconsistent (residual valuation {0})")]
    Inconsistent(i64),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// `p^k` as a big integer.
pub fn ppow(p: u64, k: i64) -> BigInt {
    debug_assert!(k >= 0);
    BigInt::from(p).pow(k as u32)
}

/// Valuation of a nonzero integer, searching no further than `cap`.
pub fn vp_capped(n: &BigInt, p: u64, cap: i64) -> i64 {
    if n.is_zero() {
        return cap;
    }
    let pb = BigInt::from(p);
    let mut m = n.clone();
    let mut v = 0;
    while v < cap {
        let (q, r) = m.div_rem(&pb);
        if !r.is_zero() {
            break;
        }
        m = q;
        v += 1;
    }
    v
}

pub fn vp_bigint(n: &BigInt, p: u64) -> Option<i64> {
    if n.is_zero() {
        None
    } else {
        Some(vp_capped(n, p, i64::MAX))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrecisionPolicy {
    pub prime: u64,
    pub working_digits: u32,
}

impl PrecisionPolicy {
    pub fn new(prime: u64, working_digits: u32) -> Result<Self, PadicError> {
        if prime == 2 || !is_prime_u64(prime) {
            return Err(PadicError::BadPrime(prime));
        }
        if working_digits == 0 {
            return Err(PadicError::BadPrecision);
        }
        Ok(Self { prime, working_digits })
    }

    pub fn int(&self, n: i64) -> Padic {
        Padic::from_i64(self.prime, n, self.working_digits)
    }

    pub fn bigint(&self, n: &BigInt) -> Padic {
        Padic::from_bigint(self.prime, n, self.working_digits)
    }

    pub fn rational(&self, num: &BigInt, den: &BigInt) -> Result<Padic, PadicError> {
        Padic::from_rational(self.prime, num, den, self.working_digits)
    }

    pub fn zero(&self) -> Padic {
        Padic::exact_zero(self.prime)
    }

    pub fn one(&self) -> Padic {
        self.int(1)
    }
}

/// An element of Q_p known to a finite absolute precision.
///
/// Nonzero values are `p^val * unit` with `unit` a residue mod `p^(abs - val)`
/// coprime to p.  A zero carries only its absolute precision; `abs == INF`
/// marks an exact zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Padic {
    p: u64,
    val: i64,
    unit: BigInt,
    abs: i64,
}

impl Padic {
    pub fn zero(p: u64, abs: i64) -> Self {
        Padic { p, val: abs, unit: BigInt::zero(), abs }
    }

    pub fn exact_zero(p: u64) -> Self {
        Self::zero(p, INF)
    }

    /// The value `p^v * m`, known modulo `p^abs`.
    pub fn from_scaled(p: u64, v: i64, m: BigInt, abs: i64) -> Self {
        if m.is_zero() || abs <= v {
            return Self::zero(p, abs);
        }
        assert!(abs < INF, "nonzero p-adic values need finite precision");
        let k = vp_capped(&m, p, abs - v);
        let val = v + k;
        if val >= abs {
            return Self::zero(p, abs);
        }
        let modulus = ppow(p, abs - val);
        let unit = (m / ppow(p, k)).mod_floor(&modulus);
        Padic { p, val, unit, abs }
    }

    pub fn from_bigint(p: u64, n: &BigInt, rel: u32) -> Self {
        if n.is_zero() {
            return Self::exact_zero(p);
        }
        let v = vp_capped(n, p, i64::MAX);
        Self::from_scaled(p, 0, n.clone(), v + rel as i64)
    }

    pub fn from_i64(p: u64, n: i64, rel: u32) -> Self {
        Self::from_bigint(p, &BigInt::from(n), rel)
    }

    /// An integer known only modulo `p^abs`.
    pub fn from_int_mod(p: u64, n: &BigInt, abs: i64) -> Self {
        Self::from_scaled(p, 0, n.clone(), abs)
    }

    pub fn from_rational(p: u64, num: &BigInt, den: &BigInt, rel: u32) -> Result<Self, PadicError> {
        if den.is_zero() {
            return Err(PadicError::ZeroDenominator);
        }
        if num.is_zero() {
            return Ok(Self::exact_zero(p));
        }
        let a = Self::from_bigint(p, num, rel);
        let b = Self::from_bigint(p, den, rel);
        a.checked_div(&b)
    }

    pub fn one(p: u64, rel: u32) -> Self {
        Self::from_i64(p, 1, rel)
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    /// True when the value is indistinguishable from zero (exact or not).
    pub fn is_zero(&self) -> bool {
        self.unit.is_zero()
    }

    pub fn is_exact_zero(&self) -> bool {
        self.unit.is_zero() && self.abs >= INF
    }

    pub fn valuation(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.val)
        }
    }

    /// Valuation, or the absolute precision for a zero: a lower bound in both cases.
    pub fn val_lower(&self) -> i64 {
        self.val
    }

    pub fn abs_precision(&self) -> i64 {
        self.abs
    }

    pub fn rel_precision(&self) -> i64 {
        if self.is_zero() {
            0
        } else {
            self.abs - self.val
        }
    }

    pub fn unit(&self) -> &BigInt {
        &self.unit
    }

    /// The same value with absolute precision lowered to `abs` (never raised).
    pub fn with_abs(&self, abs: i64) -> Self {
        if abs >= self.abs {
            return self.clone();
        }
        if self.is_zero() {
            return Self::zero(self.p, abs);
        }
        Self::from_scaled(self.p, self.val, self.unit.clone(), abs)
    }

    /// Lower the relative precision to at most `rel` digits.
    pub fn with_rel(&self, rel: u32) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.with_abs(self.val + rel as i64)
    }

    /// Residue in `[0, p^k)` of a value with nonnegative valuation known mod `p^k`.
    pub fn residue_mod(&self, k: i64) -> Result<BigInt, PadicError> {
        if self.abs < k {
            return Err(PadicError::InsufficientPrecision { needed: k, have: self.abs });
        }
        if self.is_zero() {
            return Ok(BigInt::zero());
        }
        if self.val < 0 {
            return Err(PadicError::InsufficientPrecision { needed: 0, have: self.val });
        }
        if self.val >= k {
            return Ok(BigInt::zero());
        }
        let m = &self.unit * ppow(self.p, self.val);
        Ok(m.mod_floor(&ppow(self.p, k)))
    }

    /// An integer representative of the value when the valuation is nonnegative.
    pub fn lift(&self) -> Option<BigInt> {
        if self.is_zero() {
            return Some(BigInt::zero());
        }
        if self.val < 0 {
            return None;
        }
        Some(&self.unit * ppow(self.p, self.val))
    }

    /// Integer representative of the residue mod p.
    pub fn residue(&self) -> Option<u64> {
        if self.abs < 1 {
            return None;
        }
        self.residue_mod(1).ok().map(|r| r.to_u64().unwrap())
    }

    /// Base-p digits starting at p^0, as many as the precision allows up to `n`.
    pub fn digits(&self, n: usize) -> Result<Vec<u64>, PadicError> {
        let r = self.residue_mod(n as i64)?;
        let pb = BigInt::from(self.p);
        let mut out = Vec::with_capacity(n);
        let mut m = r;
        for _ in 0..n {
            let (q, d) = m.div_rem(&pb);
            out.push(d.to_u64().unwrap());
            m = q;
        }
        Ok(out)
    }

    fn check(&self, other: &Padic) {
        assert_eq!(self.p, other.p, "p-adic values over different primes");
    }

    fn add_impl(&self, other: &Padic) -> Padic {
        self.check(other);
        let abs = self.abs.min(other.abs);
        if self.is_zero() {
            return other.with_abs(abs);
        }
        if other.is_zero() {
            return self.with_abs(abs);
        }
        let v = self.val.min(other.val);
        if abs <= v {
            return Padic::zero(self.p, abs);
        }
        let a = &self.unit * ppow(self.p, self.val - v);
        let b = &other.unit * ppow(self.p, other.val - v);
        Padic::from_scaled(self.p, v, a + b, abs)
    }

    fn mul_impl(&self, other: &Padic) -> Padic {
        self.check(other);
        if self.is_zero() || other.is_zero() {
            let abs = sat_add(self.val, other.val);
            return Padic::zero(self.p, abs);
        }
        let val = self.val + other.val;
        let rel = self.rel_precision().min(other.rel_precision());
        let unit = (&self.unit * &other.unit).mod_floor(&ppow(self.p, rel));
        Padic { p: self.p, val, unit, abs: val + rel }
    }

    pub fn checked_inv(&self) -> Result<Padic, PadicError> {
        if self.is_zero() {
            return Err(PadicError::DivisionByZero(self.abs));
        }
        let rel = self.rel_precision();
        let modulus = ppow(self.p, rel);
        let unit = self.unit.modinv(&modulus).expect("unit is invertible");
        Ok(Padic { p: self.p, val: -self.val, unit, abs: rel - self.val })
    }

    pub fn checked_div(&self, other: &Padic) -> Result<Padic, PadicError> {
        Ok(self.mul_impl(&other.checked_inv()?))
    }

    pub fn pow(&self, e: u64) -> Padic {
        if e == 0 {
            return Padic::one(self.p, self.rel_precision().max(1) as u32);
        }
        let mut base = self.clone();
        let mut acc: Option<Padic> = None;
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => &a * &base,
                });
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc.unwrap()
    }

    /// Multiply by `p^k` (exact shift).
    pub fn shift(&self, k: i64) -> Padic {
        if self.is_exact_zero() {
            return self.clone();
        }
        Padic { p: self.p, val: self.val + k, unit: self.unit.clone(), abs: self.abs + k }
    }

    /// Iwasawa logarithm: log(p) = 0, log of roots of unity = 0.
    pub fn log(&self) -> Result<Padic, PadicError> {
        if self.is_zero() {
            return Err(PadicError::LogOfZero);
        }
        let p = self.p;
        let rel = self.rel_precision();
        let u = Padic { p, val: 0, unit: self.unit.clone(), abs: rel };
        let z = &u.pow(p - 1) - &Padic::one(p, rel as u32);
        if z.is_zero() {
            return Ok(Padic::zero(p, rel));
        }
        let vz = z.val;
        // stop once k*vz - floor(log_p k) >= rel for every later k
        let mut kmax = 1i64;
        while kmax * vz - ilog(p, kmax as u64) < rel + 1 {
            kmax += 1;
        }
        let mut sum = Padic::zero(p, INF);
        let mut zk = z.clone();
        for k in 1..=kmax {
            let term = zk.checked_div(&Padic::from_i64(p, k, rel as u32 + 8))?;
            sum = if k % 2 == 1 { &sum + &term } else { &sum - &term };
            zk = &zk * &z;
        }
        let pm1 = Padic::from_i64(p, p as i64 - 1, rel as u32 + 8);
        Ok(sum.checked_div(&pm1)?.with_abs(rel))
    }

    /// A square root whose unit part is congruent to the smaller residue mod p.
    pub fn sqrt(&self) -> Option<Padic> {
        let p = self.p;
        if self.is_zero() {
            return Some(Padic::zero(p, if self.abs >= INF { INF } else { (self.abs + 1).div_euclid(2) }));
        }
        if self.val % 2 != 0 {
            return None;
        }
        let rel = self.rel_precision();
        let u0 = (&self.unit % BigInt::from(p)).to_u64().unwrap();
        let r0 = (1..p).find(|r| (r * r) % p == u0)?;
        let mut y = BigInt::from(r0);
        let mut k = 1i64;
        while k < rel {
            k = (2 * k).min(rel);
            let m = ppow(p, k);
            let num = (&y * &y - &self.unit).mod_floor(&m);
            let inv2y = (BigInt::from(2) * &y).modinv(&m).unwrap();
            y = (&y - num * inv2y).mod_floor(&m);
        }
        Some(Padic { p, val: self.val / 2, unit: y, abs: self.val / 2 + rel })
    }

    /// Teichmüller representative of the residue `r` mod p, to `abs` digits.
    pub fn teichmuller(p: u64, r: u64, abs: i64) -> Padic {
        let r = r % p;
        if r == 0 {
            return Padic::exact_zero(p);
        }
        // Newton iteration on t^(p-1) = 1
        let mut t = BigInt::from(r);
        let mut k = 1i64;
        let pm1 = BigInt::from(p - 1);
        while k < abs {
            k = (2 * k).min(abs);
            let m = ppow(p, k);
            let tp2 = t.modpow(&BigInt::from(p - 2), &m);
            let f = (&tp2 * &t - BigInt::one()).mod_floor(&m);
            let df = (&pm1 * &tp2).mod_floor(&m);
            t = (&t - f * df.modinv(&m).unwrap()).mod_floor(&m);
        }
        Padic::from_scaled(p, 0, t, abs)
    }

    /// Nonzero digits paired with their exponents.
    pub fn as_display_terms(&self) -> Vec<(u64, i64)> {
        let mut out = Vec::new();
        if self.is_zero() {
            return out;
        }
        let pb = BigInt::from(self.p);
        let mut m = self.unit.clone();
        let mut e = self.val;
        while !m.is_zero() {
            let (q, d) = m.div_rem(&pb);
            let d = d.to_u64().unwrap();
            if d != 0 {
                out.push((d, e));
            }
            m = q;
            e += 1;
        }
        out
    }
}

/// floor(log_p n) for n >= 1.
pub fn ilog(p: u64, n: u64) -> i64 {
    let mut k = 0;
    let mut m = n;
    while m >= p {
        m /= p;
        k += 1;
    }
    k
}

fn sat_add(a: i64, b: i64) -> i64 {
    if a >= INF || b >= INF {
        INF
    } else {
        a + b
    }
}

impl fmt::Display for Padic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_exact_zero() {
            return write!(f, "0");
        }
        let p = self.p;
        let mut parts: Vec<String> = Vec::new();
        for (d, e) in self.as_display_terms() {
            let base = match e {
                0 => String::new(),
                1 => format!("{p}"),
                _ => format!("{p}^{e}"),
            };
            parts.push(match (d, e) {
                (_, 0) => format!("{d}"),
                (1, _) => base,
                _ => format!("{d}*{base}"),
            });
        }
        parts.push(format!("O({p}^{})", self.abs));
        write!(f, "{}", parts.join(" + "))
    }
}

impl Neg for &Padic {
    type Output = Padic;
    fn neg(self) -> Padic {
        if self.is_zero() {
            return self.clone();
        }
        let m = ppow(self.p, self.abs - self.val);
        Padic { p: self.p, val: self.val, unit: (-&self.unit).mod_floor(&m), abs: self.abs }
    }
}

impl Neg for Padic {
    type Output = Padic;
    fn neg(self) -> Padic {
        -&self
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl $tr<&Padic> for &Padic {
            type Output = Padic;
            fn $m(self, rhs: &Padic) -> Padic {
                $body(self, rhs)
            }
        }
        impl $tr<Padic> for Padic {
            type Output = Padic;
            fn $m(self, rhs: Padic) -> Padic {
                $body(&self, &rhs)
            }
        }
        impl $tr<&Padic> for Padic {
            type Output = Padic;
            fn $m(self, rhs: &Padic) -> Padic {
                $body(&self, rhs)
            }
        }
        impl $tr<Padic> for &Padic {
            type Output = Padic;
            fn $m(self, rhs: Padic) -> Padic {
                $body(self, &rhs)
            }
        }
    };
}

binop!(Add, add, |a: &Padic, b: &Padic| a.add_impl(b));
binop!(Sub, sub, |a: &Padic, b: &Padic| a.add_impl(&-b));
binop!(Mul, mul, |a: &Padic, b: &Padic| a.mul_impl(b));
binop!(Div, div, |a: &Padic, b: &Padic| a.checked_div(b).expect("p-adic division by zero"));

impl Padic {
    /// Equality up to the smaller of the two precisions.
    pub fn eq_within(&self, other: &Padic) -> bool {
        (self - other).is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.val == 0 && self.unit.is_one()
    }
}
