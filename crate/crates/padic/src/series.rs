//! Truncated power series over Q_p.
//!
//! `PadicPowerSeries` lives in a variable ranging over pZ_p and records a
//! lower bound for the coefficients it has dropped.  `ZpSeries` is the
//! rescaled form used by the solvers, in a variable ranging over Z_p.

use num_bigint::BigInt;

use crate::number::{ilog, Padic, INF};
use crate::poly;

/// Bound for dropped coefficients: v(c_k) >= min_val - log_loss * floor(log_p k).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Tail {
    pub min_val: i64,
    pub log_loss: u32,
}

impl Tail {
    fn at(&self, p: u64, k: usize) -> i64 {
        self.min_val - self.log_loss as i64 * ilog(p, k.max(1) as u64)
    }

    fn combine(a: Option<Tail>, b: Option<Tail>) -> Option<Tail> {
        match (a, b) {
            (None, x) | (x, None) => x,
            (Some(a), Some(b)) => Some(Tail { min_val: a.min_val.min(b.min_val), log_loss: a.log_loss.max(b.log_loss) }),
        }
    }

    /// min over k >= n of (bound at k) + s*k, for s >= 1.
    fn term_bound(&self, p: u64, n: usize, s: i64) -> i64 {
        let n = n.max(1) as i64;
        let mut best = self.at(p, n as usize) + s * n;
        let mut pk = 1i64;
        while pk <= n {
            pk = pk.saturating_mul(p as i64);
        }
        loop {
            let v = self.at(p, pk as usize) + s * pk;
            best = best.min(v);
            if s * pk - self.log_loss as i64 * ilog(p, pk as u64) > best - self.min_val + s * n + 64 || pk > 1 << 40 {
                break;
            }
            pk = pk.saturating_mul(p as i64);
        }
        best
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PadicPowerSeries {
    pub prime: u64,
    pub coeffs: Vec<Padic>,
    pub tail: Option<Tail>,
}

impl PadicPowerSeries {
    /// A polynomial: nothing beyond the listed coefficients.
    pub fn polynomial(prime: u64, coeffs: Vec<Padic>) -> Self {
        PadicPowerSeries { prime, coeffs, tail: None }
    }

    pub fn with_tail(prime: u64, coeffs: Vec<Padic>, tail: Tail) -> Self {
        PadicPowerSeries { prime, coeffs, tail: Some(tail) }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeff(&self, k: usize) -> Padic {
        self.coeffs.get(k).cloned().unwrap_or_else(|| match self.tail {
            None => Padic::exact_zero(self.prime),
            Some(t) => Padic::zero(self.prime, t.at(self.prime, k)),
        })
    }

    /// Keep the first `n` coefficients, folding the rest into the tail bound.
    pub fn truncate(&self, n: usize) -> Self {
        if n >= self.coeffs.len() {
            return self.clone();
        }
        let p = self.prime;
        let mut tail = self.tail;
        for (k, c) in self.coeffs.iter().enumerate().skip(n) {
            let loss = tail.map_or(0, |t| t.log_loss);
            let need = c.val_lower() + loss as i64 * ilog(p, k as u64);
            tail = Some(match tail {
                None => Tail { min_val: need, log_loss: 0 },
                Some(t) => Tail { min_val: t.min_val.min(need), log_loss: t.log_loss },
            });
        }
        PadicPowerSeries { prime: p, coeffs: self.coeffs[..n].to_vec(), tail }
    }

    fn common_len(&self, other: &Self) -> usize {
        match (self.tail, other.tail) {
            (None, None) => self.order().max(other.order()),
            (Some(_), None) => self.order(),
            (None, Some(_)) => other.order(),
            (Some(_), Some(_)) => self.order().min(other.order()),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.common_len(other);
        let a = self.truncate(n);
        let b = other.truncate(n);
        PadicPowerSeries { prime: self.prime, coeffs: poly::add(&a.coeffs, &b.coeffs), tail: Tail::combine(a.tail, b.tail) }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&Padic::from_i64(self.prime, -1, 64)))
    }

    pub fn scale(&self, c: &Padic) -> Self {
        let tail = self.tail.map(|t| Tail { min_val: t.min_val + c.val_lower(), log_loss: t.log_loss });
        PadicPowerSeries { prime: self.prime, coeffs: poly::scale(&self.coeffs, c), tail }
    }

    fn min_val(&self) -> i64 {
        self.coeffs.iter().map(|c| c.val_lower()).min().unwrap_or(INF)
    }

    /// Product, truncated to the shorter known length.
    pub fn mul(&self, other: &Self) -> Self {
        let n = match (self.tail, other.tail) {
            (None, None) => (self.order() + other.order()).saturating_sub(1),
            _ => self.common_len(other),
        };
        let coeffs = poly::mul_trunc(&self.coeffs, &other.coeffs, n);
        let tail = match (self.tail, other.tail) {
            (None, None) => None,
            (a, b) => {
                let ma = self.min_val().min(a.map_or(INF, |t| t.min_val));
                let mb = other.min_val().min(b.map_or(INF, |t| t.min_val));
                let la = a.map_or(0, |t| t.log_loss);
                let lb = b.map_or(0, |t| t.log_loss);
                Some(Tail { min_val: ma.saturating_add(mb).min(INF), log_loss: la + lb })
            }
        };
        let mut coeffs = coeffs;
        while coeffs.len() < n {
            coeffs.push(Padic::exact_zero(self.prime));
        }
        PadicPowerSeries { prime: self.prime, coeffs, tail }
    }

    pub fn derivative(&self) -> Self {
        let tail = self.tail.map(|t| Tail { min_val: t.min_val - t.log_loss as i64, log_loss: t.log_loss });
        PadicPowerSeries { prime: self.prime, coeffs: poly::deriv(&self.coeffs), tail }
    }

    /// Antiderivative with zero constant term.  Dividing by k+1 costs
    /// v_p(k+1) digits, which the coefficient precisions record.
    pub fn integrate(&self) -> Self {
        let p = self.prime;
        let mut coeffs = vec![Padic::exact_zero(p)];
        for (k, c) in self.coeffs.iter().enumerate() {
            let d = Padic::from_i64(p, k as i64 + 1, 64);
            coeffs.push(c.checked_div(&d).expect("nonzero integer"));
        }
        let tail = self.tail.map(|t| Tail { min_val: t.min_val, log_loss: t.log_loss + 1 });
        PadicPowerSeries { prime: p, coeffs, tail }
    }

    /// Lower bound on v(c_k t^k) over dropped k, for v(t) >= s >= 1.
    pub fn tail_term_bound(&self, s: i64) -> Option<i64> {
        self.tail.map(|t| t.term_bound(self.prime, self.order(), s))
    }

    /// Evaluate at t with v(t) >= 1; precision capped by the tail bound.
    pub fn eval(&self, t: &Padic) -> Padic {
        if t.is_exact_zero() {
            return self.coeff(0);
        }
        let v = poly::eval(&self.coeffs, t);
        match self.tail {
            None => v,
            Some(_) => {
                let s = t.val_lower().clamp(1, 1 << 20);
                v.with_abs(self.tail_term_bound(s).unwrap())
            }
        }
    }

    /// G(w) = F(p w), a series in w ranging over Z_p.
    pub fn rescale(&self) -> ZpSeries {
        let coeffs = self.coeffs.iter().enumerate().map(|(k, c)| c.shift(k as i64)).collect();
        ZpSeries { prime: self.prime, coeffs, omitted: self.tail_term_bound(1) }
    }
}

/// A series in a variable ranging over Z_p whose omitted coefficients all
/// have valuation at least `omitted`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZpSeries {
    pub prime: u64,
    pub coeffs: Vec<Padic>,
    pub omitted: Option<i64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StrassmannError {
    /// The minimal valuation cannot be pinned down at the tracked precision.
    Undecidable,
}

impl ZpSeries {
    pub fn omitted_bound(&self) -> i64 {
        self.omitted.unwrap_or(INF)
    }

    /// Absolute precision available from coefficients and the omitted tail.
    pub fn precision(&self) -> i64 {
        self.coeffs.iter().map(|c| c.abs_precision()).min().unwrap_or(INF).min(self.omitted_bound())
    }

    /// Index of the last coefficient of minimal valuation.
    pub fn strassmann(&self) -> Result<usize, StrassmannError> {
        let m = self
            .coeffs
            .iter()
            .filter(|c| !c.is_zero())
            .map(|c| c.val_lower())
            .min()
            .ok_or(StrassmannError::Undecidable)?;
        if self.omitted_bound() <= m {
            return Err(StrassmannError::Undecidable);
        }
        if self.coeffs.iter().any(|c| c.is_zero() && c.abs_precision() <= m) {
            return Err(StrassmannError::Undecidable);
        }
        Ok(self.coeffs.iter().rposition(|c| !c.is_zero() && c.val_lower() == m).unwrap())
    }

    /// Minimal valuation over the non-constant part, omitted tail included.
    pub fn min_nonconstant_val(&self) -> i64 {
        self.coeffs.iter().skip(1).map(|c| c.val_lower()).min().unwrap_or(INF).min(self.omitted_bound())
    }

    pub fn eval(&self, w: &Padic) -> Padic {
        poly::eval(&self.coeffs, w).with_abs(self.omitted_bound())
    }

    pub fn eval_derivative(&self, w: &Padic) -> Padic {
        poly::eval(&poly::deriv(&self.coeffs), w).with_abs(self.omitted_bound())
    }

    /// H(s) = G(a + p^e s).
    pub fn shift(&self, a: &BigInt, e: i64) -> ZpSeries {
        let p = self.prime;
        let rel = self.coeffs.iter().map(|c| c.rel_precision()).max().unwrap_or(1).max(1) as u32 + 2;
        let shifted = poly::taylor_shift(&self.coeffs, &Padic::from_bigint(p, a, rel));
        let coeffs = shifted.into_iter().enumerate().map(|(k, c)| c.shift(e * k as i64)).collect();
        ZpSeries { prime: p, coeffs, omitted: self.omitted }
    }

    /// The same series with its constant term removed.
    pub fn without_constant(&self) -> ZpSeries {
        let mut s = self.clone();
        if let Some(c) = s.coeffs.first_mut() {
            *c = Padic::exact_zero(self.prime);
        }
        s
    }

    pub fn constant(&self) -> Padic {
        self.coeffs.first().cloned().unwrap_or_else(|| Padic::exact_zero(self.prime))
    }
}
