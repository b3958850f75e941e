//! The finite sets T_q of possible heights away from p at integral points,
//! and their assembly into the target set T.

use hyperelliptic::{CurveModel, QuadElem};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use padic::Padic;

use crate::badprime::{BadPrimeData, PrimeIdeal};
use crate::character::IdeleCharacter;
use crate::HeightError;

/// Residue field of a prime: F_q, or F_q(w) with w^2 = d for an inert prime.
#[derive(Clone, Copy, Debug)]
struct ResidueField {
    q: u64,
    /// d mod q when inert, else 0.
    d: u64,
}

type Elem = (u64, u64);

impl ResidueField {
    fn mul(&self, x: Elem, y: Elem) -> Elem {
        let q = self.q as u128;
        let (a1, b1, a2, b2) = (x.0 as u128, x.1 as u128, y.0 as u128, y.1 as u128);
        let a = (a1 * a2 + self.d as u128 * (b1 * b2 % q)) % q;
        let b = (a1 * b2 + a2 * b1) % q;
        (a as u64, b as u64)
    }

    fn add(&self, x: Elem, y: Elem) -> Elem {
        ((x.0 + y.0) % self.q, (x.1 + y.1) % self.q)
    }

    fn neg(&self, x: Elem) -> Elem {
        ((self.q - x.0) % self.q, (self.q - x.1) % self.q)
    }

    fn scalar(&self, n: u64) -> Elem {
        (n % self.q, 0)
    }

    fn inv(&self, x: Elem) -> Option<Elem> {
        let q = self.q as u128;
        let (a, b) = (x.0 as u128, x.1 as u128);
        let norm = ((a * a) % q + q - (self.d as u128 * (b * b % q)) % q) % q;
        let ni = BigInt::from(norm as u64).modinv(&BigInt::from(self.q))?.to_u64()?;
        let (nb, _) = self.neg((x.1, 0));
        Some(self.mul((x.0, nb), (ni, 0)))
    }

    fn is_zero(x: Elem) -> bool {
        x == (0, 0)
    }

    fn reduce(&self, prime: &PrimeIdeal, x: &QuadElem) -> Option<Elem> {
        let q = BigInt::from(self.q);
        let red = |r: &BigRational| -> Option<u64> {
            let inv = (r.denom() % &q).modinv(&q)?;
            let v = (r.numer() * inv) % &q;
            let v = if v < BigInt::zero() { v + &q } else { v };
            v.to_u64()
        };
        if prime.inert {
            return Some((red(&x.a)?, red(&x.b)?));
        }
        match prime.w_mod {
            Some(w) => Some((x.reduce_mod(&q, &BigInt::from(w))?.to_u64()?, 0)),
            None if x.b.is_zero() => Some((red(&x.a)?, 0)),
            None => None,
        }
    }
}

fn residue_field(model: &CurveModel, prime: &PrimeIdeal) -> ResidueField {
    let d = if prime.inert { model.d().rem_euclid(prime.q as i64) as u64 } else { 0 };
    ResidueField { q: prime.q, d }
}

/// Whether monic f reduces to a square in k[x], k the residue field of `prime`.
pub fn is_square_mod(model: &CurveModel, prime: &PrimeIdeal) -> Result<bool, HeightError> {
    let k = residue_field(model, prime);
    let f: Vec<Elem> = model
        .f
        .iter()
        .map(|c| k.reduce(prime, c))
        .collect::<Option<_>>()
        .ok_or_else(|| HeightError::Data(format!("coefficients are not integral at {prime}")))?;
    let n = f.len() - 1;
    if f[n] != (1, 0) {
        return Err(HeightError::Data("the square test needs a monic model".into()));
    }
    if k.q == 2 {
        // every element of a finite field of characteristic 2 is a square
        return Ok(f.iter().enumerate().all(|(i, c)| i % 2 == 0 || ResidueField::is_zero(*c)));
    }
    // reversed f = 1 + ..., its square root s, and f is a square iff rev(s)^2 = f
    let rev: Vec<Elem> = f.iter().rev().copied().collect();
    let half = k.inv(k.scalar(2)).expect("odd characteristic");
    let h = n / 2;
    let mut s: Vec<Elem> = vec![(1, 0)];
    for j in 1..=h {
        let mut acc = rev[j];
        for i in 1..j {
            acc = k.add(acc, k.neg(k.mul(s[i], s[j - i])));
        }
        s.push(k.mul(acc, half));
    }
    let g: Vec<Elem> = s.into_iter().rev().collect();
    let mut sq = vec![(0, 0); n + 1];
    for (i, a) in g.iter().enumerate() {
        for (j, b) in g.iter().enumerate() {
            sq[i + j] = k.add(sq[i + j], k.mul(*a, *b));
        }
    }
    Ok(sq == f)
}

/// Good reduction of the model at `prime`.
fn good_at(model: &CurveModel, prime: &PrimeIdeal) -> bool {
    let k = residue_field(model, prime);
    let disc = &model.discriminant() * &model.f[model.degree()];
    let Some(lead) = k.reduce(prime, &model.f[model.degree()]) else { return false };
    match k.reduce(prime, &disc) {
        Some(v) => !ResidueField::is_zero(v) && !ResidueField::is_zero(lead),
        None => false,
    }
}

fn dedup(mut v: Vec<BigRational>) -> Vec<BigRational> {
    v.sort();
    v.dedup();
    v
}

/// T_q.  `base` names a known integral point listed in the data's `sp_points`.
pub fn tq_set(
    model: &CurveModel,
    prime: &PrimeIdeal,
    data: Option<&BadPrimeData>,
    base: Option<&str>,
) -> Result<Vec<BigRational>, HeightError> {
    if let Some(over) = data.and_then(|d| d.tq_override.clone()) {
        return Ok(dedup(over));
    }
    if good_at(model, prime) {
        return Ok(vec![BigRational::zero()]);
    }
    if model.is_monic() && !is_square_mod(model, prime)? {
        return Ok(vec![BigRational::zero()]);
    }
    let data = data.ok_or_else(|| HeightError::MissingBadPrimeData(prime.to_string()))?;
    let (Some(minus), Some(plus)) = (&data.sp_inf_minus, &data.sp_inf_plus) else {
        return Err(HeightError::MissingBadPrimeData(prime.to_string()));
    };
    let v1 = data.difference(minus, plus)?;
    let mut out = Vec::new();
    match base.and_then(|b| data.sp_points.get(b)) {
        Some(sq) => {
            for c in &data.components {
                out.push(data.lplus(&v1, &data.difference(c, sq)?)?);
            }
        }
        None => {
            for a in &data.components {
                for b in &data.components {
                    out.push(data.lplus(&v1, &data.difference(a, b)?)?);
                }
            }
        }
    }
    Ok(dedup(out))
}

/// T = { sum_q l_q chi_q(pi_q) : l_q in T_q }, duplicates merged.
pub fn assemble_t(sets: &[(PrimeIdeal, Vec<BigRational>)], chi: &IdeleCharacter) -> Result<Vec<Padic>, HeightError> {
    let p = chi.prime;
    let mut acc = vec![Padic::exact_zero(p)];
    for (prime, set) in sets {
        let c = chi.at_uniformizer(&prime.norm())?;
        let mut next: Vec<Padic> = Vec::new();
        for t in &acc {
            for l in set {
                let l = Padic::from_rational(p, l.numer(), l.denom(), chi.digits + 8)?;
                let v = t + &(&l * &c);
                if !next.iter().any(|u| (u - &v).is_zero()) {
                    next.push(v);
                }
            }
        }
        acc = next;
    }
    Ok(acc)
}
