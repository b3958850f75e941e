//! Bad primes of the base field, the sets T_q, their assembly into T, and
//! the away-from-p heights of the generators.

use heights::{assemble_t, tq_set, BadPrimeData, HeightError, IdeleCharacter, PrimeIdeal};
use hyperelliptic::{BaseField, CurveModel, IntPoint};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use padic::Padic;

use crate::bundle::Generator;
use crate::ChabautyError;

/// What to do when a generator has no supplied height at a bad prime and
/// none can be certified.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum MissingHeights {
    #[default]
    Fail,
    /// Use 0 and record a warning.
    Zero,
}

#[derive(Clone, Debug)]
pub struct BadPrime {
    pub ideal: PrimeIdeal,
    pub data: Option<BadPrimeData>,
    pub tq: Vec<BigRational>,
}

impl BadPrime {
    fn trivial(&self) -> bool {
        self.tq.len() == 1 && self.tq[0].is_zero()
    }
}

/// The primes of the base field above q.
pub fn ideals_above(field: BaseField, q: u64) -> Vec<PrimeIdeal> {
    match field {
        BaseField::Rationals => vec![PrimeIdeal::rational(q)],
        BaseField::RealQuadratic { d } => {
            let dm = d.rem_euclid(q as i64) as u64;
            let roots: Vec<u64> = (0..q).filter(|r| r * r % q == dm).collect();
            match roots.len() {
                0 => vec![PrimeIdeal { q, w_mod: None, inert: true }],
                _ => roots.into_iter().map(|r| PrimeIdeal { q, w_mod: Some(r), inert: false }).collect(),
            }
        }
    }
}

/// Label of a point in the `sp_points` table of bad-prime data.
pub fn point_label(pt: &IntPoint) -> String {
    format!("({},{})", pt.x, pt.y).replace(' ', "")
}

/// Every bad prime of the model with its T_q.
pub fn bad_prime_table(
    model: &CurveModel,
    supplied: &[BadPrimeData],
    base: Option<&IntPoint>,
) -> Result<Vec<BadPrime>, ChabautyError> {
    let label = base.map(point_label);
    let mut out = Vec::new();
    for q in model.bad_primes() {
        let q = q.to_u64().ok_or_else(|| ChabautyError::Input(format!("bad prime {q} is too large")))?;
        for ideal in ideals_above(model.field, q) {
            let data = supplied.iter().find(|d| d.prime == ideal).cloned();
            let tq = tq_set(model, &ideal, data.as_ref(), label.as_deref())?;
            out.push(BadPrime { ideal, data, tq });
        }
    }
    for d in supplied {
        if !out.iter().any(|b| b.ideal == d.prime) {
            return Err(ChabautyError::Input(format!("bad-prime data given for {}, which is not a bad prime", d.prime)));
        }
    }
    Ok(out)
}

pub fn target_set(table: &[BadPrime], chi: &IdeleCharacter) -> Result<Vec<Padic>, ChabautyError> {
    let sets: Vec<(PrimeIdeal, Vec<BigRational>)> = table.iter().map(|b| (b.ideal.clone(), b.tq.clone())).collect();
    Ok(assemble_t(&sets, chi)?)
}

/// h_q(inf_- - inf_+, gen) at every bad prime: supplied, or 0 when T_q = {0}
/// and the support is integral.
pub fn away_heights(
    table: &[BadPrime],
    gen: &Generator,
    policy: MissingHeights,
    warnings: &mut Vec<String>,
) -> Result<Vec<(PrimeIdeal, BigRational)>, ChabautyError> {
    let mut out = Vec::new();
    for b in table {
        let supplied = b.data.as_ref().and_then(|d| d.generator_local_heights.get(&gen.id)).cloned();
        let l = match supplied {
            Some(l) => l,
            None if b.trivial() && gen.integral_support() => BigRational::zero(),
            None => match policy {
                MissingHeights::Fail => {
                    return Err(HeightError::MissingLocalHeight { prime: b.ideal.to_string(), divisor: gen.id.clone() }.into())
                }
                MissingHeights::Zero => {
                    warnings.push(format!("no height at {} for generator {}; using 0", b.ideal, gen.id));
                    BigRational::zero()
                }
            },
        };
        out.push((b.ideal.clone(), l));
    }
    Ok(out)
}
