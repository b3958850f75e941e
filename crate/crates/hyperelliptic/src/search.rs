//! Naive search for integral points.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::field::{BaseField, QuadElem};
use crate::model::{integral_sqrt, CurveModel, IntPoint};

pub const DEFAULT_PRESCREEN: [u64; 4] = [3, 5, 7, 11];

fn squares_mod(q: u64) -> Vec<bool> {
    let mut sq = vec![false; q as usize];
    for y in 0..q {
        sq[(y * y % q) as usize] = true;
    }
    sq
}

fn int_coeffs(model: &CurveModel) -> Vec<BigInt> {
    model.f.iter().map(|c| c.a.to_integer()).collect()
}

/// Integral points with |x| <= bound over Q, or with both coordinates of
/// x in Z[w] bounded by `bound` over a real quadratic field.
pub fn point_search(model: &CurveModel, bound: u64, prescreen: &[u64]) -> Vec<IntPoint> {
    match model.field {
        BaseField::Rationals => search_q(model, bound, prescreen),
        BaseField::RealQuadratic { d } => search_quadratic(model, bound, d),
    }
}

fn search_q(model: &CurveModel, bound: u64, prescreen: &[u64]) -> Vec<IntPoint> {
    let f = int_coeffs(model);
    let tables: Vec<(u64, Vec<bool>, Vec<u64>)> = prescreen
        .iter()
        .filter(|&&q| q > 1)
        .map(|&q| {
            let fq: Vec<u64> = f.iter().map(|c| (c % BigInt::from(q) + BigInt::from(q)).to_u64().unwrap() % q).collect();
            (q, squares_mod(q), fq)
        })
        .collect();
    let b = bound as i64;
    let mut out = Vec::new();
    for x in -b..=b {
        let sieved = tables.iter().any(|(q, sq, fq)| {
            let xm = x.rem_euclid(*q as i64) as u64;
            let v = fq.iter().rev().fold(0u64, |acc, &c| (acc * xm + c) % q);
            !sq[v as usize]
        });
        if sieved {
            continue;
        }
        let xb = BigInt::from(x);
        let v = f.iter().rev().fold(BigInt::zero(), |acc, c| acc * &xb + c);
        if v.is_negative() {
            continue;
        }
        let r = v.sqrt();
        if &r * &r == v {
            let xq = QuadElem::from_int(x, 0);
            out.push(IntPoint::new(xq.clone(), QuadElem::from_bigint(r.clone(), 0)));
            if !r.is_zero() {
                out.push(IntPoint::new(xq, QuadElem::from_bigint(-r, 0)));
            }
        }
    }
    out
}

fn search_quadratic(model: &CurveModel, bound: u64, d: i64) -> Vec<IntPoint> {
    let b = bound as i64;
    let mut out = Vec::new();
    for a in -b..=b {
        for c in -b..=b {
            let x = QuadElem { a: BigInt::from(a).into(), b: BigInt::from(c).into(), d };
            let v = model.eval(&x);
            if let Some(y) = integral_sqrt(&v) {
                out.push(IntPoint::new(x.clone(), y.clone()));
                if !y.is_zero() {
                    out.push(IntPoint::new(x, -&y));
                }
            }
        }
    }
    out
}
