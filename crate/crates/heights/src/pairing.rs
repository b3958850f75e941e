//! The local height pairing at p for two degree-zero divisors with affine
//! support in disjoint x-residue classes:
//!
//!   h_p(D1, D2) = int_{D2} omega_{D1},
//!
//! where omega_{D1} has residue divisor D1 and class in the unit-root
//! subspace.  For D1 = sum m_R R we start from
//!
//!   omega_R = (y + y_R) / (x - x_R) dx/(2y)
//!           = dx / (2 (x - x_R)) + (y_R / 2) dx / ((x - x_R) y).
//!
//! The first part integrates to a logarithm.  The second becomes
//! -X^g dX/(2Y') under X = 1/(x - x_R), Y' = y X^(g+1) / y_R, so its
//! integral is a Coleman integral of the third-kind basis form on that model.
//! The class of sum m_R omega_R is fixed by its cup products with H^1, which
//! reduce to integrals over D1 because omega_R vanishes to high order at
//! both points at infinity.

use std::cell::RefCell;
use std::collections::HashMap;

use coleman::{Cohomology, Frobenius, Integrator};
use hyperelliptic::{CurvePoint, LocalCurve};
use num_bigint::BigInt;
use padic::poly as pp;
use padic::{Padic, PadicMatrix};

use crate::HeightError;

pub struct LocalPairing<'a> {
    integrator: &'a Integrator,
    cohomology: &'a Cohomology,
    basis: Vec<Vec<Padic>>,
    gram_t: PadicMatrix,
    charts: RefCell<HashMap<(BigInt, BigInt), Integrator>>,
}

fn degree(d: &[(CurvePoint, i64)]) -> i64 {
    d.iter().map(|(_, m)| m).sum()
}

impl<'a> LocalPairing<'a> {
    pub fn new(integrator: &'a Integrator, cohomology: &'a Cohomology) -> Result<Self, HeightError> {
        let basis = cohomology.h1_basis();
        let n = basis.len();
        let mut rows = vec![Vec::with_capacity(n); n];
        for a in &basis {
            for (k, b) in basis.iter().enumerate() {
                rows[k].push(cohomology.cup(a, b)?);
            }
        }
        let gram_t = PadicMatrix::from_rows(rows);
        Ok(LocalPairing { integrator, cohomology, basis, gram_t, charts: RefCell::new(HashMap::new()) })
    }

    /// The model y'^2 = X^(2g+2) f(x_R + 1/X) / f(x_R), with its integrator.
    fn chart(&self, x: &Padic, y: &Padic) -> Result<Integrator, HeightError> {
        let digits = self.integrator.digits;
        let key = (x.residue_mod(digits as i64 + 16)?, y.residue_mod(digits as i64 + 16)?);
        if let Some(it) = self.charts.borrow().get(&key) {
            return Ok(it.clone());
        }
        let curve = &self.integrator.curve;
        let p = curve.p;
        let n = curve.degree();
        let mut acc = vec![Padic::exact_zero(p); n + 1];
        let mut power = vec![Padic::one(p, 64)];
        let step = vec![Padic::one(p, 64), x.clone()];
        for (i, c) in curve.f.iter().enumerate() {
            for (k, b) in power.iter().enumerate() {
                acc[k + n - i] = &acc[k + n - i] + &(c * b);
            }
            power = pp::mul(&power, &step);
        }
        let lead = acc[n].checked_inv()?;
        let mut f: Vec<Padic> = acc.iter().map(|c| c * &lead).collect();
        f[n] = Padic::one(p, 64);
        let chart = LocalCurve::from_coefficients(p, f, digits);
        let frob = Frobenius::compute(&chart, digits)?;
        let it = Integrator::new(chart, frob, digits)?;
        self.charts.borrow_mut().insert(key, it.clone());
        Ok(it)
    }

    /// Coefficients c_i, i < g, with sum m_R omega_R - sum c_i x^i dx/y in W.
    pub fn normalization(&self, d1: &[(CurvePoint, i64)]) -> Result<Vec<Padic>, HeightError> {
        let p = self.integrator.prime();
        let two = Padic::from_i64(p, 2, 64);
        let v: Vec<Padic> = self.integrator.divisor_integral(d1)?.iter().map(|c| c * &two).collect();
        let rhs: Vec<Padic> = self
            .basis
            .iter()
            .map(|b| -&b.iter().zip(&v).fold(Padic::exact_zero(p), |acc, (x, y)| &acc + &(x * y)))
            .collect();
        let coords = self.gram_t.solve(&rhs)?;
        let mut class = vec![Padic::exact_zero(p); 2 * self.cohomology.genus + 1];
        for (x, b) in coords.iter().zip(&self.basis) {
            for (c, e) in class.iter_mut().zip(b) {
                *c = &*c + &(x * e);
            }
        }
        Ok(self.cohomology.split(&class)?.holomorphic)
    }

    /// h_p(D1, D2).
    pub fn pair(&self, d1: &[(CurvePoint, i64)], d2: &[(CurvePoint, i64)]) -> Result<Padic, HeightError> {
        for d in [d1, d2] {
            if degree(d) != 0 {
                return Err(HeightError::NonzeroDegree(degree(d)));
            }
        }
        let p = self.integrator.prime();
        let g = self.cohomology.genus;
        let coords = |d: &[(CurvePoint, i64)]| -> Result<Vec<(Padic, Padic, i64)>, HeightError> {
            d.iter()
                .map(|(pt, m)| pt.coords().map(|(x, y)| (x.clone(), y.clone(), *m)).ok_or(HeightError::UnsupportedPoint))
                .collect()
        };
        let poles = coords(d1)?;
        let targets = coords(d2)?;
        if poles.iter().any(|(_, y, _)| y.valuation() != Some(0)) {
            return Err(HeightError::UnsupportedPoint);
        }
        let half = Padic::from_rational(p, &1.into(), &2.into(), 64)?;
        let mut h = Padic::exact_zero(p);
        for (xr, _, mr) in &poles {
            for (xq, _, mq) in &targets {
                let diff = xq - xr;
                if diff.valuation() != Some(0) {
                    return Err(HeightError::SupportsMeet);
                }
                let m = Padic::from_i64(p, mr * mq, 64);
                h = &h + &(&(&m * &half) * &diff.log()?);
            }
        }
        for (xr, yr, mr) in &poles {
            let chart = self.chart(xr, yr)?;
            let yinv = yr.checked_inv()?;
            let image = targets
                .iter()
                .map(|(xq, yq, mq)| {
                    let big_x = (xq - xr).checked_inv()?;
                    let big_y = &(yq * &big_x.pow(g as u64 + 1)) * &yinv;
                    Ok((CurvePoint::affine(big_x, big_y), *mq))
                })
                .collect::<Result<Vec<_>, HeightError>>()?;
            let v = chart.divisor_integral(&image)?;
            h = &h - &(&Padic::from_i64(p, *mr, 64) * &v[g]);
        }
        let c = self.normalization(d1)?;
        let w = self.integrator.divisor_integral(d2)?;
        let two = Padic::from_i64(p, 2, 64);
        for (ci, wi) in c.iter().zip(&w) {
            h = &h - &(&(ci * wi) * &two);
        }
        Ok(h)
    }
}
