//! Coleman integrals of omega_i = x^i dx/(2y), i = 0..2g.
//!
//! Every affine disc has an anchor: its Teichmuller point, or its Weierstrass
//! point.  Integrals are measured from a reference Teichmuller point T0.

use std::collections::HashMap;

use hyperelliptic::{CurvePoint, DiscKind, LocalCurve, ResidueDisc};
use padic::number::ilog;
use padic::{Padic, PadicMatrix, PadicPowerSeries};

use crate::frobenius::Frobenius;
use crate::ColemanError;

/// One affine disc: its anchor and the antiderivatives of omega_i from it.
#[derive(Clone, Debug)]
pub struct DiscData {
    pub disc: ResidueDisc,
    pub antiderivatives: Vec<PadicPowerSeries>,
    /// Integrals from T0 to the anchor.
    pub anchor: Vec<Padic>,
}

#[derive(Clone, Debug)]
pub struct Integrator {
    pub curve: LocalCurve,
    pub frobenius: Frobenius,
    pub digits: u32,
    pub reference: CurvePoint,
    discs: HashMap<(u64, u64), DiscData>,
}

/// The matrix I - Phi^T of the Frobenius system.
fn frobenius_system(phi: &PadicMatrix) -> PadicMatrix {
    let p = phi.prime();
    let mut m = phi.transpose();
    for (i, row) in m.data.iter_mut().enumerate() {
        for (j, c) in row.iter_mut().enumerate() {
            let delta = if i == j { Padic::one(p, 64) } else { Padic::exact_zero(p) };
            *c = &delta - &*c;
        }
    }
    m
}

fn sub(a: &[Padic], b: &[Padic]) -> Vec<Padic> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn add(a: &[Padic], b: &[Padic]) -> Vec<Padic> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// Expansion order giving `digits` digits for tiny integrals with v(t) >= 1.
pub fn series_order(p: u64, digits: u32) -> usize {
    let mut m = digits as usize + 4;
    while (m + 1) as i64 - ilog(p, m as u64 + 1) < digits as i64 + 3 {
        m += 1;
    }
    m
}

impl Integrator {
    pub fn new(curve: LocalCurve, frobenius: Frobenius, digits: u32) -> Result<Self, ColemanError> {
        let p = curve.p;
        let dim = 2 * curve.genus + 1;
        let order = series_order(p, digits);
        let residues = curve.affine_points_mod_p();
        let &(x0, y0) = residues.iter().find(|(_, y)| *y != 0).ok_or(ColemanError::NoOrdinaryDisc)?;
        let reference = curve.teichmuller_point(x0, y0)?;
        let (rx, ry) = reference.coords().expect("affine");
        let h0 = frobenius.primitive_vector(rx, ry)?;
        let ref_bar = curve.teichmuller_point(x0, p - y0)?;
        let (bx, by) = ref_bar.coords().expect("affine");
        let system = frobenius_system(&frobenius.matrix);
        let half = Padic::from_rational(p, &1.into(), &2.into(), 64)?;
        let frob_path = |x: &Padic, y: &Padic| -> Result<Vec<Padic>, ColemanError> {
            let h = frobenius.primitive_vector(x, y)?;
            let rhs: Vec<Padic> = sub(&h, &h0).iter().map(|c| c * &half).collect();
            Ok(system.solve(&rhs)?)
        };
        // integral from T0 to its conjugate, halved, reaches every Weierstrass point
        let to_weierstrass: Vec<Padic> = frob_path(bx, by)?.iter().map(|c| c * &half).collect();

        let mut discs = HashMap::new();
        for (xb, yb) in residues {
            let disc = curve.disc_from_residue(xb, yb)?;
            let expansion = curve.local_expansion(&disc, order)?;
            let antiderivatives: Vec<PadicPowerSeries> = expansion.omega.iter().map(|s| s.integrate()).collect();
            let anchor = match disc.kind {
                DiscKind::Ordinary => {
                    let (x, y) = disc.center.coords().expect("affine");
                    frob_path(x, y)?
                }
                DiscKind::Weierstrass => to_weierstrass.clone(),
                DiscKind::Infinite => return Err(ColemanError::InfiniteDisc),
            };
            debug_assert_eq!(anchor.len(), dim);
            discs.insert((xb, yb), DiscData { disc, antiderivatives, anchor });
        }
        Ok(Integrator { curve, frobenius, digits, reference, discs })
    }

    pub fn genus(&self) -> usize {
        self.curve.genus
    }

    pub fn prime(&self) -> u64 {
        self.curve.p
    }

    pub fn discs(&self) -> impl Iterator<Item = &DiscData> {
        self.discs.values()
    }

    /// Disc data for the residue pair (x_bar, y_bar).
    pub fn disc_at(&self, x_bar: u64, y_bar: u64) -> Result<&DiscData, ColemanError> {
        self.discs.get(&(x_bar, y_bar)).ok_or(ColemanError::InfiniteDisc)
    }

    pub fn disc_of(&self, pt: &CurvePoint) -> Result<&DiscData, ColemanError> {
        let disc = self.curve.disc_of(pt)?;
        self.disc_at(disc.x_bar, disc.y_bar)
    }

    /// Integrals from the anchor of the disc to the point with parameter t.
    pub fn from_anchor(&self, data: &DiscData, t: &Padic) -> Vec<Padic> {
        data.antiderivatives.iter().map(|s| s.eval(t)).collect()
    }

    /// Integrals between two points of one disc.
    pub fn tiny_integral(&self, from: &CurvePoint, to: &CurvePoint) -> Result<Vec<Padic>, ColemanError> {
        let a = self.disc_of(from)?;
        let b = self.disc_of(to)?;
        if !a.disc.same_disc(&b.disc) {
            return Err(ColemanError::DifferentDiscs);
        }
        let ta = self.curve.parameter(&a.disc, from)?;
        let tb = self.curve.parameter(&a.disc, to)?;
        Ok(sub(&self.from_anchor(a, &tb), &self.from_anchor(a, &ta)))
    }

    /// Integrals from the reference point T0 to `pt`.
    pub fn from_reference(&self, pt: &CurvePoint) -> Result<Vec<Padic>, ColemanError> {
        let data = self.disc_of(pt)?;
        let t = self.curve.parameter(&data.disc, pt)?;
        Ok(add(&data.anchor, &self.from_anchor(data, &t)))
    }

    /// Integrals from `from` to `to`.
    pub fn integral(&self, from: &CurvePoint, to: &CurvePoint) -> Result<Vec<Padic>, ColemanError> {
        if self.disc_of(from)?.disc.same_disc(&self.disc_of(to)?.disc) {
            return self.tiny_integral(from, to);
        }
        Ok(sub(&self.from_reference(to)?, &self.from_reference(from)?))
    }

    /// Integrals over a degree-zero divisor.
    pub fn divisor_integral(&self, divisor: &[(CurvePoint, i64)]) -> Result<Vec<Padic>, ColemanError> {
        let degree: i64 = divisor.iter().map(|(_, m)| m).sum();
        if degree != 0 {
            return Err(ColemanError::NonzeroDegree(degree));
        }
        let p = self.prime();
        let mut acc = vec![Padic::exact_zero(p); 2 * self.genus() + 1];
        for (pt, m) in divisor {
            let v = self.from_reference(pt)?;
            let m = Padic::from_i64(p, *m, 64);
            acc = add(&acc, &v.iter().map(|c| c * &m).collect::<Vec<_>>());
        }
        Ok(acc)
    }

    pub fn frobenius_system(&self) -> PadicMatrix {
        frobenius_system(&self.frobenius.matrix)
    }
}
