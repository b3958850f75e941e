//! The curve over Q_p: points, residue discs and local expansions.

use num_bigint::BigInt;
use padic::poly as pp;
use padic::series::Tail;
use padic::{Padic, PadicPowerSeries};

use crate::field::BaseField;
use crate::model::{CurveError, CurveModel, IntPoint};

/// A point of the curve over Q_p.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CurvePoint {
    Affine { x: Padic, y: Padic },
    /// The branch where y / x^(g+1) tends to +1.
    InfinityPlus,
    /// The branch where y / x^(g+1) tends to -1.
    InfinityMinus,
}

impl CurvePoint {
    pub fn affine(x: Padic, y: Padic) -> Self {
        CurvePoint::Affine { x, y }
    }

    pub fn involution(&self) -> Self {
        match self {
            CurvePoint::Affine { x, y } => CurvePoint::Affine { x: x.clone(), y: -y },
            CurvePoint::InfinityPlus => CurvePoint::InfinityMinus,
            CurvePoint::InfinityMinus => CurvePoint::InfinityPlus,
        }
    }

    pub fn coords(&self) -> Option<(&Padic, &Padic)> {
        match self {
            CurvePoint::Affine { x, y } => Some((x, y)),
            _ => None,
        }
    }

    pub fn is_weierstrass(&self) -> bool {
        matches!(self, CurvePoint::Affine { y, .. } if y.is_zero())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DiscKind {
    /// Affine with y a unit; parameter t = x - x_center.
    Ordinary,
    /// Affine with y divisible by p; parameter t = y.
    Weierstrass,
    Infinite,
}

/// A residue disc together with the point used to parametrize it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueDisc {
    pub x_bar: u64,
    pub y_bar: u64,
    pub kind: DiscKind,
    pub center: CurvePoint,
}

impl ResidueDisc {
    pub fn same_disc(&self, other: &ResidueDisc) -> bool {
        self.x_bar == other.x_bar && self.y_bar == other.y_bar && self.kind == other.kind
    }

    pub fn reduction(&self) -> (u64, u64) {
        (self.x_bar, self.y_bar)
    }
}

/// Series describing a disc: x(t), y(t) and omega_i / dt for the basis
/// x^i dx / (2y), i = 0..2g.
#[derive(Clone, Debug)]
pub struct LocalExpansion {
    pub x: PadicPowerSeries,
    pub y: PadicPowerSeries,
    pub omega: Vec<PadicPowerSeries>,
}

/// Extra digits carried by the coefficients beyond the working precision,
/// so that Frobenius reduction can run with guard digits.
pub const HEADROOM: u32 = 32;

/// A monic even-degree curve with p-integral coefficients over Q_p.
#[derive(Clone, Debug)]
pub struct LocalCurve {
    pub p: u64,
    pub genus: usize,
    /// Coefficients, constant term first; the leading one is 1.
    pub f: Vec<Padic>,
    pub digits: u32,
    /// Image of w under the chosen embedding (real quadratic base fields).
    pub w_image: Option<Padic>,
}

fn residue_of(x: &Padic) -> Result<u64, CurveError> {
    if x.val_lower() < 0 && !x.is_zero() {
        return Err(CurveError::InfiniteDisc);
    }
    Ok(x.residue().unwrap_or(0))
}

impl LocalCurve {
    /// The image of a monic model under embedding number `embedding`
    /// (0 or 1, smaller residue of sqrt(d) first; ignored over Q).
    pub fn from_model(model: &CurveModel, p: u64, embedding: usize, digits: u32) -> Result<Self, CurveError> {
        if !model.is_monic() {
            return Err(CurveError::NotMonic);
        }
        model.validate_at(p)?;
        let w_image = match model.field {
            BaseField::Rationals => None,
            BaseField::RealQuadratic { .. } => {
                let roots = model.field.split_roots(p, digits + HEADROOM);
                Some(roots.get(embedding).cloned().ok_or(CurveError::NotSplit(p))?)
            }
        };
        let f = model
            .f
            .iter()
            .map(|c| c.embed(p, w_image.as_ref(), digits + HEADROOM))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(LocalCurve { p, genus: model.genus, f, digits, w_image })
    }

    /// Directly from p-adic coefficients (monic, p-integral).
    pub fn from_coefficients(p: u64, f: Vec<Padic>, digits: u32) -> Self {
        let genus = (f.len() - 1) / 2 - 1;
        LocalCurve { p, genus, f, digits, w_image: None }
    }

    pub fn degree(&self) -> usize {
        self.f.len() - 1
    }

    pub fn eval_f(&self, x: &Padic) -> Padic {
        pp::eval(&self.f, x)
    }

    pub fn eval_df(&self, x: &Padic) -> Padic {
        pp::eval(&pp::deriv(&self.f), x)
    }

    /// Reduction of f modulo p.
    pub fn reduction(&self) -> Vec<u64> {
        self.f.iter().map(|c| c.residue().unwrap_or(0)).collect()
    }

    fn f_mod_p(&self, x: u64) -> u64 {
        let p = self.p;
        self.reduction().iter().rev().fold(0u64, |acc, &c| (acc * x + c) % p)
    }

    /// Exact coordinates carry the same guard digits as the coefficients.
    pub fn embed_point(&self, pt: &IntPoint) -> Result<CurvePoint, CurveError> {
        let x = pt.x.embed(self.p, self.w_image.as_ref(), self.digits + HEADROOM)?;
        let y = pt.y.embed(self.p, self.w_image.as_ref(), self.digits + HEADROOM)?;
        Ok(CurvePoint::Affine { x, y })
    }

    /// Points (x, y) of the reduced affine curve.
    pub fn affine_points_mod_p(&self) -> Vec<(u64, u64)> {
        let p = self.p;
        let mut out = Vec::new();
        for x in 0..p {
            let v = self.f_mod_p(x);
            for y in 0..p {
                if y * y % p == v {
                    out.push((x, y));
                }
            }
        }
        out
    }

    fn kind_of(&self, y_bar: u64) -> DiscKind {
        if y_bar == 0 {
            DiscKind::Weierstrass
        } else {
            DiscKind::Ordinary
        }
    }

    /// The residue disc containing `pt`, centred at `pt` itself.
    pub fn disc_of(&self, pt: &CurvePoint) -> Result<ResidueDisc, CurveError> {
        match pt {
            CurvePoint::Affine { x, y } => {
                let x_bar = residue_of(x)?;
                let y_bar = residue_of(y)?;
                let kind = self.kind_of(y_bar);
                let center = if kind == DiscKind::Weierstrass { self.weierstrass_point(x_bar)? } else { pt.clone() };
                Ok(ResidueDisc { x_bar, y_bar, kind, center })
            }
            _ => Err(CurveError::InfiniteDisc),
        }
    }

    /// Every affine residue disc, centred at its Teichmuller or Weierstrass point.
    pub fn affine_discs(&self) -> Result<Vec<ResidueDisc>, CurveError> {
        self.affine_points_mod_p().into_iter().map(|(x, y)| self.disc_from_residue(x, y)).collect()
    }

    pub fn disc_from_residue(&self, x_bar: u64, y_bar: u64) -> Result<ResidueDisc, CurveError> {
        let kind = self.kind_of(y_bar);
        let center = match kind {
            DiscKind::Weierstrass => self.weierstrass_point(x_bar)?,
            _ => self.teichmuller_point(x_bar, y_bar)?,
        };
        Ok(ResidueDisc { x_bar, y_bar, kind, center })
    }

    /// The point with Teichmuller x-coordinate above (x_bar, y_bar), y_bar != 0.
    pub fn teichmuller_point(&self, x_bar: u64, y_bar: u64) -> Result<CurvePoint, CurveError> {
        let abs = self.digits as i64 + 2;
        let x = if x_bar % self.p == 0 { Padic::exact_zero(self.p) } else { Padic::teichmuller(self.p, x_bar, abs) };
        let y = self.sqrt_with_residue(&self.eval_f(&x), y_bar)?;
        Ok(CurvePoint::Affine { x, y })
    }

    fn sqrt_with_residue(&self, v: &Padic, y_bar: u64) -> Result<Padic, CurveError> {
        let r = v.sqrt().ok_or(CurveError::NotOnCurve(format!("{v}"), format!("{y_bar}")))?;
        if r.residue() == Some(y_bar % self.p) {
            Ok(r)
        } else {
            let s = -&r;
            if s.residue() == Some(y_bar % self.p) {
                Ok(s)
            } else {
                Err(CurveError::NotOnCurve(format!("{v}"), format!("{y_bar}")))
            }
        }
    }

    /// The p-adic root of f reducing to x_bar, with y = 0.
    pub fn weierstrass_point(&self, x_bar: u64) -> Result<CurvePoint, CurveError> {
        let p = self.p;
        let abs = self.digits as i64 + 2;
        let mut e = Padic::from_int_mod(p, &BigInt::from(x_bar), abs);
        if x_bar == 0 {
            e = Padic::zero(p, abs);
        }
        for _ in 0..(2 * abs as usize + 4) {
            let fe = self.eval_f(&e);
            let de = self.eval_df(&e);
            if de.valuation() != Some(0) {
                return Err(CurveError::BadReduction(p));
            }
            let next = (&e - &fe.checked_div(&de)?).with_abs(abs);
            if next == e {
                break;
            }
            e = next;
        }
        Ok(CurvePoint::Affine { x: e, y: Padic::zero(p, abs) })
    }

    /// Points over Z_p with x reducing to x0: Teichmuller x, or the
    /// Weierstrass point when f(x0) = 0 mod p.
    pub fn lift_point(&self, x0: u64) -> Result<Vec<CurvePoint>, CurveError> {
        let p = self.p;
        let x0 = x0 % p;
        let v = self.f_mod_p(x0);
        if v == 0 {
            return Ok(vec![self.weierstrass_point(x0)?]);
        }
        let roots: Vec<u64> = (1..p).filter(|y| y * y % p == v).collect();
        roots.into_iter().map(|y| self.teichmuller_point(x0, y)).collect()
    }

    /// Local parameter of `pt` in `disc`.
    pub fn parameter(&self, disc: &ResidueDisc, pt: &CurvePoint) -> Result<Padic, CurveError> {
        let (x, y) = pt.coords().ok_or(CurveError::InfiniteDisc)?;
        if residue_of(x)? != disc.x_bar || residue_of(y)? != disc.y_bar {
            return Err(CurveError::NotOnCurve(format!("{x}"), format!("{y}")));
        }
        match disc.kind {
            DiscKind::Ordinary => {
                let (xc, _) = disc.center.coords().unwrap();
                Ok(x - xc)
            }
            DiscKind::Weierstrass => Ok(y.clone()),
            DiscKind::Infinite => Err(CurveError::InfiniteDisc),
        }
    }

    /// The point of `disc` with parameter t.
    pub fn point_at(&self, disc: &ResidueDisc, t: &Padic) -> Result<CurvePoint, CurveError> {
        let (xc, _) = disc.center.coords().ok_or(CurveError::InfiniteDisc)?;
        match disc.kind {
            DiscKind::Ordinary => {
                let x = xc + t;
                let y = self.sqrt_with_residue(&self.eval_f(&x), disc.y_bar)?;
                Ok(CurvePoint::Affine { x, y })
            }
            DiscKind::Weierstrass => {
                let order = 2 * self.digits as usize + 8;
                let exp = self.local_expansion(disc, order)?;
                Ok(CurvePoint::Affine { x: exp.x.eval(t), y: t.clone() })
            }
            DiscKind::Infinite => Err(CurveError::InfiniteDisc),
        }
    }

    /// Expansions to `order` terms in the disc parameter.
    pub fn local_expansion(&self, disc: &ResidueDisc, order: usize) -> Result<LocalExpansion, CurveError> {
        match disc.kind {
            DiscKind::Ordinary => self.ordinary_expansion(&disc.center, order),
            DiscKind::Weierstrass => self.weierstrass_expansion(&disc.center, order),
            DiscKind::Infinite => Err(CurveError::InfiniteDisc),
        }
    }

    fn ordinary_expansion(&self, center: &CurvePoint, order: usize) -> Result<LocalExpansion, CurveError> {
        let p = self.p;
        let (x0, y0) = center.coords().ok_or(CurveError::InfiniteDisc)?;
        let big = self.digits + 8;
        let shifted = pp::taylor_shift(&self.f, x0);
        let two_y0 = y0 * &Padic::from_i64(p, 2, big);
        let mut y = vec![y0.clone()];
        for n in 1..order {
            let mut acc = shifted.get(n).cloned().unwrap_or_else(|| Padic::exact_zero(p));
            for i in 1..n {
                acc = &acc - &(&y[i] * &y[n - i]);
            }
            y.push(acc.checked_div(&two_y0)?);
        }
        let inv_y0 = y0.checked_inv()?;
        let mut z = vec![inv_y0.clone()];
        for n in 1..order {
            let mut acc = Padic::exact_zero(p);
            for i in 1..=n {
                acc = &acc + &(&y[i] * &z[n - i]);
            }
            z.push(-&(&acc * &inv_y0));
        }
        let half = Padic::from_rational(p, &BigInt::from(1), &BigInt::from(2), big)?;
        let x_poly = vec![x0.clone(), Padic::one(p, big)];
        let tail = Tail { min_val: 0, log_loss: 0 };
        let half_z = pp::scale(&z, &half);
        let mut omega = Vec::with_capacity(2 * self.genus + 1);
        let mut xi = vec![Padic::one(p, big)];
        for _ in 0..=2 * self.genus {
            omega.push(PadicPowerSeries::with_tail(p, pp::mul_trunc(&xi, &half_z, order), tail));
            xi = pp::mul(&xi, &x_poly);
        }
        Ok(LocalExpansion {
            x: PadicPowerSeries::polynomial(p, x_poly),
            y: PadicPowerSeries::with_tail(p, y, tail),
            omega,
        })
    }

    /// Around a Weierstrass point (e, 0): t = y and x = e + S(t^2) with f(e + S(v)) = v.
    fn weierstrass_expansion(&self, center: &CurvePoint, order: usize) -> Result<LocalExpansion, CurveError> {
        let p = self.p;
        let (e, _) = center.coords().ok_or(CurveError::InfiniteDisc)?;
        let big = self.digits + 8;
        let mut a = pp::taylor_shift(&self.f, e);
        a[0] = Padic::exact_zero(p);
        let a1_inv = a[1].checked_inv()?;
        let half_order = order / 2 + 1;
        let v = vec![Padic::exact_zero(p), Padic::one(p, big)];
        let mut s: Vec<Padic> = pp::scale(&v, &a1_inv);
        for _ in 0..half_order {
            // sum_{k>=2} a_k S^k by Horner, truncated
            let mut h: Vec<Padic> = vec![a[a.len() - 1].clone()];
            for k in (2..a.len() - 1).rev() {
                h = pp::mul_trunc(&h, &s, half_order);
                h = pp::add(&h, &[a[k].clone()]);
            }
            let s2 = pp::mul_trunc(&s, &s, half_order);
            let higher = pp::mul_trunc(&h, &s2, half_order);
            s = pp::scale(&pp::sub(&v, &higher), &a1_inv);
            s.truncate(half_order);
        }
        // x(t) = e + S(t^2); omega_i / dt = x^i S'(t^2)
        let mut x = vec![Padic::exact_zero(p); 2 * half_order];
        x[0] = e.clone();
        for (j, c) in s.iter().enumerate().skip(1) {
            x[2 * j] = &x[2 * j] + c;
        }
        let ds = pp::deriv(&s);
        let mut dsq = vec![Padic::exact_zero(p); 2 * ds.len()];
        for (j, c) in ds.iter().enumerate() {
            dsq[2 * j] = c.clone();
        }
        let tail = Tail { min_val: 0, log_loss: 0 };
        let mut omega = Vec::with_capacity(2 * self.genus + 1);
        let mut xi = vec![Padic::one(p, big)];
        for _ in 0..=2 * self.genus {
            omega.push(PadicPowerSeries::with_tail(p, pp::mul_trunc(&xi, &dsq, order.min(2 * half_order - 2)), tail));
            xi = pp::mul_trunc(&xi, &x, 2 * half_order);
        }
        x.truncate(2 * half_order - 1);
        Ok(LocalExpansion {
            x: PadicPowerSeries::with_tail(p, x, tail),
            y: PadicPowerSeries::polynomial(p, vec![Padic::exact_zero(p), Padic::one(p, big)]),
            omega,
        })
    }

    /// Number of affine points of the reduction over F_p.
    pub fn affine_count_mod_p(&self) -> usize {
        self.affine_points_mod_p().len()
    }
}

/// Whether the p-adic number is zero to its precision and that precision is at least `need`.
pub fn vanishes_to(x: &Padic, need: i64) -> bool {
    x.is_zero() && x.abs_precision() >= need
}
