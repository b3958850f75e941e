//! Root finding for p-adic power series on pZ_p.
//!
//! Every series handed in is in a variable z ranging over pZ_p.  The solvers
//! pass to w = z/p and recurse over residue boxes of Z_p; a box is dropped
//! only when it provably holds no root, and a box that can be neither
//! excluded nor certified within the depth limit is reported as uncertified.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::matrix::PadicMatrix;
use crate::number::{Padic, PadicError, INF};
use crate::series::{PadicPowerSeries, StrassmannError, ZpSeries};

#[derive(Clone, Copy, Debug)]
pub struct SolverConfig {
    /// Number of subdivision levels below the top box.
    pub max_depth: u32,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig { max_depth: 6 }
    }
}

/// A root in the z-coordinates, one entry per variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Root {
    pub coords: Vec<Padic>,
    /// True when the root is proven simple and unique in its box.
    pub certified: bool,
    /// Upper bound on the number of roots in the box, when known.
    pub multiplicity_bound: Option<usize>,
}

#[derive(Clone, Debug, Default)]
pub struct RootReport {
    pub roots: Vec<Root>,
    /// Strassmann bound on pZ_p for a single series.
    pub strassmann_bound: Option<usize>,
    /// For systems: whether the top-level Jacobian was already invertible mod p.
    pub jacobian_unit: Option<bool>,
}

impl RootReport {
    pub fn certified(&self) -> impl Iterator<Item = &Root> {
        self.roots.iter().filter(|r| r.certified)
    }

    pub fn all_certified(&self) -> bool {
        self.roots.iter().all(|r| r.certified)
    }
}

/// Upper bound on the number of zeros of `f` in pZ_p.
pub fn strassmann_bound(f: &PadicPowerSeries) -> Result<usize, PadicError> {
    f.rescale().strassmann().map_err(|StrassmannError::Undecidable| PadicError::InsufficientPrecision {
        needed: INF,
        have: f.rescale().precision(),
    })
}

fn box_coord(p: u64, center: &BigInt, e: i64, s: Option<&Padic>, abs: i64) -> Padic {
    // z = p * (center + p^e s)
    let c = Padic::from_int_mod(p, &(center * BigInt::from(p)), abs + 1);
    match s {
        Some(s) => (&c + &s.shift(e + 1)).with_abs(abs + 1),
        None => c,
    }
}

fn newton_1d(h: &ZpSeries, m: i64) -> Result<Padic, PadicError> {
    let p = h.prime;
    let prec = h.precision();
    let target = prec - m;
    let mut s = Padic::zero(p, target.max(1));
    let mut last_abs = i64::MIN;
    for _ in 0..200 {
        let num = h.eval(&s);
        let den = h.eval_derivative(&s);
        let step = num.checked_div(&den)?;
        let next = (&s - &step).with_abs(target);
        if next == s && next.abs_precision() == last_abs {
            break;
        }
        last_abs = next.abs_precision();
        s = next;
    }
    Ok(s.with_abs(target))
}

fn search_1d(h: &ZpSeries, center: &BigInt, e: i64, depth: u32, cfg: &SolverConfig, out: &mut Vec<Root>) {
    let p = h.prime;
    match h.strassmann() {
        Ok(0) => {}
        Ok(1) => {
            let m = h.coeffs.iter().filter(|c| !c.is_zero()).map(|c| c.val_lower()).min().unwrap_or(0);
            match newton_1d(h, m) {
                Ok(s) => {
                    let abs = e + s.abs_precision();
                    out.push(Root { coords: vec![box_coord(p, center, e, Some(&s), abs)], certified: true, multiplicity_bound: Some(1) });
                }
                Err(_) => out.push(Root {
                    coords: vec![box_coord(p, center, e, None, e)],
                    certified: false,
                    multiplicity_bound: Some(1),
                }),
            }
        }
        res => {
            let bound = res.ok();
            if depth >= cfg.max_depth || res.is_err() && h.precision() <= 0 {
                out.push(Root { coords: vec![box_coord(p, center, e, None, e)], certified: false, multiplicity_bound: bound });
                return;
            }
            let pe = BigInt::from(p).pow(e as u32);
            for a in 0..p {
                let a = BigInt::from(a);
                let child = h.shift(&a, 1);
                search_1d(&child, &(center + &a * &pe), e + 1, depth + 1, cfg, out);
            }
        }
    }
}

/// All zeros of `f` on pZ_p.
pub fn solve_single(f: &PadicPowerSeries, cfg: &SolverConfig) -> RootReport {
    let g = f.rescale();
    let mut roots = Vec::new();
    search_1d(&g, &BigInt::zero(), 0, 0, cfg, &mut roots);
    RootReport { roots, strassmann_bound: g.strassmann().ok(), jacobian_unit: None }
}

/// A system a_k + sum_j F_{k,j}(z_j) = 0, k, j = 1..d, where each F_{k,j}
/// is a series in the single variable z_j with zero constant term.
#[derive(Clone, Debug)]
pub struct SeparatedSystem {
    pub constants: Vec<Padic>,
    pub blocks: Vec<Vec<PadicPowerSeries>>,
}

impl SeparatedSystem {
    pub fn dim(&self) -> usize {
        self.constants.len()
    }

    /// Value of each equation at a point given in z-coordinates.
    pub fn eval(&self, z: &[Padic]) -> Vec<Padic> {
        self.constants
            .iter()
            .zip(&self.blocks)
            .map(|(a, row)| row.iter().zip(z).fold(a.clone(), |acc, (f, zj)| &acc + &f.eval(zj)))
            .collect()
    }
}

struct SysBox {
    constants: Vec<Padic>,
    blocks: Vec<Vec<ZpSeries>>,
    center: Vec<BigInt>,
    e: i64,
}

enum BoxVerdict {
    Empty,
    Unique(Vec<Padic>),
    Open,
}

fn normalized_linear(b: &SysBox) -> Option<(Vec<i64>, PadicMatrix)> {
    let d = b.constants.len();
    let p = b.blocks[0][0].prime;
    let mut mins = Vec::with_capacity(d);
    let mut rows = Vec::with_capacity(d);
    for k in 0..d {
        let m = b.blocks[k].iter().map(|h| h.min_nonconstant_val()).min().unwrap_or(INF);
        if m >= INF {
            return None;
        }
        let mut row = Vec::with_capacity(d);
        for h in &b.blocks[k] {
            let lin = h.coeffs.get(1).cloned().unwrap_or_else(|| Padic::exact_zero(p));
            let higher = h.coeffs.iter().skip(2).map(|c| c.val_lower()).min().unwrap_or(INF).min(h.omitted_bound());
            if higher < m + 1 {
                return None;
            }
            row.push(lin.shift(-m));
        }
        mins.push(m);
        rows.push(row);
    }
    Some((mins, PadicMatrix::from_rows(rows)))
}

fn examine(b: &SysBox) -> Result<BoxVerdict, PadicError> {
    let d = b.constants.len();
    for k in 0..d {
        let m = b.blocks[k].iter().map(|h| h.min_nonconstant_val()).min().unwrap_or(INF);
        let a = &b.constants[k];
        if !a.is_zero() && a.val_lower() < m {
            return Ok(BoxVerdict::Empty);
        }
    }
    let Some((mins, lin)) = normalized_linear(b) else {
        return Ok(BoxVerdict::Open);
    };
    let det = lin.det();
    if det.is_zero() || det.val_lower() != 0 {
        return Ok(BoxVerdict::Open);
    }
    // Newton on the box variables s_j.
    let p = lin.prime();
    let prec = (0..d)
        .map(|k| {
            let bp = b.blocks[k].iter().map(|h| h.precision()).min().unwrap_or(INF);
            bp.min(b.constants[k].abs_precision()) - mins[k]
        })
        .min()
        .unwrap_or(INF);
    if prec <= 0 {
        return Ok(BoxVerdict::Open);
    }
    let mut s: Vec<Padic> = vec![Padic::zero(p, prec); d];
    for _ in 0..200 {
        let val: Vec<Padic> = (0..d)
            .map(|k| {
                let v = b.blocks[k].iter().zip(&s).fold(b.constants[k].clone(), |acc, (h, sj)| &acc + &h.eval(sj));
                v.shift(-mins[k])
            })
            .collect();
        let jac = PadicMatrix::from_rows(
            (0..d)
                .map(|k| b.blocks[k].iter().zip(&s).map(|(h, sj)| h.eval_derivative(sj).shift(-mins[k])).collect())
                .collect(),
        );
        let step = jac.solve(&val)?;
        let next: Vec<Padic> = s.iter().zip(&step).map(|(x, dx)| (x - dx).with_abs(prec)).collect();
        if next == s {
            break;
        }
        s = next;
    }
    Ok(BoxVerdict::Unique(s))
}

fn child(b: &SysBox, digits: &[u64]) -> SysBox {
    let p = b.blocks[0][0].prime;
    let d = b.constants.len();
    let pe = BigInt::from(p).pow(b.e as u32);
    let mut constants = b.constants.clone();
    let mut blocks = Vec::with_capacity(d);
    for k in 0..d {
        let mut row = Vec::with_capacity(d);
        for (j, h) in b.blocks[k].iter().enumerate() {
            let shifted = h.shift(&BigInt::from(digits[j]), 1);
            constants[k] = &constants[k] + &shifted.constant();
            row.push(shifted.without_constant());
        }
        blocks.push(row);
    }
    let center = b.center.iter().zip(digits).map(|(c, &a)| c + BigInt::from(a) * &pe).collect();
    SysBox { constants, blocks, center, e: b.e + 1 }
}

fn search_system(b: SysBox, depth: u32, cfg: &SolverConfig, out: &mut Vec<Root>) {
    let p = b.blocks[0][0].prime;
    let verdict = examine(&b).unwrap_or(BoxVerdict::Open);
    match verdict {
        BoxVerdict::Empty => {}
        BoxVerdict::Unique(s) => {
            let coords = b.center.iter().zip(&s).map(|(c, sj)| box_coord(p, c, b.e, Some(sj), b.e + sj.abs_precision())).collect();
            out.push(Root { coords, certified: true, multiplicity_bound: Some(1) });
        }
        BoxVerdict::Open => {
            let d = b.constants.len();
            let stuck = b.constants.iter().all(|a| a.is_zero() && a.abs_precision() <= 0);
            if depth >= cfg.max_depth || stuck {
                let coords = b.center.iter().map(|c| box_coord(p, c, b.e, None, b.e)).collect();
                out.push(Root { coords, certified: false, multiplicity_bound: None });
                return;
            }
            let total = (p as usize).pow(d as u32);
            for idx in 0..total {
                let mut digits = Vec::with_capacity(d);
                let mut r = idx;
                for _ in 0..d {
                    digits.push((r % p as usize) as u64);
                    r /= p as usize;
                }
                search_system(child(&b, &digits), depth + 1, cfg, out);
            }
        }
    }
}

/// All common zeros of a separated system on (pZ_p)^d.
pub fn solve_separated(sys: &SeparatedSystem, cfg: &SolverConfig) -> Result<RootReport, PadicError> {
    let d = sys.dim();
    if d == 0 || sys.blocks.len() != d || sys.blocks.iter().any(|r| r.len() != d) {
        return Err(PadicError::Dimension(format!("separated system needs a {d}x{d} block array")));
    }
    let blocks: Vec<Vec<ZpSeries>> = sys.blocks.iter().map(|r| r.iter().map(|f| f.rescale().without_constant()).collect()).collect();
    let constants: Vec<Padic> = sys
        .constants
        .iter()
        .zip(&sys.blocks)
        .map(|(a, row)| row.iter().fold(a.clone(), |acc, f| &acc + &f.coeff(0)))
        .collect();
    let top = SysBox { constants, blocks, center: vec![BigInt::zero(); d], e: 0 };
    let jacobian_unit = normalized_linear(&top).map(|(_, l)| {
        let det = l.det();
        !det.is_zero() && det.val_lower() == 0
    });
    let mut roots = Vec::new();
    search_system(top, 0, cfg, &mut roots);
    Ok(RootReport { roots, strassmann_bound: None, jacobian_unit: Some(jacobian_unit.unwrap_or(false)) })
}
