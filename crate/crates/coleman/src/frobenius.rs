//! Frobenius on the odd part of Monsky-Washnitzer cohomology of y^2 = f(x),
//! f monic of degree 2g + 2, with the lift x -> x^p.

use hyperelliptic::LocalCurve;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use padic::number::ilog;
use padic::poly as pp;
use padic::{Padic, PadicMatrix};

use crate::ColemanError;

/// phi^*(x^i dx/y) = sum_j matrix[j][i] x^j dx/y + d h_i.
#[derive(Clone, Debug)]
pub struct Frobenius {
    pub prime: u64,
    pub genus: usize,
    pub matrix: PadicMatrix,
    /// Terms of the binomial series that were kept.
    pub terms: usize,
    /// Digits carried while expanding and reducing.
    pub working_digits: u32,
    /// Digits lost between the working precision and the output.
    pub loss: i64,
    primitives: Vec<Primitive>,
    cap: i64,
}

/// h = sum B_m(x) / y^(2m-1) + C(x) y.
#[derive(Clone, Debug, Default)]
struct Primitive {
    polar: Vec<(usize, Vec<Padic>)>,
    regular: Vec<Padic>,
}

fn modp(a: &BigInt, m: &BigInt) -> BigInt {
    let r = a % m;
    if r < BigInt::zero() {
        r + m
    } else {
        r
    }
}

fn zmul(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out.iter().map(|c| modp(c, m)).collect()
}

fn zpow(a: &[BigInt], mut e: u64, m: &BigInt) -> Vec<BigInt> {
    let mut base = a.to_vec();
    let mut acc = vec![BigInt::one()];
    while e > 0 {
        if e & 1 == 1 {
            acc = zmul(&acc, &base, m);
        }
        e >>= 1;
        if e > 0 {
            base = zmul(&base, &base, m);
        }
    }
    acc
}

/// R, S with R f + S f' = 1.
fn bezout(f: &[Padic], rel: u32) -> Result<(Vec<Padic>, Vec<Padic>), ColemanError> {
    let p = f[0].prime();
    let df = pp::deriv(f);
    let n = f.len() - 1;
    let (nr, ns) = (n - 1, n);
    let size = nr + ns;
    let mut rows = vec![vec![Padic::exact_zero(p); size]; size];
    for a in 0..nr {
        for (k, c) in f.iter().enumerate() {
            rows[a + k][a] = c.clone();
        }
    }
    for b in 0..ns {
        for (k, c) in df.iter().enumerate() {
            rows[b + k][nr + b] = c.clone();
        }
    }
    let mut rhs = vec![Padic::exact_zero(p); size];
    rhs[0] = Padic::one(p, rel);
    let sol = PadicMatrix::from_rows(rows).solve(&rhs)?;
    Ok((sol[..nr].to_vec(), sol[nr..].to_vec()))
}

fn constant(p: u64, num: i64, den: i64, rel: u32) -> Padic {
    Padic::from_rational(p, &BigInt::from(num), &BigInt::from(den), rel).expect("nonzero denominator")
}

/// Reduction of forms A_m(x) dx / y^(2m+1) to the basis x^i dx/y, i = 0..2g.
#[derive(Clone, Debug)]
pub struct Reducer {
    f: Vec<Padic>,
    df: Vec<Padic>,
    r_poly: Vec<Padic>,
    s_poly: Vec<Padic>,
    genus: usize,
    rel: u32,
}

impl Reducer {
    pub fn new(f: &[Padic], rel: u32) -> Result<Self, ColemanError> {
        let (r_poly, s_poly) = bezout(f, rel)?;
        Ok(Reducer { f: f.to_vec(), df: pp::deriv(f), r_poly, s_poly, genus: (f.len() - 1) / 2 - 1, rel })
    }

    /// Class of sum_m levels[m](x) dx / y^(2m+1).
    pub fn reduce(&self, levels: Vec<Vec<Padic>>) -> Result<Vec<Padic>, ColemanError> {
        Ok(self.reduce_levels(levels)?.0)
    }

    /// The class, the primitive of the exact part and the degree reached at level 0.
    fn reduce_levels(&self, mut levels: Vec<Vec<Padic>>) -> Result<(Vec<Padic>, Primitive, usize), ColemanError> {
        let f = &self.f;
        let p = f[0].prime();
        let g = self.genus;
        let dim = 2 * g + 1;
        let big = self.rel;
        let mut prim = Primitive::default();
        for m in (1..levels.len()).rev() {
            let a = std::mem::take(&mut levels[m]);
            if a.is_empty() {
                continue;
            }
            // A/y^(2m+1) = Q/y^(2m-1) + r/y^(2m+1), and r = rRf + rSf'
            let (q, r) = pp::divmod_monic(&a, f);
            let r = pp::trim(r);
            let mut next = pp::add(&levels[m - 1], &q);
            if !r.is_empty() {
                let rs = pp::mul(&r, &self.s_poly);
                let c = constant(p, 2, 2 * m as i64 - 1, big);
                next = pp::add(&next, &pp::mul(&r, &self.r_poly));
                next = pp::add(&next, &pp::scale(&pp::deriv(&rs), &c));
                prim.polar.push((m, pp::scale(&rs, &-&c)));
            }
            levels[m - 1] = next;
        }
        let mut a = pp::trim(levels.into_iter().next().unwrap_or_default());
        let degree = a.len();
        if a.len() > dim {
            let half = constant(p, 1, 2, big);
            prim.regular = vec![Padic::exact_zero(p); a.len() - dim];
            for d in (dim..a.len()).rev() {
                let j = d - dim;
                let coef = a[d].checked_div(&Padic::from_i64(p, (j + g + 1) as i64, big))?;
                // d(x^j y) = (j x^(j-1) f + x^j f'/2) dx/y
                let mut t = vec![Padic::exact_zero(p); j + f.len()];
                if j > 0 {
                    let jj = Padic::from_i64(p, j as i64, big);
                    for (k, c) in f.iter().enumerate() {
                        t[j - 1 + k] = &t[j - 1 + k] + &(c * &jj);
                    }
                }
                for (k, c) in self.df.iter().enumerate() {
                    t[j + k] = &t[j + k] + &(c * &half);
                }
                a = pp::sub(&a, &pp::scale(&t, &coef));
                a.truncate(d);
                prim.regular[j] = coef;
            }
        }
        a.resize(dim, Padic::exact_zero(p));
        Ok((a, prim, degree))
    }
}

impl Frobenius {
    /// Frobenius matrix correct to `digits` digits where the reduction allows.
    pub fn compute(curve: &LocalCurve, digits: u32) -> Result<Self, ColemanError> {
        let p = curve.p;
        let n = digits as i64;
        // kept terms: k < K carry valuation >= k + 1 before reduction losses
        let mut terms = (n + 2) as usize;
        for _ in 0..4 {
            let top = (p * (2 * terms as u64 + 1)) / 2 + 1;
            terms = (n + 2 + 2 * ilog(p, 2 * top + 1)) as usize;
        }
        let mut extra = 2 * ilog(p, p * (2 * terms as u64 + 1) * (curve.degree() as u64)) + 4;
        let available = curve.f.iter().map(|c| c.abs_precision()).min().unwrap_or(padic::INF);
        for _ in 0..4 {
            let working = n + extra;
            if working > available {
                return Err(ColemanError::Precision { needed: working, have: available });
            }
            let frob = Self::compute_with(curve, terms, working as u32)?;
            let have = frob.matrix.min_abs_precision();
            if have >= n {
                return Ok(frob);
            }
            extra += n - have;
        }
        Err(ColemanError::Precision { needed: n, have: n - extra })
    }

    /// One pass with `terms` binomial terms at working precision `working`.
    pub fn compute_with(curve: &LocalCurve, terms: usize, working: u32) -> Result<Self, ColemanError> {
        let p = curve.p;
        let g = curve.genus;
        let dim = 2 * g + 1;
        let modulus = BigInt::from(p).pow(working);
        let big = working + 8;
        let f = &curve.f;
        let fz: Vec<BigInt> = f.iter().map(|c| c.residue_mod(working as i64)).collect::<Result<_, _>>()?;
        let fz_p: Vec<BigInt> = zpow(&fz, p, &modulus);
        let mut e = fz_p.iter().map(|c| modp(&-c, &modulus)).collect::<Vec<_>>();
        for (i, c) in fz.iter().enumerate() {
            e[p as usize * i] = modp(&(&e[p as usize * i] + c), &modulus);
        }

        // p c_k E^k with c_k = binom(-1/2, k)
        let four = BigInt::from(4);
        let mut central = BigInt::one();
        let mut ek = vec![BigInt::one()];
        let mut series: Vec<Vec<Padic>> = Vec::with_capacity(terms);
        for k in 0..terms {
            if k > 0 {
                let kk = BigInt::from(k);
                central = central * BigInt::from(2 * k) * BigInt::from(2 * k - 1) / (&kk * &kk);
                ek = zmul(&ek, &e, &modulus);
            }
            let sign = if k % 2 == 0 { BigInt::one() } else { -BigInt::one() };
            let ck = Padic::from_rational(p, &(sign * &central * BigInt::from(p)), &four.pow(k as u32), big)?;
            let ck = ck.residue_mod(working as i64)?;
            let coeffs = ek.iter().map(|c| Padic::from_int_mod(p, &modp(&(c * &ck), &modulus), working as i64)).collect();
            series.push(coeffs);
        }

        let reducer = Reducer::new(f, big)?;
        let top_level = (p as usize * (2 * terms - 1) - 1) / 2;
        let mut columns = Vec::with_capacity(dim);
        let mut primitives = Vec::with_capacity(dim);
        let mut max_degree = 0usize;
        for i in 0..dim {
            let shift = p as usize * (i + 1) - 1;
            let mut levels: Vec<Vec<Padic>> = vec![Vec::new(); top_level + 1];
            for (k, term) in series.iter().enumerate() {
                let m = (p as usize * (2 * k + 1) - 1) / 2;
                let mut shifted = vec![Padic::exact_zero(p); shift];
                shifted.extend(term.iter().cloned());
                levels[m] = pp::add(&levels[m], &shifted);
            }
            let (column, prim, degree) = reducer.reduce_levels(levels)?;
            max_degree = max_degree.max(degree);
            columns.push(column);
            primitives.push(prim);
        }

        // omitted terms start at valuation `terms + 1` and lose at most these digits
        let cap = terms as i64 + 1 - ilog(p, 2 * top_level as u64 + 1) - ilog(p, (max_degree + g + 1) as u64);
        let rows = (0..dim).map(|r| (0..dim).map(|c| columns[c][r].with_abs(cap)).collect()).collect();
        let matrix = PadicMatrix::from_rows(rows);
        let loss = working as i64 - matrix.min_abs_precision();
        Ok(Frobenius { prime: p, genus: g, matrix, terms, working_digits: working, loss, primitives, cap })
    }

    /// h_i at an affine point with y a unit.
    pub fn primitive_at(&self, i: usize, x: &Padic, y: &Padic) -> Result<Padic, ColemanError> {
        let prim = &self.primitives[i];
        let yinv = y.checked_inv()?;
        let y2inv = &yinv * &yinv;
        let mut acc = &pp::eval(&prim.regular, x) * y;
        for (m, b) in &prim.polar {
            let power = &yinv * &y2inv.pow((*m - 1) as u64);
            acc = &acc + &(&pp::eval(b, x) * &power);
        }
        Ok(acc.with_abs(self.cap))
    }

    pub fn primitive_vector(&self, x: &Padic, y: &Padic) -> Result<Vec<Padic>, ColemanError> {
        (0..2 * self.genus + 1).map(|i| self.primitive_at(i, x, y)).collect()
    }
}
