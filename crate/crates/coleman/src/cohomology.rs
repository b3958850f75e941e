//! The unit-root subspace and the normalization of the third-kind form.
//!
//! Coordinates are with respect to x^i dx/y, i = 0..2g.  H^1 of the complete
//! curve is the kernel of the residue at infinity minus.

use padic::{Padic, PadicMatrix};

use crate::frobenius::Frobenius;
use crate::ColemanError;
use hyperelliptic::LocalCurve;

#[derive(Clone, Debug)]
pub struct Cohomology {
    pub genus: usize,
    /// Residue at infinity minus of x^i dx/y.
    pub residues: Vec<Padic>,
    /// Frobenius eigenvector for the eigenvalue p, normalized to residue 1.
    pub eigenvector: Vec<Padic>,
    /// Class of x^g dx/y in H^1.
    pub psi: Vec<Padic>,
    /// g vectors spanning the unit-root subspace.
    pub unit_root: Vec<Vec<Padic>>,
    pub u: Vec<Padic>,
    /// Characteristic polynomial of Frobenius on H^1, constant term first.
    pub charpoly: Vec<Padic>,
    /// Valuation of the determinant of [holomorphic | unit root | eigenvector].
    pub complement_valuation: i64,
    /// 1/s(t) at infinity, s^2 = t^(2g+2) f(1/t).
    pub infinity: Vec<Padic>,
    assembled: PadicMatrix,
}

/// A class split as holomorphic part + unit-root part + eigenvector part.
#[derive(Clone, Debug)]
pub struct Splitting {
    pub holomorphic: Vec<Padic>,
    pub unit_root: Vec<Padic>,
    pub eigen: Padic,
}

/// Coefficients of 1/s(t) up to t^n, where s^2 = t^(2g+2) f(1/t) and s(0) = 1.
fn inverse_sqrt_reversed(f: &[Padic], n: usize) -> Result<Vec<Padic>, ColemanError> {
    let p = f[0].prime();
    let rev: Vec<Padic> = f.iter().rev().cloned().collect();
    let coeff = |k: usize| rev.get(k).cloned().unwrap_or_else(|| Padic::exact_zero(p));
    let two = Padic::from_i64(p, 2, 64);
    let mut s = vec![Padic::one(p, 64)];
    for k in 1..=n {
        let mut acc = coeff(k);
        for i in 1..k {
            acc = &acc - &(&s[i] * &s[k - i]);
        }
        s.push(acc.checked_div(&two)?);
    }
    let mut z = vec![Padic::one(p, 64)];
    for k in 1..=n {
        let mut acc = Padic::exact_zero(p);
        for i in 1..=k {
            acc = &acc + &(&s[i] * &z[k - i]);
        }
        z.push(-acc);
    }
    Ok(z)
}

fn dot(a: &[Padic], b: &[Padic]) -> Padic {
    let p = a[0].prime();
    a.iter().zip(b).fold(Padic::exact_zero(p), |acc, (x, y)| &acc + &(x * y))
}

impl Cohomology {
    pub fn new(curve: &LocalCurve, frob: &Frobenius, digits: u32) -> Result<Self, ColemanError> {
        let g = curve.genus;
        let dim = 2 * g + 1;
        let p = curve.p;
        let phi = &frob.matrix;

        let inv = inverse_sqrt_reversed(&curve.f, 2 * g + 2)?;
        let residues: Vec<Padic> = (0..dim).map(|i| if i < g { Padic::exact_zero(p) } else { inv[i - g].clone() }).collect();

        // Frobenius on H^1 in the basis e_j - r_j e_g, j != g
        let others: Vec<usize> = (0..dim).filter(|&j| j != g).collect();
        let rows = others
            .iter()
            .map(|&a| {
                others
                    .iter()
                    .map(|&b| &phi.data[a][b] - &(&residues[b] * &phi.data[a][g]))
                    .collect()
            })
            .collect();
        let charpoly = PadicMatrix::from_rows(rows).charpoly();
        if charpoly[g].valuation() != Some(0) {
            return Err(ColemanError::NotOrdinary(p));
        }

        let mut shifted = phi.clone();
        for i in 0..dim {
            shifted.data[i][i] = &shifted.data[i][i] - &Padic::from_i64(p, p as i64, 64);
        }
        let kernel = shifted.kernel(dim - 1)?;
        let w = kernel.into_iter().next().ok_or(ColemanError::Padic(padic::PadicError::Singular(0)))?;
        let rw_inv = dot(&residues, &w).checked_inv()?;
        let eigenvector: Vec<Padic> = w.iter().map(|c| c * &rw_inv).collect();
        let mut psi: Vec<Padic> = eigenvector.iter().map(|c| -c).collect();
        psi[g] = &psi[g] + &Padic::one(p, 64);

        // Phi^(2^k) kills everything but the unit roots modulo p^(2^k)
        let mut power = phi.clone();
        let mut e = 1i64;
        while e < digits as i64 + 2 {
            power = power.mul(&power);
            e *= 2;
        }
        let cols = power.pivot_columns(g)?;
        let unit_root: Vec<Vec<Padic>> = cols.iter().map(|&c| power.column(c)).collect();

        // psi = sum_{i<g} u_i e_i + sum_j c_j W_j + d w with d = 0
        let mut rows = vec![Vec::with_capacity(dim); dim];
        for (r, row) in rows.iter_mut().enumerate() {
            for i in 0..g {
                row.push(if r == i { Padic::one(p, 64) } else { Padic::exact_zero(p) });
            }
            for v in &unit_root {
                row.push(v[r].clone());
            }
            row.push(eigenvector[r].clone());
        }
        let assembled = PadicMatrix::from_rows(rows);
        let complement_valuation = assembled.det().val_lower();
        let mut coh = Cohomology {
            genus: g,
            residues,
            eigenvector,
            psi: psi.clone(),
            unit_root,
            u: Vec::new(),
            charpoly,
            complement_valuation,
            infinity: inv,
            assembled,
        };
        let split = coh.split(&psi)?;
        if !split.eigen.is_zero() {
            return Err(ColemanError::Padic(padic::PadicError::Inconsistent(split.eigen.val_lower())));
        }
        coh.u = split.holomorphic;
        Ok(coh)
    }

    /// Coordinates of v against e_0..e_(g-1), the unit-root vectors and the eigenvector.
    pub fn split(&self, v: &[Padic]) -> Result<Splitting, ColemanError> {
        let g = self.genus;
        let sol = self.assembled.solve(v)?;
        Ok(Splitting { holomorphic: sol[..g].to_vec(), unit_root: sol[g..2 * g].to_vec(), eigen: sol[2 * g].clone() })
    }

    /// The residue-free classes e_j - r_j e_g, j != g, as vectors.
    pub fn h1_basis(&self) -> Vec<Vec<Padic>> {
        let g = self.genus;
        let p = self.residues[0].prime();
        (0..=2 * g)
            .filter(|&j| j != g)
            .map(|j| {
                let mut v = vec![Padic::exact_zero(p); 2 * g + 1];
                v[j] = Padic::one(p, 64);
                v[g] = -&self.residues[j];
                v
            })
            .collect()
    }

    /// x^i dx/y at infinity plus is -t^(g-1-i) z(t) dt; the class vector as a
    /// Laurent series, returned with the exponent of its first entry.
    fn at_infinity(&self, v: &[Padic], top: i64) -> (i64, Vec<Padic>) {
        let g = self.genus as i64;
        let p = self.residues[0].prime();
        let low = -g - 1;
        let mut out = vec![Padic::exact_zero(p); (top - low + 1) as usize];
        for (i, c) in v.iter().enumerate() {
            if c.is_exact_zero() {
                continue;
            }
            let start = g - 1 - i as i64;
            for (k, z) in self.infinity.iter().enumerate() {
                let e = start + k as i64;
                if e > top {
                    break;
                }
                let idx = (e - low) as usize;
                out[idx] = &out[idx] - &(c * z);
            }
        }
        (low, out)
    }

    /// Cup product of two residue-free classes: the sum over both points at
    /// infinity of Res(b * integral of a).
    pub fn cup(&self, a: &[Padic], b: &[Padic]) -> Result<Padic, ColemanError> {
        let g = self.genus as i64;
        let p = self.residues[0].prime();
        let (low, sa) = self.at_infinity(a, g + 1);
        let (_, sb) = self.at_infinity(b, g + 1);
        let mut acc = Padic::exact_zero(p);
        for (ia, ca) in sa.iter().enumerate() {
            let e = low + ia as i64;
            if e == -1 || ca.is_exact_zero() {
                continue;
            }
            // integral term t^(e+1)/(e+1) meets t^(-2-e) in b
            let want = -2 - e;
            if want < low || want > g + 1 {
                continue;
            }
            let term = ca.checked_div(&Padic::from_i64(p, e + 1, 64))?;
            acc = &acc + &(&term * &sb[(want - low) as usize]);
        }
        // both points at infinity contribute equally
        Ok(&acc * &Padic::from_i64(p, 2, 64))
    }

    /// Residue of a class vector at infinity minus.
    pub fn residue(&self, v: &[Padic]) -> Padic {
        dot(&self.residues, v)
    }
}
