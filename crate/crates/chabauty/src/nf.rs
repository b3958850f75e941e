//! Quadratic Chabauty over a real quadratic field K in which p splits.
//!
//! Both embeddings of K into Q_p give a curve over Q_p.  A point of U(O_K)
//! becomes a pair of points, one on each, and lies in a residue polydisc: a
//! pair of affine residue discs.  On each polydisc the relation among the
//! integrals of the generators and the height identity give a separated
//! system in the two disc parameters.

use coleman::DiscData;
use heights::{global_height_on_generator, infinity_height, IdeleCharacter};
use hyperelliptic::{CurvePoint, IntPoint};
use padic::{solve_separated, Padic, PadicMatrix, PadicPowerSeries, SeparatedSystem};

use crate::engine::{known_points, Config, Ledger, Problem, Status};
use crate::local::{Divisor, LocalSetup};
use crate::targets::{away_heights, bad_prime_table, target_set};
use crate::ChabautyError;

/// Unit rank of a real quadratic field.
pub const UNIT_RANK: usize = 1;

#[derive(Clone, Debug)]
pub struct NfContext {
    pub setups: Vec<LocalSetup>,
    /// Row i g + j, column s: the integral of omega_j over sigma_i(a_s).
    pub ell: PadicMatrix,
    /// Left kernel of `ell`.
    pub beta: Vec<Vec<Padic>>,
    /// A solution of sum alpha_(i g + j) ell_(i g + j, s) = h(a_s).
    pub alpha: Vec<Padic>,
    pub heights: Vec<Padic>,
    pub chi: IdeleCharacter,
}

impl NfContext {
    pub fn genus(&self) -> usize {
        self.setups[0].genus()
    }

    /// Coefficients on omega_0..omega_g at embedding i of the height function.
    fn height_coefficients(&self, i: usize) -> Vec<Padic> {
        let g = self.genus();
        let p = self.chi.prime;
        let u = &self.setups[i].cohomology.u;
        let mut c: Vec<Padic> = (0..g).map(|j| &self.alpha[i * g + j] + &(&u[j] * &Padic::from_i64(p, 2, 64))).collect();
        c.push(Padic::from_i64(p, -2, 64));
        c
    }

    /// Coefficients at embedding i of the relation function `k`.
    fn relation_coefficients(&self, k: usize, i: usize) -> Vec<Padic> {
        let g = self.genus();
        self.beta[k][i * g..(i + 1) * g].to_vec()
    }

    /// The relation function at a pair of integral vectors (one per embedding).
    pub fn relation_at(&self, k: usize, v: &[Vec<Padic>]) -> Padic {
        let p = self.chi.prime;
        let mut acc = Padic::exact_zero(p);
        for (i, vi) in v.iter().enumerate() {
            for (c, x) in self.relation_coefficients(k, i).iter().zip(vi) {
                acc = &acc + &(c * x);
            }
        }
        acc
    }

    /// The height function at a pair of integral vectors.
    pub fn height_function_at(&self, v: &[Vec<Padic>]) -> Padic {
        let p = self.chi.prime;
        let mut acc = Padic::exact_zero(p);
        for (i, vi) in v.iter().enumerate() {
            for (c, x) in self.height_coefficients(i).iter().zip(vi) {
                acc = &acc + &(c * x);
            }
        }
        acc
    }
}

/// Basis of the left kernel of `ell` ((dg) x r).  Fails unless `ell` has
/// full column rank r and r <= dg - r_K.
pub fn nf_relations(ell: &PadicMatrix, unit_rank: usize) -> Result<Vec<Vec<Padic>>, ChabautyError> {
    let dg = ell.data.len();
    let r = ell.data.first().map_or(0, |row| row.len());
    if r + unit_rank > dg {
        return Err(ChabautyError::RankMismatch { expected: dg - unit_rank, got: r });
    }
    let t = ell.transpose();
    if let Err(padic::PadicError::Singular(rank)) = t.pivot_columns(r) {
        return Err(ChabautyError::Condition4 { rank: rank as usize, needed: r });
    }
    Ok(t.kernel(r)?)
}

/// One particular solution of the underdetermined system ell^T alpha = h.
fn particular_solution(ell: &PadicMatrix, h: &[Padic]) -> Result<Vec<Padic>, ChabautyError> {
    let t = ell.transpose();
    let r = h.len();
    let cols = t.pivot_columns(r)?;
    let square = PadicMatrix::from_rows(t.data.iter().map(|row| cols.iter().map(|&c| row[c].clone()).collect()).collect());
    let sol = square.solve(h)?;
    let p = ell.prime();
    let mut alpha = vec![Padic::exact_zero(p); t.data[0].len()];
    for (c, v) in cols.into_iter().zip(sol) {
        alpha[c] = v;
    }
    Ok(alpha)
}

#[derive(Clone, Debug)]
pub struct PolyRoot {
    pub target: usize,
    pub coords: Vec<Padic>,
    pub status: Status,
    pub matches: Option<IntPoint>,
    /// Every function of the system vanishes at the root to its precision.
    pub back_substitutes: bool,
}

#[derive(Clone, Debug)]
pub struct Polydisc {
    pub residues: Vec<(u64, u64)>,
    /// Whether the linear part of the system is invertible mod p.
    pub jacobian_unit: Option<bool>,
    pub roots: Vec<PolyRoot>,
}

#[derive(Clone, Debug)]
pub struct NfCandidates {
    pub prime: u64,
    pub base: IntPoint,
    pub context: NfContext,
    pub targets: Vec<Padic>,
    pub known: Vec<IntPoint>,
    pub polydiscs: Vec<Polydisc>,
    pub missing_known: Vec<IntPoint>,
    /// Known points at which some relation function does not vanish.
    pub relation_failures: Vec<IntPoint>,
    pub warnings: Vec<String>,
    pub ledger: Ledger,
}

impl NfCandidates {
    pub fn roots(&self) -> impl Iterator<Item = &PolyRoot> {
        self.polydiscs.iter().flat_map(|d| d.roots.iter())
    }

    pub fn count(&self, status: Status) -> usize {
        self.roots().filter(|r| r.status == status).count()
    }

    /// Certified common zeros that are not known points.
    pub fn extra(&self) -> usize {
        self.count(Status::UnexplainedCandidate)
    }

    pub fn recovered(&self) -> Vec<IntPoint> {
        let mut out: Vec<IntPoint> = self
            .roots()
            .filter(|r| r.status == Status::KnownIntegralPoint)
            .filter_map(|r| r.matches.clone())
            .collect();
        out.sort_by_key(|p| format!("{p}"));
        out.dedup();
        out
    }
}

/// The separated block sum_j c_j A_j in one disc.
fn block(coeffs: &[Padic], data: &DiscData) -> PadicPowerSeries {
    let mut acc: Option<PadicPowerSeries> = None;
    for (c, a) in coeffs.iter().zip(&data.antiderivatives) {
        let term = a.scale(c);
        acc = Some(match acc {
            None => term,
            Some(s) => s.add(&term),
        });
    }
    let mut s = acc.expect("at least one form");
    if let Some(c0) = s.coeffs.first_mut() {
        *c0 = Padic::exact_zero(c0.prime());
    }
    s
}

fn dot(c: &[Padic], v: &[Padic]) -> Padic {
    let p = c[0].prime();
    c.iter().zip(v).fold(Padic::exact_zero(p), |acc, (a, b)| &acc + &(a * b))
}

pub fn nf_find_candidates(problem: &Problem, cfg: &Config) -> Result<NfCandidates, ChabautyError> {
    let model = &problem.model;
    let d = model.field.degree();
    if d != 2 {
        return Err(ChabautyError::Input("the number field pipeline needs a real quadratic base field".into()));
    }
    let base = problem.base.clone().ok_or_else(|| ChabautyError::Input("the number field pipeline needs a base point".into()))?;
    let p = problem.p;
    let digits = cfg.precision;
    let mut warnings = Vec::new();
    if model.defined_over_q() {
        warnings.push(
            "the curve is defined over Q; lambda vanishes on the Jacobian over Q and the method cannot cut out the points".into(),
        );
    }
    let setups: Vec<LocalSetup> = (0..d).map(|i| LocalSetup::new(model, p, i, digits)).collect::<Result<_, _>>()?;
    let g = setups[0].genus();
    let chi = IdeleCharacter::split_real_quadratic(p, digits);
    let known = known_points(problem, cfg);

    let table = bad_prime_table(model, &problem.bad_primes, Some(&base))?;
    let targets = target_set(&table, &chi)?;

    let r = problem.generators.len();
    let mut ell_rows = vec![Vec::with_capacity(r); d * g];
    let mut heights = Vec::with_capacity(r);
    for gen in &problem.generators {
        let away = away_heights(&table, gen, cfg.missing_heights, &mut warnings)?;
        let mut h: Option<Padic> = None;
        for (i, s) in setups.iter().enumerate() {
            let div: Divisor = s.embed_divisor(gen)?;
            let v = s.integrator.divisor_integral(&div)?;
            for j in 0..g {
                ell_rows[i * g + j].push(v[j].clone());
            }
            // the places above p each contribute their local height; the
            // terms away from p are added once
            let local = if i == 0 {
                global_height_on_generator(&s.integrator, &s.cohomology, &chi, &div, &away)?
            } else {
                infinity_height(&s.integrator, &s.cohomology, &div)?
            };
            h = Some(match h {
                None => local,
                Some(acc) => &acc + &local,
            });
        }
        heights.push(h.expect("two embeddings"));
    }
    let ell = PadicMatrix::from_rows(ell_rows);
    let beta = nf_relations(&ell, UNIT_RANK)?;
    let alpha = particular_solution(&ell, &heights)?;
    let context = NfContext { setups, ell, beta, alpha, heights, chi };

    let sigma_base: Vec<CurvePoint> =
        context.setups.iter().map(|s| s.embed_point(&base)).collect::<Result<_, _>>()?;
    let base_ints: Vec<Vec<Padic>> = context
        .setups
        .iter()
        .zip(&sigma_base)
        .map(|(s, q)| s.integrator.from_reference(q))
        .collect::<Result<_, _>>()?;

    // known points, embedded, with their integrals from the base point
    let mut relation_failures = Vec::new();
    let mut embedded_known: Vec<(IntPoint, Vec<CurvePoint>)> = Vec::new();
    for pt in &known {
        let sig: Vec<CurvePoint> = context.setups.iter().map(|s| s.embed_point(pt)).collect::<Result<_, _>>()?;
        let ints: Vec<Vec<Padic>> = context
            .setups
            .iter()
            .zip(sigma_base.iter().zip(&sig))
            .map(|(s, (q, x))| s.integrator.integral(q, x))
            .collect::<Result<_, _>>()?;
        if (0..context.beta.len()).any(|k| !context.relation_at(k, &ints).is_zero()) {
            relation_failures.push(pt.clone());
        }
        embedded_known.push((pt.clone(), sig));
    }

    let lists: Vec<Vec<&DiscData>> = context
        .setups
        .iter()
        .map(|s| {
            let mut v: Vec<&DiscData> = s.integrator.discs().collect();
            v.sort_by_key(|dd| dd.disc.reduction());
            v
        })
        .collect();
    let mut polydiscs = Vec::new();
    let mut found: Vec<IntPoint> = Vec::new();
    for d0 in &lists[0] {
        for d1 in &lists[1] {
            let pair = [*d0, *d1];
            let anchors: Vec<Vec<Padic>> =
                pair.iter().zip(&base_ints).map(|(dd, q)| dd.anchor.iter().zip(q).map(|(a, b)| a - b).collect()).collect();
            let rel = |i: usize| context.relation_coefficients(0, i);
            let ht = |i: usize| context.height_coefficients(i);
            let c_rel = (0..d).fold(Padic::exact_zero(p), |acc, i| &acc + &dot(&rel(i), &anchors[i]));
            let c_ht = (0..d).fold(Padic::exact_zero(p), |acc, i| &acc + &dot(&ht(i), &anchors[i]));
            let blocks = vec![
                (0..d).map(|i| block(&rel(i), pair[i])).collect::<Vec<_>>(),
                (0..d).map(|i| block(&ht(i), pair[i])).collect::<Vec<_>>(),
            ];
            let params: Vec<(IntPoint, Vec<Padic>)> = embedded_known
                .iter()
                .filter(|(_, sig)| {
                    sig.iter().zip(&pair).zip(&context.setups).all(|((x, dd), s)| {
                        s.integrator.disc_of(x).is_ok_and(|e| e.disc.same_disc(&dd.disc))
                    })
                })
                .map(|(pt, sig)| {
                    let ts = sig
                        .iter()
                        .zip(&pair)
                        .zip(&context.setups)
                        .map(|((x, dd), s)| s.curve.parameter(&dd.disc, x))
                        .collect::<Result<Vec<_>, _>>()?;
                    Ok((pt.clone(), ts))
                })
                .collect::<Result<_, ChabautyError>>()?;
            let mut roots = Vec::new();
            let mut jacobian_unit = None;
            for (ti, t) in targets.iter().enumerate() {
                let sys = SeparatedSystem { constants: vec![c_rel.clone(), &c_ht - t], blocks: blocks.clone() };
                let report = solve_separated(&sys, &cfg.solver)?;
                jacobian_unit = jacobian_unit.or(report.jacobian_unit);
                for root in report.roots {
                    let matches = params
                        .iter()
                        .find(|(_, ts)| ts.iter().zip(&root.coords).all(|(a, b)| (a - b).is_zero()))
                        .map(|(pt, _)| pt.clone());
                    let back_substitutes = !root.certified || sys.eval(&root.coords).iter().all(|v| v.is_zero());
                    let status = match (&matches, root.certified) {
                        (_, false) => Status::UncertifiedBox,
                        (Some(_), true) => Status::KnownIntegralPoint,
                        (None, true) => Status::UnexplainedCandidate,
                    };
                    if let Some(pt) = &matches {
                        found.push(pt.clone());
                    }
                    roots.push(PolyRoot { target: ti, coords: root.coords, status, matches, back_substitutes });
                }
            }
            polydiscs.push(Polydisc { residues: vec![d0.disc.reduction(), d1.disc.reduction()], jacobian_unit, roots });
        }
    }
    let missing_known: Vec<IntPoint> = known.iter().filter(|q| !found.contains(q)).cloned().collect();
    if !missing_known.is_empty() {
        warnings.push(format!("{} known points are not common zeros", missing_known.len()));
    }
    let truncation = lists.iter().flatten().flat_map(|dd| dd.antiderivatives.iter().map(|a| a.order())).max().unwrap_or(0);
    let ledger = Ledger {
        digits,
        det_valuation: 0,
        truncation,
        frobenius_loss: context.setups.iter().map(|s| s.frobenius_loss).max().unwrap_or(0),
        frobenius_working: context.setups.iter().map(|s| s.frobenius_working).max().unwrap_or(0),
    };
    Ok(NfCandidates {
        prime: p,
        base,
        context,
        targets,
        known,
        polydiscs,
        missing_known,
        relation_failures,
        warnings,
        ledger,
    })
}
