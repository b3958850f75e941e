//! Quadratic Chabauty over Q: the coefficients alpha, the functions rho on
//! residue discs, and the search for their zeros.

use coleman::DiscData;
use heights::{global_height_on_generator, IdeleCharacter};
use hyperelliptic::{CurveModel, CurvePoint, IntPoint, PointMap, ResidueDisc};
use padic::{solve_single, Padic, PadicMatrix, PadicPowerSeries, SolverConfig};

use crate::bundle::{Bundle, Generator};
use crate::local::{Divisor, LocalSetup};
use crate::targets::{away_heights, bad_prime_table, target_set, MissingHeights};
use crate::ChabautyError;

#[derive(Clone, Debug)]
pub struct Config {
    /// Working precision N.
    pub precision: u32,
    /// Keep this many terms of each rho series.
    pub truncation: Option<usize>,
    pub search_bound: u64,
    pub prescreen: Vec<u64>,
    /// Use rho(P) built from the integral from iota(P) to P.
    pub no_base_point: bool,
    pub missing_heights: MissingHeights,
    pub solver: SolverConfig,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            precision: 10,
            truncation: None,
            search_bound: 100,
            prescreen: vec![3, 5, 8, 9, 11, 13],
            no_base_point: false,
            missing_heights: MissingHeights::Fail,
            solver: SolverConfig::default(),
        }
    }
}

impl Config {
    /// Defaults overridden by the bundle's own settings.
    pub fn for_bundle(bundle: &Bundle) -> Self {
        let mut c = Config::default();
        if let Some(n) = bundle.precision {
            c.precision = n;
        }
        if let Some(b) = bundle.search_bound {
            c.search_bound = b;
        }
        c
    }
}

/// alpha with the data it was solved from.
#[derive(Clone, Debug)]
pub struct HeightContext {
    pub chi: IdeleCharacter,
    pub alpha: Vec<Padic>,
    /// Row j: integrals of omega_0..omega_(g-1) over generator j.
    pub integrals: PadicMatrix,
    pub heights: Vec<Padic>,
    /// ord_p det N.
    pub det_valuation: i64,
    pub u: Vec<Padic>,
}

impl HeightContext {
    /// sum alpha_i v_i.
    pub fn lambda(&self, v: &[Padic]) -> Padic {
        let p = self.chi.prime;
        self.alpha.iter().zip(v).fold(Padic::exact_zero(p), |acc, (a, x)| &acc + &(a * x))
    }

    /// Coefficients c with rho = sum c_i int omega_i: alpha_i + 2 u_i for
    /// i < g and -2 for i = g.
    pub fn rho_coefficients(&self) -> Vec<Padic> {
        let p = self.chi.prime;
        let mut c: Vec<Padic> = self.alpha.iter().zip(&self.u).map(|(a, u)| a + &(u * &Padic::from_i64(p, 2, 64))).collect();
        c.push(Padic::from_i64(p, -2, 64));
        c
    }

    /// rho applied to a vector of integrals of omega_0..omega_g.
    pub fn rho_of(&self, v: &[Padic]) -> Padic {
        let p = self.chi.prime;
        self.rho_coefficients().iter().zip(v).fold(Padic::exact_zero(p), |acc, (c, x)| &acc + &(c * x))
    }
}

/// Solve sum_i alpha_i int_(a_j) omega_i = h(inf_- - inf_+, a_j).
pub fn solve_alpha(
    chi: &IdeleCharacter,
    u: &[Padic],
    integrals: &[Vec<Padic>],
    heights: &[Padic],
    digits: u32,
) -> Result<HeightContext, ChabautyError> {
    let g = u.len();
    if integrals.len() != g {
        return Err(ChabautyError::RankMismatch { expected: g, got: integrals.len() });
    }
    let n = PadicMatrix::from_rows(integrals.iter().map(|v| v[..g].to_vec()).collect());
    let det = n.det();
    if det.is_zero() {
        return Err(ChabautyError::DependentGenerators);
    }
    let k = det.valuation().unwrap_or(0);
    let alpha = n.solve(heights).map_err(|_| ChabautyError::DependentGenerators)?;
    let alpha = alpha.into_iter().map(|a| a.with_abs(digits as i64 - k)).collect();
    Ok(HeightContext {
        chi: chi.clone(),
        alpha,
        integrals: n,
        heights: heights.to_vec(),
        det_valuation: k,
        u: u.to_vec(),
    })
}

/// Where rho is measured from.
#[derive(Clone, Debug)]
pub enum BaseIntegrals {
    /// Integrals from the reference point to the base point Q.
    Point(Vec<Padic>),
    /// Integrals from the reference point T0 to iota(T0).
    Involution(Vec<Padic>),
}

/// rho on one residue disc: constant + series(t), series(0) = 0, in the
/// disc parameter t in pZ_p.
#[derive(Clone, Debug)]
pub struct RhoSeries {
    pub disc: ResidueDisc,
    pub constant: Padic,
    pub series: PadicPowerSeries,
}

impl RhoSeries {
    /// rho - target as one series.
    pub fn minus(&self, target: &Padic) -> PadicPowerSeries {
        let mut s = self.series.clone();
        let c = &self.constant - target;
        if s.coeffs.is_empty() {
            s.coeffs.push(c);
        } else {
            s.coeffs[0] = c;
        }
        s
    }

    pub fn value_at(&self, t: &Padic) -> Padic {
        &self.constant + &self.series.eval(t)
    }
}

pub fn build_rho_series(
    hctx: &HeightContext,
    data: &DiscData,
    base: &BaseIntegrals,
    truncation: Option<usize>,
) -> RhoSeries {
    let p = hctx.chi.prime;
    let coeffs = hctx.rho_coefficients();
    let mut series: Option<PadicPowerSeries> = None;
    for (c, a) in coeffs.iter().zip(&data.antiderivatives) {
        let term = a.scale(c);
        series = Some(match series {
            None => term,
            Some(s) => s.add(&term),
        });
    }
    let mut series = series.expect("genus at least one");
    let constant = match base {
        BaseIntegrals::Point(q) => {
            let v: Vec<Padic> = data.anchor.iter().zip(q).map(|(a, b)| a - b).collect();
            hctx.rho_of(&v)
        }
        BaseIntegrals::Involution(c) => {
            let two = Padic::from_i64(p, 2, 64);
            series = series.scale(&two);
            let v: Vec<Padic> = data.anchor.iter().zip(c).map(|(a, b)| &(a * &two) - b).collect();
            hctx.rho_of(&v)
        }
    };
    if let Some(m) = truncation {
        series = series.truncate(m);
    }
    if let Some(c0) = series.coeffs.first_mut() {
        *c0 = Padic::exact_zero(p);
    }
    RhoSeries { disc: data.disc.clone(), constant, series }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    KnownIntegralPoint,
    UnexplainedCandidate,
    UncertifiedBox,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::KnownIntegralPoint => "known-integral-point",
            Status::UnexplainedCandidate => "unexplained-padic-candidate",
            Status::UncertifiedBox => "uncertified-box",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Candidate {
    /// Index into the target set T.
    pub target: usize,
    pub parameter: Padic,
    pub point: Option<CurvePoint>,
    pub status: Status,
    /// The known integral point (monic model) this root matches.
    pub matches: Option<IntPoint>,
}

#[derive(Clone, Debug)]
pub struct DiscOutcome {
    pub rho: RhoSeries,
    /// Strassmann bound of rho - t for each t in T.
    pub bounds: Vec<Option<usize>>,
    pub roots: Vec<Candidate>,
}

#[derive(Clone, Debug, Default)]
pub struct Ledger {
    pub digits: u32,
    pub det_valuation: i64,
    pub truncation: usize,
    pub frobenius_loss: i64,
    pub frobenius_working: u32,
}

#[derive(Clone, Debug)]
pub struct Candidates {
    pub prime: u64,
    pub base: Option<IntPoint>,
    pub map: PointMap,
    pub hctx: HeightContext,
    pub targets: Vec<Padic>,
    /// Integral points found by search, on the monic model.
    pub known: Vec<IntPoint>,
    pub discs: Vec<DiscOutcome>,
    /// Known points that are not roots of their disc's rho for any t.
    pub missing_known: Vec<IntPoint>,
    pub warnings: Vec<String>,
    pub ledger: Ledger,
}

impl Candidates {
    pub fn roots(&self) -> impl Iterator<Item = &Candidate> {
        self.discs.iter().flat_map(|d| d.roots.iter())
    }

    pub fn count(&self, status: Status) -> usize {
        self.roots().filter(|c| c.status == status).count()
    }

    /// Known points recovered as certified roots, on the input model.
    pub fn certified_points(&self) -> Vec<IntPoint> {
        let mut out: Vec<IntPoint> = self
            .roots()
            .filter(|c| c.status == Status::KnownIntegralPoint)
            .filter_map(|c| c.matches.as_ref().and_then(|m| self.map.backward(m)))
            .collect();
        out.sort_by_key(|p| format!("{p}"));
        out.dedup();
        out
    }

    /// Every root is a certified known point and every known point was found.
    pub fn determined(&self) -> bool {
        self.missing_known.is_empty() && self.roots().all(|c| c.status == Status::KnownIntegralPoint)
    }
}

/// Everything find_candidates needs, on the monic model.
#[derive(Clone, Debug)]
pub struct Problem {
    pub model: CurveModel,
    pub map: PointMap,
    pub p: u64,
    pub base: Option<IntPoint>,
    pub generators: Vec<Generator>,
    pub known_points: Vec<IntPoint>,
    pub bad_primes: Vec<heights::BadPrimeData>,
}

impl Problem {
    pub fn from_bundle(bundle: &Bundle) -> Result<Self, ChabautyError> {
        let (model, map) = bundle.model.monicize();
        model.validate_at(bundle.p)?;
        Ok(Problem {
            model,
            p: bundle.p,
            base: bundle.base_point.as_ref().map(|q| map.forward(q)),
            generators: bundle.generators.iter().map(|g| g.forward(&map)).collect(),
            known_points: bundle.known_points.iter().map(|q| map.forward(q)).collect(),
            bad_primes: bundle.bad_primes.clone(),
            map,
        })
    }
}

/// The known points: search results plus any listed in the input, without repeats.
pub fn known_points(problem: &Problem, cfg: &Config) -> Vec<IntPoint> {
    let mut known = hyperelliptic::point_search(&problem.model, cfg.search_bound, &cfg.prescreen);
    for q in problem.known_points.iter().chain(&problem.base) {
        if !known.contains(q) {
            known.push(q.clone());
        }
    }
    known
}

/// Global heights h(inf_- - inf_+, a_j) and the integral vectors of the generators.
pub fn generator_data(
    setup: &LocalSetup,
    chi: &IdeleCharacter,
    divisors: &[Divisor],
    away: &[Vec<(heights::PrimeIdeal, num_rational::BigRational)>],
) -> Result<(Vec<Vec<Padic>>, Vec<Padic>), ChabautyError> {
    let mut integrals = Vec::new();
    let mut hs = Vec::new();
    for (div, away) in divisors.iter().zip(away) {
        integrals.push(setup.integrator.divisor_integral(div)?);
        hs.push(global_height_on_generator(&setup.integrator, &setup.cohomology, chi, div, away)?);
    }
    Ok((integrals, hs))
}

/// Whether two parameters agree to the precision of the first.
fn same_parameter(root: &Padic, known: &Padic) -> bool {
    (root - known).is_zero()
}

pub fn find_candidates(problem: &Problem, cfg: &Config) -> Result<Candidates, ChabautyError> {
    let model = &problem.model;
    if model.d() != 0 {
        return Err(ChabautyError::Input("find_candidates works over Q; use the number field pipeline".into()));
    }
    let p = problem.p;
    let digits = cfg.precision;
    let mut warnings = Vec::new();
    let known = known_points(problem, cfg);
    let setup = LocalSetup::new(model, p, 0, digits)?;
    let g = setup.genus();
    let chi = IdeleCharacter::cyclotomic(p, digits);

    let use_base = !cfg.no_base_point && problem.base.is_some();
    if !cfg.no_base_point && problem.base.is_none() {
        warnings.push("no base point given; using the involution variant".into());
    }
    let base_pt = if use_base { problem.base.clone() } else { None };
    let table = bad_prime_table(model, &problem.bad_primes, base_pt.as_ref())?;
    let targets = target_set(&table, &chi)?;

    if problem.generators.len() != g {
        return Err(ChabautyError::RankMismatch { expected: g, got: problem.generators.len() });
    }
    let divisors: Vec<Divisor> = problem.generators.iter().map(|a| setup.embed_divisor(a)).collect::<Result<_, _>>()?;
    let away = problem
        .generators
        .iter()
        .map(|a| away_heights(&table, a, cfg.missing_heights, &mut warnings))
        .collect::<Result<Vec<_>, _>>()?;
    let (integrals, hs) = generator_data(&setup, &chi, &divisors, &away)?;
    let hctx = solve_alpha(&chi, &setup.cohomology.u, &integrals, &hs, digits)?;

    let it = &setup.integrator;
    let base = match &base_pt {
        Some(q) => BaseIntegrals::Point(it.from_reference(&setup.embed_point(q)?)?),
        None => BaseIntegrals::Involution(it.integral(&it.reference, &it.reference.involution())?),
    };

    let embedded: Vec<(IntPoint, CurvePoint)> =
        known.iter().map(|q| Ok((q.clone(), setup.embed_point(q)?))).collect::<Result<_, ChabautyError>>()?;

    let mut datas: Vec<&DiscData> = it.discs().collect();
    datas.sort_by_key(|d| d.disc.reduction());
    let mut discs = Vec::new();
    let mut found: Vec<IntPoint> = Vec::new();
    let mut nonzero = false;
    for data in datas {
        let rho = build_rho_series(&hctx, data, &base, cfg.truncation);
        nonzero |= rho.series.coeffs.iter().any(|c| !c.is_zero());
        let in_disc: Vec<(&IntPoint, Padic)> = embedded
            .iter()
            .filter(|(_, e)| it.disc_of(e).is_ok_and(|d| d.disc.same_disc(&data.disc)))
            .map(|(q, e)| Ok((q, setup.curve.parameter(&data.disc, e)?)))
            .collect::<Result<_, ChabautyError>>()?;
        let mut bounds = Vec::new();
        let mut roots = Vec::new();
        for (ti, t) in targets.iter().enumerate() {
            let f = rho.minus(t);
            bounds.push(padic::strassmann_bound(&f).ok());
            let report = solve_single(&f, &cfg.solver);
            for r in report.roots {
                let z = r.coords[0].clone();
                let matches = in_disc.iter().find(|(_, tq)| same_parameter(&z, tq)).map(|(q, _)| (*q).clone());
                let status = match (&matches, r.certified) {
                    (_, false) => Status::UncertifiedBox,
                    (Some(_), true) => Status::KnownIntegralPoint,
                    (None, true) => Status::UnexplainedCandidate,
                };
                if let Some(q) = &matches {
                    found.push(q.clone());
                }
                let point = if r.certified { setup.curve.point_at(&data.disc, &z).ok() } else { None };
                roots.push(Candidate { target: ti, parameter: z, point, status, matches });
            }
        }
        discs.push(DiscOutcome { rho, bounds, roots });
    }
    if !nonzero {
        return Err(ChabautyError::Degenerate);
    }
    let missing_known: Vec<IntPoint> = known.iter().filter(|q| !found.contains(q)).cloned().collect();
    if !missing_known.is_empty() {
        warnings.push(format!("{} known points are not roots of rho", missing_known.len()));
    }
    let truncation = discs.iter().map(|d| d.rho.series.order()).max().unwrap_or(0);
    let ledger = Ledger {
        digits,
        det_valuation: hctx.det_valuation,
        truncation,
        frobenius_loss: setup.frobenius_loss,
        frobenius_working: setup.frobenius_working,
    };
    Ok(Candidates {
        prime: p,
        base: base_pt,
        map: problem.map.clone(),
        hctx,
        targets,
        known,
        discs,
        missing_known,
        warnings,
        ledger,
    })
}

