//! linqc: integral points on y^2 = f(x) with deg f even and square leading
//! coefficient.
//!
//! Exit codes: 0 success, 2 input error, 3 precision failure, 4 hypothesis
//! failure, 5 crosscheck disagreement.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use chabauty::bundle::parse_coefficients;
use chabauty::report::{self, padic, padics, point, points};
use chabauty::targets::{away_heights, bad_prime_table, target_set};
use chabauty::{
    find_candidates, nf_find_candidates, Bundle, ChabautyError, Config, ErrorClass, LocalSetup, MissingHeights, Problem,
    Status,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use heights::{global_height_on_generator, infinity_height, BadPrimeData, IdeleCharacter};
use num_bigint::BigInt;
use num_traits::Zero;
use runge::{runge_points, RungeError};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "linqc", version, about = "Integral points on even-degree hyperelliptic curves")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Quadratic Chabauty over Q.
    Qc(Opts),
    /// Quadratic Chabauty over a real quadratic field in which p splits.
    #[command(name = "qc-nf")]
    QcNf(Opts),
    /// Runge's method (square or negative leading coefficient).
    Runge(Opts),
    /// Frobenius matrix, characteristic polynomial and unit-root data at p.
    Frobenius(Opts),
    /// Integrals and global p-adic heights of the generators, and the set T.
    Heights(Opts),
    /// Runge's method and quadratic Chabauty on the same curve; diff the points.
    Crosscheck(Opts),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Missing {
    Fail,
    Zero,
}

#[derive(Args, Clone, Debug)]
struct Opts {
    /// Curve bundle (JSON).
    #[arg(long)]
    curve: PathBuf,
    /// Working precision N in p-adic digits [default: bundle value, else 10].
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    precision: Option<u32>,
    /// Keep this many terms of each rho series.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    truncation: Option<u64>,
    /// Search for integral points with |x| up to B [default: bundle value, else 100].
    #[arg(long)]
    search_bound: Option<u64>,
    /// Bad-prime data (JSON object or array); replaces the bundle's.
    #[arg(long)]
    bad_primes: Option<PathBuf>,
    /// Generators (JSON array); replace the bundle's.
    #[arg(long)]
    generators: Option<PathBuf>,
    /// Write the JSON report here.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Measure rho from iota(P) instead of from the base point.
    #[arg(long)]
    no_base_point: bool,
    /// Moduli used to prescreen the point search [default: 3,5,8,9,11,13].
    #[arg(long, value_delimiter = ',', value_parser = clap::value_parser!(u64).range(2..))]
    prescreen_primes: Option<Vec<u64>>,
    /// What to do when a generator's height at a bad prime is not supplied.
    #[arg(long, value_enum, default_value = "fail")]
    missing_heights: Missing,
}

enum Failure {
    Chabauty(ChabautyError),
    Runge(RungeError),
}

impl From<ChabautyError> for Failure {
    fn from(e: ChabautyError) -> Self {
        Failure::Chabauty(e)
    }
}

impl From<RungeError> for Failure {
    fn from(e: RungeError) -> Self {
        Failure::Runge(e)
    }
}

impl Failure {
    fn class(&self) -> ErrorClass {
        match self {
            Failure::Chabauty(e) => e.class(),
            Failure::Runge(RungeError::NonSquareLeading(_)) => ErrorClass::Hypothesis,
            Failure::Runge(RungeError::BoundTooLarge(_)) => ErrorClass::Precision,
            Failure::Runge(_) => ErrorClass::Input,
        }
    }

    fn kind(&self) -> String {
        match self {
            Failure::Chabauty(e) => e.kind(),
            Failure::Runge(e) => format!("Runge::{}", format!("{e:?}").split('(').next().unwrap_or_default()),
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Chabauty(e) => e.to_string(),
            Failure::Runge(e) => e.to_string(),
        }
    }
}

fn exit_code(class: ErrorClass) -> u8 {
    match class {
        ErrorClass::Input => 2,
        ErrorClass::Precision => 3,
        ErrorClass::Hypothesis => 4,
    }
}

/// What a subcommand produced.
struct Outcome {
    result: Value,
    warnings: Vec<String>,
    summary: String,
    /// Set by crosscheck when the two methods disagree.
    disagreement: bool,
}

fn read(path: &Path) -> Result<String, ChabautyError> {
    std::fs::read_to_string(path).map_err(|e| ChabautyError::Input(format!("{}: {e}", path.display())))
}

fn load(opts: &Opts) -> Result<(Bundle, Config), ChabautyError> {
    let mut bundle = Bundle::parse(&read(&opts.curve)?)?;
    if let Some(path) = &opts.generators {
        bundle.generators = bundle.parse_generators(&read(path)?)?;
    }
    if let Some(path) = &opts.bad_primes {
        bundle.bad_primes = BadPrimeData::parse_many(&read(path)?)?;
    }
    let mut cfg = Config::for_bundle(&bundle);
    if let Some(n) = opts.precision {
        cfg.precision = n;
    }
    cfg.truncation = opts.truncation.map(|m| m as usize);
    if let Some(b) = opts.search_bound {
        cfg.search_bound = b;
    }
    if let Some(ps) = &opts.prescreen_primes {
        cfg.prescreen = ps.clone();
    }
    cfg.no_base_point = opts.no_base_point;
    cfg.missing_heights = match opts.missing_heights {
        Missing::Fail => MissingHeights::Fail,
        Missing::Zero => MissingHeights::Zero,
    };
    Ok((bundle, cfg))
}

fn input_json(opts: &Opts, cfg: Option<&Config>) -> Value {
    json!({
        "curve": opts.curve.display().to_string(),
        "generators": opts.generators.as_ref().map(|p| p.display().to_string()),
        "bad_primes": opts.bad_primes.as_ref().map(|p| p.display().to_string()),
        "precision": cfg.map(|c| c.precision),
        "truncation": cfg.and_then(|c| c.truncation),
        "search_bound": cfg.map(|c| c.search_bound),
        "prescreen_primes": cfg.map(|c| c.prescreen.clone()),
        "no_base_point": opts.no_base_point,
        "missing_heights": format!("{:?}", opts.missing_heights).to_lowercase(),
    })
}

fn integer_coefficients(f: &[hyperelliptic::QuadElem]) -> Result<Vec<BigInt>, ChabautyError> {
    f.iter()
        .map(|c| {
            if !c.b.is_zero() || !c.a.is_integer() {
                Err(ChabautyError::Input("Runge's method needs integer coefficients over Q".into()))
            } else {
                Ok(c.a.to_integer())
            }
        })
        .collect()
}

fn pairs(pts: &[(BigInt, BigInt)]) -> Value {
    Value::Array(pts.iter().map(|(x, y)| json!([x.to_string(), y.to_string()])).collect())
}

fn list(pts: &[String]) -> String {
    if pts.is_empty() {
        "none".into()
    } else {
        pts.join(" ")
    }
}

fn qc(opts: &Opts) -> Result<Outcome, Failure> {
    let (bundle, cfg) = load(opts)?;
    let c = find_candidates(&Problem::from_bundle(&bundle)?, &cfg)?;
    let certified: Vec<String> = c.certified_points().iter().map(|p| p.to_string()).collect();
    let mut summary = format!(
        "p = {}, N = {}, T has {} element(s), {} disc(s)\n",
        c.prime,
        c.ledger.digits,
        c.targets.len(),
        c.discs.len()
    );
    for (i, a) in c.hctx.alpha.iter().enumerate() {
        summary += &format!("alpha_{i} = {a}\n");
    }
    summary += &format!(
        "certified integral points ({}): {}\nunexplained candidates: {}, uncertified boxes: {}\n",
        certified.len(),
        list(&certified),
        c.count(Status::UnexplainedCandidate),
        c.count(Status::UncertifiedBox)
    );
    summary += if c.determined() { "the integral points are determined\n" } else { "the integral points are NOT determined\n" };
    Ok(Outcome { result: report::candidates(&c), warnings: c.warnings.clone(), summary, disagreement: false })
}

fn qc_nf(opts: &Opts) -> Result<Outcome, Failure> {
    let (bundle, cfg) = load(opts)?;
    let c = nf_find_candidates(&Problem::from_bundle(&bundle)?, &cfg)?;
    let recovered: Vec<String> = c.recovered().iter().map(|p| p.to_string()).collect();
    let summary = format!(
        "p = {}, N = {}, {} relation(s), {} polydisc(s)\nrecovered points ({}): {}\nextra common zeros: {}, uncertified boxes: {}\n",
        c.prime,
        c.ledger.digits,
        c.context.beta.len(),
        c.polydiscs.len(),
        recovered.len(),
        list(&recovered),
        c.extra(),
        c.count(Status::UncertifiedBox)
    );
    Ok(Outcome { result: report::nf_candidates(&c), warnings: c.warnings.clone(), summary, disagreement: false })
}

fn runge_cmd(opts: &Opts) -> Result<Outcome, Failure> {
    let (field, f) = parse_coefficients(&read(&opts.curve)?)?;
    if field.d() != 0 {
        return Err(ChabautyError::Input("Runge's method works over Q".into()).into());
    }
    let f = integer_coefficients(&f)?;
    let r = runge_points(&f)?;
    let shown: Vec<String> = r.points.iter().map(|(x, y)| format!("({x}, {y})")).collect();
    let summary = format!("bound |x| <= {}\nintegral points ({}): {}\n", r.bound, shown.len(), list(&shown));
    let result = json!({
        "points": pairs(&r.points),
        "bound": r.bound.to_string(),
        "h_roots": r.h_roots.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
        "g": r.decomposition.as_ref().map(|d| d.g.iter().map(|c| c.to_string()).collect::<Vec<_>>()),
        "h": r.decomposition.as_ref().map(|d| d.h.iter().map(|c| c.to_string()).collect::<Vec<_>>()),
    });
    Ok(Outcome { result, warnings: Vec::new(), summary, disagreement: false })
}

fn frobenius(opts: &Opts) -> Result<Outcome, Failure> {
    let (bundle, cfg) = load(opts)?;
    let pr = Problem::from_bundle(&bundle)?;
    let mut embeddings = Vec::new();
    let mut summary = String::new();
    for e in 0..pr.model.field.degree() {
        let s = LocalSetup::new(&pr.model, pr.p, e, cfg.precision)?;
        let frob = &s.integrator.frobenius;
        let g = s.genus();
        let charpoly = &s.cohomology.charpoly;
        let ordinary = charpoly.get(g).is_some_and(|c| c.valuation() == Some(0));
        summary += &format!(
            "embedding {e}: genus {g}, Frobenius loss {} digits (working {}), ordinary: {ordinary}\n",
            frob.loss, frob.working_digits
        );
        embeddings.push(json!({
            "embedding": e,
            "matrix": frob.matrix.data.iter().map(|row| padics(row)).collect::<Vec<_>>(),
            "trace": padic(&frob.matrix.trace()),
            "charpoly": padics(charpoly),
            "ordinary": ordinary,
            "u": padics(&s.cohomology.u),
            "unit_root": s.cohomology.unit_root.iter().map(|v| padics(v)).collect::<Vec<_>>(),
            "series_terms": frob.terms,
            "loss": frob.loss,
            "working_digits": frob.working_digits,
        }));
    }
    let mut result = json!({ "prime": pr.p, "N": cfg.precision, "embeddings": embeddings });
    if pr.model.d() == 0 {
        // L-polynomial from point counts, for comparison
        let p = pr.p;
        let fmod: Vec<u64> = integer_coefficients(&bundle.model.f)?
            .iter()
            .map(|c| {
                let r = c % BigInt::from(p);
                let r = if r < BigInt::from(0) { r + BigInt::from(p) } else { r };
                u64::try_from(r).unwrap_or(0)
            })
            .collect();
        let (n1, n2) = (hyperelliptic::count::count_fp(&fmod, p), hyperelliptic::count::count_fp2(&fmod, p));
        let genus = pr.model.genus;
        result["point_counts"] = json!({ "F_p": n1, "F_p2": n2 });
        result["l_polynomial"] = json!(hyperelliptic::count::l_polynomial(genus, p, n1, n2));
        summary += &format!("#X(F_p) = {n1}, #X(F_p^2) = {n2}\n");
    }
    Ok(Outcome { result, warnings: Vec::new(), summary, disagreement: false })
}

fn heights_cmd(opts: &Opts) -> Result<Outcome, Failure> {
    let (bundle, cfg) = load(opts)?;
    let pr = Problem::from_bundle(&bundle)?;
    let d = pr.model.field.degree();
    let chi = if d == 1 {
        IdeleCharacter::cyclotomic(pr.p, cfg.precision)
    } else {
        IdeleCharacter::split_real_quadratic(pr.p, cfg.precision)
    };
    let setups: Vec<LocalSetup> =
        (0..d).map(|e| LocalSetup::new(&pr.model, pr.p, e, cfg.precision)).collect::<Result<_, _>>()?;
    let base = if cfg.no_base_point { None } else { pr.base.clone() };
    let table = bad_prime_table(&pr.model, &pr.bad_primes, base.as_ref())?;
    let targets = target_set(&table, &chi)?;
    let mut warnings = Vec::new();
    let mut gens = Vec::new();
    let mut summary = format!("T = {{{}}}\n", targets.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(", "));
    for gen in &pr.generators {
        let away = away_heights(&table, gen, cfg.missing_heights, &mut warnings)?;
        let mut per = Vec::new();
        let mut total: Option<padic::Padic> = None;
        for (e, s) in setups.iter().enumerate() {
            let div = s.embed_divisor(gen)?;
            let v = s.integrator.divisor_integral(&div).map_err(ChabautyError::from)?;
            let hp = infinity_height(&s.integrator, &s.cohomology, &div).map_err(ChabautyError::from)?;
            let contribution = if e == 0 {
                global_height_on_generator(&s.integrator, &s.cohomology, &chi, &div, &away).map_err(ChabautyError::from)?
            } else {
                hp.clone()
            };
            total = Some(match total {
                None => contribution,
                Some(acc) => &acc + &contribution,
            });
            per.push(json!({ "embedding": e, "integrals": padics(&v), "h_p": padic(&hp) }));
        }
        let total = total.expect("at least one embedding");
        summary += &format!("h(inf- - inf+, {}) = {total}\n", gen.id);
        gens.push(json!({
            "id": gen.id,
            "embeddings": per,
            "away": away.iter().map(|(q, l)| json!({ "prime": q.to_string(), "value": l.to_string() })).collect::<Vec<_>>(),
            "global": padic(&total),
        }));
    }
    let bad: Vec<Value> = table
        .iter()
        .map(|b| {
            json!({
                "prime": b.ideal.to_string(),
                "T_q": b.tq.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
                "data_supplied": b.data.is_some(),
            })
        })
        .collect();
    let result = json!({
        "prime": pr.p,
        "base_point": base.as_ref().and_then(|b| pr.map.backward(b)).map(|b| point(&b)),
        "bad_primes": bad,
        "T": padics(&targets),
        "generators": gens,
    });
    Ok(Outcome { result, warnings, summary, disagreement: false })
}

fn crosscheck(opts: &Opts) -> Result<Outcome, Failure> {
    let (bundle, cfg) = load(opts)?;
    let f = integer_coefficients(&bundle.model.f)?;
    let r = runge_points(&f)?;
    let c = find_candidates(&Problem::from_bundle(&bundle)?, &cfg)?;
    let key = |x: &str, y: &str| format!("({x}, {y})");
    let from_runge: Vec<String> = r.points.iter().map(|(x, y)| key(&x.to_string(), &y.to_string())).collect();
    let from_qc: Vec<String> = c.certified_points().iter().map(|p| key(&p.x.to_string(), &p.y.to_string())).collect();
    let only_runge: Vec<String> = from_runge.iter().filter(|p| !from_qc.contains(p)).cloned().collect();
    let only_qc: Vec<String> = from_qc.iter().filter(|p| !from_runge.contains(p)).cloned().collect();
    let unexplained = c.count(Status::UnexplainedCandidate) + c.count(Status::UncertifiedBox);
    let disagreement = !only_runge.is_empty() || !only_qc.is_empty() || unexplained > 0;
    let summary = format!(
        "Runge: {} point(s); quadratic Chabauty: {} certified, {} unresolved\nonly Runge: {}\nonly quadratic Chabauty: {}\n{}\n",
        from_runge.len(),
        from_qc.len(),
        unexplained,
        list(&only_runge),
        list(&only_qc),
        if disagreement { "the methods DISAGREE" } else { "the methods agree" }
    );
    let result = json!({
        "runge_points": pairs(&r.points),
        "runge_bound": r.bound.to_string(),
        "qc_points": points(&c.certified_points()),
        "qc_unresolved": unexplained,
        "only_runge": only_runge,
        "only_qc": only_qc,
        "agree": !disagreement,
        "qc": report::candidates(&c),
    });
    Ok(Outcome { result, warnings: c.warnings.clone(), summary, disagreement })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (name, opts, run): (&str, &Opts, fn(&Opts) -> Result<Outcome, Failure>) = match &cli.command {
        Command::Qc(o) => ("qc", o, qc),
        Command::QcNf(o) => ("qc-nf", o, qc_nf),
        Command::Runge(o) => ("runge", o, runge_cmd),
        Command::Frobenius(o) => ("frobenius", o, frobenius),
        Command::Heights(o) => ("heights", o, heights_cmd),
        Command::Crosscheck(o) => ("crosscheck", o, crosscheck),
    };
    let cfg = load(opts).ok().map(|(_, c)| c);
    let input = input_json(opts, cfg.as_ref());
    let (doc, code) = match run(opts) {
        Ok(out) => {
            print!("{}", out.summary);
            for w in &out.warnings {
                println!("warning: {w}");
            }
            let code = if out.disagreement { 5 } else { 0 };
            (report::envelope(name, input, out.result, &out.warnings), code)
        }
        Err(e) => {
            let class = e.class();
            eprintln!("{}: {} [{}]", report::class_name(class), e.message(), e.kind());
            (report::failure(name, input, class, &e.kind(), &e.message(), &[]), exit_code(class))
        }
    };
    if let Some(path) = &opts.out {
        let text = serde_json::to_string_pretty(&doc).expect("reports serialize");
        if let Err(e) = std::fs::write(path, text + "\n") {
            eprintln!("input-error: cannot write {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    ExitCode::from(code)
}
