//! The curve at one embedding into Q_p, with its Frobenius, unit-root data and
//! integrator, and divisors carried over to it.

use coleman::{Cohomology, Frobenius, Integrator};
use hyperelliptic::local::HEADROOM;
use hyperelliptic::{CurveModel, CurvePoint, IntPoint, LocalCurve};
use padic::poly as pp;
use padic::{solve_single, Padic, PadicPowerSeries, SolverConfig};

use crate::bundle::{Generator, Term};
use crate::ChabautyError;

pub type Divisor = Vec<(CurvePoint, i64)>;

#[derive(Clone, Debug)]
pub struct LocalSetup {
    pub embedding: usize,
    pub curve: LocalCurve,
    pub cohomology: Cohomology,
    pub integrator: Integrator,
    pub frobenius_loss: i64,
    pub frobenius_working: u32,
}

impl LocalSetup {
    pub fn new(model: &CurveModel, p: u64, embedding: usize, digits: u32) -> Result<Self, ChabautyError> {
        let curve = LocalCurve::from_model(model, p, embedding, digits)?;
        let frob = Frobenius::compute(&curve, digits)?;
        let cohomology = Cohomology::new(&curve, &frob, digits)?;
        let (frobenius_loss, frobenius_working) = (frob.loss, frob.working_digits);
        let integrator = Integrator::new(curve.clone(), frob, digits)?;
        Ok(LocalSetup { embedding, curve, cohomology, integrator, frobenius_loss, frobenius_working })
    }

    pub fn prime(&self) -> u64 {
        self.curve.p
    }

    pub fn genus(&self) -> usize {
        self.curve.genus
    }

    pub fn embed_point(&self, pt: &IntPoint) -> Result<CurvePoint, ChabautyError> {
        Ok(self.curve.embed_point(pt)?)
    }

    fn embed_poly(&self, a: &[hyperelliptic::QuadElem]) -> Result<Vec<Padic>, ChabautyError> {
        let digits = self.curve.digits + HEADROOM;
        Ok(a.iter().map(|c| c.embed(self.prime(), self.curve.w_image.as_ref(), digits)).collect::<Result<_, _>>()?)
    }

    /// The roots of monic u in Z_p, which must be simple and deg u in number.
    fn roots_in_zp(&self, u: &[Padic]) -> Result<Vec<Padic>, ChabautyError> {
        let p = self.prime();
        let n = u.len() - 1;
        if u.iter().any(|c| c.val_lower() < 0) {
            return Err(ChabautyError::NotSplit(format!("u has coefficients that are not {p}-integral")));
        }
        let mut roots = Vec::new();
        for r in 0..p {
            let center = Padic::from_i64(p, r as i64, self.curve.digits + HEADROOM);
            if !pp::eval(u, &center).val_lower().is_positive() {
                continue;
            }
            let shifted = pp::taylor_shift(u, &center);
            let report = solve_single(&PadicPowerSeries::polynomial(p, shifted), &SolverConfig::default());
            for root in report.roots {
                if !root.certified {
                    return Err(ChabautyError::NotSplit(format!("a root of u near {r} mod {p} is not simple")));
                }
                roots.push(&center + &root.coords[0]);
            }
        }
        if roots.len() != n {
            return Err(ChabautyError::NotSplit(format!("u has {} roots in Z_{p}, expected {n}", roots.len())));
        }
        Ok(roots)
    }

    /// The divisor of `gen` over Q_p.
    pub fn embed_divisor(&self, gen: &Generator) -> Result<Divisor, ChabautyError> {
        let mut out: Divisor = Vec::new();
        for (term, m) in &gen.terms {
            match term {
                Term::Point(pt) => out.push((self.embed_point(pt)?, *m)),
                Term::Mumford { u, v } => {
                    let u = self.embed_poly(u)?;
                    let v = self.embed_poly(v)?;
                    for x in self.roots_in_zp(&u)? {
                        let y = pp::eval(&v, &x);
                        out.push((CurvePoint::affine(x, y), *m));
                    }
                }
            }
        }
        Ok(out)
    }
}
