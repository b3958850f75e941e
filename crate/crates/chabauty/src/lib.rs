//! Integral points on even-degree hyperelliptic curves y^2 = f(x) with square
//! leading coefficient by linear quadratic Chabauty, over Q and over real
//! quadratic fields in which the auxiliary prime splits.

pub mod bundle;
pub mod engine;
pub mod local;
pub mod nf;
pub mod report;
pub mod targets;

use coleman::ColemanError;
use heights::HeightError;
use hyperelliptic::CurveError;
use padic::PadicError;
use thiserror::Error;

pub use bundle::{Bundle, Generator, Term};
pub use engine::{
    build_rho_series, find_candidates, solve_alpha, BaseIntegrals, Candidate, Candidates, Config, HeightContext, Problem,
    RhoSeries, Status,
};
pub use local::{Divisor, LocalSetup};
pub use nf::{nf_find_candidates, nf_relations, NfCandidates, NfContext};
pub use targets::MissingHeights;

#[derive(Debug, Error)]
pub enum ChabautyError {
    #[error("input: {0}")]
    Input(String),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Coleman(#[from] ColemanError),
    #[error(transparent)]
    Height(#[from] HeightError),
    #[error(transparent)]
    Padic(#[from] PadicError),
    #[error("rank mismatch: the method needs {expected} generators, {got} were given")]
    RankMismatch { expected: usize, got: usize },
    #[error("generators dependent or precision too low: det N is indistinguishable from 0")]
    DependentGenerators,
    #[error("Condition 4 fails: the integrals of the generators have rank {rank} < {needed}")]
    Condition4 { rank: usize, needed: usize },
    #[error("rho vanishes identically on every disc")]
    Degenerate,
    #[error("divisor support does not split over Q_p: {0}")]
    NotSplit(String),
}

/// Broad classes of failure, for exit codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorClass {
    Input,
    Precision,
    Hypothesis,
}

impl ChabautyError {
    /// The variant path, e.g. `Coleman::NotOrdinary`.
    pub fn kind(&self) -> String {
        let debug = format!("{self:?}");
        let head: String = debug.chars().take_while(|c| c.is_alphanumeric() || *c == '(').collect();
        head.split('(').filter(|s| !s.is_empty()).collect::<Vec<_>>().join("::")
    }

    pub fn class(&self) -> ErrorClass {
        use ChabautyError::*;
        let padic_class = |e: &PadicError| match e {
            PadicError::BadPrime(_) | PadicError::BadPrecision | PadicError::ZeroDenominator | PadicError::Dimension(_) => {
                ErrorClass::Input
            }
            _ => ErrorClass::Precision,
        };
        let curve_class = |e: &CurveError| match e {
            CurveError::Padic(p) => padic_class(p),
            CurveError::BadReduction(_)
            | CurveError::NotSplit(_)
            | CurveError::PrimeTooSmall { .. }
            | CurveError::LeadingNotSquare(_) => ErrorClass::Hypothesis,
            _ => ErrorClass::Input,
        };
        let coleman_class = |e: &ColemanError| match e {
            ColemanError::Padic(p) => padic_class(p),
            ColemanError::Curve(c) => curve_class(c),
            ColemanError::Precision { .. } => ErrorClass::Precision,
            ColemanError::NotOrdinary(_) | ColemanError::NoOrdinaryDisc => ErrorClass::Hypothesis,
            _ => ErrorClass::Input,
        };
        match self {
            Input(_) | NotSplit(_) => ErrorClass::Input,
            Curve(e) => curve_class(e),
            Coleman(e) => coleman_class(e),
            Height(e) => match e {
                HeightError::Coleman(c) => coleman_class(c),
                HeightError::Padic(p) => padic_class(p),
                _ => ErrorClass::Input,
            },
            Padic(e) => padic_class(e),
            DependentGenerators => ErrorClass::Precision,
            RankMismatch { .. } | Condition4 { .. } | Degenerate => ErrorClass::Hypothesis,
        }
    }
}
