//! Frobenius on the cohomology of an even-degree hyperelliptic curve over Q_p,
//! the unit-root subspace with the constants u_i, and Coleman integrals.

pub mod cohomology;
pub mod frobenius;
pub mod integrals;

use hyperelliptic::CurveError;
use padic::PadicError;
use thiserror::Error;

pub use cohomology::{Cohomology, Splitting};
pub use frobenius::{Frobenius, Reducer};
pub use integrals::{DiscData, Integrator};

#[derive(Debug, Error)]
pub enum ColemanError {
    #[error(transparent)]
    Padic(#[from] PadicError),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error("insufficient precision: need {needed} digits, have {have}")]
    Precision { needed: i64, have: i64 },
    #[error("reduction at {0} is not ordinary; choose another prime")]
    NotOrdinary(u64),
    #[error("the reduction has no affine point with y != 0")]
    NoOrdinaryDisc,
    #[error("points at infinity are not supported")]
    InfiniteDisc,
    #[error("points lie in different residue discs")]
    DifferentDiscs,
    #[error("divisor has degree {0}, expected 0")]
    NonzeroDegree(i64),
}
