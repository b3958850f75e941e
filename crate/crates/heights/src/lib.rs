//! Heights on Jacobians of even-degree hyperelliptic curves: the local term
//! at p from Coleman integrals, the terms away from p from component data,
//! and the cyclotomic idele class character tying them together.

pub mod badprime;
pub mod character;
pub mod local;
pub mod pairing;
pub mod tq;

use coleman::ColemanError;
use padic::PadicError;
use thiserror::Error;

pub use badprime::{BadPrimeData, PrimeIdeal};
pub use character::{CharacterKind, IdeleCharacter};
pub use local::{global_height_on_generator, infinity_height, local_height_p};
pub use pairing::LocalPairing;
pub use tq::{assemble_t, is_square_mod, tq_set};

#[derive(Debug, Error)]
pub enum HeightError {
    #[error(transparent)]
    Coleman(#[from] ColemanError),
    #[error(transparent)]
    Padic(#[from] PadicError),
    #[error("bad prime data: {0}")]
    Data(String),
    #[error("intersection matrix at {0} is not symmetric")]
    NotSymmetric(u64),
    #[error("unknown component label {0}")]
    UnknownComponent(String),
    #[error("bad prime {0} needs component data or an explicit T_q")]
    MissingBadPrimeData(String),
    #[error("no away-from-p height supplied at {prime} for divisor {divisor}")]
    MissingLocalHeight { prime: String, divisor: String },
    #[error("divisor has degree {0}, expected 0")]
    NonzeroDegree(i64),
    #[error("divisor supports meet the same x-residue class")]
    SupportsMeet,
    #[error("points at infinity and Weierstrass discs are not supported here")]
    UnsupportedPoint,
}
