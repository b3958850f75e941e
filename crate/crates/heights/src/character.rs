//! Cyclotomic idele class characters with the Iwasawa branch of log.

use num_bigint::BigInt;
use padic::{Padic, PadicError};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CharacterKind {
    Cyclotomic,
    /// Over a real quadratic field in which p splits; both trace maps are the identity.
    SplitRealQuadratic,
}

#[derive(Clone, Debug)]
pub struct IdeleCharacter {
    pub kind: CharacterKind,
    pub prime: u64,
    pub digits: u32,
}

impl IdeleCharacter {
    pub fn cyclotomic(prime: u64, digits: u32) -> Self {
        IdeleCharacter { kind: CharacterKind::Cyclotomic, prime, digits }
    }

    pub fn split_real_quadratic(prime: u64, digits: u32) -> Self {
        IdeleCharacter { kind: CharacterKind::SplitRealQuadratic, prime, digits }
    }

    /// chi_p on Q_p^*: log_p.
    pub fn at_p(&self, x: &Padic) -> Result<Padic, PadicError> {
        x.log()
    }

    /// chi_q on a uniformizer of norm `norm`: -log_p(norm).  Over Q the norm is q.
    pub fn at_uniformizer(&self, norm: &BigInt) -> Result<Padic, PadicError> {
        let n = Padic::from_bigint(self.prime, norm, self.digits + 8);
        Ok(-&n.log()?.with_abs(self.digits as i64))
    }
}
