//! The local height at p against the divisor infinity_minus - infinity_plus.

use coleman::{Cohomology, Integrator};
use hyperelliptic::CurvePoint;
use num_rational::BigRational;
use padic::Padic;

use crate::badprime::PrimeIdeal;
use crate::character::IdeleCharacter;
use crate::HeightError;

/// h_p(inf_- - inf_+, D) = 2 (int_D omega_g - sum u_i int_D omega_i).
pub fn infinity_height(
    integrator: &Integrator,
    cohomology: &Cohomology,
    divisor: &[(CurvePoint, i64)],
) -> Result<Padic, HeightError> {
    let v = integrator.divisor_integral(divisor)?;
    Ok(from_integrals(cohomology, &v))
}

/// The same combination applied to a vector of integrals of omega_0..omega_2g.
pub fn from_integrals(cohomology: &Cohomology, v: &[Padic]) -> Padic {
    let g = cohomology.genus;
    let mut acc = v[g].clone();
    for (u, x) in cohomology.u.iter().zip(v) {
        acc = &acc - &(u * x);
    }
    &acc * &Padic::from_i64(v[0].prime(), 2, 64)
}

/// h_p(inf_- - inf_+, R - S).
pub fn local_height_p(
    integrator: &Integrator,
    cohomology: &Cohomology,
    r: &CurvePoint,
    s: &CurvePoint,
) -> Result<Padic, HeightError> {
    if r == s {
        return Ok(Padic::exact_zero(integrator.prime()));
    }
    let v = integrator.integral(s, r)?;
    Ok(from_integrals(cohomology, &v))
}

/// h(inf_- - inf_+, D): the local height at p plus sum l_q chi_q(pi_q) over
/// the supplied heights away from p.
pub fn global_height_on_generator(
    integrator: &Integrator,
    cohomology: &Cohomology,
    chi: &IdeleCharacter,
    divisor: &[(CurvePoint, i64)],
    away: &[(PrimeIdeal, BigRational)],
) -> Result<Padic, HeightError> {
    let p = chi.prime;
    let mut h = infinity_height(integrator, cohomology, divisor)?;
    for (prime, l) in away {
        let l = Padic::from_rational(p, l.numer(), l.denom(), chi.digits + 8)?;
        h = &h + &(&l * &chi.at_uniformizer(&prime.norm())?);
    }
    Ok(h)
}
