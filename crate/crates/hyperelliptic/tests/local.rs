use hyperelliptic::{count, CurveModel, CurvePoint, DiscKind, IntPoint, LocalCurve};
use padic::{Padic, PadicPowerSeries};

const F44: [i64; 7] = [9, 20, 2, -18, -7, 2, 1];

fn local(f: &[i64], p: u64, digits: u32) -> LocalCurve {
    LocalCurve::from_model(&CurveModel::over_q(f).unwrap(), p, 0, digits).unwrap()
}

fn rational(p: u64, n: i64, d: i64) -> Padic {
    Padic::from_rational(p, &n.into(), &d.into(), 20).unwrap()
}

/// y(t)^2 - f(x(t)) vanishes coefficientwise up to the expansion order.
fn check_expansion(curve: &LocalCurve, disc: &hyperelliptic::ResidueDisc, order: usize) {
    let exp = curve.local_expansion(disc, order).unwrap();
    let fx = curve.f.iter().rev().fold(PadicPowerSeries::polynomial(curve.p, vec![]), |acc, c| {
        acc.mul(&exp.x).add(&PadicPowerSeries::polynomial(curve.p, vec![c.clone()]))
    });
    let diff = exp.y.mul(&exp.y).sub(&fx);
    for c in diff.coeffs.iter().take(order - 2) {
        assert!(c.is_zero() && c.abs_precision() >= curve.digits as i64, "{c}");
    }
    // omega_0 = dx / 2y
    let lhs = exp.omega[0].mul(&exp.y).scale(&rational(curve.p, 2, 1));
    let dx = exp.x.derivative();
    for k in 0..order - 4 {
        let d = &lhs.coeff(k) - &dx.coeff(k);
        assert!(d.is_zero(), "omega_0 coefficient {k}: {d}");
    }
}

#[test]
fn ordinary_expansion_at_zero_three() {
    let curve = local(&F44, 7, 10);
    let pt = curve.embed_point(&IntPoint::from_ints(0, 3)).unwrap();
    let disc = curve.disc_of(&pt).unwrap();
    assert_eq!(disc.kind, DiscKind::Ordinary);
    let exp = curve.local_expansion(&disc, 12).unwrap();
    // y = sqrt(9 + 20t + ...) = 3 + (10/3) t + ...
    assert!((&exp.y.coeff(0) - &rational(7, 3, 1)).is_zero());
    assert!((&exp.y.coeff(1) - &rational(7, 10, 3)).is_zero());
    check_expansion(&curve, &disc, 12);
}

#[test]
fn expansions_satisfy_the_curve_equation() {
    let curve = local(&F44, 7, 10);
    for disc in curve.affine_discs().unwrap() {
        check_expansion(&curve, &disc, 14);
    }
    let quartic = local(&[-1, 0, 0, 0, 1], 5, 8);
    let discs = quartic.affine_discs().unwrap();
    assert!(discs.iter().any(|d| d.kind == DiscKind::Weierstrass));
    for disc in discs {
        check_expansion(&quartic, &disc, 14);
    }
}

#[test]
fn disc_count_matches_the_reduction() {
    let curve = local(&F44, 7, 10);
    // 12 projective points over F_7, two of them at infinity
    assert_eq!(curve.affine_count_mod_p(), 10);
    assert_eq!(curve.affine_discs().unwrap().len(), 10);
    let reduced: Vec<u64> = curve.reduction();
    assert_eq!(count::count_fp(&reduced, 7), 12);
}

#[test]
fn lifting_points() {
    let curve = local(&F44, 7, 10);
    let lifts = curve.lift_point(0).unwrap();
    assert_eq!(lifts.len(), 2);
    for pt in &lifts {
        let (x, y) = pt.coords().unwrap();
        assert!(x.is_exact_zero() || x.is_zero());
        assert!((&(y * y) - &curve.eval_f(x)).is_zero());
    }
    // x = 2 gives f = 9 + 40 + 8 - 144 - 112 + 64 + 64 = -71 = 6 mod 7, a non-square
    assert!(curve.lift_point(2).unwrap().is_empty());
    // a Teichmuller point is fixed by x -> x^7
    let t = curve.teichmuller_point(3, curve.affine_points_mod_p().iter().find(|(x, _)| *x == 3).unwrap().1).unwrap();
    let (x, _) = t.coords().unwrap();
    assert!((&x.pow(7) - x).is_zero());
}

#[test]
fn weierstrass_point_is_a_root() {
    let curve = local(&[-1, 0, 0, 0, 1], 5, 8);
    for xb in 1..5 {
        let w = curve.weierstrass_point(xb).unwrap();
        assert!(w.is_weierstrass());
        let (x, _) = w.coords().unwrap();
        assert!(curve.eval_f(x).is_zero());
    }
}

#[test]
fn points_in_a_disc_round_trip_through_the_parameter() {
    let curve = local(&F44, 7, 10);
    for disc in curve.affine_discs().unwrap() {
        let t = rational(7, 21, 1);
        let pt = curve.point_at(&disc, &t).unwrap();
        assert!(curve.disc_of(&pt).unwrap().same_disc(&disc));
        assert!((&curve.parameter(&disc, &pt).unwrap() - &t).is_zero());
        assert!(curve.disc_of(&pt.involution()).unwrap().reduction() != disc.reduction());
    }
    assert!(curve.disc_of(&CurvePoint::InfinityMinus).is_err());
}
