mod common;

use coleman::ColemanError;
use common::*;
use hyperelliptic::{CurvePoint, DiscKind, IntPoint};
use padic::{Padic, PadicMatrix};

fn sample_points(s: &Setup) -> Vec<CurvePoint> {
    let p = s.curve.p as i64;
    let mut out = Vec::new();
    let mut discs: Vec<_> = s.integrator.discs().map(|d| d.disc.clone()).collect();
    discs.sort_by_key(|d| d.reduction());
    for disc in discs {
        for t in [0, p, 3 * p + 2 * p * p] {
            let t = if t == 0 { Padic::exact_zero(s.curve.p) } else { int(s.curve.p, t) };
            out.push(s.curve.point_at(&disc, &t).unwrap());
        }
    }
    out
}

fn assert_vec_zero(v: &[Padic], need: i64, what: &str) {
    for c in v {
        assert!(c.is_zero() && c.abs_precision() >= need, "{what}: {c}");
    }
}

fn combo(a: &[Padic], b: &[Padic], sign: i64) -> Vec<Padic> {
    let s = Padic::from_i64(a[0].prime(), sign, 40);
    a.iter().zip(b).map(|(x, y)| x + &(y * &s)).collect()
}

#[test]
fn integral_from_a_point_to_itself_vanishes() {
    let s = setup(&F44, 7, 10);
    for pt in sample_points(&s).iter().take(6) {
        assert_vec_zero(&s.integrator.integral(pt, pt).unwrap(), 10, "P to P");
    }
}

#[test]
fn involution_reverses_sign() {
    let s = setup(&F44, 7, 10);
    let pts = sample_points(&s);
    let mut checked = 0;
    for (i, a) in pts.iter().enumerate() {
        let b = &pts[(i * 7 + 5) % pts.len()];
        let direct = s.integrator.integral(a, b).unwrap();
        let flipped = s.integrator.integral(&a.involution(), &b.involution()).unwrap();
        assert_vec_zero(&combo(&direct, &flipped, 1), 8, "antisymmetry");
        checked += 1;
    }
    assert!(checked >= 20);
}

#[test]
fn integrals_are_additive_along_paths() {
    let s = setup(&F44, 7, 10);
    let pts = sample_points(&s);
    let n = pts.len();
    let mut checked = 0;
    for i in 0..n {
        let (a, b, c) = (&pts[i], &pts[(i + 4) % n], &pts[(i + 11) % n]);
        let ab = s.integrator.integral(a, b).unwrap();
        let bc = s.integrator.integral(b, c).unwrap();
        let ac = s.integrator.integral(a, c).unwrap();
        assert_vec_zero(&combo(&combo(&ab, &bc, 1), &ac, -1), 8, "additivity");
        checked += 1;
    }
    assert!(checked >= 20);
}

#[test]
fn same_disc_integral_is_tiny() {
    let s = setup(&F44, 7, 10);
    let pts = sample_points(&s);
    for w in pts.chunks(3) {
        let tiny = s.integrator.tiny_integral(&w[1], &w[2]).unwrap();
        let global = combo(&s.integrator.from_reference(&w[2]).unwrap(), &s.integrator.from_reference(&w[1]).unwrap(), -1);
        assert_vec_zero(&combo(&tiny, &global, -1), 9, "tiny vs global");
        // splitting the tiny path at the disc centre
        let a = s.integrator.tiny_integral(&w[1], &w[0]).unwrap();
        let b = s.integrator.tiny_integral(&w[0], &w[2]).unwrap();
        assert_vec_zero(&combo(&combo(&a, &b, 1), &tiny, -1), 9, "tiny split");
    }
}

#[test]
fn tiny_integral_rejects_different_discs() {
    let s = setup(&F44, 7, 10);
    let pts = sample_points(&s);
    assert!(matches!(s.integrator.tiny_integral(&pts[0], &pts[3]), Err(ColemanError::DifferentDiscs)));
}

#[test]
fn divisor_integrals() {
    let s = setup(&F44, 7, 10);
    let pts = sample_points(&s);
    let (p, q, r) = (&pts[0], &pts[7], &pts[16]);
    let it = &s.integrator;
    assert_vec_zero(&it.divisor_integral(&[(p.clone(), 1), (p.clone(), -1)]).unwrap(), 10, "P - P");
    let pq = it.divisor_integral(&[(p.clone(), 1), (q.clone(), -1)]).unwrap();
    let qr = it.divisor_integral(&[(q.clone(), 1), (r.clone(), -1)]).unwrap();
    let pr = it.divisor_integral(&[(p.clone(), 1), (r.clone(), -1)]).unwrap();
    assert_vec_zero(&combo(&combo(&pq, &qr, 1), &pr, -1), 8, "chain");
    let twice = it.divisor_integral(&[(p.clone(), 2), (q.clone(), -2)]).unwrap();
    assert_vec_zero(&combo(&twice, &combo(&pq, &pq, 1), -1), 8, "double");
    // the divisor P - Q integrates like the path from Q to P
    assert_vec_zero(&combo(&pq, &it.integral(q, p).unwrap(), -1), 8, "path");
    assert!(matches!(it.divisor_integral(&[(p.clone(), 1)]), Err(ColemanError::NonzeroDegree(1))));
}

#[test]
fn infinite_points_are_rejected() {
    let s = setup(&F44, 7, 10);
    let pts = sample_points(&s);
    assert!(s.integrator.integral(&pts[0], &CurvePoint::InfinityPlus).is_err());
}

/// alpha_i from the heights of Q_j - Q, where h = 2(int omega_g - sum u_i int omega_i).
#[test]
fn genus_two_alpha_digits() {
    let s = setup(&F44, 7, 10);
    let base = s.curve.embed_point(&IntPoint::from_ints(-1, 1)).unwrap();
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for (x, y) in [(0, 3), (1, 3)] {
        let pt = s.curve.embed_point(&IntPoint::from_ints(x, y)).unwrap();
        let v = s.integrator.integral(&base, &pt).unwrap();
        let u = &s.cohomology.u;
        let h = &(&v[2] - &(&(&u[0] * &v[0]) + &(&u[1] * &v[1]))) * &int(7, 2);
        rows.push(vec![v[0].clone(), v[1].clone()]);
        rhs.push(h);
    }
    let alpha = PadicMatrix::from_rows(rows).solve(&rhs).unwrap();
    assert_eq!(alpha[0].digits(5).unwrap(), vec![5, 4, 6, 1, 6]);
    assert_eq!(alpha[1].digits(5).unwrap(), vec![6, 3, 5, 3, 4]);
}

#[test]
fn weierstrass_discs_are_consistent() {
    // y^2 = x^4 - 1 at 5: Weierstrass points at x = 1, 2, 3, 4
    let s = setup(&[-1, 0, 0, 0, 1], 5, 8);
    let it = &s.integrator;
    let kinds: Vec<DiscKind> = it.discs().map(|d| d.disc.kind).collect();
    assert_eq!(kinds.iter().filter(|k| **k == DiscKind::Weierstrass).count(), 4);
    let w = s.curve.embed_point(&IntPoint::from_ints(1, 0)).unwrap();
    let w2 = s.curve.embed_point(&IntPoint::from_ints(-1, 0)).unwrap();
    assert_vec_zero(&it.integral(&w, &w2).unwrap(), 7, "Weierstrass to Weierstrass");
    let pts = sample_points(&s);
    for q in pts.iter().filter(|q| !q.is_weierstrass()) {
        let full = it.integral(&q.involution(), q).unwrap();
        let half = it.integral(&w, q).unwrap();
        assert_vec_zero(&combo(&full, &combo(&half, &half, 1), -1), 6, "iota Q to Q");
    }
    let n = pts.len();
    for i in 0..n {
        let (a, b, c) = (&pts[i], &pts[(i + 4) % n], &pts[(i + 7) % n]);
        let ab = it.integral(a, b).unwrap();
        let bc = it.integral(b, c).unwrap();
        let ac = it.integral(a, c).unwrap();
        assert_vec_zero(&combo(&combo(&ab, &bc, 1), &ac, -1), 6, "additivity through Weierstrass discs");
    }
}
