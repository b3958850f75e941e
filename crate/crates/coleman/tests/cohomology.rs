mod common;

use common::*;
use padic::{Padic, PadicMatrix};

fn in_span(basis: &[Vec<Padic>], v: &[Padic], need: i64) -> bool {
    // appending v to an independent basis leaves a one-dimensional kernel
    let n = v.len();
    let rows: Vec<Vec<Padic>> = (0..n)
        .map(|r| basis.iter().map(|b| b[r].clone()).chain(std::iter::once(v[r].clone())).collect())
        .collect();
    let m = PadicMatrix::from_rows(rows);
    let cols = m.cols;
    match m.kernel(cols - 1) {
        Ok(k) => k.len() == 1 && {
            let w = &k[0];
            (0..n).all(|r| {
                let s = (0..cols).fold(Padic::exact_zero(v[0].prime()), |acc, c| &acc + &(m.get(r, c) * &w[c]));
                s.is_zero() && s.abs_precision() >= need
            })
        },
        Err(_) => false,
    }
}

#[test]
fn psi_has_no_residue() {
    let s = setup(&F44, 7, 10);
    let r = s.cohomology.residue(&s.cohomology.psi);
    assert!(r.is_zero() && r.abs_precision() >= 9);
    let r = s.cohomology.residue(&s.cohomology.eigenvector);
    assert!(agree(&r, &int(7, 1), 9));
}

#[test]
fn eigenvector_has_eigenvalue_p() {
    let s = setup(&F44, 7, 10);
    let w = &s.cohomology.eigenvector;
    let phi_w = s.integrator.frobenius.matrix.mul_vec(w);
    for (a, b) in phi_w.iter().zip(w) {
        assert!(agree(a, &(b * &int(7, 7)), 9));
    }
}

#[test]
fn unit_root_space_is_frobenius_stable() {
    let s = setup(&F44, 7, 10);
    let w = &s.cohomology.unit_root;
    assert_eq!(w.len(), 2);
    for v in w {
        let image = s.integrator.frobenius.matrix.mul_vec(v);
        assert!(in_span(w, &image, 8));
        // unit roots live in H^1
        let r = s.cohomology.residue(v);
        assert!(r.is_zero() && r.abs_precision() >= 8);
    }
}

#[test]
fn complement_is_unimodular() {
    let s = setup(&F44, 7, 10);
    assert_eq!(s.cohomology.complement_valuation, 0);
}

#[test]
fn u_is_stable_under_precision_change() {
    let a = setup(&F44, 7, 10);
    let b = setup(&F44, 7, 14);
    for (x, y) in a.cohomology.u.iter().zip(&b.cohomology.u) {
        assert!(agree(x, y, 8), "{x} vs {y}");
    }
}

#[test]
fn psi_minus_projection_lies_in_unit_root_space() {
    let s = setup(&F44, 7, 10);
    let c = &s.cohomology;
    let mut v = c.psi.clone();
    for (i, u) in c.u.iter().enumerate() {
        v[i] = &v[i] - u;
    }
    assert!(in_span(&c.unit_root, &v, 8));
}

#[test]
fn non_ordinary_prime_is_rejected() {
    use coleman::{Cohomology, ColemanError, Frobenius};
    use hyperelliptic::{CurveModel, LocalCurve};
    // y^2 = x^4 + 1 is supersingular at 3 (a_3 = 0)
    let model = CurveModel::over_q(&[1, 0, 0, 0, 1]).unwrap();
    let curve = LocalCurve::from_model(&model, 3, 0, 8).unwrap();
    let frob = Frobenius::compute(&curve, 8).unwrap();
    assert!(matches!(Cohomology::new(&curve, &frob, 8), Err(ColemanError::NotOrdinary(3))));
}

fn cup_matrix(s: &Setup) -> Vec<Vec<Padic>> {
    let basis = s.cohomology.h1_basis();
    basis.iter().map(|a| basis.iter().map(|b| s.cohomology.cup(a, b).unwrap()).collect()).collect()
}

#[test]
fn cup_product_is_alternating_and_nondegenerate() {
    for (f, p) in [(&F44[..], 7u64), (&[1, 0, 3, 1, 0, -1, 1][..], 11)] {
        let s = setup(f, p, 10);
        let m = cup_matrix(&s);
        for i in 0..m.len() {
            assert!(m[i][i].is_zero());
            for j in 0..m.len() {
                assert!((&m[i][j] + &m[j][i]).is_zero());
            }
        }
        assert!(PadicMatrix::from_rows(m).det().valuation().is_some());
    }
}

#[test]
fn frobenius_scales_cup_product_by_p() {
    let s = setup(&F44, 7, 10);
    let phi = &s.integrator.frobenius.matrix;
    let basis = s.cohomology.h1_basis();
    let seven = Padic::from_i64(7, 7, 20);
    for a in &basis {
        for b in &basis {
            let lhs = s.cohomology.cup(&phi.mul_vec(a), &phi.mul_vec(b)).unwrap();
            let rhs = &s.cohomology.cup(a, b).unwrap() * &seven;
            assert!((&lhs - &rhs).val_lower() >= 8, "{lhs} vs {rhs}");
        }
    }
}

#[test]
fn unit_root_space_is_isotropic() {
    for (f, p) in [(&F44[..], 7u64), (&[1, 0, 3, 1, 0, -1, 1][..], 11), (&[1, 1, 0, 0, 1][..], 13)] {
        let s = setup(f, p, 10);
        let w = &s.cohomology.unit_root;
        for a in w {
            for b in w {
                assert!(s.cohomology.cup(a, b).unwrap().val_lower() >= 8);
            }
        }
        // but W pairs perfectly with the holomorphic forms
        let g = s.cohomology.genus;
        let rows = (0..g)
            .map(|i| {
                let mut e = vec![Padic::exact_zero(p); 2 * g + 1];
                e[i] = Padic::one(p, 20);
                w.iter().map(|b| s.cohomology.cup(&e, b).unwrap()).collect()
            })
            .collect();
        assert_eq!(PadicMatrix::from_rows(rows).det().valuation(), Some(0));
    }
}
