use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use runge::{eval, runge_bound, runge_decompose, runge_points, strictly_between, RungeError};

fn big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&c| BigInt::from(c)).collect()
}

fn rats(v: &[i64]) -> Vec<BigRational> {
    v.iter().map(|&c| BigRational::from_integer(c.into())).collect()
}

fn pts(v: &[(i64, i64)]) -> Vec<(BigInt, BigInt)> {
    let mut out: Vec<_> = v.iter().map(|&(x, y)| (BigInt::from(x), BigInt::from(y))).collect();
    out.sort();
    out
}

/// Schoolbook product of integer polynomials.
fn square(g: &[i64]) -> Vec<i64> {
    let mut out = vec![0; 2 * g.len() - 1];
    for (i, a) in g.iter().enumerate() {
        for (j, b) in g.iter().enumerate() {
            out[i + j] += a * b;
        }
    }
    out
}

const F44: [i64; 7] = [9, 20, 2, -18, -7, 2, 1];

#[test]
fn decompositions() {
    for (f, g, h) in [
        (&F44[..], &[-5, -4, 1, 1][..], &[-16, -20, -4][..]),
        (&[1, 0, 1][..], &[0, 1][..], &[1][..]),
        (&[5, 4, 3, 2, 1][..], &[1, 1, 1][..], &[4, 2][..]),
    ] {
        let dec = runge_decompose(&big(f)).unwrap();
        assert_eq!(dec.g, rats(g));
        assert_eq!(dec.h, rats(h));
        assert_eq!(dec.k, 0);
        // expansion check of f - g^2
        let g2 = square(g);
        let diff: Vec<i64> = f.iter().zip(g2.iter()).map(|(a, b)| a - b).collect();
        assert_eq!(&diff[..h.len()], h);
        assert!(diff[h.len()..].iter().all(|&c| c == 0));
    }
}

#[test]
fn bounds() {
    let m = runge_bound(&runge_decompose(&big(&F44)).unwrap());
    assert_eq!(m, BigRational::new(61.into(), 2.into()));
    let m = runge_bound(&runge_decompose(&big(&[1, 0, 1])).unwrap());
    assert_eq!(m, BigRational::from_integer(1.into()));
}

#[test]
fn scaling_with_nonunit_leading_coefficient() {
    // 4x^4 + x + 1: g = 2x^2 + 0x + 0, h = x + 1
    let dec = runge_decompose(&big(&[1, 1, 0, 0, 4])).unwrap();
    assert!(dec.residual().is_empty());
    assert!(dec.denominators_ok());
    // 9x^4 + 2x^3 + 1: g = 3x^2 + x/3 - 1/54, integral after 6^3
    let dec = runge_decompose(&big(&[1, 0, 0, 2, 9])).unwrap();
    assert_eq!(dec.k, 3);
    assert_eq!(dec.big_g, big(&[-4, 72, 648]));
    assert!(dec.residual().is_empty());
    assert!(dec.denominators_ok());
}

#[test]
fn worked_curve_points() {
    let report = runge_points(&big(&F44)).unwrap();
    assert_eq!(report.h_roots, big(&[-4, -1]));
    assert_eq!(report.bound, BigRational::new(61.into(), 2.into()));
    let expected = pts(&[(0, 3), (0, -3), (1, 3), (1, -3), (-1, 1), (-1, -1), (-2, 3), (-2, -3), (-4, 37), (-4, -37)]);
    assert_eq!(report.points, expected);
}

#[test]
fn small_curves() {
    assert_eq!(runge_points(&big(&[1, 0, 1])).unwrap().points, pts(&[(0, 1), (0, -1)]));
    let neg = runge_points(&big(&[17, 0, 0, 0, -1])).unwrap();
    assert_eq!(neg.points, pts(&[(1, 4), (1, -4), (-1, 4), (-1, -4), (2, 1), (2, -1), (-2, 1), (-2, -1)]));
}

#[test]
fn rejected_inputs() {
    assert_eq!(runge_points(&big(&[1, 0, 0, 0, 2])).unwrap_err(), RungeError::NonSquareLeading(2.into()));
    assert_eq!(runge_points(&big(&[1, 1, 1, 1])).unwrap_err(), RungeError::OddDegree(3));
    assert_eq!(runge_points(&big(&[1, 2, 1])).unwrap_err(), RungeError::NotSquarefree);
    assert_eq!(runge_points(&big(&[5])).unwrap_err(), RungeError::OddDegree(0));
}

fn brute(f: &[BigInt], bound: i64) -> Vec<(BigInt, BigInt)> {
    let mut out = Vec::new();
    for x in -bound..=bound {
        let v = eval(f, &BigInt::from(x));
        if v.is_negative() {
            continue;
        }
        let y = v.sqrt();
        if &y * &y == v {
            out.push((BigInt::from(x), y.clone()));
            if !y.is_zero() {
                out.push((BigInt::from(x), -y));
            }
        }
    }
    out.sort();
    out
}

#[test]
fn agrees_with_brute_force_on_random_curves() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut checked = 0;
    while checked < 60 {
        let n = rng.gen_range(1..=3);
        let mut f: Vec<i64> = (0..2 * n).map(|_| rng.gen_range(-9..=9)).collect();
        let lead = match rng.gen_range(0..4) {
            0 => -rng.gen_range(1..4),
            1 => 4,
            _ => 1,
        };
        f.push(lead);
        let f = big(&f);
        let Ok(report) = runge_points(&f) else { continue };
        let hmax = report.h_roots.iter().map(|r| r.abs()).max().unwrap_or_default();
        let reach: BigInt = BigInt::from(10) * (report.bound.floor().to_integer() + hmax + 1);
        let reach: i64 = reach.try_into().unwrap();
        assert_eq!(report.points, brute(&f, reach), "{f:?}");
        for (x, y) in &report.points {
            assert_eq!(&(y * y), &eval(&f, x));
        }
        if let Some(dec) = &report.decomposition {
            assert!(dec.residual().is_empty());
            assert!(dec.denominators_ok());
            assert!(dec.k as usize <= 2 * dec.n() - 1);
            let m: i64 = report.bound.floor().to_integer().try_into().unwrap();
            for x in (m + 1..m + 40).chain(-m - 40..-m) {
                let x = BigInt::from(x);
                if !eval(&dec.big_h, &x).is_zero() {
                    assert!(strictly_between(dec, &x), "{f:?} {x} {dec:?}");
                }
            }
        }
        checked += 1;
    }
}
