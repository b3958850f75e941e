use heights::{assemble_t, is_square_mod, tq_set, BadPrimeData, HeightError, IdeleCharacter, PrimeIdeal};
use hyperelliptic::{BaseField, CurveModel, QuadElem};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use padic::Padic;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const F44: [i64; 7] = [9, 20, 2, -18, -7, 2, 1];

fn r(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn two_component(extra: &str) -> BadPrimeData {
    let text = format!(
        r#"{{"q": 5, "components": ["A", "B"], "M": [["-1", "1"], ["1", "-1"]],
            "sp_inf_plus": "B", "sp_inf_minus": "A", "sp_points": {{"(0,1)": "B"}} {extra}}}"#
    );
    BadPrimeData::parse_many(&text).unwrap().remove(0)
}

#[test]
fn lplus_worked_example() {
    let d = two_component("");
    let v = d.difference("A", "B").unwrap();
    assert_eq!(d.lplus(&v, &v).unwrap(), BigRational::one());
    assert!(d.lplus(&v, &[BigRational::zero(), BigRational::zero()]).unwrap().is_zero());
}

#[test]
fn lplus_single_component_is_zero() {
    let d = BadPrimeData::parse_many(r#"{"q": 3, "components": ["C"], "M": [[0]]}"#).unwrap().remove(0);
    let v = d.difference("C", "C").unwrap();
    assert!(d.lplus(&v, &v).unwrap().is_zero());
}

/// (L + J/n)^-1 restricted to vectors summing to zero, for a connected Laplacian L.
fn laplacian_oracle(l: &[Vec<BigRational>], v1: &[BigRational], v2: &[BigRational]) -> BigRational {
    let n = l.len();
    let shift = r(1, n as i64);
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            let mut row: Vec<BigRational> = (0..n).map(|j| &l[i][j] + &shift).collect();
            row.push(v2[i].clone());
            row
        })
        .collect();
    for c in 0..n {
        let piv = (c..n).find(|&i| !a[i][c].is_zero()).unwrap();
        a.swap(c, piv);
        let inv = a[c][c].recip();
        for x in a[c].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..n {
            if i != c {
                let f = a[i][c].clone();
                let row = a[c].clone();
                for (x, y) in a[i].iter_mut().zip(&row) {
                    *x = &*x - &(&f * y);
                }
            }
        }
    }
    (0..n).fold(BigRational::zero(), |acc, i| acc + &v1[i] * &a[i][n])
}

#[test]
fn lplus_matches_laplacian_inverse_on_random_graphs() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let n = rng.gen_range(2..6);
        // a path keeps the graph connected; extra edges at random
        let mut l = vec![vec![BigRational::zero(); n]; n];
        let edge = |l: &mut Vec<Vec<BigRational>>, i: usize, j: usize, w: i64| {
            let w = r(w, 1);
            l[i][j] -= &w;
            l[j][i] -= &w;
            l[i][i] += &w;
            l[j][j] += &w;
        };
        for i in 1..n {
            edge(&mut l, i - 1, i, rng.gen_range(1..4));
        }
        for _ in 0..rng.gen_range(0..3) {
            let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
            if i != j {
                edge(&mut l, i, j, rng.gen_range(1..3));
            }
        }
        let m: Vec<Vec<String>> = l.iter().map(|row| row.iter().map(|c| (-c).to_string()).collect()).collect();
        let labels: Vec<String> = (0..n).map(|i| format!("C{i}")).collect();
        let json = serde_json::json!({"q": 7, "components": labels, "M": m});
        let data = BadPrimeData::parse_many(&json.to_string()).unwrap().remove(0);
        let pick = |rng: &mut ChaCha8Rng| {
            let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
            data.difference(&labels[a], &labels[b]).unwrap()
        };
        let (v1, v2) = (pick(&mut rng), pick(&mut rng));
        let got = data.lplus(&v1, &v2).unwrap();
        assert_eq!(got, laplacian_oracle(&l, &v1, &v2));
        assert_eq!(got, data.lplus(&v2, &v1).unwrap());
        assert!(data.lplus(&v1, &v1).unwrap() >= BigRational::zero());
        let ones = vec![BigRational::one(); n];
        assert!(data.lplus(&v1, &ones).unwrap().is_zero());
    }
}

#[test]
fn bad_data_is_rejected() {
    let asym = r#"{"q": 3, "components": ["A", "B"], "M": [["-1", "2"], ["1", "-1"]]}"#;
    assert!(matches!(BadPrimeData::parse_many(asym), Err(HeightError::NotSymmetric(3))));
    let label = r#"{"q": 3, "components": ["A"], "M": [[0]], "sp_inf_plus": "Z"}"#;
    assert!(matches!(BadPrimeData::parse_many(label), Err(HeightError::UnknownComponent(_))));
    let shape = r#"{"q": 3, "components": ["A", "B"], "M": [[0]]}"#;
    assert!(matches!(BadPrimeData::parse_many(shape), Err(HeightError::Data(_))));
}

#[test]
fn json_schema_round_trip() {
    let text = r#"[{"q": 2, "Tq_override": ["0"], "generator_local_heights": {"a1": "1/2", "a2": 0}},
                   {"q": 3, "w_mod": 1, "components": ["A"], "M": [[0]]}]"#;
    let all = BadPrimeData::parse_many(text).unwrap();
    assert_eq!(all.len(), 2);
    assert_eq!(all[0].tq_override, Some(vec![BigRational::zero()]));
    assert_eq!(all[0].generator_local_heights["a1"], r(1, 2));
    assert_eq!(all[1].prime, PrimeIdeal { q: 3, w_mod: Some(1), inert: false });
}

#[test]
fn tq_on_the_worked_curve() {
    let model = CurveModel::over_q(&F44).unwrap();
    let zero = vec![BigRational::zero()];
    // bad primes 2, 3, 2027; f is not a square modulo 3 or 2027
    for q in [3, 2027] {
        assert_eq!(tq_set(&model, &PrimeIdeal::rational(q), None, None).unwrap(), zero);
    }
    // but f = (x^3 + x^2 + 1)^2 modulo 2
    assert!(is_square_mod(&model, &PrimeIdeal::rational(2)).unwrap());
    assert!(matches!(
        tq_set(&model, &PrimeIdeal::rational(2), None, None),
        Err(HeightError::MissingBadPrimeData(_))
    ));
    let over = BadPrimeData::parse_many(r#"{"q": 2, "Tq_override": [0]}"#).unwrap().remove(0);
    assert_eq!(tq_set(&model, &PrimeIdeal::rational(2), Some(&over), None).unwrap(), zero);
    for q in [5, 7, 11, 13] {
        assert_eq!(tq_set(&model, &PrimeIdeal::rational(q), None, None).unwrap(), zero);
    }
}

#[test]
fn tq_from_component_data() {
    // f = (x^2 + 5)(x^2 + 20) is x^4 modulo 5
    let model = CurveModel::over_q(&[100, 0, 25, 0, 1]).unwrap();
    let prime = PrimeIdeal::rational(5);
    let d = two_component("");
    assert_eq!(tq_set(&model, &prime, Some(&d), None).unwrap(), vec![r(-1, 1), r(0, 1), r(1, 1)]);
    assert_eq!(tq_set(&model, &prime, Some(&d), Some("(0,1)")).unwrap(), vec![r(0, 1), r(1, 1)]);
    let o = two_component(r#", "Tq_override": ["1/3"]"#);
    assert_eq!(tq_set(&model, &prime, Some(&o), None).unwrap(), vec![r(1, 3)]);
}

/// All monic polynomials of degree n over F_q[w]/(w^2 - d) squared, as residue pairs.
fn brute_squares(q: i64, d: i64, inert: bool, n: usize) -> Vec<Vec<(i64, i64)>> {
    let elems: Vec<(i64, i64)> =
        if inert { (0..q).flat_map(|a| (0..q).map(move |b| (a, b))).collect() } else { (0..q).map(|a| (a, 0)).collect() };
    let mul = |x: (i64, i64), y: (i64, i64)| ((x.0 * y.0 + d * x.1 * y.1).rem_euclid(q), (x.0 * y.1 + x.1 * y.0).rem_euclid(q));
    let mut out = Vec::new();
    let total = elems.len().pow(n as u32);
    for code in 0..total {
        let mut g = Vec::with_capacity(n + 1);
        let mut c = code;
        for _ in 0..n {
            g.push(elems[c % elems.len()]);
            c /= elems.len();
        }
        g.push((1, 0));
        let mut sq = vec![(0, 0); 2 * n + 1];
        for i in 0..=n {
            for j in 0..=n {
                let m = mul(g[i], g[j]);
                sq[i + j] = ((sq[i + j].0 + m.0).rem_euclid(q), (sq[i + j].1 + m.1).rem_euclid(q));
            }
        }
        out.push(sq);
    }
    out
}

#[test]
fn square_test_matches_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    // over Q at 3 and 2, and at primes of Q(sqrt 7): split 3, inert 5, ramified 2
    let cases: [(i64, i64, Option<u64>, bool); 5] =
        [(3, 0, None, false), (2, 0, None, false), (3, 7, Some(1), false), (5, 7, None, true), (2, 7, Some(1), false)];
    for (q, d, w_mod, inert) in cases {
        let squares = brute_squares(q, d.rem_euclid(q), inert, 2);
        let field = if d == 0 { BaseField::Rationals } else { BaseField::RealQuadratic { d } };
        for _ in 0..40 {
            let mut coeffs: Vec<QuadElem> =
                (0..4).map(|_| field.elem(r(rng.gen_range(-6..7), 1), r(if d == 0 { 0 } else { rng.gen_range(-3..4) }, 1))).collect();
            coeffs.push(field.int(1));
            if rng.gen_bool(0.3) {
                // force a square
                let a = field.elem(r(rng.gen_range(-3..4), 1), r(0, 1));
                let b = field.elem(r(rng.gen_range(-3..4), 1), r(if d == 0 { 0 } else { 1 }, 1));
                coeffs = hyperelliptic::qpoly::mul(&[b.clone(), a.clone(), field.int(1)], &[b, a, field.int(1)]);
            }
            let reduced: Vec<(i64, i64)> = coeffs
                .iter()
                .map(|c| {
                    let a = c.a.to_integer();
                    let b = c.b.to_integer();
                    let w = w_mod.map(|w| BigInt::from(w)).unwrap_or_default();
                    if inert {
                        (i(&a, q), i(&b, q))
                    } else {
                        (i(&(a + b * w), q), 0)
                    }
                })
                .collect();
            let model = CurveModel { field, f: coeffs, genus: 1, leading_sqrt: field.int(1) };
            let prime = PrimeIdeal { q: q as u64, w_mod, inert };
            assert_eq!(is_square_mod(&model, &prime).unwrap(), squares.contains(&reduced), "{reduced:?}");
        }
    }
}

fn i(a: &BigInt, q: i64) -> i64 {
    let m = a % BigInt::from(q);
    let m: i64 = m.try_into().unwrap();
    m.rem_euclid(q)
}

#[test]
fn character_values() {
    let chi = IdeleCharacter::cyclotomic(7, 12);
    assert!(chi.at_p(&Padic::from_i64(7, 7, 12)).unwrap().is_zero());
    for q in [2i64, 3, 5, 11, 2027] {
        let sum = &chi.at_uniformizer(&BigInt::from(q)).unwrap() + &Padic::from_i64(7, q, 20).log().unwrap();
        assert!(sum.val_lower() >= 12);
    }
    // over a split real quadratic field the uniformizer enters through its norm
    let nf = IdeleCharacter::split_real_quadratic(3, 10);
    let prime = PrimeIdeal { q: 2, w_mod: Some(1), inert: false };
    assert!((&nf.at_uniformizer(&prime.norm()).unwrap() + &Padic::from_i64(3, 2, 20).log().unwrap()).val_lower() >= 10);
    let inert = PrimeIdeal { q: 5, w_mod: None, inert: true };
    assert!((&nf.at_uniformizer(&inert.norm()).unwrap() + &Padic::from_i64(3, 25, 20).log().unwrap()).val_lower() >= 10);
}

#[test]
fn assemble_t_algebra() {
    let chi = IdeleCharacter::cyclotomic(7, 10);
    let zero = vec![BigRational::zero()];
    let t = assemble_t(&[(PrimeIdeal::rational(2), zero.clone()), (PrimeIdeal::rational(3), zero.clone())], &chi).unwrap();
    assert_eq!(t.len(), 1);
    assert!(t[0].is_zero());

    let t = assemble_t(&[(PrimeIdeal::rational(3), vec![r(0, 1), r(1, 2)]), (PrimeIdeal::rational(2), zero)], &chi).unwrap();
    assert_eq!(t.len(), 2);
    let expected = &Padic::from_rational(7, &BigInt::from(-1), &BigInt::from(2), 12).unwrap() * &Padic::from_i64(7, 3, 12).log().unwrap();
    assert!(t.iter().any(|v| v.is_zero()));
    assert!(t.iter().any(|v| (v - &expected).val_lower() >= 10));

    let two = vec![r(0, 1), r(1, 1)];
    let t = assemble_t(&[(PrimeIdeal::rational(3), two.clone()), (PrimeIdeal::rational(5), two)], &chi).unwrap();
    assert!(t.len() <= 4);
    assert_eq!(t.len(), 4);
    // 2 log 3 - log 9 = 0: equal sums merge
    let inert = PrimeIdeal { q: 3, w_mod: None, inert: true };
    let t = assemble_t(&[(PrimeIdeal::rational(3), vec![r(2, 1)]), (inert, vec![r(-1, 1), r(0, 1)])], &chi).unwrap();
    assert_eq!(t.len(), 2);
    assert!(t.iter().any(|v| v.is_zero()));
}
