#![allow(dead_code)]

use coleman::{Cohomology, Frobenius, Integrator};
use hyperelliptic::{CurveModel, LocalCurve};
use padic::Padic;

pub const F44: [i64; 7] = [9, 20, 2, -18, -7, 2, 1];

pub struct Setup {
    pub curve: LocalCurve,
    pub cohomology: Cohomology,
    pub integrator: Integrator,
}

pub fn setup(f: &[i64], p: u64, digits: u32) -> Setup {
    let model = CurveModel::over_q(f).unwrap();
    let curve = LocalCurve::from_model(&model, p, 0, digits).unwrap();
    let frob = Frobenius::compute(&curve, digits).unwrap();
    let cohomology = Cohomology::new(&curve, &frob, digits).unwrap();
    let integrator = Integrator::new(curve.clone(), frob, digits).unwrap();
    Setup { curve, cohomology, integrator }
}

fn rem(a: i64, p: i64) -> i64 {
    a.rem_euclid(p)
}

/// Elements a + b i of F_p[i]/(i^2 - r).
#[derive(Clone, Copy, PartialEq, Eq)]
struct Fq {
    a: i64,
    b: i64,
}

fn fq_mul(x: Fq, y: Fq, p: i64, r: i64) -> Fq {
    Fq { a: rem(x.a * y.a + r * x.b * y.b, p), b: rem(x.a * y.b + x.b * y.a, p) }
}

fn fq_eval(f: &[i64], x: Fq, p: i64, r: i64) -> Fq {
    f.iter().rev().fold(Fq { a: 0, b: 0 }, |acc, &c| {
        let m = fq_mul(acc, x, p, r);
        Fq { a: rem(m.a + c, p), b: m.b }
    })
}

/// Projective point counts over F_p and F_{p^2} for monic f, by listing
/// every pair (x, y).
pub fn brute_counts(f: &[i64], p: u64) -> (i64, i64) {
    let p = p as i64;
    let mut n1 = 2;
    for x in 0..p {
        let v = rem(f.iter().rev().fold(0, |acc, &c| rem(acc * x + c, p)), p);
        n1 += (0..p).filter(|y| y * y % p == v).count() as i64;
    }
    let r = (2..p).find(|r| (0..p).all(|s| s * s % p != *r)).unwrap();
    let elems: Vec<Fq> = (0..p).flat_map(|a| (0..p).map(move |b| Fq { a, b })).collect();
    let mut squares = std::collections::HashMap::new();
    for &y in &elems {
        *squares.entry((fq_mul(y, y, p, r).a, fq_mul(y, y, p, r).b)).or_insert(0i64) += 1;
    }
    let mut n2 = 2;
    for &x in &elems {
        let v = fq_eval(f, x, p, r);
        n2 += squares.get(&(v.a, v.b)).copied().unwrap_or(0);
    }
    (n1, n2)
}

/// Characteristic polynomial of Frobenius, constant term first, from point counts.
pub fn charpoly_from_counts(genus: usize, p: u64, n1: i64, n2: i64) -> Vec<i64> {
    let p = p as i64;
    let s1 = p + 1 - n1;
    match genus {
        1 => vec![p, -s1, 1],
        2 => {
            let s2 = (n2 - p * p - 1 + s1 * s1) / 2;
            vec![p * p, -p * s1, s2, -s1, 1]
        }
        _ => unimplemented!(),
    }
}

pub fn int(p: u64, n: i64) -> Padic {
    Padic::from_i64(p, n, 40)
}

/// a == b to the precision both carry, and that precision reaches `need`.
pub fn agree(a: &Padic, b: &Padic, need: i64) -> bool {
    let d = a - b;
    d.is_zero() && d.abs_precision() >= need
}
