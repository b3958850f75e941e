use num_bigint::BigInt;
use num_integer::Integer;
use padic::{solve_separated, solve_single, strassmann_bound, Padic, PadicPowerSeries, SeparatedSystem, SolverConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const N: u32 = 24;

fn poly_mul(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0i64; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn series(p: u64, c: &[i64]) -> PadicPowerSeries {
    PadicPowerSeries::polynomial(p, c.iter().map(|&x| Padic::from_i64(p, x, N)).collect())
}

/// A random polynomial with prescribed zeros on pZ_p.
struct Planted {
    coeffs: Vec<i64>,
    /// Zeros in pZ_p with their multiplicities.
    inside: Vec<(i64, usize)>,
}

fn planted(rng: &mut ChaCha8Rng, p: u64) -> Planted {
    let pi = p as i64;
    let mut coeffs = vec![rng.gen_range(1..4) * pi.pow(rng.gen_range(0..3))];
    let mut inside: Vec<(i64, usize)> = Vec::new();
    for _ in 0..rng.gen_range(0..4) {
        // distinct mod p^3
        let r = pi * rng.gen_range(-4..=4);
        if inside.iter().any(|(s, _)| *s == r) {
            continue;
        }
        let m = if rng.gen_bool(0.2) { 2 } else { 1 };
        for _ in 0..m {
            coeffs = poly_mul(&coeffs, &[-r, 1]);
        }
        inside.push((r, m));
    }
    // zeros off pZ_p
    for _ in 0..rng.gen_range(0..3) {
        let s = loop {
            let s = rng.gen_range(-9..=9);
            if s % pi != 0 {
                break s;
            }
        };
        coeffs = poly_mul(&coeffs, &[-s, 1]);
    }
    // a factor with no zeros on pZ_p
    let unit: Vec<i64> = std::iter::once(1).chain((0..rng.gen_range(0..3)).map(|_| rng.gen_range(-3..=3))).collect();
    coeffs = poly_mul(&coeffs, &unit);
    Planted { coeffs, inside }
}

#[test]
fn strassmann_bound_counts_planted_zeros() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut seen = 0;
    for &p in [3u64, 5, 7].iter().cycle().take(150) {
        let pl = planted(&mut rng, p);
        let f = series(p, &pl.coeffs);
        let expected: usize = pl.inside.iter().map(|(_, m)| m).sum();
        assert_eq!(strassmann_bound(&f).unwrap(), expected, "{:?}", pl.coeffs);
        seen += 1;
    }
    assert!(seen >= 100);
}

#[test]
fn solver_finds_exactly_the_planted_classes() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for &p in [3u64, 5, 7].iter().cycle().take(120) {
        let pl = planted(&mut rng, p);
        let k = 3;
        let pk = BigInt::from(p).pow(k as u32);
        let mut planted_classes: Vec<BigInt> = pl.inside.iter().map(|(r, _)| BigInt::from(*r).mod_floor(&pk)).collect();
        planted_classes.sort();
        let mut found: Vec<BigInt> = solve_single(&series(p, &pl.coeffs), &SolverConfig::default())
            .roots
            .iter()
            .map(|r| r.coords[0].residue_mod(k).unwrap())
            .collect();
        found.sort();
        assert_eq!(found, planted_classes, "{:?}", pl.coeffs);
    }
}

#[test]
fn simple_zeros_are_certified_and_double_zeros_are_not() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for &p in [3u64, 5, 7].iter().cycle().take(100) {
        let pl = planted(&mut rng, p);
        let report = solve_single(&series(p, &pl.coeffs), &SolverConfig::default());
        for (r, m) in &pl.inside {
            let hits: Vec<_> = report.roots.iter().filter(|x| x.coords[0].residue_mod(3).unwrap() == BigInt::from(*r).mod_floor(&BigInt::from(p.pow(3)))).collect();
            assert_eq!(hits.len(), 1);
            if *m == 1 {
                assert!(hits[0].certified);
                assert!(hits[0].coords[0].eq_within(&Padic::from_i64(p, *r, N)));
                assert!(hits[0].coords[0].abs_precision() >= 10);
            } else {
                assert!(!hits[0].certified);
            }
        }
    }
}

#[test]
fn separated_linear_system_matches_linear_algebra() {
    // a + A z = 0 with A invertible mod p has the single zero -A^(-1) a
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for &p in &[3u64, 5, 7] {
        let mut done = 0;
        while done < 10 {
            let a: [[i64; 2]; 2] = [[rng.gen_range(-9..9), rng.gen_range(-9..9)], [rng.gen_range(-9..9), rng.gen_range(-9..9)]];
            let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
            if det % p as i64 == 0 {
                continue;
            }
            let z = [p as i64 * rng.gen_range(-20..20), p as i64 * rng.gen_range(-20..20)];
            let constants = (0..2).map(|k| Padic::from_i64(p, -(a[k][0] * z[0] + a[k][1] * z[1]), N)).collect();
            let blocks = (0..2).map(|k| (0..2).map(|j| series(p, &[0, a[k][j]])).collect()).collect();
            let report = solve_separated(&SeparatedSystem { constants, blocks }, &SolverConfig::default()).unwrap();
            assert_eq!(report.jacobian_unit, Some(true));
            assert_eq!(report.roots.len(), 1);
            assert!(report.all_certified());
            for j in 0..2 {
                assert!(report.roots[0].coords[j].eq_within(&Padic::from_i64(p, z[j], N)));
            }
            done += 1;
        }
    }
}

#[test]
fn separated_nonlinear_system_recovers_planted_root() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for &p in [3u64, 5, 7].iter().cycle().take(30) {
        let d = 2;
        let target: Vec<i64> = (0..d).map(|_| p as i64 * rng.gen_range(-5..5)).collect();
        let blocks: Vec<Vec<PadicPowerSeries>> = (0..d)
            .map(|_| (0..d).map(|_| series(p, &[0, rng.gen_range(-9..9), rng.gen_range(-9..9), rng.gen_range(-9..9)])).collect())
            .collect();
        let zt: Vec<Padic> = target.iter().map(|&x| Padic::from_i64(p, x, N)).collect();
        let constants: Vec<Padic> = blocks
            .iter()
            .map(|row| -row.iter().zip(&zt).fold(Padic::exact_zero(p), |acc, (f, z)| &acc + &f.eval(z)))
            .collect();
        let sys = SeparatedSystem { constants, blocks };
        let report = solve_separated(&sys, &SolverConfig::default()).unwrap();
        let hit = report.roots.iter().find(|r| r.coords.iter().zip(&zt).all(|(a, b)| a.residue_mod(2) == b.residue_mod(2))).expect("planted root");
        if hit.certified {
            assert!(hit.coords.iter().zip(&zt).all(|(a, b)| a.eq_within(b)));
        }
        for r in report.certified() {
            assert!(sys.eval(&r.coords).iter().all(|v| v.is_zero()));
        }
    }
}
