use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use padic::{Padic, PadicPowerSeries};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const PRIMES: [u64; 4] = [3, 5, 7, 11];
const N: u32 = 12;

fn modulus(p: u64, n: u32) -> BigInt {
    BigInt::from(p).pow(n)
}

/// a/b mod p^n by plain modular arithmetic.
fn oracle_rational(p: u64, a: i64, b: i64, n: u32) -> BigInt {
    let m = modulus(p, n);
    let inv = BigInt::from(b).mod_floor(&m).modinv(&m).unwrap();
    (BigInt::from(a) * inv).mod_floor(&m)
}

fn unit(rng: &mut ChaCha8Rng, p: u64) -> i64 {
    loop {
        let a: i64 = rng.gen_range(-5000..5000);
        if a % p as i64 != 0 {
            return a;
        }
    }
}

#[test]
fn field_operations_match_modular_arithmetic() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for &p in &PRIMES {
        for _ in 0..200 {
            let (a, b, c, d) = (rng.gen_range(-5000..5000), unit(&mut rng, p), rng.gen_range(-5000..5000), unit(&mut rng, p));
            let x = Padic::from_rational(p, &a.into(), &b.into(), N).unwrap();
            let y = Padic::from_rational(p, &c.into(), &d.into(), N).unwrap();
            let m = modulus(p, N);
            let sum = (oracle_rational(p, a, b, N) + oracle_rational(p, c, d, N)).mod_floor(&m);
            let prod = (oracle_rational(p, a, b, N) * oracle_rational(p, c, d, N)).mod_floor(&m);
            assert_eq!((&x + &y).residue_mod(N as i64).unwrap(), sum);
            assert_eq!((&x - &y).residue_mod(N as i64).unwrap(), (oracle_rational(p, a, b, N) - oracle_rational(p, c, d, N)).mod_floor(&m));
            // products of nonunits carry more than N digits
            let xy = &x * &y;
            if xy.abs_precision() >= N as i64 {
                assert_eq!(xy.residue_mod(N as i64).unwrap(), prod);
            }
            if c % p as i64 != 0 {
                let q = x.checked_div(&y).unwrap();
                assert_eq!(q.residue_mod(N as i64).unwrap(), oracle_rational(p, a * d, b * c, N));
            }
        }
    }
}

#[test]
fn precision_is_tracked_pessimistically() {
    let p = 5;
    let a = Padic::from_i64(p, 1, 10);
    let b = Padic::from_i64(p, 1 + 5i64.pow(6), 10);
    let d = &b - &a;
    assert_eq!(d.valuation(), Some(6));
    assert_eq!(d.abs_precision(), 10);
    assert_eq!(d.rel_precision(), 4);
    let q = Padic::one(p, 10).checked_div(&d).unwrap();
    assert_eq!(q.valuation(), Some(-6));
    assert_eq!(q.rel_precision(), 4);
    let z = &a - &a;
    assert!(z.is_zero() && !z.is_exact_zero());
    assert!(z.checked_inv().is_err());
}

/// log(u) for u = 1 mod p from the series sum (-1)^(k+1) (u-1)^k / k.
fn oracle_log(p: u64, u: &BigInt, n: u32) -> BigInt {
    let big = n + 10;
    let m = modulus(p, big);
    let z = u - BigInt::one();
    let pb = BigInt::from(p);
    let mut acc = BigInt::zero();
    let mut zk = BigInt::one();
    for k in 1..(3 * big as u64) {
        zk *= &z;
        let mut kk = BigInt::from(k);
        let mut term = zk.clone();
        while kk.is_multiple_of(&pb) {
            kk /= &pb;
            term /= &pb;
        }
        let term = term * kk.modinv(&m).unwrap();
        if k % 2 == 1 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc.mod_floor(&modulus(p, n))
}

#[test]
fn logarithm_matches_series_and_is_a_homomorphism() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for &p in &PRIMES {
        for _ in 0..40 {
            let u = 1 + p as i64 * rng.gen_range(-300..300);
            let got = Padic::from_i64(p, u, N).log().unwrap();
            assert_eq!(got.residue_mod(N as i64).unwrap(), oracle_log(p, &BigInt::from(u), N), "p={p} u={u}");

            let a = Padic::from_i64(p, unit(&mut rng, p), N);
            let b = Padic::from_i64(p, unit(&mut rng, p), N);
            let lhs = (&a * &b).log().unwrap();
            let rhs = &a.log().unwrap() + &b.log().unwrap();
            assert!(lhs.eq_within(&rhs));
            // log of p-power times a unit ignores the p-power
            let pa = a.shift(3);
            assert!(pa.log().unwrap().eq_within(&a.log().unwrap()));
        }
        assert!(Padic::teichmuller(p, 2, N as i64).log().unwrap().is_zero());
    }
}

#[test]
fn square_roots_square_back() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for &p in &PRIMES {
        for _ in 0..100 {
            let a = Padic::from_i64(p, unit(&mut rng, p), N).shift(2 * rng.gen_range(-2..3));
            let u = a.unit() % BigInt::from(p);
            let qr = (1..p).any(|x| BigInt::from(x * x % p) == u);
            match a.sqrt() {
                Some(s) => {
                    assert!(qr);
                    assert!((&s * &s).eq_within(&a));
                    assert_eq!(s.valuation().unwrap() * 2, a.valuation().unwrap());
                }
                None => assert!(!qr),
            }
        }
        assert!(Padic::from_i64(p, p as i64, N).sqrt().is_none());
    }
}

#[test]
fn teichmuller_lifts_are_roots_of_unity() {
    for &p in &PRIMES {
        for r in 1..p {
            let t = Padic::teichmuller(p, r, N as i64);
            assert_eq!(t.residue(), Some(r));
            assert!(t.pow(p - 1).eq_within(&Padic::one(p, N)));
        }
    }
}

fn random_series(rng: &mut ChaCha8Rng, p: u64, len: usize) -> PadicPowerSeries {
    let coeffs = (0..len).map(|_| Padic::from_i64(p, rng.gen_range(-1000..1000), N)).collect();
    PadicPowerSeries::polynomial(p, coeffs)
}

#[test]
fn integration_inverts_differentiation() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for &p in &PRIMES {
        for _ in 0..30 {
            let n = rng.gen_range(1..30);
            let f = random_series(&mut rng, p, n);
            let back = f.integrate().derivative();
            assert_eq!(back.order(), f.order());
            for k in 0..f.order() {
                assert!(back.coeff(k).eq_within(&f.coeff(k)), "p={p} k={k}");
            }
            assert!(f.integrate().coeff(0).is_exact_zero());
        }
    }
}

#[test]
fn integral_of_power_loses_digits_of_its_index() {
    let p = 5;
    let mut c = vec![Padic::exact_zero(p); 25];
    c[24] = Padic::one(p, N);
    let f = PadicPowerSeries::polynomial(p, c).integrate();
    assert_eq!(f.coeff(25).valuation(), Some(-2));
    assert_eq!(f.coeff(25).rel_precision(), N as i64);
}

#[test]
fn series_products_evaluate_as_products() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for &p in &PRIMES {
        for _ in 0..20 {
            let n = rng.gen_range(1..8);
            let f = random_series(&mut rng, p, n);
            let n = rng.gen_range(1..8);
            let g = random_series(&mut rng, p, n);
            let t = Padic::from_i64(p, p as i64 * rng.gen_range(-50..50), N);
            let lhs = f.mul(&g).eval(&t);
            let rhs = &f.eval(&t) * &g.eval(&t);
            assert!(lhs.eq_within(&rhs));
            assert!(f.add(&g).eval(&t).eq_within(&(&f.eval(&t) + &g.eval(&t))));
        }
    }
}
