//! Point counts of the reduction over F_p and F_{p^2}.

fn legendre(a: u64, p: u64) -> i64 {
    let a = a % p;
    if a == 0 {
        return 0;
    }
    if modpow(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

fn modpow(b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u128;
    let mut base = (b % m) as u128;
    let m128 = m as u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m128;
        }
        base = base * base % m128;
        e >>= 1;
    }
    acc as u64
}

fn eval_mod(f: &[u64], x: u64, p: u64) -> u64 {
    f.iter().rev().fold(0u128, |acc, &c| (acc * x as u128 + c as u128) % p as u128) as u64
}

/// Points at infinity of y^2 = f(x) with deg f even: two, one or zero.
fn points_at_infinity(lead: u64, q_is_square: impl Fn(u64) -> i64) -> u64 {
    (1 + q_is_square(lead)) as u64
}

/// #X(F_p) for y^2 = f(x), f given mod p, constant first, even degree.
pub fn count_fp(f: &[u64], p: u64) -> u64 {
    let affine: i64 = (0..p).map(|x| 1 + legendre(eval_mod(f, x, p), p)).sum();
    affine as u64 + points_at_infinity(*f.last().unwrap(), |a| legendre(a, p))
}

/// F_{p^2} as F_p[s] / (s^2 - n) with n a non-residue.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Fp2 {
    a: u64,
    b: u64,
}

fn non_residue(p: u64) -> u64 {
    (2..p).find(|&n| legendre(n, p) == -1).expect("odd prime")
}

fn fp2_mul(x: Fp2, y: Fp2, n: u64, p: u64) -> Fp2 {
    let m = |u: u64, v: u64| (u as u128 * v as u128 % p as u128) as u64;
    Fp2 { a: (m(x.a, y.a) + m(m(x.b, y.b), n)) % p, b: (m(x.a, y.b) + m(x.b, y.a)) % p }
}

/// #X(F_{p^2}).  An element of F_{p^2} is a square iff its norm is a square in F_p.
pub fn count_fp2(f: &[u64], p: u64) -> u64 {
    let n = non_residue(p);
    let mut affine = 0i64;
    for a in 0..p {
        for b in 0..p {
            let x = Fp2 { a, b };
            let mut v = Fp2 { a: 0, b: 0 };
            for &c in f.iter().rev() {
                v = fp2_mul(v, x, n, p);
                v.a = (v.a + c) % p;
            }
            let norm = ((v.a as u128 * v.a as u128 + (p as u128 - (v.b as u128 * v.b as u128 % p as u128) * n as u128 % p as u128)) % p as u128) as u64;
            affine += if v.a == 0 && v.b == 0 { 1 } else if legendre(norm, p) == 1 { 2 } else { 0 };
        }
    }
    // every element of F_p is a square in F_{p^2}
    affine as u64 + 2
}

/// Coefficients of the degree-2g L-polynomial P(T) = prod (1 - a_i T), lowest degree first,
/// for genus 1 and 2 from the counts over F_p and F_{p^2}.
pub fn l_polynomial(genus: usize, p: u64, n1: u64, n2: u64) -> Option<Vec<i64>> {
    let p = p as i64;
    let s1 = p + 1 - n1 as i64;
    let s2 = p * p + 1 - n2 as i64;
    match genus {
        1 => Some(vec![1, -s1, p]),
        2 => {
            let c2 = (s1 * s1 - s2) / 2;
            Some(vec![1, -s1, c2, -p * s1, p * p])
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_for_the_worked_curve() {
        let f: Vec<u64> = [9i64, 20, 2, -18, -7, 2, 1].iter().map(|c| c.rem_euclid(7) as u64).collect();
        assert_eq!(count_fp(&f, 7), 12);
    }
}
