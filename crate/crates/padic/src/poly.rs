//! Dense polynomials over Q_p, coefficient lists with the constant term first.

use crate::number::Padic;

pub type PPoly = Vec<Padic>;

pub fn zero_poly() -> PPoly {
    Vec::new()
}

/// Drop trailing exact zeros.
pub fn trim(mut a: PPoly) -> PPoly {
    while a.last().is_some_and(|c| c.is_exact_zero()) {
        a.pop();
    }
    a
}

pub fn add(a: &[Padic], b: &[Padic]) -> PPoly {
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let mut out = long.to_vec();
    for (o, s) in out.iter_mut().zip(short) {
        *o = &*o + s;
    }
    out
}

pub fn sub(a: &[Padic], b: &[Padic]) -> PPoly {
    let neg: PPoly = b.iter().map(|c| -c).collect();
    add(a, &neg)
}

pub fn scale(a: &[Padic], c: &Padic) -> PPoly {
    a.iter().map(|x| x * c).collect()
}

pub fn mul(a: &[Padic], b: &[Padic]) -> PPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let p = a[0].prime();
    let mut out = vec![Padic::exact_zero(p); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_exact_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = &out[i + j] + &(x * y);
        }
    }
    out
}

/// Product truncated to the first `n` coefficients.
pub fn mul_trunc(a: &[Padic], b: &[Padic], n: usize) -> PPoly {
    if a.is_empty() || b.is_empty() || n == 0 {
        return Vec::new();
    }
    let p = a[0].prime();
    let len = (a.len() + b.len() - 1).min(n);
    let mut out = vec![Padic::exact_zero(p); len];
    for (i, x) in a.iter().enumerate().take(len) {
        if x.is_exact_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            out[i + j] = &out[i + j] + &(x * y);
        }
    }
    out
}

pub fn deriv(a: &[Padic]) -> PPoly {
    if a.len() <= 1 {
        return Vec::new();
    }
    let p = a[0].prime();
    a.iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * &Padic::from_i64(p, i as i64, 64))
        .collect()
}

pub fn eval(a: &[Padic], x: &Padic) -> Padic {
    let p = x.prime();
    let mut acc = Padic::exact_zero(p);
    for c in a.iter().rev() {
        acc = &(&acc * x) + c;
    }
    acc
}

/// Division with remainder by a monic polynomial.
pub fn divmod_monic(a: &[Padic], f: &[Padic]) -> (PPoly, PPoly) {
    let n = f.len() - 1;
    if a.len() <= n {
        return (Vec::new(), a.to_vec());
    }
    let mut r = a.to_vec();
    let mut q = vec![Padic::exact_zero(f[0].prime()); a.len() - n];
    for d in (0..q.len()).rev() {
        let c = r[d + n].clone();
        if !c.is_exact_zero() {
            for (i, fi) in f.iter().enumerate().take(n) {
                r[d + i] = &r[d + i] - &(&c * fi);
            }
        }
        q[d] = c;
    }
    r.truncate(n);
    (q, r)
}

/// Coefficients of a(x + c).
pub fn taylor_shift(a: &[Padic], c: &Padic) -> PPoly {
    let mut out = a.to_vec();
    let n = out.len();
    // repeated synthetic division
    for i in 0..n {
        for j in (i..n - 1).rev() {
            let t = &out[j + 1] * c;
            out[j] = &out[j] + &t;
        }
    }
    out
}
