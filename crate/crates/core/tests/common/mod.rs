//! Independent oracles shared by the integration tests and the acceptance harness.
#![allow(dead_code)]

use num_integer::Integer;
use qtopo::{int, Int, QuadForm, UniMat};
use rand::Rng;

pub fn f(a: i64, b: i64, c: i64) -> QuadForm {
    QuadForm::from_i64(a, b, c)
}

pub fn is_disc(d: i64) -> bool {
    d.rem_euclid(4) <= 1
}

fn isqrt_i64(n: i64) -> i64 {
    if n < 0 {
        return -1;
    }
    (n as u64).isqrt() as i64
}

pub fn is_square_i64(n: i64) -> bool {
    n >= 0 && {
        let r = isqrt_i64(n);
        r * r == n
    }
}

/// Primitive reduced forms `|b| ≤ a ≤ c`, `b ≥ 0` on the boundary, for `D < 0`.
pub fn brute_reduced_neg(d: i64) -> Vec<(i64, i64, i64)> {
    let n = -d;
    let mut out = Vec::new();
    let mut a = 1;
    while 3 * a * a <= n {
        for b in -a + 1..=a {
            let num = b * b + n;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a || (c == a && b < 0) {
                continue;
            }
            if a.gcd(&b).gcd(&c) == 1 {
                out.push((a, b, c));
            }
        }
        a += 1;
    }
    out
}

/// Fundamental solution of `t² − Du² = ±4` from the purely periodic continued
/// fraction of the reduced number `(s + √D)/2`, `s` the largest integer below
/// `√D` with `s ≡ D (mod 2)`. Returns `(t, u, norm)`.
pub fn pell_cf(d: i64) -> (Int, Int, i32) {
    let root = isqrt_i64(d);
    let s = if (root - d).rem_euclid(2) == 0 { root } else { root - 1 };
    let (p0, q0) = (s, 2i64);
    let (mut p, mut q) = (p0, q0);
    let (mut q_prev, mut q_cur) = (Int::from(1), Int::from(0));
    let mut len = 0;
    loop {
        let a = Integer::div_floor(&(p + root), &q);
        let next = Int::from(a) * &q_cur + &q_prev;
        q_prev = q_cur;
        q_cur = next;
        len += 1;
        p = a * q - p;
        q = (d - p * p) / q;
        if p == p0 && q == q0 {
            break;
        }
    }
    let u = q_cur.clone();
    let t = q_cur * int(s) + q_prev * int(2);
    (t, u, if len % 2 == 0 { 4 } else { -4 })
}

/// Least `u ≤ bound` with `Du² + sign` a perfect square.
pub fn pell_brute(d: i64, sign: i64, bound: i64) -> Option<(i64, i64)> {
    (1..=bound).find_map(|u| {
        let v = d * u * u + sign;
        is_square_i64(v).then(|| (isqrt_i64(v), u))
    })
}

pub fn mobius(n: u64) -> i64 {
    let mut n = n;
    let mut mu = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            mu = -mu;
        }
        p += 1;
    }
    if n > 1 {
        mu = -mu;
    }
    mu
}

/// `(1/n) Σ_{d | n} μ(n/d) 2^d`.
pub fn lyndon_count(n: u64) -> u64 {
    let total: i64 = (1..=n).filter(|d| n % d == 0).map(|d| mobius(n / d) * (1i64 << d)).sum();
    (total / n as i64) as u64
}

/// Binary strings of length `n` that are strictly least among their rotations.
pub fn lyndon_words(n: usize) -> Vec<Vec<u8>> {
    (0u32..1 << n)
        .map(|x| (0..n).map(|i| ((x >> (n - 1 - i)) & 1) as u8).collect::<Vec<u8>>())
        .filter(|w| (1..n).all(|k| w[..] < [&w[k..], &w[..k]].concat()[..]))
        .collect()
}

pub fn random_unimodular(rng: &mut impl Rng, steps: usize) -> UniMat {
    (0..steps).fold(UniMat::identity(), |m, _| {
        let k = int(rng.gen_range(-4i64..=4));
        let step = match rng.gen_range(0..3) {
            0 => UniMat::l_pow(&k),
            1 => UniMat::r_pow(&k),
            _ => UniMat::s(),
        };
        &m * &step
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Negative,
    Square,
    Positive,
}

/// A random form with `|D| ≤ bound` in the requested regime, moved away from
/// its reduced position by a random unimodular matrix.
pub fn random_form(rng: &mut impl Rng, regime: Regime, bound: i64) -> QuadForm {
    loop {
        let base = match regime {
            Regime::Square => {
                let (p, q, r, s) = (
                    rng.gen_range(-9i64..=9),
                    rng.gen_range(-9i64..=9),
                    rng.gen_range(-9i64..=9),
                    rng.gen_range(-9i64..=9),
                );
                f(p * r, p * s + q * r, q * s)
            }
            _ => f(rng.gen_range(-40..=40), rng.gen_range(-40..=40), rng.gen_range(-40..=40)),
        };
        let d = base.discriminant().to_string().parse::<i64>().unwrap_or(i64::MAX);
        let ok = match regime {
            Regime::Negative => d < 0 && -d <= bound,
            Regime::Square => d > 0 && d <= bound && is_square_i64(d),
            Regime::Positive => d > 0 && d <= bound && !is_square_i64(d),
        };
        if ok {
            return base.act(&random_unimodular(rng, 6));
        }
    }
}

/// All primitive forms of discriminant `d > 0` with `|b| ≤ bound`.
pub fn primitive_forms(d: i64, bound: i64) -> Vec<QuadForm> {
    let mut out = Vec::new();
    for b in -bound..=bound {
        let n = b * b - d;
        if n % 4 != 0 || n == 0 {
            continue;
        }
        let ac = n / 4;
        for a in 1..=ac.abs() {
            if ac % a != 0 {
                continue;
            }
            for sa in [a, -a] {
                let c = ac / sa;
                if sa.gcd(&b).gcd(&c) == 1 {
                    out.push(f(sa, b, c));
                }
            }
        }
    }
    out
}
