//! Class numbers by counting wells and rivers, with sums of three squares.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{int, is_square, Int};
use crate::reduce::{self, ReduceError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassError {
    #[error("{0} is not a discriminant (must be 0 or 1 mod 4)")]
    NotDiscriminant(Int),
    #[error("discriminant {d} is not {expected}")]
    WrongRegime { d: Int, expected: &'static str },
    #[error("{0} is out of range")]
    OutOfRange(Int),
    #[error(transparent)]
    Reduce(#[from] ReduceError),
}

/// Counts of classes for one discriminant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassCount {
    pub h: Int,
    /// `None` when unbounded (discriminant 0).
    pub h_star: Option<Int>,
    /// Hurwitz class number, defined for negative discriminants.
    pub hurwitz: Option<BigRational>,
}

const LIMIT: i64 = 1 << 40;

fn small(n: &Int) -> Result<i64, ClassError> {
    n.to_i64().filter(|v| v.abs() < LIMIT).ok_or_else(|| ClassError::OutOfRange(n.clone()))
}

fn check_disc(d: i64) -> Result<(), ClassError> {
    if d.rem_euclid(4) > 1 {
        Err(ClassError::NotDiscriminant(int(d)))
    } else {
        Ok(())
    }
}

fn gcd3(e: i64, f: i64, g: i64) -> i64 {
    e.gcd(&f).gcd(&g)
}

/// Triples `e > f > g > 0` with `ef + eg + fg = n`.
fn distinct_triples(n: i64) -> impl Iterator<Item = (i64, i64, i64)> {
    (1..).take_while(move |g| 3 * g * g < n).flat_map(move |g| {
        (g + 1..).take_while(move |f| f * f + 2 * f * g < n).filter_map(move |f| {
            let num = n - f * g;
            (num % (f + g) == 0).then(|| num / (f + g)).filter(|&e| e > f).map(|e| (e, f, g))
        })
    })
}

/// Pairs `e, f > 0` with `e² + 2ef = n`.
fn isosceles_pairs(n: i64) -> impl Iterator<Item = (i64, i64)> {
    (1..).take_while(move |e| e * e < n).filter_map(move |e| {
        let rest = n - e * e;
        (rest % (2 * e) == 0).then(|| (e, rest / (2 * e)))
    })
}

/// Divisor pairs `e ≥ f > 0` with `ef = n`.
fn divisor_pairs(n: i64) -> impl Iterator<Item = (i64, i64)> {
    (1..).take_while(move |f| f * f <= n).filter(move |f| n % f == 0).map(move |f| (n / f, f))
}

fn all_odd(xs: &[i64]) -> bool {
    xs.iter().all(|x| x % 2 != 0)
}

fn well_parameter(d: i64) -> (i64, bool) {
    let odd = d % 2 != 0;
    (if odd { -d } else { -d / 4 }, odd)
}

/// Primitive class number `h(D)` for `D < 0`.
pub fn h_neg(d: &Int) -> Result<Int, ClassError> {
    let d = small(d)?;
    if d >= 0 {
        return Err(ClassError::WrongRegime { d: int(d), expected: "negative" });
    }
    check_disc(d)?;
    if d == -3 || d == -4 {
        return Ok(int(1));
    }
    let (n, odd) = well_parameter(d);
    let parity_ok = |xs: &[i64]| all_odd(xs) == odd;
    let triples = distinct_triples(n).filter(|&(e, f, g)| gcd3(e, f, g) == 1 && parity_ok(&[e, f, g])).count() as i64;
    let pairs = isosceles_pairs(n).filter(|&(e, f)| e.gcd(&f) == 1 && parity_ok(&[e, f, e])).count() as i64;
    let edges = if odd { 0 } else { divisor_pairs(n).filter(|&(e, f)| e > f && e.gcd(&f) == 1).count() as i64 };
    Ok(int(2 * triples + pairs + edges))
}

/// Weighted well count over all topographs; weights `w3` for `[e,e,e]` and
/// `w2` for `[e,0,e]`, each edge well `[e,0,f]`, `e ≠ f`, counted once.
fn all_wells(d: i64, w3: (i64, i64), w2: (i64, i64)) -> BigRational {
    let (n, odd) = well_parameter(d);
    let odd_ok = |xs: &[i64]| !odd || all_odd(xs);
    let triples = distinct_triples(n).filter(|&(e, f, g)| odd_ok(&[e, f, g])).count() as i64;
    let pairs = isosceles_pairs(n).filter(|&(e, f)| e != f && odd_ok(&[e, f])).count() as i64;
    let mut total = BigRational::from_integer(int(2 * triples + pairs));
    let r = n / 3;
    if n % 3 == 0 && is_square(&int(r)) && odd_ok(&[int_sqrt(r)]) {
        total += BigRational::new(int(w3.0), int(w3.1));
    }
    if !odd {
        for (e, f) in divisor_pairs(n) {
            total += if e == f { BigRational::new(int(w2.0), int(w2.1)) } else { BigRational::from_integer(int(1)) };
        }
    }
    total
}

fn int_sqrt(n: i64) -> i64 {
    n.to_u64().map(|v| v.isqrt() as i64).unwrap_or(0)
}

/// Number of all classes, primitive or not, for `D < 0`.
pub fn hstar_neg(d: &Int) -> Result<Int, ClassError> {
    let dd = small(d)?;
    if dd >= 0 {
        return Err(ClassError::WrongRegime { d: d.clone(), expected: "negative" });
    }
    check_disc(dd)?;
    Ok(all_wells(dd, (1, 1), (1, 1)).to_integer())
}

/// Hurwitz class number `H(n)`; zero unless `n ≡ 0, 3 (mod 4)`.
pub fn hurwitz(n: &Int) -> Result<BigRational, ClassError> {
    let nn = small(n)?;
    if nn <= 0 {
        return Err(ClassError::OutOfRange(n.clone()));
    }
    if check_disc(-nn).is_err() {
        return Ok(BigRational::zero());
    }
    Ok(all_wells(-nn, (1, 3), (1, 2)))
}

/// Euler's totient.
pub fn totient(m: u64) -> u64 {
    let mut n = m;
    let mut out = m;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            out -= out / p;
        }
        p += 1;
    }
    if n > 1 {
        out -= out / n;
    }
    out
}

/// `(h, h*)` for a square discriminant; `h*` is `None` for `D = 0`.
pub fn h_square(d: &Int) -> Result<(Int, Option<Int>), ClassError> {
    if d.is_zero() {
        return Ok((int(1), None));
    }
    if d < &Int::zero() || !is_square(d) {
        return Err(ClassError::WrongRegime { d: d.clone(), expected: "a square" });
    }
    let m = d.sqrt();
    let mu = m.to_u64().ok_or_else(|| ClassError::OutOfRange(d.clone()))?;
    Ok((int(totient(mu)), Some(m)))
}

/// Canonical cycles of the primitive classes for `D > 0` non-square.
pub fn primitive_cycles(d: &Int) -> Result<Vec<Vec<crate::forms::QuadForm>>, ClassError> {
    let dd = small(d)?;
    if dd <= 0 || is_square(d) {
        return Err(ClassError::WrongRegime { d: d.clone(), expected: "positive and non-square" });
    }
    check_disc(dd)?;
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for q in reduce::zstar_forms(d)? {
        if !q.is_primitive() {
            continue;
        }
        let cyc = reduce::reduce_simple_cycle(&q)?.canonical.forms().to_vec();
        if seen.insert(cyc.clone()) {
            out.push(cyc);
        }
    }
    out.sort();
    Ok(out)
}

/// Primitive class number for `D > 0` non-square.
pub fn h_pos(d: &Int) -> Result<Int, ClassError> {
    Ok(int(primitive_cycles(d)?.len()))
}

/// `h*` for `D > 0` non-square: the sum of `h(D/g²)` over `g² | D`.
pub fn hstar_pos(d: &Int) -> Result<Int, ClassError> {
    let dd = small(d)?;
    let mut total = Int::zero();
    let mut g = 1;
    while g * g <= dd {
        let sub = dd / (g * g);
        if dd % (g * g) == 0 && sub.rem_euclid(4) <= 1 {
            total += h_pos(&int(sub))?;
        }
        g += 1;
    }
    Ok(total)
}

/// All class counts for any nonzero discriminant.
pub fn class_count(d: &Int) -> Result<ClassCount, ClassError> {
    let dd = small(d)?;
    check_disc(dd)?;
    if dd < 0 {
        Ok(ClassCount { h: h_neg(d)?, h_star: Some(hstar_neg(d)?), hurwitz: Some(hurwitz(&int(-dd))?) })
    } else if is_square(d) {
        let (h, h_star) = h_square(d)?;
        Ok(ClassCount { h, h_star, hurwitz: None })
    } else {
        Ok(ClassCount { h: h_pos(d)?, h_star: Some(hstar_pos(d)?), hurwitz: None })
    }
}

/// Lattice points on `x² + y² + z² = n`.
pub fn r3(n: u64) -> u64 {
    r3_count(n, false)
}

/// Lattice points on `x² + y² + z² = n` with `gcd(x, y, z) = 1`.
pub fn r3_primitive(n: u64) -> u64 {
    r3_count(n, true)
}

fn r3_count(n: u64, primitive: bool) -> u64 {
    let bound = n.isqrt() as i64;
    let n = n as i64;
    let mut count = 0;
    for x in -bound..=bound {
        for y in -bound..=bound {
            let rest = n - x * x - y * y;
            if rest < 0 {
                continue;
            }
            let z = rest.isqrt();
            if z * z != rest {
                continue;
            }
            let zs: &[i64] = if z == 0 { &[0] } else { &[z, -z] };
            for &z in zs {
                if !primitive || gcd3(x.abs(), y.abs(), z.abs()) == 1 {
                    count += 1;
                }
            }
        }
    }
    count
}

fn h_of(n: u64) -> Result<BigRational, ClassError> {
    hurwitz(&int(n))
}

/// `r₃(n)` from Hurwitz class numbers.
pub fn r3_via_class(n: u64) -> Result<Int, ClassError> {
    if n == 0 {
        return Err(ClassError::OutOfRange(int(0)));
    }
    let twelve = BigRational::from_integer(int(12));
    Ok(match n % 8 {
        1 | 2 | 5 | 6 => (twelve * h_of(4 * n)?).to_integer(),
        3 => (twelve * (h_of(4 * n)? - h_of(n)? * BigInt::from(2))).to_integer(),
        7 => Int::zero(),
        _ => r3_via_class(n / 4)?,
    })
}

/// `r₃′(n)` from primitive class numbers, for `n > 3`.
pub fn r3p_via_class(n: u64) -> Result<Int, ClassError> {
    if n <= 3 {
        return Err(ClassError::OutOfRange(int(n)));
    }
    let h = |m: u64| h_neg(&-int(m));
    Ok(match n % 8 {
        1 | 2 | 5 | 6 => h(4 * n)? * 12,
        3 => (h(4 * n)? - h(n)?) * 12,
        _ => Int::zero(),
    })
}

/// Ordered nonnegative solutions of `ef + fg + ge = n`, those with a zero
/// coordinate weighted by one half.
pub fn upsilon(n: u64) -> BigRational {
    let n = n as i64;
    let mut full = 0i64;
    let mut half = 0i64;
    for e in 0..=n {
        for f in 0..=n {
            let s = e + f;
            let num = n - e * f;
            if num < 0 {
                break;
            }
            if s == 0 {
                continue;
            }
            if num % s == 0 {
                let g = num / s;
                if e == 0 || f == 0 || g == 0 {
                    half += 1;
                } else {
                    full += 1;
                }
            }
        }
    }
    BigRational::new(int(2 * full + half), int(2))
}

/// Ordered solutions of `ef + fg + ge = n` in positive odd integers.
pub fn upsilon_odd(n: u64) -> u64 {
    let n = n as i64;
    let mut count = 0;
    for e in (1..=n).step_by(2) {
        for f in (1..=n).step_by(2) {
            let num = n - e * f;
            if num <= 0 {
                break;
            }
            if num % (e + f) == 0 && (num / (e + f)) % 2 == 1 {
                count += 1;
            }
        }
    }
    count
}
