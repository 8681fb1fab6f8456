//! Unbounded integers, extended rationals and quadratic surds.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Unbounded signed integer.
pub type Int = BigInt;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactError {
    #[error("square root of negative integer {0}")]
    NegativeRadicand(Int),
    #[error("division by zero")]
    DivisionByZero,
    #[error("radicands differ: {0} vs {1}")]
    MixedRadicand(Int, Int),
    #[error("radicand {0} is a perfect square")]
    SquareRadicand(Int),
    #[error("operation needs a real surd, radicand is {0}")]
    NotReal(Int),
    #[error("cannot parse {0:?}")]
    Parse(String),
}

/// Shorthand for building an [`Int`].
pub fn int<T: Into<Int>>(v: T) -> Int {
    v.into()
}

/// Floor of the square root.
pub fn isqrt(n: &Int) -> Result<Int, ExactError> {
    if n.is_negative() {
        return Err(ExactError::NegativeRadicand(n.clone()));
    }
    Ok(n.sqrt())
}

pub fn is_square(n: &Int) -> bool {
    if n.is_negative() {
        return false;
    }
    let s = n.sqrt();
    &s * &s == *n
}

/// Floor division rounding toward negative infinity.
pub fn div_floor(a: &Int, b: &Int) -> Int {
    a.div_floor(b)
}

/// Ceiling division.
pub fn div_ceil(a: &Int, b: &Int) -> Int {
    -((-a).div_floor(b))
}

/// A rational number or the point at infinity of the projective line.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Rat {
    Finite(BigRational),
    Infinity,
}

impl Rat {
    pub fn new(num: Int, den: Int) -> Rat {
        if den.is_zero() {
            Rat::Infinity
        } else {
            Rat::Finite(BigRational::new(num, den))
        }
    }

    pub fn from_int(n: Int) -> Rat {
        Rat::Finite(BigRational::from_integer(n))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Rat::Infinity)
    }

    pub fn finite(&self) -> Option<&BigRational> {
        match self {
            Rat::Finite(x) => Some(x),
            Rat::Infinity => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Rat::Finite(x) => ratio_to_f64(x),
            Rat::Infinity => f64::INFINITY,
        }
    }
}

pub(crate) fn ratio_to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or_else(|| x.numer().to_f64().unwrap_or(f64::NAN) / x.denom().to_f64().unwrap_or(f64::NAN))
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rat::Finite(x) if x.is_integer() => write!(f, "{}", x.numer()),
            Rat::Finite(x) => write!(f, "{}/{}", x.numer(), x.denom()),
            Rat::Infinity => write!(f, "inf"),
        }
    }
}

impl FromStr for Rat {
    type Err = ExactError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "inf" || s == "∞" {
            return Ok(Rat::Infinity);
        }
        let bad = || ExactError::Parse(s.to_string());
        match s.split_once('/') {
            Some((n, d)) => {
                let n: Int = n.trim().parse().map_err(|_| bad())?;
                let d: Int = d.trim().parse().map_err(|_| bad())?;
                Ok(Rat::new(n, d))
            }
            None => Ok(Rat::from_int(s.parse().map_err(|_| bad())?)),
        }
    }
}

/// The quadratic number `(p + q·√d)/r`.
///
/// For `d < 0` this is the complex number `p/r + i·q·√|d|/r`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Surd {
    p: Int,
    q: Int,
    r: Int,
    d: Int,
}

impl Surd {
    pub fn new(p: Int, q: Int, r: Int, d: Int) -> Result<Surd, ExactError> {
        if r.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        if is_square(&d) {
            return Err(ExactError::SquareRadicand(d));
        }
        Ok(Surd::raw(p, q, r, d))
    }

    fn raw(p: Int, q: Int, r: Int, d: Int) -> Surd {
        let mut s = Surd { p, q, r, d };
        s.canonicalize();
        s
    }

    fn canonicalize(&mut self) {
        let g = self.p.gcd(&self.q).gcd(&self.r);
        if !g.is_one() && !g.is_zero() {
            self.p /= &g;
            self.q /= &g;
            self.r /= &g;
        }
        if self.r.is_negative() {
            self.p = -&self.p;
            self.q = -&self.q;
            self.r = -&self.r;
        }
    }

    /// The integer `n` viewed inside the field with radicand `d`.
    pub fn from_int(n: Int, d: &Int) -> Surd {
        Surd::raw(n, Int::zero(), Int::one(), d.clone())
    }

    pub fn from_ratio(x: &BigRational, d: &Int) -> Surd {
        Surd::raw(x.numer().clone(), Int::zero(), x.denom().clone(), d.clone())
    }

    /// `√d` itself.
    pub fn sqrt(d: &Int) -> Result<Surd, ExactError> {
        Surd::new(Int::zero(), Int::one(), Int::one(), d.clone())
    }

    pub fn p(&self) -> &Int {
        &self.p
    }
    pub fn q(&self) -> &Int {
        &self.q
    }
    pub fn r(&self) -> &Int {
        &self.r
    }
    pub fn d(&self) -> &Int {
        &self.d
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.q.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.d.is_positive() || self.q.is_zero()
    }

    /// Real part `p/r`.
    pub fn re(&self) -> BigRational {
        BigRational::new(self.p.clone(), self.r.clone())
    }

    /// `|z|²` for complex values, `z·z̄` in general (the field norm).
    pub fn norm(&self) -> BigRational {
        let n = &self.p * &self.p - &self.q * &self.q * &self.d;
        BigRational::new(n, &self.r * &self.r)
    }

    /// Galois conjugate `(p - q√d)/r`; complex conjugate when `d < 0`.
    pub fn conj(&self) -> Surd {
        Surd::raw(self.p.clone(), -&self.q, self.r.clone(), self.d.clone())
    }

    fn check(&self, other: &Surd) -> Result<(), ExactError> {
        if self.d != other.d && !self.q.is_zero() && !other.q.is_zero() {
            return Err(ExactError::MixedRadicand(self.d.clone(), other.d.clone()));
        }
        Ok(())
    }

    fn radicand_with(&self, other: &Surd) -> Int {
        if self.q.is_zero() {
            other.d.clone()
        } else {
            self.d.clone()
        }
    }

    pub fn checked_add(&self, other: &Surd) -> Result<Surd, ExactError> {
        self.check(other)?;
        Ok(Surd::raw(
            &self.p * &other.r + &other.p * &self.r,
            &self.q * &other.r + &other.q * &self.r,
            &self.r * &other.r,
            self.radicand_with(other),
        ))
    }

    pub fn checked_sub(&self, other: &Surd) -> Result<Surd, ExactError> {
        self.checked_add(&-other)
    }

    pub fn checked_mul(&self, other: &Surd) -> Result<Surd, ExactError> {
        self.check(other)?;
        let d = self.radicand_with(other);
        Ok(Surd::raw(
            &self.p * &other.p + &self.q * &other.q * &d,
            &self.p * &other.q + &other.p * &self.q,
            &self.r * &other.r,
            d,
        ))
    }

    pub fn checked_div(&self, other: &Surd) -> Result<Surd, ExactError> {
        self.checked_mul(&other.invert()?)
    }

    /// Exact reciprocal.
    pub fn invert(&self) -> Result<Surd, ExactError> {
        let n = &self.p * &self.p - &self.q * &self.q * &self.d;
        if n.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        Ok(Surd::raw(&self.r * &self.p, -(&self.r * &self.q), n, self.d.clone()))
    }

    pub fn add_int(&self, n: &Int) -> Surd {
        Surd::raw(&self.p + n * &self.r, self.q.clone(), self.r.clone(), self.d.clone())
    }

    pub fn pow(&self, mut e: u32) -> Surd {
        let mut base = self.clone();
        let mut acc = Surd::from_int(Int::one(), &self.d);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Exact floor of a real surd.
    pub fn floor(&self) -> Result<Int, ExactError> {
        if self.q.is_zero() {
            return Ok(div_floor(&self.p, &self.r));
        }
        if !self.d.is_positive() {
            return Err(ExactError::NotReal(self.d.clone()));
        }
        // q√d is irrational, so it lies strictly between consecutive integers.
        let s = (&self.q * &self.q * &self.d).sqrt();
        let fl = if self.q.is_positive() { s } else { -s - 1 };
        Ok(div_floor(&(&self.p + fl), &self.r))
    }

    /// Exact ceiling of a real surd.
    pub fn ceil(&self) -> Result<Int, ExactError> {
        Ok(-(-self).floor()?)
    }

    /// Three-way comparison of a real surd with a finite rational.
    pub fn cmp_ratio(&self, y: &BigRational) -> Result<Ordering, ExactError> {
        if !self.q.is_zero() && !self.d.is_positive() {
            return Err(ExactError::NotReal(self.d.clone()));
        }
        // (p + q√d)/r ? n/m  <=>  m·q·√d ? n·r − m·p
        let (n, m) = (y.numer(), y.denom());
        let lhs = m * &self.q;
        let rhs = n * &self.r - m * &self.p;
        Ok(cmp_sqrt_term(&lhs, &self.d, &rhs))
    }

    /// Comparison with an extended rational; every finite value is below ∞.
    pub fn cmp_rat(&self, y: &Rat) -> Result<Ordering, ExactError> {
        match y {
            Rat::Finite(y) => self.cmp_ratio(y),
            Rat::Infinity => Ok(Ordering::Less),
        }
    }

    /// Comparison of two real surds in the same field.
    pub fn cmp_real(&self, other: &Surd) -> Result<Ordering, ExactError> {
        self.checked_sub(other)?.cmp_ratio(&BigRational::zero())
    }

    pub fn to_f64(&self) -> f64 {
        let (re, im) = self.to_complex_f64();
        if self.d.is_negative() && !self.q.is_zero() {
            f64::NAN.copysign(im)
        } else {
            re
        }
    }

    /// `(re, im)` as floats.
    pub fn to_complex_f64(&self) -> (f64, f64) {
        let r = self.r.to_f64().unwrap_or(f64::NAN);
        let p = self.p.to_f64().unwrap_or(f64::NAN);
        let q = self.q.to_f64().unwrap_or(f64::NAN);
        let root = self.d.abs().to_f64().unwrap_or(f64::NAN).sqrt();
        if self.d.is_negative() {
            (p / r, q * root / r)
        } else {
            ((p + q * root) / r, 0.0)
        }
    }
}

/// Sign of `l·√d − rhs` for `d > 0`, never zero unless both sides vanish.
fn cmp_sqrt_term(l: &Int, d: &Int, rhs: &Int) -> Ordering {
    let ls = l.sign();
    let rs = rhs.sign();
    match (ls, rs) {
        (Sign::NoSign, _) => Int::zero().cmp(rhs),
        (Sign::Plus, Sign::Minus | Sign::NoSign) => Ordering::Greater,
        (Sign::Minus, Sign::Plus | Sign::NoSign) => Ordering::Less,
        (Sign::Plus, Sign::Plus) => (l * l * d).cmp(&(rhs * rhs)),
        (Sign::Minus, Sign::Minus) => (rhs * rhs).cmp(&(l * l * d)),
    }
}

impl Neg for &Surd {
    type Output = Surd;
    fn neg(self) -> Surd {
        Surd::raw(-&self.p, -&self.q, self.r.clone(), self.d.clone())
    }
}

impl Neg for Surd {
    type Output = Surd;
    fn neg(self) -> Surd {
        -&self
    }
}

macro_rules! surd_binop {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl $tr for &Surd {
            type Output = Surd;
            /// Panics on mixed radicands; use the `checked_` variant to handle that case.
            fn $m(self, rhs: &Surd) -> Surd {
                self.$checked(rhs).expect("surds over the same radicand")
            }
        }
        impl $tr for Surd {
            type Output = Surd;
            fn $m(self, rhs: Surd) -> Surd {
                (&self).$m(&rhs)
            }
        }
    };
}

surd_binop!(Add, add, checked_add);
surd_binop!(Sub, sub, checked_sub);
surd_binop!(Mul, mul, checked_mul);

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let num = if self.q.is_zero() {
            format!("{}", self.p)
        } else {
            let rad = format!("sqrt({})", self.d);
            let qpart = if self.q.is_one() {
                rad
            } else if self.q == -Int::one() {
                format!("-{rad}")
            } else {
                format!("{}*{rad}", self.q)
            };
            if self.p.is_zero() {
                qpart
            } else if self.q.is_positive() {
                format!("{}+{qpart}", self.p)
            } else {
                format!("{}{qpart}", self.p)
            }
        };
        if self.r.is_one() {
            write!(f, "{num}")
        } else {
            write!(f, "({num})/{}", self.r)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(p: i64, q: i64, r: i64, d: i64) -> Surd {
        Surd::new(int(p), int(q), int(r), int(d)).unwrap()
    }

    #[test]
    fn isqrt_examples() {
        assert_eq!(isqrt(&int(0)).unwrap(), int(0));
        assert_eq!(isqrt(&int(96)).unwrap(), int(9));
        assert_eq!(isqrt(&int(21316)).unwrap(), int(146));
        assert!(isqrt(&int(-1)).is_err());
    }

    #[test]
    fn squares() {
        assert!(is_square(&int(324)));
        assert!(!is_square(&int(96)));
        assert!(!is_square(&int(-4)));
        assert!(is_square(&int(0)));
    }

    #[test]
    fn floors() {
        assert_eq!(s(-3, 1, 2, 5).floor().unwrap(), int(-1));
        assert_eq!(s(0, 1, 1, 2).floor().unwrap(), int(1));
        assert_eq!(s(36, 0, 94, 20).floor().unwrap(), int(0));
        assert_eq!(s(0, -1, 1, 2).floor().unwrap(), int(-2));
        assert_eq!(s(0, 1, 1, 2).ceil().unwrap(), int(2));
    }

    #[test]
    fn inverses() {
        let x = s(3, 1, 2, 5);
        let y = x.invert().unwrap();
        assert_eq!(y, s(3, -1, 2, 5));
        assert_eq!(&x * &y, Surd::from_int(int(1), &int(5)));
        let z = s(0, 1, 2, -20);
        let w = z.invert().unwrap();
        assert_eq!(w, s(0, -1, 10, -20));
        assert_eq!(&z * &w, Surd::from_int(int(1), &int(-20)));
        let one = s(1, 0, 1, 2);
        assert_eq!(one.invert().unwrap(), one);
        assert!(s(0, 0, 1, 2).invert().is_err());
    }

    #[test]
    fn comparisons() {
        let r5 = s(0, 1, 1, 5);
        let two = BigRational::from_integer(int(2));
        let three = BigRational::from_integer(int(3));
        assert_eq!(r5.cmp_ratio(&two).unwrap(), Ordering::Greater);
        assert_eq!(r5.cmp_ratio(&three).unwrap(), Ordering::Less);
        let x = s(-3, 1, 2, 5);
        assert_eq!(x.cmp_ratio(&BigRational::new(int(-1), int(2))).unwrap(), Ordering::Greater);
        assert_eq!(x.cmp_rat(&Rat::Infinity).unwrap(), Ordering::Less);
    }

    #[test]
    fn canonical_form() {
        let x = s(2, 4, -6, 7);
        assert_eq!((x.p(), x.q(), x.r()), (&int(-1), &int(-2), &int(3)));
        assert!(Surd::new(int(1), int(1), int(1), int(9)).is_err());
        assert!(s(1, 1, 1, 2).checked_add(&s(1, 1, 1, 3)).is_err());
    }

    #[test]
    fn rat_parse_print() {
        for t in ["-7/18", "3", "inf", "0"] {
            let r: Rat = t.parse().unwrap();
            assert_eq!(r.to_string(), t);
        }
        assert_eq!("4/-6".parse::<Rat>().unwrap().to_string(), "-2/3");
    }
}
