//! Quadratic forms, unimodular matrices and the moves L, R, S, U.

use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{int, is_square, ExactError, Int, Rat, Surd};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormError {
    #[error("matrix determinant {0} is not ±1")]
    BadDeterminant(Int),
    #[error("the zero form has no roots")]
    ZeroForm,
    #[error("cannot parse form {0:?}, expected a,b,c")]
    Parse(String),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// The form `ax² + bxy + cy²`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QuadForm {
    pub a: Int,
    pub b: Int,
    pub c: Int,
}

impl QuadForm {
    pub fn new(a: Int, b: Int, c: Int) -> QuadForm {
        QuadForm { a, b, c }
    }

    pub fn from_i64(a: i64, b: i64, c: i64) -> QuadForm {
        QuadForm::new(int(a), int(b), int(c))
    }

    /// `b² − 4ac`.
    pub fn discriminant(&self) -> Int {
        &self.b * &self.b - int(4) * &self.a * &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero() && self.c.is_zero()
    }

    pub fn content(&self) -> Int {
        self.a.gcd(&self.b).gcd(&self.c)
    }

    pub fn is_primitive(&self) -> bool {
        self.content().is_one()
    }

    /// `(g, q/g)` with `g` the content.
    pub fn content_split(&self) -> Result<(Int, QuadForm), FormError> {
        if self.is_zero() {
            return Err(FormError::ZeroForm);
        }
        let g = self.content();
        Ok((g.clone(), self.div_exact(&g)))
    }

    pub fn div_exact(&self, g: &Int) -> QuadForm {
        QuadForm::new(&self.a / g, &self.b / g, &self.c / g)
    }

    pub fn scale(&self, g: &Int) -> QuadForm {
        QuadForm::new(&self.a * g, &self.b * g, &self.c * g)
    }

    pub fn eval(&self, x: &Int, y: &Int) -> Int {
        &self.a * x * x + &self.b * x * y + &self.c * y * y
    }

    /// `q(αx+βy, γx+δy)`.
    pub fn act(&self, m: &UniMat) -> QuadForm {
        let (a, b, c) = (&self.a, &self.b, &self.c);
        let (al, be, ga, de) = (&m.alpha, &m.beta, &m.gamma, &m.delta);
        QuadForm::new(
            a * al * al + b * al * ga + c * ga * ga,
            int(2) * a * al * be + b * (al * de + be * ga) + int(2) * c * ga * de,
            a * be * be + b * be * de + c * de * de,
        )
    }

    pub fn l(&self) -> QuadForm {
        QuadForm::new(self.a.clone(), &self.b + int(2) * &self.a, self.head_region())
    }

    pub fn r(&self) -> QuadForm {
        QuadForm::new(self.head_region(), &self.b + int(2) * &self.c, self.c.clone())
    }

    pub fn l_inv(&self) -> QuadForm {
        QuadForm::new(self.a.clone(), &self.b - int(2) * &self.a, self.tail_region())
    }

    pub fn r_inv(&self) -> QuadForm {
        QuadForm::new(self.tail_region(), &self.b - int(2) * &self.c, self.c.clone())
    }

    pub fn s(&self) -> QuadForm {
        QuadForm::new(self.c.clone(), -&self.b, self.a.clone())
    }

    pub fn u(&self) -> QuadForm {
        QuadForm::new(self.head_region(), -&self.b - int(2) * &self.a, self.a.clone())
    }

    /// `q|L^k`, any integer `k`.
    pub fn l_pow(&self, k: &Int) -> QuadForm {
        QuadForm::new(self.a.clone(), &self.b + int(2) * k * &self.a, &self.a * k * k + &self.b * k + &self.c)
    }

    /// `q|R^k`, any integer `k`.
    pub fn r_pow(&self, k: &Int) -> QuadForm {
        QuadForm::new(&self.a + &self.b * k + &self.c * k * k, &self.b + int(2) * k * &self.c, self.c.clone())
    }

    /// `a + b + c`, the region ahead of the edge.
    pub fn head_region(&self) -> Int {
        &self.a + &self.b + &self.c
    }

    /// `a − b + c`, the region behind the edge.
    pub fn tail_region(&self) -> Int {
        &self.a - &self.b + &self.c
    }

    /// `[c, b, a]`.
    pub fn swap(&self) -> QuadForm {
        QuadForm::new(self.c.clone(), self.b.clone(), self.a.clone())
    }

    /// The two roots of `q(z, 1) = 0`.
    pub fn roots(&self) -> Result<Roots, FormError> {
        if self.is_zero() {
            return Err(FormError::ZeroForm);
        }
        let d = self.discriminant();
        if self.a.is_zero() {
            let lin = if self.b.is_zero() {
                Root::Rational(Rat::Infinity)
            } else {
                Root::Rational(Rat::new(-&self.c, self.b.clone()))
            };
            let inf = Root::Rational(Rat::Infinity);
            return Ok(if self.b.is_positive() {
                Roots { first: lin, second: inf }
            } else {
                Roots { first: inf, second: lin }
            });
        }
        let two_a = int(2) * &self.a;
        if is_square(&d) {
            let m = d.sqrt();
            Ok(Roots {
                first: Root::Rational(Rat::new(-&self.b + &m, two_a.clone())),
                second: Root::Rational(Rat::new(-&self.b - m, two_a)),
            })
        } else {
            Ok(Roots {
                first: Root::Quadratic(Surd::new(-&self.b, Int::one(), two_a.clone(), d.clone())?),
                second: Root::Quadratic(Surd::new(-&self.b, -Int::one(), two_a, d)?),
            })
        }
    }

    /// The first root `(−b+√D)/(2a)`.
    pub fn first_root(&self) -> Result<Root, FormError> {
        Ok(self.roots()?.first)
    }
}

impl std::ops::Neg for &QuadForm {
    type Output = QuadForm;
    fn neg(self) -> QuadForm {
        QuadForm::new(-&self.a, -&self.b, -&self.c)
    }
}

impl std::ops::Neg for QuadForm {
    type Output = QuadForm;
    fn neg(self) -> QuadForm {
        -&self
    }
}

impl fmt::Display for QuadForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{},{}]", self.a, self.b, self.c)
    }
}

impl FromStr for QuadForm {
    type Err = FormError;

    /// Accepts `a,b,c`, optionally wrapped in brackets.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || FormError::Parse(s.to_string());
        let t = s.trim().trim_start_matches('[').trim_end_matches(']');
        let parts: Vec<Int> =
            t.split(',').map(|p| p.trim().parse::<Int>()).collect::<Result<_, _>>().map_err(|_| bad())?;
        match <[Int; 3]>::try_from(parts) {
            Ok([a, b, c]) => Ok(QuadForm::new(a, b, c)),
            Err(_) => Err(bad()),
        }
    }
}

/// A root of a form: rational (possibly ∞) or quadratic irrational.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Root {
    Rational(Rat),
    Quadratic(Surd),
}

impl Root {
    pub fn is_infinite(&self) -> bool {
        matches!(self, Root::Rational(Rat::Infinity))
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Root::Rational(r) => r.to_f64(),
            Root::Quadratic(s) => s.to_f64(),
        }
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Root::Rational(r) => r.fmt(f),
            Root::Quadratic(s) => s.fmt(f),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Roots {
    pub first: Root,
    pub second: Root,
}

/// A 2×2 integer matrix of determinant ±1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct UniMat {
    pub alpha: Int,
    pub beta: Int,
    pub gamma: Int,
    pub delta: Int,
}

impl UniMat {
    pub fn new(alpha: Int, beta: Int, gamma: Int, delta: Int) -> Result<UniMat, FormError> {
        let m = UniMat { alpha, beta, gamma, delta };
        let det = m.det();
        if det.abs().is_one() {
            Ok(m)
        } else {
            Err(FormError::BadDeterminant(det))
        }
    }

    fn raw(alpha: Int, beta: Int, gamma: Int, delta: Int) -> UniMat {
        UniMat { alpha, beta, gamma, delta }
    }

    pub fn from_i64(a: i64, b: i64, c: i64, d: i64) -> Result<UniMat, FormError> {
        UniMat::new(int(a), int(b), int(c), int(d))
    }

    pub fn identity() -> UniMat {
        UniMat::raw(int(1), int(0), int(0), int(1))
    }

    pub fn l() -> UniMat {
        UniMat::raw(int(1), int(1), int(0), int(1))
    }

    pub fn r() -> UniMat {
        UniMat::raw(int(1), int(0), int(1), int(1))
    }

    pub fn s() -> UniMat {
        UniMat::raw(int(0), int(-1), int(1), int(0))
    }

    /// `T = L`.
    pub fn t() -> UniMat {
        UniMat::l()
    }

    /// `U = TS`.
    pub fn u() -> UniMat {
        UniMat::raw(int(1), int(-1), int(1), int(0))
    }

    pub fn l_pow(k: &Int) -> UniMat {
        UniMat::raw(int(1), k.clone(), int(0), int(1))
    }

    pub fn r_pow(k: &Int) -> UniMat {
        UniMat::raw(int(1), int(0), k.clone(), int(1))
    }

    pub fn det(&self) -> Int {
        &self.alpha * &self.delta - &self.beta * &self.gamma
    }

    pub fn trace(&self) -> Int {
        &self.alpha + &self.delta
    }

    pub fn inverse(&self) -> UniMat {
        let det = self.det();
        UniMat::raw(&self.delta * &det, -&self.beta * &det, -&self.gamma * &det, &self.alpha * &det)
    }

    pub fn is_identity_projective(&self) -> bool {
        self.beta.is_zero() && self.gamma.is_zero() && self.alpha == self.delta
    }

    /// Fractional-linear action `(αz+β)/(γz+δ)` on a surd.
    pub fn apply_surd(&self, z: &Surd) -> Result<Surd, ExactError> {
        let d = z.d().clone();
        let num = (z * &Surd::from_int(self.alpha.clone(), &d)).add_int(&self.beta);
        let den = (z * &Surd::from_int(self.gamma.clone(), &d)).add_int(&self.delta);
        num.checked_div(&den)
    }

    /// Fractional-linear action on the extended rationals.
    pub fn apply_rat(&self, z: &Rat) -> Rat {
        match z {
            Rat::Infinity => Rat::new(self.alpha.clone(), self.gamma.clone()),
            Rat::Finite(x) => {
                let (n, d) = (x.numer(), x.denom());
                Rat::new(&self.alpha * n + &self.beta * d, &self.gamma * n + &self.delta * d)
            }
        }
    }

    pub fn apply_root(&self, z: &Root) -> Result<Root, ExactError> {
        Ok(match z {
            Root::Rational(r) => Root::Rational(self.apply_rat(r)),
            Root::Quadratic(s) => Root::Quadratic(self.apply_surd(s)?),
        })
    }
}

impl Mul for &UniMat {
    type Output = UniMat;
    fn mul(self, o: &UniMat) -> UniMat {
        UniMat::raw(
            &self.alpha * &o.alpha + &self.beta * &o.gamma,
            &self.alpha * &o.beta + &self.beta * &o.delta,
            &self.gamma * &o.alpha + &self.delta * &o.gamma,
            &self.gamma * &o.beta + &self.delta * &o.delta,
        )
    }
}

impl Mul for UniMat {
    type Output = UniMat;
    fn mul(self, o: UniMat) -> UniMat {
        &self * &o
    }
}

impl fmt::Display for UniMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} {}; {} {})", self.alpha, self.beta, self.gamma, self.delta)
    }
}

/// A single move on the topograph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Letter {
    L,
    R,
    S,
}

impl Letter {
    pub fn switched(self) -> Letter {
        match self {
            Letter::L => Letter::R,
            Letter::R => Letter::L,
            Letter::S => Letter::S,
        }
    }

    pub fn matrix_pow(self, k: &Int) -> UniMat {
        match self {
            Letter::L => UniMat::l_pow(k),
            Letter::R => UniMat::r_pow(k),
            Letter::S => {
                let e = k.mod_floor(&int(4)).to_u8().unwrap_or(0);
                (0..e).fold(UniMat::identity(), |m, _| &m * &UniMat::s())
            }
        }
    }

    pub fn apply_pow(self, q: &QuadForm, k: &Int) -> QuadForm {
        match self {
            Letter::L => q.l_pow(k),
            Letter::R => q.r_pow(k),
            Letter::S => q.act(&self.matrix_pow(k)),
        }
    }

    pub fn as_bit(self) -> char {
        match self {
            Letter::L => '0',
            Letter::R => '1',
            Letter::S => 'S',
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            Letter::L => "L",
            Letter::R => "R",
            Letter::S => "S",
        };
        f.write_str(c)
    }
}

/// A word `X₁^{k₁} X₂^{k₂} ⋯` in the letters L, R, S.
///
/// Runs keep their exponents exactly as given, zeros included, so that
/// continued-fraction paths such as `L^0 R^2 L^1` print faithfully.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct TurnWord {
    runs: Vec<(Letter, Int)>,
}

impl TurnWord {
    pub fn new() -> TurnWord {
        TurnWord::default()
    }

    pub fn from_runs(runs: Vec<(Letter, Int)>) -> TurnWord {
        TurnWord { runs }
    }

    /// `L^{a₀} R^{a₁} L^{a₂} ⋯` for continued-fraction terms.
    pub fn from_cf_terms(terms: &[Int]) -> TurnWord {
        let runs = terms
            .iter()
            .enumerate()
            .map(|(i, a)| (if i % 2 == 0 { Letter::L } else { Letter::R }, a.clone()))
            .collect();
        TurnWord { runs }
    }

    /// Single letters, merged into runs.
    pub fn from_letters<I: IntoIterator<Item = Letter>>(letters: I) -> TurnWord {
        let mut w = TurnWord::new();
        for x in letters {
            w.push(x, Int::one());
        }
        w
    }

    /// Appends `x^k`, merging with the last run when the letter repeats.
    pub fn push(&mut self, x: Letter, k: Int) {
        if let Some((y, e)) = self.runs.last_mut() {
            if *y == x && x != Letter::S {
                *e += k;
                return;
            }
        }
        self.runs.push((x, k));
    }

    /// Appends `x^k` as its own run.
    pub fn push_run(&mut self, x: Letter, k: Int) {
        self.runs.push((x, k));
    }

    pub fn runs(&self) -> &[(Letter, Int)] {
        &self.runs
    }

    pub fn is_empty(&self) -> bool {
        self.runs.is_empty()
    }

    /// Letters one at a time; only meaningful for nonnegative exponents.
    pub fn letters(&self) -> Vec<Letter> {
        self.runs.iter().flat_map(|(x, k)| std::iter::repeat_n(*x, k.to_usize().unwrap_or(0))).collect()
    }

    pub fn matrix(&self) -> UniMat {
        self.runs.iter().fold(UniMat::identity(), |m, (x, k)| &m * &x.matrix_pow(k))
    }

    pub fn apply(&self, q: &QuadForm) -> QuadForm {
        self.runs.iter().fold(q.clone(), |f, (x, k)| x.apply_pow(&f, k))
    }

    pub fn concat(&self, other: &TurnWord) -> TurnWord {
        let mut runs = self.runs.clone();
        runs.extend(other.runs.iter().cloned());
        TurnWord { runs }
    }
}

impl fmt::Display for TurnWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.runs.is_empty() {
            return f.write_str("I");
        }
        for (i, (x, k)) in self.runs.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            if *x == Letter::S && k.is_one() {
                write!(f, "S")?;
            } else {
                write!(f, "{x}^{k}")?;
            }
        }
        Ok(())
    }
}

/// Product `L^{a₀} R^{a₁} ⋯` of a turn word.
pub fn turn_sequence_matrix(word: &TurnWord) -> UniMat {
    word.matrix()
}

/// Convergents `h_n/k_n` of a finite continued fraction.
pub fn convergents(terms: &[Int]) -> Vec<(Int, Int)> {
    let (mut h1, mut h2) = (Int::one(), Int::zero());
    let (mut k1, mut k2) = (Int::zero(), Int::one());
    terms
        .iter()
        .map(|a| {
            let h = a * &h1 + &h2;
            let k = a * &k1 + &k2;
            h2 = std::mem::replace(&mut h1, h.clone());
            k2 = std::mem::replace(&mut k1, k.clone());
            (h, k)
        })
        .collect()
}

/// Value of a finite continued fraction `⟨a₀, …, a_n⟩`.
pub fn cf_value(terms: &[Int]) -> Rat {
    match convergents(terms).last() {
        Some((h, k)) => Rat::new(h.clone(), k.clone()),
        None => Rat::Infinity,
    }
}
