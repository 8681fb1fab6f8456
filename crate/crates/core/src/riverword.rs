//! River periods, Pell units, automorphs, and the necklace and word
//! encodings of topographs.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classnum::{self, ClassError};
use crate::exact::{int, is_square, ExactError, Int, Surd};
use crate::forms::{FormError, Letter, QuadForm, TurnWord, UniMat};
use crate::reduce::{self, ReduceError};
use crate::topograph::{self, TopoError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RiverError {
    #[error("discriminant {d} is not {expected}")]
    WrongRegime { d: Int, expected: &'static str },
    #[error("{0} is not primitive")]
    Imprimitive(QuadForm),
    #[error("invalid necklace: {0}")]
    Necklace(String),
    #[error("invalid binary word: {0}")]
    Word(String),
    #[error(transparent)]
    Topo(#[from] TopoError),
    #[error(transparent)]
    Reduce(#[from] ReduceError),
    #[error(transparent)]
    Class(#[from] ClassError),
    #[error(transparent)]
    Form(#[from] FormError),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

fn bit(x: Letter) -> u8 {
    match x {
        Letter::R => 1,
        _ => 0,
    }
}

fn letter(b: u8) -> Letter {
    if b == 0 {
        Letter::L
    } else {
        Letter::R
    }
}

fn bits_string(bits: &[u8]) -> String {
    bits.iter().map(|b| if *b == 0 { '0' } else { '1' }).collect()
}

fn parse_bits(s: &str) -> Option<Vec<u8>> {
    s.chars()
        .map(|c| match c {
            '0' => Some(0),
            '1' => Some(1),
            _ => None,
        })
        .collect()
}

fn rotations(bits: &[u8]) -> impl Iterator<Item = Vec<u8>> + '_ {
    (0..bits.len()).map(move |i| bits[i..].iter().chain(&bits[..i]).copied().collect())
}

fn least_rotation(bits: &[u8]) -> Vec<u8> {
    rotations(bits).min().unwrap_or_default()
}

fn is_rotation_of(a: &[u8], b: &[u8]) -> bool {
    a.len() == b.len() && least_rotation(a) == least_rotation(b)
}

fn switched(bits: &[u8]) -> Vec<u8> {
    bits.iter().map(|b| 1 - b).collect()
}

fn reversed(bits: &[u8]) -> Vec<u8> {
    bits.iter().rev().copied().collect()
}

/// A non-repeating cyclic binary sequence of length at least 2, stored as its
/// least rotation, with `0 = L` and `1 = R`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Necklace {
    bits: Vec<u8>,
}

impl Necklace {
    pub fn new(bits: Vec<u8>) -> Result<Necklace, RiverError> {
        if bits.len() < 2 {
            return Err(RiverError::Necklace("length must be at least 2".into()));
        }
        if bits.iter().any(|b| *b > 1) {
            return Err(RiverError::Necklace("bits must be 0 or 1".into()));
        }
        let n = bits.len();
        let repeating = (1..n).filter(|p| n % p == 0).any(|p| (p..n).all(|i| bits[i] == bits[i - p]));
        if repeating {
            return Err(RiverError::Necklace(format!("{} is repeating", bits_string(&bits))));
        }
        Ok(Necklace { bits: least_rotation(&bits) })
    }

    pub fn from_letters(word: &[Letter]) -> Result<Necklace, RiverError> {
        Necklace::new(word.iter().map(|x| bit(*x)).collect())
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn letters(&self) -> Vec<Letter> {
        self.bits.iter().map(|b| letter(*b)).collect()
    }
}

impl fmt::Display for Necklace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&bits_string(&self.bits))
    }
}

impl FromStr for Necklace {
    type Err = RiverError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bits = parse_bits(s.trim()).ok_or_else(|| RiverError::Necklace(s.to_string()))?;
        Necklace::new(bits)
    }
}

/// River sequence of a square-discriminant topograph.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BinaryWord {
    /// The two lakes are adjacent (`D = 1`).
    None,
    /// A single river edge gives the empty word.
    Bits(Vec<u8>),
}

impl BinaryWord {
    pub fn bits(&self) -> Option<&[u8]> {
        match self {
            BinaryWord::None => None,
            BinaryWord::Bits(b) => Some(b),
        }
    }
}

impl fmt::Display for BinaryWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BinaryWord::None => f.write_str("none"),
            BinaryWord::Bits(b) if b.is_empty() => f.write_str("{}"),
            BinaryWord::Bits(b) => f.write_str(&bits_string(b)),
        }
    }
}

impl FromStr for BinaryWord {
    type Err = RiverError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "none" => Ok(BinaryWord::None),
            "{}" | "" => Ok(BinaryWord::Bits(Vec::new())),
            t => parse_bits(t).map(BinaryWord::Bits).ok_or_else(|| RiverError::Word(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PellSign {
    Plus4,
    Minus4,
}

impl PellSign {
    pub fn value(self) -> i32 {
        match self {
            PellSign::Plus4 => 4,
            PellSign::Minus4 => -4,
        }
    }
}

/// Least positive solution of `t² − Du² = ±4`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PellSolution {
    pub d: Int,
    pub t: Int,
    pub u: Int,
    pub sign: PellSign,
}

impl PellSolution {
    /// The unit `(t + u√D)/2`.
    pub fn epsilon(&self) -> Surd {
        Surd::new(self.t.clone(), self.u.clone(), int(2), self.d.clone()).expect("non-square discriminant")
    }

    pub fn log_epsilon(&self) -> f64 {
        self.epsilon().to_f64().ln()
    }

    pub fn check(&self) -> bool {
        &self.t * &self.t - &self.d * &self.u * &self.u == int(self.sign.value())
    }
}

fn nonsquare_positive(d: &Int) -> Result<(), RiverError> {
    let ok = d.is_positive() && !is_square(d) && d.mod_floor(&int(4)) <= Int::one();
    if ok {
        Ok(())
    } else {
        Err(RiverError::WrongRegime { d: d.clone(), expected: "a positive non-square discriminant" })
    }
}

/// `[1, 0, −D/4]` or `[1, 1, (1−D)/4]`.
pub fn principal_form(d: &Int) -> Result<QuadForm, RiverError> {
    match d.mod_floor(&int(4)) {
        r if r.is_zero() => Ok(QuadForm::new(int(1), int(0), -(d / int(4)))),
        r if r.is_one() => Ok(QuadForm::new(int(1), int(1), (Int::one() - d) / int(4))),
        _ => Err(RiverError::WrongRegime { d: d.clone(), expected: "0 or 1 mod 4" }),
    }
}

/// River letters over one period from the principal form.
pub fn river_letters(d: &Int) -> Result<Vec<Letter>, RiverError> {
    nonsquare_positive(d)?;
    Ok(topograph::river_period_from(&principal_form(d)?).word)
}

/// River period word from the principal form and its matrix.
pub fn river_period(d: &Int) -> Result<(TurnWord, UniMat), RiverError> {
    let word = TurnWord::from_letters(river_letters(d)?);
    let m = word.matrix();
    Ok((word, m))
}

fn matrix_of(letters: &[Letter]) -> UniMat {
    letters.iter().fold(UniMat::identity(), |m, x| &m * &x.matrix_pow(&Int::one()))
}

/// `t² − Du² = 4` from the river period matrix.
pub fn pell_fundamental(d: &Int) -> Result<PellSolution, RiverError> {
    let (_, m) = river_period(d)?;
    let t = m.trace();
    let u = m.gamma.gcd(&(&m.delta - &m.alpha)).gcd(&m.beta);
    Ok(PellSolution { d: d.clone(), t, u, sign: PellSign::Plus4 })
}

/// First half `X` of a river sequence of the form `X·X̄`.
fn half_split(letters: &[Letter]) -> Option<&[Letter]> {
    let n = letters.len();
    if n % 2 != 0 {
        return None;
    }
    let (x, y) = letters.split_at(n / 2);
    x.iter().zip(y).all(|(a, b)| a.switched() == *b).then_some(x)
}

/// `t² − Du² = −4` when the river sequence splits as `X·X̄`.
pub fn negative_pell(d: &Int) -> Result<Option<PellSolution>, RiverError> {
    let letters = river_letters(d)?;
    Ok(half_split(&letters).map(|x| {
        let m = matrix_of(x);
        let t = &m.beta + &m.gamma;
        let u: Int = Integer::gcd(&Integer::gcd(&m.delta, &(&m.gamma - &m.beta)), &m.alpha);
        PellSolution { d: d.clone(), t, u, sign: PellSign::Minus4 }
    }))
}

/// `G_q(t, u) = ((t−bu)/2, −cu; au, (t+bu)/2)`.
pub fn automorph(q: &QuadForm, t: &Int, u: &Int) -> Result<UniMat, RiverError> {
    Ok(UniMat::new((t - &q.b * u) / 2, -(&q.c * u), &q.a * u, (t + &q.b * u) / 2)?)
}

/// The generator `G_q` of the automorphs of a primitive form.
pub fn automorph_generator(q: &QuadForm) -> Result<UniMat, RiverError> {
    if !q.is_primitive() {
        return Err(RiverError::Imprimitive(q.clone()));
    }
    let p = pell_fundamental(&q.discriminant())?;
    automorph(q, &p.t, &p.u)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AutStructure {
    Trivial,
    Order2,
    Order3,
    InfiniteT,
    InfiniteHyperbolic,
}

/// Automorph group of `q` modulo `±I`.
pub fn aut_structure(q: &QuadForm) -> Result<AutStructure, RiverError> {
    let (_, p) = q.content_split()?;
    let d = p.discriminant();
    Ok(if d.is_zero() {
        AutStructure::InfiniteT
    } else if d == int(-3) {
        AutStructure::Order3
    } else if d == int(-4) {
        AutStructure::Order2
    } else if d.is_negative() || is_square(&d) {
        AutStructure::Trivial
    } else {
        AutStructure::InfiniteHyperbolic
    })
}

/// River sequence of the topograph containing `q`.
pub fn necklace_of_form(q: &QuadForm) -> Result<Necklace, RiverError> {
    nonsquare_positive(&q.discriminant())?;
    let river = topograph::find_river(q)?;
    Necklace::from_letters(&river.word)
}

/// River sequence of the principal topograph.
pub fn necklace_of_disc(d: &Int) -> Result<Necklace, RiverError> {
    Necklace::from_letters(&river_letters(d)?)
}

/// Necklaces of all primitive classes, sorted.
pub fn class_necklaces(d: &Int) -> Result<Vec<Necklace>, RiverError> {
    let mut out =
        classnum::primitive_cycles(d)?.iter().map(|c| necklace_of_form(&c[0])).collect::<Result<Vec<_>, _>>()?;
    out.sort();
    Ok(out)
}

/// The primitive simple form `[γ, δ−α, −β]/g` fixed by the necklace matrix.
pub fn topograph_of_necklace(n: &Necklace) -> QuadForm {
    let m = matrix_of(&n.letters());
    let q = QuadForm::new(m.gamma.clone(), &m.delta - &m.alpha, -m.beta.clone());
    let g = q.content();
    q.div_exact(&g)
}

/// Lexicographically least Z-reduced form on the topograph of `q`.
pub fn least_z_form(q: &QuadForm) -> Result<QuadForm, RiverError> {
    Ok(reduce::zagier_cycle(q)?.canonical.first().clone())
}

fn square_root_of(d: &Int) -> Result<Int, RiverError> {
    if d.is_positive() && is_square(d) {
        Ok(d.sqrt())
    } else {
        Err(RiverError::WrongRegime { d: d.clone(), expected: "a positive square" })
    }
}

/// River sequence of a square-discriminant topograph.
pub fn word_of(q: &QuadForm) -> Result<BinaryWord, RiverError> {
    square_root_of(&q.discriminant())?;
    let red = reduce::reduce_square(q)?;
    let f = red.canonical_form();
    let river = topograph::lake_river(&f.b, &f.c);
    Ok(match river.kind {
        topograph::RiverKind::None => BinaryWord::None,
        _ => BinaryWord::Bits(river.word.iter().map(|x| bit(*x)).collect()),
    })
}

/// The reduced form `[0, m, r]` whose river sequence is `w`.
pub fn topograph_of_word(w: &BinaryWord) -> QuadForm {
    let bits = match w {
        BinaryWord::None => return QuadForm::from_i64(0, 1, 1),
        BinaryWord::Bits(b) => b,
    };
    let padded: Vec<u8> = std::iter::once(0).chain(bits.iter().copied()).chain(std::iter::once(0)).collect();
    let mut terms: Vec<Int> = Vec::new();
    let mut prev = None;
    for b in padded {
        if prev == Some(b) {
            *terms.last_mut().expect("nonempty") += 1;
        } else {
            terms.push(Int::one());
            prev = Some(b);
        }
    }
    let (m, r) = terms.iter().rev().fold((Int::one(), Int::zero()), |(p, q), a| (a * &p + &q, p));
    QuadForm::new(Int::zero(), m, r)
}

/// Which of `q*`, `−q`, `−q*` lie on the topograph of `q`, where `q* = [c,b,a]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Symmetry {
    pub q_star: bool,
    pub neg: bool,
    pub neg_star: bool,
}

pub fn symmetry(q: &QuadForm) -> Result<Symmetry, RiverError> {
    let d = q.discriminant();
    if d.is_negative() {
        let key = |f: &QuadForm| reduce::reduce_negative(f).map(|r| r.canonical_form().clone());
        return Ok(Symmetry { q_star: key(q)? == key(&q.swap())?, neg: false, neg_star: false });
    }
    if d.is_zero() {
        return Err(RiverError::WrongRegime { d, expected: "nonzero" });
    }
    if is_square(&d) {
        let bits = match word_of(q)? {
            BinaryWord::None => return Ok(Symmetry { q_star: true, neg: true, neg_star: true }),
            BinaryWord::Bits(b) => b,
        };
        return Ok(Symmetry {
            q_star: reversed(&bits) == bits,
            neg: switched(&reversed(&bits)) == bits,
            neg_star: switched(&bits) == bits,
        });
    }
    let n = necklace_of_form(q)?;
    let b = n.bits();
    Ok(Symmetry {
        q_star: is_rotation_of(&reversed(b), b),
        neg: is_rotation_of(&switched(&reversed(b)), b),
        neg_star: is_rotation_of(&switched(b), b),
    })
}

/// Primitive class number in the wide sense.
pub fn h1(d: &Int) -> Result<Int, RiverError> {
    if !d.is_positive() {
        if d.is_zero() {
            return Ok(int(1));
        }
        return Ok(classnum::h_neg(d)?);
    }
    if is_square(d) {
        let (h, _) = classnum::h_square(d)?;
        return Ok(if d <= &int(4) { h } else { h / 2 });
    }
    let h = classnum::h_pos(d)?;
    Ok(if negative_pell(d)?.is_some() { h } else { h / 2 })
}
