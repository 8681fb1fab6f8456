//! Continued fractions of rationals and real surds, and the general
//! continued fraction of complex surds with its fundamental-domain tests.

use std::collections::HashMap;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exact::{div_floor, int, ExactError, Int, Rat, Surd};
use crate::forms::{TurnWord, UniMat};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CfError {
    #[error("expected a complex surd, radicand is {0}")]
    NotComplex(Int),
    #[error("continued fraction of zero is degenerate")]
    Zero,
    #[error("expansion is not finite")]
    NotFinite,
    #[error("expansion has no terms")]
    Empty,
    #[error("value is not in the upper half plane")]
    LowerHalfPlane,
    #[error("no termination after {0} steps")]
    StepCap(usize),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// `⟨a₀, a₁, …⟩`, possibly with a periodic part or a complex tail.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CfExpansion {
    /// Finite part; the preperiod for periodic expansions.
    pub terms: Vec<Int>,
    /// Repeating block of a real quadratic irrational; empty otherwise.
    pub period: Vec<Int>,
    /// `z₀` of the general algorithm; `None` for real input.
    pub tail: Option<Surd>,
}

impl CfExpansion {
    fn finite(terms: Vec<Int>) -> CfExpansion {
        CfExpansion { terms, period: Vec::new(), tail: None }
    }

    pub fn is_finite(&self) -> bool {
        self.period.is_empty()
    }

    /// Value `⟨a₀,…,a_{r−1}, a_r + z₀⟩` of an expansion with a tail.
    pub fn value_with_tail(&self) -> Option<Result<Surd, ExactError>> {
        let z0 = self.tail.as_ref()?;
        let (last, rest) = self.terms.split_last()?;
        let eval = || {
            let mut x = z0.add_int(last);
            for a in rest.iter().rev() {
                x = x.invert()?.add_int(a);
            }
            Ok(x)
        };
        Some(eval())
    }
}

/// Which fundamental domain to test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    /// `−1/2 ≤ x < 1/2`, `|z| ≥ 1`, and `x ≤ 0` when `|z| = 1`.
    F,
    /// `F ∪ SF ∪ {0} ∪ −(F ∪ SF)`.
    FPrime,
    /// `F ∪ SF`.
    FOrSF,
}

fn in_f(z: &Surd) -> bool {
    if !z.q().is_positive() {
        return false;
    }
    let x = z.re();
    let half = BigRational::new(int(1), int(2));
    if x < -half.clone() || x >= half {
        return false;
    }
    let n = z.norm();
    let one = BigRational::one();
    n > one || (n == one && !x.is_positive())
}

fn in_sf(z: &Surd) -> bool {
    match z.invert() {
        Ok(w) => in_f(&-w),
        Err(_) => false,
    }
}

/// Exact membership of a complex surd in `F`, `F′` or `F ∪ SF`.
pub fn fd_member(z: &Surd, which: Domain) -> Result<bool, CfError> {
    if z.is_zero() {
        return Ok(which == Domain::FPrime);
    }
    if !z.d().is_negative() || z.q().is_zero() {
        return Err(CfError::NotComplex(z.d().clone()));
    }
    let upper = |w: &Surd| in_f(w) || in_sf(w);
    Ok(match which {
        Domain::F => in_f(z),
        Domain::FOrSF => upper(z),
        Domain::FPrime => upper(z) || upper(&-z),
    })
}

/// A real number the classical algorithm can expand.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Real {
    Rational(BigRational),
    Surd(Surd),
}

impl Real {
    fn floor(&self) -> Int {
        match self {
            Real::Rational(x) => div_floor(x.numer(), x.denom()),
            Real::Surd(s) => s.floor().expect("real surd"),
        }
    }

    /// `1/(x − m)`, or `None` when `x = m`.
    fn step(&self, m: &Int) -> Option<Real> {
        match self {
            Real::Rational(x) => {
                let f = x - BigRational::from_integer(m.clone());
                (!f.is_zero()).then(|| Real::Rational(f.recip()))
            }
            Real::Surd(s) => {
                let f = s.add_int(&-m);
                if f.is_zero() {
                    None
                } else {
                    Some(Real::Surd(f.invert().expect("nonzero")))
                }
            }
        }
    }
}

/// Lazy stream of partial quotients `a₀, a₁, …`.
#[derive(Debug, Clone)]
pub struct CfTerms {
    x: Option<Real>,
}

impl CfTerms {
    pub fn new(x: Real) -> CfTerms {
        CfTerms { x: Some(x) }
    }
}

impl Iterator for CfTerms {
    type Item = Int;

    fn next(&mut self) -> Option<Int> {
        let x = self.x.take()?;
        let m = x.floor();
        self.x = x.step(&m);
        Some(m)
    }
}

/// Classical expansion of a rational.
pub fn cf_rational(x: &BigRational) -> CfExpansion {
    CfExpansion::finite(CfTerms::new(Real::Rational(x.clone())).collect())
}

/// Classical expansion of a real surd with its period detected.
pub fn cf_surd(x: &Surd) -> Result<CfExpansion, CfError> {
    if x.is_rational() {
        return Ok(cf_rational(&x.re()));
    }
    if !x.d().is_positive() {
        return Err(ExactError::NotReal(x.d().clone()).into());
    }
    let mut seen: HashMap<Surd, usize> = HashMap::new();
    let mut terms = Vec::new();
    let mut cur = x.clone();
    loop {
        if let Some(&start) = seen.get(&cur) {
            let period = terms.split_off(start);
            return Ok(CfExpansion { terms, period, tail: None });
        }
        seen.insert(cur.clone(), terms.len());
        let m = cur.floor()?;
        cur = cur.add_int(&-&m).invert()?;
        terms.push(m);
    }
}

/// Classical expansion of a rational or real surd.
pub fn real_cf(x: &Real) -> Result<CfExpansion, CfError> {
    match x {
        Real::Rational(r) => Ok(cf_rational(r)),
        Real::Surd(s) => cf_surd(s),
    }
}

/// Rewrites a finite expansion so that its last index has the requested parity.
pub fn normalize_parity(cf: &CfExpansion, want_odd_index: bool) -> Result<CfExpansion, CfError> {
    if !cf.is_finite() || cf.tail.is_some() {
        return Err(CfError::NotFinite);
    }
    let mut terms = cf.terms.clone();
    let n = terms.len().checked_sub(1).ok_or(CfError::Empty)?;
    if (n % 2 == 1) == want_odd_index {
        return Ok(CfExpansion::finite(terms));
    }
    if n >= 1 && terms[n].is_one() {
        terms.pop();
        terms[n - 1] += 1;
    } else {
        terms[n] -= 1;
        terms.push(Int::one());
    }
    Ok(CfExpansion::finite(terms))
}

/// The general continued fraction of a complex surd.
///
/// Real input is delegated to [`cf_surd`].
pub fn general_cf(z: &Surd) -> Result<CfExpansion, CfError> {
    if z.is_real() {
        return cf_surd(z);
    }
    let cap = 10 * (z.p().bits() + z.q().bits() + z.r().bits() + z.d().bits() + 8) as usize;
    let mut terms = Vec::new();
    let mut cur = z.clone();
    for _ in 0..cap {
        let m = div_floor(cur.p(), cur.r());
        for delta in 0..=1 {
            let shift = &m + delta;
            let w = cur.add_int(&-&shift);
            if fd_member(&w, Domain::FPrime)? {
                terms.push(shift);
                return Ok(CfExpansion { terms, period: Vec::new(), tail: Some(w) });
            }
        }
        cur = cur.add_int(&-&m).invert()?;
        terms.push(m);
    }
    Err(CfError::StepCap(cap))
}

/// Output of [`lr_decompose`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LrDecomposition {
    pub word: TurnWord,
    /// `z = word·z₁` with `z₁ ∈ F ∪ SF`.
    pub z1: Surd,
    /// `z₁ ∈ SF`, so a final `S` reaches `F`.
    pub needs_s: bool,
}

impl LrDecomposition {
    /// Matrix taking `F` to the input point: `word`, times `S` when needed.
    pub fn matrix(&self) -> UniMat {
        let m = self.word.matrix();
        if self.needs_s {
            &m * &UniMat::s()
        } else {
            m
        }
    }
}

/// Splits an upper half plane point as `L^{a₀} R^{a₁} ⋯ z₁` with `z₁ ∈ F ∪ SF`.
pub fn lr_decompose(z: &Surd) -> Result<LrDecomposition, CfError> {
    if z.is_real() {
        return Err(CfError::NotComplex(z.d().clone()));
    }
    if !z.q().is_positive() {
        return Err(CfError::LowerHalfPlane);
    }
    let cf = general_cf(z)?;
    let z0 = cf.tail.clone().ok_or(CfError::Zero)?;
    let odd = cf.terms.len() % 2 == 0;
    let z1 = if odd { z0.invert()? } else { z0 };
    debug_assert!(fd_member(&z1, Domain::FOrSF)?);
    let needs_s = !fd_member(&z1, Domain::F)?;
    Ok(LrDecomposition { word: TurnWord::from_cf_terms(&cf.terms), z1, needs_s })
}

/// Extended-rational value of a finite expansion.
pub fn finite_value(cf: &CfExpansion) -> Rat {
    crate::forms::cf_value(&cf.terms)
}
