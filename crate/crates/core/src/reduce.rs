//! Reduction to canonical forms and cycles for every discriminant regime.

use std::collections::HashMap;

use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::contfrac::{cf_rational, lr_decompose, normalize_parity, CfError};
use crate::exact::{div_floor, int, is_square, ExactError, Int, Rat, Surd};
use crate::forms::{FormError, Letter, QuadForm, Root, TurnWord, UniMat};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReduceError {
    #[error("discriminant {d} is not {expected}")]
    WrongRegime { d: Int, expected: &'static str },
    #[error("zero pivot coefficient in {0}")]
    ZeroPivot(QuadForm),
    #[error("discriminant {0} is too large for enumeration")]
    TooLarge(Int),
    #[error("reduction of {0} did not reach a canonical form")]
    NotReached(QuadForm),
    #[error(transparent)]
    Cf(#[from] CfError),
    #[error(transparent)]
    Form(#[from] FormError),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// A single reduced form or a cycle of them.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Canonical {
    Form(QuadForm),
    Cycle(Vec<QuadForm>),
}

impl Canonical {
    pub fn first(&self) -> &QuadForm {
        match self {
            Canonical::Form(f) => f,
            Canonical::Cycle(c) => &c[0],
        }
    }

    pub fn forms(&self) -> &[QuadForm] {
        match self {
            Canonical::Form(f) => std::slice::from_ref(f),
            Canonical::Cycle(c) => c,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionResult {
    pub canonical: Canonical,
    /// `q|transform` is the first canonical form.
    pub transform: UniMat,
    pub steps: TurnWord,
    /// The input was negative definite and `−q` was reduced.
    pub negated: bool,
}

impl ReductionResult {
    pub fn canonical_form(&self) -> &QuadForm {
        self.canonical.first()
    }
}

/// `|b| ≤ a ≤ c`, with `b ≥ 0` when `|b| = a` or `a = c`.
pub fn is_reduced_neg(q: &QuadForm) -> bool {
    let babs = q.b.abs();
    q.a.is_positive() && babs <= q.a && q.a <= q.c && (!(babs == q.a || q.a == q.c) || !q.b.is_negative())
}

/// `[0, m, c]` with `0 < c ≤ m`.
pub fn is_reduced_square(q: &QuadForm) -> bool {
    q.a.is_zero() && q.c.is_positive() && q.c <= q.b
}

/// `a > 0 > c`.
pub fn is_simple(q: &QuadForm) -> bool {
    crate::topograph::is_simple(q)
}

/// Simple with `|a + c| < |b|`.
pub fn is_simply_reduced(q: &QuadForm) -> bool {
    is_simple(q) && (&q.a + &q.c).abs() < q.b.abs()
}

/// `ac < 0` and `|a + c| < b`.
pub fn is_g_reduced(q: &QuadForm) -> bool {
    (&q.a * &q.c).is_negative() && (&q.a + &q.c).abs() < q.b
}

/// `a, c > 0` and `b > a + c`.
pub fn is_z_reduced(q: &QuadForm) -> bool {
    q.a.is_positive() && q.c.is_positive() && q.b > &q.a + &q.c
}

/// `a, c > 0` and `a + b + c < 0`.
pub fn is_zstar_reduced(q: &QuadForm) -> bool {
    q.a.is_positive() && q.c.is_positive() && q.head_region().is_negative()
}

fn expect_regime(d: &Int, ok: bool, expected: &'static str) -> Result<(), ReduceError> {
    if ok {
        Ok(())
    } else {
        Err(ReduceError::WrongRegime { d: d.clone(), expected })
    }
}

/// Reduces a definite form to the unique reduced form of its class.
///
/// Negative definite input is handled through `−q`; the canonical form is then
/// the negative of a reduced form so that `q|transform` equals it exactly.
pub fn reduce_negative(q: &QuadForm) -> Result<ReductionResult, ReduceError> {
    let d = q.discriminant();
    expect_regime(&d, d.is_negative(), "negative")?;
    if q.a.is_negative() {
        let mut r = reduce_negative(&-q)?;
        r.canonical = Canonical::Form(-r.canonical.first());
        r.negated = true;
        return Ok(r);
    }
    let zeta = Surd::new(-&q.b, Int::one(), int(2) * &q.a, d)?;
    let dec = lr_decompose(&zeta)?;
    let transform = dec.matrix();
    let mut steps = dec.word.clone();
    if dec.needs_s {
        steps.push_run(Letter::S, Int::one());
    }
    let canonical = q.act(&transform);
    if !is_reduced_neg(&canonical) {
        return Err(ReduceError::NotReached(q.clone()));
    }
    Ok(ReductionResult { canonical: Canonical::Form(canonical), transform, steps, negated: false })
}

/// Path word of a rational root, parity normalised to end in `R`.
fn rational_path(root: &Root) -> Result<TurnWord, ReduceError> {
    let x = match root {
        Root::Rational(Rat::Finite(x)) => x,
        _ => return Ok(TurnWord::new()),
    };
    let cf = normalize_parity(&cf_rational(x), true)?;
    Ok(TurnWord::from_cf_terms(&cf.terms))
}

/// Reduces a form of positive square discriminant to `[0, m, c]`, `0 < c ≤ m`.
///
/// The path follows the first root to the right lake, then the second root
/// of the form reached to the left lake.
pub fn reduce_square(q: &QuadForm) -> Result<ReductionResult, ReduceError> {
    let d = q.discriminant();
    expect_regime(&d, d.is_positive() && is_square(&d), "a positive square")?;
    let m = d.sqrt();
    let w1 = rational_path(&q.roots()?.first)?;
    let q1 = w1.apply(q);
    let mut w2 = rational_path(&q1.roots()?.second)?;
    let mut q2 = w2.apply(&q1);
    if q2.a.is_zero() && q2.b == m && !(q2.c.is_positive() && q2.c <= m) {
        let k = -div_floor(&(&q2.c - Int::one()), &m);
        q2 = q2.l_pow(&k);
        w2.push_run(Letter::L, k);
    }
    if !(is_reduced_square(&q2) && q2.b == m) {
        return Err(ReduceError::NotReached(q.clone()));
    }
    let steps = w1.concat(&w2);
    Ok(ReductionResult { canonical: Canonical::Form(q2), transform: steps.matrix(), steps, negated: false })
}

fn nonsquare_positive(q: &QuadForm) -> Result<Int, ReduceError> {
    let d = q.discriminant();
    expect_regime(&d, d.is_positive() && !is_square(&d), "positive and non-square")?;
    Ok(d)
}

/// `⌊(−b+√D)/(2a)⌋`.
fn floor_first_root(q: &QuadForm, d: &Int) -> Result<Int, ReduceError> {
    Ok(Surd::new(-&q.b, Int::one(), int(2) * &q.a, d.clone())?.floor()?)
}

/// `⌊−(b+√D)/(2c)⌋`.
fn floor_inverse_root(q: &QuadForm, d: &Int) -> Result<Int, ReduceError> {
    Ok(Surd::new(-&q.b, -Int::one(), int(2) * &q.c, d.clone())?.floor()?)
}

/// Iterates `step` until a state repeats; returns the periodic part with the
/// accumulated matrix and word at each state.
fn find_cycle<S, F>(start: (QuadForm, S), mut step: F) -> Result<Vec<(QuadForm, UniMat, TurnWord)>, ReduceError>
where
    S: Copy + Eq + std::hash::Hash,
    F: FnMut(&QuadForm, S) -> Result<(QuadForm, S, UniMat, TurnWord), ReduceError>,
{
    let mut seen: HashMap<(QuadForm, S), usize> = HashMap::new();
    let mut trail: Vec<(QuadForm, UniMat, TurnWord)> = Vec::new();
    let (mut cur, mut phase) = start;
    let mut mat = UniMat::identity();
    let mut word = TurnWord::new();
    loop {
        let (next, next_phase, m, w) = step(&cur, phase)?;
        mat = &mat * &m;
        word = word.concat(&w);
        cur = next;
        phase = next_phase;
        if let Some(&i) = seen.get(&(cur.clone(), phase)) {
            return Ok(trail.split_off(i));
        }
        seen.insert((cur.clone(), phase), trail.len());
        trail.push((cur.clone(), mat.clone(), word.clone()));
    }
}

fn rotate_to_min(cycle: Vec<(QuadForm, UniMat, TurnWord)>, negated: bool) -> ReductionResult {
    let k = (0..cycle.len()).min_by(|&i, &j| cycle[i].0.cmp(&cycle[j].0)).unwrap_or(0);
    let (_, transform, steps) = cycle[k].clone();
    let forms: Vec<QuadForm> = cycle[k..].iter().chain(&cycle[..k]).map(|x| x.0.clone()).collect();
    ReductionResult { canonical: Canonical::Cycle(forms), transform, steps, negated }
}

/// The cycle of simply reduced forms on the river of `q`, starting at its
/// lexicographically least member.
pub fn reduce_simple_cycle(q: &QuadForm) -> Result<ReductionResult, ReduceError> {
    let d = nonsquare_positive(q)?;
    let cycle = find_cycle((q.clone(), Letter::L), |f, phase| {
        Ok(match phase {
            Letter::R => {
                let k = floor_inverse_root(f, &d)?;
                (f.r_pow(&k), Letter::L, UniMat::r_pow(&k), TurnWord::from_runs(vec![(Letter::R, k)]))
            }
            _ => {
                let k = floor_first_root(f, &d)?;
                (f.l_pow(&k), Letter::R, UniMat::l_pow(&k), TurnWord::from_runs(vec![(Letter::L, k)]))
            }
        })
    })?;
    Ok(rotate_to_min(cycle, false))
}

fn gauss_matrix(q: &QuadForm, d: &Int) -> Result<UniMat, ReduceError> {
    if q.c.is_zero() {
        return Err(ReduceError::ZeroPivot(q.clone()));
    }
    let fl = Surd::new(q.b.clone(), Int::one(), int(2) * q.c.abs(), d.clone())?.floor()?;
    let k = if q.c.is_negative() { -fl } else { fl };
    Ok(UniMat::new(int(0), int(-1), int(1), k)?)
}

fn zagier_matrix(q: &QuadForm, d: &Int) -> Result<UniMat, ReduceError> {
    if q.a.is_zero() {
        return Err(ReduceError::ZeroPivot(q.clone()));
    }
    let k = Surd::new(q.b.clone(), Int::one(), int(2) * &q.a, d.clone())?.ceil()?;
    Ok(UniMat::new(k, int(1), int(-1), int(0))?)
}

/// One Gauss reduction step `q|(0 −1; 1 k)`, `k = sgn(c)⌊(b+√D)/(2|c|)⌋`.
pub fn gauss_step(q: &QuadForm) -> Result<QuadForm, ReduceError> {
    let d = nonsquare_positive(q)?;
    Ok(q.act(&gauss_matrix(q, &d)?))
}

/// One Zagier reduction step `q|(k 1; −1 0)`, `k = ⌈(b+√D)/(2a)⌉`.
pub fn zagier_step(q: &QuadForm) -> Result<QuadForm, ReduceError> {
    let d = nonsquare_positive(q)?;
    Ok(q.act(&zagier_matrix(q, &d)?))
}

fn matrix_cycle(
    q: &QuadForm,
    pick: fn(&QuadForm, &Int) -> Result<UniMat, ReduceError>,
) -> Result<ReductionResult, ReduceError> {
    let d = nonsquare_positive(q)?;
    let cycle = find_cycle((q.clone(), ()), |f, _| {
        let m = pick(f, &d)?;
        Ok((f.act(&m), (), m, TurnWord::new()))
    })?;
    Ok(rotate_to_min(cycle, false))
}

/// The cycle of G-reduced forms reached by iterating [`gauss_step`].
pub fn gauss_cycle(q: &QuadForm) -> Result<ReductionResult, ReduceError> {
    matrix_cycle(q, gauss_matrix)
}

/// The cycle of Z-reduced forms reached by iterating [`zagier_step`].
pub fn zagier_cycle(q: &QuadForm) -> Result<ReductionResult, ReduceError> {
    matrix_cycle(q, zagier_matrix)
}

/// A pair `(a, k)` parametrising one Z-reduced and one Z*-reduced form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OmegaEntry {
    pub a: i64,
    pub k: i64,
}

fn small_disc(d: &Int) -> Result<i64, ReduceError> {
    d.to_i64().filter(|&v| v.unsigned_abs() < (1 << 40)).ok_or_else(|| ReduceError::TooLarge(d.clone()))
}

/// All `(a, k)` with `|k| < √D`, `k² ≡ D (mod 4)`, `a > (√D+k)/2` and
/// `a | (D−k²)/4`, ordered by `k` then `a`.
pub fn omega_enumerate(d: &Int) -> Result<Vec<OmegaEntry>, ReduceError> {
    expect_regime(d, d.is_positive(), "positive")?;
    let dd = small_disc(d)?;
    let root = dd.isqrt();
    let kmax = if root * root == dd { root - 1 } else { root };
    let mut out = Vec::new();
    for k in -kmax..=kmax {
        if (k * k - dd).rem_euclid(4) != 0 {
            continue;
        }
        let n = (dd - k * k) / 4;
        let mut divs = Vec::new();
        let mut i = 1;
        while i * i <= n {
            if n % i == 0 {
                divs.push(i);
                if i * i != n {
                    divs.push(n / i);
                }
            }
            i += 1;
        }
        divs.sort_unstable();
        out.extend(divs.into_iter().filter_map(|a| {
            let t = 2 * a - k;
            (t > 0 && t * t > dd).then_some(OmegaEntry { a, k })
        }));
    }
    Ok(out)
}

fn form_from(a: i64, b: i64, dd: i64) -> QuadForm {
    let c = (b * b - dd) / (4 * a);
    QuadForm::from_i64(a, b, c)
}

/// Z*-reduced forms `[a, k−2a, ·]`.
pub fn zstar_forms(d: &Int) -> Result<Vec<QuadForm>, ReduceError> {
    let dd = small_disc(d)?;
    Ok(omega_enumerate(d)?.into_iter().map(|e| form_from(e.a, e.k - 2 * e.a, dd)).collect())
}

/// Z-reduced forms `[a, 2a−k, ·]`.
pub fn z_forms(d: &Int) -> Result<Vec<QuadForm>, ReduceError> {
    let dd = small_disc(d)?;
    Ok(omega_enumerate(d)?.into_iter().map(|e| form_from(e.a, 2 * e.a - e.k, dd)).collect())
}

/// Reduction by discriminant regime: definite, square, or simple cycle.
pub fn reduce_auto(q: &QuadForm) -> Result<ReductionResult, ReduceError> {
    let d = q.discriminant();
    if d.is_negative() {
        reduce_negative(q)
    } else if is_square(&d) && !d.is_zero() {
        reduce_square(q)
    } else if d.is_positive() {
        reduce_simple_cycle(q)
    } else {
        Err(ReduceError::WrongRegime { d, expected: "nonzero" })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(a: i64, b: i64, c: i64) -> QuadForm {
        QuadForm::from_i64(a, b, c)
    }

    #[test]
    fn predicates() {
        assert!(is_reduced_neg(&f(2, 2, 3)));
        assert!(!is_reduced_neg(&f(2, -2, 3)));
        assert!(!is_reduced_neg(&f(3, -1, 3)));
        assert!(is_z_reduced(&f(1, 3, 1)));
        assert!(is_reduced_square(&f(0, 18, 7)));
        assert!(!is_reduced_square(&f(0, 18, 0)));
        assert!(is_simply_reduced(&f(1, 1, -1)));
        assert!(is_g_reduced(&f(1, 1, -1)));
        assert!(is_zstar_reduced(&f(1, -3, 1)));
    }

    #[test]
    fn negative_examples() {
        let r = reduce_negative(&f(47, -36, 7)).unwrap();
        assert_eq!(r.canonical_form(), &f(2, 2, 3));
        assert_eq!(r.steps.to_string(), "L^0 R^2 L^1 S");
        let r = reduce_negative(&f(42, 22, 3)).unwrap();
        assert_eq!(r.canonical_form(), &f(2, 2, 3));
        assert_eq!(r.steps.to_string(), "L^-1 R^1 L^2 R^1");
        let r = reduce_negative(&f(2, 2, 3)).unwrap();
        assert_eq!(r.canonical_form(), &f(2, 2, 3));
        assert!(r.transform.is_identity_projective());
        let r = reduce_negative(&f(-47, 36, -7)).unwrap();
        assert!(r.negated);
        assert_eq!(r.canonical_form(), &f(-2, -2, -3));
        assert_eq!(f(-47, 36, -7).act(&r.transform), f(-2, -2, -3));
    }

    #[test]
    fn square_examples() {
        let q = f(13, -60, 63);
        let r = reduce_square(&q).unwrap();
        assert_eq!(r.canonical_form(), &f(0, 18, 7));
        assert_eq!(r.steps.to_string(), "L^2 R^1 L^-1 R^1 L^2 R^1 L^1 R^2");
        assert_eq!(q.act(&r.transform), f(0, 18, 7));
        let r = reduce_square(&f(0, 18, 7)).unwrap();
        assert_eq!(r.canonical_form(), &f(0, 18, 7));
        let r = reduce_square(&f(7, -18, 0)).unwrap();
        assert_eq!(r.canonical_form(), &f(0, 18, 7));
        assert_eq!(f(7, -18, 0).s(), f(0, 18, 7));
        let far = crate::topograph::lake_river(&int(18), &int(7));
        let last = far.edges.last().unwrap();
        assert_eq!(last.a.clone() % 18u32, int(13));
        let r = reduce_square(&f(0, 5, 0)).unwrap();
        assert_eq!(r.canonical_form(), &f(0, 5, 5));
    }

    #[test]
    fn simple_cycle_d5() {
        let r = reduce_simple_cycle(&f(1, 1, -1)).unwrap();
        assert_eq!(r.canonical.forms(), &[f(1, -1, -1), f(1, 1, -1)]);
        assert_eq!(f(1, 1, -1).act(&r.transform), f(1, -1, -1));
    }

    #[test]
    fn omega_small() {
        let five = int(5);
        assert_eq!(z_forms(&five).unwrap(), vec![f(1, 3, 1)]);
        let z8 = z_forms(&int(8)).unwrap();
        assert!(z8.contains(&f(1, 4, 2)));
        for q in zstar_forms(&int(96)).unwrap() {
            assert!(is_zstar_reduced(&q));
        }
    }

    #[test]
    fn zagier_d96_cycle_length() {
        let r = zagier_cycle(&f(1, 10, 1)).unwrap();
        for q in r.canonical.forms() {
            assert!(is_z_reduced(q));
        }
        let g = gauss_cycle(&f(1, 10, 1)).unwrap();
        for q in g.canonical.forms() {
            assert!(is_g_reduced(q));
        }
    }
}
