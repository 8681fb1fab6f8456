//! Numerical evaluation of topograph series, the `W` quadratures, root
//! products and the discriminant-zero Eisenstein check.

use std::f64::consts::PI;
use std::num::NonZeroUsize;

use gauss_quad::GaussLegendre;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classnum::{self, ClassError};
use crate::exact::{int, is_square, ExactError, Int, Surd};
use crate::forms::QuadForm;
use crate::reduce::{self, ReduceError};
use crate::riverword::{self, RiverError};
use crate::topograph::{self, TopoError};

/// `P(τ; 1, 1, 1)`.
pub const P_111: f64 = 3.0 * PI / 2.0;
/// `P(τ; 1, 2, 2)`.
pub const P_122: f64 = 3.0 * PI / 4.0;

/// Magnitude below which subtrees are pruned in the class-number closure.
pub const CLOSURE_FLOOR: f64 = 1e-11;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SeriesError {
    #[error("discriminant {d} is not {expected}")]
    WrongRegime { d: Int, expected: &'static str },
    #[error("coefficients of {0} exceed the fast traversal range")]
    TooLarge(QuadForm),
    #[error(transparent)]
    Topo(#[from] TopoError),
    #[error(transparent)]
    Reduce(#[from] ReduceError),
    #[error(transparent)]
    River(#[from] RiverError),
    #[error(transparent)]
    Class(#[from] ClassError),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// Neumaier compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum {
    sum: f64,
    comp: f64,
}

impl NeumaierSum {
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl FromIterator<f64> for NeumaierSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = NeumaierSum::default();
        iter.into_iter().for_each(|v| s.add(v));
        s
    }
}

/// One partial sum with its target.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesReport {
    pub theorem: String,
    pub discriminant: String,
    pub depth: usize,
    pub value: f64,
    pub target: f64,
    pub residual: f64,
    pub terms_used: u64,
}

impl SeriesReport {
    fn new(theorem: &str, d: &Int, depth: usize, value: f64, target: f64, terms: u64) -> SeriesReport {
        SeriesReport {
            theorem: theorem.to_string(),
            discriminant: d.to_string(),
            depth,
            value,
            target,
            residual: value - target,
            terms_used: terms,
        }
    }
}

type F3 = [i128; 3];

fn to_f3(q: &QuadForm) -> Result<F3, SeriesError> {
    let cv = |x: &Int| x.to_i128().filter(|v| v.abs() < (1i128 << 100));
    match (cv(&q.a), cv(&q.b), cv(&q.c)) {
        (Some(a), Some(b), Some(c)) => Ok([a, b, c]),
        _ => Err(SeriesError::TooLarge(q.clone())),
    }
}

fn step_l([a, b, c]: F3) -> F3 {
    [a, b + 2 * a, a + b + c]
}

fn step_r([a, b, c]: F3) -> F3 {
    [a + b + c, b + 2 * c, c]
}

fn step_s([a, b, c]: F3) -> F3 {
    [c, -b, a]
}

fn regions([a, b, c]: F3) -> F3 {
    [a, c, a + b + c]
}

/// Outgoing cursors at the head of `q`, each as `[left region, label, right region]`.
fn out_cursors(q: F3) -> [F3; 3] {
    [step_r(q), step_l(q), step_s(q)]
}

/// Depth-first walk of the vertices within `max_depth` of the head of
/// `root`; `visit` returns whether to expand a vertex.
fn walk_from_vertex(root: F3, max_depth: usize, mut visit: impl FnMut(F3, usize) -> bool) {
    if !visit(root, 0) || max_depth == 0 {
        return;
    }
    let mut stack = vec![(step_r(root), 1), (step_l(root), 1), (step_s(root), 1)];
    walk_stack(&mut stack, max_depth, &mut visit);
}

/// Walk of the subtree beyond the edge `x`, whose head has depth `depth`.
fn walk_subtree(x: F3, depth: usize, max_depth: usize, mut visit: impl FnMut(F3, usize) -> bool) {
    if depth > max_depth {
        return;
    }
    let mut stack = vec![(x, depth)];
    walk_stack(&mut stack, max_depth, &mut visit);
}

fn walk_stack(stack: &mut Vec<(F3, usize)>, max_depth: usize, visit: &mut impl FnMut(F3, usize) -> bool) {
    while let Some((x, d)) = stack.pop() {
        if visit(x, d) && d < max_depth {
            stack.push((step_r(x), d + 1));
            stack.push((step_l(x), d + 1));
        }
    }
}

/// Outgoing labels at the head of `q`, river edges replaced by `±root`.
fn starred_labels(q: F3, root: f64) -> [f64; 3] {
    out_cursors(q).map(|[l, e, r]| {
        if l > 0 && r < 0 {
            root
        } else if l < 0 && r > 0 {
            -root
        } else {
            e as f64
        }
    })
}

/// `(D^{3/2}/|efg|, D^{5/2}|e+f+g|/|efg|² + D^{9/2}/(3|efg|³))`.
fn edge_terms(labels: [f64; 3], d: f64) -> (f64, f64) {
    let p = (labels[0] * labels[1] * labels[2]).abs();
    let s = (labels[0] + labels[1] + labels[2]).abs();
    let d_half = d.sqrt();
    let first = d * d_half / p;
    let second = d * d * d_half * s / (p * p) + d.powi(4) * d_half / (3.0 * p * p * p);
    (first, second)
}

fn check_negative(d: &Int) -> Result<(), SeriesError> {
    if d.is_negative() {
        Ok(())
    } else {
        Err(SeriesError::WrongRegime { d: d.clone(), expected: "negative" })
    }
}

fn neg_sums(root: F3, d: f64, depth: usize) -> (NeumaierSum, NeumaierSum, u64) {
    let (mut s1, mut s2, mut n) = (NeumaierSum::default(), NeumaierSum::default(), 0u64);
    let ad = d.abs();
    let k1 = ad * ad.sqrt();
    let k2 = ad * k1;
    walk_from_vertex(root, depth, |x, _| {
        let [r, s, t] = regions(x).map(|v| v as f64);
        let p = (r * s * t).abs();
        s1.add(k1 / p);
        s2.add(k2 * (r + s + t).abs() / (p * p));
        n += 1;
        true
    });
    (s1, s2, n)
}

fn well_root(q: &QuadForm) -> Result<F3, SeriesError> {
    let pos = if q.a.is_negative() { -q } else { q.clone() };
    to_f3(&topograph::find_well(&pos)?.at.form)
}

/// Vertex sums `|D|^{3/2} Σ 1/|rst|` and `|D|^{5/2} Σ |r+s+t|/|rst|²` over
/// the vertices within `depth` of the well; targets `4π` and `24π`.
pub fn series_neg(q: &QuadForm, depth: usize) -> Result<(SeriesReport, SeriesReport), SeriesError> {
    let d = q.discriminant();
    check_negative(&d)?;
    let (s1, s2, n) = neg_sums(well_root(q)?, d.to_f64().unwrap_or(f64::NAN), depth);
    Ok((
        SeriesReport::new("mik", &d, depth, s1.value(), 4.0 * PI, n),
        SeriesReport::new("mik2", &d, depth, s2.value(), 24.0 * PI, n),
    ))
}

/// Reduced forms `|b| ≤ a ≤ c` of all contents for `D < 0`.
pub fn all_reduced_neg(d: &Int) -> Result<Vec<QuadForm>, SeriesError> {
    check_negative(d)?;
    let n = d
        .to_i64()
        .map(|v| -v)
        .ok_or_else(|| SeriesError::WrongRegime { d: d.clone(), expected: "of moderate size" })?;
    let mut out = Vec::new();
    let mut a = 1;
    while 3 * a * a <= n {
        for b in -a..=a {
            let num = b * b + n;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            let q = QuadForm::from_i64(a, b, c);
            if c >= a && reduce::is_reduced_neg(&q) {
                out.push(q);
            }
        }
        a += 1;
    }
    Ok(out)
}

/// Hurwitz class number estimate from per-topograph vertex sums.
pub fn hurwitz_series(d: &Int, depth: usize) -> Result<SeriesReport, SeriesError> {
    check_negative(d)?;
    let df = d.to_f64().unwrap_or(f64::NAN);
    let mut total = NeumaierSum::default();
    let mut n = 0;
    for q in all_reduced_neg(d)? {
        let w = if q.a == q.b && q.b == q.c {
            3.0
        } else if q.b.is_zero() && q.a == q.c {
            2.0
        } else {
            1.0
        };
        let (s1, _, k) = neg_sums(well_root(&q)?, df, depth);
        total.add(s1.value() / (4.0 * PI * w));
        n += k;
    }
    let target = classnum::hurwitz(&-d)?;
    let target = target.to_f64().unwrap_or(f64::NAN);
    Ok(SeriesReport::new("hurwitz", d, depth, total.value(), target, n))
}

fn nonsquare_positive(d: &Int) -> Result<(), SeriesError> {
    if d.is_positive() && !is_square(d) {
        Ok(())
    } else {
        Err(SeriesError::WrongRegime { d: d.clone(), expected: "positive and non-square" })
    }
}

/// Seed topograph used when only a discriminant is given: the principal form
/// for `D < 0`, otherwise the class with the shortest river, ties broken by
/// the least necklace or binary word.
pub fn default_seed(d: &Int) -> Result<QuadForm, SeriesError> {
    if !d.is_positive() {
        return Ok(riverword::principal_form(d)?);
    }
    if !is_square(d) {
        let best = riverword::class_necklaces(d)?
            .into_iter()
            .min_by(|x, y| (x.len(), x.bits()).cmp(&(y.len(), y.bits())))
            .ok_or_else(|| SeriesError::WrongRegime { d: d.clone(), expected: "a discriminant" })?;
        return Ok(riverword::topograph_of_necklace(&best));
    }
    let m = d.sqrt();
    let mut best: Option<(usize, Vec<u8>, QuadForm)> = None;
    let mut r = Int::one();
    while r < m || (r == Int::one() && m == Int::one()) {
        if num_integer::Integer::gcd(&r, &m).is_one() {
            let q = QuadForm::new(Int::zero(), m.clone(), r.clone());
            let bits = riverword::word_of(&q)?.bits().map(<[u8]>::to_vec).unwrap_or_default();
            let key = (bits.len(), bits);
            if best.as_ref().is_none_or(|b| (b.0, &b.1) > (key.0, &key.1)) {
                best = Some((key.0, key.1, q));
            }
        }
        r += 1u32;
    }
    best.map(|b| b.2).ok_or_else(|| SeriesError::WrongRegime { d: d.clone(), expected: "a discriminant" })
}

/// Sums over one river period and the trees hanging from it; both target
/// `2 log ε_D`.
///
/// Each hanging tree is rooted at the edge leaving the river, and `depth`
/// counts edges beyond that one: depth 0 already includes the vertex at the
/// far end of every edge leaving the river.
pub fn series_pos(q: &QuadForm, depth: usize) -> Result<(SeriesReport, SeriesReport), SeriesError> {
    let d = q.discriminant();
    nonsquare_positive(&d)?;
    let river = topograph::find_river(q)?;
    let df = d.to_f64().unwrap_or(f64::NAN);
    let root = df.sqrt();
    let (mut s1, mut s2, mut n) = (NeumaierSum::default(), NeumaierSum::default(), 0u64);
    let mut add = |x: F3, _: usize| {
        let (t1, t2) = edge_terms(starred_labels(x, root), df);
        s1.add(t1);
        s2.add(t2);
        n += 1;
        true
    };
    for e in &river.edges {
        let x = to_f3(e)?;
        add(x, 0);
        let off = if regions(x)[2] < 0 { step_r(x) } else { step_l(x) };
        walk_subtree(off, 0, depth, &mut add);
    }
    let target = 2.0 * riverword::pell_fundamental(&d)?.log_epsilon();
    Ok((
        SeriesReport::new("mt", &d, depth, s1.value(), target, n),
        SeriesReport::new("mt2", &d, depth, s2.value(), target, n),
    ))
}

/// Lake-adjacent residues `(r, s)` mod `m` and the reduced form `[0, m, r]`.
pub fn lake_residues(q: &QuadForm) -> Result<(Int, Int, QuadForm), SeriesError> {
    let red = reduce::reduce_square(q)?;
    let f = red.canonical_form().clone();
    let m = f.b.clone();
    let r = f.c.clone() % &m;
    let river = topograph::lake_river(&m, &f.c);
    let s = match river.edges.last() {
        Some(last) => {
            let v = last.a.clone() % &m;
            if v.is_negative() {
                v + &m
            } else {
                v
            }
        }
        None => r.clone(),
    };
    Ok((r, s, f))
}

fn frac(r: &Int, m: &Int) -> f64 {
    r.to_f64().unwrap_or(0.0) / m.to_f64().unwrap_or(1.0)
}

fn square_sums(root: F3, m: f64, depth: usize) -> (NeumaierSum, NeumaierSum, u64) {
    let d = m * m;
    let (mut s1, mut s2, mut n) = (NeumaierSum::default(), NeumaierSum::default(), 0u64);
    walk_from_vertex(root, depth, |x, _| {
        let (t1, t2) = edge_terms(starred_labels(x, m), d);
        if !regions(x).contains(&0) {
            s1.add(t1);
            s2.add(t2);
            n += 1;
        }
        true
    });
    (s1, s2, n)
}

fn square_root_form(f: &QuadForm) -> Result<F3, SeriesError> {
    let river = topograph::lake_river(&f.b, &f.c);
    match river.edges.len() {
        0 => to_f3(f),
        len => to_f3(&river.edges[len.saturating_sub(2) / 2]),
    }
}

/// Sums over non-lake vertices within `depth` of the middle river vertex plus
/// the lake corrections; both target `2 log(m / (2 gcd(m, r)))`.
pub fn series_square(q: &QuadForm, depth: usize) -> Result<(SeriesReport, SeriesReport), SeriesError> {
    let d = q.discriminant();
    if !(d.is_positive() && is_square(&d)) {
        return Err(SeriesError::WrongRegime { d, expected: "a positive square" });
    }
    let (r, s, f) = lake_residues(q)?;
    let m = f.b.clone();
    let mf = m.to_f64().unwrap_or(f64::NAN);
    let (s1, s2, n) = square_sums(square_root_form(&f)?, mf, depth);
    let (x, y) = (frac(&r, &m), frac(&s, &m));
    let g = num_integer::Integer::gcd(&m, &f.c).to_f64().unwrap_or(1.0);
    let mut target = 2.0 * (mf / (2.0 * g)).ln();
    let (mut target2, v1, v2) = (target, s1.value() + w1(x) + w1(y), s2.value() + (w2(x) + w2(y) + 1.0) / 3.0);
    if m == int(1) {
        target += 2.0;
        target2 += 8.0 / 3.0;
    }
    Ok((SeriesReport::new("sq", &d, depth, v1, target, n), SeriesReport::new("sq2", &d, depth, v2, target2, n)))
}

/// Both sides of the class-number identity
/// `h(m²) log(m/2) = ½ Σ_classes (Σ_v m³/|efg| + W₁(r/m) + W₁(s/m))`.
///
/// Trees hanging off the rivers are walked until terms drop below `floor`.
/// Trees hanging off the lake borders are grouped into families whose forms
/// are linear in the lake position; each family is summed in closed form and
/// families are expanded until their sum drops below `floor`.
pub fn square_class_closure(m: u64, floor: f64) -> Result<(f64, f64), SeriesError> {
    if m < 2 {
        return Err(SeriesError::WrongRegime { d: int(m * m), expected: "a square above 1" });
    }
    let mf = m as f64;
    let m3 = mf * mf * mf;
    let mut lhs = NeumaierSum::default();
    for r in 1..m {
        if num_integer::gcd(r, m) != 1 {
            continue;
        }
        let (_, s, _) = lake_residues(&QuadForm::from_i64(0, m as i64, r as i64))?;
        let river = topograph::lake_river(&int(m), &int(r));
        let edges = river.edges.iter().map(to_f3).collect::<Result<Vec<_>, _>>()?;
        let (interior, last) = edges.split_at(edges.len() - 1);
        for &x in interior {
            let off = if regions(x)[2] < 0 { step_r(x) } else { step_l(x) };
            lhs.add(edge_terms(starred_labels(x, mf), mf * mf).0);
            walk_subtree(off, 0, usize::MAX, |y, _| {
                let t = edge_terms(starred_labels(y, mf), mf * mf).0;
                lhs.add(t);
                t >= floor
            });
        }
        let far = step_r(last[0]);
        lhs.add(lake_border_sum(m as i128, r as i128, m3, floor));
        lhs.add(lake_border_sum(far[1], far[2], m3, floor));
        lhs.add(w1(r as f64 / mf));
        lhs.add(w1(frac(&s, &int(m))));
    }
    let rhs = classnum::totient(m) as f64 * (mf / 2.0).ln();
    Ok((lhs.value() / 2.0, rhs))
}

/// Sum over the trees hanging off the lake border `[0, μ, ρ + kμ]`, `k ≠ −1`;
/// the vertex at the head of the `k = −1` edge is where the river leaves.
fn lake_border_sum(mu: i128, rho: i128, m3: f64, floor: f64) -> f64 {
    let mut total = NeumaierSum::default();
    let mut stack = vec![([mu + rho, mu + 2 * rho, rho], [mu, 2 * mu, mu])];
    while let Some((g0, g1)) = stack.pop() {
        let v = family_sum(g0, g1, m3);
        total.add(v);
        if v >= floor {
            stack.push((step_r(g0), step_r(g1)));
            stack.push((step_l(g0), step_l(g1)));
        }
    }
    total.value()
}

fn labels_of([a, b, c]: F3) -> [f64; 3] {
    [-b as f64, (b + 2 * a) as f64, (b + 2 * c) as f64]
}

/// `Σ_{j ≠ 0} m³/|e f g|` at the head of `g0 + (j − 1) g1`.
fn family_sum(g0: F3, g1: F3, m3: f64) -> f64 {
    let (l0, l1) = (labels_of(g0), labels_of(g1));
    let at = |j: f64| -> f64 { (0..3).map(|i| l0[i] + (j - 1.0) * l1[i]).product::<f64>().abs() };
    let roots: Vec<f64> = (0..3).map(|i| 1.0 - l0[i] / l1[i]).collect();
    let lead = l1.iter().product::<f64>().abs();
    let spread = roots.iter().fold(0.0f64, |acc, r| acc.max(r.abs()));
    let cut = 40 + (8.0 * spread).ceil() as u32;
    let mut sum = NeumaierSum::default();
    for j in 1..cut {
        let j = j as f64;
        sum.add(m3 / at(j));
        sum.add(m3 / at(-j));
    }
    let neg: Vec<f64> = roots.iter().map(|r| -r).collect();
    sum.add(m3 / lead * inverse_cubic_tail(&roots, cut as f64));
    sum.add(m3 / lead * inverse_cubic_tail(&neg, cut as f64));
    sum.value()
}

/// `Σ_{j ≥ cut} Π_i 1/(j − ρ_i)` for three roots with `|ρ_i| ≤ cut/8`.
fn inverse_cubic_tail(roots: &[f64], cut: f64) -> f64 {
    const TERMS: usize = 24;
    let mut h = [0.0; TERMS];
    h[0] = 1.0;
    for &r in roots {
        for n in 1..TERMS {
            h[n] += r * h[n - 1];
        }
    }
    h.iter().enumerate().map(|(n, hn)| hn * hurwitz_zeta((3 + n) as f64, cut)).collect::<NeumaierSum>().value()
}

/// `ζ(s, x) = Σ_{j ≥ 0} (x + j)^{−s}` by Euler–Maclaurin, for `s > 1`, `x ≥ 20`.
fn hurwitz_zeta(s: f64, x: f64) -> f64 {
    const B2K: [f64; 7] = [1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0, 5.0 / 66.0, -691.0 / 2730.0, 7.0 / 6.0];
    let mut total = x.powf(1.0 - s) / (s - 1.0) + 0.5 * x.powf(-s);
    let mut rising = s;
    let mut fact = 2.0;
    let mut pow = x.powf(-s - 1.0);
    for (k, b) in B2K.iter().enumerate() {
        total += b / fact * rising * pow;
        let p = 2.0 * k as f64 + 2.0;
        rising *= (s + p - 1.0) * (s + p);
        fact *= (p + 1.0) * (p + 2.0);
        pow /= x * x;
    }
    total
}

/// Composite Gauss–Legendre rule on `[0, upper_cut]`.
#[derive(Debug, Clone)]
pub struct QuadratureSpec {
    pub upper_cut: f64,
    pub panels: usize,
    pub nodes: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec { upper_cut: 40.0, panels: 64, nodes: 20 }
    }
}

impl QuadratureSpec {
    /// Bound on `∫_{cut}^∞ y e^{−πy}/(1 − e^{−πy}) dy` times the weight bound 6.
    pub fn tail_bound(&self) -> f64 {
        let t = self.upper_cut;
        6.0 * (t / PI + 1.0 / (PI * PI)) * (-PI * t).exp() / (1.0 - (-PI * t).exp())
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        let rule = GaussLegendre::new(NonZeroUsize::new(self.nodes).unwrap_or(NonZeroUsize::MIN));
        let h = self.upper_cut / self.panels as f64;
        (0..self.panels).map(|i| rule.integrate(i as f64 * h, (i + 1) as f64 * h, &f)).collect::<NeumaierSum>().value()
    }
}

/// `Re 1/(e^{π(y+2ix)} − 1)`.
fn re_kernel(y: f64, x: f64) -> f64 {
    let theta = 2.0 * PI * x;
    let half = (theta / 2.0).sin();
    let a = (PI * y).exp_m1() * theta.cos() - 2.0 * half * half;
    let b = (PI * y).exp() * theta.sin();
    a / (a * a + b * b)
}

fn w_with(x: f64, weight: impl Fn(f64) -> f64) -> f64 {
    let x = x - x.floor();
    2.0 * QuadratureSpec::default().integrate(|y| weight(y) * re_kernel(y, x))
}

/// `W₁(x) = 2 Re ∫₀^∞ y/(y²+1) · 1/(e^{π(y+2ix)} − 1) dy`.
pub fn w1(x: f64) -> f64 {
    w_with(x, |y| y / (y * y + 1.0))
}

/// `W₂(x) = 2 Re ∫₀^∞ y(3y⁴+5y²+6)/(y²+1)³ · 1/(e^{π(y+2ix)} − 1) dy`.
pub fn w2(x: f64) -> f64 {
    w_with(x, |y| {
        let y2 = y * y;
        y * (3.0 * y2 * y2 + 5.0 * y2 + 6.0) / (y2 + 1.0).powi(3)
    })
}

/// Exact product of the first roots of the Z*-reduced forms on the topograph of `q`.
pub fn root_product(q: &QuadForm) -> Result<Surd, SeriesError> {
    let d = q.discriminant();
    nonsquare_positive(&d)?;
    let key = reduce::reduce_simple_cycle(q)?.canonical;
    let mut prod = Surd::from_int(int(1), &d);
    for z in reduce::zstar_forms(&d)? {
        if reduce::reduce_simple_cycle(&z)?.canonical == key {
            prod = prod.checked_mul(&first_root(&z)?)?;
        }
    }
    Ok(prod)
}

fn first_root(q: &QuadForm) -> Result<Surd, SeriesError> {
    Ok(Surd::new(-&q.b, int(1), int(2) * &q.a, q.discriminant())?)
}

/// Product of `(−b+√D)/(2a)` over all primitive Z*-reduced forms.
pub fn root_product_all(d: &Int) -> Result<Surd, SeriesError> {
    nonsquare_positive(d)?;
    let mut prod = Surd::from_int(int(1), d);
    for z in reduce::zstar_forms(d)? {
        if z.is_primitive() {
            prod = prod.checked_mul(&first_root(&z)?)?;
        }
    }
    Ok(prod)
}

fn mobius_table(n: usize) -> Vec<i8> {
    let mut mu = vec![1i8; n + 1];
    let mut composite = vec![false; n + 1];
    for p in 2..=n {
        if composite[p] {
            continue;
        }
        for k in (p..=n).step_by(p) {
            if k > p {
                composite[k] = true;
            }
            mu[k] = -mu[k];
        }
        let sq = p * p;
        for k in (sq..=n).step_by(sq) {
            mu[k] = 0;
        }
    }
    mu
}

/// `Σ (m²+n²)^{−2}` over nonzero lattice points with `m²+n² ≤ bound`.
fn lattice_sum(bound: u64) -> f64 {
    let mut s = NeumaierSum::default();
    let mut m = 1u64;
    while m * m <= bound {
        let rest = bound - m * m;
        let top = rest.isqrt();
        let mut row = NeumaierSum::default();
        for n in 0..=top {
            let r = (m * m + n * n) as f64;
            row.add(1.0 / (r * r));
        }
        s.add(row.value());
        m += 1;
    }
    4.0 * s.value()
}

/// Edge sum `g² Σ 1/(a+c)²` over the discriminant-zero topograph `g[0,0,1]`
/// modulo its lake period, against `½E(i,2) = ¼ Σ_{gcd(γ,δ)=1} (γ²+δ²)^{−2}`;
/// both truncated at `γ² + δ² ≤ radius²`.
pub fn eisenstein_check(g: u64, radius: u64) -> (f64, f64) {
    let bound = radius * radius;
    let gf = g as f64;
    let mut lhs = NeumaierSum::default();
    lhs.add(gf * gf / (gf * gf));
    let mut stack: Vec<[u64; 3]> = vec![[1, 2, 1]];
    while let Some([a, b, c]) = stack.pop() {
        if a + c > bound {
            continue;
        }
        let e = gf * (a + c) as f64;
        lhs.add(gf * gf / (e * e));
        stack.push([a + b + c, b + 2 * c, c]);
        stack.push([a, b + 2 * a, a + b + c]);
    }
    let mu = mobius_table(radius as usize);
    let mut rhs = NeumaierSum::default();
    for (k, &sign) in mu.iter().enumerate().skip(1) {
        if sign == 0 {
            continue;
        }
        let kf = k as f64;
        rhs.add(sign as f64 * lattice_sum(bound / (k * k) as u64) / kf.powi(4));
    }
    (lhs.value(), rhs.value() / 4.0)
}
