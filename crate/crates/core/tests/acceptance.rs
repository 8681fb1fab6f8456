//! Acceptance harness: one PASS/FAIL line per criterion, nonzero exit on failure.

mod common;

use std::collections::{BTreeSet, HashMap, HashSet};
use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{f, Regime};
use qtopo::classnum;
use qtopo::reduce;
use qtopo::riverword::{self, BinaryWord, Necklace};
use qtopo::series;
use qtopo::topograph;
use qtopo::{int, QuadForm, Surd};

const SERIES_DIGITS: f64 = 1e-6;
const ANCHOR_TOL: f64 = 5e-4;
const NEG_SERIES_TOL: f64 = 1e-3;
const CLOSURE_TOL: f64 = 1e-5;
const W1_TOL: f64 = 1e-5;
const EISENSTEIN_TOL: f64 = 1e-3;

type Check = Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn near(label: &str, got: f64, want: f64, tol: f64) -> Check {
    ensure((got - want).abs() <= tol, || {
        format!("{label}: got {got:.9}, want {want:.9} ± {tol:e} (off by {:.3e})", (got - want).abs())
    })
}

fn series_d96() -> Check {
    let d = int(96);
    let (mt, mt2) =
        series::series_pos(&series::default_seed(&d).map_err(|e| e.to_string())?, 15).map_err(|e| e.to_string())?;
    near("mt", mt.value, 4.5838550, SERIES_DIGITS)?;
    near("mt2", mt2.value, 4.5848597, SERIES_DIGITS)?;
    near("2 log ε", mt.target, 4.5848633, SERIES_DIGITS)?;
    let (fig, _) = series::series_pos(&f(5, 4, -4), 15).map_err(|e| e.to_string())?;
    near("figure class", fig.value, 4.5838550, SERIES_DIGITS)
}

fn series_d324() -> Check {
    let (sq, sq2) = series::series_square(&f(0, 18, 7), 15).map_err(|e| e.to_string())?;
    near("sq", sq.value, 4.3911059, ANCHOR_TOL)?;
    near("sq2", sq2.value, 4.3944308, ANCHOR_TOL)?;
    near("right side", sq.target, 4.3944492, SERIES_DIGITS)
}

fn residual(q: &QuadForm, depth: usize) -> Result<(f64, f64), String> {
    let d = q.discriminant();
    if d < int(0) {
        let (a, b) = series::series_neg(q, depth).map_err(|e| e.to_string())?;
        Ok(((a.value - 4.0 * PI).abs(), (b.value - 24.0 * PI).abs()))
    } else {
        let (a, b) = series::series_pos(q, depth).map_err(|e| e.to_string())?;
        Ok(((a.value - a.target).abs(), (b.value - b.target).abs()))
    }
}

fn thm_top_convergence() -> Check {
    let mut fails = Vec::new();
    for (d, second) in [(-20i64, false), (-31, true)] {
        let q = series::default_seed(&int(d)).map_err(|e| e.to_string())?;
        let (r1, r2) = residual(&q, 20)?;
        let (r, target) = if second { (r2, "24π") } else { (r1, "4π") };
        if r > NEG_SERIES_TOL {
            fails.push(format!("D={d} seed {q}: |Σ − {target}| = {r:.3e}"));
        }
    }
    for d in [-20i64, -31, 96, 148] {
        let q = series::default_seed(&int(d)).map_err(|e| e.to_string())?;
        let rs = [5, 10, 15, 20].map(|k| residual(&q, k));
        let rs: Vec<(f64, f64)> = rs.into_iter().collect::<Result<_, _>>()?;
        for w in rs.windows(2) {
            if w[1].0 > w[0].0 || w[1].1 > w[0].1 {
                fails.push(format!("D={d}: residuals not monotone {rs:?}"));
            }
        }
    }
    ensure(fails.is_empty(), || fails.join("; "))
}

fn class_number_oracle() -> Check {
    for d in -10_000i64..0 {
        if !common::is_disc(d) {
            continue;
        }
        let h = classnum::h_neg(&int(d)).map_err(|e| e.to_string())?;
        let brute = common::brute_reduced_neg(d).len();
        ensure(h == int(brute as i64), || format!("D={d}: well count {h}, reduced forms {brute}"))?;
    }
    ensure(classnum::h_neg(&int(-3)).ok() == Some(int(1)), || "h(-3)".into())?;
    ensure(classnum::h_neg(&int(-4)).ok() == Some(int(1)), || "h(-4)".into())
}

fn square_classes() -> Check {
    for m in 1u64..=500 {
        let d = int(m * m);
        let (h, h_star) = classnum::h_square(&d).map_err(|e| e.to_string())?;
        ensure(h == int(classnum::totient(m)) && h_star == Some(int(m)), || format!("m={m}: h={h}, h*={h_star:?}"))?;
        let mut seeds = if m > 1 { reduce::zstar_forms(&d).map_err(|e| e.to_string())? } else { Vec::new() };
        seeds.extend((1..=m).filter(|g| m % g == 0).map(|g| f(0, m as i64, g as i64)));
        let canon: HashSet<QuadForm> = seeds
            .iter()
            .map(|q| reduce::reduce_square(q).map(|r| r.canonical_form().clone()))
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        let primitive = canon.iter().filter(|q| q.is_primitive()).count() as u64;
        ensure(canon.len() as u64 == m && primitive == classnum::totient(m), || {
            format!("m={m}: {} canonical classes, {primitive} primitive", canon.len())
        })?;
    }
    Ok(())
}

fn three_squares() -> Check {
    for n in 1u64..=2000 {
        let r3 = classnum::r3(n);
        let via = classnum::r3_via_class(n).map_err(|e| e.to_string())?;
        ensure(int(r3) == via, || format!("r3({n}) = {r3}, class formula {via}"))?;
        if n > 3 {
            let p = classnum::r3_primitive(n);
            let via = classnum::r3p_via_class(n).map_err(|e| e.to_string())?;
            ensure(int(p) == via, || format!("r3'({n}) = {p}, class formula {via}"))?;
        }
        let h4 = classnum::hurwitz(&int(4 * n)).map_err(|e| e.to_string())?;
        ensure(classnum::upsilon(n) == h4 * int(3), || format!("Υ({n}) ≠ 3H(4n)"))?;
        let odd = classnum::upsilon_odd(n);
        let want = if n % 4 == 3 {
            classnum::hurwitz(&int(n)).map_err(|e| e.to_string())? * int(3)
        } else {
            num_rational::BigRational::from_integer(int(0))
        };
        ensure(num_rational::BigRational::from_integer(int(odd)) == want, || {
            format!("Υ_odd({n}) = {odd}, want {want}")
        })?;
    }
    Ok(())
}

fn pell() -> Check {
    for d in 5i64..=2000 {
        if !common::is_disc(d) || common::is_square_i64(d) {
            continue;
        }
        let di = int(d);
        let plus = riverword::pell_fundamental(&di).map_err(|e| e.to_string())?;
        let minus = riverword::negative_pell(&di).map_err(|e| e.to_string())?;
        let (t, u, norm) = common::pell_cf(d);
        let (pt, pu) = if norm == 4 { (t.clone(), u.clone()) } else { ((&t * &t + &di * &u * &u) / int(2), &t * &u) };
        ensure(plus.t == pt && plus.u == pu, || {
            format!("D={d}: river gives ({}, {}), continued fraction ({pt}, {pu})", plus.t, plus.u)
        })?;
        match (&minus, norm) {
            (None, 4) => {}
            (Some(s), -4) => {
                ensure(s.t == t && s.u == u, || format!("D={d}: negative Pell ({}, {}) vs ({t}, {u})", s.t, s.u))?;
                ensure(s.epsilon().pow(2) == plus.epsilon(), || format!("D={d}: (ε*)² ≠ ε"))?;
            }
            _ => return Err(format!("D={d}: negative Pell existence disagrees")),
        }
        for (sign, sol) in [(4i64, Some((&plus.t, &plus.u))), (-4, minus.as_ref().map(|s| (&s.t, &s.u)))] {
            let brute = common::pell_brute(d, sign, 200_000);
            match (brute, sol) {
                (Some((bt, bu)), Some((t, u))) => {
                    ensure(int(bt) == *t && int(bu) == *u, || format!("D={d} sign {sign}: brute ({bt}, {bu})"))?
                }
                (Some(b), None) => return Err(format!("D={d}: brute force finds {b:?} for sign {sign}")),
                (None, Some((_, u))) => ensure(u > &int(200_000), || format!("D={d}: brute force missed u={u}"))?,
                (None, None) => {}
            }
        }
    }
    let p148 = riverword::pell_fundamental(&int(148)).map_err(|e| e.to_string())?;
    let eps = Surd::new(int(146), int(12), int(2), int(148)).map_err(|e| e.to_string())?;
    ensure(p148.epsilon() == eps, || format!("ε_148 = {:?}", p148.epsilon()))?;
    ensure(classnum::h_pos(&int(148)).ok() == Some(int(3)), || "h(148) ≠ 3".into())?;
    let n145 = riverword::negative_pell(&int(145)).map_err(|e| e.to_string())?;
    ensure(n145.map(|s| (s.t, s.u)) == Some((int(24), int(2))), || "D=145 (t*, u*) ≠ (24, 2)".into())
}

fn root_products() -> Check {
    for d in 5i64..=500 {
        if !common::is_disc(d) || common::is_square_i64(d) {
            continue;
        }
        let di = int(d);
        let eps = riverword::pell_fundamental(&di).map_err(|e| e.to_string())?.epsilon();
        let cycles = classnum::primitive_cycles(&di).map_err(|e| e.to_string())?;
        for c in &cycles {
            let p = series::root_product(&c[0]).map_err(|e| e.to_string())?;
            ensure(p == eps, || format!("D={d} class {}: product {p:?}", c[0]))?;
        }
        for z in reduce::zstar_forms(&di).map_err(|e| e.to_string())? {
            let root = (-z.b.to_f64().unwrap_or(0.0) + (d as f64).sqrt()) / (2.0 * z.a.to_f64().unwrap_or(1.0));
            ensure(root > 1.0, || format!("D={d}: first root of {z} is {root}"))?;
        }
        let all = series::root_product_all(&di).map_err(|e| e.to_string())?;
        ensure(all == eps.pow(cycles.len() as u32), || format!("D={d}: all-class product ≠ ε^h"))?;
    }
    Ok(())
}

fn necklace_table() -> [(&'static str, i64, (i64, i64, i64)); 12] {
    [
        ("01", 5, (1, 3, 1)),
        ("001", 12, (1, 4, 1)),
        ("011", 12, (2, 6, 3)),
        ("0001", 21, (1, 5, 1)),
        ("0011", 8, (1, 4, 2)),
        ("0111", 21, (3, 9, 5)),
        ("00001", 32, (1, 6, 1)),
        ("00011", 60, (2, 10, 5)),
        ("00101", 96, (3, 12, 4)),
        ("00111", 60, (3, 12, 7)),
        ("01011", 96, (5, 14, 5)),
        ("01111", 32, (4, 12, 7)),
    ]
}

fn word_table() -> [(&'static str, i64, (i64, i64, i64)); 12] {
    [
        ("none", 1, (0, 1, 1)),
        ("{}", 4, (0, 2, 1)),
        ("0", 9, (0, 3, 1)),
        ("1", 9, (0, 3, 2)),
        ("00", 16, (0, 4, 1)),
        ("01", 25, (0, 5, 2)),
        ("10", 25, (0, 5, 3)),
        ("11", 16, (0, 4, 3)),
        ("000", 25, (0, 5, 1)),
        ("001", 49, (0, 7, 2)),
        ("010", 64, (0, 8, 3)),
        ("011", 49, (0, 7, 3)),
    ]
}

fn bijections() -> Check {
    for n in 2..=12usize {
        let words = common::lyndon_words(n);
        ensure(words.len() as u64 == common::lyndon_count(n as u64), || format!("length {n}: necklace count"))?;
        for w in words {
            let nk = Necklace::new(w.clone()).map_err(|e| e.to_string())?;
            let q = riverword::topograph_of_necklace(&nk);
            let back = riverword::necklace_of_form(&q).map_err(|e| e.to_string())?;
            ensure(back == nk && q.is_primitive(), || format!("necklace {nk} → {q} → {back}"))?;
        }
    }
    for n in 0..=12usize {
        for x in 0u32..1 << n {
            let w = BinaryWord::Bits((0..n).map(|i| ((x >> i) & 1) as u8).collect());
            let q = riverword::topograph_of_word(&w);
            let back = riverword::word_of(&q).map_err(|e| e.to_string())?;
            ensure(back == w && q.is_primitive(), || format!("word {w} → {q} → {back}"))?;
        }
    }
    let mut by_length: HashMap<usize, u64> = HashMap::new();
    for m in 2i64..=400 {
        for r in 1..m {
            if r.gcd(&m) == 1 {
                *by_length.entry(topograph::lake_river(&int(m), &int(r)).edges.len()).or_default() += 1;
            }
        }
    }
    for n in 1..=12usize {
        let got = by_length.get(&n).copied().unwrap_or(0);
        ensure(got == 1 << (n - 1), || format!("river length {n}: {got} topographs"))?;
    }
    for (s, d, (a, b, c)) in necklace_table() {
        let nk: Necklace = s.parse().map_err(|e: riverword::RiverError| e.to_string())?;
        let q = riverword::topograph_of_necklace(&nk);
        let z = riverword::least_z_form(&q).map_err(|e| e.to_string())?;
        ensure(q.discriminant() == int(d) && z == f(a, b, c), || format!("{s}: D={}, form {z}", q.discriminant()))?;
    }
    for (s, d, (a, b, c)) in word_table() {
        let w: BinaryWord = s.parse().map_err(|e: riverword::RiverError| e.to_string())?;
        let q = riverword::topograph_of_word(&w);
        let red = reduce::reduce_square(&q).map_err(|e| e.to_string())?;
        ensure(q.discriminant() == int(d) && red.canonical_form() == &f(a, b, c), || {
            format!("{s}: D={}, form {}", q.discriminant(), red.canonical_form())
        })?;
    }
    Ok(())
}

fn certificates() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for regime in [Regime::Negative, Regime::Square, Regime::Positive] {
        for _ in 0..1000 {
            let q = common::random_form(&mut rng, regime, 10_000);
            let r = reduce::reduce_auto(&q).map_err(|e| format!("{q}: {e}"))?;
            ensure(&q.act(&r.transform) == r.canonical_form(), || format!("{regime:?} {q}: certificate fails"))?;
            ensure(q.act(&r.steps.matrix()) == *r.canonical_form(), || format!("{regime:?} {q}: turn word fails"))?;
        }
    }
    let worked = [
        (f(47, -36, 7), f(2, 2, 3), "L^0 R^2 L^1 S"),
        (f(42, 22, 3), f(2, 2, 3), "L^-1 R^1 L^2 R^1"),
        (f(13, -60, 63), f(0, 18, 7), "L^2 R^1 L^-1 R^1 L^2 R^1 L^1 R^2"),
    ];
    for (q, want, word) in worked {
        let r = reduce::reduce_auto(&q).map_err(|e| e.to_string())?;
        ensure(r.canonical_form() == &want && r.steps.to_string() == word, || {
            format!("{q}: {} via {}", r.canonical_form(), r.steps)
        })?;
    }
    Ok(())
}

fn method_agreement() -> Check {
    for d in 5i64..=500 {
        if !common::is_disc(d) || common::is_square_i64(d) {
            continue;
        }
        let forms = common::primitive_forms(d, 2 * (d as f64).sqrt() as i64 + 4);
        let mut keys: Vec<[Vec<QuadForm>; 3]> = Vec::new();
        for q in &forms {
            let g = reduce::gauss_cycle(q).map_err(|e| format!("{q}: {e}"))?;
            let z = reduce::zagier_cycle(q).map_err(|e| format!("{q}: {e}"))?;
            let s = reduce::reduce_simple_cycle(q).map_err(|e| format!("{q}: {e}"))?;
            keys.push([g, z, s].map(|r| r.canonical.forms().to_vec()));
        }
        for i in 0..3 {
            for j in 0..3 {
                let mut map: HashMap<&Vec<QuadForm>, &Vec<QuadForm>> = HashMap::new();
                for k in &keys {
                    if *map.entry(&k[i]).or_insert(&k[j]) != &k[j] {
                        return Err(format!("D={d}: method {i} merges classes split by method {j}"));
                    }
                }
            }
        }
        let classes: BTreeSet<&Vec<QuadForm>> = keys.iter().map(|k| &k[2]).collect();
        let h = classnum::h_pos(&int(d)).map_err(|e| e.to_string())?;
        ensure(int(classes.len() as i64) == h, || format!("D={d}: {} classes seen, h={h}", classes.len()))?;
    }
    Ok(())
}

fn closure() -> Check {
    for m in [5u64, 7] {
        let (lhs, rhs) = series::square_class_closure(m, series::CLOSURE_FLOOR).map_err(|e| e.to_string())?;
        near(&format!("m={m} closure"), lhs, rhs, CLOSURE_TOL)?;
    }
    near("W1(0)", series::w1(0.0), 0.270363, W1_TOL)?;
    near("W1(1/2)", series::w1(0.5), -0.115932, W1_TOL)
}

fn eisenstein() -> Check {
    let (lhs, rhs) = series::eisenstein_check(1, 10_000);
    near("Eisenstein s=2", lhs, rhs, EISENSTEIN_TOL)
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Check, u64); 13] = [
        ("series reproduction D=96", series_d96, 5),
        ("series reproduction D=324", series_d324, 10),
        ("definite series convergence", thm_top_convergence, 5),
        ("class-number oracle D<0", class_number_oracle, 60),
        ("square discriminant classes", square_classes, 60),
        ("three squares and Υ", three_squares, 120),
        ("Pell from rivers", pell, 120),
        ("root products", root_products, 60),
        ("necklace and word bijections", bijections, 30),
        ("reduction certificates", certificates, 30),
        ("Gauss, Zagier and simple cycles agree", method_agreement, 60),
        ("class-number closure with W1", closure, 10),
        ("Eisenstein check s=2", eisenstein, 10),
    ];
    let mut failed = 0;
    for (i, (name, run, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let mut outcome = run();
        let took = start.elapsed();
        if outcome.is_ok() && took > Duration::from_secs(*budget) {
            outcome = Err(format!("took {took:.2?}, budget {budget} s"));
        }
        match outcome {
            Ok(()) => println!("PASS {:>2} {name} ({took:.2?})", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({took:.2?}): {why}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
