use std::fs;
use std::io::{self, Read};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{CommandFactory, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use qtopo::classnum;
use qtopo::reduce::{self, Canonical};
use qtopo::riverword::{self, BinaryWord, Necklace, PellSolution};
use qtopo::series::{self, SeriesReport};
use qtopo::topograph::{self, EdgeCursor, ExportFormat, TopographDoc};
use qtopo::{int, is_square, Int, QuadForm, UniMat};

#[derive(Parser)]
#[command(name = "qtopo", version, about = "Binary quadratic forms on Conway topographs")]
struct Cli {
    /// Structured output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Reduce a form to the canonical representative of its class.
    Reduce {
        #[arg(long, allow_hyphen_values = true)]
        form: QuadForm,
        #[arg(long, value_enum, default_value_t = Method::Auto)]
        method: Method,
    },
    /// Class numbers of a discriminant.
    Classnum {
        #[arg(long, allow_hyphen_values = true)]
        disc: Int,
        /// Wide-sense count only.
        #[arg(long, conflicts_with = "hurwitz")]
        star: bool,
        /// Hurwitz class number H(|D|) only.
        #[arg(long)]
        hurwitz: bool,
    },
    /// Fundamental unit from the river period.
    Pell {
        #[arg(long, allow_hyphen_values = true)]
        disc: Int,
    },
    /// Necklaces of the classes of a non-square discriminant, or the form of one necklace.
    Necklace {
        #[arg(long, allow_hyphen_values = true, required_unless_present = "decode")]
        disc: Option<Int>,
        #[arg(long, conflicts_with = "disc")]
        decode: Option<Necklace>,
    },
    /// Binary words of the classes of a square discriminant, or the form of one word.
    Word {
        #[arg(long, allow_hyphen_values = true, required_unless_present = "decode")]
        disc: Option<Int>,
        #[arg(long, conflicts_with = "disc")]
        decode: Option<BinaryWord>,
    },
    /// River of an indefinite form.
    River {
        #[arg(long, allow_hyphen_values = true)]
        form: QuadForm,
    },
    /// Export the vertices near a form.
    Topograph {
        #[arg(long, allow_hyphen_values = true)]
        form: QuadForm,
        #[arg(long, default_value_t = 2)]
        depth: usize,
        #[arg(long, value_enum, default_value_t = Format::Dot)]
        format: Format,
    },
    /// Partial sums of a topograph series against its closed form.
    Series {
        #[arg(long, value_enum)]
        theorem: Theorem,
        /// Required unless --form is given; unused by eisenstein.
        #[arg(long, allow_hyphen_values = true)]
        disc: Option<Int>,
        #[arg(long, default_value_t = 15)]
        depth: usize,
        /// Seed topograph; defaults to a canonical class of the discriminant.
        #[arg(long, allow_hyphen_values = true)]
        form: Option<QuadForm>,
    },
    /// Representations as a sum of three squares.
    R3 {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        primitive: bool,
        #[arg(long, value_enum, default_value_t = R3Method::Brute)]
        method: R3Method,
    },
    /// Revalidate an exported topograph document (`-` reads standard input).
    Verify {
        #[arg(long, default_value = "-")]
        file: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Auto,
    Gauss,
    Zagier,
    Simple,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Dot,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Theorem {
    Mik,
    Mt,
    Mt2,
    Sq,
    Sq2,
    Hurwitz,
    Eisenstein,
}

#[derive(Clone, Copy, ValueEnum)]
enum R3Method {
    Brute,
    Class,
}

/// Any library error: bad discriminant, wrong regime, malformed document.
struct DomainError(String);

impl<E: std::error::Error> From<E> for DomainError {
    fn from(e: E) -> Self {
        DomainError(e.to_string())
    }
}

fn domain(msg: impl Into<String>) -> DomainError {
    DomainError(msg.into())
}

struct Output {
    text: String,
    json: Value,
}

fn matrix_json(m: &UniMat) -> Value {
    json!([[m.alpha.to_string(), m.beta.to_string()], [m.gamma.to_string(), m.delta.to_string()]])
}

fn form_json(q: &QuadForm) -> Value {
    json!([q.a.to_string(), q.b.to_string(), q.c.to_string()])
}

fn opt_string<T: ToString>(v: &Option<T>) -> Value {
    v.as_ref().map_or(Value::Null, |x| Value::String(x.to_string()))
}

fn check_disc(d: &Int) -> Result<(), DomainError> {
    let r = d.clone() % int(4);
    if r == int(0) || r == int(1) || r == int(-3) {
        Ok(())
    } else {
        Err(domain(format!("{d} is not a discriminant (must be 0 or 1 mod 4)")))
    }
}

fn run_reduce(q: &QuadForm, method: Method) -> Result<Output, DomainError> {
    let r = match method {
        Method::Auto => reduce::reduce_auto(q)?,
        Method::Gauss => reduce::gauss_cycle(q)?,
        Method::Zagier => reduce::zagier_cycle(q)?,
        Method::Simple => reduce::reduce_simple_cycle(q)?,
    };
    let forms: Vec<String> = r.canonical.forms().iter().map(|f| f.to_string()).collect();
    let shape = match r.canonical {
        Canonical::Form(_) => "form",
        Canonical::Cycle(_) => "cycle",
    };
    let mut text = format!("canonical: {}\ntransform: {}\nword: {}", forms.join(" "), r.transform, r.steps);
    if r.negated {
        text.push_str("\nnegated: true");
    }
    Ok(Output {
        text,
        json: json!({
            "input": form_json(q),
            "kind": shape,
            "canonical": r.canonical.forms().iter().map(form_json).collect::<Vec<_>>(),
            "transform": matrix_json(&r.transform),
            "word": r.steps.to_string(),
            "negated": r.negated,
        }),
    })
}

fn run_classnum(d: &Int, star: bool, hurwitz: bool) -> Result<Output, DomainError> {
    check_disc(d)?;
    let c = classnum::class_count(d)?;
    let text = if star {
        format!("h* = {}", opt_string(&c.h_star).as_str().unwrap_or("unbounded"))
    } else if hurwitz {
        let h = c.hurwitz.as_ref().ok_or_else(|| domain("the Hurwitz class number needs D < 0"))?;
        format!("H({}) = {h}", -d)
    } else {
        let mut t = format!("h = {}", c.h);
        if let Some(s) = &c.h_star {
            t.push_str(&format!("\nh* = {s}"));
        }
        if let Some(h) = &c.hurwitz {
            t.push_str(&format!("\nH({}) = {h}", -d));
        }
        t
    };
    Ok(Output {
        text,
        json: json!({
            "discriminant": d.to_string(),
            "h": c.h.to_string(),
            "h_star": opt_string(&c.h_star),
            "hurwitz": opt_string(&c.hurwitz),
        }),
    })
}

/// `(t + u√D)/2` with the square part of `D` pulled out of the radical.
fn unit_exact(p: &PellSolution) -> String {
    let mut core = p.d.clone();
    let mut outside = int(1);
    let mut k = int(2);
    while &k * &k <= core {
        let sq = &k * &k;
        while (&core % &sq) == int(0) {
            core /= &sq;
            outside *= &k;
        }
        k += 1;
    }
    let coeff = &p.u * &outside;
    let even = (&p.t % int(2)) == int(0) && (&coeff % int(2)) == int(0);
    let (t, c, den) = if even { (&p.t / int(2), coeff / int(2), "") } else { (p.t.clone(), coeff, "/2") };
    let c = if c == int(1) { String::new() } else { c.to_string() };
    if den.is_empty() {
        format!("{t}+{c}√{core}")
    } else {
        format!("({t}+{c}√{core}){den}")
    }
}

fn pell_json(p: &PellSolution) -> Value {
    json!({
        "t": p.t.to_string(),
        "u": p.u.to_string(),
        "norm": p.sign.value(),
        "epsilon": p.epsilon().to_f64(),
        "exact": unit_exact(p),
    })
}

fn run_pell(d: &Int) -> Result<Output, DomainError> {
    check_disc(d)?;
    let p = riverword::pell_fundamental(d)?;
    let neg = riverword::negative_pell(d)?;
    let mut text = format!("t={} u={}\nε = {} ≈ {}", p.t, p.u, unit_exact(&p), p.epsilon().to_f64());
    match &neg {
        Some(n) => text.push_str(&format!("\nnegative Pell: t={} u={} (ε* = {})", n.t, n.u, unit_exact(n))),
        None => text.push_str("\nnegative Pell: no solution"),
    }
    Ok(Output {
        text,
        json: json!({
            "discriminant": d.to_string(),
            "fundamental": pell_json(&p),
            "negative": neg.as_ref().map_or(Value::Null, pell_json),
        }),
    })
}

fn run_necklace(disc: Option<Int>, decode: Option<Necklace>) -> Result<Output, DomainError> {
    if let Some(n) = decode {
        let q = riverword::topograph_of_necklace(&n);
        return Ok(Output {
            text: format!("{n}: {q} (D = {})", q.discriminant()),
            json: json!({
                "necklace": n.to_string(),
                "form": form_json(&q),
                "discriminant": q.discriminant().to_string(),
            }),
        });
    }
    let d = disc.ok_or_else(|| domain("--disc or --decode is required"))?;
    check_disc(&d)?;
    let rows: Vec<(Necklace, QuadForm)> = riverword::class_necklaces(&d)?
        .into_iter()
        .map(|n| {
            let q = riverword::topograph_of_necklace(&n);
            (n, q)
        })
        .collect();
    Ok(Output {
        text: rows.iter().map(|(n, q)| format!("{n} {q}")).collect::<Vec<_>>().join("\n"),
        json: json!({
            "discriminant": d.to_string(),
            "classes": rows.iter().map(|(n, q)| json!({"necklace": n.to_string(), "form": form_json(q)})).collect::<Vec<_>>(),
        }),
    })
}

fn run_word(disc: Option<Int>, decode: Option<BinaryWord>) -> Result<Output, DomainError> {
    if let Some(w) = decode {
        let q = riverword::topograph_of_word(&w);
        return Ok(Output {
            text: format!("{w}: {q} (D = {})", q.discriminant()),
            json: json!({"word": w.to_string(), "form": form_json(&q), "discriminant": q.discriminant().to_string()}),
        });
    }
    let d = disc.ok_or_else(|| domain("--disc or --decode is required"))?;
    if d <= int(0) || !is_square(&d) {
        return Err(domain(format!("{d} is not a positive square")));
    }
    let m = d.sqrt();
    let mut rows = Vec::new();
    let mut r = int(1);
    while r <= m {
        if num_integer::Integer::gcd(&r, &m) == int(1) {
            let q = QuadForm::new(int(0), m.clone(), r.clone());
            rows.push((riverword::word_of(&q)?, q));
        }
        r += 1;
    }
    Ok(Output {
        text: rows.iter().map(|(w, q)| format!("{w} {q}")).collect::<Vec<_>>().join("\n"),
        json: json!({
            "discriminant": d.to_string(),
            "classes": rows.iter().map(|(w, q)| json!({"word": w.to_string(), "form": form_json(q)})).collect::<Vec<_>>(),
        }),
    })
}

fn run_river(q: &QuadForm) -> Result<Output, DomainError> {
    let river = topograph::find_river(q)?;
    let kind = format!("{:?}", river.kind).to_lowercase();
    let word = river.word_string();
    let edges: Vec<String> = river.edges.iter().map(|e| e.to_string()).collect();
    Ok(Output {
        text: format!("kind: {kind}\nword: {word}\nedges: {}", edges.join(" ")),
        json: json!({
            "form": form_json(q),
            "kind": kind,
            "word": word,
            "edges": river.edges.iter().map(form_json).collect::<Vec<_>>(),
        }),
    })
}

fn run_topograph(q: &QuadForm, depth: usize, format: Format, as_json: bool) -> Output {
    let root = EdgeCursor::new(q.clone());
    let doc = topograph::export_doc(&root, depth);
    let json = serde_json::to_value(&doc).expect("document serialises");
    let text = match format {
        Format::Dot if !as_json => topograph::export(&root, depth, ExportFormat::Dot),
        _ => topograph::export(&root, depth, ExportFormat::Json),
    };
    Output { text, json }
}

fn report_text(r: &SeriesReport) -> String {
    format!(
        "{} D={} depth={}: value {:.7}, target {:.7}, residual {:.3e} ({} terms)",
        r.theorem, r.discriminant, r.depth, r.value, r.target, r.residual, r.terms_used
    )
}

fn run_series(
    theorem: Theorem,
    disc: Option<Int>,
    depth: usize,
    form: Option<QuadForm>,
) -> Result<Output, DomainError> {
    let report = if let Theorem::Eisenstein = theorem {
        let (lhs, rhs) = series::eisenstein_check(1, depth.max(1) as u64);
        SeriesReport {
            theorem: "eisenstein".into(),
            discriminant: "0".into(),
            depth,
            value: lhs,
            target: rhs,
            residual: lhs - rhs,
            terms_used: 0,
        }
    } else {
        let d = match (&disc, &form) {
            (Some(d), _) => d.clone(),
            (None, Some(q)) => q.discriminant(),
            (None, None) => unreachable!("checked while parsing"),
        };
        check_disc(&d)?;
        if let Some(q) = &form {
            if q.discriminant() != d {
                return Err(domain(format!("{q} has discriminant {}, not {d}", q.discriminant())));
            }
        }
        let seed = match form {
            Some(q) => q,
            None => series::default_seed(&d)?,
        };
        match theorem {
            Theorem::Mik => series::series_neg(&seed, depth)?.0,
            Theorem::Mt => series::series_pos(&seed, depth)?.0,
            Theorem::Mt2 => series::series_pos(&seed, depth)?.1,
            Theorem::Sq => series::series_square(&seed, depth)?.0,
            Theorem::Sq2 => series::series_square(&seed, depth)?.1,
            Theorem::Hurwitz => series::hurwitz_series(&d, depth)?,
            Theorem::Eisenstein => unreachable!("handled above"),
        }
    };
    Ok(Output { text: report_text(&report), json: serde_json::to_value(&report).expect("report serialises") })
}

fn run_r3(n: u64, primitive: bool, method: R3Method) -> Result<Output, DomainError> {
    let count: Int = match (primitive, method) {
        (false, R3Method::Brute) => int(classnum::r3(n)),
        (true, R3Method::Brute) => int(classnum::r3_primitive(n)),
        (false, R3Method::Class) => classnum::r3_via_class(n)?,
        (true, R3Method::Class) => {
            if n <= 3 {
                return Err(domain("the class-number formula for primitive representations needs n > 3"));
            }
            classnum::r3p_via_class(n)?
        }
    };
    Ok(Output {
        text: count.to_string(),
        json: json!({"n": n.to_string(), "primitive": primitive, "count": count.to_string()}),
    })
}

fn run_verify(file: &str) -> Result<Output, DomainError> {
    let raw = if file == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        s
    } else {
        fs::read_to_string(file)?
    };
    let doc: TopographDoc = serde_json::from_str(&raw)?;
    let n = topograph::verify_doc(&doc)?;
    Ok(Output {
        text: format!("ok: {n} vertices consistent with D = {}", doc.discriminant),
        json: json!({"ok": true, "vertices": n, "discriminant": doc.discriminant}),
    })
}

fn dispatch(command: Command, as_json: bool) -> Result<Output, DomainError> {
    match command {
        Command::Reduce { form, method } => run_reduce(&form, method),
        Command::Classnum { disc, star, hurwitz } => run_classnum(&disc, star, hurwitz),
        Command::Pell { disc } => run_pell(&disc),
        Command::Necklace { disc, decode } => run_necklace(disc, decode),
        Command::Word { disc, decode } => run_word(disc, decode),
        Command::River { form } => run_river(&form),
        Command::Topograph { form, depth, format } => Ok(run_topograph(&form, depth, format, as_json)),
        Command::Series { theorem, disc, depth, form } => run_series(theorem, disc, depth, form),
        Command::R3 { n, primitive, method } => run_r3(n, primitive, method),
        Command::Verify { file } => run_verify(&file),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    if let Command::Series { theorem, disc: None, form: None, .. } = &cli.command {
        if !matches!(theorem, Theorem::Eisenstein) {
            let e = Cli::command().error(ErrorKind::MissingRequiredArgument, "series needs --disc or --form");
            let _ = e.print();
            return ExitCode::from(1);
        }
    }
    match dispatch(cli.command, cli.json) {
        Ok(out) if cli.json => {
            println!("{}", serde_json::to_string_pretty(&out.json).expect("json output"));
            ExitCode::SUCCESS
        }
        Ok(out) => {
            println!("{}", out.text);
            ExitCode::SUCCESS
        }
        Err(DomainError(msg)) => {
            if cli.json {
                println!("{}", json!({"error": msg}));
            } else {
                eprintln!("error: {msg}");
            }
            ExitCode::from(2)
        }
    }
}
