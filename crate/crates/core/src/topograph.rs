//! Navigation of the topograph: edge cursors, vertex views, breadth-first
//! enumeration, rivers, wells and export.

use std::collections::VecDeque;
use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::contfrac::{CfTerms, Real};
use crate::exact::{int, is_square, Int};
use crate::forms::{FormError, Letter, QuadForm, Root};
use crate::reduce::{self, ReduceError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TopoError {
    #[error("discriminant {0} is not positive")]
    NotPositive(Int),
    #[error("form {0} is not positive definite")]
    NotPositiveDefinite(QuadForm),
    #[error("vertex {id} violates the discriminant identities")]
    BadVertex { id: usize },
    #[error("malformed document: {0}")]
    Document(String),
    #[error(transparent)]
    Form(#[from] FormError),
    #[error(transparent)]
    Reduce(#[from] Box<ReduceError>),
}

impl From<ReduceError> for TopoError {
    fn from(e: ReduceError) -> Self {
        TopoError::Reduce(Box::new(e))
    }
}

/// A move of an edge cursor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Step {
    L,
    R,
    LInv,
    RInv,
    S,
}

impl Step {
    pub fn apply(self, q: &QuadForm) -> QuadForm {
        match self {
            Step::L => q.l(),
            Step::R => q.r(),
            Step::LInv => q.l_inv(),
            Step::RInv => q.r_inv(),
            Step::S => q.s(),
        }
    }
}

impl From<Letter> for Step {
    fn from(x: Letter) -> Step {
        match x {
            Letter::L => Step::L,
            Letter::R => Step::R,
            Letter::S => Step::S,
        }
    }
}

/// A directed edge, carrying the form whose middle coefficient is its label.
///
/// The regions at the head are `a`, `c` and `a+b+c`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EdgeCursor {
    pub form: QuadForm,
    pub path: Vec<Step>,
}

impl EdgeCursor {
    pub fn new(form: QuadForm) -> EdgeCursor {
        EdgeCursor { form, path: Vec::new() }
    }

    pub fn step(&self, s: Step) -> EdgeCursor {
        let mut path = self.path.clone();
        path.push(s);
        EdgeCursor { form: s.apply(&self.form), path }
    }

    /// Applies `x^k` one step at a time; negative `k` walks backwards.
    pub fn step_pow(&self, x: Letter, k: &Int) -> EdgeCursor {
        let n = k.magnitude().to_u64_digits().first().copied().unwrap_or(0);
        let s = match (x, k.is_negative()) {
            (Letter::L, false) => Step::L,
            (Letter::L, true) => Step::LInv,
            (Letter::R, false) => Step::R,
            (Letter::R, true) => Step::RInv,
            (Letter::S, _) => Step::S,
        };
        (0..n).fold(self.clone(), |c, _| c.step(s))
    }

    pub fn head(&self) -> VertexView {
        VertexView::at_head(&self.form)
    }
}

/// Regions and outgoing edge labels around one vertex.
///
/// `out_labels[i]` is the edge opposite `regions[i]`, so that
/// `e = s + t − r` holds position by position.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VertexView {
    pub regions: [Int; 3],
    pub out_labels: [Int; 3],
}

impl VertexView {
    pub fn at_head(q: &QuadForm) -> VertexView {
        let two = int(2);
        VertexView {
            regions: [q.a.clone(), q.c.clone(), q.head_region()],
            out_labels: [&q.b + &two * &q.c, &q.b + &two * &q.a, -&q.b],
        }
    }

    /// `2(r²+s²+t²) − (r+s+t)²`.
    pub fn discriminant_from_regions(&self) -> Int {
        let [r, s, t] = &self.regions;
        let sum = r + s + t;
        int(2) * (r * r + s * s + t * t) - &sum * &sum
    }

    /// `−ef − fg − ge`.
    pub fn discriminant_from_labels(&self) -> Int {
        let [e, f, g] = &self.out_labels;
        -(e * f) - f * g - g * e
    }

    /// Both discriminant formulas and the label rule agree with `d`.
    pub fn is_consistent(&self, d: &Int) -> bool {
        let [r, s, t] = &self.regions;
        let [e, f, g] = &self.out_labels;
        *e == s + t - r
            && *f == r + t - s
            && *g == r + s - t
            && self.discriminant_from_regions() == *d
            && self.discriminant_from_labels() == *d
    }
}

/// A vertex produced by [`bfs_vertices`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BfsVertex {
    pub id: usize,
    pub depth: usize,
    pub parent: Option<usize>,
    pub turn: Option<Letter>,
    /// Edge whose head is this vertex.
    pub edge: QuadForm,
    pub view: VertexView,
}

/// Breadth-first stream of the vertices within `max_depth` of the root's head.
pub struct Bfs {
    queue: VecDeque<(QuadForm, Option<usize>, Option<Letter>, usize)>,
    max_depth: usize,
    next_id: usize,
}

impl Iterator for Bfs {
    type Item = BfsVertex;

    fn next(&mut self) -> Option<BfsVertex> {
        let (edge, parent, turn, depth) = self.queue.pop_front()?;
        let id = self.next_id;
        self.next_id += 1;
        if depth < self.max_depth {
            let children: Vec<(QuadForm, Option<Letter>)> = if parent.is_none() {
                vec![(edge.s(), None), (edge.l(), Some(Letter::L)), (edge.r(), Some(Letter::R))]
            } else {
                vec![(edge.l(), Some(Letter::L)), (edge.r(), Some(Letter::R))]
            };
            for (child, t) in children {
                self.queue.push_back((child, Some(id), t, depth + 1));
            }
        }
        let view = VertexView::at_head(&edge);
        Some(BfsVertex { id, depth, parent, turn, edge, view })
    }
}

/// Every vertex within `max_depth` edges of the head of `root`, exactly once,
/// ordered by depth and then left before right.
pub fn bfs_vertices(root: &EdgeCursor, max_depth: usize) -> Bfs {
    let mut queue = VecDeque::new();
    queue.push_back((root.form.clone(), None, None, 0));
    Bfs { queue, max_depth, next_id: 0 }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RiverKind {
    /// Non-square positive discriminant.
    Periodic,
    /// Square discriminant, joining two lakes.
    Finite,
    /// The two lakes touch; no river edges.
    None,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RiverDescriptor {
    pub kind: RiverKind,
    /// Rightward river edges: one period, or lake to lake.
    pub edges: Vec<QuadForm>,
    /// Turns between consecutive edges (closing turn included for periodic rivers).
    pub word: Vec<Letter>,
}

impl RiverDescriptor {
    pub fn word_string(&self) -> String {
        self.word.iter().map(|x| x.to_string()).collect()
    }
}

/// `a > 0 > c`: a rightward river edge.
pub fn is_simple(q: &QuadForm) -> bool {
    q.a.is_positive() && q.c.is_negative()
}

/// Next rightward river edge after a simple form.
pub fn river_next(q: &QuadForm) -> (Letter, QuadForm) {
    if q.head_region().is_negative() {
        (Letter::L, q.l())
    } else {
        (Letter::R, q.r())
    }
}

/// First simple form met along the path of the first root, starting at `q` itself.
pub fn first_simple_on_root_path(q: &QuadForm) -> Result<QuadForm, TopoError> {
    if is_simple(q) {
        return Ok(q.clone());
    }
    let z = match q.first_root()? {
        Root::Quadratic(s) => Real::Surd(s),
        Root::Rational(r) => match r.finite() {
            Some(x) => Real::Rational(x.clone()),
            None => return Err(TopoError::NotPositive(q.discriminant())),
        },
    };
    let mut cur = q.clone();
    for (i, a) in CfTerms::new(z).enumerate() {
        let step = match (i % 2 == 0, a.is_negative()) {
            (true, false) => Step::L,
            (true, true) => Step::LInv,
            (false, _) => Step::R,
        };
        let mut k = a.magnitude().clone();
        while !k.is_zero() {
            cur = step.apply(&cur);
            if is_simple(&cur) {
                return Ok(cur);
            }
            k -= 1u32;
        }
    }
    Err(TopoError::NotPositive(q.discriminant()))
}

/// One period of a periodic river starting at a simple form.
pub fn river_period_from(start: &QuadForm) -> RiverDescriptor {
    let mut edges = vec![start.clone()];
    let mut word = Vec::new();
    let mut cur = start.clone();
    loop {
        let (x, next) = river_next(&cur);
        word.push(x);
        if next == *start {
            break;
        }
        edges.push(next.clone());
        cur = next;
    }
    RiverDescriptor { kind: RiverKind::Periodic, edges, word }
}

/// Lake-to-lake river of the square-discriminant class of `[0, m, r]`.
pub fn lake_river(m: &Int, r: &Int) -> RiverDescriptor {
    if r == m || r.is_zero() {
        return RiverDescriptor { kind: RiverKind::None, edges: Vec::new(), word: Vec::new() };
    }
    let mut cur = QuadForm::new(r.clone(), -m.clone(), Int::zero()).l();
    let mut edges = vec![cur.clone()];
    let mut word = Vec::new();
    while !cur.head_region().is_zero() {
        let (x, next) = river_next(&cur);
        word.push(x);
        edges.push(next.clone());
        cur = next;
    }
    RiverDescriptor { kind: RiverKind::Finite, edges, word }
}

/// The river of the topograph containing `q`.
pub fn find_river(q: &QuadForm) -> Result<RiverDescriptor, TopoError> {
    let d = q.discriminant();
    if !d.is_positive() {
        return Err(TopoError::NotPositive(d));
    }
    if is_square(&d) {
        let red = reduce::reduce_square(q)?;
        let f = red.canonical_form();
        Ok(lake_river(&f.b, &f.c))
    } else {
        Ok(river_period_from(&first_simple_on_root_path(q)?))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum WellKind {
    Vertex,
    Edge,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WellDescriptor {
    pub kind: WellKind,
    /// Vertex well: an edge whose head is the well. Edge well: the edge `[a,0,c]`.
    pub at: EdgeCursor,
    /// Outgoing labels at a vertex well, or the two flanking regions of an edge well.
    pub labels: Vec<Int>,
}

/// Descends from a positive definite form to the well of its topograph.
pub fn find_well(q: &QuadForm) -> Result<WellDescriptor, TopoError> {
    if !q.discriminant().is_negative() || !q.a.is_positive() {
        return Err(TopoError::NotPositiveDefinite(q.clone()));
    }
    let mut cur = EdgeCursor::new(q.clone());
    loop {
        if cur.form.b.is_zero() {
            let labels = vec![cur.form.a.clone(), cur.form.c.clone()];
            return Ok(WellDescriptor { kind: WellKind::Edge, at: cur, labels });
        }
        let v = cur.head();
        let [to_r, to_l, back] = &v.out_labels;
        let down = if back.is_negative() || back.is_zero() {
            Some(Step::S)
        } else if to_l.is_negative() || to_l.is_zero() {
            Some(Step::L)
        } else if to_r.is_negative() || to_r.is_zero() {
            Some(Step::R)
        } else {
            None
        };
        match down {
            Some(s) => cur = cur.step(s),
            None => {
                let labels = v.out_labels.to_vec();
                return Ok(WellDescriptor { kind: WellKind::Vertex, at: cur, labels });
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Dot,
    Json,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexDoc {
    pub id: usize,
    pub regions: [String; 3],
    pub out_labels: [String; 3],
    pub parent: Option<usize>,
    pub turn: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TopographDoc {
    pub discriminant: String,
    pub root: String,
    pub vertices: Vec<VertexDoc>,
}

fn strings(v: &[Int; 3]) -> [String; 3] {
    [v[0].to_string(), v[1].to_string(), v[2].to_string()]
}

pub fn export_doc(root: &EdgeCursor, max_depth: usize) -> TopographDoc {
    let f = &root.form;
    TopographDoc {
        discriminant: f.discriminant().to_string(),
        root: format!("{},{},{}", f.a, f.b, f.c),
        vertices: bfs_vertices(root, max_depth)
            .map(|v| VertexDoc {
                id: v.id,
                regions: strings(&v.view.regions),
                out_labels: strings(&v.view.out_labels),
                parent: v.parent,
                turn: v.turn.map(|t| t.to_string()),
            })
            .collect(),
    }
}

struct Dot<'a>(&'a EdgeCursor, usize);

impl fmt::Display for Dot<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "digraph topograph {{")?;
        writeln!(f, "  // discriminant {}", self.0.form.discriminant())?;
        for v in bfs_vertices(self.0, self.1) {
            let [r, s, t] = &v.view.regions;
            writeln!(f, "  v{} [label=\"{r}, {s}, {t}\"];", v.id)?;
            if let Some(p) = v.parent {
                let e = &v.edge;
                writeln!(f, "  v{p} -> v{} [label=\"{} | {} | {}\"];", v.id, e.b, e.a, e.c)?;
            }
        }
        writeln!(f, "}}")
    }
}

/// Renders the vertices within `max_depth` of the root as DOT or JSON.
pub fn export(root: &EdgeCursor, max_depth: usize, format: ExportFormat) -> String {
    match format {
        ExportFormat::Dot => Dot(root, max_depth).to_string(),
        ExportFormat::Json => serde_json::to_string_pretty(&export_doc(root, max_depth)).expect("serializable"),
    }
}

/// Re-checks every vertex of an exported document; returns the vertex count.
pub fn verify_doc(doc: &TopographDoc) -> Result<usize, TopoError> {
    let parse = |s: &str| s.parse::<Int>().map_err(|_| TopoError::Document(format!("bad integer {s:?}")));
    let d = parse(&doc.discriminant)?;
    for v in &doc.vertices {
        let to3 =
            |a: &[String; 3]| -> Result<[Int; 3], TopoError> { Ok([parse(&a[0])?, parse(&a[1])?, parse(&a[2])?]) };
        let view = VertexView { regions: to3(&v.regions)?, out_labels: to3(&v.out_labels)? };
        if !view.is_consistent(&d) {
            return Err(TopoError::BadVertex { id: v.id });
        }
        if let Some(p) = v.parent {
            if p >= v.id {
                return Err(TopoError::Document(format!("vertex {} has later parent {p}", v.id)));
            }
        }
    }
    Ok(doc.vertices.len())
}
