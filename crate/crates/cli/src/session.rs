//! Session files: rings, modules, complexes, maps and towers, followed by
//! `run` lines. Parsing validates every object; printing a parsed session
//! gives text that parses back to the same objects.

use std::collections::HashMap;
use std::fmt::Write as _;

use tac_core::{
    complete_resolution, extend_morphism, minimal_free_resolution, ring_pd, BaseChange, ChainComplex, ChainMap, Counit,
    FreeMap, ModulePresentation, Poly, PolyRing, PrimeField, QuotientRing, RingClass, Tail,
};

use crate::error::{concept, CliError, Pos};
use crate::lexer::{tokenize, Tok, Token};

/// Verification window used when a command does not name one.
pub const DEFAULT_WINDOW: (i64, i64) = (-6, 6);

#[derive(Clone, Debug)]
pub struct Session {
    pub field: PrimeField,
    field_declared: bool,
    pub decls: Vec<Decl>,
    pub commands: Vec<Command>,
    items: Vec<Item>,
    index: HashMap<String, usize>,
}

#[derive(Clone, Copy, Debug)]
enum Item {
    Decl(usize),
    Run(usize),
}

#[derive(Clone, Debug)]
pub enum Decl {
    Ring(RingDecl),
    Module(ModuleDecl),
    Complex(ComplexDecl),
    Map(MapDecl),
    Tower(TowerDecl),
}

impl Decl {
    pub fn name(&self) -> &str {
        match self {
            Decl::Ring(d) => &d.name,
            Decl::Module(d) => &d.name,
            Decl::Complex(d) => &d.name,
            Decl::Map(d) => &d.name,
            Decl::Tower(d) => &d.name,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Decl::Ring(_) => "ring",
            Decl::Module(_) => "module",
            Decl::Complex(_) => "complex",
            Decl::Map(_) => "map",
            Decl::Tower(_) => "tower",
        }
    }
}

#[derive(Clone, Debug)]
pub struct RingDecl {
    pub name: String,
    pub def: RingDef,
    pub ring: QuotientRing,
    /// `pd_Q R` for `R = Q | extra ...`.
    pub pd_over_parent: Option<usize>,
}

#[derive(Clone, Debug)]
pub enum RingDef {
    Poly { vars: Vec<String>, ideal: Vec<Poly> },
    Quotient { parent: String, extra: Vec<Poly> },
}

#[derive(Clone, Debug)]
pub struct ModuleDecl {
    pub name: String,
    pub ring: String,
    pub module: ModulePresentation,
}

#[derive(Clone, Debug)]
pub struct ComplexDecl {
    pub name: String,
    pub ring: String,
    pub def: ComplexDef,
    pub complex: ChainComplex,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ComplexDef {
    Literal,
    CompleteRes(String),
    Resolve {
        module: String,
        length: usize,
    },
    ApplyT(String),
    ApplyS {
        complex: String,
        to: String,
    },
    /// Source `STC` of the counit at `C`.
    St(String),
    Dual(String),
    Shift(String, i64),
}

#[derive(Clone, Debug)]
pub struct MapDecl {
    pub name: String,
    pub source: String,
    pub target: String,
    pub def: MapDef,
    pub map: ChainMap,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MapDef {
    Literal,
    Identity,
    Zero,
    Counit(String),
    Unit(String),
}

/// `Q1 -> Q2 -> Q3` with a complex over `Q1` (for `S`) and one over `Q3`
/// (for `T`).
#[derive(Clone, Debug)]
pub struct TowerDecl {
    pub name: String,
    pub rings: [String; 3],
    pub s_complex: String,
    pub t_complex: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Command {
    pub line: usize,
    pub kind: CommandKind,
    pub window: (i64, i64),
    /// Normalized text after `run`.
    pub text: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CommandKind {
    Check(String),
    Resolve { module: String, length: usize },
    CompleteRes(String),
    ApplyS { complex: String, to: String },
    ApplyT(String),
    Unit { complex: String, to: String },
    Counit { complex: String, against: Option<String> },
    ApproxRight(String),
    ApproxLeft(String),
    Homotopic(String, String),
    Cone(String),
    TrCone(String),
    Dual { complex: String, to: Option<String> },
    Shift(String, i64),
    Minimality(String, String),
    TriangleRes { complex: String, depth: usize },
    TriangleIdentities(String),
    ComposeCheck(String),
}

impl Session {
    fn empty() -> Self {
        Session {
            field: PrimeField::default(),
            field_declared: false,
            decls: Vec::new(),
            commands: Vec::new(),
            items: Vec::new(),
            index: HashMap::new(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn get(&self, name: &str) -> Option<&Decl> {
        self.index.get(name).map(|&i| &self.decls[i])
    }

    pub fn ring(&self, name: &str) -> Option<&RingDecl> {
        match self.get(name) {
            Some(Decl::Ring(r)) => Some(r),
            _ => None,
        }
    }

    pub fn module(&self, name: &str) -> Option<&ModuleDecl> {
        match self.get(name) {
            Some(Decl::Module(m)) => Some(m),
            _ => None,
        }
    }

    pub fn complex(&self, name: &str) -> Option<&ComplexDecl> {
        match self.get(name) {
            Some(Decl::Complex(c)) => Some(c),
            _ => None,
        }
    }

    pub fn map(&self, name: &str) -> Option<&MapDecl> {
        match self.get(name) {
            Some(Decl::Map(m)) => Some(m),
            _ => None,
        }
    }

    pub fn tower(&self, name: &str) -> Option<&TowerDecl> {
        match self.get(name) {
            Some(Decl::Tower(t)) => Some(t),
            _ => None,
        }
    }

    /// Name under which `ring` was declared.
    pub fn ring_name(&self, ring: &QuotientRing) -> Option<&str> {
        self.decls.iter().find_map(|d| match d {
            Decl::Ring(r) if r.ring == *ring => Some(r.name.as_str()),
            _ => None,
        })
    }

    /// Base change `Q -> R` for `R` declared as a quotient of `Q`.
    pub fn base_change_into(&self, r: &str) -> Result<BaseChange, String> {
        let rd = self.ring(r).ok_or_else(|| format!("`{r}` is not a ring"))?;
        let RingDef::Quotient { parent, .. } = &rd.def else {
            return Err(format!("ring `{r}` is not declared as a quotient `{r} = Q | extra ...`"));
        };
        let q = &self.ring(parent).expect("parents are checked at parse time").ring;
        BaseChange::new(q, &rd.ring).map_err(|e| concept(&e))
    }

    /// The unique ring declared as a quotient of `q`, or `to` when given.
    pub fn child_of(&self, q: &str, to: Option<&str>) -> Result<String, String> {
        if let Some(t) = to {
            return match self.ring(t).map(|r| &r.def) {
                Some(RingDef::Quotient { parent, .. }) if parent == q => Ok(t.to_string()),
                Some(_) => Err(format!("`{t}` is not declared as a quotient of `{q}`")),
                None => Err(format!("`{t}` is not a ring")),
            };
        }
        let kids: Vec<&str> = self
            .decls
            .iter()
            .filter_map(|d| match d {
                Decl::Ring(RingDecl { name, def: RingDef::Quotient { parent, .. }, .. }) if parent == q => {
                    Some(name.as_str())
                }
                _ => None,
            })
            .collect();
        match kids.as_slice() {
            [one] => Ok(one.to_string()),
            [] => Err(format!("no ring is declared as a quotient of `{q}`")),
            _ => Err(format!("several rings are quotients of `{q}` ({}); pass --to", kids.join(", "))),
        }
    }

    /// Text that parses back to this session.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if self.field_declared {
            writeln!(out, "field {}", self.field.characteristic()).unwrap();
        }
        for item in &self.items {
            match *item {
                Item::Decl(i) => out.push_str(&self.decl_text(&self.decls[i])),
                Item::Run(i) => writeln!(out, "run {}", self.commands[i].text).unwrap(),
            }
        }
        out
    }

    fn decl_text(&self, d: &Decl) -> String {
        match d {
            Decl::Ring(r) => {
                let fmt = |ps: &[Poly]| ps.iter().map(|p| r.ring.format(p)).collect::<Vec<_>>().join(", ");
                match &r.def {
                    RingDef::Poly { vars, ideal } if ideal.is_empty() => {
                        format!("ring {} = poly {}\n", r.name, vars.join(","))
                    }
                    RingDef::Poly { vars, ideal } => {
                        format!("ring {} = poly {} | ideal {}\n", r.name, vars.join(","), fmt(ideal))
                    }
                    RingDef::Quotient { parent, extra } => {
                        format!("ring {} = {parent} | extra {}\n", r.name, fmt(extra))
                    }
                }
            }
            Decl::Module(m) => {
                format!("module {} over {} = coker {}\n", m.name, m.ring, matrix_text(m.module.relations()))
            }
            Decl::Complex(c) => {
                let body = match &c.def {
                    ComplexDef::Literal => literal_complex_text(&c.complex),
                    ComplexDef::CompleteRes(m) => format!("complete-res {m}"),
                    ComplexDef::Resolve { module, length } => format!("resolve {module} length {length}"),
                    ComplexDef::ApplyT(x) => format!("apply-t {x}"),
                    ComplexDef::ApplyS { complex, to } => format!("apply-s {complex} to {to}"),
                    ComplexDef::St(x) => format!("st {x}"),
                    ComplexDef::Dual(x) => format!("dual {x}"),
                    ComplexDef::Shift(x, k) => format!("shift {x} {k}"),
                };
                format!("complex {} over {} = {body}\n", c.name, c.ring)
            }
            Decl::Map(m) => {
                let body = match &m.def {
                    MapDef::Literal => literal_map_text(&m.map),
                    MapDef::Identity => "identity".into(),
                    MapDef::Zero => "zero".into(),
                    MapDef::Counit(c) => format!("counit {c}"),
                    MapDef::Unit(d) => format!("unit {d}"),
                };
                format!("map {}: {} -> {} = {body}\n", m.name, m.source, m.target)
            }
            Decl::Tower(t) => format!(
                "tower {} = {} -> {} -> {} with {}, {}\n",
                t.name, t.rings[0], t.rings[1], t.rings[2], t.s_complex, t.t_complex
            ),
        }
    }
}

pub fn matrix_text(m: &FreeMap) -> String {
    if m.rows() == 0 || m.cols() == 0 {
        format!("zero({}, {})", m.rows(), m.cols())
    } else {
        m.to_text()
    }
}

pub fn tail_text(t: Tail) -> String {
    match t {
        Tail::Zero => "zero".into(),
        Tail::Opaque => "opaque".into(),
        Tail::Periodic { period } => format!("periodic {period}"),
        Tail::Syzygy { sign } => {
            if sign < 0 {
                "syzygy -1".into()
            } else {
                "syzygy".into()
            }
        }
        Tail::Cosyzygy { sign } => {
            if sign < 0 {
                "cosyzygy -1".into()
            } else {
                "cosyzygy".into()
            }
        }
    }
}

fn literal_complex_text(c: &ChainComplex) -> String {
    let (lo, hi) = c.window();
    let mut s = format!("window {lo}..{hi}");
    if lo == hi {
        write!(s, " ranks [{}]", c.window_ranks()[0]).unwrap();
    }
    let entries: Vec<String> = c
        .window_differentials()
        .iter()
        .enumerate()
        .map(|(k, d)| format!("deg {}: {}", lo + k as i64 + 1, matrix_text(d)))
        .collect();
    write!(s, " {{ {} }}", entries.join(", ")).unwrap();
    match (c.above(), c.below()) {
        (Tail::Periodic { period: a }, Tail::Periodic { period: b }) if a == b => write!(s, " period {a}").unwrap(),
        (a, b) => {
            if a != Tail::Opaque {
                write!(s, " above {}", tail_text(a)).unwrap();
            }
            if b != Tail::Opaque {
                write!(s, " below {}", tail_text(b)).unwrap();
            }
        }
    }
    s
}

fn literal_map_text(m: &ChainMap) -> String {
    let entries: Vec<String> = m
        .components()
        .iter()
        .enumerate()
        .map(|(k, f)| format!("deg {}: {}", m.lo() + k as i64, matrix_text(f)))
        .collect();
    let mut s = format!("{{ {} }}", entries.join(", "));
    if let Some(p) = m.period() {
        write!(s, " period {p}").unwrap();
    }
    s
}

pub fn class_text(c: RingClass) -> &'static str {
    match c {
        RingClass::Regular => "regular",
        RingClass::Hypersurface => "hypersurface",
        RingClass::CompleteIntersection { artinian: true } => "artinian complete intersection",
        RingClass::CompleteIntersection { artinian: false } => "complete intersection",
        RingClass::Artinian => "artinian",
        RingClass::Other => "other",
    }
}

/// `f` on exactly `[lo, hi]`: periodic wrap or stored components where they
/// cover the window, otherwise lifted by the comparison theorem.
pub fn materialize(f: &ChainMap, lo: i64, hi: i64) -> tac_core::Result<ChainMap> {
    let src = f.source().extend_to(lo, hi)?;
    let tgt = f.target().extend_to(lo, hi)?;
    let (flo, fhi) = f.window();
    if f.period().is_some() || (flo <= lo && hi <= fhi) {
        let comps = (lo..=hi).map(|n| f.try_component(n)).collect::<tac_core::Result<Vec<_>>>()?;
        return ChainMap::new(&src, &tgt, lo, comps);
    }
    let g = f.retarget(&src, &tgt)?;
    extend_morphism(&g, lo.min(flo), hi.max(fhi))?.restrict(lo, hi)
}

/// `[lo, hi]` clipped to the degrees every complex in `cs` knows; opaque
/// tails stop at their stored window.
pub fn known_range(cs: &[&ChainComplex], lo: i64, hi: i64) -> (i64, i64) {
    let lo = (lo..=hi).find(|&n| cs.iter().all(|c| c.knows(n))).unwrap_or(lo);
    let hi = (lo..=hi).rev().find(|&n| cs.iter().all(|c| c.knows(n))).unwrap_or(hi);
    (lo, hi)
}

/// Equal ranks and differentials on `[lo, hi]`.
pub fn same_complex(a: &ChainComplex, b: &ChainComplex, lo: i64, hi: i64) -> bool {
    a.ring() == b.ring()
        && (lo..=hi).all(|n| match (a.try_rank(n), b.try_rank(n)) {
            (Ok(x), Ok(y)) => x == y,
            _ => false,
        })
        && (lo + 1..=hi).all(|n| match (a.try_d(n), b.try_d(n)) {
            (Ok(x), Ok(y)) => x == y,
            _ => false,
        })
}

pub fn parse_session(src: &str) -> Result<Session, CliError> {
    let toks = tokenize(src)?;
    let mut p = Parser { src, toks, i: 0, session: Session::empty(), counits: HashMap::new() };
    p.run()?;
    Ok(p.session)
}

struct Parser<'a> {
    src: &'a str,
    toks: Vec<Token>,
    i: usize,
    session: Session,
    counits: HashMap<String, Counit>,
}

type PResult<T> = Result<T, CliError>;

impl Parser<'_> {
    fn peek(&self) -> &Token {
        &self.toks[self.i]
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.i].clone();
        if t.tok != Tok::Eof {
            self.i += 1;
        }
        t
    }

    fn err<T>(&self, tok: &Token, what: &str) -> PResult<T> {
        Err(CliError::parse(tok.pos, format!("expected {what}, found {}", tok.tok.describe())))
    }

    fn is_punct(&self, p: &str) -> bool {
        matches!(self.peek().tok, Tok::Punct(q) if q == p)
    }

    fn is_ident(&self, w: &str) -> bool {
        matches!(&self.peek().tok, Tok::Ident(s) if s == w)
    }

    fn punct(&mut self, p: &str) -> PResult<Token> {
        if self.is_punct(p) {
            Ok(self.bump())
        } else {
            let t = self.peek().clone();
            self.err(&t, &format!("`{p}`"))
        }
    }

    fn keyword(&mut self, w: &str) -> PResult<Token> {
        if self.is_ident(w) {
            Ok(self.bump())
        } else {
            let t = self.peek().clone();
            self.err(&t, &format!("`{w}`"))
        }
    }

    fn ident(&mut self, what: &str) -> PResult<(String, Token)> {
        let t = self.bump();
        match &t.tok {
            Tok::Ident(s) => Ok((s.clone(), t.clone())),
            _ => self.err(&t, what),
        }
    }

    fn int(&mut self) -> PResult<i64> {
        let neg = self.is_punct("-");
        if neg {
            self.bump();
        }
        let t = self.bump();
        match t.tok {
            Tok::Int(v) => Ok(if neg { -v } else { v }),
            _ => self.err(&t, "an integer"),
        }
    }

    fn count(&mut self, what: &str) -> PResult<usize> {
        let t = self.peek().clone();
        let v = self.int()?;
        usize::try_from(v).map_err(|_| CliError::parse(t.pos, format!("{what} must be nonnegative")))
    }

    fn end_of_statement(&mut self) -> PResult<()> {
        let t = self.bump();
        match t.tok {
            Tok::Newline | Tok::Eof => Ok(()),
            _ => self.err(&t, "end of line"),
        }
    }

    fn run(&mut self) -> PResult<()> {
        loop {
            let t = self.peek().clone();
            match &t.tok {
                Tok::Eof => return Ok(()),
                Tok::Newline => {
                    self.bump();
                }
                Tok::Ident(w) => {
                    match w.as_str() {
                        "field" => self.field_stmt()?,
                        "ring" => self.ring_stmt()?,
                        "module" => self.module_stmt()?,
                        "complex" => self.complex_stmt()?,
                        "map" => self.map_stmt()?,
                        "tower" => self.tower_stmt()?,
                        "run" => {
                            self.run_stmt()?;
                            continue;
                        }
                        _ => return self.err(&t, "a statement (field, ring, module, complex, map, tower, run)"),
                    }
                    self.end_of_statement()?;
                }
                _ => return self.err(&t, "a statement"),
            }
        }
    }

    fn declare(&mut self, tok: &Token, d: Decl) -> PResult<()> {
        if let Some(old) = self.session.get(d.name()) {
            return Err(CliError::semantic(
                tok.pos.line,
                format!("`{}` is already declared as a {}", d.name(), old.kind()),
            ));
        }
        self.session.index.insert(d.name().to_string(), self.session.decls.len());
        self.session.items.push(Item::Decl(self.session.decls.len()));
        self.session.decls.push(d);
        Ok(())
    }

    fn field_stmt(&mut self) -> PResult<()> {
        let kw = self.bump();
        if self.session.field_declared || !self.session.decls.is_empty() {
            return Err(CliError::semantic(kw.pos.line, "`field` must come first and only once"));
        }
        let t = self.peek().clone();
        let p = self.int()?;
        let p = u32::try_from(p).map_err(|_| CliError::parse(t.pos, "characteristic out of range"))?;
        self.session.field = PrimeField::new(p).map_err(|e| CliError::semantic(t.pos.line, e.to_string()))?;
        self.session.field_declared = true;
        Ok(())
    }

    /// Polynomial text up to a delimiter, parsed in `ring`.
    fn poly(&mut self, ring: &PolyRing, stops: &[&str]) -> PResult<Poly> {
        let first = self.peek().clone();
        let mut last = first.clone();
        let mut consumed = false;
        let mut depth = 0;
        loop {
            let t = self.peek();
            let stop = match &t.tok {
                Tok::Newline | Tok::Eof => true,
                Tok::Punct("(") => {
                    depth += 1;
                    false
                }
                Tok::Punct(")") => {
                    depth -= 1;
                    false
                }
                Tok::Punct(p) => depth == 0 && stops.contains(p),
                Tok::Ident(w) => depth == 0 && stops.contains(&w.as_str()),
                _ => false,
            };
            if stop {
                break;
            }
            last = self.bump();
            consumed = true;
        }
        if !consumed {
            return self.err(&first, "a polynomial");
        }
        let text = &self.src[first.start..last.end];
        ring.parse(text).map_err(|e| CliError::parse(first.pos, format!("in `{text}`: {e}")))
    }

    fn poly_list(&mut self, ring: &PolyRing) -> PResult<Vec<Poly>> {
        let mut out = vec![self.poly(ring, &[","])?];
        while self.is_punct(",") {
            self.bump();
            out.push(self.poly(ring, &[","])?);
        }
        Ok(out)
    }

    fn matrix(&mut self, ring: &QuotientRing) -> PResult<FreeMap> {
        if self.is_ident("zero") {
            self.bump();
            self.punct("(")?;
            let r = self.count("rows")?;
            self.punct(",")?;
            let c = self.count("columns")?;
            self.punct(")")?;
            return Ok(FreeMap::zero(ring, r, c));
        }
        let open = self.punct("[")?;
        let mut rows: Vec<Vec<Poly>> = Vec::new();
        while !self.is_punct("]") {
            let row_tok = self.punct("[")?;
            let mut row = Vec::new();
            while !self.is_punct("]") {
                let p = self.poly(ring.poly_ring(), &[",", "]"])?;
                row.push(ring.reduce(&p));
                if !self.is_punct("]") {
                    self.punct(",")?;
                }
            }
            self.bump();
            if let Some(first) = rows.first() {
                if first.len() != row.len() {
                    return Err(CliError::parse(
                        row_tok.pos,
                        format!("row has {} entries, the first row has {}", row.len(), first.len()),
                    ));
                }
            }
            rows.push(row);
            if !self.is_punct("]") {
                self.punct(",")?;
            }
        }
        self.bump();
        let (r, c) = (rows.len(), rows.first().map_or(0, Vec::len));
        FreeMap::from_rows(ring, r, c, rows).map_err(|e| CliError::parse(open.pos, e.to_string()))
    }

    fn ring_stmt(&mut self) -> PResult<()> {
        self.bump();
        let (name, nt) = self.ident("a ring name")?;
        self.punct("=")?;
        let line = nt.pos.line;
        let decl = if self.is_ident("poly") {
            self.bump();
            let mut vars = vec![self.ident("a variable")?.0];
            while self.is_punct(",") {
                self.bump();
                vars.push(self.ident("a variable")?.0);
            }
            let pr =
                PolyRing::new(self.session.field, vars.clone()).map_err(|e| CliError::semantic(line, e.to_string()))?;
            let mut ideal = Vec::new();
            if self.is_punct("|") {
                self.bump();
                self.keyword("ideal")?;
                ideal = self.poly_list(&pr)?;
            }
            check_local(line, &name, &ideal, &pr)?;
            let ring = QuotientRing::from_polys(pr, ideal.clone()).named(&name);
            if ring.is_zero(&ring.one()) {
                return Err(CliError::semantic(line, format!("ring `{name}` is the zero ring")));
            }
            RingDecl { name, def: RingDef::Poly { vars, ideal }, ring, pd_over_parent: None }
        } else {
            let (parent, pt) = self.ident("`poly` or a parent ring")?;
            let q = match self.session.ring(&parent) {
                Some(r) => r.ring.clone(),
                None => return Err(CliError::semantic(pt.pos.line, format!("`{parent}` is not a declared ring"))),
            };
            self.punct("|")?;
            self.keyword("extra")?;
            let extra = self.poly_list(q.poly_ring())?;
            check_local(line, &name, &extra, q.poly_ring())?;
            if extra.iter().all(|p| q.is_zero(p)) {
                return Err(CliError::semantic(
                    line,
                    format!(
                        "`{name} = {parent} | extra ...` declares a kernel, but every generator already vanishes in \
                         {parent}, so {name} = {parent}; a base change pair needs a nonzero kernel"
                    ),
                ));
            }
            let ring = q.quotient(&extra).named(&name);
            if ring.is_zero(&ring.one()) {
                return Err(CliError::semantic(line, format!("ring `{name}` is the zero ring")));
            }
            let pd = ring_pd(&q, &ring).map_err(|e| {
                CliError::semantic(
                    line,
                    format!("pd_{parent} {name} must be finite for the functors S and T ({})", concept(&e)),
                )
            })?;
            RingDecl { name, def: RingDef::Quotient { parent, extra }, ring, pd_over_parent: Some(pd) }
        };
        self.declare(&nt, Decl::Ring(decl))
    }

    fn over(&mut self) -> PResult<(String, QuotientRing)> {
        self.keyword("over")?;
        let (r, rt) = self.ident("a ring name")?;
        match self.session.ring(&r) {
            Some(d) => Ok((r, d.ring.clone())),
            None => Err(CliError::semantic(rt.pos.line, format!("`{r}` is not a declared ring"))),
        }
    }

    fn module_stmt(&mut self) -> PResult<()> {
        self.bump();
        let (name, nt) = self.ident("a module name")?;
        let (rname, ring) = self.over()?;
        self.punct("=")?;
        self.keyword("coker")?;
        let rel = self.matrix(&ring)?;
        let d = ModuleDecl { name, ring: rname, module: ModulePresentation::new(rel) };
        self.declare(&nt, Decl::Module(d))
    }

    fn named_complex(&mut self) -> PResult<(String, ChainComplex)> {
        let (n, t) = self.ident("a complex name")?;
        match self.session.complex(&n) {
            Some(c) => Ok((n, c.complex.clone())),
            None => Err(CliError::semantic(t.pos.line, format!("`{n}` is not a declared complex"))),
        }
    }

    fn counit_of(&mut self, name: &str, line: usize) -> PResult<Counit> {
        if let Some(c) = self.counits.get(name) {
            return Ok(c.clone());
        }
        let cd = self.session.complex(name).expect("checked by caller");
        let bc = self.session.base_change_into(&cd.ring).map_err(|m| CliError::semantic(line, m))?;
        let (lo, hi) = DEFAULT_WINDOW;
        let e = bc.counit(&cd.complex, lo, hi).map_err(|e| CliError::semantic(line, concept(&e)))?;
        self.counits.insert(name.to_string(), e.clone());
        Ok(e)
    }

    fn complex_stmt(&mut self) -> PResult<()> {
        self.bump();
        let (name, nt) = self.ident("a complex name")?;
        let line = nt.pos.line;
        let (rname, ring) = self.over()?;
        self.punct("=")?;
        let sem = |e: tac_core::Error| CliError::semantic(line, concept(&e));
        let head = self.peek().clone();
        let (def, complex) = match &head.tok {
            Tok::Ident(w) if w == "window" => (ComplexDef::Literal, self.literal_complex(&ring, line)?),
            Tok::Ident(w) if w == "complete-res" || w == "resolve" => {
                let w = w.clone();
                self.bump();
                let (m, mt) = self.ident("a module name")?;
                let md = self
                    .session
                    .module(&m)
                    .ok_or_else(|| CliError::semantic(mt.pos.line, format!("`{m}` is not a declared module")))?
                    .clone();
                if w == "complete-res" {
                    let cr = complete_resolution(&md.module).map_err(sem)?;
                    (ComplexDef::CompleteRes(m), cr.complex)
                } else {
                    self.keyword("length")?;
                    let length = self.count("length")?;
                    let res = minimal_free_resolution(&md.module, length).map_err(sem)?;
                    (ComplexDef::Resolve { module: m, length }, res.complex)
                }
            }
            Tok::Ident(w) if w == "apply-t" => {
                self.bump();
                let (c, cx) = self.named_complex()?;
                let cring = self.session.complex(&c).unwrap().ring.clone();
                let bc = self.session.base_change_into(&cring).map_err(|m| CliError::semantic(line, m))?;
                (ComplexDef::ApplyT(c), bc.apply_t(&cx).map_err(sem)?.complex)
            }
            Tok::Ident(w) if w == "apply-s" => {
                self.bump();
                let (c, cx) = self.named_complex()?;
                self.keyword("to")?;
                let (to, _) = self.ident("a ring name")?;
                let cring = self.session.complex(&c).unwrap().ring.clone();
                let to = self.session.child_of(&cring, Some(&to)).map_err(|m| CliError::semantic(line, m))?;
                let bc = self.session.base_change_into(&to).map_err(|m| CliError::semantic(line, m))?;
                let (lo, hi) = DEFAULT_WINDOW;
                (ComplexDef::ApplyS { complex: c, to }, bc.apply_s(&cx, lo, hi).map_err(sem)?)
            }
            Tok::Ident(w) if w == "st" => {
                self.bump();
                let (c, _) = self.named_complex()?;
                let e = self.counit_of(&c, line)?;
                (ComplexDef::St(c), e.stc)
            }
            Tok::Ident(w) if w == "dual" => {
                self.bump();
                let (c, cx) = self.named_complex()?;
                (ComplexDef::Dual(c), cx.dualize())
            }
            Tok::Ident(w) if w == "shift" => {
                self.bump();
                let (c, cx) = self.named_complex()?;
                let k = self.int()?;
                (ComplexDef::Shift(c, k), cx.shift(k))
            }
            _ => {
                return self.err(
                    &head,
                    "`window` or a derived complex (complete-res, resolve, apply-t, apply-s, st, dual, shift)",
                )
            }
        };
        if complex.ring() != &ring {
            return Err(CliError::semantic(
                line,
                format!("complex `{name}` is declared over {rname} but lives over {}", complex.ring().name()),
            ));
        }
        self.declare(&nt, Decl::Complex(ComplexDecl { name, ring: rname, def, complex }))
    }

    fn tail(&mut self) -> PResult<Tail> {
        let (w, t) = self.ident("a tail (zero, opaque, periodic p, syzygy, cosyzygy)")?;
        let sign = |p: &mut Self| -> PResult<i8> {
            if p.is_punct("-") || matches!(p.peek().tok, Tok::Int(_)) {
                let at = p.peek().clone();
                match p.int()? {
                    1 => Ok(1),
                    -1 => Ok(-1),
                    _ => p.err(&at, "a sign 1 or -1"),
                }
            } else {
                Ok(1)
            }
        };
        Ok(match w.as_str() {
            "zero" => Tail::Zero,
            "opaque" => Tail::Opaque,
            "periodic" => Tail::Periodic { period: self.count("period")? },
            "syzygy" => Tail::Syzygy { sign: sign(self)? },
            "cosyzygy" => Tail::Cosyzygy { sign: sign(self)? },
            _ => return self.err(&t, "a tail (zero, opaque, periodic p, syzygy, cosyzygy)"),
        })
    }

    fn degree_entries(&mut self, ring: &QuotientRing) -> PResult<Vec<(i64, FreeMap, Pos)>> {
        self.punct("{")?;
        let mut out = Vec::new();
        while !self.is_punct("}") {
            let kw = self.keyword("deg")?;
            let n = self.int()?;
            self.punct(":")?;
            let m = self.matrix(ring)?;
            if out.iter().any(|(k, _, _)| *k == n) {
                return Err(CliError::parse(kw.pos, format!("degree {n} given twice")));
            }
            out.push((n, m, kw.pos));
            if !self.is_punct("}") {
                self.punct(",")?;
            }
        }
        self.bump();
        Ok(out)
    }

    fn literal_complex(&mut self, ring: &QuotientRing, line: usize) -> PResult<ChainComplex> {
        self.keyword("window")?;
        let lo = self.int()?;
        self.punct("..")?;
        let hi_tok = self.peek().clone();
        let hi = self.int()?;
        if hi < lo {
            return Err(CliError::parse(hi_tok.pos, format!("empty window {lo}..{hi}")));
        }
        let mut ranks: Vec<Option<usize>> = vec![None; (hi - lo + 1) as usize];
        if self.is_ident("ranks") {
            self.bump();
            self.punct("[")?;
            for k in 0..ranks.len() {
                if k > 0 {
                    self.punct(",")?;
                }
                ranks[k] = Some(self.count("rank")?);
            }
            self.punct("]")?;
        }
        let entries = self.degree_entries(ring)?;
        let mut diffs: Vec<Option<FreeMap>> = vec![None; (hi - lo) as usize];
        for (n, m, pos) in entries {
            if n <= lo || n > hi {
                return Err(CliError::parse(
                    pos,
                    format!("d({n}) lies outside the window {lo}..{hi}; degrees {}..{hi} are expected", lo + 1),
                ));
            }
            let k = (n - lo) as usize;
            for (slot, r) in [(k - 1, m.rows()), (k, m.cols())] {
                match ranks[slot] {
                    Some(x) if x != r => {
                        return Err(CliError::parse(
                            pos,
                            format!("d({n}) gives rank {r} in degree {}, which already has rank {x}", lo + slot as i64),
                        ))
                    }
                    _ => ranks[slot] = Some(r),
                }
            }
            diffs[k - 1] = Some(m);
        }
        let mut above = Tail::Opaque;
        let mut below = Tail::Opaque;
        loop {
            if self.is_ident("above") {
                self.bump();
                above = self.tail()?;
            } else if self.is_ident("below") {
                self.bump();
                below = self.tail()?;
            } else if self.is_ident("period") {
                self.bump();
                let p = self.count("period")?;
                above = Tail::Periodic { period: p };
                below = above;
            } else {
                break;
            }
        }
        let missing: Vec<String> = diffs
            .iter()
            .enumerate()
            .filter(|(_, d)| d.is_none())
            .map(|(k, _)| (lo + k as i64 + 1).to_string())
            .collect();
        if !missing.is_empty() {
            return Err(CliError::semantic(line, format!("missing differentials in degrees {}", missing.join(", "))));
        }
        let ranks: Vec<usize> = ranks
            .into_iter()
            .collect::<Option<_>>()
            .ok_or_else(|| CliError::semantic(line, "a one-degree window needs `ranks [r]`"))?;
        let diffs = diffs.into_iter().map(Option::unwrap).collect();
        ChainComplex::new(ring, lo, ranks, diffs, above, below).map_err(|e| CliError::semantic(line, concept(&e)))
    }

    fn map_stmt(&mut self) -> PResult<()> {
        self.bump();
        let (name, nt) = self.ident("a map name")?;
        let line = nt.pos.line;
        self.punct(":")?;
        let (source, src) = self.named_complex()?;
        self.punct("->")?;
        let (target, tgt) = self.named_complex()?;
        self.punct("=")?;
        let sem = |e: tac_core::Error| CliError::semantic(line, concept(&e));
        let (lo, hi) = DEFAULT_WINDOW;
        let head = self.peek().clone();
        let (def, map) = match &head.tok {
            Tok::Punct("{") => {
                let entries = self.degree_entries(src.ring())?;
                let mut period = None;
                if self.is_ident("period") {
                    self.bump();
                    period = Some(self.count("period")?);
                }
                let mut entries = entries;
                entries.sort_by_key(|e| e.0);
                let Some(mlo) = entries.first().map(|e| e.0) else {
                    return Err(CliError::semantic(line, "a map needs at least one component"));
                };
                if let Some(w) = entries.windows(2).find(|w| w[1].0 != w[0].0 + 1) {
                    return Err(CliError::parse(w[1].2, "map components must occupy consecutive degrees"));
                }
                let mhi = entries.last().unwrap().0;
                let s = src.extend_to(mlo, mhi).map_err(sem)?;
                let t = tgt.extend_to(mlo, mhi).map_err(sem)?;
                let mut f = ChainMap::new(&s, &t, mlo, entries.into_iter().map(|e| e.1).collect()).map_err(sem)?;
                if let Some(p) = period {
                    f = f.with_period(p).map_err(sem)?;
                    // the wrap must commute as well
                    materialize(&f, lo.min(mlo), hi.max(mhi)).map_err(sem)?;
                }
                (MapDef::Literal, f)
            }
            Tok::Ident(w) if w == "identity" => {
                self.bump();
                let (lo, hi) = known_range(&[&src, &tgt], lo, hi);
                if !same_complex(&src, &tgt, lo, hi) {
                    return Err(CliError::semantic(line, format!("identity needs {source} = {target}")));
                }
                let s = src.extend_to(lo, hi).map_err(sem)?;
                (MapDef::Identity, ChainMap::identity(&s, lo, hi).map_err(sem)?)
            }
            Tok::Ident(w) if w == "zero" => {
                self.bump();
                let (lo, hi) = known_range(&[&src, &tgt], lo, hi);
                let s = src.extend_to(lo, hi).map_err(sem)?;
                let t = tgt.extend_to(lo, hi).map_err(sem)?;
                (MapDef::Zero, ChainMap::zero(&s, &t, lo, hi).map_err(sem)?)
            }
            Tok::Ident(w) if w == "counit" => {
                self.bump();
                let (c, _) = self.named_complex()?;
                let e = self.counit_of(&c, line)?;
                if c != target || !same_complex(&src, &e.stc, lo, hi) {
                    return Err(CliError::semantic(line, format!("counit {c} runs from `st {c}` to {c}")));
                }
                (MapDef::Counit(c), e.map)
            }
            Tok::Ident(w) if w == "unit" => {
                self.bump();
                let (d, dx) = self.named_complex()?;
                let dring = self.session.complex(&d).unwrap().ring.clone();
                let to = self.session.child_of(&dring, None).map_err(|m| CliError::semantic(line, m))?;
                let bc = self.session.base_change_into(&to).map_err(|m| CliError::semantic(line, m))?;
                let eta = bc.unit(&dx, lo, hi).map_err(sem)?;
                if d != source || !same_complex(eta.target(), &tgt, lo, hi) {
                    return Err(CliError::semantic(line, format!("unit {d} runs from {d} to T S {d}")));
                }
                (MapDef::Unit(d), eta)
            }
            _ => return self.err(&head, "`{`, identity, zero, counit or unit"),
        };
        self.declare(&nt, Decl::Map(MapDecl { name, source, target, def, map }))
    }

    fn tower_stmt(&mut self) -> PResult<()> {
        self.bump();
        let (name, nt) = self.ident("a tower name")?;
        let line = nt.pos.line;
        self.punct("=")?;
        let mut rings: [String; 3] = Default::default();
        for (k, slot) in rings.iter_mut().enumerate() {
            if k > 0 {
                self.punct("->")?;
            }
            *slot = self.ident("a ring name")?.0;
        }
        for k in 1..3 {
            match self.session.ring(&rings[k]).map(|r| &r.def) {
                Some(RingDef::Quotient { parent, .. }) if *parent == rings[k - 1] => {}
                _ => {
                    return Err(CliError::semantic(
                        line,
                        format!("`{}` must be declared as `{} = {} | extra ...`", rings[k], rings[k], rings[k - 1]),
                    ))
                }
            }
        }
        if self.session.ring(&rings[0]).is_none() {
            return Err(CliError::semantic(line, format!("`{}` is not a declared ring", rings[0])));
        }
        self.keyword("with")?;
        let (s_complex, _) = self.named_complex()?;
        self.punct(",")?;
        let (t_complex, _) = self.named_complex()?;
        for (c, r) in [(&s_complex, &rings[0]), (&t_complex, &rings[2])] {
            if self.session.complex(c).unwrap().ring != *r {
                return Err(CliError::semantic(line, format!("`{c}` must be a complex over {r}")));
            }
        }
        self.declare(&nt, Decl::Tower(TowerDecl { name, rings, s_complex, t_complex }))
    }

    fn run_stmt(&mut self) -> PResult<()> {
        let kw = self.bump();
        let line_end = self.src[kw.end..].find('\n').map_or(self.src.len(), |k| kw.end + k);
        let raw = &self.src[kw.end..line_end];
        let raw = raw.split('#').next().unwrap();
        let line_start = self.src[..kw.start].rfind('\n').map_or(0, |k| k + 1);
        let mut words = Vec::new();
        let mut off = kw.end;
        for w in raw.split_whitespace() {
            let at = self.src[off..].find(w).unwrap() + off;
            words.push((w.to_string(), Pos { line: kw.pos.line, col: self.src[line_start..at].chars().count() + 1 }));
            off = at + w.len();
        }
        while !matches!(self.peek().tok, Tok::Newline | Tok::Eof) {
            self.bump();
        }
        let cmd = parse_command(&self.session, kw.pos, &words)?;
        self.session.items.push(Item::Run(self.session.commands.len()));
        self.session.commands.push(cmd);
        Ok(())
    }
}

fn check_local(line: usize, name: &str, gens: &[Poly], _ring: &PolyRing) -> PResult<()> {
    if gens.iter().any(|p| p.constant_term() != 0) {
        return Err(CliError::semantic(
            line,
            format!("ideal of `{name}` must vanish at the origin, so that the ring is local at (variables)"),
        ));
    }
    Ok(())
}

/// Parses the words after `run`.
pub fn parse_command(s: &Session, at: Pos, words: &[(String, Pos)]) -> PResult<Command> {
    let Some((verb, vpos)) = words.first() else {
        return Err(CliError::parse(at, "expected a command after `run`"));
    };
    let line = at.line;
    let mut positional: Vec<(String, Pos)> = Vec::new();
    let mut window = DEFAULT_WINDOW;
    let mut opts: HashMap<&str, (String, Pos)> = HashMap::new();
    let mut k = 1;
    let int_at = |k: usize, what: &str| -> PResult<i64> {
        let (w, p) = words.get(k).ok_or_else(|| CliError::parse(words[k - 1].1, format!("{what} expects a value")))?;
        w.parse::<i64>().map_err(|_| CliError::parse(*p, format!("{what} expects an integer, found `{w}`")))
    };
    while k < words.len() {
        let (w, p) = &words[k];
        match w.as_str() {
            "--window" => {
                window = (int_at(k + 1, "--window")?, int_at(k + 2, "--window")?);
                if window.0 > window.1 {
                    return Err(CliError::parse(*p, "empty window"));
                }
                k += 3;
            }
            "--length" | "--depth" | "--to" | "--against" => {
                let v = words.get(k + 1).ok_or_else(|| CliError::parse(*p, format!("{w} expects a value")))?;
                opts.insert(
                    match w.as_str() {
                        "--length" => "length",
                        "--depth" => "depth",
                        "--to" => "to",
                        _ => "against",
                    },
                    v.clone(),
                );
                k += 2;
            }
            o if o.starts_with("--") => return Err(CliError::parse(*p, format!("unknown option `{o}`"))),
            _ => {
                positional.push((w.clone(), *p));
                k += 1;
            }
        }
    }
    let want = |kind: &str, idx: usize| -> PResult<String> {
        let (n, p) =
            positional.get(idx).ok_or_else(|| CliError::parse(*vpos, format!("`{verb}` expects a {kind} name")))?;
        let ok = match kind {
            "complex" => s.complex(n).is_some(),
            "module" => s.module(n).is_some(),
            "map" => s.map(n).is_some(),
            "tower" => s.tower(n).is_some(),
            _ => s.ring(n).is_some(),
        };
        if !ok {
            return Err(CliError::semantic(line, format!("`{n}` at column {} is not a declared {kind}", p.col)));
        }
        Ok(n.clone())
    };
    let arity = |n: usize| -> PResult<()> {
        match positional.get(n) {
            Some((w, p)) => Err(CliError::parse(*p, format!("unexpected argument `{w}`"))),
            None => Ok(()),
        }
    };
    let allow = |names: &[&str]| -> PResult<()> {
        for (o, (_, p)) in &opts {
            if !names.contains(o) {
                return Err(CliError::parse(*p, format!("`{verb}` does not take --{o}")));
            }
        }
        Ok(())
    };
    let count_opt = |name: &str| -> PResult<Option<usize>> {
        match opts.get(name) {
            None => Ok(None),
            Some((v, p)) => v
                .parse::<usize>()
                .map(Some)
                .map_err(|_| CliError::parse(*p, format!("--{name} expects a nonnegative integer, found `{v}`"))),
        }
    };
    let child = |c: &str| -> PResult<String> {
        let ring = &s.complex(c).unwrap().ring;
        s.child_of(ring, opts.get("to").map(|v| v.0.as_str())).map_err(|m| CliError::semantic(line, m))
    };
    let parent_pair = |c: &str| -> PResult<()> {
        let ring = &s.complex(c).unwrap().ring;
        s.base_change_into(ring).map(|_| ()).map_err(|m| CliError::semantic(line, m))
    };
    let kind = match verb.as_str() {
        "check" => {
            allow(&[])?;
            arity(1)?;
            CommandKind::Check(want("complex", 0)?)
        }
        "resolve" => {
            allow(&["length"])?;
            arity(1)?;
            let length = count_opt("length")?.ok_or_else(|| CliError::parse(*vpos, "`resolve` needs --length n"))?;
            CommandKind::Resolve { module: want("module", 0)?, length }
        }
        "complete-res" => {
            allow(&[])?;
            arity(1)?;
            CommandKind::CompleteRes(want("module", 0)?)
        }
        "apply-s" | "unit" => {
            allow(&["to"])?;
            arity(1)?;
            let c = want("complex", 0)?;
            let to = child(&c)?;
            if verb == "unit" {
                CommandKind::Unit { complex: c, to }
            } else {
                CommandKind::ApplyS { complex: c, to }
            }
        }
        "apply-t" | "approx-right" | "approx-left" | "triangle-identities" => {
            allow(&[])?;
            arity(1)?;
            let c = want("complex", 0)?;
            parent_pair(&c)?;
            match verb.as_str() {
                "apply-t" => CommandKind::ApplyT(c),
                "approx-right" => CommandKind::ApproxRight(c),
                "approx-left" => CommandKind::ApproxLeft(c),
                _ => CommandKind::TriangleIdentities(c),
            }
        }
        "counit" => {
            allow(&["against"])?;
            arity(1)?;
            let c = want("complex", 0)?;
            parent_pair(&c)?;
            let against = match opts.get("against") {
                Some((m, p)) if s.map(m).is_none() => {
                    return Err(CliError::semantic(line, format!("`{m}` at column {} is not a declared map", p.col)))
                }
                Some((m, _)) => Some(m.clone()),
                None => None,
            };
            CommandKind::Counit { complex: c, against }
        }
        "homotopic" | "minimality" => {
            allow(&[])?;
            arity(2)?;
            let (f, g) = (want("map", 0)?, want("map", 1)?);
            if verb == "homotopic" {
                CommandKind::Homotopic(f, g)
            } else {
                CommandKind::Minimality(f, g)
            }
        }
        "cone" | "trcone" => {
            allow(&[])?;
            arity(1)?;
            let f = want("map", 0)?;
            if verb == "cone" {
                CommandKind::Cone(f)
            } else {
                CommandKind::TrCone(f)
            }
        }
        "dual" => {
            allow(&["to"])?;
            arity(1)?;
            let c = want("complex", 0)?;
            let ring = &s.complex(&c).unwrap().ring;
            let to = match opts.get("to") {
                Some(_) => Some(child(&c)?),
                None => s.child_of(ring, None).ok(),
            };
            CommandKind::Dual { complex: c, to }
        }
        "shift" => {
            allow(&[])?;
            arity(2)?;
            let c = want("complex", 0)?;
            let (w, p) = positional.get(1).ok_or_else(|| CliError::parse(*vpos, "`shift` expects a complex and k"))?;
            let k =
                w.parse::<i64>().map_err(|_| CliError::parse(*p, format!("shift expects an integer, found `{w}`")))?;
            CommandKind::Shift(c, k)
        }
        "triangle-res" => {
            allow(&["depth"])?;
            arity(1)?;
            let c = want("complex", 0)?;
            parent_pair(&c)?;
            let depth = count_opt("depth")?.ok_or_else(|| CliError::parse(*vpos, "`triangle-res` needs --depth d"))?;
            CommandKind::TriangleRes { complex: c, depth }
        }
        "compose-check" => {
            allow(&[])?;
            arity(1)?;
            CommandKind::ComposeCheck(want("tower", 0)?)
        }
        _ => return Err(CliError::parse(*vpos, format!("unknown command `{verb}`"))),
    };
    let text = words.iter().map(|w| w.0.as_str()).collect::<Vec<_>>().join(" ");
    Ok(Command { line, kind, window, text })
}
