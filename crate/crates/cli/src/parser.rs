//! Line-oriented parser for definition files.
//!
//! ```text
//! diracwb 1
//! base q1 q2 p1 p2
//! fiber tangent                 # or: fiber e1 e2 dual f1 f2
//! twoform Omega = dq1^dp1 + dq2^dp2
//! endo N
//!   1, 0, 0, 0
//!   ...
//! end
//! check omegan first=Omega endo=N
//! ```

use std::collections::{HashMap, HashSet};

use diracwb_core::geometry::{BIVECTOR, STRUCTURE, TWO_FORM};
use diracwb_core::kernel::{Monomial, MAX_RANK};
use diracwb_core::proto::{GAMMA, PHI, PSI};
use diracwb_core::{Bidegree, Matrix, Names, Poly, Rational, Superfunction};

use crate::catalog::{self, InvocationError};
use crate::error::{ErrorKind, ParseError};
use crate::lexer::{tokenize, Token, TokenKind};
use crate::model::{Declaration, DefinitionFile, Invocation, Structure, FORMAT_VERSION};

const MAX_DEPTH: usize = 64;
const MAX_EXPONENT: u32 = 32;

fn err(kind: ErrorKind, line: usize, col: usize, msg: impl Into<String>) -> ParseError {
    ParseError::new(kind, line, col, msg)
}

/// Parses a complete definition file.
pub fn parse(text: &str) -> Result<DefinitionFile, ParseError> {
    Parser::default().run(text)
}

/// Reads bytes as a definition file, reporting invalid UTF-8 as a lexical
/// error at the offending position.
pub fn parse_bytes(bytes: &[u8]) -> Result<DefinitionFile, ParseError> {
    match std::str::from_utf8(bytes) {
        Ok(text) => parse(text),
        Err(e) => {
            let good = std::str::from_utf8(&bytes[..e.valid_up_to()]).unwrap_or_default();
            let line = good.matches('\n').count() + 1;
            let col = good.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
            Err(err(ErrorKind::Lexical, line, col, "invalid UTF-8"))
        }
    }
}

/// Expression evaluation over declared generator names.
pub struct Scope {
    generators: HashMap<String, Superfunction>,
}

impl Scope {
    pub fn new(names: &Names) -> Self {
        let mut generators = HashMap::new();
        for (i, n) in names.base.iter().enumerate() {
            generators.insert(n.clone(), Superfunction::x(i));
        }
        for (i, n) in names.momenta.iter().enumerate() {
            generators.insert(n.clone(), Superfunction::p(i));
        }
        for (a, n) in names.frames.iter().enumerate() {
            generators.insert(n.clone(), Superfunction::theta(a));
        }
        for (a, n) in names.coframes.iter().enumerate() {
            generators.insert(n.clone(), Superfunction::xi(a));
        }
        Self { generators }
    }

    /// Evaluates a whole token slice as one expression.
    pub fn eval(&self, toks: &[Token], line: usize, eol: usize) -> Result<Superfunction, ParseError> {
        let mut p = ExprParser {
            toks,
            pos: 0,
            line,
            eol,
            depth: 0,
            scope: self,
        };
        let v = p.expr()?;
        if let Some(t) = toks.get(p.pos) {
            return Err(err(ErrorKind::Syntax, line, t.col, format!("unexpected {}", t.describe())));
        }
        Ok(v)
    }
}

struct ExprParser<'a> {
    toks: &'a [Token],
    pos: usize,
    line: usize,
    eol: usize,
    depth: usize,
    scope: &'a Scope,
}

impl ExprParser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.toks.get(self.pos)
    }

    fn peek_sym(&self, c: char) -> bool {
        matches!(self.peek(), Some(Token { kind: TokenKind::Sym(s), .. }) if *s == c)
    }

    fn col(&self) -> usize {
        self.peek().map_or(self.eol, |t| t.col)
    }

    fn syntax(&self, msg: impl Into<String>) -> ParseError {
        err(ErrorKind::Syntax, self.line, self.col(), msg)
    }

    fn expected(&self, what: &str) -> ParseError {
        match self.peek() {
            Some(t) => self.syntax(format!("expected {what}, found {}", t.describe())),
            None => self.syntax(format!("expected {what}, found end of line")),
        }
    }

    fn expr(&mut self) -> Result<Superfunction, ParseError> {
        let mut acc = self.term()?;
        loop {
            if self.peek_sym('+') {
                self.pos += 1;
                acc = &acc + &self.term()?;
            } else if self.peek_sym('-') {
                self.pos += 1;
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Superfunction, ParseError> {
        let mut acc = self.unary()?;
        loop {
            if self.peek_sym('*') {
                self.pos += 1;
                acc = &acc * &self.unary()?;
            } else if self.peek_sym('/') {
                self.pos += 1;
                let col = self.col();
                let d = match self.peek() {
                    Some(Token { kind: TokenKind::Int(s), .. }) => s.parse::<Rational>().ok(),
                    _ => None,
                };
                let d = d.ok_or_else(|| self.expected("an integer divisor"))?;
                if d == Rational::from_integer(0.into()) {
                    return Err(err(ErrorKind::Syntax, self.line, col, "division by zero"));
                }
                self.pos += 1;
                acc = acc.scale(&d.recip());
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Superfunction, ParseError> {
        if self.peek_sym('-') || self.peek_sym('+') {
            let neg = self.peek_sym('-');
            self.pos += 1;
            self.descend()?;
            let v = self.unary()?;
            self.depth -= 1;
            return Ok(if neg { -v } else { v });
        }
        self.power()
    }

    fn descend(&mut self) -> Result<(), ParseError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(self.syntax("expression nested too deeply"));
        }
        Ok(())
    }

    /// `a ^ k` with an integer literal `k` is a power; otherwise `^` is the
    /// product between exterior factors.
    fn power(&mut self) -> Result<Superfunction, ParseError> {
        let start = self.col();
        let mut acc = self.atom()?;
        while self.peek_sym('^') {
            let caret = self.col();
            self.pos += 1;
            if let Some(Token { kind: TokenKind::Int(s), col }) = self.peek() {
                let col = *col;
                let k = s
                    .parse::<u32>()
                    .ok()
                    .filter(|k| *k <= MAX_EXPONENT)
                    .ok_or_else(|| err(ErrorKind::Syntax, self.line, col, format!("exponent must be at most {MAX_EXPONENT}")))?;
                if !is_scalar(&acc) {
                    return Err(err(
                        ErrorKind::BidegreeMismatch,
                        self.line,
                        caret,
                        "integer powers apply to functions of the base and momenta only",
                    ));
                }
                self.pos += 1;
                let mut p = Superfunction::one();
                for _ in 0..k {
                    p = &p * &acc;
                }
                acc = p;
            } else {
                let rhs_col = self.col();
                let rhs = self.atom()?;
                for (v, col) in [(&acc, start), (&rhs, rhs_col)] {
                    if !is_exterior(v) {
                        return Err(err(
                            ErrorKind::BidegreeMismatch,
                            self.line,
                            col,
                            "`^` joins exterior factors; use `*` with functions",
                        ));
                    }
                }
                acc = &acc * &rhs;
            }
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<Superfunction, ParseError> {
        let Some(t) = self.peek().cloned() else {
            return Err(self.expected("an expression"));
        };
        match t.kind {
            TokenKind::Int(s) => {
                self.pos += 1;
                let c = s.parse::<Rational>().map_err(|_| self.syntax("bad number"))?;
                Ok(Superfunction::constant(c))
            }
            TokenKind::Ident(name) => {
                self.pos += 1;
                self.scope
                    .generators
                    .get(&name)
                    .cloned()
                    .ok_or_else(|| err(ErrorKind::UndeclaredIdentifier, self.line, t.col, format!("`{name}` is not declared")))
            }
            TokenKind::Sym('(') => {
                self.pos += 1;
                self.descend()?;
                let v = self.expr()?;
                self.depth -= 1;
                if !self.peek_sym(')') {
                    return Err(self.expected("`)`"));
                }
                self.pos += 1;
                Ok(v)
            }
            _ => Err(self.expected("an expression")),
        }
    }
}

/// No odd generators in any term.
fn is_scalar(v: &Superfunction) -> bool {
    v.terms().all(|(m, _)| m.xi_mask() == 0 && m.theta_mask() == 0)
}

/// Nonzero, with an odd generator in every term.
fn is_exterior(v: &Superfunction) -> bool {
    !v.is_zero() && v.terms().all(|(m, _)| m.xi_mask() != 0 || m.theta_mask() != 0)
}

struct PendingCheck {
    line: usize,
    col: usize,
    /// `(key column, value column)` per parameter.
    cols: Vec<(usize, usize)>,
    inv: Invocation,
}

struct PendingGraph {
    line: usize,
    col: usize,
    name: String,
    target: String,
}

#[derive(Default)]
struct Parser {
    version: Option<u32>,
    base: Option<Vec<String>>,
    momenta: Option<Vec<String>>,
    fiber: Option<(Vec<String>, Vec<String>)>,
    tangent: bool,
    scope: Option<Scope>,
    mu: Option<Superfunction>,
    sugar: Option<(Superfunction, usize)>,
    anchors: HashSet<usize>,
    brackets: HashSet<(usize, usize)>,
    odd: [Option<Superfunction>; 3],
    structures: Vec<Declaration>,
    graphs: Vec<PendingGraph>,
    checks: Vec<PendingCheck>,
    statements: usize,
}

struct Line<'a> {
    no: usize,
    toks: &'a [Token],
    eol: usize,
}

impl Line<'_> {
    fn ident(&self, i: usize) -> Option<&str> {
        match self.toks.get(i) {
            Some(Token {
                kind: TokenKind::Ident(s),
                ..
            }) => Some(s),
            _ => None,
        }
    }

    fn sym(&self, i: usize, c: char) -> bool {
        matches!(self.toks.get(i), Some(Token { kind: TokenKind::Sym(s), .. }) if *s == c)
    }

    fn col(&self, i: usize) -> usize {
        self.toks.get(i).map_or(self.eol, |t| t.col)
    }

    fn syntax(&self, i: usize, msg: impl Into<String>) -> ParseError {
        err(ErrorKind::Syntax, self.no, self.col(i), msg)
    }

    fn expect_ident(&self, i: usize, what: &str) -> Result<String, ParseError> {
        self.ident(i).map(str::to_string).ok_or_else(|| self.syntax(i, format!("expected {what}")))
    }

    fn expect_sym(&self, i: usize, c: char) -> Result<(), ParseError> {
        if self.sym(i, c) {
            Ok(())
        } else {
            Err(self.syntax(i, format!("expected `{c}`")))
        }
    }

    fn expect_end(&self, i: usize) -> Result<(), ParseError> {
        match self.toks.get(i) {
            None => Ok(()),
            Some(t) => Err(self.syntax(i, format!("unexpected {}", t.describe()))),
        }
    }
}

const KEYWORDS: &[&str] = &["dual", "tangent", "graph", "end"];

impl Parser {
    fn run(mut self, text: &str) -> Result<DefinitionFile, ParseError> {
        let lines: Vec<&str> = text.lines().collect();
        let mut i = 0;
        while i < lines.len() {
            let no = i + 1;
            let toks = tokenize(lines[i], no)?;
            i += 1;
            if toks.is_empty() {
                continue;
            }
            let line = Line {
                no,
                toks: &toks,
                eol: lines[no - 1].chars().count() + 1,
            };
            let kw = line.expect_ident(0, "a statement keyword")?;
            self.statements += 1;
            if kw == "diracwb" {
                self.header(&line)?;
                continue;
            }
            if self.base.is_none() && kw != "base" {
                return Err(line.syntax(0, "missing base block"));
            }
            if !matches!(kw.as_str(), "base" | "momenta" | "fiber") && self.scope.is_none() {
                return Err(line.syntax(0, "missing fiber block"));
            }
            match kw.as_str() {
                "base" => self.base_line(&line)?,
                "momenta" => self.momenta_line(&line)?,
                "fiber" => self.fiber_line(&line)?,
                "mu" => self.mu_line(&line)?,
                "anchor" => self.anchor_line(&line)?,
                "bracket" => self.bracket_line(&line)?,
                "phi" | "gamma" | "psi" => self.odd_line(&line, &kw)?,
                "bivector" | "twoform" => self.tensor_line(&line, &kw)?,
                "endo" | "span" | "subbundle" => {
                    if kw == "subbundle" && line.sym(2, '=') {
                        self.graph_line(&line)?;
                    } else {
                        i = self.matrix_block(&line, &kw, &lines, i)?;
                    }
                }
                "check" => self.check_line(&line)?,
                other => return Err(line.syntax(0, format!("unknown statement `{other}`"))),
            }
        }
        self.finish(lines.len())
    }

    fn header(&mut self, line: &Line) -> Result<(), ParseError> {
        if self.statements != 1 {
            return Err(line.syntax(0, "the `diracwb` header must come first"));
        }
        let v = match line.toks.get(1) {
            Some(Token {
                kind: TokenKind::Int(s),
                ..
            }) => s.parse::<u32>().ok(),
            _ => None,
        };
        match v {
            Some(FORMAT_VERSION) => {}
            Some(v) => return Err(line.syntax(1, format!("unsupported format version {v}"))),
            None => return Err(line.syntax(1, "expected a format version")),
        }
        line.expect_end(2)?;
        self.version = Some(FORMAT_VERSION);
        Ok(())
    }

    fn names(&self, line: &Line, from: usize, to: usize) -> Result<Vec<String>, ParseError> {
        let mut out = Vec::new();
        for i in from..to {
            let n = line.expect_ident(i, "a name")?;
            if KEYWORDS.contains(&n.as_str()) {
                return Err(line.syntax(i, format!("`{n}` is reserved")));
            }
            let taken = out.contains(&n)
                || self.base.iter().flatten().any(|b| *b == n)
                || self.momenta.iter().flatten().any(|b| *b == n)
                || self.fiber.iter().any(|(f, c)| f.contains(&n) || c.contains(&n));
            if taken {
                return Err(line.syntax(i, format!("`{n}` is already declared")));
            }
            out.push(n);
        }
        Ok(out)
    }

    fn base_line(&mut self, line: &Line) -> Result<(), ParseError> {
        if self.base.is_some() {
            return Err(line.syntax(0, "duplicate base block"));
        }
        self.base = Some(self.names(line, 1, line.toks.len())?);
        Ok(())
    }

    fn momenta_line(&mut self, line: &Line) -> Result<(), ParseError> {
        if self.momenta.is_some() || self.fiber.is_some() {
            return Err(line.syntax(0, "momenta must be declared once, before the fiber block"));
        }
        let names = self.names(line, 1, line.toks.len())?;
        let n = self.base.as_ref().map_or(0, Vec::len);
        if names.len() != n {
            return Err(line.syntax(0, format!("expected {n} momenta, one per base coordinate")));
        }
        self.momenta = Some(names);
        Ok(())
    }

    fn fiber_line(&mut self, line: &Line) -> Result<(), ParseError> {
        if self.fiber.is_some() {
            return Err(line.syntax(0, "duplicate fiber block"));
        }
        let base = self.base.clone().unwrap_or_default();
        if self.momenta.is_none() {
            let defaults: Vec<String> = base.iter().map(|b| format!("p_{b}")).collect();
            self.momenta = Some(defaults);
            let all: Vec<&String> = base.iter().chain(self.momenta.iter().flatten()).collect();
            if all.iter().collect::<HashSet<_>>().len() != all.len() {
                return Err(line.syntax(0, "default momentum names clash with base names; declare `momenta`"));
            }
        }
        let (frames, coframes) = if line.ident(1) == Some("tangent") {
            line.expect_end(2)?;
            self.tangent = true;
            let frames: Vec<String> = base.iter().map(|b| format!("D{b}")).collect();
            let coframes: Vec<String> = base.iter().map(|b| format!("d{b}")).collect();
            let mut seen: HashSet<&String> = base.iter().chain(self.momenta.iter().flatten()).collect();
            if !frames.iter().chain(&coframes).all(|n| seen.insert(n)) {
                return Err(line.syntax(1, "tangent frame names clash with declared names"));
            }
            (frames, coframes)
        } else {
            let split = line.toks.iter().position(|t| t.kind == TokenKind::Ident("dual".into()));
            let split = split.ok_or_else(|| line.syntax(line.toks.len(), "expected `dual` followed by coframe names"))?;
            let frames = self.names(line, 1, split)?;
            self.fiber = Some((frames.clone(), Vec::new()));
            let coframes = self.names(line, split + 1, line.toks.len())?;
            if coframes.len() != frames.len() {
                return Err(line.syntax(split, format!("expected {} coframe names, found {}", frames.len(), coframes.len())));
            }
            (frames, coframes)
        };
        if frames.len() > MAX_RANK {
            return Err(line.syntax(1, format!("rank is limited to {MAX_RANK}")));
        }
        let names = Names {
            base,
            momenta: self.momenta.clone().unwrap_or_default(),
            frames: frames.clone(),
            coframes: coframes.clone(),
        };
        self.scope = Some(Scope::new(&names));
        self.fiber = Some((frames, coframes));
        Ok(())
    }

    fn scope(&self) -> &Scope {
        self.scope.as_ref().expect("checked before dispatch")
    }

    /// Evaluates tokens `from..` and checks the bidegree.
    fn typed(&self, line: &Line, from: usize, b: Bidegree, what: &str) -> Result<Superfunction, ParseError> {
        let toks = &line.toks[from.min(line.toks.len())..];
        let v = self.scope().eval(toks, line.no, line.eol)?;
        if !v.has_bidegree(b) {
            let found = match v.bidegree() {
                Some(d) => format!("bidegree {d}"),
                None => "mixed bidegrees".to_string(),
            };
            return Err(err(
                ErrorKind::BidegreeMismatch,
                line.no,
                line.col(from),
                format!("{what} must have bidegree {b}, found {found}"),
            ));
        }
        Ok(v)
    }

    fn mu_line(&mut self, line: &Line) -> Result<(), ParseError> {
        if self.mu.is_some() || self.sugar.is_some() {
            return Err(line.syntax(0, "mu is already defined"));
        }
        line.expect_sym(1, '=')?;
        self.mu = Some(self.typed(line, 2, STRUCTURE, "mu")?);
        Ok(())
    }

    fn frame(&self, line: &Line, i: usize) -> Result<usize, ParseError> {
        let name = line.expect_ident(i, "a frame name")?;
        let (frames, _) = self.fiber.as_ref().expect("fiber declared");
        frames
            .iter()
            .position(|f| *f == name)
            .ok_or_else(|| err(ErrorKind::UndeclaredIdentifier, line.no, line.col(i), format!("`{name}` is not a frame")))
    }

    fn add_sugar(&mut self, line: &Line, term: Superfunction) -> Result<(), ParseError> {
        if self.mu.is_some() {
            return Err(line.syntax(0, "mu is already given explicitly"));
        }
        let (mu, _) = self.sugar.get_or_insert((Superfunction::zero(), line.no));
        *mu -= &term;
        Ok(())
    }

    /// `anchor e = <vector field in the momenta>`.
    fn anchor_line(&mut self, line: &Line) -> Result<(), ParseError> {
        let a = self.frame(line, 1)?;
        line.expect_sym(2, '=')?;
        let v = self.typed(line, 3, Bidegree::new(1, 1), "an anchor image")?;
        if !v.terms().all(|(m, _)| m.xi_mask() == 0 && m.theta_mask() == 0) {
            return Err(err(ErrorKind::BidegreeMismatch, line.no, line.col(3), "an anchor image is linear in the momenta"));
        }
        if !self.anchors.insert(a) {
            return Err(line.syntax(1, "anchor of this frame already given"));
        }
        self.add_sugar(line, &Superfunction::xi(a) * &v)
    }

    /// `bracket e1 e2 = <section>`.
    fn bracket_line(&mut self, line: &Line) -> Result<(), ParseError> {
        let a = self.frame(line, 1)?;
        let b = self.frame(line, 2)?;
        if a == b {
            return Err(line.syntax(2, "a bracket needs two distinct frames"));
        }
        line.expect_sym(3, '=')?;
        let v = self.typed(line, 4, Bidegree::new(1, 0), "a bracket value")?;
        if !self.brackets.insert((a.min(b), a.max(b))) {
            return Err(line.syntax(1, "bracket of these frames already given"));
        }
        self.add_sugar(line, &(&Superfunction::xi(a) * &Superfunction::xi(b)) * &v)
    }

    fn odd_line(&mut self, line: &Line, kw: &str) -> Result<(), ParseError> {
        let (slot, b) = match kw {
            "phi" => (0, PHI),
            "gamma" => (1, GAMMA),
            _ => (2, PSI),
        };
        if self.odd[slot].is_some() {
            return Err(line.syntax(0, format!("{kw} is already defined")));
        }
        line.expect_sym(1, '=')?;
        self.odd[slot] = Some(self.typed(line, 2, b, kw)?);
        Ok(())
    }

    fn declare(&mut self, line: &Line, name: String, value: Structure) -> Result<(), ParseError> {
        if self.structures.iter().any(|d| d.name == name) {
            return Err(line.syntax(1, format!("`{name}` is already declared")));
        }
        self.structures.push(Declaration { name, value });
        Ok(())
    }

    fn tensor_line(&mut self, line: &Line, kw: &str) -> Result<(), ParseError> {
        let name = line.expect_ident(1, "a name")?;
        line.expect_sym(2, '=')?;
        let value = if kw == "bivector" {
            Structure::Bivector(self.typed(line, 3, BIVECTOR, "a bivector")?)
        } else {
            Structure::TwoForm(self.typed(line, 3, TWO_FORM, "a two-form")?)
        };
        self.declare(line, name, value)
    }

    fn graph_line(&mut self, line: &Line) -> Result<(), ParseError> {
        let name = line.expect_ident(1, "a name")?;
        if line.ident(3) != Some("graph") {
            return Err(line.syntax(3, "expected `graph`"));
        }
        let target = line.expect_ident(4, "a bivector or two-form name")?;
        line.expect_end(5)?;
        self.graphs.push(PendingGraph {
            line: line.no,
            col: line.col(4),
            name: name.clone(),
            target: target.clone(),
        });
        self.declare(line, name, Structure::Graph(target))
    }

    /// Reads rows up to `end`; returns the index of the next unread line.
    fn matrix_block(&mut self, line: &Line, kw: &str, lines: &[&str], mut i: usize) -> Result<usize, ParseError> {
        let name = line.expect_ident(1, "a name")?;
        line.expect_end(2)?;
        let r = self.fiber.as_ref().map_or(0, |(f, _)| f.len());
        let mut rows: Vec<Vec<Poly>> = Vec::new();
        loop {
            let Some(text) = lines.get(i) else {
                return Err(line.syntax(0, format!("`{kw} {name}` is missing its closing `end`")));
            };
            let no = i + 1;
            i += 1;
            let toks = tokenize(text, no)?;
            if toks.is_empty() {
                continue;
            }
            let row_line = Line {
                no,
                toks: &toks,
                eol: text.chars().count() + 1,
            };
            if row_line.ident(0) == Some("end") {
                row_line.expect_end(1)?;
                break;
            }
            let mut row = Vec::new();
            for part in toks.split(|t| t.kind == TokenKind::Sym(',')) {
                let col = part.first().map_or(row_line.eol, |t| t.col);
                if part.is_empty() {
                    return Err(err(ErrorKind::Syntax, no, col, "empty matrix entry"));
                }
                let v = self.scope().eval(part, no, row_line.eol)?;
                if !v.has_bidegree(Bidegree::new(0, 0)) {
                    return Err(err(ErrorKind::BidegreeMismatch, no, col, "matrix entries are functions of the base"));
                }
                row.push(v.coefficient(&Monomial::one()));
            }
            if let Some(first) = rows.first() {
                if first.len() != row.len() {
                    return Err(err(ErrorKind::Syntax, no, 1, format!("expected {} entries, found {}", first.len(), row.len())));
                }
            }
            rows.push(row);
        }
        let (want_rows, square) = match kw {
            "endo" => (r, true),
            "span" => (r, false),
            _ => (2 * r, false),
        };
        let cols = rows.first().map_or(0, Vec::len);
        if rows.len() != want_rows || (square && cols != r) || cols == 0 {
            let shape = if square { format!("{r} x {r}") } else { format!("{want_rows} rows") };
            return Err(line.syntax(0, format!("`{kw} {name}` must have {shape}, found {} x {cols}", rows.len())));
        }
        let m = Matrix::from_rows(rows);
        let value = match kw {
            "endo" => Structure::Endo(m),
            "span" => Structure::Span(m),
            _ => Structure::Subbundle(m),
        };
        self.declare(line, name, value)?;
        Ok(i)
    }

    /// `check name key=value ...`, where hyphenated names are joined.
    fn check_line(&mut self, line: &Line) -> Result<(), ParseError> {
        let mut name = line.expect_ident(1, "a check name")?;
        let mut i = 2;
        while line.sym(i, '-') && line.toks.get(i + 1).is_some_and(|t| t.col == line.col(i) + 1) {
            name.push('-');
            name.push_str(&line.expect_ident(i + 1, "a check name")?);
            i += 2;
        }
        let mut inv = Invocation::new(name);
        let mut cols = Vec::new();
        while i < line.toks.len() {
            let key = line.expect_ident(i, "a `key=value` parameter")?;
            line.expect_sym(i + 1, '=')?;
            let value = match line.toks.get(i + 2) {
                Some(Token {
                    kind: TokenKind::Ident(s) | TokenKind::Int(s),
                    ..
                }) => s.clone(),
                _ => return Err(line.syntax(i + 2, "expected a parameter value")),
            };
            cols.push((line.col(i), line.col(i + 2)));
            inv.params.push((key, value));
            i += 3;
        }
        self.checks.push(PendingCheck {
            line: line.no,
            col: line.col(1),
            cols,
            inv,
        });
        Ok(())
    }

    fn finish(self, n_lines: usize) -> Result<DefinitionFile, ParseError> {
        let Some(base) = self.base else {
            return Err(err(ErrorKind::Syntax, 1, 1, "missing base block"));
        };
        let Some((frames, coframes)) = self.fiber else {
            return Err(err(ErrorKind::Syntax, n_lines + 1, 1, "missing fiber block"));
        };
        let names = Names {
            base,
            momenta: self.momenta.unwrap_or_default(),
            frames,
            coframes,
        };
        let mu = match (self.mu, self.sugar) {
            (Some(mu), _) => mu,
            (None, Some((mu, _))) => mu,
            (None, None) if self.tangent => {
                let mut mu = Superfunction::zero();
                for i in 0..names.base.len() {
                    mu -= &(&Superfunction::xi(i) * &Superfunction::p(i));
                }
                mu
            }
            (None, None) => Superfunction::zero(),
        };
        let [phi, gamma, psi] = self.odd.map(Option::unwrap_or_default);
        let mut file = DefinitionFile {
            version: self.version.unwrap_or(FORMAT_VERSION),
            names,
            mu,
            phi,
            gamma,
            psi,
            structures: self.structures,
            checks: Vec::new(),
        };
        for g in &self.graphs {
            match file.lookup(&g.target) {
                None => {
                    return Err(err(
                        ErrorKind::UndeclaredIdentifier,
                        g.line,
                        g.col,
                        format!("`{}` is not declared", g.target),
                    ))
                }
                Some(Structure::Bivector(_) | Structure::TwoForm(_)) => {}
                Some(_) => {
                    return Err(err(
                        ErrorKind::Syntax,
                        g.line,
                        g.col,
                        format!("`{}` takes the graph of a bivector or two-form, not `{}`", g.name, g.target),
                    ))
                }
            }
        }
        for c in &self.checks {
            if let Err(e) = catalog::validate(&file, &c.inv) {
                let at = |key: &str, value: bool| {
                    c.inv
                        .params
                        .iter()
                        .position(|(k, _)| k == key)
                        .map_or(c.col, |p| if value { c.cols[p].1 } else { c.cols[p].0 })
                };
                let (kind, col) = match &e {
                    InvocationError::UnknownCheck(_) | InvocationError::Missing(_) => (ErrorKind::Syntax, c.col),
                    InvocationError::Undeclared { key, .. } => (ErrorKind::UndeclaredIdentifier, at(key, true)),
                    InvocationError::WrongKind { key, .. } | InvocationError::BadCount { key, .. } => {
                        (ErrorKind::Syntax, at(key, true))
                    }
                    InvocationError::UnknownParam(key) => (ErrorKind::Syntax, at(key, false)),
                    InvocationError::Duplicate(key) => {
                        let second = c.inv.params.iter().enumerate().filter(|(_, (k, _))| k == key).nth(1);
                        (ErrorKind::Syntax, second.map_or(c.col, |(p, _)| c.cols[p].0))
                    }
                };
                return Err(err(kind, c.line, col, e.to_string()));
            }
        }
        file.checks = self.checks.into_iter().map(|c| c.inv).collect();
        Ok(file)
    }
}
