//! A small text format for parametrized branches.
//!
//! ```text
//! x = t^5; y = t^12 + t^14 + 13/12 t^16 + c t^21 where c = 2
//! x = t^4; y = t^11 + s*t^13 where s = root(z^2 - 6)
//! ```
//!
//! `y` is a sum of terms `[coefficient] t^E` with strictly increasing
//! exponents, optionally closed by `+ O(t^N)`. Coefficients are rational
//! expressions in the `where` bindings; `root(p)` adjoins a root of the
//! polynomial `p` in `z`.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};

use crate::algebra::{Alg, Rational, Tower, TruncatedSeries, UPoly};
use crate::branch::PuiseuxBranch;
use crate::error::{Error, Result};

/// A parsed branch with the source text and the values of its plain
/// (non-`root`) bindings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchSpec {
    pub source: String,
    pub branch: PuiseuxBranch,
    pub bindings: Vec<(String, Alg)>,
}

impl BranchSpec {
    pub fn canonical(&self) -> String {
        print_branch(&self.branch)
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
    End,
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>> {
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let col = |byte: usize| src[..byte].chars().count();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (b, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].1.is_ascii_digit() {
                i += 1;
            }
            let end = chars.get(i).map_or(src.len(), |p| p.0);
            if i < chars.len() && chars[i].1 == '.' {
                return Err(perr(col(chars[i].0), "decimal literals are not exact; write p/q"));
            }
            out.push((Tok::Int(src[b..end].parse().unwrap()), col(chars[start].0)));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].1.is_alphanumeric() || chars[i].1 == '_' || chars[i].1 == '\'') {
                i += 1;
            }
            let end = chars.get(i).map_or(src.len(), |p| p.0);
            out.push((Tok::Ident(src[b..end].to_string()), col(chars[start].0)));
        } else if "+-*/^()=;,".contains(c) {
            out.push((Tok::Sym(c), col(b)));
            i += 1;
        } else {
            return Err(perr(col(b), format!("unexpected character `{c}`")));
        }
    }
    out.push((Tok::End, src.chars().count()));
    Ok(out)
}

fn perr(pos: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        column: pos + 1,
        message: msg.into(),
    }
}

#[derive(Clone, Debug)]
enum Node {
    Int(BigInt),
    Var(String),
    T(u32),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    Root(Box<Expr>),
}

#[derive(Clone, Debug)]
struct Expr {
    node: Node,
    pos: usize,
}

struct Term {
    negative: bool,
    factors: Vec<(bool, Expr)>,
    pos: usize,
}

struct Parsed {
    x_coeff: Vec<(bool, Expr)>,
    n: u32,
    n_pos: usize,
    terms: Vec<Term>,
    big_o: Option<(u32, usize)>,
    bindings: Vec<(String, Expr, usize)>,
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn is_sym(&self, c: char) -> bool {
        *self.peek() == Tok::Sym(c)
    }

    fn is_ident(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Ident(i) if i == s)
    }

    fn expect_sym(&mut self, c: char) -> Result<()> {
        if self.is_sym(c) {
            self.bump();
            Ok(())
        } else {
            Err(perr(self.pos(), format!("expected `{c}`, found {}", describe(self.peek()))))
        }
    }

    fn expect_ident(&mut self, s: &str) -> Result<()> {
        if self.is_ident(s) {
            self.bump();
            Ok(())
        } else {
            Err(perr(self.pos(), format!("expected `{s}`, found {}", describe(self.peek()))))
        }
    }

    fn small_int(&mut self, what: &str) -> Result<(u32, usize)> {
        let pos = self.pos();
        match self.bump() {
            Tok::Int(v) => v
                .to_u32()
                .map(|v| (v, pos))
                .ok_or_else(|| perr(pos, format!("{what} is too large"))),
            other => Err(perr(pos, format!("expected {what}, found {}", describe(&other)))),
        }
    }

    fn spec(&mut self) -> Result<Parsed> {
        self.expect_ident("x")?;
        self.expect_sym('=')?;
        let (x_coeff, n, n_pos) = {
            let t = self.term()?;
            let (n, n_pos) = t_power(&t)?;
            (strip_t(t.factors), n, n_pos)
        };
        self.expect_sym(';')?;
        self.expect_ident("y")?;
        self.expect_sym('=')?;
        let mut terms = Vec::new();
        let mut big_o = None;
        let mut first = true;
        loop {
            let negative = if self.is_sym('+') || self.is_sym('-') {
                matches!(self.bump(), Tok::Sym('-'))
            } else if first {
                false
            } else {
                break;
            };
            first = false;
            if self.is_ident("O") {
                let pos = self.pos();
                if negative {
                    return Err(perr(pos, "O(t^N) must be added, not subtracted"));
                }
                self.bump();
                self.expect_sym('(')?;
                self.expect_ident("t")?;
                self.expect_sym('^')?;
                let (p, _) = self.small_int("truncation order")?;
                self.expect_sym(')')?;
                big_o = Some((p, pos));
                break;
            }
            let mut t = self.term()?;
            t.negative = negative;
            terms.push(t);
        }
        let mut bindings = Vec::new();
        if self.is_ident("where") {
            self.bump();
            bindings = self.binding_list()?;
        } else if self.is_sym(';') {
            self.bump();
        }
        self.expect_end()?;
        Ok(Parsed {
            x_coeff,
            n,
            n_pos,
            terms,
            big_o,
            bindings,
        })
    }

    fn expect_end(&self) -> Result<()> {
        if *self.peek() != Tok::End {
            return Err(perr(self.pos(), format!("unexpected {}", describe(self.peek()))));
        }
        Ok(())
    }

    /// `name = expr` separated by commas or semicolons.
    fn binding_list(&mut self) -> Result<Vec<(String, Expr, usize)>> {
        let mut out = Vec::new();
        while *self.peek() != Tok::End {
            let pos = self.pos();
            let name = match self.bump() {
                Tok::Ident(s) if !RESERVED.contains(&s.as_str()) => s,
                Tok::Ident(s) => return Err(perr(pos, format!("`{s}` is reserved"))),
                other => return Err(perr(pos, format!("expected a name, found {}", describe(&other)))),
            };
            self.expect_sym('=')?;
            let e = self.expr()?;
            out.push((name, e, pos));
            if self.is_sym(',') || self.is_sym(';') {
                self.bump();
            } else {
                break;
            }
        }
        Ok(out)
    }

    /// `factor ((*|/)? factor)*`, allowing `t` and `t^E` factors.
    fn term(&mut self) -> Result<Term> {
        let pos = self.pos();
        let mut factors = vec![(false, self.factor(true)?)];
        loop {
            if self.is_sym('*') || self.is_sym('/') {
                let div = matches!(self.bump(), Tok::Sym('/'));
                factors.push((div, self.factor(true)?));
            } else if matches!(self.peek(), Tok::Int(_) | Tok::Ident(_)) && !self.is_ident("where") || self.is_sym('(') {
                factors.push((false, self.factor(true)?));
            } else {
                break;
            }
        }
        Ok(Term {
            negative: false,
            factors,
            pos,
        })
    }

    fn expr(&mut self) -> Result<Expr> {
        let pos = self.pos();
        let mut lhs = if self.is_sym('-') {
            self.bump();
            let e = self.product()?;
            Expr { node: Node::Neg(Box::new(e)), pos }
        } else {
            if self.is_sym('+') {
                self.bump();
            }
            self.product()?
        };
        while self.is_sym('+') || self.is_sym('-') {
            let p = self.pos();
            let sub = matches!(self.bump(), Tok::Sym('-'));
            let rhs = self.product()?;
            let (a, b) = (Box::new(lhs), Box::new(rhs));
            lhs = Expr {
                node: if sub { Node::Sub(a, b) } else { Node::Add(a, b) },
                pos: p,
            };
        }
        Ok(lhs)
    }

    fn product(&mut self) -> Result<Expr> {
        let mut lhs = self.factor(false)?;
        loop {
            let p = self.pos();
            let div = if self.is_sym('*') || self.is_sym('/') {
                matches!(self.bump(), Tok::Sym('/'))
            } else if matches!(self.peek(), Tok::Int(_) | Tok::Ident(_)) && !self.is_ident("where") || self.is_sym('(') {
                false
            } else {
                break;
            };
            let rhs = self.factor(false)?;
            let (a, b) = (Box::new(lhs), Box::new(rhs));
            lhs = Expr {
                node: if div { Node::Div(a, b) } else { Node::Mul(a, b) },
                pos: p,
            };
        }
        Ok(lhs)
    }

    fn factor(&mut self, allow_t: bool) -> Result<Expr> {
        let pos = self.pos();
        if self.is_ident("t") {
            if !allow_t {
                return Err(perr(pos, "t may only appear as a factor of a top-level term"));
            }
            self.bump();
            let e = if self.is_sym('^') {
                self.bump();
                self.small_int("exponent")?.0
            } else {
                1
            };
            return Ok(Expr { node: Node::T(e), pos });
        }
        let base = self.atom()?;
        if self.is_sym('^') {
            self.bump();
            let (e, _) = self.small_int("exponent")?;
            return Ok(Expr {
                node: Node::Pow(Box::new(base), e),
                pos,
            });
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        let pos = self.pos();
        match self.bump() {
            Tok::Int(v) => Ok(Expr { node: Node::Int(v), pos }),
            Tok::Ident(s) if s == "root" => {
                self.expect_sym('(')?;
                let e = self.expr()?;
                self.expect_sym(')')?;
                Ok(Expr {
                    node: Node::Root(Box::new(e)),
                    pos,
                })
            }
            Tok::Ident(s) if s == "t" => Err(perr(pos, "t may only appear as a factor of a top-level term")),
            Tok::Ident(s) => Ok(Expr { node: Node::Var(s), pos }),
            Tok::Sym('(') => {
                let e = self.expr()?;
                self.expect_sym(')')?;
                Ok(e)
            }
            Tok::Sym('-') => {
                let e = self.factor(false)?;
                Ok(Expr { node: Node::Neg(Box::new(e)), pos })
            }
            other => Err(perr(pos, format!("expected a number, name or `(`, found {}", describe(&other)))),
        }
    }
}

const RESERVED: &[&str] = &["t", "x", "y", "z", "root", "where", "O"];

fn describe(t: &Tok) -> String {
    match t {
        Tok::Int(v) => format!("`{v}`"),
        Tok::Ident(s) => format!("`{s}`"),
        Tok::Sym(c) => format!("`{c}`"),
        Tok::End => "end of input".into(),
    }
}

/// Sum of the exponents of the `t` factors of a term.
fn t_power(t: &Term) -> Result<(u32, usize)> {
    let mut e = 0u32;
    let mut seen = None;
    for (div, f) in &t.factors {
        if let Node::T(k) = f.node {
            if *div {
                return Err(perr(f.pos, "t cannot divide"));
            }
            e += k;
            seen.get_or_insert(f.pos);
        }
    }
    match seen {
        Some(_) => Ok((e, t.pos)),
        None => Err(perr(t.pos, "term has no power of t")),
    }
}

fn strip_t(factors: Vec<(bool, Expr)>) -> Vec<(bool, Expr)> {
    factors.into_iter().filter(|(_, f)| !matches!(f.node, Node::T(_))).collect()
}

struct Env {
    tower: Tower,
    vars: Vec<(String, Alg)>,
    roots: usize,
}

impl Env {
    fn lookup(&self, name: &str) -> Option<&Alg> {
        self.vars.iter().rev().find(|(n, _)| n == name).map(|(_, v)| v)
    }

    /// Evaluates to a polynomial in `z`; `z` is only bound inside `root`.
    fn eval(&mut self, e: &Expr, in_root: bool, name: Option<&str>) -> Result<UPoly> {
        Ok(match &e.node {
            Node::Int(v) => UPoly::constant(Alg::Rat(Rational::from_integer(v.clone()))),
            Node::Var(s) if s == "z" && in_root => UPoly::monomial(Alg::one(), 1),
            Node::Var(s) => match self.lookup(s) {
                Some(v) => UPoly::constant(v.clone()),
                None => return Err(perr(e.pos, format!("unbound parameter `{s}`"))),
            },
            Node::T(_) => return Err(perr(e.pos, "t may only appear as a factor of a top-level term")),
            Node::Neg(a) => self.eval(a, in_root, None)?.neg(),
            Node::Add(a, b) => self.eval(a, in_root, None)?.add(&self.eval(b, in_root, None)?),
            Node::Sub(a, b) => self.eval(a, in_root, None)?.sub(&self.eval(b, in_root, None)?),
            Node::Mul(a, b) => {
                let x = self.eval(a, in_root, None)?;
                let y = self.eval(b, in_root, None)?;
                x.mul(&y, &self.tower)
            }
            Node::Div(a, b) => {
                let x = self.eval(a, in_root, None)?;
                let y = self.eval(b, in_root, None)?;
                if y.degree().unwrap_or(0) > 0 {
                    return Err(perr(b.pos, "cannot divide by a polynomial in z"));
                }
                let inv = self.tower.inv(&y.coeff(0)).map_err(|err| match err {
                    Error::DivisionByZero => perr(b.pos, "division by zero"),
                    Error::ZeroDivisor(_) => perr(b.pos, "divisor is a zero divisor of the coefficient field"),
                    other => other,
                })?;
                x.scale(&inv, &self.tower)
            }
            Node::Pow(a, k) => {
                let base = self.eval(a, in_root, None)?;
                base.pow(*k as u64, &self.tower)
            }
            Node::Root(p) => {
                if in_root {
                    return Err(perr(e.pos, "nested root"));
                }
                let poly = self.eval(p, true, None)?;
                let label = match name {
                    Some(n) => n.to_string(),
                    None => {
                        self.roots += 1;
                        format!("r{}", self.roots)
                    }
                };
                let (t2, g) = self.tower.adjoin(&label, &poly).map_err(|err| match err {
                    Error::NotSquarefree => perr(e.pos, "root(...) needs a squarefree polynomial"),
                    Error::InvalidInput(_) => perr(e.pos, "root(...) needs a polynomial of degree at least 1 in z"),
                    other => other,
                })?;
                self.tower = t2;
                UPoly::constant(g)
            }
        })
    }

    /// Evaluates bindings in order; returns the non-`root` ones.
    fn bind(&mut self, list: &[(String, Expr, usize)]) -> Result<Vec<(String, Alg)>> {
        let mut plain = Vec::new();
        for (name, e, pos) in list {
            if self.lookup(name).is_some() {
                return Err(perr(*pos, format!("`{name}` is bound twice")));
            }
            let is_root = matches!(e.node, Node::Root(_));
            let v = self.constant(e, Some(name))?;
            if !is_root {
                plain.push((name.clone(), v.clone()));
            }
            self.vars.push((name.clone(), v));
        }
        Ok(plain)
    }

    fn constant(&mut self, e: &Expr, name: Option<&str>) -> Result<Alg> {
        let p = self.eval(e, false, name)?;
        if p.degree().unwrap_or(0) > 0 {
            return Err(perr(e.pos, "z is only defined inside root(...)"));
        }
        Ok(p.coeff(0))
    }

    fn product(&mut self, factors: &[(bool, Expr)]) -> Result<Alg> {
        let mut acc = Alg::one();
        for (div, f) in factors {
            let v = self.constant(f, None)?;
            acc = if *div {
                let inv = self.tower.inv(&v).map_err(|_| perr(f.pos, "division by zero"))?;
                self.tower.mul(&acc, &inv)
            } else {
                self.tower.mul(&acc, &v)
            };
        }
        Ok(acc)
    }
}

pub fn parse_branch_dsl(text: &str) -> Result<BranchSpec> {
    let toks = lex(text)?;
    let parsed = Parser { toks, at: 0 }.spec()?;
    let mut env = Env {
        tower: Tower::rational(),
        vars: Vec::new(),
        roots: 0,
    };
    let bindings = env.bind(&parsed.bindings)?;
    if parsed.n == 0 {
        return Err(perr(parsed.n_pos, "multiplicity must be positive"));
    }
    let x_coeff = env.product(&parsed.x_coeff)?;
    if x_coeff.is_zero() {
        return Err(perr(parsed.n_pos, "x coefficient must be nonzero"));
    }
    let mut last: Option<u32> = None;
    let mut terms: Vec<(usize, Alg)> = Vec::new();
    for term in &parsed.terms {
        let (e, pos) = t_power(term)?;
        if let Some(prev) = last {
            if e == prev {
                return Err(perr(pos, format!("duplicate exponent t^{e}")));
            }
            if e < prev {
                return Err(perr(pos, format!("exponents must be strictly increasing: t^{e} after t^{prev}")));
            }
        }
        last = Some(e);
        let mut c = env.product(&strip_t(term.factors.clone()))?;
        if term.negative {
            c = c.neg();
        }
        if e == 0 {
            return Err(perr(pos, "constant term: the branch must pass through the origin"));
        }
        if !c.is_zero() {
            terms.push((e as usize, c));
        }
    }
    let precision = match parsed.big_o {
        Some((p, pos)) => {
            if last.is_some_and(|l| l >= p) {
                return Err(perr(pos, format!("O(t^{p}) must exceed every exponent")));
            }
            Some(p as usize)
        }
        None => None,
    };
    let Some(&(m, _)) = terms.first() else {
        return Err(perr(text.chars().count(), "y has no nonzero term"));
    };
    let y_pos = parsed.terms[0].pos;
    if (m as u32) < parsed.n {
        return Err(perr(y_pos, "y-order below multiplicity"));
    }
    if m as u32 == parsed.n && parsed.n > 1 {
        return Err(perr(y_pos, "y-order equals multiplicity; the tangent must be y = 0"));
    }
    let tower = env.tower.clone();
    let terms = terms.into_iter().map(|(e, c)| (e, tower.reduce(&c)));
    let y = TruncatedSeries::from_terms(terms, precision);
    let branch = PuiseuxBranch::with_x_coeff(parsed.n, tower.reduce(&x_coeff), y, tower)?;
    Ok(BranchSpec {
        source: text.to_string(),
        branch,
        bindings,
    })
}

/// Parses `name = expr, ...` on its own, e.g. family parameters
/// `c = 7, s = root(z^2 - 6), a1 = 4*s/9`. Returns the tower built by the
/// `root` bindings and the values of the others.
pub fn parse_bindings(text: &str) -> Result<(Tower, Vec<(String, Alg)>)> {
    let mut p = Parser { toks: lex(text)?, at: 0 };
    let list = p.binding_list()?;
    p.expect_end()?;
    let mut env = Env {
        tower: Tower::rational(),
        vars: Vec::new(),
        roots: 0,
    };
    let plain = env.bind(&list)?;
    let tower = env.tower.clone();
    Ok((tower.clone(), plain.into_iter().map(|(k, v)| (k, tower.reduce(&v))).collect()))
}

fn coefficient_term(t: &Tower, c: &Alg, mono: &str, first: bool) -> String {
    let (neg, body) = match c {
        Alg::Rat(r) if r.is_negative() => (true, Alg::Rat(-r.clone())),
        _ => (false, c.clone()),
    };
    let text = if body.is_one() {
        mono.to_string()
    } else if mono.is_empty() {
        t.format(&body)
    } else {
        format!("{}*{mono}", t.format(&body))
    };
    match (first, neg) {
        (true, false) => text,
        (true, true) => format!("-{text}"),
        (false, false) => format!(" + {text}"),
        (false, true) => format!(" - {text}"),
    }
}

fn mono(e: usize) -> String {
    if e == 1 {
        "t".into()
    } else {
        format!("t^{e}")
    }
}

/// Canonical text of a branch: coefficients written out, tower levels as
/// `root` bindings. Parsing it gives back the same branch.
pub fn print_branch(b: &PuiseuxBranch) -> String {
    let t = &b.tower;
    let mut s = String::from("x=");
    s.push_str(&coefficient_term(t, &b.x_coeff, &mono(b.n as usize), true));
    s.push_str("; y=");
    let mut first = true;
    for (e, c) in b.y.terms() {
        s.push_str(&coefficient_term(t, c, &mono(e), first));
        first = false;
    }
    if first {
        s.push('0');
    }
    if let Some(p) = b.y.precision() {
        s.push_str(&format!(" + O(t^{p})"));
    }
    if !t.is_empty() {
        let levels: Vec<String> = t
            .levels()
            .iter()
            .enumerate()
            .map(|(i, l)| {
                let p = UPoly::new(l.modulus.clone());
                format!("{}=root({})", l.name, p.display(&t.prefix(i), "z"))
            })
            .collect();
        s.push_str(" where ");
        s.push_str(&levels.join(", "));
    }
    s
}
