//! Text input formats: matrices, row lists, polynomials and group names.
//! Every error carries the column where parsing stopped.

use std::fmt;

use inertia_core::abelian::FgAbGroup;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Deserialize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub what: &'static str,
    pub input: String,
    /// Zero-based character offset.
    pub pos: usize,
    pub msg: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "cannot parse {} at column {}: {}", self.what, self.pos + 1, self.msg)?;
        writeln!(f, "  {}", self.input)?;
        write!(f, "  {}^", " ".repeat(self.pos))
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Open,
    Close,
    Comma,
    Slash,
    Int(BigInt),
    /// A quoted `"p/q"` or `"n"` literal.
    Quoted(BigRational),
}

struct Lexer<'a> {
    what: &'static str,
    src: &'a str,
    chars: Vec<char>,
}

impl<'a> Lexer<'a> {
    fn err(&self, pos: usize, msg: impl Into<String>) -> ParseError {
        ParseError { what: self.what, input: self.src.to_string(), pos, msg: msg.into() }
    }

    fn tokens(&self) -> Result<Vec<(Tok, usize)>, ParseError> {
        let c = &self.chars;
        let mut out = Vec::new();
        let mut i = 0;
        while i < c.len() {
            let start = i;
            match c[i] {
                ' ' | '\t' | '\n' => i += 1,
                '[' => {
                    out.push((Tok::Open, i));
                    i += 1;
                }
                ']' => {
                    out.push((Tok::Close, i));
                    i += 1;
                }
                ',' => {
                    out.push((Tok::Comma, i));
                    i += 1;
                }
                '/' => {
                    out.push((Tok::Slash, i));
                    i += 1;
                }
                '"' => {
                    let end = (i + 1..c.len()).find(|&j| c[j] == '"').ok_or_else(|| self.err(i, "unterminated string"))?;
                    let body: String = c[i + 1..end].iter().collect();
                    let q = parse_rational_literal(body.trim()).ok_or_else(|| self.err(i + 1, format!("`{body}` is not a rational")))?;
                    out.push((Tok::Quoted(q), start));
                    i = end + 1;
                }
                '-' | '+' | '0'..='9' => {
                    i += 1;
                    while i < c.len() && c[i].is_ascii_digit() {
                        i += 1;
                    }
                    let text: String = c[start..i].iter().collect();
                    let n: BigInt = text.parse().map_err(|_| self.err(start, format!("`{text}` is not an integer")))?;
                    out.push((Tok::Int(n), start));
                }
                ch => return Err(self.err(i, format!("unexpected character `{ch}`"))),
            }
        }
        Ok(out)
    }
}

fn parse_rational_literal(s: &str) -> Option<BigRational> {
    match s.split_once('/') {
        Some((n, d)) => {
            let d: BigInt = d.trim().parse().ok()?;
            let n: BigInt = n.trim().parse().ok()?;
            (!d.is_zero()).then(|| BigRational::new(n, d))
        }
        None => Some(BigRational::from_integer(s.trim().parse().ok()?)),
    }
}

#[derive(Debug, Clone)]
enum Node {
    Num(BigRational, usize),
    List(Vec<Node>, usize),
}

impl Node {
    fn pos(&self) -> usize {
        match self {
            Node::Num(_, p) | Node::List(_, p) => *p,
        }
    }
}

struct Parser<'a> {
    lex: Lexer<'a>,
    toks: Vec<(Tok, usize)>,
    at: usize,
}

impl<'a> Parser<'a> {
    fn new(what: &'static str, src: &'a str) -> Result<Self, ParseError> {
        let lex = Lexer { what, src, chars: src.chars().collect() };
        let toks = lex.tokens()?;
        Ok(Self { lex, toks, at: 0 })
    }

    fn end_pos(&self) -> usize {
        self.lex.chars.len()
    }

    fn peek(&self) -> Option<&(Tok, usize)> {
        self.toks.get(self.at)
    }

    fn err_here(&self, msg: impl Into<String>) -> ParseError {
        let pos = self.peek().map(|t| t.1).unwrap_or_else(|| self.end_pos());
        self.lex.err(pos, msg)
    }

    fn number(&mut self) -> Result<Node, ParseError> {
        match self.peek().cloned() {
            Some((Tok::Quoted(q), p)) => {
                self.at += 1;
                Ok(Node::Num(q, p))
            }
            Some((Tok::Int(n), p)) => {
                self.at += 1;
                if let Some((Tok::Slash, sp)) = self.peek().cloned() {
                    self.at += 1;
                    match self.peek().cloned() {
                        Some((Tok::Int(d), dp)) => {
                            self.at += 1;
                            if d.is_zero() {
                                return Err(self.lex.err(dp, "zero denominator"));
                            }
                            Ok(Node::Num(BigRational::new(n, d), p))
                        }
                        _ => Err(self.lex.err(sp + 1, "expected a denominator")),
                    }
                } else {
                    Ok(Node::Num(BigRational::from_integer(n), p))
                }
            }
            _ => Err(self.err_here("expected a number")),
        }
    }

    fn value(&mut self) -> Result<Node, ParseError> {
        match self.peek().cloned() {
            Some((Tok::Open, p)) => {
                self.at += 1;
                let mut items = Vec::new();
                if let Some((Tok::Close, _)) = self.peek() {
                    self.at += 1;
                    return Ok(Node::List(items, p));
                }
                loop {
                    items.push(self.value()?);
                    match self.peek() {
                        Some((Tok::Comma, _)) => self.at += 1,
                        Some((Tok::Close, _)) => {
                            self.at += 1;
                            return Ok(Node::List(items, p));
                        }
                        _ => return Err(self.err_here("expected `,` or `]`")),
                    }
                }
            }
            _ => self.number(),
        }
    }

    /// A top-level list, optionally followed by `/d` scaling everything.
    fn scaled_list(&mut self) -> Result<(Node, BigInt), ParseError> {
        let v = self.value()?;
        let mut den = BigInt::one();
        if let Some((Tok::Slash, _)) = self.peek() {
            self.at += 1;
            match self.peek().cloned() {
                Some((Tok::Int(d), _)) if !d.is_zero() => {
                    self.at += 1;
                    den = d;
                }
                _ => return Err(self.err_here("expected a nonzero integer denominator")),
            }
        }
        self.finish()?;
        Ok((v, den))
    }

    fn finish(&self) -> Result<(), ParseError> {
        if self.at < self.toks.len() {
            return Err(self.err_here("unexpected trailing input"));
        }
        Ok(())
    }

    fn rows(&self, node: &Node, width: Option<usize>) -> Result<Vec<Vec<BigRational>>, ParseError> {
        let Node::List(rows, _) = node else { return Err(self.lex.err(node.pos(), "expected a list of rows")) };
        let mut out = Vec::new();
        let mut w = width;
        for r in rows {
            let Node::List(items, rp) = r else { return Err(self.lex.err(r.pos(), "expected a row `[...]`")) };
            if let Some(w) = w {
                if items.len() != w {
                    return Err(self.lex.err(*rp, format!("row has {} entries, expected {w}", items.len())));
                }
            }
            w = Some(items.len());
            let mut row = Vec::new();
            for it in items {
                match it {
                    Node::Num(q, _) => row.push(q.clone()),
                    Node::List(_, lp) => return Err(self.lex.err(*lp, "expected a number")),
                }
            }
            out.push(row);
        }
        Ok(out)
    }
}

/// A square rational matrix such as `[[3,0],[0,2]]/2` or `[["1/2",0],[0,1]]`.
pub fn rational_matrix(src: &str) -> Result<Vec<Vec<BigRational>>, ParseError> {
    let mut p = Parser::new("matrix", src)?;
    let (node, den) = p.scaled_list()?;
    let rows = p.rows(&node, None)?;
    if rows.is_empty() {
        return Err(p.lex.err(node.pos(), "empty matrix"));
    }
    if rows.iter().any(|r| r.len() != rows.len()) {
        return Err(p.lex.err(node.pos(), format!("matrix is not square ({} rows)", rows.len())));
    }
    let d = BigRational::from_integer(den);
    Ok(rows.into_iter().map(|r| r.into_iter().map(|x| x / &d).collect()).collect())
}

pub fn integer_matrix(src: &str) -> Result<Vec<Vec<BigInt>>, ParseError> {
    let m = rational_matrix(src)?;
    to_integers("matrix", src, m)
}

fn to_integers(what: &'static str, src: &str, m: Vec<Vec<BigRational>>) -> Result<Vec<Vec<BigInt>>, ParseError> {
    m.into_iter()
        .map(|r| {
            r.into_iter()
                .map(|x| {
                    if x.is_integer() {
                        Ok(x.to_integer())
                    } else {
                        Err(ParseError { what, input: src.into(), pos: 0, msg: format!("entry {x} is not an integer") })
                    }
                })
                .collect()
        })
        .collect()
}

/// A list of rows of a common width, possibly empty: `[]`, `[[2,0],[0,3]]`.
/// The JSON form `{"basis": [[...]]}` is accepted too.
pub fn rational_rows(src: &str, width: usize) -> Result<Vec<Vec<BigRational>>, ParseError> {
    if src.trim_start().starts_with('{') {
        let v: serde_json::Value = serde_json::from_str(src.trim()).map_err(|e| ParseError {
            what: "rows",
            input: src.into(),
            pos: e.column().saturating_sub(1),
            msg: e.to_string(),
        })?;
        let basis = v.get("basis").ok_or_else(|| ParseError {
            what: "rows",
            input: src.into(),
            pos: 0,
            msg: "missing `basis`".into(),
        })?;
        return rational_rows(&basis.to_string(), width);
    }
    let mut p = Parser::new("rows", src)?;
    let (node, den) = p.scaled_list()?;
    let d = BigRational::from_integer(den);
    let rows = p.rows(&node, Some(width))?;
    Ok(rows.into_iter().map(|r| r.into_iter().map(|x| x / &d).collect()).collect())
}

pub fn integer_rows(src: &str, width: usize) -> Result<Vec<Vec<BigInt>>, ParseError> {
    let rows = rational_rows(src, width)?;
    to_integers("rows", src, rows)
}

/// Flat integer list: `1,1,1` or `[1,1,1]`.
pub fn integer_list(what: &'static str, src: &str) -> Result<Vec<BigInt>, ParseError> {
    let trimmed = src.trim_start();
    let wrapped = if trimmed.starts_with('[') { src.to_string() } else { format!("[{src}]") };
    let shift = if trimmed.starts_with('[') { 0 } else { 1 };
    let mut p = Parser::new(what, &wrapped).map_err(|e| unshift(e, src, shift))?;
    let node = p.value().map_err(|e| unshift(e, src, shift))?;
    p.finish().map_err(|e| unshift(e, src, shift))?;
    let Node::List(items, _) = node else {
        return Err(ParseError { what, input: src.into(), pos: 0, msg: "expected a list".into() });
    };
    items
        .into_iter()
        .map(|it| match it {
            Node::Num(q, _) if q.is_integer() => Ok(q.to_integer()),
            other => Err(unshift(p.lex.err(other.pos(), "expected an integer"), src, shift)),
        })
        .collect()
}

fn unshift(mut e: ParseError, src: &str, shift: usize) -> ParseError {
    e.input = src.to_string();
    e.pos = e.pos.saturating_sub(shift).min(src.chars().count());
    e
}

/// `Q^n` or a finitely generated group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Ambient {
    Fg(FgAbGroup),
    Rational(usize),
}

#[derive(Deserialize)]
struct GroupJson {
    #[serde(default)]
    invariant_factors: Vec<IntLike>,
    #[serde(default)]
    free_rank: IntLike,
}

#[derive(Deserialize, Default)]
#[serde(untagged)]
enum IntLike {
    Num(u64),
    Str(String),
    #[default]
    Zero,
}

impl IntLike {
    fn to_big(&self) -> Option<BigInt> {
        match self {
            IntLike::Num(n) => Some(BigInt::from(*n)),
            IntLike::Str(s) => s.trim().parse().ok(),
            IntLike::Zero => Some(BigInt::zero()),
        }
    }
}

/// `Z^2`, `Z/2 + Z/4 + Z`, `(Z/3)^2`, `Q^3`, `0`, or the JSON form
/// `{"invariant_factors": ["2","4"], "free_rank": "1"}`.
pub fn ambient(src: &str) -> Result<Ambient, ParseError> {
    let err = |pos: usize, msg: String| ParseError { what: "group", input: src.into(), pos, msg };
    let t = src.trim();
    if t.starts_with('{') {
        let g: GroupJson = serde_json::from_str(t).map_err(|e| err(e.column().saturating_sub(1), e.to_string()))?;
        let factors: Option<Vec<BigInt>> = g.invariant_factors.iter().map(IntLike::to_big).collect();
        let factors = factors.ok_or_else(|| err(0, "invariant factors must be integers".into()))?;
        let r = g.free_rank.to_big().and_then(|r| usize::try_from(r).ok()).ok_or_else(|| err(0, "bad free rank".into()))?;
        return FgAbGroup::new(factors, r).map(Ambient::Fg).map_err(|e| err(0, e.to_string()));
    }
    let mut orders = Vec::new();
    let mut free = 0usize;
    let mut offset = 0usize;
    for term in src.split(['+', '⊕']) {
        let lead = term.len() - term.trim_start().len();
        let pos = src[..offset + lead].chars().count();
        let body: String = term.chars().filter(|c| !c.is_whitespace()).collect();
        offset += term.len() + 1;
        let (base, exp) = match body.rsplit_once('^') {
            Some((b, e)) => {
                let e: usize = e.parse().map_err(|_| err(pos, format!("bad exponent in `{body}`")))?;
                (b.trim_start_matches('(').trim_end_matches(')').to_string(), e)
            }
            None => (body.clone(), 1),
        };
        match base.as_str() {
            "0" => {}
            "Z" => free += exp,
            "Q" => {
                if src.split(['+', '⊕']).count() != 1 {
                    return Err(err(pos, "Q^n cannot be combined with other summands".into()));
                }
                return Ok(Ambient::Rational(exp));
            }
            b if b.starts_with("Z/") => {
                let n: BigInt = b[2..].parse().map_err(|_| err(pos + 2, format!("bad modulus in `{body}`")))?;
                if n < BigInt::one() {
                    return Err(err(pos + 2, "modulus must be positive".into()));
                }
                orders.extend(std::iter::repeat_n(n, exp));
            }
            _ => return Err(err(pos, format!("unknown summand `{body}`; use Z, Z^k, Z/n, (Z/n)^k or Q^n"))),
        }
    }
    Ok(Ambient::Fg(FgAbGroup::from_cyclic_orders(&orders, free)))
}

/// A finite group cell for the shift models.
pub fn finite_cell(src: &str) -> Result<FgAbGroup, ParseError> {
    match ambient(src)? {
        Ambient::Fg(g) if g.is_finite() => Ok(g),
        _ => Err(ParseError { what: "cell", input: src.into(), pos: 0, msg: "the cell must be a finite group".into() }),
    }
}
