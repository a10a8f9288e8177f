//! Text syntax for rational functions, index sets, operators, vectors and
//! operator sequences.
//!
//! ```text
//! ratfn    := expr in n with + - * / ^ and parentheses, e.g. 1/(n + 1)
//! space    := finite(D) | seq(D, c0|l1) | NAME
//! operator := [[a, b], [c, d]] | mat(DOMAIN, CODOMAIN, [[...]]) | id(D|space)
//!           | zero(ROWS|space, COLS|space) | bandproj(D|space, i, ...) | NAME
//! set      := naturals | squares | ap(a, d) | finite(i, ...) | cofinite(i, ...)
//!           | union(A, B) | inter(A, B) | complement(A) | pred(primes|pow2) | NAME
//! sequence := const(op) | scaled(ratfn, op) | coordfun(D) | piecewise(set, A, B)
//!           | sum(A, B) | scale(q, A) | join(A, B) | meet(A, B) | abs(A) | pos(A)
//!           | neg(A) | compose_left(op, A) | compose_right(A, op) | NAME | op
//! ```
//! Operator literals written as bare `[[...]]` act between `finite` spaces;
//! band projection coordinates are 1-based.

use std::collections::BTreeMap;

use crate::density::{IndexSet, Predicate};
use crate::error::{Error, Result};
use crate::lattice::{LatticeVector, SequenceFlavor, SpaceDescriptor};
use crate::opseq::OperatorSequence;
use crate::operator::{band_projection, BandPattern, OrderBoundedOperator};
use crate::ratfn::{Polynomial, RationalFunction};
use crate::scalar::Scalar;

/// Named definitions visible to the parsers.
#[derive(Debug, Clone, Default)]
pub struct Env {
    pub spaces: BTreeMap<String, SpaceDescriptor>,
    pub operators: BTreeMap<String, OrderBoundedOperator>,
    pub index_sets: BTreeMap<String, IndexSet>,
    pub vectors: BTreeMap<String, LatticeVector>,
    pub sequences: BTreeMap<String, OperatorSequence>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(String),
    Punct(char),
    End,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn tokenize(src: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let (mut line, mut col) = (1, 1);
    let chars: Vec<char> = src.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        let start = i;
        let tok = if c.is_ascii_digit() {
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            Tok::Int(chars[start..i].iter().collect())
        } else if c.is_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '.') {
                i += 1;
            }
            Tok::Ident(chars[start..i].iter().collect())
        } else if "()[],+-*/^".contains(c) {
            i += 1;
            Tok::Punct(c)
        } else {
            return Err(Error::Parse {
                line,
                col,
                msg: format!("unexpected character `{c}`"),
            });
        };
        col += i - start;
        out.push(Token { tok, line: l0, col: c0 });
    }
    out.push(Token { tok: Tok::End, line, col });
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Token>,
    pos: usize,
    env: &'a Env,
}

impl<'a> Parser<'a> {
    fn new(src: &str, env: &'a Env) -> Result<Self> {
        Ok(Parser {
            toks: tokenize(src)?,
            pos: 0,
            env,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek2(&self) -> &Tok {
        &self.toks[(self.pos + 1).min(self.toks.len() - 1)].tok
    }

    fn next(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        let t = &self.toks[self.pos];
        Err(Error::Parse {
            line: t.line,
            col: t.col,
            msg: msg.into(),
        })
    }

    fn describe(&self) -> String {
        match self.peek() {
            Tok::Ident(s) | Tok::Int(s) => format!("`{s}`"),
            Tok::Punct(c) => format!("`{c}`"),
            Tok::End => "end of input".into(),
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if *self.peek() == Tok::Punct(c) {
            self.next();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected `{c}`, found {}", self.describe()))
        }
    }

    fn finish(&mut self) -> Result<()> {
        if *self.peek() != Tok::End {
            return self.err(format!("unexpected trailing {}", self.describe()));
        }
        Ok(())
    }

    fn ident(&mut self) -> Result<String> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.next();
                Ok(s)
            }
            _ => self.err(format!("expected a name, found {}", self.describe())),
        }
    }

    fn uint(&mut self) -> Result<u64> {
        match self.peek().clone() {
            Tok::Int(s) => match s.parse() {
                Ok(v) => {
                    self.next();
                    Ok(v)
                }
                Err(_) => self.err(format!("integer `{s}` out of range")),
            },
            _ => self.err(format!("expected an integer, found {}", self.describe())),
        }
    }

    fn usize(&mut self) -> Result<usize> {
        Ok(self.uint()? as usize)
    }

    /// Parses `name(` and returns the name when the next tokens form a call.
    fn call_head(&mut self) -> Option<String> {
        if let (Tok::Ident(s), Tok::Punct('(')) = (self.peek().clone(), self.peek2().clone()) {
            self.next();
            self.next();
            Some(s)
        } else {
            None
        }
    }

    /// Maps library errors raised while building a value to this position.
    fn at<T>(&self, r: Result<T>) -> Result<T> {
        match r {
            Err(Error::Usage(msg)) | Err(Error::RationalFunction(msg)) => self.err(msg),
            other => other,
        }
    }

    // ---- scalars and rational functions

    fn scalar(&mut self) -> Result<Scalar> {
        let neg = self.eat('-');
        let Tok::Int(num) = self.peek().clone() else {
            return self.err(format!("expected a rational literal, found {}", self.describe()));
        };
        self.next();
        let mut text = num;
        if self.eat('/') {
            let Tok::Int(den) = self.peek().clone() else {
                return self.err("expected a denominator");
            };
            self.next();
            text = format!("{text}/{den}");
        }
        let q: Scalar = match text.parse() {
            Ok(q) => q,
            Err(_) => return self.err("zero denominator"),
        };
        Ok(if neg { -q } else { q })
    }

    fn ratfn(&mut self) -> Result<RationalFunction> {
        let mut acc = self.rterm()?;
        loop {
            if self.eat('+') {
                acc = acc.add(&self.rterm()?);
            } else if self.eat('-') {
                acc = acc.sub(&self.rterm()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn rterm(&mut self) -> Result<RationalFunction> {
        let mut acc = self.runary()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.runary()?);
            } else if self.eat('/') {
                let d = self.runary()?;
                if d.is_zero() {
                    return self.err("division by zero");
                }
                let q = acc.div(&d);
                acc = self.at(q)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn runary(&mut self) -> Result<RationalFunction> {
        if self.eat('-') {
            return Ok(self.runary()?.neg());
        }
        let base = self.ratom()?;
        if self.eat('^') {
            let k = self.uint()?;
            if k > 64 {
                return self.err("exponent too large");
            }
            let mut out = RationalFunction::constant(Scalar::one());
            for _ in 0..k {
                out = out.mul(&base);
            }
            return Ok(out);
        }
        Ok(base)
    }

    fn ratom(&mut self) -> Result<RationalFunction> {
        match self.peek().clone() {
            Tok::Int(s) => {
                self.next();
                let q: Scalar = s.parse().expect("digits");
                Ok(RationalFunction::constant(q))
            }
            Tok::Ident(s) if s == "n" => {
                self.next();
                Ok(RationalFunction::polynomial(Polynomial::var()))
            }
            Tok::Punct('(') => {
                self.next();
                let r = self.ratfn()?;
                self.expect(')')?;
                Ok(r)
            }
            _ => self.err(format!("expected a term in n, found {}", self.describe())),
        }
    }

    // ---- spaces

    fn space(&mut self) -> Result<SpaceDescriptor> {
        if let Tok::Int(_) = self.peek() {
            let d = self.usize()?;
            return self.at(SpaceDescriptor::finite(d)).or_else(|_| self.err("dimension must be at least 1"));
        }
        match self.call_head().as_deref() {
            Some("finite") => {
                let d = self.usize()?;
                self.expect(')')?;
                SpaceDescriptor::finite(d).or_else(|_| self.err("dimension must be at least 1"))
            }
            Some("seq") => {
                let d = self.usize()?;
                self.expect(',')?;
                let flavor = match self.ident()?.as_str() {
                    "c0" => SequenceFlavor::C0,
                    "l1" => SequenceFlavor::L1,
                    other => return self.err(format!("unknown sequence flavor `{other}`")),
                };
                self.expect(')')?;
                SpaceDescriptor::truncated(d, flavor).or_else(|_| self.err("truncation must be at least 1"))
            }
            Some(other) => self.err(format!("unknown space constructor `{other}`")),
            None => {
                let name = self.ident()?;
                self.env
                    .spaces
                    .get(&name)
                    .copied()
                    .ok_or(Error::Resolution(name))
            }
        }
    }

    // ---- operators and vectors

    fn row(&mut self) -> Result<Vec<Scalar>> {
        self.expect('[')?;
        let mut out = Vec::new();
        if self.eat(']') {
            return Ok(out);
        }
        loop {
            out.push(self.scalar()?);
            if self.eat(']') {
                return Ok(out);
            }
            self.expect(',')?;
        }
    }

    fn rows(&mut self) -> Result<Vec<Vec<Scalar>>> {
        self.expect('[')?;
        let mut out = Vec::new();
        loop {
            out.push(self.row()?);
            if self.eat(']') {
                return Ok(out);
            }
            self.expect(',')?;
        }
    }

    fn operator(&mut self) -> Result<OrderBoundedOperator> {
        if *self.peek() == Tok::Punct('[') {
            let rows = self.rows()?;
            let (m, n) = (rows.len(), rows[0].len());
            let dom = SpaceDescriptor::finite(n).or_else(|_| self.err("empty matrix row"))?;
            let cod = SpaceDescriptor::finite(m)?;
            return OrderBoundedOperator::new(dom, cod, rows);
        }
        match self.call_head().as_deref() {
            Some("mat") => {
                let dom = self.space()?;
                self.expect(',')?;
                let cod = self.space()?;
                self.expect(',')?;
                let rows = self.rows()?;
                self.expect(')')?;
                OrderBoundedOperator::new(dom, cod, rows)
            }
            Some("id") => {
                let s = self.space()?;
                self.expect(')')?;
                Ok(OrderBoundedOperator::identity(s))
            }
            Some("zero") => {
                let cod = self.space()?;
                self.expect(',')?;
                let dom = self.space()?;
                self.expect(')')?;
                Ok(OrderBoundedOperator::zero(dom, cod))
            }
            Some("bandproj") => {
                let s = self.space()?;
                let mut coords = Vec::new();
                while self.eat(',') {
                    let i = self.usize()?;
                    if i == 0 {
                        return self.err("band projection coordinates are 1-based");
                    }
                    coords.push(i - 1);
                }
                self.expect(')')?;
                band_projection(&BandPattern::coords(coords), s)
            }
            Some(other) => self.err(format!("unknown operator constructor `{other}`")),
            None => {
                let name = self.ident()?;
                self.env
                    .operators
                    .get(&name)
                    .cloned()
                    .ok_or(Error::Resolution(name))
            }
        }
    }

    fn vector(&mut self) -> Result<LatticeVector> {
        if *self.peek() == Tok::Punct('[') {
            let coords = self.row()?;
            let s = SpaceDescriptor::finite(coords.len()).or_else(|_| self.err("empty vector"))?;
            return LatticeVector::new(s, coords);
        }
        match self.call_head().as_deref() {
            Some("vec") => {
                let s = self.space()?;
                self.expect(',')?;
                let coords = self.row()?;
                self.expect(')')?;
                LatticeVector::new(s, coords)
            }
            Some("ones") => {
                let s = self.space()?;
                self.expect(')')?;
                Ok(LatticeVector::ones(s))
            }
            Some("basis") => {
                let s = self.space()?;
                self.expect(',')?;
                let i = self.usize()?;
                self.expect(')')?;
                if i == 0 {
                    return self.err("basis vectors are 1-based");
                }
                LatticeVector::basis(s, i - 1)
            }
            Some(other) => self.err(format!("unknown vector constructor `{other}`")),
            None => {
                let name = self.ident()?;
                self.env.vectors.get(&name).cloned().ok_or(Error::Resolution(name))
            }
        }
    }

    // ---- index sets

    fn index_list(&mut self) -> Result<Vec<u64>> {
        let mut out = Vec::new();
        if self.eat(')') {
            return Ok(out);
        }
        loop {
            out.push(self.uint()?);
            if self.eat(')') {
                return Ok(out);
            }
            self.expect(',')?;
        }
    }

    fn index_set(&mut self) -> Result<IndexSet> {
        match self.call_head().as_deref() {
            Some("ap") => {
                let a = self.uint()?;
                self.expect(',')?;
                let d = self.uint()?;
                self.expect(')')?;
                let s = IndexSet::ap(a, d);
                self.at(s)
            }
            Some("finite") => {
                let xs = self.index_list()?;
                let s = IndexSet::finite(xs);
                self.at(s)
            }
            Some("cofinite") => {
                let xs = self.index_list()?;
                let s = IndexSet::cofinite(xs);
                self.at(s)
            }
            Some(op @ ("union" | "inter")) => {
                let a = self.index_set()?;
                self.expect(',')?;
                let b = self.index_set()?;
                self.expect(')')?;
                Ok(if op == "union" {
                    IndexSet::union(a, b)
                } else {
                    IndexSet::inter(a, b)
                })
            }
            Some("complement") => {
                let a = self.index_set()?;
                self.expect(')')?;
                Ok(IndexSet::complement(a))
            }
            Some("pred") => {
                let name = self.ident()?;
                self.expect(')')?;
                match Predicate::builtin(&name) {
                    Some(p) => Ok(IndexSet::Predicate(p)),
                    None => Err(Error::Resolution(format!("pred({name})"))),
                }
            }
            Some(other) => self.err(format!("unknown index set constructor `{other}`")),
            None => {
                let name = self.ident()?;
                match name.as_str() {
                    "squares" => Ok(IndexSet::Squares),
                    "naturals" => Ok(IndexSet::naturals()),
                    _ => self.env.index_sets.get(&name).cloned().ok_or(Error::Resolution(name)),
                }
            }
        }
    }

    // ---- sequences

    fn sequence(&mut self) -> Result<OperatorSequence> {
        use OperatorSequence as S;
        if *self.peek() == Tok::Punct('[') {
            return Ok(S::Const(self.operator()?));
        }
        let save = self.pos;
        let Some(head) = self.call_head() else {
            let name = self.ident()?;
            if let Some(s) = self.env.sequences.get(&name) {
                return Ok(s.clone());
            }
            if let Some(t) = self.env.operators.get(&name) {
                return Ok(S::Const(t.clone()));
            }
            return Err(Error::Resolution(name));
        };
        let two = |p: &mut Self| -> Result<(S, S)> {
            let a = p.sequence()?;
            p.expect(',')?;
            let b = p.sequence()?;
            Ok((a, b))
        };
        let out = match head.as_str() {
            "const" => S::Const(self.operator()?),
            "scaled" => {
                let c = self.ratfn()?;
                let c = self.at(RationalFunction::new(c.num().clone(), c.den().clone()))?;
                self.expect(',')?;
                S::ScaledOp(c, self.operator()?)
            }
            "coordfun" => {
                let d = self.usize()?;
                if d == 0 {
                    return self.err("truncation must be at least 1");
                }
                S::CoordFunctional(d)
            }
            "piecewise" => {
                let j = self.index_set()?;
                self.expect(',')?;
                let (a, b) = two(self)?;
                S::piecewise(j, a, b)
            }
            "sum" => {
                let (a, b) = two(self)?;
                S::sum(a, b)
            }
            "join" => {
                let (a, b) = two(self)?;
                S::join(a, b)
            }
            "meet" => {
                let (a, b) = two(self)?;
                S::meet(a, b)
            }
            "scale" => {
                let q = self.scalar()?;
                self.expect(',')?;
                S::scale(q, self.sequence()?)
            }
            "abs" => S::abs(self.sequence()?),
            "pos" => S::pos_part(self.sequence()?),
            "neg" => S::neg_part(self.sequence()?),
            "compose_left" => {
                let t = self.operator()?;
                self.expect(',')?;
                S::compose_left(t, self.sequence()?)
            }
            "compose_right" => {
                let a = self.sequence()?;
                self.expect(',')?;
                S::compose_right(a, self.operator()?)
            }
            "mat" | "id" | "zero" | "bandproj" => {
                self.pos = save;
                return Ok(S::Const(self.operator()?));
            }
            other => {
                self.pos = save;
                return self.err(format!("unknown sequence constructor `{other}`"));
            }
        };
        self.expect(')')?;
        Ok(out)
    }
}

fn whole<T>(src: &str, env: &Env, f: impl FnOnce(&mut Parser) -> Result<T>) -> Result<T> {
    let mut p = Parser::new(src, env)?;
    let v = f(&mut p)?;
    p.finish()?;
    Ok(v)
}

pub fn parse_ratfn(src: &str) -> Result<RationalFunction> {
    let env = Env::default();
    whole(src, &env, |p| {
        let r = p.ratfn()?;
        let checked = RationalFunction::new(r.num().clone(), r.den().clone());
        p.at(checked)
    })
}

pub fn parse_scalar(src: &str) -> Result<Scalar> {
    whole(src, &Env::default(), |p| p.scalar())
}

pub fn parse_space(src: &str, env: &Env) -> Result<SpaceDescriptor> {
    whole(src, env, |p| p.space())
}

pub fn parse_operator(src: &str, env: &Env) -> Result<OrderBoundedOperator> {
    whole(src, env, |p| p.operator())
}

pub fn parse_vector(src: &str, env: &Env) -> Result<LatticeVector> {
    whole(src, env, |p| p.vector())
}

pub fn parse_index_set(src: &str) -> Result<IndexSet> {
    parse_index_set_in(src, &Env::default())
}

pub fn parse_index_set_in(src: &str, env: &Env) -> Result<IndexSet> {
    whole(src, env, |p| p.index_set())
}

/// Parses a sequence and checks that its leaves fit together.
pub fn parse_sequence(src: &str, env: &Env) -> Result<OperatorSequence> {
    let s = whole(src, env, |p| p.sequence())?;
    s.shape()?;
    Ok(s)
}

/// Splits `head(a, b(c, d), e)` into `head` and its top-level arguments.
/// Returns `None` when the text is not a call.
pub fn split_call(src: &str) -> Option<(String, Vec<String>)> {
    let src = src.trim();
    let open = src.find('(')?;
    if !src.ends_with(')') {
        return None;
    }
    let head = src[..open].trim();
    if head.is_empty() || !head.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '-') {
        return None;
    }
    let inner = &src[open + 1..src.len() - 1];
    let mut args = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for c in inner.chars() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            _ => {}
        }
        if depth < 0 {
            return None;
        }
        if c == ',' && depth == 0 {
            args.push(cur.trim().to_string());
            cur.clear();
        } else {
            cur.push(c);
        }
    }
    if depth != 0 {
        return None;
    }
    if !cur.trim().is_empty() || !args.is_empty() {
        args.push(cur.trim().to_string());
    }
    Some((head.to_string(), args))
}
