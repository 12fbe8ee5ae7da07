//! A small expression language for algebra elements and series.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' INT)*
//! atom   := INT ('/' INT)? | IDENT | '(' expr ')'
//! ```
//!
//! Identifiers are `e1`, `f1`, `h1`, … (Lie generators), `Delta1`, … (the
//! Casimirs) and `b1`, `b2`, … (series variables). A bare `e`, `f`, `h` or
//! `Delta` means factor 1. Products need an explicit `*`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::{self, Rational};
use crate::error::{Error, Result};
use crate::iwasawa::NcSeries;
use crate::pbw::{casimir, Element, Generator, Letter};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Num(Rational),
    Gen(Generator),
    /// Series variable `b_{i+1}`.
    Var(u8),
    /// `Delta_{i+1}`.
    Casimir(usize),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

impl Expr {
    /// Number of tensor factors the expression mentions.
    pub fn rank(&self) -> usize {
        match self {
            Expr::Num(_) | Expr::Var(_) => 0,
            Expr::Gen(g) => g.factor + 1,
            Expr::Casimir(i) => i + 1,
            Expr::Neg(a) | Expr::Pow(a, _) => a.rank(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => a.rank().max(b.rank()),
        }
    }

    /// Number of series variables the expression mentions.
    pub fn nvars(&self) -> usize {
        match self {
            Expr::Var(i) => *i as usize + 1,
            Expr::Num(_) | Expr::Gen(_) | Expr::Casimir(_) => 0,
            Expr::Neg(a) | Expr::Pow(a, _) => a.nvars(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => a.nvars().max(b.nvars()),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) => 2,
            Expr::Neg(_) => 3,
            Expr::Pow(..) => 4,
            Expr::Num(x) if !x.is_integer() => 4,
            _ => 5,
        }
    }

    fn write_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.precedence() < min {
            write!(f, "(")?;
            self.write_at(f, 0)?;
            return write!(f, ")");
        }
        match self {
            Expr::Num(x) => write!(f, "{}", arith::fmt_rational_short(x)),
            Expr::Gen(g) => write!(f, "{g}"),
            Expr::Var(i) => write!(f, "b{}", i + 1),
            Expr::Casimir(i) => write!(f, "Delta{}", i + 1),
            Expr::Neg(a) => {
                write!(f, "-")?;
                a.write_at(f, 3)
            }
            Expr::Add(a, b) | Expr::Sub(a, b) => {
                a.write_at(f, 1)?;
                write!(f, " {} ", if matches!(self, Expr::Add(..)) { '+' } else { '-' })?;
                b.write_at(f, 2)
            }
            Expr::Mul(a, b) => {
                a.write_at(f, 2)?;
                write!(f, "*")?;
                b.write_at(f, 3)
            }
            Expr::Pow(a, n) => {
                a.write_at(f, 5)?;
                write!(f, "^{n}")
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, 0)
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
    End,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut line, mut column) = (1, 1);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, column);
        if c == '\n' {
            line += 1;
            column = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            column += 1;
            i += 1;
            continue;
        }
        let start = i;
        let tok = if c.is_ascii_digit() {
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            Tok::Int(digits.parse().expect("ascii digits"))
        } else if c.is_ascii_alphabetic() {
            while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                i += 1;
            }
            Tok::Ident(chars[start..i].iter().collect())
        } else if "+-*/^()".contains(c) {
            i += 1;
            Tok::Sym(c)
        } else {
            return Err(Error::Parse {
                message: format!("unexpected character `{c}`"),
                line,
                column,
            });
        };
        column += i - start;
        out.push(Token {
            tok,
            line: l0,
            column: c0,
        });
    }
    out.push(Token {
        tok: Tok::End,
        line,
        column,
    });
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error_at(t: &Token, message: impl Into<String>) -> Error {
        Error::Parse {
            message: message.into(),
            line: t.line,
            column: t.column,
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek().tok == Tok::Sym(c) {
            self.next();
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = Expr::Add(Box::new(acc), Box::new(self.term()?));
            } else if self.eat('-') {
                acc = Expr::Sub(Box::new(acc), Box::new(self.term()?));
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut acc = self.unary()?;
        while self.eat('*') {
            acc = Expr::Mul(Box::new(acc), Box::new(self.unary()?));
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let mut base = self.atom()?;
        while self.eat('^') {
            let negative = self.eat('-');
            let t = self.next();
            let Tok::Int(n) = &t.tok else {
                return Err(Self::error_at(&t, "exponent must be an integer literal"));
            };
            if negative {
                let n = arith::to_i64(n).unwrap_or(i64::MAX);
                return Err(Error::NegativeExponent(-n));
            }
            let n: u32 = n
                .try_into()
                .map_err(|_| Self::error_at(&t, "exponent too large"))?;
            base = Expr::Pow(Box::new(base), n);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        let t = self.next();
        match &t.tok {
            Tok::Int(n) => {
                if self.eat('/') {
                    let d = self.next();
                    let Tok::Int(den) = &d.tok else {
                        return Err(Self::error_at(&d, "expected a denominator after `/`"));
                    };
                    if den.is_zero() {
                        return Err(Self::error_at(&d, "zero denominator"));
                    }
                    return Ok(Expr::Num(Rational::new(n.clone(), den.clone())));
                }
                Ok(Expr::Num(Rational::from_integer(n.clone())))
            }
            Tok::Ident(name) => identifier(name).map_err(|m| Self::error_at(&t, m)),
            Tok::Sym('(') => {
                let inner = self.expr()?;
                let close = self.next();
                if close.tok != Tok::Sym(')') {
                    return Err(Self::error_at(&close, "expected `)`"));
                }
                Ok(inner)
            }
            Tok::End => Err(Self::error_at(&t, "unexpected end of input")),
            Tok::Sym(c) => Err(Self::error_at(&t, format!("unexpected `{c}`"))),
        }
    }
}

fn identifier(name: &str) -> std::result::Result<Expr, String> {
    let split = name
        .find(|c: char| c.is_ascii_digit())
        .unwrap_or(name.len());
    let (head, digits) = name.split_at(split);
    let index: usize = if digits.is_empty() {
        1
    } else {
        digits
            .parse()
            .map_err(|_| format!("bad index in `{name}`"))?
    };
    if index == 0 {
        return Err(format!("indices start at 1 in `{name}`"));
    }
    let i = index - 1;
    let gen = |l| Ok(Expr::Gen(Generator::new(i, l)));
    match head {
        "e" => gen(Letter::E),
        "f" => gen(Letter::F),
        "h" => gen(Letter::H),
        "Delta" => Ok(Expr::Casimir(i)),
        "b" if !digits.is_empty() => u8::try_from(i)
            .map(Expr::Var)
            .map_err(|_| format!("variable index too large in `{name}`")),
        _ => Err(format!("unknown identifier `{name}`")),
    }
}

/// Parses an expression; errors carry 1-based line and column.
pub fn parse(text: &str) -> Result<Expr> {
    let mut p = Parser {
        tokens: lex(text)?,
        pos: 0,
    };
    let e = p.expr()?;
    let t = p.peek().clone();
    match t.tok {
        Tok::End => Ok(e),
        Tok::Sym('/') => Err(Parser::error_at(&t, "`/` is only allowed in rational literals")),
        Tok::Sym(')') => Err(Parser::error_at(&t, "unmatched `)`")),
        _ => Err(Parser::error_at(&t, "expected an operator (products need `*`)")),
    }
}

/// Value of the expression in `U(sl₂)^{⊗rank}`, in PBW normal form.
pub fn normal_form(expr: &Expr, rank: usize) -> Result<Element> {
    Ok(match expr {
        Expr::Num(x) => Element::scalar(rank, x.clone()),
        Expr::Gen(g) => Element::generator(rank, *g)?,
        Expr::Casimir(i) => casimir(*i, rank)?,
        Expr::Var(i) => {
            return Err(Error::InvalidInput(format!(
                "series variable b{} in an algebra expression",
                i + 1
            )))
        }
        Expr::Neg(a) => -&normal_form(a, rank)?,
        Expr::Add(a, b) => &normal_form(a, rank)? + &normal_form(b, rank)?,
        Expr::Sub(a, b) => &normal_form(a, rank)? - &normal_form(b, rank)?,
        Expr::Mul(a, b) => normal_form(a, rank)?.multiply(&normal_form(b, rank)?),
        Expr::Pow(a, n) => normal_form(a, rank)?.pow(*n),
    })
}

/// Parses and normal-forms `text`, taking the rank from the text if `rank`
/// is `None`.
pub fn parse_element(text: &str, rank: Option<usize>) -> Result<Element> {
    let e = parse(text)?;
    let r = rank.unwrap_or_else(|| e.rank().max(1));
    normal_form(&e, r)
}

/// Value of the expression as a series shaped like `template`.
pub fn to_series(expr: &Expr, template: &NcSeries) -> Result<NcSeries> {
    Ok(match expr {
        Expr::Num(x) => template.constant(x),
        Expr::Var(i) => {
            if *i as usize >= template.nvars() {
                return Err(Error::InvalidInput(format!(
                    "variable b{} out of range 1..={}",
                    i + 1,
                    template.nvars()
                )));
            }
            template.variable(*i as usize)?
        }
        Expr::Gen(_) | Expr::Casimir(_) => {
            return Err(Error::InvalidInput(
                "Lie generators cannot appear in a series expression".into(),
            ))
        }
        Expr::Neg(a) => to_series(a, template)?.scale(&-Rational::one()),
        Expr::Add(a, b) => to_series(a, template)?.add(&to_series(b, template)?)?,
        Expr::Sub(a, b) => to_series(a, template)?.sub(&to_series(b, template)?)?,
        Expr::Mul(a, b) => to_series(a, template)?.multiply(&to_series(b, template)?)?,
        Expr::Pow(a, n) => to_series(a, template)?.pow(*n)?,
    })
}
