//! Recursive-descent parser for the quantity syntax.
//!
//! ```text
//! quantity := { ("sup"|"inf") var ":" } body
//! body     := gterm { "+" gterm }
//! gterm    := "[" bool "]" "*" extlin
//! bool     := or [ "->" bool ]
//! or       := and { "||" and }
//! and      := not { "&&" not }
//! not      := "!" not | "true" | "false" | atom | "(" bool ")"
//! atom     := extlin ("<"|"<="|">"|">=") extlin
//! ```

use std::collections::HashSet;

use num_bigint::BigInt;
use num_traits::Zero;

use super::{Atom, BoolExpr, ExtLinExpr, GuardedTerm, LinExpr, Quantifier, Quantity, Rel, Var};
use crate::error::{Error, Result};
use crate::numerics::Rational;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Num(BigInt),
    LBrack,
    RBrack,
    LParen,
    RParen,
    Star,
    Slash,
    Plus,
    Minus,
    Lt,
    Le,
    Gt,
    Ge,
    Bang,
    AndAnd,
    OrOr,
    Arrow,
    Colon,
    Eof,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let (start_line, start_col) = (line, col);
        let mut push = |tok, width: usize, i: &mut usize, col: &mut usize| {
            out.push(Token { tok, line: start_line, column: start_col });
            *i += width;
            *col += width;
        };
        let next = chars.get(i + 1).copied();
        match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => {
                i += 1;
                col += 1;
            }
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
            }
            '[' => push(Tok::LBrack, 1, &mut i, &mut col),
            ']' => push(Tok::RBrack, 1, &mut i, &mut col),
            '(' => push(Tok::LParen, 1, &mut i, &mut col),
            ')' => push(Tok::RParen, 1, &mut i, &mut col),
            '*' => push(Tok::Star, 1, &mut i, &mut col),
            '/' => push(Tok::Slash, 1, &mut i, &mut col),
            '+' => push(Tok::Plus, 1, &mut i, &mut col),
            ':' => push(Tok::Colon, 1, &mut i, &mut col),
            '-' if next == Some('>') => push(Tok::Arrow, 2, &mut i, &mut col),
            '-' => push(Tok::Minus, 1, &mut i, &mut col),
            '<' if next == Some('=') => push(Tok::Le, 2, &mut i, &mut col),
            '<' => push(Tok::Lt, 1, &mut i, &mut col),
            '>' if next == Some('=') => push(Tok::Ge, 2, &mut i, &mut col),
            '>' => push(Tok::Gt, 1, &mut i, &mut col),
            '!' => push(Tok::Bang, 1, &mut i, &mut col),
            '&' if next == Some('&') => push(Tok::AndAnd, 2, &mut i, &mut col),
            '|' if next == Some('|') => push(Tok::OrOr, 2, &mut i, &mut col),
            c if c.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let digits: String = chars[start..i].iter().collect();
                col += i - start;
                let n: BigInt = digits.parse().expect("digit run parses");
                out.push(Token { tok: Tok::Num(n), line: start_line, column: start_col });
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                col += i - start;
                let ident: String = chars[start..i].iter().collect();
                out.push(Token { tok: Tok::Ident(ident), line: start_line, column: start_col });
            }
            other => {
                return Err(Error::Parse {
                    line,
                    column: col,
                    message: format!("unexpected character {other:?}"),
                })
            }
        }
    }
    out.push(Token { tok: Tok::Eof, line, column: col });
    Ok(out)
}

const KEYWORDS: [&str; 5] = ["sup", "inf", "true", "false", "oo"];

/// Intermediate arithmetic value: infinities only admit negation and parentheses.
enum Arith {
    Lin(LinExpr),
    PosInf,
    NegInf,
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.pos + k).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        let t = &self.toks[self.pos];
        Err(Error::Parse { line: t.line, column: t.column, message: message.into() })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.error(format!("expected {what}, found {}", describe(self.peek())))
        }
    }

    fn quantity(&mut self) -> Result<Quantity> {
        let mut prefix = Vec::new();
        let mut seen = HashSet::new();
        loop {
            let q = match self.peek() {
                Tok::Ident(k) if k == "sup" => Quantifier::Sup,
                Tok::Ident(k) if k == "inf" => Quantifier::Inf,
                _ => break,
            };
            self.bump();
            let x = self.var()?;
            if !seen.insert(x.clone()) {
                return Err(Error::DuplicateBinder(x));
            }
            self.expect(Tok::Colon, "`:` after bound variable")?;
            prefix.push((q, x));
        }
        let mut body = vec![self.gterm()?];
        while *self.peek() == Tok::Plus {
            self.bump();
            body.push(self.gterm()?);
        }
        if *self.peek() != Tok::Eof {
            return self.error(format!("unexpected {}", describe(self.peek())));
        }
        Ok(Quantity::new(prefix, body))
    }

    fn var(&mut self) -> Result<Var> {
        match self.peek().clone() {
            Tok::Ident(name) if !KEYWORDS.contains(&name.as_str()) => {
                self.bump();
                Ok(Var::new(&name))
            }
            other => self.error(format!("expected variable, found {}", describe(&other))),
        }
    }

    fn gterm(&mut self) -> Result<GuardedTerm> {
        self.expect(Tok::LBrack, "`[`")?;
        let guard = self.bool_expr()?;
        self.expect(Tok::RBrack, "`]`")?;
        self.expect(Tok::Star, "`*`")?;
        let value = self.extlin()?;
        Ok(GuardedTerm::new(guard, value))
    }

    fn bool_expr(&mut self) -> Result<BoolExpr> {
        let lhs = self.or_expr()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.bool_expr()?;
            return Ok(BoolExpr::or(BoolExpr::not(lhs), rhs));
        }
        Ok(lhs)
    }

    fn or_expr(&mut self) -> Result<BoolExpr> {
        let mut acc = self.and_expr()?;
        while *self.peek() == Tok::OrOr {
            self.bump();
            acc = BoolExpr::or(acc, self.and_expr()?);
        }
        Ok(acc)
    }

    fn and_expr(&mut self) -> Result<BoolExpr> {
        let mut acc = self.not_expr()?;
        while *self.peek() == Tok::AndAnd {
            self.bump();
            acc = BoolExpr::and(acc, self.not_expr()?);
        }
        Ok(acc)
    }

    fn not_expr(&mut self) -> Result<BoolExpr> {
        match self.peek() {
            Tok::Bang => {
                self.bump();
                Ok(BoolExpr::not(self.not_expr()?))
            }
            Tok::Ident(k) if k == "true" => {
                self.bump();
                Ok(BoolExpr::True)
            }
            Tok::Ident(k) if k == "false" => {
                self.bump();
                Ok(BoolExpr::False)
            }
            Tok::LParen => {
                // `(` opens either a parenthesised guard or the left operand of an atom.
                let save = self.pos;
                match self.atom() {
                    Ok(a) => Ok(BoolExpr::Atom(a)),
                    Err(Error::NonLinear { line, column }) => Err(Error::NonLinear { line, column }),
                    Err(_) => {
                        self.pos = save;
                        self.bump();
                        let inner = self.bool_expr()?;
                        self.expect(Tok::RParen, "`)`")?;
                        Ok(inner)
                    }
                }
            }
            _ => Ok(BoolExpr::Atom(self.atom()?)),
        }
    }

    fn atom(&mut self) -> Result<Atom> {
        let lhs = self.extlin()?;
        let rel = match self.peek() {
            Tok::Lt => Rel::Lt,
            Tok::Le => Rel::Le,
            Tok::Gt => Rel::Gt,
            Tok::Ge => Rel::Ge,
            other => return self.error(format!("expected comparison, found {}", describe(other))),
        };
        self.bump();
        let rhs = self.extlin()?;
        Ok(Atom { lhs, rel, rhs })
    }

    fn extlin(&mut self) -> Result<ExtLinExpr> {
        Ok(match self.sum()? {
            Arith::Lin(e) => ExtLinExpr::Fin(e),
            Arith::PosInf => ExtLinExpr::PosInf,
            Arith::NegInf => ExtLinExpr::NegInf,
        })
    }

    fn sum(&mut self) -> Result<Arith> {
        let mut acc = self.product()?;
        loop {
            let negate = match self.peek() {
                // `+ [` starts the next guarded term
                Tok::Plus if *self.peek_at(1) == Tok::LBrack => break,
                Tok::Plus => false,
                Tok::Minus => true,
                _ => break,
            };
            self.bump();
            let rhs = self.product()?;
            acc = match (acc, rhs) {
                (Arith::Lin(a), Arith::Lin(b)) => Arith::Lin(if negate { a.sub(&b) } else { a.add(&b) }),
                _ => return self.error("arithmetic on oo is not allowed"),
            };
        }
        Ok(acc)
    }

    fn product(&mut self) -> Result<Arith> {
        let start = self.pos;
        let mut acc = self.unary()?;
        loop {
            let divide = match self.peek() {
                Tok::Star => false,
                Tok::Slash => true,
                _ => break,
            };
            self.bump();
            let rhs = self.unary()?;
            let (Arith::Lin(a), Arith::Lin(b)) = (acc, rhs) else {
                return self.error("arithmetic on oo is not allowed");
            };
            acc = Arith::Lin(if divide {
                if !b.is_constant() || b.constant_part().is_zero() {
                    return self.error("division by a non-constant or zero");
                }
                a.scale(&(Rational::from_integer(1.into()) / b.constant_part()))
            } else if a.is_constant() {
                b.scale(a.constant_part())
            } else if b.is_constant() {
                a.scale(b.constant_part())
            } else {
                let t = &self.toks[start];
                return Err(Error::NonLinear { line: t.line, column: t.column });
            });
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Arith> {
        match self.peek().clone() {
            Tok::Minus => {
                self.bump();
                Ok(match self.unary()? {
                    Arith::Lin(e) => Arith::Lin(e.neg()),
                    Arith::PosInf => Arith::NegInf,
                    Arith::NegInf => Arith::PosInf,
                })
            }
            Tok::Num(n) => {
                self.bump();
                Ok(Arith::Lin(LinExpr::constant(Rational::from_integer(n))))
            }
            Tok::Ident(k) if k == "oo" => {
                self.bump();
                Ok(Arith::PosInf)
            }
            Tok::Ident(_) => Ok(Arith::Lin(LinExpr::var(&self.var()?))),
            Tok::LParen => {
                self.bump();
                let inner = self.sum()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            other => self.error(format!("expected arithmetic expression, found {}", describe(&other))),
        }
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("`{s}`"),
        Tok::Num(n) => format!("`{n}`"),
        Tok::Eof => "end of input".to_string(),
        other => format!("{other:?}"),
    }
}

/// Parses the textual syntax into a [`Quantity`]. Linear expressions are
/// normalized on the fly; products of two variables are rejected.
pub fn parse_quantity(text: &str) -> Result<Quantity> {
    let toks = lex(text)?;
    Parser { toks, pos: 0 }.quantity()
}
