//! Recursive-descent parser for the formula language.
//!
//! ```text
//! formula := cf
//! cf      := imp ("~>" imp)?
//! imp     := or (("->" | "<->") or)?
//! or      := and ("|" and)*
//! and     := unary ("&" unary)*
//! unary   := "!" unary | prefix
//! prefix  := "[" bindings? "]" unary | "<" bindings? ">" unary | atom
//! bindings:= IDENT "<-" VALUE (";" IDENT "<-" VALUE)*
//! atom    := IDENT "=" VALUE | "true" | "false" | "(" cf ")"
//! ```
//!
//! `~>`, `->` and `<->` do not associate; chaining them needs parentheses.
//! `<bindings>f` abbreviates `!([bindings]!f)`.

use alloc::borrow::ToOwned;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use super::ast::Formula;
use crate::signature::Value;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax { expected: &'static str, found: String },
    UnknownOperator(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    /// Byte offset into the input.
    pub position: usize,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ParseErrorKind::Syntax { expected, found } => {
                write!(f, "syntax error at position {}: expected {expected}, found {found}", self.position)
            }
            ParseErrorKind::UnknownOperator(op) => {
                write!(f, "unknown operator `{op}` at position {}", self.position)
            }
        }
    }
}

impl core::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Num(Value),
    True,
    False,
    Bang,
    Amp,
    Pipe,
    Arrow,
    DoubleArrow,
    Counterfactual,
    Assign,
    Eq,
    LBracket,
    RBracket,
    LAngle,
    RAngle,
    Semi,
    LParen,
    RParen,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => alloc::format!("identifier `{s}`"),
            Tok::Num(v) => alloc::format!("value `{v}`"),
            Tok::End => "end of input".to_owned(),
            other => alloc::format!("`{}`", other.spelling()),
        }
    }

    fn spelling(&self) -> &'static str {
        match self {
            Tok::True => "true",
            Tok::False => "false",
            Tok::Bang => "!",
            Tok::Amp => "&",
            Tok::Pipe => "|",
            Tok::Arrow => "->",
            Tok::DoubleArrow => "<->",
            Tok::Counterfactual => "~>",
            Tok::Assign => "<-",
            Tok::Eq => "=",
            Tok::LBracket => "[",
            Tok::RBracket => "]",
            Tok::LAngle => "<",
            Tok::RAngle => ">",
            Tok::Semi => ";",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::Ident(_) | Tok::Num(_) | Tok::End => "",
        }
    }
}

fn unknown(position: usize, op: &str) -> ParseError {
    ParseError { position, kind: ParseErrorKind::UnknownOperator(op.to_owned()) }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    let peek = |j: usize| bytes.get(j).copied();
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'!' => Tok::Bang,
            b'&' => Tok::Amp,
            b'|' => Tok::Pipe,
            b'[' => Tok::LBracket,
            b']' => Tok::RBracket,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b';' => Tok::Semi,
            b'>' => Tok::RAngle,
            b'=' => {
                if peek(i + 1) == Some(b'>') {
                    return Err(unknown(i, "=>"));
                }
                Tok::Eq
            }
            b'~' => {
                if peek(i + 1) != Some(b'>') {
                    return Err(unknown(i, "~"));
                }
                i += 1;
                Tok::Counterfactual
            }
            b'<' => {
                if peek(i + 1) == Some(b'-') && peek(i + 2) == Some(b'>') {
                    i += 2;
                    Tok::DoubleArrow
                } else if peek(i + 1) == Some(b'-') {
                    i += 1;
                    Tok::Assign
                } else if peek(i + 1) == Some(b'=') {
                    return Err(unknown(i, "<="));
                } else {
                    Tok::LAngle
                }
            }
            b'-' => {
                if peek(i + 1) == Some(b'>') {
                    i += 1;
                    Tok::Arrow
                } else if peek(i + 1).is_some_and(|d| d.is_ascii_digit()) {
                    i += 1;
                    let digits = i;
                    while peek(i).is_some_and(|d| d.is_ascii_digit()) {
                        i += 1;
                    }
                    let n = parse_value(&text[digits..i], start)?;
                    out.push((start, Tok::Num(-n)));
                    continue;
                } else {
                    return Err(unknown(i, "-"));
                }
            }
            b'0'..=b'9' => {
                while peek(i).is_some_and(|d| d.is_ascii_digit()) {
                    i += 1;
                }
                out.push((start, Tok::Num(parse_value(&text[start..i], start)?)));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while peek(i).is_some_and(|d| d.is_ascii_alphanumeric() || d == b'_') {
                    i += 1;
                }
                let word = &text[start..i];
                out.push((
                    start,
                    match word {
                        "true" => Tok::True,
                        "false" => Tok::False,
                        _ => Tok::Ident(word.to_owned()),
                    },
                ));
                continue;
            }
            _ => {
                let ch = text[i..].chars().next().expect("inside the input");
                let mut buf = [0u8; 4];
                return Err(unknown(i, ch.encode_utf8(&mut buf)));
            }
        };
        out.push((start, tok));
        i += 1;
    }
    out.push((text.len(), Tok::End));
    Ok(out)
}

fn parse_value(digits: &str, position: usize) -> Result<Value, ParseError> {
    digits.parse().map_err(|_| ParseError {
        position,
        kind: ParseErrorKind::Syntax { expected: "a value that fits in 64 bits", found: digits.to_owned() },
    })
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].1.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn error(&self, expected: &'static str) -> ParseError {
        let (position, tok) = &self.toks[self.at];
        ParseError { position: *position, kind: ParseErrorKind::Syntax { expected, found: tok.describe() } }
    }

    fn expect(&mut self, tok: Tok, expected: &'static str) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error(expected))
        }
    }

    fn cf(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.imp()?;
        if *self.peek() == Tok::Counterfactual {
            self.bump();
            let rhs = self.imp()?;
            if *self.peek() == Tok::Counterfactual {
                return Err(self.error("end of conditional (`~>` does not chain; add parentheses)"));
            }
            return Ok(Formula::cf(lhs, rhs));
        }
        Ok(lhs)
    }

    fn imp(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or()?;
        let make: fn(Formula, Formula) -> Formula = match self.peek() {
            Tok::Arrow => Formula::implies,
            Tok::DoubleArrow => Formula::iff,
            _ => return Ok(lhs),
        };
        self.bump();
        let rhs = self.or()?;
        if matches!(self.peek(), Tok::Arrow | Tok::DoubleArrow) {
            return Err(self.error("end of implication (`->`/`<->` do not chain; add parentheses)"));
        }
        Ok(make(lhs, rhs))
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.and()?;
        while *self.peek() == Tok::Pipe {
            self.bump();
            lhs = Formula::or(lhs, self.and()?);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            lhs = Formula::and(lhs, self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Tok::Bang => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::LBracket => {
                self.bump();
                let bindings = self.bindings(Tok::RBracket)?;
                self.expect(Tok::RBracket, "`]`")?;
                let body = self.unary()?;
                Ok(Formula::explicit_intervention(bindings, body))
            }
            Tok::LAngle => {
                self.bump();
                let bindings = self.bindings(Tok::RAngle)?;
                self.expect(Tok::RAngle, "`>`")?;
                let body = self.unary()?;
                Ok(Formula::diamond(bindings, body))
            }
            _ => self.primary(),
        }
    }

    fn bindings(&mut self, close: Tok) -> Result<Vec<(String, Value)>, ParseError> {
        let mut out = Vec::new();
        if *self.peek() == close {
            return Ok(out);
        }
        loop {
            let Tok::Ident(var) = self.peek().clone() else {
                return Err(self.error("a variable name in an intervention"));
            };
            self.bump();
            self.expect(Tok::Assign, "`<-`")?;
            let value = self.value()?;
            out.push((var, value));
            if *self.peek() != Tok::Semi {
                return Ok(out);
            }
            self.bump();
        }
    }

    fn value(&mut self) -> Result<Value, ParseError> {
        match self.peek() {
            Tok::Num(v) => {
                let v = *v;
                self.bump();
                Ok(v)
            }
            _ => Err(self.error("a value")),
        }
    }

    fn primary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::True => {
                self.bump();
                Ok(Formula::True)
            }
            Tok::False => {
                self.bump();
                Ok(Formula::False)
            }
            Tok::Ident(var) => {
                self.bump();
                self.expect(Tok::Eq, "`=`")?;
                let value = self.value()?;
                Ok(Formula::atom(var, value))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.cf()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            _ => Err(self.error("a formula")),
        }
    }
}

/// Parses one formula; trailing input is an error.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser { toks: lex(text)?, at: 0 };
    let f = p.cf()?;
    if *p.peek() != Tok::End {
        return Err(p.error("end of input"));
    }
    Ok(f)
}

impl core::str::FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

/// Parses a `;`- or `,`-separated binding list such as `X1<-1; X2<-0`.
pub fn parse_bindings(text: &str) -> Result<Vec<(String, Value)>, ParseError> {
    let normalized = text.replace(',', ";");
    let mut p = Parser { toks: lex(&normalized)?, at: 0 };
    let out = p.bindings(Tok::End)?;
    if *p.peek() != Tok::End {
        return Err(p.error("end of input"));
    }
    Ok(out)
}

/// Parses an assignment list such as `U=0, V=1` (also accepts `;`).
pub fn parse_assignment(text: &str) -> Result<Vec<(String, Value)>, ParseError> {
    let normalized = text.replace(',', ";");
    let mut p = Parser { toks: lex(&normalized)?, at: 0 };
    let mut out = Vec::new();
    while *p.peek() != Tok::End {
        let Tok::Ident(var) = p.peek().clone() else {
            return Err(p.error("a variable name"));
        };
        p.bump();
        p.expect(Tok::Eq, "`=`")?;
        out.push((var, p.value()?));
        match p.peek() {
            Tok::Semi => {
                p.bump();
            }
            Tok::End => {}
            _ => return Err(p.error("`,` or end of input")),
        }
    }
    Ok(out)
}
