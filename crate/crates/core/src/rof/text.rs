//! S-expression syntax for formulas:
//!
//! ```text
//! node := "(leaf (" scalar scalar ") x" INT ")"
//!       | "(" ("add" | "mul") " (" scalar scalar ") " node node ")"
//! ```
//!
//! Whitespace between tokens is free. The printed form uses single spaces.

use std::fmt;

use super::{GateOp, Rof};
use crate::error::{Error, Result};
use crate::scalars::{scan_scalar, Field, FieldElem};

impl fmt::Display for Rof {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rof::Leaf { var, alpha, beta } => write!(f, "(leaf ({alpha} {beta}) x{var})"),
            Rof::Gate {
                op,
                alpha,
                beta,
                left,
                right,
            } => {
                let name = match op {
                    GateOp::Plus => "add",
                    GateOp::Times => "mul",
                };
                write!(f, "({name} ({alpha} {beta}) {left} {right})")
            }
        }
    }
}

/// Parses a formula; scalars are read into `field`.
pub fn parse_rof(text: &str, field: Field) -> Result<Rof> {
    let mut parser = Parser {
        text,
        pos: 0,
        field,
    };
    let rof = parser.node()?;
    parser.skip_ws();
    if parser.pos != text.len() {
        return Err(Error::parse(parser.pos, "unexpected trailing input"));
    }
    Ok(rof)
}

struct Parser<'a> {
    text: &'a str,
    pos: usize,
    field: Field,
}

impl Parser<'_> {
    fn rest(&self) -> &str {
        &self.text[self.pos..]
    }

    fn skip_ws(&mut self) {
        let rest = self.rest();
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn expect(&mut self, c: char) -> Result<()> {
        self.skip_ws();
        if self.rest().starts_with(c) {
            self.pos += c.len_utf8();
            Ok(())
        } else {
            Err(Error::parse(self.pos, format!("expected '{c}'")))
        }
    }

    fn word(&mut self) -> Result<&str> {
        self.skip_ws();
        let start = self.pos;
        let len = self
            .rest()
            .bytes()
            .take_while(|b| b.is_ascii_alphabetic())
            .count();
        if len == 0 {
            return Err(Error::parse(start, "expected a keyword"));
        }
        self.pos += len;
        Ok(&self.text[start..start + len])
    }

    fn scalar(&mut self) -> Result<FieldElem> {
        self.skip_ws();
        let start = self.pos;
        let (lit, used) =
            scan_scalar(self.rest()).ok_or_else(|| Error::parse(start, "expected a scalar"))?;
        self.pos += used;
        self.field.elem_from_literal(&lit).map_err(|e| match e {
            Error::Parse { message, .. } => Error::parse(start, message),
            other => other,
        })
    }

    fn label(&mut self) -> Result<(FieldElem, FieldElem)> {
        self.expect('(')?;
        let a = self.scalar()?;
        let b = self.scalar()?;
        self.expect(')')?;
        Ok((a, b))
    }

    fn variable(&mut self) -> Result<usize> {
        self.skip_ws();
        let start = self.pos;
        if !self.rest().starts_with('x') {
            return Err(Error::parse(start, "expected a variable x<index>"));
        }
        let digits = self.rest()[1..]
            .bytes()
            .take_while(|b| b.is_ascii_digit())
            .count();
        if digits == 0 {
            return Err(Error::parse(start + 1, "expected a variable index"));
        }
        let idx: usize = self.rest()[1..1 + digits]
            .parse()
            .map_err(|_| Error::parse(start + 1, "variable index too large"))?;
        if idx == 0 {
            return Err(Error::parse(start + 1, "variable indices start at 1"));
        }
        self.pos += 1 + digits;
        Ok(idx)
    }

    fn node(&mut self) -> Result<Rof> {
        self.expect('(')?;
        let kw_pos = {
            self.skip_ws();
            self.pos
        };
        let kw = self.word()?.to_string();
        let rof = match kw.as_str() {
            "leaf" => {
                let (alpha, beta) = self.label()?;
                let var = self.variable()?;
                Rof::leaf(var, alpha, beta)
            }
            "add" | "mul" => {
                let op = if kw == "add" {
                    GateOp::Plus
                } else {
                    GateOp::Times
                };
                let (alpha, beta) = self.label()?;
                let left = self.node()?;
                let right = self.node()?;
                Rof::gate(op, alpha, beta, left, right)
            }
            other => return Err(Error::parse(kw_pos, format!("unknown node kind '{other}'"))),
        };
        self.expect(')')?;
        Ok(rof)
    }
}
