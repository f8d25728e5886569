//! PolyText: `terms joined by + / -`, where a term is a scalar, a product of
//! variables `x<k>`, or a scalar times such a product (`3*x1*x2`, `1/2*x3`,
//! `-x1`). A variable may occur only once per term.

use std::collections::BTreeSet;

use readonce::scalars::scan_scalar;
use readonce::{Error, Field, FieldElem, MultilinearPoly, Result};

fn parse_error(position: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        position,
        message: message.into(),
    }
}

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
}

impl Cursor<'_> {
    fn rest(&self) -> &str {
        &self.text[self.pos..]
    }

    fn skip_ws(&mut self) {
        let rest = self.rest();
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.rest().starts_with(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos == self.text.len()
    }

    fn variable(&mut self) -> Result<Option<usize>> {
        self.skip_ws();
        let start = self.pos;
        if !self.rest().starts_with('x') {
            return Ok(None);
        }
        let digits = self.rest()[1..]
            .bytes()
            .take_while(u8::is_ascii_digit)
            .count();
        if digits == 0 {
            return Err(parse_error(
                start + 1,
                "expected a variable index after 'x'",
            ));
        }
        let idx: usize = self.rest()[1..1 + digits]
            .parse()
            .map_err(|_| parse_error(start + 1, "variable index too large"))?;
        if idx == 0 {
            return Err(parse_error(start + 1, "variable indices start at 1"));
        }
        self.pos += 1 + digits;
        Ok(Some(idx))
    }

    fn scalar(&mut self, field: Field) -> Result<Option<FieldElem>> {
        self.skip_ws();
        let start = self.pos;
        let Some((lit, used)) = scan_scalar(self.rest()) else {
            return Ok(None);
        };
        self.pos += used;
        field
            .elem_from_literal(&lit)
            .map(Some)
            .map_err(|e| match e {
                Error::Parse { message, .. } => parse_error(start, message),
                Error::DivisionByZero => parse_error(start, "zero denominator"),
                other => other,
            })
    }

    /// One term without its sign: `(coefficient, sorted variables)`.
    fn term(&mut self, field: Field) -> Result<(FieldElem, Vec<usize>)> {
        self.skip_ws();
        let start = self.pos;
        let mut coeff = field.one();
        let mut vars = BTreeSet::new();
        let mut need_var = false;
        if let Some(c) = self.scalar(field)? {
            coeff = c;
            if !self.eat('*') {
                return Ok((coeff, Vec::new()));
            }
            need_var = true;
        }
        loop {
            let at = {
                self.skip_ws();
                self.pos
            };
            match self.variable()? {
                Some(v) => {
                    if !vars.insert(v) {
                        return Err(parse_error(at, format!("x{v} repeated within a term")));
                    }
                }
                None if need_var || !vars.is_empty() => {
                    return Err(parse_error(at, "expected a variable"));
                }
                None => return Err(parse_error(start, "expected a term")),
            }
            if !self.eat('*') {
                break;
            }
            need_var = true;
        }
        Ok((coeff, vars.into_iter().collect()))
    }
}

/// Parses PolyText over `field`. The variable count is `n` when given
/// (which must cover every index used), otherwise the largest index present.
pub fn parse_poly(text: &str, field: Field, n: Option<usize>) -> Result<MultilinearPoly> {
    let mut cur = Cursor { text, pos: 0 };
    let mut terms: Vec<(u32, FieldElem)> = Vec::new();
    let mut max_var = 0;
    let mut negative = cur.eat('-');
    loop {
        let (c, vars) = cur.term(field)?;
        let c = if negative { -c } else { c };
        if let Some(&top) = vars.last() {
            max_var = max_var.max(top);
        }
        if max_var > readonce::mpoly::MAX_VARS {
            return Err(parse_error(
                cur.pos,
                format!("x{max_var} exceeds the variable limit"),
            ));
        }
        let mask = vars.iter().fold(0u32, |m, &v| m | 1 << (v - 1));
        terms.push((mask, c));
        if cur.at_end() {
            break;
        }
        negative = if cur.eat('+') {
            false
        } else if cur.eat('-') {
            true
        } else {
            return Err(parse_error(cur.pos, "expected '+', '-' or end of input"));
        };
    }
    let n = match n {
        Some(n) if n < max_var => {
            return Err(Error::IndexOutOfRange { index: max_var, n });
        }
        Some(n) => n,
        None => max_var,
    };
    let mut poly = MultilinearPoly::zero(n, field)?;
    for (mask, c) in terms {
        poly = poly.add(&MultilinearPoly::monomial(n, mask, c)?)?;
    }
    Ok(poly)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(text: &str) -> Result<MultilinearPoly> {
        parse_poly(text, Field::Rationals, None)
    }

    #[test]
    fn canonical_round_trip() {
        for text in [
            "5 + 5*x1 + x2 + x1*x2",
            "-1 + x1 - 2*x1*x2",
            "0",
            "1/2*x3",
            "-x1*x2*x3",
        ] {
            assert_eq!(q(text).unwrap().to_string(), text);
        }
    }

    #[test]
    fn loose_spacing_and_like_terms() {
        let p = q("x2*x1+3 -x1*x2 +  2*x3").unwrap();
        assert_eq!(p.to_string(), "3 + 2*x3");
        assert_eq!(p.n(), 3);
    }

    #[test]
    fn prime_field_reduces() {
        let f7 = Field::prime(7).unwrap();
        let p = parse_poly("8*x1 - 1", f7, Some(2)).unwrap();
        assert_eq!(p.to_string(), "6 + x1");
        assert_eq!(p.n(), 2);
    }

    #[test]
    fn errors_carry_positions() {
        let cases = [
            ("x1*x1", 3),
            ("x1 +", 4),
            ("x1 x2", 3),
            ("2*", 2),
            ("x0", 1),
            ("1/0*x1", 0),
            ("", 0),
        ];
        for (text, at) in cases {
            match q(text) {
                Err(Error::Parse { position, .. }) => assert_eq!(position, at, "{text}"),
                other => panic!("{text}: {other:?}"),
            }
        }
    }

    #[test]
    fn explicit_arity_must_cover_indices() {
        assert!(parse_poly("x5", Field::Rationals, Some(4)).is_err());
    }
}
