//! Text form of Chow classes: polynomials in t1, t2, t3 such as `(t1+t2+t3)^3`
//! or `1 + 2t1 - t2*t3`. Juxtaposition multiplies.

use thiserror::Error;

use crate::chow::{ChowClass, ChowError};
use crate::text::{Cursor, ParseError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChowExprError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Arith(#[from] ChowError),
}

pub fn parse_chow(src: &str) -> Result<ChowClass, ChowExprError> {
    let mut c = Cursor::new(src);
    let value = expr(&mut c)?;
    if !c.at_end() {
        return Err(c.error(&["+", "-", "*", "^", "end of input"]).into());
    }
    Ok(value)
}

fn expr(c: &mut Cursor) -> Result<ChowClass, ChowExprError> {
    let mut acc = if c.eat("-") {
        term(c)?.neg()?
    } else {
        term(c)?
    };
    loop {
        if c.eat("+") {
            acc = acc.add(&term(c)?)?;
        } else if c.eat("-") {
            acc = acc.sub(&term(c)?)?;
        } else {
            return Ok(acc);
        }
    }
}

fn starts_atom(c: &mut Cursor) -> bool {
    matches!(c.peek_char(), Some(ch) if ch.is_ascii_digit() || ch == 't' || ch == '(')
}

fn term(c: &mut Cursor) -> Result<ChowClass, ChowExprError> {
    let mut acc = power(c)?;
    loop {
        // juxtaposition multiplies too
        if c.eat("*") || starts_atom(c) {
            acc = acc.mul(&power(c)?)?;
        } else {
            return Ok(acc);
        }
    }
}

fn power(c: &mut Cursor) -> Result<ChowClass, ChowExprError> {
    let mut base = atom(c)?;
    while c.eat("^") {
        let at = c.pos();
        let n = c.int()?;
        let n = u32::try_from(n).map_err(|_| c.error_msg(at, "exponent must be a nonnegative integer"))?;
        base = base.pow(n)?;
    }
    Ok(base)
}

fn atom(c: &mut Cursor) -> Result<ChowClass, ChowExprError> {
    match c.peek_char() {
        Some('(') => {
            c.advance(1);
            let inner = expr(c)?;
            c.expect(")")?;
            Ok(inner)
        }
        Some('t') => {
            c.advance(1);
            for (i, lit) in ["1", "2", "3"].iter().enumerate() {
                if c.rest().starts_with(lit) {
                    c.advance(1);
                    return Ok(ChowClass::t(i + 1));
                }
            }
            Err(c.error(&["1", "2", "3"]).into())
        }
        Some(ch) if ch.is_ascii_digit() => Ok(ChowClass::constant(c.int()?)),
        _ => Err(c.error(&["integer", "t1", "t2", "t3", "("]).into()),
    }
}
