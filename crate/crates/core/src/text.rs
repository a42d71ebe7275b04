//! Shared lexing helpers for the text grammars (Chow expressions, bundle expressions).

use std::fmt;

use thiserror::Error;

/// A syntax error. `offset` is the 1-based byte position of the offending
/// input; the end of input is reported as length + 1.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ParseError {
    pub offset: usize,
    pub expected: Vec<String>,
    pub message: Option<String>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at offset {}", self.offset)?;
        if !self.expected.is_empty() {
            let quoted: Vec<String> = self.expected.iter().map(|t| format!("\"{t}\"")).collect();
            write!(f, ": expected {}", join_alternatives(&quoted))?;
        }
        if let Some(m) = &self.message {
            write!(f, ": {m}")?;
        }
        Ok(())
    }
}

fn join_alternatives(items: &[String]) -> String {
    match items {
        [] => String::new(),
        [one] => one.clone(),
        [init @ .., last] => format!("{} or {}", init.join(", "), last),
    }
}

pub(crate) struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    pub fn new(src: &'a str) -> Self {
        Cursor { src, pos: 0 }
    }

    pub fn pos(&self) -> usize {
        self.pos
    }

    pub fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    pub fn advance(&mut self, n: usize) {
        self.pos += n;
    }

    pub fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    pub fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos == self.src.len()
    }

    pub fn peek_char(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    /// Consumes `lit` if it comes next (after whitespace).
    pub fn eat(&mut self, lit: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(lit) {
            self.pos += lit.len();
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, lit: &str) -> Result<(), ParseError> {
        if self.eat(lit) {
            Ok(())
        } else {
            Err(self.error(&[lit]))
        }
    }

    pub fn error(&self, expected: &[&str]) -> ParseError {
        ParseError {
            offset: self.pos + 1,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            message: None,
        }
    }

    /// An error with a free-form message at a 0-based position.
    pub fn error_msg(&self, pos: usize, message: impl Into<String>) -> ParseError {
        ParseError {
            offset: pos + 1,
            expected: Vec::new(),
            message: Some(message.into()),
        }
    }

    /// A decimal integer with optional leading minus sign.
    pub fn int(&mut self) -> Result<i64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let bytes = self.rest().as_bytes();
        let mut len = 0;
        if bytes.first() == Some(&b'-') {
            len = 1;
        }
        let digits = bytes[len..].iter().take_while(|b| b.is_ascii_digit()).count();
        if digits == 0 {
            return Err(self.error(&["integer"]));
        }
        len += digits;
        let text = &self.rest()[..len];
        let value = text
            .parse::<i64>()
            .map_err(|_| self.error_msg(start, "integer out of range"))?;
        self.pos += len;
        Ok(value)
    }

    /// A comma-separated list of integers closed by `)`, which is consumed.
    pub fn int_list(&mut self) -> Result<Vec<i64>, ParseError> {
        let mut out = vec![self.int()?];
        loop {
            if self.eat(",") {
                out.push(self.int()?);
            } else if self.eat(")") {
                return Ok(out);
            } else {
                return Err(self.error(&[",", ")"]));
            }
        }
    }

    /// A comma-separated list of integers ending before `;` or `)`, which is not consumed.
    pub fn int_group(&mut self) -> Result<Vec<i64>, ParseError> {
        let mut out = vec![self.int()?];
        loop {
            if self.eat(",") {
                out.push(self.int()?);
            } else {
                self.skip_ws();
                if self.rest().starts_with(';') || self.rest().starts_with(')') {
                    return Ok(out);
                }
                return Err(self.error(&[",", ";", ")"]));
            }
        }
    }
}
