//! A small infix parser for polynomial expressions such as `x*(x*Y' + x'*Y) + x*x'^2`.
//!
//! Products are taken in the written order, so `X*y'` and `y'*X` differ by a
//! Koszul sign. Juxtaposition is not multiplication; `*` is required.

use thiserror::Error;

use super::poly::{FreeAlgebra, Polynomial};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("expression `{input}`, offset {offset}: {message}")]
pub struct ExprError {
    pub input: String,
    pub offset: usize,
    pub message: String,
}

/// Parses `src`, resolving names through `lookup` (generators and any named elements).
pub fn parse_with<F>(alg: &FreeAlgebra, src: &str, lookup: F) -> Result<Polynomial, ExprError>
where
    F: Fn(&str) -> Option<Polynomial>,
{
    let mut parser = Parser { alg, src, bytes: src.as_bytes(), pos: 0, lookup: &lookup };
    let out = parser.expr()?;
    parser.skip_ws();
    if parser.pos != parser.bytes.len() {
        return Err(parser.error("unexpected trailing input"));
    }
    Ok(out)
}

/// Parses an expression whose names are generators of `alg`.
pub fn parse(alg: &FreeAlgebra, src: &str) -> Result<Polynomial, ExprError> {
    parse_with(alg, src, |name| alg.generator_index(name).map(|i| alg.gen(i)))
}

struct Parser<'a, F> {
    alg: &'a FreeAlgebra,
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
    lookup: &'a F,
}

impl<F: Fn(&str) -> Option<Polynomial>> Parser<'_, F> {
    fn error(&self, message: impl Into<String>) -> ExprError {
        ExprError { input: self.src.to_string(), offset: self.pos, message: message.into() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Polynomial, ExprError> {
        let p = self.alg.p();
        let mut acc = Polynomial::zero();
        let mut sign = 1u8;
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                sign = p - 1;
            }
            Some(b'+') => self.pos += 1,
            _ => {}
        }
        loop {
            let t = self.term()?;
            acc.add_scaled(&t, sign, p);
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    sign = 1;
                }
                Some(b'-') => {
                    self.pos += 1;
                    sign = p - 1;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial, ExprError> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            let f = self.factor()?;
            acc = self.alg.mul(&acc, &f);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Polynomial, ExprError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let e = self.integer()?;
            let e = u32::try_from(e).map_err(|_| self.error("exponent too large"))?;
            return Ok(self.alg.pow(&base, e));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<u64, ExprError> {
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an integer"));
        }
        self.src[start..self.pos].parse().map_err(|_| self.error("integer out of range"))
    }

    fn atom(&mut self) -> Result<Polynomial, ExprError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                Ok(self.alg.constant((n % self.alg.p() as u64) as i64))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.bytes.len()
                    && (self.bytes[self.pos].is_ascii_alphanumeric() || self.bytes[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                while self.pos < self.bytes.len() && self.bytes[self.pos] == b'\'' {
                    self.pos += 1;
                }
                let name = &self.src[start..self.pos];
                (self.lookup)(name).ok_or_else(|| {
                    self.pos = start;
                    self.error(format!("unknown name `{name}`"))
                })
            }
            _ => Err(self.error("expected a name, integer or `(`")),
        }
    }
}
