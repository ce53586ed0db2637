//! Recursive-descent parser for the ASCII polynomial grammar.
//!
//! ```text
//! expr   := sign? term (('+' | '-') term)*
//! term   := factor ('*'? factor)*
//! factor := atom ('^' digits)?
//! atom   := number ('/' number)? | variable | '(' expr ')'
//! ```

use num_bigint::BigInt;
use num_traits::Zero;

use super::{check_dim, variable_names, ExpVec, Poly, PolyError, Rat};

/// Parses `text` as a polynomial in `dim` variables (`x, y` or `x, y, z`).
pub fn parse_poly(text: &str, dim: usize) -> Result<Poly, PolyError> {
    check_dim(dim)?;
    let mut parser = Parser {
        chars: text
            .char_indices()
            .filter(|(_, c)| !c.is_whitespace())
            .collect(),
        idx: 0,
        dim,
        len: text.len(),
    };
    let p = parser.expr()?;
    if let Some(&(pos, c)) = parser.chars.get(parser.idx) {
        return Err(syntax(pos, format!("unexpected `{c}`")));
    }
    Ok(p)
}

struct Parser {
    chars: Vec<(usize, char)>,
    idx: usize,
    dim: usize,
    len: usize,
}

fn syntax(pos: usize, message: String) -> PolyError {
    PolyError::Syntax { pos, message }
}

impl Parser {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.idx).map(|&(_, c)| c)
    }

    fn pos(&self) -> usize {
        self.chars.get(self.idx).map_or(self.len, |&(p, _)| p)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        self.idx += 1;
        c
    }

    fn expr(&mut self) -> Result<Poly, PolyError> {
        let mut acc = Poly::zero(self.dim);
        let mut negate = match self.peek() {
            Some('-') => {
                self.bump();
                true
            }
            Some('+') => {
                self.bump();
                false
            }
            _ => false,
        };
        loop {
            let t = self.term()?;
            acc = if negate { &acc - &t } else { &acc + &t };
            match self.peek() {
                Some('+') => negate = false,
                Some('-') => negate = true,
                _ => return Ok(acc),
            }
            self.bump();
        }
    }

    fn starts_factor(&self) -> bool {
        matches!(self.peek(), Some(c) if c.is_ascii_digit() || c.is_ascii_alphabetic() || c == '(')
    }

    fn term(&mut self) -> Result<Poly, PolyError> {
        let mut acc = self.factor()?;
        loop {
            if self.peek() == Some('*') {
                self.bump();
            } else if !self.starts_factor() {
                return Ok(acc);
            }
            let f = self.factor()?;
            acc = &acc * &f;
        }
    }

    fn factor(&mut self) -> Result<Poly, PolyError> {
        let base = self.atom()?;
        if self.peek() != Some('^') {
            return Ok(base);
        }
        self.bump();
        let pos = self.pos();
        let digits = self.digits();
        if digits.is_empty() {
            return Err(syntax(
                pos,
                "exponent must be a nonnegative decimal integer".into(),
            ));
        }
        let k: u32 = digits
            .parse()
            .map_err(|_| syntax(pos, format!("exponent `{digits}` too large")))?;
        Ok(base.pow(k))
    }

    fn digits(&mut self) -> String {
        let mut s = String::new();
        while let Some(c) = self.peek().filter(char::is_ascii_digit) {
            s.push(c);
            self.bump();
        }
        s
    }

    fn atom(&mut self) -> Result<Poly, PolyError> {
        let pos = self.pos();
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let num: BigInt = self.digits().parse().unwrap();
                let mut den = BigInt::from(1);
                if self.peek() == Some('/') {
                    self.bump();
                    let dpos = self.pos();
                    let d = self.digits();
                    if d.is_empty() {
                        return Err(syntax(dpos, "expected denominator after `/`".into()));
                    }
                    den = d.parse().unwrap();
                    if den.is_zero() {
                        return Err(PolyError::ZeroDenominator);
                    }
                }
                Ok(Poly::constant(self.dim, Rat::new(num, den)))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                self.bump();
                match variable_names(self.dim).iter().position(|&v| v == c) {
                    Some(i) => Ok(Poly::monomial(
                        ExpVec::unit(self.dim, i),
                        Rat::from_integer(1.into()),
                    )),
                    None if "xyz".contains(c) => Err(PolyError::VariableOutOfRange {
                        name: c,
                        pos,
                        dim: self.dim,
                    }),
                    None => Err(syntax(pos, format!("unknown variable `{c}`"))),
                }
            }
            Some('(') => {
                self.bump();
                let inner = self.expr()?;
                if self.bump() != Some(')') {
                    return Err(syntax(self.pos(), "expected `)`".into()));
                }
                Ok(inner)
            }
            Some(c) => Err(syntax(pos, format!("unexpected `{c}`"))),
            None => Err(syntax(pos, "unexpected end of input".into())),
        }
    }
}
