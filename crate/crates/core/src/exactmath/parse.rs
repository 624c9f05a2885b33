use num_bigint::BigInt;

use super::{var_index, Field, MathError, MultiPoly, RatFunc, Rational};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
}

fn lex(s: &str) -> Result<Vec<Tok>, MathError> {
    let mut out = Vec::new();
    let cs: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let st = i;
            while i < cs.len() && cs[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = cs[st..i].iter().collect();
            out.push(Tok::Num(digits.parse().expect("ascii digits")));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let st = i;
            while i < cs.len() && (cs[i].is_ascii_alphanumeric() || cs[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(cs[st..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(MathError::Parse(format!("unexpected character {c:?} in {s:?}")));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<RatFunc, MathError> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?);
            } else if self.eat('-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<RatFunc, MathError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.unary()?);
            } else if self.eat('/') {
                acc = acc.div(&self.unary()?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<RatFunc, MathError> {
        if self.eat('-') {
            return Ok(self.unary()?.neg());
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<RatFunc, MathError> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let e = match self.toks.get(self.pos) {
            Some(Tok::Num(n)) => u32::try_from(n.clone())
                .map_err(|_| MathError::Parse("exponent too large".into()))?,
            _ => return Err(MathError::Parse("expected integer exponent".into())),
        };
        self.pos += 1;
        let mut acc = RatFunc::one();
        for _ in 0..e {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<RatFunc, MathError> {
        match self.toks.get(self.pos).cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(RatFunc::from_rational(&Rational::from(n)))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                Ok(RatFunc::from_poly(MultiPoly::var(var_index(&name)?)))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let v = self.expr()?;
                if !self.eat(')') {
                    return Err(MathError::Parse("missing ')'".into()));
                }
                Ok(v)
            }
            other => Err(MathError::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

/// Parses `+ - * / ^ ( )` expressions over integers and parameter names.
pub fn parse_ratfunc(s: &str) -> Result<RatFunc, MathError> {
    let toks = lex(s)?;
    if toks.is_empty() {
        return Err(MathError::Parse("empty expression".into()));
    }
    let mut p = Parser { toks, pos: 0 };
    let v = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(MathError::Parse(format!("trailing input in {s:?}")));
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence() {
        let a = parse_ratfunc("2/3*t - t^2*s + -(1)").unwrap();
        let b = parse_ratfunc("(2*t)/3 - s*t*t - 1").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_ratfunc("2 +").is_err());
        assert!(parse_ratfunc("t $ 1").is_err());
        assert!(parse_ratfunc("1/0").is_err());
    }
}
