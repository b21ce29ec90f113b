use std::collections::BTreeMap;

use super::{BinOp, Func, Node, ParseError};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Sym(char),
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(v) => format!("number {v}"),
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Sym(c) => format!("`{c}`"),
            Tok::End => "end of input".to_string(),
        }
    }
}

pub(super) struct Parser<'a> {
    src: &'a str,
    pos: usize,
    params: &'a BTreeMap<String, f64>,
    // Lookahead token and the byte offset where it starts.
    tok: Tok,
    tok_at: usize,
}

impl<'a> Parser<'a> {
    pub(super) fn new(src: &'a str, params: &'a BTreeMap<String, f64>) -> Self {
        Self {
            src,
            pos: 0,
            params,
            tok: Tok::End,
            tok_at: 0,
        }
    }

    pub(super) fn parse(mut self) -> Result<Node, ParseError> {
        self.advance()?;
        let node = self.expr()?;
        if self.tok != Tok::End {
            return Err(self.unexpected(&["operator", "end of input"]));
        }
        Ok(node)
    }

    fn unexpected(&self, expected: &[&'static str]) -> ParseError {
        ParseError::Syntax {
            offset: self.tok_at,
            found: self.tok.describe(),
            expected: expected.to_vec(),
        }
    }

    fn advance(&mut self) -> Result<(), ParseError> {
        let bytes = self.src.as_bytes();
        while self.pos < bytes.len() && bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        self.tok_at = self.pos;
        if self.pos >= bytes.len() {
            self.tok = Tok::End;
            return Ok(());
        }
        let c = bytes[self.pos];
        if c.is_ascii_digit() || c == b'.' {
            let start = self.pos;
            while self.pos < bytes.len() && (bytes[self.pos].is_ascii_digit() || bytes[self.pos] == b'.') {
                self.pos += 1;
            }
            if self.pos < bytes.len() && matches!(bytes[self.pos], b'e' | b'E') {
                let mut look = self.pos + 1;
                if look < bytes.len() && matches!(bytes[look], b'+' | b'-') {
                    look += 1;
                }
                if look < bytes.len() && bytes[look].is_ascii_digit() {
                    self.pos = look;
                    while self.pos < bytes.len() && bytes[self.pos].is_ascii_digit() {
                        self.pos += 1;
                    }
                }
            }
            let text = &self.src[start..self.pos];
            let value = text.parse::<f64>().map_err(|_| ParseError::Number {
                offset: start,
                text: text.to_string(),
            })?;
            self.tok = Tok::Num(value);
        } else if c.is_ascii_alphabetic() || c == b'_' {
            let start = self.pos;
            while self.pos < bytes.len() && (bytes[self.pos].is_ascii_alphanumeric() || bytes[self.pos] == b'_') {
                self.pos += 1;
            }
            self.tok = Tok::Ident(self.src[start..self.pos].to_string());
        } else {
            // Multi-byte characters are reported whole.
            let ch = self.src[self.pos..].chars().next().expect("non-empty remainder");
            self.pos += ch.len_utf8();
            self.tok = Tok::Sym(ch);
        }
        Ok(())
    }

    fn expr(&mut self) -> Result<Node, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.tok {
                Tok::Sym('+') => BinOp::Add,
                Tok::Sym('-') => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.advance()?;
            let rhs = self.term()?;
            lhs = Node::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn term(&mut self) -> Result<Node, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.tok {
                Tok::Sym('*') => BinOp::Mul,
                Tok::Sym('/') => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.advance()?;
            let rhs = self.unary()?;
            lhs = Node::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn unary(&mut self) -> Result<Node, ParseError> {
        match self.tok {
            Tok::Sym('-') => {
                self.advance()?;
                Ok(Node::Neg(Box::new(self.unary()?)))
            }
            Tok::Sym('+') => {
                self.advance()?;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Node, ParseError> {
        let base = self.primary()?;
        if self.tok == Tok::Sym('^') {
            self.advance()?;
            let exponent = self.unary()?;
            return Ok(Node::Binary(BinOp::Pow, Box::new(base), Box::new(exponent)));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Node, ParseError> {
        const EXPECTED: &[&str] = &["number", "`t`", "identifier", "`(`", "`-`"];
        match self.tok.clone() {
            Tok::Num(v) => {
                self.advance()?;
                Ok(Node::Const(v))
            }
            Tok::Ident(name) => {
                let at = self.tok_at;
                self.advance()?;
                if name == "t" {
                    return Ok(Node::Var);
                }
                if let Some(func) = Func::lookup(&name) {
                    return self.call(func, at);
                }
                match self.params.get(&name) {
                    Some(&v) => Ok(Node::Const(v)),
                    None => Err(ParseError::UnknownIdentifier { offset: at, name }),
                }
            }
            Tok::Sym('(') => {
                self.advance()?;
                let inner = self.expr()?;
                self.expect(')')?;
                Ok(inner)
            }
            _ => Err(self.unexpected(EXPECTED)),
        }
    }

    fn call(&mut self, func: Func, at: usize) -> Result<Node, ParseError> {
        self.expect('(')?;
        let mut args = vec![self.expr()?];
        while self.tok == Tok::Sym(',') {
            self.advance()?;
            args.push(self.expr()?);
        }
        self.expect(')')?;
        if args.len() != func.arity() {
            return Err(ParseError::Arity {
                offset: at,
                name: func.name(),
                expected: func.arity(),
                found: args.len(),
            });
        }
        Ok(Node::Call(func, args))
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.tok == Tok::Sym(c) {
            self.advance()
        } else {
            Err(self.unexpected(match c {
                ')' => &["`)`"],
                '(' => &["`(`"],
                _ => &["symbol"],
            }))
        }
    }
}
