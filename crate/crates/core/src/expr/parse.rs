//! Lexer and Pratt parser.
//!
//! Binding powers, loosest to tightest: `+ -`, `* /`, unary minus, `^`.
//! `^` is right-associative and its right operand may carry a unary minus,
//! so `2^-1` parses and `-x^2` means `-(x^2)`.

use super::{ExprError, Func, Node};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(u8),
    LParen,
    RParen,
    Comma,
    End,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer { src: src.as_bytes(), pos: 0 }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn digits(&mut self) -> usize {
        let s = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        self.pos - s
    }

    /// Next token and its byte offset.
    fn next(&mut self) -> Result<(Tok, usize), ExprError> {
        self.skip_ws();
        let start = self.pos;
        let Some(&c) = self.src.get(self.pos) else {
            return Ok((Tok::End, start));
        };
        if c.is_ascii_digit() || c == b'.' {
            let mut n = self.digits();
            if self.src.get(self.pos) == Some(&b'.') {
                self.pos += 1;
                n += self.digits();
            }
            if n == 0 {
                return Err(ExprError::Syntax { offset: start, msg: "malformed number".into() });
            }
            // Only treat `e` as an exponent when digits follow, so `2*e` style
            // constants are never swallowed.
            if matches!(self.src.get(self.pos), Some(b'e' | b'E')) {
                let save = self.pos;
                self.pos += 1;
                if matches!(self.src.get(self.pos), Some(b'+' | b'-')) {
                    self.pos += 1;
                }
                if self.digits() == 0 {
                    self.pos = save;
                }
            }
            let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
            let v: f64 = text
                .parse()
                .map_err(|_| ExprError::Syntax { offset: start, msg: "malformed number".into() })?;
            return Ok((Tok::Num(v), start));
        }
        if c.is_ascii_alphabetic() || c == b'_' {
            while self.pos < self.src.len()
                && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
            {
                self.pos += 1;
            }
            let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
            return Ok((Tok::Ident(text.to_string()), start));
        }
        self.pos += 1;
        let t = match c {
            b'+' | b'-' | b'*' | b'/' | b'^' => Tok::Op(c),
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b',' => Tok::Comma,
            _ => {
                return Err(ExprError::Syntax {
                    offset: start,
                    msg: format!("unexpected character '{}'", c as char),
                })
            }
        };
        Ok((t, start))
    }
}

pub(super) struct Parser<'a> {
    lex: Lexer<'a>,
    tok: Tok,
    off: usize,
    vars: &'a [String],
}

const BP_ADD: u8 = 10;
const BP_MUL: u8 = 20;
const BP_NEG: u8 = 30;
const BP_POW: u8 = 40;

impl<'a> Parser<'a> {
    pub(super) fn new(src: &'a str, vars: &'a [String]) -> Result<Self, ExprError> {
        let mut lex = Lexer::new(src);
        let (tok, off) = lex.next()?;
        Ok(Parser { lex, tok, off, vars })
    }

    fn bump(&mut self) -> Result<(), ExprError> {
        let (t, o) = self.lex.next()?;
        self.tok = t;
        self.off = o;
        Ok(())
    }

    fn err<T>(&self, msg: &str) -> Result<T, ExprError> {
        let msg = match &self.tok {
            Tok::End => format!("{msg}, found end of input"),
            _ => msg.to_string(),
        };
        Err(ExprError::Syntax { offset: self.off, msg })
    }

    pub(super) fn parse_all(mut self) -> Result<Node, ExprError> {
        if self.tok == Tok::End {
            return Err(ExprError::Empty);
        }
        let n = self.expr(0)?;
        if self.tok != Tok::End {
            return self.err("unexpected token");
        }
        Ok(n)
    }

    fn expr(&mut self, min_bp: u8) -> Result<Node, ExprError> {
        let mut lhs = self.prefix()?;
        loop {
            let (op, lbp, rbp) = match self.tok {
                Tok::Op(b'+') => (b'+', BP_ADD, BP_ADD + 1),
                Tok::Op(b'-') => (b'-', BP_ADD, BP_ADD + 1),
                Tok::Op(b'*') => (b'*', BP_MUL, BP_MUL + 1),
                Tok::Op(b'/') => (b'/', BP_MUL, BP_MUL + 1),
                Tok::Op(b'^') => (b'^', BP_POW, BP_POW - 1),
                _ => break,
            };
            if lbp < min_bp {
                break;
            }
            self.bump()?;
            let rhs = if op == b'^' { self.pow_rhs()? } else { self.expr(rbp)? };
            lhs = match op {
                b'+' => Node::Add(Box::new(lhs), Box::new(rhs)),
                b'-' => Node::Sub(Box::new(lhs), Box::new(rhs)),
                b'*' => Node::Mul(Box::new(lhs), Box::new(rhs)),
                b'/' => Node::Div(Box::new(lhs), Box::new(rhs)),
                _ => Node::Pow(Box::new(lhs), Box::new(rhs)),
            };
        }
        Ok(lhs)
    }

    fn pow_rhs(&mut self) -> Result<Node, ExprError> {
        if self.tok == Tok::Op(b'-') {
            self.bump()?;
            let inner = self.pow_rhs()?;
            return Ok(Node::Neg(Box::new(inner)));
        }
        self.expr(BP_POW - 1)
    }

    fn prefix(&mut self) -> Result<Node, ExprError> {
        match self.tok.clone() {
            Tok::Num(v) => {
                self.bump()?;
                Ok(Node::Num(v))
            }
            Tok::Op(b'-') => {
                self.bump()?;
                let inner = self.expr(BP_NEG)?;
                Ok(Node::Neg(Box::new(inner)))
            }
            Tok::Op(b'+') => {
                self.bump()?;
                self.expr(BP_NEG)
            }
            Tok::LParen => {
                self.bump()?;
                let inner = self.expr(0)?;
                if self.tok != Tok::RParen {
                    return self.err("expected ')'");
                }
                self.bump()?;
                Ok(inner)
            }
            Tok::Ident(name) => {
                let at = self.off;
                self.bump()?;
                if self.tok == Tok::LParen {
                    let func = Func::from_name(&name)
                        .ok_or(ExprError::UnknownIdentifier { name: name.clone(), offset: at })?;
                    self.bump()?;
                    let mut args = vec![self.expr(0)?];
                    while self.tok == Tok::Comma {
                        self.bump()?;
                        args.push(self.expr(0)?);
                    }
                    if self.tok != Tok::RParen {
                        return self.err("expected ')' or ','");
                    }
                    self.bump()?;
                    if args.len() != func.arity() {
                        return Err(ExprError::Arity {
                            func: func.name().to_string(),
                            expected: func.arity(),
                            found: args.len(),
                            offset: at,
                        });
                    }
                    return Ok(Node::Call(func, args));
                }
                if let Some(i) = self.vars.iter().position(|v| *v == name) {
                    return Ok(Node::Var(i));
                }
                match name.as_str() {
                    "pi" => Ok(Node::Pi),
                    "e" => Ok(Node::E),
                    _ => Err(ExprError::UnknownIdentifier { name, offset: at }),
                }
            }
            _ => self.err("expected operand"),
        }
    }
}
