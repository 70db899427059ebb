//! Recursive-descent parser with precedence climbing.
//!
//! Grammar, loosest to tightest: `+ -`, then `* /`, then unary `-`, then
//! right-associative `^`. No implicit multiplication. Literals are
//! integers, decimals, or scientific notation; identifiers are variables
//! unless immediately called as one of the known functions. `pow(a, b)`
//! is accepted as a spelling of `a ^ b`.

use super::{BinOp, Expr};
use crate::carrier::Func;
use crate::error::Error;

/// Parse failure with the byte offset of the offending token and the
/// token classes that would have been accepted there.
#[derive(Debug, Clone, PartialEq)]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
    pub expected: Vec<&'static str>,
}

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "at byte {}: {}", self.offset, self.message)?;
        if !self.expected.is_empty() {
            write!(f, " (expected {})", self.expected.join(", "))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(v) => format!("number {v}"),
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Caret => "`^`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            src: src.as_bytes(),
            pos: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn next_token(&mut self) -> Result<(Tok, usize), ParseError> {
        self.skip_ws();
        let start = self.pos;
        if self.pos >= self.src.len() {
            return Ok((Tok::Eof, start));
        }
        let c = self.src[self.pos];
        let simple = match c {
            b'+' => Some(Tok::Plus),
            b'-' => Some(Tok::Minus),
            b'*' => Some(Tok::Star),
            b'/' => Some(Tok::Slash),
            b'^' => Some(Tok::Caret),
            b'(' => Some(Tok::LParen),
            b')' => Some(Tok::RParen),
            b',' => Some(Tok::Comma),
            _ => None,
        };
        if let Some(tok) = simple {
            self.pos += 1;
            return Ok((tok, start));
        }
        if c.is_ascii_digit() || c == b'.' {
            return self.lex_number(start);
        }
        if c.is_ascii_alphabetic() || c == b'_' {
            while self.pos < self.src.len()
                && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
            {
                self.pos += 1;
            }
            let name = std::str::from_utf8(&self.src[start..self.pos])
                .expect("identifier bytes are ASCII")
                .to_string();
            return Ok((Tok::Ident(name), start));
        }
        Err(ParseError {
            offset: start,
            message: format!("unexpected character `{}`", c as char),
            expected: vec!["number", "identifier", "operator"],
        })
    }

    fn lex_number(&mut self, start: usize) -> Result<(Tok, usize), ParseError> {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos < self.src.len() && self.src[self.pos] == b'.' {
            self.pos += 1;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
        }
        // Scientific notation: accepted because tolerance-sized literals
        // appear in configuration files.
        if self.pos < self.src.len() && (self.src[self.pos] | 0x20) == b'e' {
            let mark = self.pos;
            self.pos += 1;
            if self.pos < self.src.len() && (self.src[self.pos] == b'+' || self.src[self.pos] == b'-')
            {
                self.pos += 1;
            }
            if self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
            } else {
                // Not an exponent; `e` belongs to whatever follows.
                self.pos = mark;
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("digits are ASCII");
        match text.parse::<f64>() {
            Ok(v) => Ok((Tok::Num(v), start)),
            Err(_) => Err(ParseError {
                offset: start,
                message: format!("malformed number `{text}`"),
                expected: vec!["number"],
            }),
        }
    }
}

struct Parser {
    tokens: Vec<(Tok, usize)>,
    cursor: usize,
}

impl Parser {
    fn peek(&self) -> &(Tok, usize) {
        &self.tokens[self.cursor]
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.tokens[self.cursor].clone();
        if self.cursor + 1 < self.tokens.len() {
            self.cursor += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok, expected: &'static str) -> Result<(), ParseError> {
        let (tok, offset) = self.peek().clone();
        if tok == want {
            self.bump();
            Ok(())
        } else {
            Err(ParseError {
                offset,
                message: format!("found {}", tok.describe()),
                expected: vec![expected],
            })
        }
    }

    fn parse_sum(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.parse_term()?;
        loop {
            let op = match self.peek().0 {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.parse_term()?;
            lhs = Expr::binary(op, lhs, rhs);
        }
    }

    fn parse_term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.parse_unary()?;
        loop {
            let op = match self.peek().0 {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.parse_unary()?;
            lhs = Expr::binary(op, lhs, rhs);
        }
    }

    fn parse_unary(&mut self) -> Result<Expr, ParseError> {
        if self.peek().0 == Tok::Minus {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.parse_unary()?)));
        }
        self.parse_power()
    }

    fn parse_power(&mut self) -> Result<Expr, ParseError> {
        let base = self.parse_primary()?;
        if self.peek().0 == Tok::Caret {
            self.bump();
            // Right-associative; the exponent may carry a unary minus.
            let exponent = self.parse_unary()?;
            return Ok(Expr::binary(BinOp::Pow, base, exponent));
        }
        Ok(base)
    }

    fn parse_primary(&mut self) -> Result<Expr, ParseError> {
        let (tok, offset) = self.peek().clone();
        match tok {
            Tok::Num(v) => {
                self.bump();
                Ok(Expr::Literal(v))
            }
            Tok::Ident(name) => {
                self.bump();
                if self.peek().0 != Tok::LParen {
                    return Ok(Expr::Var(name));
                }
                self.bump();
                if name == "pow" {
                    let a = self.parse_sum()?;
                    self.expect(Tok::Comma, "`,`")?;
                    let b = self.parse_sum()?;
                    self.expect(Tok::RParen, "`)`")?;
                    return Ok(Expr::binary(BinOp::Pow, a, b));
                }
                let func = Func::from_name(&name).ok_or_else(|| ParseError {
                    offset,
                    message: format!("unknown function `{name}`"),
                    expected: vec!["exp", "log", "sqrt", "sin", "cos", "sinh", "cosh", "pow"],
                })?;
                let arg = self.parse_sum()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(Expr::call(func, arg))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.parse_sum()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            other => Err(ParseError {
                offset,
                message: format!("found {}", other.describe()),
                expected: vec!["number", "variable", "function", "`(`", "`-`"],
            }),
        }
    }
}

/// Parse a source string into an expression tree.
pub fn parse(source: &str) -> Result<Expr, ParseError> {
    let mut lexer = Lexer::new(source);
    let mut tokens = Vec::new();
    loop {
        let (tok, offset) = lexer.next_token()?;
        let done = tok == Tok::Eof;
        tokens.push((tok, offset));
        if done {
            break;
        }
    }
    let mut parser = Parser { tokens, cursor: 0 };
    let expr = parser.parse_sum()?;
    let (tok, offset) = parser.peek().clone();
    if tok != Tok::Eof {
        return Err(ParseError {
            offset,
            message: format!("trailing input: {}", tok.describe()),
            expected: vec!["end of input", "operator"],
        });
    }
    Ok(expr)
}

/// Convenience wrapper returning the engine-level error type.
pub fn parse_expr(source: &str) -> crate::error::Result<Expr> {
    parse(source).map_err(Error::Parse)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_of_ratio() {
        let e = parse("t^(2/3)").unwrap();
        assert_eq!(
            e,
            Expr::binary(
                BinOp::Pow,
                Expr::var("t"),
                Expr::binary(BinOp::Div, Expr::Literal(2.0), Expr::Literal(3.0))
            )
        );
    }

    #[test]
    fn call_node() {
        assert_eq!(
            parse("exp(t)").unwrap(),
            Expr::call(Func::Exp, Expr::var("t"))
        );
    }

    #[test]
    fn malformed_input_reports_offset() {
        let err = parse("1 + * 2").unwrap_err();
        assert_eq!(err.offset, 4);
        assert!(!err.expected.is_empty());
    }

    #[test]
    fn unbalanced_parens() {
        assert!(parse("(1 + 2").is_err());
        assert!(parse("1 + 2)").is_err());
    }

    #[test]
    fn unknown_function_rejected() {
        let err = parse("tan(x1)").unwrap_err();
        assert!(err.message.contains("unknown function"));
    }

    #[test]
    fn trailing_garbage_rejected() {
        let err = parse("1 + 2 3").unwrap_err();
        assert_eq!(err.offset, 6);
    }

    #[test]
    fn pow_function_form() {
        assert_eq!(parse("pow(t, 2)").unwrap(), parse("t^2").unwrap());
    }

    #[test]
    fn ident_starting_with_e_is_not_an_exponent() {
        // `2e` with no digits: the `e` is not part of the number.
        assert!(parse("2e").is_err()); // `2` then trailing ident `e`... lexed as ident
    }
}
