//! Recursive-descent parser for the ASCII formula grammar.
//!
//! ```text
//! formula := iff
//! iff     := imp ("<->" imp)*          left associative
//! imp     := or ("->" imp)?            right associative
//! or      := and ("|" and)*
//! and     := unary ("&" unary)*
//! unary   := "~" unary | "[]" unary | atom
//! atom    := ident | "false" | "0" | "true" | "1" | "(" formula ")"
//! ident   := [a-z][a-zA-Z0-9_]*
//! ```

use std::fmt;

use thiserror::Error;

use super::Formula;

/// Syntax error with the byte offset where it was detected.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at position {position}: expected {}, found {found}", expected.join(" or "))]
pub struct ParseError {
    pub position: usize,
    pub expected: Vec<&'static str>,
    pub found: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Ident(String),
    False,
    True,
    LParen,
    RParen,
    Not,
    Box,
    And,
    Or,
    Imp,
    Iff,
    End,
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Ident(name) => write!(f, "identifier `{name}`"),
            Token::False => f.write_str("`false`"),
            Token::True => f.write_str("`true`"),
            Token::LParen => f.write_str("`(`"),
            Token::RParen => f.write_str("`)`"),
            Token::Not => f.write_str("`~`"),
            Token::Box => f.write_str("`[]`"),
            Token::And => f.write_str("`&`"),
            Token::Or => f.write_str("`|`"),
            Token::Imp => f.write_str("`->`"),
            Token::Iff => f.write_str("`<->`"),
            Token::End => f.write_str("end of input"),
        }
    }
}

const EXPECT_OPERAND: &[&str] = &["identifier", "`false`", "`true`", "`(`", "`~`", "`[]`"];

fn tokenize(text: &str) -> Result<Vec<(usize, Token)>, ParseError> {
    let bytes = text.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let token = match c {
            b'(' => {
                i += 1;
                Token::LParen
            }
            b')' => {
                i += 1;
                Token::RParen
            }
            b'~' => {
                i += 1;
                Token::Not
            }
            b'&' => {
                i += 1;
                Token::And
            }
            b'|' => {
                i += 1;
                Token::Or
            }
            b'0' | b'1' => {
                i += 1;
                if i < bytes.len() && bytes[i].is_ascii_alphanumeric() {
                    return Err(ParseError {
                        position: start,
                        expected: vec!["`0`", "`1`"],
                        found: "numeric literal".into(),
                    });
                }
                if c == b'0' {
                    Token::False
                } else {
                    Token::True
                }
            }
            b'[' if bytes.get(i + 1) == Some(&b']') => {
                i += 2;
                Token::Box
            }
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                i += 2;
                Token::Imp
            }
            b'<' if bytes.get(i + 1) == Some(&b'-') && bytes.get(i + 2) == Some(&b'>') => {
                i += 3;
                Token::Iff
            }
            b'a'..=b'z' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                match &text[start..i] {
                    "false" => Token::False,
                    "true" => Token::True,
                    name => Token::Ident(name.to_string()),
                }
            }
            _ => {
                let found = text[start..].chars().next().unwrap_or(' ');
                return Err(ParseError {
                    position: start,
                    expected: EXPECT_OPERAND
                        .iter()
                        .chain(&["`&`", "`|`", "`->`", "`<->`", "`)`"])
                        .copied()
                        .collect(),
                    found: format!("character `{found}`"),
                });
            }
        };
        tokens.push((start, token));
    }
    tokens.push((text.len(), Token::End));
    Ok(tokens)
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos].1
    }

    fn offset(&self) -> usize {
        self.tokens[self.pos].0
    }

    fn bump(&mut self) -> Token {
        let token = self.tokens[self.pos].1.clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        token
    }

    fn error(&self, expected: &[&'static str]) -> ParseError {
        ParseError {
            position: self.offset(),
            expected: expected.to_vec(),
            found: self.peek().to_string(),
        }
    }

    fn iff(&mut self) -> Result<Formula, ParseError> {
        let mut left = self.imp()?;
        while *self.peek() == Token::Iff {
            self.bump();
            let right = self.imp()?;
            left = Formula::iff(left, right);
        }
        Ok(left)
    }

    fn imp(&mut self) -> Result<Formula, ParseError> {
        let left = self.or()?;
        if *self.peek() == Token::Imp {
            self.bump();
            let right = self.imp()?;
            return Ok(Formula::imp(left, right));
        }
        Ok(left)
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut left = self.and()?;
        while *self.peek() == Token::Or {
            self.bump();
            left = Formula::or(left, self.and()?);
        }
        Ok(left)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut left = self.unary()?;
        while *self.peek() == Token::And {
            self.bump();
            left = Formula::and(left, self.unary()?);
        }
        Ok(left)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Token::Not => {
                self.bump();
                Ok(Formula::neg(self.unary()?))
            }
            Token::Box => {
                self.bump();
                Ok(Formula::boxed(self.unary()?))
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Token::Ident(name) => {
                self.bump();
                Ok(Formula::atom(&name))
            }
            Token::False => {
                self.bump();
                Ok(Formula::Bot)
            }
            Token::True => {
                self.bump();
                Ok(Formula::Top)
            }
            Token::LParen => {
                self.bump();
                let inner = self.iff()?;
                if *self.peek() != Token::RParen {
                    return Err(self.error(&["`)`", "`&`", "`|`", "`->`", "`<->`"]));
                }
                self.bump();
                Ok(inner)
            }
            _ => Err(self.error(EXPECT_OPERAND)),
        }
    }
}

/// Parse a formula. Identifiers must start with a lowercase letter, which also
/// keeps the reserved placeholder namespace (`_bx0`, `_bx1`, ...) out of
/// user input.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let mut parser = Parser {
        tokens: tokenize(text)?,
        pos: 0,
    };
    let formula = parser.iff()?;
    if *parser.peek() != Token::End {
        return Err(parser.error(&["`&`", "`|`", "`->`", "`<->`", "end of input"]));
    }
    Ok(formula)
}
