//! Tokenization of a single line of a definition file.

use crate::error::{ErrorKind, ParseError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TokenKind {
    Ident(String),
    Int(String),
    Sym(char),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    /// 1-based column of the first character.
    pub col: usize,
}

impl Token {
    pub fn describe(&self) -> String {
        match &self.kind {
            TokenKind::Ident(s) => format!("identifier `{s}`"),
            TokenKind::Int(s) => format!("number `{s}`"),
            TokenKind::Sym(c) => format!("`{c}`"),
        }
    }
}

const SYMBOLS: &str = "+-*/^()=,";

/// Splits `line` into tokens, dropping a trailing `#` comment.
pub fn tokenize(line: &str, line_no: usize) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = line.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c == '#' {
            break;
        }
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Token {
                kind: TokenKind::Ident(chars[start..i].iter().collect()),
                col,
            });
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            if i < chars.len() && (chars[i].is_ascii_alphabetic() || chars[i] == '_') {
                return Err(ParseError::new(
                    ErrorKind::Lexical,
                    line_no,
                    i + 1,
                    "a number may not run into an identifier; write `*` between them",
                ));
            }
            out.push(Token {
                kind: TokenKind::Int(chars[start..i].iter().collect()),
                col,
            });
        } else if SYMBOLS.contains(c) {
            out.push(Token {
                kind: TokenKind::Sym(c),
                col,
            });
            i += 1;
        } else {
            return Err(ParseError::new(
                ErrorKind::Lexical,
                line_no,
                col,
                format!("unexpected character {c:?}"),
            ));
        }
    }
    Ok(out)
}
