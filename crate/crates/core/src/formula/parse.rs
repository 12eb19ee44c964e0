use thiserror::Error;

use super::Formula;

/// Errors carry byte offsets into the input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("empty formula")]
    Empty,
    #[error("unexpected character {found:?} at position {pos}")]
    BadChar { pos: usize, found: char },
    #[error("expected {expected} at position {pos}, found {found}")]
    Unexpected {
        pos: usize,
        expected: &'static str,
        found: String,
    },
    #[error("expected {expected} at end of input (position {pos})")]
    UnexpectedEnd { pos: usize, expected: &'static str },
}

#[derive(Debug, Clone, PartialEq)]
enum Tok<'a> {
    Ident(&'a str),
    Arrow,
    LParen,
    RParen,
}

impl Tok<'_> {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("atom `{s}`"),
            Tok::Arrow => "`->`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok<'_>)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => i += 1,
            b'(' => {
                out.push((i, Tok::LParen));
                i += 1;
            }
            b')' => {
                out.push((i, Tok::RParen));
                i += 1;
            }
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                out.push((i, Tok::Arrow));
                i += 2;
            }
            c if c.is_ascii_alphabetic() => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(&text[start..i])));
            }
            _ => {
                let found = text[i..].chars().next().unwrap_or('?');
                return Err(ParseError::BadChar { pos: i, found });
            }
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok<'a>)>,
    at: usize,
    end: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok<'a>> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn unexpected(&self, expected: &'static str) -> ParseError {
        match self.toks.get(self.at) {
            Some((pos, tok)) => ParseError::Unexpected {
                pos: *pos,
                expected,
                found: tok.describe(),
            },
            None => ParseError::UnexpectedEnd {
                pos: self.end,
                expected,
            },
        }
    }

    // formula := primary ("->" formula)?
    fn formula(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.primary()?;
        if self.peek() == Some(&Tok::Arrow) {
            self.at += 1;
            let rhs = self.formula()?;
            Ok(Formula::imp(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn primary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Some(Tok::Ident(name)) => {
                let f = Formula::atom(name);
                self.at += 1;
                Ok(f)
            }
            Some(Tok::LParen) => {
                self.at += 1;
                let inner = self.formula()?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(self.unexpected("`)`"));
                }
                self.at += 1;
                Ok(inner)
            }
            _ => Err(self.unexpected("an atom or `(`")),
        }
    }
}

/// Parses the concrete syntax: identifiers `[A-Za-z][A-Za-z0-9_]*` for atoms,
/// right-associative `->`, parentheses for grouping.
pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let toks = lex(text)?;
    if toks.is_empty() {
        return Err(ParseError::Empty);
    }
    let mut p = Parser {
        toks,
        at: 0,
        end: text.len(),
    };
    let f = p.formula()?;
    if p.at != p.toks.len() {
        return Err(p.unexpected("`->` or end of input"));
    }
    Ok(f)
}
