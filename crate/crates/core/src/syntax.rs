//! Tokenizer shared by the modal formula and kernel body grammars.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Not,
    Box,
    Dia,
    And,
    Or,
    Imp,
    Iff,
    LParen,
    RParen,
    Comma,
    Equals,
    True,
    False,
    Ident(String),
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Not => "`!`".into(),
            Tok::Box => "`[]`".into(),
            Tok::Dia => "`<>`".into(),
            Tok::And => "`&`".into(),
            Tok::Or => "`|`".into(),
            Tok::Imp => "`->`".into(),
            Tok::Iff => "`<->`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Equals => "`=`".into(),
            Tok::True => "`true`".into(),
            Tok::False => "`false`".into(),
            Tok::Ident(s) => alloc::format!("identifier `{s}`"),
        }
    }
}

pub(crate) fn syntax_error(src: &str, offset: usize, message: impl Into<String>) -> Error {
    let offset = offset.min(src.len());
    let before = &src[..offset];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    Error::Syntax {
        offset,
        line,
        column,
        message: message.into(),
    }
}

pub(crate) fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

pub(crate) fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

/// Splits `src` into tokens paired with their byte offsets. `#` comments run
/// to the end of the line.
pub(crate) fn tokenize(src: &str) -> Result<Vec<(Tok, usize)>, Error> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        let rest = &src[i..];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        if c == '#' {
            while i < bytes.len() && bytes[i] != b'\n' {
                i += 1;
            }
            continue;
        }
        let (tok, len) = if rest.starts_with("<->") {
            (Tok::Iff, 3)
        } else if rest.starts_with("<>") {
            (Tok::Dia, 2)
        } else if rest.starts_with("[]") {
            (Tok::Box, 2)
        } else if rest.starts_with("->") {
            (Tok::Imp, 2)
        } else {
            match c {
                '!' | '~' => (Tok::Not, 1),
                '&' => (Tok::And, 1),
                '|' => (Tok::Or, 1),
                '(' => (Tok::LParen, 1),
                ')' => (Tok::RParen, 1),
                ',' => (Tok::Comma, 1),
                '=' => (Tok::Equals, 1),
                c if is_ident_start(c) => {
                    let len = rest
                        .char_indices()
                        .find(|&(_, ch)| !is_ident_char(ch))
                        .map_or(rest.len(), |(j, _)| j);
                    let word = &rest[..len];
                    let tok = match word {
                        "true" => Tok::True,
                        "false" => Tok::False,
                        _ => Tok::Ident(word.to_string()),
                    };
                    (tok, len)
                }
                _ => {
                    let ch = rest.chars().next().unwrap_or(c);
                    return Err(syntax_error(
                        src,
                        start,
                        alloc::format!("unexpected character `{ch}`"),
                    ));
                }
            }
        };
        out.push((tok, start));
        i += len;
    }
    Ok(out)
}

/// Cursor over a token stream with position-aware errors.
pub(crate) struct Cursor<'a> {
    pub(crate) src: &'a str,
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl<'a> Cursor<'a> {
    pub(crate) fn new(src: &'a str) -> Result<Self, Error> {
        Ok(Cursor {
            src,
            toks: tokenize(src)?,
            pos: 0,
        })
    }

    pub(crate) fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    pub(crate) fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.src.len(), |&(_, o)| o)
    }

    pub(crate) fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    pub(crate) fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub(crate) fn expect(&mut self, tok: &Tok) -> Result<(), Error> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.unexpected(&tok.describe()))
        }
    }

    pub(crate) fn unexpected(&self, wanted: &str) -> Error {
        let found = self.peek().map_or("end of input".into(), Tok::describe);
        syntax_error(
            self.src,
            self.offset(),
            alloc::format!("expected {wanted}, found {found}"),
        )
    }

    pub(crate) fn finish(&self) -> Result<(), Error> {
        if self.pos == self.toks.len() {
            Ok(())
        } else {
            Err(self.unexpected("end of input"))
        }
    }
}
