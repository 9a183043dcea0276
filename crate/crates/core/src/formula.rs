//! Modal formulas: the AST, its text syntax, and simple metrics.
//!
//! Grammar (whitespace-insensitive, `#` starts a line comment):
//!
//! ```text
//! formula := iff
//! iff     := imp ("<->" imp)*
//! imp     := or ("->" imp)?
//! or      := and ("|" and)*
//! and     := unary ("&" unary)*
//! unary   := ("!" | "~") unary | "[]" unary | "<>" unary | atom
//! atom    := "true" | "false" | IDENT | "(" formula ")"
//! ```
//!
//! `&`, `|` and `<->` associate to the left, `->` to the right.

use alloc::boxed::Box as Heap;
use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};
use crate::syntax::{Cursor, Tok};

/// Prefix reserved for machine-introduced variables.
pub const RESERVED_PREFIX: &str = "__";

type Child = Heap<ModalFormula>;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ModalFormula {
    Var(String),
    True,
    False,
    Not(Child),
    And(Child, Child),
    Or(Child, Child),
    Imp(Child, Child),
    Iff(Child, Child),
    /// Necessity.
    Box(Child),
    /// Possibility, evaluated as `!([]!φ)`.
    Dia(Child),
}

impl ModalFormula {
    pub fn var(name: impl Into<String>) -> Self {
        ModalFormula::Var(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Self) -> Self {
        ModalFormula::Not(Heap::new(f))
    }

    pub fn and(a: Self, b: Self) -> Self {
        ModalFormula::And(Heap::new(a), Heap::new(b))
    }

    pub fn or(a: Self, b: Self) -> Self {
        ModalFormula::Or(Heap::new(a), Heap::new(b))
    }

    pub fn imp(a: Self, b: Self) -> Self {
        ModalFormula::Imp(Heap::new(a), Heap::new(b))
    }

    pub fn iff(a: Self, b: Self) -> Self {
        ModalFormula::Iff(Heap::new(a), Heap::new(b))
    }

    pub fn boxed(f: Self) -> Self {
        ModalFormula::Box(Heap::new(f))
    }

    pub fn dia(f: Self) -> Self {
        ModalFormula::Dia(Heap::new(f))
    }

    /// Left-nested conjunction; `true` when empty.
    pub fn conj<I: IntoIterator<Item = Self>>(items: I) -> Self {
        items
            .into_iter()
            .reduce(ModalFormula::and)
            .unwrap_or(ModalFormula::True)
    }

    /// Left-nested disjunction; `false` when empty.
    pub fn disj<I: IntoIterator<Item = Self>>(items: I) -> Self {
        items
            .into_iter()
            .reduce(ModalFormula::or)
            .unwrap_or(ModalFormula::False)
    }

    /// Maximal nesting of modal operators.
    pub fn modal_depth(&self) -> usize {
        use ModalFormula::*;
        match self {
            Var(_) | True | False => 0,
            Not(c) => c.modal_depth(),
            And(a, b) | Or(a, b) | Imp(a, b) | Iff(a, b) => a.modal_depth().max(b.modal_depth()),
            Box(c) | Dia(c) => 1 + c.modal_depth(),
        }
    }

    pub fn variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_variables(&mut out);
        out
    }

    fn collect_variables(&self, out: &mut BTreeSet<String>) {
        use ModalFormula::*;
        match self {
            Var(v) => {
                if !out.contains(v) {
                    out.insert(v.clone());
                }
            }
            True | False => {}
            Not(c) | Box(c) | Dia(c) => c.collect_variables(out),
            And(a, b) | Or(a, b) | Imp(a, b) | Iff(a, b) => {
                a.collect_variables(out);
                b.collect_variables(out);
            }
        }
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        use ModalFormula::*;
        match self {
            Var(_) | True | False => 1,
            Not(c) | Box(c) | Dia(c) => 1 + c.size(),
            And(a, b) | Or(a, b) | Imp(a, b) | Iff(a, b) => 1 + a.size() + b.size(),
        }
    }

    /// Immediate subformulas, left to right.
    pub fn children(&self) -> impl Iterator<Item = &ModalFormula> {
        use ModalFormula::*;
        let (a, b): (Option<&ModalFormula>, Option<&ModalFormula>) = match self {
            Var(_) | True | False => (None, None),
            Not(c) | Box(c) | Dia(c) => (Some(c), None),
            And(a, b) | Or(a, b) | Imp(a, b) | Iff(a, b) => (Some(a), Some(b)),
        };
        a.into_iter().chain(b)
    }

    /// First variable carrying the reserved prefix, if any.
    pub fn reserved_variable(&self) -> Option<String> {
        self.variables()
            .into_iter()
            .find(|v| v.starts_with(RESERVED_PREFIX))
    }

    fn precedence(&self) -> u8 {
        use ModalFormula::*;
        match self {
            Iff(..) => 1,
            Imp(..) => 2,
            Or(..) => 3,
            And(..) => 4,
            _ => 5,
        }
    }

    fn write_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        use ModalFormula::*;
        let paren = self.precedence() < min;
        if paren {
            f.write_str("(")?;
        }
        match self {
            Var(v) => f.write_str(v)?,
            True => f.write_str("true")?,
            False => f.write_str("false")?,
            Not(c) => {
                f.write_str("!")?;
                c.write_at(f, 5)?;
            }
            Box(c) => {
                f.write_str("[]")?;
                c.write_at(f, 5)?;
            }
            Dia(c) => {
                f.write_str("<>")?;
                c.write_at(f, 5)?;
            }
            And(a, b) => {
                a.write_at(f, 4)?;
                f.write_str(" & ")?;
                b.write_at(f, 5)?;
            }
            Or(a, b) => {
                a.write_at(f, 3)?;
                f.write_str(" | ")?;
                b.write_at(f, 4)?;
            }
            Imp(a, b) => {
                a.write_at(f, 3)?;
                f.write_str(" -> ")?;
                b.write_at(f, 2)?;
            }
            Iff(a, b) => {
                a.write_at(f, 1)?;
                f.write_str(" <-> ")?;
                b.write_at(f, 2)?;
            }
        }
        if paren {
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// Precedence-minimal rendering; parsing it back yields the same tree.
impl fmt::Display for ModalFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, 0)
    }
}

impl FromStr for ModalFormula {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_modal(s)
    }
}

pub fn parse_modal(text: &str) -> Result<ModalFormula> {
    let mut cur = Cursor::new(text)?;
    let f = parse_iff(&mut cur)?;
    cur.finish()?;
    Ok(f)
}

pub fn render_modal(f: &ModalFormula) -> String {
    f.to_string()
}

fn parse_iff(cur: &mut Cursor<'_>) -> Result<ModalFormula> {
    let mut lhs = parse_imp(cur)?;
    while cur.eat(&Tok::Iff) {
        let rhs = parse_imp(cur)?;
        lhs = ModalFormula::iff(lhs, rhs);
    }
    Ok(lhs)
}

fn parse_imp(cur: &mut Cursor<'_>) -> Result<ModalFormula> {
    let lhs = parse_or(cur)?;
    if cur.eat(&Tok::Imp) {
        let rhs = parse_imp(cur)?;
        Ok(ModalFormula::imp(lhs, rhs))
    } else {
        Ok(lhs)
    }
}

fn parse_or(cur: &mut Cursor<'_>) -> Result<ModalFormula> {
    let mut lhs = parse_and(cur)?;
    while cur.eat(&Tok::Or) {
        let rhs = parse_and(cur)?;
        lhs = ModalFormula::or(lhs, rhs);
    }
    Ok(lhs)
}

fn parse_and(cur: &mut Cursor<'_>) -> Result<ModalFormula> {
    let mut lhs = parse_unary(cur)?;
    while cur.eat(&Tok::And) {
        let rhs = parse_unary(cur)?;
        lhs = ModalFormula::and(lhs, rhs);
    }
    Ok(lhs)
}

fn parse_unary(cur: &mut Cursor<'_>) -> Result<ModalFormula> {
    match cur.peek() {
        Some(Tok::Not) => {
            cur.bump();
            Ok(ModalFormula::not(parse_unary(cur)?))
        }
        Some(Tok::Box) => {
            cur.bump();
            Ok(ModalFormula::boxed(parse_unary(cur)?))
        }
        Some(Tok::Dia) => {
            cur.bump();
            Ok(ModalFormula::dia(parse_unary(cur)?))
        }
        _ => parse_atom(cur),
    }
}

fn parse_atom(cur: &mut Cursor<'_>) -> Result<ModalFormula> {
    match cur.peek() {
        Some(Tok::True) => {
            cur.bump();
            Ok(ModalFormula::True)
        }
        Some(Tok::False) => {
            cur.bump();
            Ok(ModalFormula::False)
        }
        Some(Tok::Ident(_)) => match cur.bump() {
            Some(Tok::Ident(name)) => Ok(ModalFormula::Var(name)),
            _ => unreachable!(),
        },
        Some(Tok::LParen) => {
            cur.bump();
            let f = parse_iff(cur)?;
            cur.expect(&Tok::RParen)?;
            Ok(f)
        }
        _ => Err(cur.unexpected("a formula")),
    }
}
