//! Universal first-order frame conditions.
//!
//! A kernel is the quantifier-free body of a universal sentence over the
//! frame language: atoms `R(xi,xj)` (an edge from the world assigned to
//! `xi` to the one assigned to `xj`) and, outside the basic language,
//! `=(xi,xj)`. Every variable `x1..xk` is implicitly universally quantified.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::kripke::Frame;
use crate::syntax::{syntax_error, Cursor, Tok};

/// Variable indices are 1-based, as in `x1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FoExpr {
    True,
    False,
    Edge(usize, usize),
    Eq(usize, usize),
    Not(Box<FoExpr>),
    And(Box<FoExpr>, Box<FoExpr>),
    Or(Box<FoExpr>, Box<FoExpr>),
    Imp(Box<FoExpr>, Box<FoExpr>),
    Iff(Box<FoExpr>, Box<FoExpr>),
}

impl FoExpr {
    pub fn edge(i: usize, j: usize) -> Self {
        FoExpr::Edge(i, j)
    }

    /// `xi ~ xj`, i.e. `R(xi,xj) & R(xj,xi)`.
    pub fn sim(i: usize, j: usize) -> Self {
        FoExpr::and(FoExpr::Edge(i, j), FoExpr::Edge(j, i))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(e: Self) -> Self {
        FoExpr::Not(Box::new(e))
    }

    pub fn and(a: Self, b: Self) -> Self {
        FoExpr::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Self, b: Self) -> Self {
        FoExpr::Or(Box::new(a), Box::new(b))
    }

    pub fn imp(a: Self, b: Self) -> Self {
        FoExpr::Imp(Box::new(a), Box::new(b))
    }

    pub fn conj<I: IntoIterator<Item = Self>>(items: I) -> Self {
        items
            .into_iter()
            .reduce(FoExpr::and)
            .unwrap_or(FoExpr::True)
    }

    pub fn disj<I: IntoIterator<Item = Self>>(items: I) -> Self {
        items
            .into_iter()
            .reduce(FoExpr::or)
            .unwrap_or(FoExpr::False)
    }

    pub fn uses_equality(&self) -> bool {
        use FoExpr::*;
        match self {
            True | False | Edge(..) => false,
            Eq(..) => true,
            Not(a) => a.uses_equality(),
            And(a, b) | Or(a, b) | Imp(a, b) | Iff(a, b) => a.uses_equality() || b.uses_equality(),
        }
    }

    /// Largest variable index mentioned; 0 for closed bodies.
    pub fn max_var(&self) -> usize {
        use FoExpr::*;
        match self {
            True | False => 0,
            Edge(i, j) | Eq(i, j) => (*i).max(*j),
            Not(a) => a.max_var(),
            And(a, b) | Or(a, b) | Imp(a, b) | Iff(a, b) => a.max_var().max(b.max_var()),
        }
    }

    fn min_var(&self) -> Option<usize> {
        use FoExpr::*;
        match self {
            True | False => None,
            Edge(i, j) | Eq(i, j) => Some((*i).min(*j)),
            Not(a) => a.min_var(),
            And(a, b) | Or(a, b) | Imp(a, b) | Iff(a, b) => match (a.min_var(), b.min_var()) {
                (Some(x), Some(y)) => Some(x.min(y)),
                (x, y) => x.or(y),
            },
        }
    }

    /// Two-valued evaluation under a total assignment (`vals[i - 1]` is `xi`).
    pub fn eval(&self, frame: &Frame, vals: &[usize]) -> bool {
        use FoExpr::*;
        match self {
            True => true,
            False => false,
            Edge(i, j) => frame.has_edge(vals[i - 1], vals[j - 1]),
            Eq(i, j) => vals[i - 1] == vals[j - 1],
            Not(a) => !a.eval(frame, vals),
            And(a, b) => a.eval(frame, vals) && b.eval(frame, vals),
            Or(a, b) => a.eval(frame, vals) || b.eval(frame, vals),
            Imp(a, b) => !a.eval(frame, vals) || b.eval(frame, vals),
            Iff(a, b) => a.eval(frame, vals) == b.eval(frame, vals),
        }
    }

    /// Kleene evaluation when only `x1..x{assigned}` carry values.
    fn eval_partial(&self, frame: &Frame, vals: &[usize], assigned: usize) -> Tri {
        use FoExpr::*;
        match self {
            True => Tri::True,
            False => Tri::False,
            Edge(i, j) => {
                if *i <= assigned && *j <= assigned {
                    frame.has_edge(vals[i - 1], vals[j - 1]).into()
                } else {
                    Tri::Unknown
                }
            }
            Eq(i, j) => {
                if i == j {
                    Tri::True
                } else if *i <= assigned && *j <= assigned {
                    (vals[i - 1] == vals[j - 1]).into()
                } else {
                    Tri::Unknown
                }
            }
            Not(a) => a.eval_partial(frame, vals, assigned).not(),
            And(a, b) => match a.eval_partial(frame, vals, assigned) {
                Tri::False => Tri::False,
                ta => ta.and(b.eval_partial(frame, vals, assigned)),
            },
            Or(a, b) => match a.eval_partial(frame, vals, assigned) {
                Tri::True => Tri::True,
                ta => ta.or(b.eval_partial(frame, vals, assigned)),
            },
            Imp(a, b) => match a.eval_partial(frame, vals, assigned) {
                Tri::False => Tri::True,
                ta => ta.not().or(b.eval_partial(frame, vals, assigned)),
            },
            Iff(a, b) => {
                let ta = a.eval_partial(frame, vals, assigned);
                if ta == Tri::Unknown {
                    return Tri::Unknown;
                }
                let tb = b.eval_partial(frame, vals, assigned);
                match (ta, tb) {
                    (_, Tri::Unknown) => Tri::Unknown,
                    (x, y) => (x == y).into(),
                }
            }
        }
    }

    fn write_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        use FoExpr::*;
        let prec = match self {
            Iff(..) => 1,
            Imp(..) => 2,
            Or(..) => 3,
            And(..) => 4,
            _ => 5,
        };
        if prec < min {
            f.write_str("(")?;
        }
        match self {
            True => f.write_str("true")?,
            False => f.write_str("false")?,
            Edge(i, j) => write!(f, "R(x{i},x{j})")?,
            Eq(i, j) => write!(f, "=(x{i},x{j})")?,
            Not(a) => {
                f.write_str("!")?;
                a.write_at(f, 5)?;
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
        if prec < min {
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for FoExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, 0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Tri {
    False,
    Unknown,
    True,
}

impl From<bool> for Tri {
    fn from(b: bool) -> Self {
        if b {
            Tri::True
        } else {
            Tri::False
        }
    }
}

impl Tri {
    fn not(self) -> Tri {
        match self {
            Tri::False => Tri::True,
            Tri::Unknown => Tri::Unknown,
            Tri::True => Tri::False,
        }
    }

    fn and(self, o: Tri) -> Tri {
        match (self, o) {
            (Tri::False, _) | (_, Tri::False) => Tri::False,
            (Tri::True, Tri::True) => Tri::True,
            _ => Tri::Unknown,
        }
    }

    fn or(self, o: Tri) -> Tri {
        match (self, o) {
            (Tri::True, _) | (_, Tri::True) => Tri::True,
            (Tri::False, Tri::False) => Tri::False,
            _ => Tri::Unknown,
        }
    }
}

/// Quantifier-free body of a universal sentence over `x1..x{var_count}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FoKernel {
    name: String,
    var_count: usize,
    body: FoExpr,
}

impl FoKernel {
    pub fn new(name: impl Into<String>, var_count: usize, body: FoExpr) -> Result<Self> {
        if let Some(v) = body.min_var() {
            if v == 0 {
                return Err(Error::Kernel("variable indices start at x1".into()));
            }
        }
        if body.max_var() > var_count {
            return Err(Error::Kernel(format!(
                "body mentions x{} but only {var_count} variables are declared",
                body.max_var()
            )));
        }
        Ok(FoKernel {
            name: name.into(),
            var_count,
            body,
        })
    }

    /// The kernel `true`.
    pub fn truth() -> Self {
        FoKernel {
            name: "true".into(),
            var_count: 0,
            body: FoExpr::True,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn var_count(&self) -> usize {
        self.var_count
    }

    pub fn body(&self) -> &FoExpr {
        &self.body
    }

    pub fn uses_equality(&self) -> bool {
        self.body.uses_equality()
    }

    /// Expressible in the frame language without equality.
    pub fn is_basic(&self) -> bool {
        !self.uses_equality()
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Conjunction; the shorter variable list is padded with unused
    /// universals.
    pub fn conjoin(&self, other: &FoKernel) -> FoKernel {
        FoKernel {
            name: format!("{} & {}", self.name, other.name),
            var_count: self.var_count.max(other.var_count),
            body: FoExpr::and(self.body.clone(), other.body.clone()),
        }
    }
}

impl fmt::Display for FoKernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.body.fmt(f)
    }
}

/// `(R(x1,x1) & .. & R(xk,xk)) -> body`: the condition restricted to the
/// reflexive worlds of a frame.
pub fn relativize_to_reflexive(k: &FoKernel) -> FoKernel {
    let guard = FoExpr::conj((1..=k.var_count).map(|i| FoExpr::edge(i, i)));
    FoKernel {
        name: format!("refl({})", k.name),
        var_count: k.var_count,
        body: FoExpr::imp(guard, k.body.clone()),
    }
}

/// Whether `frame` satisfies the universal closure of `k`.
pub fn eval_universal(frame: &Frame, k: &FoKernel) -> bool {
    find_violation(frame, k).is_none()
}

/// Lexicographically first falsifying assignment `(x1, .., xk)`, if any.
///
/// Variables are bound in index order and the body is evaluated three-valued
/// after each binding, so a subtree is abandoned as soon as an antecedent
/// fails or the consequent is already forced.
pub fn find_violation(frame: &Frame, k: &FoKernel) -> Option<Vec<usize>> {
    let n = frame.world_count();
    if n == 0 {
        return None;
    }
    let mut vals = vec![0usize; k.var_count];
    if descend(frame, &k.body, &mut vals, 0) {
        Some(vals)
    } else {
        None
    }
}

fn descend(frame: &Frame, body: &FoExpr, vals: &mut [usize], assigned: usize) -> bool {
    match body.eval_partial(frame, vals, assigned) {
        Tri::True => false,
        Tri::False => {
            for v in &mut vals[assigned..] {
                *v = 0;
            }
            true
        }
        Tri::Unknown => {
            for w in 0..frame.world_count() {
                vals[assigned] = w;
                if descend(frame, body, vals, assigned + 1) {
                    return true;
                }
            }
            false
        }
    }
}

pub const BUILTIN_NAMES: [&str; 7] = [
    "phi_1step",
    "phi_2step",
    "phi_eq",
    "phi_grid",
    "phi_univ",
    "phi_final",
    "phi_prior_eq",
];

pub fn builtin(name: &str) -> Result<FoKernel> {
    let k = match name {
        "phi_1step" => phi_1step(),
        "phi_2step" => phi_2step(),
        "phi_eq" => phi_eq(),
        "phi_grid" => phi_grid(),
        "phi_univ" => phi_univ(),
        "phi_final" => phi_final(),
        "phi_prior_eq" => phi_prior_eq(),
        _ => return Err(Error::UnknownBuiltin(name.into())),
    };
    Ok(k)
}

pub fn builtins() -> Vec<FoKernel> {
    BUILTIN_NAMES
        .iter()
        .map(|n| builtin(n).expect("built-in names resolve"))
        .collect()
}

fn named(name: &str, var_count: usize, body: FoExpr) -> FoKernel {
    FoKernel {
        name: name.into(),
        var_count,
        body,
    }
}

// x = x1, y1..y3 = x2..x4.
fn phi_1step() -> FoKernel {
    let ys = [2, 3, 4];
    let antecedent = FoExpr::conj(ys.iter().map(|&y| FoExpr::edge(1, y)));
    let consequent = FoExpr::disj(
        ys.iter()
            .map(|&y| FoExpr::sim(1, y))
            .chain(pairs(&ys).map(|(a, b)| FoExpr::sim(a, b))),
    );
    named("phi_1step", 4, FoExpr::imp(antecedent, consequent))
}

// x = x1, y1..y4 = x2..x5, z1..z4 = x6..x9.
fn phi_2step() -> FoKernel {
    let ys = [2, 3, 4, 5];
    let zs = [6, 7, 8, 9];
    let antecedent = FoExpr::conj(
        ys.iter()
            .zip(&zs)
            .map(|(&y, &z)| FoExpr::and(FoExpr::edge(1, y), FoExpr::edge(y, z))),
    );
    let consequent = FoExpr::disj(
        ys.iter()
            .map(|&y| FoExpr::sim(1, y))
            .chain(ys.iter().zip(&zs).map(|(&y, &z)| FoExpr::sim(y, z)))
            .chain(pairs(&zs).map(|(a, b)| FoExpr::sim(a, b))),
    );
    named("phi_2step", 9, FoExpr::imp(antecedent, consequent))
}

// x = x1, y = x2, z = x3.
fn phi_eq() -> FoKernel {
    let out = FoExpr::imp(
        FoExpr::and(FoExpr::sim(1, 2), FoExpr::edge(2, 3)),
        FoExpr::edge(1, 3),
    );
    let inc = FoExpr::imp(
        FoExpr::and(FoExpr::sim(1, 2), FoExpr::edge(3, 2)),
        FoExpr::edge(3, 1),
    );
    named("phi_eq", 3, FoExpr::and(out, inc))
}

fn phi_grid() -> FoKernel {
    named(
        "phi_grid",
        9,
        FoExpr::conj([phi_1step().body, phi_2step().body, phi_eq().body]),
    )
}

// w_u = x1, x = x2, y = x3.
fn phi_univ() -> FoKernel {
    let loops_in = FoExpr::imp(FoExpr::edge(2, 3), FoExpr::edge(3, 3));
    let universal = FoExpr::imp(
        FoExpr::not(FoExpr::edge(1, 1)),
        FoExpr::imp(FoExpr::edge(2, 3), FoExpr::edge(1, 3)),
    );
    named("phi_univ", 3, FoExpr::and(loops_in, universal))
}

fn phi_final() -> FoKernel {
    phi_univ()
        .conjoin(&relativize_to_reflexive(&phi_grid()))
        .renamed("phi_final")
}

// Same variable layout as phi_1step / phi_2step, with equality in place of ~.
fn phi_prior_eq() -> FoKernel {
    let ys3 = [2, 3, 4];
    let one = FoExpr::imp(
        FoExpr::conj(ys3.iter().map(|&y| FoExpr::edge(1, y))),
        FoExpr::disj(pairs(&ys3).map(|(a, b)| FoExpr::Eq(a, b))),
    );
    let ys = [2, 3, 4, 5];
    let zs = [6, 7, 8, 9];
    let two = FoExpr::imp(
        FoExpr::conj(
            ys.iter()
                .zip(&zs)
                .map(|(&y, &z)| FoExpr::and(FoExpr::edge(1, y), FoExpr::edge(y, z))),
        ),
        FoExpr::disj(pairs(&zs).map(|(a, b)| FoExpr::Eq(a, b))),
    );
    named("phi_prior_eq", 9, FoExpr::and(one, two))
}

fn pairs(xs: &[usize]) -> impl Iterator<Item = (usize, usize)> + '_ {
    xs.iter()
        .enumerate()
        .flat_map(move |(i, &a)| xs[i + 1..].iter().map(move |&b| (a, b)))
}

/// Parses a kernel body such as `R(x1,x2) -> R(x2,x1)`. The variable count
/// is the highest index used.
pub fn parse_kernel_body(text: &str) -> Result<FoKernel> {
    let body = parse_fo_expr(text)?;
    let k = body.max_var();
    FoKernel::new("kernel", k, body)
}

pub fn parse_fo_expr(text: &str) -> Result<FoExpr> {
    let mut cur = Cursor::new(text)?;
    let e = fo_iff(&mut cur)?;
    cur.finish()?;
    Ok(e)
}

fn fo_iff(cur: &mut Cursor<'_>) -> Result<FoExpr> {
    let mut lhs = fo_imp(cur)?;
    while cur.eat(&Tok::Iff) {
        let rhs = fo_imp(cur)?;
        lhs = FoExpr::Iff(Box::new(lhs), Box::new(rhs));
    }
    Ok(lhs)
}

fn fo_imp(cur: &mut Cursor<'_>) -> Result<FoExpr> {
    let lhs = fo_or(cur)?;
    if cur.eat(&Tok::Imp) {
        Ok(FoExpr::imp(lhs, fo_imp(cur)?))
    } else {
        Ok(lhs)
    }
}

fn fo_or(cur: &mut Cursor<'_>) -> Result<FoExpr> {
    let mut lhs = fo_and(cur)?;
    while cur.eat(&Tok::Or) {
        lhs = FoExpr::or(lhs, fo_and(cur)?);
    }
    Ok(lhs)
}

fn fo_and(cur: &mut Cursor<'_>) -> Result<FoExpr> {
    let mut lhs = fo_unary(cur)?;
    while cur.eat(&Tok::And) {
        lhs = FoExpr::and(lhs, fo_unary(cur)?);
    }
    Ok(lhs)
}

fn fo_unary(cur: &mut Cursor<'_>) -> Result<FoExpr> {
    if cur.eat(&Tok::Not) {
        return Ok(FoExpr::not(fo_unary(cur)?));
    }
    match cur.peek() {
        Some(Tok::True) => {
            cur.bump();
            Ok(FoExpr::True)
        }
        Some(Tok::False) => {
            cur.bump();
            Ok(FoExpr::False)
        }
        Some(Tok::LParen) => {
            cur.bump();
            let e = fo_iff(cur)?;
            cur.expect(&Tok::RParen)?;
            Ok(e)
        }
        Some(Tok::Equals) => {
            cur.bump();
            let (i, j) = fo_args(cur)?;
            Ok(FoExpr::Eq(i, j))
        }
        Some(Tok::Ident(s)) if s == "R" => {
            cur.bump();
            let (i, j) = fo_args(cur)?;
            Ok(FoExpr::Edge(i, j))
        }
        _ => Err(cur.unexpected("`R(..)`, `=(..)`, `true`, `false`, `!` or `(`")),
    }
}

fn fo_args(cur: &mut Cursor<'_>) -> Result<(usize, usize)> {
    cur.expect(&Tok::LParen)?;
    let i = fo_var(cur)?;
    cur.expect(&Tok::Comma)?;
    let j = fo_var(cur)?;
    cur.expect(&Tok::RParen)?;
    Ok((i, j))
}

fn fo_var(cur: &mut Cursor<'_>) -> Result<usize> {
    let at = cur.offset();
    match cur.bump() {
        Some(Tok::Ident(s)) => s
            .strip_prefix('x')
            .and_then(|d| d.parse::<usize>().ok())
            .filter(|&i| i >= 1)
            .ok_or_else(|| {
                syntax_error(
                    cur.src,
                    at,
                    format!("expected a variable x1, x2, .., found `{s}`"),
                )
            }),
        _ => Err(syntax_error(cur.src, at, "expected a variable x1, x2, ..")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn star() -> Frame {
        Frame::with_edges(4, [(0, 1), (0, 2), (0, 3)]).unwrap()
    }

    fn grid_fragment(size: usize) -> Frame {
        let idx = |i: usize, j: usize| i + size * j;
        let mut f = Frame::new(size * size);
        for j in 0..size {
            for i in 0..size {
                if i + 1 < size {
                    f.add_edge(idx(i, j), idx(i + 1, j));
                }
                if j + 1 < size {
                    f.add_edge(idx(i, j), idx(i, j + 1));
                }
            }
        }
        f
    }

    /// Plain lexicographic enumeration of all assignments.
    fn brute_violation(frame: &Frame, k: &FoKernel) -> Option<Vec<usize>> {
        let n = frame.world_count();
        let total = n.pow(k.var_count() as u32);
        (0..total)
            .map(|mut code| {
                let mut vals = vec![0; k.var_count()];
                for slot in vals.iter_mut().rev() {
                    *slot = code % n;
                    code /= n;
                }
                vals
            })
            .find(|vals| !k.body().eval(frame, vals))
    }

    #[test]
    fn builtin_shapes() {
        assert_eq!(builtin("phi_1step").unwrap().var_count(), 4);
        assert_eq!(builtin("phi_2step").unwrap().var_count(), 9);
        assert_eq!(builtin("phi_eq").unwrap().var_count(), 3);
        assert_eq!(builtin("phi_univ").unwrap().var_count(), 3);
        assert_eq!(builtin("phi_grid").unwrap().var_count(), 9);
        assert!(builtin("phi_final").unwrap().is_basic());
        for k in builtins() {
            assert_eq!(
                k.uses_equality(),
                k.name() == "phi_prior_eq",
                "{}",
                k.name()
            );
        }
        assert!(matches!(builtin("phi_nope"), Err(Error::UnknownBuiltin(_))));
    }

    #[test]
    fn star_violates_one_step() {
        let k = builtin("phi_1step").unwrap();
        assert!(!eval_universal(&star(), &k));
        // Repeating a successor is already a violation: the successors are
        // irreflexive, so y1 ~ y1 fails.
        assert_eq!(find_violation(&star(), &k), Some(vec![0, 1, 1, 1]));
        assert_eq!(find_violation(&star(), &k), brute_violation(&star(), &k));
        assert!(!k.body().eval(&star(), &[0, 1, 2, 3]));
        // With distinct successors forced via equality-free reasoning the
        // reflexive star still has three pairwise unrelated successors.
        let refl = star().reflexive_closure();
        let v = find_violation(&refl, &k).unwrap();
        assert!(!k.body().eval(&refl, &v));
    }

    #[test]
    fn trivial_kernels() {
        let t = FoKernel::truth();
        assert!(eval_universal(&star(), &t));
        assert!(eval_universal(
            &Frame::new(0),
            &builtin("phi_grid").unwrap()
        ));
        let loop1 = Frame::with_edges(1, [(0, 0)]).unwrap();
        assert_eq!(find_violation(&loop1, &builtin("phi_eq").unwrap()), None);
        let sym = parse_kernel_body("R(x1,x2) -> R(x2,x1)").unwrap();
        let chain = Frame::with_edges(3, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(find_violation(&chain, &sym), Some(vec![0, 1]));
    }

    #[test]
    fn reflexive_grid_fragment_satisfies_phi_grid() {
        let f = grid_fragment(3).reflexive_closure();
        let k = builtin("phi_grid").unwrap();
        assert!(eval_universal(&f, &k));
        assert_eq!(brute_violation(&f, &builtin("phi_1step").unwrap()), None);
        assert_eq!(brute_violation(&f, &builtin("phi_eq").unwrap()), None);
    }

    #[test]
    fn relativization() {
        let grid = builtin("phi_grid").unwrap();
        let refl = relativize_to_reflexive(&grid);
        assert_eq!(refl.var_count(), 9);
        // No reflexive worlds: vacuous.
        assert!(eval_universal(&star(), &refl));
        assert!(eval_universal(
            &star(),
            &relativize_to_reflexive(&FoKernel::new("f", 1, FoExpr::False).unwrap())
        ));
        let loop1 = Frame::with_edges(1, [(0, 0)]).unwrap();
        let f = FoKernel::new("false", 0, FoExpr::False).unwrap();
        assert!(!eval_universal(&loop1, &relativize_to_reflexive(&f)));
        // The reflexive star's centre violates phi_grid; an irreflexive
        // centre hides it from the relativized kernel.
        let mut hidden = star().reflexive_closure();
        hidden.remove_edge(0, 0);
        assert!(!eval_universal(&star().reflexive_closure(), &refl));
        assert!(eval_universal(&hidden, &refl));
    }

    #[test]
    fn kernel_text_round_trip() {
        for k in builtins() {
            let text = k.body().to_string();
            let back = parse_fo_expr(&text).unwrap();
            assert_eq!(&back, k.body(), "{}", k.name());
        }
        let k = parse_kernel_body("=(x1,x3) | !R(x2,x2)").unwrap();
        assert_eq!(k.var_count(), 3);
        assert!(k.uses_equality());
        assert!(parse_kernel_body("R(x0,x1)").is_err());
        assert!(parse_kernel_body("R(y1,x1)").is_err());
        assert!(parse_kernel_body("R(x1 x2)").is_err());
        assert!(FoKernel::new("k", 1, FoExpr::edge(1, 2)).is_err());
    }

    #[test]
    fn pruned_search_matches_brute_force_on_small_frames() {
        let kernels = builtins();
        for n in 1..=2usize {
            for code in 0..(1u64 << (n * n)) {
                let f = Frame::from_code(n, code);
                for k in &kernels {
                    assert_eq!(
                        find_violation(&f, k),
                        brute_violation(&f, k),
                        "{} on {code}",
                        k.name()
                    );
                }
            }
        }
        // A sample of 3-world frames.
        for code in (0..512u64).step_by(7) {
            let f = Frame::from_code(3, code);
            for k in &kernels {
                assert_eq!(
                    find_violation(&f, k),
                    brute_violation(&f, k),
                    "{} on {code}",
                    k.name()
                );
            }
        }
    }
}
