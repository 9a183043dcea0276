//! Grid encoding: the mod-8 counter `d8`, the formulas that force
//! grid-like structure on reflexive `phi_grid` models, the translations `g`
//! and `f`, localization through an irreflexive universal world, and the
//! model constructions that witness both directions of the reduction.
//!
//! `d8` is stored in three bits with `__d8a` as the most significant. Moving
//! up in the grid adds 2, moving right adds 3, all modulo 8.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::abstraction::quotient;
use crate::error::{Error, Result, Violation};
use crate::fo::{builtin, find_violation};
use crate::formula::ModalFormula as F;
use crate::formula::RESERVED_PREFIX;
use crate::kripke::{global_counterexample, Frame, Model};

pub const D8_BITS: [&str; 3] = ["__d8a", "__d8b", "__d8c"];
pub const U_VAR: &str = "__u";

/// Value added when moving to the upper neighbour.
pub const UP_STEP: u8 = 2;
/// Value added when moving to the right neighbour.
pub const RIGHT_STEP: u8 = 3;

pub fn d8_bit_set() -> BTreeSet<String> {
    D8_BITS.iter().map(|s| s.to_string()).collect()
}

/// `d8 = d` as a conjunction of three literals.
pub fn d8_eq(d: u8) -> Result<F> {
    if d > 7 {
        return Err(Error::D8OutOfRange(d));
    }
    Ok(d8_lit(d))
}

fn d8_lit(d: u8) -> F {
    let d = d % 8;
    F::conj(D8_BITS.iter().enumerate().map(|(k, bit)| {
        let v = F::var(*bit);
        if d >> (2 - k) & 1 == 1 {
            v
        } else {
            F::not(v)
        }
    }))
}

/// The value of `d8` at `w`.
pub fn d8_value(m: &Model, w: usize) -> u8 {
    D8_BITS
        .iter()
        .fold(0u8, |acc, bit| (acc << 1) | u8::from(m.holds(bit, w)))
}

pub fn set_d8(m: &mut Model, w: usize, d: u8) {
    for (k, bit) in D8_BITS.iter().enumerate() {
        m.set(bit, w, (d % 8) >> (2 - k) & 1 == 1);
    }
}

fn reject_reserved(vars: &BTreeSet<String>) -> Result<()> {
    match vars.iter().find(|v| v.starts_with(RESERVED_PREFIX)) {
        Some(v) => Err(Error::ReservedName(v.clone())),
        None => Ok(()),
    }
}

/// How `psi_resp` treats the successor constraint on `d8`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RespVariant {
    /// One successor constraint per value of `d`, independent of `P`.
    #[default]
    Uniform,
    /// The constraint repeated inside every `p ∈ P` conjunct; empty `P`
    /// gives `true`.
    PerVariable,
}

pub fn psi_resp(p_set: &BTreeSet<String>) -> Result<F> {
    psi_resp_with(p_set, RespVariant::Uniform)
}

pub fn psi_resp_with(p_set: &BTreeSet<String>, variant: RespVariant) -> Result<F> {
    reject_reserved(p_set)?;
    let stay = |d: u8| {
        F::imp(
            d8_lit(d),
            F::boxed(F::disj([d8_lit(d), d8_lit(d + 2), d8_lit(d + 3)])),
        )
    };
    let keep = |d: u8, lit: F| F::imp(lit.clone(), F::boxed(F::imp(d8_lit(d), lit)));
    let mut parts = Vec::new();
    for d in 0..8u8 {
        match variant {
            RespVariant::Uniform => {
                parts.push(stay(d));
                for p in p_set {
                    parts.push(F::imp(d8_lit(d), keep(d, F::var(p.as_str()))));
                    parts.push(F::imp(d8_lit(d), keep(d, F::not(F::var(p.as_str())))));
                }
            }
            RespVariant::PerVariable => {
                for p in p_set {
                    parts.push(F::imp(
                        d8_lit(d),
                        F::conj([
                            F::boxed(F::disj([d8_lit(d), d8_lit(d + 2), d8_lit(d + 3)])),
                            keep(d, F::var(p.as_str())),
                            keep(d, F::not(F::var(p.as_str()))),
                        ]),
                    ));
                }
            }
        }
    }
    Ok(F::conj(parts))
}

/// Every world has a `+2` and a `+3` successor.
pub fn psi_succ() -> F {
    F::conj((0..8u8).map(|d| {
        F::imp(
            d8_lit(d),
            F::and(F::dia(d8_lit(d + UP_STEP)), F::dia(d8_lit(d + RIGHT_STEP))),
        )
    }))
}

/// `g`: boxes only look at successors whose `d8` value differs.
pub fn translate_g(psi: &F) -> Result<F> {
    if let Some(v) = psi.reserved_variable() {
        return Err(Error::ReservedName(v));
    }
    Ok(g(psi))
}

fn g(psi: &F) -> F {
    match psi {
        F::Var(_) | F::True | F::False => psi.clone(),
        F::Not(c) => F::not(g(c)),
        F::And(a, b) => F::and(g(a), g(b)),
        F::Or(a, b) => F::or(g(a), g(b)),
        F::Imp(a, b) => F::imp(g(a), g(b)),
        F::Iff(a, b) => F::iff(g(a), g(b)),
        F::Box(c) => g_box(g(c)),
        // <>c is !([]!c).
        F::Dia(c) => F::not(g_box(F::not(g(c)))),
    }
}

fn g_box(inner: F) -> F {
    F::conj((0..8u8).map(|d| {
        F::imp(
            d8_lit(d),
            F::boxed(F::imp(F::not(d8_lit(d)), inner.clone())),
        )
    }))
}

/// `f(ψ) = g(ψ) ∧ psi_resp(var ψ) ∧ psi_succ`.
pub fn reduce_f(psi: &F) -> Result<F> {
    reduce_f_with(psi, RespVariant::Uniform)
}

pub fn reduce_f_with(psi: &F, variant: RespVariant) -> Result<F> {
    let gp = translate_g(psi)?;
    let resp = psi_resp_with(&psi.variables(), variant)?;
    Ok(F::and(F::and(gp, resp), psi_succ()))
}

/// `__u ∧ []!__u ∧ []ψ`.
pub fn localize(psi: &F) -> Result<F> {
    if psi.variables().contains(U_VAR) {
        return Err(Error::ReservedName(U_VAR.into()));
    }
    let u = F::var(U_VAR);
    Ok(F::conj([
        u.clone(),
        F::boxed(F::not(u)),
        F::boxed(psi.clone()),
    ]))
}

/// Grid coordinates to world index on a `width`-wide torus or fragment.
pub fn grid_index(width: usize, i: usize, j: usize) -> usize {
    i + width * j
}

/// Assignment of grid points to variables.
pub type GridValuation = BTreeMap<String, BTreeSet<(usize, usize)>>;

fn check_torus_dims(width: usize, height: usize) -> Result<()> {
    if width == 0 || height == 0 || width % 8 != 0 || height % 4 != 0 {
        return Err(Error::TorusDimensions { width, height });
    }
    Ok(())
}

fn apply_grid_valuation(
    m: &mut Model,
    width: usize,
    height: usize,
    base: &GridValuation,
) -> Result<()> {
    for (var, points) in base {
        if var.starts_with(RESERVED_PREFIX) {
            return Err(Error::ReservedName(var.clone()));
        }
        for &(i, j) in points {
            if i >= width || j >= height {
                return Err(Error::WorldOutOfRange {
                    world: grid_index(width, i, j),
                    worlds: width * height,
                });
            }
            m.set(var, grid_index(width, i, j), true);
        }
    }
    Ok(())
}

/// The torus itself: right and up successors with wraparound, no loops.
pub fn make_torus_model(width: usize, height: usize, base: &GridValuation) -> Result<Model> {
    check_torus_dims(width, height)?;
    let mut frame = Frame::new(width * height);
    for j in 0..height {
        for i in 0..width {
            let w = grid_index(width, i, j);
            frame.add_edge(w, grid_index(width, (i + 1) % width, j));
            frame.add_edge(w, grid_index(width, i, (j + 1) % height));
        }
    }
    let mut m = Model::new(frame);
    apply_grid_valuation(&mut m, width, height, base)?;
    Ok(m)
}

/// Reflexive closure of the torus with `d8(i,j) = 3i + 2j mod 8`.
pub fn make_torus_hat_model(width: usize, height: usize, base: &GridValuation) -> Result<Model> {
    let plain = make_torus_model(width, height, base)?;
    let mut m = plain.with_frame(plain.frame().reflexive_closure());
    for j in 0..height {
        for i in 0..width {
            let d = ((RIGHT_STEP as usize * i + UP_STEP as usize * j) % 8) as u8;
            set_d8(&mut m, grid_index(width, i, j), d);
        }
    }
    Ok(m)
}

/// Adds an irreflexive world with an edge to every old world; `__u` holds
/// exactly there. Returns the new model and the index of that world.
pub fn add_universal_world(m: &Model) -> Result<(Model, usize)> {
    if let Some(world) = m.frame().first_irreflexive() {
        return Err(Error::Precondition(Violation::NotReflexive { world }));
    }
    if m.variables().contains(U_VAR) {
        return Err(Error::Precondition(Violation::ReservedVariable {
            name: U_VAR.into(),
        }));
    }
    let n = m.world_count();
    let mut frame = Frame::new(n + 1);
    for (i, j) in m.frame().edges() {
        frame.add_edge(i, j);
    }
    for w in 0..n {
        frame.add_edge(n, w);
    }
    let mut out = Model::new(frame);
    for var in m.variables() {
        for w in m.truth_set(&var) {
            out.set(&var, w, true);
        }
    }
    out.set(U_VAR, n, true);
    Ok((out, n))
}

/// The submodel on the direct successors of the irreflexive world `w_u`.
/// Returns the model and, for each new world, its index in `m`.
pub fn extract_generated_submodel(m: &Model, w_u: usize) -> Result<(Model, Vec<usize>)> {
    if w_u >= m.world_count() {
        return Err(Error::WorldOutOfRange {
            world: w_u,
            worlds: m.world_count(),
        });
    }
    if m.frame().has_edge(w_u, w_u) {
        return Err(Error::Precondition(Violation::Reflexive { world: w_u }));
    }
    let worlds: Vec<usize> = m.frame().successors(w_u).collect();
    Ok((m.induced_submodel(&worlds), worlds))
}

/// Checks the hypotheses under which `degrid` is meaningful: reflexive,
/// `phi_grid`, and `psi_resp(P)` globally.
pub fn check_grid_hypotheses(m: &Model, p_set: &BTreeSet<String>) -> Result<()> {
    reject_reserved(p_set)?;
    if let Some(world) = m.frame().first_irreflexive() {
        return Err(Error::Precondition(Violation::NotReflexive { world }));
    }
    let grid = builtin("phi_grid")?;
    if let Some(assignment) = find_violation(m.frame(), &grid) {
        return Err(Error::Precondition(Violation::Kernel {
            name: grid.name().into(),
            assignment,
        }));
    }
    let resp = psi_resp(p_set)?;
    if let Some(world) = global_counterexample(m, &resp) {
        return Err(Error::Precondition(Violation::NotGlobal {
            formula: "psi_resp".into(),
            world,
        }));
    }
    Ok(())
}

/// `M/~` over `P ∪ d8` with every edge between equal `d8` values removed.
pub fn degrid(m: &Model, p_set: &BTreeSet<String>) -> Result<Model> {
    check_grid_hypotheses(m, p_set)?;
    let mut vars = p_set.clone();
    vars.extend(d8_bit_set());
    let q = quotient(m, &vars)?;
    let mut frame = q.frame().clone();
    for (a, b) in q.frame().edges() {
        if d8_value(&q, a) == d8_value(&q, b) {
            frame.remove_edge(a, b);
        }
    }
    Ok(q.with_frame(frame))
}

/// The unique successor of `w` whose `d8` value is `d8(w) + step`.
pub fn step_successor(m: &Model, w: usize, step: u8) -> Result<usize> {
    let want = (d8_value(m, w) + step) % 8;
    let mut hits = m.frame().successors(w).filter(|&v| d8_value(m, v) == want);
    match (hits.next(), hits.next()) {
        (Some(v), None) => Ok(v),
        (None, _) => Err(Error::Unfold {
            world: w,
            reason: format!("no +{step} successor"),
        }),
        (Some(a), Some(b)) => Err(Error::Unfold {
            world: w,
            reason: format!("ambiguous +{step} successor ({a} and {b})"),
        }),
    }
}

/// Unfolds a degridded model into the `(k+1) x (k+1)` grid fragment rooted
/// at `start`, following `+3` successors to the right and `+2` successors
/// up. Fragment world `(i, j)` has index `i + (k+1) j` and copies the
/// valuation of its source; the second return value lists the sources.
pub fn unfold_grid_fragment(m0: &Model, start: usize, k: usize) -> Result<(Model, Vec<usize>)> {
    if start >= m0.world_count() {
        return Err(Error::WorldOutOfRange {
            world: start,
            worlds: m0.world_count(),
        });
    }
    let side = k + 1;
    let mut src = vec![usize::MAX; side * side];
    src[0] = start;
    for i in 1..side {
        src[grid_index(side, i, 0)] =
            step_successor(m0, src[grid_index(side, i - 1, 0)], RIGHT_STEP)?;
    }
    for j in 1..side {
        for i in 0..side {
            let below = src[grid_index(side, i, j - 1)];
            let up = step_successor(m0, below, UP_STEP)?;
            if i > 0 {
                let left = src[grid_index(side, i - 1, j)];
                let right = step_successor(m0, left, RIGHT_STEP)?;
                if right != up {
                    return Err(Error::Unfold {
                        world: src[grid_index(side, i - 1, j - 1)],
                        reason: format!(
                            "up-then-right reaches {right} but right-then-up reaches {up}"
                        ),
                    });
                }
            }
            src[grid_index(side, i, j)] = up;
        }
    }
    let mut frame = Frame::new(side * side);
    for j in 0..side {
        for i in 0..side {
            let w = grid_index(side, i, j);
            if i + 1 < side {
                frame.add_edge(w, grid_index(side, i + 1, j));
            }
            if j + 1 < side {
                frame.add_edge(w, grid_index(side, i, j + 1));
            }
        }
    }
    let mut out = Model::new(frame);
    for var in m0.variables() {
        for (w, &s) in src.iter().enumerate() {
            if m0.holds(&var, s) {
                out.set(&var, w, true);
            }
        }
    }
    Ok((out, src))
}

/// Interior worlds `(i, j)`, `i, j < k`, of a `(k+1) x (k+1)` fragment.
pub fn fragment_interior(k: usize) -> impl Iterator<Item = usize> {
    (0..k).flat_map(move |j| (0..k).map(move |i| grid_index(k + 1, i, j)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abstraction::{compute_partition, respects};
    use crate::fo::eval_universal;
    use crate::formula::parse_modal;
    use crate::kripke::{check, check_global};

    fn f(s: &str) -> F {
        parse_modal(s).unwrap()
    }

    fn set(vars: &[&str]) -> BTreeSet<String> {
        vars.iter().map(|s| s.to_string()).collect()
    }

    fn empty() -> GridValuation {
        GridValuation::new()
    }

    fn checkerboard(width: usize, height: usize) -> GridValuation {
        let mut v = GridValuation::new();
        let pts = (0..width)
            .flat_map(|i| (0..height).map(move |j| (i, j)))
            .filter(|(i, j)| (i + j) % 2 == 0)
            .collect();
        v.insert("p".into(), pts);
        v
    }

    #[test]
    fn d8_literals() {
        assert_eq!(d8_eq(0).unwrap().to_string(), "!__d8a & !__d8b & !__d8c");
        assert_eq!(d8_eq(7).unwrap().to_string(), "__d8a & __d8b & __d8c");
        assert_eq!(d8_eq(5).unwrap().to_string(), "__d8a & !__d8b & __d8c");
        assert_eq!(d8_eq(8), Err(Error::D8OutOfRange(8)));
    }

    #[test]
    fn exactly_one_d8_value_per_world() {
        let mut m = Model::new(Frame::new(8));
        for w in 0..8 {
            set_d8(&mut m, w, w as u8);
        }
        for w in 0..8 {
            let holding: Vec<u8> = (0..8)
                .filter(|&d| check(&m, w, &d8_lit(d)).unwrap())
                .collect();
            assert_eq!(holding, vec![w as u8]);
            assert_eq!(d8_value(&m, w), w as u8);
        }
    }

    #[test]
    fn psi_resp_shape() {
        let r = psi_resp(&set(&[])).unwrap();
        assert_eq!(r.modal_depth(), 1);
        assert_eq!(r.variables(), d8_bit_set());
        let mut conjuncts = Vec::new();
        let mut cur = &r;
        while let F::And(a, b) = cur {
            conjuncts.push(b.as_ref().clone());
            cur = a;
        }
        conjuncts.push(cur.clone());
        assert_eq!(conjuncts.len(), 8);

        let rp = psi_resp(&set(&["p"])).unwrap();
        let want = f("(!__d8a & !__d8b & !__d8c) -> p -> [](!__d8a & !__d8b & !__d8c -> p)");
        assert!(contains_subformula(&rp, &want));
        assert_eq!(rp.modal_depth(), 1);
        assert_eq!(
            psi_resp_with(&set(&[]), RespVariant::PerVariable).unwrap(),
            F::True
        );
        assert_eq!(
            psi_resp(&set(&["__u"])),
            Err(Error::ReservedName("__u".into()))
        );
    }

    fn contains_subformula(hay: &F, needle: &F) -> bool {
        hay == needle || hay.children().any(|c| contains_subformula(c, needle))
    }

    #[test]
    fn psi_succ_shape() {
        let s = psi_succ();
        assert_eq!(s.modal_depth(), 1);
        let want = f(
            "__d8a & __d8b & !__d8c -> <>(!__d8a & !__d8b & !__d8c) & <>(!__d8a & !__d8b & __d8c)",
        );
        assert!(contains_subformula(&s, &want));
        let mut m = Model::new(Frame::with_edges(1, [(0, 0)]).unwrap());
        set_d8(&mut m, 0, 0);
        assert!(!check(&m, 0, &s).unwrap());
    }

    #[test]
    fn translation_examples() {
        assert_eq!(translate_g(&f("p")).unwrap(), f("p"));
        let gb = translate_g(&f("[]p")).unwrap();
        let want =
            F::conj((0..8).map(|d| F::imp(d8_lit(d), F::boxed(F::imp(F::not(d8_lit(d)), f("p"))))));
        assert_eq!(gb, want);
        assert_eq!(translate_g(&f("![]p")).unwrap(), F::not(gb.clone()));
        let mut vars = set(&["p"]);
        vars.extend(d8_bit_set());
        assert_eq!(gb.variables(), vars);
        assert_eq!(gb.modal_depth(), 1);
        assert_eq!(
            translate_g(&f("__d8a")),
            Err(Error::ReservedName("__d8a".into()))
        );
    }

    #[test]
    fn reduction_examples() {
        let r = reduce_f(&F::True).unwrap();
        assert_eq!(
            r,
            F::and(F::and(F::True, psi_resp(&set(&[])).unwrap()), psi_succ())
        );
        let r = reduce_f(&f("[]p")).unwrap();
        let mut vars = set(&["p"]);
        vars.extend(d8_bit_set());
        assert_eq!(r.variables(), vars);
        assert_eq!(r.modal_depth(), 1);
    }

    #[test]
    fn localize_examples() {
        assert_eq!(
            localize(&F::True).unwrap().to_string(),
            "__u & []!__u & []true"
        );
        assert_eq!(
            localize(&reduce_f(&f("<>p")).unwrap())
                .unwrap()
                .modal_depth(),
            2
        );
        assert_eq!(localize(&f("p")).unwrap().modal_depth(), 1);
        assert!(localize(&f("__u")).is_err());
    }

    #[test]
    fn torus_layout() {
        let m = make_torus_hat_model(8, 4, &empty()).unwrap();
        assert_eq!(m.world_count(), 32);
        assert_eq!(d8_value(&m, grid_index(8, 0, 0)), 0);
        assert_eq!(d8_value(&m, grid_index(8, 1, 0)), 3);
        assert_eq!(d8_value(&m, grid_index(8, 0, 1)), 2);
        assert!(m.frame().is_reflexive());
        assert_eq!(m.frame().edge_count(), 3 * 32);
        assert!(eval_universal(m.frame(), &builtin("phi_grid").unwrap()));
        let base = F::and(psi_resp(&set(&[])).unwrap(), psi_succ());
        assert!(check_global(&m, &base));
        assert!(compute_partition(&m).unwrap().is_discrete());
        assert!(matches!(
            make_torus_hat_model(8, 6, &empty()),
            Err(Error::TorusDimensions { .. })
        ));
        assert!(matches!(
            make_torus_hat_model(12, 4, &empty()),
            Err(Error::TorusDimensions { .. })
        ));
    }

    #[test]
    fn universal_world_round_trip() {
        let hat = make_torus_hat_model(8, 4, &checkerboard(8, 4)).unwrap();
        let (big, wu) = add_universal_world(&hat).unwrap();
        assert_eq!(wu, 32);
        assert!(check(&big, wu, &f("__u & []!__u")).unwrap());
        assert!(eval_universal(big.frame(), &builtin("phi_univ").unwrap()));
        assert!(eval_universal(big.frame(), &builtin("phi_final").unwrap()));
        let (back, map) = extract_generated_submodel(&big, wu).unwrap();
        assert_eq!(back, hat);
        assert_eq!(map, (0..32).collect::<Vec<_>>());
        assert!(matches!(
            extract_generated_submodel(&hat, 0),
            Err(Error::Precondition(Violation::Reflexive { world: 0 }))
        ));
        let chain = Model::new(Frame::with_edges(2, [(0, 1)]).unwrap());
        assert!(add_universal_world(&chain).is_err());
    }

    #[test]
    fn degrid_torus_recovers_plain_torus() {
        let base = checkerboard(8, 4);
        let hat = make_torus_hat_model(8, 4, &base).unwrap();
        let p = set(&["p"]);
        let m0 = degrid(&hat, &p).unwrap();
        let plain = make_torus_model(8, 4, &base).unwrap();
        assert_eq!(m0.frame(), plain.frame());
        assert!(respects(&hat, &p));
        for w in 0..32 {
            assert_eq!(m0.frame().successors(w).count(), 2);
        }
        assert!(check_global(&m0, &psi_resp(&p).unwrap()));
    }

    #[test]
    fn degrid_reports_failed_hypotheses() {
        let chain = Model::new(Frame::with_edges(2, [(0, 1)]).unwrap());
        assert!(matches!(
            degrid(&chain, &set(&[])),
            Err(Error::Precondition(Violation::NotReflexive { world: 0 }))
        ));
        // All worlds d8 = 0 but a one-way edge to a world holding p.
        let mut m = Model::new(Frame::with_edges(2, [(0, 1)]).unwrap().reflexive_closure());
        m.set("p", 0, true);
        assert!(matches!(
            degrid(&m, &set(&["p"])),
            Err(Error::Precondition(Violation::NotGlobal { world: 0, .. }))
        ));
    }

    #[test]
    fn unfold_torus() {
        let base = checkerboard(8, 4);
        let hat = make_torus_hat_model(8, 4, &base).unwrap();
        let m0 = degrid(&hat, &set(&["p"])).unwrap();
        let (frag, src) = unfold_grid_fragment(&m0, 0, 2).unwrap();
        assert_eq!(frag.world_count(), 9);
        for j in 0..3 {
            for i in 0..3 {
                let w = grid_index(3, i, j);
                assert_eq!(src[w], grid_index(8, i % 8, j % 4));
                assert_eq!(d8_value(&frag, w), ((3 * i + 2 * j) % 8) as u8);
                assert_eq!(frag.holds("p", w), (i + j) % 2 == 0);
            }
        }
        let psi = f("(p -> []!p) & (!p -> []p)");
        for w in fragment_interior(2) {
            assert!(check(&frag, w, &psi).unwrap());
        }
        // Start elsewhere: d8 offsets follow the start value.
        let start = grid_index(8, 5, 3);
        let (frag, _) = unfold_grid_fragment(&m0, start, 2).unwrap();
        let d0 = d8_value(&m0, start) as usize;
        for j in 0..3 {
            for i in 0..3 {
                assert_eq!(
                    d8_value(&frag, grid_index(3, i, j)) as usize,
                    (d0 + 3 * i + 2 * j) % 8
                );
            }
        }
    }

    #[test]
    fn unfold_reports_missing_or_open_diamonds() {
        let mut m = Model::new(Frame::new(2));
        set_d8(&mut m, 1, 3);
        m.frame_mut().add_edge(0, 1);
        match unfold_grid_fragment(&m, 0, 1) {
            Err(Error::Unfold { world, reason }) => {
                assert_eq!(world, 0);
                assert!(reason.contains("+2"), "{reason}");
            }
            other => panic!("unexpected {other:?}"),
        }
        // 0 -> a(+3), 0 -> b(+2), a -> c(+2), b -> c'(+3) with c != c'.
        let mut m = Model::new(Frame::with_edges(5, [(0, 1), (0, 2), (1, 3), (2, 4)]).unwrap());
        for (w, d) in [(0, 0), (1, 3), (2, 2), (3, 5), (4, 5)] {
            set_d8(&mut m, w, d);
        }
        match unfold_grid_fragment(&m, 0, 1) {
            Err(Error::Unfold { world, .. }) => assert_eq!(world, 0),
            other => panic!("unexpected {other:?}"),
        }
    }
}
