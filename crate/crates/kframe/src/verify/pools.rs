//! Fixed formula pools and model generators for the verification suites.

use std::collections::BTreeSet;

use kframe_core::grid::{make_torus_hat_model, set_d8, GridValuation};
use kframe_core::{parse_modal, Frame, ModalFormula, Model};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const DEFAULT_SEED: u64 = 0x6b66_7261_6d65;

fn parse_all(texts: &[&str]) -> Vec<ModalFormula> {
    texts
        .iter()
        .map(|t| parse_modal(t).expect("pool formulas parse"))
        .collect()
}

/// Formulas over `p` of modal depth at most 3.
pub fn quotient_formulas() -> Vec<ModalFormula> {
    parse_all(&[
        "p",
        "!p",
        "true",
        "[]p",
        "<>p",
        "<>true",
        "[]false",
        "[][]p",
        "<><>p",
        "[]<>p",
        "<>[]p",
        "p -> []p",
        "p -> <>!p",
        "[](p -> <>p)",
        "<>(p & <>!p)",
        "[][][]p",
        "<><><>p",
        "[]<>[]p",
        "<>[]<>!p",
        "(p | []!p) & <>p",
        "[](p <-> <>p)",
        "[](<>p -> [][]p)",
        "!<>(!p & <>p)",
        "p <-> [][]p",
        "<>(p & []<>!p) | [](!p -> <><>p)",
    ])
}

/// Formulas over `p`, `q` of modal depth at most 2, used against the
/// independent enumerator.
pub fn search_formulas() -> Vec<ModalFormula> {
    parse_all(&[
        "p",
        "p & !p",
        "p | q",
        "[]p",
        "<>p",
        "[]false",
        "<>true",
        "!<>true",
        "<>p & <>!p",
        "[]p & <>!p",
        "p & []!p",
        "[](p -> q) & <>p & []!q",
        "<><>true",
        "[][]false",
        "<>[]p",
        "[]<>p",
        "<>(p & []!p)",
        "[](p | q) & <>!p & <>!q",
        "<>(p & <>!p)",
        "!p & <>p & [](p -> <>!p)",
        "[](p <-> !q) & <>(p & q)",
        "<>p -> []p",
        "(p <-> []p) & <>!p",
        "<>(p & q) & <>(!p & !q) & [](p -> <>q)",
    ])
}

/// Formulas `xi` whose `g([] xi)` is compared against successor-wise
/// evaluation.
pub fn bridge_formulas() -> Vec<ModalFormula> {
    parse_all(&[
        "p",
        "!p",
        "q",
        "p & q",
        "p | !q",
        "true",
        "false",
        "[]p",
        "<>q",
        "p -> []q",
        "<>(p & !q)",
    ])
}

fn points(
    width: usize,
    height: usize,
    mut keep: impl FnMut(usize, usize) -> bool,
) -> BTreeSet<(usize, usize)> {
    (0..height)
        .flat_map(|j| (0..width).map(move |i| (i, j)))
        .filter(|&(i, j)| keep(i, j))
        .collect()
}

fn valuation<const N: usize>(entries: [(&str, BTreeSet<(usize, usize)>); N]) -> GridValuation {
    entries
        .into_iter()
        .map(|(v, s)| (v.to_string(), s))
        .collect()
}

/// A torus valuation together with a depth-1 formula that holds globally on
/// the plain torus under it.
#[derive(Debug, Clone)]
pub struct TorusInstance {
    pub label: String,
    pub psi: ModalFormula,
    pub width: usize,
    pub height: usize,
    pub valuation: GridValuation,
}

impl TorusInstance {
    pub fn hat_model(&self) -> Model {
        make_torus_hat_model(self.width, self.height, &self.valuation).expect("valid torus")
    }
}

pub const CHECKERBOARD: &str = "(p -> []!p) & (!p -> []p)";

/// `p` at grid points with `i + j` even.
pub fn checkerboard(width: usize, height: usize) -> GridValuation {
    valuation([("p", points(width, height, |i, j| (i + j) % 2 == 0))])
}

/// The formulas the forward direction is required for, then further
/// instances.
pub fn torus_instances(seed: u64) -> Vec<TorusInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut random_p = |w, h| points(w, h, |_, _| rng.gen_bool(0.5));
    let mut out = Vec::new();
    let mut add = |label: &str, psi: &str, width, height, valuation| {
        out.push(TorusInstance {
            label: format!("{label} on {width}x{height}"),
            psi: parse_modal(psi).expect("pool formulas parse"),
            width,
            height,
            valuation,
        })
    };
    add("diamond-true", "<>true", 8, 4, GridValuation::new());
    add("checkerboard", CHECKERBOARD, 8, 4, checkerboard(8, 4));
    let p = random_p(8, 4);
    add(
        "p-implies-successor",
        "p -> <>true",
        8,
        4,
        valuation([("p", p)]),
    );

    add("diamond-true", "<>true", 16, 4, GridValuation::new());
    add("checkerboard", CHECKERBOARD, 16, 4, checkerboard(16, 4));
    add(
        "rows",
        "p -> <>p",
        8,
        4,
        valuation([("p", points(8, 4, |_, j| j % 2 == 0))]),
    );
    add(
        "alternating-columns",
        "(p -> <>q) & (q -> <>p)",
        8,
        4,
        valuation([
            ("p", points(8, 4, |i, _| i % 2 == 0)),
            ("q", points(8, 4, |i, _| i % 2 == 1)),
        ]),
    );
    add(
        "mixed-successors",
        "<>p & <>!p",
        8,
        4,
        valuation([("p", points(8, 4, |_, j| j % 2 == 1))]),
    );
    let p = random_p(16, 4);
    let q = points(16, 4, |i, j| !p.contains(&(i, j)));
    add(
        "complement",
        "p <-> !q",
        16,
        4,
        valuation([("p", p), ("q", q)]),
    );
    add(
        "diagonal-bands",
        "[]p | []!p",
        8,
        4,
        valuation([("p", points(8, 4, |i, j| (i + j) % 4 < 2))]),
    );
    out
}

/// The first three torus instances: the ones the round trip is required
/// for.
pub fn required_torus_instances() -> Vec<TorusInstance> {
    torus_instances(DEFAULT_SEED).into_iter().take(3).collect()
}

/// Replaces world `w` by a clique of `copies + 1` worlds with the same
/// neighbours and valuation.
pub fn blow_up(m: &Model, w: usize, copies: usize) -> Model {
    let n = m.world_count();
    let total = n + copies;
    let mut frame = Frame::new(total);
    for (a, b) in m.frame().edges() {
        frame.add_edge(a, b);
    }
    let clique: Vec<usize> = std::iter::once(w).chain(n..total).collect();
    for &c in &clique[1..] {
        for v in m.frame().successors(w).collect::<Vec<_>>() {
            let v = if v == w { c } else { v };
            frame.add_edge(c, v);
        }
        for v in m.frame().predecessors(w).collect::<Vec<_>>() {
            if v != w {
                frame.add_edge(v, c);
            }
        }
    }
    for &a in &clique {
        for &b in &clique {
            frame.add_edge(a, b);
        }
    }
    let mut out = Model::new(frame);
    for var in m.variables() {
        for v in m.truth_set(&var) {
            out.set(&var, v, true);
        }
        if m.holds(&var, w) {
            for &c in &clique[1..] {
                out.set(&var, c, true);
            }
        }
    }
    out
}

fn random_valuation(rng: &mut ChaCha8Rng, width: usize, height: usize) -> GridValuation {
    let density = [0.2, 0.5, 0.8][rng.gen_range(0..3)];
    let mut val = GridValuation::new();
    for var in ["p", "q"] {
        let pts = points(width, height, |_, _| rng.gen_bool(density));
        val.insert(var.to_string(), pts);
    }
    val
}

fn hand_built() -> Vec<(String, Model)> {
    let mut out = Vec::new();
    let single = Model::new(Frame::with_edges(1, [(0, 0)]).expect("valid"));
    out.push(("reflexive singleton".to_string(), single));
    for size in [2, 3] {
        let mut frame = Frame::new(size);
        for a in 0..size {
            for b in 0..size {
                frame.add_edge(a, b);
            }
        }
        let mut m = Model::new(frame);
        m.set_true_at("p", 0..size).expect("in range");
        out.push((format!("{size}-clique"), m));
    }
    // {0,1} ~-clique with d8 = 0 pointing to {2} with d8 = 2 and {3} with
    // d8 = 3.
    let frame = Frame::with_edges(4, [(0, 1), (1, 0), (0, 2), (1, 2), (0, 3), (1, 3)])
        .expect("valid")
        .reflexive_closure();
    let mut m = Model::new(frame);
    set_d8(&mut m, 2, 2);
    set_d8(&mut m, 3, 3);
    m.set_true_at("q", [0, 1, 3]).expect("in range");
    out.push(("clique with +2 and +3 successors".to_string(), m.clone()));
    let mut bad = m;
    bad.set("q", 1, false);
    out.push(("clique split by q".to_string(), bad));
    out
}

/// Candidate models for the respect property: tori with random valuations,
/// tori with worlds blown up into cliques (some with a perturbed copy), and
/// small hand-built models. Candidates that miss the hypotheses are
/// filtered out by the suite, not here.
pub fn respect_candidates(seed: u64) -> Vec<(String, Model)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for (width, count) in [(8, 20), (16, 20)] {
        for i in 0..count {
            let val = random_valuation(&mut rng, width, 4);
            let m = make_torus_hat_model(width, 4, &val).expect("valid torus");
            out.push((format!("{width}x4 torus #{i}"), m));
        }
    }
    for i in 0..24 {
        let val = random_valuation(&mut rng, 8, 4);
        let mut m = make_torus_hat_model(8, 4, &val).expect("valid torus");
        let blown = rng.gen_range(1..=3);
        for _ in 0..blown {
            let w = rng.gen_range(0..32);
            m = blow_up(&m, w, rng.gen_range(1..=2));
        }
        let mut label = format!("8x4 torus #{i} with {blown} blown-up worlds");
        if i % 2 == 1 {
            let copy = m.world_count() - 1;
            let var = ["p", "q", "__d8c"][rng.gen_range(0..3)];
            let flipped = !m.holds(var, copy);
            m.set(var, copy, flipped);
            label.push_str(&format!(", {var} flipped at world {copy}"));
        }
        out.push((label, m));
    }
    out.extend(hand_built());
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use kframe_core::kripke::check_global;
    use kframe_core::{builtin, eval_universal};

    #[test]
    fn pools_meet_their_depth_bounds() {
        let q = quotient_formulas();
        assert!(q.len() >= 20);
        assert!(q.iter().all(|f| f.modal_depth() <= 3));
        assert!(q.iter().all(|f| f.variables().iter().all(|v| v == "p")));
        let s = search_formulas();
        assert!(s.iter().all(|f| f.modal_depth() <= 2));
        assert!(bridge_formulas().iter().all(|f| f.modal_depth() <= 1));
    }

    #[test]
    fn torus_instances_hold_on_the_plain_torus() {
        for t in torus_instances(DEFAULT_SEED) {
            assert!(t.psi.modal_depth() <= 1);
            let plain = t
                .hat_model()
                .with_frame(t.hat_model().frame().drop_reflexive_edges());
            assert!(check_global(&plain, &t.psi), "{}", t.label);
        }
        let labels: Vec<_> = required_torus_instances()
            .iter()
            .map(|t| t.psi.to_string())
            .collect();
        assert_eq!(labels, ["<>true", CHECKERBOARD, "p -> <>true"]);
    }

    #[test]
    fn blow_up_makes_a_clique_of_twins() {
        let m = Model::new(Frame::with_edges(2, [(0, 1)]).unwrap().reflexive_closure());
        let b = blow_up(&m, 0, 2);
        assert_eq!(b.world_count(), 4);
        for a in [0, 2, 3] {
            assert!(b.frame().has_edge(a, 1));
            for c in [0, 2, 3] {
                assert!(b.sym_related(a, c));
            }
        }
        assert!(!b.frame().has_edge(1, 2));
        let grid = builtin("phi_grid").unwrap();
        let torus = make_torus_hat_model(8, 4, &GridValuation::new()).unwrap();
        assert!(eval_universal(blow_up(&torus, 5, 1).frame(), &grid));
    }

    #[test]
    fn generators_are_deterministic() {
        let a = respect_candidates(7);
        let b = respect_candidates(7);
        assert_eq!(a.len(), b.len());
        assert!(a.iter().zip(&b).all(|(x, y)| x == y));
    }
}
