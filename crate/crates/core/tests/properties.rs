use std::collections::BTreeSet;
use std::sync::OnceLock;

use kframe_core::fo::builtins;
use kframe_core::grid::{d8_bit_set, localize, reduce_f, translate_g, U_VAR};
use kframe_core::kripke::global_counterexample;
use kframe_core::{
    builtin, check, check_global, compute_partition, enumerate_frames, eval_universal, find_model,
    find_violation, quotient, relativize_to_reflexive, satisfying_worlds, Frame, ModalFormula,
    Mode, Model, SearchConfig, SearchStatus,
};
use proptest::prelude::*;

fn formula(depth: u32) -> impl Strategy<Value = ModalFormula> {
    let leaf = prop_oneof![
        Just(ModalFormula::var("p")),
        Just(ModalFormula::var("q")),
        Just(ModalFormula::True),
        Just(ModalFormula::False),
    ];
    leaf.prop_recursive(depth, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(ModalFormula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| ModalFormula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| ModalFormula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| ModalFormula::imp(a, b)),
            inner.clone().prop_map(ModalFormula::boxed),
            inner.prop_map(ModalFormula::dia),
        ]
    })
}

fn frame(max_worlds: usize) -> impl Strategy<Value = Frame> {
    (1..=max_worlds)
        .prop_flat_map(|n| (0..1u64 << (n * n)).prop_map(move |code| Frame::from_code(n, code)))
}

fn model(max_worlds: usize) -> impl Strategy<Value = Model> {
    frame(max_worlds).prop_flat_map(|f| {
        let n = f.world_count();
        (Just(f), proptest::collection::vec(any::<(bool, bool)>(), n)).prop_map(|(f, bits)| {
            let mut m = Model::new(f);
            for (w, (p, q)) in bits.into_iter().enumerate() {
                m.set("p", w, p);
                m.set("q", w, q);
            }
            m
        })
    })
}

fn grid_frames() -> &'static [Frame] {
    static FRAMES: OnceLock<Vec<Frame>> = OnceLock::new();
    FRAMES.get_or_init(|| {
        let grid = builtin("phi_grid").unwrap();
        (1..=4)
            .flat_map(|n| enumerate_frames(n, &grid).collect::<Vec<_>>())
            .filter(Frame::is_reflexive)
            .collect()
    })
}

fn vars_pq() -> BTreeSet<String> {
    ["p", "q"].iter().map(|s| s.to_string()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn translation_keeps_modal_depth(chi in formula(4)) {
        let g = translate_g(&chi).unwrap();
        prop_assert_eq!(g.modal_depth(), chi.modal_depth());
        prop_assert!(g.variables().is_superset(&chi.variables()));
    }

    #[test]
    fn reduction_adds_d8_bits_but_not_the_anchor(chi in formula(3)) {
        let f = reduce_f(&chi).unwrap();
        let vars = f.variables();
        prop_assert!(vars.is_superset(&d8_bit_set()));
        prop_assert!(!vars.contains(U_VAR));
        prop_assert!(localize(&f).unwrap().variables().contains(U_VAR));
    }

    #[test]
    fn global_check_matches_worldwise_truth(m in model(4), chi in formula(3)) {
        let worlds = satisfying_worlds(&m, &chi);
        prop_assert_eq!(check_global(&m, &chi), worlds.iter().all(|&b| b));
        prop_assert_eq!(global_counterexample(&m, &chi), worlds.iter().position(|&b| !b));
        for (w, &b) in worlds.iter().enumerate() {
            prop_assert_eq!(check(&m, w, &chi).unwrap(), b);
        }
    }

    #[test]
    fn final_kernel_splits_into_universal_world_and_relativized_grid(f in frame(4)) {
        let final_k = builtin("phi_final").unwrap();
        let univ = builtin("phi_univ").unwrap();
        let grid = relativize_to_reflexive(&builtin("phi_grid").unwrap());
        prop_assert_eq!(
            eval_universal(&f, &final_k),
            eval_universal(&f, &univ) && eval_universal(&f, &grid)
        );
    }

    #[test]
    fn relativization_is_invisible_on_reflexive_frames(f in frame(4)) {
        let f = f.reflexive_closure();
        for k in builtins() {
            prop_assert_eq!(eval_universal(&f, &relativize_to_reflexive(&k)), eval_universal(&f, &k));
        }
    }

    #[test]
    fn violations_really_falsify_the_kernel(f in frame(3)) {
        for k in builtins() {
            if let Some(a) = find_violation(&f, &k) {
                prop_assert_eq!(a.len(), k.var_count());
                prop_assert!(!k.body().eval(&f, &a));
            }
        }
    }

    #[test]
    fn search_witnesses_are_sound(chi in formula(2), global in any::<bool>(), pick in 0usize..7) {
        let k = &builtins()[pick];
        let mode = if global { Mode::Global } else { Mode::Local };
        let config = SearchConfig { max_worlds: 3, mode, ..SearchConfig::default() };
        let out = find_model(k, &chi, &config).unwrap();
        if let SearchStatus::Found { model, world } = &out.status {
            prop_assert!(eval_universal(model.frame(), k));
            match world {
                Some(w) => prop_assert!(check(model, *w, &chi).unwrap()),
                None => prop_assert!(check_global(model, &chi)),
            }
        } else {
            prop_assert!(out.is_exhausted());
        }
    }

    #[test]
    fn search_is_monotone_in_the_world_bound(chi in formula(2), pick in 0usize..7) {
        let k = &builtins()[pick];
        let at = |max_worlds| {
            let config = SearchConfig { max_worlds, ..SearchConfig::default() };
            find_model(k, &chi, &config).unwrap().is_found()
        };
        let small = at(2);
        let large = at(3);
        prop_assert!(!small || large);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn quotient_edges_do_not_depend_on_representatives(
        pick in any::<prop::sample::Index>(),
        bits in proptest::collection::vec(any::<bool>(), 4),
    ) {
        let frames = grid_frames();
        let f = frames[pick.index(frames.len())].clone();
        let mut m = Model::new(f);
        for (w, &b) in bits.iter().take(m.world_count()).enumerate() {
            m.set("p", w, b);
        }
        let part = compute_partition(&m).unwrap();
        let q = quotient(&m, &vars_pq()).unwrap();
        for (a, ca) in part.classes().iter().enumerate() {
            for (b, cb) in part.classes().iter().enumerate() {
                for &x in ca {
                    for &y in cb {
                        prop_assert_eq!(m.frame().has_edge(x, y), q.frame().has_edge(a, b));
                    }
                }
            }
        }
    }

    #[test]
    fn quotient_is_idempotent(
        pick in any::<prop::sample::Index>(),
        bits in proptest::collection::vec(any::<(bool, bool)>(), 4),
    ) {
        let frames = grid_frames();
        let f = frames[pick.index(frames.len())].clone();
        let mut m = Model::new(f);
        for (w, &(p, q)) in bits.iter().take(m.world_count()).enumerate() {
            m.set("p", w, p);
            m.set("q", w, q);
        }
        let once = quotient(&m, &vars_pq()).unwrap();
        prop_assert!(compute_partition(&once).unwrap().is_discrete());
        prop_assert_eq!(quotient(&once, &vars_pq()).unwrap(), once);
    }
}
