//! Acceptance criteria for the workbench. Each criterion runs end to end
//! against the public APIs of `kframe-core` and `kframe` and reports a
//! verdict with supporting details.

use std::time::{Duration, Instant};

use kframe::verify::pools::{quotient_formulas, required_torus_instances};
use kframe::verify::{respect_pool, run_suite, Suite, VerifyOptions, VerifySuiteReport};
use kframe_core::fo::{builtins, BUILTIN_NAMES};
use kframe_core::grid::{
    add_universal_world, degrid, extract_generated_submodel, fragment_interior, localize, reduce_f,
    unfold_grid_fragment,
};
use kframe_core::kripke::global_counterexample;
use kframe_core::{
    builtin, check, check_global, compute_partition, eval_universal, find_model, parse_modal,
    ModalFormula, SearchConfig, SearchStatus,
};

#[derive(Debug, Clone, Default)]
pub struct Outcome {
    pub passed: bool,
    pub details: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Outcome {
            passed: true,
            details: Vec::new(),
        }
    }

    fn require(&mut self, ok: bool, detail: impl Into<String>) {
        let detail = detail.into();
        self.passed &= ok;
        self.details.push(if ok {
            detail
        } else {
            format!("FAILED: {detail}")
        });
    }

    fn note(&mut self, detail: impl Into<String>) {
        self.details.push(format!("note: {}", detail.into()));
    }

    fn suite(&mut self, report: &VerifySuiteReport, budget: Option<Duration>) {
        self.require(report.passed(), report.summary());
        for f in report.failures.iter().take(3) {
            self.details
                .push(format!("  #{} {}: {}", f.index, f.label, f.message));
        }
        if let Some(budget) = budget {
            self.require(
                report.elapsed < budget,
                format!(
                    "{:.2}s within the {}s budget",
                    report.elapsed.as_secs_f64(),
                    budget.as_secs()
                ),
            );
        }
    }
}

pub struct Criterion {
    pub id: &'static str,
    pub title: &'static str,
    pub run: fn() -> Outcome,
}

pub fn criteria() -> Vec<Criterion> {
    vec![
        Criterion {
            id: "lemma3",
            title: "quotients of reflexive phi_grid frames (<= 4 worlds) have the abstraction structure",
            run: lemma3,
        },
        Criterion {
            id: "lemma4",
            title: "quotient preserves truth on reflexive phi_eq models (<= 3 worlds)",
            run: lemma4,
        },
        Criterion {
            id: "lemma5",
            title: "psi_resp models respect P and the d8 bits",
            run: lemma5,
        },
        Criterion {
            id: "thm6-forward",
            title: "torus hat models satisfy phi_grid and f(psi) globally",
            run: thm6_forward,
        },
        Criterion {
            id: "thm8-roundtrip",
            title: "universal world, extraction, degrid and unfold round trip",
            run: thm8_roundtrip,
        },
        Criterion {
            id: "search",
            title: "search negative control, positive control and oracle agreement",
            run: search,
        },
        Criterion {
            id: "subframe",
            title: "basic built-in kernels are preserved under induced subframes (<= 4 worlds)",
            run: subframe,
        },
    ]
}

/// Runs one criterion, timing it.
pub fn evaluate(c: &Criterion) -> (Outcome, Duration) {
    let start = Instant::now();
    let outcome = (c.run)();
    (outcome, start.elapsed())
}

fn options() -> VerifyOptions {
    VerifyOptions::default()
}

fn lemma3() -> Outcome {
    let mut out = Outcome::new();
    let report = run_suite(Suite::Lemma3, &options());
    let all_reflexive: usize = (1..=4).map(|n| 1usize << (n * n - n)).sum();
    out.require(
        report.cases + report.skipped == all_reflexive,
        format!(
            "{} reflexive frames enumerated ({} satisfy phi_grid)",
            report.cases + report.skipped,
            report.cases
        ),
    );
    out.suite(&report, Some(Duration::from_secs(30)));
    out
}

fn lemma4() -> Outcome {
    let mut out = Outcome::new();
    let pool = quotient_formulas();
    out.require(
        pool.len() >= 20 && pool.iter().all(|f| f.modal_depth() <= 3),
        format!("{} formulas of modal depth <= 3 over {{p}}", pool.len()),
    );
    let report = run_suite(Suite::Lemma4, &options());
    out.suite(&report, Some(Duration::from_secs(60)));
    out
}

fn lemma5() -> Outcome {
    let mut out = Outcome::new();
    let (kept, _) = respect_pool(options().seed);
    let count = |worlds: usize| {
        kept.iter()
            .filter(|(_, m)| m.world_count() == worlds)
            .count()
    };
    let with_cliques = kept
        .iter()
        .filter(|(_, m)| {
            compute_partition(m)
                .map(|p| !p.is_discrete())
                .unwrap_or(false)
        })
        .count();
    out.require(
        count(32) > 0 && count(64) > 0 && with_cliques > 0,
        format!(
            "{} models: {} 8x4 tori, {} 16x4 tori, {} with nontrivial ~-classes",
            kept.len(),
            count(32),
            count(64),
            with_cliques
        ),
    );
    let report = run_suite(Suite::Lemma5, &options());
    out.require(
        report.cases >= 50,
        format!("{} models checked (at least 50 required)", report.cases),
    );
    out.suite(&report, None);
    out
}

fn psi_holds_on_plain_torus(hat: &kframe_core::Model, psi: &ModalFormula) -> bool {
    let plain = hat.with_frame(hat.frame().drop_reflexive_edges());
    check_global(&plain, psi)
}

fn thm6_forward() -> Outcome {
    let mut out = Outcome::new();
    let grid = builtin("phi_grid").expect("built-in");
    let start = Instant::now();
    for t in required_torus_instances() {
        let hat = t.hat_model();
        let input = psi_holds_on_plain_torus(&hat, &t.psi);
        let fo = eval_universal(hat.frame(), &grid);
        let phi = reduce_f(&t.psi).expect("reducible");
        let bad = global_counterexample(&hat, &phi);
        out.require(
            input && fo && bad.is_none(),
            format!(
                "{} [{}]: psi on torus {input}, phi_grid {fo}, f(psi) global {}",
                t.label,
                t.psi,
                bad.map_or("true".to_string(), |w| format!("false at world {w}"))
            ),
        );
    }
    let elapsed = start.elapsed();
    out.require(
        elapsed < Duration::from_secs(300),
        format!("{:.2}s within the 300s budget", elapsed.as_secs_f64()),
    );
    out
}

fn thm8_roundtrip() -> Outcome {
    let mut out = Outcome::new();
    let final_k = builtin("phi_final").expect("built-in");
    for t in required_torus_instances() {
        let hat = t.hat_model();
        let psi = &t.psi;
        let phi = reduce_f(psi).expect("reducible");
        let (big, w_u) = add_universal_world(&hat).expect("reflexive hat model");
        let fo = eval_universal(big.frame(), &final_k);
        let local = check(&big, w_u, &localize(&phi).expect("fresh __u")).expect("in range");
        let (sub, map) = extract_generated_submodel(&big, w_u).expect("irreflexive w_u");
        let inverse = sub == hat && map == (0..hat.world_count()).collect::<Vec<_>>();
        let interior = degrid(&sub, &psi.variables())
            .and_then(|m0| unfold_grid_fragment(&m0, 0, 3))
            .map(|(frag, _)| fragment_interior(3).all(|w| check(&frag, w, psi).expect("in range")));
        let unfolded = matches!(interior, Ok(true));
        out.require(
            fo && local && inverse && unfolded,
            format!(
                "{} [{psi}]: phi_final {fo}, localize at w_u {local}, extraction inverts {inverse}, interior of 4x4 unfolding {}",
                t.label,
                match &interior {
                    Ok(b) => b.to_string(),
                    Err(e) => e.to_string(),
                }
            ),
        );
    }
    out
}

fn search() -> Outcome {
    let mut out = Outcome::new();
    let final_k = builtin("phi_final").expect("built-in");
    let psi = parse_modal("[]p & []!p").expect("parses");
    let negative = localize(&reduce_f(&psi).expect("reducible")).expect("fresh __u");
    let config = |max_worlds| SearchConfig {
        max_worlds,
        ..SearchConfig::default()
    };
    let outcome = find_model(&final_k, &negative, &config(4)).expect("valid bound");
    let described = match &outcome.status {
        SearchStatus::Found { model, world } => format!(
            "found a {}-world model with {} edges, witness world {world:?}",
            model.world_count(),
            model.frame().edge_count()
        ),
        SearchStatus::Exhausted => "exhausted".into(),
        SearchStatus::Aborted(r) => format!("aborted ({r:?})"),
    };
    out.require(
        outcome.is_exhausted(),
        format!(
            "phi_final, localize(f([]p & []!p)), 4 worlds, local: {described} (expected exhausted)"
        ),
    );
    if let SearchStatus::Found { model, .. } = &outcome.status {
        if model.frame().edge_count() == 0 {
            out.note(
                "the witness world has no successors, so __u & []!__u & []chi holds vacuously for every chi",
            );
        }
        let serial = ModalFormula::and(negative.clone(), parse_modal("<>true").expect("parses"));
        let repaired = find_model(&final_k, &serial, &config(4)).expect("valid bound");
        out.note(format!(
            "with <>true conjoined at the universal world the same search is {} after {} frames",
            if repaired.is_exhausted() {
                "exhausted"
            } else {
                "not exhausted"
            },
            repaired.stats.frames_examined
        ));
    }

    let positive = parse_modal("__u & []!__u").expect("parses");
    let outcome = find_model(&final_k, &positive, &config(1)).expect("valid bound");
    let ok = match &outcome.status {
        SearchStatus::Found { model, world } => {
            model.world_count() == 1 && !model.frame().has_edge(0, 0) && *world == Some(0)
        }
        _ => false,
    };
    out.require(
        ok,
        "phi_final, __u & []!__u, 1 world, local: found a 1-world irreflexive witness",
    );

    let report = run_suite(Suite::Oracle, &options());
    out.require(
        report.cases == BUILTIN_NAMES.len() * kframe::verify::pools::search_formulas().len() * 2,
        format!(
            "oracle covers {} built-in kernels x formula pool x 2 modes",
            builtins().len()
        ),
    );
    out.suite(&report, None);
    out
}

fn subframe() -> Outcome {
    let mut out = Outcome::new();
    let basic: Vec<_> = builtins().into_iter().filter(|k| k.is_basic()).collect();
    out.require(
        basic.len() == 6,
        format!("{} basic built-in kernels", basic.len()),
    );
    let report = run_suite(Suite::Subframe, &options());
    out.suite(&report, None);
    out
}
