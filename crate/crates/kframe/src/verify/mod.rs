//! Verification suites. Each suite generates cases from exhaustive
//! enumeration or fixed pools and checks one property per case. A failing
//! case serializes to a replay file (model, formula, kernel) that
//! [`parse_replay`] and [`Case::run`] turn back into the same failure.

pub mod oracle;
pub mod pools;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use kframe_core::abstraction::{check_abstraction_structure, quotient_with_partition};
use kframe_core::fo::{builtins, find_violation};
use kframe_core::formula::RESERVED_PREFIX;
use kframe_core::grid::{
    check_grid_hypotheses, d8_bit_set, d8_value, degrid, extract_generated_submodel, localize,
    reduce_f, translate_g,
};
use kframe_core::kripke::global_counterexample;
use kframe_core::{
    builtin, check, compute_partition, eval_universal, find_model, parse_modal, respects,
    satisfying_worlds, FoKernel, Frame, ModalFormula, Mode, Model, SearchConfig, SearchStatus,
};

use crate::error::{Error, Result};
use crate::io::{kernel_spec, parse_kernel_spec, parse_model, write_model};
use crate::pipeline::{hat_stage, pull_back, unfold_stage, PipelineReport};

pub use pools::DEFAULT_SEED;

/// Fragment size used when unfolding degridded models.
pub const UNFOLD_K: usize = 3;
/// World bound for comparisons against the naive enumerator.
pub const ORACLE_MAX_WORLDS: usize = 3;
/// World bound for the search half of the round-trip suite.
pub const CONVERSE_MAX_WORLDS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Suite {
    Lemma3,
    Lemma4,
    Lemma5,
    Gbridge,
    Thm6Forward,
    Thm8Roundtrip,
    Subframe,
    Oracle,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Lemma3,
        Suite::Lemma4,
        Suite::Lemma5,
        Suite::Gbridge,
        Suite::Thm6Forward,
        Suite::Thm8Roundtrip,
        Suite::Subframe,
        Suite::Oracle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Lemma3 => "lemma3",
            Suite::Lemma4 => "lemma4",
            Suite::Lemma5 => "lemma5",
            Suite::Gbridge => "gbridge",
            Suite::Thm6Forward => "thm6-forward",
            Suite::Thm8Roundtrip => "thm8-roundtrip",
            Suite::Subframe => "subframe",
            Suite::Oracle => "oracle",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Suite::ALL.iter().map(|s| s.name()).collect();
                Error::Usage(format!(
                    "unknown suite `{s}` (expected one of {})",
                    names.join(", ")
                ))
            })
    }
}

/// One checkable instance of a suite's property.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Case {
    /// A reflexive `phi_grid` frame whose quotient must have the three
    /// abstraction properties.
    QuotientStructure { model: Model },
    /// Truth of `formula` is preserved by the quotient over `{p}`.
    QuotientTruth { model: Model, formula: ModalFormula },
    /// A model meeting the grid hypotheses must respect its variables and
    /// the d8 bits, with d8 stepping forward along non-symmetric paths.
    Respects { model: Model },
    /// `g([] formula)` holds exactly where `g(formula)` holds at every
    /// non-symmetric, non-reflexive successor.
    Bridge { model: Model, formula: ModalFormula },
    /// A torus hat model whose plain torus satisfies `formula` globally.
    Forward { model: Model, formula: ModalFormula },
    /// Universal world, extraction, degridding and unfolding of a hat model.
    RoundTrip { model: Model, formula: ModalFormula },
    /// A search witness for `localize(f(formula))` over `phi_final`, pulled
    /// back to a grid fragment.
    Converse { model: Model, formula: ModalFormula },
    /// A frame satisfying `kernel` whose induced subframes must satisfy it.
    Subframe { kernel: FoKernel, model: Model },
    /// The core search and the naive enumerator agree on `formula` over
    /// `kernel`; `witness` is whichever model was found, if any.
    Oracle {
        kernel: FoKernel,
        formula: ModalFormula,
        mode: Mode,
        witness: Option<Model>,
    },
}

fn mode_name(mode: Mode) -> &'static str {
    match mode {
        Mode::Local => "local",
        Mode::Global => "global",
    }
}

type Verdict = std::result::Result<(), String>;

fn fail<T>(msg: impl Into<String>) -> std::result::Result<T, String> {
    Err(msg.into())
}

impl Case {
    pub fn kind(&self) -> &'static str {
        match self {
            Case::QuotientStructure { .. } => "quotient-structure",
            Case::QuotientTruth { .. } => "quotient-truth",
            Case::Respects { .. } => "respects",
            Case::Bridge { .. } => "g-bridge",
            Case::Forward { .. } => "forward",
            Case::RoundTrip { .. } => "round-trip",
            Case::Converse { .. } => "converse",
            Case::Subframe { .. } => "subframe",
            Case::Oracle { .. } => "oracle",
        }
    }

    pub fn suite(&self) -> Suite {
        match self {
            Case::QuotientStructure { .. } => Suite::Lemma3,
            Case::QuotientTruth { .. } => Suite::Lemma4,
            Case::Respects { .. } => Suite::Lemma5,
            Case::Bridge { .. } => Suite::Gbridge,
            Case::Forward { .. } => Suite::Thm6Forward,
            Case::RoundTrip { .. } | Case::Converse { .. } => Suite::Thm8Roundtrip,
            Case::Subframe { .. } => Suite::Subframe,
            Case::Oracle { .. } => Suite::Oracle,
        }
    }

    /// Checks the case, returning a description of the failure if any.
    pub fn run(&self) -> Verdict {
        match self {
            Case::QuotientStructure { model } => run_quotient_structure(model),
            Case::QuotientTruth { model, formula } => run_quotient_truth(model, formula),
            Case::Respects { model } => run_respects(model),
            Case::Bridge { model, formula } => run_bridge(model, formula),
            Case::Forward { model, formula } => run_forward(model, formula),
            Case::RoundTrip { model, formula } => run_round_trip(model, formula),
            Case::Converse { model, formula } => run_converse(model, formula),
            Case::Subframe { kernel, model } => run_subframe(kernel, model.frame()),
            Case::Oracle {
                kernel,
                formula,
                mode,
                witness,
            } => {
                let frames = oracle::kernel_frames(kernel, ORACLE_MAX_WORLDS);
                run_oracle(kernel, formula, *mode, witness.as_ref(), &frames)
            }
        }
    }

    /// A replay file for this case.
    pub fn to_replay(&self) -> String {
        let mut out = format!(
            "# kframe verify --replay <this file>\nsuite {}\ncase {}\n",
            self.suite(),
            self.kind()
        );
        let (model, formula, kernel, mode) = match self {
            Case::QuotientStructure { model } | Case::Respects { model } => {
                (Some(model), None, None, None)
            }
            Case::QuotientTruth { model, formula }
            | Case::Bridge { model, formula }
            | Case::Forward { model, formula }
            | Case::RoundTrip { model, formula }
            | Case::Converse { model, formula } => (Some(model), Some(formula), None, None),
            Case::Subframe { kernel, model } => (Some(model), None, Some(kernel), None),
            Case::Oracle {
                kernel,
                formula,
                mode,
                witness,
            } => (witness.as_ref(), Some(formula), Some(kernel), Some(*mode)),
        };
        if let Some(f) = formula {
            out.push_str(&format!("formula {f}\n"));
        }
        if let Some(k) = kernel {
            out.push_str(&format!("kernel {}\n", kernel_spec(k)));
        }
        if let Some(m) = mode {
            out.push_str(&format!("mode {}\n", mode_name(m)));
        }
        if let Some(m) = model {
            out.push_str(&write_model(m));
        }
        out
    }
}

/// Reads a replay file written by [`Case::to_replay`].
pub fn parse_replay(text: &str) -> Result<Case> {
    let mut kind = None;
    let mut formula = None;
    let mut kernel = None;
    let mut mode = None;
    let mut model_start = None;
    let mut offset = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.trim();
        if content == "model" {
            model_start = Some((offset, line));
            break;
        }
        offset += raw.len() + 1;
        if content.is_empty() || content.starts_with('#') {
            continue;
        }
        let (key, value) = content.split_once(' ').unwrap_or((content, ""));
        let value = value.trim();
        match key {
            "suite" => {
                value.parse::<Suite>()?;
            }
            "case" => kind = Some(value.to_string()),
            "formula" => formula = Some(parse_modal(value)?),
            "kernel" => kernel = Some(parse_kernel_spec(value)?),
            "mode" => {
                mode = Some(match value {
                    "local" => Mode::Local,
                    "global" => Mode::Global,
                    _ => return Err(Error::format(line, format!("unknown mode `{value}`"))),
                })
            }
            _ => {
                return Err(Error::format(
                    line,
                    format!("unknown replay directive `{key}`"),
                ))
            }
        }
    }
    let model = match model_start {
        Some((offset, line)) => Some(parse_model(&text[offset..]).map_err(|e| match e {
            Error::Format { line: l, message } => Error::format(line + l - 1, message),
            other => other,
        })?),
        None => None,
    };
    let kind = kind.ok_or_else(|| Error::Usage("replay file has no `case` line".into()))?;
    let need = |what: &str| Error::Usage(format!("`{kind}` replay needs a {what}"));
    let case = match kind.as_str() {
        "quotient-structure" => Case::QuotientStructure {
            model: model.ok_or_else(|| need("model"))?,
        },
        "respects" => Case::Respects {
            model: model.ok_or_else(|| need("model"))?,
        },
        "quotient-truth" | "g-bridge" | "forward" | "round-trip" | "converse" => {
            let model = model.ok_or_else(|| need("model"))?;
            let formula = formula.ok_or_else(|| need("formula"))?;
            match kind.as_str() {
                "quotient-truth" => Case::QuotientTruth { model, formula },
                "g-bridge" => Case::Bridge { model, formula },
                "forward" => Case::Forward { model, formula },
                "round-trip" => Case::RoundTrip { model, formula },
                _ => Case::Converse { model, formula },
            }
        }
        "subframe" => Case::Subframe {
            kernel: kernel.ok_or_else(|| need("kernel"))?,
            model: model.ok_or_else(|| need("model"))?,
        },
        "oracle" => Case::Oracle {
            kernel: kernel.ok_or_else(|| need("kernel"))?,
            formula: formula.ok_or_else(|| need("formula"))?,
            mode: mode.ok_or_else(|| need("mode"))?,
            witness: model,
        },
        other => return Err(Error::Usage(format!("unknown case kind `{other}`"))),
    };
    Ok(case)
}

#[derive(Debug, Clone)]
pub struct Failure {
    /// Position of the case in the suite's canonical order.
    pub index: usize,
    pub label: String,
    pub message: String,
    pub case: Case,
}

#[derive(Debug, Clone)]
pub struct VerifySuiteReport {
    pub suite: Suite,
    pub cases: usize,
    /// Generated candidates that did not meet the suite's hypotheses.
    pub skipped: usize,
    pub failures: Vec<Failure>,
    pub elapsed: Duration,
}

impl VerifySuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn summary(&self) -> String {
        let mut s = format!(
            "{}: {} cases, {} failures",
            self.suite,
            self.cases,
            self.failures.len()
        );
        if self.skipped > 0 {
            s.push_str(&format!(", {} candidates skipped", self.skipped));
        }
        s.push_str(&format!(" ({:.2}s)", self.elapsed.as_secs_f64()));
        s
    }
}

impl fmt::Display for VerifySuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.summary())?;
        for fl in &self.failures {
            writeln!(f, "FAIL #{} {}: {}", fl.index, fl.label, fl.message)?;
            for line in fl.case.to_replay().lines() {
                writeln!(f, "    {line}")?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    /// Seed for the generated model pools.
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { seed: DEFAULT_SEED }
    }
}

struct Runner {
    report: VerifySuiteReport,
}

impl Runner {
    fn new(suite: Suite) -> Self {
        Runner {
            report: VerifySuiteReport {
                suite,
                cases: 0,
                skipped: 0,
                failures: Vec::new(),
                elapsed: Duration::ZERO,
            },
        }
    }

    fn record(&mut self, label: impl Into<String>, case: Case, verdict: Verdict) {
        let index = self.report.cases;
        self.report.cases += 1;
        if let Err(message) = verdict {
            self.report.failures.push(Failure {
                index,
                label: label.into(),
                message,
                case,
            });
        }
    }

    fn run(&mut self, label: impl Into<String>, case: Case) {
        let verdict = case.run();
        self.record(label, case, verdict);
    }
}

pub fn run_suite(suite: Suite, options: &VerifyOptions) -> VerifySuiteReport {
    let start = Instant::now();
    let mut r = Runner::new(suite);
    match suite {
        Suite::Lemma3 => lemma3(&mut r),
        Suite::Lemma4 => lemma4(&mut r),
        Suite::Lemma5 => lemma5(&mut r, options.seed),
        Suite::Gbridge => gbridge(&mut r, options.seed),
        Suite::Thm6Forward => thm6_forward(&mut r, options.seed),
        Suite::Thm8Roundtrip => thm8_roundtrip(&mut r, options.seed),
        Suite::Subframe => subframe(&mut r),
        Suite::Oracle => oracle_suite(&mut r),
    }
    r.report.elapsed = start.elapsed();
    r.report
}

/// Reflexive frames on `n` worlds, one per choice of non-loop edges.
pub fn reflexive_frames(n: usize) -> impl Iterator<Item = Frame> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b)))
        .collect();
    (0..1u64 << pairs.len()).map(move |mask| {
        let mut f = Frame::new(n).reflexive_closure();
        for (bit, &(a, b)) in pairs.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                f.add_edge(a, b);
            }
        }
        f
    })
}

fn kernel_ok(m: &Model, name: &str) -> Verdict {
    let k = builtin(name).map_err(|e| e.to_string())?;
    match find_violation(m.frame(), &k) {
        None => Ok(()),
        Some(a) => fail(format!("{name} fails at assignment {a:?}")),
    }
}

fn lemma3(r: &mut Runner) {
    let grid = builtin("phi_grid").expect("built-in");
    for n in 1..=4 {
        for frame in reflexive_frames(n) {
            if eval_universal(&frame, &grid) {
                let label = format!("{n}-world frame code {:#x}", frame.code());
                r.run(
                    label,
                    Case::QuotientStructure {
                        model: Model::new(frame),
                    },
                );
            } else {
                r.report.skipped += 1;
            }
        }
    }
}

fn run_quotient_structure(m: &Model) -> Verdict {
    if let Some(w) = m.frame().first_irreflexive() {
        return fail(format!("hypothesis: world {w} is not reflexive"));
    }
    kernel_ok(m, "phi_grid").map_err(|e| format!("hypothesis: {e}"))?;
    let (q, _) = quotient_with_partition(m, &BTreeSet::new()).map_err(|e| e.to_string())?;
    let s = check_abstraction_structure(q.frame());
    if !s.all() {
        return fail(format!("quotient frame structure {s:?}"));
    }
    Ok(())
}

fn p_only() -> BTreeSet<String> {
    BTreeSet::from(["p".to_string()])
}

fn lemma4(r: &mut Runner) {
    let eq = builtin("phi_eq").expect("built-in");
    let formulas = pools::quotient_formulas();
    for n in 1..=3 {
        for frame in reflexive_frames(n) {
            if !eval_universal(&frame, &eq) {
                continue;
            }
            let part =
                compute_partition(&Model::new(frame.clone())).expect("reflexive phi_eq frame");
            for mask in 0..1u32 << part.class_count() {
                let mut m = Model::new(frame.clone());
                for (c, members) in part.classes().iter().enumerate() {
                    if mask >> c & 1 == 1 {
                        for &w in members {
                            m.set("p", w, true);
                        }
                    }
                }
                for f in &formulas {
                    let label = format!(
                        "{n}-world frame code {:#x}, p-classes {mask:#b}, {f}",
                        frame.code()
                    );
                    r.run(
                        label,
                        Case::QuotientTruth {
                            model: m.clone(),
                            formula: f.clone(),
                        },
                    );
                }
            }
        }
    }
}

fn run_quotient_truth(m: &Model, f: &ModalFormula) -> Verdict {
    let p = p_only();
    if !respects(m, &p) {
        return fail("hypothesis: ~ does not respect {p}");
    }
    let (q, part) = quotient_with_partition(m, &p).map_err(|e| e.to_string())?;
    let here = satisfying_worlds(m, f);
    let there = satisfying_worlds(&q, f);
    for w in 0..m.world_count() {
        let c = part.class_of(w);
        if here[w] != there[c] {
            return fail(format!(
                "world {w} gives {} but its class {c} gives {}",
                here[w], there[c]
            ));
        }
    }
    Ok(())
}

fn base_variables(m: &Model) -> BTreeSet<String> {
    m.variables()
        .into_iter()
        .filter(|v| !v.starts_with(RESERVED_PREFIX))
        .collect()
}

fn meets_grid_hypotheses(m: &Model) -> bool {
    check_grid_hypotheses(m, &base_variables(m)).is_ok()
}

/// Pool models meeting the grid hypotheses, plus the number rejected.
pub fn respect_pool(seed: u64) -> (Vec<(String, Model)>, usize) {
    let (kept, rejected): (Vec<_>, Vec<_>) = pools::respect_candidates(seed)
        .into_iter()
        .partition(|(_, m)| meets_grid_hypotheses(m));
    (kept, rejected.len())
}

fn lemma5(r: &mut Runner, seed: u64) {
    let (kept, rejected) = respect_pool(seed);
    r.report.skipped = rejected;
    for (label, model) in kept {
        let verdict = respects_property(&model);
        r.record(label, Case::Respects { model }, verdict);
    }
}

fn grid_hypotheses(m: &Model) -> Verdict {
    check_grid_hypotheses(m, &base_variables(m)).map_err(|e| format!("hypothesis: {e}"))
}

fn run_respects(m: &Model) -> Verdict {
    grid_hypotheses(m)?;
    respects_property(m)
}

fn respects_property(m: &Model) -> Verdict {
    let mut all = base_variables(m);
    all.extend(d8_bit_set());
    if !respects(m, &all) {
        let (a, b, var) =
            kframe_core::abstraction::respects_counterexample(m, &all).expect("not respected");
        return fail(format!("worlds {a} ~ {b} disagree on {var}"));
    }
    let f = m.frame();
    let strict = |a: usize, b: usize| a != b && f.has_edge(a, b) && !f.has_edge(b, a);
    for w in 0..m.world_count() {
        let d = d8_value(m, w);
        let offset = |v: usize| (d8_value(m, v) + 8 - d) % 8;
        for y in f.successors(w).filter(|&y| strict(w, y)) {
            if !(2..=3).contains(&offset(y)) {
                return fail(format!("one step {w} -> {y} moves d8 by {}", offset(y)));
            }
            for z in f.successors(y).filter(|&z| strict(y, z) && z != w) {
                if !(2..=6).contains(&offset(z)) {
                    return fail(format!(
                        "two steps {w} -> {y} -> {z} move d8 by {}",
                        offset(z)
                    ));
                }
            }
        }
    }
    Ok(())
}

fn gbridge(r: &mut Runner, seed: u64) {
    let (kept, rejected) = respect_pool(seed);
    r.report.skipped = rejected;
    let formulas = pools::bridge_formulas();
    for (label, model) in kept {
        for f in &formulas {
            let verdict = bridge_property(&model, f);
            let case = Case::Bridge {
                model: model.clone(),
                formula: f.clone(),
            };
            r.record(format!("{label}, xi = {f}"), case, verdict);
        }
    }
}

fn run_bridge(m: &Model, xi: &ModalFormula) -> Verdict {
    grid_hypotheses(m)?;
    bridge_property(m, xi)
}

fn bridge_property(m: &Model, xi: &ModalFormula) -> Verdict {
    let g_box = translate_g(&ModalFormula::boxed(xi.clone())).map_err(|e| e.to_string())?;
    let g_xi = translate_g(xi).map_err(|e| e.to_string())?;
    let lhs = satisfying_worlds(m, &g_box);
    let inner = satisfying_worlds(m, &g_xi);
    let f = m.frame();
    for w in 0..m.world_count() {
        let rhs = f
            .successors(w)
            .filter(|&v| v != w && !f.sym_related(w, v))
            .all(|v| inner[v]);
        if lhs[w] != rhs {
            return fail(format!(
                "at world {w}: g([]xi) is {} but g(xi) on strict successors is {rhs}",
                lhs[w]
            ));
        }
    }
    Ok(())
}

fn thm6_forward(r: &mut Runner, seed: u64) {
    for t in pools::torus_instances(seed) {
        let label = format!("{}: {}", t.label, t.psi);
        r.run(
            label,
            Case::Forward {
                model: t.hat_model(),
                formula: t.psi,
            },
        );
    }
}

fn plain_torus_holds(hat: &Model, psi: &ModalFormula) -> Verdict {
    let plain = hat.with_frame(hat.frame().drop_reflexive_edges());
    match global_counterexample(&plain, psi) {
        None => Ok(()),
        Some(w) => fail(format!(
            "hypothesis: psi fails at world {w} of the loop-free model"
        )),
    }
}

fn stage_verdict(report: &PipelineReport) -> Verdict {
    match report.first_failure() {
        None => Ok(()),
        Some(s) => fail(format!("{}: {}", s.name, s.detail)),
    }
}

fn run_forward(hat: &Model, psi: &ModalFormula) -> Verdict {
    plain_torus_holds(hat, psi)?;
    let phi = reduce_f(psi).map_err(|e| e.to_string())?;
    let mut report = PipelineReport::default();
    hat_stage(&mut report, hat, &phi, 1);
    stage_verdict(&report)
}

fn run_round_trip(hat: &Model, psi: &ModalFormula) -> Verdict {
    plain_torus_holds(hat, psi)?;
    let phi = reduce_f(psi).map_err(|e| e.to_string())?;
    let mut report = PipelineReport::default();
    pull_back(&mut report, hat, psi, &phi, UNFOLD_K).map_err(|e| e.to_string())?;
    stage_verdict(&report)
}

fn run_converse(m: &Model, psi: &ModalFormula) -> Verdict {
    kernel_ok(m, "phi_final")?;
    let phi = localize(&reduce_f(psi).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let holds = satisfying_worlds(m, &phi);
    let Some(w_u) = (0..m.world_count()).find(|&w| holds[w]) else {
        return fail("hypothesis: localize(f(psi)) holds at no world");
    };
    let (sub, _) = extract_generated_submodel(m, w_u).map_err(|e| e.to_string())?;
    if sub.world_count() == 0 {
        return fail(format!(
            "world {w_u} satisfies localize(f(psi)) with no successors; the generated submodel is empty and there is no grid fragment to unfold"
        ));
    }
    let m0 = degrid(&sub, &psi.variables()).map_err(|e| format!("degrid: {e}"))?;
    let mut report = PipelineReport::default();
    unfold_stage(&mut report, &m0, psi, UNFOLD_K).map_err(|e| e.to_string())?;
    stage_verdict(&report)
}

fn thm8_roundtrip(r: &mut Runner, seed: u64) {
    for t in pools::torus_instances(seed) {
        let label = format!("{}: {}", t.label, t.psi);
        r.run(
            label,
            Case::RoundTrip {
                model: t.hat_model(),
                formula: t.psi,
            },
        );
    }
    let kernel = builtin("phi_final").expect("built-in");
    let config = SearchConfig {
        max_worlds: CONVERSE_MAX_WORLDS,
        ..SearchConfig::default()
    };
    for t in pools::required_torus_instances() {
        let phi =
            localize(&reduce_f(&t.psi).expect("pool formulas are reducible")).expect("fresh __u");
        let outcome = find_model(&kernel, &phi, &config).expect("valid bound");
        if let SearchStatus::Found { model, .. } = outcome.status {
            let label = format!("search witness for localize(f({}))", t.psi);
            r.run(
                label,
                Case::Converse {
                    model,
                    formula: t.psi,
                },
            );
        }
    }
}

fn run_subframe(k: &FoKernel, frame: &Frame) -> Verdict {
    if !eval_universal(frame, k) {
        return fail(format!("hypothesis: frame does not satisfy {}", k.name()));
    }
    let n = frame.world_count();
    for mask in 1..(1u32 << n) - 1 {
        let worlds: Vec<usize> = (0..n).filter(|&w| mask >> w & 1 == 1).collect();
        if !eval_universal(&frame.induced_subframe(&worlds), k) {
            return fail(format!(
                "induced subframe on worlds {worlds:?} violates {}",
                k.name()
            ));
        }
    }
    Ok(())
}

fn subframe(r: &mut Runner) {
    for k in builtins().into_iter().filter(FoKernel::is_basic) {
        // Membership tables for the smaller sizes, by adjacency code.
        let tables: Vec<Vec<bool>> = (0..4usize)
            .map(|n| match n {
                0 => vec![true],
                n => (0..1u64 << (n * n))
                    .map(|code| eval_universal(&Frame::from_code(n, code), &k))
                    .collect(),
            })
            .collect();
        for n in 1..=4usize {
            let frames: Vec<Frame> = if n < 4 {
                (0..1u64 << (n * n))
                    .filter(|&c| tables[n][c as usize])
                    .map(|c| Frame::from_code(n, c))
                    .collect()
            } else {
                kframe_core::enumerate_frames(4, &k).collect()
            };
            for frame in frames {
                let bad = (1..(1u32 << n) - 1).find_map(|mask| {
                    let worlds: Vec<usize> = (0..n).filter(|&w| mask >> w & 1 == 1).collect();
                    let sub = frame.induced_subframe(&worlds);
                    (!tables[worlds.len()][sub.code() as usize]).then_some(worlds)
                });
                let label = format!("{} on {n}-world frame code {:#x}", k.name(), frame.code());
                let case = Case::Subframe {
                    kernel: k.clone(),
                    model: Model::new(frame),
                };
                let verdict = match bad {
                    None => Ok(()),
                    Some(_) => case.run(),
                };
                r.record(label, case, verdict);
            }
        }
    }
}

fn run_oracle(
    k: &FoKernel,
    f: &ModalFormula,
    mode: Mode,
    witness: Option<&Model>,
    frames: &[Frame],
) -> Verdict {
    let config = SearchConfig {
        max_worlds: ORACLE_MAX_WORLDS,
        mode,
        ..SearchConfig::default()
    };
    let fast = find_model(k, f, &config).map_err(|e| e.to_string())?;
    let naive = oracle::find(frames, f, mode);
    let holds_naively = |m: &Model, w: Option<usize>| match w {
        Some(w) => oracle::truth(m, w, f),
        None => (0..m.world_count()).all(|v| oracle::truth(m, v, f)),
    };
    let holds_in_core = |m: &Model, w: Option<usize>| match w {
        Some(w) => check(m, w, f).unwrap_or(false),
        None => (0..m.world_count()).all(|v| check(m, v, f).unwrap_or(false)),
    };
    if let Some(m) = witness {
        let ok = match mode {
            Mode::Local => (0..m.world_count()).any(|w| oracle::truth(m, w, f)),
            Mode::Global => holds_naively(m, None),
        };
        if !oracle::satisfies(m.frame(), k) || !ok {
            return fail("recorded witness does not satisfy the kernel and formula");
        }
    }
    match (&fast.status, &naive) {
        (SearchStatus::Found { model, world }, Some(_)) => {
            if !oracle::satisfies(model.frame(), k) || !holds_naively(model, *world) {
                return fail("core witness fails under naive evaluation");
            }
            Ok(())
        }
        (SearchStatus::Exhausted, None) => Ok(()),
        (SearchStatus::Found { .. }, None) => {
            fail("core search found a model, naive enumeration did not")
        }
        (SearchStatus::Exhausted, Some((m, w))) => {
            let valid = eval_universal(m.frame(), k) && holds_in_core(m, *w);
            fail(format!(
                "naive enumeration found a model (core re-check {valid}), core search is exhausted"
            ))
        }
        (SearchStatus::Aborted(reason), _) => fail(format!("core search aborted: {reason:?}")),
    }
}

fn oracle_suite(r: &mut Runner) {
    let formulas = pools::search_formulas();
    for k in builtins() {
        let frames = oracle::kernel_frames(&k, ORACLE_MAX_WORLDS);
        for f in &formulas {
            for mode in [Mode::Local, Mode::Global] {
                let verdict = run_oracle(&k, f, mode, None, &frames);
                let witness = match &verdict {
                    Ok(()) => None,
                    Err(_) => oracle::find(&frames, f, mode).map(|(m, _)| m),
                };
                let label = format!("{} / {} / {f}", k.name(), mode_name(mode));
                r.record(
                    label,
                    Case::Oracle {
                        kernel: k.clone(),
                        formula: f.clone(),
                        mode,
                        witness,
                    },
                    verdict,
                );
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("lemma9".parse::<Suite>().is_err());
    }

    #[test]
    fn reflexive_frame_counts() {
        assert_eq!(reflexive_frames(1).count(), 1);
        assert_eq!(reflexive_frames(3).count(), 64);
        assert!(reflexive_frames(2).all(|f| f.is_reflexive()));
    }

    #[test]
    fn replay_round_trip_for_every_kind() {
        let m = Model::new(Frame::with_edges(2, [(0, 0), (1, 1), (0, 1)]).unwrap());
        let f = parse_modal("[]p -> <>q").unwrap();
        let k = builtin("phi_eq").unwrap();
        let cases = [
            Case::QuotientStructure { model: m.clone() },
            Case::QuotientTruth {
                model: m.clone(),
                formula: f.clone(),
            },
            Case::Respects { model: m.clone() },
            Case::Bridge {
                model: m.clone(),
                formula: f.clone(),
            },
            Case::Forward {
                model: m.clone(),
                formula: f.clone(),
            },
            Case::RoundTrip {
                model: m.clone(),
                formula: f.clone(),
            },
            Case::Converse {
                model: m.clone(),
                formula: f.clone(),
            },
            Case::Subframe {
                kernel: k.clone(),
                model: m.clone(),
            },
            Case::Oracle {
                kernel: k.clone(),
                formula: f.clone(),
                mode: Mode::Global,
                witness: Some(m.clone()),
            },
            Case::Oracle {
                kernel: k,
                formula: f,
                mode: Mode::Local,
                witness: None,
            },
        ];
        for case in cases {
            assert_eq!(
                parse_replay(&case.to_replay()).unwrap(),
                case,
                "{}",
                case.kind()
            );
        }
    }

    #[test]
    fn replay_errors() {
        assert!(parse_replay("suite lemma3\n").is_err());
        assert!(parse_replay("case respects\n").is_err());
        assert!(parse_replay("case nope\nmodel\nworlds 1\nend\n").is_err());
        assert!(parse_replay("case oracle\nformula p\nkernel builtin:phi_eq\n").is_err());
        match parse_replay("case respects\nmodel\nworlds 1\nedge 0 3\nend\n") {
            Err(Error::Format { line, .. }) => assert_eq!(line, 4),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn broken_cases_fail_and_replay_identically() {
        // Symmetric pair that disagrees on p: the quotient cannot preserve p.
        let mut m = Model::new(Frame::with_edges(2, [(0, 0), (1, 1), (0, 1), (1, 0)]).unwrap());
        m.set("p", 0, true);
        let case = Case::QuotientTruth {
            model: m,
            formula: parse_modal("p").unwrap(),
        };
        let first = case.run().unwrap_err();
        let replayed = parse_replay(&case.to_replay()).unwrap().run().unwrap_err();
        assert_eq!(first, replayed);
        assert!(first.contains("hypothesis"));

        let star = Frame::with_edges(4, [(0, 1), (0, 2), (0, 3)])
            .unwrap()
            .reflexive_closure();
        let case = Case::QuotientStructure {
            model: Model::new(star),
        };
        assert!(case.run().unwrap_err().contains("phi_grid"));
    }

    #[test]
    fn subframe_check_requires_its_hypothesis() {
        let k = kframe_core::fo::parse_kernel_body("R(x1,x1)").unwrap();
        let f = Frame::with_edges(2, [(0, 0)]).unwrap();
        assert!(run_subframe(&k, &f).unwrap_err().contains("hypothesis"));
        assert_eq!(run_subframe(&k, &f.reflexive_closure()), Ok(()));
    }
}
