//! End-to-end run of the grid reduction on a torus: the input formula is
//! checked on the torus, pushed through the translation, localized under a
//! universal world, and pulled back again by extraction, degridding and
//! unfolding.

use std::fmt;

use kframe_core::fo::find_violation;
use kframe_core::grid::{
    add_universal_world, degrid, extract_generated_submodel, fragment_interior, localize,
    make_torus_hat_model, make_torus_model, reduce_f, unfold_grid_fragment, GridValuation,
};
use kframe_core::kripke::global_counterexample;
use kframe_core::{builtin, check, FoKernel, ModalFormula, Model};

use crate::error::Result;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stage {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PipelineReport {
    pub stages: Vec<Stage>,
}

pub const STAGE_NAMES: [&str; 6] = [
    "input",
    "hat-model",
    "universal-world",
    "extract",
    "degrid",
    "unfold",
];

impl PipelineReport {
    pub fn passed(&self) -> bool {
        self.stages.len() == STAGE_NAMES.len() && self.stages.iter().all(|s| s.passed)
    }

    pub fn first_failure(&self) -> Option<&Stage> {
        self.stages.iter().find(|s| !s.passed)
    }

    fn pass(&mut self, name: &'static str, detail: String) {
        self.stages.push(Stage {
            name,
            passed: true,
            detail,
        });
    }

    /// Records a failed stage and returns `false` so callers can stop.
    fn fail(&mut self, name: &'static str, detail: String) -> bool {
        self.stages.push(Stage {
            name,
            passed: false,
            detail,
        });
        false
    }
}

impl fmt::Display for PipelineReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.stages {
            let verdict = if s.passed { "pass" } else { "FAIL" };
            writeln!(f, "[{verdict}] {:<16} {}", s.name, s.detail)?;
        }
        let overall = if self.passed() {
            "all stages passed"
        } else {
            "stopped"
        };
        write!(f, "{overall}")
    }
}

#[derive(Debug, Clone)]
pub struct PipelineInput {
    pub psi: ModalFormula,
    pub width: usize,
    pub height: usize,
    pub valuation: GridValuation,
    pub k: usize,
}

fn torus_point(width: usize, w: usize) -> String {
    format!("world {w} = ({}, {})", w % width, w / width)
}

fn kernel_verdict(m: &Model, k: &FoKernel) -> std::result::Result<(), String> {
    match find_violation(m.frame(), k) {
        None => Ok(()),
        Some(a) => Err(format!("{} fails at assignment {a:?}", k.name())),
    }
}

/// Runs the six stages, stopping at the first failure. Errors are reserved
/// for unusable input (bad torus dimensions, reserved variable names).
pub fn run_pipeline(input: &PipelineInput) -> Result<PipelineReport> {
    let mut report = PipelineReport::default();
    let psi = &input.psi;
    let plain = make_torus_model(input.width, input.height, &input.valuation)?;
    let phi = reduce_f(psi)?;

    let depth = psi.modal_depth();
    if depth > 1 {
        report.fail("input", format!("modal depth {depth} exceeds 1"));
        return Ok(report);
    }
    if let Some(w) = global_counterexample(&plain, psi) {
        report.fail(
            "input",
            format!(
                "psi fails on the {}x{} torus at {}",
                input.width,
                input.height,
                torus_point(input.width, w)
            ),
        );
        return Ok(report);
    }
    report.pass(
        "input",
        format!(
            "psi holds globally on the {}x{} torus",
            input.width, input.height
        ),
    );

    let hat = make_torus_hat_model(input.width, input.height, &input.valuation)?;
    if hat_stage(&mut report, &hat, &phi, input.width) {
        pull_back(&mut report, &hat, psi, &phi, input.k)?;
    }
    Ok(report)
}

/// The hat model satisfies `phi_grid` and globally satisfies `f(psi)`.
pub(crate) fn hat_stage(
    report: &mut PipelineReport,
    hat: &Model,
    phi: &ModalFormula,
    width: usize,
) -> bool {
    let grid = builtin("phi_grid").expect("built-in");
    if let Err(e) = kernel_verdict(hat, &grid) {
        return report.fail("hat-model", e);
    }
    if let Some(w) = global_counterexample(hat, phi) {
        return report.fail(
            "hat-model",
            format!("f(psi) fails at {}", torus_point(width, w)),
        );
    }
    report.pass(
        "hat-model",
        format!(
            "{} worlds, phi_grid holds, f(psi) holds globally",
            hat.world_count()
        ),
    );
    true
}

/// Stages 3 to 6 starting from a hat model that globally satisfies `phi`.
pub(crate) fn pull_back(
    report: &mut PipelineReport,
    hat: &Model,
    psi: &ModalFormula,
    phi: &ModalFormula,
    k: usize,
) -> Result<bool> {
    let (big, w_u) = add_universal_world(hat)?;
    let localized = localize(phi)?;
    if let Err(e) = kernel_verdict(&big, &builtin("phi_final")?) {
        return Ok(report.fail("universal-world", e));
    }
    if !check(&big, w_u, &localized)? {
        return Ok(report.fail(
            "universal-world",
            format!("localize(f(psi)) fails at the universal world {w_u}"),
        ));
    }
    report.pass(
        "universal-world",
        format!("phi_final holds, localize(f(psi)) holds at world {w_u}"),
    );

    let (sub, _) = extract_generated_submodel(&big, w_u)?;
    if &sub != hat {
        return Ok(report.fail(
            "extract",
            "generated submodel differs from the hat model".into(),
        ));
    }
    report.pass(
        "extract",
        format!("{} worlds, identical to the hat model", sub.world_count()),
    );

    let vars = psi.variables();
    let m0 = match degrid(&sub, &vars) {
        Ok(m0) => m0,
        Err(e) => return Ok(report.fail("degrid", e.to_string())),
    };
    if let Some(w) = (0..m0.world_count()).find(|&w| m0.frame().successors(w).count() != 2) {
        return Ok(report.fail(
            "degrid",
            format!(
                "world {w} has {} successors, expected 2",
                m0.frame().successors(w).count()
            ),
        ));
    }
    report.pass(
        "degrid",
        format!(
            "{} classes, each with exactly two successors",
            m0.world_count()
        ),
    );

    unfold_stage(report, &m0, psi, k)
}

pub(crate) fn unfold_stage(
    report: &mut PipelineReport,
    m0: &Model,
    psi: &ModalFormula,
    k: usize,
) -> Result<bool> {
    let (frag, src) = match unfold_grid_fragment(m0, 0, k) {
        Ok(x) => x,
        Err(e) => return Ok(report.fail("unfold", e.to_string())),
    };
    let side = k + 1;
    for w in fragment_interior(k) {
        if !check(&frag, w, psi)? {
            return Ok(report.fail(
                "unfold",
                format!(
                    "psi fails at interior point ({}, {}) (source world {})",
                    w % side,
                    w / side,
                    src[w]
                ),
            ));
        }
    }
    report.pass(
        "unfold",
        format!("interior global satisfaction on the {k}x{k} interior of a {side}x{side} fragment"),
    );
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use kframe_core::parse_modal;

    fn input(psi: &str, valuation: GridValuation) -> PipelineInput {
        PipelineInput {
            psi: parse_modal(psi).unwrap(),
            width: 8,
            height: 4,
            valuation,
            k: 3,
        }
    }

    #[test]
    fn diamond_true_passes_every_stage() {
        let r = run_pipeline(&input("<>true", GridValuation::new())).unwrap();
        assert!(r.passed(), "{r}");
        let names: Vec<_> = r.stages.iter().map(|s| s.name).collect();
        assert_eq!(names, STAGE_NAMES);
        assert!(r.to_string().contains("interior global satisfaction"));
    }

    #[test]
    fn contradiction_stops_at_input() {
        let r = run_pipeline(&input("p & !p", GridValuation::new())).unwrap();
        assert_eq!(r.stages.len(), 1);
        assert_eq!(r.first_failure().unwrap().name, "input");
        assert!(r.first_failure().unwrap().detail.contains("(0, 0)"));
    }

    #[test]
    fn deep_formulas_are_rejected() {
        let r = run_pipeline(&input("[][]true", GridValuation::new())).unwrap();
        assert!(r.first_failure().unwrap().detail.contains("modal depth 2"));
    }

    #[test]
    fn bad_dimensions_are_errors() {
        let mut i = input("<>true", GridValuation::new());
        i.width = 6;
        assert!(run_pipeline(&i).is_err());
    }
}
