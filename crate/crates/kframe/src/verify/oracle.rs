//! A deliberately naive second model finder. It shares no evaluation code
//! with the core search: kernels are evaluated over every assignment,
//! formulas by plain recursion, frames are generated from the highest code
//! down with column-major edge bits, and valuations are enumerated whole.

use kframe_core::{FoExpr, FoKernel, Frame, ModalFormula, Mode, Model};

pub fn holds_fo(frame: &Frame, e: &FoExpr, a: &[usize]) -> bool {
    match e {
        FoExpr::True => true,
        FoExpr::False => false,
        FoExpr::Edge(i, j) => frame.has_edge(a[i - 1], a[j - 1]),
        FoExpr::Eq(i, j) => a[i - 1] == a[j - 1],
        FoExpr::Not(x) => !holds_fo(frame, x, a),
        FoExpr::And(x, y) => holds_fo(frame, x, a) && holds_fo(frame, y, a),
        FoExpr::Or(x, y) => holds_fo(frame, x, a) || holds_fo(frame, y, a),
        FoExpr::Imp(x, y) => !holds_fo(frame, x, a) || holds_fo(frame, y, a),
        FoExpr::Iff(x, y) => holds_fo(frame, x, a) == holds_fo(frame, y, a),
    }
}

/// Every one of the `n^k` assignments, as an odometer.
pub fn satisfies(frame: &Frame, k: &FoKernel) -> bool {
    let n = frame.world_count();
    let vars = k.var_count();
    if n == 0 {
        return true;
    }
    let mut a = vec![0; vars];
    loop {
        if !holds_fo(frame, k.body(), &a) {
            return false;
        }
        let mut pos = 0;
        loop {
            if pos == vars {
                return true;
            }
            a[pos] += 1;
            if a[pos] < n {
                break;
            }
            a[pos] = 0;
            pos += 1;
        }
    }
}

pub fn truth(m: &Model, w: usize, f: &ModalFormula) -> bool {
    match f {
        ModalFormula::Var(v) => m.holds(v, w),
        ModalFormula::True => true,
        ModalFormula::False => false,
        ModalFormula::Not(x) => !truth(m, w, x),
        ModalFormula::And(x, y) => truth(m, w, x) && truth(m, w, y),
        ModalFormula::Or(x, y) => truth(m, w, x) || truth(m, w, y),
        ModalFormula::Imp(x, y) => !truth(m, w, x) || truth(m, w, y),
        ModalFormula::Iff(x, y) => truth(m, w, x) == truth(m, w, y),
        ModalFormula::Box(x) => {
            (0..m.world_count()).all(|v| !m.frame().has_edge(w, v) || truth(m, v, x))
        }
        ModalFormula::Dia(x) => {
            (0..m.world_count()).any(|v| m.frame().has_edge(w, v) && truth(m, v, x))
        }
    }
}

/// All frames with at most `max_worlds` worlds satisfying `k`.
pub fn kernel_frames(k: &FoKernel, max_worlds: usize) -> Vec<Frame> {
    let mut out = Vec::new();
    for n in 1..=max_worlds {
        let bits = n * n;
        for code in (0..1u64 << bits).rev() {
            let mut frame = Frame::new(n);
            for b in 0..bits {
                if code >> b & 1 == 1 {
                    frame.add_edge(b % n, b / n);
                }
            }
            if satisfies(&frame, k) {
                out.push(frame);
            }
        }
    }
    out
}

/// Some model over `frames` satisfying `f` (at the reported world, or
/// everywhere).
pub fn find(frames: &[Frame], f: &ModalFormula, mode: Mode) -> Option<(Model, Option<usize>)> {
    let vars: Vec<String> = f.variables().into_iter().collect();
    for frame in frames {
        let n = frame.world_count();
        let bits = n * vars.len();
        for mask in 0..1u64 << bits {
            let mut m = Model::new(frame.clone());
            for (vi, var) in vars.iter().enumerate() {
                for w in 0..n {
                    if mask >> (vi * n + w) & 1 == 1 {
                        m.set(var, w, true);
                    }
                }
            }
            match mode {
                Mode::Local => {
                    if let Some(w) = (0..n).find(|&w| truth(&m, w, f)) {
                        return Some((m, Some(w)));
                    }
                }
                Mode::Global => {
                    if (0..n).all(|w| truth(&m, w, f)) {
                        return Some((m, None));
                    }
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use kframe_core::{builtin, parse_modal};

    #[test]
    fn frame_counts_match_closed_forms() {
        assert_eq!(kernel_frames(&FoKernel::truth(), 2).len(), 2 + 16);
        let refl = kframe_core::fo::parse_kernel_body("R(x1,x1)").unwrap();
        assert_eq!(kernel_frames(&refl, 3).len(), 1 + 4 + 64);
    }

    #[test]
    fn star_fails_one_step() {
        let star = Frame::with_edges(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        assert!(!satisfies(&star, &builtin("phi_1step").unwrap()));
        assert!(satisfies(
            &star.reflexive_closure(),
            &builtin("phi_univ").unwrap()
        ));
    }

    #[test]
    fn finds_and_refutes() {
        let frames = kernel_frames(&FoKernel::truth(), 2);
        assert!(find(&frames, &parse_modal("p & !p").unwrap(), Mode::Local).is_none());
        let (m, w) = find(&frames, &parse_modal("<>p & !p").unwrap(), Mode::Local).unwrap();
        assert_eq!(m.world_count(), 2);
        assert!(truth(&m, w.unwrap(), &parse_modal("<>p & !p").unwrap()));
        assert!(find(&frames, &parse_modal("<>true").unwrap(), Mode::Global).is_some());
    }
}
