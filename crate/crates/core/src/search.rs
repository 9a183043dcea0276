//! Bounded model finding: does some model of a kernel, with at most
//! `max_worlds` worlds, satisfy a formula (at a world, or globally)?
//!
//! Frames are enumerated by size and then by adjacency code, filtered by
//! the kernel. Valuations of the formula's variables are searched
//! world-by-world with three-valued evaluation, so partial valuations that
//! already decide the formula are not extended. The first hit in this order
//! is reported, which makes the witness deterministic.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fo::{eval_universal, FoKernel};
use crate::formula::ModalFormula;
use crate::kripke::{Frame, Model};

/// Largest frame size [`enumerate_frames`] supports (`n²` code bits).
pub const MAX_ENUMERABLE_WORLDS: usize = 7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    /// Some world satisfies the formula.
    #[default]
    Local,
    /// Every world satisfies the formula.
    Global,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchConfig {
    pub max_worlds: usize,
    pub mode: Mode,
    /// Abort after this many candidate frames.
    pub frame_limit: Option<u64>,
    /// Abort after this many valuation search nodes.
    pub node_limit: Option<u64>,
    /// Skip frames whose adjacency code is not minimal under relabelling.
    pub symmetry_reduction: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            max_worlds: 4,
            mode: Mode::Local,
            frame_limit: None,
            node_limit: None,
            symmetry_reduction: false,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SearchStats {
    /// Candidate frames generated.
    pub frames_examined: u64,
    /// Candidate frames satisfying the kernel.
    pub frames_accepted: u64,
    /// Valuation search nodes (partial valuations evaluated).
    pub models_examined: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AbortReason {
    FrameLimit(u64),
    NodeLimit(u64),
    /// Stopped by the caller's progress hook.
    Interrupted,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchStatus {
    /// `world` is absent in global mode.
    Found {
        model: Model,
        world: Option<usize>,
    },
    /// Every frame up to the bound was examined without a hit.
    Exhausted,
    Aborted(AbortReason),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOutcome {
    pub status: SearchStatus,
    pub stats: SearchStats,
}

impl SearchOutcome {
    pub fn is_found(&self) -> bool {
        matches!(self.status, SearchStatus::Found { .. })
    }

    pub fn is_exhausted(&self) -> bool {
        matches!(self.status, SearchStatus::Exhausted)
    }
}

/// All frames on `n` worlds satisfying `k`, in adjacency code order.
pub fn enumerate_frames(n: usize, k: &FoKernel) -> impl Iterator<Item = Frame> + '_ {
    assert!(
        (1..=MAX_ENUMERABLE_WORLDS).contains(&n),
        "frame enumeration supports 1..={MAX_ENUMERABLE_WORLDS} worlds"
    );
    (0..1u64 << (n * n))
        .map(move |code| Frame::from_code(n, code))
        .filter(move |f| eval_universal(f, k))
}

pub fn find_model(k: &FoKernel, f: &ModalFormula, config: &SearchConfig) -> Result<SearchOutcome> {
    find_model_with(k, f, config, |_| true)
}

/// As [`find_model`], calling `progress` before each candidate frame; a
/// `false` return aborts the search.
pub fn find_model_with(
    k: &FoKernel,
    f: &ModalFormula,
    config: &SearchConfig,
    mut progress: impl FnMut(&SearchStats) -> bool,
) -> Result<SearchOutcome> {
    if config.max_worlds == 0 || config.max_worlds > MAX_ENUMERABLE_WORLDS {
        return Err(Error::Kernel(alloc::format!(
            "max_worlds must be in 1..={MAX_ENUMERABLE_WORLDS}"
        )));
    }
    let compiled = Compiled::new(f);
    let depth = f.modal_depth();
    let mut stats = SearchStats::default();
    let abort = |reason, stats| {
        Ok(SearchOutcome {
            status: SearchStatus::Aborted(reason),
            stats,
        })
    };
    for n in 1..=config.max_worlds {
        let perms = if config.symmetry_reduction {
            permutations(n)
        } else {
            Vec::new()
        };
        for code in 0..1u64 << (n * n) {
            if !progress(&stats) {
                return abort(AbortReason::Interrupted, stats);
            }
            if let Some(limit) = config.frame_limit {
                if stats.frames_examined >= limit {
                    return abort(AbortReason::FrameLimit(limit), stats);
                }
            }
            stats.frames_examined += 1;
            if config.symmetry_reduction && !is_canonical(n, code, &perms) {
                continue;
            }
            let frame = Frame::from_code(n, code);
            if !eval_universal(&frame, k) {
                continue;
            }
            stats.frames_accepted += 1;
            let targets: Vec<Option<usize>> = match config.mode {
                Mode::Local => (0..n).map(Some).collect(),
                Mode::Global => vec![None],
            };
            for target in targets {
                let mut search = ValuationSearch::new(&compiled, &frame, target, depth);
                let hit = search.run(&mut stats.models_examined, config.node_limit);
                match hit {
                    Step::Found => {
                        return Ok(SearchOutcome {
                            status: SearchStatus::Found {
                                model: search.into_model(),
                                world: target,
                            },
                            stats,
                        })
                    }
                    Step::Limit => {
                        let limit = config.node_limit.unwrap_or(0);
                        return abort(AbortReason::NodeLimit(limit), stats);
                    }
                    Step::None => {}
                }
            }
        }
    }
    Ok(SearchOutcome {
        status: SearchStatus::Exhausted,
        stats,
    })
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                go(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Whether `code` is the smallest code among all relabellings.
fn is_canonical(n: usize, code: u64, perms: &[Vec<usize>]) -> bool {
    let bits = n * n;
    let bit = |c: u64, i: usize, j: usize| c >> (bits - 1 - (i * n + j)) & 1;
    perms.iter().all(|p| {
        let mut relabelled = 0u64;
        for i in 0..n {
            for j in 0..n {
                relabelled = (relabelled << 1) | bit(code, p[i], p[j]);
            }
        }
        relabelled >= code
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Tri {
    False,
    Unknown,
    True,
}

impl Tri {
    fn from_bool(b: bool) -> Tri {
        if b {
            Tri::True
        } else {
            Tri::False
        }
    }

    fn not(self) -> Tri {
        match self {
            Tri::False => Tri::True,
            Tri::Unknown => Tri::Unknown,
            Tri::True => Tri::False,
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum Node {
    Var(usize),
    True,
    False,
    Not(usize),
    And(usize, usize),
    Or(usize, usize),
    Imp(usize, usize),
    Iff(usize, usize),
    Box(usize),
    Dia(usize),
}

/// Formula flattened into an arena with variables numbered.
struct Compiled {
    nodes: Vec<Node>,
    root: usize,
    vars: Vec<String>,
}

impl Compiled {
    fn new(f: &ModalFormula) -> Self {
        let vars: Vec<String> = f.variables().into_iter().collect();
        let index: BTreeMap<&str, usize> = vars
            .iter()
            .enumerate()
            .map(|(i, v)| (v.as_str(), i))
            .collect();
        let mut nodes = Vec::new();
        let root = Self::lower(f, &index, &mut nodes);
        Compiled { nodes, root, vars }
    }

    fn lower(f: &ModalFormula, index: &BTreeMap<&str, usize>, nodes: &mut Vec<Node>) -> usize {
        use ModalFormula as F;
        let node = match f {
            F::Var(v) => Node::Var(index[v.as_str()]),
            F::True => Node::True,
            F::False => Node::False,
            F::Not(c) => Node::Not(Self::lower(c, index, nodes)),
            F::Box(c) => Node::Box(Self::lower(c, index, nodes)),
            F::Dia(c) => Node::Dia(Self::lower(c, index, nodes)),
            F::And(a, b) => Node::And(Self::lower(a, index, nodes), Self::lower(b, index, nodes)),
            F::Or(a, b) => Node::Or(Self::lower(a, index, nodes), Self::lower(b, index, nodes)),
            F::Imp(a, b) => Node::Imp(Self::lower(a, index, nodes), Self::lower(b, index, nodes)),
            F::Iff(a, b) => Node::Iff(Self::lower(a, index, nodes), Self::lower(b, index, nodes)),
        };
        nodes.push(node);
        nodes.len() - 1
    }
}

enum Step {
    Found,
    None,
    Limit,
}

struct ValuationSearch<'a> {
    formula: &'a Compiled,
    frame: &'a Frame,
    succ: Vec<Vec<usize>>,
    target: Option<usize>,
    /// `val[w * vars + v]`.
    val: Vec<Tri>,
    /// (world, variable) slots still to decide, in search order.
    slots: Vec<(usize, usize)>,
}

impl<'a> ValuationSearch<'a> {
    fn new(formula: &'a Compiled, frame: &'a Frame, target: Option<usize>, depth: usize) -> Self {
        let n = frame.world_count();
        let nv = formula.vars.len();
        let succ: Vec<Vec<usize>> = (0..n).map(|w| frame.successors(w).collect()).collect();
        // Only worlds within modal-depth distance of the target can matter;
        // the rest keep every variable false.
        let relevant: Vec<usize> = match target {
            Some(t) => {
                let mut dist = vec![usize::MAX; n];
                dist[t] = 0;
                let mut order = vec![t];
                let mut head = 0;
                while head < order.len() {
                    let w = order[head];
                    head += 1;
                    if dist[w] == depth {
                        continue;
                    }
                    for &v in &succ[w] {
                        if dist[v] == usize::MAX {
                            dist[v] = dist[w] + 1;
                            order.push(v);
                        }
                    }
                }
                let mut rest: Vec<usize> = order[1..].to_vec();
                rest.sort_unstable();
                core::iter::once(t).chain(rest).collect()
            }
            None => (0..n).collect(),
        };
        let mut val = vec![Tri::False; n * nv];
        let mut slots = Vec::with_capacity(relevant.len() * nv);
        for &w in &relevant {
            for v in 0..nv {
                val[w * nv + v] = Tri::Unknown;
                slots.push((w, v));
            }
        }
        ValuationSearch {
            formula,
            frame,
            succ,
            target,
            val,
            slots,
        }
    }

    fn run(&mut self, nodes: &mut u64, limit: Option<u64>) -> Step {
        self.descend(0, nodes, limit)
    }

    fn descend(&mut self, slot: usize, nodes: &mut u64, limit: Option<u64>) -> Step {
        if let Some(l) = limit {
            if *nodes >= l {
                return Step::Limit;
            }
        }
        *nodes += 1;
        match self.status() {
            Tri::True => {
                for &(w, v) in &self.slots[slot..] {
                    self.val[w * self.formula.vars.len() + v] = Tri::False;
                }
                return Step::Found;
            }
            Tri::False => return Step::None,
            Tri::Unknown => {}
        }
        let (w, v) = self.slots[slot];
        let at = w * self.formula.vars.len() + v;
        for choice in [Tri::False, Tri::True] {
            self.val[at] = choice;
            match self.descend(slot + 1, nodes, limit) {
                Step::None => {}
                done => return done,
            }
        }
        self.val[at] = Tri::Unknown;
        Step::None
    }

    fn status(&self) -> Tri {
        match self.target {
            Some(t) => self.eval(self.formula.root, t),
            None => {
                let mut all = Tri::True;
                for w in 0..self.frame.world_count() {
                    match self.eval(self.formula.root, w) {
                        Tri::False => return Tri::False,
                        Tri::Unknown => all = Tri::Unknown,
                        Tri::True => {}
                    }
                }
                all
            }
        }
    }

    fn eval(&self, node: usize, w: usize) -> Tri {
        match self.formula.nodes[node] {
            Node::Var(v) => self.val[w * self.formula.vars.len() + v],
            Node::True => Tri::True,
            Node::False => Tri::False,
            Node::Not(c) => self.eval(c, w).not(),
            Node::And(a, b) => match self.eval(a, w) {
                Tri::False => Tri::False,
                ta => match (ta, self.eval(b, w)) {
                    (_, Tri::False) => Tri::False,
                    (Tri::True, Tri::True) => Tri::True,
                    _ => Tri::Unknown,
                },
            },
            Node::Or(a, b) => match self.eval(a, w) {
                Tri::True => Tri::True,
                ta => match (ta, self.eval(b, w)) {
                    (_, Tri::True) => Tri::True,
                    (Tri::False, Tri::False) => Tri::False,
                    _ => Tri::Unknown,
                },
            },
            Node::Imp(a, b) => match self.eval(a, w) {
                Tri::False => Tri::True,
                ta => match (ta, self.eval(b, w)) {
                    (_, Tri::True) => Tri::True,
                    (Tri::True, Tri::False) => Tri::False,
                    _ => Tri::Unknown,
                },
            },
            Node::Iff(a, b) => match (self.eval(a, w), self.eval(b, w)) {
                (Tri::Unknown, _) | (_, Tri::Unknown) => Tri::Unknown,
                (x, y) => Tri::from_bool(x == y),
            },
            Node::Box(c) => {
                let mut acc = Tri::True;
                for &v in &self.succ[w] {
                    match self.eval(c, v) {
                        Tri::False => return Tri::False,
                        Tri::Unknown => acc = Tri::Unknown,
                        Tri::True => {}
                    }
                }
                acc
            }
            Node::Dia(c) => {
                let mut acc = Tri::False;
                for &v in &self.succ[w] {
                    match self.eval(c, v) {
                        Tri::True => return Tri::True,
                        Tri::Unknown => acc = Tri::Unknown,
                        Tri::False => {}
                    }
                }
                acc
            }
        }
    }

    fn into_model(self) -> Model {
        let nv = self.formula.vars.len();
        let mut m = Model::new(self.frame.clone());
        for w in 0..self.frame.world_count() {
            for (v, name) in self.formula.vars.iter().enumerate() {
                if self.val[w * nv + v] == Tri::True {
                    m.set(name, w, true);
                }
            }
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fo::{builtin, parse_kernel_body};
    use crate::formula::parse_modal;
    use crate::kripke::{check, check_global};

    fn f(s: &str) -> ModalFormula {
        parse_modal(s).unwrap()
    }

    fn cfg(max_worlds: usize, mode: Mode) -> SearchConfig {
        SearchConfig {
            max_worlds,
            mode,
            ..SearchConfig::default()
        }
    }

    #[test]
    fn frame_counts() {
        assert_eq!(enumerate_frames(1, &FoKernel::truth()).count(), 2);
        assert_eq!(enumerate_frames(1, &builtin("phi_eq").unwrap()).count(), 2);
        let refl = parse_kernel_body("R(x1,x1)").unwrap();
        let frames: Vec<_> = enumerate_frames(2, &refl).collect();
        assert_eq!(frames.len(), 4);
        assert!(frames.iter().all(Frame::is_reflexive));
        assert_eq!(enumerate_frames(2, &FoKernel::truth()).count(), 16);
        let codes: Vec<u64> = enumerate_frames(2, &refl).map(|f| f.code()).collect();
        let mut sorted = codes.clone();
        sorted.sort_unstable();
        assert_eq!(codes, sorted);
    }

    #[test]
    fn universal_world_witness() {
        let out = find_model(
            &builtin("phi_final").unwrap(),
            &f("__u & []!__u"),
            &cfg(1, Mode::Local),
        )
        .unwrap();
        match out.status {
            SearchStatus::Found { model, world } => {
                assert_eq!(world, Some(0));
                assert_eq!(model.world_count(), 1);
                assert_eq!(model.frame().edge_count(), 0);
                assert!(model.holds("__u", 0));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn contradiction_is_exhausted() {
        let out = find_model(&FoKernel::truth(), &f("p & !p"), &cfg(3, Mode::Local)).unwrap();
        assert!(out.is_exhausted());
        assert_eq!(out.stats.frames_examined, 2 + 16 + 512);
    }

    #[test]
    fn global_mode() {
        // <>true everywhere needs a serial frame: the 1-world loop.
        let out = find_model(&FoKernel::truth(), &f("<>true"), &cfg(2, Mode::Global)).unwrap();
        match out.status {
            SearchStatus::Found { model, world } => {
                assert_eq!(world, None);
                assert!(check_global(&model, &f("<>true")));
                assert_eq!(model.frame().code(), 1);
            }
            other => panic!("unexpected {other:?}"),
        }
        // p and <>!p everywhere with every world reflexive needs two worlds.
        let refl = parse_kernel_body("R(x1,x1)").unwrap();
        let out = find_model(&refl, &f("p <-> []p"), &cfg(2, Mode::Global)).unwrap();
        assert!(out.is_found());
        let out = find_model(&refl, &f("<>p & <>!p & (p -> []p)"), &cfg(3, Mode::Global)).unwrap();
        assert!(out.is_exhausted());
    }

    #[test]
    fn limits_abort() {
        let limited = SearchConfig {
            frame_limit: Some(5),
            ..cfg(3, Mode::Local)
        };
        let out = find_model(&FoKernel::truth(), &f("p & !p"), &limited).unwrap();
        assert_eq!(
            out.status,
            SearchStatus::Aborted(AbortReason::FrameLimit(5))
        );
        let out = find_model_with(
            &FoKernel::truth(),
            &f("p & !p"),
            &cfg(3, Mode::Local),
            |s| s.frames_examined < 3,
        )
        .unwrap();
        assert_eq!(out.status, SearchStatus::Aborted(AbortReason::Interrupted));
        assert!(find_model(&FoKernel::truth(), &f("p"), &cfg(0, Mode::Local)).is_err());
    }

    #[test]
    fn witnesses_revalidate() {
        let kernels = [
            builtin("phi_eq").unwrap(),
            builtin("phi_univ").unwrap(),
            FoKernel::truth(),
        ];
        let pool = [
            "<>p & <>!p",
            "[]<>p & !p",
            "<>(p & []!p)",
            "p & [](!p & <>p)",
            "[]false & p",
        ];
        for k in &kernels {
            for s in pool {
                let phi = f(s);
                let out = find_model(k, &phi, &cfg(3, Mode::Local)).unwrap();
                if let SearchStatus::Found { model, world } = out.status {
                    assert!(eval_universal(model.frame(), k));
                    assert!(check(&model, world.unwrap(), &phi).unwrap(), "{s}");
                }
            }
        }
    }

    #[test]
    fn symmetry_reduction_preserves_status() {
        let kernels = [
            builtin("phi_eq").unwrap(),
            builtin("phi_1step").unwrap(),
            FoKernel::truth(),
        ];
        let pool = [
            "<>p & <>!p",
            "<>p & <>q & <>(!p & !q) & []!r",
            "p & !p",
            "[][]p & <>!p",
        ];
        for k in &kernels {
            for s in pool {
                for mode in [Mode::Local, Mode::Global] {
                    let plain = find_model(k, &f(s), &cfg(3, mode)).unwrap();
                    let reduced = find_model(
                        k,
                        &f(s),
                        &SearchConfig {
                            symmetry_reduction: true,
                            ..cfg(3, mode)
                        },
                    )
                    .unwrap();
                    assert_eq!(
                        plain.is_found(),
                        reduced.is_found(),
                        "{} {s} {mode:?}",
                        k.name()
                    );
                }
            }
        }
    }

    #[test]
    fn canonical_codes() {
        let perms = permutations(2);
        assert_eq!(perms.len(), 2);
        // Edge 0->1 (code 0b0100) and edge 1->0 (0b0010) are relabellings.
        assert!(is_canonical(2, 0b0010, &perms));
        assert!(!is_canonical(2, 0b0100, &perms));
        assert_eq!(permutations(4).len(), 24);
    }
}
