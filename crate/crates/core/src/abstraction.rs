//! The symmetric-edge partition of a model and the quotient `M/~`.
//!
//! On reflexive models satisfying `phi_eq`, `w ~ v` (edges both ways) is an
//! equivalence whose classes have identical in- and out-neighbourhoods, so
//! the quotient frame is well defined on any choice of representatives.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result, Violation};
use crate::fo::{builtin, find_violation};
use crate::kripke::{Frame, Model};

/// `~`-classes, indexed by their smallest member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    class_of: Vec<usize>,
    classes: Vec<Vec<usize>>,
}

impl Partition {
    pub fn class_of(&self, w: usize) -> usize {
        self.class_of[w]
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    /// Smallest member of class `c`.
    pub fn representative(&self, c: usize) -> usize {
        self.classes[c][0]
    }

    pub fn is_discrete(&self) -> bool {
        self.classes.iter().all(|c| c.len() == 1)
    }
}

/// Partition of a reflexive `phi_eq` model by `~`.
pub fn compute_partition(m: &Model) -> Result<Partition> {
    let frame = m.frame();
    if let Some(world) = frame.first_irreflexive() {
        return Err(Error::Precondition(Violation::NotReflexive { world }));
    }
    let eq = builtin("phi_eq")?;
    if let Some(assignment) = find_violation(frame, &eq) {
        return Err(Error::Precondition(Violation::Kernel {
            name: eq.name().into(),
            assignment,
        }));
    }
    sym_partition(frame)
}

fn sym_partition(frame: &Frame) -> Result<Partition> {
    let n = frame.world_count();
    let mut class_of = vec![usize::MAX; n];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for w in 0..n {
        if class_of[w] != usize::MAX {
            continue;
        }
        let c = classes.len();
        let members: Vec<usize> = (0..n).filter(|&v| frame.sym_related(w, v)).collect();
        for &v in &members {
            if class_of[v] != usize::MAX {
                // v ~ w but v already sits in an earlier class it is ~ to.
                let a = classes[class_of[v]][0];
                return Err(Error::Precondition(Violation::NotEquivalence {
                    a,
                    b: v,
                    c: w,
                }));
            }
            class_of[v] = c;
        }
        classes.push(members);
    }
    // Transitivity inside each class.
    for members in &classes {
        for &a in members {
            for &b in members {
                if !frame.sym_related(a, b) {
                    return Err(Error::Precondition(Violation::NotEquivalence {
                        a,
                        b: members[0],
                        c: b,
                    }));
                }
            }
        }
    }
    Ok(Partition { class_of, classes })
}

/// `M/~`: one world per class, edges between representatives, and `p ∈ P`
/// true at a class iff true at all of its members. Variables outside `P`
/// are false everywhere.
pub fn quotient(m: &Model, p_set: &BTreeSet<String>) -> Result<Model> {
    quotient_with_partition(m, p_set).map(|(q, _)| q)
}

pub fn quotient_with_partition(m: &Model, p_set: &BTreeSet<String>) -> Result<(Model, Partition)> {
    let part = compute_partition(m)?;
    let k = part.class_count();
    let mut frame = Frame::new(k);
    for a in 0..k {
        for b in 0..k {
            if m.frame()
                .has_edge(part.representative(a), part.representative(b))
            {
                frame.add_edge(a, b);
            }
        }
    }
    let mut q = Model::new(frame);
    for p in p_set {
        for (c, members) in part.classes().iter().enumerate() {
            if members.iter().all(|&w| m.holds(p, w)) {
                q.set(p, c, true);
            }
        }
    }
    Ok((q, part))
}

/// `~` respects `P`: symmetric pairs agree on every variable of `P`.
pub fn respects(m: &Model, p_set: &BTreeSet<String>) -> bool {
    let n = m.world_count();
    (0..n).all(|w| {
        (w + 1..n)
            .filter(|&v| m.sym_related(w, v))
            .all(|v| m.same_label(w, v, p_set))
    })
}

/// First symmetric pair on which some variable of `P` differs.
pub fn respects_counterexample(
    m: &Model,
    p_set: &BTreeSet<String>,
) -> Option<(usize, usize, String)> {
    let n = m.world_count();
    for w in 0..n {
        for v in w + 1..n {
            if m.sym_related(w, v) {
                if let Some(p) = p_set.iter().find(|p| m.holds(p, w) != m.holds(p, v)) {
                    return Some((w, v, p.clone()));
                }
            }
        }
    }
    None
}

/// The three structural properties a quotient of a reflexive `phi_grid`
/// frame has.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AbstractionStructure {
    pub reflexive: bool,
    /// At most two successors other than the world itself.
    pub max_two_succ: bool,
    /// At most three worlds at the end of a length-2 path without loops.
    pub max_three_twostep: bool,
}

impl AbstractionStructure {
    pub fn all(&self) -> bool {
        self.reflexive && self.max_two_succ && self.max_three_twostep
    }
}

pub fn check_abstraction_structure(f: &Frame) -> AbstractionStructure {
    let n = f.world_count();
    let reflexive = f.is_reflexive();
    let max_two_succ = (0..n).all(|w| f.successors(w).filter(|&v| v != w).count() <= 2);
    let max_three_twostep = (0..n).all(|w| {
        let mut ends = BTreeSet::new();
        for y in f.successors(w).filter(|&y| y != w) {
            ends.extend(f.successors(y).filter(|&z| z != y));
        }
        ends.len() <= 3
    });
    AbstractionStructure {
        reflexive,
        max_two_succ,
        max_three_twostep,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_modal;
    use crate::kripke::check;
    use alloc::string::ToString;

    fn set(vars: &[&str]) -> BTreeSet<String> {
        vars.iter().map(|s| s.to_string()).collect()
    }

    fn clique2() -> Model {
        Model::new(Frame::with_edges(2, [(0, 0), (0, 1), (1, 0), (1, 1)]).unwrap())
    }

    #[test]
    fn partition_examples() {
        let p = compute_partition(&clique2()).unwrap();
        assert_eq!(p.classes(), &[vec![0, 1]]);
        let anti = Model::new(Frame::new(3).reflexive_closure());
        let p = compute_partition(&anti).unwrap();
        assert_eq!(p.classes(), &[vec![0], vec![1], vec![2]]);
        assert!(p.is_discrete());
    }

    #[test]
    fn partition_rejects_bad_inputs() {
        let chain = Model::new(Frame::with_edges(2, [(0, 1)]).unwrap());
        assert_eq!(
            compute_partition(&chain),
            Err(Error::Precondition(Violation::NotReflexive { world: 0 }))
        );
        // 0 ~ 1, 1 -> 2 but not 0 -> 2.
        let f = Frame::with_edges(3, [(0, 1), (1, 0), (1, 2)])
            .unwrap()
            .reflexive_closure();
        match compute_partition(&Model::new(f)) {
            Err(Error::Precondition(Violation::Kernel { name, assignment })) => {
                assert_eq!(name, "phi_eq");
                assert_eq!(assignment, vec![0, 1, 2]);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn sym_partition_detects_non_transitivity() {
        // 0 ~ 1 ~ 2 without 0 ~ 2.
        let f = Frame::with_edges(3, [(0, 1), (1, 0), (1, 2), (2, 1)])
            .unwrap()
            .reflexive_closure();
        assert!(matches!(
            sym_partition(&f),
            Err(Error::Precondition(Violation::NotEquivalence { .. }))
        ));
    }

    #[test]
    fn quotient_valuation_rules() {
        let mut m = clique2();
        m.set_true_at("p", [0, 1]).unwrap();
        let q = quotient(&m, &set(&["p"])).unwrap();
        assert_eq!(q.world_count(), 1);
        assert!(q.frame().is_reflexive());
        assert!(q.holds("p", 0));

        let mut m = clique2();
        m.set("p", 1, true);
        let q = quotient(&m, &set(&["p"])).unwrap();
        assert!(!q.holds("p", 0));

        let mut m = Model::new(Frame::new(2).reflexive_closure());
        m.set("q", 0, true);
        let q = quotient(&m, &set(&["p"])).unwrap();
        assert!(q.truth_set("q").is_empty());
    }

    #[test]
    fn respects_examples() {
        let mut anti = Model::new(Frame::new(3).reflexive_closure());
        anti.set("p", 1, true);
        assert!(respects(&anti, &set(&["p", "q"])));
        let mut m = clique2();
        m.set("p", 0, true);
        assert!(!respects(&m, &set(&["p"])));
        assert!(respects(&m, &set(&["q"])));
        assert_eq!(
            respects_counterexample(&m, &set(&["p"])),
            Some((0, 1, "p".into()))
        );
    }

    #[test]
    fn quotient_preserves_truth_when_respected() {
        // Two 2-cliques with a one-way edge between them.
        let f = Frame::with_edges(
            4,
            [
                (0, 1),
                (1, 0),
                (2, 3),
                (3, 2),
                (0, 2),
                (0, 3),
                (1, 2),
                (1, 3),
            ],
        )
        .unwrap()
        .reflexive_closure();
        let mut m = Model::new(f);
        m.set_true_at("p", [2, 3]).unwrap();
        let p = set(&["p"]);
        assert!(respects(&m, &p));
        let (q, part) = quotient_with_partition(&m, &p).unwrap();
        assert_eq!(q.world_count(), 2);
        for s in ["<>p", "[]p", "!p & <>p", "[][]p", "<>[]!p"] {
            let phi = parse_modal(s).unwrap();
            for w in 0..4 {
                assert_eq!(
                    check(&m, w, &phi).unwrap(),
                    check(&q, part.class_of(w), &phi).unwrap(),
                    "{s} at {w}"
                );
            }
        }
    }

    fn grid_fragment(size: usize) -> Frame {
        let mut f = Frame::new(size * size);
        for j in 0..size {
            for i in 0..size {
                let w = i + size * j;
                if i + 1 < size {
                    f.add_edge(w, w + 1);
                }
                if j + 1 < size {
                    f.add_edge(w, w + size);
                }
            }
        }
        f
    }

    #[test]
    fn structure_examples() {
        let all = AbstractionStructure {
            reflexive: true,
            max_two_succ: true,
            max_three_twostep: true,
        };
        assert_eq!(
            check_abstraction_structure(&grid_fragment(5).reflexive_closure()),
            all
        );
        let star = Frame::with_edges(4, [(0, 1), (0, 2), (0, 3)])
            .unwrap()
            .reflexive_closure();
        let s = check_abstraction_structure(&star);
        assert!(s.reflexive && !s.max_two_succ);
        assert_eq!(
            check_abstraction_structure(&Frame::with_edges(1, [(0, 0)]).unwrap()),
            all
        );
        assert!(!check_abstraction_structure(&grid_fragment(2)).reflexive);
    }
}
