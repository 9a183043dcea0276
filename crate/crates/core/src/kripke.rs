//! Finite frames, models and the satisfaction relation.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::formula::ModalFormula;

/// A finite directed graph on worlds `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Frame {
    n: usize,
    adj: Vec<bool>,
}

impl Frame {
    /// `n` worlds, no edges.
    pub fn new(n: usize) -> Self {
        Frame {
            n,
            adj: vec![false; n * n],
        }
    }

    pub fn with_edges<I: IntoIterator<Item = (usize, usize)>>(n: usize, edges: I) -> Result<Self> {
        let mut f = Frame::new(n);
        for (i, j) in edges {
            f.try_add_edge(i, j)?;
        }
        Ok(f)
    }

    /// Decodes the adjacency bit string produced by [`Frame::code`].
    pub fn from_code(n: usize, code: u64) -> Self {
        let mut f = Frame::new(n);
        let bits = n * n;
        for k in 0..bits {
            if code >> (bits - 1 - k) & 1 == 1 {
                f.adj[k] = true;
            }
        }
        f
    }

    /// Row-major adjacency matrix read as a binary number, entry (0,0)
    /// most significant. Only defined for `n <= 8`.
    pub fn code(&self) -> u64 {
        assert!(self.n <= 8, "frame codes are limited to 8 worlds");
        self.adj
            .iter()
            .fold(0u64, |acc, &b| (acc << 1) | u64::from(b))
    }

    pub fn world_count(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adj[i * self.n + j]
    }

    pub fn add_edge(&mut self, i: usize, j: usize) {
        self.try_add_edge(i, j).expect("edge endpoint out of range");
    }

    pub fn try_add_edge(&mut self, i: usize, j: usize) -> Result<()> {
        for w in [i, j] {
            if w >= self.n {
                return Err(Error::WorldOutOfRange {
                    world: w,
                    worlds: self.n,
                });
            }
        }
        self.adj[i * self.n + j] = true;
        Ok(())
    }

    pub fn remove_edge(&mut self, i: usize, j: usize) {
        self.adj[i * self.n + j] = false;
    }

    pub fn successors(&self, w: usize) -> impl Iterator<Item = usize> + '_ {
        let row = &self.adj[w * self.n..(w + 1) * self.n];
        row.iter()
            .enumerate()
            .filter_map(|(j, &e)| if e { Some(j) } else { None })
    }

    pub fn predecessors(&self, w: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&i| self.has_edge(i, w))
    }

    /// Edges in row-major order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |i| self.successors(i).map(move |j| (i, j)))
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().filter(|&&e| e).count()
    }

    /// `w ~ v`: edges in both directions.
    #[inline]
    pub fn sym_related(&self, w: usize, v: usize) -> bool {
        self.has_edge(w, v) && self.has_edge(v, w)
    }

    pub fn is_reflexive(&self) -> bool {
        (0..self.n).all(|w| self.has_edge(w, w))
    }

    pub fn first_irreflexive(&self) -> Option<usize> {
        (0..self.n).find(|&w| !self.has_edge(w, w))
    }

    pub fn reflexive_closure(&self) -> Frame {
        let mut f = self.clone();
        for w in 0..self.n {
            f.adj[w * self.n + w] = true;
        }
        f
    }

    pub fn drop_reflexive_edges(&self) -> Frame {
        let mut f = self.clone();
        for w in 0..self.n {
            f.adj[w * self.n + w] = false;
        }
        f
    }

    /// Subframe induced by `worlds`; world `worlds[k]` becomes `k`.
    pub fn induced_subframe(&self, worlds: &[usize]) -> Frame {
        let mut f = Frame::new(worlds.len());
        for (a, &i) in worlds.iter().enumerate() {
            for (b, &j) in worlds.iter().enumerate() {
                if self.has_edge(i, j) {
                    f.adj[a * worlds.len() + b] = true;
                }
            }
        }
        f
    }
}

/// A frame together with a valuation. Variables without an entry are false
/// everywhere.
#[derive(Debug, Clone, Eq)]
pub struct Model {
    frame: Frame,
    valuation: BTreeMap<String, Vec<bool>>,
}

impl Model {
    pub fn new(frame: Frame) -> Self {
        Model {
            frame,
            valuation: BTreeMap::new(),
        }
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn frame_mut(&mut self) -> &mut Frame {
        &mut self.frame
    }

    pub fn world_count(&self) -> usize {
        self.frame.n
    }

    pub fn holds(&self, var: &str, w: usize) -> bool {
        self.valuation.get(var).is_some_and(|v| v[w])
    }

    pub fn set(&mut self, var: &str, w: usize, value: bool) {
        let n = self.frame.n;
        assert!(w < n, "world {w} out of range");
        if let Some(row) = self.valuation.get_mut(var) {
            row[w] = value;
        } else if value {
            let mut row = vec![false; n];
            row[w] = true;
            self.valuation.insert(var.into(), row);
        }
    }

    pub fn set_true_at<I: IntoIterator<Item = usize>>(
        &mut self,
        var: &str,
        worlds: I,
    ) -> Result<()> {
        let n = self.frame.n;
        for w in worlds {
            if w >= n {
                return Err(Error::WorldOutOfRange {
                    world: w,
                    worlds: n,
                });
            }
            self.set(var, w, true);
        }
        Ok(())
    }

    /// Worlds where `var` is true, ascending.
    pub fn truth_set(&self, var: &str) -> Vec<usize> {
        self.valuation.get(var).map_or_else(Vec::new, |row| {
            row.iter()
                .enumerate()
                .filter_map(|(w, &b)| if b { Some(w) } else { None })
                .collect()
        })
    }

    /// Variables true at some world.
    pub fn variables(&self) -> BTreeSet<String> {
        self.valuation
            .iter()
            .filter(|(_, row)| row.iter().any(|&b| b))
            .map(|(k, _)| k.clone())
            .collect()
    }

    /// Structural equality restricted to `vars`.
    pub fn agrees_on(&self, other: &Model, vars: &BTreeSet<String>) -> bool {
        self.frame == other.frame
            && vars
                .iter()
                .all(|v| (0..self.frame.n).all(|w| self.holds(v, w) == other.holds(v, w)))
    }

    pub fn same_label(&self, w: usize, v: usize, vars: &BTreeSet<String>) -> bool {
        vars.iter().all(|p| self.holds(p, w) == self.holds(p, v))
    }

    /// Submodel induced by `worlds`; world `worlds[k]` becomes `k`.
    pub fn induced_submodel(&self, worlds: &[usize]) -> Model {
        let mut m = Model::new(self.frame.induced_subframe(worlds));
        for (var, row) in &self.valuation {
            for (k, &w) in worlds.iter().enumerate() {
                if row[w] {
                    m.set(var, k, true);
                }
            }
        }
        m
    }

    pub fn with_frame(&self, frame: Frame) -> Model {
        assert_eq!(frame.n, self.frame.n);
        Model {
            frame,
            valuation: self.valuation.clone(),
        }
    }

    pub fn sym_related(&self, w: usize, v: usize) -> bool {
        self.frame.sym_related(w, v)
    }

    pub fn is_reflexive(&self) -> bool {
        self.frame.is_reflexive()
    }
}

impl PartialEq for Model {
    fn eq(&self, other: &Self) -> bool {
        let mut vars = self.variables();
        vars.extend(other.variables());
        self.agrees_on(other, &vars)
    }
}

/// `M, w ⊨ f`.
pub fn check(m: &Model, w: usize, f: &ModalFormula) -> Result<bool> {
    if w >= m.world_count() {
        return Err(Error::WorldOutOfRange {
            world: w,
            worlds: m.world_count(),
        });
    }
    Ok(eval(m, w, f))
}

fn eval(m: &Model, w: usize, f: &ModalFormula) -> bool {
    use ModalFormula::*;
    match f {
        Var(v) => m.holds(v, w),
        True => true,
        False => false,
        Not(c) => !eval(m, w, c),
        And(a, b) => eval(m, w, a) && eval(m, w, b),
        Or(a, b) => eval(m, w, a) || eval(m, w, b),
        Imp(a, b) => !eval(m, w, a) || eval(m, w, b),
        Iff(a, b) => eval(m, w, a) == eval(m, w, b),
        Box(c) => m.frame.successors(w).all(|v| eval(m, v, c)),
        Dia(c) => !m.frame.successors(w).all(|v| !eval(m, v, c)),
    }
}

/// Bottom-up labelling: entry `w` is `M, w ⊨ f`.
pub fn satisfying_worlds(m: &Model, f: &ModalFormula) -> Vec<bool> {
    use ModalFormula::*;
    let n = m.world_count();
    let zip = |a: &ModalFormula, b: &ModalFormula, op: fn(bool, bool) -> bool| -> Vec<bool> {
        let la = satisfying_worlds(m, a);
        let lb = satisfying_worlds(m, b);
        la.into_iter().zip(lb).map(|(x, y)| op(x, y)).collect()
    };
    match f {
        Var(v) => (0..n).map(|w| m.holds(v, w)).collect(),
        True => vec![true; n],
        False => vec![false; n],
        Not(c) => satisfying_worlds(m, c).into_iter().map(|b| !b).collect(),
        And(a, b) => zip(a, b, |x, y| x && y),
        Or(a, b) => zip(a, b, |x, y| x || y),
        Imp(a, b) => zip(a, b, |x, y| !x || y),
        Iff(a, b) => zip(a, b, |x, y| x == y),
        Box(c) => {
            let lc = satisfying_worlds(m, c);
            (0..n)
                .map(|w| m.frame.successors(w).all(|v| lc[v]))
                .collect()
        }
        Dia(c) => {
            let lc = satisfying_worlds(m, c);
            (0..n)
                .map(|w| m.frame.successors(w).any(|v| lc[v]))
                .collect()
        }
    }
}

/// `f` holds at every world of `m`.
pub fn check_global(m: &Model, f: &ModalFormula) -> bool {
    satisfying_worlds(m, f).into_iter().all(|b| b)
}

/// First world where `f` fails, if any.
pub fn global_counterexample(m: &Model, f: &ModalFormula) -> Option<usize> {
    satisfying_worlds(m, f).into_iter().position(|b| !b)
}
