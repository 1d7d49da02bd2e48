//! Formulas flattened into subformula tables for fast repeated evaluation.

use std::collections::HashMap;
use std::sync::Arc;

use crate::formula::Formula;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Op {
    Bot,
    Top,
    /// Index into [`Compiled::atoms`].
    Atom(usize),
    And(usize, usize),
    Or(usize, usize),
    Imp(usize, usize),
    Box(usize),
}

/// The distinct subformulas of a formula, children before parents; the goal
/// formula is last.
#[derive(Clone, Debug)]
pub(crate) struct Compiled {
    pub ops: Vec<Op>,
    pub atoms: Vec<Arc<str>>,
}

impl Compiled {
    pub fn new(f: &Formula) -> Compiled {
        let mut c = Compiled {
            ops: Vec::new(),
            atoms: f.atoms().into_iter().collect(),
        };
        let mut index = HashMap::new();
        c.visit(f, &mut index);
        c
    }

    pub fn goal(&self) -> usize {
        self.ops.len() - 1
    }

    fn visit(&mut self, f: &Formula, index: &mut HashMap<Formula, usize>) -> usize {
        if let Some(&i) = index.get(f) {
            return i;
        }
        let op = match f {
            Formula::Bot => Op::Bot,
            Formula::Top => Op::Top,
            Formula::Atom(p) => Op::Atom(self.atoms.binary_search(p).expect("atom collected")),
            Formula::And(a, b) => Op::And(self.visit(a, index), self.visit(b, index)),
            Formula::Or(a, b) => Op::Or(self.visit(a, index), self.visit(b, index)),
            Formula::Imp(a, b) => Op::Imp(self.visit(a, index), self.visit(b, index)),
            Formula::Box(a) => Op::Box(self.visit(a, index)),
        };
        self.ops.push(op);
        index.insert(f.clone(), self.ops.len() - 1);
        self.ops.len() - 1
    }

    /// Extensions (as node masks) of every subformula in a model with at most
    /// 32 nodes, given per-node up-sets and `R`-successor sets and per-atom
    /// extensions. Returns the goal's extension.
    pub fn eval_masks(&self, up: &[u32], r: &[u32], val: &[u32], buf: &mut Vec<u32>) -> u32 {
        let n = up.len();
        let full = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
        buf.clear();
        for op in &self.ops {
            let ext = match *op {
                Op::Bot => 0,
                Op::Top => full,
                Op::Atom(k) => val[k],
                Op::And(x, y) => buf[x] & buf[y],
                Op::Or(x, y) => buf[x] | buf[y],
                Op::Imp(x, y) => {
                    let bad = buf[x] & !buf[y];
                    let mut ext = 0;
                    for (v, &u) in up.iter().enumerate() {
                        if u & bad == 0 {
                            ext |= 1 << v;
                        }
                    }
                    ext
                }
                Op::Box(x) => {
                    let miss = !buf[x];
                    let mut ext = 0;
                    for (v, &s) in r.iter().enumerate() {
                        if s & miss == 0 {
                            ext |= 1 << v;
                        }
                    }
                    ext
                }
            };
            buf.push(ext);
        }
        buf[self.goal()]
    }
}
