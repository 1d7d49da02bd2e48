//! Complete decision procedure for LC by saturation over subformula types.
//!
//! The type of a node is the set of subformulas it forces. In a finite
//! perfect model the type of a node `x` is a function of
//!
//! * its atoms `V`, a subset of the atoms forced at every successor,
//! * `a`, the intersection of the types of all nodes strictly above `x`,
//! * `b`, the intersection of the types of its `R`-successors,
//!
//! because `x ⊩ B -> C` iff (`x ⊩ B` implies `x ⊩ C`) and `B -> C ∈ a`, and
//! `x ⊩ []B` iff `[]B ∈ a` and `B ∈ b`. Conversely, for any finite set `S`
//! of realized types, any `G ⊆ S` and any admissible `V`, a new root placed
//! under disjoint copies of models realizing `S`, seeing the copies of `G`
//! together with everything the copies of `S` see, is again a perfect model.
//! So the realized types are the least set closed under
//! `t = F(V, ∩S, ∩G)`, and `a`, `b` range over pairs `a ⊆ b` of the
//! intersection closure of the realized types (with the full set standing for
//! the empty intersection). A formula is valid iff every realized type
//! contains it.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use fixedbitset::FixedBitSet;

use super::compile::{Compiled, Op};
use super::KripkeModel;

type Ty = Vec<u64>;

fn test(t: &[u64], i: usize) -> bool {
    t[i / 64] >> (i % 64) & 1 == 1
}

fn set(t: &mut [u64], i: usize) {
    t[i / 64] |= 1 << (i % 64);
}

fn meet(a: &[u64], b: &[u64]) -> Ty {
    a.iter().zip(b).map(|(x, y)| x & y).collect()
}

fn subset(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

pub(crate) enum Outcome {
    Valid,
    /// A countermodel whose root (node 0) does not force the goal.
    Refuted(KripkeModel),
    /// The work budget ran out before the type set closed.
    Exhausted,
}

struct Witness {
    atoms: u64,
    above: Vec<usize>,
    seen: Vec<usize>,
}

struct Saturation<'a> {
    c: &'a Compiled,
    words: usize,
    /// Bits read from `a`: atoms, implications, boxes.
    mask_a: Ty,
    /// Bits read from `b`: box bodies.
    mask_b: Ty,
    atom_bits: Vec<usize>,
    real: Vec<Ty>,
    real_set: HashSet<Ty>,
    witness: Vec<Witness>,
    family: Vec<Ty>,
    family_index: HashMap<Ty, usize>,
    /// Realized types whose intersection gives each family member.
    generators: Vec<Vec<usize>>,
    done: HashSet<(Ty, Ty)>,
    work: usize,
}

impl<'a> Saturation<'a> {
    fn new(c: &'a Compiled) -> Saturation<'a> {
        let m = c.ops.len();
        let words = m.div_ceil(64);
        let mut mask_a = vec![0; words];
        let mut mask_b = vec![0; words];
        let mut atom_bits = vec![usize::MAX; c.atoms.len()];
        for (i, op) in c.ops.iter().enumerate() {
            match *op {
                Op::Atom(k) => {
                    set(&mut mask_a, i);
                    atom_bits[k] = i;
                }
                Op::Imp(..) => set(&mut mask_a, i),
                Op::Box(x) => {
                    set(&mut mask_a, i);
                    set(&mut mask_b, x);
                }
                _ => {}
            }
        }
        let mut full = vec![u64::MAX; words];
        if !m.is_multiple_of(64) {
            full[words - 1] = (1u64 << (m % 64)) - 1;
        }
        let mut s = Saturation {
            c,
            words,
            mask_a,
            mask_b,
            atom_bits,
            real: Vec::new(),
            real_set: HashSet::new(),
            witness: Vec::new(),
            family: Vec::new(),
            family_index: HashMap::new(),
            generators: Vec::new(),
            done: HashSet::new(),
            work: 0,
        };
        s.family_index.insert(full.clone(), 0);
        s.family.push(full);
        s.generators.push(Vec::new());
        s
    }

    fn derive(&self, atoms: u64, a: &[u64], b: &[u64]) -> Ty {
        let mut t = vec![0u64; self.words];
        for (i, op) in self.c.ops.iter().enumerate() {
            let holds = match *op {
                Op::Bot => false,
                Op::Top => true,
                Op::Atom(k) => atoms >> k & 1 == 1,
                Op::And(x, y) => test(&t, x) && test(&t, y),
                Op::Or(x, y) => test(&t, x) || test(&t, y),
                Op::Imp(x, y) => (!test(&t, x) || test(&t, y)) && test(a, i),
                Op::Box(x) => test(a, i) && test(b, x),
            };
            if holds {
                set(&mut t, i);
            }
        }
        t
    }

    /// Add a realized type; returns `true` if it refutes the goal.
    fn add_real(&mut self, t: Ty, witness: Witness) -> bool {
        if !self.real_set.insert(t.clone()) {
            return false;
        }
        let index = self.real.len();
        let refutes = !test(&t, self.c.goal());
        self.real.push(t.clone());
        self.witness.push(witness);
        if refutes {
            return true;
        }
        let existing = self.family.len();
        for j in 0..existing {
            let m = meet(&t, &self.family[j]);
            if !self.family_index.contains_key(&m) {
                let mut gens = self.generators[j].clone();
                gens.push(index);
                self.family_index.insert(m.clone(), self.family.len());
                self.family.push(m);
                self.generators.push(gens);
            }
        }
        false
    }

    /// Process the pair `(family[i], family[j])`, if `family[i] ⊆ family[j]`.
    /// Returns the index of a refuting type, if one is found.
    fn pair(&mut self, i: usize, j: usize) -> Option<usize> {
        if !subset(&self.family[i], &self.family[j]) {
            return None;
        }
        let key = (
            meet(&self.family[i], &self.mask_a),
            meet(&self.family[j], &self.mask_b),
        );
        if !self.done.insert(key) {
            return None;
        }
        let a = self.family[i].clone();
        let b = self.family[j].clone();
        let allowed: u64 = self
            .atom_bits
            .iter()
            .enumerate()
            .filter(|&(_, &bit)| test(&a, bit))
            .fold(0, |m, (k, _)| m | 1 << k);
        // Enumerate the subsets of `allowed`.
        let mut v = 0u64;
        loop {
            self.work += 1;
            let t = self.derive(v, &a, &b);
            let mut above = self.generators[i].clone();
            above.extend(&self.generators[j]);
            above.sort_unstable();
            above.dedup();
            let witness = Witness {
                atoms: v,
                above,
                seen: self.generators[j].clone(),
            };
            if self.add_real(t, witness) {
                return Some(self.real.len() - 1);
            }
            if v == allowed {
                return None;
            }
            v = (v.wrapping_sub(allowed)) & allowed;
        }
    }

    fn run(&mut self, budget: usize) -> Result<Option<usize>, ()> {
        let mut k = 0;
        while k < self.family.len() {
            for j in 0..=k {
                if self.work >= budget {
                    return Err(());
                }
                if let Some(t) = self.pair(j, k) {
                    return Ok(Some(t));
                }
                if j != k {
                    if let Some(t) = self.pair(k, j) {
                        return Ok(Some(t));
                    }
                }
            }
            k += 1;
        }
        Ok(None)
    }

    /// One node per realized type reachable from `top` through witnesses.
    fn countermodel(&self, top: usize) -> KripkeModel {
        let mut reach = vec![false; self.real.len()];
        let mut stack = vec![top];
        reach[top] = true;
        while let Some(t) = stack.pop() {
            for &s in &self.witness[t].above {
                if !reach[s] {
                    reach[s] = true;
                    stack.push(s);
                }
            }
        }
        // Witnesses only refer to earlier types, so descending index order
        // puts every node before the nodes above it, with `top` first.
        let nodes: Vec<usize> = (0..=top).rev().filter(|&t| reach[t]).collect();
        let n = nodes.len();
        let position: HashMap<usize, usize> = nodes.iter().enumerate().map(|(p, &t)| (t, p)).collect();
        let mut up = vec![FixedBitSet::with_capacity(n); n];
        let mut r = vec![FixedBitSet::with_capacity(n); n];
        for p in (0..n).rev() {
            let w = &self.witness[nodes[p]];
            up[p].insert(p);
            for s in &w.above {
                let q = position[s];
                let (above, seen) = (up[q].clone(), r[q].clone());
                up[p].union_with(&above);
                r[p].union_with(&seen);
            }
            for g in &w.seen {
                let above = up[position[g]].clone();
                r[p].union_with(&above);
            }
        }
        let valuation = nodes
            .iter()
            .map(|&t| {
                let atoms = self.witness[t].atoms;
                self.c
                    .atoms
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| atoms >> k & 1 == 1)
                    .map(|(_, a)| Arc::clone(a))
                    .collect()
            })
            .collect();
        KripkeModel::from_relations((0..n as u32).collect(), up, r, valuation, Some(0))
    }
}

/// Decide validity of the compiled goal over all finite perfect models.
/// `budget` bounds the number of type derivations.
pub(crate) fn saturate(c: &Compiled, budget: usize) -> Outcome {
    assert!(c.atoms.len() <= 64, "at most 64 distinct atoms are supported");
    let mut s = Saturation::new(c);
    match s.run(budget) {
        Err(()) => Outcome::Exhausted,
        Ok(None) => Outcome::Valid,
        Ok(Some(t)) => Outcome::Refuted(s.countermodel(t)),
    }
}
