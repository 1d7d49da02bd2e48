//! Shared fixtures for the integration tests: formula generators and
//! independent semantic oracles that share no code with the library's
//! search.

#![allow(dead_code)]

use hsigma_core::{parse, Formula, KripkeModel};
use proptest::prelude::*;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn f(text: &str) -> Formula {
    parse(text).unwrap_or_else(|e| panic!("{text}: {e}"))
}

/// A random formula over `atoms` with connective depth at most `depth`.
pub fn random_formula(rng: &mut impl Rng, atoms: &[&str], depth: usize) -> Formula {
    let leaf = |rng: &mut dyn rand::RngCore| match rng.gen_range(0..20) {
        0 => Formula::Bot,
        1 => Formula::Top,
        _ => Formula::atom(atoms[rng.gen_range(0..atoms.len())]),
    };
    if depth == 0 || rng.gen_bool(0.2) {
        return leaf(rng);
    }
    let sub = |rng: &mut _| random_formula(rng, atoms, depth - 1);
    match rng.gen_range(0..9) {
        0 | 1 => Formula::and(sub(rng), sub(rng)),
        2 | 3 => Formula::or(sub(rng), sub(rng)),
        4..=6 => Formula::imp(sub(rng), sub(rng)),
        _ => Formula::boxed(sub(rng)),
    }
}

/// `count` random formulas from a fixed seed.
pub fn corpus(seed: u64, count: usize, atoms: &[&str], depth: usize) -> Vec<Formula> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_formula(&mut rng, atoms, depth)).collect()
}

/// Proptest strategy for modal formulas over `p`, `q`, `r`.
pub fn formula_strategy(depth: u32) -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        1 => Just(Formula::Bot),
        1 => Just(Formula::Top),
        8 => prop::sample::select(vec!["p", "q", "r"]).prop_map(Formula::atom),
    ];
    leaf.prop_recursive(depth, 32, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::imp(a, b)),
            inner.prop_map(Formula::boxed),
        ]
    })
}

/// Every formula with exactly `k` binary connectives over `leaves`, passed to
/// `visit` without materializing the whole set.
pub fn each_formula(k: usize, leaves: &[Formula], visit: &mut dyn FnMut(Formula)) {
    if k == 0 {
        leaves.iter().cloned().for_each(visit);
        return;
    }
    for i in 0..k {
        each_formula(i, leaves, &mut |l: Formula| {
            each_formula(k - 1 - i, leaves, &mut |r: Formula| {
                visit(Formula::and(l.clone(), r.clone()));
                visit(Formula::or(l.clone(), r.clone()));
                visit(Formula::imp(l.clone(), r));
            })
        })
    }
}

/// Number of formulas with exactly `k` binary connectives over `leaves`
/// leaves: Catalan(k) * 3^k * leaves^(k+1).
pub fn formula_count(k: usize, leaves: u64) -> u64 {
    let catalan = (0..k as u64).fold(1u64, |c, i| c * 2 * (2 * i + 1) / (i + 2));
    catalan * 3u64.pow(k as u32) * leaves.pow(k as u32 + 1)
}

/// Forcing computed straight from the clauses, through the model's public
/// relation accessors only.
pub fn force_by_definition(m: &KripkeModel, x: usize, f: &Formula) -> bool {
    match f {
        Formula::Bot => false,
        Formula::Top => true,
        Formula::Atom(a) => m.valuation(x).contains(a),
        Formula::And(a, b) => force_by_definition(m, x, a) && force_by_definition(m, x, b),
        Formula::Or(a, b) => force_by_definition(m, x, a) || force_by_definition(m, x, b),
        Formula::Imp(a, b) => (0..m.len())
            .filter(|&y| m.leq(x, y))
            .all(|y| !force_by_definition(m, y, a) || force_by_definition(m, y, b)),
        Formula::Box(a) => (0..m.len())
            .filter(|&y| m.sees(x, y))
            .all(|y| force_by_definition(m, y, a)),
    }
}

/// Brute-force IPC validity over every rooted finite poset with at most
/// `max_nodes` nodes (naturally labelled, duplicates included) and every
/// persistent valuation of the given atoms. Models are bit-sliced: lane `l`
/// of each word is model `l` of a block of 64.
pub struct IpcOracle {
    atoms: Vec<String>,
    nodes: usize,
    blocks: Vec<Block>,
    pub model_count: usize,
}

struct Block {
    lanes: u64,
    /// `leq[x][y]`: lanes where `x ≤ y`.
    leq: Vec<Vec<u64>>,
    /// `val[atom][x]`: lanes where `x` forces the atom.
    val: Vec<Vec<u64>>,
}

fn rooted_posets(n: usize) -> Vec<Vec<u32>> {
    // up[i] as a bitmask; i ≤ j only when i < j or i = 0
    let pairs: Vec<(usize, usize)> = (1..n)
        .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
        .collect();
    let mut out = Vec::new();
    for choice in 0u32..(1 << pairs.len()) {
        let mut up: Vec<u32> = (0..n).map(|i| 1 << i).collect();
        up[0] = (1 << n) - 1;
        for (bit, &(i, j)) in pairs.iter().enumerate() {
            if choice >> bit & 1 == 1 {
                up[i] |= 1 << j;
            }
        }
        let transitive = (0..n).all(|i| {
            (0..n)
                .filter(|&j| up[i] >> j & 1 == 1)
                .all(|j| up[j] & !up[i] == 0)
        });
        if transitive {
            out.push(up);
        }
    }
    out
}

fn upsets(up: &[u32]) -> Vec<u32> {
    let n = up.len();
    (0u32..(1 << n))
        .filter(|&s| (0..n).all(|i| s >> i & 1 == 0 || up[i] & !s == 0))
        .collect()
}

impl IpcOracle {
    pub fn new(max_nodes: usize, atoms: &[&str]) -> IpcOracle {
        let mut models: Vec<(Vec<u32>, Vec<u32>)> = Vec::new();
        for n in 1..=max_nodes {
            for up in rooted_posets(n) {
                let ups = upsets(&up);
                let total = ups.len().pow(atoms.len() as u32);
                for code in 0..total {
                    let mut rest = code;
                    let val = atoms
                        .iter()
                        .map(|_| {
                            let u = ups[rest % ups.len()];
                            rest /= ups.len();
                            u
                        })
                        .collect();
                    models.push((up.clone(), val));
                }
            }
        }
        let blocks = models
            .chunks(64)
            .map(|chunk| {
                let mut block = Block {
                    lanes: if chunk.len() == 64 { u64::MAX } else { (1 << chunk.len()) - 1 },
                    leq: vec![vec![0; max_nodes]; max_nodes],
                    val: vec![vec![0; max_nodes]; atoms.len()],
                };
                for (lane, (up, val)) in chunk.iter().enumerate() {
                    for (x, &u) in up.iter().enumerate() {
                        for y in 0..up.len() {
                            if u >> y & 1 == 1 {
                                block.leq[x][y] |= 1 << lane;
                            }
                        }
                    }
                    for (k, &ext) in val.iter().enumerate() {
                        for x in 0..up.len() {
                            if ext >> x & 1 == 1 {
                                block.val[k][x] |= 1 << lane;
                            }
                        }
                    }
                }
                block
            })
            .collect();
        IpcOracle {
            atoms: atoms.iter().map(|a| a.to_string()).collect(),
            nodes: max_nodes,
            blocks,
            model_count: models.len(),
        }
    }

    fn eval(&self, block: &Block, f: &Formula) -> Vec<u64> {
        let n = self.nodes;
        match f {
            Formula::Bot => vec![0; n],
            Formula::Top => vec![u64::MAX; n],
            Formula::Atom(a) => {
                let k = self.atoms.iter().position(|b| **b == **a).expect("atom outside the oracle");
                block.val[k].clone()
            }
            Formula::And(a, b) => {
                let (a, b) = (self.eval(block, a), self.eval(block, b));
                a.iter().zip(&b).map(|(x, y)| x & y).collect()
            }
            Formula::Or(a, b) => {
                let (a, b) = (self.eval(block, a), self.eval(block, b));
                a.iter().zip(&b).map(|(x, y)| x | y).collect()
            }
            Formula::Imp(a, b) => {
                let (a, b) = (self.eval(block, a), self.eval(block, b));
                (0..n)
                    .map(|x| (0..n).fold(u64::MAX, |acc, y| acc & (!block.leq[x][y] | !a[y] | b[y])))
                    .collect()
            }
            Formula::Box(_) => panic!("the IPC oracle takes non-modal formulas"),
        }
    }

    /// Whether every model forces `f` at its root.
    pub fn valid(&self, f: &Formula) -> bool {
        self.blocks
            .iter()
            .all(|block| self.eval(block, f)[0] & block.lanes == block.lanes)
    }
}

/// Brute-force LC refutation over every rooted perfect model with at most
/// `max_nodes` nodes: naturally labelled posets, every `R ⊆ <` closed under
/// composition with `≤` on both sides, every persistent valuation.
pub struct LcOracle {
    atoms: Vec<String>,
    /// `(up, r, val)` as node bitmasks.
    models: Vec<(Vec<u32>, Vec<u32>, Vec<u32>)>,
}

impl LcOracle {
    pub fn new(max_nodes: usize, atoms: &[&str]) -> LcOracle {
        let mut models = Vec::new();
        for n in 1..=max_nodes {
            for up in rooted_posets(n) {
                let strict: Vec<(usize, usize)> = (0..n)
                    .flat_map(|i| (0..n).map(move |j| (i, j)))
                    .filter(|&(i, j)| i != j && up[i] >> j & 1 == 1)
                    .collect();
                let ups = upsets(&up);
                for choice in 0u32..(1 << strict.len()) {
                    let mut r = vec![0u32; n];
                    for (bit, &(i, j)) in strict.iter().enumerate() {
                        if choice >> bit & 1 == 1 {
                            r[i] |= 1 << j;
                        }
                    }
                    let closed = (0..n).all(|i| {
                        (0..n).filter(|&j| up[i] >> j & 1 == 1).all(|j| r[j] & !r[i] == 0)
                            && (0..n).filter(|&j| r[i] >> j & 1 == 1).all(|j| up[j] & !r[i] == 0)
                    });
                    if !closed {
                        continue;
                    }
                    let total = ups.len().pow(atoms.len() as u32);
                    for code in 0..total {
                        let mut rest = code;
                        let val = atoms
                            .iter()
                            .map(|_| {
                                let u = ups[rest % ups.len()];
                                rest /= ups.len();
                                u
                            })
                            .collect();
                        models.push((up.clone(), r.clone(), val));
                    }
                }
            }
        }
        LcOracle {
            atoms: atoms.iter().map(|a| a.to_string()).collect(),
            models,
        }
    }

    pub fn model_count(&self) -> usize {
        self.models.len()
    }

    fn ext(&self, model: &(Vec<u32>, Vec<u32>, Vec<u32>), f: &Formula) -> u32 {
        let (up, r, val) = model;
        let all = (1u32 << up.len()) - 1;
        let every = |rel: &[u32], s: u32| {
            (0..up.len()).filter(|&x| rel[x] & !s == 0).fold(0, |m, x| m | 1 << x)
        };
        match f {
            Formula::Bot => 0,
            Formula::Top => all,
            Formula::Atom(a) => self
                .atoms
                .iter()
                .position(|b| **b == **a)
                .map_or(0, |k| val[k]),
            Formula::And(a, b) => self.ext(model, a) & self.ext(model, b),
            Formula::Or(a, b) => self.ext(model, a) | self.ext(model, b),
            Formula::Imp(a, b) => every(up, (!self.ext(model, a) | self.ext(model, b)) & all),
            Formula::Box(a) => every(r, self.ext(model, a)),
        }
    }

    /// Whether some model fails to force `f` at its root.
    pub fn refutes(&self, f: &Formula) -> bool {
        self.models.iter().any(|m| self.ext(m, f) & 1 == 0)
    }
}
