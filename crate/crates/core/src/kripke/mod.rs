//! Finite Kripke models for intuitionistic modal logic: a partial order `≤`
//! interpreting implication, an accessibility relation `R` interpreting the
//! box, and a persistent valuation.

mod compile;
mod decide;
mod enumerate;
mod io;
mod saturate;

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use serde::Serialize;
use thiserror::Error;

use crate::formula::Formula;

pub use decide::{
    completeness_exponent, decide_lc, Certificate, Countermodel, DecideOptions, Status, Verdict,
};
pub use enumerate::{enumerate_perfect_rooted_models, MAX_ENUMERATION_NODES};
pub use io::{model_from_json, model_to_dot, model_to_json, ModelDocument};

/// Dense node index, `0..model.len()`.
pub type NodeId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("unknown node {0}")]
    UnknownNode(u32),
    #[error("node {0} listed twice")]
    DuplicateNode(u32),
    #[error("model has no nodes")]
    Empty,
    #[error("malformed model document: {0}")]
    Malformed(String),
}

/// A finite Kripke model.
///
/// Nodes carry external labels (the ids used in model files) but are
/// addressed by their dense index. `≤` is stored reflexive-transitively
/// closed as up-sets; `R` as successor sets.
#[derive(Clone, PartialEq, Eq)]
pub struct KripkeModel {
    labels: Vec<u32>,
    up: Vec<FixedBitSet>,
    r: Vec<FixedBitSet>,
    val: Vec<BTreeSet<Arc<str>>>,
    root: Option<NodeId>,
}

fn bitset(n: usize, members: impl IntoIterator<Item = usize>) -> FixedBitSet {
    let mut set = FixedBitSet::with_capacity(n);
    set.extend(members);
    set
}

fn is_subset(a: &FixedBitSet, b: &FixedBitSet) -> bool {
    a.is_subset(b)
}

impl KripkeModel {
    /// Build a model over `valuation.len()` nodes labelled `0, 1, ...`.
    ///
    /// `≤` is closed reflexively and transitively, then `R` is replaced by
    /// `≤;R;≤`, the least relation containing it that satisfies both
    /// `(≤;R) ⊆ R` and brilliance `(R;≤) ⊆ R`. Nothing else is checked; use
    /// [`validate_model`].
    pub fn new(
        leq: &[(NodeId, NodeId)],
        r: &[(NodeId, NodeId)],
        valuation: Vec<BTreeSet<Arc<str>>>,
        root: Option<NodeId>,
    ) -> Result<KripkeModel, ModelError> {
        let labels = (0..valuation.len() as u32).collect();
        KripkeModel::with_labels(labels, leq, r, valuation, root)
    }

    /// As [`KripkeModel::new`], with explicit external labels for the nodes.
    pub fn with_labels(
        labels: Vec<u32>,
        leq: &[(NodeId, NodeId)],
        r: &[(NodeId, NodeId)],
        valuation: Vec<BTreeSet<Arc<str>>>,
        root: Option<NodeId>,
    ) -> Result<KripkeModel, ModelError> {
        let n = labels.len();
        if n == 0 {
            return Err(ModelError::Empty);
        }
        assert_eq!(valuation.len(), n, "one valuation entry per node");
        let check = |i: NodeId| -> Result<NodeId, ModelError> {
            if i < n {
                Ok(i)
            } else {
                Err(ModelError::UnknownNode(i as u32))
            }
        };
        if let Some(root) = root {
            check(root)?;
        }
        let mut up: Vec<FixedBitSet> = (0..n).map(|i| bitset(n, [i])).collect();
        for &(a, b) in leq {
            up[check(a)?].insert(check(b)?);
        }
        // Warshall: close under transitivity.
        for k in 0..n {
            for i in 0..n {
                if up[i].contains(k) {
                    let via = up[k].clone();
                    up[i].union_with(&via);
                }
            }
        }
        let mut direct: Vec<FixedBitSet> = (0..n).map(|_| FixedBitSet::with_capacity(n)).collect();
        for &(a, b) in r {
            let (a, b) = (check(a)?, check(b)?);
            // (R;≤): add everything above b.
            direct[a].union_with(&up[b]);
        }
        // (≤;R): a node sees everything its ≤-successors see.
        let r = (0..n)
            .map(|a| {
                let mut out = FixedBitSet::with_capacity(n);
                for b in up[a].ones() {
                    out.union_with(&direct[b]);
                }
                out
            })
            .collect();
        Ok(KripkeModel {
            labels,
            up,
            r,
            val: valuation,
            root,
        })
    }

    /// Take the relations exactly as given: `up[a]` is the set of `b` with
    /// `a ≤ b`, `r[a]` the set of `R`-successors of `a`. No closure is applied,
    /// so the result may violate any frame condition.
    pub fn from_relations(
        labels: Vec<u32>,
        up: Vec<FixedBitSet>,
        r: Vec<FixedBitSet>,
        valuation: Vec<BTreeSet<Arc<str>>>,
        root: Option<NodeId>,
    ) -> KripkeModel {
        let n = labels.len();
        assert!(up.len() == n && r.len() == n && valuation.len() == n);
        let fit = |mut s: FixedBitSet| {
            s.grow(n);
            s
        };
        KripkeModel {
            labels,
            up: up.into_iter().map(fit).collect(),
            r: r.into_iter().map(fit).collect(),
            val: valuation,
            root,
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn label(&self, node: NodeId) -> u32 {
        self.labels[node]
    }

    /// Dense index of the node with external label `label`.
    pub fn node(&self, label: u32) -> Option<NodeId> {
        self.labels.iter().position(|&l| l == label)
    }

    pub fn root(&self) -> Option<NodeId> {
        self.root
    }

    pub fn leq(&self, a: NodeId, b: NodeId) -> bool {
        self.up[a].contains(b)
    }

    pub fn less(&self, a: NodeId, b: NodeId) -> bool {
        a != b && self.leq(a, b)
    }

    pub fn sees(&self, a: NodeId, b: NodeId) -> bool {
        self.r[a].contains(b)
    }

    /// `{b : a ≤ b}`.
    pub fn up_set(&self, a: NodeId) -> &FixedBitSet {
        &self.up[a]
    }

    /// `{b : a R b}`.
    pub fn successors(&self, a: NodeId) -> &FixedBitSet {
        &self.r[a]
    }

    pub fn valuation(&self, a: NodeId) -> &BTreeSet<Arc<str>> {
        &self.val[a]
    }

    /// Atom names true somewhere in the model.
    pub fn atoms(&self) -> BTreeSet<Arc<str>> {
        self.val.iter().flatten().cloned().collect()
    }

    /// Pairs `a < b` with no node strictly between them.
    pub fn hasse_edges(&self) -> Vec<(NodeId, NodeId)> {
        let n = self.len();
        let mut edges = Vec::new();
        for a in 0..n {
            for b in self.up[a].ones().filter(|&b| b != a) {
                let between = self.up[a]
                    .ones()
                    .any(|c| c != a && c != b && self.up[c].contains(b));
                if !between {
                    edges.push((a, b));
                }
            }
        }
        edges
    }

    /// The set of nodes forcing `f`.
    pub fn extension(&self, f: &Formula) -> FixedBitSet {
        let mut memo = HashMap::new();
        self.extension_memo(f, &mut memo)
    }

    fn extension_memo(&self, f: &Formula, memo: &mut HashMap<Formula, FixedBitSet>) -> FixedBitSet {
        if let Some(done) = memo.get(f) {
            return done.clone();
        }
        let n = self.len();
        let result = match f {
            Formula::Bot => FixedBitSet::with_capacity(n),
            Formula::Top => bitset(n, 0..n),
            Formula::Atom(p) => bitset(n, (0..n).filter(|&a| self.val[a].contains(p))),
            Formula::And(a, b) => {
                let mut x = self.extension_memo(a, memo);
                x.intersect_with(&self.extension_memo(b, memo));
                x
            }
            Formula::Or(a, b) => {
                let mut x = self.extension_memo(a, memo);
                x.union_with(&self.extension_memo(b, memo));
                x
            }
            Formula::Imp(a, b) => {
                let ea = self.extension_memo(a, memo);
                let eb = self.extension_memo(b, memo);
                bitset(
                    n,
                    (0..n).filter(|&x| self.up[x].ones().all(|y| !ea.contains(y) || eb.contains(y))),
                )
            }
            Formula::Box(a) => {
                let ea = self.extension_memo(a, memo);
                bitset(n, (0..n).filter(|&x| is_subset(&self.r[x], &ea)))
            }
        };
        memo.insert(f.clone(), result.clone());
        result
    }

    /// Whether `node` forces `f`. Panics if `node` is out of range; see
    /// [`force`] for the checked form.
    pub fn forces(&self, node: NodeId, f: &Formula) -> bool {
        assert!(node < self.len(), "node index {node} out of range");
        self.extension(f).contains(node)
    }

    /// The submodel on `{b : node ≤ b}`, rooted at `node`. Labels are kept.
    pub fn restrict_to_upset(&self, node: NodeId) -> KripkeModel {
        let keep: Vec<NodeId> = self.up[node].ones().collect();
        self.restrict(&keep, Some(node))
    }

    fn restrict(&self, keep: &[NodeId], root: Option<NodeId>) -> KripkeModel {
        let n = keep.len();
        let index: HashMap<NodeId, NodeId> = keep.iter().enumerate().map(|(i, &a)| (a, i)).collect();
        let project = |set: &FixedBitSet| bitset(n, set.ones().filter_map(|b| index.get(&b).copied()));
        KripkeModel {
            labels: keep.iter().map(|&a| self.labels[a]).collect(),
            up: keep.iter().map(|&a| project(&self.up[a])).collect(),
            r: keep.iter().map(|&a| project(&self.r[a])).collect(),
            val: keep.iter().map(|&a| self.val[a].clone()).collect(),
            root: root.and_then(|r| index.get(&r).copied()),
        }
    }
}

impl fmt::Debug for KripkeModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&model_to_json(self))
    }
}

/// Forcing with a checked node index.
pub fn force(m: &KripkeModel, node: NodeId, f: &Formula) -> Result<bool, ModelError> {
    if node >= m.len() {
        return Err(ModelError::UnknownNode(node as u32));
    }
    Ok(m.forces(node, f))
}

/// A frame or valuation condition that fails.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Condition {
    Reflexive,
    Antisymmetric,
    Transitive,
    MonotoneValuation,
    /// `(≤;R) ⊆ R`
    UpwardR,
    /// `(R;≤) ⊆ R`
    Brilliant,
    /// `R ⊆ <`
    RStrict,
    Rooted,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Condition::Reflexive => "≤ reflexive",
            Condition::Antisymmetric => "≤ antisymmetric",
            Condition::Transitive => "≤ transitive",
            Condition::MonotoneValuation => "valuation monotone",
            Condition::UpwardR => "(≤;R) ⊆ R",
            Condition::Brilliant => "(R;≤) ⊆ R",
            Condition::RStrict => "R ⊆ <",
            Condition::Rooted => "root ≤ every node",
        })
    }
}

/// One failed condition, with the offending pair given by node labels.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub condition: Condition,
    pub pair: (u32, u32),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} fails at ({}, {})", self.condition, self.pair.0, self.pair.1)
    }
}

/// Every violated model condition. With `require_perfect`, brilliance and
/// `R ⊆ <` are checked too; on a finite model these make `R` transitive and
/// conversely well-founded.
pub fn validate_model(m: &KripkeModel, require_perfect: bool) -> Vec<Violation> {
    let n = m.len();
    let mut out = Vec::new();
    let mut push = |condition, a: NodeId, b: NodeId| {
        out.push(Violation {
            condition,
            pair: (m.labels[a], m.labels[b]),
        })
    };
    for a in 0..n {
        if !m.leq(a, a) {
            push(Condition::Reflexive, a, a);
        }
    }
    for a in 0..n {
        for b in (a + 1)..n {
            if m.leq(a, b) && m.leq(b, a) {
                push(Condition::Antisymmetric, a, b);
            }
        }
    }
    for a in 0..n {
        for b in m.up[a].ones() {
            for c in m.up[b].ones() {
                if !m.leq(a, c) {
                    push(Condition::Transitive, a, c);
                }
            }
        }
    }
    for a in 0..n {
        for b in m.up[a].ones() {
            if !m.val[a].is_subset(&m.val[b]) {
                push(Condition::MonotoneValuation, a, b);
            }
        }
    }
    let mut reported = BTreeSet::new();
    for a in 0..n {
        for b in m.up[a].ones() {
            for c in m.r[b].ones() {
                if !m.sees(a, c) && reported.insert((a, c)) {
                    push(Condition::UpwardR, a, c);
                }
            }
        }
    }
    if require_perfect {
        let mut reported = BTreeSet::new();
        for a in 0..n {
            for b in m.r[a].ones() {
                for c in m.up[b].ones() {
                    if !m.sees(a, c) && reported.insert((a, c)) {
                        push(Condition::Brilliant, a, c);
                    }
                }
            }
        }
        for a in 0..n {
            for b in m.r[a].ones() {
                if !m.less(a, b) {
                    push(Condition::RStrict, a, b);
                }
            }
        }
    }
    if let Some(root) = m.root {
        for b in 0..n {
            if !m.leq(root, b) {
                push(Condition::Rooted, root, b);
            }
        }
    }
    out
}

/// Result of [`unravel_to_tree`]: the tree model and, for each of its nodes,
/// the chain of source nodes it stands for.
#[derive(Clone, Debug)]
pub struct Unravelled {
    pub model: KripkeModel,
    pub chains: Vec<Vec<NodeId>>,
}

impl Unravelled {
    /// The source node a tree node projects to.
    pub fn last(&self, node: NodeId) -> NodeId {
        *self.chains[node].last().expect("chains are non-empty")
    }
}

/// Unravel `m` into a forest whose nodes are the non-empty strictly
/// increasing chains `a1 < ... < ak` of `m`, ordered by initial segment, with
/// valuation taken from the last element. Forcing at a chain equals forcing
/// at its last element.
///
/// When `m` satisfies `R ⊆ <`, a chain sees exactly its proper extensions
/// whose last element is an `R`-successor of its own last element, so the
/// result is again perfect. Otherwise every chain ending in an
/// `R`-successor is seen.
///
/// Chains are numbered in lexicographic order of node indices; if `m` has a
/// root, the single-element chain of the root roots the tree spanned by the
/// chains starting at it, but the result itself has no root unless `m` has a
/// single node.
pub fn unravel_to_tree(m: &KripkeModel) -> Unravelled {
    let n = m.len();
    let mut chains: Vec<Vec<NodeId>> = Vec::new();
    fn extend(m: &KripkeModel, chain: &mut Vec<NodeId>, out: &mut Vec<Vec<NodeId>>) {
        out.push(chain.clone());
        let last = *chain.last().unwrap();
        for next in m.up[last].ones().filter(|&b| b != last) {
            chain.push(next);
            extend(m, chain, out);
            chain.pop();
        }
    }
    for a in 0..n {
        extend(m, &mut vec![a], &mut chains);
    }
    let perfect_r = (0..n).all(|a| m.r[a].ones().all(|b| m.less(a, b)));
    let t = chains.len();
    let is_prefix = |s: &[NodeId], u: &[NodeId]| s.len() <= u.len() && u[..s.len()] == *s;
    let mut up = Vec::with_capacity(t);
    let mut r = Vec::with_capacity(t);
    for s in &chains {
        let last = *s.last().unwrap();
        up.push(bitset(t, (0..t).filter(|&j| is_prefix(s, &chains[j]))));
        r.push(bitset(
            t,
            (0..t).filter(|&j| {
                let u = &chains[j];
                m.sees(last, *u.last().unwrap()) && (!perfect_r || (u.len() > s.len() && is_prefix(s, u)))
            }),
        ));
    }
    let labels = (0..t as u32).collect();
    let val = chains.iter().map(|s| m.val[*s.last().unwrap()].clone()).collect();
    let root = (t == 1).then_some(0);
    Unravelled {
        model: KripkeModel {
            labels,
            up,
            r,
            val,
            root,
        },
        chains,
    }
}
