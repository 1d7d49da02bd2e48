//! Model documents (JSON) and DOT export.
//!
//! ```json
//! {"nodes": [0, 1, 2], "leq": [[0, 1], [0, 2]], "R": [[0, 1], [0, 2]],
//!  "val": {"1": ["p"], "2": ["q"]}, "root": 0}
//! ```
//!
//! On load `leq` is closed reflexively and transitively and `R` is closed
//! under composition with `≤` on both sides.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{KripkeModel, ModelError};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelDocument {
    pub nodes: Vec<u32>,
    #[serde(default)]
    pub leq: Vec<(u32, u32)>,
    #[serde(rename = "R", default)]
    pub r: Vec<(u32, u32)>,
    #[serde(default)]
    pub val: BTreeMap<String, Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub root: Option<u32>,
}

impl ModelDocument {
    pub fn from_model(m: &KripkeModel) -> ModelDocument {
        let label = |i: usize| m.label(i);
        let r = (0..m.len())
            .flat_map(|a| m.successors(a).ones().map(move |b| (a, b)))
            .map(|(a, b)| (label(a), label(b)))
            .collect();
        ModelDocument {
            nodes: m.labels().to_vec(),
            leq: m.hasse_edges().into_iter().map(|(a, b)| (label(a), label(b))).collect(),
            r,
            val: (0..m.len())
                .map(|a| {
                    let atoms = m.valuation(a).iter().map(|p| p.to_string()).collect();
                    (label(a).to_string(), atoms)
                })
                .collect(),
            root: m.root().map(label),
        }
    }

    pub fn to_model(&self) -> Result<KripkeModel, ModelError> {
        let mut index = HashMap::new();
        for (i, &label) in self.nodes.iter().enumerate() {
            if index.insert(label, i).is_some() {
                return Err(ModelError::DuplicateNode(label));
            }
        }
        let lookup = |label: u32| index.get(&label).copied().ok_or(ModelError::UnknownNode(label));
        let pairs = |list: &[(u32, u32)]| -> Result<Vec<(usize, usize)>, ModelError> {
            list.iter().map(|&(a, b)| Ok((lookup(a)?, lookup(b)?))).collect()
        };
        let mut valuation = vec![BTreeSet::new(); self.nodes.len()];
        for (key, atoms) in &self.val {
            let label: u32 = key
                .parse()
                .map_err(|_| ModelError::Malformed(format!("valuation key `{key}` is not a node id")))?;
            for atom in atoms {
                if atom.is_empty() {
                    return Err(ModelError::Malformed("empty atom name".into()));
                }
                valuation[lookup(label)?].insert(Arc::from(atom.as_str()));
            }
        }
        let root = self.root.map(lookup).transpose()?;
        KripkeModel::with_labels(
            self.nodes.clone(),
            &pairs(&self.leq)?,
            &pairs(&self.r)?,
            valuation,
            root,
        )
    }
}

pub fn model_from_json(text: &str) -> Result<KripkeModel, ModelError> {
    let doc: ModelDocument =
        serde_json::from_str(text).map_err(|e| ModelError::Malformed(e.to_string()))?;
    doc.to_model()
}

pub fn model_to_json(m: &KripkeModel) -> String {
    serde_json::to_string(&ModelDocument::from_model(m)).expect("model documents serialize")
}

fn escape(text: &str) -> String {
    text.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Graphviz rendering: solid edges are the Hasse diagram of `≤`, dashed
/// edges are `R`, and each node shows its label and atoms.
pub fn model_to_dot(m: &KripkeModel) -> String {
    let mut out = String::from("digraph model {\n  rankdir=BT;\n  node [shape=box];\n");
    for a in 0..m.len() {
        let atoms: Vec<&str> = m.valuation(a).iter().map(|p| &**p).collect();
        let mut label = m.label(a).to_string();
        if !atoms.is_empty() {
            label.push_str("\\n");
            label.push_str(&escape(&atoms.join(", ")));
        }
        let style = if m.root() == Some(a) { ", peripheries=2" } else { "" };
        let _ = writeln!(out, "  n{} [label=\"{label}\"{style}];", m.label(a));
    }
    for (a, b) in m.hasse_edges() {
        let _ = writeln!(out, "  n{} -> n{};", m.label(a), m.label(b));
    }
    for a in 0..m.len() {
        for b in m.successors(a).ones() {
            let _ = writeln!(out, "  n{} -> n{} [style=dashed];", m.label(a), m.label(b));
        }
    }
    out.push_str("}\n");
    out
}
