//! Deciding LC: schema recognition, type saturation, and bounded model
//! enumeration.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use super::compile::Compiled;
use super::enumerate::{search_models, MAX_ENUMERATION_NODES};
use super::saturate::{saturate, Outcome};
use super::{KripkeModel, NodeId};
use crate::formula::Formula;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Provable,
    Refuted,
    Inconclusive,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Provable => "provable",
            Status::Refuted => "refuted",
            Status::Inconclusive => "inconclusive",
        })
    }
}

/// How a `Provable` verdict was established.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Certificate {
    /// The formula is an instance of K, 4, Löb, CP or Le.
    Schema,
    /// Type saturation closed without refuting the formula.
    Saturation,
    /// Every model up to the completeness bound was checked.
    Exhaustive,
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Certificate::Schema => "schema",
            Certificate::Saturation => "saturation",
            Certificate::Exhaustive => "exhaustive",
        })
    }
}

#[derive(Clone, Debug)]
pub struct Countermodel {
    pub model: KripkeModel,
    /// The node that does not force the formula; always the root.
    pub node: NodeId,
}

#[derive(Clone, Debug)]
pub struct Verdict {
    pub status: Status,
    /// The formula that was decided in LC (after any reduction).
    pub formula: Formula,
    pub certificate: Option<Certificate>,
    /// Largest model size the enumeration was allowed to reach.
    pub search_cap: usize,
    /// `n` in the completeness bound `2^n`, where `n` counts the subformulas
    /// and their boxes.
    pub bound_exponent: usize,
    pub countermodel: Option<Countermodel>,
    /// The TNNIL approximation, for verdicts reached through it.
    pub approx: Option<Formula>,
    /// Short description of the reduction to LC, if any.
    pub reduction: Option<&'static str>,
}

impl Verdict {
    /// `2^n`, when it fits.
    pub fn completeness_bound(&self) -> Option<u128> {
        1u128.checked_shl(self.bound_exponent as u32)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DecideOptions {
    /// Node cap for model enumeration.
    pub max_nodes: usize,
    /// Number of type derivations the saturation may perform before the
    /// search falls back to bounded enumeration.
    pub saturation_budget: usize,
    /// Replace a countermodel found by saturation with the first one in
    /// enumeration order, searching sizes below it up to `max_nodes`.
    pub minimize: bool,
}

impl Default for DecideOptions {
    fn default() -> Self {
        DecideOptions {
            max_nodes: 6,
            saturation_budget: 2_000_000,
            minimize: true,
        }
    }
}

/// `|Sub(f) ∪ {[]B : B ∈ Sub(f)}|`.
pub fn completeness_exponent(f: &Formula) -> usize {
    let sub = f.subformulas();
    let boxes: BTreeSet<Formula> = sub.iter().map(|b| Formula::boxed(b.clone())).collect();
    sub.union(&boxes).count()
}

/// Instances of K, 4, Löb, CP and Le.
pub(crate) fn is_schema_instance(f: &Formula) -> bool {
    use Formula::*;
    let Imp(lhs, rhs) = f else { return false };
    // CP: A -> []A
    if let Box(a) = &**rhs {
        if **a == **lhs {
            return true;
        }
    }
    // K: [](A -> B) -> []A -> []B
    if let (Box(ab), Imp(ba, bb)) = (&**lhs, &**rhs) {
        if let (Imp(a, b), Box(a2), Box(b2)) = (&**ab, &**ba, &**bb) {
            if a == a2 && b == b2 {
                return true;
            }
        }
    }
    let (Box(inner_l), Box(inner_r)) = (&**lhs, &**rhs) else {
        return false;
    };
    // 4: []A -> [][]A
    if let Box(a) = &**inner_r {
        if a == inner_l {
            return true;
        }
    }
    // Löb: []([]A -> A) -> []A
    if let Imp(ba, a) = &**inner_l {
        if **ba == Box(a.clone()) && a == inner_r {
            return true;
        }
    }
    // Le: [](B | C) -> []([]B | C)
    if let (Or(b, c), Or(bb, c2)) = (&**inner_l, &**inner_r) {
        if **bb == Box(b.clone()) && c == c2 {
            return true;
        }
    }
    false
}

/// First countermodel in enumeration order among sizes `1..=max`,
/// refuting the goal at its root.
fn enumerate_countermodel(c: &Compiled, max: usize) -> Option<KripkeModel> {
    let mut buf = Vec::new();
    for n in 1..=max.min(MAX_ENUMERATION_NODES) {
        let mut found = None;
        search_models(n, c.atoms.len(), |m| {
            let ext = c.eval_masks(&m.up, &m.r, &m.val, &mut buf);
            if ext & 1 == 0 {
                found = Some(m.to_model(&c.atoms));
                true
            } else {
                false
            }
        });
        if found.is_some() {
            return found;
        }
    }
    None
}

/// Decide `LC ⊢ f`.
///
/// Schema instances are accepted directly. Otherwise type saturation gives a
/// complete answer unless its budget runs out, in which case rooted perfect
/// models are enumerated up to `max_nodes` nodes and the verdict is
/// `Inconclusive` when none refutes `f` and the cap is below `2^n`.
pub fn decide_lc(f: &Formula, options: &DecideOptions) -> Verdict {
    let bound_exponent = completeness_exponent(f);
    let mut verdict = Verdict {
        status: Status::Provable,
        formula: f.clone(),
        certificate: None,
        search_cap: options.max_nodes,
        bound_exponent,
        countermodel: None,
        approx: None,
        reduction: None,
    };
    if is_schema_instance(f) {
        verdict.certificate = Some(Certificate::Schema);
        return verdict;
    }
    let compiled = Compiled::new(f);
    let refuted = |verdict: &mut Verdict, model: KripkeModel| {
        verdict.status = Status::Refuted;
        verdict.countermodel = Some(Countermodel { model, node: 0 });
    };
    match saturate(&compiled, options.saturation_budget) {
        Outcome::Valid => {
            verdict.certificate = Some(Certificate::Saturation);
        }
        Outcome::Refuted(model) => {
            let smaller = if options.minimize && model.len() > 1 {
                enumerate_countermodel(&compiled, options.max_nodes.min(model.len() - 1))
            } else {
                None
            };
            refuted(&mut verdict, smaller.unwrap_or(model));
        }
        Outcome::Exhausted => match enumerate_countermodel(&compiled, options.max_nodes) {
            Some(model) => refuted(&mut verdict, model),
            None => {
                let reached = options.max_nodes.min(MAX_ENUMERATION_NODES);
                verdict.search_cap = reached;
                let covers = verdict.completeness_bound().is_some_and(|b| reached as u128 >= b);
                if covers {
                    verdict.certificate = Some(Certificate::Exhaustive);
                } else {
                    verdict.status = Status::Inconclusive;
                }
            }
        },
    }
    verdict
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;
    use crate::kripke::validate_model;

    fn decide(text: &str) -> Verdict {
        decide_lc(&parse(text).unwrap(), &DecideOptions::default())
    }

    #[test]
    fn schema_recognition() {
        for text in [
            "p -> []p",
            "(p -> q) -> [](p -> q)",
            "[](p -> q) -> []p -> []q",
            "[]p -> [][]p",
            "[]([]p -> p) -> []p",
            "[](p | q) -> []([]p | q)",
        ] {
            assert!(is_schema_instance(&parse(text).unwrap()), "{text}");
        }
        for text in ["[]p -> p", "[](p | q) -> []p | []q", "p"] {
            assert!(!is_schema_instance(&parse(text).unwrap()), "{text}");
        }
    }

    #[test]
    fn fixture_verdicts() {
        let v = decide("p -> []p");
        assert_eq!((v.status, v.certificate), (Status::Provable, Some(Certificate::Schema)));
        let v = decide("~~[]false");
        assert_eq!((v.status, v.certificate), (Status::Provable, Some(Certificate::Saturation)));
        assert_eq!(decide("[](p | q) -> []([]p | q)").status, Status::Provable);
    }

    #[test]
    fn box_p_implies_p_has_one_node_countermodel() {
        let v = decide("[]p -> p");
        assert_eq!(v.status, Status::Refuted);
        let cm = v.countermodel.unwrap();
        // a single node with no R-successors forces []p but not p
        assert_eq!(cm.model.len(), 1);
        assert!(validate_model(&cm.model, true).is_empty());
        assert!(!cm.model.forces(cm.node, &parse("[]p -> p").unwrap()));
    }

    #[test]
    fn exhausted_budget_falls_back_to_enumeration() {
        let options = DecideOptions {
            saturation_budget: 0,
            ..DecideOptions::default()
        };
        let v = decide_lc(&parse("[]p -> p").unwrap(), &options);
        assert_eq!(v.status, Status::Refuted);
        let v = decide_lc(&parse("[]p -> [](p | q)").unwrap(), &options);
        assert_eq!(v.status, Status::Inconclusive);
        assert_eq!(v.search_cap, 6);
        let v = decide_lc(&Formula::Top, &options);
        // `true` has 2 subformulas with boxes: bound 4 nodes; the cap covers it.
        assert_eq!((v.status, v.certificate), (Status::Provable, Some(Certificate::Exhaustive)));
    }

    #[test]
    fn bound_exponent_counts_boxes() {
        let v = decide("[]p -> p");
        // Sub = {[]p -> p, []p, p}; boxes add [][]p and []([]p -> p)
        assert_eq!(v.bound_exponent, 5);
        assert_eq!(v.completeness_bound(), Some(32));
    }
}
