//! The approximation algorithms: NNIL approximation `A*`, TNNIL
//! approximation `A+`, TNNIL⁻ approximation `A-` and the dagger variant `A†`.
//!
//! The NNIL algorithm is nondeterministic as usually stated. This
//! implementation fixes one run:
//!
//! * an implication `B -> C` first splits the leftmost outer conjunction of
//!   `C`, then the leftmost outer disjunction of `B`;
//! * otherwise `B` is flattened into a sorted, duplicate-free set of
//!   conjuncts `X`, and the first applicable of: `false` in `X`, `true` in
//!   `X`, an atom or boxed member in `X` (the least one), all members
//!   implications.
//!
//! Results are built with `true`/`false` unit simplification on `&` and `|`,
//! so for instance `(~~p)* = p` exactly.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::Serialize;

use crate::formula::{
    bracket, bracket_prime, complexity, decompose_outer_boxes, Formula, Measure,
};

/// Which bracket produced the disjunct recursed on in the all-implications
/// case.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BracketVariant {
    Bracket,
    BracketPrime,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rule {
    /// Atom, constant or boxed formula; terminal.
    AtomicOrBoxed,
    /// Dagger mode only: `[]B` is rebuilt as `[]B†`.
    BoxedDescend,
    Conj,
    Disj,
    SplitConj,
    SplitDisj,
    AtomInAntecedent,
    TopInAntecedent,
    BotInAntecedent,
    Implications(BracketVariant),
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Rule::AtomicOrBoxed => "atomic-or-boxed",
            Rule::BoxedDescend => "boxed-descend",
            Rule::Conj => "conj",
            Rule::Disj => "disj",
            Rule::SplitConj => "4a-split-conj",
            Rule::SplitDisj => "4b-split-disj",
            Rule::AtomInAntecedent => "4c-i-atom",
            Rule::TopInAntecedent => "4c-ii-top",
            Rule::BotInAntecedent => "4c-iii-bot",
            Rule::Implications(BracketVariant::Bracket) => "4c-iv-implications(bracket)",
            Rule::Implications(BracketVariant::BracketPrime) => {
                "4c-iv-implications(bracket-prime)"
            }
        };
        f.write_str(name)
    }
}

impl Serialize for Rule {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// One case application: the formula it fired on and the formulas the
/// algorithm recursed on.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RewriteStep {
    pub rule: Rule,
    pub input: Formula,
    pub outputs: Vec<Formula>,
    pub measure_before: Measure,
    pub measure_after: Vec<Measure>,
}

impl RewriteStep {
    /// Every output is strictly below the input in the `(d, i, c)` order.
    /// Terminal steps have no outputs and pass trivially.
    pub fn is_decreasing(&self) -> bool {
        self.measure_after
            .iter()
            .all(|m| m.is_below(&self.measure_before))
    }
}

/// Ordered record of the steps of one approximation run.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RewriteTrace {
    pub steps: Vec<RewriteStep>,
}

impl RewriteTrace {
    pub fn is_decreasing(&self) -> bool {
        self.steps.iter().all(RewriteStep::is_decreasing)
    }
}

impl fmt::Display for RewriteTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (n, step) in self.steps.iter().enumerate() {
            writeln!(f, "{n:>4}  {:<34} {}  [{}]", step.rule, step.input, step.measure_before)?;
            for (out, m) in step.outputs.iter().zip(&step.measure_after) {
                writeln!(f, "        -> {out}  [{m}]")?;
            }
        }
        Ok(())
    }
}

/// `a & b` with `true` as unit and `false` as zero.
fn mk_and(a: Formula, b: Formula) -> Formula {
    match (&a, &b) {
        (Formula::Top, _) => b,
        (_, Formula::Top) => a,
        (Formula::Bot, _) | (_, Formula::Bot) => Formula::Bot,
        _ => Formula::and(a, b),
    }
}

/// `a | b` with `false` as unit and `true` as zero.
fn mk_or(a: Formula, b: Formula) -> Formula {
    match (&a, &b) {
        (Formula::Bot, _) => b,
        (_, Formula::Bot) => a,
        (Formula::Top, _) | (_, Formula::Top) => Formula::Top,
        _ => Formula::or(a, b),
    }
}

fn flatten_and<'a>(f: &'a Formula, out: &mut BTreeSet<&'a Formula>) {
    match f {
        Formula::And(a, b) => {
            flatten_and(a, out);
            flatten_and(b, out);
        }
        _ => {
            out.insert(f);
        }
    }
}

/// Split the leftmost outer occurrence (reachable through `&` and `|` only)
/// of a connective selected by `pick`, returning the two formulas obtained by
/// replacing that occurrence with its left and right argument.
fn split_leftmost(
    f: &Formula,
    pick: fn(&Formula) -> Option<(&Formula, &Formula)>,
) -> Option<(Formula, Formula)> {
    if let Some((l, r)) = pick(f) {
        return Some((l.clone(), r.clone()));
    }
    let rebuild = |f: &Formula, x: Formula, y: Formula| match f {
        Formula::And(..) => Formula::and(x, y),
        _ => Formula::or(x, y),
    };
    match f {
        Formula::And(a, b) | Formula::Or(a, b) => {
            if let Some((l, r)) = split_leftmost(a, pick) {
                let b = (**b).clone();
                return Some((rebuild(f, l, b.clone()), rebuild(f, r, b)));
            }
            if let Some((l, r)) = split_leftmost(b, pick) {
                let a = (**a).clone();
                return Some((rebuild(f, a.clone(), l), rebuild(f, a, r)));
            }
            None
        }
        _ => None,
    }
}

fn pick_and(f: &Formula) -> Option<(&Formula, &Formula)> {
    match f {
        Formula::And(a, b) => Some((a, b)),
        _ => None,
    }
}

fn pick_or(f: &Formula) -> Option<(&Formula, &Formula)> {
    match f {
        Formula::Or(a, b) => Some((a, b)),
        _ => None,
    }
}

struct Engine {
    dagger: bool,
    cache: HashMap<Formula, Formula>,
    trace: Option<Vec<RewriteStep>>,
}

impl Engine {
    fn new(dagger: bool, tracing: bool) -> Engine {
        Engine {
            dagger,
            cache: HashMap::new(),
            trace: tracing.then(Vec::new),
        }
    }

    fn record(&mut self, rule: Rule, input: &Formula, outputs: &[&Formula]) {
        if let Some(steps) = &mut self.trace {
            steps.push(RewriteStep {
                rule,
                input: input.clone(),
                outputs: outputs.iter().map(|f| (*f).clone()).collect(),
                measure_before: complexity(input),
                measure_after: outputs.iter().map(|f| complexity(f)).collect(),
            });
        }
    }

    fn star(&mut self, a: &Formula) -> Formula {
        // With tracing on, every step must be recorded, so the cache is bypassed.
        if self.trace.is_none() {
            if let Some(done) = self.cache.get(a) {
                return done.clone();
            }
        }
        let result = self.star_uncached(a);
        if self.trace.is_none() {
            self.cache.insert(a.clone(), result.clone());
        }
        result
    }

    fn star_uncached(&mut self, a: &Formula) -> Formula {
        match a {
            Formula::Bot | Formula::Top | Formula::Atom(_) => {
                self.record(Rule::AtomicOrBoxed, a, &[]);
                a.clone()
            }
            Formula::Box(body) => {
                if self.dagger {
                    self.record(Rule::BoxedDescend, a, &[body]);
                    Formula::boxed(self.star(body))
                } else {
                    self.record(Rule::AtomicOrBoxed, a, &[]);
                    a.clone()
                }
            }
            Formula::And(b, c) => {
                self.record(Rule::Conj, a, &[b, c]);
                let b = self.star(b);
                mk_and(b, self.star(c))
            }
            Formula::Or(b, c) => {
                self.record(Rule::Disj, a, &[b, c]);
                let b = self.star(b);
                mk_or(b, self.star(c))
            }
            Formula::Imp(b, c) => self.star_implication(a, b, c),
        }
    }

    fn star_implication(&mut self, a: &Formula, b: &Formula, c: &Formula) -> Formula {
        if let Some((c1, c2)) = split_leftmost(c, pick_and) {
            let a1 = Formula::imp(b.clone(), c1);
            let a2 = Formula::imp(b.clone(), c2);
            self.record(Rule::SplitConj, a, &[&a1, &a2]);
            let r1 = self.star(&a1);
            return mk_and(r1, self.star(&a2));
        }
        if let Some((b1, b2)) = split_leftmost(b, pick_or) {
            let a1 = Formula::imp(b1, c.clone());
            let a2 = Formula::imp(b2, c.clone());
            self.record(Rule::SplitDisj, a, &[&a1, &a2]);
            let r1 = self.star(&a1);
            return mk_and(r1, self.star(&a2));
        }

        let mut members = BTreeSet::new();
        flatten_and(b, &mut members);
        let without = |skip: &Formula| -> Formula {
            Formula::conj(members.iter().filter(|m| **m != skip).map(|m| (*m).clone()))
        };

        if members.contains(&Formula::Bot) {
            self.record(Rule::BotInAntecedent, a, &[]);
            return Formula::Top;
        }
        if members.contains(&Formula::Top) {
            let next = if members.len() == 1 {
                c.clone()
            } else {
                Formula::imp(without(&Formula::Top), c.clone())
            };
            self.record(Rule::TopInAntecedent, a, &[&next]);
            return self.star(&next);
        }
        let least_atom = members
            .iter()
            .find(|m| matches!(m, Formula::Atom(_)))
            .or_else(|| members.iter().find(|m| m.is_boxed()));
        if let Some(&p) = least_atom {
            let next = if members.len() == 1 {
                c.clone()
            } else {
                Formula::imp(without(p), c.clone())
            };
            let descend = self.dagger && p.is_boxed();
            let head = if descend { vec![p, &next] } else { vec![&next] };
            self.record(Rule::AtomInAntecedent, a, &head);
            let p_star = if descend { self.star(p) } else { p.clone() };
            return Formula::imp(p_star, self.star(&next));
        }

        // Every member of X is an implication.
        let mut outputs = Vec::with_capacity(members.len() + 1);
        let mut antecedents = BTreeSet::new();
        for &d in &members {
            let Formula::Imp(e, f) = d else {
                unreachable!("antecedent member {d} is not an implication")
            };
            antecedents.insert((**e).clone());
            let mut weakened: BTreeSet<Formula> = members
                .iter()
                .filter(|m| **m != d)
                .map(|m| (*m).clone())
                .collect();
            weakened.insert((**f).clone());
            outputs.push(Formula::imp(Formula::conj(weakened), c.clone()));
        }
        antecedents.insert(c.clone());

        let before = complexity(a);
        let a0 = Formula::disj(antecedents.iter().map(|e| bracket(b, e)));
        let (variant, last) = if complexity(&a0).is_below(&before) {
            (BracketVariant::Bracket, a0)
        } else {
            let a1 = Formula::disj(antecedents.iter().map(|e| bracket_prime(b, e)));
            assert!(
                complexity(&a1).is_below(&before),
                "no measure decrease for {a}: [B]'Z = {a1}"
            );
            (BracketVariant::BracketPrime, a1)
        };
        outputs.push(last);
        let refs: Vec<&Formula> = outputs.iter().collect();
        self.record(Rule::Implications(variant), a, &refs);

        let mut result = Formula::Top;
        for next in &outputs {
            result = mk_and(result, self.star(next));
        }
        result
    }

    fn finish(self) -> RewriteTrace {
        RewriteTrace {
            steps: self.trace.unwrap_or_default(),
        }
    }
}

/// NNIL approximation `A*`. Boxed subformulas are treated as atoms.
pub fn nnil_star(f: &Formula) -> Formula {
    Engine::new(false, false).star(f)
}

pub fn nnil_star_traced(f: &Formula) -> (Formula, RewriteTrace) {
    let mut engine = Engine::new(false, true);
    let result = engine.star(f);
    (result, engine.finish())
}

fn plus(engine: &mut Engine, f: &Formula) -> Formula {
    let d = decompose_outer_boxes(f);
    let boxes: Vec<Formula> = d
        .bodies
        .iter()
        .map(|body| Formula::boxed(plus(engine, body)))
        .collect();
    let skeleton = engine.star(&d.skeleton);
    let decomposition = crate::formula::BoxDecomposition {
        skeleton,
        ..d
    };
    decomposition.fill(&boxes)
}

/// TNNIL approximation `A+`: NNIL approximation of the box-free skeleton,
/// with every outer box body replaced by its own TNNIL approximation.
pub fn tnnil_plus(f: &Formula) -> Formula {
    plus(&mut Engine::new(false, false), f)
}

/// As [`tnnil_plus`]; the trace holds the steps of every skeleton run, with
/// outer boxes shown as placeholder atoms.
pub fn tnnil_plus_traced(f: &Formula) -> (Formula, RewriteTrace) {
    let mut engine = Engine::new(false, true);
    let result = plus(&mut engine, f);
    (result, engine.finish())
}

/// TNNIL⁻ approximation `A-`: the skeleton is kept and only the outer box
/// bodies are approximated.
pub fn tnnil_minus(f: &Formula) -> Formula {
    minus(&mut Engine::new(false, false), f)
}

/// As [`tnnil_minus`]; the trace holds the steps of the box bodies' runs.
pub fn tnnil_minus_traced(f: &Formula) -> (Formula, RewriteTrace) {
    let mut engine = Engine::new(false, true);
    let result = minus(&mut engine, f);
    (result, engine.finish())
}

fn minus(engine: &mut Engine, f: &Formula) -> Formula {
    let d = decompose_outer_boxes(f);
    let boxes: Vec<Formula> = d
        .bodies
        .iter()
        .map(|body| Formula::boxed(plus(engine, body)))
        .collect();
    d.fill(&boxes)
}

/// The dagger variant `A†`: the NNIL algorithm with `([]B)† = []B†`.
pub fn dagger(f: &Formula) -> Formula {
    Engine::new(true, false).star(f)
}

pub fn dagger_traced(f: &Formula) -> (Formula, RewriteTrace) {
    let mut engine = Engine::new(true, true);
    let result = engine.star(f);
    (result, engine.finish())
}
