//! Syntactic operations: bracket operators, subformula replacement, the
//! Leivant and box translations, and outer-box decomposition.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use super::measure::classify;
use super::Formula;

/// Prefix of the fresh atoms that stand in for outer boxed subformulas.
/// The parser cannot produce atoms starting with `_`.
pub const PLACEHOLDER_PREFIX: &str = "_bx";

/// `[a]b`: distributes over `&` and `|`, guards each implication of `b` with
/// `a`, and leaves atoms, constants and boxed formulas alone.
pub fn bracket(a: &Formula, b: &Formula) -> Formula {
    match b {
        Formula::And(l, r) => Formula::and(bracket(a, l), bracket(a, r)),
        Formula::Or(l, r) => Formula::or(bracket(a, l), bracket(a, r)),
        Formula::Imp(..) => Formula::imp(a.clone(), b.clone()),
        _ => b.clone(),
    }
}

/// `[a]'b`: like [`bracket`], except that an implication `b1 -> b2` becomes
/// `(a' & b1) -> b2` where `a'` is `a` with every occurrence of `b1 -> b2`
/// replaced by `b2`.
pub fn bracket_prime(a: &Formula, b: &Formula) -> Formula {
    match b {
        Formula::And(l, r) => Formula::and(bracket_prime(a, l), bracket_prime(a, r)),
        Formula::Or(l, r) => Formula::or(bracket_prime(a, l), bracket_prime(a, r)),
        Formula::Imp(b1, b2) => {
            let weakened = replace_subformula(a, b, b2);
            Formula::imp(Formula::and(weakened, (**b1).clone()), (**b2).clone())
        }
        _ => b.clone(),
    }
}

/// Replace every occurrence of `target` in `a`, boxes included. Matching is
/// top-down and does not look inside a replaced occurrence.
pub fn replace_subformula(a: &Formula, target: &Formula, replacement: &Formula) -> Formula {
    if a == target {
        return replacement.clone();
    }
    match a {
        Formula::Bot | Formula::Top | Formula::Atom(_) => a.clone(),
        Formula::Box(x) => Formula::boxed(replace_subformula(x, target, replacement)),
        Formula::And(x, y) => Formula::and(
            replace_subformula(x, target, replacement),
            replace_subformula(y, target, replacement),
        ),
        Formula::Or(x, y) => Formula::or(
            replace_subformula(x, target, replacement),
            replace_subformula(y, target, replacement),
        ),
        Formula::Imp(x, y) => Formula::imp(
            replace_subformula(x, target, replacement),
            replace_subformula(y, target, replacement),
        ),
    }
}

/// Leivant's translation `A^l`.
pub fn leivant_translate(f: &Formula) -> Formula {
    match f {
        Formula::Bot | Formula::Top | Formula::Atom(_) | Formula::Box(_) => f.clone(),
        Formula::And(a, b) => Formula::and(leivant_translate(a), leivant_translate(b)),
        Formula::Or(a, b) => Formula::or(
            Formula::boxdot(leivant_translate(a)),
            Formula::boxdot(leivant_translate(b)),
        ),
        Formula::Imp(a, b) => {
            if classify(a).is_noi {
                Formula::imp((**a).clone(), leivant_translate(b))
            } else {
                f.clone()
            }
        }
    }
}

/// The box translation `A^□`. Constants are treated as atoms, so
/// `false^□ = false & []false`.
pub fn box_translate(f: &Formula) -> Formula {
    match f {
        Formula::Bot | Formula::Top | Formula::Atom(_) => Formula::boxdot(f.clone()),
        Formula::And(a, b) => Formula::and(box_translate(a), box_translate(b)),
        Formula::Or(a, b) => Formula::or(box_translate(a), box_translate(b)),
        Formula::Imp(a, b) => {
            let inner = Formula::imp(box_translate(a), box_translate(b));
            Formula::and(inner.clone(), Formula::boxed(inner))
        }
        Formula::Box(a) => Formula::boxed(box_translate(a)),
    }
}

/// A formula split into a non-modal skeleton over fresh placeholder atoms and
/// the bodies of its outermost boxed subformulas.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoxDecomposition {
    pub skeleton: Formula,
    /// Placeholder atom names, `placeholders[i]` standing for `[]bodies[i]`.
    pub placeholders: Vec<Arc<str>>,
    pub bodies: Vec<Formula>,
}

impl BoxDecomposition {
    /// Substitute `fillers[i]` for the i-th placeholder in the skeleton.
    pub fn fill(&self, fillers: &[Formula]) -> Formula {
        assert_eq!(fillers.len(), self.placeholders.len());
        let index: HashMap<&str, usize> = self
            .placeholders
            .iter()
            .enumerate()
            .map(|(i, name)| (&**name, i))
            .collect();
        self.skeleton
            .substitute(&|name: &str| index.get(name).map(|&i| fillers[i].clone()))
    }

    /// Undo the decomposition.
    pub fn recompose(&self) -> Formula {
        let boxes: Vec<Formula> = self.bodies.iter().cloned().map(Formula::boxed).collect();
        self.fill(&boxes)
    }
}

/// Replace each outermost boxed subformula by a placeholder atom. Identical
/// boxed subformulas share a placeholder; numbering follows first occurrence
/// from the left.
pub fn decompose_outer_boxes(f: &Formula) -> BoxDecomposition {
    let taken: BTreeSet<Arc<str>> = f.atoms();
    let mut state = Decomposer {
        taken,
        next: 0,
        seen: HashMap::new(),
        placeholders: Vec::new(),
        bodies: Vec::new(),
    };
    let skeleton = state.walk(f);
    BoxDecomposition {
        skeleton,
        placeholders: state.placeholders,
        bodies: state.bodies,
    }
}

struct Decomposer {
    taken: BTreeSet<Arc<str>>,
    next: usize,
    seen: HashMap<Formula, usize>,
    placeholders: Vec<Arc<str>>,
    bodies: Vec<Formula>,
}

impl Decomposer {
    fn fresh(&mut self) -> Arc<str> {
        loop {
            let name: Arc<str> = Arc::from(format!("{PLACEHOLDER_PREFIX}{}", self.next));
            self.next += 1;
            if !self.taken.contains(&name) {
                return name;
            }
        }
    }

    fn walk(&mut self, f: &Formula) -> Formula {
        match f {
            Formula::Bot | Formula::Top | Formula::Atom(_) => f.clone(),
            Formula::Box(body) => {
                let i = match self.seen.get(f) {
                    Some(&i) => i,
                    None => {
                        let name = self.fresh();
                        self.placeholders.push(name);
                        self.bodies.push((**body).clone());
                        self.seen.insert(f.clone(), self.bodies.len() - 1);
                        self.bodies.len() - 1
                    }
                };
                Formula::Atom(self.placeholders[i].clone())
            }
            Formula::And(a, b) => Formula::and(self.walk(a), self.walk(b)),
            Formula::Or(a, b) => Formula::or(self.walk(a), self.walk(b)),
            Formula::Imp(a, b) => Formula::imp(self.walk(a), self.walk(b)),
        }
    }
}
