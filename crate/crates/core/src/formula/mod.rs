//! The modal propositional language.
//!
//! Formulas are immutable trees with shared children, so cloning is cheap and
//! values can be handed across threads freely. Negation, bi-implication and
//! "boxdot" are sugar over the seven primitive constructors: `~A` is stored as
//! `A -> false`, so algorithms never see a separate negation node.

mod measure;
mod ops;
mod parse;

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

pub use measure::{classify, complexity, ClassFlags, Measure};
pub use ops::{
    box_translate, bracket, bracket_prime, decompose_outer_boxes, leivant_translate,
    replace_subformula, BoxDecomposition, PLACEHOLDER_PREFIX,
};
pub use parse::{parse, ParseError};

/// A modal proposition.
///
/// The derived ordering is the fixed structural order used wherever the
/// algorithms need a canonical member order (variant order first, then
/// children left to right).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Bot,
    Top,
    Atom(Arc<str>),
    And(Arc<Formula>, Arc<Formula>),
    Or(Arc<Formula>, Arc<Formula>),
    Imp(Arc<Formula>, Arc<Formula>),
    Box(Arc<Formula>),
}

impl Formula {
    pub fn atom(name: &str) -> Formula {
        Formula::Atom(Arc::from(name))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Arc::new(a), Arc::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Arc::new(a), Arc::new(b))
    }

    pub fn imp(a: Formula, b: Formula) -> Formula {
        Formula::Imp(Arc::new(a), Arc::new(b))
    }

    pub fn boxed(a: Formula) -> Formula {
        Formula::Box(Arc::new(a))
    }

    /// `~a`, i.e. `a -> false`.
    #[allow(clippy::should_implement_trait)]
    pub fn neg(a: Formula) -> Formula {
        Formula::imp(a, Formula::Bot)
    }

    /// `(a -> b) & (b -> a)`.
    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::and(Formula::imp(a.clone(), b.clone()), Formula::imp(b, a))
    }

    /// `a & []a`.
    pub fn boxdot(a: Formula) -> Formula {
        Formula::and(a.clone(), Formula::boxed(a))
    }

    /// Left-nested conjunction of `items`; the empty conjunction is `true`.
    pub fn conj<I: IntoIterator<Item = Formula>>(items: I) -> Formula {
        items
            .into_iter()
            .reduce(Formula::and)
            .unwrap_or(Formula::Top)
    }

    /// Left-nested disjunction of `items`; the empty disjunction is `false`.
    pub fn disj<I: IntoIterator<Item = Formula>>(items: I) -> Formula {
        items
            .into_iter()
            .reduce(Formula::or)
            .unwrap_or(Formula::Bot)
    }

    /// Atoms, `true` and `false`.
    pub fn is_atomic(&self) -> bool {
        matches!(self, Formula::Bot | Formula::Top | Formula::Atom(_))
    }

    pub fn is_boxed(&self) -> bool {
        matches!(self, Formula::Box(_))
    }

    /// True when the formula contains no box at all.
    pub fn is_non_modal(&self) -> bool {
        match self {
            Formula::Bot | Formula::Top | Formula::Atom(_) => true,
            Formula::Box(_) => false,
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                a.is_non_modal() && b.is_non_modal()
            }
        }
    }

    /// Atom names occurring anywhere in the formula, including under boxes.
    pub fn atoms(&self) -> BTreeSet<Arc<str>> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<Arc<str>>) {
        match self {
            Formula::Atom(p) => {
                out.insert(p.clone());
            }
            Formula::Bot | Formula::Top => {}
            Formula::Box(a) => a.collect_atoms(out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }

    /// The set of all subformulas, the formula itself included.
    pub fn subformulas(&self) -> BTreeSet<Formula> {
        let mut out = BTreeSet::new();
        self.collect_subformulas(&mut out);
        out
    }

    fn collect_subformulas(&self, out: &mut BTreeSet<Formula>) {
        if !out.insert(self.clone()) {
            return;
        }
        match self {
            Formula::Bot | Formula::Top | Formula::Atom(_) => {}
            Formula::Box(a) => a.collect_subformulas(out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                a.collect_subformulas(out);
                b.collect_subformulas(out);
            }
        }
    }

    /// Number of constructor nodes in the tree.
    pub fn size(&self) -> usize {
        match self {
            Formula::Bot | Formula::Top | Formula::Atom(_) => 1,
            Formula::Box(a) => 1 + a.size(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => 1 + a.size() + b.size(),
        }
    }

    /// Replace atoms by formulas; atoms for which `map` returns `None` stay.
    pub fn substitute<F>(&self, map: &F) -> Formula
    where
        F: Fn(&str) -> Option<Formula>,
    {
        match self {
            Formula::Atom(p) => map(p).unwrap_or_else(|| self.clone()),
            Formula::Bot | Formula::Top => self.clone(),
            Formula::Box(a) => Formula::boxed(a.substitute(map)),
            Formula::And(a, b) => Formula::and(a.substitute(map), b.substitute(map)),
            Formula::Or(a, b) => Formula::or(a.substitute(map), b.substitute(map)),
            Formula::Imp(a, b) => Formula::imp(a.substitute(map), b.substitute(map)),
        }
    }

    /// Every boxed subformula, including nested ones.
    pub fn boxed_subformulas(&self) -> BTreeSet<Formula> {
        self.subformulas()
            .into_iter()
            .filter(Formula::is_boxed)
            .collect()
    }
}

// Binding strength used by the printer; higher binds tighter.
const PREC_IMP: u8 = 1;
const PREC_OR: u8 = 2;
const PREC_AND: u8 = 3;
const PREC_UNARY: u8 = 4;

impl Formula {
    fn precedence(&self) -> u8 {
        match self {
            Formula::Imp(_, b) if **b == Formula::Bot => PREC_UNARY,
            Formula::Imp(..) => PREC_IMP,
            Formula::Or(..) => PREC_OR,
            Formula::And(..) => PREC_AND,
            _ => PREC_UNARY,
        }
    }

    fn write_at(&self, f: &mut fmt::Formatter<'_>, context: u8) -> fmt::Result {
        let own = self.precedence();
        if own < context {
            f.write_str("(")?;
            self.write_bare(f)?;
            f.write_str(")")
        } else {
            self.write_bare(f)
        }
    }

    fn write_bare(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Bot => f.write_str("false"),
            Formula::Top => f.write_str("true"),
            Formula::Atom(p) => f.write_str(p),
            Formula::Imp(a, b) if **b == Formula::Bot => {
                f.write_str("~")?;
                a.write_at(f, PREC_UNARY)
            }
            Formula::Box(a) => {
                f.write_str("[]")?;
                a.write_at(f, PREC_UNARY)
            }
            Formula::And(a, b) => {
                a.write_at(f, PREC_AND)?;
                f.write_str(" & ")?;
                b.write_at(f, PREC_UNARY)
            }
            Formula::Or(a, b) => {
                a.write_at(f, PREC_OR)?;
                f.write_str(" | ")?;
                b.write_at(f, PREC_AND)
            }
            Formula::Imp(a, b) => {
                a.write_at(f, PREC_OR)?;
                f.write_str(" -> ")?;
                b.write_at(f, PREC_IMP)
            }
        }
    }
}

/// Minimal-parenthesis rendering in the input grammar.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, 0)
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Serialized as its text rendering.
impl serde::Serialize for Formula {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl std::str::FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}
