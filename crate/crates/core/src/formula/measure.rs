//! Complexity measures and syntactic classes.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;

use serde::Serialize;

use super::Formula;

/// Complexity of a formula.
///
/// `rho` measures nesting of implications to the left (NNIL is `rho <= 1`).
/// The triple `(box_depth, imp_nesting, connectives)`, compared
/// lexicographically by [`Measure::order`], is the termination measure of the
/// approximation algorithms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Measure {
    pub rho: usize,
    /// Maximum number of nested boxes.
    pub box_depth: usize,
    /// Largest number of outer implications found below any outer implication.
    pub imp_nesting: usize,
    /// Binary connectives not in the scope of a box.
    pub connectives: usize,
}

impl Measure {
    pub fn key(&self) -> (usize, usize, usize) {
        (self.box_depth, self.imp_nesting, self.connectives)
    }

    /// Lexicographic comparison on `(box_depth, imp_nesting, connectives)`;
    /// `rho` does not take part.
    pub fn order(&self, other: &Measure) -> Ordering {
        self.key().cmp(&other.key())
    }

    pub fn is_below(&self, other: &Measure) -> bool {
        self.order(other) == Ordering::Less
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "rho={} d={} i={} c={}",
            self.rho, self.box_depth, self.imp_nesting, self.connectives
        )
    }
}

fn rho(f: &Formula) -> usize {
    match f {
        Formula::Bot | Formula::Top | Formula::Atom(_) | Formula::Box(_) => 0,
        Formula::And(a, b) | Formula::Or(a, b) => rho(a).max(rho(b)),
        Formula::Imp(a, b) => (rho(a) + 1).max(rho(b)),
    }
}

fn box_depth(f: &Formula) -> usize {
    match f {
        Formula::Bot | Formula::Top | Formula::Atom(_) => 0,
        Formula::Box(a) => box_depth(a) + 1,
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => box_depth(a).max(box_depth(b)),
    }
}

fn outer_connectives(f: &Formula) -> usize {
    match f {
        Formula::Bot | Formula::Top | Formula::Atom(_) | Formula::Box(_) => 0,
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
            1 + outer_connectives(a) + outer_connectives(b)
        }
    }
}

/// Implication subformulas not in the scope of a box, as a set.
fn outer_implications<'a>(f: &'a Formula, out: &mut HashSet<&'a Formula>) {
    match f {
        Formula::Bot | Formula::Top | Formula::Atom(_) | Formula::Box(_) => {}
        Formula::And(a, b) | Formula::Or(a, b) => {
            outer_implications(a, out);
            outer_implications(b, out);
        }
        Formula::Imp(a, b) => {
            if out.insert(f) {
                outer_implications(a, out);
                outer_implications(b, out);
            }
        }
    }
}

fn imp_nesting(f: &Formula) -> usize {
    let mut top = HashSet::new();
    outer_implications(f, &mut top);
    top.iter()
        .map(|e| {
            let mut inner = HashSet::new();
            outer_implications(e, &mut inner);
            inner.len()
        })
        .max()
        .unwrap_or(0)
}

pub fn complexity(f: &Formula) -> Measure {
    Measure {
        rho: rho(f),
        box_depth: box_depth(f),
        imp_nesting: imp_nesting(f),
        connectives: outer_connectives(f),
    }
}

/// Membership in the syntactic classes NOI, NNIL, TNNIL and TNNIL⁻.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ClassFlags {
    pub is_noi: bool,
    pub is_nnil: bool,
    pub is_tnnil: bool,
    pub is_tnnil_minus: bool,
}

/// No implication outside the scope of a box.
fn is_noi(f: &Formula) -> bool {
    match f {
        Formula::Bot | Formula::Top | Formula::Atom(_) | Formula::Box(_) => true,
        Formula::And(a, b) | Formula::Or(a, b) => is_noi(a) && is_noi(b),
        Formula::Imp(..) => false,
    }
}

// Computed structurally rather than through `rho`, so the two can be
// cross-checked against each other.
fn is_nnil(f: &Formula) -> bool {
    match f {
        Formula::Bot | Formula::Top | Formula::Atom(_) | Formula::Box(_) => true,
        Formula::And(a, b) | Formula::Or(a, b) => is_nnil(a) && is_nnil(b),
        Formula::Imp(a, b) => is_noi(a) && is_nnil(b),
    }
}

fn is_tnnil(f: &Formula) -> bool {
    match f {
        Formula::Bot | Formula::Top | Formula::Atom(_) => true,
        Formula::Box(a) => is_tnnil(a),
        Formula::And(a, b) | Formula::Or(a, b) => is_tnnil(a) && is_tnnil(b),
        Formula::Imp(a, b) => is_noi(a) && is_tnnil(a) && is_tnnil(b),
    }
}

/// A non-modal skeleton whose outer boxed formulas all have TNNIL bodies.
fn is_tnnil_minus(f: &Formula) -> bool {
    match f {
        Formula::Bot | Formula::Top | Formula::Atom(_) => true,
        Formula::Box(a) => is_tnnil(a),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
            is_tnnil_minus(a) && is_tnnil_minus(b)
        }
    }
}

pub fn classify(f: &Formula) -> ClassFlags {
    ClassFlags {
        is_noi: is_noi(f),
        is_nnil: is_nnil(f),
        is_tnnil: is_tnnil(f),
        is_tnnil_minus: is_tnnil_minus(f),
    }
}
