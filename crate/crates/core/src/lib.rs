//! Decision procedures for the Σ₁-provability logic of Heyting Arithmetic
//! and related intuitionistic modal logics.

pub mod approx;
pub mod decider;
pub mod formula;
pub mod kripke;

pub use approx::{dagger, nnil_star, tnnil_minus, tnnil_plus, RewriteTrace};
pub use decider::{
    decide_hsigma, decide_ipc, decide_ipc_box, ipc_box_equiv, ipc_box_proves, lc_equiv, DecideError,
};
pub use formula::{classify, complexity, parse, ClassFlags, Formula, Measure, ParseError};
pub use kripke::{
    decide_lc, enumerate_perfect_rooted_models, force, unravel_to_tree, validate_model, Certificate,
    Countermodel, DecideOptions, KripkeModel, ModelError, Status, Verdict, Violation,
};
