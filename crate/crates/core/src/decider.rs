//! Provability in H_σ (the Σ₁-provability logic of HA), LC, IPC and
//! IPC_□, all reduced to [`decide_lc`].
//!
//! * H_σ ⊢ A iff LC ⊢ A⁺.
//! * IPC ⊢ A iff LC ⊢ []false -> A, for non-modal A: LC + []false is
//!   conservative over IPC, and adding the axiom []false needs no
//!   necessitation closure because [][]false already follows from []false.
//! * IPC_□ treats each outer boxed formula as a fresh atom.

use thiserror::Error;

use crate::approx::tnnil_plus;
use crate::formula::{decompose_outer_boxes, Formula};
use crate::kripke::{decide_lc, Certificate, DecideOptions, Status, Verdict};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecideError {
    #[error("`{0}` contains a box, but IPC formulas must be non-modal")]
    ModalInput(Formula),
}

/// Decide H_σ ⊢ f by deciding LC ⊢ f⁺. The verdict carries f⁺.
pub fn decide_hsigma(f: &Formula, options: &DecideOptions) -> Verdict {
    let plus = tnnil_plus(f);
    let mut verdict = decide_lc(&plus, options);
    verdict.approx = Some(plus);
    verdict.reduction = Some("H_sigma |- A iff LC |- A+");
    verdict
}

/// Decide IPC ⊢ f for a non-modal f.
pub fn decide_ipc(f: &Formula, options: &DecideOptions) -> Result<Verdict, DecideError> {
    if !f.is_non_modal() {
        return Err(DecideError::ModalInput(f.clone()));
    }
    let mut verdict = decide_lc(&Formula::imp(Formula::boxed(Formula::Bot), f.clone()), options);
    verdict.reduction = Some("IPC |- A iff LC |- []false -> A");
    Ok(verdict)
}

/// Decide IPC_□ ⊢ f: outer boxed subformulas become distinct fresh atoms
/// (identical ones share an atom) and the skeleton is decided in IPC.
pub fn decide_ipc_box(f: &Formula, options: &DecideOptions) -> Verdict {
    let skeleton = decompose_outer_boxes(f).skeleton;
    let mut verdict = decide_ipc(&skeleton, options).expect("skeletons are non-modal");
    verdict.reduction = Some("IPC_box |- A iff IPC |- skeleton(A) iff LC |- []false -> skeleton(A)");
    verdict
}

pub fn ipc_box_proves(f: &Formula, options: &DecideOptions) -> Verdict {
    decide_ipc_box(f, options)
}

/// Combine the verdicts for `a -> b` and `b -> a`: refutations first, then
/// inconclusive results; both provable gives a provable verdict on `a <-> b`.
fn both_directions(a: &Formula, b: &Formula, forward: Verdict, backward: Verdict) -> Verdict {
    for status in [Status::Refuted, Status::Inconclusive] {
        for v in [&forward, &backward] {
            if v.status == status {
                return v.clone();
            }
        }
    }
    let weakest = [forward.certificate, backward.certificate]
        .into_iter()
        .flatten()
        .max_by_key(|c| match c {
            Certificate::Schema => 0,
            Certificate::Saturation => 1,
            Certificate::Exhaustive => 2,
        });
    Verdict {
        formula: Formula::iff(a.clone(), b.clone()),
        certificate: weakest,
        search_cap: forward.search_cap.min(backward.search_cap),
        bound_exponent: forward.bound_exponent.max(backward.bound_exponent),
        ..forward
    }
}

/// LC ⊢ a <-> b, checked as two implications.
pub fn lc_equiv(a: &Formula, b: &Formula, options: &DecideOptions) -> Verdict {
    let forward = decide_lc(&Formula::imp(a.clone(), b.clone()), options);
    let backward = decide_lc(&Formula::imp(b.clone(), a.clone()), options);
    both_directions(a, b, forward, backward)
}

/// IPC_□ ⊢ a <-> b, checked as two implications.
pub fn ipc_box_equiv(a: &Formula, b: &Formula, options: &DecideOptions) -> Verdict {
    let forward = decide_ipc_box(&Formula::imp(a.clone(), b.clone()), options);
    let backward = decide_ipc_box(&Formula::imp(b.clone(), a.clone()), options);
    both_directions(a, b, forward, backward)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::approx::nnil_star;
    use crate::formula::{bracket, parse};

    fn f(text: &str) -> Formula {
        parse(text).unwrap()
    }

    fn opts() -> DecideOptions {
        DecideOptions::default()
    }

    #[test]
    fn hsigma_fixtures() {
        let v = decide_hsigma(&f("[](p | q) -> []p | []q"), &opts());
        assert_eq!(v.status, Status::Refuted);
        assert!(v.approx.is_some());
        assert_eq!(decide_hsigma(&f("p -> []p"), &opts()).status, Status::Provable);
        assert_eq!(decide_hsigma(&f("[]~~[]p -> [][]p"), &opts()).status, Status::Provable);
    }

    #[test]
    fn ipc_fixtures() {
        assert_eq!(decide_ipc(&f("p -> p"), &opts()).unwrap().status, Status::Provable);
        assert_eq!(decide_ipc(&f("p | ~p"), &opts()).unwrap().status, Status::Refuted);
        assert_eq!(decide_ipc(&f("((p -> q) -> p) -> p"), &opts()).unwrap().status, Status::Refuted);
        assert_eq!(
            decide_ipc(&f("[]p"), &opts()).unwrap_err(),
            DecideError::ModalInput(f("[]p"))
        );
    }

    #[test]
    fn ipc_box_fixtures() {
        assert_eq!(decide_ipc_box(&f("[]p -> []p"), &opts()).status, Status::Provable);
        assert_eq!(decide_ipc_box(&f("[]p -> []q"), &opts()).status, Status::Refuted);
        // []p -> p is not an IPC_box theorem even though p -> []p is LC-valid
        assert_eq!(decide_ipc_box(&f("p -> []p"), &opts()).status, Status::Refuted);
        assert_eq!(ipc_box_proves(&Formula::Top, &opts()).status, Status::Provable);
        let a = f("(p -> q) -> r");
        assert_eq!(
            decide_ipc_box(&Formula::imp(nnil_star(&a), a), &opts()).status,
            Status::Provable
        );
        assert_eq!(
            ipc_box_equiv(&bracket(&f("p"), &f("q -> r")), &f("p -> q -> r"), &opts()).status,
            Status::Provable
        );
    }

    #[test]
    fn equivalence() {
        let a = f("[](p | ~p)");
        assert_eq!(lc_equiv(&a, &a, &opts()).status, Status::Provable);
        let v = lc_equiv(&f("p"), &f("[]p"), &opts());
        assert_eq!(v.status, Status::Refuted);
        assert_eq!(v.formula, f("[]p -> p"));
    }
}
