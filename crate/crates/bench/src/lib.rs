//! Fixture formulas shared by the benchmarks.

use hsigma_core::{parse, Formula};

/// Formulas refuted in LC or H_sigma, each with a small countermodel.
pub const REFUTED: &[&str] = &[
    "[]p -> p",
    "[](p | q) -> []p | []q",
    "~~[](~~p -> p) -> [](~~p -> p)",
    "(p -> q) -> [](p -> q)",
];

/// Formulas provable in LC.
pub const PROVABLE: &[&str] = &[
    "p -> []p",
    "[]p -> [][]p",
    "[](p | q) -> []([]p | q)",
    "[]([]p -> p) -> []p",
];

/// Formulas with nested implications, for the approximation algorithms.
pub const NESTED: &[&str] = &[
    "~~p",
    "(p -> q) -> r",
    "((p -> q) -> r) -> s",
    "((p -> q) -> p) -> p",
    "~~[](~~p -> p) -> [](~~p -> p)",
    "(([]p -> q) -> r) | (s -> []t)",
];

pub fn formulas(texts: &[&str]) -> Vec<Formula> {
    texts.iter().map(|t| parse(t).expect("fixture parses")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_parse() {
        for texts in [REFUTED, PROVABLE, NESTED] {
            assert_eq!(formulas(texts).len(), texts.len());
        }
    }
}
