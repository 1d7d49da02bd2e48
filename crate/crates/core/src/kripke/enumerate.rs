//! Exhaustive enumeration of rooted perfect models.
//!
//! Order: rooted posets by canonical form, then accessibility relations,
//! then valuations. Posets are generated up to isomorphism; models over a
//! poset with nontrivial automorphisms are kept only when their encoding is
//! least among all automorphic images.

use std::collections::{BTreeSet, HashSet};
use std::sync::{Arc, Mutex, OnceLock};

use fixedbitset::FixedBitSet;

use super::KripkeModel;

/// Largest node count the enumerator accepts.
pub const MAX_ENUMERATION_NODES: usize = 12;

/// A rooted poset with node 0 as root and a natural labelling
/// (`i ≤ j` implies `i <= j` as integers).
#[derive(Debug)]
pub(crate) struct Poset {
    pub n: usize,
    /// `up[i]`: mask of `{j : i ≤ j}`.
    pub up: Vec<u32>,
    /// All up-closed subsets, ascending as integers.
    pub upsets: Vec<u32>,
    /// Automorphisms other than the identity; `perm[i]` is the image of `i`.
    pub automorphisms: Vec<Vec<u8>>,
}

impl Poset {
    fn strict_up(&self, i: usize) -> u32 {
        self.up[i] & !(1 << i)
    }
}

fn down_masks(up: &[u32]) -> Vec<u32> {
    let n = up.len();
    (0..n)
        .map(|j| (0..n).filter(|&i| i != j && up[i] & (1 << j) != 0).fold(0, |m, i| m | 1 << i))
        .collect()
}

/// Lexicographically least code over all linear extensions: position `k`
/// holds the mask of positions of the strict predecessors of the node placed
/// `k`-th. Returns the code and the placement order achieving it.
fn canonical(up: &[u32]) -> (Vec<u32>, Vec<usize>) {
    let n = up.len();
    let down = down_masks(up);
    let mut best: Option<(Vec<u32>, Vec<usize>)> = None;
    let mut code = Vec::with_capacity(n);
    let mut order = Vec::with_capacity(n);
    let mut pos = vec![usize::MAX; n];

    fn search(
        down: &[u32],
        code: &mut Vec<u32>,
        order: &mut Vec<usize>,
        pos: &mut [usize],
        best: &mut Option<(Vec<u32>, Vec<usize>)>,
    ) {
        let n = down.len();
        let k = code.len();
        if let Some((b, _)) = best.as_ref() {
            if code[..] > b[..k] {
                return;
            }
        }
        if k == n {
            if best.as_ref().is_none_or(|(b, _)| *code < *b) {
                *best = Some((code.clone(), order.clone()));
            }
            return;
        }
        let placed = order.iter().fold(0u32, |m, &v| m | 1 << v);
        let mut candidates: Vec<(u32, usize)> = (0..n)
            .filter(|&v| placed & (1 << v) == 0 && down[v] & !placed == 0)
            .map(|v| {
                let relabelled = (0..n)
                    .filter(|&u| down[v] & (1 << u) != 0)
                    .fold(0u32, |m, u| m | 1 << pos[u]);
                (relabelled, v)
            })
            .collect();
        candidates.sort_unstable();
        let least = candidates[0].0;
        for (value, v) in candidates.into_iter().take_while(|&(value, _)| value == least) {
            code.push(value);
            order.push(v);
            pos[v] = k;
            search(down, code, order, pos, best);
            pos[v] = usize::MAX;
            order.pop();
            code.pop();
        }
    }

    search(&down, &mut code, &mut order, &mut pos, &mut best);
    best.expect("every finite poset has a linear extension")
}

fn relabel(up: &[u32], order: &[usize]) -> Vec<u32> {
    let n = up.len();
    let mut pos = vec![0; n];
    for (k, &v) in order.iter().enumerate() {
        pos[v] = k;
    }
    let mut out = vec![0u32; n];
    for v in 0..n {
        out[pos[v]] = (0..n)
            .filter(|&u| up[v] & (1 << u) != 0)
            .fold(0, |m, u| m | 1 << pos[u]);
    }
    out
}

fn upsets(up: &[u32]) -> Vec<u32> {
    let n = up.len();
    (0..(1u32 << n))
        .filter(|&s| (0..n).all(|i| s & (1 << i) == 0 || up[i] & !s == 0))
        .collect()
}

fn automorphisms(up: &[u32]) -> Vec<Vec<u8>> {
    let n = up.len();
    let mut out = Vec::new();
    let mut perm = vec![0u8; n];
    let mut used = vec![false; n];

    fn extend(up: &[u32], i: usize, perm: &mut [u8], used: &mut [bool], out: &mut Vec<Vec<u8>>) {
        let n = up.len();
        if i == n {
            if perm.iter().enumerate().any(|(a, &b)| a != b as usize) {
                out.push(perm.to_vec());
            }
            return;
        }
        for j in 0..n {
            if used[j] {
                continue;
            }
            let consistent = (0..i).all(|k| {
                let pk = perm[k] as usize;
                (up[k] >> i & 1) == (up[pk] >> j & 1) && (up[i] >> k & 1) == (up[j] >> pk & 1)
            }) && up[i].count_ones() == up[j].count_ones();
            if consistent {
                used[j] = true;
                perm[i] = j as u8;
                extend(up, i + 1, perm, used, out);
                used[j] = false;
            }
        }
    }

    extend(up, 0, &mut perm, &mut used, &mut out);
    out
}

fn build_level(previous: &[Arc<Poset>], n: usize) -> Vec<Arc<Poset>> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for p in previous {
        let m = p.n;
        // Non-empty down-sets are complements of proper up-sets.
        let full = (1u32 << m) - 1;
        for &u in p.upsets.iter().rev() {
            let down = full & !u;
            if down == 0 {
                continue;
            }
            let mut up: Vec<u32> = p.up.clone();
            for (i, mask) in up.iter_mut().enumerate() {
                if down & (1 << i) != 0 {
                    *mask |= 1 << m;
                }
            }
            up.push(1 << m);
            let (code, order) = canonical(&up);
            if seen.insert(code) {
                let up = relabel(&up, &order);
                out.push(Arc::new(Poset {
                    n,
                    upsets: upsets(&up),
                    automorphisms: automorphisms(&up),
                    up,
                }));
            }
        }
    }
    out
}

type PosetsBySize = Vec<Arc<Vec<Arc<Poset>>>>;

/// Rooted posets on `n` nodes, one per isomorphism class, cached.
pub(crate) fn rooted_posets(n: usize) -> Arc<Vec<Arc<Poset>>> {
    assert!((1..=MAX_ENUMERATION_NODES).contains(&n));
    static CACHE: OnceLock<Mutex<PosetsBySize>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| {
        let single = Poset {
            n: 1,
            up: vec![1],
            upsets: vec![0, 1],
            automorphisms: Vec::new(),
        };
        Mutex::new(vec![Arc::new(vec![Arc::new(single)])])
    });
    let mut levels = cache.lock().unwrap_or_else(|e| e.into_inner());
    while levels.len() < n {
        let next = build_level(levels.last().unwrap(), levels.len() + 1);
        levels.push(Arc::new(next));
    }
    levels[n - 1].clone()
}

/// Every accessibility relation on `p` making the model perfect: `R(i)` is
/// an up-set inside the strict up-set of `i` containing `R(j)` for all
/// `j > i`.
pub(crate) fn relations(p: &Poset) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut r = vec![0u32; p.n];

    fn assign(p: &Poset, i: usize, r: &mut [u32], out: &mut Vec<Vec<u32>>) {
        let strict = p.strict_up(i);
        let lower = (0..p.n)
            .filter(|&j| strict & (1 << j) != 0)
            .fold(0, |m, j| m | r[j]);
        for &u in &p.upsets {
            if u & !strict == 0 && lower & !u == 0 {
                r[i] = u;
                if i == 0 {
                    out.push(r.to_vec());
                } else {
                    assign(p, i - 1, r, out);
                }
            }
        }
    }

    assign(p, p.n - 1, &mut r, &mut out);
    out
}

fn permute_mask(mask: u32, perm: &[u8]) -> u32 {
    let mut out = 0;
    let mut rest = mask;
    while rest != 0 {
        let i = rest.trailing_zeros() as usize;
        out |= 1 << perm[i];
        rest &= rest - 1;
    }
    out
}

/// Whether `(r, val)` is the least encoding among its automorphic images.
pub(crate) fn is_canonical(p: &Poset, r: &[u32], val: &[u32], scratch: &mut Vec<u32>) -> bool {
    for perm in &p.automorphisms {
        scratch.clear();
        scratch.resize(p.n, 0);
        for (i, &s) in r.iter().enumerate() {
            scratch[perm[i] as usize] = permute_mask(s, perm);
        }
        let image_val = val.iter().map(|&v| permute_mask(v, perm));
        let image = scratch.iter().copied().chain(image_val);
        let original = r.iter().copied().chain(val.iter().copied());
        if image.lt(original) {
            return false;
        }
    }
    true
}

/// A model in mask form, as produced by the enumerator.
#[derive(Clone, Debug)]
pub(crate) struct CompactModel {
    pub up: Vec<u32>,
    pub r: Vec<u32>,
    /// Extension of each atom.
    pub val: Vec<u32>,
}

impl CompactModel {
    pub fn to_model(&self, atoms: &[Arc<str>]) -> KripkeModel {
        let n = self.up.len();
        let set = |mask: u32| {
            let mut s = FixedBitSet::with_capacity(n);
            s.extend((0..n).filter(|&j| mask & (1 << j) != 0));
            s
        };
        let valuation = (0..n)
            .map(|i| {
                atoms
                    .iter()
                    .zip(&self.val)
                    .filter(|(_, &ext)| ext & (1 << i) != 0)
                    .map(|(a, _)| a.clone())
                    .collect()
            })
            .collect();
        KripkeModel::from_relations(
            (0..n as u32).collect(),
            self.up.iter().map(|&m| set(m)).collect(),
            self.r.iter().map(|&m| set(m)).collect(),
            valuation,
            Some(0),
        )
    }
}

/// Visit every rooted perfect model with `n` nodes and `atoms` atoms, up to
/// isomorphism, in enumeration order, until `visit` returns `true`.
pub(crate) fn search_models(n: usize, atoms: usize, mut visit: impl FnMut(&CompactModel) -> bool) -> bool {
    let mut scratch = Vec::new();
    for p in rooted_posets(n).iter() {
        let k = p.upsets.len();
        let total = k.checked_pow(atoms as u32).expect("valuation count overflows");
        for r in relations(p) {
            let mut model = CompactModel {
                up: p.up.clone(),
                r,
                val: vec![0; atoms],
            };
            for code in 0..total {
                let mut rest = code;
                for slot in model.val.iter_mut() {
                    *slot = p.upsets[rest % k];
                    rest /= k;
                }
                if !p.automorphisms.is_empty() && !is_canonical(p, &model.r, &model.val, &mut scratch) {
                    continue;
                }
                if visit(&model) {
                    return true;
                }
            }
        }
    }
    false
}

/// All rooted perfect models over exactly `node_count` nodes and the given
/// atoms, one per isomorphism class, rooted at node 0.
///
/// # Panics
///
/// If `node_count` is 0 or exceeds [`MAX_ENUMERATION_NODES`].
pub fn enumerate_perfect_rooted_models(
    atoms: &BTreeSet<Arc<str>>,
    node_count: usize,
) -> impl Iterator<Item = KripkeModel> {
    let atoms: Vec<Arc<str>> = atoms.iter().cloned().collect();
    let posets = rooted_posets(node_count);
    let mut scratch = Vec::new();
    (0..posets.len()).flat_map(move |pi| {
        let p = posets[pi].clone();
        let atoms = atoms.clone();
        let k = p.upsets.len();
        let total = k.pow(atoms.len() as u32);
        let mut found = Vec::new();
        for r in relations(&p) {
            for code in 0..total {
                let mut rest = code;
                let val: Vec<u32> = (0..atoms.len())
                    .map(|_| {
                        let v = p.upsets[rest % k];
                        rest /= k;
                        v
                    })
                    .collect();
                if p.automorphisms.is_empty() || is_canonical(&p, &r, &val, &mut scratch) {
                    let m = CompactModel { up: p.up.clone(), r: r.clone(), val };
                    found.push(m.to_model(&atoms));
                }
            }
        }
        found
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kripke::validate_model;

    fn atoms(names: &[&str]) -> BTreeSet<Arc<str>> {
        names.iter().map(|a| Arc::from(*a)).collect()
    }

    #[test]
    fn rooted_poset_counts() {
        let counts: Vec<usize> = (1..=6).map(|n| rooted_posets(n).len()).collect();
        // one more than the number of posets on n - 1 points
        assert_eq!(counts, vec![1, 1, 2, 5, 16, 63]);
    }

    #[test]
    fn posets_are_naturally_labelled_and_rooted() {
        for n in 1..=5 {
            for p in rooted_posets(n).iter() {
                assert_eq!(p.up[0], (1 << n) - 1);
                for i in 0..n {
                    assert_eq!(p.up[i] & ((1 << i) - 1), 0);
                }
            }
        }
    }

    #[test]
    fn small_model_counts() {
        assert_eq!(enumerate_perfect_rooted_models(&atoms(&["p"]), 1).count(), 2);
        assert_eq!(enumerate_perfect_rooted_models(&atoms(&[]), 1).count(), 1);
        // two nodes a < b: R(b) = {} and R(a) in {{}, {b}}; p extension one of 3 up-sets
        assert_eq!(enumerate_perfect_rooted_models(&atoms(&["p"]), 2).count(), 6);
    }

    #[test]
    fn automorphism_dedup() {
        // root with two incomparable children, no atoms: R(root) is one of
        // {}, {b}, {c}, {b, c}; {b} and {c} are isomorphic.
        let p = rooted_posets(3)
            .iter()
            .find(|p| !p.automorphisms.is_empty())
            .cloned()
            .unwrap();
        assert_eq!(relations(&p).len(), 4);
        let models: Vec<_> = enumerate_perfect_rooted_models(&atoms(&[]), 3).collect();
        // chain 0 < 1 < 2: R(1) = {} leaves 3 choices for R(0), R(1) = {2} leaves 2
        assert_eq!(models.len(), 5 + 3);
    }

    #[test]
    fn enumerated_models_are_perfect() {
        for n in 1..=3 {
            for m in enumerate_perfect_rooted_models(&atoms(&["p", "q"]), n) {
                assert!(validate_model(&m, true).is_empty(), "{m:?}");
                assert_eq!(m.root(), Some(0));
            }
        }
    }
}
