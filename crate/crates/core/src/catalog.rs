//! Exhaustive generation of small posets up to isomorphism.
//!
//! Every poset on `n` elements arises from one on `n - 1` elements by adding
//! a new maximal element above a down-set, so each layer is grown from the
//! previous one and deduplicated by canonical form.

use std::collections::BTreeMap;

use fixedbitset::FixedBitSet;

use crate::lattice::downsets;
use crate::poset::{refined_colors, FinitePoset};

/// Canonical form: the lexicographically least strict-order matrix over all
/// relabellings that respect the refined colouring.
pub fn canonical_form(p: &FinitePoset) -> Vec<u64> {
    let n = p.len();
    let colors = refined_colors(p);
    let mut classes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, &c) in colors.iter().enumerate() {
        classes.entry(c).or_default().push(i);
    }
    let groups: Vec<Vec<usize>> = classes.into_values().collect();
    let mut best: Option<Vec<u64>> = None;
    let mut current: Vec<usize> = Vec::with_capacity(n);
    search(p, &groups, 0, &mut current, &mut best);
    best.unwrap_or_default()
}

fn encode(p: &FinitePoset, order: &[usize]) -> Vec<u64> {
    let n = order.len();
    let mut words = vec![0u64; (n * n).div_ceil(64).max(1)];
    for (i, &a) in order.iter().enumerate() {
        for (j, &b) in order.iter().enumerate() {
            if p.lt(a, b) {
                let bit = i * n + j;
                words[bit / 64] |= 1 << (bit % 64);
            }
        }
    }
    words.push(n as u64);
    words
}

fn search(
    p: &FinitePoset,
    groups: &[Vec<usize>],
    g: usize,
    current: &mut Vec<usize>,
    best: &mut Option<Vec<u64>>,
) {
    if g == groups.len() {
        let code = encode(p, current);
        if best.as_ref().is_none_or(|b| code < *b) {
            *best = Some(code);
        }
        return;
    }
    let mut members = groups[g].clone();
    permute(&mut members, 0, &mut |perm| {
        let len = current.len();
        current.extend_from_slice(perm);
        search(p, groups, g + 1, current, best);
        current.truncate(len);
    });
}

fn permute(items: &mut [usize], k: usize, f: &mut dyn FnMut(&[usize])) {
    if k == items.len() {
        f(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, f);
        items.swap(k, i);
    }
}

/// All posets with exactly `n` elements, one per isomorphism class, named
/// `0..n` and sorted by canonical form.
pub fn posets_up_to_iso(n: usize) -> Vec<FinitePoset> {
    posets_up_to_iso_by_size(n).pop().unwrap_or_default()
}

/// Posets of every size `0..=max_n`, grouped by size.
pub fn posets_up_to_iso_by_size(max_n: usize) -> Vec<Vec<FinitePoset>> {
    let mut out = vec![vec![FinitePoset::empty()]];
    let mut layer = vec![FinitePoset::empty()];
    for size in 1..=max_n {
        let mut seen: BTreeMap<Vec<u64>, FinitePoset> = BTreeMap::new();
        for base in &layer {
            for d in downsets(base, usize::MAX).expect("no cap") {
                let grown = add_maximal(base, &d, size);
                seen.entry(canonical_form(&grown)).or_insert(grown);
            }
        }
        layer = seen.into_values().collect();
        out.push(layer.clone());
    }
    out
}

fn add_maximal(base: &FinitePoset, below: &FixedBitSet, size: usize) -> FinitePoset {
    let top = size - 1;
    let names = (0..size).map(|i| i.to_string()).collect();
    let mut pairs = Vec::new();
    for a in 0..base.len() {
        for b in base.up_row(a).ones() {
            pairs.push((a, b));
        }
    }
    for a in below.ones() {
        pairs.push((a, top));
    }
    FinitePoset::from_index_pairs(names, pairs).expect("adding a maximal element keeps a poset")
}

/// Connected posets with exactly `n` elements, up to isomorphism.
pub fn connected_posets_up_to_iso(n: usize) -> Vec<FinitePoset> {
    posets_up_to_iso(n)
        .into_iter()
        .filter(|p| p.order_components().len() == 1)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::find_isomorphism;

    #[test]
    fn counts_match_known_sequence() {
        // unlabeled posets: 1, 1, 2, 5, 16, 63
        let counts: Vec<usize> = posets_up_to_iso_by_size(5).iter().map(Vec::len).collect();
        assert_eq!(counts, vec![1, 1, 2, 5, 16, 63]);
    }

    #[test]
    fn connected_counts() {
        // connected unlabeled posets: 1, 1, 3, 10, 44
        let counts: Vec<usize> = (1..=5).map(|n| connected_posets_up_to_iso(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 3, 10, 44]);
    }

    #[test]
    fn canonical_form_is_invariant_under_relabelling() {
        let p = FinitePoset::from_relation(&["a", "b", "c"], &[("a", "c"), ("b", "c")]).unwrap();
        let q = FinitePoset::from_relation(&["c", "a", "b"], &[("a", "c"), ("b", "c")]).unwrap();
        assert_eq!(canonical_form(&p), canonical_form(&q));
        let r = FinitePoset::from_relation(&["a", "b", "c"], &[("c", "a"), ("c", "b")]).unwrap();
        assert_ne!(canonical_form(&p), canonical_form(&r));
    }

    #[test]
    fn classes_are_pairwise_non_isomorphic() {
        let four = posets_up_to_iso(4);
        for (i, p) in four.iter().enumerate() {
            for q in &four[i + 1..] {
                assert!(find_isomorphism(p, q).is_none());
            }
        }
    }
}
