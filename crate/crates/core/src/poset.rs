//! Finite posets stored as a reflexive, transitively closed bit matrix.
//!
//! Elements are addressed by their position in insertion order. Every set
//! returned by this module is an [`ElemSet`] over those positions, so
//! iterating it with `ones()` yields elements in canonical order.

use std::collections::HashMap;

use fixedbitset::FixedBitSet;
use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default ceiling on the number of poset elements.
pub const DEFAULT_ELEMENT_CAP: usize = 4096;

/// A set of element positions.
pub type ElemSet = FixedBitSet;

#[derive(Clone, Debug)]
pub struct FinitePoset {
    names: Vec<String>,
    index: HashMap<String, usize>,
    // up[i] = { j | i <= j }, down[i] = { j | j <= i }
    up: Vec<FixedBitSet>,
    down: Vec<FixedBitSet>,
}

impl PartialEq for FinitePoset {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names && self.up == other.up
    }
}

impl Eq for FinitePoset {}

/// Wire format: `{"elements": [...], "le": [[a, b], ...]}`. The `le` list holds
/// generating pairs; the closure is taken on load.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetJson {
    pub elements: Vec<String>,
    #[serde(default)]
    pub le: Vec<(String, String)>,
}

impl FinitePoset {
    pub fn from_relation<S: AsRef<str>>(elements: &[S], pairs: &[(S, S)]) -> Result<Self> {
        Self::from_relation_with_cap(elements, pairs, DEFAULT_ELEMENT_CAP)
    }

    pub fn from_relation_with_cap<S: AsRef<str>>(
        elements: &[S],
        pairs: &[(S, S)],
        cap: usize,
    ) -> Result<Self> {
        let names: Vec<String> = elements.iter().map(|s| s.as_ref().to_string()).collect();
        let index = build_index(&names)?;
        let mut idx_pairs = Vec::with_capacity(pairs.len());
        for (a, b) in pairs {
            let ia = *index
                .get(a.as_ref())
                .ok_or_else(|| Error::UnknownId(a.as_ref().to_string()))?;
            let ib = *index
                .get(b.as_ref())
                .ok_or_else(|| Error::UnknownId(b.as_ref().to_string()))?;
            idx_pairs.push((ia, ib));
        }
        Self::build(names, index, idx_pairs, cap)
    }

    /// Builds a poset from element names and generating pairs given by position.
    pub fn from_index_pairs(
        names: Vec<String>,
        pairs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        Self::from_index_pairs_with_cap(names, pairs, DEFAULT_ELEMENT_CAP)
    }

    pub fn from_index_pairs_with_cap(
        names: Vec<String>,
        pairs: impl IntoIterator<Item = (usize, usize)>,
        cap: usize,
    ) -> Result<Self> {
        let index = build_index(&names)?;
        let n = names.len();
        let mut checked = Vec::new();
        for (a, b) in pairs {
            if a >= n {
                return Err(Error::UnknownId(format!("#{a}")));
            }
            if b >= n {
                return Err(Error::UnknownId(format!("#{b}")));
            }
            checked.push((a, b));
        }
        Self::build(names, index, checked, cap)
    }

    fn build(
        names: Vec<String>,
        index: HashMap<String, usize>,
        pairs: Vec<(usize, usize)>,
        cap: usize,
    ) -> Result<Self> {
        let n = names.len();
        if n > cap {
            return Err(Error::CapExceeded {
                what: "poset elements",
                count: n,
                cap,
            });
        }
        let mut up: Vec<FixedBitSet> = (0..n)
            .map(|i| {
                let mut row = FixedBitSet::with_capacity(n);
                row.insert(i);
                row
            })
            .collect();
        for (a, b) in pairs {
            up[a].insert(b);
        }
        // Warshall over bit rows.
        for k in 0..n {
            let row_k = up[k].clone();
            for row in up.iter_mut() {
                if row.contains(k) {
                    row.union_with(&row_k);
                }
            }
        }
        for i in 0..n {
            for j in up[i].ones() {
                if j != i && up[j].contains(i) {
                    return Err(Error::Cycle(names[i].clone(), names[j].clone()));
                }
            }
        }
        let down = transpose(&up, n);
        Ok(FinitePoset {
            names,
            index,
            up,
            down,
        })
    }

    pub fn from_json(json: &PosetJson) -> Result<Self> {
        Self::from_relation(&json.elements, &json.le)
    }

    pub fn from_json_with_cap(json: &PosetJson, cap: usize) -> Result<Self> {
        Self::from_relation_with_cap(&json.elements, &json.le, cap)
    }

    /// Serializes with the cover relation as generating pairs.
    pub fn to_json(&self) -> PosetJson {
        PosetJson {
            elements: self.names.clone(),
            le: self
                .covers()
                .into_iter()
                .map(|(a, b)| (self.names[a].clone(), self.names[b].clone()))
                .collect(),
        }
    }

    pub fn empty() -> Self {
        FinitePoset {
            names: Vec::new(),
            index: HashMap::new(),
            up: Vec::new(),
            down: Vec::new(),
        }
    }

    pub fn antichain(n: usize) -> Self {
        let names = (0..n).map(|i| i.to_string()).collect();
        Self::from_index_pairs(names, std::iter::empty()).expect("antichain is a poset")
    }

    pub fn chain(n: usize) -> Self {
        let names = (0..n).map(|i| i.to_string()).collect();
        Self::from_index_pairs(names, (1..n).map(|i| (i - 1, i))).expect("chain is a poset")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownId(name.to_string()))
    }

    /// Resolves a list of names into a set, rejecting unknown ids.
    pub fn set_of<S: AsRef<str>>(&self, names: &[S]) -> Result<ElemSet> {
        let mut set = self.empty_set();
        for name in names {
            set.insert(self.index_of(name.as_ref())?);
        }
        Ok(set)
    }

    /// Names of the members of `set`, in canonical order.
    pub fn names_of(&self, set: &ElemSet) -> Vec<String> {
        set.ones().map(|i| self.names[i].clone()).collect()
    }

    pub fn empty_set(&self) -> ElemSet {
        FixedBitSet::with_capacity(self.len())
    }

    pub fn full_set(&self) -> ElemSet {
        let mut s = self.empty_set();
        s.insert_range(..);
        s
    }

    #[inline]
    pub fn le(&self, a: usize, b: usize) -> bool {
        self.up[a].contains(b)
    }

    #[inline]
    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.le(a, b)
    }

    pub fn comparable(&self, a: usize, b: usize) -> bool {
        self.le(a, b) || self.le(b, a)
    }

    /// `[a)` as a bit row.
    pub fn up_row(&self, a: usize) -> &ElemSet {
        &self.up[a]
    }

    /// `(a]` as a bit row.
    pub fn down_row(&self, a: usize) -> &ElemSet {
        &self.down[a]
    }

    /// `(Y] = { x | x <= y for some y in Y }`
    pub fn down_set(&self, ys: &ElemSet) -> ElemSet {
        let mut out = self.empty_set();
        for y in ys.ones() {
            out.union_with(&self.down[y]);
        }
        out
    }

    /// `[Y) = { x | x >= y for some y in Y }`
    pub fn up_set(&self, ys: &ElemSet) -> ElemSet {
        let mut out = self.empty_set();
        for y in ys.ones() {
            out.union_with(&self.up[y]);
        }
        out
    }

    /// `[x, y] = [x) ∩ (y]`; empty unless `x <= y`.
    pub fn interval(&self, x: usize, y: usize) -> ElemSet {
        let mut out = self.up[x].clone();
        out.intersect_with(&self.down[y]);
        out
    }

    pub fn is_decreasing(&self, set: &ElemSet) -> bool {
        set.ones().all(|y| self.down[y].is_subset(set))
    }

    pub fn is_increasing(&self, set: &ElemSet) -> bool {
        set.ones().all(|y| self.up[y].is_subset(set))
    }

    pub fn is_chain(&self, set: &ElemSet) -> bool {
        let members: Vec<usize> = set.ones().collect();
        members
            .iter()
            .enumerate()
            .all(|(k, &a)| members[k + 1..].iter().all(|&b| self.comparable(a, b)))
    }

    /// Hasse diagram edges `(a, b)` with `a` covered by `b`, sorted.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.len() {
            for b in self.up[a].ones() {
                if b == a {
                    continue;
                }
                // a < b is a cover iff nothing sits strictly between
                let mut between = self.up[a].clone();
                between.intersect_with(&self.down[b]);
                if between.count_ones(..) == 2 {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Number of pairs `a <= b`, reflexive pairs included.
    pub fn relation_size(&self) -> usize {
        self.up.iter().map(|r| r.count_ones(..)).sum()
    }

    pub fn order_components(&self) -> ComponentPartition {
        let n = self.len();
        let mut uf = UnionFind::<usize>::new(n);
        for a in 0..n {
            for b in self.up[a].ones() {
                uf.union(a, b);
            }
        }
        let labels = uf.into_labeling();
        let mut block_of = vec![usize::MAX; n];
        let mut blocks: Vec<ElemSet> = Vec::new();
        let mut rep_block: HashMap<usize, usize> = HashMap::new();
        for (i, &label) in labels.iter().enumerate() {
            let b = *rep_block.entry(label).or_insert_with(|| {
                blocks.push(FixedBitSet::with_capacity(n));
                blocks.len() - 1
            });
            blocks[b].insert(i);
            block_of[i] = b;
        }
        ComponentPartition { blocks, block_of }
    }

    /// Subposet induced on `set`, keeping names.
    pub fn induced(&self, set: &ElemSet) -> FinitePoset {
        let keep: Vec<usize> = set.ones().collect();
        let names = keep.iter().map(|&i| self.names[i].clone()).collect();
        let mut pairs = Vec::new();
        for (ia, &a) in keep.iter().enumerate() {
            for (ib, &b) in keep.iter().enumerate() {
                if self.le(a, b) {
                    pairs.push((ia, ib));
                }
            }
        }
        FinitePoset::from_index_pairs_with_cap(names, pairs, usize::MAX)
            .expect("restriction of a partial order is a partial order")
    }

    /// Same order with elements renamed; `names` must be distinct.
    pub fn renamed(&self, names: Vec<String>) -> Result<FinitePoset> {
        assert_eq!(names.len(), self.len());
        let index = build_index(&names)?;
        Ok(FinitePoset {
            names,
            index,
            up: self.up.clone(),
            down: self.down.clone(),
        })
    }
}

fn build_index(names: &[String]) -> Result<HashMap<String, usize>> {
    let mut index = HashMap::with_capacity(names.len());
    for (i, name) in names.iter().enumerate() {
        if index.insert(name.clone(), i).is_some() {
            return Err(Error::DuplicateId(name.clone()));
        }
    }
    Ok(index)
}

fn transpose(rows: &[FixedBitSet], n: usize) -> Vec<FixedBitSet> {
    let mut cols = vec![FixedBitSet::with_capacity(n); n];
    for (i, row) in rows.iter().enumerate() {
        for j in row.ones() {
            cols[j].insert(i);
        }
    }
    cols
}

/// Partition of a poset into order components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentPartition {
    pub blocks: Vec<ElemSet>,
    pub block_of: Vec<usize>,
}

impl ComponentPartition {
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }
}

/// Disjoint union; element `e` of part `k` is renamed `k:e`.
pub fn disjoint_union(parts: &[FinitePoset]) -> FinitePoset {
    let mut names = Vec::new();
    let mut pairs = Vec::new();
    let mut offset = 0;
    for (k, part) in parts.iter().enumerate() {
        for name in part.names() {
            names.push(format!("{k}:{name}"));
        }
        for a in 0..part.len() {
            for b in part.up_row(a).ones() {
                pairs.push((offset + a, offset + b));
            }
        }
        offset += part.len();
    }
    FinitePoset::from_index_pairs_with_cap(names, pairs, usize::MAX)
        .expect("disjoint union of posets is a poset")
}

/// Stable colouring by iterated refinement of (down-size, up-size) with the
/// multisets of neighbour colours. Colours are ranks of sorted signatures, so
/// isomorphic posets receive identical colourings.
pub(crate) fn refined_colors(p: &FinitePoset) -> Vec<usize> {
    let n = p.len();
    let initial: Vec<(usize, usize)> = (0..n)
        .map(|i| (p.down[i].count_ones(..), p.up[i].count_ones(..)))
        .collect();
    let mut colors = rank(&initial);
    let mut classes = count_distinct(&colors);
    loop {
        let sigs: Vec<(usize, Vec<usize>, Vec<usize>)> = (0..n)
            .map(|i| {
                let mut below: Vec<usize> =
                    p.down[i].ones().filter(|&j| j != i).map(|j| colors[j]).collect();
                let mut above: Vec<usize> =
                    p.up[i].ones().filter(|&j| j != i).map(|j| colors[j]).collect();
                below.sort_unstable();
                above.sort_unstable();
                (colors[i], below, above)
            })
            .collect();
        let next = rank(&sigs);
        let next_classes = count_distinct(&next);
        colors = next;
        if next_classes == classes {
            return colors;
        }
        classes = next_classes;
    }
}

fn rank<T: Ord + Clone>(sigs: &[T]) -> Vec<usize> {
    let mut sorted: Vec<T> = sigs.to_vec();
    sorted.sort();
    sorted.dedup();
    sigs.iter()
        .map(|s| sorted.binary_search(s).expect("present"))
        .collect()
}

fn count_distinct(colors: &[usize]) -> usize {
    let mut c = colors.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

/// Finds an order isomorphism `p -> q`, returned as `map[i] = image of i`.
pub fn find_isomorphism(p: &FinitePoset, q: &FinitePoset) -> Option<Vec<usize>> {
    let n = p.len();
    if n != q.len() || p.relation_size() != q.relation_size() {
        return None;
    }
    let cp = refined_colors(p);
    let cq = refined_colors(q);
    let mut hp = cp.clone();
    let mut hq = cq.clone();
    hp.sort_unstable();
    hq.sort_unstable();
    if hp != hq {
        return None;
    }
    // Assign rare colours first; ties by canonical order.
    let mut class_size = HashMap::new();
    for &c in &cp {
        *class_size.entry(c).or_insert(0usize) += 1;
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| (class_size[&cp[i]], cp[i], i));
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    if assign(p, q, &cp, &cq, &order, 0, &mut map, &mut used) {
        Some(map)
    } else {
        None
    }
}

#[allow(clippy::too_many_arguments)]
fn assign(
    p: &FinitePoset,
    q: &FinitePoset,
    cp: &[usize],
    cq: &[usize],
    order: &[usize],
    depth: usize,
    map: &mut [usize],
    used: &mut [bool],
) -> bool {
    if depth == order.len() {
        return true;
    }
    let x = order[depth];
    for y in 0..q.len() {
        if used[y] || cq[y] != cp[x] {
            continue;
        }
        let consistent = order[..depth].iter().all(|&a| {
            let fa = map[a];
            p.le(a, x) == q.le(fa, y) && p.le(x, a) == q.le(y, fa)
        });
        if !consistent {
            continue;
        }
        map[x] = y;
        used[y] = true;
        if assign(p, q, cp, cq, order, depth + 1, map, used) {
            return true;
        }
        used[y] = false;
        map[x] = usize::MAX;
    }
    false
}

/// Checks that `map` is a bijection `p -> q` preserving and reflecting order.
pub fn is_order_isomorphism(p: &FinitePoset, q: &FinitePoset, map: &[usize]) -> bool {
    if p.len() != q.len() || map.len() != p.len() {
        return false;
    }
    let mut seen = vec![false; q.len()];
    for &y in map {
        if y >= q.len() || seen[y] {
            return false;
        }
        seen[y] = true;
    }
    (0..p.len()).all(|a| (0..p.len()).all(|b| p.le(a, b) == q.le(map[a], map[b])))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn abc_chain() -> FinitePoset {
        FinitePoset::from_relation(&["a", "b", "c"], &[("a", "b"), ("b", "c")]).unwrap()
    }

    fn names(p: &FinitePoset, s: &ElemSet) -> Vec<String> {
        p.names_of(s)
    }

    #[test]
    fn closure_of_chain() {
        let p = abc_chain();
        assert_eq!(p.relation_size(), 6);
        assert!(p.le(0, 2));
        assert!(!p.le(2, 0));
    }

    #[test]
    fn single_point() {
        let p = FinitePoset::from_relation::<&str>(&["a"], &[]).unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(p.relation_size(), 1);
    }

    #[test]
    fn antisymmetry_violation_is_rejected() {
        let err = FinitePoset::from_relation(&["a", "b"], &[("a", "b"), ("b", "a")]).unwrap_err();
        assert!(matches!(err, Error::Cycle(_, _)));
    }

    #[test]
    fn unknown_and_duplicate_ids() {
        let err = FinitePoset::from_relation(&["a"], &[("a", "z")]).unwrap_err();
        assert_eq!(err, Error::UnknownId("z".into()));
        let err = FinitePoset::from_relation::<&str>(&["a", "a"], &[]).unwrap_err();
        assert_eq!(err, Error::DuplicateId("a".into()));
        let p = abc_chain();
        assert!(p.set_of(&["q"]).is_err());
    }

    #[test]
    fn cap_is_enforced() {
        let err = FinitePoset::from_relation_with_cap::<&str>(&["a", "b", "c"], &[], 2).unwrap_err();
        assert!(matches!(err, Error::CapExceeded { count: 3, cap: 2, .. }));
    }

    #[test]
    fn cones_and_intervals_in_chain() {
        let p = abc_chain();
        let b = p.set_of(&["b"]).unwrap();
        assert_eq!(names(&p, &p.down_set(&b)), ["a", "b"]);
        assert_eq!(names(&p, &p.up_set(&b)), ["b", "c"]);
        assert_eq!(names(&p, &p.interval(0, 2)), ["a", "b", "c"]);
        assert!(p.interval(2, 0).is_clear());
        assert!(p.down_set(&p.empty_set()).is_clear());
        assert_eq!(p.up_set(&p.full_set()), p.full_set());
    }

    #[test]
    fn components() {
        let p = FinitePoset::antichain(4);
        assert_eq!(p.order_components().len(), 4);
        let two = disjoint_union(&[FinitePoset::chain(2), FinitePoset::chain(2)]);
        let comps = two.order_components();
        assert_eq!(comps.len(), 2);
        assert!(comps.blocks.iter().all(|b| b.count_ones(..) == 2));
        assert_eq!(disjoint_union(&[]).len(), 0);
    }

    #[test]
    fn json_round_trip() {
        let p = abc_chain();
        let json = p.to_json();
        assert_eq!(json.le, vec![("a".into(), "b".into()), ("b".into(), "c".into())]);
        assert_eq!(FinitePoset::from_json(&json).unwrap(), p);
    }

    #[test]
    fn isomorphism_basics() {
        let a = FinitePoset::chain(2);
        let b = FinitePoset::from_relation(&["y", "x"], &[("x", "y")]).unwrap();
        let m = find_isomorphism(&a, &b).unwrap();
        assert_eq!(m, vec![1, 0]);
        assert!(is_order_isomorphism(&a, &b, &m));
        assert!(find_isomorphism(&FinitePoset::chain(2), &FinitePoset::antichain(2)).is_none());
    }

    #[test]
    fn covers_of_diamond() {
        let p = FinitePoset::from_relation(
            &["0", "a", "b", "1"],
            &[("0", "a"), ("0", "b"), ("a", "1"), ("b", "1")],
        )
        .unwrap();
        assert_eq!(p.covers(), vec![(0, 1), (0, 2), (1, 3), (2, 3)]);
        assert!(!p.is_chain(&p.full_set()));
    }
}
