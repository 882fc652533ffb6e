//! Finite truncations of the countable connected poset `P` and verifiers for
//! its structural facts.
//!
//! Elements are index paths: the root `p` and `p[i0,...,in]`. The order is
//! generated by five rule families:
//!
//! ```text
//! p < p[i] < p[j]                                   j < i
//! p[i0,i] < p[i0,j] < p[k]                          i < j, k <= i0
//! p[i0,k] < p[i0,i1,i] < p[i0,i1,j]                 j < i, k <= i1
//! p[..,i2r,i] < p[..,i2r,j] < p[..,i(2r-1),k]       i < j, k <= i2r       (r >= 1)
//! p[..,i2r,k] < p[..,i(2r+1),i] < p[..,i(2r+1),j]   j < i, k <= i(2r+1)   (r >= 1)
//! ```
//!
//! `P(n, w)` keeps paths of length at most `n + 1` with indices below `w`,
//! ordered as an induced suborder of the infinite poset.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::poset::{ElemSet, FinitePoset, DEFAULT_ELEMENT_CAP};

/// Names `p` (empty) or an element `p[i0,...,in]`; also used for cut-space points.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndexPath(pub Vec<usize>);

impl IndexPath {
    pub fn root() -> Self {
        IndexPath(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn last(&self) -> Option<usize> {
        self.0.last().copied()
    }

    pub fn first(&self) -> Option<usize> {
        self.0.first().copied()
    }

    pub fn parent(&self) -> Option<IndexPath> {
        if self.0.is_empty() {
            None
        } else {
            Some(IndexPath(self.0[..self.0.len() - 1].to_vec()))
        }
    }

    pub fn child(&self, i: usize) -> IndexPath {
        let mut v = self.0.clone();
        v.push(i);
        IndexPath(v)
    }

    pub fn prefix(&self, len: usize) -> IndexPath {
        IndexPath(self.0[..len].to_vec())
    }

    pub fn is_prefix_of(&self, other: &IndexPath) -> bool {
        other.0.starts_with(&self.0)
    }

    /// `prefix` alone for the root, else `prefix[i0,...,in]`.
    pub fn label(&self, prefix: &str) -> String {
        if self.0.is_empty() {
            prefix.to_string()
        } else {
            let parts: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
            format!("{prefix}[{}]", parts.join(","))
        }
    }

    pub fn parse(s: &str, prefix: &str) -> Result<Self> {
        let bad = || Error::InvalidInput(format!("`{s}` is not a `{prefix}[...]` path"));
        let rest = s.strip_prefix(prefix).ok_or_else(bad)?;
        if rest.is_empty() {
            return Ok(IndexPath::root());
        }
        let inner = rest
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(bad)?;
        inner
            .split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|_| bad()))
            .collect::<Result<Vec<_>>>()
            .map(IndexPath)
    }
}

impl fmt::Display for IndexPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label("p"))
    }
}

/// `1 + Σ_{m=0}^{n} w^{m+1}`, or `None` on overflow.
pub fn p_element_count(depth: usize, width: usize) -> Option<usize> {
    let mut total: usize = 1;
    let mut layer: usize = 1;
    for _ in 0..=depth {
        layer = layer.checked_mul(width)?;
        total = total.checked_add(layer)?;
    }
    Some(total)
}

/// All paths of length at most `depth + 1` with indices below `width`,
/// ordered by length and then lexicographically.
pub fn truncation_paths(depth: usize, width: usize) -> Vec<IndexPath> {
    let mut out = vec![IndexPath::root()];
    let mut layer = vec![IndexPath::root()];
    for _ in 0..=depth {
        let next: Vec<IndexPath> = layer
            .iter()
            .flat_map(|p| (0..width).map(move |i| p.child(i)))
            .collect();
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Strict generating pairs from the five rule families, instantiated on
/// `paths` (which must be closed under parents and lower siblings).
fn rule_pairs(paths: &[IndexPath]) -> Vec<(usize, usize)> {
    let index: HashMap<&IndexPath, usize> = paths.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let at = |p: &IndexPath| index.get(p).copied();
    let mut pairs = Vec::new();
    let mut chain = |a: Option<usize>, b: Option<usize>, c: Option<usize>| {
        if let (Some(a), Some(b), Some(c)) = (a, b, c) {
            pairs.push((a, b));
            pairs.push((b, c));
        }
    };
    // children of each node, as present in `paths`
    let mut kids: Vec<Vec<usize>> = vec![Vec::new(); paths.len()];
    for p in paths {
        if let Some(q) = p.parent().and_then(|parent| at(&parent)) {
            kids[q].push(p.last().unwrap());
        }
    }
    for (sigma, children) in paths.iter().zip(&kids) {
        let len = sigma.len();
        for &i in children {
            for &j in children {
                if len == 0 {
                    // p < p[i] < p[j] for j < i
                    if j < i {
                        chain(at(sigma), at(&sigma.child(i)), at(&sigma.child(j)));
                    }
                } else if len % 2 == 1 {
                    // σ = π·t: σ·i < σ·j < π·k for i < j, k <= t
                    if i < j {
                        let pi = sigma.parent().unwrap();
                        for k in 0..=sigma.last().unwrap() {
                            chain(at(&sigma.child(i)), at(&sigma.child(j)), at(&pi.child(k)));
                        }
                    }
                } else if j < i {
                    // σ = π·t: π·k < σ·i < σ·j for j < i, k <= t
                    let pi = sigma.parent().unwrap();
                    for k in 0..=sigma.last().unwrap() {
                        chain(at(&pi.child(k)), at(&sigma.child(i)), at(&sigma.child(j)));
                    }
                }
            }
        }
    }
    pairs.sort_unstable();
    pairs.dedup();
    pairs
}

/// Generating pairs over `P(depth, width + 1)` together with its paths. One
/// extra sibling index gives every retained element the relations that its
/// infinitely many siblings supply in `P`.
fn widened(depth: usize, width: usize) -> (Vec<IndexPath>, Vec<(usize, usize)>) {
    let paths = truncation_paths(depth, width + 1);
    let pairs = rule_pairs(&paths);
    (paths, pairs)
}

/// The truncation `P(depth, width)`, elements named `p`, `p[0]`, `p[1,0]`, ...
pub fn generate_p(depth: usize, width: usize, cap: usize) -> Result<FinitePoset> {
    if width == 0 {
        return Err(Error::InvalidInput("width must be at least 1".into()));
    }
    let count = p_element_count(depth, width).unwrap_or(usize::MAX);
    if count > cap {
        return Err(Error::CapExceeded {
            what: "P(n, w) element count",
            count,
            cap,
        });
    }
    let wide_count = p_element_count(depth, width + 1).unwrap_or(usize::MAX);
    let (paths, pairs) = widened(depth, width);
    let wide = FinitePoset::from_index_pairs_with_cap(
        paths.iter().map(|p| p.to_string()).collect(),
        pairs,
        wide_count,
    )?;
    let mut keep = FixedBitSet::with_capacity(paths.len());
    for (i, p) in paths.iter().enumerate() {
        if p.indices().iter().all(|&k| k < width) {
            keep.insert(i);
        }
    }
    Ok(wide.induced(&keep))
}

pub fn generate_p_default(depth: usize, width: usize) -> Result<FinitePoset> {
    generate_p(depth, width, DEFAULT_ELEMENT_CAP)
}

/// Paths of every element, plus the inferred `(depth, width)`.
fn shape(p: &FinitePoset) -> Result<(Vec<IndexPath>, usize, usize)> {
    let paths = p
        .names()
        .iter()
        .map(|s| IndexPath::parse(s, "p"))
        .collect::<Result<Vec<_>>>()?;
    let depth = paths.iter().map(IndexPath::len).max().unwrap_or(0).saturating_sub(1);
    let width = paths
        .iter()
        .flat_map(|q| q.indices().iter().copied())
        .max()
        .map_or(0, |m| m + 1);
    Ok((paths, depth, width))
}

/// Layer of a path: 0 for the root and `p[i]`, `len - 1` otherwise.
fn layer(path: &IndexPath) -> usize {
    path.len().saturating_sub(1)
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AxiomReport {
    pub elements: usize,
    pub antisymmetry_violations: Vec<(String, String)>,
    pub transitivity_violations: Vec<(String, String, String)>,
    pub components: usize,
    /// Comparable pairs across layers that skip a layer or point the wrong way.
    pub layer_violations: Vec<(String, String)>,
}

impl AxiomReport {
    pub fn passes(&self) -> bool {
        self.antisymmetry_violations.is_empty()
            && self.transitivity_violations.is_empty()
            && self.layer_violations.is_empty()
            && self.components == 1
    }
}

pub fn verify_poset_axioms(p: &FinitePoset) -> Result<AxiomReport> {
    let (paths, _, _) = shape(p)?;
    let n = p.len();
    let mut report = AxiomReport {
        elements: n,
        components: p.order_components().len(),
        ..Default::default()
    };
    for a in 0..n {
        for b in p.up_row(a).ones() {
            if a != b && p.le(b, a) {
                report
                    .antisymmetry_violations
                    .push((p.name(a).into(), p.name(b).into()));
            }
            for c in p.up_row(b).ones() {
                if !p.le(a, c) {
                    report.transitivity_violations.push((
                        p.name(a).into(),
                        p.name(b).into(),
                        p.name(c).into(),
                    ));
                }
            }
            let (la, lb) = (layer(&paths[a]), layer(&paths[b]));
            if la == lb {
                continue;
            }
            // a < b across layers: layers m, m+1 with the lower layer on top
            // when m is even and underneath when m is odd.
            let m = la.min(lb);
            let ok = la.abs_diff(lb) == 1 && ((m % 2 == 0) == (la > lb));
            if !ok {
                report
                    .layer_violations
                    .push((p.name(a).into(), p.name(b).into()));
            }
        }
    }
    Ok(report)
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ChainReport {
    pub checked: usize,
    /// Elements whose mandated cone is not a chain.
    pub counterexamples: Vec<String>,
}

impl ChainReport {
    pub fn passes(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

/// For a path of length `m + 1`: the up-set is a chain when `m` is even,
/// the down-set when `m` is odd.
pub fn verify_chain_facts(p: &FinitePoset) -> Result<ChainReport> {
    let (paths, _, _) = shape(p)?;
    let mut report = ChainReport::default();
    for (y, path) in paths.iter().enumerate() {
        if path.is_root() {
            continue;
        }
        report.checked += 1;
        let cone = if (path.len() - 1) % 2 == 0 {
            p.up_row(y)
        } else {
            p.down_row(y)
        };
        if !p.is_chain(cone) {
            report.counterexamples.push(p.name(y).into());
        }
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeMismatch {
    pub element: String,
    pub expected: Vec<String>,
    pub actual: Vec<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConeReport {
    pub checked: usize,
    /// Against `[y) ∩ layer-0 = {p[k] | k <= i0(y)}` for every non-root `y`.
    pub closed_form_mismatches: Vec<ConeMismatch>,
    /// Against the form the rules actually give: `{p[k] | k <= i0(y)}` for
    /// paths of length 1 or 2 and `∅` for longer paths.
    pub by_length_mismatches: Vec<ConeMismatch>,
    /// `[p) ∩ layer-0` must be all of layer 0.
    pub root_ok: bool,
    /// Layer-restricted cones that differ from a search over generating pairs.
    pub layered_cone_mismatches: Vec<(String, usize)>,
    /// Largest `|[y) ∩ layer-0|` seen; finite by construction.
    pub max_layer0_cone: usize,
}

impl ConeReport {
    pub fn passes(&self) -> bool {
        self.closed_form_mismatches.is_empty()
            && self.root_ok
            && self.layered_cone_mismatches.is_empty()
    }

    /// As [`passes`](Self::passes) with the length-aware closed form.
    pub fn passes_by_length(&self) -> bool {
        self.by_length_mismatches.is_empty()
            && self.root_ok
            && self.layered_cone_mismatches.is_empty()
    }
}

pub fn verify_cone_facts(p: &FinitePoset) -> Result<ConeReport> {
    let (paths, depth, width) = shape(p)?;
    let n = p.len();
    let layer0: Vec<usize> = (0..n).filter(|&i| paths[i].len() == 1).collect();
    let mut layer0_set = FixedBitSet::with_capacity(n);
    for &i in &layer0 {
        layer0_set.insert(i);
    }
    let by_first = |cap: usize| -> ElemSet {
        let mut s = FixedBitSet::with_capacity(n);
        for &i in &layer0 {
            if paths[i].first().unwrap() <= cap {
                s.insert(i);
            }
        }
        s
    };
    let mut report = ConeReport::default();
    let root = paths.iter().position(IndexPath::is_root);
    report.root_ok = match root {
        Some(r) => {
            let mut cone = p.up_row(r).clone();
            cone.intersect_with(&layer0_set);
            cone == layer0_set
        }
        None => false,
    };
    for y in 0..n {
        if paths[y].is_root() {
            continue;
        }
        report.checked += 1;
        let mut actual = p.up_row(y).clone();
        actual.intersect_with(&layer0_set);
        report.max_layer0_cone = report.max_layer0_cone.max(actual.count_ones(..));
        let i0 = paths[y].first().unwrap();
        let literal = by_first(i0);
        let by_length = if paths[y].len() <= 2 {
            literal.clone()
        } else {
            FixedBitSet::with_capacity(n)
        };
        let mismatch = |expected: &ElemSet| ConeMismatch {
            element: p.name(y).into(),
            expected: p.names_of(expected),
            actual: p.names_of(&actual),
        };
        if literal != actual {
            report.closed_form_mismatches.push(mismatch(&literal));
        }
        if by_length != actual {
            report.by_length_mismatches.push(mismatch(&by_length));
        }
    }

    // Reachability over the generating pairs of the widened truncation,
    // compared with the closed relation layer by layer.
    let (wide_paths, pairs) = widened(depth, width);
    let wide_index: HashMap<&IndexPath, usize> =
        wide_paths.iter().enumerate().map(|(i, q)| (q, i)).collect();
    let m = wide_paths.len();
    let mut succ = vec![Vec::new(); m];
    let mut pred = vec![Vec::new(); m];
    for &(a, b) in &pairs {
        succ[a].push(b);
        pred[b].push(a);
    }
    let position: HashMap<&IndexPath, usize> = paths.iter().enumerate().map(|(i, q)| (q, i)).collect();
    for y in 0..n {
        let Some(&wy) = wide_index.get(&paths[y]) else {
            report.layered_cone_mismatches.push((p.name(y).into(), 0));
            continue;
        };
        let up = reach(wy, &succ);
        let down = reach(wy, &pred);
        for lay in 0..=depth {
            let in_layer = |q: &IndexPath| q.len() <= lay + 1;
            for (graph_cone, row) in [(&up, p.up_row(y)), (&down, p.down_row(y))] {
                let mut expected = FixedBitSet::with_capacity(n);
                for w in graph_cone.ones() {
                    if let Some(&i) = position.get(&wide_paths[w]) {
                        if in_layer(&paths[i]) {
                            expected.insert(i);
                        }
                    }
                }
                let mut actual = row.clone();
                actual.intersect_with(&FixedBitSet::from_iter(
                    (0..n).filter(|&i| in_layer(&paths[i])),
                ));
                actual.grow(n);
                if expected != actual {
                    report.layered_cone_mismatches.push((p.name(y).into(), lay));
                }
            }
        }
    }
    Ok(report)
}

fn reach(start: usize, adj: &[Vec<usize>]) -> FixedBitSet {
    let mut seen = FixedBitSet::with_capacity(adj.len());
    seen.insert(start);
    let mut queue = VecDeque::from([start]);
    while let Some(a) = queue.pop_front() {
        for &b in &adj[a] {
            if !seen.put(b) {
                queue.push_back(b);
            }
        }
    }
    seen
}
