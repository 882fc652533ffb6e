//! Finite topological spaces over poset universes.
//!
//! A finite topology is determined by the minimal neighbourhood `N(z)` of
//! each point (the intersection of all subbase members containing `z`): a set
//! is open iff it contains `N(z)` for each of its points. Clopen sets are the
//! unions of the connected pieces of the relation `w ∈ N(z)`.

use std::collections::HashSet;

use fixedbitset::FixedBitSet;
use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poset::{disjoint_union, ElemSet, FinitePoset};

/// Largest universe whose open sets are enumerated in full by default.
pub const DEFAULT_OPEN_CAP: usize = 16;

/// Largest subcover size tried by the exact minimal-cover search.
pub const EXACT_COVER_LIMIT: usize = 6;

/// Wire format: `{"universe": [...], "subbase": [[...], ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpaceJson {
    pub universe: Vec<String>,
    #[serde(default)]
    pub subbase: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteSpace {
    universe: Vec<String>,
    subbase: Vec<ElemSet>,
    neighbourhoods: Vec<ElemSet>,
    opens: Option<Vec<ElemSet>>,
}

impl FiniteSpace {
    pub fn new(universe: Vec<String>, subbase: Vec<ElemSet>) -> Result<Self> {
        let n = universe.len();
        let mut seen = HashSet::with_capacity(n);
        for name in &universe {
            if !seen.insert(name.as_str()) {
                return Err(Error::DuplicateId(name.clone()));
            }
        }
        let mut sets = Vec::with_capacity(subbase.len());
        for (i, mut s) in subbase.into_iter().enumerate() {
            if s.ones().any(|z| z >= n) {
                return Err(Error::SubbaseOutOfRange(i));
            }
            s.grow(n);
            sets.push(s);
        }
        let neighbourhoods = (0..n)
            .map(|z| {
                let mut nb = full(n);
                for s in sets.iter().filter(|s| s.contains(z)) {
                    nb.intersect_with(s);
                }
                nb
            })
            .collect();
        Ok(FiniteSpace {
            universe,
            subbase: sets,
            neighbourhoods,
            opens: None,
        })
    }

    pub fn discrete(universe: Vec<String>) -> Self {
        let n = universe.len();
        let singletons = (0..n)
            .map(|z| {
                let mut s = FixedBitSet::with_capacity(n);
                s.insert(z);
                s
            })
            .collect();
        Self::new(universe, singletons).expect("singletons lie in the universe")
    }

    pub fn indiscrete(universe: Vec<String>) -> Self {
        Self::new(universe, Vec::new()).expect("empty subbase")
    }

    pub fn from_json(json: &SpaceJson) -> Result<Self> {
        let n = json.universe.len();
        let lookup: std::collections::HashMap<&str, usize> = json
            .universe
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_str(), i))
            .collect();
        let mut subbase = Vec::with_capacity(json.subbase.len());
        for member in &json.subbase {
            let mut s = FixedBitSet::with_capacity(n);
            for id in member {
                let &i = lookup
                    .get(id.as_str())
                    .ok_or_else(|| Error::UnknownId(id.clone()))?;
                s.insert(i);
            }
            subbase.push(s);
        }
        Self::new(json.universe.clone(), subbase)
    }

    pub fn to_json(&self) -> SpaceJson {
        SpaceJson {
            universe: self.universe.clone(),
            subbase: self.subbase.iter().map(|s| self.names_of(s)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.universe.len()
    }

    pub fn is_empty(&self) -> bool {
        self.universe.is_empty()
    }

    pub fn universe(&self) -> &[String] {
        &self.universe
    }

    pub fn subbase(&self) -> &[ElemSet] {
        &self.subbase
    }

    pub fn names_of(&self, set: &ElemSet) -> Vec<String> {
        set.ones().map(|i| self.universe[i].clone()).collect()
    }

    pub fn full_set(&self) -> ElemSet {
        full(self.len())
    }

    /// Smallest open set containing `z`.
    pub fn neighbourhood(&self, z: usize) -> &ElemSet {
        &self.neighbourhoods[z]
    }

    pub fn is_open(&self, set: &ElemSet) -> bool {
        set.ones().all(|z| self.neighbourhoods[z].is_subset(set))
    }

    pub fn is_closed(&self, set: &ElemSet) -> bool {
        self.is_open(&complement(set, self.len()))
    }

    pub fn is_clopen(&self, set: &ElemSet) -> bool {
        self.is_open(set) && self.is_closed(set)
    }

    /// Materialized open sets, if [`generate_topology`] produced this space.
    pub fn materialized_opens(&self) -> Option<&[ElemSet]> {
        self.opens.as_deref()
    }

    /// Every open set, ordered by size and then by members.
    pub fn opens(&self, cap: usize) -> Result<Vec<ElemSet>> {
        if let Some(opens) = &self.opens {
            return Ok(opens.clone());
        }
        let n = self.len();
        if n > cap {
            return Err(Error::CapExceeded {
                what: "universe size for open-set enumeration",
                count: n,
                cap,
            });
        }
        // Deciding z in forces N(z) in; deciding z out forces out every w
        // with z ∈ N(w). Both sides stay closed, so no branch dead-ends.
        let mut reverse = vec![FixedBitSet::with_capacity(n); n];
        for w in 0..n {
            for z in self.neighbourhoods[w].ones() {
                reverse[z].insert(w);
            }
        }
        let mut out = Vec::new();
        let mut stack = vec![(FixedBitSet::with_capacity(n), FixedBitSet::with_capacity(n))];
        while let Some((inside, outside)) = stack.pop() {
            let next = (0..n).find(|&z| !inside.contains(z) && !outside.contains(z));
            match next {
                None => out.push(inside),
                Some(z) => {
                    let mut with = inside.clone();
                    with.union_with(&self.neighbourhoods[z]);
                    let mut without = outside.clone();
                    without.union_with(&reverse[z]);
                    stack.push((inside, without));
                    stack.push((with, outside));
                }
            }
        }
        sort_sets(&mut out);
        Ok(out)
    }

    /// The pieces whose unions are exactly the clopen sets.
    pub fn clopen_atoms(&self) -> Vec<ElemSet> {
        let n = self.len();
        let mut uf = UnionFind::<usize>::new(n);
        for z in 0..n {
            for w in self.neighbourhoods[z].ones() {
                uf.union(z, w);
            }
        }
        let labels = uf.into_labeling();
        let mut atoms: Vec<ElemSet> = Vec::new();
        let mut label_atom = std::collections::HashMap::new();
        for (z, l) in labels.into_iter().enumerate() {
            let a = *label_atom.entry(l).or_insert_with(|| {
                atoms.push(FixedBitSet::with_capacity(n));
                atoms.len() - 1
            });
            atoms[a].insert(z);
        }
        atoms
    }
}

fn full(n: usize) -> ElemSet {
    let mut s = FixedBitSet::with_capacity(n);
    s.insert_range(..);
    s
}

fn complement(set: &ElemSet, n: usize) -> ElemSet {
    let mut c = full(n);
    c.difference_with(set);
    c
}

fn sort_sets(sets: &mut [ElemSet]) {
    sets.sort_by(|a, b| {
        a.count_ones(..)
            .cmp(&b.count_ones(..))
            .then_with(|| a.ones().cmp(b.ones()))
    });
}

/// Materializes the topology generated by `subbase` on `universe`.
pub fn generate_topology(
    universe: Vec<String>,
    subbase: Vec<ElemSet>,
    cap: usize,
) -> Result<FiniteSpace> {
    let mut space = FiniteSpace::new(universe, subbase)?;
    let opens = space.opens(cap)?;
    space.opens = Some(opens);
    Ok(space)
}

/// `{X∖(x] | x ∈ X}` followed by `{X∖[x) | x ∈ X}`, first occurrences kept.
pub fn interval_subbase(p: &FinitePoset) -> Vec<ElemSet> {
    let n = p.len();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let lower = (0..n).map(|x| complement(p.down_row(x), n));
    let upper = (0..n).map(|x| complement(p.up_row(x), n));
    for s in lower.chain(upper) {
        if seen.insert(s.clone()) {
            out.push(s);
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Subbasic cover certificates

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CoverKind {
    CrossComponent,
    WithinComponent,
    NotACover,
}

/// `Down` names `X∖(g]`, `Up` names `X∖[g)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarity {
    Down,
    Up,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Generator {
    pub element: usize,
    pub polarity: Polarity,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverCertificate {
    pub kind: CoverKind,
    /// Chosen subcover; empty for `NotACover`.
    pub witness: Vec<Generator>,
    /// Points missed by the whole family; empty unless `NotACover`.
    pub uncovered: Vec<usize>,
    /// Whether the witness is known to have least possible size.
    pub minimal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorJson {
    pub polarity: Polarity,
    pub generator: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateJson {
    pub kind: CoverKind,
    pub witness: Vec<GeneratorJson>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub uncovered: Vec<String>,
    pub minimal: bool,
}

impl CoverCertificate {
    pub fn to_json(&self, p: &FinitePoset) -> CertificateJson {
        CertificateJson {
            kind: self.kind,
            witness: self
                .witness
                .iter()
                .map(|g| GeneratorJson {
                    polarity: g.polarity,
                    generator: p.name(g.element).to_string(),
                })
                .collect(),
            uncovered: self.uncovered.iter().map(|&i| p.name(i).to_string()).collect(),
            minimal: self.minimal,
        }
    }
}

/// Set operations the certifier needs; `u64` serves universes of at most 64
/// points without allocation.
trait Bits: Clone + PartialEq {
    fn zero(n: usize) -> Self;
    fn insert(&mut self, i: usize);
    fn has(&self, i: usize) -> bool;
    fn or_with(&mut self, other: &Self);
    fn without(&self, other: &Self) -> Self;
    fn first(&self) -> Option<usize>;
    fn elements(&self) -> impl Iterator<Item = usize> + '_;
}

impl Bits for u64 {
    fn zero(_: usize) -> Self {
        0
    }
    fn insert(&mut self, i: usize) {
        *self |= 1 << i;
    }
    fn has(&self, i: usize) -> bool {
        self >> i & 1 == 1
    }
    fn or_with(&mut self, other: &Self) {
        *self |= other;
    }
    fn without(&self, other: &Self) -> Self {
        self & !other
    }
    fn first(&self) -> Option<usize> {
        (*self != 0).then(|| self.trailing_zeros() as usize)
    }
    fn elements(&self) -> impl Iterator<Item = usize> + '_ {
        let mut rest = *self;
        std::iter::from_fn(move || {
            let i = rest.first()?;
            rest &= rest - 1;
            Some(i)
        })
    }
}

impl Bits for FixedBitSet {
    fn zero(n: usize) -> Self {
        FixedBitSet::with_capacity(n)
    }
    fn insert(&mut self, i: usize) {
        FixedBitSet::insert(self, i);
    }
    fn has(&self, i: usize) -> bool {
        self.contains(i)
    }
    fn or_with(&mut self, other: &Self) {
        self.union_with(other);
    }
    fn without(&self, other: &Self) -> Self {
        let mut s = self.clone();
        s.difference_with(other);
        s
    }
    fn first(&self) -> Option<usize> {
        self.minimum()
    }
    fn elements(&self) -> impl Iterator<Item = usize> + '_ {
        self.ones()
    }
}

#[derive(Clone, Debug)]
struct Tables<S> {
    full: S,
    not_down: Vec<S>,
    not_up: Vec<S>,
}

impl<S: Bits> Tables<S> {
    fn new(p: &FinitePoset) -> Self {
        let n = p.len();
        let mut full = S::zero(n);
        for i in 0..n {
            full.insert(i);
        }
        let convert = |row: &ElemSet| {
            let mut s = S::zero(n);
            for i in 0..n {
                if !row.contains(i) {
                    s.insert(i);
                }
            }
            s
        };
        Tables {
            not_down: (0..n).map(|x| convert(p.down_row(x))).collect(),
            not_up: (0..n).map(|x| convert(p.up_row(x))).collect(),
            full,
        }
    }

    fn set_of(&self, g: Generator) -> &S {
        match g.polarity {
            Polarity::Down => &self.not_down[g.element],
            Polarity::Up => &self.not_up[g.element],
        }
    }

    fn covers(&self, family: &[Generator]) -> bool {
        let mut acc = S::zero(0);
        for &g in family {
            acc.or_with(self.set_of(g));
        }
        self.full.without(&acc).first().is_none()
    }
}

#[derive(Clone, Debug)]
enum AnyTables {
    Small(Tables<u64>),
    Large(Tables<FixedBitSet>),
}

/// Certifies families `{X∖(a] | a ∈ A} ∪ {X∖[b) | b ∈ B}` over one poset.
#[derive(Clone, Debug)]
pub struct CoverCertifier<'a> {
    poset: &'a FinitePoset,
    block_of: Vec<usize>,
    tables: AnyTables,
}

impl<'a> CoverCertifier<'a> {
    pub fn new(poset: &'a FinitePoset) -> Self {
        let tables = if poset.len() <= 64 {
            AnyTables::Small(Tables::new(poset))
        } else {
            AnyTables::Large(Tables::new(poset))
        };
        CoverCertifier {
            poset,
            block_of: poset.order_components().block_of,
            tables,
        }
    }

    pub fn poset(&self) -> &FinitePoset {
        self.poset
    }

    pub fn certify(&self, a: &ElemSet, b: &ElemSet) -> CoverCertificate {
        match &self.tables {
            AnyTables::Small(t) => {
                let to_mask = |s: &ElemSet| s.ones().fold(0u64, |m, i| m | 1 << i);
                certify_with(t, &self.block_of, &to_mask(a), &to_mask(b))
            }
            AnyTables::Large(t) => {
                let n = self.poset.len();
                let mut a = a.clone();
                let mut b = b.clone();
                a.grow(n);
                b.grow(n);
                certify_with(t, &self.block_of, &a, &b)
            }
        }
    }

    /// Bitmask entry point; bit `i` stands for element `i`. Requires at most
    /// 64 elements.
    pub fn certify_masks(&self, a: u64, b: u64) -> CoverCertificate {
        match &self.tables {
            AnyTables::Small(t) => certify_with(t, &self.block_of, &a, &b),
            AnyTables::Large(_) => panic!("certify_masks needs a poset of at most 64 elements"),
        }
    }

    /// Union of the sets named by `family`.
    pub fn union_of(&self, family: &[Generator]) -> ElemSet {
        let n = self.poset.len();
        let mut out = FixedBitSet::with_capacity(n);
        for g in family {
            let row = match g.polarity {
                Polarity::Down => self.poset.down_row(g.element),
                Polarity::Up => self.poset.up_row(g.element),
            };
            out.union_with(&complement(row, n));
        }
        out
    }
}

fn certify_with<S: Bits>(t: &Tables<S>, block_of: &[usize], a: &S, b: &S) -> CoverCertificate {
    let mut covered = S::zero(0);
    for i in a.elements() {
        covered.or_with(&t.not_down[i]);
    }
    for i in b.elements() {
        covered.or_with(&t.not_up[i]);
    }
    let missing = t.full.without(&covered);
    if missing.first().is_some() {
        return CoverCertificate {
            kind: CoverKind::NotACover,
            witness: Vec::new(),
            uncovered: missing.elements().collect(),
            minimal: false,
        };
    }

    let mut both = a.clone();
    both.or_with(b);
    let generator = |e: usize| Generator {
        element: e,
        polarity: if a.has(e) { Polarity::Down } else { Polarity::Up },
    };
    if let Some(w1) = both.first() {
        if let Some(w2) = both.elements().find(|&e| block_of[e] != block_of[w1]) {
            // A single X∖(g] or X∖[g) always misses g, so two is least.
            return CoverCertificate {
                kind: CoverKind::CrossComponent,
                witness: vec![generator(w1), generator(w2)],
                uncovered: Vec::new(),
                minimal: true,
            };
        }
    }

    let mut family = Vec::new();
    for e in both.elements() {
        if a.has(e) {
            family.push(Generator { element: e, polarity: Polarity::Down });
        }
        if b.has(e) {
            family.push(Generator { element: e, polarity: Polarity::Up });
        }
    }
    let (witness, minimal) = smallest_subcover(t, &family);
    CoverCertificate {
        kind: CoverKind::WithinComponent,
        witness,
        uncovered: Vec::new(),
        minimal,
    }
}

fn smallest_subcover<S: Bits>(t: &Tables<S>, family: &[Generator]) -> (Vec<Generator>, bool) {
    let limit = family.len().min(EXACT_COVER_LIMIT);
    let mut chosen = Vec::with_capacity(limit);
    for size in 0..=limit {
        if choose(t, family, 0, size, &mut chosen) {
            return (chosen, true);
        }
    }
    // Greedy fallback: take the member adding most new points, earliest on ties.
    let mut acc = S::zero(0);
    let mut picked = Vec::new();
    while t.full.without(&acc).first().is_some() {
        let gain = |g: &Generator| {
            let mut next = acc.clone();
            next.or_with(t.set_of(*g));
            next.without(&acc).elements().count()
        };
        let best = family
            .iter()
            .enumerate()
            .max_by(|(i, g), (j, h)| gain(g).cmp(&gain(h)).then(j.cmp(i)))
            .map(|(_, g)| *g)
            .expect("family covers, so it is non-empty");
        acc.or_with(t.set_of(best));
        picked.push(best);
    }
    picked.sort();
    (picked, false)
}

fn choose<S: Bits>(
    t: &Tables<S>,
    family: &[Generator],
    start: usize,
    remaining: usize,
    chosen: &mut Vec<Generator>,
) -> bool {
    if remaining == 0 {
        return t.covers(chosen);
    }
    for i in start..=family.len().saturating_sub(remaining) {
        if i >= family.len() {
            break;
        }
        chosen.push(family[i]);
        if choose(t, family, i + 1, remaining - 1, chosen) {
            return true;
        }
        chosen.pop();
    }
    false
}

/// One-shot form of [`CoverCertifier::certify`].
pub fn certify_subbasic_cover(p: &FinitePoset, a: &ElemSet, b: &ElemSet) -> CoverCertificate {
    CoverCertifier::new(p).certify(a, b)
}

// ---------------------------------------------------------------------------
// Priestley separation

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PriestleyReport {
    /// Finite spaces are compact; recorded for completeness.
    pub compact: bool,
    /// `M(x)`: least clopen decreasing set containing `x`.
    pub minimal_sets: Vec<ElemSet>,
    pub checked_pairs: usize,
    /// Pairs `(x, y)` with `x ≱ y` and `y ∈ M(x)`.
    pub failures: Vec<(usize, usize)>,
    /// Pairs `(x, y)` with `x ≱ y` separated by `M(x)`.
    pub separated: Vec<(usize, usize)>,
}

impl PriestleyReport {
    pub fn passes(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Least clopen decreasing set containing each point.
///
/// Clopen decreasing sets are closed under intersection, so the least one
/// is reached by alternately closing downward and filling clopen atoms.
pub fn minimal_clopen_decreasing(p: &FinitePoset, t: &FiniteSpace) -> Vec<ElemSet> {
    let atoms = t.clopen_atoms();
    let mut atom_of = vec![0; t.len()];
    for (i, a) in atoms.iter().enumerate() {
        for z in a.ones() {
            atom_of[z] = i;
        }
    }
    (0..p.len())
        .map(|x| {
            let mut set = atoms[atom_of[x]].clone();
            loop {
                let mut next = p.down_set(&set);
                for z in next.clone().ones() {
                    next.union_with(&atoms[atom_of[z]]);
                }
                if next == set {
                    break set;
                }
                set = next;
            }
        })
        .collect()
}

pub fn check_priestley(p: &FinitePoset, t: &FiniteSpace) -> Result<PriestleyReport> {
    if p.names() != t.universe() {
        return Err(Error::UniverseMismatch);
    }
    let minimal_sets = minimal_clopen_decreasing(p, t);
    let mut report = PriestleyReport {
        compact: true,
        minimal_sets,
        checked_pairs: 0,
        failures: Vec::new(),
        separated: Vec::new(),
    };
    for x in 0..p.len() {
        for y in 0..p.len() {
            if p.le(y, x) {
                continue;
            }
            report.checked_pairs += 1;
            if report.minimal_sets[x].contains(y) {
                report.failures.push((x, y));
            } else {
                report.separated.push((x, y));
            }
        }
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// Union of Priestley spaces

/// Subbase for the disjoint union, built around point `x` of part `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnionSubbase {
    pub poset: FinitePoset,
    /// First element of each part inside the union.
    pub offsets: Vec<usize>,
    pub part: usize,
    pub point: usize,
    /// Open sets of every part other than `k`.
    pub s1: Vec<ElemSet>,
    /// Open sets of part `k` missing `x`.
    pub s2: Vec<ElemSet>,
    /// `V ∪ ⋃{X_l | l ∉ {k, k'}}` for open `V ∋ x` of part `k` and each `k' ≠ k`.
    pub s3: Vec<ElemSet>,
}

impl UnionSubbase {
    pub fn subbase(&self) -> Vec<ElemSet> {
        let mut seen = HashSet::new();
        self.s1
            .iter()
            .chain(&self.s2)
            .chain(&self.s3)
            .filter(|s| seen.insert((*s).clone()))
            .cloned()
            .collect()
    }

    pub fn space(&self) -> FiniteSpace {
        FiniteSpace::new(self.poset.names().to_vec(), self.subbase())
            .expect("subbase lies in the union")
    }
}

/// Builds the union subbase. Each part must be a Priestley space; `cap`
/// bounds the universe size of each part whose opens are enumerated.
pub fn union_subbase(
    parts: &[(FinitePoset, FiniteSpace)],
    k: usize,
    x: usize,
    cap: usize,
) -> Result<UnionSubbase> {
    if parts.len() < 2 {
        return Err(Error::TooFewParts(parts.len()));
    }
    if k >= parts.len() {
        return Err(Error::PartOutOfRange(k));
    }
    if x >= parts[k].0.len() {
        return Err(Error::InvalidInput(format!(
            "point index {x} out of range for part {k}"
        )));
    }
    let mut opens = Vec::with_capacity(parts.len());
    for (i, (p, t)) in parts.iter().enumerate() {
        if !check_priestley(p, t)?.passes() {
            return Err(Error::NotPriestley(i));
        }
        opens.push(t.opens(cap)?);
    }
    let posets: Vec<FinitePoset> = parts.iter().map(|(p, _)| p.clone()).collect();
    let poset = disjoint_union(&posets);
    let n = poset.len();
    let mut offsets = Vec::with_capacity(parts.len());
    let mut acc = 0;
    for p in &posets {
        offsets.push(acc);
        acc += p.len();
    }
    let embed = |l: usize, set: &ElemSet| {
        let mut s = FixedBitSet::with_capacity(n);
        for z in set.ones() {
            s.insert(offsets[l] + z);
        }
        s
    };
    let whole = |l: usize| {
        let mut s = FixedBitSet::with_capacity(n);
        s.insert_range(offsets[l]..offsets[l] + posets[l].len());
        s
    };

    let mut s1 = Vec::new();
    for (l, family) in opens.iter().enumerate() {
        if l != k {
            s1.extend(family.iter().map(|u| embed(l, u)));
        }
    }
    let s2 = opens[k]
        .iter()
        .filter(|u| !u.contains(x))
        .map(|u| embed(k, u))
        .collect();
    let mut s3 = Vec::new();
    for v in opens[k].iter().filter(|u| u.contains(x)) {
        for other in (0..parts.len()).filter(|&l| l != k) {
            let mut s = embed(k, v);
            for l in (0..parts.len()).filter(|&l| l != k && l != other) {
                s.union_with(&whole(l));
            }
            s3.push(s);
        }
    }
    Ok(UnionSubbase {
        poset,
        offsets,
        part: k,
        point: x,
        s1,
        s2,
        s3,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    fn set(n: usize, members: &[usize]) -> ElemSet {
        let mut s = FixedBitSet::with_capacity(n);
        for &i in members {
            s.insert(i);
        }
        s
    }

    fn members(sets: &[ElemSet]) -> Vec<Vec<usize>> {
        sets.iter().map(|s| s.ones().collect()).collect()
    }

    /// Oracle: every subset that is a union of finite intersections of the subbase.
    fn brute_force_opens(n: usize, subbase: &[ElemSet]) -> Vec<Vec<usize>> {
        let mut basics = vec![full(n)];
        for mask in 1u32..(1 << subbase.len()) {
            let mut b = full(n);
            for (i, s) in subbase.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    b.intersect_with(s);
                }
            }
            basics.push(b);
        }
        let mut out = Vec::new();
        for mask in 0u32..(1 << n) {
            let u: ElemSet = set(n, &(0..n).filter(|i| mask >> i & 1 == 1).collect::<Vec<_>>());
            let mut union = FixedBitSet::with_capacity(n);
            for b in basics.iter().filter(|b| b.is_subset(&u)) {
                union.union_with(b);
            }
            if union == u {
                out.push(u);
            }
        }
        sort_sets(&mut out);
        members(&out)
    }

    /// Oracle: intersection of every clopen decreasing subset containing x.
    fn brute_force_minimal(p: &FinitePoset, t: &FiniteSpace, x: usize) -> ElemSet {
        let n = p.len();
        let mut acc = full(n);
        for mask in 0u32..(1 << n) {
            let u = set(n, &(0..n).filter(|i| mask >> i & 1 == 1).collect::<Vec<_>>());
            if u.contains(x) && t.is_clopen(&u) && p.is_decreasing(&u) {
                acc.intersect_with(&u);
            }
        }
        acc
    }

    #[test]
    fn interval_subbase_examples() {
        let chain = FinitePoset::chain(2);
        assert_eq!(members(&interval_subbase(&chain)), vec![vec![1], vec![], vec![0]]);
        assert_eq!(members(&interval_subbase(&FinitePoset::chain(1))), vec![Vec::<usize>::new()]);
        let anti = FinitePoset::antichain(2);
        assert_eq!(members(&interval_subbase(&anti)), vec![vec![1], vec![0]]);
    }

    #[test]
    fn generated_topologies() {
        let discrete = generate_topology(names(&["a", "b"]), vec![set(2, &[0]), set(2, &[1])], 16)
            .unwrap();
        assert_eq!(discrete.materialized_opens().unwrap().len(), 4);
        let indiscrete = generate_topology(names(&["a", "b"]), vec![], 16).unwrap();
        assert_eq!(members(indiscrete.materialized_opens().unwrap()), vec![vec![], vec![0, 1]]);
        let sb = vec![set(3, &[0, 1]), set(3, &[1, 2])];
        let t = generate_topology(names(&["a", "b", "c"]), sb.clone(), 16).unwrap();
        let expected = vec![vec![], vec![1], vec![0, 1], vec![1, 2], vec![0, 1, 2]];
        assert_eq!(members(t.materialized_opens().unwrap()), expected);
        assert_eq!(brute_force_opens(3, &sb), expected);
    }

    #[test]
    fn open_enumeration_matches_oracle() {
        let n = 5;
        let sb = vec![set(n, &[0, 1, 2]), set(n, &[2, 3]), set(n, &[1, 2, 3, 4]), set(n, &[4])];
        let t = FiniteSpace::new((0..n).map(|i| i.to_string()).collect(), sb.clone()).unwrap();
        assert_eq!(members(&t.opens(16).unwrap()), brute_force_opens(n, &sb));
    }

    #[test]
    fn open_cap() {
        let t = FiniteSpace::discrete((0..17).map(|i| i.to_string()).collect());
        assert!(matches!(t.opens(16), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn subbase_out_of_range() {
        let err = FiniteSpace::new(names(&["a"]), vec![set(3, &[2])]).unwrap_err();
        assert_eq!(err, Error::SubbaseOutOfRange(0));
    }

    #[test]
    fn cover_examples() {
        let two_chains =
            FinitePoset::from_relation(&["a0", "a1", "b0", "b1"], &[("a0", "a1"), ("b0", "b1")])
                .unwrap();
        let c = certify_subbasic_cover(&two_chains, &set(4, &[1, 3]), &set(4, &[]));
        assert_eq!(c.kind, CoverKind::CrossComponent);
        let down = |e| Generator { element: e, polarity: Polarity::Down };
        assert_eq!(c.witness, vec![down(1), down(3)]);

        let chain = FinitePoset::chain(2);
        let c = certify_subbasic_cover(&chain, &set(2, &[1]), &set(2, &[]));
        assert_eq!(c.kind, CoverKind::NotACover);
        assert!(c.uncovered.contains(&1));

        let anti = FinitePoset::antichain(2);
        let c = certify_subbasic_cover(&anti, &set(2, &[0, 1]), &set(2, &[]));
        assert_eq!(c.witness, vec![down(0), down(1)]);
        let json = serde_json::to_value(c.to_json(&anti)).unwrap();
        assert_eq!(json["kind"], "cross-component");
        assert_eq!(json["witness"][0]["polarity"], "down");
    }

    #[test]
    fn within_component_witness_is_minimal() {
        // diamond 0 < a, b < 1
        let p = FinitePoset::from_relation(
            &["0", "a", "b", "1"],
            &[("0", "a"), ("0", "b"), ("a", "1"), ("b", "1")],
        )
        .unwrap();
        let cert = CoverCertifier::new(&p);
        // X∖(a] ∪ X∖(b] = {b,1} ∪ {a,1}, missing 0; adding X∖[1) covers.
        let c = cert.certify(&set(4, &[1, 2]), &set(4, &[3]));
        assert_eq!(c.kind, CoverKind::WithinComponent);
        assert!(c.minimal);
        assert_eq!(c.witness.len(), 2);
        assert_eq!(cert.union_of(&c.witness), full(4));
    }

    #[test]
    fn small_and_large_paths_agree() {
        let p = FinitePoset::from_relation(
            &["a", "b", "c", "d", "e"],
            &[("a", "b"), ("b", "c"), ("d", "e")],
        )
        .unwrap();
        let small = CoverCertifier::new(&p);
        let large = CoverCertifier {
            poset: &p,
            block_of: p.order_components().block_of,
            tables: AnyTables::Large(Tables::new(&p)),
        };
        for a in 0u64..32 {
            for b in 0u64..32 {
                let sa = set(5, &(0..5).filter(|i| a >> i & 1 == 1).collect::<Vec<_>>());
                let sb = set(5, &(0..5).filter(|i| b >> i & 1 == 1).collect::<Vec<_>>());
                assert_eq!(small.certify_masks(a, b), large.certify(&sa, &sb));
            }
        }
    }

    #[test]
    fn priestley_examples() {
        let chain = FinitePoset::chain(2);
        let r = check_priestley(&chain, &FiniteSpace::discrete(chain.names().to_vec())).unwrap();
        assert!(r.passes());
        let r = check_priestley(&chain, &FiniteSpace::indiscrete(chain.names().to_vec())).unwrap();
        assert_eq!(r.failures, vec![(0, 1)]);
        let anti = FinitePoset::from_relation::<&str>(&["a", "b"], &[]).unwrap();
        let t = FiniteSpace::new(names(&["a", "b"]), vec![set(2, &[0])]).unwrap();
        let r = check_priestley(&anti, &t).unwrap();
        assert_eq!(r.failures, vec![(0, 1), (1, 0)]);
        assert_eq!(
            check_priestley(&anti, &FiniteSpace::discrete(names(&["a", "c"]))),
            Err(Error::UniverseMismatch)
        );
    }

    #[test]
    fn minimal_sets_match_oracle() {
        let p = FinitePoset::from_relation(
            &["a", "b", "c", "d"],
            &[("a", "b"), ("c", "d"), ("a", "d")],
        )
        .unwrap();
        let spaces = [
            FiniteSpace::discrete(p.names().to_vec()),
            FiniteSpace::new(p.names().to_vec(), vec![set(4, &[0, 1]), set(4, &[2, 3])]).unwrap(),
            FiniteSpace::new(p.names().to_vec(), vec![set(4, &[1]), set(4, &[0, 1, 2])]).unwrap(),
        ];
        for t in &spaces {
            let ms = minimal_clopen_decreasing(&p, t);
            for x in 0..4 {
                assert_eq!(ms[x], brute_force_minimal(&p, t, x));
            }
        }
    }

    fn discrete_part(p: FinitePoset) -> (FinitePoset, FiniteSpace) {
        let t = FiniteSpace::discrete(p.names().to_vec());
        (p, t)
    }

    #[test]
    fn union_examples() {
        let parts = vec![
            discrete_part(FinitePoset::chain(1)),
            discrete_part(FinitePoset::chain(1)),
        ];
        let u = union_subbase(&parts, 0, 0, 16).unwrap();
        assert_eq!(members(&u.s3), vec![vec![0]]);
        assert!(check_priestley(&u.poset, &u.space()).unwrap().passes());

        let parts = vec![
            discrete_part(FinitePoset::chain(2)),
            discrete_part(FinitePoset::chain(1)),
        ];
        let u = union_subbase(&parts, 0, 0, 16).unwrap();
        assert!(check_priestley(&u.poset, &u.space()).unwrap().passes());

        let parts: Vec<_> = (0..3).map(|_| discrete_part(FinitePoset::chain(1))).collect();
        let u = union_subbase(&parts, 1, 0, 16).unwrap();
        // each member holds x and exactly one of the other two parts
        assert_eq!(members(&u.s3), vec![vec![1, 2], vec![0, 1]]);
    }

    #[test]
    fn union_preconditions() {
        let one = vec![discrete_part(FinitePoset::chain(1))];
        assert_eq!(union_subbase(&one, 0, 0, 16), Err(Error::TooFewParts(1)));
        let chain = FinitePoset::chain(2);
        let bad = (chain.clone(), FiniteSpace::indiscrete(chain.names().to_vec()));
        let parts = vec![discrete_part(FinitePoset::chain(1)), bad];
        assert_eq!(union_subbase(&parts, 0, 0, 16), Err(Error::NotPriestley(1)));
        let parts = vec![
            discrete_part(FinitePoset::chain(1)),
            discrete_part(FinitePoset::chain(1)),
        ];
        assert_eq!(union_subbase(&parts, 2, 0, 16), Err(Error::PartOutOfRange(2)));
    }
}
