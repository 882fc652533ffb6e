//! Finite bounded lattices, prime ideals and the two finite duality round trips.
//!
//! A finite poset `X` goes to the lattice of its down-sets; a finite
//! distributive lattice `L` goes to the poset of its prime ideals under
//! inclusion. Both composites are checked against explicit isomorphisms:
//!
//! * `x ↦ { D | x ∉ D }` from `X` onto the prime ideals of its down-set lattice;
//! * `a ↦ { P | a ∉ P }` from `L` onto the down-sets of its prime spectrum.

use std::collections::HashMap;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poset::{ElemSet, FinitePoset, PosetJson};

/// Default ceiling on the number of down-sets enumerated.
pub const DEFAULT_DOWNSET_CAP: usize = 1 << 20;

/// Wire format: `{"poset": <poset JSON>}`; meet and join are derived.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeJson {
    pub poset: PosetJson,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteLattice {
    poset: FinitePoset,
    meet: Vec<usize>,
    join: Vec<usize>,
    bottom: usize,
    top: usize,
}

impl FiniteLattice {
    /// Derives meet and join tables from the order; fails if some pair lacks a
    /// glb or lub, or if the poset is empty.
    pub fn from_poset(poset: FinitePoset) -> Result<Self> {
        let n = poset.len();
        if n == 0 {
            return Err(Error::NotALattice("empty poset has no bounds".into()));
        }
        let mut meet = vec![0; n * n];
        let mut join = vec![0; n * n];
        for a in 0..n {
            for b in a..n {
                let mut lower = poset.down_row(a).clone();
                lower.intersect_with(poset.down_row(b));
                let glb = lower
                    .ones()
                    .find(|&g| lower.is_subset(poset.down_row(g)))
                    .ok_or_else(|| {
                        Error::NotALattice(format!(
                            "{} and {} have no greatest lower bound",
                            poset.name(a),
                            poset.name(b)
                        ))
                    })?;
                let mut upper = poset.up_row(a).clone();
                upper.intersect_with(poset.up_row(b));
                let lub = upper
                    .ones()
                    .find(|&l| upper.is_subset(poset.up_row(l)))
                    .ok_or_else(|| {
                        Error::NotALattice(format!(
                            "{} and {} have no least upper bound",
                            poset.name(a),
                            poset.name(b)
                        ))
                    })?;
                meet[a * n + b] = glb;
                meet[b * n + a] = glb;
                join[a * n + b] = lub;
                join[b * n + a] = lub;
            }
        }
        let full = poset.full_set();
        let bottom = (0..n).find(|&i| poset.up_row(i) == &full).expect("lattice has a bottom");
        let top = (0..n).find(|&i| poset.down_row(i) == &full).expect("lattice has a top");
        Ok(FiniteLattice {
            poset,
            meet,
            join,
            bottom,
            top,
        })
    }

    pub fn from_json(json: &LatticeJson) -> Result<Self> {
        Self::from_poset(FinitePoset::from_json(&json.poset)?)
    }

    pub fn to_json(&self) -> LatticeJson {
        LatticeJson {
            poset: self.poset.to_json(),
        }
    }

    pub fn chain(n: usize) -> Self {
        Self::from_poset(FinitePoset::chain(n)).expect("non-empty chain is a lattice")
    }

    pub fn poset(&self) -> &FinitePoset {
        &self.poset
    }

    pub fn len(&self) -> usize {
        self.poset.len()
    }

    pub fn is_empty(&self) -> bool {
        self.poset.is_empty()
    }

    pub fn name(&self, a: usize) -> &str {
        self.poset.name(a)
    }

    pub fn le(&self, a: usize, b: usize) -> bool {
        self.poset.le(a, b)
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a * self.len() + b]
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a * self.len() + b]
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    /// Renders a subset of the carrier as `{a,b}` in canonical order.
    pub fn set_label(&self, set: &ElemSet) -> String {
        set_label(self.poset.names(), set)
    }
}

fn set_label(names: &[String], set: &ElemSet) -> String {
    let members: Vec<&str> = set.ones().map(|i| names[i].as_str()).collect();
    format!("{{{}}}", members.join(","))
}

/// All down-sets of `poset`, starting with the empty set.
///
/// Elements are decided in a linear extension; an element may join only when
/// its strict down-set is already in, so every branch ends in a down-set.
pub fn downsets(poset: &FinitePoset, cap: usize) -> Result<Vec<ElemSet>> {
    let n = poset.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| (poset.down_row(i).count_ones(..), i));
    let mut out = Vec::new();
    let mut current = FixedBitSet::with_capacity(n);
    grow(poset, &order, 0, &mut current, &mut out, cap)?;
    Ok(out)
}

fn grow(
    poset: &FinitePoset,
    order: &[usize],
    k: usize,
    current: &mut FixedBitSet,
    out: &mut Vec<ElemSet>,
    cap: usize,
) -> Result<()> {
    if k == order.len() {
        if out.len() == cap {
            return Err(Error::CapExceeded {
                what: "down-set count",
                count: cap + 1,
                cap,
            });
        }
        out.push(current.clone());
        return Ok(());
    }
    let z = order[k];
    grow(poset, order, k + 1, current, out, cap)?;
    let below_in = poset.down_row(z).ones().all(|y| y == z || current.contains(y));
    if below_in {
        current.insert(z);
        grow(poset, order, k + 1, current, out, cap)?;
        current.set(z, false);
    }
    Ok(())
}

/// Lattice of all down-sets of `x` under inclusion. Carrier elements are
/// named by their sorted member lists, e.g. `{a,b}`.
pub fn downset_lattice(x: &FinitePoset, cap: usize) -> Result<FiniteLattice> {
    Ok(downset_lattice_with_sets(x, cap)?.0)
}

/// As [`downset_lattice`], also returning the down-set behind each carrier element.
pub fn downset_lattice_with_sets(
    x: &FinitePoset,
    cap: usize,
) -> Result<(FiniteLattice, Vec<ElemSet>)> {
    let mut sets = downsets(x, cap)?;
    sets.sort_by(|a, b| {
        a.count_ones(..)
            .cmp(&b.count_ones(..))
            .then_with(|| a.ones().cmp(b.ones()))
    });
    let lookup: HashMap<&ElemSet, usize> = sets.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let names: Vec<String> = sets.iter().map(|s| set_label(x.names(), s)).collect();
    // D ⊂ D ∪ {z} steps generate inclusion.
    let mut pairs = Vec::new();
    for (i, d) in sets.iter().enumerate() {
        for z in 0..x.len() {
            if d.contains(z) {
                continue;
            }
            let mut bigger = d.clone();
            bigger.insert(z);
            if let Some(&j) = lookup.get(&bigger) {
                pairs.push((i, j));
            }
        }
    }
    let poset = FinitePoset::from_index_pairs(names, pairs)?;
    let lattice = FiniteLattice::from_poset(poset)?;
    Ok((lattice, sets))
}

/// Outcome of the lattice-axiom and distributivity scan.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DistributivityReport {
    /// Pairs whose tabulated meet is not their glb.
    pub meet_violations: Vec<(usize, usize)>,
    /// Pairs whose tabulated join is not their lub.
    pub join_violations: Vec<(usize, usize)>,
    /// Elements outside `[bottom, top]`.
    pub bound_violations: Vec<usize>,
    /// Triples with `x ∧ (y ∨ z) != (x ∧ y) ∨ (x ∧ z)`.
    pub distributivity_violations: Vec<(usize, usize, usize)>,
}

impl DistributivityReport {
    pub fn passes(&self) -> bool {
        self.meet_violations.is_empty()
            && self.join_violations.is_empty()
            && self.bound_violations.is_empty()
            && self.distributivity_violations.is_empty()
    }
}

pub fn check_bounded_distributive(l: &FiniteLattice) -> DistributivityReport {
    let n = l.len();
    let mut report = DistributivityReport::default();
    for a in 0..n {
        for b in 0..n {
            let m = l.meet(a, b);
            let glb = l.le(m, a)
                && l.le(m, b)
                && (0..n).all(|z| !(l.le(z, a) && l.le(z, b)) || l.le(z, m));
            if !glb {
                report.meet_violations.push((a, b));
            }
            let j = l.join(a, b);
            let lub = l.le(a, j)
                && l.le(b, j)
                && (0..n).all(|z| !(l.le(a, z) && l.le(b, z)) || l.le(j, z));
            if !lub {
                report.join_violations.push((a, b));
            }
        }
    }
    for a in 0..n {
        if !(l.le(l.bottom(), a) && l.le(a, l.top())) {
            report.bound_violations.push(a);
        }
    }
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let lhs = l.meet(x, l.join(y, z));
                let rhs = l.join(l.meet(x, y), l.meet(x, z));
                if lhs != rhs {
                    report.distributivity_violations.push((x, y, z));
                }
            }
        }
    }
    report
}

fn require_distributive(l: &FiniteLattice) -> Result<()> {
    let report = check_bounded_distributive(l);
    if let Some(&(x, y, z)) = report.distributivity_violations.first() {
        return Err(Error::NotDistributive {
            x: l.name(x).into(),
            y: l.name(y).into(),
            z: l.name(z).into(),
        });
    }
    if !report.passes() {
        return Err(Error::NotALattice("meet/join tables are inconsistent".into()));
    }
    Ok(())
}

/// A set of lattice elements; the ideal axioms are predicates on it.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IdealSet {
    pub members: ElemSet,
}

impl IdealSet {
    pub fn is_nonempty(&self) -> bool {
        !self.members.is_clear()
    }

    pub fn is_decreasing(&self, l: &FiniteLattice) -> bool {
        l.poset().is_decreasing(&self.members)
    }

    pub fn is_join_closed(&self, l: &FiniteLattice) -> bool {
        self.members
            .ones()
            .all(|a| self.members.ones().all(|b| self.members.contains(l.join(a, b))))
    }

    pub fn is_ideal(&self, l: &FiniteLattice) -> bool {
        self.is_nonempty() && self.is_decreasing(l) && self.is_join_closed(l)
    }

    pub fn is_proper(&self, l: &FiniteLattice) -> bool {
        !self.members.contains(l.top())
    }

    /// `a ∧ b ∈ I` implies `a ∈ I` or `b ∈ I`.
    pub fn is_prime(&self, l: &FiniteLattice) -> bool {
        let n = l.len();
        self.is_ideal(l)
            && self.is_proper(l)
            && (0..n).all(|a| {
                (0..n).all(|b| {
                    !self.members.contains(l.meet(a, b))
                        || self.members.contains(a)
                        || self.members.contains(b)
                })
            })
    }

    pub fn label(&self, l: &FiniteLattice) -> String {
        l.set_label(&self.members)
    }
}

/// Prime ideals in order of their generators.
///
/// In a finite lattice every ideal is principal (it contains the join of its
/// members), so the decreasing join-closed candidates are exactly the
/// principal down-sets `(a]`; each is still checked against the ideal axioms
/// before the primality filter.
pub fn prime_ideals(l: &FiniteLattice) -> Result<Vec<IdealSet>> {
    require_distributive(l)?;
    let mut out = Vec::new();
    for a in 0..l.len() {
        let candidate = IdealSet {
            members: l.poset().down_row(a).clone(),
        };
        debug_assert!(candidate.is_ideal(l));
        if candidate.is_prime(l) {
            out.push(candidate);
        }
    }
    Ok(out)
}

/// The prime ideals ordered by inclusion, named by their member lists.
pub fn prime_spectrum_poset(l: &FiniteLattice) -> Result<FinitePoset> {
    Ok(spectrum_with_ideals(l)?.0)
}

fn spectrum_with_ideals(l: &FiniteLattice) -> Result<(FinitePoset, Vec<IdealSet>)> {
    let primes = prime_ideals(l)?;
    let names = primes.iter().map(|p| p.label(l)).collect();
    let mut pairs = Vec::new();
    for (i, p) in primes.iter().enumerate() {
        for (j, q) in primes.iter().enumerate() {
            if p.members.is_subset(&q.members) {
                pairs.push((i, j));
            }
        }
    }
    Ok((FinitePoset::from_index_pairs(names, pairs)?, primes))
}

pub fn join_irreducibles(l: &FiniteLattice) -> Result<Vec<usize>> {
    require_distributive(l)?;
    let n = l.len();
    Ok((0..n)
        .filter(|&x| x != l.bottom())
        .filter(|&x| {
            (0..n).all(|a| (0..n).all(|b| l.join(a, b) != x || a == x || b == x))
        })
        .collect())
}

/// Result of `X -> downsets(X) -> spectrum` with the comparison map.
#[derive(Clone, Debug)]
pub struct PosetRoundTrip {
    pub lattice: FiniteLattice,
    pub spectrum: FinitePoset,
    /// `mapping[x]` is the spectrum element matched with `x`.
    pub mapping: Vec<usize>,
}

pub fn round_trip_poset(x: &FinitePoset, cap: usize) -> Result<PosetRoundTrip> {
    let (lattice, sets) = downset_lattice_with_sets(x, cap)?;
    let (spectrum, primes) = spectrum_with_ideals(&lattice)?;
    let position: HashMap<&ElemSet, usize> =
        primes.iter().enumerate().map(|(i, p)| (&p.members, i)).collect();
    let mut mapping = Vec::with_capacity(x.len());
    for e in 0..x.len() {
        // { D | e ∉ D }
        let mut ideal = FixedBitSet::with_capacity(lattice.len());
        for (i, d) in sets.iter().enumerate() {
            if !d.contains(e) {
                ideal.insert(i);
            }
        }
        let image = position.get(&ideal).ok_or_else(|| {
            Error::RoundTripFailure(format!(
                "ideal of down-sets avoiding {} is not among the prime ideals",
                x.name(e)
            ))
        })?;
        mapping.push(*image);
    }
    if !crate::poset::is_order_isomorphism(x, &spectrum, &mapping) {
        return Err(Error::RoundTripFailure(
            "canonical map onto the prime spectrum is not an order isomorphism".into(),
        ));
    }
    Ok(PosetRoundTrip {
        lattice,
        spectrum,
        mapping,
    })
}

/// Result of `L -> spectrum(L) -> downsets` with the comparison map.
#[derive(Clone, Debug)]
pub struct LatticeRoundTrip {
    pub spectrum: FinitePoset,
    pub lattice: FiniteLattice,
    /// `mapping[a]` is the element of the rebuilt lattice matched with `a`.
    pub mapping: Vec<usize>,
}

pub fn round_trip_lattice(l: &FiniteLattice, cap: usize) -> Result<LatticeRoundTrip> {
    let (spectrum, primes) = spectrum_with_ideals(l)?;
    let (rebuilt, sets) = downset_lattice_with_sets(&spectrum, cap)?;
    let position: HashMap<&ElemSet, usize> = sets.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let mut mapping = Vec::with_capacity(l.len());
    for a in 0..l.len() {
        // { P | a ∉ P }
        let mut avoid = FixedBitSet::with_capacity(primes.len());
        for (i, p) in primes.iter().enumerate() {
            if !p.members.contains(a) {
                avoid.insert(i);
            }
        }
        let image = position.get(&avoid).ok_or_else(|| {
            Error::RoundTripFailure(format!(
                "primes avoiding {} do not form a down-set of the spectrum",
                l.name(a)
            ))
        })?;
        mapping.push(*image);
    }
    if !crate::poset::is_order_isomorphism(l.poset(), rebuilt.poset(), &mapping) {
        return Err(Error::RoundTripFailure(
            "canonical map onto down-sets of the spectrum is not an order isomorphism".into(),
        ));
    }
    let n = l.len();
    for a in 0..n {
        for b in 0..n {
            if mapping[l.meet(a, b)] != rebuilt.meet(mapping[a], mapping[b])
                || mapping[l.join(a, b)] != rebuilt.join(mapping[a], mapping[b])
            {
                return Err(Error::RoundTripFailure(format!(
                    "lattice operations not preserved at ({}, {})",
                    l.name(a),
                    l.name(b)
                )));
            }
        }
    }
    Ok(LatticeRoundTrip {
        spectrum,
        lattice: rebuilt,
        mapping,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::find_isomorphism;

    fn boolean4() -> FiniteLattice {
        let p = FinitePoset::from_relation(
            &["0", "a", "b", "1"],
            &[("0", "a"), ("0", "b"), ("a", "1"), ("b", "1")],
        )
        .unwrap();
        FiniteLattice::from_poset(p).unwrap()
    }

    fn m3() -> FiniteLattice {
        let p = FinitePoset::from_relation(
            &["0", "a", "b", "c", "1"],
            &[
                ("0", "a"),
                ("0", "b"),
                ("0", "c"),
                ("a", "1"),
                ("b", "1"),
                ("c", "1"),
            ],
        )
        .unwrap();
        FiniteLattice::from_poset(p).unwrap()
    }

    fn three_chain() -> FiniteLattice {
        let p = FinitePoset::from_relation(&["0", "m", "1"], &[("0", "m"), ("m", "1")]).unwrap();
        FiniteLattice::from_poset(p).unwrap()
    }

    /// Oracle: prime ideals by scanning every subset of the carrier.
    fn brute_force_primes(l: &FiniteLattice) -> Vec<Vec<usize>> {
        let n = l.len();
        let mut out = Vec::new();
        for mask in 0u32..(1 << n) {
            let mut members = FixedBitSet::with_capacity(n);
            for i in 0..n {
                if mask >> i & 1 == 1 {
                    members.insert(i);
                }
            }
            let cand = IdealSet { members };
            if cand.is_prime(l) {
                out.push(cand.members.ones().collect());
            }
        }
        out.sort();
        out
    }

    fn primes_as_lists(l: &FiniteLattice) -> Vec<Vec<usize>> {
        let mut v: Vec<Vec<usize>> = prime_ideals(l)
            .unwrap()
            .iter()
            .map(|p| p.members.ones().collect())
            .collect();
        v.sort();
        v
    }

    #[test]
    fn downset_lattice_examples() {
        assert_eq!(downset_lattice(&FinitePoset::antichain(2), 64).unwrap().len(), 4);
        let chain2 = downset_lattice(&FinitePoset::chain(2), 64).unwrap();
        assert_eq!(chain2.len(), 3);
        assert!(find_isomorphism(chain2.poset(), &FinitePoset::chain(3)).is_some());
        let chain4 = downset_lattice(&FinitePoset::chain(4), 64).unwrap();
        assert!(find_isomorphism(chain4.poset(), &FinitePoset::chain(5)).is_some());
    }

    #[test]
    fn downset_cap() {
        let err = downset_lattice(&FinitePoset::antichain(4), 15).unwrap_err();
        assert!(matches!(err, Error::CapExceeded { cap: 15, .. }));
    }

    #[test]
    fn downset_tables_are_intersection_and_union() {
        let x = FinitePoset::from_relation(&["a", "b", "c"], &[("a", "c")]).unwrap();
        let (l, sets) = downset_lattice_with_sets(&x, 64).unwrap();
        for i in 0..l.len() {
            for j in 0..l.len() {
                let mut inter = sets[i].clone();
                inter.intersect_with(&sets[j]);
                let mut uni = sets[i].clone();
                uni.union_with(&sets[j]);
                assert_eq!(sets[l.meet(i, j)], inter);
                assert_eq!(sets[l.join(i, j)], uni);
            }
        }
    }

    #[test]
    fn distributivity_scan() {
        assert!(check_bounded_distributive(&boolean4()).passes());
        assert!(check_bounded_distributive(&FiniteLattice::chain(5)).passes());
        let r = check_bounded_distributive(&m3());
        assert!(r.meet_violations.is_empty() && r.join_violations.is_empty());
        // a ∧ (b ∨ c) = a but (a ∧ b) ∨ (a ∧ c) = 0
        assert!(r.distributivity_violations.contains(&(1, 2, 3)));
        let expected: Vec<(usize, usize, usize)> = {
            let l = m3();
            let mut v = Vec::new();
            for x in 0..5 {
                for y in 0..5 {
                    for z in 0..5 {
                        if l.meet(x, l.join(y, z)) != l.join(l.meet(x, y), l.meet(x, z)) {
                            v.push((x, y, z));
                        }
                    }
                }
            }
            v
        };
        assert_eq!(r.distributivity_violations, expected);
    }

    #[test]
    fn non_lattice_is_rejected() {
        let p = FinitePoset::antichain(2);
        assert!(matches!(FiniteLattice::from_poset(p), Err(Error::NotALattice(_))));
    }

    #[test]
    fn prime_ideal_examples() {
        let b = boolean4();
        assert_eq!(primes_as_lists(&b), vec![vec![0, 1], vec![0, 2]]);
        assert_eq!(primes_as_lists(&b), brute_force_primes(&b));
        let c = three_chain();
        assert_eq!(primes_as_lists(&c), vec![vec![0], vec![0, 1]]);
        assert_eq!(primes_as_lists(&c), brute_force_primes(&c));
        assert!(prime_ideals(&FiniteLattice::chain(1)).unwrap().is_empty());
        assert!(matches!(prime_ideals(&m3()), Err(Error::NotDistributive { .. })));
    }

    #[test]
    fn spectrum_examples() {
        let s = prime_spectrum_poset(&boolean4()).unwrap();
        assert!(find_isomorphism(&s, &FinitePoset::antichain(2)).is_some());
        assert_eq!(s.names(), ["{0,a}", "{0,b}"]);
        let s = prime_spectrum_poset(&three_chain()).unwrap();
        assert!(find_isomorphism(&s, &FinitePoset::chain(2)).is_some());
        let s = prime_spectrum_poset(&FiniteLattice::chain(5)).unwrap();
        assert!(find_isomorphism(&s, &FinitePoset::chain(4)).is_some());
    }

    #[test]
    fn join_irreducible_examples() {
        let b = boolean4();
        assert_eq!(join_irreducibles(&b).unwrap(), vec![1, 2]);
        assert_eq!(join_irreducibles(&three_chain()).unwrap(), vec![1, 2]);
        assert!(join_irreducibles(&FiniteLattice::chain(1)).unwrap().is_empty());
    }

    #[test]
    fn poset_round_trips() {
        let rt = round_trip_poset(&FinitePoset::antichain(2), 64).unwrap();
        assert!(find_isomorphism(&rt.spectrum, &FinitePoset::antichain(2)).is_some());
        let rt = round_trip_poset(&FinitePoset::chain(1), 64).unwrap();
        assert_eq!(rt.spectrum.len(), 1);
        assert_eq!(rt.mapping, vec![0]);
    }

    #[test]
    fn lattice_round_trips() {
        for l in [three_chain(), boolean4(), FiniteLattice::chain(2)] {
            let rt = round_trip_lattice(&l, 64).unwrap();
            assert_eq!(rt.lattice.len(), l.len());
        }
        assert!(round_trip_lattice(&m3(), 64).is_err());
    }

    #[test]
    fn json_round_trip() {
        let l = boolean4();
        assert_eq!(FiniteLattice::from_json(&l.to_json()).unwrap(), l);
    }
}
