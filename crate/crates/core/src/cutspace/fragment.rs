//! A finite-depth fragment of the cut space carrying a copy of `P(n, w)`.
//!
//! Every fragment point is a gap placed at an exact surd. The root `x` sits in
//! a fixed window near the bottom of the space. Each node `x_σ` owns a clopen
//! interval `X_σ`, and its children's intervals are stacked inside `X_σ`
//! on one side of `x_σ`, accumulating towards it:
//!
//! * even-length `σ` (including the root): children above `x_σ`, child `i+1`
//!   below child `i`;
//! * odd-length `σ`: children below `x_σ`, child `i+1` above child `i`.
//!
//! Depth-`d` intervals have length at most `1/2^d` and avoid both jumps at the
//! enumeration rational `s_{d-1}`.

use std::collections::{BTreeSet, HashMap};

use fixedbitset::FixedBitSet;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::clopen::{Block, ClopenSet};
use super::point::{CutPoint, GapPoint, Position};
use super::rational::{format_rational, in_open_unit, parse_rational, rat, Rational, Surd};
use crate::constructions::{generate_p, p_element_count, truncation_paths, IndexPath};
use crate::error::{Error, Result};
use crate::poset::{find_isomorphism, is_order_isomorphism, FinitePoset, DEFAULT_ELEMENT_CAP};

/// Window holding the root gap.
pub fn root_window() -> Block {
    Block::new(Rational::zero(), rat(1, 4)).expect("valid window")
}

/// Upper end of the region for the root's children.
fn root_region_top() -> Rational {
    rat(15, 16)
}

fn pow2(k: u32) -> Rational {
    Rational::from_integer(num_bigint::BigInt::one() << k)
}

/// Tight brackets decide nearly every comparison without surd arithmetic.
fn tight_tolerance() -> Rational {
    Rational::one() / pow2(64)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FragmentNode {
    pub path: IndexPath,
    pub position: Surd,
    /// `X_σ`; absent for the root.
    pub interval: Option<Block>,
    tight: (Rational, Rational),
}

impl FragmentNode {
    fn new(path: IndexPath, position: Surd, interval: Option<Block>) -> Self {
        let tight = position.bracket(&tight_tolerance());
        FragmentNode {
            path,
            position,
            interval,
            tight,
        }
    }

    pub fn name(&self) -> String {
        self.path.label("x")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fragment {
    depth: usize,
    width: usize,
    seed: u64,
    rationals: Vec<Rational>,
    nodes: Vec<FragmentNode>,
    order: FinitePoset,
    index: HashMap<IndexPath, usize>,
}

/// Gap at `l + (r - l)(f + (√2 - 1)/16)` for a seeded `f`.
fn place_gap(lo: &Rational, hi: &Rational, rng: &mut ChaCha8Rng) -> Surd {
    let f = rat(2 + rng.gen_range(0..4), 8);
    let span = hi - lo;
    let sixteenth = rat(1, 16);
    Surd::new(lo + &span * (f - &sixteenth), span * sixteenth)
}

/// Child slots of a node at `alpha` with region `(alpha, far)` (children
/// above) or `(far, alpha)` (children below). Slot `i` is bracketed by the
/// rational approximations of `alpha ± |far - alpha| / 2^i`, then padded.
fn child_slots(
    alpha: &Surd,
    far: &Rational,
    above: bool,
    width: usize,
    span: &Rational,
) -> Vec<(Rational, Rational)> {
    let mut ends = vec![far.clone()];
    for i in 1..=width as u32 {
        let shrink = Rational::one() / pow2(i);
        // alpha + (far - alpha) * shrink
        let target = Surd::new(
            &alpha.a * (Rational::one() - &shrink) + far * &shrink,
            &alpha.b * (Rational::one() - &shrink),
        );
        let (lo, hi) = target.bracket(&(span / pow2(i + 6)));
        ends.push(if above { hi } else { lo });
    }
    (0..width)
        .map(|i| {
            let (a, b) = if above {
                (ends[i + 1].clone(), ends[i].clone())
            } else {
                (ends[i].clone(), ends[i + 1].clone())
            };
            let pad = (&b - &a) / rat(8, 1);
            (&a + &pad, b - pad)
        })
        .collect()
}

/// Shrinks `(lo, hi)` so that it avoids both jumps at `s`.
fn carve(lo: Rational, hi: Rational, s: &Rational) -> Result<(Rational, Rational)> {
    if *s < lo || *s > hi {
        return Ok((lo, hi));
    }
    let m = (&hi - &lo) / rat(16, 1);
    let below = (lo.clone(), s - &m);
    let above = (s + &m, hi.clone());
    let pick = if &below.1 - &below.0 >= &above.1 - &above.0 {
        below
    } else {
        above
    };
    if pick.0 >= pick.1 {
        return Err(Error::InfeasiblePlacement(format!(
            "slot ({}, {}) collapses around {}",
            format_rational(&lo),
            format_rational(&hi),
            format_rational(s)
        )));
    }
    Ok(pick)
}

/// Strict generating pairs of `⪯`, stated per child. For a child `σ·i`:
/// under the root, `x ≺ x_i` and `x_i ≺ x_j` for `j < i`; under an
/// odd-length `σ = π·t`, `x_{σ,i} ≺ x_{σ,j}` for `i < j` and
/// `x_{σ,i} ≺ x_{π,k}` for `k <= t`; under an even-length `σ = π·t`,
/// `x_{σ,i} ≺ x_{σ,j}` for `j < i` and `x_{π,k} ≺ x_{σ,i}` for `k <= t`.
fn order_pairs(paths: &[IndexPath], index: &HashMap<IndexPath, usize>, width: usize) -> Vec<(usize, usize)> {
    let mut pairs = Vec::new();
    for (c, path) in paths.iter().enumerate() {
        let Some(sigma) = path.parent() else { continue };
        let i = path.last().unwrap();
        let sib = |j: usize| index[&sigma.child(j)];
        if sigma.is_root() {
            pairs.push((index[&sigma], c));
            pairs.extend((0..i).map(|j| (c, sib(j))));
            continue;
        }
        let pi = sigma.parent().unwrap();
        let t = sigma.last().unwrap();
        let uncle = |k: usize| index[&pi.child(k)];
        if sigma.len() % 2 == 1 {
            pairs.extend((i + 1..width).map(|j| (c, sib(j))));
            pairs.extend((0..=t).map(|k| (c, uncle(k))));
        } else {
            pairs.extend((0..i).map(|j| (c, sib(j))));
            pairs.extend((0..=t).map(|k| (uncle(k), c)));
        }
    }
    pairs
}

fn validate_rationals(depth: usize, rationals: &[Rational]) -> Result<Vec<Rational>> {
    if rationals.len() < depth + 1 {
        return Err(Error::InvalidInput(format!(
            "depth {depth} needs {} enumeration rationals, got {}",
            depth + 1,
            rationals.len()
        )));
    }
    let prefix = rationals[..=depth].to_vec();
    let distinct: BTreeSet<&Rational> = prefix.iter().collect();
    if distinct.len() != prefix.len() || !prefix.iter().all(in_open_unit) {
        return Err(Error::InvalidInput(
            "enumeration prefix must hold distinct rationals in (0,1)".into(),
        ));
    }
    Ok(prefix)
}

pub fn build_fragment(depth: usize, width: usize, rationals: &[Rational], seed: u64) -> Result<Fragment> {
    if width == 0 {
        return Err(Error::InvalidInput("width must be at least 1".into()));
    }
    let count = p_element_count(depth, width).unwrap_or(usize::MAX);
    if count > DEFAULT_ELEMENT_CAP {
        return Err(Error::CapExceeded {
            what: "fragment point count",
            count,
            cap: DEFAULT_ELEMENT_CAP,
        });
    }
    let rationals = validate_rationals(depth, rationals)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let paths = truncation_paths(depth, width);
    let index: HashMap<IndexPath, usize> = paths.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();

    let window = root_window();
    let mut placed: Vec<Option<(Surd, Option<Block>)>> = vec![None; paths.len()];
    placed[0] = Some((place_gap(window.lo(), window.hi(), &mut rng), None));
    for (s, sigma) in paths.iter().enumerate() {
        if sigma.len() > depth {
            break;
        }
        let (alpha, interval) = placed[s].clone().expect("parents are placed first");
        let (far, span, above) = match &interval {
            None => (root_region_top(), Rational::one(), true),
            Some(x) if sigma.len() % 2 == 0 => (x.hi().clone(), x.length(), true),
            Some(x) => (x.lo().clone(), x.length(), false),
        };
        let excluded = &rationals[sigma.len()];
        for (i, (lo, hi)) in child_slots(&alpha, &far, above, width, &span).into_iter().enumerate() {
            let (lo, hi) = carve(lo, hi, excluded)?;
            let gap = place_gap(&lo, &hi, &mut rng);
            let block = Block::new(lo, hi).map_err(|e| Error::InfeasiblePlacement(e.to_string()))?;
            placed[index[&sigma.child(i)]] = Some((gap, Some(block)));
        }
    }

    let nodes: Vec<FragmentNode> = paths
        .iter()
        .zip(placed)
        .map(|(p, slot)| {
            let (pos, interval) = slot.expect("every path is placed");
            FragmentNode::new(p.clone(), pos, interval)
        })
        .collect();
    let order = FinitePoset::from_index_pairs(
        nodes.iter().map(FragmentNode::name).collect(),
        order_pairs(&paths, &index, width),
    )?;
    let fragment = Fragment {
        depth,
        width,
        seed,
        rationals,
        nodes,
        order,
        index,
    };
    let report = fragment.check_invariants();
    if !report.passes() {
        return Err(Error::InfeasiblePlacement(report.violations.join("; ")));
    }
    Ok(fragment)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantReport {
    pub checked: usize,
    pub violations: Vec<String>,
}

impl InvariantReport {
    pub fn passes(&self) -> bool {
        self.violations.is_empty()
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.violations.push(what());
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsoReport {
    /// Fragment point name and its image in `P(n, w)`.
    pub mapping: Vec<(String, String)>,
    /// Order components among fragment points; every other cut is a
    /// singleton component since `⪯` is trivial off the fragment.
    pub components: usize,
    pub nontrivial_components: usize,
}

impl Fragment {
    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn rationals(&self) -> &[Rational] {
        &self.rationals
    }

    pub fn nodes(&self) -> &[FragmentNode] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `⪯` on fragment points, elements named `x`, `x[0]`, ...
    pub fn order(&self) -> &FinitePoset {
        &self.order
    }

    pub fn index_of_path(&self, path: &IndexPath) -> Option<usize> {
        self.index.get(path).copied()
    }

    pub fn interval(&self, path: &IndexPath) -> Option<&Block> {
        self.index_of_path(path).and_then(|i| self.nodes[i].interval.as_ref())
    }

    /// Bounds are the intervals along the path (the root window for `x`).
    pub fn gap_point(&self, idx: usize) -> CutPoint {
        let node = &self.nodes[idx];
        let mut bounds = vec![(root_window().lo().clone(), root_window().hi().clone())];
        if !node.path.is_root() {
            bounds = (1..=node.path.len())
                .map(|l| {
                    let x = self.nodes[self.index[&node.path.prefix(l)]].interval.as_ref().unwrap();
                    (x.lo().clone(), x.hi().clone())
                })
                .collect();
        }
        CutPoint::Gap(GapPoint {
            path: node.path.clone(),
            position: node.position.clone(),
            bounds,
        })
    }

    pub fn points(&self) -> Vec<CutPoint> {
        (0..self.len()).map(|i| self.gap_point(i)).collect()
    }

    /// Index of a fragment gap; `None` for jumps and the end cuts.
    pub fn locate(&self, pt: &CutPoint) -> Result<Option<usize>> {
        match pt {
            CutPoint::Gap(g) => self
                .index_of_path(&g.path)
                .map(Some)
                .ok_or_else(|| Error::InvalidInput(format!("{pt} is not a fragment point"))),
            _ => Ok(None),
        }
    }

    /// Resolves `x[...]` names as well as the forms accepted by `CutPoint`.
    pub fn resolve(&self, name: &str) -> Result<CutPoint> {
        if name.trim_start().starts_with('x') {
            let path = IndexPath::parse(name.trim(), "x")?;
            let idx = self
                .index_of_path(&path)
                .ok_or_else(|| Error::InvalidInput(format!("`{name}` is not a fragment point")))?;
            Ok(self.gap_point(idx))
        } else {
            name.parse()
        }
    }

    pub fn position(&self, idx: usize) -> Position {
        Position::Gap(self.nodes[idx].position.clone())
    }

    /// Membership of a fragment point. The tight bracket settles almost every
    /// case; otherwise the exact position decides, which amounts to refining
    /// the bounds until they clear the block endpoints.
    pub fn contains(&self, idx: usize, set: &ClopenSet) -> bool {
        let node = &self.nodes[idx];
        set.blocks().iter().any(|b| {
            b.decide_gap(&node.tight.0, &node.tight.1)
                .unwrap_or_else(|| b.contains_position(&Position::Gap(node.position.clone())))
        })
    }

    pub fn membership_mask(&self, set: &ClopenSet) -> FixedBitSet {
        let mut mask = FixedBitSet::with_capacity(self.len());
        for i in 0..self.len() {
            if self.contains(i, set) {
                mask.insert(i);
            }
        }
        mask
    }

    /// True iff `a ⪯ b` and `b ∈ set` imply `a ∈ set` for fragment points;
    /// every other cut is `⪯`-isolated.
    pub fn is_decreasing(&self, set: &ClopenSet) -> bool {
        let mask = self.membership_mask(set);
        mask.ones().all(|b| self.order.down_row(b).is_subset(&mask))
    }

    /// `X_{prefix,0} ∪ ... ∪ X_{prefix,bound}`.
    pub fn sibling_union(&self, prefix: &IndexPath, bound: usize) -> Option<ClopenSet> {
        let mut blocks = Vec::with_capacity(bound + 1);
        for l in 0..=bound {
            blocks.push(self.interval(&prefix.child(l))?.clone());
        }
        Some(ClopenSet::from_blocks(blocks))
    }

    /// Isolated cuts used by the separation sweep: the end cuts and both jumps
    /// at each enumeration rational and each depth-1 interval endpoint.
    pub fn probes(&self) -> Vec<CutPoint> {
        let mut at: BTreeSet<Rational> = self.rationals.iter().cloned().collect();
        for i in 0..self.width {
            if let Some(x) = self.interval(&IndexPath(vec![i])) {
                at.insert(x.lo().clone());
                at.insert(x.hi().clone());
            }
        }
        let mut out = vec![CutPoint::Empty, CutPoint::Full];
        for q in at.into_iter().filter(in_open_unit) {
            out.push(CutPoint::JumpOpen(q.clone()));
            out.push(CutPoint::JumpClosed(q));
        }
        out
    }

    pub fn check_invariants(&self) -> InvariantReport {
        let mut r = InvariantReport::default();
        let root = &self.nodes[0];
        let window = root_window();
        r.check(window.contains_position(&Position::Gap(root.position.clone())), || {
            "x lies outside its window".into()
        });
        for (idx, node) in self.nodes.iter().enumerate() {
            let name = node.name();
            if let Some(x) = &node.interval {
                let d = node.path.len() as u32;
                r.check(x.length() <= Rational::one() / pow2(d), || {
                    format!("ln(X_{name}) exceeds 1/2^{d}")
                });
                r.check(x.contains_position(&Position::Gap(node.position.clone())), || {
                    format!("{name} lies outside X_{name}")
                });
                let s = &self.rationals[d as usize - 1];
                r.check(
                    !x.contains_position(&Position::Jump { at: s.clone(), closed: false })
                        && !x.contains_position(&Position::Jump { at: s.clone(), closed: true }),
                    || format!("X_{name} holds a jump at {}", format_rational(s)),
                );
                if let Some(parent) = node.path.parent().filter(|p| !p.is_root()) {
                    let px = self.interval(&parent).unwrap();
                    r.check(px.lo() <= x.lo() && x.hi() <= px.hi(), || {
                        format!("X_{name} escapes its parent interval")
                    });
                }
            }
            if let CutPoint::Gap(mut g) = self.gap_point(idx) {
                for _ in 0..4 {
                    g.refine();
                }
                let nested = g.bounds.windows(2).all(|w| {
                    w[0].0 <= w[1].0 && w[1].1 <= w[0].1 && (&w[1].1 - &w[1].0) < (&w[0].1 - &w[0].0)
                });
                let lengths = g
                    .bounds
                    .iter()
                    .enumerate()
                    .all(|(k, (lo, hi))| hi - lo <= Rational::one() / pow2(k as u32 + 1));
                r.check(nested && lengths, || format!("bounds of {name} do not shrink to 1/2^k"));
            }
            self.check_children(idx, &mut r);
        }
        // ⪯ must agree with the cut order on every comparable pair.
        for a in 0..self.len() {
            for b in self.order.up_row(a).ones().filter(|&b| b != a) {
                r.check(self.nodes[a].position < self.nodes[b].position, || {
                    format!("{} ≺ {} but not below it as cuts", self.nodes[a].name(), self.nodes[b].name())
                });
            }
        }
        r
    }

    fn check_children(&self, idx: usize, r: &mut InvariantReport) {
        let node = &self.nodes[idx];
        if node.path.len() > self.depth {
            return;
        }
        let above = node.path.len().is_multiple_of(2);
        let kids: Vec<&Block> = (0..self.width)
            .map(|i| self.interval(&node.path.child(i)).unwrap())
            .collect();
        let alpha = &node.position;
        for (i, x) in kids.iter().enumerate() {
            let side = if above {
                alpha.cmp_rational(x.lo()).is_lt()
            } else {
                alpha.cmp_rational(x.hi()).is_gt()
            };
            r.check(side, || format!("child {i} of {} is on the wrong side", node.name()));
            if i + 1 < kids.len() {
                // siblings disjoint and approaching x_σ
                let next = kids[i + 1];
                let ok = if above { next.hi() < x.lo() } else { x.hi() < next.lo() };
                r.check(ok, || {
                    format!("children {i}, {} of {} overlap or recede", i + 1, node.name())
                });
            }
        }
        if node.path.is_root() {
            let top = root_region_top();
            r.check(kids.iter().all(|x| *x.hi() <= top), || "root children exceed their region".into());
        }
    }

    pub fn order_iso_check(&self) -> Result<IsoReport> {
        let target = generate_p(self.depth, self.width, DEFAULT_ELEMENT_CAP)?;
        let map = find_isomorphism(&self.order, &target)
            .ok_or_else(|| Error::IsoFailure("no order isomorphism onto P(n, w)".into()))?;
        if !is_order_isomorphism(&self.order, &target, &map) {
            return Err(Error::IsoFailure("search returned a non-isomorphism".into()));
        }
        let components = self.order.order_components();
        let nontrivial = components.blocks.iter().filter(|b| b.len() > 1).count();
        if components.len() != 1 {
            return Err(Error::IsoFailure(format!(
                "fragment splits into {} components",
                components.len()
            )));
        }
        Ok(IsoReport {
            mapping: map
                .iter()
                .enumerate()
                .map(|(i, &j)| (self.order.name(i).to_string(), target.name(j).to_string()))
                .collect(),
            components: components.len(),
            nontrivial_components: nontrivial,
        })
    }

    pub fn to_json(&self) -> FragmentJson {
        FragmentJson {
            depth: self.depth,
            width: self.width,
            seed: self.seed,
            rationals: self.rationals.iter().map(format_rational).collect(),
            points: self
                .nodes
                .iter()
                .map(|n| PointJson {
                    name: n.name(),
                    position: PositionJson {
                        rational: format_rational(&n.position.a),
                        sqrt2: format_rational(&n.position.b),
                    },
                    interval: n
                        .interval
                        .as_ref()
                        .map(|x| [format_rational(x.lo()), format_rational(x.hi())]),
                })
                .collect(),
            order: self
                .order
                .covers()
                .into_iter()
                .map(|(a, b)| [self.order.name(a).to_string(), self.order.name(b).to_string()])
                .collect(),
        }
    }

    /// Loads and re-validates a serialized fragment.
    pub fn from_json(json: &FragmentJson) -> Result<Self> {
        let rationals = json
            .rationals
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>>>()?;
        let rationals = validate_rationals(json.depth, &rationals)?;
        if json.width == 0 {
            return Err(Error::InvalidInput("width must be at least 1".into()));
        }
        let count = p_element_count(json.depth, json.width).unwrap_or(usize::MAX);
        if count > DEFAULT_ELEMENT_CAP {
            return Err(Error::CapExceeded {
                what: "fragment point count",
                count,
                cap: DEFAULT_ELEMENT_CAP,
            });
        }
        let paths = truncation_paths(json.depth, json.width);
        if json.points.len() != paths.len() {
            return Err(Error::InvalidInput(format!(
                "expected {} points, got {}",
                paths.len(),
                json.points.len()
            )));
        }
        let mut nodes = Vec::with_capacity(paths.len());
        for (path, pt) in paths.iter().zip(&json.points) {
            if IndexPath::parse(&pt.name, "x")? != *path {
                return Err(Error::InvalidInput(format!("point `{}` out of order", pt.name)));
            }
            let position = Surd::new(
                parse_rational(&pt.position.rational)?,
                parse_rational(&pt.position.sqrt2)?,
            );
            if !position.is_irrational() {
                return Err(Error::InvalidInput(format!("`{}` is not placed at a gap", pt.name)));
            }
            let interval = match (&pt.interval, path.is_root()) {
                (None, true) => None,
                (Some([lo, hi]), false) => Some(Block::new(parse_rational(lo)?, parse_rational(hi)?)?),
                _ => {
                    return Err(Error::InvalidInput(format!(
                        "`{}` has a misplaced interval",
                        pt.name
                    )))
                }
            };
            nodes.push(FragmentNode::new(path.clone(), position, interval));
        }
        let names: Vec<String> = nodes.iter().map(FragmentNode::name).collect();
        let pairs: Vec<(String, String)> = json.order.iter().map(|[a, b]| (a.clone(), b.clone())).collect();
        let order = FinitePoset::from_relation(&names, &pairs)?;
        let index = paths.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let fragment = Fragment {
            depth: json.depth,
            width: json.width,
            seed: json.seed,
            rationals,
            nodes,
            order,
            index,
        };
        let report = fragment.check_invariants();
        if !report.passes() {
            return Err(Error::InvalidInput(report.violations.join("; ")));
        }
        Ok(fragment)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PositionJson {
    /// `a` in `a + b√2`.
    pub rational: String,
    /// `b` in `a + b√2`.
    pub sqrt2: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointJson {
    pub name: String,
    pub position: PositionJson,
    pub interval: Option<[String; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FragmentJson {
    pub depth: usize,
    pub width: usize,
    pub seed: u64,
    pub rationals: Vec<String>,
    pub points: Vec<PointJson>,
    /// Covering pairs of `⪯`.
    pub order: Vec<[String; 2]>,
}
