//! Clopen decreasing sets separating `u` from `v` whenever `u ⋡ v`.
//!
//! The ladder:
//! 1. `u` below `v` as cuts: a block `(0, t)` between them, decreasing
//!    because `⪯` refines the cut order.
//! 2. `u` off the fragment: a block around `u` holding no fragment point.
//! 3. `v` off the fragment: the complement of such a block around `v`.
//! 4. Both in the fragment with `u` above `v` as cuts: a union of sibling
//!    intervals `X_{σ,0} ∪ ... ∪ X_{σ,b}` (decreasing for odd `|σ|`) or the
//!    complement of one (increasing for even `|σ|`), chosen by where the
//!    index paths of `u` and `v` diverge.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::clopen::ClopenSet;
use super::fragment::Fragment;
use super::point::{CutPoint, Position};
use super::rational::{rat, Rational};
use crate::constructions::IndexPath;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SeparationCase {
    CutOrderBelow,
    IsolatedSource,
    IsolatedTarget,
    TargetIsRoot,
    SourcePrefixOfTarget,
    DivergeAtSourceEnd,
    DivergeEarly,
    TargetPrefixOfSource,
    DivergeAtTargetEnd,
}

impl fmt::Display for SeparationCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).expect("unit variant");
        f.write_str(s.as_str().unwrap_or_default())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub case: SeparationCase,
    pub set: ClopenSet,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessCheck {
    pub source_inside: bool,
    pub target_outside: bool,
    pub decreasing: bool,
}

impl WitnessCheck {
    pub fn passes(&self) -> bool {
        self.source_inside && self.target_outside && self.decreasing
    }
}

/// Rational value of a position, if it has one.
fn value(p: &Position) -> Option<Rational> {
    match p {
        Position::Bottom => Some(rat(0, 1)),
        Position::Top => Some(rat(1, 1)),
        Position::Jump { at, .. } => Some(at.clone()),
        Position::Gap(_) => None,
    }
}

fn bracket_of(p: &Position, tol: &Rational) -> (Rational, Rational) {
    match (value(p), p) {
        (Some(q), _) => (q.clone(), q),
        (None, Position::Gap(s)) => s.bracket(tol),
        _ => unreachable!(),
    }
}

/// A rational strictly between the values of `a` and `b`, which must differ.
fn rational_between(a: &Position, b: &Position) -> Rational {
    let mut tol = rat(1, 256);
    loop {
        let (_, a_hi) = bracket_of(a, &tol);
        let (b_lo, _) = bracket_of(b, &tol);
        if a_hi < b_lo {
            return (a_hi + b_lo) / rat(2, 1);
        }
        tol /= rat(16, 1);
    }
}

/// A block containing the isolated cut at `p` and nothing in `avoid`.
fn isolating_block(p: &Position, avoid: &[Position]) -> Result<ClopenSet> {
    let below = avoid.iter().filter(|a| *a < p).max().cloned().unwrap_or(Position::Bottom);
    let above = avoid.iter().filter(|a| *a > p).min().cloned().unwrap_or(Position::Top);
    let (lo, hi) = match p {
        Position::Bottom => (rat(0, 1), rational_between(p, &above)),
        Position::Top => (rational_between(&below, p), rat(1, 1)),
        Position::Jump { at, closed: false } => (rational_between(&below, p), at.clone()),
        Position::Jump { at, closed: true } => (at.clone(), rational_between(p, &above)),
        Position::Gap(_) => {
            return Err(Error::SeparationFailure("gaps of the fragment are not isolated".into()))
        }
    };
    ClopenSet::block(lo, hi)
}

fn first_difference(a: &IndexPath, b: &IndexPath) -> Option<usize> {
    a.indices().iter().zip(b.indices()).position(|(x, y)| x != y)
}

struct Ladder<'a> {
    f: &'a Fragment,
}

impl Ladder<'_> {
    /// `X_{p[..len],0} ∪ ... ∪ X_{p[..len],p[len]}`.
    fn union(&self, p: &IndexPath, len: usize) -> Result<ClopenSet> {
        if p.len() <= len {
            return Err(Error::SeparationFailure(format!(
                "{} has no index at position {len}",
                p.label("x")
            )));
        }
        let bound = p.indices()[len];
        self.f
            .sibling_union(&p.prefix(len), bound)
            .ok_or_else(|| Error::SeparationFailure(format!("missing interval under {}", p.label("x"))))
    }

    /// Both points in the fragment, `u` above `v` as cuts, `u ⋡ v`.
    fn endgame(&self, tau: &IndexPath, rho: &IndexPath) -> Result<Witness> {
        use SeparationCase::*;
        if tau.is_root() {
            return Err(Error::SeparationFailure("x lies below every other fragment point".into()));
        }
        let decreasing = |case, set| Ok(Witness { case, set });
        let increasing = |case, set: ClopenSet| {
            Ok(Witness {
                case,
                set: set.complement(),
            })
        };
        if rho.is_root() {
            return decreasing(TargetIsRoot, self.union(tau, 1)?);
        }
        let (n, m) = (tau.len() - 1, rho.len() - 1);
        let diff = first_difference(tau, rho);
        if let Some(k) = diff.filter(|&k| k < n.min(m)) {
            return if k % 2 == 0 {
                decreasing(DivergeEarly, self.union(tau, k + 1)?)
            } else {
                increasing(DivergeEarly, self.union(rho, k + 1)?)
            };
        }
        if n <= m {
            match diff {
                None => increasing(SourcePrefixOfTarget, self.union(rho, n + 2)?),
                Some(_) if n % 2 == 0 => increasing(DivergeAtSourceEnd, self.union(rho, n + 2)?),
                Some(_) => increasing(DivergeAtSourceEnd, self.union(rho, n + 1)?),
            }
        } else {
            match diff {
                None => decreasing(TargetPrefixOfSource, self.union(tau, m + 2)?),
                Some(_) if m % 2 == 0 => decreasing(DivergeAtTargetEnd, self.union(tau, m + 1)?),
                Some(_) => decreasing(DivergeAtTargetEnd, self.union(tau, m + 2)?),
            }
        }
    }
}

/// A clopen set `U` meant to satisfy `u ∈ U`, `v ∉ U`, `U` decreasing.
/// Use [`verify_witness`] to confirm.
pub fn separation_witness(f: &Fragment, u: &CutPoint, v: &CutPoint) -> Result<Witness> {
    let (iu, iv) = (f.locate(u)?, f.locate(v)?);
    let below_or_equal = match (iu, iv) {
        (Some(a), Some(b)) => f.order().le(b, a),
        (None, None) => u == v,
        _ => false,
    };
    if below_or_equal {
        return Err(Error::NotSeparablePrecondition {
            u: u.to_string(),
            v: v.to_string(),
        });
    }
    let pos = |i: Option<usize>, p: &CutPoint| i.map_or_else(|| p.position(), |i| f.position(i));
    let (pu, pv) = (pos(iu, u), pos(iv, v));

    if pu < pv {
        let t = match (&pu, &pv) {
            (Position::Jump { at: p, closed: false }, Position::Jump { at: q, closed: true }) if p == q => {
                p.clone()
            }
            _ => rational_between(&pu, &pv),
        };
        return Ok(Witness {
            case: SeparationCase::CutOrderBelow,
            set: ClopenSet::block(rat(0, 1), t)?,
        });
    }
    let fragment_positions: Vec<Position> = (0..f.len()).map(|i| f.position(i)).collect();
    match (iu, iv) {
        (None, _) => {
            let mut avoid = fragment_positions;
            avoid.push(pv);
            Ok(Witness {
                case: SeparationCase::IsolatedSource,
                set: isolating_block(&pu, &avoid)?,
            })
        }
        (Some(_), None) => Ok(Witness {
            case: SeparationCase::IsolatedTarget,
            set: isolating_block(&pv, &fragment_positions)?.complement(),
        }),
        (Some(a), Some(b)) => {
            let nodes = f.nodes();
            Ladder { f }.endgame(&nodes[a].path, &nodes[b].path)
        }
    }
}

fn member(f: &Fragment, idx: Option<usize>, p: &CutPoint, set: &ClopenSet) -> bool {
    match idx {
        Some(i) => f.contains(i, set),
        None => set.contains_position(&p.position()),
    }
}

pub fn verify_witness(f: &Fragment, u: &CutPoint, v: &CutPoint, set: &ClopenSet) -> Result<WitnessCheck> {
    Ok(WitnessCheck {
        source_inside: member(f, f.locate(u)?, u, set),
        target_outside: !member(f, f.locate(v)?, v, set),
        decreasing: f.is_decreasing(set),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepFailure {
    pub u: String,
    pub v: String,
    pub case: Option<SeparationCase>,
    pub reason: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepReport {
    pub fragment_points: usize,
    pub probes: usize,
    pub ordered_pairs: usize,
    /// Pairs with `u ⋡ v`.
    pub separable_pairs: usize,
    pub verified: usize,
    pub cases: BTreeMap<SeparationCase, usize>,
    pub failures: Vec<SweepFailure>,
}

impl SweepReport {
    pub fn passes(&self) -> bool {
        self.failures.is_empty() && self.verified == self.separable_pairs
    }
}

/// All ordered pairs of fragment points and probes: a verified witness for
/// every `u ⋡ v`, and the precondition error for every `u ⪰ v`.
pub fn sweep(f: &Fragment) -> Result<SweepReport> {
    let mut points = f.points();
    let probes = f.probes();
    points.extend(probes.iter().cloned());
    let locs = points.iter().map(|p| f.locate(p)).collect::<Result<Vec<_>>>()?;
    let mut report = SweepReport {
        fragment_points: f.len(),
        probes: probes.len(),
        ..Default::default()
    };
    for (a, u) in points.iter().enumerate() {
        for (b, v) in points.iter().enumerate() {
            if a == b {
                continue;
            }
            report.ordered_pairs += 1;
            let comparable = matches!((locs[a], locs[b]), (Some(x), Some(y)) if f.order().le(y, x));
            let fail = |case, reason: String| SweepFailure {
                u: u.to_string(),
                v: v.to_string(),
                case,
                reason,
            };
            match separation_witness(f, u, v) {
                Err(Error::NotSeparablePrecondition { .. }) if comparable => {}
                Err(e) => report.failures.push(fail(None, e.to_string())),
                Ok(w) if comparable => {
                    report.failures.push(fail(Some(w.case), "witness for a comparable pair".into()))
                }
                Ok(w) => {
                    report.separable_pairs += 1;
                    let check = WitnessCheck {
                        source_inside: member(f, locs[a], u, &w.set),
                        target_outside: !member(f, locs[b], v, &w.set),
                        decreasing: f.is_decreasing(&w.set),
                    };
                    *report.cases.entry(w.case).or_default() += 1;
                    if check.passes() {
                        report.verified += 1;
                    } else {
                        report.failures.push(fail(Some(w.case), format!("{check:?}")));
                    }
                }
            }
        }
    }
    Ok(report)
}
