//! Clopen subsets of the cut space as finite unions of rational blocks.
//!
//! A block `(r, s)` with `0 <= r < s <= 1` is the set of cuts `K` with
//! `(0,r] ⊆ K ⊆ (0,s)`. The endpoint `r = 0` stands for the block reaching
//! down to the empty cut and `s = 1` for the block reaching up to the full
//! cut, so the whole space is the single block `(0, 1)`.

use std::cmp::Ordering;

use num_traits::{One, Zero};

use super::point::{CutPoint, Position};
use super::rational::{format_rational, parse_rational, Rational};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Block {
    lo: Rational,
    hi: Rational,
}

impl Block {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self> {
        if lo < Rational::zero() || hi > Rational::one() || lo >= hi {
            return Err(Error::InvalidInput(format!(
                "block ({}, {}) needs 0 <= r < s <= 1",
                format_rational(&lo),
                format_rational(&hi)
            )));
        }
        Ok(Block { lo, hi })
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn length(&self) -> Rational {
        &self.hi - &self.lo
    }

    /// Exact membership by position.
    pub fn contains_position(&self, pos: &Position) -> bool {
        match pos {
            Position::Bottom => self.lo.is_zero(),
            Position::Top => self.hi.is_one(),
            Position::Jump { at, closed: false } => self.lo < *at && *at <= self.hi,
            Position::Jump { at, closed: true } => self.lo <= *at && *at < self.hi,
            Position::Gap(s) => {
                s.cmp_rational(&self.lo) == Ordering::Greater
                    && s.cmp_rational(&self.hi) == Ordering::Less
            }
        }
    }

    /// Decides a gap strictly inside `(blo, bhi)` using only those bounds.
    pub fn decide_gap(&self, blo: &Rational, bhi: &Rational) -> Option<bool> {
        if *bhi <= self.lo || *blo >= self.hi {
            Some(false)
        } else if self.lo <= *blo && *bhi <= self.hi {
            Some(true)
        } else {
            None
        }
    }

    /// Membership as a pure rational-comparison decision. Gaps are decided
    /// from their tightest bound; a bound straddling an endpoint is an error.
    pub fn contains(&self, pt: &CutPoint) -> Result<bool> {
        match pt {
            CutPoint::Gap(g) => {
                let (lo, hi) = g
                    .tightest()
                    .ok_or_else(|| Error::UndecidableAtDepth(format!("{pt} has no bounds")))?;
                self.decide_gap(lo, hi).ok_or_else(|| {
                    Error::UndecidableAtDepth(format!(
                        "{pt} in ({}, {})",
                        format_rational(&self.lo),
                        format_rational(&self.hi)
                    ))
                })
            }
            _ => Ok(self.contains_position(&pt.position())),
        }
    }
}

/// Normalized: blocks sorted and pairwise separated (`s_i < r_{i+1}`).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ClopenSet {
    blocks: Vec<Block>,
}

/// Wire format: sorted list of `["r", "s"]` fraction pairs.
pub type ClopenJson = Vec<[String; 2]>;

impl ClopenSet {
    pub fn empty() -> Self {
        ClopenSet::default()
    }

    pub fn full() -> Self {
        ClopenSet {
            blocks: vec![Block {
                lo: Rational::zero(),
                hi: Rational::one(),
            }],
        }
    }

    pub fn block(lo: Rational, hi: Rational) -> Result<Self> {
        Ok(ClopenSet {
            blocks: vec![Block::new(lo, hi)?],
        })
    }

    pub fn from_blocks(blocks: impl IntoIterator<Item = Block>) -> Self {
        let mut blocks: Vec<Block> = blocks.into_iter().collect();
        blocks.sort();
        let mut out: Vec<Block> = Vec::with_capacity(blocks.len());
        for b in blocks {
            match out.last_mut() {
                // touching blocks share the jump pair at the seam
                Some(cur) if b.lo <= cur.hi => {
                    if b.hi > cur.hi {
                        cur.hi = b.hi;
                    }
                }
                _ => out.push(b),
            }
        }
        ClopenSet { blocks: out }
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn union(&self, other: &ClopenSet) -> ClopenSet {
        ClopenSet::from_blocks(self.blocks.iter().chain(&other.blocks).cloned())
    }

    pub fn complement(&self) -> ClopenSet {
        let mut out = Vec::with_capacity(self.blocks.len() + 1);
        let mut start = Rational::zero();
        for b in &self.blocks {
            if start < b.lo {
                out.push(Block {
                    lo: start.clone(),
                    hi: b.lo.clone(),
                });
            }
            start = b.hi.clone();
        }
        if start < Rational::one() {
            out.push(Block {
                lo: start,
                hi: Rational::one(),
            });
        }
        ClopenSet { blocks: out }
    }

    pub fn intersection(&self, other: &ClopenSet) -> ClopenSet {
        let mut out = Vec::new();
        for a in &self.blocks {
            for b in &other.blocks {
                let lo = (&a.lo).max(&b.lo).clone();
                let hi = (&a.hi).min(&b.hi).clone();
                if lo < hi {
                    out.push(Block { lo, hi });
                }
            }
        }
        ClopenSet::from_blocks(out)
    }

    pub fn is_disjoint(&self, other: &ClopenSet) -> bool {
        self.intersection(other).is_empty()
    }

    pub fn contains_position(&self, pos: &Position) -> bool {
        self.blocks.iter().any(|b| b.contains_position(pos))
    }

    /// Rational-comparison membership; see [`Block::contains`].
    pub fn contains(&self, pt: &CutPoint) -> Result<bool> {
        let mut undecided = None;
        for b in &self.blocks {
            match b.contains(pt) {
                Ok(true) => return Ok(true),
                Ok(false) => {}
                Err(e) => undecided = Some(e),
            }
        }
        undecided.map_or(Ok(false), Err)
    }

    /// Total length of the blocks in the real metric.
    pub fn measure(&self) -> Rational {
        self.blocks.iter().map(Block::length).sum()
    }

    pub fn to_json(&self) -> ClopenJson {
        self.blocks
            .iter()
            .map(|b| [format_rational(&b.lo), format_rational(&b.hi)])
            .collect()
    }

    pub fn from_json(json: &ClopenJson) -> Result<Self> {
        let blocks = json
            .iter()
            .map(|[lo, hi]| Block::new(parse_rational(lo)?, parse_rational(hi)?))
            .collect::<Result<Vec<_>>>()?;
        Ok(ClopenSet::from_blocks(blocks))
    }
}

#[cfg(test)]
mod tests {
    use super::super::point::GapPoint;
    use super::super::rational::{rat, Surd};
    use super::*;
    use crate::constructions::IndexPath;

    fn blk(a: (i64, i64), b: (i64, i64)) -> ClopenSet {
        ClopenSet::block(rat(a.0, a.1), rat(b.0, b.1)).unwrap()
    }

    #[test]
    fn jump_membership_at_block_ends() {
        let b = blk((1, 2), (3, 4));
        assert!(b.contains(&CutPoint::JumpClosed(rat(1, 2))).unwrap());
        assert!(!b.contains(&CutPoint::JumpOpen(rat(1, 2))).unwrap());
        assert!(b.contains(&CutPoint::JumpOpen(rat(3, 4))).unwrap());
        assert!(!b.contains(&CutPoint::JumpClosed(rat(3, 4))).unwrap());
        assert!(!b.contains(&CutPoint::Empty).unwrap());
        assert!(blk((0, 1), (1, 4)).contains(&CutPoint::Empty).unwrap());
        assert!(blk((1, 4), (1, 1)).contains(&CutPoint::Full).unwrap());
    }

    #[test]
    fn gap_membership_from_bounds() {
        let g = |lo: Rational, hi: Rational| {
            CutPoint::Gap(GapPoint {
                path: IndexPath::root(),
                position: Surd::new(rat(-1, 1), rat(1, 1)),
                bounds: vec![(lo, hi)],
            })
        };
        let b = blk((1, 4), (1, 3));
        assert!(b.contains(&g(rat(30, 100), rat(31, 100))).unwrap());
        assert!(!b.contains(&g(rat(40, 100), rat(42, 100))).unwrap());
        assert!(matches!(
            b.contains(&g(rat(3, 10), rat(4, 10))),
            Err(Error::UndecidableAtDepth(_))
        ));
    }

    #[test]
    fn normalization_merges_touching_blocks() {
        let u = blk((1, 4), (1, 2)).union(&blk((1, 2), (3, 4)));
        assert_eq!(u, blk((1, 4), (3, 4)));
        let v = blk((1, 2), (3, 4)).union(&blk((1, 8), (1, 4)));
        assert_eq!(v.blocks().len(), 2);
        assert_eq!(v.to_json()[0], ["1/8".to_string(), "1/4".to_string()]);
    }

    #[test]
    fn complement_partitions_probe_points() {
        let u = blk((1, 8), (1, 4)).union(&blk((1, 2), (3, 4)));
        let c = u.complement();
        assert_eq!(c.to_json().len(), 3);
        assert_eq!(c.complement(), u);
        assert_eq!(ClopenSet::full().complement(), ClopenSet::empty());
        assert_eq!(blk((0, 1), (1, 2)).complement(), blk((1, 2), (1, 1)));
        let mut probes = vec![CutPoint::Empty, CutPoint::Full];
        for q in [(1, 8), (1, 4), (1, 3), (1, 2), (3, 4), (7, 8)] {
            probes.push(CutPoint::JumpOpen(rat(q.0, q.1)));
            probes.push(CutPoint::JumpClosed(rat(q.0, q.1)));
        }
        for p in &probes {
            assert_ne!(u.contains(p).unwrap(), c.contains(p).unwrap(), "{p}");
        }
        assert!(u.is_disjoint(&c));
        assert_eq!(u.union(&c), ClopenSet::full());
    }

    #[test]
    fn json_round_trip() {
        let u = blk((1, 8), (1, 4)).union(&blk((1, 2), (1, 1)));
        assert_eq!(ClopenSet::from_json(&u.to_json()).unwrap(), u);
        assert!(ClopenSet::from_json(&vec![["1/2".into(), "1/4".into()]]).is_err());
    }
}
