//! Points of the cut space: the empty cut, the full cut, the two jumps at each
//! rational, and gaps.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};

use super::rational::{format_rational, in_open_unit, parse_rational, rat, Rational, Surd};
use crate::constructions::IndexPath;
use crate::error::{Error, Result};

/// A gap localized by strictly nested rational bounds around an exact
/// irrational position.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GapPoint {
    pub path: IndexPath,
    pub position: Surd,
    /// Outermost first; each bound strictly contains the next.
    pub bounds: Vec<(Rational, Rational)>,
}

impl GapPoint {
    pub fn tightest(&self) -> Option<&(Rational, Rational)> {
        self.bounds.last()
    }

    /// Appends the half of the tightest bound that holds the position.
    pub fn refine(&mut self) {
        let (lo, hi) = self
            .bounds
            .last()
            .cloned()
            .unwrap_or_else(|| (Rational::zero(), Rational::one()));
        let mid = (&lo + &hi) / rat(2, 1);
        let next = if self.position.cmp_rational(&mid) == Ordering::Less {
            (lo, mid)
        } else {
            (mid, hi)
        };
        self.bounds.push(next);
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CutPoint {
    Empty,
    Full,
    /// The cut `(0, q)`.
    JumpOpen(Rational),
    /// The cut `(0, q]`.
    JumpClosed(Rational),
    Gap(GapPoint),
}

/// Exact location of a cut in the cut order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Position {
    Bottom,
    Jump { at: Rational, closed: bool },
    Gap(Surd),
    Top,
}

impl Position {
    fn rank(&self) -> u8 {
        match self {
            Position::Bottom => 0,
            Position::Top => 2,
            _ => 1,
        }
    }
}

impl Ord for Position {
    fn cmp(&self, other: &Self) -> Ordering {
        use Position::*;
        match (self, other) {
            (Jump { at: p, closed: a }, Jump { at: q, closed: b }) => p.cmp(q).then(a.cmp(b)),
            (Jump { at, .. }, Gap(s)) => s.cmp_rational(at).reverse(),
            (Gap(s), Jump { at, .. }) => s.cmp_rational(at),
            (Gap(s), Gap(t)) => s.cmp(t),
            _ => self.rank().cmp(&other.rank()),
        }
    }
}

impl PartialOrd for Position {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl CutPoint {
    pub fn jump_open(q: Rational) -> Result<Self> {
        Self::check_jump(&q)?;
        Ok(CutPoint::JumpOpen(q))
    }

    pub fn jump_closed(q: Rational) -> Result<Self> {
        Self::check_jump(&q)?;
        Ok(CutPoint::JumpClosed(q))
    }

    fn check_jump(q: &Rational) -> Result<()> {
        if in_open_unit(q) {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!(
                "jump position {} is not in (0,1)",
                format_rational(q)
            )))
        }
    }

    pub fn position(&self) -> Position {
        match self {
            CutPoint::Empty => Position::Bottom,
            CutPoint::Full => Position::Top,
            CutPoint::JumpOpen(q) => Position::Jump { at: q.clone(), closed: false },
            CutPoint::JumpClosed(q) => Position::Jump { at: q.clone(), closed: true },
            CutPoint::Gap(g) => Position::Gap(g.position.clone()),
        }
    }

    /// Comparison in the inclusion order of cuts.
    pub fn cut_cmp(&self, other: &CutPoint) -> Ordering {
        self.position().cmp(&other.position())
    }

    pub fn as_gap(&self) -> Option<&GapPoint> {
        match self {
            CutPoint::Gap(g) => Some(g),
            _ => None,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CutPoint::Empty => "empty",
            CutPoint::Full => "full",
            CutPoint::JumpOpen(_) => "jump-open",
            CutPoint::JumpClosed(_) => "jump-closed",
            CutPoint::Gap(_) => "gap",
        }
    }
}

impl fmt::Display for CutPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CutPoint::Empty => f.write_str("empty"),
            CutPoint::Full => f.write_str("full"),
            CutPoint::JumpOpen(q) => write!(f, "(0,{})", format_rational(q)),
            CutPoint::JumpClosed(q) => write!(f, "(0,{}]", format_rational(q)),
            CutPoint::Gap(g) => f.write_str(&g.path.label("x")),
        }
    }
}

/// Parses `empty`, `full`, `(0,p/q)` and `(0,p/q]`. Gaps need a fragment to
/// resolve and are rejected here.
impl FromStr for CutPoint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        match t {
            "empty" => return Ok(CutPoint::Empty),
            "full" => return Ok(CutPoint::Full),
            _ => {}
        }
        let bad = || Error::InvalidInput(format!("`{s}` is not a cut point"));
        let body = t.strip_prefix("(0,").ok_or_else(bad)?;
        if let Some(q) = body.strip_suffix(')') {
            CutPoint::jump_open(parse_rational(q)?)
        } else if let Some(q) = body.strip_suffix(']') {
            CutPoint::jump_closed(parse_rational(q)?)
        } else {
            Err(bad())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gap(a: Rational, b: Rational) -> CutPoint {
        CutPoint::Gap(GapPoint {
            path: IndexPath::root(),
            position: Surd::new(a, b),
            bounds: vec![(rat(0, 1), rat(1, 1))],
        })
    }

    #[test]
    fn display_round_trip() {
        for s in ["empty", "full", "(0,1/2)", "(0,2/3]"] {
            assert_eq!(s.parse::<CutPoint>().unwrap().to_string(), s);
        }
        assert!("(0,3/2)".parse::<CutPoint>().is_err());
        assert!("x[0]".parse::<CutPoint>().is_err());
    }

    #[test]
    fn jump_pair_is_adjacent() {
        let half = rat(1, 2);
        let open = CutPoint::JumpOpen(half.clone());
        let closed = CutPoint::JumpClosed(half);
        assert_eq!(open.cut_cmp(&closed), Ordering::Less);
        // √2 - 1 ≈ 0.414 sits below both jumps at 1/2 and above those at 2/5
        let g = gap(rat(-1, 1), rat(1, 1));
        assert_eq!(g.cut_cmp(&open), Ordering::Less);
        assert_eq!(g.cut_cmp(&CutPoint::JumpClosed(rat(2, 5))), Ordering::Greater);
        assert_eq!(CutPoint::Empty.cut_cmp(&g), Ordering::Less);
        assert_eq!(CutPoint::Full.cut_cmp(&closed), Ordering::Greater);
    }

    #[test]
    fn refinement_halves_and_keeps_position() {
        let CutPoint::Gap(mut g) = gap(rat(-1, 1), rat(1, 1)) else { unreachable!() };
        for _ in 0..10 {
            g.refine();
        }
        let (lo, hi) = g.tightest().unwrap().clone();
        assert_eq!(&hi - &lo, rat(1, 1024));
        assert_eq!(g.position.cmp_rational(&lo), Ordering::Greater);
        assert_eq!(g.position.cmp_rational(&hi), Ordering::Less);
    }
}
