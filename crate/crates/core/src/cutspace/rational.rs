//! Exact rationals and quadratic surds `a + b√2`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Accepts `p/q` or a bare integer `p`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::InvalidInput(format!("`{s}` is not a fraction p/q"));
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(n, d))
}

/// Always `p/q`, including integers (`0/1`, `1/1`).
pub fn format_rational(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Comma-separated list of fractions.
pub fn parse_rational_list(s: &str) -> Result<Vec<Rational>> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(parse_rational)
        .collect()
}

pub fn in_open_unit(q: &Rational) -> bool {
    q.is_positive() && *q < Rational::one()
}

/// The first `count` rationals of `(0,1)` in Stern–Brocot breadth-first
/// order: 1/2, 1/3, 2/3, 1/4, 2/5, 3/5, 3/4, ...
pub fn stern_brocot(count: usize) -> Vec<Rational> {
    let mut row: Vec<(i64, i64)> = vec![(0, 1), (1, 1)];
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let mut next = Vec::with_capacity(row.len() * 2);
        for pair in row.windows(2) {
            let ((a, b), (c, d)) = (pair[0], pair[1]);
            next.push((a, b));
            next.push((a + c, b + d));
            out.push(rat(a + c, b + d));
        }
        next.push(*row.last().unwrap());
        row = next;
    }
    out.truncate(count);
    out
}

/// `a + b√2` with rational `a`, `b`. Irrational exactly when `b != 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Surd {
    pub a: Rational,
    pub b: Rational,
}

impl Surd {
    pub fn new(a: Rational, b: Rational) -> Self {
        Surd { a, b }
    }

    pub fn from_rational(a: Rational) -> Self {
        Surd { a, b: Rational::zero() }
    }

    pub fn is_irrational(&self) -> bool {
        !self.b.is_zero()
    }

    pub fn sign(&self) -> Ordering {
        let sa = self.a.cmp(&Rational::zero());
        let sb = self.b.cmp(&Rational::zero());
        if sb == Ordering::Equal {
            return sa;
        }
        if sa == Ordering::Equal || sa == sb {
            return sb;
        }
        // opposite signs: compare a^2 with 2 b^2
        let a2 = &self.a * &self.a;
        let b2 = &self.b * &self.b * rat(2, 1);
        match a2.cmp(&b2) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => Ordering::Equal,
        }
    }

    pub fn cmp_rational(&self, q: &Rational) -> Ordering {
        Surd::new(&self.a - q, self.b.clone()).sign()
    }

    pub fn add_rational(&self, q: &Rational) -> Surd {
        Surd::new(&self.a + q, self.b.clone())
    }

    pub fn sub(&self, other: &Surd) -> Surd {
        Surd::new(&self.a - &other.a, &self.b - &other.b)
    }

    pub fn scale(&self, k: &Rational) -> Surd {
        Surd::new(&self.a * k, &self.b * k)
    }

    /// Rational `(lo, hi)` with `lo < self < hi` and `hi - lo <= tol`.
    /// For a rational surd this is `(a, a)`.
    pub fn bracket(&self, tol: &Rational) -> (Rational, Rational) {
        if self.b.is_zero() {
            return (self.a.clone(), self.a.clone());
        }
        let two = rat(2, 1);
        let (mut l, mut h) = (Rational::one(), rat(3, 2));
        let scale = self.b.abs();
        while &(&h - &l) * &scale > *tol {
            let m = (&l + &h) / &two;
            if &m * &m < two {
                l = m;
            } else {
                h = m;
            }
        }
        let (x, y) = (&self.a + &self.b * &l, &self.a + &self.b * &h);
        if x < y {
            (x, y)
        } else {
            (y, x)
        }
    }

    pub fn to_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        self.a.to_f64().unwrap_or(f64::NAN) + self.b.to_f64().unwrap_or(f64::NAN) * 2f64.sqrt()
    }
}

impl Ord for Surd {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sub(other).sign()
    }
}

impl PartialOrd for Surd {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}*sqrt2", format_rational(&self.a), format_rational(&self.b))
    }
}
