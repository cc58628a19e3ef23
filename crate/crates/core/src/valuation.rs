use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};

pub type Rational = Ratio<i128>;

/// A value in `Q ∪ {+∞}`, ordered with `+∞` on top.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Valuation {
    Finite(Rational),
    Infinite,
}

impl Valuation {
    pub fn int(v: i64) -> Self {
        Valuation::Finite(Rational::from_integer(v as i128))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Valuation::Infinite)
    }

    pub fn finite(&self) -> Option<Rational> {
        match self {
            Valuation::Finite(r) => Some(*r),
            Valuation::Infinite => None,
        }
    }

    /// Largest integer that is `<=` the value; `None` for `+∞`.
    pub fn floor(&self) -> Option<i64> {
        self.finite().map(|r| r.floor().to_integer() as i64)
    }

    pub fn ceil(&self) -> Option<i64> {
        self.finite().map(|r| r.ceil().to_integer() as i64)
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Valuation::Finite(r) => r.to_f64().unwrap_or(f64::NAN),
            Valuation::Infinite => f64::INFINITY,
        }
    }

    pub fn min(self, other: Self) -> Self {
        if self <= other {
            self
        } else {
            other
        }
    }

    /// Parses `"3"`, `"-7/2"` or `"inf"`.
    pub fn parse(s: &str) -> Option<Self> {
        let s = s.trim();
        if s == "inf" || s == "+inf" {
            return Some(Valuation::Infinite);
        }
        match s.split_once('/') {
            Some((n, d)) => {
                let n: i128 = n.trim().parse().ok()?;
                let d: i128 = d.trim().parse().ok()?;
                if d.is_zero() {
                    return None;
                }
                Some(Valuation::Finite(Rational::new(n, d)))
            }
            None => s.parse::<i128>().ok().map(|n| Valuation::Finite(n.into())),
        }
    }
}

impl From<Rational> for Valuation {
    fn from(r: Rational) -> Self {
        Valuation::Finite(r)
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Valuation::Infinite, Valuation::Infinite) => Ordering::Equal,
            (Valuation::Infinite, _) => Ordering::Greater,
            (_, Valuation::Infinite) => Ordering::Less,
            (Valuation::Finite(a), Valuation::Finite(b)) => a.cmp(b),
        }
    }
}

impl Add for Valuation {
    type Output = Valuation;
    fn add(self, rhs: Self) -> Self {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinite,
        }
    }
}

impl Add<i64> for Valuation {
    type Output = Valuation;
    fn add(self, rhs: i64) -> Self {
        self + Valuation::int(rhs)
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Infinite => write!(f, "inf"),
            Valuation::Finite(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Valuation::Finite(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}
