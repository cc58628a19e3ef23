//! Truncated power series of logarithmic order `h` and their valuations.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::constants::constants;
use crate::error::{Error, Result};
use crate::padic::PadicScalar;
use crate::valuation::{Rational, Valuation};

/// Smallest `j` with `p^j > i`.
pub fn ell(p: u32, i: u64) -> u32 {
    let mut j = 0;
    let mut pj: u128 = 1;
    while pj <= i as u128 {
        pj *= p as u128;
        j += 1;
    }
    j
}

/// Lower bound for `ord(a_i) + h ℓ(i)` over the untracked indices `i > D`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TailClass {
    Unknown,
    /// `Certified(Infinite)` means the tail is identically zero.
    Certified(Valuation),
}

impl TailClass {
    pub fn zero() -> Self {
        TailClass::Certified(Valuation::Infinite)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, TailClass::Certified(Valuation::Infinite))
    }

    pub fn bound(&self) -> Option<Valuation> {
        match self {
            TailClass::Unknown => None,
            TailClass::Certified(b) => Some(*b),
        }
    }

    fn meet(&self, other: &TailClass) -> TailClass {
        match (self, other) {
            (TailClass::Certified(a), TailClass::Certified(b)) => TailClass::Certified((*a).min(*b)),
            _ => TailClass::Unknown,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Certainty {
    /// The value is the true valuation.
    Exact,
    /// The true valuation is at least the value.
    LowerBound,
    /// No tail certificate: the value only describes the tracked head.
    HeadOnly,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VhReport {
    pub value: Valuation,
    pub certainty: Certainty,
}

impl VhReport {
    /// A certified lower bound, if there is one.
    pub fn lower_bound(&self) -> Option<Valuation> {
        (self.certainty != Certainty::HeadOnly).then_some(self.value)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VhPrimeReport {
    pub value: Valuation,
    /// Lower bound for every `ν > nu_max`.
    pub beyond_lower_bound: Valuation,
    /// `true` when no larger `nu_max` can lower `value`.
    pub stable: bool,
    pub certainty: Certainty,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogSeries {
    p: u32,
    h: u32,
    coeffs: Vec<PadicScalar>,
    tail: TailClass,
}

impl LogSeries {
    pub fn new(p: u32, h: u32, coeffs: Vec<PadicScalar>, tail: TailClass) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidInput("a series needs at least one coefficient".into()));
        }
        if let Some(c) = coeffs.iter().find(|c| c.prime() != p) {
            return Err(Error::PrimeMismatch(p, c.prime()));
        }
        Ok(LogSeries { p, h, coeffs, tail })
    }

    /// A polynomial, i.e. a series with a certified zero tail.
    pub fn polynomial(p: u32, h: u32, coeffs: Vec<PadicScalar>) -> Self {
        let coeffs = if coeffs.is_empty() { vec![PadicScalar::zero(p)] } else { coeffs };
        LogSeries { p, h, coeffs, tail: TailClass::zero() }
    }

    pub fn zero(p: u32, h: u32, degree: usize) -> Self {
        Self::polynomial(p, h, vec![PadicScalar::zero(p); degree + 1])
    }

    pub fn constant(p: u32, h: u32, c: PadicScalar) -> Self {
        Self::polynomial(p, h, vec![c])
    }

    pub fn from_i64s(p: u32, h: u32, coeffs: &[i64], prec: u32) -> Self {
        Self::polynomial(p, h, coeffs.iter().map(|&c| PadicScalar::from_i64(p, c, prec)).collect())
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    pub fn order(&self) -> u32 {
        self.h
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[PadicScalar] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Option<&PadicScalar> {
        self.coeffs.get(i)
    }

    pub fn tail(&self) -> &TailClass {
        &self.tail
    }

    pub fn with_tail(mut self, tail: TailClass) -> Self {
        self.tail = tail;
        self
    }

    pub fn is_polynomial(&self) -> bool {
        self.tail.is_zero()
    }

    /// Re-tag with another order, adjusting the tail certificate.
    pub fn retag(&self, h: u32) -> Self {
        let tail = match &self.tail {
            TailClass::Certified(Valuation::Infinite) => TailClass::zero(),
            TailClass::Certified(b) if h >= self.h => {
                let shift = (h - self.h) as i64 * ell(self.p, self.coeffs.len() as u64) as i64;
                TailClass::Certified(*b + shift)
            }
            _ => TailClass::Unknown,
        };
        LogSeries { p: self.p, h, coeffs: self.coeffs.clone(), tail }
    }

    /// Keep coefficients up to `d`; dropped coefficients join the tail certificate.
    pub fn truncate(&self, d: usize) -> Self {
        if d >= self.degree() {
            return self.clone();
        }
        let dropped = (d + 1..=self.degree())
            .map(|i| self.weighted_ord(i))
            .fold(Valuation::Infinite, Valuation::min);
        let tail = self.tail.meet(&TailClass::Certified(dropped));
        LogSeries { p: self.p, h: self.h, coeffs: self.coeffs[..=d].to_vec(), tail }
    }

    /// Extend a polynomial with explicit zero coefficients up to degree `d`.
    pub fn extend_zeros(&self, d: usize) -> Result<Self> {
        if !self.tail.is_zero() {
            return Err(Error::InvalidInput("only a series with a zero tail can be extended".into()));
        }
        let mut coeffs = self.coeffs.clone();
        if d > self.degree() {
            coeffs.resize(d + 1, PadicScalar::zero(self.p));
        }
        Ok(LogSeries { p: self.p, h: self.h, coeffs, tail: TailClass::zero() })
    }

    fn weighted_ord(&self, i: usize) -> Valuation {
        self.coeffs[i].ord() + (self.h as i64 * ell(self.p, i as u64) as i64)
    }

    /// `v_h` with a certificate.
    pub fn v_h(&self) -> VhReport {
        let mut head = Valuation::Infinite;
        let mut attained_exactly = false;
        for i in 0..self.coeffs.len() {
            let w = self.weighted_ord(i);
            let exact = self.coeffs[i].ord_is_exact() && !self.coeffs[i].is_exact_zero();
            if w < head {
                head = w;
                attained_exactly = exact;
            } else if w == head && exact {
                attained_exactly = true;
            }
        }
        if head.is_infinite() {
            attained_exactly = true;
        }
        match &self.tail {
            TailClass::Unknown => VhReport { value: head, certainty: Certainty::HeadOnly },
            TailClass::Certified(b) if *b < head => VhReport { value: *b, certainty: Certainty::LowerBound },
            TailClass::Certified(_) => VhReport {
                value: head,
                certainty: if attained_exactly { Certainty::Exact } else { Certainty::LowerBound },
            },
        }
    }

    /// Inf over `1 ≤ ν ≤ nu_max` (all `ν` when `h = 0`) of `min_i(ord(a_i) + i p^{-ν}) + hν`.
    pub fn v_h_prime(&self, nu_max: u32) -> Result<VhPrimeReport> {
        if nu_max == 0 {
            return Err(Error::InvalidInput("nu_max must be at least 1".into()));
        }
        let p = self.p as i128;
        let h = self.h as i128;
        let d = self.degree() as i128;
        let mut best = Valuation::Infinite;
        let mut exact_head = true;
        for nu in 1..=nu_max {
            let pn = p.pow(nu);
            let mut head = Valuation::Infinite;
            for (i, c) in self.coeffs.iter().enumerate() {
                let w = c.ord() + Valuation::Finite(Rational::new(i as i128, pn));
                head = head.min(w);
            }
            let tail = match self.tail.bound() {
                Some(Valuation::Infinite) | None => Valuation::Infinite,
                Some(b) => b + Valuation::Finite(tail_offset(p, h, d, pn)),
            };
            let g = head.min(tail) + (h as i64 * nu as i64);
            if g < best {
                best = g;
            }
        }
        if self.coeffs.iter().any(|c| !c.ord_is_exact()) {
            exact_head = false;
        }
        let min_ord = self.coeffs.iter().map(PadicScalar::ord).fold(Valuation::Infinite, Valuation::min);
        let mut beyond = min_ord + (h as i64 * (nu_max as i64 + 1));
        if let Some(b) = self.tail.bound() {
            if !b.is_infinite() {
                beyond = beyond.min(b + constants(self.p, self.h).c1_floor());
            }
        }
        if h == 0 {
            best = best.min(beyond);
        }
        let certainty = match &self.tail {
            TailClass::Unknown => Certainty::HeadOnly,
            t if t.is_zero() && exact_head => Certainty::Exact,
            _ => Certainty::LowerBound,
        };
        Ok(VhPrimeReport { value: best, beyond_lower_bound: beyond, stable: best <= beyond, certainty })
    }

    /// Whether the series is certified to lie in the unit ball `H_h^+`.
    pub fn in_unit_ball(&self) -> bool {
        self.v_h().lower_bound().is_some_and(|v| v >= Valuation::int(0))
    }

    fn binary(&self, other: &Self, f: impl Fn(&PadicScalar, &PadicScalar) -> PadicScalar) -> Self {
        assert_eq!(self.p, other.p, "mixed primes");
        let h = self.h.max(other.h);
        let (a, b) = (self.retag(h), other.retag(h));
        let d = a.degree().min(b.degree());
        let mut tail = a.truncate(d).tail.meet(&b.truncate(d).tail);
        if a.is_polynomial() && b.is_polynomial() {
            tail = TailClass::zero();
        }
        let n = a.degree().max(b.degree());
        let zero = PadicScalar::zero(self.p);
        let upto = if tail.is_zero() { n } else { d };
        let coeffs = (0..=upto)
            .map(|i| f(a.coeffs.get(i).unwrap_or(&zero), b.coeffs.get(i).unwrap_or(&zero)))
            .collect();
        LogSeries { p: self.p, h, coeffs, tail }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.binary(other, |x, y| x + y)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.binary(other, |x, y| x - y)
    }

    pub fn neg(&self) -> Self {
        self.scale(&PadicScalar::from_i64(self.p, -1, 1 << 20))
    }

    /// Multiply by a scalar; the tail bound moves by `ord(c)`.
    pub fn scale(&self, c: &PadicScalar) -> Self {
        let tail = match &self.tail {
            TailClass::Certified(b) if !c.is_exact_zero() => TailClass::Certified(*b + c.ord()),
            TailClass::Certified(_) => TailClass::zero(),
            TailClass::Unknown if c.is_exact_zero() => TailClass::zero(),
            TailClass::Unknown => TailClass::Unknown,
        };
        LogSeries { p: self.p, h: self.h, coeffs: self.coeffs.iter().map(|a| a * c).collect(), tail }
    }

    /// `Σ a_i ζ^i` style evaluation is in the family module; this evaluates at a scalar.
    pub fn eval_scalar(&self, x: &PadicScalar) -> PadicScalar {
        let mut acc = PadicScalar::zero(self.p);
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }
}

fn tail_offset(p: i128, h: i128, d: i128, pn: i128) -> Rational {
    let k0 = ell(p as u32, (d + 1) as u64) as i128;
    let mut best = Rational::new(d + 1, pn) - Rational::from(h * k0);
    let mut k = k0 + 1;
    loop {
        let start = p.pow(k as u32 - 1);
        let f = Rational::new(start, pn) - Rational::from(h * k);
        if f < best {
            best = f;
        }
        if start * (p - 1) > h * pn {
            return best;
        }
        k += 1;
    }
}

/// Cauchy product to degree `min(D_F, D_G)`, tagged with order `h_F + h_G`.
pub fn ls_mul(f: &LogSeries, g: &LogSeries) -> LogSeries {
    assert_eq!(f.p, g.p, "mixed primes");
    let d = f.degree().min(g.degree());
    let mut coeffs = vec![PadicScalar::zero(f.p); d + 1];
    for (i, a) in f.coeffs.iter().take(d + 1).enumerate() {
        if a.is_exact_zero() {
            continue;
        }
        for (j, b) in g.coeffs.iter().take(d + 1 - i).enumerate() {
            if !b.is_exact_zero() {
                coeffs[i + j] = &coeffs[i + j] + &(a * b);
            }
        }
    }
    let tail = match (f.v_h().lower_bound(), g.v_h().lower_bound()) {
        (Some(a), Some(b)) => TailClass::Certified(a + b),
        _ => TailClass::Unknown,
    };
    LogSeries { p: f.p, h: f.h + g.h, coeffs, tail }
}

/// Full product of two polynomials, keeping every coefficient.
pub fn poly_mul(f: &LogSeries, g: &LogSeries) -> Result<LogSeries> {
    if !f.is_polynomial() || !g.is_polynomial() {
        return Err(Error::InvalidInput("full product needs polynomial inputs".into()));
    }
    let f = f.extend_zeros(f.degree() + g.degree())?;
    let g = g.extend_zeros(f.degree())?;
    let mut prod = ls_mul(&f, &g);
    prod.tail = TailClass::zero();
    Ok(prod)
}

/// Exact rational coefficients of `log(1+X)^d` up to degree `n`.
pub fn log_power_rational(d: u32, n: usize) -> Vec<BigRational> {
    let mut prev: Vec<BigRational> = (0..=n).map(|k| if k == 0 { BigRational::one() } else { BigRational::zero() }).collect();
    for e in 1..=d {
        let mut cur = vec![BigRational::zero(); n + 1];
        for k in 0..n {
            let rhs = &prev[k] * BigInt::from(e) - &cur[k] * BigInt::from(k);
            cur[k + 1] = rhs / BigInt::from(k + 1);
        }
        prev = cur;
    }
    prev
}

/// `log(1+X)^d` to degree `n`, tagged with order `h ≥ d`.
pub fn log_power(p: u32, d: u32, n: usize, h: u32, prec: u32) -> Result<LogSeries> {
    if d > h {
        return Err(Error::OrderTooSmall { power: d, order: h });
    }
    let coeffs = if d == 1 {
        (0..=n)
            .map(|k| {
                if k == 0 {
                    Ok(PadicScalar::zero(p))
                } else {
                    let sign = if k % 2 == 1 { 1 } else { -1 };
                    PadicScalar::from_ratio_i64(p, sign, k as i64, prec)
                }
            })
            .collect::<Result<Vec<_>>>()?
    } else {
        log_power_rational(d, n)
            .iter()
            .map(|r| {
                if r.is_zero() {
                    Ok(PadicScalar::zero(p))
                } else {
                    PadicScalar::from_ratio(p, r.numer(), r.denom(), prec)
                }
            })
            .collect::<Result<Vec<_>>>()?
    };
    let tail = if d == 0 {
        TailClass::zero()
    } else {
        let shift = (h - d) as i64 * ell(p, n as u64 + 1) as i64;
        TailClass::Certified(Valuation::int(d as i64 + shift))
    };
    LogSeries::new(p, h, coeffs, tail)
}
