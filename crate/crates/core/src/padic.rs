//! Elements of `Q_p` known to finite relative precision.
//!
//! A nonzero scalar is stored as `p^val * unit` with `unit` a residue modulo
//! `p^prec` prime to `p`. Cancellation in a sum lowers the tracked precision
//! and, when every tracked digit cancels, yields an approximate zero that only
//! remembers its absolute precision.

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::valuation::Valuation;

thread_local! {
    static POWERS: RefCell<HashMap<(u32, u32), BigUint>> = RefCell::new(HashMap::new());
}

/// `p^k`, memoized per thread.
pub fn p_power(p: u32, k: u32) -> BigUint {
    POWERS.with(|cache| {
        cache
            .borrow_mut()
            .entry((p, k))
            .or_insert_with(|| BigUint::from(p).pow(k))
            .clone()
    })
}

/// Splits a nonzero integer as `p^v * w` with `p ∤ w`.
pub fn split_p(p: u32, n: &BigInt) -> (u32, BigInt) {
    debug_assert!(!n.is_zero());
    let pb = BigInt::from(p);
    let mut v = 0;
    let mut w = n.clone();
    loop {
        let (q, r) = w.div_rem(&pb);
        if !r.is_zero() {
            break;
        }
        w = q;
        v += 1;
    }
    (v, w)
}

fn ord_p_uint(p: u32, n: &BigUint) -> u32 {
    let pb = BigUint::from(p);
    let mut v = 0;
    let mut w = n.clone();
    while !w.is_zero() {
        let (q, r) = w.div_rem(&pb);
        if !r.is_zero() {
            break;
        }
        w = q;
        v += 1;
    }
    v
}

/// `p`-adic valuation of a nonzero machine integer.
pub fn ord_p_i64(p: u32, n: i64) -> u32 {
    assert!(n != 0, "ord_p of zero");
    let mut n = n.unsigned_abs();
    let mut v = 0;
    while n.is_multiple_of(p as u64) {
        n /= p as u64;
        v += 1;
    }
    v
}

fn mod_inverse(a: &BigUint, m: &BigUint) -> BigUint {
    let a = BigInt::from_biguint(Sign::Plus, a.clone());
    let m = BigInt::from_biguint(Sign::Plus, m.clone());
    let e = a.extended_gcd(&m);
    debug_assert!(e.gcd.is_one());
    e.x.mod_floor(&m).to_biguint().expect("nonnegative")
}

fn reduce_signed(n: &BigInt, m: &BigUint) -> BigUint {
    let m = BigInt::from_biguint(Sign::Plus, m.clone());
    n.mod_floor(&m).to_biguint().expect("nonnegative")
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Repr {
    ExactZero,
    /// Zero modulo `p^abs`.
    ApproxZero(i64),
    Unit { val: i64, unit: BigUint, prec: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PadicScalar {
    p: u32,
    repr: Repr,
}

impl PadicScalar {
    pub fn zero(p: u32) -> Self {
        PadicScalar { p, repr: Repr::ExactZero }
    }

    /// A value only known to be divisible by `p^abs`.
    pub fn approx_zero(p: u32, abs: i64) -> Self {
        PadicScalar { p, repr: Repr::ApproxZero(abs) }
    }

    pub fn one(p: u32, prec: u32) -> Self {
        Self::from_i64(p, 1, prec)
    }

    pub fn from_i64(p: u32, n: i64, prec: u32) -> Self {
        Self::from_bigint(p, &BigInt::from(n), prec)
    }

    /// Integer `n` with relative precision `prec`; the integer `0` is exact.
    pub fn from_bigint(p: u32, n: &BigInt, prec: u32) -> Self {
        assert!(prec >= 1, "relative precision must be at least 1");
        if n.is_zero() {
            return Self::zero(p);
        }
        let (v, w) = split_p(p, n);
        let modulus = p_power(p, prec);
        PadicScalar {
            p,
            repr: Repr::Unit { val: v as i64, unit: reduce_signed(&w, &modulus), prec },
        }
    }

    pub fn from_ratio(p: u32, num: &BigInt, den: &BigInt, prec: u32) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Self::zero(p));
        }
        let a = Self::from_bigint(p, num, prec);
        let b = Self::from_bigint(p, den, prec);
        a.div(&b)
    }

    pub fn from_ratio_i64(p: u32, num: i64, den: i64, prec: u32) -> Result<Self> {
        Self::from_ratio(p, &BigInt::from(num), &BigInt::from(den), prec)
    }

    /// `p^val * unit` where `unit` must be prime to `p`.
    pub fn from_parts(p: u32, val: i64, unit: &BigUint, prec: u32) -> Result<Self> {
        if prec == 0 {
            return Err(Error::InvalidInput("relative precision must be at least 1".into()));
        }
        let r = unit % BigUint::from(p);
        if r.is_zero() {
            return Err(Error::InvalidInput(format!("unit {unit} is divisible by {p}")));
        }
        Ok(PadicScalar {
            p,
            repr: Repr::Unit { val, unit: unit % p_power(p, prec), prec },
        })
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    pub fn is_exact_zero(&self) -> bool {
        matches!(self.repr, Repr::ExactZero)
    }

    /// True when the value is zero at its tracked precision.
    pub fn is_zero(&self) -> bool {
        !matches!(self.repr, Repr::Unit { .. })
    }

    /// Valuation of a known-nonzero scalar, `+∞` for an exact zero, and the
    /// absolute precision (a lower bound) for an approximate zero.
    pub fn ord(&self) -> Valuation {
        match &self.repr {
            Repr::ExactZero => Valuation::Infinite,
            Repr::ApproxZero(a) => Valuation::int(*a),
            Repr::Unit { val, .. } => Valuation::int(*val),
        }
    }

    /// `true` when `ord()` is the exact valuation rather than a lower bound.
    pub fn ord_is_exact(&self) -> bool {
        !matches!(self.repr, Repr::ApproxZero(_))
    }

    pub fn val(&self) -> Option<i64> {
        match &self.repr {
            Repr::Unit { val, .. } => Some(*val),
            _ => None,
        }
    }

    pub fn unit(&self) -> Option<&BigUint> {
        match &self.repr {
            Repr::Unit { unit, .. } => Some(unit),
            _ => None,
        }
    }

    pub fn rel_prec(&self) -> Option<u32> {
        match &self.repr {
            Repr::Unit { prec, .. } => Some(*prec),
            _ => None,
        }
    }

    /// The value is known modulo `p^abs_prec`; `None` means exact.
    pub fn abs_prec(&self) -> Option<i64> {
        match &self.repr {
            Repr::ExactZero => None,
            Repr::ApproxZero(a) => Some(*a),
            Repr::Unit { val, prec, .. } => Some(val + *prec as i64),
        }
    }

    /// Forget digits beyond absolute precision `abs`.
    pub fn truncate_abs(&self, abs: i64) -> Self {
        match &self.repr {
            Repr::ExactZero => Self::approx_zero(self.p, abs),
            Repr::ApproxZero(a) => Self::approx_zero(self.p, (*a).min(abs)),
            Repr::Unit { val, unit, prec } => {
                if abs <= *val {
                    Self::approx_zero(self.p, abs)
                } else {
                    let np = ((abs - val) as u32).min(*prec);
                    PadicScalar {
                        p: self.p,
                        repr: Repr::Unit { val: *val, unit: unit % p_power(self.p, np), prec: np },
                    }
                }
            }
        }
    }

    /// Cap the relative precision at `prec`.
    pub fn truncate_rel(&self, prec: u32) -> Self {
        match &self.repr {
            Repr::Unit { val, unit, prec: old } if prec < *old => PadicScalar {
                p: self.p,
                repr: Repr::Unit { val: *val, unit: unit % p_power(self.p, prec.max(1)), prec: prec.max(1) },
            },
            _ => self.clone(),
        }
    }

    fn normalize(p: u32, val: i64, x: BigUint, abs: i64) -> Self {
        debug_assert!(abs > val);
        let window = (abs - val) as u32;
        let x = x % p_power(p, window);
        if x.is_zero() {
            return Self::approx_zero(p, abs);
        }
        let k = ord_p_uint(p, &x);
        let unit = x / p_power(p, k);
        PadicScalar {
            p,
            repr: Repr::Unit { val: val + k as i64, unit, prec: window - k },
        }
    }

    fn check(&self, other: &Self) {
        assert_eq!(self.p, other.p, "mixed primes in p-adic arithmetic");
    }

    pub fn add_ref(&self, other: &Self) -> Self {
        self.check(other);
        let p = self.p;
        match (&self.repr, &other.repr) {
            (Repr::ExactZero, _) => other.clone(),
            (_, Repr::ExactZero) => self.clone(),
            (Repr::ApproxZero(a), Repr::ApproxZero(b)) => Self::approx_zero(p, (*a).min(*b)),
            (Repr::ApproxZero(a), Repr::Unit { .. }) => other.truncate_abs(*a),
            (Repr::Unit { .. }, Repr::ApproxZero(b)) => self.truncate_abs(*b),
            (
                Repr::Unit { val: va, unit: ua, prec: na },
                Repr::Unit { val: vb, unit: ub, prec: nb },
            ) => {
                let v = (*va).min(*vb);
                let abs = (va + *na as i64).min(vb + *nb as i64);
                let x = ua * p_power(p, (va - v) as u32) + ub * p_power(p, (vb - v) as u32);
                Self::normalize(p, v, x, abs)
            }
        }
    }

    pub fn neg_ref(&self) -> Self {
        match &self.repr {
            Repr::Unit { val, unit, prec } => PadicScalar {
                p: self.p,
                repr: Repr::Unit { val: *val, unit: p_power(self.p, *prec) - unit, prec: *prec },
            },
            _ => self.clone(),
        }
    }

    pub fn sub_ref(&self, other: &Self) -> Self {
        self.add_ref(&other.neg_ref())
    }

    pub fn mul_ref(&self, other: &Self) -> Self {
        self.check(other);
        let p = self.p;
        match (&self.repr, &other.repr) {
            (Repr::ExactZero, _) | (_, Repr::ExactZero) => Self::zero(p),
            (Repr::ApproxZero(a), Repr::ApproxZero(b)) => Self::approx_zero(p, a + b),
            (Repr::ApproxZero(a), Repr::Unit { val, .. }) | (Repr::Unit { val, .. }, Repr::ApproxZero(a)) => {
                Self::approx_zero(p, a + val)
            }
            (
                Repr::Unit { val: va, unit: ua, prec: na },
                Repr::Unit { val: vb, unit: ub, prec: nb },
            ) => {
                let n = (*na).min(*nb);
                PadicScalar {
                    p,
                    repr: Repr::Unit { val: va + vb, unit: (ua * ub) % p_power(p, n), prec: n },
                }
            }
        }
    }

    /// Multiply by the exact integer `p^v * unit`, `unit` prime to `p`.
    pub fn mul_factored(&self, v: u32, unit: &BigInt) -> Self {
        match &self.repr {
            Repr::ExactZero => self.clone(),
            Repr::ApproxZero(a) => Self::approx_zero(self.p, a + v as i64),
            Repr::Unit { val, unit: u, prec } => {
                let m = p_power(self.p, *prec);
                let w = reduce_signed(unit, &m);
                PadicScalar {
                    p: self.p,
                    repr: Repr::Unit { val: val + v as i64, unit: (u * w) % m, prec: *prec },
                }
            }
        }
    }

    /// Multiply by an exact integer.
    pub fn mul_int(&self, n: &BigInt) -> Self {
        if n.is_zero() {
            return Self::zero(self.p);
        }
        let (v, w) = split_p(self.p, n);
        self.mul_factored(v, &w)
    }

    pub fn mul_i64(&self, n: i64) -> Self {
        self.mul_int(&BigInt::from(n))
    }

    /// Multiply by `p^k` (any sign of `k`); exact.
    pub fn shift(&self, k: i64) -> Self {
        match &self.repr {
            Repr::ExactZero => self.clone(),
            Repr::ApproxZero(a) => Self::approx_zero(self.p, a + k),
            Repr::Unit { val, unit, prec } => PadicScalar {
                p: self.p,
                repr: Repr::Unit { val: val + k, unit: unit.clone(), prec: *prec },
            },
        }
    }

    pub fn inv(&self) -> Result<Self> {
        match &self.repr {
            Repr::Unit { val, unit, prec } => Ok(PadicScalar {
                p: self.p,
                repr: Repr::Unit { val: -val, unit: mod_inverse(unit, &p_power(self.p, *prec)), prec: *prec },
            }),
            _ => Err(Error::DivisionByZero),
        }
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul_ref(&other.inv()?))
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        if e < 0 {
            return self.inv()?.pow(-e);
        }
        Ok(match &self.repr {
            _ if e == 0 => Self::one(self.p, self.rel_prec().unwrap_or(1)),
            Repr::ExactZero => self.clone(),
            Repr::ApproxZero(a) => Self::approx_zero(self.p, a * e),
            Repr::Unit { val, unit, prec } => {
                let m = p_power(self.p, *prec);
                PadicScalar {
                    p: self.p,
                    repr: Repr::Unit { val: val * e, unit: unit.modpow(&BigUint::from(e as u64), &m), prec: *prec },
                }
            }
        })
    }

    /// `true` when `self - other` vanishes modulo `p^abs`.
    pub fn agrees_with(&self, other: &Self, abs: i64) -> bool {
        self.sub_ref(other).ord() >= Valuation::int(abs)
    }

    /// `true` when `self - other` is zero at the tracked precision.
    pub fn eq_at_precision(&self, other: &Self) -> bool {
        self.sub_ref(other).is_zero()
    }

    /// Unit residue in the symmetric range `(-p^N/2, p^N/2]`.
    pub fn signed_unit(&self) -> Option<BigInt> {
        match &self.repr {
            Repr::Unit { unit, prec, .. } => {
                let m = p_power(self.p, *prec);
                let u = BigInt::from_biguint(Sign::Plus, unit.clone());
                if unit * 2u32 > m {
                    Some(u - BigInt::from_biguint(Sign::Plus, m))
                } else {
                    Some(u)
                }
            }
            _ => None,
        }
    }

    /// Residue of an integral scalar modulo `p^k`, if the value is known there.
    pub fn residue_mod(&self, k: u32) -> Option<BigUint> {
        let m = p_power(self.p, k);
        match &self.repr {
            Repr::ExactZero => Some(BigUint::zero()),
            Repr::ApproxZero(a) => (*a >= k as i64).then(BigUint::zero),
            Repr::Unit { val, unit, prec } => {
                if *val < 0 || val + (*prec as i64) < k as i64 {
                    None
                } else if *val >= k as i64 {
                    Some(BigUint::zero())
                } else {
                    Some((unit * p_power(self.p, *val as u32)) % m)
                }
            }
        }
    }

    pub fn is_integral(&self) -> bool {
        self.ord() >= Valuation::int(0)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $inner:ident) => {
        impl $tr<&PadicScalar> for &PadicScalar {
            type Output = PadicScalar;
            fn $method(self, rhs: &PadicScalar) -> PadicScalar {
                self.$inner(rhs)
            }
        }
        impl $tr<PadicScalar> for PadicScalar {
            type Output = PadicScalar;
            fn $method(self, rhs: PadicScalar) -> PadicScalar {
                (&self).$inner(&rhs)
            }
        }
        impl $tr<&PadicScalar> for PadicScalar {
            type Output = PadicScalar;
            fn $method(self, rhs: &PadicScalar) -> PadicScalar {
                (&self).$inner(rhs)
            }
        }
    };
}

forward_binop!(Add, add, add_ref);
forward_binop!(Sub, sub, sub_ref);
forward_binop!(Mul, mul, mul_ref);

impl Neg for &PadicScalar {
    type Output = PadicScalar;
    fn neg(self) -> PadicScalar {
        self.neg_ref()
    }
}

impl Neg for PadicScalar {
    type Output = PadicScalar;
    fn neg(self) -> PadicScalar {
        self.neg_ref()
    }
}

/// Division panics on zero divisors; use [`PadicScalar::div`] for a `Result`.
impl Div<&PadicScalar> for &PadicScalar {
    type Output = PadicScalar;
    fn div(self, rhs: &PadicScalar) -> PadicScalar {
        PadicScalar::div(self, rhs).expect("division by zero")
    }
}

impl fmt::Display for PadicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::ExactZero => write!(f, "0"),
            Repr::ApproxZero(a) => write!(f, "O({}^{})", self.p, a),
            Repr::Unit { val, unit, prec } => {
                write!(f, "{}*{}^{} + O({}^{})", unit, self.p, val, self.p, val + *prec as i64)
            }
        }
    }
}
