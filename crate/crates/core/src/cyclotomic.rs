//! The fields `Q_p(ζ_{p^n})` in the power basis `1, x, ..., x^{φ(p^n)-1}`
//! modulo the cyclotomic polynomial `Φ_{p^n}`.

use std::fmt;

use crate::error::{Error, Result};
use crate::padic::PadicScalar;
use crate::valuation::{Rational, Valuation};

/// `φ(p^n)`, with `φ(1) = 1`.
pub fn euler_phi(p: u32, n: u32) -> usize {
    if n == 0 {
        1
    } else {
        (p as usize - 1) * (p as usize).pow(n - 1)
    }
}

fn modulus(p: u32, n: u32) -> u64 {
    (p as u64).pow(n)
}

/// Generators of `(Z/p^n)^×`; a single primitive root for odd `p`.
pub fn unit_group_generators(p: u32, n: u32) -> Vec<u64> {
    let m = modulus(p, n);
    if n == 0 || m <= 2 {
        return vec![1];
    }
    if p == 2 {
        return if n == 2 { vec![m - 1] } else { vec![m - 1, 5] };
    }
    let order_is_full = |g: u64, q: u64, ord: u64| {
        let mut k = 1u64;
        let mut x = g % q;
        while x != 1 {
            x = x * g % q;
            k += 1;
        }
        k == ord
    };
    let p64 = p as u64;
    for g in 2..p64 {
        if order_is_full(g, p64, p64 - 1) {
            let q = p64 * p64;
            let mut x = 1u64;
            for _ in 0..p64 - 1 {
                x = x * g % q;
            }
            let g = if n >= 2 && x == 1 { g + p64 } else { g };
            return vec![g];
        }
    }
    unreachable!("primitive root exists")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclotomicNumber {
    p: u32,
    n: u32,
    coeffs: Vec<PadicScalar>,
}

impl CyclotomicNumber {
    pub fn zero(p: u32, n: u32) -> Self {
        CyclotomicNumber { p, n, coeffs: vec![PadicScalar::zero(p); euler_phi(p, n)] }
    }

    pub fn from_scalar(n: u32, c: PadicScalar) -> Self {
        let mut z = Self::zero(c.prime(), n);
        z.coeffs[0] = c;
        z
    }

    pub fn one(p: u32, n: u32, prec: u32) -> Self {
        Self::from_scalar(n, PadicScalar::one(p, prec))
    }

    pub fn from_coeffs(p: u32, n: u32, coeffs: Vec<PadicScalar>) -> Result<Self> {
        if coeffs.len() != euler_phi(p, n) {
            return Err(Error::InvalidInput(format!(
                "expected {} coefficients at level {n}, got {}",
                euler_phi(p, n),
                coeffs.len()
            )));
        }
        if let Some(c) = coeffs.iter().find(|c| c.prime() != p) {
            return Err(Error::PrimeMismatch(p, c.prime()));
        }
        Ok(CyclotomicNumber { p, n, coeffs })
    }

    /// `c * ζ_{p^n}^k`.
    pub fn monomial(p: u32, n: u32, k: i64, c: PadicScalar) -> Self {
        let m = modulus(p, n) as i64;
        let mut full = vec![PadicScalar::zero(p); m as usize];
        full[k.rem_euclid(m) as usize] = c;
        Self::fold(p, n, full)
    }

    /// `Σ c_k ζ_{p^n}^{e_k}` for arbitrary integer exponents.
    pub fn from_exponents(p: u32, n: u32, terms: impl IntoIterator<Item = (i64, PadicScalar)>) -> Self {
        let m = modulus(p, n) as i64;
        let mut full = vec![PadicScalar::zero(p); m as usize];
        for (e, c) in terms {
            let slot = &mut full[e.rem_euclid(m) as usize];
            *slot = &*slot + &c;
        }
        Self::fold(p, n, full)
    }

    /// `ζ_{p^n}^k` with the given relative precision on the coefficients.
    pub fn zeta_power(p: u32, n: u32, k: i64, prec: u32) -> Self {
        Self::monomial(p, n, k, PadicScalar::one(p, prec))
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    pub fn level(&self) -> u32 {
        self.n
    }

    pub fn coeffs(&self) -> &[PadicScalar] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(PadicScalar::is_zero)
    }

    pub fn is_exact_zero(&self) -> bool {
        self.coeffs.iter().all(PadicScalar::is_exact_zero)
    }

    /// Reduce a vector indexed by exponents modulo `p^n` into the power basis.
    fn fold(p: u32, n: u32, mut full: Vec<PadicScalar>) -> Self {
        let e = euler_phi(p, n);
        if n == 0 {
            let mut s = PadicScalar::zero(p);
            for c in &full {
                s = &s + c;
            }
            return CyclotomicNumber { p, n, coeffs: vec![s] };
        }
        let step = (p as usize).pow(n - 1);
        for t in e..full.len() {
            if full[t].is_exact_zero() {
                continue;
            }
            let c = std::mem::replace(&mut full[t], PadicScalar::zero(p));
            let r = t - e;
            for k in 0..(p as usize - 1) {
                let idx = k * step + r;
                full[idx] = &full[idx] - &c;
            }
        }
        full.truncate(e);
        CyclotomicNumber { p, n, coeffs: full }
    }

    fn check(&self, other: &Self) {
        assert!(self.p == other.p && self.n == other.n, "mixed cyclotomic rings");
    }

    pub fn add_ref(&self, other: &Self) -> Self {
        self.check(other);
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        CyclotomicNumber { p: self.p, n: self.n, coeffs }
    }

    pub fn sub_ref(&self, other: &Self) -> Self {
        self.check(other);
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        CyclotomicNumber { p: self.p, n: self.n, coeffs }
    }

    pub fn neg(&self) -> Self {
        CyclotomicNumber { p: self.p, n: self.n, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn scale(&self, c: &PadicScalar) -> Self {
        CyclotomicNumber { p: self.p, n: self.n, coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    pub fn mul_ref(&self, other: &Self) -> Self {
        self.check(other);
        let m = modulus(self.p, self.n) as usize;
        let mut full = vec![PadicScalar::zero(self.p); m];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_exact_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_exact_zero() {
                    continue;
                }
                let k = (i + j) % m;
                full[k] = &full[k] + &(a * b);
            }
        }
        Self::fold(self.p, self.n, full)
    }

    /// Multiply by `ζ_{p^n}^k`.
    pub fn mul_zeta_power(&self, k: i64) -> Self {
        let m = modulus(self.p, self.n) as i64;
        let mut full = vec![PadicScalar::zero(self.p); m as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            full[(i as i64 + k).rem_euclid(m) as usize] = c.clone();
        }
        Self::fold(self.p, self.n, full)
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let prec = self.coeffs.iter().filter_map(PadicScalar::rel_prec).max().unwrap_or(1);
        let mut acc = Self::one(self.p, self.n, prec);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_ref(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_ref(&base);
            }
        }
        acc
    }

    /// The automorphism `ζ ↦ ζ^c`.
    pub fn galois_apply(&self, c: i64) -> Result<Self> {
        if c.rem_euclid(self.p as i64) == 0 {
            return Err(Error::InvalidAutomorphism(c));
        }
        let m = modulus(self.p, self.n) as i64;
        let mut full = vec![PadicScalar::zero(self.p); m as usize];
        for (i, a) in self.coeffs.iter().enumerate() {
            full[(c * i as i64).rem_euclid(m) as usize] = a.clone();
        }
        Ok(Self::fold(self.p, self.n, full))
    }

    fn conjugates_except_identity(&self) -> Self {
        let m = modulus(self.p, self.n) as i64;
        let prec = self.coeffs.iter().filter_map(PadicScalar::rel_prec).max().unwrap_or(1);
        let mut acc = Self::one(self.p, self.n, prec);
        for c in 2..m.max(2) {
            if c % self.p as i64 != 0 {
                acc = acc.mul_ref(&self.galois_apply(c).expect("unit"));
            }
        }
        acc
    }

    /// Norm down to `Q_p`.
    pub fn norm(&self) -> PadicScalar {
        self.mul_ref(&self.conjugates_except_identity()).coeffs[0].clone()
    }

    pub fn inv(&self) -> Result<Self> {
        let rest = self.conjugates_except_identity();
        let nm = self.mul_ref(&rest).coeffs[0].clone();
        if nm.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(rest.scale(&nm.inv()?))
    }

    /// Image under `Q_p(ζ_{p^m}) ⊂ Q_p(ζ_{p^n})`, `ζ_{p^m} = ζ_{p^n}^{p^{n-m}}`.
    pub fn include(&self, n: u32) -> Self {
        assert!(n >= self.n, "inclusion must go up");
        let step = if self.n == 0 { 0 } else { (self.p as usize).pow(n - self.n) };
        let mut out = Self::zero(self.p, n);
        for (i, c) in self.coeffs.iter().enumerate() {
            out.coeffs[i * step] = c.clone();
        }
        out
    }

    /// Inverse of [`include`](Self::include) when every other slot vanishes.
    pub fn descend(&self, m: u32) -> Option<Self> {
        assert!(m <= self.n);
        let step = if m == 0 { usize::MAX } else { (self.p as usize).pow(self.n - m) };
        let mut out = Self::zero(self.p, m);
        for (i, c) in self.coeffs.iter().enumerate() {
            if i == 0 {
                out.coeffs[0] = c.clone();
            } else if m > 0 && i % step == 0 {
                out.coeffs[i / step] = c.clone();
            } else if !c.is_zero() {
                return None;
            }
        }
        Some(out)
    }

    /// Minimum `ord_p` of the coordinates; a lower bound for `cyc_ord`.
    pub fn coeff_ord_min(&self) -> Valuation {
        self.coeffs.iter().map(PadicScalar::ord).min().unwrap_or(Valuation::Infinite)
    }

    /// The valuation extending `ord_p`, so `ord(ζ_{p^n} - 1) = 1/φ(p^n)`.
    pub fn cyc_ord(&self) -> Result<Valuation> {
        let p = self.p;
        if self.is_exact_zero() {
            return Ok(Valuation::Infinite);
        }
        let v0 = self.coeffs.iter().filter_map(PadicScalar::val).min();
        let Some(v0) = v0 else {
            return Err(Error::PrecisionExhausted("cyclotomic element is zero at working precision".into()));
        };
        if self.coeffs.iter().any(|c| !c.ord_is_exact() && c.ord() < Valuation::int(v0)) {
            return Err(Error::PrecisionExhausted("coefficient precision below minimal valuation".into()));
        }
        if self.n == 0 {
            return Ok(Valuation::int(v0));
        }
        let e = euler_phi(p, self.n);
        let block = (p as usize).pow(self.n - 1);
        let q_poly: Vec<i64> = (0..e).map(|t| (p as usize - 1 - t / block) as i64).collect();
        let mut w: Vec<PadicScalar> = self.coeffs.iter().map(|c| c.shift(-v0)).collect();
        for k in 0..e {
            let mut q = vec![PadicScalar::zero(p); e];
            let mut carry = PadicScalar::zero(p);
            for i in (1..e).rev() {
                carry = &carry + &w[i];
                q[i - 1] = carry.clone();
            }
            let at_one = &carry + &w[0];
            match at_one.ord() {
                o if o >= Valuation::int(1) => {}
                _ if at_one.ord_is_exact() => {
                    return Ok(Valuation::int(v0) + Valuation::Finite(Rational::new(k as i128, e as i128)));
                }
                _ => return Err(Error::PrecisionExhausted("cannot decide divisibility by ζ - 1".into())),
            }
            let r = at_one.shift(-1);
            for (t, qc) in q.iter_mut().enumerate() {
                *qc = &*qc - &r.mul_i64(q_poly[t]);
            }
            w = q;
        }
        unreachable!("an element with a unit coordinate is not divisible by p")
    }

    /// `true` when every coordinate of `self - other` vanishes mod `p^abs`.
    pub fn agrees_with(&self, other: &Self, abs: i64) -> bool {
        self.sub_ref(other).coeffs.iter().all(|c| c.ord() >= Valuation::int(abs))
    }

    pub fn eq_at_precision(&self, other: &Self) -> bool {
        self.sub_ref(other).is_zero()
    }

    /// Evaluate `Σ a_i X^i` at `X = self`.
    pub fn eval_poly(&self, coeffs: &[PadicScalar]) -> Self {
        let mut acc = Self::zero(self.p, self.n);
        for c in coeffs.iter().rev() {
            acc = acc.mul_ref(self);
            acc.coeffs[0] = &acc.coeffs[0] + c;
        }
        acc
    }
}

impl fmt::Display for CyclotomicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_exact_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})ζ^{i}")?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}
