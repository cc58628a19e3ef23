//! Finite-level measures on `G_cyc`, the polynomials `ω_n^{[j]}` and `Ω_n^{[l,l′]}`,
//! and division modulo `Ω`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::binomial;

use crate::error::{Error, Result};
use crate::logseries::{ell, LogSeries, TailClass};
use crate::padic::{ord_p_i64, PadicScalar};
use crate::valuation::Valuation;

/// The topological generator `u = 1 + p` of `1 + pZ_p`.
pub fn u_generator(p: u32) -> i64 {
    1 + p as i64
}

fn modulus(p: u32, n: u32) -> u64 {
    (p as u64).pow(n)
}

/// Residues in `[1, p^n)` prime to `p`.
pub fn units(p: u32, n: u32) -> Vec<u64> {
    (1..modulus(p, n)).filter(|a| a % p as u64 != 0).collect()
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = (r as u128 * b as u128 % m as u128) as u64;
        }
        b = (b as u128 * b as u128 % m as u128) as u64;
        e >>= 1;
    }
    r
}

/// Write `a = ω(a) u^s (mod p^n)`; returns `(a mod p, s)` with `0 ≤ s < p^{n-1}`.
pub fn teichmuller_split(p: u32, n: u32, a: u64) -> (u64, u64) {
    let m = modulus(p, n);
    let b = a % p as u64;
    let teich = pow_mod(a, modulus(p, n - 1), m);
    let teich_inv = pow_mod(teich, (m / p as u64) * (p as u64 - 1) - 1, m);
    let one_unit = (a as u128 * teich_inv as u128 % m as u128) as u64;
    let u = u_generator(p) as u64 % m;
    let mut x = 1 % m;
    for s in 0..modulus(p, n - 1) {
        if x == one_unit {
            return (b, s);
        }
        x = (x as u128 * u as u128 % m as u128) as u64;
    }
    unreachable!("u generates 1 + pZ/p^n")
}

/// Inverse of [`teichmuller_split`].
pub fn teichmuller_join(p: u32, n: u32, b: u64, s: u64) -> u64 {
    let m = modulus(p, n);
    let teich = pow_mod(b, modulus(p, n - 1), m);
    (teich as u128 * pow_mod(u_generator(p) as u64, s, m) as u128 % m as u128) as u64
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycMeasure {
    p: u32,
    n: u32,
    values: BTreeMap<u64, PadicScalar>,
}

impl CycMeasure {
    pub fn new(p: u32, n: u32, values: BTreeMap<u64, PadicScalar>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("measures live at level n ≥ 1".into()));
        }
        let keys: Vec<u64> = values.keys().copied().collect();
        if keys != units(p, n) {
            return Err(Error::InvalidInput(format!("measure keys must be the units modulo {}", modulus(p, n))));
        }
        if let Some(c) = values.values().find(|c| c.prime() != p) {
            return Err(Error::PrimeMismatch(p, c.prime()));
        }
        Ok(CycMeasure { p, n, values })
    }

    pub fn from_fn(p: u32, n: u32, mut f: impl FnMut(u64) -> PadicScalar) -> Self {
        let values = units(p, n).into_iter().map(|a| (a, f(a))).collect();
        CycMeasure { p, n, values }
    }

    pub fn zero(p: u32, n: u32) -> Self {
        Self::from_fn(p, n, |_| PadicScalar::zero(p))
    }

    /// The point mass at `a`.
    pub fn dirac(p: u32, n: u32, a: u64, prec: u32) -> Self {
        let a = a % modulus(p, n);
        Self::from_fn(p, n, |b| if b == a { PadicScalar::one(p, prec) } else { PadicScalar::zero(p) })
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    pub fn level(&self) -> u32 {
        self.n
    }

    pub fn values(&self) -> &BTreeMap<u64, PadicScalar> {
        &self.values
    }

    pub fn get(&self, a: u64) -> Option<&PadicScalar> {
        self.values.get(&(a % modulus(self.p, self.n)))
    }

    pub fn total_mass(&self) -> PadicScalar {
        self.values.values().fold(PadicScalar::zero(self.p), |acc, v| &acc + v)
    }

    pub fn is_zero(&self) -> bool {
        self.values.values().all(PadicScalar::is_zero)
    }

    /// `(χ^j μ)(a) = ã^j μ(a)`.
    pub fn twist(&self, j: i64) -> Result<Self> {
        let values = self
            .values
            .iter()
            .map(|(&a, v)| {
                let prec = v.rel_prec().unwrap_or(1);
                let w = if v.is_exact_zero() { v.clone() } else { v * &PadicScalar::from_i64(self.p, a as i64, prec).pow(j)? };
                Ok((a, w))
            })
            .collect::<Result<_>>()?;
        Ok(CycMeasure { p: self.p, n: self.n, values })
    }

    pub fn add(&self, other: &Self) -> Self {
        assert!(self.p == other.p && self.n == other.n, "mixed measures");
        let values = self.values.iter().map(|(a, v)| (*a, v + &other.values[a])).collect();
        CycMeasure { p: self.p, n: self.n, values }
    }

    pub fn scale(&self, c: &PadicScalar) -> Self {
        CycMeasure { p: self.p, n: self.n, values: self.values.iter().map(|(a, v)| (*a, v * c)).collect() }
    }
}

/// `Σ_a μ(a)(1+X)^a` to degree `d`, tagged with order `h`.
pub fn embed_measure(mu: &CycMeasure, d: usize, h: u32) -> LogSeries {
    let p = mu.p;
    let top = modulus(p, mu.n) as usize - 1;
    let full = d.max(top);
    let mut coeffs = vec![PadicScalar::zero(p); full + 1];
    for (&a, v) in &mu.values {
        if v.is_exact_zero() {
            continue;
        }
        for (k, slot) in coeffs.iter_mut().enumerate().take(a as usize + 1) {
            *slot = &*slot + &v.mul_int(&binomial(BigInt::from(a), BigInt::from(k)));
        }
    }
    LogSeries::polynomial(p, h, coeffs).truncate(d)
}

/// Coefficients of `ω_n^{[j]}(Y) = (u^{-j}(1+Y))^{p^n} - 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OmegaPoly {
    pub p: u32,
    pub n: u32,
    pub j: i64,
    pub coeffs: Vec<PadicScalar>,
}

impl OmegaPoly {
    pub fn as_series(&self, h: u32) -> LogSeries {
        LogSeries::polynomial(self.p, h, self.coeffs.clone())
    }
}

pub fn omega_poly(p: u32, n: u32, j: i64, prec: u32) -> OmegaPoly {
    let big = modulus(p, n);
    let scale = PadicScalar::from_i64(p, u_generator(p), prec)
        .pow(-j * big as i64)
        .expect("u is a unit");
    let mut coeffs: Vec<PadicScalar> = (0..=big)
        .map(|k| scale.mul_int(&binomial(BigInt::from(big), BigInt::from(k))))
        .collect();
    coeffs[0] = if j == 0 { PadicScalar::zero(p) } else { &coeffs[0] - &PadicScalar::one(p, prec) };
    OmegaPoly { p, n, j, coeffs }
}

/// `Ω_n^{[l,l′]} = Π_{j=l}^{l′} ω_n^{[j]}`.
pub fn omega_product(p: u32, n: u32, l: i64, l2: i64, prec: u32) -> Result<Vec<PadicScalar>> {
    if l > l2 {
        return Err(Error::InvalidInput(format!("empty window [{l}, {l2}]")));
    }
    let mut acc = vec![PadicScalar::one(p, prec)];
    for j in l..=l2 {
        let w = omega_poly(p, n, j, prec).coeffs;
        let mut next = vec![PadicScalar::zero(p); acc.len() + w.len() - 1];
        for (a, x) in acc.iter().enumerate() {
            for (b, y) in w.iter().enumerate() {
                next[a + b] = &next[a + b] + &(x * y);
            }
        }
        acc = next;
    }
    Ok(acc)
}

/// The three-case closed form for `v_h(ω_n^{[j]})` as usually stated.
pub fn omega_vh_three_case(p: u32, n: u32, j: i64, h: u32) -> Valuation {
    if h == 0 {
        return Valuation::int(0);
    }
    let oj = if j == 0 { i64::MAX } else { ord_p_i64(p, j) as i64 };
    if oj <= h as i64 {
        Valuation::int(n as i64 + oj)
    } else {
        Valuation::int(n as i64 + h as i64)
    }
}

/// `v_h(ω_n^{[j]})` from `ord(u^m - 1) = 1 + ord(m)`: `min{n + 1 + ord(j), n + h}` for `h ≥ 1`.
pub fn omega_vh_sharp(p: u32, n: u32, j: i64, h: u32) -> Valuation {
    if h == 0 {
        return Valuation::int(0);
    }
    let top = Valuation::int(n as i64 + h as i64);
    if j == 0 {
        return top;
    }
    top.min(Valuation::int(n as i64 + 1 + ord_p_i64(p, j) as i64))
}

/// Remainder of `F` modulo `Ω_n^{[l,l′]}`, of degree below `deg Ω`.
pub fn reduce_mod_omega(f: &LogSeries, n: u32, l: i64, l2: i64, prec: u32) -> Result<LogSeries> {
    let p = f.prime();
    if matches!(f.tail(), TailClass::Unknown) {
        return Err(Error::PrecisionExhausted("the untracked tail of the dividend is not certified".into()));
    }
    let omega = omega_product(p, n, l, l2, prec)?;
    let d = omega.len() - 1;
    let lead_inv = omega[d].inv()?;
    let monic: Vec<PadicScalar> = omega.iter().map(|c| c * &lead_inv).collect();
    let mut r: Vec<PadicScalar> = f.coeffs().to_vec();
    if r.len() < d {
        r.resize(d, PadicScalar::zero(p));
    }
    for top in (d..r.len()).rev() {
        let c = std::mem::replace(&mut r[top], PadicScalar::zero(p));
        if c.is_exact_zero() {
            continue;
        }
        for (i, m) in monic.iter().enumerate().take(d) {
            let idx = top - d + i;
            r[idx] = &r[idx] - &(&c * m);
        }
    }
    r.truncate(d);
    if let Some(cap) = reduction_tail_cap(f, d) {
        r = r.iter().map(|c| c.truncate_abs(cap)).collect();
    }
    Ok(LogSeries::polynomial(p, f.order(), r))
}

/// Every non-leading coefficient of the monic `Ω` is divisible by `p`, so `Y^m`
/// reduces to a remainder divisible by `p^{⌊m/d⌋}`.
fn reduction_tail_cap(f: &LogSeries, d: usize) -> Option<i64> {
    let b = match f.tail() {
        TailClass::Certified(Valuation::Finite(b)) => b.floor().to_integer() as i64,
        _ => return None,
    };
    let (p, h) = (f.prime() as u64, f.order() as i64);
    let g = |m: u64| b - h * ell(p as u32, m) as i64 + (m / d as u64) as i64;
    let first = f.degree() as u64 + 1;
    let mut best = g(first);
    let mut k = ell(p as u32, first);
    loop {
        let start = p.pow(k);
        best = best.min(g(start));
        if start * (p - 1) >= d as u64 * (h as u64 + 1) {
            return Some(best);
        }
        k += 1;
    }
}

/// Split `μ` along `(Z/p)^×` and write each branch as a polynomial in `Y = γ₀ - 1`.
pub fn measure_to_gamma(mu: &CycMeasure) -> BTreeMap<u64, LogSeries> {
    let p = mu.p;
    let deg = modulus(p, mu.n - 1) as usize;
    let mut out = BTreeMap::new();
    for b in 1..p as u64 {
        let mut coeffs = vec![PadicScalar::zero(p); deg];
        for s in 0..deg as u64 {
            let a = teichmuller_join(p, mu.n, b, s);
            let v = &mu.values[&a];
            if v.is_exact_zero() {
                continue;
            }
            for (k, slot) in coeffs.iter_mut().enumerate().take(s as usize + 1) {
                *slot = &*slot + &v.mul_int(&binomial(BigInt::from(s), BigInt::from(k)));
            }
        }
        out.insert(b, LogSeries::polynomial(p, 0, coeffs));
    }
    out
}

/// Inverse of [`measure_to_gamma`].
pub fn gamma_to_measure(p: u32, n: u32, branches: &BTreeMap<u64, LogSeries>) -> Result<CycMeasure> {
    if n == 0 {
        return Err(Error::InvalidInput("measures live at level n ≥ 1".into()));
    }
    let deg = modulus(p, n - 1) as usize;
    let mut values = BTreeMap::new();
    for b in 1..p as u64 {
        let g = branches.get(&b).ok_or_else(|| Error::InvalidInput(format!("missing branch {b}")))?;
        if g.prime() != p {
            return Err(Error::PrimeMismatch(p, g.prime()));
        }
        if !g.is_polynomial() || g.coeffs().iter().skip(deg).any(|c| !c.is_zero()) {
            return Err(Error::InvalidInput(format!("branch {b} must be a polynomial of degree below {deg}")));
        }
        for s in 0..deg {
            let mut c = PadicScalar::zero(p);
            for (k, gk) in g.coeffs().iter().enumerate().take(deg).skip(s) {
                let sign = if (k - s) % 2 == 0 { 1 } else { -1 };
                c = &c + &gk.mul_int(&(binomial(BigInt::from(k), BigInt::from(s)) * sign));
            }
            values.insert(teichmuller_join(p, n, b, s as u64), c);
        }
    }
    CycMeasure::new(p, n, values)
}
