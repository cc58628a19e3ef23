//! Frobenius `φ_H`, its left inverse `ψ`, the derivation `(1+X)d/dX` and the
//! linear forms `Δ_j`.

use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::Zero;

use crate::constants::constants;
use crate::error::{Error, Result};
use crate::logseries::{ell, LogSeries, TailClass};
use crate::padic::{p_power, split_p, PadicScalar};
use crate::valuation::{Rational, Valuation};

#[derive(Clone, Debug)]
enum Factored {
    Zero,
    Pu(u32, BigInt),
}

/// `entries[i][k]` is the coefficient of `X^k` in `((1+X)^p - 1)^i`, with
/// the unit part reduced modulo `p^cap`.
struct OmegaTable {
    rows: usize,
    cols: usize,
    cap: u32,
    entries: Vec<Vec<Factored>>,
}

thread_local! {
    static TABLES: RefCell<HashMap<u32, Rc<OmegaTable>>> = RefCell::new(HashMap::new());
}

fn max_rel_prec<'a>(coeffs: impl IntoIterator<Item = &'a PadicScalar>) -> u32 {
    coeffs.into_iter().filter_map(PadicScalar::rel_prec).max().unwrap_or(1)
}

fn omega_table(p: u32, rows: usize, cols: usize, need: u32) -> Rc<OmegaTable> {
    TABLES.with(|t| {
        let mut t = t.borrow_mut();
        if let Some(tab) = t.get(&p) {
            if tab.rows >= rows && tab.cols >= cols && tab.cap >= need {
                return tab.clone();
            }
        }
        let (rows, cols, cap) = match t.get(&p) {
            Some(tab) => (rows.max(tab.rows), cols.max(tab.cols), need.max(tab.cap)),
            None => (rows, cols, need.max(64)),
        };
        let modulus = BigInt::from(p_power(p, cap));
        let omega: Vec<BigInt> = (0..=p as usize)
            .map(|j| if j == 0 { BigInt::zero() } else { binomial(BigInt::from(p), BigInt::from(j)) })
            .collect();
        let mut row = vec![BigInt::zero(); cols + 1];
        row[0] = BigInt::from(1);
        let mut entries = Vec::with_capacity(rows + 1);
        for _ in 0..=rows {
            entries.push(
                row.iter()
                    .map(|c| {
                        if c.is_zero() {
                            Factored::Zero
                        } else {
                            let (v, u) = split_p(p, c);
                            Factored::Pu(v, u % &modulus)
                        }
                    })
                    .collect(),
            );
            let mut next = vec![BigInt::zero(); cols + 1];
            for (k, c) in row.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                for (j, w) in omega.iter().enumerate().skip(1) {
                    if k + j <= cols {
                        next[k + j] += c * w;
                    }
                }
            }
            row = next;
        }
        let tab = Rc::new(OmegaTable { rows, cols, cap, entries });
        t.insert(p, tab.clone());
        tab
    })
}

/// `F((1+X)^p - 1)` to `out_degree`. Terms whose valuation is at least the
/// final absolute precision of their slot are skipped.
fn substitute(f: &LogSeries, out_degree: usize) -> Vec<PadicScalar> {
    let p = f.prime();
    let d = f.degree();
    let tab = omega_table(p, d, out_degree, max_rel_prec(f.coeffs()));
    let mut floor = vec![None::<i64>; out_degree + 1];
    for (i, a) in f.coeffs().iter().enumerate() {
        let Some(abs) = a.abs_prec() else { continue };
        for (k, slot) in floor.iter_mut().enumerate().skip(i) {
            if let Factored::Pu(v, _) = &tab.entries[i][k] {
                let here = abs + *v as i64;
                *slot = Some(slot.map_or(here, |s| s.min(here)));
            }
        }
    }
    let mut out = vec![PadicScalar::zero(p); out_degree + 1];
    for (i, a) in f.coeffs().iter().enumerate() {
        let Some(val) = a.val() else { continue };
        for (k, slot) in out.iter_mut().enumerate().skip(i) {
            if let Factored::Pu(v, u) = &tab.entries[i][k] {
                if val + (*v as i64) < floor[k].expect("set above") {
                    *slot = &*slot + &a.mul_factored(*v, u);
                }
            }
        }
    }
    for (slot, fl) in out.iter_mut().zip(floor) {
        if let Some(fl) = fl {
            *slot = slot.truncate_abs(fl);
        }
    }
    out
}

/// `φ_H(F) = F((1+X)^p - 1)` truncated at the degree of `F`.
pub fn phi_h(f: &LogSeries) -> LogSeries {
    let coeffs = substitute(f, f.degree());
    let loss = constants(f.prime(), f.order()).phi_loss();
    let tail = match f.v_h().lower_bound() {
        Some(Valuation::Infinite) if f.degree() == 0 => TailClass::zero(),
        Some(b) => TailClass::Certified(b + loss),
        None => TailClass::Unknown,
    };
    LogSeries::new(f.prime(), f.order(), coeffs, tail).expect("same prime")
}

/// `φ_H` of a polynomial of degree `D`, expanded to degree `pD`.
pub fn phi_h_full(f: &LogSeries) -> Result<LogSeries> {
    if !f.is_polynomial() {
        return Err(Error::InvalidInput("full expansion needs a polynomial".into()));
    }
    let coeffs = substitute(f, f.degree() * f.prime() as usize);
    Ok(LogSeries::polynomial(f.prime(), f.order(), coeffs))
}

/// Solve `G = F((1+X)^p - 1)` for `F`, lowest degree first.
///
/// For a polynomial `G` of degree `E` the result has degree `⌊E/p⌋` and every
/// higher recursion step must vanish. Otherwise coefficients up to `E` are
/// returned with an unknown tail.
pub fn phi_h_inverse(g: &LogSeries) -> Result<LogSeries> {
    let p = g.prime();
    let e = g.degree();
    let tab = omega_table(p, e, e, max_rel_prec(g.coeffs()));
    let mut b: Vec<PadicScalar> = Vec::with_capacity(e + 1);
    for k in 0..=e {
        let mut acc = g.coeffs()[k].clone();
        for (i, bi) in b.iter().enumerate() {
            if let Factored::Pu(v, u) = &tab.entries[i][k] {
                acc = &acc - &bi.mul_factored(*v, u);
            }
        }
        b.push(acc.shift(-(k as i64)));
    }
    if g.is_polynomial() {
        let keep = e / p as usize;
        if let Some((k, _)) = b.iter().enumerate().skip(keep + 1).find(|(_, c)| !c.is_zero()) {
            return Err(Error::NotInImage(format!("coefficient {k} of the preimage is nonzero")));
        }
        b.truncate(keep + 1);
        Ok(LogSeries::polynomial(p, g.order(), b))
    } else {
        LogSeries::new(p, g.order(), b, TailClass::Unknown)
    }
}

/// Rows of Pascal's triangle modulo `p^cap`, factored as `p^v u`.
struct PascalRows {
    p: u32,
    modulus: BigInt,
    row: Vec<BigInt>,
}

impl PascalRows {
    fn new(p: u32, cap: u32) -> Self {
        PascalRows { p, modulus: BigInt::from(p_power(p, cap)), row: Vec::new() }
    }

    /// Advance to the next row and return it.
    fn next_row(&mut self) -> Vec<Factored> {
        let mut next = Vec::with_capacity(self.row.len() + 1);
        next.push(BigInt::from(1));
        for w in self.row.windows(2) {
            next.push((&w[0] + &w[1]) % &self.modulus);
        }
        if !self.row.is_empty() {
            next.push(BigInt::from(1));
        }
        self.row = next;
        self.row
            .iter()
            .map(|c| if c.is_zero() { Factored::Zero } else { let (v, u) = split_p(self.p, c); Factored::Pu(v, u) })
            .collect()
    }
}

fn mul_entry(a: &PadicScalar, e: &Factored, negate: bool, cap: u32) -> PadicScalar {
    match e {
        Factored::Pu(v, u) => {
            let x = a.mul_factored(*v, u);
            if negate { -x } else { x }
        }
        Factored::Zero => PadicScalar::approx_zero(a.prime(), a.ord().floor().unwrap_or(0) + cap as i64),
    }
}

/// Level-1 trace `(1/p) Σ_{ζ^p=1} F(ζ(1+X) - 1)`, coefficientwise.
///
/// In the basis `(1+X)^n` the trace keeps exactly the terms with `p | n`.
pub fn trace_level_one(f: &LogSeries) -> Result<LogSeries> {
    let p = f.prime();
    let d = f.degree();
    let caps = tail_caps(f)?;
    let slack = ell(p, d as u64 + 1) + 2;
    let cap = max_rel_prec(f.coeffs()) + slack;
    let mut basis = vec![PadicScalar::zero(p); d + 1];
    let mut rows = PascalRows::new(p, cap);
    for (k, a) in f.coeffs().iter().enumerate() {
        let row = rows.next_row();
        if a.is_exact_zero() {
            continue;
        }
        for (n, e) in row.iter().enumerate() {
            basis[n] = &basis[n] + &mul_entry(a, e, (k - n) % 2 == 1, cap);
        }
    }
    let mut out = vec![PadicScalar::zero(p); d + 1];
    let mut rows = PascalRows::new(p, cap);
    for (n, c) in basis.iter().enumerate() {
        let row = rows.next_row();
        if n % p as usize != 0 || c.is_exact_zero() {
            continue;
        }
        for (k, e) in row.iter().enumerate() {
            out[k] = &out[k] + &mul_entry(c, e, false, cap);
        }
    }
    if let Some(caps) = caps {
        for (gk, cap) in out.iter_mut().zip(caps) {
            if let Some(cap) = cap {
                *gk = gk.truncate_abs(cap);
            }
        }
    }
    let tail = if f.is_polynomial() { TailClass::zero() } else { TailClass::Unknown };
    LogSeries::new(p, f.order(), out, tail)
}

/// Absolute-precision caps for the trace coefficients coming from a certified tail.
fn tail_caps(f: &LogSeries) -> Result<Option<Vec<Option<i64>>>> {
    let b = match f.tail() {
        TailClass::Unknown => {
            return Err(Error::PrecisionExhausted("the untracked tail of the input is not certified".into()))
        }
        TailClass::Certified(Valuation::Infinite) => return Ok(None),
        TailClass::Certified(Valuation::Finite(b)) => *b,
    };
    let p = f.prime() as i128;
    let h = f.order() as i128;
    let d = f.degree() as i128;
    // contribution of a_m, m > D, to coefficient k: ord ≥ b - hℓ(m) + (m-k)/(p-1) - 1
    let at = |m: i128, j: i128, k: i128| b - Rational::from(h * j) + Rational::new(m - k, p - 1) - Rational::from(1);
    let caps = (0..=d)
        .map(|k| {
            let j0 = ell(p as u32, (d + 1) as u64) as i128;
            let mut best = at(d + 1, j0, k);
            let mut j = j0;
            loop {
                let start = p.pow(j as u32);
                j += 1;
                best = best.min(at(start, j, k));
                if start >= h {
                    break;
                }
            }
            Some(best.floor().to_integer() as i64)
        })
        .collect();
    Ok(Some(caps))
}

/// `ψ(F)`: the level-1 trace followed by [`phi_h_inverse`]; degree `⌊D/p⌋`.
pub fn psi(f: &LogSeries) -> Result<LogSeries> {
    let g = trace_level_one(f)?;
    let keep = f.degree() / f.prime() as usize;
    if g.is_polynomial() {
        phi_h_inverse(&g)
    } else {
        let pre = phi_h_inverse(&g.truncate(keep).with_tail(TailClass::Unknown))?;
        Ok(pre.truncate(keep).with_tail(TailClass::Unknown))
    }
}

fn d_cw_once(f: &LogSeries) -> LogSeries {
    let p = f.prime();
    let a = f.coeffs();
    let d = f.degree();
    let term = |k: usize| -> PadicScalar {
        let hi = a.get(k + 1).map(|c| c.mul_i64(k as i64 + 1)).unwrap_or_else(|| PadicScalar::zero(p));
        &hi + &a[k].mul_i64(k as i64)
    };
    if f.is_polynomial() {
        return LogSeries::polynomial(p, f.order(), (0..=d).map(term).collect());
    }
    if d == 0 {
        return LogSeries::new(p, f.order(), vec![PadicScalar::approx_zero(p, i64::MIN / 4)], TailClass::Unknown)
            .expect("same prime");
    }
    let boundary = f.truncate(d - 1).tail().clone();
    let tail = match boundary {
        TailClass::Certified(b) => TailClass::Certified(b + (-(f.order() as i64))),
        TailClass::Unknown => TailClass::Unknown,
    };
    LogSeries::new(p, f.order(), (0..d).map(term).collect(), tail).expect("same prime")
}

/// `j`-fold `(1+X) d/dX`; each application drops the top coefficient of a
/// non-polynomial input.
pub fn d_cw(f: &LogSeries, j: u32) -> LogSeries {
    let mut g = f.clone();
    for _ in 0..j {
        g = d_cw_once(&g);
    }
    g
}

/// `Δ_j(F) = D_CW^j(F)(0)`.
pub fn delta(f: &LogSeries, j: u32) -> Result<PadicScalar> {
    if !f.is_polynomial() && j as usize > f.degree() {
        return Err(Error::InvalidInput(format!("Δ_{j} needs degree at least {j}")));
    }
    let head = if f.is_polynomial() { f.clone() } else { f.truncate(j as usize).with_tail(TailClass::zero()) };
    Ok(d_cw(&head, j).coeffs()[0].clone())
}

/// `j!` times the coefficient of `Z^j` in `F(exp(Z) - 1)`.
pub fn delta_via_exp(f: &LogSeries, j: u32) -> Result<PadicScalar> {
    let p = f.prime();
    let j = j as usize;
    if !f.is_polynomial() && j > f.degree() {
        return Err(Error::InvalidInput(format!("Δ_{j} needs degree at least {j}")));
    }
    let prec = f.coeffs().iter().filter_map(PadicScalar::rel_prec).max().unwrap_or(1) + 8;
    let mut fact = BigInt::from(1);
    let mut e = vec![PadicScalar::zero(p); j + 1];
    for (n, slot) in e.iter_mut().enumerate().skip(1) {
        fact *= n;
        *slot = PadicScalar::from_ratio(p, &BigInt::from(1), &fact, prec)?;
    }
    let mut power = vec![PadicScalar::zero(p); j + 1];
    power[0] = PadicScalar::one(p, prec);
    let mut acc = PadicScalar::zero(p);
    for k in 0..=j.min(f.degree()) {
        if k > 0 {
            let mut next = vec![PadicScalar::zero(p); j + 1];
            for (a, x) in power.iter().enumerate() {
                if x.is_exact_zero() {
                    continue;
                }
                for (b, y) in e.iter().enumerate().take(j + 1 - a).skip(1) {
                    next[a + b] = &next[a + b] + &(x * y);
                }
            }
            power = next;
        }
        acc = &acc + &(&f.coeffs()[k] * &power[j]);
    }
    Ok(acc.mul_int(&fact))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logseries::log_power;

    fn series(p: u32, c: &[i64]) -> LogSeries {
        LogSeries::from_i64s(p, 1, c, 40)
    }

    fn assert_close(a: &LogSeries, b: &LogSeries, abs: i64) {
        let n = a.degree().max(b.degree());
        let z = PadicScalar::zero(a.prime());
        for i in 0..=n {
            let x = a.coeff(i).unwrap_or(&z);
            let y = b.coeff(i).unwrap_or(&z);
            assert!(x.agrees_with(y, abs), "coefficient {i}: {x} vs {y}");
        }
    }

    #[test]
    fn phi_of_x_and_one() {
        let p = 3;
        let x = phi_h_full(&series(p, &[0, 1])).unwrap();
        assert_close(&x, &series(p, &[0, 3, 3, 1]), 40);
        let one = phi_h(&series(p, &[1]));
        assert_close(&one, &series(p, &[1]), 40);
    }

    #[test]
    fn phi_scales_log() {
        let p = 5;
        let l = log_power(p, 1, 50, 1, 30).unwrap();
        let pl = phi_h(&l);
        let expected = l.scale(&PadicScalar::from_i64(p, 5, 30));
        assert_close(&pl, &expected, 20);
    }

    #[test]
    fn inverse_examples() {
        let p = 3;
        let w = series(p, &[0, 3, 3, 1]);
        assert_close(&phi_h_inverse(&w).unwrap(), &series(p, &[0, 1]), 30);
        assert!(matches!(phi_h_inverse(&series(p, &[0, 1])), Err(Error::NotInImage(_))));
    }

    #[test]
    fn psi_on_characters() {
        let p = 3;
        let binom_row = |a: i64| -> Vec<i64> {
            (0..=a).map(|k| binomial(a, k)).collect()
        };
        let f = series(p, &binom_row(2));
        let z = psi(&f).unwrap();
        assert!(z.coeffs().iter().all(PadicScalar::is_zero));
        let f = series(p, &binom_row(6));
        assert_close(&psi(&f).unwrap(), &series(p, &binom_row(2)), 20);
    }

    #[test]
    fn d_cw_examples() {
        let p = 5;
        let x = series(p, &[0, 1]);
        assert_close(&d_cw(&x, 1), &series(p, &[1, 1]), 40);
        let l = log_power(p, 1, 30, 1, 30).unwrap();
        let dl = d_cw(&l, 1);
        assert_eq!(dl.degree(), 29);
        assert!(dl.coeffs()[0].agrees_with(&PadicScalar::one(p, 30), 25));
        assert!(dl.coeffs()[1..].iter().all(|c| c.is_zero()));
    }

    #[test]
    fn deltas_of_log_power() {
        let p = 7;
        for d in 0..=3u32 {
            let l = log_power(p, d, 12, 3, 30).unwrap();
            for i in 0..=4u32 {
                let expected: i64 = if i == d { (1..=i as i64).product() } else { 0 };
                let got = delta(&l, i).unwrap();
                assert!(got.agrees_with(&PadicScalar::from_i64(p, expected, 30), 20), "d={d} i={i}: {got}");
                let via = delta_via_exp(&l, i).unwrap();
                assert!(via.agrees_with(&got, 20));
            }
        }
    }
}
