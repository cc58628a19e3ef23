//! Solutions of `(1 - λφ_H)F̃ = F` with certified denominators.

use num_bigint::BigInt;

use crate::constants::{constants, floor_down};
use crate::error::{Error, Result};
use crate::logseries::{ell, log_power, LogSeries, TailClass, VhReport};
use crate::operators::{delta, phi_h};
use crate::padic::PadicScalar;
use crate::valuation::{Rational, Valuation};

/// Which solvability case applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveCase {
    /// `λp^i ≠ 1` for every `i ∈ [0, h]`.
    A,
    /// `λp^j = 1`.
    B(u32),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveCertificate {
    pub case: SolveCase,
    pub n_max: u32,
    /// Certified `v_h(F̃) ≥ denom_bound`.
    pub denom_bound: i64,
    /// The residual vanishes modulo `p^residual_prec` on tracked coefficients.
    pub residual_prec: i64,
    pub measured_vh: VhReport,
}

/// A rank-one φ-module `K·e` with `φ(e) = λe`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ToyCrystal {
    pub label: String,
    pub lambda: PadicScalar,
}

impl ToyCrystal {
    pub fn new(label: impl Into<String>, lambda: PadicScalar) -> Self {
        ToyCrystal { label: label.into(), lambda }
    }

    pub fn slope(&self) -> Valuation {
        self.lambda.ord()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolveOptions {
    /// Target absolute precision `N` of the residual.
    pub prec: i64,
    /// Terms added to the planned truncation order.
    pub extra_terms: u32,
}

impl SolveOptions {
    pub fn new(prec: i64) -> Self {
        SolveOptions { prec, extra_terms: 0 }
    }
}

/// `a(n, ν)`: `n - ν + 1` when `n ≥ ν`, else `p^{n-ν}`.
pub fn a_n_nu(p: u32, n: i64, nu: i64) -> Rational {
    if n >= nu {
        Rational::from((n - nu + 1) as i128)
    } else {
        Rational::new(1, (p as i128).pow((nu - n) as u32))
    }
}

/// Last index `n_max` of the geometric series after which every term
/// `λ^n φ_H^n(F_0)` vanishes modulo `p^N` in degrees `≤ D`, plus a margin of 5.
///
/// Uses `ord [X^k] λ^nφ^n(F_0) ≥ nα + v + (h+1)a(n,ν) − ℓ(h+1)h − 1` with
/// `ν = ℓ(D)`, valid for `n ≥ ν` since `k p^{-ν} < 1`.
pub fn truncation_order(target: i64, h: u32, p: u32, alpha: Rational, v: i64, d: usize) -> u32 {
    let nu = ell(p, d as u64) as i64;
    let offset = Rational::from((v - (ell(p, h as u64 + 1) * h) as i64 - 1) as i128);
    let mut n = nu.max(0);
    loop {
        let bound = alpha * Rational::from(n as i128)
            + offset
            + Rational::from(h as i128 + 1) * a_n_nu(p, n, nu);
        if n - nu + 1 >= h as i64 && bound >= Rational::from(target as i128) {
            return (n - 1).max(0) as u32 + 5;
        }
        n += 1;
    }
}

/// Split `F = F_0 + Σ_{i≤h} (i!)^{-1} Δ_i(F) log^i(1+X)` with `F_0 ∈ X^{h+1}H_h`.
pub fn decompose(f: &LogSeries, h: u32) -> Result<(LogSeries, Vec<PadicScalar>)> {
    let p = f.prime();
    let mut f = f.retag(h.max(f.order()));
    if f.order() != h {
        f = f.with_tail(TailClass::Unknown).retag(h);
    }
    if f.is_polynomial() && f.degree() < h as usize + 2 {
        f = f.extend_zeros(h as usize + 2)?;
    }
    if f.degree() < h as usize {
        return Err(Error::InvalidInput(format!("degree {} is too small for order {h}", f.degree())));
    }
    let prec = f.coeffs().iter().filter_map(PadicScalar::rel_prec).max().unwrap_or(1);
    let mut deltas = Vec::with_capacity(h as usize + 1);
    let mut f0 = f.clone();
    let mut fact = BigInt::from(1);
    for i in 0..=h {
        if i > 0 {
            fact *= i;
        }
        let di = delta(&f, i)?;
        if !di.is_exact_zero() {
            let c = &di * &PadicScalar::from_ratio(p, &BigInt::from(1), &fact, prec)?;
            let li = log_power(p, i, f.degree(), h, prec)?;
            f0 = f0.sub(&li.scale(&c));
        }
        deltas.push(di);
    }
    let mut coeffs = f0.coeffs().to_vec();
    for (i, c) in coeffs.iter_mut().enumerate().take(h as usize + 1) {
        if !c.is_zero() {
            return Err(Error::PrecisionExhausted(format!("coefficient {i} of F_0 does not cancel")));
        }
        *c = PadicScalar::zero(p);
    }
    let f0 = LogSeries::new(p, h, coeffs, f0.tail().clone())?;
    Ok((f0, deltas))
}

/// Decide which case `λ` falls into at order `h`.
pub fn classify(lambda: &PadicScalar, h: u32, target: i64) -> Result<SolveCase> {
    let p = lambda.prime();
    let one = PadicScalar::one(p, lambda.rel_prec().unwrap_or(1));
    let mut case = SolveCase::A;
    for i in 0..=h {
        let t = &lambda.shift(i as i64) - &one;
        if t.is_zero() {
            case = SolveCase::B(i);
        } else if t.ord() >= Valuation::int(target) {
            return Err(Error::IndeterminateCase { index: i });
        }
    }
    Ok(case)
}

/// Everything the solver computes before summing, shared with point evaluation.
#[derive(Clone, Debug)]
pub struct SolvePlan {
    pub case: SolveCase,
    pub f0: LogSeries,
    pub deltas: Vec<PadicScalar>,
    pub n_max: u32,
    /// Internal absolute precision target for the geometric head.
    pub work_prec: i64,
}

pub fn plan(f: &LogSeries, lambda: &PadicScalar, h: u32, opts: SolveOptions) -> Result<SolvePlan> {
    if lambda.is_zero() {
        return Err(Error::InvalidInput("λ must be nonzero".into()));
    }
    let alpha = lambda.ord();
    let alpha_r = alpha.finite().expect("nonzero");
    let neg = -alpha_r;
    if neg > Rational::from(h as i128) {
        return Err(Error::SlopeTooLarge { h, neg_ord: neg.ceil().to_integer() as i64 });
    }
    if matches!(f.tail(), TailClass::Unknown) {
        return Err(Error::InvalidInput("the input series needs a tail certificate".into()));
    }
    let case = classify(lambda, h, opts.prec)?;
    let (f0, deltas) = decompose(f, h)?;
    if let SolveCase::B(j) = case {
        if !deltas[j as usize].is_zero() {
            return Err(Error::Unsolvable(format!("λp^{j} = 1 but Δ_{j}(F) = {}", deltas[j as usize])));
        }
    }
    let work_prec = opts.prec + neg.ceil().to_integer().max(0) as i64;
    let n_max = match f0.v_h().lower_bound() {
        Some(Valuation::Infinite) => 0,
        Some(v) => truncation_order(work_prec, h, f.prime(), alpha_r, v.floor().unwrap(), f0.degree()),
        None => unreachable!("tail certified above"),
    } + opts.extra_terms;
    Ok(SolvePlan { case, f0, deltas, n_max, work_prec })
}

/// `Σ_{i ≠ j} (i!)^{-1} Δ_i /(1 - λp^i) · log^i`, skipping the case-B index.
pub fn log_part(plan: &SolvePlan, lambda: &PadicScalar, h: u32, degree: usize) -> Result<LogSeries> {
    let p = lambda.prime();
    let prec = plan.f0.coeffs().iter().chain(&plan.deltas).filter_map(PadicScalar::rel_prec).max().unwrap_or(1);
    let mut acc = LogSeries::zero(p, h, degree);
    let mut fact = BigInt::from(1);
    for (i, di) in plan.deltas.iter().enumerate() {
        if i > 0 {
            fact *= i;
        }
        if di.is_exact_zero() || plan.case == SolveCase::B(i as u32) {
            continue;
        }
        let denom = &PadicScalar::one(p, prec) - &lambda.shift(i as i64);
        let c = (di * &PadicScalar::from_ratio(p, &BigInt::from(1), &fact, prec)?).div(&denom)?;
        acc = acc.add(&log_power(p, i as u32, degree, h, prec)?.scale(&c));
    }
    Ok(acc)
}

/// Solve `(1 - λφ_H)F̃ = F` in `H_h`.
pub fn solve_scalar(f: &LogSeries, lambda: &PadicScalar, h: u32, opts: SolveOptions) -> Result<(LogSeries, SolveCertificate)> {
    let p = f.prime();
    let plan = plan(f, lambda, h, opts)?;
    let f0 = &plan.f0;
    let mut term = f0.clone();
    let mut head = f0.clone();
    for _ in 0..plan.n_max {
        term = phi_h(&term).scale(lambda);
        head = head.add(&term);
    }
    let consts = constants(p, h);
    let head_tail = match f0.v_h().lower_bound() {
        Some(Valuation::Infinite) => TailClass::zero(),
        Some(v) => TailClass::Certified(v + floor_down(consts.c_phi)),
        None => TailClass::Unknown,
    };
    let capped: Vec<PadicScalar> = head.coeffs().iter().map(|c| c.truncate_abs(plan.work_prec)).collect();
    let head = if f0.coeffs().iter().all(PadicScalar::is_exact_zero) && f0.is_polynomial() {
        LogSeries::zero(p, h, f0.degree())
    } else {
        LogSeries::new(p, h, capped, head_tail)?
    };
    let solution = head.add(&log_part(&plan, lambda, h, f0.degree())?);
    let residual_prec = residual_precision(&solution, f, lambda, h)?;
    if residual_prec < opts.prec {
        return Err(Error::PrecisionExhausted(format!(
            "residual only known to vanish mod p^{residual_prec}, below the target {}",
            opts.prec
        )));
    }
    let v_in = f.retag(h).v_h().lower_bound().and_then(|v| v.floor()).unwrap_or(0);
    let cert = SolveCertificate {
        case: plan.case,
        n_max: plan.n_max,
        denom_bound: consts.c_h + v_in,
        residual_prec,
        measured_vh: solution.v_h(),
    };
    Ok((solution, cert))
}

/// Largest `r` with `(1 - λφ_H)F̃ - F ≡ 0 mod p^r` on the tracked coefficients.
pub fn residual_precision(solution: &LogSeries, f: &LogSeries, lambda: &PadicScalar, h: u32) -> Result<i64> {
    let lhs = solution.sub(&phi_h(solution).scale(lambda));
    let f = f.retag(h);
    let d = lhs.degree().min(f.degree());
    let mut r = i64::MAX;
    for i in 0..=d {
        let c = &lhs.coeffs()[i] - &f.coeffs()[i];
        if !c.is_zero() {
            return Err(Error::PrecisionExhausted(format!("residual coefficient {i} is {c}")));
        }
        if let Some(a) = c.abs_prec() {
            r = r.min(a);
        }
    }
    Ok(r)
}

/// Solve `(1 - φ_D ⊗ φ_H)Ξ̃ = e ⊗ F` for a rank-one crystal.
pub fn solve_crystal(
    f: &LogSeries,
    crystal: &ToyCrystal,
    h: u32,
    opts: SolveOptions,
) -> Result<((String, LogSeries), SolveCertificate)> {
    let (g, cert) = solve_scalar(f, &crystal.lambda, h, opts)?;
    Ok(((crystal.label.clone(), g), cert))
}
