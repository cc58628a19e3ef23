//! Families of values at `p`-power roots of unity, their admissibility
//! conditions, and interpolation back to polynomials modulo `Ω`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Pow;

use crate::cyclotomic::{unit_group_generators, CyclotomicNumber};
use crate::error::{Error, Result};
use crate::iwasawa::{embed_measure, omega_product, u_generator, units, CycMeasure};
use crate::logseries::{ell, log_power, LogSeries};
use crate::padic::PadicScalar;
use crate::solver::{classify, solve_scalar, SolveCase, SolveOptions, ToyCrystal};
use crate::valuation::{Rational, Valuation};

/// Key of an entry: twist index `j`, level `m = n(ζ)`, and `c` with `ζ = ζ_{p^m}^c`.
pub type EntryKey = (i64, u32, u64);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyOfPoints {
    pub p: u32,
    pub n: u32,
    pub window: (i64, i64),
    pub label: Option<String>,
    pub branch: Option<u64>,
    /// Values in the level-`n` ring.
    pub entries: BTreeMap<EntryKey, CyclotomicNumber>,
    pub delta: Option<i64>,
}

/// Orbit representatives `c` for roots of unity of exact level `m`; `ζ = 1` is `(0, 1)`.
pub fn zeta_reps(p: u32, m: u32) -> Vec<u64> {
    if m == 0 {
        vec![1]
    } else {
        units(p, m)
    }
}

/// Exponent `e` with `ζ_{p^m}^c = ζ_{p^n}^e`.
pub fn zeta_exponent(p: u32, n: u32, m: u32, c: u64) -> i64 {
    if m == 0 {
        0
    } else {
        c as i64 * (p as i64).pow(n - m)
    }
}

fn check_level(p: u32, n: u32, m: u32, c: u64) -> Result<()> {
    if m > n {
        return Err(Error::InvalidInput(format!("root of unity level {m} exceeds ambient level {n}")));
    }
    if m > 0 && c.is_multiple_of(p as u64) {
        return Err(Error::InvalidAutomorphism(c as i64));
    }
    Ok(())
}

/// `Δ_i` of `Σ μ(a)(1+X)^a`, i.e. `Σ μ(a) a^i`.
pub fn measure_delta(mu: &CycMeasure, i: u32) -> PadicScalar {
    mu.values()
        .iter()
        .fold(PadicScalar::zero(mu.prime()), |acc, (&a, v)| &acc + &v.mul_int(&BigInt::from(a).pow(i)))
}

/// Coefficient of `e` in `λ^{-m} ρ_ζ(F̃)`, where `(1 - λφ_H)F̃ = ι(twist(μ, -j))`
/// and `ζ = ζ_{p^m}^c`, as an element of the level-`n` ring.
///
/// Evaluated term by term: `ρ_ζ(F̃) = Σ_{k<m} λ^k (F(ζ^{p^k} - 1) - Δ_0(F)) + Δ_0(F)/(1 - λ)`,
/// the last term omitted in case `B(0)`.
pub fn exp_point(
    crystal: &ToyCrystal,
    mu: &CycMeasure,
    j: i64,
    h: u32,
    (m, c): (u32, u64),
    n: u32,
    target: i64,
) -> Result<CyclotomicNumber> {
    let p = mu.prime();
    check_level(p, n, m, c)?;
    let lambda = &crystal.lambda;
    if lambda.is_zero() {
        return Err(Error::InvalidInput("λ must be nonzero".into()));
    }
    let neg = -lambda.ord().finite().expect("nonzero");
    if neg > Rational::from(h as i128) {
        return Err(Error::SlopeTooLarge { h, neg_ord: neg.ceil().to_integer() as i64 });
    }
    let case = classify(lambda, h, target)?;
    let twisted = mu.twist(-j)?;
    if let SolveCase::B(i) = case {
        let d = measure_delta(&twisted, i);
        if !d.is_zero() {
            return Err(Error::Unsolvable(format!("λp^{i} = 1 but Δ_{i}(F) = {d}")));
        }
    }
    let delta0 = twisted.total_mass();
    let e = zeta_exponent(p, n, m, c);
    let prec = lambda.rel_prec().unwrap_or(1);
    let mut rho = CyclotomicNumber::zero(p, n);
    let mut lam_k = PadicScalar::one(p, prec);
    for k in 0..m {
        let pk = (p as i64).pow(k);
        let eval = CyclotomicNumber::from_exponents(
            p,
            n,
            twisted.values().iter().map(|(&a, v)| (e * a as i64 * pk, v.clone())),
        );
        let shifted = eval.sub_ref(&CyclotomicNumber::from_scalar(n, delta0.clone()));
        rho = rho.add_ref(&shifted.scale(&lam_k));
        lam_k = &lam_k * lambda;
    }
    if case != SolveCase::B(0) && !delta0.is_exact_zero() {
        let geo = delta0.div(&(&PadicScalar::one(p, prec) - lambda))?;
        rho = rho.add_ref(&CyclotomicNumber::from_scalar(n, geo));
    }
    Ok(rho.scale(&lambda.pow(-(m as i64))?))
}

/// `⌊min_{k>D}(k/φ(p^m) - hℓ(k))⌋ - 1`: evaluating a degree-`D` truncation of an
/// element of `H_h^+` at `ζ_{p^m} - 1` is off by at least this valuation.
pub fn n_eval(p: u32, h: u32, m: u32, d: usize) -> i64 {
    if m == 0 {
        return i64::MAX;
    }
    let e = crate::cyclotomic::euler_phi(p, m) as i128;
    let f = |k: i128| Rational::new(k, e) - Rational::from(h as i128 * ell(p, k as u64) as i128);
    let mut best = f(d as i128 + 1);
    let mut j = ell(p, d as u64 + 1);
    loop {
        let start = (p as i128).pow(j);
        best = best.min(f(start));
        if start * (p as i128 - 1) >= e * h as i128 {
            break;
        }
        j += 1;
    }
    best.floor().to_integer() as i64 - 1
}

/// Smallest truncation degree with `n_eval ≥ target`.
pub fn plan_degree(p: u32, h: u32, m: u32, target: i64) -> usize {
    let mut d = 1;
    while n_eval(p, h, m, d) < target {
        d += 1;
    }
    d
}

/// The same value as [`exp_point`] read off the coefficients of the solved
/// series truncated at degree `d`, optionally after adding `a·log^j(1+X)` in case `B(j)`.
#[allow(clippy::too_many_arguments)]
pub fn exp_point_direct(
    crystal: &ToyCrystal,
    mu: &CycMeasure,
    j: i64,
    h: u32,
    (m, c): (u32, u64),
    n: u32,
    d: usize,
    opts: SolveOptions,
    kernel: Option<&PadicScalar>,
) -> Result<CyclotomicNumber> {
    let p = mu.prime();
    check_level(p, n, m, c)?;
    let f = embed_measure(&mu.twist(-j)?, d, h);
    let f = if f.is_polynomial() { f.extend_zeros(d)? } else { f };
    let (mut sol, cert) = solve_scalar(&f, &crystal.lambda, h, opts)?;
    if let Some(a) = kernel {
        let SolveCase::B(i) = cert.case else {
            return Err(Error::InvalidInput("a kernel term only exists in case B".into()));
        };
        let prec = a.rel_prec().unwrap_or(1).max(opts.prec as u32 + 10);
        sol = sol.add(&log_power(p, i, d, h, prec)?.scale(a));
    }
    let prec = crystal.lambda.rel_prec().unwrap_or(1);
    let zeta = CyclotomicNumber::zeta_power(p, n, zeta_exponent(p, n, m, c), prec);
    let y = zeta.sub_ref(&CyclotomicNumber::one(p, n, prec));
    Ok(y.eval_poly(sol.coeffs()).scale(&crystal.lambda.pow(-(m as i64))?))
}

/// Evaluate [`exp_point`] at every `(j, ζ)` with `j ∈ [l, l′]`, `n(ζ) ≤ n`.
pub fn family_eval(
    crystal: &ToyCrystal,
    mu: &CycMeasure,
    (l, l2): (i64, i64),
    n: u32,
    h: u32,
    target: i64,
) -> Result<FamilyOfPoints> {
    if l2 - l < h as i64 {
        return Err(Error::InvalidInput(format!("window [{l}, {l2}] must contain more than h = {h} twists")));
    }
    let p = mu.prime();
    let mut entries = BTreeMap::new();
    for j in l..=l2 {
        for m in 0..=n {
            for c in zeta_reps(p, m) {
                entries.insert((j, m, c), exp_point(crystal, mu, j, h, (m, c), n, target)?);
            }
        }
    }
    let mut fam = FamilyOfPoints {
        p,
        n,
        window: (l, l2),
        label: Some(crystal.label.clone()),
        branch: None,
        entries,
        delta: None,
    };
    fam.delta = measure_delta_defect(&fam, h)?;
    Ok(fam)
}

/// Values `G(u^j ζ - 1)` of a polynomial in `Y` over the same index set.
pub fn gamma_family_eval(g: &LogSeries, (l, l2): (i64, i64), n: u32, prec: u32) -> Result<FamilyOfPoints> {
    if l > l2 {
        return Err(Error::InvalidInput(format!("empty window [{l}, {l2}]")));
    }
    let p = g.prime();
    let mut entries = BTreeMap::new();
    for j in l..=l2 {
        let uj = PadicScalar::from_i64(p, u_generator(p), prec).pow(j)?;
        for m in 0..=n {
            for c in zeta_reps(p, m) {
                let node = node(p, n, m, c, &uj, prec);
                entries.insert((j, m, c), node.eval_poly(g.coeffs()));
            }
        }
    }
    Ok(FamilyOfPoints { p, n, window: (l, l2), label: None, branch: None, entries, delta: None })
}

fn node(p: u32, n: u32, m: u32, c: u64, uj: &PadicScalar, prec: u32) -> CyclotomicNumber {
    CyclotomicNumber::zeta_power(p, n, zeta_exponent(p, n, m, c), prec)
        .scale(uj)
        .sub_ref(&CyclotomicNumber::one(p, n, prec))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyReport {
    pub cond_i: bool,
    /// Smallest `δ` with `p^{n(ζ)h+δ} x_ζ^{[j]}` integral for every entry; `None` if all vanish.
    pub cond_ii: Option<i64>,
    pub cond_iii: bool,
    pub failures: Vec<String>,
}

impl FamilyReport {
    pub fn passed(&self) -> bool {
        self.cond_i && self.cond_iii
    }
}

fn galois_failures(fam: &FamilyOfPoints) -> Vec<String> {
    let p = fam.p;
    let mut out = Vec::new();
    for ((j, m, c), x) in &fam.entries {
        for g in unit_group_generators(p, fam.n.max(1)) {
            let image = match x.galois_apply(g as i64) {
                Ok(v) => v,
                Err(e) => {
                    out.push(format!("({j},{m},{c}): {e}"));
                    continue;
                }
            };
            let target_c = if *m == 0 { 1 } else { (g * c) % (p as u64).pow(*m) };
            match fam.entries.get(&(*j, *m, target_c)) {
                Some(y) if image.eq_at_precision(y) => {}
                Some(_) => out.push(format!("σ_{g} does not send entry ({j},{m},{c}) to ({j},{m},{target_c})")),
                None => out.push(format!("missing entry ({j},{m},{target_c})")),
            }
        }
    }
    out
}

fn measure_delta_defect(fam: &FamilyOfPoints, h: u32) -> Result<Option<i64>> {
    let mut delta: Option<i64> = None;
    for ((_, m, _), x) in &fam.entries {
        if x.is_zero() {
            continue;
        }
        let v = x.cyc_ord()?;
        if let Some(r) = v.finite() {
            let need = (-r - Rational::from(*m as i128 * h as i128)).ceil().to_integer() as i64;
            delta = Some(delta.map_or(need, |d| d.max(need)));
        }
    }
    Ok(delta)
}

fn valuation_at_least(x: &CyclotomicNumber, bound: i64) -> bool {
    if x.coeff_ord_min() >= Valuation::int(bound) {
        return true;
    }
    matches!(x.cyc_ord(), Ok(v) if v >= Valuation::int(bound))
}

/// Check Galois consistency (i), measure the integrality defect (ii), and the
/// twist congruences (iii) `p^{mh+δ}(x^{[j′]} - x^{[j]}ζ^{j′-j}) ≡ 0 mod p^m`.
pub fn check_family(fam: &FamilyOfPoints, h: u32) -> FamilyReport {
    let mut failures = galois_failures(fam);
    let cond_i = failures.is_empty();
    let cond_ii = match measure_delta_defect(fam, h) {
        Ok(d) => d,
        Err(e) => {
            failures.push(format!("integrality: {e}"));
            None
        }
    };
    let mut cond_iii = true;
    if let Some(delta) = cond_ii {
        let p = fam.p;
        let (l, l2) = fam.window;
        for m in 0..=fam.n {
            for c in zeta_reps(p, m) {
                let e = zeta_exponent(p, fam.n, m, c);
                for j in l..=l2 {
                    for j2 in j + 1..=l2 {
                        let (Some(x), Some(y)) = (fam.entries.get(&(j, m, c)), fam.entries.get(&(j2, m, c))) else {
                            continue;
                        };
                        let diff = y.sub_ref(&x.mul_zeta_power(e * (j2 - j)));
                        let scaled_shift = m as i64 * h as i64 + delta;
                        let scaled = CyclotomicNumber::from_coeffs(
                            p,
                            fam.n,
                            diff.coeffs().iter().map(|a| a.shift(scaled_shift)).collect(),
                        )
                        .expect("same ring");
                        if !valuation_at_least(&scaled, m as i64) {
                            cond_iii = false;
                            failures.push(format!("congruence fails between j={j} and j={j2} at ({m},{c})"));
                        }
                    }
                }
            }
        }
    }
    FamilyReport { cond_i, cond_ii, cond_iii, failures }
}

/// The polynomial of degree `< deg Ω_n^{[l,l′]}` interpolating the family at the
/// points `u^j ζ - 1`, descended to `Q_p`. Families failing (i) are rejected.
pub fn reconstruct(fam: &FamilyOfPoints, h: u32, prec: u32) -> Result<LogSeries> {
    let (l, l2) = fam.window;
    if l2 - l < h as i64 {
        return Err(Error::InvalidInput(format!("window [{l}, {l2}] must contain more than h = {h} twists")));
    }
    let p = fam.p;
    let n = fam.n;
    let bad = galois_failures(fam);
    if !bad.is_empty() {
        return Err(Error::InconsistentFamily(bad.join("; ")));
    }
    let mut nodes = Vec::new();
    let mut values = Vec::new();
    for j in l..=l2 {
        let uj = PadicScalar::from_i64(p, u_generator(p), prec).pow(j)?;
        for m in 0..=n {
            for c in zeta_reps(p, m) {
                let v = fam
                    .entries
                    .get(&(j, m, c))
                    .ok_or_else(|| Error::InconsistentFamily(format!("missing entry ({j},{m},{c})")))?;
                nodes.push(node(p, n, m, c, &uj, prec));
                values.push(v.clone());
            }
        }
    }
    debug_assert_eq!(nodes.len(), omega_product(p, n, l, l2, 2)?.len() - 1);
    let count = nodes.len();
    for k in 1..count {
        for i in (k..count).rev() {
            let num = values[i].sub_ref(&values[i - 1]);
            let den = nodes[i].sub_ref(&nodes[i - k]);
            values[i] = num.mul_ref(&den.inv()?);
        }
    }
    let mut poly: Vec<CyclotomicNumber> = vec![values[count - 1].clone()];
    for k in (0..count - 1).rev() {
        let mut next = vec![CyclotomicNumber::zero(p, n); poly.len() + 1];
        for (i, a) in poly.iter().enumerate() {
            next[i + 1] = next[i + 1].add_ref(a);
            next[i] = next[i].sub_ref(&a.mul_ref(&nodes[k]));
        }
        next[0] = next[0].add_ref(&values[k]);
        poly = next;
    }
    let mut coeffs = Vec::with_capacity(poly.len());
    for (i, a) in poly.iter().enumerate() {
        let base = a
            .descend(0)
            .ok_or_else(|| Error::InconsistentFamily(format!("coefficient {i} does not descend to Q_p")))?;
        coeffs.push(base.coeffs()[0].clone());
    }
    Ok(LogSeries::polynomial(p, h, coeffs))
}

/// `1 - p^{j-1}/a_p` when `ord_phi = 0`, else `(p^{j-1}/a_p)^{ord_phi}`.
pub fn euler_factor(a_p: &PadicScalar, j: i64, ord_phi: u32) -> Result<PadicScalar> {
    let p = a_p.prime();
    let prec = a_p.rel_prec().ok_or(Error::DivisionByZero)?;
    let ratio = PadicScalar::one(p, prec).shift(j - 1).div(a_p)?;
    if ord_phi == 0 {
        Ok(&PadicScalar::one(p, prec) - &ratio)
    } else {
        ratio.pow(ord_phi as i64)
    }
}

/// `-q(j) + ⌊c(h)⌋ - h n(ζ)` with `j = (p-1)q(j) + r(j)`, `0 ≤ r(j) < p-1`.
pub fn denominator_exponent(j: i64, h: u32, n_zeta: u32, p: u32) -> i64 {
    let q = j.div_euclid(p as i64 - 1);
    -q + crate::constants::constants(p, h).c_h - h as i64 * n_zeta as i64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lam(p: u32) -> ToyCrystal {
        ToyCrystal::new("e", PadicScalar::from_i64(p, 1 + p as i64, 40))
    }

    #[test]
    fn dirac_closed_form_at_level_one() {
        let p = 3;
        let crystal = lam(p);
        let mu = CycMeasure::dirac(p, 1, 1, 40);
        let x = exp_point(&crystal, &mu, 1, 1, (1, 1), 1, 20).unwrap();
        let one = PadicScalar::one(p, 40);
        let l = &crystal.lambda;
        let zeta = CyclotomicNumber::zeta_power(p, 1, 1, 40);
        let inner = zeta
            .sub_ref(&CyclotomicNumber::one(p, 1, 40))
            .add_ref(&CyclotomicNumber::from_scalar(1, one.div(&(&one - l)).unwrap()));
        assert!(x.agrees_with(&inner.scale(&l.inv().unwrap()), 20));
        let at_one = exp_point(&crystal, &mu, 1, 1, (0, 1), 1, 20).unwrap();
        assert!(at_one.agrees_with(&CyclotomicNumber::from_scalar(1, one.div(&(&one - l)).unwrap()), 20));
    }

    #[test]
    fn euler_examples() {
        let p = 3;
        let ap = PadicScalar::from_i64(p, 4, 30);
        let one = PadicScalar::one(p, 30);
        let e1 = euler_factor(&ap, 1, 0).unwrap();
        assert!(e1.agrees_with(&PadicScalar::from_ratio_i64(p, 3, 4, 30).unwrap(), 25));
        let e2 = euler_factor(&ap, 2, 0).unwrap();
        assert!(e2.agrees_with(&(&one - &PadicScalar::from_ratio_i64(p, 3, 4, 30).unwrap()), 25));
        let e3 = euler_factor(&ap, 1, 2).unwrap();
        assert!(e3.agrees_with(&PadicScalar::from_ratio_i64(p, 1, 16, 30).unwrap(), 25));
        assert_eq!(euler_factor(&PadicScalar::zero(p), 1, 0), Err(Error::DivisionByZero));
    }

    #[test]
    fn denominator_examples() {
        assert_eq!(denominator_exponent(1, 1, 2, 3), -7);
        assert_eq!(denominator_exponent(5, 1, 0, 3), -7);
        assert_eq!(denominator_exponent(1, 1, 0, 7), crate::constants::constants(7, 1).c_h);
    }

    #[test]
    fn zero_family_reconstructs_to_zero() {
        let g = LogSeries::zero(3, 1, 4);
        let fam = gamma_family_eval(&g, (1, 2), 1, 30).unwrap();
        let r = reconstruct(&fam, 1, 30).unwrap();
        assert!(r.coeffs().iter().all(PadicScalar::is_zero));
    }

    #[test]
    fn planner_reaches_target() {
        let d = plan_degree(3, 1, 1, 20);
        assert!(n_eval(3, 1, 1, d) >= 20 && n_eval(3, 1, 1, d - 1) < 20);
    }

    #[test]
    fn gluing_round_trip() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let g = crate::sample::integral_polynomial(&mut rng, 3, 1, 30, 80);
        for n in 1..=2 {
            let fam = gamma_family_eval(&g, (1, 3), n, 120).unwrap();
            let r = reconstruct(&fam, 1, 120).unwrap();
            let expect = crate::iwasawa::reduce_mod_omega(&g, n, 1, 3, 60).unwrap();
            for (a, b) in r.coeffs().iter().zip(expect.coeffs()) {
                assert!(a.agrees_with(b, 20), "{a} vs {b}");
            }
        }
    }

    #[test]
    fn generated_family_passes_and_perturbation_is_caught() {
        let p = 3;
        let crystal = lam(p);
        let mu = CycMeasure::from_fn(p, 2, |a| PadicScalar::from_i64(p, a as i64 % 7, 40));
        let fam = family_eval(&crystal, &mu, (1, 2), 2, 1, 20).unwrap();
        let rep = check_family(&fam, 1);
        assert!(rep.passed(), "{:?}", rep.failures);
        assert!(rep.cond_ii.is_some());

        let mut bad = fam.clone();
        let x = bad.entries.get_mut(&(1, 2, 1)).unwrap();
        *x = x.add_ref(&CyclotomicNumber::zeta_power(p, 2, 1, 40));
        assert!(!check_family(&bad, 1).cond_i);
        assert!(matches!(reconstruct(&bad, 1, 40), Err(Error::InconsistentFamily(_))));

        let mut scaled = fam.clone();
        let x = scaled.entries.get_mut(&(1, 1, 1)).unwrap();
        let orig = x.clone();
        *x = orig.scale(&PadicScalar::one(p, 40).shift(-10));
        let d0 = rep.cond_ii.unwrap();
        let d1 = check_family(&scaled, 1).cond_ii.unwrap();
        assert!(d1 > d0);
    }

    #[test]
    fn galois_transport() {
        let p = 3;
        let crystal = lam(p);
        let mu = CycMeasure::from_fn(p, 1, |a| PadicScalar::from_i64(p, 1 + a as i64, 40));
        let x = exp_point(&crystal, &mu, 2, 1, (2, 1), 2, 20).unwrap();
        let y = exp_point(&crystal, &mu, 2, 1, (2, 2), 2, 20).unwrap();
        assert!(x.galois_apply(2).unwrap().eq_at_precision(&y));
    }

    #[test]
    fn direct_path_agrees() {
        let p = 3;
        let crystal = ToyCrystal::new("e", PadicScalar::from_i64(p, 2, 60));
        let mu = CycMeasure::from_fn(p, 1, |a| PadicScalar::from_i64(p, a as i64 + 2, 60));
        let m = 1;
        let d = plan_degree(p, 1, m, 12);
        let a = exp_point(&crystal, &mu, 1, 1, (m, 1), 2, 20).unwrap();
        let b = exp_point_direct(&crystal, &mu, 1, 1, (m, 1), 2, d, SolveOptions::new(20), None).unwrap();
        let diff = a.sub_ref(&b);
        assert!(diff.cyc_ord().unwrap() >= Valuation::int(8), "{}", diff.cyc_ord().unwrap());
    }

    #[test]
    fn kernel_independence() {
        let p = 3;
        let crystal = ToyCrystal::new("e", PadicScalar::from_ratio_i64(p, 1, 3, 60).unwrap());
        let mut vals: BTreeMap<u64, PadicScalar> =
            units(p, 2).into_iter().map(|a| (a, PadicScalar::from_i64(p, (a as i64) * 5 + 1, 60))).collect();
        let rest = vals.iter().filter(|(a, _)| **a != 1).fold(PadicScalar::zero(p), |acc, (a, v)| &acc + &v.mul_i64(*a as i64));
        vals.insert(1, -rest);
        let mu = CycMeasure::new(p, 2, vals).unwrap().twist(1).unwrap();
        let m = 1;
        let d = plan_degree(p, 1, m, 20);
        let opts = SolveOptions::new(25);
        let a = exp_point_direct(&crystal, &mu, 1, 1, (m, 1), 1, d, opts, None).unwrap();
        let k = PadicScalar::from_i64(p, 7, 60);
        let b = exp_point_direct(&crystal, &mu, 1, 1, (m, 1), 1, d, opts, Some(&k)).unwrap();
        let diff = a.sub_ref(&b);
        assert!(valuation_at_least(&diff, n_eval(p, 1, m, d)));
    }
}
