//! One line per acceptance criterion; run with `--nocapture` to see them.

use std::time::{Duration, Instant};

use logp::cyclotomic::CyclotomicNumber;
use logp::family::{check_family, exp_point, exp_point_direct, family_eval, gamma_family_eval, n_eval, plan_degree, reconstruct};
use logp::iwasawa::{omega_poly, omega_product, omega_vh_three_case, reduce_mod_omega, units, CycMeasure};
use logp::logseries::{ell, log_power, Certainty};
use logp::operators::{phi_h, phi_h_full, psi};
use logp::sample::{integral_measure, integral_polynomial, unit_ball_series};
use logp::solver::solve_scalar;
use logp::{constants, LogSeries, PadicScalar, SolveCase, SolveOptions, ToyCrystal, Valuation};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn report(id: u32, name: &str, ok: bool, detail: String, elapsed: Duration, budget: Duration) {
    let within = elapsed <= budget;
    let verdict = if ok && within { "PASS" } else { "FAIL" };
    println!(
        "criterion {id} [{name}]: {verdict} ({detail}; {:.2}s of {}s)",
        elapsed.as_secs_f64(),
        budget.as_secs()
    );
    assert!(ok, "criterion {id} failed: {detail}");
    assert!(within, "criterion {id} exceeded its time budget");
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn to_f64(v: Valuation) -> f64 {
    match v {
        Valuation::Finite(r) => *r.numer() as f64 / *r.denom() as f64,
        Valuation::Infinite => f64::INFINITY,
    }
}

#[test]
fn criterion_1_log_valuation() {
    let start = Instant::now();
    let mut bad = Vec::new();
    for p in [3u32, 5, 7] {
        for h in 1..=3 {
            let f = log_power(p, 1, (p as usize).pow(4), h, 20).unwrap();
            let v = f.v_h();
            if v.value != Valuation::int(h as i64) || v.certainty != Certainty::Exact {
                bad.push(format!("p={p} h={h}: {} {:?}", v.value, v.certainty));
            }
        }
    }
    let ok = bad.is_empty();
    report(1, "v_h(log(1+X)) = h", ok, format!("9 cases, {} mismatches {bad:?}", bad.len()), start.elapsed(), Duration::from_secs(5));
}

#[test]
fn criterion_2_sandwich() {
    let start = Instant::now();
    let mut bad = Vec::new();
    let mut count = 0;
    for p in [3u32, 5] {
        for h in 0..=2 {
            let k = constants(p, h);
            for seed in 0..200 {
                let f = unit_ball_series(&mut rng(1000 * p as u64 + 100 * h as u64 + seed), p, h, 40, 20);
                let v = f.v_h();
                let vp = f.v_h_prime(12).unwrap();
                count += 1;
                let (a, b) = (to_f64(v.value), to_f64(vp.value));
                let holds = k.c1 + a <= b + 1e-9 && b <= k.c2 + a + 1e-9;
                if !(holds && vp.stable && v.certainty == Certainty::Exact) {
                    bad.push(format!("p={p} h={h} seed={seed}"));
                }
            }
        }
    }
    let ok = bad.is_empty();
    report(2, "norm sandwich", ok, format!("{count} series, {} failures", bad.len()), start.elapsed(), Duration::from_secs(30));
}

#[test]
fn criterion_3_omega_table() {
    let start = Instant::now();
    let mut total = 0;
    let mut bad = Vec::new();
    for p in [3u32, 5] {
        for n in 1..=3 {
            for j in 0..=(p as i64).pow(3) {
                let omega = omega_poly(p, n, j, 40);
                for h in 0..=2 {
                    total += 1;
                    let brute = omega.as_series(h).v_h().value;
                    let closed = omega_vh_three_case(p, n, j, h);
                    if brute != closed {
                        bad.push(format!("p={p} n={n} j={j} h={h}: brute {brute} vs closed {closed}"));
                    }
                }
            }
        }
    }
    let ok = bad.is_empty();
    let sample: Vec<_> = bad.iter().take(3).collect();
    report(
        3,
        "ω valuation table",
        ok,
        format!("{total} cases, {} mismatches, e.g. {sample:?}", bad.len()),
        start.elapsed(),
        Duration::from_secs(60),
    );
}

#[test]
fn criterion_4_solver() {
    let start = Instant::now();
    let mut bad = Vec::new();
    let mut runs = 0;
    let configs: Vec<(u32, u32, PadicScalar)> = [3u32, 5]
        .into_iter()
        .flat_map(|p| {
            let mut v = vec![];
            for h in [1u32, 2] {
                v.push((p, h, PadicScalar::from_i64(p, 2, 60)));
                v.push((p, h, PadicScalar::from_i64(p, 1 + p as i64, 60)));
            }
            v.push((p, 2, PadicScalar::from_ratio_i64(p, 2, p as i64, 60).unwrap()));
            v
        })
        .collect();
    for seed in 0..100u64 {
        let (p, h, lambda) = &configs[seed as usize % configs.len()];
        let (p, h) = (*p, *h);
        runs += 1;
        let f = unit_ball_series(&mut rng(seed), p, h, 60, 40);
        let opts = SolveOptions::new(25);
        let outcome = solve_scalar(&f, lambda, h, opts).and_then(|(g, cert)| {
            let (g2, _) = solve_scalar(&f, lambda, h, SolveOptions { extra_terms: 3, ..opts })?;
            Ok((g, cert, g2))
        });
        match outcome {
            Err(e) => bad.push(format!("seed {seed}: {e}")),
            Ok((g, cert, g2)) => {
                let lhs = g.sub(&phi_h(&g).scale(lambda));
                let residual_ok = (0..=60).all(|i| (&lhs.coeffs()[i] - &f.coeffs()[i]).ord() >= Valuation::int(25));
                let denom_ok = cert.case != SolveCase::A
                    || g.v_h().lower_bound().is_some_and(|v| v >= Valuation::int(constants(p, h).c_h));
                let indep_ok = g.coeffs().iter().zip(g2.coeffs()).all(|(a, b)| a.agrees_with(b, 25));
                if !(residual_ok && denom_ok && indep_ok) {
                    bad.push(format!("seed {seed}: residual {residual_ok} denominators {denom_ok} truncation {indep_ok}"));
                }
            }
        }
    }
    let ok = bad.is_empty();
    report(4, "Frobenius solver", ok, format!("{runs} solves, {} failures {bad:?}", bad.len()), start.elapsed(), Duration::from_secs(120));
}

/// `(1/p) Σ_{ζ^p = 1} F(ζ(1+X) - 1)` computed in `Q_p(ζ_p)`.
fn trace_oracle(f: &LogSeries, prec: u32) -> Vec<PadicScalar> {
    let p = f.prime();
    let mut total = vec![CyclotomicNumber::zero(p, 1); f.degree() + 1];
    for s in 0..p as i64 {
        let z = CyclotomicNumber::zeta_power(p, 1, s, prec);
        let c0 = z.sub_ref(&CyclotomicNumber::one(p, 1, prec));
        let mut acc = vec![CyclotomicNumber::zero(p, 1)];
        for a in f.coeffs().iter().rev() {
            let mut next = vec![CyclotomicNumber::zero(p, 1); acc.len() + 1];
            for (k, x) in acc.iter().enumerate() {
                next[k] = next[k].add_ref(&x.mul_ref(&c0));
                next[k + 1] = next[k + 1].add_ref(&x.mul_ref(&z));
            }
            next[0] = next[0].add_ref(&CyclotomicNumber::from_scalar(1, a.clone()));
            acc = next;
        }
        for (t, x) in total.iter_mut().zip(&acc) {
            *t = t.add_ref(x);
        }
    }
    let inv_p = PadicScalar::one(p, prec).shift(-1);
    total.iter().map(|x| x.scale(&inv_p).descend(0).unwrap().coeffs()[0].clone()).collect()
}

#[test]
fn criterion_5_psi_phi() {
    let start = Instant::now();
    let mut bad = Vec::new();
    for seed in 0..100u64 {
        let p = if seed % 2 == 0 { 3 } else { 5 };
        let d = 10 + (seed as usize % 50);
        let f = unit_ball_series(&mut rng(seed), p, 1, d, 30);
        let back = psi(&phi_h_full(&f).unwrap()).unwrap();
        if back.degree() != d || back.coeffs().iter().zip(f.coeffs()).any(|(a, b)| !a.eq_at_precision(b)) {
            bad.push(format!("ψφ seed {seed}"));
        }
    }
    for seed in 0..10u64 {
        let p = if seed % 2 == 0 { 3 } else { 5 };
        let f = unit_ball_series(&mut rng(500 + seed), p, 1, 40, 60);
        let lhs = phi_h(&psi(&f).unwrap());
        let rhs = trace_oracle(&f, 60);
        if (0..=40 / p as usize).any(|k| !lhs.coeffs()[k].agrees_with(&rhs[k], 30)) {
            bad.push(format!("φψ seed {seed}"));
        }
    }
    let ok = bad.is_empty();
    report(5, "ψ/φ identities", ok, format!("100 + 10 series, {} failures {bad:?}", bad.len()), start.elapsed(), Duration::from_secs(60));
}

#[test]
fn criterion_6_closed_form() {
    let start = Instant::now();
    let mut bad = Vec::new();
    let mut cases = 0;
    for p in [3u32, 5] {
        let lambda = PadicScalar::from_i64(p, 1 + p as i64, 60);
        let crystal = ToyCrystal::new("e", lambda.clone());
        let mu = CycMeasure::dirac(p, 1, 1, 60);
        for m in 0..=3u32 {
            let reps: Vec<u64> = if m == 0 { vec![1] } else { units(p, m) };
            for c in reps {
                cases += 1;
                let got = exp_point(&crystal, &mu, 1, 1, (m, c), m, 20).unwrap();
                let one = CyclotomicNumber::one(p, m, 60);
                let mut acc = CyclotomicNumber::zero(p, m);
                let mut lk = PadicScalar::one(p, 60);
                for k in 0..m {
                    let z = CyclotomicNumber::zeta_power(p, m, c as i64, 60).pow((p as u64).pow(k));
                    acc = acc.add_ref(&z.sub_ref(&one).scale(&lk));
                    lk = &lk * &lambda;
                }
                let geo = PadicScalar::one(p, 60).div(&(&PadicScalar::one(p, 60) - &lambda)).unwrap();
                let want = acc.add_ref(&CyclotomicNumber::from_scalar(m, geo)).scale(&lambda.pow(-(m as i64)).unwrap());
                if !got.agrees_with(&want, 20) {
                    bad.push(format!("p={p} m={m} c={c}"));
                }
            }
        }
    }
    let ok = bad.is_empty();
    report(6, "closed-form points", ok, format!("{cases} points, {} mismatches {bad:?}", bad.len()), start.elapsed(), Duration::from_secs(30));
}

#[test]
fn criterion_7_gluing_round_trip() {
    let start = Instant::now();
    let (p, h, l, l2) = (3u32, 1u32, 1i64, 3i64);
    let mut bad = Vec::new();
    for seed in 0..20u64 {
        let n = 1 + (seed % 2) as u32;
        let deg_omega = omega_product(p, n, l, l2, 10).unwrap().len() - 1;
        let mut r = rng(seed);
        let d = r.gen_range(1..2 * deg_omega);
        let g = integral_polynomial(&mut r, p, h, d, 80);
        let outcome = gamma_family_eval(&g, (l, l2), n, 80).and_then(|fam| {
            let got = reconstruct(&fam, h, 80)?;
            let want = reduce_mod_omega(&g, n, l, l2, 80)?;
            Ok((got, want))
        });
        match outcome {
            Err(e) => bad.push(format!("seed {seed}: {e}")),
            Ok((got, want)) => {
                let matches = (0..deg_omega).all(|i| {
                    let a = got.coeff(i).cloned().unwrap_or_else(|| PadicScalar::zero(p));
                    let b = want.coeff(i).cloned().unwrap_or_else(|| PadicScalar::zero(p));
                    a.agrees_with(&b, 20) && a.abs_prec().is_none_or(|x| x >= 20)
                });
                if !matches {
                    bad.push(format!("seed {seed} (n={n}, deg {d})"));
                }
            }
        }
    }
    let ok = bad.is_empty();
    report(7, "gluing round trip", ok, format!("20 inputs, {} failures {bad:?}", bad.len()), start.elapsed(), Duration::from_secs(120));
}

#[test]
fn criterion_8_family_conditions() {
    let start = Instant::now();
    let mut bad = Vec::new();
    let mut families = 0;
    let mut perturbed = 0;
    for (i, (p, h, n)) in [(3u32, 1u32, 2u32), (3, 2, 1), (5, 1, 1)].into_iter().enumerate() {
        let crystals = [
            ToyCrystal::new("a", PadicScalar::from_i64(p, 2, 60)),
            ToyCrystal::new("b", PadicScalar::from_i64(p, 1 + p as i64, 60)),
            ToyCrystal::new("c", PadicScalar::from_ratio_i64(p, 2, p as i64, 60).unwrap()),
        ];
        for (k, crystal) in crystals.iter().enumerate() {
            let mu = integral_measure(&mut rng(10 * i as u64 + k as u64), p, n, 40);
            let fam = family_eval(crystal, &mu, (1, 1 + h as i64), n, h, 20).unwrap();
            families += 1;
            let rep = check_family(&fam, h);
            if !(rep.cond_i && rep.cond_iii && rep.cond_ii.is_some()) {
                bad.push(format!("family p={p} h={h} {}: {:?}", crystal.label, rep.failures));
            }
            let kick = CyclotomicNumber::zeta_power(p, n, 1, 40);
            for key in fam.entries.keys() {
                let mut pert = fam.clone();
                let x = pert.entries.get_mut(key).unwrap();
                *x = x.add_ref(&kick);
                perturbed += 1;
                if check_family(&pert, h).cond_i {
                    bad.push(format!("undetected perturbation at {key:?}"));
                }
            }
            let mut scaled = fam.clone();
            let key = (1, n, 1);
            let x = scaled.entries.get_mut(&key).unwrap();
            *x = x.add_ref(&CyclotomicNumber::one(p, n, 40).scale(&PadicScalar::one(p, 40).shift(-30)));
            let grown = check_family(&scaled, h).cond_ii;
            if grown.zip(rep.cond_ii).is_none_or(|(a, b)| a <= b) {
                bad.push(format!("scaling not visible in δ for p={p} h={h} {}", crystal.label));
            }
        }
    }
    let ok = bad.is_empty();
    report(
        8,
        "family conditions",
        ok,
        format!("{families} families, {perturbed} perturbations, {} failures {bad:?}", bad.len()),
        start.elapsed(),
        Duration::from_secs(30),
    );
}

#[test]
fn criterion_9_kernel_independence() {
    let start = Instant::now();
    let mut bad = Vec::new();
    let mut cases = 0;
    for (p, h, jb) in [(3u32, 1u32, 1u32), (3, 2, 2), (5, 1, 1)] {
        let lambda = PadicScalar::one(p, 80).shift(-(jb as i64));
        let crystal = ToyCrystal::new("e", lambda);
        for m in 1..=2u32 {
            let d = plan_degree(p, h, m, 20);
            let bound = n_eval(p, h, m, d);
            for seed in 0..3u64 {
                cases += 1;
                let mut r = rng(seed + 31 * m as u64 + p as u64);
                let mut vals: std::collections::BTreeMap<u64, PadicScalar> =
                    units(p, m).into_iter().map(|a| (a, PadicScalar::from_i64(p, r.gen_range(-50..50), 80))).collect();
                let rest = vals
                    .iter()
                    .filter(|(a, _)| **a != 1)
                    .fold(PadicScalar::zero(p), |acc, (a, v)| &acc + &v.mul_int(&num_bigint::BigInt::from(*a).pow(jb)));
                vals.insert(1, -rest);
                let j = 1;
                let mu = CycMeasure::new(p, m, vals).unwrap().twist(j).unwrap();
                let opts = SolveOptions::new(bound + 5);
                let a = PadicScalar::from_i64(p, r.gen_range(1..100), 80);
                let outcome = exp_point_direct(&crystal, &mu, j, h, (m, 1), m, d, opts, None).and_then(|x| {
                    let y = exp_point_direct(&crystal, &mu, j, h, (m, 1), m, d, opts, Some(&a))?;
                    Ok(x.sub_ref(&y))
                });
                match outcome {
                    Err(e) => bad.push(format!("p={p} h={h} m={m}: {e}")),
                    Ok(diff) => {
                        let v = diff.coeff_ord_min();
                        if bound < 20 || v < Valuation::int(bound) {
                            bad.push(format!("p={p} h={h} m={m}: difference {v} below bound {bound}"));
                        }
                    }
                }
            }
        }
    }
    let ok = bad.is_empty();
    report(9, "kernel independence", ok, format!("{cases} cases, {} failures {bad:?}", bad.len()), start.elapsed(), Duration::from_secs(30));
    let _ = ell(3, 1);
}
