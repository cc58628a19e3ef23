use logp::iwasawa::{
    embed_measure, gamma_to_measure, measure_to_gamma, omega_product, reduce_mod_omega, teichmuller_join,
    teichmuller_split, u_generator, units,
};
use logp::logseries::poly_mul;
use logp::operators::d_cw;
use logp::sample::{integral_measure, integral_polynomial};
use logp::{LogSeries, PadicScalar, Valuation};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[test]
fn omega_valuation_grows_with_level() {
    for p in [3u32, 5] {
        for h in 0..=2 {
            let levels = if p == 3 { 1..=4 } else { 1..=3 };
            let vals: Vec<Valuation> = levels
                .map(|n| LogSeries::polynomial(p, h, omega_product(p, n, 1, 2, 40).unwrap()).v_h().value)
                .collect();
            assert!(vals.windows(2).all(|w| w[1] >= w[0]), "p={p} h={h}: {vals:?}");
            if h > 0 {
                assert!(vals.last() > vals.first(), "p={p} h={h}: {vals:?}");
            }
        }
    }
}

#[test]
fn teichmuller_decomposition_is_a_bijection() {
    for (p, n) in [(3u32, 3u32), (5, 2), (7, 2)] {
        let m = (p as u64).pow(n);
        let u = u_generator(p) as u64;
        for a in units(p, n) {
            let (b, s) = teichmuller_split(p, n, a);
            assert_eq!(teichmuller_join(p, n, b, s), a);
            let mut x = 1u64;
            for _ in 0..s {
                x = x * u % m;
            }
            let mut t = b % m;
            for _ in 1..n {
                t = (0..p).fold(1u64, |acc, _| acc * t % m);
            }
            assert_eq!(t * x % m, a, "p={p} n={n} a={a}");
        }
    }
}

#[test]
fn gamma_branches_round_trip_and_evaluate() {
    for (p, n) in [(3u32, 2u32), (5, 2), (3, 3)] {
        let mu = integral_measure(&mut rng(n as u64 + p as u64), p, n, 30);
        let branches = measure_to_gamma(&mu);
        let back = gamma_to_measure(p, n, &branches).unwrap();
        for (a, v) in mu.values() {
            assert!(back.values()[a].agrees_with(v, 25));
        }
        let t = PadicScalar::from_i64(p, 4, 30);
        for (b, g) in &branches {
            let mut direct = PadicScalar::zero(p);
            let one_t = &t + &PadicScalar::one(p, 30);
            let mut pw = PadicScalar::one(p, 30);
            for s in 0..(p as u64).pow(n - 1) {
                direct = &direct + &(&mu.values()[&teichmuller_join(p, n, *b, s)] * &pw);
                pw = &pw * &one_t;
            }
            assert!(g.eval_scalar(&t).agrees_with(&direct, 25));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn embedding_intertwines_twist(seed in any::<u64>(), p in prop_oneof![Just(3u32), Just(5)], n in 1u32..=2) {
        let mu = integral_measure(&mut rng(seed), p, n, 25);
        let d = 30;
        let lhs = embed_measure(&mu.twist(1).unwrap(), d, 1);
        let rhs = d_cw(&embed_measure(&mu, d + 1, 1), 1);
        for (a, b) in lhs.coeffs().iter().zip(rhs.coeffs()) {
            prop_assert!(a.agrees_with(b, 20), "{} vs {}", a, b);
        }
    }

    #[test]
    fn reduction_recovers_remainder(seed in any::<u64>(), n in 1u32..=2) {
        let p = 3;
        let (l, l2) = (1, 3);
        let omega = LogSeries::polynomial(p, 1, omega_product(p, n, l, l2, 60).unwrap());
        let d = omega.degree();
        let q = integral_polynomial(&mut rng(seed), p, 1, 10, 60);
        let r = integral_polynomial(&mut rng(seed ^ 1), p, 1, d - 1, 60);
        let f = poly_mul(&q, &omega).unwrap().add(&r);
        let got = reduce_mod_omega(&f, n, l, l2, 60).unwrap();
        for (a, b) in got.coeffs().iter().zip(r.coeffs()) {
            prop_assert!(a.agrees_with(b, 30));
        }
    }
}

#[test]
fn points_of_omega_are_roots() {
    use logp::cyclotomic::CyclotomicNumber;
    let p = 3;
    let n = 2;
    let omega = omega_product(p, n, 1, 2, 60).unwrap();
    for j in 1..=2i64 {
        let uj = PadicScalar::from_i64(p, u_generator(p), 60).pow(j).unwrap();
        for k in 0..9 {
            let x = CyclotomicNumber::zeta_power(p, n, k, 60).scale(&uj).sub_ref(&CyclotomicNumber::one(p, n, 60));
            let y = x.eval_poly(&omega);
            assert!(y.coeff_ord_min() >= Valuation::int(40), "j={j} k={k}");
        }
    }
}
