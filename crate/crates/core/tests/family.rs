use logp::cyclotomic::CyclotomicNumber;
use logp::family::{check_family, exp_point, exp_point_direct, family_eval, gamma_family_eval, plan_degree, reconstruct};
use logp::iwasawa::CycMeasure;
use logp::sample::{integral_measure, integral_polynomial};
use logp::{Error, PadicScalar, SolveOptions, ToyCrystal, Valuation};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn crystal(p: u32, num: i64, den: i64) -> ToyCrystal {
    ToyCrystal::new("e", PadicScalar::from_ratio_i64(p, num, den, 60).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn galois_transport(seed in any::<u64>(), c in 1u64..9, g in 1u64..9) {
        prop_assume!(c % 3 != 0 && g % 3 != 0);
        let p = 3;
        let mu = integral_measure(&mut ChaCha8Rng::seed_from_u64(seed), p, 2, 40);
        let cr = crystal(p, 2, 1);
        let x = exp_point(&cr, &mu, 1, 1, (2, c), 2, 20).unwrap();
        let y = exp_point(&cr, &mu, 1, 1, (2, c * g % 9), 2, 20).unwrap();
        prop_assert!(x.galois_apply(g as i64).unwrap().eq_at_precision(&y));
    }

    #[test]
    fn term_by_term_matches_coefficients(seed in any::<u64>(), m in 1u32..=2) {
        let p = 3;
        let mu = integral_measure(&mut ChaCha8Rng::seed_from_u64(seed), p, 1, 60);
        let cr = crystal(p, 4, 1);
        let d = plan_degree(p, 1, m, 15);
        let a = exp_point(&cr, &mu, 1, 1, (m, 1), m, 20).unwrap();
        let b = exp_point_direct(&cr, &mu, 1, 1, (m, 1), m, d, SolveOptions::new(25), None).unwrap();
        prop_assert!(a.sub_ref(&b).coeff_ord_min() >= Valuation::int(10));
    }
}

#[test]
fn zero_measure_gives_zero_family() {
    let fam = family_eval(&crystal(3, 2, 1), &CycMeasure::zero(3, 2), (1, 2), 2, 1, 20).unwrap();
    assert!(fam.entries.values().all(CyclotomicNumber::is_zero));
    assert_eq!(check_family(&fam, 1).cond_ii, None);
}

#[test]
fn measured_delta_by_order() {
    let p = 3;
    let mu = integral_measure(&mut ChaCha8Rng::seed_from_u64(5), p, 2, 40);
    let mut deltas = Vec::new();
    for h in 1..=3u32 {
        let fam = family_eval(&crystal(p, 2, 3), &mu, (1, 1 + h as i64), 2, h, 20).unwrap();
        let rep = check_family(&fam, h);
        assert!(rep.passed(), "{:?}", rep.failures);
        deltas.push(rep.cond_ii.unwrap());
    }
    assert!(deltas.windows(2).all(|w| w[1] <= w[0]), "{deltas:?}");
}

#[test]
fn congruence_is_reported_but_does_not_block_interpolation() {
    let p = 3;
    let g = integral_polynomial(&mut ChaCha8Rng::seed_from_u64(2), p, 1, 10, 60);
    let mut fam = gamma_family_eval(&g, (1, 2), 1, 60).unwrap();
    assert!(reconstruct(&fam, 1, 60).is_ok());
    let kick = CyclotomicNumber::from_scalar(1, PadicScalar::one(p, 60).shift(-1));
    for c in [1u64, 2] {
        let x = fam.entries.get_mut(&(1, 1, c)).unwrap();
        *x = x.add_ref(&kick);
    }
    let rep = check_family(&fam, 1);
    assert!(rep.cond_i && !rep.cond_iii);
    assert!(reconstruct(&fam, 1, 60).is_ok());
    let x = fam.entries.get_mut(&(1, 1, 1)).unwrap();
    *x = x.add_ref(&CyclotomicNumber::zeta_power(p, 1, 1, 60));
    assert!(matches!(reconstruct(&fam, 1, 60), Err(Error::InconsistentFamily(_))));
}
