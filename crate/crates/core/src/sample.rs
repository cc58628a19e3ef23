//! Seeded random data for tests, benches and the `gen` subcommand.

use num_bigint::{BigUint, RandBigInt};
use rand::Rng;

use crate::iwasawa::CycMeasure;
use crate::logseries::{ell, LogSeries};
use crate::padic::{p_power, PadicScalar};

/// A random unit times `p^val` with relative precision `prec`.
pub fn scalar_with_val<R: Rng>(rng: &mut R, p: u32, val: i64, prec: u32) -> PadicScalar {
    let m = p_power(p, prec);
    let mut u: BigUint = rng.gen_biguint_below(&m);
    while (&u % p).bits() == 0 {
        u = rng.gen_biguint_below(&m);
    }
    PadicScalar::from_parts(p, val, &u, prec).expect("unit")
}

/// Random `p`-adic integer: zero with probability `1/8`, else valuation in `[0, 3]`.
pub fn integral_scalar<R: Rng>(rng: &mut R, p: u32, prec: u32) -> PadicScalar {
    if rng.gen_ratio(1, 8) {
        PadicScalar::zero(p)
    } else {
        let v = rng.gen_range(0..=3);
        scalar_with_val(rng, p, v, prec)
    }
}

/// A polynomial of degree `d` in the unit ball of `H_h`: `ord(a_i) ≥ -hℓ(i)`.
pub fn unit_ball_series<R: Rng>(rng: &mut R, p: u32, h: u32, d: usize, prec: u32) -> LogSeries {
    let coeffs = (0..=d)
        .map(|i| {
            if rng.gen_ratio(1, 10) {
                PadicScalar::zero(p)
            } else {
                let base = -((h * ell(p, i as u64)) as i64);
                let v = base + rng.gen_range(0..=2);
                scalar_with_val(rng, p, v, prec)
            }
        })
        .collect();
    LogSeries::polynomial(p, h, coeffs)
}

/// A polynomial with integral coefficients.
pub fn integral_polynomial<R: Rng>(rng: &mut R, p: u32, h: u32, d: usize, prec: u32) -> LogSeries {
    LogSeries::polynomial(p, h, (0..=d).map(|_| integral_scalar(rng, p, prec)).collect())
}

pub fn integral_measure<R: Rng>(rng: &mut R, p: u32, n: u32, prec: u32) -> CycMeasure {
    CycMeasure::from_fn(p, n, |_| integral_scalar(rng, p, prec))
}
