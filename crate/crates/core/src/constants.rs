//! Growth constants attached to a prime `p` and an order `h`.


use crate::logseries::ell;
use crate::padic::ord_p_i64;

/// Outward rounding applied before any floor or ceiling of a real constant.
pub const ROUNDING: f64 = 1.0 / (1u64 << 40) as f64;

/// Floor of a real lower bound. Values within [`ROUNDING`] of an integer are
/// read as that integer; anything else is pushed down by [`ROUNDING`] first.
pub fn floor_down(x: f64) -> i64 {
    let r = x.round();
    if (x - r).abs() < ROUNDING {
        r as i64
    } else {
        (x - ROUNDING).floor() as i64
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GrowthConstants {
    pub p: u32,
    pub h: u32,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
    pub c_phi: f64,
    /// `c(h)` before flooring.
    pub c_h_real: f64,
    pub c_h: i64,
}

fn factorial_ord(p: u32, h: u32) -> i64 {
    (1..=h as i64).map(|k| ord_p_i64(p, k) as i64).sum()
}

pub fn constants(p: u32, h: u32) -> GrowthConstants {
    let hf = h as f64;
    let lnp = (p as f64).ln();
    let (c1, c3, c4) = if h == 0 {
        (0.0, 0.0, 0.0)
    } else {
        let c1 = (-2.0 * hf + (hf / lnp) * (1.0 + (lnp / hf).ln())).min(0.0);
        let c3 = hf - (hf / lnp) * (hf / lnp).ln();
        let c4 = (-(ell(p, h as u64 + 1) as f64) * hf).min((hf / lnp) * (1.0 + (p as f64 / hf).ln()));
        (c1, c3, c4)
    };
    let c2 = (p as f64 - hf).max(0.0);
    let c_phi = c4 - c2;
    let c_h_real = hf * (2.0 - ell(p, h as u64) as f64) - p as f64 - factorial_ord(p, h) as f64 + c_phi.min(0.0);
    GrowthConstants { p, h, c1, c2, c3, c4, c_phi, c_h_real, c_h: floor_down(c_h_real) }
}

impl GrowthConstants {
    pub fn c1_floor(&self) -> i64 {
        floor_down(self.c1)
    }

    pub fn c2_ceil(&self) -> i64 {
        -floor_down(-self.c2)
    }

    /// Integer lower bound for `min{c3, 0} - c2`, the loss of `v_h` under one Frobenius.
    pub fn phi_loss(&self) -> i64 {
        floor_down(self.c3.min(0.0) - self.c2)
    }
}
