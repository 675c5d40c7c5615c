use super::dd::DoubleDouble;
use crate::error::{Error, Result};

/// Even Bernoulli numbers `B_2 .. B_18` as exact fractions.
const BERNOULLI_EVEN: [(i64, i64); 9] = [
    (1, 6),
    (-1, 30),
    (1, 42),
    (-1, 30),
    (5, 66),
    (-691, 2730),
    (7, 6),
    (-3617, 510),
    (43867, 798),
];

/// Arguments are shifted up to at least this before the asymptotic series is used.
const ASYMPTOTIC_START: f64 = 100.0;

/// Natural logarithm of the gamma function for positive real arguments.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(x));
    }
    Ok(libm::lgamma(x))
}

/// `Γ(x) / Γ(x + ½)` for `x > 0`, to double-double precision.
///
/// The argument is shifted to `X ≥ 100` with `Γ(x)/Γ(x+½) = (x+½)/x · Γ(x+1)/Γ(x+3/2)`,
/// then `ln Γ(X+½) - ln Γ(X) = ½ ln X + Σ_m (2^{1-2m} - 2) B_{2m} / (2m (2m-1) X^{2m-1})`.
pub fn gamma_half_ratio(x: DoubleDouble) -> Result<DoubleDouble> {
    if !(x.hi > 0.0) || !x.hi.is_finite() {
        return Err(Error::Domain(x.to_f64()));
    }
    let half = DoubleDouble::from_f64(0.5);
    let mut shift = DoubleDouble::ONE;
    let mut big = x;
    while big.hi < ASYMPTOTIC_START {
        shift = shift * (big + half) / big;
        big += DoubleDouble::ONE;
    }
    let inv = big.recip();
    let inv2 = inv * inv;
    let mut power = inv;
    let mut series = DoubleDouble::ZERO;
    for (m, &(num, den)) in BERNOULLI_EVEN.iter().enumerate() {
        let m = m as i32 + 1;
        let weight = DoubleDouble::from_f64(2f64.powi(1 - 2 * m) - 2.0)
            * DoubleDouble::from_ratio(num, den)
            / DoubleDouble::from_f64((2 * m * (2 * m - 1)) as f64);
        series += weight * power;
        power = power * inv2;
    }
    Ok(shift * big.sqrt().recip() * (-series).exp_small())
}
