use crate::error::{Error, Result};

/// Digamma function ψ(x) for x > 0.
///
/// Shifts the argument up to x ≥ 6 with ψ(x) = ψ(x + 1) − 1/x, then applies
/// the asymptotic expansion. Absolute error is below 1e-13 for x ≥ 1.
pub fn digamma(x: f64) -> Result<f64> {
    if !x.is_finite() || x <= 0.0 {
        return Err(Error::invalid(
            "digamma argument",
            format!("{x} is not a positive finite number"),
        ));
    }
    Ok(digamma_unchecked(x))
}

pub(crate) fn digamma_unchecked(mut x: f64) -> f64 {
    let mut acc = 0.0;
    while x < 6.0 {
        acc -= 1.0 / x;
        x += 1.0;
    }
    let inv2 = 1.0 / (x * x);
    // Bernoulli terms B_2n / (2n x^2n) for n = 1..7.
    let series = inv2
        * (1.0 / 12.0
            - inv2
                * (1.0 / 120.0
                    - inv2
                        * (1.0 / 252.0
                            - inv2 * (1.0 / 240.0 - inv2 * (1.0 / 132.0 - inv2 * (691.0 / 32760.0 - inv2 / 12.0))))));
    acc + x.ln() - 0.5 / x - series
}
