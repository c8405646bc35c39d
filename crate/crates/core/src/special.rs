//! Stable elementary special functions: the hyperbolic cotangent, its first
//! four derivatives, and the Bose-Einstein occupation number.
//!
//! Everything is routed through `expm1` so that both the small-argument
//! (`coth y ~ 1/y`) and large-argument (`coth y -> 1`, derivatives -> 0)
//! regimes come out with full relative precision and without overflow traps.

use crate::error::{Error, Result};

/// coth(y) for y > 0, accurate over the whole range.
///
/// Uses coth(y) = (2 + m)/(-m) with m = expm1(-2y), which is exact in both
/// tails: m -> 0⁻ gives 1/y growth, m -> -1 gives exactly 1.
pub fn coth(y: f64) -> f64 {
    debug_assert!(y > 0.0);
    let m = (-2.0 * y).exp_m1();
    (2.0 + m) / (-m)
}

/// coth(y) and its derivatives d^n/dy^n for n = 0..=4.
///
/// With u = coth y and w = u' = -csch²y, the chain closes on polynomials:
/// u'' = -2uw, u''' = w(6u² - 2), u'''' = 8uw(2 - 3u²).
/// w is evaluated as -4(1+m)/m², m = expm1(-2y), never as 1 - u², which
/// would cancel catastrophically for small y.
pub fn coth_derivatives(y: f64) -> [f64; 5] {
    debug_assert!(y > 0.0);
    let m = (-2.0 * y).exp_m1();
    let u = (2.0 + m) / (-m);
    let w = -4.0 * (1.0 + m) / (m * m);
    [u, w, -2.0 * u * w, w * (6.0 * u * u - 2.0), 8.0 * u * w * (2.0 - 3.0 * u * u)]
}

/// Mean photon occupation 1/(e^x - 1) for x > 0; underflows gracefully to 0.
pub fn bose_occupation(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!(
            "bose occupation needs a positive argument, got {x}"
        )));
    }
    Ok(1.0 / x.exp_m1())
}
