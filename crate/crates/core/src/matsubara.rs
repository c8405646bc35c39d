//! Imaginary-axis evaluation of the free-space interaction: the built-in
//! oracle for the real-axis machinery.
//!
//! Rotating the frequency integral onto the imaginary axis turns it into a
//! sum over thermal frequencies ξ_n = 2πnT (n = 0 gets half weight):
//!
//!   W(R, T) = −(2T/R⁶) Σ'_{n≥0} α_A(iξ_n) α_B(iξ_n) e^{−2ξ_nR} P(ξ_nR),
//!   P(x) = x⁴ + 2x³ + 5x² + 6x + 3,
//!
//! and at T = 0 the sum becomes (1/2πλ → dξ/2π)
//!
//!   W(R, 0) = −(1/πR⁶) ∫₀^∞ dξ α_A(iξ) α_B(iξ) e^{−2ξR} P(ξR).
//!
//! Everything on this axis is smooth, positive-weighted, and rapidly
//! convergent — none of the oscillatory machinery is involved — so the two
//! routes share no numerics and cross-check each other end to end. The sum
//! itself is validated at start-up against a third, closed-form route: with
//! frequency-independent polarizabilities it must reproduce the far-zone
//! radial operator acting on the thermal kernel, identically in R/λ.
//!
//! The imaginary-axis polarizability here is the undamped one, so the
//! oracle targets the ideal (γ → 0) interaction energy; comparisons against
//! real-axis values carry an explicit damping-bias allowance of relative
//! size γ/2k₀ per atom.

use crate::atom::AtomModel;
use crate::error::{Error, Result};
use crate::operators;
use crate::potentials::{self, Method, PotentialResult};
use crate::quadrature::{self, QuadratureOptions};
use crate::thermal::ThermalBath;
use std::f64::consts::PI;
use std::sync::OnceLock;

/// P(x) = x⁴ + 2x³ + 5x² + 6x + 3, the polynomial multiplying e^{−2x} in
/// the imaginary-axis kernel. ∫₀^∞ e^{−2x} P(x) dx = 23/4, which is where
/// the zero-temperature far-zone 23 comes from.
pub fn kernel_polynomial(x: f64) -> f64 {
    (((x + 2.0) * x + 5.0) * x + 6.0) * x + 3.0
}

const MAX_TERMS: usize = 10_000_000;

/// Geometric-style bound on the dropped tail of an exponentially decaying
/// term sequence with spacing dx, once the last kept |term| is known. The
/// e^{−1.9dx} ratio absorbs the ≤ e^{0.1dx} polynomial growth of P past
/// x = 40; the polarizability factors only decay further.
fn sum_tail_bound(last_term: f64, dx: f64) -> f64 {
    let rho = (-1.9 * dx).exp().min(0.999_999);
    last_term.abs() * rho / (1.0 - rho)
}

/// Σ'_{n≥0} e^{−2 n dx} P(n dx) with half weight at n = 0, plus an error
/// bound. Pure geometry/temperature factor — no atomic response.
fn raw_thermal_sum(dx: f64) -> Result<(f64, f64)> {
    if !(dx > 0.0 && dx.is_finite()) {
        return Err(Error::Domain(format!(
            "thermal sum needs a positive finite spacing r/lambda, got {dx}"
        )));
    }
    let mut acc = 0.5 * kernel_polynomial(0.0);
    let mut comp = 0.0;
    let mut abs_sum = acc;
    let mut n = 1usize;
    loop {
        let x = n as f64 * dx;
        let term = (-2.0 * x).exp() * kernel_polynomial(x);
        let y = term - comp;
        let t = acc + y;
        comp = (t - acc) - y;
        acc = t;
        abs_sum += term;
        if x > 40.0 && term <= f64::EPSILON * acc {
            return Ok((acc, sum_tail_bound(term, dx) + 2.0 * f64::EPSILON * abs_sum));
        }
        n += 1;
        if n > MAX_TERMS {
            return Err(Error::NonConvergence {
                context: format!("thermal sum with spacing {dx} exceeded {MAX_TERMS} terms"),
                last: [acc, acc + term],
                estimate: acc,
            });
        }
    }
}

/// Free-space interaction energy from the imaginary axis. Exact in every
/// regime; works for undamped atoms (damping is not needed off the real
/// axis and is deliberately not used).
pub fn free_space_oracle(
    a: &AtomModel,
    b: &AtomModel,
    r: f64,
    bath: &ThermalBath,
    opts: &QuadratureOptions,
) -> Result<PotentialResult> {
    potentials::check_separation(r)?;
    let regime = potentials::classify_free_regime(a, b, r, bath);
    let warnings = potentials::standard_warnings(a, b, bath);
    let (energy, error_estimate) = if bath.is_zero() {
        let km = a.max_k0().max(b.max_k0());
        let kf = a.min_k0().min(b.min_k0());
        let f = |xi: f64| {
            a.polarizability_imag_axis(xi)
                * b.polarizability_imag_axis(xi)
                * (-2.0 * xi * r).exp()
                * kernel_polynomial(xi * r)
        };
        // Past the exponential support the integrand still has the
        // algebraic ξ⁻⁴ polarizability tail; when 2Rk₀ < 1 that tail is
        // what limits accuracy, so force the walk through it.
        let blend = (1.0 / (2.0 * r * km)).powi(2).min(1.0);
        let reach = km * ((20.0 / opts.rel_tol).cbrt() * blend).min(2000.0);
        let est =
            quadrature::smooth_decaying_integral(&f, 1.0 / (2.0 * r), 0.25 * kf, reach, opts)?;
        let scale = 1.0 / (PI * r.powi(6));
        (-scale * est.value, scale * est.error)
    } else {
        let t = bath.temperature();
        let lambda = bath.thermal_length()?;
        let dx = r / lambda;
        let mut acc = 0.5 * a.polarizability_imag_axis(0.0)
            * b.polarizability_imag_axis(0.0)
            * kernel_polynomial(0.0);
        let mut comp = 0.0;
        let mut abs_sum = acc.abs();
        let mut n = 1usize;
        let (sum, tail) = loop {
            let x = n as f64 * dx;
            let xi = n as f64 / lambda;
            let term = a.polarizability_imag_axis(xi)
                * b.polarizability_imag_axis(xi)
                * (-2.0 * x).exp()
                * kernel_polynomial(x);
            let y = term - comp;
            let s = acc + y;
            comp = (s - acc) - y;
            acc = s;
            abs_sum += term.abs();
            if x > 40.0 && term.abs() <= f64::EPSILON * acc.abs() {
                break (acc, sum_tail_bound(term, dx));
            }
            n += 1;
            if n > MAX_TERMS {
                return Err(Error::NonConvergence {
                    context: format!(
                        "imaginary-axis sum at r = {r}, T = {t} exceeded {MAX_TERMS} terms"
                    ),
                    last: [acc, acc + term],
                    estimate: -2.0 * t / r.powi(6) * acc,
                });
            }
        };
        let scale = 2.0 * t / r.powi(6);
        (-scale * sum, scale * (tail + 2.0 * f64::EPSILON * abs_sum))
    };
    Ok(PotentialResult {
        energy,
        method: Method::MatsubaraOracle,
        regime,
        error_estimate,
        terms: None,
        warnings,
    })
}

/// One bootstrap check: the raw thermal sum against the far-zone radial
/// operator acting on the thermal kernel, which must agree identically
/// (for frequency-independent response the two are the same function of
/// r/λ written two ways).
#[derive(Debug, Clone)]
pub struct BootstrapCase {
    pub r_over_lambda: f64,
    pub sum_side: f64,
    pub operator_side: f64,
    pub rel_err: f64,
    pub pass: bool,
}

const BOOTSTRAP_TOL: f64 = 1e-10;

/// Sweep r/λ over three decades and compare −(2/r⁶) Σ' e^{−2x_n} P(x_n)
/// with the operator form Q_r[coth(r/2λ)] at λ = 1.
pub fn bootstrap_report() -> Result<Vec<BootstrapCase>> {
    let lambda = 1.0;
    let (lo, hi) = (0.05f64, 50.0f64);
    let mut out = Vec::with_capacity(20);
    for i in 0..20 {
        let frac = i as f64 / 19.0;
        let r = lo * (hi / lo).powf(frac);
        let (sum, _) = raw_thermal_sum(r / lambda)?;
        let sum_side = -2.0 * sum / r.powi(6);
        let operator_side = operators::qr_coth(r, lambda)?;
        let rel_err = (sum_side - operator_side).abs() / operator_side.abs();
        out.push(BootstrapCase {
            r_over_lambda: r / lambda,
            sum_side,
            operator_side,
            rel_err,
            pass: rel_err <= BOOTSTRAP_TOL,
        });
    }
    Ok(out)
}

/// Run the bootstrap once per process and refuse oracle comparisons if the
/// two closed routes ever disagree.
pub fn ensure_oracle_bootstrap() -> Result<()> {
    static GATE: OnceLock<std::result::Result<(), String>> = OnceLock::new();
    GATE.get_or_init(|| {
        let cases = bootstrap_report().map_err(|e| e.to_string())?;
        let failed: Vec<String> = cases
            .iter()
            .filter(|c| !c.pass)
            .map(|c| format!("r/lambda = {:.3} (rel err {:.2e})", c.r_over_lambda, c.rel_err))
            .collect();
        if failed.is_empty() {
            Ok(())
        } else {
            Err(format!("imaginary-axis bootstrap failed at {}", failed.join(", ")))
        }
    })
    .clone()
    .map_err(Error::InvalidConfiguration)
}

/// Outcome of one oracle-versus-real-axis comparison.
#[derive(Debug, Clone)]
pub struct OracleReport {
    pub oracle: PotentialResult,
    pub real_axis: PotentialResult,
    /// First-order allowance for the real-axis damping, |W|·Σ γ/2k₀.
    pub gamma_bias: f64,
    pub combined_tolerance: f64,
    pub difference: f64,
    pub consistent: bool,
}

/// Evaluate the same free-space configuration on both contours and report
/// whether they agree within their combined honest tolerances.
pub fn cross_validate_free_space(
    a: &AtomModel,
    b: &AtomModel,
    r: f64,
    bath: &ThermalBath,
    opts: &QuadratureOptions,
) -> Result<OracleReport> {
    ensure_oracle_bootstrap()?;
    let oracle = free_space_oracle(a, b, r, bath, opts)?;
    let real_axis = potentials::free_space_full(a, b, r, bath, opts)?;
    let gamma_bias = oracle.energy.abs()
        * (0.5 * a.gamma() / a.min_k0() + 0.5 * b.gamma() / b.min_k0());
    let difference = (oracle.energy - real_axis.energy).abs();
    let scale = oracle.energy.abs().max(real_axis.energy.abs());
    let combined_tolerance = 1.5 * gamma_bias
        + oracle.error_estimate
        + real_axis.error_estimate
        + 1e-12 * scale;
    Ok(OracleReport {
        oracle,
        real_axis,
        gamma_bias,
        combined_tolerance,
        difference,
        consistent: difference <= combined_tolerance,
    })
}
