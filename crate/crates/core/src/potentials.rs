//! Interaction potentials between two ground-state atoms.
//!
//! Everything here evaluates one quantity — the temperature-dependent
//! dispersion interaction energy W of two atoms, in free space or facing a
//! perfectly reflecting wall — by one of several routes:
//!
//! * full real-axis integral: W = −(1/2π) Im ∫₀^∞ dk coth(k/2T)
//!   α_A(k) α_B(k) Σ Vc², with Vc the outgoing dipole tensor. Near a wall
//!   the tensor is replaced by Vc(R) − σVc(R̄) (image construction), whose
//!   square splits into direct, image, and cross channels integrated
//!   separately. Requires damped polarizabilities: the retarded response
//!   keeps every resonance below the contour.
//! * near-zone integral: the kR ≪ 1 limit of the same integrand,
//!   W = −(3/πR⁶) Im ∫ dk coth(k/2T) α_A α_B e^{2ikR}.
//! * far-zone operator forms: static polarizabilities times derivatives of
//!   the thermal kernel (exact in the far zone at every temperature), and
//!   their high-T, low-T, and mixed closed-form limits.
//!
//! Every result carries the regime classification of its inputs, an error
//! estimate (zero for closed forms), the per-channel breakdown near the
//! wall, and warnings whenever a formula is asked to operate outside the
//! regime that justifies it — asymptotics warn rather than refuse.

use crate::atom::AtomModel;
use crate::error::{Error, Result};
use crate::geometry::WallConfiguration;
use crate::operators;
use crate::quadrature::{self, QuadratureOptions, ResonanceSeed};
use crate::tensors::{self, CrossGeometry};
use crate::thermal::ThermalBath;
use std::f64::consts::PI;

/// Safety margin separating the asymptotic regimes: near means a factor of
/// this below every relevant scale, far a factor of this above.
pub const REGIME_MARGIN: f64 = 10.0;

/// Which route produced a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    FullIntegral,
    NearZone,
    FarZoneQr,
    ZeroTFar,
    LimitHighT,
    LimitZeroTWall,
    LimitMixed,
    MatsubaraOracle,
}

impl Method {
    pub fn label(self) -> &'static str {
        match self {
            Method::FullIntegral => "full-integral",
            Method::NearZone => "near-zone",
            Method::FarZoneQr => "far-zone-qr",
            Method::ZeroTFar => "zero-t-far",
            Method::LimitHighT => "limit-high-t",
            Method::LimitZeroTWall => "limit-zero-t-wall",
            Method::LimitMixed => "limit-mixed",
            Method::MatsubaraOracle => "matsubara-oracle",
        }
    }
}

/// Where the configuration sits relative to the transition wavelengths and
/// the thermal length.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegimeLabel {
    NearZone,
    FarZoneLowT,
    FarZoneMixed,
    FarZoneHighT,
    Crossover,
}

impl RegimeLabel {
    pub fn label(self) -> &'static str {
        match self {
            RegimeLabel::NearZone => "near-zone",
            RegimeLabel::FarZoneLowT => "far-zone-low-t",
            RegimeLabel::FarZoneMixed => "far-zone-mixed",
            RegimeLabel::FarZoneHighT => "far-zone-high-t",
            RegimeLabel::Crossover => "crossover",
        }
    }

    pub fn is_far(self) -> bool {
        matches!(
            self,
            RegimeLabel::FarZoneLowT | RegimeLabel::FarZoneMixed | RegimeLabel::FarZoneHighT
        )
    }
}

/// Per-channel breakdown of a wall calculation.
#[derive(Debug, Clone, Copy)]
pub struct WallTerms {
    pub direct: f64,
    pub image: f64,
    pub cross: f64,
}

/// One computed interaction energy with its provenance.
#[derive(Debug, Clone)]
pub struct PotentialResult {
    pub energy: f64,
    pub method: Method,
    pub regime: RegimeLabel,
    pub error_estimate: f64,
    pub terms: Option<WallTerms>,
    pub warnings: Vec<String>,
}

/// How the dispatching entry points choose a route.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MethodChoice {
    Auto,
    Full,
    Asymptotic,
}

pub(crate) fn check_separation(r: f64) -> Result<()> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::Domain(format!("separation must be positive and finite, got {r}")));
    }
    Ok(())
}

fn require_damped(a: &AtomModel, b: &AtomModel) -> Result<()> {
    if a.gamma() <= 0.0 || b.gamma() <= 0.0 {
        return Err(Error::ResonanceHandling(
            "real-axis integration needs damped polarizabilities on both atoms: undamped \
             resonances sit exactly on the integration path; give each atom a small positive \
             linewidth (it enters the result only at relative order gamma/k0)"
                .into(),
        ));
    }
    Ok(())
}

fn max_k0(a: &AtomModel, b: &AtomModel) -> f64 {
    a.max_k0().max(b.max_k0())
}

fn min_k0(a: &AtomModel, b: &AtomModel) -> f64 {
    a.min_k0().min(b.min_k0())
}

fn static_product(a: &AtomModel, b: &AtomModel) -> f64 {
    a.static_polarizability() * b.static_polarizability()
}

pub(crate) fn standard_warnings(a: &AtomModel, b: &AtomModel, bath: &ThermalBath) -> Vec<String> {
    let mut w = Vec::new();
    if !bath.is_zero() && bath.temperature() >= 0.1 * min_k0(a, b) {
        w.push(
            "temperature reaches 10% of the lowest transition wavenumber; the ground-state \
             (no thermal population) response model becomes marginal"
                .to_string(),
        );
    }
    w
}

fn regime_warning(used: &str, valid: &str, regime: RegimeLabel) -> String {
    format!(
        "{used} applied outside its regime (configuration classified as {}, formula assumes \
         {valid}); treat the value as an extrapolation",
        regime.label()
    )
}

/// Classify a free-space configuration against the transition wavelengths
/// and the thermal length, with a safety factor of [`REGIME_MARGIN`].
pub fn classify_free_regime(
    a: &AtomModel,
    b: &AtomModel,
    r: f64,
    bath: &ThermalBath,
) -> RegimeLabel {
    let m = REGIME_MARGIN;
    let lambda = bath.thermal_length_or_inf();
    if r <= 1.0 / (m * max_k0(a, b)) && r <= lambda / m {
        return RegimeLabel::NearZone;
    }
    if r >= m / min_k0(a, b) {
        if r <= lambda / m {
            return RegimeLabel::FarZoneLowT;
        }
        if r >= m * lambda {
            return RegimeLabel::FarZoneHighT;
        }
    }
    RegimeLabel::Crossover
}

/// Classify a wall configuration: both the direct distance R and the image
/// distance R̄ are weighed against the thermal length.
pub fn classify_wall_regime(
    a: &AtomModel,
    b: &AtomModel,
    cfg: &WallConfiguration,
    bath: &ThermalBath,
) -> RegimeLabel {
    let m = REGIME_MARGIN;
    let lambda = bath.thermal_length_or_inf();
    let s = cfg.separations();
    if s.r <= 1.0 / (m * max_k0(a, b)) && s.rbar <= lambda / m {
        return RegimeLabel::NearZone;
    }
    if s.r >= m / min_k0(a, b) {
        if s.rbar <= lambda / m {
            return RegimeLabel::FarZoneLowT;
        }
        if s.r >= m * lambda {
            return RegimeLabel::FarZoneHighT;
        }
        if s.r <= lambda / m && s.rbar >= m * lambda {
            return RegimeLabel::FarZoneMixed;
        }
    }
    RegimeLabel::Crossover
}

fn resonance_seeds(a: &AtomModel, b: &AtomModel) -> Vec<ResonanceSeed> {
    let mut seeds = Vec::new();
    for atom in [a, b] {
        for t in atom.transitions() {
            seeds.push(ResonanceSeed {
                center: t.k0,
                width: (0.5 * atom.gamma()).max(1e-12 * t.k0),
            });
        }
    }
    seeds
}

/// How far in k the vacuum (regulated) pass must walk before its stop rule
/// may engage: past all resonance structure, and — when the oscillation is
/// slower than the amplitude features — far enough that the algebraic
/// k⁻⁴ polarizability tail is below the target.
fn vacuum_reach(k_max: f64, half_s: f64, rel_tol: f64) -> f64 {
    let base = (20.0 / rel_tol).cbrt();
    let blend = (PI / (2.0 * half_s * k_max)).powi(2).min(1.0);
    k_max * (base * blend).clamp(4.0, 2000.0)
}

/// Direct channel: −(1/2π) Im ∫ coth(k/2T) α_A α_B ΣVc²(k, r) dk, split
/// into the regulated vacuum pass and the exponentially decaying thermal
/// pass.
fn channel_self(
    a: &AtomModel,
    b: &AtomModel,
    r: f64,
    bath: &ThermalBath,
    seeds: &[ResonanceSeed],
    opts: &QuadratureOptions,
) -> Result<(f64, f64)> {
    let s = 2.0 * r;
    let km = max_k0(a, b);
    let f = |k: f64| {
        (a.polarizability_retarded(k)
            * b.polarizability_retarded(k)
            * tensors::outgoing_self_contraction(k, r))
        .im
    };
    let vac = quadrature::abel_regularized_integral(
        &f,
        s,
        0.25 * km,
        vacuum_reach(km, r, opts.rel_tol),
        seeds,
        opts,
    )?;
    let mut value = -vac.value / (2.0 * PI);
    let mut error = vac.error / (2.0 * PI);
    if !bath.is_zero() {
        let t = bath.temperature();
        let tf = |k: f64| f(k) * 2.0 / (k / t).exp_m1();
        let th = quadrature::thermal_decaying_integral(&tf, s, 0.25 * km, t, 0.0, seeds, opts)?;
        value -= th.value / (2.0 * PI);
        error += th.error / (2.0 * PI);
    }
    Ok((value, error))
}

/// Cross channel: +(1/π) Im ∫ coth(k/2T) α_A α_B Cc(k) dk with Cc the
/// σ-weighted mixed contraction of the outgoing tensors at R and R̄.
fn channel_cross(
    a: &AtomModel,
    b: &AtomModel,
    g: &CrossGeometry,
    bath: &ThermalBath,
    seeds: &[ResonanceSeed],
    opts: &QuadratureOptions,
) -> Result<(f64, f64)> {
    let s = g.r + g.rbar;
    let km = max_k0(a, b);
    let f = |k: f64| {
        (a.polarizability_retarded(k)
            * b.polarizability_retarded(k)
            * tensors::outgoing_cross_contraction(k, g))
        .im
    };
    let vac = quadrature::abel_regularized_integral(
        &f,
        s,
        0.25 * km,
        vacuum_reach(km, 0.5 * s, opts.rel_tol),
        seeds,
        opts,
    )?;
    let mut value = vac.value / PI;
    let mut error = vac.error / PI;
    if !bath.is_zero() {
        let t = bath.temperature();
        let tf = |k: f64| f(k) * 2.0 / (k / t).exp_m1();
        let th = quadrature::thermal_decaying_integral(&tf, s, 0.25 * km, t, 0.0, seeds, opts)?;
        value += th.value / PI;
        error += th.error / PI;
    }
    Ok((value, error))
}

/// Free-space interaction by the full real-axis integral. Valid in every
/// regime; needs damped atoms.
pub fn free_space_full(
    a: &AtomModel,
    b: &AtomModel,
    r: f64,
    bath: &ThermalBath,
    opts: &QuadratureOptions,
) -> Result<PotentialResult> {
    check_separation(r)?;
    require_damped(a, b)?;
    quadrature::ensure_default_selftest()?;
    let seeds = resonance_seeds(a, b);
    let (energy, error) = channel_self(a, b, r, bath, &seeds, opts)?;
    Ok(PotentialResult {
        energy,
        method: Method::FullIntegral,
        regime: classify_free_regime(a, b, r, bath),
        error_estimate: error,
        terms: None,
        warnings: standard_warnings(a, b, bath),
    })
}

/// Free-space interaction in the near zone (R far below every transition
/// wavelength and the thermal length), where the coupling reduces to the
/// static 1/R⁶ tensor contraction and the interaction becomes a sum over
/// imaginary-frequency polarizabilities:
///
/// W = −(6T/R⁶) Σ'ₙ α_A(iξ_n) α_B(iξ_n),   ξ_n = 2πnT.
///
/// At T = 0 the sum turns into the London integral, which evaluates in closed
/// form to −C₆/R⁶ with C₆ = [`london_coefficient`]. The imaginary-axis
/// polarizability is the ideal undamped response, so any linewidth supplied
/// for real-axis integration does not enter here; the full integral carries a
/// relative O(γ/k₀) bias against this formula.
pub fn free_space_near_zone(
    a: &AtomModel,
    b: &AtomModel,
    r: f64,
    bath: &ThermalBath,
    opts: &QuadratureOptions,
) -> Result<PotentialResult> {
    check_separation(r)?;
    opts.validate()?;
    let regime = classify_free_regime(a, b, r, bath);
    let mut warnings = standard_warnings(a, b, bath);
    if regime != RegimeLabel::NearZone {
        warnings.push(regime_warning(
            "the near-zone formula",
            "R far below every transition wavelength and the thermal length",
            regime,
        ));
    }
    let (energy, error) = if bath.is_zero() {
        let w = -london_coefficient(a, b) / r.powi(6);
        (w, 4.0 * f64::EPSILON * w.abs())
    } else {
        let t = bath.temperature();
        let lambda = bath.thermal_length()?;
        let scale = -6.0 * t / r.powi(6);
        // ξ²-weighted strengths: α(iξ) ≤ c/ξ², with equality approached from
        // below, so c_A c_B λ⁴/n⁴ is a rigorous bound on term n.
        let strength = |m: &AtomModel| -> f64 {
            m.transitions().iter().map(|tr| (2.0 / 3.0) * tr.k0 * tr.mu2).sum()
        };
        let cab = strength(a) * strength(b);
        let km = max_k0(a, b);
        let term = |n: usize| {
            let xi = n as f64 / lambda;
            a.polarizability_imag_axis(xi) * b.polarizability_imag_axis(xi)
        };
        let mut acc = 0.5 * term(0);
        let mut abs_acc = acc;
        let mut comp = 0.0_f64;
        let mut n = 0_usize;
        let tail_err = loop {
            n += 1;
            let v = term(n);
            let y = v - comp;
            let s = acc + y;
            comp = (s - acc) - y;
            acc = s;
            abs_acc += v;
            let xi = n as f64 / lambda;
            if xi >= 8.0 * km {
                // Past every resonance the terms are pinched between the pure
                // quartic falloff and g ≤ 1 times it, with g = αα ξ⁴/(c_A c_B)
                // increasing towards 1. Sum the quartic tail in closed form
                // (Euler–Maclaurin) and book the pinch width as its error.
                let g = v * xi.powi(4) / cab;
                let np = n as f64 + 1.0;
                let quartic = cab * lambda.powi(4) / np.powi(3)
                    * (1.0 / 3.0 + 0.5 / np + 1.0 / (3.0 * np * np));
                let half_gap = 0.5 * (1.0 - g) * quartic;
                if half_gap <= 0.25 * opts.rel_tol * acc.abs() {
                    acc += 0.5 * (1.0 + g) * quartic;
                    break half_gap + f64::EPSILON * quartic;
                }
            }
            if n >= opts.matsubara_max_terms {
                return Err(Error::NonConvergence {
                    context: "near-zone thermal sum did not meet its tail bound \
                              within the term budget"
                        .into(),
                    last: [acc, v],
                    estimate: cab * lambda.powi(4) / (3.0 * (n as f64).powi(3)),
                });
            }
        };
        let err = scale.abs() * (tail_err + 2.0 * f64::EPSILON * abs_acc);
        (scale * acc, err)
    };
    Ok(PotentialResult {
        energy,
        method: Method::NearZone,
        regime,
        error_estimate: error,
        terms: None,
        warnings,
    })
}

/// Free-space far zone at any temperature: static polarizabilities times
/// the radial operator acting on the thermal kernel. Routes to the
/// zero-temperature closed form when the bath is at T = 0.
pub fn free_space_far_zone(
    a: &AtomModel,
    b: &AtomModel,
    r: f64,
    bath: &ThermalBath,
) -> Result<PotentialResult> {
    check_separation(r)?;
    if bath.is_zero() {
        return free_space_limit_zero_t(a, b, r, bath);
    }
    let regime = classify_free_regime(a, b, r, bath);
    let mut warnings = standard_warnings(a, b, bath);
    if !regime.is_far() && regime != RegimeLabel::Crossover {
        warnings.push(regime_warning(
            "the far-zone operator formula",
            "R far above every transition wavelength",
            regime,
        ));
    }
    let lambda = bath.thermal_length()?;
    let energy =
        static_product(a, b) * bath.temperature() * operators::qr_coth(r, lambda)?;
    Ok(PotentialResult {
        energy,
        method: Method::FarZoneQr,
        regime,
        error_estimate: 0.0,
        terms: None,
        warnings,
    })
}

/// Zero-temperature far-zone closed form W = −23 α_A α_B /(4π R⁷).
pub fn free_space_limit_zero_t(
    a: &AtomModel,
    b: &AtomModel,
    r: f64,
    bath: &ThermalBath,
) -> Result<PotentialResult> {
    check_separation(r)?;
    let regime = classify_free_regime(a, b, r, bath);
    let mut warnings = standard_warnings(a, b, bath);
    if !bath.is_zero() {
        warnings.push(
            "zero-temperature limit evaluated with T > 0: the bath temperature is ignored"
                .to_string(),
        );
    }
    if regime != RegimeLabel::FarZoneLowT {
        warnings.push(regime_warning(
            "the zero-temperature far-zone form",
            "far zone with R far below the thermal length",
            regime,
        ));
    }
    Ok(PotentialResult {
        energy: -23.0 * static_product(a, b) / (4.0 * PI * r.powi(7)),
        method: Method::ZeroTFar,
        regime,
        error_estimate: 0.0,
        terms: None,
        warnings,
    })
}

/// High-temperature free-space limit W = −3 α_A α_B T / R⁶.
pub fn free_space_limit_high_t(
    a: &AtomModel,
    b: &AtomModel,
    r: f64,
    bath: &ThermalBath,
) -> Result<PotentialResult> {
    check_separation(r)?;
    if bath.is_zero() {
        return Err(Error::Domain(
            "the high-temperature limit needs T > 0 (it is linear in T)".into(),
        ));
    }
    let regime = classify_free_regime(a, b, r, bath);
    let mut warnings = standard_warnings(a, b, bath);
    if regime != RegimeLabel::FarZoneHighT {
        warnings.push(regime_warning(
            "the high-temperature form",
            "far zone with R far above the thermal length",
            regime,
        ));
    }
    Ok(PotentialResult {
        energy: -3.0 * static_product(a, b) * bath.temperature() / r.powi(6),
        method: Method::LimitHighT,
        regime,
        error_estimate: 0.0,
        terms: None,
        warnings,
    })
}

/// London coefficient C₆ = Σ_pq (2/3) μ²_p μ²_q /(k_p + k_q) over the
/// transition pairs, so that W → −C₆/R⁶ in the zero-temperature near zone.
pub fn london_coefficient(a: &AtomModel, b: &AtomModel) -> f64 {
    let mut c6 = 0.0;
    for p in a.transitions() {
        for q in b.transitions() {
            c6 += 2.0 / 3.0 * p.mu2 * q.mu2 / (p.k0 + q.k0);
        }
    }
    c6
}

/// Wall interaction by the full real-axis integral, channel by channel:
/// direct (as in free space at R), image (same form at R̄), and the
/// σ-weighted cross term. The reported energy is their sum.
pub fn wall_full(
    a: &AtomModel,
    b: &AtomModel,
    cfg: &WallConfiguration,
    bath: &ThermalBath,
    opts: &QuadratureOptions,
) -> Result<PotentialResult> {
    require_damped(a, b)?;
    quadrature::ensure_default_selftest()?;
    let sep = cfg.separations();
    let seeds = resonance_seeds(a, b);
    let (direct, e_d) = channel_self(a, b, sep.r, bath, &seeds, opts)?;
    let (image, e_i) = channel_self(a, b, sep.rbar, bath, &seeds, opts)?;
    let g = CrossGeometry::from_wall(cfg);
    let (cross, e_c) = channel_cross(a, b, &g, bath, &seeds, opts)?;
    Ok(PotentialResult {
        energy: direct + image + cross,
        method: Method::FullIntegral,
        regime: classify_wall_regime(a, b, cfg, bath),
        error_estimate: e_d + e_i + e_c,
        terms: Some(WallTerms { direct, image, cross }),
        warnings: standard_warnings(a, b, bath),
    })
}

/// Wall interaction integrating the squared image-subtracted tensor in one
/// pass (no channel split). Numerically redundant with [`wall_full`] by
/// construction — kept as a validation route for exactly that reason.
pub fn wall_full_combined(
    a: &AtomModel,
    b: &AtomModel,
    cfg: &WallConfiguration,
    bath: &ThermalBath,
    opts: &QuadratureOptions,
) -> Result<PotentialResult> {
    require_damped(a, b)?;
    quadrature::ensure_default_selftest()?;
    let sep = cfg.separations();
    let g = CrossGeometry::from_wall(cfg);
    let seeds = resonance_seeds(a, b);
    let km = max_k0(a, b);
    // ΣMc² = ΣVc²(R) + ΣVc²(R̄) − 2 Cc.
    let f = |k: f64| {
        let m2 = tensors::outgoing_self_contraction(k, sep.r)
            + tensors::outgoing_self_contraction(k, sep.rbar)
            - 2.0 * tensors::outgoing_cross_contraction(k, &g);
        (a.polarizability_retarded(k) * b.polarizability_retarded(k) * m2).im
    };
    // The fastest oscillation is e^{2ikR̄}; panels sized for it resolve the
    // slower phases too.
    let s = 2.0 * sep.rbar;
    let vac = quadrature::abel_regularized_integral(
        &f,
        s,
        0.25 * km,
        vacuum_reach(km, sep.r, opts.rel_tol),
        &seeds,
        opts,
    )?;
    let mut energy = -vac.value / (2.0 * PI);
    let mut error = vac.error / (2.0 * PI);
    if !bath.is_zero() {
        let t = bath.temperature();
        let tf = |k: f64| f(k) * 2.0 / (k / t).exp_m1();
        let th = quadrature::thermal_decaying_integral(&tf, s, 0.25 * km, t, 0.0, &seeds, opts)?;
        energy -= th.value / (2.0 * PI);
        error += th.error / (2.0 * PI);
    }
    Ok(PotentialResult {
        energy,
        method: Method::FullIntegral,
        regime: classify_wall_regime(a, b, cfg, bath),
        error_estimate: error,
        terms: None,
        warnings: standard_warnings(a, b, bath),
    })
}

/// Wall far zone at any temperature: operator forms for all three
/// channels. Routes to the zero-temperature closed form at T = 0.
pub fn wall_far_zone(
    a: &AtomModel,
    b: &AtomModel,
    cfg: &WallConfiguration,
    bath: &ThermalBath,
) -> Result<PotentialResult> {
    if bath.is_zero() {
        return wall_limit_zero_t(a, b, cfg, bath);
    }
    let regime = classify_wall_regime(a, b, cfg, bath);
    let mut warnings = standard_warnings(a, b, bath);
    if !regime.is_far() && regime != RegimeLabel::Crossover {
        warnings.push(regime_warning(
            "the far-zone operator formula",
            "R far above every transition wavelength",
            regime,
        ));
    }
    let sep = cfg.separations();
    let g = CrossGeometry::from_wall(cfg);
    let alpha = static_product(a, b);
    let t = bath.temperature();
    let lambda = bath.thermal_length()?;
    let direct = alpha * t * operators::qr_coth(sep.r, lambda)?;
    let image = alpha * t * operators::qr_coth(sep.rbar, lambda)?;
    let kernel = operators::thermal_cross_kernel(sep.r + sep.rbar, lambda)?;
    let cross = alpha * t * operators::cross_bilinear(&g, &kernel);
    Ok(PotentialResult {
        energy: direct + image + cross,
        method: Method::FarZoneQr,
        regime,
        error_estimate: 0.0,
        terms: Some(WallTerms { direct, image, cross }),
        warnings,
    })
}

/// Zero-temperature wall limit: retarded R⁻⁷ forms for direct and image
/// channels plus the 1/s cross kernel.
pub fn wall_limit_zero_t(
    a: &AtomModel,
    b: &AtomModel,
    cfg: &WallConfiguration,
    bath: &ThermalBath,
) -> Result<PotentialResult> {
    let regime = classify_wall_regime(a, b, cfg, bath);
    let mut warnings = standard_warnings(a, b, bath);
    if !bath.is_zero() {
        warnings.push(
            "zero-temperature limit evaluated with T > 0: the bath temperature is ignored"
                .to_string(),
        );
    }
    if regime != RegimeLabel::FarZoneLowT {
        warnings.push(regime_warning(
            "the zero-temperature far-zone form",
            "far zone with both distances far below the thermal length",
            regime,
        ));
    }
    let sep = cfg.separations();
    let g = CrossGeometry::from_wall(cfg);
    let alpha = static_product(a, b);
    let direct = -23.0 * alpha / (4.0 * PI * sep.r.powi(7));
    let image = -23.0 * alpha / (4.0 * PI * sep.rbar.powi(7));
    let kernel = operators::zero_t_cross_kernel(sep.r + sep.rbar)?;
    let cross = alpha / PI * operators::cross_bilinear(&g, &kernel);
    Ok(PotentialResult {
        energy: direct + image + cross,
        method: Method::LimitZeroTWall,
        regime,
        error_estimate: 0.0,
        terms: Some(WallTerms { direct, image, cross }),
        warnings,
    })
}

/// High-temperature wall limit: classical R⁻⁶ forms with the angular cross
/// term.
pub fn wall_limit_high_t(
    a: &AtomModel,
    b: &AtomModel,
    cfg: &WallConfiguration,
    bath: &ThermalBath,
) -> Result<PotentialResult> {
    if bath.is_zero() {
        return Err(Error::Domain(
            "the high-temperature limit needs T > 0 (it is linear in T)".into(),
        ));
    }
    let regime = classify_wall_regime(a, b, cfg, bath);
    let mut warnings = standard_warnings(a, b, bath);
    if regime != RegimeLabel::FarZoneHighT {
        warnings.push(regime_warning(
            "the high-temperature form",
            "far zone with both distances far above the thermal length",
            regime,
        ));
    }
    let sep = cfg.separations();
    let alpha = static_product(a, b);
    let t = bath.temperature();
    let direct = -3.0 * alpha * t / sep.r.powi(6);
    let image = -3.0 * alpha * t / sep.rbar.powi(6);
    let cross = alpha * t * tensors::cross_term_angular_closed_form(cfg);
    Ok(PotentialResult {
        energy: direct + image + cross,
        method: Method::LimitHighT,
        regime,
        error_estimate: 0.0,
        terms: Some(WallTerms { direct, image, cross }),
        warnings,
    })
}

/// Mixed wall limit, R ≪ λ_T ≪ R̄: retarded direct channel, classical
/// image and cross channels.
pub fn wall_limit_mixed(
    a: &AtomModel,
    b: &AtomModel,
    cfg: &WallConfiguration,
    bath: &ThermalBath,
) -> Result<PotentialResult> {
    if bath.is_zero() {
        return Err(Error::Domain(
            "the mixed limit needs T > 0 (its image channel is linear in T)".into(),
        ));
    }
    let regime = classify_wall_regime(a, b, cfg, bath);
    let mut warnings = standard_warnings(a, b, bath);
    if regime != RegimeLabel::FarZoneMixed {
        warnings.push(regime_warning(
            "the mixed form",
            "far zone with R far below and R̄ far above the thermal length",
            regime,
        ));
    }
    let sep = cfg.separations();
    let alpha = static_product(a, b);
    let t = bath.temperature();
    let direct = -23.0 * alpha / (4.0 * PI * sep.r.powi(7));
    let image = -3.0 * alpha * t / sep.rbar.powi(6);
    let cross = alpha * t * tensors::cross_term_angular_closed_form(cfg);
    Ok(PotentialResult {
        energy: direct + image + cross,
        method: Method::LimitMixed,
        regime,
        error_estimate: 0.0,
        terms: Some(WallTerms { direct, image, cross }),
        warnings,
    })
}

/// Free-space entry point with method selection. Auto picks the cheapest
/// route the regime justifies; full integrals need damped atoms.
pub fn free_space_potential(
    a: &AtomModel,
    b: &AtomModel,
    r: f64,
    bath: &ThermalBath,
    choice: MethodChoice,
    opts: &QuadratureOptions,
) -> Result<PotentialResult> {
    match choice {
        MethodChoice::Full => free_space_full(a, b, r, bath, opts),
        MethodChoice::Asymptotic => free_space_far_zone(a, b, r, bath),
        MethodChoice::Auto => match classify_free_regime(a, b, r, bath) {
            RegimeLabel::NearZone => free_space_near_zone(a, b, r, bath, opts),
            RegimeLabel::Crossover => free_space_full(a, b, r, bath, opts),
            _ => free_space_far_zone(a, b, r, bath),
        },
    }
}

/// Wall entry point with method selection.
pub fn wall_potential(
    a: &AtomModel,
    b: &AtomModel,
    cfg: &WallConfiguration,
    bath: &ThermalBath,
    choice: MethodChoice,
    opts: &QuadratureOptions,
) -> Result<PotentialResult> {
    match choice {
        MethodChoice::Full => wall_full(a, b, cfg, bath, opts),
        MethodChoice::Asymptotic => wall_far_zone(a, b, cfg, bath),
        MethodChoice::Auto => {
            let regime = classify_wall_regime(a, b, cfg, bath);
            if regime.is_far() {
                wall_far_zone(a, b, cfg, bath)
            } else {
                wall_full(a, b, cfg, bath, opts)
            }
        }
    }
}
