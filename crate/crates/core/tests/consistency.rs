//! Cross-module consistency: every physical quantity here is computed by at
//! least two routes that share as little code as possible, and the routes
//! must agree within their combined honest error estimates.

use approx::assert_relative_eq;
use casimir_polder::atom::AtomModel;
use casimir_polder::geometry::WallConfiguration;
use casimir_polder::matsubara;
use casimir_polder::potentials;
use casimir_polder::quadrature::QuadratureOptions;
use casimir_polder::thermal::ThermalBath;

fn atom(gamma: f64) -> AtomModel {
    AtomModel::two_level(1.0, 1.0, gamma).unwrap()
}

#[test]
fn wall_channels_sum_and_direct_matches_free_space() {
    let a = atom(1e-3);
    let cfg = WallConfiguration::new([0.0, 0.0, 1.0], [1.2, 0.8, 1.6]).unwrap();
    let bath = ThermalBath::new(0.08).unwrap();
    let opts = QuadratureOptions::default();
    let wall = potentials::wall_full(&a, &a, &cfg, &bath, &opts).unwrap();
    let t = wall.terms.expect("wall_full reports channel terms");
    assert_relative_eq!(wall.energy, t.direct + t.image + t.cross, max_relative = 1e-13);
    let free = potentials::free_space_full(&a, &a, cfg.separations().r, &bath, &opts).unwrap();
    assert_relative_eq!(t.direct, free.energy, max_relative = 1e-12);
}

#[test]
fn split_and_combined_wall_integrals_agree() {
    let a = atom(1e-3);
    let cfg = WallConfiguration::new([0.0, 0.0, 1.0], [1.5, 0.0, 2.0]).unwrap();
    let bath = ThermalBath::new(0.05).unwrap();
    let opts = QuadratureOptions::default();
    let split = potentials::wall_full(&a, &a, &cfg, &bath, &opts).unwrap();
    let combined = potentials::wall_full_combined(&a, &a, &cfg, &bath, &opts).unwrap();
    let diff = (split.energy - combined.energy).abs();
    assert!(
        diff <= (split.error_estimate + combined.error_estimate).max(1e-10 * split.energy.abs()),
        "split {:.9e} vs combined {:.9e}, diff {diff:.3e}",
        split.energy,
        combined.energy
    );
    assert_relative_eq!(split.energy, combined.energy, max_relative = 1e-3);
}

#[test]
fn real_axis_meets_oracle_across_regimes() {
    let a = atom(1e-3);
    let b = AtomModel::two_level(1.7, 0.6, 2e-3).unwrap();
    let opts = QuadratureOptions::default();
    for &(r, t) in &[(0.5, 0.02), (3.0, 0.1), (20.0, 0.003)] {
        let bath = ThermalBath::new(t).unwrap();
        let rep = matsubara::cross_validate_free_space(&a, &b, r, &bath, &opts).unwrap();
        assert!(
            rep.consistent,
            "r = {r}, T = {t}: |Δ| = {:.3e} exceeds tolerance {:.3e} \
             (oracle {:.6e}, real axis {:.6e})",
            rep.difference,
            rep.combined_tolerance,
            rep.oracle.energy,
            rep.real_axis.energy
        );
        assert_relative_eq!(rep.oracle.energy, rep.real_axis.energy, max_relative = 1e-2);
    }
}

#[test]
fn wall_operator_form_is_far_zone_limit_of_integral() {
    let a = atom(1e-3);
    // R = 25, R̄ ≈ 61.8, λ ≈ 15.9: thermal crossover, deep far zone.
    let cfg = WallConfiguration::new([0.0, 0.0, 20.0], [15.0, 0.0, 40.0]).unwrap();
    let bath = ThermalBath::new(0.01).unwrap();
    let opts = QuadratureOptions::default();
    let full = potentials::wall_full(&a, &a, &cfg, &bath, &opts).unwrap();
    let far = potentials::wall_far_zone(&a, &a, &cfg, &bath).unwrap();
    // Dynamic-polarizability corrections enter at ~5.6/(k0 R)² ≈ 0.9%.
    assert_relative_eq!(full.energy, far.energy, max_relative = 2e-2);
    let tf = full.terms.unwrap();
    let tq = far.terms.unwrap();
    assert_relative_eq!(tf.direct, tq.direct, max_relative = 2e-2);
    assert_relative_eq!(tf.image, tq.image, max_relative = 2e-2);
    assert_relative_eq!(tf.cross, tq.cross, max_relative = 5e-2);
}

#[test]
fn near_zone_formula_matches_full_integral() {
    // γ = 1e-4 keeps the real-axis damping bias at the 1e-4 level, well under
    // tolerance, and the dropped kernel terms enter at (k0 R)² = 2.5e-5.
    let a = atom(1e-4);
    let r = 5e-3;
    let opts = QuadratureOptions::default();
    for bath in [ThermalBath::zero(), ThermalBath::new(0.02).unwrap()] {
        let full = potentials::free_space_full(&a, &a, r, &bath, &opts).unwrap();
        let near = potentials::free_space_near_zone(&a, &a, r, &bath, &opts).unwrap();
        assert_relative_eq!(full.energy, near.energy, max_relative = 1e-3);
    }
}

#[test]
fn image_and_cross_channels_die_off_far_from_wall() {
    let a = atom(1e-3);
    // Two atoms one unit apart, five hundred units from the wall: the wall
    // contribution must be utterly negligible against the direct channel.
    let cfg = WallConfiguration::new([0.0, 0.0, 500.0], [0.0, 0.0, 501.0]).unwrap();
    let bath = ThermalBath::new(0.05).unwrap();
    let opts = QuadratureOptions::default();
    let wall = potentials::wall_full(&a, &a, &cfg, &bath, &opts).unwrap();
    let t = wall.terms.unwrap();
    assert!(
        (t.image + t.cross).abs() <= 1e-5 * t.direct.abs(),
        "image {:.3e} cross {:.3e} direct {:.3e}",
        t.image,
        t.cross,
        t.direct
    );
    let free = potentials::free_space_full(&a, &a, 1.0, &bath, &opts).unwrap();
    assert_relative_eq!(wall.energy, free.energy, max_relative = 1e-5);
}
