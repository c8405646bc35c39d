//! Geometry of two atoms, optionally above a perfectly conducting wall in
//! the plane z = 0.
//!
//! The wall enters through the image construction: reflecting atom A across
//! the plane gives the image distance R̄ = |r_B − σ r_A| with
//! σ = diag(1, 1, −1). Since R̄² − R² = 4 z_A z_B > 0, the image distance
//! always exceeds the direct one. θ and θ̄ are the angles R and R̄ make with
//! the wall normal.

use crate::error::{Error, Result};

/// Plain 3-vector in the active length unit.
pub type Vec3 = [f64; 3];

pub fn dot(a: Vec3, b: Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn norm(a: Vec3) -> f64 {
    dot(a, a).sqrt()
}

pub fn sub(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

/// Mirror image across the wall plane z = 0: σ·r = (x, y, −z).
pub fn image_point(r: Vec3) -> Vec3 {
    [r[0], r[1], -r[2]]
}

/// Default smallest allowed atom height above the wall. The R̄ → R limit is
/// physical but numerically stiff in the cross terms, so heights below the
/// floor are rejected rather than silently degraded.
pub const DEFAULT_Z_FLOOR: f64 = 1e-9;

/// Direct and image separations with their wall-normal angles (radians).
#[derive(Debug, Clone, Copy)]
pub struct Separations {
    pub r: f64,
    pub rbar: f64,
    pub theta: f64,
    pub theta_bar: f64,
}

/// Two atoms at z > 0 with the conducting wall fixed at z = 0.
#[derive(Debug, Clone, Copy)]
pub struct WallConfiguration {
    r_a: Vec3,
    r_b: Vec3,
}

impl WallConfiguration {
    pub fn new(r_a: Vec3, r_b: Vec3) -> Result<Self> {
        Self::with_min_height(r_a, r_b, DEFAULT_Z_FLOOR)
    }

    /// Build with a caller-chosen height floor (> 0).
    pub fn with_min_height(r_a: Vec3, r_b: Vec3, z_floor: f64) -> Result<Self> {
        if !(z_floor > 0.0) {
            return Err(Error::InvalidConfiguration(format!(
                "height floor must be > 0, got {z_floor}"
            )));
        }
        for (name, r) in [("atom A", r_a), ("atom B", r_b)] {
            if r.iter().any(|c| !c.is_finite()) {
                return Err(Error::InvalidConfiguration(format!(
                    "{name} position has a non-finite component"
                )));
            }
            if r[2] < z_floor {
                return Err(Error::InvalidConfiguration(format!(
                    "{name} height {} is below the floor {z_floor}; atoms must sit at z > 0",
                    r[2]
                )));
            }
        }
        if norm(sub(r_b, r_a)) == 0.0 {
            return Err(Error::InvalidConfiguration(
                "atoms coincide; the potential needs non-overlapping atoms".into(),
            ));
        }
        Ok(WallConfiguration { r_a, r_b })
    }

    pub fn atom_a(&self) -> Vec3 {
        self.r_a
    }

    pub fn atom_b(&self) -> Vec3 {
        self.r_b
    }

    /// Direct separation vector r_B − r_A.
    pub fn separation_vector(&self) -> Vec3 {
        sub(self.r_b, self.r_a)
    }

    /// Image separation vector r_B − σ r_A.
    pub fn image_separation_vector(&self) -> Vec3 {
        sub(self.r_b, image_point(self.r_a))
    }

    /// (R, R̄, θ, θ̄). Angles are built from atan2(ρ, Δz) with ρ the in-plane
    /// separation, which keeps them accurate near 0 and π.
    pub fn separations(&self) -> Separations {
        let d = self.separation_vector();
        let rho = d[0].hypot(d[1]);
        let r = norm(d);
        let dbar = self.image_separation_vector();
        let rbar = norm(dbar);
        Separations {
            r,
            rbar,
            theta: rho.atan2(d[2]),
            theta_bar: rho.atan2(dbar[2]),
        }
    }

    /// Unit vectors along r_B − r_A and r_B − σ r_A.
    pub fn unit_separation_vectors(&self) -> (Vec3, Vec3) {
        let d = self.separation_vector();
        let dbar = self.image_separation_vector();
        let r = norm(d);
        let rbar = norm(dbar);
        (
            [d[0] / r, d[1] / r, d[2] / r],
            [dbar[0] / rbar, dbar[1] / rbar, dbar[2] / rbar],
        )
    }
}

/// Two atoms in free space: only the separation matters.
#[derive(Debug, Clone, Copy)]
pub struct FreeSpaceConfiguration {
    r: f64,
}

impl FreeSpaceConfiguration {
    pub fn new(r: f64) -> Result<Self> {
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::InvalidConfiguration(format!(
                "separation must be > 0 and finite, got {r}"
            )));
        }
        Ok(FreeSpaceConfiguration { r })
    }

    pub fn separation(&self) -> f64 {
        self.r
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn image_point_examples() {
        assert_eq!(image_point([0.0, 0.0, 1.0]), [0.0, 0.0, -1.0]);
        assert_eq!(image_point([2.0, 3.0, 0.0]), [2.0, 3.0, 0.0]);
    }

    #[test]
    fn image_is_involution_and_isometry() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let r: Vec3 = [rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0)];
            assert_eq!(image_point(image_point(r)), r);
            assert_relative_eq!(norm(image_point(r)), norm(r), max_relative = 1e-15);
        }
    }

    #[test]
    fn collinear_normal_configuration() {
        let cfg = WallConfiguration::new([0.0, 0.0, 1.0], [0.0, 0.0, 3.0]).unwrap();
        let s = cfg.separations();
        assert_relative_eq!(s.r, 2.0, max_relative = 1e-15);
        assert_relative_eq!(s.rbar, 4.0, max_relative = 1e-15);
        assert_abs_diff_eq!(s.theta, 0.0);
        assert_abs_diff_eq!(s.theta_bar, 0.0);
        let (u, v) = cfg.unit_separation_vectors();
        assert_eq!(u, [0.0, 0.0, 1.0]);
        assert_eq!(v, [0.0, 0.0, 1.0]);
    }

    #[test]
    fn lateral_configuration() {
        let cfg = WallConfiguration::new([0.0, 0.0, 1.0], [2.0, 0.0, 1.0]).unwrap();
        let s = cfg.separations();
        assert_relative_eq!(s.r, 2.0, max_relative = 1e-15);
        assert_relative_eq!(s.rbar, 8.0f64.sqrt(), max_relative = 1e-15);
        assert_relative_eq!(s.theta.sin(), 1.0, max_relative = 1e-15);
        assert_relative_eq!(s.theta_bar.sin(), 2.0 / 8.0f64.sqrt(), max_relative = 1e-14);
        let (u, v) = cfg.unit_separation_vectors();
        assert_relative_eq!(u[0], 1.0, max_relative = 1e-15);
        let n = 8.0f64.sqrt();
        assert_relative_eq!(v[0], 2.0 / n, max_relative = 1e-14);
        assert_relative_eq!(v[2], 2.0 / n, max_relative = 1e-14);
    }

    fn random_cfg(rng: &mut ChaCha8Rng) -> WallConfiguration {
        loop {
            let a = [rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0), rng.gen_range(0.01..4.0)];
            let b = [rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0), rng.gen_range(0.01..4.0)];
            if norm(sub(b, a)) > 1e-3 {
                return WallConfiguration::new(a, b).unwrap();
            }
        }
    }

    #[test]
    fn image_distance_identity_and_ordering() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..10_000 {
            let cfg = random_cfg(&mut rng);
            let s = cfg.separations();
            let za = cfg.atom_a()[2];
            let zb = cfg.atom_b()[2];
            assert_relative_eq!(
                s.rbar * s.rbar - s.r * s.r,
                4.0 * za * zb,
                max_relative = 1e-10
            );
            assert!(s.rbar > s.r);
        }
    }

    #[test]
    fn angle_definitions_and_unit_vectors() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..2000 {
            let cfg = random_cfg(&mut rng);
            let s = cfg.separations();
            let (u, v) = cfg.unit_separation_vectors();
            assert_abs_diff_eq!(norm(u), 1.0, epsilon = 1e-14);
            assert_abs_diff_eq!(norm(v), 1.0, epsilon = 1e-14);
            // z-components are the cosines; in-plane parts the sines.
            assert_relative_eq!(v[2], s.theta_bar.cos(), max_relative = 1e-12);
            assert_relative_eq!(u[2], s.theta.cos(), max_relative = 1e-12);
            let rho = cfg.separation_vector()[0].hypot(cfg.separation_vector()[1]);
            assert_abs_diff_eq!(s.theta.sin(), rho / s.r, epsilon = 1e-12);
            assert_abs_diff_eq!(s.theta_bar.sin(), rho / s.rbar, epsilon = 1e-12);
            // R sin θ = R̄ sin θ̄ (shared in-plane separation).
            assert_abs_diff_eq!(
                s.r * s.theta.sin(),
                s.rbar * s.theta_bar.sin(),
                epsilon = 1e-10
            );
        }
    }

    #[test]
    fn translation_parallel_to_wall_is_a_symmetry() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1000 {
            let cfg = random_cfg(&mut rng);
            let t = [rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..10.0), 0.0];
            let shifted = WallConfiguration::new(
                [cfg.atom_a()[0] + t[0], cfg.atom_a()[1] + t[1], cfg.atom_a()[2]],
                [cfg.atom_b()[0] + t[0], cfg.atom_b()[1] + t[1], cfg.atom_b()[2]],
            )
            .unwrap();
            let s0 = cfg.separations();
            let s1 = shifted.separations();
            assert_relative_eq!(s0.r, s1.r, max_relative = 1e-12);
            assert_relative_eq!(s0.rbar, s1.rbar, max_relative = 1e-12);
            assert_abs_diff_eq!(s0.theta, s1.theta, epsilon = 1e-12);
            assert_abs_diff_eq!(s0.theta_bar, s1.theta_bar, epsilon = 1e-12);
        }
    }

    #[test]
    fn height_floor_is_enforced() {
        assert!(WallConfiguration::new([0.0, 0.0, 1e-12], [0.0, 0.0, 1.0]).is_err());
        assert!(WallConfiguration::new([0.0, 0.0, 1e-9], [0.0, 0.0, 1.0]).is_ok());
        assert!(WallConfiguration::with_min_height([0.0, 0.0, 0.5], [0.0, 0.0, 1.0], 0.6).is_err());
        assert!(WallConfiguration::new([0.0, 0.0, -1.0], [0.0, 0.0, 1.0]).is_err());
        // Coincident atoms rejected.
        assert!(WallConfiguration::new([0.0, 0.0, 1.0], [0.0, 0.0, 1.0]).is_err());
    }

    #[test]
    fn free_space_configuration_validation() {
        assert!(FreeSpaceConfiguration::new(0.0).is_err());
        assert!(FreeSpaceConfiguration::new(-2.0).is_err());
        assert_eq!(FreeSpaceConfiguration::new(2.5).unwrap().separation(), 2.5);
    }
}
