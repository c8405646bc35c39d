//! Far-zone differential operators.
//!
//! In the far zone the interaction energy collapses to derivatives of a
//! single thermal kernel. For the direct (free-space) channel the radial
//! operator
//!
//!   Q f(r) = −f''''/(16r²) + f'''/(4r³) − 5f''/(4r⁴) + 3f'/r⁵ − 3f/r⁶
//!
//! applied to coth(r/λ_T) gives W = α_A α_B T · Q[coth(r/λ_T)], with
//! λ_T = 1/(2πT). Exact table values pin the operator:
//!
//!   Q[1] = −3/r⁶,  Q[1/r] = −23/(2r⁷),  Q[r] = Q[r³] = 0,  Q[r⁵] = −11/(2r),
//!
//! and because Q annihilates r and r³ the low-temperature expansion
//! coth(y) = 1/y + y/3 − y³/45 + … is cut down to corrections of relative
//! order (r/λ_T)⁶.
//!
//! The wall cross channel needs mixed derivatives in the two path lengths
//! R and R̄. With F(R, R̄) = c(R + R̄)/(R R̄) for a kernel c and the
//! σ-weighted projector traces S(a, b) of [`CrossGeometry`], the cross term
//! is W = α_A α_B T · [S(−1,−1) F₂₂ + S(−1,+1) F₂₁/R̄ + S(+1,−1) F₁₂/R +
//! S(+1,+1) F₁₁/(R R̄)], F_ij = ∂_R^i ∂_R̄^j F — assembled here by Leibniz
//! expansion. The operators act on the full R, R̄ dependence of F,
//! prefactor included; the kernel is c(s) = coth(s/2λ_T) at finite
//! temperature and its T → 0 limit T·c(s) → 1/(πs) in the zero-temperature
//! formulas.

use crate::error::{Error, Result};
use crate::special;
use crate::tensors::CrossGeometry;

/// Q applied to a function given by its derivative table
/// [f, f', f'', f''', f''''] at r.
pub fn apply_qr(derivs: &[f64; 5], r: f64) -> f64 {
    let r2 = r * r;
    let r3 = r2 * r;
    -derivs[4] / (16.0 * r2) + derivs[3] / (4.0 * r3) - 5.0 * derivs[2] / (4.0 * r2 * r2)
        + 3.0 * derivs[1] / (r2 * r3)
        - 3.0 * derivs[0] / (r3 * r3)
}

/// Q[const · 1] table value: −3/r⁶.
pub fn qr_const(r: f64) -> f64 {
    -3.0 / r.powi(6)
}

/// Q[1/r] table value: −23/(2r⁷).
pub fn qr_inv_r(r: f64) -> f64 {
    -23.0 / (2.0 * r.powi(7))
}

/// Q[r⁵] table value: −11/(2r). (Q[r] and Q[r³] vanish identically.)
pub fn qr_r5(r: f64) -> f64 {
    -11.0 / (2.0 * r)
}

/// Q[coth(r/λ)] with analytic coth derivatives; λ is the thermal length.
///
/// Multiplied by α_A α_B T this is the free-space far-zone energy at any
/// temperature; it interpolates between −3/r⁶ (coth → 1, high T) and
/// −23 λ/(2r⁷) (coth → λ/r, low T, where T λ = 1/2π).
pub fn qr_coth(r: f64, lambda: f64) -> Result<f64> {
    if !(r > 0.0 && lambda > 0.0) {
        return Err(Error::Domain(format!(
            "Q[coth] needs r > 0 and λ > 0, got r = {r}, λ = {lambda}"
        )));
    }
    let d = special::coth_derivatives(r / lambda);
    let mut derivs = [0.0; 5];
    let mut scale = 1.0;
    for n in 0..5 {
        derivs[n] = d[n] * scale;
        scale /= lambda;
    }
    Ok(apply_qr(&derivs, r))
}

/// A kernel c(s) with its first four derivatives, the input the cross
/// bilinear consumes.
#[derive(Debug, Clone, Copy)]
pub struct KernelDerivatives(pub [f64; 5]);

/// Thermal cross kernel c(s) = coth(s / 2λ_T).
pub fn thermal_cross_kernel(s: f64, lambda: f64) -> Result<KernelDerivatives> {
    if !(s > 0.0 && lambda > 0.0) {
        return Err(Error::Domain(format!(
            "thermal kernel needs s > 0 and λ > 0, got s = {s}, λ = {lambda}"
        )));
    }
    let two_lambda = 2.0 * lambda;
    let d = special::coth_derivatives(s / two_lambda);
    let mut out = [0.0; 5];
    let mut scale = 1.0;
    for n in 0..5 {
        out[n] = d[n] * scale;
        scale /= two_lambda;
    }
    Ok(KernelDerivatives(out))
}

/// Zero-temperature cross kernel c(s) = 1/s (the limit T·coth(s/2λ_T) →
/// 1/(πs) with the 1/π kept by the caller).
pub fn zero_t_cross_kernel(s: f64) -> Result<KernelDerivatives> {
    if !(s > 0.0) {
        return Err(Error::Domain(format!("kernel needs s > 0, got {s}")));
    }
    let mut out = [0.0; 5];
    let mut v = 1.0 / s;
    for (n, slot) in out.iter_mut().enumerate() {
        *slot = v;
        v *= -((n + 1) as f64) / s;
    }
    Ok(KernelDerivatives(out))
}

/// d^n/dr^n (1/r) = (−1)^n n!/r^{n+1} for n = 0..4.
fn inv_r_derivs(r: f64) -> [f64; 5] {
    let mut out = [0.0; 5];
    let mut v = 1.0 / r;
    for (n, slot) in out.iter_mut().enumerate() {
        *slot = v;
        v *= -((n + 1) as f64) / r;
    }
    out
}

const BINOM2: [[f64; 3]; 3] = [[1.0, 0.0, 0.0], [1.0, 1.0, 0.0], [1.0, 2.0, 1.0]];

/// Mixed partial F_ij = ∂_R^i ∂_R̄^j [c(R+R̄)/(R R̄)] by Leibniz expansion
/// over the kernel and the two 1/r prefactors.
fn f_mixed(c: &KernelDerivatives, r: f64, rbar: f64, i: usize, j: usize) -> f64 {
    let gr = inv_r_derivs(r);
    let gb = inv_r_derivs(rbar);
    let mut acc = 0.0;
    for p in 0..=i {
        for q in 0..=j {
            acc += BINOM2[i][p] * BINOM2[j][q] * c.0[p + q] * gr[i - p] * gb[j - q];
        }
    }
    acc
}

/// σ-contracted far-zone cross bilinear
/// S(−1,−1) F₂₂ + S(−1,+1) F₂₁/R̄ + S(+1,−1) F₁₂/R + S(+1,+1) F₁₁/(R R̄).
///
/// Multiply by α_A α_B T (thermal kernel) or α_A α_B/π (zero-temperature
/// kernel) for the interaction energy of the cross channel.
pub fn cross_bilinear(g: &CrossGeometry, c: &KernelDerivatives) -> f64 {
    let (r, rb) = (g.r, g.rbar);
    g.weight(-1.0, -1.0) * f_mixed(c, r, rb, 2, 2)
        + g.weight(-1.0, 1.0) * f_mixed(c, r, rb, 2, 1) / rb
        + g.weight(1.0, -1.0) * f_mixed(c, r, rb, 1, 2) / r
        + g.weight(1.0, 1.0) * f_mixed(c, r, rb, 1, 1) / (r * rb)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::findiff;
    use crate::geometry::{self, Vec3, WallConfiguration};
    use crate::tensors;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn table_values_from_derivative_arrays() {
        let r: f64 = 1.7;
        // 1/r, r, r³, r⁵ with hand derivative tables.
        let inv = inv_r_derivs(r);
        assert_relative_eq!(apply_qr(&inv, r), qr_inv_r(r), max_relative = 1e-14);
        assert_relative_eq!(apply_qr(&[1.0, 0.0, 0.0, 0.0, 0.0], r), qr_const(r), max_relative = 1e-14);
        assert_abs_diff_eq!(apply_qr(&[r, 1.0, 0.0, 0.0, 0.0], r), 0.0, epsilon = 1e-14);
        let r3 = [r.powi(3), 3.0 * r * r, 6.0 * r, 6.0, 0.0];
        assert_abs_diff_eq!(apply_qr(&r3, r), 0.0, epsilon = 1e-13);
        let r5 = [r.powi(5), 5.0 * r.powi(4), 20.0 * r.powi(3), 60.0 * r * r, 120.0 * r];
        assert_relative_eq!(apply_qr(&r5, r), qr_r5(r), max_relative = 1e-13);
    }

    #[test]
    fn table_values_from_finite_differences() {
        // The same table rebuilt with no analytic derivatives at all.
        for &r in &[0.8, 1.3, 2.9] {
            let fd_table = |f: &dyn Fn(f64) -> f64| -> [f64; 5] {
                let mut d = [0.0; 5];
                d[0] = f(r);
                for order in 1..=4u32 {
                    d[order as usize] =
                        findiff::derivative_with_step(f, r, order, r / 6.0, 12).unwrap().value;
                }
                d
            };
            let inv = fd_table(&|x: f64| 1.0 / x);
            assert_relative_eq!(apply_qr(&inv, r), qr_inv_r(r), max_relative = 1e-7);
            let lin = fd_table(&|x: f64| x);
            assert_abs_diff_eq!(apply_qr(&lin, r) * r.powi(6), 0.0, epsilon = 1e-7);
            let cub = fd_table(&|x: f64| x.powi(3));
            assert_abs_diff_eq!(apply_qr(&cub, r) * r.powi(3), 0.0, epsilon = 1e-6);
            let quint = fd_table(&|x: f64| x.powi(5));
            assert_relative_eq!(apply_qr(&quint, r), qr_r5(r), max_relative = 1e-6);
        }
    }

    #[test]
    fn qr_coth_high_temperature_saturates() {
        // r ≫ λ: coth is exactly 1 in double precision and all derivatives
        // vanish, so Q[coth] collapses to the table value −3/r⁶.
        let r = 4.0;
        let got = qr_coth(r, r / 500.0).unwrap();
        assert_relative_eq!(got, qr_const(r), max_relative = 1e-15);
    }

    #[test]
    fn qr_coth_low_temperature_expansion() {
        // λ ≫ r: coth(r/λ) = λ/r + r/(3λ) − r³/(45λ³) + 2r⁵/(945λ⁵) − …
        // Q kills r and r³, so Q[coth] = λ·(−23/2r⁷) + (2/945λ⁵)(−11/2r) + …
        let r: f64 = 1.3;
        for &ratio in &[10.0, 50.0] {
            let lambda = ratio * r;
            let want = lambda * qr_inv_r(r) + 2.0 / (945.0 * lambda.powi(5)) * qr_r5(r);
            assert_relative_eq!(qr_coth(r, lambda).unwrap(), want, max_relative = 1e-8);
        }
    }

    #[test]
    fn qr_coth_against_finite_differences() {
        let r: f64 = 1.1;
        let lambda: f64 = 0.9;
        let f = |x: f64| {
            let y = x / lambda;
            (y.exp() + (-y).exp()) / (y.exp() - (-y).exp())
        };
        let mut d = [0.0; 5];
        d[0] = f(r);
        for order in 1..=4u32 {
            d[order as usize] = findiff::derivative_with_step(&f, r, order, 0.15, 12).unwrap().value;
        }
        assert_relative_eq!(apply_qr(&d, r), qr_coth(r, lambda).unwrap(), max_relative = 1e-7);
    }

    #[test]
    fn zero_t_kernel_derivatives() {
        let s: f64 = 2.7;
        let k = zero_t_cross_kernel(s).unwrap();
        for n in 0..5i32 {
            let want = (1..=n).map(|i| -i as f64).product::<f64>() / s.powi(n + 1);
            assert_relative_eq!(k.0[n as usize], want, max_relative = 1e-14);
        }
    }

    #[test]
    fn thermal_kernel_matches_finite_differences() {
        let lambda = 0.8;
        let c = |s: f64| {
            let y = s / (2.0 * lambda);
            (y.exp() + (-y).exp()) / (y.exp() - (-y).exp())
        };
        let s = 2.2;
        let k = thermal_cross_kernel(s, lambda).unwrap();
        assert_relative_eq!(k.0[0], c(s), max_relative = 1e-13);
        for order in 1..=4u32 {
            let fd = findiff::derivative_with_step(&c, s, order, 0.25, 12).unwrap();
            assert_relative_eq!(k.0[order as usize], fd.value, max_relative = 1e-6);
        }
    }

    #[test]
    fn high_temperature_bilinear_is_the_angular_contraction() {
        // With c ≡ 1 the bilinear must reproduce the explicit σ-weighted
        // matrix contraction of two static tensors — an entirely separate
        // code path through the 3×3 algebra.
        let mut rng = ChaCha8Rng::seed_from_u64(51);
        let unit_kernel = KernelDerivatives([1.0, 0.0, 0.0, 0.0, 0.0]);
        for _ in 0..500 {
            let cfg = WallConfiguration::new(
                [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0), rng.gen_range(0.2..3.0)],
                [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0), rng.gen_range(0.2..3.0)],
            )
            .unwrap();
            let g = CrossGeometry::from_wall(&cfg);
            let bilinear = cross_bilinear(&g, &unit_kernel);
            let matrix = tensors::cross_term_angular_contraction(&cfg).unwrap();
            assert_relative_eq!(bilinear, matrix, max_relative = 1e-11, epsilon = 1e-15);
        }
    }

    #[test]
    fn mixed_partials_against_finite_differences() {
        // F_ij via Leibniz vs nested 1D differences of the assembled F.
        let lambda = 1.1;
        let (r, rb) = (1.4, 2.3);
        let f = |x: f64, y: f64| {
            let arg = (x + y) / (2.0 * lambda);
            let c = (arg.exp() + (-arg).exp()) / (arg.exp() - (-arg).exp());
            c / (x * y)
        };
        let k = thermal_cross_kernel(r + rb, lambda).unwrap();
        for i in 1..=2usize {
            for j in 1..=2usize {
                let outer = findiff::derivative_with_step(
                    |x: f64| {
                        findiff::derivative_with_step(|y: f64| f(x, y), rb, j as u32, 0.2, 10)
                            .unwrap()
                            .value
                    },
                    r,
                    i as u32,
                    0.2,
                    10,
                )
                .unwrap();
                assert_relative_eq!(f_mixed(&k, r, rb, i, j), outer.value, max_relative = 1e-5);
            }
        }
    }

    /// Brute application of the σ-contracted pair of tensor operators
    /// (∇²δ − ∇∇) ⊗ (∇²δ − ∇∇) to G(a, b) = c(|a|+|b|)/(|a||b|), treating
    /// the two separation vectors as independent and differentiating
    /// numerically — the raw definition the bilinear reduces.
    fn brute_sigma_opop(c: impl Fn(f64) -> f64 + Copy, rvec: Vec3, rbvec: Vec3) -> f64 {
        let g = move |a: Vec3, b: Vec3| {
            let (na, nb) = (geometry::norm(a), geometry::norm(b));
            c(na + nb) / (na * nb)
        };
        let x_field = move |l: usize, m: usize, b: Vec3| {
            let (h, _) = findiff::hessian(move |a: Vec3| g(a, b), rvec, 0.08).unwrap();
            let lap = h[0][0] + h[1][1] + h[2][2];
            let delta = if l == m { 1.0 } else { 0.0 };
            delta * lap - h[l][m]
        };
        // σ_ln = diag(1, 1, −1) is diagonal, so the contraction
        // Σ σ_ln X_lm Y_nm keeps only n = l.
        let sigma = [1.0, 1.0, -1.0];
        let mut total = 0.0;
        for l in 0..3 {
            for m in 0..3 {
                let (y, _) = findiff::hessian(|b: Vec3| x_field(l, m, b), rbvec, 0.2).unwrap();
                let lap_y = y[0][0] + y[1][1] + y[2][2];
                let delta_lm = if l == m { 1.0 } else { 0.0 };
                total += sigma[l] * (delta_lm * lap_y - y[l][m]);
            }
        }
        total
    }

    #[test]
    fn bilinear_matches_brute_tensor_operators() {
        let cfg = WallConfiguration::new([0.3, -0.2, 0.9], [-0.4, 0.5, 1.4]).unwrap();
        let g = CrossGeometry::from_wall(&cfg);
        let (rvec, rbvec) = (cfg.separation_vector(), cfg.image_separation_vector());
        let s = g.r + g.rbar;

        // Zero-temperature kernel 1/s.
        let brute = brute_sigma_opop(|t: f64| 1.0 / t, rvec, rbvec);
        let reduced = cross_bilinear(&g, &zero_t_cross_kernel(s).unwrap());
        assert_relative_eq!(brute, reduced, max_relative = 2e-3);

        // Thermal kernel at λ comparable to the separations.
        let lambda = 1.3;
        let coth = move |t: f64| {
            let y = t / (2.0 * lambda);
            (y.exp() + (-y).exp()) / (y.exp() - (-y).exp())
        };
        let brute = brute_sigma_opop(coth, rvec, rbvec);
        let reduced = cross_bilinear(&g, &thermal_cross_kernel(s, lambda).unwrap());
        assert_relative_eq!(brute, reduced, max_relative = 2e-3);
    }

    #[test]
    fn domain_errors() {
        assert!(qr_coth(-1.0, 1.0).is_err());
        assert!(qr_coth(1.0, 0.0).is_err());
        assert!(thermal_cross_kernel(0.0, 1.0).is_err());
        assert!(zero_t_cross_kernel(-2.0).is_err());
    }
}
