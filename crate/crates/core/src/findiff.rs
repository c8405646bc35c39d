//! Central finite differences with Richardson extrapolation.
//!
//! Every differential identity in this crate (the radial operator tables,
//! the static-tensor construction, the mixed-derivative cross term) is
//! cross-checked against numerically differentiated values. The stencils
//! here are plain central differences of orders 1–4 whose truncation error
//! is an even series in the step h, so a Richardson ladder in h/2 steps
//! accelerates them until rounding noise takes over. The returned error
//! estimate is the last diagonal correction of the ladder — honest in the
//! sense that it grows back up when the noise floor is reached, and the
//! best (smallest-error) diagonal entry is the one reported.

use crate::error::{Error, Result};
use crate::geometry::Vec3;

/// A numerically differentiated value with its internal error estimate.
#[derive(Debug, Clone, Copy)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

fn stencil<F: Fn(f64) -> f64>(f: &F, x: f64, order: u32, h: f64) -> f64 {
    match order {
        1 => (f(x + h) - f(x - h)) / (2.0 * h),
        2 => (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h),
        3 => (f(x + 2.0 * h) - 2.0 * f(x + h) + 2.0 * f(x - h) - f(x - 2.0 * h)) / (2.0 * h * h * h),
        4 => {
            (f(x + 2.0 * h) - 4.0 * f(x + h) + 6.0 * f(x) - 4.0 * f(x - h) + f(x - 2.0 * h))
                / (h * h * h * h)
        }
        _ => unreachable!("order validated by caller"),
    }
}

/// Richardson ladder over rung values d[j] taken at steps h₀/2^j, assuming
/// an even error series. Returns the best diagonal entry.
fn richardson(d: &[f64]) -> Result<Estimate> {
    if d.iter().any(|v| !v.is_finite()) {
        return Err(Error::Domain(
            "finite-difference stencil left the function's domain (non-finite rung)".into(),
        ));
    }
    let n = d.len();
    let mut t = d.to_vec();
    let mut best = Estimate { value: t[0], error: f64::INFINITY };
    let mut prev_diag = t[0];
    for m in 1..n {
        let pow = 4f64.powi(m as i32);
        for j in (m..n).rev() {
            t[j] = (pow * t[j] - t[j - 1]) / (pow - 1.0);
        }
        let diag = t[m];
        let err = (diag - prev_diag).abs();
        if err < best.error {
            best = Estimate { value: diag, error: err };
        }
        prev_diag = diag;
    }
    Ok(best)
}

/// n-th derivative (n = 1..4) of f at x, extrapolated from central
/// differences starting at step h0 over `rungs` halvings.
pub fn derivative_with_step<F: Fn(f64) -> f64>(
    f: F,
    x: f64,
    order: u32,
    h0: f64,
    rungs: usize,
) -> Result<Estimate> {
    if !(1..=4).contains(&order) {
        return Err(Error::Domain(format!("stencils cover derivative orders 1–4, got {order}")));
    }
    if !(h0 > 0.0 && h0.is_finite()) {
        return Err(Error::Domain(format!("step must be positive and finite, got {h0}")));
    }
    let rungs = rungs.clamp(3, 24);
    let mut d = Vec::with_capacity(rungs);
    for j in 0..rungs {
        let h = h0 / 2f64.powi(j as i32);
        d.push(stencil(&f, x, order, h));
    }
    richardson(&d)
}

/// n-th derivative with a default ladder: h₀ = max(|x|, 1)/5, 12 rungs.
pub fn derivative<F: Fn(f64) -> f64>(f: F, x: f64, order: u32) -> Result<Estimate> {
    let h0 = x.abs().max(1.0) / 5.0;
    derivative_with_step(f, x, order, h0, 12)
}

/// Hessian ∂_l∂_m f of a scalar field at a point, each entry Richardson
/// extrapolated; returns the matrix and the largest per-entry error
/// estimate. The result is symmetrized.
pub fn hessian<F: Fn(Vec3) -> f64>(f: F, x: Vec3, h0: f64) -> Result<([[f64; 3]; 3], f64)> {
    if !(h0 > 0.0 && h0.is_finite()) {
        return Err(Error::Domain(format!("step must be positive and finite, got {h0}")));
    }
    let rungs = 10;
    let mut m = [[0.0; 3]; 3];
    let mut worst = 0.0f64;
    for l in 0..3 {
        let axis = move |t: f64, base: Vec3| {
            let mut p = base;
            p[l] += t;
            p
        };
        let est = {
            let g = |t: f64| f(axis(t, x));
            let mut d = Vec::with_capacity(rungs);
            for j in 0..rungs {
                let h = h0 / 2f64.powi(j as i32);
                d.push((g(h) - 2.0 * g(0.0) + g(-h)) / (h * h));
            }
            richardson(&d)?
        };
        m[l][l] = est.value;
        worst = worst.max(est.error);
        for mm in (l + 1)..3 {
            let mut d = Vec::with_capacity(rungs);
            for j in 0..rungs {
                let h = h0 / 2f64.powi(j as i32);
                let at = |sl: f64, sm: f64| {
                    let mut p = x;
                    p[l] += sl * h;
                    p[mm] += sm * h;
                    f(p)
                };
                d.push((at(1.0, 1.0) - at(1.0, -1.0) - at(-1.0, 1.0) + at(-1.0, -1.0)) / (4.0 * h * h));
            }
            let est = richardson(&d)?;
            m[l][mm] = est.value;
            m[mm][l] = est.value;
            worst = worst.max(est.error);
        }
    }
    Ok((m, worst))
}
