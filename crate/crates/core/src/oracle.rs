//! Quadrature oracles that check the closed forms independently.
//!
//! Integrands are built from pointwise packet evaluations. A Gaussian
//! integrand with linear phases factorizes along any orthonormal frame in
//! which its quadratic form is diagonal, so the 3-D integral is
//! I = I₁I₂I₃/f(c)² with Iᵢ the 1-D integral through the point `c`.

use num_complex::Complex64;

use crate::error::{domain, Result};
use crate::packets::WavePacket;
use crate::quadrature::{composite_rule, panels, Integrator};
use crate::units::HBAR_C;
use crate::vec3::Vec3;

/// Product of three 1-D adaptive integrals along `axes` through `center`,
/// each over `[-half[i], half[i]]`.
pub fn separable_integral<F: Fn(Vec3) -> Complex64>(
    f: F,
    center: Vec3,
    axes: [Vec3; 3],
    half: [f64; 3],
    integrator: &Integrator,
) -> Result<Complex64> {
    let fc = f(center);
    if fc.norm() == 0.0 || !fc.norm().is_finite() {
        return domain("integrand vanishes or is not finite at the factorization point");
    }
    let mut product = Complex64::new(1.0, 0.0);
    for i in 0..3 {
        let scale = fc.norm() * half[i];
        let q = Integrator {
            abs_tol: integrator.abs_tol * scale,
            ..*integrator
        };
        let breaks = panels(-half[i], half[i], 16);
        let est = q.integrate_breaks(|s| f(center + axes[i] * s), &breaks)?;
        product *= est.value;
    }
    Ok(product / (fc * fc))
}

/// Brute-force fixed-order 3-D product rule over a box around `center`
/// with `n` Kronrod panels per axis. Slow; for cross-checks only.
pub fn product_rule_integral<F: Fn(Vec3) -> Complex64>(
    f: F,
    center: Vec3,
    half: [f64; 3],
    n: usize,
) -> Complex64 {
    let rules: Vec<_> = (0..3).map(|i| composite_rule(-half[i], half[i], n)).collect();
    let mut total = Complex64::new(0.0, 0.0);
    for &(x, wx) in &rules[0] {
        for &(y, wy) in &rules[1] {
            let mut row = Complex64::new(0.0, 0.0);
            for &(z, wz) in &rules[2] {
                row += f(center + Vec3::new(x, y, z)) * wz;
            }
            total += row * (wx * wy);
        }
    }
    total
}

fn product_window(p1: &WavePacket, p2: &WavePacket, t: f64) -> (Vec3, f64) {
    let (s1, s2) = (p1.sigma(), p2.sigma());
    let center = (p1.center(t) * s2 + p2.center(t) * s1) / (s1 + s2);
    let half = 14.0 * (s1 * s2 / (s1 + s2)).sqrt();
    (center, half)
}

/// ∫d³x ψ₂*(x,t)ψ₁(x,t) by quadrature over pointwise evaluations.
pub fn overlap_oracle(p1: &WavePacket, p2: &WavePacket, t: f64) -> Result<Complex64> {
    appendix_oracle(p1, p2, Vec3::ZERO, 0.0, t)
}

/// ∫d³x exp(−iK·x + iΩt)ψ₂*ψ₁ by quadrature; `k_total` and `e_total` are
/// the summed spectator momentum and energy in MeV.
pub fn appendix_oracle(
    p1: &WavePacket,
    p2: &WavePacket,
    k_total: Vec3,
    e_total: f64,
    t: f64,
) -> Result<Complex64> {
    let (center, half) = product_window(p1, p2, t);
    let k = k_total / HBAR_C;
    let spect = Complex64::from_polar(1.0, e_total / HBAR_C * t);
    let f = |x: Vec3| spect * Complex64::from_polar(1.0, -k.dot(x)) * p2.evaluate(x, t).conj() * p1.evaluate(x, t);
    let q = Integrator::new(1e-13, 1e-11);
    separable_integral(f, center, [Vec3::X, Vec3::Y, Vec3::Z], [half; 3], &q)
}

/// ∫|ψ|²d³x for an amplitude whose modulus is Gaussian in the frame `axes`
/// with per-axis RMS-like widths `widths`.
pub fn norm_oracle<F: Fn(Vec3) -> Complex64>(
    psi: F,
    center: Vec3,
    axes: [Vec3; 3],
    widths: [f64; 3],
) -> Result<f64> {
    let half = widths.map(|w| 12.0 * w);
    let q = Integrator::new(1e-13, 1e-11);
    let v = separable_integral(
        |x| Complex64::new(psi(x).norm_sqr(), 0.0),
        center,
        axes,
        half,
        &q,
    )?;
    Ok(v.re)
}
