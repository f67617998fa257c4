//! One-dimensional continuum states of short-range potentials.
//!
//! Units have ħ = 1 with E = k²/2m. Stationary states are the right-incoming
//! solutions ψ(k,x) = e^{ikx} + R(k)e^{−ikx} left of the support and
//! T(k)e^{ikx} right of it.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{domain, Result};
use crate::packets::Packet1D;
use crate::quadrature::{panels, Integrator};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Potential {
    /// V(x) = g·δ(x).
    Delta { strength: f64 },
    /// V(x) = V₀ on [−a, a].
    SquareBarrier { height: f64, half_width: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialModel1D {
    pub potential: Potential,
    pub mass: f64,
}

impl PotentialModel1D {
    pub fn delta(strength: f64, mass: f64) -> Result<Self> {
        Self::new(Potential::Delta { strength }, mass)
    }

    pub fn square_barrier(height: f64, half_width: f64, mass: f64) -> Result<Self> {
        if !(half_width > 0.0) {
            return domain("barrier half-width must be positive");
        }
        Self::new(Potential::SquareBarrier { height, half_width }, mass)
    }

    fn new(potential: Potential, mass: f64) -> Result<Self> {
        if !(mass > 0.0 && mass.is_finite()) {
            return domain("mass must be positive");
        }
        Ok(PotentialModel1D { potential, mass })
    }

    /// Interval outside of which V vanishes.
    pub fn support(&self) -> (f64, f64) {
        match self.potential {
            Potential::Delta { .. } => (0.0, 0.0),
            Potential::SquareBarrier { half_width, .. } => (-half_width, half_width),
        }
    }

    /// Returns (R(k), T(k)) for k > 0.
    pub fn scattering_coefficients(&self, k: f64) -> Result<(Complex64, Complex64)> {
        if !(k > 0.0) {
            return domain(format!("wavenumber must be positive, got {k}"));
        }
        Ok(match self.potential {
            Potential::Delta { strength } => {
                let beta = self.mass * strength / k;
                let t = 1.0 / Complex64::new(1.0, beta);
                (t - 1.0, t)
            }
            Potential::SquareBarrier { height, half_width: a } => {
                let q = self.interior_wavenumber(k, height);
                // sin(2qa)/q, continuous through q = 0.
                let sq = if q.norm() * a < 1e-8 {
                    Complex64::new(2.0 * a, 0.0)
                } else {
                    (q * 2.0 * a).sin() / q
                };
                let den = (q * 2.0 * a).cos() - I * (k * k + q * q) / (2.0 * k) * sq;
                let t = Complex64::from_polar(1.0, -2.0 * k * a) / den;
                let r = I * (q * q - k * k) / (2.0 * k) * sq * t;
                (r, t)
            }
        })
    }

    fn interior_wavenumber(&self, k: f64, height: f64) -> Complex64 {
        Complex64::new(k * k - 2.0 * self.mass * height, 0.0).sqrt()
    }

    /// ψ(k, x) including the interior of a barrier.
    pub fn wavefunction(&self, k: f64, x: f64) -> Result<Complex64> {
        let (r, t) = self.scattering_coefficients(k)?;
        let (x0, x1) = self.support();
        let plane = |kk: f64| Complex64::from_polar(1.0, kk * x);
        if x <= x0 {
            return Ok(plane(k) + r * plane(-k));
        }
        if x >= x1 {
            return Ok(t * plane(k));
        }
        let Potential::SquareBarrier { height, half_width: a } = self.potential else {
            unreachable!("delta support is a point")
        };
        let mut q = self.interior_wavenumber(k, height);
        if q.norm() < 1e-12 * k {
            q = Complex64::new(1e-12 * k, 0.0);
        }
        let edge = t * Complex64::from_polar(1.0, k * a);
        let ratio = Complex64::new(k, 0.0) / q;
        let amp_a = edge * (-I * q * a).exp() * (1.0 + ratio) * 0.5;
        let amp_b = edge * (I * q * a).exp() * (1.0 - ratio) * 0.5;
        Ok(amp_a * (I * q * x).exp() + amp_b * (-I * q * x).exp())
    }
}

/// Integration window for the plane-wave product.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Window {
    /// x ∈ [0, Λ]: kernel (e^{−idΛ} − 1)/(−id), tends to π·δ.
    OneSided,
    /// x ∈ [−Λ, Λ]: kernel 2 sin(dΛ)/d, tends to 2π·δ.
    Symmetric,
    /// x ∈ [x₀, x₀ + Λ]: the one-sided kernel times e^{−idx₀}.
    Offset(f64),
}

impl Window {
    /// Weight of the delta function in the large-Λ limit.
    pub fn delta_weight(self) -> f64 {
        match self {
            Window::Symmetric => 2.0 * PI,
            _ => PI,
        }
    }

    /// ∫ e^{−idx} dx over the window, with d = k₂ − k₁.
    pub fn kernel(self, d: f64, lambda: f64) -> Complex64 {
        let sinc = |u: f64| if u.abs() < 1e-8 { 1.0 - u * u / 6.0 } else { u.sin() / u };
        match self {
            Window::Symmetric => Complex64::new(2.0 * lambda * sinc(d * lambda), 0.0),
            Window::OneSided => {
                let u = 0.5 * d * lambda;
                Complex64::from_polar(lambda * sinc(u), -u)
            }
            Window::Offset(x0) => {
                let u = 0.5 * d * lambda;
                Complex64::from_polar(lambda * sinc(u), -u - d * x0)
            }
        }
    }
}

/// Window lengths Λₙ on the scaling grid for the pair (k₁, k₂), n = 1, 2, …:
/// (k₂−k₁)Λ/2 = (π/3)sign(k₁−k₂) + 2πn, where 2cos((k₂−k₁)Λ/2) = 1.
pub fn scaling_lengths(k1: f64, k2: f64, count: usize) -> Result<Vec<f64>> {
    let d = (k2 - k1).abs();
    if !(d > 0.0) {
        return domain("scaling lengths need k1 != k2");
    }
    Ok((1..=count)
        .map(|n| 2.0 * (2.0 * PI * n as f64 - PI / 3.0) / d)
        .collect())
}

/// ∫dk₂ f(k₂)·kernel(k₂ − k₁, Λ) over `range`, by panelled adaptive
/// quadrature. Tends to `window.delta_weight()·f(k₁)` for smooth f whose
/// odd part about k₁ is small; the sign-discontinuous part of the limit
/// integrates to zero against such functions.
pub fn scaled_delta_integral<F: Fn(f64) -> f64>(
    k1: f64,
    lambda: f64,
    test_fn: F,
    window: Window,
    range: (f64, f64),
) -> Result<Complex64> {
    if !(lambda > 0.0) {
        return domain("window length must be positive");
    }
    let (a, b) = range;
    let n = (((b - a) * lambda / PI).ceil() as usize).clamp(8, 2_000_000);
    let mut breaks = panels(a, b, n);
    if k1 > a && k1 < b {
        let i = breaks.partition_point(|&x| x < k1);
        if breaks[i] != k1 {
            breaks.insert(i, k1);
        }
    }
    let q = Integrator {
        abs_tol: 1e-12,
        rel_tol: 1e-10,
        max_intervals: 8 * breaks.len() + 10_000,
    };
    Ok(q
        .integrate_breaks(|k2| test_fn(k2) * window.kernel(k2 - k1, lambda), &breaks)?
        .value)
}

/// Terms of ∫ψ*(k₂,x)ψ(k₁,x)dx.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OverlapDecomposition {
    /// Coefficient of 2πδ(k₁ − k₂): (1 + R₂*R₁ + T₂*T₁)/2, equal to 1 on shell.
    pub conserving_coefficient: Complex64,
    /// Coefficient of πδ(k₁ + k₂): R₁ + R₂*.
    pub reflection_delta_coefficient: Complex64,
    /// Δ = i[(T₂*T₁ − 1) + R₂*R₁]/(k₂ − k₁) + i(R₁ − R₂*)/(k₁ + k₂), entering
    /// the overlap as −Δ. Hermitian: Δ(k₁,k₂) = Δ*(k₂,k₁).
    pub delta_term: Complex64,
}

fn delta_closed(model: &PotentialModel1D, k1: f64, k2: f64) -> Result<Complex64> {
    let (r1, t1) = model.scattering_coefficients(k1)?;
    let (r2, t2) = model.scattering_coefficients(k2)?;
    Ok(I * (t2.conj() * t1 - 1.0 + r2.conj() * r1) / (k2 - k1) + I * (r1 - r2.conj()) / (k1 + k2))
}

pub fn overlap_decomposition(model: &PotentialModel1D, k1: f64, k2: f64) -> Result<OverlapDecomposition> {
    let (r1, t1) = model.scattering_coefficients(k1)?;
    let (r2, t2) = model.scattering_coefficients(k2)?;
    let scale = k1.max(k2);
    let delta_term = if (k2 - k1).abs() > 1e-6 * scale {
        delta_closed(model, k1, k2)?
    } else {
        // The first term is 0/0 on shell; take the symmetric limit.
        let h = 1e-4 * scale;
        let mid = 0.5 * (k1 + k2);
        let lo = delta_closed(model, mid, mid + h)?;
        let hi = delta_closed(model, mid, mid - h)?;
        0.5 * (lo + hi)
    };
    Ok(OverlapDecomposition {
        conserving_coefficient: 0.5 * (1.0 + r2.conj() * r1 + t2.conj() * t1),
        reflection_delta_coefficient: r1 + r2.conj(),
        delta_term,
    })
}

/// ∫ψ*(k₂,x)ψ(k₁,x)e^{−x²/2Λ²}dx by quadrature.
///
/// For |k₁ − k₂|Λ ≫ 1 the delta terms are exponentially suppressed and the
/// result is the energy non-conserving part of the overlap, up to relative
/// corrections of order 1/(|k₁−k₂|Λ)².
pub fn windowed_overlap(model: &PotentialModel1D, k1: f64, k2: f64, lambda: f64) -> Result<Complex64> {
    model.scattering_coefficients(k1)?;
    model.scattering_coefficients(k2)?;
    let (x0, x1) = model.support();
    let reach = 10.0 * lambda;
    let per = PI / (k1 + k2);
    let mut breaks = Vec::new();
    for (a, b) in [(x0 - reach, x0), (x0, x1), (x1, x1 + reach)] {
        if b > a {
            let n = ((b - a) / per).ceil() as usize;
            let seg = panels(a, b, n.max(1));
            if breaks.is_empty() {
                breaks.extend(seg);
            } else {
                breaks.extend(seg.into_iter().skip(1));
            }
        }
    }
    let q = Integrator {
        abs_tol: 1e-10,
        rel_tol: 1e-9,
        max_intervals: 8 * breaks.len() + 10_000,
    };
    let f = |x: f64| {
        let w = (-x * x / (2.0 * lambda * lambda)).exp();
        model.wavefunction(k2, x).unwrap().conj() * model.wavefunction(k1, x).unwrap() * w
    };
    Ok(q.integrate_breaks(f, &breaks)?.value)
}

/// Non-orthogonality kernel used by [`norm_drift`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OverlapKernel {
    /// ε(k,k′) = −Δ(k,k′)/2π from the closed form.
    ClosedForm,
    /// ε from the windowed integral of the states themselves, which vanishes
    /// for real potentials.
    Windowed,
}

/// Gaussian amplitude α(k) with ∫|α|²dk = 1, centered at `k_mean` with
/// standard deviation `k_width` of |α|².
pub fn gaussian_amplitude(k_mean: f64, k_width: f64) -> impl Fn(f64) -> Complex64 + Copy {
    let n = (2.0 * PI * k_width * k_width).powf(-0.25);
    move |k: f64| Complex64::new(n * (-(k - k_mean).powi(2) / (4.0 * k_width * k_width)).exp(), 0.0)
}

/// 1 + ∬dk dk′ α*(k′)α(k)ε(k,k′)e^{−i(E(k)−E(k′))t} over `k_range`
/// (T₀ = 0), with states normalized as ψ/√(2π).
pub fn norm_drift<A: Fn(f64) -> Complex64>(
    alpha: A,
    k_range: (f64, f64),
    model: &PotentialModel1D,
    t: f64,
    kernel: OverlapKernel,
) -> Result<f64> {
    if kernel == OverlapKernel::Windowed {
        return Ok(1.0);
    }
    if !(k_range.0 > 0.0) {
        return domain("momentum range must be positive");
    }
    let m = model.mass;
    let q = Integrator::new(1e-10, 1e-8);
    let v = q.integrate_2d(
        |k, kp| {
            let eps = -overlap_decomposition(model, k, kp).unwrap().delta_term / (2.0 * PI);
            let de = (k * k - kp * kp) / (2.0 * m);
            alpha(kp).conj() * alpha(k) * eps * Complex64::from_polar(1.0, -de * t)
        },
        k_range,
        k_range,
    )?;
    Ok(1.0 + v.re)
}

/// ∫|Ψ(x,t)|²dx for Ψ = ∫dk α(k)ψ(k,x)e^{−iE(k)t}/√(2π), by direct
/// quadrature over x in `x_range`.
pub fn superposition_norm<A: Fn(f64) -> Complex64>(
    alpha: A,
    k_range: (f64, f64),
    model: &PotentialModel1D,
    t: f64,
    x_range: (f64, f64),
) -> Result<f64> {
    let m = model.mass;
    let inner = Integrator::new(1e-11, 1e-9);
    let (ka, kb) = k_range;
    let kpanels = panels(ka, kb, 16);
    let mut failure = None;
    let mut psi = |x: f64| {
        match inner.integrate_breaks(
            |k| {
                alpha(k) * model.wavefunction(k, x).unwrap() * Complex64::from_polar(1.0, -k * k / (2.0 * m) * t)
            },
            &kpanels,
        ) {
            Ok(e) => e.value / (2.0 * PI).sqrt(),
            Err(e) => {
                failure.get_or_insert(e);
                Complex64::new(0.0, 0.0)
            }
        }
    };
    let outer = Integrator::new(1e-10, 1e-8);
    let n = (((x_range.1 - x_range.0) * kb / PI).ceil() as usize).max(16);
    let v = outer.integrate_breaks(|x| Complex64::new(psi(x).norm_sqr(), 0.0), &panels(x_range.0, x_range.1, n))?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(v.value.re)
}

/// First-order wave g∫dt′ G(t,x;t′,0)φ(t′,0) emitted by a point potential at
/// the origin, with G = (2π|t−t′|/m)^{−1/2}e^{imx²/2|t−t′|}.
///
/// Only the passage window of the packet through the origin contributes;
/// the substitution u = √(t − t′) removes the endpoint singularity.
pub fn greens_first_order(packet: &Packet1D, g: f64, x: f64, t: f64) -> Result<Complex64> {
    if g == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let v = packet.velocity();
    if v == 0.0 {
        return domain("packet must move to pass the potential");
    }
    let m = packet.mass;
    let t_cross = packet.t0 - packet.x0 / v;
    let dwell = 9.0 * packet.sigma.sqrt() / v.abs();
    let (t_lo, t_hi) = (t_cross - dwell, (t_cross + dwell).min(t));
    if t <= t_lo {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let u_lo = (t - t_hi).max(0.0).sqrt();
    let u_hi = (t - t_lo).sqrt();
    let pref = 2.0 * (m / (2.0 * PI)).sqrt();
    let f = |u: f64| {
        let prop = if u > 0.0 {
            Complex64::from_polar(pref, m * x * x / (2.0 * u * u))
        } else {
            Complex64::new(0.0, 0.0)
        };
        prop * packet.evaluate(0.0, t - u * u)
    };
    // Panel count follows the phase swing of the integrand.
    let swing = |u: f64| m * x * x / (2.0 * u * u) + packet.energy() * u * u;
    let turns = (swing(u_lo.max(1e-300)) - swing(u_hi)).abs().min(1e6) / PI;
    let n = (turns.ceil() as usize).clamp(32, 200_000);
    let q = Integrator {
        abs_tol: 1e-12,
        rel_tol: 1e-8,
        max_intervals: 8 * n + 10_000,
    };
    Ok(q.integrate_breaks(f, &panels(u_lo, u_hi, n))?.value * g)
}

/// √σ = v₀τ: coherence length (m) for speed `beta` (units of c) and lifetime `tau` (s).
pub fn coherence_from_lifetime(beta: f64, tau: f64) -> Result<f64> {
    if !(beta > 0.0 && tau > 0.0) {
        return domain("speed and lifetime must be positive");
    }
    Ok(beta * crate::constants::C_M_PER_S * tau)
}

/// Solves v/√σ_v = 1/τ_m + v/√σ_m for σ_v (m²). `sigma_m` and `tau_m` may
/// be infinite; `beta` is in units of c.
pub fn boundary_match(tau_m: f64, sigma_m: f64, beta: f64) -> Result<f64> {
    if !(tau_m > 0.0 && sigma_m > 0.0 && beta > 0.0) {
        return domain("lifetime, width and speed must be positive");
    }
    let v = beta * crate::constants::C_M_PER_S;
    let rate = 1.0 / tau_m + v / sigma_m.sqrt();
    Ok((v / rate).powi(2))
}

/// Two-medium form 1/τ₁ + v/√σ₁ = 1/τ₂ + v/√σ₂, solved for σ₂.
pub fn match_media(tau1: f64, sigma1: f64, tau2: f64, beta: f64) -> Result<f64> {
    if !(tau1 > 0.0 && sigma1 > 0.0 && tau2 > 0.0 && beta > 0.0) {
        return domain("lifetimes, width and speed must be positive");
    }
    let v = beta * crate::constants::C_M_PER_S;
    let rate = 1.0 / tau1 + v / sigma1.sqrt() - 1.0 / tau2;
    if !(rate > 0.0) {
        return domain("no positive width satisfies the matching relation");
    }
    Ok((v / rate).powi(2))
}

/// Decay time from the variational density: 1/τ = (v/√σ)·c_f, with
/// c_f = 2/√π when `exact_factor` and 1 otherwise.
pub fn variational_lifetime(beta: f64, sigma: f64, exact_factor: bool) -> Result<f64> {
    if !(beta > 0.0 && sigma > 0.0) {
        return domain("speed and width must be positive");
    }
    let factor = if exact_factor { 2.0 / PI.sqrt() } else { 1.0 };
    Ok(sigma.sqrt() / (beta * crate::constants::C_M_PER_S * factor))
}
