//! Gaussian wave packets in natural units (MeV, fm, ħ = c = 1).

use num_complex::Complex64;

use crate::error::{domain, Result};
use crate::units::HBAR_C;
use crate::vec3::Vec3;

/// Energy–momentum relation used for the packet's central energy and velocity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dispersion {
    /// E = m + p²/2m, v = p/m.
    NonRelativistic,
    /// E = √(p² + m²), v = p/E.
    Relativistic,
    /// E = |p|, v = p̂.
    Massless,
}

impl Dispersion {
    /// Energy in MeV for momentum magnitude `p` (MeV).
    pub fn energy(self, p: f64, mass: f64) -> f64 {
        match self {
            Dispersion::NonRelativistic => mass + p * p / (2.0 * mass),
            Dispersion::Relativistic => p.hypot(mass),
            Dispersion::Massless => p.abs(),
        }
    }

    /// Group speed dE/dp in units of c.
    pub fn speed(self, p: f64, mass: f64) -> f64 {
        match self {
            Dispersion::NonRelativistic => p / mass,
            Dispersion::Relativistic => {
                let e = p.hypot(mass);
                if e == 0.0 {
                    0.0
                } else {
                    p / e
                }
            }
            Dispersion::Massless => {
                if p == 0.0 {
                    0.0
                } else {
                    1.0
                }
            }
        }
    }

    /// Inverse of [`Dispersion::energy`]; `None` below the rest energy.
    pub fn momentum_for_energy(self, e: f64, mass: f64) -> Option<f64> {
        let p = match self {
            Dispersion::NonRelativistic => (2.0 * mass * (e - mass)).sqrt(),
            Dispersion::Relativistic => ((e - mass) * (e + mass)).sqrt(),
            Dispersion::Massless => e,
        };
        (p >= 0.0 && e >= mass).then_some(p)
    }
}

/// An isotropic Gaussian packet with central momentum `P₀` (MeV), center
/// `X₀` (fm), reference time `T₀` (fm) and width parameter `σ` (fm²).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WavePacket {
    momentum: Vec3,
    position: Vec3,
    time: f64,
    sigma: f64,
    mass: f64,
    dispersion: Dispersion,
}

impl WavePacket {
    pub fn new(
        momentum: Vec3,
        position: Vec3,
        reference_time: f64,
        sigma: f64,
        mass: f64,
        dispersion: Dispersion,
    ) -> Result<Self> {
        if !(sigma > 0.0 && sigma.is_finite()) {
            return domain(format!("width sigma must be positive, got {sigma}"));
        }
        if !(mass >= 0.0 && mass.is_finite()) {
            return domain(format!("mass must be non-negative, got {mass}"));
        }
        if dispersion == Dispersion::Massless && mass != 0.0 {
            return domain("massless dispersion requires mass = 0");
        }
        if dispersion == Dispersion::NonRelativistic && mass == 0.0 {
            return domain("nonrelativistic dispersion requires mass > 0");
        }
        if !(momentum.is_finite() && position.is_finite() && reference_time.is_finite()) {
            return domain("packet parameters must be finite");
        }
        Ok(WavePacket {
            momentum,
            position,
            time: reference_time,
            sigma,
            mass,
            dispersion,
        })
    }

    pub fn momentum(&self) -> Vec3 {
        self.momentum
    }

    pub fn position(&self) -> Vec3 {
        self.position
    }

    pub fn reference_time(&self) -> f64 {
        self.time
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn dispersion(&self) -> Dispersion {
        self.dispersion
    }

    /// Central energy E(P₀) in MeV.
    pub fn energy(&self) -> f64 {
        self.dispersion.energy(self.momentum.norm(), self.mass)
    }

    /// Group velocity v₀ = ∂E/∂P at P₀ (units of c).
    pub fn velocity(&self) -> Vec3 {
        match self.momentum.unit() {
            Some(n) => n * self.dispersion.speed(self.momentum.norm(), self.mass),
            None => Vec3::ZERO,
        }
    }

    /// Central wavenumber P₀/ħc in fm⁻¹.
    pub fn wavenumber(&self) -> Vec3 {
        self.momentum / HBAR_C
    }

    /// (πσ)^(−3/4).
    pub fn normalization(&self) -> f64 {
        (std::f64::consts::PI * self.sigma).powf(-0.75)
    }

    /// Center X₀ + v₀(t − T₀).
    pub fn center(&self, t: f64) -> Vec3 {
        self.position + self.velocity() * (t - self.time)
    }

    /// Largest |t − T₀| (fm) for which the rigid near-field form is trusted:
    /// 0.1·σE/max(1, m²/E²).
    pub fn near_field_horizon(&self) -> f64 {
        let e = self.energy();
        let ratio = if e > 0.0 { (self.mass / e).powi(2) } else { 1.0 };
        0.1 * self.sigma * (e / HBAR_C) / ratio.max(1.0)
    }

    pub fn in_near_field(&self, t: f64) -> bool {
        (t - self.time).abs() <= self.near_field_horizon()
    }

    /// Near-field amplitude N₃·exp(−(x−X₀−v₀τ)²/2σ − iEτ + iP₀·(x−X₀)), τ = t − T₀.
    pub fn evaluate(&self, x: Vec3, t: f64) -> Complex64 {
        let tau = t - self.time;
        let d = x - self.position - self.velocity() * tau;
        let phase = self.wavenumber().dot(x - self.position) - self.energy() / HBAR_C * tau;
        Complex64::from_polar(
            self.normalization() * (-d.norm2() / (2.0 * self.sigma)).exp(),
            phase,
        )
    }
}

/// Overlap ⟨ψ₂|ψ₁⟩ at a common time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OverlapResult {
    pub amplitude: Complex64,
    /// |amplitude|².
    pub probability: f64,
    /// (2√(σ₁σ₂)/(σ₁+σ₂))³, the maximum over momenta and positions.
    pub bound: f64,
    /// Unwrapped phase of the amplitude (rad).
    pub phase: f64,
}

/// (2√(σ₁σ₂)/(σ₁+σ₂))³.
pub fn probability_bound(sigma1: f64, sigma2: f64) -> f64 {
    (2.0 * (sigma1 * sigma2).sqrt() / (sigma1 + sigma2)).powi(3)
}

fn check_same_kind(p1: &WavePacket, p2: &WavePacket) -> Result<()> {
    if p1.dispersion != p2.dispersion {
        return domain(format!(
            "mixed dispersion kinds {:?} and {:?}",
            p1.dispersion, p2.dispersion
        ));
    }
    Ok(())
}

/// ∫d³x e^{−iK·x + iΩt} ψ₂*ψ₁ with K in fm⁻¹ and Ω in fm⁻¹.
fn gaussian_product_integral(
    p1: &WavePacket,
    p2: &WavePacket,
    t: f64,
    k_extra: Vec3,
    omega_extra: f64,
) -> OverlapResult {
    let (s1, s2) = (p1.sigma, p2.sigma);
    let ssum = s1 + s2;
    let s_red = s1 * s2 / ssum;
    let x1 = p1.center(t);
    let x2 = p2.center(t);
    let xbar = (x1 * s2 + x2 * s1) / ssum;
    let k1 = p1.wavenumber();
    let k2 = p2.wavenumber();
    let dk = k1 - k2 - k_extra;
    let dx = x1 - x2;
    let ratio = 2.0 * (s1 * s2).sqrt() / ssum;
    let modulus = ratio.powf(1.5) * (-0.5 * s_red * dk.norm2() - dx.norm2() / (2.0 * ssum)).exp();
    let phase = dk.dot(xbar) + omega_extra * t
        - p1.energy() / HBAR_C * (t - p1.time)
        + p2.energy() / HBAR_C * (t - p2.time)
        - k1.dot(p1.position)
        + k2.dot(p2.position);
    let amplitude = Complex64::from_polar(modulus, phase);
    OverlapResult {
        amplitude,
        probability: modulus * modulus,
        bound: ratio.powi(3),
        phase,
    }
}

/// Closed-form overlap ∫d³x ψ₂*(x,t)ψ₁(x,t).
///
/// The modulus is (2√(σ₁σ₂)/(σ₁+σ₂))^{3/2}·exp(−σ_s ΔP²/2 − ΔX(t)²/2(σ₁+σ₂))
/// with σ_s = σ₁σ₂/(σ₁+σ₂). The phase is ΔP·X̄(t) plus the constant
/// −E₁(t−T₁) + E₂(t−T₂) − P₁·X₁ + P₂·X₂, where X̄ is the σ-weighted center.
pub fn overlap(p1: &WavePacket, p2: &WavePacket, t: f64) -> Result<OverlapResult> {
    check_same_kind(p1, p2)?;
    Ok(gaussian_product_integral(p1, p2, t, Vec3::ZERO, 0.0))
}

/// M = ∫d³x exp(−iΣp_l·x + iΣE_l t)·ψ₂*ψ₁ for plane-wave spectators with
/// momenta `spectator_momenta` and energies `spectator_energies` (MeV).
///
/// Gaussian integration gives the overlap form with ΔP → P₁ − P₂ − Σp_l and
/// an extra phase ΣE_l t. The prefactor is (4σ₁σ₂/(σ₁+σ₂)²)^{+3/4}; an
/// exponent of −3/4 would make |M| exceed one for unequal widths.
pub fn appendix_matrix_element(
    p1: &WavePacket,
    p2: &WavePacket,
    spectator_momenta: &[Vec3],
    spectator_energies: &[f64],
    t: f64,
) -> Result<Complex64> {
    check_same_kind(p1, p2)?;
    if spectator_momenta.len() != spectator_energies.len() {
        return domain("spectator momenta and energies differ in length");
    }
    let k: Vec3 = spectator_momenta.iter().copied().sum::<Vec3>() / HBAR_C;
    let omega: f64 = spectator_energies.iter().sum::<f64>() / HBAR_C;
    Ok(gaussian_product_integral(p1, p2, t, k, omega).amplitude)
}

/// Result of passing a packet through a potential step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Accelerated {
    /// Packet with the new central momentum and the original σ.
    pub packet: WavePacket,
    /// Longitudinal size after acceleration (fm).
    pub longitudinal_width: f64,
    /// Transverse size, unchanged (fm).
    pub transverse_width: f64,
    /// v_after / v_before.
    pub velocity_ratio: f64,
}

/// Raises the central energy by `v0` (MeV) along the momentum direction
/// (ẑ for a packet at rest). The longitudinal size scales with the velocity
/// ratio so the crossing time δx/v is preserved.
pub fn accelerate(packet: &WavePacket, v0: f64) -> Result<Accelerated> {
    let width = packet.sigma.sqrt();
    if v0 == 0.0 {
        return Ok(Accelerated {
            packet: *packet,
            longitudinal_width: width,
            transverse_width: width,
            velocity_ratio: 1.0,
        });
    }
    let e2 = packet.energy() + v0;
    if !(e2 > packet.mass) {
        return domain(format!(
            "energy after the potential ({e2} MeV) does not exceed the mass"
        ));
    }
    let p1 = packet.momentum.norm();
    let v_before = packet.dispersion.speed(p1, packet.mass);
    if v_before <= 0.0 {
        return domain("a packet at rest has no crossing time");
    }
    let p2 = packet
        .dispersion
        .momentum_for_energy(e2, packet.mass)
        .expect("energy above the mass");
    let v_after = packet.dispersion.speed(p2, packet.mass);
    let dir = packet.momentum.unit().unwrap_or(Vec3::Z);
    let ratio = v_after / v_before;
    Ok(Accelerated {
        packet: WavePacket {
            momentum: dir * p2,
            ..*packet
        },
        longitudinal_width: width * ratio,
        transverse_width: width,
        velocity_ratio: ratio,
    })
}

/// Velocity ratio v(p_after)/v(p_before) for momenta in MeV.
pub fn velocity_ratio(dispersion: Dispersion, mass: f64, p_before: f64, p_after: f64) -> Result<f64> {
    let v1 = dispersion.speed(p_before, mass);
    if !(v1 > 0.0) {
        return domain("initial velocity must be positive");
    }
    Ok(dispersion.speed(p_after, mass) / v1)
}

/// δx_child = (v_child/v_parent)·δx_parent; velocities in units of c.
pub fn intermediate_size(delta_x_parent: f64, v_parent: f64, v_child: f64) -> Result<f64> {
    for (name, v) in [("v_parent", v_parent), ("v_child", v_child)] {
        if !(v > 0.0 && v <= 1.0) {
            return domain(format!("{name} must lie in (0, 1], got {v}"));
        }
    }
    Ok(delta_x_parent * v_child / v_parent)
}

/// Phase −(E(P₀) − P₀·v₀)·dt accumulated at the packet center, for `dt` in fm.
pub fn moving_frame_phase(packet: &WavePacket, dt: f64) -> f64 {
    -(packet.energy() - packet.momentum.dot(packet.velocity())) * dt / HBAR_C
}

/// A one-dimensional nonrelativistic packet in units with ħ = 1:
/// wavenumber `k0`, E = k²/2m.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Packet1D {
    pub k0: f64,
    pub x0: f64,
    pub t0: f64,
    pub sigma: f64,
    pub mass: f64,
}

impl Packet1D {
    pub fn new(k0: f64, x0: f64, t0: f64, sigma: f64, mass: f64) -> Result<Self> {
        if !(sigma > 0.0) {
            return domain(format!("width sigma must be positive, got {sigma}"));
        }
        if !(mass > 0.0) {
            return domain(format!("mass must be positive, got {mass}"));
        }
        Ok(Packet1D { k0, x0, t0, sigma, mass })
    }

    pub fn velocity(&self) -> f64 {
        self.k0 / self.mass
    }

    pub fn energy(&self) -> f64 {
        self.k0 * self.k0 / (2.0 * self.mass)
    }

    pub fn evaluate(&self, x: f64, t: f64) -> Complex64 {
        let tau = t - self.t0;
        let d = x - self.x0 - self.velocity() * tau;
        let n = (std::f64::consts::PI * self.sigma).powf(-0.25);
        Complex64::from_polar(
            n * (-d * d / (2.0 * self.sigma)).exp(),
            self.k0 * (x - self.x0) - self.energy() * tau,
        )
    }

    /// Closed-form ∫dx ψ₂*ψ₁ at time `t`.
    pub fn overlap(&self, other: &Packet1D, t: f64) -> Complex64 {
        let (s1, s2) = (self.sigma, other.sigma);
        let ssum = s1 + s2;
        let x1 = self.x0 + self.velocity() * (t - self.t0);
        let x2 = other.x0 + other.velocity() * (t - other.t0);
        let xbar = (x1 * s2 + x2 * s1) / ssum;
        let dk = self.k0 - other.k0;
        let dx = x1 - x2;
        let modulus = (2.0 * (s1 * s2).sqrt() / ssum).sqrt()
            * (-0.5 * s1 * s2 / ssum * dk * dk - dx * dx / (2.0 * ssum)).exp();
        let phase = dk * xbar - self.energy() * (t - self.t0) + other.energy() * (t - other.t0)
            - self.k0 * self.x0
            + other.k0 * other.x0;
        Complex64::from_polar(modulus, phase)
    }
}
