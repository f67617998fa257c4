//! Cross sections, mean free paths and plasma quantities, in SI units.
//!
//! Energies are in eV, lengths in m, areas in m², densities in m⁻³.

use std::f64::consts::PI;

use crate::constants::{Constants, C_M_PER_S, ELEMENTARY_CHARGE};
use crate::error::{domain, Result};
use crate::quadrature::Integrator;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Process {
    Rutherford,
    Thomson,
    Rayleigh,
    Compton,
    Photoelectric,
    StrongGeometric,
    UserSupplied,
}

impl Process {
    pub fn name(self) -> &'static str {
        match self {
            Process::Rutherford => "rutherford",
            Process::Thomson => "thomson",
            Process::Rayleigh => "rayleigh",
            Process::Compton => "compton",
            Process::Photoelectric => "photoelectric",
            Process::StrongGeometric => "strong_geometric",
            Process::UserSupplied => "user_supplied",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrossSection {
    pub process: Process,
    /// m².
    pub value: f64,
    pub parameters: Vec<(&'static str, f64)>,
    pub validity_note: &'static str,
}

impl CrossSection {
    pub fn user_supplied(value: f64) -> Result<Self> {
        if !(value > 0.0 && value.is_finite()) {
            return domain("cross section must be positive");
        }
        Ok(CrossSection {
            process: Process::UserSupplied,
            value,
            parameters: vec![],
            validity_note: "supplied value",
        })
    }

    pub fn parameter(&self, name: &str) -> Option<f64> {
        self.parameters.iter().find(|p| p.0 == name).map(|p| p.1)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Medium {
    /// m⁻³.
    pub number_density: f64,
    /// K.
    pub temperature: Option<f64>,
    /// Energy loss per length, eV/m.
    pub dedx: Option<f64>,
    pub label: String,
}

impl Medium {
    pub fn new(label: &str, number_density: f64) -> Result<Self> {
        if !(number_density > 0.0 && number_density.is_finite()) {
            return domain(format!("number density of {label} must be positive"));
        }
        Ok(Medium {
            number_density,
            temperature: None,
            dedx: None,
            label: label.to_string(),
        })
    }
}

/// Kinetic-energy convention for thermal Coulomb scattering.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThermalConvention {
    /// mv² = 3kT.
    ThreeKT,
    /// mv² = kT.
    KT,
}

/// e²/4πε₀ in eV·m.
fn coulomb_ev_m(c: &Constants) -> f64 {
    c.alpha * c.hbar_c_ev_m()
}

fn rutherford_mv2(c: &Constants, mv2: f64, log_lambda: f64, charge_factor: f64) -> Result<CrossSection> {
    if !(mv2 > 0.0) {
        return domain("energy must be positive");
    }
    if !(log_lambda >= 0.0) {
        return domain("log Lambda must be non-negative");
    }
    let value = 4.0 * PI * (charge_factor * coulomb_ev_m(c) / mv2).powi(2) * log_lambda;
    Ok(CrossSection {
        process: Process::Rutherford,
        value,
        parameters: vec![("logLambda", log_lambda), ("charge_factor", charge_factor), ("mv2_eV", mv2)],
        validity_note: "screened Coulomb scattering; log Lambda from the screening cutoff",
    })
}

/// σ = 4π(z·αħc/E)²·logΛ with E = mv² = 2·`kinetic_energy` (eV).
/// At logΛ = 0 the value is 0.
pub fn rutherford(c: &Constants, kinetic_energy: f64, log_lambda: f64, charge_factor: f64) -> Result<CrossSection> {
    rutherford_mv2(c, 2.0 * kinetic_energy, log_lambda, charge_factor)
}

/// Rutherford cross section for thermal particles at temperature `t` (K).
pub fn rutherford_thermal(c: &Constants, t: f64, log_lambda: f64, convention: ThermalConvention) -> Result<CrossSection> {
    let kt = c.k_b * t / ELEMENTARY_CHARGE;
    let mv2 = match convention {
        ThermalConvention::ThreeKT => 3.0 * kt,
        ThermalConvention::KT => kt,
    };
    rutherford_mv2(c, mv2, log_lambda, 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ThomsonVariant {
    /// (8π/3)r_e².
    #[default]
    Standard,
    /// (4π/3)r_e².
    Half,
}

pub fn thomson(c: &Constants, variant: ThomsonVariant) -> CrossSection {
    let pref = match variant {
        ThomsonVariant::Standard => 8.0 * PI / 3.0,
        ThomsonVariant::Half => 4.0 * PI / 3.0,
    };
    CrossSection {
        process: Process::Thomson,
        value: pref * c.r_e * c.r_e,
        parameters: vec![("r_e_m", c.r_e)],
        validity_note: "photon energy far below the electron mass",
    }
}

/// σ = (8π/3)(4π²α_v)²/λ⁴ for polarizability volume α_v = α/4πε₀ (m³).
pub fn rayleigh(polarizability_volume: f64, wavelength: f64) -> Result<CrossSection> {
    if !(wavelength > 0.0 && polarizability_volume > 0.0) {
        return domain("wavelength and polarizability must be positive");
    }
    let value = 8.0 * PI / 3.0 * (4.0 * PI * PI * polarizability_volume).powi(2) / wavelength.powi(4);
    Ok(CrossSection {
        process: Process::Rayleigh,
        value,
        parameters: vec![("polarizability_m3", polarizability_volume), ("wavelength_m", wavelength)],
        validity_note: "wavelength much larger than the scatterer",
    })
}

/// σ(λ₁)/σ(λ₂) = (λ₂/λ₁)⁴.
pub fn rayleigh_ratio(lambda1: f64, lambda2: f64) -> Result<f64> {
    if !(lambda1 > 0.0 && lambda2 > 0.0) {
        return domain("wavelengths must be positive");
    }
    Ok((lambda2 / lambda1).powi(4))
}

/// Scattered photon energy k₀′ = m k₀/(m + k₀(1 − cosθ)), eV.
pub fn compton_shift(c: &Constants, k0: f64, theta: f64) -> f64 {
    let m = c.m_e * 1e6;
    m * k0 / (m + k0 * (1.0 - theta.cos()))
}

/// dσ/dΩ = (r_e²/2)(k₀′/k₀)²(k₀/k₀′ + k₀′/k₀ − sin²θ) in m²/sr, k₀ in eV.
pub fn compton_differential(c: &Constants, k0: f64, theta: f64) -> Result<f64> {
    if !(k0 > 0.0) {
        return domain("photon energy must be positive");
    }
    if !(0.0..=PI).contains(&theta) {
        return domain("angle must lie in [0, pi]");
    }
    let r = compton_shift(c, k0, theta) / k0;
    Ok(0.5 * c.r_e * c.r_e * r * r * (1.0 / r + r - theta.sin().powi(2)))
}

/// Total Compton cross section by quadrature over the solid angle.
pub fn compton_total(c: &Constants, k0: f64) -> Result<CrossSection> {
    compton_differential(c, k0, 0.0)?;
    let q = Integrator::new(1e-40, 1e-12);
    let integral = q.integrate_real(
        |mu: f64| compton_differential(c, k0, mu.clamp(-1.0, 1.0).acos()).unwrap(),
        -1.0,
        1.0,
    )?;
    Ok(CrossSection {
        process: Process::Compton,
        value: 2.0 * PI * integral,
        parameters: vec![("k0_eV", k0)],
        validity_note: "free electron at rest",
    })
}

/// σ = (16/3)√2 π r_e² α⁴ Z⁵/k^{3.5} with k the photon energy in units of
/// the electron rest energy.
pub fn photoelectric(c: &Constants, z: f64, k: f64) -> Result<CrossSection> {
    if !(k > 0.0) || !(z >= 1.0) {
        return domain("photoelectric needs k > 0 and Z >= 1");
    }
    let value = 16.0 / 3.0 * 2f64.sqrt() * PI * c.r_e * c.r_e * c.alpha.powi(4) * z.powi(5) / k.powf(3.5);
    Ok(CrossSection {
        process: Process::Photoelectric,
        value,
        parameters: vec![("Z", z), ("k_me", k)],
        validity_note: "k in electron rest-energy units; above the K edge, nonrelativistic",
    })
}

/// Photon energy (units of m_e) at which [`photoelectric`] equals `sigma`.
pub fn photoelectric_energy_for(c: &Constants, z: f64, sigma: f64) -> Result<f64> {
    let at_one = photoelectric(c, z, 1.0)?.value;
    if !(sigma > 0.0) {
        return domain("cross section must be positive");
    }
    Ok((at_one / sigma).powf(1.0 / 3.5))
}

/// Geometric strong-interaction cross section (ħc/m_π)².
pub fn strong_geometric(c: &Constants) -> CrossSection {
    let r = c.hbar_c / c.m_pi * 1e-15;
    CrossSection {
        process: Process::StrongGeometric,
        value: r * r,
        parameters: vec![("m_pi_MeV", c.m_pi)],
        validity_note: "hadron size set by the pion Compton wavelength",
    }
}

/// L = 1/(σ n).
pub fn mean_free_path(sigma: &CrossSection, medium: &Medium) -> Result<f64> {
    mean_free_path_raw(sigma.value, medium.number_density)
}

pub fn mean_free_path_raw(sigma: f64, density: f64) -> Result<f64> {
    if !(sigma > 0.0) || !(density > 0.0) {
        return domain("mean free path needs positive cross section and density");
    }
    Ok(1.0 / (sigma * density))
}

/// L = E/(dE/dx), with E in eV and dE/dx in eV/m.
pub fn energy_loss_length(energy: f64, dedx: f64) -> Result<f64> {
    if !(energy > 0.0 && dedx > 0.0) {
        return domain("energy and dE/dx must be positive");
    }
    Ok(energy / dedx)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PacketSize {
    /// √σ in m.
    pub width: f64,
    /// σ in m².
    pub sigma: f64,
    /// ħc/√σ in eV.
    pub momentum_width: f64,
}

/// √σ = L_mfp.
pub fn packet_size_from_mfp(c: &Constants, length: f64) -> Result<PacketSize> {
    if !(length > 0.0 && length.is_finite()) {
        return domain("length must be positive");
    }
    Ok(PacketSize {
        width: length,
        sigma: length * length,
        momentum_width: c.hbar_c_ev_m() / length,
    })
}

/// ω_P = (n e²/ε₀m_e)^{1/2} in rad/s.
pub fn plasma_frequency(c: &Constants, n_e: f64) -> Result<f64> {
    if !(n_e > 0.0) {
        return domain("density must be positive");
    }
    Ok((n_e * ELEMENTARY_CHARGE * ELEMENTARY_CHARGE / (c.eps0 * c.m_e_kg())).sqrt())
}

/// λ_D = (ε₀kT/(n e²))^{1/2} in m.
pub fn debye_length(c: &Constants, n_e: f64, t: f64) -> Result<f64> {
    if !(n_e > 0.0 && t > 0.0) {
        return domain("density and temperature must be positive");
    }
    Ok((c.eps0 * c.k_b * t / (n_e * ELEMENTARY_CHARGE * ELEMENTARY_CHARGE)).sqrt())
}

/// ω = (ω_P² + k²c²)^{1/2}; `k` in m⁻¹, frequencies in rad/s.
pub fn photon_dispersion(omega_p: f64, k: f64) -> f64 {
    omega_p.hypot(k * C_M_PER_S)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PhotonMode {
    /// Real wavenumber in m⁻¹.
    Propagating { wavenumber: f64 },
    /// Field decays over this length (m).
    Evanescent { decay_length: f64 },
}

/// Mode of a photon of frequency `omega` in a plasma with frequency `omega_p`.
pub fn photon_mode(omega_p: f64, omega: f64) -> PhotonMode {
    let k2 = (omega * omega - omega_p * omega_p) / (C_M_PER_S * C_M_PER_S);
    if k2 >= 0.0 {
        PhotonMode::Propagating { wavenumber: k2.sqrt() }
    } else {
        PhotonMode::Evanescent {
            decay_length: 1.0 / (-k2).sqrt(),
        }
    }
}
