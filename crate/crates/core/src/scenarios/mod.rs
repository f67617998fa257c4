//! Coherence-length estimates for particles in concrete environments.
//!
//! A scenario names a particle, a production stage, an energy, a medium and
//! the mechanism that limits coherence. Evaluating it yields a
//! [`ScenarioReport`] whose momentum width is ħc divided by the coherence
//! length. Documents in the [`format`] syntax bundle many scenarios together
//! with epoch reports (`[cmb]`) and neutrino arrival-lag estimates (`[lag]`);
//! any section may bind reference values from the [`ledger`].

pub mod format;
pub mod ledger;

use std::collections::HashMap;
use std::fmt;

use crate::constants::{Constants, C_M_PER_S};
use crate::error::{domain, validation, Error, Result};
use crate::interactions::{
    debye_length, energy_loss_length, mean_free_path_raw, plasma_frequency, rayleigh_ratio, rutherford,
    rutherford_thermal, strong_geometric, thomson, Medium, ThermalConvention, ThomsonVariant,
};
use crate::packets::{intermediate_size, Dispersion};
use crate::units::{fmt_sig, Dimension};
use format::{parse_document, Section, SectionKind};
pub use ledger::{Anchor, AnchorCheck, Observable, Tolerance, ANCHORS, LEDGER_VERSION};

/// The shipped table reproducing every reference value in the ledger.
pub const REFERENCE_TABLE: &str = include_str!("../../scenarios/paper_table.scen");

/// Representative sizes and scales that are quoted rather than derived.
pub mod catalog {
    /// Atom size in m.
    pub const ATOM_SIZE: f64 = 1e-10;
    /// Nucleus size in m.
    pub const NUCLEUS_SIZE: f64 = 1e-15;
    /// Conduction-electron coherence length in a cold metal, m.
    pub const METAL_ELECTRON_LENGTH: f64 = 1e-7;
    /// Range of solar-neutrino source sizes, m.
    pub const SOLAR_NEUTRINO_SOURCE: (f64, f64) = (1e-10, 1e-6);
    /// Supernova neutrino source sizes (core, surface), m.
    pub const SUPERNOVA_CORE: f64 = 1e-16;
    pub const SUPERNOVA_SURFACE: f64 = 1e-11;
    /// Hadronization energy scale band, MeV.
    pub const HADRONIZATION_SCALE_MEV: (f64, f64) = (500.0, 1000.0);
    /// Quark-jet energy width band, MeV.
    pub const JET_ENERGY_WIDTH_MEV: (f64, f64) = (200.0, 400.0);
    /// Radiation length of lead, g/cm².
    pub const X0_LEAD_G_CM2: f64 = 6.37;
}

macro_rules! tagged_enum {
    ($(#[$m:meta])* $name:ident { $($variant:ident => $tag:literal),* $(,)? }) => {
        $(#[$m])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
        pub enum $name { $($variant),* }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),*];

            pub fn tag(self) -> &'static str {
                match self { $($name::$variant => $tag),* }
            }

            pub fn from_tag(tag: &str) -> Option<Self> {
                match tag { $($tag => Some($name::$variant),)* _ => None }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.tag())
            }
        }
    };
}

tagged_enum!(Particle {
    Proton => "proton",
    Pion => "pion",
    Muon => "muon",
    Neutrino => "neutrino",
    Electron => "electron",
    Positron => "positron",
    Photon => "photon",
    Neutron => "neutron",
    QuarkJet => "quark_jet",
    Atom => "atom",
});

tagged_enum!(Stage {
    Initial => "initial",
    Final => "final",
    Natural => "natural",
});

tagged_enum!(Mechanism {
    Rutherford => "rutherford",
    EnergyLoss => "energy_loss",
    StrongGeometric => "strong_geometric",
    BoundState => "bound_state",
    CoulombGas => "coulomb_gas",
    ParentDecay => "parent_decay",
    DetectorUnit => "detector_unit",
    DecayLength => "decay_length",
});

impl Particle {
    /// Rest mass in MeV, where one is defined.
    pub fn mass(self, c: &Constants) -> Option<f64> {
        match self {
            Particle::Proton => Some(c.m_p),
            Particle::Pion => Some(c.m_pi),
            Particle::Muon => Some(c.m_mu),
            Particle::Electron | Particle::Positron => Some(c.m_e),
            Particle::Neutron => Some(c.m_n),
            Particle::Photon | Particle::Neutrino => Some(0.0),
            Particle::QuarkJet | Particle::Atom => None,
        }
    }
}

/// Whether `mechanism` can set the coherence length of `particle` at `stage`.
pub fn compatible(particle: Particle, stage: Stage, mechanism: Mechanism) -> bool {
    use Mechanism as M;
    use Particle as P;
    match mechanism {
        M::Rutherford => {
            stage == Stage::Initial && matches!(particle, P::Proton | P::Electron | P::Positron | P::Pion | P::Muon)
        }
        M::EnergyLoss => {
            stage == Stage::Initial && matches!(particle, P::Proton | P::Pion | P::Muon | P::Electron | P::Positron)
        }
        M::StrongGeometric => stage == Stage::Initial && matches!(particle, P::Proton | P::Pion | P::Neutron),
        M::BoundState => stage != Stage::Initial || matches!(particle, P::Electron | P::Atom | P::Proton),
        M::CoulombGas => stage == Stage::Initial && matches!(particle, P::Proton | P::Electron | P::Positron),
        M::ParentDecay => {
            stage == Stage::Initial
                && matches!(particle, P::Pion | P::Muon | P::Neutrino | P::Electron | P::Positron | P::Proton | P::Photon)
        }
        M::DetectorUnit => stage == Stage::Final,
        M::DecayLength => stage == Stage::Natural && matches!(particle, P::Pion | P::Muon | P::Neutron),
    }
}

/// One step of the formula chain behind a report.
#[derive(Debug, Clone, PartialEq)]
pub struct Step {
    pub formula: &'static str,
    pub inputs: Vec<(&'static str, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioReport {
    pub name: String,
    /// √σ in m.
    pub coherence_length: f64,
    /// σ in m².
    pub packet_sigma: f64,
    /// ħc/√σ in eV.
    pub momentum_width: f64,
    /// ħc in eV·m used for the momentum width.
    pub hbar_c: f64,
    pub provenance: Vec<Step>,
}

impl ScenarioReport {
    pub fn from_length(name: &str, c: &Constants, length: f64, provenance: Vec<Step>) -> Result<Self> {
        if !(length > 0.0 && length.is_finite()) {
            return domain(format!("{name}: coherence length must be positive and finite, got {length}"));
        }
        let hbar_c = c.hbar_c_ev_m();
        Ok(ScenarioReport {
            name: name.to_string(),
            coherence_length: length,
            packet_sigma: length * length,
            momentum_width: hbar_c / length,
            hbar_c,
            provenance,
        })
    }
}

fn step(formula: &'static str, inputs: &[(&'static str, f64)]) -> Step {
    Step {
        formula,
        inputs: inputs.to_vec(),
    }
}

/// Coulomb-gas correlation length a_B·m_e/m for a particle of mass `mass` (MeV).
pub fn coulomb_gas_length(c: &Constants, bohr_radius: f64, mass: f64) -> Result<f64> {
    if !(mass > 0.0 && bohr_radius > 0.0) {
        return domain("Coulomb gas needs positive mass and Bohr radius");
    }
    Ok(bohr_radius * c.m_e / mass)
}

/// Proton correlation length in a beam bunch, a_B·m_e/m_p.
pub fn bunch_coherence(c: &Constants) -> ScenarioReport {
    let a = c.a_bohr * c.m_e / c.m_p;
    ScenarioReport::from_length(
        "bunch_coherence",
        c,
        a,
        vec![step("a_B m_e / m", &[("a_B_m", c.a_bohr), ("m_e_MeV", c.m_e), ("m_MeV", c.m_p)])],
    )
    .expect("positive constants")
}

/// Child length (v_child/v_parent)·L_parent; velocities in units of c.
pub fn parent_child_length(parent: &ScenarioReport, v_parent: f64, v_child: f64) -> Result<ScenarioReport> {
    let length = intermediate_size(parent.coherence_length, v_parent, v_child)?;
    let mut provenance = parent.provenance.clone();
    provenance.push(step(
        "L_parent v_child / v_parent",
        &[("L_parent_m", parent.coherence_length), ("v_parent", v_parent), ("v_child", v_child)],
    ));
    if !(length > 0.0 && length.is_finite()) {
        return domain("parent coherence length must be positive");
    }
    Ok(ScenarioReport {
        name: format!("{}>child", parent.name),
        coherence_length: length,
        packet_sigma: length * length,
        momentum_width: parent.hbar_c / length,
        hbar_c: parent.hbar_c,
        provenance,
    })
}

/// Decay length c·τ₀·E/m in m; `energy` and `mass` in the same unit.
pub fn decay_coherence_length(tau0: f64, energy: f64, mass: f64) -> Result<f64> {
    if !(tau0 > 0.0 && mass > 0.0 && energy >= mass) {
        return domain("decay length needs tau0 > 0 and E >= m > 0");
    }
    Ok(C_M_PER_S * tau0 * energy / mass)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NeutrinoLag {
    /// 1 − v/c = ½(m/E)².
    pub epsilon: f64,
    /// Distance by which the neutrino trails light over the baseline, m.
    pub delta_l: f64,
}

/// Arrival lag of a light neutrino behind a photon over `baseline` (m).
pub fn neutrino_arrival_lag(energy: f64, mass: f64, baseline: f64) -> Result<NeutrinoLag> {
    if !(energy > 0.0 && mass >= 0.0 && mass < energy && baseline >= 0.0) {
        return domain("lag needs E > m >= 0 and a non-negative baseline");
    }
    let epsilon = 0.5 * (mass / energy).powi(2);
    Ok(NeutrinoLag {
        epsilon,
        delta_l: baseline * epsilon,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DetectorProcess {
    /// Inner-shell electron of an atom with charge `z`: a_B/Z.
    InnerCore { z: f64 },
    Nucleus,
    Atom,
    /// Hydrogen-like exciton: a_B·ε/(m*/m₀).
    Semiconductor { mass_ratio: f64, permittivity: f64 },
    /// ħc/scale, with the scale in eV.
    Hadronization { scale: f64 },
}

impl DetectorProcess {
    pub const TAGS: &'static [&'static str] = &["inner_core", "nucleus", "atom", "semiconductor", "hadronization"];

    /// Builds a process from its tag; parameters not used by the tag are ignored.
    pub fn from_tag(tag: &str, z: Option<f64>, mass_ratio: Option<f64>, permittivity: Option<f64>, scale: Option<f64>) -> Result<Self> {
        let need = |v: Option<f64>, what: &str| v.ok_or_else(|| Error::Domain(format!("process `{tag}` needs `{what}`")));
        Ok(match tag {
            "inner_core" => DetectorProcess::InnerCore { z: need(z, "z")? },
            "nucleus" => DetectorProcess::Nucleus,
            "atom" => DetectorProcess::Atom,
            "semiconductor" => DetectorProcess::Semiconductor {
                mass_ratio: need(mass_ratio, "m_eff")?,
                permittivity: need(permittivity, "eps")?,
            },
            "hadronization" => DetectorProcess::Hadronization {
                scale: scale.unwrap_or(catalog::HADRONIZATION_SCALE_MEV.0 * 1e6),
            },
            other => return domain(format!("unknown detector process `{other}`; expected one of {:?}", Self::TAGS)),
        })
    }
}

/// Size of the final-state packet set by the detecting unit.
pub fn detector_packet_size(c: &Constants, process: DetectorProcess) -> Result<ScenarioReport> {
    let (length, s) = match process {
        DetectorProcess::InnerCore { z } => {
            if !(z >= 1.0) {
                return domain("inner core needs Z >= 1");
            }
            (c.a_bohr / z, step("a_B / Z", &[("a_B_m", c.a_bohr), ("Z", z)]))
        }
        DetectorProcess::Nucleus => (catalog::NUCLEUS_SIZE, step("nucleus size", &[])),
        DetectorProcess::Atom => (catalog::ATOM_SIZE, step("atom size", &[])),
        DetectorProcess::Semiconductor {
            mass_ratio,
            permittivity,
        } => {
            if !(mass_ratio > 0.0 && permittivity > 0.0) {
                return domain("semiconductor needs positive m*/m0 and permittivity");
            }
            (
                c.a_bohr * permittivity / mass_ratio,
                step("a_B eps / (m*/m0)", &[("a_B_m", c.a_bohr), ("eps", permittivity), ("m_ratio", mass_ratio)]),
            )
        }
        DetectorProcess::Hadronization { scale } => {
            if !(scale > 0.0) {
                return domain("hadronization scale must be positive");
            }
            (c.hbar_c_ev_m() / scale, step("hbar c / scale", &[("scale_eV", scale)]))
        }
    };
    ScenarioReport::from_length("detector_unit", c, length, vec![s])
}

/// Inputs of the decoupling-epoch report.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CmbInputs {
    /// K.
    pub temperature: f64,
    /// Proton (= electron) number density, m⁻³.
    pub proton_density: f64,
    pub photon_baryon_ratio: f64,
    pub log_lambda: f64,
    /// Hydrogen-hydrogen cross section, m².
    pub hydrogen_sigma: f64,
    /// Wavelengths entering the Rayleigh scaling factor, m.
    pub line_wavelength: f64,
    pub reference_wavelength: f64,
    pub convention: ThermalConvention,
}

impl Default for CmbInputs {
    fn default() -> Self {
        CmbInputs {
            temperature: 3000.0,
            proton_density: 4e17,
            photon_baryon_ratio: 1e9,
            log_lambda: 10.0,
            hydrogen_sigma: 1e-20,
            line_wavelength: 1215e-9,
            reference_wavelength: 3000e-9,
            convention: ThermalConvention::ThreeKT,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CmbLine {
    pub id: &'static str,
    pub value: f64,
    pub unit: &'static str,
    /// The line is a mean free path, hence a coherence length.
    pub mean_free_path: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CmbReport {
    pub inputs: CmbInputs,
    pub lines: Vec<CmbLine>,
}

impl CmbReport {
    pub fn get(&self, id: &str) -> Option<f64> {
        self.lines.iter().find(|l| l.id == id).map(|l| l.value)
    }
}

/// Cross sections, mean free paths and plasma scales around decoupling.
pub fn cmb_epoch_report(c: &Constants, inputs: &CmbInputs) -> Result<CmbReport> {
    let n = inputs.proton_density;
    if !(inputs.photon_baryon_ratio > 0.0 && inputs.log_lambda > 0.0 && inputs.hydrogen_sigma > 0.0) {
        return domain("epoch report needs positive ratio, log Lambda and hydrogen cross section");
    }
    let sigma_unit = rutherford_thermal(c, inputs.temperature, 1.0, inputs.convention)?.value;
    let sigma_ru = sigma_unit * inputs.log_lambda;
    let sigma_th = thomson(c, ThomsonVariant::Standard).value;
    let factor = rayleigh_ratio(inputs.reference_wavelength, inputs.line_wavelength)?;
    let line = |id, value, unit, mean_free_path| CmbLine {
        id,
        value,
        unit,
        mean_free_path,
    };
    let lines = vec![
        line("sigma_ru_per_loglambda", sigma_unit, "m2", false),
        line("sigma_ru", sigma_ru, "m2", false),
        line("sigma_th", sigma_th, "m2", false),
        line("l_e_ru", mean_free_path_raw(sigma_ru, n)?, "m", true),
        line("l_e_th", mean_free_path_raw(sigma_th, n * inputs.photon_baryon_ratio)?, "m", true),
        line("l_photon_th", mean_free_path_raw(sigma_th, n)?, "m", true),
        line("rayleigh_factor", factor, "", false),
        line("l_photon_rayleigh", mean_free_path_raw(factor * sigma_th, n)?, "m", true),
        line("l_h", mean_free_path_raw(inputs.hydrogen_sigma, n)?, "m", true),
        line("omega_p", plasma_frequency(c, n)?, "rad/s", false),
        line("debye_length", debye_length(c, n, inputs.temperature)?, "m", false),
    ];
    Ok(CmbReport {
        inputs: *inputs,
        lines,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Charge {
    Factor(f64),
    /// Charge factor fixed so that L(energy) = length.
    Calibrated { energy: f64, length: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Velocities {
    Given { parent: f64, child: f64 },
    /// Momenta and masses in eV.
    FromMomenta { p_parent: f64, m_parent: f64, p_child: f64, m_child: f64 },
}

impl Velocities {
    pub fn resolve(self) -> (f64, f64) {
        match self {
            Velocities::Given { parent, child } => (parent, child),
            Velocities::FromMomenta {
                p_parent,
                m_parent,
                p_child,
                m_child,
            } => (
                Dispersion::Relativistic.speed(p_parent, m_parent),
                Dispersion::Relativistic.speed(p_child, m_child),
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum MechanismSpec {
    Rutherford { log_lambda: f64, charge: Charge },
    EnergyLoss,
    StrongGeometric { cross_section: Option<f64> },
    BoundState { size: f64 },
    /// Mass in MeV.
    CoulombGas { mass: Option<f64>, bohr_radius: Option<f64> },
    ParentDecay { parent: String, velocities: Velocities },
    DetectorUnit(DetectorProcess),
    /// Proper lifetime in s and mass in MeV.
    DecayLength { tau0: f64, mass: Option<f64> },
}

impl MechanismSpec {
    pub fn mechanism(&self) -> Mechanism {
        match self {
            MechanismSpec::Rutherford { .. } => Mechanism::Rutherford,
            MechanismSpec::EnergyLoss => Mechanism::EnergyLoss,
            MechanismSpec::StrongGeometric { .. } => Mechanism::StrongGeometric,
            MechanismSpec::BoundState { .. } => Mechanism::BoundState,
            MechanismSpec::CoulombGas { .. } => Mechanism::CoulombGas,
            MechanismSpec::ParentDecay { .. } => Mechanism::ParentDecay,
            MechanismSpec::DetectorUnit(_) => Mechanism::DetectorUnit,
            MechanismSpec::DecayLength { .. } => Mechanism::DecayLength,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub particle: Particle,
    pub stage: Stage,
    /// eV.
    pub energy: Option<f64>,
    pub medium: Option<Medium>,
    pub spec: MechanismSpec,
    pub anchors: Vec<Anchor>,
    pub ratio_to: Option<String>,
    /// Overrides ħc (MeV·fm) for this scenario only.
    pub hbar_c: Option<f64>,
}

impl Scenario {
    fn parent(&self) -> Option<&str> {
        match &self.spec {
            MechanismSpec::ParentDecay { parent, .. } => Some(parent),
            _ => None,
        }
    }

    fn need_energy(&self) -> Result<f64> {
        self.energy
            .ok_or_else(|| Error::Validation {
                field: "energy".into(),
                message: format!("scenario `{}` needs an energy", self.name),
            })
    }

    fn need_medium(&self) -> Result<&Medium> {
        self.medium.as_ref().ok_or_else(|| Error::Validation {
            field: "medium".into(),
            message: format!("scenario `{}` needs a medium", self.name),
        })
    }

    fn need_mass(&self, c: &Constants, explicit: Option<f64>) -> Result<f64> {
        match explicit.or_else(|| self.particle.mass(c)) {
            Some(m) if m > 0.0 => Ok(m),
            _ => validation("mass", format!("scenario `{}` needs a positive mass", self.name)),
        }
    }

    /// Evaluates the scenario; `parent` is the report of the parent scenario
    /// for `parent_decay`.
    pub fn evaluate(&self, constants: &Constants, parent: Option<&ScenarioReport>) -> Result<ScenarioReport> {
        let mut c = *constants;
        if let Some(h) = self.hbar_c {
            c.hbar_c = h;
        }
        let c = &c;
        let mut report = match &self.spec {
            MechanismSpec::Rutherford { log_lambda, charge } => {
                let e = self.need_energy()?;
                let n = self.need_medium()?.number_density;
                let z = match *charge {
                    Charge::Factor(z) => z,
                    Charge::Calibrated { energy, length } => {
                        let unit = rutherford(c, energy, *log_lambda, 1.0)?.value;
                        if !(unit > 0.0 && length > 0.0) {
                            return domain("calibration needs log Lambda > 0 and a positive length");
                        }
                        (1.0 / (length * n * unit)).sqrt()
                    }
                };
                let sigma = rutherford(c, e, *log_lambda, z)?;
                let l = mean_free_path_raw(sigma.value, n)?;
                let s = step(
                    "1 / (4 pi (z alpha hbar c / 2T)^2 logLambda n)",
                    &[("T_eV", e), ("logLambda", *log_lambda), ("charge_factor", z), ("n_m3", n)],
                );
                ScenarioReport::from_length(&self.name, c, l, vec![s])?
            }
            MechanismSpec::EnergyLoss => {
                let e = self.need_energy()?;
                let medium = self.need_medium()?;
                let dedx = medium.dedx.ok_or_else(|| Error::Validation {
                    field: "dEdx".into(),
                    message: format!("medium `{}` has no dEdx", medium.label),
                })?;
                let l = energy_loss_length(e, dedx)?;
                ScenarioReport::from_length(&self.name, c, l, vec![step("E / (dE/dx)", &[("E_eV", e), ("dEdx_eV_m", dedx)])])?
            }
            MechanismSpec::StrongGeometric { cross_section } => {
                let n = self.need_medium()?.number_density;
                let sigma = cross_section.unwrap_or_else(|| strong_geometric(c).value);
                let l = mean_free_path_raw(sigma, n)?;
                ScenarioReport::from_length(&self.name, c, l, vec![step("1 / (sigma n)", &[("sigma_m2", sigma), ("n_m3", n)])])?
            }
            MechanismSpec::BoundState { size } => {
                ScenarioReport::from_length(&self.name, c, *size, vec![step("bound-state size", &[("size_m", *size)])])?
            }
            MechanismSpec::CoulombGas { mass, bohr_radius } => {
                let m = self.need_mass(c, *mass)?;
                let a = bohr_radius.unwrap_or(c.a_bohr);
                let l = coulomb_gas_length(c, a, m)?;
                let s = step("a_B m_e / m", &[("a_B_m", a), ("m_e_MeV", c.m_e), ("m_MeV", m)]);
                ScenarioReport::from_length(&self.name, c, l, vec![s])?
            }
            MechanismSpec::ParentDecay { parent: name, velocities } => {
                let parent = parent.ok_or_else(|| Error::Validation {
                    field: "parent".into(),
                    message: format!("parent `{name}` was not evaluated"),
                })?;
                let (vp, vc) = velocities.resolve();
                parent_child_length(parent, vp, vc)?
            }
            MechanismSpec::DetectorUnit(process) => detector_packet_size(c, *process)?,
            MechanismSpec::DecayLength { tau0, mass } => {
                let m = self.need_mass(c, *mass)? * 1e6;
                let e = self.energy.unwrap_or(m);
                let l = decay_coherence_length(*tau0, e, m)?;
                let s = step("c tau0 E / m", &[("tau0_s", *tau0), ("E_eV", e), ("m_eV", m)]);
                ScenarioReport::from_length(&self.name, c, l, vec![s])?
            }
        };
        report.name = self.name.clone();
        Ok(report)
    }
}

/// A parsed document section ready for evaluation.
#[derive(Debug, Clone, PartialEq)]
pub enum Item {
    Scenario(Scenario),
    Cmb { name: String, inputs: CmbInputs, anchors: Vec<Anchor> },
    Lag { name: String, energy: f64, mass: f64, baseline: f64, anchors: Vec<Anchor> },
}

impl Item {
    pub fn name(&self) -> &str {
        match self {
            Item::Scenario(s) => &s.name,
            Item::Cmb { name, .. } | Item::Lag { name, .. } => name,
        }
    }
}

const COMMON_KEYS: &[&str] = &[
    "particle", "stage", "energy", "medium", "mechanism", "anchor", "ratio_to", "hbar_c_MeV_fm", "note",
];

fn mechanism_keys(m: Mechanism) -> &'static [&'static str] {
    match m {
        Mechanism::Rutherford => &["log_lambda", "charge_factor", "reference_energy", "reference_length"],
        Mechanism::EnergyLoss => &[],
        Mechanism::StrongGeometric => &["cross_section"],
        Mechanism::BoundState => &["size"],
        Mechanism::CoulombGas => &["mass", "bohr_radius"],
        Mechanism::ParentDecay => &["parent", "v_parent", "v_child", "p_parent", "m_parent", "p_child", "m_child"],
        Mechanism::DetectorUnit => &["process", "z", "m_eff", "eps", "scale"],
        Mechanism::DecayLength => &["tau0", "mass"],
    }
}

fn tag_field<T>(section: &Section, key: &str, from: impl Fn(&str) -> Option<T>, all: &[&str]) -> Result<T> {
    let entry = section.require(key)?;
    from(entry.value.as_str()).ok_or_else(|| Error::Validation {
        field: key.to_string(),
        message: format!("line {}: unknown {key} `{}`; expected one of {all:?}", entry.line, entry.value),
    })
}

fn anchors_of(section: &Section, allowed: impl Fn(Observable) -> bool) -> Result<Vec<Anchor>> {
    let Some(entry) = section.get("anchor") else {
        return Ok(Vec::new());
    };
    entry
        .list()
        .into_iter()
        .map(|id| {
            let a = ledger::find(id).ok_or_else(|| entry.error(format!("unknown anchor `{id}`")))?;
            if !allowed(a.observable) {
                return Err(entry.error(format!("anchor `{id}` does not apply to a `{}` section", section.name)));
            }
            Ok(a)
        })
        .collect()
}

fn parse_medium(section: &Section) -> Result<Medium> {
    section.check_keys(&["density", "temperature", "dEdx", "note"])?;
    let density = section.require("density")?.quantity(Dimension::NumberDensity)?;
    let mut medium = Medium::new(&section.name, density).map_err(|e| section.require("density").unwrap().error(e.to_string()))?;
    medium.temperature = section.quantity("temperature", Dimension::Temperature)?;
    medium.dedx = section.quantity("dEdx", Dimension::EnergyPerLength)?;
    Ok(medium)
}

fn parse_scenario(section: &Section, media: &HashMap<String, Medium>) -> Result<Scenario> {
    let particle = tag_field(section, "particle", Particle::from_tag, &Particle::ALL.iter().map(|p| p.tag()).collect::<Vec<_>>())?;
    let stage = tag_field(section, "stage", Stage::from_tag, &Stage::ALL.iter().map(|p| p.tag()).collect::<Vec<_>>())?;
    let mechanism = tag_field(section, "mechanism", Mechanism::from_tag, &Mechanism::ALL.iter().map(|p| p.tag()).collect::<Vec<_>>())?;
    let allowed: Vec<&str> = COMMON_KEYS.iter().chain(mechanism_keys(mechanism)).copied().collect();
    section.check_keys(&allowed)?;
    if !compatible(particle, stage, mechanism) {
        return validation(
            "mechanism",
            format!("`{mechanism}` cannot set the coherence length of a {stage} {particle} (scenario `{}`)", section.name),
        );
    }
    let energy = section.quantity("energy", Dimension::Energy)?;
    let medium = match section.get("medium") {
        Some(e) => Some(media.get(&e.value).cloned().ok_or_else(|| e.error(format!("unknown medium `{}`", e.value)))?),
        None => None,
    };
    let length = |key| -> Result<f64> { section.require(key)?.quantity(Dimension::Length) };
    let energy_of = |key| -> Result<f64> { section.require(key)?.quantity(Dimension::Energy) };
    let spec = match mechanism {
        Mechanism::Rutherford => {
            let log_lambda = section.number("log_lambda")?.unwrap_or(10.0);
            let charge = match (section.get("reference_energy"), section.get("reference_length")) {
                (Some(_), Some(_)) => {
                    if section.get("charge_factor").is_some() {
                        return Err(section.require("charge_factor")?.error("give either charge_factor or a calibration point"));
                    }
                    Charge::Calibrated {
                        energy: energy_of("reference_energy")?,
                        length: length("reference_length")?,
                    }
                }
                (None, None) => Charge::Factor(section.number("charge_factor")?.unwrap_or(1.0)),
                _ => {
                    return Err(Error::Parse {
                        line: section.line,
                        field: "reference_length".into(),
                        message: "calibration needs both reference_energy and reference_length".into(),
                    })
                }
            };
            MechanismSpec::Rutherford { log_lambda, charge }
        }
        Mechanism::EnergyLoss => MechanismSpec::EnergyLoss,
        Mechanism::StrongGeometric => MechanismSpec::StrongGeometric {
            cross_section: section.quantity("cross_section", Dimension::Area)?,
        },
        Mechanism::BoundState => MechanismSpec::BoundState { size: length("size")? },
        Mechanism::CoulombGas => MechanismSpec::CoulombGas {
            mass: section.quantity("mass", Dimension::Energy)?.map(|m| m * 1e-6),
            bohr_radius: section.quantity("bohr_radius", Dimension::Length)?,
        },
        Mechanism::ParentDecay => {
            let parent = section.require("parent")?.value.clone();
            let velocities = if section.get("v_parent").is_some() || section.get("v_child").is_some() {
                Velocities::Given {
                    parent: section.require("v_parent")?.quantity(Dimension::Velocity)?,
                    child: section.require("v_child")?.quantity(Dimension::Velocity)?,
                }
            } else {
                Velocities::FromMomenta {
                    p_parent: energy_of("p_parent")?,
                    m_parent: energy_of("m_parent")?,
                    p_child: energy_of("p_child")?,
                    m_child: energy_of("m_child")?,
                }
            };
            MechanismSpec::ParentDecay { parent, velocities }
        }
        Mechanism::DetectorUnit => {
            let entry = section.require("process")?;
            let process = DetectorProcess::from_tag(
                &entry.value,
                section.number("z")?,
                section.number("m_eff")?,
                section.number("eps")?,
                section.quantity("scale", Dimension::Energy)?,
            )
            .map_err(|e| entry.error(e.to_string()))?;
            MechanismSpec::DetectorUnit(process)
        }
        Mechanism::DecayLength => MechanismSpec::DecayLength {
            tau0: section.require("tau0")?.quantity(Dimension::Time)?,
            mass: section.quantity("mass", Dimension::Energy)?.map(|m| m * 1e-6),
        },
    };
    let ratio_to = section.get("ratio_to").map(|e| e.value.clone());
    let anchors = anchors_of(section, |o| {
        matches!(o, Observable::CoherenceLength | Observable::MomentumWidth)
            || (o == Observable::LengthRatio && ratio_to.is_some())
    })?;
    Ok(Scenario {
        name: section.name.clone(),
        particle,
        stage,
        energy,
        medium,
        spec,
        anchors,
        ratio_to,
        hbar_c: section.number("hbar_c_MeV_fm")?,
    })
}

fn parse_cmb(section: &Section) -> Result<Item> {
    section.check_keys(&[
        "temperature", "density", "photon_ratio", "log_lambda", "hydrogen_sigma", "line_wavelength",
        "reference_wavelength", "thermal", "anchor", "note",
    ])?;
    let d = CmbInputs::default();
    let convention = match section.get("thermal").map(|e| (e, e.value.as_str())) {
        None | Some((_, "3kT")) => ThermalConvention::ThreeKT,
        Some((_, "kT")) => ThermalConvention::KT,
        Some((e, other)) => return Err(e.error(format!("unknown thermal convention `{other}`; expected 3kT or kT"))),
    };
    let inputs = CmbInputs {
        temperature: section.quantity("temperature", Dimension::Temperature)?.unwrap_or(d.temperature),
        proton_density: section.quantity("density", Dimension::NumberDensity)?.unwrap_or(d.proton_density),
        photon_baryon_ratio: section.number("photon_ratio")?.unwrap_or(d.photon_baryon_ratio),
        log_lambda: section.number("log_lambda")?.unwrap_or(d.log_lambda),
        hydrogen_sigma: section.quantity("hydrogen_sigma", Dimension::Area)?.unwrap_or(d.hydrogen_sigma),
        line_wavelength: section.quantity("line_wavelength", Dimension::Length)?.unwrap_or(d.line_wavelength),
        reference_wavelength: section
            .quantity("reference_wavelength", Dimension::Length)?
            .unwrap_or(d.reference_wavelength),
        convention,
    };
    Ok(Item::Cmb {
        name: section.name.clone(),
        inputs,
        anchors: anchors_of(section, |o| matches!(o, Observable::Cmb(_)))?,
    })
}

fn parse_lag(section: &Section) -> Result<Item> {
    section.check_keys(&["energy", "mass", "baseline", "anchor", "note"])?;
    Ok(Item::Lag {
        name: section.name.clone(),
        energy: section.require("energy")?.quantity(Dimension::Energy)?,
        mass: section.require("mass")?.quantity(Dimension::Energy)?,
        baseline: section.require("baseline")?.quantity(Dimension::Length)?,
        anchors: anchors_of(section, |o| matches!(o, Observable::LagEpsilon | Observable::LagDistance))?,
    })
}

/// Parses a scenario document into evaluable items, in document order.
pub fn parse_items(text: &str) -> Result<Vec<Item>> {
    let sections = parse_document(text)?;
    let mut media = HashMap::new();
    for s in sections.iter().filter(|s| s.kind == SectionKind::Medium) {
        media.insert(s.name.clone(), parse_medium(s)?);
    }
    let mut items = Vec::new();
    for s in &sections {
        match s.kind {
            SectionKind::Medium => {}
            SectionKind::Scenario => items.push(Item::Scenario(parse_scenario(s, &media)?)),
            SectionKind::Cmb => items.push(parse_cmb(s)?),
            SectionKind::Lag => items.push(parse_lag(s)?),
        }
    }
    let names: HashMap<&str, &Scenario> = items
        .iter()
        .filter_map(|i| match i {
            Item::Scenario(s) => Some((s.name.as_str(), s)),
            _ => None,
        })
        .collect();
    for item in &items {
        if let Item::Scenario(s) = item {
            for (field, target) in [("parent", s.parent()), ("ratio_to", s.ratio_to.as_deref())] {
                if let Some(t) = target {
                    if !names.contains_key(t) {
                        return validation(field, format!("scenario `{}` refers to unknown scenario `{t}`", s.name));
                    }
                }
            }
        }
    }
    Ok(items)
}

/// One output line: a scenario, an epoch-report line or a lag estimate,
/// optionally compared with a reference value.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub scenario: String,
    pub report: Option<ScenarioReport>,
    /// The number compared with the reference value (or the natural output
    /// of the row when there is none).
    pub computed: f64,
    pub check: Option<AnchorCheck>,
}

impl Row {
    /// True unless a non-flagged reference comparison failed.
    pub fn acceptable(&self) -> bool {
        match &self.check {
            Some(c) => c.pass || c.anchor.tolerance.is_flagged(),
            None => true,
        }
    }
}

#[cfg(feature = "parallel")]
fn map_ordered<T: Sync, U: Send>(items: &[T], f: impl Fn(&T) -> U + Sync + Send) -> Vec<U> {
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn map_ordered<T, U>(items: &[T], f: impl Fn(&T) -> U) -> Vec<U> {
    items.iter().map(f).collect()
}

/// Evaluates every scenario, parents before children. Independent
/// scenarios run in parallel when the `parallel` feature is on; the result
/// is in document order either way.
pub fn evaluate_scenarios(c: &Constants, scenarios: &[&Scenario]) -> Result<Vec<ScenarioReport>> {
    let index: HashMap<&str, usize> = scenarios.iter().enumerate().map(|(i, s)| (s.name.as_str(), i)).collect();
    let mut done: Vec<Option<ScenarioReport>> = vec![None; scenarios.len()];
    let mut pending: Vec<usize> = (0..scenarios.len()).collect();
    while !pending.is_empty() {
        let (ready, rest): (Vec<usize>, Vec<usize>) = pending.iter().partition(|&&i| match scenarios[i].parent() {
            None => true,
            Some(p) => index.get(p).is_some_and(|&j| done[j].is_some()),
        });
        if ready.is_empty() {
            return validation("parent", format!("scenario `{}` is part of a parent cycle", scenarios[rest[0]].name));
        }
        let results = map_ordered(&ready, |&i| {
            let parent = scenarios[i].parent().and_then(|p| done[index[p]].as_ref());
            scenarios[i].evaluate(c, parent)
        });
        for (i, r) in ready.into_iter().zip(results) {
            done[i] = Some(r?);
        }
        pending = rest;
    }
    Ok(done.into_iter().map(|r| r.expect("all evaluated")).collect())
}

fn rows_for(name: &str, report: Option<&ScenarioReport>, default: f64, checks: Vec<AnchorCheck>) -> Vec<Row> {
    if checks.is_empty() {
        return vec![Row {
            scenario: name.to_string(),
            report: report.cloned(),
            computed: default,
            check: None,
        }];
    }
    checks
        .into_iter()
        .map(|check| Row {
            scenario: name.to_string(),
            report: report.cloned(),
            computed: check.computed,
            check: Some(check),
        })
        .collect()
}

/// Parses and evaluates a scenario document.
pub fn run_scenario(c: &Constants, text: &str) -> Result<Vec<Row>> {
    let items = parse_items(text)?;
    let scenarios: Vec<&Scenario> = items
        .iter()
        .filter_map(|i| match i {
            Item::Scenario(s) => Some(s),
            _ => None,
        })
        .collect();
    let reports = evaluate_scenarios(c, &scenarios)?;
    let by_name: HashMap<&str, &ScenarioReport> = scenarios.iter().map(|s| s.name.as_str()).zip(reports.iter()).collect();

    let mut rows = Vec::new();
    for item in &items {
        match item {
            Item::Scenario(s) => {
                let report = by_name[s.name.as_str()];
                let checks = s
                    .anchors
                    .iter()
                    .map(|a| {
                        let computed = match a.observable {
                            Observable::MomentumWidth => report.momentum_width,
                            Observable::LengthRatio => {
                                let target = by_name[s.ratio_to.as_deref().expect("validated at parse")];
                                report.coherence_length / target.coherence_length
                            }
                            _ => report.coherence_length,
                        };
                        AnchorCheck::new(*a, computed)
                    })
                    .collect();
                rows.extend(rows_for(&s.name, Some(report), report.coherence_length, checks));
            }
            Item::Cmb { name, inputs, anchors } => {
                let cmb = cmb_epoch_report(c, inputs)?;
                for line in &cmb.lines {
                    let checks: Vec<AnchorCheck> = anchors
                        .iter()
                        .filter(|a| a.observable == Observable::Cmb(line.id))
                        .map(|a| AnchorCheck::new(*a, line.value))
                        .collect();
                    if checks.is_empty() && !line.mean_free_path {
                        continue;
                    }
                    let report = if line.mean_free_path {
                        Some(ScenarioReport::from_length(line.id, c, line.value, Vec::new())?)
                    } else {
                        None
                    };
                    rows.extend(rows_for(&format!("{name}.{}", line.id), report.as_ref(), line.value, checks));
                }
            }
            Item::Lag {
                name,
                energy,
                mass,
                baseline,
                anchors,
            } => {
                let lag = neutrino_arrival_lag(*energy, *mass, *baseline)?;
                let checks = anchors
                    .iter()
                    .map(|a| {
                        let v = if a.observable == Observable::LagEpsilon { lag.epsilon } else { lag.delta_l };
                        AnchorCheck::new(*a, v)
                    })
                    .collect();
                rows.extend(rows_for(name, None, lag.delta_l, checks));
            }
        }
    }
    Ok(rows)
}

/// Evaluates the shipped reference table.
pub fn ledger(c: &Constants) -> Result<Vec<Row>> {
    run_scenario(c, REFERENCE_TABLE)
}

pub const CSV_HEADER: &str =
    "scenario,coherence_length_m,sigma_m2,momentum_width_eV,anchor_id,paper_value,ratio,tolerance_class,pass";

fn opt(x: Option<f64>) -> String {
    x.map(fmt_sig).unwrap_or_default()
}

impl Row {
    /// CSV cells in [`CSV_HEADER`] order.
    pub fn cells(&self) -> Vec<String> {
        let r = self.report.as_ref();
        let mut cells = vec![
            self.scenario.clone(),
            opt(r.map(|r| r.coherence_length)),
            opt(r.map(|r| r.packet_sigma)),
            opt(r.map(|r| r.momentum_width)),
        ];
        match &self.check {
            Some(c) => cells.extend([
                c.anchor.id.to_string(),
                fmt_sig(c.anchor.reference_value),
                fmt_sig(c.ratio),
                c.anchor.tolerance.to_string(),
                c.pass.to_string(),
            ]),
            None => cells.extend(std::iter::repeat_n(String::new(), 5)),
        }
        cells
    }

    pub fn csv(&self) -> String {
        self.cells().join(",")
    }
}

/// Header plus one line per row, newline-terminated.
pub fn render_csv(rows: &[Row]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&r.csv());
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::CODATA;

    fn rel(a: f64, b: f64) -> f64 {
        (a / b - 1.0).abs()
    }

    fn row<'a>(rows: &'a [Row], anchor: &str) -> &'a Row {
        rows.iter()
            .find(|r| r.check.as_ref().is_some_and(|c| c.anchor.id == anchor))
            .unwrap_or_else(|| panic!("no row for {anchor}"))
    }

    #[test]
    fn bunch_values() {
        let r = bunch_coherence(&CODATA);
        assert!(rel(r.coherence_length, 2.89e-14) < 0.01);
        assert!(rel(r.momentum_width, 6.9e6) < 0.01);
        assert_eq!(coulomb_gas_length(&CODATA, CODATA.a_bohr, CODATA.m_e).unwrap(), CODATA.a_bohr);
    }

    #[test]
    fn parent_child() {
        let p = ScenarioReport::from_length("pion", &CODATA, 0.7, vec![]).unwrap();
        let same = parent_child_length(&p, 1.0, 1.0).unwrap();
        assert_eq!(same.coherence_length, 0.7);
        let a = parent_child_length(&p, 0.9, 0.6).unwrap();
        let b = parent_child_length(&a, 0.6, 0.3).unwrap();
        let direct = parent_child_length(&p, 0.9, 0.3).unwrap();
        assert!(rel(b.coherence_length, direct.coherence_length) < 1e-15);
        assert!(parent_child_length(&p, 0.0, 0.5).is_err());
        assert!(parent_child_length(&p, 0.5, 1.5).is_err());
    }

    #[test]
    fn decay_lengths() {
        assert_eq!(decay_coherence_length(2.0, 1.0, 1.0).unwrap(), 2.0 * C_M_PER_S);
        assert!(rel(decay_coherence_length(900.0, 1.0, 1.0).unwrap(), 2.7e11) < 0.01);
        assert!(decay_coherence_length(1.0, 0.5, 1.0).is_err());
    }

    #[test]
    fn neutrino_lag_values() {
        let lag = neutrino_arrival_lag(1e9, 0.1, 100.0).unwrap();
        assert!(rel(lag.epsilon, 5e-21) < 1e-12);
        assert!(rel(lag.delta_l, 5e-19) < 1e-12);
        assert_eq!(neutrino_arrival_lag(1e9, 0.0, 100.0).unwrap().delta_l, 0.0);
        assert!(neutrino_arrival_lag(1.0, 2.0, 1.0).is_err());
    }

    #[test]
    fn detector_catalog() {
        let ge = detector_packet_size(
            &CODATA,
            DetectorProcess::Semiconductor {
                mass_ratio: 0.08,
                permittivity: 16.0,
            },
        )
        .unwrap();
        assert!(rel(ge.coherence_length, 200.0 * CODATA.a_bohr) < 1e-12);
        let n = detector_packet_size(&CODATA, DetectorProcess::Nucleus).unwrap();
        assert_eq!(n.coherence_length, 1e-15);
        assert!(DetectorProcess::from_tag("quasar", None, None, None, None).is_err());
        assert!(DetectorProcess::from_tag("inner_core", None, None, None, None).is_err());
    }

    #[test]
    fn cmb_values() {
        let r = cmb_epoch_report(&CODATA, &CmbInputs::default()).unwrap();
        assert!(rel(r.get("l_e_ru").unwrap(), 5.7e-3) < 0.15);
        assert!(rel(r.get("l_photon_rayleigh").unwrap(), 1.39e12) < 0.01);
        assert!(rel(r.get("l_photon_th").unwrap() / 5e9, 7.5) < 0.02);
        assert!(rel(r.get("l_h").unwrap(), 250.0) < 1e-12);
        let again = cmb_epoch_report(&CODATA, &CmbInputs::default()).unwrap();
        assert_eq!(r, again);
    }

    #[test]
    fn compatibility_table() {
        assert!(compatible(Particle::Proton, Stage::Initial, Mechanism::Rutherford));
        assert!(!compatible(Particle::Photon, Stage::Initial, Mechanism::Rutherford));
        assert!(!compatible(Particle::Neutron, Stage::Initial, Mechanism::DecayLength));
        assert!(compatible(Particle::Neutrino, Stage::Final, Mechanism::DetectorUnit));
    }

    #[test]
    fn empty_document() {
        assert!(run_scenario(&CODATA, "# nothing here\n").unwrap().is_empty());
    }

    #[test]
    fn unknown_particle_names_field() {
        let doc = "[scenario x]\nparticle = tachyon\nstage = initial\nmechanism = bound_state\nsize = 1 m\n";
        match run_scenario(&CODATA, doc) {
            Err(Error::Validation { field, .. }) => assert_eq!(field, "particle"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn incompatible_mechanism_rejected() {
        let doc = "[scenario x]\nparticle = photon\nstage = initial\nmechanism = coulomb_gas\n";
        assert!(matches!(run_scenario(&CODATA, doc), Err(Error::Validation { .. })));
    }

    #[test]
    fn unknown_key_rejected() {
        let doc = "[scenario x]\nparticle = atom\nstage = natural\nmechanism = bound_state\nsize = 1 m\ncolour = red\n";
        match run_scenario(&CODATA, doc) {
            Err(Error::Parse { line, field, .. }) => {
                assert_eq!(line, 6);
                assert_eq!(field, "colour");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn parent_cycles_and_missing_parents() {
        let doc = "[scenario a]\nparticle = pion\nstage = initial\nmechanism = parent_decay\nparent = b\nv_parent = 1c\nv_child = 1c\n\
                   [scenario b]\nparticle = muon\nstage = initial\nmechanism = parent_decay\nparent = a\nv_parent = 1c\nv_child = 1c\n";
        assert!(run_scenario(&CODATA, doc).is_err());
        let doc = "[scenario a]\nparticle = pion\nstage = initial\nmechanism = parent_decay\nparent = z\nv_parent = 1c\nv_child = 1c\n";
        assert!(run_scenario(&CODATA, doc).is_err());
    }

    #[test]
    fn children_may_precede_parents() {
        let doc = "[scenario child]\nparticle = muon\nstage = initial\nmechanism = parent_decay\nparent = root\nv_parent = 1c\nv_child = 0.5c\n\
                   [scenario root]\nparticle = atom\nstage = natural\nmechanism = bound_state\nsize = 2 m\n";
        let rows = run_scenario(&CODATA, doc).unwrap();
        assert_eq!(rows[0].scenario, "child");
        assert_eq!(rows[0].report.as_ref().unwrap().coherence_length, 1.0);
    }

    #[test]
    fn reference_table_covers_every_anchor_once() {
        let rows = ledger(&CODATA).unwrap();
        for a in ANCHORS {
            let n = rows.iter().filter(|r| r.check.as_ref().is_some_and(|c| c.anchor.id == a.id)).count();
            assert_eq!(n, 1, "{}", a.id);
        }
    }

    #[test]
    fn reference_table_passes() {
        let rows = ledger(&CODATA).unwrap();
        let failing: Vec<String> = rows.iter().filter(|r| !r.acceptable()).map(Row::csv).collect();
        assert!(failing.is_empty(), "{failing:#?}");
        for id in ["muon_bunch", "neutron_decay_length", "cmb_l_photon_th", "cmb_l_e_th"] {
            assert!(!row(&rows, id).check.as_ref().unwrap().pass);
        }
    }

    #[test]
    fn momentum_width_times_length_is_hbar_c() {
        for r in ledger(&CODATA).unwrap() {
            if let Some(rep) = r.report {
                assert_eq!(rep.momentum_width, rep.hbar_c / rep.coherence_length);
                assert_eq!(rep.packet_sigma, rep.coherence_length * rep.coherence_length);
            }
        }
    }

    #[test]
    fn rutherford_ratios_exact() {
        let rows = ledger(&CODATA).unwrap();
        let l10 = row(&rows, "proton_rutherford_10MeV").report.as_ref().unwrap().coherence_length;
        let l50 = row(&rows, "proton_rutherford_50keV").report.as_ref().unwrap().coherence_length;
        let l1 = row(&rows, "proton_rutherford_1keV").report.as_ref().unwrap().coherence_length;
        assert!(rel(l50 / l10, 2.5e-5) < 1e-12);
        assert!(rel(l1 / l10, 1e-8) < 1e-12);
        assert!(rel(l10, 0.1) < 1e-12);
    }

    #[test]
    fn csv_is_deterministic_and_round_trips() {
        let a = render_csv(&ledger(&CODATA).unwrap());
        let b = render_csv(&ledger(&CODATA).unwrap());
        assert_eq!(a, b);
        let mut lines = a.lines();
        assert_eq!(lines.next(), Some(CSV_HEADER));
        for line in lines {
            let fields: Vec<&str> = line.split(',').collect();
            assert_eq!(fields.len(), 9, "{line}");
            for f in [1, 2, 3, 5, 6] {
                if !fields[f].is_empty() {
                    let x: f64 = fields[f].parse().unwrap();
                    assert_eq!(fmt_sig(x), fields[f]);
                }
            }
        }
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn reports_satisfy_hbar_c(l in 1e-20f64..1e15) {
                let r = ScenarioReport::from_length("x", &CODATA, l, vec![]).unwrap();
                prop_assert_eq!(r.momentum_width, r.hbar_c / r.coherence_length);
                prop_assert_eq!(r.packet_sigma, l * l);
            }

            #[test]
            fn parent_child_is_transitive(l in 1e-16f64..1e3, v1 in 0.01f64..1.0, v2 in 0.01f64..1.0, v3 in 0.01f64..1.0) {
                let root = ScenarioReport::from_length("p", &CODATA, l, vec![]).unwrap();
                let chained = parent_child_length(&parent_child_length(&root, v1, v2).unwrap(), v2, v3).unwrap();
                let direct = parent_child_length(&root, v1, v3).unwrap();
                prop_assert!(rel(chained.coherence_length, direct.coherence_length) <= 1e-12);
                prop_assert_eq!(chained.momentum_width, chained.hbar_c / chained.coherence_length);
            }

            #[test]
            fn epoch_report_is_pure(t in 1e3f64..1e4, n in 1e15f64..1e20, ratio in 1e8f64..1e10) {
                let inputs = CmbInputs { temperature: t, proton_density: n, photon_baryon_ratio: ratio, ..CmbInputs::default() };
                let a = cmb_epoch_report(&CODATA, &inputs).unwrap();
                let b = cmb_epoch_report(&CODATA, &inputs).unwrap();
                prop_assert_eq!(format!("{a:?}"), format!("{b:?}"));
            }
        }
    }
}
