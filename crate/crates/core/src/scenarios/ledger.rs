//! Reference values for the shipped scenario table and their tolerances.

use std::fmt;

pub const LEDGER_VERSION: &str = "1";

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Tolerance {
    /// Relative error at most 1e-12.
    ExactRatio,
    /// Relative error at most the given fraction.
    Relative(f64),
    /// Within the given multiplicative factor either way.
    Factor(f64),
    /// Within one decade.
    OrderOfMagnitude,
    /// Known to disagree with the computation; never passes.
    Flagged,
}

impl Tolerance {
    pub fn accepts(self, ratio: f64) -> bool {
        if !(ratio.is_finite() && ratio > 0.0) {
            return false;
        }
        match self {
            Tolerance::ExactRatio => (ratio - 1.0).abs() <= 1e-12,
            Tolerance::Relative(t) => (ratio - 1.0).abs() <= t,
            Tolerance::Factor(f) => ratio <= f && ratio >= 1.0 / f,
            Tolerance::OrderOfMagnitude => ratio.log10().abs() <= 1.0,
            Tolerance::Flagged => false,
        }
    }

    pub fn is_flagged(self) -> bool {
        self == Tolerance::Flagged
    }
}

impl fmt::Display for Tolerance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tolerance::ExactRatio => write!(f, "EXACT-RATIO"),
            Tolerance::Relative(t) => write!(f, "{}%", (t * 1e4).round() / 1e2),
            Tolerance::Factor(k) => write!(f, "FACTOR-{k}"),
            Tolerance::OrderOfMagnitude => write!(f, "ORDER-OF-MAGNITUDE"),
            Tolerance::Flagged => write!(f, "FLAGGED-INCONSISTENT"),
        }
    }
}

/// Which computed number an anchor is compared against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Observable {
    CoherenceLength,
    MomentumWidth,
    /// Coherence length divided by that of the `ratio_to` scenario.
    LengthRatio,
    /// A named line of an epoch report.
    Cmb(&'static str),
    LagEpsilon,
    LagDistance,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Anchor {
    pub id: &'static str,
    pub description: &'static str,
    pub reference_value: f64,
    pub tolerance: Tolerance,
    pub observable: Observable,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnchorCheck {
    pub anchor: Anchor,
    pub computed: f64,
    pub ratio: f64,
    pub pass: bool,
}

impl AnchorCheck {
    pub fn new(anchor: Anchor, computed: f64) -> Self {
        let ratio = computed / anchor.reference_value;
        AnchorCheck {
            anchor,
            computed,
            ratio,
            pass: anchor.tolerance.accepts(ratio),
        }
    }
}

const fn anchor(
    id: &'static str,
    description: &'static str,
    reference_value: f64,
    tolerance: Tolerance,
    observable: Observable,
) -> Anchor {
    Anchor {
        id,
        description,
        reference_value,
        tolerance,
        observable,
    }
}

use Observable::*;
use Tolerance::*;

const PCT1: Tolerance = Relative(0.01);
const PCT2: Tolerance = Relative(0.02);
const PCT15: Tolerance = Relative(0.15);

pub const ANCHORS: &[Anchor] = &[
    anchor("bunch_a_proton", "proton Coulomb-gas length in a beam bunch", 2.89e-14, PCT1, CoherenceLength),
    anchor("bunch_dp_proton", "proton momentum width in a beam bunch (eV)", 6.9e6, PCT1, MomentumWidth),
    anchor("electron_dp_bohr", "electron momentum width from the Bohr radius (eV)", 3.77e3, PCT1, MomentumWidth),
    anchor("metal_electron", "conduction electron coherence length in a metal", 1e-7, PCT1, CoherenceLength),
    anchor("proton_eloss_1GeV_low", "1 GeV proton, dE/dx = 2 GeV/m", 0.5, PCT1, CoherenceLength),
    anchor("proton_eloss_1GeV_high", "1 GeV proton, dE/dx = 1 GeV/m", 1.0, PCT1, CoherenceLength),
    anchor("proton_eloss_0p2GeV", "0.2 GeV proton energy-loss length", 0.10, PCT1, CoherenceLength),
    anchor("proton_accel_ratio_1_10", "velocity ratio 1 -> 10 GeV/c", 1.2, PCT15, LengthRatio),
    anchor("proton_accel_ratio_0p2_10", "velocity ratio 0.2 -> 10 GeV/c", 5.0, PCT15, LengthRatio),
    anchor("proton_10GeV_low", "10 GeV/c proton, lower end of band", 0.40, OrderOfMagnitude, CoherenceLength),
    anchor("proton_10GeV_high", "10 GeV/c proton, upper end of band", 1.0, OrderOfMagnitude, CoherenceLength),
    anchor("proton_strong_geometric", "strong-interaction geometric mean free path", 1.5, Factor(2.0), CoherenceLength),
    anchor("proton_rutherford_10MeV", "10 MeV proton in Fe (calibration point)", 0.1, ExactRatio, CoherenceLength),
    anchor("proton_rutherford_1GeV", "1 GeV proton in Fe", 1e3, ExactRatio, CoherenceLength),
    anchor("proton_rutherford_50keV", "50 keV proton in Fe", 2.5e-6, ExactRatio, CoherenceLength),
    anchor("proton_rutherford_1keV", "1 keV proton in Fe", 1e-9, ExactRatio, CoherenceLength),
    anchor("rutherford_ratio_50keV", "L(50 keV)/L(10 MeV)", 2.5e-5, ExactRatio, LengthRatio),
    anchor("rutherford_ratio_1keV", "L(1 keV)/L(10 MeV)", 1e-8, ExactRatio, LengthRatio),
    anchor("pion_band_low", "pion from proton, lower end of band", 0.40, OrderOfMagnitude, CoherenceLength),
    anchor("pion_band_high", "pion from proton, upper end of band", 1.0, OrderOfMagnitude, CoherenceLength),
    anchor("pion_bunch", "pion from bunch protons", 1e-14, OrderOfMagnitude, CoherenceLength),
    anchor("muon_band_low", "muon from pion, lower end of band", 0.40, OrderOfMagnitude, CoherenceLength),
    anchor("muon_band_high", "muon from pion, upper end of band", 1.0, OrderOfMagnitude, CoherenceLength),
    anchor("muon_bunch", "muon from bunch-lineage pion; contradicts the unit velocity ratio", 1e-16, Flagged, CoherenceLength),
    anchor("pion_decay_length_rest", "charged pion decay length at rest", 30.0, OrderOfMagnitude, CoherenceLength),
    anchor("neutron_decay_length", "neutron decay length as printed", 2.7e10, Flagged, CoherenceLength),
    anchor("neutron_decay_length_arith", "neutron decay length, c x 900 s", 2.7e11, PCT1, CoherenceLength),
    anchor("neutrino_eps", "neutrino velocity deficit, 0.1 eV at 1 GeV", 5e-21, PCT1, LagEpsilon),
    anchor("neutrino_lag_100m", "neutrino arrival lag over 100 m", 5e-19, PCT1, LagDistance),
    anchor("neutrino_lag_1000m", "neutrino arrival lag over 1000 m", 5e-18, PCT1, LagDistance),
    anchor("neutrino_nucleus", "neutrino packet size on a nucleus", 1e-15, PCT1, CoherenceLength),
    anchor("neutrino_electron", "neutrino packet size on an atomic electron", 1e-10, PCT1, CoherenceLength),
    anchor("inner_core_z50", "inner-shell electron size, Z = 50", 0.529e-10 / 50.0, PCT1, CoherenceLength),
    anchor("ge_abstar", "Ge effective Bohr radius, 200 a_B", 200.0 * 0.53e-10, PCT2, CoherenceLength),
    anchor("ge_abstar_printed", "Ge effective Bohr radius as printed", 100e-10, OrderOfMagnitude, CoherenceLength),
    anchor("ge_dp", "Ge momentum width (eV)", 20.0, PCT15, MomentumWidth),
    anchor("nai_dp", "NaI iodine-ion momentum width (eV)", 1e3, PCT15, MomentumWidth),
    anchor("cmb_sigma_ru_per_loglambda", "Rutherford cross section per log Lambda at 3000 K (m2)", 4.4e-17, PCT15, Cmb("sigma_ru_per_loglambda")),
    anchor("cmb_l_e_ru", "electron Rutherford mean free path at decoupling", 5.7e-3, PCT15, Cmb("l_e_ru")),
    anchor("thomson_sigma", "Thomson cross section (m2)", 0.6e-28, Relative(0.11), Cmb("sigma_th")),
    anchor("cmb_l_e_th", "electron Thomson mean free path at decoupling", 5.0, Flagged, Cmb("l_e_th")),
    anchor("cmb_l_photon_th", "photon Thomson mean free path at decoupling", 5e9, Flagged, Cmb("l_photon_th")),
    anchor("rayleigh_factor", "Rayleigh scaling (1215/3000)^4", 0.027, PCT1, Cmb("rayleigh_factor")),
    anchor("cmb_l_photon_rayleigh", "photon Rayleigh mean free path below decoupling", 0.154e13, PCT15, Cmb("l_photon_rayleigh")),
    anchor("cmb_l_h", "hydrogen mean free path, sigma_H = 1e-20 m2", 2.5e2, PCT1, Cmb("l_h")),
];

pub fn find(id: &str) -> Option<Anchor> {
    ANCHORS.iter().copied().find(|a| a.id == id)
}
