//! Unit conversions and the shared `value+suffix` quantity parser.
//!
//! Internal formulas use natural units (ħ = c = 1) with energies in MeV and
//! lengths in fm. SI values are converted at the boundary.

use crate::constants::{C_M_PER_S, ELEMENTARY_CHARGE};
use crate::error::{Error, Result};

/// ħc in MeV·fm, the single conversion constant of the packet algebra.
pub const HBAR_C: f64 = 197.326_980_4;
pub const FM_PER_M: f64 = 1e15;
pub const EV_PER_MEV: f64 = 1e6;

pub fn m_to_fm(x: f64) -> f64 {
    x * FM_PER_M
}

pub fn fm_to_m(x: f64) -> f64 {
    x / FM_PER_M
}

pub fn m2_to_fm2(x: f64) -> f64 {
    x * FM_PER_M * FM_PER_M
}

pub fn fm2_to_m2(x: f64) -> f64 {
    x / (FM_PER_M * FM_PER_M)
}

pub fn ev_to_mev(x: f64) -> f64 {
    x / EV_PER_MEV
}

pub fn mev_to_ev(x: f64) -> f64 {
    x * EV_PER_MEV
}

/// Seconds to fm of light travel (c = 1).
pub fn s_to_fm(t: f64) -> f64 {
    t * C_M_PER_S * FM_PER_M
}

pub fn fm_to_s(t: f64) -> f64 {
    t / (C_M_PER_S * FM_PER_M)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dimension {
    Dimensionless,
    Energy,
    Length,
    Time,
    Area,
    Temperature,
    NumberDensity,
    EnergyPerLength,
    Velocity,
    Angle,
    Volume,
}

impl Dimension {
    /// The SI unit a parsed value is expressed in.
    pub fn si_unit(self) -> &'static str {
        match self {
            Dimension::Dimensionless => "",
            Dimension::Energy => "eV",
            Dimension::Length => "m",
            Dimension::Time => "s",
            Dimension::Area => "m2",
            Dimension::Temperature => "K",
            Dimension::NumberDensity => "m-3",
            Dimension::EnergyPerLength => "eV/m",
            Dimension::Velocity => "c",
            Dimension::Angle => "rad",
            Dimension::Volume => "m3",
        }
    }
}

/// A parsed value in SI base units (eV for energy, β for velocity).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quantity {
    pub value: f64,
    pub dimension: Dimension,
}

fn unit_factor(unit: &str) -> Option<(Dimension, f64)> {
    use Dimension::*;
    let unit = unit.strip_suffix("/c").unwrap_or(unit);
    Some(match unit {
        "" => (Dimensionless, 1.0),
        "meV" => (Energy, 1e-3),
        "eV" => (Energy, 1.0),
        "keV" => (Energy, 1e3),
        "MeV" => (Energy, 1e6),
        "GeV" => (Energy, 1e9),
        "TeV" => (Energy, 1e12),
        "J" => (Energy, 1.0 / ELEMENTARY_CHARGE),
        "fm" => (Length, 1e-15),
        "pm" => (Length, 1e-12),
        "Å" | "A" => (Length, 1e-10),
        "nm" => (Length, 1e-9),
        "um" | "μm" => (Length, 1e-6),
        "mm" => (Length, 1e-3),
        "cm" => (Length, 1e-2),
        "m" => (Length, 1.0),
        "km" => (Length, 1e3),
        "fs" => (Time, 1e-15),
        "ps" => (Time, 1e-12),
        "ns" => (Time, 1e-9),
        "us" | "μs" => (Time, 1e-6),
        "ms" => (Time, 1e-3),
        "s" => (Time, 1.0),
        "min" => (Time, 60.0),
        "h" => (Time, 3600.0),
        "fm2" | "fm^2" => (Area, 1e-30),
        "cm2" | "cm^2" => (Area, 1e-4),
        "m2" | "m^2" => (Area, 1.0),
        "nb" => (Area, 1e-37),
        "ub" | "μb" => (Area, 1e-34),
        "mb" => (Area, 1e-31),
        "b" => (Area, 1e-28),
        "Mb" => (Area, 1e-22),
        "K" => (Temperature, 1.0),
        "m-3" | "m^-3" | "/m3" | "/m^3" => (NumberDensity, 1.0),
        "cm-3" | "cm^-3" | "/cm3" | "/cm^3" => (NumberDensity, 1e6),
        "eV/m" => (EnergyPerLength, 1.0),
        "keV/m" => (EnergyPerLength, 1e3),
        "MeV/m" => (EnergyPerLength, 1e6),
        "GeV/m" => (EnergyPerLength, 1e9),
        "MeV/cm" => (EnergyPerLength, 1e8),
        "GeV/cm" => (EnergyPerLength, 1e11),
        "c" => (Velocity, 1.0),
        "m/s" => (Velocity, 1.0 / C_M_PER_S),
        "rad" => (Angle, 1.0),
        "deg" => (Angle, std::f64::consts::PI / 180.0),
        "m3" | "m^3" => (Volume, 1.0),
        "cm3" | "cm^3" => (Volume, 1e-6),
        "A3" | "Å3" | "A^3" => (Volume, 1e-30),
        _ => return None,
    })
}

/// Length of the leading floating-point literal in `s`.
fn number_prefix_len(s: &str) -> usize {
    let b = s.as_bytes();
    let mut i = 0;
    if i < b.len() && (b[i] == b'+' || b[i] == b'-') {
        i += 1;
    }
    let digits_start = i;
    while i < b.len() && (b[i].is_ascii_digit() || b[i] == b'.') {
        i += 1;
    }
    if i == digits_start {
        return 0;
    }
    if i < b.len() && (b[i] == b'e' || b[i] == b'E') {
        let mut j = i + 1;
        if j < b.len() && (b[j] == b'+' || b[j] == b'-') {
            j += 1;
        }
        let exp_start = j;
        while j < b.len() && b[j].is_ascii_digit() {
            j += 1;
        }
        if j > exp_start {
            i = j;
        }
    }
    i
}

fn bad(token: &str, message: impl Into<String>) -> Error {
    Error::Validation {
        field: token.to_string(),
        message: message.into(),
    }
}

/// Parses `10MeV`, `1e-9 m`, `3000K`, or a bare number (dimensionless).
pub fn parse_quantity(token: &str) -> Result<Quantity> {
    let token = token.trim();
    let n = number_prefix_len(token);
    if n == 0 {
        return Err(bad(token, "expected a number"));
    }
    let value: f64 = token[..n]
        .parse()
        .map_err(|_| bad(token, "malformed number"))?;
    let unit = token[n..].trim();
    let (dimension, factor) =
        unit_factor(unit).ok_or_else(|| bad(token, format!("unknown unit suffix `{unit}`")))?;
    if !value.is_finite() {
        return Err(bad(token, "value is not finite"));
    }
    Ok(Quantity {
        value: value * factor,
        dimension,
    })
}

/// Parses a quantity of the given dimension, in SI base units.
///
/// A bare number is rejected as ambiguous unless it is zero.
pub fn parse_as(token: &str, dimension: Dimension) -> Result<f64> {
    let q = parse_quantity(token)?;
    if q.dimension == dimension {
        return Ok(q.value);
    }
    if q.dimension == Dimension::Dimensionless && q.value == 0.0 {
        return Ok(0.0);
    }
    if q.dimension == Dimension::Dimensionless {
        return Err(bad(
            token.trim(),
            format!("ambiguous bare number; add a unit such as `{}`", dimension.si_unit()),
        ));
    }
    Err(bad(
        token.trim(),
        format!("expected {dimension:?}, found {:?}", q.dimension),
    ))
}

/// Like [`parse_as`], but a bare number is read in `bare_unit`.
pub fn parse_as_or_bare(token: &str, dimension: Dimension, bare_unit: &str) -> Result<f64> {
    let q = parse_quantity(token)?;
    if q.dimension == Dimension::Dimensionless {
        let (d, f) = unit_factor(bare_unit).expect("known unit");
        debug_assert_eq!(d, dimension);
        return Ok(q.value * f);
    }
    parse_as(token, dimension)
}

/// Parses a three-vector `x,y,z` in the given dimension. A unit on the last
/// component alone applies to all three (`0,0,1MeV`).
pub fn parse_vector(token: &str, dimension: Dimension) -> Result<[f64; 3]> {
    let parts: Vec<&str> = token.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(bad(token, "expected three comma-separated components"));
    }
    let last = parts[2];
    let unit = &last[number_prefix_len(last)..];
    let mut out = [0.0; 3];
    for (slot, part) in out.iter_mut().zip(&parts) {
        let own_unit = number_prefix_len(part) < part.len();
        *slot = if own_unit || unit.is_empty() {
            parse_as(part, dimension)?
        } else {
            parse_as(&format!("{part}{unit}"), dimension)?
        };
    }
    Ok(out)
}

/// Formats with six significant digits in scientific notation.
pub fn fmt_sig(x: f64) -> String {
    format!("{x:.5e}")
}
