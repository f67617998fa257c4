//! Physical constants in one table.
//!
//! Defaults are CODATA 2018 and PDG values. A table can be loaded from
//! `key = value` text for sensitivity studies; unspecified keys keep their
//! defaults.

use crate::error::{Error, Result};

/// Speed of light in m/s (exact).
pub const C_M_PER_S: f64 = 299_792_458.0;
/// Elementary charge in C (exact); also J per eV.
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constants {
    /// ħc in MeV·fm.
    pub hbar_c: f64,
    /// Fine-structure constant.
    pub alpha: f64,
    /// Classical electron radius in m.
    pub r_e: f64,
    /// Bohr radius in m.
    pub a_bohr: f64,
    /// Boltzmann constant in J/K.
    pub k_b: f64,
    /// Avogadro number per mol.
    pub n_avogadro: f64,
    /// Vacuum permittivity in F/m.
    pub eps0: f64,
    /// Masses in MeV.
    pub m_e: f64,
    pub m_p: f64,
    pub m_n: f64,
    pub m_pi: f64,
    pub m_mu: f64,
    /// Mean lifetimes in s.
    pub tau_pi: f64,
    pub tau_n: f64,
}

pub const CODATA: Constants = Constants {
    hbar_c: crate::units::HBAR_C,
    alpha: 7.297_352_569_3e-3,
    r_e: 2.817_940_326_2e-15,
    a_bohr: 5.291_772_109_03e-11,
    k_b: 1.380_649e-23,
    n_avogadro: 6.022_140_76e23,
    eps0: 8.854_187_812_8e-12,
    m_e: 0.510_998_950_00,
    m_p: 938.272_088_16,
    m_n: 939.565_420_52,
    m_pi: 139.570_39,
    m_mu: 105.658_375_5,
    tau_pi: 2.6033e-8,
    tau_n: 878.4,
};

impl Default for Constants {
    fn default() -> Self {
        CODATA
    }
}

const KEYS: &[&str] = &[
    "hbar_c_MeV_fm",
    "alpha",
    "r_e_m",
    "a_bohr_m",
    "k_B_J_per_K",
    "N_A",
    "eps0_F_per_m",
    "m_e_MeV",
    "m_p_MeV",
    "m_n_MeV",
    "m_pi_MeV",
    "m_mu_MeV",
    "tau_pi_s",
    "tau_n_s",
];

impl Constants {
    /// ħc in eV·m.
    pub fn hbar_c_ev_m(&self) -> f64 {
        self.hbar_c * 1e-9
    }

    /// Electron mass in kg.
    pub fn m_e_kg(&self) -> f64 {
        self.m_e * 1e6 * ELEMENTARY_CHARGE / (C_M_PER_S * C_M_PER_S)
    }

    /// The key names accepted by [`Constants::parse`].
    pub fn keys() -> &'static [&'static str] {
        KEYS
    }

    fn slot(&mut self, key: &str) -> Option<&mut f64> {
        Some(match key {
            "hbar_c_MeV_fm" => &mut self.hbar_c,
            "alpha" => &mut self.alpha,
            "r_e_m" => &mut self.r_e,
            "a_bohr_m" => &mut self.a_bohr,
            "k_B_J_per_K" => &mut self.k_b,
            "N_A" => &mut self.n_avogadro,
            "eps0_F_per_m" => &mut self.eps0,
            "m_e_MeV" => &mut self.m_e,
            "m_p_MeV" => &mut self.m_p,
            "m_n_MeV" => &mut self.m_n,
            "m_pi_MeV" => &mut self.m_pi,
            "m_mu_MeV" => &mut self.m_mu,
            "tau_pi_s" => &mut self.tau_pi,
            "tau_n_s" => &mut self.tau_n,
            _ => return None,
        })
    }

    /// Parses `key = value` lines over the CODATA defaults. `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut out = CODATA;
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |field: &str, message: &str| Error::Parse {
                line: i + 1,
                field: field.to_string(),
                message: message.to_string(),
            };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(line, "expected `key = value`"))?;
            let key = key.trim();
            let value: f64 = value
                .trim()
                .parse()
                .map_err(|_| err(key, "not a number"))?;
            if !value.is_finite() || value <= 0.0 {
                return Err(err(key, "must be positive and finite"));
            }
            *out.slot(key).ok_or_else(|| err(key, "unknown constant"))? = value;
        }
        Ok(out)
    }

    /// Serializes to the format read by [`Constants::parse`].
    pub fn to_text(&self) -> String {
        let mut copy = *self;
        KEYS.iter()
            .map(|k| format!("{k} = {:e}\n", *copy.slot(k).unwrap()))
            .collect()
    }

    /// Loads the table named by `WAVEPACK_CONSTANTS`, or the defaults.
    pub fn from_env() -> Result<Self> {
        match std::env::var_os("WAVEPACK_CONSTANTS") {
            None => Ok(CODATA),
            Some(path) => {
                let text = std::fs::read_to_string(&path).map_err(|e| Error::Validation {
                    field: "WAVEPACK_CONSTANTS".into(),
                    message: format!("{}: {e}", path.to_string_lossy()),
                })?;
                Self::parse(&text)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        let c = Constants::parse(&CODATA.to_text()).unwrap();
        assert_eq!(c, CODATA);
    }

    #[test]
    fn overrides_and_comments() {
        let c = Constants::parse("# rounded\nhbar_c_MeV_fm = 200 # MeV fm\n\n").unwrap();
        assert_eq!(c.hbar_c, 200.0);
        assert_eq!(c.m_p, CODATA.m_p);
    }

    #[test]
    fn rejects_unknown_and_bad_values() {
        assert!(matches!(
            Constants::parse("x = 1"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(Constants::parse("alpha = abc").is_err());
        assert!(Constants::parse("\nalpha = -1").is_err());
        assert!(Constants::parse("alpha").is_err());
    }

    #[test]
    fn derived_values() {
        assert!((CODATA.m_e_kg() / 9.109_383_701_5e-31 - 1.0).abs() < 1e-9);
        let r_e = CODATA.alpha * CODATA.hbar_c / CODATA.m_e * 1e-15;
        assert!((r_e / CODATA.r_e - 1.0).abs() < 1e-9);
        let a0 = CODATA.hbar_c / (CODATA.alpha * CODATA.m_e) * 1e-15;
        assert!((a0 / CODATA.a_bohr - 1.0).abs() < 1e-9);
    }
}
