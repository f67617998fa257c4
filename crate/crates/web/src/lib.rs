//! WebAssembly bindings for the demo page in `www/`.
//!
//! Inputs use SI with energies in eV, matching the CLI.

use wasm_bindgen::prelude::*;
use wavepack::constants::Constants;
use wavepack::interactions;
use wavepack::propagation::spread_state;
use wavepack::units::{ev_to_mev, fm_to_m, m2_to_fm2, m_to_fm, s_to_fm};
use wavepack::{packets, Dispersion, Vec3, WavePacket};

fn js(e: wavepack::Error) -> JsValue {
    JsValue::from_str(&e.to_string())
}

fn dispersion(mass: f64) -> Dispersion {
    if mass == 0.0 {
        Dispersion::Massless
    } else {
        Dispersion::Relativistic
    }
}

/// |⟨ψ₂|ψ₁⟩|² at t = 0 for two packets along z that differ in momentum,
/// position and width.
#[wasm_bindgen]
pub fn overlap_probability(
    mass_ev: f64,
    p1_ev: f64,
    p2_ev: f64,
    sigma1_m2: f64,
    sigma2_m2: f64,
    separation_m: f64,
) -> Result<f64, JsValue> {
    let m = ev_to_mev(mass_ev);
    let make = |p: f64, s: f64, x: f64| {
        WavePacket::new(
            Vec3::new(0.0, 0.0, ev_to_mev(p)),
            Vec3::new(0.0, 0.0, m_to_fm(x)),
            0.0,
            m2_to_fm2(s),
            m,
            dispersion(m),
        )
    };
    let a = make(p1_ev, sigma1_m2, 0.0).map_err(js)?;
    let b = make(p2_ev, sigma2_m2, separation_m).map_err(js)?;
    Ok(packets::overlap(&a, &b, 0.0).map_err(js)?.probability)
}

/// Flattened `[t, w_L, w_T, ...]` triples (s, m, m) on a log grid ending at `t_end_s`.
#[wasm_bindgen]
pub fn spreading_curve(mass_ev: f64, sigma_m2: f64, p_ev: f64, t_end_s: f64, points: usize) -> Result<Vec<f64>, JsValue> {
    if !(t_end_s > 0.0) || points < 2 {
        return Err(JsValue::from_str("need t_end > 0 and at least two points"));
    }
    let m = ev_to_mev(mass_ev);
    let packet = WavePacket::new(
        Vec3::new(0.0, 0.0, ev_to_mev(p_ev)),
        Vec3::ZERO,
        0.0,
        m2_to_fm2(sigma_m2),
        m,
        dispersion(m),
    )
    .map_err(js)?;
    let mut out = Vec::with_capacity(3 * points);
    for i in 0..points {
        let t = t_end_s * 10f64.powf(-6.0 * (points - 1 - i) as f64 / (points - 1) as f64);
        let s = spread_state(&packet, s_to_fm(t)).map_err(js)?;
        out.extend([t, fm_to_m(s.longitudinal_width), fm_to_m(s.transverse_width)]);
    }
    Ok(out)
}

/// `[L, ħc/L]` in m and eV for cross section σ (m²) and density n (m⁻³).
#[wasm_bindgen]
pub fn mean_free_path(sigma_m2: f64, density_m3: f64) -> Result<Vec<f64>, JsValue> {
    let l = interactions::mean_free_path_raw(sigma_m2, density_m3).map_err(js)?;
    let size = interactions::packet_size_from_mfp(&Constants::default(), l).map_err(js)?;
    Ok(vec![size.width, size.momentum_width])
}
